use super::{ComplexMatrix, C64};
use crate::error::{Error, Result};

/// Sweep cap for the cyclic Jacobi iteration.
pub const MAX_SWEEPS: usize = 100;

/// Off-diagonal Frobenius mass, relative to `||M||_F`, at which iteration stops.
const OFF_DIAGONAL_TOL: f64 = 1e-14;

/// Eigen-decomposition of a Hermitian matrix, eigenvalues ascending.
///
/// Column `k` of `eigenvectors` belongs to `eigenvalues[k]`.
#[derive(Debug, Clone)]
pub struct HermitianEig {
    pub eigenvalues: Vec<f64>,
    pub eigenvectors: ComplexMatrix,
}

impl HermitianEig {
    pub fn vector(&self, k: usize) -> Vec<C64> {
        self.eigenvectors.column(k)
    }

    pub fn dim(&self) -> usize {
        self.eigenvalues.len()
    }

    /// `V diag(lambda) V^dagger`.
    pub fn reconstruct(&self) -> ComplexMatrix {
        let v = &self.eigenvectors;
        let n = self.dim();
        ComplexMatrix::from_fn(n, n, |r, c| {
            (0..n)
                .map(|k| v[(r, k)] * v[(c, k)].conj() * self.eigenvalues[k])
                .sum()
        })
    }
}

/// Full spectrum of a Hermitian matrix by cyclic complex Jacobi rotations.
///
/// `tol` bounds the accepted Hermiticity defect: the input is rejected when
/// `max|M - M^dagger| > tol * (1 + max|M|)`. The Hermitian part is what
/// actually gets diagonalized.
pub fn hermitian_eig(m: &ComplexMatrix, tol: f64) -> Result<HermitianEig> {
    if !m.is_square() {
        return Err(Error::DimensionMismatch {
            expected: m.rows(),
            found: m.cols(),
        });
    }
    let deviation = m.hermiticity_defect();
    if !(deviation <= tol * (1.0 + m.max_abs())) {
        return Err(Error::NotHermitian { deviation });
    }

    let n = m.rows();
    let mut a = ComplexMatrix::from_fn(n, n, |r, c| {
        if r == c {
            C64::new(m[(r, r)].re, 0.0)
        } else {
            (m[(r, c)] + m[(c, r)].conj()) * 0.5
        }
    });
    let mut v = ComplexMatrix::identity(n);
    let stop = OFF_DIAGONAL_TOL * a.frobenius_norm();

    let mut converged = false;
    for _ in 0..MAX_SWEEPS {
        if off_diagonal_norm(&a) <= stop {
            converged = true;
            break;
        }
        let mut rotated = false;
        for p in 0..n {
            for q in (p + 1)..n {
                rotated |= rotate(&mut a, &mut v, p, q);
            }
        }
        if !rotated {
            converged = true;
            break;
        }
    }
    if !converged && off_diagonal_norm(&a) > stop {
        return Err(Error::NoConvergence { sweeps: MAX_SWEEPS });
    }

    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| a[(i, i)].re.total_cmp(&a[(j, j)].re));
    let eigenvalues = order.iter().map(|&i| a[(i, i)].re).collect();
    let eigenvectors = ComplexMatrix::from_fn(n, n, |r, c| v[(r, order[c])]);
    Ok(HermitianEig {
        eigenvalues,
        eigenvectors,
    })
}

fn off_diagonal_norm(a: &ComplexMatrix) -> f64 {
    let n = a.rows();
    let mut s = 0.0;
    for r in 0..n {
        for c in 0..n {
            if r != c {
                s += a[(r, c)].norm_sqr();
            }
        }
    }
    s.sqrt()
}

/// Annihilates `a[p][q]` with the unitary
/// `J = [[c, s e^{i phi}], [-s e^{-i phi}, c]]` on the (p, q) plane,
/// `A <- J^dagger A J`, `V <- V J`. Returns false when the entry is already
/// negligible.
fn rotate(a: &mut ComplexMatrix, v: &mut ComplexMatrix, p: usize, q: usize) -> bool {
    let apq = a[(p, q)];
    let r = apq.norm();
    let app = a[(p, p)].re;
    let aqq = a[(q, q)].re;
    if r == 0.0 || r <= f64::EPSILON * 0.5 * (app.abs() * aqq.abs()).sqrt() {
        return false;
    }
    let phase = apq / r;
    let tau = (aqq - app) / (2.0 * r);
    let t = if tau >= 0.0 {
        1.0 / (tau + (1.0 + tau * tau).sqrt())
    } else {
        -1.0 / (-tau + (1.0 + tau * tau).sqrt())
    };
    let c = 1.0 / (1.0 + t * t).sqrt();
    let s = t * c;
    let s_up = phase * s; // s e^{i phi}
    let s_dn = phase.conj() * s; // s e^{-i phi}

    let n = a.rows();
    // A J: columns p, q
    for k in 0..n {
        let akp = a[(k, p)];
        let akq = a[(k, q)];
        a[(k, p)] = akp * c - akq * s_dn;
        a[(k, q)] = akp * s_up + akq * c;
    }
    // J^dagger (A J): rows p, q
    for k in 0..n {
        let apk = a[(p, k)];
        let aqk = a[(q, k)];
        a[(p, k)] = apk * c - aqk * s_up;
        a[(q, k)] = apk * s_dn + aqk * c;
    }
    a[(p, q)] = C64::new(0.0, 0.0);
    a[(q, p)] = C64::new(0.0, 0.0);
    a[(p, p)] = C64::new(a[(p, p)].re, 0.0);
    a[(q, q)] = C64::new(a[(q, q)].re, 0.0);

    for k in 0..n {
        let vkp = v[(k, p)];
        let vkq = v[(k, q)];
        v[(k, p)] = vkp * c - vkq * s_dn;
        v[(k, q)] = vkp * s_up + vkq * c;
    }
    true
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::inner;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn random_hermitian(n: usize, rng: &mut impl Rng) -> ComplexMatrix {
        let g = ComplexMatrix::from_fn(n, n, |_, _| {
            C64::new(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0))
        });
        g.add(&g.adjoint()).scale(0.5)
    }

    #[test]
    fn identity_spectrum() {
        let e = hermitian_eig(&ComplexMatrix::identity(2), 1e-12).unwrap();
        assert_eq!(e.eigenvalues, vec![1.0, 1.0]);
    }

    #[test]
    fn pauli_x_spectrum() {
        let one = C64::new(1.0, 0.0);
        let zero = C64::new(0.0, 0.0);
        let x = ComplexMatrix::from_vec(2, 2, vec![zero, one, one, zero]).unwrap();
        let e = hermitian_eig(&x, 1e-12).unwrap();
        assert!((e.eigenvalues[0] + 1.0).abs() < 1e-15);
        assert!((e.eigenvalues[1] - 1.0).abs() < 1e-15);
    }

    #[test]
    fn pauli_y_has_complex_eigenvectors() {
        let y = ComplexMatrix::from_vec(
            2,
            2,
            vec![
                C64::new(0.0, 0.0),
                C64::new(0.0, -1.0),
                C64::new(0.0, 1.0),
                C64::new(0.0, 0.0),
            ],
        )
        .unwrap();
        let e = hermitian_eig(&y, 1e-12).unwrap();
        for k in 0..2 {
            let v = e.vector(k);
            let yv = y.matvec(&v);
            let resid: f64 = yv
                .iter()
                .zip(&v)
                .map(|(a, b)| (a - b * e.eigenvalues[k]).norm())
                .fold(0.0, f64::max);
            assert!(resid < 1e-14);
        }
    }

    #[test]
    fn random_reconstruction_8x8() {
        let mut rng = ChaCha8Rng::seed_from_u64(8);
        let m = random_hermitian(8, &mut rng);
        let e = hermitian_eig(&m, 1e-12).unwrap();
        assert!(e.reconstruct().sub(&m).max_abs() < 1e-12);
        assert!(e.eigenvalues.windows(2).all(|w| w[0] <= w[1]));
        for i in 0..8 {
            for j in 0..8 {
                let ip = inner(&e.vector(i), &e.vector(j));
                let expect = if i == j { 1.0 } else { 0.0 };
                assert!((ip - C64::new(expect, 0.0)).norm() < 1e-13);
            }
        }
    }

    #[test]
    fn rejects_non_hermitian() {
        let m = ComplexMatrix::from_vec(
            2,
            2,
            vec![
                C64::new(1.0, 0.0),
                C64::new(1.0, 0.0),
                C64::new(0.0, 0.0),
                C64::new(1.0, 0.0),
            ],
        )
        .unwrap();
        assert!(matches!(
            hermitian_eig(&m, 1e-10),
            Err(Error::NotHermitian { .. })
        ));
    }

    #[test]
    fn zero_and_empty_matrices() {
        let e = hermitian_eig(&ComplexMatrix::zeros(3, 3), 1e-12).unwrap();
        assert_eq!(e.eigenvalues, vec![0.0; 3]);
        let e = hermitian_eig(&ComplexMatrix::zeros(0, 0), 1e-12).unwrap();
        assert!(e.eigenvalues.is_empty());
    }

    #[test]
    fn reconstruction_bound_dim_64() {
        let mut rng = ChaCha8Rng::seed_from_u64(64);
        let m = random_hermitian(64, &mut rng);
        let e = hermitian_eig(&m, 1e-12).unwrap();
        let bound = 100.0 * f64::EPSILON * 64.0 * m.max_abs();
        assert!(e.reconstruct().sub(&m).max_abs() <= bound);
    }
}
