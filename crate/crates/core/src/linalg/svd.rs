use super::{axpy, hermitian_eig, inner, norm, ComplexMatrix, C64};
use crate::error::Result;

/// Singular values below this fraction of the largest are set to zero.
const ZERO_SINGULAR_TOL: f64 = 1e-13;

/// Thin singular value decomposition `M = sum_k s_k u_k v_k^dagger`.
///
/// With `k = min(rows, cols)`: `left` is `rows x k`, `right` is `cols x k`,
/// both with orthonormal columns; `singular` is descending.
#[derive(Debug, Clone)]
pub struct Svd {
    pub left: ComplexMatrix,
    pub singular: Vec<f64>,
    pub right: ComplexMatrix,
}

impl Svd {
    pub fn reconstruct(&self) -> ComplexMatrix {
        let (rows, cols) = (self.left.rows(), self.right.rows());
        ComplexMatrix::from_fn(rows, cols, |r, c| {
            self.singular
                .iter()
                .enumerate()
                .map(|(k, &s)| self.left[(r, k)] * self.right[(c, k)].conj() * s)
                .sum()
        })
    }

    /// Number of singular values above `tol * s_max`.
    pub fn rank(&self, tol: f64) -> usize {
        let smax = self.singular.first().copied().unwrap_or(0.0);
        self.singular
            .iter()
            .filter(|&&s| s > tol * smax && s > 0.0)
            .count()
    }
}

/// SVD through the Hermitian eigenproblem of the Gram matrix.
///
/// Right vectors are eigenvectors of `M^dagger M`; each singular value is
/// taken as `|M v_k|` rather than the square root of the Gram eigenvalue, so
/// exact zeros stay at rounding level instead of `sqrt(eps)`. Left vectors
/// are `M v_k / s_k`, re-orthogonalized, and completed for zero singular
/// values.
pub fn svd(m: &ComplexMatrix) -> Result<Svd> {
    if m.rows() < m.cols() {
        let t = svd_tall(&m.adjoint())?;
        return Ok(Svd {
            left: t.right,
            singular: t.singular,
            right: t.left,
        });
    }
    svd_tall(m)
}

fn svd_tall(m: &ComplexMatrix) -> Result<Svd> {
    let (rows, cols) = (m.rows(), m.cols());
    let gram = m.adjoint().matmul(m);
    let eig = hermitian_eig(&gram, 1e-8)?;

    let mut triples: Vec<(f64, Vec<C64>, Vec<C64>)> = (0..cols)
        .map(|k| {
            let v = eig.vector(k);
            let mv = m.matvec(&v);
            (norm(&mv), mv, v)
        })
        .collect();
    triples.sort_by(|a, b| b.0.total_cmp(&a.0));

    let smax = triples.first().map_or(0.0, |t| t.0);
    let mut singular = Vec::with_capacity(cols);
    let mut left: Vec<Vec<C64>> = Vec::with_capacity(cols);
    let mut right = Vec::with_capacity(cols);
    for (s, mv, v) in triples {
        let keep = s > ZERO_SINGULAR_TOL * smax && s > 0.0;
        singular.push(if keep { s } else { 0.0 });
        left.push(if keep {
            mv.iter().map(|z| z / s).collect()
        } else {
            Vec::new()
        });
        right.push(v);
    }

    // Re-orthogonalize the retained left vectors (modified Gram-Schmidt, in
    // descending singular order) and fill the slots of zeroed values.
    let mut basis: Vec<Vec<C64>> = Vec::with_capacity(cols);
    let mut next_candidate = 0usize;
    for slot in left.iter_mut() {
        if !slot.is_empty() {
            let mut u = std::mem::take(slot);
            for b in &basis {
                let proj = inner(b, &u);
                axpy(&mut u, -proj, b);
            }
            let nu = norm(&u);
            *slot = u.iter().map(|z| z / nu).collect();
        } else {
            *slot = next_completion(rows, &basis, &mut next_candidate);
        }
        basis.push(slot.clone());
    }

    Ok(Svd {
        left: ComplexMatrix::from_columns(rows, &left),
        singular,
        right: ComplexMatrix::from_columns(cols, &right),
    })
}

/// Next unit vector orthogonal to `basis`, drawn from the standard basis.
pub(super) fn next_completion(dim: usize, basis: &[Vec<C64>], next: &mut usize) -> Vec<C64> {
    while *next < dim {
        let mut u = super::basis_vector(dim, *next);
        *next += 1;
        // two passes of MGS for stability
        for _ in 0..2 {
            for b in basis {
                let proj = inner(b, &u);
                axpy(&mut u, -proj, b);
            }
        }
        let nu = norm(&u);
        if nu > 1e-6 {
            return u.iter().map(|z| z / nu).collect();
        }
    }
    unreachable!("orthogonal completion exhausted the standard basis")
}
