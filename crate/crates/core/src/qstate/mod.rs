//! States: subsystem layout, pure states, density matrices, Schmidt
//! decomposition, mixtures and the named state families.

mod families;
mod mixture;
mod sample;

pub use families::{example1_mixture, horodecki};
pub use mixture::{mix, Component, MixtureSpec};
pub use sample::{
    haar_unitary, haar_vector, sample_mixture, sample_product, sample_pure_schmidt_n,
    sample_weights, MU_SQ_FLOOR, WEIGHT_FLOOR,
};

use crate::error::{Error, Result};
use crate::linalg::{self, hermitian_eig, svd, ComplexMatrix, C64};

/// Relative threshold for counting a Schmidt coefficient as nonzero.
pub const SCHMIDT_TOL: f64 = 1e-9;

/// Renormalizations larger than this set the warning flag in [`make_pure`].
const RENORM_WARN: f64 = 1e-8;

/// Subsystem dimensions, each at least 2, at least two subsystems.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct DimsSpec {
    dims: Vec<usize>,
}

impl DimsSpec {
    pub fn new(dims: Vec<usize>) -> Result<Self> {
        if dims.len() < 2 {
            return Err(Error::InvalidDims(format!(
                "need at least two subsystems, got {}",
                dims.len()
            )));
        }
        if let Some(d) = dims.iter().find(|&&d| d < 2) {
            return Err(Error::InvalidDims(format!("subsystem dimension {d} < 2")));
        }
        Ok(Self { dims })
    }

    pub fn bipartite(d_a: usize, d_b: usize) -> Result<Self> {
        Self::new(vec![d_a, d_b])
    }

    pub fn dims(&self) -> &[usize] {
        &self.dims
    }

    pub fn subsystems(&self) -> usize {
        self.dims.len()
    }

    /// Total Hilbert-space dimension, the product of subsystem dimensions.
    pub fn total(&self) -> usize {
        self.dims.iter().product()
    }

    /// Mixed-radix digits of a flat index, leftmost subsystem first.
    pub fn digits(&self, mut index: usize) -> Vec<usize> {
        let mut out = vec![0; self.dims.len()];
        for (slot, &d) in out.iter_mut().zip(&self.dims).rev() {
            *slot = index % d;
            index /= d;
        }
        out
    }

    pub fn index(&self, digits: &[usize]) -> usize {
        digits
            .iter()
            .zip(&self.dims)
            .fold(0, |acc, (&i, &d)| acc * d + i)
    }
}

/// A cut of the subsystems into `Y` and its complement.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Bipartition {
    dims: DimsSpec,
    y: Vec<usize>,
    ybar: Vec<usize>,
}

impl Bipartition {
    /// `y` must be a nonempty proper subset of the subsystem indices.
    pub fn new(dims: DimsSpec, y: &[usize]) -> Result<Self> {
        let m = dims.subsystems();
        let mut ys = y.to_vec();
        ys.sort_unstable();
        ys.dedup();
        if ys.len() != y.len() {
            return Err(Error::InvalidPartition(format!(
                "repeated subsystem in {y:?}"
            )));
        }
        if let Some(&bad) = ys.iter().find(|&&s| s >= m) {
            return Err(Error::InvalidPartition(format!(
                "subsystem {bad} out of range for {m} subsystems"
            )));
        }
        if ys.is_empty() || ys.len() == m {
            return Err(Error::InvalidPartition(format!(
                "{y:?} is not a nonempty proper subset of {m} subsystems"
            )));
        }
        let ybar = (0..m).filter(|s| !ys.contains(s)).collect();
        Ok(Self { dims, y: ys, ybar })
    }

    /// The first-subsystem cut `Y = {0}`.
    pub fn first(dims: DimsSpec) -> Self {
        Self::new(dims, &[0]).expect("{0} is a proper subset when m >= 2")
    }

    pub fn dims(&self) -> &DimsSpec {
        &self.dims
    }

    pub fn y(&self) -> &[usize] {
        &self.y
    }

    pub fn ybar(&self) -> &[usize] {
        &self.ybar
    }

    pub fn dim_y(&self) -> usize {
        self.y.iter().map(|&s| self.dims.dims[s]).product()
    }

    pub fn dim_ybar(&self) -> usize {
        self.ybar.iter().map(|&s| self.dims.dims[s]).product()
    }

    /// The complementary cut `Ybar | Y`.
    pub fn complement(&self) -> Self {
        Self {
            dims: self.dims.clone(),
            y: self.ybar.clone(),
            ybar: self.y.clone(),
        }
    }

    /// Flat index -> (index within the Y factor, index within the Ybar factor).
    pub fn split(&self, index: usize) -> (usize, usize) {
        let digits = self.dims.digits(index);
        (
            self.side_index(&digits, &self.y),
            self.side_index(&digits, &self.ybar),
        )
    }

    /// Inverse of [`split`](Self::split).
    pub fn join(&self, iy: usize, iybar: usize) -> usize {
        let mut digits = vec![0; self.dims.subsystems()];
        self.scatter(iy, &self.y, &mut digits);
        self.scatter(iybar, &self.ybar, &mut digits);
        self.dims.index(&digits)
    }

    /// `split` for every flat index, in order.
    pub fn split_table(&self) -> Vec<(usize, usize)> {
        (0..self.dims.total()).map(|i| self.split(i)).collect()
    }

    fn side_index(&self, digits: &[usize], side: &[usize]) -> usize {
        side.iter()
            .fold(0, |acc, &s| acc * self.dims.dims[s] + digits[s])
    }

    fn scatter(&self, mut index: usize, side: &[usize], digits: &mut [usize]) {
        for &s in side.iter().rev() {
            let d = self.dims.dims[s];
            digits[s] = index % d;
            index /= d;
        }
    }
}

/// Unit-norm state vector over `dims`.
#[derive(Debug, Clone, PartialEq)]
pub struct PureState {
    dims: DimsSpec,
    amplitudes: Vec<C64>,
}

impl PureState {
    /// Normalizing constructor; see [`make_pure`] for the renormalization flag.
    pub fn new(amplitudes: Vec<C64>, dims: DimsSpec) -> Result<Self> {
        make_pure(amplitudes, dims).map(|(s, _)| s)
    }

    pub fn dims(&self) -> &DimsSpec {
        &self.dims
    }

    pub fn amplitudes(&self) -> &[C64] {
        &self.amplitudes
    }

    /// Amplitudes arranged as a `dim_y x dim_ybar` matrix.
    pub fn coefficient_matrix(&self, part: &Bipartition) -> ComplexMatrix {
        let mut m = ComplexMatrix::zeros(part.dim_y(), part.dim_ybar());
        for (i, &a) in self.amplitudes.iter().enumerate() {
            let (iy, ib) = part.split(i);
            m[(iy, ib)] = a;
        }
        m
    }

    /// The vector obtained by complex-conjugating the `Y` factor of a product
    /// state. For a product `|a> (x) |b>` across `part`,
    /// `(|psi><psi|)^{T_Y} = |a* (x) b><a* (x) b|`.
    pub fn conjugate_y_factor(&self, part: &Bipartition) -> Result<Vec<C64>> {
        let sd = schmidt_decompose(self, part)?;
        if sd.schmidt_number != 1 {
            return Err(Error::NotProduct);
        }
        let left: Vec<C64> = sd.left[0].iter().map(|z| z.conj()).collect();
        Ok(product_amplitudes(
            &left,
            &sd.right[0],
            part,
            sd.coefficients[0],
        ))
    }
}

/// Normalizes `amps`; the flag reports whether the input norm differed from 1
/// by more than `1e-8`.
pub fn make_pure(amps: Vec<C64>, dims: DimsSpec) -> Result<(PureState, bool)> {
    if amps.len() != dims.total() {
        return Err(Error::DimensionMismatch {
            expected: dims.total(),
            found: amps.len(),
        });
    }
    if amps.iter().any(|z| !z.re.is_finite() || !z.im.is_finite()) {
        return Err(Error::NonFinite);
    }
    let n = linalg::norm(&amps);
    if n == 0.0 {
        return Err(Error::ZeroVector);
    }
    let warn = (n - 1.0).abs() > RENORM_WARN;
    let amplitudes = amps.into_iter().map(|z| z / n).collect();
    Ok((PureState { dims, amplitudes }, warn))
}

fn product_amplitudes(fy: &[C64], fb: &[C64], part: &Bipartition, scale: f64) -> Vec<C64> {
    let mut amps = vec![C64::new(0.0, 0.0); part.dims().total()];
    for (iy, &a) in fy.iter().enumerate() {
        for (ib, &b) in fb.iter().enumerate() {
            amps[part.join(iy, ib)] = a * b * scale;
        }
    }
    amps
}

/// `factor_y (x) factor_ybar`, placed according to the cut.
pub fn product_pure(
    factor_y: &[C64],
    factor_ybar: &[C64],
    part: &Bipartition,
) -> Result<PureState> {
    if factor_y.len() != part.dim_y() {
        return Err(Error::DimensionMismatch {
            expected: part.dim_y(),
            found: factor_y.len(),
        });
    }
    if factor_ybar.len() != part.dim_ybar() {
        return Err(Error::DimensionMismatch {
            expected: part.dim_ybar(),
            found: factor_ybar.len(),
        });
    }
    PureState::new(
        product_amplitudes(factor_y, factor_ybar, part, 1.0),
        part.dims().clone(),
    )
}

/// `psi = sum_i mu_i |left_i> (x) |right_i>` with `mu` descending.
#[derive(Debug, Clone)]
pub struct SchmidtDecomposition {
    pub coefficients: Vec<f64>,
    pub left: Vec<Vec<C64>>,
    pub right: Vec<Vec<C64>>,
    pub schmidt_number: usize,
}

impl SchmidtDecomposition {
    pub fn reassemble(&self, part: &Bipartition) -> Vec<C64> {
        let mut amps = vec![C64::new(0.0, 0.0); part.dims().total()];
        for ((mu, l), r) in self.coefficients.iter().zip(&self.left).zip(&self.right) {
            let term = product_amplitudes(l, r, part, *mu);
            for (a, t) in amps.iter_mut().zip(term) {
                *a += t;
            }
        }
        amps
    }
}

/// Schmidt form across `part`, keeping coefficients above `SCHMIDT_TOL * mu_1`.
pub fn schmidt_decompose(psi: &PureState, part: &Bipartition) -> Result<SchmidtDecomposition> {
    if psi.dims() != part.dims() {
        return Err(Error::DimensionMismatch {
            expected: part.dims().total(),
            found: psi.dims().total(),
        });
    }
    // M = sum s u v^dagger  =>  psi = sum s u (x) conj(v)
    let dec = svd(&psi.coefficient_matrix(part))?;
    let n = dec.rank(SCHMIDT_TOL);
    Ok(SchmidtDecomposition {
        coefficients: dec.singular[..n].to_vec(),
        left: (0..n).map(|k| dec.left.column(k)).collect(),
        right: (0..n)
            .map(|k| dec.right.column(k).iter().map(|z| z.conj()).collect())
            .collect(),
        schmidt_number: n,
    })
}

/// Count of Schmidt coefficients above `tol * mu_1`.
pub fn schmidt_number(psi: &PureState, part: &Bipartition, tol: f64) -> Result<usize> {
    Ok(svd(&psi.coefficient_matrix(part))?.rank(tol))
}

/// Hermitian, unit-trace, positive semidefinite matrix over `dims`.
#[derive(Debug, Clone, PartialEq)]
pub struct DensityMatrix {
    dims: DimsSpec,
    matrix: ComplexMatrix,
}

impl DensityMatrix {
    /// Validates Hermiticity and unit trace to `1e-12` and a minimum
    /// eigenvalue of at least `-1e-10`.
    pub fn new(matrix: ComplexMatrix, dims: DimsSpec) -> Result<Self> {
        let d = dims.total();
        if matrix.rows() != d || matrix.cols() != d {
            return Err(Error::DimensionMismatch {
                expected: d,
                found: matrix.rows(),
            });
        }
        let defect = matrix.hermiticity_defect();
        if defect > 1e-12 {
            return Err(Error::InvalidDensity(format!(
                "not Hermitian (defect {defect:.3e})"
            )));
        }
        let tr = matrix.trace();
        if (tr.re - 1.0).abs() > 1e-12 || tr.im.abs() > 1e-12 {
            return Err(Error::InvalidDensity(format!("trace {tr} != 1")));
        }
        let min = hermitian_eig(&matrix, 1e-12)?
            .eigenvalues
            .first()
            .copied()
            .unwrap_or(0.0);
        if min < -1e-10 {
            return Err(Error::InvalidDensity(format!(
                "negative eigenvalue {min:.3e}"
            )));
        }
        Ok(Self { dims, matrix })
    }

    /// Skips validation; for matrices that are states by construction.
    pub(crate) fn new_unchecked(matrix: ComplexMatrix, dims: DimsSpec) -> Self {
        Self { dims, matrix }
    }

    /// `I / D`.
    pub fn maximally_mixed(dims: DimsSpec) -> Self {
        let d = dims.total();
        Self::new_unchecked(ComplexMatrix::identity(d).scale(1.0 / d as f64), dims)
    }

    pub fn dims(&self) -> &DimsSpec {
        &self.dims
    }

    pub fn matrix(&self) -> &ComplexMatrix {
        &self.matrix
    }

    pub fn into_matrix(self) -> ComplexMatrix {
        self.matrix
    }
}

/// `|psi><psi|`.
pub fn to_density(psi: &PureState) -> DensityMatrix {
    DensityMatrix::new_unchecked(
        ComplexMatrix::outer(psi.amplitudes(), psi.amplitudes()),
        psi.dims().clone(),
    )
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::basis_vector;

    fn real(v: &[f64]) -> Vec<C64> {
        v.iter().map(|&x| C64::new(x, 0.0)).collect()
    }

    fn bell() -> PureState {
        PureState::new(
            real(&[1.0, 0.0, 0.0, 1.0]),
            DimsSpec::bipartite(2, 2).unwrap(),
        )
        .unwrap()
    }

    #[test]
    fn dims_validation() {
        assert!(DimsSpec::new(vec![2]).is_err());
        assert!(DimsSpec::new(vec![2, 1]).is_err());
        assert_eq!(DimsSpec::new(vec![2, 3, 2]).unwrap().total(), 12);
    }

    #[test]
    fn mixed_radix_round_trip() {
        let d = DimsSpec::new(vec![2, 3, 4]).unwrap();
        assert_eq!(d.digits(23), vec![1, 2, 3]);
        for i in 0..24 {
            assert_eq!(d.index(&d.digits(i)), i);
        }
    }

    #[test]
    fn partition_validation_and_split() {
        let d = DimsSpec::new(vec![2, 3, 4]).unwrap();
        assert!(Bipartition::new(d.clone(), &[]).is_err());
        assert!(Bipartition::new(d.clone(), &[0, 1, 2]).is_err());
        assert!(Bipartition::new(d.clone(), &[3]).is_err());
        assert!(Bipartition::new(d.clone(), &[1, 1]).is_err());
        let p = Bipartition::new(d, &[1]).unwrap();
        assert_eq!((p.dim_y(), p.dim_ybar()), (3, 8));
        // digits (1, 2, 3): Y index 2, Ybar index 1*4 + 3
        assert_eq!(p.split(23), (2, 7));
        for i in 0..24 {
            let (a, b) = p.split(i);
            assert_eq!(p.join(a, b), i);
        }
    }

    #[test]
    fn make_pure_examples() {
        let d = DimsSpec::bipartite(2, 2).unwrap();
        let (s, warn) = make_pure(basis_vector(4, 0), d.clone()).unwrap();
        assert!(!warn);
        assert_eq!(s.amplitudes()[0], C64::new(1.0, 0.0));
        let (_, warn) = make_pure(real(&[1.0, 0.0, 0.0, 1.0]), d.clone()).unwrap();
        assert!(warn);
        assert!(matches!(
            make_pure(vec![C64::new(0.0, 0.0); 4], d.clone()),
            Err(Error::ZeroVector)
        ));
        assert!(matches!(
            make_pure(basis_vector(3, 0), d),
            Err(Error::DimensionMismatch { .. })
        ));

        let mut amps = vec![C64::new(0.0, 0.0); 9];
        amps[0] = C64::new(0.5, 0.0);
        amps[4] = C64::new(0.8, 0.0);
        amps[8] = C64::new(0.11f64.sqrt(), 0.0);
        let (chi0, warn) = make_pure(amps, DimsSpec::bipartite(3, 3).unwrap()).unwrap();
        assert!(!warn);
        assert!((linalg::norm(chi0.amplitudes()) - 1.0).abs() < 1e-15);
    }

    #[test]
    fn product_of_basis_vectors() {
        let p = Bipartition::first(DimsSpec::bipartite(2, 2).unwrap());
        let s = product_pure(&basis_vector(2, 0), &basis_vector(2, 0), &p).unwrap();
        assert_eq!(s.amplitudes(), basis_vector(4, 0).as_slice());
        assert!(product_pure(&basis_vector(3, 0), &basis_vector(2, 0), &p).is_err());
    }

    #[test]
    fn schmidt_of_basis_and_bell() {
        let p = Bipartition::first(DimsSpec::bipartite(2, 2).unwrap());
        let s = PureState::new(basis_vector(4, 0), p.dims().clone()).unwrap();
        let sd = schmidt_decompose(&s, &p).unwrap();
        assert_eq!(sd.schmidt_number, 1);
        assert!((sd.coefficients[0] - 1.0).abs() < 1e-15);

        let sd = schmidt_decompose(&bell(), &p).unwrap();
        assert_eq!(sd.schmidt_number, 2);
        for mu in &sd.coefficients {
            assert!((mu - std::f64::consts::FRAC_1_SQRT_2).abs() < 1e-14);
        }
        let back = sd.reassemble(&p);
        let err: f64 = back
            .iter()
            .zip(bell().amplitudes())
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, f64::max);
        assert!(err < 1e-14);
    }

    #[test]
    fn bell_density_entries() {
        let rho = to_density(&bell());
        for (r, c) in [(0, 0), (0, 3), (3, 0), (3, 3)] {
            assert!((rho.matrix()[(r, c)] - C64::new(0.5, 0.0)).norm() < 1e-15);
        }
        assert!((rho.matrix()[(1, 1)]).norm() < 1e-15);
    }

    #[test]
    fn density_validation() {
        let d = DimsSpec::bipartite(2, 2).unwrap();
        assert!(DensityMatrix::new(ComplexMatrix::identity(4), d.clone()).is_err());
        assert!(DensityMatrix::new(
            ComplexMatrix::from_real_diagonal(&[1.5, -0.5, 0.0, 0.0]),
            d.clone()
        )
        .is_err());
        assert!(DensityMatrix::new(ComplexMatrix::identity(4).scale(0.25), d).is_ok());
    }

    #[test]
    fn conjugated_factor_of_product() {
        let p = Bipartition::first(DimsSpec::bipartite(2, 2).unwrap());
        let a = vec![C64::new(0.6, 0.0), C64::new(0.0, 0.8)];
        let b = vec![C64::new(0.0, 1.0), C64::new(0.0, 0.0)];
        let s = product_pure(&a, &b, &p).unwrap();
        let got = s.conjugate_y_factor(&p).unwrap();
        let want = linalg::kron(&[a[0].conj(), a[1].conj()], &b);
        // equal up to a global phase
        let ov = linalg::inner(&want, &got).norm();
        assert!((ov - 1.0).abs() < 1e-14);
        assert!(matches!(
            bell().conjugate_y_factor(&p),
            Err(Error::NotProduct)
        ));
    }
}
