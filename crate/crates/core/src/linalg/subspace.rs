use super::{hermitian_eig, inner, svd, ComplexMatrix, C64};
use crate::error::{Error, Result};

/// Relative threshold for numerical rank and for accepting intersection directions.
pub const DEFAULT_RANK_TOL: f64 = 1e-9;

/// Orthonormal basis of a subspace of `C^ambient_dim`.
#[derive(Debug, Clone)]
pub struct SubspaceBasis {
    ambient_dim: usize,
    vectors: Vec<Vec<C64>>,
}

impl SubspaceBasis {
    /// Wraps vectors the caller guarantees to be orthonormal.
    pub(crate) fn from_orthonormal(ambient_dim: usize, vectors: Vec<Vec<C64>>) -> Self {
        debug_assert!(vectors.iter().all(|v| v.len() == ambient_dim));
        Self {
            ambient_dim,
            vectors,
        }
    }

    pub fn empty(ambient_dim: usize) -> Self {
        Self::from_orthonormal(ambient_dim, Vec::new())
    }

    pub fn ambient_dim(&self) -> usize {
        self.ambient_dim
    }

    pub fn dim(&self) -> usize {
        self.vectors.len()
    }

    pub fn is_empty(&self) -> bool {
        self.vectors.is_empty()
    }

    pub fn vectors(&self) -> &[Vec<C64>] {
        &self.vectors
    }

    /// Basis vectors as the columns of an `ambient_dim x dim` matrix.
    pub fn as_matrix(&self) -> ComplexMatrix {
        ComplexMatrix::from_columns(self.ambient_dim, &self.vectors)
    }

    /// Orthogonal projector `sum_k |b_k><b_k|`.
    pub fn projector(&self) -> ComplexMatrix {
        let mut p = ComplexMatrix::zeros(self.ambient_dim, self.ambient_dim);
        for b in &self.vectors {
            p = p.add(&ComplexMatrix::outer(b, b));
        }
        p
    }

    /// Component of `v` orthogonal to this subspace.
    pub fn reject(&self, v: &[C64]) -> Vec<C64> {
        let mut out = v.to_vec();
        for b in &self.vectors {
            let proj = inner(b, &out);
            super::axpy(&mut out, -proj, b);
        }
        out
    }

    /// Largest `|<a|b>|` between basis vectors of two subspaces.
    pub fn max_cross_overlap(&self, other: &Self) -> f64 {
        let mut worst = 0.0f64;
        for a in &self.vectors {
            for b in &other.vectors {
                worst = worst.max(inner(a, b).norm());
            }
        }
        worst
    }
}

/// Orthonormal basis of `span(vs)`.
///
/// Numerical rank counts singular values of the stacked vectors above
/// `rank_tol` times the largest input norm. An empty list yields the
/// zero-dimensional subspace.
pub fn orthonormal_basis(
    ambient_dim: usize,
    vs: &[Vec<C64>],
    rank_tol: f64,
) -> Result<SubspaceBasis> {
    if let Some(bad) = vs.iter().find(|v| v.len() != ambient_dim) {
        return Err(Error::DimensionMismatch {
            expected: ambient_dim,
            found: bad.len(),
        });
    }
    let largest = vs.iter().map(|v| super::norm(v)).fold(0.0, f64::max);
    if vs.is_empty() || largest == 0.0 {
        return Ok(SubspaceBasis::empty(ambient_dim));
    }
    let a = ComplexMatrix::from_columns(ambient_dim, vs);
    let dec = svd(&a)?;
    let vectors = dec
        .singular
        .iter()
        .enumerate()
        .take_while(|(_, &s)| s > rank_tol * largest)
        .map(|(k, _)| dec.left.column(k))
        .collect();
    Ok(SubspaceBasis::from_orthonormal(ambient_dim, vectors))
}

/// Orthogonal complement, as the null space of the projector onto `b`.
pub fn orthogonal_complement(b: &SubspaceBasis) -> Result<SubspaceBasis> {
    let n = b.ambient_dim();
    let want = n - b.dim();
    if want == 0 {
        return Ok(SubspaceBasis::empty(n));
    }
    if b.is_empty() {
        let vectors = (0..n).map(|k| super::basis_vector(n, k)).collect();
        return Ok(SubspaceBasis::from_orthonormal(n, vectors));
    }
    let eig = hermitian_eig(&b.projector(), 1e-10)?;
    // eigenvalues ascending: the first `want` belong to the null space
    let vectors = (0..want)
        .map(|k| b.reject(&eig.vector(k)))
        .map(unit)
        .collect();
    Ok(SubspaceBasis::from_orthonormal(n, vectors))
}

/// Basis of `A ∩ B`.
///
/// Directions of `A` are accepted when they are eigenvectors of
/// `P_A P_B P_A` with eigenvalue at least `1 - tol` (squared cosine of a
/// principal angle). The eigenproblem is solved in `A`'s own coordinates,
/// i.e. on `Q_A^dagger P_B Q_A`, so the returned vectors lie exactly in
/// `span(A)`.
pub fn subspace_intersection(
    a: &SubspaceBasis,
    b: &SubspaceBasis,
    tol: f64,
) -> Result<SubspaceBasis> {
    if a.ambient_dim() != b.ambient_dim() {
        return Err(Error::DimensionMismatch {
            expected: a.ambient_dim(),
            found: b.ambient_dim(),
        });
    }
    let n = a.ambient_dim();
    if a.is_empty() || b.is_empty() {
        return Ok(SubspaceBasis::empty(n));
    }
    let qa = a.as_matrix();
    let qb = b.as_matrix();
    // Q_A^dagger Q_B Q_B^dagger Q_A
    let cross = qa.adjoint().matmul(&qb);
    let k = cross.matmul(&cross.adjoint());
    let eig = hermitian_eig(&k, 1e-10)?;
    let vectors = (0..eig.dim())
        .rev()
        .take_while(|&j| eig.eigenvalues[j] >= 1.0 - tol)
        .map(|j| unit(qa.matvec(&eig.vector(j))))
        .collect();
    Ok(SubspaceBasis::from_orthonormal(n, vectors))
}

fn unit(v: Vec<C64>) -> Vec<C64> {
    let n = super::norm(&v);
    v.into_iter().map(|z| z / n).collect()
}
