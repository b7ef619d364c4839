//! Constructive NPT certificates.
//!
//! For `rho = lambda_0 rho_0 + sum_i lambda_i |chi_i><chi_i|` with product
//! `chi_i = a_i (x) b_i`, the partial transpose of each product term is the
//! projector onto `conj(a_i) (x) b_i`. Any unit vector in the negative
//! eigenspace of `rho_0^{T_Y}` that is orthogonal to all of those
//! partially-conjugated vectors therefore has a negative quadratic form on
//! `rho^{T_Y}`. When the negative eigenspace has dimension `p` and at most
//! `p - 1` product states are mixed in, such a vector always exists.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::{
    hermitian_eig, inner, norm, orthogonal_complement, orthonormal_basis, subspace_intersection,
    ComplexMatrix, SubspaceBasis, C64, DEFAULT_RANK_TOL,
};
use crate::ppt::{
    classify, effective_threshold, partial_transpose, partial_transpose_matrix,
    ClassificationReport, Label,
};
use crate::qstate::{
    mix, schmidt_decompose, schmidt_number, Bipartition, Component, DensityMatrix, MixtureSpec,
    PureState, SCHMIDT_TOL,
};

/// Witness vector `xi` with `<xi| rho^{T_Y} |xi> < -tolerance`.
#[derive(Debug, Clone, PartialEq)]
pub struct NptCertificate {
    pub xi: Vec<C64>,
    pub partition: Vec<usize>,
    /// `sum_i lambda_i * per_component[i]`.
    pub quad_value: f64,
    /// `<xi| (component_i)^{T_Y} |xi>` for every component, leading one first.
    pub per_component: Vec<f64>,
    pub tolerance: f64,
}

impl NptCertificate {
    pub fn is_valid(&self) -> bool {
        self.quad_value < -self.tolerance
    }
}

/// Which route settled the label.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum DecidedBy {
    Witness,
    Spectrum,
}

/// Result of [`certify`]: a witness certificate, or the spectral verdict
/// when no witness could be built.
#[derive(Debug, Clone)]
pub enum Certification {
    Certificate(NptCertificate),
    Spectrum(ClassificationReport),
}

impl Certification {
    pub fn label(&self) -> Label {
        match self {
            Certification::Certificate(_) => Label::Npt,
            Certification::Spectrum(r) => r.label,
        }
    }

    pub fn decided_by(&self) -> DecidedBy {
        match self {
            Certification::Certificate(_) => DecidedBy::Witness,
            Certification::Spectrum(_) => DecidedBy::Spectrum,
        }
    }

    pub fn certificate(&self) -> Option<&NptCertificate> {
        match self {
            Certification::Certificate(c) => Some(c),
            Certification::Spectrum(_) => None,
        }
    }
}

/// A witness candidate for the leading component alone.
#[derive(Debug, Clone)]
pub struct Witness {
    pub xi: Vec<C64>,
    /// `<xi| rho_0^{T_Y} |xi>`.
    pub value: f64,
}

fn negative_space_of(pt: &ComplexMatrix, tol: f64) -> Result<SubspaceBasis> {
    let eig = hermitian_eig(pt, 1e-10)?;
    let threshold = effective_threshold(pt, tol);
    let vectors = (0..eig.dim())
        .take_while(|&k| eig.eigenvalues[k] < -threshold)
        .map(|k| eig.vector(k))
        .collect();
    Ok(SubspaceBasis::from_orthonormal(pt.rows(), vectors))
}

/// Span of the eigenvectors of `rho0^{T_Y}` with eigenvalue below the
/// negativity threshold; its dimension is `p_Y`.
pub fn negative_eigenspace(
    rho0: &DensityMatrix,
    part: &Bipartition,
    tol: f64,
) -> Result<SubspaceBasis> {
    negative_space_of(&partial_transpose(rho0, part)?, tol)
}

/// `conj(a) (x) b` for every product state `a (x) b` in `separables`.
fn conjugated_products(separables: &[&PureState], part: &Bipartition) -> Result<Vec<Vec<C64>>> {
    separables
        .iter()
        .enumerate()
        .map(|(i, s)| {
            if s.dims() != part.dims() {
                return Err(Error::DimensionMismatch {
                    expected: part.dims().total(),
                    found: s.dims().total(),
                });
            }
            s.conjugate_y_factor(part)
                .map_err(|_| Error::NotSeparableInput { index: i + 1 })
        })
        .collect()
}

/// Unit vector in `V_- ∩ span{conj_Y(chi_i)}^⊥` minimizing the quadratic
/// form of `rho0^{T_Y}`, or `None` when that intersection is numerically
/// trivial.
pub fn find_witness(
    rho0: &DensityMatrix,
    separables: &[&PureState],
    part: &Bipartition,
    tol: f64,
) -> Result<Option<Witness>> {
    let pt = partial_transpose(rho0, part)?;
    let conj = conjugated_products(separables, part)?;
    witness_from_pt(&pt, &conj, tol)
}

fn witness_from_pt(pt: &ComplexMatrix, conj: &[Vec<C64>], tol: f64) -> Result<Option<Witness>> {
    let d = pt.rows();
    let v_minus = negative_space_of(pt, tol)?;
    if v_minus.is_empty() {
        return Ok(None);
    }
    let v_s = orthonormal_basis(d, conj, DEFAULT_RANK_TOL)?;
    let v_s_perp = orthogonal_complement(&v_s)?;
    let meet = subspace_intersection(&v_minus, &v_s_perp, DEFAULT_RANK_TOL)?;
    if meet.is_empty() {
        return Ok(None);
    }

    // Diagonalize rho0^{T_Y} restricted to the intersection; keep the lowest direction.
    let q = meet.as_matrix();
    let restricted = q.adjoint().matmul(&pt.matmul(&q));
    let restricted = restricted.add(&restricted.adjoint()).scale(0.5);
    let eig = hermitian_eig(&restricted, 1e-8)?;
    let xi = q.matvec(&eig.vector(0));
    // Remove the residual overlap with V_s left by the angle tolerance.
    let xi = v_s.reject(&xi);
    let n = norm(&xi);
    if n < 0.5 {
        return Ok(None);
    }
    let xi: Vec<C64> = xi.into_iter().map(|z| z / n).collect();
    let value = pt.quadratic_form(&xi);
    if value < -effective_threshold(pt, tol) {
        Ok(Some(Witness { xi, value }))
    } else {
        Ok(None)
    }
}

/// Certifies NPT of a mixture whose tail is product across `part`.
///
/// Builds the witness from the leading component and the tail; if none
/// exists (or it fails validation) falls back to the full spectrum of the
/// mixed state.
pub fn certify(spec: &MixtureSpec, part: &Bipartition, tol: f64) -> Result<Certification> {
    let lead = &spec.components()[0];
    if let Component::Pure(chi0) = lead {
        if schmidt_number(chi0, part, SCHMIDT_TOL)? < 2 {
            return Err(Error::NotEntangled);
        }
    }
    let tail = spec.tail();
    let conj = conjugated_products(&tail, part)?;
    let rho0 = lead.density();
    let pt0 = partial_transpose(&rho0, part)?;

    if let Some(w) = witness_from_pt(&pt0, &conj, tol)? {
        let mut per_component = Vec::with_capacity(tail.len() + 1);
        per_component.push(pt0.quadratic_form(&w.xi));
        for chi in &tail {
            let proj = ComplexMatrix::outer(chi.amplitudes(), chi.amplitudes());
            per_component.push(partial_transpose_matrix(&proj, part)?.quadratic_form(&w.xi));
        }
        let quad_value = spec
            .weights()
            .iter()
            .zip(&per_component)
            .map(|(l, v)| l * v)
            .sum();
        let cert = NptCertificate {
            xi: w.xi,
            partition: part.y().to_vec(),
            quad_value,
            per_component,
            tolerance: tol,
        };
        let tail_ok = cert.per_component[1..].iter().all(|v| v.abs() <= tol);
        if cert.is_valid() && cert.per_component[0] < 0.0 && tail_ok {
            return Ok(Certification::Certificate(cert));
        }
    }
    Ok(Certification::Spectrum(classify(&mix(spec), part, tol)?))
}

/// Local rotation and two-level projection that bring a Schmidt-rank-2
/// state to `mu1|00> + mu2|11>`; the product state becomes
/// `(a|0> + b|1>) (x) (c|0> + d|1>)` after projection.
#[derive(Debug, Clone)]
pub struct Theorem1Reduction {
    pub mu1: f64,
    pub mu2: f64,
    pub a: C64,
    pub b: C64,
    pub c: C64,
    pub d: C64,
    /// Rotation on the `Y` factor, `U left_k = e_k`.
    pub u: ComplexMatrix,
    /// Rotation on the `Ybar` factor, `V right_k = e_k`.
    pub v: ComplexMatrix,
    part: Bipartition,
    chi0: PureState,
    chi1: PureState,
}

/// Unitary whose first rows are the conjugated frame vectors.
fn frame_rotation(frame: &[Vec<C64>], dim: usize) -> Result<ComplexMatrix> {
    let span = orthonormal_basis(dim, frame, DEFAULT_RANK_TOL)?;
    let rest = orthogonal_complement(&span)?;
    let rows: Vec<&Vec<C64>> = frame.iter().chain(rest.vectors()).collect();
    Ok(ComplexMatrix::from_fn(dim, dim, |r, c| rows[r][c].conj()))
}

pub fn theorem1_reduce(
    chi0: &PureState,
    chi1: &PureState,
    part: &Bipartition,
) -> Result<Theorem1Reduction> {
    let s0 = schmidt_decompose(chi0, part)?;
    if s0.schmidt_number != 2 {
        return Err(Error::WrongSchmidtNumber {
            expected: 2,
            found: s0.schmidt_number,
        });
    }
    let s1 = schmidt_decompose(chi1, part)?;
    if s1.schmidt_number != 1 {
        return Err(Error::NotProduct);
    }
    let u = frame_rotation(&s0.left, part.dim_y())?;
    let v = frame_rotation(&s0.right, part.dim_ybar())?;
    let ua = u.matvec(&s1.left[0]);
    let vb = v.matvec(&s1.right[0]);
    let m = s1.coefficients[0];
    Ok(Theorem1Reduction {
        mu1: s0.coefficients[0],
        mu2: s0.coefficients[1],
        a: ua[0] * m,
        b: ua[1] * m,
        c: vb[0],
        d: vb[1],
        u,
        v,
        part: part.clone(),
        chi0: chi0.clone(),
        chi1: chi1.clone(),
    })
}

impl Theorem1Reduction {
    /// `(U (x) V)|psi>` restricted to the leading 2x2 block, as a 4-vector
    /// indexed `2*i_Y + i_Ybar`.
    fn rotate_and_project(&self, psi: &PureState) -> Vec<C64> {
        let amps = psi.amplitudes();
        let (dy, db) = (self.part.dim_y(), self.part.dim_ybar());
        let mut out = vec![C64::new(0.0, 0.0); 4];
        for iy in 0..2 {
            for ib in 0..2 {
                let mut acc = C64::new(0.0, 0.0);
                for jy in 0..dy {
                    let uy = self.u[(iy, jy)];
                    for jb in 0..db {
                        acc += uy * self.v[(ib, jb)] * amps[self.part.join(jy, jb)];
                    }
                }
                out[2 * iy + ib] = acc;
            }
        }
        out
    }

    /// `(P (x) P)(U (x) V) rho (U (x) V)^dagger (P (x) P)` on the 2x2 block for
    /// `rho = lambda0 |chi0><chi0| + lambda1 |chi1><chi1|`.
    pub fn rho_tilde(&self, lambda0: f64, lambda1: f64) -> ComplexMatrix {
        let t0 = self.rotate_and_project(&self.chi0);
        let t1 = self.rotate_and_project(&self.chi1);
        ComplexMatrix::outer(&t0, &t0)
            .scale(lambda0)
            .add(&ComplexMatrix::outer(&t1, &t1).scale(lambda1))
    }

    /// The same block rebuilt from `mu1, mu2, a, b, c, d` alone.
    pub fn rho_tilde_from_coefficients(&self, lambda0: f64, lambda1: f64) -> ComplexMatrix {
        let zero = C64::new(0.0, 0.0);
        let t0 = [C64::new(self.mu1, 0.0), zero, zero, C64::new(self.mu2, 0.0)];
        let t1 = [
            self.a * self.c,
            self.a * self.d,
            self.b * self.c,
            self.b * self.d,
        ];
        ComplexMatrix::outer(&t0, &t0)
            .scale(lambda0)
            .add(&ComplexMatrix::outer(&t1, &t1).scale(lambda1))
    }

    /// Numeric determinant of the partial transpose of [`rho_tilde`](Self::rho_tilde).
    pub fn numeric_det(&self, lambda0: f64, lambda1: f64) -> f64 {
        let qubits = Bipartition::first(crate::qstate::DimsSpec::bipartite(2, 2).expect("2x2"));
        partial_transpose_matrix(&self.rho_tilde(lambda0, lambda1), &qubits)
            .expect("4x4 block")
            .determinant()
            .re
    }
}

/// `-l0^4 mu1^4 mu2^4 - l1 l0^3 mu1^2 mu2^2 |mu1 b d + mu2 a c|^2`, the
/// determinant of the projected block's partial transpose.
pub fn theorem1_det(red: &Theorem1Reduction, lambda0: f64, lambda1: f64) -> f64 {
    let (m1, m2) = (red.mu1, red.mu2);
    let m12 = m1 * m1 * m2 * m2;
    let cross = (red.b * red.d * m1 + red.a * red.c * m2).norm_sqr();
    -lambda0.powi(4) * m12 * m12 - lambda1 * lambda0.powi(3) * m12 * cross
}

/// Largest `|<xi| conj(a_i) (x) b_i>|` over product states `a_i (x) b_i`.
///
/// Its square is `<xi| (|chi_i><chi_i|)^{T_Y} |xi>`.
pub fn max_separable_overlap(xi: &[C64], states: &[&PureState], part: &Bipartition) -> Result<f64> {
    Ok(conjugated_products(states, part)?
        .iter()
        .map(|v| inner(xi, v).norm())
        .fold(0.0, f64::max))
}
