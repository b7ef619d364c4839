//! Partial transposition and the PPT/NPT test.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::{hermitian_eig, ComplexMatrix};
use crate::par::{map_indexed, Execution};
use crate::qstate::{Bipartition, DensityMatrix, DimsSpec};

/// Default negativity tolerance (relative to `max(1, max|rho^T_Y|)`).
pub const DEFAULT_TOL: f64 = 1e-10;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Label {
    #[serde(rename = "PPT")]
    Ppt,
    #[serde(rename = "NPT")]
    Npt,
}

impl std::fmt::Display for Label {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            Label::Ppt => "PPT",
            Label::Npt => "NPT",
        })
    }
}

/// Outcome of the partial-transpose test across one cut.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ClassificationReport {
    pub partition: Vec<usize>,
    pub min_eigenvalue: f64,
    pub negative_count: usize,
    pub label: Label,
    pub tolerance: f64,
    /// `|min_eigenvalue|` within the effective threshold; labelled PPT.
    #[serde(default, skip_serializing_if = "std::ops::Not::not")]
    pub borderline: bool,
    #[serde(skip)]
    pub eigenvalues: Vec<f64>,
}

/// Partial transpose of a raw `D x D` matrix over the subsystems in `part.y()`:
/// `<i_Y i_Ybar| R |k_Y k_Ybar> = <k_Y i_Ybar| M |i_Y k_Ybar>`.
pub fn partial_transpose_matrix(m: &ComplexMatrix, part: &Bipartition) -> Result<ComplexMatrix> {
    let d = part.dims().total();
    if m.rows() != d || m.cols() != d {
        return Err(Error::DimensionMismatch {
            expected: d,
            found: m.rows(),
        });
    }
    let split = part.split_table();
    let db = part.dim_ybar();
    let mut join = vec![0usize; d];
    for (i, &(iy, ib)) in split.iter().enumerate() {
        join[iy * db + ib] = i;
    }
    Ok(ComplexMatrix::from_fn(d, d, |r, c| {
        let (ry, rb) = split[r];
        let (cy, cb) = split[c];
        m[(join[cy * db + rb], join[ry * db + cb])]
    }))
}

pub fn partial_transpose(rho: &DensityMatrix, part: &Bipartition) -> Result<ComplexMatrix> {
    if rho.dims() != part.dims() {
        return Err(Error::DimensionMismatch {
            expected: part.dims().total(),
            found: rho.dims().total(),
        });
    }
    partial_transpose_matrix(rho.matrix(), part)
}

/// Absolute negativity threshold for a partial transpose `pt`.
pub fn effective_threshold(pt: &ComplexMatrix, tol: f64) -> f64 {
    tol * pt.max_abs().max(1.0)
}

/// PPT/NPT label from the spectrum of `rho^{T_Y}`.
pub fn classify(rho: &DensityMatrix, part: &Bipartition, tol: f64) -> Result<ClassificationReport> {
    let pt = partial_transpose(rho, part)?;
    let eig = hermitian_eig(&pt, 1e-10)?;
    let threshold = effective_threshold(&pt, tol);
    let min_eigenvalue = eig.eigenvalues.first().copied().unwrap_or(0.0);
    let negative_count = eig.eigenvalues.iter().filter(|&&l| l < -threshold).count();
    let label = if min_eigenvalue < -threshold {
        Label::Npt
    } else {
        Label::Ppt
    };
    Ok(ClassificationReport {
        partition: part.y().to_vec(),
        min_eigenvalue,
        negative_count,
        label,
        tolerance: tol,
        borderline: min_eigenvalue.abs() <= threshold,
        eigenvalues: eig.eigenvalues,
    })
}

/// Closed-form spectrum of `(|chi><chi|)^{T_1}` for Schmidt coefficients
/// `mu`: `{mu_i^2} ∪ {±mu_i mu_j : i<j}`, zero-padded to `total_dim`,
/// ascending.
pub fn pure_pt_spectrum(mu: &[f64], total_dim: usize) -> Result<Vec<f64>> {
    if mu.is_empty() || mu.iter().any(|&m| !(m > 0.0) || !m.is_finite()) {
        return Err(Error::BadCoefficients(format!("{mu:?} must be positive")));
    }
    let norm: f64 = mu.iter().map(|m| m * m).sum();
    if (norm - 1.0).abs() > 1e-10 {
        return Err(Error::BadCoefficients(format!(
            "sum of squares {norm} != 1"
        )));
    }
    let n = mu.len();
    if n * n > total_dim {
        return Err(Error::BadCoefficients(format!(
            "{n} coefficients do not fit in dimension {total_dim}"
        )));
    }
    let mut out = Vec::with_capacity(total_dim);
    out.extend(mu.iter().map(|m| m * m));
    for i in 0..n {
        for j in (i + 1)..n {
            out.push(mu[i] * mu[j]);
            out.push(-mu[i] * mu[j]);
        }
    }
    out.resize(total_dim, 0.0);
    out.sort_by(f64::total_cmp);
    Ok(out)
}

/// Reports for every cut `Y ∋ 0`, plus the cut with the most negative eigenvalues.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct PartitionScan {
    pub reports: Vec<ClassificationReport>,
    pub best_partition: Vec<usize>,
    pub p_y0: usize,
}

/// Nonempty proper subsets containing subsystem 0, in increasing bitmask order.
pub fn enumerate_cuts(dims: &DimsSpec) -> Vec<Bipartition> {
    let m = dims.subsystems();
    let full = (1usize << m) - 1;
    (1..full)
        .filter(|mask| mask & 1 == 1)
        .map(|mask| {
            let y: Vec<usize> = (0..m).filter(|s| mask >> s & 1 == 1).collect();
            Bipartition::new(dims.clone(), &y).expect("proper subset")
        })
        .collect()
}

/// `Y` and its complement give transpose-related partial transposes with
/// equal spectra, so only cuts containing subsystem 0 are evaluated.
pub fn scan_partitions(rho: &DensityMatrix, tol: f64) -> Result<PartitionScan> {
    scan_partitions_with(rho, tol, Execution::default())
}

pub fn scan_partitions_with(
    rho: &DensityMatrix,
    tol: f64,
    exec: Execution,
) -> Result<PartitionScan> {
    let cuts = enumerate_cuts(rho.dims());
    let reports = map_indexed(cuts.len(), exec, |i| classify(rho, &cuts[i], tol))
        .into_iter()
        .collect::<Result<Vec<_>>>()?;
    // first maximizer in enumeration order
    let best = reports.iter().enumerate().fold(0, |best, (i, r)| {
        if r.negative_count > reports[best].negative_count {
            i
        } else {
            best
        }
    });
    Ok(PartitionScan {
        best_partition: reports[best].partition.clone(),
        p_y0: reports[best].negative_count,
        reports,
    })
}
