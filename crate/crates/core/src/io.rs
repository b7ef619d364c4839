//! JSON and CSV file formats.
//!
//! Complex numbers are `[re, im]` pairs. A state file is
//! `{"dims":[3,3],"amplitudes":[[re,im],...]}`, a density file is
//! `{"dims":[...],"matrix":[[[re,im],...],...]}` (row-major rows), and a
//! mixture file is `{"weights":[...],"components":[<state or density>...]}`.

use std::io::Write;
use std::path::Path;

use serde::de::DeserializeOwned;
use serde::{Deserialize, Serialize};
use serde_json::Value;

use crate::error::{Error, Result};
use crate::linalg::{ComplexMatrix, C64};
use crate::ppt::{ClassificationReport, Label};
use crate::qstate::{make_pure, Component, DensityMatrix, DimsSpec, MixtureSpec, PureState};
use crate::witness::{Certification, DecidedBy};

fn pair(z: C64) -> [f64; 2] {
    [z.re, z.im]
}

fn complex(p: [f64; 2]) -> C64 {
    C64::new(p[0], p[1])
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct StateJson {
    pub dims: Vec<usize>,
    pub amplitudes: Vec<[f64; 2]>,
}

impl StateJson {
    pub fn from_state(s: &PureState) -> Self {
        Self {
            dims: s.dims().dims().to_vec(),
            amplitudes: s.amplitudes().iter().copied().map(pair).collect(),
        }
    }

    /// Returns the state and whether it had to be renormalized noticeably.
    pub fn to_state(&self) -> Result<(PureState, bool)> {
        let dims = DimsSpec::new(self.dims.clone())?;
        make_pure(self.amplitudes.iter().copied().map(complex).collect(), dims)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DensityJson {
    pub dims: Vec<usize>,
    pub matrix: Vec<Vec<[f64; 2]>>,
}

impl DensityJson {
    pub fn from_density(rho: &DensityMatrix) -> Self {
        let m = rho.matrix();
        Self {
            dims: rho.dims().dims().to_vec(),
            matrix: (0..m.rows())
                .map(|r| m.row(r).iter().copied().map(pair).collect())
                .collect(),
        }
    }

    pub fn to_density(&self) -> Result<DensityMatrix> {
        let dims = DimsSpec::new(self.dims.clone())?;
        let d = self.matrix.len();
        if let Some(bad) = self.matrix.iter().find(|row| row.len() != d) {
            return Err(Error::DimensionMismatch {
                expected: d,
                found: bad.len(),
            });
        }
        let data = self.matrix.iter().flatten().copied().map(complex).collect();
        DensityMatrix::new(ComplexMatrix::from_vec(d, d, data)?, dims)
    }
}

/// Either kind of state file.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum ComponentJson {
    Density(DensityJson),
    State(StateJson),
}

impl ComponentJson {
    fn from_value(v: Value) -> std::result::Result<Self, serde_json::Error> {
        if v.get("matrix").is_some() {
            serde_json::from_value(v).map(ComponentJson::Density)
        } else {
            serde_json::from_value(v).map(ComponentJson::State)
        }
    }

    pub fn from_component(c: &Component) -> Self {
        match c {
            Component::Pure(p) => ComponentJson::State(StateJson::from_state(p)),
            Component::Mixed(m) => ComponentJson::Density(DensityJson::from_density(m)),
        }
    }

    pub fn to_component(&self) -> Result<Component> {
        Ok(match self {
            ComponentJson::State(s) => Component::Pure(s.to_state()?.0),
            ComponentJson::Density(d) => Component::Mixed(d.to_density()?),
        })
    }

    pub fn to_density(&self) -> Result<DensityMatrix> {
        Ok(self.to_component()?.density())
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MixtureJson {
    pub weights: Vec<f64>,
    pub components: Vec<ComponentJson>,
}

impl MixtureJson {
    pub fn from_spec(spec: &MixtureSpec) -> Self {
        Self {
            weights: spec.weights().to_vec(),
            components: spec
                .components()
                .iter()
                .map(ComponentJson::from_component)
                .collect(),
        }
    }

    pub fn to_spec(&self) -> Result<MixtureSpec> {
        let components = self
            .components
            .iter()
            .map(ComponentJson::to_component)
            .collect::<Result<Vec<_>>>()?;
        MixtureSpec::new(self.weights.clone(), components)
    }
}

#[derive(Debug, Deserialize)]
struct RawMixture {
    weights: Vec<f64>,
    components: Vec<Value>,
}

/// Output of the certification route.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CertificateJson {
    pub xi: Vec<[f64; 2]>,
    pub partition: Vec<usize>,
    pub quad_value: Option<f64>,
    pub per_component: Vec<f64>,
    pub tolerance: f64,
    pub decided_by: DecidedBy,
    pub label: Label,
    /// Only on the spectrum route.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub min_eigenvalue: Option<f64>,
}

impl CertificateJson {
    pub fn from_certification(c: &Certification, partition: &[usize], tolerance: f64) -> Self {
        match c {
            Certification::Certificate(cert) => Self {
                xi: cert.xi.iter().copied().map(pair).collect(),
                partition: cert.partition.clone(),
                quad_value: Some(cert.quad_value),
                per_component: cert.per_component.clone(),
                tolerance: cert.tolerance,
                decided_by: DecidedBy::Witness,
                label: Label::Npt,
                min_eigenvalue: None,
            },
            Certification::Spectrum(r) => Self::from_report(r, partition, tolerance),
        }
    }

    fn from_report(r: &ClassificationReport, partition: &[usize], tolerance: f64) -> Self {
        Self {
            xi: Vec::new(),
            partition: partition.to_vec(),
            quad_value: None,
            per_component: Vec::new(),
            tolerance,
            decided_by: DecidedBy::Spectrum,
            label: r.label,
            min_eigenvalue: Some(r.min_eigenvalue),
        }
    }
}

fn read_text(path: &Path) -> Result<String> {
    std::fs::read_to_string(path).map_err(|source| Error::Io {
        path: path.display().to_string(),
        source,
    })
}

fn format_err(path: &Path, e: impl std::fmt::Display) -> Error {
    Error::Format {
        path: path.display().to_string(),
        message: e.to_string(),
    }
}

pub fn read_json<T: DeserializeOwned>(path: &Path) -> Result<T> {
    serde_json::from_str(&read_text(path)?).map_err(|e| format_err(path, e))
}

/// A state or density file.
pub fn read_component(path: &Path) -> Result<ComponentJson> {
    let v: Value = read_json(path)?;
    ComponentJson::from_value(v).map_err(|e| format_err(path, e))
}

pub fn read_mixture(path: &Path) -> Result<MixtureJson> {
    let raw: RawMixture = read_json(path)?;
    let components = raw
        .components
        .into_iter()
        .enumerate()
        .map(|(i, v)| {
            ComponentJson::from_value(v)
                .map_err(|e| format_err(path, format!("components[{i}]: {e}")))
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(MixtureJson {
        weights: raw.weights,
        components,
    })
}

/// Pretty JSON with a trailing newline.
pub fn to_json_string<T: Serialize>(value: &T) -> String {
    let mut s = serde_json::to_string_pretty(value).expect("serializable value");
    s.push('\n');
    s
}

/// Writes through a temporary file in the destination directory, then renames.
pub fn write_atomic(path: &Path, contents: &str) -> Result<()> {
    let io_err = |source| Error::Io {
        path: path.display().to_string(),
        source,
    };
    let dir = match path.parent() {
        Some(p) if !p.as_os_str().is_empty() => p,
        _ => Path::new("."),
    };
    let mut tmp = tempfile::NamedTempFile::new_in(dir).map_err(io_err)?;
    tmp.write_all(contents.as_bytes()).map_err(io_err)?;
    tmp.as_file().sync_all().map_err(io_err)?;
    tmp.persist(path).map_err(|e| io_err(e.error))?;
    Ok(())
}
