use super::{to_density, Bipartition, DensityMatrix, DimsSpec, PureState, SCHMIDT_TOL};
use crate::error::{Error, Result};
use crate::linalg::ComplexMatrix;

/// One term of a mixture.
#[derive(Debug, Clone, PartialEq)]
pub enum Component {
    Pure(PureState),
    /// Only admissible as the leading component.
    Mixed(DensityMatrix),
}

impl Component {
    pub fn dims(&self) -> &DimsSpec {
        match self {
            Component::Pure(p) => p.dims(),
            Component::Mixed(m) => m.dims(),
        }
    }

    pub fn density(&self) -> DensityMatrix {
        match self {
            Component::Pure(p) => to_density(p),
            Component::Mixed(m) => m.clone(),
        }
    }

    pub fn as_pure(&self) -> Option<&PureState> {
        match self {
            Component::Pure(p) => Some(p),
            Component::Mixed(_) => None,
        }
    }
}

/// `rho = lambda_0 rho_0 + sum_{i>=1} lambda_i |chi_i><chi_i|`.
///
/// Weights are strictly inside `(0, 1)` and sum to one; a single component
/// carries weight exactly one.
#[derive(Debug, Clone, PartialEq)]
pub struct MixtureSpec {
    weights: Vec<f64>,
    components: Vec<Component>,
}

impl MixtureSpec {
    pub fn new(weights: Vec<f64>, components: Vec<Component>) -> Result<Self> {
        if weights.len() != components.len() {
            return Err(Error::WeightMismatch(format!(
                "{} weights for {} components",
                weights.len(),
                components.len()
            )));
        }
        if components.is_empty() {
            return Err(Error::WeightMismatch("empty mixture".into()));
        }
        if weights.len() == 1 {
            if (weights[0] - 1.0).abs() > 1e-12 {
                return Err(Error::WeightMismatch(format!(
                    "single weight {} != 1",
                    weights[0]
                )));
            }
        } else if let Some(w) = weights.iter().find(|&&w| !(w > 0.0 && w < 1.0)) {
            return Err(Error::WeightMismatch(format!("weight {w} outside (0, 1)")));
        }
        let total: f64 = weights.iter().sum();
        if (total - 1.0).abs() > 1e-12 {
            return Err(Error::WeightMismatch(format!("weights sum to {total}")));
        }
        let dims = components[0].dims();
        if components.iter().any(|c| c.dims() != dims) {
            return Err(Error::InvalidDims(
                "mixture components disagree on dimensions".into(),
            ));
        }
        if components[1..]
            .iter()
            .any(|c| matches!(c, Component::Mixed(_)))
        {
            return Err(Error::WeightMismatch(
                "only the leading component may be a mixed state".into(),
            ));
        }
        Ok(Self {
            weights,
            components,
        })
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    pub fn components(&self) -> &[Component] {
        &self.components
    }

    pub fn dims(&self) -> &DimsSpec {
        self.components[0].dims()
    }

    /// Number of mixed-in states after the leading one.
    pub fn k(&self) -> usize {
        self.components.len() - 1
    }

    /// The trailing pure states (all of them are pure by construction).
    pub fn tail(&self) -> Vec<&PureState> {
        self.components[1..]
            .iter()
            .filter_map(Component::as_pure)
            .collect()
    }

    /// Which components are product states across `part`.
    pub fn separable_flags(&self, part: &Bipartition) -> Result<Vec<bool>> {
        self.components
            .iter()
            .map(|c| match c {
                Component::Pure(p) => Ok(super::schmidt_number(p, part, SCHMIDT_TOL)? == 1),
                Component::Mixed(_) => Ok(false),
            })
            .collect()
    }
}

/// Convex combination of the components.
pub fn mix(spec: &MixtureSpec) -> DensityMatrix {
    let d = spec.dims().total();
    let mut m = ComplexMatrix::zeros(d, d);
    for (w, c) in spec.weights.iter().zip(&spec.components) {
        match c {
            Component::Pure(p) => {
                let a = p.amplitudes();
                for r in 0..d {
                    if a[r].re == 0.0 && a[r].im == 0.0 {
                        continue;
                    }
                    for col in 0..d {
                        m[(r, col)] += a[r] * a[col].conj() * *w;
                    }
                }
            }
            Component::Mixed(rho) => m.add_scaled(*w, rho.matrix()),
        }
    }
    DensityMatrix::new_unchecked(m, spec.dims().clone())
}
