use super::{
    product_pure, Bipartition, Component, DensityMatrix, DimsSpec, MixtureSpec, PureState,
};
use crate::error::{Error, Result};
use crate::linalg::{ComplexMatrix, C64};

fn real(v: &[f64]) -> Vec<C64> {
    v.iter().map(|&x| C64::new(x, 0.0)).collect()
}

/// The one-parameter 3x3 family
/// `(2/7)|psi+><psi+| + (a/21)(|01><01| + |12><12| + |20><20|)
///  + ((5-a)/21)(|10><10| + |21><21| + |02><02|)`
/// with `|psi+> = (|00> + |11> + |22>)/sqrt(3)`, for `2 <= a <= 5`.
pub fn horodecki(alpha: f64) -> Result<DensityMatrix> {
    if !(2.0..=5.0).contains(&alpha) {
        return Err(Error::AlphaOutOfRange(alpha));
    }
    let dims = DimsSpec::bipartite(3, 3)?;
    let mut m = ComplexMatrix::zeros(9, 9);
    let diag = [0usize, 4, 8];
    for &r in &diag {
        for &c in &diag {
            m[(r, c)] = C64::new(2.0 / 21.0, 0.0);
        }
    }
    for (i, j) in [(0, 1), (1, 2), (2, 0)] {
        m[(3 * i + j, 3 * i + j)] += C64::new(alpha / 21.0, 0.0);
        m[(3 * j + i, 3 * j + i)] += C64::new((5.0 - alpha) / 21.0, 0.0);
    }
    Ok(DensityMatrix::new_unchecked(m, dims))
}

/// A 3x3 mixture of a Schmidt-rank-3 state with four product states that
/// remains PPT (minimum partial-transpose eigenvalue about `6e-5`).
///
/// Kets are 0-based: the 1-based `|11>, |22>, |33>` are indices 0, 4, 8.
pub fn example1_mixture() -> MixtureSpec {
    let dims = DimsSpec::bipartite(3, 3).expect("3x3");
    let part = Bipartition::first(dims.clone());
    let s = f64::sqrt;

    let mut chi0 = vec![C64::new(0.0, 0.0); 9];
    chi0[0] = C64::new(0.5, 0.0);
    chi0[4] = C64::new(0.8, 0.0);
    chi0[8] = C64::new(s(0.11), 0.0);

    let factors: [([f64; 3], [f64; 3]); 4] = [
        ([0.4, -0.6, s(0.48)], [0.3, 0.95, s(0.0075)]),
        ([0.27, 0.5, s(0.6771)], [-0.75, -0.1, s(0.4275)]),
        ([-0.2, 0.4, s(0.8)], [-0.05, 0.01, -s(0.9974)]),
        ([0.2, 0.6, -s(0.6)], [0.8, -0.55, -s(0.0575)]),
    ];

    let mut components = vec![Component::Pure(
        PureState::new(chi0, dims).expect("normalized amplitudes"),
    )];
    for (a, b) in &factors {
        let p = product_pure(&real(a), &real(b), &part).expect("3-dimensional factors");
        components.push(Component::Pure(p));
    }
    MixtureSpec::new(vec![0.01, 0.6, 0.09, 0.15, 0.15], components).expect("weights sum to one")
}
