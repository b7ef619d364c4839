//! Seeded samplers. Every function takes the generator explicitly.

use rand::Rng;
use rand_distr::{Distribution, Exp1, StandardNormal};

use super::{product_pure, Bipartition, Component, MixtureSpec, PureState};
use crate::error::{Error, Result};
use crate::linalg::{axpy, inner, norm, ComplexMatrix, C64};

/// Floor on each squared Schmidt coefficient drawn by [`sample_pure_schmidt_n`].
pub const MU_SQ_FLOOR: f64 = 0.01;
/// Floor on each mixture weight drawn by [`sample_weights`].
pub const WEIGHT_FLOOR: f64 = 1e-3;

fn gaussian<R: Rng + ?Sized>(rng: &mut R) -> C64 {
    let re: f64 = StandardNormal.sample(rng);
    let im: f64 = StandardNormal.sample(rng);
    C64::new(re, im)
}

/// Uniformly distributed unit vector in `C^dim`.
pub fn haar_vector<R: Rng + ?Sized>(dim: usize, rng: &mut R) -> Vec<C64> {
    loop {
        let v: Vec<C64> = (0..dim).map(|_| gaussian(rng)).collect();
        let n = norm(&v);
        if n > 1e-12 {
            return v.into_iter().map(|z| z / n).collect();
        }
    }
}

/// Haar-distributed unitary: Gram-Schmidt on a complex Gaussian matrix.
pub fn haar_unitary<R: Rng + ?Sized>(dim: usize, rng: &mut R) -> ComplexMatrix {
    let mut cols: Vec<Vec<C64>> = Vec::with_capacity(dim);
    while cols.len() < dim {
        let mut v: Vec<C64> = (0..dim).map(|_| gaussian(rng)).collect();
        for _ in 0..2 {
            for b in &cols {
                let p = inner(b, &v);
                axpy(&mut v, -p, b);
            }
        }
        let n = norm(&v);
        if n > 1e-8 {
            cols.push(v.into_iter().map(|z| z / n).collect());
        }
    }
    ComplexMatrix::from_columns(dim, &cols)
}

/// Uniform point of the probability simplex (normalized exponentials).
fn dirichlet_uniform<R: Rng + ?Sized>(count: usize, rng: &mut R) -> Vec<f64> {
    let x: Vec<f64> = (0..count).map(|_| Exp1.sample(rng)).collect();
    let total: f64 = x.iter().sum();
    x.into_iter().map(|v| v / total).collect()
}

/// Pure state with Schmidt number exactly `n` across `part`.
///
/// Squared coefficients are uniform on the simplex shifted so each is at
/// least [`MU_SQ_FLOOR`]; local frames are Haar-random.
pub fn sample_pure_schmidt_n<R: Rng + ?Sized>(
    n: usize,
    part: &Bipartition,
    rng: &mut R,
) -> Result<PureState> {
    let max = part.dim_y().min(part.dim_ybar());
    if n == 0 || n > max || n as f64 * MU_SQ_FLOOR > 1.0 {
        return Err(Error::BadRank { requested: n, max });
    }
    let slack = 1.0 - n as f64 * MU_SQ_FLOOR;
    let mu: Vec<f64> = dirichlet_uniform(n, rng)
        .into_iter()
        .map(|x| (MU_SQ_FLOOR + slack * x).sqrt())
        .collect();
    let u = haar_unitary(part.dim_y(), rng);
    let v = haar_unitary(part.dim_ybar(), rng);
    let mut amps = vec![C64::new(0.0, 0.0); part.dims().total()];
    for (k, &m) in mu.iter().enumerate() {
        for iy in 0..part.dim_y() {
            let a = u[(iy, k)] * m;
            for ib in 0..part.dim_ybar() {
                amps[part.join(iy, ib)] += a * v[(ib, k)];
            }
        }
    }
    PureState::new(amps, part.dims().clone())
}

/// Product of Haar-random factors across `part`.
pub fn sample_product<R: Rng + ?Sized>(part: &Bipartition, rng: &mut R) -> PureState {
    let a = haar_vector(part.dim_y(), rng);
    let b = haar_vector(part.dim_ybar(), rng);
    product_pure(&a, &b, part).expect("factor lengths match the cut")
}

/// `count` positive weights summing to one, uniform on the simplex then
/// shifted so each is at least [`WEIGHT_FLOOR`].
pub fn sample_weights<R: Rng + ?Sized>(count: usize, rng: &mut R) -> Vec<f64> {
    assert!(
        count >= 1 && (count as f64) * WEIGHT_FLOOR < 1.0,
        "unsupported weight count {count}"
    );
    if count == 1 {
        return vec![1.0];
    }
    let slack = 1.0 - count as f64 * WEIGHT_FLOOR;
    let mut w: Vec<f64> = dirichlet_uniform(count, rng)
        .into_iter()
        .map(|x| WEIGHT_FLOOR + slack * x)
        .collect();
    // absorb rounding into the largest entry
    let excess: f64 = w.iter().sum::<f64>() - 1.0;
    let imax = (0..count)
        .max_by(|&i, &j| w[i].total_cmp(&w[j]))
        .unwrap_or(0);
    w[imax] -= excess;
    w
}

/// Schmidt-number-`n` leading state plus `k` product states across `part`,
/// with sampled weights.
pub fn sample_mixture<R: Rng + ?Sized>(
    n: usize,
    k: usize,
    part: &Bipartition,
    rng: &mut R,
) -> Result<MixtureSpec> {
    let mut components = vec![Component::Pure(sample_pure_schmidt_n(n, part, rng)?)];
    components.extend((0..k).map(|_| Component::Pure(sample_product(part, rng))));
    let weights = sample_weights(k + 1, rng);
    MixtureSpec::new(weights, components)
}
