#![allow(dead_code)]

use nptcert::linalg::{ComplexMatrix, C64};
use nptcert::qstate::{haar_vector, Bipartition, DimsSpec, PureState};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn gaussian(rng: &mut ChaCha8Rng) -> C64 {
    C64::new(rng.sample(StandardNormal), rng.sample(StandardNormal))
}

pub fn random_matrix(rows: usize, cols: usize, rng: &mut ChaCha8Rng) -> ComplexMatrix {
    ComplexMatrix::from_fn(rows, cols, |_, _| gaussian(rng))
}

pub fn random_hermitian(dim: usize, rng: &mut ChaCha8Rng) -> ComplexMatrix {
    let a = random_matrix(dim, dim, rng);
    a.add(&a.adjoint()).scale(0.5)
}

/// Random dims with 2..=max_parties subsystems of size 2..=max_local.
pub fn random_dims(max_parties: usize, max_local: usize, rng: &mut ChaCha8Rng) -> DimsSpec {
    let m = rng.random_range(2..=max_parties);
    DimsSpec::new((0..m).map(|_| rng.random_range(2..=max_local)).collect()).unwrap()
}

/// A random proper subset of the subsystems.
pub fn random_cut(dims: &DimsSpec, rng: &mut ChaCha8Rng) -> Bipartition {
    let m = dims.subsystems();
    loop {
        let mask: usize = rng.random_range(1..(1usize << m) - 1);
        let y: Vec<usize> = (0..m).filter(|s| mask >> s & 1 == 1).collect();
        if let Ok(p) = Bipartition::new(dims.clone(), &y) {
            return p;
        }
    }
}

pub fn random_pure(dims: &DimsSpec, rng: &mut ChaCha8Rng) -> PureState {
    PureState::new(haar_vector(dims.total(), rng), dims.clone()).unwrap()
}

/// Random density matrix of the given rank, `A A† / tr`.
pub fn random_density_matrix(dim: usize, rank: usize, rng: &mut ChaCha8Rng) -> ComplexMatrix {
    let a = random_matrix(dim, rank, rng);
    let m = a.matmul(&a.adjoint());
    let t = m.trace().re;
    m.scale(1.0 / t)
}

/// Brute-force partial transpose straight from the digit expansion.
pub fn pt_by_digits(m: &ComplexMatrix, dims: &DimsSpec, y: &[usize]) -> ComplexMatrix {
    let d = dims.total();
    ComplexMatrix::from_fn(d, d, |r, c| {
        let mut rd = dims.digits(r);
        let mut cd = dims.digits(c);
        for &s in y {
            std::mem::swap(&mut rd[s], &mut cd[s]);
        }
        m[(dims.index(&rd), dims.index(&cd))]
    })
}
