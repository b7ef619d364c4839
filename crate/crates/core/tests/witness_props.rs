mod common;

use common::rng;
use nptcert::linalg::{inner, norm, orthonormal_basis, ComplexMatrix, C64, DEFAULT_RANK_TOL};
use nptcert::ppt::{classify, partial_transpose, partial_transpose_matrix, Label, DEFAULT_TOL};
use nptcert::qstate::{
    mix, sample_mixture, sample_product, sample_pure_schmidt_n, sample_weights, to_density,
    Bipartition, Component, DimsSpec, MixtureSpec, PureState,
};
use nptcert::witness::{
    certify, find_witness, max_separable_overlap, negative_eigenspace, theorem1_det,
    theorem1_reduce, Certification,
};
use proptest::prelude::*;
use rand::Rng;

/// `conj(a) (x) b` rebuilt from the amplitudes through a rank-one factorization.
fn conjugated_product_oracle(chi: &PureState, part: &Bipartition) -> Vec<C64> {
    let (dy, db) = (part.dim_y(), part.dim_ybar());
    let amps = chi.amplitudes();
    let (mut iy0, mut ib0, mut best) = (0, 0, 0.0);
    for iy in 0..dy {
        for ib in 0..db {
            let x = amps[part.join(iy, ib)].norm();
            if x > best {
                (iy0, ib0, best) = (iy, ib, x);
            }
        }
    }
    let pivot = amps[part.join(iy0, ib0)];
    // chi = a (x) b with a_i = chi[i, ib0] / sqrt(pivot), b_j = chi[iy0, j] / sqrt(pivot)
    let s = pivot.sqrt();
    let a: Vec<C64> = (0..dy).map(|i| amps[part.join(i, ib0)] / s).collect();
    let b: Vec<C64> = (0..db).map(|j| amps[part.join(iy0, j)] / s).collect();
    let mut out = vec![C64::new(0.0, 0.0); part.dims().total()];
    for i in 0..dy {
        for j in 0..db {
            out[part.join(i, j)] = a[i].conj() * b[j];
        }
    }
    out
}

fn random_bipartite(r: &mut rand_chacha::ChaCha8Rng, min_local: usize) -> Bipartition {
    let da = r.random_range(min_local..=5);
    let db = r.random_range(min_local..=5);
    Bipartition::first(DimsSpec::bipartite(da, db).unwrap())
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(300))]

    /// Certificates are checked on the mixed state directly, independent of
    /// the per-component bookkeeping.
    #[test]
    fn certificates_are_sound_and_annihilate_the_tail(seed in any::<u64>()) {
        let mut r = rng(seed);
        let part = random_bipartite(&mut r, 3);
        let n = r.random_range(3..=part.dim_y().min(part.dim_ybar()));
        let k = r.random_range(0..=n * (n - 1) / 2 - 1);
        let spec = sample_mixture(n, k, &part, &mut r).unwrap();
        let cert = certify(&spec, &part, DEFAULT_TOL).unwrap();
        let Certification::Certificate(c) = cert else {
            return Err(TestCaseError::fail("no witness below the dimension bound"));
        };
        prop_assert!((norm(&c.xi) - 1.0).abs() < 1e-12);
        let pt = partial_transpose(&mix(&spec), &part).unwrap();
        let direct = pt.quadratic_form(&c.xi);
        prop_assert!(direct < -DEFAULT_TOL);
        let weighted: f64 = spec.weights().iter().zip(&c.per_component).map(|(l, v)| l * v).sum();
        prop_assert!((c.quad_value - weighted).abs() < 1e-10);
        prop_assert!((c.quad_value - direct).abs() < 1e-10);
        for chi in spec.tail() {
            let overlap = inner(&c.xi, &conjugated_product_oracle(chi, &part)).norm_sqr();
            prop_assert!(overlap < 1e-18, "overlap {overlap:e}");
            // same quantity through the operator; summing D^2 terms costs ~D eps
            let proj = ComplexMatrix::outer(chi.amplitudes(), chi.amplitudes());
            let form = partial_transpose_matrix(&proj, &part).unwrap().quadratic_form(&c.xi);
            prop_assert!(form.abs() < 1e-14, "{form:e}");
        }
        prop_assert!(max_separable_overlap(&c.xi, &spec.tail(), &part).unwrap() < 1e-9);
        prop_assert_eq!(classify(&mix(&spec), &part, DEFAULT_TOL).unwrap().label, Label::Npt);
    }

    #[test]
    fn dimension_count_forces_a_witness(seed in any::<u64>()) {
        let mut r = rng(seed);
        let part = random_bipartite(&mut r, 2);
        let d = part.dims().total();
        let n = r.random_range(2..=part.dim_y().min(part.dim_ybar()));
        let chi0 = sample_pure_schmidt_n(n, &part, &mut r).unwrap();
        let k = r.random_range(0..=n * (n - 1) / 2 + 2);
        // repeat some states so the span can be smaller than K
        let mut tail: Vec<PureState> = Vec::new();
        for _ in 0..k {
            if !tail.is_empty() && r.random_bool(0.3) {
                let i = r.random_range(0..tail.len());
                tail.push(tail[i].clone());
            } else {
                tail.push(sample_product(&part, &mut r));
            }
        }
        let refs: Vec<&PureState> = tail.iter().collect();
        let rho0 = to_density(&chi0);
        let p = negative_eigenspace(&rho0, &part, DEFAULT_TOL).unwrap().dim();
        let conj: Vec<Vec<C64>> = tail.iter().map(|c| conjugated_product_oracle(c, &part)).collect();
        let span = orthonormal_basis(d, &conj, DEFAULT_RANK_TOL).unwrap().dim();
        let w = find_witness(&rho0, &refs, &part, DEFAULT_TOL).unwrap();
        // dim V_- + dim V_s^perp >= D + 1
        if p + (d - span) > d {
            prop_assert!(w.is_some(), "p = {p}, span = {span}, d = {d}");
        }
        if let Some(w) = w {
            prop_assert!(w.value < 0.0);
            prop_assert!((w.value - partial_transpose(&rho0, &part).unwrap().quadratic_form(&w.xi)).abs() < 1e-12);
        }
    }
}

#[test]
fn certify_rejects_entangled_tail_states() {
    let mut r = rng(3);
    let part = Bipartition::first(DimsSpec::bipartite(3, 3).unwrap());
    let chi0 = sample_pure_schmidt_n(3, &part, &mut r).unwrap();
    let bad = sample_pure_schmidt_n(2, &part, &mut r).unwrap();
    let spec = MixtureSpec::new(
        vec![0.5, 0.5],
        vec![Component::Pure(chi0), Component::Pure(bad)],
    )
    .unwrap();
    assert!(certify(&spec, &part, DEFAULT_TOL).is_err());
}

/// The closed-form determinant is negative and matches the numeric 4x4
/// determinant on random instances, including embeddings in larger spaces.
#[test]
fn closed_form_determinant_on_random_instances() {
    let mut r = rng(2024);
    let mut worst: f64 = 0.0;
    for trial in 0..10_000 {
        let (da, db) = match trial % 4 {
            0 => (2, 2),
            1 => (3, 3),
            2 => (2, 4),
            _ => (r.random_range(2..=5), r.random_range(2..=5)),
        };
        let part = Bipartition::first(DimsSpec::bipartite(da, db).unwrap());
        let chi0 = sample_pure_schmidt_n(2, &part, &mut r).unwrap();
        let chi1 = sample_product(&part, &mut r);
        let w = sample_weights(2, &mut r);
        let red = theorem1_reduce(&chi0, &chi1, &part).unwrap();
        assert!(red.a.norm_sqr() + red.b.norm_sqr() <= 1.0 + 1e-12);
        assert!(red.c.norm_sqr() + red.d.norm_sqr() <= 1.0 + 1e-12);
        let closed = theorem1_det(&red, w[0], w[1]);
        let numeric = red.numeric_det(w[0], w[1]);
        assert!(closed < 0.0, "trial {trial}: {closed:e}");
        let rel = (closed - numeric).abs() / closed.abs();
        worst = worst.max(rel);
        assert!(
            rel <= 1e-10,
            "trial {trial}: closed {closed:e}, numeric {numeric:e}"
        );
        let block = red
            .rho_tilde(w[0], w[1])
            .sub(&red.rho_tilde_from_coefficients(w[0], w[1]))
            .max_abs();
        assert!(block < 1e-12, "trial {trial}: {block:e}");
    }
    eprintln!("worst relative determinant disagreement {worst:e}");
}

#[test]
fn reduction_is_local_to_the_leading_block() {
    let mut r = rng(8);
    let part = Bipartition::first(DimsSpec::bipartite(3, 3).unwrap());
    let chi0 = sample_pure_schmidt_n(2, &part, &mut r).unwrap();
    let chi1 = sample_product(&part, &mut r);
    let red = theorem1_reduce(&chi0, &chi1, &part).unwrap();
    for m in [&red.u, &red.v] {
        assert!(
            m.adjoint()
                .matmul(m)
                .sub(&ComplexMatrix::identity(3))
                .max_abs()
                < 1e-12
        );
    }
    let t = red.rho_tilde(1.0, 0.0);
    assert!((t[(0, 0)].re - red.mu1 * red.mu1).abs() < 1e-12);
    assert!((t[(3, 3)].re - red.mu2 * red.mu2).abs() < 1e-12);
    assert!((t.trace().re - 1.0).abs() < 1e-12);
}
