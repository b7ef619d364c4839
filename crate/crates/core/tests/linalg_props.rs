mod common;

use common::{gaussian, random_hermitian, random_matrix, rng};
use nptcert::linalg::{
    hermitian_eig, orthogonal_complement, orthonormal_basis, subspace_intersection, svd, C64,
    DEFAULT_RANK_TOL,
};
use nptcert::qstate::haar_unitary;
use proptest::prelude::*;

proptest! {
    #![proptest_config(ProptestConfig::with_cases(1000))]

    #[test]
    fn eigen_reconstruction(seed in any::<u64>(), dim in 1usize..=16) {
        let mut r = rng(seed);
        let m = random_hermitian(dim, &mut r);
        let eig = hermitian_eig(&m, 1e-10).unwrap();
        let err = eig.reconstruct().sub(&m).max_abs();
        prop_assert!(err < 1e-11 * m.max_abs(), "error {err:e}");
        prop_assert!(eig.eigenvalues.windows(2).all(|w| w[0] <= w[1]));
        let v = &eig.eigenvectors;
        let gram = v.adjoint().matmul(v);
        prop_assert!(gram.sub(&nptcert::linalg::ComplexMatrix::identity(dim)).max_abs() < 1e-12);
    }

    #[test]
    fn spectrum_is_unitarily_invariant(seed in any::<u64>(), dim in 1usize..=12) {
        let mut r = rng(seed);
        let m = random_hermitian(dim, &mut r);
        let u = haar_unitary(dim, &mut r);
        let rotated = u.matmul(&m).matmul(&u.adjoint());
        let a = hermitian_eig(&m, 1e-10).unwrap().eigenvalues;
        let b = hermitian_eig(&rotated, 1e-9).unwrap().eigenvalues;
        for (x, y) in a.iter().zip(&b) {
            prop_assert!((x - y).abs() < 1e-10, "{x} vs {y}");
        }
    }

    #[test]
    fn svd_reconstructs(seed in any::<u64>(), rows in 1usize..=8, cols in 1usize..=8) {
        let mut r = rng(seed);
        let m = random_matrix(rows, cols, &mut r);
        let s = svd(&m).unwrap();
        prop_assert!(s.reconstruct().sub(&m).max_abs() < 1e-11 * m.max_abs().max(1.0));
        prop_assert!(s.singular.windows(2).all(|w| w[0] >= w[1]));
    }

    #[test]
    fn intersection_dimension_formula(
        seed in any::<u64>(),
        ambient in 2usize..=9,
        a_dim in 0usize..=9,
        b_dim in 0usize..=9,
        shared in 0usize..=3,
    ) {
        let mut r = rng(seed);
        let a_dim = a_dim.min(ambient);
        let b_dim = b_dim.min(ambient);
        // plant common directions so nontrivial intersections actually occur
        let common: Vec<Vec<C64>> = (0..shared.min(a_dim).min(b_dim))
            .map(|_| (0..ambient).map(|_| gaussian(&mut r)).collect())
            .collect();
        let mut va = common.clone();
        let mut vb = common;
        while va.len() < a_dim {
            va.push((0..ambient).map(|_| gaussian(&mut r)).collect());
        }
        while vb.len() < b_dim {
            vb.push((0..ambient).map(|_| gaussian(&mut r)).collect());
        }
        let a = orthonormal_basis(ambient, &va, DEFAULT_RANK_TOL).unwrap();
        let b = orthonormal_basis(ambient, &vb, DEFAULT_RANK_TOL).unwrap();
        let both: Vec<Vec<C64>> = va.iter().chain(&vb).cloned().collect();
        let sum = orthonormal_basis(ambient, &both, DEFAULT_RANK_TOL).unwrap();
        let meet = subspace_intersection(&a, &b, DEFAULT_RANK_TOL).unwrap();
        prop_assert_eq!(meet.dim() + sum.dim(), a.dim() + b.dim());
        // every intersection vector lies in both subspaces
        for v in meet.vectors() {
            prop_assert!(nptcert::linalg::norm(&a.reject(v)) < 1e-10);
            prop_assert!(nptcert::linalg::norm(&b.reject(v)) < 1e-10);
        }
    }

    #[test]
    fn complement_is_an_involution(seed in any::<u64>(), ambient in 1usize..=10, k in 0usize..=10) {
        let mut r = rng(seed);
        let vs: Vec<Vec<C64>> = (0..k.min(ambient))
            .map(|_| (0..ambient).map(|_| gaussian(&mut r)).collect())
            .collect();
        let b = orthonormal_basis(ambient, &vs, DEFAULT_RANK_TOL).unwrap();
        let perp = orthogonal_complement(&b).unwrap();
        prop_assert_eq!(perp.dim() + b.dim(), ambient);
        let back = orthogonal_complement(&perp).unwrap();
        prop_assert!(back.projector().sub(&b.projector()).max_abs() < 1e-10);
    }
}

/// Projector-product oracle: the intersection is the eigenvalue-1 eigenspace
/// of `P_A P_B P_A`.
#[test]
fn intersection_matches_projector_product() {
    let mut r = rng(11);
    for _ in 0..50 {
        let ambient = 9;
        let va: Vec<Vec<C64>> = (0..3)
            .map(|_| (0..ambient).map(|_| gaussian(&mut r)).collect())
            .collect();
        let mut vb: Vec<Vec<C64>> = (0..6)
            .map(|_| (0..ambient).map(|_| gaussian(&mut r)).collect())
            .collect();
        vb.push(va[0].clone());
        let a = orthonormal_basis(ambient, &va, DEFAULT_RANK_TOL).unwrap();
        let b = orthonormal_basis(ambient, &vb, DEFAULT_RANK_TOL).unwrap();
        let meet = subspace_intersection(&a, &b, DEFAULT_RANK_TOL).unwrap();
        let (pa, pb) = (a.projector(), b.projector());
        let triple = pa.matmul(&pb).matmul(&pa);
        let eig = hermitian_eig(&triple.add(&triple.adjoint()).scale(0.5), 1e-8).unwrap();
        let oracle_dim = eig.eigenvalues.iter().filter(|&&l| l > 1.0 - 1e-9).count();
        assert_eq!(meet.dim(), oracle_dim);
        assert!(meet.dim() >= 1);
        for v in meet.vectors() {
            let residual: f64 = nptcert::linalg::norm(
                &triple
                    .matvec(v)
                    .iter()
                    .zip(v)
                    .map(|(x, y)| x - y)
                    .collect::<Vec<_>>(),
            );
            assert!(residual < 1e-10);
        }
    }
}

#[test]
fn degenerate_spectrum_keeps_orthonormal_vectors() {
    let mut r = rng(5);
    let u = haar_unitary(6, &mut r);
    let d = nptcert::linalg::ComplexMatrix::from_real_diagonal(&[1.0, 1.0, 1.0, -2.0, -2.0, 0.0]);
    let m = u.matmul(&d).matmul(&u.adjoint());
    let eig = hermitian_eig(&m.add(&m.adjoint()).scale(0.5), 1e-10).unwrap();
    let want = [-2.0, -2.0, 0.0, 1.0, 1.0, 1.0];
    for (x, y) in eig.eigenvalues.iter().zip(want) {
        assert!((x - y).abs() < 1e-12);
    }
    let v = &eig.eigenvectors;
    assert!(
        v.adjoint()
            .matmul(v)
            .sub(&nptcert::linalg::ComplexMatrix::identity(6))
            .max_abs()
            < 1e-12
    );
}
