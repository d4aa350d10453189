//! Cross-module invariants on the modular catalog.

use liecert::catalog::{cartan, classical, desk_catalog, witt};
use liecert::cohomology::{cohomology_unsplit, h1, h2, LieModule};
use liecert::derivations::{derivation_algebra, is_derivation};
use liecert::exact::{Field, PrimeField};
use liecert::extensions::{central_extension, is_covering, lift_derivation, uce};
use liecert::liecore::json::{from_json, to_json};
use liecert::liecore::AnyAlgebra;
use proptest::prelude::*;

fn f5() -> PrimeField {
    PrimeField::new(5).unwrap()
}

#[test]
fn out_dim_is_h1_adjoint_and_inner_is_n_minus_center() {
    for p in [5, 7] {
        for l in desk_catalog(p).unwrap() {
            let der = derivation_algebra(&l).unwrap();
            assert_eq!(der.out_dim, h1(&LieModule::adjoint(&l)).dim, "{}", l.name());
            assert_eq!(der.inner.dim(), l.dim() - l.center().dim(), "{}", l.name());
            for d in &der.der_basis {
                assert!(is_derivation(&l, d));
            }
        }
    }
}

#[test]
fn split_and_unsplit_h2_agree_on_hamiltonian() {
    let l = cartan::hamiltonian_d2(1, 5).unwrap();
    let m = LieModule::trivial(&l);
    let split = h2(&m);
    let unsplit = cohomology_unsplit(&m, 2).unwrap();
    assert_eq!(split.dim, unsplit.dim);
    assert_eq!(split.dim, uce(&l).unwrap().hat_center.dim());
}

#[test]
fn json_round_trip_preserves_brackets() {
    for l in desk_catalog(5).unwrap() {
        let AnyAlgebra::Prime(back) = from_json(&to_json(&l)).unwrap() else { panic!() };
        assert_eq!(back.dim(), l.dim());
        assert_eq!(back.labels(), l.labels());
        for i in 0..l.dim() {
            for j in 0..l.dim() {
                assert_eq!(back.basis_bracket(i, j), l.basis_bracket(i, j));
            }
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(32))]

    #[test]
    fn nontrivial_cocycles_of_witt_give_coverings(c in 1u64..5) {
        let w = witt::witt(5).unwrap();
        let reps = h2(&LieModule::trivial(&w)).cocycle_reps;
        prop_assert_eq!(reps.len(), 1);
        let f = f5();
        let phi: Vec<u64> = reps[0].iter().map(|x| f.mul(x, &c)).collect();
        let ext = central_extension(&w, &[phi]).unwrap();
        prop_assert!(ext.total.validate().passed());
        prop_assert!(is_covering(&ext));
        prop_assert_eq!(ext.total.center().dim(), 1);
    }

    #[test]
    fn lifted_derivations_of_psl5_are_derivations(coords in prop::collection::vec(0u64..5, 24)) {
        let g = classical::psl(f5(), 5).unwrap();
        let der = derivation_algebra(&g).unwrap();
        prop_assert_eq!(der.dim(), coords.len());
        let d = der.matrix_of(&coords);
        let u = uce(&g).unwrap();
        let lifted = lift_derivation(&u, &d).unwrap();
        prop_assert!(is_derivation(&u.hat, &lifted));
        prop_assert_eq!(u.delta.mul(&lifted), d.mul(&u.delta));
    }

    #[test]
    fn sl_n_center_matches_divisibility(n in 2usize..6) {
        let l = classical::sl(f5(), n).unwrap();
        let expect = usize::from(n % 5 == 0);
        prop_assert_eq!(l.center().dim(), expect);
        prop_assert_eq!(h1(&LieModule::trivial(&l)).dim, 0);
    }
}
