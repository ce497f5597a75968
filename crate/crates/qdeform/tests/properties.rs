//! Property-based checks of the engine's structural invariants: spectral
//! resolution, equivariance, star compatibility, associativity under
//! arbitrary skew twists, exact JSON round trips, and the axiom battery
//! across the whole example family.

use std::collections::BTreeMap;

use proptest::prelude::*;

use qdeform::abelian::{pairing, AbelianGroup, Endomorphism};
use qdeform::deform::{
    build_action, deform_product_direct, deform_quantum_group_checked, spectral_project,
    ActionDatum, DeformationDatum,
};
use qdeform::groups::{d4_example, general_linear_2, order18_example, FiniteGroup, TorusEmbedding};
use qdeform::hopf::{
    algebra_from_json, algebra_to_json, function_hopf, group_hopf, hopf_from_json, hopf_to_json,
    restriction_morphism, AlgebraMorphism, HopfAlgebra,
};
use qdeform::linalg::{sv_add_scaled, sv_normalize, SparseVec};
use qdeform::scalar::Cyclotomic;

fn order18_action() -> (HopfAlgebra, DeformationDatum, ActionDatum) {
    let (g, emb) = order18_example();
    let a = function_hopf(&g);
    let d = DeformationDatum::canonical(emb.torus.clone()).unwrap();
    let pi = restriction_morphism(&g, &emb);
    let act = build_action(&a, &pi, &d).unwrap();
    (a, d, act)
}

fn d4_action() -> (HopfAlgebra, DeformationDatum, ActionDatum) {
    let (g, emb) = d4_example();
    let a = function_hopf(&g);
    let d = DeformationDatum::canonical(emb.torus.clone()).unwrap();
    let pi = restriction_morphism(&g, &emb);
    let act = build_action(&a, &pi, &d).unwrap();
    (a, d, act)
}

/// Sparse element of an algebra of dimension `dim` with small exact
/// cyclotomic coefficients.
fn sparse_elem(dim: usize, zord: i64, terms: &[(usize, i64, i64)]) -> SparseVec {
    sv_normalize(
        terms
            .iter()
            .map(|&(i, num, pow)| {
                (
                    i % dim,
                    Cyclotomic::from_int(num).mul(&Cyclotomic::zeta(zord as u32, pow)),
                )
            })
            .collect(),
    )
}

fn term_strategy(dim: usize) -> impl Strategy<Value = Vec<(usize, i64, i64)>> {
    prop::collection::vec((0..dim, -3i64..=3, 0i64..3), 1..4)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(12))]

    #[test]
    fn spectral_projections_resolve_the_identity_and_are_orthogonal(
        terms in term_strategy(18),
        u in 0usize..81,
        v in 0usize..81,
    ) {
        let (a, _d, act) = order18_action();
        let x = sparse_elem(18, 3, &terms);

        // resolution of the identity
        let mut total: SparseVec = Vec::new();
        for w in 0..81 {
            total = sv_add_scaled(&total, &spectral_project(&act, w, &x), &Cyclotomic::one());
        }
        prop_assert_eq!(sv_normalize(total), x.clone());

        // orthogonal idempotents
        let px = spectral_project(&act, u, &x);
        let ppx = spectral_project(&act, u, &px);
        prop_assert_eq!(&ppx, &px);
        if u != v {
            let cross = spectral_project(&act, v, &px);
            prop_assert!(cross.is_empty());
        }
        drop(a);
    }

    #[test]
    fn deformed_product_is_equivariant_and_star_antimultiplicative(
        ta in term_strategy(18),
        tb in term_strategy(18),
        s in 0usize..81,
    ) {
        let (a, d, act) = order18_action();
        let x = sparse_elem(18, 3, &ta);
        let y = sparse_elem(18, 3, &tb);
        let xy = deform_product_direct(&a.alg, &act, d.j(), &x, &y);

        // each alpha_s is an automorphism of the deformed product
        let lhs = act.apply(s, &xy);
        let rhs = deform_product_direct(&a.alg, &act, d.j(), &act.apply(s, &x), &act.apply(s, &y));
        prop_assert_eq!(lhs, rhs);

        // the original involution is an involution for x_J as well
        let star_xy = a.alg.star_sparse(&xy);
        let yx_star = deform_product_direct(
            &a.alg,
            &act,
            d.j(),
            &a.alg.star_sparse(&y),
            &a.alg.star_sparse(&x),
        );
        prop_assert_eq!(star_xy, yx_star);
    }

    #[test]
    fn deformed_product_is_associative_for_every_skew_twist_on_the_doubled_torus(
        bits in prop::collection::vec(0i64..2, 10),
        ta in term_strategy(8),
        tb in term_strategy(8),
        tc in term_strategy(8),
    ) {
        let (a, d, act) = d4_action();
        let h = d.h().clone();
        // symmetric matrices over F_2 are exactly the skew maps for the
        // order-2 pairing; invertibility is NOT required
        let mut m = vec![vec![0i64; 4]; 4];
        let mut it = bits.into_iter();
        for r in 0..4 {
            for c in r..4 {
                let b = it.next().unwrap();
                m[r][c] = b;
                m[c][r] = b;
            }
        }
        let jm = Endomorphism::new(&h, &m).unwrap();
        for x in 0..16 {
            let ex = h.element_at(x);
            for y in 0..16 {
                let ey = h.element_at(y);
                let l = pairing(&h, &jm.apply(&h, &ex), &ey);
                let r = pairing(&h, &ex, &jm.apply(&h, &ey));
                prop_assert_eq!(l.mul(&r), Cyclotomic::one());
            }
        }

        let x = sparse_elem(8, 2, &ta);
        let y = sparse_elem(8, 2, &tb);
        let z = sparse_elem(8, 2, &tc);
        let xy = deform_product_direct(&a.alg, &act, &jm, &x, &y);
        let yz = deform_product_direct(&a.alg, &act, &jm, &y, &z);
        let lhs = deform_product_direct(&a.alg, &act, &jm, &xy, &z);
        let rhs = deform_product_direct(&a.alg, &act, &jm, &x, &yz);
        prop_assert_eq!(lhs, rhs);
    }

    #[test]
    fn json_round_trips_are_exact(
        which in 0usize..3,
        key in "[a-z]{1,8}",
        value in "[a-z0-9 ]{0,16}",
    ) {
        let h = match which {
            0 => {
                let (g, _) = order18_example();
                group_hopf(&g)
            }
            1 => {
                let (g, _) = d4_example();
                function_hopf(&g)
            }
            _ => {
                let (g, emb) = order18_example();
                let a = function_hopf(&g);
                let d = DeformationDatum::canonical(emb.torus.clone()).unwrap();
                let pi = restriction_morphism(&g, &emb);
                qdeform::deform::deform_quantum_group(&a, &pi, &d).unwrap()
            }
        };
        let mut prov = BTreeMap::new();
        prov.insert(key, value);

        // algebra level
        let aj = algebra_to_json(&h.alg, prov.clone()).unwrap();
        let text = serde_json::to_string(&aj).unwrap();
        let parsed: qdeform::hopf::AlgebraJson = serde_json::from_str(&text).unwrap();
        let back = algebra_from_json(&parsed).unwrap();
        prop_assert!(back.tables_equal(&h.alg));

        // full Hopf level
        let hj = hopf_to_json(&h, prov).unwrap();
        let text = serde_json::to_string(&hj).unwrap();
        let parsed: qdeform::hopf::HopfJson = serde_json::from_str(&text).unwrap();
        let hb = hopf_from_json(&parsed).unwrap();
        prop_assert!(hb.alg.tables_equal(&h.alg));
        prop_assert_eq!(&hb.coproduct, &h.coproduct);
        prop_assert_eq!(&hb.counit, &h.counit);
        prop_assert_eq!(&hb.antipode, &h.antipode);
        prop_assert_eq!(&hb.haar, &h.haar);
    }

    #[test]
    fn deformation_datum_serialization_round_trips(
        swap_sign in any::<bool>(),
    ) {
        let torus = AbelianGroup::new(vec![3, 3]).unwrap();
        let d = DeformationDatum::canonical(torus.clone()).unwrap();
        let d = if swap_sign {
            DeformationDatum::new(torus.clone(), d.s().negate(&torus)).unwrap()
        } else {
            d
        };
        let j1 = serde_json::to_string(&d.to_json()).unwrap();
        let parsed: qdeform::deform::DeformationDatumJson = serde_json::from_str(&j1).unwrap();
        let d2 = DeformationDatum::from_json(&parsed).unwrap();
        let j2 = serde_json::to_string(&d2.to_json()).unwrap();
        prop_assert_eq!(j1, j2);
    }
}

/// Every example in the family deforms into a quantum group whose axiom
/// battery (full below dimension 64, sampled tiers above) passes.
#[test]
fn example_family_passes_its_axiom_tiers() {
    let mut cases: Vec<(&str, FiniteGroup, TorusEmbedding)> = Vec::new();
    let (g, e) = order18_example();
    cases.push(("order18", g, e));
    let (g, e) = d4_example();
    cases.push(("d4", g, e));
    for q in [2usize, 3, 4, 5] {
        let (g, e) = general_linear_2(q).unwrap();
        cases.push(("gl2", g, e));
    }
    for (name, g, emb) in cases {
        let a = function_hopf(&g);
        let d = DeformationDatum::canonical(emb.torus.clone()).unwrap();
        let pi: AlgebraMorphism = restriction_morphism(&g, &emb);
        let (a_j, _act, checks) =
            deform_quantum_group_checked(&a, &pi, &d).unwrap_or_else(|e| {
                panic!("{name} (order {}) failed to deform: {e:?}", g.order())
            });
        assert_eq!(a_j.alg.dim(), g.order());
        let failed: Vec<_> = checks.iter().filter(|c| !c.passed).collect();
        assert!(
            failed.is_empty(),
            "{name} (order {}): failed checks {failed:?}",
            g.order()
        );
    }
}
