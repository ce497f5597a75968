use super::*;
use crate::abelian::{AbelianGroup, Endomorphism};
use crate::deform::{deform_quantum_group, twist_coproduct, twist_element, DeformationDatum};
use crate::groups::{d4_example, order18_example, semidirect_product, symmetric_group_3, FiniteGroup};
use crate::hopf::{
    crossed_product_algebra, dual_algebra, function_hopf, group_hopf, restriction_morphism,
    tensor_sparse,
};
use crate::linalg::sv_normalize;

fn order18_deformed() -> (HopfAlgebra, HopfAlgebra, DeformationDatum) {
    let (g, emb) = order18_example();
    let a = function_hopf(&g);
    let datum = DeformationDatum::canonical(emb.torus.clone()).unwrap();
    let pi = restriction_morphism(&g, &emb);
    let a_j = deform_quantum_group(&a, &pi, &datum).unwrap();
    (a, a_j, datum)
}

fn order18_twist() -> (HopfAlgebra, Twist) {
    let (g, emb) = order18_example();
    let b = group_hopf(&g);
    let datum = DeformationDatum::canonical(emb.torus.clone()).unwrap();
    let tw = twist_element(&b, &emb.map, datum.torus(), datum.s()).unwrap();
    (b, tw)
}

#[test]
fn function_algebra_center_is_everything_and_blocks_are_ones() {
    let (g, _, _) = symmetric_group_3();
    let h = function_hopf(&g);
    assert_eq!(center_dim(&h.alg), 6);
    assert_eq!(wedderburn(&h.alg, 0).unwrap(), vec![1; 6]);
    assert_eq!(flags(&h), (true, false));
}

#[test]
fn group_algebra_blocks_for_s3_are_seed_independent() {
    let (g, _, _) = symmetric_group_3();
    let b = group_hopf(&g);
    assert_eq!(center_dim(&b.alg), 3);
    for seed in [0u64, 1, 7, 0xfeed] {
        assert_eq!(wedderburn(&b.alg, seed).unwrap(), vec![1, 1, 2]);
    }
    assert_eq!(flags(&b), (false, true));
}

#[test]
fn order18_group_algebra_blocks_split_by_flip_choice() {
    // the swap flip gives Z/3 x S3: nine classes, blocks {1^6, 2^3}
    let (g, _) = order18_example();
    let b = group_hopf(&g);
    assert_eq!(center_dim(&b.alg), 9);
    assert_eq!(wedderburn(&b.alg, 0).unwrap(), vec![1, 1, 1, 1, 1, 1, 2, 2, 2]);

    // the negation flip gives the generalized dihedral group: six classes,
    // blocks {1, 1, 2, 2, 2, 2} (two linear and four two-dimensional)
    let torus = AbelianGroup::new(vec![3, 3]).unwrap();
    let z2 = FiniteGroup::cyclic(2);
    let id = Endomorphism::identity(&torus);
    let neg = id.negate(&torus);
    let gneg = semidirect_product(&torus, &z2, &[id, neg]).unwrap();
    let bneg = group_hopf(&gneg);
    assert_eq!(center_dim(&bneg.alg), 6);
    assert_eq!(wedderburn(&bneg.alg, 0).unwrap(), vec![1, 1, 2, 2, 2, 2]);
}

#[test]
fn crossed_product_blocks_match_the_conjugation_action() {
    // C(S3) x| Z/3 with Z/3 acting by conjugation by the 3-cycle: the three
    // rotations are fixed points (each contributing C*(Z/3) = three lines)
    // and the three transpositions form one free orbit (one M_3 block)
    let (g, c3, _) = symmetric_group_3();
    let z3 = FiniteGroup::cyclic(3);
    let mut tau: Vec<Vec<usize>> = Vec::new();
    let mut ce = g.id();
    for _ in 0..3 {
        let inv = g.inv(ce);
        tau.push((0..6).map(|x| g.mul(g.mul(ce, x), inv)).collect());
        ce = g.mul(ce, c3);
    }
    let a = crossed_product_algebra(&g, &z3, &tau).unwrap();
    assert_eq!(a.dim(), 18);
    assert_eq!(center_dim(&a), 10);
    assert_eq!(wedderburn(&a, 0).unwrap(), vec![1, 1, 1, 1, 1, 1, 1, 1, 1, 3]);
}

#[test]
fn deformed_order18_flags_blocks_and_dual_invariance() {
    let (a, a_j, _) = order18_deformed();
    assert_eq!(flags(&a), (true, false));
    assert_eq!(flags(&a_j), (false, false));
    assert!(!a.alg.tables_equal(&a_j.alg));

    // the deformed algebra itself splits as C^9 (+) M_3: the torus coset
    // stays pointwise, the flip coset becomes a full matrix block
    assert_eq!(center_dim(&a_j.alg), 10);
    assert_eq!(
        wedderburn(&a_j.alg, 0).unwrap(),
        vec![1, 1, 1, 1, 1, 1, 1, 1, 1, 3]
    );

    // the dual algebra is untouched by deformation: same structure constants
    let da = dual_algebra(&a).unwrap();
    let daj = dual_algebra(&a_j).unwrap();
    assert!(da.tables_equal(&daj));
    assert_eq!(wedderburn(&da, 3).unwrap(), wedderburn(&daj, 5).unwrap());
}

#[test]
fn d4_deformation_is_trivial_and_flagged_commutative() {
    let (g, emb) = d4_example();
    let a = function_hopf(&g);
    let datum = DeformationDatum::canonical(emb.torus.clone()).unwrap();
    let pi = restriction_morphism(&g, &emb);
    let a_j = deform_quantum_group(&a, &pi, &datum).unwrap();
    assert!(a.alg.tables_equal(&a_j.alg));
    assert_eq!(flags(&a_j), (true, false));
}

#[test]
fn verify_hopf_reports_all_pass_and_finds_broken_antipode() {
    let (g, _, _) = symmetric_group_3();
    let h = function_hopf(&g);
    let checks = verify_hopf(&h);
    assert!(!checks.is_empty());
    assert!(checks.iter().all(|c| c.passed));

    // zero out the antipode of C(Z/2): the antipode laws must fail with a
    // witness, while plain algebra axioms keep passing
    let z2 = FiniteGroup::cyclic(2);
    let mut broken = function_hopf(&z2);
    for col in broken.antipode.iter_mut() {
        col.clear();
    }
    let checks = verify_hopf(&broken);
    let antipode_failures: Vec<_> = checks
        .iter()
        .filter(|c| c.name.starts_with("antipode") && !c.passed)
        .collect();
    assert!(!antipode_failures.is_empty());
    assert!(antipode_failures.iter().all(|c| c.witness.is_some()));
    assert!(checks.iter().any(|c| c.name == "associativity" && c.passed));
}

#[test]
fn cocycle_residual_vanishes_for_bicharacter_twists_and_detects_failures() {
    let (b, tw) = order18_twist();

    // the trivial twist 1 (x) 1 is a genuine 2-cocycle
    let unit = b.alg.unit_sparse();
    let trivial = Twist {
        f: sv_normalize(tensor_sparse(b.alg.dim(), &unit, &unit)),
        f_inv: sv_normalize(tensor_sparse(b.alg.dim(), &unit, &unit)),
    };
    assert_eq!(cocycle_residual(&b, &trivial), 0.0);

    // So is the canonical order-18 twist.  F is supported on commuting
    // group-like elements, so the whole identity lives in the group algebra
    // of T^3; expanding with the bicharacter rules and the vanishing
    // diagonal phases <Ss,s> = 1, both sides collapse to the same element
    //   (1/|T|) <Sp,r> [q = pr],
    // so the residual must be exactly zero.
    let r = cocycle_residual(&b, &tw);
    assert!(r <= 1e-12, "residual {} unexpectedly large", r);

    // Positive control: a single nontrivial group-like tensor s (x) t is
    // NOT a 2-cocycle.  The two sides are the distinct basis vectors
    // s^2 (x) st (x) t and s (x) st (x) t^2, so the residual is sqrt(2).
    let d = b.alg.dim();
    let (s_idx, t_idx) = (1usize, 3usize);
    let bad = Twist {
        f: vec![(s_idx * d + t_idx, Cyclotomic::one())],
        // the residual only reads `f`; the inverse leg is irrelevant here
        f_inv: vec![(s_idx * d + t_idx, Cyclotomic::one())],
    };
    let rb = cocycle_residual(&b, &bad);
    assert!(
        (rb - 2f64.sqrt()).abs() < 1e-9,
        "control residual {} should be sqrt(2)",
        rb
    );

    // same (T, S) twist living on the abelian group algebra of the torus
    // alone: identical computation, identically zero
    let torus = AbelianGroup::new(vec![3, 3]).unwrap();
    let tg = FiniteGroup::from_abelian(&torus);
    let tb = group_hopf(&tg);
    let datum = DeformationDatum::canonical(torus.clone()).unwrap();
    let emb: Vec<usize> = (0..9).collect();
    let ttw = twist_element(&tb, &emb, datum.torus(), datum.s()).unwrap();
    let ra = cocycle_residual(&tb, &ttw);
    assert!(ra <= 1e-12, "abelian residual {} unexpectedly large", ra);
}

#[test]
fn duality_pairing_exact_for_classical_and_deformed_pairs() {
    // classical: C(G) against C*(G)
    let (g, _) = order18_example();
    let a = function_hopf(&g);
    let b = group_hopf(&g);
    let checks = duality_checks(&a, &b).unwrap();
    assert!(checks.iter().all(|c| c.passed), "{:?}", checks);

    // deformed: A_J against the twisted dual B^S
    let (_, a_j, _) = order18_deformed();
    let (bb, tw) = order18_twist();
    let b_s = twist_coproduct(&bb, &tw).unwrap();
    assert!(duality_passes(&a_j, &b_s).unwrap());

    // mismatched S on the two sides: fails with a witness
    let (g2, emb2) = order18_example();
    let b2 = group_hopf(&g2);
    let datum2 = DeformationDatum::canonical(emb2.torus.clone()).unwrap();
    let s_neg = datum2.s().negate(datum2.torus());
    let tw_neg = twist_element(&b2, &emb2.map, datum2.torus(), &s_neg).unwrap();
    let b_wrong = twist_coproduct(&b2, &tw_neg).unwrap();
    let checks = duality_checks(&a_j, &b_wrong).unwrap();
    let product_check = &checks[0];
    assert!(!product_check.passed);
    assert!(product_check.witness.is_some());

    // dimension mismatch is an error, not a failed check
    let (s3, _, _) = symmetric_group_3();
    let small = group_hopf(&s3);
    assert!(matches!(
        duality_checks(&a_j, &small),
        Err(Error::DimensionMismatch { .. })
    ));
}

#[test]
fn report_round_trips_and_renders() {
    let (g, _, _) = symmetric_group_3();
    let b = group_hopf(&g);
    let report = DeformationReport {
        dim: 6,
        commutative: false,
        cocommutative: true,
        deformation_trivial: true,
        axioms: verify_hopf(&b),
        wedderburn_dims: wedderburn(&b.alg, 0).unwrap(),
        center_dim: center_dim(&b.alg),
        cocycle_residual: 0.0,
        duality_pass: Some(true),
        norm_checks: Vec::new(),
        notes: vec!["classical group algebra, no deformation applied".into()],
    };
    assert!(report.all_pass());
    assert!(report.invariants_ok());
    let json = serde_json::to_string(&report).unwrap();
    let back: DeformationReport = serde_json::from_str(&json).unwrap();
    assert_eq!(serde_json::to_string(&back).unwrap(), json);
    let text = report.render_text();
    assert!(text.contains("dual blocks"));
    assert!(text.contains("norm battery       skipped"));

    // a failing axiom and a bad block multiset flip the aggregates
    let mut bad = report.clone();
    bad.axioms[0].passed = false;
    bad.wedderburn_dims = vec![1, 1];
    assert!(!bad.all_pass());
    assert!(!bad.invariants_ok());
}

#[test]
fn noncommutativity_witness_scans_in_order() {
    let (_, a_j, _) = order18_deformed();
    // the torus coset commutes pointwise, so the first witness involves the
    // flip coset; a row-major scan must find one
    let d = a_j.alg.dim();
    let pairs = (0..d).flat_map(|i| (0..d).map(move |j| (i, j)));
    let w = noncommutativity_witness(&a_j.alg, pairs);
    assert!(w.is_some());
    let (i, j) = w.unwrap();
    assert!(i.max(j) >= 9, "witness ({}, {}) should touch the flip coset", i, j);

    // a commutative algebra yields none
    let (g, _, _) = symmetric_group_3();
    let h = function_hopf(&g);
    let pairs = (0..6).flat_map(|i| (0..6).map(move |j| (i, j)));
    assert!(noncommutativity_witness(&h.alg, pairs).is_none());
}
