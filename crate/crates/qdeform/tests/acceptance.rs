//! Acceptance battery: one test per criterion, each printing a single
//! `criterion N: PASS/FAIL` line with the measured values.
//!
//! Two sub-claims are recorded as honest FAIL lines without panicking,
//! because exact computation contradicts them (details in the line and in
//! the matching unit tests):
//!   - criterion 2's block profile for the order-18 group algebra, which
//!     matches the inversion-action variant of the group rather than the
//!     swap-action group the construction mandates;
//!   - criterion 8's strictly-positive 2-cocycle residual: the twist is
//!     supported on commuting group-likes and is a genuine 2-cocycle, so
//!     the residual is exactly zero.
//! Every other numbered claim is asserted.

use std::time::{Duration, Instant};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use qdeform::abelian::{pairing, AbelianGroup, Endomorphism};
use qdeform::analyze::{
    center_dim, cocycle_residual, duality_checks, flags, verify_hopf, wedderburn,
};
use qdeform::deform::{
    build_action, commutation_phase, deform_algebra, deform_morphism, deform_product_direct,
    deform_product_spectral, deform_quantum_group, deform_quantum_group_checked, deformed_norm,
    double_deformation_matches_original, norm_one_bound, spectral_project, twist_coproduct,
    twist_element, ActionDatum, DeformationDatum, FastEngine,
};
use qdeform::groups::{
    d4_example, general_linear_2, order18_example, semidirect_product, symmetric_group_3,
    FiniteGroup, TorusEmbedding,
};
use qdeform::hopf::{
    crossed_product_algebra, dual_algebra, function_hopf, group_hopf, restriction_morphism,
    tensor_mul, tensor_sparse, tensor_star, tensor_unit, AlgebraMorphism, HopfAlgebra,
};
use qdeform::linalg::{sv_normalize, sv_scale, SparseVec};
use qdeform::scalar::Cyclotomic;

fn basis(i: usize) -> SparseVec {
    vec![(i, Cyclotomic::one())]
}

/// Group, torus embedding, function Hopf algebra, canonical datum,
/// restriction morphism, and verified action for a named example.
struct Workbench {
    emb: TorusEmbedding,
    a: HopfAlgebra,
    d: DeformationDatum,
    pi: AlgebraMorphism,
    act: ActionDatum,
}

fn workbench(pair: (FiniteGroup, TorusEmbedding)) -> Workbench {
    let (g, emb) = pair;
    let a = function_hopf(&g);
    let d = DeformationDatum::canonical(emb.torus.clone()).unwrap();
    let pi = restriction_morphism(&g, &emb);
    let act = build_action(&a, &pi, &d).unwrap();
    Workbench { emb, a, d, pi, act }
}

#[test]
fn criterion_01_order18_is_a_noncommutative_noncocommutative_quantum_group() {
    let t0 = Instant::now();
    let w = workbench(order18_example());
    let (a_j, _act, checks) = deform_quantum_group_checked(&w.a, &w.pi, &w.d).unwrap();
    assert_eq!(a_j.alg.dim(), 18);
    assert!(!checks.is_empty());
    let failed: Vec<_> = checks.iter().filter(|c| !c.passed).collect();
    assert!(failed.is_empty(), "failed axioms: {failed:?}");
    let (comm, cocomm) = flags(&a_j);
    assert!(!comm, "deformed product should be noncommutative");
    assert!(!cocomm, "coproduct should be noncocommutative");
    let el = t0.elapsed();
    assert!(el < Duration::from_secs(30), "took {el:?}");
    println!(
        "criterion 1: PASS — dim 18, {} axioms exact, flags (noncommutative, noncocommutative), {:.1?}",
        checks.len(),
        el
    );
}

#[test]
fn criterion_02_block_profiles_of_the_two_order18_algebras() {
    // group algebra of the order-18 group (swap action on the torus)
    let (g, _) = order18_example();
    let b = group_hopf(&g);
    let blocks = wedderburn(&b.alg, 0).unwrap();
    let center = center_dim(&b.alg);
    let claimed = vec![1, 1, 2, 2, 2, 2];
    let first_clause = blocks == claimed && center == 6;
    // pin the honest values so regressions surface
    assert_eq!(blocks, vec![1, 1, 1, 1, 1, 1, 2, 2, 2]);
    assert_eq!(center, 9);

    // the claimed profile belongs to the inversion-action variant: verify
    // the method reproduces it on the group those numbers describe
    let torus = AbelianGroup::new(vec![3, 3]).unwrap();
    let z2 = FiniteGroup::cyclic(2);
    let neg = Endomorphism::identity(&torus).negate(&torus);
    let gv = semidirect_product(&torus, &z2, &[Endomorphism::identity(&torus), neg]).unwrap();
    let bv = group_hopf(&gv);
    assert_eq!(wedderburn(&bv.alg, 0).unwrap(), claimed);
    assert_eq!(center_dim(&bv.alg), 6);

    // crossed product C(S3) x| Z/3 by conjugation by the 3-cycle
    let (s3, c3, _) = symmetric_group_3();
    let z3 = FiniteGroup::cyclic(3);
    let mut tau: Vec<Vec<usize>> = Vec::new();
    let mut ce = s3.id();
    for _ in 0..3 {
        let inv = s3.inv(ce);
        tau.push((0..6).map(|x| s3.mul(s3.mul(ce, x), inv)).collect());
        ce = s3.mul(ce, c3);
    }
    let cp = crossed_product_algebra(&s3, &z3, &tau).unwrap();
    let cp_blocks = wedderburn(&cp, 0).unwrap();
    let cp_center = center_dim(&cp);
    assert_eq!(cp_blocks, vec![1, 1, 1, 1, 1, 1, 1, 1, 1, 3]);
    assert_eq!(cp_center, 10);

    if first_clause {
        println!("criterion 2: PASS — group algebra blocks {blocks:?} (center {center}), crossed product {cp_blocks:?} (center {cp_center})");
    } else {
        println!(
            "criterion 2: FAIL — group algebra of the swap-action order-18 group has blocks \
             {blocks:?} (center {center}), not the claimed {claimed:?} (center 6); the claimed \
             profile is measured on the inversion-action variant instead; crossed product \
             clause passes: {cp_blocks:?} (center {cp_center})"
        );
    }
}

#[test]
fn criterion_03_deforming_back_with_the_negated_datum_restores_the_original() {
    // order 18: literal two-step round trip on materialized tables
    let w = workbench(order18_example());
    let a_j = deform_algebra(&w.a.alg, &w.act, w.d.j()).unwrap();
    let act_j = ActionDatum::new(w.d.h().clone(), &a_j, w.act.maps().to_vec()).unwrap();
    let neg = DeformationDatum::new(w.emb.torus.clone(), w.d.s().negate(&w.emb.torus)).unwrap();
    let back = deform_algebra(&a_j, &act_j, neg.j()).unwrap();
    assert!(back.tables_equal(&w.a.alg), "order-18 round trip drifted");

    // gl2 q=4: the same identity through the counting engine, all pairs
    let w4 = workbench(general_linear_2(4).unwrap());
    let eng = FastEngine::new(&w4.a.alg, &w4.act, w4.d.j()).unwrap();
    double_deformation_matches_original(&eng).unwrap();
    println!("criterion 3: PASS — exact structure-constant round trip at dim 18 (tables) and dim 180 (all pairs)");
}

#[test]
fn criterion_04_associativity_exhaustive_and_under_singular_j() {
    let t0 = Instant::now();
    // all 18^3 basis triples of the deformed order-18 algebra
    let w = workbench(order18_example());
    let a_j = deform_algebra(&w.a.alg, &w.act, w.d.j()).unwrap();
    for i in 0..18 {
        for j in 0..18 {
            let p_ij = a_j.basis_product(i, j);
            for k in 0..18 {
                let lhs = a_j.mul_sparse(&p_ij, &basis(k));
                let rhs = a_j.mul_sparse(&basis(i), &a_j.basis_product(j, k));
                assert_eq!(lhs, rhs, "triple ({i},{j},{k})");
            }
        }
    }

    // dim-8 algebra with five random singular skew J on (Z/2)^4:
    // skewness with respect to the order-2 pairing means a symmetric
    // matrix, so sample symmetric singular matrices over F_2
    let wd = workbench(d4_example());
    let h = wd.d.h().clone();
    let nh = h.order() as usize;
    let mut rng = ChaCha8Rng::seed_from_u64(0xacc4);
    let mut singular: Vec<Endomorphism> = Vec::new();
    let mut seen: Vec<Vec<Vec<i64>>> = Vec::new();
    while singular.len() < 5 {
        let mut m = vec![vec![0i64; 4]; 4];
        for r in 0..4 {
            for c in r..4 {
                let bit = i64::from(rng.random_range(0..2u8));
                m[r][c] = bit;
                m[c][r] = bit;
            }
        }
        if seen.contains(&m) {
            continue;
        }
        let jm = match Endomorphism::new(&h, &m) {
            Ok(e) => e,
            Err(_) => continue,
        };
        if jm.is_invertible(&h) {
            continue;
        }
        // confirm skewness against the pairing itself
        let mut skew = true;
        'outer: for x in 0..nh {
            let ex = h.element_at(x);
            for y in 0..nh {
                let ey = h.element_at(y);
                let lhs = pairing(&h, &jm.apply(&h, &ex), &ey);
                let rhs = pairing(&h, &ex, &jm.apply(&h, &ey));
                if lhs.mul(&rhs) != Cyclotomic::one() {
                    skew = false;
                    break 'outer;
                }
            }
        }
        if !skew {
            continue;
        }
        seen.push(m);
        singular.push(jm);
    }
    let dim = wd.a.alg.dim();
    for (jn, jm) in singular.iter().enumerate() {
        for trip in 0..200 {
            let (i, j, k) = (
                rng.random_range(0..dim),
                rng.random_range(0..dim),
                rng.random_range(0..dim),
            );
            let xy = deform_product_direct(&wd.a.alg, &wd.act, jm, &basis(i), &basis(j));
            let yz = deform_product_direct(&wd.a.alg, &wd.act, jm, &basis(j), &basis(k));
            let lhs = deform_product_direct(&wd.a.alg, &wd.act, jm, &xy, &basis(k));
            let rhs = deform_product_direct(&wd.a.alg, &wd.act, jm, &basis(i), &yz);
            assert_eq!(lhs, rhs, "singular J #{jn}, triple #{trip} ({i},{j},{k})");
        }
    }
    let el = t0.elapsed();
    assert!(el < Duration::from_secs(120), "took {el:?}");
    println!(
        "criterion 4: PASS — 5832 exhaustive triples at dim 18 and 5 x 200 random triples under singular J at dim 8, exact, {:.1?}",
        el
    );
}

#[test]
fn criterion_05_spectral_and_direct_products_agree() {
    // all 324 basis pairs at order 18
    let w = workbench(order18_example());
    for i in 0..18 {
        for k in 0..18 {
            let s = deform_product_spectral(&w.a.alg, &w.act, w.d.j(), &basis(i), &basis(k))
                .unwrap();
            let d = deform_product_direct(&w.a.alg, &w.act, w.d.j(), &basis(i), &basis(k));
            assert_eq!(s, d, "pair ({i},{k})");
        }
    }
    // 500 random basis pairs at gl2 q=4 (dim 180)
    let w4 = workbench(general_linear_2(4).unwrap());
    let mut rng = ChaCha8Rng::seed_from_u64(0xacc5);
    for n in 0..500 {
        let (i, k) = (rng.random_range(0..180), rng.random_range(0..180));
        let s = deform_product_spectral(&w4.a.alg, &w4.act, w4.d.j(), &basis(i), &basis(k))
            .unwrap();
        let d = deform_product_direct(&w4.a.alg, &w4.act, w4.d.j(), &basis(i), &basis(k));
        assert_eq!(s, d, "random pair #{n} ({i},{k})");
    }
    println!("criterion 5: PASS — spectral = direct on 324 exhaustive pairs (dim 18) and 500 random pairs (dim 180), exact");
}

#[test]
fn criterion_06_torus_function_algebra_is_undeformed_and_projection_intertwines() {
    let w = workbench(order18_example());
    let a_j = deform_quantum_group(&w.a, &w.pi, &w.d).unwrap();

    // C(T)_J = C(T) exactly
    let tg = FiniteGroup::from_abelian(&w.emb.torus);
    let ct = function_hopf(&tg);
    let emb_t = TorusEmbedding {
        torus: w.emb.torus.clone(),
        map: (0..w.emb.torus.order() as usize).collect(),
    };
    let pi_t = restriction_morphism(&tg, &emb_t);
    let act_t = build_action(&ct, &pi_t, &w.d).unwrap();
    let ct_j = deform_algebra(&ct.alg, &act_t, w.d.j()).unwrap();
    assert!(ct_j.tables_equal(&ct.alg), "torus algebra moved");

    // (pi (x) pi) Delta_J = Delta_T pi on every basis element
    let nt = ct.alg.dim();
    for i in 0..18 {
        let mut lhs: SparseVec = Vec::new();
        for &(p, ref c) in &a_j.coproduct[i] {
            let (x, y) = (p / 18, p % 18);
            let t = tensor_sparse(nt, &w.pi.cols[x], &w.pi.cols[y]);
            for (q, cc) in t {
                lhs.push((q, cc.mul(c)));
            }
        }
        let mut rhs: SparseVec = Vec::new();
        for &(t, ref c) in &w.pi.cols[i] {
            for (q, cc) in &ct.coproduct[t] {
                rhs.push((*q, cc.mul(c)));
            }
        }
        assert_eq!(sv_normalize(lhs), sv_normalize(rhs), "basis element {i}");
    }
    println!("criterion 6: PASS — C(T)_J = C(T) exactly and (pi (x) pi) Delta_J = Delta_T pi on all 18 basis elements");
}

/// Locate a basis point whose spectral support contains a degree pair with a
/// nontrivial commutation phase, then verify both homogeneous-element phase
/// relations exactly through the direct deformed product. (Two-sided orbits
/// are never free when the group has central torus elements — they stabilize
/// every point diagonally — so the search keys on spectral support instead.)
fn homogeneous_witness(w: &Workbench, label: &str) -> (usize, usize, usize) {
    let h = w.d.h();
    let nh = h.order() as usize;
    let jinv = w.d.j().inverse(h).unwrap();
    let dim = w.a.alg.dim();
    let mut found = None;
    'points: for i in 0..dim {
        let degrees: Vec<usize> = (0..nh)
            .filter(|&u| !spectral_project(&w.act, u, &basis(i)).is_empty())
            .collect();
        for &u in &degrees {
            for &v in &degrees {
                if commutation_phase(h, w.d.j(), u, v).unwrap() != Cyclotomic::one() {
                    found = Some((i, u, v));
                    break 'points;
                }
            }
        }
    }
    let (i, iu, iv) =
        found.unwrap_or_else(|| panic!("no homogeneous witness pair found on {label}"));
    let phase = commutation_phase(h, w.d.j(), iu, iv).unwrap();
    assert_ne!(phase, Cyclotomic::one(), "no nontrivial phase on {label}");

    let a = spectral_project(&w.act, iu, &basis(i));
    let b = spectral_project(&w.act, iv, &basis(i));
    assert!(!a.is_empty() && !b.is_empty());
    let ab = deform_product_direct(&w.a.alg, &w.act, w.d.j(), &a, &b);
    let ba = deform_product_direct(&w.a.alg, &w.act, w.d.j(), &b, &a);
    assert!(!ab.is_empty(), "witness product vanished on {label}");
    // x_J of homogeneous elements is the plain product times pair(J^{-1}u, v)
    let plain = w.a.alg.mul_sparse(&a, &b);
    let pu = pairing(h, &jinv.apply(h, &h.element_at(iu)), &h.element_at(iv));
    assert_eq!(ab, sv_scale(&plain, &pu), "product phase relation on {label}");
    // commutation: a x_J b = pair(2 J^{-1} u, v) b x_J a
    assert_eq!(ab, sv_scale(&ba, &phase), "commutation relation on {label}");
    (i, iu, iv)
}

#[test]
fn criterion_07_triviality_boundary_across_the_example_family() {
    // D4: deformation is the identity on structure constants
    let wd = workbench(d4_example());
    let d4_j = deform_algebra(&wd.a.alg, &wd.act, wd.d.j()).unwrap();
    assert!(d4_j.tables_equal(&wd.a.alg), "D4 deformation moved");

    // gl2 q=2: trivial torus, deformation commutative (and equal)
    let w2 = workbench(general_linear_2(2).unwrap());
    let a2_j = deform_algebra(&w2.a.alg, &w2.act, w2.d.j()).unwrap();
    assert!(a2_j.tables_equal(&w2.a.alg));
    let mut comm2 = true;
    for i in 0..a2_j.dim() {
        for k in 0..a2_j.dim() {
            if a2_j.basis_product(i, k) != a2_j.basis_product(k, i) {
                comm2 = false;
            }
        }
    }
    assert!(comm2, "q=2 deformation not commutative");

    // gl2 q=3: doubled torus has exponent 2, so all commutation phases are
    // squares of order-2 characters = 1: commutative, checked on all pairs
    let w3 = workbench(general_linear_2(3).unwrap());
    let eng3 = FastEngine::new(&w3.a.alg, &w3.act, w3.d.j()).unwrap();
    let d3 = w3.a.alg.dim();
    let mut changed3 = false;
    for i in 0..d3 {
        for k in 0..i {
            assert_eq!(
                eng3.product_sparse(i, k),
                eng3.product_sparse(k, i),
                "q=3 pair ({i},{k})"
            );
        }
        for k in 0..d3 {
            if eng3.product_sparse(i, k) != w3.a.alg.mul_sparse(&basis(i), &basis(k)) {
                changed3 = true;
            }
        }
    }

    // gl2 q=4: noncommutative with an exact homogeneous witness
    let w4 = workbench(general_linear_2(4).unwrap());
    let (i4, u4, v4) = homogeneous_witness(&w4, "q=4");

    // gl2 q=5 (dim 480): witness search only, budgeted
    let t5 = Instant::now();
    let w5 = workbench(general_linear_2(5).unwrap());
    let (i5, u5, v5) = homogeneous_witness(&w5, "q=5");
    let el5 = t5.elapsed();
    assert!(el5 < Duration::from_secs(300), "q=5 took {el5:?}");

    println!(
        "criterion 7: PASS — D4 and q=2 exactly undeformed; q=3 commutative on all {d3}^2 pairs \
         (tables changed: {changed3}); q=4 witness at point {i4} degrees ({u4},{v4}); \
         q=5 witness at point {i5} degrees ({u5},{v5}) in {:.1?}",
        el5
    );
}

#[test]
fn criterion_08_dual_picture_twist_and_duality() {
    let (g, emb) = order18_example();
    let b = group_hopf(&g);
    let d = DeformationDatum::canonical(emb.torus.clone()).unwrap();
    let tw = twist_element(&b, &emb.map, &emb.torus, d.s()).unwrap();

    // unitarity and the closed-form inverse, re-checked here
    let one2 = tensor_unit(&b.alg);
    let fstar = tensor_star(&b.alg, &tw.f);
    assert_eq!(tensor_mul(&b.alg, &fstar, &tw.f), one2);
    assert_eq!(tensor_mul(&b.alg, &tw.f, &fstar), one2);
    assert_eq!(tensor_mul(&b.alg, &tw.f, &tw.f_inv), one2);
    let nt = emb.torus.order() as usize;
    let nn = emb.torus.pairing_order();
    let scale = Cyclotomic::from_ratio(1, nt as i64);
    let mut closed: SparseVec = Vec::new();
    for a in 0..nt {
        let ea = emb.torus.element_at(a);
        let sa = d.s().apply(&emb.torus, &ea);
        let na = emb.torus.index(&emb.torus.neg(&ea));
        for c in 0..nt {
            let e = qdeform::abelian::pairing_exponent(&emb.torus, &sa, &emb.torus.element_at(c));
            closed.push((
                emb.map[na] * 18 + emb.map[c],
                Cyclotomic::zeta(nn, e as i64).mul(&scale),
            ));
        }
    }
    assert_eq!(tw.f_inv, sv_normalize(closed), "closed-form inverse drifted");

    // counit legs
    let unit = b.alg.unit_sparse();
    let mut left: SparseVec = Vec::new();
    let mut right: SparseVec = Vec::new();
    for &(p, ref c) in &tw.f {
        let (x, y) = (p / 18, p % 18);
        left.push((y, c.mul(&b.counit[x])));
        right.push((x, c.mul(&b.counit[y])));
    }
    assert_eq!(sv_normalize(left), unit);
    assert_eq!(sv_normalize(right), unit);

    // twisted coproduct passes the whole axiom battery (coassociativity included)
    let b_s = twist_coproduct(&b, &tw).unwrap();
    let checks = verify_hopf(&b_s);
    assert!(checks.iter().all(|c| c.passed), "{checks:?}");

    // the residual is exactly zero: the twist is a genuine 2-cocycle
    let r = cocycle_residual(&b, &tw);
    assert!(r <= 1e-9, "residual {r} should vanish");
    let claimed_positive = r > 1e-3;

    // duality against the deformed function algebra, all 18^3 triples
    let w = workbench(order18_example());
    let a_j = deform_quantum_group(&w.a, &w.pi, &w.d).unwrap();
    let dchecks = duality_checks(&a_j, &b_s).unwrap();
    assert!(dchecks.iter().all(|c| c.passed), "{dchecks:?}");

    if claimed_positive {
        println!("criterion 8: PASS — residual {r:.3e} > 1e-3 with all twist and duality clauses exact");
    } else {
        println!(
            "criterion 8: FAIL — cocycle residual is exactly {r:.1e} (the twist is supported on \
             commuting group-likes with trivial diagonal phases, hence a genuine 2-cocycle), not \
             > 1e-3 as claimed; every other clause passes exactly: F unitary, counit legs, \
             closed-form inverse, coassociative twisted coproduct, duality over all 5832 triples"
        );
    }
}

#[test]
fn criterion_09_cstar_norm_battery_on_the_deformed_algebra() {
    let t0 = Instant::now();
    let w = workbench(order18_example());
    let alg = &w.a.alg;
    let j = w.d.j();

    // unit norm
    let none = deformed_norm(alg, &w.act, j, &alg.unit_sparse()).unwrap();
    assert!((none - 1.0).abs() <= 1e-6, "|1| = {none}");

    // faithfulness on the basis
    for i in 0..18 {
        let ni = deformed_norm(alg, &w.act, j, &basis(i)).unwrap();
        assert!(ni > 1e-6, "basis element {i} has norm {ni}");
    }

    let mut rng = ChaCha8Rng::seed_from_u64(0xacc9);
    let mut elements: Vec<SparseVec> = Vec::new();
    for _ in 0..50 {
        let mut v: SparseVec = Vec::new();
        for _ in 0..3 {
            let idx = rng.random_range(0..18);
            let num = rng.random_range(-3i64..=3);
            let pow = rng.random_range(0..3i64);
            v.push((idx, Cyclotomic::from_int(num).mul(&Cyclotomic::zeta(3, pow))));
        }
        let v = sv_normalize(v);
        if v.is_empty() {
            continue;
        }
        elements.push(v);
    }
    let norms: Vec<f64> = elements
        .iter()
        .map(|a| deformed_norm(alg, &w.act, j, a).unwrap())
        .collect();

    for (a, &na) in elements.iter().zip(&norms) {
        // C*-identity |a* x_J a| = |a|^2, relative 1e-6
        let astar = alg.star_sparse(a);
        let aa = deform_product_direct(alg, &w.act, j, &astar, a);
        let naa = deformed_norm(alg, &w.act, j, &aa).unwrap();
        assert!(
            (naa - na * na).abs() <= 1e-6 * (na * na).max(1.0),
            "C* identity: {naa} vs {}",
            na * na
        );
        // l1-style upper bound from the averaged action
        let bound = norm_one_bound(alg, &w.act, a).unwrap();
        assert!(na <= bound + 1e-9, "norm {na} above bound {bound}");
    }
    // submultiplicativity across consecutive sample pairs
    for k in 0..elements.len() - 1 {
        let prod = deform_product_direct(alg, &w.act, j, &elements[k], &elements[k + 1]);
        let np = deformed_norm(alg, &w.act, j, &prod).unwrap();
        assert!(
            np <= norms[k] * norms[k + 1] + 1e-9,
            "submultiplicativity: {np} vs {}",
            norms[k] * norms[k + 1]
        );
    }
    let el = t0.elapsed();
    assert!(el < Duration::from_secs(180), "took {el:?}");
    println!(
        "criterion 9: PASS — unit norm, C*-identity, submultiplicativity, averaged-sup bound and faithfulness on {} samples, {:.1?}",
        elements.len(),
        el
    );
}

#[test]
fn criterion_10_haar_state_is_bi_invariant_on_the_deformation() {
    let w = workbench(order18_example());
    let a_j = deform_quantum_group(&w.a, &w.pi, &w.d).unwrap();
    let unit = a_j.alg.unit_sparse();
    for i in 0..18 {
        let hi = a_j.haar[i].clone();
        let expected = sv_scale(&unit, &hi);
        let mut left: SparseVec = Vec::new();
        let mut right: SparseVec = Vec::new();
        for &(p, ref c) in &a_j.coproduct[i] {
            let (x, y) = (p / 18, p % 18);
            left.push((y, c.mul(&a_j.haar[x])));
            right.push((x, c.mul(&a_j.haar[y])));
        }
        assert_eq!(sv_normalize(left), expected, "left invariance at {i}");
        assert_eq!(sv_normalize(right), expected, "right invariance at {i}");
    }
    println!("criterion 10: PASS — (h (x) id) Delta_J = h(.)1 = (id (x) h) Delta_J exactly on all 18 basis elements");
}

#[test]
fn criterion_11_dual_algebra_blocks_are_deformation_invariant() {
    // order 18
    let w = workbench(order18_example());
    let a_j = deform_quantum_group(&w.a, &w.pi, &w.d).unwrap();
    let da = dual_algebra(&w.a).unwrap();
    let daj = dual_algebra(&a_j).unwrap();
    assert!(da.tables_equal(&daj));
    let w1 = wedderburn(&da, 11).unwrap();
    let w2 = wedderburn(&daj, 17).unwrap();
    assert_eq!(w1, w2);

    // gl2 q=4
    let w4 = workbench(general_linear_2(4).unwrap());
    let a4_j = deform_quantum_group(&w4.a, &w4.pi, &w4.d).unwrap();
    let da4 = dual_algebra(&w4.a).unwrap();
    let daj4 = dual_algebra(&a4_j).unwrap();
    assert!(da4.tables_equal(&daj4));
    let w41 = wedderburn(&da4, 11).unwrap();
    let w42 = wedderburn(&daj4, 17).unwrap();
    assert_eq!(w41, w42);
    println!("criterion 11: PASS — dual blocks invariant: {w1:?} at dim 18, {w41:?} at dim 180");
}

#[test]
fn criterion_12_deformed_projection_is_surjective_with_complementary_kernel() {
    let w = workbench(order18_example());
    let a_j = deform_algebra(&w.a.alg, &w.act, w.d.j()).unwrap();

    let tg = FiniteGroup::from_abelian(&w.emb.torus);
    let ct = function_hopf(&tg);
    let emb_t = TorusEmbedding {
        torus: w.emb.torus.clone(),
        map: (0..9).collect(),
    };
    let pi_t = restriction_morphism(&tg, &emb_t);
    let act_t = build_action(&ct, &pi_t, &w.d).unwrap();
    let ct_j = deform_algebra(&ct.alg, &act_t, w.d.j()).unwrap();

    let pi_j = deform_morphism(&a_j, &ct_j, &w.act, &act_t, &w.pi, true).unwrap();
    let rank = pi_j.rank(9);
    assert_eq!(rank, 9, "projection is not surjective");
    let kernel = 18 - rank;
    assert_eq!(kernel, 9);
    assert_eq!(rank + kernel, 18);
    println!("criterion 12: PASS — deformed projection surjective, rank 9 + kernel 9 = dim 18");
}
