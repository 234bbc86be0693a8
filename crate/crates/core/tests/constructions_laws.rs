//! The formula-level constructions on the completed corpus doctrines,
//! each validated by its independent universal-property oracle.

use eqcat::completions::{comprehension_completion, eqc};
use eqcat::constructions::{
    check_closure_agreement, check_coarse_reflection, check_coproduct, coarse_reflection,
    coequalizer_eqc, coproduct_eqc, equiv_closure, is_coarse, projective_core, slice_exponential,
    ClosureStrategy,
};
use eqcat::doctrine::{Doc, Doctrine, Fib, PowerDoctrine};
use eqcat::kernel::{CatOps, Data, Fragment, Mor, Ob};
use eqcat::lattice::Lattice;
use eqcat::oracle::{check_slice_exp, check_universal};
use std::rc::Rc;

fn p2() -> Doc {
    Rc::new(PowerDoctrine::new("p2", Rc::new(Lattice::bool2())))
}

fn ph3() -> Doc {
    Rc::new(PowerDoctrine::new("ph3", Rc::new(Lattice::chain(3))))
}

const BUDGET: usize = 1 << 16;

fn rel(ob: Ob, vals: &[u8]) -> Fib {
    let sq_size = vals.len();
    let _ = sq_size;
    Fib::new(ob, Data::Vals(vals.to_vec()))
}

#[test]
fn closure_of_a_single_pair_is_everything() {
    // over two points, relating only (a, b) forces the total relation
    let d = p2();
    let sq = d.cat().product(&Ob::Fin(2), &Ob::Fin(2)).unwrap();
    let rho = rel(sq.ob.clone(), &[0, 1, 0, 0]);
    let c = equiv_closure(d.as_ref(), &Ob::Fin(2), &rho, ClosureStrategy::Fixpoint).unwrap();
    assert_eq!(c.data, Data::Vals(vec![1, 1, 1, 1]));
}

#[test]
fn closure_of_an_equivalence_is_itself() {
    let d = p2();
    let sq = d.cat().product(&Ob::Fin(2), &Ob::Fin(2)).unwrap();
    let delta = d.diagonal(&Ob::Fin(2)).unwrap();
    let c = equiv_closure(d.as_ref(), &Ob::Fin(2), &delta, ClosureStrategy::Fixpoint).unwrap();
    assert_eq!(c.data, delta.data);
    let _ = sq;
}

#[test]
fn closure_symmetrizes_chain_values() {
    // an asymmetric h-valued pair closes to the symmetric h distance
    let d = ph3();
    let sq = d.cat().product(&Ob::Fin(2), &Ob::Fin(2)).unwrap();
    let rho = rel(sq.ob.clone(), &[0, 1, 0, 0]);
    let c = equiv_closure(d.as_ref(), &Ob::Fin(2), &rho, ClosureStrategy::Fixpoint).unwrap();
    assert_eq!(c.data, Data::Vals(vec![2, 1, 1, 2]));
}

#[test]
fn closure_strategies_agree_on_all_boolean_relations() {
    let d = p2();
    let out = check_closure_agreement(d.as_ref(), &Ob::Fin(2), BUDGET);
    assert!(out.verdict.holds(), "{:?}", out.verdict);
    assert_eq!(out.checked, 16);
}

#[test]
fn closure_strategies_agree_on_all_chain_relations() {
    let d = ph3();
    let out = check_closure_agreement(d.as_ref(), &Ob::Fin(2), BUDGET);
    assert!(out.verdict.holds(), "{:?}", out.verdict);
    assert_eq!(out.checked, 81);
}

#[test]
fn coproduct_of_diagonal_objects_carries_the_diagonal_relation() {
    let p = p2();
    let q = eqc(&p, "q", BUDGET);
    let d1 = p.diagonal(&Ob::Fin(1)).unwrap();
    let d2 = p.diagonal(&Ob::Fin(2)).unwrap();
    let a = Ob::rel(Ob::Fin(1), d1.data);
    let b = Ob::rel(Ob::Fin(2), d2.data);
    let c = coproduct_eqc(&q, &a, &b).unwrap();
    let Ob::Rel(base, r) = &c.ob else { panic!() };
    assert_eq!(**base, Ob::Fin(3));
    assert_eq!(*r, p.diagonal(&Ob::Fin(3)).unwrap().data);
}

#[test]
fn coproducts_verified_on_the_fragment() {
    let p = p2();
    let q = eqc(&p, "q", BUDGET);
    let frag = Fragment::sized(1).with_budgets(1 << 12, 1 << 12);
    let obs = q.cat().objects(&frag);
    for a in &obs {
        for b in &obs {
            let out = check_coproduct(&q, a, b, &frag);
            assert!(out.verdict.holds(), "{a} + {b}: {:?}", out.verdict);
        }
    }
}

#[test]
fn coproduct_with_a_total_component() {
    let p = p2();
    let q = eqc(&p, "q", BUDGET);
    let one = Ob::rel(Ob::Fin(1), p.diagonal(&Ob::Fin(1)).unwrap().data);
    let blob = Ob::rel(Ob::Fin(2), Data::Vals(vec![1, 1, 1, 1]));
    let frag = Fragment::sized(2);
    let out = check_coproduct(&q, &one, &blob, &frag);
    assert!(out.verdict.holds(), "{:?}", out.verdict);
}

#[test]
fn coequalizer_of_a_pair_with_itself_is_the_codomain() {
    let p = p2();
    let q = eqc(&p, "q", BUDGET);
    let cat = q.cat();
    let a = Ob::rel(Ob::Fin(2), p.diagonal(&Ob::Fin(2)).unwrap().data);
    let one = Ob::rel(Ob::Fin(1), p.diagonal(&Ob::Fin(1)).unwrap().data);
    let f = cat.hom(&one, &a, BUDGET).unwrap().remove(0);
    let w = coequalizer_eqc(&q, &f, &f).unwrap();
    // quotient by the closure of a reflexive-only image: the codomain
    let Ob::Rel(_, r) = &w.carrier else { panic!() };
    assert_eq!(*r, p.diagonal(&Ob::Fin(2)).unwrap().data);
    let frag = Fragment::sized(2);
    let out = check_universal(&cat, &w, &frag);
    assert!(out.verdict.holds(), "{:?}", out.verdict);
}

#[test]
fn coequalizer_of_the_two_points() {
    // the two maps 1 ⇉ 2 coequalize to the two-point carrier with the
    // total relation
    let p = p2();
    let q = eqc(&p, "q", BUDGET);
    let cat = q.cat();
    let a = Ob::rel(Ob::Fin(2), p.diagonal(&Ob::Fin(2)).unwrap().data);
    let one = Ob::rel(Ob::Fin(1), p.diagonal(&Ob::Fin(1)).unwrap().data);
    let maps = cat.hom(&one, &a, BUDGET).unwrap();
    assert_eq!(maps.len(), 2);
    let w = coequalizer_eqc(&q, &maps[0], &maps[1]).unwrap();
    let Ob::Rel(base, r) = &w.carrier else { panic!() };
    assert_eq!(**base, Ob::Fin(2));
    assert_eq!(*r, Data::Vals(vec![1, 1, 1, 1]));
    let frag = Fragment::sized(2);
    let out = check_universal(&cat, &w, &frag);
    assert!(out.verdict.holds(), "{:?}", out.verdict);
}

#[test]
fn slice_exponential_over_the_terminal_matches_the_set_exponential() {
    let p = p2();
    let q = eqc(&p, "q", BUDGET);
    let cat = q.cat();
    let one = Ob::rel(Ob::Fin(1), p.diagonal(&Ob::Fin(1)).unwrap().data);
    let two = Ob::rel(Ob::Fin(2), p.diagonal(&Ob::Fin(2)).unwrap().data);
    let f = cat.hom(&two, &one, BUDGET).unwrap().remove(0);
    let g = cat.hom(&two, &one, BUDGET).unwrap().remove(0);
    let (se, data) = slice_exponential(&q, &f, &g).unwrap();
    // the carrier has the size of the set exponential 2^2
    assert_eq!(cat.carrier(&se.w), Some(4));
    let frag = Fragment {
        size_cap: 2,
        include: vec![se.w.clone(), se.z.clone()],
        hom_budget: 1 << 12,
        fiber_budget: 1 << 12,
    };
    let out = check_slice_exp(&cat, &f, &g, &se, false, &frag);
    assert!(out.verdict.holds(), "{:?}", out.verdict);
    let _ = data;
}

#[test]
fn slice_exponential_by_the_identity() {
    let p = p2();
    let q = eqc(&p, "q", BUDGET);
    let cat = q.cat();
    let a = Ob::rel(Ob::Fin(2), p.diagonal(&Ob::Fin(2)).unwrap().data);
    let id = cat.identity(&a);
    let one = Ob::rel(Ob::Fin(1), p.diagonal(&Ob::Fin(1)).unwrap().data);
    let g = cat.hom(&one, &a, BUDGET).unwrap().remove(0);
    let (se, _) = slice_exponential(&q, &id, &g).unwrap();
    let frag = Fragment {
        size_cap: 2,
        include: vec![se.w.clone(), se.z.clone()],
        hom_budget: 1 << 12,
        fiber_budget: 1 << 12,
    };
    let out = check_slice_exp(&cat, &id, &g, &se, false, &frag);
    assert!(out.verdict.holds(), "{:?}", out.verdict);
}

#[test]
fn slice_exponential_with_chain_weights() {
    // over the weighted-set base: a one-point anchor with an h-valued
    // membership
    let p = ph3();
    let c: Doc = comprehension_completion(&p, "phc");
    let q = eqc(&c, "qc", BUDGET);
    let cat = q.cat();
    let anchor_pred = Ob::pred(Ob::Fin(1), Data::Vals(vec![1])); // weight h
    let sq = c.cat().product(&anchor_pred, &anchor_pred).unwrap();
    let (_, top) = (0, c.top(&sq.ob));
    let a = Ob::rel(anchor_pred.clone(), top.data.clone());
    let f = cat.identity(&a);
    let g = cat.identity(&a);
    let (se, data) = slice_exponential(&q, &f, &g).unwrap();
    let frag = Fragment {
        size_cap: 1,
        include: vec![se.w.clone(), se.z.clone(), a.clone()],
        hom_budget: 1 << 12,
        fiber_budget: 1 << 12,
    };
    let out = check_slice_exp(&cat, &f, &g, &se, false, &frag);
    assert!(out.verdict.holds(), "{:?}", out.verdict);
    // the exponential relation is h-reflexive at most, per the anchor
    let Ob::Rel(_, theta) = &se.w else { panic!() };
    let _ = (theta, data);
}

#[test]
fn coarse_reflection_on_diagonal_objects_is_iso() {
    let p = p2();
    let q = eqc(&p, "q", BUDGET);
    let x = Ob::rel(Ob::Fin(2), p.diagonal(&Ob::Fin(2)).unwrap().data);
    assert!(is_coarse(&q, &x, BUDGET).unwrap());
}

#[test]
fn coarse_reflection_collapses_the_total_relation() {
    let p = p2();
    let q = eqc(&p, "q", BUDGET);
    let x = Ob::rel(Ob::Fin(2), Data::Vals(vec![1, 1, 1, 1]));
    let (s, eta) = coarse_reflection(&q, &x, BUDGET).unwrap();
    // the singletons object is a one-point coarse object up to iso
    let point = Ob::rel(Ob::Fin(1), Data::Vals(vec![1]));
    let cat = q.cat();
    let iso = cat
        .hom(&s, &point, BUDGET)
        .unwrap()
        .into_iter()
        .find(|m| eqcat::kernel::find_inverse(cat.as_ref(), m, BUDGET).unwrap().is_some());
    assert!(iso.is_some(), "singletons of the blob are a point, got {s}");
    // classically every quotient splits, so the blob itself is already
    // coarse (isomorphic to its singletons)
    assert!(is_coarse(&q, &x, BUDGET).unwrap());
    assert!(is_coarse(&q, &s, BUDGET).unwrap());
    let _ = eta;
}

#[test]
fn coarse_reflection_bundle() {
    let p = p2();
    let q = eqc(&p, "q", BUDGET);
    let frag = Fragment::sized(2);
    for x in q.cat().objects(&frag) {
        let out = check_coarse_reflection(&q, &x, &frag);
        assert!(out.verdict.holds(), "{x}: {:?}", out.verdict);
    }
}

#[test]
fn projective_core_reconstructs_the_completion() {
    let p = p2();
    let q = eqc(&p, "q", BUDGET);
    let frag = Fragment::sized(1).with_budgets(1 << 12, 1 << 12);
    let report = projective_core(&q, &frag, BUDGET).unwrap();
    assert!(report.diagonal_objects_projective.verdict.holds());
    assert!(report.products_closed.verdict.holds());
    assert!(report.covering.verdict.holds());
    assert!(report.reconstruction.holds(), "{:?}", report.reconstruction.first_failure());
    assert!(!report.projectives.is_empty());
}

#[test]
fn fragment_without_diagonal_covers_fails_the_covering_check() {
    // over the chain, an object with an h-valued distance is not
    // projective (nothing lifts through the diagonal cover); a fragment
    // that omits its diagonal cover cannot cover it at all
    let p = ph3();
    let q = eqc(&p, "q", BUDGET);
    let point = Ob::rel(Ob::Fin(1), Data::Vals(vec![2]));
    let blurry = Ob::rel(Ob::Fin(2), Data::Vals(vec![2, 1, 1, 2]));
    let frag = Fragment {
        size_cap: 0,
        include: vec![point.clone(), blurry.clone()],
        hom_budget: 1 << 12,
        fiber_budget: 1 << 12,
    };
    assert!(!eqcat::constructions::is_projective(&q, &blurry, &frag).unwrap());
    let report = projective_core(&q, &frag, BUDGET).unwrap();
    assert!(
        !report.covering.verdict.holds(),
        "the blurry object has no projective cover in this fragment"
    );
    // restoring the diagonal object restores the covering
    let crisp = Ob::rel(Ob::Fin(2), p.diagonal(&Ob::Fin(2)).unwrap().data);
    let frag2 = Fragment {
        size_cap: 0,
        include: vec![point, blurry, crisp],
        hom_budget: 1 << 12,
        fiber_budget: 1 << 12,
    };
    let report2 = projective_core(&q, &frag2, BUDGET).unwrap();
    assert!(report2.covering.verdict.holds());
}
