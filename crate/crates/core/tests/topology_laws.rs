//! Closure operators: law checks, closed subdoctrines, induced and
//! canonical topologies, separated objects, and the lifted adjunction
//! between quotient completions.

use eqcat::completions::eqc;
use eqcat::doctrine::{verify, Doc, Doctrine, PowerDoctrine, Property, WeakSubDoctrine};
use eqcat::kernel::{Data, Fragment, Ob};
use eqcat::lattice::Lattice;
use eqcat::oracle::{check_adjoint_functors, check_equivalence};
use eqcat::topology::{
    canonical_topology, closed_subdoctrine, extend_to_eqc, is_separated, lift_adjoint_retraction,
    AdjointRetraction, TopologyJ,
};
use std::rc::Rc;

fn p2() -> Doc {
    Rc::new(PowerDoctrine::new("p2", Rc::new(Lattice::bool2())))
}

fn ph3() -> Doc {
    Rc::new(PowerDoctrine::new("ph3", Rc::new(Lattice::chain(3))))
}

const BUDGET: usize = 1 << 16;

#[test]
fn double_negation_is_a_topology_on_the_chain() {
    let d = ph3();
    let j = TopologyJ::double_negation(&d);
    let frag = Fragment::sized(2);
    let out = j.check_laws(&frag);
    assert!(out.verdict.holds(), "{:?}", out.verdict);
}

#[test]
fn identity_and_const_top_are_topologies() {
    let d = ph3();
    let frag = Fragment::sized(2);
    assert!(TopologyJ::identity(&d).check_laws(&frag).verdict.holds());
    assert!(TopologyJ::const_top(&d).check_laws(&frag).verdict.holds());
}

#[test]
fn closed_subdoctrine_of_identity_changes_nothing() {
    let d = ph3();
    let j = TopologyJ::identity(&d);
    let c: Doc = closed_subdoctrine(&d, &j, "same");
    assert_eq!(
        c.enum_fiber(&Ob::Fin(2), BUDGET).unwrap().len(),
        d.enum_fiber(&Ob::Fin(2), BUDGET).unwrap().len()
    );
}

#[test]
fn closed_subdoctrine_of_const_top_is_degenerate() {
    let d = ph3();
    let j = TopologyJ::const_top(&d);
    let c: Doc = closed_subdoctrine(&d, &j, "degenerate");
    assert_eq!(c.enum_fiber(&Ob::Fin(2), BUDGET).unwrap().len(), 1);
}

#[test]
fn double_negation_fixed_points_are_two_valued() {
    let d = ph3();
    let j = TopologyJ::double_negation(&d);
    let c: Doc = closed_subdoctrine(&d, &j, "ph3_closed");
    // fixed points per carrier point are {0, 1}: 2^n closed elements
    assert_eq!(c.enum_fiber(&Ob::Fin(2), BUDGET).unwrap().len(), 4);
    let frag = Fragment::sized(2);
    for prop in [
        Property::Primary,
        Property::Elementary,
        Property::Existential,
        Property::Implicational,
        Property::Disjunctive,
        Property::Universal,
        Property::WeakClassifier,
        Property::Boolean,
    ] {
        let r = verify(c.as_ref(), prop, &frag);
        assert!(r.holds(), "{prop} on the closed subdoctrine: {r}");
    }
    // the ambient doctrine is not boolean; the closed one is
    assert!(!verify(d.as_ref(), Property::Boolean, &frag).holds());
}

#[test]
fn retraction_from_double_negation() {
    let d = ph3();
    let j = TopologyJ::double_negation(&d);
    let c: Doc = closed_subdoctrine(&d, &j, "ph3_closed");
    let j2 = j.clone();
    let ar = AdjointRetraction {
        p: c.clone(),
        r: d.clone(),
        onto: Rc::new(move |_, x| j2.apply(x)),
        back: Rc::new(|_, x| Ok(x.clone())),
        label: "notnot".into(),
    };
    let frag = Fragment::sized(2);
    let out = ar.check(&frag);
    assert!(out.verdict.holds(), "{:?}", out.verdict);
    // the induced closure is the original topology
    let ind = ar.induced_topology();
    let alpha = eqcat::doctrine::Fib::new(Ob::Fin(2), Data::Vals(vec![1, 0]));
    assert_eq!(
        ind.apply(&alpha).unwrap(),
        j.apply(&alpha).unwrap()
    );
}

#[test]
fn canonical_topology_on_the_weak_subobjects_is_identity_for_choice_doctrines() {
    // the two-valued doctrine and the weak-subobject doctrine of finite
    // sets coincide up to iso, so the canonical topology is the identity
    let p = p2();
    let psi: Doc = Rc::new(WeakSubDoctrine::finset());
    let j = canonical_topology(&p, &psi, "canonical");
    let frag = Fragment::sized(2);
    assert!(j.check_laws(&frag).verdict.holds());
    for n in 0..=2u32 {
        for x in psi.enum_fiber(&Ob::Fin(n), BUDGET).unwrap() {
            assert_eq!(j.apply(&x).unwrap(), x);
        }
    }
}

#[test]
fn extended_topology_on_the_completion() {
    // over the Boolean corpus the extension of double negation is the
    // identity on descent data
    let p = p2();
    let q = eqc(&p, "q", BUDGET);
    let j = TopologyJ::double_negation(&p);
    let jq = extend_to_eqc(&j, &q);
    let frag = Fragment::sized(2);
    assert!(jq.check_laws(&frag).verdict.holds());
    let x = Ob::rel(Ob::Fin(2), Data::Vals(vec![1, 1, 1, 1]));
    for alpha in q.enum_fiber(&x, BUDGET).unwrap() {
        assert_eq!(jq.apply(&alpha).unwrap(), alpha);
    }
    // over the chain it genuinely closes
    let p = ph3();
    let q = eqc(&p, "q", BUDGET);
    let j = TopologyJ::double_negation(&p);
    let jq = extend_to_eqc(&j, &q);
    let x = Ob::rel(Ob::Fin(1), Data::Vals(vec![2]));
    let alpha = eqcat::doctrine::Fib::new(x.clone(), Data::Vals(vec![1]));
    let closed = jq.apply(&alpha).unwrap();
    assert_eq!(closed.data, Data::Vals(vec![2]));
}

#[test]
fn separated_objects() {
    // Boolean: every object is separated under double negation
    let p = p2();
    let q = eqc(&p, "q", BUDGET);
    let j = TopologyJ::double_negation(&p);
    let jq = extend_to_eqc(&j, &q);
    let frag = Fragment::sized(2);
    let qd: Doc = q.clone();
    for x in q.cat().objects(&frag) {
        assert!(is_separated(&qd, &jq, &x).unwrap(), "{x}");
    }
    // the chain: an object with distance h between its points is not
    // separated, a diagonal object is
    let p = ph3();
    let q = eqc(&p, "q", BUDGET);
    let j = TopologyJ::double_negation(&p);
    let jq = extend_to_eqc(&j, &q);
    let qd: Doc = q.clone();
    let blurry = Ob::rel(Ob::Fin(2), Data::Vals(vec![2, 1, 1, 2]));
    assert!(!is_separated(&qd, &jq, &blurry).unwrap());
    let crisp = Ob::rel(Ob::Fin(2), Data::Vals(vec![2, 0, 0, 2]));
    assert!(is_separated(&qd, &jq, &crisp).unwrap());
}

#[test]
fn separated_fragment_matches_the_completion_of_the_closed_subdoctrine() {
    // the closed subdoctrine of double negation on the chain completes to
    // the full subcategory of separated objects of the ambient completion
    let p = ph3();
    let j = TopologyJ::double_negation(&p);
    let c: Doc = closed_subdoctrine(&p, &j, "ph3_closed");
    let qc = eqc(&c, "qc", BUDGET);
    let qp = eqc(&p, "qp", BUDGET);
    let frag = Fragment::sized(1);
    // every object of the completion of the closed subdoctrine is a
    // separated object of the ambient completion, and the embedding is
    // full and faithful
    let fun = eqcat::oracle::FunctorData {
        src: qc.cat(),
        dst: qp.cat(),
        on_ob: Rc::new(|x: &Ob| Ok(x.clone())),
        on_mor: Rc::new(|m: &eqcat::kernel::Mor| Ok(m.clone())),
        label: "sep_embed".into(),
    };
    let rep = check_equivalence(&fun, &frag, &frag);
    assert!(rep.functorial.verdict.holds(), "{:?}", rep.functorial.verdict);
    assert!(rep.full.verdict.holds(), "{:?}", rep.full.verdict);
    assert!(rep.faithful.verdict.holds(), "{:?}", rep.faithful.verdict);
    let jq = extend_to_eqc(&j, &qp);
    let qpd: Doc = qp.clone();
    for x in qc.cat().objects(&frag) {
        assert!(is_separated(&qpd, &jq, &x).unwrap(), "{x}");
    }
}

#[test]
fn lifted_retraction_is_an_adjunction_with_fully_faithful_right_adjoint() {
    let p = ph3();
    let j = TopologyJ::double_negation(&p);
    let c: Doc = closed_subdoctrine(&p, &j, "ph3_closed");
    let j2 = j.clone();
    let ar = AdjointRetraction {
        p: c.clone(),
        r: p.clone(),
        onto: Rc::new(move |_, x| j2.apply(x)),
        back: Rc::new(|_, x| Ok(x.clone())),
        label: "notnot".into(),
    };
    let qc = eqc(&c, "qc", BUDGET);
    let qp = eqc(&p, "qp", BUDGET);
    let lifted = lift_adjoint_retraction(&ar, &qc, &qp);
    let frag = Fragment::sized(1);
    let out = check_adjoint_functors(&lifted.left, &lifted.right, lifted.unit.as_ref(), &frag, &frag);
    assert!(out.verdict.holds(), "{:?}", out.verdict);
    // the right adjoint is full and faithful
    let rep = check_equivalence(&lifted.right, &frag, &frag);
    assert!(rep.full.verdict.holds(), "{:?}", rep.full.verdict);
    assert!(rep.faithful.verdict.holds(), "{:?}", rep.faithful.verdict);
}

#[test]
fn identity_retraction_lifts_to_the_identity_adjunction() {
    let p = p2();
    let ar = AdjointRetraction {
        p: p.clone(),
        r: p.clone(),
        onto: Rc::new(|_, x| Ok(x.clone())),
        back: Rc::new(|_, x| Ok(x.clone())),
        label: "id".into(),
    };
    let frag = Fragment::sized(1);
    assert!(ar.check(&frag).verdict.holds());
    let q = eqc(&p, "q", BUDGET);
    let lifted = lift_adjoint_retraction(&ar, &q, &q);
    let out = check_adjoint_functors(&lifted.left, &lifted.right, lifted.unit.as_ref(), &frag, &frag);
    assert!(out.verdict.holds(), "{:?}", out.verdict);
}
