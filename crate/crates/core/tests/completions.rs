//! The free constructions on the two pointwise corpus doctrines: object
//! and arrow-class counts against enumeration oracles, quotient laws,
//! products in the completed base, the diagonal embedding, and the
//! decomposition through the intensional variant and the collapse.

use eqcat::completions::{
    comprehension_completion, embed_nabla, eqc, extensional_collapse, functional_completion,
    intensional_qc,
};
use eqcat::doctrine::{self, verify, Doc, Doctrine, PowerDoctrine, Property};
use eqcat::kernel::{Data, Fragment, Mor, Ob, StructureWitness};
use eqcat::lattice::Lattice;
use eqcat::oracle::{check_equivalence, check_universal, FunctorData};
use std::rc::Rc;

fn p2() -> Doc {
    Rc::new(PowerDoctrine::new("p2", Rc::new(Lattice::bool2())))
}

fn ph3() -> Doc {
    Rc::new(PowerDoctrine::new("ph3", Rc::new(Lattice::chain(3))))
}

const BUDGET: usize = 1 << 16;

#[test]
fn equivalence_relation_count_on_two_points() {
    // filter all 16 relations over a 2-point carrier by the three laws
    let p = p2();
    let rels = doctrine::equivalence_relations(p.as_ref(), &Ob::Fin(2), BUDGET).unwrap();
    assert_eq!(rels.len(), 2);
    // and the completed base has exactly those objects on that carrier
    let q = eqc(&p, "q", BUDGET);
    let frag = Fragment::sized(2);
    let obs = q.cat().objects(&frag);
    let on_two: Vec<_> = obs
        .iter()
        .filter(|o| matches!(o, Ob::Rel(a, _) if **a == Ob::Fin(2)))
        .collect();
    assert_eq!(on_two.len(), 2);
}

#[test]
fn delta_objects_carry_the_full_fibre() {
    let p = p2();
    let q = eqc(&p, "q", BUDGET);
    let delta = p.diagonal(&Ob::Fin(2)).unwrap();
    let x = Ob::rel(Ob::Fin(2), delta.data);
    let fib = q.enum_fiber(&x, BUDGET).unwrap();
    assert_eq!(fib.len(), 4, "descent data of the fibred equality is everything");
}

#[test]
fn completed_fibre_is_descent_data() {
    let p = p2();
    let q = eqc(&p, "q", BUDGET);
    let top_rel = Ob::rel(Ob::Fin(2), Data::Vals(vec![1, 1, 1, 1]));
    let fib = q.enum_fiber(&top_rel, BUDGET).unwrap();
    // only the constants are compatible with the total relation
    assert_eq!(fib.len(), 2);
}

#[test]
fn quotient_arrow_classes_collapse() {
    // over the total relation, all maps of a 2-point carrier into itself
    // represent a single class, while the intensional variant keeps all 4
    let p = p2();
    let q = eqc(&p, "q", BUDGET);
    let i = intensional_qc(&p, "qi", BUDGET);
    let x = Ob::rel(Ob::Fin(2), Data::Vals(vec![1, 1, 1, 1]));
    assert_eq!(q.cat().hom(&x, &x, BUDGET).unwrap().len(), 1);
    assert_eq!(i.cat().hom(&x, &x, BUDGET).unwrap().len(), 4);
}

#[test]
fn intensional_hom_on_diagonal_objects_is_base_hom() {
    let p = p2();
    let i = intensional_qc(&p, "qi", BUDGET);
    let da = p.diagonal(&Ob::Fin(2)).unwrap();
    let db = p.diagonal(&Ob::Fin(3)).unwrap();
    let x = Ob::rel(Ob::Fin(2), da.data);
    let y = Ob::rel(Ob::Fin(3), db.data);
    assert_eq!(i.cat().hom(&x, &y, BUDGET).unwrap().len(), 9);
}

#[test]
fn completed_products_satisfy_the_universal_property() {
    let p = p2();
    let q = eqc(&p, "q", BUDGET);
    let cat = q.cat();
    let frag = Fragment::sized(2);
    let obs = cat.objects(&frag);
    for a in &obs {
        for b in &obs {
            let prod = cat.product(a, b).unwrap();
            let w = StructureWitness::of_product(&cat, &prod);
            let out = check_universal(&cat, &w, &frag);
            assert!(out.verdict.holds(), "product of {a} and {b}: {:?}", out.verdict);
        }
    }
}

#[test]
fn completed_terminal_and_pullbacks() {
    let p = p2();
    let q = eqc(&p, "q", BUDGET);
    let cat = q.cat();
    let frag = Fragment::sized(2);
    let w = StructureWitness::of_terminal(&cat);
    assert!(check_universal(&cat, &w, &frag).verdict.holds());
    // chosen pullbacks satisfy the strong universal property
    let obs = cat.objects(&frag);
    let mut tried = 0;
    for a in &obs {
        for b in &obs {
            for c in &obs {
                for f in cat.hom(a, c, BUDGET).unwrap() {
                    for g in cat.hom(b, c, BUDGET).unwrap() {
                        if tried > 12 {
                            return;
                        }
                        tried += 1;
                        let pb = cat.pullback(&f, &g).unwrap();
                        let w = StructureWitness::of_pullback(&cat, &f, &g, &pb);
                        let out = check_universal(&cat, &w, &frag);
                        assert!(out.verdict.holds(), "pullback of ({f}, {g}): {:?}", out.verdict);
                    }
                }
            }
        }
    }
}

#[test]
fn fibred_equality_of_completion_is_the_relation() {
    let p = ph3();
    let q = eqc(&p, "q", BUDGET);
    let rel = Data::Vals(vec![2, 1, 1, 2]); // distance h off the diagonal
    let x = Ob::rel(Ob::Fin(2), rel.clone());
    let d = q.diagonal(&x).unwrap();
    assert_eq!(d.data, rel);
}

#[test]
fn completed_doctrine_laws() {
    let frag = Fragment::sized(1).with_budgets(1 << 12, 1 << 12);
    for p in [p2(), ph3()] {
        let q = eqc(&p, "q", BUDGET);
        for prop in [
            Property::Primary,
            Property::Elementary,
            Property::Existential,
            Property::Implicational,
            Property::Disjunctive,
            Property::Universal,
            Property::ComprehensionWeak,
            Property::ComprehensionStrong,
            Property::ComprehensiveDiagonals,
            Property::QuotientsEffective,
        ] {
            let r = verify(q.as_ref(), prop, &frag);
            assert!(r.holds(), "{} on eqc({}): {r}", prop, p.name());
        }
    }
    // fullness of comprehension transfers exactly when the base is full:
    // it holds for the two-valued corpus and fails for the chain
    let q = eqc(&p2(), "q", BUDGET);
    assert!(verify(q.as_ref(), Property::ComprehensionFull, &frag).holds());
    let q = eqc(&ph3(), "q", BUDGET);
    assert!(!verify(q.as_ref(), Property::ComprehensionFull, &frag).holds());
}

#[test]
fn quotients_are_stable_and_of_effective_descent() {
    let p = p2();
    let q = eqc(&p, "q", BUDGET);
    let frag = Fragment::sized(1).with_budgets(1 << 12, 1 << 12);
    for prop in [Property::QuotientsStable, Property::QuotientsDescent] {
        let r = verify(q.as_ref(), prop, &frag);
        assert!(r.holds(), "{prop}: {r}");
    }
}

#[test]
fn nabla_is_full_and_faithful_on_the_classical_corpus() {
    let p = p2();
    let q = eqc(&p, "q", BUDGET);
    let nab = embed_nabla(&p, &q).unwrap();
    let frag = Fragment::sized(2);
    let rep = check_equivalence(&nab.functor, &frag, &frag);
    assert!(rep.functorial.verdict.holds(), "{:?}", rep.functorial.verdict);
    assert!(rep.full.verdict.holds(), "{:?}", rep.full.verdict);
    assert!(rep.faithful.verdict.holds(), "{:?}", rep.faithful.verdict);
    // classically every relation splits, so the embedding is even
    // essentially surjective on fragments
    assert!(rep.essentially_surjective.verdict.holds());
    // identity on fibres over diagonal objects
    let delta = p.diagonal(&Ob::Fin(2)).unwrap();
    let x = Ob::rel(Ob::Fin(2), delta.data);
    assert_eq!(q.enum_fiber(&x, BUDGET).unwrap().len(), 4);
    // over the chain the completion has genuinely new objects: nothing
    // with an h-valued distance is isomorphic to a diagonal object
    let p = ph3();
    let q = eqc(&p, "q", BUDGET);
    let nab = embed_nabla(&p, &q).unwrap();
    let rep = check_equivalence(&nab.functor, &frag, &frag);
    assert!(rep.full.verdict.holds());
    assert!(rep.faithful.verdict.holds());
    assert!(!rep.essentially_surjective.verdict.holds());
}

#[test]
fn nabla_is_full_but_unfaithful_without_comprehensive_diagonals() {
    // the intensional completion of the two-valued doctrine lacks
    // comprehensive diagonals; its own diagonal embedding into its quotient
    // completion collapses parallel arrows
    let p = p2();
    let i: Doc = intensional_qc(&p, "qi", BUDGET);
    let qq = eqc(&i, "qqi", BUDGET);
    let nab = embed_nabla(&i, &qq).unwrap();
    let frag = Fragment::sized(2);
    let rep = check_equivalence(&nab.functor, &frag, &frag);
    assert!(rep.full.verdict.holds());
    assert!(!rep.faithful.verdict.holds(), "parallel arrows over the total relation collapse");
}

#[test]
fn collapse_identifies_relationally_equal_arrows() {
    let p = p2();
    let i: Doc = intensional_qc(&p, "qi", BUDGET);
    let x = Ob::rel(Ob::Fin(2), Data::Vals(vec![1, 1, 1, 1]));
    // two-arrow hom collapses to one class
    let c = extensional_collapse(&i, "xqi");
    assert_eq!(i.cat().hom(&x, &x, BUDGET).unwrap().len(), 4);
    assert_eq!(c.cat().hom(&x, &x, BUDGET).unwrap().len(), 1);
}

#[test]
fn collapse_of_a_doctrine_with_comprehensive_diagonals_changes_nothing() {
    let p = p2();
    let c = extensional_collapse(&p, "xp");
    let frag = Fragment::sized(2);
    for a in c.cat().objects(&frag) {
        for b in c.cat().objects(&frag) {
            let n1 = p.cat().hom(&a, &b, BUDGET).unwrap().len();
            let n2 = c.cat().hom(&a, &b, BUDGET).unwrap().len();
            assert_eq!(n1, n2, "hom({a}, {b})");
        }
    }
}

#[test]
fn decomposition_collapse_of_intensional_is_the_quotient_completion() {
    // arrow classes of the collapsed intensional completion match the
    // quotient completion on every fragment hom set
    let p = p2();
    let q = eqc(&p, "q", BUDGET);
    let i: Doc = intensional_qc(&p, "qi", BUDGET);
    let c = extensional_collapse(&i, "xqi");
    let frag = Fragment::sized(2);
    let obs = q.cat().objects(&frag);
    for a in &obs {
        for b in &obs {
            let nq = q.cat().hom(a, b, BUDGET).unwrap().len();
            let nc = c.cat().hom(a, b, BUDGET).unwrap().len();
            assert_eq!(nq, nc, "hom({a}, {b})");
        }
    }
}

#[test]
fn comprehension_completion_fixes_fullness() {
    let p = ph3();
    let c: Doc = comprehension_completion(&p, "phc");
    let frag = Fragment::sized(1).with_budgets(1 << 12, 1 << 12);
    for prop in [
        Property::Primary,
        Property::Elementary,
        Property::ComprehensionWeak,
        Property::ComprehensionStrong,
        Property::ComprehensionFull,
    ] {
        let r = verify(c.as_ref(), prop, &frag);
        assert!(r.holds(), "{prop} on the completed doctrine: {r}");
    }
    // the raw doctrine fails fullness on the same fragment scale
    let r = verify(p.as_ref(), Property::ComprehensionFull, &Fragment::sized(2));
    assert!(!r.holds());
}

#[test]
fn comprehension_completion_top_slice_reproduces_the_fibre() {
    let p = ph3();
    let c = comprehension_completion(&p, "phc");
    let top = p.top(&Ob::Fin(2));
    let x = Ob::pred(Ob::Fin(2), top.data);
    assert_eq!(c.enum_fiber(&x, BUDGET).unwrap().len(), 9);
}

#[test]
fn graphs_compose_like_their_arrows() {
    let p = p2();
    let q: Doc = eqc(&p, "q", BUDGET);
    let f = functional_completion(&q, "fq");
    let cat = f.cat();
    let delta2 = q.diagonal(&Ob::rel(Ob::Fin(2), p.diagonal(&Ob::Fin(2)).unwrap().data));
    let _ = delta2;
    // identity graph composes neutrally
    let delta = p.diagonal(&Ob::Fin(2)).unwrap();
    let x = Ob::rel(Ob::Fin(2), delta.data);
    let id = cat.identity(&x);
    let c = cat.compose(&id, &id).unwrap();
    assert!(cat.equal_mor(&c, &id));
    // graph of an arrow composed with the graph of another is the graph of
    // the composite
    let qcat = q.cat();
    let y = Ob::rel(Ob::Fin(1), p.diagonal(&Ob::Fin(1)).unwrap().data);
    let bang = qcat.hom(&x, &y, BUDGET).unwrap().remove(0);
    let sect = qcat.hom(&y, &x, BUDGET).unwrap().remove(0);
    let fc_bang = cat.hom(&x, &y, BUDGET).unwrap();
    assert_eq!(fc_bang.len(), 1, "unique total single-valued relation to the point");
    let comp = cat
        .compose(
            &fungraph(&f, &sect),
            &fungraph(&f, &bang),
        )
        .unwrap();
    let direct = fungraph(&f, &qcat.compose(&sect, &bang).unwrap());
    assert!(cat.equal_mor(&comp, &direct));
}

fn fungraph(
    f: &Rc<eqcat::completions::FunctionalCompletion>,
    m: &Mor,
) -> Mor {
    f.fun_cat().graph_of(m).unwrap()
}

#[test]
fn functional_completion_of_the_classical_completion_is_finite_sets() {
    let p = p2();
    let q: Doc = eqc(&p, "q", BUDGET);
    let f = functional_completion(&q, "fq");
    let p2 = p.clone();
    let fun = FunctorData {
        src: p.cat(),
        dst: f.cat(),
        on_ob: Rc::new(move |a: &Ob| {
            let d = p2.diagonal(a)?;
            Ok(Ob::rel(a.clone(), d.data))
        }),
        on_mor: {
            let p3 = p.clone();
            let f2 = f.clone();
            Rc::new(move |m: &Mor| {
                let d = |o: &Ob| -> eqcat::Result<Ob> {
                    Ok(Ob::rel(o.clone(), p3.diagonal(o)?.data))
                };
                let lifted = Mor::new(d(&m.src)?, d(&m.dst)?, m.data.clone());
                f2.fun_cat().graph_of(&lifted)
            })
        },
        label: "finset_to_functional".into(),
    };
    let frag = Fragment::sized(2);
    let rep = check_equivalence(&fun, &frag, &frag);
    assert!(rep.functorial.verdict.holds(), "{:?}", rep.functorial.verdict);
    assert!(rep.full.verdict.holds(), "{:?}", rep.full.verdict);
    assert!(rep.faithful.verdict.holds(), "{:?}", rep.faithful.verdict);
    assert!(
        rep.essentially_surjective.verdict.holds(),
        "{:?}",
        rep.essentially_surjective.verdict
    );
}

#[test]
fn functional_completion_satisfies_unique_choice() {
    let p = p2();
    let q: Doc = eqc(&p, "q", BUDGET);
    let f: Doc = functional_completion(&q, "fq");
    let frag = Fragment::sized(1).with_budgets(1 << 12, 1 << 12);
    let r = verify(f.as_ref(), Property::Ruc, &frag);
    assert!(r.holds(), "{r}");
}

#[test]
fn classifier_of_the_completion() {
    // two-valued: the carrier is the two-element set and the relation is
    // the biconditional, which is equality
    let p = p2();
    let q = eqc(&p, "q", BUDGET);
    let (omega, member) = q.classifier().unwrap();
    let Ob::Rel(base, lambda) = &omega else { panic!() };
    assert_eq!(**base, Ob::Fin(2));
    assert_eq!(*lambda, Data::Vals(vec![1, 0, 0, 1]));
    let _ = member;
    // three-valued: the biconditional table of the chain
    let p = ph3();
    let q = eqc(&p, "q", BUDGET);
    let (omega, _) = q.classifier().unwrap();
    let Ob::Rel(base, lambda) = &omega else { panic!() };
    assert_eq!(**base, Ob::Fin(3));
    let h = Lattice::chain(3);
    let mut want = Vec::new();
    for u in 0..3 {
        for v in 0..3 {
            want.push(h.and(h.imp(u, v).unwrap(), h.imp(v, u).unwrap()) as u8);
        }
    }
    assert_eq!(*lambda, Data::Vals(want));
}

#[test]
fn strong_classifier_verdict_on_the_completion() {
    let p = p2();
    let q: Doc = eqc(&p, "q", BUDGET);
    let frag = Fragment::sized(1).with_budgets(1 << 12, 1 << 12);
    let r = verify(q.as_ref(), Property::StrongClassifier, &frag);
    assert!(r.holds(), "{r}");
    // the base doctrine's classifier is already strong; the completed one
    // classifies descent data uniquely at class level
    let p = ph3();
    let q: Doc = eqc(&p, "q", BUDGET);
    let r = verify(q.as_ref(), Property::StrongClassifier, &frag);
    assert!(r.holds(), "{r}");
}

#[test]
fn completed_power_objects_classify_relations() {
    let p = p2();
    let q: Doc = eqc(&p, "q", BUDGET);
    let frag = Fragment::sized(1).with_budgets(1 << 12, 1 << 12);
    let r = verify(q.as_ref(), Property::PowerObjects, &frag);
    assert!(r.holds(), "{r}");
}

#[test]
fn equality_never_uses_representative_identity() {
    // two different representatives of the same class compare equal
    let p = ph3();
    let q = eqc(&p, "q", BUDGET);
    let cat = q.cat();
    let x = Ob::rel(Ob::Fin(2), Data::Vals(vec![2, 2, 2, 2]));
    let f = Mor::new(x.clone(), x.clone(), eqcat::kernel::MorData::Map(vec![0, 0]));
    let g = Mor::new(x.clone(), x.clone(), eqcat::kernel::MorData::Map(vec![1, 1]));
    assert!(f != g);
    assert!(cat.equal_mor(&f, &g));
}
