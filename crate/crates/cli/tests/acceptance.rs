//! The acceptance suite: one test per criterion, each printing a pass/fail
//! line and enforcing its time bound. Discrete checks are exact; no
//! tolerances apply.

use eqcat::completions::{
    comprehension_completion, embed_nabla, eqc, extensional_collapse, functional_completion,
    intensional_qc,
};
use eqcat::constructions::{
    check_closure_agreement, check_coarse_reflection, check_coproduct, check_equalizer,
    coequalizer_eqc, is_coarse, projective_core, slice_exponential,
};
use eqcat::corpus::{self, FuzCat, FuzUmCat, UmCat};
use eqcat::doctrine::{verify, Doc, Doctrine, Property};
use eqcat::kernel::{CatOps, Data, Fragment, Mor, Ob};
use eqcat::lattice::Lattice;
use eqcat::oracle::{check_equivalence, check_slice_exp, check_universal, FunctorData, Outcome};
use std::rc::Rc;
use std::time::{Duration, Instant};

const BUDGET: usize = 1 << 16;

fn p2() -> Doc {
    corpus::power_doctrine("p2", Rc::new(Lattice::bool2())) as Doc
}

fn ph3() -> Doc {
    corpus::power_doctrine("ph3", Rc::new(Lattice::chain(3))) as Doc
}

struct Criterion {
    n: u32,
    failures: Vec<String>,
    start: Instant,
    limit: Duration,
}

impl Criterion {
    fn new(n: u32, limit_secs: u64) -> Criterion {
        Criterion {
            n,
            failures: Vec::new(),
            start: Instant::now(),
            limit: Duration::from_secs(limit_secs),
        }
    }

    fn expect(&mut self, label: &str, ok: bool) {
        if !ok {
            self.failures.push(label.to_string());
        }
    }

    fn expect_outcome(&mut self, label: &str, o: &Outcome) {
        if !o.verdict.holds() {
            self.failures.push(format!("{label}: {}", o.verdict));
        }
    }

    fn finish(self) {
        let elapsed = self.start.elapsed();
        let status = if self.failures.is_empty() { "PASS" } else { "FAIL" };
        println!(
            "criterion {}: {status} ({:.2}s, limit {:?})",
            self.n,
            elapsed.as_secs_f64(),
            self.limit
        );
        for f in &self.failures {
            println!("  - {f}");
        }
        assert!(
            self.failures.is_empty(),
            "criterion {} failed: {:?}",
            self.n,
            self.failures
        );
        assert!(
            elapsed <= self.limit,
            "criterion {} exceeded its time bound: {:?} > {:?}",
            self.n,
            elapsed,
            self.limit
        );
    }
}

/// Criterion 1: the capability matrix of the two-valued doctrine on
/// carriers up to three, all holding.
#[test]
fn criterion_01_two_valued_capability_matrix() {
    let mut c = Criterion::new(1, 10);
    let d = p2();
    let frag = Fragment::sized(3).with_budgets(BUDGET, BUDGET);
    for p in [
        Property::Primary,
        Property::Elementary,
        Property::Existential,
        Property::Implicational,
        Property::Disjunctive,
        Property::Universal,
        Property::FirstOrder,
        Property::Tripos,
        Property::WeakClassifier,
        Property::StrongClassifier,
        Property::PowerObjects,
        Property::ComprehensionWeak,
        Property::ComprehensionStrong,
        Property::ComprehensionFull,
        Property::ComprehensiveDiagonals,
        Property::Ruc,
        Property::Rc,
        Property::Boolean,
    ] {
        let r = verify(d.as_ref(), p, &frag);
        c.expect(&format!("{p}"), r.holds());
    }
    c.finish();
}

/// Criterion 2: the chain doctrine on carriers up to two. Elementary,
/// existential and tripos hold; comprehension is strong but not full with
/// the stated counterexample; booleanness fails with ¬h ∨ h = h. The
/// spec's remaining sub-item expects the rule of unique choice to fail;
/// over a finite chain it provably holds (single-valuedness forces crisp
/// rows), so that sub-item is reported as stated and fails honestly — see
/// the decisions ledger for the analysis.
#[test]
fn criterion_02_chain_capability_matrix() {
    let mut c = Criterion::new(2, 10);
    let d = ph3();
    let frag = Fragment::sized(2).with_budgets(BUDGET, BUDGET);
    for p in [
        Property::Primary,
        Property::Elementary,
        Property::Existential,
        Property::FirstOrder,
        Property::Tripos,
        Property::ComprehensionWeak,
        Property::ComprehensionStrong,
    ] {
        let r = verify(d.as_ref(), p, &frag);
        c.expect(&format!("{p}"), r.holds());
    }
    // comprehension is NOT full: the counterexample pair (1, h) vs (1, 0)
    let full = verify(d.as_ref(), Property::ComprehensionFull, &frag);
    c.expect("comprehension_full fails", !full.holds());
    let a = eqcat::doctrine::Fib::new(Ob::Fin(2), Data::Vals(vec![2, 1]));
    let b = eqcat::doctrine::Fib::new(Ob::Fin(2), Data::Vals(vec![2, 0]));
    c.expect(
        "fullness counterexample shares the comprehension arrow",
        d.comprehension(&a).unwrap() == d.comprehension(&b).unwrap(),
    );
    // booleanness fails with ¬h ∨ h = h
    let boolean = verify(d.as_ref(), Property::Boolean, &frag);
    c.expect("boolean fails", !boolean.holds());
    let h = Lattice::chain(3);
    let nh = h.not(1).unwrap();
    c.expect("not h or h = h", h.or(nh, 1).unwrap() == 1);
    // the spec expects RUC to fail here; the exhaustive oracle proves it
    // holds on this fragment (every total single-valued chain relation is
    // crisp), so the sub-item is asserted as the spec states it and the
    // honest outcome is a failure of this criterion line
    let ruc = verify(d.as_ref(), Property::Ruc, &frag);
    if ruc.holds() {
        println!(
            "  note: rule of unique choice HOLDS for the chain doctrine \
             (checked {} relations exhaustively); the spec's expected \
             failure is unattainable — documented in the decisions ledger",
            ruc.outcome.checked
        );
    }
    c.expect("ruc fails with explicit witness (spec defect: it provably holds)", !ruc.holds());
    c.finish();
}

/// Criterion 3: quotient laws, exhaustively over every internal
/// equivalence relation of both corpus fragments: effectiveness, stability
/// under fragment pullbacks, and effective descent matching internal
/// surjectivity.
#[test]
fn criterion_03_quotient_laws() {
    let mut c = Criterion::new(3, 60);
    for (name, d, cap) in [("p2", p2(), 3u32), ("ph3", ph3(), 2u32)] {
        let q: Doc = eqc(&d, "q", BUDGET);
        let frag = Fragment::sized(cap).with_budgets(1 << 12, 1 << 12);
        for p in [
            Property::QuotientsEffective,
            Property::QuotientsStable,
            Property::QuotientsDescent,
        ] {
            let r = verify(q.as_ref(), p, &frag);
            c.expect_outcome(&format!("{name}/{p}"), &r.outcome);
        }
    }
    c.finish();
}

/// Criterion 4: the two-step completion of the chain doctrine against the
/// directly built weighted-set and distance-space categories, on carriers
/// up to two.
#[test]
fn criterion_04_weighted_equivalences() {
    let mut c = Criterion::new(4, 60);
    let h = Rc::new(Lattice::chain(3));
    let frag = Fragment::sized(2).with_budgets(BUDGET, BUDGET);
    // weighted sets against the comprehension-completion base
    {
        let p: Doc = corpus::power_doctrine("ph3", h.clone());
        let comp = comprehension_completion(&p, "phc");
        let direct: eqcat::kernel::Cat = Rc::new(FuzCat::new("fuz", h.clone()));
        let fun = FunctorData {
            src: direct,
            dst: comp.cat(),
            on_ob: Rc::new(|x: &Ob| Ok(x.clone())),
            on_mor: Rc::new(|m: &Mor| Ok(m.clone())),
            label: "fuz".into(),
        };
        let rep = check_equivalence(&fun, &frag, &frag);
        c.expect("weighted sets: functorial", rep.functorial.verdict.holds());
        c.expect("weighted sets: full", rep.full.verdict.holds());
        c.expect("weighted sets: faithful", rep.faithful.verdict.holds());
        c.expect(
            "weighted sets: essentially surjective",
            rep.essentially_surjective.verdict.holds(),
        );
    }
    // separated distance spaces against the one-step completion
    {
        let p: Doc = corpus::power_doctrine("ph3", h.clone());
        let q = eqc(&p, "q", BUDGET);
        let direct: eqcat::kernel::Cat = Rc::new(UmCat::new("um", h.clone()));
        let fun = FunctorData {
            src: direct,
            dst: q.cat(),
            on_ob: Rc::new(|x: &Ob| Ok(x.clone())),
            on_mor: Rc::new(|m: &Mor| Ok(m.clone())),
            label: "um".into(),
        };
        let rep = check_equivalence(&fun, &frag, &frag);
        c.expect("distance spaces: functorial", rep.functorial.verdict.holds());
        c.expect("distance spaces: full", rep.full.verdict.holds());
        c.expect("distance spaces: faithful", rep.faithful.verdict.holds());
        c.expect(
            "distance spaces: essentially surjective",
            rep.essentially_surjective.verdict.holds(),
        );
    }
    // partial distance spaces against the two-step completion
    {
        let p: Doc = corpus::power_doctrine("ph3", h.clone());
        let comp: Doc = comprehension_completion(&p, "phc");
        let q = eqc(&comp, "qc", BUDGET);
        let direct: eqcat::kernel::Cat = Rc::new(FuzUmCat::new("fuzum", h.clone()));
        let on_ob = Rc::new(|x: &Ob| -> eqcat::Result<Ob> {
            let Ob::Rel(base, Data::Vals(d)) = x else {
                return Err(eqcat::Error::Internal("foreign object".into()));
            };
            let Ob::Fin(n) = **base else {
                return Err(eqcat::Error::Internal("foreign carrier".into()));
            };
            let n = n as usize;
            let diag: Vec<u8> = (0..n).map(|i| d[i * n + i]).collect();
            Ok(Ob::rel(
                Ob::pred(Ob::Fin(n as u32), Data::Vals(diag)),
                Data::Vals(d.clone()),
            ))
        });
        let on_ob2 = on_ob.clone();
        let fun = FunctorData {
            src: direct,
            dst: q.cat(),
            on_ob,
            on_mor: Rc::new(move |m: &Mor| {
                Ok(Mor::new(on_ob2(&m.src)?, on_ob2(&m.dst)?, m.data.clone()))
            }),
            label: "fuzum".into(),
        };
        let rep = check_equivalence(&fun, &frag, &frag);
        c.expect("partial distance spaces: functorial", rep.functorial.verdict.holds());
        c.expect("partial distance spaces: full", rep.full.verdict.holds());
        c.expect("partial distance spaces: faithful", rep.faithful.verdict.holds());
        c.expect(
            "partial distance spaces: essentially surjective",
            rep.essentially_surjective.verdict.holds(),
        );
    }
    c.finish();
}

fn quasi_topos_clauses(c: &mut Criterion, label: &str, q: &Rc<eqcat::completions::EqcDoctrine>, frag: &Fragment) {
    let cat = q.cat();
    let obs = cat.objects(frag);
    // finite limits: terminal, products, equalizers through comprehension
    let w = eqcat::kernel::StructureWitness::of_terminal(&cat);
    c.expect_outcome(&format!("{label}: terminal"), &check_universal(&cat, &w, frag));
    for a in &obs {
        for b in &obs {
            let p = cat.product(a, b).unwrap();
            let w = eqcat::kernel::StructureWitness::of_product(&cat, &p);
            let out = check_universal(&cat, &w, frag);
            if !out.verdict.holds() {
                c.expect(&format!("{label}: product {a} x {b}: {}", out.verdict), false);
            }
        }
    }
    for a in &obs {
        for b in &obs {
            let Ok(hs) = cat.hom(a, b, frag.hom_budget) else { continue };
            for f in &hs {
                for g in &hs {
                    let out = check_equalizer(q, f, g, frag);
                    if !out.verdict.holds() {
                        c.expect(&format!("{label}: equalizer of ({f}, {g}): {}", out.verdict), false);
                    }
                }
            }
        }
    }
    // coproducts with the join relation: universal property, internal
    // injectivity, joint surjectivity, effectiveness, disjointness
    for a in &obs {
        for b in &obs {
            let out = check_coproduct(q, a, b, frag);
            if !out.verdict.holds() {
                c.expect(&format!("{label}: coproduct {a} + {b}: {}", out.verdict), false);
            }
        }
    }
    // coequalizers are quotient arrows with the stated universal property
    for a in &obs {
        for b in &obs {
            let Ok(hs) = cat.hom(a, b, frag.hom_budget) else { continue };
            for f in &hs {
                for g in &hs {
                    match coequalizer_eqc(q, f, g) {
                        Ok(w) => {
                            let out = check_universal(&cat, &w, frag);
                            if !out.verdict.holds() {
                                c.expect(
                                    &format!("{label}: coequalizer of ({f}, {g}): {}", out.verdict),
                                    false,
                                );
                            }
                        }
                        Err(e) => c.expect(&format!("{label}: coequalizer error {e}"), false),
                    }
                }
            }
        }
    }
    // slice exponentials with unique transposes
    for target in &obs {
        let mut arrows = Vec::new();
        for x in &obs {
            if let Ok(hs) = cat.hom(x, target, frag.hom_budget) {
                arrows.extend(hs);
            }
        }
        for f in &arrows {
            for g in &arrows {
                match slice_exponential(q, f, g) {
                    Ok((se, _)) => {
                        let mut inner = frag.clone();
                        inner.include.push(se.w.clone());
                        inner.include.push(se.z.clone());
                        let out = check_slice_exp(&cat, f, g, &se, false, &inner);
                        if !out.verdict.holds() {
                            c.expect(
                                &format!("{label}: exponential of ({f}, {g}): {}", out.verdict),
                                false,
                            );
                        }
                    }
                    Err(e) => c.expect(&format!("{label}: exponential error {e}"), false),
                }
            }
        }
    }
    // the strong classifier with unique classifying arrows
    let r = verify(q.as_ref(), Property::StrongClassifier, frag);
    c.expect_outcome(&format!("{label}: strong classifier"), &r.outcome);
}

/// Criterion 5: the quasi-topos clauses on the completed two-valued
/// doctrine and on the completed comprehension completion of the chain,
/// exhaustively over carriers up to two.
#[test]
fn criterion_05_quasi_topos_clauses() {
    let mut c = Criterion::new(5, 300);
    let frag2 = Fragment::sized(2).with_budgets(1 << 12, 1 << 12);
    let q = eqc(&p2(), "q2", BUDGET);
    quasi_topos_clauses(&mut c, "two-valued", &q, &frag2);
    let comp: Doc = comprehension_completion(&ph3(), "phc");
    let qc = eqc(&comp, "qc", BUDGET);
    quasi_topos_clauses(&mut c, "chain", &qc, &frag2);
    c.finish();
}

/// Criterion 6: the fixpoint closure agrees with the power-object formula
/// on all 81 chain relations and all 16 two-valued relations over a
/// two-point carrier.
#[test]
fn criterion_06_closure_agreement() {
    let mut c = Criterion::new(6, 60);
    let d2 = p2();
    let out = check_closure_agreement(d2.as_ref(), &Ob::Fin(2), BUDGET);
    c.expect("16 two-valued relations", out.verdict.holds() && out.checked == 16);
    let d3 = ph3();
    let out = check_closure_agreement(d3.as_ref(), &Ob::Fin(2), BUDGET);
    c.expect("81 chain relations", out.verdict.holds() && out.checked == 81);
    c.finish();
}

/// Criterion 7: the completed two-valued doctrine has enough projectives
/// (the diagonal objects), closed under products, and restricting to them
/// and re-completing reproduces the fragment.
#[test]
fn criterion_07_projective_reconstruction() {
    let mut c = Criterion::new(7, 60);
    let q = eqc(&p2(), "q", BUDGET);
    let frag = Fragment::sized(2).with_budgets(1 << 12, 1 << 12);
    let report = projective_core(&q, &frag, BUDGET).unwrap();
    c.expect_outcome("diagonal objects projective", &report.diagonal_objects_projective);
    c.expect_outcome("products closed", &report.products_closed);
    c.expect_outcome("covering", &report.covering);
    c.expect("reconstruction equivalence", report.reconstruction.holds());
    c.finish();
}

/// Criterion 8: the decompositions — collapsing the intensional completion
/// and completing the collapse both reproduce the quotient completion, for
/// both corpus doctrines.
#[test]
fn criterion_08_decomposition() {
    let mut c = Criterion::new(8, 60);
    let frag = Fragment::sized(2).with_budgets(BUDGET, BUDGET);
    for (name, d) in [("p2", p2()), ("ph3", ph3())] {
        let q = eqc(&d, "q", BUDGET);
        let i: Doc = intensional_qc(&d, "qi", BUDGET);
        let ci = extensional_collapse(&i, "xqi");
        let fun = FunctorData {
            src: ci.cat(),
            dst: q.cat(),
            on_ob: Rc::new(|x: &Ob| Ok(x.clone())),
            on_mor: Rc::new(|m: &Mor| Ok(m.clone())),
            label: "collapse_of_intensional".into(),
        };
        let rep = check_equivalence(&fun, &frag, &frag);
        c.expect(
            &format!("{name}: collapse of the intensional completion"),
            rep.holds(),
        );
        let xp: Doc = extensional_collapse(&d, "xp");
        let qx = eqc(&xp, "qxp", BUDGET);
        let fun = FunctorData {
            src: qx.cat(),
            dst: q.cat(),
            on_ob: Rc::new(|x: &Ob| Ok(x.clone())),
            on_mor: Rc::new(|m: &Mor| Ok(m.clone())),
            label: "eqc_of_collapse".into(),
        };
        let rep = check_equivalence(&fun, &frag, &frag);
        c.expect(&format!("{name}: completion of the collapse"), rep.holds());
        // the embedding of the collapsed base stays full and faithful
        let nab = embed_nabla(&d, &q).unwrap();
        let rep = check_equivalence(&nab.functor, &frag, &frag);
        c.expect(&format!("{name}: diagonal embedding full"), rep.full.verdict.holds());
        c.expect(
            &format!("{name}: diagonal embedding faithful"),
            rep.faithful.verdict.holds(),
        );
    }
    c.finish();
}

/// Criterion 9: singleton reflections in the completed two-valued
/// doctrine: units are monic and epic, the reflection is idempotent, and
/// the functional completion, the coarse fragment and the finite-set
/// fragment agree.
#[test]
fn criterion_09_coarse_reflection() {
    let mut c = Criterion::new(9, 60);
    let p = p2();
    let q = eqc(&p, "q", BUDGET);
    let frag = Fragment::sized(2).with_budgets(1 << 12, 1 << 12);
    for x in q.cat().objects(&frag) {
        let out = check_coarse_reflection(&q, &x, &frag);
        if !out.verdict.holds() {
            c.expect(&format!("reflection bundle at {x}: {}", out.verdict), false);
        }
    }
    // functional completion fragment is the finite-set fragment
    let qd: Doc = q.clone();
    let f = functional_completion(&qd, "fq");
    let p2c = p.clone();
    let f2 = f.clone();
    let on_ob = Rc::new(move |a: &Ob| -> eqcat::Result<Ob> {
        Ok(Ob::rel(a.clone(), p2c.diagonal(a)?.data))
    });
    let on_ob2 = on_ob.clone();
    let fun = FunctorData {
        src: p.cat(),
        dst: f.cat(),
        on_ob,
        on_mor: Rc::new(move |m: &Mor| {
            let lifted = Mor::new(on_ob2(&m.src)?, on_ob2(&m.dst)?, m.data.clone());
            f2.fun_cat().graph_of(&lifted)
        }),
        label: "finset_to_functional".into(),
    };
    let rep = check_equivalence(&fun, &frag, &frag);
    c.expect("functional completion is the finite-set fragment", rep.holds());
    // coarse fragment is the finite-set fragment
    let mut coarse = Vec::new();
    for x in q.cat().objects(&frag) {
        if is_coarse(&q, &x, frag.hom_budget).unwrap() {
            coarse.push(x);
        }
    }
    c.expect("some coarse objects exist", !coarse.is_empty());
    let p3 = p.clone();
    let fun = FunctorData {
        src: p.cat(),
        dst: q.cat(),
        on_ob: Rc::new(move |a: &Ob| Ok(Ob::rel(a.clone(), p3.diagonal(a)?.data))),
        on_mor: {
            let p4 = p.clone();
            Rc::new(move |m: &Mor| {
                let d = |o: &Ob| -> eqcat::Result<Ob> { Ok(Ob::rel(o.clone(), p4.diagonal(o)?.data)) };
                Ok(Mor::new(d(&m.src)?, d(&m.dst)?, m.data.clone()))
            })
        },
        label: "finset_to_coarse".into(),
    };
    let dst_frag = Fragment {
        size_cap: 0,
        include: coarse,
        hom_budget: frag.hom_budget,
        fiber_budget: frag.fiber_budget,
    };
    let rep = check_equivalence(&fun, &frag, &dst_frag);
    c.expect("coarse fragment is the finite-set fragment", rep.holds());
    c.finish();
}

/// Criterion 10: every seeded wrong witness is rejected by its oracle,
/// across several seeds, driven through the command-line runner.
#[test]
fn criterion_10_mutation_sensitivity() {
    let mut c = Criterion::new(10, 60);
    let ws = "[task mutations]\nkind = mutation\nname = all\n";
    let dir = std::env::temp_dir().join("eqcat-acceptance-mutations");
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join("mutations.eqws");
    std::fs::write(&path, ws).unwrap();
    for seed in [0u64, 1, 7, 42] {
        let out = std::process::Command::new(env!("CARGO_BIN_EXE_eqcat"))
            .args([
                "check",
                path.to_str().unwrap(),
                "--seed",
                &seed.to_string(),
                "--report",
                dir.join(format!("report-{seed}.json")).to_str().unwrap(),
            ])
            .output()
            .unwrap();
        c.expect(
            &format!("seed {seed}: all mutations detected (exit status)"),
            out.status.success(),
        );
        let report: serde_json::Value =
            serde_json::from_str(&std::fs::read_to_string(dir.join(format!("report-{seed}.json"))).unwrap())
                .unwrap();
        c.expect(
            &format!("seed {seed}: 100% detection"),
            report["summary"]["fails"] == 0 && report["summary"]["holds"] == 1,
        );
    }
    c.finish();
}
