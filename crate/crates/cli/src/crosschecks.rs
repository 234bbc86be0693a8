//! Named cross-construction equivalence checks between completed doctrines
//! and the directly built table categories, plus the decomposition
//! equivalences.

use crate::build::Materialized;
use crate::format::Section;
use anyhow::{bail, Result};
use eqcat::completions::{
    comprehension_completion, eqc, extensional_collapse, functional_completion, intensional_qc,
};
use eqcat::corpus::{self, FuzCat, FuzUmCat, UmCat};
use eqcat::doctrine::{Doc, Doctrine};
use eqcat::kernel::{Data, Fragment, Mor, Ob};
use eqcat::oracle::{check_equivalence, Cx, EquivalenceReport, FunctorData, Outcome};
use std::rc::Rc;

fn merge_equivalence(rep: EquivalenceReport) -> Outcome {
    let mut out = Outcome::new();
    out.merge(rep.functorial);
    out.merge(rep.full);
    out.merge(rep.faithful);
    out.merge(rep.essentially_surjective);
    out.finish()
}

fn identity_functor(src: eqcat::kernel::Cat, dst: eqcat::kernel::Cat, label: &str) -> FunctorData {
    FunctorData {
        src,
        dst,
        on_ob: Rc::new(|x: &Ob| Ok(x.clone())),
        on_mor: Rc::new(|m: &Mor| Ok(m.clone())),
        label: label.into(),
    }
}

pub fn run(name: &str, s: &Section, m: &Materialized, frag: &Fragment) -> Result<Outcome> {
    let budget = frag.hom_budget;
    match name {
        // weighted sets against the comprehension completion
        "weighted_sets" => {
            let h = m.frame(s, "frame")?;
            let p: Doc = corpus::power_doctrine("p", h.clone());
            let c = comprehension_completion(&p, "pc");
            let direct: eqcat::kernel::Cat = Rc::new(FuzCat::new("direct", h));
            let fun = identity_functor(direct, c.cat(), "weighted_sets");
            Ok(merge_equivalence(check_equivalence(&fun, frag, frag)))
        }
        // separated distance spaces against the quotient completion
        "distance_spaces" => {
            let h = m.frame(s, "frame")?;
            let p: Doc = corpus::power_doctrine("p", h.clone());
            let q = eqc(&p, "q", budget);
            let direct: eqcat::kernel::Cat = Rc::new(UmCat::new("direct", h));
            let fun = identity_functor(direct, q.cat(), "distance_spaces");
            Ok(merge_equivalence(check_equivalence(&fun, frag, frag)))
        }
        // partial distance spaces against the two-step completion
        "partial_distance_spaces" => {
            let h = m.frame(s, "frame")?;
            let p: Doc = corpus::power_doctrine("p", h.clone());
            let c: Doc = comprehension_completion(&p, "pc");
            let q = eqc(&c, "qc", budget);
            let direct: eqcat::kernel::Cat = Rc::new(FuzUmCat::new("direct", h));
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
                on_mor: Rc::new(move |mm: &Mor| {
                    Ok(Mor::new(on_ob2(&mm.src)?, on_ob2(&mm.dst)?, mm.data.clone()))
                }),
                label: "partial_distance_spaces".into(),
            };
            Ok(merge_equivalence(check_equivalence(&fun, frag, frag)))
        }
        // the functional completion of the classical completion is the
        // finite-set fragment again
        "functional_is_finset" => {
            let p: Doc = corpus::power_doctrine("p2", Rc::new(eqcat::lattice::Lattice::bool2()));
            let q: Doc = eqc(&p, "q", budget);
            let f = functional_completion(&q, "fq");
            let p2 = p.clone();
            let f2 = f.clone();
            let on_ob = Rc::new(move |a: &Ob| -> eqcat::Result<Ob> {
                Ok(Ob::rel(a.clone(), p2.diagonal(a)?.data))
            });
            let on_ob2 = on_ob.clone();
            let fun = FunctorData {
                src: p.cat(),
                dst: f.cat(),
                on_ob,
                on_mor: Rc::new(move |mm: &Mor| {
                    let lifted = Mor::new(on_ob2(&mm.src)?, on_ob2(&mm.dst)?, mm.data.clone());
                    f2.fun_cat().graph_of(&lifted)
                }),
                label: "functional_is_finset".into(),
            };
            Ok(merge_equivalence(check_equivalence(&fun, frag, frag)))
        }
        // the coarse-object fragment of the classical completion is the
        // finite-set fragment
        "coarse_is_finset" => {
            let p: Doc = corpus::power_doctrine("p2", Rc::new(eqcat::lattice::Lattice::bool2()));
            let q = eqc(&p, "q", budget);
            let mut out = Outcome::new();
            // coarse objects of the fragment, by the singleton test
            let mut coarse: Vec<Ob> = Vec::new();
            for x in q.cat().objects(frag) {
                match eqcat::constructions::is_coarse(&q, &x, frag.hom_budget) {
                    Ok(true) => coarse.push(x),
                    Ok(false) => {}
                    Err(e) => out.fail(Cx::one("object", x.to_string()).push("error", e.to_string())),
                }
            }
            let coarse2 = coarse.clone();
            let p2 = p.clone();
            let fun = FunctorData {
                src: p.cat(),
                dst: q.cat(),
                on_ob: Rc::new(move |a: &Ob| Ok(Ob::rel(a.clone(), p2.diagonal(a)?.data))),
                on_mor: {
                    let p3 = p.clone();
                    Rc::new(move |mm: &Mor| {
                        let d = |o: &Ob| -> eqcat::Result<Ob> {
                            Ok(Ob::rel(o.clone(), p3.diagonal(o)?.data))
                        };
                        Ok(Mor::new(d(&mm.src)?, d(&mm.dst)?, mm.data.clone()))
                    })
                },
                label: "finset_to_coarse".into(),
            };
            // target fragment: exactly the coarse objects
            let dst_frag = Fragment {
                size_cap: 0,
                include: coarse2,
                hom_budget: frag.hom_budget,
                fiber_budget: frag.fiber_budget,
            };
            out.merge(merge_equivalence(check_equivalence(&fun, frag, &dst_frag)));
            Ok(out.finish())
        }
        // decomposition: the collapse of the intensional completion has the
        // same classes as the quotient completion
        "collapse_of_intensional" => {
            let p = m.doctrine(s, "doctrine")?;
            let q = eqc(&p, "q", budget);
            let i: Doc = intensional_qc(&p, "qi", budget);
            let c = extensional_collapse(&i, "xqi");
            let fun = identity_functor(c.cat(), q.cat(), "collapse_of_intensional");
            Ok(merge_equivalence(check_equivalence(&fun, frag, frag)))
        }
        // decomposition: completing the collapse is completing the doctrine
        "eqc_of_collapse" => {
            let p = m.doctrine(s, "doctrine")?;
            let q = eqc(&p, "q", budget);
            let c: Doc = extensional_collapse(&p, "xp");
            let qc = eqc(&c, "qxp", budget);
            let fun = identity_functor(qc.cat(), q.cat(), "eqc_of_collapse");
            Ok(merge_equivalence(check_equivalence(&fun, frag, frag)))
        }
        other => bail!("{}: unknown crosscheck `{other}`", s.pos),
    }
}
