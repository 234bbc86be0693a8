//! Fragment-relative property verdicts for doctrines. Every global
//! quantifier ranges over the declared fragment; fibre and hom enumerations
//! that exceed the budget are counted as skipped instances. A property
//! holds when at least one instance ran and none failed.

use super::{
    eq_fib, graph, is_single_valued, is_total, relation_laws, Doctrine, Fib,
};
use crate::error::{Error, Result};
use crate::kernel::{self, Cat, Fragment, Mor, Ob};
use crate::oracle::{Cx, Outcome, Verdict};
use alloc::format;
use alloc::string::{String, ToString};
use alloc::vec::Vec;
use core::fmt;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
pub enum Property {
    Primary,
    Elementary,
    Existential,
    Implicational,
    Disjunctive,
    Universal,
    FirstOrder,
    WeakClassifier,
    StrongClassifier,
    PowerObjects,
    Tripos,
    ComprehensionWeak,
    ComprehensionStrong,
    ComprehensionFull,
    ComprehensiveDiagonals,
    Ruc,
    Rc,
    Boolean,
    QuotientsEffective,
    QuotientsStable,
    QuotientsDescent,
}

pub const ALL_PROPERTIES: &[Property] = &[
    Property::Primary,
    Property::Elementary,
    Property::Existential,
    Property::Implicational,
    Property::Disjunctive,
    Property::Universal,
    Property::FirstOrder,
    Property::WeakClassifier,
    Property::StrongClassifier,
    Property::PowerObjects,
    Property::Tripos,
    Property::ComprehensionWeak,
    Property::ComprehensionStrong,
    Property::ComprehensionFull,
    Property::ComprehensiveDiagonals,
    Property::Ruc,
    Property::Rc,
    Property::Boolean,
    Property::QuotientsEffective,
    Property::QuotientsStable,
    Property::QuotientsDescent,
];

impl Property {
    pub fn name(&self) -> &'static str {
        match self {
            Property::Primary => "primary",
            Property::Elementary => "elementary",
            Property::Existential => "existential",
            Property::Implicational => "implicational",
            Property::Disjunctive => "disjunctive",
            Property::Universal => "universal",
            Property::FirstOrder => "first_order",
            Property::WeakClassifier => "weak_classifier",
            Property::StrongClassifier => "strong_classifier",
            Property::PowerObjects => "power_objects",
            Property::Tripos => "tripos",
            Property::ComprehensionWeak => "comprehension_weak",
            Property::ComprehensionStrong => "comprehension_strong",
            Property::ComprehensionFull => "comprehension_full",
            Property::ComprehensiveDiagonals => "comprehensive_diagonals",
            Property::Ruc => "ruc",
            Property::Rc => "rc",
            Property::Boolean => "boolean",
            Property::QuotientsEffective => "quotients_effective",
            Property::QuotientsStable => "quotients_stable",
            Property::QuotientsDescent => "quotients_descent",
        }
    }

    pub fn parse(s: &str) -> Option<Property> {
        ALL_PROPERTIES.iter().copied().find(|p| p.name() == s)
    }
}

impl fmt::Display for Property {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.name())
    }
}

#[derive(Debug, Clone)]
pub struct PropertyReport {
    pub property: Property,
    pub fragment: String,
    pub outcome: Outcome,
}

impl PropertyReport {
    pub fn holds(&self) -> bool {
        self.outcome.verdict.holds()
    }
}

impl fmt::Display for PropertyReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "{}: {} (checked {}, skipped {})",
            self.property, self.outcome.verdict, self.outcome.checked, self.outcome.skipped
        )
    }
}

struct Ck<'a> {
    d: &'a dyn Doctrine,
    cat: Cat,
    frag: &'a Fragment,
    obs: Vec<Ob>,
}

impl<'a> Ck<'a> {
    fn new(d: &'a dyn Doctrine, frag: &'a Fragment) -> Ck<'a> {
        let cat = d.cat();
        let obs = cat.objects(frag);
        Ck { d, cat, frag, obs }
    }

    fn fiber(&self, a: &Ob, out: &mut Outcome) -> Option<Vec<Fib>> {
        out.absorb(self.d.enum_fiber(a, self.frag.fiber_budget), "fibre enumeration")
    }

    fn homs(&self, a: &Ob, b: &Ob, out: &mut Outcome) -> Option<Vec<Mor>> {
        out.absorb(self.cat.hom(a, b, self.frag.hom_budget), "hom enumeration")
    }

    fn cx_ob(&self, label: &str, a: &Ob) -> Cx {
        Cx::one(label, a.to_string())
    }
}

fn check_primary(ck: &Ck) -> Outcome {
    let mut out = Outcome::new();
    // fibre laws: meet is the greatest lower bound, top is maximum
    for a in &ck.obs {
        let Some(fib) = ck.fiber(a, &mut out) else { continue };
        let top = ck.d.top(a);
        for x in &fib {
            if !ck.d.leq(x, &top) {
                out.fail(ck.cx_ob("object", a).push("element_above_top", x.to_string()));
            }
            for y in &fib {
                let m = ck.d.meet(x, y);
                if !(ck.d.leq(&m, x) && ck.d.leq(&m, y)) {
                    out.fail(
                        ck.cx_ob("object", a)
                            .push("x", x.to_string())
                            .push("y", y.to_string())
                            .push("reason", "meet not a lower bound"),
                    );
                    continue;
                }
                for z in &fib {
                    let lhs = ck.d.leq(z, &m);
                    let rhs = ck.d.leq(z, x) && ck.d.leq(z, y);
                    if lhs != rhs {
                        out.fail(
                            ck.cx_ob("object", a)
                                .push("x", x.to_string())
                                .push("y", y.to_string())
                                .push("z", z.to_string())
                                .push("reason", "meet is not the greatest lower bound"),
                        );
                    } else {
                        out.pass();
                    }
                }
            }
        }
    }
    // functoriality of reindexing: identities, composites, top/meet preservation
    for a in &ck.obs {
        let ida = ck.cat.identity(a);
        let Some(fib) = ck.fiber(a, &mut out) else { continue };
        for x in &fib {
            match ck.d.reindex(&ida, x) {
                Ok(rx) if eq_fib(&rx, x) => out.pass(),
                Ok(rx) => out.fail(
                    ck.cx_ob("object", a)
                        .push("element", x.to_string())
                        .push("reindex_along_identity", rx.to_string()),
                ),
                Err(e) => out.fail(ck.cx_ob("object", a).push("error", e.to_string())),
            }
        }
    }
    for a in &ck.obs {
        for b in &ck.obs {
            let Some(fs) = ck.homs(a, b, &mut out) else { continue };
            let Some(fib_b) = ck.fiber(b, &mut out) else { continue };
            for f in &fs {
                // top and meet preservation along f
                let tb = ck.d.top(b);
                match ck.d.reindex(f, &tb) {
                    Ok(t) if eq_fib(&t, &ck.d.top(a)) => out.pass(),
                    Ok(t) => out.fail(
                        Cx::one("arrow", f.to_string()).push("reindexed_top", t.to_string()),
                    ),
                    Err(e) => out.fail(Cx::one("arrow", f.to_string()).push("error", e.to_string())),
                }
                for x in &fib_b {
                    for y in &fib_b {
                        let lhs = ck.d.reindex(f, &ck.d.meet(x, y));
                        let rhs = match (ck.d.reindex(f, x), ck.d.reindex(f, y)) {
                            (Ok(rx), Ok(ry)) => Ok(ck.d.meet(&rx, &ry)),
                            (Err(e), _) | (_, Err(e)) => Err(e),
                        };
                        match (lhs, rhs) {
                            (Ok(l), Ok(r)) if eq_fib(&l, &r) => out.pass(),
                            (Ok(l), Ok(r)) => out.fail(
                                Cx::one("arrow", f.to_string())
                                    .push("x", x.to_string())
                                    .push("y", y.to_string())
                                    .push("reindex_of_meet", l.to_string())
                                    .push("meet_of_reindexes", r.to_string()),
                            ),
                            (Err(e), _) | (_, Err(e)) => {
                                out.fail(Cx::one("arrow", f.to_string()).push("error", e.to_string()))
                            }
                        }
                    }
                }
                // composite functoriality against every composable fragment arrow
                for c in &ck.obs {
                    let Some(gs) = ck.homs(b, c, &mut out) else { continue };
                    let Some(fib_c) = ck.fiber(c, &mut out) else { continue };
                    for g in &gs {
                        let Ok(gf) = ck.cat.compose(g, f) else { continue };
                        for z in &fib_c {
                            let direct = ck.d.reindex(&gf, z);
                            let staged = ck.d.reindex(g, z).and_then(|w| ck.d.reindex(f, &w));
                            match (direct, staged) {
                                (Ok(l), Ok(r)) if eq_fib(&l, &r) => out.pass(),
                                (Ok(l), Ok(r)) => out.fail(
                                    Cx::one("g.f", gf.to_string())
                                        .push("element", z.to_string())
                                        .push("direct", l.to_string())
                                        .push("staged", r.to_string()),
                                ),
                                (Err(e), _) | (_, Err(e)) => out
                                    .fail(Cx::one("g.f", gf.to_string()).push("error", e.to_string())),
                            }
                        }
                    }
                }
            }
        }
    }
    out.finish()
}

fn check_elementary(ck: &Ck) -> Outcome {
    let mut out = Outcome::new();
    for a in &ck.obs {
        let delta = match ck.d.diagonal(a) {
            Ok(d) => d,
            Err(e) => {
                out.fail(ck.cx_ob("object", a).push("error", e.to_string()));
                continue;
            }
        };
        // reflexivity along the diagonal arrow
        match kernel::diag(ck.cat.as_ref(), a).and_then(|(dm, _)| ck.d.reindex(&dm, &delta)) {
            Ok(r) if eq_fib(&r, &ck.d.top(a)) => out.pass(),
            Ok(r) => out.fail(
                ck.cx_ob("object", a)
                    .push("diagonal_pulled_to", r.to_string())
                    .push("reason", "fibred equality not reflexive"),
            ),
            Err(e) => out.fail(ck.cx_ob("object", a).push("error", e.to_string())),
        }
        // the fibred equality is an internal equivalence relation
        match relation_laws(ck.d, a, &delta) {
            Ok((true, true, true)) => out.pass(),
            Ok((r, s, t)) => out.fail(
                ck.cx_ob("object", a)
                    .push("refl", r.to_string())
                    .push("sym", s.to_string())
                    .push("trans", t.to_string()),
            ),
            Err(e) => out.fail(ck.cx_ob("object", a).push("error", e.to_string())),
        }
    }
    // adjoint law for the canonical reindexings (x, a) ↦ ((x, a), a)
    for x in &ck.obs {
        for a in &ck.obs {
            let r = elementary_adjoint_instance(ck, x, a);
            out.merge(r);
        }
    }
    out.finish()
}

/// Unit and counit of the defining adjunction for the fibred equality along
/// `e = <pr1, pr2, pr2>`.
fn elementary_adjoint_instance(ck: &Ck, x: &Ob, a: &Ob) -> Outcome {
    let mut out = Outcome::new();
    let r: Result<()> = (|| {
        let p2 = ck.cat.product(x, a)?;
        let p3 = ck.cat.product(&p2.ob, a)?;
        let e = ck.cat.pair(&p3, &ck.cat.identity(&p2.ob), &p2.pr2)?;
        let delta = ck.d.diagonal(a)?;
        let paa = ck.cat.product(a, a)?;
        let q23 = ck.cat.pair(
            &paa,
            &ck.cat.compose(&p2.pr2, &p3.pr1)?,
            &p3.pr2,
        )?;
        let dmask = ck.d.reindex(&q23, &delta)?;
        let ex = |alpha: &Fib| -> Result<Fib> {
            let lifted = ck.d.reindex(&p3.pr1, alpha)?;
            Ok(ck.d.meet(&lifted, &dmask))
        };
        // unit: alpha ≤ e* (E_e alpha)
        match ck.d.enum_fiber(&p2.ob, ck.frag.fiber_budget) {
            Ok(fib) => {
                for alpha in &fib {
                    let ea = ex(alpha)?;
                    let back = ck.d.reindex(&e, &ea)?;
                    if ck.d.leq(alpha, &back) {
                        out.pass();
                    } else {
                        out.fail(
                            Cx::one("instance", format!("({x}, {a})"))
                                .push("alpha", alpha.to_string())
                                .push("reason", "unit inequality fails"),
                        );
                    }
                }
            }
            Err(Error::Budget { .. }) => out.skip(),
            Err(e) => return Err(e),
        }
        // counit: E_e (e* beta) ≤ beta
        match ck.d.enum_fiber(&p3.ob, ck.frag.fiber_budget) {
            Ok(fib) => {
                for beta in &fib {
                    let pulled = ck.d.reindex(&e, beta)?;
                    let ea = ex(&pulled)?;
                    if ck.d.leq(&ea, beta) {
                        out.pass();
                    } else {
                        out.fail(
                            Cx::one("instance", format!("({x}, {a})"))
                                .push("beta", beta.to_string())
                                .push("reason", "counit inequality fails"),
                        );
                    }
                }
            }
            Err(Error::Budget { .. }) => out.skip(),
            Err(e) => return Err(e),
        }
        Ok(())
    })();
    if let Err(e) = r {
        out.fail(Cx::one("instance", format!("({x}, {a})")).push("error", e.to_string()));
    }
    out
}

fn check_existential(ck: &Ck) -> Outcome {
    check_quantifier(ck, true)
}

fn check_universal(ck: &Ck) -> Outcome {
    check_quantifier(ck, false)
}

/// Galois law, Beck–Chevalley over reindexed projection squares, and (for
/// the existential side) Frobenius reciprocity, for both projections of
/// every fragment product.
fn check_quantifier(ck: &Ck, existential: bool) -> Outcome {
    let mut out = Outcome::new();
    for a in &ck.obs {
        for b in &ck.obs {
            for keep_first in [true, false] {
                let r = quantifier_instance(ck, a, b, keep_first, existential);
                out.merge(r);
            }
        }
    }
    out.finish()
}

fn quantifier_instance(ck: &Ck, a: &Ob, b: &Ob, keep_first: bool, existential: bool) -> Outcome {
    let mut out = Outcome::new();
    let label = format!("({a} x {b}, keep_{})", if keep_first { "1" } else { "2" });
    let r: Result<()> = (|| {
        let p = ck.cat.product(a, b)?;
        let kept = if keep_first { a } else { b };
        let pr = if keep_first { &p.pr1 } else { &p.pr2 };
        let q = |alpha: &Fib| -> Result<Fib> {
            if existential {
                ck.d.exists_proj(a, b, keep_first, alpha)
            } else {
                ck.d.forall_proj(a, b, keep_first, alpha)
            }
        };
        let src_fib = match ck.d.enum_fiber(&p.ob, ck.frag.fiber_budget) {
            Ok(f) => f,
            Err(Error::Budget { .. }) => {
                out.skip();
                return Ok(());
            }
            Err(e) => return Err(e),
        };
        let kept_fib = match ck.d.enum_fiber(kept, ck.frag.fiber_budget) {
            Ok(f) => f,
            Err(Error::Budget { .. }) => {
                out.skip();
                return Ok(());
            }
            Err(e) => return Err(e),
        };
        for alpha in &src_fib {
            let qa = q(alpha)?;
            for beta in &kept_fib {
                let pulled = ck.d.reindex(pr, beta)?;
                let (lhs, rhs) = if existential {
                    (ck.d.leq(&qa, beta), ck.d.leq(alpha, &pulled))
                } else {
                    (ck.d.leq(beta, &qa), ck.d.leq(&pulled, alpha))
                };
                if lhs == rhs {
                    out.pass();
                } else {
                    out.fail(
                        Cx::one("instance", label.clone())
                            .push("alpha", alpha.to_string())
                            .push("beta", beta.to_string())
                            .push("reason", "adjunction law fails"),
                    );
                }
            }
            if existential {
                // Frobenius: E(pr* beta ∧ alpha) = beta ∧ E(alpha)
                for beta in &kept_fib {
                    let pulled = ck.d.reindex(pr, beta)?;
                    let l = q(&ck.d.meet(&pulled, alpha))?;
                    let r = ck.d.meet(beta, &qa);
                    if eq_fib(&l, &r) {
                        out.pass();
                    } else {
                        out.fail(
                            Cx::one("instance", label.clone())
                                .push("alpha", alpha.to_string())
                                .push("beta", beta.to_string())
                                .push("lhs", l.to_string())
                                .push("rhs", r.to_string())
                                .push("reason", "Frobenius reciprocity fails"),
                        );
                    }
                }
            }
        }
        // Beck–Chevalley along every fragment arrow into the kept factor
        for c in &ck.obs {
            let Some(fs) = ck.homs(c, kept, &mut out) else { continue };
            for f in &fs {
                let other = if keep_first { b } else { a };
                let (fx, p2) = if keep_first {
                    let pm = kernel::prod_mor(ck.cat.as_ref(), f, &ck.cat.identity(other))?;
                    let p2 = pm.src.clone();
                    (pm, p2)
                } else {
                    let pm = kernel::prod_mor(ck.cat.as_ref(), &ck.cat.identity(other), f)?;
                    let p2 = pm.src.clone();
                    (pm, p2)
                };
                let pr2 = if keep_first { &p2.pr1 } else { &p2.pr2 };
                let q2 = |alpha: &Fib| -> Result<Fib> {
                    let (aa, bb) = if keep_first { (c, other) } else { (other, c) };
                    if existential {
                        ck.d.exists_proj(aa, bb, keep_first, alpha)
                    } else {
                        ck.d.forall_proj(aa, bb, keep_first, alpha)
                    }
                };
                let _ = pr2;
                for alpha in &src_fib {
                    let moved = ck.d.reindex(&fx.mor, alpha)?;
                    let lhs = q2(&moved)?;
                    let rhs = ck.d.reindex(f, &q(alpha)?)?;
                    if eq_fib(&lhs, &rhs) {
                        out.pass();
                    } else {
                        out.fail(
                            Cx::one("instance", label.clone())
                                .push("arrow", f.to_string())
                                .push("alpha", alpha.to_string())
                                .push("lhs", lhs.to_string())
                                .push("rhs", rhs.to_string())
                                .push("reason", "Beck-Chevalley fails"),
                        );
                    }
                }
            }
        }
        Ok(())
    })();
    if let Err(e) = r {
        out.fail(Cx::one("instance", label).push("error", e.to_string()));
    }
    out
}

fn check_implicational(ck: &Ck) -> Outcome {
    let mut out = Outcome::new();
    for a in &ck.obs {
        let Some(fib) = ck.fiber(a, &mut out) else { continue };
        for x in &fib {
            for y in &fib {
                let imp = match ck.d.implies(y, x) {
                    Ok(i) => i,
                    Err(e) => {
                        out.fail(ck.cx_ob("object", a).push("error", e.to_string()));
                        continue;
                    }
                };
                for z in &fib {
                    let lhs = ck.d.leq(&ck.d.meet(z, y), x);
                    let rhs = ck.d.leq(z, &imp);
                    if lhs == rhs {
                        out.pass();
                    } else {
                        out.fail(
                            ck.cx_ob("object", a)
                                .push("x", x.to_string())
                                .push("y", y.to_string())
                                .push("z", z.to_string())
                                .push("reason", "implication adjunction fails"),
                        );
                    }
                }
            }
        }
    }
    out.finish()
}

fn check_disjunctive(ck: &Ck) -> Outcome {
    let mut out = Outcome::new();
    for a in &ck.obs {
        match ck.d.bottom(a) {
            Ok(bot) => {
                let Some(fib) = ck.fiber(a, &mut out) else { continue };
                for x in &fib {
                    if !ck.d.leq(&bot, x) {
                        out.fail(ck.cx_ob("object", a).push("not_least", x.to_string()));
                    }
                    for y in &fib {
                        let j = match ck.d.join(x, y) {
                            Ok(j) => j,
                            Err(e) => {
                                out.fail(ck.cx_ob("object", a).push("error", e.to_string()));
                                continue;
                            }
                        };
                        // least upper bound
                        for z in &fib {
                            let lhs = ck.d.leq(&j, z);
                            let rhs = ck.d.leq(x, z) && ck.d.leq(y, z);
                            if lhs != rhs {
                                out.fail(
                                    ck.cx_ob("object", a)
                                        .push("x", x.to_string())
                                        .push("y", y.to_string())
                                        .push("z", z.to_string())
                                        .push("reason", "join is not the least upper bound"),
                                );
                            } else {
                                out.pass();
                            }
                        }
                        // distributivity
                        for z in &fib {
                            let l = ck.d.meet(z, &j);
                            let r = match ck.d.join(&ck.d.meet(z, x), &ck.d.meet(z, y)) {
                                Ok(r) => r,
                                Err(e) => {
                                    out.fail(ck.cx_ob("object", a).push("error", e.to_string()));
                                    continue;
                                }
                            };
                            if eq_fib(&l, &r) {
                                out.pass();
                            } else {
                                out.fail(
                                    ck.cx_ob("object", a)
                                        .push("x", x.to_string())
                                        .push("y", y.to_string())
                                        .push("z", z.to_string())
                                        .push("reason", "meets do not distribute over joins"),
                                );
                            }
                        }
                    }
                }
            }
            Err(e) => out.fail(ck.cx_ob("object", a).push("error", e.to_string())),
        }
    }
    // reindexing preserves joins and bottom
    for a in &ck.obs {
        for b in &ck.obs {
            let Some(fs) = ck.homs(a, b, &mut out) else { continue };
            let Some(fib_b) = ck.fiber(b, &mut out) else { continue };
            for f in &fs {
                let ok: Result<()> = (|| {
                    let bb = ck.d.bottom(b)?;
                    let rb = ck.d.reindex(f, &bb)?;
                    if !eq_fib(&rb, &ck.d.bottom(a)?) {
                        out.fail(Cx::one("arrow", f.to_string()).push("reason", "bottom not preserved"));
                    } else {
                        out.pass();
                    }
                    for x in &fib_b {
                        for y in &fib_b {
                            let l = ck.d.reindex(f, &ck.d.join(x, y)?)?;
                            let r = ck.d.join(&ck.d.reindex(f, x)?, &ck.d.reindex(f, y)?)?;
                            if eq_fib(&l, &r) {
                                out.pass();
                            } else {
                                out.fail(
                                    Cx::one("arrow", f.to_string())
                                        .push("x", x.to_string())
                                        .push("y", y.to_string())
                                        .push("reason", "join not preserved"),
                                );
                            }
                        }
                    }
                    Ok(())
                })();
                if let Err(e) = ok {
                    out.fail(Cx::one("arrow", f.to_string()).push("error", e.to_string()));
                }
            }
        }
    }
    out.finish()
}

fn check_classifier(ck: &Ck, strong: bool) -> Outcome {
    let mut out = Outcome::new();
    let (omega, member) = match ck.d.classifier() {
        Ok(c) => c,
        Err(e) => {
            let mut o = Outcome::new();
            o.fail(Cx::one("error", e.to_string()));
            return o.finish();
        }
    };
    for a in &ck.obs {
        let Some(fib) = ck.fiber(a, &mut out) else { continue };
        let Some(chis) = ck.homs(a, &omega, &mut out) else { continue };
        for alpha in &fib {
            let mut found: Vec<&Mor> = Vec::new();
            for chi in &chis {
                match ck.d.reindex(chi, &member) {
                    Ok(pulled) if eq_fib(&pulled, alpha) => {
                        if !found.iter().any(|m| ck.cat.equal_mor(m, chi)) {
                            found.push(chi);
                        }
                    }
                    Ok(_) => {}
                    Err(e) => out.fail(Cx::one("chi", chi.to_string()).push("error", e.to_string())),
                }
            }
            let ok = if strong { found.len() == 1 } else { !found.is_empty() };
            if ok {
                out.pass();
            } else {
                out.fail(
                    ck.cx_ob("object", a)
                        .push("alpha", alpha.to_string())
                        .push("classifying_arrows", found.len().to_string()),
                );
            }
        }
    }
    out.finish()
}

fn check_power_objects(ck: &Ck) -> Outcome {
    let mut out = Outcome::new();
    for a in &ck.obs {
        let (pa, mem) = match ck.d.power_object(a) {
            Ok(p) => p,
            Err(Error::Budget { .. }) => {
                out.skip();
                continue;
            }
            Err(e) => {
                out.fail(ck.cx_ob("object", a).push("error", e.to_string()));
                continue;
            }
        };
        for y in &ck.obs {
            let r: Result<()> = (|| {
                let pay = ck.cat.product(a, y)?;
                let phis = match ck.d.enum_fiber(&pay.ob, ck.frag.fiber_budget) {
                    Ok(f) => f,
                    Err(Error::Budget { .. }) => {
                        out.skip();
                        return Ok(());
                    }
                    Err(e) => return Err(e),
                };
                let chis = match ck.cat.hom(y, &pa, ck.frag.hom_budget) {
                    Ok(h) => h,
                    Err(Error::Budget { .. }) => {
                        out.skip();
                        return Ok(());
                    }
                    Err(e) => return Err(e),
                };
                for phi in &phis {
                    let mut hit = false;
                    for chi in &chis {
                        let idchi = kernel::prod_mor(ck.cat.as_ref(), &ck.cat.identity(a), chi)?;
                        let pulled = ck.d.reindex(&idchi.mor, &mem)?;
                        if eq_fib(&pulled, phi) {
                            hit = true;
                            break;
                        }
                    }
                    if hit {
                        out.pass();
                    } else {
                        out.fail(
                            Cx::one("relation", phi.to_string())
                                .push("over", format!("{a} x {y}"))
                                .push("reason", "no classifying arrow into the power object"),
                        );
                    }
                }
                Ok(())
            })();
            if let Err(e) = r {
                out.fail(ck.cx_ob("object", a).push("error", e.to_string()));
            }
        }
    }
    out.finish()
}

fn check_comprehension(ck: &Ck, strong: bool, full: bool) -> Outcome {
    let mut out = Outcome::new();
    for a in &ck.obs {
        let Some(fib) = ck.fiber(a, &mut out) else { continue };
        for alpha in &fib {
            let m = match ck.d.comprehension(alpha) {
                Ok(m) => m,
                Err(e) => {
                    out.fail(ck.cx_ob("object", a).push("error", e.to_string()));
                    continue;
                }
            };
            match ck.d.reindex(&m, alpha) {
                Ok(pulled) if eq_fib(&pulled, &ck.d.top(&m.src)) => out.pass(),
                Ok(pulled) => out.fail(
                    Cx::one("alpha", alpha.to_string())
                        .push("pulled_back_to", pulled.to_string())
                        .push("reason", "alpha not true on its comprehension"),
                ),
                Err(e) => out.fail(Cx::one("alpha", alpha.to_string()).push("error", e.to_string())),
            }
            // weak universal property (+ uniqueness when strong)
            for y in &ck.obs {
                let Some(fs) = ck.homs(y, a, &mut out) else { continue };
                let Some(ks) = ck.homs(y, &m.src, &mut out) else { continue };
                for f in &fs {
                    let pulled = match ck.d.reindex(f, alpha) {
                        Ok(p) => p,
                        Err(e) => {
                            out.fail(Cx::one("arrow", f.to_string()).push("error", e.to_string()));
                            continue;
                        }
                    };
                    if !eq_fib(&pulled, &ck.d.top(y)) {
                        continue;
                    }
                    let mut mediators: Vec<&Mor> = Vec::new();
                    for k in &ks {
                        if let Ok(mk) = ck.cat.compose(&m, k) {
                            if ck.cat.equal_mor(&mk, f)
                                && !mediators.iter().any(|x| ck.cat.equal_mor(x, k))
                            {
                                mediators.push(k);
                            }
                        }
                    }
                    let ok = if strong {
                        mediators.len() == 1
                    } else {
                        !mediators.is_empty()
                    };
                    if ok {
                        out.pass();
                    } else {
                        out.fail(
                            Cx::one("alpha", alpha.to_string())
                                .push("arrow", f.to_string())
                                .push("mediators", mediators.len().to_string()),
                        );
                    }
                }
            }
            if full {
                for beta in &fib {
                    let lhs = ck.d.leq(alpha, beta);
                    let rhs = match ck.d.reindex(&m, beta) {
                        Ok(p) => eq_fib(&p, &ck.d.top(&m.src)),
                        Err(e) => {
                            out.fail(Cx::one("beta", beta.to_string()).push("error", e.to_string()));
                            continue;
                        }
                    };
                    if lhs == rhs {
                        out.pass();
                    } else {
                        out.fail(
                            Cx::one("alpha", alpha.to_string())
                                .push("beta", beta.to_string())
                                .push("alpha<=beta", lhs.to_string())
                                .push("true_on_comprehension", rhs.to_string())
                                .push("reason", "comprehension not full"),
                        );
                    }
                }
            }
        }
    }
    out.finish()
}

fn check_comprehensive_diagonals(ck: &Ck) -> Outcome {
    let mut out = Outcome::new();
    for x in &ck.obs {
        for a in &ck.obs {
            let Some(fs) = ck.homs(x, a, &mut out) else { continue };
            let delta = match ck.d.diagonal(a) {
                Ok(d) => d,
                Err(e) => {
                    out.fail(ck.cx_ob("object", a).push("error", e.to_string()));
                    continue;
                }
            };
            for f in &fs {
                for g in &fs {
                    let r: Result<()> = (|| {
                        let m = kernel::pair_into(
                            ck.cat.as_ref(),
                            &[a.clone(), a.clone()],
                            &[f.clone(), g.clone()],
                        )?;
                        let pulled = ck.d.reindex(&m, &delta)?;
                        let internal = eq_fib(&pulled, &ck.d.top(x));
                        let external = ck.cat.equal_mor(f, g);
                        if internal == external {
                            out.pass();
                        } else {
                            out.fail(
                                Cx::one("f", f.to_string())
                                    .push("g", g.to_string())
                                    .push("internally_equal", internal.to_string())
                                    .push("externally_equal", external.to_string()),
                            );
                        }
                        Ok(())
                    })();
                    if let Err(e) = r {
                        out.fail(Cx::one("f", f.to_string()).push("error", e.to_string()));
                    }
                }
            }
        }
    }
    out.finish()
}

fn check_choice(ck: &Ck, unique: bool) -> Outcome {
    let mut out = Outcome::new();
    for a in &ck.obs {
        for b in &ck.obs {
            let r: Result<()> = (|| {
                let p = ck.cat.product(a, b)?;
                let rels = match ck.d.enum_fiber(&p.ob, ck.frag.fiber_budget) {
                    Ok(f) => f,
                    Err(Error::Budget { .. }) => {
                        out.skip();
                        return Ok(());
                    }
                    Err(e) => return Err(e),
                };
                let fs = match ck.cat.hom(a, b, ck.frag.hom_budget) {
                    Ok(h) => h,
                    Err(Error::Budget { .. }) => {
                        out.skip();
                        return Ok(());
                    }
                    Err(e) => return Err(e),
                };
                for rel in &rels {
                    if !is_total(ck.d, a, b, rel)? {
                        continue;
                    }
                    if unique && !is_single_valued(ck.d, a, b, rel)? {
                        continue;
                    }
                    let mut tracked = false;
                    for f in &fs {
                        if unique {
                            // F(a, b) ⊣⊢ f(a) = b
                            let g = graph(ck.d, f)?;
                            if eq_fib(&g, rel) {
                                tracked = true;
                                break;
                            }
                        } else {
                            // ∃b F(a, b) ⊣⊢ F(a, f(a))
                            let idf = kernel::pair_into(
                                ck.cat.as_ref(),
                                &[a.clone(), b.clone()],
                                &[ck.cat.identity(a), f.clone()],
                            )?;
                            let picked = ck.d.reindex(&idf, rel)?;
                            let total = ck.d.exists_proj(a, b, true, rel)?;
                            if eq_fib(&picked, &total) {
                                tracked = true;
                                break;
                            }
                        }
                    }
                    if tracked {
                        out.pass();
                    } else {
                        out.fail(
                            Cx::one("relation", rel.to_string())
                                .push("over", format!("{a} x {b}"))
                                .push(
                                    "reason",
                                    if unique {
                                        "total single-valued relation tracked by no arrow"
                                    } else {
                                        "total relation with no choice arrow"
                                    },
                                ),
                        );
                    }
                }
                Ok(())
            })();
            if let Err(e) = r {
                out.fail(Cx::one("instance", format!("({a}, {b})")).push("error", e.to_string()));
            }
        }
    }
    out.finish()
}

fn check_boolean(ck: &Ck) -> Outcome {
    let mut out = Outcome::new();
    for a in &ck.obs {
        let Some(fib) = ck.fiber(a, &mut out) else { continue };
        for alpha in &fib {
            let r: Result<()> = (|| {
                let bot = ck.d.bottom(a)?;
                let neg = ck.d.implies(alpha, &bot)?;
                let lem = ck.d.join(alpha, &neg)?;
                if eq_fib(&lem, &ck.d.top(a)) {
                    out.pass();
                } else {
                    out.fail(
                        Cx::one("alpha", alpha.to_string())
                            .push("not_alpha", neg.to_string())
                            .push("alpha_or_not", lem.to_string()),
                    );
                }
                Ok(())
            })();
            if let Err(e) = r {
                out.fail(Cx::one("alpha", alpha.to_string()).push("error", e.to_string()));
            }
        }
    }
    out.finish()
}

fn check_quotients(ck: &Ck, which: Property) -> Outcome {
    let mut out = Outcome::new();
    if !ck.d.has_quotients() {
        out.fail(Cx::one("error", "missing capability: quotients"));
        return out.finish();
    }
    for a in &ck.obs {
        let rels = match super::equivalence_relations(ck.d, a, ck.frag.fiber_budget) {
            Ok(r) => r,
            Err(Error::Budget { .. }) => {
                out.skip();
                continue;
            }
            Err(e) => {
                out.fail(ck.cx_ob("object", a).push("error", e.to_string()));
                continue;
            }
        };
        for sigma in &rels {
            let r = quotient_instance(ck, a, sigma, which);
            out.merge(r);
        }
    }
    out.finish()
}

fn quotient_instance(ck: &Ck, a: &Ob, sigma: &Fib, which: Property) -> Outcome {
    let mut out = Outcome::new();
    let r: Result<()> = (|| {
        let (target, q) = ck.d.quotient(a, sigma)?;
        match which {
            Property::QuotientsEffective => {
                let dt = ck.d.diagonal(&target)?;
                let qq = kernel::prod_mor(ck.cat.as_ref(), &q, &q)?;
                let pulled = ck.d.reindex(&qq.mor, &dt)?;
                if eq_fib(&pulled, sigma) {
                    out.pass();
                } else {
                    out.fail(
                        Cx::one("relation", sigma.to_string())
                            .push("kernel_of_quotient", pulled.to_string())
                            .push("reason", "quotient not effective"),
                    );
                }
            }
            Property::QuotientsStable => {
                // the pulled-back leg is again a quotient arrow (of its own
                // kernel relation), and that kernel sits under the
                // reindexed relation
                for y in &ck.obs {
                    let Some(fs) = ck.homs(y, &target, &mut out) else { continue };
                    for f in &fs {
                        let pb = match ck.cat.pullback(&q, f) {
                            Ok(p) => p,
                            Err(Error::MissingStructure(_)) | Err(Error::Budget { .. }) => {
                                out.skip();
                                continue;
                            }
                            Err(e) => return Err(e),
                        };
                        let h = &pb.to_right;
                        let pp = kernel::prod_mor(ck.cat.as_ref(), &pb.to_left, &pb.to_left)?;
                        let moved = ck.d.reindex(&pp.mor, sigma)?;
                        let hh = kernel::prod_mor(ck.cat.as_ref(), h, h)?;
                        let ker = ck.d.reindex(&hh.mor, &ck.d.diagonal(&h.dst)?)?;
                        if !ck.d.leq(&ker, &moved) {
                            out.fail(
                                Cx::one("arrow", h.to_string())
                                    .push("kernel", ker.to_string())
                                    .push("reindexed_relation", moved.to_string())
                                    .push("reason", "kernel escapes the reindexed relation")
                                    .push("stability_pullback_along", f.to_string()),
                            );
                            continue;
                        }
                        let o = check_is_quotient_arrow(ck, h, &ker);
                        if o.verdict.holds() {
                            out.pass();
                        } else if let Verdict::Fails(cx) = o.verdict {
                            out.fail(cx.push("stability_pullback_along", f.to_string()));
                        } else {
                            out.skip();
                        }
                    }
                }
            }
            Property::QuotientsDescent => {
                // effective descent ⇔ internally surjective, for this quotient
                let surj = super::is_surj(ck.d, &q)?;
                let descent = descent_iso(ck, a, sigma, &target, &q, &mut out)?;
                match descent {
                    None => out.skip(),
                    Some(descent) => {
                        if surj == descent {
                            out.pass();
                        } else {
                            out.fail(
                                Cx::one("relation", sigma.to_string())
                                    .push("internally_surjective", surj.to_string())
                                    .push("effective_descent", descent.to_string()),
                            );
                        }
                    }
                }
            }
            _ => {}
        }
        Ok(())
    })();
    if let Err(e) = r {
        out.fail(Cx::one("relation", sigma.to_string()).push("error", e.to_string()));
    }
    out
}

/// Does `q` satisfy the universal property of the quotient of `rho` (over
/// the square of its source)?
fn check_is_quotient_arrow(ck: &Ck, q: &Mor, rho: &Fib) -> Outcome {
    let mut out = Outcome::new();
    let r: Result<()> = (|| {
        // q must coequalize rho
        let dt = ck.d.diagonal(&q.dst)?;
        let qq = kernel::prod_mor(ck.cat.as_ref(), q, q)?;
        let kernel_rel = ck.d.reindex(&qq.mor, &dt)?;
        if !ck.d.leq(rho, &kernel_rel) {
            out.fail(Cx::one("arrow", q.to_string()).push("reason", "does not coequalize the relation"));
            return Ok(());
        }
        for z in &ck.obs {
            let Some(gs) = ck.homs(&q.src, z, &mut out) else { continue };
            let Some(cands) = ck.homs(&q.dst, z, &mut out) else { continue };
            for g in &gs {
                let dz = ck.d.diagonal(z)?;
                let gg = kernel::prod_mor(ck.cat.as_ref(), g, g)?;
                let kg = ck.d.reindex(&gg.mor, &dz)?;
                if !ck.d.leq(rho, &kg) {
                    continue;
                }
                let mut mediators: Vec<&Mor> = Vec::new();
                for h in &cands {
                    if let Ok(hq) = ck.cat.compose(h, q) {
                        if ck.cat.equal_mor(&hq, g) && !mediators.iter().any(|m| ck.cat.equal_mor(m, h)) {
                            mediators.push(h);
                        }
                    }
                }
                if mediators.len() == 1 {
                    out.pass();
                } else {
                    out.fail(
                        Cx::one("arrow", q.to_string())
                            .push("cocone", g.to_string())
                            .push("mediators", mediators.len().to_string()),
                    );
                }
            }
        }
        Ok(())
    })();
    if let Err(e) = r {
        out.fail(Cx::one("arrow", q.to_string()).push("error", e.to_string()));
    }
    out.finish()
}

/// Is reindexing along `q` an isomorphism onto the lattice of descent data
/// of its kernel relation?
fn descent_iso(
    ck: &Ck,
    a: &Ob,
    _sigma: &Fib,
    target: &Ob,
    q: &Mor,
    out: &mut Outcome,
) -> Result<Option<bool>> {
    let dt = ck.d.diagonal(target)?;
    let qq = kernel::prod_mor(ck.cat.as_ref(), q, q)?;
    let kernel_rel = ck.d.reindex(&qq.mor, &dt)?;
    let up = match ck.d.enum_fiber(target, ck.frag.fiber_budget) {
        Ok(f) => f,
        Err(Error::Budget { .. }) => {
            out.skip();
            return Ok(None);
        }
        Err(e) => return Err(e),
    };
    let down = match ck.d.enum_fiber(a, ck.frag.fiber_budget) {
        Ok(f) => f,
        Err(Error::Budget { .. }) => {
            out.skip();
            return Ok(None);
        }
        Err(e) => return Err(e),
    };
    let mut images: Vec<Fib> = Vec::new();
    for x in &up {
        images.push(ck.d.reindex(q, x)?);
    }
    // injective?
    for i in 0..images.len() {
        for j in (i + 1)..images.len() {
            if eq_fib(&images[i], &images[j]) && !eq_fib(&up[i], &up[j]) {
                return Ok(Some(false));
            }
        }
    }
    // surjective onto descent data?
    for d in &down {
        if super::is_descent_datum(ck.d, a, &kernel_rel, d)? && !images.iter().any(|x| eq_fib(x, d))
        {
            return Ok(Some(false));
        }
    }
    Ok(Some(true))
}

/// The property verdict engine.
pub fn verify(d: &dyn Doctrine, property: Property, frag: &Fragment) -> PropertyReport {
    let ck = Ck::new(d, frag);
    let outcome = match property {
        Property::Primary => check_primary(&ck),
        Property::Elementary => check_elementary(&ck),
        Property::Existential => check_existential(&ck),
        Property::Implicational => check_implicational(&ck),
        Property::Disjunctive => check_disjunctive(&ck),
        Property::Universal => check_universal(&ck),
        Property::FirstOrder => {
            let mut o = Outcome::new();
            for p in [
                Property::Primary,
                Property::Elementary,
                Property::Existential,
                Property::Implicational,
                Property::Disjunctive,
                Property::Universal,
            ] {
                o.merge(verify(d, p, frag).outcome);
            }
            o.finish()
        }
        Property::WeakClassifier => check_classifier(&ck, false),
        Property::StrongClassifier => check_classifier(&ck, true),
        Property::PowerObjects => check_power_objects(&ck),
        Property::Tripos => {
            let mut o = Outcome::new();
            o.merge(verify(d, Property::FirstOrder, frag).outcome);
            o.merge(verify(d, Property::PowerObjects, frag).outcome);
            o.finish()
        }
        Property::ComprehensionWeak => check_comprehension(&ck, false, false),
        Property::ComprehensionStrong => check_comprehension(&ck, true, false),
        Property::ComprehensionFull => check_comprehension(&ck, false, true),
        Property::ComprehensiveDiagonals => check_comprehensive_diagonals(&ck),
        Property::Ruc => check_choice(&ck, true),
        Property::Rc => check_choice(&ck, false),
        Property::Boolean => check_boolean(&ck),
        Property::QuotientsEffective | Property::QuotientsStable | Property::QuotientsDescent => {
            check_quotients(&ck, property)
        }
    };
    PropertyReport {
        property,
        fragment: format!("cap={} include={}", frag.size_cap, frag.include.len()),
        outcome,
    }
}
