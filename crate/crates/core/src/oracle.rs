//! Independent brute-force verifiers. Everything here enumerates from
//! kernel primitives only and never calls the construction it is asked to
//! verify, so a passing verdict is evidence and a failing verdict carries a
//! replayable counterexample.

use crate::error::{Error, Result};
use crate::kernel::{Cat, Fragment, Mor, Ob, StructureWitness, WitnessKind};
use alloc::format;
use alloc::rc::Rc;
use alloc::string::{String, ToString};
use alloc::vec::Vec;
use core::fmt;

/// A replayable counterexample: ordered labelled payload, rendered
/// canonically.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct Cx(pub Vec<(String, String)>);

impl Cx {
    pub fn one(label: &str, value: impl Into<String>) -> Cx {
        Cx(Vec::from([(label.to_string(), value.into())]))
    }

    pub fn pairs(items: &[(&str, String)]) -> Cx {
        Cx(items.iter().map(|(k, v)| (k.to_string(), v.clone())).collect())
    }

    pub fn push(mut self, label: &str, value: impl Into<String>) -> Cx {
        self.0.push((label.to_string(), value.into()));
        self
    }
}

impl fmt::Display for Cx {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, (k, v)) in self.0.iter().enumerate() {
            if i > 0 {
                write!(f, "; ")?;
            }
            write!(f, "{k}={v}")?;
        }
        Ok(())
    }
}

/// Outcome of a single law or universal-property check.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Verdict {
    Holds,
    Fails(Cx),
    NotChecked(String),
}

impl Verdict {
    pub fn fails(cx: Cx) -> Verdict {
        Verdict::Fails(cx)
    }

    pub fn holds(&self) -> bool {
        matches!(self, Verdict::Holds)
    }
}

impl fmt::Display for Verdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Verdict::Holds => write!(f, "holds"),
            Verdict::Fails(cx) => write!(f, "fails [{cx}]"),
            Verdict::NotChecked(why) => write!(f, "not-checked ({why})"),
        }
    }
}

/// Aggregated result of many instances of a check: the first failure wins,
/// budget-skipped instances are counted, and a check that never ran reports
/// itself as not-checked.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Outcome {
    pub verdict: Verdict,
    pub checked: u64,
    pub skipped: u64,
}

impl Outcome {
    pub fn new() -> Outcome {
        Outcome {
            verdict: Verdict::Holds,
            checked: 0,
            skipped: 0,
        }
    }

    pub fn pass(&mut self) {
        self.checked += 1;
    }

    pub fn skip(&mut self) {
        self.skipped += 1;
    }

    pub fn fail(&mut self, cx: Cx) {
        if matches!(self.verdict, Verdict::Holds | Verdict::NotChecked(_)) {
            self.verdict = Verdict::Fails(cx);
        }
        self.checked += 1;
    }

    pub fn failed(&self) -> bool {
        matches!(self.verdict, Verdict::Fails(_))
    }

    pub fn merge(&mut self, other: Outcome) {
        self.checked += other.checked;
        self.skipped += other.skipped;
        if let Verdict::Fails(cx) = other.verdict {
            if !self.failed() {
                self.verdict = Verdict::Fails(cx);
            }
        }
    }

    /// Final verdict: failing if any instance failed, not-checked if nothing
    /// ran at all, holding otherwise (with `skipped` recorded).
    pub fn finish(mut self) -> Outcome {
        if !self.failed() && self.checked == 0 {
            self.verdict = Verdict::NotChecked("no instance fit the budget".to_string());
        }
        self
    }

    /// Errors (missing structure etc.) surface as failures with the error
    /// text; budget errors count as skips.
    pub fn absorb<T>(&mut self, r: Result<T>, context: &str) -> Option<T> {
        match r {
            Ok(v) => Some(v),
            Err(Error::Budget { .. }) => {
                self.skip();
                None
            }
            Err(e) => {
                self.fail(Cx::pairs(&[("context", context.to_string()), ("error", e.to_string())]));
                None
            }
        }
    }
}

impl Default for Outcome {
    fn default() -> Self {
        Outcome::new()
    }
}

/// A universal-property check record, as serialized into reports.
#[derive(Debug, Clone)]
pub struct UpCheck {
    pub kind: WitnessKind,
    pub carrier: Ob,
    pub outcome: Outcome,
}

fn homs_or_skip(cat: &Cat, a: &Ob, b: &Ob, frag: &Fragment, out: &mut Outcome) -> Option<Vec<Mor>> {
    match cat.hom(a, b, frag.hom_budget) {
        Ok(h) => Some(h),
        Err(Error::Budget { .. }) => {
            out.skip();
            None
        }
        Err(e) => {
            out.fail(Cx::one("error", e.to_string()));
            None
        }
    }
}

/// Checks the universal property of a piece of chosen structure over every
/// cone (or cocone) the fragment can build: existence of a mediating arrow,
/// uniqueness unless the witness is declared weak, and agreement of the
/// witness's own mediator procedure with an enumerated mediator.
pub fn check_universal(cat: &Cat, w: &StructureWitness, frag: &Fragment) -> Outcome {
    let mut out = Outcome::new();
    let objects = cat.objects(frag);
    match w.kind {
        WitnessKind::Terminal => {
            for x in &objects {
                let Some(h) = homs_or_skip(cat, x, &w.carrier, frag, &mut out) else {
                    continue;
                };
                let mut distinct: Vec<&Mor> = Vec::new();
                for m in &h {
                    if !distinct.iter().any(|d| cat.equal_mor(d, m)) {
                        distinct.push(m);
                    }
                }
                if distinct.len() == 1 || (w.weak && !distinct.is_empty()) {
                    out.pass();
                } else {
                    out.fail(Cx::pairs(&[
                        ("object", x.to_string()),
                        ("arrows_to_terminal", distinct.len().to_string()),
                    ]));
                }
            }
        }
        WitnessKind::Product | WitnessKind::Pullback => {
            let (la, lb) = (&w.legs[0], &w.legs[1]);
            for x in &objects {
                let Some(fs) = homs_or_skip(cat, x, &la.dst, frag, &mut out) else {
                    continue;
                };
                let Some(gs) = homs_or_skip(cat, x, &lb.dst, frag, &mut out) else {
                    continue;
                };
                let Some(cands) = homs_or_skip(cat, x, &w.carrier, frag, &mut out) else {
                    continue;
                };
                for f in &fs {
                    for g in &gs {
                        if w.kind == WitnessKind::Pullback {
                            // only commuting cones over the cospan
                            let (cf, cg) = (&w.aux[0], &w.aux[1]);
                            let l = match cat.compose(cf, f) {
                                Ok(m) => m,
                                Err(_) => continue,
                            };
                            let r = match cat.compose(cg, g) {
                                Ok(m) => m,
                                Err(_) => continue,
                            };
                            if !cat.equal_mor(&l, &r) {
                                continue;
                            }
                        }
                        let mut mediators: Vec<&Mor> = Vec::new();
                        for h in &cands {
                            let p1h = match cat.compose(la, h) {
                                Ok(m) => m,
                                Err(_) => continue,
                            };
                            let p2h = match cat.compose(lb, h) {
                                Ok(m) => m,
                                Err(_) => continue,
                            };
                            if cat.equal_mor(&p1h, f) && cat.equal_mor(&p2h, g) {
                                if !mediators.iter().any(|m| cat.equal_mor(m, h)) {
                                    mediators.push(h);
                                }
                            }
                        }
                        let ok = if w.weak {
                            !mediators.is_empty()
                        } else {
                            mediators.len() == 1
                        };
                        if !ok {
                            out.fail(Cx::pairs(&[
                                ("kind", w.kind.to_string()),
                                ("cone_src", x.to_string()),
                                ("leg1", f.to_string()),
                                ("leg2", g.to_string()),
                                ("mediators", mediators.len().to_string()),
                            ]));
                            continue;
                        }
                        if let Some(proc_) = &w.mediator {
                            match proc_(&[f.clone(), g.clone()]) {
                                Ok(claimed) => {
                                    if !mediators.iter().any(|m| cat.equal_mor(m, &claimed)) {
                                        out.fail(Cx::pairs(&[
                                            ("kind", w.kind.to_string()),
                                            ("cone_src", x.to_string()),
                                            ("claimed_mediator", claimed.to_string()),
                                            ("reason", "mediator procedure returned a non-mediating arrow".into()),
                                        ]));
                                        continue;
                                    }
                                }
                                Err(e) => {
                                    out.fail(Cx::pairs(&[
                                        ("kind", w.kind.to_string()),
                                        ("cone_src", x.to_string()),
                                        ("error", e.to_string()),
                                    ]));
                                    continue;
                                }
                            }
                        }
                        out.pass();
                    }
                }
            }
        }
        WitnessKind::Coproduct => {
            let (ia, ib) = (&w.legs[0], &w.legs[1]);
            for x in &objects {
                let Some(fs) = homs_or_skip(cat, &ia.src, x, frag, &mut out) else {
                    continue;
                };
                let Some(gs) = homs_or_skip(cat, &ib.src, x, frag, &mut out) else {
                    continue;
                };
                let Some(cands) = homs_or_skip(cat, &w.carrier, x, frag, &mut out) else {
                    continue;
                };
                for f in &fs {
                    for g in &gs {
                        let mut mediators: Vec<&Mor> = Vec::new();
                        for h in &cands {
                            let h1 = match cat.compose(h, ia) {
                                Ok(m) => m,
                                Err(_) => continue,
                            };
                            let h2 = match cat.compose(h, ib) {
                                Ok(m) => m,
                                Err(_) => continue,
                            };
                            if cat.equal_mor(&h1, f)
                                && cat.equal_mor(&h2, g)
                                && !mediators.iter().any(|m| cat.equal_mor(m, h))
                            {
                                mediators.push(h);
                            }
                        }
                        let ok = if w.weak {
                            !mediators.is_empty()
                        } else {
                            mediators.len() == 1
                        };
                        if ok {
                            out.pass();
                        } else {
                            out.fail(Cx::pairs(&[
                                ("kind", w.kind.to_string()),
                                ("cocone_dst", x.to_string()),
                                ("leg1", f.to_string()),
                                ("leg2", g.to_string()),
                                ("mediators", mediators.len().to_string()),
                            ]));
                        }
                    }
                }
            }
        }
        WitnessKind::Coequalizer => {
            let (u, v) = (&w.aux[0], &w.aux[1]);
            let q = &w.legs[0];
            // q must coequalize
            match (cat.compose(q, u), cat.compose(q, v)) {
                (Ok(qu), Ok(qv)) if cat.equal_mor(&qu, &qv) => out.pass(),
                (Ok(_), Ok(_)) => {
                    out.fail(Cx::one("reason", "witness arrow does not coequalize the pair"));
                    return out.finish();
                }
                _ => {
                    out.fail(Cx::one("reason", "witness arrow not composable with the pair"));
                    return out.finish();
                }
            }
            for y in &objects {
                let Some(ks) = homs_or_skip(cat, &u.dst, y, frag, &mut out) else {
                    continue;
                };
                let Some(cands) = homs_or_skip(cat, &w.carrier, y, frag, &mut out) else {
                    continue;
                };
                for k in &ks {
                    let ku = match cat.compose(k, u) {
                        Ok(m) => m,
                        Err(_) => continue,
                    };
                    let kv = match cat.compose(k, v) {
                        Ok(m) => m,
                        Err(_) => continue,
                    };
                    if !cat.equal_mor(&ku, &kv) {
                        continue;
                    }
                    let mut mediators: Vec<&Mor> = Vec::new();
                    for h in &cands {
                        let hq = match cat.compose(h, q) {
                            Ok(m) => m,
                            Err(_) => continue,
                        };
                        if cat.equal_mor(&hq, k) && !mediators.iter().any(|m| cat.equal_mor(m, h)) {
                            mediators.push(h);
                        }
                    }
                    let ok = if w.weak {
                        !mediators.is_empty()
                    } else {
                        mediators.len() == 1
                    };
                    if ok {
                        out.pass();
                    } else {
                        out.fail(Cx::pairs(&[
                            ("kind", w.kind.to_string()),
                            ("cocone", k.to_string()),
                            ("mediators", mediators.len().to_string()),
                        ]));
                    }
                }
            }
        }
        WitnessKind::Exponential => {
            out.verdict = Verdict::NotChecked(
                "exponentials are checked by the slice-exponential oracle".to_string(),
            );
        }
    }
    out.finish()
}

/// Universal property of a weak exponential of `g` by `f` in the slice over
/// their common codomain, checked by enumeration: for every fragment arrow
/// `h` into the codomain and every slice arrow from the chosen pullback of
/// `(f, h)` to `dom g`, there is exactly one transpose `C -> W` over the
/// codomain (existence always; uniqueness unless `weak`).
pub fn check_slice_exp(
    cat: &Cat,
    f: &Mor,
    g: &Mor,
    se: &crate::kernel::SliceExp,
    weak: bool,
    frag: &Fragment,
) -> Outcome {
    let mut out = Outcome::new();
    let a = f.dst.clone();
    for c in cat.objects(frag) {
        let Some(hs) = homs_or_skip(cat, &c, &a, frag, &mut out) else {
            continue;
        };
        for h in &hs {
            let pb = match cat.pullback(f, h) {
                Ok(p) => p,
                Err(_) => {
                    out.skip();
                    continue;
                }
            };
            let Some(ms) = homs_or_skip(cat, &pb.ob, &g.src, frag, &mut out) else {
                continue;
            };
            let Some(ts) = homs_or_skip(cat, &c, &se.w, frag, &mut out) else {
                continue;
            };
            let Some(us) = homs_or_skip(cat, &pb.ob, &se.z, frag, &mut out) else {
                continue;
            };
            for m in &ms {
                // m must live over the codomain
                let gm = match cat.compose(g, m) {
                    Ok(x) => x,
                    Err(_) => continue,
                };
                let over = match cat.compose(f, &pb.to_left) {
                    Ok(x) => x,
                    Err(_) => continue,
                };
                if !cat.equal_mor(&gm, &over) {
                    continue;
                }
                let mut transposes: Vec<&Mor> = Vec::new();
                for t in &ts {
                    let qt = match cat.compose(&se.q, t) {
                        Ok(x) => x,
                        Err(_) => continue,
                    };
                    if !cat.equal_mor(&qt, h) {
                        continue;
                    }
                    let th = match cat.compose(t, &pb.to_right) {
                        Ok(x) => x,
                        Err(_) => continue,
                    };
                    // find a map into the chosen weak product Z matching the cone
                    let mut works = false;
                    for u in &us {
                        let ub = match cat.compose(&se.z_to_dom_f, u) {
                            Ok(x) => x,
                            Err(_) => continue,
                        };
                        let uw = match cat.compose(&se.z_to_w, u) {
                            Ok(x) => x,
                            Err(_) => continue,
                        };
                        if !cat.equal_mor(&ub, &pb.to_left) || !cat.equal_mor(&uw, &th) {
                            continue;
                        }
                        let eu = match cat.compose(&se.eval, u) {
                            Ok(x) => x,
                            Err(_) => continue,
                        };
                        if cat.equal_mor(&eu, m) {
                            works = true;
                            break;
                        }
                    }
                    if works && !transposes.iter().any(|x| cat.equal_mor(x, t)) {
                        transposes.push(t);
                    }
                }
                let ok = if weak {
                    !transposes.is_empty()
                } else {
                    transposes.len() == 1
                };
                if ok {
                    out.pass();
                } else {
                    out.fail(Cx::pairs(&[
                        ("slice_over", a.to_string()),
                        ("test_object", c.to_string()),
                        ("test_arrow", h.to_string()),
                        ("map", m.to_string()),
                        ("transposes", transposes.len().to_string()),
                    ]));
                }
            }
        }
    }
    out.finish()
}

/// Functor data between two categories, given algorithmically.
#[derive(Clone)]
pub struct FunctorData {
    pub src: Cat,
    pub dst: Cat,
    pub on_ob: Rc<dyn Fn(&Ob) -> Result<Ob>>,
    pub on_mor: Rc<dyn Fn(&Mor) -> Result<Mor>>,
    pub label: String,
}

impl FunctorData {
    pub fn apply_ob(&self, a: &Ob) -> Result<Ob> {
        (self.on_ob)(a)
    }
    pub fn apply_mor(&self, m: &Mor) -> Result<Mor> {
        (self.on_mor)(m)
    }
}

/// Result of an equivalence check: three sub-verdicts plus functoriality.
#[derive(Debug, Clone)]
pub struct EquivalenceReport {
    pub functorial: Outcome,
    pub full: Outcome,
    pub faithful: Outcome,
    pub essentially_surjective: Outcome,
}

impl EquivalenceReport {
    pub fn holds(&self) -> bool {
        self.functorial.verdict.holds()
            && self.full.verdict.holds()
            && self.faithful.verdict.holds()
            && self.essentially_surjective.verdict.holds()
    }

    pub fn first_failure(&self) -> Option<&Cx> {
        for o in [
            &self.functorial,
            &self.full,
            &self.faithful,
            &self.essentially_surjective,
        ] {
            if let Verdict::Fails(cx) = &o.verdict {
                return Some(cx);
            }
        }
        None
    }
}

/// Checks that `fun` is a functor on the source fragment and that it is
/// full, faithful, and essentially surjective onto the target fragment.
pub fn check_equivalence(
    fun: &FunctorData,
    src_frag: &Fragment,
    dst_frag: &Fragment,
) -> EquivalenceReport {
    let (scat, dcat) = (&fun.src, &fun.dst);
    let sobs = scat.objects(src_frag);
    let mut functorial = Outcome::new();
    let mut full = Outcome::new();
    let mut faithful = Outcome::new();

    // functoriality: identities and binary composites over the fragment
    for a in &sobs {
        match (fun.apply_ob(a), fun.apply_mor(&scat.identity(a))) {
            (Ok(fa), Ok(fid)) => {
                if dcat.equal_mor(&fid, &dcat.identity(&fa)) {
                    functorial.pass();
                } else {
                    functorial.fail(Cx::pairs(&[
                        ("object", a.to_string()),
                        ("image_of_identity", fid.to_string()),
                    ]));
                }
            }
            (Err(e), _) | (_, Err(e)) => {
                functorial.fail(Cx::pairs(&[("object", a.to_string()), ("error", e.to_string())]));
            }
        }
    }
    for a in &sobs {
        for b in &sobs {
            let Some(fs) = homs_or_skip(scat, a, b, src_frag, &mut functorial) else {
                continue;
            };
            for c in &sobs {
                let Some(gs) = homs_or_skip(scat, b, c, src_frag, &mut functorial) else {
                    continue;
                };
                for f in &fs {
                    for g in &gs {
                        let lhs = scat
                            .compose(g, f)
                            .and_then(|gf| fun.apply_mor(&gf));
                        let rhs = (|| -> Result<Mor> {
                            let ff = fun.apply_mor(f)?;
                            let fg = fun.apply_mor(g)?;
                            dcat.compose(&fg, &ff)
                        })();
                        match (lhs, rhs) {
                            (Ok(l), Ok(r)) => {
                                if dcat.equal_mor(&l, &r) {
                                    functorial.pass();
                                } else {
                                    functorial.fail(Cx::pairs(&[
                                        ("f", f.to_string()),
                                        ("g", g.to_string()),
                                        ("F(g.f)", l.to_string()),
                                        ("F(g).F(f)", r.to_string()),
                                    ]));
                                }
                            }
                            (Err(e), _) | (_, Err(e)) => functorial.fail(Cx::pairs(&[
                                ("f", f.to_string()),
                                ("g", g.to_string()),
                                ("error", e.to_string()),
                            ])),
                        }
                    }
                }
            }
        }
    }

    // full + faithful per hom set
    for a in &sobs {
        for b in &sobs {
            let (Ok(fa), Ok(fb)) = (fun.apply_ob(a), fun.apply_ob(b)) else {
                full.skip();
                continue;
            };
            let Some(shom) = homs_or_skip(scat, a, b, src_frag, &mut faithful) else {
                continue;
            };
            let Some(dhom) = homs_or_skip(dcat, &fa, &fb, dst_frag, &mut full) else {
                continue;
            };
            let images: Vec<(usize, Mor)> = shom
                .iter()
                .enumerate()
                .filter_map(|(i, m)| fun.apply_mor(m).ok().map(|fm| (i, fm)))
                .collect();
            // faithful: distinct source arrows stay distinct
            for i in 0..shom.len() {
                for j in (i + 1)..shom.len() {
                    if scat.equal_mor(&shom[i], &shom[j]) {
                        continue;
                    }
                    let (fi, fj) = (&images[i].1, &images[j].1);
                    if dcat.equal_mor(fi, fj) {
                        faithful.fail(Cx::pairs(&[
                            ("f", shom[i].to_string()),
                            ("g", shom[j].to_string()),
                            ("common_image", fi.to_string()),
                        ]));
                    } else {
                        faithful.pass();
                    }
                }
            }
            if shom.len() < 2 {
                faithful.pass();
            }
            // full: every target arrow is hit
            for k in &dhom {
                if images.iter().any(|(_, fm)| dcat.equal_mor(fm, k)) {
                    full.pass();
                } else {
                    full.fail(Cx::pairs(&[
                        ("target_arrow", k.to_string()),
                        ("between", format!("{fa} -> {fb}")),
                    ]));
                }
            }
        }
    }

    // essential surjectivity, fragment-relative
    let mut eso = Outcome::new();
    let images: Vec<Ob> = sobs.iter().filter_map(|a| fun.apply_ob(a).ok()).collect();
    for y in dcat.objects(dst_frag) {
        let mut hit = false;
        for fx in &images {
            if *fx == y {
                hit = true;
                break;
            }
            if let Ok(hs) = dcat.hom(fx, &y, dst_frag.hom_budget) {
                for m in hs {
                    if let Ok(Some(_)) =
                        crate::kernel::find_inverse(dcat.as_ref(), &m, dst_frag.hom_budget)
                    {
                        hit = true;
                        break;
                    }
                }
            }
            if hit {
                break;
            }
        }
        if hit {
            eso.pass();
        } else {
            eso.fail(Cx::pairs(&[("target_object", y.to_string())]));
        }
    }

    EquivalenceReport {
        functorial: functorial.finish(),
        full: full.finish(),
        faithful: faithful.finish(),
        essentially_surjective: eso.finish(),
    }
}

/// A finite poset presented by labels and an order table, used for Galois
/// connection checks over enumerated fibres.
#[derive(Debug, Clone)]
pub struct FinitePoset {
    pub labels: Vec<String>,
    pub leq: Vec<bool>,
}

impl FinitePoset {
    pub fn le(&self, x: usize, y: usize) -> bool {
        self.leq[x * self.labels.len() + y]
    }
}

/// Checks `l ⊣ r` between two finite posets given as tables:
/// `l(x) ≤ y  ⇔  x ≤ r(y)` for all pairs.
pub fn check_galois(px: &FinitePoset, py: &FinitePoset, l: &[usize], r: &[usize]) -> Outcome {
    let mut out = Outcome::new();
    for x in 0..px.labels.len() {
        for y in 0..py.labels.len() {
            let lhs = py.le(l[x], y);
            let rhs = px.le(x, r[y]);
            if lhs == rhs {
                out.pass();
            } else {
                out.fail(Cx::pairs(&[
                    ("x", px.labels[x].clone()),
                    ("y", py.labels[y].clone()),
                    ("l(x)<=y", lhs.to_string()),
                    ("x<=r(y)", rhs.to_string()),
                ]));
            }
        }
    }
    out.finish()
}

/// Hom-set bijection check for an adjunction `L ⊣ R` between finite
/// fragments, via the unit: `k ↦ R(k) ∘ unit_X` must biject
/// `hom(L X, Y) → hom(X, R Y)`.
pub fn check_adjoint_functors(
    l: &FunctorData,
    r: &FunctorData,
    unit: &dyn Fn(&Ob) -> Result<Mor>,
    src_frag: &Fragment,
    dst_frag: &Fragment,
) -> Outcome {
    let mut out = Outcome::new();
    let (c, d) = (&l.src, &l.dst);
    for x in c.objects(src_frag) {
        let Ok(lx) = l.apply_ob(&x) else {
            out.skip();
            continue;
        };
        let Ok(eta) = unit(&x) else {
            out.fail(Cx::one("unit_missing_at", x.to_string()));
            continue;
        };
        for y in d.objects(dst_frag) {
            let Ok(ry) = r.apply_ob(&y) else {
                out.skip();
                continue;
            };
            let Some(up) = homs_or_skip(d, &lx, &y, dst_frag, &mut out) else {
                continue;
            };
            let Some(down) = homs_or_skip(c, &x, &ry, src_frag, &mut out) else {
                continue;
            };
            let mut transposed: Vec<Mor> = Vec::new();
            for k in &up {
                let t = r
                    .apply_mor(k)
                    .and_then(|rk| c.compose(&rk, &eta));
                match t {
                    Ok(t) => transposed.push(t),
                    Err(e) => {
                        out.fail(Cx::pairs(&[("arrow", k.to_string()), ("error", e.to_string())]));
                    }
                }
            }
            // injective + surjective onto hom(X, RY), up to equal_mor
            let mut distinct_up = 0usize;
            for i in 0..up.len() {
                if !up[..i].iter().any(|m| d.equal_mor(m, &up[i])) {
                    distinct_up += 1;
                }
            }
            let mut distinct_tr: Vec<&Mor> = Vec::new();
            for t in &transposed {
                if !distinct_tr.iter().any(|m| c.equal_mor(m, t)) {
                    distinct_tr.push(t);
                }
            }
            let mut distinct_down = 0usize;
            for i in 0..down.len() {
                if !down[..i].iter().any(|m| c.equal_mor(m, &down[i])) {
                    distinct_down += 1;
                }
            }
            let surjective = down
                .iter()
                .all(|m| transposed.iter().any(|t| c.equal_mor(t, m)));
            if distinct_tr.len() == distinct_up && distinct_up == distinct_down && surjective {
                out.pass();
            } else {
                out.fail(Cx::pairs(&[
                    ("x", x.to_string()),
                    ("y", y.to_string()),
                    ("hom(LX,Y)", distinct_up.to_string()),
                    ("hom(X,RY)", distinct_down.to_string()),
                    ("transposed_distinct", distinct_tr.len().to_string()),
                ]));
            }
        }
    }
    out.finish()
}
