//! Formula-level constructions: least internal equivalence relations (by
//! fixpoint iteration and by the power-object formula), coproducts and
//! coequalizers in the quotient completion, the strong classifier, slice
//! exponentials, the singleton (coarse) reflection, and the projective
//! core with its reconstruction.

use crate::completions::{eqc, EqcDoctrine, EqcSliceData};
use crate::doctrine::{
    self, eq_fib, exists_along, factorize, is_equivalence_relation, rel_compose, rel_swap, Doc,
    Doctrine, Fib,
};
use crate::error::{Error, Result};
use crate::kernel::{
    self, is_epi, is_mono, Cat, CatOps, Coprod, Fragment, Mor, Ob, Prod, Pullback, SliceExp,
    StructureWitness, WitnessKind,
};
use crate::oracle::{check_equivalence, Cx, EquivalenceReport, FunctorData, Outcome};
use alloc::format;
use alloc::rc::Rc;
use alloc::string::{String, ToString};
use alloc::vec;
use alloc::vec::Vec;

/// Closure strategy for the least internal equivalence relation.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ClosureStrategy {
    /// Monotone iteration: reflexivize, symmetrize, then join with the
    /// relational self-composition until fixed. Terminates on finite
    /// fibres.
    Fixpoint,
    /// The power-object formula: the intersection of all internal
    /// equivalence relations containing the given one, expressed with a
    /// universal quantifier over the power object of the square.
    Tripos,
}

/// The least internal equivalence relation above `rho` over `a`.
pub fn equiv_closure(
    d: &dyn Doctrine,
    a: &Ob,
    rho: &Fib,
    strategy: ClosureStrategy,
) -> Result<Fib> {
    match strategy {
        ClosureStrategy::Fixpoint => {
            let delta = d.diagonal(a)?;
            let sw = rel_swap(d, a, rho)?;
            let mut r = d.join(&d.join(rho, &delta)?, &sw)?;
            loop {
                let rr = rel_compose(d, a, a, a, &r, &r)?;
                let next = d.join(&r, &rr)?;
                if eq_fib(&next, &r) {
                    return Ok(r);
                }
                r = next;
            }
        }
        ClosureStrategy::Tripos => {
            let preds = closure_predicates(d, a)?;
            let cat = d.cat();
            let sq = cat.product(a, a)?;
            let (pow, mem) = d.power_object(&sq.ob)?;
            // contains(U): ∀ x x'. rho(x, x') ⇒ (x, x') ∈ U, over pow
            let contains = {
                let big = cat.product(&pow, &sq.ob)?;
                let mrel = d.reindex(&big.pr2, rho)?;
                let min = kernel::pair_into(
                    cat.as_ref(),
                    &[sq.ob.clone(), pow.clone()],
                    &[big.pr2.clone(), big.pr1.clone()],
                )?;
                let inu = d.reindex(&min, &mem)?;
                let body = d.implies(&mrel, &inu)?;
                d.forall_proj(&pow, &sq.ob, true, &body)?
            };
            let good = d.meet(&preds.eq, &contains);
            // closure(x, x') = ∀ U. good(U) ⇒ (x, x') ∈ U, over the square
            let big = cat.product(&sq.ob, &pow)?;
            let g = d.reindex(&big.pr2, &good)?;
            let inu = d.reindex(
                &kernel::pair_into(
                    cat.as_ref(),
                    &[sq.ob.clone(), pow.clone()],
                    &[big.pr1.clone(), big.pr2.clone()],
                )?,
                &mem,
            )?;
            let body = d.implies(&g, &inu)?;
            d.forall_proj(&sq.ob, &pow, true, &body)
        }
    }
}

/// The reflexivity, symmetry, transitivity and conjunction predicates over
/// the power object of the square of `a`.
pub struct ClosurePredicates {
    pub pow: Ob,
    pub refl: Fib,
    pub sym: Fib,
    pub trans: Fib,
    pub eq: Fib,
}

pub fn closure_predicates(d: &dyn Doctrine, a: &Ob) -> Result<ClosurePredicates> {
    let cat = d.cat();
    let sq = cat.product(a, a)?;
    let (pow, mem) = d.power_object(&sq.ob)?;
    // mem lives over (a × a) × pow
    let member = |xy: &Mor, u: &Mor| -> Result<Fib> {
        let m = kernel::pair_into(
            cat.as_ref(),
            &[sq.ob.clone(), pow.clone()],
            &[xy.clone(), u.clone()],
        )?;
        d.reindex(&m, &mem)
    };
    let pair = |x: &Mor, y: &Mor| -> Result<Mor> {
        kernel::pair_into(cat.as_ref(), &[a.clone(), a.clone()], &[x.clone(), y.clone()])
    };

    // refl(U): ∀ x. (x, x) ∈ U — over pow × a
    let refl = {
        let big = cat.product(&pow, a)?;
        let xx = pair(&big.pr2, &big.pr2)?;
        let body = member(&xx, &big.pr1)?;
        d.forall_proj(&pow, a, true, &body)?
    };
    // sym(U): ∀ x x'. (x, x') ∈ U ⇒ (x', x) ∈ U — over pow × (a × a)
    let sym = {
        let big = cat.product(&pow, &sq.ob)?;
        let x = cat.compose(&sq.pr1, &big.pr2)?;
        let y = cat.compose(&sq.pr2, &big.pr2)?;
        let fwd = member(&pair(&x, &y)?, &big.pr1)?;
        let bwd = member(&pair(&y, &x)?, &big.pr1)?;
        let body = d.implies(&fwd, &bwd)?;
        d.forall_proj(&pow, &sq.ob, true, &body)?
    };
    // trans(U): ∀ x x' x''. ((x, x') ∈ U ∧ (x', x'') ∈ U) ⇒ (x, x'') ∈ U
    let trans = {
        let (tri, projs) = kernel::nary_product(cat.as_ref(), &[a.clone(), a.clone(), a.clone()])?;
        let big = cat.product(&pow, &tri)?;
        let through = |i: usize| -> Result<Mor> { cat.compose(&projs[i], &big.pr2) };
        let (x, y, z) = (through(0)?, through(1)?, through(2)?);
        let m12 = member(&pair(&x, &y)?, &big.pr1)?;
        let m23 = member(&pair(&y, &z)?, &big.pr1)?;
        let m13 = member(&pair(&x, &z)?, &big.pr1)?;
        let body = d.implies(&d.meet(&m12, &m23), &m13)?;
        d.forall_proj(&pow, &tri, true, &body)?
    };
    let eq = d.meet(&d.meet(&refl, &sym), &trans);
    Ok(ClosurePredicates {
        pow,
        refl,
        sym,
        trans,
        eq,
    })
}

/// Closure-operator laws for the fixpoint strategy plus agreement with the
/// power-object strategy, over every relation in the fibre.
pub fn check_closure_agreement(d: &dyn Doctrine, a: &Ob, budget: usize) -> Outcome {
    let mut out = Outcome::new();
    let r: Result<()> = (|| {
        let cat = d.cat();
        let sq = cat.product(a, a)?;
        let rels = d.enum_fiber(&sq.ob, budget)?;
        for rho in &rels {
            let fx = equiv_closure(d, a, rho, ClosureStrategy::Fixpoint)?;
            // closure laws
            if !d.leq(rho, &fx) {
                out.fail(Cx::one("rho", rho.to_string()).push("reason", "not extensive"));
                continue;
            }
            if !is_equivalence_relation(d, a, &fx)? {
                out.fail(Cx::one("rho", rho.to_string()).push("reason", "not an equivalence relation"));
                continue;
            }
            let again = equiv_closure(d, a, &fx, ClosureStrategy::Fixpoint)?;
            if !eq_fib(&again, &fx) {
                out.fail(Cx::one("rho", rho.to_string()).push("reason", "not idempotent"));
                continue;
            }
            // minimality against every equivalence relation above rho
            for sigma in &rels {
                if is_equivalence_relation(d, a, sigma)? && d.leq(rho, sigma) && !d.leq(&fx, sigma)
                {
                    out.fail(
                        Cx::one("rho", rho.to_string())
                            .push("sigma", sigma.to_string())
                            .push("reason", "not minimal"),
                    );
                }
            }
            // cross-strategy agreement
            let tr = equiv_closure(d, a, rho, ClosureStrategy::Tripos)?;
            if eq_fib(&fx, &tr) {
                out.pass();
            } else {
                out.fail(
                    Cx::one("rho", rho.to_string())
                        .push("fixpoint", fx.to_string())
                        .push("power_formula", tr.to_string()),
                );
            }
        }
        Ok(())
    })();
    if let Err(e) = r {
        out.fail(Cx::one("object", a.to_string()).push("error", e.to_string()));
    }
    out.finish()
}

/// Coproduct in the quotient completion, with its verification bundle: the
/// universal property, internally injective injections, joint surjectivity,
/// effectiveness of the sum relation, and the disjointness transfer.
pub fn coproduct_eqc(q: &Rc<EqcDoctrine>, a: &Ob, b: &Ob) -> Result<Coprod> {
    q.cat()
        .coproduct(a, b)
        .ok_or(Error::MissingStructure("coproducts in the completed base"))
}

pub fn check_coproduct(q: &Rc<EqcDoctrine>, a: &Ob, b: &Ob, frag: &Fragment) -> Outcome {
    let mut out = Outcome::new();
    let cat = q.cat();
    let r: Result<()> = (|| {
        let c = coproduct_eqc(q, a, b)?;
        let qd: &dyn Doctrine = q.as_ref();
        // universal property
        let w = StructureWitness::of_coproduct(&cat, &c);
        out.merge(crate::oracle::check_universal(&cat, &w, frag));
        // injections internally injective
        for (label, inj) in [("first", &c.in1), ("second", &c.in2)] {
            match doctrine::is_inj(qd, inj) {
                Ok(true) => out.pass(),
                Ok(false) => out.fail(
                    Cx::one("injection", label).push("reason", "not internally injective"),
                ),
                Err(e) => out.fail(Cx::one("injection", label).push("error", e.to_string())),
            }
        }
        // jointly surjective: im(in1) ∨ im(in2) = ⊤
        let im1 = exists_along(qd, &c.in1, &qd.top(a))?;
        let im2 = exists_along(qd, &c.in2, &qd.top(b))?;
        let joined = qd.join(&im1, &im2)?;
        if eq_fib(&joined, &qd.top(&c.ob)) {
            out.pass();
        } else {
            out.fail(Cx::one("joint_image", joined.to_string()));
        }
        // effectiveness: pulling the sum relation back along each injection
        // recovers the component relation
        let dsum = qd.diagonal(&c.ob)?;
        for (label, inj, part) in [("first", &c.in1, a), ("second", &c.in2, b)] {
            let ii = kernel::prod_mor(cat.as_ref(), inj, inj)?;
            let pulled = qd.reindex(&ii.mor, &dsum)?;
            if eq_fib(&pulled, &qd.diagonal(part)?) {
                out.pass();
            } else {
                out.fail(
                    Cx::one("injection", label)
                        .push("pulled_relation", pulled.to_string())
                        .push("reason", "sum relation not effective on the part"),
                );
            }
        }
        // disjointness transfer: equality pulled back along (in1, in2) is
        // bottom exactly when the same holds underneath
        let (ba, _) = q.eqc_cat().parts(a)?;
        let (bb, _) = q.eqc_cat().parts(b)?;
        let p = q.base_doctrine();
        let base_c = p
            .cat()
            .coproduct(&ba, &bb)
            .ok_or(Error::MissingStructure("base coproducts"))?;
        let base_disjoint = {
            let ii = kernel::prod_mor(p.cat().as_ref(), &base_c.in1, &base_c.in2)?;
            let pulled = p.reindex(&ii.mor, &p.diagonal(&base_c.ob)?)?;
            eq_fib(&pulled, &p.bottom(&pulled.ob)?)
        };
        let completed_disjoint = {
            let ii = kernel::prod_mor(cat.as_ref(), &c.in1, &c.in2)?;
            let pulled = qd.reindex(&ii.mor, &dsum)?;
            eq_fib(&pulled, &qd.bottom(&pulled.ob)?)
        };
        if base_disjoint == completed_disjoint {
            out.pass();
        } else {
            out.fail(
                Cx::one("base_disjoint", base_disjoint.to_string())
                    .push("completed_disjoint", completed_disjoint.to_string()),
            );
        }
        // distributivity on this instance: for every fragment object X, the
        // canonical map (X × A) + (X × B) -> X × (A + B) is an isomorphism
        for x in cat.objects(frag) {
            let xa = cat.product(&x, a)?;
            let xb = cat.product(&x, b)?;
            let Some(lhs) = cat.coproduct(&xa.ob, &xb.ob) else {
                out.skip();
                continue;
            };
            let rhs = cat.product(&x, &c.ob)?;
            let leg = |p_: &Prod, inj: &Mor| -> Result<Mor> {
                let second = cat.compose(inj, &p_.pr2)?;
                cat.pair(&rhs, &p_.pr1, &second)
            };
            let canon = cat.copair(&lhs, &leg(&xa, &c.in1)?, &leg(&xb, &c.in2)?)?;
            match kernel::find_inverse(cat.as_ref(), &canon, frag.hom_budget) {
                Ok(Some(_)) => out.pass(),
                Ok(None) => out.fail(
                    Cx::one("object", x.to_string())
                        .push("reason", "canonical distributivity map is not invertible"),
                ),
                Err(Error::Budget { .. }) => out.skip(),
                Err(e) => out.fail(Cx::one("object", x.to_string()).push("error", e.to_string())),
            }
        }
        Ok(())
    })();
    if let Err(e) = r {
        out.fail(Cx::one("instance", format!("{a} + {b}")).push("error", e.to_string()));
    }
    out.finish()
}

/// Equalizer in the completion: the comprehension of the internal equality
/// of the two composites.
pub fn equalizer_eqc(q: &Rc<EqcDoctrine>, f: &Mor, g: &Mor) -> Result<Mor> {
    if f.src != g.src || f.dst != g.dst {
        return Err(Error::Mismatch {
            context: "equalizer",
            detail: "parallel pair required".into(),
        });
    }
    let qd: &dyn Doctrine = q.as_ref();
    let cat = q.cat();
    let delta = qd.diagonal(&f.dst)?;
    let m = kernel::pair_into(
        cat.as_ref(),
        &[f.dst.clone(), g.dst.clone()],
        &[f.clone(), g.clone()],
    )?;
    let gamma = qd.reindex(&m, &delta)?;
    qd.comprehension(&gamma)
}

/// Equalizer universal property: the inclusion equalizes, and every
/// equalizing fragment cone factors through it uniquely.
pub fn check_equalizer(q: &Rc<EqcDoctrine>, f: &Mor, g: &Mor, frag: &Fragment) -> Outcome {
    let mut out = Outcome::new();
    let cat = q.cat();
    let r: Result<()> = (|| {
        let e = equalizer_eqc(q, f, g)?;
        let fe = cat.compose(f, &e)?;
        let ge = cat.compose(g, &e)?;
        if cat.equal_mor(&fe, &ge) {
            out.pass();
        } else {
            out.fail(Cx::one("equalizer", e.to_string()).push("reason", "inclusion does not equalize"));
            return Ok(());
        }
        for x in cat.objects(frag) {
            let hs = match cat.hom(&x, &f.src, frag.hom_budget) {
                Ok(h) => h,
                Err(Error::Budget { .. }) => {
                    out.skip();
                    continue;
                }
                Err(err) => return Err(err),
            };
            let cands = match cat.hom(&x, &e.src, frag.hom_budget) {
                Ok(h) => h,
                Err(Error::Budget { .. }) => {
                    out.skip();
                    continue;
                }
                Err(err) => return Err(err),
            };
            for u in &hs {
                let fu = cat.compose(f, u)?;
                let gu = cat.compose(g, u)?;
                if !cat.equal_mor(&fu, &gu) {
                    continue;
                }
                let mut mediators = 0usize;
                for k in &cands {
                    let ek = cat.compose(&e, k)?;
                    if cat.equal_mor(&ek, u) {
                        mediators += 1;
                    }
                }
                if mediators == 1 {
                    out.pass();
                } else {
                    out.fail(
                        Cx::one("cone", u.to_string())
                            .push("mediators", mediators.to_string()),
                    );
                }
            }
        }
        Ok(())
    })();
    if let Err(e) = r {
        out.fail(Cx::one("pair", format!("({f}, {g})")).push("error", e.to_string()));
    }
    out.finish()
}

/// The strong predicate classifier of the completion.
pub fn classifier_eqc(q: &Rc<EqcDoctrine>) -> Result<(Ob, Fib)> {
    q.classifier()
}

/// Slice exponential in the completion over `dst f = dst g`, as chosen
/// structure plus the underlying formula data.
pub fn slice_exponential(
    q: &Rc<EqcDoctrine>,
    f: &Mor,
    g: &Mor,
) -> Result<(SliceExp, EqcSliceData)> {
    let data = q.eqc_cat().slice_exponential_data(f, g)?;
    let se = q
        .cat()
        .slice_weak_exp(f, g)
        .ok_or(Error::MissingStructure("slice exponentials in the completion"))?;
    Ok((se, data))
}

/// Coequalizer in the completion: quotient by the closure of the image of
/// the pair, packaged with a mediator procedure.
pub fn coequalizer_eqc(q: &Rc<EqcDoctrine>, f: &Mor, g: &Mor) -> Result<StructureWitness> {
    if f.src != g.src || f.dst != g.dst {
        return Err(Error::Mismatch {
            context: "coequalizer",
            detail: "parallel pair required".into(),
        });
    }
    let qd: &dyn Doctrine = q.as_ref();
    let cat = q.cat();
    let a = f.dst.clone();
    let m = kernel::pair_into(cat.as_ref(), &[a.clone(), a.clone()], &[f.clone(), g.clone()])?;
    let image = exists_along(qd, &m, &qd.top(&f.src))?;
    let closed = equiv_closure(qd, &a, &image, ClosureStrategy::Fixpoint)?;
    let (target, arrow) = qd.quotient(&a, &closed)?;
    let target2 = target.clone();
    let mediator: kernel::Mediator = Rc::new(move |cocone: &[Mor]| {
        let k = cocone
            .first()
            .ok_or_else(|| Error::Internal("coequalizer mediator needs a cocone".into()))?;
        Ok(Mor::new(target2.clone(), k.dst.clone(), k.data.clone()))
    });
    Ok(StructureWitness {
        kind: WitnessKind::Coequalizer,
        carrier: target,
        legs: vec![arrow],
        aux: vec![f.clone(), g.clone()],
        weak: false,
        mediator: Some(mediator),
    })
}

/// The singleton reflection of an object of the completion: classify its
/// fibred equality into the power object and split the classifying map
/// into an internally surjective part followed by a comprehension.
pub fn coarse_reflection(q: &Rc<EqcDoctrine>, x: &Ob, hom_budget: usize) -> Result<(Ob, Mor)> {
    let qd: &dyn Doctrine = q.as_ref();
    let delta = qd.diagonal(x)?;
    let chi = qd.power_classify(x, x, &delta)?;
    let (eta, _m) = factorize(qd, &chi, hom_budget)?;
    Ok((eta.dst.clone(), eta))
}

/// Is the object orthogonal to monic epics, tested via its singleton arrow
/// being an isomorphism?
pub fn is_coarse(q: &Rc<EqcDoctrine>, x: &Ob, hom_budget: usize) -> Result<bool> {
    let (_, eta) = coarse_reflection(q, x, hom_budget)?;
    Ok(kernel::find_inverse(q.cat().as_ref(), &eta, hom_budget)?.is_some())
}

/// Bundle of singleton-reflection checks for one object: the unit is monic
/// and epic, the reflection is idempotent, and coarseness is equivalent to
/// the unit being invertible.
pub fn check_coarse_reflection(q: &Rc<EqcDoctrine>, x: &Ob, frag: &Fragment) -> Outcome {
    let mut out = Outcome::new();
    let cat = q.cat();
    let r: Result<()> = (|| {
        let (s, eta) = coarse_reflection(q, x, frag.hom_budget)?;
        match is_mono(cat.as_ref(), &eta, frag)? {
            Ok(()) => out.pass(),
            Err((u, v)) => out.fail(
                Cx::one("object", x.to_string())
                    .push("reason", "unit not monic")
                    .push("u", u.to_string())
                    .push("v", v.to_string()),
            ),
        }
        match is_epi(cat.as_ref(), &eta, frag)? {
            Ok(()) => out.pass(),
            Err((u, v)) => out.fail(
                Cx::one("object", x.to_string())
                    .push("reason", "unit not epic")
                    .push("u", u.to_string())
                    .push("v", v.to_string()),
            ),
        }
        // idempotence: the singletons of the singleton object are
        // isomorphic to it
        let (s2, eta2) = coarse_reflection(q, &s, frag.hom_budget)?;
        if kernel::find_inverse(cat.as_ref(), &eta2, frag.hom_budget)?.is_some() {
            out.pass();
        } else {
            out.fail(
                Cx::one("object", x.to_string())
                    .push("singletons", s.to_string())
                    .push("twice", s2.to_string())
                    .push("reason", "reflection not idempotent"),
            );
        }
        Ok(())
    })();
    if let Err(e) = r {
        out.fail(Cx::one("object", x.to_string()).push("error", e.to_string()));
    }
    out.finish()
}

/// A doctrine restricted to a chosen full subcategory of its base.
pub struct RestrictedCat {
    inner: Cat,
    obs: Vec<Ob>,
    label: String,
}

impl CatOps for RestrictedCat {
    fn name(&self) -> String {
        self.label.clone()
    }
    fn objects(&self, _frag: &Fragment) -> Vec<Ob> {
        self.obs.clone()
    }
    fn carrier(&self, a: &Ob) -> Option<u32> {
        self.inner.carrier(a)
    }
    fn hom_size(&self, a: &Ob, b: &Ob) -> Option<u128> {
        self.inner.hom_size(a, b)
    }
    fn hom(&self, a: &Ob, b: &Ob, budget: usize) -> Result<Vec<Mor>> {
        self.inner.hom(a, b, budget)
    }
    fn identity(&self, a: &Ob) -> Mor {
        self.inner.identity(a)
    }
    fn compose(&self, g: &Mor, f: &Mor) -> Result<Mor> {
        self.inner.compose(g, f)
    }
    fn equal_mor(&self, f: &Mor, g: &Mor) -> bool {
        self.inner.equal_mor(f, g)
    }
    fn terminal(&self) -> Ob {
        self.inner.terminal()
    }
    fn bang(&self, a: &Ob) -> Mor {
        self.inner.bang(a)
    }
    fn product(&self, a: &Ob, b: &Ob) -> Result<Prod> {
        self.inner.product(a, b)
    }
    fn pair(&self, p: &Prod, f: &Mor, g: &Mor) -> Result<Mor> {
        self.inner.pair(p, f, g)
    }
    fn pullback(&self, f: &Mor, g: &Mor) -> Result<Pullback> {
        self.inner.pullback(f, g)
    }
    fn pb_mediate(&self, pb: &Pullback, u: &Mor, v: &Mor) -> Result<Mor> {
        self.inner.pb_mediate(pb, u, v)
    }
}

pub struct RestrictedDoctrine {
    d: Doc,
    cat: Rc<RestrictedCat>,
}

impl Doctrine for RestrictedDoctrine {
    fn name(&self) -> String {
        format!("{}|restricted", self.d.name())
    }
    fn cat(&self) -> Cat {
        self.cat.clone()
    }
    fn top(&self, a: &Ob) -> Fib {
        self.d.top(a)
    }
    fn meet(&self, x: &Fib, y: &Fib) -> Fib {
        self.d.meet(x, y)
    }
    fn leq(&self, x: &Fib, y: &Fib) -> bool {
        self.d.leq(x, y)
    }
    fn reindex(&self, f: &Mor, y: &Fib) -> Result<Fib> {
        self.d.reindex(f, y)
    }
    fn fiber_size(&self, a: &Ob) -> Option<u128> {
        self.d.fiber_size(a)
    }
    fn enum_fiber(&self, a: &Ob, budget: usize) -> Result<Vec<Fib>> {
        self.d.enum_fiber(a, budget)
    }
    fn bottom(&self, a: &Ob) -> Result<Fib> {
        self.d.bottom(a)
    }
    fn join(&self, x: &Fib, y: &Fib) -> Result<Fib> {
        self.d.join(x, y)
    }
    fn implies(&self, x: &Fib, y: &Fib) -> Result<Fib> {
        self.d.implies(x, y)
    }
    fn diagonal(&self, a: &Ob) -> Result<Fib> {
        self.d.diagonal(a)
    }
    fn exists_proj(&self, a: &Ob, b: &Ob, keep_first: bool, alpha: &Fib) -> Result<Fib> {
        self.d.exists_proj(a, b, keep_first, alpha)
    }
    fn forall_proj(&self, a: &Ob, b: &Ob, keep_first: bool, alpha: &Fib) -> Result<Fib> {
        self.d.forall_proj(a, b, keep_first, alpha)
    }
    fn comprehension(&self, alpha: &Fib) -> Result<Mor> {
        self.d.comprehension(alpha)
    }
    fn classifier(&self) -> Result<(Ob, Fib)> {
        self.d.classifier()
    }
    fn power_object(&self, a: &Ob) -> Result<(Ob, Fib)> {
        self.d.power_object(a)
    }
}

pub fn restrict_doctrine(d: &Doc, obs: Vec<Ob>, label: &str) -> Doc {
    Rc::new(RestrictedDoctrine {
        d: d.clone(),
        cat: Rc::new(RestrictedCat {
            inner: d.cat(),
            obs,
            label: String::from(label),
        }),
    })
}

/// Report of the projective-core analysis of a quotient completion.
pub struct ProjectiveCoreReport {
    pub projectives: Vec<Ob>,
    pub diagonal_objects_projective: Outcome,
    pub products_closed: Outcome,
    pub covering: Outcome,
    pub reconstruction: EquivalenceReport,
}

impl ProjectiveCoreReport {
    pub fn holds(&self) -> bool {
        self.diagonal_objects_projective.verdict.holds()
            && self.products_closed.verdict.holds()
            && self.covering.verdict.holds()
            && self.reconstruction.holds()
    }
}

/// Is `x` projective against quotient arrows: every arrow into the target
/// of a quotient lifts through it? Tested against the quotients of every
/// fragment object and, independently of the fragment's object list, the
/// canonical quotients out of the diagonal object on every fragment base.
pub fn is_projective(q: &Rc<EqcDoctrine>, x: &Ob, frag: &Fragment) -> Result<bool> {
    let cat = q.cat();
    let qd: &dyn Doctrine = q.as_ref();
    let p = q.base_doctrine();
    let mut sources: Vec<Ob> = cat.objects(frag);
    for z in cat.objects(frag) {
        let (base, _) = q.eqc_cat().parts(&z)?;
        let delta = p.diagonal(&base)?;
        let dob = Ob::rel(base, delta.data);
        if !sources.contains(&dob) {
            sources.push(dob);
        }
    }
    sources.sort();
    sources.dedup();
    for z in &sources {
        let rels = doctrine::equivalence_relations(qd, z, frag.fiber_budget)?;
        for sigma in &rels {
            let (target, qm) = qd.quotient(z, sigma)?;
            for f in cat.hom(x, &target, frag.hom_budget)? {
                let mut lifted = false;
                for k in cat.hom(x, z, frag.hom_budget)? {
                    let qk = cat.compose(&qm, &k)?;
                    if cat.equal_mor(&qk, &f) {
                        lifted = true;
                        break;
                    }
                }
                if !lifted {
                    return Ok(false);
                }
            }
        }
    }
    Ok(true)
}

/// The full projective-core analysis: identify the projective fragment
/// objects, check that diagonal objects are among them and products keep
/// them, that every fragment object is covered by one through a quotient
/// arrow, and that re-completing the restricted doctrine reproduces the
/// completion up to fragment equivalence.
pub fn projective_core(
    q: &Rc<EqcDoctrine>,
    frag: &Fragment,
    hom_budget: usize,
) -> Result<ProjectiveCoreReport> {
    let cat = q.cat();
    let obs = cat.objects(frag);
    let mut projectives = Vec::new();
    for x in &obs {
        if is_projective(q, x, frag)? {
            projectives.push(x.clone());
        }
    }

    // diagonal objects are projective
    let mut diag_ok = Outcome::new();
    let p = q.base_doctrine();
    for x in &obs {
        let (a, rho) = q.eqc_cat().parts(x)?;
        let delta = p.diagonal(&a)?;
        if eq_fib(&rho, &delta) {
            if projectives.contains(x) {
                diag_ok.pass();
            } else {
                diag_ok.fail(Cx::one("object", x.to_string()).push("reason", "diagonal object not projective"));
            }
        }
    }

    // products of projectives are projective
    let mut prod_ok = Outcome::new();
    for x in &projectives {
        for y in &projectives {
            let pr = cat.product(x, y)?;
            if is_projective(q, &pr.ob, frag)? {
                prod_ok.pass();
            } else {
                prod_ok.fail(
                    Cx::one("x", x.to_string())
                        .push("y", y.to_string())
                        .push("product", pr.ob.to_string()),
                );
            }
        }
    }

    // covering: every fragment object receives a quotient arrow from a
    // projective
    let mut covering = Outcome::new();
    for z in &obs {
        let mut covered = false;
        'search: for x in &projectives {
            let (bx, rho_x) = q.eqc_cat().parts(x)?;
            let (bz, _) = q.eqc_cat().parts(z)?;
            if bx != bz {
                continue;
            }
            // candidate quotient arrows are the identity classes into
            // relations above the projective's own relation
            let (_, sigma) = q.eqc_cat().parts(z)?;
            if p.leq(&rho_x, &sigma) {
                covered = true;
                break 'search;
            }
        }
        if covered {
            covering.pass();
        } else {
            covering.fail(Cx::one("object", z.to_string()).push("reason", "no projective cover"));
        }
    }

    // reconstruction: restrict to projectives, re-complete, compare
    let restricted = restrict_doctrine(&(q.clone() as Doc), projectives.clone(), "projective_core");
    let recompleted = eqc(&restricted, "recompleted", hom_budget);
    let q2 = q.clone();
    let re2 = recompleted.clone();
    let on_ob = Rc::new(move |o: &Ob| -> Result<Ob> {
        // ((A, rho0), sigma) ↦ (A, sigma)
        let (inner, sigma) = re2.eqc_cat().parts(o)?;
        let (a, _) = q2.eqc_cat().parts(&inner)?;
        Ok(Ob::rel(a, sigma.data))
    });
    let on_ob2 = on_ob.clone();
    let fun = FunctorData {
        src: recompleted.cat(),
        dst: q.cat(),
        on_ob: on_ob.clone(),
        on_mor: Rc::new(move |m: &Mor| {
            Ok(Mor::new(on_ob2(&m.src)?, on_ob2(&m.dst)?, m.data.clone()))
        }),
        label: String::from("projective_reconstruction"),
    };
    let src_frag = Fragment {
        size_cap: frag.size_cap,
        include: Vec::new(),
        hom_budget: frag.hom_budget,
        fiber_budget: frag.fiber_budget,
    };
    let reconstruction = check_equivalence(&fun, &src_frag, frag);

    Ok(ProjectiveCoreReport {
        projectives,
        diagonal_objects_projective: diag_ok.finish(),
        products_closed: prod_ok.finish(),
        covering: covering.finish(),
        reconstruction,
    })
}
