//! The comprehension completion: objects are pairs of a base object and a
//! predicate over it, arrows are base arrows carrying the source predicate
//! into the target one, and the fibre over a pair is the downset of its
//! predicate. The result has full strong comprehension given by identity
//! carriers.

use crate::doctrine::{exists_along, forall_along, Doc, Doctrine, Fib};
use crate::error::{Error, Result};
use crate::kernel::{self, Cat, CatOps, Coprod, Fragment, Mor, Ob, Prod, Pullback, SliceExp};
use alloc::format;
use alloc::rc::Rc;
use alloc::string::String;
use alloc::vec::Vec;

pub struct ComprCat {
    p: Doc,
    label: String,
}

impl ComprCat {
    fn base(&self) -> Cat {
        self.p.cat()
    }

    pub fn parts(&self, x: &Ob) -> Result<(Ob, Fib)> {
        match x {
            Ob::Pred(a, v) => Ok(((**a).clone(), Fib::new((**a).clone(), v.clone()))),
            other => Err(Error::Mismatch {
                context: "comprehension completion",
                detail: format!("foreign object {other}"),
            }),
        }
    }

    pub fn base_mor(&self, m: &Mor) -> Result<Mor> {
        let (a, _) = self.parts(&m.src)?;
        let (b, _) = self.parts(&m.dst)?;
        Ok(Mor::new(a, b, m.data.clone()))
    }

    fn lift(&self, src: &Ob, dst: &Ob, base: &Mor) -> Mor {
        Mor::new(src.clone(), dst.clone(), base.data.clone())
    }
}

impl CatOps for ComprCat {
    fn name(&self) -> String {
        self.label.clone()
    }

    fn objects(&self, frag: &Fragment) -> Vec<Ob> {
        let base_frag = Fragment {
            size_cap: frag.size_cap,
            include: Vec::new(),
            hom_budget: frag.hom_budget,
            fiber_budget: frag.fiber_budget,
        };
        let mut out = Vec::new();
        for a in self.base().objects(&base_frag) {
            let Ok(preds) = self.p.enum_fiber(&a, frag.fiber_budget) else {
                continue;
            };
            for alpha in preds {
                out.push(Ob::pred(a.clone(), alpha.data));
            }
        }
        for o in &frag.include {
            if !out.contains(o) {
                out.push(o.clone());
            }
        }
        out.sort();
        out.dedup();
        out
    }

    fn carrier(&self, a: &Ob) -> Option<u32> {
        match a {
            Ob::Pred(base, _) => self.base().carrier(base),
            _ => None,
        }
    }

    fn hom_size(&self, a: &Ob, b: &Ob) -> Option<u128> {
        let (Ob::Pred(ba, _), Ob::Pred(bb, _)) = (a, b) else {
            return None;
        };
        self.base().hom_size(ba, bb)
    }

    fn hom(&self, a: &Ob, b: &Ob, budget: usize) -> Result<Vec<Mor>> {
        let (ba, alpha) = self.parts(a)?;
        let (bb, beta) = self.parts(b)?;
        let mut out = Vec::new();
        for f in self.base().hom(&ba, &bb, budget)? {
            let pulled = self.p.reindex(&f, &beta)?;
            if self.p.leq(&alpha, &pulled) {
                out.push(self.lift(a, b, &f));
            }
        }
        Ok(out)
    }

    fn identity(&self, a: &Ob) -> Mor {
        let (ba, _) = self.parts(a).expect("identity on a completion object");
        let id = self.base().identity(&ba);
        self.lift(a, a, &id)
    }

    fn compose(&self, g: &Mor, f: &Mor) -> Result<Mor> {
        kernel::require_composable("comprehension-completion compose", g, f)?;
        let c = self.base().compose(&self.base_mor(g)?, &self.base_mor(f)?)?;
        Ok(self.lift(&f.src, &g.dst, &c))
    }

    fn terminal(&self) -> Ob {
        let t = self.base().terminal();
        Ob::pred(t.clone(), self.p.top(&t).data)
    }

    fn bang(&self, a: &Ob) -> Mor {
        let (ba, _) = self.parts(a).expect("bang on a completion object");
        let b = self.base().bang(&ba);
        self.lift(a, &self.terminal(), &b)
    }

    fn product(&self, a: &Ob, b: &Ob) -> Result<Prod> {
        let (ba, alpha) = self.parts(a)?;
        let (bb, beta) = self.parts(b)?;
        let p = self.base().product(&ba, &bb)?;
        let pred = self
            .p
            .meet(&self.p.reindex(&p.pr1, &alpha)?, &self.p.reindex(&p.pr2, &beta)?);
        let ob = Ob::pred(p.ob.clone(), pred.data);
        Ok(Prod {
            pr1: Mor::new(ob.clone(), a.clone(), p.pr1.data),
            pr2: Mor::new(ob.clone(), b.clone(), p.pr2.data),
            ob,
        })
    }

    fn pair(&self, p: &Prod, f: &Mor, g: &Mor) -> Result<Mor> {
        let (ba, _) = self.parts(&p.pr1.dst)?;
        let (bb, _) = self.parts(&p.pr2.dst)?;
        let base_p = self.base().product(&ba, &bb)?;
        let m = self.base().pair(&base_p, &self.base_mor(f)?, &self.base_mor(g)?)?;
        Ok(self.lift(&f.src, &p.ob, &m))
    }

    fn pullback(&self, f: &Mor, g: &Mor) -> Result<Pullback> {
        if f.dst != g.dst {
            return Err(Error::Mismatch {
                context: "comprehension-completion pullback",
                detail: "cospan mismatch".into(),
            });
        }
        let (_, alpha) = self.parts(&f.src)?;
        let (_, beta) = self.parts(&g.src)?;
        let pb = self.base().pullback(&self.base_mor(f)?, &self.base_mor(g)?)?;
        let pred = self.p.meet(
            &self.p.reindex(&pb.to_left, &alpha)?,
            &self.p.reindex(&pb.to_right, &beta)?,
        );
        let ob = Ob::pred(pb.ob.clone(), pred.data);
        Ok(Pullback {
            to_left: Mor::new(ob.clone(), f.src.clone(), pb.to_left.data),
            to_right: Mor::new(ob.clone(), g.src.clone(), pb.to_right.data),
            ob,
            weak: pb.weak,
        })
    }

    fn pb_mediate(&self, pb: &Pullback, u: &Mor, v: &Mor) -> Result<Mor> {
        let (bc, _) = self.parts(&pb.ob)?;
        let bl = self.base_mor(&pb.to_left)?;
        let br = self.base_mor(&pb.to_right)?;
        let base_pb = Pullback {
            ob: bc,
            to_left: bl,
            to_right: br,
            weak: pb.weak,
        };
        let m = self
            .base()
            .pb_mediate(&base_pb, &self.base_mor(u)?, &self.base_mor(v)?)?;
        Ok(self.lift(&u.src, &pb.ob, &m))
    }

    fn initial(&self) -> Option<Ob> {
        let z = self.base().initial()?;
        Some(Ob::pred(z.clone(), self.p.top(&z).data))
    }

    fn coproduct(&self, a: &Ob, b: &Ob) -> Option<Coprod> {
        let (ba, alpha) = self.parts(a).ok()?;
        let (bb, beta) = self.parts(b).ok()?;
        let c = self.base().coproduct(&ba, &bb)?;
        let pred: Result<Fib> = (|| {
            let l = exists_along(self.p.as_ref(), &c.in1, &alpha)?;
            let r = exists_along(self.p.as_ref(), &c.in2, &beta)?;
            self.p.join(&l, &r)
        })();
        let pred = pred.ok()?;
        let ob = Ob::pred(c.ob.clone(), pred.data);
        Some(Coprod {
            in1: Mor::new(a.clone(), ob.clone(), c.in1.data),
            in2: Mor::new(b.clone(), ob.clone(), c.in2.data),
            ob,
        })
    }

    fn copair(&self, c: &Coprod, f: &Mor, g: &Mor) -> Result<Mor> {
        let (ba, _) = self.parts(&c.in1.src)?;
        let (bb, _) = self.parts(&c.in2.src)?;
        let base_c = self
            .base()
            .coproduct(&ba, &bb)
            .ok_or(Error::MissingStructure("coproducts in the base"))?;
        let m = self.base().copair(&base_c, &self.base_mor(f)?, &self.base_mor(g)?)?;
        Ok(self.lift(&c.ob, &f.dst, &m))
    }

    /// Weak slice exponentials, inherited from the base: the carrier is the
    /// base slice exponential weighted by "the anchor holds and the map is
    /// predicate-respecting fibrewise".
    fn slice_weak_exp(&self, f: &Mor, g: &Mor) -> Option<SliceExp> {
        if f.dst != g.dst {
            return None;
        }
        let p = self.p.as_ref();
        let cat = self.base();
        let (_, alpha_a) = self.parts(&f.dst).ok()?;
        let (_, beta) = self.parts(&f.src).ok()?;
        let (_, beta2) = self.parts(&g.src).ok()?;
        let bf = self.base_mor(f).ok()?;
        let bg = self.base_mor(g).ok()?;
        let se = cat.slice_weak_exp(&bf, &bg)?;
        let wpred: Result<Fib> = (|| {
            let anchor = p.reindex(&se.q, &alpha_a)?;
            let body = p.implies(
                &p.reindex(&se.z_to_dom_f, &beta)?,
                &p.reindex(&se.eval, &beta2)?,
            )?;
            let guard = forall_along(p, &se.z_to_w, &body)?;
            Ok(p.meet(&anchor, &guard))
        })();
        let wpred = wpred.ok()?;
        let w_ob = Ob::pred(se.w.clone(), wpred.data.clone());
        let zpred: Result<Fib> = (|| {
            let l = p.reindex(&se.z_to_dom_f, &beta)?;
            let r = p.reindex(&se.z_to_w, &Fib::new(se.w.clone(), wpred.data.clone()))?;
            Ok(p.meet(&l, &r))
        })();
        let zpred = zpred.ok()?;
        let z_ob = Ob::pred(se.z.clone(), zpred.data);
        Some(SliceExp {
            q: Mor::new(w_ob.clone(), f.dst.clone(), se.q.data.clone()),
            z_to_dom_f: Mor::new(z_ob.clone(), f.src.clone(), se.z_to_dom_f.data.clone()),
            z_to_w: Mor::new(z_ob.clone(), w_ob.clone(), se.z_to_w.data.clone()),
            eval: Mor::new(z_ob.clone(), g.src.clone(), se.eval.data.clone()),
            w: w_ob,
            z: z_ob,
        })
    }
}

pub struct ComprehensionCompletion {
    p: Doc,
    cat: Rc<ComprCat>,
    label: String,
}

impl ComprehensionCompletion {
    pub fn base_doctrine(&self) -> &Doc {
        &self.p
    }

    pub fn compr_cat(&self) -> &Rc<ComprCat> {
        &self.cat
    }

    fn base_fib(&self, x: &Fib) -> Result<Fib> {
        let (a, _) = self.cat.parts(&x.ob)?;
        Ok(Fib::new(a, x.data.clone()))
    }

    fn lift_fib(&self, ob: &Ob, x: &Fib) -> Fib {
        Fib::new(ob.clone(), x.data.clone())
    }
}

impl Doctrine for ComprehensionCompletion {
    fn name(&self) -> String {
        self.label.clone()
    }

    fn cat(&self) -> Cat {
        self.cat.clone()
    }

    fn top(&self, a: &Ob) -> Fib {
        let (_, alpha) = self.cat.parts(a).expect("top over a completion object");
        Fib::new(a.clone(), alpha.data)
    }

    fn meet(&self, x: &Fib, y: &Fib) -> Fib {
        let m = self.p.meet(
            &self.base_fib(x).expect("meet"),
            &self.base_fib(y).expect("meet"),
        );
        self.lift_fib(&x.ob, &m)
    }

    fn leq(&self, x: &Fib, y: &Fib) -> bool {
        self.p.leq(
            &self.base_fib(x).expect("leq"),
            &self.base_fib(y).expect("leq"),
        )
    }

    fn reindex(&self, f: &Mor, y: &Fib) -> Result<Fib> {
        let (_, alpha) = self.cat.parts(&f.src)?;
        let bf = self.cat.base_mor(f)?;
        let pulled = self.p.reindex(&bf, &self.base_fib(y)?)?;
        Ok(self.lift_fib(&f.src, &self.p.meet(&pulled, &alpha)))
    }

    fn fiber_size(&self, _a: &Ob) -> Option<u128> {
        None
    }

    fn enum_fiber(&self, a: &Ob, budget: usize) -> Result<Vec<Fib>> {
        let (ba, alpha) = self.cat.parts(a)?;
        let mut out = Vec::new();
        for x in self.p.enum_fiber(&ba, budget)? {
            if self.p.leq(&x, &alpha) {
                out.push(self.lift_fib(a, &x));
            }
        }
        Ok(out)
    }

    fn bottom(&self, a: &Ob) -> Result<Fib> {
        let (ba, _) = self.cat.parts(a)?;
        Ok(self.lift_fib(a, &self.p.bottom(&ba)?))
    }

    fn join(&self, x: &Fib, y: &Fib) -> Result<Fib> {
        let j = self.p.join(&self.base_fib(x)?, &self.base_fib(y)?)?;
        Ok(self.lift_fib(&x.ob, &j))
    }

    fn implies(&self, x: &Fib, y: &Fib) -> Result<Fib> {
        let (_, alpha) = self.cat.parts(&x.ob)?;
        let i = self.p.implies(&self.base_fib(x)?, &self.base_fib(y)?)?;
        Ok(self.lift_fib(&x.ob, &self.p.meet(&i, &alpha)))
    }

    fn diagonal(&self, a: &Ob) -> Result<Fib> {
        let (ba, _) = self.cat.parts(a)?;
        let d = self.p.diagonal(&ba)?;
        let sq = self.cat.product(a, a)?;
        let (_, square_top) = self.cat.parts(&sq.ob)?;
        let meet = self.p.meet(&d, &square_top);
        Ok(Fib::new(sq.ob, meet.data))
    }

    fn exists_proj(&self, a: &Ob, b: &Ob, keep_first: bool, alpha: &Fib) -> Result<Fib> {
        let (ba, _) = self.cat.parts(a)?;
        let (bb, _) = self.cat.parts(b)?;
        let prod = self.cat.product(a, b)?;
        if alpha.ob != prod.ob {
            return Err(Error::Mismatch {
                context: "completion exists",
                detail: format!("element over {}, product is {}", alpha.ob, prod.ob),
            });
        }
        let (bp, _) = self.cat.parts(&prod.ob)?;
        let raw = self
            .p
            .exists_proj(&ba, &bb, keep_first, &Fib::new(bp, alpha.data.clone()))?;
        Ok(self.lift_fib(if keep_first { a } else { b }, &raw))
    }

    fn forall_proj(&self, a: &Ob, b: &Ob, keep_first: bool, alpha: &Fib) -> Result<Fib> {
        let (ba, _) = self.cat.parts(a)?;
        let (bb, _) = self.cat.parts(b)?;
        let prod = self.cat.product(a, b)?;
        if alpha.ob != prod.ob {
            return Err(Error::Mismatch {
                context: "completion forall",
                detail: format!("element over {}, product is {}", alpha.ob, prod.ob),
            });
        }
        let (bp, square_top) = self.cat.parts(&prod.ob)?;
        let kept = if keep_first { a } else { b };
        let (_, kept_top) = self.cat.parts(kept)?;
        let body = self
            .p
            .implies(&square_top, &Fib::new(bp, alpha.data.clone()))?;
        let raw = self.p.forall_proj(&ba, &bb, keep_first, &body)?;
        Ok(self.lift_fib(kept, &self.p.meet(&raw, &kept_top)))
    }

    fn comprehension(&self, alpha: &Fib) -> Result<Mor> {
        let (ba, _) = self.cat.parts(&alpha.ob)?;
        let src = Ob::pred(ba.clone(), alpha.data.clone());
        let id = self.p.cat().identity(&ba);
        Ok(Mor::new(src, alpha.ob.clone(), id.data))
    }

    fn classifier(&self) -> Result<(Ob, Fib)> {
        let (omega, member) = self.p.classifier()?;
        let ob = Ob::pred(omega.clone(), self.p.top(&omega).data);
        Ok((ob.clone(), Fib::new(ob, member.data)))
    }

    fn power_classify(&self, a: &Ob, y: &Ob, phi: &Fib) -> Result<Mor> {
        let (ba, _) = self.cat.parts(a)?;
        let (by, _) = self.cat.parts(y)?;
        let prod = self.cat.product(a, y)?;
        if phi.ob != prod.ob {
            return Err(Error::Mismatch {
                context: "power classification",
                detail: format!("relation over {}, expected {}", phi.ob, prod.ob),
            });
        }
        let (bp, _) = self.cat.parts(&prod.ob)?;
        let chi0 = self
            .p
            .power_classify(&ba, &by, &Fib::new(bp, phi.data.clone()))?;
        let (p_ob, _) = self.power_object(a)?;
        Ok(Mor::new(y.clone(), p_ob, chi0.data))
    }

    fn power_object(&self, a: &Ob) -> Result<(Ob, Fib)> {
        let (ba, alpha) = self.cat.parts(a)?;
        let (pa, mem) = self.p.power_object(&ba)?;
        let p_ob = Ob::pred(pa.clone(), self.p.top(&pa).data);
        let prod = self.cat.product(a, &p_ob)?;
        let (bp, _) = self.cat.parts(&prod.ob)?;
        // membership cut down to the completion top
        let base_pr = self.p.cat().product(&ba, &pa)?;
        let guard = self.p.reindex(&base_pr.pr1, &alpha)?;
        let cut = self.p.meet(&mem, &guard);
        let _ = bp;
        Ok((p_ob, Fib::new(prod.ob, cut.data)))
    }
}

/// The comprehension completion, whose base over the pointwise doctrines is
/// the category of weighted sets.
pub fn comprehension_completion(p: &Doc, label: &str) -> Rc<ComprehensionCompletion> {
    let cat = Rc::new(ComprCat {
        p: p.clone(),
        label: format!("{label}.base"),
    });
    Rc::new(ComprehensionCompletion {
        p: p.clone(),
        cat,
        label: String::from(label),
    })
}
