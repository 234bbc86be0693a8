//! The quotient completion of an elementary doctrine, in two flavours:
//! arrows as relational-equality classes of base arrows (canonical
//! representatives chosen least in hom order, equality decided by the
//! relational test, never by representative identity), or plain base
//! arrows (the intensional variant). Objects pair a base object with an
//! internal equivalence relation; fibres are the descent data of the
//! relation; the fibred equality over an object is its own relation, which
//! makes every relation over it an effective quotient along the identity
//! class.

use super::class_reps;
use crate::doctrine::{
    self, exists_along, interior, is_equivalence_relation, preserves_rel, same_mod_rel, saturate,
    Doc, Doctrine, Fib,
};
use crate::error::{Error, Result};
use crate::kernel::{self, Cat, CatOps, Coprod, Fragment, Mor, Ob, Prod, Pullback, SliceExp};
use alloc::format;
use alloc::rc::Rc;
use alloc::string::String;
use alloc::vec::Vec;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum EqcMode {
    /// Arrows are equivalence classes of base arrows.
    Quotient,
    /// Arrows are plain base arrows.
    Intensional,
}

pub struct EqcCat {
    p: Doc,
    mode: EqcMode,
    hom_budget: usize,
    label: String,
}

impl EqcCat {
    fn base(&self) -> Cat {
        self.p.cat()
    }

    pub fn mode(&self) -> EqcMode {
        self.mode
    }

    /// Splits a completion object into its base object and relation.
    pub fn parts(&self, x: &Ob) -> Result<(Ob, Fib)> {
        match x {
            Ob::Rel(a, r) => {
                let sq = self.base().product(a, a)?;
                Ok(((**a).clone(), Fib::new(sq.ob, r.clone())))
            }
            other => Err(Error::Mismatch {
                context: "quotient completion",
                detail: format!("foreign object {other}"),
            }),
        }
    }

    /// The base arrow under a completion arrow.
    pub fn base_mor(&self, m: &Mor) -> Result<Mor> {
        let (a, _) = self.parts(&m.src)?;
        let (b, _) = self.parts(&m.dst)?;
        Ok(Mor::new(a, b, m.data.clone()))
    }

    fn lift_mor(&self, src: &Ob, dst: &Ob, base: &Mor) -> Mor {
        Mor::new(src.clone(), dst.clone(), base.data.clone())
    }

    /// The box product of two relations, over the square of the base
    /// product: first components related by `rho`, second by `sigma`.
    pub fn box_product(&self, a: &Ob, rho: &Fib, b: &Ob, sigma: &Fib) -> Result<Fib> {
        let cat = self.base();
        let ab = cat.product(a, b)?;
        let sq = cat.product(&ab.ob, &ab.ob)?;
        let p1 = cat.compose(&ab.pr1, &sq.pr1)?;
        let p2 = cat.compose(&ab.pr2, &sq.pr1)?;
        let p3 = cat.compose(&ab.pr1, &sq.pr2)?;
        let p4 = cat.compose(&ab.pr2, &sq.pr2)?;
        let m13 = kernel::pair_into(cat.as_ref(), &[a.clone(), a.clone()], &[p1, p3])?;
        let m24 = kernel::pair_into(cat.as_ref(), &[b.clone(), b.clone()], &[p2, p4])?;
        let ra = self.p.reindex(&m13, rho)?;
        let rb = self.p.reindex(&m24, sigma)?;
        Ok(self.p.meet(&ra, &rb))
    }

    /// The slice exponential data built by the comprehension/for-all
    /// formulas; see `slice_weak_exp`.
    pub fn slice_exponential_data(&self, f: &Mor, g: &Mor) -> Result<EqcSliceData> {
        let p = self.p.as_ref();
        let cat = self.base();
        let (aob, rho) = self.parts(&f.dst)?;
        let (_bob, sigma) = self.parts(&f.src)?;
        let (_b2ob, sigma2) = self.parts(&g.src)?;
        let fb = self.base_mor(f)?;
        let gb = self.base_mor(g)?;

        // canonical replacement of an arrow into (A, rho): comprehension of
        // (f × id)* rho, with the two legs down to A and back to the domain
        let legs = |h: &Mor, dom_rel: &Fib| -> Result<(Mor, Mor, Mor, Fib)> {
            let ida = cat.identity(&aob);
            let fx = kernel::prod_mor(cat.as_ref(), h, &ida)?;
            let gamma = p.reindex(&fx.mor, &rho)?;
            let c = p.comprehension(&gamma)?; // X -> dom h × A
            let h_rho = cat.compose(&fx.src.pr2, &c)?; // X -> A
            let h_dom = cat.compose(&fx.src.pr1, &c)?; // X -> dom h
            let rr = {
                let hh = kernel::prod_mor(cat.as_ref(), &h_rho, &h_rho)?;
                let dd = kernel::prod_mor(cat.as_ref(), &h_dom, &h_dom)?;
                let ra = p.reindex(&hh.mor, &rho)?;
                let rb = p.reindex(&dd.mor, dom_rel)?;
                p.meet(&ra, &rb)
            };
            Ok((c, h_rho, h_dom, rr))
        };
        let (_cf, f_rho, f_dom, rr_f) = legs(&fb, &sigma)?;
        let (_cg, g_rho, g_dom, rr_g) = legs(&gb, &sigma2)?;
        let x = f_rho.src.clone();
        let x2 = g_rho.src.clone();

        // base weak exponential of g_rho by f_rho in the slice over A
        let se = cat
            .slice_weak_exp(&f_rho, &g_rho)
            .ok_or(Error::MissingStructure("slice-wise weak exponentials in the base"))?;

        // extensionality predicate over W'
        let xi = {
            let zz = cat.product(&se.z, &se.z)?;
            let triple = cat.product(&zz.ob, &se.w)?;
            let pi1 = cat.compose(&zz.pr1, &triple.pr1)?;
            let pi2 = cat.compose(&zz.pr2, &triple.pr1)?;
            let pi3 = triple.pr2.clone();
            let dw = p.diagonal(&se.w)?;
            let pair_w = |u: &Mor| -> Result<Fib> {
                let tu = cat.compose(&se.z_to_w, u)?;
                let m = kernel::pair_into(
                    cat.as_ref(),
                    &[se.w.clone(), se.w.clone()],
                    &[tu, pi3.clone()],
                )?;
                p.reindex(&m, &dw)
            };
            let xi1 = p.meet(&pair_w(&pi1)?, &pair_w(&pi2)?);
            let through = |leg: &Mor, rel: &Fib, dom: &Ob| -> Result<Fib> {
                let l1 = cat.compose(leg, &pi1)?;
                let l2 = cat.compose(leg, &pi2)?;
                let m = kernel::pair_into(cat.as_ref(), &[dom.clone(), dom.clone()], &[l1, l2])?;
                p.reindex(&m, rel)
            };
            let xf = through(&se.z_to_dom_f, &rr_f, &x)?;
            let xg = through(&se.eval, &rr_g, &x2)?;
            let xi2 = p.implies(&xf, &xg)?;
            let body = p.implies(&xi1, &xi2)?;
            p.forall_proj(&zz.ob, &se.w, false, &body)?
        };

        // W = comprehension of xi, q = q' . {|xi|}
        let cxi = p.comprehension(&xi)?; // W -> W'
        let w = cxi.src.clone();
        let q = cat.compose(&se.q, &cxi)?; // W -> A

        // Z = chosen pullback of q along f_rho, with a mediator into Z'
        let pb = cat.pullback(&f_rho, &q)?;
        let t_x = pb.to_left.clone(); // Z -> X
        let t_w = pb.to_right.clone(); // Z -> W
        let pbz = cat.pullback(&f_rho, &se.q)?;
        if pbz.ob != se.z {
            return Err(Error::Internal(
                "base slice exponential does not use the chosen pullback".into(),
            ));
        }
        let into_w2 = cat.compose(&cxi, &t_w)?;
        let wmap = cat.pb_mediate(&pbz, &t_x, &into_w2)?; // Z -> Z'
        let e = cat.compose(&se.eval, &wmap)?; // Z -> X'

        // theta over W × W
        let theta = {
            let zz = cat.product(&pb.ob, &pb.ob)?;
            let ww = cat.product(&w, &w)?;
            let quad = cat.product(&zz.ob, &ww.ob)?;
            let pi1 = cat.compose(&zz.pr1, &quad.pr1)?;
            let pi2 = cat.compose(&zz.pr2, &quad.pr1)?;
            let pi3 = cat.compose(&ww.pr1, &quad.pr2)?;
            let pi4 = cat.compose(&ww.pr2, &quad.pr2)?;
            let dw = p.diagonal(&w)?;
            let anchored = |z_leg: &Mor, w_leg: &Mor| -> Result<Fib> {
                let tz = cat.compose(&t_w, z_leg)?;
                let m = kernel::pair_into(
                    cat.as_ref(),
                    &[w.clone(), w.clone()],
                    &[tz, w_leg.clone()],
                )?;
                p.reindex(&m, &dw)
            };
            let th1 = p.meet(&anchored(&pi1, &pi3)?, &anchored(&pi2, &pi4)?);
            let through = |leg: &Mor, rel: &Fib, dom: &Ob| -> Result<Fib> {
                let l1 = cat.compose(leg, &pi1)?;
                let l2 = cat.compose(leg, &pi2)?;
                let m = kernel::pair_into(cat.as_ref(), &[dom.clone(), dom.clone()], &[l1, l2])?;
                p.reindex(&m, rel)
            };
            let tf = through(&t_x, &rr_f, &x)?;
            let tg = through(&e, &rr_g, &x2)?;
            let th2 = p.implies(&tf, &tg)?;
            let body = p.implies(&th1, &th2)?;
            let ext = p.forall_proj(&zz.ob, &ww.ob, false, &body)?;
            let qq = kernel::prod_mor(cat.as_ref(), &q, &q)?;
            let anchor = p.reindex(&qq.mor, &rho)?;
            p.meet(&anchor, &ext)
        };

        Ok(EqcSliceData {
            f_rho,
            f_dom,
            rr_f,
            g_rho,
            g_dom,
            rr_g,
            xi,
            w,
            q,
            z: pb.ob,
            t_x,
            t_w,
            e,
            theta,
        })
    }
}

/// The raw base-level data of a slice exponential in the completion: the
/// canonical legs of both slice arrows, the extensionality predicate, the
/// carrier, anchor and evaluation maps, and the exponential relation.
#[derive(Debug, Clone)]
pub struct EqcSliceData {
    pub f_rho: Mor,
    pub f_dom: Mor,
    pub rr_f: Fib,
    pub g_rho: Mor,
    pub g_dom: Mor,
    pub rr_g: Fib,
    pub xi: Fib,
    pub w: Ob,
    pub q: Mor,
    pub z: Ob,
    pub t_x: Mor,
    pub t_w: Mor,
    pub e: Mor,
    pub theta: Fib,
}

impl CatOps for EqcCat {
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
            let Ok(rels) = doctrine::equivalence_relations(self.p.as_ref(), &a, frag.fiber_budget)
            else {
                continue;
            };
            for r in rels {
                out.push(Ob::rel(a.clone(), r.data));
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
            Ob::Rel(base, _) => self.base().carrier(base),
            _ => None,
        }
    }

    fn hom_size(&self, a: &Ob, b: &Ob) -> Option<u128> {
        let (Ob::Rel(ba, _), Ob::Rel(bb, _)) = (a, b) else {
            return None;
        };
        self.base().hom_size(ba, bb)
    }

    fn hom(&self, a: &Ob, b: &Ob, budget: usize) -> Result<Vec<Mor>> {
        let (ba, rho) = self.parts(a)?;
        let (bb, sigma) = self.parts(b)?;
        let reps = match self.mode {
            EqcMode::Quotient => {
                class_reps(self.p.as_ref(), &ba, &bb, Some(&rho), &sigma, budget)?
            }
            EqcMode::Intensional => {
                let mut out = Vec::new();
                for f in self.base().hom(&ba, &bb, budget)? {
                    if preserves_rel(self.p.as_ref(), &rho, &sigma, &f)? {
                        out.push(f);
                    }
                }
                out
            }
        };
        Ok(reps.iter().map(|f| self.lift_mor(a, b, f)).collect())
    }

    fn identity(&self, a: &Ob) -> Mor {
        let (ba, _) = self.parts(a).expect("identity on a completion object");
        let id = self.base().identity(&ba);
        self.lift_mor(a, a, &id)
    }

    fn compose(&self, g: &Mor, f: &Mor) -> Result<Mor> {
        kernel::require_composable("quotient-completion compose", g, f)?;
        let bg = self.base_mor(g)?;
        let bf = self.base_mor(f)?;
        let c = self.base().compose(&bg, &bf)?;
        Ok(self.lift_mor(&f.src, &g.dst, &c))
    }

    fn equal_mor(&self, f: &Mor, g: &Mor) -> bool {
        if f.src != g.src || f.dst != g.dst {
            return false;
        }
        match self.mode {
            EqcMode::Intensional => f.data == g.data,
            EqcMode::Quotient => {
                let Ok((_, sigma)) = self.parts(&f.dst) else {
                    return false;
                };
                let (Ok(bf), Ok(bg)) = (self.base_mor(f), self.base_mor(g)) else {
                    return false;
                };
                same_mod_rel(self.p.as_ref(), &sigma, &bf, &bg).unwrap_or(false)
            }
        }
    }

    fn terminal(&self) -> Ob {
        let t = self.base().terminal();
        let sq = self.base().product(&t, &t).expect("terminal square");
        Ob::rel(t, self.p.top(&sq.ob).data)
    }

    fn bang(&self, a: &Ob) -> Mor {
        let (ba, _) = self.parts(a).expect("bang on a completion object");
        let b = self.base().bang(&ba);
        self.lift_mor(a, &self.terminal(), &b)
    }

    fn product(&self, a: &Ob, b: &Ob) -> Result<Prod> {
        let (ba, rho) = self.parts(a)?;
        let (bb, sigma) = self.parts(b)?;
        let boxed = self.box_product(&ba, &rho, &bb, &sigma)?;
        let base_p = self.base().product(&ba, &bb)?;
        let ob = Ob::rel(base_p.ob.clone(), boxed.data);
        Ok(Prod {
            pr1: Mor::new(ob.clone(), a.clone(), base_p.pr1.data),
            pr2: Mor::new(ob.clone(), b.clone(), base_p.pr2.data),
            ob,
        })
    }

    fn pair(&self, p: &Prod, f: &Mor, g: &Mor) -> Result<Mor> {
        let bf = self.base_mor(f)?;
        let bg = self.base_mor(g)?;
        let (pb_ob, _) = self.parts(&p.ob)?;
        let (ba, _) = self.parts(&p.pr1.dst)?;
        let (bb, _) = self.parts(&p.pr2.dst)?;
        let base_p = self.base().product(&ba, &bb)?;
        if base_p.ob != pb_ob {
            return Err(Error::Mismatch {
                context: "quotient-completion pair",
                detail: "product carrier mismatch".into(),
            });
        }
        let m = self.base().pair(&base_p, &bf, &bg)?;
        Ok(self.lift_mor(&f.src, &p.ob, &m))
    }

    /// Chosen pullback: the comprehension of the equality of the two
    /// composites inside the product, with the restricted box relation.
    fn pullback(&self, f: &Mor, g: &Mor) -> Result<Pullback> {
        if f.dst != g.dst {
            return Err(Error::Mismatch {
                context: "quotient-completion pullback",
                detail: "cospan mismatch".into(),
            });
        }
        let cat = self.base();
        let (zb, zeta) = self.parts(&f.dst)?;
        let (xb, _) = self.parts(&f.src)?;
        let (yb, _) = self.parts(&g.src)?;
        let prod = self.product(&f.src, &g.src)?;
        let (pb_ob, prod_rel) = self.parts(&prod.ob)?;
        let bf = self.base_mor(f)?;
        let bg = self.base_mor(g)?;
        let bpr = cat.product(&xb, &yb)?;
        if bpr.ob != pb_ob {
            return Err(Error::Internal("product carrier mismatch in pullback".into()));
        }
        let fp1 = cat.compose(&bf, &bpr.pr1)?;
        let gp2 = cat.compose(&bg, &bpr.pr2)?;
        let m = kernel::pair_into(cat.as_ref(), &[zb.clone(), zb.clone()], &[fp1, gp2])?;
        let gamma = self.p.reindex(&m, &zeta)?;
        let c = self.p.comprehension(&gamma)?; // C -> X × Y in the base
        let cc = kernel::prod_mor(cat.as_ref(), &c, &c)?;
        let restricted = self.p.reindex(&cc.mor, &prod_rel)?;
        let carrier = Ob::rel(c.src.clone(), restricted.data);
        let l = cat.compose(&bpr.pr1, &c)?;
        let r = cat.compose(&bpr.pr2, &c)?;
        Ok(Pullback {
            to_left: Mor::new(carrier.clone(), f.src.clone(), l.data),
            to_right: Mor::new(carrier.clone(), g.src.clone(), r.data),
            ob: carrier,
            weak: false,
        })
    }

    fn pb_mediate(&self, pb: &Pullback, u: &Mor, v: &Mor) -> Result<Mor> {
        // search for a base mediator through the comprehension carrier
        let (cb, _) = self.parts(&pb.ob)?;
        let (ub, _) = self.parts(&u.src)?;
        let lb = self.base_mor(&pb.to_left)?;
        let rb = self.base_mor(&pb.to_right)?;
        let bu = self.base_mor(u)?;
        let bv = self.base_mor(v)?;
        for k in self.base().hom(&ub, &cb, self.hom_budget)? {
            let l = self.base().compose(&lb, &k)?;
            let r = self.base().compose(&rb, &k)?;
            // the class test, not raw equality
            let (_, ru) = self.parts(&u.dst)?;
            let (_, rv) = self.parts(&v.dst)?;
            if same_mod_rel(self.p.as_ref(), &ru, &l, &bu)?
                && same_mod_rel(self.p.as_ref(), &rv, &r, &bv)?
            {
                return Ok(self.lift_mor(&u.src, &pb.ob, &k));
            }
        }
        Err(Error::Internal("no mediator into the chosen pullback".into()))
    }

    fn initial(&self) -> Option<Ob> {
        let z = self.base().initial()?;
        let sq = self.base().product(&z, &z).ok()?;
        Some(Ob::rel(z, self.p.top(&sq.ob).data))
    }

    fn coproduct(&self, a: &Ob, b: &Ob) -> Option<Coprod> {
        let (ba, rho) = self.parts(a).ok()?;
        let (bb, sigma) = self.parts(b).ok()?;
        let base_c = self.base().coproduct(&ba, &bb)?;
        // the relation on the sum: joins of the direct images of both parts
        let boxed: Result<Fib> = (|| {
            let i1 = kernel::prod_mor(self.base().as_ref(), &base_c.in1, &base_c.in1)?;
            let i2 = kernel::prod_mor(self.base().as_ref(), &base_c.in2, &base_c.in2)?;
            let l = exists_along(self.p.as_ref(), &i1.mor, &rho)?;
            let r = exists_along(self.p.as_ref(), &i2.mor, &sigma)?;
            self.p.join(&l, &r)
        })();
        let boxed = boxed.ok()?;
        let ob = Ob::rel(base_c.ob.clone(), boxed.data);
        Some(Coprod {
            in1: Mor::new(a.clone(), ob.clone(), base_c.in1.data),
            in2: Mor::new(b.clone(), ob.clone(), base_c.in2.data),
            ob,
        })
    }

    fn copair(&self, c: &Coprod, f: &Mor, g: &Mor) -> Result<Mor> {
        let (bc, _) = self.parts(&c.ob)?;
        let (ba, _) = self.parts(&c.in1.src)?;
        let (bb, _) = self.parts(&c.in2.src)?;
        let base_c = self
            .base()
            .coproduct(&ba, &bb)
            .ok_or(Error::MissingStructure("coproducts in the base"))?;
        if base_c.ob != bc {
            return Err(Error::Internal("coproduct carrier mismatch".into()));
        }
        let m = self.base().copair(&base_c, &self.base_mor(f)?, &self.base_mor(g)?)?;
        Ok(self.lift_mor(&c.ob, &f.dst, &m))
    }

    fn slice_weak_exp(&self, f: &Mor, g: &Mor) -> Option<SliceExp> {
        let data = self.slice_exponential_data(f, g).ok()?;
        let (_, sigma) = self.parts(&f.src).ok()?;
        let (_, sigma2) = self.parts(&g.src).ok()?;
        let cat = self.base();
        // carrier relations
        let zeta = (|| -> Result<Fib> {
            let tt = kernel::prod_mor(cat.as_ref(), &data.t_x, &data.t_x)?;
            let ww = kernel::prod_mor(cat.as_ref(), &data.t_w, &data.t_w)?;
            let l = self.p.reindex(&tt.mor, &data.rr_f)?;
            let r = self.p.reindex(&ww.mor, &data.theta)?;
            Ok(self.p.meet(&l, &r))
        })()
        .ok()?;
        let w_ob = Ob::rel(data.w.clone(), data.theta.data.clone());
        let z_ob = Ob::rel(data.z.clone(), zeta.data);
        // transport the legs back to the original slice arrows
        let to_dom_f = cat.compose(&data.f_dom, &data.t_x).ok()?;
        let eval0 = cat.compose(&data.g_dom, &data.e).ok()?;
        // sanity: both must be legitimate completion arrows
        let (_, zrel) = self.parts(&z_ob).ok()?;
        if !preserves_rel(self.p.as_ref(), &zrel, &sigma, &to_dom_f).unwrap_or(false)
            || !preserves_rel(self.p.as_ref(), &zrel, &sigma2, &eval0).unwrap_or(false)
        {
            return None;
        }
        Some(SliceExp {
            q: Mor::new(w_ob.clone(), f.dst.clone(), data.q.data.clone()),
            z_to_dom_f: Mor::new(z_ob.clone(), f.src.clone(), to_dom_f.data),
            z_to_w: Mor::new(z_ob.clone(), w_ob.clone(), data.t_w.data.clone()),
            eval: Mor::new(z_ob.clone(), g.src.clone(), eval0.data),
            w: w_ob,
            z: z_ob,
        })
    }
}

pub struct EqcDoctrine {
    p: Doc,
    cat: Rc<EqcCat>,
    label: String,
}

impl EqcDoctrine {
    pub fn base_doctrine(&self) -> &Doc {
        &self.p
    }

    pub fn eqc_cat(&self) -> &Rc<EqcCat> {
        &self.cat
    }

    /// Base-level view of a fibre element over a completion object.
    pub fn base_fib(&self, x: &Fib) -> Result<Fib> {
        let (a, _) = self.cat.parts(&x.ob)?;
        Ok(Fib::new(a, x.data.clone()))
    }

    fn lift_fib(&self, ob: &Ob, x: &Fib) -> Fib {
        Fib::new(ob.clone(), x.data.clone())
    }
}

impl Doctrine for EqcDoctrine {
    fn name(&self) -> String {
        self.label.clone()
    }

    fn cat(&self) -> Cat {
        self.cat.clone()
    }

    fn top(&self, a: &Ob) -> Fib {
        let (ba, _) = self.cat.parts(a).expect("top over a completion object");
        self.lift_fib(a, &self.p.top(&ba))
    }

    fn meet(&self, x: &Fib, y: &Fib) -> Fib {
        let bx = self.base_fib(x).expect("meet over a completion object");
        let by = self.base_fib(y).expect("meet over a completion object");
        self.lift_fib(&x.ob, &self.p.meet(&bx, &by))
    }

    fn leq(&self, x: &Fib, y: &Fib) -> bool {
        let bx = self.base_fib(x).expect("leq over a completion object");
        let by = self.base_fib(y).expect("leq over a completion object");
        self.p.leq(&bx, &by)
    }

    fn reindex(&self, f: &Mor, y: &Fib) -> Result<Fib> {
        let bf = self.cat.base_mor(f)?;
        let by = self.base_fib(y)?;
        let r = self.p.reindex(&bf, &by)?;
        Ok(self.lift_fib(&f.src, &r))
    }

    fn fiber_size(&self, _a: &Ob) -> Option<u128> {
        None
    }

    fn enum_fiber(&self, a: &Ob, budget: usize) -> Result<Vec<Fib>> {
        let (ba, rho) = self.cat.parts(a)?;
        let mut out = Vec::new();
        for x in self.p.enum_fiber(&ba, budget)? {
            if doctrine::is_descent_datum(self.p.as_ref(), &ba, &rho, &x)? {
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
        // Heyting implication relativized to descent data: the interior of
        // the base implication
        let (ba, rho) = match &x.ob {
            Ob::Rel(_, _) => self.cat.parts(&x.ob)?,
            other => {
                return Err(Error::Mismatch {
                    context: "completion implication",
                    detail: format!("foreign object {other}"),
                })
            }
        };
        let raw = self.p.implies(&self.base_fib(x)?, &self.base_fib(y)?)?;
        let int = interior(self.p.as_ref(), &ba, &rho, &raw)?;
        Ok(self.lift_fib(&x.ob, &int))
    }

    fn diagonal(&self, a: &Ob) -> Result<Fib> {
        let (_, rho) = self.cat.parts(a)?;
        let sq = self.cat.product(a, a)?;
        Ok(Fib::new(sq.ob, rho.data))
    }

    fn exists_proj(&self, a: &Ob, b: &Ob, keep_first: bool, alpha: &Fib) -> Result<Fib> {
        let (ba, rho) = self.cat.parts(a)?;
        let (bb, sigma) = self.cat.parts(b)?;
        let balpha = {
            let prod = self.cat.product(a, b)?;
            if alpha.ob != prod.ob {
                return Err(Error::Mismatch {
                    context: "completion exists",
                    detail: format!("element over {}, product is {}", alpha.ob, prod.ob),
                });
            }
            let (bp, _) = self.cat.parts(&prod.ob)?;
            Fib::new(bp, alpha.data.clone())
        };
        let raw = self.p.exists_proj(&ba, &bb, keep_first, &balpha)?;
        let (kept_ob, kept_rel, kept) = if keep_first {
            (a, rho, ba)
        } else {
            (b, sigma, bb)
        };
        let sat = saturate(self.p.as_ref(), &kept, &kept_rel, &raw)?;
        Ok(self.lift_fib(kept_ob, &sat))
    }

    fn forall_proj(&self, a: &Ob, b: &Ob, keep_first: bool, alpha: &Fib) -> Result<Fib> {
        let (ba, rho) = self.cat.parts(a)?;
        let (bb, sigma) = self.cat.parts(b)?;
        let balpha = {
            let prod = self.cat.product(a, b)?;
            if alpha.ob != prod.ob {
                return Err(Error::Mismatch {
                    context: "completion forall",
                    detail: format!("element over {}, product is {}", alpha.ob, prod.ob),
                });
            }
            let (bp, _) = self.cat.parts(&prod.ob)?;
            Fib::new(bp, alpha.data.clone())
        };
        let raw = self.p.forall_proj(&ba, &bb, keep_first, &balpha)?;
        let (kept_ob, kept_rel, kept) = if keep_first {
            (a, rho, ba)
        } else {
            (b, sigma, bb)
        };
        let int = interior(self.p.as_ref(), &kept, &kept_rel, &raw)?;
        Ok(self.lift_fib(kept_ob, &int))
    }

    fn comprehension(&self, alpha: &Fib) -> Result<Mor> {
        let (ba, rho) = self.cat.parts(&alpha.ob)?;
        let _ = ba;
        let balpha = self.base_fib(alpha)?;
        let m = self.p.comprehension(&balpha)?;
        let mm = kernel::prod_mor(self.p.cat().as_ref(), &m, &m)?;
        let restricted = self.p.reindex(&mm.mor, &rho)?;
        let src = Ob::rel(m.src.clone(), restricted.data);
        Ok(Mor::new(src, alpha.ob.clone(), m.data))
    }

    fn classifier(&self) -> Result<(Ob, Fib)> {
        let (omega, member) = self.p.classifier()?;
        let cat = self.p.cat();
        let sq = cat.product(&omega, &omega)?;
        let m1 = self.p.reindex(&sq.pr1, &member)?;
        let m2 = self.p.reindex(&sq.pr2, &member)?;
        let lambda = self
            .p
            .meet(&self.p.implies(&m1, &m2)?, &self.p.implies(&m2, &m1)?);
        let ob = Ob::rel(omega, lambda.data);
        Ok((ob.clone(), Fib::new(ob, member.data)))
    }

    fn power_object(&self, a: &Ob) -> Result<(Ob, Fib)> {
        let (ba, rho) = self.cat.parts(a)?;
        let (pa, mem) = self.p.power_object(&ba)?;
        // closure membership: a ∈' U iff ∃ a'. rho(a, a') ∧ a' ∈ U
        let cl = doctrine::rel_compose(self.p.as_ref(), &ba, &ba, &pa, &rho, &mem)?;
        // theta(U, V): ∀ a. (a ∈' U ⇔ a ∈' V)
        let cat = self.p.cat();
        let pp = cat.product(&pa, &pa)?;
        let tri = cat.product(&pp.ob, &ba)?;
        let pu = cat.compose(&pp.pr1, &tri.pr1)?;
        let pv = cat.compose(&pp.pr2, &tri.pr1)?;
        let pa_ = tri.pr2.clone();
        let reix = |u: &Mor| -> Result<Fib> {
            let m = kernel::pair_into(
                cat.as_ref(),
                &[ba.clone(), pa.clone()],
                &[pa_.clone(), u.clone()],
            )?;
            self.p.reindex(&m, &cl)
        };
        let cu = reix(&pu)?;
        let cv = reix(&pv)?;
        let iff = self
            .p
            .meet(&self.p.implies(&cu, &cv)?, &self.p.implies(&cv, &cu)?);
        let theta = self.p.forall_proj(&pp.ob, &ba, true, &iff)?;
        let p_ob = Ob::rel(pa.clone(), theta.data);
        let prod_q = self.cat.product(a, &p_ob)?;
        Ok((p_ob, Fib::new(prod_q.ob, cl.data)))
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

    fn quotient(&self, a: &Ob, rel: &Fib) -> Result<(Ob, Mor)> {
        let (ba, _) = self.cat.parts(a)?;
        if !is_equivalence_relation(self, a, rel)? {
            return Err(Error::Mismatch {
                context: "quotient",
                detail: "not an internal equivalence relation".into(),
            });
        }
        let target = Ob::rel(ba.clone(), rel.data.clone());
        let id = self.p.cat().identity(&ba);
        Ok((target.clone(), Mor::new(a.clone(), target, id.data)))
    }

    fn has_quotients(&self) -> bool {
        true
    }
}

/// The quotient completion: free addition of stable effective-descent
/// quotients.
pub fn eqc(p: &Doc, label: &str, hom_budget: usize) -> Rc<EqcDoctrine> {
    build(p, label, hom_budget, EqcMode::Quotient)
}

/// The intensional variant: same objects, plain base arrows.
pub fn intensional_qc(p: &Doc, label: &str, hom_budget: usize) -> Rc<EqcDoctrine> {
    build(p, label, hom_budget, EqcMode::Intensional)
}

fn build(p: &Doc, label: &str, hom_budget: usize, mode: EqcMode) -> Rc<EqcDoctrine> {
    let cat = Rc::new(EqcCat {
        p: p.clone(),
        mode,
        hom_budget,
        label: format!("{label}.base"),
    });
    Rc::new(EqcDoctrine {
        p: p.clone(),
        cat,
        label: String::from(label),
    })
}
