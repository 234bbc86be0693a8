//! The extensional collapse: same objects, arrows quotiented by the
//! relational equality against the fibred equality of the target. The
//! result detects arrow equality through the fibres.

use super::class_reps;
use crate::doctrine::{same_mod_rel, Doc, Doctrine, Fib};
use crate::error::Result;
use crate::kernel::{Cat, CatOps, Coprod, Fragment, Mor, Ob, Prod, Pullback};
use alloc::format;
use alloc::rc::Rc;
use alloc::string::String;
use alloc::vec::Vec;

pub struct CollapseCat {
    p: Doc,
    label: String,
}

impl CatOps for CollapseCat {
    fn name(&self) -> String {
        self.label.clone()
    }

    fn objects(&self, frag: &Fragment) -> Vec<Ob> {
        self.p.cat().objects(frag)
    }

    fn carrier(&self, a: &Ob) -> Option<u32> {
        self.p.cat().carrier(a)
    }

    fn hom_size(&self, a: &Ob, b: &Ob) -> Option<u128> {
        self.p.cat().hom_size(a, b)
    }

    fn hom(&self, a: &Ob, b: &Ob, budget: usize) -> Result<Vec<Mor>> {
        let delta = self.p.diagonal(b)?;
        class_reps(self.p.as_ref(), a, b, None, &delta, budget)
    }

    fn identity(&self, a: &Ob) -> Mor {
        self.p.cat().identity(a)
    }

    fn compose(&self, g: &Mor, f: &Mor) -> Result<Mor> {
        self.p.cat().compose(g, f)
    }

    fn equal_mor(&self, f: &Mor, g: &Mor) -> bool {
        if f.src != g.src || f.dst != g.dst {
            return false;
        }
        match self.p.diagonal(&f.dst) {
            Ok(delta) => same_mod_rel(self.p.as_ref(), &delta, f, g).unwrap_or(false),
            Err(_) => f == g,
        }
    }

    fn terminal(&self) -> Ob {
        self.p.cat().terminal()
    }

    fn bang(&self, a: &Ob) -> Mor {
        self.p.cat().bang(a)
    }

    fn product(&self, a: &Ob, b: &Ob) -> Result<Prod> {
        self.p.cat().product(a, b)
    }

    fn pair(&self, p: &Prod, f: &Mor, g: &Mor) -> Result<Mor> {
        self.p.cat().pair(p, f, g)
    }

    fn pullback(&self, f: &Mor, g: &Mor) -> Result<Pullback> {
        // a base pullback square stays a commuting square; uniqueness of
        // mediators can change at class level, so flag it weak
        let mut pb = self.p.cat().pullback(f, g)?;
        pb.weak = true;
        Ok(pb)
    }

    fn pb_mediate(&self, pb: &Pullback, u: &Mor, v: &Mor) -> Result<Mor> {
        self.p.cat().pb_mediate(pb, u, v)
    }

    fn initial(&self) -> Option<Ob> {
        self.p.cat().initial()
    }

    fn coproduct(&self, a: &Ob, b: &Ob) -> Option<Coprod> {
        self.p.cat().coproduct(a, b)
    }

    fn copair(&self, c: &Coprod, f: &Mor, g: &Mor) -> Result<Mor> {
        self.p.cat().copair(c, f, g)
    }
}

/// The collapse as a doctrine: all fibre data is the underlying doctrine's,
/// consulted through class representatives.
pub struct CollapseDoctrine {
    p: Doc,
    cat: Rc<CollapseCat>,
    label: String,
}

impl CollapseDoctrine {
    pub fn base_doctrine(&self) -> &Doc {
        &self.p
    }
}

impl Doctrine for CollapseDoctrine {
    fn name(&self) -> String {
        self.label.clone()
    }

    fn cat(&self) -> Cat {
        self.cat.clone()
    }

    fn top(&self, a: &Ob) -> Fib {
        self.p.top(a)
    }

    fn meet(&self, x: &Fib, y: &Fib) -> Fib {
        self.p.meet(x, y)
    }

    fn leq(&self, x: &Fib, y: &Fib) -> bool {
        self.p.leq(x, y)
    }

    fn reindex(&self, f: &Mor, y: &Fib) -> Result<Fib> {
        self.p.reindex(f, y)
    }

    fn fiber_size(&self, a: &Ob) -> Option<u128> {
        self.p.fiber_size(a)
    }

    fn enum_fiber(&self, a: &Ob, budget: usize) -> Result<Vec<Fib>> {
        self.p.enum_fiber(a, budget)
    }

    fn bottom(&self, a: &Ob) -> Result<Fib> {
        self.p.bottom(a)
    }

    fn join(&self, x: &Fib, y: &Fib) -> Result<Fib> {
        self.p.join(x, y)
    }

    fn implies(&self, x: &Fib, y: &Fib) -> Result<Fib> {
        self.p.implies(x, y)
    }

    fn diagonal(&self, a: &Ob) -> Result<Fib> {
        self.p.diagonal(a)
    }

    fn exists_proj(&self, a: &Ob, b: &Ob, keep_first: bool, alpha: &Fib) -> Result<Fib> {
        self.p.exists_proj(a, b, keep_first, alpha)
    }

    fn forall_proj(&self, a: &Ob, b: &Ob, keep_first: bool, alpha: &Fib) -> Result<Fib> {
        self.p.forall_proj(a, b, keep_first, alpha)
    }

    fn comprehension(&self, alpha: &Fib) -> Result<Mor> {
        self.p.comprehension(alpha)
    }

    fn classifier(&self) -> Result<(Ob, Fib)> {
        self.p.classifier()
    }

    fn power_object(&self, a: &Ob) -> Result<(Ob, Fib)> {
        self.p.power_object(a)
    }
}

pub fn extensional_collapse(p: &Doc, label: &str) -> Rc<CollapseDoctrine> {
    let cat = Rc::new(CollapseCat {
        p: p.clone(),
        label: format!("{label}.base"),
    });
    Rc::new(CollapseDoctrine {
        p: p.clone(),
        cat,
        label: String::from(label),
    })
}
