//! The functional completion: same objects, arrows are total single-valued
//! internal relations, acted on fibres by relational direct image. Adds the
//! rule of unique choice; on the quotient completion of a suitable doctrine
//! its base is the subcategory-of-coarse-objects picture.

use crate::doctrine::{
    graph, is_single_valued, is_total, rel_compose, Doc, Doctrine, Fib,
};
use crate::error::{Error, Result};
use crate::kernel::{self, Cat, CatOps, Fragment, Mor, MorData, Ob, Prod, Pullback};
use alloc::format;
use alloc::rc::Rc;
use alloc::string::String;
use alloc::vec::Vec;

pub struct FunCat {
    q: Doc,
    label: String,
}

impl FunCat {
    fn base(&self) -> Cat {
        self.q.cat()
    }

    /// The relation payload of an arrow, as a fibre element over the chosen
    /// product of its endpoints.
    pub fn relation(&self, m: &Mor) -> Result<Fib> {
        let MorData::Rel(data) = &m.data else {
            return Err(Error::Mismatch {
                context: "functional completion",
                detail: format!("not a relational arrow: {}", m.data),
            });
        };
        let p = self.base().product(&m.src, &m.dst)?;
        Ok(Fib::new(p.ob, data.clone()))
    }

    fn from_relation(&self, src: &Ob, dst: &Ob, rel: &Fib) -> Mor {
        Mor::new(src.clone(), dst.clone(), MorData::Rel(rel.data.clone()))
    }

    /// The graph of an underlying arrow as a completion arrow.
    pub fn graph_of(&self, f: &Mor) -> Result<Mor> {
        let g = graph(self.q.as_ref(), f)?;
        Ok(self.from_relation(&f.src, &f.dst, &g))
    }
}

impl CatOps for FunCat {
    fn name(&self) -> String {
        self.label.clone()
    }

    fn objects(&self, frag: &Fragment) -> Vec<Ob> {
        self.base().objects(frag)
    }

    fn carrier(&self, a: &Ob) -> Option<u32> {
        self.base().carrier(a)
    }

    fn hom_size(&self, _a: &Ob, _b: &Ob) -> Option<u128> {
        None
    }

    fn hom(&self, a: &Ob, b: &Ob, budget: usize) -> Result<Vec<Mor>> {
        let p = self.base().product(a, b)?;
        let mut out = Vec::new();
        for rel in self.q.enum_fiber(&p.ob, budget)? {
            if is_total(self.q.as_ref(), a, b, &rel)?
                && is_single_valued(self.q.as_ref(), a, b, &rel)?
            {
                out.push(self.from_relation(a, b, &rel));
            }
        }
        Ok(out)
    }

    fn identity(&self, a: &Ob) -> Mor {
        let d = self.q.diagonal(a).expect("elementary doctrine under the functional completion");
        self.from_relation(a, a, &d)
    }

    fn compose(&self, g: &Mor, f: &Mor) -> Result<Mor> {
        kernel::require_composable("functional-completion compose", g, f)?;
        let rf = self.relation(f)?;
        let rg = self.relation(g)?;
        let c = rel_compose(self.q.as_ref(), &f.src, &f.dst, &g.dst, &rf, &rg)?;
        Ok(self.from_relation(&f.src, &g.dst, &c))
    }

    fn terminal(&self) -> Ob {
        self.base().terminal()
    }

    fn bang(&self, a: &Ob) -> Mor {
        self.graph_of(&self.base().bang(a)).expect("bang graph")
    }

    fn product(&self, a: &Ob, b: &Ob) -> Result<Prod> {
        let p = self.base().product(a, b)?;
        Ok(Prod {
            pr1: self.graph_of(&p.pr1)?,
            pr2: self.graph_of(&p.pr2)?,
            ob: p.ob,
        })
    }

    fn pair(&self, p: &Prod, f: &Mor, g: &Mor) -> Result<Mor> {
        // <F, G>(x, (a, b)) = F(x, a) ∧ G(x, b)
        let cat = self.base();
        let (a, b) = (&p.pr1.dst, &p.pr2.dst);
        let ab = cat.product(a, b)?;
        let big = cat.product(&f.src, &ab.ob)?;
        let px = big.pr1.clone();
        let pa = cat.compose(&ab.pr1, &big.pr2)?;
        let pb = cat.compose(&ab.pr2, &big.pr2)?;
        let rf = self.relation(f)?;
        let rg = self.relation(g)?;
        let mf = kernel::pair_into(
            cat.as_ref(),
            &[f.src.clone(), a.clone()],
            &[px.clone(), pa],
        )?;
        let mg = kernel::pair_into(cat.as_ref(), &[f.src.clone(), b.clone()], &[px, pb])?;
        let lf = self.q.reindex(&mf, &rf)?;
        let lg = self.q.reindex(&mg, &rg)?;
        let rel = self.q.meet(&lf, &lg);
        Ok(self.from_relation(&f.src, &p.ob, &rel))
    }

    fn pullback(&self, _f: &Mor, _g: &Mor) -> Result<Pullback> {
        Err(Error::MissingStructure("pullbacks in the functional completion"))
    }

    fn pb_mediate(&self, _pb: &Pullback, _u: &Mor, _v: &Mor) -> Result<Mor> {
        Err(Error::MissingStructure("pullbacks in the functional completion"))
    }
}

pub struct FunctionalCompletion {
    q: Doc,
    cat: Rc<FunCat>,
    label: String,
}

impl FunctionalCompletion {
    pub fn base_doctrine(&self) -> &Doc {
        &self.q
    }

    pub fn fun_cat(&self) -> &Rc<FunCat> {
        &self.cat
    }
}

impl Doctrine for FunctionalCompletion {
    fn name(&self) -> String {
        self.label.clone()
    }

    fn cat(&self) -> Cat {
        self.cat.clone()
    }

    fn top(&self, a: &Ob) -> Fib {
        self.q.top(a)
    }

    fn meet(&self, x: &Fib, y: &Fib) -> Fib {
        self.q.meet(x, y)
    }

    fn leq(&self, x: &Fib, y: &Fib) -> bool {
        self.q.leq(x, y)
    }

    fn reindex(&self, f: &Mor, y: &Fib) -> Result<Fib> {
        // along a relation: a ↦ ∃ b. F(a, b) ∧ y(b)
        let rel = self.cat.relation(f)?;
        let cat = self.q.cat();
        let p = cat.product(&f.src, &f.dst)?;
        let lifted = self.q.reindex(&p.pr2, y)?;
        let body = self.q.meet(&rel, &lifted);
        self.q.exists_proj(&f.src, &f.dst, true, &body)
    }

    fn fiber_size(&self, a: &Ob) -> Option<u128> {
        self.q.fiber_size(a)
    }

    fn enum_fiber(&self, a: &Ob, budget: usize) -> Result<Vec<Fib>> {
        self.q.enum_fiber(a, budget)
    }

    fn bottom(&self, a: &Ob) -> Result<Fib> {
        self.q.bottom(a)
    }

    fn join(&self, x: &Fib, y: &Fib) -> Result<Fib> {
        self.q.join(x, y)
    }

    fn implies(&self, x: &Fib, y: &Fib) -> Result<Fib> {
        self.q.implies(x, y)
    }

    fn diagonal(&self, a: &Ob) -> Result<Fib> {
        self.q.diagonal(a)
    }

    fn exists_proj(&self, a: &Ob, b: &Ob, keep_first: bool, alpha: &Fib) -> Result<Fib> {
        self.q.exists_proj(a, b, keep_first, alpha)
    }

    fn forall_proj(&self, a: &Ob, b: &Ob, keep_first: bool, alpha: &Fib) -> Result<Fib> {
        self.q.forall_proj(a, b, keep_first, alpha)
    }

    fn comprehension(&self, alpha: &Fib) -> Result<Mor> {
        let m = self.q.comprehension(alpha)?;
        self.cat.graph_of(&m)
    }
}

/// The functional completion of an elementary existential doctrine — its
/// fragment satisfies the rule of unique choice.
pub fn functional_completion(q: &Doc, label: &str) -> Rc<FunctionalCompletion> {
    let cat = Rc::new(FunCat {
        q: q.clone(),
        label: format!("{label}.base"),
    });
    Rc::new(FunctionalCompletion {
        q: q.clone(),
        cat,
        label: String::from(label),
    })
}
