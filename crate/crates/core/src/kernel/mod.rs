//! Base categories: object and morphism calculus, chosen structure,
//! fragment enumeration.
//!
//! Categories are driven through the object-safe [`CatOps`] trait so the
//! free constructions can stack (the quotient completion of a doctrine is a
//! doctrine over a new category built from the old one). Objects and
//! morphisms are plain data with a canonical order; all enumerations are
//! deterministic and budget-bounded.

mod finset;
mod poset;
mod presented;
mod structure;

pub use finset::{vals, FinSet};
pub use poset::PosetCat;
pub use presented::{ArrowDecl, PresentedCat, PresentedCatBuilder};
pub use structure::{diag, nary_product, pair_into, prod_mor, swap_mor, ProdMor};

use crate::error::{Error, Result};
use alloc::format;
use alloc::rc::Rc;
use alloc::string::{String, ToString};
use alloc::vec;
use alloc::vec::Vec;
use core::fmt;

/// Payload shared by fibre elements and by object refinements of the
/// completion categories: either pointwise values over a canonical finite
/// carrier or an index into a tabulated poset of predicates.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Data {
    /// One value index per point of a canonical finite carrier.
    Vals(Vec<u8>),
    /// Index into a tabulated fibre.
    Idx(u32),
}

impl fmt::Display for Data {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Data::Vals(vs) => {
                write!(f, "[")?;
                for (i, v) in vs.iter().enumerate() {
                    if i > 0 {
                        write!(f, " ")?;
                    }
                    write!(f, "{v}")?;
                }
                write!(f, "]")
            }
            Data::Idx(i) => write!(f, "#{i}"),
        }
    }
}

/// An object of a base category.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Ob {
    /// Canonical finite set with points `0..n`.
    Fin(u32),
    /// Object of a presented or poset category, by index.
    Named(u32),
    /// Object of a quotient-style completion: a base object together with a
    /// relation element over its square.
    Rel(Rc<Ob>, Data),
    /// Object of a comprehension-style completion: a base object together
    /// with a predicate element over it.
    Pred(Rc<Ob>, Data),
}

impl Ob {
    pub fn rel(base: Ob, rel: Data) -> Ob {
        Ob::Rel(Rc::new(base), rel)
    }
    pub fn pred(base: Ob, pred: Data) -> Ob {
        Ob::Pred(Rc::new(base), pred)
    }
    /// Carrier size for canonical finite sets.
    pub fn fin_size(&self) -> Option<u32> {
        match self {
            Ob::Fin(n) => Some(*n),
            _ => None,
        }
    }
}

impl fmt::Display for Ob {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Ob::Fin(n) => write!(f, "fin:{n}"),
            Ob::Named(i) => write!(f, "ob#{i}"),
            Ob::Rel(a, r) => write!(f, "({a} / {r})"),
            Ob::Pred(a, p) => write!(f, "({a} | {p})"),
        }
    }
}

/// Morphism payload.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum MorData {
    /// Total function table on canonical finite carriers.
    Map(Vec<u32>),
    /// Arrow of a presented category, by index.
    Named(u32),
    /// The unique arrow between comparable elements of a poset category.
    Le,
    /// A relation acting as an arrow (functional completion).
    Rel(Data),
}

impl fmt::Display for MorData {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            MorData::Map(t) => {
                write!(f, "[")?;
                for (i, v) in t.iter().enumerate() {
                    if i > 0 {
                        write!(f, " ")?;
                    }
                    write!(f, "{v}")?;
                }
                write!(f, "]")
            }
            MorData::Named(i) => write!(f, "ar#{i}"),
            MorData::Le => write!(f, "<="),
            MorData::Rel(d) => write!(f, "rel{d}"),
        }
    }
}

/// A morphism with explicit endpoints. Equality of morphisms is payload
/// equality after canonicalization; completion categories canonicalize
/// representatives at construction time.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Mor {
    pub src: Ob,
    pub dst: Ob,
    pub data: MorData,
}

impl Mor {
    pub fn new(src: Ob, dst: Ob, data: MorData) -> Mor {
        Mor { src, dst, data }
    }
    pub fn map(src: Ob, dst: Ob, table: Vec<u32>) -> Mor {
        Mor::new(src, dst, MorData::Map(table))
    }
    pub fn table(&self) -> Option<&[u32]> {
        match &self.data {
            MorData::Map(t) => Some(t),
            _ => None,
        }
    }
    pub fn is_endo(&self) -> bool {
        self.src == self.dst
    }
}

impl fmt::Display for Mor {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} : {} -> {}", self.data, self.src, self.dst)
    }
}

/// A declared finite fragment: which objects global quantifiers range over,
/// and how much enumeration the oracles may do. Lazy bases (the canonical
/// finite sets) expose objects by carrier size; fragments over them are
/// closed under the chosen terminal, and under pairwise products as long as
/// the product carrier stays under the cap.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Fragment {
    /// Carrier-size cap for lazily enumerated bases.
    pub size_cap: u32,
    /// Explicitly included objects (presented bases, completions).
    pub include: Vec<Ob>,
    /// Largest hom set the oracles may enumerate.
    pub hom_budget: usize,
    /// Largest fibre the oracles may enumerate.
    pub fiber_budget: usize,
}

impl Fragment {
    pub fn sized(size_cap: u32) -> Fragment {
        Fragment {
            size_cap,
            include: Vec::new(),
            hom_budget: 1 << 16,
            fiber_budget: 1 << 16,
        }
    }

    pub fn with_budgets(mut self, hom: usize, fiber: usize) -> Fragment {
        self.hom_budget = hom;
        self.fiber_budget = fiber;
        self
    }
}

impl Default for Fragment {
    fn default() -> Fragment {
        Fragment::sized(2)
    }
}

/// Chosen binary product: carrier plus the two projections.
#[derive(Debug, Clone)]
pub struct Prod {
    pub ob: Ob,
    pub pr1: Mor,
    pub pr2: Mor,
}

/// Chosen (possibly weak) pullback of a cospan `f : A -> C`, `g : B -> C`:
/// carrier plus the legs `to_left : P -> A`, `to_right : P -> B`.
#[derive(Debug, Clone)]
pub struct Pullback {
    pub ob: Ob,
    pub to_left: Mor,
    pub to_right: Mor,
    pub weak: bool,
}

/// Chosen binary coproduct: carrier plus the two injections.
#[derive(Debug, Clone)]
pub struct Coprod {
    pub ob: Ob,
    pub in1: Mor,
    pub in2: Mor,
}

/// Chosen weak exponential of `g` by `f` in the slice over their common
/// codomain: `q : W -> A`, a chosen weak product `Z` of `f` and `q` with its
/// legs, and the evaluation `Z -> dom g` over `A`.
#[derive(Debug, Clone)]
pub struct SliceExp {
    pub w: Ob,
    pub q: Mor,
    pub z: Ob,
    pub z_to_dom_f: Mor,
    pub z_to_w: Mor,
    pub eval: Mor,
}

/// Base-category operations. Implementations must be deterministic; all
/// enumeration methods return results in a fixed canonical order.
pub trait CatOps {
    fn name(&self) -> String;

    /// Objects the fragment quantifies over.
    fn objects(&self, frag: &Fragment) -> Vec<Ob>;

    /// Cheap upper bound on `|hom(a, b)|` when known.
    fn hom_size(&self, a: &Ob, b: &Ob) -> Option<u128>;

    /// Enumerate `hom(a, b)` in canonical order.
    fn hom(&self, a: &Ob, b: &Ob, budget: usize) -> Result<Vec<Mor>>;

    fn identity(&self, a: &Ob) -> Mor;

    /// `compose(g, f) = g ∘ f`, defined when `dst f = src g`.
    fn compose(&self, g: &Mor, f: &Mor) -> Result<Mor>;

    /// Morphism equality. Payload equality by default; completion
    /// categories override it with the relational test on representatives.
    fn equal_mor(&self, f: &Mor, g: &Mor) -> bool {
        f == g
    }

    fn terminal(&self) -> Ob;

    /// The chosen map to the terminal object.
    fn bang(&self, a: &Ob) -> Mor;

    /// Underlying finite-carrier size when the category tracks one.
    fn carrier(&self, a: &Ob) -> Option<u32> {
        a.fin_size()
    }

    fn product(&self, a: &Ob, b: &Ob) -> Result<Prod>;

    /// Mediating arrow `<f, g>` into a chosen product.
    fn pair(&self, p: &Prod, f: &Mor, g: &Mor) -> Result<Mor>;

    /// Chosen pullback of `f : A -> C` along `g : B -> C`.
    fn pullback(&self, f: &Mor, g: &Mor) -> Result<Pullback>;

    /// Mediating arrow into a chosen pullback from a commuting cone
    /// `(u : T -> A, v : T -> B)`.
    fn pb_mediate(&self, pb: &Pullback, u: &Mor, v: &Mor) -> Result<Mor>;

    fn initial(&self) -> Option<Ob> {
        None
    }

    fn coproduct(&self, _a: &Ob, _b: &Ob) -> Option<Coprod> {
        None
    }

    /// Mediating arrow `[f, g]` out of a chosen coproduct.
    fn copair(&self, _c: &Coprod, _f: &Mor, _g: &Mor) -> Result<Mor> {
        Err(Error::MissingStructure("coproducts"))
    }

    /// Chosen weak exponential in the slice over the common codomain of
    /// `f` and `g`.
    fn slice_weak_exp(&self, _f: &Mor, _g: &Mor) -> Option<SliceExp> {
        None
    }
}

/// Handy alias: categories are shared immutably.
pub type Cat = Rc<dyn CatOps>;

pub fn require_composable(context: &'static str, g: &Mor, f: &Mor) -> Result<()> {
    if f.dst != g.src {
        return Err(Error::Mismatch {
            context,
            detail: format!("dst of {} is {}, src of {} is {}", f.data, f.dst, g.data, g.src),
        });
    }
    Ok(())
}

/// Kind of chosen structure a witness certifies.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum WitnessKind {
    Terminal,
    Product,
    Pullback,
    Coproduct,
    Coequalizer,
    Exponential,
}

impl fmt::Display for WitnessKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            WitnessKind::Terminal => "terminal",
            WitnessKind::Product => "product",
            WitnessKind::Pullback => "pullback",
            WitnessKind::Coproduct => "coproduct",
            WitnessKind::Coequalizer => "coequalizer",
            WitnessKind::Exponential => "exponential",
        };
        write!(f, "{s}")
    }
}

/// Procedure producing the mediating arrow of a universal property from a
/// test cone/cocone.
pub type Mediator = Rc<dyn Fn(&[Mor]) -> Result<Mor>>;

/// A piece of chosen structure packaged for the oracles: carrier, legs, the
/// defining data (cospan, parallel pair, ...), a mediating-arrow procedure,
/// and whether the witness only claims the existence half of the universal
/// property.
#[derive(Clone)]
pub struct StructureWitness {
    pub kind: WitnessKind,
    pub carrier: Ob,
    pub legs: Vec<Mor>,
    pub aux: Vec<Mor>,
    pub weak: bool,
    pub mediator: Option<Mediator>,
}

impl fmt::Debug for StructureWitness {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("StructureWitness")
            .field("kind", &self.kind)
            .field("carrier", &self.carrier)
            .field("legs", &self.legs)
            .field("aux", &self.aux)
            .field("weak", &self.weak)
            .field("mediator", &self.mediator.as_ref().map(|_| "<proc>"))
            .finish()
    }
}

impl StructureWitness {
    pub fn of_terminal(cat: &Cat) -> StructureWitness {
        let cat2 = cat.clone();
        let t = cat.terminal();
        StructureWitness {
            kind: WitnessKind::Terminal,
            carrier: t,
            legs: vec![],
            aux: vec![],
            weak: false,
            mediator: Some(Rc::new(move |cone: &[Mor]| {
                let src = cone
                    .first()
                    .map(|m| m.src.clone())
                    .ok_or_else(|| Error::Internal("terminal mediator needs a source".into()))?;
                Ok(cat2.bang(&src))
            })),
        }
    }

    pub fn of_product(cat: &Cat, p: &Prod) -> StructureWitness {
        let cat2 = cat.clone();
        let p2 = p.clone();
        StructureWitness {
            kind: WitnessKind::Product,
            carrier: p.ob.clone(),
            legs: vec![p.pr1.clone(), p.pr2.clone()],
            aux: vec![],
            weak: false,
            mediator: Some(Rc::new(move |cone: &[Mor]| {
                if cone.len() != 2 {
                    return Err(Error::Internal("product mediator needs two legs".into()));
                }
                cat2.pair(&p2, &cone[0], &cone[1])
            })),
        }
    }

    pub fn of_pullback(cat: &Cat, f: &Mor, g: &Mor, pb: &Pullback) -> StructureWitness {
        let cat2 = cat.clone();
        let pb2 = pb.clone();
        StructureWitness {
            kind: WitnessKind::Pullback,
            carrier: pb.ob.clone(),
            legs: vec![pb.to_left.clone(), pb.to_right.clone()],
            aux: vec![f.clone(), g.clone()],
            weak: pb.weak,
            mediator: Some(Rc::new(move |cone: &[Mor]| {
                if cone.len() != 2 {
                    return Err(Error::Internal("pullback mediator needs two legs".into()));
                }
                cat2.pb_mediate(&pb2, &cone[0], &cone[1])
            })),
        }
    }

    pub fn of_coproduct(cat: &Cat, c: &Coprod) -> StructureWitness {
        let cat2 = cat.clone();
        let c2 = c.clone();
        StructureWitness {
            kind: WitnessKind::Coproduct,
            carrier: c.ob.clone(),
            legs: vec![c.in1.clone(), c.in2.clone()],
            aux: vec![],
            weak: false,
            mediator: Some(Rc::new(move |cocone: &[Mor]| {
                if cocone.len() != 2 {
                    return Err(Error::Internal("coproduct mediator needs two legs".into()));
                }
                cat2.copair(&c2, &cocone[0], &cocone[1])
            })),
        }
    }
}

/// `compose` as a free function, so call sites can stay terse.
pub fn compose(cat: &dyn CatOps, g: &Mor, f: &Mor) -> Result<Mor> {
    cat.compose(g, f)
}

/// Fragment-relative monomorphism test: `f` is monic if it cancels all
/// parallel pairs out of fragment objects. Returns the offending pair on
/// failure.
pub fn is_mono(
    cat: &dyn CatOps,
    f: &Mor,
    frag: &Fragment,
) -> Result<core::result::Result<(), (Mor, Mor)>> {
    for x in cat.objects(frag) {
        let homs = match cat.hom(&x, &f.src, frag.hom_budget) {
            Ok(h) => h,
            Err(Error::Budget { .. }) => continue,
            Err(e) => return Err(e),
        };
        for i in 0..homs.len() {
            for j in (i + 1)..homs.len() {
                let (u, v) = (&homs[i], &homs[j]);
                if cat.equal_mor(u, v) {
                    continue;
                }
                let fu = cat.compose(f, u)?;
                let fv = cat.compose(f, v)?;
                if cat.equal_mor(&fu, &fv) {
                    return Ok(Err((u.clone(), v.clone())));
                }
            }
        }
    }
    Ok(Ok(()))
}

/// Fragment-relative epimorphism test, dual to [`is_mono`].
pub fn is_epi(
    cat: &dyn CatOps,
    f: &Mor,
    frag: &Fragment,
) -> Result<core::result::Result<(), (Mor, Mor)>> {
    for y in cat.objects(frag) {
        let homs = match cat.hom(&f.dst, &y, frag.hom_budget) {
            Ok(h) => h,
            Err(Error::Budget { .. }) => continue,
            Err(e) => return Err(e),
        };
        for i in 0..homs.len() {
            for j in (i + 1)..homs.len() {
                let (u, v) = (&homs[i], &homs[j]);
                if cat.equal_mor(u, v) {
                    continue;
                }
                let uf = cat.compose(u, f)?;
                let vf = cat.compose(v, f)?;
                if cat.equal_mor(&uf, &vf) {
                    return Ok(Err((u.clone(), v.clone())));
                }
            }
        }
    }
    Ok(Ok(()))
}

/// Two-sided inverse search over an enumerated hom set.
pub fn find_inverse(cat: &dyn CatOps, f: &Mor, budget: usize) -> Result<Option<Mor>> {
    let back = cat.hom(&f.dst, &f.src, budget)?;
    for g in back {
        let gf = cat.compose(&g, f)?;
        let fg = cat.compose(f, &g)?;
        if cat.equal_mor(&gf, &cat.identity(&f.src)) && cat.equal_mor(&fg, &cat.identity(&f.dst)) {
            return Ok(Some(g));
        }
    }
    Ok(None)
}

/// Renders an object list deterministically (diagnostics).
pub fn render_obs(obs: &[Ob]) -> String {
    let mut s = String::new();
    for (i, o) in obs.iter().enumerate() {
        if i > 0 {
            s.push_str(", ");
        }
        s.push_str(&o.to_string());
    }
    s
}
