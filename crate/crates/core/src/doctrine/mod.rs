//! Indexed inf-semilattices over a base category: the object-safe
//! [`Doctrine`] trait, fibre elements, the derived adjoints along arbitrary
//! arrows, internal injectivity/surjectivity, relation calculus, and the
//! property verdict engine.
//!
//! Capability layering is by `Result`: an operation a doctrine does not
//! carry returns `Error::MissingCapability`, and the verdict engine reports
//! the corresponding property as failing with that reason.

mod power;
mod sub;
mod tabulated;
mod verify;
mod weaksub;

pub use power::PowerDoctrine;
pub use sub::{sub_doctrine, SubDoctrine};
pub use tabulated::{TabulatedDoctrine, TabulatedDoctrineBuilder};
pub use verify::{verify, Property, PropertyReport, ALL_PROPERTIES};
pub use weaksub::{weaksub_doctrine, WeakSubDoctrine};

use crate::error::{Error, Result};
use crate::kernel::{self, Cat, Data, Mor, Ob};
use alloc::format;
use alloc::string::String;
use alloc::vec::Vec;
use core::fmt;

/// An element of the fibre over `ob`.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Fib {
    pub ob: Ob,
    pub data: Data,
}

impl Fib {
    pub fn new(ob: Ob, data: Data) -> Fib {
        Fib { ob, data }
    }
}

impl fmt::Display for Fib {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}@{}", self.data, self.ob)
    }
}

/// An indexed inf-semilattice with optional logical capabilities. All
/// methods must be deterministic; fibre elements are canonical data, so
/// equality of fibre elements is payload equality.
pub trait Doctrine {
    fn name(&self) -> String;

    fn cat(&self) -> Cat;

    fn top(&self, a: &Ob) -> Fib;

    fn meet(&self, x: &Fib, y: &Fib) -> Fib;

    fn leq(&self, x: &Fib, y: &Fib) -> bool;

    /// Reindex `y` (over `dst f`) along `f`, landing over `src f`.
    fn reindex(&self, f: &Mor, y: &Fib) -> Result<Fib>;

    /// Number of elements of the fibre when cheaply known.
    fn fiber_size(&self, a: &Ob) -> Option<u128>;

    /// All elements of the fibre in canonical order, within budget.
    fn enum_fiber(&self, a: &Ob, budget: usize) -> Result<Vec<Fib>>;

    // ---- optional capabilities ----

    fn bottom(&self, _a: &Ob) -> Result<Fib> {
        Err(Error::MissingCapability("bottom"))
    }

    fn join(&self, _x: &Fib, _y: &Fib) -> Result<Fib> {
        Err(Error::MissingCapability("joins"))
    }

    fn implies(&self, _x: &Fib, _y: &Fib) -> Result<Fib> {
        Err(Error::MissingCapability("implication"))
    }

    /// The fibred equality over `a × a` (chosen product).
    fn diagonal(&self, _a: &Ob) -> Result<Fib> {
        Err(Error::MissingCapability("fibred equality"))
    }

    /// Left adjoint to reindexing along the chosen projection of
    /// `a × b` onto `a` (when `keep_first`) or `b`.
    fn exists_proj(&self, _a: &Ob, _b: &Ob, _keep_first: bool, _alpha: &Fib) -> Result<Fib> {
        Err(Error::MissingCapability("existential quantification"))
    }

    /// Right adjoint to reindexing along a chosen projection.
    fn forall_proj(&self, _a: &Ob, _b: &Ob, _keep_first: bool, _alpha: &Fib) -> Result<Fib> {
        Err(Error::MissingCapability("universal quantification"))
    }

    /// The chosen comprehension arrow of `alpha`, into `alpha.ob`.
    fn comprehension(&self, _alpha: &Fib) -> Result<Mor> {
        Err(Error::MissingCapability("comprehension"))
    }

    /// The weak predicate classifier `(Ω, ∈)` when present.
    fn classifier(&self) -> Result<(Ob, Fib)> {
        Err(Error::MissingCapability("predicate classifier"))
    }

    /// The weak power object `(P a, ∈_a over a × P a)` when present.
    fn power_object(&self, _a: &Ob) -> Result<(Ob, Fib)> {
        Err(Error::MissingCapability("power objects"))
    }

    /// A classifying arrow `y -> P a` for a relation over `a × y`.
    fn power_classify(&self, _a: &Ob, _y: &Ob, _phi: &Fib) -> Result<Mor> {
        Err(Error::MissingCapability("power objects"))
    }

    /// For doctrines with quotients: the chosen quotient of an internal
    /// equivalence relation `rel` over `a × a`, as (target, quotient arrow).
    fn quotient(&self, _a: &Ob, _rel: &Fib) -> Result<(Ob, Mor)> {
        Err(Error::MissingCapability("quotients"))
    }

    fn has_quotients(&self) -> bool {
        false
    }
}

/// Shared handle to a doctrine.
pub type Doc = alloc::rc::Rc<dyn Doctrine>;

pub fn eq_fib(x: &Fib, y: &Fib) -> bool {
    x.ob == y.ob && x.data == y.data
}

/// `δ_B` reindexed along `f × g : A×B -> B×B`; with `g = id` this is the
/// graph of `f` as a relation over `A × B`.
pub fn graph(d: &dyn Doctrine, f: &Mor) -> Result<Fib> {
    let cat = d.cat();
    let delta = d.diagonal(&f.dst)?;
    let idb = cat.identity(&f.dst);
    let fx = kernel::prod_mor(cat.as_ref(), f, &idb)?;
    d.reindex(&fx.mor, &delta)
}

/// Left adjoint to reindexing along an arbitrary arrow, via the projection
/// adjoint and fibred equality.
pub fn exists_along(d: &dyn Doctrine, f: &Mor, alpha: &Fib) -> Result<Fib> {
    let cat = d.cat();
    if alpha.ob != f.src {
        return Err(Error::Mismatch {
            context: "exists_along",
            detail: format!("element over {}, arrow from {}", alpha.ob, f.src),
        });
    }
    let p = cat.product(&f.src, &f.dst)?;
    let g = graph(d, f)?; // over A × B
    let a1 = d.reindex(&p.pr1, alpha)?;
    let body = d.meet(&g, &a1);
    d.exists_proj(&f.src, &f.dst, false, &body)
}

/// Right adjoint to reindexing along an arbitrary arrow.
pub fn forall_along(d: &dyn Doctrine, f: &Mor, alpha: &Fib) -> Result<Fib> {
    let cat = d.cat();
    if alpha.ob != f.src {
        return Err(Error::Mismatch {
            context: "forall_along",
            detail: format!("element over {}, arrow from {}", alpha.ob, f.src),
        });
    }
    let p = cat.product(&f.src, &f.dst)?;
    let g = graph(d, f)?;
    let a1 = d.reindex(&p.pr1, alpha)?;
    let body = d.implies(&g, &a1)?;
    d.forall_proj(&f.src, &f.dst, false, &body)
}

/// Internal injectivity: `f` reflects fibred equality.
pub fn is_inj(d: &dyn Doctrine, f: &Mor) -> Result<bool> {
    let cat = d.cat();
    let db = d.diagonal(&f.dst)?;
    let da = d.diagonal(&f.src)?;
    let ff = kernel::prod_mor(cat.as_ref(), f, f)?;
    let pulled = d.reindex(&ff.mor, &db)?;
    Ok(eq_fib(&pulled, &da))
}

/// Internal surjectivity: the direct image of truth along `f` is true.
pub fn is_surj(d: &dyn Doctrine, f: &Mor) -> Result<bool> {
    let im = exists_along(d, f, &d.top(&f.src))?;
    Ok(eq_fib(&im, &d.top(&f.dst)))
}

/// Factors `f` as a comprehension arrow after an internally surjective
/// arrow: `f = m ∘ e` with `m` the comprehension of the image of truth.
pub fn factorize(d: &dyn Doctrine, f: &Mor, hom_budget: usize) -> Result<(Mor, Mor)> {
    let cat = d.cat();
    let image = exists_along(d, f, &d.top(&f.src))?;
    let m = d.comprehension(&image)?;
    for e in cat.hom(&f.src, &m.src, hom_budget)? {
        let me = cat.compose(&m, &e)?;
        if cat.equal_mor(&me, f) {
            return Ok((e, m));
        }
    }
    Err(Error::Internal(format!(
        "no factorization of {f} through the comprehension of its image"
    )))
}

/// `ρ` swapped: reindex along `<pr2, pr1>`.
pub fn rel_swap(d: &dyn Doctrine, a: &Ob, rho: &Fib) -> Result<Fib> {
    let cat = d.cat();
    let sw = kernel::swap_mor(cat.as_ref(), a, a)?;
    d.reindex(&sw, rho)
}

/// Relational composition of `r` over `a × b` and `s` over `b × c`:
/// `(x, z) ↦ ∃ y. r(x, y) ∧ s(y, z)`, an element over `a × c`.
pub fn rel_compose(
    d: &dyn Doctrine,
    a: &Ob,
    b: &Ob,
    c: &Ob,
    r: &Fib,
    s: &Fib,
) -> Result<Fib> {
    let cat = d.cat();
    let ac = cat.product(a, c)?;
    let big = cat.product(&ac.ob, b)?; // ((a × c) × b)
    let px = cat.compose(&ac.pr1, &big.pr1)?;
    let pz = cat.compose(&ac.pr2, &big.pr1)?;
    let py = big.pr2.clone();
    let rxy = {
        let m = kernel::pair_into(cat.as_ref(), &[a.clone(), b.clone()], &[px, py.clone()])?;
        d.reindex(&m, r)?
    };
    let syz = {
        let m = kernel::pair_into(cat.as_ref(), &[b.clone(), c.clone()], &[py, pz])?;
        d.reindex(&m, s)?
    };
    let body = d.meet(&rxy, &syz);
    d.exists_proj(&ac.ob, b, true, &body)
}

/// The three internal equivalence-relation laws for `rho` over `a × a`,
/// reported separately.
pub fn relation_laws(d: &dyn Doctrine, a: &Ob, rho: &Fib) -> Result<(bool, bool, bool)> {
    let cat = d.cat();
    let delta = d.diagonal(a)?;
    let refl = d.leq(&delta, rho);
    let sym = eq_fib(rho, &rel_swap(d, a, rho)?);
    // transitivity over a × a × a
    let (triple, projs) = kernel::nary_product(cat.as_ref(), &[a.clone(), a.clone(), a.clone()])?;
    let _ = triple;
    let pair = |i: usize, j: usize| -> Result<Fib> {
        let m = kernel::pair_into(
            cat.as_ref(),
            &[a.clone(), a.clone()],
            &[projs[i].clone(), projs[j].clone()],
        )?;
        d.reindex(&m, rho)
    };
    let r12 = pair(0, 1)?;
    let r23 = pair(1, 2)?;
    let r13 = pair(0, 2)?;
    let trans = d.leq(&d.meet(&r12, &r23), &r13);
    Ok((refl, sym, trans))
}

pub fn is_equivalence_relation(d: &dyn Doctrine, a: &Ob, rho: &Fib) -> Result<bool> {
    let (r, s, t) = relation_laws(d, a, rho)?;
    Ok(r && s && t)
}

/// All internal equivalence relations over `a`, within budget.
pub fn equivalence_relations(d: &dyn Doctrine, a: &Ob, budget: usize) -> Result<Vec<Fib>> {
    let cat = d.cat();
    let sq = cat.product(a, a)?;
    let mut out = Vec::new();
    for rho in d.enum_fiber(&sq.ob, budget)? {
        if is_equivalence_relation(d, a, &rho)? {
            out.push(rho);
        }
    }
    Ok(out)
}

/// Is `alpha` (over `a`) compatible with `rho` (over `a × a`)?
pub fn is_descent_datum(d: &dyn Doctrine, a: &Ob, rho: &Fib, alpha: &Fib) -> Result<bool> {
    let cat = d.cat();
    let sq = cat.product(a, a)?;
    let a1 = d.reindex(&sq.pr1, alpha)?;
    let a2 = d.reindex(&sq.pr2, alpha)?;
    Ok(d.leq(&d.meet(&a1, &rho.clone()), &a2))
}

/// `∃ a'. ρ(a, a') ∧ z(a')` over `a` — the `ρ`-saturation of `z`.
pub fn saturate(d: &dyn Doctrine, a: &Ob, rho: &Fib, z: &Fib) -> Result<Fib> {
    let cat = d.cat();
    let sq = cat.product(a, a)?;
    let z2 = d.reindex(&sq.pr2, z)?;
    d.exists_proj(a, a, true, &d.meet(rho, &z2))
}

/// `∀ a'. ρ(a, a') ⇒ z(a')` over `a` — the `ρ`-interior of `z`.
pub fn interior(d: &dyn Doctrine, a: &Ob, rho: &Fib, z: &Fib) -> Result<Fib> {
    let cat = d.cat();
    let sq = cat.product(a, a)?;
    let z2 = d.reindex(&sq.pr2, z)?;
    let body = d.implies(rho, &z2)?;
    d.forall_proj(a, a, true, &body)
}

/// Do `f, g : A -> B` induce the same arrow relative to `sigma` over
/// `B × B`, i.e. is `⊤ = <f, g>* sigma`?
pub fn same_mod_rel(d: &dyn Doctrine, sigma: &Fib, f: &Mor, g: &Mor) -> Result<bool> {
    let cat = d.cat();
    let m = kernel::pair_into(
        cat.as_ref(),
        &[f.dst.clone(), g.dst.clone()],
        &[f.clone(), g.clone()],
    )?;
    let pulled = d.reindex(&m, sigma)?;
    Ok(eq_fib(&pulled, &d.top(&f.src)))
}

/// Does `f` carry `rho` into `sigma`, i.e. `rho ≤ (f × f)* sigma`?
pub fn preserves_rel(d: &dyn Doctrine, rho: &Fib, sigma: &Fib, f: &Mor) -> Result<bool> {
    let cat = d.cat();
    let ff = kernel::prod_mor(cat.as_ref(), f, f)?;
    let pulled = d.reindex(&ff.mor, sigma)?;
    Ok(d.leq(rho, &pulled))
}

/// Totality of a relation `F` over `a × b`: `∃ b. F(a, b)` is true over `a`.
pub fn is_total(d: &dyn Doctrine, a: &Ob, b: &Ob, f: &Fib) -> Result<bool> {
    let e = d.exists_proj(a, b, true, f)?;
    Ok(eq_fib(&e, &d.top(&e.ob)))
}

/// Single-valuedness of `F` over `a × b`:
/// `F(a, b) ∧ F(a, b') ≤ b = b'` over `a × b × b`.
pub fn is_single_valued(d: &dyn Doctrine, a: &Ob, b: &Ob, f: &Fib) -> Result<bool> {
    let cat = d.cat();
    let (_, projs) = kernel::nary_product(cat.as_ref(), &[a.clone(), b.clone(), b.clone()])?;
    let reix = |i: usize, j: usize, x: &Fib, xs: &[Ob]| -> Result<Fib> {
        let m = kernel::pair_into(cat.as_ref(), xs, &[projs[i].clone(), projs[j].clone()])?;
        d.reindex(&m, x)
    };
    let ab = [a.clone(), b.clone()];
    let bb = [b.clone(), b.clone()];
    let f1 = reix(0, 1, f, &ab)?;
    let f2 = reix(0, 2, f, &ab)?;
    let db = d.diagonal(b)?;
    let eqb = reix(1, 2, &db, &bb)?;
    Ok(d.leq(&d.meet(&f1, &f2), &eqb))
}
