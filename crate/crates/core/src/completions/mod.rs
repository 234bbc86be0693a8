//! The free constructions on doctrines: quotient completion (with its
//! intensional variant), extensional collapse, comprehension completion,
//! functional completion, and the diagonal embedding of the base into the
//! quotient completion.

mod collapse;
mod compr;
mod eqc;
mod functional;

pub use collapse::{extensional_collapse, CollapseDoctrine};
pub use compr::{comprehension_completion, ComprehensionCompletion};
pub use eqc::{eqc, intensional_qc, EqcCat, EqcDoctrine, EqcMode, EqcSliceData};
pub use functional::{functional_completion, FunctionalCompletion};

use crate::doctrine::{same_mod_rel, Doc, Doctrine, Fib};
use crate::error::Result;
use crate::kernel::{Mor, Ob};
use crate::oracle::FunctorData;
use alloc::rc::Rc;
use alloc::string::String;
use alloc::vec::Vec;

/// Enumerates canonical representatives of arrow classes `A -> B` relative
/// to `sigma` over the square of `B`: base arrows, optionally filtered by
/// `rho ≤ (f × f)* sigma`, grouped by the relational equality test, first
/// (least) representative per class.
pub(crate) fn class_reps(
    p: &dyn Doctrine,
    a: &Ob,
    b: &Ob,
    rho: Option<&Fib>,
    sigma: &Fib,
    hom_budget: usize,
) -> Result<Vec<Mor>> {
    let cat = p.cat();
    let mut reps: Vec<Mor> = Vec::new();
    for f in cat.hom(a, b, hom_budget)? {
        if let Some(rho) = rho {
            if !crate::doctrine::preserves_rel(p, rho, sigma, &f)? {
                continue;
            }
        }
        let mut fresh = true;
        for r in &reps {
            if same_mod_rel(p, sigma, r, &f)? {
                fresh = false;
                break;
            }
        }
        if fresh {
            reps.push(f);
        }
    }
    Ok(reps)
}

/// A 1-morphism of doctrines: a functor between the bases together with a
/// fibrewise monotone meet-preserving map.
#[derive(Clone)]
pub struct DoctrineMorphism {
    pub src: Doc,
    pub dst: Doc,
    pub functor: FunctorData,
    pub fiber_map: Rc<dyn Fn(&Ob, &Fib) -> Result<Fib>>,
    pub label: String,
}

impl DoctrineMorphism {
    pub fn apply_fib(&self, a: &Ob, x: &Fib) -> Result<Fib> {
        (self.fiber_map)(a, x)
    }
}

/// The embedding of the base into the quotient completion: an object goes
/// to itself with its fibred equality, an arrow to its class, fibres map by
/// identity (descent data of the fibred equality is the whole fibre).
pub fn embed_nabla(p: &Doc, q: &Rc<EqcDoctrine>) -> Result<DoctrineMorphism> {
    let p2 = p.clone();
    let p3 = p.clone();
    let _q2 = q.clone();
    let on_ob = move |a: &Ob| -> Result<Ob> {
        let delta = p2.diagonal(a)?;
        Ok(Ob::rel(a.clone(), delta.data))
    };
    let on_ob2 = on_ob.clone();
    let on_mor = move |f: &Mor| -> Result<Mor> {
        Ok(Mor::new(on_ob2(&f.src)?, on_ob2(&f.dst)?, f.data.clone()))
    };
    let on_ob3 = on_ob.clone();
    let functor = FunctorData {
        src: p.cat(),
        dst: q.cat(),
        on_ob: Rc::new(on_ob),
        on_mor: Rc::new(on_mor),
        label: String::from("nabla"),
    };
    let fiber_map = move |a: &Ob, x: &Fib| -> Result<Fib> {
        let _ = &p3;
        Ok(Fib::new(on_ob3(a)?, x.data.clone()))
    };
    Ok(DoctrineMorphism {
        src: p.clone(),
        dst: q.clone() as Doc,
        functor,
        fiber_map: Rc::new(fiber_map),
        label: String::from("nabla"),
    })
}
