//! Weak subobjects (variations): the poset reflection of each slice.
//!
//! Over the canonical finite sets the reflection is exactly the subset
//! lattice (a variation is identified with its image, and mutual
//! factorization is image containment), so that case is carried by the
//! two-valued pointwise doctrine, which computes the same fibres without
//! any slice enumeration. Over finite presented bases the generic
//! tabulation enumerates variations and reflects them.

use super::power::PowerDoctrine;
use super::sub::tabulate_classes;
use super::tabulated::TabulatedDoctrine;
use super::{Doctrine, Fib};
use crate::error::Result;
use crate::kernel::{Cat, Mor, Ob};
use crate::lattice::Lattice;
use alloc::rc::Rc;
use alloc::string::String;

/// The weak-subobject doctrine of the finite-set base, in the image/subset
/// representation.
pub struct WeakSubDoctrine {
    inner: PowerDoctrine,
}

impl WeakSubDoctrine {
    pub fn finset() -> WeakSubDoctrine {
        WeakSubDoctrine {
            inner: PowerDoctrine::new("weaksub(finset)", Rc::new(Lattice::bool2())),
        }
    }
}

impl Doctrine for WeakSubDoctrine {
    fn name(&self) -> String {
        self.inner.name()
    }
    fn cat(&self) -> Cat {
        self.inner.cat()
    }
    fn top(&self, a: &Ob) -> Fib {
        self.inner.top(a)
    }
    fn meet(&self, x: &Fib, y: &Fib) -> Fib {
        self.inner.meet(x, y)
    }
    fn leq(&self, x: &Fib, y: &Fib) -> bool {
        self.inner.leq(x, y)
    }
    fn reindex(&self, f: &Mor, y: &Fib) -> Result<Fib> {
        self.inner.reindex(f, y)
    }
    fn fiber_size(&self, a: &Ob) -> Option<u128> {
        self.inner.fiber_size(a)
    }
    fn enum_fiber(&self, a: &Ob, budget: usize) -> Result<alloc::vec::Vec<Fib>> {
        self.inner.enum_fiber(a, budget)
    }
    fn bottom(&self, a: &Ob) -> Result<Fib> {
        self.inner.bottom(a)
    }
    fn join(&self, x: &Fib, y: &Fib) -> Result<Fib> {
        self.inner.join(x, y)
    }
    fn implies(&self, x: &Fib, y: &Fib) -> Result<Fib> {
        self.inner.implies(x, y)
    }
    fn diagonal(&self, a: &Ob) -> Result<Fib> {
        self.inner.diagonal(a)
    }
    fn exists_proj(&self, a: &Ob, b: &Ob, keep_first: bool, alpha: &Fib) -> Result<Fib> {
        self.inner.exists_proj(a, b, keep_first, alpha)
    }
    fn forall_proj(&self, a: &Ob, b: &Ob, keep_first: bool, alpha: &Fib) -> Result<Fib> {
        self.inner.forall_proj(a, b, keep_first, alpha)
    }
    fn comprehension(&self, alpha: &Fib) -> Result<Mor> {
        self.inner.comprehension(alpha)
    }
    fn classifier(&self) -> Result<(Ob, Fib)> {
        self.inner.classifier()
    }
    fn power_object(&self, a: &Ob) -> Result<(Ob, Fib)> {
        self.inner.power_object(a)
    }
}

/// Generic weak-subobject doctrine over a finite base: enumerate variations
/// into each tabulated object and reflect by mutual factorization.
pub fn weaksub_doctrine(
    label: &str,
    cat: Cat,
    obs: &[Ob],
    hom_budget: usize,
) -> Result<TabulatedDoctrine> {
    tabulate_classes(label, cat, obs, false, hom_budget)
}
