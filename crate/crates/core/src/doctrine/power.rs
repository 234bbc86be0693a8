//! The pointwise doctrine over finite sets determined by a finite
//! inf-semilattice of truth values: the fibre over a carrier is the set of
//! value vectors, reindexing is precomposition.
//!
//! Capabilities track the value algebra: fibred equality needs a bottom,
//! quantifiers are fibrewise joins/meets (joins need the full join table),
//! implication is pointwise, the classifier is the algebra's own carrier
//! with the identity membership, and power objects enumerate value vectors.

use super::{Doctrine, Fib};
use crate::error::{Error, Result};
use crate::kernel::{Cat, Data, FinSet, Mor, Ob};
use crate::lattice::Lattice;
use alloc::format;
use alloc::rc::Rc;
use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;

#[derive(Clone)]
pub struct PowerDoctrine {
    label: String,
    h: Rc<Lattice>,
    cat: Cat,
}

impl PowerDoctrine {
    pub fn new(label: &str, h: Rc<Lattice>) -> PowerDoctrine {
        PowerDoctrine {
            label: String::from(label),
            h,
            cat: Rc::new(FinSet),
        }
    }

    pub fn algebra(&self) -> &Rc<Lattice> {
        &self.h
    }

    fn points(&self, a: &Ob, context: &'static str) -> Result<usize> {
        a.fin_size().map(|n| n as usize).ok_or_else(|| Error::Mismatch {
            context,
            detail: format!("expected a finite-set object, found {a}"),
        })
    }

    fn vals<'f>(&self, x: &'f Fib, context: &'static str) -> Result<&'f [u8]> {
        match &x.data {
            Data::Vals(v) => Ok(v),
            other => Err(Error::Mismatch {
                context,
                detail: format!("expected pointwise values, found {other}"),
            }),
        }
    }

    fn lift(&self, ob: &Ob, vals: Vec<u8>) -> Fib {
        Fib::new(ob.clone(), Data::Vals(vals))
    }

    /// The `u`-th value vector of length `n` in enumeration order (most
    /// significant digit first).
    pub fn decode_vector(&self, n: usize, u: u128) -> Vec<u8> {
        let k = self.h.len() as u128;
        let mut digits = vec![0u8; n];
        let mut rest = u;
        for i in (0..n).rev() {
            digits[i] = (rest % k) as u8;
            rest /= k;
        }
        digits
    }
}

impl Doctrine for PowerDoctrine {
    fn name(&self) -> String {
        self.label.clone()
    }

    fn cat(&self) -> Cat {
        self.cat.clone()
    }

    fn top(&self, a: &Ob) -> Fib {
        let n = self.points(a, "top").expect("pointwise fibres live over finite sets");
        self.lift(a, vec![self.h.top as u8; n])
    }

    fn meet(&self, x: &Fib, y: &Fib) -> Fib {
        debug_assert_eq!(x.ob, y.ob);
        let (vx, vy) = (
            self.vals(x, "meet").expect("meet on pointwise data"),
            self.vals(y, "meet").expect("meet on pointwise data"),
        );
        let vals = vx
            .iter()
            .zip(vy)
            .map(|(&a, &b)| self.h.and(a as usize, b as usize) as u8)
            .collect();
        self.lift(&x.ob, vals)
    }

    fn leq(&self, x: &Fib, y: &Fib) -> bool {
        debug_assert_eq!(x.ob, y.ob);
        let (vx, vy) = (
            self.vals(x, "leq").expect("leq on pointwise data"),
            self.vals(y, "leq").expect("leq on pointwise data"),
        );
        vx.iter().zip(vy).all(|(&a, &b)| self.h.le(a as usize, b as usize))
    }

    fn reindex(&self, f: &Mor, y: &Fib) -> Result<Fib> {
        if f.dst != y.ob {
            return Err(Error::Mismatch {
                context: "pointwise reindex",
                detail: format!("element over {}, arrow into {}", y.ob, f.dst),
            });
        }
        let table = f.table().ok_or_else(|| Error::Mismatch {
            context: "pointwise reindex",
            detail: format!("not a table morphism: {}", f.data),
        })?;
        let vy = self.vals(y, "reindex")?;
        Ok(self.lift(&f.src, table.iter().map(|&i| vy[i as usize]).collect()))
    }

    fn fiber_size(&self, a: &Ob) -> Option<u128> {
        let n = a.fin_size()?;
        (self.h.len() as u128).checked_pow(n)
    }

    fn enum_fiber(&self, a: &Ob, budget: usize) -> Result<Vec<Fib>> {
        let n = self.points(a, "fibre enumeration")?;
        let total = self.fiber_size(a).unwrap_or(u128::MAX);
        if total > budget as u128 {
            return Err(Error::Budget {
                what: "pointwise fibre enumeration",
                need: total,
                budget: budget as u128,
            });
        }
        let mut out = Vec::with_capacity(total as usize);
        for u in 0..total {
            out.push(self.lift(a, self.decode_vector(n, u)));
        }
        Ok(out)
    }

    fn bottom(&self, a: &Ob) -> Result<Fib> {
        let b = self.h.bottom.ok_or(Error::MissingCapability("bottom"))?;
        let n = self.points(a, "bottom")?;
        Ok(self.lift(a, vec![b as u8; n]))
    }

    fn join(&self, x: &Fib, y: &Fib) -> Result<Fib> {
        let (vx, vy) = (self.vals(x, "join")?, self.vals(y, "join")?);
        let mut vals = Vec::with_capacity(vx.len());
        for (&a, &b) in vx.iter().zip(vy) {
            vals.push(
                self.h
                    .or(a as usize, b as usize)
                    .ok_or(Error::MissingCapability("joins"))? as u8,
            );
        }
        Ok(self.lift(&x.ob, vals))
    }

    fn implies(&self, x: &Fib, y: &Fib) -> Result<Fib> {
        let (vx, vy) = (self.vals(x, "implies")?, self.vals(y, "implies")?);
        let mut vals = Vec::with_capacity(vx.len());
        for (&a, &b) in vx.iter().zip(vy) {
            vals.push(
                self.h
                    .imp(a as usize, b as usize)
                    .ok_or(Error::MissingCapability("implication"))? as u8,
            );
        }
        Ok(self.lift(&x.ob, vals))
    }

    fn diagonal(&self, a: &Ob) -> Result<Fib> {
        let bot = self.h.bottom.ok_or(Error::MissingCapability(
            "fibred equality (needs a bottom value)",
        ))?;
        let n = self.points(a, "diagonal")?;
        let sq = self.cat.product(a, a)?;
        let mut vals = vec![bot as u8; n * n];
        for i in 0..n {
            vals[i * n + i] = self.h.top as u8;
        }
        Ok(self.lift(&sq.ob, vals))
    }

    fn exists_proj(&self, a: &Ob, b: &Ob, keep_first: bool, alpha: &Fib) -> Result<Fib> {
        if self.h.join.is_none() {
            return Err(Error::MissingCapability("existential quantification (needs joins)"));
        }
        let (m, n) = (self.points(a, "exists")?, self.points(b, "exists")?);
        let sq = self.cat.product(a, b)?;
        if alpha.ob != sq.ob {
            return Err(Error::Mismatch {
                context: "exists over a product",
                detail: format!("element over {}, product is {}", alpha.ob, sq.ob),
            });
        }
        let va = self.vals(alpha, "exists")?;
        let bot = self.h.bottom.ok_or(Error::MissingCapability("bottom"))?;
        if keep_first {
            let mut out = vec![bot as u8; m];
            for i in 0..m {
                let mut acc = bot;
                for j in 0..n {
                    acc = self.h.or(acc, va[i * n + j] as usize).unwrap();
                }
                out[i] = acc as u8;
            }
            Ok(self.lift(a, out))
        } else {
            let mut out = vec![bot as u8; n];
            for j in 0..n {
                let mut acc = bot;
                for i in 0..m {
                    acc = self.h.or(acc, va[i * n + j] as usize).unwrap();
                }
                out[j] = acc as u8;
            }
            Ok(self.lift(b, out))
        }
    }

    fn forall_proj(&self, a: &Ob, b: &Ob, keep_first: bool, alpha: &Fib) -> Result<Fib> {
        let (m, n) = (self.points(a, "forall")?, self.points(b, "forall")?);
        let sq = self.cat.product(a, b)?;
        if alpha.ob != sq.ob {
            return Err(Error::Mismatch {
                context: "forall over a product",
                detail: format!("element over {}, product is {}", alpha.ob, sq.ob),
            });
        }
        let va = self.vals(alpha, "forall")?;
        let top = self.h.top;
        if keep_first {
            let mut out = vec![top as u8; m];
            for i in 0..m {
                let mut acc = top;
                for j in 0..n {
                    acc = self.h.and(acc, va[i * n + j] as usize);
                }
                out[i] = acc as u8;
            }
            Ok(self.lift(a, out))
        } else {
            let mut out = vec![top as u8; n];
            for j in 0..n {
                let mut acc = top;
                for i in 0..m {
                    acc = self.h.and(acc, va[i * n + j] as usize);
                }
                out[j] = acc as u8;
            }
            Ok(self.lift(b, out))
        }
    }

    fn comprehension(&self, alpha: &Fib) -> Result<Mor> {
        let va = self.vals(alpha, "comprehension")?;
        let table: Vec<u32> = va
            .iter()
            .enumerate()
            .filter(|(_, &v)| v as usize == self.h.top)
            .map(|(i, _)| i as u32)
            .collect();
        Ok(Mor::map(Ob::Fin(table.len() as u32), alpha.ob.clone(), table))
    }

    fn classifier(&self) -> Result<(Ob, Fib)> {
        let omega = Ob::Fin(self.h.len() as u32);
        let member = self.lift(&omega, (0..self.h.len() as u8).collect());
        Ok((omega, member))
    }

    fn power_classify(&self, a: &Ob, y: &Ob, phi: &Fib) -> Result<Mor> {
        let n = self.points(a, "power classification")?;
        let m = self.points(y, "power classification")?;
        let (pa, _) = self.power_object(a)?;
        let prod = self.cat.product(a, y)?;
        if phi.ob != prod.ob {
            return Err(Error::Mismatch {
                context: "power classification",
                detail: format!("relation over {}, expected {}", phi.ob, prod.ob),
            });
        }
        let vals = self.vals(phi, "power classification")?;
        let k = self.h.len() as u128;
        let mut table = Vec::with_capacity(m);
        for j in 0..m {
            // encode the column over `a` at point j
            let mut code: u128 = 0;
            for i in 0..n {
                code = code * k + vals[i * m + j] as u128;
            }
            table.push(code as u32);
        }
        Ok(Mor::map(y.clone(), pa, table))
    }

    fn power_object(&self, a: &Ob) -> Result<(Ob, Fib)> {
        let n = self.points(a, "power object")?;
        let total = self.fiber_size(a).ok_or(Error::Internal("fibre size overflow".into()))?;
        if total > u32::MAX as u128 {
            return Err(Error::Budget {
                what: "power object carrier",
                need: total,
                budget: u32::MAX as u128,
            });
        }
        let pa = Ob::Fin(total as u32);
        let prod = self.cat.product(a, &pa)?;
        let mut vals = Vec::with_capacity(n * total as usize);
        for i in 0..n {
            for u in 0..total {
                vals.push(self.decode_vector(n, u)[i]);
            }
        }
        Ok((pa, self.lift(&prod.ob, vals)))
    }
}
