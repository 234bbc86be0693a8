//! The lazy base of canonical finite sets: objects are carrier sizes with
//! points `0..n`, morphisms are function tables. Chosen products are
//! lexicographic pairings, so every derived equality and relation table is
//! deterministic.

use super::{CatOps, Coprod, Data, Fragment, Mor, Ob, Prod, Pullback, SliceExp};
use crate::error::{Error, Result};
use alloc::format;
use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;

#[derive(Debug, Default, Clone)]
pub struct FinSet;

impl FinSet {
    fn size(&self, a: &Ob, context: &'static str) -> Result<u32> {
        a.fin_size().ok_or_else(|| Error::Mismatch {
            context,
            detail: format!("expected a finite-set object, found {a}"),
        })
    }
}

fn tables(src: u32, dst: u32, budget: usize) -> Result<Vec<Mor>> {
    let count = (dst as u128).checked_pow(src).unwrap_or(u128::MAX);
    if count > budget as u128 {
        return Err(Error::Budget {
            what: "finite-set hom enumeration",
            need: count,
            budget: budget as u128,
        });
    }
    if dst == 0 && src > 0 {
        return Ok(vec![]);
    }
    let mut out = Vec::with_capacity(count as usize);
    let mut cur = vec![0u32; src as usize];
    loop {
        out.push(Mor::map(Ob::Fin(src), Ob::Fin(dst), cur.clone()));
        // lexicographic successor, most significant digit first
        let mut i = src as usize;
        loop {
            if i == 0 {
                return Ok(out);
            }
            i -= 1;
            if cur[i] + 1 < dst {
                cur[i] += 1;
                for v in cur.iter_mut().skip(i + 1) {
                    *v = 0;
                }
                break;
            }
        }
    }
}

impl CatOps for FinSet {
    fn name(&self) -> String {
        String::from("finset")
    }

    fn objects(&self, frag: &Fragment) -> Vec<Ob> {
        let mut out: Vec<Ob> = (0..=frag.size_cap).map(Ob::Fin).collect();
        for o in &frag.include {
            if !out.contains(o) {
                out.push(o.clone());
            }
        }
        out.sort();
        out.dedup();
        out
    }

    fn hom_size(&self, a: &Ob, b: &Ob) -> Option<u128> {
        let (m, n) = (a.fin_size()?, b.fin_size()?);
        if n == 0 {
            return Some(if m == 0 { 1 } else { 0 });
        }
        Some((n as u128).checked_pow(m).unwrap_or(u128::MAX))
    }

    fn hom(&self, a: &Ob, b: &Ob, budget: usize) -> Result<Vec<Mor>> {
        let m = self.size(a, "finset hom")?;
        let n = self.size(b, "finset hom")?;
        tables(m, n, budget)
    }

    fn identity(&self, a: &Ob) -> Mor {
        let n = a.fin_size().expect("finset identity on a finite set");
        Mor::map(a.clone(), a.clone(), (0..n).collect())
    }

    fn compose(&self, g: &Mor, f: &Mor) -> Result<Mor> {
        super::require_composable("finset compose", g, f)?;
        let (tf, tg) = (
            f.table().ok_or_else(|| Error::Mismatch {
                context: "finset compose",
                detail: format!("not a table morphism: {}", f.data),
            })?,
            g.table().ok_or_else(|| Error::Mismatch {
                context: "finset compose",
                detail: format!("not a table morphism: {}", g.data),
            })?,
        );
        let table = tf.iter().map(|&x| tg[x as usize]).collect();
        Ok(Mor::map(f.src.clone(), g.dst.clone(), table))
    }

    fn terminal(&self) -> Ob {
        Ob::Fin(1)
    }

    fn bang(&self, a: &Ob) -> Mor {
        let n = a.fin_size().expect("finset bang on a finite set");
        Mor::map(a.clone(), Ob::Fin(1), vec![0; n as usize])
    }

    fn product(&self, a: &Ob, b: &Ob) -> Result<Prod> {
        let m = self.size(a, "finset product")?;
        let n = self.size(b, "finset product")?;
        let ob = Ob::Fin(m * n);
        let mut t1 = Vec::with_capacity((m * n) as usize);
        let mut t2 = Vec::with_capacity((m * n) as usize);
        for i in 0..m {
            for j in 0..n {
                t1.push(i);
                t2.push(j);
            }
        }
        Ok(Prod {
            pr1: Mor::map(ob.clone(), a.clone(), t1),
            pr2: Mor::map(ob.clone(), b.clone(), t2),
            ob,
        })
    }

    fn pair(&self, p: &Prod, f: &Mor, g: &Mor) -> Result<Mor> {
        if f.src != g.src || f.dst != p.pr1.dst || g.dst != p.pr2.dst {
            return Err(Error::Mismatch {
                context: "finset pair",
                detail: format!("cone ({f}, {g}) does not match product {}", p.ob),
            });
        }
        let n = self.size(&p.pr2.dst, "finset pair")?;
        let (tf, tg) = (f.table().unwrap(), g.table().unwrap());
        let table = tf.iter().zip(tg).map(|(&x, &y)| x * n + y).collect();
        Ok(Mor::map(f.src.clone(), p.ob.clone(), table))
    }

    fn pullback(&self, f: &Mor, g: &Mor) -> Result<Pullback> {
        if f.dst != g.dst {
            return Err(Error::Mismatch {
                context: "finset pullback",
                detail: format!("cospan mismatch: {} vs {}", f.dst, g.dst),
            });
        }
        let (tf, tg) = (f.table().unwrap(), g.table().unwrap());
        let mut left = Vec::new();
        let mut right = Vec::new();
        for (i, &fi) in tf.iter().enumerate() {
            for (j, &gj) in tg.iter().enumerate() {
                if fi == gj {
                    left.push(i as u32);
                    right.push(j as u32);
                }
            }
        }
        let ob = Ob::Fin(left.len() as u32);
        Ok(Pullback {
            to_left: Mor::map(ob.clone(), f.src.clone(), left),
            to_right: Mor::map(ob.clone(), g.src.clone(), right),
            ob,
            weak: false,
        })
    }

    fn pb_mediate(&self, pb: &Pullback, u: &Mor, v: &Mor) -> Result<Mor> {
        let (tl, tr) = (pb.to_left.table().unwrap(), pb.to_right.table().unwrap());
        let (tu, tv) = (
            u.table().ok_or_else(|| Error::Mismatch {
                context: "finset pullback mediator",
                detail: format!("not a table morphism: {}", u.data),
            })?,
            v.table().unwrap(),
        );
        let mut table = Vec::with_capacity(tu.len());
        for (x, (&ux, &vx)) in tu.iter().zip(tv).enumerate() {
            let k = (0..tl.len())
                .find(|&k| tl[k] == ux && tr[k] == vx)
                .ok_or_else(|| Error::Mismatch {
                    context: "finset pullback mediator",
                    detail: format!("cone does not commute at point {x}"),
                })?;
            table.push(k as u32);
        }
        Ok(Mor::map(u.src.clone(), pb.ob.clone(), table))
    }

    fn initial(&self) -> Option<Ob> {
        Some(Ob::Fin(0))
    }

    fn coproduct(&self, a: &Ob, b: &Ob) -> Option<Coprod> {
        let m = a.fin_size()?;
        let n = b.fin_size()?;
        let ob = Ob::Fin(m + n);
        Some(Coprod {
            in1: Mor::map(a.clone(), ob.clone(), (0..m).collect()),
            in2: Mor::map(b.clone(), ob.clone(), (m..m + n).collect()),
            ob,
        })
    }

    fn copair(&self, c: &Coprod, f: &Mor, g: &Mor) -> Result<Mor> {
        if f.dst != g.dst || f.src != c.in1.src || g.src != c.in2.src {
            return Err(Error::Mismatch {
                context: "finset copair",
                detail: format!("cocone ({f}, {g}) does not match coproduct {}", c.ob),
            });
        }
        let mut table: Vec<u32> = f.table().unwrap().to_vec();
        table.extend_from_slice(g.table().unwrap());
        Ok(Mor::map(c.ob.clone(), f.dst.clone(), table))
    }

    /// Genuine slice exponentials: over each point `a` of the common
    /// codomain, all maps from the `f`-fibre to the `g`-fibre.
    fn slice_weak_exp(&self, f: &Mor, g: &Mor) -> Option<SliceExp> {
        if f.dst != g.dst {
            return None;
        }
        let a_size = f.dst.fin_size()?;
        let (tf, tg) = (f.table()?, g.table()?);
        let fib = |t: &[u32], a: u32| -> Vec<u32> {
            t.iter()
                .enumerate()
                .filter(|(_, &v)| v == a)
                .map(|(i, _)| i as u32)
                .collect()
        };
        // Enumerate (a, assignment) pairs in lexicographic order.
        let mut w_anchor: Vec<u32> = Vec::new(); // q table
        let mut w_assign: Vec<Vec<u32>> = Vec::new(); // per w-point: f-fibre -> point of dom g
        for a in 0..a_size {
            let fa = fib(tf, a);
            let ga = fib(tg, a);
            if fa.is_empty() {
                // exactly one empty assignment
                w_anchor.push(a);
                w_assign.push(vec![]);
                continue;
            }
            if ga.is_empty() {
                continue; // no maps from a nonempty fibre into an empty one
            }
            let mut idx = vec![0usize; fa.len()];
            loop {
                w_anchor.push(a);
                w_assign.push(idx.iter().map(|&k| ga[k]).collect());
                let mut i = fa.len();
                let mut done = true;
                while i > 0 {
                    i -= 1;
                    if idx[i] + 1 < ga.len() {
                        idx[i] += 1;
                        for v in idx.iter_mut().skip(i + 1) {
                            *v = 0;
                        }
                        done = false;
                        break;
                    }
                }
                if done {
                    break;
                }
            }
        }
        let w = Ob::Fin(w_anchor.len() as u32);
        let q = Mor::map(w.clone(), f.dst.clone(), w_anchor.clone());
        let pb = self.pullback(f, &q).ok()?;
        let tl = pb.to_left.table()?;
        let tr = pb.to_right.table()?;
        let mut eval = Vec::with_capacity(tl.len());
        for k in 0..tl.len() {
            let b = tl[k]; // point of dom f
            let wpt = tr[k] as usize;
            let a = w_anchor[wpt];
            let fa = fib(tf, a);
            let pos = fa.iter().position(|&x| x == b)?;
            eval.push(w_assign[wpt][pos]);
        }
        Some(SliceExp {
            z: pb.ob.clone(),
            z_to_dom_f: pb.to_left.clone(),
            z_to_w: pb.to_right.clone(),
            eval: Mor::map(pb.ob.clone(), g.src.clone(), eval),
            w,
            q,
        })
    }
}

/// Decodes the payload of a pointwise fibre element over a finite carrier.
pub fn vals(d: &Data) -> Option<&[u8]> {
    match d {
        Data::Vals(v) => Some(v),
        _ => None,
    }
}
