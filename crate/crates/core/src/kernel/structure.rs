//! Helpers built from chosen structure: n-ary products as left-nested
//! binary products, tupling, parallel products of morphisms, swaps and
//! diagonals. Deterministic because the chosen products are.

use super::{CatOps, Mor, Ob, Prod};
use crate::error::{Error, Result};
use alloc::vec::Vec;

/// Left-nested n-ary product `((a1 × a2) × a3) × ...` with composite
/// projections to every factor.
pub fn nary_product(cat: &dyn CatOps, parts: &[Ob]) -> Result<(Ob, Vec<Mor>)> {
    match parts {
        [] => Err(Error::Internal("empty product".into())),
        [a] => Ok((a.clone(), Vec::from([cat.identity(a)]))),
        _ => {
            let (head, mut projs) = nary_product(cat, &parts[..parts.len() - 1])?;
            let last = &parts[parts.len() - 1];
            let p = cat.product(&head, last)?;
            for pr in projs.iter_mut() {
                *pr = cat.compose(pr, &p.pr1)?;
            }
            projs.push(p.pr2);
            Ok((p.ob, projs))
        }
    }
}

/// Tuple `<l1, ..., ln>` into the left-nested product of `parts`. All legs
/// must share a source; `legs[i]` targets `parts[i]`.
pub fn pair_into(cat: &dyn CatOps, parts: &[Ob], legs: &[Mor]) -> Result<Mor> {
    if parts.len() != legs.len() || legs.is_empty() {
        return Err(Error::Internal("tuple arity mismatch".into()));
    }
    let mut acc = legs[0].clone();
    let mut head = parts[0].clone();
    for (part, leg) in parts[1..].iter().zip(&legs[1..]) {
        let p = cat.product(&head, part)?;
        acc = cat.pair(&p, &acc, leg)?;
        head = p.ob;
    }
    Ok(acc)
}

/// `f × g` between the chosen products of the endpoints; also returns both
/// products.
pub struct ProdMor {
    pub mor: Mor,
    pub src: Prod,
    pub dst: Prod,
}

pub fn prod_mor(cat: &dyn CatOps, f: &Mor, g: &Mor) -> Result<ProdMor> {
    let src = cat.product(&f.src, &g.src)?;
    let dst = cat.product(&f.dst, &g.dst)?;
    let l = cat.compose(f, &src.pr1)?;
    let r = cat.compose(g, &src.pr2)?;
    let mor = cat.pair(&dst, &l, &r)?;
    Ok(ProdMor { mor, src, dst })
}

/// `<pr2, pr1> : A × B -> B × A`.
pub fn swap_mor(cat: &dyn CatOps, a: &Ob, b: &Ob) -> Result<Mor> {
    let p = cat.product(a, b)?;
    let q = cat.product(b, a)?;
    cat.pair(&q, &p.pr2, &p.pr1)
}

/// `<id, id> : A -> A × A` together with the chosen square.
pub fn diag(cat: &dyn CatOps, a: &Ob) -> Result<(Mor, Prod)> {
    let p = cat.product(a, a)?;
    let id = cat.identity(a);
    let d = cat.pair(&p, &id, &id)?;
    Ok((d, p))
}
