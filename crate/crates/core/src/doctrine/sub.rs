//! The subobject doctrine of a finite base with finite limits, tabulated:
//! fibres are posets of monomorphism classes ordered by factorization, with
//! reindexing computed as the largest class whose image factors through the
//! given one (the pullback class, found by order search).

use super::tabulated::{TabulatedDoctrine, TabulatedDoctrineBuilder};
use crate::error::{Error, Result};
use crate::kernel::{self, Cat, Fragment, Mor, Ob};
use alloc::collections::BTreeMap;
use alloc::format;
use alloc::string::ToString;
use alloc::vec::Vec;

/// Is there an arrow `k` with `g ∘ k = f`?
pub(crate) fn factors_through(cat: &Cat, f: &Mor, g: &Mor, hom_budget: usize) -> Result<bool> {
    if f.dst != g.dst {
        return Ok(false);
    }
    for k in cat.hom(&f.src, &g.src, hom_budget)? {
        let gk = cat.compose(g, &k)?;
        if cat.equal_mor(&gk, f) {
            return Ok(true);
        }
    }
    Ok(false)
}

pub(crate) fn class_of(cat: &Cat, reps: &[Mor], m: &Mor, hom_budget: usize) -> Result<usize> {
    for (i, r) in reps.iter().enumerate() {
        if factors_through(cat, m, r, hom_budget)? && factors_through(cat, r, m, hom_budget)? {
            return Ok(i);
        }
    }
    Err(Error::Internal(format!(
        "no class found for {m}; the tabulated fibre is incomplete"
    )))
}

/// Shared tabulation for the subobject and weak-subobject doctrines:
/// `only_monos` selects between genuine subobjects and arbitrary variations
/// (poset reflection of the slices).
pub(crate) fn tabulate_classes(
    label: &str,
    cat: Cat,
    obs: &[Ob],
    only_monos: bool,
    hom_budget: usize,
) -> Result<TabulatedDoctrine> {
    let frag = Fragment {
        size_cap: 0,
        include: obs.to_vec(),
        hom_budget,
        fiber_budget: usize::MAX,
    };
    let mut builder = TabulatedDoctrineBuilder::new(label, cat.clone());
    let mut reps_per: Vec<Vec<Mor>> = Vec::new();
    for a in obs {
        let mut reps: Vec<Mor> = Vec::new();
        for x in obs {
            for m in cat.hom(x, a, hom_budget)? {
                if only_monos && kernel::is_mono(cat.as_ref(), &m, &frag)?.is_err() {
                    continue;
                }
                let mut fresh = true;
                for r in &reps {
                    if factors_through(&cat, &m, r, hom_budget)?
                        && factors_through(&cat, r, &m, hom_budget)?
                    {
                        fresh = false;
                        break;
                    }
                }
                if fresh {
                    reps.push(m);
                }
            }
        }
        let n = reps.len();
        let mut leq = Vec::with_capacity(n * n);
        for i in 0..n {
            for j in 0..n {
                leq.push(factors_through(&cat, &reps[i], &reps[j], hom_budget)?);
            }
        }
        let lattice = crate::lattice::Lattice::from_order(
            reps.iter().map(|r| r.to_string()).collect(),
            leq,
        )
        .map_err(|e| {
            Error::Validation(format!("fibre over {a} is not an inf-semilattice: {e}"))
        })?;
        builder.obs.push(a.clone());
        builder.fibers.push(lattice);
        reps_per.push(reps);
    }

    // reindex tables: f* [m] = largest class [k] with f ∘ rep(k) ≤ [m]
    let mut reindex: BTreeMap<Mor, Vec<usize>> = BTreeMap::new();
    for (bi, b) in obs.iter().enumerate() {
        for (ai, a) in obs.iter().enumerate() {
            for f in cat.hom(b, a, hom_budget)? {
                let mut table = Vec::with_capacity(reps_per[ai].len());
                for m in &reps_per[ai] {
                    let mut cands: Vec<usize> = Vec::new();
                    for (k, r) in reps_per[bi].iter().enumerate() {
                        let fr = cat.compose(&f, r)?;
                        if factors_through(&cat, &fr, m, hom_budget)? {
                            cands.push(k);
                        }
                    }
                    let lat = &builder.fibers[bi];
                    let best = cands
                        .iter()
                        .copied()
                        .find(|&c| cands.iter().all(|&z| lat.le(z, c)))
                        .ok_or_else(|| {
                            Error::Validation(format!(
                                "reindex of {m} along {f} is not determined (no largest class)"
                            ))
                        })?;
                    table.push(best);
                }
                reindex.insert(f, table);
            }
        }
    }
    builder.reindex = reindex;

    // fibred equality: the class of the diagonal, where the square is tabulated
    for (ai, a) in obs.iter().enumerate() {
        let d = match cat.product(a, a) {
            Ok(p) if obs.contains(&p.ob) => {
                let (dm, _) = kernel::diag(cat.as_ref(), a)?;
                let sq_i = obs.iter().position(|o| *o == p.ob).unwrap();
                Some(class_of(&cat, &reps_per[sq_i], &dm, hom_budget)?)
            }
            _ => None,
        };
        builder.diag.push(d);
        let _ = ai;
    }

    // comprehension arrows are the canonical representatives
    for (ai, reps) in reps_per.iter().enumerate() {
        for (ei, r) in reps.iter().enumerate() {
            builder.compr.insert((ai, ei), r.clone());
        }
    }

    builder.build()
}

/// The subobject doctrine over a finite base category with finite limits,
/// tabulated over the given objects (which must be closed under the chosen
/// products for the fibred equalities to materialize).
pub fn sub_doctrine(label: &str, cat: Cat, obs: &[Ob], hom_budget: usize) -> Result<TabulatedDoctrine> {
    tabulate_classes(label, cat, obs, true, hom_budget)
}

/// Alias kept for the doctrine module surface.
pub struct SubDoctrine;

impl SubDoctrine {
    pub fn build(label: &str, cat: Cat, obs: &[Ob], hom_budget: usize) -> Result<TabulatedDoctrine> {
        sub_doctrine(label, cat, obs, hom_budget)
    }
}
