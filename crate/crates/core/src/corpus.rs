//! Built-in instances: the finite-set base, the pointwise doctrines over a
//! finite value algebra, subobject and weak-subobject doctrines, and the
//! directly built weighted-set and distance-space categories used as
//! independent cross-checks for the completions.
//!
//! The direct categories are deliberately implemented with plain tables —
//! no doctrine machinery — so that the equivalence oracles compare two
//! genuinely different code paths.

use crate::doctrine::{
    sub_doctrine, verify, weaksub_doctrine, Doc, PowerDoctrine, Property, TabulatedDoctrine,
    WeakSubDoctrine,
};
use crate::error::{Error, Result};
use crate::kernel::{Cat, CatOps, Coprod, Data, FinSet, Fragment, Mor, MorData, Ob, PosetCat, Prod, Pullback};
use crate::lattice::{check_frame, Lattice};
use alloc::format;
use alloc::rc::Rc;
use alloc::string::{String, ToString};
use alloc::vec;
use alloc::vec::Vec;

/// A corpus family, addressable from workspace files.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum CorpusSpec {
    /// The lazy finite-set base.
    FinSet,
    /// Pointwise doctrine over a named value algebra.
    Power { frame: Rc<Lattice>, label: String },
    /// Subobject doctrine over the poset category of a lattice.
    SubPoset { lattice: Rc<Lattice>, label: String },
    /// Weak subobjects of the finite-set base.
    WeakSubFinSet,
    /// Weak subobjects of the poset category of a lattice.
    WeakSubPoset { lattice: Rc<Lattice>, label: String },
}

pub fn finset() -> Cat {
    Rc::new(FinSet)
}

pub fn power_doctrine(label: &str, h: Rc<Lattice>) -> Rc<PowerDoctrine> {
    Rc::new(PowerDoctrine::new(label, h))
}

/// Builds a corpus doctrine, validating the declared parameters: a
/// tripos-grade pointwise doctrine requires its algebra to be a frame.
pub fn build(spec: &CorpusSpec) -> Result<Doc> {
    match spec {
        CorpusSpec::FinSet => Err(Error::Validation(
            "the finite-set base is a category, not a doctrine".into(),
        )),
        CorpusSpec::Power { frame, label } => Ok(power_doctrine(label, frame.clone()) as Doc),
        CorpusSpec::SubPoset { lattice, label } => {
            let cat: Cat = Rc::new(PosetCat::new(&format!("{label}.base"), lattice.clone()));
            let obs: Vec<Ob> = (0..lattice.len() as u32).map(Ob::Named).collect();
            Ok(Rc::new(sub_doctrine(label, cat, &obs, 1 << 12)?) as Doc)
        }
        CorpusSpec::WeakSubFinSet => Ok(Rc::new(WeakSubDoctrine::finset()) as Doc),
        CorpusSpec::WeakSubPoset { lattice, label } => {
            let cat: Cat = Rc::new(PosetCat::new(&format!("{label}.base"), lattice.clone()));
            let obs: Vec<Ob> = (0..lattice.len() as u32).map(Ob::Named).collect();
            Ok(Rc::new(weaksub_doctrine(label, cat, &obs, 1 << 12)?) as Doc)
        }
    }
}

/// The capability set a pointwise corpus doctrine advertises, depending on
/// its value algebra. Properties not listed are expected to fail on the
/// default fragments (negative checks included).
pub fn advertised_power_properties(h: &Lattice) -> Vec<Property> {
    let mut out = vec![Property::Primary];
    let frame = check_frame(h).holds();
    if h.bottom.is_some() {
        out.push(Property::Elementary);
        out.push(Property::ComprehensionWeak);
        out.push(Property::ComprehensionStrong);
        out.push(Property::ComprehensiveDiagonals);
    }
    if frame {
        out.extend([
            Property::Existential,
            Property::Implicational,
            Property::Disjunctive,
            Property::Universal,
            Property::FirstOrder,
            Property::WeakClassifier,
            Property::StrongClassifier,
            Property::PowerObjects,
            Property::Tripos,
            // over a finite chain or Boolean algebra every total
            // single-valued relation is forced crisp, so both choice rules
            // hold; see the ledger note on the chain instance
            Property::Ruc,
            Property::Rc,
        ]);
    }
    if h.len() == 2 {
        out.push(Property::Boolean);
        out.push(Property::ComprehensionFull);
    }
    out
}

// ---------------------------------------------------------------------
// direct cross-check categories
// ---------------------------------------------------------------------

fn decode_vectors(k: usize, n: usize) -> Vec<Vec<u8>> {
    let total = (k as u128).pow(n as u32);
    let mut out = Vec::with_capacity(total as usize);
    for mut u in 0..total {
        let mut v = vec![0u8; n];
        for i in (0..n).rev() {
            v[i] = (u % k as u128) as u8;
            u /= k as u128;
        }
        out.push(v);
    }
    out
}

fn tables(m: u32, n: u32, budget: usize) -> Result<Vec<Vec<u32>>> {
    let count = (n as u128).checked_pow(m).unwrap_or(u128::MAX);
    if count > budget as u128 {
        return Err(Error::Budget {
            what: "direct hom enumeration",
            need: count,
            budget: budget as u128,
        });
    }
    if n == 0 {
        return Ok(if m == 0 { vec![vec![]] } else { vec![] });
    }
    let mut out = Vec::new();
    let mut cur = vec![0u32; m as usize];
    loop {
        out.push(cur.clone());
        let mut i = m as usize;
        loop {
            if i == 0 {
                return Ok(out);
            }
            i -= 1;
            if cur[i] + 1 < n {
                cur[i] += 1;
                for v in cur.iter_mut().skip(i + 1) {
                    *v = 0;
                }
                break;
            }
        }
    }
}

/// Weighted finite sets over a value algebra: objects carry one weight per
/// point, morphisms are weight-increasing functions.
pub struct FuzCat {
    pub h: Rc<Lattice>,
    label: String,
}

impl FuzCat {
    pub fn new(label: &str, h: Rc<Lattice>) -> FuzCat {
        FuzCat {
            h,
            label: label.to_string(),
        }
    }

    fn parts<'a>(&self, x: &'a Ob) -> Result<(u32, &'a [u8])> {
        if let Ob::Pred(a, Data::Vals(w)) = x {
            if let Ob::Fin(n) = **a {
                return Ok((n, w));
            }
        }
        Err(Error::Mismatch {
            context: "weighted sets",
            detail: format!("foreign object {x}"),
        })
    }
}

impl CatOps for FuzCat {
    fn name(&self) -> String {
        self.label.clone()
    }

    fn objects(&self, frag: &Fragment) -> Vec<Ob> {
        let mut out = Vec::new();
        for n in 0..=frag.size_cap {
            for w in decode_vectors(self.h.len(), n as usize) {
                out.push(Ob::pred(Ob::Fin(n), Data::Vals(w)));
            }
        }
        for o in &frag.include {
            if !out.contains(o) {
                out.push(o.clone());
            }
        }
        out.sort();
        out.dedup();
        out
    }

    fn carrier(&self, a: &Ob) -> Option<u32> {
        self.parts(a).ok().map(|(n, _)| n)
    }

    fn hom_size(&self, _a: &Ob, _b: &Ob) -> Option<u128> {
        None
    }

    fn hom(&self, a: &Ob, b: &Ob, budget: usize) -> Result<Vec<Mor>> {
        let (m, aw) = self.parts(a)?;
        let (n, bw) = self.parts(b)?;
        let mut out = Vec::new();
        for t in tables(m, n, budget)? {
            if t.iter()
                .enumerate()
                .all(|(i, &j)| self.h.le(aw[i] as usize, bw[j as usize] as usize))
            {
                out.push(Mor::new(a.clone(), b.clone(), MorData::Map(t)));
            }
        }
        Ok(out)
    }

    fn identity(&self, a: &Ob) -> Mor {
        let (n, _) = self.parts(a).expect("identity on a weighted set");
        Mor::new(a.clone(), a.clone(), MorData::Map((0..n).collect()))
    }

    fn compose(&self, g: &Mor, f: &Mor) -> Result<Mor> {
        crate::kernel::require_composable("weighted compose", g, f)?;
        let (tf, tg) = (f.table().unwrap(), g.table().unwrap());
        let t = tf.iter().map(|&x| tg[x as usize]).collect();
        Ok(Mor::new(f.src.clone(), g.dst.clone(), MorData::Map(t)))
    }

    fn terminal(&self) -> Ob {
        Ob::pred(Ob::Fin(1), Data::Vals(vec![self.h.top as u8]))
    }

    fn bang(&self, a: &Ob) -> Mor {
        let (n, _) = self.parts(a).expect("bang on a weighted set");
        Mor::new(a.clone(), self.terminal(), MorData::Map(vec![0; n as usize]))
    }

    fn product(&self, a: &Ob, b: &Ob) -> Result<Prod> {
        let (m, aw) = self.parts(a)?;
        let (n, bw) = self.parts(b)?;
        let mut w = Vec::with_capacity((m * n) as usize);
        let mut t1 = Vec::new();
        let mut t2 = Vec::new();
        for i in 0..m {
            for j in 0..n {
                w.push(self.h.and(aw[i as usize] as usize, bw[j as usize] as usize) as u8);
                t1.push(i);
                t2.push(j);
            }
        }
        let ob = Ob::pred(Ob::Fin(m * n), Data::Vals(w));
        Ok(Prod {
            pr1: Mor::new(ob.clone(), a.clone(), MorData::Map(t1)),
            pr2: Mor::new(ob.clone(), b.clone(), MorData::Map(t2)),
            ob,
        })
    }

    fn pair(&self, p: &Prod, f: &Mor, g: &Mor) -> Result<Mor> {
        let (n, _) = self.parts(&p.pr2.dst)?;
        let (tf, tg) = (f.table().unwrap(), g.table().unwrap());
        let t = tf.iter().zip(tg).map(|(&x, &y)| x * n + y).collect();
        Ok(Mor::new(f.src.clone(), p.ob.clone(), MorData::Map(t)))
    }

    fn pullback(&self, f: &Mor, g: &Mor) -> Result<Pullback> {
        let (_, aw) = self.parts(&f.src)?;
        let (_, bw) = self.parts(&g.src)?;
        let (tf, tg) = (f.table().unwrap(), g.table().unwrap());
        let mut left = Vec::new();
        let mut right = Vec::new();
        let mut w = Vec::new();
        for (i, &fi) in tf.iter().enumerate() {
            for (j, &gj) in tg.iter().enumerate() {
                if fi == gj {
                    left.push(i as u32);
                    right.push(j as u32);
                    w.push(self.h.and(aw[i] as usize, bw[j] as usize) as u8);
                }
            }
        }
        let ob = Ob::pred(Ob::Fin(left.len() as u32), Data::Vals(w));
        Ok(Pullback {
            to_left: Mor::new(ob.clone(), f.src.clone(), MorData::Map(left)),
            to_right: Mor::new(ob.clone(), g.src.clone(), MorData::Map(right)),
            ob,
            weak: false,
        })
    }

    fn pb_mediate(&self, pb: &Pullback, u: &Mor, v: &Mor) -> Result<Mor> {
        let (tl, tr) = (pb.to_left.table().unwrap(), pb.to_right.table().unwrap());
        let (tu, tv) = (u.table().unwrap(), v.table().unwrap());
        let mut t = Vec::with_capacity(tu.len());
        for (x, (&ux, &vx)) in tu.iter().zip(tv).enumerate() {
            let k = (0..tl.len())
                .find(|&k| tl[k] == ux && tr[k] == vx)
                .ok_or_else(|| Error::Mismatch {
                    context: "weighted pullback mediator",
                    detail: format!("cone does not commute at point {x}"),
                })?;
            t.push(k as u32);
        }
        Ok(Mor::new(u.src.clone(), pb.ob.clone(), MorData::Map(t)))
    }

    fn initial(&self) -> Option<Ob> {
        Some(Ob::pred(Ob::Fin(0), Data::Vals(vec![])))
    }

    fn coproduct(&self, a: &Ob, b: &Ob) -> Option<Coprod> {
        let (m, aw) = self.parts(a).ok()?;
        let (n, bw) = self.parts(b).ok()?;
        let mut w = aw.to_vec();
        w.extend_from_slice(bw);
        let ob = Ob::pred(Ob::Fin(m + n), Data::Vals(w));
        Some(Coprod {
            in1: Mor::new(a.clone(), ob.clone(), MorData::Map((0..m).collect())),
            in2: Mor::new(b.clone(), ob.clone(), MorData::Map((m..m + n).collect())),
            ob,
        })
    }

    fn copair(&self, c: &Coprod, f: &Mor, g: &Mor) -> Result<Mor> {
        let mut t: Vec<u32> = f.table().unwrap().to_vec();
        t.extend_from_slice(g.table().unwrap());
        Ok(Mor::new(c.ob.clone(), f.dst.clone(), MorData::Map(t)))
    }
}

/// Separated distance spaces over a value algebra: objects carry a
/// reflexive symmetric transitive distance table with no two points at the
/// top distance, morphisms are distance-increasing functions.
pub struct UmCat {
    pub h: Rc<Lattice>,
    label: String,
}

impl UmCat {
    pub fn new(label: &str, h: Rc<Lattice>) -> UmCat {
        UmCat {
            h,
            label: label.to_string(),
        }
    }

    fn parts<'a>(&self, x: &'a Ob) -> Result<(u32, &'a [u8])> {
        if let Ob::Rel(a, Data::Vals(d)) = x {
            if let Ob::Fin(n) = **a {
                return Ok((n, d));
            }
        }
        Err(Error::Mismatch {
            context: "distance spaces",
            detail: format!("foreign object {x}"),
        })
    }

    /// Reflexive at the top, symmetric, transitive, separated.
    pub fn is_valid_object(&self, n: usize, d: &[u8]) -> bool {
        let h = &self.h;
        let at = |i: usize, j: usize| d[i * n + j] as usize;
        for i in 0..n {
            if at(i, i) != h.top {
                return false;
            }
            for j in 0..n {
                if at(i, j) != at(j, i) {
                    return false;
                }
                if i != j && at(i, j) == h.top {
                    return false;
                }
                for k in 0..n {
                    if !h.le(h.and(at(i, j), at(j, k)), at(i, k)) {
                        return false;
                    }
                }
            }
        }
        true
    }
}

impl CatOps for UmCat {
    fn name(&self) -> String {
        self.label.clone()
    }

    fn objects(&self, frag: &Fragment) -> Vec<Ob> {
        let mut out = Vec::new();
        for n in 0..=frag.size_cap {
            for d in decode_vectors(self.h.len(), (n * n) as usize) {
                if self.is_valid_object(n as usize, &d) {
                    out.push(Ob::rel(Ob::Fin(n), Data::Vals(d)));
                }
            }
        }
        for o in &frag.include {
            if !out.contains(o) {
                out.push(o.clone());
            }
        }
        out.sort();
        out.dedup();
        out
    }

    fn carrier(&self, a: &Ob) -> Option<u32> {
        self.parts(a).ok().map(|(n, _)| n)
    }

    fn hom_size(&self, _a: &Ob, _b: &Ob) -> Option<u128> {
        None
    }

    fn hom(&self, a: &Ob, b: &Ob, budget: usize) -> Result<Vec<Mor>> {
        let (m, ad) = self.parts(a)?;
        let (n, bd) = self.parts(b)?;
        let mut out = Vec::new();
        for t in tables(m, n, budget)? {
            let ok = (0..m as usize).all(|i| {
                (0..m as usize).all(|j| {
                    self.h.le(
                        ad[i * m as usize + j] as usize,
                        bd[t[i] as usize * n as usize + t[j] as usize] as usize,
                    )
                })
            });
            if ok {
                out.push(Mor::new(a.clone(), b.clone(), MorData::Map(t)));
            }
        }
        Ok(out)
    }

    fn identity(&self, a: &Ob) -> Mor {
        let (n, _) = self.parts(a).expect("identity on a distance space");
        Mor::new(a.clone(), a.clone(), MorData::Map((0..n).collect()))
    }

    fn compose(&self, g: &Mor, f: &Mor) -> Result<Mor> {
        crate::kernel::require_composable("distance compose", g, f)?;
        let (tf, tg) = (f.table().unwrap(), g.table().unwrap());
        let t = tf.iter().map(|&x| tg[x as usize]).collect();
        Ok(Mor::new(f.src.clone(), g.dst.clone(), MorData::Map(t)))
    }

    fn terminal(&self) -> Ob {
        Ob::rel(Ob::Fin(1), Data::Vals(vec![self.h.top as u8]))
    }

    fn bang(&self, a: &Ob) -> Mor {
        let (n, _) = self.parts(a).expect("bang on a distance space");
        Mor::new(a.clone(), self.terminal(), MorData::Map(vec![0; n as usize]))
    }

    fn product(&self, a: &Ob, b: &Ob) -> Result<Prod> {
        let (m, ad) = self.parts(a)?;
        let (n, bd) = self.parts(b)?;
        let size = (m * n) as usize;
        let mut d = vec![0u8; size * size];
        for i1 in 0..m as usize {
            for j1 in 0..n as usize {
                for i2 in 0..m as usize {
                    for j2 in 0..n as usize {
                        let p = i1 * n as usize + j1;
                        let q = i2 * n as usize + j2;
                        d[p * size + q] = self
                            .h
                            .and(ad[i1 * m as usize + i2] as usize, bd[j1 * n as usize + j2] as usize)
                            as u8;
                    }
                }
            }
        }
        let mut t1 = Vec::new();
        let mut t2 = Vec::new();
        for i in 0..m {
            for j in 0..n {
                t1.push(i);
                t2.push(j);
            }
        }
        let ob = Ob::rel(Ob::Fin(m * n), Data::Vals(d));
        Ok(Prod {
            pr1: Mor::new(ob.clone(), a.clone(), MorData::Map(t1)),
            pr2: Mor::new(ob.clone(), b.clone(), MorData::Map(t2)),
            ob,
        })
    }

    fn pair(&self, p: &Prod, f: &Mor, g: &Mor) -> Result<Mor> {
        let (n, _) = self.parts(&p.pr2.dst)?;
        let (tf, tg) = (f.table().unwrap(), g.table().unwrap());
        let t = tf.iter().zip(tg).map(|(&x, &y)| x * n + y).collect();
        Ok(Mor::new(f.src.clone(), p.ob.clone(), MorData::Map(t)))
    }

    fn pullback(&self, _f: &Mor, _g: &Mor) -> Result<Pullback> {
        Err(Error::MissingStructure("pullbacks in the direct distance category"))
    }

    fn pb_mediate(&self, _pb: &Pullback, _u: &Mor, _v: &Mor) -> Result<Mor> {
        Err(Error::MissingStructure("pullbacks in the direct distance category"))
    }
}

/// Distance spaces with possibly partial membership: symmetric transitive
/// tables (the diagonal is the membership weight), morphisms are
/// distance-increasing functions identified when they agree up to the
/// source membership.
pub struct FuzUmCat {
    pub h: Rc<Lattice>,
    label: String,
}

impl FuzUmCat {
    pub fn new(label: &str, h: Rc<Lattice>) -> FuzUmCat {
        FuzUmCat {
            h,
            label: label.to_string(),
        }
    }

    fn parts<'a>(&self, x: &'a Ob) -> Result<(u32, &'a [u8])> {
        if let Ob::Rel(a, Data::Vals(d)) = x {
            if let Ob::Fin(n) = **a {
                return Ok((n, d));
            }
        }
        Err(Error::Mismatch {
            context: "partial distance spaces",
            detail: format!("foreign object {x}"),
        })
    }

    /// Symmetric and transitive; the diagonal is free.
    pub fn is_valid_object(&self, n: usize, d: &[u8]) -> bool {
        let h = &self.h;
        let at = |i: usize, j: usize| d[i * n + j] as usize;
        for i in 0..n {
            for j in 0..n {
                if at(i, j) != at(j, i) {
                    return false;
                }
                for k in 0..n {
                    if !h.le(h.and(at(i, j), at(j, k)), at(i, k)) {
                        return false;
                    }
                }
            }
        }
        true
    }

    fn agrees(&self, src_d: &[u8], m: u32, dst_d: &[u8], n: u32, f: &[u32], g: &[u32]) -> bool {
        (0..m as usize).all(|i| {
            self.h.le(
                src_d[i * m as usize + i] as usize,
                dst_d[f[i] as usize * n as usize + g[i] as usize] as usize,
            )
        })
    }
}

impl CatOps for FuzUmCat {
    fn name(&self) -> String {
        self.label.clone()
    }

    fn objects(&self, frag: &Fragment) -> Vec<Ob> {
        let mut out = Vec::new();
        for n in 0..=frag.size_cap {
            for d in decode_vectors(self.h.len(), (n * n) as usize) {
                if self.is_valid_object(n as usize, &d) {
                    out.push(Ob::rel(Ob::Fin(n), Data::Vals(d)));
                }
            }
        }
        for o in &frag.include {
            if !out.contains(o) {
                out.push(o.clone());
            }
        }
        out.sort();
        out.dedup();
        out
    }

    fn carrier(&self, a: &Ob) -> Option<u32> {
        self.parts(a).ok().map(|(n, _)| n)
    }

    fn hom_size(&self, _a: &Ob, _b: &Ob) -> Option<u128> {
        None
    }

    fn hom(&self, a: &Ob, b: &Ob, budget: usize) -> Result<Vec<Mor>> {
        let (m, ad) = self.parts(a)?;
        let (n, bd) = self.parts(b)?;
        let mut reps: Vec<Vec<u32>> = Vec::new();
        for t in tables(m, n, budget)? {
            let ok = (0..m as usize).all(|i| {
                (0..m as usize).all(|j| {
                    self.h.le(
                        ad[i * m as usize + j] as usize,
                        bd[t[i] as usize * n as usize + t[j] as usize] as usize,
                    )
                })
            });
            if !ok {
                continue;
            }
            if !reps.iter().any(|r| self.agrees(ad, m, bd, n, r, &t)) {
                reps.push(t);
            }
        }
        Ok(reps
            .into_iter()
            .map(|t| Mor::new(a.clone(), b.clone(), MorData::Map(t)))
            .collect())
    }

    fn identity(&self, a: &Ob) -> Mor {
        let (n, _) = self.parts(a).expect("identity on a partial distance space");
        Mor::new(a.clone(), a.clone(), MorData::Map((0..n).collect()))
    }

    fn compose(&self, g: &Mor, f: &Mor) -> Result<Mor> {
        crate::kernel::require_composable("partial distance compose", g, f)?;
        let (tf, tg) = (f.table().unwrap(), g.table().unwrap());
        let t = tf.iter().map(|&x| tg[x as usize]).collect();
        Ok(Mor::new(f.src.clone(), g.dst.clone(), MorData::Map(t)))
    }

    fn equal_mor(&self, f: &Mor, g: &Mor) -> bool {
        if f.src != g.src || f.dst != g.dst {
            return false;
        }
        let Ok((m, ad)) = self.parts(&f.src) else {
            return false;
        };
        let Ok((n, bd)) = self.parts(&f.dst) else {
            return false;
        };
        self.agrees(ad, m, bd, n, f.table().unwrap(), g.table().unwrap())
    }

    fn terminal(&self) -> Ob {
        Ob::rel(Ob::Fin(1), Data::Vals(vec![self.h.top as u8]))
    }

    fn bang(&self, a: &Ob) -> Mor {
        let (n, _) = self.parts(a).expect("bang on a partial distance space");
        Mor::new(a.clone(), self.terminal(), MorData::Map(vec![0; n as usize]))
    }

    fn product(&self, a: &Ob, b: &Ob) -> Result<Prod> {
        // same carrier construction as for total distance spaces
        let (m, ad) = self.parts(a)?;
        let (n, bd) = self.parts(b)?;
        let size = (m * n) as usize;
        let mut d = vec![0u8; size * size];
        for i1 in 0..m as usize {
            for j1 in 0..n as usize {
                for i2 in 0..m as usize {
                    for j2 in 0..n as usize {
                        let p = i1 * n as usize + j1;
                        let q = i2 * n as usize + j2;
                        d[p * size + q] = self
                            .h
                            .and(ad[i1 * m as usize + i2] as usize, bd[j1 * n as usize + j2] as usize)
                            as u8;
                    }
                }
            }
        }
        let mut t1 = Vec::new();
        let mut t2 = Vec::new();
        for i in 0..m {
            for j in 0..n {
                t1.push(i);
                t2.push(j);
            }
        }
        let ob = Ob::rel(Ob::Fin(m * n), Data::Vals(d));
        Ok(Prod {
            pr1: Mor::new(ob.clone(), a.clone(), MorData::Map(t1)),
            pr2: Mor::new(ob.clone(), b.clone(), MorData::Map(t2)),
            ob,
        })
    }

    fn pair(&self, p: &Prod, f: &Mor, g: &Mor) -> Result<Mor> {
        let (n, _) = self.parts(&p.pr2.dst)?;
        let (tf, tg) = (f.table().unwrap(), g.table().unwrap());
        let t = tf.iter().zip(tg).map(|(&x, &y)| x * n + y).collect();
        Ok(Mor::new(f.src.clone(), p.ob.clone(), MorData::Map(t)))
    }

    fn pullback(&self, _f: &Mor, _g: &Mor) -> Result<Pullback> {
        Err(Error::MissingStructure("pullbacks in the direct partial distance category"))
    }

    fn pb_mediate(&self, _pb: &Pullback, _u: &Mor, _v: &Mor) -> Result<Mor> {
        Err(Error::MissingStructure("pullbacks in the direct partial distance category"))
    }
}

/// Tabulated weak-subobject doctrine over a finite base, re-exported here
/// for corpus addressing.
pub fn weaksub_over(label: &str, cat: Cat, obs: &[Ob], hom_budget: usize) -> Result<TabulatedDoctrine> {
    weaksub_doctrine(label, cat, obs, hom_budget)
}

/// Default corpus verification fragments, used by the acceptance suite.
pub fn default_fragment(family: &str) -> Fragment {
    match family {
        "p2" => Fragment::sized(3).with_budgets(1 << 16, 1 << 16),
        _ => Fragment::sized(2).with_budgets(1 << 16, 1 << 16),
    }
}

/// Convenience: run the advertised-capability matrix for a pointwise
/// doctrine and return the failures.
pub fn capability_matrix(d: &Doc, h: &Lattice, frag: &Fragment) -> Vec<(Property, bool, bool)> {
    let advertised = advertised_power_properties(h);
    let mut out = Vec::new();
    for p in crate::doctrine::ALL_PROPERTIES {
        if matches!(
            p,
            Property::QuotientsEffective | Property::QuotientsStable | Property::QuotientsDescent
        ) {
            continue;
        }
        let expected = advertised.contains(p);
        let got = verify(d.as_ref(), *p, frag).holds();
        out.push((*p, expected, got));
    }
    out
}
