//! Finite inf-semilattices with optional Heyting/frame structure. These
//! serve both as the value algebras parameterizing the pointwise doctrines
//! and as tabulated fibres of presented doctrines. All structure is
//! tabulated and validated once at load; elements are indexed densely in
//! load order.

use crate::error::{Error, Result};
use crate::oracle::{Cx, Verdict};
use alloc::format;
use alloc::string::{String, ToString};
use alloc::vec;
use alloc::vec::Vec;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Lattice {
    pub names: Vec<String>,
    /// row-major `n × n` order table
    pub leq: Vec<bool>,
    pub top: usize,
    /// row-major binary meet table
    pub meet: Vec<usize>,
    pub bottom: Option<usize>,
    pub join: Option<Vec<usize>>,
    pub implies: Option<Vec<usize>>,
}

impl Lattice {
    pub fn len(&self) -> usize {
        self.names.len()
    }

    pub fn is_empty(&self) -> bool {
        self.names.is_empty()
    }

    #[inline]
    pub fn le(&self, x: usize, y: usize) -> bool {
        self.leq[x * self.len() + y]
    }

    #[inline]
    pub fn and(&self, x: usize, y: usize) -> usize {
        self.meet[x * self.len() + y]
    }

    pub fn or(&self, x: usize, y: usize) -> Option<usize> {
        Some(self.join.as_ref()?[x * self.len() + y])
    }

    pub fn imp(&self, x: usize, y: usize) -> Option<usize> {
        Some(self.implies.as_ref()?[x * self.len() + y])
    }

    pub fn not(&self, x: usize) -> Option<usize> {
        self.imp(x, self.bottom?)
    }

    /// Builds a lattice from an order table alone, deriving whatever
    /// operation tables are uniquely determined; rejects the input when a
    /// required table (meet, top) cannot be derived.
    pub fn from_order(names: Vec<String>, leq: Vec<bool>) -> Result<Lattice> {
        let n = names.len();
        if n == 0 {
            return Err(Error::Validation("empty lattice".into()));
        }
        if leq.len() != n * n {
            return Err(Error::Validation("order table has wrong shape".into()));
        }
        let le = |x: usize, y: usize| leq[x * n + y];
        for x in 0..n {
            if !le(x, x) {
                return Err(Error::Validation(format!("order not reflexive at `{}`", names[x])));
            }
            for y in 0..n {
                if le(x, y) && le(y, x) && x != y {
                    return Err(Error::Validation(format!(
                        "order not antisymmetric on `{}`, `{}`",
                        names[x], names[y]
                    )));
                }
                for z in 0..n {
                    if le(x, y) && le(y, z) && !le(x, z) {
                        return Err(Error::Validation(format!(
                            "order not transitive on `{}`, `{}`, `{}`",
                            names[x], names[y], names[z]
                        )));
                    }
                }
            }
        }
        let top = (0..n)
            .find(|&t| (0..n).all(|x| le(x, t)))
            .ok_or_else(|| Error::Validation("no top element".into()))?;
        let bottom = (0..n).find(|&b| (0..n).all(|x| le(b, x)));
        let glb = |x: usize, y: usize| -> Option<usize> {
            let lower: Vec<usize> = (0..n).filter(|&z| le(z, x) && le(z, y)).collect();
            lower
                .iter()
                .copied()
                .find(|&m| lower.iter().all(|&z| le(z, m)))
        };
        let lub = |x: usize, y: usize| -> Option<usize> {
            let upper: Vec<usize> = (0..n).filter(|&z| le(x, z) && le(y, z)).collect();
            upper
                .iter()
                .copied()
                .find(|&j| upper.iter().all(|&z| le(j, z)))
        };
        let mut meet = Vec::with_capacity(n * n);
        for x in 0..n {
            for y in 0..n {
                meet.push(glb(x, y).ok_or_else(|| {
                    Error::Validation(format!(
                        "meet of `{}` and `{}` is not determined",
                        names[x], names[y]
                    ))
                })?);
            }
        }
        let join: Option<Vec<usize>> = {
            let mut t = Vec::with_capacity(n * n);
            let mut all = true;
            'outer: for x in 0..n {
                for y in 0..n {
                    match lub(x, y) {
                        Some(j) => t.push(j),
                        None => {
                            all = false;
                            break 'outer;
                        }
                    }
                }
            }
            all.then_some(t)
        };
        // relative pseudo-complement: largest z with z ∧ x ≤ y
        let implies: Option<Vec<usize>> = {
            let mut t = Vec::with_capacity(n * n);
            let mut all = true;
            'outer: for x in 0..n {
                for y in 0..n {
                    let cands: Vec<usize> = (0..n)
                        .filter(|&z| le(meet[z * n + x], y))
                        .collect();
                    match cands.iter().copied().find(|&m| cands.iter().all(|&z| le(z, m))) {
                        Some(m) => t.push(m),
                        None => {
                            all = false;
                            break 'outer;
                        }
                    }
                }
            }
            all.then_some(t)
        };
        Ok(Lattice {
            names,
            leq,
            top,
            meet,
            bottom,
            join,
            implies,
        })
    }

    /// The two-element Boolean algebra `0 < 1`.
    pub fn bool2() -> Lattice {
        Lattice::chain(2)
    }

    /// The chain `0 < h1 < ... < 1`; for length 3 the middle element is
    /// named `h`.
    pub fn chain(n: usize) -> Lattice {
        assert!(n >= 1);
        let names: Vec<String> = match n {
            1 => vec!["1".into()],
            2 => vec!["0".into(), "1".into()],
            3 => vec!["0".into(), "h".into(), "1".into()],
            _ => (0..n)
                .map(|i| {
                    if i == 0 {
                        "0".to_string()
                    } else if i == n - 1 {
                        "1".to_string()
                    } else {
                        format!("h{i}")
                    }
                })
                .collect(),
        };
        let mut leq = vec![false; n * n];
        for x in 0..n {
            for y in x..n {
                leq[x * n + y] = true;
            }
        }
        Lattice::from_order(names, leq).expect("chains are lattices")
    }

    /// The five-element modular non-distributive lattice: bottom, three
    /// incomparable atoms, top.
    pub fn m3() -> Lattice {
        let names: Vec<String> = ["0", "a", "b", "c", "1"].iter().map(|s| s.to_string()).collect();
        let n = 5;
        let mut leq = vec![false; n * n];
        for x in 0..n {
            leq[x * n + x] = true;
            leq[x * n + 4] = true;
            leq[0 * n + x] = true;
        }
        Lattice::from_order(names, leq).expect("M3 is a lattice")
    }

    /// Validates that the stored tables satisfy the inf-semilattice laws and
    /// whatever optional laws their presence promises.
    pub fn validate(&self) -> Result<()> {
        let n = self.len();
        let reference = Lattice::from_order(self.names.clone(), self.leq.clone())?;
        if reference.top != self.top {
            return Err(Error::Validation("declared top is not the maximum".into()));
        }
        if reference.meet != self.meet {
            return Err(Error::Validation("meet table disagrees with greatest lower bounds".into()));
        }
        if let Some(b) = self.bottom {
            if reference.bottom != Some(b) {
                return Err(Error::Validation("declared bottom is not the minimum".into()));
            }
        }
        if let Some(j) = &self.join {
            if reference.join.as_ref() != Some(j) {
                return Err(Error::Validation("join table disagrees with least upper bounds".into()));
            }
        }
        if let Some(im) = &self.implies {
            for x in 0..n {
                for y in 0..n {
                    for z in 0..n {
                        let lhs = self.le(self.and(z, x), y);
                        let rhs = self.le(z, im[x * n + y]);
                        if lhs != rhs {
                            return Err(Error::Validation(format!(
                                "implication law broken on (`{}`, `{}`, `{}`)",
                                self.names[x], self.names[y], self.names[z]
                            )));
                        }
                    }
                }
            }
        }
        Ok(())
    }
}

/// Heyting check: bottom plus a relative pseudo-complement for every pair;
/// returns the first pair without one.
pub fn check_heyting(l: &Lattice) -> Verdict {
    if l.bottom.is_none() {
        return Verdict::fails(Cx::one("reason", "no bottom element"));
    }
    if l.join.is_none() {
        return Verdict::fails(Cx::one("reason", "no join table (finite Heyting algebras have joins)"));
    }
    match &l.implies {
        Some(_) => Verdict::Holds,
        None => {
            for x in 0..l.len() {
                for y in 0..l.len() {
                    let cands: Vec<usize> =
                        (0..l.len()).filter(|&z| l.le(l.and(z, x), y)).collect();
                    if !cands.iter().any(|&m| cands.iter().all(|&z| l.le(z, m))) {
                        return Verdict::fails(Cx::pairs(&[
                            ("x", l.names[x].clone()),
                            ("y", l.names[y].clone()),
                            ("reason", "no relative pseudo-complement".into()),
                        ]));
                    }
                }
            }
            Verdict::Holds
        }
    }
}

/// Frame check at finite scale: binary meets distribute over binary joins.
/// Returns the offending triple on failure.
pub fn check_frame(l: &Lattice) -> Verdict {
    let Some(join) = &l.join else {
        return Verdict::fails(Cx::one("reason", "no joins"));
    };
    if l.bottom.is_none() {
        return Verdict::fails(Cx::one("reason", "no bottom element"));
    }
    let n = l.len();
    for x in 0..n {
        for y in 0..n {
            for z in 0..n {
                let lhs = l.and(x, join[y * n + z]);
                let rhs = join[l.and(x, y) * n + l.and(x, z)];
                if lhs != rhs {
                    return Verdict::fails(Cx::pairs(&[
                        ("x", l.names[x].clone()),
                        ("y", l.names[y].clone()),
                        ("z", l.names[z].clone()),
                        ("x/\\(y\\/z)", l.names[lhs].clone()),
                        ("(x/\\y)\\/(x/\\z)", l.names[rhs].clone()),
                    ]));
                }
            }
        }
    }
    Verdict::Holds
}

/// The four Heyting operations at once, erroring when a table is absent.
pub fn heyting_ops(l: &Lattice, x: usize, y: usize) -> Result<(usize, usize, usize, usize)> {
    let join = l.or(x, y).ok_or(Error::MissingCapability("joins"))?;
    let imp = l.imp(x, y).ok_or(Error::MissingCapability("implication"))?;
    let neg = l.not(x).ok_or(Error::MissingCapability("negation (bottom + implication)"))?;
    Ok((l.and(x, y), join, imp, neg))
}

/// A table-presented monotone map between lattices that preserves finite
/// meets (top and binary meets); validated exhaustively.
#[derive(Debug, Clone)]
pub struct MonotoneMeetMap {
    pub table: Vec<usize>,
}

impl MonotoneMeetMap {
    pub fn validate(&self, src: &Lattice, dst: &Lattice) -> Result<()> {
        if self.table.len() != src.len() {
            return Err(Error::Validation("map table has wrong length".into()));
        }
        if self.table[src.top] != dst.top {
            return Err(Error::Validation("map does not preserve top".into()));
        }
        for x in 0..src.len() {
            for y in 0..src.len() {
                if src.le(x, y) && !dst.le(self.table[x], self.table[y]) {
                    return Err(Error::Validation(format!(
                        "map not monotone on (`{}`, `{}`)",
                        src.names[x], src.names[y]
                    )));
                }
                if self.table[src.and(x, y)] != dst.and(self.table[x], self.table[y]) {
                    return Err(Error::Validation(format!(
                        "map does not preserve the meet of (`{}`, `{}`)",
                        src.names[x], src.names[y]
                    )));
                }
            }
        }
        Ok(())
    }
}
