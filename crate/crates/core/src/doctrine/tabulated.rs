//! Doctrines with explicitly tabulated fibres: one finite lattice per
//! object and one reindexing table per arrow. This is the form presented
//! doctrines load in, the form completed doctrines export to, and the
//! backing store for the subobject-style doctrines, whose fibres are
//! computed once and then consulted constantly.
//!
//! Quantifier adjoints are derived by Galois search where uniquely
//! determined: the least/greatest element solving the adjunction
//! inequality, scanned in the tabulated fibre.

use super::{Doctrine, Fib};
use crate::error::{Error, Result};
use crate::kernel::{Cat, Data, Mor, Ob};
use crate::lattice::{Lattice, MonotoneMeetMap};
use alloc::collections::BTreeMap;
use alloc::format;
use alloc::rc::Rc;
use alloc::string::String;
use alloc::vec::Vec;

pub struct TabulatedDoctrine {
    label: String,
    cat: Cat,
    obs: Vec<Ob>,
    fibers: Vec<Rc<Lattice>>,
    reindex: BTreeMap<Mor, Vec<usize>>,
    /// per tabulated object: index of the fibred equality in the fibre over
    /// its chosen square, when available
    diag: Vec<Option<usize>>,
    /// chosen comprehension arrows per (object, element)
    compr: BTreeMap<(usize, usize), Mor>,
    classifier: Option<(Ob, usize)>,
}

pub struct TabulatedDoctrineBuilder {
    pub label: String,
    pub cat: Cat,
    pub obs: Vec<Ob>,
    pub fibers: Vec<Lattice>,
    pub reindex: BTreeMap<Mor, Vec<usize>>,
    pub diag: Vec<Option<usize>>,
    pub compr: BTreeMap<(usize, usize), Mor>,
    pub classifier: Option<(Ob, usize)>,
}

impl TabulatedDoctrineBuilder {
    pub fn new(label: &str, cat: Cat) -> TabulatedDoctrineBuilder {
        TabulatedDoctrineBuilder {
            label: String::from(label),
            cat,
            obs: Vec::new(),
            fibers: Vec::new(),
            reindex: BTreeMap::new(),
            diag: Vec::new(),
            compr: BTreeMap::new(),
            classifier: None,
        }
    }

    /// Structural validation: shapes, identity tables, functoriality of the
    /// reindex tables over all recorded composable pairs, monotone
    /// meet-preservation per arrow.
    pub fn build(self) -> Result<TabulatedDoctrine> {
        if self.obs.len() != self.fibers.len() || self.obs.len() != self.diag.len() {
            return Err(Error::Validation("tabulated doctrine: ragged tables".into()));
        }
        for l in &self.fibers {
            l.validate()?;
        }
        let find = |ob: &Ob| -> Result<usize> {
            self.obs
                .iter()
                .position(|o| o == ob)
                .ok_or_else(|| Error::Validation(format!("object {ob} is not tabulated")))
        };
        for (m, table) in &self.reindex {
            let (si, di) = (find(&m.src)?, find(&m.dst)?);
            let mm = MonotoneMeetMap { table: table.clone() };
            mm.validate(&self.fibers[di], &self.fibers[si])
                .map_err(|e| Error::Validation(format!("reindex along {m}: {e}")))?;
        }
        // identities act as identities
        for (i, ob) in self.obs.iter().enumerate() {
            let id = self.cat.identity(ob);
            if let Some(t) = self.reindex.get(&id) {
                if t.iter().enumerate().any(|(k, &v)| k != v) {
                    return Err(Error::Validation(format!(
                        "reindex along the identity of {ob} is not the identity table"
                    )));
                }
            } else {
                return Err(Error::Validation(format!("identity of {ob} has no reindex table")));
            }
            let _ = i;
        }
        // functoriality over recorded composable pairs
        for (f, tf) in &self.reindex {
            for (g, tg) in &self.reindex {
                if f.dst != g.src {
                    continue;
                }
                let gf = self.cat.compose(g, f)?;
                let Some(tgf) = self.reindex.get(&gf) else {
                    return Err(Error::Validation(format!(
                        "composite {gf} of tabulated arrows has no reindex table"
                    )));
                };
                let composed: Vec<usize> = tg.iter().map(|&k| tf[k]).collect();
                if *tgf != composed {
                    return Err(Error::Validation(format!(
                        "reindex tables are not functorial on {g} . {f}"
                    )));
                }
            }
        }
        Ok(TabulatedDoctrine {
            label: self.label,
            cat: self.cat,
            obs: self.obs,
            fibers: self.fibers.into_iter().map(Rc::new).collect(),
            reindex: self.reindex,
            diag: self.diag,
            compr: self.compr,
            classifier: self.classifier,
        })
    }
}

impl TabulatedDoctrine {
    pub fn objects(&self) -> &[Ob] {
        &self.obs
    }

    pub fn fiber_lattice(&self, a: &Ob) -> Result<&Rc<Lattice>> {
        Ok(&self.fibers[self.find(a)?])
    }

    fn find(&self, ob: &Ob) -> Result<usize> {
        self.obs.iter().position(|o| o == ob).ok_or_else(|| Error::Mismatch {
            context: "tabulated doctrine",
            detail: format!("object {ob} is not tabulated"),
        })
    }

    fn idx(&self, x: &Fib, context: &'static str) -> Result<usize> {
        match &x.data {
            Data::Idx(i) => Ok(*i as usize),
            other => Err(Error::Mismatch {
                context,
                detail: format!("expected a tabulated element, found {other}"),
            }),
        }
    }

    fn elem(&self, ob: &Ob, i: usize) -> Fib {
        Fib::new(ob.clone(), Data::Idx(i as u32))
    }

    /// Least `beta` in the fibre over `target` with `alpha ≤ pr* beta`
    /// (`order` = `true`), or greatest with `pr* beta ≤ alpha`.
    fn galois_search(&self, pr: &Mor, alpha: &Fib, least: bool) -> Result<Fib> {
        let ti = self.find(&pr.dst)?;
        let lat = &self.fibers[ti];
        let ai = self.idx(alpha, "adjoint search")?;
        let table = self.reindex.get(pr).ok_or_else(|| Error::Mismatch {
            context: "adjoint search",
            detail: format!("no reindex table along {pr}"),
        })?;
        let src_lat = &self.fibers[self.find(&pr.src)?];
        let sat: Vec<usize> = (0..lat.len())
            .filter(|&b| {
                if least {
                    src_lat.le(ai, table[b])
                } else {
                    src_lat.le(table[b], ai)
                }
            })
            .collect();
        let pick = sat.iter().copied().find(|&m| {
            sat.iter().all(|&z| if least { lat.le(m, z) } else { lat.le(z, m) })
        });
        match pick {
            Some(m) => Ok(self.elem(&pr.dst, m)),
            None => Err(Error::MissingCapability(
                "quantifier along this projection is not determined by search",
            )),
        }
    }
}

impl Doctrine for TabulatedDoctrine {
    fn name(&self) -> String {
        self.label.clone()
    }

    fn cat(&self) -> Cat {
        self.cat.clone()
    }

    fn top(&self, a: &Ob) -> Fib {
        let i = self.find(a).expect("top over a tabulated object");
        self.elem(a, self.fibers[i].top)
    }

    fn meet(&self, x: &Fib, y: &Fib) -> Fib {
        debug_assert_eq!(x.ob, y.ob);
        let i = self.find(&x.ob).expect("meet over a tabulated object");
        let (a, b) = (
            self.idx(x, "meet").expect("tabulated meet"),
            self.idx(y, "meet").expect("tabulated meet"),
        );
        self.elem(&x.ob, self.fibers[i].and(a, b))
    }

    fn leq(&self, x: &Fib, y: &Fib) -> bool {
        debug_assert_eq!(x.ob, y.ob);
        let i = self.find(&x.ob).expect("leq over a tabulated object");
        let (a, b) = (
            self.idx(x, "leq").expect("tabulated leq"),
            self.idx(y, "leq").expect("tabulated leq"),
        );
        self.fibers[i].le(a, b)
    }

    fn reindex(&self, f: &Mor, y: &Fib) -> Result<Fib> {
        if f.dst != y.ob {
            return Err(Error::Mismatch {
                context: "tabulated reindex",
                detail: format!("element over {}, arrow into {}", y.ob, f.dst),
            });
        }
        let table = self.reindex.get(f).ok_or_else(|| Error::Mismatch {
            context: "tabulated reindex",
            detail: format!("no reindex table along {f}"),
        })?;
        let yi = self.idx(y, "reindex")?;
        Ok(self.elem(&f.src, table[yi]))
    }

    fn fiber_size(&self, a: &Ob) -> Option<u128> {
        self.find(a).ok().map(|i| self.fibers[i].len() as u128)
    }

    fn enum_fiber(&self, a: &Ob, budget: usize) -> Result<Vec<Fib>> {
        let i = self.find(a)?;
        let n = self.fibers[i].len();
        if n > budget {
            return Err(Error::Budget {
                what: "tabulated fibre enumeration",
                need: n as u128,
                budget: budget as u128,
            });
        }
        Ok((0..n).map(|k| self.elem(a, k)).collect())
    }

    fn bottom(&self, a: &Ob) -> Result<Fib> {
        let i = self.find(a)?;
        self.fibers[i]
            .bottom
            .map(|b| self.elem(a, b))
            .ok_or(Error::MissingCapability("bottom"))
    }

    fn join(&self, x: &Fib, y: &Fib) -> Result<Fib> {
        let i = self.find(&x.ob)?;
        let (a, b) = (self.idx(x, "join")?, self.idx(y, "join")?);
        self.fibers[i]
            .or(a, b)
            .map(|j| self.elem(&x.ob, j))
            .ok_or(Error::MissingCapability("joins"))
    }

    fn implies(&self, x: &Fib, y: &Fib) -> Result<Fib> {
        let i = self.find(&x.ob)?;
        let (a, b) = (self.idx(x, "implies")?, self.idx(y, "implies")?);
        self.fibers[i]
            .imp(a, b)
            .map(|j| self.elem(&x.ob, j))
            .ok_or(Error::MissingCapability("implication"))
    }

    fn diagonal(&self, a: &Ob) -> Result<Fib> {
        let i = self.find(a)?;
        let d = self.diag[i].ok_or(Error::MissingCapability("fibred equality"))?;
        let sq = self.cat.product(a, a)?;
        Ok(self.elem(&sq.ob, d))
    }

    fn exists_proj(&self, a: &Ob, b: &Ob, keep_first: bool, alpha: &Fib) -> Result<Fib> {
        let p = self.cat.product(a, b)?;
        let pr = if keep_first { &p.pr1 } else { &p.pr2 };
        self.galois_search(pr, alpha, true)
    }

    fn forall_proj(&self, a: &Ob, b: &Ob, keep_first: bool, alpha: &Fib) -> Result<Fib> {
        let p = self.cat.product(a, b)?;
        let pr = if keep_first { &p.pr1 } else { &p.pr2 };
        self.galois_search(pr, alpha, false)
    }

    fn comprehension(&self, alpha: &Fib) -> Result<Mor> {
        let i = self.find(&alpha.ob)?;
        let e = self.idx(alpha, "comprehension")?;
        self.compr
            .get(&(i, e))
            .cloned()
            .ok_or(Error::MissingCapability("comprehension"))
    }

    fn classifier(&self) -> Result<(Ob, Fib)> {
        let (ob, e) = self
            .classifier
            .clone()
            .ok_or(Error::MissingCapability("predicate classifier"))?;
        Ok((ob.clone(), self.elem(&ob, e)))
    }
}
