//! Hand-presented finite categories: explicit object and arrow lists,
//! a composition table, and explicitly chosen structure. Validated
//! exhaustively at build time (associativity per triple, identity laws,
//! endpoint coherence, universal-property sanity of the chosen structure).

use super::{CatOps, Fragment, Mor, MorData, Ob, Prod, Pullback};
use crate::error::{Error, Result};
use alloc::collections::BTreeMap;
use alloc::format;
use alloc::string::{String, ToString};
use alloc::vec::Vec;

#[derive(Debug, Clone)]
pub struct ArrowDecl {
    pub name: String,
    pub src: u32,
    pub dst: u32,
}

#[derive(Debug, Clone)]
struct ProdEntry {
    ob: u32,
    pr1: u32,
    pr2: u32,
}

#[derive(Debug, Clone)]
pub struct PresentedCat {
    label: String,
    objects: Vec<String>,
    arrows: Vec<ArrowDecl>,
    /// arrow index of `id_x` per object
    ids: Vec<u32>,
    /// composition on non-identity pairs; identity composition is structural
    compose: BTreeMap<(u32, u32), u32>,
    terminal: u32,
    products: BTreeMap<(u32, u32), ProdEntry>,
    /// chosen pullbacks keyed by cospan arrow indices, with a weak flag
    pullbacks: BTreeMap<(u32, u32), (u32, u32, u32, bool)>,
}

#[derive(Debug, Default)]
pub struct PresentedCatBuilder {
    label: String,
    objects: Vec<String>,
    arrows: Vec<ArrowDecl>,
    compose: Vec<(String, String, String)>,
    terminal: Option<String>,
    products: Vec<(String, String, String, String, String)>,
    pullbacks: Vec<(String, String, String, String, String)>,
}

impl PresentedCatBuilder {
    pub fn new(label: &str) -> Self {
        PresentedCatBuilder {
            label: label.to_string(),
            ..Default::default()
        }
    }

    pub fn object(&mut self, name: &str) -> &mut Self {
        self.objects.push(name.to_string());
        self
    }

    pub fn arrow(&mut self, name: &str, src: &str, dst: &str) -> &mut Self {
        self.arrows.push(ArrowDecl {
            name: name.to_string(),
            src: u32::MAX, // resolved in build
            dst: u32::MAX,
        });
        self.compose_raw(name, src, dst);
        self
    }

    // arrows carry names only until build; endpoints stored alongside
    fn compose_raw(&mut self, _name: &str, src: &str, dst: &str) {
        let i = self.arrows.len() - 1;
        self.arrows[i].src = self.find_or_panic(src);
        self.arrows[i].dst = self.find_or_panic(dst);
    }

    fn find_or_panic(&self, name: &str) -> u32 {
        self.objects
            .iter()
            .position(|o| o == name)
            .map(|i| i as u32)
            .unwrap_or(u32::MAX)
    }

    /// `g ∘ f = h` by arrow names.
    pub fn comp(&mut self, g: &str, f: &str, h: &str) -> &mut Self {
        self.compose
            .push((g.to_string(), f.to_string(), h.to_string()));
        self
    }

    pub fn terminal(&mut self, ob: &str) -> &mut Self {
        self.terminal = Some(ob.to_string());
        self
    }

    /// Chosen product of objects `(a, b)`: carrier and projection arrows.
    pub fn product(&mut self, a: &str, b: &str, ob: &str, pr1: &str, pr2: &str) -> &mut Self {
        self.products.push((
            a.to_string(),
            b.to_string(),
            ob.to_string(),
            pr1.to_string(),
            pr2.to_string(),
        ));
        self
    }

    /// Chosen pullback of the cospan `(f, g)`: carrier and both legs.
    pub fn pullback(&mut self, f: &str, g: &str, ob: &str, p1: &str, p2: &str) -> &mut Self {
        self.pullbacks.push((
            f.to_string(),
            g.to_string(),
            ob.to_string(),
            p1.to_string(),
            p2.to_string(),
        ));
        self
    }

    pub fn build(&self) -> Result<PresentedCat> {
        if self.objects.is_empty() {
            return Err(Error::Validation(
                "empty category rejected: no objects, hence no terminal object".into(),
            ));
        }
        let ob_index = |name: &str| -> Result<u32> {
            self.objects
                .iter()
                .position(|o| o == name)
                .map(|i| i as u32)
                .ok_or_else(|| Error::Validation(format!("unknown object `{name}`")))
        };
        let mut arrows: Vec<ArrowDecl> = Vec::new();
        for a in &self.arrows {
            if a.src == u32::MAX || a.dst == u32::MAX {
                return Err(Error::Validation(format!(
                    "arrow `{}` references an unknown object",
                    a.name
                )));
            }
            if arrows.iter().any(|b| b.name == a.name) {
                return Err(Error::Validation(format!("duplicate arrow `{}`", a.name)));
            }
            arrows.push(a.clone());
        }
        // append identities
        let mut ids = Vec::new();
        for (i, name) in self.objects.iter().enumerate() {
            ids.push(arrows.len() as u32);
            arrows.push(ArrowDecl {
                name: format!("id_{name}"),
                src: i as u32,
                dst: i as u32,
            });
        }
        let ar_index = |name: &str| -> Result<u32> {
            arrows
                .iter()
                .position(|a| a.name == name)
                .map(|i| i as u32)
                .ok_or_else(|| Error::Validation(format!("unknown arrow `{name}`")))
        };
        let mut compose: BTreeMap<(u32, u32), u32> = BTreeMap::new();
        for (g, f, h) in &self.compose {
            let (gi, fi, hi) = (ar_index(g)?, ar_index(f)?, ar_index(h)?);
            if arrows[fi as usize].dst != arrows[gi as usize].src {
                return Err(Error::Validation(format!(
                    "composition `{g} . {f}` declared but endpoints do not meet"
                )));
            }
            if arrows[hi as usize].src != arrows[fi as usize].src
                || arrows[hi as usize].dst != arrows[gi as usize].dst
            {
                return Err(Error::Validation(format!(
                    "composite `{h}` of `{g} . {f}` has wrong endpoints"
                )));
            }
            compose.insert((gi, fi), hi);
        }
        let terminal = ob_index(self.terminal.as_deref().ok_or_else(|| {
            Error::Validation("presented category must declare a terminal object".into())
        })?)?;
        let mut products = BTreeMap::new();
        for (a, b, ob, pr1, pr2) in &self.products {
            let key = (ob_index(a)?, ob_index(b)?);
            let entry = ProdEntry {
                ob: ob_index(ob)?,
                pr1: ar_index(pr1)?,
                pr2: ar_index(pr2)?,
            };
            let d1 = &arrows[entry.pr1 as usize];
            let d2 = &arrows[entry.pr2 as usize];
            if d1.src != entry.ob || d2.src != entry.ob || d1.dst != key.0 || d2.dst != key.1 {
                return Err(Error::Validation(format!(
                    "product of `{a}`,`{b}`: projection endpoints do not match"
                )));
            }
            products.insert(key, entry);
        }
        let mut pullbacks = BTreeMap::new();
        for (f, g, ob, p1, p2) in &self.pullbacks {
            let key = (ar_index(f)?, ar_index(g)?);
            pullbacks.insert(key, (ob_index(ob)?, ar_index(p1)?, ar_index(p2)?, false));
        }
        let mut cat = PresentedCat {
            label: self.label.clone(),
            objects: self.objects.clone(),
            arrows,
            ids,
            compose,
            terminal,
            products,
            pullbacks,
        };
        cat.validate()?;
        Ok(cat)
    }
}

impl PresentedCat {
    pub fn builder(label: &str) -> PresentedCatBuilder {
        PresentedCatBuilder::new(label)
    }

    pub fn object_count(&self) -> usize {
        self.objects.len()
    }

    pub fn object_name(&self, i: u32) -> &str {
        &self.objects[i as usize]
    }

    pub fn object_index(&self, name: &str) -> Option<u32> {
        self.objects.iter().position(|o| o == name).map(|i| i as u32)
    }

    pub fn arrow_name(&self, i: u32) -> &str {
        &self.arrows[i as usize].name
    }

    pub fn arrow_by_name(&self, name: &str) -> Option<Mor> {
        let i = self.arrows.iter().position(|a| a.name == name)? as u32;
        Some(self.mor(i))
    }

    fn mor(&self, i: u32) -> Mor {
        let d = &self.arrows[i as usize];
        Mor::new(Ob::Named(d.src), Ob::Named(d.dst), MorData::Named(i))
    }

    fn arrow_index(&self, m: &Mor) -> Result<u32> {
        match &m.data {
            MorData::Named(i) => Ok(*i),
            other => Err(Error::Mismatch {
                context: "presented category",
                detail: format!("foreign morphism payload {other}"),
            }),
        }
    }

    fn compose_idx(&self, g: u32, f: u32) -> Result<u32> {
        let (fd, gd) = (&self.arrows[f as usize], &self.arrows[g as usize]);
        if fd.dst != gd.src {
            return Err(Error::Mismatch {
                context: "presented compose",
                detail: format!("`{}` then `{}` do not meet", fd.name, gd.name),
            });
        }
        if self.ids[fd.src as usize] == f {
            return Ok(g);
        }
        if self.ids[gd.src as usize] == g {
            return Ok(f);
        }
        self.compose.get(&(g, f)).copied().ok_or_else(|| {
            Error::Validation(format!(
                "composition table is not total: `{}` . `{}` missing",
                gd.name, fd.name
            ))
        })
    }

    fn validate(&mut self) -> Result<()> {
        let n = self.arrows.len() as u32;
        // totality + associativity, exhaustively over composable triples
        for f in 0..n {
            for g in 0..n {
                if self.arrows[f as usize].dst != self.arrows[g as usize].src {
                    continue;
                }
                let gf = self.compose_idx(g, f)?;
                for h in 0..n {
                    if self.arrows[g as usize].dst != self.arrows[h as usize].src {
                        continue;
                    }
                    let hg = self.compose_idx(h, g)?;
                    let left = self.compose_idx(h, gf)?;
                    let right = self.compose_idx(hg, f)?;
                    if left != right {
                        return Err(Error::Validation(format!(
                            "composition not associative on triple (`{}`, `{}`, `{}`): \
                             h.(g.f) = `{}` but (h.g).f = `{}`",
                            self.arrows[h as usize].name,
                            self.arrows[g as usize].name,
                            self.arrows[f as usize].name,
                            self.arrows[left as usize].name,
                            self.arrows[right as usize].name,
                        )));
                    }
                }
            }
        }
        // terminal: exactly one arrow from each object
        for x in 0..self.objects.len() as u32 {
            let count = self
                .arrows
                .iter()
                .filter(|a| a.src == x && a.dst == self.terminal)
                .count();
            if count != 1 {
                return Err(Error::Validation(format!(
                    "terminal object `{}` has {count} arrows from `{}` (need exactly 1)",
                    self.objects[self.terminal as usize], self.objects[x as usize]
                )));
            }
        }
        // chosen products: projections commute trivially; record weakness of
        // pullback entries by mediator counting at use sites (oracle work),
        // but sanity-check that declared pullback squares commute.
        let pbs: Vec<((u32, u32), (u32, u32, u32, bool))> =
            self.pullbacks.iter().map(|(k, v)| (*k, *v)).collect();
        for ((f, g), (ob, p1, p2, _)) in pbs {
            let d1 = &self.arrows[p1 as usize];
            let d2 = &self.arrows[p2 as usize];
            if d1.src != ob || d2.src != ob {
                return Err(Error::Validation("pullback legs must start at the carrier".into()));
            }
            let fp1 = self.compose_idx(f, p1)?;
            let gp2 = self.compose_idx(g, p2)?;
            if fp1 != gp2 {
                return Err(Error::Validation(format!(
                    "declared pullback square for (`{}`, `{}`) does not commute",
                    self.arrows[f as usize].name, self.arrows[g as usize].name
                )));
            }
            // weakness: more than one mediator for some cone
            let weak = self.pullback_is_weak(f, g, ob, p1, p2)?;
            self.pullbacks.insert((f, g), (ob, p1, p2, weak));
        }
        Ok(())
    }

    fn pullback_is_weak(&self, f: u32, g: u32, _ob: u32, p1: u32, p2: u32) -> Result<bool> {
        for t in 0..self.objects.len() as u32 {
            let us: Vec<u32> = (0..self.arrows.len() as u32)
                .filter(|&i| {
                    self.arrows[i as usize].src == t
                        && self.arrows[i as usize].dst == self.arrows[f as usize].src
                })
                .collect();
            let vs: Vec<u32> = (0..self.arrows.len() as u32)
                .filter(|&i| {
                    self.arrows[i as usize].src == t
                        && self.arrows[i as usize].dst == self.arrows[g as usize].src
                })
                .collect();
            for &u in &us {
                for &v in &vs {
                    if self.compose_idx(f, u)? != self.compose_idx(g, v)? {
                        continue;
                    }
                    let mediators = (0..self.arrows.len() as u32)
                        .filter(|&k| {
                            self.arrows[k as usize].src == t
                                && self.compose_idx(p1, k) == Ok(u)
                                && self.compose_idx(p2, k) == Ok(v)
                        })
                        .count();
                    if mediators > 1 {
                        return Ok(true);
                    }
                }
            }
        }
        Ok(false)
    }
}

impl CatOps for PresentedCat {
    fn name(&self) -> String {
        self.label.clone()
    }

    fn objects(&self, frag: &Fragment) -> Vec<Ob> {
        if frag.include.is_empty() {
            (0..self.objects.len() as u32).map(Ob::Named).collect()
        } else {
            frag.include.clone()
        }
    }

    fn hom_size(&self, a: &Ob, b: &Ob) -> Option<u128> {
        let (Ob::Named(a), Ob::Named(b)) = (a, b) else {
            return None;
        };
        Some(
            self.arrows
                .iter()
                .filter(|d| d.src == *a && d.dst == *b)
                .count() as u128,
        )
    }

    fn hom(&self, a: &Ob, b: &Ob, _budget: usize) -> Result<Vec<Mor>> {
        let (Ob::Named(a), Ob::Named(b)) = (a, b) else {
            return Err(Error::Mismatch {
                context: "presented hom",
                detail: "foreign object".into(),
            });
        };
        Ok((0..self.arrows.len() as u32)
            .filter(|&i| self.arrows[i as usize].src == *a && self.arrows[i as usize].dst == *b)
            .map(|i| self.mor(i))
            .collect())
    }

    fn identity(&self, a: &Ob) -> Mor {
        let Ob::Named(i) = a else {
            panic!("presented identity on a foreign object");
        };
        self.mor(self.ids[*i as usize])
    }

    fn compose(&self, g: &Mor, f: &Mor) -> Result<Mor> {
        super::require_composable("presented compose", g, f)?;
        let (gi, fi) = (self.arrow_index(g)?, self.arrow_index(f)?);
        Ok(self.mor(self.compose_idx(gi, fi)?))
    }

    fn terminal(&self) -> Ob {
        Ob::Named(self.terminal)
    }

    fn bang(&self, a: &Ob) -> Mor {
        let Ob::Named(i) = a else {
            panic!("presented bang on a foreign object");
        };
        let k = (0..self.arrows.len() as u32)
            .find(|&k| self.arrows[k as usize].src == *i && self.arrows[k as usize].dst == self.terminal)
            .expect("validated: exactly one arrow to the terminal");
        self.mor(k)
    }

    fn product(&self, a: &Ob, b: &Ob) -> Result<Prod> {
        let (Ob::Named(a), Ob::Named(b)) = (a, b) else {
            return Err(Error::Mismatch {
                context: "presented product",
                detail: "foreign object".into(),
            });
        };
        let e = self.products.get(&(*a, *b)).ok_or(Error::MissingStructure(
            "chosen product not declared for this pair",
        ))?;
        Ok(Prod {
            ob: Ob::Named(e.ob),
            pr1: self.mor(e.pr1),
            pr2: self.mor(e.pr2),
        })
    }

    fn pair(&self, p: &Prod, f: &Mor, g: &Mor) -> Result<Mor> {
        // deterministic search for the first mediating arrow in declaration order
        let (fi, gi) = (self.arrow_index(f)?, self.arrow_index(g)?);
        let (p1, p2) = (self.arrow_index(&p.pr1)?, self.arrow_index(&p.pr2)?);
        let Ob::Named(carrier) = p.ob else {
            return Err(Error::Mismatch {
                context: "presented pair",
                detail: "foreign carrier".into(),
            });
        };
        let src = self.arrows[fi as usize].src;
        for k in 0..self.arrows.len() as u32 {
            let d = &self.arrows[k as usize];
            if d.src == src
                && d.dst == carrier
                && self.compose_idx(p1, k)? == fi
                && self.compose_idx(p2, k)? == gi
            {
                return Ok(self.mor(k));
            }
        }
        Err(Error::Validation(format!(
            "no mediating arrow into declared product for cone (`{}`, `{}`)",
            self.arrows[fi as usize].name, self.arrows[gi as usize].name
        )))
    }

    fn pullback(&self, f: &Mor, g: &Mor) -> Result<Pullback> {
        let (fi, gi) = (self.arrow_index(f)?, self.arrow_index(g)?);
        let (ob, p1, p2, weak) = self
            .pullbacks
            .get(&(fi, gi))
            .copied()
            .ok_or(Error::MissingStructure("chosen pullback not declared for this cospan"))?;
        Ok(Pullback {
            ob: Ob::Named(ob),
            to_left: self.mor(p1),
            to_right: self.mor(p2),
            weak,
        })
    }

    fn pb_mediate(&self, pb: &Pullback, u: &Mor, v: &Mor) -> Result<Mor> {
        let (ui, vi) = (self.arrow_index(u)?, self.arrow_index(v)?);
        let (p1, p2) = (self.arrow_index(&pb.to_left)?, self.arrow_index(&pb.to_right)?);
        let Ob::Named(carrier) = pb.ob else {
            return Err(Error::Mismatch {
                context: "presented pullback mediator",
                detail: "foreign carrier".into(),
            });
        };
        let src = self.arrows[ui as usize].src;
        for k in 0..self.arrows.len() as u32 {
            let d = &self.arrows[k as usize];
            if d.src == src
                && d.dst == carrier
                && self.compose_idx(p1, k)? == ui
                && self.compose_idx(p2, k)? == vi
            {
                return Ok(self.mor(k));
            }
        }
        Err(Error::Validation("no mediating arrow into declared pullback".into()))
    }
}
