//! A finite inf-semilattice viewed as a category: one object per element,
//! at most one arrow between two objects, products given by the meet table.
//! A finitely complete base for the subobject-style doctrines.

use super::{CatOps, Coprod, Fragment, Mor, MorData, Ob, Prod, Pullback};
use crate::error::{Error, Result};
use crate::lattice::Lattice;
use alloc::format;
use alloc::rc::Rc;
use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;

#[derive(Debug, Clone)]
pub struct PosetCat {
    pub lattice: Rc<Lattice>,
    label: String,
}

impl PosetCat {
    pub fn new(label: &str, lattice: Rc<Lattice>) -> PosetCat {
        PosetCat {
            lattice,
            label: String::from(label),
        }
    }

    fn idx(&self, a: &Ob, context: &'static str) -> Result<usize> {
        match a {
            Ob::Named(i) if (*i as usize) < self.lattice.len() => Ok(*i as usize),
            other => Err(Error::Mismatch {
                context,
                detail: format!("foreign object {other}"),
            }),
        }
    }

    fn le_mor(&self, a: usize, b: usize) -> Mor {
        Mor::new(Ob::Named(a as u32), Ob::Named(b as u32), MorData::Le)
    }
}

impl CatOps for PosetCat {
    fn name(&self) -> String {
        self.label.clone()
    }

    fn objects(&self, frag: &Fragment) -> Vec<Ob> {
        if frag.include.is_empty() {
            (0..self.lattice.len() as u32).map(Ob::Named).collect()
        } else {
            frag.include.clone()
        }
    }

    fn hom_size(&self, a: &Ob, b: &Ob) -> Option<u128> {
        let (Ob::Named(a), Ob::Named(b)) = (a, b) else {
            return None;
        };
        Some(self.lattice.le(*a as usize, *b as usize) as u128)
    }

    fn hom(&self, a: &Ob, b: &Ob, _budget: usize) -> Result<Vec<Mor>> {
        let (ia, ib) = (self.idx(a, "poset hom")?, self.idx(b, "poset hom")?);
        Ok(if self.lattice.le(ia, ib) {
            vec![self.le_mor(ia, ib)]
        } else {
            vec![]
        })
    }

    fn identity(&self, a: &Ob) -> Mor {
        let i = self.idx(a, "poset identity").expect("poset identity");
        self.le_mor(i, i)
    }

    fn compose(&self, g: &Mor, f: &Mor) -> Result<Mor> {
        super::require_composable("poset compose", g, f)?;
        let ia = self.idx(&f.src, "poset compose")?;
        let ic = self.idx(&g.dst, "poset compose")?;
        Ok(self.le_mor(ia, ic))
    }

    fn terminal(&self) -> Ob {
        Ob::Named(self.lattice.top as u32)
    }

    fn bang(&self, a: &Ob) -> Mor {
        let i = self.idx(a, "poset bang").expect("poset bang");
        self.le_mor(i, self.lattice.top)
    }

    fn product(&self, a: &Ob, b: &Ob) -> Result<Prod> {
        let (ia, ib) = (self.idx(a, "poset product")?, self.idx(b, "poset product")?);
        let m = self.lattice.and(ia, ib);
        Ok(Prod {
            ob: Ob::Named(m as u32),
            pr1: self.le_mor(m, ia),
            pr2: self.le_mor(m, ib),
        })
    }

    fn pair(&self, p: &Prod, f: &Mor, g: &Mor) -> Result<Mor> {
        let src = self.idx(&f.src, "poset pair")?;
        if f.src != g.src {
            return Err(Error::Mismatch {
                context: "poset pair",
                detail: "cone legs have different sources".into(),
            });
        }
        let m = self.idx(&p.ob, "poset pair")?;
        if !self.lattice.le(src, m) {
            return Err(Error::Mismatch {
                context: "poset pair",
                detail: format!(
                    "`{}` is not below the meet `{}`",
                    self.lattice.names[src], self.lattice.names[m]
                ),
            });
        }
        Ok(self.le_mor(src, m))
    }

    fn pullback(&self, f: &Mor, g: &Mor) -> Result<Pullback> {
        if f.dst != g.dst {
            return Err(Error::Mismatch {
                context: "poset pullback",
                detail: "cospan mismatch".into(),
            });
        }
        let (ia, ib) = (self.idx(&f.src, "poset pullback")?, self.idx(&g.src, "poset pullback")?);
        let m = self.lattice.and(ia, ib);
        Ok(Pullback {
            ob: Ob::Named(m as u32),
            to_left: self.le_mor(m, ia),
            to_right: self.le_mor(m, ib),
            weak: false,
        })
    }

    fn pb_mediate(&self, pb: &Pullback, u: &Mor, v: &Mor) -> Result<Mor> {
        let src = self.idx(&u.src, "poset pullback mediator")?;
        if u.src != v.src {
            return Err(Error::Mismatch {
                context: "poset pullback mediator",
                detail: "cone legs have different sources".into(),
            });
        }
        let m = self.idx(&pb.ob, "poset pullback mediator")?;
        if !self.lattice.le(src, m) {
            return Err(Error::Mismatch {
                context: "poset pullback mediator",
                detail: "cone source is not below the carrier".into(),
            });
        }
        Ok(self.le_mor(src, m))
    }

    fn initial(&self) -> Option<Ob> {
        self.lattice.bottom.map(|b| Ob::Named(b as u32))
    }

    fn coproduct(&self, a: &Ob, b: &Ob) -> Option<Coprod> {
        let (Ob::Named(ia), Ob::Named(ib)) = (a, b) else {
            return None;
        };
        let j = self.lattice.or(*ia as usize, *ib as usize)?;
        Some(Coprod {
            ob: Ob::Named(j as u32),
            in1: self.le_mor(*ia as usize, j),
            in2: self.le_mor(*ib as usize, j),
        })
    }

    fn copair(&self, c: &Coprod, f: &Mor, g: &Mor) -> Result<Mor> {
        if f.dst != g.dst {
            return Err(Error::Mismatch {
                context: "poset copair",
                detail: "cocone legs have different targets".into(),
            });
        }
        let j = self.idx(&c.ob, "poset copair")?;
        let t = self.idx(&f.dst, "poset copair")?;
        if !self.lattice.le(j, t) {
            return Err(Error::Mismatch {
                context: "poset copair",
                detail: "join is not below the cocone target".into(),
            });
        }
        Ok(self.le_mor(j, t))
    }
}
