//! Closure operators on doctrines: natural, extensive, idempotent
//! fibrewise maps, the subdoctrine of closed elements with its transferred
//! structure, adjoint-retraction pairs and their lift to the quotient
//! completions, the canonical topology induced on the weak-subobject
//! doctrine, and separated objects.

use crate::completions::EqcDoctrine;
use crate::doctrine::{eq_fib, exists_along, Doc, Doctrine, Fib};
use crate::error::{Error, Result};
use crate::kernel::{Cat, Fragment, Mor, Ob};
use crate::oracle::{Cx, FunctorData, Outcome};
use alloc::format;
use alloc::rc::Rc;
use alloc::string::{String, ToString};
use alloc::vec::Vec;

/// A fibrewise closure operator on a doctrine.
#[derive(Clone)]
pub struct TopologyJ {
    pub d: Doc,
    apply: Rc<dyn Fn(&Ob, &Fib) -> Result<Fib>>,
    pub label: String,
}

impl TopologyJ {
    pub fn from_fn(
        d: &Doc,
        label: &str,
        apply: impl Fn(&Ob, &Fib) -> Result<Fib> + 'static,
    ) -> TopologyJ {
        TopologyJ {
            d: d.clone(),
            apply: Rc::new(apply),
            label: String::from(label),
        }
    }

    pub fn identity(d: &Doc) -> TopologyJ {
        TopologyJ::from_fn(d, "identity", |_, x| Ok(x.clone()))
    }

    pub fn const_top(d: &Doc) -> TopologyJ {
        let d2 = d.clone();
        TopologyJ::from_fn(d, "const_top", move |a, _| Ok(d2.top(a)))
    }

    /// Double negation, where the doctrine has implication and bottom.
    pub fn double_negation(d: &Doc) -> TopologyJ {
        let d2 = d.clone();
        TopologyJ::from_fn(d, "not_not", move |a, x| {
            let bot = d2.bottom(a)?;
            let n = d2.implies(x, &bot)?;
            d2.implies(&n, &bot)
        })
    }

    pub fn apply(&self, x: &Fib) -> Result<Fib> {
        (self.apply)(&x.ob, x)
    }

    /// Extensivity, idempotence, monotonicity, meet/top preservation, and
    /// naturality against reindexing, over the fragment.
    pub fn check_laws(&self, frag: &Fragment) -> Outcome {
        let mut out = Outcome::new();
        let d = self.d.as_ref();
        let cat = d.cat();
        let obs = cat.objects(frag);
        for a in &obs {
            let fib = match d.enum_fiber(a, frag.fiber_budget) {
                Ok(f) => f,
                Err(Error::Budget { .. }) => {
                    out.skip();
                    continue;
                }
                Err(e) => {
                    out.fail(Cx::one("object", a.to_string()).push("error", e.to_string()));
                    continue;
                }
            };
            let r: Result<()> = (|| {
                let jt = self.apply(&d.top(a))?;
                if !eq_fib(&jt, &d.top(a)) {
                    out.fail(Cx::one("object", a.to_string()).push("reason", "top not fixed"));
                }
                for x in &fib {
                    let jx = self.apply(x)?;
                    if !d.leq(x, &jx) {
                        out.fail(Cx::one("element", x.to_string()).push("reason", "not extensive"));
                        continue;
                    }
                    let jjx = self.apply(&jx)?;
                    if !eq_fib(&jjx, &jx) {
                        out.fail(Cx::one("element", x.to_string()).push("reason", "not idempotent"));
                        continue;
                    }
                    for y in &fib {
                        let jy = self.apply(y)?;
                        if d.leq(x, y) && !d.leq(&jx, &jy) {
                            out.fail(
                                Cx::one("x", x.to_string())
                                    .push("y", y.to_string())
                                    .push("reason", "not monotone"),
                            );
                            continue;
                        }
                        let jm = self.apply(&d.meet(x, y))?;
                        if !eq_fib(&jm, &d.meet(&jx, &jy)) {
                            out.fail(
                                Cx::one("x", x.to_string())
                                    .push("y", y.to_string())
                                    .push("reason", "meets not preserved"),
                            );
                            continue;
                        }
                        out.pass();
                    }
                }
                Ok(())
            })();
            if let Err(e) = r {
                out.fail(Cx::one("object", a.to_string()).push("error", e.to_string()));
            }
        }
        // naturality
        for a in &obs {
            for b in &obs {
                let fs = match cat.hom(a, b, frag.hom_budget) {
                    Ok(f) => f,
                    Err(_) => {
                        out.skip();
                        continue;
                    }
                };
                let fib_b = match d.enum_fiber(b, frag.fiber_budget) {
                    Ok(f) => f,
                    Err(_) => {
                        out.skip();
                        continue;
                    }
                };
                for f in &fs {
                    for y in &fib_b {
                        let r: Result<()> = (|| {
                            let l = d.reindex(f, &self.apply(y)?)?;
                            let rr = self.apply(&d.reindex(f, y)?)?;
                            if eq_fib(&l, &rr) {
                                out.pass();
                            } else {
                                out.fail(
                                    Cx::one("arrow", f.to_string())
                                        .push("element", y.to_string())
                                        .push("reindex_of_closure", l.to_string())
                                        .push("closure_of_reindex", rr.to_string()),
                                );
                            }
                            Ok(())
                        })();
                        if let Err(e) = r {
                            out.fail(Cx::one("arrow", f.to_string()).push("error", e.to_string()));
                        }
                    }
                }
            }
        }
        out.finish()
    }
}

/// The doctrine of closed elements: fibres restricted to fixed points,
/// lattice operations and quantifiers transferred by closing.
pub struct ClosedSubdoctrine {
    d: Doc,
    j: TopologyJ,
    label: String,
}

impl ClosedSubdoctrine {
    fn close(&self, x: &Fib) -> Result<Fib> {
        self.j.apply(x)
    }
}

impl Doctrine for ClosedSubdoctrine {
    fn name(&self) -> String {
        self.label.clone()
    }

    fn cat(&self) -> Cat {
        self.d.cat()
    }

    fn top(&self, a: &Ob) -> Fib {
        self.d.top(a)
    }

    fn meet(&self, x: &Fib, y: &Fib) -> Fib {
        self.d.meet(x, y)
    }

    fn leq(&self, x: &Fib, y: &Fib) -> bool {
        self.d.leq(x, y)
    }

    fn reindex(&self, f: &Mor, y: &Fib) -> Result<Fib> {
        self.d.reindex(f, y)
    }

    fn fiber_size(&self, _a: &Ob) -> Option<u128> {
        None
    }

    fn enum_fiber(&self, a: &Ob, budget: usize) -> Result<Vec<Fib>> {
        let mut out = Vec::new();
        for x in self.d.enum_fiber(a, budget)? {
            let jx = self.close(&x)?;
            if eq_fib(&jx, &x) {
                out.push(x);
            }
        }
        Ok(out)
    }

    fn bottom(&self, a: &Ob) -> Result<Fib> {
        self.close(&self.d.bottom(a)?)
    }

    fn join(&self, x: &Fib, y: &Fib) -> Result<Fib> {
        self.close(&self.d.join(x, y)?)
    }

    fn implies(&self, x: &Fib, y: &Fib) -> Result<Fib> {
        self.d.implies(x, y)
    }

    fn diagonal(&self, a: &Ob) -> Result<Fib> {
        self.close(&self.d.diagonal(a)?)
    }

    fn exists_proj(&self, a: &Ob, b: &Ob, keep_first: bool, alpha: &Fib) -> Result<Fib> {
        self.close(&self.d.exists_proj(a, b, keep_first, alpha)?)
    }

    fn forall_proj(&self, a: &Ob, b: &Ob, keep_first: bool, alpha: &Fib) -> Result<Fib> {
        self.d.forall_proj(a, b, keep_first, alpha)
    }

    fn comprehension(&self, alpha: &Fib) -> Result<Mor> {
        self.d.comprehension(alpha)
    }

    fn classifier(&self) -> Result<(Ob, Fib)> {
        let (omega, member) = self.d.classifier()?;
        Ok((omega, self.close(&member)?))
    }

    fn power_object(&self, a: &Ob) -> Result<(Ob, Fib)> {
        let (pa, mem) = self.d.power_object(a)?;
        Ok((pa, self.close(&mem)?))
    }
}

pub fn closed_subdoctrine(d: &Doc, j: &TopologyJ, label: &str) -> Rc<ClosedSubdoctrine> {
    Rc::new(ClosedSubdoctrine {
        d: d.clone(),
        j: j.clone(),
        label: String::from(label),
    })
}

/// A fibrewise adjoint retraction between two doctrines over the same base:
/// `onto : R -> P` with pointwise right adjoint `back : P -> R` and
/// `onto ∘ back = id`.
#[derive(Clone)]
pub struct AdjointRetraction {
    pub p: Doc,
    pub r: Doc,
    pub onto: Rc<dyn Fn(&Ob, &Fib) -> Result<Fib>>,
    pub back: Rc<dyn Fn(&Ob, &Fib) -> Result<Fib>>,
    pub label: String,
}

impl AdjointRetraction {
    /// Galois inequalities and the retraction law, over the fragment.
    pub fn check(&self, frag: &Fragment) -> Outcome {
        let mut out = Outcome::new();
        let cat = self.p.cat();
        for a in cat.objects(frag) {
            let r: Result<()> = (|| {
                let pf = match self.p.enum_fiber(&a, frag.fiber_budget) {
                    Ok(f) => f,
                    Err(Error::Budget { .. }) => {
                        out.skip();
                        return Ok(());
                    }
                    Err(e) => return Err(e),
                };
                let rf = match self.r.enum_fiber(&a, frag.fiber_budget) {
                    Ok(f) => f,
                    Err(Error::Budget { .. }) => {
                        out.skip();
                        return Ok(());
                    }
                    Err(e) => return Err(e),
                };
                for alpha in &pf {
                    let lr = (self.onto)(&a, &(self.back)(&a, alpha)?)?;
                    if !eq_fib(&lr, alpha) {
                        out.fail(
                            Cx::one("alpha", alpha.to_string()).push("onto_back", lr.to_string()),
                        );
                        continue;
                    }
                    out.pass();
                }
                for beta in &rf {
                    for alpha in &pf {
                        let lhs = self.p.leq(&(self.onto)(&a, beta)?, alpha);
                        let rhs = self.r.leq(beta, &(self.back)(&a, alpha)?);
                        if lhs == rhs {
                            out.pass();
                        } else {
                            out.fail(
                                Cx::one("beta", beta.to_string())
                                    .push("alpha", alpha.to_string())
                                    .push("reason", "Galois law fails"),
                            );
                        }
                    }
                }
                Ok(())
            })();
            if let Err(e) = r {
                out.fail(Cx::one("object", a.to_string()).push("error", e.to_string()));
            }
        }
        out.finish()
    }

    /// The induced topology `back ∘ onto` on the ambient doctrine.
    pub fn induced_topology(&self) -> TopologyJ {
        let onto = self.onto.clone();
        let back = self.back.clone();
        TopologyJ::from_fn(&self.r, &format!("{}.induced", self.label), move |a, x| {
            back(a, &onto(a, x)?)
        })
    }
}

/// The canonical topology the given doctrine induces on the weak-subobject
/// doctrine of its base: a variation class goes to the class of the
/// comprehension of its image.
pub fn canonical_topology(p: &Doc, psi: &Doc, label: &str) -> TopologyJ {
    let p2 = p.clone();
    let psi2 = psi.clone();
    TopologyJ::from_fn(psi, label, move |_a, x| {
        let rep = psi2.comprehension(x)?;
        let image = exists_along(p2.as_ref(), &rep, &p2.top(&rep.src))?;
        let m = p2.comprehension(&image)?;
        exists_along(psi2.as_ref(), &m, &psi2.top(&m.src))
    })
}

/// Restriction of a topology on the underlying doctrine to the descent-data
/// fibres of its quotient completion. Closures that escape the descent
/// lattice are internal-consistency failures.
pub fn extend_to_eqc(j: &TopologyJ, q: &Rc<EqcDoctrine>) -> TopologyJ {
    let j2 = j.clone();
    let q2 = q.clone();
    let qd: Doc = q.clone();
    TopologyJ::from_fn(&qd, &format!("{}^", j.label), move |ob, x| {
        let base = q2.base_fib(x)?;
        let closed = j2.apply(&base)?;
        let (a, rho) = q2.eqc_cat().parts(ob)?;
        if !crate::doctrine::is_descent_datum(q2.base_doctrine().as_ref(), &a, &rho, &closed)? {
            return Err(Error::Internal(format!(
                "closure left the descent lattice over {ob}"
            )));
        }
        Ok(Fib::new(ob.clone(), closed.data))
    })
}

/// Is the object separated for the topology: is its fibred equality closed?
pub fn is_separated(d: &Doc, j: &TopologyJ, x: &Ob) -> Result<bool> {
    let delta = d.diagonal(x)?;
    let jd = j.apply(&delta)?;
    Ok(eq_fib(&jd, &delta))
}

/// The adjunction between quotient completions induced by an adjoint
/// retraction: the left functor recoats relations by `onto`, the right by
/// `back`, and the unit is the identity class.
pub struct LiftedRetraction {
    pub left: FunctorData,
    pub right: FunctorData,
    pub unit: Rc<dyn Fn(&Ob) -> Result<Mor>>,
}

pub fn lift_adjoint_retraction(
    ar: &AdjointRetraction,
    qp: &Rc<EqcDoctrine>,
    qr: &Rc<EqcDoctrine>,
) -> LiftedRetraction {
    let recoat = |from: &Rc<EqcDoctrine>,
                  map: Rc<dyn Fn(&Ob, &Fib) -> Result<Fib>>|
     -> Rc<dyn Fn(&Ob) -> Result<Ob>> {
        let from = from.clone();
        Rc::new(move |x: &Ob| {
            let (a, rho) = from.eqc_cat().parts(x)?;
            let sq_ob = rho.ob.clone();
            let moved = map(&sq_ob, &rho)?;
            Ok(Ob::rel(a, moved.data))
        })
    };
    let l_ob = recoat(qr, ar.onto.clone());
    let r_ob = recoat(qp, ar.back.clone());
    let l_ob2 = l_ob.clone();
    let r_ob2 = r_ob.clone();
    let left = FunctorData {
        src: qr.cat(),
        dst: qp.cat(),
        on_ob: l_ob.clone(),
        on_mor: Rc::new(move |m: &Mor| {
            Ok(Mor::new(l_ob2(&m.src)?, l_ob2(&m.dst)?, m.data.clone()))
        }),
        label: format!("{}.left", ar.label),
    };
    let right = FunctorData {
        src: qp.cat(),
        dst: qr.cat(),
        on_ob: r_ob.clone(),
        on_mor: Rc::new(move |m: &Mor| {
            Ok(Mor::new(r_ob2(&m.src)?, r_ob2(&m.dst)?, m.data.clone()))
        }),
        label: format!("{}.right", ar.label),
    };
    let qr2 = qr.clone();
    let l_ob3 = l_ob.clone();
    let r_ob3 = r_ob.clone();
    let unit = Rc::new(move |x: &Ob| -> Result<Mor> {
        let rl = r_ob3(&l_ob3(x)?)?;
        let (a, _) = qr2.eqc_cat().parts(x)?;
        let id = qr2.base_doctrine().cat().identity(&a);
        Ok(Mor::new(x.clone(), rl, id.data))
    });
    LiftedRetraction { left, right, unit }
}
