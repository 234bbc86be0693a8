//! Materializes workspace declarations: frames, categories, doctrines,
//! topologies and fragments, in declaration order with dangling-reference
//! errors located at the offending entry.

use crate::format::{Section, WorkspaceFile};
use anyhow::{anyhow, bail, Context, Result};
use eqcat::completions::{
    comprehension_completion, eqc, extensional_collapse, functional_completion, intensional_qc,
    EqcDoctrine,
};
use eqcat::corpus;
use eqcat::doctrine::{Doc, TabulatedDoctrineBuilder, WeakSubDoctrine};
use eqcat::kernel::{Cat, Fragment, Ob, PosetCat, PresentedCat};
use eqcat::lattice::Lattice;
use eqcat::topology::{closed_subdoctrine, TopologyJ};
use std::collections::BTreeMap;
use std::rc::Rc;

pub struct Materialized {
    pub frames: BTreeMap<String, Rc<Lattice>>,
    pub cats: BTreeMap<String, Cat>,
    pub doctrines: BTreeMap<String, Doc>,
    pub eqcs: BTreeMap<String, Rc<EqcDoctrine>>,
    pub topologies: BTreeMap<String, TopologyJ>,
    pub fragments: BTreeMap<String, Fragment>,
}

impl Materialized {
    pub fn frame(&self, s: &Section, key: &str) -> Result<Rc<Lattice>> {
        let name = s.scalar(key)?;
        self.frames.get(name).cloned().ok_or_else(|| {
            anyhow!(
                "{}: dangling reference to frame `{name}`",
                s.expect_one(key).map(|e| e.pos.clone()).unwrap_or(s.pos.clone())
            )
        })
    }

    pub fn doctrine(&self, s: &Section, key: &str) -> Result<Doc> {
        let name = s.scalar(key)?;
        self.doctrines.get(name).cloned().ok_or_else(|| {
            anyhow!(
                "{}: dangling reference to doctrine `{name}`",
                s.expect_one(key).map(|e| e.pos.clone()).unwrap_or(s.pos.clone())
            )
        })
    }

    pub fn eqc_doctrine(&self, s: &Section, key: &str) -> Result<Rc<EqcDoctrine>> {
        let name = s.scalar(key)?;
        self.eqcs.get(name).cloned().ok_or_else(|| {
            anyhow!(
                "{}: `{name}` is not a quotient completion (the task needs one)",
                s.pos
            )
        })
    }

    pub fn fragment(&self, s: &Section, key: &str) -> Result<Fragment> {
        let name = s.scalar(key)?;
        self.fragments.get(name).cloned().ok_or_else(|| {
            anyhow!(
                "{}: dangling reference to fragment `{name}`",
                s.expect_one(key).map(|e| e.pos.clone()).unwrap_or(s.pos.clone())
            )
        })
    }

    pub fn topology(&self, s: &Section, key: &str) -> Result<TopologyJ> {
        let name = s.scalar(key)?;
        self.topologies.get(name).cloned().ok_or_else(|| {
            anyhow!(
                "{}: dangling reference to topology `{name}`",
                s.expect_one(key).map(|e| e.pos.clone()).unwrap_or(s.pos.clone())
            )
        })
    }
}

fn build_frame(s: &Section) -> Result<Lattice> {
    match s.scalar_or("kind", "custom").as_str() {
        "bool" => Ok(Lattice::bool2()),
        "chain" => {
            let n: usize = s.scalar("size")?.parse().context("chain size")?;
            if n == 0 {
                bail!("{}: a chain needs at least one element", s.pos);
            }
            Ok(Lattice::chain(n))
        }
        "m3" => Ok(Lattice::m3()),
        "custom" => {
            let elements: Vec<String> = s.expect_one("elements")?.value.clone();
            let n = elements.len();
            let index = |w: &str| -> Result<usize> {
                elements
                    .iter()
                    .position(|e| e == w)
                    .ok_or_else(|| anyhow!("unknown element `{w}`"))
            };
            let mut leq = vec![false; n * n];
            for i in 0..n {
                leq[i * n + i] = true;
            }
            if let Some(e) = s.get("leq") {
                for pair in &e.value {
                    let Some((a, b)) = pair.split_once("<=") else {
                        bail!("{}: order entries look like `a<=b`", e.pos);
                    };
                    leq[index(a)? * n + index(b)?] = true;
                }
            }
            // transitive closure
            for k in 0..n {
                for i in 0..n {
                    for j in 0..n {
                        if leq[i * n + k] && leq[k * n + j] {
                            leq[i * n + j] = true;
                        }
                    }
                }
            }
            Lattice::from_order(elements, leq)
                .map_err(|e| anyhow!("{}: invalid frame: {e}", s.pos))
        }
        other => bail!("{}: unknown frame kind `{other}`", s.pos),
    }
}

fn build_category(s: &Section, m: &Materialized) -> Result<Cat> {
    match s.scalar("kind")? {
        "finset" => Ok(corpus::finset()),
        "poset" => {
            let frame = m.frame(s, "frame")?;
            Ok(Rc::new(PosetCat::new(&s.name, frame)) as Cat)
        }
        "presented" => {
            let mut b = PresentedCat::builder(&s.name);
            for o in &s.expect_one("objects")?.value {
                b.object(o);
            }
            for e in s.get_all("arrow") {
                // arrow f : x -> y   parsed as key=arrow args=[f, :, x, ->, y] value absent
                // we instead accept `arrow f = x y`
                if e.args.len() != 1 || e.value.len() != 2 {
                    bail!("{}: arrow entries look like `arrow f = src dst`", e.pos);
                }
                b.arrow(&e.args[0], &e.value[0], &e.value[1]);
            }
            for e in s.get_all("compose") {
                if e.args.len() != 2 || e.value.len() != 1 {
                    bail!("{}: compose entries look like `compose g f = h`", e.pos);
                }
                b.comp(&e.args[0], &e.args[1], &e.value[0]);
            }
            if let Some(e) = s.get("terminal") {
                if e.value.len() != 1 {
                    bail!("{}: `terminal` expects one object", e.pos);
                }
                b.terminal(&e.value[0]);
            }
            for e in s.get_all("product") {
                if e.args.len() != 2 || e.value.len() != 3 {
                    bail!(
                        "{}: product entries look like `product a b = carrier pr1 pr2`",
                        e.pos
                    );
                }
                b.product(&e.args[0], &e.args[1], &e.value[0], &e.value[1], &e.value[2]);
            }
            for e in s.get_all("pullback") {
                if e.args.len() != 2 || e.value.len() != 3 {
                    bail!(
                        "{}: pullback entries look like `pullback f g = carrier p1 p2`",
                        e.pos
                    );
                }
                b.pullback(&e.args[0], &e.args[1], &e.value[0], &e.value[1], &e.value[2]);
            }
            let cat = b
                .build()
                .map_err(|err| anyhow!("{}: invalid presentation: {err}", s.pos))?;
            Ok(Rc::new(cat) as Cat)
        }
        other => bail!("{}: unknown category kind `{other}`", s.pos),
    }
}

fn poset_objects(frame: &Lattice) -> Vec<Ob> {
    (0..frame.len() as u32).map(Ob::Named).collect()
}

fn build_doctrine(
    s: &Section,
    m: &mut Materialized,
    hom_budget: usize,
) -> Result<()> {
    let doc: Doc = match s.scalar("kind")? {
        "power" => {
            let frame = m.frame(s, "frame")?;
            corpus::power_doctrine(&s.name, frame) as Doc
        }
        "sub" => {
            let frame = m.frame(s, "frame")?;
            let cat: Cat = Rc::new(PosetCat::new(&format!("{}.base", s.name), frame.clone()));
            Rc::new(
                eqcat::doctrine::sub_doctrine(&s.name, cat, &poset_objects(&frame), hom_budget)
                    .map_err(|e| anyhow!("{}: {e}", s.pos))?,
            ) as Doc
        }
        "weaksub" => match s.scalar_or("base", "finset").as_str() {
            "finset" => Rc::new(WeakSubDoctrine::finset()) as Doc,
            _ => {
                let frame = m.frame(s, "frame")?;
                let cat: Cat = Rc::new(PosetCat::new(&format!("{}.base", s.name), frame.clone()));
                Rc::new(
                    eqcat::doctrine::weaksub_doctrine(
                        &s.name,
                        cat,
                        &poset_objects(&frame),
                        hom_budget,
                    )
                    .map_err(|e| anyhow!("{}: {e}", s.pos))?,
                ) as Doc
            }
        },
        "eqc" => {
            let of = m.doctrine(s, "of")?;
            let q = eqc(&of, &s.name, hom_budget);
            m.eqcs.insert(s.name.clone(), q.clone());
            q as Doc
        }
        "intensional" => {
            let of = m.doctrine(s, "of")?;
            intensional_qc(&of, &s.name, hom_budget) as Doc
        }
        "collapse" => {
            let of = m.doctrine(s, "of")?;
            extensional_collapse(&of, &s.name) as Doc
        }
        "comprehension" => {
            let of = m.doctrine(s, "of")?;
            comprehension_completion(&of, &s.name) as Doc
        }
        "functional" => {
            let of = m.doctrine(s, "of")?;
            functional_completion(&of, &s.name) as Doc
        }
        "closed" => {
            let of = m.doctrine(s, "of")?;
            let j = m.topology(s, "topology")?;
            closed_subdoctrine(&of, &j, &s.name) as Doc
        }
        "presented" => build_presented_doctrine(s, m)?,
        other => bail!("{}: unknown doctrine kind `{other}`", s.pos),
    };
    m.doctrines.insert(s.name.clone(), doc);
    Ok(())
}

fn build_presented_doctrine(s: &Section, m: &Materialized) -> Result<Doc> {
    let cat_name = s.scalar("category")?;
    let cat = m
        .cats
        .get(cat_name)
        .cloned()
        .ok_or_else(|| anyhow!("{}: dangling reference to category `{cat_name}`", s.pos))?;
    let mut builder = TabulatedDoctrineBuilder::new(&s.name, cat.clone());
    // object order follows the fibre entries
    for e in s.get_all("fiber") {
        if e.args.len() != 1 || e.value.len() != 1 {
            bail!("{}: fibre entries look like `fiber <object> = <size>`", e.pos);
        }
        let ob = resolve_object(&cat, &e.args[0])
            .ok_or_else(|| anyhow!("{}: unknown object `{}`", e.pos, e.args[0]))?;
        let size: usize = e.value[0].parse().context("fibre size")?;
        let leq_entry = s
            .get_all("leq")
            .find(|l| l.args.first() == Some(&e.args[0]))
            .ok_or_else(|| anyhow!("{}: fibre over `{}` has no order table", e.pos, e.args[0]))?;
        let bits: Vec<bool> = leq_entry
            .value
            .iter()
            .map(|w| w == "1")
            .collect();
        if bits.len() != size * size {
            bail!(
                "{}: order table over `{}` needs {} entries",
                leq_entry.pos,
                e.args[0],
                size * size
            );
        }
        let names = (0..size).map(|i| format!("e{i}")).collect();
        let lattice = Lattice::from_order(names, bits)
            .map_err(|err| anyhow!("{}: invalid fibre: {err}", leq_entry.pos))?;
        builder.obs.push(ob);
        builder.fibers.push(lattice);
        builder.diag.push(None);
    }
    for e in s.get_all("diag") {
        if e.args.len() != 1 || e.value.len() != 1 {
            bail!("{}: diagonal entries look like `diag <object> = <index>`", e.pos);
        }
        let ob = resolve_object(&cat, &e.args[0])
            .ok_or_else(|| anyhow!("{}: unknown object `{}`", e.pos, e.args[0]))?;
        let idx = builder
            .obs
            .iter()
            .position(|o| *o == ob)
            .ok_or_else(|| anyhow!("{}: object `{}` has no fibre", e.pos, e.args[0]))?;
        builder.diag[idx] = Some(e.value[0].parse().context("diagonal index")?);
    }
    for e in s.get_all("reindex") {
        if e.args.len() != 1 {
            bail!("{}: reindex entries look like `reindex <arrow> = <table>`", e.pos);
        }
        let mor = resolve_arrow(&cat, &e.args[0])
            .ok_or_else(|| anyhow!("{}: unknown arrow `{}`", e.pos, e.args[0]))?;
        let table: Vec<usize> = e
            .value
            .iter()
            .map(|w| w.parse().context("reindex entry"))
            .collect::<Result<_>>()?;
        builder.reindex.insert(mor, table);
    }
    for e in s.get_all("compr") {
        if e.args.len() != 2 || e.value.len() != 1 {
            bail!(
                "{}: comprehension entries look like `compr <object> <elem> = <arrow>`",
                e.pos
            );
        }
        let ob = resolve_object(&cat, &e.args[0])
            .ok_or_else(|| anyhow!("{}: unknown object `{}`", e.pos, e.args[0]))?;
        let oi = builder
            .obs
            .iter()
            .position(|o| *o == ob)
            .ok_or_else(|| anyhow!("{}: object `{}` has no fibre", e.pos, e.args[0]))?;
        let ei: usize = e.args[1].parse().context("element index")?;
        let mor = resolve_arrow(&cat, &e.value[0])
            .ok_or_else(|| anyhow!("{}: unknown arrow `{}`", e.pos, e.value[0]))?;
        builder.compr.insert((oi, ei), mor);
    }
    let d = builder
        .build()
        .map_err(|e| anyhow!("{}: invalid doctrine tables: {e}", s.pos))?;
    Ok(Rc::new(d) as Doc)
}

pub fn resolve_object(_cat: &Cat, name: &str) -> Option<Ob> {
    if let Some(rest) = name.strip_prefix("fin:") {
        return rest.parse().ok().map(Ob::Fin);
    }
    // presented/poset categories expose dense indices through `ob#i`
    if let Some(rest) = name.strip_prefix("ob#") {
        return rest.parse().ok().map(Ob::Named);
    }
    None
}

pub fn resolve_arrow(cat: &Cat, name: &str) -> Option<eqcat::kernel::Mor> {
    // arrows are referenced positionally as `ar#<idx>@src:dst`
    if let Some(rest) = name.strip_prefix("ar#") {
        let (idx, endpoints) = rest.split_once('@')?;
        let (src, dst) = endpoints.split_once(':')?;
        let m = eqcat::kernel::Mor::new(
            resolve_object(cat, src)?,
            resolve_object(cat, dst)?,
            eqcat::kernel::MorData::Named(idx.parse().ok()?),
        );
        return Some(m);
    }
    None
}

fn build_topology(s: &Section, m: &Materialized) -> Result<TopologyJ> {
    let of = m.doctrine(s, "of")?;
    match s.scalar("kind")? {
        "identity" => Ok(TopologyJ::identity(&of)),
        "double_negation" => Ok(TopologyJ::double_negation(&of)),
        "const_top" => Ok(TopologyJ::const_top(&of)),
        other => bail!("{}: unknown topology kind `{other}`", s.pos),
    }
}

fn build_fragment(s: &Section, budget_override: Option<usize>) -> Result<Fragment> {
    let size_cap: u32 = s.scalar_or("size_cap", "2").parse().context("size_cap")?;
    let hom_budget: usize = s
        .scalar_or("hom_budget", "65536")
        .parse()
        .context("hom_budget")?;
    let fiber_budget: usize = s
        .scalar_or("fiber_budget", "65536")
        .parse()
        .context("fiber_budget")?;
    let mut f = Fragment::sized(size_cap).with_budgets(hom_budget, fiber_budget);
    if let Some(b) = budget_override {
        f = f.with_budgets(b, b);
    }
    Ok(f)
}

/// Materializes every declaration, in order.
pub fn materialize(file: &WorkspaceFile, budget_override: Option<usize>) -> Result<Materialized> {
    let mut m = Materialized {
        frames: BTreeMap::new(),
        cats: BTreeMap::new(),
        doctrines: BTreeMap::new(),
        eqcs: BTreeMap::new(),
        topologies: BTreeMap::new(),
        fragments: BTreeMap::new(),
    };
    let hom_budget = budget_override.unwrap_or(1 << 16);
    for s in &file.sections {
        match s.kind.as_str() {
            "frame" => {
                let l = build_frame(s)?;
                m.frames.insert(s.name.clone(), Rc::new(l));
            }
            "category" => {
                let c = build_category(s, &m)?;
                m.cats.insert(s.name.clone(), c);
            }
            "doctrine" => build_doctrine(s, &mut m, hom_budget)?,
            "topology" => {
                let j = build_topology(s, &m)?;
                m.topologies.insert(s.name.clone(), j);
            }
            "fragment" => {
                let f = build_fragment(s, budget_override)?;
                m.fragments.insert(s.name.clone(), f);
            }
            "task" => {}
            other => bail!("{}: unknown section `{other}`", s.pos),
        }
    }
    Ok(m)
}
