//! Exporting a doctrine fragment in the workspace text format: a presented
//! category section plus a tabulated doctrine section. Re-exporting a
//! reloaded export is byte-identical.

use crate::build::Materialized;
use anyhow::{anyhow, bail, Result};
use eqcat::doctrine::Doc;
use eqcat::kernel::{CatOps, Fragment, Mor, Ob};
use std::fmt::Write as _;

struct Named {
    objects: Vec<Ob>,
    arrows: Vec<Mor>,
}

impl Named {
    fn ob_index(&self, o: &Ob) -> Option<usize> {
        self.objects.iter().position(|x| x == o)
    }

    /// Arrow name as referenced from the category section: declared arrows
    /// are `a<k>`, identities are auto-added by the loader as `id_o<i>`.
    fn arrow_name(&self, cat: &dyn CatOps, m: &Mor) -> Option<String> {
        for (k, a) in self.arrows.iter().enumerate() {
            if a.src == m.src && a.dst == m.dst && cat.equal_mor(a, m) {
                return Some(format!("a{k}"));
            }
        }
        // identities
        let i = self.ob_index(&m.src)?;
        if m.src == m.dst && cat.equal_mor(m, &cat.identity(&m.src)) {
            return Some(format!("id_o{i}"));
        }
        None
    }

    /// Arrow reference as used from the doctrine section:
    /// `ar#<builder-index>@ob#<src>:ob#<dst>`.
    fn arrow_ref(&self, cat: &dyn CatOps, m: &Mor) -> Option<String> {
        for (k, a) in self.arrows.iter().enumerate() {
            if a.src == m.src && a.dst == m.dst && cat.equal_mor(a, m) {
                let si = self.ob_index(&m.src)?;
                let di = self.ob_index(&m.dst)?;
                return Some(format!("ar#{k}@ob#{si}:ob#{di}"));
            }
        }
        let i = self.ob_index(&m.src)?;
        if m.src == m.dst && cat.equal_mor(m, &cat.identity(&m.src)) {
            return Some(format!("ar#{}@ob#{i}:ob#{i}", self.arrows.len() + i));
        }
        None
    }
}

pub fn export_doctrine(m: &Materialized, name: &str, fragment_name: &str) -> Result<String> {
    let d: Doc = m
        .doctrines
        .get(name)
        .cloned()
        .ok_or_else(|| anyhow!("unknown doctrine `{name}`"))?;
    let frag: Fragment = m
        .fragments
        .get(fragment_name)
        .cloned()
        .ok_or_else(|| anyhow!("unknown fragment `{fragment_name}`"))?;
    let cat = d.cat();

    // objects: fragment objects plus the terminal, restricted to fibres the
    // budget can enumerate
    let mut objects = cat.objects(&frag);
    let t = cat.terminal();
    if !objects.contains(&t) {
        objects.push(t);
    }
    let mut fibers: Vec<Vec<eqcat::doctrine::Fib>> = Vec::new();
    let mut kept: Vec<Ob> = Vec::new();
    for o in objects {
        match d.enum_fiber(&o, frag.fiber_budget) {
            Ok(f) => {
                kept.push(o);
                fibers.push(f);
            }
            Err(eqcat::Error::Budget { .. }) => {}
            Err(e) => bail!("cannot enumerate the fibre over {o}: {e}"),
        }
    }
    let objects = kept;

    // arrows: all fragment homs, excluding identity classes
    let mut arrows: Vec<Mor> = Vec::new();
    for a in &objects {
        for b in &objects {
            let hs = cat
                .hom(a, b, frag.hom_budget)
                .map_err(|e| anyhow!("cannot enumerate hom({a}, {b}): {e}"))?;
            for h in hs {
                if a == b && cat.equal_mor(&h, &cat.identity(a)) {
                    continue;
                }
                arrows.push(h);
            }
        }
    }
    let named = Named {
        objects: objects.clone(),
        arrows: arrows.clone(),
    };

    let mut out = String::new();
    writeln!(out, "[category {name}.base]").unwrap();
    writeln!(out, "kind = presented").unwrap();
    let obj_names: Vec<String> = (0..objects.len()).map(|i| format!("o{i}")).collect();
    writeln!(out, "objects = {}", obj_names.join(" ")).unwrap();
    for (k, a) in arrows.iter().enumerate() {
        let si = named.ob_index(&a.src).unwrap();
        let di = named.ob_index(&a.dst).unwrap();
        writeln!(out, "arrow a{k} = o{si} o{di}").unwrap();
    }
    for (k, f) in arrows.iter().enumerate() {
        for (l, g) in arrows.iter().enumerate() {
            if f.dst != g.src {
                continue;
            }
            let comp = cat
                .compose(g, f)
                .map_err(|e| anyhow!("composition failed during export: {e}"))?;
            let cname = named
                .arrow_name(cat.as_ref(), &comp)
                .ok_or_else(|| anyhow!("composite of a{k} and a{l} escapes the fragment"))?;
            writeln!(out, "compose a{l} a{k} = {cname}").unwrap();
        }
    }
    let ti = named.ob_index(&cat.terminal()).unwrap();
    writeln!(out, "terminal = o{ti}").unwrap();
    for (i, a) in objects.iter().enumerate() {
        for (j, b) in objects.iter().enumerate() {
            let Ok(p) = cat.product(a, b) else { continue };
            let Some(ci) = named.ob_index(&p.ob) else { continue };
            let (Some(n1), Some(n2)) = (
                named.arrow_name(cat.as_ref(), &p.pr1),
                named.arrow_name(cat.as_ref(), &p.pr2),
            ) else {
                continue;
            };
            writeln!(out, "product o{i} o{j} = o{ci} {n1} {n2}").unwrap();
        }
    }

    writeln!(out).unwrap();
    writeln!(out, "[doctrine {name}]").unwrap();
    writeln!(out, "kind = presented").unwrap();
    writeln!(out, "category = {name}.base").unwrap();
    for (i, fib) in fibers.iter().enumerate() {
        writeln!(out, "fiber ob#{i} = {}", fib.len()).unwrap();
        let mut bits = Vec::with_capacity(fib.len() * fib.len());
        for x in fib {
            for y in fib {
                bits.push(if d.leq(x, y) { "1" } else { "0" });
            }
        }
        writeln!(out, "leq ob#{i} = {}", bits.join(" ")).unwrap();
    }
    // reindex tables for declared arrows and identities
    let mut emit_reindex = |mor: &Mor, label: String| -> Result<()> {
        let si = named.ob_index(&mor.src).unwrap();
        let di = named.ob_index(&mor.dst).unwrap();
        let mut table = Vec::new();
        for y in &fibers[di] {
            let moved = d
                .reindex(mor, y)
                .map_err(|e| anyhow!("reindex failed during export: {e}"))?;
            let pos = fibers[si]
                .iter()
                .position(|x| x.data == moved.data)
                .ok_or_else(|| anyhow!("reindexed element escapes the fibre over {}", mor.src))?;
            table.push(pos.to_string());
        }
        writeln!(out, "reindex {label} = {}", table.join(" ")).unwrap();
        Ok(())
    };
    for a in &arrows {
        let label = named.arrow_ref(cat.as_ref(), a).unwrap();
        emit_reindex(a, label)?;
    }
    for (i, o) in objects.iter().enumerate() {
        let id = cat.identity(o);
        emit_reindex(&id, format!("ar#{}@ob#{i}:ob#{i}", arrows.len() + i))?;
    }
    // fibred equalities whose square is exported
    for (i, o) in objects.iter().enumerate() {
        let Ok(delta) = d.diagonal(o) else { continue };
        let Ok(sq) = cat.product(o, o) else { continue };
        let Some(si) = named.ob_index(&sq.ob) else { continue };
        let Some(pos) = fibers[si].iter().position(|x| x.data == delta.data) else {
            continue;
        };
        writeln!(out, "diag ob#{i} = {pos}").unwrap();
    }
    // comprehensions whose carrier and arrow stay inside the fragment
    for (i, fib) in fibers.iter().enumerate() {
        for (e, x) in fib.iter().enumerate() {
            let Ok(mor) = d.comprehension(x) else { continue };
            if named.ob_index(&mor.src).is_none() {
                continue;
            }
            let Some(r) = named.arrow_ref(cat.as_ref(), &mor) else {
                continue;
            };
            writeln!(out, "compr ob#{i} {e} = {r}").unwrap();
        }
    }
    Ok(out)
}
