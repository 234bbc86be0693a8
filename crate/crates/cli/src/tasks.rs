//! Task execution: each task names a construction or a check over declared
//! doctrines and fragments, and yields a verdict record with a replayable
//! counterexample on failure.

use crate::build::Materialized;
use crate::format::Section;
use crate::mutation;
use anyhow::{bail, Result};
use eqcat::completions::embed_nabla;
use eqcat::constructions::{
    check_closure_agreement, check_coarse_reflection, check_coproduct, coequalizer_eqc,
    projective_core, slice_exponential,
};
use eqcat::doctrine::{verify, Doctrine, Property};
use eqcat::kernel::{Fragment, Mor, Ob};
use eqcat::oracle::{check_equivalence, check_slice_exp, check_universal, Cx, Outcome, Verdict};
use serde_json::{json, Value};

#[derive(Debug, Clone)]
pub struct TaskRecord {
    pub id: String,
    pub kind: String,
    pub verdict: String,
    pub checked: u64,
    pub skipped: u64,
    pub counterexample: Option<Value>,
    pub details: Value,
    pub millis: u128,
}

fn cx_json(cx: &Cx) -> Value {
    Value::Array(
        cx.0.iter()
            .map(|(k, v)| json!({ "label": k, "value": v }))
            .collect(),
    )
}

fn record(id: &str, kind: &str, outcome: Outcome, details: Value) -> TaskRecord {
    let (verdict, cx) = match &outcome.verdict {
        Verdict::Holds => ("holds".to_string(), None),
        Verdict::Fails(cx) => ("fails".to_string(), Some(cx_json(cx))),
        Verdict::NotChecked(why) => (format!("not-checked: {why}"), None),
    };
    TaskRecord {
        id: id.to_string(),
        kind: kind.to_string(),
        verdict,
        checked: outcome.checked,
        skipped: outcome.skipped,
        counterexample: cx,
        details,
        millis: 0,
    }
}

fn slice_arrows_into(
    cat: &eqcat::kernel::Cat,
    target: &Ob,
    frag: &Fragment,
) -> Result<Vec<Mor>> {
    let mut out = Vec::new();
    for x in cat.objects(frag) {
        match cat.hom(&x, target, frag.hom_budget) {
            Ok(hs) => out.extend(hs),
            Err(eqcat::Error::Budget { .. }) => {}
            Err(e) => bail!("{e}"),
        }
    }
    Ok(out)
}

pub fn run_task(s: &Section, m: &Materialized, seed: u64) -> Result<TaskRecord> {
    let kind = s.scalar("kind")?;
    match kind {
        "check" => {
            let d = m.doctrine(s, "doctrine")?;
            let frag = m.fragment(s, "fragment")?;
            let pname = s.scalar("property")?;
            let Some(p) = Property::parse(pname) else {
                bail!("{}: unknown property `{pname}`", s.pos);
            };
            let report = verify(d.as_ref(), p, &frag);
            Ok(record(
                &s.name,
                "check",
                report.outcome,
                json!({ "property": pname, "doctrine": d.name() }),
            ))
        }
        "expect_fail" => {
            // the advertised-negative form of `check`: passes when the
            // property fails
            let d = m.doctrine(s, "doctrine")?;
            let frag = m.fragment(s, "fragment")?;
            let pname = s.scalar("property")?;
            let Some(p) = Property::parse(pname) else {
                bail!("{}: unknown property `{pname}`", s.pos);
            };
            let report = verify(d.as_ref(), p, &frag);
            let mut out = Outcome::new();
            match report.outcome.verdict {
                Verdict::Fails(cx) => {
                    out.pass();
                    let mut rec = record(
                        &s.name,
                        "expect_fail",
                        out,
                        json!({
                            "property": pname,
                            "doctrine": d.name(),
                            "witness": cx_json(&cx),
                        }),
                    );
                    rec.checked = report.outcome.checked;
                    return Ok(rec);
                }
                Verdict::Holds => out.fail(Cx::one(
                    "reason",
                    format!("property `{pname}` unexpectedly holds"),
                )),
                Verdict::NotChecked(why) => out.fail(Cx::one("reason", why)),
            }
            Ok(record(
                &s.name,
                "expect_fail",
                out,
                json!({ "property": pname, "doctrine": d.name() }),
            ))
        }
        "topology_laws" => {
            let j = m.topology(s, "topology")?;
            let frag = m.fragment(s, "fragment")?;
            let out = j.check_laws(&frag);
            Ok(record(&s.name, kind, out, json!({ "topology": j.label })))
        }
        "quotients" => {
            let d = m.doctrine(s, "doctrine")?;
            let frag = m.fragment(s, "fragment")?;
            let mut out = Outcome::new();
            for p in [
                Property::QuotientsEffective,
                Property::QuotientsStable,
                Property::QuotientsDescent,
            ] {
                out.merge(verify(d.as_ref(), p, &frag).outcome);
            }
            Ok(record(&s.name, kind, out.finish(), json!({ "doctrine": d.name() })))
        }
        "closure_agreement" => {
            let d = m.doctrine(s, "doctrine")?;
            let carrier: u32 = s.scalar_or("carrier", "2").parse()?;
            let budget: usize = s.scalar_or("budget", "65536").parse()?;
            let out = check_closure_agreement(d.as_ref(), &Ob::Fin(carrier), budget);
            Ok(record(
                &s.name,
                kind,
                out,
                json!({ "doctrine": d.name(), "carrier": carrier }),
            ))
        }
        "coproducts" => {
            let q = m.eqc_doctrine(s, "doctrine")?;
            let frag = m.fragment(s, "fragment")?;
            let mut out = Outcome::new();
            let obs = q.cat().objects(&frag);
            for a in &obs {
                for b in &obs {
                    out.merge(check_coproduct(&q, a, b, &frag));
                }
            }
            Ok(record(&s.name, kind, out.finish(), json!({ "pairs": "fragment sweep" })))
        }
        "classifier" => {
            let q = m.doctrine(s, "doctrine")?;
            let frag = m.fragment(s, "fragment")?;
            let report = verify(q.as_ref(), Property::StrongClassifier, &frag);
            Ok(record(&s.name, kind, report.outcome, json!({ "doctrine": q.name() })))
        }
        "slice_exponentials" => {
            let q = m.eqc_doctrine(s, "doctrine")?;
            let frag = m.fragment(s, "fragment")?;
            let cat = q.cat();
            let mut out = Outcome::new();
            let mut instances = 0u64;
            for target in cat.objects(&frag) {
                let arrows = slice_arrows_into(&cat, &target, &frag)?;
                for f in &arrows {
                    for g in &arrows {
                        instances += 1;
                        match slice_exponential(&q, f, g) {
                            Ok((se, _)) => {
                                let mut inner = frag.clone();
                                inner.include.push(se.w.clone());
                                inner.include.push(se.z.clone());
                                out.merge(check_slice_exp(&cat, f, g, &se, false, &inner));
                            }
                            Err(eqcat::Error::Budget { .. }) => out.skip(),
                            Err(e) => out.fail(
                                Cx::one("f", f.to_string())
                                    .push("g", g.to_string())
                                    .push("error", e.to_string()),
                            ),
                        }
                    }
                }
            }
            Ok(record(&s.name, kind, out.finish(), json!({ "instances": instances })))
        }
        "coequalizers" => {
            let q = m.eqc_doctrine(s, "doctrine")?;
            let frag = m.fragment(s, "fragment")?;
            let cat = q.cat();
            let mut out = Outcome::new();
            let obs = cat.objects(&frag);
            for a in &obs {
                for b in &obs {
                    let Ok(hs) = cat.hom(a, b, frag.hom_budget) else {
                        out.skip();
                        continue;
                    };
                    for f in &hs {
                        for g in &hs {
                            match coequalizer_eqc(&q, f, g) {
                                Ok(w) => out.merge(check_universal(&cat, &w, &frag)),
                                Err(e) => out.fail(
                                    Cx::one("f", f.to_string())
                                        .push("g", g.to_string())
                                        .push("error", e.to_string()),
                                ),
                            }
                        }
                    }
                }
            }
            Ok(record(&s.name, kind, out.finish(), json!({})))
        }
        "coarse_reflection" => {
            let q = m.eqc_doctrine(s, "doctrine")?;
            let frag = m.fragment(s, "fragment")?;
            let mut out = Outcome::new();
            for x in q.cat().objects(&frag) {
                out.merge(check_coarse_reflection(&q, &x, &frag));
            }
            Ok(record(&s.name, kind, out.finish(), json!({})))
        }
        "projective_core" => {
            let q = m.eqc_doctrine(s, "doctrine")?;
            let frag = m.fragment(s, "fragment")?;
            let report = projective_core(&q, &frag, frag.hom_budget)
                .map_err(|e| anyhow::anyhow!("{}: {e}", s.pos))?;
            let mut out = Outcome::new();
            out.merge(report.diagonal_objects_projective.clone());
            out.merge(report.products_closed.clone());
            out.merge(report.covering.clone());
            for o in [
                &report.reconstruction.functorial,
                &report.reconstruction.full,
                &report.reconstruction.faithful,
                &report.reconstruction.essentially_surjective,
            ] {
                out.merge(o.clone());
            }
            Ok(record(
                &s.name,
                kind,
                out.finish(),
                json!({ "projectives": report.projectives.len() }),
            ))
        }
        "nabla" => {
            let of = m.doctrine(s, "of")?;
            let q = m.eqc_doctrine(s, "doctrine")?;
            let frag = m.fragment(s, "fragment")?;
            let nab = embed_nabla(&of, &q).map_err(|e| anyhow::anyhow!("{e}"))?;
            let rep = check_equivalence(&nab.functor, &frag, &frag);
            let mut out = Outcome::new();
            out.merge(rep.functorial);
            out.merge(rep.full);
            out.merge(rep.faithful);
            Ok(record(&s.name, kind, out.finish(), json!({})))
        }
        "crosscheck" => {
            let name = s.scalar("name")?;
            let frag = m.fragment(s, "fragment")?;
            let out = crate::crosschecks::run(name, s, m, &frag)?;
            Ok(record(&s.name, kind, out, json!({ "name": name })))
        }
        "mutation" => {
            let name = s.scalar("name")?;
            let out = mutation::run(name, seed)?;
            Ok(record(&s.name, kind, out, json!({ "name": name, "seed": seed })))
        }
        other => bail!("{}: unknown task kind `{other}`", s.pos),
    }
}

