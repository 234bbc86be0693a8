//! Deterministic reports: a single JSON document with sorted keys whose
//! digest excludes the timing section, plus a markdown summary.

use crate::tasks::TaskRecord;
use serde_json::{json, Map, Value};
use sha2::{Digest, Sha256};

pub fn task_value(r: &TaskRecord) -> Value {
    json!({
        "id": r.id,
        "kind": r.kind,
        "verdict": r.verdict,
        "checked": r.checked,
        "skipped": r.skipped,
        "counterexample": r.counterexample.clone().unwrap_or(Value::Null),
        "details": r.details,
    })
}

/// The canonical report body, without timing and digest.
pub fn body(workspace_digest: &str, records: &[TaskRecord]) -> Value {
    let holds = records.iter().filter(|r| r.verdict == "holds").count();
    let fails = records.iter().filter(|r| r.verdict == "fails").count();
    json!({
        "workspace_digest": workspace_digest,
        "tasks": records.iter().map(task_value).collect::<Vec<_>>(),
        "summary": {
            "total": records.len(),
            "holds": holds,
            "fails": fails,
            "other": records.len() - holds - fails,
        },
    })
}

pub fn sha256_hex(bytes: &[u8]) -> String {
    let mut h = Sha256::new();
    h.update(bytes);
    let out = h.finalize();
    let mut s = String::with_capacity(64);
    for b in out {
        s.push_str(&format!("{b:02x}"));
    }
    s
}

/// The full report: body + its digest + timing (excluded from the digest).
pub fn full(workspace_digest: &str, records: &[TaskRecord]) -> Value {
    let b = body(workspace_digest, records);
    let digest = sha256_hex(serde_json::to_string(&b).unwrap().as_bytes());
    let mut top = match b {
        Value::Object(m) => m,
        _ => Map::new(),
    };
    top.insert("digest".into(), Value::String(digest));
    let timing: Map<String, Value> = records
        .iter()
        .map(|r| (r.id.clone(), json!(r.millis as u64)))
        .collect();
    top.insert("timing_ms".into(), Value::Object(timing));
    Value::Object(top)
}

pub fn markdown(records: &[TaskRecord]) -> String {
    let mut s = String::from("# Run report\n\n| task | kind | verdict | checked | skipped |\n|---|---|---|---|---|\n");
    for r in records {
        s.push_str(&format!(
            "| {} | {} | {} | {} | {} |\n",
            r.id, r.kind, r.verdict, r.checked, r.skipped
        ));
    }
    let fails: Vec<&TaskRecord> = records.iter().filter(|r| r.verdict == "fails").collect();
    if !fails.is_empty() {
        s.push_str("\n## Counterexamples\n\n");
        for r in fails {
            s.push_str(&format!(
                "- `{}`: {}\n",
                r.id,
                serde_json::to_string(&r.counterexample).unwrap_or_default()
            ));
        }
    }
    s
}

/// A standalone counterexample file for replay.
pub fn counterexample_file(
    workspace_path: &str,
    workspace_digest: &str,
    r: &TaskRecord,
) -> Option<Value> {
    r.counterexample.as_ref().map(|cx| {
        json!({
            "workspace": workspace_path,
            "workspace_digest": workspace_digest,
            "task": r.id,
            "verdict": r.verdict,
            "counterexample": cx,
        })
    })
}
