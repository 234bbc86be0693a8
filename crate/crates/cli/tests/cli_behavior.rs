//! End-to-end behavior of the command-line runner: exit codes, report
//! determinism (including across worker counts), counterexample replay,
//! located input errors, and the bit-exact export round trip.

use std::path::{Path, PathBuf};
use std::process::Command;

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_eqcat"))
}

fn tmp(name: &str) -> PathBuf {
    let dir = std::env::temp_dir().join("eqcat-cli-tests");
    std::fs::create_dir_all(&dir).unwrap();
    dir.join(name)
}

fn write(name: &str, text: &str) -> PathBuf {
    let p = tmp(name);
    std::fs::write(&p, text).unwrap();
    p
}

const MINIMAL: &str = "\
[frame B2]
kind = bool

[doctrine P2]
kind = power
frame = B2

[fragment small]
size_cap = 2

[task primary]
kind = check
property = primary
doctrine = P2
fragment = small
";

#[test]
fn all_holds_exits_zero() {
    let ws = write("ok.eqws", MINIMAL);
    let out = bin().args(["check"]).arg(&ws).output().unwrap();
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
}

#[test]
fn empty_task_list_is_an_empty_all_holds_report() {
    let ws = write("empty.eqws", "[frame B2]\nkind = bool\n");
    let report = tmp("empty-report.json");
    let out = bin()
        .args(["check"])
        .arg(&ws)
        .args(["--report"])
        .arg(&report)
        .output()
        .unwrap();
    assert!(out.status.success());
    let v: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(&report).unwrap()).unwrap();
    assert_eq!(v["summary"]["total"], 0);
}

#[test]
fn failing_task_exits_one_and_replays() {
    let ws_text = "\
[frame H3]
kind = chain
size = 3

[doctrine PH3]
kind = power
frame = H3

[fragment small]
size_cap = 2

[task boolean]
kind = check
property = boolean
doctrine = PH3
fragment = small
";
    let ws = write("fail.eqws", ws_text);
    let cxdir = tmp("cx");
    let out = bin()
        .args(["check"])
        .arg(&ws)
        .args(["--cx-dir"])
        .arg(&cxdir)
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(1));
    let cx = cxdir.join("cx-boolean.json");
    assert!(cx.exists());
    let out = bin().args(["replay"]).arg(&cx).output().unwrap();
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stdout));
    assert!(String::from_utf8_lossy(&out.stdout).contains("reproduced"));
}

#[test]
fn input_errors_exit_two_with_position() {
    let ws = write("broken.eqws", "[frame F]\nnot a valid line\n");
    let out = bin().args(["check"]).arg(&ws).output().unwrap();
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("2:1"));
}

#[test]
fn dangling_reference_is_located() {
    let ws = write(
        "dangling.eqws",
        "[doctrine P]\nkind = power\nframe = NOPE\n",
    );
    let out = bin().args(["check"]).arg(&ws).output().unwrap();
    assert_eq!(out.status.code(), Some(2));
    let err = String::from_utf8_lossy(&out.stderr);
    assert!(err.contains("dangling reference"), "{err}");
    assert!(err.contains("NOPE"), "{err}");
}

fn digest_without_timing(path: &Path) -> serde_json::Value {
    let mut v: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(path).unwrap()).unwrap();
    v.as_object_mut().unwrap().remove("timing_ms");
    v
}

#[test]
fn reports_are_deterministic_across_runs_and_jobs() {
    let ws = write("det.eqws", MINIMAL);
    for (name, jobs) in [("det1.json", "1"), ("det2.json", "1"), ("det4.json", "4")] {
        let report = tmp(name);
        let out = bin()
            .args(["check"])
            .arg(&ws)
            .args(["--jobs", jobs, "--report"])
            .arg(&report)
            .output()
            .unwrap();
        assert!(out.status.success());
    }
    let a = digest_without_timing(&tmp("det1.json"));
    let b = digest_without_timing(&tmp("det2.json"));
    let c = digest_without_timing(&tmp("det4.json"));
    assert_eq!(a, b);
    assert_eq!(a, c);
}

#[test]
fn export_round_trip_is_byte_exact() {
    let ws_text = "\
[frame B2]
kind = bool

[doctrine P2]
kind = power
frame = B2

[fragment tiny]
size_cap = 1
hom_budget = 4096
fiber_budget = 4096
";
    let ws = write("exp.eqws", ws_text);
    let first = tmp("export1.eqws");
    let out = bin()
        .args(["export"])
        .arg(&ws)
        .args(["P2", "--fragment", "tiny", "-o"])
        .arg(&first)
        .output()
        .unwrap();
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    // reload the export next to a fragment declaration and re-export
    let mut reloaded = std::fs::read_to_string(&first).unwrap();
    reloaded.push_str("\n[fragment tiny]\nsize_cap = 1\nhom_budget = 4096\nfiber_budget = 4096\n");
    let ws2 = write("exp2.eqws", &reloaded);
    let second = tmp("export2.eqws");
    let out = bin()
        .args(["export"])
        .arg(&ws2)
        .args(["P2", "--fragment", "tiny", "-o"])
        .arg(&second)
        .output()
        .unwrap();
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    assert_eq!(
        std::fs::read(&first).unwrap(),
        std::fs::read(&second).unwrap(),
        "re-export of a reloaded export must be byte-identical"
    );
}

#[test]
fn reloaded_export_verifies() {
    let ws_text = "\
[frame H3]
kind = chain
size = 3

[doctrine PH3]
kind = power
frame = H3

[fragment tiny]
size_cap = 1
hom_budget = 4096
fiber_budget = 4096
";
    let ws = write("reload-src.eqws", ws_text);
    let exported = tmp("reload-exported.eqws");
    let out = bin()
        .args(["export"])
        .arg(&ws)
        .args(["PH3", "--fragment", "tiny", "-o"])
        .arg(&exported)
        .output()
        .unwrap();
    assert!(out.status.success());
    let mut text = std::fs::read_to_string(&exported).unwrap();
    text.push_str(
        "\n[fragment tiny]\nsize_cap = 1\nhom_budget = 4096\nfiber_budget = 4096\n\n\
         [task primary]\nkind = check\nproperty = primary\ndoctrine = PH3\nfragment = tiny\n\n\
         [task elementary]\nkind = check\nproperty = elementary\ndoctrine = PH3\nfragment = tiny\n",
    );
    let ws2 = write("reload-run.eqws", &text);
    let out = bin().args(["check"]).arg(&ws2).output().unwrap();
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
}

#[test]
fn acceptance_workspace_is_all_holds() {
    let ws = Path::new(env!("CARGO_MANIFEST_DIR"))
        .join("../../workspaces/acceptance.eqws");
    let report = tmp("acceptance-report.json");
    let out = bin()
        .args(["check"])
        .arg(&ws)
        .args(["--report"])
        .arg(&report)
        .output()
        .unwrap();
    assert!(
        out.status.success(),
        "acceptance workspace must be all-holds:\n{}",
        String::from_utf8_lossy(&out.stderr)
    );
    let v: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(&report).unwrap()).unwrap();
    assert_eq!(v["summary"]["fails"], 0);
    assert_eq!(v["summary"]["other"], 0);
}
