//! Command-line front end: load a workspace file, run its declarations and
//! tasks, emit deterministic reports, export doctrine fragments, and replay
//! recorded counterexamples.

mod build;
mod crosschecks;
mod export;
mod format;
mod mutation;
mod report;
mod tasks;

use anyhow::{anyhow, bail, Context, Result};
use clap::{Parser, Subcommand};
use std::path::PathBuf;
use std::process::ExitCode;
use std::time::Instant;

#[derive(Parser)]
#[command(name = "eqcat", about = "doctrine laboratory runner", version)]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Parse and materialize a workspace, validating every declaration.
    Build { workspace: PathBuf },
    /// Run all tasks of a workspace and emit the report.
    Check {
        workspace: PathBuf,
        /// Override hom/fibre enumeration budgets.
        #[arg(long)]
        budget: Option<usize>,
        /// Worker threads for task-level parallelism (deterministic merge).
        #[arg(long, default_value_t = 1)]
        jobs: usize,
        /// Seed for mutation-test generation only.
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Write the JSON report here.
        #[arg(long)]
        report: Option<PathBuf>,
        /// Write the markdown summary here.
        #[arg(long)]
        markdown: Option<PathBuf>,
        /// Write standalone counterexample files into this directory.
        #[arg(long)]
        cx_dir: Option<PathBuf>,
    },
    /// Export a doctrine fragment in the workspace text format.
    Export {
        workspace: PathBuf,
        doctrine: String,
        #[arg(long)]
        fragment: String,
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
    /// Re-run the task recorded in a counterexample file and confirm the
    /// counterexample reproduces.
    Replay { counterexample: PathBuf },
}

fn run_tasks(
    text: &str,
    budget: Option<usize>,
    jobs: usize,
    seed: u64,
) -> Result<Vec<tasks::TaskRecord>> {
    let file = format::parse(text)?;
    // validate all declarations up front
    build::materialize(&file, budget)?;
    let task_sections: Vec<usize> = file
        .sections
        .iter()
        .enumerate()
        .filter(|(_, s)| s.kind == "task")
        .map(|(i, _)| i)
        .collect();
    let n = task_sections.len();
    let mut results: Vec<Option<Result<tasks::TaskRecord>>> = Vec::new();
    results.resize_with(n, || None);
    if jobs <= 1 {
        let m = build::materialize(&file, budget)?;
        for (k, &si) in task_sections.iter().enumerate() {
            let s = &file.sections[si];
            let start = Instant::now();
            let mut r = tasks::run_task(s, &m, seed);
            if let Ok(rec) = &mut r {
                rec.millis = start.elapsed().as_millis();
            }
            results[k] = Some(r);
        }
    } else {
        // task-level parallelism: each worker materializes its own copy of
        // the workspace (doctrines are not shared across threads), results
        // merge in declaration order
        let chunks: Vec<Vec<usize>> = (0..jobs)
            .map(|w| (w..n).step_by(jobs).collect())
            .collect();
        let outputs: Vec<Vec<(usize, Result<tasks::TaskRecord>)>> = std::thread::scope(|scope| {
            let mut handles = Vec::new();
            for chunk in &chunks {
                let text = text.to_string();
                let chunk = chunk.clone();
                handles.push(scope.spawn(move || {
                    let mut out = Vec::new();
                    let parsed = match format::parse(&text) {
                        Ok(p) => p,
                        Err(e) => {
                            if let Some(&k) = chunk.first() {
                                out.push((k, Err(e)));
                            }
                            return out;
                        }
                    };
                    let tsecs: Vec<usize> = parsed
                        .sections
                        .iter()
                        .enumerate()
                        .filter(|(_, s)| s.kind == "task")
                        .map(|(i, _)| i)
                        .collect();
                    let m = match build::materialize(&parsed, budget) {
                        Ok(m) => m,
                        Err(e) => {
                            if let Some(&k) = chunk.first() {
                                out.push((k, Err(e)));
                            }
                            return out;
                        }
                    };
                    for k in chunk {
                        let s = &parsed.sections[tsecs[k]];
                        let start = Instant::now();
                        let mut r = tasks::run_task(s, &m, seed);
                        if let Ok(rec) = &mut r {
                            rec.millis = start.elapsed().as_millis();
                        }
                        out.push((k, r));
                    }
                    out
                }));
            }
            handles.into_iter().map(|h| h.join().unwrap()).collect()
        });
        for chunk in outputs {
            for (k, r) in chunk {
                results[k] = Some(r);
            }
        }
    }
    let mut records = Vec::with_capacity(n);
    for r in results {
        records.push(r.ok_or_else(|| anyhow!("task scheduling hole"))??);
    }
    Ok(records)
}

fn main() -> ExitCode {
    match main_inner() {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}

fn main_inner() -> Result<ExitCode> {
    let cli = Cli::parse();
    match cli.cmd {
        Cmd::Build { workspace } => {
            let text = std::fs::read_to_string(&workspace)
                .with_context(|| format!("reading {}", workspace.display()))?;
            let file = format::parse(&text)?;
            let m = build::materialize(&file, None)?;
            println!(
                "ok: {} frames, {} categories, {} doctrines, {} topologies, {} fragments, {} tasks",
                m.frames.len(),
                m.cats.len(),
                m.doctrines.len(),
                m.topologies.len(),
                m.fragments.len(),
                file.of_kind("task").count(),
            );
            Ok(ExitCode::SUCCESS)
        }
        Cmd::Check {
            workspace,
            budget,
            jobs,
            seed,
            report: report_path,
            markdown,
            cx_dir,
        } => {
            let text = std::fs::read_to_string(&workspace)
                .with_context(|| format!("reading {}", workspace.display()))?;
            let ws_digest = report::sha256_hex(text.as_bytes());
            let records = run_tasks(&text, budget, jobs, seed)?;
            let doc = report::full(&ws_digest, &records);
            let json = serde_json::to_string_pretty(&doc)?;
            match &report_path {
                Some(p) => std::fs::write(p, &json)?,
                None => println!("{json}"),
            }
            if let Some(p) = &markdown {
                std::fs::write(p, report::markdown(&records))?;
            }
            if let Some(dir) = &cx_dir {
                std::fs::create_dir_all(dir)?;
                for r in &records {
                    if let Some(v) =
                        report::counterexample_file(&workspace.display().to_string(), &ws_digest, r)
                    {
                        std::fs::write(
                            dir.join(format!("cx-{}.json", r.id)),
                            serde_json::to_string_pretty(&v)?,
                        )?;
                    }
                }
            }
            for r in &records {
                eprintln!("{}: {} (checked {}, skipped {})", r.id, r.verdict, r.checked, r.skipped);
            }
            let all_hold = records.iter().all(|r| r.verdict == "holds");
            Ok(if all_hold {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(1)
            })
        }
        Cmd::Export {
            workspace,
            doctrine,
            fragment,
            output,
        } => {
            let text = std::fs::read_to_string(&workspace)
                .with_context(|| format!("reading {}", workspace.display()))?;
            let file = format::parse(&text)?;
            let m = build::materialize(&file, None)?;
            let out = export::export_doctrine(&m, &doctrine, &fragment)?;
            match output {
                Some(p) => std::fs::write(p, out)?,
                None => print!("{out}"),
            }
            Ok(ExitCode::SUCCESS)
        }
        Cmd::Replay { counterexample } => {
            let text = std::fs::read_to_string(&counterexample)
                .with_context(|| format!("reading {}", counterexample.display()))?;
            let v: serde_json::Value = serde_json::from_str(&text)?;
            let ws_path = v["workspace"]
                .as_str()
                .ok_or_else(|| anyhow!("counterexample file has no workspace path"))?;
            let task_id = v["task"]
                .as_str()
                .ok_or_else(|| anyhow!("counterexample file has no task id"))?;
            let recorded = &v["counterexample"];
            let ws_text = std::fs::read_to_string(ws_path)
                .with_context(|| format!("reading {ws_path}"))?;
            if let Some(d) = v["workspace_digest"].as_str() {
                let now = report::sha256_hex(ws_text.as_bytes());
                if d != now {
                    bail!("workspace has changed since the counterexample was recorded");
                }
            }
            let file = format::parse(&ws_text)?;
            let m = build::materialize(&file, None)?;
            let section = file
                .find("task", task_id)
                .ok_or_else(|| anyhow!("task `{task_id}` not found in the workspace"))?;
            let rec = tasks::run_task(section, &m, 0)?;
            match &rec.counterexample {
                Some(cx) if cx == recorded => {
                    println!("reproduced: task `{task_id}` still fails with the recorded counterexample");
                    Ok(ExitCode::SUCCESS)
                }
                Some(cx) => {
                    println!("diverged: task `{task_id}` fails with a different counterexample:\n{}",
                        serde_json::to_string_pretty(cx)?);
                    Ok(ExitCode::from(1))
                }
                None => {
                    println!("not reproduced: task `{task_id}` verdict is `{}`", rec.verdict);
                    Ok(ExitCode::from(1))
                }
            }
        }
    }
}
