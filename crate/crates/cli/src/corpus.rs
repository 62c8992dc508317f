//! Experiment specifications and the corpus runner.

use std::collections::BTreeMap;
use std::path::{Path, PathBuf};
use std::sync::atomic::{AtomicUsize, Ordering};
use std::sync::Mutex;
use std::time::Instant;

use serde::{Deserialize, Serialize};
use serde_json::Value;

use sdw_core::{Error, Result};

use crate::report::{Done, Outcome};

/// One experiment: a command line and its expected outcome.
#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExperimentSpec {
    pub name: String,
    /// Arguments after the program name.
    pub command: Vec<String>,
    /// Files used by the command, relative to the spec; matching arguments are rewritten.
    #[serde(default)]
    pub inputs: Vec<String>,
    pub expect: Expectation,
    /// Wall-clock allowance for the run.
    #[serde(default)]
    pub max_seconds: Option<f64>,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Expectation {
    pub exit: i32,
    /// JSON pointers into the report, e.g. `/result/gamma`, with their expected values.
    #[serde(default)]
    pub fields: BTreeMap<String, Value>,
}

#[derive(Debug, Clone, Serialize)]
pub struct EntryResult {
    pub file: String,
    pub name: String,
    pub expected_exit: i32,
    pub exit: i32,
    pub pass: bool,
    pub problems: Vec<String>,
}

pub fn load_spec(path: &Path) -> Result<ExperimentSpec> {
    let text = std::fs::read_to_string(path).map_err(|e| Error::Io(format!("{}: {e}", path.display())))?;
    let spec: ExperimentSpec =
        serde_json::from_str(&text).map_err(|e| Error::Parse(format!("{}:{}: {e}", path.display(), e.line())))?;
    if spec.command.first().map(String::as_str) == Some("corpus") {
        return Err(Error::Parse(format!("{}: corpus entries cannot run a corpus", path.display())));
    }
    let base = path.parent().unwrap_or(Path::new("."));
    if let Some(missing) = spec.inputs.iter().find(|i| !base.join(i).exists()) {
        return Err(Error::Io(format!("{}: input `{missing}` does not exist", path.display())));
    }
    Ok(spec)
}

/// Runs one spec in-process and compares exit code and fields.
pub fn run_spec(path: &Path, spec: &ExperimentSpec) -> EntryResult {
    let base = path.parent().unwrap_or(Path::new("."));
    let mut argv = vec!["sdw".to_string(), "--json".to_string()];
    argv.extend(spec.command.iter().map(|a| {
        if spec.inputs.contains(a) { base.join(a).to_string_lossy().into_owned() } else { a.clone() }
    }));
    let start = Instant::now();
    let out = crate::run(&argv);
    let secs = start.elapsed().as_secs_f64();
    let mut problems = Vec::new();
    if out.code != spec.expect.exit {
        problems.push(format!("exit {} instead of {}", out.code, spec.expect.exit));
        if !out.stderr.is_empty() {
            problems.push(out.stderr.trim().to_string());
        }
    }
    let report = out.report.as_ref().map(|r| serde_json::to_value(r).expect("plain data"));
    for (pointer, want) in &spec.expect.fields {
        match report.as_ref().and_then(|r| r.pointer(pointer)) {
            None => problems.push(format!("report has no field {pointer}")),
            Some(got) if got != want => problems.push(format!("{pointer} is {got}, expected {want}")),
            Some(_) => {}
        }
    }
    if let Some(limit) = spec.max_seconds {
        if secs > limit {
            problems.push(format!("took {secs:.1}s, allowance {limit}s"));
        }
    }
    EntryResult {
        file: path.file_name().map(|f| f.to_string_lossy().into_owned()).unwrap_or_default(),
        name: spec.name.clone(),
        expected_exit: spec.expect.exit,
        exit: out.code,
        pass: problems.is_empty(),
        problems,
    }
}

fn spec_files(dir: &Path) -> Result<Vec<PathBuf>> {
    let entries = std::fs::read_dir(dir).map_err(|e| Error::Io(format!("{}: {e}", dir.display())))?;
    let mut files: Vec<PathBuf> = entries
        .filter_map(|e| e.ok().map(|e| e.path()))
        .filter(|p| p.extension().is_some_and(|x| x == "json") && p.file_name().is_some_and(|n| n.to_string_lossy().ends_with(".spec.json")))
        .collect();
    files.sort();
    Ok(files)
}

/// Runs every `*.spec.json` file in `dir` with up to `workers` threads.
pub fn run_corpus(dir: &Path, workers: usize) -> Result<Done> {
    let files = spec_files(dir)?;
    let specs = files.iter().map(|f| load_spec(f)).collect::<Result<Vec<_>>>()?;
    let slots: Vec<Mutex<Option<EntryResult>>> = files.iter().map(|_| Mutex::new(None)).collect();
    let next = AtomicUsize::new(0);
    std::thread::scope(|s| {
        for _ in 0..workers.max(1).min(files.len().max(1)) {
            s.spawn(|| loop {
                let i = next.fetch_add(1, Ordering::Relaxed);
                if i >= files.len() {
                    break;
                }
                let r = run_spec(&files[i], &specs[i]);
                *slots[i].lock().expect("no panics while holding the lock") = Some(r);
            });
        }
    });
    let results: Vec<EntryResult> =
        slots.into_iter().map(|m| m.into_inner().expect("unpoisoned").expect("every entry ran")).collect();
    let failed: Vec<&str> = results.iter().filter(|r| !r.pass).map(|r| r.name.as_str()).collect();
    let summary = if failed.is_empty() {
        format!("{} of {} entries as expected", results.len(), results.len())
    } else {
        format!("{} of {} entries as expected; unexpected: {}", results.len() - failed.len(), results.len(), failed.join(", "))
    };
    Ok(Done::new(Outcome::from_bool(failed.is_empty()), summary, serde_json::json!({"entries": results}))
        .with_bounds(serde_json::json!({"workers": workers})))
}
