//! The `sdw` command-line front end.
//!
//! Exit codes: 0 verified, 1 refuted, 2 inconclusive within bounds, 3 input error.

mod args;
mod commands;
pub mod corpus;
pub mod report;

use std::ffi::OsString;
use std::time::Instant;

use clap::error::ErrorKind;
use clap::Parser;

pub use args::Cli;
use report::{Outcome, Report};

/// Everything a run writes, kept in memory so the corpus runner can reuse it.
#[derive(Debug, Clone)]
pub struct Output {
    pub code: i32,
    pub stdout: String,
    pub stderr: String,
    /// The structured report, when the arguments parsed.
    pub report: Option<Report>,
}

/// Runs one invocation; `argv[0]` is the program name.
pub fn run<I, T>(argv: I) -> Output
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let argv: Vec<OsString> = argv.into_iter().map(Into::into).collect();
    let cli = match Cli::try_parse_from(&argv) {
        Ok(cli) => cli,
        Err(e) => {
            let text = e.render().to_string();
            return match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => {
                    Output { code: 0, stdout: text, stderr: String::new(), report: None }
                }
                _ => Output { code: 3, stdout: String::new(), stderr: text, report: None },
            };
        }
    };
    let command: Vec<String> = argv.iter().skip(1).map(|s| s.to_string_lossy().into_owned()).collect();
    let caps = cli.global.caps();
    let start = Instant::now();
    let done = commands::execute(&cli, &caps);
    let timing_ms = cli.global.timing.then(|| start.elapsed().as_millis());
    let (report, stderr) = match done {
        Ok(d) => (
            Report {
                command,
                outcome: d.outcome,
                summary: d.summary,
                caps,
                bounds: d.bounds,
                result: d.result,
                timing_ms,
            },
            String::new(),
        ),
        Err(e) => (
            Report {
                command,
                outcome: Outcome::Error,
                summary: e.to_string(),
                caps,
                bounds: None,
                result: serde_json::Value::Null,
                timing_ms,
            },
            format!("error: {e}\n"),
        ),
    };
    let stdout = if cli.global.json {
        report.to_json()
    } else if report.outcome == Outcome::Error {
        String::new()
    } else {
        report.to_text()
    };
    Output { code: report.exit_code(), stdout, stderr, report: Some(report) }
}
