use std::fs;
use std::io::Write;
use std::path::Path;

use anyhow::Context;
use serde::{Deserialize, Serialize};

use crate::input::InputRecord;
use crate::Failure;

/// Envelope written by every command.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Report {
    pub command: String,
    pub version: String,
    pub inputs: Vec<InputRecord>,
    /// Wall-clock time in milliseconds; only present with `--timing`.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub timing_ms: Option<u64>,
    pub result: serde_json::Value,
}

impl Report {
    pub fn new(command: &str, inputs: Vec<InputRecord>, result: serde_json::Value) -> Self {
        Report {
            command: command.to_string(),
            version: env!("CARGO_PKG_VERSION").to_string(),
            inputs,
            timing_ms: None,
            result,
        }
    }
}

/// A finished command: the report plus its human-readable form.
pub struct Output {
    pub report: Report,
    pub text: String,
    /// Set when a comparison was made and failed.
    pub mismatch: bool,
}

pub fn render_json(report: &Report) -> String {
    let mut s = serde_json::to_string_pretty(report).expect("reports serialize");
    s.push('\n');
    s
}

pub fn render_text(out: &Output) -> String {
    let mut s = out.text.clone();
    if !s.ends_with('\n') {
        s.push('\n');
    }
    for input in &out.report.inputs {
        s.push_str(&format!("{} {} sha256:{}\n", input.role, input.source, input.sha256));
    }
    if let Some(ms) = out.report.timing_ms {
        s.push_str(&format!("time: {ms} ms\n"));
    }
    s
}

pub fn emit(body: &str, out: Option<&Path>) -> Result<(), Failure> {
    match out {
        Some(p) => fs::write(p, body)
            .with_context(|| format!("cannot write {}", p.display()))
            .map_err(Failure::invalid),
        None => {
            let mut stdout = std::io::stdout().lock();
            // a closed pipe is not worth an error
            let _ = stdout.write_all(body.as_bytes());
            Ok(())
        }
    }
}
