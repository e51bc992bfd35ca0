//! Output formats: CSV traces and JSON summaries.

use anyhow::{Context, Result};
use newq_core::{IterationTrace, StopReason};
use serde::Serialize;
use std::fmt::Write as _;
use std::fs;
use std::path::Path;

/// Renders a trace as CSV with header `iter,f,gradnorm,step,deltas_index`.
pub fn trace_to_csv(trace: &IterationTrace) -> String {
    let mut out = String::from("iter,f,gradnorm,step,deltas_index\n");
    for rec in &trace.records {
        let shift = rec
            .shift_index
            .map(|j| j.to_string())
            .unwrap_or_default();
        let _ = writeln!(
            out,
            "{},{},{},{},{}",
            rec.iter, rec.value, rec.grad_norm, rec.step_size, shift
        );
    }
    out
}

pub fn write_trace_csv(path: &Path, trace: &IterationTrace) -> Result<()> {
    if let Some(parent) = path.parent() {
        fs::create_dir_all(parent)?;
    }
    fs::write(path, trace_to_csv(trace)).with_context(|| format!("writing {}", path.display()))
}

pub fn write_json<T: Serialize>(path: &Path, value: &T) -> Result<()> {
    if let Some(parent) = path.parent() {
        fs::create_dir_all(parent)?;
    }
    let mut text = serde_json::to_string_pretty(value)?;
    text.push('\n');
    fs::write(path, text).with_context(|| format!("writing {}", path.display()))
}

/// Stable wire form of a stop reason.
pub fn stop_reason_str(reason: &StopReason) -> String {
    match reason {
        StopReason::GradientBelowTol => "gradient_below_tol".into(),
        StopReason::MaxIterations => "max_iterations".into(),
        StopReason::ValueDiverging => "value_diverging".into(),
        StopReason::StepError(e) => format!("step_error: {e}"),
    }
}

/// File-name-safe form of a display name ("Riem New Q" -> "riem_new_q").
pub fn slug(name: &str) -> String {
    name.chars()
        .map(|c| {
            if c.is_ascii_alphanumeric() {
                c.to_ascii_lowercase()
            } else {
                '_'
            }
        })
        .collect()
}
