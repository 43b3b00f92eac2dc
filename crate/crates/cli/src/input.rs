use std::fs;
use std::path::Path;

use graphon_core::graphon::generators::from_spec;
use graphon_core::graphon::{graphon_from_json, json_mode};
use graphon_core::graphs::GraphJson;
use graphon_core::scalar::parse_rational;
use graphon_core::{Error, LabeledGraph, Mode, Rational, Result, StepGraphon};

use crate::Global;

pub enum Loaded {
    Exact(StepGraphon<Rational>),
    Float(StepGraphon<f64>),
}

pub fn read(path: &Path) -> Result<String> {
    fs::read_to_string(path).map_err(|e| Error::InvalidInput(format!("{}: {e}", path.display())))
}

/// Loads the graphon named by `--graphon` or `--generate`. `raw` keeps
/// zero-weight steps.
pub fn graphon(g: &Global, raw: bool) -> Result<Loaded> {
    if let Some(path) = &g.graphon {
        let text = read(path)?;
        let mode = g.mode.or(json_mode(&text)?).unwrap_or(Mode::Exact);
        return Ok(match mode {
            Mode::Exact => Loaded::Exact(graphon_from_json(&text, raw)?),
            Mode::Float => Loaded::Float(graphon_from_json(&text, raw)?),
        });
    }
    let spec = g
        .generate
        .as_deref()
        .ok_or_else(|| Error::InvalidInput("no graphon given: use --graphon FILE or --generate SPEC".into()))?;
    let w = from_spec(spec)?;
    Ok(match g.mode.unwrap_or(Mode::Exact) {
        Mode::Exact => Loaded::Exact(w),
        Mode::Float => Loaded::Float(w.to_f64()),
    })
}

/// Reads a graph in the text format, or as JSON when the content starts
/// with `{` or `"`.
pub fn graph(path: &Path) -> Result<LabeledGraph> {
    let text = read(path)?;
    let trimmed = text.trim_start();
    if trimmed.starts_with('{') || trimmed.starts_with('"') {
        let g: GraphJson = serde_json::from_str(trimmed).map_err(|e| Error::Parse(e.to_string()))?;
        g.into_graph()
    } else {
        text.parse()
    }
}

pub fn usize_list(s: &str) -> Result<Vec<usize>> {
    s.split(',')
        .map(|p| p.trim().parse().map_err(|_| Error::Parse(format!("expected a non-negative integer, got `{p}`"))))
        .collect()
}

pub fn rational_list(s: &str) -> Result<Vec<Rational>> {
    s.split(',').map(|p| parse_rational(p.trim())).collect()
}
