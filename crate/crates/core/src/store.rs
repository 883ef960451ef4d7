//! Text persistence for pattern banks, spans and single states.
//!
//! ```text
//! QAMBANK v1 dim=<d> field=<REAL|COMPLEX>
//! <label> <re_0> <im_0> ... <re_{d-1}> <im_{d-1}>
//! ```
//!
//! Spans use the header `QAMSPAN v1 dim=<d> field=<F> sources=<n>` with one
//! line per basis vector, and single states `QAMSTATE v1 dim=<d> field=<F>`
//! with exactly one line. Amplitudes are written in canonical ray form with 17
//! significant digits, so a save/load cycle reproduces every bit.

use std::fmt::Write as _;

use num_complex::Complex64;

use crate::aaam::Subspace;
use crate::error::{QamError, Result};
use crate::hilbert::{Field, StateVector, UnitState};
use crate::patterns::PatternBank;

pub const BANK_MAGIC: &str = "QAMBANK";
pub const SPAN_MAGIC: &str = "QAMSPAN";
pub const STATE_MAGIC: &str = "QAMSTATE";
const VERSION: &str = "v1";

fn write_amplitudes(out: &mut String, label: &str, v: &StateVector) {
    out.push_str(label);
    for z in v.amplitudes() {
        let _ = write!(out, " {:.16e} {:.16e}", z.re, z.im);
    }
    out.push('\n');
}

pub fn write_bank(bank: &PatternBank) -> String {
    let mut out = format!("{BANK_MAGIC} {VERSION} dim={} field={}\n", bank.dim(), bank.field());
    for (label, w) in bank.iter() {
        // patterns are held in canonical form already
        write_amplitudes(&mut out, label, w);
    }
    out
}

pub fn write_span(span: &Subspace, field: Field) -> String {
    let mut out = format!(
        "{SPAN_MAGIC} {VERSION} dim={} field={field} sources={}\n",
        span.ambient_dim(),
        span.source_count()
    );
    for (k, q) in span.basis().iter().enumerate() {
        write_amplitudes(&mut out, &format!("q{k}"), &q.canonical_ray());
    }
    out
}

pub fn write_state(label: &str, state: &StateVector, field: Field) -> String {
    let mut out = format!("{STATE_MAGIC} {VERSION} dim={} field={field}\n", state.dim());
    write_amplitudes(&mut out, label, &state.canonical_ray());
    out
}

struct Parsed {
    dim: usize,
    field: Field,
    extra: Vec<(String, String)>,
    records: Vec<(String, StateVector)>,
}

fn parse(text: &str, magic: &str) -> Result<Parsed> {
    let mut lines = text.lines().filter(|l| !l.trim().is_empty());
    let header = lines
        .next()
        .ok_or_else(|| QamError::Format(format!("empty file, expected {magic} header")))?;
    let mut toks = header.split_whitespace();
    if toks.next() != Some(magic) {
        return Err(QamError::Format(format!("expected header starting with {magic}")));
    }
    if toks.next() != Some(VERSION) {
        return Err(QamError::Format(format!("unsupported {magic} version, expected {VERSION}")));
    }
    let mut dim = None;
    let mut field = None;
    let mut extra = Vec::new();
    for tok in toks {
        let (key, value) = tok
            .split_once('=')
            .ok_or_else(|| QamError::Format(format!("header token {tok:?} is not key=value")))?;
        match key {
            "dim" => {
                dim = Some(value.parse::<usize>().ok().filter(|&d| d >= 1).ok_or_else(|| {
                    QamError::Format(format!("dim={value} is not a positive integer"))
                })?)
            }
            "field" => field = Some(value.parse::<Field>().map_err(|e| QamError::Format(e.to_string()))?),
            _ => extra.push((key.to_string(), value.to_string())),
        }
    }
    let dim = dim.ok_or_else(|| QamError::Format("header is missing dim=".into()))?;
    let field = field.ok_or_else(|| QamError::Format("header is missing field=".into()))?;

    let mut records = Vec::new();
    for (n, line) in lines.enumerate() {
        let mut toks = line.split_whitespace();
        let label = toks.next().expect("non-blank line").to_string();
        let nums = toks
            .map(|t| {
                t.parse::<f64>()
                    .map_err(|_| QamError::Format(format!("record {n}: {t:?} is not a number")))
            })
            .collect::<Result<Vec<f64>>>()?;
        if nums.len() != 2 * dim {
            return Err(QamError::Format(format!(
                "record {n} ({label}) has {} numbers, expected {}",
                nums.len(),
                2 * dim
            )));
        }
        let amps = nums.chunks_exact(2).map(|p| Complex64::new(p[0], p[1])).collect();
        let v = StateVector::new(amps)?;
        field.check(&v)?;
        records.push((label, v));
    }
    Ok(Parsed { dim, field, extra, records })
}

pub fn read_bank(text: &str) -> Result<PatternBank> {
    let parsed = parse(text, BANK_MAGIC)?;
    let entries = parsed
        .records
        .into_iter()
        .map(|(label, v)| Ok((label, UnitState::new(v)?)))
        .collect::<Result<Vec<_>>>()?;
    if entries.is_empty() {
        return Err(QamError::Format("bank file has no patterns".into()));
    }
    let bank = PatternBank::new(parsed.field, entries)?;
    debug_assert_eq!(bank.dim(), parsed.dim);
    Ok(bank)
}

pub fn read_span(text: &str) -> Result<(Subspace, Field)> {
    let parsed = parse(text, SPAN_MAGIC)?;
    let sources = match parsed.extra.iter().find(|(k, _)| k == "sources") {
        Some((_, v)) => v
            .parse::<usize>()
            .map_err(|_| QamError::Format(format!("sources={v} is not an integer")))?,
        None => parsed.records.len(),
    };
    let basis = parsed
        .records
        .into_iter()
        .map(|(_, v)| UnitState::new(v))
        .collect::<Result<Vec<_>>>()?;
    Ok((Subspace::from_orthonormal(basis, sources)?, parsed.field))
}

/// Reads a single-state file, returning its label, vector and field.
pub fn read_state(text: &str) -> Result<(String, StateVector, Field)> {
    let parsed = parse(text, STATE_MAGIC)?;
    let mut records = parsed.records.into_iter();
    let (label, v) = records
        .next()
        .ok_or_else(|| QamError::Format("state file has no amplitude line".into()))?;
    if records.next().is_some() {
        return Err(QamError::Format("state file holds more than one vector".into()));
    }
    Ok((label, v, parsed.field))
}
