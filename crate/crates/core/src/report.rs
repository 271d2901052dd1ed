//! JSON report schema and the fixed scalar text grammar.
//!
//! Serialization is stable by construction: struct field order fixes the key
//! order, parameter maps are sorted, and every real is written with 17
//! significant digits, so equal seeds give byte-identical reports.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::error::{QError, Result};
use crate::identities::CheckResult;
use crate::numerics::Scalar;

pub const SCHEMA_VERSION: &str = "1";

/// A real with 17 significant digits, enough to round-trip f64 exactly.
pub fn format_real(x: f64) -> String {
    format!("{x:.16e}")
}

/// Fixed scalar grammar: `<real>` or `<real>[+|-]<real>i`, no spaces.
pub fn format_scalar(v: Scalar) -> String {
    if v.im == 0.0 {
        format_real(v.re)
    } else if v.im.is_sign_negative() {
        format!("{}-{}i", format_real(v.re), format_real(-v.im))
    } else {
        format!("{}+{}i", format_real(v.re), format_real(v.im))
    }
}

pub fn parse_scalar(text: &str) -> Result<Scalar> {
    let bad = || QError::Parse(format!("bad scalar literal {text:?}"));
    let t = text.trim();
    if t.is_empty() {
        return Err(bad());
    }
    let Some(body) = t.strip_suffix('i') else {
        let re: f64 = t.parse().map_err(|_| bad())?;
        return Ok(Scalar::new(re, 0.0));
    };
    // split at the last +/- that is not an exponent sign and not leading
    let bytes = body.as_bytes();
    let mut split = None;
    for (idx, &ch) in bytes.iter().enumerate().skip(1) {
        if (ch == b'+' || ch == b'-') && !matches!(bytes[idx - 1], b'e' | b'E') {
            split = Some(idx);
        }
    }
    let idx = split.ok_or_else(bad)?;
    let re: f64 = body[..idx].parse().map_err(|_| bad())?;
    let sign = if bytes[idx] == b'-' { -1.0 } else { 1.0 };
    let im: f64 = body[idx + 1..].parse().map_err(|_| bad())?;
    Ok(Scalar::new(re, sign * im))
}

#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
pub struct SampleRecord {
    pub params: BTreeMap<String, String>,
    pub lhs: String,
    pub rhs: String,
    pub rel_err: f64,
    pub cancellation_digits: f64,
    pub pass: bool,
}

#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
pub struct Summary {
    pub count: usize,
    pub passed: usize,
    pub max_rel_err: f64,
    pub mean_rel_err: f64,
}

#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
pub struct Report {
    pub schema_version: String,
    pub identity: String,
    pub seed: u64,
    pub tol: f64,
    pub samples: Vec<SampleRecord>,
    pub summary: Summary,
}

pub fn summarize(samples: &[SampleRecord]) -> Summary {
    let count = samples.len();
    let passed = samples.iter().filter(|s| s.pass).count();
    let max_rel_err = samples.iter().map(|s| s.rel_err).fold(0.0, f64::max);
    let mean_rel_err = if count == 0 {
        0.0
    } else {
        samples.iter().map(|s| s.rel_err).sum::<f64>() / count as f64
    };
    Summary {
        count,
        passed,
        max_rel_err,
        mean_rel_err,
    }
}

pub fn build_report(identity: &str, seed: u64, tol: f64, results: &[CheckResult]) -> Report {
    let samples: Vec<SampleRecord> = results
        .iter()
        .map(|r| SampleRecord {
            params: r
                .params
                .iter()
                .map(|(k, v)| (k.clone(), format_scalar(*v)))
                .collect(),
            lhs: format_scalar(r.lhs.value),
            rhs: format_scalar(r.rhs.value),
            rel_err: r.rel_err,
            cancellation_digits: r.lhs.cancellation_digits.max(r.rhs.cancellation_digits),
            pass: r.pass,
        })
        .collect();
    let summary = summarize(&samples);
    Report {
        schema_version: SCHEMA_VERSION.to_string(),
        identity: identity.to_string(),
        seed,
        tol,
        samples,
        summary,
    }
}
