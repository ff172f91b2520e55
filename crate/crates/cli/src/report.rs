//! JSON and CSV report writers.
//!
//! Every real number is rounded to 15 significant digits. Reports carry no
//! timing information, so two runs with the same inputs produce identical
//! bytes.
//!
//! Check reports in CSV have one row per check with these columns, in order:
//!
//! | column | content |
//! |---|---|
//! | `check_id` | registry id |
//! | `kind` | `equality` or `inequality` |
//! | `n`, `j`, `k`, `p`, `mu`, `m` | resolved parameters, empty when unused |
//! | `seed` | master seed of the check |
//! | `samples`, `order` | budget |
//! | `lhs`, `lhs_stderr`, `rhs`, `rhs_stderr` | sides of the deciding member |
//! | `constant` | sharp constant multiplying `rhs` |
//! | `ratio` | `lhs / rhs` |
//! | `relative_gap` | `lhs / (constant · rhs) − 1` |
//! | `stderr` | combined standard error of `lhs − constant · rhs` |
//! | `margin_sigma` | margin in units of `stderr` |
//! | `sigma_threshold` | sigma level after the multiple-comparison correction |
//! | `verdict` | `PassEquality`, `PassInequality`, `Fail` or `Inconclusive` |
//! | `members`, `skipped` | panel members compared and skipped |
//!
//! The deciding member is the one with the worst verdict, ties broken by the
//! smallest margin.

use std::io::Write;

use serde::Serialize;
use serde_json::Value;

use kplane_core::harness::{registry, CheckResult, ConjectureReport, RelationKind, Verdict};
use kplane_core::special::Exponent;

use crate::CliError;

pub const CHECK_COLUMNS: [&str; 26] = [
    "check_id",
    "kind",
    "n",
    "j",
    "k",
    "p",
    "mu",
    "m",
    "seed",
    "samples",
    "order",
    "lhs",
    "lhs_stderr",
    "rhs",
    "rhs_stderr",
    "constant",
    "ratio",
    "relative_gap",
    "stderr",
    "margin_sigma",
    "sigma_threshold",
    "verdict",
    "members",
    "skipped",
    "relation",
    "notes",
];

pub const EXPLORE_COLUMNS: [&str; 14] = [
    "target",
    "family",
    "n",
    "j",
    "k",
    "seed",
    "bound",
    "best_ratio",
    "stderr",
    "violation_found",
    "evaluated",
    "skipped",
    "inconclusive",
    "best_params",
];

/// `x` rounded to 15 significant digits.
pub fn round15(x: f64) -> f64 {
    if !x.is_finite() || x == 0.0 {
        return x;
    }
    format!("{x:.14e}").parse().unwrap_or(x)
}

/// `x` with 15 significant digits, in positional notation for moderate
/// magnitudes.
pub fn sig15(x: f64) -> String {
    if !x.is_finite() {
        return format!("{x}");
    }
    if x == 0.0 {
        return "0.00000000000000".into();
    }
    let sci = format!("{x:.14e}");
    let exp: i32 = sci.rsplit('e').next().and_then(|e| e.parse().ok()).unwrap_or(0);
    if (-5..15).contains(&exp) {
        format!("{x:.*}", (14 - exp) as usize)
    } else {
        sci
    }
}

fn round_value(v: &mut Value) {
    match v {
        Value::Number(num) if num.is_f64() => {
            if let Some(r) = num.as_f64().map(round15).and_then(serde_json::Number::from_f64) {
                *num = r;
            }
        }
        Value::Array(items) => items.iter_mut().for_each(round_value),
        Value::Object(map) => map.values_mut().for_each(round_value),
        _ => {}
    }
}

/// Pretty JSON with every float rounded to 15 significant digits.
pub fn to_json<T: Serialize>(value: &T) -> Result<String, CliError> {
    let mut v = serde_json::to_value(value).map_err(|e| CliError::Schema(e.to_string()))?;
    round_value(&mut v);
    let mut s = serde_json::to_string_pretty(&v).map_err(|e| CliError::Schema(e.to_string()))?;
    s.push('\n');
    Ok(s)
}

/// Combined standard error of `lhs − constant · rhs`.
pub fn combined_stderr(r: &CheckResult) -> f64 {
    r.lhs.stderr.hypot(r.constant.abs() * r.rhs.stderr)
}

pub fn kind_of(id: &str) -> Option<RelationKind> {
    registry().iter().find(|c| c.id == id).map(|c| c.kind)
}

#[derive(Debug, Clone, Serialize)]
pub struct CheckRecord<'a> {
    #[serde(flatten)]
    pub result: &'a CheckResult,
    pub kind: Option<RelationKind>,
    pub stderr: f64,
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize)]
pub struct Summary {
    pub checks: usize,
    pub passed: usize,
    pub failed: usize,
    pub inconclusive: usize,
}

impl Summary {
    pub fn of(results: &[CheckResult]) -> Self {
        let mut s = Summary { checks: results.len(), ..Summary::default() };
        for r in results {
            match r.verdict {
                Verdict::PassEquality | Verdict::PassInequality => s.passed += 1,
                Verdict::Fail => s.failed += 1,
                Verdict::Inconclusive => s.inconclusive += 1,
            }
        }
        s
    }

    /// 0 when every check passed, 1 on any failure, 3 on inconclusive checks without failures.
    pub fn exit_code(&self) -> i32 {
        if self.failed > 0 {
            1
        } else if self.inconclusive > 0 {
            3
        } else {
            0
        }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct CheckReport<'a> {
    pub schema_version: u32,
    pub summary: Summary,
    pub results: Vec<CheckRecord<'a>>,
}

impl<'a> CheckReport<'a> {
    pub fn new(results: &'a [CheckResult]) -> Self {
        CheckReport {
            schema_version: crate::experiment::SCHEMA_VERSION,
            summary: Summary::of(results),
            results: results
                .iter()
                .map(|r| CheckRecord { result: r, kind: kind_of(&r.check_id), stderr: combined_stderr(r) })
                .collect(),
        }
    }
}

fn opt<T: ToString>(v: Option<T>) -> String {
    v.map(|x| x.to_string()).unwrap_or_default()
}

fn opt_f(v: Option<f64>) -> String {
    v.map(sig15).unwrap_or_default()
}

fn exponent(p: Option<Exponent>) -> String {
    match p {
        None => String::new(),
        Some(Exponent::Infinite) => "inf".into(),
        Some(Exponent::Finite(p)) => sig15(p),
    }
}

fn kind_name(k: Option<RelationKind>) -> &'static str {
    match k {
        Some(RelationKind::Equality) => "equality",
        Some(RelationKind::Inequality) => "inequality",
        None => "",
    }
}

fn csv_err(e: csv::Error) -> CliError {
    CliError::Schema(format!("csv: {e}"))
}

pub fn checks_csv(results: &[CheckResult], out: impl Write) -> Result<(), CliError> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record(CHECK_COLUMNS).map_err(csv_err)?;
    for r in results {
        let p = &r.params;
        let row = [
            r.check_id.clone(),
            kind_name(kind_of(&r.check_id)).into(),
            opt(p.n),
            opt(p.j),
            opt(p.k),
            exponent(p.p),
            opt_f(p.mu),
            opt_f(p.m),
            r.seed.to_string(),
            r.budget.samples.to_string(),
            r.budget.order.to_string(),
            sig15(r.lhs.value),
            sig15(r.lhs.stderr),
            sig15(r.rhs.value),
            sig15(r.rhs.stderr),
            sig15(r.constant),
            sig15(r.ratio),
            sig15(r.relative_gap),
            sig15(combined_stderr(r)),
            sig15(r.margin_sigma),
            sig15(r.sigma_threshold),
            format!("{:?}", r.verdict),
            r.members.len().to_string(),
            r.skipped.to_string(),
            r.relation.into(),
            r.notes.join("; "),
        ];
        w.write_record(&row).map_err(csv_err)?;
    }
    w.flush().map_err(|e| CliError::Io("csv output".into(), e))
}

/// Serde name of a unit variant.
fn snake<T: Serialize>(v: &T) -> String {
    match serde_json::to_value(v) {
        Ok(Value::String(s)) => s,
        _ => String::new(),
    }
}

pub fn explore_csv(r: &ConjectureReport, out: impl Write) -> Result<(), CliError> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record(EXPLORE_COLUMNS).map_err(csv_err)?;
    let params = match &r.best_params {
        Some(c) => serde_json::to_string(c).map_err(|e| CliError::Schema(e.to_string()))?,
        None => String::new(),
    };
    let row = [
        snake(&r.target),
        snake(&r.family),
        r.n.to_string(),
        r.j.to_string(),
        r.k.to_string(),
        r.seed.to_string(),
        sig15(r.bound),
        sig15(r.best_ratio),
        sig15(r.stderr),
        r.violation_found.to_string(),
        r.evaluated.to_string(),
        r.skipped.to_string(),
        r.inconclusive.to_string(),
        params,
    ];
    w.write_record(&row).map_err(csv_err)?;
    w.flush().map_err(|e| CliError::Io("csv output".into(), e))
}
