//! Named checks of the transform identities and inequalities, with
//! statistically grounded verdicts, and conjecture explorers.

mod explore;
mod registry;

use alloc::string::String;
use alloc::vec::Vec;
#[allow(unused_imports)]
use num_traits::Float;

use crate::error::{Error, Result};
use crate::fields::{FieldKind, StarKind};
use crate::montecarlo::{Estimate, Executor};
use crate::special::Exponent;

pub use explore::{explore_conjecture, Candidate, ConjectureReport, ConjectureTarget, ExploreSpec, Family};
pub use registry::{registry, CheckInfo};

/// Check parameters; unset entries take per-check defaults.
#[derive(Debug, Clone, Default, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
#[cfg_attr(feature = "serde", serde(default, deny_unknown_fields))]
pub struct Params {
    #[cfg_attr(feature = "serde", serde(skip_serializing_if = "Option::is_none"))]
    pub n: Option<usize>,
    #[cfg_attr(feature = "serde", serde(skip_serializing_if = "Option::is_none"))]
    pub j: Option<usize>,
    #[cfg_attr(feature = "serde", serde(skip_serializing_if = "Option::is_none"))]
    pub k: Option<usize>,
    #[cfg_attr(feature = "serde", serde(skip_serializing_if = "Option::is_none"))]
    pub p: Option<Exponent>,
    #[cfg_attr(feature = "serde", serde(skip_serializing_if = "Option::is_none"))]
    pub mu: Option<f64>,
    /// Order of a dual quermassintegral, or the power in Schneider's bound.
    #[cfg_attr(feature = "serde", serde(skip_serializing_if = "Option::is_none"))]
    pub m: Option<f64>,
    /// Test function on ℝⁿ or `A_{n,j}` replacing the default.
    #[cfg_attr(feature = "serde", serde(skip_serializing_if = "Option::is_none"))]
    pub field: Option<FieldKind>,
    /// Star set (or body) replacing the default.
    #[cfg_attr(feature = "serde", serde(skip_serializing_if = "Option::is_none"))]
    pub star: Option<StarKind>,
    /// Number of members in a panel (random fields, star sets, planes).
    #[cfg_attr(feature = "serde", serde(skip_serializing_if = "Option::is_none"))]
    pub members: Option<usize>,
}

/// Sample and quadrature budget of a check.
#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
#[cfg_attr(feature = "serde", serde(default, deny_unknown_fields))]
pub struct Budget {
    /// Monte-Carlo samples per outer integral.
    pub samples: u64,
    /// Per-axis order of the deterministic inner rules.
    pub order: usize,
}

impl Default for Budget {
    fn default() -> Self {
        Budget { samples: 20_000, order: 24 }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
#[cfg_attr(feature = "serde", serde(default, deny_unknown_fields))]
pub struct Tolerance {
    pub stat_sigma: f64,
    pub rel_tol: f64,
}

impl Default for Tolerance {
    fn default() -> Self {
        Tolerance { stat_sigma: 3.0, rel_tol: 0.02 }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct CheckSpec {
    pub check_id: String,
    pub params: Params,
    pub budget: Budget,
    pub tolerance: Tolerance,
    pub seed: u64,
}

impl CheckSpec {
    /// A spec with the check's default budget.
    pub fn new(check_id: &str, params: Params, seed: u64) -> Self {
        let budget = registry().iter().find(|c| c.id == check_id).map(|c| c.budget).unwrap_or_default();
        CheckSpec { check_id: check_id.into(), params, budget, tolerance: Tolerance::default(), seed }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
#[cfg_attr(feature = "serde", serde(rename_all = "snake_case"))]
pub enum RelationKind {
    Equality,
    Inequality,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub enum Verdict {
    PassEquality,
    PassInequality,
    Fail,
    Inconclusive,
}

impl Verdict {
    pub fn is_pass(self) -> bool {
        matches!(self, Verdict::PassEquality | Verdict::PassInequality)
    }

    fn severity(self) -> u8 {
        match self {
            Verdict::PassEquality | Verdict::PassInequality => 0,
            Verdict::Inconclusive => 1,
            Verdict::Fail => 2,
        }
    }
}

/// One comparison `lhs (=|≤) constant · rhs`.
#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize))]
pub struct Comparison {
    pub label: String,
    pub kind: RelationKind,
    pub lhs: Estimate,
    pub rhs: Estimate,
    pub constant: f64,
    pub ratio: f64,
    pub relative_gap: f64,
    pub margin_sigma: f64,
    pub verdict: Verdict,
}

#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize))]
pub struct CheckResult {
    pub check_id: String,
    pub relation: &'static str,
    pub params: Params,
    pub seed: u64,
    pub budget: Budget,
    pub lhs: Estimate,
    pub rhs: Estimate,
    pub constant: f64,
    pub ratio: f64,
    pub relative_gap: f64,
    pub margin_sigma: f64,
    /// Sigma threshold after adjusting for the number of comparisons.
    pub sigma_threshold: f64,
    pub verdict: Verdict,
    /// Every comparison; the headline numbers are those of the worst one.
    pub members: Vec<Comparison>,
    pub skipped: usize,
    pub notes: Vec<String>,
}

/// Two-sided normal tail `P(|Z| > z)`.
fn normal_tail(z: f64) -> f64 {
    libm::erfc(z / core::f64::consts::SQRT_2)
}

/// Threshold keeping the family-wise error of `m` comparisons at the level
/// of a single `base`-sigma test.
pub fn bonferroni_sigma(base: f64, m: usize) -> f64 {
    if m <= 1 {
        return base;
    }
    let target = normal_tail(base) / m as f64;
    let (mut lo, mut hi) = (base, 40.0);
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if normal_tail(mid) > target {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    hi
}

/// Smallest standard error used in verdicts, so that exact or deterministic
/// sides are compared up to floating-point accuracy.
const FLOAT_FLOOR: f64 = 1e-10;

/// Verdict for one comparison at the given sigma threshold.
pub fn compare(
    label: &str,
    kind: RelationKind,
    lhs: Estimate,
    rhs: Estimate,
    constant: f64,
    sigma: f64,
    rel_tol: f64,
) -> Comparison {
    let target = constant * rhs.value;
    let raw = lhs.stderr.hypot(constant.abs() * rhs.stderr);
    let s = raw.max(FLOAT_FLOOR * target.abs().max(lhs.value.abs())).max(f64::MIN_POSITIVE);
    let ratio = lhs.value / rhs.value;
    let relative_gap = if target != 0.0 {
        lhs.value / target - 1.0
    } else if lhs.value == 0.0 {
        0.0
    } else {
        f64::INFINITY
    };
    let finite = lhs.value.is_finite() && target.is_finite() && raw.is_finite();
    let (margin_sigma, verdict) = match kind {
        RelationKind::Equality => {
            let gap = (lhs.value - target).abs();
            let margin = sigma - gap / s;
            let v = if !finite {
                Verdict::Fail
            } else if raw > 0.25 * target.abs() {
                Verdict::Inconclusive
            } else if margin >= 0.0 && relative_gap.abs() <= rel_tol {
                Verdict::PassEquality
            } else {
                Verdict::Fail
            };
            (margin, v)
        }
        RelationKind::Inequality => {
            let margin = (target - lhs.value) / s;
            let v = if !finite {
                Verdict::Fail
            } else if raw > 0.25 * target.abs() {
                Verdict::Inconclusive
            } else if margin >= -sigma {
                Verdict::PassInequality
            } else {
                Verdict::Fail
            };
            (margin, v)
        }
    };
    Comparison { label: label.into(), kind, lhs, rhs, constant, ratio, relative_gap, margin_sigma, verdict }
}

/// Evaluated sides of one comparison before a verdict is attached.
#[derive(Debug, Clone)]
pub(crate) struct Sides {
    pub label: String,
    pub kind: RelationKind,
    pub lhs: Estimate,
    pub rhs: Estimate,
    pub constant: f64,
}

pub(crate) struct Outcome {
    pub params: Params,
    pub sides: Vec<Sides>,
    pub skipped: usize,
    pub notes: Vec<String>,
}

fn worst_index(members: &[Comparison]) -> usize {
    let mut best = 0;
    for (i, c) in members.iter().enumerate() {
        let b = &members[best];
        let key = (c.verdict.severity(), -c.margin_sigma);
        let cur = (b.verdict.severity(), -b.margin_sigma);
        if key.0 > cur.0 || (key.0 == cur.0 && key.1 > cur.1) {
            best = i;
        }
    }
    best
}

fn check_params(info: &CheckInfo, p: &Params) -> Result<()> {
    let given = [
        ("n", p.n.is_some()),
        ("j", p.j.is_some()),
        ("k", p.k.is_some()),
        ("p", p.p.is_some()),
        ("mu", p.mu.is_some()),
        ("m", p.m.is_some()),
        ("field", p.field.is_some()),
        ("star", p.star.is_some()),
        ("members", p.members.is_some()),
    ];
    for (name, set) in given {
        if set && !info.params.contains(&name) {
            return Err(Error::Invalid(alloc::format!("check {} does not take parameter `{name}`", info.id)));
        }
    }
    Ok(())
}

/// Looks the check up and validates its parameter names and budget without
/// running it.
pub fn validate_check(spec: &CheckSpec) -> Result<&'static CheckInfo> {
    let info = registry().iter().find(|c| c.id == spec.check_id).ok_or_else(|| Error::UnknownCheck(spec.check_id.clone()))?;
    check_params(info, &spec.params)?;
    if spec.budget.samples == 0 || spec.budget.order < 4 {
        return Err(Error::Invalid("budget needs samples ≥ 1 and order ≥ 4".into()));
    }
    if !(spec.tolerance.stat_sigma > 0.0 && spec.tolerance.rel_tol > 0.0) {
        return Err(Error::Invalid("tolerances must be positive".into()));
    }
    Ok(info)
}

/// Runs a registered check.
pub fn run_check(spec: &CheckSpec, exec: &dyn Executor) -> Result<CheckResult> {
    let info = validate_check(spec)?;
    let ctx = registry::Ctx { exec, budget: spec.budget, seed: spec.seed };
    let out = (info.run)(&ctx, &spec.params)?;
    if out.sides.is_empty() {
        return Err(Error::Invalid("no panel member passed its precheck".into()));
    }
    let sigma = bonferroni_sigma(spec.tolerance.stat_sigma, out.sides.len());
    let members: Vec<Comparison> =
        out.sides.iter().map(|s| compare(&s.label, s.kind, s.lhs, s.rhs, s.constant, sigma, spec.tolerance.rel_tol)).collect();
    let w = &members[worst_index(&members)];
    Ok(CheckResult {
        check_id: spec.check_id.clone(),
        relation: info.relation,
        params: out.params,
        seed: spec.seed,
        budget: spec.budget,
        lhs: w.lhs,
        rhs: w.rhs,
        constant: w.constant,
        ratio: w.ratio,
        relative_gap: w.relative_gap,
        margin_sigma: w.margin_sigma,
        sigma_threshold: sigma,
        verdict: w.verdict,
        members: members.clone(),
        skipped: out.skipped,
        notes: out.notes,
    })
}
