//! Bounded searches for counterexamples to the two open norm conjectures.
//!
//! A search never proves anything. It reports the largest confirmed ratio
//! it found, the candidate that produced it, and whether that candidate
//! exceeds the conjectured bound beyond statistical and relative tolerance.

use alloc::format;
use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;
#[allow(unused_imports)]
use num_traits::Float;

use super::registry::{funk_outer, lplq_sides, Ctx};
use super::{Budget, Tolerance};
use crate::error::{ensure, Error, Result};
use crate::fields::{make_star_set, Domain, FieldKind, ScalarField, StarKind};
use crate::grassmann::AffineMap;
use crate::montecarlo::{Estimate, Executor};
use crate::rng::{SampleRng, Stream};
use crate::special::{ball_volume, sharp_constant, ConstantKind};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
#[cfg_attr(feature = "serde", serde(rename_all = "snake_case"))]
pub enum ConjectureTarget {
    /// `‖R_{j,k} f‖_q ≤ Ω_{j,k}(n) ‖f‖_p`, `p = (n+1)/(k+1)`, `q = (n+1)/(j+1)`.
    JkLpLq,
    /// `∫_{G_{n,k}} Ṽ_m^{n/j} ≤ (b_k/b_j)^{n/j} (∫_{G_{n,j}} Ṽ_m^{n/k})^{k/j}`.
    StarSections,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
#[cfg_attr(feature = "serde", serde(rename_all = "snake_case"))]
pub enum Family {
    /// `f₀∘M` with `M` a scaled diagonal map plus a translation.
    Extremizer,
    /// Seeded smooth star sets of varying amplitude.
    RandomSmooth,
    /// Centered balls.
    Ball,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ExploreSpec {
    pub target: ConjectureTarget,
    pub family: Family,
    pub n: usize,
    pub j: usize,
    pub k: usize,
    /// Power of the radial function (star target); defaults to `k`.
    pub m: Option<f64>,
    /// Random candidates drawn before refinement.
    pub members: usize,
    /// Local refinement steps around the incumbent.
    pub refine: usize,
    pub budget: Budget,
    pub tolerance: Tolerance,
    pub seed: u64,
}

impl ExploreSpec {
    pub fn new(target: ConjectureTarget, family: Family, n: usize, j: usize, k: usize, seed: u64) -> Self {
        ExploreSpec {
            target,
            family,
            n,
            j,
            k,
            m: None,
            members: 12,
            refine: 6,
            budget: Budget { samples: 4_000, order: 16 },
            tolerance: Tolerance::default(),
            seed,
        }
    }
}

/// A member of a search family.
#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
#[cfg_attr(feature = "serde", serde(tag = "family", rename_all = "snake_case"))]
pub enum Candidate {
    Extremizer { scale: f64, diag: Vec<f64>, translation: Vec<f64> },
    RandomSmooth { seed: u64, amplitude: f64 },
    Ball { radius: f64 },
}

#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize))]
pub struct ConjectureReport {
    pub target: ConjectureTarget,
    pub family: Family,
    pub n: usize,
    pub j: usize,
    pub k: usize,
    pub seed: u64,
    /// The conjectured sharp bound on the ratio.
    pub bound: f64,
    /// Ratio of the best candidate, re-estimated on a fresh stream.
    pub best_ratio: f64,
    pub stderr: f64,
    pub best_params: Option<Candidate>,
    pub violation_found: bool,
    pub evaluated: usize,
    pub skipped: usize,
    pub inconclusive: usize,
    pub notes: Vec<String>,
}

/// Sample multiplier for the confirmatory estimate of the winner.
const CONFIRM_FACTOR: u64 = 4;

fn ratio(a: Estimate, b: Estimate) -> Estimate {
    let value = a.value / b.value;
    let rel = (a.stderr / a.value).hypot(b.stderr / b.value);
    Estimate { value, stderr: (value * rel).abs(), samples_used: a.samples_used + b.samples_used }
}

fn uniform(rng: &mut SampleRng, lo: f64, hi: f64) -> f64 {
    lo + (hi - lo) * rng.uniform()
}

struct Search<'a> {
    spec: &'a ExploreSpec,
    ctx: Ctx<'a>,
    m: f64,
}

impl Search<'_> {
    fn evaluate(&self, c: &Candidate, label: &str) -> Result<Estimate> {
        let s = self.spec;
        let (n, j, k) = (s.n, s.j, s.k);
        match c {
            Candidate::Extremizer { scale, diag, translation } => {
                let d: Vec<f64> = diag.iter().map(|v| scale * v).collect();
                let map = Some(AffineMap::diagonal(&d, translation.clone())?);
                let (dom, kind) = if j == 0 {
                    (Domain::Euclidean(n), FieldKind::Extremizer { k, map })
                } else {
                    (Domain::AffineGrassmannian { n, j }, FieldKind::PlaneExtremizer { k, map })
                };
                let f = ScalarField::new(dom, kind)?;
                let (a, b) = lplq_sides(&self.ctx, &f, n, j, k, label)?;
                Ok(ratio(a, b))
            }
            Candidate::RandomSmooth { seed, amplitude } => {
                self.star_ratio(StarKind::RandomSmooth { seed: *seed, terms: 3, amplitude: *amplitude }, label)
            }
            Candidate::Ball { radius } => self.star_ratio(StarKind::Ball { radius: *radius }, label),
        }
    }

    fn star_ratio(&self, star: StarKind, label: &str) -> Result<Estimate> {
        let s = self.spec;
        let (n, j, k) = (s.n, s.j, s.k);
        let nf = n as f64;
        let psi = ScalarField::new(Domain::Sphere(n), FieldKind::StarPower { star: make_star_set(n, star)?, m: self.m })?;
        let (bj, bk) = (ball_volume(j), ball_volume(k));
        let lhs = funk_outer(&self.ctx, &psi, n, k, 0.0, 0.0, &format!("{label}/k"), &|v, _| (bk * v).powf(nf / j as f64))?;
        // With j = k both sides share a stream and coincide exactly.
        let rhs_label = if j == k { format!("{label}/k") } else { format!("{label}/j") };
        let rhs = funk_outer(&self.ctx, &psi, n, j, 0.0, 0.0, &rhs_label, &|v, _| (bj * v).powf(nf / k as f64))?;
        Ok(ratio(lhs, rhs.powf(k as f64 / j as f64)))
    }

    fn draw(&self, rng: &mut SampleRng, first: bool) -> Candidate {
        let n = self.spec.n;
        match self.spec.family {
            Family::Extremizer if first => Candidate::Extremizer { scale: 1.0, diag: vec![1.0; n], translation: vec![0.0; n] },
            Family::Extremizer => Candidate::Extremizer {
                scale: uniform(rng, -0.7, 0.7).exp(),
                diag: (0..n).map(|_| uniform(rng, -0.4, 0.4).exp()).collect(),
                translation: (0..n).map(|_| uniform(rng, -1.0, 1.0)).collect(),
            },
            Family::RandomSmooth => Candidate::RandomSmooth { seed: rng.next(), amplitude: 0.5 },
            Family::Ball => Candidate::Ball { radius: uniform(rng, -1.0, 1.0).exp() },
        }
    }

    /// A neighbour of `c` at relative step `h`.
    fn perturb(&self, c: &Candidate, h: f64, rng: &mut SampleRng) -> Candidate {
        match c {
            Candidate::Extremizer { scale, diag, translation } => Candidate::Extremizer {
                scale: scale * (h * rng.normal()).exp(),
                diag: diag.iter().map(|d| d * (0.5 * h * rng.normal()).exp()).collect(),
                translation: translation.iter().map(|t| t + h * rng.normal()).collect(),
            },
            Candidate::RandomSmooth { seed, amplitude } => {
                Candidate::RandomSmooth { seed: *seed, amplitude: amplitude * (h * rng.normal()).exp() }
            }
            Candidate::Ball { radius } => Candidate::Ball { radius: radius * (h * rng.normal()).exp() },
        }
    }
}

fn den(e: &Estimate) -> f64 {
    if e.value != 0.0 {
        e.stderr / e.value.abs()
    } else {
        f64::INFINITY
    }
}

/// Random search over the family, local refinement around the best member,
/// and a confirmatory estimate of the winner on a fresh stream with a larger
/// budget. Candidates are ranked by `value − stat_sigma · stderr`.
pub fn explore_conjecture(spec: &ExploreSpec, exec: &dyn Executor) -> Result<ConjectureReport> {
    let (n, j, k) = (spec.n, spec.j, spec.k);
    ensure(spec.members >= 1, "a non-empty family")?;
    ensure(spec.budget.samples >= 1 && spec.budget.order >= 4, "samples ≥ 1 and order ≥ 4")?;
    let bound = match (spec.target, spec.family) {
        (ConjectureTarget::JkLpLq, Family::Extremizer) => {
            ensure(j < k && k < n, "j < k < n")?;
            if j == 0 {
                sharp_constant(ConstantKind::BigOmegaK { n, k })?
            } else {
                sharp_constant(ConstantKind::BigOmegaJK { n, j, k })?
            }
        }
        (ConjectureTarget::StarSections, Family::RandomSmooth | Family::Ball) => {
            ensure(1 <= j && j <= k && k < n, "1 ≤ j ≤ k < n")?;
            ensure(k <= 3, "k ≤ 3")?;
            (ball_volume(k) / ball_volume(j)).powf(n as f64 / j as f64)
        }
        (t, f) => return Err(Error::Invalid(format!("family {f:?} does not apply to target {t:?}"))),
    };
    let m = spec.m.unwrap_or(k as f64);
    let search = Search { spec, ctx: Ctx { exec, budget: spec.budget, seed: spec.seed }, m };
    let stream = Stream::new(spec.seed, "explore");
    let mut report = ConjectureReport {
        target: spec.target,
        family: spec.family,
        n,
        j,
        k,
        seed: spec.seed,
        bound,
        best_ratio: f64::NAN,
        stderr: f64::NAN,
        best_params: None,
        violation_found: false,
        evaluated: 0,
        skipped: 0,
        inconclusive: 0,
        notes: Vec::new(),
    };

    let mut best: Option<(Candidate, Estimate)> = None;
    let consider =
        |c: Candidate, label: &str, report: &mut ConjectureReport, best: &mut Option<(Candidate, Estimate)>| -> Result<()> {
            report.evaluated += 1;
            match search.evaluate(&c, label) {
                Ok(e) if den(&e) > 0.25 || !e.value.is_finite() => report.inconclusive += 1,
                Ok(e) => {
                    // Rank by the lower confidence bound so noisy members do not win on luck.
                    let lcb = |e: &Estimate| e.value - spec.tolerance.stat_sigma * e.stderr;
                    if best.as_ref().is_none_or(|(_, b)| lcb(&e) > lcb(b)) {
                        *best = Some((c, e));
                    }
                }
                Err(Error::NotIntegrable(why)) | Err(Error::Domain(why)) => {
                    report.skipped += 1;
                    report.notes.push(format!("{label} skipped: {why}"));
                }
                Err(e) => return Err(e),
            }
            Ok(())
        };

    for i in 0..spec.members {
        let mut rng = stream.derive("draw").sample(i as u64);
        let c = search.draw(&mut rng, i == 0);
        consider(c, &format!("member/{i}"), &mut report, &mut best)?;
    }
    if spec.family != Family::Ball || spec.j != spec.k {
        let mut h = 0.3;
        for r in 0..spec.refine {
            let Some((inc, _)) = best.clone() else { break };
            let mut rng = stream.derive("refine").sample(r as u64);
            let c = search.perturb(&inc, h, &mut rng);
            consider(c, &format!("refine/{r}"), &mut report, &mut best)?;
            h *= 0.7;
        }
    }

    let Some((winner, _)) = best else {
        report.notes.push("no candidate produced a conclusive estimate".into());
        return Ok(report);
    };
    let budget = Budget { samples: spec.budget.samples.saturating_mul(CONFIRM_FACTOR), ..spec.budget };
    let confirm = Search { spec, ctx: Ctx { exec, budget, seed: spec.seed }, m };
    let confirmed = confirm.evaluate(&winner, "confirm")?;
    let t = spec.tolerance;
    let excess = confirmed.value - bound;
    report.violation_found = excess > t.stat_sigma * confirmed.stderr && excess / bound > t.rel_tol;
    report.best_ratio = confirmed.value;
    report.stderr = confirmed.stderr;
    report.best_params = Some(winner);
    Ok(report)
}
