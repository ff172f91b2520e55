//! The registered checks. Each one evaluates both sides of one relation on
//! independent streams; deterministic inner rules are run at the budget
//! order and at half of it, and the gap is carried as a systematic error.

use alloc::boxed::Box;
use alloc::format;
use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;
use core::f64::consts::FRAC_PI_2;
#[allow(unused_imports)]
use num_traits::Float;

use super::{Budget, Outcome, Params, RelationKind, Sides};
use crate::error::{ensure, Error, Result};
use crate::fields::{ellipsoid_section_volume, make_star_set, Domain, FieldKind, ScalarField, StarKind, StarSet};
use crate::functionals::{affine_integral, euclidean_integral, grassmannian_integral, sphere_integral, star_volume, Tail};
use crate::grassmann::{self, AffinePlane, OrthonormalFrame};
use crate::linalg::norm2;
use crate::montecarlo::{Estimate, Executor};
use crate::quadrature::{gauss_legendre, SphereRule, SubspaceRule};
use crate::rng::Stream;
use crate::special::{ball_volume, sharp_constant, ConstantKind as K, Exponent};
use crate::transforms::{funk_jk_with_rule, funk_with_rule, jk_transform, radon_from_funk, Quadrature};

use RelationKind::{Equality as EQ, Inequality as LE};

pub(crate) struct Ctx<'a> {
    pub exec: &'a dyn Executor,
    pub budget: Budget,
    pub seed: u64,
}

impl Ctx<'_> {
    /// Monte-Carlo quadrature on the stream named `label`.
    pub(crate) fn mc(&self, label: &str) -> Quadrature {
        Quadrature::monte_carlo(self.budget.samples, Stream::new(self.seed, label).sample(0).next())
    }

    pub(crate) fn nested(&self, f: &dyn Fn(usize) -> Result<Estimate>) -> Result<Estimate> {
        let order = self.budget.order;
        let full = f(order)?;
        let half = f((order / 2).max(2))?;
        Ok(full.with_systematic(full.value - half.value))
    }
}

/// A registered relation.
pub struct CheckInfo {
    pub id: &'static str,
    /// The relation in plain notation.
    pub relation: &'static str,
    pub kind: RelationKind,
    pub budget: Budget,
    /// Parameter names the check accepts.
    pub params: &'static [&'static str],
    /// Parameters exercising the check for a base triple `(n, j, k)`.
    /// Sphere and star checks move to `(n+1, j+1, k+1)`.
    pub native: fn(usize, usize, usize) -> Params,
    pub(crate) run: fn(&Ctx, &Params) -> Result<Outcome>,
}

pub fn registry() -> &'static [CheckInfo] {
    &REGISTRY
}

const TRANSFORMS: Budget = Budget { samples: 20_000, order: 24 };
/// Section checks are cheap per sample and mostly exact inside.
const SECTIONS: Budget = Budget { samples: 400_000, order: 24 };
/// Circle and sphere rules converge fast on smooth radial functions.
const FUNK: Budget = Budget { samples: 20_000, order: 12 };
/// High-variance polynomial members need more outer samples.
const MEAN_VALUE: Budget = Budget { samples: 200_000, order: 12 };

const NK: &[&str] = &["n", "k", "field"];
const NKMU: &[&str] = &["n", "k", "mu", "field"];
const NJK: &[&str] = &["n", "j", "k", "field"];
const NJKMU: &[&str] = &["n", "j", "k", "mu", "field"];
const WEIGHTED: &[&str] = &["n", "k", "p", "mu", "field"];
const SECTION: &[&str] = &["n", "k", "star"];
const SECTION_MU: &[&str] = &["n", "k", "mu", "star"];
const SECTION_P: &[&str] = &["n", "k", "p", "mu", "star"];
const SECTION_JK: &[&str] = &["n", "j", "k", "p", "mu", "star"];

fn nk(n: usize, _: usize, k: usize) -> Params {
    Params { n: Some(n), k: Some(k), ..Params::default() }
}

fn njk(n: usize, j: usize, k: usize) -> Params {
    Params { n: Some(n), j: Some(j), k: Some(k), ..Params::default() }
}

fn nk_up(n: usize, _: usize, k: usize) -> Params {
    nk(n + 1, 0, k + 1)
}

fn njk_up(n: usize, j: usize, k: usize) -> Params {
    njk(n + 1, j + 1, k + 1)
}

static REGISTRY: [CheckInfo; 25] = [
    CheckInfo {
        id: "rk_p1_equality",
        relation: "∫ R_k f(τ) |τ|^μ dτ = ω_{k,1,μ}(n) ∫ f(x) |x|^μ dx",
        kind: EQ,
        budget: TRANSFORMS,
        params: NKMU,
        native: nk,
        run: rk_p1_equality,
    },
    CheckInfo {
        id: "rjk_p1_equality",
        relation: "∫ R_{j,k} f(τ) |τ|^μ dτ = ω_{j,k,1,μ}(n) ∫ f(ζ) |ζ|^μ dζ",
        kind: EQ,
        budget: TRANSFORMS,
        params: NJKMU,
        native: njk,
        run: rjk_p1_equality,
    },
    CheckInfo {
        id: "rk_weighted_bound",
        relation: "‖R_k f‖_{p,ν} ≤ ω_{k,p,μ}(n) ‖f‖_{p,μ}, ν = μ − k/p′ (p-th powers)",
        kind: LE,
        budget: TRANSFORMS,
        params: WEIGHTED,
        native: nk,
        run: rk_weighted_bound,
    },
    CheckInfo {
        id: "rk_lplq_extremizer",
        relation: "‖R_k f₀‖_{n+1} = Ω_k(n) ‖f₀‖_{(n+1)/(k+1)}, f₀ = (1+|x|²)^{−(k+1)/2}",
        kind: EQ,
        budget: TRANSFORMS,
        params: NK,
        native: nk,
        run: rk_lplq_extremizer,
    },
    CheckInfo {
        id: "rjk_lplq_extremizer",
        relation: "‖R_{j,k} f₀‖_{(n+1)/(j+1)} = Ω_{j,k}(n) ‖f₀‖_{(n+1)/(k+1)}, f₀ = (1+|ζ|²)^{−(k+1)/2}",
        kind: EQ,
        budget: TRANSFORMS,
        params: NJK,
        native: njk,
        run: rjk_lplq_extremizer,
    },
    CheckInfo {
        id: "dpp_inequality",
        relation: "∫ (R_k f)^{n+1} ‖f|_τ‖_∞^{k−n} dτ ≤ C_DPP(n,k) ‖f‖₁^{k+1}",
        kind: LE,
        budget: TRANSFORMS,
        params: NK,
        native: nk,
        run: dpp_inequality,
    },
    CheckInfo {
        id: "section_weighted",
        relation: "∫ V_k(S∩τ)^p |τ|^{νp} dτ ≤ ω_{k,p,μ}(n)^p ∫_S |x|^{μp} dx",
        kind: LE,
        budget: SECTIONS,
        params: SECTION_P,
        native: nk,
        run: section_weighted,
    },
    CheckInfo {
        id: "section_p1_equality",
        relation: "∫ V_k(S∩τ) |τ|^μ dτ = ω_{k,1,μ}(n) ∫_S |x|^μ dx",
        kind: EQ,
        budget: SECTIONS,
        params: SECTION_MU,
        native: nk,
        run: section_p1_equality,
    },
    CheckInfo {
        id: "fubini_identity",
        relation: "∫ V_k(S∩τ) dτ = V_n(S)",
        kind: EQ,
        budget: SECTIONS,
        params: SECTION,
        native: nk,
        run: fubini_identity,
    },
    CheckInfo {
        id: "section_jk_weighted",
        relation: "∫ V_k(S∩τ)^p |τ|^{νp} dτ ≤ ω_{j,k,p,μ}(n)^p ∫ V_j(S∩ζ)^p |ζ|^{μp} dζ",
        kind: LE,
        budget: SECTIONS,
        params: SECTION_JK,
        native: njk,
        run: section_jk_weighted,
    },
    CheckInfo {
        id: "section_lplq",
        relation: "∫ V_k(S∩τ)^{n+1} dτ ≤ 2^{k−n} (σ_k^n/σ_n^k) V_n(S)^{k+1}",
        kind: LE,
        budget: SECTIONS,
        params: SECTION,
        native: nk,
        run: section_lplq,
    },
    CheckInfo {
        id: "gardner_inequality",
        relation: "∫ V_k(S∩τ)^{n+1} dτ ≤ b_k^{n+1} b_{n(k+1)} / (b_n^{k+1} b_{k(n+1)}) V_n(S)^{k+1}",
        kind: LE,
        budget: SECTIONS,
        params: SECTION,
        native: nk,
        run: gardner_inequality,
    },
    CheckInfo {
        id: "schneider_inequality",
        relation: "∫ V_k(K∩τ)^{m+1} dτ ≤ b_k^{m+1} b_{n+km} / (b_n^{(n+km)/n} b_{k+km}) V_n(K)^{1+km/n}",
        kind: LE,
        budget: SECTIONS,
        params: &["n", "k", "m", "star"],
        native: nk,
        run: schneider_inequality,
    },
    CheckInfo {
        id: "lift_conjugation",
        relation: "R_{j,k} f(τ) = (σ_k/σ_j) ρ₂(τ) F_{j+1,k+1}[Λ_j ρ₁^{−1} f](γ_k τ) at sampled planes",
        kind: EQ,
        budget: SECTIONS,
        params: &["n", "j", "k", "field", "members"],
        native: njk,
        run: lift_conjugation,
    },
    CheckInfo {
        id: "measure_transfer",
        relation: "∫_{A_{n,d}} φ = (σ_n/σ_d) ∫_{G_{n+1,d+1}} Λφ / cos^{n+1} d* and ∫_{G_{n+1,d+1}} g d* = (σ_d/σ_n) ∫_{A_{n,d}} Λ^{−1}g (1+|τ|²)^{−(n+1)/2}, d ∈ {j, k}",
        kind: EQ,
        budget: SECTIONS,
        params: &["n", "j", "k"],
        native: njk,
        run: measure_transfer,
    },
    CheckInfo {
        id: "funk_mean_value",
        relation: "∫_{G_{n,k}} F_k ψ d* = ∫_{S^{n−1}} ψ d*",
        kind: EQ,
        budget: MEAN_VALUE,
        params: NK,
        native: nk_up,
        run: funk_mean_value,
    },
    CheckInfo {
        id: "funk_sharp",
        relation: "‖F_k φ‖_{L^n(G_{n,k})} ≤ ‖φ‖_{L^{n/k}(S^{n−1})}, probability measures",
        kind: LE,
        budget: FUNK,
        params: &["n", "k", "field", "members"],
        native: nk_up,
        run: funk_sharp,
    },
    CheckInfo {
        id: "funk_weighted",
        relation: "∫ |F_k φ|^p α₁ d* ≤ c₁^p ∫ |φ|^p β₁ d*",
        kind: LE,
        budget: FUNK,
        params: WEIGHTED,
        native: nk_up,
        run: funk_weighted,
    },
    CheckInfo {
        id: "funk_weighted_p1",
        relation: "∫ F_k φ (sin d)^μ (cos d)^{1−μ−n} d* = c̃₁ ∫ φ (1−θ_n²)^{μ/2} |θ_n|^{k−μ−n} d*",
        kind: EQ,
        budget: FUNK,
        params: NKMU,
        native: nk_up,
        run: funk_weighted_p1,
    },
    CheckInfo {
        id: "funk_jk_weighted",
        relation: "∫_{G_{n,k}} |F_{j,k} φ|^p α d* ≤ c^p ∫_{G_{n,j}} |φ|^p β d*",
        kind: LE,
        budget: FUNK,
        params: &["n", "j", "k", "p", "mu", "field"],
        native: njk_up,
        run: funk_jk_weighted,
    },
    CheckInfo {
        id: "star_weighted_equality",
        relation: "∫ Ṽ_m(L∩τ₀) α̃₁ d* = c̃₁ b_k ∫ ρ_L^m β̃₁ d*",
        kind: EQ,
        budget: FUNK,
        params: &["n", "k", "m", "mu", "star"],
        native: nk_up,
        run: star_weighted_equality,
    },
    CheckInfo {
        id: "star_weighted_bound",
        relation: "∫ Ṽ_m(L∩τ₀)^p α₁ d* ≤ (c₁ b_k)^p ∫ ρ_L^{mp} β₁ d*",
        kind: LE,
        budget: FUNK,
        params: &["n", "k", "p", "m", "mu", "star"],
        native: nk_up,
        run: star_weighted_bound,
    },
    CheckInfo {
        id: "busemann",
        relation: "∫_{G_{n,k}} V_k(L∩τ₀)^n d* ≤ (b_k^n/b_n^k) V_n(L)^k",
        kind: LE,
        budget: FUNK,
        params: &["n", "k", "star", "members"],
        native: nk_up,
        run: busemann,
    },
    CheckInfo {
        id: "furstenberg_tzkoni",
        relation: "(∫_{G_{n,k}} V_k(E∩τ₀)^n d*)^{1/n} = (b_k^n/b_n^k)^{1/n} V_n(E)^{k/n} for ellipsoids E",
        kind: EQ,
        budget: SECTIONS,
        params: &["n", "k", "star"],
        native: nk_up,
        run: furstenberg_tzkoni,
    },
    CheckInfo {
        id: "sections_of_sections",
        relation: "∫_{G_{n,k}} Ṽ_j(L∩τ₀)^p α d* ≤ (c b_k/b_j)^p ∫_{G_{n,j}} V_j(L∩ζ₀)^p β d*",
        kind: LE,
        budget: FUNK,
        params: SECTION_JK,
        native: njk_up,
        run: sections_of_sections,
    },
];

// ---------------------------------------------------------------------------
// Shared pieces.

fn side(label: impl Into<String>, kind: RelationKind, lhs: Estimate, rhs: Estimate, constant: f64) -> Sides {
    Sides { label: label.into(), kind, lhs, rhs, constant }
}

fn outcome(params: Params, sides: Vec<Sides>) -> Outcome {
    Outcome { params, sides, skipped: 0, notes: Vec::new() }
}

fn value(r: Result<Estimate>) -> f64 {
    r.map(|e| e.value).unwrap_or(f64::NAN)
}

fn finite_p(p: Exponent) -> Result<f64> {
    match p {
        Exponent::Finite(v) => Ok(v),
        Exponent::Infinite => Err(Error::Unsupported("p = ∞ in a power-integral check".into())),
    }
}

fn plane_domain(n: usize, j: usize) -> Domain {
    if j == 0 {
        Domain::Euclidean(n)
    } else {
        Domain::AffineGrassmannian { n, j }
    }
}

fn on_planes(n: usize, j: usize, kind: FieldKind) -> Result<ScalarField> {
    ScalarField::new(plane_domain(n, j), kind)
}

fn gaussian_kind(j: usize, center: Option<Vec<f64>>) -> FieldKind {
    if j == 0 {
        FieldKind::Gaussian { center }
    } else {
        FieldKind::PlaneGaussian { center }
    }
}

fn extremizer_kind(j: usize, k: usize) -> FieldKind {
    if j == 0 {
        FieldKind::Extremizer { k, map: None }
    } else {
        FieldKind::PlaneExtremizer { k, map: None }
    }
}

fn check_triple(n: usize, j: usize, k: usize) -> Result<()> {
    ensure(j < k, "j < k")?;
    ensure(k < n, "k < n")
}

/// Tail in the plane offset of `|T f|^p` when `T` integrates over `free`
/// extra dimensions.
fn image_tail(f: &ScalarField, free: usize, p: f64) -> Tail {
    let m = f.metadata();
    if let Some(r) = m.support_radius {
        return Tail::Support(r);
    }
    match m.decay_exponent {
        Some(d) if d.is_finite() => Tail::Decay((d - free as f64) * p),
        Some(_) => Tail::Decay(f64::INFINITY),
        None => Tail::Unknown,
    }
}

/// Evaluates the transform once at a coordinate plane so that prechecks
/// surface as errors rather than as non-finite samples.
fn probe(f: &ScalarField, n: usize, k: usize, order: usize) -> Result<()> {
    let axes: Vec<usize> = (0..k).collect();
    let tau = AffinePlane { direction: OrthonormalFrame::coordinate(n, &axes)?, offset: vec![0.0; n] };
    jk_transform(f, &tau, &Quadrature::tensor_tan(order)).map(|_| ())
}

/// `∫_{A_{n,k}} |R_{j,k} f|^pow |τ|^β dτ`.
#[allow(clippy::too_many_arguments)]
fn transform_power_integral(
    ctx: &Ctx,
    f: &ScalarField,
    n: usize,
    j: usize,
    k: usize,
    beta: f64,
    pow: f64,
    label: &str,
) -> Result<Estimate> {
    probe(f, n, k, ctx.budget.order)?;
    let q = ctx.mc(label);
    let tail = image_tail(f, k - j, pow);
    ctx.nested(&|order| {
        let inner = Quadrature::tensor_tan(order);
        affine_integral(ctx.exec, n, k, beta, tail, &q, &|tau| {
            let v = value(jk_transform(f, tau, &inner)).abs();
            if pow == 1.0 {
                v
            } else {
                v.powf(pow)
            }
        })
    })
}

/// `∫_{A_{n,j}} |f|^pow |ζ|^β dζ`.
fn field_power_integral(ctx: &Ctx, f: &ScalarField, n: usize, j: usize, beta: f64, pow: f64, label: &str) -> Result<Estimate> {
    let tail = Tail::of_field(&f.metadata(), pow);
    affine_integral(ctx.exec, n, j, beta, tail, &ctx.mc(label), &|z| {
        let v = f.eval_plane(z).abs();
        if pow == 1.0 {
            v
        } else {
            v.powf(pow)
        }
    })
}

/// Sides of `‖R_{j,k} f‖_q` and `‖f‖_p` with `p = (n+1)/(k+1)`,
/// `q = (n+1)/(j+1)`.
pub(crate) fn lplq_sides(ctx: &Ctx, f: &ScalarField, n: usize, j: usize, k: usize, label: &str) -> Result<(Estimate, Estimate)> {
    let p = (n + 1) as f64 / (k + 1) as f64;
    let q = (n + 1) as f64 / (j + 1) as f64;
    let lhs = transform_power_integral(ctx, f, n, j, k, 0.0, q, &format!("{label}/lhs"))?.powf(1.0 / q);
    let rhs = field_power_integral(ctx, f, n, j, 0.0, p, &format!("{label}/rhs"))?.powf(1.0 / p);
    Ok((lhs, rhs))
}

/// `v / c^s`, vanishing on the exceptional set.
fn fold(v: f64, c: f64, s: f64) -> f64 {
    if s == 0.0 {
        v
    } else if c == 0.0 {
        0.0
    } else {
        v / c.powf(s)
    }
}

/// `∫_{G_{n,k}} h(F_k ψ(τ₀), cos d(τ₀)) (sin d)^a (cos d)^b d*τ₀` with the
/// Funk transform by a product rule.
#[allow(clippy::too_many_arguments)]
pub(crate) fn funk_outer(
    ctx: &Ctx,
    psi: &ScalarField,
    n: usize,
    k: usize,
    a: f64,
    b: f64,
    label: &str,
    h: &(dyn Fn(f64, f64) -> f64 + Sync),
) -> Result<Estimate> {
    let q = ctx.mc(label);
    ctx.nested(&|order| {
        let rule = SphereRule::new(k, order)?;
        grassmannian_integral(ctx.exec, n, k, a, b, &q, &|fr| h(funk_with_rule(psi, fr, &rule), grassmann::pole_cos(fr)))
    })
}

fn sphere_side(
    ctx: &Ctx,
    psi: &ScalarField,
    n: usize,
    a: f64,
    b: f64,
    label: &str,
    h: &(dyn Fn(f64, f64) -> f64 + Sync),
) -> Result<Estimate> {
    sphere_integral(ctx.exec, n, a, b, &ctx.mc(label), &|th| h(psi.eval_direction(th), th[n - 1].abs()))
}

fn star_power(n: usize, star: StarKind, m: f64) -> Result<ScalarField> {
    ScalarField::new(Domain::Sphere(n), FieldKind::StarPower { star: make_star_set(n, star)?, m })
}

fn default_body(n: usize) -> StarKind {
    const CYCLE: [f64; 4] = [1.0, 0.5, 2.0, 1.5];
    let diag: Vec<f64> = (0..n).map(|i| CYCLE[i % 4]).collect();
    StarKind::diagonal_ellipsoid(&diag)
}

fn shifted_ellipsoid(n: usize, shift: usize) -> StarKind {
    const CYCLE: [f64; 4] = [1.0, 0.5, 2.0, 1.5];
    let diag: Vec<f64> = (0..n).map(|i| CYCLE[(i + shift) % 4]).collect();
    StarKind::diagonal_ellipsoid(&diag)
}

fn member_seed(ctx: &Ctx, label: &str, i: usize) -> u64 {
    Stream::new(ctx.seed, label).sample(i as u64).next()
}

fn body_volume(ctx: &Ctx, body: &StarSet, label: &str) -> Result<Estimate> {
    match body.exact_volume() {
        Some(v) => Ok(Estimate::exact(v)),
        None => star_volume(body, &ctx.mc(label), ctx.exec),
    }
}

fn has_exact_sections(body: &StarSet) -> bool {
    matches!(body.kind(), StarKind::Ball { .. } | StarKind::Ellipsoid { .. })
}

/// `∫_{A_{n,k}} V_k(S∩τ)^pow |τ|^β dτ`; exact sections for balls and
/// ellipsoids, otherwise the k-plane transform of the indicator.
#[allow(clippy::too_many_arguments)]
fn section_power_integral(ctx: &Ctx, body: &StarSet, n: usize, k: usize, beta: f64, pow: f64, label: &str) -> Result<Estimate> {
    let q = ctx.mc(label);
    let tail = Tail::Support(body.bounding_radius());
    if has_exact_sections(body) {
        return affine_integral(ctx.exec, n, k, beta, tail, &q, &|tau| match body.affine_section_volume(tau) {
            Ok(v) => v.powf(pow),
            Err(_) => f64::NAN,
        });
    }
    if k == 0 {
        return affine_integral(ctx.exec, n, 0, beta, tail, &q, &|tau| if body.contains(&tau.offset) { 1.0 } else { 0.0 });
    }
    let f = on_planes(n, 0, FieldKind::Indicator { body: body.clone() })?;
    ctx.nested(&|order| {
        let inner = Quadrature::tensor_tan(order);
        affine_integral(ctx.exec, n, k, beta, tail, &q, &|tau| value(jk_transform(&f, tau, &inner)).powf(pow))
    })
}

fn indicator_moment(ctx: &Ctx, body: &StarSet, n: usize, beta: f64, label: &str) -> Result<Estimate> {
    let tail = Tail::Support(body.bounding_radius());
    euclidean_integral(ctx.exec, n, beta, tail, &ctx.mc(label), &|x| if body.contains(x) { 1.0 } else { 0.0 })
}

// ---------------------------------------------------------------------------
// k-plane and (j,k)-plane transforms.

fn p1_sides(ctx: &Ctx, f: &ScalarField, n: usize, j: usize, k: usize, mu: f64) -> Result<(Estimate, Estimate)> {
    let lhs = transform_power_integral(ctx, f, n, j, k, mu, 1.0, "lhs")?;
    let rhs = field_power_integral(ctx, f, n, j, mu, 1.0, "rhs")?;
    Ok((lhs, rhs))
}

fn rk_p1_equality(ctx: &Ctx, p: &Params) -> Result<Outcome> {
    let (n, k) = (p.n.unwrap_or(3), p.k.unwrap_or(1));
    let mu = p.mu.unwrap_or(0.0);
    let c = sharp_constant(K::OmegaKPMu { n, k, p: Exponent::one(), mu })?;
    let f = on_planes(n, 0, p.field.clone().unwrap_or(FieldKind::Gaussian { center: None }))?;
    let (lhs, rhs) = p1_sides(ctx, &f, n, 0, k, mu)?;
    let params = Params { n: Some(n), k: Some(k), mu: Some(mu), field: Some(f.kind), ..Params::default() };
    Ok(outcome(params, vec![side("f", EQ, lhs, rhs, c)]))
}

fn rjk_p1_equality(ctx: &Ctx, p: &Params) -> Result<Outcome> {
    let (n, j, k) = (p.n.unwrap_or(3), p.j.unwrap_or(1), p.k.unwrap_or(2));
    let mu = p.mu.unwrap_or(0.0);
    check_triple(n, j, k)?;
    let c = sharp_constant(K::OmegaJKPMu { n, j, k, p: Exponent::one(), mu })?;
    let f = on_planes(n, j, p.field.clone().unwrap_or(gaussian_kind(j, None)))?;
    let (lhs, rhs) = p1_sides(ctx, &f, n, j, k, mu)?;
    let params = Params { n: Some(n), j: Some(j), k: Some(k), mu: Some(mu), field: Some(f.kind), ..Params::default() };
    Ok(outcome(params, vec![side("f", EQ, lhs, rhs, c)]))
}

fn rk_weighted_bound(ctx: &Ctx, p: &Params) -> Result<Outcome> {
    let (n, k) = (p.n.unwrap_or(3), p.k.unwrap_or(1));
    let pe = p.p.unwrap_or(Exponent::Finite(2.0));
    let pp = finite_p(pe)?;
    let mu = p.mu.unwrap_or(k as f64 - n as f64 / pp + 0.5);
    let nu = mu - k as f64 * pe.dual_recip();
    let c = sharp_constant(K::OmegaKPMu { n, k, p: pe, mu })?.powf(pp);
    let panel: Vec<(String, FieldKind)> = match &p.field {
        Some(f) => vec![("field".into(), f.clone())],
        None => vec![
            ("gaussian".into(), FieldKind::Gaussian { center: None }),
            ("extremizer".into(), FieldKind::Extremizer { k, map: None }),
            ("ball".into(), FieldKind::Indicator { body: make_star_set(n, StarKind::Ball { radius: 1.0 })? }),
            ("star-gaussian-1".into(), FieldKind::StarGaussian { star: make_star_set(n, StarKind::random_smooth(1))? }),
            ("star-gaussian-2".into(), FieldKind::StarGaussian { star: make_star_set(n, StarKind::random_smooth(2))? }),
        ],
    };
    let mut out = outcome(
        Params { n: Some(n), k: Some(k), p: Some(pe), mu: Some(mu), field: p.field.clone(), ..Params::default() },
        Vec::new(),
    );
    for (label, kind) in panel {
        let f = on_planes(n, 0, kind)?;
        let sides = transform_power_integral(ctx, &f, n, 0, k, nu * pp, pp, &format!("{label}/lhs"))
            .and_then(|l| Ok((l, field_power_integral(ctx, &f, n, 0, mu * pp, pp, &format!("{label}/rhs"))?)));
        match sides {
            Ok((lhs, rhs)) => out.sides.push(side(label, LE, lhs, rhs, c)),
            Err(Error::NotIntegrable(why)) => {
                out.skipped += 1;
                out.notes.push(format!("{label} skipped: not integrable ({why})"));
            }
            Err(e) => return Err(e),
        }
    }
    Ok(out)
}

fn rk_lplq_extremizer(ctx: &Ctx, p: &Params) -> Result<Outcome> {
    let (n, k) = (p.n.unwrap_or(2), p.k.unwrap_or(1));
    let c = sharp_constant(K::BigOmegaK { n, k })?;
    let f = on_planes(n, 0, p.field.clone().unwrap_or(extremizer_kind(0, k)))?;
    let (lhs, rhs) = lplq_sides(ctx, &f, n, 0, k, "f")?;
    let params = Params { n: Some(n), k: Some(k), field: Some(f.kind), ..Params::default() };
    Ok(outcome(params, vec![side("extremizer", EQ, lhs, rhs, c)]))
}

fn rjk_lplq_extremizer(ctx: &Ctx, p: &Params) -> Result<Outcome> {
    let (n, j, k) = (p.n.unwrap_or(3), p.j.unwrap_or(1), p.k.unwrap_or(2));
    check_triple(n, j, k)?;
    let c = if j == 0 { sharp_constant(K::BigOmegaK { n, k })? } else { sharp_constant(K::BigOmegaJK { n, j, k })? };
    let f = on_planes(n, j, p.field.clone().unwrap_or(extremizer_kind(j, k)))?;
    let (lhs, rhs) = lplq_sides(ctx, &f, n, j, k, "f")?;
    let params = Params { n: Some(n), j: Some(j), k: Some(k), field: Some(f.kind), ..Params::default() };
    Ok(outcome(params, vec![side("extremizer", EQ, lhs, rhs, c)]))
}

/// `sup_τ |f|`, in closed form when known, else the maximum over a tan grid.
fn plane_sup(f: &ScalarField, tau: &AffinePlane, order: usize) -> f64 {
    if let Some(s) = f.sup_on_plane(tau) {
        return s;
    }
    let (n, k) = (tau.ambient_dim(), tau.dim());
    let (x, _) = gauss_legendre(order);
    let nodes: Vec<f64> = core::iter::once(0.0).chain(x.iter().map(|t| (FRAC_PI_2 * t).tan())).collect();
    let m = nodes.len();
    let (mut s, mut pt) = (vec![0.0; k], vec![0.0; n]);
    let mut best: f64 = 0.0;
    for idx in 0..m.pow(k as u32) {
        let mut r = idx;
        for c in s.iter_mut() {
            *c = nodes[r % m];
            r /= m;
        }
        tau.point(&s, &mut pt);
        best = best.max(f.eval_point(&pt).abs());
    }
    best
}

fn dpp_inequality(ctx: &Ctx, p: &Params) -> Result<Outcome> {
    let (n, k) = (p.n.unwrap_or(3), p.k.unwrap_or(1));
    let c = sharp_constant(K::DppC { n, k })?;
    let f = on_planes(n, 0, p.field.clone().unwrap_or(FieldKind::Gaussian { center: None }))?;
    let l1 = field_power_integral(ctx, &f, n, 0, 0.0, 1.0, "rhs")?;
    probe(&f, n, k, ctx.budget.order)?;
    let q = ctx.mc("lhs");
    // The integrand decays faster than R_k f only for compact or Gaussian tails.
    let tail = match image_tail(&f, k, 1.0) {
        Tail::Decay(d) if d.is_finite() => Tail::Unknown,
        t => t,
    };
    let lhs = ctx.nested(&|order| {
        let inner = Quadrature::tensor_tan(order);
        affine_integral(ctx.exec, n, k, 0.0, tail, &q, &|tau| {
            let r = value(jk_transform(&f, tau, &inner));
            if r == 0.0 {
                return 0.0;
            }
            let s = plane_sup(&f, tau, order);
            if s == 0.0 {
                return 0.0;
            }
            (r / s).powi((n - k) as i32) * r.powi(k as i32 + 1)
        })
    })?;
    let rhs = l1.powf(k as f64 + 1.0);
    let params = Params { n: Some(n), k: Some(k), field: Some(f.kind), ..Params::default() };
    Ok(outcome(params, vec![side("f", LE, lhs, rhs, c)]))
}

// ---------------------------------------------------------------------------
// Affine sections.

fn section_params(n: usize, k: usize, body: &StarSet) -> Params {
    Params { n: Some(n), k: Some(k), star: Some(body.kind().clone()), ..Params::default() }
}

fn section_weighted(ctx: &Ctx, p: &Params) -> Result<Outcome> {
    let (n, k) = (p.n.unwrap_or(3), p.k.unwrap_or(1));
    let pe = p.p.unwrap_or(Exponent::Finite(2.0));
    let pp = finite_p(pe)?;
    let mu = p.mu.unwrap_or(k as f64 - n as f64 / pp + 0.5);
    let nu = mu - k as f64 * pe.dual_recip();
    let c = sharp_constant(K::OmegaKPMu { n, k, p: pe, mu })?.powf(pp);
    let body = make_star_set(n, p.star.clone().unwrap_or(default_body(n)))?;
    let lhs = section_power_integral(ctx, &body, n, k, nu * pp, pp, "lhs")?;
    let rhs = indicator_moment(ctx, &body, n, mu * pp, "rhs")?;
    let params = Params { p: Some(pe), mu: Some(mu), ..section_params(n, k, &body) };
    Ok(outcome(params, vec![side("body", LE, lhs, rhs, c)]))
}

fn section_p1_equality(ctx: &Ctx, p: &Params) -> Result<Outcome> {
    let (n, k) = (p.n.unwrap_or(3), p.k.unwrap_or(1));
    let mu = p.mu.unwrap_or(1.0);
    let c = sharp_constant(K::OmegaKPMu { n, k, p: Exponent::one(), mu })?;
    let body = make_star_set(n, p.star.clone().unwrap_or(default_body(n)))?;
    let lhs = section_power_integral(ctx, &body, n, k, mu, 1.0, "lhs")?;
    let rhs = indicator_moment(ctx, &body, n, mu, "rhs")?;
    let params = Params { mu: Some(mu), ..section_params(n, k, &body) };
    Ok(outcome(params, vec![side("body", EQ, lhs, rhs, c)]))
}

fn fubini_identity(ctx: &Ctx, p: &Params) -> Result<Outcome> {
    let (n, k) = (p.n.unwrap_or(3), p.k.unwrap_or(1));
    check_triple(n, 0, k)?;
    let body = make_star_set(n, p.star.clone().unwrap_or(default_body(n)))?;
    let lhs = section_power_integral(ctx, &body, n, k, 0.0, 1.0, "lhs")?;
    let rhs = body_volume(ctx, &body, "rhs")?;
    Ok(outcome(section_params(n, k, &body), vec![side("body", EQ, lhs, rhs, 1.0)]))
}

fn section_jk_weighted(ctx: &Ctx, p: &Params) -> Result<Outcome> {
    let (n, j, k) = (p.n.unwrap_or(3), p.j.unwrap_or(1), p.k.unwrap_or(2));
    check_triple(n, j, k)?;
    let pe = p.p.unwrap_or(Exponent::Finite(2.0));
    let pp = finite_p(pe)?;
    let mu = p.mu.unwrap_or(k as f64 - n as f64 / pp - j as f64 * pe.dual_recip() + 0.5);
    let nu = mu - (k - j) as f64 * pe.dual_recip();
    let c = sharp_constant(K::OmegaJKPMu { n, j, k, p: pe, mu })?.powf(pp);
    let body = make_star_set(n, p.star.clone().unwrap_or(default_body(n)))?;
    let lhs = section_power_integral(ctx, &body, n, k, nu * pp, pp, "lhs")?;
    let rhs = section_power_integral(ctx, &body, n, j, mu * pp, pp, "rhs")?;
    let params = Params { j: Some(j), p: Some(pe), mu: Some(mu), ..section_params(n, k, &body) };
    Ok(outcome(params, vec![side("body", LE, lhs, rhs, c)]))
}

fn section_power_check(
    ctx: &Ctx,
    p: &Params,
    default: StarKind,
    constant: impl Fn(usize, usize) -> Result<f64>,
) -> Result<Outcome> {
    let (n, k) = (p.n.unwrap_or(3), p.k.unwrap_or(1));
    check_triple(n, 0, k)?;
    let c = constant(n, k)?;
    let body = make_star_set(n, p.star.clone().unwrap_or(default))?;
    let lhs = section_power_integral(ctx, &body, n, k, 0.0, n as f64 + 1.0, "lhs")?;
    let rhs = body_volume(ctx, &body, "rhs")?.powf(k as f64 + 1.0);
    Ok(outcome(section_params(n, k, &body), vec![side("body", LE, lhs, rhs, c)]))
}

fn section_lplq(ctx: &Ctx, p: &Params) -> Result<Outcome> {
    let n = p.n.unwrap_or(3);
    section_power_check(ctx, p, default_body(n), |n, k| Ok(sharp_constant(K::BigOmegaK { n, k })?.powi(n as i32 + 1)))
}

fn gardner_inequality(ctx: &Ctx, p: &Params) -> Result<Outcome> {
    section_power_check(ctx, p, StarKind::Ball { radius: 1.0 }, |n, k| sharp_constant(K::GardnerC { n, k }))
}

fn schneider_inequality(ctx: &Ctx, p: &Params) -> Result<Outcome> {
    let (n, k) = (p.n.unwrap_or(3), p.k.unwrap_or(1));
    check_triple(n, 0, k)?;
    let mf = p.m.unwrap_or(1.0);
    ensure(mf.fract() == 0.0 && mf >= 1.0 && mf <= n as f64, "an integer m with 1 ≤ m ≤ n")?;
    let m = mf as usize;
    let c = sharp_constant(K::SchneiderC { n, k, m })?;
    let body = make_star_set(n, p.star.clone().unwrap_or(default_body(n)))?;
    let lhs = section_power_integral(ctx, &body, n, k, 0.0, mf + 1.0, "lhs")?;
    let rhs = body_volume(ctx, &body, "rhs")?.powf(1.0 + (k * m) as f64 / n as f64);
    let params = Params { m: Some(mf), ..section_params(n, k, &body) };
    Ok(outcome(params, vec![side("body", LE, lhs, rhs, c)]))
}

// ---------------------------------------------------------------------------
// Transfer to compact Grassmannians.

fn lift_conjugation(ctx: &Ctx, p: &Params) -> Result<Outcome> {
    let (n, j, k) = (p.n.unwrap_or(3), p.j.unwrap_or(1), p.k.unwrap_or(2));
    check_triple(n, j, k)?;
    let center: Vec<f64> = (0..n).map(|i| [0.3, -0.2, 0.1][i % 3]).collect();
    let f = on_planes(n, j, p.field.clone().unwrap_or(gaussian_kind(j, Some(center))))?;
    let g = ScalarField::new(Domain::Grassmannian { n: n + 1, k: j + 1 }, FieldKind::Lifted { base: Box::new(f.clone()), k })?;
    let count = p.members.unwrap_or(20);
    ensure(count >= 1, "at least one plane")?;
    let stream = Stream::new(ctx.seed, "lift-conjugation/planes");
    let mut sides = Vec::with_capacity(count);
    for i in 0..count {
        let mut rng = stream.sample(i as u64);
        let dir = grassmann::haar_subspace(n, k, &mut rng)?;
        let mut x = vec![0.0; n];
        rng.fill_normal(&mut x);
        x.iter_mut().for_each(|v| *v *= 0.6);
        let tau = AffinePlane::through(dir, &x)?;
        let lhs = ctx.nested(&|o| jk_transform(&f, &tau, &Quadrature::tensor_tan(o)))?;
        let rhs = ctx.nested(&|o| radon_from_funk(&g, &tau, &Quadrature::tensor_tan(o)))?;
        sides.push(side(format!("plane {i} (|τ| = {:.3})", norm2(&tau.offset).sqrt()), EQ, lhs, rhs, 1.0));
    }
    let params = Params { n: Some(n), j: Some(j), k: Some(k), field: Some(f.kind), members: Some(count), ..Params::default() };
    Ok(outcome(params, sides))
}

fn measure_transfer(ctx: &Ctx, p: &Params) -> Result<Outcome> {
    let (n, j, k) = (p.n.unwrap_or(3), p.j.unwrap_or(1), p.k.unwrap_or(2));
    check_triple(n, j, k)?;
    let center: Vec<f64> = (0..n).map(|i| [0.3, -0.2, 0.1][i % 3]).collect();
    let ln_area = |d: usize| crate::special::ln_sphere_area(d as f64);
    let mut sides = Vec::new();
    for d in [k, j] {
        // Affine planes to subspaces.
        let phi = on_planes(n, d, gaussian_kind(d, Some(center.clone())))?;
        let lhs = field_power_integral(ctx, &phi, n, d, 0.0, 1.0, &format!("A/{d}/lhs"))?;
        let e = n as i32 + 1;
        let rhs =
            grassmannian_integral(
                ctx.exec,
                n + 1,
                d + 1,
                0.0,
                0.0,
                &ctx.mc(&format!("A/{d}/rhs")),
                &|fr| match grassmann::unlift(fr) {
                    Ok(t) => phi.eval_plane(&t) / grassmann::pole_cos(fr).powi(e),
                    Err(_) => 0.0,
                },
            )?
            .scale((ln_area(n) - ln_area(d)).exp());
        sides.push(side(format!("planes to subspaces, d = {d}"), EQ, lhs, rhs, 1.0));

        // Subspaces to affine planes.
        let g = ScalarField::new(Domain::Grassmannian { n: n + 1, k: d + 1 }, FieldKind::PoleCosPower { power: 2.0 })?;
        let lhs =
            grassmannian_integral(ctx.exec, n + 1, d + 1, 0.0, 0.0, &ctx.mc(&format!("B/{d}/lhs")), &|fr| g.eval_subspace(fr))?;
        let rhs = affine_integral(ctx.exec, n, d, 0.0, Tail::Decay(n as f64 + 3.0), &ctx.mc(&format!("B/{d}/rhs")), &|tau| {
            g.eval_subspace(&grassmann::lift(tau)) * (1.0 + norm2(&tau.offset)).powf(-0.5 * (n as f64 + 1.0))
        })?
        .scale((ln_area(d) - ln_area(n)).exp());
        sides.push(side(format!("subspaces to planes, d = {d}"), EQ, lhs, rhs, 1.0));
    }
    Ok(outcome(Params { n: Some(n), j: Some(j), k: Some(k), ..Params::default() }, sides))
}

// ---------------------------------------------------------------------------
// Funk-type transforms.

fn check_funk(n: usize, k: usize) -> Result<()> {
    ensure(k >= 1, "k ≥ 1")?;
    ensure(k < n, "k < n")
}

fn funk_mean_value(ctx: &Ctx, p: &Params) -> Result<Outcome> {
    let (n, k) = (p.n.unwrap_or(3), p.k.unwrap_or(2));
    check_funk(n, k)?;
    let panel: Vec<(String, FieldKind)> = match &p.field {
        Some(f) => vec![("field".into(), f.clone())],
        None => vec![
            ("constant".into(), FieldKind::Constant { value: 1.0 }),
            ("pole-square".into(), FieldKind::Coordinate { axis: n - 1, power: 2 }),
            ("first-quartic".into(), FieldKind::Coordinate { axis: 0, power: 4 }),
            ("random-star".into(), star_power(n, StarKind::random_smooth(1), k as f64)?.kind),
            ("ellipsoid".into(), star_power(n, shifted_ellipsoid(n, 1), 2.0)?.kind),
        ],
    };
    let mut sides = Vec::new();
    for (label, kind) in panel {
        let psi = ScalarField::new(Domain::Sphere(n), kind)?;
        let lhs = funk_outer(ctx, &psi, n, k, 0.0, 0.0, &format!("{label}/lhs"), &|v, _| v)?;
        let rhs = sphere_side(ctx, &psi, n, 0.0, 0.0, &format!("{label}/rhs"), &|v, _| v)?;
        sides.push(side(label, EQ, lhs, rhs, 1.0));
    }
    Ok(outcome(Params { n: Some(n), k: Some(k), field: p.field.clone(), ..Params::default() }, sides))
}

fn funk_sharp(ctx: &Ctx, p: &Params) -> Result<Outcome> {
    let (n, k) = (p.n.unwrap_or(3), p.k.unwrap_or(2));
    check_funk(n, k)?;
    let (nf, r) = (n as f64, n as f64 / k as f64);
    let mut panel: Vec<(String, FieldKind, RelationKind)> = Vec::new();
    match &p.field {
        Some(f) => panel.push(("field".into(), f.clone(), LE)),
        None => {
            let count = p.members.unwrap_or(10);
            for i in 0..count {
                let seed = member_seed(ctx, "funk-sharp/stars", i);
                panel.push((format!("random-{i}"), star_power(n, StarKind::random_smooth(seed), k as f64)?.kind, LE));
            }
            panel.push(("constant".into(), FieldKind::Constant { value: 1.0 }, EQ));
        }
    }
    let mut sides = Vec::new();
    for (label, kind, rel) in panel {
        let phi = ScalarField::new(Domain::Sphere(n), kind)?;
        let lhs = funk_outer(ctx, &phi, n, k, 0.0, 0.0, &format!("{label}/lhs"), &|v, _| v.abs().powf(nf))?.powf(1.0 / nf);
        let rhs = sphere_side(ctx, &phi, n, 0.0, 0.0, &format!("{label}/rhs"), &|v, _| v.abs().powf(r))?.powf(1.0 / r);
        sides.push(side(label, rel, lhs, rhs, 1.0));
    }
    Ok(outcome(Params { n: Some(n), k: Some(k), field: p.field.clone(), members: p.members, ..Params::default() }, sides))
}

fn funk_weighted_p1(ctx: &Ctx, p: &Params) -> Result<Outcome> {
    let (n, k) = (p.n.unwrap_or(3), p.k.unwrap_or(2));
    check_funk(n, k)?;
    let (nf, kf) = (n as f64, k as f64);
    let mu = p.mu.unwrap_or(kf - nf + 0.5);
    let c = sharp_constant(K::FunkTildeC1 { n, k, mu })?;
    let default = || star_power(n, StarKind::random_smooth(3), 1.0).map(|f| f.kind);
    let phi = ScalarField::new(
        Domain::Sphere(n),
        match &p.field {
            Some(f) => f.clone(),
            None => default()?,
        },
    )?;
    let s = phi.metadata().pole_cos_order;
    let lhs = funk_outer(ctx, &phi, n, k, mu, 1.0 - mu - nf + s, "lhs", &|v, c| fold(v, c, s))?;
    let rhs = sphere_side(ctx, &phi, n, mu, kf - mu - nf + s, "rhs", &|v, c| fold(v, c, s))?;
    let params = Params { n: Some(n), k: Some(k), mu: Some(mu), field: Some(phi.kind), ..Params::default() };
    Ok(outcome(params, vec![side("phi", EQ, lhs, rhs, c)]))
}

fn funk_weighted(ctx: &Ctx, p: &Params) -> Result<Outcome> {
    let (n, k) = (p.n.unwrap_or(3), p.k.unwrap_or(2));
    check_funk(n, k)?;
    let (nf, kf) = (n as f64, k as f64);
    let pe = p.p.unwrap_or(Exponent::Finite(2.0));
    let pp = finite_p(pe)?;
    let mu = p.mu.unwrap_or(kf - nf / pp - pe.dual_recip() + 0.25);
    let nu = mu - (kf - 1.0) * pe.dual_recip();
    let c = sharp_constant(K::FunkWeightedC1 { n, k, p: pe, mu })?.powf(pp);
    let panel: Vec<(String, FieldKind)> = match &p.field {
        Some(f) => vec![("field".into(), f.clone())],
        None => vec![
            ("constant".into(), FieldKind::Constant { value: 1.0 }),
            ("random-1".into(), star_power(n, StarKind::random_smooth(1), kf)?.kind),
            ("random-2".into(), star_power(n, StarKind::random_smooth(2), kf)?.kind),
        ],
    };
    let mut sides = Vec::new();
    for (label, kind) in panel {
        let phi = ScalarField::new(Domain::Sphere(n), kind)?;
        let s = phi.metadata().pole_cos_order * pp;
        let h = |v: f64, c: f64| fold(v.abs().powf(pp), c, s);
        let lhs = funk_outer(ctx, &phi, n, k, nu * pp, (1.0 - nu) * pp - nf + s, &format!("{label}/lhs"), &h)?;
        let rhs = sphere_side(ctx, &phi, n, mu * pp, (kf - mu) * pp - nf + s, &format!("{label}/rhs"), &h)?;
        sides.push(side(label, LE, lhs, rhs, c));
    }
    let params = Params { n: Some(n), k: Some(k), p: Some(pe), mu: Some(mu), field: p.field.clone(), ..Params::default() };
    Ok(outcome(params, sides))
}

fn funk_jk_weighted(ctx: &Ctx, p: &Params) -> Result<Outcome> {
    let (n, j, k) = (p.n.unwrap_or(4), p.j.unwrap_or(1), p.k.unwrap_or(2));
    check_triple(n, j, k)?;
    ensure(j >= 1, "j ≥ 1")?;
    let (nf, jf, kf) = (n as f64, j as f64, k as f64);
    let pe = p.p.unwrap_or(Exponent::Finite(2.0));
    let pp = finite_p(pe)?;
    let mu = p.mu.unwrap_or(kf - nf / pp - jf * pe.dual_recip() + 0.25);
    let nu = mu - (kf - jf) * pe.dual_recip();
    let c = sharp_constant(K::FunkWeightedC { n, j, k, p: pe, mu })?.powf(pp);
    let dom = Domain::Grassmannian { n, k: j };
    let mut panel: Vec<(String, FieldKind)> = match &p.field {
        Some(f) => vec![("field".into(), f.clone())],
        None => vec![
            ("constant".into(), FieldKind::PoleCosPower { power: 0.0 }),
            ("pole-square".into(), FieldKind::PoleCosPower { power: 2.0 }),
        ],
    };
    if p.field.is_none() && j == 1 {
        let inner = star_power(n, StarKind::random_smooth(1), 1.0)?;
        panel.push(("random-star".into(), FieldKind::FunkOf { inner: Box::new(inner), order: 2 }));
    }
    let mut sides = Vec::new();
    for (label, kind) in panel {
        let phi = ScalarField::new(dom, kind)?;
        let s = phi.metadata().pole_cos_order * pp;
        let q = ctx.mc(&format!("{label}/lhs"));
        let lhs = ctx.nested(&|order| {
            let rule = SubspaceRule::new(k, j, order)?;
            grassmannian_integral(ctx.exec, n, k, nu * pp, (jf - nu) * pp - nf + s, &q, &|fr| {
                let v = funk_jk_with_rule(&phi, fr, &rule).unwrap_or(f64::NAN);
                fold(v.abs().powf(pp), grassmann::pole_cos(fr), s)
            })
        })?;
        let rhs =
            grassmannian_integral(ctx.exec, n, j, mu * pp, (kf - mu) * pp - nf + s, &ctx.mc(&format!("{label}/rhs")), &|fr| {
                fold(phi.eval_subspace(fr).abs().powf(pp), grassmann::pole_cos(fr), s)
            })?;
        sides.push(side(label, LE, lhs, rhs, c));
    }
    let params =
        Params { n: Some(n), j: Some(j), k: Some(k), p: Some(pe), mu: Some(mu), field: p.field.clone(), ..Params::default() };
    Ok(outcome(params, sides))
}

// ---------------------------------------------------------------------------
// Central sections of star sets.

fn star_weighted_equality(ctx: &Ctx, p: &Params) -> Result<Outcome> {
    let (n, k) = (p.n.unwrap_or(3), p.k.unwrap_or(2));
    check_funk(n, k)?;
    let (nf, kf) = (n as f64, k as f64);
    let mu = p.mu.unwrap_or(0.0);
    let m = p.m.unwrap_or(kf);
    ensure(m > 0.0, "m > 0")?;
    let c = sharp_constant(K::FunkTildeC1 { n, k, mu })? * ball_volume(k);
    let gamma = (((nf - kf - 1.0 + mu) / m).floor() + 1.0).max(1.0);
    let star = p.star.clone().unwrap_or(StarKind::EquatorialBump { gamma });
    let psi = star_power(n, star.clone(), m)?;
    let s = psi.metadata().pole_cos_order;
    let bk = ball_volume(k);
    let lhs = funk_outer(ctx, &psi, n, k, mu, 1.0 - mu - nf + s, "lhs", &|v, c| fold(bk * v, c, s))?;
    let rhs = sphere_side(ctx, &psi, n, mu, kf - mu - nf + s, "rhs", &|v, c| fold(v, c, s))?;
    let mut out = outcome(
        Params { n: Some(n), k: Some(k), m: Some(m), mu: Some(mu), star: Some(star.clone()), ..Params::default() },
        vec![side("star", EQ, lhs, rhs, c)],
    );
    if let StarKind::EquatorialBump { gamma } = star {
        out.notes.push(format!("equatorial bump exponent γ = {gamma}"));
    }
    Ok(out)
}

fn star_weighted_bound(ctx: &Ctx, p: &Params) -> Result<Outcome> {
    let (n, k) = (p.n.unwrap_or(3), p.k.unwrap_or(2));
    check_funk(n, k)?;
    let (nf, kf) = (n as f64, k as f64);
    let pe = p.p.unwrap_or(Exponent::Finite(nf / kf));
    let pp = finite_p(pe)?;
    let mu = p.mu.unwrap_or(0.0);
    let m = p.m.unwrap_or(kf);
    let nu = mu - (kf - 1.0) * pe.dual_recip();
    let bk = ball_volume(k);
    let c = (sharp_constant(K::FunkWeightedC1 { n, k, p: pe, mu })? * bk).powf(pp);
    let panel: Vec<(String, StarKind)> = match &p.star {
        Some(s) => vec![("star".into(), s.clone())],
        None => vec![
            ("random-1".into(), StarKind::random_smooth(1)),
            ("random-2".into(), StarKind::random_smooth(2)),
            ("ball".into(), StarKind::Ball { radius: 1.0 }),
            ("ellipsoid".into(), default_body(n)),
        ],
    };
    let mut sides = Vec::new();
    for (label, star) in panel {
        let psi = star_power(n, star, m)?;
        let s = psi.metadata().pole_cos_order * pp;
        let lhs = funk_outer(ctx, &psi, n, k, nu * pp, (1.0 - nu) * pp - nf + s, &format!("{label}/lhs"), &|v, c| {
            fold((bk * v).abs().powf(pp), c, s)
        })?;
        let rhs = sphere_side(ctx, &psi, n, mu * pp, (kf - mu) * pp - nf + s, &format!("{label}/rhs"), &|v, c| {
            fold(v.abs().powf(pp), c, s)
        })?;
        sides.push(side(label, LE, lhs, rhs, c));
    }
    let params =
        Params { n: Some(n), k: Some(k), p: Some(pe), m: Some(m), mu: Some(mu), star: p.star.clone(), ..Params::default() };
    Ok(outcome(params, sides))
}

fn busemann(ctx: &Ctx, p: &Params) -> Result<Outcome> {
    let (n, k) = (p.n.unwrap_or(3), p.k.unwrap_or(2));
    check_funk(n, k)?;
    let (bk, bn) = (ball_volume(k), ball_volume(n));
    let c = bk.powi(n as i32) / bn.powi(k as i32);
    let panel: Vec<(String, StarKind)> = match &p.star {
        Some(s) => vec![("star".into(), s.clone())],
        None => (0..p.members.unwrap_or(20))
            .map(|i| (format!("random-{i}"), StarKind::random_smooth(member_seed(ctx, "busemann/stars", i))))
            .collect(),
    };
    let mut sides = Vec::new();
    for (label, star) in panel {
        let body = make_star_set(n, star.clone())?;
        let psi = star_power(n, star, k as f64)?;
        let lhs = funk_outer(ctx, &psi, n, k, 0.0, 0.0, &format!("{label}/lhs"), &|v, _| (bk * v).powi(n as i32))?;
        let rhs = body_volume(ctx, &body, &format!("{label}/rhs"))?.powf(k as f64);
        sides.push(side(label, LE, lhs, rhs, c));
    }
    let params = Params { n: Some(n), k: Some(k), star: p.star.clone(), members: p.members, ..Params::default() };
    Ok(outcome(params, sides))
}

fn furstenberg_tzkoni(ctx: &Ctx, p: &Params) -> Result<Outcome> {
    let (n, k) = (p.n.unwrap_or(3), p.k.unwrap_or(2));
    check_funk(n, k)?;
    let nf = n as f64;
    let c = (ball_volume(k).powi(n as i32) / ball_volume(n).powi(k as i32)).powf(1.0 / nf);
    let panel: Vec<StarKind> = match &p.star {
        Some(s) => vec![s.clone()],
        None => (0..3).map(|i| shifted_ellipsoid(n, i)).collect(),
    };
    let mut sides = Vec::new();
    for (i, star) in panel.into_iter().enumerate() {
        let matrix = match &star {
            StarKind::Ellipsoid { matrix } => matrix.clone(),
            StarKind::Ball { radius } => {
                let mut m = vec![0.0; n * n];
                (0..n).for_each(|a| m[a * n + a] = 1.0 / (radius * radius));
                m
            }
            _ => return Err(Error::Invalid("an ellipsoid or ball body".into())),
        };
        let body = make_star_set(n, star)?;
        let vol = body.exact_volume().ok_or(Error::MissingClosedForm("the ellipsoid volume"))?;
        let lhs = grassmannian_integral(ctx.exec, n, k, 0.0, 0.0, &ctx.mc(&format!("ellipsoid-{i}")), &|fr| {
            ellipsoid_section_volume(&matrix, fr).map(|v| v.powi(n as i32)).unwrap_or(f64::NAN)
        })?
        .powf(1.0 / nf);
        let rhs = Estimate::exact(vol.powf(k as f64 / nf));
        sides.push(side(format!("ellipsoid-{i}"), EQ, lhs, rhs, c));
    }
    Ok(outcome(Params { n: Some(n), k: Some(k), star: p.star.clone(), ..Params::default() }, sides))
}

fn sections_of_sections(ctx: &Ctx, p: &Params) -> Result<Outcome> {
    let (n, j, k) = (p.n.unwrap_or(3), p.j.unwrap_or(1), p.k.unwrap_or(2));
    check_triple(n, j, k)?;
    ensure(j >= 1, "j ≥ 1")?;
    let (nf, jf, kf) = (n as f64, j as f64, k as f64);
    let pe = p.p.unwrap_or(Exponent::Finite(2.0));
    let pp = finite_p(pe)?;
    let mu = p.mu.unwrap_or(kf - nf / pp - jf * pe.dual_recip() + 0.25);
    let nu = mu - (kf - jf) * pe.dual_recip();
    let (bj, bk) = (ball_volume(j), ball_volume(k));
    let c = (sharp_constant(K::FunkWeightedC { n, j, k, p: pe, mu })? * bk / bj).powf(pp);
    let star = p.star.clone().unwrap_or(StarKind::random_smooth(1));
    let psi = star_power(n, star.clone(), jf)?;
    let s = psi.metadata().pole_cos_order * pp;
    let lhs = funk_outer(ctx, &psi, n, k, nu * pp, (jf - nu) * pp - nf + s, "lhs", &|v, c| fold((bk * v).abs().powf(pp), c, s))?;
    let rhs = funk_outer(ctx, &psi, n, j, mu * pp, (kf - mu) * pp - nf + s, "rhs", &|v, c| fold((bj * v).abs().powf(pp), c, s))?;
    let params = Params { n: Some(n), j: Some(j), k: Some(k), p: Some(pe), mu: Some(mu), star: Some(star), ..Params::default() };
    Ok(outcome(params, vec![side("star", LE, lhs, rhs, c)]))
}
