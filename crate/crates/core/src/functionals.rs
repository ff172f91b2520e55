//! Weighted integrals and norms on ℝⁿ, `A_{n,k}`, `S^{n−1}` and `G_{n,k}`,
//! and volume functionals of star sets.
//!
//! The integrators take a closure so that nested quantities (a transform
//! evaluated at each sampled plane) integrate the same way as plain fields.

use alloc::format;
use alloc::vec;
#[allow(unused_imports)]
use num_traits::Float;

use crate::error::{ensure, Error, Result};
use crate::fields::{Domain, FieldKind, ScalarField, StarKind, StarSet};
use crate::grassmann::{self, AffinePlane, OrthonormalFrame, PoleTilt, RadialProposal};

use crate::linalg::norm;
use crate::montecarlo::{mean_estimate, Estimate, Executor};
use crate::quadrature::{EuclidRule, Radial, SphereRule, SubspaceRule};
use crate::rng::Stream;
use crate::special::{ln_ball_volume, Exponent};
use crate::transforms::{funk_transform, Quadrature, QuadratureMode};

/// Weight attached to a norm.
#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
#[cfg_attr(feature = "serde", serde(tag = "type", rename_all = "snake_case", deny_unknown_fields))]
pub enum Weight {
    None,
    /// `|x|^ν` (or `|τ|^ν`) inside the norm, i.e. `|x|^{νp}` in the integral.
    Radial {
        nu: f64,
    },
    /// `(sin d)^a (cos d)^b` in the integral, `d` the distance to `e_n`.
    Pole {
        sin: f64,
        cos: f64,
    },
}

#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct NormSpec {
    pub domain: Domain,
    pub p: Exponent,
    pub weight: Weight,
}

/// What is known about the integrand's behavior at infinity.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Tail {
    /// No declared tail; the proposal is heavy-tailed.
    Unknown,
    /// `|g(u)| ≤ C(1+|u|)^{−t}`.
    Decay(f64),
    /// `g` vanishes outside `|u| ≤ R`.
    Support(f64),
}

impl Tail {
    /// Tail of `|f|^p` for a field with the given metadata.
    pub fn of_field(meta: &crate::fields::Metadata, p: f64) -> Tail {
        if let Some(r) = meta.support_radius {
            return Tail::Support(r);
        }
        match meta.decay_exponent {
            Some(d) if d.is_finite() => Tail::Decay(d * p),
            _ => Tail::Unknown,
        }
    }
}

/// Proposal exponent for `∫_{ℝ^d} g(u) |u|^β du` when `g` decays like
/// `|u|^{−tail}`: match the tail when it is integrable, else `d + β + 1`.
pub fn proposal_alpha(dim: usize, beta: f64, tail: Tail) -> f64 {
    let d = dim as f64;
    match tail {
        Tail::Decay(t) if t.is_finite() && t > d + beta => t,
        _ => d + beta + 1.0,
    }
}

fn ensure_integrable(cond: bool, what: impl FnOnce() -> alloc::string::String) -> Result<()> {
    if cond {
        Ok(())
    } else {
        Err(Error::NotIntegrable(what()))
    }
}

fn check_tail(d: usize, beta: f64, tail: Tail) -> Result<()> {
    let df = d as f64;
    ensure_integrable(df + beta > 0.0, || format!("weight exponent {beta} > −{d}"))?;
    if let Tail::Decay(t) = tail {
        ensure_integrable(t > df + beta, || format!("decay {t} > {}", df + beta))?;
    }
    Ok(())
}

/// Radial offsets in ℝ^d: either `|u|^β (1+|u|²)^{−α/2}` or, for a known
/// support, `|u|^β` on the ball of radius `R`.
enum Offsets {
    Proposal(RadialProposal),
    Ball { dim: usize, radius: f64, expo: f64, weight: f64 },
}

impl Offsets {
    fn new(dim: usize, beta: f64, tail: Tail) -> Result<Self> {
        match tail {
            Tail::Support(radius) if dim > 0 => {
                let expo = dim as f64 + beta;
                let ln_w = crate::special::ln_sphere_area(dim as f64 - 1.0) + expo * radius.ln() - expo.ln();
                Ok(Offsets::Ball { dim, radius, expo, weight: ln_w.exp() })
            }
            _ => Ok(Offsets::Proposal(RadialProposal::new(dim, proposal_alpha(dim, beta, tail), beta)?)),
        }
    }

    /// Draws `u` and returns `|u|^β / q(u)`.
    fn sample(&self, rng: &mut crate::rng::SampleRng, out: &mut [f64], beta: f64) -> f64 {
        match self {
            Offsets::Proposal(p) => {
                let w = p.sample(rng, out);
                if beta == 0.0 {
                    w
                } else {
                    w * norm(out).powf(beta)
                }
            }
            Offsets::Ball { dim, radius, expo, weight } => {
                let r = radius * rng.uniform().powf(1.0 / expo);
                let mut th = vec![0.0; *dim];
                rng.unit_vector(&mut th);
                for (o, t) in out.iter_mut().zip(&th) {
                    *o = r * t;
                }
                *weight
            }
        }
    }
}

/// `∫_{ℝⁿ} g(x) |x|^β dx`.
pub fn euclidean_integral(
    exec: &dyn Executor,
    n: usize,
    beta: f64,
    tail: Tail,
    q: &Quadrature,
    g: &(dyn Fn(&[f64]) -> f64 + Sync),
) -> Result<Estimate> {
    q.validate()?;
    check_tail(n, beta, tail)?;
    match q.mode {
        QuadratureMode::TensorTan { order } => {
            let radial = match tail {
                Tail::Support(r) => Radial::Interval(r),
                _ => Radial::Tan,
            };
            let rule = EuclidRule::new(n, order, radial)?;
            let mut acc = 0.0;
            for i in 0..rule.len() {
                let x = rule.point(i);
                let r = norm(x);
                let v = g(x) * if beta == 0.0 { 1.0 } else { r.powf(beta) };
                if !v.is_finite() {
                    return Err(Error::NonFinite);
                }
                acc += rule.weights[i] * v;
            }
            Ok(Estimate { value: acc, stderr: 0.0, samples_used: rule.len() as u64 })
        }
        QuadratureMode::MonteCarlo { samples } => {
            let offsets = Offsets::new(n, beta, tail)?;
            let stream = Stream::new(q.seed, "euclidean");
            mean_estimate(exec, samples, |i| {
                let mut rng = stream.sample(i);
                let mut x = vec![0.0; n];
                let w = offsets.sample(&mut rng, &mut x, beta);
                let v = g(&x);
                if v == 0.0 {
                    0.0
                } else {
                    v * w
                }
            })
        }
    }
}

/// `∫_{A_{n,k}} g(τ) |τ|^β dτ` with `dτ = d*ξ du`.
pub fn affine_integral(
    exec: &dyn Executor,
    n: usize,
    k: usize,
    beta: f64,
    tail: Tail,
    q: &Quadrature,
    g: &(dyn Fn(&AffinePlane) -> f64 + Sync),
) -> Result<Estimate> {
    ensure(k < n, "k < n")?;
    if k == 0 {
        let h = |x: &[f64]| g(&AffinePlane { direction: OrthonormalFrame::empty(n), offset: x.to_vec() });
        return euclidean_integral(exec, n, beta, tail, q, &h);
    }
    q.validate()?;
    let d = n - k;
    check_tail(d, beta, tail)?;
    match q.mode {
        QuadratureMode::TensorTan { order } => {
            let outer = SubspaceRule::new(n, k, order)?;
            let radial = match tail {
                Tail::Support(r) => Radial::Interval(r),
                _ => Radial::Tan,
            };
            let inner = EuclidRule::new(d, order, radial)?;
            let mut acc = 0.0;
            for a in 0..outer.len() {
                let b = outer.basis(a);
                let direction = OrthonormalFrame::from_columns(n, k, b[..n * k].to_vec())?;
                let comp = &b[n * k..];
                let mut tau = AffinePlane { direction, offset: vec![0.0; n] };
                let mut part = 0.0;
                for i in 0..inner.len() {
                    let u = inner.point(i);
                    tau.offset.iter_mut().for_each(|x| *x = 0.0);
                    for (c, uc) in u.iter().enumerate() {
                        crate::linalg::axpy(*uc, &comp[c * n..(c + 1) * n], &mut tau.offset);
                    }
                    let r = norm(u);
                    let v = g(&tau) * if beta == 0.0 { 1.0 } else { r.powf(beta) };
                    if !v.is_finite() {
                        return Err(Error::NonFinite);
                    }
                    part += inner.weights[i] * v;
                }
                acc += outer.weights[a] * part;
            }
            Ok(Estimate { value: acc, stderr: 0.0, samples_used: (outer.len() * inner.len()) as u64 })
        }
        QuadratureMode::MonteCarlo { samples } => {
            let offsets = Offsets::new(d, beta, tail)?;
            let stream = Stream::new(q.seed, "affine");
            mean_estimate(exec, samples, |i| {
                let mut rng = stream.sample(i);
                let full = match grassmann::haar_subspace(n, n, &mut rng) {
                    Ok(f) => f,
                    Err(_) => return f64::NAN,
                };
                let mut u = vec![0.0; d];
                let w = offsets.sample(&mut rng, &mut u, beta);
                let cols = full.columns();
                let mut offset = vec![0.0; n];
                for (c, uc) in u.iter().enumerate() {
                    crate::linalg::axpy(*uc, &cols[(k + c) * n..(k + c + 1) * n], &mut offset);
                }
                let direction = match OrthonormalFrame::from_columns(n, k, cols[..n * k].to_vec()) {
                    Ok(f) => f,
                    Err(_) => return f64::NAN,
                };
                let v = g(&AffinePlane { direction, offset });
                if v == 0.0 {
                    0.0
                } else {
                    v * w
                }
            })
        }
    }
}

fn pole_weight(s: f64, c: f64, a: f64, b: f64) -> f64 {
    let ws = if a == 0.0 { 1.0 } else { s.powf(a) };
    let wc = if b == 0.0 { 1.0 } else { c.powf(b) };
    ws * wc
}

/// `∫_{G_{n,k}} g(τ₀) (sin d)^a (cos d)^b d*τ₀`, sampling the tilted law.
pub fn grassmannian_integral(
    exec: &dyn Executor,
    n: usize,
    k: usize,
    a: f64,
    b: f64,
    q: &Quadrature,
    g: &(dyn Fn(&OrthonormalFrame) -> f64 + Sync),
) -> Result<Estimate> {
    q.validate()?;
    let tilt = PoleTilt::new(n, k, a, b)?;
    match q.mode {
        QuadratureMode::TensorTan { order } => {
            let rule = SubspaceRule::new(n, k, order)?;
            let mut acc = 0.0;
            for i in 0..rule.len() {
                let fr = OrthonormalFrame::from_columns(n, k, rule.basis(i)[..n * k].to_vec())?;
                let c = grassmann::pole_cos(&fr);
                let v = g(&fr) * pole_weight((1.0 - c * c).max(0.0).sqrt(), c, a, b);
                if !v.is_finite() {
                    return Err(Error::NonFinite);
                }
                acc += rule.weights[i] * v;
            }
            Ok(Estimate { value: acc, stderr: 0.0, samples_used: rule.len() as u64 })
        }
        QuadratureMode::MonteCarlo { samples } => {
            let stream = Stream::new(q.seed, "grassmannian");
            let z = tilt.ln_normalizer().exp();
            let e = mean_estimate(exec, samples, |i| {
                let mut rng = stream.sample(i);
                match tilt.sample_subspace(&mut rng) {
                    Ok(fr) => g(&fr),
                    Err(_) => f64::NAN,
                }
            })?;
            Ok(e.scale(z))
        }
    }
}

/// `∫_{S^{n−1}} g(θ) (1−θ_n²)^{a/2} |θ_n|^b d*θ`.
pub fn sphere_integral(
    exec: &dyn Executor,
    n: usize,
    a: f64,
    b: f64,
    q: &Quadrature,
    g: &(dyn Fn(&[f64]) -> f64 + Sync),
) -> Result<Estimate> {
    q.validate()?;
    ensure(n >= 2, "n ≥ 2")?;
    let tilt = PoleTilt::new(n, 1, a, b)?;
    match q.mode {
        QuadratureMode::TensorTan { order } => {
            let rule = SphereRule::new(n, order)?;
            let mut acc = 0.0;
            for i in 0..rule.len() {
                let th = rule.point(i);
                let c = th[n - 1].abs();
                let v = g(th) * pole_weight((1.0 - c * c).max(0.0).sqrt(), c, a, b);
                if !v.is_finite() {
                    return Err(Error::NonFinite);
                }
                acc += rule.weights[i] * v;
            }
            Ok(Estimate { value: acc, stderr: 0.0, samples_used: rule.len() as u64 })
        }
        QuadratureMode::MonteCarlo { samples } => {
            let stream = Stream::new(q.seed, "sphere");
            let z = tilt.ln_normalizer().exp();
            let e = mean_estimate(exec, samples, |i| {
                let mut rng = stream.sample(i);
                g(&tilt.sample_direction(&mut rng))
            })?;
            Ok(e.scale(z))
        }
    }
}

/// `∫ |f|^p w`, the p-th power of the weighted norm (finite `p`).
pub fn weighted_power_integral(f: &ScalarField, spec: &NormSpec, q: &Quadrature, exec: &dyn Executor) -> Result<Estimate> {
    ensure(f.domain == spec.domain, "the field to live on the norm's domain")?;
    let p = match spec.p {
        Exponent::Finite(p) => p,
        Exponent::Infinite => return Err(Error::Invalid("p = ∞ has no power integral".into())),
    };
    let meta = f.metadata();
    let tail = Tail::of_field(&meta, p);
    let order = meta.pole_cos_order;
    match (spec.domain, spec.weight) {
        (Domain::Euclidean(n), w) | (Domain::AffineGrassmannian { n, j: 0 }, w) if !matches!(w, Weight::Pole { .. }) => {
            let beta = radial_beta(w, p);
            euclidean_integral(exec, n, beta, tail, q, &|x| f.eval_point(x).abs().powf(p))
        }
        (Domain::AffineGrassmannian { n, j }, w) if !matches!(w, Weight::Pole { .. }) => {
            let beta = radial_beta(w, p);
            affine_integral(exec, n, j, beta, tail, q, &|z| f.eval_plane(z).abs().powf(p))
        }
        (Domain::Sphere(n), w) if !matches!(w, Weight::Radial { .. }) => {
            let (a, b) = pole_exponents(w);
            // Fold the field's vanishing order at the equator into the tilt.
            let fold = order * p;
            ensure_integrable(b + fold > -1.0, || format!("cos-exponent {b} + p·(field order {order}) > −1"))?;
            ensure_integrable(a > 1.0 - n as f64, || format!("sin-exponent {a} > −(n − 1)"))?;
            sphere_integral(exec, n, a, b + fold, q, &|th| {
                let c = th[n - 1].abs();
                let v = f.eval_direction(th).abs().powf(p);
                if fold == 0.0 {
                    v
                } else {
                    v / c.powf(fold)
                }
            })
        }
        (Domain::Grassmannian { n, k }, w) if !matches!(w, Weight::Radial { .. }) => {
            let (a, b) = pole_exponents(w);
            let fold = order * p;
            ensure_integrable(b + fold > -(k as f64), || format!("cos-exponent {b} + p·(field order {order}) > −k"))?;
            ensure_integrable(a > k as f64 - n as f64, || format!("sin-exponent {a} > k − n"))?;
            grassmannian_integral(exec, n, k, a, b + fold, q, &|fr| {
                let v = f.eval_subspace(fr).abs().powf(p);
                if fold == 0.0 {
                    v
                } else {
                    v / grassmann::pole_cos(fr).powf(fold)
                }
            })
        }
        (d, w) => Err(Error::Invalid(format!("weight {w:?} does not apply on {d:?}"))),
    }
}

fn radial_beta(w: Weight, p: f64) -> f64 {
    match w {
        Weight::Radial { nu } => nu * p,
        _ => 0.0,
    }
}

fn pole_exponents(w: Weight) -> (f64, f64) {
    match w {
        Weight::Pole { sin, cos } => (sin, cos),
        _ => (0.0, 0.0),
    }
}

/// `(∫ |f|^p w)^{1/p}`; for `p = ∞` the largest sampled value of
/// `|x|^ν |f|`, which is a lower bound for the essential supremum.
pub fn weighted_norm(f: &ScalarField, spec: &NormSpec, q: &Quadrature, exec: &dyn Executor) -> Result<Estimate> {
    match spec.p {
        Exponent::Finite(p) => Ok(weighted_power_integral(f, spec, q, exec)?.powf(1.0 / p)),
        Exponent::Infinite => sampled_sup(f, spec, q),
    }
}

fn sampled_sup(f: &ScalarField, spec: &NormSpec, q: &Quadrature) -> Result<Estimate> {
    let samples = match q.mode {
        QuadratureMode::MonteCarlo { samples } => samples,
        QuadratureMode::TensorTan { order } => (order * order) as u64,
    };
    let nu = match spec.weight {
        Weight::None => 0.0,
        Weight::Radial { nu } => nu,
        Weight::Pole { .. } => return Err(Error::Unsupported("p = ∞ with a pole weight".into())),
    };
    let stream = Stream::new(q.seed, "sup");
    let mut best: f64 = 0.0;
    let scale = |r: f64| if nu == 0.0 { 1.0 } else { r.powf(nu) };
    for i in 0..samples {
        let mut rng = stream.sample(i);
        let v = match spec.domain {
            Domain::Euclidean(n) | Domain::AffineGrassmannian { n, j: 0 } => {
                // Origin first, then a heavy-tailed spread of points.
                let mut x = vec![0.0; n];
                if i > 0 {
                    RadialProposal::new(n, n as f64 + 1.0, 0.0)?.sample(&mut rng, &mut x);
                }
                f.eval_point(&x).abs() * scale(norm(&x))
            }
            Domain::AffineGrassmannian { n, j } => {
                let mut s = grassmann::sample_affine_plane(n, j, (n - j) as f64 + 1.0, &mut rng)?.plane;
                if i == 0 {
                    s.offset.iter_mut().for_each(|x| *x = 0.0);
                }
                f.eval_plane(&s).abs() * scale(norm(&s.offset))
            }
            Domain::Sphere(n) => {
                let mut th = vec![0.0; n];
                rng.unit_vector(&mut th);
                f.eval_direction(&th).abs()
            }
            Domain::Grassmannian { n, k } => f.eval_subspace(&grassmann::haar_subspace(n, k, &mut rng)?).abs(),
        };
        if !v.is_finite() {
            return Err(Error::NonFinite);
        }
        best = best.max(v);
    }
    Ok(Estimate { value: best, stderr: 0.0, samples_used: samples })
}

fn radial_power(star: &StarSet, m: f64) -> Result<ScalarField> {
    if let StarKind::EquatorialBump { gamma } = star.kind() {
        ensure_integrable(gamma * m > -1.0, || format!("γ·m > −1 (γ = {gamma}, m = {m})"))?;
    }
    ScalarField::new(Domain::Sphere(star.dim()), FieldKind::StarPower { star: star.clone(), m })
}

/// `Ṽ_m(L) = b_n ∫ ρ_L^m d*θ`.
pub fn dual_quermass(star: &StarSet, m: f64, q: &Quadrature, exec: &dyn Executor) -> Result<Estimate> {
    let n = star.dim();
    ensure(n >= 2, "n ≥ 2")?;
    let f = radial_power(star, m)?;
    let spec = NormSpec { domain: Domain::Sphere(n), p: Exponent::one(), weight: Weight::None };
    Ok(weighted_power_integral(&f, &spec, q, exec)?.scale(ln_ball_volume(n as f64).exp()))
}

/// `V_n(L) = Ṽ_n(L)`.
pub fn star_volume(star: &StarSet, q: &Quadrature, exec: &dyn Executor) -> Result<Estimate> {
    dual_quermass(star, star.dim() as f64, q, exec)
}

/// `Ṽ_m(L ∩ τ₀) = b_k (F_k ρ_L^m)(τ₀)`.
pub fn section_dual_quermass(star: &StarSet, frame: &OrthonormalFrame, m: f64, q: &Quadrature) -> Result<Estimate> {
    ensure(frame.ambient_dim() == star.dim(), "a frame in the star set's space")?;
    let f = radial_power(star, m)?;
    Ok(funk_transform(&f, frame, q)?.scale(ln_ball_volume(frame.rank() as f64).exp()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fields::{ellipsoid_section_volume, make_extremizer, make_star_set};
    use crate::montecarlo::Sequential;
    use crate::special::{ball_volume, sphere_area};
    use core::f64::consts::PI;

    #[test]
    fn gaussian_l1_norm() {
        let g = ScalarField::new(Domain::Euclidean(3), FieldKind::Gaussian { center: None }).unwrap();
        let spec = NormSpec { domain: Domain::Euclidean(3), p: Exponent::one(), weight: Weight::None };
        let e = weighted_norm(&g, &spec, &Quadrature::monte_carlo(40_000, 1), &Sequential).unwrap();
        assert!((e.value - PI.powf(1.5)).abs() < 3.0 * e.stderr);
        let d = weighted_norm(&g, &spec, &Quadrature::tensor_tan(48), &Sequential).unwrap();
        assert!((d.value - PI.powf(1.5)).abs() < 1e-6);
    }

    #[test]
    fn plane_extremizer_norm() {
        // ‖f₀‖_p^p = σ_3/σ_1 = π at (n, j, k) = (3, 1, 2), p = 4/3.
        let f =
            ScalarField::new(Domain::AffineGrassmannian { n: 3, j: 1 }, FieldKind::PlaneExtremizer { k: 2, map: None }).unwrap();
        let spec = NormSpec { domain: f.domain, p: Exponent::new(4.0 / 3.0).unwrap(), weight: Weight::None };
        let e = weighted_power_integral(&f, &spec, &Quadrature::monte_carlo(20_000, 2), &Sequential).unwrap();
        assert!((e.value - PI).abs() < 3.0 * e.stderr + 1e-9);
        let d = weighted_power_integral(&f, &spec, &Quadrature::tensor_tan(32), &Sequential).unwrap();
        assert!((d.value - PI).abs() < 1e-6, "{}", d.value);
        let want = sphere_area(3) / sphere_area(1);
        assert!((want - PI).abs() < 1e-14);
    }

    #[test]
    fn constant_sphere_norm_is_one() {
        let one = ScalarField::new(Domain::Sphere(4), FieldKind::Constant { value: 1.0 }).unwrap();
        for p in [1.0, 2.5] {
            let spec = NormSpec { domain: Domain::Sphere(4), p: Exponent::new(p).unwrap(), weight: Weight::None };
            let e = weighted_norm(&one, &spec, &Quadrature::monte_carlo(100, 0), &Sequential).unwrap();
            assert!((e.value - 1.0).abs() < 1e-12);
        }
    }

    #[test]
    fn sup_norm_of_extremizer() {
        let f = make_extremizer(3, 1, None).unwrap();
        let spec = NormSpec { domain: Domain::Euclidean(3), p: Exponent::Infinite, weight: Weight::None };
        let e = weighted_norm(&f, &spec, &Quadrature::monte_carlo(100, 0), &Sequential).unwrap();
        assert_eq!(e.value, 1.0);
    }

    #[test]
    fn singular_radial_weight_precheck() {
        let g = ScalarField::new(Domain::Euclidean(2), FieldKind::Gaussian { center: None }).unwrap();
        let spec = NormSpec { domain: Domain::Euclidean(2), p: Exponent::one(), weight: Weight::Radial { nu: -2.5 } };
        let r = weighted_norm(&g, &spec, &Quadrature::monte_carlo(10, 0), &Sequential);
        assert!(matches!(r, Err(Error::NotIntegrable(_))));
        let e = make_extremizer(3, 1, None).unwrap();
        let spec = NormSpec { domain: Domain::Euclidean(3), p: Exponent::one(), weight: Weight::Radial { nu: 0.5 } };
        assert!(matches!(weighted_norm(&e, &spec, &Quadrature::monte_carlo(10, 0), &Sequential), Err(Error::NotIntegrable(_))));
    }

    #[test]
    fn singular_sphere_weight_against_beta_integral() {
        // ∫ |θ_n|^{−1/2} d*θ on S² = 2.
        let one = ScalarField::new(Domain::Sphere(3), FieldKind::Constant { value: 1.0 }).unwrap();
        let spec = NormSpec { domain: Domain::Sphere(3), p: Exponent::one(), weight: Weight::Pole { sin: 0.0, cos: -0.5 } };
        let e = weighted_norm(&one, &spec, &Quadrature::monte_carlo(50, 0), &Sequential).unwrap();
        assert!((e.value - 2.0).abs() < 1e-12);
        let bad = NormSpec { weight: Weight::Pole { sin: 0.0, cos: -1.0 }, ..spec };
        assert!(weighted_norm(&one, &bad, &Quadrature::monte_carlo(50, 0), &Sequential).is_err());
    }

    #[test]
    fn star_volumes() {
        let q = Quadrature::monte_carlo(4000, 1);
        let b = make_star_set(3, StarKind::Ball { radius: 1.0 }).unwrap();
        assert!((star_volume(&b, &q, &Sequential).unwrap().value - ball_volume(3)).abs() < 1e-12);
        let b2 = make_star_set(2, StarKind::Ball { radius: 2.0 }).unwrap();
        assert!((star_volume(&b2, &q, &Sequential).unwrap().value - 4.0 * PI).abs() < 1e-12);
        let e = make_star_set(3, StarKind::diagonal_ellipsoid(&[1.0, 1.0, 4.0])).unwrap();
        let v = star_volume(&e, &Quadrature::monte_carlo(40_000, 1), &Sequential).unwrap();
        assert!((v.value - ball_volume(3) / 2.0).abs() < 3.0 * v.stderr);
        let d = star_volume(&e, &Quadrature::tensor_tan(32), &Sequential).unwrap();
        assert!((d.value - ball_volume(3) / 2.0).abs() < 1e-8);
    }

    #[test]
    fn section_functionals() {
        let b = make_star_set(3, StarKind::Ball { radius: 1.5 }).unwrap();
        let fr = OrthonormalFrame::coordinate(3, &[0, 2]).unwrap();
        let q = Quadrature::monte_carlo(100, 0);
        let v = section_dual_quermass(&b, &fr, 3.0, &q).unwrap();
        assert!((v.value - PI * 1.5f64.powi(3)).abs() < 1e-12);
        let a = [1.0, 0.0, 0.0, 0.0, 2.0, 0.0, 0.0, 0.0, 4.0];
        let e = make_star_set(3, StarKind::Ellipsoid { matrix: a.to_vec() }).unwrap();
        let mut rng = Stream::new(4, "x").sample(0);
        let fr = grassmann::haar_subspace(3, 2, &mut rng).unwrap();
        let want = ellipsoid_section_volume(&a, &fr).unwrap();
        let got = section_dual_quermass(&e, &fr, 2.0, &Quadrature::tensor_tan(64)).unwrap();
        assert!((got.value - want).abs() < 1e-10);
    }

    #[test]
    fn bump_star_precheck() {
        let s = make_star_set(3, StarKind::EquatorialBump { gamma: 1.0 }).unwrap();
        assert!(dual_quermass(&s, -1.5, &Quadrature::monte_carlo(10, 0), &Sequential).is_err());
        // ∫ |θ_3|^2 d*θ = 1/3 on S².
        let v = dual_quermass(&s, 2.0, &Quadrature::monte_carlo(10, 0), &Sequential).unwrap();
        assert!((v.value - ball_volume(3) / 3.0).abs() < 1e-12);
    }
}
