//! Numerical k-plane, (j,k)-plane and Funk-type transforms, and the
//! conjugation formulas linking them through the stereographic lift.

use alloc::vec;
#[allow(unused_imports)]
use num_traits::Float;

use crate::error::{ensure, Error, Result};
use crate::fields::ScalarField;
use crate::grassmann::{self, AffinePlane, OrthonormalFrame, RadialProposal};
use crate::linalg::norm2;
use crate::montecarlo::{mean_estimate, Estimate, Sequential};
use crate::quadrature::{EuclidRule, Radial, SphereRule, SubspaceRule};
use crate::rng::Stream;
use crate::special::ln_sphere_area;

#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
#[cfg_attr(feature = "serde", serde(tag = "mode", rename_all = "snake_case", deny_unknown_fields))]
pub enum QuadratureMode {
    MonteCarlo {
        samples: u64,
    },
    /// Deterministic product rules: polar Gauss–Legendre after `r = tan t`
    /// on unbounded planes, on `[0, R]` for compact charts, and fixed
    /// sphere or Grassmannian rules for the angular parts.
    TensorTan {
        order: usize,
    },
}

#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct Quadrature {
    pub mode: QuadratureMode,
    pub seed: u64,
}

impl Quadrature {
    pub fn monte_carlo(samples: u64, seed: u64) -> Self {
        Quadrature { mode: QuadratureMode::MonteCarlo { samples }, seed }
    }

    pub fn tensor_tan(order: usize) -> Self {
        Quadrature { mode: QuadratureMode::TensorTan { order }, seed: 0 }
    }

    pub fn validate(&self) -> Result<()> {
        match self.mode {
            QuadratureMode::MonteCarlo { samples } => ensure(samples >= 1, "samples ≥ 1"),
            QuadratureMode::TensorTan { order } => ensure(order >= 2, "order ≥ 2"),
        }
    }

    fn stream(&self, label: &str) -> Stream {
        Stream::new(self.seed, label)
    }
}

fn finite_sum(weights: &[f64], mut g: impl FnMut(usize) -> f64) -> Result<Estimate> {
    let mut acc = 0.0;
    for (i, w) in weights.iter().enumerate() {
        let v = g(i);
        if !v.is_finite() {
            return Err(Error::NonFinite);
        }
        acc += w * v;
    }
    Ok(Estimate { value: acc, stderr: 0.0, samples_used: weights.len() as u64 })
}

/// Offset-proposal exponent for integrating a field over `dim` free
/// coordinates: match a finite declared tail, otherwise `dim + 1`.
fn tail_alpha(field: &ScalarField, dim: usize) -> f64 {
    match field.metadata().decay_exponent {
        Some(d) if d.is_finite() && d > dim as f64 => d,
        _ => dim as f64 + 1.0,
    }
}

fn precheck_integrable(field: &ScalarField, dim: usize) -> Result<()> {
    let m = field.metadata();
    if m.support_radius.is_some() {
        return Ok(());
    }
    match m.decay_exponent {
        Some(d) if d <= dim as f64 => {
            Err(Error::NotIntegrable(alloc::format!("decay exponent {d} does not exceed the plane dimension {dim}")))
        }
        _ => Ok(()),
    }
}

fn check_plane(field: &ScalarField, tau: &AffinePlane) -> Result<()> {
    ensure(tau.ambient_dim() == field.domain.ambient_dim(), "a plane in the field's ambient space")?;
    ensure(tau.dim() < tau.ambient_dim(), "k < n")
}

/// `∫_τ f` for a field on ℝⁿ (or on 0-planes).
pub fn kplane_transform(f: &ScalarField, tau: &AffinePlane, q: &Quadrature) -> Result<Estimate> {
    q.validate()?;
    check_plane(f, tau)?;
    let (n, k) = (tau.ambient_dim(), tau.dim());
    precheck_integrable(f, k)?;
    if k == 0 {
        let v = f.eval_point(&tau.offset);
        return if v.is_finite() { Ok(Estimate { value: v, stderr: 0.0, samples_used: 1 }) } else { Err(Error::NonFinite) };
    }
    let chart = f.plane_chart(tau);
    let mut x = vec![0.0; n];
    match q.mode {
        QuadratureMode::TensorTan { order } => match chart {
            Some((c, r)) => {
                if r <= 0.0 {
                    return Ok(Estimate { value: 0.0, stderr: 0.0, samples_used: 0 });
                }
                let rule = EuclidRule::new(k, order, Radial::Interval(r))?;
                let mut s = vec![0.0; k];
                finite_sum(&rule.weights, |i| {
                    for (si, (pi, ci)) in s.iter_mut().zip(rule.point(i).iter().zip(&c)) {
                        *si = pi + ci;
                    }
                    tau.point(&s, &mut x);
                    f.eval_point(&x)
                })
            }
            None => {
                // Polar about the foot of the perpendicular from the origin.
                let rule = EuclidRule::new(k, order, Radial::Tan)?;
                finite_sum(&rule.weights, |i| {
                    tau.point(rule.point(i), &mut x);
                    f.eval_point(&x)
                })
            }
        },
        QuadratureMode::MonteCarlo { samples } => {
            let stream = q.stream("kplane");
            match chart {
                Some((c, r)) => {
                    if r <= 0.0 {
                        return Ok(Estimate { value: 0.0, stderr: 0.0, samples_used: samples });
                    }
                    let vol = (crate::special::ln_ball_volume(k as f64)).exp() * r.powi(k as i32);
                    mean_estimate(&Sequential, samples, |i| {
                        let mut rng = stream.sample(i);
                        let mut s = vec![0.0; k];
                        rng.unit_vector(&mut s);
                        let rad = r * rng.uniform().powf(1.0 / k as f64);
                        for (si, ci) in s.iter_mut().zip(&c) {
                            *si = *si * rad + ci;
                        }
                        let mut x = vec![0.0; n];
                        tau.point(&s, &mut x);
                        vol * f.eval_point(&x)
                    })
                }
                None => {
                    let prop = RadialProposal::new(k, tail_alpha(f, k), 0.0)?;
                    mean_estimate(&Sequential, samples, |i| {
                        let mut rng = stream.sample(i);
                        let mut s = vec![0.0; k];
                        let w = prop.sample(&mut rng, &mut s);
                        let mut x = vec![0.0; n];
                        tau.point(&s, &mut x);
                        w * f.eval_point(&x)
                    })
                }
            }
        }
    }
}

/// `∫_{G_j(τ)} ∫ f(η + u + w) dw dη` for a field on `A_{n,j}`; `j = 0`
/// is the k-plane transform on the same stream.
pub fn jk_transform(f: &ScalarField, tau: &AffinePlane, q: &Quadrature) -> Result<Estimate> {
    q.validate()?;
    check_plane(f, tau)?;
    let j = match f.domain {
        crate::fields::Domain::AffineGrassmannian { j, .. } => j,
        crate::fields::Domain::Euclidean(_) => 0,
        _ => return Err(Error::Invalid("a field on A_{n,j}".into())),
    };
    let (n, k) = (tau.ambient_dim(), tau.dim());
    ensure(j < k, "j < k")?;
    if j == 0 {
        return kplane_transform(f, tau, q);
    }
    let free = k - j;
    precheck_integrable(f, free)?;
    match q.mode {
        QuadratureMode::TensorTan { order } => {
            let rule = SubspaceRule::new(k, j, order)?;
            let polar = EuclidRule::new(free, order, Radial::Tan)?;
            let mut acc = 0.0;
            let mut used = 0;
            for node in 0..rule.len() {
                let b = rule.basis(node);
                let mut cols = vec![0.0; n * k];
                for c in 0..k {
                    tau.direction.combine(&b[c * k..(c + 1) * k], &mut cols[c * n..(c + 1) * n]);
                }
                let direction = OrthonormalFrame::from_columns(n, j, cols[..n * j].to_vec())?;
                let comp = &cols[n * j..];
                let mut zeta = AffinePlane { direction, offset: tau.offset.clone() };
                let inner = finite_sum(&polar.weights, |p| {
                    zeta.offset.copy_from_slice(&tau.offset);
                    for (i, wi) in polar.point(p).iter().enumerate() {
                        crate::linalg::axpy(*wi, &comp[i * n..(i + 1) * n], &mut zeta.offset);
                    }
                    f.eval_plane(&zeta)
                })?;
                acc += rule.weights[node] * inner.value;
                used += inner.samples_used;
            }
            Ok(Estimate { value: acc, stderr: 0.0, samples_used: used })
        }
        QuadratureMode::MonteCarlo { samples } => {
            let stream = q.stream("kplane");
            let prop = RadialProposal::new(free, tail_alpha(f, free), 0.0)?;
            mean_estimate(&Sequential, samples, |i| {
                let mut rng = stream.sample(i);
                match grassmann::sample_subplane_with(tau, j, &prop, &mut rng) {
                    Ok(s) => s.importance_weight * f.eval_plane(&s.plane),
                    Err(_) => f64::NAN,
                }
            })
        }
    }
}

/// `F_kφ(τ₀)` by a fixed sphere rule on `S ∩ span(τ₀)`.
pub fn funk_with_rule(phi: &ScalarField, frame: &OrthonormalFrame, rule: &SphereRule) -> f64 {
    let mut x = vec![0.0; frame.ambient_dim()];
    let mut acc = 0.0;
    for i in 0..rule.len() {
        frame.combine(rule.point(i), &mut x);
        acc += rule.weights[i] * phi.eval_direction(&x);
    }
    acc
}

/// Mean of `φ` over the unit sphere of `span(τ₀)`.
pub fn funk_transform(phi: &ScalarField, frame: &OrthonormalFrame, q: &Quadrature) -> Result<Estimate> {
    q.validate()?;
    ensure(frame.rank() >= 1, "k ≥ 1")?;
    ensure(frame.ambient_dim() == phi.domain.ambient_dim(), "a frame in the field's ambient space")?;
    match q.mode {
        QuadratureMode::TensorTan { order } => {
            let rule = SphereRule::new(frame.rank(), order)?;
            let v = funk_with_rule(phi, frame, &rule);
            if v.is_finite() {
                Ok(Estimate { value: v, stderr: 0.0, samples_used: rule.len() as u64 })
            } else {
                Err(Error::NonFinite)
            }
        }
        QuadratureMode::MonteCarlo { samples } => {
            let stream = q.stream("funk");
            mean_estimate(&Sequential, samples, |i| {
                let mut rng = stream.sample(i);
                phi.eval_direction(&grassmann::sample_subsphere(frame, &mut rng))
            })
        }
    }
}

fn embed(frame: &OrthonormalFrame, local: &[f64], j: usize) -> Result<OrthonormalFrame> {
    let (n, k) = (frame.ambient_dim(), frame.rank());
    let mut cols = vec![0.0; n * j];
    for c in 0..j {
        frame.combine(&local[c * k..(c + 1) * k], &mut cols[c * n..(c + 1) * n]);
    }
    OrthonormalFrame::from_columns(n, j, cols)
}

/// `F_{j,k}g(τ₀)` by a fixed rule on `G_j(ℝ^k)`, mapped into `span(τ₀)`.
pub fn funk_jk_with_rule(g: &ScalarField, frame: &OrthonormalFrame, rule: &SubspaceRule) -> Result<f64> {
    ensure(rule.k == frame.rank(), "a rule on G_j(ℝ^k) with k = rank τ₀")?;
    let mut acc = 0.0;
    for node in 0..rule.len() {
        let sub = embed(frame, rule.basis(node), rule.j)?;
        let v = g.eval_subspace(&sub);
        if !v.is_finite() {
            return Err(Error::NonFinite);
        }
        acc += rule.weights[node] * v;
    }
    Ok(acc)
}

/// Mean of `g` over Haar j-subspaces of `span(τ₀)` for `g` on `G_{n,j}`.
pub fn funk_jk_transform(g: &ScalarField, frame: &OrthonormalFrame, q: &Quadrature) -> Result<Estimate> {
    q.validate()?;
    let j = match g.domain {
        crate::fields::Domain::Grassmannian { k, .. } => k,
        crate::fields::Domain::Sphere(_) => 1,
        _ => return Err(Error::Invalid("a field on G_{n,j}".into())),
    };
    let k = frame.rank();
    ensure(1 <= j && j < k, "1 ≤ j < k")?;
    ensure(frame.ambient_dim() == g.domain.ambient_dim(), "a frame in the field's ambient space")?;
    match q.mode {
        QuadratureMode::TensorTan { order } => {
            let rule = SubspaceRule::new(k, j, order)?;
            let v = funk_jk_with_rule(g, frame, &rule)?;
            Ok(Estimate { value: v, stderr: 0.0, samples_used: rule.len() as u64 })
        }
        QuadratureMode::MonteCarlo { samples } => {
            let stream = q.stream("funk-jk");
            mean_estimate(&Sequential, samples, |i| {
                let mut rng = stream.sample(i);
                match grassmann::haar_subspace(k, j, &mut rng).and_then(|l| embed(frame, l.columns(), j)) {
                    Ok(sub) => g.eval_subspace(&sub),
                    Err(_) => f64::NAN,
                }
            })
        }
    }
}

/// `σ_k/σ_j`.
pub fn conjugation_constant(j: usize, k: usize) -> f64 {
    (ln_sphere_area(k as f64) - ln_sphere_area(j as f64)).exp()
}

/// `ρ₂(τ) = (1+|τ|²)^{−(j+1)/2}`.
pub fn rho2(j: usize, tau: &AffinePlane) -> f64 {
    (1.0 + norm2(&tau.offset)).powf(-0.5 * (j as f64 + 1.0))
}

/// `a ρ₂(τ) (F_{j+1,k+1} g)(lift τ)` for `g` on `G_{n+1,j+1}`; this equals
/// `R_{j,k} f (τ)` when `g = Λ_j ρ₁^{−1} f`.
pub fn radon_from_funk(g: &ScalarField, tau: &AffinePlane, q: &Quadrature) -> Result<Estimate> {
    let j1 = match g.domain {
        crate::fields::Domain::Grassmannian { k, .. } => k,
        _ => return Err(Error::Invalid("a field on G_{n+1,j+1}".into())),
    };
    ensure(g.domain.ambient_dim() == tau.ambient_dim() + 1, "a field on G_{n+1,j+1}")?;
    let (j, k) = (j1 - 1, tau.dim());
    ensure(j < k, "j < k")?;
    let lifted = grassmann::lift(tau);
    let e = funk_jk_transform(g, &lifted, q)?;
    Ok(e.scale(conjugation_constant(j, k) * rho2(j, tau)))
}

/// `a^{−1} ρ₂(τ)^{−1} (R_{j,k} f)(τ)` with `τ` the unlift of `τ₀`; this
/// equals `F_{j+1,k+1} g (τ₀)` when `f = ρ₁ Λ_j^{−1} g`.
pub fn funk_from_radon(f: &ScalarField, frame: &OrthonormalFrame, q: &Quadrature) -> Result<Estimate> {
    let j = match f.domain {
        crate::fields::Domain::AffineGrassmannian { j, .. } => j,
        crate::fields::Domain::Euclidean(_) => 0,
        _ => return Err(Error::Invalid("a field on A_{n,j}".into())),
    };
    ensure(frame.ambient_dim() == f.domain.ambient_dim() + 1, "a frame in ℝ^{n+1}")?;
    let tau = grassmann::unlift(frame)?;
    let k = tau.dim();
    ensure(j < k, "j < k")?;
    let e = jk_transform(f, &tau, q)?;
    Ok(e.scale(1.0 / (conjugation_constant(j, k) * rho2(j, &tau))))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fields::{make_extremizer, make_star_set, oracle_jk_extremizer, oracle_kplane, Domain, FieldKind, StarKind};
    use core::f64::consts::PI;

    fn gaussian(n: usize) -> ScalarField {
        ScalarField::new(Domain::Euclidean(n), FieldKind::Gaussian { center: None }).unwrap()
    }

    fn random_plane(n: usize, k: usize, seed: u64) -> AffinePlane {
        let mut rng = Stream::new(seed, "plane").sample(0);
        grassmann::sample_affine_plane(n, k, n as f64 + 2.0, &mut rng).unwrap().plane
    }

    #[test]
    fn gaussian_line_integrals() {
        let g = gaussian(3);
        for s in 0..5 {
            let tau = random_plane(3, 1, s);
            let e = kplane_transform(&g, &tau, &Quadrature::tensor_tan(64)).unwrap();
            let want = PI.sqrt() * (-norm2(&tau.offset)).exp();
            assert!((e.value - want).abs() < 1e-4, "{} vs {}", e.value, want);
        }
    }

    #[test]
    fn ball_section_by_chart() {
        let b = make_star_set(3, StarKind::Ball { radius: 1.0 }).unwrap();
        let chi = ScalarField::new(Domain::Euclidean(3), FieldKind::Indicator { body: b }).unwrap();
        let tau = AffinePlane { direction: OrthonormalFrame::coordinate(3, &[0, 1]).unwrap(), offset: vec![0.0; 3] };
        let e = kplane_transform(&chi, &tau, &Quadrature::tensor_tan(16)).unwrap();
        assert!((e.value - PI).abs() < 1e-12);
        let m = kplane_transform(&chi, &tau, &Quadrature::monte_carlo(1, 0)).unwrap();
        assert!((m.value - PI).abs() < 1e-12);
    }

    #[test]
    fn zero_field_is_exactly_zero() {
        let z = ScalarField::new(Domain::Euclidean(3), FieldKind::Gaussian { center: Some(vec![1e3, 0.0, 0.0]) }).unwrap();
        let tau = random_plane(3, 2, 1);
        let e = kplane_transform(&z, &tau, &Quadrature::monte_carlo(100, 1)).unwrap();
        assert_eq!(e.value, 0.0);
    }

    #[test]
    fn extremizer_mc_within_three_sigma() {
        let f = make_extremizer(3, 2, None).unwrap();
        for s in 0..3 {
            let tau = random_plane(3, 2, 10 + s);
            let e = kplane_transform(&f, &tau, &Quadrature::monte_carlo(20_000, s)).unwrap();
            let want = oracle_kplane(&f, &tau).unwrap();
            // Proposal matches the tail, so the weight is nearly constant.
            assert!((e.value - want).abs() <= 3.0 * e.stderr + 1e-9 * want);
        }
    }

    #[test]
    fn non_integrable_is_rejected() {
        let f = make_extremizer(3, 1, None).unwrap();
        let tau = random_plane(3, 2, 0);
        assert!(matches!(kplane_transform(&f, &tau, &Quadrature::tensor_tan(8)), Err(Error::NotIntegrable(_))));
    }

    #[test]
    fn jk_gaussian_n4() {
        let pg = ScalarField::new(Domain::AffineGrassmannian { n: 4, j: 1 }, FieldKind::PlaneGaussian { center: None }).unwrap();
        let tau = random_plane(4, 2, 3);
        let want = PI.sqrt() * (-norm2(&tau.offset)).exp();
        let d = jk_transform(&pg, &tau, &Quadrature::tensor_tan(64)).unwrap();
        assert!((d.value - want).abs() < 1e-6, "{} vs {want}", d.value);
        let m = jk_transform(&pg, &tau, &Quadrature::monte_carlo(20_000, 2)).unwrap();
        assert!((m.value - want).abs() < 3.0 * m.stderr);
    }

    #[test]
    fn jk_j0_shares_stream_with_kplane() {
        let g = gaussian(3);
        let tau = random_plane(3, 2, 4);
        let q = Quadrature::monte_carlo(2000, 9);
        assert_eq!(jk_transform(&g, &tau, &q).unwrap(), kplane_transform(&g, &tau, &q).unwrap());
    }

    #[test]
    fn jk_extremizer_matches_oracle() {
        let pe =
            ScalarField::new(Domain::AffineGrassmannian { n: 3, j: 1 }, FieldKind::PlaneExtremizer { k: 2, map: None }).unwrap();
        for s in 0..3 {
            let tau = random_plane(3, 2, 20 + s);
            let want = oracle_jk_extremizer(3, 1, 2, &tau).unwrap();
            let d = jk_transform(&pe, &tau, &Quadrature::tensor_tan(48)).unwrap();
            assert!((d.value - want).abs() < 1e-4 * want, "{} vs {want}", d.value);
        }
    }

    #[test]
    fn funk_examples() {
        let one = ScalarField::new(Domain::Sphere(4), FieldKind::Constant { value: 1.0 }).unwrap();
        let sq = ScalarField::new(Domain::Sphere(4), FieldKind::Coordinate { axis: 3, power: 2 }).unwrap();
        let odd = ScalarField::new(Domain::Sphere(4), FieldKind::Coordinate { axis: 3, power: 1 }).unwrap();
        let mut rng = Stream::new(1, "f").sample(0);
        let fr = grassmann::haar_subspace(4, 3, &mut rng).unwrap();
        let q = Quadrature::monte_carlo(20_000, 3);
        assert!((funk_transform(&one, &fr, &q).unwrap().value - 1.0).abs() < 1e-14);
        let want = grassmann::pole_cos(&fr).powi(2) / 3.0;
        assert!((funk_transform(&sq, &fr, &Quadrature::tensor_tan(8)).unwrap().value - want).abs() < 1e-12);
        let e = funk_transform(&sq, &fr, &q).unwrap();
        assert!((e.value - want).abs() < 3.0 * e.stderr);
        let o = funk_transform(&odd, &fr, &q).unwrap();
        assert!(o.value.abs() < 3.0 * o.stderr);
    }

    #[test]
    fn funk_tower_property() {
        let sq = ScalarField::new(Domain::Sphere(4), FieldKind::Coordinate { axis: 3, power: 4 }).unwrap();
        let inner = ScalarField::new(
            Domain::Grassmannian { n: 4, k: 2 },
            FieldKind::FunkOf { inner: alloc::boxed::Box::new(sq.clone()), order: 8 },
        )
        .unwrap();
        let mut rng = Stream::new(2, "f").sample(0);
        let fr = grassmann::haar_subspace(4, 3, &mut rng).unwrap();
        let lhs = funk_jk_transform(&inner, &fr, &Quadrature::tensor_tan(12)).unwrap();
        let rhs = funk_transform(&sq, &fr, &Quadrature::tensor_tan(12)).unwrap();
        assert!((lhs.value - rhs.value).abs() < 1e-10);
    }

    #[test]
    fn funk_jk_distance_law() {
        // j = k − 1 = 1 in ℝ³ within a 2-frame: cos² d ~ Beta(1/2, 1/2) scaled by |P e_n|².
        let g = ScalarField::new(Domain::Grassmannian { n: 3, k: 1 }, FieldKind::PoleCosPower { power: 2.0 }).unwrap();
        let mut rng = Stream::new(5, "f").sample(0);
        let fr = grassmann::haar_subspace(3, 2, &mut rng).unwrap();
        let c2 = grassmann::pole_cos(&fr).powi(2);
        let e = funk_jk_transform(&g, &fr, &Quadrature::monte_carlo(20_000, 1)).unwrap();
        assert!((e.value - 0.5 * c2).abs() < 3.0 * e.stderr);
    }

    #[test]
    fn radon_from_funk_on_extremizer() {
        let n = 3;
        for (j, k) in [(0, 1), (1, 2)] {
            let one =
                ScalarField::new(Domain::Grassmannian { n: n + 1, k: j + 1 }, FieldKind::PoleCosPower { power: 0.0 }).unwrap();
            let tau = random_plane(n, k, 7);
            let e = radon_from_funk(&one, &tau, &Quadrature::monte_carlo(10, 0)).unwrap();
            let want = oracle_jk_extremizer(n, j, k, &tau).unwrap();
            assert!((e.value - want).abs() < 1e-12 * want);
        }
    }

    #[test]
    fn funk_from_radon_of_lowered_constant() {
        let one = ScalarField::new(Domain::Grassmannian { n: 4, k: 2 }, FieldKind::PoleCosPower { power: 0.0 }).unwrap();
        let low = ScalarField::new(
            Domain::AffineGrassmannian { n: 3, j: 1 },
            FieldKind::Lowered { base: alloc::boxed::Box::new(one), k: 2 },
        )
        .unwrap();
        let mut rng = Stream::new(8, "f").sample(0);
        let fr = grassmann::haar_subspace(4, 3, &mut rng).unwrap();
        let e = funk_from_radon(&low, &fr, &Quadrature::monte_carlo(20_000, 4)).unwrap();
        assert!((e.value - 1.0).abs() < 3.0 * e.stderr + 1e-9);
    }
}
