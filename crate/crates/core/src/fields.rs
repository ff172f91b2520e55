//! Test functions on ℝⁿ, on affine and linear Grassmannians and on the
//! sphere, star sets, and the closed-form transforms used as oracles.

use alloc::boxed::Box;
use alloc::format;
use alloc::vec;
use alloc::vec::Vec;
use core::f64::consts::PI;
#[allow(unused_imports)]
use num_traits::Float;

use crate::error::{ensure, Error, Result};
use crate::grassmann::{self, apply_affine, plane_distance, AffineMap, AffinePlane, OrthonormalFrame};
use crate::linalg::{self, dot, norm, norm2};
use crate::quadrature::SphereRule;
use crate::rng::Stream;
use crate::special::{ball_volume, ln_ball_volume, ln_gamma, ln_sphere_area};

/// Where a field lives. `Sphere(n)` is the unit sphere of ℝⁿ and
/// `AffineGrassmannian { n, j: 0 }` is ℝⁿ viewed as 0-planes.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
#[cfg_attr(feature = "serde", serde(rename_all = "snake_case"))]
pub enum Domain {
    Euclidean(usize),
    AffineGrassmannian { n: usize, j: usize },
    Sphere(usize),
    Grassmannian { n: usize, k: usize },
}

impl Domain {
    pub fn ambient_dim(&self) -> usize {
        match *self {
            Domain::Euclidean(n) | Domain::Sphere(n) => n,
            Domain::AffineGrassmannian { n, .. } | Domain::Grassmannian { n, .. } => n,
        }
    }
}

/// Star-set descriptor.
#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
#[cfg_attr(feature = "serde", serde(tag = "type", rename_all = "snake_case", deny_unknown_fields))]
pub enum StarKind {
    Ball {
        radius: f64,
    },
    /// The body `{x : xᵀAx ≤ 1}`; `matrix` is row-major.
    Ellipsoid {
        matrix: Vec<f64>,
    },
    /// `ρ(θ) = |θ_n|^γ`.
    EquatorialBump {
        gamma: f64,
    },
    /// `ρ(θ) = exp(Σ aᵢ⟨θ, vᵢ⟩)` with seeded `aᵢ`, `vᵢ`.
    RandomSmooth {
        seed: u64,
        #[cfg_attr(feature = "serde", serde(default = "default_terms"))]
        terms: usize,
        #[cfg_attr(feature = "serde", serde(default = "default_amplitude"))]
        amplitude: f64,
    },
}

#[cfg(feature = "serde")]
fn default_terms() -> usize {
    3
}

#[cfg(feature = "serde")]
fn default_amplitude() -> f64 {
    0.5
}

impl StarKind {
    pub fn random_smooth(seed: u64) -> Self {
        StarKind::RandomSmooth { seed, terms: 3, amplitude: 0.5 }
    }

    pub fn diagonal_ellipsoid(diag: &[f64]) -> Self {
        let n = diag.len();
        let mut matrix = vec![0.0; n * n];
        for (i, d) in diag.iter().enumerate() {
            matrix[i * n + i] = *d;
        }
        StarKind::Ellipsoid { matrix }
    }
}

#[derive(Debug, Clone, PartialEq)]
enum StarCache {
    None,
    Ellipsoid { det: f64, min_eig: f64 },
    Smooth { coeffs: Vec<f64>, dirs: Vec<f64>, bound: f64 },
}

/// A star set given by its radial function.
#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
#[cfg_attr(feature = "serde", serde(try_from = "StarSpec", into = "StarSpec"))]
pub struct StarSet {
    dim: usize,
    kind: StarKind,
    cache: StarCache,
}

/// Serialized form of a [`StarSet`].
#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
#[cfg_attr(feature = "serde", serde(deny_unknown_fields))]
pub struct StarSpec {
    pub dim: usize,
    pub kind: StarKind,
}

impl TryFrom<StarSpec> for StarSet {
    type Error = Error;
    fn try_from(s: StarSpec) -> Result<Self> {
        make_star_set(s.dim, s.kind)
    }
}

impl From<StarSet> for StarSpec {
    fn from(s: StarSet) -> Self {
        StarSpec { dim: s.dim, kind: s.kind }
    }
}

/// Builds a star set, validating its parameters.
pub fn make_star_set(dim: usize, kind: StarKind) -> Result<StarSet> {
    ensure(dim >= 1, "dimension ≥ 1")?;
    let cache = match &kind {
        StarKind::Ball { radius } => {
            ensure(*radius > 0.0 && radius.is_finite(), "ball radius > 0")?;
            StarCache::None
        }
        StarKind::Ellipsoid { matrix } => {
            ensure(matrix.len() == dim * dim, "an n×n ellipsoid matrix")?;
            if !linalg::is_spd(dim, matrix) {
                return Err(Error::NotPositiveDefinite);
            }
            let (det, _) = linalg::spd_det_inverse(dim, matrix)?;
            let m = nalgebra::DMatrix::from_row_slice(dim, dim, matrix);
            let min_eig = m.symmetric_eigenvalues().iter().cloned().fold(f64::INFINITY, f64::min);
            StarCache::Ellipsoid { det, min_eig }
        }
        StarKind::EquatorialBump { gamma } => {
            ensure(*gamma > 0.0 && gamma.is_finite(), "γ > 0")?;
            StarCache::None
        }
        StarKind::RandomSmooth { seed, terms, amplitude } => {
            ensure(*terms >= 1, "at least one term")?;
            ensure(amplitude.is_finite() && *amplitude >= 0.0, "amplitude ≥ 0")?;
            let mut rng = Stream::new(*seed, "random-smooth-star").sample(0);
            let mut dirs = vec![0.0; dim * terms];
            let mut coeffs = vec![0.0; *terms];
            let scale = amplitude / (*terms as f64).sqrt();
            for t in 0..*terms {
                rng.unit_vector(&mut dirs[t * dim..(t + 1) * dim]);
                coeffs[t] = scale * rng.normal();
            }
            let bound = coeffs.iter().map(|a| a.abs()).sum::<f64>().exp();
            StarCache::Smooth { coeffs, dirs, bound }
        }
    };
    Ok(StarSet { dim, kind, cache })
}

impl StarSet {
    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn kind(&self) -> &StarKind {
        &self.kind
    }

    /// `ρ_L(θ)` for a unit vector `θ`.
    pub fn radial(&self, theta: &[f64]) -> f64 {
        match (&self.kind, &self.cache) {
            (StarKind::Ball { radius }, _) => *radius,
            (StarKind::Ellipsoid { matrix }, _) => {
                let n = self.dim;
                let mut q = 0.0;
                for i in 0..n {
                    q += theta[i] * dot(&matrix[i * n..(i + 1) * n], theta);
                }
                1.0 / q.sqrt()
            }
            (StarKind::EquatorialBump { gamma }, _) => theta[self.dim - 1].abs().powf(*gamma),
            (StarKind::RandomSmooth { .. }, StarCache::Smooth { coeffs, dirs, .. }) => {
                let n = self.dim;
                let s: f64 = coeffs.iter().enumerate().map(|(t, a)| a * dot(&dirs[t * n..(t + 1) * n], theta)).sum();
                s.exp()
            }
            _ => unreachable!("star cache matches its kind"),
        }
    }

    pub fn contains(&self, x: &[f64]) -> bool {
        match &self.kind {
            StarKind::Ball { radius } => norm2(x) <= radius * radius,
            StarKind::Ellipsoid { matrix } => {
                let n = self.dim;
                let q: f64 = (0..n).map(|i| x[i] * dot(&matrix[i * n..(i + 1) * n], x)).sum();
                q <= 1.0
            }
            _ => {
                let r = norm(x);
                if r == 0.0 {
                    return true;
                }
                let th: Vec<f64> = x.iter().map(|v| v / r).collect();
                r <= self.radial(&th)
            }
        }
    }

    /// A radius `R` with `L ⊂ B(0, R)`.
    pub fn bounding_radius(&self) -> f64 {
        match (&self.kind, &self.cache) {
            (StarKind::Ball { radius }, _) => *radius,
            (StarKind::Ellipsoid { .. }, StarCache::Ellipsoid { min_eig, .. }) => 1.0 / min_eig.sqrt(),
            (StarKind::EquatorialBump { .. }, _) => 1.0,
            (_, StarCache::Smooth { bound, .. }) => *bound,
            _ => unreachable!("star cache matches its kind"),
        }
    }

    /// Closed-form volume for balls and ellipsoids.
    pub fn exact_volume(&self) -> Option<f64> {
        match (&self.kind, &self.cache) {
            (StarKind::Ball { radius }, _) => Some(ball_volume(self.dim) * radius.powi(self.dim as i32)),
            (StarKind::Ellipsoid { .. }, StarCache::Ellipsoid { det, .. }) => Some(ball_volume(self.dim) / det.sqrt()),
            _ => None,
        }
    }

    /// `L` scaled by `λ > 0`.
    pub fn scaled(&self, lambda: f64) -> Result<StarSet> {
        ensure(lambda > 0.0, "λ > 0")?;
        match &self.kind {
            StarKind::Ball { radius } => make_star_set(self.dim, StarKind::Ball { radius: radius * lambda }),
            StarKind::Ellipsoid { matrix } => {
                make_star_set(self.dim, StarKind::Ellipsoid { matrix: matrix.iter().map(|a| a / (lambda * lambda)).collect() })
            }
            _ => Err(Error::Unsupported("scaling of this star kind".into())),
        }
    }

    /// Exact `V_k(L ∩ τ)` for balls and ellipsoids, any affine plane.
    pub fn affine_section_volume(&self, tau: &AffinePlane) -> Result<f64> {
        let k = tau.dim();
        match &self.kind {
            StarKind::Ball { radius } => {
                let h = radius * radius - norm2(&tau.offset);
                Ok(if h <= 0.0 { 0.0 } else { ball_volume(k) * h.powf(0.5 * k as f64) })
            }
            StarKind::Ellipsoid { matrix } => {
                let n = self.dim;
                let u = &tau.offset;
                let mut au = vec![0.0; n];
                linalg::matvec(n, n, matrix, u, &mut au);
                let c = dot(u, &au);
                if k == 0 {
                    return Ok(if c <= 1.0 { 1.0 } else { 0.0 });
                }
                let mut b = vec![0.0; k];
                let mut bm = vec![0.0; k * k];
                let mut tmp = vec![0.0; n];
                for i in 0..k {
                    b[i] = dot(tau.direction.col(i), &au);
                    linalg::matvec(n, n, matrix, tau.direction.col(i), &mut tmp);
                    for jj in 0..k {
                        bm[jj * k + i] = dot(tau.direction.col(jj), &tmp);
                    }
                }
                let (det, inv) = linalg::spd_det_inverse(k, &bm)?;
                let mut binv_b = vec![0.0; k];
                linalg::matvec(k, k, &inv, &b, &mut binv_b);
                let h = 1.0 - c + dot(&b, &binv_b);
                Ok(if h <= 0.0 { 0.0 } else { ball_volume(k) * h.powf(0.5 * k as f64) / det.sqrt() })
            }
            _ => Err(Error::MissingClosedForm("affine sections of this star kind")),
        }
    }
}

/// `b_k / √det(QᵀAQ)`, the volume of a central section of an ellipsoid.
pub fn ellipsoid_section_volume(matrix: &[f64], frame: &OrthonormalFrame) -> Result<f64> {
    let (n, k) = (frame.ambient_dim(), frame.rank());
    ensure(matrix.len() == n * n, "an n×n ellipsoid matrix")?;
    let mut bm = vec![0.0; k * k];
    let mut tmp = vec![0.0; n];
    for i in 0..k {
        linalg::matvec(n, n, matrix, frame.col(i), &mut tmp);
        for jj in 0..k {
            bm[jj * k + i] = dot(frame.col(jj), &tmp);
        }
    }
    let (det, _) = linalg::spd_det_inverse(k, &bm)?;
    Ok(ball_volume(k) / det.sqrt())
}

/// The concrete function carried by a [`ScalarField`].
#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
#[cfg_attr(feature = "serde", serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields))]
pub enum FieldKind {
    /// `e^{−|x−c|²}` on ℝⁿ.
    Gaussian {
        #[cfg_attr(feature = "serde", serde(default))]
        center: Option<Vec<f64>>,
    },
    /// `(1+|Mx|²)^{−(k+1)/2}` on ℝⁿ.
    Extremizer {
        k: usize,
        #[cfg_attr(feature = "serde", serde(default))]
        map: Option<AffineMap>,
    },
    /// Indicator of a star set.
    Indicator { body: StarSet },
    /// `exp(−|x|²/ρ_L(x/|x|)²)`.
    StarGaussian { star: StarSet },
    /// `e^{−dist(c, ζ)²}` on `A_{n,j}`.
    PlaneGaussian {
        #[cfg_attr(feature = "serde", serde(default))]
        center: Option<Vec<f64>>,
    },
    /// `(1+|Mζ|²)^{−(k+1)/2}` on `A_{n,j}`, with `|Mζ|` the distance from
    /// the origin to the image plane.
    PlaneExtremizer {
        k: usize,
        #[cfg_attr(feature = "serde", serde(default))]
        map: Option<AffineMap>,
    },
    /// `V_j(L ∩ ζ)` on `A_{n,j}` (balls and ellipsoids).
    SectionVolume { body: StarSet },
    /// Constant function on the sphere.
    Constant { value: f64 },
    /// `θ_axis^power` on the sphere.
    Coordinate { axis: usize, power: i32 },
    /// `ρ_L(θ)^m` on the sphere.
    StarPower { star: StarSet, m: f64 },
    /// `(cos d(ζ₀))^power` on `G_{n,j}`, `d` the distance to `e_n`.
    PoleCosPower { power: f64 },
    /// `F_j ψ` on `G_{n,j}` for a sphere field `ψ`, by a product rule.
    FunkOf { inner: Box<ScalarField>, order: usize },
    /// `Λ_j ρ₁^{−1} f` on `G_{n+1,j+1}` for `f` on `A_{n,j}`, with
    /// `ρ₁(ζ) = (1+|ζ|²)^{−(k+1)/2}`.
    Lifted { base: Box<ScalarField>, k: usize },
    /// `ρ₁ Λ_j^{−1} g` on `A_{n,j}` for `g` on `G_{n+1,j+1}`.
    Lowered { base: Box<ScalarField>, k: usize },
}

/// A test function tagged with its domain.
#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
#[cfg_attr(feature = "serde", serde(deny_unknown_fields))]
pub struct ScalarField {
    pub domain: Domain,
    pub kind: FieldKind,
}

/// Declared analytic properties used by prechecks and proposals.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Metadata {
    /// `|f(x)| ≤ C(1+|x|)^{−d}`; `INFINITY` for super-polynomial decay.
    pub decay_exponent: Option<f64>,
    pub support_radius: Option<f64>,
    /// Order of vanishing in `cos d` near the exceptional set `{cos d = 0}`.
    pub pole_cos_order: f64,
    pub closed_form_kplane: bool,
    pub closed_form_jk: bool,
}

fn check_vec(v: &Option<Vec<f64>>, n: usize) -> Result<()> {
    if let Some(c) = v {
        ensure(c.len() == n, "a center of length n")?;
    }
    Ok(())
}

impl ScalarField {
    pub fn new(domain: Domain, kind: FieldKind) -> Result<Self> {
        let f = ScalarField { domain, kind };
        f.validate()?;
        Ok(f)
    }

    pub fn validate(&self) -> Result<()> {
        use Domain::*;
        use FieldKind::*;
        let n = self.domain.ambient_dim();
        ensure(n >= 1, "dimension ≥ 1")?;
        match (&self.kind, self.domain) {
            (Gaussian { center }, Euclidean(_)) => check_vec(center, n),
            (Extremizer { k, map }, Euclidean(_)) => {
                ensure(*k > 0 && *k < n, "0 < k < n")?;
                if let Some(m) = map {
                    ensure(m.dim == n, "map dimension n")?;
                    m.validate()?;
                }
                Ok(())
            }
            (Indicator { body }, Euclidean(_)) | (StarGaussian { star: body }, Euclidean(_)) => {
                ensure(body.dim() == n, "star set in ℝⁿ")
            }
            (PlaneGaussian { center }, AffineGrassmannian { j, .. }) => {
                ensure(j < n, "j < n")?;
                check_vec(center, n)
            }
            (PlaneExtremizer { k, map }, AffineGrassmannian { j, .. }) => {
                ensure(j < *k && *k < n, "j < k < n")?;
                if let Some(m) = map {
                    ensure(m.dim == n, "map dimension n")?;
                    m.validate()?;
                }
                Ok(())
            }
            (SectionVolume { body }, AffineGrassmannian { j, .. }) => {
                ensure(j < n, "j < n")?;
                ensure(body.dim() == n, "body in ℝⁿ")?;
                ensure(matches!(body.kind(), StarKind::Ball { .. } | StarKind::Ellipsoid { .. }), "a ball or ellipsoid body")
            }
            (Constant { value }, Sphere(_)) => ensure(value.is_finite(), "a finite constant"),
            (Coordinate { axis, .. }, Sphere(_)) => ensure(*axis < n, "axis < n"),
            (StarPower { star, m }, Sphere(_)) => {
                ensure(star.dim() == n, "star set in ℝⁿ")?;
                ensure(m.is_finite(), "finite power")
            }
            (PoleCosPower { power }, Grassmannian { k, .. }) => {
                ensure(k >= 1 && k < n, "1 ≤ k < n")?;
                ensure(power.is_finite(), "finite power")
            }
            (FunkOf { inner, order }, Grassmannian { k, .. }) => {
                ensure(inner.domain == Sphere(n), "a sphere field in the same dimension")?;
                ensure((1..=3).contains(&k), "1 ≤ j ≤ 3 for the inner product rule")?;
                ensure(*order >= 2, "order ≥ 2")?;
                inner.validate()
            }
            (Lifted { base, k }, Grassmannian { n: m, k: j1 }) => {
                let bd = base.domain;
                let (bn, bj) = match bd {
                    AffineGrassmannian { n, j } => (n, j),
                    Euclidean(n) => (n, 0),
                    _ => return Err(Error::Invalid("lifted field needs a base on A_{n,j}".into())),
                };
                ensure(bn + 1 == m && bj + 1 == j1, "base on A_{n,j} for a field on G_{n+1,j+1}")?;
                ensure(bj < *k && *k < bn, "j < k < n")?;
                base.validate()
            }
            (Lowered { base, k }, AffineGrassmannian { .. }) | (Lowered { base, k }, Euclidean(_)) => {
                let bj = bj_of(self.domain);
                ensure(base.domain == Grassmannian { n: n + 1, k: bj + 1 }, "base on G_{n+1,j+1} for a field on A_{n,j}")?;
                ensure(bj < *k && *k < n, "j < k < n")?;
                base.validate()
            }
            _ => Err(Error::Invalid(format!("field kind does not live on {:?}", self.domain))),
        }
    }

    pub fn metadata(&self) -> Metadata {
        use FieldKind::*;
        let mut m = Metadata {
            decay_exponent: None,
            support_radius: None,
            pole_cos_order: 0.0,
            closed_form_kplane: false,
            closed_form_jk: false,
        };
        match &self.kind {
            Gaussian { .. } | StarGaussian { .. } | PlaneGaussian { .. } => {
                m.decay_exponent = Some(f64::INFINITY);
                m.closed_form_kplane = matches!(self.kind, Gaussian { .. });
                m.closed_form_jk = matches!(self.kind, PlaneGaussian { .. });
            }
            Extremizer { k, map } => {
                m.decay_exponent = Some(*k as f64 + 1.0);
                m.closed_form_kplane = map.is_none();
            }
            PlaneExtremizer { k, map } => {
                m.decay_exponent = Some(*k as f64 + 1.0);
                m.closed_form_jk = map.is_none();
            }
            Indicator { body } => {
                m.decay_exponent = Some(f64::INFINITY);
                m.support_radius = Some(body.bounding_radius());
                m.closed_form_kplane = matches!(body.kind(), StarKind::Ball { .. } | StarKind::Ellipsoid { .. });
            }
            SectionVolume { body } => {
                m.decay_exponent = Some(f64::INFINITY);
                m.support_radius = Some(body.bounding_radius());
                m.closed_form_jk = true;
            }
            Coordinate { axis, power } => {
                if *axis + 1 == self.domain.ambient_dim() {
                    m.pole_cos_order = *power as f64;
                }
            }
            StarPower { star, m: pw } => {
                if let StarKind::EquatorialBump { gamma } = star.kind() {
                    m.pole_cos_order = gamma * pw;
                }
            }
            PoleCosPower { power } => m.pole_cos_order = *power,
            FunkOf { inner, .. } => m.pole_cos_order = inner.metadata().pole_cos_order.max(0.0),
            Constant { .. } | Lifted { .. } | Lowered { .. } => {}
        }
        m
    }

    /// Value at a point of ℝⁿ (or at a 0-plane).
    pub fn eval_point(&self, x: &[f64]) -> f64 {
        use FieldKind::*;
        match &self.kind {
            Gaussian { center } => {
                let d2 = match center {
                    Some(c) => x.iter().zip(c).map(|(a, b)| (a - b) * (a - b)).sum(),
                    None => norm2(x),
                };
                (-d2).exp()
            }
            Extremizer { k, map } => {
                let r2 = match map {
                    Some(m) => {
                        let mut y = vec![0.0; x.len()];
                        m.apply(x, &mut y);
                        norm2(&y)
                    }
                    None => norm2(x),
                };
                (1.0 + r2).powf(-0.5 * (*k as f64 + 1.0))
            }
            Indicator { body } => {
                if body.contains(x) {
                    1.0
                } else {
                    0.0
                }
            }
            StarGaussian { star } => {
                let r = norm(x);
                if r == 0.0 {
                    return 1.0;
                }
                let th: Vec<f64> = x.iter().map(|v| v / r).collect();
                let rho = star.radial(&th);
                (-(r / rho).powi(2)).exp()
            }
            _ => {
                let tau = AffinePlane { direction: OrthonormalFrame::empty(x.len()), offset: x.to_vec() };
                self.eval_plane(&tau)
            }
        }
    }

    /// Value at an affine plane.
    pub fn eval_plane(&self, zeta: &AffinePlane) -> f64 {
        use FieldKind::*;
        match &self.kind {
            PlaneGaussian { center } => {
                let d2 = match center {
                    Some(c) => {
                        let p = zeta.direction.project(c);
                        c.iter().zip(&p).zip(&zeta.offset).map(|((ci, pi), ui)| (ci - pi - ui).powi(2)).sum()
                    }
                    None => norm2(&zeta.offset),
                };
                (-d2).exp()
            }
            PlaneExtremizer { k, map } => {
                let r2 = match map {
                    Some(m) => match apply_affine(m, zeta) {
                        Ok(img) => norm2(&img.offset),
                        Err(_) => f64::NAN,
                    },
                    None => norm2(&zeta.offset),
                };
                (1.0 + r2).powf(-0.5 * (*k as f64 + 1.0))
            }
            SectionVolume { body } => body.affine_section_volume(zeta).unwrap_or(f64::NAN),
            Lowered { base, k } => {
                let r2 = norm2(&zeta.offset);
                let rho1 = (1.0 + r2).powf(-0.5 * (*k as f64 + 1.0));
                rho1 * base.eval_subspace(&grassmann::lift(zeta))
            }
            _ if zeta.dim() == 0 => self.eval_point(&zeta.offset),
            _ => f64::NAN,
        }
    }

    /// Value at a unit vector.
    pub fn eval_direction(&self, theta: &[f64]) -> f64 {
        use FieldKind::*;
        match &self.kind {
            Constant { value } => *value,
            Coordinate { axis, power } => theta[*axis].powi(*power),
            StarPower { star, m } => star.radial(theta).powf(*m),
            _ => f64::NAN,
        }
    }

    /// Value at a linear subspace. Sphere fields are read on lines as the
    /// even part `(φ(θ) + φ(−θ))/2`.
    pub fn eval_subspace(&self, frame: &OrthonormalFrame) -> f64 {
        use FieldKind::*;
        match &self.kind {
            PoleCosPower { power } => grassmann::pole_cos(frame).powf(*power),
            FunkOf { inner, order } => match SphereRule::new(frame.rank(), *order) {
                Ok(rule) => crate::transforms::funk_with_rule(inner, frame, &rule),
                Err(_) => f64::NAN,
            },
            Lifted { base, k } => match grassmann::unlift(frame) {
                Ok(zeta) => {
                    let r2 = norm2(&zeta.offset);
                    base.eval_plane(&zeta) * (1.0 + r2).powf(0.5 * (*k as f64 + 1.0))
                }
                Err(_) => 0.0,
            },
            Constant { .. } | Coordinate { .. } | StarPower { .. } if frame.rank() == 1 => {
                let th = frame.col(0);
                let neg: Vec<f64> = th.iter().map(|x| -x).collect();
                0.5 * (self.eval_direction(th) + self.eval_direction(&neg))
            }
            _ => f64::NAN,
        }
    }

    /// `sup_{x ∈ τ} |f(x)|` when known in closed form.
    pub fn sup_on_plane(&self, tau: &AffinePlane) -> Option<f64> {
        use FieldKind::*;
        match &self.kind {
            Gaussian { center } => {
                let pg = ScalarField { domain: self.domain, kind: PlaneGaussian { center: center.clone() } };
                Some(pg.eval_plane(tau))
            }
            Extremizer { k, map: None } => Some((1.0 + norm2(&tau.offset)).powf(-0.5 * (*k as f64 + 1.0))),
            Indicator { body } => match body.affine_section_volume(tau) {
                Ok(v) => Some(if v > 0.0 { 1.0 } else { 0.0 }),
                Err(_) => None,
            },
            _ => None,
        }
    }

    /// Center (in plane coordinates) and radius of a disc in `τ` outside of
    /// which the field vanishes, for compactly supported fields.
    pub fn plane_chart(&self, tau: &AffinePlane) -> Option<(Vec<f64>, f64)> {
        let k = tau.dim();
        match &self.kind {
            FieldKind::Indicator { body } => {
                if let StarKind::Ball { radius } = body.kind() {
                    let h = radius * radius - norm2(&tau.offset);
                    return Some((vec![0.0; k], h.max(0.0).sqrt()));
                }
                let r = body.bounding_radius();
                let h = r * r - norm2(&tau.offset);
                Some((vec![0.0; k], h.max(0.0).sqrt()))
            }
            _ => None,
        }
    }
}

fn bj_of(d: Domain) -> usize {
    match d {
        Domain::AffineGrassmannian { j, .. } => j,
        _ => 0,
    }
}

/// The extremizer `(1+|Mx|²)^{−(k+1)/2}` on ℝⁿ.
pub fn make_extremizer(n: usize, k: usize, map: Option<AffineMap>) -> Result<ScalarField> {
    ensure(k > 0 && k < n, "0 < k < n")?;
    ScalarField::new(Domain::Euclidean(n), FieldKind::Extremizer { k, map })
}

/// `ln ∫_{ℝ^d} (a² + |s|²)^{−e/2} ds` for `e > d`, as a function of `a`.
fn ln_power_integral(d: usize, e: f64, a2: f64) -> f64 {
    let df = d as f64;
    0.5 * df * PI.ln() + ln_gamma(0.5 * (e - df)).unwrap_or(f64::NAN) - ln_gamma(0.5 * e).unwrap_or(f64::NAN)
        + 0.5 * (df - e) * a2.ln()
}

/// Exact `(R_k f)(τ)` for fields carrying a closed form.
pub fn oracle_kplane(field: &ScalarField, tau: &AffinePlane) -> Result<f64> {
    let k = tau.dim();
    match &field.kind {
        FieldKind::Gaussian { center } => {
            let pg = ScalarField { domain: field.domain, kind: FieldKind::PlaneGaussian { center: center.clone() } };
            Ok(PI.powf(0.5 * k as f64) * pg.eval_plane(tau))
        }
        FieldKind::Extremizer { k: kf, map: None } => {
            let e = *kf as f64 + 1.0;
            if !(e > k as f64) {
                return Err(Error::NotIntegrable(format!("k + 1 > dim τ (k = {kf})")));
            }
            Ok(ln_power_integral(k, e, 1.0 + norm2(&tau.offset)).exp())
        }
        FieldKind::Indicator { body } => body.affine_section_volume(tau),
        _ => Err(Error::MissingClosedForm("the k-plane transform")),
    }
}

/// Exact `(R_{j,k} f)(τ)` for plane fields carrying a closed form.
pub fn oracle_jk(field: &ScalarField, tau: &AffinePlane) -> Result<f64> {
    let j = match field.domain {
        Domain::AffineGrassmannian { j, .. } => j,
        Domain::Euclidean(_) => return oracle_kplane(field, tau),
        _ => return Err(Error::Invalid("plane field expected".into())),
    };
    let k = tau.dim();
    ensure(j < k, "j < k")?;
    match &field.kind {
        FieldKind::PlaneGaussian { .. } => Ok(PI.powf(0.5 * (k - j) as f64) * field.eval_plane(tau)),
        FieldKind::PlaneExtremizer { k: kf, map: None } => {
            let e = *kf as f64 + 1.0;
            if !(e > (k - j) as f64) {
                return Err(Error::NotIntegrable("k + 1 > k − j".into()));
            }
            Ok(ln_power_integral(k - j, e, 1.0 + norm2(&tau.offset)).exp())
        }
        FieldKind::SectionVolume { body } => body.affine_section_volume(tau),
        _ => Err(Error::MissingClosedForm("the (j,k)-transform")),
    }
}

/// `(σ_k/σ_j)(1+|τ|²)^{−(j+1)/2}`, the (j,k)-transform of the extremizer.
pub fn oracle_jk_extremizer(n: usize, j: usize, k: usize, tau: &AffinePlane) -> Result<f64> {
    ensure(j < k, "j < k")?;
    ensure(k < n, "k < n")?;
    let lam = (ln_sphere_area(k as f64) - ln_sphere_area(j as f64)).exp();
    Ok(lam * (1.0 + plane_distance(tau).powi(2)).powf(-0.5 * (j as f64 + 1.0)))
}

/// `ln b_k` re-exported for callers working with section volumes.
pub fn ln_unit_ball(k: usize) -> f64 {
    ln_ball_volume(k as f64)
}
