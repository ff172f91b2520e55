//! Linear and affine Grassmannians: frames, Haar and importance sampling,
//! geodesic distance to a pole and the stereographic lift.

use alloc::vec;
use alloc::vec::Vec;
#[allow(unused_imports)]
use num_traits::Float;
use rand_distr::{Distribution, Gamma};

use crate::error::{ensure, Error, Result};
use crate::linalg::{self, axpy, dot, norm, norm2};
use crate::rng::SampleRng;
use crate::special::{ln_beta, ln_sphere_area};

const MAX_RETRIES: u32 = 16;

/// Orthonormal basis of a linear subspace, stored column after column.
///
/// Rank 0 is allowed and represents the zero subspace (the direction of a
/// point viewed as a 0-plane).
#[derive(Debug, Clone, PartialEq)]
pub struct OrthonormalFrame {
    n: usize,
    k: usize,
    data: Vec<f64>,
}

impl OrthonormalFrame {
    /// Orthonormalizes the given columns. Fails if they are dependent.
    pub fn from_columns(n: usize, k: usize, mut data: Vec<f64>) -> Result<Self> {
        ensure(k <= n, "k ≤ n")?;
        ensure(data.len() == n * k, "n·k column entries")?;
        if !linalg::orthonormalize(n, k, &mut data) {
            return Err(Error::Degenerate(0));
        }
        Ok(OrthonormalFrame { n, k, data })
    }

    /// Span of the listed coordinate axes.
    pub fn coordinate(n: usize, axes: &[usize]) -> Result<Self> {
        let mut data = vec![0.0; n * axes.len()];
        for (c, &a) in axes.iter().enumerate() {
            ensure(a < n, "axis index < n")?;
            data[c * n + a] = 1.0;
        }
        Self::from_columns(n, axes.len(), data)
    }

    pub fn empty(n: usize) -> Self {
        OrthonormalFrame { n, k: 0, data: Vec::new() }
    }

    pub fn ambient_dim(&self) -> usize {
        self.n
    }

    pub fn rank(&self) -> usize {
        self.k
    }

    pub fn col(&self, i: usize) -> &[f64] {
        &self.data[i * self.n..(i + 1) * self.n]
    }

    pub fn columns(&self) -> &[f64] {
        &self.data
    }

    /// Coordinates `Qᵀv` of `v` in the frame.
    pub fn coords(&self, v: &[f64]) -> Vec<f64> {
        (0..self.k).map(|i| dot(self.col(i), v)).collect()
    }

    /// `Q c` for frame coordinates `c`.
    pub fn combine(&self, c: &[f64], out: &mut [f64]) {
        out.iter_mut().for_each(|x| *x = 0.0);
        for (i, ci) in c.iter().enumerate() {
            axpy(*ci, self.col(i), out);
        }
    }

    /// Orthogonal projection `QQᵀv`.
    pub fn project(&self, v: &[f64]) -> Vec<f64> {
        let mut out = vec![0.0; self.n];
        for i in 0..self.k {
            let q = self.col(i);
            axpy(dot(q, v), q, &mut out);
        }
        out
    }

    /// Row-major projector `QQᵀ`.
    pub fn projector(&self) -> Vec<f64> {
        let n = self.n;
        let mut p = vec![0.0; n * n];
        for i in 0..self.k {
            let q = self.col(i);
            for r in 0..n {
                for c in 0..n {
                    p[r * n + c] += q[r] * q[c];
                }
            }
        }
        p
    }

    /// Largest entry of `QᵀQ − I` in absolute value.
    pub fn gram_error(&self) -> f64 {
        let mut worst: f64 = 0.0;
        for i in 0..self.k {
            for j in 0..self.k {
                let e = if i == j { 1.0 } else { 0.0 };
                worst = worst.max((dot(self.col(i), self.col(j)) - e).abs());
            }
        }
        worst
    }

    /// Max-entry distance between the projectors of two frames.
    pub fn projector_distance(&self, other: &OrthonormalFrame) -> f64 {
        if self.n != other.n {
            return f64::INFINITY;
        }
        self.projector().iter().zip(other.projector()).map(|(a, b)| (a - b).abs()).fold(0.0, f64::max)
    }

    /// Orthonormal basis of the orthogonal complement.
    pub fn complement(&self) -> OrthonormalFrame {
        let n = self.n;
        let mut vectors = self.data.clone();
        for a in 0..n {
            let mut e = vec![0.0; n];
            e[a] = 1.0;
            vectors.extend_from_slice(&e);
        }
        let basis = linalg::span_basis(n, &vectors, 1e-8);
        let data = basis[self.k * n..].to_vec();
        OrthonormalFrame { n, k: n - self.k, data }
    }
}

/// An affine k-plane `τ = ξ + u` with `u ⊥ ξ`.
#[derive(Debug, Clone, PartialEq)]
pub struct AffinePlane {
    pub direction: OrthonormalFrame,
    pub offset: Vec<f64>,
}

impl AffinePlane {
    /// Plane with the given direction through the point `x`; the offset is
    /// the component of `x` orthogonal to the direction.
    pub fn through(direction: OrthonormalFrame, x: &[f64]) -> Result<Self> {
        ensure(x.len() == direction.ambient_dim(), "point in the ambient space")?;
        let p = direction.project(x);
        let offset = x.iter().zip(&p).map(|(a, b)| a - b).collect();
        Ok(AffinePlane { direction, offset })
    }

    pub fn ambient_dim(&self) -> usize {
        self.direction.ambient_dim()
    }

    pub fn dim(&self) -> usize {
        self.direction.rank()
    }

    /// Point `u + Σ sᵢ ξᵢ`.
    pub fn point(&self, s: &[f64], out: &mut [f64]) {
        self.direction.combine(s, out);
        for (o, u) in out.iter_mut().zip(&self.offset) {
            *o += u;
        }
    }

    /// Largest `|⟨u, ξᵢ⟩|`.
    pub fn orthogonality_error(&self) -> f64 {
        (0..self.dim()).map(|i| dot(self.direction.col(i), &self.offset).abs()).fold(0.0, f64::max)
    }
}

/// `|τ|`, the distance from the origin to the plane.
pub fn plane_distance(tau: &AffinePlane) -> f64 {
    norm(&tau.offset)
}

/// A plane drawn from an importance proposal, with weight
/// `(target density)/(proposal density)`.
#[derive(Debug, Clone, PartialEq)]
pub struct WeightedSample {
    pub plane: AffinePlane,
    pub importance_weight: f64,
}

/// Proposal on ℝ^d with density `∝ |u|^β (1+|u|²)^{−α/2}`.
#[derive(Debug, Clone, Copy)]
pub struct RadialProposal {
    dim: usize,
    alpha: f64,
    beta: f64,
    ln_z: f64,
    num: Option<Gamma<f64>>,
    den: Option<Gamma<f64>>,
}

impl RadialProposal {
    pub fn new(dim: usize, alpha: f64, beta: f64) -> Result<Self> {
        if dim == 0 {
            return Ok(RadialProposal { dim, alpha, beta: 0.0, ln_z: 0.0, num: None, den: None });
        }
        let d = dim as f64;
        if !(d + beta > 0.0) || !(alpha > d + beta) || !alpha.is_finite() {
            return Err(Error::NonNormalizable { alpha, dim, min: d + beta.max(-d) });
        }
        let a = 0.5 * (d + beta);
        let b = 0.5 * (alpha - d - beta);
        let ln_z = ln_sphere_area(d - 1.0) + ln_beta(a, b)? - core::f64::consts::LN_2;
        let num = Gamma::new(a, 1.0).map_err(|_| Error::Invalid("gamma shape".into()))?;
        let den = Gamma::new(b, 1.0).map_err(|_| Error::Invalid("gamma shape".into()))?;
        Ok(RadialProposal { dim, alpha, beta, ln_z, num: Some(num), den: Some(den) })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn alpha(&self) -> f64 {
        self.alpha
    }

    /// `1/q(u)` as a function of `r = |u|`.
    pub fn inverse_density(&self, r: f64) -> f64 {
        if self.dim == 0 {
            return 1.0;
        }
        let mut l = self.ln_z + 0.5 * self.alpha * (r * r).ln_1p();
        if self.beta != 0.0 {
            l -= self.beta * r.ln();
        }
        l.exp()
    }

    /// Draws `u` into `out` (length `dim`) and returns `1/q(u)`.
    pub fn sample(&self, rng: &mut SampleRng, out: &mut [f64]) -> f64 {
        debug_assert_eq!(out.len(), self.dim);
        if self.dim == 0 {
            return 1.0;
        }
        let (num, den) = (self.num.unwrap(), self.den.unwrap());
        let r = loop {
            let x: f64 = num.sample(rng);
            let y: f64 = den.sample(rng);
            if y > 0.0 && (x > 0.0 || self.beta <= 0.0) {
                let r = (x / y).sqrt();
                if r.is_finite() {
                    break r;
                }
            }
        };
        rng.unit_vector(out);
        out.iter_mut().for_each(|v| *v *= r);
        self.inverse_density(r)
    }
}

/// Haar-distributed orthonormal frame of the full space ℝⁿ.
fn haar_full(n: usize, rng: &mut SampleRng) -> Result<Vec<f64>> {
    let mut data = vec![0.0; n * n];
    for _ in 0..MAX_RETRIES {
        rng.fill_normal(&mut data);
        if linalg::orthonormalize(n, n, &mut data) {
            return Ok(data);
        }
    }
    Err(Error::Degenerate(MAX_RETRIES))
}

/// Haar-distributed k-subspace of ℝⁿ from `k` standard Gaussian vectors.
pub fn haar_subspace(n: usize, k: usize, rng: &mut SampleRng) -> Result<OrthonormalFrame> {
    ensure(k <= n, "k ≤ n")?;
    let mut data = vec![0.0; n * k];
    for _ in 0..MAX_RETRIES {
        rng.fill_normal(&mut data);
        if linalg::orthonormalize(n, k, &mut data) {
            return Ok(OrthonormalFrame { n, k, data });
        }
    }
    Err(Error::Degenerate(MAX_RETRIES))
}

/// Haar direction and offset drawn from `proposal` (of dimension `n − k`)
/// in coordinates of an orthonormal basis of `ξ^⊥`.
pub fn sample_affine_plane_with(n: usize, k: usize, proposal: &RadialProposal, rng: &mut SampleRng) -> Result<WeightedSample> {
    ensure(k < n, "k < n")?;
    ensure(proposal.dim() == n - k, "proposal of dimension n − k")?;
    let full = haar_full(n, rng)?;
    let mut r = vec![0.0; n - k];
    let w = proposal.sample(rng, &mut r);
    let mut offset = vec![0.0; n];
    for (i, ri) in r.iter().enumerate() {
        axpy(*ri, &full[(k + i) * n..(k + i + 1) * n], &mut offset);
    }
    let direction = OrthonormalFrame { n, k, data: full[..n * k].to_vec() };
    Ok(WeightedSample { plane: AffinePlane { direction, offset }, importance_weight: w })
}

/// Weighted draw from `A_{n,k}` realizing `dτ = d*ξ du`; the offset
/// density is `∝ (1+|u|²)^{−α/2}` on `ξ^⊥`.
pub fn sample_affine_plane(n: usize, k: usize, alpha: f64, rng: &mut SampleRng) -> Result<WeightedSample> {
    ensure(k < n, "k < n")?;
    let proposal = RadialProposal::new(n - k, alpha, 0.0)?;
    sample_affine_plane_with(n, k, &proposal, rng)
}

/// Weighted j-plane inside `τ`: a Haar j-subspace `η` of the direction of
/// `τ` and an offset `u + w` with `w ∈ dir(τ) ⊖ η` drawn from `proposal`
/// (of dimension `k − j`).
pub fn sample_subplane_with(
    tau: &AffinePlane,
    j: usize,
    proposal: &RadialProposal,
    rng: &mut SampleRng,
) -> Result<WeightedSample> {
    let (n, k) = (tau.ambient_dim(), tau.dim());
    ensure(j < k, "j < k")?;
    ensure(proposal.dim() == k - j, "proposal of dimension k − j")?;
    let inner = haar_full(k, rng)?;
    let mut r = vec![0.0; k - j];
    let w = proposal.sample(rng, &mut r);
    let mut dir = vec![0.0; n * j];
    for c in 0..j {
        tau.direction.combine(&inner[c * k..(c + 1) * k], &mut dir[c * n..(c + 1) * n]);
    }
    let mut offset = tau.offset.clone();
    let mut tmp = vec![0.0; n];
    for (i, ri) in r.iter().enumerate() {
        tau.direction.combine(&inner[(j + i) * k..(j + i + 1) * k], &mut tmp);
        axpy(*ri, &tmp, &mut offset);
    }
    let direction = OrthonormalFrame { n, k: j, data: dir };
    Ok(WeightedSample { plane: AffinePlane { direction, offset }, importance_weight: w })
}

/// [`sample_subplane_with`] with offset density `∝ (1+|w|²)^{−α/2}`.
pub fn sample_subplane(tau: &AffinePlane, j: usize, alpha: f64, rng: &mut SampleRng) -> Result<WeightedSample> {
    ensure(j < tau.dim(), "j < k")?;
    let proposal = RadialProposal::new(tau.dim() - j, alpha, 0.0)?;
    sample_subplane_with(tau, j, &proposal, rng)
}

/// Uniform point on the unit sphere of `span(τ₀)`.
pub fn sample_subsphere(frame: &OrthonormalFrame, rng: &mut SampleRng) -> Vec<f64> {
    let mut c = vec![0.0; frame.rank()];
    rng.unit_vector(&mut c);
    let mut out = vec![0.0; frame.ambient_dim()];
    frame.combine(&c, &mut out);
    out
}

/// Geodesic distance `arccos |P pole|` between the pole and the great
/// subsphere `S ∩ span(τ₀)`.
pub fn geodesic_distance(frame: &OrthonormalFrame, pole: &[f64]) -> f64 {
    let c = frame.coords(pole);
    norm(&c).min(1.0).acos()
}

/// `cos d(τ₀)` for the pole `e_n` (last coordinate axis).
pub fn pole_cos(frame: &OrthonormalFrame) -> f64 {
    let n = frame.ambient_dim();
    let s: f64 = (0..frame.rank()).map(|i| frame.col(i)[n - 1].powi(2)).sum();
    s.sqrt().min(1.0)
}

/// Stereographic lift of `τ ⊂ ℝⁿ` to the (k+1)-subspace of ℝ^{n+1}
/// spanned by `ξ` and `(u + e_{n+1})/√(1+|u|²)`.
pub fn lift(tau: &AffinePlane) -> OrthonormalFrame {
    let n = tau.ambient_dim();
    let k = tau.dim();
    let m = n + 1;
    let mut data = vec![0.0; m * (k + 1)];
    for c in 0..k {
        data[c * m..c * m + n].copy_from_slice(tau.direction.col(c));
    }
    let s = 1.0 / (1.0 + norm2(&tau.offset)).sqrt();
    let last = &mut data[k * m..];
    for (d, u) in last.iter_mut().zip(&tau.offset) {
        *d = u * s;
    }
    last[n] = s;
    OrthonormalFrame { n: m, k: k + 1, data }
}

/// Inverse of [`lift`]: the affine k-plane whose lift is `span(τ₀)`.
pub fn unlift(frame: &OrthonormalFrame) -> Result<AffinePlane> {
    let m = frame.ambient_dim();
    ensure(m >= 2 && frame.rank() >= 1, "rank ≥ 1 in dimension ≥ 2")?;
    let n = m - 1;
    let k = frame.rank() - 1;
    let mut pole = vec![0.0; m];
    pole[n] = 1.0;
    let p = frame.project(&pole);
    let pn = norm(&p);
    if pn < 1e-12 {
        return Err(Error::ExceptionalSet);
    }
    let u0: Vec<f64> = p.iter().map(|x| x / pn).collect();
    let offset: Vec<f64> = u0[..n].iter().map(|x| x / u0[n]).collect();
    let mut vectors = u0.clone();
    vectors.extend_from_slice(frame.columns());
    let basis = linalg::span_basis(m, &vectors, 1e-8);
    if basis.len() != m * (k + 1) {
        return Err(Error::Degenerate(0));
    }
    let mut dir = Vec::with_capacity(n * k);
    for c in 1..=k {
        dir.extend_from_slice(&basis[c * m..c * m + n]);
    }
    let mut direction = OrthonormalFrame { n, k, data: dir };
    if !linalg::orthonormalize(n, k, &mut direction.data) {
        return Err(Error::Degenerate(0));
    }
    Ok(AffinePlane { direction, offset })
}

/// Invertible affine map `x ↦ Ax + t` on ℝⁿ.
#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct AffineMap {
    pub dim: usize,
    /// Row-major `n×n` matrix.
    pub matrix: Vec<f64>,
    pub translation: Vec<f64>,
}

impl AffineMap {
    pub fn new(dim: usize, matrix: Vec<f64>, translation: Vec<f64>) -> Result<Self> {
        ensure(matrix.len() == dim * dim, "an n×n matrix")?;
        ensure(translation.len() == dim, "a translation of length n")?;
        let map = AffineMap { dim, matrix, translation };
        map.validate()?;
        Ok(map)
    }

    pub fn identity(dim: usize) -> Self {
        let mut matrix = vec![0.0; dim * dim];
        (0..dim).for_each(|i| matrix[i * dim + i] = 1.0);
        AffineMap { dim, matrix, translation: vec![0.0; dim] }
    }

    pub fn diagonal(diag: &[f64], translation: Vec<f64>) -> Result<Self> {
        let n = diag.len();
        let mut matrix = vec![0.0; n * n];
        for (i, d) in diag.iter().enumerate() {
            matrix[i * n + i] = *d;
        }
        Self::new(n, matrix, translation)
    }

    pub fn validate(&self) -> Result<()> {
        let c = linalg::condition_number(self.dim, &self.matrix);
        if !(c < 1e12) {
            return Err(Error::Singular(c));
        }
        Ok(())
    }

    pub fn apply(&self, x: &[f64], out: &mut [f64]) {
        linalg::matvec(self.dim, self.dim, &self.matrix, x, out);
        for (o, t) in out.iter_mut().zip(&self.translation) {
            *o += t;
        }
    }

    pub fn is_identity(&self) -> bool {
        *self == AffineMap::identity(self.dim)
    }
}

/// Image `M(τ)` with re-orthonormalized direction and re-projected offset.
pub fn apply_affine(map: &AffineMap, tau: &AffinePlane) -> Result<AffinePlane> {
    let n = tau.ambient_dim();
    ensure(map.dim == n, "map dimension equal to the ambient dimension")?;
    let k = tau.dim();
    let mut dir = vec![0.0; n * k];
    for c in 0..k {
        linalg::matvec(n, n, &map.matrix, tau.direction.col(c), &mut dir[c * n..(c + 1) * n]);
    }
    let direction = OrthonormalFrame::from_columns(n, k, dir).map_err(|_| Error::Singular(f64::INFINITY))?;
    let mut x0 = vec![0.0; n];
    map.apply(&tau.offset, &mut x0);
    AffinePlane::through(direction, &x0)
}

/// Law of k-subspaces (or sphere points when `k = 1`) reweighted by
/// `(sin d)^a (cos d)^b`, where `d` is the geodesic distance to `e_n`.
///
/// Under Haar measure `cos² d ~ Beta(k/2, (n−k)/2)`; the tilted law is
/// `Beta(k/2 + b/2, (n−k)/2 + a/2)` with the rest of the subspace still
/// conditionally Haar, so `E_Haar[(sin d)^a (cos d)^b g] = Z · E_tilt[g]`.
#[derive(Debug, Clone, Copy)]
pub struct PoleTilt {
    n: usize,
    k: usize,
    ln_norm: f64,
    gx: Gamma<f64>,
    gy: Gamma<f64>,
}

impl PoleTilt {
    pub fn new(n: usize, k: usize, a: f64, b: f64) -> Result<Self> {
        ensure(k >= 1 && k < n, "1 ≤ k < n")?;
        let (kf, nf) = (k as f64, n as f64);
        let sa = 0.5 * (kf + b);
        let sb = 0.5 * (nf - kf + a);
        if !(sa > 0.0) {
            return Err(Error::NotIntegrable(alloc::format!("cos-exponent b > −k (b = {b}, k = {k})")));
        }
        if !(sb > 0.0) {
            return Err(Error::NotIntegrable(alloc::format!("sin-exponent a > k − n (a = {a}, n − k = {})", n - k)));
        }
        let ln_norm = ln_beta(sa, sb)? - ln_beta(0.5 * kf, 0.5 * (nf - kf))?;
        let gx = Gamma::new(sa, 1.0).map_err(|_| Error::Invalid("gamma shape".into()))?;
        let gy = Gamma::new(sb, 1.0).map_err(|_| Error::Invalid("gamma shape".into()))?;
        Ok(PoleTilt { n, k, ln_norm, gx, gy })
    }

    /// `ln E_Haar[(sin d)^a (cos d)^b]`.
    pub fn ln_normalizer(&self) -> f64 {
        self.ln_norm
    }

    fn draw_cos(&self, rng: &mut SampleRng) -> f64 {
        loop {
            let x: f64 = self.gx.sample(rng);
            let y: f64 = self.gy.sample(rng);
            let s = x + y;
            if s > 0.0 && s.is_finite() {
                return (x / s).sqrt();
            }
        }
    }

    /// Subspace drawn from the tilted law.
    pub fn sample_subspace(&self, rng: &mut SampleRng) -> Result<OrthonormalFrame> {
        let (n, k) = (self.n, self.k);
        let c = self.draw_cos(rng);
        let s = (1.0 - c * c).max(0.0).sqrt();
        let mut w = vec![0.0; n - 1];
        rng.unit_vector(&mut w);
        let mut data = vec![0.0; n * k];
        for i in 0..n - 1 {
            data[i] = s * w[i];
        }
        data[n - 1] = c;
        // Remaining k−1 directions: Haar in e_n^⊥ ∩ w^⊥.
        for col in 1..k {
            let v = &mut data[col * n..(col + 1) * n];
            let mut g = vec![0.0; n - 1];
            rng.fill_normal(&mut g);
            let proj = dot(&g, &w);
            axpy(-proj, &w, &mut g);
            v[..n - 1].copy_from_slice(&g);
        }
        for _ in 0..MAX_RETRIES {
            let mut trial = data.clone();
            if linalg::orthonormalize(n, k, &mut trial) {
                return Ok(OrthonormalFrame { n, k, data: trial });
            }
            for col in 1..k {
                let mut g = vec![0.0; n - 1];
                rng.fill_normal(&mut g);
                let proj = dot(&g, &w);
                axpy(-proj, &w, &mut g);
                data[col * n..col * n + n - 1].copy_from_slice(&g);
            }
        }
        Err(Error::Degenerate(MAX_RETRIES))
    }

    /// Sphere point drawn from the tilted law (requires `k = 1`).
    pub fn sample_direction(&self, rng: &mut SampleRng) -> Vec<f64> {
        debug_assert_eq!(self.k, 1);
        let n = self.n;
        let c = self.draw_cos(rng);
        let s = (1.0 - c * c).max(0.0).sqrt();
        let mut w = vec![0.0; n - 1];
        rng.unit_vector(&mut w);
        let sign = rng.sign();
        let mut out: Vec<f64> = w.iter().map(|x| x * s).collect();
        out.push(sign * c);
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rng::Stream;

    #[test]
    fn full_rank_frame_spans_everything() {
        let mut rng = Stream::new(1, "t").sample(0);
        let f = haar_subspace(3, 3, &mut rng).unwrap();
        let p = f.projector();
        for i in 0..3 {
            for j in 0..3 {
                let e = if i == j { 1.0 } else { 0.0 };
                assert!((p[i * 3 + j] - e).abs() < 1e-12);
            }
        }
    }

    #[test]
    fn lift_examples() {
        let dir = OrthonormalFrame::coordinate(2, &[0]).unwrap();
        let tau = AffinePlane { direction: dir.clone(), offset: vec![0.0, 0.0] };
        let l = lift(&tau);
        assert!(geodesic_distance(&l, &[0.0, 0.0, 1.0]).abs() < 1e-12);
        let tau = AffinePlane { direction: dir, offset: vec![0.0, 3.0] };
        assert_eq!(plane_distance(&tau), 3.0);
        let l = lift(&tau);
        assert!((geodesic_distance(&l, &[0.0, 0.0, 1.0]).tan() - 3.0).abs() < 1e-10);
    }

    #[test]
    fn unlift_examples() {
        let f = OrthonormalFrame::coordinate(3, &[0, 2]).unwrap();
        let tau = unlift(&f).unwrap();
        assert!(plane_distance(&tau) < 1e-15);
        assert!(tau.direction.projector_distance(&OrthonormalFrame::coordinate(2, &[0]).unwrap()) < 1e-12);
        let s = core::f64::consts::FRAC_1_SQRT_2;
        let f = OrthonormalFrame::from_columns(3, 2, vec![1.0, 0.0, 0.0, 0.0, s, s]).unwrap();
        // span(e1, (e2+e3)/√2) contains e3's projection, so this is a valid plane;
        // span(e1, e2) is contained in e3^⊥.
        assert!(unlift(&f).is_ok());
        let g = OrthonormalFrame::coordinate(3, &[0, 1]).unwrap();
        assert_eq!(unlift(&g), Err(Error::ExceptionalSet));
    }

    #[test]
    fn geodesic_distance_examples() {
        let f = OrthonormalFrame::coordinate(3, &[0]).unwrap();
        let s = core::f64::consts::FRAC_1_SQRT_2;
        assert!((geodesic_distance(&f, &[s, 0.0, s]) - core::f64::consts::FRAC_PI_4).abs() < 1e-12);
        assert!((geodesic_distance(&f, &[0.0, 0.0, 1.0]) - core::f64::consts::FRAC_PI_2).abs() < 1e-12);
        assert!(geodesic_distance(&f, &[1.0, 0.0, 0.0]).abs() < 1e-7);
    }

    #[test]
    fn proposal_rejects_non_normalizable() {
        assert!(matches!(RadialProposal::new(2, 2.0, 0.0), Err(Error::NonNormalizable { .. })));
        assert!(RadialProposal::new(2, 2.5, 0.0).is_ok());
    }

    #[test]
    fn proposal_inverse_density_integrates_to_one() {
        // ∫ q = 1 ⇔ E_q[1/q · q_ref] = 1; check ∫_{ℝ²} q(u) du by polar quadrature.
        let p = RadialProposal::new(2, 3.0, 0.0).unwrap();
        let m = 4000;
        let mut s = 0.0;
        for i in 0..m {
            let t = (i as f64 + 0.5) / m as f64 * core::f64::consts::FRAC_PI_2;
            let r = t.tan();
            let jac = 1.0 / t.cos().powi(2);
            s += r / p.inverse_density(r) * jac;
        }
        s *= core::f64::consts::FRAC_PI_2 / m as f64 * 2.0 * core::f64::consts::PI;
        assert!((s - 1.0).abs() < 1e-6, "{s}");
    }

    #[test]
    fn pole_tilt_normalizer_matches_haar_moment() {
        // E_Haar[cos² d] on G_{4,2} is k/n = 1/2.
        let t = PoleTilt::new(4, 2, 0.0, 2.0).unwrap();
        assert!((t.ln_normalizer().exp() - 0.5).abs() < 1e-14);
        assert!(PoleTilt::new(3, 2, 0.0, -2.0).is_err());
    }
}
