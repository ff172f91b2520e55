//! Deterministic product rules on ℝ^d, on low-dimensional spheres and on
//! Grassmannians `G_j(ℝ^k)` for `k ≤ 3`.
//!
//! Rules on ℝ^d are polar: Gauss–Legendre in the radius, either after the
//! substitution `r = tan t` (integrable power decay) or on a finite
//! interval (compact support), times a spherical rule.

use alloc::vec;
use alloc::vec::Vec;
use core::f64::consts::{FRAC_PI_4, PI};
#[allow(unused_imports)]
use num_traits::Float;

use crate::error::{Error, Result};
use crate::linalg;
use crate::special::ln_sphere_area;

/// Largest dimension handled by the product rules.
pub const MAX_RULE_DIM: usize = 3;

/// Gauss–Legendre nodes and weights on `[−1, 1]`.
pub fn gauss_legendre(m: usize) -> (Vec<f64>, Vec<f64>) {
    let mut x = vec![0.0; m];
    let mut w = vec![0.0; m];
    let mf = m as f64;
    for i in 0..m.div_ceil(2) {
        let mut z = (PI * (i as f64 + 0.75) / (mf + 0.5)).cos();
        let mut dp = 0.0;
        for _ in 0..100 {
            let (mut p0, mut p1) = (1.0, z);
            for l in 2..=m {
                let lf = l as f64;
                let p2 = ((2.0 * lf - 1.0) * z * p1 - (lf - 1.0) * p0) / lf;
                p0 = p1;
                p1 = p2;
            }
            let pm = if m == 1 { z } else { p1 };
            let pm1 = if m == 1 { 1.0 } else { p0 };
            dp = mf * (z * pm - pm1) / (z * z - 1.0);
            let dz = pm / dp;
            z -= dz;
            if dz.abs() < 1e-16 {
                break;
            }
        }
        x[i] = -z;
        x[m - 1 - i] = z;
        let wi = 2.0 / ((1.0 - z * z) * dp * dp);
        w[i] = wi;
        w[m - 1 - i] = wi;
    }
    (x, w)
}

/// Normalized rule on the unit sphere `S^{d−1} ⊂ ℝ^d`: weights sum to 1.
#[derive(Debug, Clone)]
pub struct SphereRule {
    pub dim: usize,
    pub points: Vec<f64>,
    pub weights: Vec<f64>,
}

impl SphereRule {
    pub fn new(dim: usize, order: usize) -> Result<Self> {
        let order = order.max(2);
        let (points, weights) = match dim {
            1 => (vec![1.0, -1.0], vec![0.5, 0.5]),
            2 => {
                let m = 2 * order;
                let mut p = Vec::with_capacity(2 * m);
                for i in 0..m {
                    let a = 2.0 * PI * (i as f64 + 0.5) / m as f64;
                    p.push(a.cos());
                    p.push(a.sin());
                }
                (p, vec![1.0 / m as f64; m])
            }
            3 => {
                let (z, wz) = gauss_legendre(order);
                let m = 2 * order;
                let mut p = Vec::with_capacity(3 * m * order);
                let mut w = Vec::with_capacity(m * order);
                for (zi, wi) in z.iter().zip(&wz) {
                    let s = (1.0 - zi * zi).max(0.0).sqrt();
                    for j in 0..m {
                        let a = 2.0 * PI * (j as f64 + 0.5) / m as f64;
                        p.extend_from_slice(&[s * a.cos(), s * a.sin(), *zi]);
                        w.push(0.5 * wi / m as f64);
                    }
                }
                (p, w)
            }
            _ => return Err(Error::Unsupported(alloc::format!("deterministic sphere rules need dimension 1..=3 (got {dim})"))),
        };
        Ok(SphereRule { dim, points, weights })
    }

    pub fn len(&self) -> usize {
        self.weights.len()
    }

    pub fn is_empty(&self) -> bool {
        self.weights.is_empty()
    }

    pub fn point(&self, i: usize) -> &[f64] {
        &self.points[i * self.dim..(i + 1) * self.dim]
    }
}

/// Radial part of a polar rule on ℝ^d.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Radial {
    /// `r = tan t`, `t ∈ (0, π/2)`.
    Tan,
    /// `r ∈ [0, R]`.
    Interval(f64),
}

/// Rule for `∫_{ℝ^d} g(x) dx`.
#[derive(Debug, Clone)]
pub struct EuclidRule {
    pub dim: usize,
    pub points: Vec<f64>,
    pub weights: Vec<f64>,
}

impl EuclidRule {
    pub fn new(dim: usize, order: usize, radial: Radial) -> Result<Self> {
        if dim == 0 {
            return Ok(EuclidRule { dim, points: Vec::new(), weights: vec![1.0] });
        }
        let order = order.max(2);
        let sphere = SphereRule::new(dim, order)?;
        let (x, w) = gauss_legendre(order);
        let area = ln_sphere_area(dim as f64 - 1.0).exp();
        let mut points = Vec::new();
        let mut weights = Vec::new();
        for (xi, wi) in x.iter().zip(&w) {
            let (r, dr) = match radial {
                Radial::Tan => {
                    let t = FRAC_PI_4 * (xi + 1.0);
                    let c = t.cos();
                    (t.tan(), FRAC_PI_4 * wi / (c * c))
                }
                Radial::Interval(big_r) => (0.5 * big_r * (xi + 1.0), 0.5 * big_r * wi),
            };
            let radial_w = dr * r.powi(dim as i32 - 1) * area;
            for j in 0..sphere.len() {
                let th = sphere.point(j);
                points.extend(th.iter().map(|t| r * t));
                weights.push(radial_w * sphere.weights[j]);
            }
        }
        Ok(EuclidRule { dim, points, weights })
    }

    pub fn len(&self) -> usize {
        self.weights.len()
    }

    pub fn is_empty(&self) -> bool {
        self.weights.is_empty()
    }

    pub fn point(&self, i: usize) -> &[f64] {
        &self.points[i * self.dim..(i + 1) * self.dim]
    }
}

/// Normalized rule on `G_j(ℝ^k)` for `1 ≤ j < k ≤ 3`.
///
/// Every node stores an orthonormal basis of the subspace followed by one
/// of its complement, as `k` columns of length `k`.
#[derive(Debug, Clone)]
pub struct SubspaceRule {
    pub k: usize,
    pub j: usize,
    pub bases: Vec<f64>,
    pub weights: Vec<f64>,
}

fn completed_basis(theta: &[f64]) -> Vec<f64> {
    let k = theta.len();
    let mut v = theta.to_vec();
    for a in 0..k {
        let mut e = vec![0.0; k];
        e[a] = 1.0;
        v.extend_from_slice(&e);
    }
    linalg::span_basis(k, &v, 1e-6)
}

impl SubspaceRule {
    pub fn new(k: usize, j: usize, order: usize) -> Result<Self> {
        if !(1 <= j && j < k && k <= MAX_RULE_DIM) {
            return Err(Error::Unsupported(alloc::format!(
                "deterministic Grassmannian rules need 1 ≤ j < k ≤ 3 (got j = {j}, k = {k})"
            )));
        }
        let sphere = SphereRule::new(k, order)?;
        let mut bases = Vec::with_capacity(sphere.len() * k * k);
        for i in 0..sphere.len() {
            let b = completed_basis(sphere.point(i));
            if j == 1 {
                bases.extend_from_slice(&b);
            } else {
                // j = k − 1: the subspace is the complement of the line.
                bases.extend_from_slice(&b[k..]);
                bases.extend_from_slice(&b[..k]);
            }
        }
        Ok(SubspaceRule { k, j, bases, weights: sphere.weights })
    }

    pub fn len(&self) -> usize {
        self.weights.len()
    }

    pub fn is_empty(&self) -> bool {
        self.weights.is_empty()
    }

    /// The `k` columns (subspace first, then complement) of node `i`.
    pub fn basis(&self, i: usize) -> &[f64] {
        let s = self.k * self.k;
        &self.bases[i * s..(i + 1) * s]
    }
}

/// `∫_0^{π/2} h(t) dt` by Gauss–Legendre; handy for 1-D oracles.
pub fn integrate_quarter_turn(order: usize, h: impl Fn(f64) -> f64) -> f64 {
    let (x, w) = gauss_legendre(order);
    x.iter().zip(&w).map(|(xi, wi)| FRAC_PI_4 * wi * h(FRAC_PI_4 * (xi + 1.0))).sum()
}

/// `∫_a^b h(t) dt` by Gauss–Legendre.
pub fn integrate_interval(order: usize, a: f64, b: f64, h: impl Fn(f64) -> f64) -> f64 {
    let (x, w) = gauss_legendre(order);
    let half = 0.5 * (b - a);
    x.iter().zip(&w).map(|(xi, wi)| half * wi * h(a + half * (xi + 1.0))).sum()
}
