//! Closed-form constants, evaluated in the log domain.
//!
//! Every Γ-ratio is a difference of [`ln_gamma`] values, so the constants
//! stay finite for ambient dimensions far beyond where Γ itself overflows.

use alloc::format;
use core::f64::consts::PI;
#[allow(unused_imports)]
use num_traits::Float;

use crate::error::{ensure, Error, Result};

/// Hölder exponent `p ∈ [1, ∞]`. The dual exponent `p′` is never stored.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Exponent {
    Finite(f64),
    Infinite,
}

impl Exponent {
    pub fn new(p: f64) -> Result<Self> {
        if p.is_nan() || p < 1.0 {
            return Err(Error::Domain(format!("1 ≤ p ≤ ∞ (got {p})")));
        }
        Ok(if p.is_infinite() { Exponent::Infinite } else { Exponent::Finite(p) })
    }

    pub fn one() -> Self {
        Exponent::Finite(1.0)
    }

    pub fn value(self) -> f64 {
        match self {
            Exponent::Finite(p) => p,
            Exponent::Infinite => f64::INFINITY,
        }
    }

    /// `1/p`, exactly 0 at `p = ∞`.
    pub fn recip(self) -> f64 {
        match self {
            Exponent::Finite(p) => 1.0 / p,
            Exponent::Infinite => 0.0,
        }
    }

    /// `1/p′ = 1 − 1/p`, exactly 0 at `p = 1` and exactly 1 at `p = ∞`.
    pub fn dual_recip(self) -> f64 {
        match self {
            Exponent::Finite(1.0) => 0.0,
            Exponent::Finite(p) => 1.0 - 1.0 / p,
            Exponent::Infinite => 1.0,
        }
    }

    pub fn is_finite(self) -> bool {
        matches!(self, Exponent::Finite(_))
    }
}

#[cfg(feature = "serde")]
impl serde::Serialize for Exponent {
    fn serialize<S: serde::Serializer>(&self, s: S) -> core::result::Result<S::Ok, S::Error> {
        match self {
            Exponent::Finite(p) => s.serialize_f64(*p),
            Exponent::Infinite => s.serialize_str("inf"),
        }
    }
}

#[cfg(feature = "serde")]
impl<'de> serde::Deserialize<'de> for Exponent {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> core::result::Result<Self, D::Error> {
        struct V;
        impl serde::de::Visitor<'_> for V {
            type Value = Exponent;
            fn expecting(&self, f: &mut core::fmt::Formatter) -> core::fmt::Result {
                f.write_str("a number ≥ 1 or the string \"inf\"")
            }
            fn visit_f64<E: serde::de::Error>(self, v: f64) -> core::result::Result<Exponent, E> {
                Exponent::new(v).map_err(E::custom)
            }
            fn visit_u64<E: serde::de::Error>(self, v: u64) -> core::result::Result<Exponent, E> {
                self.visit_f64(v as f64)
            }
            fn visit_i64<E: serde::de::Error>(self, v: i64) -> core::result::Result<Exponent, E> {
                self.visit_f64(v as f64)
            }
            fn visit_str<E: serde::de::Error>(self, v: &str) -> core::result::Result<Exponent, E> {
                match v {
                    "inf" | "infinity" | "∞" => Ok(Exponent::Infinite),
                    _ => Err(E::custom("expected \"inf\"")),
                }
            }
        }
        d.deserialize_any(V)
    }
}

/// `ln Γ(x)` for `x > 0`.
pub fn ln_gamma(x: f64) -> Result<f64> {
    if !(x > 0.0) || !x.is_finite() {
        return Err(Error::Domain(format!("x > 0 (got {x})")));
    }
    Ok(libm::lgamma(x))
}

/// Same as [`ln_gamma`], named after the operation it realizes.
pub fn log_gamma(x: f64) -> Result<f64> {
    ln_gamma(x)
}

pub fn ln_beta(a: f64, b: f64) -> Result<f64> {
    Ok(ln_gamma(a)? + ln_gamma(b)? - ln_gamma(a + b)?)
}

fn lg(x: f64) -> f64 {
    libm::lgamma(x)
}

/// `ln σ_m`, the log area of the unit sphere `S^m ⊂ ℝ^{m+1}`; `m` may be real.
pub fn ln_sphere_area(m: f64) -> f64 {
    core::f64::consts::LN_2 + 0.5 * (m + 1.0) * PI.ln() - lg(0.5 * (m + 1.0))
}

/// `ln b_m`, the log volume of the unit ball in ℝ^m (`b_0 = 1`).
pub fn ln_ball_volume(m: f64) -> f64 {
    0.5 * m * PI.ln() - lg(0.5 * m + 1.0)
}

/// Area `σ_m` of the unit sphere `S^m`.
pub fn sphere_area(m: usize) -> f64 {
    ln_sphere_area(m as f64).exp()
}

/// Volume `b_m` of the unit ball in ℝ^m.
pub fn ball_volume(m: usize) -> f64 {
    ln_ball_volume(m as f64).exp()
}

/// A sharp constant together with its parameters.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum ConstantKind {
    /// Norm of `R_k` on `L^p_μ(ℝⁿ) → L^p_ν(A_{n,k})`.
    OmegaKPMu { n: usize, k: usize, p: Exponent, mu: f64 },
    /// Norm of `R_{j,k}` on weighted spaces.
    OmegaJKPMu { n: usize, j: usize, k: usize, p: Exponent, mu: f64 },
    /// `L^{(n+1)/(k+1)} → L^{n+1}` norm of `R_k`.
    BigOmegaK { n: usize, k: usize },
    /// Conjectured `L^{(n+1)/(k+1)} → L^{(n+1)/(j+1)}` norm of `R_{j,k}`.
    BigOmegaJK { n: usize, j: usize, k: usize },
    /// Section-power constant for bounded sets.
    GardnerC { n: usize, k: usize },
    /// Section-power constant for convex bodies with power `m + 1`.
    SchneiderC { n: usize, k: usize, m: usize },
    /// Constant of the restricted-sup k-plane inequality.
    DppC { n: usize, k: usize },
    /// Weighted Funk-type constant between `G_{n,j}` and `G_{n,k}`.
    FunkWeightedC { n: usize, j: usize, k: usize, p: Exponent, mu: f64 },
    /// Weighted Funk constant from the sphere (`j = 1`).
    FunkWeightedC1 { n: usize, k: usize, p: Exponent, mu: f64 },
    /// The `p = 1` case of [`ConstantKind::FunkWeightedC1`].
    FunkTildeC1 { n: usize, k: usize, mu: f64 },
    /// Leading coefficient of `ω_{j,k,p,μ}(n)` as `n → ∞`.
    AsymptoticLimit { j: usize, k: usize, p: Exponent },
}

fn check_nk(n: usize, k: usize) -> Result<()> {
    ensure(k > 0, "k > 0")?;
    ensure(k < n, "k < n")
}

fn check_jkn(n: usize, j: usize, k: usize) -> Result<()> {
    ensure(j < k, "j < k")?;
    ensure(k < n, "k < n")
}

fn check_mu(mu: f64, bound: f64, constraint: &str) -> Result<()> {
    if mu.is_finite() && mu > bound {
        Ok(())
    } else {
        Err(Error::Domain(format!("{constraint} (μ = {mu}, bound = {bound})")))
    }
}

/// `ln ω_{j,k,p,μ}(n)`.
fn ln_omega_jk(n: f64, j: f64, k: f64, p: Exponent, mu: f64) -> f64 {
    let ip = p.recip();
    let ipd = p.dual_recip();
    (k - j) / 2.0 * ipd * PI.ln() + ip * (lg((n - j) / 2.0) - lg((n - k) / 2.0)) + lg((mu + n * ip - k + j * ipd) / 2.0)
        - lg((mu + n * ip - j * ip) / 2.0)
}

/// `ln` of the weighted Funk constant on `G_{n,j} → G_{n,k}`.
fn ln_funk_c(n: f64, j: f64, k: f64, p: Exponent, mu: f64) -> f64 {
    let ip = p.recip();
    let ipd = p.dual_recip();
    ipd * (lg(k / 2.0) - lg(j / 2.0)) + ip * (lg((n - j) / 2.0) - lg((n - k) / 2.0)) + lg((mu + n * ip - k + j * ipd) / 2.0)
        - lg((mu + n * ip - j * ip) / 2.0)
}

impl ConstantKind {
    /// Checks the parameter-domain constraints of the tag.
    pub fn validate(&self) -> Result<()> {
        use ConstantKind::*;
        match *self {
            OmegaKPMu { n, k, p, mu } => {
                check_nk(n, k)?;
                check_mu(mu, k as f64 - n as f64 * p.recip(), "μ > k − n/p")
            }
            OmegaJKPMu { n, j, k, p, mu } => {
                check_jkn(n, j, k)?;
                check_mu(mu, k as f64 - n as f64 * p.recip() - j as f64 * p.dual_recip(), "μ > k − n/p − j/p′")
            }
            BigOmegaK { n, k } | DppC { n, k } => check_nk(n, k),
            BigOmegaJK { n, j, k } => check_jkn(n, j, k),
            GardnerC { n, k } => {
                ensure(k >= 1, "k ≥ 1")?;
                ensure(k <= n, "k ≤ n")
            }
            SchneiderC { n, k, m } => {
                ensure(k >= 1, "k ≥ 1")?;
                ensure(k <= n, "k ≤ n")?;
                ensure(m >= 1 && m <= n, "1 ≤ m ≤ n")
            }
            FunkWeightedC { n, j, k, p, mu } => {
                ensure(j >= 1, "j ≥ 1")?;
                check_jkn(n, j, k)?;
                check_mu(mu, k as f64 - n as f64 * p.recip() - j as f64 * p.dual_recip(), "μ > k − n/p − j/p′")
            }
            FunkWeightedC1 { n, k, p, mu } => {
                ensure(k >= 1, "k ≥ 1")?;
                ensure(k < n, "k < n")?;
                check_mu(mu, k as f64 - n as f64 * p.recip() - p.dual_recip(), "μ > k − n/p − 1/p′")
            }
            FunkTildeC1 { n, k, mu } => {
                ensure(k >= 1, "k ≥ 1")?;
                ensure(k < n, "k < n")?;
                check_mu(mu, k as f64 - n as f64, "μ > k − n")
            }
            AsymptoticLimit { j, k, p } => {
                ensure(j < k, "j < k")?;
                ensure(p.is_finite(), "finite p (the limit diverges at p = ∞)")
            }
        }
    }

    /// Natural log of the constant.
    pub fn ln_value(&self) -> Result<f64> {
        use ConstantKind::*;
        self.validate()?;
        let f = |x: usize| x as f64;
        let v = match *self {
            OmegaKPMu { n, k, p, mu } => ln_omega_jk(f(n), 0.0, f(k), p, mu),
            OmegaJKPMu { n, j, k, p, mu } => ln_omega_jk(f(n), f(j), f(k), p, mu),
            BigOmegaK { n, k } => {
                let (n, k) = (f(n), f(k));
                ((k - n) * core::f64::consts::LN_2 + n * ln_sphere_area(k) - k * ln_sphere_area(n)) / (n + 1.0)
            }
            BigOmegaJK { n, j, k } => {
                let (n, j, k) = (f(n), f(j), f(k));
                ((n - j) * ln_sphere_area(k) + (k - n) * ln_sphere_area(j) + (j - k) * ln_sphere_area(n)) / (n + 1.0)
            }
            GardnerC { n, k } | DppC { n, k } => {
                let (n, k) = (f(n), f(k));
                (n + 1.0) * ln_ball_volume(k) + ln_ball_volume(n * (k + 1.0))
                    - (k + 1.0) * ln_ball_volume(n)
                    - ln_ball_volume(k * (n + 1.0))
            }
            SchneiderC { n, k, m } => {
                let (n, k, m) = (f(n), f(k), f(m));
                (m + 1.0) * ln_ball_volume(k) + ln_ball_volume(n + k * m)
                    - (n + k * m) / n * ln_ball_volume(n)
                    - ln_ball_volume(k + k * m)
            }
            FunkWeightedC { n, j, k, p, mu } => ln_funk_c(f(n), f(j), f(k), p, mu),
            FunkWeightedC1 { n, k, p, mu } => ln_funk_c(f(n), 1.0, f(k), p, mu),
            FunkTildeC1 { n, k, mu } => ln_funk_c(f(n), 1.0, f(k), Exponent::one(), mu),
            AsymptoticLimit { j, k, p } => {
                let d = f(k) - f(j);
                d / 2.0 * p.dual_recip() * (2.0 * PI).ln() + d / 2.0 * p.value().ln()
            }
        };
        if v.is_nan() {
            return Err(Error::Overflow);
        }
        Ok(v)
    }

    pub fn value(&self) -> Result<f64> {
        let l = self.ln_value()?;
        if l > f64::MAX.ln() {
            return Err(Error::Overflow);
        }
        Ok(l.exp())
    }
}

/// Evaluates a sharp constant in closed form.
pub fn sharp_constant(kind: ConstantKind) -> Result<f64> {
    kind.value()
}

/// `ω⁰_{j,k,p} = (2π)^{(k−j)/2p′} p^{(k−j)/2}`.
pub fn asymptotic_limit(j: usize, k: usize, p: Exponent) -> Result<f64> {
    ConstantKind::AsymptoticLimit { j, k, p }.value()
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::string::ToString;
    use std::vec::Vec;

    fn rel(a: f64, b: f64) -> f64 {
        ((a - b) / b).abs()
    }

    fn fin(p: f64) -> Exponent {
        Exponent::new(p).unwrap()
    }

    /// Stirling series, accurate to ~1e-16 relative for x ≥ 10.
    fn stirling(x: f64) -> f64 {
        let b = [1.0 / 6.0, -1.0 / 30.0, 1.0 / 42.0, -1.0 / 30.0, 5.0 / 66.0, -691.0 / 2730.0, 7.0 / 6.0];
        let mut s = (x - 0.5) * x.ln() - x + 0.5 * (2.0 * PI).ln();
        for (i, bk) in b.iter().enumerate() {
            let k = (i + 1) as f64;
            s += bk / (2.0 * k * (2.0 * k - 1.0) * x.powf(2.0 * k - 1.0));
        }
        s
    }

    #[test]
    fn log_gamma_examples() {
        assert_eq!(log_gamma(1.0).unwrap(), 0.0);
        assert_eq!(log_gamma(2.0).unwrap(), 0.0);
        assert!(rel(log_gamma(0.5).unwrap(), 0.5 * PI.ln()) < 1e-14);
        // 9! by integer multiplication.
        let fact9: u64 = (1..=9).product();
        assert_eq!(fact9, 362_880);
        assert!(rel(log_gamma(10.0).unwrap(), (fact9 as f64).ln()) < 1e-14);
        assert!(rel(log_gamma(10.0).unwrap(), 12.801_827_480_081_469) < 1e-14);
    }

    #[test]
    fn log_gamma_rejects_nonpositive() {
        assert!(log_gamma(0.0).is_err());
        assert!(log_gamma(-1.5).is_err());
        assert!(log_gamma(f64::NAN).is_err());
    }

    #[test]
    fn log_gamma_against_independent_values() {
        // Half-integers: Γ(m + 1/2) = (2m)! √π / (4^m m!).
        for m in 0..30u32 {
            let mut ln = 0.5 * PI.ln();
            for i in 1..=m {
                ln += ((2 * i - 1) as f64 / 2.0).ln();
            }
            assert!(rel(log_gamma(m as f64 + 0.5).unwrap(), ln) < 1e-13 || ln.abs() < 1e-300, "m={m}");
        }
        // Γ(1/4) and Γ(3/4) reference digits; Γ(1e-3).
        assert!(rel(log_gamma(0.25).unwrap(), 3.625_609_908_221_908_f64.ln()) < 1e-13);
        assert!(rel(log_gamma(0.75).unwrap(), 1.225_416_702_465_177_6_f64.ln()) < 1e-13);
        assert!(rel(log_gamma(1e-3).unwrap(), 999.423_772_484_595_5_f64.ln()) < 1e-13);
        // Large arguments against the Stirling series.
        for &x in &[10.0, 17.3, 123.4, 1e3 + 0.25, 5e4, 1e6, 1e7] {
            assert!(rel(log_gamma(x).unwrap(), stirling(x)) < 1e-13, "x={x}");
        }
    }

    #[test]
    fn sphere_and_ball_examples() {
        assert!(rel(sphere_area(0), 2.0) < 1e-15);
        assert!(rel(sphere_area(1), 2.0 * PI) < 1e-15);
        assert!(rel(sphere_area(2), 4.0 * PI) < 1e-15);
        assert!(rel(ball_volume(0), 1.0) < 1e-15);
        assert!(rel(ball_volume(1), 2.0) < 1e-15);
        assert!(rel(ball_volume(2), PI) < 1e-15);
        assert!(rel(ball_volume(3), 4.0 * PI / 3.0) < 1e-15);
        for m in 1..30 {
            assert!(rel(ball_volume(m), sphere_area(m - 1) / m as f64) < 1e-13);
        }
    }

    #[test]
    fn omega_examples() {
        let v = sharp_constant(ConstantKind::OmegaKPMu { n: 5, k: 2, p: fin(1.0), mu: 0.0 }).unwrap();
        assert!((v - 1.0).abs() < 1e-14);
        let v = sharp_constant(ConstantKind::OmegaKPMu { n: 2, k: 1, p: fin(2.0), mu: 1.0 }).unwrap();
        assert!(rel(v, PI.sqrt()) < 1e-13);
        let v = sharp_constant(ConstantKind::BigOmegaK { n: 2, k: 1 }).unwrap();
        assert!(rel(v, (PI / 2.0).powf(1.0 / 3.0)) < 1e-13);
        assert!(rel(v, 1.162_447_351_5) < 1e-10);
        let a = sharp_constant(ConstantKind::BigOmegaJK { n: 3, j: 0, k: 1 }).unwrap();
        let b = sharp_constant(ConstantKind::BigOmegaK { n: 3, k: 1 }).unwrap();
        assert!(rel(a, b) < 1e-13);
    }

    #[test]
    fn omega_at_p_infinity_uses_explicit_exponents() {
        // ω_{k,∞,μ}(n) = π^{k/2} Γ((μ−k)/2)/Γ(μ/2), independent of n.
        let v = sharp_constant(ConstantKind::OmegaKPMu { n: 4, k: 1, p: Exponent::Infinite, mu: 3.0 }).unwrap();
        let expect = PI.sqrt() * libm::tgamma(1.0) / libm::tgamma(1.5);
        assert!(rel(v, expect) < 1e-13);
        assert!(v.is_finite());
    }

    #[test]
    fn constraint_errors_name_the_inequality() {
        let e = sharp_constant(ConstantKind::OmegaKPMu { n: 2, k: 3, p: fin(1.0), mu: 0.0 }).unwrap_err();
        assert_eq!(e.to_string(), "requires k < n");
        let e = sharp_constant(ConstantKind::OmegaKPMu { n: 3, k: 1, p: fin(2.0), mu: -0.6 }).unwrap_err();
        assert!(e.to_string().contains("μ > k − n/p"), "{e}");
        let e = sharp_constant(ConstantKind::OmegaJKPMu { n: 3, j: 1, k: 2, p: fin(2.0), mu: -1.2 }).unwrap_err();
        assert!(e.to_string().contains("μ > k − n/p − j/p′"), "{e}");
        let e = sharp_constant(ConstantKind::FunkTildeC1 { n: 3, k: 2, mu: -1.0 }).unwrap_err();
        assert!(e.to_string().contains("μ > k − n"), "{e}");
        assert!(Exponent::new(0.5).is_err());
    }

    #[test]
    fn omega_p1_mu0_is_one_and_j0_reduces() {
        for n in 2..=20 {
            for k in 1..n {
                let v = sharp_constant(ConstantKind::OmegaKPMu { n, k, p: fin(1.0), mu: 0.0 }).unwrap();
                assert!((v - 1.0).abs() < 1e-12);
            }
        }
        let ps = [fin(1.0), fin(1.5), fin(2.0), fin(4.0)];
        for n in 2..=10 {
            for k in 1..n {
                for &p in &ps {
                    let lo = k as f64 - n as f64 * p.recip();
                    for mu in [lo + 0.25, lo + 1.0, lo + 3.7] {
                        let a = sharp_constant(ConstantKind::OmegaJKPMu { n, j: 0, k, p, mu }).unwrap();
                        let b = sharp_constant(ConstantKind::OmegaKPMu { n, k, p, mu }).unwrap();
                        assert!(rel(a, b) < 1e-12);
                        assert!(a > 0.0 && a.is_finite());
                    }
                }
            }
        }
    }

    #[test]
    fn asymptotic_limit_examples() {
        assert!((asymptotic_limit(0, 1, fin(1.0)).unwrap() - 1.0).abs() < 1e-15);
        let v = asymptotic_limit(0, 1, fin(2.0)).unwrap();
        assert!(rel(v, (2.0 * PI).powf(0.25) * 2f64.sqrt()) < 1e-14);
        assert!((v - 2.2390).abs() < 1e-4);
        let v = asymptotic_limit(1, 3, fin(2.0)).unwrap();
        assert!(rel(v, (2.0 * PI).sqrt() * 2.0) < 1e-14);
        assert!((v - 5.0133).abs() < 1e-4);
        assert!(asymptotic_limit(0, 1, Exponent::Infinite).is_err());
    }

    #[test]
    fn omega_asymptotics_at_large_n() {
        let n = 1_000_000usize;
        for (j, k) in [(0, 1), (0, 2), (1, 3), (2, 5)] {
            for p in [fin(1.0), fin(2.0), fin(4.0)] {
                let mut vals = Vec::new();
                for mu in [-0.5, 0.0, 2.5] {
                    let w = sharp_constant(ConstantKind::OmegaJKPMu { n, j, k, p, mu }).unwrap();
                    let scaled = w * (n as f64).powf((k - j) as f64 / 2.0 * p.dual_recip());
                    let lim = asymptotic_limit(j, k, p).unwrap();
                    assert!((scaled / lim - 1.0).abs() < 1e-3, "j={j} k={k} p={p:?} mu={mu}");
                    vals.push(scaled);
                }
            }
        }
    }

    #[test]
    fn funk_constant_matches_shifted_omega() {
        // c(n,j,k) = ω_{j−1,k−1,p,μ}(n−1) (σ_{j−1}/σ_{k−1})^{1/p′}.
        for (n, j, k) in [(3, 1, 2), (4, 1, 3), (4, 2, 3), (5, 2, 4)] {
            for p in [fin(1.0), fin(1.5), fin(3.0)] {
                let lo = k as f64 - n as f64 * p.recip() - j as f64 * p.dual_recip();
                let mu = lo + 0.3;
                let c = sharp_constant(ConstantKind::FunkWeightedC { n, j, k, p, mu }).unwrap();
                let w = sharp_constant(ConstantKind::OmegaJKPMu { n: n - 1, j: j - 1, k: k - 1, p, mu }).unwrap();
                let s = ((ln_sphere_area((j - 1) as f64) - ln_sphere_area((k - 1) as f64)) * p.dual_recip()).exp();
                assert!(rel(c, w * s) < 1e-12);
            }
        }
        let a = sharp_constant(ConstantKind::FunkTildeC1 { n: 3, k: 2, mu: -0.5 }).unwrap();
        let b = sharp_constant(ConstantKind::FunkWeightedC1 { n: 3, k: 2, p: fin(1.0), mu: -0.5 }).unwrap();
        assert!(rel(a, b) < 1e-14);
        assert!(rel(a, libm::tgamma(0.25) / (PI.sqrt() * libm::tgamma(0.75))) < 1e-13);
    }

    #[test]
    fn gardner_schneider_and_dpp() {
        let g = sharp_constant(ConstantKind::GardnerC { n: 2, k: 1 }).unwrap();
        assert!(rel(g, 3.0 / PI) < 1e-13);
        assert_eq!(g, sharp_constant(ConstantKind::DppC { n: 2, k: 1 }).unwrap());
        assert!(rel(sharp_constant(ConstantKind::GardnerC { n: 3, k: 3 }).unwrap(), 1.0) < 1e-13);
        // Schneider with m = n equals Gardner.
        for (n, k) in [(3, 1), (3, 2), (4, 2)] {
            let s = sharp_constant(ConstantKind::SchneiderC { n, k, m: n }).unwrap();
            let g = sharp_constant(ConstantKind::GardnerC { n, k }).unwrap();
            assert!(rel(s, g) < 1e-12);
        }
        // Ω_k(n)^{n+1} = 2^{k−n} σ_k^n / σ_n^k.
        let o = sharp_constant(ConstantKind::BigOmegaK { n: 3, k: 2 }).unwrap();
        assert!(rel(o.powi(4), 0.5 * sphere_area(2).powi(3) / sphere_area(3).powi(2)) < 1e-12);
    }

    #[test]
    fn overflow_is_reported() {
        let e = sharp_constant(ConstantKind::AsymptoticLimit { j: 0, k: 2000, p: fin(1e6) });
        assert_eq!(e, Err(Error::Overflow));
    }
}
