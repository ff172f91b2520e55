//! Monte-Carlo estimates and block-partitioned execution.
//!
//! Sample indices are grouped into fixed blocks of [`BLOCK`] indices. Each
//! block is reduced to [`Moments`] and the blocks are merged in index order,
//! so the floating-point result is the same whether one worker or many
//! computed the blocks.

use alloc::vec::Vec;
#[allow(unused_imports)]
use num_traits::Float;

use crate::error::{Error, Result};

pub const BLOCK: u64 = 1024;

/// Per-sample relative spread treated as floating-point noise.
const ROUNDING_SPREAD: f64 = 1e-12;

/// Running count, mean and centered second moment.
#[derive(Debug, Clone, Copy, Default, PartialEq)]
pub struct Moments {
    pub count: u64,
    pub mean: f64,
    pub m2: f64,
    pub non_finite: u64,
}

impl Moments {
    #[inline]
    pub fn push(&mut self, x: f64) {
        if !x.is_finite() {
            self.non_finite += 1;
            return;
        }
        self.count += 1;
        let delta = x - self.mean;
        self.mean += delta / self.count as f64;
        self.m2 += delta * (x - self.mean);
    }

    pub fn merge(&mut self, other: &Moments) {
        self.non_finite += other.non_finite;
        if other.count == 0 {
            return;
        }
        if self.count == 0 {
            let nf = self.non_finite;
            *self = *other;
            self.non_finite = nf;
            return;
        }
        let n = self.count + other.count;
        let delta = other.mean - self.mean;
        let w = other.count as f64 / n as f64;
        self.mean += delta * w;
        self.m2 += other.m2 + delta * delta * self.count as f64 * w;
        self.count = n;
    }

    /// Standard error of the mean. A spread at rounding level is reported as 0,
    /// since its low bits depend on how the integrand was compiled.
    pub fn stderr(&self) -> f64 {
        if self.count < 2 {
            return 0.0;
        }
        let var = (self.m2 / (self.count - 1) as f64).max(0.0);
        if var.sqrt() <= ROUNDING_SPREAD * self.mean.abs() {
            return 0.0;
        }
        (var / self.count as f64).sqrt()
    }
}

/// A numerical value with its standard error and sample count.
#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct Estimate {
    pub value: f64,
    pub stderr: f64,
    pub samples_used: u64,
}

impl Estimate {
    pub fn exact(value: f64) -> Self {
        Estimate { value, stderr: 0.0, samples_used: 0 }
    }

    pub fn from_moments(m: &Moments) -> Self {
        Estimate { value: m.mean, stderr: m.stderr(), samples_used: m.count }
    }

    pub fn scale(self, c: f64) -> Self {
        Estimate { value: self.value * c, stderr: self.stderr * c.abs(), ..self }
    }

    /// `value^e` with a first-order (delta method) standard error.
    pub fn powf(self, e: f64) -> Self {
        let v = self.value.abs().powf(e);
        let d = if self.value == 0.0 { 0.0 } else { e.abs() * v / self.value.abs() };
        Estimate { value: v, stderr: d * self.stderr, ..self }
    }

    /// Adds a systematic (quadrature) error budget in quadrature with the
    /// statistical one.
    pub fn with_systematic(self, sys: f64) -> Self {
        Estimate { stderr: self.stderr.hypot(sys.abs()), ..self }
    }

    pub fn relative_error(&self) -> f64 {
        if self.value == 0.0 {
            if self.stderr == 0.0 {
                0.0
            } else {
                f64::INFINITY
            }
        } else {
            self.stderr / self.value.abs()
        }
    }
}

/// Sum of independent estimates.
impl core::ops::Add for Estimate {
    type Output = Estimate;

    fn add(self, other: Estimate) -> Estimate {
        Estimate {
            value: self.value + other.value,
            stderr: self.stderr.hypot(other.stderr),
            samples_used: self.samples_used + other.samples_used,
        }
    }
}

/// Difference of independent estimates.
impl core::ops::Sub for Estimate {
    type Output = Estimate;

    fn sub(self, other: Estimate) -> Estimate {
        Estimate {
            value: self.value - other.value,
            stderr: self.stderr.hypot(other.stderr),
            samples_used: self.samples_used + other.samples_used,
        }
    }
}

/// Runs independent blocks of work, possibly in parallel.
///
/// Implementations must return the block results in block order.
pub trait Executor: Sync {
    fn map_blocks(&self, blocks: usize, job: &(dyn Fn(usize) -> Moments + Sync)) -> Vec<Moments>;
}

/// Runs every block on the calling thread.
#[derive(Debug, Clone, Copy, Default)]
pub struct Sequential;

impl Executor for Sequential {
    fn map_blocks(&self, blocks: usize, job: &(dyn Fn(usize) -> Moments + Sync)) -> Vec<Moments> {
        (0..blocks).map(job).collect()
    }
}

/// Mean of `sample(i)` over `i in 0..samples`.
pub fn mean_estimate<F>(exec: &dyn Executor, samples: u64, sample: F) -> Result<Estimate>
where
    F: Fn(u64) -> f64 + Sync,
{
    mean_estimate_strided(exec, samples, 1, sample)
}

/// Mean of `sample(i)` over `i = 0, stride, 2·stride, …` below `samples·stride`.
pub fn mean_estimate_strided<F>(exec: &dyn Executor, samples: u64, stride: u64, sample: F) -> Result<Estimate>
where
    F: Fn(u64) -> f64 + Sync,
{
    if samples == 0 {
        return Err(Error::Invalid("sample count must be at least 1".into()));
    }
    let blocks = samples.div_ceil(BLOCK) as usize;
    let job = |b: usize| {
        let start = b as u64 * BLOCK;
        let end = (start + BLOCK).min(samples);
        let mut m = Moments::default();
        for i in start..end {
            m.push(sample(i * stride));
        }
        m
    };
    let parts = exec.map_blocks(blocks, &job);
    let mut total = Moments::default();
    for p in &parts {
        total.merge(p);
    }
    if total.non_finite > 0 {
        return Err(Error::NonFinite);
    }
    Ok(Estimate::from_moments(&total))
}

#[cfg(test)]
mod tests {
    use super::*;

    struct Reversed;
    impl Executor for Reversed {
        fn map_blocks(&self, blocks: usize, job: &(dyn Fn(usize) -> Moments + Sync)) -> Vec<Moments> {
            let mut out: Vec<Moments> = (0..blocks).rev().map(job).collect();
            out.reverse();
            out
        }
    }

    #[test]
    fn merged_moments_match_single_pass() {
        let xs: Vec<f64> = (0..5000).map(|i| ((i * 37) % 101) as f64 * 0.1).collect();
        let mut whole = Moments::default();
        xs.iter().for_each(|&x| whole.push(x));
        let mut merged = Moments::default();
        for chunk in xs.chunks(333) {
            let mut m = Moments::default();
            chunk.iter().for_each(|&x| m.push(x));
            merged.merge(&m);
        }
        assert_eq!(whole.count, merged.count);
        assert!((whole.mean - merged.mean).abs() < 1e-12);
        assert!((whole.m2 - merged.m2).abs() < 1e-8 * whole.m2);
    }

    #[test]
    fn execution_order_does_not_change_result() {
        let f = |i: u64| ((i as f64) * 0.731).sin();
        let a = mean_estimate(&Sequential, 10_000, f).unwrap();
        let b = mean_estimate(&Reversed, 10_000, f).unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn rounding_noise_has_zero_stderr() {
        let e = mean_estimate(&Sequential, 4096, |i| 0.75 + if i % 2 == 0 { 1e-16 } else { 0.0 }).unwrap();
        assert_eq!(e.stderr, 0.0);
        let e = mean_estimate(&Sequential, 4096, |i| 0.75 + if i % 2 == 0 { 1e-6 } else { 0.0 }).unwrap();
        assert!(e.stderr > 0.0);
    }

    #[test]
    fn non_finite_samples_are_reported() {
        let e = mean_estimate(&Sequential, 10, |i| if i == 3 { f64::NAN } else { 1.0 });
        assert_eq!(e, Err(Error::NonFinite));
    }

    #[test]
    fn delta_method_power() {
        let e = Estimate { value: 4.0, stderr: 0.1, samples_used: 10 }.powf(0.5);
        assert!((e.value - 2.0).abs() < 1e-15);
        assert!((e.stderr - 0.025).abs() < 1e-15);
    }
}
