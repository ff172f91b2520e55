//! Counter-based random streams.
//!
//! A [`Stream`] is a key derived from `(seed, label)`. The generator for
//! sample index `i` is a pure function of the key and `i`, so any partition
//! of the index space across workers reproduces the same draws.

#[allow(unused_imports)]
use num_traits::Float;
use rand_core::{impls, Error as RngError, RngCore};
use rand_distr::{Distribution, StandardNormal};

const GOLDEN: u64 = 0x9E37_79B9_7F4A_7C15;

#[inline]
fn mix(mut z: u64) -> u64 {
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

fn fnv1a(label: &str) -> u64 {
    let mut h: u64 = 0xcbf2_9ce4_8422_2325;
    for b in label.bytes() {
        h ^= u64::from(b);
        h = h.wrapping_mul(0x0000_0100_0000_01B3);
    }
    h
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Stream {
    key: u64,
}

impl Stream {
    pub fn new(seed: u64, label: &str) -> Self {
        Stream { key: mix(mix(seed) ^ fnv1a(label)) }
    }

    /// Independent child stream, e.g. one per side of a comparison.
    pub fn derive(&self, label: &str) -> Self {
        Stream { key: mix(self.key ^ fnv1a(label).rotate_left(17)) }
    }

    pub fn derive_index(&self, index: u64) -> Self {
        Stream { key: mix(self.key.wrapping_add(mix(index ^ 0xD1B5_4A32_D192_ED03))) }
    }

    /// Generator for one sample index.
    pub fn sample(&self, index: u64) -> SampleRng {
        SampleRng { state: mix(self.key ^ mix(index.wrapping_add(0x632B_E59B_D9B4_E019))) }
    }
}

/// SplitMix64 sequence seeded from one stream position.
#[derive(Debug, Clone)]
pub struct SampleRng {
    state: u64,
}

impl SampleRng {
    #[inline]
    #[allow(clippy::should_implement_trait)]
    pub fn next(&mut self) -> u64 {
        self.state = self.state.wrapping_add(GOLDEN);
        mix(self.state)
    }

    /// Uniform on the open interval (0, 1).
    #[inline]
    pub fn uniform(&mut self) -> f64 {
        ((self.next() >> 11) as f64 + 0.5) * (1.0 / (1u64 << 53) as f64)
    }

    #[inline]
    pub fn normal(&mut self) -> f64 {
        StandardNormal.sample(self)
    }

    pub fn sign(&mut self) -> f64 {
        if self.next() >> 63 == 0 {
            1.0
        } else {
            -1.0
        }
    }

    pub fn fill_normal(&mut self, out: &mut [f64]) {
        for x in out.iter_mut() {
            *x = self.normal();
        }
    }

    /// Uniform point on the unit sphere of ℝ^d written into `out`.
    pub fn unit_vector(&mut self, out: &mut [f64]) {
        loop {
            self.fill_normal(out);
            let n2: f64 = out.iter().map(|x| x * x).sum();
            if n2 > 1e-300 {
                let inv = 1.0 / n2.sqrt();
                out.iter_mut().for_each(|x| *x *= inv);
                return;
            }
        }
    }
}

impl RngCore for SampleRng {
    fn next_u32(&mut self) -> u32 {
        (self.next() >> 32) as u32
    }
    fn next_u64(&mut self) -> u64 {
        self.next()
    }
    fn fill_bytes(&mut self, dest: &mut [u8]) {
        impls::fill_bytes_via_next(self, dest)
    }
    fn try_fill_bytes(&mut self, dest: &mut [u8]) -> Result<(), RngError> {
        self.fill_bytes(dest);
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn sample_is_pure_function_of_index() {
        let s = Stream::new(7, "x");
        let a: [u64; 4] = core::array::from_fn(|_| s.sample(12345).next());
        assert!(a.iter().all(|&v| v == a[0]));
        let mut r1 = s.sample(3);
        let mut r2 = Stream::new(7, "x").sample(3);
        for _ in 0..10 {
            assert_eq!(r1.next(), r2.next());
        }
    }

    #[test]
    fn labels_and_seeds_separate_streams() {
        let a = Stream::new(1, "lhs").sample(0).next();
        let b = Stream::new(1, "rhs").sample(0).next();
        let c = Stream::new(2, "lhs").sample(0).next();
        assert_ne!(a, b);
        assert_ne!(a, c);
        assert_ne!(Stream::new(1, "a").derive("b"), Stream::new(1, "a").derive("c"));
    }

    #[test]
    fn uniform_moments() {
        let s = Stream::new(3, "u");
        let n = 200_000u64;
        let (mut m1, mut m2) = (0.0, 0.0);
        for i in 0..n {
            let u = s.sample(i).uniform();
            assert!(u > 0.0 && u < 1.0);
            m1 += u;
            m2 += u * u;
        }
        m1 /= n as f64;
        m2 /= n as f64;
        assert!((m1 - 0.5).abs() < 3e-3);
        assert!((m2 - 1.0 / 3.0).abs() < 3e-3);
    }

    #[test]
    fn normal_moments() {
        let s = Stream::new(4, "n");
        let n = 200_000u64;
        let (mut m1, mut m2) = (0.0, 0.0);
        for i in 0..n {
            let z = s.sample(i).normal();
            m1 += z;
            m2 += z * z;
        }
        assert!((m1 / n as f64).abs() < 1e-2);
        assert!((m2 / n as f64 - 1.0).abs() < 1.5e-2);
    }
}
