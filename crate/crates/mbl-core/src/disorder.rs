//! Random fields: distributions, seed derivation and sampling.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{config, Result};

#[derive(Debug, Clone, PartialEq)]
pub enum DisorderKind {
    Uniform,
    /// Every site gets `support_min`.
    Constant,
    /// Piecewise-constant density on equal-width bins spanning the support.
    DensityTable(Vec<f64>),
}

#[derive(Debug, Clone, PartialEq)]
pub struct DisorderSpec {
    pub kind: DisorderKind,
    pub support_min: f64,
    pub support_max: f64,
    /// Multiplier applied to every sampled value.
    pub coupling: f64,
}

impl Default for DisorderSpec {
    fn default() -> Self {
        DisorderSpec::uniform(0.0, 1.0)
    }
}

impl DisorderSpec {
    pub fn uniform(lo: f64, hi: f64) -> Self {
        DisorderSpec { kind: DisorderKind::Uniform, support_min: lo, support_max: hi, coupling: 1.0 }
    }

    pub fn constant(h: f64) -> Self {
        DisorderSpec { kind: DisorderKind::Constant, support_min: h, support_max: h, coupling: 1.0 }
    }

    pub fn with_coupling(mut self, coupling: f64) -> Self {
        self.coupling = coupling;
        self
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.coupling >= 0.0) || !self.coupling.is_finite() {
            return Err(config(format!("coupling must be a finite nonnegative number, got {}", self.coupling)));
        }
        if !self.support_min.is_finite() || !self.support_max.is_finite() {
            return Err(config("support bounds must be finite"));
        }
        match &self.kind {
            DisorderKind::Constant => {}
            DisorderKind::Uniform => {
                if !(self.support_max > self.support_min) {
                    return Err(config(format!("empty support [{}, {}]", self.support_min, self.support_max)));
                }
            }
            DisorderKind::DensityTable(w) => {
                if !(self.support_max > self.support_min) {
                    return Err(config("empty support for density table"));
                }
                if w.is_empty() || w.iter().any(|&x| !(x >= 0.0)) {
                    return Err(config("density table entries must be nonnegative"));
                }
                let total: f64 = w.iter().sum();
                if (total - 1.0).abs() > 1e-12 {
                    return Err(config(format!("density table mass is {total}, expected 1")));
                }
            }
        }
        Ok(())
    }

    /// True when every sample is guaranteed to be >= 0.
    pub fn is_nonnegative(&self) -> bool {
        self.coupling * self.support_min >= 0.0
    }

    fn draw(&self, rng: &mut ChaCha8Rng) -> f64 {
        let (a, b) = (self.support_min, self.support_max);
        let x = match &self.kind {
            DisorderKind::Constant => a,
            DisorderKind::Uniform => a + (b - a) * rng.random::<f64>(),
            DisorderKind::DensityTable(w) => {
                let u: f64 = rng.random();
                let width = (b - a) / w.len() as f64;
                let mut acc = 0.0;
                let mut x = b;
                for (k, &p) in w.iter().enumerate() {
                    if p > 0.0 && u < acc + p {
                        x = a + width * (k as f64 + (u - acc) / p);
                        break;
                    }
                    acc += p;
                }
                x.clamp(a, b)
            }
        };
        self.coupling * x
    }
}

const GOLDEN_GAMMA: u64 = 0x9e37_79b9_7f4a_7c15;

/// splitmix64 finalizer; a bijection on u64.
fn mix64(mut z: u64) -> u64 {
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    z ^ (z >> 31)
}

/// Ensemble seed plan. Stream seeds are `mix64(base + (index + 1) * GOLDEN_GAMMA)`, which is
/// injective in `index` for a fixed base because the increment is odd and `mix64` is a bijection.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SeedPlan {
    pub base_seed: u64,
}

impl SeedPlan {
    pub fn new(base_seed: u64) -> Self {
        SeedPlan { base_seed }
    }

    pub fn stream_seed(&self, index: u64) -> u64 {
        mix64(self.base_seed.wrapping_add(index.wrapping_add(1).wrapping_mul(GOLDEN_GAMMA)))
    }

    /// Seed used when realization `index` has to be redrawn for the `attempt`-th time (attempt >= 1).
    /// Lives above the 2^32 index range so it never collides with a regular stream.
    pub fn substitute_seed(&self, index: u64, attempt: u64) -> u64 {
        self.stream_seed((attempt << 32) | (index & 0xffff_ffff))
    }

    /// Deterministic auxiliary generator for realization `index` (patterns, sample sets...).
    pub fn aux_rng(&self, index: u64, stream: u64) -> ChaCha8Rng {
        let mut rng = ChaCha8Rng::seed_from_u64(self.stream_seed(index));
        rng.set_stream(stream + 1);
        rng
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct FieldRealization {
    pub values: Vec<f64>,
    pub seed: u64,
    pub realization_index: u64,
}

impl FieldRealization {
    pub fn from_values(values: Vec<f64>) -> Self {
        FieldRealization { values, seed: 0, realization_index: 0 }
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }
}

pub fn sample_field(spec: &DisorderSpec, length: usize, plan: &SeedPlan, index: u64) -> Result<FieldRealization> {
    sample_field_seeded(spec, length, plan.stream_seed(index), index)
}

/// Sampling from an explicit stream seed (used for substitute draws).
pub fn sample_field_seeded(spec: &DisorderSpec, length: usize, seed: u64, index: u64) -> Result<FieldRealization> {
    if length == 0 {
        return Err(config("field length must be at least 1"));
    }
    spec.validate()?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let values = (0..length).map(|_| spec.draw(&mut rng)).collect();
    Ok(FieldRealization { values, seed, realization_index: index })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn constant_field() {
        let f = sample_field(&DisorderSpec::constant(0.7), 3, &SeedPlan::new(1), 0).unwrap();
        assert_eq!(f.values, vec![0.7; 3]);
    }

    #[test]
    fn zero_coupling_gives_zeros() {
        let s = DisorderSpec::uniform(0.0, 1.0).with_coupling(0.0);
        let f = sample_field(&s, 5, &SeedPlan::new(9), 2).unwrap();
        assert!(f.values.iter().all(|&x| x == 0.0));
    }

    #[test]
    fn mean_and_lag_one_autocorrelation() {
        let n = 100_000;
        let f = sample_field(&DisorderSpec::uniform(0.0, 1.0), n, &SeedPlan::new(2024), 0).unwrap();
        let mean = f.values.iter().sum::<f64>() / n as f64;
        let sigma = (1.0f64 / 12.0).sqrt();
        assert!((mean - 0.5).abs() < 3.0 * sigma / (n as f64).sqrt());
        let var = f.values.iter().map(|x| (x - mean).powi(2)).sum::<f64>();
        let cov = f.values.windows(2).map(|w| (w[0] - mean) * (w[1] - mean)).sum::<f64>();
        assert!((cov / var).abs() < 0.01);
    }

    #[test]
    fn invalid_specs_rejected() {
        assert!(DisorderSpec::uniform(1.0, 1.0).validate().is_err());
        assert!(DisorderSpec::uniform(0.0, 1.0).with_coupling(-1.0).validate().is_err());
        let t = DisorderSpec { kind: DisorderKind::DensityTable(vec![0.5, 0.4]), ..DisorderSpec::default() };
        assert!(t.validate().is_err());
    }

    #[test]
    fn density_table_respects_bins() {
        let t =
            DisorderSpec { kind: DisorderKind::DensityTable(vec![0.0, 1.0, 0.0]), ..DisorderSpec::uniform(0.0, 3.0) };
        let f = sample_field(&t, 1000, &SeedPlan::new(5), 0).unwrap();
        assert!(f.values.iter().all(|&x| (1.0..=2.0).contains(&x)));
    }

    #[test]
    fn substitute_seeds_do_not_collide() {
        let p = SeedPlan::new(77);
        assert_ne!(p.substitute_seed(3, 1), p.stream_seed(3));
        assert_ne!(p.substitute_seed(3, 1), p.substitute_seed(3, 2));
    }
}
