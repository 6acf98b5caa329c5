//! Disorder ensembles, summary statistics and decay-law fits.

mod bands;
mod config;
mod fit;
mod metrics;
mod summary;
mod table;

pub use bands::*;
pub use config::*;
pub use fit::*;
pub use metrics::{measure, RealizationContext};
pub use summary::*;
pub use table::*;

use rayon::prelude::*;

use crate::error::{config as config_error, Error, Result};

/// Redraws allowed per realization after degeneracy errors.
pub const MAX_SUBSTITUTIONS: u32 = 16;

/// Runs one realization, redrawing with flagged substitute seeds on degeneracy.
pub fn run_realization(config: &ExperimentConfig, index: usize) -> Result<(SeedRecord, Vec<Observation>)> {
    let mut attempt = 0u32;
    loop {
        let seed = if attempt == 0 {
            config.seeds.stream_seed(index as u64)
        } else {
            config.seeds.substitute_seed(index as u64, attempt as u64)
        };
        let ctx = RealizationContext { config, index, seed };
        match measure(&ctx) {
            Ok(obs) => return Ok((SeedRecord { index, seed, attempt }, obs)),
            Err(Error::Degenerate { .. }) if ctx.is_random() && attempt < MAX_SUBSTITUTIONS => attempt += 1,
            Err(e) => return Err(Error::Realization { index, source: Box::new(e) }),
        }
    }
}

pub fn run_ensemble(config: &ExperimentConfig) -> Result<EnsembleSummary> {
    config.validate()?;
    let results: Vec<_> = (0..config.realizations).into_par_iter().map(|i| run_realization(config, i)).collect();
    let failed = results.iter().filter(|r| r.is_err()).count();
    let mut seeds = Vec::with_capacity(results.len());
    let mut obs = Vec::with_capacity(results.len());
    for r in results {
        match r {
            Ok((s, o)) => {
                seeds.push(s);
                obs.push(o);
            }
            Err(Error::Realization { index, source }) if failed > 1 => {
                return Err(Error::Realization {
                    index,
                    source: Box::new(Error::Numerical(format!(
                        "{source} (and {} more failed realizations)",
                        failed - 1
                    ))),
                })
            }
            Err(e) => return Err(e),
        }
    }
    Ok(EnsembleSummary::from_observations(config, seeds, obs))
}

/// Area-law scan: per-ℓ statistics plus the coefficient of the log regressor.
#[derive(Debug, Clone, PartialEq)]
pub struct AreaLawScan {
    pub summary: EnsembleSummary,
    pub series: &'static str,
    /// OLS of the mean entropy against the regressor.
    pub fit: LinearFit,
    /// Mean of per-realization slopes (needs at least two realizations).
    pub slope: Option<MeanEstimate>,
}

/// The entropy series of an area-law kind.
pub fn entropy_series(kind: ExperimentKind) -> Result<&'static str> {
    match kind {
        ExperimentKind::XyAreaLaw | ExperimentKind::IsingLogLaw => Ok("entropy"),
        ExperimentKind::XyQuench | ExperimentKind::XxzAreaLaw => Ok("entropy_max"),
        _ => Err(config_error(format!("{kind} is not an entropy scan"))),
    }
}

/// `ℓ ↦ log ℓ` or the chord form, in base 2 when `log2` is set.
pub fn regressor_fn(config: &ExperimentConfig) -> impl Fn(f64) -> f64 {
    let base = if config.log2 { std::f64::consts::LN_2 } else { 1.0 };
    let chord = config.regressor == Regressor::Chord;
    let n = config.sites() as f64;
    move |ell: f64| {
        let x = if chord { (n / std::f64::consts::PI) * (std::f64::consts::PI * ell / n).sin() } else { ell };
        x.ln() / base
    }
}

pub fn scan_area_law(config: &ExperimentConfig) -> Result<AreaLawScan> {
    AreaLawScan::from_summary(config, run_ensemble(config)?)
}

impl AreaLawScan {
    /// Fits an already computed ensemble. With `log2` set the entropy is converted to
    /// bits as well, so the coefficient is bits per doubling (equal to nats per e-fold).
    pub fn from_summary(config: &ExperimentConfig, summary: EnsembleSummary) -> Result<AreaLawScan> {
        let series = entropy_series(config.kind)?;
        let reg = regressor_fn(config);
        let unit = if config.log2 { 1.0 / std::f64::consts::LN_2 } else { 1.0 };
        let fit = summary.regress(series, &reg)?.scaled(unit);
        let slope = if summary.realizations >= 2 {
            summary.per_realization_slope(series, &reg).ok().map(|m| m.scaled(unit))
        } else {
            None
        };
        Ok(AreaLawScan { summary, series, fit, slope })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn single_realization_matches_engine() {
        let mut c = ExperimentConfig::new(ExperimentKind::XyEigencorrelator);
        c.length = 12;
        c.realizations = 1;
        c.distances = vec![1, 2, 3];
        let s = run_ensemble(&c).unwrap();
        let f = crate::disorder::sample_field(&c.disorder, 12, &c.seeds, 0).unwrap();
        let es = crate::xy::diagonalize(&crate::xy::build_m(&f).unwrap()).unwrap();
        let j = c.reference_site();
        let direct = crate::xy::eigencorrelator(&es, j, j + 2).unwrap();
        assert_eq!(s.series("eigencorrelator").unwrap().at(2.0).unwrap().mean, direct);
    }

    #[test]
    fn ensembles_are_deterministic() {
        let mut c = ExperimentConfig::new(ExperimentKind::XyKernel);
        c.length = 16;
        c.realizations = 4;
        c.time_grid = TimeGrid::new(0.0, 10.0, 16);
        assert_eq!(run_ensemble(&c).unwrap(), run_ensemble(&c).unwrap());
    }
}
