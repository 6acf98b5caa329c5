use super::config::{ExperimentConfig, ExperimentKind};
use super::fit::{self, DecayFit, LinearFit, MeanEstimate, LOG_FLOOR};
use crate::error::{Error, Result};

/// One number produced by one realization.
#[derive(Debug, Clone, PartialEq)]
pub struct Observation {
    pub series: &'static str,
    pub x: f64,
    pub value: f64,
}

impl Observation {
    pub fn new(series: &'static str, x: f64, value: f64) -> Self {
        Observation { series, x, value }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Sample {
    pub realization: usize,
    pub series: String,
    pub x: f64,
    pub value: f64,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SeriesPoint {
    pub x: f64,
    pub mean: f64,
    pub std_err: f64,
    pub count: usize,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Series {
    pub name: String,
    pub points: Vec<SeriesPoint>,
}

impl Series {
    pub fn xs(&self) -> Vec<f64> {
        self.points.iter().map(|p| p.x).collect()
    }

    pub fn means(&self) -> Vec<f64> {
        self.points.iter().map(|p| p.mean).collect()
    }

    pub fn at(&self, x: f64) -> Option<&SeriesPoint> {
        self.points.iter().find(|p| p.x == x)
    }
}

/// Seed actually used for a realization.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SeedRecord {
    pub index: usize,
    pub seed: u64,
    /// 0 for the regular stream, otherwise the substitute attempt.
    pub attempt: u32,
}

#[derive(Debug, Clone, PartialEq)]
pub struct EnsembleSummary {
    pub config: ExperimentConfig,
    pub kind: ExperimentKind,
    pub abscissa: &'static str,
    pub series: Vec<Series>,
    pub realizations: usize,
    /// Realizations redrawn after a degeneracy.
    pub substitutions: usize,
    pub seeds: Vec<SeedRecord>,
    pub samples: Vec<Sample>,
}

impl EnsembleSummary {
    /// Aggregates per-realization observations (indexed by realization).
    pub fn from_observations(config: &ExperimentConfig, seeds: Vec<SeedRecord>, obs: Vec<Vec<Observation>>) -> Self {
        let mut names: Vec<&'static str> = Vec::new();
        for o in obs.iter().flatten() {
            if !names.contains(&o.series) {
                names.push(o.series);
            }
        }
        let mut series = Vec::with_capacity(names.len());
        for name in &names {
            let mut xs: Vec<f64> = obs.iter().flatten().filter(|o| o.series == *name).map(|o| o.x).collect();
            xs.sort_by(f64::total_cmp);
            xs.dedup();
            let points = xs
                .into_iter()
                .map(|x| {
                    // summation order fixed by realization index
                    let vals: Vec<f64> = obs
                        .iter()
                        .flat_map(|r| r.iter().filter(|o| o.series == *name && o.x == x).map(|o| o.value))
                        .collect();
                    let (mean, std_err) = fit::mean_and_stderr(&vals);
                    SeriesPoint { x, mean, std_err, count: vals.len() }
                })
                .collect();
            series.push(Series { name: name.to_string(), points });
        }
        let samples = obs
            .iter()
            .enumerate()
            .flat_map(|(i, r)| {
                r.iter().map(move |o| Sample { realization: i, series: o.series.to_string(), x: o.x, value: o.value })
            })
            .collect();
        EnsembleSummary {
            config: config.clone(),
            kind: config.kind,
            abscissa: config.kind.abscissa(),
            series,
            realizations: obs.len(),
            substitutions: seeds.iter().filter(|s| s.attempt > 0).count(),
            seeds,
            samples,
        }
    }

    pub fn series(&self, name: &str) -> Result<&Series> {
        self.series
            .iter()
            .find(|s| s.name == name)
            .ok_or_else(|| Error::FitNotAvailable(format!("no series `{name}` in {}", self.kind)))
    }

    /// Raw values of one series at one abscissa, in realization order.
    pub fn values_at(&self, name: &str, x: f64) -> Vec<f64> {
        self.samples.iter().filter(|s| s.series == name && s.x == x).map(|s| s.value).collect()
    }

    /// Exponential decay fit of a series' means over the fit window (mean above `10·ε`,
    /// at least `min(5, R)` contributing realizations).
    pub fn decay_fit(&self, name: &str) -> Result<DecayFit> {
        let s = self.series(name)?;
        let need = self.realizations.min(5);
        let pts: Vec<_> = s.points.iter().filter(|p| p.mean > 10.0 * LOG_FLOOR && p.count >= need).collect();
        let x: Vec<f64> = pts.iter().map(|p| p.x).collect();
        let y: Vec<f64> = pts.iter().map(|p| p.mean).collect();
        fit::fit_exponential_decay(&x, &y, LOG_FLOOR)
    }

    /// OLS of the series' means against `regressor(x)`.
    pub fn regress(&self, name: &str, regressor: impl Fn(f64) -> f64) -> Result<LinearFit> {
        let s = self.series(name)?;
        let x: Vec<f64> = s.points.iter().map(|p| regressor(p.x)).collect();
        fit::linear_fit(&x, &s.means())
    }

    /// Per-realization OLS slopes against `regressor(x)`, then their mean with a t-interval.
    pub fn per_realization_slope(&self, name: &str, regressor: impl Fn(f64) -> f64) -> Result<MeanEstimate> {
        let mut slopes = Vec::with_capacity(self.realizations);
        for r in 0..self.realizations {
            let (x, y): (Vec<f64>, Vec<f64>) = self
                .samples
                .iter()
                .filter(|s| s.realization == r && s.series == name)
                .map(|s| (regressor(s.x), s.value))
                .unzip();
            if x.len() >= 3 {
                slopes.push(fit::linear_fit(&x, &y)?.slope);
            }
        }
        fit::mean_estimate(&slopes)
    }

    /// Per-realization exponential rates, then their mean with a t-interval.
    pub fn per_realization_rate(&self, name: &str) -> Result<MeanEstimate> {
        let mut rates = Vec::with_capacity(self.realizations);
        for r in 0..self.realizations {
            let (x, y): (Vec<f64>, Vec<f64>) =
                self.samples.iter().filter(|s| s.realization == r && s.series == name).map(|s| (s.x, s.value)).unzip();
            if x.len() >= 3 {
                rates.push(fit::fit_exponential_decay(&x, &y, LOG_FLOOR)?.rate);
            }
        }
        fit::mean_estimate(&rates)
    }
}
