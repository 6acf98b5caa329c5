use statrs::distribution::{ContinuousCDF, StudentsT};

use crate::error::{Error, Result};

/// Default floor applied before taking logarithms.
pub const LOG_FLOOR: f64 = 1e-14;

/// Two-sided 97.5% Student-t quantile with `dof` degrees of freedom.
pub fn t_quantile(dof: usize) -> f64 {
    StudentsT::new(0.0, 1.0, dof as f64).map(|t| t.inverse_cdf(0.975)).unwrap_or(f64::INFINITY)
}

/// Ordinary least squares `y = intercept + slope·x`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LinearFit {
    pub slope: f64,
    pub intercept: f64,
    pub r_squared: f64,
    /// Half-width of the 95% confidence interval of the slope.
    pub slope_halfwidth: f64,
    pub points_used: usize,
}

impl LinearFit {
    pub fn ci(&self) -> (f64, f64) {
        (self.slope - self.slope_halfwidth, self.slope + self.slope_halfwidth)
    }

    pub fn ci_contains(&self, v: f64) -> bool {
        let (lo, hi) = self.ci();
        lo <= v && v <= hi
    }

    /// The fit of `k·y` against the same `x`.
    pub fn scaled(self, k: f64) -> Self {
        LinearFit {
            slope: k * self.slope,
            intercept: k * self.intercept,
            slope_halfwidth: k.abs() * self.slope_halfwidth,
            ..self
        }
    }
}

pub fn linear_fit(x: &[f64], y: &[f64]) -> Result<LinearFit> {
    if x.len() != y.len() {
        return Err(Error::Size(format!("{} abscissae but {} ordinates", x.len(), y.len())));
    }
    let n = x.len();
    if n < 3 {
        return Err(Error::FitNotAvailable(format!("{n} points, need at least 3")));
    }
    if x.iter().chain(y).any(|v| !v.is_finite()) {
        return Err(Error::FitNotAvailable("non-finite data".into()));
    }
    let nf = n as f64;
    let mx = x.iter().sum::<f64>() / nf;
    let my = y.iter().sum::<f64>() / nf;
    let sxx: f64 = x.iter().map(|a| (a - mx).powi(2)).sum();
    if !(sxx > 0.0) {
        return Err(Error::FitNotAvailable("all abscissae are equal".into()));
    }
    let sxy: f64 = x.iter().zip(y).map(|(a, b)| (a - mx) * (b - my)).sum();
    let slope = sxy / sxx;
    let intercept = my - slope * mx;
    let ss_res: f64 = x.iter().zip(y).map(|(a, b)| (b - intercept - slope * a).powi(2)).sum();
    let ss_tot: f64 = y.iter().map(|b| (b - my).powi(2)).sum();
    let r_squared = if ss_tot > 0.0 { (1.0 - ss_res / ss_tot).clamp(0.0, 1.0) } else { 1.0 };
    let se = (ss_res / (nf - 2.0) / sxx).sqrt();
    Ok(LinearFit { slope, intercept, r_squared, slope_halfwidth: t_quantile(n - 2) * se, points_used: n })
}

/// Exponential decay `mean ≈ e^{intercept − rate·d}` fitted on log scale.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DecayFit {
    /// Positive for decay, per unit distance.
    pub rate: f64,
    pub intercept: f64,
    pub r_squared: f64,
    pub rate_confidence_halfwidth: f64,
    pub points_used: usize,
    pub floor_applied: bool,
}

impl DecayFit {
    pub fn ci(&self) -> (f64, f64) {
        (self.rate - self.rate_confidence_halfwidth, self.rate + self.rate_confidence_halfwidth)
    }

    pub fn ci_excludes_zero(&self) -> bool {
        let (lo, hi) = self.ci();
        lo > 0.0 || hi < 0.0
    }

    /// Rate significantly above zero.
    pub fn decays(&self) -> bool {
        self.rate > 0.0 && self.ci().0 > 0.0
    }
}

pub fn fit_exponential_decay(distances: &[f64], means: &[f64], floor: f64) -> Result<DecayFit> {
    if !(floor > 0.0) {
        return Err(Error::Config(format!("log floor must be positive, got {floor}")));
    }
    let mut floor_applied = false;
    let logs: Vec<f64> = means
        .iter()
        .map(|&m| {
            if !(m >= floor) {
                floor_applied = true;
            }
            m.max(floor).ln()
        })
        .collect();
    let f = linear_fit(distances, &logs)?;
    Ok(DecayFit {
        rate: -f.slope,
        intercept: f.intercept,
        r_squared: f.r_squared,
        rate_confidence_halfwidth: f.slope_halfwidth,
        points_used: f.points_used,
        floor_applied,
    })
}

/// Mean of independent estimates with a 95% t-interval.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MeanEstimate {
    pub mean: f64,
    pub halfwidth: f64,
    pub count: usize,
}

impl MeanEstimate {
    pub fn ci(&self) -> (f64, f64) {
        (self.mean - self.halfwidth, self.mean + self.halfwidth)
    }

    pub fn ci_contains(&self, v: f64) -> bool {
        let (lo, hi) = self.ci();
        lo <= v && v <= hi
    }

    pub fn scaled(self, k: f64) -> Self {
        MeanEstimate { mean: k * self.mean, halfwidth: k.abs() * self.halfwidth, ..self }
    }
}

pub fn mean_estimate(values: &[f64]) -> Result<MeanEstimate> {
    let n = values.len();
    if n < 2 {
        return Err(Error::FitNotAvailable(format!("{n} estimates, need at least 2")));
    }
    let (mean, se) = mean_and_stderr(values);
    Ok(MeanEstimate { mean, halfwidth: t_quantile(n - 1) * se, count: n })
}

/// Mean and `sample-std/√n` (zero for a single value), summed in the given order.
pub fn mean_and_stderr(values: &[f64]) -> (f64, f64) {
    let n = values.len();
    if n == 0 {
        return (f64::NAN, f64::NAN);
    }
    let nf = n as f64;
    let mean = values.iter().sum::<f64>() / nf;
    if n == 1 {
        return (mean, 0.0);
    }
    let var = values.iter().map(|v| (v - mean).powi(2)).sum::<f64>() / (nf - 1.0);
    (mean, (var / nf).sqrt())
}
