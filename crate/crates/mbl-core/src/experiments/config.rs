use std::fmt;
use std::str::FromStr;

use crate::disorder::{DisorderKind, DisorderSpec, SeedPlan};
use crate::error::{config, Error, Result};
use crate::oracle::{SiteKind, SITE_CAP};
use crate::xxz::{self, WindowKind, XxzParams};

/// One experiment per measured statement.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum ExperimentKind {
    /// Eigencorrelator `Σ|φ(j)||φ(k)|` vs distance.
    XyEigencorrelator,
    /// `max_t |(e^{-itM})_{jk}|` vs distance.
    XyKernel,
    /// Eigenstate (or ground-state) block entropy vs block length.
    XyAreaLaw,
    /// Entropy after a local quench from subsystem eigenstates, max over the time grid.
    XyQuench,
    /// Block matrix of the anisotropic chain: eigencorrelator and density near zero.
    XyAnisotropic,
    /// Eigenvector mass vs distance from the droplets.
    XxzDropletDecay,
    /// Window-eigenstate entropy vs cut position (full chain).
    XxzAreaLaw,
    /// `Σ_E ‖𝒩_jψ_E‖‖𝒩_kψ_E‖` over all sectors vs `|j−k|`.
    XxzDropletLocalization,
    /// Windowed eigenstate correlations vs distance.
    XxzClustering,
    /// Resolvent block norm against its exponential bound.
    XxzCombesThomas,
    /// Commutator norms in the XY chain.
    LightConeXy,
    /// Windowed commutator norms in the XXZ chain.
    LightConeXxz,
    /// Windowed error of the local approximant of `τ_t(X)` vs support growth.
    QuasiLocality,
    /// Entropy of the droplet superposition vs droplet length.
    IsingLogLaw,
}

impl ExperimentKind {
    pub const ALL: [ExperimentKind; 14] = [
        ExperimentKind::XyEigencorrelator,
        ExperimentKind::XyKernel,
        ExperimentKind::XyAreaLaw,
        ExperimentKind::XyQuench,
        ExperimentKind::XyAnisotropic,
        ExperimentKind::XxzDropletDecay,
        ExperimentKind::XxzAreaLaw,
        ExperimentKind::XxzDropletLocalization,
        ExperimentKind::XxzClustering,
        ExperimentKind::XxzCombesThomas,
        ExperimentKind::LightConeXy,
        ExperimentKind::LightConeXxz,
        ExperimentKind::QuasiLocality,
        ExperimentKind::IsingLogLaw,
    ];

    pub fn name(self) -> &'static str {
        match self {
            ExperimentKind::XyEigencorrelator => "xy-ecorr",
            ExperimentKind::XyKernel => "xy-kernel",
            ExperimentKind::XyAreaLaw => "xy-entropy",
            ExperimentKind::XyQuench => "xy-quench",
            ExperimentKind::XyAnisotropic => "xy-aniso",
            ExperimentKind::XxzDropletDecay => "xxz-profile",
            ExperimentKind::XxzAreaLaw => "xxz-entropy",
            ExperimentKind::XxzDropletLocalization => "xxz-droploc",
            ExperimentKind::XxzClustering => "xxz-cluster",
            ExperimentKind::XxzCombesThomas => "xxz-ct",
            ExperimentKind::LightConeXy => "lr-lightcone-xy",
            ExperimentKind::LightConeXxz => "lr-lightcone-xxz",
            ExperimentKind::QuasiLocality => "quasi-locality",
            ExperimentKind::IsingLogLaw => "ising",
        }
    }

    /// Label of the abscissa of the main table.
    pub fn abscissa(self) -> &'static str {
        match self {
            ExperimentKind::XyAreaLaw | ExperimentKind::XyQuench | ExperimentKind::IsingLogLaw => "ell",
            ExperimentKind::XxzAreaLaw => "cut",
            ExperimentKind::XxzDropletDecay => "r",
            ExperimentKind::QuasiLocality => "ell",
            _ => "distance",
        }
    }

    pub fn is_xxz(self) -> bool {
        matches!(
            self,
            ExperimentKind::XxzDropletDecay
                | ExperimentKind::XxzAreaLaw
                | ExperimentKind::XxzDropletLocalization
                | ExperimentKind::XxzClustering
                | ExperimentKind::XxzCombesThomas
                | ExperimentKind::LightConeXxz
                | ExperimentKind::QuasiLocality
        )
    }

    /// Kinds that build the full `2^n` many-body matrix.
    pub fn uses_oracle(self) -> bool {
        matches!(
            self,
            ExperimentKind::XxzAreaLaw
                | ExperimentKind::XxzClustering
                | ExperimentKind::LightConeXy
                | ExperimentKind::LightConeXxz
                | ExperimentKind::QuasiLocality
        )
    }
}

impl fmt::Display for ExperimentKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for ExperimentKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        ExperimentKind::ALL
            .into_iter()
            .find(|k| k.name() == s)
            .ok_or_else(|| config(format!("unknown experiment kind `{s}`")))
    }
}

/// Uniform grid `start, …, end` with `points` entries.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TimeGrid {
    pub start: f64,
    pub end: f64,
    pub points: usize,
}

impl TimeGrid {
    pub fn new(start: f64, end: f64, points: usize) -> Self {
        TimeGrid { start, end, points }
    }

    pub fn values(&self) -> Vec<f64> {
        if self.points <= 1 {
            return vec![self.start];
        }
        let step = (self.end - self.start) / (self.points - 1) as f64;
        (0..self.points).map(|k| self.start + step * k as f64).collect()
    }

    pub fn validate(&self) -> Result<()> {
        if self.points == 0 || !self.start.is_finite() || !self.end.is_finite() || self.end < self.start {
            return Err(config(format!("bad time grid [{}, {}] with {} points", self.start, self.end, self.points)));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum XyState {
    /// Max over sampled eigenstates (a lower estimate of the sup).
    SampledSup,
    GroundState,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BlockPlacement {
    /// Sites `0..ℓ`.
    Left,
    /// ℓ sites centered in the chain.
    Centered,
}

/// Regressor used for entropy-vs-length fits.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Regressor {
    Log,
    /// `log[(L/π) sin(πℓ/L)]`, the finite-size chord length.
    Chord,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ExperimentConfig {
    pub kind: ExperimentKind,
    /// Chain length for XY kinds, half length `L` of `[-L, L]` for XXZ kinds.
    pub length: usize,
    /// Particle number for single-sector kinds.
    pub particles: usize,
    pub anisotropy: f64,
    pub gamma: f64,
    /// Boundary field; `None` selects `½(1 − 1/Δ)`.
    pub boundary: Option<f64>,
    pub delta: f64,
    pub window: WindowKind,
    pub disorder: DisorderSpec,
    pub seeds: SeedPlan,
    pub realizations: usize,
    /// Distances or block lengths; empty selects the kind's default set.
    pub distances: Vec<usize>,
    pub time_grid: TimeGrid,
    /// Reference site (internal 0-based index).
    pub source: Option<usize>,
    /// Sampled patterns for sup estimates.
    pub samples: usize,
    pub observable: SiteKind,
    pub observable2: SiteKind,
    pub state: XyState,
    pub block: BlockPlacement,
    pub regressor: Regressor,
    /// Report entropy slopes per log₂ instead of per ln.
    pub log2: bool,
    /// Amplitude of a uniform perturbation added to the field (lifts clean-chain degeneracies).
    pub jitter: f64,
    /// Arrival threshold for light-cone runs.
    pub threshold: f64,
    pub output: Option<String>,
}

impl ExperimentConfig {
    pub fn new(kind: ExperimentKind) -> Self {
        let mut c = ExperimentConfig {
            kind,
            length: 100,
            particles: 2,
            anisotropy: 6.0,
            gamma: 0.5,
            boundary: None,
            delta: 0.5,
            window: WindowKind::Safe,
            disorder: DisorderSpec::uniform(0.0, 1.0),
            seeds: SeedPlan::new(1),
            realizations: 20,
            distances: vec![],
            time_grid: TimeGrid::new(0.0, 100.0, 512),
            source: None,
            samples: 64,
            observable: SiteKind::X,
            observable2: SiteKind::X,
            state: XyState::SampledSup,
            block: BlockPlacement::Left,
            regressor: Regressor::Log,
            log2: false,
            jitter: 0.0,
            threshold: 0.1,
            output: None,
        };
        match kind {
            ExperimentKind::XyEigencorrelator | ExperimentKind::XyKernel | ExperimentKind::XyAnisotropic => {
                c.disorder = DisorderSpec::uniform(0.0, 4.0);
                c.length = 200;
            }
            ExperimentKind::XyAreaLaw => {
                c.disorder = DisorderSpec::uniform(0.0, 4.0);
                c.length = 400;
            }
            ExperimentKind::XyQuench => {
                c.disorder = DisorderSpec::uniform(0.0, 4.0);
                c.length = 200;
                c.time_grid = TimeGrid::new(0.0, 100.0, 64);
            }
            ExperimentKind::XxzDropletDecay => {
                c.anisotropy = 3.0;
                c.particles = 3;
                c.length = 6;
                c.disorder = DisorderSpec::constant(0.0);
            }
            ExperimentKind::XxzAreaLaw => {
                c.length = 4;
                c.window = WindowKind::SafeWithGround;
                c.disorder = DisorderSpec::constant(0.0);
                c.realizations = 1;
            }
            ExperimentKind::XxzDropletLocalization => {
                c.length = 5;
                c.realizations = 300;
            }
            ExperimentKind::XxzClustering => {
                c.length = 4;
                c.observable = SiteKind::Number;
                c.observable2 = SiteKind::Number;
                c.time_grid = TimeGrid::new(0.0, 10.0, 11);
            }
            ExperimentKind::XxzCombesThomas => {
                c.anisotropy = 2.0;
                c.particles = 3;
                c.length = 5;
                c.realizations = 50;
                c.samples = 3;
            }
            ExperimentKind::LightConeXy => {
                c.length = 10;
                c.disorder = DisorderSpec::uniform(0.0, 4.0);
                c.time_grid = TimeGrid::new(0.0, 30.0, 31);
                c.source = Some(0);
            }
            ExperimentKind::LightConeXxz => {
                c.length = 4;
                c.time_grid = TimeGrid::new(0.0, 30.0, 31);
                c.source = Some(0);
                c.observable = SiteKind::Number;
                c.observable2 = SiteKind::Number;
            }
            ExperimentKind::QuasiLocality => {
                c.length = 5;
                c.observable = SiteKind::Number;
                c.time_grid = TimeGrid::new(0.0, 25.0, 6);
            }
            ExperimentKind::IsingLogLaw => {
                c.realizations = 1;
                c.disorder = DisorderSpec::constant(0.0);
            }
        }
        c
    }

    /// Number of sites of the chain the experiment runs on.
    pub fn sites(&self) -> usize {
        if self.kind.is_xxz() {
            2 * self.length + 1
        } else {
            self.length
        }
    }

    pub fn xxz_params(&self) -> XxzParams {
        XxzParams {
            anisotropy: self.anisotropy,
            boundary: self.boundary.unwrap_or_else(|| XxzParams::min_boundary(self.anisotropy)),
        }
    }

    pub fn reference_site(&self) -> usize {
        self.source.unwrap_or(match self.kind {
            ExperimentKind::QuasiLocality => self.length,
            ExperimentKind::XyEigencorrelator | ExperimentKind::XyKernel | ExperimentKind::XyAnisotropic => {
                self.length / 4
            }
            _ => 0,
        })
    }

    /// Distances (or lengths) actually used.
    pub fn distance_set(&self) -> Vec<usize> {
        if !self.distances.is_empty() {
            return self.distances.clone();
        }
        let n = self.sites();
        let j = self.reference_site();
        match self.kind {
            ExperimentKind::XyEigencorrelator | ExperimentKind::XyKernel | ExperimentKind::XyAnisotropic => {
                (1..n.saturating_sub(j).min(41)).collect()
            }
            ExperimentKind::XyAreaLaw | ExperimentKind::XyQuench => {
                let mut v: Vec<usize> = [16, 8, 4, 2].iter().map(|d| n / d).filter(|&l| l >= 1).collect();
                v.dedup();
                v
            }
            ExperimentKind::XxzDropletDecay | ExperimentKind::XxzCombesThomas => vec![],
            ExperimentKind::XxzAreaLaw => (1..n).collect(),
            ExperimentKind::XxzDropletLocalization => (0..n).collect(),
            ExperimentKind::XxzClustering | ExperimentKind::LightConeXy | ExperimentKind::LightConeXxz => {
                (1..n.saturating_sub(j)).collect()
            }
            ExperimentKind::QuasiLocality => (0..=self.length).collect(),
            ExperimentKind::IsingLogLaw => (2..=64).collect(),
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.realizations == 0 {
            return Err(config("realizations must be at least 1"));
        }
        self.disorder.validate()?;
        self.time_grid.validate()?;
        if !(self.jitter >= 0.0) || !self.jitter.is_finite() {
            return Err(config("jitter must be a finite nonnegative number"));
        }
        let n = self.sites();
        if self.kind != ExperimentKind::IsingLogLaw && n == 0 {
            return Err(config("chain length must be positive"));
        }
        if self.kind.is_xxz() {
            self.xxz_params().validate()?;
            xxz::spectral_window(self.anisotropy, self.delta, self.window)?;
            if !self.disorder.is_nonnegative() {
                return Err(config("XXZ fields must be nonnegative"));
            }
        }
        if self.kind.uses_oracle() && n > SITE_CAP {
            return Err(Error::CapExceeded { sites: n, cap: SITE_CAP });
        }
        if matches!(self.kind, ExperimentKind::XxzDropletDecay | ExperimentKind::XxzCombesThomas)
            && (self.particles == 0 || self.particles > n)
        {
            return Err(config(format!("particle number {} outside 1..={n}", self.particles)));
        }
        if self.kind == ExperimentKind::XxzCombesThomas && self.samples == 0 {
            return Err(config("configuration set size must be at least 1"));
        }
        let j = self.reference_site();
        let ds = self.distance_set();
        let bad = |d: usize| config(format!("{} {d} out of range for this chain", self.kind.abscissa()));
        match self.kind {
            ExperimentKind::XyEigencorrelator
            | ExperimentKind::XyKernel
            | ExperimentKind::XyAnisotropic
            | ExperimentKind::XxzClustering
            | ExperimentKind::LightConeXy
            | ExperimentKind::LightConeXxz => {
                if j >= n {
                    return Err(config(format!("reference site {j} outside 0..{n}")));
                }
                if let Some(&d) = ds.iter().find(|&&d| j + d >= n) {
                    return Err(bad(d));
                }
            }
            ExperimentKind::XyAreaLaw | ExperimentKind::XyQuench | ExperimentKind::XxzAreaLaw => {
                if let Some(&d) = ds.iter().find(|&&d| d == 0 || d >= n) {
                    return Err(bad(d));
                }
            }
            ExperimentKind::XxzDropletLocalization => {
                if let Some(&d) = ds.iter().find(|&&d| d >= n) {
                    return Err(bad(d));
                }
            }
            ExperimentKind::QuasiLocality => {
                if j >= n {
                    return Err(config(format!("reference site {j} outside 0..{n}")));
                }
            }
            ExperimentKind::IsingLogLaw => {
                if let Some(&d) = ds.iter().find(|&&d| d == 0 || d > 64) {
                    return Err(bad(d));
                }
            }
            ExperimentKind::XxzDropletDecay | ExperimentKind::XxzCombesThomas => {}
        }
        if self.kind == ExperimentKind::XyAnisotropic && !self.gamma.is_finite() {
            return Err(config("anisotropy parameter γ must be finite"));
        }
        Ok(())
    }

    /// Flat `key = value` echo; [`ExperimentConfig::set`] reads every line back.
    pub fn to_pairs(&self) -> Vec<(&'static str, String)> {
        let join = |v: &[usize]| v.iter().map(|d| d.to_string()).collect::<Vec<_>>().join(",");
        let mut out = vec![
            ("kind", self.kind.name().to_string()),
            ("length", self.length.to_string()),
            ("particles", self.particles.to_string()),
            ("anisotropy", fmt_f64(self.anisotropy)),
            ("gamma", fmt_f64(self.gamma)),
            ("boundary", self.boundary.map_or("droplet".to_string(), fmt_f64)),
            ("delta", fmt_f64(self.delta)),
            ("window", window_name(self.window).to_string()),
        ];
        let (dk, table) = match &self.disorder.kind {
            DisorderKind::Uniform => ("uniform", None),
            DisorderKind::Constant => ("constant", None),
            DisorderKind::DensityTable(w) => {
                ("table", Some(w.iter().map(|&x| fmt_f64(x)).collect::<Vec<_>>().join(",")))
            }
        };
        out.push(("disorder", dk.to_string()));
        out.push(("disorder_min", fmt_f64(self.disorder.support_min)));
        out.push(("disorder_max", fmt_f64(self.disorder.support_max)));
        if let Some(t) = table {
            out.push(("density_table", t));
        }
        out.extend([
            ("coupling", fmt_f64(self.disorder.coupling)),
            ("seed", self.seeds.base_seed.to_string()),
            ("realizations", self.realizations.to_string()),
            ("distances", join(&self.distances)),
            ("t_start", fmt_f64(self.time_grid.start)),
            ("t_end", fmt_f64(self.time_grid.end)),
            ("t_points", self.time_grid.points.to_string()),
            ("source", self.source.map_or("default".to_string(), |s| s.to_string())),
            ("samples", self.samples.to_string()),
            ("observable", site_kind_name(self.observable).to_string()),
            ("observable2", site_kind_name(self.observable2).to_string()),
            ("state", if self.state == XyState::GroundState { "ground" } else { "sup" }.to_string()),
            ("block", if self.block == BlockPlacement::Centered { "centered" } else { "left" }.to_string()),
            ("regressor", if self.regressor == Regressor::Chord { "chord" } else { "log" }.to_string()),
            ("log_base", if self.log2 { "2" } else { "e" }.to_string()),
            ("jitter", fmt_f64(self.jitter)),
            ("threshold", fmt_f64(self.threshold)),
        ]);
        if let Some(o) = &self.output {
            out.push(("output", o.clone()));
        }
        out
    }

    pub const KEYS: [&'static str; 32] = [
        "kind",
        "length",
        "particles",
        "anisotropy",
        "gamma",
        "boundary",
        "delta",
        "window",
        "disorder",
        "disorder_min",
        "disorder_max",
        "density_table",
        "coupling",
        "seed",
        "realizations",
        "distances",
        "t_start",
        "t_end",
        "t_points",
        "source",
        "samples",
        "observable",
        "observable2",
        "state",
        "block",
        "regressor",
        "log_base",
        "jitter",
        "threshold",
        "output",
        "lambda",
        "beta",
    ];

    /// Applies `key = value` lines (`#` starts a comment). Errors name the offending line.
    /// A `kind` line must agree with the current kind.
    pub fn apply_text(&mut self, text: &str) -> Result<()> {
        for (i, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let at = |msg: String| config(format!("line {}: {msg}", i + 1));
            let (key, value) =
                line.split_once('=').ok_or_else(|| at(format!("expected `key = value`, got `{line}`")))?;
            let key = key.trim();
            if key == "kind" {
                let kind: ExperimentKind = value.trim().parse().map_err(|e: Error| at(e.to_string()))?;
                if kind != self.kind {
                    return Err(at(format!("config is for `{kind}`, not `{}`", self.kind)));
                }
                continue;
            }
            self.set(key, value).map_err(|e| match e {
                Error::Config(m) => at(m),
                other => other,
            })?;
        }
        Ok(())
    }

    /// Set one field from its textual value. `kind` only changes the tag, not the defaults.
    pub fn set(&mut self, key: &str, value: &str) -> Result<()> {
        let v = value.trim();
        match key {
            "kind" => self.kind = v.parse()?,
            "length" => self.length = parse(key, v)?,
            "particles" => self.particles = parse(key, v)?,
            "anisotropy" => self.anisotropy = parse(key, v)?,
            "gamma" => self.gamma = parse(key, v)?,
            "boundary" | "beta" => {
                self.boundary = if v == "droplet" { None } else { Some(parse(key, v)?) };
            }
            "delta" => self.delta = parse(key, v)?,
            "window" => self.window = parse_window(v)?,
            "disorder" => {
                self.disorder.kind = match v {
                    "uniform" => DisorderKind::Uniform,
                    "constant" => DisorderKind::Constant,
                    "table" => DisorderKind::DensityTable(vec![1.0]),
                    _ => return Err(config(format!("disorder: unknown distribution `{v}`"))),
                }
            }
            "disorder_min" => self.disorder.support_min = parse(key, v)?,
            "disorder_max" => self.disorder.support_max = parse(key, v)?,
            "density_table" => {
                self.disorder.kind = DisorderKind::DensityTable(parse_list(key, v)?);
            }
            "coupling" | "lambda" => self.disorder.coupling = parse(key, v)?,
            "seed" => self.seeds = SeedPlan::new(parse(key, v)?),
            "realizations" => self.realizations = parse(key, v)?,
            "distances" => self.distances = parse_distances(v)?,
            "t_start" => self.time_grid.start = parse(key, v)?,
            "t_end" => self.time_grid.end = parse(key, v)?,
            "t_points" => self.time_grid.points = parse(key, v)?,
            "source" => self.source = if v == "default" { None } else { Some(parse(key, v)?) },
            "samples" => self.samples = parse(key, v)?,
            "observable" => self.observable = parse_site_kind(v)?,
            "observable2" => self.observable2 = parse_site_kind(v)?,
            "state" => {
                self.state = match v {
                    "sup" => XyState::SampledSup,
                    "ground" => XyState::GroundState,
                    _ => return Err(config(format!("state: expected `sup` or `ground`, got `{v}`"))),
                }
            }
            "block" => {
                self.block = match v {
                    "left" => BlockPlacement::Left,
                    "centered" => BlockPlacement::Centered,
                    _ => return Err(config(format!("block: expected `left` or `centered`, got `{v}`"))),
                }
            }
            "regressor" => {
                self.regressor = match v {
                    "log" => Regressor::Log,
                    "chord" => Regressor::Chord,
                    _ => return Err(config(format!("regressor: expected `log` or `chord`, got `{v}`"))),
                }
            }
            "log_base" => {
                self.log2 = match v {
                    "e" => false,
                    "2" => true,
                    _ => return Err(config(format!("log_base: expected `e` or `2`, got `{v}`"))),
                }
            }
            "jitter" => self.jitter = parse(key, v)?,
            "threshold" => self.threshold = parse(key, v)?,
            "output" => self.output = Some(v.to_string()),
            _ => return Err(config(format!("unknown key `{key}`"))),
        }
        Ok(())
    }
}

/// Shortest representation that parses back to the same value.
pub fn fmt_f64(x: f64) -> String {
    format!("{x:?}")
}

fn parse<T: FromStr>(key: &str, v: &str) -> Result<T>
where
    T::Err: fmt::Display,
{
    v.parse::<T>().map_err(|e| config(format!("{key}: cannot parse `{v}`: {e}")))
}

fn parse_list(key: &str, v: &str) -> Result<Vec<f64>> {
    v.split(',').filter(|s| !s.trim().is_empty()).map(|s| parse(key, s.trim())).collect()
}

/// `1,2,5`, `1..10` (inclusive) or a mix of both.
pub fn parse_distances(v: &str) -> Result<Vec<usize>> {
    let mut out = Vec::new();
    for part in v.split(',').map(str::trim).filter(|s| !s.is_empty()) {
        if let Some((a, b)) = part.split_once("..") {
            let a: usize = parse("distances", a.trim())?;
            let b: usize = parse("distances", b.trim())?;
            if b < a {
                return Err(config(format!("distances: empty range `{part}`")));
            }
            out.extend(a..=b);
        } else {
            out.push(parse("distances", part)?);
        }
    }
    Ok(out)
}

pub fn window_name(w: WindowKind) -> &'static str {
    match w {
        WindowKind::Droplet => "droplet",
        WindowKind::Safe => "safe",
        WindowKind::SafeWithGround => "safe-with-ground",
        WindowKind::Band => "band",
        WindowKind::Custom => "custom",
    }
}

pub fn parse_window(v: &str) -> Result<WindowKind> {
    match v {
        "droplet" => Ok(WindowKind::Droplet),
        "safe" => Ok(WindowKind::Safe),
        "safe-with-ground" => Ok(WindowKind::SafeWithGround),
        _ => Err(config(format!("window: expected droplet, safe or safe-with-ground, got `{v}`"))),
    }
}

pub fn site_kind_name(k: SiteKind) -> &'static str {
    match k {
        SiteKind::X => "x",
        SiteKind::Y => "y",
        SiteKind::Z => "z",
        SiteKind::Number => "number",
        SiteKind::Up => "up",
        SiteKind::Lower => "lower",
        SiteKind::Raise => "raise",
    }
}

pub fn parse_site_kind(v: &str) -> Result<SiteKind> {
    [SiteKind::X, SiteKind::Y, SiteKind::Z, SiteKind::Number, SiteKind::Up, SiteKind::Lower, SiteKind::Raise]
        .into_iter()
        .find(|&k| site_kind_name(k) == v)
        .ok_or_else(|| config(format!("observable: unknown site operator `{v}`")))
}
