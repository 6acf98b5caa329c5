use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};

#[derive(Debug, Parser)]
#[command(name = "mbl", version, about = "Numerical experiments on disordered XY and XXZ spin chains")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Eigencorrelator decay in the random XY chain
    XyEcorr(RunArgs),
    /// Dynamical localization of the one-body propagator
    XyKernel(RunArgs),
    /// Block entanglement of XY eigenstates
    XyEntropy(RunArgs),
    /// Entanglement growth after a local quench
    XyQuench(RunArgs),
    /// Anisotropic XY chain via its block matrix
    XyAniso(RunArgs),
    /// Droplet bands of the clean XXZ chain
    XxzBands(BandsArgs),
    /// Eigenvector decay away from droplets (or entropy profile with --entropy)
    XxzProfile {
        /// Scan window-eigenstate entropies along the chain instead
        #[arg(long)]
        entropy: bool,
        #[command(flatten)]
        run: RunArgs,
    },
    /// Resolvent decay bound in fixed particle sectors
    XxzCt(RunArgs),
    /// Droplet localization correlator
    XxzDroploc(RunArgs),
    /// Windowed eigenstate clustering
    XxzCluster(RunArgs),
    /// Commutator growth of local observables
    LrLightcone {
        #[arg(long, value_enum, default_value_t = LightConeModel::Xy)]
        model: LightConeModel,
        #[command(flatten)]
        run: RunArgs,
    },
    /// Local approximation error of time-evolved observables
    QuasiLocality(RunArgs),
    /// Logarithmic entropy of droplet superpositions in the Ising limit
    Ising(RunArgs),
    /// Run the oracle-equivalence checks on small chains
    Validate,
    /// Print what each subcommand measures and where the statement comes from
    Describe {
        /// Only this subcommand
        subcommand: Option<String>,
    },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum LightConeModel {
    Xy,
    Xxz,
}

#[derive(Debug, Default, Args)]
pub struct RunArgs {
    /// key = value config file, or a manifest from an earlier run
    #[arg(long, short)]
    pub config: Option<PathBuf>,
    /// Extra KEY=VALUE settings, applied after the config file
    #[arg(long = "set", value_name = "KEY=VALUE")]
    pub set: Vec<String>,
    /// Chain length (XY) or half-length (XXZ, sites -L..L)
    #[arg(long = "L", value_name = "L")]
    pub length: Option<usize>,
    /// Particle number
    #[arg(long = "N", value_name = "N")]
    pub particles: Option<usize>,
    /// Ising-like anisotropy Δ > 1
    #[arg(long = "Delta", value_name = "DELTA")]
    pub anisotropy: Option<f64>,
    /// Safety distance below the spectral threshold
    #[arg(long)]
    pub delta: Option<f64>,
    #[arg(long, short = 'R')]
    pub realizations: Option<usize>,
    /// Sampled configurations per realization (xxz-ct: number of sampled cases)
    #[arg(long)]
    pub samples: Option<usize>,
    #[arg(long)]
    pub seed: Option<u64>,
    /// Distances such as `1,2,5` or `1..10`
    #[arg(long)]
    pub distances: Option<String>,
    /// droplet, safe or safe-with-ground
    #[arg(long)]
    pub window: Option<String>,
    /// Boundary field (or `droplet` for the smallest admissible one)
    #[arg(long)]
    pub beta: Option<String>,
    /// Disorder coupling
    #[arg(long)]
    pub lambda: Option<f64>,
    #[arg(long)]
    pub disorder_min: Option<f64>,
    #[arg(long)]
    pub disorder_max: Option<f64>,
    /// Anisotropy parameter of the XY chain
    #[arg(long)]
    pub gamma: Option<f64>,
    #[arg(long)]
    pub t_end: Option<f64>,
    #[arg(long)]
    pub t_points: Option<usize>,
    #[arg(long)]
    pub source: Option<String>,
    #[arg(long)]
    pub observable: Option<String>,
    #[arg(long)]
    pub observable2: Option<String>,
    /// ground or sup
    #[arg(long)]
    pub state: Option<String>,
    /// left or centered
    #[arg(long)]
    pub block: Option<String>,
    /// log or chord
    #[arg(long)]
    pub regressor: Option<String>,
    /// Report entropies in bits and regress on log2
    #[arg(long)]
    pub log2: bool,
    #[arg(long)]
    pub jitter: Option<f64>,
    #[arg(long)]
    pub threshold: Option<f64>,
    /// Output directory
    #[arg(long, short)]
    pub out: Option<PathBuf>,
    /// File stem for the outputs
    #[arg(long)]
    pub name: Option<String>,
    /// Only print the fit lines
    #[arg(long, short)]
    pub quiet: bool,
}

impl RunArgs {
    /// Flag overrides as config pairs, in a fixed order.
    pub fn overrides(&self) -> Result<Vec<(String, String)>, String> {
        let mut out = Vec::new();
        for kv in &self.set {
            let (k, v) = kv.split_once('=').ok_or_else(|| format!("--set expects KEY=VALUE, got `{kv}`"))?;
            out.push((k.trim().to_string(), v.trim().to_string()));
        }
        let mut push = |k: &str, v: Option<String>| {
            if let Some(v) = v {
                out.push((k.to_string(), v));
            }
        };
        let s = |x: &Option<f64>| x.map(|v| format!("{v:?}"));
        push("length", self.length.map(|v| v.to_string()));
        push("particles", self.particles.map(|v| v.to_string()));
        push("anisotropy", s(&self.anisotropy));
        push("delta", s(&self.delta));
        push("realizations", self.realizations.map(|v| v.to_string()));
        push("samples", self.samples.map(|v| v.to_string()));
        push("seed", self.seed.map(|v| v.to_string()));
        push("distances", self.distances.clone());
        push("window", self.window.clone());
        push("boundary", self.beta.clone());
        push("coupling", s(&self.lambda));
        push("disorder_min", s(&self.disorder_min));
        push("disorder_max", s(&self.disorder_max));
        push("gamma", s(&self.gamma));
        push("t_end", s(&self.t_end));
        push("t_points", self.t_points.map(|v| v.to_string()));
        push("source", self.source.clone());
        push("observable", self.observable.clone());
        push("observable2", self.observable2.clone());
        push("state", self.state.clone());
        push("block", self.block.clone());
        push("regressor", self.regressor.clone());
        push("log_base", self.log2.then(|| "2".to_string()));
        push("jitter", s(&self.jitter));
        push("threshold", s(&self.threshold));
        Ok(out)
    }
}

#[derive(Debug, Args)]
pub struct BandsArgs {
    #[arg(long = "Delta", value_name = "DELTA", default_value_t = 2.0)]
    pub anisotropy: f64,
    /// Particle numbers, e.g. `1..5`
    #[arg(long = "N", value_name = "N", default_value = "1..5")]
    pub particles: String,
    /// Also diagonalize the clean chain with sites -L..L
    #[arg(long = "L", value_name = "L")]
    pub half_length: Option<usize>,
    /// Boundary field (default: the smallest admissible one)
    #[arg(long)]
    pub beta: Option<String>,
    #[arg(long, short)]
    pub out: Option<PathBuf>,
    #[arg(long)]
    pub name: Option<String>,
}
