mod args;
mod describe;
mod output;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::Parser;

use mbl_core::experiments::{
    band_table, run_ensemble, AreaLawScan, EnsembleSummary, ExperimentConfig, ExperimentKind, LinearFit,
};
use mbl_core::xxz::XxzParams;
use mbl_core::Error;

use args::{BandsArgs, Cli, Command, LightConeModel, RunArgs};

/// Failure classes with their exit codes.
#[derive(Debug)]
enum Failure {
    Config(String),
    Numerical(String),
    Validation(usize),
}

impl Failure {
    fn code(&self) -> u8 {
        match self {
            Failure::Config(_) => 2,
            Failure::Numerical(_) => 3,
            Failure::Validation(_) => 4,
        }
    }
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        match e {
            Error::Config(m) => Failure::Config(m),
            Error::Realization { source, index } if matches!(*source, Error::Config(_)) => {
                Failure::Config(format!("realization {index}: {source}"))
            }
            other => Failure::Numerical(other.to_string()),
        }
    }
}

type Outcome<T = ()> = std::result::Result<T, Failure>;

const OUTPUT_ENV: &str = "MBL_OUTPUT_DIR";

fn main() -> ExitCode {
    let cli = Cli::parse();
    match dispatch(cli.command) {
        Ok(()) => ExitCode::SUCCESS,
        Err(f) => {
            match &f {
                Failure::Config(m) => eprintln!("mbl: configuration error: {m}"),
                Failure::Numerical(m) => eprintln!("mbl: numerical failure: {m}"),
                Failure::Validation(n) => eprintln!("mbl: {n} validation check(s) failed"),
            }
            ExitCode::from(f.code())
        }
    }
}

fn dispatch(cmd: Command) -> Outcome {
    match cmd {
        Command::XyEcorr(a) => run_kind(ExperimentKind::XyEigencorrelator, "xy-ecorr", a),
        Command::XyKernel(a) => run_kind(ExperimentKind::XyKernel, "xy-kernel", a),
        Command::XyEntropy(a) => run_kind(ExperimentKind::XyAreaLaw, "xy-entropy", a),
        Command::XyQuench(a) => run_kind(ExperimentKind::XyQuench, "xy-quench", a),
        Command::XyAniso(a) => run_kind(ExperimentKind::XyAnisotropic, "xy-aniso", a),
        Command::XxzBands(a) => bands(a),
        Command::XxzProfile { entropy, run } => {
            if entropy {
                run_kind(ExperimentKind::XxzAreaLaw, "xxz-profile", run)
            } else {
                run_kind(ExperimentKind::XxzDropletDecay, "xxz-profile", run)
            }
        }
        Command::XxzCt(mut a) => {
            // for this subcommand every realization is one (ω, A, B, E) sample
            if let Some(k) = a.samples.take() {
                a.realizations = Some(k);
            }
            run_kind(ExperimentKind::XxzCombesThomas, "xxz-ct", a)
        }
        Command::XxzDroploc(a) => run_kind(ExperimentKind::XxzDropletLocalization, "xxz-droploc", a),
        Command::XxzCluster(a) => run_kind(ExperimentKind::XxzClustering, "xxz-cluster", a),
        Command::LrLightcone { model, run } => {
            let kind = match model {
                LightConeModel::Xy => ExperimentKind::LightConeXy,
                LightConeModel::Xxz => ExperimentKind::LightConeXxz,
            };
            run_kind(kind, "lr-lightcone", run)
        }
        Command::QuasiLocality(a) => run_kind(ExperimentKind::QuasiLocality, "quasi-locality", a),
        Command::Ising(a) => run_kind(ExperimentKind::IsingLogLaw, "ising", a),
        Command::Validate => validate(),
        Command::Describe { subcommand } => describe::print(subcommand.as_deref()).map_err(Failure::Config),
    }
}

fn output_dir(flag: Option<PathBuf>, config: &ExperimentConfig) -> PathBuf {
    flag.or_else(|| config.output.clone().map(PathBuf::from))
        .or_else(|| std::env::var_os(OUTPUT_ENV).map(PathBuf::from))
        .unwrap_or_else(|| PathBuf::from("mbl-output"))
}

fn load_config(kind: ExperimentKind, a: &RunArgs) -> Outcome<ExperimentConfig> {
    let mut c = ExperimentConfig::new(kind);
    if let Some(path) = &a.config {
        let text = std::fs::read_to_string(path).map_err(|e| Failure::Config(format!("{}: {e}", path.display())))?;
        let text = if text.trim_start().starts_with('{') { output::manifest_config_text(&text) } else { Ok(text) }
            .map_err(|m| Failure::Config(format!("{}: {m}", path.display())))?;
        c.apply_text(&text).map_err(|e| Failure::Config(format!("{}: {}", path.display(), strip(e))))?;
    }
    for (key, value) in a.overrides().map_err(Failure::Config)? {
        c.set(&key, &value).map_err(|e| Failure::Config(format!("--{key}: {}", strip(e))))?;
    }
    c.validate()?;
    Ok(c)
}

fn strip(e: Error) -> String {
    match e {
        Error::Config(m) => m,
        other => other.to_string(),
    }
}

/// The series whose decay in distance is the headline of a kind.
fn decay_series(kind: ExperimentKind) -> Option<&'static str> {
    Some(match kind {
        ExperimentKind::XyEigencorrelator | ExperimentKind::XyAnisotropic => "eigencorrelator",
        ExperimentKind::XyKernel => "kernel",
        ExperimentKind::XxzDropletDecay => "ratio_max",
        ExperimentKind::XxzDropletLocalization => "correlator",
        ExperimentKind::XxzClustering => "correlation_max",
        ExperimentKind::LightConeXy | ExperimentKind::LightConeXxz => "operator_max",
        ExperimentKind::QuasiLocality => "error_max",
        _ => return None,
    })
}

fn is_area_law(kind: ExperimentKind) -> bool {
    matches!(
        kind,
        ExperimentKind::XyAreaLaw | ExperimentKind::XyQuench | ExperimentKind::XxzAreaLaw | ExperimentKind::IsingLogLaw
    )
}

fn run_kind(kind: ExperimentKind, subcommand: &'static str, a: RunArgs) -> Outcome {
    let config = load_config(kind, &a)?;
    let dir = output_dir(a.out.clone(), &config);
    let stem = a.name.clone().unwrap_or_else(|| kind.name().to_string());
    let started = chrono::Utc::now();
    let summary = run_ensemble(&config)?;
    let mut fit = serde_json::Map::new();
    // the case table below replaces the per-distance listing
    print_summary(&summary, a.quiet || kind == ExperimentKind::XxzCombesThomas);
    if let Some(series) = decay_series(kind) {
        match summary.decay_fit(series) {
            Ok(f) => {
                let (lo, hi) = f.ci();
                println!(
                    "decay fit of {series}: rate {:.6} (95% CI [{lo:.6}, {hi:.6}]), r2 {:.4}, {} points{}",
                    f.rate,
                    f.r_squared,
                    f.points_used,
                    if f.floor_applied { ", floor applied" } else { "" }
                );
                fit.insert("series".into(), series.into());
                fit.insert("rate".into(), f.rate.into());
                fit.insert("rate_ci".into(), serde_json::json!([lo, hi]));
                fit.insert("r_squared".into(), f.r_squared.into());
            }
            Err(e) => println!("decay fit of {series}: {e}"),
        }
    }
    if is_area_law(kind) {
        match AreaLawScan::from_summary(&config, summary.clone()) {
            Ok(scan) => {
                print_area_law(&scan.fit, &scan);
                fit.insert("series".into(), scan.series.into());
                fit.insert("log_coefficient".into(), scan.fit.slope.into());
                fit.insert("log_coefficient_ci".into(), serde_json::json!([scan.fit.ci().0, scan.fit.ci().1]));
                if let Some(m) = scan.slope {
                    fit.insert("per_realization_slope".into(), m.mean.into());
                    fit.insert("per_realization_slope_ci".into(), serde_json::json!([m.ci().0, m.ci().1]));
                }
            }
            Err(e @ Error::FitNotAvailable(_)) => println!("log-law fit: {e}"),
            Err(e) => return Err(e.into()),
        }
    }
    let mut extra = Vec::new();
    let mut violations = 0;
    if kind == ExperimentKind::XxzCombesThomas {
        let (table, bad) = output::ct_table(&summary)?;
        violations = bad;
        print!("{}", output::strip_preamble(&table));
        extra.push(("ct.csv", table));
    }
    let written = output::write_run(&dir, &stem, subcommand, &config, &summary, started, fit, extra)?;
    println!("wrote {}", written.display());
    if violations > 0 {
        return Err(Failure::Numerical(format!("{violations} rows with measured > bound")));
    }
    Ok(())
}

fn print_summary(s: &EnsembleSummary, quiet: bool) {
    println!(
        "{}: {} realizations ({} substituted seeds), base seed {}",
        s.kind, s.realizations, s.substitutions, s.config.seeds.base_seed
    );
    if quiet {
        return;
    }
    for ser in &s.series {
        println!("  {} vs {}:", ser.name, s.abscissa);
        for p in &ser.points {
            println!("    {:>8} {:>14.6e} ± {:.2e} (n={})", p.x, p.mean, p.std_err, p.count);
        }
    }
}

fn print_area_law(fit: &LinearFit, scan: &AreaLawScan) {
    let (lo, hi) = fit.ci();
    println!(
        "log coefficient of {}: {:.6} (95% CI [{lo:.6}, {hi:.6}]), r2 {:.4}",
        scan.series, fit.slope, fit.r_squared
    );
    if let Some(m) = scan.slope {
        let (lo, hi) = m.ci();
        println!("mean per-realization slope: {:.6} (95% CI [{lo:.6}, {hi:.6}])", m.mean);
    }
}

fn bands(a: BandsArgs) -> Outcome {
    let boundary = match a.beta.as_deref() {
        None | Some("droplet") => XxzParams::min_boundary(a.anisotropy),
        Some(v) => v.parse().map_err(|e| Failure::Config(format!("--beta: cannot parse `{v}`: {e}")))?,
    };
    let params = XxzParams { anisotropy: a.anisotropy, boundary };
    let particles = mbl_core::experiments::parse_distances(&a.particles)
        .map_err(|e| Failure::Config(format!("--N: {}", strip(e))))?;
    if particles.is_empty() || particles.contains(&0) {
        return Err(Failure::Config("--N: particle numbers must be positive".into()));
    }
    let started = chrono::Utc::now();
    let rows = band_table(&particles, a.half_length, &params)?;
    let dir = a
        .out
        .clone()
        .or_else(|| std::env::var_os(OUTPUT_ENV).map(PathBuf::from))
        .unwrap_or_else(|| "mbl-output".into());
    let stem = a.name.clone().unwrap_or_else(|| "xxz-bands".into());
    let written = output::write_bands(&dir, &stem, &a, &params, &rows, started)?;
    print!("{}", output::strip_preamble(&output::bands_csv(&a, &params, &rows)?));
    println!("wrote {}", written.display());
    Ok(())
}

fn validate() -> Outcome {
    let checks = mbl_core::validation::run_suite()?;
    let mut failed = 0;
    for c in &checks {
        let verdict = if c.passed() { "PASS" } else { "FAIL" };
        if !c.passed() {
            failed += 1;
        }
        println!("{verdict} {:<36} {:.3e} (tolerance {:.0e})", c.name, c.value, c.tolerance);
    }
    if failed > 0 {
        return Err(Failure::Validation(failed));
    }
    println!("all {} checks passed", checks.len());
    Ok(())
}
