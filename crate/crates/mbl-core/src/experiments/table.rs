//! Text renderings of ensemble results. Everything here is a pure function of the summary,
//! so identical runs give byte-identical files.

use sha2::{Digest, Sha256};

use super::config::{fmt_f64, ExperimentConfig};
use super::summary::EnsembleSummary;
use crate::error::{Error, Result};

pub const UNITS: &str =
    "energies and rates in units of the nearest-neighbour coupling (= 1); times in inverse coupling; entropies in nats";

/// `key = value` lines, one per config field.
pub fn config_text(config: &ExperimentConfig) -> String {
    config.to_pairs().into_iter().map(|(k, v)| format!("{k} = {v}\n")).collect()
}

pub fn sha256_hex(bytes: &[u8]) -> String {
    hex::encode(Sha256::digest(bytes))
}

pub fn config_hash(config: &ExperimentConfig) -> String {
    sha256_hex(config_text(config).as_bytes())
}

fn preamble(s: &EnsembleSummary) -> String {
    format!(
        "# kind: {}\n# config_sha256: {}\n# base_seed: {}\n# realizations: {}\n# substitutions: {}\n# units: {UNITS}\n",
        s.kind,
        config_hash(&s.config),
        s.config.seeds.base_seed,
        s.realizations,
        s.substitutions
    )
}

fn csv_body(header: &[&str], rows: impl Iterator<Item = Vec<String>>) -> Result<String> {
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record(header).map_err(|e| Error::Numerical(e.to_string()))?;
    for r in rows {
        w.write_record(&r).map_err(|e| Error::Numerical(e.to_string()))?;
    }
    let bytes = w.into_inner().map_err(|e| Error::Numerical(e.to_string()))?;
    String::from_utf8(bytes).map_err(|e| Error::Numerical(e.to_string()))
}

/// Per-series means with standard errors.
pub fn summary_csv(s: &EnsembleSummary) -> Result<String> {
    let rows = s.series.iter().flat_map(|ser| {
        ser.points.iter().map(move |p| {
            vec![ser.name.clone(), fmt_f64(p.x), fmt_f64(p.mean), fmt_f64(p.std_err), p.count.to_string()]
        })
    });
    Ok(preamble(s) + &csv_body(&["series", s.abscissa, "mean", "std_err", "count"], rows)?)
}

/// Every per-realization value.
pub fn samples_csv(s: &EnsembleSummary) -> Result<String> {
    let rows =
        s.samples.iter().map(|r| vec![r.realization.to_string(), r.series.clone(), fmt_f64(r.x), fmt_f64(r.value)]);
    Ok(preamble(s) + &csv_body(&["realization", "series", s.abscissa, "value"], rows)?)
}

/// Seeds actually used, including flagged substitutes.
pub fn seeds_csv(s: &EnsembleSummary) -> Result<String> {
    let rows = s.seeds.iter().map(|r| vec![r.index.to_string(), r.seed.to_string(), r.attempt.to_string()]);
    Ok(preamble(s) + &csv_body(&["realization", "seed", "substitute_attempt"], rows)?)
}

/// Whitespace-separated blocks, one per series, separated by two blank lines.
pub fn summary_dat(s: &EnsembleSummary) -> String {
    let mut out = preamble(s);
    for (i, ser) in s.series.iter().enumerate() {
        if i > 0 {
            out.push_str("\n\n");
        }
        out.push_str(&format!("# series: {}\n# {} mean std_err count\n", ser.name, s.abscissa));
        for p in &ser.points {
            out.push_str(&format!("{} {} {} {}\n", fmt_f64(p.x), fmt_f64(p.mean), fmt_f64(p.std_err), p.count));
        }
    }
    out
}
