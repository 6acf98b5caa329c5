use std::fs;
use std::path::{Path, PathBuf};

use chrono::{DateTime, SecondsFormat, Utc};
use serde_json::{json, Map, Value};

use mbl_core::experiments::{
    config_hash, fmt_f64, samples_csv, seeds_csv, sha256_hex, summary_csv, summary_dat, BandRow, EnsembleSummary,
    ExperimentConfig, UNITS,
};
use mbl_core::xxz::XxzParams;

use crate::args::BandsArgs;
use crate::Failure;

fn io(path: &Path, e: std::io::Error) -> Failure {
    Failure::Numerical(format!("{}: {e}", path.display()))
}

fn stamp(t: DateTime<Utc>) -> String {
    t.to_rfc3339_opts(SecondsFormat::Millis, true)
}

/// Drops leading `#` lines.
pub fn strip_preamble(text: &str) -> String {
    text.lines().skip_while(|l| l.starts_with('#')).map(|l| format!("{l}\n")).collect()
}

/// Writes the files, then a manifest with their checksums. Returns the manifest path.
fn write_files(
    dir: &Path,
    stem: &str,
    files: &[(String, String)],
    mut manifest: Map<String, Value>,
) -> Result<PathBuf, Failure> {
    fs::create_dir_all(dir).map_err(|e| io(dir, e))?;
    let mut sums = Map::new();
    for (suffix, body) in files {
        let name = format!("{stem}.{suffix}");
        let path = dir.join(&name);
        fs::write(&path, body).map_err(|e| io(&path, e))?;
        sums.insert(name, sha256_hex(body.as_bytes()).into());
    }
    manifest.insert("files".into(), Value::Object(sums));
    manifest.insert("finished".into(), stamp(Utc::now()).into());
    let path = dir.join(format!("{stem}.manifest.json"));
    let text = serde_json::to_string_pretty(&Value::Object(manifest)).map_err(|e| Failure::Numerical(e.to_string()))?;
    fs::write(&path, text + "\n").map_err(|e| io(&path, e))?;
    Ok(path)
}

#[allow(clippy::too_many_arguments)]
pub fn write_run(
    dir: &Path,
    stem: &str,
    subcommand: &str,
    config: &ExperimentConfig,
    summary: &EnsembleSummary,
    started: DateTime<Utc>,
    fit: Map<String, Value>,
    extra: Vec<(&str, String)>,
) -> Result<PathBuf, Failure> {
    let mut files = vec![
        ("csv".to_string(), summary_csv(summary)?),
        ("samples.csv".to_string(), samples_csv(summary)?),
        ("seeds.csv".to_string(), seeds_csv(summary)?),
        ("dat".to_string(), summary_dat(summary)),
    ];
    files.extend(extra.into_iter().map(|(s, b)| (s.to_string(), b)));
    let pairs: Vec<Value> = config.to_pairs().into_iter().map(|(k, v)| json!([k, v])).collect();
    let mut m = Map::new();
    m.insert("artifact".into(), stem.into());
    m.insert("version".into(), env!("CARGO_PKG_VERSION").into());
    m.insert("subcommand".into(), subcommand.into());
    m.insert("kind".into(), config.kind.name().into());
    m.insert("started".into(), stamp(started).into());
    m.insert("config".into(), Value::Array(pairs));
    m.insert("config_sha256".into(), config_hash(config).into());
    m.insert(
        "seed_plan".into(),
        json!({
            "base_seed": config.seeds.base_seed,
            "generator": "ChaCha8, one stream per realization index",
            "realizations": summary.realizations,
            "substitutions": summary.substitutions,
        }),
    );
    m.insert("units".into(), UNITS.into());
    m.insert("fit".into(), Value::Object(fit));
    write_files(dir, stem, &files, m)
}

/// `key = value` text from the config echo of a manifest.
pub fn manifest_config_text(json: &str) -> Result<String, String> {
    let v: Value = serde_json::from_str(json).map_err(|e| format!("not a valid manifest: {e}"))?;
    let pairs = v.get("config").and_then(Value::as_array).ok_or("manifest has no `config` array")?;
    let mut out = String::new();
    for (i, p) in pairs.iter().enumerate() {
        match p.as_array().map(Vec::as_slice) {
            Some([Value::String(k), Value::String(v)]) => out.push_str(&format!("{k} = {v}\n")),
            _ => return Err(format!("config entry {} is not a [key, value] pair", i + 1)),
        }
    }
    Ok(out)
}

/// One (distance, measured, bound) row per sampled case, and the number of violations.
pub fn ct_table(s: &EnsembleSummary) -> Result<(String, usize), Failure> {
    let pick = |name: &'static str| s.samples.iter().filter(move |x| x.series == name);
    let mut w = csv::Writer::from_writer(Vec::new());
    let err = |e: csv::Error| Failure::Numerical(e.to_string());
    w.write_record(["distance", "measured", "bound", "holds"]).map_err(err)?;
    let mut bad = 0;
    for (m, b) in pick("measured").zip(pick("bound")) {
        let holds = m.value <= b.value;
        bad += usize::from(!holds);
        w.write_record([(m.x as usize).to_string(), fmt_f64(m.value), fmt_f64(b.value), holds.to_string()])
            .map_err(err)?;
    }
    let body = String::from_utf8(w.into_inner().map_err(|e| Failure::Numerical(e.to_string()))?)
        .map_err(|e| Failure::Numerical(e.to_string()))?;
    let head = format!(
        "# config_sha256: {}\n# base_seed: {}\n# units: {UNITS}\n",
        config_hash(&s.config),
        s.config.seeds.base_seed
    );
    Ok((head + &body, bad))
}

fn bands_pairs(a: &BandsArgs, p: &XxzParams) -> Vec<(&'static str, String)> {
    vec![
        ("anisotropy", fmt_f64(p.anisotropy)),
        ("boundary", fmt_f64(p.boundary)),
        ("particles", a.particles.clone()),
        ("length", a.half_length.map_or("none".into(), |l| l.to_string())),
    ]
}

fn bands_hash(a: &BandsArgs, p: &XxzParams) -> String {
    let text: String = bands_pairs(a, p).into_iter().map(|(k, v)| format!("{k} = {v}\n")).collect();
    sha256_hex(text.as_bytes())
}

fn opt(v: Option<f64>) -> String {
    v.map_or(String::new(), fmt_f64)
}

pub fn bands_csv(a: &BandsArgs, p: &XxzParams, rows: &[BandRow]) -> Result<String, Failure> {
    let err = |e: csv::Error| Failure::Numerical(e.to_string());
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record(["particles", "band_lower", "band_upper", "measured_lower", "measured_upper", "excess"])
        .map_err(err)?;
    for r in rows {
        w.write_record([
            r.particles.to_string(),
            fmt_f64(r.band.lower),
            fmt_f64(r.band.upper),
            opt(r.measured.map(|m| m.0)),
            opt(r.measured.map(|m| m.1)),
            if r.measured.is_some() { fmt_f64(r.excess()) } else { String::new() },
        ])
        .map_err(err)?;
    }
    let body = String::from_utf8(w.into_inner().map_err(|e| Failure::Numerical(e.to_string()))?)
        .map_err(|e| Failure::Numerical(e.to_string()))?;
    Ok(format!("# config_sha256: {}\n# seed: none (clean chain)\n# units: {UNITS}\n{body}", bands_hash(a, p)))
}

fn bands_dat(rows: &[BandRow]) -> String {
    let mut out = String::from("# particles band_lower band_upper measured_lower measured_upper\n");
    for r in rows {
        let (lo, hi) = r.measured.map_or(("nan".into(), "nan".into()), |(l, h)| (fmt_f64(l), fmt_f64(h)));
        out.push_str(&format!("{} {} {} {lo} {hi}\n", r.particles, fmt_f64(r.band.lower), fmt_f64(r.band.upper)));
    }
    out
}

pub fn write_bands(
    dir: &Path,
    stem: &str,
    a: &BandsArgs,
    p: &XxzParams,
    rows: &[BandRow],
    started: DateTime<Utc>,
) -> Result<PathBuf, Failure> {
    let files = vec![("csv".to_string(), bands_csv(a, p, rows)?), ("dat".to_string(), bands_dat(rows))];
    let pairs: Vec<Value> = bands_pairs(a, p).into_iter().map(|(k, v)| json!([k, v])).collect();
    let mut m = Map::new();
    m.insert("artifact".into(), stem.into());
    m.insert("version".into(), env!("CARGO_PKG_VERSION").into());
    m.insert("subcommand".into(), "xxz-bands".into());
    m.insert("started".into(), stamp(started).into());
    m.insert("config".into(), Value::Array(pairs));
    m.insert("config_sha256".into(), bands_hash(a, p).into());
    m.insert("seed_plan".into(), Value::Null);
    m.insert("units".into(), UNITS.into());
    write_files(dir, stem, &files, m)
}
