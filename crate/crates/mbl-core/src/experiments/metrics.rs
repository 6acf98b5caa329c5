//! Per-realization measurements, one function per experiment kind.

use ndarray::Axis;
use rand::seq::index::sample;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::config::{BlockPlacement, ExperimentConfig, ExperimentKind, XyState};
use super::summary::Observation;
use crate::disorder::{sample_field_seeded, DisorderKind, FieldRealization};
use crate::error::Result;
use crate::oracle::{self, EigenFrame, ManyBodyEigenSystem, Model};
use crate::xxz::{self, EnergyWindow};
use crate::xy::{self, OccupationPattern, SupStrategy};

/// Everything a single realization may draw from.
#[derive(Debug, Clone, Copy)]
pub struct RealizationContext<'a> {
    pub config: &'a ExperimentConfig,
    pub index: usize,
    pub seed: u64,
}

const JITTER_STREAM: u64 = 1;
const PATTERN_STREAM: u64 = 2;
const SAMPLE_STREAM: u64 = 3;

impl RealizationContext<'_> {
    /// Generator for an auxiliary stream; stream 0 is reserved for the field itself.
    pub fn rng(&self, stream: u64) -> ChaCha8Rng {
        let mut rng = ChaCha8Rng::seed_from_u64(self.seed);
        rng.set_stream(stream + 1);
        rng
    }

    pub fn field(&self) -> Result<FieldRealization> {
        let c = self.config;
        let mut f = sample_field_seeded(&c.disorder, c.sites(), self.seed, self.index as u64)?;
        if c.jitter > 0.0 {
            let mut rng = self.rng(JITTER_STREAM);
            for w in f.values.iter_mut() {
                *w += c.jitter * rng.random::<f64>();
            }
        }
        Ok(f)
    }

    /// Whether a redraw can change the outcome.
    pub fn is_random(&self) -> bool {
        self.config.jitter > 0.0 || !matches!(self.config.disorder.kind, DisorderKind::Constant)
    }
}

pub fn measure(ctx: &RealizationContext) -> Result<Vec<Observation>> {
    match ctx.config.kind {
        ExperimentKind::XyEigencorrelator | ExperimentKind::XyKernel => xy_correlators(ctx),
        ExperimentKind::XyAreaLaw => xy_area_law(ctx),
        ExperimentKind::XyQuench => xy_quench(ctx),
        ExperimentKind::XyAnisotropic => xy_anisotropic(ctx),
        ExperimentKind::XxzDropletDecay => xxz_droplet_decay(ctx),
        ExperimentKind::XxzAreaLaw => xxz_area_law(ctx),
        ExperimentKind::XxzDropletLocalization => xxz_droplet_localization(ctx),
        ExperimentKind::XxzClustering => xxz_clustering(ctx),
        ExperimentKind::XxzCombesThomas => xxz_combes_thomas(ctx),
        ExperimentKind::LightConeXy | ExperimentKind::LightConeXxz => light_cone(ctx),
        ExperimentKind::QuasiLocality => quasi_locality(ctx),
        ExperimentKind::IsingLogLaw => ising_log_law(ctx),
    }
}

fn xy_eigensystem(ctx: &RealizationContext) -> Result<xy::EigenSystem> {
    let es = xy::diagonalize(&xy::build_m(&ctx.field()?)?)?;
    es.ensure_simple()?;
    Ok(es)
}

fn xy_correlators(ctx: &RealizationContext) -> Result<Vec<Observation>> {
    let c = ctx.config;
    let es = xy_eigensystem(ctx)?;
    let j = c.reference_site();
    let ecorr = xy::eigencorrelator_profile(&es, j)?;
    let mut out = Vec::new();
    let kernel = if c.kind == ExperimentKind::XyKernel {
        Some(xy::dynamical_kernel_profile(&es, &c.time_grid.values(), j)?)
    } else {
        None
    };
    for d in c.distance_set() {
        out.push(Observation::new("eigencorrelator", d as f64, ecorr[j + d]));
        if let Some(k) = &kernel {
            out.push(Observation::new("kernel", d as f64, k[j + d]));
        }
    }
    Ok(out)
}

fn xy_area_law(ctx: &RealizationContext) -> Result<Vec<Observation>> {
    let c = ctx.config;
    let es = xy_eigensystem(ctx)?;
    let n = es.size();
    let mut out = Vec::new();
    match c.state {
        XyState::GroundState => {
            let g = xy::eigenstate_two_point(&es, &xy::ground_state_pattern(&es))?;
            for ell in c.distance_set() {
                let start = match c.block {
                    BlockPlacement::Left => 0,
                    BlockPlacement::Centered => (n - ell) / 2,
                };
                let s = xy::entanglement_entropy(&xy::restrict_block(&g, start, ell)?)?;
                out.push(Observation::new("entropy", ell as f64, s));
            }
        }
        XyState::SampledSup => {
            let strategy = SupStrategy {
                samples: c.samples,
                heuristics: true,
                exhaustive_up_to: 14,
                seed: ctx.rng(PATTERN_STREAM).random(),
            };
            for ell in c.distance_set() {
                let est = xy::sample_eigenstate_entropy_sup(&es, ell, &strategy)?;
                out.push(Observation::new("entropy", ell as f64, est.value));
            }
        }
    }
    Ok(out)
}

fn xy_quench(ctx: &RealizationContext) -> Result<Vec<Observation>> {
    let c = ctx.config;
    let m = xy::build_m(&ctx.field()?)?;
    let es = xy::diagonalize(&m)?;
    let n = es.size();
    let grid = c.time_grid.values();
    let mut rng = ctx.rng(PATTERN_STREAM);
    let mut out = Vec::new();
    for ell in c.distance_set() {
        let es_a = xy::diagonalize(&m.sub_chain(0, ell)?)?;
        let es_b = xy::diagonalize(&m.sub_chain(ell, n - ell)?)?;
        let pa = OccupationPattern::random(ell, &mut rng);
        let pb = OccupationPattern::random(n - ell, &mut rng);
        let phi = xy::quench_factor(&es_a, &pa, &es_b, &pb)?;
        let series = xy::quench_entropy_series(&es, &phi, ell, &grid)?;
        let max = series.iter().copied().fold(0.0, f64::max);
        out.push(Observation::new("entropy_max", ell as f64, max));
        out.push(Observation::new("entropy_final", ell as f64, *series.last().unwrap_or(&0.0)));
    }
    Ok(out)
}

fn xy_anisotropic(ctx: &RealizationContext) -> Result<Vec<Observation>> {
    let c = ctx.config;
    let block = xy::build_block_m(&ctx.field()?, c.gamma)?;
    let es = xy::EigenSystem::from_symmetric(&block.matrix)?;
    let n = block.m.size();
    let j = c.reference_site();
    // amplitude of mode k on site j combines the particle and hole components
    let amp = |s: usize, k: usize| es.vectors[[s, k]].hypot(es.vectors[[n + s, k]]);
    let mut out = vec![Observation::new("density_near_zero", 0.0, xy::density_near_zero(&es.values, 0.1))];
    for d in c.distance_set() {
        let v: f64 = (0..2 * n).map(|k| amp(j, k) * amp(j + d, k)).sum();
        out.push(Observation::new("eigencorrelator", d as f64, v));
    }
    Ok(out)
}

fn window(c: &ExperimentConfig) -> Result<EnergyWindow> {
    xxz::spectral_window(c.anisotropy, c.delta, c.window)
}

fn xxz_droplet_decay(ctx: &RealizationContext) -> Result<Vec<Observation>> {
    let c = ctx.config;
    let h = xxz::build_h_sector(c.particles, c.length, &c.xxz_params(), &ctx.field()?)?;
    let pairs = xxz::eigenpairs_in_window(&h, &window(c)?)?;
    let geo = xxz::DropletGeometry::new(&h.basis);
    let rmax = geo.max_distance();
    let mut ratio_max = vec![0.0f64; rmax + 1];
    let mut mass_sum = vec![0.0f64; rmax + 1];
    for col in pairs.vectors.axis_iter(Axis(1)) {
        let prof = xxz::droplet_profile(col, &geo);
        for r in 0..=rmax {
            ratio_max[r] = ratio_max[r].max(prof[r] / prof[0]);
            mass_sum[r] += prof[r];
        }
    }
    let mut out = vec![Observation::new("eigenpairs", 0.0, pairs.len() as f64)];
    if !pairs.is_empty() {
        for r in 0..=rmax {
            out.push(Observation::new("ratio_max", r as f64, ratio_max[r]));
            out.push(Observation::new("mass_mean", r as f64, mass_sum[r] / pairs.len() as f64));
        }
    }
    Ok(out)
}

fn oracle_system(ctx: &RealizationContext, model: Model) -> Result<ManyBodyEigenSystem> {
    oracle::build_full(model, &ctx.field()?)?.diagonalize()
}

fn xxz_area_law(ctx: &RealizationContext) -> Result<Vec<Observation>> {
    let c = ctx.config;
    let es = oracle_system(ctx, Model::Xxz(c.xxz_params()))?;
    let n = es.sites;
    let pos = es.window_positions(&window(c)?);
    let cuts = c.distance_set();
    let mut max = vec![0.0f64; cuts.len()];
    let mut sum = vec![0.0f64; cuts.len()];
    for &k in &pos {
        let psi = es.eigenvector(k);
        for (i, &ell) in cuts.iter().enumerate() {
            let s = oracle::reduced_entropy_real(&psi, n, ell)?;
            max[i] = max[i].max(s);
            sum[i] += s;
        }
    }
    let mut out = vec![Observation::new("states", 0.0, pos.len() as f64)];
    if !pos.is_empty() {
        for (i, &ell) in cuts.iter().enumerate() {
            out.push(Observation::new("entropy_max", ell as f64, max[i]));
            out.push(Observation::new("entropy_mean", ell as f64, sum[i] / pos.len() as f64));
        }
    }
    Ok(out)
}

fn xxz_droplet_localization(ctx: &RealizationContext) -> Result<Vec<Observation>> {
    let c = ctx.config;
    let params = c.xxz_params();
    let field = ctx.field()?;
    let w = window(c)?;
    let n = c.sites();
    let mut q = ndarray::Array2::<f64>::zeros((n, n));
    let mut skipped = 0usize;
    let mut count = 0usize;
    for particles in 1..=n {
        // the sector spectrum starts above this bound; nothing to collect
        if xxz::sector_lower_bound(particles, &params, &field) > w.upper {
            skipped += 1;
            continue;
        }
        let h = xxz::build_h_sector(particles, c.length, &params, &field)?;
        let pairs = xxz::eigenpairs_in_window(&h, &w)?;
        if pairs.is_empty() {
            continue;
        }
        pairs.ensure_simple()?;
        count += pairs.len();
        q += &xxz::correlator_matrix(&h.basis, &pairs);
    }
    let mut out = vec![
        Observation::new("eigenpairs", 0.0, count as f64),
        Observation::new("sectors_skipped", 0.0, skipped as f64),
    ];
    for d in c.distance_set() {
        let vals: Vec<f64> = (0..n - d).map(|j| q[[j, j + d]]).collect();
        out.push(Observation::new("correlator", d as f64, vals.iter().sum::<f64>() / vals.len() as f64));
    }
    Ok(out)
}

fn xxz_clustering(ctx: &RealizationContext) -> Result<Vec<Observation>> {
    let c = ctx.config;
    let es = oracle_system(ctx, Model::Xxz(c.xxz_params()))?;
    let n = es.sites;
    let frame = EigenFrame::new(&es, Some(&window(c)?));
    let j = c.reference_site();
    let grid = c.time_grid.values();
    let xe = frame.project(&es, &oracle::site_operator(n, j, c.observable));
    let occ = |q: usize| -> Vec<f64> {
        let p = frame.project(&es, &oracle::site_operator(n, q, oracle::SiteKind::Number));
        (0..frame.dim()).map(|a| p[[a, a]].re.max(0.0).sqrt()).collect()
    };
    let occ_j = occ(j);
    let mut out = vec![Observation::new("states", 0.0, frame.dim() as f64)];
    if frame.dim() == 0 {
        return Ok(out);
    }
    for d in c.distance_set() {
        let ye = frame.project(&es, &oracle::site_operator(n, j + d, c.observable2));
        let mut best = 0.0f64;
        for &t in &grid {
            best = oracle::eigenstate_correlations(&frame, &xe, &ye, t).into_iter().fold(best, f64::max);
        }
        let occ_k = occ(j + d);
        let bound = occ_j.iter().zip(&occ_k).map(|(a, b)| a * b).fold(0.0, f64::max);
        out.push(Observation::new("correlation_max", d as f64, best));
        out.push(Observation::new("number_bound_max", d as f64, bound));
    }
    Ok(out)
}

fn xxz_combes_thomas(ctx: &RealizationContext) -> Result<Vec<Observation>> {
    let c = ctx.config;
    let h = xxz::build_h_sector(c.particles, c.length, &c.xxz_params(), &ctx.field()?)?;
    let mut rng = ctx.rng(SAMPLE_STREAM);
    let top = (2.0 - c.delta) * h.params.threshold();
    let energy = rng.random::<f64>() * top;
    let dim = h.dim();
    let draw = |rng: &mut ChaCha8Rng| -> Vec<usize> {
        let k = rng.random_range(1..=c.samples.min(dim));
        let mut v = sample(rng, dim, k).into_vec();
        v.sort_unstable();
        v
    };
    let a = draw(&mut rng);
    let b = draw(&mut rng);
    let chk = xxz::ct_check(&h, energy, c.delta, &a, &b)?;
    let x = chk.distance as f64;
    Ok(vec![
        Observation::new("measured", x, chk.measured),
        Observation::new("bound", x, chk.bound),
        Observation::new("ratio", x, chk.measured / chk.bound),
        Observation::new("energy", x, energy),
    ])
}

fn light_cone(ctx: &RealizationContext) -> Result<Vec<Observation>> {
    let c = ctx.config;
    let (model, win) = if c.kind == ExperimentKind::LightConeXxz {
        (Model::Xxz(c.xxz_params()), Some(window(c)?))
    } else {
        (Model::Xy, None)
    };
    let es = oracle_system(ctx, model)?;
    let n = es.sites;
    let frame = EigenFrame::new(&es, win.as_ref());
    let j = c.reference_site();
    let grid = c.time_grid.values();
    let xe = frame.project(&es, &oracle::site_operator(n, j, c.observable));
    let mut out = vec![Observation::new("states", 0.0, frame.dim() as f64)];
    for d in c.distance_set() {
        let ye = frame.project(&es, &oracle::site_operator(n, j + d, c.observable2));
        let norms = oracle::commutator_norms_in_frame(&frame, &xe, &ye, &grid)?;
        let x = d as f64;
        out.push(Observation::new("operator_max", x, norms.iter().map(|r| r.operator).fold(0.0, f64::max)));
        if norms.iter().all(|r| r.trace.is_some()) {
            let tr = norms.iter().filter_map(|r| r.trace).fold(0.0, f64::max);
            out.push(Observation::new("trace_max", x, tr));
        }
        if let Some(r) = norms.iter().find(|r| r.operator > c.threshold) {
            out.push(Observation::new("arrival", x, r.t));
        }
    }
    Ok(out)
}

fn quasi_locality(ctx: &RealizationContext) -> Result<Vec<Observation>> {
    let c = ctx.config;
    let es = oracle_system(ctx, Model::Xxz(c.xxz_params()))?;
    let j = c.reference_site();
    let x = oracle::site_operator(es.sites, j, c.observable);
    let ells = c.distance_set();
    let errs =
        oracle::quasi_locality_profile(&es, &x, oracle::single_site(j), &ells, &c.time_grid.values(), &window(c)?)?;
    let mut out = Vec::new();
    for (i, &ell) in ells.iter().enumerate() {
        let max = errs.iter().map(|row| row[i]).fold(0.0, f64::max);
        out.push(Observation::new("error_max", ell as f64, max));
    }
    Ok(out)
}

/// Matrix path is cross-checked up to this length.
const ISING_MATRIX_CHECK: usize = 6;

fn ising_log_law(ctx: &RealizationContext) -> Result<Vec<Observation>> {
    let mut out = Vec::new();
    for ell in ctx.config.distance_set() {
        let x = ell as f64;
        out.push(Observation::new("entropy", x, oracle::droplet_superposition_entropy_combinatorial(ell)?));
        if ell <= ISING_MATRIX_CHECK {
            out.push(Observation::new(
                "entropy_matrix",
                x,
                oracle::droplet_superposition_entropy_matrix(ell, 2 * ell)?,
            ));
        }
    }
    Ok(out)
}
