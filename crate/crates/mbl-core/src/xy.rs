//! Free-fermion description of the (an)isotropic XY chain.
//!
//! Sites are 0-based internally. The chain Hamiltonian is `2 c^* M c + E0` with `M`
//! tridiagonal (field on the diagonal, -1 on the off-diagonals) and `E0 = -sum(field)`.

use ndarray::{s, Array1, Array2, Axis};
use rand::Rng;

use crate::disorder::{FieldRealization, SeedPlan};
use crate::error::{Error, Result};
use crate::linalg::{self, Selection, C64};

/// Minimum eigenvalue gap below which a spectrum is treated as degenerate.
pub const DEGENERACY_TOL: f64 = 1e-12;

#[derive(Debug, Clone, PartialEq)]
pub struct EffectiveHamiltonian {
    pub diagonal: Vec<f64>,
    pub ground_offset: f64,
}

impl EffectiveHamiltonian {
    pub const HOPPING: f64 = -1.0;

    pub fn size(&self) -> usize {
        self.diagonal.len()
    }

    pub fn to_dense(&self) -> Array2<f64> {
        let n = self.size();
        let mut m = Array2::from_diag(&Array1::from(self.diagonal.clone()));
        for j in 0..n.saturating_sub(1) {
            m[[j, j + 1]] = Self::HOPPING;
            m[[j + 1, j]] = Self::HOPPING;
        }
        m
    }

    /// Principal sub-block on sites `start..start + len`.
    pub fn sub_chain(&self, start: usize, len: usize) -> Result<EffectiveHamiltonian> {
        if len == 0 || start + len > self.size() {
            return Err(Error::Size(format!("sub-chain {start}..{} of a {}-site chain", start + len, self.size())));
        }
        let diagonal = self.diagonal[start..start + len].to_vec();
        let ground_offset = -diagonal.iter().sum::<f64>();
        Ok(EffectiveHamiltonian { diagonal, ground_offset })
    }
}

pub fn build_m(field: &FieldRealization) -> Result<EffectiveHamiltonian> {
    if field.is_empty() {
        return Err(Error::Size("field must have at least one site".into()));
    }
    Ok(EffectiveHamiltonian { diagonal: field.values.clone(), ground_offset: -field.values.iter().sum::<f64>() })
}

/// The 2L x 2L matrix `[[M, K], [-K, -M]]` of the anisotropic chain.
#[derive(Debug, Clone, PartialEq)]
pub struct BlockEffectiveHamiltonian {
    pub m: EffectiveHamiltonian,
    pub gamma: f64,
    pub matrix: Array2<f64>,
}

impl BlockEffectiveHamiltonian {
    /// The antisymmetric pairing block: -gamma above the diagonal, +gamma below.
    pub fn k_block(&self) -> Array2<f64> {
        let n = self.m.size();
        let mut k = Array2::zeros((n, n));
        for j in 0..n.saturating_sub(1) {
            k[[j, j + 1]] = -self.gamma;
            k[[j + 1, j]] = self.gamma;
        }
        k
    }
}

pub fn build_block_m(field: &FieldRealization, gamma: f64) -> Result<BlockEffectiveHamiltonian> {
    let m = build_m(field)?;
    let n = m.size();
    let md = m.to_dense();
    let mut matrix = Array2::zeros((2 * n, 2 * n));
    matrix.slice_mut(s![..n, ..n]).assign(&md);
    matrix.slice_mut(s![n.., n..]).assign(&(-&md));
    let mut out = BlockEffectiveHamiltonian { m, gamma, matrix };
    let k = out.k_block();
    out.matrix.slice_mut(s![..n, n..]).assign(&k);
    out.matrix.slice_mut(s![n.., ..n]).assign(&(-&k));
    Ok(out)
}

/// Orthogonal eigen-decomposition with ascending eigenvalues; eigenvectors are columns.
#[derive(Debug, Clone, PartialEq)]
pub struct EigenSystem {
    pub values: Vec<f64>,
    pub vectors: Array2<f64>,
}

impl EigenSystem {
    pub fn size(&self) -> usize {
        self.values.len()
    }

    pub fn from_symmetric(a: &Array2<f64>) -> Result<EigenSystem> {
        let e = linalg::eigh_sym(a, Selection::All, true)?;
        Ok(EigenSystem { values: e.values, vectors: e.vectors })
    }

    pub fn orthogonality_error(&self) -> f64 {
        let g = self.vectors.t().dot(&self.vectors);
        linalg::max_abs_diff(&g, &Array2::eye(self.size()))
    }

    pub fn reconstruction_error(&self, a: &Array2<f64>) -> f64 {
        let lam = Array2::from_diag(&Array1::from(self.values.clone()));
        let rec = self.vectors.dot(&lam).dot(&self.vectors.t());
        linalg::max_abs_diff(&rec, a)
    }

    pub fn min_gap(&self) -> f64 {
        linalg::min_gap(&self.values)
    }

    pub fn ensure_simple(&self) -> Result<()> {
        let gap = self.min_gap();
        if gap <= DEGENERACY_TOL {
            return Err(Error::Degenerate { gap, tol: DEGENERACY_TOL });
        }
        Ok(())
    }

    fn check_site(&self, j: usize) -> Result<()> {
        if j >= self.size() {
            return Err(Error::OutOfRange { index: j, len: self.size() });
        }
        Ok(())
    }

    /// `O f(Λ) Oᵀ` for a real spectral function.
    pub fn spectral_function(&self, f: impl Fn(f64) -> f64) -> Array2<f64> {
        let mut scaled = self.vectors.clone();
        for (mut col, &l) in scaled.axis_iter_mut(Axis(1)).zip(&self.values) {
            col *= f(l);
        }
        scaled.dot(&self.vectors.t())
    }

    /// `e^{-i s M}` as a dense complex matrix.
    pub fn propagator(&self, s: f64) -> Array2<C64> {
        let re = self.spectral_function(|l| (s * l).cos());
        let im = self.spectral_function(|l| -(s * l).sin());
        ndarray::Zip::from(&re).and(&im).map_collect(|&a, &b| C64::new(a, b))
    }
}

pub fn diagonalize(m: &EffectiveHamiltonian) -> Result<EigenSystem> {
    let off = vec![EffectiveHamiltonian::HOPPING; m.size().saturating_sub(1)];
    let e = linalg::eigh_tridiagonal(&m.diagonal, &off, Selection::All, true)?;
    Ok(EigenSystem { values: e.values, vectors: e.vectors })
}

/// `Σ_ℓ |φ_ℓ(j)| |φ_ℓ(k)|`.
pub fn eigencorrelator(es: &EigenSystem, j: usize, k: usize) -> Result<f64> {
    es.check_site(j)?;
    es.check_site(k)?;
    Ok(es.vectors.row(j).iter().zip(es.vectors.row(k).iter()).map(|(a, b)| (a * b).abs()).sum())
}

/// Eigencorrelator from site `j` to every site.
pub fn eigencorrelator_profile(es: &EigenSystem, j: usize) -> Result<Vec<f64>> {
    es.check_site(j)?;
    let aj = es.vectors.row(j).mapv(f64::abs);
    Ok(es.vectors.mapv(f64::abs).dot(&aj).to_vec())
}

/// max over the grid of `|(e^{-itM})_{jk}|`.
pub fn dynamical_kernel(es: &EigenSystem, time_grid: &[f64], j: usize, k: usize) -> Result<f64> {
    es.check_site(j)?;
    es.check_site(k)?;
    let w: Vec<f64> = es.vectors.row(j).iter().zip(es.vectors.row(k).iter()).map(|(a, b)| a * b).collect();
    let mut best = 0.0f64;
    for &t in time_grid {
        let mut z = C64::new(0.0, 0.0);
        for (l, &wl) in es.values.iter().zip(&w) {
            z += C64::from_polar(wl, -t * l);
        }
        best = best.max(z.norm());
    }
    Ok(best)
}

/// max over the grid of `|(e^{-itM})_{jk}|` for every `k` at once.
pub fn dynamical_kernel_profile(es: &EigenSystem, time_grid: &[f64], j: usize) -> Result<Vec<f64>> {
    es.check_site(j)?;
    let n = es.size();
    let nt = time_grid.len();
    let mut wr = Array2::zeros((nt, n));
    let mut wi = Array2::zeros((nt, n));
    for (a, &t) in time_grid.iter().enumerate() {
        for l in 0..n {
            let amp = es.vectors[[j, l]];
            wr[[a, l]] = amp * (t * es.values[l]).cos();
            wi[[a, l]] = -amp * (t * es.values[l]).sin();
        }
    }
    let re = wr.dot(&es.vectors.t());
    let im = wi.dot(&es.vectors.t());
    let mut best = vec![0.0f64; n];
    for a in 0..nt {
        for k in 0..n {
            best[k] = best[k].max(re[[a, k]].hypot(im[[a, k]]));
        }
    }
    Ok(best)
}

/// Occupation bits of the eigenmodes (in ascending eigenvalue order).
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct OccupationPattern(pub Vec<bool>);

impl OccupationPattern {
    pub fn empty(n: usize) -> Self {
        OccupationPattern(vec![false; n])
    }

    pub fn full(n: usize) -> Self {
        OccupationPattern(vec![true; n])
    }

    /// Bit `ℓ` of `code` occupies mode `ℓ`.
    pub fn from_code(code: u64, n: usize) -> Self {
        OccupationPattern((0..n).map(|l| (code >> l) & 1 == 1).collect())
    }

    pub fn random(n: usize, rng: &mut impl Rng) -> Self {
        OccupationPattern((0..n).map(|_| rng.random::<bool>()).collect())
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn count(&self) -> usize {
        self.0.iter().filter(|&&b| b).count()
    }

    pub fn occupied(&self) -> impl Iterator<Item = usize> + '_ {
        self.0.iter().enumerate().filter(|(_, &b)| b).map(|(l, _)| l)
    }

    fn check(&self, n: usize) -> Result<()> {
        if self.len() != n {
            return Err(Error::Size(format!("pattern of length {} for {} modes", self.len(), n)));
        }
        Ok(())
    }
}

pub fn eigenstate_energy(es: &EigenSystem, alpha: &OccupationPattern, ground_offset: f64) -> Result<f64> {
    alpha.check(es.size())?;
    Ok(2.0 * alpha.occupied().map(|l| es.values[l]).sum::<f64>() + ground_offset)
}

/// Two-point matrix `Γ` as a complex Hermitian matrix.
#[derive(Debug, Clone, PartialEq)]
pub struct CorrelationMatrix {
    pub gamma: Array2<C64>,
}

impl CorrelationMatrix {
    pub fn from_real(g: Array2<f64>) -> Self {
        CorrelationMatrix { gamma: linalg::to_complex(&g) }
    }

    pub fn size(&self) -> usize {
        self.gamma.nrows()
    }

    pub fn eigenvalues(&self) -> Result<Vec<f64>> {
        Ok(linalg::eigvalsh_herm(&self.gamma)?.to_vec())
    }

    pub fn hermiticity_error(&self) -> f64 {
        linalg::max_abs_diff_c(&self.gamma, &linalg::adjoint(&self.gamma))
    }

    /// `max |Γ² − Γ|`, zero for projections.
    pub fn idempotency_error(&self) -> f64 {
        linalg::max_abs_diff_c(&self.gamma.dot(&self.gamma), &self.gamma)
    }
}

fn projector(es: &EigenSystem, modes: impl Iterator<Item = usize>) -> Array2<f64> {
    let cols: Vec<usize> = modes.collect();
    let phi = es.vectors.select(Axis(1), &cols);
    phi.dot(&phi.t())
}

/// Spectral projection onto the occupied modes, `χ_{Δ_α}(M)`.
pub fn eigenstate_correlation_matrix(es: &EigenSystem, alpha: &OccupationPattern) -> Result<CorrelationMatrix> {
    alpha.check(es.size())?;
    es.ensure_simple()?;
    Ok(CorrelationMatrix::from_real(projector(es, alpha.occupied())))
}

/// `⟨c_j c_k^*⟩` in the eigenstate with occupation `alpha`: the projection onto the empty modes.
pub fn eigenstate_two_point(es: &EigenSystem, alpha: &OccupationPattern) -> Result<CorrelationMatrix> {
    alpha.check(es.size())?;
    es.ensure_simple()?;
    let empty = (0..es.size()).filter(|&l| !alpha.0[l]);
    Ok(CorrelationMatrix::from_real(projector(es, empty)))
}

/// `⟨c_j c_k^*⟩` in the Gibbs state at inverse temperature `b`: `(I + e^{-2bM})^{-1}`.
pub fn thermal_correlation_matrix(es: &EigenSystem, b: f64) -> Result<CorrelationMatrix> {
    if !(b >= 0.0) || !b.is_finite() {
        return Err(Error::Config(format!("inverse temperature must be finite and >= 0, got {b}")));
    }
    Ok(CorrelationMatrix::from_real(es.spectral_function(|l| {
        let x = -2.0 * b * l;
        if x > 700.0 {
            0.0
        } else {
            1.0 / (1.0 + x.exp())
        }
    })))
}

/// Leading principal `ell x ell` block.
pub fn restrict_upper_block(g: &CorrelationMatrix, ell: usize) -> Result<CorrelationMatrix> {
    if ell == 0 || ell >= g.size() {
        return Err(Error::OutOfRange { index: ell, len: g.size() });
    }
    restrict_block(g, 0, ell)
}

/// Principal block on sites `start..start + len`.
pub fn restrict_block(g: &CorrelationMatrix, start: usize, len: usize) -> Result<CorrelationMatrix> {
    if len == 0 || start + len > g.size() {
        return Err(Error::OutOfRange { index: start + len, len: g.size() });
    }
    Ok(CorrelationMatrix { gamma: g.gamma.slice(s![start..start + len, start..start + len]).to_owned() })
}

const SPECTRUM_TOL: f64 = 1e-10;

pub(crate) fn entropy_of_spectrum(ev: impl IntoIterator<Item = f64>) -> Result<f64> {
    let mut s = 0.0;
    for v in ev {
        if !(-SPECTRUM_TOL..=1.0 + SPECTRUM_TOL).contains(&v) {
            return Err(Error::InvalidCorrelation(v));
        }
        s += linalg::binary_entropy(v.clamp(0.0, 1.0));
    }
    Ok(s)
}

/// `−tr h(Γ_A)` in nats.
pub fn entanglement_entropy(g: &CorrelationMatrix) -> Result<f64> {
    entropy_of_spectrum(g.eigenvalues()?)
}

/// Same as [`entanglement_entropy`] for a real symmetric block.
pub fn entanglement_entropy_real(g: &Array2<f64>) -> Result<f64> {
    entropy_of_spectrum(linalg::eigvalsh_sym(g)?)
}

/// `Γ(t) = e^{-2iMt} Γ e^{2iMt}`.
pub fn evolve_correlation_matrix(g: &CorrelationMatrix, es: &EigenSystem, t: f64) -> Result<CorrelationMatrix> {
    if g.size() != es.size() {
        return Err(Error::Size(format!("Γ is {} but M is {}", g.size(), es.size())));
    }
    let u = es.propagator(2.0 * t);
    Ok(CorrelationMatrix { gamma: u.dot(&g.gamma).dot(&linalg::adjoint(&u)) })
}

/// Block-diagonal `⟨c c^*⟩` of a product of subsystem eigenstates.
pub fn quench_initial_gamma(
    es_a: &EigenSystem,
    alpha_a: &OccupationPattern,
    es_b: &EigenSystem,
    alpha_b: &OccupationPattern,
) -> Result<CorrelationMatrix> {
    if es_a.size() == 0 || es_b.size() == 0 {
        return Err(Error::Size("quench needs two nonempty subsystems".into()));
    }
    let ga = eigenstate_two_point(es_a, alpha_a)?;
    let gb = eigenstate_two_point(es_b, alpha_b)?;
    let (na, nb) = (es_a.size(), es_b.size());
    let mut gamma = Array2::zeros((na + nb, na + nb));
    gamma.slice_mut(s![..na, ..na]).assign(&ga.gamma);
    gamma.slice_mut(s![na.., na..]).assign(&gb.gamma);
    Ok(CorrelationMatrix { gamma })
}

/// Columns spanning the empty modes of a product of subsystem eigenstates, so that
/// `⟨c c^*⟩ = Φ Φᵀ` (the same matrix as [`quench_initial_gamma`]).
pub fn quench_factor(
    es_a: &EigenSystem,
    alpha_a: &OccupationPattern,
    es_b: &EigenSystem,
    alpha_b: &OccupationPattern,
) -> Result<Array2<f64>> {
    if es_a.size() == 0 || es_b.size() == 0 {
        return Err(Error::Size("quench needs two nonempty subsystems".into()));
    }
    alpha_a.check(es_a.size())?;
    alpha_b.check(es_b.size())?;
    es_a.ensure_simple()?;
    es_b.ensure_simple()?;
    let (na, nb) = (es_a.size(), es_b.size());
    let empty_a: Vec<usize> = (0..na).filter(|&l| !alpha_a.0[l]).collect();
    let empty_b: Vec<usize> = (0..nb).filter(|&l| !alpha_b.0[l]).collect();
    let mut phi = Array2::zeros((na + nb, empty_a.len() + empty_b.len()));
    phi.slice_mut(s![..na, ..empty_a.len()]).assign(&es_a.vectors.select(Axis(1), &empty_a));
    phi.slice_mut(s![na.., empty_a.len()..]).assign(&es_b.vectors.select(Axis(1), &empty_b));
    Ok(phi)
}

/// Entropy of sites `0..ell` in the evolved state `e^{-2iMt} Φ Φᵀ e^{2iMt}` for every grid time.
/// Works with the `ell × m` factor `W = (e^{-2iMt} Φ)_{0..ell}` instead of `L × L` matrices.
pub fn quench_entropy_series(es: &EigenSystem, phi: &Array2<f64>, ell: usize, time_grid: &[f64]) -> Result<Vec<f64>> {
    let n = es.size();
    if phi.nrows() != n {
        return Err(Error::Size(format!("factor has {} rows but M is {n}", phi.nrows())));
    }
    if ell == 0 || ell >= n {
        return Err(Error::OutOfRange { index: ell, len: n });
    }
    let psi = es.vectors.t().dot(phi);
    let o_a = es.vectors.slice(s![..ell, ..]);
    let m = phi.ncols();
    if m == 0 {
        return Ok(vec![0.0; time_grid.len()]);
    }
    let mut out = Vec::with_capacity(time_grid.len());
    for &t in time_grid {
        let mut cos_psi = psi.clone();
        let mut sin_psi = psi.clone();
        for (l, &lam) in es.values.iter().enumerate() {
            let (s_, c_) = (2.0 * lam * t).sin_cos();
            cos_psi.row_mut(l).mapv_inplace(|x| x * c_);
            sin_psi.row_mut(l).mapv_inplace(|x| -x * s_);
        }
        let wr = o_a.dot(&cos_psi);
        let wi = o_a.dot(&sin_psi);
        // nonzero spectrum of W W^* equals that of W^* W
        let g: Array2<C64> = if ell <= m {
            let re = wr.dot(&wr.t()) + wi.dot(&wi.t());
            let im = wi.dot(&wr.t()) - wr.dot(&wi.t());
            ndarray::Zip::from(&re).and(&im).map_collect(|&a, &b| C64::new(a, b))
        } else {
            let re = wr.t().dot(&wr) + wi.t().dot(&wi);
            let im = wr.t().dot(&wi) - wi.t().dot(&wr);
            ndarray::Zip::from(&re).and(&im).map_collect(|&a, &b| C64::new(a, b))
        };
        out.push(entropy_of_spectrum(linalg::eigvalsh_herm(&g)?)?);
    }
    Ok(out)
}

/// Ground-state `⟨c c^*⟩`: every negative-energy mode is occupied.
pub fn ground_state_pattern(es: &EigenSystem) -> OccupationPattern {
    OccupationPattern(es.values.iter().map(|&l| l < 0.0).collect())
}

/// How the supremum over eigenstates is estimated.
#[derive(Debug, Clone, PartialEq)]
pub struct SupStrategy {
    pub samples: usize,
    pub heuristics: bool,
    /// Enumerate all 2^L patterns when L is at most this.
    pub exhaustive_up_to: usize,
    pub seed: u64,
}

impl Default for SupStrategy {
    fn default() -> Self {
        SupStrategy { samples: 500, heuristics: true, exhaustive_up_to: 14, seed: 0 }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SupEstimate {
    /// Largest entropy found; a lower estimate of the true supremum unless `exhaustive`.
    pub value: f64,
    pub exhaustive: bool,
    pub patterns: usize,
}

/// Upper-block entropy of the eigenstate `alpha` using rows `0..ell` of the eigenvectors.
fn block_entropy(phi_a: &Array2<f64>, alpha: &OccupationPattern) -> Result<f64> {
    let ell = phi_a.nrows();
    let occ: Vec<usize> = alpha.occupied().collect();
    if occ.is_empty() || occ.len() == alpha.len() {
        return Ok(0.0);
    }
    // Γ_A and I − Γ_A (empty modes) have the same entropy; use the smaller side.
    let cols: Vec<usize> =
        if 2 * occ.len() <= alpha.len() { occ } else { (0..alpha.len()).filter(|&l| !alpha.0[l]).collect() };
    let sub = phi_a.select(Axis(1), &cols);
    let g = if cols.len() < ell {
        // nonzero spectrum of sub subᵀ equals that of subᵀ sub
        sub.t().dot(&sub)
    } else {
        sub.dot(&sub.t())
    };
    entanglement_entropy_real(&g)
}

fn straddling_patterns(es: &EigenSystem, ell: usize) -> Vec<OccupationPattern> {
    let n = es.size();
    let weight: Vec<f64> = (0..n).map(|l| es.vectors.slice(s![..ell, l]).iter().map(|x| x * x).sum()).collect();
    let straddle: Vec<usize> = (0..n).filter(|&l| weight[l] > 0.05 && weight[l] < 0.95).collect();
    let mut all = OccupationPattern::empty(n);
    let mut alt = OccupationPattern::empty(n);
    for (i, &l) in straddle.iter().enumerate() {
        all.0[l] = true;
        alt.0[l] = i % 2 == 0;
    }
    let mut left = OccupationPattern::empty(n);
    for l in 0..n {
        left.0[l] = weight[l] > 0.5;
    }
    vec![all, alt, left]
}

/// Max upper-block entropy over sampled (or all) eigenstates.
pub fn sample_eigenstate_entropy_sup(es: &EigenSystem, ell: usize, strategy: &SupStrategy) -> Result<SupEstimate> {
    let n = es.size();
    if ell == 0 || ell >= n {
        return Err(Error::OutOfRange { index: ell, len: n });
    }
    let phi_a = es.vectors.slice(s![..ell, ..]).to_owned();
    let exhaustive = n <= strategy.exhaustive_up_to || (n < 64 && (1u64 << n) <= strategy.samples as u64);
    let mut best = 0.0f64;
    let mut count = 0usize;
    if exhaustive {
        for code in 0..(1u64 << n) {
            best = best.max(block_entropy(&phi_a, &OccupationPattern::from_code(code, n))?);
            count += 1;
        }
        return Ok(SupEstimate { value: best, exhaustive, patterns: count });
    }
    let mut rng = SeedPlan::new(strategy.seed).aux_rng(0, 0);
    for _ in 0..strategy.samples {
        best = best.max(block_entropy(&phi_a, &OccupationPattern::random(n, &mut rng))?);
        count += 1;
    }
    if strategy.heuristics {
        for p in straddling_patterns(es, ell) {
            best = best.max(block_entropy(&phi_a, &p)?);
            count += 1;
        }
    }
    Ok(SupEstimate { value: best, exhaustive, patterns: count })
}

/// Many-body spectrum of the anisotropic chain from the block matrix:
/// `Σ_k ε_k (2 n_k − 1)` over all occupations, with `ε_k ≥ 0` the upper half of `σ(M̃)`.
pub fn anisotropic_many_body_energies(block: &BlockEffectiveHamiltonian) -> Result<Vec<f64>> {
    let n = block.m.size();
    if n > 24 {
        return Err(Error::CapExceeded { sites: n, cap: 24 });
    }
    let ev = linalg::eigvalsh_sym(&block.matrix)?;
    let eps: Vec<f64> = ev[n..].to_vec();
    let mut out: Vec<f64> = (0..(1u64 << n))
        .map(|code| (0..n).map(|k| if (code >> k) & 1 == 1 { eps[k] } else { -eps[k] }).sum())
        .collect();
    out.sort_by(f64::total_cmp);
    Ok(out)
}

/// Fraction of eigenvalues with `|λ| < width`.
pub fn density_near_zero(values: &[f64], width: f64) -> f64 {
    if values.is_empty() {
        return 0.0;
    }
    values.iter().filter(|l| l.abs() < width).count() as f64 / values.len() as f64
}
