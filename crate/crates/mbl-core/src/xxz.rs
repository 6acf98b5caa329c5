//! Hard-core magnon sectors of the XXZ chain on the box `[-L, L]`.
//!
//! A configuration is the strictly increasing list of down-spin sites. The sector
//! Hamiltonian is `-(1/2Δ) L_N + ½(1-1/Δ) D_N + V_ω + (β - ½(1-1/Δ)) χ`, where `L_N` is
//! the graph Laplacian of the configuration graph (degree = number of legal hops) and
//! `D_N` is twice the number of connected components of the configuration.

use std::collections::{HashMap, VecDeque};

use ndarray::Array2;

use crate::disorder::FieldRealization;
use crate::error::{config, Error, Result};
use crate::linalg::{self, CsrMatrix, Selection};

/// Largest sector dimension handled by dense diagonalization.
pub const DENSE_CAP: usize = 6000;

pub fn binomial(n: usize, k: usize) -> usize {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    let mut r: u128 = 1;
    for i in 0..k {
        r = r * (n - i) as u128 / (i + 1) as u128;
    }
    r as usize
}

#[derive(Debug, Clone)]
pub struct SectorBasis {
    pub n: usize,
    pub half_length: i32,
    configs: Vec<i32>,
    index: HashMap<Vec<i32>, usize>,
}

impl SectorBasis {
    pub fn dim(&self) -> usize {
        if self.n == 0 {
            1
        } else {
            self.configs.len() / self.n
        }
    }

    pub fn sites(&self) -> usize {
        (2 * self.half_length + 1) as usize
    }

    pub fn config(&self, i: usize) -> &[i32] {
        &self.configs[i * self.n..(i + 1) * self.n]
    }

    pub fn iter(&self) -> impl Iterator<Item = &[i32]> + '_ {
        (0..self.dim()).map(move |i| self.config(i))
    }

    pub fn position(&self, x: &[i32]) -> Option<usize> {
        self.index.get(x).copied()
    }

    /// Full-chain basis index of a configuration; site `-L` is the most significant qubit.
    pub fn full_index(&self, x: &[i32]) -> usize {
        let n = self.sites();
        x.iter().map(|&s| 1usize << (n - 1 - (s + self.half_length) as usize)).sum()
    }
}

pub fn enumerate_basis(n: usize, half_length: usize) -> Result<SectorBasis> {
    let sites = 2 * half_length + 1;
    if n == 0 || n > sites {
        return Err(config(format!("particle number {n} outside 1..={sites}")));
    }
    let l = half_length as i32;
    let mut configs = Vec::with_capacity(binomial(sites, n) * n);
    let mut x: Vec<i32> = (0..n as i32).map(|i| -l + i).collect();
    loop {
        configs.extend_from_slice(&x);
        // advance to the next combination in lexicographic order
        let mut i = n;
        while i > 0 && x[i - 1] == l - (n - i) as i32 {
            i -= 1;
        }
        if i == 0 {
            break;
        }
        x[i - 1] += 1;
        for k in i..n {
            x[k] = x[k - 1] + 1;
        }
    }
    let index = configs.chunks(n).enumerate().map(|(i, c)| (c.to_vec(), i)).collect();
    Ok(SectorBasis { n, half_length: l, configs, index })
}

/// Twice the number of maximal runs of consecutive sites.
pub fn component_degree(x: &[i32]) -> usize {
    if x.is_empty() {
        return 0;
    }
    2 * (1 + x.windows(2).filter(|w| w[1] != w[0] + 1).count())
}

/// Configurations reachable by one hard-core hop inside the box.
pub fn neighbors(x: &[i32], half_length: i32) -> Vec<Vec<i32>> {
    let n = x.len();
    let mut out = Vec::with_capacity(2 * n);
    for i in 0..n {
        let left_free = if i == 0 { x[i] > -half_length } else { x[i - 1] < x[i] - 1 };
        if left_free {
            let mut y = x.to_vec();
            y[i] -= 1;
            out.push(y);
        }
        let right_free = if i + 1 == n { x[i] < half_length } else { x[i + 1] > x[i] + 1 };
        if right_free {
            let mut y = x.to_vec();
            y[i] += 1;
            out.push(y);
        }
    }
    out
}

/// Number of box walls touched by the configuration (0, 1 or 2).
pub fn boundary_touches(x: &[i32], half_length: i32) -> usize {
    match (x.first(), x.last()) {
        (Some(&a), Some(&b)) => (a == -half_length) as usize + (b == half_length) as usize,
        _ => 0,
    }
}

pub fn is_droplet(x: &[i32]) -> bool {
    component_degree(x) == 2
}

/// ℓ¹ distance between two configurations of equal particle number.
pub fn config_distance(x: &[i32], y: &[i32]) -> usize {
    x.iter().zip(y).map(|(a, b)| (a - b).unsigned_abs() as usize).sum()
}

#[derive(Debug, Clone, PartialEq)]
pub struct XxzParams {
    pub anisotropy: f64,
    pub boundary: f64,
}

impl XxzParams {
    /// Smallest admissible boundary field for the given anisotropy.
    pub fn min_boundary(anisotropy: f64) -> f64 {
        0.5 * (1.0 - 1.0 / anisotropy)
    }

    pub fn with_droplet_boundary(anisotropy: f64) -> Self {
        XxzParams { anisotropy, boundary: Self::min_boundary(anisotropy) }
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.anisotropy > 1.0) || !self.anisotropy.is_finite() {
            return Err(config(format!("anisotropy must exceed 1, got {}", self.anisotropy)));
        }
        if self.boundary < Self::min_boundary(self.anisotropy) - 1e-15 {
            return Err(config(format!(
                "boundary field {} below ½(1-1/Δ) = {}",
                self.boundary,
                Self::min_boundary(self.anisotropy)
            )));
        }
        Ok(())
    }

    pub fn threshold(&self) -> f64 {
        1.0 - 1.0 / self.anisotropy
    }
}

#[derive(Debug, Clone)]
pub struct SectorHamiltonian {
    pub basis: SectorBasis,
    pub params: XxzParams,
    pub field: FieldRealization,
    pub matrix: CsrMatrix,
}

pub fn validate_field(field: &FieldRealization, half_length: usize) -> Result<()> {
    if field.len() != 2 * half_length + 1 {
        return Err(config(format!(
            "field has {} sites, box [-{half_length}, {half_length}] needs {}",
            field.len(),
            2 * half_length + 1
        )));
    }
    if field.values.iter().any(|&w| !(w >= 0.0)) {
        return Err(config("XXZ field must be nonnegative"));
    }
    Ok(())
}

pub fn build_h_sector(
    n: usize,
    half_length: usize,
    params: &XxzParams,
    field: &FieldRealization,
) -> Result<SectorHamiltonian> {
    params.validate()?;
    validate_field(field, half_length)?;
    let basis = enumerate_basis(n, half_length)?;
    let l = basis.half_length;
    let delta = params.anisotropy;
    let hop = -1.0 / (2.0 * delta);
    let gap = 0.5 * (1.0 - 1.0 / delta);
    let mut triplets = Vec::with_capacity(basis.dim() * (2 * n + 1));
    for (i, x) in basis.iter().enumerate() {
        let nb = neighbors(x, l);
        let potential: f64 = x.iter().map(|&s| field.values[(s + l) as usize]).sum();
        let diag = -hop * nb.len() as f64
            + gap * component_degree(x) as f64
            + potential
            + (params.boundary - gap) * boundary_touches(x, l) as f64;
        triplets.push((i, i, diag));
        for y in nb {
            let j = basis.position(&y).expect("neighbor inside basis");
            triplets.push((i, j, hop));
        }
    }
    let matrix = CsrMatrix::from_triplets(basis.dim(), triplets);
    Ok(SectorHamiltonian { basis, params: params.clone(), field: field.clone(), matrix })
}

impl SectorHamiltonian {
    pub fn dim(&self) -> usize {
        self.basis.dim()
    }

    /// Dense copy of `H + (1-1/Δ) P₁` where `P₁` projects onto droplet configurations.
    pub fn shifted_dense(&self) -> Array2<f64> {
        let mut a = self.matrix.to_dense();
        let t = self.params.threshold();
        for (i, x) in self.basis.iter().enumerate() {
            if is_droplet(x) {
                a[[i, i]] += t;
            }
        }
        a
    }

    fn is_tridiagonal(&self) -> bool {
        self.basis.n == 1
    }

    /// Eigenvalues (and optionally vectors) with selection; tridiagonal sectors use `dstevr`.
    pub fn eigen(&self, sel: Selection, vectors: bool) -> Result<linalg::SymEigen> {
        if self.is_tridiagonal() {
            let d = self.matrix.diagonal();
            let off: Vec<f64> = (0..self.dim().saturating_sub(1)).map(|i| self.matrix.get(i, i + 1)).collect();
            return linalg::eigh_tridiagonal(&d, &off, sel, vectors);
        }
        if self.dim() > DENSE_CAP {
            return Err(Error::Numerical(format!("sector dimension {} exceeds the dense cap {DENSE_CAP}", self.dim())));
        }
        linalg::eigh_sym(&self.matrix.to_dense(), sel, vectors)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum WindowKind {
    /// The droplet spectrum `[1-1/Δ, 2(1-1/Δ))`.
    Droplet,
    /// `[1-1/Δ, (2-δ)(1-1/Δ)]`.
    Safe,
    /// `[0, (2-δ)(1-1/Δ)]`, including the ground state.
    SafeWithGround,
    Band,
    Custom,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EnergyWindow {
    pub lower: f64,
    pub upper: f64,
    pub kind: WindowKind,
}

impl EnergyWindow {
    pub fn custom(lower: f64, upper: f64) -> Result<Self> {
        if !(lower <= upper) {
            return Err(config(format!("window [{lower}, {upper}] is empty")));
        }
        Ok(EnergyWindow { lower, upper, kind: WindowKind::Custom })
    }

    pub fn contains(&self, e: f64) -> bool {
        e >= self.lower && e <= self.upper
    }

    pub fn contains_window(&self, other: &EnergyWindow) -> bool {
        other.lower >= self.lower && other.upper <= self.upper
    }

    pub fn width(&self) -> f64 {
        self.upper - self.lower
    }

    /// Solver selection covering the closed window.
    pub fn selection(&self) -> Selection {
        let pad = 1e-12 * (1.0 + self.upper.abs());
        Selection::Interval(self.lower - pad, self.upper + pad)
    }
}

/// Droplet band `δ_N = [tanh ρ (cosh Nρ − 1)/sinh Nρ, tanh ρ (cosh Nρ + 1)/sinh Nρ]`, `cosh ρ = Δ`.
pub fn droplet_band(n: usize, anisotropy: f64) -> Result<EnergyWindow> {
    if !(anisotropy > 1.0) {
        return Err(config(format!("anisotropy must exceed 1, got {anisotropy}")));
    }
    if n == 0 {
        return Err(config("droplet band needs N >= 1"));
    }
    let rho = anisotropy.acosh();
    let t = rho.tanh();
    let x = n as f64 * rho;
    // (cosh x ∓ 1)/sinh x = tanh(x/2) and coth(x/2); stable for large x
    let lower = t * (0.5 * x).tanh();
    let upper = t / (0.5 * x).tanh();
    Ok(EnergyWindow { lower, upper, kind: WindowKind::Band })
}

pub fn spectral_window(anisotropy: f64, delta: f64, kind: WindowKind) -> Result<EnergyWindow> {
    if !(anisotropy > 1.0) {
        return Err(config(format!("anisotropy must exceed 1, got {anisotropy}")));
    }
    let t = 1.0 - 1.0 / anisotropy;
    let (lower, upper) = match kind {
        WindowKind::Droplet => (t, 2.0 * t),
        WindowKind::Safe | WindowKind::SafeWithGround => {
            if !(delta > 0.0) {
                return Err(config(format!("safety distance must be positive, got {delta}")));
            }
            let lo = if kind == WindowKind::Safe { t } else { 0.0 };
            (lo, (2.0 - delta) * t)
        }
        WindowKind::Band | WindowKind::Custom => {
            return Err(config("band and custom windows are not spectral windows"))
        }
    };
    if lower > upper {
        return Err(config(format!("window [{lower}, {upper}] is empty")));
    }
    Ok(EnergyWindow { lower, upper, kind })
}

#[derive(Debug, Clone)]
pub struct Eigenpairs {
    pub values: Vec<f64>,
    /// Normalized eigenvectors as columns, in the sector basis.
    pub vectors: Array2<f64>,
}

impl Eigenpairs {
    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn ensure_simple(&self) -> Result<()> {
        let gap = linalg::min_gap(&self.values);
        if gap <= crate::xy::DEGENERACY_TOL {
            return Err(Error::Degenerate { gap, tol: crate::xy::DEGENERACY_TOL });
        }
        Ok(())
    }
}

pub fn eigenpairs_in_window(h: &SectorHamiltonian, w: &EnergyWindow) -> Result<Eigenpairs> {
    let e = h.eigen(w.selection(), true)?;
    let keep: Vec<usize> = (0..e.values.len()).filter(|&i| w.contains(e.values[i])).collect();
    Ok(Eigenpairs {
        values: keep.iter().map(|&i| e.values[i]).collect(),
        vectors: e.vectors.select(ndarray::Axis(1), &keep),
    })
}

/// Lower bound on the sector spectrum: `(1-1/Δ) + (sum of the N smallest field values)`.
pub fn sector_lower_bound(n: usize, params: &XxzParams, field: &FieldRealization) -> f64 {
    let mut w = field.values.clone();
    w.sort_by(f64::total_cmp);
    params.threshold() + w.iter().take(n).sum::<f64>()
}

#[derive(Debug, Clone)]
pub struct DropletGeometry {
    pub droplet_indices: Vec<usize>,
    /// ℓ¹ distance of each configuration to the droplet set.
    pub distance: Vec<usize>,
}

impl DropletGeometry {
    pub fn new(basis: &SectorBasis) -> Self {
        let sources: Vec<usize> = (0..basis.dim()).filter(|&i| is_droplet(basis.config(i))).collect();
        let distance = bfs_distances(basis, &sources);
        DropletGeometry { droplet_indices: sources, distance }
    }

    pub fn max_distance(&self) -> usize {
        self.distance.iter().copied().max().unwrap_or(0)
    }
}

/// Multi-source graph distances on the configuration graph.
pub fn bfs_distances(basis: &SectorBasis, sources: &[usize]) -> Vec<usize> {
    let mut dist = vec![usize::MAX; basis.dim()];
    let mut queue = VecDeque::new();
    for &s in sources {
        if dist[s] != 0 {
            dist[s] = 0;
            queue.push_back(s);
        }
    }
    while let Some(i) = queue.pop_front() {
        for y in neighbors(basis.config(i), basis.half_length) {
            let j = basis.position(&y).expect("neighbor inside basis");
            if dist[j] == usize::MAX {
                dist[j] = dist[i] + 1;
                queue.push_back(j);
            }
        }
    }
    dist
}

/// `d_N(A, B)` by direct minimization of the ℓ¹ distance.
pub fn set_distance_direct(basis: &SectorBasis, a: &[usize], b: &[usize]) -> usize {
    let mut best = usize::MAX;
    for &i in a {
        for &j in b {
            best = best.min(config_distance(basis.config(i), basis.config(j)));
        }
    }
    best
}

/// `d_N(A, B)` by breadth-first search from `A`.
pub fn set_distance_bfs(basis: &SectorBasis, a: &[usize], b: &[usize]) -> usize {
    let d = bfs_distances(basis, a);
    b.iter().map(|&j| d[j]).min().unwrap_or(usize::MAX)
}

pub fn set_distance(basis: &SectorBasis, a: &[usize], b: &[usize]) -> usize {
    if a.len().saturating_mul(b.len()) <= 4096 {
        set_distance_direct(basis, a, b)
    } else {
        set_distance_bfs(basis, a, b)
    }
}

/// `mass[r] = ‖χ_{d_N = r} ψ‖`.
pub fn droplet_profile(psi: ndarray::ArrayView1<f64>, geo: &DropletGeometry) -> Vec<f64> {
    let mut sq = vec![0.0; geo.max_distance() + 1];
    for (i, &d) in geo.distance.iter().enumerate() {
        sq[d] += psi[i] * psi[i];
    }
    sq.into_iter().map(f64::sqrt).collect()
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CtCheck {
    pub measured: f64,
    pub bound: f64,
    pub distance: usize,
}

impl CtCheck {
    pub fn holds(&self) -> bool {
        self.measured <= self.bound
    }
}

/// Prefactor `16Δ/(δ(Δ−1))` and base `1 + δ(Δ−1)/8` of the resolvent bound.
pub fn ct_constants(anisotropy: f64, delta: f64) -> (f64, f64) {
    (16.0 * anisotropy / (delta * (anisotropy - 1.0)), 1.0 + delta * (anisotropy - 1.0) / 8.0)
}

/// Resolvent block norm `‖χ_A (H + (1-1/Δ)P₁ − E)^{-1} χ_B‖` and its exponential bound.
pub fn ct_check(h: &SectorHamiltonian, energy: f64, delta: f64, a: &[usize], b: &[usize]) -> Result<CtCheck> {
    let anis = h.params.anisotropy;
    let t = h.params.threshold();
    if !(delta > 0.0) {
        return Err(config("safety distance must be positive"));
    }
    if energy > (2.0 - delta) * t {
        return Err(config(format!("energy {energy} above (2-δ)(1-1/Δ) = {}", (2.0 - delta) * t)));
    }
    if a.is_empty() || b.is_empty() {
        return Err(config("configuration sets must be nonempty"));
    }
    let dim = h.dim();
    if let Some(&bad) = a.iter().chain(b).find(|&&i| i >= dim) {
        return Err(Error::OutOfRange { index: bad, len: dim });
    }
    let shift: Vec<f64> = h.basis.iter().map(|x| if is_droplet(x) { t } else { 0.0 } - energy).collect();
    let apply = |v: &[f64], out: &mut [f64]| {
        h.matrix.matvec(ndarray::ArrayView1::from(v), out);
        for i in 0..v.len() {
            out[i] += shift[i] * v[i];
        }
    };
    let mut block = Array2::zeros((a.len(), b.len()));
    for (col, &j) in b.iter().enumerate() {
        let mut rhs = vec![0.0; dim];
        rhs[j] = 1.0;
        let x = linalg::conjugate_gradient(apply, &rhs, 1e-13, 20 * dim + 100)?;
        for (row, &i) in a.iter().enumerate() {
            block[[row, col]] = x[i];
        }
    }
    let measured = linalg::operator_norm_real(&block)?;
    let distance = set_distance(&h.basis, a, b);
    let (pre, base) = ct_constants(anis, delta);
    Ok(CtCheck { measured, bound: pre * base.powi(-(distance as i32)), distance })
}

/// Indices of configurations containing site `j`.
pub fn s_indicator(j: i32, basis: &SectorBasis) -> Result<Vec<usize>> {
    if j < -basis.half_length || j > basis.half_length {
        return Err(config(format!("site {j} outside [-{0}, {0}]", basis.half_length)));
    }
    Ok((0..basis.dim()).filter(|&i| basis.config(i).contains(&j)).collect())
}

/// `occ[s][e] = ‖χ_{S_s} ψ_e‖²` for every box site `s` (offset by `L`).
pub fn site_occupations(basis: &SectorBasis, pairs: &Eigenpairs) -> Array2<f64> {
    let l = basis.half_length;
    let mut occ = Array2::zeros((basis.sites(), pairs.len()));
    for (i, x) in basis.iter().enumerate() {
        for e in 0..pairs.len() {
            let p = pairs.vectors[[i, e]] * pairs.vectors[[i, e]];
            for &s in x {
                occ[[(s + l) as usize, e]] += p;
            }
        }
    }
    occ
}

/// `Q(j, k) = Σ_E ‖χ_{S_j} ψ_E‖ ‖χ_{S_k} ψ_E‖` for all site pairs at once.
pub fn correlator_matrix(basis: &SectorBasis, pairs: &Eigenpairs) -> Array2<f64> {
    let amp = site_occupations(basis, pairs).mapv(|x| x.max(0.0).sqrt());
    amp.dot(&amp.t())
}

pub fn sector_correlator(h: &SectorHamiltonian, w: &EnergyWindow, j: i32, k: i32) -> Result<f64> {
    let l = h.basis.half_length;
    for s in [j, k] {
        if s < -l || s > l {
            return Err(config(format!("site {s} outside [-{l}, {l}]")));
        }
    }
    let pairs = eigenpairs_in_window(h, w)?;
    if pairs.is_empty() {
        return Ok(0.0);
    }
    pairs.ensure_simple()?;
    let q = correlator_matrix(&h.basis, &pairs);
    Ok(q[[(j + l) as usize, (k + l) as usize]])
}

#[cfg(test)]
mod tests {
    use super::*;

    fn zeros(l: usize) -> FieldRealization {
        FieldRealization::from_values(vec![0.0; 2 * l + 1])
    }

    #[test]
    fn small_bases() {
        let b = enumerate_basis(2, 1).unwrap();
        let all: Vec<Vec<i32>> = b.iter().map(|x| x.to_vec()).collect();
        assert_eq!(all, vec![vec![-1, 0], vec![-1, 1], vec![0, 1]]);
        assert_eq!(enumerate_basis(1, 2).unwrap().dim(), 5);
        assert_eq!(enumerate_basis(3, 10).unwrap().dim(), 1330);
        assert!(enumerate_basis(4, 1).is_err());
        assert!(enumerate_basis(0, 1).is_err());
    }

    #[test]
    fn degrees() {
        assert_eq!(component_degree(&[1, 2, 3]), 2);
        assert_eq!(component_degree(&[0, 2, 4]), 6);
        assert_eq!(component_degree(&[-3, -2]), component_degree(&[0, 1]));
    }

    #[test]
    fn neighbor_examples() {
        assert_eq!(neighbors(&[0], 3), vec![vec![-1], vec![1]]);
        assert_eq!(neighbors(&[0, 1], 3), vec![vec![-1, 1], vec![0, 2]]);
        assert_eq!(neighbors(&[-3], 3), vec![vec![-2]]);
    }

    #[test]
    fn wall_diagonal() {
        let h = build_h_sector(1, 1, &XxzParams { anisotropy: 2.0, boundary: 0.25 }, &zeros(1)).unwrap();
        assert!((h.matrix.get(0, 0) - 0.75).abs() < 1e-15);
    }

    #[test]
    fn bands() {
        let d = 2.0;
        let b1 = droplet_band(1, d).unwrap();
        assert!((b1.lower - 0.5).abs() < 1e-12 && (b1.upper - 1.5).abs() < 1e-12);
        let b2 = droplet_band(2, d).unwrap();
        assert!((b2.lower - 0.75).abs() < 1e-12 && (b2.upper - 1.0).abs() < 1e-12);
        let b3 = droplet_band(3, d).unwrap();
        assert!((b3.lower - (1.0 - 1.0 / 6.0)).abs() < 1e-12 && (b3.upper - 0.9).abs() < 1e-12);
        assert!(droplet_band(1, 1.0).is_err());
    }

    #[test]
    fn windows() {
        let w = spectral_window(2.0, 0.5, WindowKind::Safe).unwrap();
        assert_eq!((w.lower, w.upper), (0.5, 0.75));
        let w = spectral_window(2.0, 0.5, WindowKind::SafeWithGround).unwrap();
        assert_eq!((w.lower, w.upper), (0.0, 0.75));
    }

    #[test]
    fn indicator_sets() {
        let b = enumerate_basis(2, 1).unwrap();
        let s = s_indicator(1, &b).unwrap();
        let got: Vec<Vec<i32>> = s.iter().map(|&i| b.config(i).to_vec()).collect();
        assert_eq!(got, vec![vec![-1, 1], vec![0, 1]]);
        let b = enumerate_basis(3, 3).unwrap();
        assert_eq!(s_indicator(0, &b).unwrap().len(), binomial(6, 2));
    }

    #[test]
    fn ct_constants_example() {
        let (p, b) = ct_constants(2.0, 0.5);
        assert!((p - 64.0).abs() < 1e-12 && (b - 1.0625).abs() < 1e-12);
    }

    #[test]
    fn geometry_counts() {
        let b = enumerate_basis(3, 4).unwrap();
        let g = DropletGeometry::new(&b);
        assert_eq!(g.droplet_indices.len(), 2 * 4 + 2 - 3);
        for (i, &d) in g.distance.iter().enumerate() {
            assert_eq!(d == 0, g.droplet_indices.contains(&i));
        }
    }
}
