//! Brute-force many-body engine on the full 2^n Hilbert space.
//!
//! Basis states are bit strings with site 0 as the most significant bit; a set bit is a
//! down spin (one particle). `|↑⟩ = (1, 0)`, `σ^Z = diag(1, -1)`, `𝒩 = diag(0, 1)`.
//! XXZ chains on `[-L, L]` use internal site `x + L`.

mod dynamics;
mod entropy;
mod ising;
mod ops;

pub use dynamics::*;
pub use entropy::*;
pub use ising::*;
pub use ops::*;

use ndarray::{Array1, Array2, Axis};

use crate::disorder::FieldRealization;
use crate::error::{config, Error, Result};
use crate::linalg::{self, CsrMatrix, Selection, C64};
use crate::xxz::{EnergyWindow, XxzParams};

/// Default largest number of sites.
pub const SITE_CAP: usize = 14;

#[derive(Debug, Clone, PartialEq)]
pub enum Model {
    /// `-Σ (σXσX + σYσY) - Σ ω σZ`.
    Xy,
    /// `-Σ ((1+γ) σXσX + (1-γ) σYσY) - Σ ω σZ`; any coupling is already folded into the field.
    AnisotropicXy { gamma: f64 },
    /// `Σ h_{j,j+1} + Σ ω 𝒩 + β (𝒩_first + 𝒩_last)`.
    Xxz(XxzParams),
    /// `¼ Σ (1 - σZσZ) + Σ ω 𝒩 + β (𝒩_first + 𝒩_last)`; β = ½ reproduces ½|∂X| exactly.
    Ising { boundary: f64 },
}

impl Model {
    pub fn ising() -> Self {
        Model::Ising { boundary: 0.5 }
    }

    pub fn conserves_number(&self) -> bool {
        !matches!(self, Model::AnisotropicXy { gamma } if *gamma != 0.0)
    }
}

#[derive(Debug, Clone)]
pub struct FullHamiltonian {
    pub model: Model,
    pub sites: usize,
    /// Label of internal site 0 (`-L` for XXZ, 0 otherwise).
    pub site_offset: i32,
    pub field: FieldRealization,
    pub matrix: CsrMatrix,
}

#[inline]
pub fn bit(state: usize, site: usize, n: usize) -> usize {
    (state >> (n - 1 - site)) & 1
}

#[inline]
pub fn site_mask(site: usize, n: usize) -> usize {
    1 << (n - 1 - site)
}

pub fn build_full(model: Model, field: &FieldRealization) -> Result<FullHamiltonian> {
    build_full_capped(model, field, SITE_CAP)
}

pub fn build_full_capped(model: Model, field: &FieldRealization, cap: usize) -> Result<FullHamiltonian> {
    let n = field.len();
    if n == 0 {
        return Err(config("chain needs at least one site"));
    }
    if n > cap {
        return Err(Error::CapExceeded { sites: n, cap });
    }
    let mut site_offset = 0;
    match &model {
        Model::Xxz(p) => {
            p.validate()?;
            if n % 2 == 0 {
                return Err(config("XXZ box [-L, L] needs an odd number of sites"));
            }
            if field.values.iter().any(|&w| !(w >= 0.0)) {
                return Err(config("XXZ field must be nonnegative"));
            }
            site_offset = -((n / 2) as i32);
        }
        Model::Ising { boundary } if !boundary.is_finite() => {
            return Err(config("Ising boundary field must be finite"));
        }
        _ => {}
    }
    let w = &field.values;
    let dim = 1usize << n;
    let mut triplets = Vec::with_capacity(dim * (n + 1));
    for b in 0..dim {
        let mut diag = 0.0;
        for q in 0..n {
            let down = bit(b, q, n) == 1;
            match &model {
                Model::Xy | Model::AnisotropicXy { .. } => {
                    diag -= w[q] * if down { -1.0 } else { 1.0 };
                }
                Model::Xxz(_) | Model::Ising { .. } => {
                    if down {
                        diag += w[q];
                    }
                }
            }
        }
        let boundary = match &model {
            Model::Xxz(p) => Some(p.boundary),
            Model::Ising { boundary } => Some(*boundary),
            _ => None,
        };
        if let Some(beta) = boundary {
            diag += beta * (bit(b, 0, n) + bit(b, n - 1, n)) as f64;
        }
        for q in 0..n.saturating_sub(1) {
            let differ = bit(b, q, n) != bit(b, q + 1, n);
            let flip = b ^ site_mask(q, n) ^ site_mask(q + 1, n);
            match &model {
                Model::Xy => {
                    if differ {
                        triplets.push((b, flip, -2.0));
                    }
                }
                Model::AnisotropicXy { gamma } => {
                    if differ {
                        triplets.push((b, flip, -2.0));
                    } else if *gamma != 0.0 {
                        triplets.push((b, flip, -2.0 * gamma));
                    }
                }
                Model::Xxz(p) => {
                    if differ {
                        diag += 0.5;
                        triplets.push((b, flip, -1.0 / (2.0 * p.anisotropy)));
                    }
                }
                Model::Ising { .. } => {
                    if differ {
                        diag += 0.5;
                    }
                }
            }
        }
        triplets.push((b, b, diag));
    }
    Ok(FullHamiltonian {
        model,
        sites: n,
        site_offset,
        field: field.clone(),
        matrix: CsrMatrix::from_triplets(dim, triplets),
    })
}

impl FullHamiltonian {
    pub fn dim(&self) -> usize {
        self.matrix.n
    }

    pub fn to_dense(&self) -> Array2<C64> {
        linalg::to_complex(&self.matrix.to_dense())
    }

    /// Internal site of a chain label (`x + L` for XXZ, identity otherwise).
    pub fn site(&self, label: i32) -> Result<usize> {
        let q = label - self.site_offset;
        if q < 0 || q as usize >= self.sites {
            return Err(Error::OutOfRange { index: label.unsigned_abs() as usize, len: self.sites });
        }
        Ok(q as usize)
    }

    pub fn diagonalize(&self) -> Result<ManyBodyEigenSystem> {
        ManyBodyEigenSystem::new(&self.matrix, self.sites)
    }

    /// `max |[H, Σ 𝒩]|` (zero for number-conserving models).
    pub fn number_commutator_error(&self) -> f64 {
        let mut m = 0.0f64;
        for r in 0..self.dim() {
            for (c, v) in self.matrix.row(r) {
                let dn = (r.count_ones() as f64) - (c.count_ones() as f64);
                m = m.max((v * dn).abs());
            }
        }
        m
    }
}

/// Diagonalized block of the Hamiltonian (a connected component of its sparsity graph).
#[derive(Debug, Clone)]
pub struct EigenBlock {
    pub indices: Vec<usize>,
    pub values: Vec<f64>,
    pub vectors: Array2<f64>,
    /// Global (ascending energy) positions of this block's eigenvectors.
    pub positions: Vec<usize>,
}

/// Full eigen-decomposition stored block by block.
#[derive(Debug, Clone)]
pub struct ManyBodyEigenSystem {
    pub sites: usize,
    pub energies: Vec<f64>,
    pub blocks: Vec<EigenBlock>,
    /// For each global eigenvector: (block, column).
    pub order: Vec<(usize, usize)>,
}

impl ManyBodyEigenSystem {
    pub fn new(h: &CsrMatrix, sites: usize) -> Result<Self> {
        let mut blocks = Vec::new();
        for comp in h.components() {
            let e = linalg::eigh_sym(&h.dense_block(&comp), Selection::All, true)?;
            blocks.push(EigenBlock { indices: comp, values: e.values, vectors: e.vectors, positions: vec![] });
        }
        let mut order: Vec<(usize, usize)> =
            blocks.iter().enumerate().flat_map(|(b, blk)| (0..blk.values.len()).map(move |c| (b, c))).collect();
        order.sort_by(|&(a, i), &(b, j)| blocks[a].values[i].total_cmp(&blocks[b].values[j]).then((a, i).cmp(&(b, j))));
        for blk in blocks.iter_mut() {
            blk.positions = vec![0; blk.values.len()];
        }
        for (pos, &(b, c)) in order.iter().enumerate() {
            blocks[b].positions[c] = pos;
        }
        let energies = order.iter().map(|&(b, c)| blocks[b].values[c]).collect();
        Ok(ManyBodyEigenSystem { sites, energies, blocks, order })
    }

    pub fn dim(&self) -> usize {
        self.energies.len()
    }

    pub fn eigenvector(&self, k: usize) -> Array1<f64> {
        let (b, c) = self.order[k];
        let blk = &self.blocks[b];
        let mut v = Array1::zeros(self.dim());
        for (i, &idx) in blk.indices.iter().enumerate() {
            v[idx] = blk.vectors[[i, c]];
        }
        v
    }

    /// All eigenvectors as columns in ascending energy order.
    pub fn dense_vectors(&self) -> Array2<f64> {
        let mut v = Array2::zeros((self.dim(), self.dim()));
        for blk in &self.blocks {
            for (c, &pos) in blk.positions.iter().enumerate() {
                for (i, &idx) in blk.indices.iter().enumerate() {
                    v[[idx, pos]] = blk.vectors[[i, c]];
                }
            }
        }
        v
    }

    pub fn reconstruction_error(&self, h: &CsrMatrix) -> f64 {
        let v = self.dense_vectors();
        let mut scaled = v.clone();
        for (mut col, &e) in scaled.axis_iter_mut(Axis(1)).zip(&self.energies) {
            col *= e;
        }
        linalg::max_abs_diff(&scaled.dot(&v.t()), &h.to_dense())
    }

    pub fn orthogonality_error(&self) -> f64 {
        let v = self.dense_vectors();
        linalg::max_abs_diff(&v.t().dot(&v), &Array2::eye(self.dim()))
    }

    /// Global positions of the eigenvalues inside the window.
    pub fn window_positions(&self, w: &EnergyWindow) -> Vec<usize> {
        (0..self.dim()).filter(|&k| w.contains(self.energies[k])).collect()
    }

    /// Window eigenvectors as columns.
    pub fn window_vectors(&self, w: &EnergyWindow) -> Array2<f64> {
        let pos = self.window_positions(w);
        let mut out = Array2::zeros((self.dim(), pos.len()));
        for (col, &k) in pos.iter().enumerate() {
            out.column_mut(col).assign(&self.eigenvector(k));
        }
        out
    }

    /// `Vᵀ O V` with eigenvectors ordered by energy.
    pub fn to_eigenbasis(&self, op: &Array2<C64>) -> Array2<C64> {
        let d = self.dim();
        let mut out = Array2::<C64>::zeros((d, d));
        for a in &self.blocks {
            for b in &self.blocks {
                let (re, im, nonzero) = sub_block(op, &a.indices, &b.indices);
                if !nonzero {
                    continue;
                }
                let r = a.vectors.t().dot(&re).dot(&b.vectors);
                let i = a.vectors.t().dot(&im).dot(&b.vectors);
                for (p, &pa) in a.positions.iter().enumerate() {
                    for (q, &pb) in b.positions.iter().enumerate() {
                        out[[pa, pb]] = C64::new(r[[p, q]], i[[p, q]]);
                    }
                }
            }
        }
        out
    }

    /// `V O_e Vᵀ`, inverse of [`Self::to_eigenbasis`].
    pub fn from_eigenbasis(&self, op: &Array2<C64>) -> Array2<C64> {
        let d = self.dim();
        let mut out = Array2::<C64>::zeros((d, d));
        for a in &self.blocks {
            for b in &self.blocks {
                let (re, im, nonzero) = sub_block(op, &a.positions, &b.positions);
                if !nonzero {
                    continue;
                }
                let r = a.vectors.dot(&re).dot(&b.vectors.t());
                let i = a.vectors.dot(&im).dot(&b.vectors.t());
                for (p, &ia) in a.indices.iter().enumerate() {
                    for (q, &ib) in b.indices.iter().enumerate() {
                        out[[ia, ib]] = C64::new(r[[p, q]], i[[p, q]]);
                    }
                }
            }
        }
        out
    }

    /// Coefficients of a state in the eigenbasis.
    pub fn state_to_eigenbasis(&self, psi: &Array1<C64>) -> Array1<C64> {
        let mut out = Array1::zeros(self.dim());
        for blk in &self.blocks {
            for (c, &pos) in blk.positions.iter().enumerate() {
                let mut z = C64::new(0.0, 0.0);
                for (i, &idx) in blk.indices.iter().enumerate() {
                    z += psi[idx] * blk.vectors[[i, c]];
                }
                out[pos] = z;
            }
        }
        out
    }

    pub fn state_from_eigenbasis(&self, coeff: &Array1<C64>) -> Array1<C64> {
        let mut out = Array1::zeros(self.dim());
        for blk in &self.blocks {
            for (c, &pos) in blk.positions.iter().enumerate() {
                for (i, &idx) in blk.indices.iter().enumerate() {
                    out[idx] += coeff[pos] * blk.vectors[[i, c]];
                }
            }
        }
        out
    }

    /// `e^{-iHt} ψ`.
    pub fn evolve_state(&self, psi: &Array1<C64>, t: f64) -> Array1<C64> {
        let mut c = self.state_to_eigenbasis(psi);
        for (z, &e) in c.iter_mut().zip(&self.energies) {
            *z *= C64::from_polar(1.0, -e * t);
        }
        self.state_from_eigenbasis(&c)
    }

    /// Variance of the total particle number in eigenvector `k`.
    pub fn number_variance(&self, k: usize) -> f64 {
        let v = self.eigenvector(k);
        let mean: f64 = v.iter().enumerate().map(|(b, x)| x * x * b.count_ones() as f64).sum();
        v.iter().enumerate().map(|(b, x)| x * x * (b.count_ones() as f64 - mean).powi(2)).sum()
    }
}

fn sub_block(op: &Array2<C64>, rows: &[usize], cols: &[usize]) -> (Array2<f64>, Array2<f64>, bool) {
    let mut re = Array2::zeros((rows.len(), cols.len()));
    let mut im = Array2::zeros((rows.len(), cols.len()));
    let mut nonzero = false;
    for (p, &r) in rows.iter().enumerate() {
        let row = op.row(r);
        for (q, &c) in cols.iter().enumerate() {
            let z = row[c];
            if z.re != 0.0 || z.im != 0.0 {
                nonzero = true;
                re[[p, q]] = z.re;
                im[[p, q]] = z.im;
            }
        }
    }
    (re, im, nonzero)
}

/// Extract the block of `H` on the given basis states (e.g. an N-particle sector).
pub fn extract_block(h: &FullHamiltonian, states: &[usize]) -> Array2<f64> {
    h.matrix.dense_block(states)
}

/// Full-chain basis states with exactly `n` particles, in ascending order.
pub fn sector_states(sites: usize, n: usize) -> Vec<usize> {
    (0..1usize << sites).filter(|b| b.count_ones() as usize == n).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn single_site_xy() {
        let h = build_full(Model::Xy, &FieldRealization::from_values(vec![0.7])).unwrap();
        let d = h.matrix.to_dense();
        assert_eq!(d, ndarray::array![[-0.7, 0.0], [0.0, 0.7]]);
    }

    #[test]
    fn xxz_vacuum_is_ground_state() {
        let f = FieldRealization::from_values(vec![0.3, 0.1, 0.5, 0.2, 0.9]);
        let h = build_full(Model::Xxz(XxzParams::with_droplet_boundary(3.0)), &f).unwrap();
        assert_eq!(h.matrix.row(0).map(|(_, v)| v.abs()).sum::<f64>(), 0.0);
        let es = h.diagonalize().unwrap();
        assert!(es.energies[0].abs() < 1e-12);
        assert!(es.energies[1] > 1.0 - 1.0 / 3.0 - 1e-12);
        assert!(h.number_commutator_error() < 1e-15);
    }

    #[test]
    fn eigenbasis_round_trip() {
        let f = FieldRealization::from_values(vec![0.3, -0.1, 0.5, 0.2]);
        let h = build_full(Model::Xy, &f).unwrap();
        let es = h.diagonalize().unwrap();
        assert!(es.reconstruction_error(&h.matrix) < 1e-12);
        assert!(es.orthogonality_error() < 1e-12);
        let x = embed_site(4, 1, &SiteKind::X.matrix());
        let back = es.from_eigenbasis(&es.to_eigenbasis(&x));
        assert!(linalg::max_abs_diff_c(&back, &x) < 1e-12);
    }

    #[test]
    fn sector_slice_has_right_count() {
        assert_eq!(sector_states(5, 2).len(), 10);
        let v = sector_states(3, 1);
        assert_eq!(v, vec![1, 2, 4]);
    }
}
