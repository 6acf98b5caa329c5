use std::collections::BTreeMap;

use ndarray::Array1;

use super::site_mask;
use crate::disorder::FieldRealization;
use crate::error::{config, Error, Result};
use crate::linalg;

/// Largest chain for the label enumeration.
pub const ISING_FORMULA_CAP: usize = 24;
/// Largest chain for the state-vector entropy path.
pub const SUPERPOSITION_MATRIX_CAP: usize = 20;

#[derive(Debug, Clone, PartialEq)]
pub struct IsingLevel {
    pub energy: f64,
    /// Occupied (down-spin) sites, 0-based.
    pub set: Vec<usize>,
}

impl IsingLevel {
    pub fn components(&self) -> usize {
        if self.set.is_empty() {
            return 0;
        }
        1 + self.set.windows(2).filter(|w| w[1] != w[0] + 1).count()
    }
}

/// `½|∂X| + Σ_{j∈X} ω_j`, counting the bonds to the outside of the chain in `∂X`.
pub fn ising_energy(set: &[usize], field: &[f64]) -> f64 {
    let level = IsingLevel { energy: 0.0, set: set.to_vec() };
    level.components() as f64 + set.iter().map(|&j| field[j]).sum::<f64>()
}

/// Every level labelled by its subset, sorted by energy (ties by label).
pub fn ising_exact(field: &FieldRealization) -> Result<Vec<IsingLevel>> {
    let n = field.len();
    if n > ISING_FORMULA_CAP {
        return Err(Error::CapExceeded { sites: n, cap: ISING_FORMULA_CAP });
    }
    let mut out: Vec<IsingLevel> = (0..1usize << n)
        .map(|b| {
            let set: Vec<usize> = (0..n).filter(|&q| b & site_mask(q, n) != 0).collect();
            IsingLevel { energy: ising_energy(&set, &field.values), set }
        })
        .collect();
    out.sort_by(|a, b| a.energy.total_cmp(&b.energy).then_with(|| a.set.cmp(&b.set)));
    Ok(out)
}

/// `#{X ⊆ {0..n-1} : X has k components}` for every `k` (the ω ≡ 0 multiplicities).
pub fn component_counts(n: usize) -> Vec<u64> {
    // choose 2k boundaries among n+1 gaps
    let kmax = n.div_ceil(2);
    (0..=kmax).map(|k| binom(n as u64 + 1, 2 * k as u64)).collect()
}

fn binom(n: u64, k: u64) -> u64 {
    if k > n {
        return 0;
    }
    (0..k.min(n - k)).fold(1u64, |acc, i| acc * (n - i) / (i + 1))
}

fn check_superposition(ell: usize) -> Result<()> {
    if ell == 0 {
        return Err(config("droplet length must be at least 1"));
    }
    if 2 * ell - 1 > 128 {
        return Err(Error::OutOfRange { index: ell, len: 64 });
    }
    Ok(())
}

/// `ℓ^{-1/2} Σ_{j<ℓ} φ_{[j, j+ℓ-1]}` on `n` sites.
pub fn droplet_superposition(ell: usize, n: usize) -> Result<Array1<f64>> {
    check_superposition(ell)?;
    if n < 2 * ell || n > SUPERPOSITION_MATRIX_CAP {
        return Err(Error::Size(format!("need 2ℓ ≤ n ≤ {SUPERPOSITION_MATRIX_CAP}, got ℓ={ell}, n={n}")));
    }
    let mut psi = Array1::zeros(1usize << n);
    let amp = 1.0 / (ell as f64).sqrt();
    for j in 0..ell {
        let b: usize = (j..j + ell).map(|q| site_mask(q, n)).sum();
        psi[b] += amp;
    }
    Ok(psi)
}

/// Entropy of the first `ell` sites from the full state vector.
pub fn droplet_superposition_entropy_matrix(ell: usize, n: usize) -> Result<f64> {
    let psi = droplet_superposition(ell, n)?;
    super::reduced_entropy_real(&psi, n, ell)
}

/// Same entropy from the Schmidt structure: each droplet splits into an A-part and a
/// B-part, and `ρ_A` is the Gram matrix of the B-parts attached to each A-part.
pub fn droplet_superposition_entropy_combinatorial(ell: usize) -> Result<f64> {
    check_superposition(ell)?;
    let amp = 1.0 / (ell as f64).sqrt();
    let mask = |lo: usize, hi: usize| -> u128 { (lo..hi).fold(0u128, |m, q| m | (1u128 << q)) };
    let mut by_a: BTreeMap<u128, BTreeMap<u128, f64>> = BTreeMap::new();
    for j in 0..ell {
        let a = mask(j, ell);
        let b = mask(ell, j + ell);
        *by_a.entry(a).or_default().entry(b).or_default() += amp;
    }
    let parts: Vec<&BTreeMap<u128, f64>> = by_a.values().collect();
    let k = parts.len();
    let mut rho = ndarray::Array2::<f64>::zeros((k, k));
    for i in 0..k {
        for l in 0..k {
            rho[[i, l]] = parts[i].iter().filter_map(|(b, x)| parts[l].get(b).map(|y| x * y)).sum();
        }
    }
    let ev = linalg::eigvalsh_sym(&rho)?;
    Ok(linalg::spectral_entropy(ev))
}
