//! Oracle-equivalence suite: every fast engine is compared against brute-force exact
//! diagonalization on small chains.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::disorder::{sample_field, DisorderSpec, FieldRealization, SeedPlan};
use crate::error::Result;
use crate::linalg::max_abs_diff_c;
use crate::oracle::{self, EigenFrame, Model, SiteKind};
use crate::xxz::{self, XxzParams};
use crate::xy::{self, OccupationPattern};

#[derive(Debug, Clone, PartialEq)]
pub struct Check {
    pub name: &'static str,
    pub value: f64,
    pub tolerance: f64,
}

impl Check {
    pub fn passed(&self) -> bool {
        self.value <= self.tolerance
    }
}

const SEED: u64 = 7;

fn field(spec: &DisorderSpec, n: usize, index: u64) -> Result<FieldRealization> {
    sample_field(spec, n, &SeedPlan::new(SEED), index)
}

/// Free-fermion energies `2Σλ + E0` against the full XY spectrum.
pub fn xy_spectrum(max_sites: usize) -> Result<f64> {
    let mut worst = 0.0f64;
    for n in 2..=max_sites {
        for r in 0..2 {
            let f = field(&DisorderSpec::uniform(0.0, 2.0), n, r)?;
            let m = xy::build_m(&f)?;
            let es = xy::diagonalize(&m)?;
            let mut free = (0..1u64 << n)
                .map(|code| xy::eigenstate_energy(&es, &OccupationPattern::from_code(code, n), m.ground_offset))
                .collect::<Result<Vec<f64>>>()?;
            free.sort_by(f64::total_cmp);
            let full = oracle::build_full(Model::Xy, &f)?.diagonalize()?;
            worst = free.iter().zip(&full.energies).map(|(a, b)| (a - b).abs()).fold(worst, f64::max);
        }
    }
    Ok(worst)
}

/// Partial-trace entropy of free-fermion eigenstates against `−tr h(Γ_A)`.
pub fn entropy_formula(n: usize, states: usize) -> Result<f64> {
    let mut rng = ChaCha8Rng::seed_from_u64(SEED);
    let mut worst = 0.0f64;
    for r in 0..states as u64 {
        let es = xy::diagonalize(&xy::build_m(&field(&DisorderSpec::uniform(0.0, 4.0), n, r)?)?)?;
        let alpha = OccupationPattern::random(n, &mut rng);
        let psi = oracle::free_fermion_eigenstate(&es, &alpha);
        let g = xy::eigenstate_two_point(&es, &alpha)?;
        for ell in 1..n {
            let traced = oracle::reduced_entropy_real(&psi, n, ell)?;
            let formula = xy::entanglement_entropy(&xy::restrict_upper_block(&g, ell)?)?;
            worst = worst.max((traced - formula).abs());
        }
    }
    Ok(worst)
}

/// `‖H_XY − (2c^*Mc + E0)‖_max` with Jordan-Wigner fermions.
pub fn quadratic_form(n: usize) -> Result<f64> {
    let modes = oracle::jordan_wigner_modes(n)?;
    let f = field(&DisorderSpec::uniform(0.0, 4.0), n, 0)?;
    let m = xy::build_m(&f)?;
    let quad = oracle::quadratic_form(&modes, &m.to_dense(), m.ground_offset);
    Ok(max_abs_diff_c(&oracle::build_full(Model::Xy, &f)?.to_dense(), &quad))
}

pub fn car(n: usize) -> Result<f64> {
    Ok(oracle::car_residual(&oracle::jordan_wigner_modes(n)?))
}

/// Sector Hamiltonian against the N-particle block of the spin Hamiltonian.
pub fn xxz_sector_block(particles: usize, half_length: usize, anisotropy: f64) -> Result<f64> {
    let f = field(&DisorderSpec::uniform(0.0, 1.0), 2 * half_length + 1, 0)?;
    let params = XxzParams::with_droplet_boundary(anisotropy);
    let h = xxz::build_h_sector(particles, half_length, &params, &f)?;
    let full = oracle::build_full(Model::Xxz(params), &f)?;
    let idx: Vec<usize> = h.basis.iter().map(|x| h.basis.full_index(x)).collect();
    let mut worst = 0.0f64;
    for (i, &a) in idx.iter().enumerate() {
        for (j, &b) in idx.iter().enumerate() {
            worst = worst.max((full.matrix.get(a, b) - h.matrix.get(i, j)).abs());
        }
    }
    Ok(worst)
}

pub fn xxz_number_conservation(half_length: usize) -> Result<f64> {
    let f = field(&DisorderSpec::uniform(0.0, 1.0), 2 * half_length + 1, 1)?;
    Ok(oracle::build_full(Model::Xxz(XxzParams::with_droplet_boundary(3.0)), &f)?.number_commutator_error())
}

/// Closed-form Ising levels against the diagonal of the Ising Hamiltonian.
pub fn ising_spectrum(n: usize) -> Result<f64> {
    let f = field(&DisorderSpec::uniform(0.0, 1.0), n, 0)?;
    let formula = oracle::ising_exact(&f)?;
    let matrix = oracle::build_full(Model::ising(), &f)?.diagonalize()?.energies;
    Ok(formula.iter().zip(&matrix).map(|(a, b)| (a.energy - b).abs()).fold(0.0, f64::max))
}

pub fn ising_superposition(max_ell: usize) -> Result<f64> {
    let mut worst = 0.0f64;
    for ell in 1..=max_ell {
        let a = oracle::droplet_superposition_entropy_matrix(ell, 2 * ell)?;
        let b = oracle::droplet_superposition_entropy_combinatorial(ell)?;
        worst = worst.max((a - b).abs()).max((b - (ell as f64).ln()).abs());
    }
    Ok(worst)
}

/// Free-fermion quench entropy against exact evolution of the product state.
pub fn quench(n: usize, ell: usize) -> Result<f64> {
    let mut rng = ChaCha8Rng::seed_from_u64(SEED);
    let grid = [0.0, 0.4, 1.7, 3.0];
    let mut worst = 0.0f64;
    for r in 0..2 {
        let f = field(&DisorderSpec::uniform(0.0, 4.0), n, r)?;
        let m = xy::build_m(&f)?;
        let es = xy::diagonalize(&m)?;
        let es_a = xy::diagonalize(&m.sub_chain(0, ell)?)?;
        let es_b = xy::diagonalize(&m.sub_chain(ell, n - ell)?)?;
        let alpha_a = OccupationPattern::random(ell, &mut rng);
        let alpha_b = OccupationPattern::random(n - ell, &mut rng);
        let series = xy::quench_entropy_series(&es, &xy::quench_factor(&es_a, &alpha_a, &es_b, &alpha_b)?, ell, &grid)?;
        let psi0 = oracle::to_complex_state(&oracle::kron_states(
            &oracle::free_fermion_eigenstate(&es_a, &alpha_a),
            &oracle::free_fermion_eigenstate(&es_b, &alpha_b),
        ));
        let full = oracle::build_full(Model::Xy, &f)?.diagonalize()?;
        for (&t, s) in grid.iter().zip(&series) {
            worst = worst.max((oracle::reduced_entropy(&full.evolve_state(&psi0, t), n, ell)? - s).abs());
        }
    }
    Ok(worst)
}

/// Charge-violating correlations on XXZ eigenstates (must vanish).
pub fn clustering_selection(half_length: usize) -> Result<f64> {
    let n = 2 * half_length + 1;
    let f = field(&DisorderSpec::uniform(0.0, 1.0), n, 2)?;
    let es = oracle::build_full(Model::Xxz(XxzParams::with_droplet_boundary(6.0)), &f)?.diagonalize()?;
    let frame = EigenFrame::new(&es, None);
    let mut worst = 0.0f64;
    for xk in SiteKind::CLUSTER_CASES {
        for yk in SiteKind::CLUSTER_CASES.into_iter().filter(|y| y.charge() + xk.charge() != 0) {
            let x = frame.project(&es, &oracle::site_operator(n, 0, xk));
            let y = frame.project(&es, &oracle::site_operator(n, n - 1, yk));
            worst = oracle::eigenstate_correlations(&frame, &x, &y, 0.0).into_iter().fold(worst, f64::max);
        }
    }
    Ok(worst)
}

/// Runs every check; numerical errors abort the suite.
pub fn run_suite() -> Result<Vec<Check>> {
    Ok(vec![
        Check { name: "xy spectrum vs free fermions", value: xy_spectrum(8)?, tolerance: 1e-9 },
        Check { name: "entropy formula vs partial trace", value: entropy_formula(8, 5)?, tolerance: 1e-8 },
        Check { name: "canonical anticommutation", value: car(6)?, tolerance: 1e-12 },
        Check { name: "xy quadratic form", value: quadratic_form(6)?, tolerance: 1e-10 },
        Check { name: "xxz sector block", value: xxz_sector_block(2, 5, 3.0)?, tolerance: 1e-12 },
        Check { name: "xxz number conservation", value: xxz_number_conservation(3)?, tolerance: 1e-12 },
        Check { name: "ising spectrum", value: ising_spectrum(10)?, tolerance: 1e-10 },
        Check { name: "droplet superposition entropy", value: ising_superposition(6)?, tolerance: 1e-10 },
        Check { name: "quench entropy vs exact evolution", value: quench(6, 3)?, tolerance: 1e-8 },
        Check { name: "clustering selection rules", value: clustering_selection(2)?, tolerance: 1e-12 },
    ])
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn suite_passes() {
        for c in run_suite().unwrap() {
            assert!(c.passed(), "{c:?}");
        }
    }
}
