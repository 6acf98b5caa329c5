//! Hand-computed values and exact-diagonalization cross-checks through the public API.

use ndarray::{array, Array2};
use num_complex::Complex64 as C64;

use mbl_core::disorder::{sample_field, DisorderSpec, FieldRealization, SeedPlan};
use mbl_core::experiments::{run_ensemble, ExperimentConfig, ExperimentKind};
use mbl_core::linalg::Selection;
use mbl_core::oracle::{self, Model};
use mbl_core::validation;
use mbl_core::xxz::{self, WindowKind, XxzParams};
use mbl_core::xy::{self, OccupationPattern};

fn field(v: &[f64]) -> FieldRealization {
    FieldRealization::from_values(v.to_vec())
}

fn random_field(n: usize, index: u64) -> FieldRealization {
    sample_field(&DisorderSpec::uniform(0.0, 4.0), n, &SeedPlan::new(2024), index).unwrap()
}

fn close(a: f64, b: f64, tol: f64) -> bool {
    (a - b).abs() <= tol
}

#[test]
fn one_body_matrix_of_a_three_site_chain() {
    let m = xy::build_m(&field(&[0.1, 0.2, 0.3])).unwrap();
    let expected = array![[0.1, -1.0, 0.0], [-1.0, 0.2, -1.0], [0.0, -1.0, 0.3]];
    assert_eq!(m.to_dense(), expected);
    assert!(close(m.ground_offset, -0.6, 1e-15));
}

#[test]
fn clean_spectra_are_cosines() {
    let two = xy::diagonalize(&xy::build_m(&field(&[0.0; 2])).unwrap()).unwrap();
    assert!(close(two.values[0], -1.0, 1e-14) && close(two.values[1], 1.0, 1e-14));
    let three = xy::diagonalize(&xy::build_m(&field(&[0.0; 3])).unwrap()).unwrap();
    let s = 2f64.sqrt();
    for (got, want) in three.values.iter().zip([-s, 0.0, s]) {
        assert!(close(*got, want, 1e-14), "{got} vs {want}");
    }
}

#[test]
fn two_site_projection_and_block() {
    let es = xy::diagonalize(&xy::build_m(&field(&[0.0; 2])).unwrap()).unwrap();
    let alpha = OccupationPattern(vec![true, false]);
    let g = xy::eigenstate_correlation_matrix(&es, &alpha).unwrap();
    for v in g.gamma.iter() {
        assert!(close(v.re, 0.5, 1e-14) && v.im == 0.0);
    }
    let block = xy::restrict_upper_block(&g, 1).unwrap();
    assert!(close(block.gamma[[0, 0]].re, 0.5, 1e-14));
    // half filling of one bonding orbital: one bit of entanglement across the bond
    assert!(close(xy::entanglement_entropy(&block).unwrap(), 2f64.ln(), 1e-12));
}

#[test]
fn anisotropic_block_spectrum_is_symmetric() {
    let b = xy::build_block_m(&field(&[0.0; 4]), 0.3).unwrap();
    let mut ev = mbl_core::linalg::eigvalsh_sym(&b.matrix).unwrap();
    ev.sort_by(f64::total_cmp);
    let n = ev.len();
    for i in 0..n {
        assert!(close(ev[i], -ev[n - 1 - i], 1e-12));
    }
}

#[test]
fn free_fermion_levels_match_the_full_spectrum() {
    assert!(validation::xy_spectrum(8).unwrap() < 1e-9);
}

#[test]
fn entropy_formula_matches_partial_trace() {
    assert!(validation::entropy_formula(8, 3).unwrap() < 1e-8);
}

#[test]
fn thermal_correlations_match_the_gibbs_state() {
    let n = 6;
    let b = 1.0;
    let f = random_field(n, 0);
    let es = xy::diagonalize(&xy::build_m(&f).unwrap()).unwrap();
    let g = xy::thermal_correlation_matrix(&es, b).unwrap();

    let full = oracle::build_full(Model::Xy, &f).unwrap().diagonalize().unwrap();
    let v = full.dense_vectors();
    let e0 = full.energies[0];
    let w: Vec<f64> = full.energies.iter().map(|e| (-b * (e - e0)).exp()).collect();
    let z: f64 = w.iter().sum();
    let dim = full.dim();
    let mut rho = Array2::<C64>::zeros((dim, dim));
    for (k, wk) in w.iter().enumerate() {
        let col = v.column(k);
        for i in 0..dim {
            for j in 0..dim {
                rho[[i, j]] += C64::new(wk * col[i] * col[j] / z, 0.0);
            }
        }
    }
    let modes = oracle::jordan_wigner_modes(n).unwrap();
    for j in 0..n {
        for k in 0..n {
            let ck_dag = modes[k].t().mapv(|x| x.conj());
            let expect: C64 = rho.dot(&modes[j].dot(&ck_dag)).diag().sum();
            assert!((expect - g.gamma[[j, k]]).norm() < 1e-8, "({j},{k})");
        }
    }
}

#[test]
fn large_inverse_temperature_gives_the_ground_state() {
    let f = random_field(6, 1);
    let es = xy::diagonalize(&xy::build_m(&f).unwrap()).unwrap();
    let hot = xy::thermal_correlation_matrix(&es, 50.0).unwrap();
    let cold = xy::eigenstate_two_point(&es, &xy::ground_state_pattern(&es)).unwrap();
    let diff = hot.gamma.iter().zip(cold.gamma.iter()).map(|(a, b)| (a - b).norm()).fold(0.0, f64::max);
    assert!(diff < 1e-8, "{diff}");
}

#[test]
fn quench_dynamics_match_exact_evolution() {
    assert!(validation::quench(6, 3).unwrap() < 1e-8);
}

#[test]
fn fermion_operators() {
    assert_eq!(validation::car(6).unwrap(), 0.0);
    assert!(validation::quadratic_form(6).unwrap() < 1e-10);
}

#[test]
fn wall_site_diagonal_of_one_magnon() {
    let p = XxzParams { anisotropy: 2.0, boundary: 0.25 };
    let h = xxz::build_h_sector(1, 1, &p, &field(&[0.0; 3])).unwrap();
    let i = h.basis.position(&[-1]).unwrap();
    assert!(close(h.matrix.get(i, i), 0.75, 1e-15));
}

#[test]
fn sector_matrix_is_the_spin_block() {
    assert!(validation::xxz_sector_block(2, 5, 3.0).unwrap() < 1e-12);
    assert!(validation::xxz_sector_block(3, 3, 1.5).unwrap() < 1e-12);
    assert!(validation::xxz_number_conservation(3).unwrap() < 1e-12);
}

#[test]
fn clean_sector_spectrum_is_above_the_threshold() {
    for (n, l) in [(1, 6), (2, 5), (3, 4)] {
        let p = XxzParams::with_droplet_boundary(2.5);
        let h = xxz::build_h_sector(n, l, &p, &field(&vec![0.0; 2 * l + 1])).unwrap();
        let e = h.eigen(Selection::All, false).unwrap();
        assert!(e.values[0] >= p.threshold() - 1e-12);
    }
}

#[test]
fn droplet_band_closed_forms() {
    let d = 2.0;
    let one = xxz::droplet_band(1, d).unwrap();
    assert!(close(one.lower, 1.0 - 1.0 / d, 1e-14) && close(one.upper, 1.0 + 1.0 / d, 1e-14));
    let two = xxz::droplet_band(2, d).unwrap();
    assert!(close(two.lower, 1.0 - 1.0 / (d * d), 1e-14) && close(two.upper, 1.0, 1e-14));
    let three = xxz::droplet_band(3, d).unwrap();
    assert!(close(three.lower, 1.0 - 1.0 / 6.0, 1e-14) && close(three.upper, 0.9, 1e-14));
}

#[test]
fn safety_window() {
    let w = xxz::spectral_window(2.0, 0.5, WindowKind::Safe).unwrap();
    assert!(close(w.lower, 0.5, 1e-15) && close(w.upper, 0.75, 1e-15));
    let g = xxz::spectral_window(2.0, 0.5, WindowKind::SafeWithGround).unwrap();
    assert!(close(g.lower, 0.0, 1e-15) && close(g.upper, 0.75, 1e-15));
}

#[test]
fn combes_thomas_constants() {
    let (pre, base) = xxz::ct_constants(2.0, 0.5);
    assert!(close(pre, 64.0, 1e-12) && close(base, 1.0625, 1e-12));
}

#[test]
fn combes_thomas_cases_hold() {
    let mut c = ExperimentConfig::new(ExperimentKind::XxzCombesThomas);
    c.particles = 3;
    c.length = 10;
    c.anisotropy = 2.0;
    c.delta = 0.5;
    c.realizations = 50;
    let s = run_ensemble(&c).unwrap();
    let measured: Vec<_> = s.samples.iter().filter(|x| x.series == "measured").collect();
    let bound: Vec<_> = s.samples.iter().filter(|x| x.series == "bound").collect();
    assert_eq!(measured.len(), 50);
    for (m, b) in measured.iter().zip(&bound) {
        assert!(m.value <= b.value, "{} > {} at d = {}", m.value, b.value, m.x);
    }
}

#[test]
fn ising_levels_and_superposition() {
    assert!(validation::ising_spectrum(10).unwrap() < 1e-10);
    assert!(validation::ising_superposition(6).unwrap() < 1e-10);
    assert!(close(oracle::ising_energy(&[0, 2], &[0.3, 0.0, 0.5, 0.0]), 2.8, 1e-14));
    assert_eq!(oracle::ising_energy(&[], &[0.3, 0.1]), 0.0);
}

#[test]
fn selection_rules_of_eigenstate_correlations() {
    assert!(validation::clustering_selection(2).unwrap() < 1e-12);
}

#[test]
fn validation_suite_passes() {
    let checks = validation::run_suite().unwrap();
    assert_eq!(checks.len(), 10);
    assert!(checks.iter().all(|c| c.passed()), "{checks:?}");
}
