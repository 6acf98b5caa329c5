use proptest::prelude::*;

use mbl_core::disorder::{sample_field, DisorderSpec, FieldRealization, SeedPlan};
use mbl_core::experiments::{fit_exponential_decay, ExperimentConfig, ExperimentKind};
use mbl_core::linalg::Selection;
use mbl_core::oracle::{self, Model};
use mbl_core::xxz::{self, XxzParams};
use mbl_core::xy::{self, OccupationPattern};

fn field_strategy(min: usize, max: usize) -> impl Strategy<Value = Vec<f64>> {
    (min..=max).prop_flat_map(|n| prop::collection::vec(0.0..4.0f64, n))
}

proptest! {
    #![proptest_config(ProptestConfig { cases: 24, ..ProptestConfig::default() })]

    #[test]
    fn free_fermion_energies_are_the_many_body_spectrum(h in field_strategy(2, 6)) {
        let f = FieldRealization::from_values(h);
        let n = f.len();
        let m = xy::build_m(&f).unwrap();
        let es = xy::diagonalize(&m).unwrap();
        let mut free: Vec<f64> = (0..1u64 << n)
            .map(|c| xy::eigenstate_energy(&es, &OccupationPattern::from_code(c, n), m.ground_offset).unwrap())
            .collect();
        free.sort_by(f64::total_cmp);
        let full = oracle::build_full(Model::Xy, &f).unwrap().diagonalize().unwrap();
        for (a, b) in free.iter().zip(&full.energies) {
            prop_assert!((a - b).abs() < 1e-9);
        }
    }

    #[test]
    fn eigenstate_correlations_are_projections(h in field_strategy(2, 12), code in any::<u64>()) {
        let f = FieldRealization::from_values(h);
        let n = f.len();
        let es = xy::diagonalize(&xy::build_m(&f).unwrap()).unwrap();
        let alpha = OccupationPattern::from_code(code & ((1 << n) - 1), n);
        let g = xy::eigenstate_two_point(&es, &alpha).unwrap();
        prop_assert!(g.hermiticity_error() < 1e-12);
        prop_assert!(g.idempotency_error() < 1e-10);
        for ell in 1..n {
            let s = xy::entanglement_entropy(&xy::restrict_upper_block(&g, ell).unwrap()).unwrap();
            let rest = xy::entanglement_entropy(&xy::restrict_block(&g, ell, n - ell).unwrap()).unwrap();
            prop_assert!(s >= -1e-12 && s <= ell.min(n - ell) as f64 * 2f64.ln() + 1e-10);
            // pure state: both sides of the cut carry the same entropy
            prop_assert!((s - rest).abs() < 1e-8);
        }
    }

    #[test]
    fn eigenstate_correlations_are_stationary(h in field_strategy(3, 10), t in 0.0..20.0f64) {
        let f = FieldRealization::from_values(h);
        let n = f.len();
        let es = xy::diagonalize(&xy::build_m(&f).unwrap()).unwrap();
        let g = xy::eigenstate_two_point(&es, &OccupationPattern::from_code(1, n)).unwrap();
        let gt = xy::evolve_correlation_matrix(&g, &es, t).unwrap();
        // an eigenstate is stationary
        let drift = g.gamma.iter().zip(gt.gamma.iter()).map(|(a, b)| (a - b).norm()).fold(0.0, f64::max);
        prop_assert!(drift < 1e-9);
    }

    #[test]
    fn sector_hamiltonian_respects_its_lower_bound(
        n in 1usize..=3,
        l in 2usize..=4,
        anis in 1.2..6.0f64,
        seed in any::<u64>(),
    ) {
        let f = sample_field(&DisorderSpec::uniform(0.0, 1.0), 2 * l + 1, &SeedPlan::new(seed), 0).unwrap();
        let p = XxzParams::with_droplet_boundary(anis);
        let h = xxz::build_h_sector(n, l, &p, &f).unwrap();
        prop_assert_eq!(h.dim(), xxz::binomial(2 * l + 1, n));
        let dense = h.matrix.to_dense();
        prop_assert!((&dense - &dense.t()).iter().all(|v| v.abs() < 1e-15));
        let e = h.eigen(Selection::All, false).unwrap();
        prop_assert!(e.values[0] >= xxz::sector_lower_bound(n, &p, &f) - 1e-10);
    }

    #[test]
    fn droplet_bands_shrink_with_particle_number(anis in 1.05..20.0f64, n in 1usize..30) {
        let a = xxz::droplet_band(n, anis).unwrap();
        let b = xxz::droplet_band(n + 1, anis).unwrap();
        prop_assert!(a.lower <= b.lower + 1e-15 && b.upper <= a.upper + 1e-15);
        prop_assert!(b.lower <= b.upper);
        prop_assert!(a.lower >= 1.0 - 1.0 / anis - 1e-15);
    }

    #[test]
    fn combes_thomas_bound_holds(
        seed in any::<u64>(),
        anis in 1.5..5.0f64,
        delta in 0.2..1.0f64,
        frac in 0.0..1.0f64,
        a in prop::collection::btree_set(0usize..35, 1..6),
        b in prop::collection::btree_set(0usize..35, 1..6),
    ) {
        let f = sample_field(&DisorderSpec::uniform(0.0, 1.0), 7, &SeedPlan::new(seed), 0).unwrap();
        let h = xxz::build_h_sector(3, 3, &XxzParams::with_droplet_boundary(anis), &f).unwrap();
        let energy = frac * (2.0 - delta) * h.params.threshold();
        let a: Vec<usize> = a.into_iter().collect();
        let b: Vec<usize> = b.into_iter().collect();
        let chk = xxz::ct_check(&h, energy, delta, &a, &b).unwrap();
        prop_assert!(chk.holds(), "{:?}", chk);
    }

    #[test]
    fn number_is_conserved(l in 1usize..=3, seed in any::<u64>(), anis in 1.1..4.0f64) {
        let f = sample_field(&DisorderSpec::uniform(0.0, 1.0), 2 * l + 1, &SeedPlan::new(seed), 0).unwrap();
        let full = oracle::build_full(Model::Xxz(XxzParams::with_droplet_boundary(anis)), &f).unwrap();
        prop_assert!(full.number_commutator_error() < 1e-12);
    }

    #[test]
    fn exponential_fit_recovers_the_rate(rate in 0.01..3.0f64, c in 0.1..10.0f64, points in 3usize..20) {
        let x: Vec<f64> = (1..=points).map(|d| d as f64).collect();
        let y: Vec<f64> = x.iter().map(|d| c * (-rate * d).exp()).collect();
        let fit = fit_exponential_decay(&x, &y, 1e-300).unwrap();
        prop_assert!((fit.rate - rate).abs() < 1e-9);
        prop_assert!((fit.r_squared - 1.0).abs() < 1e-9);
    }

    #[test]
    fn fields_are_reproducible_and_in_range(seed in any::<u64>(), index in 0u64..1000, lo in -2.0..2.0f64, w in 0.0..3.0f64) {
        let spec = DisorderSpec::uniform(lo, lo + w);
        let plan = SeedPlan::new(seed);
        let a = sample_field(&spec, 16, &plan, index).unwrap();
        prop_assert_eq!(&a, &sample_field(&spec, 16, &plan, index).unwrap());
        prop_assert!(a.values.iter().all(|&v| v >= lo && v <= lo + w));
        prop_assert_ne!(plan.stream_seed(index), plan.stream_seed(index + 1));
    }

    #[test]
    fn config_echo_round_trips(
        kind in prop::sample::select(ExperimentKind::ALL.to_vec()),
        seed in any::<u64>(),
        coupling in 0.0..5.0f64,
        r in 1usize..500,
        dists in prop::collection::vec(1usize..50, 1..8),
    ) {
        let mut c = ExperimentConfig::new(kind);
        c.seeds = SeedPlan::new(seed);
        c.disorder.coupling = coupling;
        c.realizations = r;
        c.distances = dists;
        let mut back = ExperimentConfig::new(kind);
        back.apply_text(&mbl_core::experiments::config_text(&c)).unwrap();
        prop_assert_eq!(back, c);
    }
}
