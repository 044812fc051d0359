use proptest::prelude::*;
use qgrain::physest::{estimate_process, HbarMode, ProcessSpec};
use qgrain::qstate::{quantize, DenseState, GridSpec, QuantizedAmplitude, QuantizedState, Rounding};
use qgrain::uncertainty::{
    accuracy_bound, accuracy_bound_log2, check_relation, coarse_grain, grover_threshold, uniform_bins, Criterion,
};
use qgrain::Complex64;

/// Whether the uniform state on `n` qubits rounds to something of squared
/// norm below 1/2 on a grid with `q` quanta, computed in plain floats.
fn uniform_vanishes(n: u32, q: u64) -> bool {
    let units = (q as f64 / (1u64 << n) as f64).sqrt();
    let r = units.round_ties_even();
    (1u64 << n) as f64 * r * r / (q as f64) < 0.5
}

proptest! {
    #[test]
    fn accuracy_bound_is_monotone(n in 1u64..1 << 20, q in 1u64..1 << 30) {
        prop_assert!(accuracy_bound_log2(n, q + 1).unwrap() < accuracy_bound_log2(n, q).unwrap());
        prop_assert!(accuracy_bound_log2(n + 1, q).unwrap() > accuracy_bound_log2(n, q).unwrap());
        if q / n < 1000 {
            let here = accuracy_bound(n, q).unwrap();
            prop_assert!(accuracy_bound(n, q + 1).unwrap() <= here);
            prop_assert!(accuracy_bound(n + 1, q).unwrap() >= here);
        }
    }

    #[test]
    fn accuracy_bound_saturates_the_relation(n in 1u64..1 << 20, q in 1u64..1 << 20) {
        prop_assume!(q <= 1000 * n);
        let eps = accuracy_bound(n, q).unwrap();
        prop_assume!(eps < 1.0);
        let r = check_relation(n, eps, q).unwrap();
        prop_assert!(r.slack.abs() <= 1e-9, "slack {}", r.slack);
        prop_assert!(r.holds);
        prop_assert_eq!(r.holds, r.slack >= 0.0);
    }

    #[test]
    fn singleton_bins_reproduce_the_state(coords in prop::collection::vec((-50i64..50, -50i64..50), 16)) {
        let grid = GridSpec::new(1 << 14, Rounding::NearestTiesEven).unwrap();
        let amps: Vec<QuantizedAmplitude> = coords.iter().map(|&(k, l)| QuantizedAmplitude::new(k, l)).collect();
        let qs = QuantizedState::from_coords(4, grid, amps).unwrap();

        let single = coarse_grain(&qs, &uniform_bins(16, 1).unwrap()).unwrap();
        for (j, (&(k, l), v)) in coords.iter().zip(single.values()).enumerate() {
            prop_assert_eq!(single.sums[j], (k as i128, l as i128));
            prop_assert_eq!(v, qs.amplitude(j as u64).unwrap());
        }

        let total: (i128, i128) = coords.iter().fold((0, 0), |(a, b), &(k, l)| (a + k as i128, b + l as i128));
        for size in [2, 4, 8, 16] {
            let g = coarse_grain(&qs, &uniform_bins(16, size).unwrap()).unwrap();
            let sum = g.sums.iter().fold((0, 0), |(a, b), &(k, l)| (a + k, b + l));
            prop_assert_eq!(sum, total);
        }
    }

    #[test]
    fn first_step_threshold_stops_before_the_uniform_state_vanishes(q in 2u64..1 << 10, seed in any::<u64>()) {
        let grid = GridSpec::new(q, Rounding::NearestTiesEven).unwrap();
        let r = grover_threshold(grid, Criterion::FirstStep, 12, 2, seed).unwrap();
        for p in &r.points {
            prop_assert_eq!(p.trials.iter().all(|t| t.vanished), uniform_vanishes(p.n, q), "n={}", p.n);
        }
        // An isolated n can vanish through a norm deficit and the next one
        // recover; the bound is the n from which every larger register vanishes.
        let tail = (2..=12u32).rev().take_while(|&n| uniform_vanishes(n, q)).last();
        if let Some(vanish_n) = tail {
            prop_assert!(r.n_star.is_none_or(|s| s < vanish_n));
        }
    }

    #[test]
    fn state_count_scales_linearly(e in -20i32..0, t in -12i32..2, me in 1.0f64..10.0, mt in 1.0f64..10.0) {
        let energy = me * 10f64.powi(e);
        let time = mt * 10f64.powi(t);
        for hbar in [HbarMode::Paper, HbarMode::Codata] {
            let base = estimate_process(&ProcessSpec::new("p", energy, time, hbar)).unwrap();
            let longer = estimate_process(&ProcessSpec::new("p", energy, 2.0 * time, hbar)).unwrap();
            let hotter = estimate_process(&ProcessSpec::new("p", 2.0 * energy, time, hbar)).unwrap();
            prop_assert_eq!(longer.n_states, 2.0 * base.n_states);
            prop_assert_eq!(hotter.n_states, 2.0 * base.n_states);
            prop_assert!(longer.qubits >= base.qubits);
            prop_assert!(hotter.qubits >= base.qubits);
            prop_assert!((base.dt_s - hbar.value() / energy).abs() <= 1e-12 * base.dt_s);
            prop_assert!((base.n_states - time / base.dt_s).abs() <= 1e-12 * base.n_states);
        }
    }

    #[test]
    fn qubit_count_is_monotone(e in 1e-20f64..1e-3, t in 1e-12f64..10.0, scale in 1.0f64..100.0) {
        let base = estimate_process(&ProcessSpec::new("p", e, t, HbarMode::Paper)).unwrap();
        let longer = estimate_process(&ProcessSpec::new("p", e, t * scale, HbarMode::Paper)).unwrap();
        let hotter = estimate_process(&ProcessSpec::new("p", e * scale, t, HbarMode::Paper)).unwrap();
        prop_assert!(longer.qubits >= base.qubits);
        prop_assert!(hotter.qubits >= base.qubits);
    }
}

#[test]
fn one_bin_sums_the_uniform_state() {
    for log2_q in [8, 16, 30] {
        let grid = GridSpec::from_log2(log2_q, Rounding::NearestTiesEven).unwrap();
        for n in 1..=6 {
            let psi = DenseState::uniform(n).unwrap();
            let qs = quantize(&psi, grid).unwrap();
            let all = coarse_grain(&qs, &uniform_bins(qs.dim(), qs.dim()).unwrap()).unwrap();
            let direct: Complex64 = (0..qs.dim() as u64).map(|j| qs.amplitude(j).unwrap()).sum();
            assert!((all.values()[0] - direct).norm() < 1e-12);
            // Each of the 2^n amplitudes holds round(2^{-n/2}/ε) quanta.
            let per = (2f64.powf(-(n as f64) / 2.0) / grid.epsilon()).round_ties_even();
            assert_eq!(all.sums[0], ((per as i128) << n, 0));
        }
    }
}
