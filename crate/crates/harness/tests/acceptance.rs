//! Acceptance suite. Each criterion prints one PASS/FAIL line; the process
//! exits nonzero if any criterion fails.

use std::process::ExitCode;
use std::time::{Duration, Instant};

use qgrain::complexity::{
    abs_complexity_bound, abs_complexity_exact, apply_basis_permutation, complexity_c, BasisPermutation,
    DEFAULT_TOLERANCE,
};
use qgrain::grover::{default_iterations, grover_run, oracle_ancilla_check, GroverConfig};
use qgrain::physest::{estimate_process, preset, preset_catalog, HbarMode};
use qgrain::uncertainty::{accuracy_bound, accuracy_bound_log2, check_relation, grover_threshold, Criterion};
use qgrain::{DenseState, GridSpec, Rounding};
use qgrain_harness::report::{read_results, summarize};
use qgrain_harness::sweep::{run_sweep, RoundingKind, SweepConfig};

type Outcome = Result<String, String>;
type Check = (&'static str, fn() -> Outcome, Duration);

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

/// `sin²((2s+1)·asin(2^{-n/2}))`, evaluated here rather than through the library.
fn closed_form(n: u32, s: u64) -> f64 {
    let theta = (1.0 / ((1u64 << n) as f64).sqrt()).asin();
    ((2 * s + 1) as f64 * theta).sin().powi(2)
}

fn ideal_closed_form() -> Outcome {
    let mut worst = 0.0f64;
    for n in 2..=10 {
        let s = default_iterations(n);
        for target in [0, (1u64 << n) - 1, 5 % (1u64 << n)] {
            let p = grover_run(&GroverConfig::ideal(n, target)).map_err(|e| e.to_string())?.final_success_probability();
            let diff = (p - closed_form(n, s)).abs();
            worst = worst.max(diff);
            ensure(diff <= 1e-10, || format!("n={n} target={target}: {p} vs {}", closed_form(n, s)))?;
            if n == 2 {
                ensure((p - 1.0).abs() <= 1e-15, || format!("n=2 gives {p}, not 1"))?;
            }
            if n == 3 {
                ensure((p - 0.9453).abs() <= 1e-4, || format!("n=3 gives {p}"))?;
            }
        }
    }
    Ok(format!("max deviation {worst:.1e} over n=2..10"))
}

/// Phase oracle versus `|x, y⟩ → |x, y ⊕ [x = t]⟩` on `|x⟩|−⟩`, the ancilla
/// being the highest qubit.
fn ancilla_matches_phase(n: u32, target: u64) -> Result<bool, String> {
    let e = |r: qgrain::Result<DenseState>| r.map_err(|e| e.to_string());
    let h = std::f64::consts::FRAC_1_SQRT_2;
    let minus = e(DenseState::from_real(1, &[h, -h]))?;
    let dim = 1u32 << n;
    let map = (0..2 * dim).map(|j| if j % dim == target as u32 { j ^ dim } else { j }).collect();
    let uf = BasisPermutation::from_table(n + 1, map).map_err(|e| e.to_string())?;
    let inputs = (0..dim as u64)
        .map(|x| e(DenseState::basis(n, x)))
        .chain(std::iter::once(e(DenseState::uniform(n))))
        .collect::<Result<Vec<_>, _>>()?;
    for x in inputs {
        let through_ancilla = e(apply_basis_permutation(&e(x.tensor(&minus))?, &uf))?;
        let mut phased = x.clone();
        phased.negate_amplitude(target).map_err(|e| e.to_string())?;
        let expected = e(phased.tensor(&minus))?;
        let close =
            through_ancilla.amplitudes().iter().zip(expected.amplitudes()).all(|(a, b)| (a - b).norm() <= 1e-12);
        if !close {
            return Ok(false);
        }
    }
    Ok(true)
}

fn oracle_equivalence() -> Outcome {
    let mut checked = 0;
    for n in 1..=6 {
        for target in 0..1u64 << n {
            ensure(oracle_ancilla_check(n, target).map_err(|e| e.to_string())?, || {
                format!("library check fails at n={n} target={target}")
            })?;
            ensure(ancilla_matches_phase(n, target)?, || format!("independent check fails at n={n} target={target}"))?;
            checked += 1;
        }
    }
    Ok(format!("{checked} (n, target) pairs agree"))
}

fn quantization_fidelity() -> Outcome {
    let grid = GridSpec::from_log2(40, Rounding::NearestTiesEven).map_err(|e| e.to_string())?;
    let mut worst = 0.0f64;
    for n in 1..=12 {
        let target = 0x5a5 % (1u64 << n);
        let q = grover_run(&GroverConfig::quantized(n, target, grid)).map_err(|e| e.to_string())?;
        let i = grover_run(&GroverConfig::ideal(n, target)).map_err(|e| e.to_string())?;
        for (a, b) in q.records.iter().zip(&i.records) {
            worst = worst.max((a.success_probability - b.success_probability).abs());
        }
    }
    ensure(worst <= 1e-3, || format!("deviation {worst:.3e}"))?;
    Ok(format!("max deviation {worst:.1e} at every step for n=1..12"))
}

fn threshold_existence() -> Outcome {
    let mut stars = Vec::new();
    for log2_q in [8, 12, 16] {
        let grid = GridSpec::from_log2(log2_q, Rounding::NearestTiesEven).map_err(|e| e.to_string())?;
        let r = grover_threshold(grid, Criterion::FirstStep, 20, 8, 2024).map_err(|e| e.to_string())?;
        if log2_q == 8 {
            for p in r.points.iter().filter(|p| p.n >= 11) {
                ensure(!p.passed, || format!("Q=2^8 passes at n={}", p.n))?;
            }
            ensure(r.n_star.is_some_and(|s| s <= 10), || format!("Q=2^8 n_star = {:?}", r.n_star))?;
        }
        stars.push(r.n_star.ok_or_else(|| format!("no passing n at Q=2^{log2_q}"))?);
    }
    ensure(stars.windows(2).all(|w| w[0] <= w[1]), || format!("n_star not monotone: {stars:?}"))?;
    Ok(format!("n_star for Q=2^8, 2^12, 2^16: {stars:?}"))
}

fn complexity_suite() -> Outcome {
    let e = |r: qgrain::Result<DenseState>| r.map_err(|e| e.to_string());
    let c = |psi: &DenseState| complexity_c(psi, DEFAULT_TOLERANCE).map_err(|e| e.to_string());

    ensure(c(&e(DenseState::basis(3, 0))?)?.complexity == 1, || "C(|000⟩) ≠ 1".into())?;
    let bell = e(DenseState::ghz(2))?;
    let bell_zero = e(bell.tensor(&e(DenseState::basis(1, 0))?))?;
    let r = c(&bell_zero)?;
    ensure(r.complexity == 2 && r.carriers.len() == 1 && r.carriers[0].qubits() == [0, 1], || {
        format!("Bell⊗|0⟩ gives C={} carriers {:?}", r.complexity, r.carriers)
    })?;
    for n in 1..=8 {
        let got = c(&e(DenseState::ghz(n))?)?.complexity;
        ensure(got == n, || format!("C(GHZ_{n}) = {got}"))?;
    }
    for (name, psi) in [("Bell", bell.clone()), ("GHZ_3", e(DenseState::ghz(3))?)] {
        let (a, w) = abs_complexity_exact(&psi, DEFAULT_TOLERANCE).map_err(|e| e.to_string())?;
        let image = apply_basis_permutation(&psi, &w).map_err(|e| e.to_string())?;
        ensure(a == 1 && c(&image)?.complexity == 1, || format!("A({name}) = {a}"))?;
    }
    let ghz8 = e(DenseState::ghz(8))?;
    let bound = abs_complexity_bound(&ghz8, 10_000, 0, DEFAULT_TOLERANCE).map_err(|e| e.to_string())?;
    let image = apply_basis_permutation(&ghz8, &bound.witness).map_err(|e| e.to_string())?;
    ensure(bound.complexity == 1 && c(&image)?.complexity == 1 && bound.evaluations <= 10_000, || {
        format!("GHZ_8 bound {} after {} evaluations", bound.complexity, bound.evaluations)
    })?;
    let gates = match &bound.witness {
        BasisPermutation::Circuit { gates, .. } => gates.len(),
        BasisPermutation::Table { .. } => 0,
    };
    Ok(format!("GHZ_8 reduced to C=1 by {gates} gates in {} evaluations", bound.evaluations))
}

fn physical_estimates() -> Outcome {
    ensure(preset_catalog().len() == 3, || "catalog size".into())?;
    let mut parts = Vec::new();
    for (name, n_states, qubits, slack) in [("rb85", 1e4, 13, 0), ("he6", 1.6e22, 73, 1), ("he5-stage", 1e11, 36, 1)] {
        let p = preset(name).ok_or_else(|| format!("missing preset {name}"))?;
        let r = estimate_process(&p).map_err(|e| e.to_string())?;
        ensure((r.n_states - n_states).abs() <= 1e-12 * n_states, || format!("{name}: N = {}", r.n_states))?;
        ensure(r.qubits.abs_diff(qubits) <= slack, || format!("{name}: {} qubits", r.qubits))?;
        let codata = estimate_process(&p.clone().with_hbar(HbarMode::Codata)).map_err(|e| e.to_string())?;
        ensure(codata.qubits.abs_diff(r.qubits) <= 1, || format!("{name}: codata {} qubits", codata.qubits))?;
        parts.push(format!("{name} N={:.3e} {} qubits", r.n_states, r.qubits));
    }
    Ok(parts.join(", "))
}

fn uncertainty_relation() -> Outcome {
    let ns: Vec<u64> = (0..10).map(|k| 1u64 << k).collect();
    let qs: Vec<u64> = (0..10).map(|k| 64 + 97 * k).collect();
    let mut worst = 0.0f64;
    for &n in &ns {
        for &q in &qs {
            let eps = accuracy_bound(n, q).map_err(|e| e.to_string())?;
            let r = check_relation(n, eps, q).map_err(|e| e.to_string())?;
            worst = worst.max(r.slack.abs());
            ensure(r.holds && r.slack.abs() <= 1e-9, || format!("N={n} Q={q}: slack {}", r.slack))?;
            let l = |n, q| accuracy_bound_log2(n, q).map_err(|e| e.to_string());
            ensure(l(n, q + 97)? < l(n, q)? && l(2 * n, q)? > l(n, q)?, || format!("monotonicity at N={n} Q={q}"))?;
        }
    }
    Ok(format!("{} pairs, max |slack| {worst:.1e}", ns.len() * qs.len()))
}

fn harness_determinism() -> Outcome {
    let dir = tempfile::tempdir().map_err(|e| e.to_string())?;
    let cfg = |file: &str| SweepConfig {
        n: vec![2, 4, 6, 8, 10],
        log2_q: vec![8, 12, 16, 20, 40],
        criteria: vec![Criterion::FirstStep, Criterion::FullRun],
        seeds: vec![99],
        runs_per_n: 2,
        output: dir.path().join(file),
        parallelism: None,
        rounding: RoundingKind::Stochastic,
        record_wall_time: false,
    };
    let (a, b) = (cfg("a.jsonl"), cfg("b.jsonl"));
    let points = a.n.len() * a.log2_q.len() * a.criteria.len() * a.seeds.len();
    ensure(points == 50, || format!("{points} points"))?;
    run_sweep(&a).map_err(|e| e.to_string())?;
    run_sweep(&b).map_err(|e| e.to_string())?;
    let bytes_a = std::fs::read(&a.output).map_err(|e| e.to_string())?;
    let bytes_b = std::fs::read(&b.output).map_err(|e| e.to_string())?;
    ensure(bytes_a == bytes_b, || "results files differ".into())?;
    let rows = read_results(&String::from_utf8_lossy(&bytes_a)).map_err(|e| e.to_string())?;
    let report = summarize(&rows);
    let expected = points * a.runs_per_n as usize;
    ensure(report.rows == expected, || format!("{} rows, expected {expected}", report.rows))?;
    ensure(report.cells.iter().map(|c| c.runs).sum::<u64>() == expected as u64, || "cell runs".into())?;
    Ok(format!("{points} points, {expected} rows, {} identical bytes", bytes_a.len()))
}

fn main() -> ExitCode {
    let criteria: [Check; 8] = [
        ("1 ideal closed form", ideal_closed_form, Duration::from_secs(1)),
        ("2 oracle equivalence", oracle_equivalence, Duration::from_secs(10)),
        ("3 quantization fidelity", quantization_fidelity, Duration::from_secs(30)),
        ("4 threshold existence", threshold_existence, Duration::from_secs(120)),
        ("5 complexity suite", complexity_suite, Duration::from_secs(60)),
        ("6 physical estimates", physical_estimates, Duration::from_secs(1)),
        ("7 uncertainty relation", uncertainty_relation, Duration::from_secs(1)),
        ("8 harness determinism", harness_determinism, Duration::from_secs(60)),
    ];
    let mut failed = 0;
    for (name, check, limit) in criteria {
        let started = Instant::now();
        let outcome = check();
        let elapsed = started.elapsed();
        let outcome = match outcome {
            Ok(detail) if elapsed > limit => Err(format!("{detail}; took {elapsed:.2?}, limit {limit:?}")),
            other => other,
        };
        match outcome {
            Ok(detail) => println!("PASS  {name}: {detail} ({elapsed:.2?})"),
            Err(why) => {
                failed += 1;
                println!("FAIL  {name}: {why} ({elapsed:.2?})");
            }
        }
    }
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        println!("{failed} acceptance criteria failed");
        ExitCode::FAILURE
    }
}
