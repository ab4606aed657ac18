//! Acceptance suite. Each test prints one `PASS`/`FAIL` line with its
//! measured runtime and then asserts. Run with `--nocapture` to see the lines.

use std::f64::consts::{FRAC_PI_4, PI};
use std::process::Command;
use std::time::{Duration, Instant};

use num_complex::Complex64;
use qleak::charge_model::{
    build_hamiltonian, diagonalize, oracle_report, EnergyScales, DEGENERACY_OFFSET,
};
use qleak::leakage::{closed_form_leakage, reconcile, VConvention};
use qleak::mathieu::{char_value, series_a1, series_b1, MathieuProblem, Parity};
use qleak::qubit_dynamics::{ideal_evolve, series_real_evolve, QubitState};

const ORACLE_FIXTURE: f64 = 5.050_029_993_744_386e-5;
const ORACLE_RATIOS: [f64; 4] = [0.02, 0.01, 0.005, 0.0025];

fn report(id: &str, ok: bool, elapsed: Duration, budget: Option<Duration>, detail: &str) {
    let in_time = budget.is_none_or(|b| elapsed < b);
    let verdict = if ok && in_time { "PASS" } else { "FAIL" };
    let limit = budget.map_or(String::new(), |b| format!(" (limit {:.0} s)", b.as_secs_f64()));
    println!("[{verdict}] criterion {id}: {detail}; {:.3} s{limit}", elapsed.as_secs_f64());
    assert!(ok, "criterion {id} failed: {detail}");
    assert!(in_time, "criterion {id} exceeded its runtime budget");
}

fn secs(s: u64) -> Option<Duration> {
    Some(Duration::from_secs(s))
}

fn qleak(args: &[&str]) -> String {
    let out = Command::new(env!("CARGO_BIN_EXE_qleak"))
        .args(args)
        .output()
        .expect("spawn qleak");
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    String::from_utf8(out.stdout).unwrap()
}

/// `(ratio, F_closed)` cells of a `table` run.
fn table_fidelities(convention: &str) -> Vec<(String, String)> {
    let out = qleak(&["table", "--convention", convention]);
    let mut lines = out.lines();
    let header: Vec<&str> = lines.next().unwrap().split(',').collect();
    let r = header.iter().position(|h| *h == "ratio").unwrap();
    let f = header.iter().position(|h| *h == "F_closed").unwrap();
    lines
        .map(|l| {
            let cells: Vec<&str> = l.split(',').collect();
            (cells[r].to_string(), cells[f].to_string())
        })
        .collect()
}

#[test]
fn criterion_1_table_reproduction() {
    let start = Instant::now();
    let rows = table_fidelities("numeric");
    let elapsed = start.elapsed();
    let expected = ["0.9999875000", "0.9999968750", "0.9999992188"];
    let mut mismatches = Vec::new();
    for ((ratio, got), want) in rows.iter().zip(expected) {
        if got != want {
            mismatches.push(format!("ratio {ratio}: printed {got}, expected {want}"));
        }
    }
    let ok = rows.len() == 3 && mismatches.is_empty();
    let detail = if ok {
        "all three fidelities match to 10 digits".to_string()
    } else {
        mismatches.join("; ")
    };
    report("1", ok, elapsed, secs(1), &detail);
}

#[test]
fn criterion_2_convention_audit() {
    let start = Instant::now();
    let rows = table_fidelities("eq16");
    let rep = reconcile(0.02, 10).unwrap();
    let elapsed = start.elapsed();
    let eq16 = rep.estimate(VConvention::Eq16);
    let numeric = rep.estimate(VConvention::Numeric);
    let shown = &rows[0].1;
    let gap = eq16.closed_fidelity - numeric.closed_fidelity;
    let ok = shown != "0.9999875000" && gap.abs() > 1e-6 && eq16.v == -0.01;
    report(
        "2",
        ok,
        elapsed,
        secs(1),
        &format!("eq16 at ratio 0.02 prints F = {shown} (v = {}), numeric differs by {gap:.3e}", eq16.v),
    );
}

#[test]
fn criterion_3_mathieu_cross_validation() {
    let start = Instant::now();
    let mut worst = 0.0_f64;
    let mut ok = true;
    for i in 0..50 {
        let q = -1.0 + 2.0 * i as f64 / 49.0;
        let bound = 2.0 * q.abs().powi(5);
        let a = char_value(&MathieuProblem::new(Parity::Even, 1, q).unwrap()).unwrap();
        let b = char_value(&MathieuProblem::new(Parity::Odd, 1, q).unwrap()).unwrap();
        let (da, db) = ((a - series_a1(q)).abs(), (b - series_b1(q)).abs());
        ok &= da <= bound && db <= bound;
        if q != 0.0 {
            worst = worst.max(da.max(db) / bound);
        }
    }
    let a0 = char_value(&MathieuProblem::new(Parity::Even, 1, 0.0).unwrap()).unwrap();
    let b0 = char_value(&MathieuProblem::new(Parity::Odd, 1, 0.0).unwrap()).unwrap();
    ok &= (a0 - 1.0).abs() <= 1e-12 && (b0 - 1.0).abs() <= 1e-12;
    report(
        "3",
        ok,
        start.elapsed(),
        secs(5),
        &format!("worst |solver - series| / 2|q|^5 = {worst:.3e}; a1(0) = {a0}, b1(0) = {b0}"),
    );
}

#[test]
fn criterion_4a_oracle_residuals() {
    let start = Instant::now();
    let mut worst = 0.0_f64;
    for ratio in ORACLE_RATIOS {
        let h = build_hamiltonian(EnergyScales::from_ratio(ratio).unwrap(), DEGENERACY_OFFSET, 10)
            .unwrap();
        let spec = diagonalize(&h).unwrap();
        worst = worst.max(spec.max_residual / spec.norm_inf);
    }
    report(
        "4a",
        worst <= 1e-10,
        start.elapsed(),
        secs(5),
        &format!("max residual / |H|_inf = {worst:.3e}"),
    );
}

#[test]
fn criterion_4b_oracle_angle_independence() {
    let start = Instant::now();
    let mut spreads = Vec::new();
    for ratio in ORACLE_RATIOS {
        let rep = oracle_report(EnergyScales::from_ratio(ratio).unwrap(), 10).unwrap();
        let samples: Vec<f64> = (0..=64).map(|k| rep.at_angle(PI * k as f64 / 64.0)).collect();
        let hi = samples.iter().cloned().fold(f64::MIN, f64::max);
        let lo = samples.iter().cloned().fold(f64::MAX, f64::min);
        spreads.push((ratio, hi - lo));
    }
    let worst = spreads.iter().map(|s| s.1).fold(0.0, f64::max);
    let detail = spreads
        .iter()
        .map(|(r, s)| format!("ratio {r}: spread {s:.3e}"))
        .collect::<Vec<_>>()
        .join(", ");
    report("4b", worst <= 1e-12, start.elapsed(), secs(5), &detail);
}

#[test]
fn criterion_4c_oracle_quadratic_scaling() {
    let start = Instant::now();
    let small = oracle_report(EnergyScales::from_ratio(0.0025).unwrap(), 10).unwrap();
    let next = oracle_report(EnergyScales::from_ratio(0.005).unwrap(), 10).unwrap();
    let growth = next.leakage / small.leakage;
    report(
        "4c",
        (growth / 4.0 - 1.0).abs() <= 0.01,
        start.elapsed(),
        secs(5),
        &format!("L(0.005) / L(0.0025) = {growth:.6}"),
    );
}

#[test]
fn criterion_4d_oracle_truncation_stability() {
    let start = Instant::now();
    let mut worst = 0.0_f64;
    for ratio in ORACLE_RATIOS {
        let scales = EnergyScales::from_ratio(ratio).unwrap();
        let base = oracle_report(scales, 10).unwrap();
        let doubled = oracle_report(scales, 20).unwrap();
        assert_eq!((base.truncation, doubled.truncation), (10, 20));
        worst = worst.max((base.leakage - doubled.leakage).abs());
    }
    report(
        "4d",
        worst < 1e-12,
        start.elapsed(),
        secs(5),
        &format!("max |L(N=20) - L(N=10)| = {worst:.3e}"),
    );
}

#[test]
fn criterion_5_route_identity() {
    let start = Instant::now();
    let mut worst = 0.0_f64;
    for v in [0.005, 0.01, 0.02, 0.04] {
        for theta in [0.0, 0.3, FRAC_PI_4, 1.2] {
            for t in [0.0, 5.0, 250.0] {
                let s = QubitState::from_angle(theta);
                let real = series_real_evolve(&s, t, v, 1.0);
                let series = 1.0 - real.computational_probability();
                worst = worst.max((series - closed_form_leakage(v)).abs());
            }
        }
    }
    report(
        "5",
        worst <= 1e-12,
        start.elapsed(),
        secs(1),
        &format!("max |L_series - L_closed| = {worst:.3e}"),
    );
}

/// `exp(i a σx)` by its Taylor series.
fn exp_i_sigma_x(a: f64) -> [[Complex64; 2]; 2] {
    let gen = [
        [Complex64::new(0.0, 0.0), Complex64::new(0.0, a)],
        [Complex64::new(0.0, a), Complex64::new(0.0, 0.0)],
    ];
    let one = Complex64::new(1.0, 0.0);
    let zero = Complex64::new(0.0, 0.0);
    let mut sum = [[one, zero], [zero, one]];
    let mut term = sum;
    for k in 1..60 {
        let mut next = [[zero; 2]; 2];
        for i in 0..2 {
            for j in 0..2 {
                next[i][j] = (term[i][0] * gen[0][j] + term[i][1] * gen[1][j]) / k as f64;
            }
        }
        term = next;
        for i in 0..2 {
            for j in 0..2 {
                sum[i][j] += term[i][j];
            }
        }
    }
    sum
}

#[test]
fn criterion_6_evolution_contracts() {
    let start = Instant::now();
    let ej = 0.02;

    let mut s = QubitState::from_angle(0.7);
    let mut drift = 0.0_f64;
    for _ in 0..1000 {
        s = ideal_evolve(&s, 1.3, ej);
        drift = drift.max((s.norm_sqr() - 1.0).abs());
    }

    let plus = QubitState::from_angle(FRAC_PI_4);
    let mut stationary = 0.0_f64;
    for t in [0.0, 1.0, 77.0, 1e3] {
        let out = ideal_evolve(&plus, t, ej);
        let overlap = plus.inner(&out).norm();
        stationary = stationary.max((overlap - 1.0).abs());
        stationary = stationary.max((out.c0().norm() - plus.c0().norm()).abs());
    }

    let t_swap = PI / ej;
    let u = exp_i_sigma_x(0.5 * ej * t_swap);
    let mut swap = 0.0_f64;
    for theta in [0.0, 0.4, FRAC_PI_4, 1.1] {
        let s = QubitState::from_angle(theta);
        let out = ideal_evolve(&s, t_swap, ej);
        let d0 = u[0][0] * s.c0() + u[0][1] * s.c1();
        let d1 = u[1][0] * s.c0() + u[1][1] * s.c1();
        swap = swap.max((out.c0() - d0).norm()).max((out.c1() - d1).norm());
    }
    let flipped = ideal_evolve(&QubitState::from_angle(0.0), t_swap, ej);
    let ok = drift <= 1e-12 && stationary <= 1e-12 && swap <= 1e-12 && flipped.c0().norm() < 1e-12;
    report(
        "6",
        ok,
        start.elapsed(),
        secs(1),
        &format!("norm drift {drift:.1e}, stationarity {stationary:.1e}, swap vs exp {swap:.1e}"),
    );
}

#[test]
fn criterion_7_regression_fixtures() {
    let start = Instant::now();
    let rep = reconcile(0.02, 10).unwrap();
    let leak = rep.oracle_leakage().unwrap();
    let ok = (leak - ORACLE_FIXTURE).abs() <= 1e-12 && rep.closest == Some(VConvention::PertMatched);
    report(
        "7",
        ok,
        start.elapsed(),
        None,
        &format!("L_oracle(0.02) = {leak:.17e}, closest = {:?}", rep.closest.map(|c| c.tag())),
    );
}

#[test]
fn criterion_8_determinism() {
    let start = Instant::now();
    let dir = std::env::temp_dir().join(format!("qleak-acceptance-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let paths = [dir.join("a.csv"), dir.join("b.csv")];
    for p in &paths {
        qleak(&[
            "sweep", "--lo", "0.001", "--hi", "0.5", "--steps", "40", "--out", p.to_str().unwrap(),
        ]);
    }
    let a = std::fs::read(&paths[0]).unwrap();
    let b = std::fs::read(&paths[1]).unwrap();
    report(
        "8",
        a == b && !a.is_empty(),
        start.elapsed(),
        None,
        &format!("two sweeps, {} bytes each, identical = {}", a.len(), a == b),
    );
}
