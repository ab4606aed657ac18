use proptest::prelude::*;
use qleak::charge_model::{build_hamiltonian, diagonalize, oracle_report, EnergyScales};
use qleak::leakage::{closed_form_leakage, fidelity, series_route_leakage};
use qleak::mathieu::{char_value, series_a1, series_b1, MathieuProblem, Parity};
use qleak::qubit_dynamics::{
    ideal_evolve, oracle_real_evolve, overlap_fidelity, series_real_evolve, QubitState,
};

fn a1(q: f64) -> f64 {
    char_value(&MathieuProblem::new(Parity::Even, 1, q).unwrap()).unwrap()
}

fn b1(q: f64) -> f64 {
    char_value(&MathieuProblem::new(Parity::Odd, 1, q).unwrap()).unwrap()
}

proptest! {
    #[test]
    fn closed_form_is_even_and_bounded(v in -3.0f64..3.0) {
        prop_assert_eq!(closed_form_leakage(v), closed_form_leakage(-v));
        let l = closed_form_leakage(v);
        prop_assert!((0.0..1.0).contains(&l));
        prop_assert_eq!(fidelity(v), 1.0 - l);
    }

    #[test]
    fn closed_form_two_term_bound(v in -0.1f64..0.1) {
        prop_assert!((closed_form_leakage(v) - v * v / 32.0).abs() <= v.powi(4));
    }

    #[test]
    fn series_route_is_closed_form(v in -1.0f64..1.0, theta in 0.0f64..6.3, t in 0.0f64..1e3) {
        let r = series_real_evolve(&QubitState::from_angle(theta), t, v, 1.0);
        let kept = 64.0 / (64.0 + v * v);
        prop_assert!((r.computational_probability() - kept * kept).abs() < 1e-12);
        prop_assert!(r.norm_sqr() <= 1.0 + 1e-12);
        prop_assert!((series_route_leakage(v) - closed_form_leakage(v)).abs() < 1e-12);
    }

    #[test]
    fn mathieu_order_one_branches(q in -1.0f64..1.0) {
        let (a, b) = (a1(q), b1(q));
        prop_assert!((a - series_a1(q)).abs() <= 2.0 * q.abs().powi(5) + 1e-13);
        prop_assert!((b - series_b1(q)).abs() <= 2.0 * q.abs().powi(5) + 1e-13);
        prop_assert!((a1(-q) - b).abs() < 1e-12);
        if q > 1e-9 {
            prop_assert!(a > b);
        } else if q < -1e-9 {
            prop_assert!(a < b);
        }
    }

    #[test]
    fn ideal_evolution_is_a_group(
        theta in 0.0f64..6.3, t1 in -500.0f64..500.0, t2 in -500.0f64..500.0, ej in 0.0f64..0.5,
    ) {
        let s = QubitState::from_angle(theta);
        let once = ideal_evolve(&s, t1 + t2, ej);
        let twice = ideal_evolve(&ideal_evolve(&s, t1, ej), t2, ej);
        prop_assert!((once.c0() - twice.c0()).norm() < 1e-10);
        prop_assert!((once.c1() - twice.c1()).norm() < 1e-10);
        prop_assert!((once.norm_sqr() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn fidelity_in_unit_interval(
        theta in 0.0f64..6.3, t in 0.0f64..2e3, ratio in 1e-4f64..0.5, v in -1.0f64..1.0,
    ) {
        let s = QubitState::from_angle(theta);
        let ideal = ideal_evolve(&s, t, ratio);
        let f = overlap_fidelity(&ideal, &series_real_evolve(&s, t, v, 1.0)).unwrap();
        prop_assert!((0.0..=1.0).contains(&f));
        let spec = diagonalize(
            &build_hamiltonian(EnergyScales::from_ratio(ratio).unwrap(), 0.5, 10).unwrap(),
        )
        .unwrap();
        let g = overlap_fidelity(&ideal, &oracle_real_evolve(&s, t, &spec).unwrap()).unwrap();
        prop_assert!((0.0..=1.0).contains(&g));
    }

    #[test]
    fn oracle_worst_case_dominates(ratio in 1e-3f64..0.5, theta in 0.0f64..6.3) {
        let rep = oracle_report(EnergyScales::from_ratio(ratio).unwrap(), 10).unwrap();
        prop_assert!(rep.at_angle(theta) <= rep.leakage + 1e-15);
        prop_assert!((rep.at_angle(theta) - rep.at_angle_direct(theta)).abs() < 1e-13);
    }

    #[test]
    fn degeneracy_point_reflection(ratio in 0.0f64..0.5) {
        let spec = diagonalize(
            &build_hamiltonian(EnergyScales::from_ratio(ratio).unwrap(), 0.5, 10).unwrap(),
        )
        .unwrap();
        for k in 0..2 {
            for n in -3..=0 {
                let d = spec.amplitude(k, n).abs() - spec.amplitude(k, 1 - n).abs();
                prop_assert!(d.abs() < 1e-10);
            }
        }
    }
}
