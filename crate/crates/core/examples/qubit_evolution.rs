// Ideal two-level evolution against the projected real evolution, built
// from the Mathieu-series states and from exact eigenstates.
//
//     cargo run --example qubit_evolution

use qleak::charge_model::{build_hamiltonian, diagonalize, EnergyScales};
use qleak::leakage::fidelity;
use qleak::qubit_dynamics::{
    ideal_evolve, oracle_real_evolve, overlap_fidelity, series_real_evolve, QubitState,
};

pub fn run_example() -> Result<(), Box<dyn std::error::Error>> {
    let ratio = 0.02;
    let scales = EnergyScales::from_ratio(ratio)?;
    let spectrum = diagonalize(&build_hamiltonian(scales, 0.5, 10)?)?;
    let beta = QubitState::from_angle(0.0);
    let v = ratio;

    println!("E_J/E_ch = {ratio}, start in |0⟩, v = {v}");
    println!("E_J t      P(|1⟩) ideal   F series        F oracle        leaked (oracle)");
    for step in 0..=8 {
        let t = step as f64 * std::f64::consts::PI / 8.0 / scales.josephson();
        let ideal = ideal_evolve(&beta, t, scales.josephson());
        let series = series_real_evolve(&beta, t, v, scales.charging());
        let exact = oracle_real_evolve(&beta, t, &spectrum)?;
        println!(
            "{:<10.4} {:<14.10} {:<15.12} {:<15.12} {:.3e}",
            t * scales.josephson(),
            ideal.c1().norm_sqr(),
            overlap_fidelity(&ideal, &series)?,
            overlap_fidelity(&ideal, &exact)?,
            exact.leaked_probability()
        );
    }
    println!("closed-form F(v) = {:.12}", fidelity(v));
    Ok(())
}

#[allow(dead_code)]
fn main() -> Result<(), Box<dyn std::error::Error>> {
    run_example()
}
