// From circuit parameters to energies, then exact diagonalization of the
// truncated charge-basis Hamiltonian at the degeneracy point.
//
//     cargo run --example charge_oracle

use qleak::charge_model::{
    build_hamiltonian, diagonalize, energies_from_device, oracle_report, DeviceParams,
    EnergyScales,
};

pub fn run_example() -> Result<(), Box<dyn std::error::Error>> {
    let device = DeviceParams {
        junction_capacitance: 80.0,
        gate_capacitance: 20.0,
        critical_current: 0.0008,
    };
    let scales = energies_from_device(&device)?;
    println!(
        "E_ch = {:.4}, E_J = {:.5}, E_J/E_ch = {:.4} (design window: {})",
        scales.charging(),
        scales.josephson(),
        scales.ratio(),
        scales.in_design_window()
    );

    let h = build_hamiltonian(scales, 0.5, 10)?;
    let spectrum = diagonalize(&h)?;
    println!("\nlowest levels (units of E_ch):");
    for k in 0..4 {
        println!(
            "  E_{k} = {:.12}  leak weight {:.3e}",
            spectrum.eigenvalues[k] / scales.charging(),
            spectrum.leak_weight(k)
        );
    }
    println!("max residual {:.1e} (‖H‖∞ = {:.3})", spectrum.max_residual, spectrum.norm_inf);

    println!("\nratio      L_oracle          L / ratio^2");
    let mut prev: Option<f64> = None;
    for ratio in [0.0025, 0.005, 0.01, 0.02, 0.04] {
        let rep = oracle_report(EnergyScales::from_ratio(ratio)?, 10)?;
        let growth = prev.map_or(String::new(), |p| format!("  x{:.4}", rep.leakage / p));
        println!("{ratio:<10} {:.10e}  {:.6}{growth}", rep.leakage, rep.leakage / (ratio * ratio));
        prev = Some(rep.leakage);
    }
    Ok(())
}

#[allow(dead_code)]
fn main() -> Result<(), Box<dyn std::error::Error>> {
    run_example()
}
