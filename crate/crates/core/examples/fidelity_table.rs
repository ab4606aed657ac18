// Fidelity at the three published E_J/E_ch ratios under every `v` mapping,
// next to the exact charge-basis oracle.
//
//     cargo run --example fidelity_table

use qleak::leakage::{reconcile, VConvention};

pub fn run_example() -> Result<(), Box<dyn std::error::Error>> {
    println!("E_J/E_ch   mapping   v          F closed       F leading      F oracle");
    for ratio in [0.02, 0.01, 0.005] {
        let report = reconcile(ratio, 10)?;
        for convention in VConvention::ALL {
            let e = report.estimate(convention);
            println!(
                "{ratio:<10} {:<9} {:<10.5} {:.10}   {:.10}   {:.10}",
                convention.tag(),
                e.v,
                e.closed_fidelity,
                1.0 - e.leading_leakage,
                report.oracle_fidelity().unwrap_or(f64::NAN),
            );
        }
    }
    println!("\n`numeric` (v = E_J/E_ch) is inferred from the published digits.");
    Ok(())
}

#[allow(dead_code)]
fn main() -> Result<(), Box<dyn std::error::Error>> {
    run_example()
}
