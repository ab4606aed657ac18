// Which `v` mapping brings the closed form closest to the exact oracle.
//
//     cargo run --example convention_audit

use qleak::leakage::{reconcile, VConvention};

pub fn run_example() -> Result<(), Box<dyn std::error::Error>> {
    for ratio in [0.0025, 0.005, 0.01, 0.02, 0.05] {
        let rep = reconcile(ratio, 10)?;
        let oracle = rep.oracle_leakage().ok_or("oracle did not converge")?;
        println!("E_J/E_ch = {ratio}: L_oracle = {oracle:.6e}");
        for c in VConvention::ALL {
            let e = rep.estimate(c);
            println!(
                "  {:<8} v = {:+.5}  L = {:.6e}  L/L_oracle = {:.4}",
                c.tag(),
                e.v,
                e.closed_leakage,
                e.closed_leakage / oracle
            );
        }
        println!(
            "  closest: {}",
            rep.closest.map_or("none", |c| c.tag())
        );
    }
    Ok(())
}

#[allow(dead_code)]
fn main() -> Result<(), Box<dyn std::error::Error>> {
    run_example()
}
