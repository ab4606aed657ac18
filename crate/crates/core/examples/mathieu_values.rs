// Mathieu characteristic values from the recurrence solver against the
// order-one small-q series, plus the leading Fourier coefficients of ce_1.
//
//     cargo run --example mathieu_values

use qleak::mathieu::{char_value, fourier_coeffs, series_a1, series_b1, MathieuProblem, Parity};

pub fn run_example() -> Result<(), Box<dyn std::error::Error>> {
    println!("q        a_1 solver        a_1 series        b_1 solver        b_1 series");
    for q in [-1.0, -0.5, -0.1, 0.0, 0.02, 0.1, 0.5, 1.0] {
        let a = char_value(&MathieuProblem::new(Parity::Even, 1, q)?)?;
        let b = char_value(&MathieuProblem::new(Parity::Odd, 1, q)?)?;
        println!(
            "{q:<8} {a:<17.12} {:<17.12} {b:<17.12} {:.12}",
            series_a1(q),
            series_b1(q)
        );
    }

    let q = 0.04;
    let ce1 = fourier_coeffs(&MathieuProblem::new(Parity::Even, 1, q)?)?;
    let lead = ce1.coeff_of_harmonic(1);
    println!("\nce_1(x, {q}) relative to cos x:");
    for m in [1, 3, 5, 7] {
        println!("  cos {m}x : {:+.3e}", ce1.coeff_of_harmonic(m) / lead);
    }
    println!("  expected cos 3x ≈ -q/8 - q^2/64 = {:+.3e}", -q / 8.0 - q * q / 64.0);
    println!("  ce_1(0) = {:.12}, residual {:.1e}", ce1.eval(0.0), ce1.residual);

    println!("\nhigher orders at q = 1:");
    for (kind, order) in [(Parity::Even, 0), (Parity::Even, 2), (Parity::Odd, 2), (Parity::Even, 3)] {
        let s = fourier_coeffs(&MathieuProblem::new(kind, order, 1.0)?)?;
        println!("  {}_{order}: {:.12} ({} modes)", kind.label(), s.char_value, s.problem.truncation());
    }
    Ok(())
}

#[allow(dead_code)]
fn main() -> Result<(), Box<dyn std::error::Error>> {
    run_example()
}
