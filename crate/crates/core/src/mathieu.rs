//! Periodic solutions of the canonical Mathieu equation
//!
//! ```text
//! y'' + (a - 2 q cos 2x) y = 0
//! ```
//!
//! Characteristic values and Fourier coefficients come from the
//! parity-resolved three-term recurrence, truncated to a finite number of
//! modes and solved as a symmetric tridiagonal eigenproblem. The order-one
//! small-`q` power series for `a_1` and `b_1` are provided alongside as an
//! independent route.
//!
//! Coefficients are stored in their natural scale (`A_0`, `A_2`, ... for
//! `ce_{2n}`). They are normalized so that `2 A_0^2 + A_2^2 + A_4^2 + ... = 1`
//! for `ce_{2n}` and the plain sum of squares is one for the other three
//! classes. With that weighting `∫_0^{2π} y^2 dx = π`, so the classical
//! normalization coincides with this one; [`MathieuSolution::classical_norm`]
//! reports the integral for any coefficient vector.

use std::f64::consts::{PI, SQRT_2};

use crate::error::{Error, Result};
use crate::tridiag::{eigh_tridiagonal, residual_inf};

/// Default number of Fourier modes retained.
pub const DEFAULT_TRUNCATION: usize = 32;
/// Hard cap on the automatic truncation doubling.
pub const MAX_TRUNCATION: usize = 512;
/// Doubling stops once the characteristic value moves less than this.
pub const TRUNCATION_TOLERANCE: f64 = 1e-12;
/// Beyond this `|q|` the order-one power series is not trusted.
pub const SERIES_MAX_Q: f64 = 1.0;

/// Which family of periodic solutions: even `ce_r` or odd `se_r`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Parity {
    Even,
    Odd,
}

impl Parity {
    pub fn label(self) -> &'static str {
        match self {
            Parity::Even => "ce",
            Parity::Odd => "se",
        }
    }
}

impl std::str::FromStr for Parity {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "ce" | "even" => Ok(Parity::Even),
            "se" | "odd" => Ok(Parity::Odd),
            other => Err(Error::domain(format!(
                "unknown Mathieu kind `{other}` (expected ce or se)"
            ))),
        }
    }
}

/// The four Fourier classes the recurrence splits into.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum FourierClass {
    /// `ce_{2n}`: cos 0x, cos 2x, cos 4x, ...
    CosEven,
    /// `ce_{2n+1}`: cos x, cos 3x, ...
    CosOdd,
    /// `se_{2n+1}`: sin x, sin 3x, ...
    SinOdd,
    /// `se_{2n+2}`: sin 2x, sin 4x, ...
    SinEven,
}

impl FourierClass {
    fn of(kind: Parity, order: u32) -> Self {
        match (kind, order % 2) {
            (Parity::Even, 0) => FourierClass::CosEven,
            (Parity::Even, _) => FourierClass::CosOdd,
            (Parity::Odd, 0) => FourierClass::SinEven,
            (Parity::Odd, _) => FourierClass::SinOdd,
        }
    }

    fn harmonic(self, k: usize) -> u32 {
        let k = k as u32;
        match self {
            FourierClass::CosEven => 2 * k,
            FourierClass::CosOdd | FourierClass::SinOdd => 2 * k + 1,
            FourierClass::SinEven => 2 * k + 2,
        }
    }

    fn index_of(self, order: u32) -> usize {
        match self {
            FourierClass::CosEven => (order / 2) as usize,
            FourierClass::CosOdd | FourierClass::SinOdd => ((order - 1) / 2) as usize,
            FourierClass::SinEven => ((order - 2) / 2) as usize,
        }
    }

    /// Symmetric recurrence matrix over `modes` modes. For `ce_{2n}` the
    /// constant mode is carried as `sqrt(2) A_0` to make the matrix symmetric.
    fn matrix(self, q: f64, modes: usize) -> (Vec<f64>, Vec<f64>) {
        let mut diag: Vec<f64> = (0..modes)
            .map(|k| {
                let m = self.harmonic(k) as f64;
                m * m
            })
            .collect();
        let mut off = vec![q; modes - 1];
        match self {
            FourierClass::CosEven => off[0] = SQRT_2 * q,
            FourierClass::CosOdd => diag[0] += q,
            FourierClass::SinOdd => diag[0] -= q,
            FourierClass::SinEven => {}
        }
        (diag, off)
    }

    fn is_cos(self) -> bool {
        matches!(self, FourierClass::CosEven | FourierClass::CosOdd)
    }
}

/// A request for one periodic Mathieu solution.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MathieuProblem {
    kind: Parity,
    order: u32,
    q: f64,
    truncation: usize,
}

impl MathieuProblem {
    /// Problem at the default truncation.
    pub fn new(kind: Parity, order: u32, q: f64) -> Result<Self> {
        Self::with_truncation(kind, order, q, DEFAULT_TRUNCATION.max(order as usize + 8))
    }

    pub fn with_truncation(kind: Parity, order: u32, q: f64, truncation: usize) -> Result<Self> {
        if kind == Parity::Odd && order == 0 {
            return Err(Error::domain("se_0 does not exist; odd solutions start at order 1"));
        }
        if !q.is_finite() {
            return Err(Error::domain(format!("Mathieu parameter q must be finite, got {q}")));
        }
        if truncation < order as usize + 8 {
            return Err(Error::domain(format!(
                "truncation {truncation} too small for order {order} (need at least {})",
                order as usize + 8
            )));
        }
        if truncation > MAX_TRUNCATION {
            return Err(Error::domain(format!(
                "truncation {truncation} exceeds the cap {MAX_TRUNCATION}"
            )));
        }
        Ok(MathieuProblem { kind, order, q, truncation })
    }

    pub fn kind(&self) -> Parity {
        self.kind
    }

    pub fn order(&self) -> u32 {
        self.order
    }

    pub fn q(&self) -> f64 {
        self.q
    }

    pub fn truncation(&self) -> usize {
        self.truncation
    }

    fn class(&self) -> FourierClass {
        FourierClass::of(self.kind, self.order)
    }
}

/// A solved problem: characteristic value plus Fourier coefficients.
#[derive(Debug, Clone, PartialEq)]
pub struct MathieuSolution {
    /// The problem as finally solved; `truncation` is the converged mode count.
    pub problem: MathieuProblem,
    /// `a_r(q)` for `ce_r`, `b_r(q)` for `se_r`.
    pub char_value: f64,
    /// `coeffs[k]` multiplies the `k`-th harmonic of the class, see
    /// [`MathieuSolution::harmonic`].
    pub coeffs: Vec<f64>,
    /// Max-norm defect of the recurrence, including the coupling to the
    /// first dropped mode.
    pub residual: f64,
}

impl MathieuSolution {
    /// Harmonic number multiplying `coeffs[k]` (the `m` in `cos mx` / `sin mx`).
    pub fn harmonic(&self, k: usize) -> u32 {
        self.problem.class().harmonic(k)
    }

    /// Coefficient of `cos mx` (or `sin mx`), zero when `m` is outside the class.
    pub fn coeff_of_harmonic(&self, m: u32) -> f64 {
        (0..self.coeffs.len())
            .find(|&k| self.harmonic(k) == m)
            .map_or(0.0, |k| self.coeffs[k])
    }

    /// Weighted sum of squares; one for every solution this module returns.
    pub fn weighted_norm_sqr(&self) -> f64 {
        self.coeffs
            .iter()
            .enumerate()
            .map(|(k, c)| {
                let w = if self.harmonic(k) == 0 { 2.0 } else { 1.0 };
                w * c * c
            })
            .sum()
    }

    /// `∫_0^{2π} y(x)^2 dx`, i.e. `π` times [`Self::weighted_norm_sqr`].
    pub fn classical_norm(&self) -> f64 {
        PI * self.weighted_norm_sqr()
    }

    pub fn eval(&self, x: f64) -> f64 {
        eval_function(self, x)
    }

    /// Exact second derivative of the truncated Fourier series.
    pub fn eval_second_derivative(&self, x: f64) -> f64 {
        let class = self.problem.class();
        self.coeffs
            .iter()
            .enumerate()
            .map(|(k, c)| {
                let m = class.harmonic(k) as f64;
                let basis = if class.is_cos() { (m * x).cos() } else { (m * x).sin() };
                -m * m * c * basis
            })
            .sum()
    }
}

/// Characteristic value `a_r(q)` or `b_r(q)`.
pub fn char_value(problem: &MathieuProblem) -> Result<f64> {
    fourier_coeffs(problem).map(|s| s.char_value)
}

/// Characteristic value and normalized Fourier coefficients. The order-`r`
/// coefficient is made positive.
///
/// The truncation starts at `problem.truncation()` and doubles until the
/// characteristic value moves by less than [`TRUNCATION_TOLERANCE`], up to
/// [`MAX_TRUNCATION`] modes.
pub fn fourier_coeffs(problem: &MathieuProblem) -> Result<MathieuSolution> {
    let mut modes = problem.truncation;
    let mut current = solve_at(problem, modes)?;
    loop {
        let next_modes = modes * 2;
        if next_modes > MAX_TRUNCATION {
            return Err(Error::convergence(format!(
                "{}_{}(q={}) not converged within {MAX_TRUNCATION} modes",
                problem.kind.label(),
                problem.order,
                problem.q
            )));
        }
        let next = solve_at(problem, next_modes)?;
        let change = (next.char_value - current.char_value).abs();
        modes = next_modes;
        current = next;
        if change < TRUNCATION_TOLERANCE {
            return Ok(current);
        }
    }
}

fn solve_at(problem: &MathieuProblem, modes: usize) -> Result<MathieuSolution> {
    let class = problem.class();
    let target = class.index_of(problem.order);
    let (diag, off) = class.matrix(problem.q, modes);
    let eig = eigh_tridiagonal(&diag, &off)?;

    // Pick the branch by where the eigenvector peaks, not by eigenvalue rank.
    let to_natural = |v: &[f64]| -> Vec<f64> {
        let mut c = v.to_vec();
        if class == FourierClass::CosEven {
            c[0] /= SQRT_2;
        }
        c
    };
    let peak = |c: &[f64]| -> usize {
        let mut best = 0;
        for (i, x) in c.iter().enumerate() {
            if x.abs() > c[best].abs() {
                best = i;
            }
        }
        best
    };
    let matches: Vec<usize> = eig
        .vectors
        .iter()
        .enumerate()
        .filter(|(_, v)| peak(&to_natural(v)) == target)
        .map(|(k, _)| k)
        .collect();
    let [pick] = matches[..] else {
        return Err(Error::convergence(format!(
            "cannot isolate {}_{}(q={}) at {modes} modes: {} eigenvectors peak on the order-{} mode",
            problem.kind.label(),
            problem.order,
            problem.q,
            matches.len(),
            problem.order
        )));
    };

    let lambda = eig.values[pick];
    let mut v = eig.vectors[pick].clone();
    if v[target] < 0.0 {
        v.iter_mut().for_each(|x| *x = -*x);
    }
    let tail = (problem.q * v[modes - 1]).abs();
    let residual = residual_inf(&diag, &off, lambda, &v).max(tail);

    Ok(MathieuSolution {
        problem: MathieuProblem { truncation: modes, ..*problem },
        char_value: lambda,
        coeffs: to_natural(&v),
        residual,
    })
}

/// Pointwise value of `ce_r(x, q)` or `se_r(x, q)`.
pub fn eval_function(solution: &MathieuSolution, x: f64) -> f64 {
    let class = solution.problem.class();
    solution
        .coeffs
        .iter()
        .enumerate()
        .map(|(k, c)| {
            let m = class.harmonic(k) as f64;
            if class.is_cos() {
                c * (m * x).cos()
            } else {
                c * (m * x).sin()
            }
        })
        .sum()
}

/// Five-term small-`q` series for `a_1(q)`.
pub fn series_a1(q: f64) -> f64 {
    1.0 + q - q * q / 8.0 - q.powi(3) / 64.0 - q.powi(4) / 1536.0
}

/// Five-term small-`q` series for `b_1(q)`.
pub fn series_b1(q: f64) -> f64 {
    1.0 - q - q * q / 8.0 + q.powi(3) / 64.0 - q.powi(4) / 1536.0
}

/// Whether the order-one series is inside its trusted range.
pub fn series_is_reliable(q: f64) -> bool {
    q.abs() <= SERIES_MAX_Q
}
