//! Ideal two-level evolution against projected "real" evolution.
//!
//! The ideal qubit is `H_I = -(E_J/2) σ_x` on span{|0⟩, |1⟩}, with the
//! constant `E_ch / 4` dropped. The real evolution keeps only the two
//! lowest eigenstates of the full box,
//! `U_R = Σ_j e^{-i E_j t} |ψ_j⟩⟨ψ_j|`, taken either from the small-`v`
//! Mathieu series or from exact charge-basis diagonalization. `U_R` is a
//! sum of two projectors, so the evolved state may carry less than unit
//! norm; it is never renormalized.
//!
//! Times are in units of `1 / E_ch` (ħ = 1).

use num_complex::Complex64;

use crate::charge_model::{ChargeSpectrum, DEGENERACY_OFFSET};
use crate::error::{Error, Result};
use crate::mathieu::{series_a1, series_b1};

const NORM_TOLERANCE: f64 = 1e-12;

/// Computational-basis state `c0 |0⟩ + c1 |1⟩`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QubitState {
    c0: Complex64,
    c1: Complex64,
}

impl QubitState {
    pub fn new(c0: Complex64, c1: Complex64) -> Result<Self> {
        let norm = c0.norm_sqr() + c1.norm_sqr();
        let normalized = (norm - 1.0).abs() <= NORM_TOLERANCE;
        if !normalized {
            return Err(Error::domain(format!(
                "qubit state must be normalized, |c0|^2 + |c1|^2 = {norm}"
            )));
        }
        Ok(QubitState { c0, c1 })
    }

    /// `cos θ |0⟩ + sin θ |1⟩`.
    pub fn from_angle(theta: f64) -> Self {
        let (s, c) = theta.sin_cos();
        QubitState {
            c0: Complex64::new(c, 0.0),
            c1: Complex64::new(s, 0.0),
        }
    }

    pub fn c0(&self) -> Complex64 {
        self.c0
    }

    pub fn c1(&self) -> Complex64 {
        self.c1
    }

    pub fn norm_sqr(&self) -> f64 {
        self.c0.norm_sqr() + self.c1.norm_sqr()
    }

    /// `⟨self|other⟩`.
    pub fn inner(&self, other: &QubitState) -> Complex64 {
        self.c0.conj() * other.c0 + self.c1.conj() * other.c1
    }

    /// The same state embedded in the charge basis.
    pub fn embed(&self, n_min: i64, dim: usize, time: f64) -> Result<ExtendedState> {
        let mut st = ExtendedState::zeros(n_min, dim, time);
        st.set(0, self.c0)?;
        st.set(1, self.c1)?;
        Ok(st)
    }
}

/// Amplitudes over consecutive charge labels `n_min, n_min + 1, ...`.
#[derive(Debug, Clone, PartialEq)]
pub struct ExtendedState {
    n_min: i64,
    amplitudes: Vec<Complex64>,
    time: f64,
}

impl ExtendedState {
    pub fn zeros(n_min: i64, dim: usize, time: f64) -> Self {
        ExtendedState {
            n_min,
            amplitudes: vec![Complex64::new(0.0, 0.0); dim],
            time,
        }
    }

    pub fn n_min(&self) -> i64 {
        self.n_min
    }

    pub fn n_max(&self) -> i64 {
        self.n_min + self.amplitudes.len() as i64 - 1
    }

    pub fn time(&self) -> f64 {
        self.time
    }

    pub fn amplitudes(&self) -> &[Complex64] {
        &self.amplitudes
    }

    pub fn labels(&self) -> impl Iterator<Item = i64> {
        self.n_min..=self.n_max()
    }

    /// `⟨n|Ψ⟩`, `None` outside the basis.
    pub fn amplitude(&self, n: i64) -> Option<Complex64> {
        let i = n - self.n_min;
        if i < 0 {
            return None;
        }
        self.amplitudes.get(i as usize).copied()
    }

    fn set(&mut self, n: i64, value: Complex64) -> Result<()> {
        let i = n - self.n_min;
        match self.amplitudes.get_mut(i.max(0) as usize) {
            Some(slot) if i >= 0 => {
                *slot = value;
                Ok(())
            }
            _ => Err(Error::domain(format!(
                "charge label {n} outside basis [{}, {}]",
                self.n_min,
                self.n_max()
            ))),
        }
    }

    pub fn norm_sqr(&self) -> f64 {
        self.amplitudes.iter().map(|a| a.norm_sqr()).sum()
    }

    /// `Σ_{i=0,1} ⟨Ψ|Π_i|Ψ⟩`.
    pub fn computational_probability(&self) -> f64 {
        [0, 1]
            .iter()
            .filter_map(|&n| self.amplitude(n))
            .map(|a| a.norm_sqr())
            .sum()
    }

    /// Probability outside span{|0⟩, |1⟩}.
    pub fn leaked_probability(&self) -> f64 {
        self.labels()
            .zip(&self.amplitudes)
            .filter(|(n, _)| !matches!(n, 0 | 1))
            .map(|(_, a)| a.norm_sqr())
            .sum()
    }

    /// Largest `|a_n - b_n|` over the union of both bases (missing labels read as zero).
    pub fn max_amplitude_gap(&self, other: &ExtendedState) -> f64 {
        let lo = self.n_min.min(other.n_min);
        let hi = self.n_max().max(other.n_max());
        let zero = Complex64::new(0.0, 0.0);
        (lo..=hi)
            .map(|n| {
                (self.amplitude(n).unwrap_or(zero) - other.amplitude(n).unwrap_or(zero)).norm()
            })
            .fold(0.0, f64::max)
    }
}

/// Series eigenstates over labels `{-1, 0, 1, 2}`:
///
/// ```text
/// |ψ_e⟩ = sqrt(32 / (64 + v²)) [ |0⟩ + |1⟩ + (v/8)(|-1⟩ + |2⟩) ]
/// |ψ_o⟩ = sqrt(32 / (64 + v²)) [ |0⟩ - |1⟩ + (v/8)(|-1⟩ - |2⟩) ]
/// ```
///
/// with energies `E_ch a_1(v)` and `E_ch b_1(v)` from the order-one series.
/// The higher-order correction to the normalization is dropped.
#[derive(Debug, Clone, PartialEq)]
pub struct SeriesEigenstates {
    pub v: f64,
    /// Amplitudes on labels -1, 0, 1, 2.
    pub even: [f64; 4],
    pub odd: [f64; 4],
    pub even_energy: f64,
    pub odd_energy: f64,
}

impl SeriesEigenstates {
    pub const N_MIN: i64 = -1;

    pub fn new(v: f64, charging: f64) -> Self {
        let pref = (32.0 / (64.0 + v * v)).sqrt();
        let side = v / 8.0;
        SeriesEigenstates {
            v,
            even: [pref * side, pref, pref, pref * side],
            odd: [pref * side, pref, -pref, -pref * side],
            even_energy: charging * series_a1(v),
            odd_energy: charging * series_b1(v),
        }
    }

    /// `⟨ψ_e|ψ_o⟩`, summed in mirror pairs so the cancellation is exact.
    pub fn even_odd_overlap(&self) -> f64 {
        (self.even[0] * self.odd[0] + self.even[3] * self.odd[3])
            + (self.even[1] * self.odd[1] + self.even[2] * self.odd[2])
    }

    /// `⟨ψ|Π_0 + Π_1|ψ⟩ = 64 / (64 + v²)`, the same for both states.
    pub fn computational_norm(&self) -> f64 {
        64.0 / (64.0 + self.v * self.v)
    }

    pub fn states(&self) -> [(&[f64; 4], f64); 2] {
        [
            (&self.even, self.even_energy),
            (&self.odd, self.odd_energy),
        ]
    }
}

/// `U_I(t) = e^{i E_J t σ_x / 2}`, closed form.
pub fn ideal_evolve(state: &QubitState, time: f64, josephson: f64) -> QubitState {
    let (s, c) = (0.5 * josephson * time).sin_cos();
    let is = Complex64::new(0.0, s);
    QubitState {
        c0: c * state.c0 + is * state.c1,
        c1: is * state.c0 + c * state.c1,
    }
}

/// Two-projector propagator built from the series eigenstates.
pub fn series_real_evolve(state: &QubitState, time: f64, v: f64, charging: f64) -> ExtendedState {
    let series = SeriesEigenstates::new(v, charging);
    let mut out = ExtendedState::zeros(SeriesEigenstates::N_MIN, 4, time);
    for (psi, energy) in series.states() {
        // ψ is real: ⟨ψ|β₀⟩ = ψ(0) c0 + ψ(1) c1
        let overlap = psi[1] * state.c0 + psi[2] * state.c1;
        let coeff = Complex64::from_polar(1.0, -energy * time) * overlap;
        for (slot, a) in out.amplitudes.iter_mut().zip(psi) {
            *slot += coeff * *a;
        }
    }
    out
}

/// Two-projector propagator built from the two lowest exact eigenstates.
pub fn oracle_real_evolve(
    state: &QubitState,
    time: f64,
    spectrum: &ChargeSpectrum,
) -> Result<ExtendedState> {
    if spectrum.gate_offset != DEGENERACY_OFFSET {
        return Err(Error::domain(format!(
            "real evolution needs the spectrum at n_g = 1/2, got n_g = {}",
            spectrum.gate_offset
        )));
    }
    if spectrum.dim() < 2 {
        return Err(Error::domain("spectrum has fewer than two states"));
    }
    let gap = spectrum.eigenvalues[1] - spectrum.eigenvalues[0];
    let scale = spectrum.eigenvalues[0].abs().max(spectrum.eigenvalues[1].abs()).max(1.0);
    if gap <= 1e-14 * scale {
        return Err(Error::domain(
            "lowest charge eigenstates are degenerate (E_J = 0); even/odd states cannot be identified",
        ));
    }
    let mut out = ExtendedState::zeros(spectrum.n_min(), spectrum.dim(), time);
    for k in 0..2 {
        let psi = &spectrum.eigenvectors[k];
        let overlap = spectrum.amplitude(k, 0) * state.c0 + spectrum.amplitude(k, 1) * state.c1;
        let coeff = Complex64::from_polar(1.0, -spectrum.eigenvalues[k] * time) * overlap;
        for (slot, a) in out.amplitudes.iter_mut().zip(psi) {
            *slot += coeff * *a;
        }
    }
    Ok(out)
}

/// Which operator sits between the ideal and real states in the overlap.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum OverlapProjector {
    /// `Π = Π_0 + Π_1`.
    #[default]
    Computational,
    /// Plain overlap. Identical to the projected one because the ideal state
    /// has no weight outside span{|0⟩, |1⟩}.
    Identity,
}

/// `|⟨Ψ_I|Π|Ψ_R⟩|²` with `Π` projecting onto span{|0⟩, |1⟩}.
pub fn overlap_fidelity(ideal: &QubitState, real: &ExtendedState) -> Result<f64> {
    overlap_fidelity_with(ideal, real, OverlapProjector::Computational)
}

pub fn overlap_fidelity_with(
    ideal: &QubitState,
    real: &ExtendedState,
    projector: OverlapProjector,
) -> Result<f64> {
    let normalized = (ideal.norm_sqr() - 1.0).abs() <= NORM_TOLERANCE;
    if !normalized {
        return Err(Error::domain("ideal state is not normalized"));
    }
    let (Some(a0), Some(a1)) = (real.amplitude(0), real.amplitude(1)) else {
        return Err(Error::domain(format!(
            "real state basis [{}, {}] does not contain the computational labels 0 and 1",
            real.n_min(),
            real.n_max()
        )));
    };
    let overlap = match projector {
        OverlapProjector::Computational => ideal.c0.conj() * a0 + ideal.c1.conj() * a1,
        OverlapProjector::Identity => {
            let embedded = ideal.embed(real.n_min(), real.amplitudes.len(), real.time)?;
            embedded
                .amplitudes
                .iter()
                .zip(&real.amplitudes)
                .map(|(x, y)| x.conj() * y)
                .sum()
        }
    };
    Ok(overlap.norm_sqr())
}
