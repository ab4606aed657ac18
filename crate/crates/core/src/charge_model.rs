//! Truncated charge-basis model of the Cooper-pair box.
//!
//! In reduced units (ħ = e = 1) the box is described by a charging energy
//! `E_ch` and a Josephson energy `E_J`. Over Cooper-pair numbers
//! `n ∈ {-N, ..., N + 1}` the Hamiltonian is tridiagonal:
//! `E_ch (n - n_g)^2` on the diagonal and `-E_J / 2` between neighbours.
//! The basis is shifted by one so that `n = 0` and `n = 1` sit equally far
//! from the edges; at `n_g = 1/2` the truncated model keeps the `n → 1 - n`
//! reflection exactly.

use crate::error::{Error, Result};
use crate::tridiag::{eigh_tridiagonal, fix_sign_by_largest, residual_inf};

/// Ratios `E_J / E_ch` at or below this are inside the design window.
pub const DESIGN_WINDOW_RATIO: f64 = 0.02;
/// The qubit's operating point.
pub const DEGENERACY_OFFSET: f64 = 0.5;
pub const DEFAULT_TRUNCATION: usize = 10;
pub const MAX_TRUNCATION: usize = 64;
/// Weight on the outermost basis states above which an eigenvector is
/// considered cut off by the truncation.
pub const EDGE_WEIGHT_LIMIT: f64 = 1e-8;
/// Oracle leakage is converged once doubling `N` moves it by less than this.
pub const ORACLE_TOLERANCE: f64 = 1e-12;

/// Circuit parameters in reduced units.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DeviceParams {
    pub junction_capacitance: f64,
    pub gate_capacitance: f64,
    pub critical_current: f64,
}

impl DeviceParams {
    pub fn total_capacitance(&self) -> f64 {
        self.junction_capacitance + self.gate_capacitance
    }
}

/// Charging and Josephson energies.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EnergyScales {
    charging: f64,
    josephson: f64,
}

impl EnergyScales {
    pub fn new(charging: f64, josephson: f64) -> Result<Self> {
        if !(charging.is_finite() && charging > 0.0) {
            return Err(Error::domain(format!(
                "charging energy must be positive, got {charging}"
            )));
        }
        if !(josephson.is_finite() && josephson >= 0.0) {
            return Err(Error::domain(format!(
                "Josephson energy must be non-negative, got {josephson}"
            )));
        }
        Ok(EnergyScales { charging, josephson })
    }

    /// `E_ch = 1`, `E_J = ratio`; energies and times are then in units of `E_ch`.
    pub fn from_ratio(ratio: f64) -> Result<Self> {
        Self::new(1.0, ratio)
    }

    pub fn charging(&self) -> f64 {
        self.charging
    }

    pub fn josephson(&self) -> f64 {
        self.josephson
    }

    /// `E_J / E_ch`.
    pub fn ratio(&self) -> f64 {
        self.josephson / self.charging
    }

    pub fn in_design_window(&self) -> bool {
        self.ratio() <= DESIGN_WINDOW_RATIO
    }
}

/// `E_ch = 2 / (C_J + C_g)`, `E_J = I_c / 2`.
pub fn energies_from_device(params: &DeviceParams) -> Result<EnergyScales> {
    let DeviceParams {
        junction_capacitance,
        gate_capacitance,
        critical_current,
    } = *params;
    for (name, x) in [
        ("junction capacitance", junction_capacitance),
        ("gate capacitance", gate_capacitance),
        ("critical current", critical_current),
    ] {
        if !(x.is_finite() && x > 0.0) {
            return Err(Error::domain(format!("{name} must be positive, got {x}")));
        }
    }
    EnergyScales::new(2.0 / params.total_capacitance(), critical_current / 2.0)
}

/// Charge-basis Hamiltonian at gate offset `n_g`, truncated to
/// `n ∈ {-N, ..., N + 1}`.
#[derive(Debug, Clone, PartialEq)]
pub struct ChargeHamiltonian {
    scales: EnergyScales,
    gate_offset: f64,
    truncation: usize,
    diag: Vec<f64>,
    off: Vec<f64>,
}

impl ChargeHamiltonian {
    pub fn scales(&self) -> EnergyScales {
        self.scales
    }

    pub fn gate_offset(&self) -> f64 {
        self.gate_offset
    }

    pub fn truncation(&self) -> usize {
        self.truncation
    }

    pub fn dim(&self) -> usize {
        self.diag.len()
    }

    /// Smallest charge label, `-N`.
    pub fn n_min(&self) -> i64 {
        -(self.truncation as i64)
    }

    pub fn labels(&self) -> impl Iterator<Item = i64> {
        let lo = self.n_min();
        (0..self.dim() as i64).map(move |i| lo + i)
    }

    pub fn diagonal(&self) -> &[f64] {
        &self.diag
    }

    pub fn off_diagonal(&self) -> &[f64] {
        &self.off
    }

    /// Matrix element `⟨n|H|m⟩` by charge label.
    pub fn element(&self, n: i64, m: i64) -> f64 {
        let (i, j) = (n - self.n_min(), m - self.n_min());
        let dim = self.dim() as i64;
        if i < 0 || j < 0 || i >= dim || j >= dim {
            return 0.0;
        }
        match i - j {
            0 => self.diag[i as usize],
            1 => self.off[j as usize],
            -1 => self.off[i as usize],
            _ => 0.0,
        }
    }

    /// Dense row-major copy.
    pub fn to_dense(&self) -> Vec<Vec<f64>> {
        let labels: Vec<i64> = self.labels().collect();
        labels
            .iter()
            .map(|&n| labels.iter().map(|&m| self.element(n, m)).collect())
            .collect()
    }

    /// Maximum absolute row sum.
    pub fn norm_inf(&self) -> f64 {
        let n = self.dim();
        (0..n)
            .map(|i| {
                let mut s = self.diag[i].abs();
                if i > 0 {
                    s += self.off[i - 1].abs();
                }
                if i + 1 < n {
                    s += self.off[i].abs();
                }
                s
            })
            .fold(0.0, f64::max)
    }

    pub fn trace(&self) -> f64 {
        self.diag.iter().sum()
    }
}

pub fn build_hamiltonian(
    scales: EnergyScales,
    gate_offset: f64,
    truncation: usize,
) -> Result<ChargeHamiltonian> {
    if truncation < 2 {
        return Err(Error::domain(format!(
            "charge truncation N = {truncation} cannot hold the |-1>, |2> leakage states (need N >= 2)"
        )));
    }
    if !gate_offset.is_finite() {
        return Err(Error::domain(format!("gate offset must be finite, got {gate_offset}")));
    }
    let lo = -(truncation as i64);
    let dim = 2 * truncation + 2;
    let diag = (0..dim)
        .map(|i| {
            let d = (lo + i as i64) as f64 - gate_offset;
            scales.charging() * d * d
        })
        .collect();
    let off = vec![-0.5 * scales.josephson(); dim - 1];
    Ok(ChargeHamiltonian {
        scales,
        gate_offset,
        truncation,
        diag,
        off,
    })
}

/// Full spectrum of a [`ChargeHamiltonian`].
#[derive(Debug, Clone, PartialEq)]
pub struct ChargeSpectrum {
    pub eigenvalues: Vec<f64>,
    /// `eigenvectors[k][i]` is the amplitude of eigenstate `k` on label `n_min + i`.
    pub eigenvectors: Vec<Vec<f64>>,
    pub truncation: usize,
    pub gate_offset: f64,
    /// Weight of each eigenvector on the two outermost labels.
    pub edge_weights: Vec<f64>,
    /// `max_k ‖H v_k - λ_k v_k‖∞`.
    pub max_residual: f64,
    /// `‖H‖∞` of the diagonalized matrix.
    pub norm_inf: f64,
}

impl ChargeSpectrum {
    pub fn n_min(&self) -> i64 {
        -(self.truncation as i64)
    }

    pub fn dim(&self) -> usize {
        self.eigenvalues.len()
    }

    /// `⟨n|ψ_k⟩`, zero outside the truncated basis.
    pub fn amplitude(&self, k: usize, n: i64) -> f64 {
        let i = n - self.n_min();
        if i < 0 || i as usize >= self.dim() {
            return 0.0;
        }
        self.eigenvectors[k][i as usize]
    }

    pub fn is_converged(&self, k: usize) -> bool {
        self.edge_weights[k] < EDGE_WEIGHT_LIMIT
    }

    /// Weight of eigenstate `k` inside span{|0⟩, |1⟩}.
    pub fn computational_weight(&self, k: usize) -> f64 {
        self.amplitude(k, 0).powi(2) + self.amplitude(k, 1).powi(2)
    }

    /// Weight of eigenstate `k` outside span{|0⟩, |1⟩}.
    pub fn leak_weight(&self, k: usize) -> f64 {
        self.eigenvectors[k]
            .iter()
            .enumerate()
            .filter(|(i, _)| !matches!(self.n_min() + *i as i64, 0 | 1))
            .map(|(_, a)| a * a)
            .sum()
    }
}

/// Diagonalize; each eigenvector has its largest-magnitude component positive.
pub fn diagonalize(h: &ChargeHamiltonian) -> Result<ChargeSpectrum> {
    let eig = eigh_tridiagonal(&h.diag, &h.off)?;
    let mut eigenvectors = eig.vectors;
    for v in &mut eigenvectors {
        fix_sign_by_largest(v);
    }
    let max_residual = eig
        .values
        .iter()
        .zip(&eigenvectors)
        .map(|(&lam, v)| residual_inf(&h.diag, &h.off, lam, v))
        .fold(0.0, f64::max);
    let edge_weights = eigenvectors
        .iter()
        .map(|v| v[0] * v[0] + v[v.len() - 1] * v[v.len() - 1])
        .collect();
    Ok(ChargeSpectrum {
        eigenvalues: eig.values,
        eigenvectors,
        truncation: h.truncation,
        gate_offset: h.gate_offset,
        edge_weights,
        max_residual,
        norm_inf: h.norm_inf(),
    })
}

/// Exact-eigenstate leakage at the degeneracy point.
#[derive(Debug, Clone, PartialEq)]
pub struct OracleLeakage {
    /// Worst case over initial states: `1 - min_θ Σ_j w_j |⟨β(θ)|ψ_j⟩|^2`.
    pub leakage: f64,
    /// Truncation at which the value converged.
    pub truncation: usize,
    /// Weights of the two lowest eigenstates inside span{|0⟩, |1⟩}.
    pub computational_weights: [f64; 2],
    /// Weights of the two lowest eigenstates outside that span.
    pub leak_weights: [f64; 2],
    /// Amplitudes `(⟨0|ψ_j⟩, ⟨1|ψ_j⟩)` of the two lowest eigenstates.
    pub computational_amplitudes: [[f64; 2]; 2],
    /// `1 - M` on span{|0⟩, |1⟩}; the leakage at angle θ is `βᵀ (1 - M) β`.
    pub lost_weight: [[f64; 2]; 2],
}

impl OracleLeakage {
    fn from_spectrum(spec: &ChargeSpectrum) -> Result<Self> {
        if spec.dim() < 2 || !(spec.is_converged(0) && spec.is_converged(1)) {
            return Err(Error::convergence(format!(
                "lowest charge eigenstates reach the truncation edge at N = {}",
                spec.truncation
            )));
        }
        let restricted = |k: usize| [spec.amplitude(k, 0), spec.amplitude(k, 1)];
        let amps = [restricted(0), restricted(1)];
        let leak_weights = [0, 1].map(|k| spec.leak_weight(k));
        // Retained probability is βᵀ M β with M = Σ_{j<2} w_j u_j u_jᵀ, where
        // u_j is eigenstate j restricted to {|0⟩, |1⟩} and w_j = |u_j|².
        // Completeness gives Σ_k u_k u_kᵀ = 1 over the full spectrum, so
        // 1 - M = Σ_{j<2} (1 - w_j) u_j u_jᵀ + Σ_{k≥2} u_k u_kᵀ. Every term
        // is small and non-negative, which avoids computing 1 - (≈1).
        let mut lost = [[0.0; 2]; 2];
        let mut add = |scale: f64, u: [f64; 2]| {
            for a in 0..2 {
                for b in 0..2 {
                    lost[a][b] += scale * u[a] * u[b];
                }
            }
        };
        for j in 0..2 {
            add(leak_weights[j], amps[j]);
        }
        for k in 2..spec.dim() {
            add(1.0, restricted(k));
        }
        let mean = 0.5 * (lost[0][0] + lost[1][1]);
        let half = (0.25 * (lost[0][0] - lost[1][1]).powi(2) + lost[0][1] * lost[0][1]).sqrt();
        Ok(OracleLeakage {
            leakage: mean + half,
            truncation: spec.truncation,
            computational_weights: [0, 1].map(|k| spec.computational_weight(k)),
            leak_weights,
            computational_amplitudes: amps,
            lost_weight: lost,
        })
    }

    /// `1 - Σ_j w_j |⟨β(θ)|ψ_j⟩|^2` for `β(θ) = cos θ |0⟩ + sin θ |1⟩`.
    pub fn at_angle(&self, theta: f64) -> f64 {
        let (s, c) = theta.sin_cos();
        let d = &self.lost_weight;
        c * c * d[0][0] + 2.0 * c * s * d[0][1] + s * s * d[1][1]
    }

    /// The same quantity from the defining sum, `1 - Σ_j w_j (β·u_j)²`.
    pub fn at_angle_direct(&self, theta: f64) -> f64 {
        let (s, c) = theta.sin_cos();
        let retained: f64 = (0..2)
            .map(|j| {
                let [a0, a1] = self.computational_amplitudes[j];
                self.computational_weights[j] * (c * a0 + s * a1).powi(2)
            })
            .sum();
        1.0 - retained
    }

    pub fn fidelity(&self) -> f64 {
        1.0 - self.leakage
    }
}

/// Oracle leakage at `n_g = 1/2`, starting from truncation `N` and doubling
/// until converged (cap [`MAX_TRUNCATION`]).
pub fn oracle_report(scales: EnergyScales, truncation: usize) -> Result<OracleLeakage> {
    if !(2..=MAX_TRUNCATION).contains(&truncation) {
        return Err(Error::domain(format!(
            "charge truncation N = {truncation} outside [2, {MAX_TRUNCATION}]"
        )));
    }
    let mut n = truncation;
    let mut current = oracle_at(scales, n);
    loop {
        let next_n = n * 2;
        if next_n > MAX_TRUNCATION {
            return Err(Error::convergence(format!(
                "oracle leakage not converged by N = {MAX_TRUNCATION} (ratio {})",
                scales.ratio()
            )));
        }
        let next = oracle_at(scales, next_n);
        if let Err(e @ Error::Domain(_)) = next {
            return Err(e);
        }
        if let (Ok(a), Ok(b)) = (&current, &next) {
            if (a.leakage - b.leakage).abs() < ORACLE_TOLERANCE {
                return current;
            }
        }
        n = next_n;
        current = next;
    }
}

fn oracle_at(scales: EnergyScales, truncation: usize) -> Result<OracleLeakage> {
    let h = build_hamiltonian(scales, DEGENERACY_OFFSET, truncation)?;
    OracleLeakage::from_spectrum(&diagonalize(&h)?)
}

/// Worst-case leakage from the exact eigenstates; see [`oracle_report`].
pub fn oracle_leakage(scales: EnergyScales, truncation: usize) -> Result<f64> {
    oracle_report(scales, truncation).map(|r| r.leakage)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn scales(ratio: f64) -> EnergyScales {
        EnergyScales::from_ratio(ratio).unwrap()
    }

    #[test]
    fn device_energy_mapping() {
        let e = energies_from_device(&DeviceParams {
            junction_capacitance: 60.0,
            gate_capacitance: 40.0,
            critical_current: 0.0008,
        })
        .unwrap();
        assert!((e.charging() - 0.02).abs() < 1e-17);
        assert!((e.josephson() - 0.0004).abs() < 1e-18);
        assert!((e.ratio() - 0.02).abs() < 1e-15);

        let base = DeviceParams {
            junction_capacitance: 1.5,
            gate_capacitance: 0.5,
            critical_current: 0.3,
        };
        let doubled = DeviceParams {
            junction_capacitance: 3.0,
            gate_capacitance: 1.0,
            ..base
        };
        let (a, b) = (
            energies_from_device(&base).unwrap(),
            energies_from_device(&doubled).unwrap(),
        );
        assert_eq!(a.charging(), 1.0);
        assert_eq!(b.charging(), 0.5);
        assert_eq!(a.josephson(), b.josephson());
    }

    #[test]
    fn device_rejects_non_positive_inputs() {
        let bad = DeviceParams {
            junction_capacitance: 1.0,
            gate_capacitance: 1.0,
            critical_current: 0.0,
        };
        assert!(matches!(energies_from_device(&bad), Err(Error::Domain(_))));
        assert!(EnergyScales::new(0.0, 0.1).is_err());
        assert!(EnergyScales::new(1.0, -0.1).is_err());
        assert!(EnergyScales::new(1.0, 0.0).is_ok());
    }

    #[test]
    fn design_window_flag() {
        assert!(scales(0.02).in_design_window());
        assert!(!scales(0.021).in_design_window());
    }

    #[test]
    fn hamiltonian_layout() {
        let h = build_hamiltonian(scales(0.02), 0.5, 10).unwrap();
        assert_eq!(h.dim(), 22);
        assert_eq!(h.labels().next(), Some(-10));
        assert_eq!(h.labels().last(), Some(11));
        assert_eq!(h.element(-1, -1), 2.25);
        assert_eq!(h.element(2, 2), 2.25);
        assert_eq!(h.element(0, 0), 0.25);
        assert_eq!(h.element(0, 1), -0.01);
        assert_eq!(h.element(0, 2), 0.0);
        let dense = h.to_dense();
        #[allow(clippy::needless_range_loop)]
        for i in 0..h.dim() {
            for j in 0..h.dim() {
                assert_eq!(dense[i][j].to_bits(), dense[j][i].to_bits());
                if i.abs_diff(j) > 1 {
                    assert_eq!(dense[i][j], 0.0);
                }
            }
            assert!(dense[i][i] >= 0.0);
        }
        assert!(matches!(
            build_hamiltonian(scales(0.02), 0.5, 1),
            Err(Error::Domain(_))
        ));
    }

    #[test]
    fn uncoupled_box_is_diagonal() {
        let h = build_hamiltonian(scales(0.0), 0.5, 6).unwrap();
        let spec = diagonalize(&h).unwrap();
        let mut sorted = h.diagonal().to_vec();
        sorted.sort_by(f64::total_cmp);
        assert_eq!(spec.eigenvalues, sorted);
        assert_eq!(spec.eigenvalues[0], 0.25);
        assert_eq!(spec.eigenvalues[1], 0.25);
        for v in &spec.eigenvectors {
            assert_eq!(v.iter().filter(|x| **x != 0.0).count(), 1);
            assert!(v.contains(&1.0));
        }
        assert_eq!(oracle_leakage(scales(0.0), 10).unwrap(), 0.0);
    }

    #[test]
    fn lowest_pair_follows_degenerate_perturbation_theory() {
        let r = 0.02;
        let spec = diagonalize(&build_hamiltonian(scales(r), 0.5, 10).unwrap()).unwrap();
        // splitting E_J at first order; the level shifts are O(E_J^2) and equal
        let split = spec.eigenvalues[1] - spec.eigenvalues[0];
        assert!((split - r).abs() < r * r, "{split}");
        // (|0> ± |1>)/√2 with E_J/(4 E_ch)/√2 on |-1> and |2>
        let leak_amp = r / 4.0 / std::f64::consts::SQRT_2;
        for k in 0..2 {
            for n in [-1, 2] {
                let a = spec.amplitude(k, n).abs();
                assert!((a - leak_amp).abs() < leak_amp * 2.0 * r, "k={k} n={n} {a}");
            }
            let a0 = spec.amplitude(k, 0).abs();
            assert!((a0 - std::f64::consts::FRAC_1_SQRT_2).abs() < r * r);
        }
        assert!(spec.amplitude(0, 0) * spec.amplitude(0, 1) > 0.0);
        assert!(spec.amplitude(1, 0) * spec.amplitude(1, 1) < 0.0);
    }

    #[test]
    fn spectrum_residual_trace_and_symmetry() {
        for r in [0.0025, 0.005, 0.01, 0.02, 0.3] {
            let h = build_hamiltonian(scales(r), 0.5, 10).unwrap();
            let spec = diagonalize(&h).unwrap();
            assert!(spec.max_residual <= 1e-10 * spec.norm_inf);
            let sum: f64 = spec.eigenvalues.iter().sum();
            assert!((sum - h.trace()).abs() <= 1e-10 * h.trace());
            assert!(spec.eigenvalues.windows(2).all(|w| w[0] <= w[1]));
            for k in 0..2 {
                assert!(spec.is_converged(k));
                let d = spec.amplitude(k, -1).abs() - spec.amplitude(k, 2).abs();
                assert!(d.abs() < 1e-10);
            }
        }
    }

    #[test]
    fn low_levels_stable_under_truncation() {
        for r in [0.005, 0.02] {
            let a = diagonalize(&build_hamiltonian(scales(r), 0.5, 6).unwrap()).unwrap();
            let b = diagonalize(&build_hamiltonian(scales(r), 0.5, 12).unwrap()).unwrap();
            for k in 0..4 {
                assert!((a.eigenvalues[k] - b.eigenvalues[k]).abs() < 1e-12);
            }
        }
    }

    #[test]
    fn oracle_worst_case_is_the_minimum_over_angles() {
        let rep = oracle_report(scales(0.02), 10).unwrap();
        let sampled = (0..=2000)
            .map(|i| rep.at_angle(std::f64::consts::PI * i as f64 / 2000.0))
            .fold(f64::MIN, f64::max);
        assert!(rep.leakage >= sampled - 1e-15);
        assert!(rep.leakage - sampled < 1e-10);
        // the weaker-retained state is the excited one (smaller gap to |-1>, |2>)
        assert!(rep.leak_weights[1] > rep.leak_weights[0]);
        assert!((rep.leakage - (1.0 - rep.computational_weights[1].powi(2))).abs() < 1e-14);
        for theta in [0.0, 0.3, 1.0, 2.5] {
            assert!((rep.at_angle(theta) - rep.at_angle_direct(theta)).abs() < 1e-14);
        }
    }

    #[test]
    fn oracle_small_ratio_scaling() {
        // leading order: each eigenstate leaks (E_J / 4E_ch)^2, so L ≈ ratio^2 / 8
        for r in [0.0025, 0.005, 0.01, 0.02] {
            let l = oracle_leakage(scales(r), 10).unwrap();
            assert!((l / (r * r / 8.0) - 1.0).abs() < 3.0 * r, "{r}: {l}");
        }
    }
}
