//! Dipole strength functions: discrete excitation lines dressed with
//! unit-area Lorentzians.

use crate::assembler::CoupledState;
use crate::error::{Error, Result};
use crate::linalg::compensated_sum;
use crate::matter::MatterSpectrum;

/// Discrete dipole spectrum plus its broadened curve.
///
/// Each line `(omega_n, s_n)` contributes `s_n L(omega - omega_n)` with the
/// unit-area Lorentzian `L(x) = (gamma / 2 pi) / (x^2 + gamma^2 / 4)` of full
/// width `gamma` at half maximum.
#[derive(Debug, Clone, PartialEq)]
pub struct SpectrumData {
    excitations: Vec<f64>,
    strengths: Vec<f64>,
    gamma: f64,
    omega_grid: Vec<f64>,
    curve: Vec<f64>,
}

impl SpectrumData {
    pub fn excitations(&self) -> &[f64] {
        &self.excitations
    }

    pub fn strengths(&self) -> &[f64] {
        &self.strengths
    }

    pub fn gamma(&self) -> f64 {
        self.gamma
    }

    pub fn omega_grid(&self) -> &[f64] {
        &self.omega_grid
    }

    pub fn curve(&self) -> &[f64] {
        &self.curve
    }

    pub fn total_strength(&self) -> f64 {
        compensated_sum(self.strengths.iter().copied())
    }

    /// Analytic integral of the represented curve over the grid span.
    pub fn partial_area(&self) -> f64 {
        let lo = self.omega_grid[0];
        let hi = self.omega_grid[self.omega_grid.len() - 1];
        compensated_sum(
            self.excitations
                .iter()
                .zip(&self.strengths)
                .map(|(&w, &s)| {
                    s * ((2.0 * (hi - w) / self.gamma).atan()
                        - (2.0 * (lo - w) / self.gamma).atan())
                        / std::f64::consts::PI
                }),
        )
    }
}

fn lorentzian(x: f64, gamma: f64) -> f64 {
    gamma / (2.0 * std::f64::consts::PI) / (x * x + 0.25 * gamma * gamma)
}

/// Uniform grid of 2000 points on `[0, omega_max]`.
pub fn default_omega_grid(omega_max: f64) -> Vec<f64> {
    (0..2000)
        .map(|k| omega_max * k as f64 / 1999.0)
        .collect()
}

/// Assembles a spectrum from explicit lines. `omega_grid` defaults to
/// [`default_omega_grid`] spanning 1.2 times the highest excitation.
pub fn spectrum_from_lines(
    excitations: Vec<f64>,
    strengths: Vec<f64>,
    gamma: f64,
    omega_grid: Option<Vec<f64>>,
) -> Result<SpectrumData> {
    if excitations.is_empty() || excitations.len() != strengths.len() {
        return Err(Error::DimensionMismatch(format!(
            "{} excitation energies against {} strengths",
            excitations.len(),
            strengths.len()
        )));
    }
    if excitations.iter().any(|w| !(*w > 0.0) || !w.is_finite()) {
        return Err(Error::InvalidInput(
            "excitation energies must be positive".into(),
        ));
    }
    if strengths.iter().any(|s| !(*s >= 0.0) || !s.is_finite()) {
        return Err(Error::InvalidInput(
            "line strengths must be non-negative".into(),
        ));
    }
    if !(gamma > 0.0) || !gamma.is_finite() {
        return Err(Error::InvalidInput(format!(
            "Lorentzian width must be positive, got {gamma}"
        )));
    }
    let omega_grid = match omega_grid {
        Some(g) => {
            if g.len() < 2 || g.windows(2).any(|w| w[0] >= w[1]) {
                return Err(Error::InvalidInput(
                    "frequency grid must be strictly ascending with at least two points".into(),
                ));
            }
            crate::linalg::check_finite(&g, "frequency grid")?;
            g
        }
        None => {
            let top = excitations.iter().cloned().fold(f64::MIN, f64::max);
            default_omega_grid(1.2 * top)
        }
    };
    let curve = omega_grid
        .iter()
        .map(|&w| {
            compensated_sum(
                excitations
                    .iter()
                    .zip(&strengths)
                    .map(|(&wn, &s)| s * lorentzian(w - wn, gamma)),
            )
        })
        .collect();
    Ok(SpectrumData {
        excitations,
        strengths,
        gamma,
        omega_grid,
        curve,
    })
}

/// Dipole strength function of a coupled system:
/// `S(omega) = sum_n 2 omega_n |<0| mu |n>|^2 L(omega - omega_n)` over the
/// supplied excited states.
pub fn dipole_strength(
    ground: &CoupledState,
    excited: &[CoupledState],
    spectrum: &MatterSpectrum,
    gamma: f64,
    omega_grid: Option<Vec<f64>>,
) -> Result<SpectrumData> {
    if excited.is_empty() {
        return Err(Error::InvalidInput(
            "need at least one excited state".into(),
        ));
    }
    let n_s = ground.n_matter();
    if spectrum.n_states() != n_s {
        return Err(Error::DimensionMismatch(format!(
            "spectrum has {} states, ground state stores {n_s}",
            spectrum.n_states()
        )));
    }
    let fock_dim = ground.fock().dim();
    let mut excitations = Vec::with_capacity(excited.len());
    let mut strengths = Vec::with_capacity(excited.len());
    for state in excited {
        if state.n_matter() != n_s || state.fock().dim() != fock_dim {
            return Err(Error::DimensionMismatch(
                "excited state was solved in a different basis than the ground state".into(),
            ));
        }
        let omega_n = state.energy() - ground.energy();
        if !(omega_n > 0.0) {
            return Err(Error::InvalidInput(format!(
                "state at energy {} does not lie above the ground state {}",
                state.energy(),
                ground.energy()
            )));
        }
        let c0 = ground.amplitudes();
        let cn = state.amplitudes();
        let m = compensated_sum((0..fock_dim).flat_map(|f| {
            (0..n_s).map(move |i| {
                c0[f * n_s + i]
                    * (0..n_s)
                        .map(|j| spectrum.dipole(i, j) * cn[f * n_s + j])
                        .sum::<f64>()
            })
        }));
        excitations.push(omega_n);
        strengths.push(2.0 * omega_n * m * m);
    }
    spectrum_from_lines(excitations, strengths, gamma, omega_grid)
}

/// Matter-only strength function from a bare spectrum's lowest state.
pub fn matter_dipole_strength(
    spectrum: &MatterSpectrum,
    gamma: f64,
    omega_grid: Option<Vec<f64>>,
) -> Result<SpectrumData> {
    if spectrum.n_states() < 2 {
        return Err(Error::InvalidInput(
            "need at least two matter states for transitions".into(),
        ));
    }
    let (mut excitations, mut strengths) = (Vec::new(), Vec::new());
    for n in 1..spectrum.n_states() {
        let omega_n = spectrum.energy(n) - spectrum.energy(0);
        let mu = spectrum.dipole(0, n);
        excitations.push(omega_n);
        strengths.push(2.0 * omega_n * mu * mu);
    }
    spectrum_from_lines(excitations, strengths, gamma, omega_grid)
}

/// Thomas-Reiche-Kuhn monitor `sum_n 2 (E_n - E_0) mu_0n^2`; approaches
/// `N_e / m` as the truncated basis exhausts the sum rule.
pub fn trk_sum(spectrum: &MatterSpectrum) -> f64 {
    compensated_sum((1..spectrum.n_states()).map(|n| {
        let omega_n = spectrum.energy(n) - spectrum.energy(0);
        let mu = spectrum.dipole(0, n);
        2.0 * omega_n * mu * mu
    }))
}
