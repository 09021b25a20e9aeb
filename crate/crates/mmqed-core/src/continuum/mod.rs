//! Discretized photon continuum and the closed-form results built on it:
//! normal-mode analysis of the diamagnetic coupling, the multimode coupling
//! constant, mass renormalization, free-particle dispersions in both gauges,
//! and the perturbative comparison.
//!
//! Everything in this crate works in adapted atomic units: `e = 4 pi eps0 =
//! hbar = 1` and the bare electron mass is the mass unit. No conversion layer
//! is provided; callers feed frequencies, couplings, and masses already
//! expressed in these units.

mod dispersion;
mod modes;

pub use dispersion::{
    dispersion_analytic, dispersion_length_gauge_single_mode, perturbative_g, DispersionPoint,
};
pub use modes::{
    coupling_g_routes, multimode_coupling_g, normal_modes, photonic_mass, renormalized_mass,
    running_bare_mass, CouplingRoutes, NormalModeSet,
};

use crate::error::{Error, Result};

/// Sampled photon modes: strictly ascending positive frequencies plus one
/// coupling strength per mode.
///
/// Freshly sampled grids start out uncoupled (all couplings zero); attach
/// couplings with [`ModeContinuum::with_uniform_coupling`] or
/// [`ModeContinuum::with_couplings`].
#[derive(Debug, Clone)]
pub struct ModeContinuum {
    frequencies: Vec<f64>,
    couplings: Vec<f64>,
}

impl ModeContinuum {
    /// Equidistant grid over `[omega_min, omega_max]`, endpoints included.
    ///
    /// `n_modes == 1` collapses to the single frequency `omega_min`.
    pub fn sample_equidistant(omega_min: f64, omega_max: f64, n_modes: usize) -> Result<Self> {
        if n_modes == 0 {
            return Err(Error::InvalidInput("mode count must be at least 1".into()));
        }
        if !(omega_min > 0.0) {
            return Err(Error::InvalidInput(format!(
                "lower frequency cutoff must be positive, got {omega_min}; \
                 the photon continuum is infrared divergent without one"
            )));
        }
        if !(omega_max >= omega_min) || !omega_max.is_finite() {
            return Err(Error::InvalidInput(format!(
                "upper frequency cutoff {omega_max} must lie at or above the lower cutoff {omega_min}"
            )));
        }
        let frequencies = if n_modes == 1 {
            vec![omega_min]
        } else {
            (0..n_modes)
                .map(|i| {
                    let t = i as f64 / (n_modes - 1) as f64;
                    omega_min * (1.0 - t) + omega_max * t
                })
                .collect()
        };
        Self::from_parts(frequencies, vec![0.0; n_modes])
    }

    /// Grid with a pinned spacing: `omega_alpha = omega_min + alpha * spacing`.
    ///
    /// Sensitivity companion to [`ModeContinuum::sample_equidistant`]; the
    /// upper edge lands wherever the spacing puts it.
    pub fn sample_fixed_spacing(omega_min: f64, spacing: f64, n_modes: usize) -> Result<Self> {
        if n_modes == 0 {
            return Err(Error::InvalidInput("mode count must be at least 1".into()));
        }
        if !(omega_min > 0.0) {
            return Err(Error::InvalidInput(format!(
                "lower frequency cutoff must be positive, got {omega_min}"
            )));
        }
        if !(spacing > 0.0) || !spacing.is_finite() {
            return Err(Error::InvalidInput(format!(
                "mode spacing must be positive and finite, got {spacing}"
            )));
        }
        let frequencies = (0..n_modes)
            .map(|i| omega_min + i as f64 * spacing)
            .collect();
        Self::from_parts(frequencies, vec![0.0; n_modes])
    }

    fn from_parts(frequencies: Vec<f64>, couplings: Vec<f64>) -> Result<Self> {
        crate::linalg::check_finite(&frequencies, "continuum frequencies")?;
        if frequencies.windows(2).any(|w| w[0] >= w[1]) {
            return Err(Error::InvalidInput(
                "mode frequencies must be strictly ascending; the grid is too dense \
                 to resolve at this precision"
                    .into(),
            ));
        }
        Ok(Self {
            frequencies,
            couplings,
        })
    }

    /// Same grid with every coupling set to `lambda`.
    pub fn with_uniform_coupling(self, lambda: f64) -> Result<Self> {
        let n = self.frequencies.len();
        self.with_couplings(vec![lambda; n])
    }

    /// Same grid with per-mode couplings.
    pub fn with_couplings(self, couplings: Vec<f64>) -> Result<Self> {
        if couplings.len() != self.frequencies.len() {
            return Err(Error::DimensionMismatch(format!(
                "{} couplings for {} modes",
                couplings.len(),
                self.frequencies.len()
            )));
        }
        if couplings.iter().any(|l| !l.is_finite() || *l < 0.0) {
            return Err(Error::InvalidInput(
                "mode couplings must be finite and non-negative".into(),
            ));
        }
        Ok(Self {
            couplings,
            ..self
        })
    }

    /// The lowest `n_modes` of this grid, couplings included.
    ///
    /// Mode-number sweeps truncate one master grid this way instead of
    /// resampling, so adding modes never moves the ones already present.
    pub fn truncated(&self, n_modes: usize) -> Result<Self> {
        if n_modes == 0 || n_modes > self.frequencies.len() {
            return Err(Error::InvalidInput(format!(
                "cannot keep {} of {} modes",
                n_modes,
                self.frequencies.len()
            )));
        }
        Ok(Self {
            frequencies: self.frequencies[..n_modes].to_vec(),
            couplings: self.couplings[..n_modes].to_vec(),
        })
    }

    pub fn n_modes(&self) -> usize {
        self.frequencies.len()
    }

    pub fn frequencies(&self) -> &[f64] {
        &self.frequencies
    }

    pub fn couplings(&self) -> &[f64] {
        &self.couplings
    }

    /// Mean grid spacing, `None` for a single mode.
    pub fn spacing(&self) -> Option<f64> {
        let n = self.frequencies.len();
        if n < 2 {
            return None;
        }
        Some((self.frequencies[n - 1] - self.frequencies[0]) / (n - 1) as f64)
    }
}

/// A charged particle species: bare mass, charge magnitude in units of `e`,
/// and how many identical copies couple to the field.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Species {
    pub mass: f64,
    pub charge: f64,
    pub count: u32,
}

impl Species {
    pub fn new(mass: f64, charge: f64, count: u32) -> Result<Self> {
        if !(mass > 0.0) || !mass.is_finite() {
            return Err(Error::InvalidInput(format!(
                "species mass must be positive, got {mass}"
            )));
        }
        if !(charge > 0.0) || !charge.is_finite() {
            return Err(Error::InvalidInput(format!(
                "species charge magnitude must be positive, got {charge}"
            )));
        }
        if count == 0 {
            return Err(Error::InvalidInput("species count must be at least 1".into()));
        }
        Ok(Self {
            mass,
            charge,
            count,
        })
    }

    /// Single electron in adapted units.
    pub fn electron() -> Self {
        Self {
            mass: 1.0,
            charge: 1.0,
            count: 1,
        }
    }

    /// Single proton, mass 1836 electron masses.
    pub fn proton() -> Self {
        Self {
            mass: 1836.0,
            charge: 1.0,
            count: 1,
        }
    }
}

/// Per-mode coupling vector `d_alpha = Z lambda_alpha sqrt(N / m)`.
///
/// `d_alpha` is also the per-mode diamagnetic frequency: for a uniform
/// coupling it reproduces `omega_d^2 = N e^2 lambda^2 / m`.
pub fn coupling_vector(modes: &ModeContinuum, species: &Species) -> Vec<f64> {
    let scale = species.charge * (species.count as f64 / species.mass).sqrt();
    modes.couplings().iter().map(|l| scale * l).collect()
}
