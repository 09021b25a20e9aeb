//! Closed-form free-particle dispersions in both gauges, plus the divergent
//! perturbative coupling they are contrasted with.

use super::{NormalModeSet, Species};
use crate::error::{Error, Result};
use crate::linalg::compensated_sum;

/// One point of the free-particle polaritonic dispersion.
#[derive(Debug, Clone, PartialEq)]
pub struct DispersionPoint {
    pub k: f64,
    pub occupations: Vec<u32>,
    pub energy: f64,
}

/// Velocity-gauge dispersion `E = (k^2 / 2m)(1 - g) + sum Omega (n + 1/2)`.
///
/// The normal modes must have been built from this species' coupling vector;
/// the zero-point sum is kept (subtract
/// [`NormalModeSet::zero_point_energy`] for normal-ordered values).
pub fn dispersion_analytic(
    k: f64,
    nm: &NormalModeSet,
    species: &Species,
    occupations: &[u32],
) -> Result<DispersionPoint> {
    if occupations.len() != nm.n_modes() {
        return Err(Error::DimensionMismatch(format!(
            "{} occupations for {} modes",
            occupations.len(),
            nm.n_modes()
        )));
    }
    if !k.is_finite() {
        return Err(Error::NonFinite {
            context: "dispersion wave number",
        });
    }
    let kinetic = 0.5 * k * k / species.mass * (1.0 - nm.g());
    let photons = compensated_sum(
        nm.dressed_frequencies()
            .iter()
            .zip(occupations)
            .map(|(w, n)| w * (*n as f64 + 0.5)),
    );
    Ok(DispersionPoint {
        k,
        occupations: occupations.to_vec(),
        energy: kinetic + photons,
    })
}

/// Length-gauge single-mode dispersion
/// `E = (k^2 / 2m)(1 - omega_d^2 / omega_tilde^2) + omega_tilde (n + 1/2)`
/// with `omega_d^2 = lambda^2 / m` and `omega_tilde^2 = omega^2 + omega_d^2`.
///
/// Algebraically identical to [`dispersion_analytic`] restricted to one mode;
/// the pair of implementations is kept as a cross-gauge consistency check.
pub fn dispersion_length_gauge_single_mode(k: f64, omega: f64, lambda: f64, m: f64, n: u32) -> f64 {
    debug_assert!(omega > 0.0 && m > 0.0 && lambda >= 0.0);
    let omega_d_sq = lambda * lambda / m;
    let dressed_sq = omega * omega + omega_d_sq;
    let dressed = dressed_sq.sqrt();
    0.5 * k * k / m * (1.0 - omega_d_sq / dressed_sq) + dressed * (n as f64 + 0.5)
}

/// Second-order perturbative coupling `g_pert = prefactor (1/L_lower -
/// 1/L_upper)` between infrared and ultraviolet cutoffs.
///
/// `L_upper = f64::INFINITY` gives the UV-converged limit. A non-positive
/// infrared cutoff is rejected: the integral diverges there, which is the
/// point of contrast with the bounded non-perturbative coupling.
pub fn perturbative_g(lambda_lower: f64, lambda_upper: f64, prefactor: f64) -> Result<f64> {
    if !(lambda_lower > 0.0) {
        return Err(Error::InvalidInput(format!(
            "perturbative coupling is infrared divergent: lower cutoff {lambda_lower} \
             must be strictly positive"
        )));
    }
    if !(lambda_upper >= lambda_lower) {
        return Err(Error::InvalidInput(format!(
            "upper cutoff {lambda_upper} must lie at or above the lower cutoff {lambda_lower}"
        )));
    }
    if !prefactor.is_finite() {
        return Err(Error::NonFinite {
            context: "perturbative coupling prefactor",
        });
    }
    Ok(prefactor * (1.0 / lambda_lower - 1.0 / lambda_upper))
}
