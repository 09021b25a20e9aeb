//! Non-perturbative free-particle dispersion by direct diagonalization.
//!
//! At conserved momentum `k` the velocity-gauge free-particle problem
//! decouples in the normal-mode frame into independent displaced oscillators:
//! mode `a` sees the linear drive `c_a = (k / sqrt(m)) (O^T d)_a` on top of
//! its dressed frequency. Each oscillator is diagonalized in a truncated
//! number basis rather than through the closed-form displacement energy, so
//! the result is an independent check on the analytic dispersion.

use crate::continuum::{coupling_vector, normal_modes, ModeContinuum, Species};
use crate::error::{Error, Result};
use crate::linalg::{compensated_sum, dense_sym_eig, dot, SymmetricDense};

/// Lowest energy at momentum `k` of a particle of mass `mass` coupled with
/// uniform strength `lambda` to every mode of the grid. Each normal-mode
/// oscillator is truncated at `n_max` quanta; the calculation runs again at
/// twice that and warns (keeping the doubled result) if the two disagree by
/// more than 1e-8.
pub fn numeric_free_dispersion(
    k: f64,
    modes: &ModeContinuum,
    lambda: f64,
    mass: f64,
    n_max: usize,
) -> Result<f64> {
    if !k.is_finite() {
        return Err(Error::NonFinite {
            context: "dispersion wave number",
        });
    }
    if !(mass > 0.0) || !mass.is_finite() {
        return Err(Error::InvalidInput(format!(
            "particle mass must be positive, got {mass}"
        )));
    }
    if n_max == 0 {
        return Err(Error::InvalidInput(
            "oscillator truncation must keep at least one quantum".into(),
        ));
    }
    let coupled = modes.clone().with_uniform_coupling(lambda)?;
    let species = Species::new(mass, 1.0, 1)?;
    let d = coupling_vector(&coupled, &species);
    let nm = normal_modes(&coupled, &d)?;

    let drives: Vec<f64> = nm
        .rotation_columns()
        .iter()
        .map(|col| k / mass.sqrt() * dot(col, &d))
        .collect();

    let energy_at = |quanta: usize| -> Result<f64> {
        let photons = compensated_sum(
            nm.dressed_frequencies()
                .iter()
                .zip(&drives)
                .map(|(&big_omega, &c)| displaced_ground(big_omega, c, quanta))
                .collect::<Result<Vec<f64>>>()?
                .into_iter(),
        );
        Ok(0.5 * k * k / mass + photons)
    };

    let coarse = energy_at(n_max)?;
    let fine = energy_at(2 * n_max)?;
    if (fine - coarse).abs() > 1e-8 {
        log::warn!(
            "free-particle dispersion not converged at {n_max} quanta per mode: \
             doubling moved the energy by {:.3e}",
            fine - coarse
        );
    }
    Ok(fine)
}

/// Ground energy of `Omega (n + 1/2) + c q` in an `(n_max + 1)`-dimensional
/// number basis, where `q = (b + b^dag) / sqrt(2 Omega)`.
fn displaced_ground(big_omega: f64, c: f64, n_max: usize) -> Result<f64> {
    let dim = n_max + 1;
    let h = SymmetricDense::from_fn(dim, |i, j| {
        if i == j {
            big_omega * (i as f64 + 0.5)
        } else if j == i + 1 {
            c * ((i + 1) as f64 / (2.0 * big_omega)).sqrt()
        } else {
            0.0
        }
    });
    Ok(dense_sym_eig(&h)?.values[0])
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::continuum::dispersion_analytic;

    fn grid() -> ModeContinuum {
        ModeContinuum::sample_equidistant(0.01, 0.5, 24).unwrap()
    }

    #[test]
    fn matches_the_analytic_dispersion() {
        let lambda = 0.0019;
        let coupled = grid().with_uniform_coupling(lambda).unwrap();
        let species = Species::electron();
        let d = coupling_vector(&coupled, &species);
        let nm = normal_modes(&coupled, &d).unwrap();
        for k in [0.0, 0.4, 1.2] {
            let numeric = numeric_free_dispersion(k, &grid(), lambda, 1.0, 24).unwrap();
            let analytic = dispersion_analytic(k, &nm, &species, &vec![0; 24])
                .unwrap()
                .energy;
            assert!(
                (numeric - analytic).abs() < 1e-10,
                "k={k}: {numeric} vs {analytic}"
            );
        }
    }

    #[test]
    fn decoupled_limit_is_purely_kinetic_plus_zero_point() {
        let zero_point = 0.5 * compensated_sum(grid().frequencies().iter().copied());
        let e = numeric_free_dispersion(0.7, &grid(), 0.0, 1.0, 4).unwrap();
        assert!((e - (0.5 * 0.49 + zero_point)).abs() < 1e-12);
    }

    #[test]
    fn curvature_recovers_one_minus_g() {
        let lambda = 0.01;
        let coupled = grid().with_uniform_coupling(lambda).unwrap();
        let d = coupling_vector(&coupled, &Species::electron());
        let g = crate::continuum::multimode_coupling_g(&coupled, &d).unwrap();
        let base = numeric_free_dispersion(0.0, &grid(), lambda, 1.0, 6).unwrap();
        let dk = 1e-3;
        let shifted = numeric_free_dispersion(dk, &grid(), lambda, 1.0, 6).unwrap();
        let curvature = 2.0 * (shifted - base) / (dk * dk);
        assert!(
            (curvature - (1.0 - g)).abs() < 1e-4,
            "curvature {curvature} vs 1 - g = {}",
            1.0 - g
        );
    }

    #[test]
    fn heavier_particles_disperse_more_slowly() {
        let e_light = numeric_free_dispersion(1.0, &grid(), 0.001, 1.0, 4).unwrap();
        let e_heavy = numeric_free_dispersion(1.0, &grid(), 0.001, 1836.0, 4).unwrap();
        let zp = 0.5 * compensated_sum(grid().frequencies().iter().copied());
        assert!(e_heavy - zp < e_light - zp);
    }

    #[test]
    fn invalid_inputs_are_rejected() {
        assert!(numeric_free_dispersion(f64::NAN, &grid(), 0.001, 1.0, 4).is_err());
        assert!(numeric_free_dispersion(0.1, &grid(), 0.001, 0.0, 4).is_err());
        assert!(numeric_free_dispersion(0.1, &grid(), 0.001, 1.0, 0).is_err());
    }
}
