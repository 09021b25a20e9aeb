//! Reduction of coupled eigenstates to measurable quantities: real-space
//! densities, dipole strength functions, and Lorentzian peak fits.

mod fit;
mod spectra;

pub use fit::{lorentzian_fit, LorentzianFit};
pub use spectra::{
    default_omega_grid, dipole_strength, matter_dipole_strength, spectrum_from_lines, trk_sum,
    SpectrumData,
};

use crate::assembler::CoupledState;
use crate::error::{Error, Result};
use crate::linalg::compensated_sum;
use crate::matter::{Grid1D, MatterBasis};

/// Real-space particle density on a 1D grid. For the two-electron molecule
/// this is the reduced one-body density, normalized to 2.
#[derive(Debug, Clone, PartialEq)]
pub struct DensityProfile {
    grid: Grid1D,
    values: Vec<f64>,
    electrons: f64,
}

impl DensityProfile {
    pub fn grid(&self) -> &Grid1D {
        &self.grid
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    /// Particle number the profile integrates to.
    pub fn electrons(&self) -> f64 {
        self.electrons
    }

    /// Quadrature norm `dx * sum n(x)`.
    pub fn norm(&self) -> f64 {
        self.grid.dx() * compensated_sum(self.values.iter().copied())
    }

    fn validate(self) -> Result<Self> {
        if self.values.iter().any(|&v| v < -1e-12 || !v.is_finite()) {
            return Err(Error::Backend(
                "density profile left the non-negative range".into(),
            ));
        }
        let norm = self.norm();
        if (norm - self.electrons).abs() > 1e-8 {
            return Err(Error::Backend(format!(
                "density norm {norm} drifted from the particle number {}",
                self.electrons
            )));
        }
        Ok(self)
    }
}

/// Density of a coupled eigenstate: the matter density matrix
/// `rho_ij = sum_F c_iF c_jF` traced against the grid-resolved basis states.
pub fn density(state: &CoupledState, mb: &MatterBasis) -> Result<DensityProfile> {
    let n_s = mb.n_states();
    if state.n_matter() != n_s {
        return Err(Error::DimensionMismatch(format!(
            "state stores {} matter states, basis has {n_s}",
            state.n_matter()
        )));
    }
    let c = state.amplitudes();
    let mut rho = vec![0.0; n_s * n_s];
    for block in c.chunks_exact(n_s) {
        for i in 0..n_s {
            for j in 0..n_s {
                rho[i * n_s + j] += block[i] * block[j];
            }
        }
    }
    profile_from_density_matrix(mb, &rho)
}

/// Density of an arbitrary superposition over the matter basis, given by its
/// coefficient vector. Covers states produced by matter-space Hamiltonians
/// such as the self-energy-only approximation.
pub fn matter_state_density(mb: &MatterBasis, coefficients: &[f64]) -> Result<DensityProfile> {
    let n_s = mb.n_states();
    if coefficients.len() != n_s {
        return Err(Error::DimensionMismatch(format!(
            "{} coefficients for a {n_s}-state basis",
            coefficients.len()
        )));
    }
    crate::linalg::check_finite(coefficients, "matter state coefficients")?;
    let mut rho = vec![0.0; n_s * n_s];
    for i in 0..n_s {
        for j in 0..n_s {
            rho[i * n_s + j] = coefficients[i] * coefficients[j];
        }
    }
    profile_from_density_matrix(mb, &rho)
}

/// Density of one bare matter eigenstate.
pub fn matter_density(mb: &MatterBasis, state_index: usize) -> Result<DensityProfile> {
    let n_s = mb.n_states();
    if state_index >= n_s {
        return Err(Error::InvalidInput(format!(
            "state {state_index} of a {n_s}-state basis"
        )));
    }
    let mut rho = vec![0.0; n_s * n_s];
    rho[state_index * n_s + state_index] = 1.0;
    profile_from_density_matrix(mb, &rho)
}

fn profile_from_density_matrix(mb: &MatterBasis, rho: &[f64]) -> Result<DensityProfile> {
    let n_s = mb.n_states();
    let grid = *mb.grid();
    let nx = grid.n_x();
    let order = mb.states()[0].len();

    let (values, electrons) = if order == nx {
        let values = (0..nx)
            .map(|x| {
                compensated_sum((0..n_s).flat_map(|i| {
                    (0..n_s).map(move |j| rho[i * n_s + j] * mb.states()[i][x] * mb.states()[j][x])
                }))
            })
            .collect();
        (values, 1.0)
    } else if order == nx * nx {
        // Reduced one-body density: integrate out the second coordinate and
        // count both electrons.
        let mut pair_overlaps = vec![Vec::new(); n_s * n_s];
        for i in 0..n_s {
            for j in i..n_s {
                let (si, sj) = (&mb.states()[i], &mb.states()[j]);
                let row: Vec<f64> = (0..nx)
                    .map(|x1| {
                        compensated_sum((0..nx).map(|x2| si[x1 * nx + x2] * sj[x1 * nx + x2]))
                    })
                    .collect();
                if i != j {
                    pair_overlaps[j * n_s + i] = row.clone();
                }
                pair_overlaps[i * n_s + j] = row;
            }
        }
        let dx = grid.dx();
        let overlaps = &pair_overlaps;
        let values = (0..nx)
            .map(|x1| {
                2.0 * dx
                    * compensated_sum((0..n_s).flat_map(|i| {
                        (0..n_s).map(move |j| rho[i * n_s + j] * overlaps[i * n_s + j][x1])
                    }))
            })
            .collect();
        (values, 2.0)
    } else {
        return Err(Error::DimensionMismatch(format!(
            "basis states of length {order} fit neither the grid ({nx}) nor its square"
        )));
    };

    DensityProfile {
        grid,
        values,
        electrons,
    }
    .validate()
}

fn check_same_grid(a: &DensityProfile, b: &DensityProfile) -> Result<()> {
    let (ga, gb) = (a.grid(), b.grid());
    if ga.n_x() != gb.n_x() || ga.dx() != gb.dx() || ga.x_min() != gb.x_min() {
        return Err(Error::DimensionMismatch(
            "density profiles live on different grids".into(),
        ));
    }
    Ok(())
}

/// Integrated absolute difference `dx * sum |n_a - n_b|`.
pub fn integrated_density_diff(a: &DensityProfile, b: &DensityProfile) -> Result<f64> {
    check_same_grid(a, b)?;
    Ok(a.grid.dx()
        * compensated_sum(
            a.values
                .iter()
                .zip(&b.values)
                .map(|(x, y)| (x - y).abs()),
        ))
}

/// Pointwise signed difference `n_a(x) - n_b(x)`.
pub fn signed_density_difference(a: &DensityProfile, b: &DensityProfile) -> Result<Vec<f64>> {
    check_same_grid(a, b)?;
    Ok(a.values.iter().zip(&b.values).map(|(x, y)| x - y).collect())
}
