//! Mode-resolved photon observables of coupled eigenstates.
//!
//! The length-gauge basis diagonalizes `b^dag b` per mode, so the length
//! reading is a weighted count over photon signatures. The velocity-gauge
//! number operator maps back to the length representation as
//!
//! `n_a = |(b_a - kappa_a mu) psi|^2
//!      = <b^dag b>_a - kappa_a <mu (b_a + b_a^dag)> + kappa_a^2 <mu^2>`
//!
//! with `kappa_a = lambda_a / sqrt(2 omega_a)`. The map is not trusted on
//! faith: a one-time calibration matches the formula against a direct
//! velocity-gauge diagonalization on a grid-times-Fock space, and the
//! velocity reading refuses to run if that match fails.

use std::sync::OnceLock;

use super::{
    assemble_length_gauge, build_fock_basis, ground_state, projected_dipole_square,
    CoupledState, CouplingConfig, FockState,
};
use crate::continuum::ModeContinuum;
use crate::error::{Error, Result};
use crate::linalg::{compensated_sum, krylov_lowest, SparseBuilder};
use crate::matter::{eigensolve_matter, hamiltonian_1d, Boundary, Grid1D};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum OccupationGauge {
    /// Expectation of the bare number operator of the length-gauge modes.
    Length,
    /// Number operator of the velocity-gauge modes, the reading that survives
    /// the transformation out of the dipole frame.
    Velocity,
}

/// Per-mode photon occupation of a coupled eigenstate.
pub fn photon_occupation(
    state: &CoupledState,
    spectrum: &crate::matter::MatterSpectrum,
    modes: &ModeContinuum,
    gauge: OccupationGauge,
) -> Result<Vec<f64>> {
    let fock = state.fock();
    if fock.n_modes() != modes.n_modes() {
        return Err(Error::DimensionMismatch(format!(
            "state spans {} modes, continuum has {}",
            fock.n_modes(),
            modes.n_modes()
        )));
    }
    if spectrum.n_states() != state.n_matter() {
        return Err(Error::DimensionMismatch(format!(
            "spectrum has {} states, state stores {}",
            spectrum.n_states(),
            state.n_matter()
        )));
    }

    let n_s = state.n_matter();
    let mut occ = vec![0.0; modes.n_modes()];
    for f in 0..fock.dim() {
        let signature = fock.state_at(f);
        if signature == FockState::Vacuum {
            continue;
        }
        let block = &state.amplitudes()[f * n_s..(f + 1) * n_s];
        let weight = compensated_sum(block.iter().map(|c| c * c));
        match signature {
            FockState::Vacuum => unreachable!(),
            FockState::One(a) => occ[a as usize] += weight,
            FockState::Two(a, b) => {
                occ[a as usize] += weight;
                occ[b as usize] += weight;
            }
        }
    }

    if gauge == OccupationGauge::Velocity {
        let scale = calibrate_velocity_occupation()?;
        let musq = projected_dipole_square(spectrum);
        let musq_exp = state.matter_expectation(&musq)?;
        let cross = dipole_ladder_correlations(state, spectrum);
        for (a, o) in occ.iter_mut().enumerate() {
            let kappa = scale * modes.couplings()[a] / (2.0 * modes.frequencies()[a]).sqrt();
            *o += kappa * (kappa * musq_exp - cross[a]);
        }
    }
    Ok(occ)
}

/// Per-mode `<mu (b_a + b_a^dag)>`, the dipole-displacement correlation that
/// enters the velocity-gauge number operator.
fn dipole_ladder_correlations(
    state: &CoupledState,
    spectrum: &crate::matter::MatterSpectrum,
) -> Vec<f64> {
    let n_s = state.n_matter();
    let c = state.amplitudes();
    let mut cross = vec![0.0; state.fock().n_modes()];
    state.fock().for_each_raising(|from, to, mode, weight| {
        let form = compensated_sum((0..n_s).flat_map(|i| {
            let ci = c[from * n_s + i];
            (0..n_s).map(move |j| ci * spectrum.dipole(i, j) * c[to * n_s + j])
        }));
        cross[mode] += 2.0 * weight * form;
    });
    cross
}

/// Expectation of the mode coordinates `q_a = (b_a + b_a^dag) / sqrt(2 w_a)`.
/// Vanishes on eigenstates of a parity-symmetric system.
pub fn mode_displacements(state: &CoupledState, modes: &ModeContinuum) -> Result<Vec<f64>> {
    let fock = state.fock();
    if fock.n_modes() != modes.n_modes() {
        return Err(Error::DimensionMismatch(format!(
            "state spans {} modes, continuum has {}",
            fock.n_modes(),
            modes.n_modes()
        )));
    }
    let n_s = state.n_matter();
    let c = state.amplitudes();
    let mut ladder = vec![0.0; modes.n_modes()];
    fock.for_each_raising(|from, to, mode, weight| {
        let inner = compensated_sum(
            (0..n_s).map(|i| c[from * n_s + i] * c[to * n_s + i]),
        );
        ladder[mode] += 2.0 * weight * inner;
    });
    Ok(ladder
        .iter()
        .zip(modes.frequencies())
        .map(|(l, w)| l / (2.0 * w).sqrt())
        .collect())
}

const CALIBRATION_OMEGA: f64 = 0.5;
const CALIBRATION_LAMBDA: f64 = 0.05;
const ORACLE_PHOTON_DIM: usize = 9;
const ORACLE_SEED: u64 = 0x76656c6f63697479;

/// First-derivative stencil paired with the eighth-order kinetic stencil.
const D1_STENCIL: [f64; 4] = [
    4.0 / 5.0,
    -1.0 / 5.0,
    4.0 / 105.0,
    -1.0 / 280.0,
];

static KAPPA_SCALE: OnceLock<std::result::Result<f64, String>> = OnceLock::new();

/// Runs (once per process) the velocity-occupation calibration and returns
/// the admitted scale on `kappa = lambda / sqrt(2 omega)`. The full number
/// formula is evaluated on one harmonic-matter configuration and compared
/// against the oracle diagonalization; the theoretical prefactor is admitted
/// only when the two agree, and every later velocity reading reuses the
/// stored outcome.
pub fn calibrate_velocity_occupation() -> Result<f64> {
    KAPPA_SCALE
        .get_or_init(|| run_calibration().map_err(|e| e.to_string()))
        .clone()
        .map_err(Error::Calibration)
}

fn calibration_grid() -> Grid1D {
    Grid1D::centered(320, 0.05, Boundary::HardWall).expect("static grid parameters")
}

fn harmonic_potential(grid: &Grid1D) -> Vec<f64> {
    grid.points().iter().map(|&x| 0.5 * x * x).collect()
}

/// Length-gauge ground state of harmonic matter coupled to one mode, reduced
/// to the pair (photon number expectation, squared-dipole expectation).
fn length_side(omega: f64, lambda: f64) -> Result<(f64, f64, CoupledState, crate::matter::MatterSpectrum)> {
    let grid = calibration_grid();
    let v = harmonic_potential(&grid);
    let h_matter = hamiltonian_1d(&grid, 1.0, &v)?;
    let dipole: Vec<f64> = grid.points().iter().map(|&x| -x).collect();
    let basis = eigensolve_matter(&h_matter, &grid, 12, &dipole)?;
    let spectrum = basis.spectrum();
    let modes = ModeContinuum::sample_equidistant(omega, omega, 1)?
        .with_couplings(vec![lambda])?;
    let fock = build_fock_basis(1)?;
    let h = assemble_length_gauge(&spectrum, &modes, &fock, &CouplingConfig::length())?;
    let gs = ground_state(&h, &fock, spectrum.n_states())?;
    let btb = photon_occupation(&gs, &spectrum, &modes, OccupationGauge::Length)?[0];
    let musq_exp = gs.matter_expectation(&projected_dipole_square(&spectrum))?;
    Ok((btb, musq_exp, gs, spectrum))
}

/// Ground-state `<a^dag a>` of the velocity-gauge Hamiltonian
/// `(p + A)^2/2m + V + w(a^dag a + 1/2)`, `A = kappa (a + a^dag)`, solved on
/// the grid-times-Fock product space. A photon-phase rotation maps the
/// complex bilinear `A p / m` to the real form `(kappa/m) J x D1` with
/// `J = a - a^dag`, and `A^2` to `-kappa^2 J^2`; the number operator is
/// unchanged by the rotation.
fn velocity_oracle_occupation(omega: f64, lambda: f64) -> Result<f64> {
    let grid = calibration_grid();
    let v = harmonic_potential(&grid);
    let mass = 1.0;
    let h_matter = hamiltonian_1d(&grid, mass, &v)?;
    let nx = grid.n_x();
    let kappa = lambda / (2.0 * omega).sqrt();
    let a2 = kappa * kappa / (2.0 * mass);

    let dim = nx * ORACLE_PHOTON_DIM;
    let mut b = SparseBuilder::with_capacity(dim, dim * 24);
    for ph in 0..ORACLE_PHOTON_DIM {
        let base = ph * nx;
        let diag_shift = omega * (ph as f64 + 0.5) + a2 * (2 * ph + 1) as f64;
        for &(i, j, val) in h_matter.upper_triangle() {
            let (i, j) = (i as usize, j as usize);
            if i == j {
                b.push(base + i, base + i, val + diag_shift);
            } else {
                b.push(base + i, base + j, val);
            }
        }
        if ph + 2 < ORACLE_PHOTON_DIM {
            let pair = -a2 * (((ph + 1) * (ph + 2)) as f64).sqrt();
            for i in 0..nx {
                b.push(base + i, (ph + 2) * nx + i, pair);
            }
        }
        if ph + 1 < ORACLE_PHOTON_DIM {
            let coeff = kappa / mass * ((ph + 1) as f64).sqrt();
            for i in 0..nx {
                for (k, c) in D1_STENCIL.iter().enumerate() {
                    let c = c / grid.dx() * coeff;
                    if i + k + 1 < nx {
                        b.push(base + i, (ph + 1) * nx + (i + k + 1), c);
                    }
                    if i >= k + 1 {
                        b.push(base + i, (ph + 1) * nx + (i - k - 1), -c);
                    }
                }
            }
        }
    }
    let h = b.finish()?;
    let eig = krylov_lowest(&h, 1, 1e-11, ORACLE_SEED)?;
    let psi = &eig.vectors[0];
    Ok(compensated_sum((0..dim).map(|idx| {
        let ph = (idx / nx) as f64;
        ph * psi[idx] * psi[idx]
    })))
}

fn run_calibration() -> Result<f64> {
    let (omega, lambda) = (CALIBRATION_OMEGA, CALIBRATION_LAMBDA);
    let (btb, musq_exp, gs, spectrum) = length_side(omega, lambda)?;
    let kappa = lambda / (2.0 * omega).sqrt();
    let cross = dipole_ladder_correlations(&gs, &spectrum)[0];
    let formula = btb + kappa * (kappa * musq_exp - cross);
    let oracle = velocity_oracle_occupation(omega, lambda)?;
    if (formula - oracle).abs() > 1e-6 {
        return Err(Error::Calibration(format!(
            "velocity number formula gives {formula}, oracle diagonalization {oracle}; \
             the theoretical prefactor cannot be admitted"
        )));
    }
    Ok(1.0)
}
