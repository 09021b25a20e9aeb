//! Truncated photon Fock space and assembly of the coupled light-matter
//! Hamiltonians: the full length-gauge operator on the matter x Fock product
//! space, the matter-only bare-plus-self-energy operator, and the
//! effective-single-mode reductions.

mod free_particle;
mod occupation;
mod solve;

pub use free_particle::numeric_free_dispersion;
pub use occupation::{
    calibrate_velocity_occupation, mode_displacements, photon_occupation, OccupationGauge,
};
pub use solve::{
    eigenstates, excited_states, ground_state, CoupledState, COUPLED_DENSE_CUTOFF,
};

use crate::continuum::ModeContinuum;
use crate::error::{Error, Result};
use crate::linalg::{compensated_sum, SparseBuilder, SparseSymmetric};
use crate::matter::MatterSpectrum;

/// Default cap on the coupled-space dimension; the largest production run
/// (10 matter states, 200 modes) sits just above 2e5.
pub const DEFAULT_MAX_DIMENSION: usize = 250_000;

/// One photon-number signature: at most two quanta in total.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum FockState {
    Vacuum,
    /// One photon in the given mode.
    One(u32),
    /// Two photons in modes `(alpha, beta)` with `alpha <= beta`.
    Two(u32, u32),
}

/// Photon basis truncated at total occupation `max_total` (1 or 2), ordered
/// as vacuum, one-photon states by mode, then two-photon pairs
/// lexicographically.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FockBasis {
    n_modes: u32,
    max_total: u32,
}

/// Two-photon truncation of `n_modes` modes; the production setting.
pub fn build_fock_basis(n_modes: usize) -> Result<FockBasis> {
    FockBasis::with_max_total(n_modes, 2)
}

impl FockBasis {
    pub fn with_max_total(n_modes: usize, max_total: u32) -> Result<Self> {
        if n_modes == 0 || n_modes > u32::MAX as usize {
            return Err(Error::InvalidInput(format!(
                "photon basis needs between 1 and {} modes, got {n_modes}",
                u32::MAX
            )));
        }
        if !(1..=2).contains(&max_total) {
            return Err(Error::InvalidInput(format!(
                "photon truncation supports one or two total quanta, got {max_total}"
            )));
        }
        Ok(Self {
            n_modes: n_modes as u32,
            max_total,
        })
    }

    pub fn n_modes(&self) -> usize {
        self.n_modes as usize
    }

    pub fn max_total(&self) -> u32 {
        self.max_total
    }

    /// `1 + N_p` with one quantum, `1 + N_p + (N_p^2 + N_p)/2` with two.
    pub fn dim(&self) -> usize {
        let n = self.n_modes as usize;
        let one = 1 + n;
        if self.max_total == 1 {
            one
        } else {
            one + (n * n + n) / 2
        }
    }

    /// Position of a signature in the basis ordering.
    pub fn index_of(&self, state: FockState) -> Option<usize> {
        let n = self.n_modes as usize;
        match state {
            FockState::Vacuum => Some(0),
            FockState::One(a) => {
                if (a as usize) < n {
                    Some(1 + a as usize)
                } else {
                    None
                }
            }
            FockState::Two(a, b) => {
                if self.max_total < 2 || a > b || (b as usize) >= n {
                    return None;
                }
                let (a, b) = (a as usize, b as usize);
                Some(1 + n + a * n - (a * a - a) / 2 + (b - a))
            }
        }
    }

    /// Signature at a basis position.
    pub fn state_at(&self, index: usize) -> FockState {
        let n = self.n_modes as usize;
        if index == 0 {
            return FockState::Vacuum;
        }
        if index <= n {
            return FockState::One((index - 1) as u32);
        }
        debug_assert!(self.max_total >= 2 && index < self.dim());
        let mut rest = index - 1 - n;
        let mut a = 0usize;
        while rest >= n - a {
            rest -= n - a;
            a += 1;
        }
        FockState::Two(a as u32, (a + rest) as u32)
    }

    /// Occupation of `mode` in the signature at `index`.
    pub fn occupation(&self, index: usize, mode: usize) -> u32 {
        match self.state_at(index) {
            FockState::Vacuum => 0,
            FockState::One(a) => u32::from(a as usize == mode),
            FockState::Two(a, b) => {
                u32::from(a as usize == mode) + u32::from(b as usize == mode)
            }
        }
    }

    /// Total quanta in the signature at `index`.
    pub fn total_occupation(&self, index: usize) -> u32 {
        match self.state_at(index) {
            FockState::Vacuum => 0,
            FockState::One(_) => 1,
            FockState::Two(_, _) => 2,
        }
    }

    /// Visits every raising matrix element `<to| b_mode^dag |from>` inside the
    /// truncation, as `(from, to, mode, weight)` with `from < to`. The weight
    /// is `sqrt(2)` when the raised mode already holds a quantum.
    pub fn for_each_raising(&self, mut visit: impl FnMut(usize, usize, usize, f64)) {
        let n = self.n_modes as usize;
        let sqrt2 = std::f64::consts::SQRT_2;
        for alpha in 0..n {
            visit(
                0,
                self.index_of(FockState::One(alpha as u32)).unwrap(),
                alpha,
                1.0,
            );
        }
        if self.max_total < 2 {
            return;
        }
        for alpha in 0..n {
            let from = self.index_of(FockState::One(alpha as u32)).unwrap();
            for beta in 0..n {
                let (lo, hi) = (alpha.min(beta) as u32, alpha.max(beta) as u32);
                let to = self.index_of(FockState::Two(lo, hi)).unwrap();
                let weight = if alpha == beta { sqrt2 } else { 1.0 };
                visit(from, to, beta, weight);
            }
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum EffectiveStrategy {
    /// Keep the lowest mode with its own coupling.
    Lowest,
    /// One mode at the mean frequency with the mean coupling.
    Averaged,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Gauge {
    Length,
    BqmDse,
    EffectiveSingle(EffectiveStrategy),
}

/// Which terms of the coupled Hamiltonian to assemble.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CouplingConfig {
    pub gauge: Gauge,
    pub include_bilinear: bool,
    pub include_dse: bool,
    pub max_dimension: usize,
}

impl CouplingConfig {
    pub fn length() -> Self {
        Self {
            gauge: Gauge::Length,
            include_bilinear: true,
            include_dse: true,
            max_dimension: DEFAULT_MAX_DIMENSION,
        }
    }

    pub fn bqm_dse() -> Self {
        Self {
            gauge: Gauge::BqmDse,
            include_bilinear: false,
            include_dse: true,
            max_dimension: DEFAULT_MAX_DIMENSION,
        }
    }

    pub fn effective(strategy: EffectiveStrategy) -> Self {
        Self {
            gauge: Gauge::EffectiveSingle(strategy),
            ..Self::length()
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.gauge == Gauge::BqmDse && (self.include_bilinear || !self.include_dse) {
            return Err(Error::InvalidInput(
                "the bare-matter route has no photon space: the bilinear term must be \
                 off and the dipole self-energy on"
                    .into(),
            ));
        }
        Ok(())
    }
}

/// Square of the projected dipole matrix, `(mu mu)_ij` in the truncated
/// matter space. Used for every self-energy assembly so the matter-only and
/// coupled routes share one operator; the projected `<i|mu^2|j>` held by the
/// spectrum differs by a truncation remainder and is reported, not assembled.
fn projected_dipole_square(spectrum: &MatterSpectrum) -> Vec<f64> {
    let n = spectrum.n_states();
    let mut out = vec![0.0; n * n];
    for i in 0..n {
        for j in i..n {
            let v = compensated_sum((0..n).map(|k| spectrum.dipole(i, k) * spectrum.dipole(k, j)));
            out[i * n + j] = v;
            out[j * n + i] = v;
        }
    }
    out
}

/// Sum of squared couplings weighted by `1/2`, the self-energy prefactor.
fn dse_prefactor(modes: &ModeContinuum) -> f64 {
    0.5 * compensated_sum(modes.couplings().iter().map(|l| l * l))
}

/// Length-gauge Pauli-Fierz Hamiltonian on the matter x Fock product space.
///
/// `H = sum_i E_i |i><i| + sum_a omega_a (n_a + 1/2)
///      - sum_a lambda_a sqrt(omega_a / 2) (b_a + b_a^dag) mu
///      + (1/2) sum_a lambda_a^2 mu^2`
///
/// with `mu` the projected dipole matrix and `mu^2` its matrix square. Basis
/// index `F * N_s + i` (Fock-major). An effective-single-mode gauge first
/// reduces the continuum, then assembles the same operator on one mode.
pub fn assemble_length_gauge(
    spectrum: &MatterSpectrum,
    modes: &ModeContinuum,
    fock: &FockBasis,
    cfg: &CouplingConfig,
) -> Result<SparseSymmetric> {
    cfg.validate()?;
    let reduced;
    let modes = match cfg.gauge {
        Gauge::Length => modes,
        Gauge::EffectiveSingle(strategy) => {
            reduced = effective_single_mode(modes, strategy)?;
            &reduced
        }
        Gauge::BqmDse => {
            return Err(Error::InvalidInput(
                "the bare-matter route assembles without a photon space; use the \
                 matter-only assembly"
                    .into(),
            ))
        }
    };
    spectrum.validate()?;
    if fock.n_modes() != modes.n_modes() {
        return Err(Error::DimensionMismatch(format!(
            "photon basis spans {} modes, continuum has {}",
            fock.n_modes(),
            modes.n_modes()
        )));
    }

    let n_s = spectrum.n_states();
    let fock_dim = fock.dim();
    let dim = n_s
        .checked_mul(fock_dim)
        .filter(|d| *d <= cfg.max_dimension)
        .ok_or(Error::DimensionOverflow {
            requested: n_s.saturating_mul(fock_dim),
            max: cfg.max_dimension,
        })?;

    let omega = modes.frequencies();
    let lambda = modes.couplings();
    let zero_point = 0.5 * compensated_sum(omega.iter().copied());
    let musq = projected_dipole_square(spectrum);
    let dse = if cfg.include_dse {
        dse_prefactor(modes)
    } else {
        0.0
    };

    let n_edges = if fock.max_total() >= 2 {
        fock.n_modes() + fock.n_modes() * fock.n_modes()
    } else {
        fock.n_modes()
    };
    let capacity = dim * (1 + n_s / 2) + if cfg.include_bilinear { n_edges * n_s * n_s } else { 0 };
    let mut b = SparseBuilder::with_capacity(dim, capacity);

    for f in 0..fock_dim {
        let mut photon = zero_point;
        // Occupied modes only: at most two terms on top of the zero point.
        match fock.state_at(f) {
            FockState::Vacuum => {}
            FockState::One(a) => photon += omega[a as usize],
            FockState::Two(a, bm) => photon += omega[a as usize] + omega[bm as usize],
        }
        for i in 0..n_s {
            let diag = spectrum.energy(i) + photon + dse * musq[i * n_s + i];
            b.push(f * n_s + i, f * n_s + i, diag);
            for j in (i + 1)..n_s {
                let v = dse * musq[i * n_s + j];
                b.push(f * n_s + i, f * n_s + j, v);
            }
        }
    }

    if cfg.include_bilinear {
        fock.for_each_raising(|from, to, mode, weight| {
            let coeff = -lambda[mode] * (0.5 * omega[mode]).sqrt() * weight;
            if coeff == 0.0 {
                return;
            }
            for i in 0..n_s {
                for j in 0..n_s {
                    b.push(from * n_s + i, to * n_s + j, coeff * spectrum.dipole(i, j));
                }
            }
        });
    }

    b.finish()
}

/// Matter-only operator `sum_i E_i |i><i| + (1/2) sum_a lambda_a^2 mu^2`:
/// bare quantum mechanics plus the dipole self-energy, dimension `N_s`.
pub fn assemble_bqm_dse(
    spectrum: &MatterSpectrum,
    modes: &ModeContinuum,
) -> Result<SparseSymmetric> {
    spectrum.validate()?;
    let n_s = spectrum.n_states();
    let musq = projected_dipole_square(spectrum);
    let dse = dse_prefactor(modes);
    let mut b = SparseBuilder::with_capacity(n_s, n_s * n_s);
    for i in 0..n_s {
        b.push(i, i, spectrum.energy(i) + dse * musq[i * n_s + i]);
        for j in (i + 1)..n_s {
            b.push(i, j, dse * musq[i * n_s + j]);
        }
    }
    b.finish()
}

/// Reduces a continuum to one mode: the lowest mode with its own coupling, or
/// a single mode at the arithmetic-mean frequency and coupling.
pub fn effective_single_mode(
    modes: &ModeContinuum,
    strategy: EffectiveStrategy,
) -> Result<ModeContinuum> {
    let (omega, lambda) = match strategy {
        EffectiveStrategy::Lowest => (modes.frequencies()[0], modes.couplings()[0]),
        EffectiveStrategy::Averaged => {
            let n = modes.n_modes() as f64;
            (
                compensated_sum(modes.frequencies().iter().copied()) / n,
                compensated_sum(modes.couplings().iter().copied()) / n,
            )
        }
    };
    ModeContinuum::sample_equidistant(omega, omega, 1)?.with_couplings(vec![lambda])
}
