//! Normal modes of the photon sector under the diamagnetic (squared vector
//! potential) term, and the multimode coupling constant derived from them.
//!
//! The photonic frequency matrix is the rank-one update `W = diag(omega^2) +
//! d dT`. Its eigenvalues are the dressed frequencies squared and the
//! eigenvector matrix is the polarization rotation. The update is solved with
//! the secular-equation kernel rather than a general dense eigensolver: the
//! diagonal spans up to sixteen orders of magnitude once infrared cutoffs get
//! small, and only the secular route keeps every dressed frequency accurate
//! relative to its own scale, which the mutual-consistency checks below rely
//! on.

use super::ModeContinuum;
use crate::error::{Error, Result};
use crate::linalg::{
    compensated_sum, dense_sym_eig, dot, rank_one_update_eig_detailed, EigenResult, RankOneEig,
    SymmetricDense,
};

const ROUTE_TOL: f64 = 1e-12;
const ORTHO_TOL: f64 = 1e-12;

/// Dressed photon modes after diagonalizing `W = diag(omega^2) + d dT`.
#[derive(Debug, Clone)]
pub struct NormalModeSet {
    omega: Vec<f64>,
    dressed: Vec<f64>,
    rotation: Vec<Vec<f64>>,
    coupling: Vec<f64>,
    g: f64,
}

impl NormalModeSet {
    /// Bare mode frequencies `omega_alpha`.
    pub fn bare_frequencies(&self) -> &[f64] {
        &self.omega
    }

    /// Dressed frequencies `Omega_alpha`, ascending.
    pub fn dressed_frequencies(&self) -> &[f64] {
        &self.dressed
    }

    /// Columns of the orthogonal rotation; column `alpha` is the dressed
    /// polarization vector of `Omega_alpha` in the bare mode basis.
    pub fn rotation_columns(&self) -> &[Vec<f64>] {
        &self.rotation
    }

    /// Coupling vector `d_alpha`, which doubles as the per-mode diamagnetic
    /// frequency `omega_d_alpha`.
    pub fn coupling(&self) -> &[f64] {
        &self.coupling
    }

    /// Total multimode coupling `g`, in `[0, 1)`.
    pub fn g(&self) -> f64 {
        self.g
    }

    pub fn n_modes(&self) -> usize {
        self.dressed.len()
    }

    /// Zero-point energy `sum Omega_alpha / 2`.
    pub fn zero_point_energy(&self) -> f64 {
        0.5 * compensated_sum(self.dressed.iter().copied())
    }
}

/// All three mutually checking evaluations of the multimode coupling.
#[derive(Debug, Clone, Copy)]
pub struct CouplingRoutes {
    /// `sum_alpha (OT d)_alpha^2 / Omega_alpha^2` over the dressed modes.
    pub eigenmode: f64,
    /// Sherman-Morrison closed form `S / (1 + S)` with `S = sum d^2/omega^2`.
    pub closed_form: f64,
    /// Determinant ratio `1 - prod omega^2 / prod Omega^2`, in log space.
    pub determinant: f64,
}

impl CouplingRoutes {
    fn check(&self) -> Result<f64> {
        let pairs = [
            (self.eigenmode, self.closed_form),
            (self.eigenmode, self.determinant),
            (self.closed_form, self.determinant),
        ];
        for (a, b) in pairs {
            if (a - b).abs() > ROUTE_TOL * a.abs().max(b.abs()) {
                return Err(Error::RouteDisagreement {
                    eigenmode: self.eigenmode,
                    closed_form: self.closed_form,
                    determinant: self.determinant,
                });
            }
        }
        Ok(self.closed_form)
    }
}

/// Diagonalizes the photon sector for the given coupling vector.
///
/// Validates eigenvalue interlacing `omega_alpha^2 <= Omega_alpha^2 <=
/// omega_{alpha+1}^2`, rotation orthogonality to `1e-12` (retrying once
/// through the dense solver before giving up), and three-route agreement of
/// the stored coupling `g`.
pub fn normal_modes(modes: &ModeContinuum, d: &[f64]) -> Result<NormalModeSet> {
    let omega = modes.frequencies();
    let n = omega.len();
    if d.len() != n {
        return Err(Error::DimensionMismatch(format!(
            "{} coupling entries for {} modes",
            d.len(),
            n
        )));
    }
    crate::linalg::check_finite(d, "normal mode coupling vector")?;

    let delta: Vec<f64> = omega.iter().map(|w| w * w).collect();
    let mut solved = rank_one_update_eig_detailed(&delta, d)?;
    if rotation_defect(&solved.eig) > ORTHO_TOL {
        solved = anchor_dense(dense_sym_eig(&w_matrix(&delta, d))?, &delta);
        let defect = rotation_defect(&solved.eig);
        if defect > ORTHO_TOL {
            return Err(Error::Backend(format!(
                "photon normal-mode rotation lost orthogonality (defect {defect:.3e})"
            )));
        }
    }

    let rho: f64 = compensated_sum(d.iter().map(|x| x * x));
    for (alpha, lambda) in solved.eig.values.iter().enumerate() {
        let lower = delta[alpha];
        let upper = if alpha + 1 < n {
            delta[alpha + 1]
        } else {
            delta[n - 1] + rho
        };
        let slack = 1e-14 * upper.abs().max(1.0);
        if *lambda < lower - slack || *lambda > upper + slack {
            return Err(Error::Backend(format!(
                "dressed frequency {} violates interlacing: {lambda} outside [{lower}, {upper}]",
                alpha
            )));
        }
    }

    let routes = routes_from_eig(omega, d, &solved);
    let g = routes.check()?;

    Ok(NormalModeSet {
        omega: omega.to_vec(),
        dressed: solved.eig.values.iter().map(|l| l.max(0.0).sqrt()).collect(),
        rotation: solved.eig.vectors,
        coupling: d.to_vec(),
        g,
    })
}

/// Total multimode coupling `g(N_p)`, all three routes cross-checked; the
/// Sherman-Morrison closed form is the returned value.
pub fn multimode_coupling_g(modes: &ModeContinuum, d: &[f64]) -> Result<f64> {
    coupling_g_routes(modes, d)?.check()
}

/// The three route values behind [`multimode_coupling_g`].
pub fn coupling_g_routes(modes: &ModeContinuum, d: &[f64]) -> Result<CouplingRoutes> {
    let omega = modes.frequencies();
    if d.len() != omega.len() {
        return Err(Error::DimensionMismatch(format!(
            "{} coupling entries for {} modes",
            d.len(),
            omega.len()
        )));
    }
    crate::linalg::check_finite(d, "coupling vector")?;
    let delta: Vec<f64> = omega.iter().map(|w| w * w).collect();
    let solved = rank_one_update_eig_detailed(&delta, d)?;
    Ok(routes_from_eig(omega, d, &solved))
}

fn routes_from_eig(omega: &[f64], d: &[f64], solved: &RankOneEig) -> CouplingRoutes {
    let eig = &solved.eig;
    let eigenmode = compensated_sum(eig.values.iter().zip(&eig.vectors).map(|(lambda, col)| {
        let proj = dot(col, d);
        proj * proj / lambda
    }));

    let s = compensated_sum(omega.iter().zip(d).map(|(w, di)| (di / w) * (di / w)));
    let closed_form = s / (1.0 + s);

    // prod omega^2 / prod Omega^2 underflows directly for a few hundred
    // modes, so the ratio is accumulated as a sum of log ratios; each factor
    // uses the pole-anchored gap Omega^2 - omega^2, which survives where the
    // difference of the rounded values would cancel away.
    let log_ratio = compensated_sum((0..omega.len()).map(|j| {
        let delta_j = omega[j] * omega[j];
        let anchor = omega[solved.anchor[j]] * omega[solved.anchor[j]];
        let gap = (anchor - delta_j) + solved.offset[j];
        -(gap / delta_j).ln_1p()
    }));
    let determinant = -log_ratio.exp_m1();

    CouplingRoutes {
        eigenmode,
        closed_form,
        determinant,
    }
}

/// Wraps a dense eigensolve in the anchored representation; offsets are the
/// rounded differences, which is the best the dense route can provide.
fn anchor_dense(eig: EigenResult, delta: &[f64]) -> RankOneEig {
    let anchor: Vec<usize> = (0..delta.len()).collect();
    let offset: Vec<f64> = eig
        .values
        .iter()
        .zip(delta)
        .map(|(l, d)| l - d)
        .collect();
    RankOneEig {
        eig,
        anchor,
        offset,
    }
}

fn w_matrix(delta: &[f64], d: &[f64]) -> SymmetricDense {
    SymmetricDense::from_fn(delta.len(), |i, j| {
        d[i] * d[j] + if i == j { delta[i] } else { 0.0 }
    })
}

fn rotation_defect(eig: &EigenResult) -> f64 {
    let mut worst = 0.0f64;
    for (i, a) in eig.vectors.iter().enumerate() {
        for b in eig.vectors.iter().skip(i) {
            let g = dot(a, b);
            let want = if std::ptr::eq(a, b) { 1.0 } else { 0.0 };
            worst = worst.max((g - want).abs());
        }
    }
    worst
}

/// Renormalized mass `m_e = m / (1 - g)`.
pub fn renormalized_mass(mass: f64, g: f64) -> Result<f64> {
    validate_mass_inputs(mass, g)?;
    Ok(mass / (1.0 - g))
}

/// Photonic mass contribution `m_pt = m_e - m = m g / (1 - g)`, evaluated
/// without the cancellation of the literal difference.
pub fn photonic_mass(mass: f64, g: f64) -> Result<f64> {
    validate_mass_inputs(mass, g)?;
    Ok(mass * g / (1.0 - g))
}

/// Running bare mass `m(N_p) = m_e (1 - g(N_p))` that keeps the renormalized
/// mass pinned while the continuum grows.
pub fn running_bare_mass(renormalized: f64, g: f64) -> Result<f64> {
    validate_mass_inputs(renormalized, g)?;
    Ok(renormalized * (1.0 - g))
}

fn validate_mass_inputs(mass: f64, g: f64) -> Result<()> {
    if !(mass > 0.0) || !mass.is_finite() {
        return Err(Error::InvalidInput(format!(
            "mass must be positive, got {mass}"
        )));
    }
    if !(0.0..1.0).contains(&g) {
        return Err(Error::InvalidInput(format!(
            "multimode coupling must satisfy 0 <= g < 1, got {g}"
        )));
    }
    Ok(())
}
