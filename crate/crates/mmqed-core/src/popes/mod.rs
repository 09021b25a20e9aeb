//! Polaritonic potential-energy surfaces of the clamped-nuclei molecule:
//! ground-state scans over the internuclear separation, dissociation
//! energies, Morse analysis of the resulting wells, and the renormalized
//! masses entering the matter-only comparison setting.
//!
//! A scan solves the electronic problem at every separation, optionally
//! couples the resulting matter basis to the photon continuum, and records
//! the ground energy with the photonic zero-point energy subtracted, so that
//! curves with and without photons share one energy scale.

use rayon::prelude::*;

use crate::assembler::{
    assemble_bqm_dse, assemble_length_gauge, build_fock_basis, effective_single_mode,
    ground_state, CouplingConfig, Gauge,
};
use crate::continuum::{
    coupling_vector, multimode_coupling_g, renormalized_mass, ModeContinuum, Species,
};
use crate::error::{Error, Result};
use crate::linalg::{compensated_sum, dense_sym_eig};
use crate::matter::{
    eigensolve_matter, h2_dipole, h2_electronic_hamiltonian, Grid1D, H2Model,
};

/// Which setting produced a surface.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PesLabel {
    /// Bare masses coupled to the photon continuum.
    Nrqed,
    /// Renormalized masses, no explicit photons.
    Qm,
    /// Bare matter plus the dipole self-energy.
    BqmDse,
    /// Continuum reduced to a single effective mode.
    EffectiveMode,
}

impl std::fmt::Display for PesLabel {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            PesLabel::Nrqed => "NRQED",
            PesLabel::Qm => "QM",
            PesLabel::BqmDse => "bQM+DSE",
            PesLabel::EffectiveMode => "effective-mode",
        })
    }
}

/// Ground-state energy over internuclear separation, zero-point subtracted
/// when photons were attached.
#[derive(Debug, Clone, PartialEq)]
pub struct PESCurve {
    r: Vec<f64>,
    energies: Vec<f64>,
    label: PesLabel,
    n_modes: usize,
    lambda: f64,
}

impl PESCurve {
    pub fn new(
        r: Vec<f64>,
        energies: Vec<f64>,
        label: PesLabel,
        n_modes: usize,
        lambda: f64,
    ) -> Result<Self> {
        if r.len() < 2 || r.len() != energies.len() {
            return Err(Error::DimensionMismatch(format!(
                "{} separations against {} energies",
                r.len(),
                energies.len()
            )));
        }
        if r[0] <= 0.0 || r.windows(2).any(|w| !(w[0] < w[1])) {
            return Err(Error::InvalidInput(
                "separations must be positive and strictly ascending".into(),
            ));
        }
        crate::linalg::check_finite(&r, "PES separations")?;
        crate::linalg::check_finite(&energies, "PES energies")?;
        if !(lambda >= 0.0) || !lambda.is_finite() {
            return Err(Error::InvalidInput(format!(
                "coupling strength must be non-negative, got {lambda}"
            )));
        }
        Ok(Self {
            r,
            energies,
            label,
            n_modes,
            lambda,
        })
    }

    pub fn r(&self) -> &[f64] {
        &self.r
    }

    pub fn energies(&self) -> &[f64] {
        &self.energies
    }

    pub fn label(&self) -> PesLabel {
        self.label
    }

    pub fn n_modes(&self) -> usize {
        self.n_modes
    }

    pub fn lambda(&self) -> f64 {
        self.lambda
    }

    pub fn len(&self) -> usize {
        self.r.len()
    }

    pub fn is_empty(&self) -> bool {
        self.r.is_empty()
    }

    /// Index of the sampled minimum.
    pub fn min_index(&self) -> usize {
        self.energies
            .iter()
            .enumerate()
            .min_by(|a, b| a.1.partial_cmp(b.1).expect("finite energies"))
            .expect("non-empty curve")
            .0
    }

    /// `(R_eq, E_min)` refined by the parabola through the sampled minimum
    /// and its neighbors; falls back to the grid point when the minimum sits
    /// on the boundary or the parabola degenerates.
    pub fn equilibrium(&self) -> (f64, f64) {
        let m = self.min_index();
        if m == 0 || m + 1 == self.len() {
            return (self.r[m], self.energies[m]);
        }
        let (r0, r1, r2) = (self.r[m - 1], self.r[m], self.r[m + 1]);
        let (e0, e1, e2) = (
            self.energies[m - 1],
            self.energies[m],
            self.energies[m + 1],
        );
        let w0 = e0 / ((r0 - r1) * (r0 - r2));
        let w1 = e1 / ((r1 - r0) * (r1 - r2));
        let w2 = e2 / ((r2 - r0) * (r2 - r1));
        let a = w0 + w1 + w2;
        let b = -(w0 * (r1 + r2) + w1 * (r0 + r2) + w2 * (r0 + r1));
        let c = w0 * r1 * r2 + w1 * r0 * r2 + w2 * r0 * r1;
        if !(a > 0.0) {
            return (r1, e1);
        }
        let vertex = (-b / (2.0 * a)).clamp(r0, r2);
        ((vertex), (a * vertex + b) * vertex + c)
    }

    fn interior_minimum(&self) -> Result<usize> {
        let m = self.min_index();
        if m == 0 || m + 1 == self.len() {
            return Err(Error::InvalidInput(format!(
                "curve attains its minimum at the boundary separation {}; no bound well",
                self.r[m]
            )));
        }
        Ok(m)
    }
}

/// Morse parameters `D_e (1 - e^{-a (R - R_eq)})^2 + C` of a fitted well.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MorseFit {
    pub d_e: f64,
    pub a: f64,
    pub c: f64,
    pub r_eq: f64,
    pub omega_e: f64,
    pub residual: f64,
}

impl MorseFit {
    /// Bond force constant `k = 2 D_e a^2 = mu_n omega_e^2`.
    pub fn force_constant(&self) -> f64 {
        2.0 * self.d_e * self.a * self.a
    }
}

/// Morse potential value at separation `r`.
pub fn morse_energy(r: f64, r_eq: f64, d_e: f64, a: f64, c: f64) -> f64 {
    let u = 1.0 - (-a * (r - r_eq)).exp();
    d_e * u * u + c
}

/// Separation grid `(0, r_max]` with spacing `delta`.
pub fn separation_grid(delta: f64, r_max: f64) -> Result<Vec<f64>> {
    if !(delta > 0.0) || !(r_max >= delta) || !delta.is_finite() || !r_max.is_finite() {
        return Err(Error::InvalidInput(format!(
            "need 0 < spacing <= max separation, got {delta} and {r_max}"
        )));
    }
    let n = (r_max / delta + 1e-9).floor() as usize;
    Ok((1..=n).map(|k| k as f64 * delta).collect())
}

/// Scans the molecular ground-state energy over `r_values`.
///
/// Each point solves the electronic Hamiltonian on `grid`, truncates to the
/// lowest `n_s` states, and either keeps the bare energy (`photons` absent),
/// attaches the continuum per the coupling configuration, or adds the
/// matter-only self-energy for the `BqmDse` gauge. When an explicit photon
/// space is built, its zero-point energy is subtracted so all settings report
/// comparable electronic energies. Points run in parallel; any failure aborts
/// the scan naming the failing separation.
pub fn pes_scan(
    grid: &Grid1D,
    r_values: &[f64],
    model: &H2Model,
    n_s: usize,
    photons: Option<&ModeContinuum>,
    cfg: &CouplingConfig,
    label: PesLabel,
) -> Result<PESCurve> {
    if r_values.len() < 2 {
        return Err(Error::InvalidInput(
            "a scan needs at least two separations".into(),
        ));
    }
    if r_values[0] <= 0.0 || r_values.windows(2).any(|w| !(w[0] < w[1])) {
        return Err(Error::InvalidInput(
            "separations must be positive and strictly ascending".into(),
        ));
    }
    cfg.validate()?;

    let (zero_point, fock) = match photons {
        None => (0.0, None),
        Some(modes) => match cfg.gauge {
            Gauge::BqmDse => (0.0, None),
            Gauge::Length => (
                0.5 * compensated_sum(modes.frequencies().iter().copied()),
                Some(build_fock_basis(modes.n_modes())?),
            ),
            Gauge::EffectiveSingle(strategy) => (
                0.5 * effective_single_mode(modes, strategy)?.frequencies()[0],
                Some(build_fock_basis(1)?),
            ),
        },
    };
    let dipole = h2_dipole(grid);

    let point = |r: f64| -> Result<f64> {
        let h_el = h2_electronic_hamiltonian(r, grid, model)?;
        let basis = eigensolve_matter(&h_el, grid, n_s, &dipole)?;
        let spectrum = basis.spectrum();
        let energy = match photons {
            None => spectrum.energy(0),
            Some(modes) => match cfg.gauge {
                Gauge::BqmDse => {
                    let h = assemble_bqm_dse(&spectrum, modes)?;
                    dense_sym_eig(&h.to_dense())?.values[0]
                }
                _ => {
                    let fock = fock.as_ref().expect("photon basis was built");
                    let h = assemble_length_gauge(&spectrum, modes, fock, cfg)?;
                    ground_state(&h, fock, n_s)?.energy()
                }
            },
        };
        Ok(energy - zero_point)
    };

    let energies = r_values
        .par_iter()
        .map(|&r| point(r).map_err(|e| Error::Backend(format!("PES point R = {r}: {e}"))))
        .collect::<Vec<_>>()
        .into_iter()
        .collect::<Result<Vec<f64>>>()?;

    PESCurve::new(
        r_values.to_vec(),
        energies,
        label,
        photons.map_or(0, ModeContinuum::n_modes),
        photons.map_or(0.0, |m| m.couplings().first().copied().unwrap_or(0.0)),
    )
}

/// Dissociation energy `E(R_max) - min E`, taken at the last sampled
/// separation.
///
/// Rejects curves without an interior minimum and curves whose tail has not
/// flattened: the energies one separation unit apart at the far end must
/// agree within 1e-4.
pub fn dissociation_energy(curve: &PESCurve) -> Result<f64> {
    let m = curve.interior_minimum()?;
    let r = curve.r();
    let e = curve.energies();
    let last = r.len() - 1;
    let probe = r[last] - 1.0;
    if probe <= r[0] {
        return Err(Error::InvalidInput(format!(
            "curve ends at R = {} and cannot show a plateau one unit wide",
            r[last]
        )));
    }
    let near = r
        .iter()
        .enumerate()
        .min_by(|a, b| {
            (a.1 - probe)
                .abs()
                .partial_cmp(&(b.1 - probe).abs())
                .expect("finite separations")
        })
        .expect("non-empty curve")
        .0;
    let flatness = (e[last] - e[near]).abs();
    if flatness >= 1e-4 {
        return Err(Error::InvalidInput(format!(
            "no dissociation plateau: |E({}) - E({})| = {flatness:.3e}",
            r[last], r[near]
        )));
    }
    Ok(e[last] - e[m])
}

/// Fits the Morse width parameter `a` by least squares, holding `r_eq`,
/// `d_e` and the offset `c` at the values read off the curve.
///
/// `mu_n` is the reduced nuclear mass and only enters the reported harmonic
/// frequency. `window` restricts the fit to separations inside `(lo, hi)`;
/// by default every sampled point participates.
pub fn morse_fit(
    curve: &PESCurve,
    r_eq: f64,
    d_e: f64,
    c: f64,
    mu_n: f64,
    window: Option<(f64, f64)>,
) -> Result<MorseFit> {
    curve.interior_minimum()?;
    if !(d_e > 0.0) || !d_e.is_finite() {
        return Err(Error::InvalidInput(format!(
            "dissociation energy must be positive, got {d_e}"
        )));
    }
    if !(mu_n > 0.0) || !mu_n.is_finite() {
        return Err(Error::InvalidInput(format!(
            "reduced nuclear mass must be positive, got {mu_n}"
        )));
    }
    if !c.is_finite() || !r_eq.is_finite() {
        return Err(Error::InvalidInput(
            "well position and offset must be finite".into(),
        ));
    }
    let (lo, hi) = window.unwrap_or((f64::NEG_INFINITY, f64::INFINITY));
    if !(lo < hi) {
        return Err(Error::InvalidInput(format!(
            "fit window ({lo}, {hi}) is not an ordered interval"
        )));
    }
    let points: Vec<(f64, f64)> = curve
        .r()
        .iter()
        .zip(curve.energies())
        .filter(|(r, _)| **r >= lo && **r <= hi)
        .map(|(&r, &e)| (r, e))
        .collect();
    if points.len() < 3 {
        return Err(Error::InvalidInput(format!(
            "fit window holds {} points, need at least 3",
            points.len()
        )));
    }

    let sse = |a: f64| -> f64 {
        points
            .iter()
            .map(|&(r, e)| (morse_energy(r, r_eq, d_e, a, c) - e).powi(2))
            .sum()
    };

    // Log-spaced scan brackets the minimum, golden-section refines it.
    const A_MIN: f64 = 2e-2;
    const A_MAX: f64 = 3e1;
    let n_scan = 96;
    let ratio = (A_MAX / A_MIN).ln() / (n_scan - 1) as f64;
    let scan_a = |i: usize| A_MIN * (ratio * i as f64).exp();
    let best = (0..n_scan)
        .map(|i| (i, sse(scan_a(i))))
        .min_by(|a, b| a.1.partial_cmp(&b.1).expect("finite sums"))
        .expect("non-empty scan")
        .0;
    if best == 0 || best == n_scan - 1 {
        return Err(Error::FitFailure(format!(
            "width parameter ran into the search boundary near a = {:.3e}, \
             residual {:.3e}",
            scan_a(best),
            sse(scan_a(best)).sqrt()
        )));
    }
    let (mut lo_a, mut hi_a) = (scan_a(best - 1), scan_a(best + 1));
    let phi = (5f64.sqrt() - 1.0) / 2.0;
    let mut c1 = hi_a - phi * (hi_a - lo_a);
    let mut c2 = lo_a + phi * (hi_a - lo_a);
    let (mut f1, mut f2) = (sse(c1), sse(c2));
    while hi_a - lo_a > 1e-12 * (1.0 + lo_a) {
        if f1 < f2 {
            hi_a = c2;
            c2 = c1;
            f2 = f1;
            c1 = hi_a - phi * (hi_a - lo_a);
            f1 = sse(c1);
        } else {
            lo_a = c1;
            c1 = c2;
            f1 = f2;
            c2 = lo_a + phi * (hi_a - lo_a);
            f2 = sse(c2);
        }
    }
    let a = 0.5 * (lo_a + hi_a);
    Ok(MorseFit {
        d_e,
        a,
        c,
        r_eq,
        omega_e: harmonic_frequency(d_e, a, mu_n),
        residual: sse(a).sqrt(),
    })
}

/// Harmonic frequency `omega_e = sqrt(2 D_e a^2 / mu_n)` of a Morse well.
pub fn harmonic_frequency(d_e: f64, a: f64, mu_n: f64) -> f64 {
    (2.0 * d_e * a * a / mu_n).sqrt()
}

/// Renormalized mass of a heavy species in the same continuum that dresses
/// the electron; the nuclear analogue of the electron mass shift.
pub fn proton_renormalized_mass(modes: &ModeContinuum, proton: &Species) -> Result<f64> {
    let d = coupling_vector(modes, proton);
    let g = multimode_coupling_g(modes, &d)?;
    renormalized_mass(proton.mass, g)
}

/// Molecule for the matter-only comparison setting: both the electron and
/// the nuclear mass replaced by their continuum-renormalized values.
pub fn renormalized_h2_model(model: &H2Model, modes: &ModeContinuum) -> Result<H2Model> {
    let electron = Species::new(model.m_el, 1.0, 1)?;
    let d = coupling_vector(modes, &electron);
    let g = multimode_coupling_g(modes, &d)?;
    let m_el = renormalized_mass(model.m_el, g)?;
    let proton = Species::new(model.m_nuc, 1.0, 1)?;
    let m_nuc = proton_renormalized_mass(modes, &proton)?;
    H2Model::new(model.a_ee, model.a_en, m_nuc)?.with_electron_mass(m_el)
}
