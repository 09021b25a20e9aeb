//! Real-space 1D matter systems: grids, eighth-order finite-difference
//! kinetic operators, the soft-cosh atom with its analytic spectrum, the
//! clamped-nuclei H2 molecule on a two-electron product grid, and the
//! truncated eigenbasis the light-matter assembly consumes.

use crate::error::{Error, Result};
use crate::linalg::{
    compensated_sum, dense_sym_eig, dot, krylov_lowest, SparseBuilder, SparseSymmetric,
    SymmetricDense,
};
use serde::{Deserialize, Serialize};

/// Second-derivative stencil weights for offsets 0..=4, to be divided by
/// `dx^2`; eighth-order accurate.
const STENCIL: [f64; 5] = [
    -205.0 / 72.0,
    8.0 / 5.0,
    -1.0 / 5.0,
    8.0 / 315.0,
    -1.0 / 560.0,
];

/// Largest operator order solved densely; larger problems go through the
/// sparse Krylov path.
const DENSE_CUTOFF: usize = 3200;

const KRYLOV_TOL: f64 = 1e-11;
const KRYLOV_SEED: u64 = 0x6d6174746572;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Boundary {
    /// Wavefunction clamped to zero outside the box.
    HardWall,
    /// Stencil wraps around; used for plane-wave validation.
    Periodic,
}

/// Uniform 1D grid.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Grid1D {
    x_min: f64,
    dx: f64,
    n_x: usize,
    boundary: Boundary,
}

impl Grid1D {
    pub fn new(x_min: f64, dx: f64, n_x: usize, boundary: Boundary) -> Result<Self> {
        if !(dx > 0.0) || !dx.is_finite() || !x_min.is_finite() {
            return Err(Error::InvalidInput(format!(
                "grid needs finite x_min and positive dx, got x_min={x_min}, dx={dx}"
            )));
        }
        if n_x < 9 {
            return Err(Error::InvalidInput(format!(
                "grid needs at least 9 points to support the stencil, got {n_x}"
            )));
        }
        Ok(Self {
            x_min,
            dx,
            n_x,
            boundary,
        })
    }

    /// Grid symmetric about the origin: `x_i = (i - (n_x - 1)/2) dx`.
    pub fn centered(n_x: usize, dx: f64, boundary: Boundary) -> Result<Self> {
        let x_min = -0.5 * (n_x as f64 - 1.0) * dx;
        Self::new(x_min, dx, n_x, boundary)
    }

    pub fn x_min(&self) -> f64 {
        self.x_min
    }

    pub fn dx(&self) -> f64 {
        self.dx
    }

    pub fn n_x(&self) -> usize {
        self.n_x
    }

    pub fn boundary(&self) -> Boundary {
        self.boundary
    }

    pub fn point(&self, i: usize) -> f64 {
        self.x_min + i as f64 * self.dx
    }

    pub fn points(&self) -> Vec<f64> {
        (0..self.n_x).map(|i| self.point(i)).collect()
    }
}

/// Pushes the off-diagonal kinetic couplings `-(1/2 mass) d^2/dx^2` for every
/// line of a (possibly product) grid, one line point indexed by `index(line,
/// pos)`. Diagonal contributions are accumulated into `diag` instead of being
/// pushed, so multiple kinetic directions can share one diagonal pass.
fn add_kinetic_lines(
    builder: &mut SparseBuilder,
    diag: &mut [f64],
    lines: usize,
    line_len: usize,
    boundary: Boundary,
    mass: f64,
    dx: f64,
    index: impl Fn(usize, usize) -> usize,
) {
    let scale = -1.0 / (2.0 * mass * dx * dx);
    for line in 0..lines {
        for pos in 0..line_len {
            diag[index(line, pos)] += scale * STENCIL[0];
        }
        for k in 1..=4 {
            let coeff = scale * STENCIL[k];
            for pos in 0..line_len {
                let partner = match boundary {
                    Boundary::HardWall => {
                        if pos + k >= line_len {
                            continue;
                        }
                        pos + k
                    }
                    Boundary::Periodic => (pos + k) % line_len,
                };
                builder.push(index(line, pos), index(line, partner), coeff);
            }
        }
    }
}

/// Kinetic operator `-(1/2 mass) d^2/dx^2` as a 9-point banded matrix.
pub fn fd_kinetic(grid: &Grid1D, mass: f64) -> Result<SparseSymmetric> {
    hamiltonian_1d(grid, mass, &vec![0.0; grid.n_x()])
}

/// Single-particle Hamiltonian `-(1/2 mass) d^2/dx^2 + V` for a sampled
/// potential.
pub fn hamiltonian_1d(grid: &Grid1D, mass: f64, potential: &[f64]) -> Result<SparseSymmetric> {
    if potential.len() != grid.n_x() {
        return Err(Error::DimensionMismatch(format!(
            "{} potential samples for {} grid points",
            potential.len(),
            grid.n_x()
        )));
    }
    if !(mass > 0.0) {
        return Err(Error::InvalidInput(format!(
            "mass must be positive, got {mass}"
        )));
    }
    crate::linalg::check_finite(potential, "potential samples")?;
    let n = grid.n_x();
    let mut b = SparseBuilder::with_capacity(n, 5 * n);
    let mut diag = potential.to_vec();
    add_kinetic_lines(
        &mut b,
        &mut diag,
        1,
        n,
        grid.boundary(),
        mass,
        grid.dx(),
        |_, pos| pos,
    );
    for (i, v) in diag.iter().enumerate() {
        b.push(i, i, *v);
    }
    b.finish()
}

/// Soft reflectionless well `V(x) = -v0 / cosh^2(k0 x)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AtomModel {
    pub v0: f64,
    pub k0: f64,
    pub mass: f64,
}

impl AtomModel {
    pub fn new(v0: f64, k0: f64, mass: f64) -> Result<Self> {
        if !(v0 > 0.0) || !(k0 > 0.0) || !(mass > 0.0) {
            return Err(Error::InvalidInput(format!(
                "atom model needs positive v0, k0, mass; got {v0}, {k0}, {mass}"
            )));
        }
        Ok(Self { v0, k0, mass })
    }

    /// The deep shallow-gradient well used throughout: `v0 = 10`,
    /// `k0 = 0.05`, unit mass.
    pub fn standard() -> Self {
        Self {
            v0: 10.0,
            k0: 0.05,
            mass: 1.0,
        }
    }

    /// Same well with a different particle mass.
    pub fn with_mass(self, mass: f64) -> Self {
        Self { mass, ..self }
    }

    pub fn potential(&self, x: f64) -> f64 {
        let c = (self.k0 * x).cosh();
        -self.v0 / (c * c)
    }

    /// Number of bound levels admitted by the analytic spectrum.
    pub fn bound_count(&self) -> usize {
        let s = (1.0 + 8.0 * self.mass * self.v0 / (self.k0 * self.k0)).sqrt();
        let t = 0.5 * (s - 1.0);
        if t <= 0.0 {
            0
        } else if t.fract() == 0.0 {
            t as usize
        } else {
            t.floor() as usize + 1
        }
    }
}

/// Atom Hamiltonian on the grid. Logs a warning when the box is narrow enough
/// that the potential at the edge exceeds `1e-8 v0`; the eigenvalue error from
/// the truncated tail is exponentially small long before that threshold, so
/// this is a diagnostic rather than a failure.
pub fn atom_hamiltonian(grid: &Grid1D, model: &AtomModel) -> Result<SparseSymmetric> {
    let edge = model
        .potential(grid.point(0))
        .abs()
        .max(model.potential(grid.point(grid.n_x() - 1)).abs());
    if edge >= 1e-8 * model.v0 {
        log::warn!(
            "atom grid may be narrow: |V| at the box edge is {:.2e} of the well depth",
            edge / model.v0
        );
    }
    let potential: Vec<f64> = grid.points().iter().map(|&x| model.potential(x)).collect();
    hamiltonian_1d(grid, model.mass, &potential)
}

/// Analytic bound spectrum of the soft-cosh well,
/// `E_n = -(k0^2 / 8 m) (sqrt(1 + 8 m v0 / k0^2) - (1 + 2n))^2`,
/// for `n = 0..n_levels`.
pub fn atom_analytic_levels(model: &AtomModel, n_levels: usize) -> Result<Vec<f64>> {
    let bound = model.bound_count();
    if n_levels > bound {
        return Err(Error::InvalidInput(format!(
            "requested {n_levels} levels but the well only binds {bound}"
        )));
    }
    let s = (1.0 + 8.0 * model.mass * model.v0 / (model.k0 * model.k0)).sqrt();
    let prefactor = model.k0 * model.k0 / (8.0 * model.mass);
    Ok((0..n_levels)
        .map(|n| {
            let r = s - (1.0 + 2.0 * n as f64);
            -prefactor * r * r
        })
        .collect())
}

/// Two-electron molecule with clamped nuclei: soft-Coulomb interactions on a
/// product grid, reduced masses from the nuclear mass.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct H2Model {
    /// Electron-electron softening (enters as `+a_ee` under the square root).
    pub a_ee: f64,
    /// Electron-nucleus softening.
    pub a_en: f64,
    /// Nuclear mass in electron masses.
    pub m_nuc: f64,
    /// Electron mass; 1 for the bare molecule, larger when the model runs
    /// with a renormalized mass.
    pub m_el: f64,
}

impl H2Model {
    pub fn new(a_ee: f64, a_en: f64, m_nuc: f64) -> Result<Self> {
        if !(a_ee > 0.0) || !(a_en > 0.0) || !(m_nuc > 0.0) {
            return Err(Error::InvalidInput(format!(
                "H2 model needs positive softenings and nuclear mass; got {a_ee}, {a_en}, {m_nuc}"
            )));
        }
        Ok(Self {
            a_ee,
            a_en,
            m_nuc,
            m_el: 1.0,
        })
    }

    /// Softenings 2 and 1, nuclear mass 1836, bare electrons.
    pub fn standard() -> Self {
        Self {
            a_ee: 2.0,
            a_en: 1.0,
            m_nuc: 1836.0,
            m_el: 1.0,
        }
    }

    pub fn with_electron_mass(mut self, m_el: f64) -> Result<Self> {
        if !(m_el > 0.0) || !m_el.is_finite() {
            return Err(Error::InvalidInput(format!(
                "electron mass must be positive, got {m_el}"
            )));
        }
        self.m_el = m_el;
        Ok(self)
    }

    /// Reduced electron mass `m 2 M / (m + 2 M)` in the center-of-mass frame.
    pub fn mu_e(&self) -> f64 {
        self.m_el * 2.0 * self.m_nuc / (self.m_el + 2.0 * self.m_nuc)
    }

    /// Reduced nuclear mass `M / 2` for the internuclear coordinate.
    pub fn mu_n(&self) -> f64 {
        0.5 * self.m_nuc
    }

    /// Clamped-nuclei potential at electron positions `(x1, x2)` and
    /// separation `r`, nuclear repulsion `1/r` included.
    ///
    /// The attraction terms are grouped per electron so that exchanging the
    /// electrons or mirroring the grid permutes only commutative additions,
    /// keeping the sampled potential bitwise symmetric.
    pub fn potential(&self, x1: f64, x2: f64, r: f64) -> f64 {
        let ee = 1.0 / ((x1 - x2).powi(2) + self.a_ee).sqrt();
        let en = |x: f64, xn: f64| -1.0 / ((x - xn).powi(2) + self.a_en).sqrt();
        let wells_1 = en(x1, 0.5 * r) + en(x1, -0.5 * r);
        let wells_2 = en(x2, 0.5 * r) + en(x2, -0.5 * r);
        ee + (wells_1 + wells_2) + 1.0 / r
    }
}

/// Electronic H2 Hamiltonian at clamped separation `r` on the `(x1, x2)`
/// product grid (order `n_x^2`), nuclear repulsion included as a scalar
/// shift. The nuclear kinetic term is excluded by construction.
pub fn h2_electronic_hamiltonian(
    r: f64,
    grid: &Grid1D,
    model: &H2Model,
) -> Result<SparseSymmetric> {
    if !(r > 0.0) || !r.is_finite() {
        return Err(Error::InvalidInput(format!(
            "internuclear separation must be positive, got {r}"
        )));
    }
    let n = grid.n_x();
    let order = n * n;
    if order > u32::MAX as usize {
        return Err(Error::DimensionOverflow {
            requested: order,
            max: u32::MAX as usize,
        });
    }
    let points = grid.points();
    let mut diag = Vec::with_capacity(order);
    for &x1 in &points {
        for &x2 in &points {
            diag.push(model.potential(x1, x2, r));
        }
    }
    let mut b = SparseBuilder::with_capacity(order, 9 * order);
    let mu_e = model.mu_e();
    // Electron 2 runs along contiguous indices, electron 1 across blocks.
    add_kinetic_lines(
        &mut b,
        &mut diag,
        n,
        n,
        grid.boundary(),
        mu_e,
        grid.dx(),
        |line, pos| line * n + pos,
    );
    add_kinetic_lines(
        &mut b,
        &mut diag,
        n,
        n,
        grid.boundary(),
        mu_e,
        grid.dx(),
        |line, pos| pos * n + line,
    );
    for (i, v) in diag.iter().enumerate() {
        b.push(i, i, *v);
    }
    b.finish()
}

/// Dipole samples `-x_i` for a single electron on the grid.
pub fn atom_dipole(grid: &Grid1D) -> Vec<f64> {
    grid.points().iter().map(|&x| -x).collect()
}

/// Dipole samples `-(x1 + x2)` on the product grid; the nuclear contributions
/// at `+-r/2` cancel identically for equal charges in the clamped frame.
pub fn h2_dipole(grid: &Grid1D) -> Vec<f64> {
    let points = grid.points();
    let mut d = Vec::with_capacity(points.len() * points.len());
    for &x1 in &points {
        for &x2 in &points {
            d.push(-(x1 + x2));
        }
    }
    d
}

/// Truncated matter eigenbasis with grid-resolved states and dipole matrices.
#[derive(Debug, Clone)]
pub struct MatterBasis {
    grid: Grid1D,
    measure: f64,
    energies: Vec<f64>,
    states: Vec<Vec<f64>>,
    dipole: SymmetricDense,
    dipole_sq: SymmetricDense,
}

impl MatterBasis {
    /// Eigenvalues, ascending.
    pub fn energies(&self) -> &[f64] {
        &self.energies
    }

    /// Grid-sampled wavefunctions, normalized under the measure-weighted
    /// inner product.
    pub fn states(&self) -> &[Vec<f64>] {
        &self.states
    }

    /// `<i| mu |j>`.
    pub fn dipole(&self) -> &SymmetricDense {
        &self.dipole
    }

    /// `<i| mu^2 |j>`, needed by the dipole self-energy.
    pub fn dipole_sq(&self) -> &SymmetricDense {
        &self.dipole_sq
    }

    pub fn n_states(&self) -> usize {
        self.energies.len()
    }

    pub fn grid(&self) -> &Grid1D {
        &self.grid
    }

    /// Integration weight per grid cell: `dx` in 1D, `dx^2` on the product
    /// grid.
    pub fn measure(&self) -> f64 {
        self.measure
    }

    /// The serializable reduction that the light-matter assembly consumes.
    pub fn spectrum(&self) -> MatterSpectrum {
        let n = self.n_states();
        let mut dipole = Vec::with_capacity(n * n);
        let mut dipole_sq = Vec::with_capacity(n * n);
        for i in 0..n {
            for j in 0..n {
                dipole.push(self.dipole.entry(i, j));
                dipole_sq.push(self.dipole_sq.entry(i, j));
            }
        }
        MatterSpectrum {
            n_states: n,
            energies: self.energies.clone(),
            dipole,
            dipole_sq,
        }
    }
}

/// Matter input to the coupled light-matter problem: energies and dipole
/// matrix elements, without the grid-resolved wavefunctions. Cheap to cache
/// and serialize.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MatterSpectrum {
    n_states: usize,
    energies: Vec<f64>,
    dipole: Vec<f64>,
    dipole_sq: Vec<f64>,
}

impl MatterSpectrum {
    pub fn n_states(&self) -> usize {
        self.n_states
    }

    pub fn energies(&self) -> &[f64] {
        &self.energies
    }

    pub fn energy(&self, i: usize) -> f64 {
        self.energies[i]
    }

    pub fn dipole(&self, i: usize, j: usize) -> f64 {
        self.dipole[i * self.n_states + j]
    }

    pub fn dipole_sq(&self, i: usize, j: usize) -> f64 {
        self.dipole_sq[i * self.n_states + j]
    }

    /// Validates internal consistency after deserialization.
    pub fn validate(&self) -> Result<()> {
        let n = self.n_states;
        if self.energies.len() != n || self.dipole.len() != n * n || self.dipole_sq.len() != n * n
        {
            return Err(Error::DimensionMismatch(
                "matter spectrum field lengths disagree with the state count".into(),
            ));
        }
        crate::linalg::check_finite(&self.energies, "matter energies")?;
        crate::linalg::check_finite(&self.dipole, "matter dipole matrix")?;
        crate::linalg::check_finite(&self.dipole_sq, "matter squared-dipole matrix")?;
        if self.energies.windows(2).any(|w| w[0] > w[1]) {
            return Err(Error::InvalidInput(
                "matter energies must be ascending".into(),
            ));
        }
        for i in 0..n {
            for j in 0..i {
                if self.dipole[i * n + j] != self.dipole[j * n + i]
                    || self.dipole_sq[i * n + j] != self.dipole_sq[j * n + i]
                {
                    return Err(Error::InvalidInput(
                        "matter dipole matrices must be symmetric".into(),
                    ));
                }
            }
        }
        Ok(())
    }
}

/// Solves for the lowest `n_s` states of a matter Hamiltonian and builds the
/// measure-normalized basis with dipole and squared-dipole matrices.
///
/// `dipole_diag` holds the dipole operator sampled on the (flattened) grid;
/// its length fixes whether the operator lives on the 1D grid or the product
/// grid. Problems up to order 3200 are solved densely; beyond that a Krylov
/// solver with a fixed seed is used, which caps `n_s` at a third of the
/// order.
pub fn eigensolve_matter(
    h: &SparseSymmetric,
    grid: &Grid1D,
    n_s: usize,
    dipole_diag: &[f64],
) -> Result<MatterBasis> {
    let order = h.order();
    if dipole_diag.len() != order {
        return Err(Error::DimensionMismatch(format!(
            "{} dipole samples for operator order {}",
            dipole_diag.len(),
            order
        )));
    }
    let measure = if order == grid.n_x() {
        grid.dx()
    } else if order == grid.n_x() * grid.n_x() {
        grid.dx() * grid.dx()
    } else {
        return Err(Error::DimensionMismatch(format!(
            "operator order {} fits neither the grid ({}) nor its product square",
            order,
            grid.n_x()
        )));
    };
    if n_s == 0 {
        return Err(Error::InvalidInput("must request at least one state".into()));
    }

    let (values, vectors) = if order <= DENSE_CUTOFF {
        if n_s > order {
            return Err(Error::InvalidInput(format!(
                "requested {n_s} states from an order-{order} operator"
            )));
        }
        let eig = dense_sym_eig(&h.to_dense())?;
        let values = eig.values[..n_s].to_vec();
        let vectors = eig.vectors[..n_s].to_vec();
        (values, vectors)
    } else {
        let eig = krylov_lowest(h, n_s, KRYLOV_TOL, KRYLOV_SEED)?;
        (eig.values, eig.vectors)
    };

    let norm = 1.0 / measure.sqrt();
    let states: Vec<Vec<f64>> = vectors
        .into_iter()
        .map(|mut v| {
            crate::linalg::scale(norm, &mut v);
            v
        })
        .collect();

    for (i, a) in states.iter().enumerate() {
        for (j, b) in states.iter().enumerate().take(i + 1) {
            let want = if i == j { 1.0 } else { 0.0 };
            let overlap = measure * dot(a, b);
            if (overlap - want).abs() > 1e-8 {
                return Err(Error::Backend(format!(
                    "matter basis lost orthonormality: <psi_{i}|psi_{j}> = {overlap}"
                )));
            }
        }
    }

    let weighted =
        |a: &[f64], b: &[f64], w: &dyn Fn(f64) -> f64| -> f64 {
            measure
                * compensated_sum(
                    a.iter()
                        .zip(b)
                        .zip(dipole_diag)
                        .map(|((&ai, &bi), &di)| ai * w(di) * bi),
                )
        };
    let dipole = SymmetricDense::from_fn(n_s, |i, j| weighted(&states[i], &states[j], &|d| d));
    let dipole_sq =
        SymmetricDense::from_fn(n_s, |i, j| weighted(&states[i], &states[j], &|d| d * d));

    Ok(MatterBasis {
        grid: *grid,
        measure,
        energies: values,
        states,
        dipole,
        dipole_sq,
    })
}
