//! Ground and excited states of assembled coupled Hamiltonians.

use super::FockBasis;
use crate::error::{Error, Result};
use crate::linalg::{compensated_sum, dense_sym_eig, krylov_lowest, SparseSymmetric};
use crate::matter::MatterSpectrum;

/// Orders up to this are solved densely; larger ones go through the Krylov
/// solver. The crossover favors dense while a full factorization stays in the
/// seconds range.
pub const COUPLED_DENSE_CUTOFF: usize = 4096;

const COUPLED_TOL: f64 = 1e-11;
const COUPLED_SEED: u64 = 0x636f7570_6c6564;

/// One eigenstate of a coupled Hamiltonian, with the basis bookkeeping needed
/// to address amplitudes as `(matter state, photon signature)`.
#[derive(Debug, Clone)]
pub struct CoupledState {
    energy: f64,
    residual: f64,
    amplitudes: Vec<f64>,
    n_matter: usize,
    fock: FockBasis,
}

impl CoupledState {
    #[cfg(test)]
    pub(crate) fn synthetic(
        energy: f64,
        amplitudes: Vec<f64>,
        n_matter: usize,
        fock: FockBasis,
    ) -> Self {
        assert_eq!(amplitudes.len(), n_matter * fock.dim());
        Self {
            energy,
            residual: 0.0,
            amplitudes,
            n_matter,
            fock,
        }
    }

    pub fn energy(&self) -> f64 {
        self.energy
    }

    /// Residual norm `|H c - E c|` reported by the eigensolver.
    pub fn residual(&self) -> f64 {
        self.residual
    }

    pub fn n_matter(&self) -> usize {
        self.n_matter
    }

    pub fn fock(&self) -> &FockBasis {
        &self.fock
    }

    /// Flat amplitude vector, Fock-major: entry `f * n_matter + i`.
    pub fn amplitudes(&self) -> &[f64] {
        &self.amplitudes
    }

    pub fn amplitude(&self, matter: usize, fock_index: usize) -> f64 {
        self.amplitudes[fock_index * self.n_matter + matter]
    }

    /// Weight of each matter state, summed over photon signatures.
    pub fn matter_populations(&self) -> Vec<f64> {
        let mut w = vec![0.0; self.n_matter];
        for (idx, c) in self.amplitudes.iter().enumerate() {
            w[idx % self.n_matter] += c * c;
        }
        w
    }

    /// Weight of the photon vacuum, summed over matter states.
    pub fn vacuum_weight(&self) -> f64 {
        compensated_sum(self.amplitudes[..self.n_matter].iter().map(|c| c * c))
    }

    /// Expectation of a matter operator given by its matrix in the truncated
    /// basis, row-major `n_matter x n_matter`.
    pub fn matter_expectation(&self, op: &[f64]) -> Result<f64> {
        let n = self.n_matter;
        if op.len() != n * n {
            return Err(Error::DimensionMismatch(format!(
                "matter operator has {} entries, basis squares to {}",
                op.len(),
                n * n
            )));
        }
        let fock_dim = self.fock.dim();
        Ok(compensated_sum((0..fock_dim).flat_map(|f| {
            let block = &self.amplitudes[f * n..(f + 1) * n];
            (0..n).map(move |i| {
                block[i]
                    * (0..n).map(|j| op[i * n + j] * block[j]).sum::<f64>()
            })
        })))
    }

    /// Expectation of the matter dipole operator.
    pub fn dipole_expectation(&self, spectrum: &MatterSpectrum) -> Result<f64> {
        let n = spectrum.n_states();
        if n != self.n_matter {
            return Err(Error::DimensionMismatch(format!(
                "spectrum has {n} states, state stores {}",
                self.n_matter
            )));
        }
        let op: Vec<f64> = (0..n * n)
            .map(|e| spectrum.dipole(e / n, e % n))
            .collect();
        self.matter_expectation(&op)
    }

    fn validate(&self) -> Result<()> {
        let norm = compensated_sum(self.amplitudes.iter().map(|c| c * c));
        if (norm - 1.0).abs() > 1e-10 {
            return Err(Error::Backend(format!(
                "coupled state norm drifted to {norm}"
            )));
        }
        Ok(())
    }
}

/// Lowest `count` eigenstates of an assembled coupled Hamiltonian whose basis
/// is `fock` tensored with `n_matter` matter states. Dense through
/// [`COUPLED_DENSE_CUTOFF`], Krylov beyond.
pub fn eigenstates(
    h: &SparseSymmetric,
    fock: &FockBasis,
    n_matter: usize,
    count: usize,
) -> Result<Vec<CoupledState>> {
    let dim = n_matter.checked_mul(fock.dim()).ok_or_else(|| {
        Error::DimensionMismatch("matter-photon product dimension overflows".into())
    })?;
    if h.order() != dim {
        return Err(Error::DimensionMismatch(format!(
            "operator order {} does not match {} matter states x {} photon signatures",
            h.order(),
            n_matter,
            fock.dim()
        )));
    }
    if count == 0 {
        return Err(Error::InvalidInput("must request at least one state".into()));
    }

    let (values, vectors, residuals) = if dim <= COUPLED_DENSE_CUTOFF {
        if count > dim {
            return Err(Error::InvalidInput(format!(
                "requested {count} states from an order-{dim} operator"
            )));
        }
        let eig = dense_sym_eig(&h.to_dense())?;
        (
            eig.values[..count].to_vec(),
            eig.vectors[..count].to_vec(),
            eig.residuals[..count].to_vec(),
        )
    } else {
        let eig = krylov_lowest(h, count, COUPLED_TOL, COUPLED_SEED)?;
        (eig.values, eig.vectors, eig.residuals)
    };

    values
        .into_iter()
        .zip(vectors)
        .zip(residuals)
        .map(|((energy, amplitudes), residual)| {
            let state = CoupledState {
                energy,
                residual,
                amplitudes,
                n_matter,
                fock: fock.clone(),
            };
            state.validate()?;
            Ok(state)
        })
        .collect()
}

/// Lowest eigenstate.
pub fn ground_state(
    h: &SparseSymmetric,
    fock: &FockBasis,
    n_matter: usize,
) -> Result<CoupledState> {
    Ok(eigenstates(h, fock, n_matter, 1)?.pop().expect("one state"))
}

/// The `k` states above the ground state, ascending.
pub fn excited_states(
    h: &SparseSymmetric,
    fock: &FockBasis,
    n_matter: usize,
    k: usize,
) -> Result<Vec<CoupledState>> {
    if k == 0 {
        return Err(Error::InvalidInput(
            "must request at least one excited state".into(),
        ));
    }
    let mut all = eigenstates(h, fock, n_matter, k + 1)?;
    all.remove(0);
    Ok(all)
}
