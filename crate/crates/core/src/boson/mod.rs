//! Bosonized dynamics: the electron spin coupled to the ring's magnon modes.
//!
//! `H = sum_k omega_k n_k + (Omega/2) sigma_z + g (sigma_+ b_N + h.c.)
//!      + g (sigma_+ sum_{k != N} chi_k b_k + h.c.)` with `g = lambda sqrt(s / 2N)`.

mod basis;
mod hamiltonian;
mod pulse;

use std::sync::Arc;

use num_complex::Complex64 as C64;

pub use basis::{BasisLabel, FockBasis, JointState};
pub use hamiltonian::{build_boson_hamiltonian, evolve_constant, BosonHamiltonian};
pub use pulse::{evolve_pulsed, PulseKind, PulseShape};

use crate::error::{Error, Result};
use crate::model::{dispersion, effective_coupling, ChiSpectrum, PhysicalParams};

pub const DEFAULT_CHI_THRESHOLD: f64 = 1e-8;
pub const DEFAULT_MAX_AMPLITUDES: usize = 2_000_000;
/// Largest excitation-sector block that is diagonalized densely.
pub const DEFAULT_MAX_BLOCK: usize = 4096;

#[derive(Clone, Debug)]
pub struct BosonModel {
    params: PhysicalParams,
    chi: ChiSpectrum,
    fock_cutoff: u32,
    active_modes: Vec<usize>,
    max_excitations: u32,
    max_amplitudes: usize,
    max_block: usize,
}

impl BosonModel {
    /// Single-excitation model with cutoff 1 and spectators pruned at
    /// `|chi_k| < 1e-8`.
    pub fn new(params: PhysicalParams, chi: ChiSpectrum) -> Result<Self> {
        params.validate()?;
        if chi.n() != params.n {
            return Err(Error::domain(format!(
                "chi spectrum has {} modes, params have N = {}",
                chi.n(),
                params.n
            )));
        }
        let active_modes = active_by_threshold(&chi, DEFAULT_CHI_THRESHOLD);
        Ok(BosonModel {
            params,
            chi,
            fock_cutoff: 1,
            active_modes,
            max_excitations: 1,
            max_amplitudes: DEFAULT_MAX_AMPLITUDES,
            max_block: DEFAULT_MAX_BLOCK,
        })
    }

    /// Homogeneous coupling: only the memory mode interacts.
    pub fn homogeneous(params: PhysicalParams) -> Result<Self> {
        let n = params.n;
        BosonModel::new(params, ChiSpectrum::homogeneous(n))
    }

    pub fn with_fock_cutoff(mut self, cutoff: u32) -> Result<Self> {
        if cutoff < 1 {
            return Err(Error::domain("Fock cutoff must be >= 1"));
        }
        self.fock_cutoff = cutoff;
        Ok(self)
    }

    /// Keeps spectators with `|chi_k| >= threshold`; the memory mode always stays.
    pub fn with_chi_threshold(mut self, threshold: f64) -> Self {
        self.active_modes = active_by_threshold(&self.chi, threshold);
        self
    }

    /// Explicit active set; mode `N` is added if missing.
    pub fn with_active_modes(mut self, modes: impl IntoIterator<Item = usize>) -> Result<Self> {
        let n = self.params.n;
        let mut modes: Vec<usize> = modes.into_iter().collect();
        if let Some(&bad) = modes.iter().find(|&&k| k == 0 || k > n) {
            return Err(Error::domain(format!("mode {bad} outside 1..={n}")));
        }
        modes.push(n);
        modes.sort_unstable();
        modes.dedup();
        self.active_modes = modes;
        Ok(self)
    }

    /// All `N` modes active.
    pub fn with_all_modes(self) -> Result<Self> {
        let n = self.params.n;
        self.with_active_modes(1..=n)
    }

    pub fn with_max_excitations(mut self, max: u32) -> Self {
        self.max_excitations = max;
        self
    }

    pub fn with_amplitude_cap(mut self, cap: usize) -> Self {
        self.max_amplitudes = cap;
        self
    }

    pub fn with_block_cap(mut self, cap: usize) -> Self {
        self.max_block = cap;
        self
    }

    /// Same model with a different hyperfine scale; `chi` is unchanged.
    pub fn with_lambda(&self, lambda: f64) -> Result<Self> {
        Ok(BosonModel {
            params: self.params.with_lambda(lambda)?,
            ..self.clone()
        })
    }

    /// Same basis and parameters with every spectator coupling removed.
    pub fn homogeneous_counterpart(&self) -> Self {
        BosonModel {
            chi: ChiSpectrum::homogeneous(self.params.n),
            ..self.clone()
        }
    }

    pub fn params(&self) -> &PhysicalParams {
        &self.params
    }

    pub fn chi(&self) -> &ChiSpectrum {
        &self.chi
    }

    pub fn fock_cutoff(&self) -> u32 {
        self.fock_cutoff
    }

    pub fn active_modes(&self) -> &[usize] {
        &self.active_modes
    }

    pub fn max_excitations(&self) -> u32 {
        self.max_excitations
    }

    pub fn memory_mode(&self) -> usize {
        self.params.n
    }

    /// `sigma_+ b_k` coefficient: `g` for the memory mode, `g chi_k` for spectators.
    pub fn coupling(&self, k: usize) -> C64 {
        let g = effective_coupling(&self.params);
        if k == self.params.n {
            C64::new(g, 0.0)
        } else {
            self.chi.get(k) * g
        }
    }

    pub fn frequency(&self, k: usize) -> f64 {
        dispersion(&self.params, k).expect("active modes are in range")
    }

    pub fn basis(&self) -> Result<Arc<FockBasis>> {
        FockBasis::new(
            self.active_modes.clone(),
            self.fock_cutoff,
            self.max_excitations,
            self.max_amplitudes,
        )
        .map(Arc::new)
    }

    /// `(a|+> + b|->) (x) vacuum` in this model's basis.
    pub fn vacuum_state(&self, electron: [C64; 2]) -> Result<JointState> {
        JointState::product(self.basis()?, electron, &[])
    }
}

fn active_by_threshold(chi: &ChiSpectrum, threshold: f64) -> Vec<usize> {
    let mut modes: Vec<usize> = chi
        .spectators()
        .filter(|(_, c)| c.norm() >= threshold)
        .map(|(k, _)| k)
        .collect();
    modes.push(chi.n());
    modes
}

/// `<b_k^dag b_k>` in `state`.
pub fn occupation(state: &JointState, k: usize) -> Result<f64> {
    state.occupation(k)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::{chi_spectrum, gaussian_profile, Spin};

    #[test]
    fn threshold_keeps_memory_mode() {
        let p = PhysicalParams::zero_field(6, Spin::HALF, 1.0, 1.0).unwrap();
        let m = BosonModel::homogeneous(p.clone()).unwrap();
        assert_eq!(m.active_modes(), &[6]);
        let chi = chi_spectrum(&gaussian_profile(6, 1.0, 1.0).unwrap()).unwrap();
        let m = BosonModel::new(p, chi).unwrap();
        assert_eq!(m.active_modes(), &[1, 2, 3, 4, 5, 6]);
        let m = m.with_chi_threshold(1.0);
        assert_eq!(m.active_modes(), &[6]);
    }

    #[test]
    fn rejects_bad_inputs() {
        let p = PhysicalParams::zero_field(6, Spin::HALF, 1.0, 1.0).unwrap();
        assert!(BosonModel::new(p.clone(), ChiSpectrum::homogeneous(5)).is_err());
        let m = BosonModel::homogeneous(p).unwrap();
        assert!(m.clone().with_fock_cutoff(0).is_err());
        assert!(m.with_active_modes([7]).is_err());
    }
}
