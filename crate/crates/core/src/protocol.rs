//! Write/read protocol: swap the electron qubit into the memory mode and back.
//!
//! Basis convention: electron `|->` maps to the magnon vacuum `|0_N>` (the dark
//! state does not move) and `|+>` maps to `-i |1_N>` after one swap time. In
//! index notation this is `w_nm = rho_nm exp(i (m - n) pi / 2)`
//! with Fock level `1` carrying the `|+>` label.
//!
//! Mixed inputs are handled by purification: each eigenvector of `rho` is
//! evolved as a weighted branch and the branches are summed when reducing.

use std::f64::consts::FRAC_PI_2;

use nalgebra::Matrix2;
use num_complex::Complex64 as C64;
use serde::{Deserialize, Serialize};

use crate::boson::{build_boson_hamiltonian, BosonHamiltonian, BosonModel, JointState};
use crate::density::{trace_distance, uhlmann_fidelity, Electron, Mat2, PauliState, QubitState, StoredState};
use crate::error::{Error, Result};
use crate::model::{swap_time, PhysicalParams};

/// Isometry `M` with `w = M rho M^dag`: columns are electron `|+>, |->`, rows Fock `|0>, |1>`.
pub fn ideal_store_isometry() -> Mat2 {
    let zero = C64::default();
    Matrix2::new(zero, C64::new(1.0, 0.0), C64::new(0.0, -1.0), zero)
}

/// Fixed unitary of a store followed by a read: `|+> -> -|+>`, `|-> -> |->`.
pub fn ideal_round_trip_unitary() -> Mat2 {
    Mat2::from_diagonal(&nalgebra::Vector2::new(C64::new(-1.0, 0.0), C64::new(1.0, 0.0)))
}

/// Analytic stored state `w_nm = rho_nm exp(i (m - n) pi / 2)`.
pub fn ideal_store_map(rho: &QubitState) -> StoredState {
    let m = ideal_store_isometry();
    let w = m * rho.matrix() * m.adjoint();
    StoredState::with_tolerance(w, 1e-12).expect("unitary image of a density matrix")
}

/// Root Uhlmann fidelity between `w_out` and the ideal image of `rho_in`.
pub fn map_fidelity(rho_in: &QubitState, w_out: &StoredState) -> f64 {
    uhlmann_fidelity(ideal_store_map(rho_in).matrix(), w_out.matrix())
}

/// The evolved purification of a stored electron state.
#[derive(Clone, Debug)]
pub struct PurifiedState {
    /// Branch `i` is `sqrt(p_i) |psi_i(t)>`; they are orthogonal in the reference.
    branches: Vec<JointState>,
    spectators: Vec<(usize, u32)>,
    elapsed: f64,
}

impl PurifiedState {
    pub fn branches(&self) -> &[JointState] {
        &self.branches
    }

    /// Time evolved since the write started.
    pub fn elapsed(&self) -> f64 {
        self.elapsed
    }

    pub fn electron_state(&self) -> Result<QubitState> {
        let rho = self
            .branches
            .iter()
            .fold(Mat2::zeros(), |acc, b| acc + b.electron_matrix());
        QubitState::with_tolerance(rho, 1e-10)
    }

    fn memory_matrix(&self, memory: usize) -> Result<nalgebra::DMatrix<C64>> {
        let mut acc: Option<nalgebra::DMatrix<C64>> = None;
        for b in &self.branches {
            let m = b.mode_matrix(memory)?;
            acc = Some(match acc {
                Some(a) => a + m,
                None => m,
            });
        }
        acc.ok_or_else(|| Error::domain("empty purification"))
    }
}

#[derive(Clone, Debug)]
pub struct StoreOutcome {
    pub stored: StoredState,
    /// Population outside `{electron -} x {n_N <= 1} x {spectators unchanged}`.
    pub leakage: f64,
    pub t0: f64,
    pub state: PurifiedState,
}

fn check_protocol_regime(params: &PhysicalParams) -> Result<()> {
    if params.b0 != 0.0 {
        return Err(Error::Precondition(format!(
            "the swap protocol runs at B0 = 0, got B0 = {}",
            params.b0
        )));
    }
    Ok(())
}

/// Spectral purification branches `(sqrt(p_i), psi_i)` of a qubit state.
fn purify(rho: &QubitState) -> Vec<(f64, [C64; 2])> {
    let eig = rho.matrix().symmetric_eigen();
    (0..2)
        .filter(|&i| eig.eigenvalues[i] > 1e-15)
        .map(|i| {
            let v = eig.eigenvectors.column(i);
            (eig.eigenvalues[i].sqrt(), [v[0], v[1]])
        })
        .collect()
}

/// Writes `rho` into the memory mode with spectators in vacuum.
pub fn store(rho: &QubitState, model: &BosonModel) -> Result<StoreOutcome> {
    store_with_spectators(rho, model, &[])
}

/// Writes `rho` with spectator modes prepared in the Fock states `spectators`
/// (`(k, n_k)` pairs; unlisted active modes start empty).
pub fn store_with_spectators(
    rho: &QubitState,
    model: &BosonModel,
    spectators: &[(usize, u32)],
) -> Result<StoreOutcome> {
    check_protocol_regime(model.params())?;
    let memory = model.memory_mode();
    if spectators.iter().any(|&(k, n)| k == memory && n > 0) {
        return Err(Error::Precondition(
            "the memory mode must start in the vacuum".into(),
        ));
    }
    let spectators: Vec<(usize, u32)> = spectators.iter().copied().filter(|&(_, n)| n > 0).collect();
    if let Some(&(k, n)) = spectators.iter().find(|&&(_, n)| n > model.fock_cutoff()) {
        return Err(Error::domain(format!("spectator {k} occupation {n} exceeds the Fock cutoff")));
    }
    let needed = 1 + spectators.iter().map(|&(_, n)| n).sum::<u32>();
    let model = model.clone().with_max_excitations(model.max_excitations().max(needed));

    let hamiltonian = build_boson_hamiltonian(&model)?;
    let basis = hamiltonian.basis().clone();
    let t0 = swap_time(model.params());

    let branches = purify(rho)
        .into_iter()
        .map(|(weight, amps)| {
            let st = JointState::product(basis.clone(), amps, &spectators)?;
            let scaled = st.amplitudes() * C64::new(weight, 0.0);
            hamiltonian.evolve(&JointState::unchecked(basis.clone(), scaled)?, t0)
        })
        .collect::<Result<Vec<_>>>()?;

    let state = PurifiedState {
        branches,
        spectators,
        elapsed: t0,
    };
    let leakage = leakage(&state, &model)?;

    let full = state.memory_matrix(memory)?;
    let block = Mat2::new(full[(0, 0)], full[(0, 1)], full[(1, 0)], full[(1, 1)]);
    let tr = block.trace().re;
    if tr <= 0.0 {
        return Err(Error::regime("memory mode has no weight on Fock levels 0 and 1"));
    }
    let stored = StoredState::with_tolerance(block.unscale(tr), 1e-10)?;
    Ok(StoreOutcome {
        stored,
        leakage,
        t0,
        state,
    })
}

fn leakage(state: &PurifiedState, model: &BosonModel) -> Result<f64> {
    let Some(first) = state.branches.first() else {
        return Ok(0.0);
    };
    let basis = first.basis();
    let memory_pos = basis.mode_position(model.memory_mode())?;
    let mut expected = vec![0u32; basis.modes().len()];
    for &(k, n) in &state.spectators {
        expected[basis.mode_position(k)?] = n;
    }
    let inside: f64 = state
        .branches
        .iter()
        .flat_map(|b| b.populations())
        .filter(|(l, _)| {
            l.electron == Electron::Down
                && l.occupations[memory_pos] <= 1
                && l.occupations
                    .iter()
                    .zip(&expected)
                    .enumerate()
                    .all(|(i, (n, e))| i == memory_pos || n == e)
        })
        .map(|(_, p)| p)
        .sum();
    Ok((1.0 - inside).max(0.0))
}

/// Reads the memory back by evolving another `t0`; returns the electron state.
pub fn retrieve(stored: &PurifiedState, model: &BosonModel) -> Result<QubitState> {
    retrieve_state(stored, model)?.electron_state()
}

/// Like [`retrieve`] but returns the full evolved purification.
pub fn retrieve_state(stored: &PurifiedState, model: &BosonModel) -> Result<PurifiedState> {
    check_protocol_regime(model.params())?;
    let first = stored
        .branches
        .first()
        .ok_or_else(|| Error::domain("empty purification"))?;
    let model = model
        .clone()
        .with_max_excitations(first.basis().max_excitations());
    let hamiltonian = build_boson_hamiltonian(&model)?;
    let t0 = swap_time(model.params());
    evolve_branches(&hamiltonian, stored, t0)
}

fn evolve_branches(h: &BosonHamiltonian, st: &PurifiedState, t: f64) -> Result<PurifiedState> {
    Ok(PurifiedState {
        branches: st
            .branches
            .iter()
            .map(|b| h.evolve(b, t))
            .collect::<Result<_>>()?,
        spectators: st.spectators.clone(),
        elapsed: st.elapsed + t,
    })
}

/// Entanglement fidelity of store followed by retrieve against `target`.
///
/// The electron is maximally entangled with a reference qubit; the result is
/// `<Phi_U| rho_Choi |Phi_U>` with `|Phi_U> = (target (x) 1) |Phi+>`.
pub fn round_trip_process_fidelity(model: &BosonModel, target: &Mat2) -> Result<f64> {
    let half = QubitState::diagonal(0.5, 0.5)?;
    let h = std::f64::consts::FRAC_1_SQRT_2;
    let basis = model.basis()?;
    let hamiltonian = build_boson_hamiltonian(model)?;
    let t0 = swap_time(model.params());
    check_protocol_regime(model.params())?;
    let _ = half;

    // Branch r starts as |e_r> (x) vacuum, weight 1/sqrt 2.
    let evolved: Vec<JointState> = [Electron::Up, Electron::Down]
        .iter()
        .map(|&e| {
            let mut amps = [C64::default(); 2];
            amps[e.index()] = C64::new(1.0, 0.0);
            let st = JointState::product(basis.clone(), amps, &[])?;
            hamiltonian.evolve(&st, 2.0 * t0)
        })
        .collect::<Result<_>>()?;

    // Overlap with (target (x) 1)|Phi+>, resolved per magnon configuration.
    let mut by_occupation: std::collections::HashMap<&[u32], C64> = Default::default();
    for (r, branch) in evolved.iter().enumerate() {
        for (label, amp) in basis.labels().iter().zip(branch.amplitudes().iter()) {
            let phi = target[(label.electron.index(), r)] * h;
            *by_occupation.entry(label.occupations.as_slice()).or_default() += phi.conj() * amp * h;
        }
    }
    Ok(by_occupation.values().map(|z| z.norm_sqr()).sum())
}

/// Largest trace distance between `store` and [`ideal_store_map`] over the
/// tomographic Pauli inputs, plus the largest leakage seen.
pub fn store_channel_deviation(model: &BosonModel) -> Result<(f64, f64)> {
    let mut worst = (0.0f64, 0.0f64);
    for p in PauliState::TOMOGRAPHIC {
        let rho = QubitState::pauli(p);
        let out = store(&rho, model)?;
        let d = trace_distance(out.stored.matrix(), ideal_store_map(&rho).matrix());
        worst = (worst.0.max(d), worst.1.max(out.leakage));
    }
    Ok(worst)
}

/// JSON form of a complex 2x2 matrix.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ComplexMatrix {
    pub re: Vec<Vec<f64>>,
    pub im: Vec<Vec<f64>>,
}

impl From<&Mat2> for ComplexMatrix {
    fn from(m: &Mat2) -> Self {
        ComplexMatrix {
            re: (0..2).map(|r| (0..2).map(|c| m[(r, c)].re).collect()).collect(),
            im: (0..2).map(|r| (0..2).map(|c| m[(r, c)].im).collect()).collect(),
        }
    }
}

impl ComplexMatrix {
    pub fn to_mat2(&self) -> Result<Mat2> {
        let ok = self.re.len() == 2
            && self.im.len() == 2
            && self.re.iter().chain(&self.im).all(|row| row.len() == 2);
        if !ok {
            return Err(Error::domain("expected 2x2 re/im arrays"));
        }
        Ok(Mat2::from_fn(|r, c| C64::new(self.re[r][c], self.im[r][c])))
    }
}

/// Serialized result of a protocol run.
#[derive(Clone, Debug, Serialize)]
pub struct ProtocolReport {
    pub input_rho: ComplexMatrix,
    pub output_w: ComplexMatrix,
    pub leakage: f64,
    pub fidelity: f64,
    pub t0: f64,
    pub params: PhysicalParams,
}

impl ProtocolReport {
    pub fn from_store(rho: &QubitState, outcome: &StoreOutcome, params: &PhysicalParams) -> Self {
        ProtocolReport {
            input_rho: rho.matrix().into(),
            output_w: outcome.stored.matrix().into(),
            leakage: outcome.leakage,
            fidelity: map_fidelity(rho, &outcome.stored),
            t0: outcome.t0,
            params: params.clone(),
        }
    }
}

/// Phase picked up by `|+>` relative to `|->` per swap: `exp(-i pi / 2)`.
pub const SWAP_PHASE: f64 = -FRAC_PI_2;
