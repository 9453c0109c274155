use std::collections::HashMap;
use std::fmt;
use std::sync::Arc;

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64 as C64;
use serde_json::{json, Value};

use crate::density::{Electron, Mat2, QubitState};
use crate::error::{Error, Result};

/// Electron label plus Fock occupations of the active modes.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct BasisLabel {
    pub electron: Electron,
    /// Aligned with [`FockBasis::modes`].
    pub occupations: Vec<u32>,
}

impl BasisLabel {
    pub fn excitation(&self) -> u32 {
        self.electron.excitation() + self.occupations.iter().sum::<u32>()
    }
}

/// Truncated Fock basis: every electron/occupation configuration with
/// `n_k <= cutoff` on each active mode and total excitation
/// `[electron up] + sum_k n_k <= max_excitations`.
///
/// The Hamiltonian conserves total excitation, so the excitation bound is not
/// an approximation for states that start below it.
#[derive(Debug)]
pub struct FockBasis {
    modes: Vec<usize>,
    cutoff: u32,
    max_excitations: u32,
    labels: Vec<BasisLabel>,
    lookup: HashMap<BasisLabel, usize>,
    sectors: Vec<Vec<usize>>,
}

/// Number of occupation vectors over `m` modes, entries in `0..=cutoff`, summing to each total `0..=max`.
fn occupation_counts(m: usize, cutoff: u32, max: u32) -> Vec<usize> {
    let max = max as usize;
    let mut counts = vec![0usize; max + 1];
    counts[0] = 1;
    for _ in 0..m {
        let mut next = vec![0usize; max + 1];
        for (total, &c) in counts.iter().enumerate() {
            if c == 0 {
                continue;
            }
            for n in 0..=(cutoff as usize) {
                if total + n > max {
                    break;
                }
                next[total + n] = next[total + n].saturating_add(c);
            }
        }
        counts = next;
    }
    counts
}

fn enumerate_occupations(m: usize, cutoff: u32, total: u32, out: &mut Vec<Vec<u32>>) {
    fn rec(pos: usize, left: u32, cur: &mut Vec<u32>, cutoff: u32, out: &mut Vec<Vec<u32>>) {
        if pos == cur.len() {
            if left == 0 {
                out.push(cur.clone());
            }
            return;
        }
        for n in 0..=cutoff.min(left) {
            cur[pos] = n;
            rec(pos + 1, left - n, cur, cutoff, out);
        }
        cur[pos] = 0;
    }
    let mut cur = vec![0u32; m];
    rec(0, total, &mut cur, cutoff, out);
}

impl FockBasis {
    pub(crate) fn new(modes: Vec<usize>, cutoff: u32, max_excitations: u32, max_states: usize) -> Result<Self> {
        let counts = occupation_counts(modes.len(), cutoff, max_excitations);
        let total = (0..=max_excitations as usize).fold(0usize, |acc, e| {
            let with_up = if e >= 1 { counts[e - 1] } else { 0 };
            acc.saturating_add(counts[e]).saturating_add(with_up)
        });
        if total > max_states {
            return Err(Error::Resource {
                what: "truncated Fock basis size",
                requested: total,
                cap: max_states,
            });
        }

        let mut labels = Vec::with_capacity(total);
        let mut sectors = Vec::with_capacity(max_excitations as usize + 1);
        for e in 0..=max_excitations {
            let mut sector = Vec::new();
            for electron in [Electron::Down, Electron::Up] {
                let Some(rest) = e.checked_sub(electron.excitation()) else {
                    continue;
                };
                let mut occs = Vec::new();
                enumerate_occupations(modes.len(), cutoff, rest, &mut occs);
                for occupations in occs {
                    sector.push(labels.len());
                    labels.push(BasisLabel { electron, occupations });
                }
            }
            sectors.push(sector);
        }
        let lookup = labels.iter().cloned().enumerate().map(|(i, l)| (l, i)).collect();
        Ok(FockBasis {
            modes,
            cutoff,
            max_excitations,
            labels,
            lookup,
            sectors,
        })
    }

    pub fn modes(&self) -> &[usize] {
        &self.modes
    }

    pub fn cutoff(&self) -> u32 {
        self.cutoff
    }

    pub fn max_excitations(&self) -> u32 {
        self.max_excitations
    }

    pub fn len(&self) -> usize {
        self.labels.len()
    }

    pub fn is_empty(&self) -> bool {
        self.labels.is_empty()
    }

    pub fn labels(&self) -> &[BasisLabel] {
        &self.labels
    }

    pub fn label(&self, index: usize) -> &BasisLabel {
        &self.labels[index]
    }

    pub fn index_of(&self, label: &BasisLabel) -> Option<usize> {
        self.lookup.get(label).copied()
    }

    /// Basis indices grouped by total excitation.
    pub fn sectors(&self) -> &[Vec<usize>] {
        &self.sectors
    }

    /// Position of mode `k` within the occupation vectors.
    pub fn mode_position(&self, k: usize) -> Result<usize> {
        self.modes
            .iter()
            .position(|&m| m == k)
            .ok_or_else(|| Error::domain(format!("mode {k} is not active")))
    }

    /// Label for `electron` with the given `(mode, n)` occupations, all other modes empty.
    pub fn label_for(&self, electron: Electron, occupied: &[(usize, u32)]) -> Result<BasisLabel> {
        let mut occupations = vec![0u32; self.modes.len()];
        for &(k, n) in occupied {
            occupations[self.mode_position(k)?] = n;
        }
        Ok(BasisLabel { electron, occupations })
    }

    fn same_space(&self, other: &FockBasis) -> bool {
        self.modes == other.modes
            && self.cutoff == other.cutoff
            && self.max_excitations == other.max_excitations
    }

    pub(crate) fn describe(&self, label: &BasisLabel) -> String {
        let occupied: Vec<String> = self
            .modes
            .iter()
            .zip(&label.occupations)
            .filter(|(_, &n)| n > 0)
            .map(|(k, n)| format!("n{k}={n}"))
            .collect();
        if occupied.is_empty() {
            format!("|{};vac>", label.electron.symbol())
        } else {
            format!("|{};{}>", label.electron.symbol(), occupied.join(","))
        }
    }
}

/// Amplitudes over an electron (x) magnon Fock basis.
#[derive(Clone, Debug)]
pub struct JointState {
    basis: Arc<FockBasis>,
    amplitudes: DVector<C64>,
}

impl JointState {
    /// Wraps amplitudes; the vector must have unit norm to `1e-10`.
    pub fn new(basis: Arc<FockBasis>, amplitudes: DVector<C64>) -> Result<Self> {
        let st = JointState::unchecked(basis, amplitudes)?;
        let norm = st.norm();
        if (norm - 1.0).abs() > 1e-10 {
            return Err(Error::domain(format!("joint state norm {norm} is not 1")));
        }
        Ok(st)
    }

    /// Like [`JointState::new`] without the norm check; used for purification branches.
    pub fn unchecked(basis: Arc<FockBasis>, amplitudes: DVector<C64>) -> Result<Self> {
        if amplitudes.len() != basis.len() {
            return Err(Error::domain(format!(
                "amplitude vector has length {}, basis has {}",
                amplitudes.len(),
                basis.len()
            )));
        }
        Ok(JointState { basis, amplitudes })
    }

    pub fn basis_state(basis: Arc<FockBasis>, label: &BasisLabel) -> Result<Self> {
        let idx = basis
            .index_of(label)
            .ok_or_else(|| Error::domain(format!("label {label:?} is outside the truncated basis")))?;
        let mut amps = DVector::zeros(basis.len());
        amps[idx] = C64::new(1.0, 0.0);
        Ok(JointState { basis, amplitudes: amps })
    }

    /// `(a |+> + b |->) (x) |occupied>`, normalized.
    pub fn product(basis: Arc<FockBasis>, electron: [C64; 2], occupied: &[(usize, u32)]) -> Result<Self> {
        let mut amps = DVector::zeros(basis.len());
        for (e, amp) in [(Electron::Up, electron[0]), (Electron::Down, electron[1])] {
            if amp == C64::default() {
                continue;
            }
            let label = basis.label_for(e, occupied)?;
            let idx = basis
                .index_of(&label)
                .ok_or_else(|| Error::domain("product state is outside the truncated basis"))?;
            amps[idx] = amp;
        }
        let norm = amps.norm();
        if norm == 0.0 {
            return Err(Error::domain("zero state vector"));
        }
        Ok(JointState {
            basis,
            amplitudes: amps.unscale(norm),
        })
    }

    pub fn basis(&self) -> &Arc<FockBasis> {
        &self.basis
    }

    pub fn amplitudes(&self) -> &DVector<C64> {
        &self.amplitudes
    }

    pub fn amplitude(&self, label: &BasisLabel) -> C64 {
        self.basis
            .index_of(label)
            .map_or(C64::default(), |i| self.amplitudes[i])
    }

    pub fn norm(&self) -> f64 {
        self.amplitudes.norm()
    }

    pub(crate) fn check_compatible(&self, basis: &FockBasis) -> Result<()> {
        if self.basis.same_space(basis) {
            Ok(())
        } else {
            Err(Error::domain("state basis does not match the model basis"))
        }
    }

    pub(crate) fn with_amplitudes(&self, amplitudes: DVector<C64>) -> JointState {
        JointState {
            basis: Arc::clone(&self.basis),
            amplitudes,
        }
    }

    /// `<self|other>`.
    pub fn overlap(&self, other: &JointState) -> Result<C64> {
        other.check_compatible(&self.basis)?;
        Ok(self.amplitudes.dotc(&other.amplitudes))
    }

    /// Probability of each basis label.
    pub fn populations(&self) -> impl Iterator<Item = (&BasisLabel, f64)> {
        self.basis
            .labels()
            .iter()
            .zip(self.amplitudes.iter())
            .map(|(l, a)| (l, a.norm_sqr()))
    }

    /// Probability of finding total excitation `e`, for `e = 0..=max_excitations`.
    pub fn sector_populations(&self) -> Vec<f64> {
        self.basis
            .sectors()
            .iter()
            .map(|idx| idx.iter().map(|&i| self.amplitudes[i].norm_sqr()).sum())
            .collect()
    }

    pub fn mean_excitation(&self) -> f64 {
        self.populations()
            .map(|(l, p)| f64::from(l.excitation()) * p)
            .sum()
    }

    /// `<b_k^dag b_k>`.
    pub fn occupation(&self, k: usize) -> Result<f64> {
        let pos = self.basis.mode_position(k)?;
        Ok(self
            .populations()
            .map(|(l, p)| f64::from(l.occupations[pos]) * p)
            .sum())
    }

    pub fn up_population(&self) -> f64 {
        self.populations()
            .filter(|(l, _)| l.electron == Electron::Up)
            .map(|(_, p)| p)
            .sum()
    }

    /// Unnormalized partial trace over the magnons.
    pub(crate) fn electron_matrix(&self) -> Mat2 {
        let mut rho = Mat2::zeros();
        for (i, label) in self.basis.labels().iter().enumerate() {
            let a = self.amplitudes[i];
            if a == C64::default() {
                continue;
            }
            let r = label.electron.index();
            rho[(r, r)] += a.norm_sqr();
            if label.electron == Electron::Up {
                let partner = BasisLabel {
                    electron: Electron::Down,
                    occupations: label.occupations.clone(),
                };
                if let Some(j) = self.basis.index_of(&partner) {
                    let z = a * self.amplitudes[j].conj();
                    rho[(0, 1)] += z;
                    rho[(1, 0)] += z.conj();
                }
            }
        }
        rho
    }

    /// Reduced electron state.
    pub fn electron_state(&self) -> Result<QubitState> {
        QubitState::with_tolerance(self.electron_matrix(), 1e-10)
    }

    /// Unnormalized reduced density matrix of mode `k` on Fock levels `0..=cutoff`.
    pub(crate) fn mode_matrix(&self, k: usize) -> Result<DMatrix<C64>> {
        let pos = self.basis.mode_position(k)?;
        let levels = self.basis.cutoff() as usize + 1;
        let mut rho = DMatrix::zeros(levels, levels);
        for (i, label) in self.basis.labels().iter().enumerate() {
            let a = self.amplitudes[i];
            if a == C64::default() {
                continue;
            }
            let n = label.occupations[pos] as usize;
            let mut partner = label.clone();
            for m in 0..levels {
                partner.occupations[pos] = m as u32;
                if let Some(j) = self.basis.index_of(&partner) {
                    rho[(n, m)] += a * self.amplitudes[j].conj();
                }
            }
        }
        Ok(rho)
    }

    /// Reduced density matrix of mode `k` on Fock levels `0..=cutoff`.
    pub fn mode_state(&self, k: usize) -> Result<DMatrix<C64>> {
        self.mode_matrix(k)
    }

    /// Debug dump: array of `[label, re, im]` triples for non-zero amplitudes.
    pub fn to_json(&self) -> Value {
        Value::Array(
            self.basis
                .labels()
                .iter()
                .zip(self.amplitudes.iter())
                .filter(|(_, a)| a.norm_sqr() > 0.0)
                .map(|(l, a)| json!([self.basis.describe(l), a.re, a.im]))
                .collect(),
        )
    }
}

impl fmt::Display for JointState {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for (l, a) in self.basis.labels().iter().zip(self.amplitudes.iter()) {
            if a.norm() < 1e-12 {
                continue;
            }
            if !first {
                write!(f, " + ")?;
            }
            write!(f, "({:.6}{:+.6}i){}", a.re, a.im, self.basis.describe(l))?;
            first = false;
        }
        if first {
            write!(f, "0")?;
        }
        Ok(())
    }
}
