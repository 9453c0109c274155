use std::collections::HashMap;
use std::sync::Arc;

use nalgebra::{DMatrix, DVector, SymmetricEigen};
use num_complex::Complex64 as C64;

use super::basis::{BasisLabel, FockBasis, JointState};
use super::BosonModel;
use crate::density::Electron;
use crate::error::{Error, Result};

/// Which parts of the Hamiltonian to assemble.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub(crate) enum Terms {
    Full,
    /// Coupling terms only, used for pulse-area evolution.
    Interaction,
}

#[derive(Debug)]
struct SectorBlock {
    indices: Vec<usize>,
    matrix: DMatrix<C64>,
    eigenvalues: DVector<f64>,
    eigenvectors: DMatrix<C64>,
}

/// Hamiltonian of a [`BosonModel`], stored as dense excitation-sector blocks
/// with their eigendecompositions.
#[derive(Debug)]
pub struct BosonHamiltonian {
    basis: Arc<FockBasis>,
    blocks: Vec<SectorBlock>,
}

pub fn build_boson_hamiltonian(model: &BosonModel) -> Result<BosonHamiltonian> {
    BosonHamiltonian::assemble(model, Terms::Full)
}

impl BosonHamiltonian {
    pub(crate) fn assemble(model: &BosonModel, terms: Terms) -> Result<Self> {
        let basis = model.basis()?;
        if let Some(big) = basis.sectors().iter().map(Vec::len).max() {
            if big > model.max_block {
                return Err(Error::Resource {
                    what: "excitation sector block size",
                    requested: big,
                    cap: model.max_block,
                });
            }
        }

        let modes = basis.modes().to_vec();
        let (freqs, half_splitting) = match terms {
            Terms::Full => (
                modes.iter().map(|&k| model.frequency(k)).collect::<Vec<_>>(),
                0.5 * model.params().electron_splitting(),
            ),
            Terms::Interaction => (vec![0.0; modes.len()], 0.0),
        };
        let couplings: Vec<C64> = modes.iter().map(|&k| model.coupling(k)).collect();

        let blocks = basis
            .sectors()
            .iter()
            .map(|indices| {
                let dim = indices.len();
                let mut h = DMatrix::<C64>::zeros(dim, dim);
                let positions: HashMap<usize, usize> =
                    indices.iter().enumerate().map(|(l, &g)| (g, l)).collect();
                let local = |label: &BasisLabel| {
                    basis.index_of(label).and_then(|g| positions.get(&g).copied())
                };
                for (col, &gi) in indices.iter().enumerate() {
                    let label = basis.label(gi);
                    let energy: f64 = freqs
                        .iter()
                        .zip(&label.occupations)
                        .map(|(w, &n)| w * f64::from(n))
                        .sum::<f64>()
                        + half_splitting * label.electron.sign();
                    h[(col, col)] = C64::new(energy, 0.0);

                    // sigma_+ b_k: |-, n_k> -> |+, n_k - 1> with amplitude c_k sqrt(n_k).
                    if label.electron != Electron::Down {
                        continue;
                    }
                    for (pos, &c) in couplings.iter().enumerate() {
                        let n = label.occupations[pos];
                        if n == 0 || c == C64::default() {
                            continue;
                        }
                        let mut target = label.clone();
                        target.electron = Electron::Up;
                        target.occupations[pos] = n - 1;
                        if let Some(row) = local(&target) {
                            let amp = c * f64::from(n).sqrt();
                            h[(row, col)] += amp;
                            h[(col, row)] += amp.conj();
                        }
                    }
                }
                let eig = SymmetricEigen::new(h.clone());
                SectorBlock {
                    indices: indices.clone(),
                    matrix: h,
                    eigenvalues: eig.eigenvalues,
                    eigenvectors: eig.eigenvectors,
                }
            })
            .collect();
        Ok(BosonHamiltonian { basis, blocks })
    }

    pub fn basis(&self) -> &Arc<FockBasis> {
        &self.basis
    }

    /// Dense matrix over the whole truncated basis.
    pub fn to_dense(&self) -> Result<DMatrix<C64>> {
        let dim = self.basis.len();
        if dim > super::DEFAULT_MAX_BLOCK {
            return Err(Error::Resource {
                what: "dense boson Hamiltonian dimension",
                requested: dim,
                cap: super::DEFAULT_MAX_BLOCK,
            });
        }
        let mut h = DMatrix::zeros(dim, dim);
        for b in &self.blocks {
            for (c, &gc) in b.indices.iter().enumerate() {
                for (r, &gr) in b.indices.iter().enumerate() {
                    h[(gr, gc)] = b.matrix[(r, c)];
                }
            }
        }
        Ok(h)
    }

    /// Matrix element `<row|H|col>`; zero across sectors.
    pub fn element(&self, row: &BasisLabel, col: &BasisLabel) -> C64 {
        let (Some(r), Some(c)) = (self.basis.index_of(row), self.basis.index_of(col)) else {
            return C64::default();
        };
        for b in &self.blocks {
            let lr = b.indices.iter().position(|&i| i == r);
            let lc = b.indices.iter().position(|&i| i == c);
            if let (Some(lr), Some(lc)) = (lr, lc) {
                return b.matrix[(lr, lc)];
            }
        }
        C64::default()
    }

    /// `max |H - H^dag|` over all blocks.
    pub fn hermiticity_defect(&self) -> f64 {
        self.blocks
            .iter()
            .map(|b| (&b.matrix - b.matrix.adjoint()).iter().map(|z| z.norm()).fold(0.0, f64::max))
            .fold(0.0, f64::max)
    }

    /// `exp(-iHt) state`.
    pub fn evolve(&self, state: &JointState, t: f64) -> Result<JointState> {
        state.check_compatible(&self.basis)?;
        let psi = state.amplitudes();
        let mut out = DVector::<C64>::zeros(psi.len());
        for b in &self.blocks {
            let local = DVector::from_iterator(b.indices.len(), b.indices.iter().map(|&i| psi[i]));
            if local.iter().all(|z| *z == C64::default()) {
                continue;
            }
            let mut coeffs = b.eigenvectors.ad_mul(&local);
            for (c, &e) in coeffs.iter_mut().zip(b.eigenvalues.iter()) {
                *c *= C64::from_polar(1.0, -e * t);
            }
            let evolved = &b.eigenvectors * coeffs;
            for (&i, z) in b.indices.iter().zip(evolved.iter()) {
                out[i] = *z;
            }
        }
        Ok(state.with_amplitudes(out))
    }

    /// Multiplies each basis amplitude by `exp(-i E_free t)` with `E_free` the
    /// diagonal energy of the model.
    pub(crate) fn apply_diagonal_phase(model: &BosonModel, state: &JointState, t: f64) -> Result<JointState> {
        let basis = state.basis();
        let freqs: Vec<f64> = basis.modes().iter().map(|&k| model.frequency(k)).collect();
        let half = 0.5 * model.params().electron_splitting();
        let amps = DVector::from_iterator(
            basis.len(),
            basis.labels().iter().zip(state.amplitudes().iter()).map(|(l, &a)| {
                let e: f64 = freqs
                    .iter()
                    .zip(&l.occupations)
                    .map(|(w, &n)| w * f64::from(n))
                    .sum::<f64>()
                    + half * l.electron.sign();
                a * C64::from_polar(1.0, -e * t)
            }),
        );
        Ok(state.with_amplitudes(amps))
    }
}

/// Builds the model Hamiltonian and returns `exp(-iHt) state`.
pub fn evolve_constant(model: &BosonModel, state: &JointState, t: f64) -> Result<JointState> {
    build_boson_hamiltonian(model)?.evolve(state, t)
}
