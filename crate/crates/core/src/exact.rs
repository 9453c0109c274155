//! Exact diagonalization of the full spin Hamiltonian for small rings.
//!
//! The Hilbert space is electron (x) N spins of magnitude `s`, dimension
//! `2 (2s+1)^N`. Each nuclear site is labelled by its deviation
//! `m = s + S_z` from the fully polarized ground state `|G>` (all `m = 0`).
//! Basis index: `e * (2s+1)^N + sum_l m_l (2s+1)^(l-1)` with `e = 0` for `|+>`.

use std::sync::OnceLock;

use nalgebra::{DMatrix, DVector, SymmetricEigen};
use num_complex::Complex64 as C64;

use crate::density::{Electron, Mat2, QubitState};
use crate::error::{Error, Result};
use crate::model::{CouplingProfile, PhysicalParams, Spin};

/// Default cap on the full dimension: `2 * 2^12`, i.e. `N <= 12` at `s = 1/2`.
pub const DEFAULT_MAX_DIM: usize = 2 * 4096;

pub type StateVector = DVector<C64>;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SpinBasis {
    n: usize,
    spin: Spin,
    nuclear_dim: usize,
}

/// A decoded basis state.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct SpinBasisState {
    pub electron: Electron,
    /// Deviations `m_l` in `0..=2s`, site `l` at position `l - 1`.
    pub nuclear: Vec<u32>,
}

impl SpinBasis {
    pub fn new(n: usize, spin: Spin, max_dim: usize) -> Result<Self> {
        let nuclear_dim = u32::try_from(n)
            .ok()
            .and_then(|n| spin.multiplicity().checked_pow(n))
            .unwrap_or(usize::MAX);
        let dim = nuclear_dim.saturating_mul(2);
        if dim > max_dim {
            return Err(Error::Resource {
                what: "exact Hilbert space dimension",
                requested: dim,
                cap: max_dim,
            });
        }
        Ok(SpinBasis { n, spin, nuclear_dim })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn spin(&self) -> Spin {
        self.spin
    }

    pub fn dim(&self) -> usize {
        2 * self.nuclear_dim
    }

    pub fn nuclear_dim(&self) -> usize {
        self.nuclear_dim
    }

    pub fn index(&self, state: &SpinBasisState) -> Result<usize> {
        if state.nuclear.len() != self.n {
            return Err(Error::domain("deviation vector length differs from N"));
        }
        let d = self.spin.multiplicity();
        let mut idx = 0usize;
        for &m in state.nuclear.iter().rev() {
            if m as usize >= d {
                return Err(Error::domain(format!("deviation {m} exceeds 2s = {}", d - 1)));
            }
            idx = idx * d + m as usize;
        }
        Ok(state.electron.index() * self.nuclear_dim + idx)
    }

    pub fn state(&self, index: usize) -> SpinBasisState {
        assert!(index < self.dim(), "basis index out of range");
        let d = self.spin.multiplicity();
        let electron = if index < self.nuclear_dim { Electron::Up } else { Electron::Down };
        let mut rest = index % self.nuclear_dim;
        let nuclear = (0..self.n)
            .map(|_| {
                let m = (rest % d) as u32;
                rest /= d;
                m
            })
            .collect();
        SpinBasisState { electron, nuclear }
    }

    /// Eigenvalue of `C = (sigma_z + 1)/2 + sum_l (s + S_z^(l))` on a basis state.
    pub fn excitation(&self, index: usize) -> u32 {
        let st = self.state(index);
        st.electron.excitation() + st.nuclear.iter().sum::<u32>()
    }

    /// Electron state `(up, down)` amplitudes times the nuclear basis state `deviations`.
    pub fn product_state(&self, electron: [C64; 2], deviations: &[u32]) -> Result<StateVector> {
        let mut v = StateVector::zeros(self.dim());
        for (e, amp) in [(Electron::Up, electron[0]), (Electron::Down, electron[1])] {
            let idx = self.index(&SpinBasisState {
                electron: e,
                nuclear: deviations.to_vec(),
            })?;
            v[idx] = amp;
        }
        normalized(v)
    }

    /// `|e> (x) (1/sqrt N) sum_l |one deviation at l>`, the exact one-magnon memory state.
    pub fn symmetric_one_magnon(&self, electron: Electron) -> StateVector {
        let mut v = StateVector::zeros(self.dim());
        let amp = C64::new(1.0 / (self.n as f64).sqrt(), 0.0);
        for l in 0..self.n {
            let mut nuclear = vec![0; self.n];
            nuclear[l] = 1;
            let idx = self.index(&SpinBasisState { electron, nuclear }).expect("valid state");
            v[idx] = amp;
        }
        v
    }

    /// Probability that the electron is `|+>`.
    pub fn up_population(&self, state: &StateVector) -> f64 {
        state.rows(0, self.nuclear_dim).norm_squared()
    }

    /// Partial trace over the nuclei.
    pub fn reduce_electron(&self, state: &StateVector) -> Result<QubitState> {
        self.check_state(state)?;
        let up = state.rows(0, self.nuclear_dim);
        let down = state.rows(self.nuclear_dim, self.nuclear_dim);
        let pp = up.norm_squared();
        let mm = down.norm_squared();
        let pm = up.dotc(&down).conj();
        let rho = Mat2::new(pp.into(), pm, pm.conj(), mm.into());
        QubitState::with_tolerance(rho, 1e-10)
    }

    fn check_state(&self, state: &StateVector) -> Result<()> {
        if state.len() != self.dim() {
            return Err(Error::domain(format!(
                "state has dimension {}, basis has {}",
                state.len(),
                self.dim()
            )));
        }
        let norm = state.norm();
        if (norm - 1.0).abs() > 1e-10 {
            return Err(Error::domain(format!("state norm {norm} is not 1")));
        }
        Ok(())
    }
}

fn normalized(v: StateVector) -> Result<StateVector> {
    let norm = v.norm();
    if norm == 0.0 {
        return Err(Error::domain("zero state vector"));
    }
    Ok(v.unscale(norm))
}

/// Full `H = H_e + H_n + H_en` as a dense real symmetric matrix.
#[derive(Debug)]
pub struct ExactHamiltonian {
    basis: SpinBasis,
    params: PhysicalParams,
    profile: CouplingProfile,
    matrix: DMatrix<f64>,
    eigen: OnceLock<SymmetricEigen<f64, nalgebra::Dyn>>,
}

pub fn build_exact(params: &PhysicalParams, profile: &CouplingProfile) -> Result<ExactHamiltonian> {
    build_exact_with_cap(params, profile, DEFAULT_MAX_DIM)
}

pub fn build_exact_with_cap(
    params: &PhysicalParams,
    profile: &CouplingProfile,
    max_dim: usize,
) -> Result<ExactHamiltonian> {
    params.validate()?;
    if profile.len() != params.n {
        return Err(Error::domain(format!(
            "profile has {} sites, params have N = {}",
            profile.len(),
            params.n
        )));
    }
    let basis = SpinBasis::new(params.n, params.s, max_dim)?;
    let matrix = assemble(&basis, params, profile);
    Ok(ExactHamiltonian {
        basis,
        params: params.clone(),
        profile: profile.clone(),
        matrix,
        eigen: OnceLock::new(),
    })
}

/// `<m+1| S_+ |m>` for deviation `m`.
fn raise(s: f64, m: u32) -> f64 {
    let sz = f64::from(m) - s;
    (s * (s + 1.0) - sz * (sz + 1.0)).max(0.0).sqrt()
}

/// `<m-1| S_- |m>` for deviation `m`.
fn lower(s: f64, m: u32) -> f64 {
    let sz = f64::from(m) - s;
    (s * (s + 1.0) - sz * (sz - 1.0)).max(0.0).sqrt()
}

fn assemble(basis: &SpinBasis, p: &PhysicalParams, profile: &CouplingProfile) -> DMatrix<f64> {
    let n = basis.n;
    let s = p.s.value();
    let two_s = p.s.twice();
    let d = p.s.multiplicity();
    let strides: Vec<usize> = (0..n).map(|l| d.pow(l as u32)).collect();
    let nd = basis.nuclear_dim;
    let dim = basis.dim();

    let electron_zeeman = -p.g_e * p.mu_b * p.b0;
    let nuclear_zeeman = p.nuclear_zeeman();
    let hyperfine: Vec<f64> = profile
        .lambdas()
        .iter()
        .map(|lam| lam / (2.0 * n as f64))
        .collect();

    let mut h = DMatrix::<f64>::zeros(dim, dim);
    for col in 0..dim {
        let st = basis.state(col);
        let m = &st.nuclear;

        let sz = |l: usize| f64::from(m[l]) - s;
        let mut diag = electron_zeeman * st.electron.sign();
        diag += nuclear_zeeman * (0..n).map(sz).sum::<f64>();
        for l in 0..n {
            let r = (l + 1) % n;
            diag -= p.j * sz(l) * sz(r);

            // -J/2 (S+_l S-_r + S-_l S+_r)
            if m[l] < two_s && m[r] >= 1 {
                let row = col + strides[l] - strides[r];
                h[(row, col)] -= 0.5 * p.j * raise(s, m[l]) * lower(s, m[r]);
            }
            if m[l] >= 1 && m[r] < two_s {
                let row = col - strides[l] + strides[r];
                h[(row, col)] -= 0.5 * p.j * lower(s, m[l]) * raise(s, m[r]);
            }

            // (lambda_l / 2N) (sigma_+ S-_l + sigma_- S+_l)
            match st.electron {
                Electron::Down if m[l] >= 1 => {
                    let row = col - nd - strides[l];
                    h[(row, col)] += hyperfine[l] * lower(s, m[l]);
                }
                Electron::Up if m[l] < two_s => {
                    let row = col + nd + strides[l];
                    h[(row, col)] += hyperfine[l] * raise(s, m[l]);
                }
                _ => {}
            }
        }
        h[(col, col)] += diag;
    }
    h
}

impl ExactHamiltonian {
    pub fn basis(&self) -> &SpinBasis {
        &self.basis
    }

    pub fn params(&self) -> &PhysicalParams {
        &self.params
    }

    pub fn profile(&self) -> &CouplingProfile {
        &self.profile
    }

    pub fn matrix(&self) -> &DMatrix<f64> {
        &self.matrix
    }

    pub fn dim(&self) -> usize {
        self.basis.dim()
    }

    /// Eigendecomposition, computed on first use and cached.
    pub fn eigen(&self) -> &SymmetricEigen<f64, nalgebra::Dyn> {
        self.eigen
            .get_or_init(|| SymmetricEigen::new(self.matrix.clone()))
    }

    /// `max |[H, C]_ij|` with `C` the total excitation number.
    pub fn excitation_commutator_norm(&self) -> f64 {
        let c: Vec<f64> = (0..self.dim())
            .map(|i| f64::from(self.basis.excitation(i)))
            .collect();
        let mut worst = 0.0f64;
        for j in 0..self.dim() {
            for i in 0..self.dim() {
                worst = worst.max((self.matrix[(i, j)] * (c[j] - c[i])).abs());
            }
        }
        worst
    }

    /// `exp(-iHt) state` at each time in `times`.
    pub fn evolve_many(&self, state: &StateVector, times: &[f64]) -> Result<Vec<StateVector>> {
        self.basis.check_state(state)?;
        let eig = self.eigen();
        let v = &eig.eigenvectors;
        let re = state.map(|c| c.re);
        let im = state.map(|c| c.im);
        let c_re = v.tr_mul(&re);
        let c_im = v.tr_mul(&im);
        let coeffs: Vec<C64> = c_re
            .iter()
            .zip(c_im.iter())
            .map(|(&a, &b)| C64::new(a, b))
            .collect();

        Ok(times
            .iter()
            .map(|&t| {
                let (mut ph_re, mut ph_im) = (DVector::zeros(coeffs.len()), DVector::zeros(coeffs.len()));
                for (i, (&c, &e)) in coeffs.iter().zip(eig.eigenvalues.iter()).enumerate() {
                    let z = c * C64::from_polar(1.0, -e * t);
                    ph_re[i] = z.re;
                    ph_im[i] = z.im;
                }
                let out_re = v * ph_re;
                let out_im = v * ph_im;
                StateVector::from_iterator(
                    out_re.len(),
                    out_re.iter().zip(out_im.iter()).map(|(&a, &b)| C64::new(a, b)),
                )
            })
            .collect())
    }
}

/// `exp(-iHt) state` by eigendecomposition.
pub fn evolve_exact(h: &ExactHamiltonian, state: &StateVector, t: f64) -> Result<StateVector> {
    Ok(h.evolve_many(state, &[t])?.remove(0))
}

/// Partial trace of a normalized joint state onto the electron.
pub fn reduce_electron(h: &ExactHamiltonian, state: &StateVector) -> Result<QubitState> {
    h.basis.reduce_electron(state)
}
