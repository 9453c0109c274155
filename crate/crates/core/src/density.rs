//! Two-level density matrices: the electron qubit and the stored magnon qubit.

use nalgebra::Matrix2;
use num_complex::Complex64 as C64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub type Mat2 = Matrix2<C64>;

pub const DENSITY_TOL: f64 = 1e-12;

/// Electron spin basis label. `Up` is `|+>`, `Down` is `|->`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Electron {
    Up,
    Down,
}

impl Electron {
    /// Row index in [`QubitState`] matrices.
    pub fn index(self) -> usize {
        match self {
            Electron::Up => 0,
            Electron::Down => 1,
        }
    }

    /// Excitation carried by the electron: 1 for `|+>`, 0 for `|->`.
    pub fn excitation(self) -> u32 {
        match self {
            Electron::Up => 1,
            Electron::Down => 0,
        }
    }

    pub fn sign(self) -> f64 {
        match self {
            Electron::Up => 1.0,
            Electron::Down => -1.0,
        }
    }

    pub fn symbol(self) -> char {
        match self {
            Electron::Up => '+',
            Electron::Down => '-',
        }
    }
}

/// Electron state. Row/column 0 is `|+>` (spin up), 1 is `|->` (spin down).
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct QubitState(Mat2);

/// State of the memory mode on its Fock levels: index 0 is `|0_N>`, 1 is `|1_N>`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct StoredState(Mat2);

macro_rules! density_impl {
    ($ty:ident) => {
        impl $ty {
            /// Validates Hermiticity, unit trace and positivity to `1e-12`.
            pub fn new(m: Mat2) -> Result<Self> {
                check_density(&m, DENSITY_TOL)?;
                Ok($ty(m))
            }

            /// Validates with a caller-chosen tolerance.
            pub fn with_tolerance(m: Mat2, tol: f64) -> Result<Self> {
                check_density(&m, tol)?;
                Ok($ty(m))
            }

            pub fn pure(amp0: C64, amp1: C64) -> Result<Self> {
                let norm = (amp0.norm_sqr() + amp1.norm_sqr()).sqrt();
                if norm == 0.0 {
                    return Err(Error::domain("zero state vector"));
                }
                let (a, b) = (amp0 / norm, amp1 / norm);
                Ok($ty(Mat2::new(a * a.conj(), a * b.conj(), b * a.conj(), b * b.conj())))
            }

            pub fn diagonal(p0: f64, p1: f64) -> Result<Self> {
                $ty::new(Mat2::new(p0.into(), C64::default(), C64::default(), p1.into()))
            }

            pub fn matrix(&self) -> &Mat2 {
                &self.0
            }

            pub fn purity(&self) -> f64 {
                (self.0 * self.0).trace().re
            }
        }
    };
}

density_impl!(QubitState);
density_impl!(StoredState);

impl QubitState {
    pub fn up() -> Self {
        QubitState::pure(C64::new(1.0, 0.0), C64::default()).unwrap()
    }

    pub fn down() -> Self {
        QubitState::pure(C64::default(), C64::new(1.0, 0.0)).unwrap()
    }

    /// The six Pauli eigenstates: `+z` is `|+>`, `-z` is `|->`.
    pub fn pauli(label: PauliState) -> Self {
        let h = std::f64::consts::FRAC_1_SQRT_2;
        let (a, b) = match label {
            PauliState::PlusZ => (C64::new(1.0, 0.0), C64::default()),
            PauliState::MinusZ => (C64::default(), C64::new(1.0, 0.0)),
            PauliState::PlusX => (C64::new(h, 0.0), C64::new(h, 0.0)),
            PauliState::MinusX => (C64::new(h, 0.0), C64::new(-h, 0.0)),
            PauliState::PlusY => (C64::new(h, 0.0), C64::new(0.0, h)),
            PauliState::MinusY => (C64::new(h, 0.0), C64::new(0.0, -h)),
        };
        QubitState::pure(a, b).unwrap()
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum PauliState {
    #[serde(alias = "+z")]
    PlusZ,
    #[serde(alias = "-z")]
    MinusZ,
    #[serde(alias = "+x")]
    PlusX,
    #[serde(alias = "-x")]
    MinusX,
    #[serde(alias = "+y")]
    PlusY,
    #[serde(alias = "-y")]
    MinusY,
}

impl PauliState {
    pub const ALL: [PauliState; 6] = [
        PauliState::PlusZ,
        PauliState::MinusZ,
        PauliState::PlusX,
        PauliState::MinusX,
        PauliState::PlusY,
        PauliState::MinusY,
    ];

    /// `+z, -z, +x, +y`: an informationally complete input set.
    pub const TOMOGRAPHIC: [PauliState; 4] = [
        PauliState::PlusZ,
        PauliState::MinusZ,
        PauliState::PlusX,
        PauliState::PlusY,
    ];
}

impl std::str::FromStr for PauliState {
    type Err = Error;

    /// Accepts `+z`, `-x`, ... and the snake-case names `plus_z`, `minus_x`, ...
    fn from_str(s: &str) -> Result<Self> {
        Ok(match s {
            "+z" | "plus_z" => PauliState::PlusZ,
            "-z" | "minus_z" => PauliState::MinusZ,
            "+x" | "plus_x" => PauliState::PlusX,
            "-x" | "minus_x" => PauliState::MinusX,
            "+y" | "plus_y" => PauliState::PlusY,
            "-y" | "minus_y" => PauliState::MinusY,
            other => return Err(Error::domain(format!("unknown Pauli state {other:?}"))),
        })
    }
}

fn check_density(m: &Mat2, tol: f64) -> Result<()> {
    if m.iter().any(|c| !(c.re.is_finite() && c.im.is_finite())) {
        return Err(Error::domain("density matrix has non-finite entries"));
    }
    let herm = (m - m.adjoint()).iter().map(|c| c.norm()).fold(0.0, f64::max);
    if herm > tol {
        return Err(Error::domain(format!("density matrix not Hermitian (deviation {herm:.3e})")));
    }
    let tr = m.trace();
    if (tr.re - 1.0).abs() > tol || tr.im.abs() > tol {
        return Err(Error::domain(format!("density matrix trace {tr} != 1")));
    }
    let (lo, _) = hermitian_eigenvalues(m);
    if lo < -tol {
        return Err(Error::domain(format!("density matrix has negative eigenvalue {lo:.3e}")));
    }
    Ok(())
}

/// Eigenvalues `(low, high)` of a Hermitian 2x2 matrix.
pub fn hermitian_eigenvalues(m: &Mat2) -> (f64, f64) {
    let a = m[(0, 0)].re;
    let d = m[(1, 1)].re;
    let b = m[(0, 1)];
    let mean = 0.5 * (a + d);
    let radius = (0.25 * (a - d) * (a - d) + b.norm_sqr()).sqrt();
    (mean - radius, mean + radius)
}

/// Trace distance `(1/2) ||a - b||_1` between Hermitian 2x2 matrices.
pub fn trace_distance(a: &Mat2, b: &Mat2) -> f64 {
    let (lo, hi) = hermitian_eigenvalues(&(a - b));
    0.5 * (lo.abs() + hi.abs())
}

/// Root Uhlmann fidelity `Tr sqrt(sqrt(a) b sqrt(a))` of two qubit density matrices.
///
/// Uses the 2x2 identity `(Tr sqrt(...))^2 = Tr(ab) + 2 sqrt(det a det b)`.
pub fn uhlmann_fidelity(a: &Mat2, b: &Mat2) -> f64 {
    let overlap = (a * b).trace().re;
    let det = (a.determinant().re * b.determinant().re).max(0.0);
    (overlap + 2.0 * det.sqrt()).max(0.0).sqrt().min(1.0)
}
