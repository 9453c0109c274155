//! Physical constants of the electron + nuclear-ring system and the closed-form
//! quantities derived from them: magnon dispersion, effective coupling, swap
//! time, site coupling profiles and their Fourier coefficients.
//!
//! Units: hbar = 1, every energy in one user-chosen unit (the CLI defaults to
//! units of the hyperfine scale `lambda`), times in the inverse unit.

use std::f64::consts::PI;
use std::fmt;

use num_complex::Complex64 as C64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Spin magnitude `s`, stored as the integer `2s` so half-integers are exact.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Spin(u32);

impl Spin {
    pub const HALF: Spin = Spin(1);
    pub const ONE: Spin = Spin(2);

    pub fn from_twice(twice: u32) -> Result<Self> {
        if twice == 0 {
            return Err(Error::domain("spin magnitude must be positive"));
        }
        Ok(Spin(twice))
    }

    pub fn from_f64(s: f64) -> Result<Self> {
        let twice = 2.0 * s;
        if !(twice.is_finite() && twice >= 1.0 && (twice - twice.round()).abs() < 1e-12) {
            return Err(Error::domain(format!("spin {s} is not a positive half-integer")));
        }
        Spin::from_twice(twice.round() as u32)
    }

    pub fn twice(self) -> u32 {
        self.0
    }

    pub fn value(self) -> f64 {
        f64::from(self.0) / 2.0
    }

    /// Dimension `2s + 1` of the single-site representation.
    pub fn multiplicity(self) -> usize {
        self.0 as usize + 1
    }
}

impl fmt::Display for Spin {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_multiple_of(2) {
            write!(f, "{}", self.0 / 2)
        } else {
            write!(f, "{}/2", self.0)
        }
    }
}

impl Serialize for Spin {
    fn serialize<S: serde::Serializer>(&self, ser: S) -> std::result::Result<S::Ok, S::Error> {
        ser.serialize_f64(self.value())
    }
}

impl<'de> Deserialize<'de> for Spin {
    fn deserialize<D: serde::Deserializer<'de>>(de: D) -> std::result::Result<Self, D::Error> {
        let s = f64::deserialize(de)?;
        Spin::from_f64(s).map_err(serde::de::Error::custom)
    }
}

/// All model constants. Construct through [`PhysicalParams::zero_field`] or
/// deserialization, both of which validate.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "RawParams", deny_unknown_fields)]
pub struct PhysicalParams {
    /// Number of nuclear sites on the ring.
    pub n: usize,
    pub s: Spin,
    /// Nearest-neighbour exchange (ferromagnetic for `j > 0`).
    pub j: f64,
    pub b0: f64,
    /// Hyperfine scale.
    pub lambda: f64,
    pub g_e: f64,
    pub g_n: f64,
    pub mu_b: f64,
    pub mu_n: f64,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RawParams {
    n: usize,
    s: Spin,
    j: f64,
    b0: f64,
    lambda: f64,
    g_e: f64,
    g_n: f64,
    mu_b: f64,
    mu_n: f64,
}

impl TryFrom<RawParams> for PhysicalParams {
    type Error = Error;

    fn try_from(r: RawParams) -> Result<Self> {
        let p = PhysicalParams {
            n: r.n,
            s: r.s,
            j: r.j,
            b0: r.b0,
            lambda: r.lambda,
            g_e: r.g_e,
            g_n: r.g_n,
            mu_b: r.mu_b,
            mu_n: r.mu_n,
        };
        p.validate()?;
        Ok(p)
    }
}

impl PhysicalParams {
    /// Zero-field parameters with unit g-factors and magnetons.
    pub fn zero_field(n: usize, s: Spin, j: f64, lambda: f64) -> Result<Self> {
        let p = PhysicalParams {
            n,
            s,
            j,
            b0: 0.0,
            lambda,
            g_e: 1.0,
            g_n: 1.0,
            mu_b: 1.0,
            mu_n: 1.0,
        };
        p.validate()?;
        Ok(p)
    }

    pub fn validate(&self) -> Result<()> {
        if self.n < 2 {
            return Err(Error::domain(format!("need at least 2 nuclear sites, got {}", self.n)));
        }
        let finite = [self.j, self.b0, self.lambda, self.g_e, self.g_n, self.mu_b, self.mu_n];
        if finite.iter().any(|x| !x.is_finite()) {
            return Err(Error::domain("non-finite physical parameter"));
        }
        if self.lambda <= 0.0 {
            return Err(Error::domain(format!("lambda must be > 0, got {}", self.lambda)));
        }
        if self.j < 0.0 {
            return Err(Error::domain(format!("exchange J must be >= 0, got {}", self.j)));
        }
        if self.mu_b <= 0.0 || self.mu_n <= 0.0 {
            return Err(Error::domain("magnetons must be > 0"));
        }
        Ok(())
    }

    pub fn with_lambda(&self, lambda: f64) -> Result<Self> {
        let p = PhysicalParams { lambda, ..self.clone() };
        p.validate()?;
        Ok(p)
    }

    /// Nuclear Zeeman energy `g_n mu_n B0`, the frequency of the memory mode.
    pub fn nuclear_zeeman(&self) -> f64 {
        self.g_n * self.mu_n * self.b0
    }

    /// Electron level splitting `Omega` of the `(Omega/2) sigma_z` term.
    ///
    /// The effective g-factor is `-g_e`, so that `(Omega/2) sigma_z` equals the
    /// electron Zeeman term `-g_e mu_B B0 sigma_z` of the spin Hamiltonian.
    pub fn electron_splitting(&self) -> f64 {
        -2.0 * self.g_e * self.mu_b * self.b0
    }
}

/// Magnon frequency `omega_k = g_n mu_n B0 + 2Js - 2Js cos(2 pi k / N)` for `k` in `1..=N`.
pub fn dispersion(params: &PhysicalParams, k: usize) -> Result<f64> {
    let n = params.n;
    if k == 0 || k > n {
        return Err(Error::domain(format!("mode index {k} outside 1..={n}")));
    }
    let zeeman = params.nuclear_zeeman();
    if k == n {
        return Ok(zeeman);
    }
    let js2 = 2.0 * params.j * params.s.value();
    Ok(zeeman + js2 - js2 * ring_cos(k, n))
}

/// All frequencies `omega_1..omega_N`, indexed by `k - 1`.
pub fn dispersion_all(params: &PhysicalParams) -> Vec<f64> {
    (1..=params.n)
        .map(|k| dispersion(params, k).expect("k in range"))
        .collect()
}

/// `cos(2 pi k / N)` with the argument reduced modulo `N` first.
fn ring_cos(k: usize, n: usize) -> f64 {
    (2.0 * PI * ((k % n) as f64) / n as f64).cos()
}

/// Phase `exp(i 2 pi m / N)` with `m` reduced modulo `N`.
pub(crate) fn ring_phase(m: usize, n: usize) -> C64 {
    C64::from_polar(1.0, 2.0 * PI * ((m % n) as f64) / n as f64)
}

/// Electron-to-memory-mode coupling `g = lambda sqrt(s / 2N)`.
pub fn effective_coupling(params: &PhysicalParams) -> f64 {
    params.lambda * (params.s.value() / (2.0 * params.n as f64)).sqrt()
}

/// Swap time `t0 = (pi / lambda) sqrt(N / 2s)`, the half Rabi period `pi / 2g`.
pub fn swap_time(params: &PhysicalParams) -> f64 {
    PI / params.lambda * (params.n as f64 / (2.0 * params.s.value())).sqrt()
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum ProfileKind {
    Homogeneous,
    Gaussian { sigma: f64 },
    Custom,
}

/// Per-site hyperfine couplings `lambda_l`, `l = 1..N` (stored at `l - 1`).
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct CouplingProfile {
    lambdas: Vec<f64>,
    kind: ProfileKind,
}

impl CouplingProfile {
    pub fn homogeneous(n: usize, lambda: f64) -> Result<Self> {
        if n < 2 {
            return Err(Error::domain("profile needs at least 2 sites"));
        }
        if !(lambda > 0.0 && lambda.is_finite()) {
            return Err(Error::domain("homogeneous coupling must be > 0"));
        }
        Ok(CouplingProfile {
            lambdas: vec![lambda; n],
            kind: ProfileKind::Homogeneous,
        })
    }

    pub fn custom(lambdas: Vec<f64>) -> Result<Self> {
        if lambdas.len() < 2 {
            return Err(Error::domain("profile needs at least 2 sites"));
        }
        if lambdas.iter().any(|&x| !(x >= 0.0 && x.is_finite())) {
            return Err(Error::domain("site couplings must be finite and >= 0"));
        }
        if !lambdas.iter().any(|&x| x > 0.0) {
            return Err(Error::domain("at least one site coupling must be > 0"));
        }
        Ok(CouplingProfile {
            lambdas,
            kind: ProfileKind::Custom,
        })
    }

    pub fn lambdas(&self) -> &[f64] {
        &self.lambdas
    }

    pub fn kind(&self) -> &ProfileKind {
        &self.kind
    }

    pub fn len(&self) -> usize {
        self.lambdas.len()
    }

    pub fn is_empty(&self) -> bool {
        self.lambdas.is_empty()
    }

    /// Coupling of site `l` (1-based).
    pub fn site(&self, l: usize) -> f64 {
        self.lambdas[l - 1]
    }

    /// Reference coupling that normalizes the Fourier coefficients.
    ///
    /// Homogeneous and custom profiles use `lambda_1`. A Gaussian profile with
    /// `lambda_1 = lambda` uses its nominal amplitude `sqrt(2 pi) sigma lambda`,
    /// so that `chi_k = (1/N) sum_l exp(-(l-1)^2 / 2 sigma^2 + i 2 pi k l / N) / (sqrt(2 pi) sigma)`.
    pub fn chi_reference(&self) -> f64 {
        match self.kind {
            ProfileKind::Gaussian { sigma } => (2.0 * PI).sqrt() * sigma * self.lambdas[0],
            _ => self.lambdas[0],
        }
    }
}

/// Gaussian profile centred on site 1 with `lambda_1 = lambda` exactly.
pub fn gaussian_profile(n: usize, sigma: f64, lambda: f64) -> Result<CouplingProfile> {
    if n < 2 {
        return Err(Error::domain("profile needs at least 2 sites"));
    }
    if !(sigma > 0.0 && sigma.is_finite()) {
        return Err(Error::domain(format!("gaussian width must be > 0, got {sigma}")));
    }
    if !(lambda > 0.0 && lambda.is_finite()) {
        return Err(Error::domain("gaussian amplitude must be > 0"));
    }
    let lambdas = (0..n)
        .map(|d| {
            let d = d as f64;
            lambda * (-(d * d) / (2.0 * sigma * sigma)).exp()
        })
        .collect();
    Ok(CouplingProfile {
        lambdas,
        kind: ProfileKind::Gaussian { sigma },
    })
}

/// Fourier coefficients `chi_k`, `k = 1..N`; `k = N` is the memory mode.
#[derive(Clone, Debug, PartialEq)]
pub struct ChiSpectrum {
    chi: Vec<C64>,
}

impl ChiSpectrum {
    /// Spectrum of a perfectly homogeneous ring: `chi_N = 1`, zero elsewhere.
    pub fn homogeneous(n: usize) -> Self {
        let mut chi = vec![C64::new(0.0, 0.0); n];
        chi[n - 1] = C64::new(1.0, 0.0);
        ChiSpectrum { chi }
    }

    /// Wrap precomputed coefficients (index `k - 1`).
    pub fn from_values(chi: Vec<C64>) -> Result<Self> {
        if chi.len() < 2 {
            return Err(Error::domain("chi spectrum needs at least 2 modes"));
        }
        if chi.iter().any(|c| !(c.re.is_finite() && c.im.is_finite())) {
            return Err(Error::domain("non-finite chi coefficient"));
        }
        Ok(ChiSpectrum { chi })
    }

    pub fn n(&self) -> usize {
        self.chi.len()
    }

    pub fn get(&self, k: usize) -> C64 {
        self.chi[k - 1]
    }

    pub fn values(&self) -> &[C64] {
        &self.chi
    }

    pub fn memory(&self) -> C64 {
        self.chi[self.chi.len() - 1]
    }

    /// `(k, chi_k)` for the spectator modes `k = 1..N-1`.
    pub fn spectators(&self) -> impl Iterator<Item = (usize, C64)> + '_ {
        self.chi[..self.chi.len() - 1]
            .iter()
            .enumerate()
            .map(|(i, &c)| (i + 1, c))
    }

    /// `sum_{k != N} |chi_k|^2`.
    pub fn spectator_weight(&self) -> f64 {
        self.spectators().map(|(_, c)| c.norm_sqr()).sum()
    }

    /// Inverse transform `sum_k chi_k exp(-i 2 pi k l / N)`, which recovers
    /// `lambda_l / lambda_ref` for `l = 1..N`.
    pub fn site_ratios(&self) -> Vec<f64> {
        let n = self.n();
        (1..=n)
            .map(|l| {
                self.chi
                    .iter()
                    .enumerate()
                    .map(|(i, &c)| c * ring_phase(n - ((i + 1) * l) % n, n))
                    .sum::<C64>()
                    .re
            })
            .collect()
    }
}

/// `chi_k = sum_l lambda_l / (lambda_ref N) exp(i 2 pi k l / N)`.
pub fn chi_spectrum(profile: &CouplingProfile) -> Result<ChiSpectrum> {
    let reference = profile.chi_reference();
    if reference <= 0.0 {
        return Err(Error::domain(
            "reference coupling lambda_1 must be > 0 to normalize chi",
        ));
    }
    let n = profile.len();
    let scale = 1.0 / (reference * n as f64);
    let chi = (1..=n)
        .map(|k| {
            profile
                .lambdas
                .iter()
                .enumerate()
                .map(|(i, &lam)| ring_phase(k * (i + 1), n) * (lam * scale))
                .sum()
        })
        .collect();
    Ok(ChiSpectrum { chi })
}
