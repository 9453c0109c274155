use std::fs;
use std::path::{Path, PathBuf};

use num_complex::Complex64 as C64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::boson::{BosonModel, DEFAULT_CHI_THRESHOLD, DEFAULT_MAX_AMPLITUDES};
use crate::density::{PauliState, QubitState};
use crate::error::{Error, Result};
use crate::exact::DEFAULT_MAX_DIM;
use crate::model::{chi_spectrum, gaussian_profile, CouplingProfile, PhysicalParams};
use crate::protocol::ComplexMatrix;

/// Site-coupling profile as written in a config file.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum ProfileSpec {
    Homogeneous,
    Gaussian { sigma: f64 },
    /// Width given as a fraction of `N`, so it follows `n` in sweeps.
    GaussianRelative { sigma_over_n: f64 },
    Custom { lambdas: Vec<f64> },
}

impl ProfileSpec {
    /// Materializes the profile for `params.n` sites with scale `params.lambda`.
    pub fn build(&self, params: &PhysicalParams) -> Result<CouplingProfile> {
        let n = params.n;
        match self {
            ProfileSpec::Homogeneous => CouplingProfile::homogeneous(n, params.lambda),
            ProfileSpec::Gaussian { sigma } => gaussian_profile(n, *sigma, params.lambda),
            ProfileSpec::GaussianRelative { sigma_over_n } => {
                gaussian_profile(n, sigma_over_n * n as f64, params.lambda)
            }
            ProfileSpec::Custom { lambdas } => {
                if lambdas.len() != n {
                    return Err(Error::Config(format!(
                        "custom profile has {} sites, params have N = {n}",
                        lambdas.len()
                    )));
                }
                CouplingProfile::custom(lambdas.clone())
            }
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SweepParameter {
    N,
    J,
    B0,
    Lambda,
    Sigma,
    SigmaOverN,
}

impl SweepParameter {
    pub fn name(self) -> &'static str {
        match self {
            SweepParameter::N => "n",
            SweepParameter::J => "j",
            SweepParameter::B0 => "b0",
            SweepParameter::Lambda => "lambda",
            SweepParameter::Sigma => "sigma",
            SweepParameter::SigmaOverN => "sigma_over_n",
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SweepAxis {
    pub parameter: SweepParameter,
    pub values: Vec<f64>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct Tolerances {
    /// Spectators with `|chi_k|` below this are dropped from the boson basis.
    pub chi_threshold: f64,
    /// Default bound on `max r_k` for the dispersive regime.
    pub adiabatic_threshold: f64,
    pub max_exact_dim: usize,
    pub max_amplitudes: usize,
    /// Cap returned by the thermal bound as `k_B T -> 0`.
    pub max_n: u64,
}

impl Default for Tolerances {
    fn default() -> Self {
        Tolerances {
            chi_threshold: DEFAULT_CHI_THRESHOLD,
            adiabatic_threshold: 0.1,
            max_exact_dim: DEFAULT_MAX_DIM,
            max_amplitudes: DEFAULT_MAX_AMPLITUDES,
            max_n: super::DEFAULT_MAX_N,
        }
    }
}

/// Uniform time grid in absolute units.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TimeGrid {
    pub start: f64,
    pub stop: f64,
    pub points: usize,
}

impl TimeGrid {
    pub fn samples(&self) -> Result<Vec<f64>> {
        if self.points == 0 || self.stop < self.start || !self.start.is_finite() || !self.stop.is_finite() {
            return Err(Error::Config("time grid needs points >= 1 and stop >= start".into()));
        }
        if self.points == 1 {
            return Ok(vec![self.start]);
        }
        let step = (self.stop - self.start) / (self.points - 1) as f64;
        Ok((0..self.points).map(|i| self.start + step * i as f64).collect())
    }
}

/// Electron input state.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum StateSpec {
    Pauli { label: PauliState },
    Density { rho: ComplexMatrix },
    /// Haar-random pure state drawn from the run seed.
    Random,
}

impl StateSpec {
    /// The state for sweep point `index`; random draws depend only on `(seed, index)`.
    pub fn resolve(&self, seed: u64, index: u64) -> Result<QubitState> {
        match self {
            StateSpec::Pauli { label } => Ok(QubitState::pauli(*label)),
            StateSpec::Density { rho } => QubitState::new(rho.to_mat2()?),
            StateSpec::Random => {
                let mut rng = ChaCha8Rng::seed_from_u64(seed);
                rng.set_stream(index);
                let z: [f64; 4] = std::array::from_fn(|_| gaussian(&mut rng));
                let a = C64::new(z[0], z[1]);
                let b = C64::new(z[2], z[3]);
                let norm = (a.norm_sqr() + b.norm_sqr()).sqrt();
                QubitState::pure(a / norm, b / norm)
            }
        }
    }
}

fn gaussian(rng: &mut impl Rng) -> f64 {
    let u1: f64 = 1.0 - rng.random::<f64>();
    let u2: f64 = rng.random();
    (-2.0 * u1.ln()).sqrt() * (2.0 * std::f64::consts::PI * u2).cos()
}

/// A complete run description. Physics inputs have no defaults.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunConfig {
    pub params: PhysicalParams,
    pub profile: ProfileSpec,
    #[serde(default)]
    pub sweep: Vec<SweepAxis>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub output_dir: Option<PathBuf>,
    #[serde(default)]
    pub seed: u64,
    #[serde(default)]
    pub tolerances: Tolerances,
    /// Lorentzian half-width for the decay rate; `None` picks the level spacing near `2g`.
    #[serde(default)]
    pub broadening: Option<f64>,
    #[serde(default)]
    pub time_grid: Option<TimeGrid>,
    #[serde(default = "default_state")]
    pub state: StateSpec,
}

fn default_state() -> StateSpec {
    StateSpec::Pauli { label: PauliState::PlusX }
}

impl RunConfig {
    pub fn new(params: PhysicalParams, profile: ProfileSpec) -> Self {
        RunConfig {
            params,
            profile,
            sweep: Vec::new(),
            output_dir: None,
            seed: 0,
            tolerances: Tolerances::default(),
            broadening: None,
            time_grid: None,
            state: default_state(),
        }
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let cfg: RunConfig = serde_json::from_str(text).map_err(|e| Error::Config(e.to_string()))?;
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn load(path: &Path) -> Result<Self> {
        let text = fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
        RunConfig::from_json(&text)
    }

    pub fn validate(&self) -> Result<()> {
        for axis in &self.sweep {
            if axis.values.is_empty() {
                return Err(Error::Config(format!("sweep axis {} is empty", axis.parameter.name())));
            }
            if axis.values.iter().any(|v| !v.is_finite()) {
                return Err(Error::Config(format!("sweep axis {} has a non-finite value", axis.parameter.name())));
            }
        }
        let mut names: Vec<_> = self.sweep.iter().map(|a| a.parameter).collect();
        names.sort_by_key(|p| p.name());
        if names.windows(2).any(|w| w[0] == w[1]) {
            return Err(Error::Config("a sweep parameter appears twice".into()));
        }
        if let Some(eta) = self.broadening {
            if !(eta > 0.0 && eta.is_finite()) {
                return Err(Error::Config(format!("broadening must be > 0, got {eta}")));
            }
        }
        if let Some(grid) = &self.time_grid {
            grid.samples()?;
        }
        Ok(())
    }

    /// SHA-256 of the canonical JSON form, with the output location removed.
    pub fn hash(&self) -> String {
        let canonical = RunConfig {
            output_dir: None,
            ..self.clone()
        };
        let text = serde_json::to_string(&canonical).expect("config serializes");
        hex::encode(Sha256::digest(text.as_bytes()))
    }

    pub fn profile(&self) -> Result<CouplingProfile> {
        self.profile.build(&self.params)
    }

    /// Boson model for the configured params and profile.
    pub fn boson_model(&self) -> Result<BosonModel> {
        let chi = chi_spectrum(&self.profile()?)?;
        Ok(BosonModel::new(self.params.clone(), chi)?
            .with_chi_threshold(self.tolerances.chi_threshold)
            .with_amplitude_cap(self.tolerances.max_amplitudes))
    }

    pub fn input_state(&self) -> Result<QubitState> {
        self.state.resolve(self.seed, 0)
    }
}
