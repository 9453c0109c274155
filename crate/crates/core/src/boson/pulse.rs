use serde::{Deserialize, Serialize};

use super::hamiltonian::{BosonHamiltonian, Terms};
use super::{BosonModel, JointState};
use crate::error::{Error, Result};

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum PulseKind {
    Rectangular,
    /// Gaussian rise and fall of width `ramp_width` around a flat top.
    GaussianRamp { ramp_width: f64 },
    CustomSampled,
}

/// Time-dependent hyperfine coupling `lambda(t) >= 0` sampled on a grid.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct PulseShape {
    pub kind: PulseKind,
    pub times: Vec<f64>,
    pub values: Vec<f64>,
}

/// Gaussian edges are cut at this many widths.
const RAMP_WIDTHS: f64 = 4.0;

impl PulseShape {
    pub fn rectangular(height: f64, duration: f64) -> Result<Self> {
        if !(height >= 0.0 && duration > 0.0 && height.is_finite() && duration.is_finite()) {
            return Err(Error::domain("rectangular pulse needs height >= 0 and duration > 0"));
        }
        Ok(PulseShape {
            kind: PulseKind::Rectangular,
            times: vec![0.0, duration],
            values: vec![height, height],
        })
    }

    /// Flat top of `height` with Gaussian edges: each edge rises over
    /// `4 ramp_width`, so `duration >= 8 ramp_width` is required.
    pub fn gaussian_ramp(height: f64, duration: f64, ramp_width: f64, samples: usize) -> Result<Self> {
        if !(height >= 0.0 && ramp_width > 0.0 && duration.is_finite() && height.is_finite()) {
            return Err(Error::domain("gaussian ramp needs height >= 0 and ramp width > 0"));
        }
        let edge = RAMP_WIDTHS * ramp_width;
        if duration < 2.0 * edge {
            return Err(Error::domain(format!(
                "duration {duration} shorter than the two ramps ({})",
                2.0 * edge
            )));
        }
        if samples < 3 {
            return Err(Error::domain("gaussian ramp needs at least 3 samples"));
        }
        let times: Vec<f64> = (0..samples)
            .map(|i| duration * i as f64 / (samples - 1) as f64)
            .collect();
        let values = times
            .iter()
            .map(|&t| {
                let x = if t < edge {
                    t - edge
                } else if t > duration - edge {
                    t - (duration - edge)
                } else {
                    0.0
                };
                height * (-(x * x) / (2.0 * ramp_width * ramp_width)).exp()
            })
            .collect();
        Ok(PulseShape {
            kind: PulseKind::GaussianRamp { ramp_width },
            times,
            values,
        })
    }

    pub fn custom(times: Vec<f64>, values: Vec<f64>) -> Result<Self> {
        let p = PulseShape {
            kind: PulseKind::CustomSampled,
            times,
            values,
        };
        p.validate()?;
        Ok(p)
    }

    pub fn validate(&self) -> Result<()> {
        if self.times.len() < 2 || self.times.len() != self.values.len() {
            return Err(Error::domain("pulse needs at least 2 samples with matching times and values"));
        }
        if self.times.windows(2).any(|w| w[1].partial_cmp(&w[0]) != Some(std::cmp::Ordering::Greater)) || !self.times[0].is_finite() {
            return Err(Error::domain("pulse times must be strictly increasing"));
        }
        if self.values.iter().any(|v| !(*v >= 0.0 && v.is_finite())) {
            return Err(Error::domain("pulse values must be finite and >= 0"));
        }
        Ok(())
    }

    /// `int lambda(t) dt` by the trapezoid rule on the sample grid.
    pub fn area(&self) -> f64 {
        self.times
            .windows(2)
            .zip(self.values.windows(2))
            .map(|(t, v)| 0.5 * (t[1] - t[0]) * (v[0] + v[1]))
            .sum()
    }

    pub fn duration(&self) -> f64 {
        self.times[self.times.len() - 1] - self.times[0]
    }

    /// Rescales the samples so the trapezoid area equals `area`.
    pub fn scaled_to_area(&self, area: f64) -> Result<Self> {
        let current = self.area();
        if current <= 0.0 {
            return Err(Error::domain("cannot rescale a zero-area pulse"));
        }
        let f = area / current;
        Ok(PulseShape {
            values: self.values.iter().map(|v| v * f).collect(),
            ..self.clone()
        })
    }
}

/// Evolution under `lambda(t)` in the resonant regime.
///
/// With `B0 = 0` and every coupled mode at zero frequency, `H(t) = lambda(t) X`
/// commutes with itself at all times, so `U = exp(-i X area)` exactly. Uncoupled
/// spectators only pick up their free phase over the pulse duration.
pub fn evolve_pulsed(model: &BosonModel, state: &JointState, pulse: &PulseShape) -> Result<JointState> {
    pulse.validate()?;
    let p = model.params();
    if p.b0 != 0.0 {
        return Err(Error::regime(
            "pulsed evolution needs B0 = 0; time ordering is not implemented",
        ));
    }
    for &k in model.active_modes() {
        let w = model.frequency(k);
        if model.coupling(k).norm() > 0.0 && w.abs() > 1e-12 {
            return Err(Error::regime(format!(
                "mode {k} is coupled at nonzero frequency {w}; H(t) does not commute with itself"
            )));
        }
    }
    let unit = model.with_lambda(1.0)?;
    let interaction = BosonHamiltonian::assemble(&unit, Terms::Interaction)?;
    let swapped = interaction.evolve(state, pulse.area())?;
    BosonHamiltonian::apply_diagonal_phase(model, &swapped, pulse.duration())
}
