//! Inhomogeneity-induced decoherence: golden-rule decay rate, closed-form
//! fidelity curves in the large-N and small-N limits, and the numerical
//! overlap they approximate.

use std::f64::consts::PI;

use log::warn;
use nalgebra::DMatrix;
use num_complex::Complex64 as C64;
use rayon::prelude::*;
use serde::Serialize;

use crate::boson::{build_boson_hamiltonian, BosonModel};
use crate::error::{Error, Result};
use crate::model::{dispersion, dispersion_all, effective_coupling, ChiSpectrum, PhysicalParams};

/// Overshoot above 1 that is silently treated as roundoff.
const CLAMP_SLACK: f64 = 1e-9;
/// Frequencies below this are treated as zero in the dispersive sums.
const ZERO_FREQUENCY: f64 = 1e-12;

fn lorentzian(x: f64, eta: f64) -> f64 {
    eta / (PI * (x * x + eta * eta))
}

fn check_chi(params: &PhysicalParams, chi: &ChiSpectrum) -> Result<()> {
    if chi.n() != params.n {
        return Err(Error::domain(format!(
            "chi spectrum has {} modes, params have N = {}",
            chi.n(),
            params.n
        )));
    }
    Ok(())
}

/// `gamma = 2 pi sum_{k != N} g^2 |chi_k|^2 delta_eta(omega_k - 2g)` with a
/// normalized Lorentzian of half-width `eta`.
pub fn decay_rate(params: &PhysicalParams, chi: &ChiSpectrum, eta: f64) -> Result<f64> {
    if !(eta > 0.0 && eta.is_finite()) {
        return Err(Error::domain(format!("broadening must be > 0, got {eta}")));
    }
    check_chi(params, chi)?;
    let g = effective_coupling(params);
    let sum: f64 = chi
        .spectators()
        .map(|(k, c)| {
            let w = dispersion(params, k).expect("spectator index in range");
            g * g * c.norm_sqr() * lorentzian(w - 2.0 * g, eta)
        })
        .sum();
    Ok(2.0 * PI * sum)
}

/// Mean spacing between the distinct spectator levels adjacent to `2g`.
pub fn default_broadening(params: &PhysicalParams) -> Result<f64> {
    let mut levels: Vec<f64> = dispersion_all(params)[..params.n - 1].to_vec();
    levels.sort_by(f64::total_cmp);
    let scale = levels.iter().fold(1.0f64, |m, w| m.max(w.abs()));
    levels.dedup_by(|a, b| (*a - *b).abs() <= 1e-12 * scale);
    if levels.len() < 2 {
        return Err(Error::regime(
            "spectator levels are degenerate; supply the broadening explicitly",
        ));
    }
    let target = 2.0 * effective_coupling(params);
    let nearest = levels
        .iter()
        .enumerate()
        .min_by(|a, b| (a.1 - target).abs().total_cmp(&(b.1 - target).abs()))
        .map(|(i, _)| i)
        .expect("non-empty");
    let lo = nearest.saturating_sub(1);
    let hi = (nearest + 1).min(levels.len() - 1);
    Ok((levels[hi] - levels[lo]) / (hi - lo) as f64)
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct LargeNFidelityParams {
    pub gamma: f64,
    pub g: f64,
}

impl LargeNFidelityParams {
    /// Requires `0 <= gamma < g`; `gamma >= g` is the overdamped regime.
    pub fn new(gamma: f64, g: f64) -> Result<Self> {
        if !(g > 0.0 && g.is_finite()) || !(gamma >= 0.0 && gamma.is_finite()) {
            return Err(Error::domain(format!("need g > 0 and gamma >= 0, got g = {g}, gamma = {gamma}")));
        }
        if gamma >= g {
            return Err(Error::regime(format!(
                "overdamped: gamma = {gamma} >= g = {g}"
            )));
        }
        Ok(LargeNFidelityParams { gamma, g })
    }

    /// `gamma` from [`decay_rate`] and `g` from the parameters.
    pub fn from_model(params: &PhysicalParams, chi: &ChiSpectrum, eta: f64) -> Result<Self> {
        LargeNFidelityParams::new(decay_rate(params, chi, eta)?, effective_coupling(params))
    }

    /// `phi = arcsin(gamma / g)`.
    pub fn phi(&self) -> f64 {
        (self.gamma / self.g).asin()
    }

    /// `sqrt(g^2 - gamma^2)`.
    pub fn delta1p(&self) -> f64 {
        (self.g * self.g - self.gamma * self.gamma).sqrt()
    }
}

fn clamp_unit(f: f64, what: &str) -> f64 {
    if f > 1.0 {
        if f - 1.0 > CLAMP_SLACK {
            warn!("{what} exceeds 1 by {:e}", f - 1.0);
        }
        1.0
    } else if f < 0.0 {
        if -f > CLAMP_SLACK {
            warn!("{what} below 0 by {:e}", -f);
        }
        0.0
    } else {
        f
    }
}

/// `F(t) = 1/2 + 1/2 e^{-gamma t/2} sec(phi) (cos gt cos(D t + phi) + sin gt sin D t)`
/// with `D = sqrt(g^2 - gamma^2)`.
pub fn fidelity_large_n(t: f64, p: &LargeNFidelityParams) -> f64 {
    let phi = p.phi();
    let d = p.delta1p();
    let g = p.g;
    let bracket = (g * t).cos() * (d * t + phi).cos() + (g * t).sin() * (d * t).sin();
    let f = 0.5 + 0.5 * (-p.gamma * t / 2.0).exp() / phi.cos() * bracket;
    clamp_unit(f, "large-N fidelity")
}

/// Ratios `r_k = g |chi_k| / |omega_k|` over the spectators.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Adiabaticity {
    /// `ratios[k - 1]` for `k = 1..N-1`.
    pub ratios: Vec<f64>,
    pub max: f64,
    pub argmax: usize,
}

impl Adiabaticity {
    pub fn satisfied(&self, threshold: f64) -> bool {
        self.max <= threshold
    }
}

fn spectator_frequencies(params: &PhysicalParams) -> Result<Vec<f64>> {
    let w = dispersion_all(params);
    match w[..params.n - 1].iter().position(|x| x.abs() < ZERO_FREQUENCY) {
        Some(i) => Err(Error::Singular { k: i + 1 }),
        None => Ok(w[..params.n - 1].to_vec()),
    }
}

pub fn adiabaticity(params: &PhysicalParams, chi: &ChiSpectrum) -> Result<Adiabaticity> {
    check_chi(params, chi)?;
    let w = spectator_frequencies(params)?;
    let g = effective_coupling(params);
    let ratios: Vec<f64> = chi
        .spectators()
        .map(|(k, c)| g * c.norm() / w[k - 1].abs())
        .collect();
    let (i, max) = ratios
        .iter()
        .copied()
        .enumerate()
        .fold((0, f64::NEG_INFINITY), |acc, (i, r)| if r > acc.1 { (i, r) } else { acc });
    Ok(Adiabaticity { ratios, max, argmax: i + 1 })
}

/// Dispersive shift `Omega' = -g^2 sum_{k != N} |chi_k|^2 / omega_k`.
pub fn omega_shift(params: &PhysicalParams, chi: &ChiSpectrum) -> Result<f64> {
    check_chi(params, chi)?;
    let w = spectator_frequencies(params)?;
    let g = effective_coupling(params);
    Ok(-g * g * chi.spectators().map(|(k, c)| c.norm_sqr() / w[k - 1]).sum::<f64>())
}

/// Second-order spectator couplings `Omega_kk' = g^2 (1/omega_k + 1/omega_k')`,
/// an `(N-1) x (N-1)` symmetric matrix indexed by `k - 1`.
pub fn effective_couplings(params: &PhysicalParams) -> Result<DMatrix<f64>> {
    let w = spectator_frequencies(params)?;
    let g2 = effective_coupling(params).powi(2);
    let m = w.len();
    Ok(DMatrix::from_fn(m, m, |a, b| g2 * (1.0 / w[a] + 1.0 / w[b])))
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct SmallNFidelityParams {
    pub omega_p: f64,
    pub g: f64,
    /// Slow oscillation frequency; defaults to `g`.
    pub delta1: f64,
}

impl SmallNFidelityParams {
    pub fn new(omega_p: f64, g: f64) -> Result<Self> {
        if !(g > 0.0 && g.is_finite() && omega_p.is_finite()) {
            return Err(Error::domain(format!("need finite Omega' and g > 0, got {omega_p}, {g}")));
        }
        Ok(SmallNFidelityParams { omega_p, g, delta1: g })
    }

    pub fn from_model(params: &PhysicalParams, chi: &ChiSpectrum) -> Result<Self> {
        SmallNFidelityParams::new(omega_shift(params, chi)?, effective_coupling(params))
    }

    pub fn with_delta1(mut self, delta1: f64) -> Result<Self> {
        if !delta1.is_finite() {
            return Err(Error::domain("delta1 must be finite"));
        }
        self.delta1 = delta1;
        Ok(self)
    }

    /// `sqrt((Omega'/2)^2 + g^2)`.
    pub fn delta1p(&self) -> f64 {
        (0.25 * self.omega_p * self.omega_p + self.g * self.g).sqrt()
    }

    pub fn cos_xi(&self) -> f64 {
        self.omega_p / (2.0 * self.delta1p())
    }

    pub fn sin_xi(&self) -> f64 {
        self.g / self.delta1p()
    }

    pub fn xi(&self) -> f64 {
        self.sin_xi().atan2(self.cos_xi())
    }
}

/// `F(t) = 1/2 |cos D1 t (cos D t - i sin D t cos xi) + sin xi sin D t sin D1 t + e^{i Omega' t/2}|`.
pub fn fidelity_small_n(t: f64, p: &SmallNFidelityParams) -> f64 {
    let d = p.delta1p();
    let (c1, s1) = ((p.delta1 * t).cos(), (p.delta1 * t).sin());
    let (c, s) = ((d * t).cos(), (d * t).sin());
    let z = C64::new(c, -s * p.cos_xi()) * c1
        + C64::new(p.sin_xi() * s * s1, 0.0)
        + C64::from_polar(1.0, p.omega_p * t / 2.0);
    clamp_unit(0.5 * z.norm(), "small-N fidelity")
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct FidelityCurve {
    pub times: Vec<f64>,
    pub values: Vec<f64>,
}

/// `|<Psi(t)|Psi'(t)>|` for `(|+> + |->)/sqrt2 (x) vacuum`, with `Psi'` evolved
/// under `model` and `Psi` under its homogeneous counterpart in the same
/// single-excitation basis.
pub fn numeric_fidelity(model: &BosonModel, t_grid: &[f64]) -> Result<FidelityCurve> {
    if t_grid.is_empty() {
        return Err(Error::domain("time grid is empty"));
    }
    let model = model.clone().with_max_excitations(1);
    let reference = model.homogeneous_counterpart();
    let h = build_boson_hamiltonian(&model)?;
    let h0 = build_boson_hamiltonian(&reference)?;
    let a = C64::new(std::f64::consts::FRAC_1_SQRT_2, 0.0);
    let psi0 = model.vacuum_state([a, a])?;
    let values = t_grid
        .par_iter()
        .map(|&t| {
            let inhom = h.evolve(&psi0, t)?;
            let hom = h0.evolve(&psi0, t)?;
            Ok(clamp_unit(hom.overlap(&inhom)?.norm(), "numeric fidelity"))
        })
        .collect::<Result<Vec<f64>>>()?;
    Ok(FidelityCurve {
        times: t_grid.to_vec(),
        values,
    })
}
