//! Design tools: thermal bound on the ring size, parameter sweeps, figure
//! datasets, run configuration and result files.

mod config;
mod figures;
mod output;
mod sweep;

use std::f64::consts::PI;

pub use config::{ProfileSpec, RunConfig, StateSpec, SweepAxis, SweepParameter, TimeGrid, Tolerances};
pub use figures::{reproduce_figure, Figure, FigureData};
pub use output::{Cell, OutputFormat, Table};
pub use sweep::{evaluate_point, grid_points, run_sweep, PointError, SweepPoint, SweepResult, SweepRow};

use crate::error::{Error, Result};
use crate::model::Spin;

pub const DEFAULT_MAX_N: u64 = 1_000_000;

/// Largest ring size `N <= pi / arcsin(sqrt(k_B T / 4Js))` that keeps the
/// first magnon gap above the thermal energy, capped at [`DEFAULT_MAX_N`].
pub fn max_n_for_temperature(kbt: f64, j: f64, s: Spin) -> Result<u64> {
    max_n_for_temperature_capped(kbt, j, s, DEFAULT_MAX_N)
}

pub fn max_n_for_temperature_capped(kbt: f64, j: f64, s: Spin, cap: u64) -> Result<u64> {
    if !(kbt > 0.0 && kbt.is_finite()) {
        return Err(Error::domain(format!("k_B T must be > 0, got {kbt}")));
    }
    if !(j > 0.0 && j.is_finite()) {
        return Err(Error::domain(format!("J must be > 0, got {j}")));
    }
    let ratio = kbt / (4.0 * j * s.value());
    if ratio > 1.0 {
        return Err(Error::domain(format!(
            "k_B T = {kbt} exceeds 4Js = {}; no N satisfies the bound",
            4.0 * j * s.value()
        )));
    }
    let bound = PI / ratio.sqrt().asin();
    // pi / arcsin(sqrt(1/2)) evaluates just below 4.
    let floored = (bound * (1.0 + 1e-9)).floor();
    if floored >= cap as f64 {
        Ok(cap)
    } else {
        Ok(floored as u64)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn thermal_anchors() {
        assert_eq!(max_n_for_temperature(4.0, 2.0, Spin::HALF).unwrap(), 2);
        assert_eq!(max_n_for_temperature(2.0, 2.0, Spin::HALF).unwrap(), 4);
        assert_eq!(max_n_for_temperature(1e-30, 1.0, Spin::HALF).unwrap(), DEFAULT_MAX_N);
        assert_eq!(max_n_for_temperature_capped(1e-6, 1.0, Spin::HALF, 50).unwrap(), 50);
    }

    #[test]
    fn thermal_domain_errors() {
        assert!(max_n_for_temperature(4.1, 2.0, Spin::HALF).is_err());
        assert!(max_n_for_temperature(0.0, 2.0, Spin::HALF).is_err());
        assert!(max_n_for_temperature(1.0, 0.0, Spin::HALF).is_err());
    }
}
