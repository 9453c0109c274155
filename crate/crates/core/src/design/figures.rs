use std::f64::consts::PI;
use std::fmt;
use std::str::FromStr;

use serde::Serialize;
use serde_json::json;
use sha2::{Digest, Sha256};

use super::config::{RunConfig, TimeGrid};
use super::output::{Cell, Table};
use crate::decoherence::{fidelity_large_n, fidelity_small_n, LargeNFidelityParams, SmallNFidelityParams};
use crate::error::{Error, Result};
use crate::model::{chi_spectrum, gaussian_profile};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Figure {
    /// `|chi_k|` for three Gaussian widths.
    Fig3,
    /// Large-N fidelity curve.
    Fig4,
    /// Small-N fidelity curve.
    Fig5,
}

impl FromStr for Figure {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "fig3" => Ok(Figure::Fig3),
            "fig4" => Ok(Figure::Fig4),
            "fig5" => Ok(Figure::Fig5),
            other => Err(Error::Config(format!("unknown figure {other:?}; expected fig3, fig4 or fig5"))),
        }
    }
}

impl fmt::Display for Figure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Figure::Fig3 => "fig3",
            Figure::Fig4 => "fig4",
            Figure::Fig5 => "fig5",
        })
    }
}

/// A figure's dataset plus the hash of the settings that produced it.
#[derive(Clone, Debug)]
pub struct FigureData {
    pub table: Table,
    pub settings_hash: String,
    /// Storage instant marked on the curve, in the table's time units.
    pub marker: Option<f64>,
    /// Curve value at the marker.
    pub marker_value: Option<f64>,
}

pub const FIG3_N: usize = 100;
pub const FIG3_SIGMA_OVER_N: [f64; 3] = [0.05, 0.1, 0.2];
pub const FIG4_GAMMA_OVER_G: f64 = 0.02;
/// `g / 2 Omega'` in magnitude; the dispersive shift is negative.
pub const FIG5_G_OVER_2_OMEGA: f64 = 0.025;

fn hash_settings(settings: &impl Serialize) -> String {
    let text = serde_json::to_string(settings).expect("settings serialize");
    hex::encode(Sha256::digest(text.as_bytes()))
}

/// Time grid in units of `1/g`, with `marker` inserted if absent.
fn grid_with_marker(grid: &TimeGrid, marker: f64) -> Result<Vec<f64>> {
    let mut t = grid.samples()?;
    if !t.contains(&marker) && marker >= grid.start && marker <= grid.stop {
        let at = t.partition_point(|&x| x < marker);
        t.insert(at, marker);
    }
    Ok(t)
}

/// Dataset for `figure`. A config may replace the time grid (in units of
/// `1/g`) and, for fig3, the ring size; other settings are fixed.
pub fn reproduce_figure(figure: Figure, config: Option<&RunConfig>) -> Result<FigureData> {
    match figure {
        Figure::Fig3 => fig3(config.map_or(FIG3_N, |c| c.params.n)),
        Figure::Fig4 => fig4(config.and_then(|c| c.time_grid.clone()).unwrap_or(TimeGrid {
            start: 0.0,
            stop: 20.0,
            points: 401,
        })),
        Figure::Fig5 => fig5(config.and_then(|c| c.time_grid.clone()).unwrap_or(TimeGrid {
            start: 0.0,
            stop: 4.0,
            points: 801,
        })),
    }
}

fn fig3(n: usize) -> Result<FigureData> {
    let settings = json!({ "figure": "fig3", "n": n, "lambda": 1.0, "sigma_over_n": FIG3_SIGMA_OVER_N });
    let mut table = Table::new("fig3", &["sigma_over_n", "k", "abs_chi", "re_chi", "im_chi"]);
    let mut weights = Vec::new();
    for frac in FIG3_SIGMA_OVER_N {
        let chi = chi_spectrum(&gaussian_profile(n, frac * n as f64, 1.0)?)?;
        weights.push(chi.spectator_weight());
        for (k, c) in chi.spectators() {
            table.push(vec![Cell::num(frac), Cell::from(k), Cell::num(c.norm()), Cell::num(c.re), Cell::num(c.im)]);
        }
    }
    let settings_hash = hash_settings(&settings);
    let table = table.with_meta(json!({ "settings": settings, "spectator_weight": weights }));
    Ok(FigureData {
        table,
        settings_hash,
        marker: None,
        marker_value: None,
    })
}

fn fig4(grid: TimeGrid) -> Result<FigureData> {
    let g = 1.0;
    let p = LargeNFidelityParams::new(FIG4_GAMMA_OVER_G * g, g)?;
    let marker = PI / (2.0 * g);
    let settings = json!({ "figure": "fig4", "gamma_over_g": FIG4_GAMMA_OVER_G, "time_grid": grid });
    let mut table = Table::new("fig4", &["t_g", "fidelity", "marker"]);
    for t in grid_with_marker(&grid, marker)? {
        table.push(vec![Cell::num(t * g), Cell::num(fidelity_large_n(t, &p)), Cell::from(usize::from(t == marker))]);
    }
    let value = fidelity_large_n(marker, &p);
    let table = table.with_meta(json!({
        "settings": settings,
        "time_unit": "1/g",
        "gamma": p.gamma,
        "g": p.g,
        "phi": p.phi(),
        "delta1p": p.delta1p(),
        "marker_t_g": marker * g,
        "fidelity_at_marker": value,
        "first_order_estimate": 1.0 - PI * p.gamma / (8.0 * p.g),
    }));
    Ok(FigureData {
        table,
        settings_hash: hash_settings(&settings),
        marker: Some(marker),
        marker_value: Some(value),
    })
}

fn fig5(grid: TimeGrid) -> Result<FigureData> {
    let g = 1.0;
    let omega_p = -g / (2.0 * FIG5_G_OVER_2_OMEGA);
    let p = SmallNFidelityParams::new(omega_p, g)?;
    let marker = PI / (2.0 * p.delta1);
    let settings = json!({ "figure": "fig5", "g_over_2_omega_p": FIG5_G_OVER_2_OMEGA, "time_grid": grid });
    let mut table = Table::new("fig5", &["t_g", "t_delta1", "fidelity", "marker"]);
    for t in grid_with_marker(&grid, marker)? {
        table.push(vec![
            Cell::num(t * g),
            Cell::num(t * p.delta1),
            Cell::num(fidelity_small_n(t, &p)),
            Cell::from(usize::from(t == marker)),
        ]);
    }
    let value = fidelity_small_n(marker, &p);
    let table = table.with_meta(json!({
        "settings": settings,
        "time_units": ["1/g", "1/delta1"],
        "omega_p": p.omega_p,
        "g": p.g,
        "delta1": p.delta1,
        "delta1p": p.delta1p(),
        "xi": p.xi(),
        "marker_t_delta1": marker * p.delta1,
        "fidelity_at_marker": value,
    }));
    Ok(FigureData {
        table,
        settings_hash: hash_settings(&settings),
        marker: Some(marker),
        marker_value: Some(value),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn fig3_has_three_series() {
        let d = reproduce_figure(Figure::Fig3, None).unwrap();
        assert_eq!(d.table.rows.len(), 3 * 99);
        assert_eq!(d.table.rows[0][1], Cell::Int(1));
        assert_eq!(d.table.rows[98][1], Cell::Int(99));
    }

    #[test]
    fn fig4_marker_value() {
        let d = reproduce_figure(Figure::Fig4, None).unwrap();
        let f = d.marker_value.unwrap();
        assert!((f - (1.0 - PI * 0.02 / 8.0)).abs() < 0.002);
        let marked: Vec<_> = d.table.rows.iter().filter(|r| r[2] == Cell::Int(1)).collect();
        assert_eq!(marked.len(), 1);
        assert_eq!(marked[0][1], Cell::num(f));
    }

    #[test]
    fn fig5_marker_near_half() {
        let d = reproduce_figure(Figure::Fig5, None).unwrap();
        assert!((0.45..=0.55).contains(&d.marker_value.unwrap()));
    }

    #[test]
    fn unknown_figure() {
        assert!(matches!("fig9".parse::<Figure>(), Err(Error::Config(_))));
    }
}
