use std::path::{Path, PathBuf};

use log::{debug, info};
use rayon::prelude::*;
use serde_json::json;

use super::config::{ProfileSpec, RunConfig, SweepParameter};
use super::output::{ensure_dir, write_file, Cell, OutputFormat, Table};
use crate::boson::BosonModel;
use crate::decoherence::{
    adiabaticity, decay_rate, default_broadening, fidelity_large_n, numeric_fidelity, omega_shift,
    LargeNFidelityParams,
};
use crate::error::{Error, Result};
use crate::model::{chi_spectrum, effective_coupling, swap_time, PhysicalParams};
use crate::protocol::store;

/// One grid point: the swept values in axis order.
#[derive(Clone, Debug, PartialEq)]
pub struct SweepPoint {
    pub index: usize,
    pub values: Vec<(SweepParameter, f64)>,
}

impl SweepPoint {
    /// Params and profile after substituting the swept values into `base`.
    pub fn apply(&self, base: &RunConfig) -> Result<(PhysicalParams, ProfileSpec)> {
        let mut params = base.params.clone();
        let mut profile = base.profile.clone();
        for &(axis, v) in &self.values {
            match axis {
                SweepParameter::N => {
                    if v.fract() != 0.0 || v < 2.0 || v > usize::MAX as f64 {
                        return Err(Error::domain(format!("n = {v} is not an integer >= 2")));
                    }
                    params.n = v as usize;
                }
                SweepParameter::J => params.j = v,
                SweepParameter::B0 => params.b0 = v,
                SweepParameter::Lambda => params.lambda = v,
                SweepParameter::Sigma => profile = ProfileSpec::Gaussian { sigma: v },
                SweepParameter::SigmaOverN => profile = ProfileSpec::GaussianRelative { sigma_over_n: v },
            }
        }
        params.validate()?;
        Ok((params, profile))
    }
}

/// Derived quantities at one grid point. `None` marks a failed quantity; the
/// reasons are listed in `errors`.
#[derive(Clone, Debug, PartialEq)]
pub struct SweepRow {
    pub point: SweepPoint,
    pub params: Option<PhysicalParams>,
    pub sigma: Option<f64>,
    pub g: Option<f64>,
    pub t0: Option<f64>,
    pub eta: Option<f64>,
    pub gamma: Option<f64>,
    pub max_r: Option<f64>,
    pub omega_p: Option<f64>,
    pub f_analytic: Option<f64>,
    pub f_numeric: Option<f64>,
    pub leakage: Option<f64>,
    pub errors: Vec<PointError>,
}

/// Why one quantity at a grid point could not be computed.
#[derive(Clone, Debug, PartialEq)]
pub struct PointError {
    pub quantity: &'static str,
    pub tag: &'static str,
    pub message: String,
}

impl SweepRow {
    /// `ok`, or the tag of the first failure.
    pub fn status(&self) -> &'static str {
        self.errors.first().map_or("ok", |e| e.tag)
    }
}

struct Recorder {
    errors: Vec<PointError>,
}

impl Recorder {
    fn take<T>(&mut self, what: &'static str, r: Result<T>) -> Option<T> {
        match r {
            Ok(v) => Some(v),
            Err(e) => {
                debug!("{what}: {e}");
                self.errors.push(PointError {
                    quantity: what,
                    tag: e.tag(),
                    message: e.to_string(),
                });
                None
            }
        }
    }
}

/// Evaluates every derived quantity at `point`. Failures are recorded per
/// quantity; quantities that depend on a failed input are left empty.
pub fn evaluate_point(config: &RunConfig, point: &SweepPoint) -> SweepRow {
    let mut rec = Recorder { errors: Vec::new() };
    let mut row = SweepRow {
        point: point.clone(),
        params: None,
        sigma: None,
        g: None,
        t0: None,
        eta: None,
        gamma: None,
        max_r: None,
        omega_p: None,
        f_analytic: None,
        f_numeric: None,
        leakage: None,
        errors: Vec::new(),
    };
    let Some((params, spec)) = rec.take("params", point.apply(config)) else {
        row.errors = rec.errors;
        return row;
    };
    let profile = rec.take("profile", spec.build(&params));
    row.sigma = match spec {
        ProfileSpec::Gaussian { sigma } => Some(sigma),
        ProfileSpec::GaussianRelative { sigma_over_n } => Some(sigma_over_n * params.n as f64),
        _ => None,
    };
    let g = effective_coupling(&params);
    let t0 = swap_time(&params);
    row.g = Some(g);
    row.t0 = Some(t0);

    let chi = profile.and_then(|p| rec.take("chi", chi_spectrum(&p)));
    let eta = match config.broadening {
        Some(eta) => Some(eta),
        None => rec.take("eta", default_broadening(&params)),
    };
    if let Some(chi) = &chi {
        row.gamma = eta.and_then(|eta| rec.take("gamma", decay_rate(&params, chi, eta)));
        row.max_r = rec.take("max_r", adiabaticity(&params, chi).map(|a| a.max));
        row.omega_p = rec.take("omega_p", omega_shift(&params, chi));
        row.f_analytic = row.gamma.and_then(|gamma| {
            rec.take(
                "f_analytic",
                LargeNFidelityParams::new(gamma, g).map(|p| fidelity_large_n(t0, &p)),
            )
        });
        let model = rec.take(
            "model",
            BosonModel::new(params.clone(), chi.clone()).map(|m| {
                m.with_chi_threshold(config.tolerances.chi_threshold)
                    .with_amplitude_cap(config.tolerances.max_amplitudes)
            }),
        );
        if let Some(model) = model {
            row.f_numeric = rec.take("f_numeric", numeric_fidelity(&model, &[t0]).map(|c| c.values[0]));
            let state = config.state.resolve(config.seed, point.index as u64);
            row.leakage = rec.take("leakage", state.and_then(|s| store(&s, &model)).map(|o| o.leakage));
        }
    }
    row.eta = eta;
    row.params = Some(params);
    row.errors = rec.errors;
    row
}

/// Cartesian product of the sweep axes, first axis slowest.
pub fn grid_points(config: &RunConfig) -> Vec<SweepPoint> {
    let mut points = vec![Vec::new()];
    for axis in &config.sweep {
        points = points
            .into_iter()
            .flat_map(|prefix: Vec<(SweepParameter, f64)>| {
                axis.values.iter().map(move |&v| {
                    let mut p = prefix.clone();
                    p.push((axis.parameter, v));
                    p
                })
            })
            .collect();
    }
    points
        .into_iter()
        .enumerate()
        .map(|(index, values)| SweepPoint { index, values })
        .collect()
}

#[derive(Clone, Debug)]
pub struct SweepResult {
    pub config_hash: String,
    pub axes: Vec<SweepParameter>,
    pub rows: Vec<SweepRow>,
}

const QUANTITIES: [&str; 16] = [
    "n", "j", "b0", "lambda", "sigma", "g", "t0", "eta", "gamma", "max_r", "omega_p", "f_analytic",
    "f_numeric", "leakage", "status", "errors",
];

impl SweepResult {
    pub fn to_table(&self, config: &RunConfig) -> Table {
        let mut columns = vec!["index".to_string()];
        columns.extend(self.axes.iter().map(|a| format!("axis_{}", a.name())));
        columns.extend(QUANTITIES.iter().map(|q| q.to_string()));
        let located = RunConfig {
            output_dir: None,
            ..config.clone()
        };
        let mut table = Table {
            name: "sweep".into(),
            columns,
            rows: Vec::new(),
            meta: json!({ "config": located, "points": self.rows.len() }),
        };
        for row in &self.rows {
            let mut cells = vec![Cell::from(row.point.index)];
            cells.extend(row.point.values.iter().map(|&(_, v)| Cell::num(v)));
            let p = row.params.as_ref();
            cells.push(p.map_or(Cell::Empty, |p| Cell::from(p.n)));
            cells.push(Cell::opt(p.map(|p| p.j)));
            cells.push(Cell::opt(p.map(|p| p.b0)));
            cells.push(Cell::opt(p.map(|p| p.lambda)));
            for x in [
                row.sigma, row.g, row.t0, row.eta, row.gamma, row.max_r, row.omega_p, row.f_analytic,
                row.f_numeric, row.leakage,
            ] {
                cells.push(Cell::opt(x));
            }
            cells.push(Cell::text(row.status()));
            let errors: Vec<String> = row.errors.iter().map(|e| format!("{}: {}", e.quantity, e.message)).collect();
            cells.push(Cell::text(errors.join("; ")));
            table.push(cells);
        }
        table
    }

    /// Writes `sweep.csv` and `sweep.json` into `dir`.
    pub fn write(&self, config: &RunConfig, dir: &Path) -> Result<Vec<PathBuf>> {
        ensure_dir(dir)?;
        let table = self.to_table(config);
        let mut written = Vec::new();
        for format in [OutputFormat::Csv, OutputFormat::Json] {
            let path = dir.join(format!("sweep.{}", format.extension()));
            write_file(&path, &table.render(format, &self.config_hash))?;
            written.push(path);
        }
        Ok(written)
    }
}

/// Evaluates every grid point on a pool of `workers` threads (all cores when
/// `None`). Rows come back in grid order regardless of scheduling.
pub fn run_sweep(config: &RunConfig, workers: Option<usize>) -> Result<SweepResult> {
    config.validate()?;
    let points = grid_points(config);
    info!("sweep over {} points", points.len());
    let mut builder = rayon::ThreadPoolBuilder::new();
    if let Some(w) = workers {
        if w == 0 {
            return Err(Error::Config("--workers must be >= 1".into()));
        }
        builder = builder.num_threads(w);
    }
    let pool = builder
        .build()
        .map_err(|e| Error::Config(format!("thread pool: {e}")))?;
    let rows = pool.install(|| points.par_iter().map(|p| evaluate_point(config, p)).collect());
    Ok(SweepResult {
        config_hash: config.hash(),
        axes: config.sweep.iter().map(|a| a.parameter).collect(),
        rows,
    })
}
