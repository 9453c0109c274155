//! Command-line front end. Every subcommand produces a table that is printed
//! to stdout or, with `--out`, written to `<out>/<name>.<csv|json>`.

use std::ffi::OsString;
use std::path::{Path, PathBuf};

use clap::{Parser, Subcommand, ValueEnum};
use log::info;
use num_complex::Complex64 as C64;
use serde_json::json;

use crate::decoherence::{
    decay_rate, default_broadening, fidelity_large_n, fidelity_small_n, numeric_fidelity,
    LargeNFidelityParams, SmallNFidelityParams,
};
use crate::density::{trace_distance, PauliState, QubitState};
use crate::design::{
    max_n_for_temperature_capped, reproduce_figure, run_sweep, Cell, Figure, OutputFormat, RunConfig, Table,
    DEFAULT_MAX_N,
};
use crate::error::{Error, Result};
use crate::exact::build_exact_with_cap;
use crate::model::{chi_spectrum, dispersion_all, effective_coupling, swap_time, Spin};
use crate::protocol::{ideal_round_trip_unitary, retrieve, round_trip_process_fidelity, store, ComplexMatrix, ProtocolReport};

pub const LOG_ENV: &str = "MAGNON_MEMORY_LOG";

#[derive(Debug, Parser)]
#[command(name = "magnon-memory", version, about = "Spin-wave quantum memory simulator")]
pub struct Cli {
    /// JSON run configuration.
    #[arg(long, global = true)]
    pub config: Option<PathBuf>,
    /// Output directory; results go to stdout when neither this nor the config sets one.
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
    /// Worker threads for sweeps and curve sampling.
    #[arg(long, global = true)]
    pub workers: Option<usize>,
    /// Overrides the config seed.
    #[arg(long, global = true)]
    pub seed: Option<u64>,
    #[arg(long, global = true, default_value = "csv")]
    pub format: OutputFormat,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Regime {
    LargeN,
    SmallN,
    Numeric,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Magnon frequencies omega_k.
    Dispersion,
    /// Fourier coefficients chi_k of the coupling profile.
    Chi,
    /// Write the input state into the memory mode.
    Store {
        /// Pauli input such as +x or -z; defaults to the config state.
        #[arg(long, allow_hyphen_values = true)]
        state: Option<PauliState>,
    },
    /// Write and read back, reporting the round-trip map.
    Retrieve {
        #[arg(long, allow_hyphen_values = true)]
        state: Option<PauliState>,
    },
    /// Fidelity curve in one of the three regimes.
    Fidelity {
        #[arg(long, value_enum)]
        regime: Regime,
        /// Slow oscillation frequency of the small-N formula (default g).
        #[arg(long)]
        delta1: Option<f64>,
    },
    /// Exact spin dynamics against the boson model.
    OracleCompare,
    /// Largest ring size compatible with temperature k_B T.
    DesignN {
        #[arg(long)]
        kbt: f64,
        /// Exchange J; taken from the config when omitted.
        #[arg(long)]
        j: Option<f64>,
        /// Nuclear spin s; taken from the config when omitted.
        #[arg(long)]
        spin: Option<f64>,
        #[arg(long, default_value_t = DEFAULT_MAX_N)]
        cap: u64,
    },
    /// Parameter sweep over the config's axes.
    Sweep,
    /// Dataset for fig3, fig4 or fig5.
    ReproduceFigure { figure: Figure },
}

/// Parses `args`, runs the command and returns the process exit code.
pub fn main_with_args<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let _ = env_logger::Builder::from_env(env_logger::Env::new().filter_or(LOG_ENV, "warn")).try_init();
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let _ = e.print();
            return code;
        }
    };
    match run(&cli) {
        Ok(()) => 0,
        Err(e) => {
            eprintln!("error: {e}");
            e.exit_code()
        }
    }
}

fn load_config(cli: &Cli) -> Result<Option<RunConfig>> {
    let Some(path) = &cli.config else {
        return Ok(None);
    };
    let mut cfg = RunConfig::load(path)?;
    if let Some(seed) = cli.seed {
        cfg.seed = seed;
    }
    Ok(Some(cfg))
}

fn require(cfg: Option<RunConfig>, command: &str) -> Result<RunConfig> {
    cfg.ok_or_else(|| Error::Config(format!("{command} needs --config")))
}

pub fn run(cli: &Cli) -> Result<()> {
    let cfg = load_config(cli)?;
    let out_dir = cli
        .out
        .clone()
        .or_else(|| cfg.as_ref().and_then(|c| c.output_dir.clone()));
    let (table, hash) = match &cli.command {
        Command::Dispersion => {
            let cfg = require(cfg, "dispersion")?;
            (dispersion_table(&cfg), cfg.hash())
        }
        Command::Chi => {
            let cfg = require(cfg, "chi")?;
            (chi_table(&cfg)?, cfg.hash())
        }
        Command::Store { state } => {
            let cfg = require(cfg, "store")?;
            (store_table(&cfg, *state)?, cfg.hash())
        }
        Command::Retrieve { state } => {
            let cfg = require(cfg, "retrieve")?;
            (retrieve_table(&cfg, *state)?, cfg.hash())
        }
        Command::Fidelity { regime, delta1 } => {
            let cfg = require(cfg, "fidelity")?;
            (fidelity_table(&cfg, *regime, *delta1, cli.workers)?, cfg.hash())
        }
        Command::OracleCompare => {
            let cfg = require(cfg, "oracle-compare")?;
            (oracle_table(&cfg)?, cfg.hash())
        }
        Command::DesignN { kbt, j, spin, cap } => design_table(cfg.as_ref(), *kbt, *j, *spin, *cap)?,
        Command::Sweep => {
            let cfg = require(cfg, "sweep")?;
            let result = run_sweep(&cfg, cli.workers)?;
            if let Some(dir) = &out_dir {
                for p in result.write(&cfg, dir)? {
                    info!("wrote {}", p.display());
                }
                return Ok(());
            }
            (result.to_table(&cfg), result.config_hash.clone())
        }
        Command::ReproduceFigure { figure } => {
            let data = reproduce_figure(*figure, cfg.as_ref())?;
            (data.table, data.settings_hash)
        }
    };
    emit(&table, out_dir.as_deref(), cli.format, &hash)
}

fn emit(table: &Table, dir: Option<&Path>, format: OutputFormat, hash: &str) -> Result<()> {
    match dir {
        Some(dir) => {
            for p in table.write(dir, format, hash)? {
                info!("wrote {}", p.display());
            }
        }
        None => print!("{}", table.render(format, hash)),
    }
    Ok(())
}

fn dispersion_table(cfg: &RunConfig) -> Table {
    let mut t = Table::new("dispersion", &["k", "omega"]).with_meta(json!({ "params": cfg.params }));
    for (i, w) in dispersion_all(&cfg.params).into_iter().enumerate() {
        t.push(vec![Cell::from(i + 1), Cell::num(w)]);
    }
    t
}

fn chi_table(cfg: &RunConfig) -> Result<Table> {
    let profile = cfg.profile()?;
    let chi = chi_spectrum(&profile)?;
    let mut t = Table::new("chi", &["k", "re_chi", "im_chi", "abs_chi"]).with_meta(json!({
        "params": cfg.params,
        "profile": cfg.profile,
        "chi_reference": profile.chi_reference(),
        "spectator_weight": chi.spectator_weight(),
    }));
    for (i, c) in chi.values().iter().enumerate() {
        t.push(vec![Cell::from(i + 1), Cell::num(c.re), Cell::num(c.im), Cell::num(c.norm())]);
    }
    Ok(t)
}

fn input_state(cfg: &RunConfig, label: Option<PauliState>) -> Result<QubitState> {
    match label {
        Some(l) => Ok(QubitState::pauli(l)),
        None => cfg.input_state(),
    }
}

const MATRIX_COLUMNS: [&str; 8] = ["re00", "im00", "re01", "im01", "re10", "im10", "re11", "im11"];

fn matrix_cells(m: &crate::density::Mat2) -> Vec<Cell> {
    [(0, 0), (0, 1), (1, 0), (1, 1)]
        .iter()
        .flat_map(|&(r, c)| [Cell::num(m[(r, c)].re), Cell::num(m[(r, c)].im)])
        .collect()
}

fn store_table(cfg: &RunConfig, label: Option<PauliState>) -> Result<Table> {
    let model = cfg.boson_model()?;
    let rho = input_state(cfg, label)?;
    let outcome = store(&rho, &model)?;
    let report = ProtocolReport::from_store(&rho, &outcome, &cfg.params);
    let mut columns = vec!["leakage", "fidelity", "t0"];
    columns.extend(MATRIX_COLUMNS);
    let mut t = Table::new("store", &columns).with_meta(&report);
    let mut row = vec![Cell::num(report.leakage), Cell::num(report.fidelity), Cell::num(report.t0)];
    row.extend(matrix_cells(outcome.stored.matrix()));
    t.push(row);
    Ok(t)
}

fn retrieve_table(cfg: &RunConfig, label: Option<PauliState>) -> Result<Table> {
    let model = cfg.boson_model()?;
    let rho = input_state(cfg, label)?;
    let stored = store(&rho, &model)?;
    let out = retrieve(&stored.state, &model)?;
    let u = ideal_round_trip_unitary();
    let expected = u * rho.matrix() * u.adjoint();
    let distance = trace_distance(out.matrix(), &expected);
    let process = round_trip_process_fidelity(&model, &u)?;
    let mut columns = vec!["trace_distance", "process_fidelity", "purity", "elapsed"];
    columns.extend(MATRIX_COLUMNS);
    let mut t = Table::new("retrieve", &columns).with_meta(json!({
        "input_rho": ComplexMatrix::from(rho.matrix()),
        "output_rho": ComplexMatrix::from(out.matrix()),
        "expected_rho": ComplexMatrix::from(&expected),
        "leakage_after_store": stored.leakage,
        "params": cfg.params,
    }));
    let mut row = vec![
        Cell::num(distance),
        Cell::num(process),
        Cell::num(out.purity()),
        Cell::num(2.0 * stored.t0),
    ];
    row.extend(matrix_cells(out.matrix()));
    t.push(row);
    Ok(t)
}

fn time_grid(cfg: &RunConfig, default_stop: f64, default_points: usize) -> Result<Vec<f64>> {
    match &cfg.time_grid {
        Some(g) => g.samples(),
        None => crate::design::TimeGrid {
            start: 0.0,
            stop: default_stop,
            points: default_points,
        }
        .samples(),
    }
}

fn fidelity_table(cfg: &RunConfig, regime: Regime, delta1: Option<f64>, workers: Option<usize>) -> Result<Table> {
    let params = &cfg.params;
    let chi = chi_spectrum(&cfg.profile()?)?;
    let g = effective_coupling(params);
    let t0 = swap_time(params);
    let times = time_grid(cfg, 4.0 * t0, 201)?;

    let eta = || cfg.broadening.map_or_else(|| default_broadening(params), Ok);
    let gamma = || decay_rate(params, &chi, eta()?);
    let large = || LargeNFidelityParams::new(gamma()?, g);
    let small = || {
        let p = SmallNFidelityParams::from_model(params, &chi)?;
        match delta1 {
            Some(d) => p.with_delta1(d),
            None => Ok(p),
        }
    };
    let meta = json!({
        "regime": regime_name(regime),
        "g": g,
        "t0": t0,
        "eta": eta().ok(),
        "gamma": gamma().ok(),
        "phi": large().ok().map(|p| p.phi()),
        "omega_p": small().ok().map(|p| p.omega_p),
        "xi": small().ok().map(|p| p.xi()),
        "delta1": small().ok().map(|p| p.delta1),
        "params": params,
        "profile": cfg.profile,
    });

    let (analytic, numeric): (Vec<Option<f64>>, Vec<Option<f64>>) = match regime {
        Regime::LargeN => {
            let p = large()?;
            (times.iter().map(|&t| Some(fidelity_large_n(t, &p))).collect(), vec![None; times.len()])
        }
        Regime::SmallN => {
            let p = small()?;
            (times.iter().map(|&t| Some(fidelity_small_n(t, &p))).collect(), vec![None; times.len()])
        }
        Regime::Numeric => {
            let model = cfg.boson_model()?;
            let curve = with_pool(workers, || numeric_fidelity(&model, &times))?;
            let analytic = match large() {
                Ok(p) => times.iter().map(|&t| Some(fidelity_large_n(t, &p))).collect(),
                Err(_) => vec![None; times.len()],
            };
            (analytic, curve.values.into_iter().map(Some).collect())
        }
    };
    let mut t = Table::new("fidelity", &["t", "f_analytic", "f_numeric", "regime"]).with_meta(meta);
    for ((time, a), n) in times.iter().zip(analytic).zip(numeric) {
        t.push(vec![Cell::num(*time), Cell::opt(a), Cell::opt(n), Cell::text(regime_name(regime))]);
    }
    Ok(t)
}

fn regime_name(r: Regime) -> &'static str {
    match r {
        Regime::LargeN => "large-n",
        Regime::SmallN => "small-n",
        Regime::Numeric => "numeric",
    }
}

fn with_pool<T: Send>(workers: Option<usize>, f: impl FnOnce() -> Result<T> + Send) -> Result<T> {
    match workers {
        None => f(),
        Some(0) => Err(Error::Config("--workers must be >= 1".into())),
        Some(w) => rayon::ThreadPoolBuilder::new()
            .num_threads(w)
            .build()
            .map_err(|e| Error::Config(format!("thread pool: {e}")))?
            .install(f),
    }
}

fn oracle_table(cfg: &RunConfig) -> Result<Table> {
    let params = &cfg.params;
    let profile = cfg.profile()?;
    let h = build_exact_with_cap(params, &profile, cfg.tolerances.max_exact_dim)?;
    let t0 = swap_time(params);
    let times = time_grid(cfg, 2.0 * t0, 101)?;
    let basis = h.basis();
    let one = C64::new(1.0, 0.0);
    let psi = basis.product_state([one, C64::default()], &vec![0; params.n])?;
    let exact = h.evolve_many(&psi, &times)?;

    let model = cfg.boson_model()?;
    let hb = crate::boson::build_boson_hamiltonian(&model)?;
    let phi = model.vacuum_state([one, C64::default()])?;

    let mut t = Table::new("oracle_compare", &["t", "p_up_exact", "p_up_boson", "deviation"]);
    let mut worst = 0.0f64;
    for (time, state) in times.iter().zip(&exact) {
        let pe = basis.up_population(state);
        let pb = hb.evolve(&phi, *time)?.up_population();
        worst = worst.max((pe - pb).abs());
        t.push(vec![Cell::num(*time), Cell::num(pe), Cell::num(pb), Cell::num((pe - pb).abs())]);
    }
    Ok(t.with_meta(json!({
        "params": params,
        "profile": cfg.profile,
        "dimension": h.dim(),
        "t0": t0,
        "max_deviation": worst,
    })))
}

fn design_table(cfg: Option<&RunConfig>, kbt: f64, j: Option<f64>, spin: Option<f64>, cap: u64) -> Result<(Table, String)> {
    let j = j
        .or(cfg.map(|c| c.params.j))
        .ok_or_else(|| Error::Config("design-n needs --j or --config".into()))?;
    let s = match spin {
        Some(s) => Spin::from_f64(s)?,
        None => cfg
            .map(|c| c.params.s)
            .ok_or_else(|| Error::Config("design-n needs --spin or --config".into()))?,
    };
    let n = max_n_for_temperature_capped(kbt, j, s, cap)?;
    let mut t = Table::new("design_n", &["kbt", "j", "s", "max_n"]).with_meta(json!({ "cap": cap }));
    t.push(vec![Cell::num(kbt), Cell::num(j), Cell::num(s.value()), Cell::Int(n as i64)]);
    let inputs = json!({ "kbt": kbt, "j": j, "s": s.value(), "cap": cap });
    let hash = {
        use sha2::{Digest, Sha256};
        hex::encode(Sha256::digest(inputs.to_string().as_bytes()))
    };
    Ok((t, hash))
}
