// Sweep the Gaussian width and exchange, then build the figure datasets.

use std::error::Error;

use magnon_memory::design::{
    reproduce_figure, run_sweep, Figure, OutputFormat, ProfileSpec, RunConfig, SweepAxis, SweepParameter,
};
use magnon_memory::model::{PhysicalParams, Spin};

pub fn run_example() -> Result<(), Box<dyn Error>> {
    let params = PhysicalParams::zero_field(40, Spin::HALF, 1.0, 1.0)?;
    let mut config = RunConfig::new(params, ProfileSpec::Homogeneous);
    config.sweep = vec![
        SweepAxis { parameter: SweepParameter::SigmaOverN, values: vec![0.05, 0.1, 0.2] },
        SweepAxis { parameter: SweepParameter::J, values: vec![0.0, 1.0] },
    ];
    let result = run_sweep(&config, Some(2))?;
    for row in &result.rows {
        println!(
            "sigma = {:>4.1}  J = {}  gamma = {:?}  F(t0) = {:?}  status = {}",
            row.sigma.unwrap_or(f64::NAN),
            row.params.as_ref().map_or(f64::NAN, |p| p.j),
            row.gamma,
            row.f_numeric,
            row.status()
        );
    }

    for figure in [Figure::Fig3, Figure::Fig4, Figure::Fig5] {
        let data = reproduce_figure(figure, None)?;
        let csv = data.table.render(OutputFormat::Csv, &data.settings_hash);
        println!("{figure}: {} rows, marker value {:?}", csv.lines().count() - 3, data.marker_value);
    }
    Ok(())
}

fn main() -> Result<(), Box<dyn Error>> {
    run_example()
}
