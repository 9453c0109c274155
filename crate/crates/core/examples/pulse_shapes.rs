// Rectangular and smoothly ramped coupling pulses of equal area store the same state.

use std::error::Error;

use magnon_memory::boson::{evolve_pulsed, BosonModel, PulseShape};
use magnon_memory::model::{swap_time, PhysicalParams, Spin};
use num_complex::Complex64 as C64;

pub fn run_example() -> Result<(), Box<dyn Error>> {
    let params = PhysicalParams::zero_field(8, Spin::HALF, 0.0, 1.0)?;
    let model = BosonModel::homogeneous(params.clone())?;
    let area = params.lambda * swap_time(&params);
    let h = std::f64::consts::FRAC_1_SQRT_2;
    let psi = model.vacuum_state([C64::new(h, 0.0), C64::new(0.0, h)])?;

    let rect = PulseShape::rectangular(params.lambda, swap_time(&params))?;
    let ramp = PulseShape::gaussian_ramp(1.0, 30.0, 2.0, 4001)?.scaled_to_area(area)?;
    let a = evolve_pulsed(&model, &psi, &rect)?;
    let b = evolve_pulsed(&model, &psi, &ramp)?;
    println!("pulse area {area:.6}; rectangular lasts {:.3}, ramped lasts {:.3}", rect.duration(), ramp.duration());
    println!("final-state distance {:.2e}", (a.amplitudes() - b.amplitudes()).norm());
    println!("memory occupation after the ramp {:.12}", b.occupation(8)?);
    Ok(())
}

fn main() -> Result<(), Box<dyn Error>> {
    run_example()
}
