// Full spin-ring dynamics against the bosonized model for a small ring.

use std::error::Error;

use magnon_memory::boson::{evolve_constant, BosonModel};
use magnon_memory::exact::build_exact;
use magnon_memory::model::{swap_time, CouplingProfile, PhysicalParams, Spin};
use num_complex::Complex64 as C64;

pub fn run_example() -> Result<(), Box<dyn Error>> {
    let params = PhysicalParams::zero_field(6, Spin::HALF, 1.0, 1.0)?;
    let profile = CouplingProfile::homogeneous(6, params.lambda)?;
    let exact = build_exact(&params, &profile)?;
    println!("Hilbert space dimension {}", exact.dim());
    println!("[H, C] norm {:.2e}", exact.excitation_commutator_norm());

    let up = [C64::new(1.0, 0.0), C64::default()];
    let psi = exact.basis().product_state(up, &[0; 6])?;
    let model = BosonModel::homogeneous(params.clone())?;
    let phi = model.vacuum_state(up)?;

    let t0 = swap_time(&params);
    let times: Vec<f64> = (0..=8).map(|i| 0.25 * t0 * i as f64).collect();
    for (t, state) in times.iter().zip(exact.evolve_many(&psi, &times)?) {
        let p_exact = exact.basis().up_population(&state);
        let p_boson = evolve_constant(&model, &phi, *t)?.up_population();
        println!("t / t0 = {:.2}  P+ exact {p_exact:.6}  boson {p_boson:.6}", t / t0);
    }
    Ok(())
}

fn main() -> Result<(), Box<dyn Error>> {
    run_example()
}
