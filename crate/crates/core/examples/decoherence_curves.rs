// Decay rate, dispersive shift and fidelity curves for an inhomogeneous ring.

use std::error::Error;
use std::f64::consts::PI;

use magnon_memory::boson::BosonModel;
use magnon_memory::decoherence::{
    adiabaticity, decay_rate, default_broadening, fidelity_large_n, fidelity_small_n, numeric_fidelity,
    omega_shift, LargeNFidelityParams, SmallNFidelityParams,
};
use magnon_memory::model::{chi_spectrum, effective_coupling, gaussian_profile, swap_time, PhysicalParams, Spin};

pub fn run_example() -> Result<(), Box<dyn Error>> {
    let params = PhysicalParams::zero_field(100, Spin::HALF, 1.0, 1.0)?;
    let chi = chi_spectrum(&gaussian_profile(100, 20.0, 1.0)?)?;
    let g = effective_coupling(&params);
    let eta = default_broadening(&params)?;
    let gamma = decay_rate(&params, &chi, eta)?;
    let adiabatic = adiabaticity(&params, &chi)?;
    println!("g = {g:.4}, eta = {eta:.4e}, gamma / g = {:.4e}", gamma / g);
    println!("max r_k = {:.4e} at k = {}", adiabatic.max, adiabatic.argmax);
    println!("Omega' = {:.4e}", omega_shift(&params, &chi)?);

    let large = LargeNFidelityParams::new(gamma, g)?;
    let model = BosonModel::new(params.clone(), chi)?;
    let t0 = swap_time(&params);
    let times: Vec<f64> = (0..=4).map(|i| 0.5 * t0 * i as f64).collect();
    let numeric = numeric_fidelity(&model, &times)?;
    for (t, f) in times.iter().zip(&numeric.values) {
        println!("t / t0 = {:.1}  analytic {:.8}  numeric {f:.8}", t / t0, fidelity_large_n(*t, &large));
    }

    let sample = LargeNFidelityParams::new(0.02, 1.0)?;
    println!("gamma/g = 0.02: F(pi/2g) = {:.6}", fidelity_large_n(PI / 2.0, &sample));
    let small = SmallNFidelityParams::new(-20.0, 1.0)?;
    println!("Omega' = -20 g: F(pi/2 delta1) = {:.6}", fidelity_small_n(PI / (2.0 * small.delta1), &small));
    Ok(())
}

fn main() -> Result<(), Box<dyn Error>> {
    run_example()
}
