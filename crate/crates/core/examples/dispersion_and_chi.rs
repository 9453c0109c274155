// Magnon dispersion of a ring and the Fourier spectrum of Gaussian coupling profiles.

use std::error::Error;

use magnon_memory::model::{chi_spectrum, dispersion_all, gaussian_profile, PhysicalParams, Spin};

pub fn run_example() -> Result<(), Box<dyn Error>> {
    let params = PhysicalParams::zero_field(12, Spin::HALF, 1.0, 1.0)?;
    println!("omega_k for N = 12, J = 1:");
    for (i, w) in dispersion_all(&params).iter().enumerate() {
        println!("  k = {:2}  omega = {w:.6}", i + 1);
    }

    let n = 100;
    for frac in [0.05, 0.1, 0.2] {
        let chi = chi_spectrum(&gaussian_profile(n, frac * n as f64, 1.0)?)?;
        println!(
            "sigma = {frac:.2} N: sum |chi_k|^2 = {:.4e}, |chi_1| = {:.4e}, |chi_50| = {:.4e}",
            chi.spectator_weight(),
            chi.get(1).norm(),
            chi.get(50).norm()
        );
    }
    Ok(())
}

fn main() -> Result<(), Box<dyn Error>> {
    run_example()
}
