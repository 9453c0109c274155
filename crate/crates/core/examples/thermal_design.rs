// Largest ring whose magnon gap stays above the thermal energy.

use std::error::Error;

use magnon_memory::design::max_n_for_temperature;
use magnon_memory::model::Spin;

pub fn run_example() -> Result<(), Box<dyn Error>> {
    let (j, s) = (1.0, Spin::HALF);
    for kbt in [2.0, 1.0, 0.5, 0.1, 0.01, 1e-4] {
        println!("k_B T = {kbt:<7} -> N <= {}", max_n_for_temperature(kbt, j, s)?);
    }
    Ok(())
}

fn main() -> Result<(), Box<dyn Error>> {
    run_example()
}
