// Write the four tomographic Pauli states into the memory mode and read them back.

use std::error::Error;

use magnon_memory::boson::BosonModel;
use magnon_memory::density::{trace_distance, PauliState, QubitState};
use magnon_memory::model::{PhysicalParams, Spin};
use magnon_memory::protocol::{
    ideal_round_trip_unitary, ideal_store_map, map_fidelity, retrieve, round_trip_process_fidelity, store,
};

pub fn run_example() -> Result<(), Box<dyn Error>> {
    let params = PhysicalParams::zero_field(10, Spin::HALF, 1.0, 1.0)?;
    let model = BosonModel::homogeneous(params)?;
    let u = ideal_round_trip_unitary();

    for label in PauliState::TOMOGRAPHIC {
        let rho = QubitState::pauli(label);
        let written = store(&rho, &model)?;
        let read = retrieve(&written.state, &model)?;
        let expected = u * rho.matrix() * u.adjoint();
        println!(
            "{label:?}: store fidelity {:.12}, distance to ideal {:.2e}, leakage {:.2e}, round-trip error {:.2e}",
            map_fidelity(&rho, &written.stored),
            trace_distance(written.stored.matrix(), ideal_store_map(&rho).matrix()),
            written.leakage,
            trace_distance(read.matrix(), &expected),
        );
    }
    println!("process fidelity of the round trip: {:.12}", round_trip_process_fidelity(&model, &u)?);
    Ok(())
}

fn main() -> Result<(), Box<dyn Error>> {
    run_example()
}
