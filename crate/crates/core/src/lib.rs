//! Spin-wave quantum memory: an electron spin qubit stored in the collective
//! magnon mode of a ring of nuclear spins.
//!
//! Units have `hbar = 1`. Electron states are indexed `0 = |+>`, `1 = |->`;
//! magnon Fock levels are indexed by occupation.

pub mod boson;
pub mod cli;
pub mod decoherence;
pub mod density;
pub mod design;
pub mod error;
pub mod exact;
pub mod model;
pub mod protocol;

pub use error::{Error, Result};
