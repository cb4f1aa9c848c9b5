//! Simulation and geometric synthesis of fSim gates on two tunably
//! coupled three-level Xmon qubits.

pub mod bessel;
pub mod config;
pub mod device;
pub mod dynamics;
pub mod error;
pub mod experiments;
pub mod expm;
pub mod hamiltonian;
pub mod hilbert;
pub mod metrics;
pub mod ode;
pub mod synthesis;

pub use error::{Error, Result};
