//! Dense states and operators on registers of one to three labelled qubits.
//!
//! Amplitude indices follow the register order: the leftmost label is the
//! most significant bit.

mod density;
mod measure;
mod register;
mod state;
mod unitary;

pub use density::DensityMatrix;
pub use measure::{projective_measure, MeasurementOutcome};
pub use register::{QubitLabel, Register};
pub use state::PureState;
pub use unitary::{complete_unitary, complete_unitary_with, gates, Unitary};

use crate::Result;

/// Reduced state of `psi` on `keep` (in the order given).
pub fn partial_trace(psi: &PureState, keep: &[QubitLabel]) -> Result<DensityMatrix> {
    DensityMatrix::from_pure(psi).partial_trace(keep)
}
