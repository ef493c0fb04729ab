//! Unambiguous discrimination of a system qubit entangled with an
//! environment, assisted by an ancilla.
//!
//! Registers are `(S, C)` for the initial state and `(S, A, C)` after the
//! joint unitary.

use core::f64::consts::{PI, TAU};

mod instance;
mod phase;
mod protocol;
mod separability;
mod strategy;

pub use instance::{build_chi, make_instance, polar, Embedding, OptimalCase, UssdInstance};
pub use phase::{bargmann_phase, loop_phase, loop_states, three_overlap_phase};
pub use protocol::{
    build_unitary, build_unitary_with, expected_gamma, run_protocol, run_protocol_with, total_coherence_conservation,
    AncillaOutcome, ConservationReport, ProtocolRun,
};
pub use separability::{separability_params, zeta_pair, SeparabilityParams, ZetaComponent};
pub use strategy::{optimal_strategy, p_suc_max, success_probability, UssdStrategy};

/// Wraps an angle to `(-pi, pi]`.
pub fn wrap_pi(x: f64) -> f64 {
    let y = (x + PI).rem_euclid(TAU) - PI;
    if y <= -PI {
        y + TAU
    } else {
        y
    }
}
