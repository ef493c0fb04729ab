//! Assisted unambiguous sub-state discrimination (USSD) of two nonorthogonal
//! qubit states that are entangled with an environment qubit.
//!
//! The crate is `no_std` (it needs `alloc`) and is split into:
//!
//! * [`qcore`]: dense complex linear algebra for registers of one to three
//!   labelled qubits (states, operators, partial traces, measurements and
//!   unitary completion).
//! * [`coherence`]: Wootters concurrence, tangle, three-tangle and the
//!   tripartite [`coherence::CoherenceLedger`].
//! * [`ussd`]: problem instances, optimal strategies, the joint unitary on
//!   system and ancilla, protocol execution and the S–A separability
//!   construction.
//! * [`teleport`]: probabilistic teleportation over a partially entangled
//!   channel, with each Bell-measurement branch reduced to a USSD instance.
//! * [`oracle`]: brute-force verifiers that never call the analytic routines
//!   they check.

#![no_std]
#![deny(rust_2018_idioms)]
#![warn(missing_debug_implementations)]

extern crate alloc;
#[cfg(test)]
extern crate std;

pub mod coherence;
pub mod error;
pub mod linalg;
pub mod oracle;
pub mod qcore;
pub mod quadrature;
pub mod teleport;
pub mod tolerance;
pub mod ussd;

pub use error::{Error, Result};
pub use num_complex::Complex64;
pub use tolerance::Tolerances;

#[cfg(test)]
pub(crate) mod testutil;
