//! Exact-amplitude simulation of counterfactual quantum communication.
//!
//! The crate covers four layers:
//!
//! * [`state`], [`bell`], [`density`]: a small statevector engine with Bell-basis
//!   projection, partial traces, concurrence and fidelity.
//! * [`cfgate`]: the chained-Zeno input/output map and the counterfactual CNOT
//!   built from it, with a heralded-failure success probability.
//! * [`protocol`]: three-party entanglement transmission from an electron pair
//!   to two independent photons, plus the k-party GHZ variant.
//! * [`repeater`]: the linear repeater chain, one-shot trials, exact branch
//!   enumeration, Monte Carlo estimation and closed-form performance figures.
//!
//! Bell states follow the naming used throughout this crate, which differs from
//! the usual textbook labels: `ψ± = (|00⟩ ± |11⟩)/√2` and `φ± = (|01⟩ ± |10⟩)/√2`.
//!
//! The crate is `no_std` and only needs `alloc`.
#![no_std]

extern crate alloc;
#[cfg(test)]
extern crate std;

pub mod bell;
pub mod cfgate;
pub mod density;
mod error;
mod linalg;
pub mod log;
mod math;
pub mod protocol;
pub mod repeater;
pub mod rng;
pub mod state;

pub use bell::{BellOutcome, Pauli};
pub use cfgate::{Absorber, CfGateModel, CqzeVariant, GateResult, Polarization};
pub use density::{concurrence, fidelity, DensityMatrix};
pub use error::{Error, Result};
pub use state::{Gate, Owner, QubitId, QubitLabel, Role, StateVector};

pub use num_complex::Complex64;

/// Default tolerance for amplitude comparisons.
pub const AMPLITUDE_TOL: f64 = 1e-10;
