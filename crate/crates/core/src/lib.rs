//! Precision bounds and protocol simulations for estimating the coupling κ of
//! the quadratic collective generator 𝓗 = Σᵢ (j_z⁽ⁱ⁾)² with entangled probes:
//! NOON states, paired decoherence-free cats, twin-Fock superpositions and the
//! balanced spin-1 Dicke state.
//!
//! Spin-1 ensembles are simulated in the three-mode bosonic Fock space
//! ([`fock`]); cat states of arbitrary spin are handled analytically
//! ([`states::CatState`]).

pub mod analysis;
pub mod cli;
pub mod error;
pub mod expm;
pub mod fock;
pub mod metrology;
pub mod protocols;
pub mod spin;
pub mod states;

pub use error::{Error, Result};
pub use fock::{Axis, CollectiveOperator, FockBasis, Occupation, OperatorKind, StateVector};
pub use metrology::{DickeFrame, EstimationContext, PrecisionResult, Protocol};
pub use spin::HalfInteger;
pub use states::CatState;
