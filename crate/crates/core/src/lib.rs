//! Surface-code toolkit: Pauli algebra and stabilizer simulation, planar
//! lattices with holes, a Pauli-frame cycle simulator, a matching decoder,
//! threshold analysis, logical-operation checks, gate-circuit verification
//! and a factoring-machine resource model.

pub mod error;
pub mod gf2;
pub mod lattice;
pub mod cycle;
pub mod decoder;
pub mod analysis;
pub mod gate_verify;
pub mod logical;
pub mod pauli;
pub mod resource;

pub use error::{Error, Result};
pub use pauli::{commutes, multiply, PauliOp, PauliString, StabilizerTableau, StateVector};
