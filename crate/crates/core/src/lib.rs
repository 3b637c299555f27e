//! Entanglement generation rates and single-shot entanglement capacities of
//! nonlocal Hamiltonians on two qubits, two qutrits and three qubits.
//!
//! The entanglement of a pure state is measured by the Euclidean norm of the
//! top-order correlation tensor in its Bloch representation, minus the value
//! it takes on product states. The rate `Γ = dE/dt` follows from the
//! Heisenberg equation of motion of that tensor, and the capacity is its
//! maximum over pure states.
//!
//! Module map:
//!
//! - [`linalg`], [`state`]: dense complex algebra, propagators, partial traces,
//!   Schmidt decomposition, Haar sampling
//! - [`generators`]: Pauli and Gell-Mann sets and structure constants
//! - [`bloch`]: Bloch decompositions and the tensor-norm measure
//! - [`hamiltonian`]: diagonal-form interaction Hamiltonians
//! - [`rates`]: generic, closed-form and finite-difference rates
//! - [`capacity`]: multi-start maximization of the rate, three-qubit classification
//! - [`protocol`]: steered two-qubit evolution along the optimal family
//! - [`report`]: JSON/CSV encodings and the reproduction checks

pub mod bloch;
pub mod capacity;
pub mod error;
pub mod generators;
pub mod hamiltonian;
pub mod linalg;
pub mod protocol;
pub mod rates;
pub mod report;
pub mod state;
pub mod system;

pub use error::{Error, Result};
pub use hamiltonian::{Couplings, HamiltonianFile, InteractionSpec};
pub use state::{PureState, StateFile};
pub use system::System;
