//! Hybrid quantum walk (HQW) variational ansatz and its QAOA baseline.
//!
//! The crate is organised bottom-up:
//!
//! - [`graphs`]: problem instances, exact oracles, the hypercube walk graph.
//! - [`pauli`] and [`hamiltonian`]: Pauli-string operators, problem and mixer
//!   Hamiltonians, Jordan product negativity, curvature.
//! - [`simulator`]: statevector engine with a coin qubit.
//! - [`ansatz`]: QAOA / HQW circuits, path expansion, QAOA reduction.
//! - [`optimizer`]: adjoint gradients, Adam, seeded multi-restart runs.
//! - [`algebra`]: Lie and Jordan-Lie closures of Pauli-string generators.
//! - [`control`]: Pontryagin analysis of the optimal coin axis.
//! - [`bench`]: experiment orchestration with CSV / JSON / SVG output.
//!
//! Runnable walkthroughs live in `crates/core/examples/`.

// `!(x > 0.0)` style checks are meant to reject NaN as well.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod algebra;
pub mod ansatz;
pub mod bench;
pub mod control;
pub mod dense;
pub mod error;
pub mod graphs;
pub mod hamiltonian;
pub mod optimizer;
pub mod pauli;
pub mod simulator;

pub use error::{HqwError, Result};
pub use num_complex::Complex64;
