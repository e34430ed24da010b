//! Four-band topological insulator model.
//!
//! * [`model`]: Bloch Hamiltonians of the 3-D four-band model and the 2-D
//!   block model, scalar band functions and phase classification.
//! * [`states`]: closed-form bulk spinors and the surface-state envelope.
//! * [`entanglement`]: concurrence, reduced density matrices and entropy
//!   under the spin-orbital bipartition.
//! * [`phase`]: band structure, bulk gap and entanglement sweeps.
//! * [`ribbon`]: lattice ribbon spectra, helicity and spin-filtered
//!   conductance.
//! * [`numerics`]: the Hermitian eigensolver and 1-D numerical helpers.
//!
//! Loops over grid points run on rayon when the `parallel` feature is enabled
//! (the default); see [`exec::Execution`].

// `!(x > 0.0)` style guards are deliberate: they also reject NaN.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod entanglement;
pub mod error;
pub mod exec;
pub mod io;
pub mod model;
pub mod numerics;
pub mod phase;
pub mod ribbon;
pub mod states;

pub use error::{ModelError, NumericsError};
pub use exec::Execution;
