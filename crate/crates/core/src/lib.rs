//! Renormalization of perturbed difference equations through
//! Newton-Maclaurin (forward-difference) expansions.
//!
//! The crate is layered bottom-up:
//!
//! * [`seqalg`]: exact algebra of exponential-binomial sequences.
//! * [`newton`]: difference tables and truncated Newton series.
//! * [`lindiff`]: linear constant-coefficient recurrences with resonant forcing.
//! * [`renorm`]: order-by-order expansion, renormalization equations, global
//!   solutions, and the homotopy variant.
//! * [`cases`]: the registered problem families.
//! * [`verify`]: exact iteration, error metrics and reports.

pub mod cases;
pub mod error;
pub mod lindiff;
mod linsolve;
pub mod newton;
pub mod renorm;
pub mod seqalg;
pub mod verify;

pub use error::{Error, Result};
