//! Exact counting, recursive operators, asymptotic formulas and random-model
//! experiments for degree sequences of simple graphs.
//!
//! Vertices are 0-based throughout the library. The command-line front end
//! converts from the 1-based labels users type.

pub mod asymptotics;
pub mod error;
pub mod exact;
pub mod exec;
pub mod graphical;
pub mod models;
pub mod operators;
pub mod scalar;
pub mod sequence;

pub use error::{Error, Result};
pub use exact::{Counter, ExactCount, ExactProb, PairConstraint};
pub use exec::Exec;
pub use sequence::{DegreeSequence, Parity, SequenceStats};
