//! Distributions over non-empty strings: stochastic regular expressions,
//! linear cost register automata, geometric mixtures, and identity testers.

pub mod alphabet;
pub mod cra;
pub mod error;
pub mod geometric;
pub mod mass;
pub mod numfmt;
pub mod sre;
pub mod testing;

pub use alphabet::{Alphabet, Word, DEFAULT_ENUMERATION_BUDGET};
pub use error::{Error, Result};
pub use mass::{EmpiricalDistribution, MassFunction};
pub use sre::SreExpr;
