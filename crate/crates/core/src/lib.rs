//! Secondary invariants of permutation groups built from higher Specht polynomials.

pub mod combinatorics;
pub mod error;
pub mod exact_linalg;
pub mod multiplicity;
pub mod permgroup;
pub mod polynomial;
pub mod rep_matrices;
pub mod secondary_engine;
pub mod series;
pub mod specht_poly;
pub mod sym_characters;
pub mod tabloid;

pub use error::{Error, Result};
