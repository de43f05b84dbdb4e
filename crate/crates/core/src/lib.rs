//! Analogy-preserving Boolean classifiers.
//!
//! Truth tables and their algebra ([`boolfun`]), finite Boolean relations
//! ([`relations`]), the preservation Galois connection at bounded arity
//! ([`galois`]), the Boolean models of analogy ([`analogy`]), analogical
//! inference with exact error measurement ([`classifier`]) and the full
//! classification check ([`table`]).

pub mod analogy;
pub mod boolfun;
pub mod classifier;
pub mod error;
pub mod galois;
pub mod relations;
pub mod table;

pub use error::{Error, Result};
