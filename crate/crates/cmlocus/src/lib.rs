//! CM loci of the modular curves X0(M, N) for orders in Q(i) and Q(sqrt(-3)).

pub mod arith;
pub mod cli;
pub mod error;
pub mod graph;
pub mod locus;

pub use error::{Error, Result};
