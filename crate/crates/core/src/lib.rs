//! Ordinal notations below ε₀ and the combinatorics built on them.
//!
//! * [`ordinal`]: Cantor-normal-form ordinals with order, arithmetic and
//!   maximal coefficients.
//! * [`fundamental`]: fundamental sequences, α-largeness and the descent
//!   machinery around `Φ(α) = ω³·α + ω³ + l + 2`.
//! * [`codes`]: the Cantor-pairing encoding of ordinals as naturals with a
//!   code-level fundamental sequence.
//! * [`ramsey`]: colorings, Erdős–Rado trees, γ-descent certificates and
//!   brute-force homogeneous-set oracles.
//! * [`syntax`]: the text syntax used by the `ord` command line tool.

pub mod cli;
pub mod codes;
pub mod error;
pub mod fundamental;
pub mod growth;
pub mod limits;
pub mod ordinal;
pub mod ramsey;
pub mod syntax;

pub use codes::OrdCode;
pub use error::{Error, Result};
pub use fundamental::{DescentTrace, FiniteSet};
pub use limits::Limits;
pub use ordinal::{Kind, Nat, Ordinal};
