//! Exact computations around k-free integers in monogenic number fields:
//! ideal arithmetic in Hermite normal form, prime ideals by Kummer-Dedekind,
//! lattice sieving of the k-free indicator, correlation functions as exact
//! averages and as Euler products with rigorous tails, and the characters,
//! weights and eigenfunction checks of the associated pure point spectrum.

pub mod ball;
pub mod correlation;
pub mod error;
pub mod field;
pub mod hnf;
pub mod ideal;
pub mod intfactor;
pub mod literal;
pub mod poly;
pub mod primes;
pub mod sieve;
pub mod spectral;
pub mod truncated;

pub use ball::{BallIndex, BallIter};
pub use error::{Error, Result};
pub use field::{AlgebraicInt, ArithOp, Field, NumberField};
pub use ideal::IdealHNF;
pub use primes::{PrimeIdeal, PrimeStream};
pub use sieve::SieveGrid;
pub use spectral::{Character, Phase, SpectralAtom};
pub use truncated::TruncatedValue;

/// Engine version string embedded in reports.
pub const VERSION: &str = env!("CARGO_PKG_VERSION");
