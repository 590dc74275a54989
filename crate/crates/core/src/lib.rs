//! Invariants of the numerical semigroup generated by all primes `>= p`
//! (Frobenius number, genus, sporadic count, atoms, embedding dimension,
//! largest atom), the finite-range assertion program over them, and
//! windowed three-prime representations of odd integers.

pub mod error;
pub mod goldbach;
pub mod invariant_suite;
pub mod primes;
pub mod rational;
pub mod reach;
pub mod report;
pub mod semigroup;

pub use error::{Error, Result};
pub use goldbach::{RepSeries, Representation, WindowSpec};
pub use invariant_suite::{AssertionReport, InvariantRecord};
pub use primes::PrimeTable;
pub use rational::Ratio;
pub use report::RegressionFit;
pub use semigroup::SemigroupInstance;
