//! Index combinatorics, high-precision evaluators and identity checks for
//! multiple zeta values, multiple t-values and their interpolated variants.
//!
//! The crate is organised bottom-up:
//!
//! - [`index`]: indices, binary words, the block decomposition and index classes.
//! - [`arith`]: configurable-precision reals/complexes with error bounds,
//!   elementary and special functions, Bernoulli numbers, truncated power series.
//! - [`nested`]: evaluation of alternating/classical MZVs, multiple t-values and
//!   interpolated values, plus brute-force truncation oracles.
//! - [`closed_form`]: generating series and closed-form evaluations of zeta-half values.
//! - [`hypergeom`]: generalized hypergeometric series at unit argument and the
//!   generating-series checks built on them.
//! - [`verify`]: orchestrated numerical certification with serialisable reports.
//! - [`cli`]: the `mtv` command-line front end.

pub mod arith;
pub mod cli;
pub mod closed_form;
pub mod error;
pub mod hypergeom;
pub mod index;
pub mod nested;
pub mod verify;

pub use arith::{BigComplex, BigReal, PrecisionContext};
pub use error::{Error, Result};
pub use index::{BinaryWord, Index, IndexClass, Sign, SignedIndex};
pub use nested::Evaluator;
pub use verify::{Verdict, VerificationReport};
