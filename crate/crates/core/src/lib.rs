//! Collatz-type iteration on binary polynomials.
//!
//! Odd polynomials (no root in `{0, 1}`) play the role of odd integers and
//! `M = x^2 + x + 1` plays the role of 3: an odd `P` maps to `1 + M P`, from
//! which every factor `x` and `x + 1` is stripped. Every nonzero polynomial
//! reaches 1.
//!
//! - [`poly`]: bit-packed GF(2)\[x\] arithmetic, valuations, `x -> x+1`, reciprocal.
//! - [`collatz`]: the iteration itself, with runtime structural checks.
//! - [`families`]: closed-form lengths for parametric families, checked against the engine.
//! - [`scanner`]: exhaustive enumeration by degree, statistics and audits.
//! - [`tables`]: reference tables and their live reproduction.
//! - [`cli`]: the `gf2collatz` command line.

pub mod cli;
pub mod collatz;
pub mod error;
pub mod families;
pub mod par;
pub mod poly;
pub mod scanner;
pub mod serde_poly;
pub mod tables;

pub use collatz::{check_trace, length, step, strip, trace, TraceRecord};
pub use error::{Error, Result};
pub use poly::Poly;
