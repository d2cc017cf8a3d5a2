//! Exact arithmetic for multiple Ramanujan sums.
//!
//! The modules build on one another: [`nt`] supplies integer primitives,
//! [`arithfn`] arithmetic functions over exact rationals, [`multisum`] the
//! nested divisor-chain sums, [`fourier`] their finite Fourier expansions,
//! [`dseries`] truncated multivariable Dirichlet series, and [`hyperdet`]
//! Cayley hyperdeterminants with Smith-type evaluations.

pub mod arithfn;
pub mod dseries;
pub mod error;
pub mod fourier;
pub mod hyperdet;
pub mod multisum;
pub mod nt;

pub use arithfn::{rat, rat_frac, ArithFn, Rat};
pub use error::{Error, Result};
pub use multisum::{MultiSumSpec, WeightFn};
