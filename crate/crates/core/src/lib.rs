//! Exact probabilistic degenerate r-Stirling numbers of the second kind and
//! probabilistic degenerate r-Bell polynomials for a random variable given by
//! its moments, with an executable identity suite.

pub mod bell;
pub mod dist;
pub mod error;
pub mod identities;
pub mod kernel;
pub mod moments;
pub mod prstirling;
pub mod scalar;

pub use dist::Distribution;
pub use error::{Error, Result};
pub use kernel::{Basis, DegenerateParameter, Polynomial};
pub use moments::{MomentOracle, SumMomentTable};
pub use prstirling::{StirlingContext, StirlingTable};
pub use scalar::ExactScalar;
