//! Edge law of the largest real eigenvalue of the thinned real Ginibre
//! ensemble: Fredholm determinant evaluation, tail expansions, operator
//! identity checks and a Monte Carlo sampler.

#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod edgelaw;
pub mod error;
pub mod fredholm;
pub mod identities;
pub mod kernels;
pub mod mc;
pub mod par;
pub mod quadrature;
pub mod specfun;
pub mod tails;

pub use error::{Error, Result};
pub use par::Execution;
