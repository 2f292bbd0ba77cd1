//! Polynomial approximation in `L_p` spaces with Jacobi weights
//! `w_{α,β}(x) = (1-x)^α (1+x)^β`.
//!
//! The crate computes weighted norms, the weighted moduli of smoothness
//! `ω^φ_{k,r}` and their averaged variants, best-approximation errors `E_n`
//! in every `p` regime, and runs empirical checks of direct, inverse,
//! Whitney-type and Bernstein inequalities over a corpus of test functions.

// `!(a < b)` is used on purpose: it also rejects NaN
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod bestapprox;
pub mod cli;
pub mod error;
pub mod functions;
pub mod harness;
pub mod moduli;
pub mod quadrature;
pub mod weights;

pub use error::{Error, Result};
pub use functions::FunctionSpec;
pub use weights::WeightParams;
