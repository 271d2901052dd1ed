//! Numerical evaluation of unilateral and bilateral basic hypergeometric
//! series, the classical bilateral ₂H₂, and batch verification of the
//! summation and transformation identities connecting them.

pub mod error;
pub mod identities;
pub mod numerics;
pub mod qcore;
pub mod report;
pub mod sampler;
pub mod series;

pub use error::{QError, Result};
pub use numerics::{EvalResult, Scalar};
pub use qcore::QBase;
