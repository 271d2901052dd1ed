//! Error types shared by all evaluators.

use thiserror::Error;

/// Distance (relative) below which a value is considered to sit on a pole
/// or lattice point. Shared by every module so pole decisions are consistent.
pub const POLE_TOL: f64 = 1e-9;

#[derive(Debug, Clone, Error)]
pub enum QError {
    /// An evaluation hit (or came within `POLE_TOL` of) a pole.
    #[error("pole encountered: {0}")]
    Pole(String),

    /// The series parameters fall outside the convergence region.
    #[error("series diverges: {0}")]
    Diverges(String),

    /// The term cap was reached before the stopping rule certified the tail.
    #[error("term cap of {0} reached before convergence")]
    Cap(usize),

    /// ₂H₂ evaluation was requested with Re(c+d−a−b) below the engine floor.
    #[error("slow convergence: Re(c+d-a-b) = {0} is below the engine floor of 3")]
    SlowConvergence(f64),

    /// A parameter map violates an identity's admissibility predicate.
    #[error("inadmissible parameters: {0}")]
    Inadmissible(String),

    /// Rejection sampling hit its attempt cap without finding an admissible point.
    #[error("sampler exhausted {0} attempts; region is over-constrained")]
    Exhausted(usize),

    /// A scalar or flag failed to parse.
    #[error("parse error: {0}")]
    Parse(String),

    /// A finite-arithmetic overflow escaped an operation.
    #[error("overflow: {0}")]
    Overflow(String),
}

pub type Result<T> = std::result::Result<T, QError>;
