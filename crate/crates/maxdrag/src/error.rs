//! Error types shared across the crate.

use thiserror::Error;

/// Why a piece chain failed to validate as a cavity boundary.
#[derive(Debug, Error)]
pub enum GeometryError {
    #[error("cavity needs at least one boundary piece")]
    EmptyChain,

    #[error("piece {index} is malformed: {reason}")]
    InvalidPiece { index: usize, reason: String },

    #[error("piece {index} does not connect to the chain (gap {gap:.3e})")]
    BrokenChain { index: usize, gap: f64 },

    #[error("chain ends at ({:.6}, {:.6}) instead of (1, 0)", end.0, end.1)]
    OpenChain { end: (f64, f64) },

    #[error("piece {index} dips below the opening line (min y = {y:.3e})")]
    BelowOpening { index: usize, y: f64 },

    #[error("boundary crosses itself (pieces {first} and {second})")]
    SelfIntersection { first: usize, second: usize },

    #[error("{0}")]
    InvalidParameter(String),
}

/// Why a resistance evaluation failed or was rejected.
#[derive(Debug, Error)]
pub enum EvalError {
    #[error("quadrature grid must be at least 1x1, got {n1}x{n2}")]
    EmptyGrid { n1: usize, n2: usize },

    #[error("too many samples were discarded ({discarded} of {total})")]
    ExcessiveDiscards { discarded: usize, total: usize },

    #[error("estimates did not stabilize to {tol:.1e} within the n={n} grid budget")]
    BudgetExceeded { n: usize, tol: f64 },

    #[error(transparent)]
    Geometry(#[from] GeometryError),
}

/// Why a single-arc reflected-ray evaluation failed.
#[derive(Debug, Error)]
pub enum PseudoError {
    #[error("arc half-angle must lie in (0, pi/2], got {0}")]
    BadHalfAngle(f64),

    #[error("entry abscissa must lie in (0, 1), got {0}")]
    BadAbscissa(f64),

    #[error("entry angle must lie in (-pi/2, pi/2), got {0}")]
    BadAngle(f64),

    #[error("grazing arc hit: cos(phi - alpha) vanishes at phi={phi}, alpha={alpha}")]
    DegenerateHit { phi: f64, alpha: f64 },

    #[error("backward hit angle must satisfy psi <= |angle| <= pi, got {angle} for psi={psi}")]
    BadBackAngle { angle: f64, psi: f64 },

    #[error("quadrature grid must be at least 1x1, got {n1}x{n2}")]
    EmptyGrid { n1: usize, n2: usize },
}

/// Why a closed-form evaluation was rejected.
#[derive(Debug, Error)]
pub enum AnalyticError {
    #[error("area element is singular at alpha={alpha}, beta={beta} (chord through the arc apex)")]
    SingularAreaElement { alpha: f64, beta: f64 },

    #[error("invalid body decomposition: {0}")]
    BadDecomposition(String),
}

/// Why a shape search failed to produce a result.
#[derive(Debug, Error)]
pub enum OptimError {
    #[error("ill-posed search problem: {0}")]
    BadProblem(String),

    #[error("search space has no feasible starting point: {0}")]
    NoFeasibleStart(String),

    #[error("objective returned a non-finite value at {at:?}")]
    NonFiniteObjective { at: Vec<f64> },

    #[error(transparent)]
    Geometry(#[from] GeometryError),

    #[error(transparent)]
    Eval(#[from] EvalError),
}
