//! Billiard-based evaluation and maximization of the time-averaged
//! resistance of slowly rotating planar bodies.
//!
//! A rough body is modeled as a convex core whose boundary is densely
//! covered by small hollows (cavities). Particles of a sparse medium enter a
//! cavity through its opening, bounce elastically, and leave; the momentum
//! they transfer determines a resistance functional normalized so that the
//! smooth body has resistance 1. This crate provides:
//!
//! - validated cavity geometry and parametric shape families ([`geometry`]),
//! - an exact piecewise ray tracer for the in-cavity billiard ([`tracer`]),
//! - midpoint-rule evaluation of the resistance functional ([`functional`]),
//! - closed-form values for special shapes and the circular-arc reflected
//!   ray system ([`analytic`], [`pseudo`]),
//! - derivative-free shape search over the families ([`optimizer`]),
//! - SVG rendering and a reproduction suite ([`svg`], [`reproduce`]).

pub mod analytic;
pub mod error;
pub mod functional;
pub mod geometry;
pub mod optimizer;
pub mod pseudo;
pub mod reproduce;
pub mod sum;
pub mod svg;
pub mod tracer;

pub use error::{EvalError, GeometryError, OptimError, PseudoError};
pub use functional::{evaluate_resistance, forward_backward_residual, EvalConfig, EvalResult};
pub use geometry::{BoundaryPiece, Cavity, Point2, ShapeFamily, ShapeParams};
pub use tracer::{intersect_ray_piece, trace_entry, trace_path, BilliardOutcome, TraceConfig};
