//! Midpoint-rule evaluation of the resistance functional.
//!
//! The time-averaged resistance of a body whose boundary is covered by
//! copies of a cavity reduces to a double integral over entry states:
//!
//! ```text
//! F = (3/8) * integral over phi in (-pi/2, pi/2), xi in (0, 1) of
//!         (1 + cos(phi_out - phi)) cos(phi) dxi dphi
//! ```
//!
//! where `phi_out(phi, xi)` is the exit angle produced by the billiard in
//! the cavity. The smooth body (flat profile, `phi_out = -phi`) gives
//! exactly 1; the theoretical range is `[1, 1.5)`.
//!
//! Samples whose trace is discarded (corner, grazing, budget) contribute the
//! mirror-law summand, which biases the estimate toward the smooth value by
//! at most the discarded measure fraction.

use rayon::prelude::*;

use crate::error::EvalError;
use crate::geometry::Cavity;
use crate::sum::CompensatedSum;
use crate::tracer::{trace_entry, BilliardOutcome, TraceConfig};

/// Quadrature resolution and trace limits for one evaluation.
#[derive(Debug, Clone, Copy)]
pub struct EvalConfig {
    /// Number of midpoint cells across the opening (`xi`).
    pub n1: usize,
    /// Number of midpoint cells across the angle range (`phi`).
    pub n2: usize,
    pub trace: TraceConfig,
}

impl EvalConfig {
    pub fn new(n1: usize, n2: usize) -> Self {
        EvalConfig {
            n1,
            n2,
            trace: TraceConfig::default(),
        }
    }

    pub fn with_trace(n1: usize, n2: usize, trace: TraceConfig) -> Self {
        EvalConfig { n1, n2, trace }
    }
}

impl Default for EvalConfig {
    fn default() -> Self {
        EvalConfig::new(2000, 2000)
    }
}

/// Outcome of one quadrature pass.
#[derive(Debug, Clone, Copy)]
pub struct EvalResult {
    /// Resistance estimate.
    pub value: f64,
    /// Total quadrature samples (`n1 * n2`).
    pub samples: usize,
    /// Samples that fell back to the mirror law.
    pub discarded: usize,
}

impl EvalResult {
    pub fn discarded_fraction(&self) -> f64 {
        self.discarded as f64 / self.samples as f64
    }
}

/// Midpoint abscissa of cell `i` of `n1` across the opening.
#[inline]
pub fn grid_xi(i: usize, n1: usize) -> f64 {
    (i as f64 + 0.5) / n1 as f64
}

/// Midpoint angle of cell `j` of `n2`; symmetric about zero, never hits
/// the tangential limits. For even `n2` it also never hits zero.
#[inline]
pub fn grid_phi(j: usize, n2: usize) -> f64 {
    std::f64::consts::PI * ((2 * j + 1) as f64 - n2 as f64) / (2.0 * n2 as f64)
}

/// Mirror-law summand used for discarded samples: the contribution the
/// sample would make if the cavity were sealed flat.
#[inline]
fn mirror_summand(phi: f64) -> f64 {
    phi.cos() * (1.0 + (2.0 * phi).cos())
}

/// Estimate the resistance of a cavity on an `n1 x n2` midpoint grid.
///
/// Rows (fixed `xi`) are traced in parallel; each row accumulates into a
/// compensated sum and rows are reduced in index order, so the result is
/// bit-identical regardless of thread count.
pub fn evaluate_resistance(cavity: &Cavity, cfg: &EvalConfig) -> Result<EvalResult, EvalError> {
    if cfg.n1 == 0 || cfg.n2 == 0 {
        return Err(EvalError::EmptyGrid {
            n1: cfg.n1,
            n2: cfg.n2,
        });
    }
    let rows: Vec<(CompensatedSum, usize)> = (0..cfg.n1)
        .into_par_iter()
        .map(|i| {
            let xi = grid_xi(i, cfg.n1);
            let mut sum = CompensatedSum::new();
            let mut discarded = 0usize;
            for j in 0..cfg.n2 {
                let phi = grid_phi(j, cfg.n2);
                match trace_entry(cavity, phi, xi, &cfg.trace) {
                    BilliardOutcome::Exit { phi_out, .. } => {
                        sum.add(phi.cos() * (1.0 + (phi - phi_out).cos()));
                    }
                    BilliardOutcome::Discarded { .. } => {
                        discarded += 1;
                        sum.add(mirror_summand(phi));
                    }
                }
            }
            (sum, discarded)
        })
        .collect();

    let mut total = CompensatedSum::new();
    let mut discarded = 0usize;
    for (row, d) in rows {
        total.merge(row);
        discarded += d;
    }
    let samples = cfg.n1 * cfg.n2;
    let scale = 0.375 * std::f64::consts::PI / samples as f64;
    Ok(EvalResult {
        value: scale * total.value(),
        samples,
        discarded,
    })
}

/// Difference between the forward estimate and a reversed-trajectory
/// estimate of the same integral.
///
/// Each exiting sample is traced again starting from its exit state; the
/// reversed pass scores `1 + cos(phi_out - phi_return)` against the entry
/// weight. Because the billiard map is its own inverse and preserves the
/// `cos(phi) dphi dxi` measure, the two estimates agree up to roundoff and
/// discard fallbacks; a sign error, a measure distortion, or a broken
/// reflection law shows up here immediately.
pub fn forward_backward_residual(cavity: &Cavity, cfg: &EvalConfig) -> Result<f64, EvalError> {
    if cfg.n1 == 0 || cfg.n2 == 0 {
        return Err(EvalError::EmptyGrid {
            n1: cfg.n1,
            n2: cfg.n2,
        });
    }
    let rows: Vec<(CompensatedSum, CompensatedSum)> = (0..cfg.n1)
        .into_par_iter()
        .map(|i| {
            let xi = grid_xi(i, cfg.n1);
            let mut fwd = CompensatedSum::new();
            let mut bwd = CompensatedSum::new();
            for j in 0..cfg.n2 {
                let phi = grid_phi(j, cfg.n2);
                let w = phi.cos();
                match trace_entry(cavity, phi, xi, &cfg.trace) {
                    BilliardOutcome::Exit {
                        phi_out, xi_out, ..
                    } => {
                        fwd.add(w * (1.0 + (phi - phi_out).cos()));
                        match trace_entry(cavity, phi_out, xi_out, &cfg.trace) {
                            BilliardOutcome::Exit {
                                phi_out: phi_return,
                                ..
                            } => {
                                bwd.add(w * (1.0 + (phi_out - phi_return).cos()));
                            }
                            BilliardOutcome::Discarded { .. } => bwd.add(mirror_summand(phi)),
                        }
                    }
                    BilliardOutcome::Discarded { .. } => {
                        fwd.add(mirror_summand(phi));
                        bwd.add(mirror_summand(phi));
                    }
                }
            }
            (fwd, bwd)
        })
        .collect();

    let mut fwd = CompensatedSum::new();
    let mut bwd = CompensatedSum::new();
    for (f, b) in rows {
        fwd.merge(f);
        bwd.merge(b);
    }
    let scale = 0.375 * std::f64::consts::PI / (cfg.n1 * cfg.n2) as f64;
    Ok((scale * (fwd.value() - bwd.value())).abs())
}

/// Evaluate on successively doubled grids until two consecutive estimates
/// agree within `tol`.
///
/// Returns the final result and the grid size it used. Fails with
/// [`EvalError::BudgetExceeded`] if the estimates still disagree when the
/// next doubling would pass `n_max`.
pub fn evaluate_adaptive(
    cavity: &Cavity,
    tol: f64,
    n_start: usize,
    n_max: usize,
    trace: TraceConfig,
) -> Result<(EvalResult, usize), EvalError> {
    let mut n = n_start.max(2);
    let mut prev = evaluate_resistance(cavity, &EvalConfig::with_trace(n, n, trace))?;
    loop {
        if 2 * n > n_max {
            return Err(EvalError::BudgetExceeded { n, tol });
        }
        n *= 2;
        let next = evaluate_resistance(cavity, &EvalConfig::with_trace(n, n, trace))?;
        if (next.value - prev.value).abs() <= tol {
            return Ok((next, n));
        }
        prev = next;
    }
}
