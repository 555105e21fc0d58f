//! Derivative-free search for high-resistance cavity shapes.
//!
//! The objective is the billiard resistance estimate on a quadrature grid
//! held fixed for the whole run, so the search sees a deterministic
//! function. Parameter vectors that fail to build a valid cavity score
//! zero, which keeps them out of the running without interrupting the
//! search. Runs are reproducible bit for bit for a given seed: restarts
//! draw from their own counter-based generators and results are merged in
//! restart order, independent of thread scheduling.

use crate::error::OptimError;
use crate::functional::{evaluate_resistance, EvalConfig};
use crate::geometry::{ShapeFamily, ShapeParams};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

/// Search spaces: parameter vectors together with their meaning as shapes.
///
/// The symmetric variants search the mirror-symmetric slice of a wider
/// family, which is where the optima of interest live.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SearchSpace {
    /// One slope, apex centered.
    SymmetricTwoSegmentLine,
    /// Independent flank slopes `[alpha, beta]`.
    TwoSegmentLine,
    /// Quadratic flank profile coefficients `[a, b]`, mirrored.
    SymmetricTwoSegmentQuadratic,
    /// `floor(m/2)` knot heights, mirrored.
    SymmetricPolyline { m: usize },
    /// `floor(m/2)` knot heights then as many span curvatures, mirrored.
    SymmetricPiecewiseQuadratic { m: usize },
    /// Arc half-angle `[psi]` of a canonical zigzag.
    CanonicalZigzag { m: usize },
}

impl SearchSpace {
    pub fn arity(&self) -> usize {
        match *self {
            SearchSpace::SymmetricTwoSegmentLine => 1,
            SearchSpace::TwoSegmentLine => 2,
            SearchSpace::SymmetricTwoSegmentQuadratic => 2,
            SearchSpace::SymmetricPolyline { m } => m / 2,
            SearchSpace::SymmetricPiecewiseQuadratic { m } => 2 * (m / 2),
            SearchSpace::CanonicalZigzag { .. } => 1,
        }
    }

    /// Interpret a parameter vector as a concrete shape.
    pub fn to_shape(&self, x: &[f64]) -> ShapeParams {
        debug_assert_eq!(x.len(), self.arity());
        match *self {
            SearchSpace::SymmetricTwoSegmentLine => {
                ShapeParams::new(ShapeFamily::TwoSegmentLine, vec![x[0], x[0]])
            }
            SearchSpace::TwoSegmentLine => {
                ShapeParams::new(ShapeFamily::TwoSegmentLine, x.to_vec())
            }
            SearchSpace::SymmetricTwoSegmentQuadratic => ShapeParams::new(
                ShapeFamily::TwoSegmentQuadratic,
                vec![x[0], x[1], x[0], x[1], 0.5],
            ),
            SearchSpace::SymmetricPolyline { m } => {
                ShapeParams::new(ShapeFamily::SymmetricPolyline { m }, x.to_vec())
            }
            SearchSpace::SymmetricPiecewiseQuadratic { m } => ShapeParams::new(
                ShapeFamily::SymmetricPiecewiseQuadratic { m },
                x.to_vec(),
            ),
            SearchSpace::CanonicalZigzag { m } => {
                ShapeParams::new(ShapeFamily::CanonicalZigzag { m }, x.to_vec())
            }
        }
    }

    /// Sensible box bounds covering the known optima with room to spare.
    pub fn default_bounds(&self) -> (Vec<f64>, Vec<f64>) {
        let per_dim = |lo: f64, hi: f64, n: usize| (vec![lo; n], vec![hi; n]);
        match *self {
            SearchSpace::SymmetricTwoSegmentLine => per_dim(0.05, 4.0, 1),
            SearchSpace::TwoSegmentLine => per_dim(0.05, 4.0, 2),
            SearchSpace::SymmetricTwoSegmentQuadratic => {
                (vec![-2.0, 0.0], vec![2.0, 3.0])
            }
            SearchSpace::SymmetricPolyline { m } => per_dim(0.0, 1.2, m / 2),
            SearchSpace::SymmetricPiecewiseQuadratic { m } => {
                let half = m / 2;
                let (mut lo, mut hi) = per_dim(0.0, 1.2, half);
                lo.extend(std::iter::repeat(-3.0).take(half));
                hi.extend(std::iter::repeat(3.0).take(half));
                (lo, hi)
            }
            SearchSpace::CanonicalZigzag { .. } => {
                per_dim(0.02, std::f64::consts::FRAC_PI_2, 1)
            }
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SearchMethod {
    /// One simplex search from the box midpoint.
    NelderMead,
    /// One coordinate pattern search from the box midpoint.
    PatternSearch,
    /// Several simplex searches from seeded random starts (the default).
    RandomRestartNelderMead,
}

/// Everything that pins down one optimization run.
#[derive(Debug, Clone)]
pub struct OptimizationProblem {
    pub space: SearchSpace,
    pub lower: Vec<f64>,
    pub upper: Vec<f64>,
    /// Grid used for every objective evaluation during the search.
    pub quadrature: EvalConfig,
    /// Maximum number of objective evaluations across all restarts,
    /// not counting the final re-ranking pass.
    pub budget: usize,
    pub seed: u64,
    pub method: SearchMethod,
    pub restarts: usize,
}

impl OptimizationProblem {
    /// Problem with default bounds, eight restarts, and the restart method.
    pub fn new(space: SearchSpace, quadrature: EvalConfig, budget: usize, seed: u64) -> Self {
        let (lower, upper) = space.default_bounds();
        OptimizationProblem {
            space,
            lower,
            upper,
            quadrature,
            budget,
            seed,
            method: SearchMethod::RandomRestartNelderMead,
            restarts: 8,
        }
    }
}

/// Outcome of a search: the winner, the audit trail, and whether every
/// component search stopped on its own convergence test.
#[derive(Debug, Clone, Serialize)]
pub struct OptimizationReport {
    pub best_params: Vec<f64>,
    pub best_value: f64,
    pub evaluations: usize,
    /// Every parameter vector evaluated, with its objective value, in
    /// deterministic order. The re-ranking evaluations at doubled
    /// resolution come last.
    pub history: Vec<(Vec<f64>, f64)>,
    pub converged: bool,
}

struct Objective<'a> {
    space: SearchSpace,
    cfg: &'a EvalConfig,
}

impl Objective<'_> {
    /// Resistance of the shape at `x`, or 0 if `x` is not a valid shape.
    fn eval(&self, x: &[f64]) -> f64 {
        match self.space.to_shape(x).to_cavity() {
            Ok(cavity) => match evaluate_resistance(&cavity, self.cfg) {
                Ok(r) if r.value.is_finite() => r.value,
                _ => 0.0,
            },
            Err(_) => 0.0,
        }
    }
}

fn clamp_into(x: &mut [f64], lower: &[f64], upper: &[f64]) {
    for ((v, &lo), &hi) in x.iter_mut().zip(lower).zip(upper) {
        *v = v.clamp(lo, hi);
    }
}

struct LocalRun {
    history: Vec<(Vec<f64>, f64)>,
    converged: bool,
}

/// Bounded Nelder-Mead with the standard reflect/expand/contract/shrink
/// coefficients. Candidates are clamped to the box. Stops when the simplex
/// collapses (value spread and diameter both small) or the budget is spent.
fn nelder_mead(
    obj: &Objective,
    start: &[f64],
    lower: &[f64],
    upper: &[f64],
    budget: usize,
) -> LocalRun {
    let n = start.len();
    let mut history = Vec::new();
    let mut calls = 0usize;
    let eval = |x: &[f64], history: &mut Vec<(Vec<f64>, f64)>, calls: &mut usize| {
        *calls += 1;
        let v = obj.eval(x);
        history.push((x.to_vec(), v));
        v
    };

    let mut simplex: Vec<Vec<f64>> = Vec::with_capacity(n + 1);
    simplex.push(start.to_vec());
    for d in 0..n {
        let mut p = start.to_vec();
        let span = upper[d] - lower[d];
        let step = 0.15 * span;
        p[d] = if p[d] + step <= upper[d] {
            p[d] + step
        } else {
            p[d] - step
        };
        clamp_into(&mut p, lower, upper);
        simplex.push(p);
    }
    let mut values: Vec<f64> = Vec::with_capacity(n + 1);
    for p in &simplex {
        if calls >= budget {
            break;
        }
        values.push(eval(p, &mut history, &mut calls));
    }
    while values.len() < simplex.len() {
        simplex.pop();
    }
    if simplex.is_empty() {
        return LocalRun {
            history,
            converged: false,
        };
    }

    let mut converged = false;
    while calls < budget {
        // maximize: order best (largest) first
        let mut order: Vec<usize> = (0..simplex.len()).collect();
        order.sort_by(|&a, &b| values[b].partial_cmp(&values[a]).unwrap());
        let reordered: Vec<Vec<f64>> = order.iter().map(|&i| simplex[i].clone()).collect();
        let revalues: Vec<f64> = order.iter().map(|&i| values[i]).collect();
        simplex = reordered;
        values = revalues;

        let spread = values[0] - values[values.len() - 1];
        let diameter = simplex[1..]
            .iter()
            .map(|p| {
                p.iter()
                    .zip(&simplex[0])
                    .map(|(a, b)| (a - b).abs())
                    .fold(0.0, f64::max)
            })
            .fold(0.0, f64::max);
        if spread < 1e-7 && diameter < 1e-7 {
            converged = true;
            break;
        }
        if simplex.len() < n + 1 {
            break; // budget ran out during initialization
        }

        let worst = values.len() - 1;
        let centroid: Vec<f64> = (0..n)
            .map(|d| simplex[..worst].iter().map(|p| p[d]).sum::<f64>() / worst as f64)
            .collect();
        let blend = |t: f64| -> Vec<f64> {
            let mut p: Vec<f64> = centroid
                .iter()
                .zip(&simplex[worst])
                .map(|(c, w)| c + t * (c - w))
                .collect();
            clamp_into(&mut p, lower, upper);
            p
        };

        let reflected = blend(1.0);
        let vr = eval(&reflected, &mut history, &mut calls);
        if vr > values[0] {
            if calls >= budget {
                simplex[worst] = reflected;
                values[worst] = vr;
                break;
            }
            let expanded = blend(2.0);
            let ve = eval(&expanded, &mut history, &mut calls);
            if ve > vr {
                simplex[worst] = expanded;
                values[worst] = ve;
            } else {
                simplex[worst] = reflected;
                values[worst] = vr;
            }
        } else if vr > values[worst - 1] {
            simplex[worst] = reflected;
            values[worst] = vr;
        } else {
            if calls >= budget {
                break;
            }
            let contracted = blend(-0.5);
            let vc = eval(&contracted, &mut history, &mut calls);
            if vc > values[worst] {
                simplex[worst] = contracted;
                values[worst] = vc;
            } else {
                // shrink toward the best vertex
                for i in 1..simplex.len() {
                    if calls >= budget {
                        break;
                    }
                    let mut p: Vec<f64> = simplex[i]
                        .iter()
                        .zip(&simplex[0])
                        .map(|(x, b)| b + 0.5 * (x - b))
                        .collect();
                    clamp_into(&mut p, lower, upper);
                    values[i] = eval(&p, &mut history, &mut calls);
                    simplex[i] = p;
                }
            }
        }
    }
    LocalRun { history, converged }
}

/// Coordinate pattern search: poll +/- step along every axis, move to the
/// best improving probe, halve the step when none improves.
fn pattern_search(
    obj: &Objective,
    start: &[f64],
    lower: &[f64],
    upper: &[f64],
    budget: usize,
) -> LocalRun {
    let n = start.len();
    let mut history = Vec::new();
    let mut calls = 0usize;
    let eval = |x: &[f64], history: &mut Vec<(Vec<f64>, f64)>, calls: &mut usize| {
        *calls += 1;
        let v = obj.eval(x);
        history.push((x.to_vec(), v));
        v
    };

    let mut center = start.to_vec();
    let mut best = eval(&center, &mut history, &mut calls);
    let spans: Vec<f64> = upper.iter().zip(lower).map(|(h, l)| h - l).collect();
    let mut scale = 0.25;
    let mut converged = n == 0;
    while calls < budget {
        let mut winner: Option<(Vec<f64>, f64)> = None;
        'poll: for d in 0..n {
            for sign in [1.0, -1.0] {
                if calls >= budget {
                    break 'poll;
                }
                let mut p = center.clone();
                p[d] += sign * scale * spans[d];
                clamp_into(&mut p, lower, upper);
                if p == center {
                    continue;
                }
                let v = eval(&p, &mut history, &mut calls);
                if v > best && winner.as_ref().is_none_or(|w| v > w.1) {
                    winner = Some((p, v));
                }
            }
        }
        match winner {
            Some((p, v)) => {
                center = p;
                best = v;
            }
            None => {
                scale *= 0.5;
                if scale < 1e-7 {
                    converged = true;
                    break;
                }
            }
        }
    }
    LocalRun { history, converged }
}

fn validate(problem: &OptimizationProblem) -> Result<(), OptimError> {
    let n = problem.space.arity();
    if problem.lower.len() != n || problem.upper.len() != n {
        return Err(OptimError::BadProblem(format!(
            "bounds must have {n} entries for {:?}",
            problem.space
        )));
    }
    if problem.lower.iter().zip(&problem.upper).any(|(l, h)| l > h) {
        return Err(OptimError::BadProblem(
            "lower bound exceeds upper bound".to_string(),
        ));
    }
    if problem.budget == 0 {
        return Err(OptimError::BadProblem("budget must be positive".to_string()));
    }
    if problem.quadrature.n1 == 0 || problem.quadrature.n2 == 0 {
        return Err(OptimError::BadProblem(
            "quadrature grid must be at least 1x1".to_string(),
        ));
    }
    if problem.method == SearchMethod::RandomRestartNelderMead && problem.restarts == 0 {
        return Err(OptimError::BadProblem(
            "restart method needs at least one restart".to_string(),
        ));
    }
    Ok(())
}

/// Run the configured search and report the best shape found.
///
/// The search maximizes at the problem's quadrature; the per-restart
/// winners are then re-evaluated at doubled resolution and appended to the
/// history, and the best entry of the full history wins. Fails only if no
/// evaluated vector produced a valid shape.
pub fn optimize(problem: &OptimizationProblem) -> Result<OptimizationReport, OptimError> {
    validate(problem)?;
    let obj = Objective {
        space: problem.space,
        cfg: &problem.quadrature,
    };
    let n = problem.space.arity();
    let midpoint: Vec<f64> = problem
        .lower
        .iter()
        .zip(&problem.upper)
        .map(|(l, h)| 0.5 * (l + h))
        .collect();

    if n == 0 {
        // a zero-parameter space has exactly one shape to measure
        let v = obj.eval(&[]);
        return finish(problem, vec![LocalRun {
            history: vec![(Vec::new(), v)],
            converged: true,
        }]);
    }

    let runs: Vec<LocalRun> = match problem.method {
        SearchMethod::NelderMead => vec![nelder_mead(
            &obj,
            &midpoint,
            &problem.lower,
            &problem.upper,
            problem.budget,
        )],
        SearchMethod::PatternSearch => vec![pattern_search(
            &obj,
            &midpoint,
            &problem.lower,
            &problem.upper,
            problem.budget,
        )],
        SearchMethod::RandomRestartNelderMead => {
            let per = (problem.budget / problem.restarts).max(n + 2);
            (0..problem.restarts)
                .into_par_iter()
                .map(|r| {
                    let start = if r == 0 {
                        midpoint.clone()
                    } else {
                        let mut rng =
                            ChaCha8Rng::seed_from_u64(problem.seed.wrapping_add(r as u64));
                        problem
                            .lower
                            .iter()
                            .zip(&problem.upper)
                            .map(|(&l, &h)| if l < h { rng.gen_range(l..h) } else { l })
                            .collect()
                    };
                    nelder_mead(&obj, &start, &problem.lower, &problem.upper, per)
                })
                .collect()
        }
    };
    finish(problem, runs)
}

fn finish(
    problem: &OptimizationProblem,
    runs: Vec<LocalRun>,
) -> Result<OptimizationReport, OptimError> {
    let converged = runs.iter().all(|r| r.converged);
    let mut history: Vec<(Vec<f64>, f64)> = Vec::new();
    let mut winners: Vec<Vec<f64>> = Vec::new();
    for run in runs {
        let mut best: Option<usize> = None;
        for (i, (_, v)) in run.history.iter().enumerate() {
            if best.is_none_or(|b| *v > run.history[b].1) {
                best = Some(i);
            }
        }
        if let Some(b) = best {
            if run.history[b].1 > 0.0 {
                winners.push(run.history[b].0.clone());
            }
        }
        history.extend(run.history);
    }

    // re-rank the per-restart winners at doubled resolution
    let refined_cfg = EvalConfig::with_trace(
        problem.quadrature.n1 * 2,
        problem.quadrature.n2 * 2,
        problem.quadrature.trace,
    );
    let refine = Objective {
        space: problem.space,
        cfg: &refined_cfg,
    };
    let refined: Vec<(Vec<f64>, f64)> = winners
        .into_par_iter()
        .map(|w| {
            let v = refine.eval(&w);
            (w, v)
        })
        .collect();
    history.extend(refined);

    let mut best: Option<usize> = None;
    for (i, (_, v)) in history.iter().enumerate() {
        if best.is_none_or(|b| *v > history[b].1) {
            best = Some(i);
        }
    }
    let best = best.ok_or_else(|| {
        OptimError::NoFeasibleStart("no objective evaluations were made".to_string())
    })?;
    if history[best].1 <= 0.0 {
        return Err(OptimError::NoFeasibleStart(format!(
            "none of the {} evaluated vectors built a valid shape",
            history.len()
        )));
    }
    Ok(OptimizationReport {
        best_params: history[best].0.clone(),
        best_value: history[best].1,
        evaluations: history.len(),
        history,
        converged,
    })
}

/// Resistance of the symmetric two-segment line at each slope in `alphas`.
pub fn sweep_symmetric_slope(
    alphas: &[f64],
    cfg: &EvalConfig,
) -> Result<Vec<(f64, f64)>, OptimError> {
    let obj = Objective {
        space: SearchSpace::SymmetricTwoSegmentLine,
        cfg,
    };
    Ok(alphas.iter().map(|&a| (a, obj.eval(&[a]))).collect())
}

/// Search the symmetric piecewise-quadratic family with `m` spans.
///
/// Parameter counts grow twice as fast as for polylines, so `m` is capped
/// at 18 to keep the simplex dimension workable.
pub fn optimize_piecewise_quadratic(
    m: usize,
    quadrature: EvalConfig,
    budget: usize,
    seed: u64,
) -> Result<OptimizationReport, OptimError> {
    if m == 0 || m > 18 {
        return Err(OptimError::BadProblem(format!(
            "span count must lie in 1..=18, got {m}"
        )));
    }
    optimize(&OptimizationProblem::new(
        SearchSpace::SymmetricPiecewiseQuadratic { m },
        quadrature,
        budget,
        seed,
    ))
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    fn quick_problem(space: SearchSpace, budget: usize) -> OptimizationProblem {
        OptimizationProblem::new(space, EvalConfig::new(250, 250), budget, 42)
    }

    #[test]
    fn recovers_best_symmetric_line() {
        let report = optimize(&quick_problem(SearchSpace::SymmetricTwoSegmentLine, 240)).unwrap();
        assert_abs_diff_eq!(report.best_value, 1.42621, epsilon = 1.5e-3);
        assert_abs_diff_eq!(report.best_params[0], 1.12, epsilon = 0.02);
    }

    #[test]
    fn same_seed_reproduces_bitwise() {
        let p = quick_problem(SearchSpace::SymmetricTwoSegmentQuadratic, 160);
        let a = optimize(&p).unwrap();
        let b = optimize(&p).unwrap();
        assert_eq!(a.best_value.to_bits(), b.best_value.to_bits());
        assert_eq!(a.evaluations, b.evaluations);
        assert_eq!(a.history.len(), b.history.len());
        for ((xa, va), (xb, vb)) in a.history.iter().zip(&b.history) {
            assert_eq!(xa, xb);
            assert_eq!(va.to_bits(), vb.to_bits());
        }
        let pool = rayon::ThreadPoolBuilder::new()
            .num_threads(1)
            .build()
            .unwrap();
        let c = pool.install(|| optimize(&p).unwrap());
        assert_eq!(a.best_value.to_bits(), c.best_value.to_bits());
    }

    #[test]
    fn infeasible_vectors_never_win() {
        // bounds deliberately include profiles that dip below the opening
        let mut p = quick_problem(SearchSpace::SymmetricTwoSegmentQuadratic, 120);
        p.quadrature = EvalConfig::new(60, 60);
        p.lower = vec![-6.0, -3.0];
        p.upper = vec![6.0, 3.0];
        let report = optimize(&p).unwrap();
        let shape = p.space.to_shape(&report.best_params);
        assert!(shape.to_cavity().is_ok());
        assert!(report.best_value >= 1.0 - 1e-3);
    }

    #[test]
    fn zero_arity_space_is_a_single_measurement() {
        let p = quick_problem(SearchSpace::SymmetricPiecewiseQuadratic { m: 1 }, 50);
        let report = optimize(&p).unwrap();
        // the one shape, measured once plus the re-ranking pass
        assert_eq!(report.evaluations, 2);
        assert!(report.converged);
        assert_abs_diff_eq!(report.best_value, 1.0, epsilon = 1e-3);
    }

    #[test]
    fn doubling_the_knots_cannot_lose_much() {
        let coarse = optimize(&OptimizationProblem::new(
            SearchSpace::SymmetricPolyline { m: 2 },
            EvalConfig::new(120, 120),
            120,
            7,
        ))
        .unwrap();
        let fine = optimize(&OptimizationProblem::new(
            SearchSpace::SymmetricPolyline { m: 4 },
            EvalConfig::new(120, 120),
            360,
            7,
        ))
        .unwrap();
        assert!(
            fine.best_value >= coarse.best_value - 0.01,
            "m=4 found {} but m=2 found {}",
            fine.best_value,
            coarse.best_value
        );
    }

    #[test]
    fn pattern_search_agrees_on_the_line_family() {
        let mut p = quick_problem(SearchSpace::SymmetricTwoSegmentLine, 150);
        p.method = SearchMethod::PatternSearch;
        let report = optimize(&p).unwrap();
        assert_abs_diff_eq!(report.best_value, 1.42621, epsilon = 2e-3);
        assert_abs_diff_eq!(report.best_params[0], 1.12, epsilon = 0.03);
    }

    #[test]
    fn slope_sweep_peaks_near_the_optimum() {
        let alphas: Vec<f64> = (1..=15).map(|i| 0.2 * i as f64).collect();
        let sweep = sweep_symmetric_slope(&alphas, &EvalConfig::new(150, 150)).unwrap();
        let best = sweep
            .iter()
            .cloned()
            .max_by(|a, b| a.1.partial_cmp(&b.1).unwrap())
            .unwrap();
        assert_abs_diff_eq!(best.0, 1.2, epsilon = 0.21);
        assert!(best.1 > 1.41);
        // flat ends of the sweep stay below the peak
        assert!(sweep.first().unwrap().1 < best.1);
        assert!(sweep.last().unwrap().1 < best.1);
    }

    #[test]
    fn bad_problems_are_rejected() {
        let mut p = quick_problem(SearchSpace::TwoSegmentLine, 100);
        p.lower = vec![0.1];
        assert!(matches!(optimize(&p), Err(OptimError::BadProblem(_))));
        let mut q = quick_problem(SearchSpace::TwoSegmentLine, 0);
        q.budget = 0;
        assert!(matches!(optimize(&q), Err(OptimError::BadProblem(_))));
        assert!(optimize_piecewise_quadratic(19, EvalConfig::new(10, 10), 10, 1).is_err());
    }
}
