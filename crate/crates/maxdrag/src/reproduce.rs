//! Reproduction suite: every headline number recomputed and gated.
//!
//! Each criterion bundles the gates for one published result: the freshly
//! computed value, the reference it must hit, and the pinned tolerance.
//! Everything is deterministic (fixed grids, fixed seeds, fixed trace
//! budgets), so a gate that passes here passes everywhere the floating
//! point environment matches IEEE double rules.

use crate::analytic::{
    arc_area_element, arc_zigzag_argmax, arc_zigzag_parts, arc_zigzag_resistance,
    assemble_body_resistance, entry_from_arc_angles, mushroom_bound, simpson,
    triangle_resistance,
};
use crate::geometry::{
    make_canonical_zigzag, make_mushroom, make_rectangle, make_symmetric_piecewise_quadratic,
    make_symmetric_polyline, make_two_segment_line, make_two_segment_quadratic, Cavity,
};
use crate::optimizer::{optimize, OptimizationProblem, SearchSpace};
use crate::pseudo::{evaluate_arc_limit, reflect_splinters};
use crate::tracer::{trace_entry, BilliardOutcome, TraceConfig};
use crate::{evaluate_resistance, forward_backward_residual, EvalConfig};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;
use std::f64::consts::{FRAC_PI_2, FRAC_PI_4, PI, SQRT_2};
use std::fmt::Write as _;
use std::str::FromStr;
use std::time::Instant;

/// How a gate compares its computed value against the target.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Check {
    /// `|computed - target| <= tolerance`.
    Within,
    /// `computed >= target`.
    AtLeast,
    /// `computed <= target`.
    AtMost,
}

/// One pinned comparison inside a criterion.
#[derive(Debug, Clone, Serialize)]
pub struct Gate {
    pub label: String,
    pub computed: f64,
    pub target: f64,
    pub tolerance: f64,
    pub check: Check,
}

impl Gate {
    fn within(label: impl Into<String>, computed: f64, target: f64, tolerance: f64) -> Gate {
        Gate {
            label: label.into(),
            computed,
            target,
            tolerance,
            check: Check::Within,
        }
    }

    fn at_least(label: impl Into<String>, computed: f64, target: f64) -> Gate {
        Gate {
            label: label.into(),
            computed,
            target,
            tolerance: 0.0,
            check: Check::AtLeast,
        }
    }

    fn at_most(label: impl Into<String>, computed: f64, target: f64) -> Gate {
        Gate {
            label: label.into(),
            computed,
            target,
            tolerance: 0.0,
            check: Check::AtMost,
        }
    }

    pub fn pass(&self) -> bool {
        match self.check {
            Check::Within => (self.computed - self.target).abs() <= self.tolerance,
            Check::AtLeast => self.computed >= self.target,
            Check::AtMost => self.computed <= self.target,
        }
    }

    pub fn describe(&self) -> String {
        let verdict = if self.pass() { "ok" } else { "FAIL" };
        match self.check {
            Check::Within => format!(
                "{}: computed {}, target {} \u{b1} {:.1e} [{verdict}]",
                self.label, self.computed, self.target, self.tolerance
            ),
            Check::AtLeast => format!(
                "{}: computed {} >= {} [{verdict}]",
                self.label, self.computed, self.target
            ),
            Check::AtMost => format!(
                "{}: computed {} <= {} [{verdict}]",
                self.label, self.computed, self.target
            ),
        }
    }
}

/// All gates for one reproduced result.
#[derive(Debug, Clone, Serialize)]
pub struct CriterionOutcome {
    pub index: usize,
    pub name: &'static str,
    pub gates: Vec<Gate>,
    pub runtime_ms: u128,
}

impl CriterionOutcome {
    pub fn pass(&self) -> bool {
        self.gates.iter().all(Gate::pass)
    }
}

/// Subsets of the reproduction suite.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Suite {
    /// Closed-form identities and decompositions; runs in seconds.
    Analytic,
    /// Billiard quadrature and optimization results.
    Numeric,
    /// Structural invariants of the dynamics.
    Properties,
    All,
}

impl FromStr for Suite {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "analytic" => Ok(Suite::Analytic),
            "numeric" => Ok(Suite::Numeric),
            "properties" => Ok(Suite::Properties),
            "all" => Ok(Suite::All),
            other => Err(format!(
                "unknown suite '{other}', expected analytic, numeric, properties, or all"
            )),
        }
    }
}

/// Criterion indices belonging to a suite, in run order.
pub fn suite_indices(suite: Suite) -> Vec<usize> {
    match suite {
        Suite::Analytic => vec![2, 6, 11],
        Suite::Numeric => vec![1, 3, 4, 5, 7, 8, 9],
        Suite::Properties => vec![10],
        Suite::All => (1..=11).collect(),
    }
}

/// Run one criterion by its index (1 through 11).
pub fn run_criterion(index: usize) -> CriterionOutcome {
    let start = Instant::now();
    let (name, gates) = match index {
        1 => ("triangle-oracle", triangle_oracle()),
        2 => ("triangle-decomposition", triangle_decomposition()),
        3 => ("rectangle-limits", rectangle_limits()),
        4 => ("line-optimum", line_optimum()),
        5 => ("quadratic-optimum", quadratic_optimum()),
        6 => ("arc-maximum-formulas", arc_maximum_formulas()),
        7 => ("limit-dynamics-agreement", limit_dynamics_agreement()),
        8 => ("zigzag-convergence", zigzag_convergence()),
        9 => ("mushroom-supremum", mushroom_supremum()),
        10 => ("billiard-properties", billiard_properties()),
        11 => ("body-assembly", body_assembly()),
        other => panic!("no criterion {other}; valid indices are 1 through 11"),
    };
    CriterionOutcome {
        index,
        name,
        gates,
        runtime_ms: start.elapsed().as_millis(),
    }
}

/// Run a suite in criterion order.
pub fn run_suite(suite: Suite) -> Vec<CriterionOutcome> {
    suite_indices(suite).into_iter().map(run_criterion).collect()
}

/// Human-readable table: one line per criterion, gate details indented.
pub fn format_report(outcomes: &[CriterionOutcome]) -> String {
    let mut out = String::new();
    for c in outcomes {
        let verdict = if c.pass() { "PASS" } else { "FAIL" };
        let _ = writeln!(
            out,
            "[{:>2}] {:<26} {} ({} ms)",
            c.index, c.name, verdict, c.runtime_ms
        );
        for g in &c.gates {
            let _ = writeln!(out, "     - {}", g.describe());
        }
    }
    let passed = outcomes.iter().filter(|c| c.pass()).count();
    let _ = writeln!(out, "{passed}/{} criteria pass", outcomes.len());
    out
}

fn eval(cavity: &Cavity, n: usize) -> crate::EvalResult {
    evaluate_resistance(cavity, &EvalConfig::new(n, n)).expect("evaluation on a valid cavity")
}

fn triangle_oracle() -> Vec<Gate> {
    let tri = make_two_segment_line(1.0, 1.0).expect("triangle");
    let r = eval(&tri, 2000);
    vec![Gate::within(
        "right isosceles triangle resistance on a 2000x2000 grid",
        r.value,
        SQRT_2,
        1e-3,
    )]
}

/// The three closed-form triangle terms against direct quadrature.
///
/// At a fixed entry angle the triangle's bounce pattern is constant on
/// intervals of the abscissa whose endpoints are known exactly, so the inner
/// integral collapses to an interval length and the outer integral over the
/// angle is smooth on each side of the quarter-pi kinks. Composite Simpson
/// on the split panels then converges far past the gate.
fn triangle_decomposition() -> Vec<Gate> {
    let n = 2000;
    let closed = triangle_resistance();
    let left = 0.375
        * (simpson(
            |p: f64| p.cos() * (1.0 - (2.0 * p).sin()),
            -FRAC_PI_2,
            -FRAC_PI_4,
            n,
        ) + simpson(
            |p: f64| -p.sin() * (1.0 - (2.0 * p).sin()),
            -FRAC_PI_4,
            0.0,
            n,
        ));
    let right = 0.375
        * (simpson(|p: f64| p.sin() * (1.0 + (2.0 * p).sin()), 0.0, FRAC_PI_4, n)
            + simpson(
                |p: f64| p.cos() * (1.0 + (2.0 * p).sin()),
                FRAC_PI_4,
                FRAC_PI_2,
                n,
            ));
    let double = 0.375
        * (simpson(
            |p: f64| 2.0 * p.cos() * (1.0 + p.tan()),
            -FRAC_PI_4,
            0.0,
            n,
        ) + simpson(
            |p: f64| 2.0 * p.cos() * (1.0 - p.tan()),
            0.0,
            FRAC_PI_4,
            n,
        ));
    vec![
        Gate::within(
            "single-bounce term, left flank",
            left,
            closed.left_single,
            1e-6,
        ),
        Gate::within(
            "single-bounce term, right flank",
            right,
            closed.right_single,
            1e-6,
        ),
        Gate::within("double-bounce term", double, closed.double_bounce, 1e-6),
        Gate::within("term sum", closed.total(), SQRT_2, 1e-12),
    ]
}

fn rectangle_limits() -> Vec<Gate> {
    let flat = make_rectangle(1e-3).expect("flat rectangle");
    let shallow = eval(&flat, 1500);
    let deep = make_rectangle(100.0).expect("deep rectangle");
    // near-grazing entries cross the deep well roughly 2 h tan(phi) times;
    // at this grid that peaks around 2.6e5 reflections
    let cfg = EvalConfig::with_trace(500, 500, TraceConfig::with_max_reflections(400_000));
    let d = evaluate_resistance(&deep, &cfg).expect("deep rectangle evaluation");
    vec![
        Gate::within(
            "shallow rectangle (h = 1e-3) resistance",
            shallow.value,
            1.0,
            2e-3,
        ),
        Gate::within("deep rectangle (h = 100) resistance", d.value, 1.25, 0.02),
    ]
}

fn line_optimum() -> Vec<Gate> {
    let problem = OptimizationProblem::new(
        SearchSpace::SymmetricTwoSegmentLine,
        EvalConfig::new(250, 250),
        240,
        42,
    );
    let report = optimize(&problem).expect("line search");
    vec![
        Gate::within(
            "best symmetric two-segment resistance",
            report.best_value,
            1.42621,
            1.5e-3,
        ),
        Gate::within("best slope", report.best_params[0], 1.12, 0.02),
    ]
}

fn quadratic_optimum() -> Vec<Gate> {
    let problem = OptimizationProblem::new(
        SearchSpace::SymmetricTwoSegmentQuadratic,
        EvalConfig::new(300, 300),
        400,
        42,
    );
    let report = optimize(&problem).expect("quadratic search");
    vec![
        Gate::within(
            "best symmetric quadratic resistance",
            report.best_value,
            1.43816,
            2e-3,
        ),
        Gate::within(
            "best quadratic coefficient",
            report.best_params[0],
            -0.486,
            0.02,
        ),
        Gate::within("best linear coefficient", report.best_params[1], 1.361, 0.02),
    ]
}

fn arc_maximum_formulas() -> Vec<Gate> {
    let (psi_star, _) = arc_zigzag_argmax();
    let mut defect: f64 = 0.0;
    for i in 0..1000 {
        let psi = (i as f64 + 0.5) * FRAC_PI_2 / 1000.0;
        let (a, b, c, d) = arc_zigzag_parts(psi);
        defect = defect.max((a + b + c + d - arc_zigzag_resistance(psi)).abs());
    }
    vec![
        Gate::within(
            "arc-limit resistance at half-angle 0.6835",
            arc_zigzag_resistance(0.6835),
            1.445209,
            1e-6,
        ),
        Gate::within("maximizing half-angle", psi_star, 0.6835, 5e-4),
        Gate::within(
            "part-sum defect over a 1000-point half-angle grid",
            defect,
            0.0,
            1e-12,
        ),
    ]
}

fn limit_dynamics_agreement() -> Vec<Gate> {
    let mut worst: f64 = 0.0;
    for k in 0..50 {
        let psi = (k as f64 + 0.5) * FRAC_PI_2 / 50.0;
        let limit = evaluate_arc_limit(psi, 2000, 2000).expect("arc limit evaluation");
        worst = worst.max((limit.value - arc_zigzag_resistance(psi)).abs());
    }
    vec![Gate::within(
        "largest splinter-vs-closed-form gap over 50 half-angles",
        worst,
        0.0,
        2e-3,
    )]
}

fn zigzag_convergence() -> Vec<Gate> {
    let coarse = make_canonical_zigzag(0.6835, 10, None).expect("zigzag m=10");
    let fine = make_canonical_zigzag(0.6835, 50, None).expect("zigzag m=50");
    vec![
        Gate::at_least(
            "zigzag resistance with 10 flanks",
            eval(&coarse, 2000).value,
            1.444,
        ),
        Gate::within(
            "zigzag resistance with 50 flanks",
            eval(&fine, 2000).value,
            1.445209,
            3e-3,
        ),
    ]
}

fn mushroom_supremum() -> Vec<Gate> {
    let m = make_mushroom(0.01).expect("mushroom");
    let (_, bound) = mushroom_bound(1e-4);
    vec![
        Gate::at_least(
            "mushroom (eps = 0.01) resistance",
            eval(&m, 2000).value,
            1.47,
        ),
        Gate::within("lower bound at eps = 1e-4", bound, 1.5, 1e-3),
    ]
}

fn reference_cavities() -> Vec<Cavity> {
    vec![
        make_two_segment_line(1.0, 1.0).expect("triangle"),
        make_two_segment_line(1.12, 1.12).expect("two-segment line"),
        make_two_segment_quadratic(-0.486, 1.361, -0.486, 1.361, 0.5).expect("quadratic"),
        make_symmetric_polyline(4, &[0.3, 0.45]).expect("polyline"),
        make_symmetric_piecewise_quadratic(2, &[0.5], &[0.8]).expect("piecewise quadratic"),
        make_canonical_zigzag(0.6835, 10, None).expect("zigzag"),
        make_mushroom(0.1).expect("mushroom"),
        make_rectangle(0.5).expect("rectangle"),
    ]
}

fn billiard_properties() -> Vec<Gate> {
    let cavities = reference_cavities();
    let cfg = TraceConfig::default();

    // round trips drawn from the entry measure cos(phi) dphi dxi, the same
    // measure the billiard map preserves
    let mut reversal_defect: f64 = 0.0;
    for (k, cavity) in cavities.iter().enumerate() {
        let mut rng = ChaCha8Rng::seed_from_u64(0xD1CE + k as u64);
        for _ in 0..10_000 {
            let phi = (2.0 * rng.gen::<f64>() - 1.0).asin();
            let xi = rng.gen_range(1e-9..1.0 - 1e-9);
            let BilliardOutcome::Exit {
                phi_out, xi_out, ..
            } = trace_entry(cavity, phi, xi, &cfg)
            else {
                continue;
            };
            match trace_entry(cavity, phi_out, xi_out, &cfg) {
                BilliardOutcome::Exit {
                    phi_out: phi_back,
                    xi_out: xi_back,
                    ..
                } => {
                    reversal_defect = reversal_defect
                        .max((phi_back - phi).abs())
                        .max((xi_back - xi).abs());
                }
                BilliardOutcome::Discarded { .. } => reversal_defect = f64::INFINITY,
            }
        }
    }

    let mut mass_defect: f64 = 0.0;
    let mut rng = ChaCha8Rng::seed_from_u64(0x5EED);
    let mut drawn = 0;
    while drawn < 10_000 {
        let phi: f64 = rng.gen_range(-1.5..1.5);
        let alpha: f64 = rng.gen_range(-1.5..1.5);
        if (phi - alpha).cos() <= 1e-3 {
            continue;
        }
        drawn += 1;
        let total: f64 = reflect_splinters(phi, alpha)
            .expect("non-grazing hit")
            .iter()
            .map(|s| s.mass)
            .sum();
        mass_defect = mass_defect.max((total - 1.0).abs());
    }

    // area element against central differences of the entry map
    let h = 1e-6;
    let mut jacobian_defect: f64 = 0.0;
    for &psi in &[0.3, 0.6835, 1.2, FRAC_PI_2] {
        for i in 0..5 {
            for j in 0..5 {
                let alpha = -psi + (i as f64 + 0.5) / 5.0 * 2.0 * psi;
                let beta = psi + (j as f64 + 0.5) / 5.0 * (PI - psi - 0.01);
                let fd = |f: &dyn Fn(f64, f64) -> f64| {
                    let da = (f(alpha + h, beta) - f(alpha - h, beta)) / (2.0 * h);
                    let db = (f(alpha, beta + h) - f(alpha, beta - h)) / (2.0 * h);
                    (da, db)
                };
                let (phi_a, phi_b) = fd(&|a, b| entry_from_arc_angles(a, b, psi).0);
                let (xi_a, xi_b) = fd(&|a, b| entry_from_arc_angles(a, b, psi).1);
                let det = phi_a * xi_b - phi_b * xi_a;
                let elem = arc_area_element(alpha, beta, psi).expect("regular point");
                jacobian_defect = jacobian_defect
                    .max((det.abs() - elem.abs()).abs() / elem.abs().max(1e-3));
            }
        }
    }

    let mut f_min = f64::INFINITY;
    let mut f_max = f64::NEG_INFINITY;
    let mut discard_max: f64 = 0.0;
    let mut residual_max: f64 = 0.0;
    let quad = EvalConfig::new(500, 500);
    for cavity in &cavities {
        let r = evaluate_resistance(cavity, &quad).expect("reference evaluation");
        f_min = f_min.min(r.value);
        f_max = f_max.max(r.value);
        discard_max = discard_max.max(r.discarded_fraction());
        let res = forward_backward_residual(cavity, &quad).expect("reference residual");
        residual_max = residual_max.max(res);
    }

    vec![
        Gate::within(
            "worst time-reversal defect over 8x10^4 sampled round trips",
            reversal_defect,
            0.0,
            1e-9,
        ),
        Gate::within(
            "worst splinter mass defect over 10^4 reflections",
            mass_defect,
            0.0,
            1e-12,
        ),
        Gate::within(
            "worst area-element error vs central differences at 100 points",
            jacobian_defect,
            0.0,
            1e-6,
        ),
        Gate::at_least("smallest reference resistance", f_min, 0.99),
        Gate::at_most("largest reference resistance", f_max, 1.51),
        Gate::within(
            "worst forward/backward estimator gap",
            residual_max,
            0.0,
            1e-2,
        ),
        Gate::within("worst discard fraction", discard_max, 0.0, 1e-4),
    ]
}

/// Resistance ratio between a disk-like body whose boundary is covered by
/// arc-limit hollows of tiny half-angle and the smooth disk itself.
fn body_assembly() -> Vec<Gate> {
    let eps = PI / 180.0;
    let disk = assemble_body_resistance(2.0 * PI, 1.0, &[]).expect("smooth disk");
    let covered = assemble_body_resistance(2.0 * PI * eps.sin() / eps, 0.0, &[(1.0, SQRT_2)])
        .expect("covered disk");
    vec![Gate::within(
        "covered-to-smooth resistance ratio at eps = pi/180",
        covered / disk,
        SQRT_2 * eps.sin() / eps,
        1e-9,
    )]
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn gate_semantics() {
        assert!(Gate::within("w", 1.0005, 1.0, 1e-3).pass());
        assert!(!Gate::within("w", 1.002, 1.0, 1e-3).pass());
        assert!(Gate::at_least("l", 1.47, 1.47).pass());
        assert!(!Gate::at_least("l", 1.4699, 1.47).pass());
        assert!(Gate::at_most("m", 1.51, 1.51).pass());
        assert!(!Gate::at_most("m", 1.511, 1.51).pass());
    }

    #[test]
    fn suites_partition_the_criteria() {
        let mut union: Vec<usize> = [Suite::Analytic, Suite::Numeric, Suite::Properties]
            .into_iter()
            .flat_map(suite_indices)
            .collect();
        union.sort_unstable();
        assert_eq!(union, suite_indices(Suite::All));
        assert_eq!(suite_indices(Suite::All), (1..=11).collect::<Vec<_>>());
        assert_eq!("analytic".parse::<Suite>(), Ok(Suite::Analytic));
        assert!("fast".parse::<Suite>().is_err());
    }

    #[test]
    fn analytic_suite_passes() {
        let outcomes = run_suite(Suite::Analytic);
        let report = format_report(&outcomes);
        assert!(outcomes.iter().all(CriterionOutcome::pass), "{report}");
        assert!(report.contains("3/3 criteria pass"));
    }

    #[test]
    fn quadrature_terms_match_closed_forms() {
        for gate in triangle_decomposition() {
            assert!(gate.pass(), "{}", gate.describe());
        }
    }

    #[test]
    fn report_mentions_failed_gates() {
        let outcome = CriterionOutcome {
            index: 3,
            name: "demo",
            gates: vec![Gate::within("near miss", 1.01, 1.0, 1e-3)],
            runtime_ms: 1,
        };
        assert!(!outcome.pass());
        let report = format_report(&[outcome]);
        assert!(report.contains("FAIL"));
        assert!(report.contains("near miss"));
        assert!(report.contains("0/1 criteria pass"));
    }
}
