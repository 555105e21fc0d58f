//! Exact tracing of particle paths inside a cavity.
//!
//! A particle enters through the opening at `(xi, 0)` with unit velocity
//! `(sin phi, cos phi)`, reflects elastically off the boundary pieces, and
//! leaves through the opening again. The tracer intersects rays with each
//! piece in closed form (one Newton polish for curved pieces), so there is no
//! spatial discretization; the only approximations are floating-point.

use crate::geometry::{BoundaryPiece, Cavity, Point2};

/// Minimum ray-parameter advance for a hit on a piece other than the one
/// just left. Part of the intersection contract.
pub const T_MIN: f64 = 1e-12;

/// Minimum advance for re-hitting the curved piece just bounced off.
/// Larger than [`T_MIN`] because the departure point itself solves the
/// intersection equation to within roundoff.
const CURVED_REHIT_T_MIN: f64 = 1e-9;

/// Tolerances and limits for a trace.
#[derive(Debug, Clone, Copy)]
pub struct TraceConfig {
    /// Reflection budget before the trace is discarded.
    pub max_reflections: usize,
    /// Hits within this distance of a piece endpoint count as corner hits.
    pub corner_tol: f64,
    /// Hits with `|v . n|` below this count as grazing.
    pub grazing_tol: f64,
}

impl Default for TraceConfig {
    fn default() -> Self {
        TraceConfig {
            max_reflections: 10_000,
            corner_tol: 1e-9,
            grazing_tol: 1e-10,
        }
    }
}

impl TraceConfig {
    pub fn with_max_reflections(max_reflections: usize) -> Self {
        TraceConfig {
            max_reflections,
            ..TraceConfig::default()
        }
    }
}

/// Why a trace was abandoned instead of exiting through the opening.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum DiscardReason {
    /// The path came within `corner_tol` of a piece endpoint (junction,
    /// apex, or an opening corner), where the reflection law is undefined.
    CornerHit,
    /// The path met a wall almost tangentially; the reflected direction
    /// would be dominated by roundoff.
    GrazingHit,
    /// The reflection budget ran out.
    ReflectionLimit,
    /// The ray found no wall and no valid opening crossing. Only reachable
    /// through floating-point leaks in degenerate geometry.
    LostRay,
}

/// Result of tracing one entry.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum BilliardOutcome {
    /// The particle left through the opening: crossing abscissa `xi_out`,
    /// exit velocity `-(sin phi_out, cos phi_out)`.
    Exit {
        phi_out: f64,
        xi_out: f64,
        reflections: usize,
    },
    Discarded {
        reason: DiscardReason,
        reflections: usize,
    },
}

impl BilliardOutcome {
    pub fn is_exit(&self) -> bool {
        matches!(self, BilliardOutcome::Exit { .. })
    }
}

/// A ray-piece intersection.
#[derive(Debug, Clone, Copy)]
pub struct RayHit {
    /// Ray parameter of the hit; the hit point is `origin + t * dir`.
    pub t: f64,
    pub point: Point2,
    /// Unit normal at the hit, oriented against the ray (`dir . normal <= 0`).
    pub normal: Point2,
}

/// Nearest intersection of the ray `origin + t dir` with a piece, for
/// `t > ` [`T_MIN`]. The returned normal opposes `dir`.
pub fn intersect_ray_piece(origin: Point2, dir: Point2, piece: &BoundaryPiece) -> Option<RayHit> {
    intersect_with_threshold(origin, dir, piece, T_MIN)
}

fn intersect_with_threshold(
    origin: Point2,
    dir: Point2,
    piece: &BoundaryPiece,
    t_min: f64,
) -> Option<RayHit> {
    match *piece {
        BoundaryPiece::Segment { p0, p1 } => {
            let e = p1 - p0;
            let denom = dir.cross(e);
            if denom == 0.0 {
                return None; // parallel (collinear sliding is treated as a miss)
            }
            let f = p0 - origin;
            let t = f.cross(e) / denom;
            let s = f.cross(dir) / denom;
            if t <= t_min || !(-1e-12..=1.0 + 1e-12).contains(&s) {
                return None;
            }
            let n = Point2::new(-e.y, e.x).normalized();
            Some(RayHit {
                t,
                point: origin + dir * t,
                normal: orient_against(n, dir),
            })
        }
        BoundaryPiece::ParabolicArc { a, b, c0, c1, c2 } => {
            // substitute x(t) = ox + t dx into y = q(x)
            let (ox, oy) = (origin.x, origin.y);
            let (dx, dy) = (dir.x, dir.y);
            let qa = c2 * dx * dx;
            let qb = (2.0 * c2 * ox + c1) * dx - dy;
            let qc = (c2 * ox + c1) * ox + c0 - oy;
            let roots: [Option<f64>; 2] = if qa == 0.0 {
                if qb == 0.0 {
                    [None, None]
                } else {
                    [Some(-qc / qb), None]
                }
            } else {
                match quadratic_roots(qa, qb, qc) {
                    None => [None, None],
                    Some((r1, r2)) => [Some(r1), Some(r2)],
                }
            };
            let mut best: Option<f64> = None;
            for t in roots.into_iter().flatten() {
                // one Newton step against the exact residual
                let t = {
                    let x = ox + t * dx;
                    let g = (c2 * x + c1) * x + c0 - (oy + t * dy);
                    let gp = (2.0 * c2 * x + c1) * dx - dy;
                    if gp.abs() > f64::MIN_POSITIVE {
                        t - g / gp
                    } else {
                        t
                    }
                };
                let x = ox + t * dx;
                if t > t_min
                    && x >= a - 1e-12
                    && x <= b + 1e-12
                    && best.is_none_or(|bt| t < bt)
                {
                    best = Some(t);
                }
            }
            let t = best?;
            let x = ox + t * dx;
            let n = Point2::new(-(2.0 * c2 * x + c1), 1.0).normalized();
            Some(RayHit {
                t,
                point: origin + dir * t,
                normal: orient_against(n, dir),
            })
        }
        BoundaryPiece::EllipticArc {
            center,
            rx,
            ry,
            theta0,
            theta1,
        } => {
            // scale to the unit circle
            let o = Point2::new((origin.x - center.x) / rx, (origin.y - center.y) / ry);
            let d = Point2::new(dir.x / rx, dir.y / ry);
            let (r1, r2) = quadratic_roots(d.dot(d), 2.0 * o.dot(d), o.dot(o) - 1.0)?;
            let mut best: Option<f64> = None;
            for t in [r1, r2] {
                // one Newton step against the exact residual
                let t = {
                    let px = (origin.x + t * dir.x - center.x) / rx;
                    let py = (origin.y + t * dir.y - center.y) / ry;
                    let g = px * px + py * py - 1.0;
                    let gp = 2.0 * (px * dir.x / rx + py * dir.y / ry);
                    if gp.abs() > f64::MIN_POSITIVE {
                        t - g / gp
                    } else {
                        t
                    }
                };
                if t <= t_min {
                    continue;
                }
                let p = origin + dir * t;
                let th = ((p.y - center.y) / ry).atan2((p.x - center.x) / rx);
                // bring th into [theta0, theta0 + 2 pi)
                let mut rel = (th - theta0) % (2.0 * std::f64::consts::PI);
                if rel < 0.0 {
                    rel += 2.0 * std::f64::consts::PI;
                }
                let within = rel <= theta1 - theta0 + 1e-12
                    || rel >= 2.0 * std::f64::consts::PI - 1e-12;
                if within && best.is_none_or(|bt| t < bt) {
                    best = Some(t);
                }
            }
            let t = best?;
            let p = origin + dir * t;
            let n = Point2::new((p.x - center.x) / (rx * rx), (p.y - center.y) / (ry * ry))
                .normalized();
            Some(RayHit {
                t,
                point: p,
                normal: orient_against(n, dir),
            })
        }
    }
}

#[inline]
fn orient_against(n: Point2, dir: Point2) -> Point2 {
    if dir.dot(n) > 0.0 {
        -n
    } else {
        n
    }
}

/// Both real roots of `a t^2 + b t + c` (`a != 0`), computed without
/// cancellation. Returns `None` when the discriminant is negative.
fn quadratic_roots(a: f64, b: f64, c: f64) -> Option<(f64, f64)> {
    let disc = b * b - 4.0 * a * c;
    if disc < 0.0 {
        return None;
    }
    let q = -0.5 * (b + disc.sqrt().copysign(if b == 0.0 { 1.0 } else { b }));
    let r1 = q / a;
    let r2 = if q != 0.0 { c / q } else { 0.0 };
    Some((r1, r2))
}

/// Trace one entry through the cavity.
pub fn trace_entry(cavity: &Cavity, phi: f64, xi: f64, cfg: &TraceConfig) -> BilliardOutcome {
    trace_internal(cavity, phi, xi, cfg, None)
}

/// Trace one entry and record the path polyline (entry point, every
/// reflection point, and the opening crossing or stopping point).
pub fn trace_path(
    cavity: &Cavity,
    phi: f64,
    xi: f64,
    cfg: &TraceConfig,
) -> (BilliardOutcome, Vec<Point2>) {
    let mut path = Vec::new();
    let outcome = trace_internal(cavity, phi, xi, cfg, Some(&mut path));
    (outcome, path)
}

fn trace_internal(
    cavity: &Cavity,
    phi: f64,
    xi: f64,
    cfg: &TraceConfig,
    mut path: Option<&mut Vec<Point2>>,
) -> BilliardOutcome {
    debug_assert!(
        phi.abs() < std::f64::consts::FRAC_PI_2 && (0.0..=1.0).contains(&xi),
        "entry outside the opening: phi={phi}, xi={xi}"
    );
    let mut o = Point2::new(xi, 0.0);
    let mut v = Point2::new(phi.sin(), phi.cos());
    if let Some(p) = path.as_deref_mut() {
        p.push(o);
    }
    let mut last_piece: Option<usize> = None;
    let mut reflections = 0usize;

    loop {
        let mut best: Option<(RayHit, usize)> = None;
        for (k, piece) in cavity.pieces().iter().enumerate() {
            let t_min = match last_piece {
                // the entry point may lie on a piece that coincides with the
                // opening, so the first search accepts zero advance
                None => -f64::MIN_POSITIVE,
                Some(lp) if lp == k => {
                    if matches!(piece, BoundaryPiece::Segment { .. }) {
                        // a ray leaving a straight piece cannot hit it again
                        continue;
                    }
                    CURVED_REHIT_T_MIN
                }
                Some(_) => T_MIN,
            };
            if let Some(h) = intersect_with_threshold(o, v, piece, t_min) {
                if best.as_ref().is_none_or(|(bh, _)| h.t < bh.t) {
                    best = Some((h, k));
                }
            }
        }

        // opening crossing: y falls to 0 inside [0, 1] before any wall
        if v.y < 0.0 {
            let t_exit = -o.y / v.y;
            if t_exit >= -1e-9 {
                let x_exit = o.x + t_exit.max(0.0) * v.x;
                let beats_wall = best.as_ref().is_none_or(|(bh, _)| t_exit < bh.t);
                if beats_wall && (0.0..=1.0).contains(&x_exit) {
                    if x_exit <= cfg.corner_tol || x_exit >= 1.0 - cfg.corner_tol {
                        return BilliardOutcome::Discarded {
                            reason: DiscardReason::CornerHit,
                            reflections,
                        };
                    }
                    if let Some(p) = path.as_deref_mut() {
                        p.push(Point2::new(x_exit, 0.0));
                    }
                    return BilliardOutcome::Exit {
                        phi_out: (-v.x).atan2(-v.y),
                        xi_out: x_exit,
                        reflections,
                    };
                }
            }
        }

        let Some((hit, k)) = best else {
            return BilliardOutcome::Discarded {
                reason: DiscardReason::LostRay,
                reflections,
            };
        };

        let piece = &cavity.pieces()[k];
        if hit.point.distance(piece.start()) <= cfg.corner_tol
            || hit.point.distance(piece.end()) <= cfg.corner_tol
        {
            if let Some(p) = path.as_deref_mut() {
                p.push(hit.point);
            }
            return BilliardOutcome::Discarded {
                reason: DiscardReason::CornerHit,
                reflections,
            };
        }
        let vn = v.dot(hit.normal);
        if vn.abs() <= cfg.grazing_tol {
            if let Some(p) = path.as_deref_mut() {
                p.push(hit.point);
            }
            return BilliardOutcome::Discarded {
                reason: DiscardReason::GrazingHit,
                reflections,
            };
        }
        if reflections >= cfg.max_reflections {
            return BilliardOutcome::Discarded {
                reason: DiscardReason::ReflectionLimit,
                reflections,
            };
        }
        v = (v - hit.normal * (2.0 * vn)).normalized();
        o = hit.point;
        if let Some(p) = path.as_deref_mut() {
            p.push(o);
        }
        last_piece = Some(k);
        reflections += 1;
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::{
        make_mushroom, make_rectangle, make_two_segment_line, make_two_segment_quadratic,
    };
    use approx::assert_abs_diff_eq;

    const FRAC_PI_2: f64 = std::f64::consts::FRAC_PI_2;

    fn triangle() -> Cavity {
        make_two_segment_line(1.0, 1.0).unwrap()
    }

    fn exit_of(outcome: BilliardOutcome) -> (f64, f64, usize) {
        match outcome {
            BilliardOutcome::Exit {
                phi_out,
                xi_out,
                reflections,
            } => (phi_out, xi_out, reflections),
            other => panic!("expected exit, got {other:?}"),
        }
    }

    #[test]
    fn ray_hits_segment_with_inward_normal() {
        let piece = BoundaryPiece::Segment {
            p0: Point2::new(0.0, 0.0),
            p1: Point2::new(0.5, 0.5),
        };
        let hit = intersect_ray_piece(Point2::new(0.25, 0.0), Point2::new(0.0, 1.0), &piece)
            .expect("must hit");
        assert_abs_diff_eq!(hit.t, 0.25, epsilon = 1e-15);
        assert_abs_diff_eq!(hit.point.x, 0.25, epsilon = 1e-15);
        assert_abs_diff_eq!(hit.point.y, 0.25, epsilon = 1e-15);
        // normal opposes the ray
        let s = std::f64::consts::FRAC_1_SQRT_2;
        assert_abs_diff_eq!(hit.normal.x, s, epsilon = 1e-15);
        assert_abs_diff_eq!(hit.normal.y, -s, epsilon = 1e-15);
        assert!(Point2::new(0.0, 1.0).dot(hit.normal) < 0.0);
    }

    #[test]
    fn ray_misses_segment_outside_span() {
        let piece = BoundaryPiece::Segment {
            p0: Point2::new(0.0, 1.0),
            p1: Point2::new(1.0, 1.0),
        };
        assert!(intersect_ray_piece(Point2::new(2.0, 0.0), Point2::new(0.0, 1.0), &piece).is_none());
        // behind the origin
        assert!(
            intersect_ray_piece(Point2::new(0.5, 2.0), Point2::new(0.0, 1.0), &piece).is_none()
        );
    }

    #[test]
    fn ray_hits_parabola_at_vertex() {
        let piece = BoundaryPiece::ParabolicArc {
            a: 0.0,
            b: 1.0,
            c0: 0.0,
            c1: 1.0,
            c2: -1.0,
        };
        let hit = intersect_ray_piece(Point2::new(0.5, 1.0), Point2::new(0.0, -1.0), &piece)
            .expect("must hit");
        assert_abs_diff_eq!(hit.t, 0.75, epsilon = 1e-14);
        assert_abs_diff_eq!(hit.point.y, 0.25, epsilon = 1e-14);
        assert_abs_diff_eq!(hit.normal.x, 0.0, epsilon = 1e-14);
        assert_abs_diff_eq!(hit.normal.y, 1.0, epsilon = 1e-14);
    }

    #[test]
    fn ray_picks_nearer_parabola_root() {
        // ray along the axis of symmetry from below the vertex of y = x^2 - comes
        // at the arc from outside, first crossing has smaller t
        let piece = BoundaryPiece::ParabolicArc {
            a: -1.0,
            b: 1.0,
            c0: 0.0,
            c1: 0.0,
            c2: 1.0,
        };
        let hit = intersect_ray_piece(Point2::new(-2.0, 0.5), Point2::new(1.0, 0.0), &piece)
            .expect("must hit");
        let r = 0.5f64.sqrt();
        assert_abs_diff_eq!(hit.point.x, -r, epsilon = 1e-12);
        assert_abs_diff_eq!(hit.point.y, 0.5, epsilon = 1e-12);
    }

    #[test]
    fn ray_hits_elliptic_arc_radially() {
        let piece = BoundaryPiece::EllipticArc {
            center: Point2::new(0.0, 0.0),
            rx: 1.0,
            ry: 1.0,
            theta0: 0.0,
            theta1: FRAC_PI_2,
        };
        let d = std::f64::consts::FRAC_1_SQRT_2;
        let hit = intersect_ray_piece(Point2::new(2.0, 2.0), Point2::new(-d, -d), &piece)
            .expect("must hit");
        assert_abs_diff_eq!(hit.point.x, d, epsilon = 1e-12);
        assert_abs_diff_eq!(hit.point.y, d, epsilon = 1e-12);
        assert_abs_diff_eq!(hit.t, 2.0 * 2.0f64.sqrt() - 1.0, epsilon = 1e-12);
        assert_abs_diff_eq!(hit.normal.x, d, epsilon = 1e-12);
        assert_abs_diff_eq!(hit.normal.y, d, epsilon = 1e-12);
    }

    #[test]
    fn elliptic_arc_angular_range_is_respected() {
        let piece = BoundaryPiece::EllipticArc {
            center: Point2::new(0.0, 0.0),
            rx: 1.0,
            ry: 1.0,
            theta0: 0.0,
            theta1: FRAC_PI_2,
        };
        // aims at theta = -pi/4, outside the arc
        assert!(intersect_ray_piece(
            Point2::new(2.0, -2.0),
            Point2::new(-std::f64::consts::FRAC_1_SQRT_2, std::f64::consts::FRAC_1_SQRT_2),
            &piece
        )
        .map(|h| h.point.y < 0.0)
        .is_none());
    }

    #[test]
    fn flat_cavity_mirrors_every_entry() {
        let flat = Cavity::from_pieces(
            "flat",
            vec![BoundaryPiece::Segment {
                p0: Point2::new(0.0, 0.0),
                p1: Point2::new(1.0, 0.0),
            }],
        )
        .unwrap();
        let cfg = TraceConfig::default();
        for &(phi, xi) in &[(0.3, 0.4), (-1.2, 0.7), (0.0, 0.5), (1.5, 0.2)] {
            let (phi_out, xi_out, n) = exit_of(trace_entry(&flat, phi, xi, &cfg));
            assert_abs_diff_eq!(phi_out, -phi, epsilon = 1e-14);
            assert_abs_diff_eq!(xi_out, xi, epsilon = 1e-14);
            assert_eq!(n, 1);
        }
    }

    #[test]
    fn triangle_left_pocket_rotates_by_quarter_turn() {
        // steep leftward entries bounce once off the left flank
        let cfg = TraceConfig::default();
        for &(phi, xi) in &[(-0.8, 0.3), (-1.1, 0.5), (-0.9, 0.1)] {
            assert!(xi < -f64::tan(phi));
            let (phi_out, _, n) = exit_of(trace_entry(&triangle(), phi, xi, &cfg));
            assert_abs_diff_eq!(phi_out, -FRAC_PI_2 - phi, epsilon = 1e-12);
            assert_eq!(n, 1);
        }
    }

    #[test]
    fn triangle_right_pocket_rotates_by_quarter_turn() {
        let cfg = TraceConfig::default();
        for &(phi, xi) in &[(0.8, 0.7), (1.1, 0.5), (0.9, 0.9)] {
            assert!(xi > 1.0 - f64::tan(phi));
            let (phi_out, _, n) = exit_of(trace_entry(&triangle(), phi, xi, &cfg));
            assert_abs_diff_eq!(phi_out, FRAC_PI_2 - phi, epsilon = 1e-12);
            assert_eq!(n, 1);
        }
    }

    #[test]
    fn triangle_double_bounce_returns_parallel() {
        // shallow central entries retroreflect off both flanks
        let cfg = TraceConfig::default();
        for &(phi, xi) in &[(0.3, 0.4), (-0.2, 0.6), (0.0, 0.3)] {
            let (phi_out, _, n) = exit_of(trace_entry(&triangle(), phi, xi, &cfg));
            assert_abs_diff_eq!(phi_out, phi, epsilon = 1e-12);
            assert_eq!(n, 2);
        }
    }

    #[test]
    fn rectangle_unfolds_to_straight_line() {
        let cavity = make_rectangle(1.0).unwrap();
        let cfg = TraceConfig::default();
        let phi = 0.5f64.atan();
        let (phi_out, xi_out, n) = exit_of(trace_entry(&cavity, phi, 0.25, &cfg));
        // unfolded crossing at 0.25 + 2 tan(phi) = 1.25, folded back to 0.75
        // with one side-wall bounce, which flips the sign convention
        assert_abs_diff_eq!(xi_out, 0.75, epsilon = 1e-12);
        assert_abs_diff_eq!(phi_out, phi, epsilon = 1e-12);
        assert_eq!(n, 2);
    }

    #[test]
    fn apex_entry_is_a_corner_hit() {
        let cfg = TraceConfig::default();
        let out = trace_entry(&triangle(), 0.0, 0.5, &cfg);
        assert_eq!(
            out,
            BilliardOutcome::Discarded {
                reason: DiscardReason::CornerHit,
                reflections: 0
            }
        );
    }

    #[test]
    fn reflection_budget_is_enforced(){
        let cavity = make_rectangle(50.0).unwrap();
        let cfg = TraceConfig::with_max_reflections(10);
        let out = trace_entry(&cavity, 1.4, 0.5, &cfg);
        assert_eq!(
            out,
            BilliardOutcome::Discarded {
                reason: DiscardReason::ReflectionLimit,
                reflections: 10
            }
        );
    }

    #[test]
    fn cap_reflection_passes_through_far_focus() {
        // rays from one focus of the elliptic cap reflect through the other
        let cavity = make_mushroom(0.2).unwrap();
        let arc = cavity
            .pieces()
            .iter()
            .find(|p| matches!(p, BoundaryPiece::EllipticArc { .. }))
            .unwrap();
        let (f1, f2) = (Point2::new(0.0, 0.2), Point2::new(1.0, 0.2));
        for k in 1..8 {
            let ang = 0.3 + 0.3 * k as f64;
            let dir = Point2::new(ang.cos(), ang.sin().abs()).normalized();
            let hit = intersect_ray_piece(f1, dir, arc).expect("must hit the cap");
            let vn = dir.dot(hit.normal);
            let refl = dir - hit.normal * (2.0 * vn);
            let to_f2 = f2 - hit.point;
            assert!(refl.cross(to_f2).abs() < 1e-9, "k={k}");
            assert!(refl.dot(to_f2) > 0.0, "k={k}");
        }
    }

    #[test]
    fn trace_is_its_own_inverse() {
        let cavities = vec![
            triangle(),
            make_two_segment_line(2.0, 0.7).unwrap(),
            make_two_segment_quadratic(-0.486, 1.361, -0.486, 1.361, 0.5).unwrap(),
            make_mushroom(0.3).unwrap(),
            make_rectangle(2.0).unwrap(),
        ];
        let cfg = TraceConfig::default();
        let mut checked = 0;
        for cavity in &cavities {
            for i in 0..7 {
                for j in 0..7 {
                    let phi = -1.4 + 2.8 * (i as f64 + 0.5) / 7.0;
                    let xi = (j as f64 + 0.5) / 7.0;
                    let BilliardOutcome::Exit {
                        phi_out, xi_out, ..
                    } = trace_entry(cavity, phi, xi, &cfg)
                    else {
                        continue;
                    };
                    let BilliardOutcome::Exit {
                        phi_out: phi_back,
                        xi_out: xi_back,
                        ..
                    } = trace_entry(cavity, phi_out, xi_out, &cfg)
                    else {
                        panic!("return trace must exit ({})", cavity.label());
                    };
                    assert_abs_diff_eq!(phi_back, phi, epsilon = 1e-9);
                    assert_abs_diff_eq!(xi_back, xi, epsilon = 1e-9);
                    checked += 1;
                }
            }
        }
        assert!(checked > 150, "only {checked} round trips exercised");
    }

    #[test]
    fn mirrored_entries_exit_mirrored() {
        // all these cavities are symmetric about x = 1/2
        let cavities = vec![
            triangle(),
            make_two_segment_quadratic(-0.486, 1.361, -0.486, 1.361, 0.5).unwrap(),
            make_rectangle(0.8).unwrap(),
        ];
        let cfg = TraceConfig::default();
        for cavity in &cavities {
            for &(phi, xi) in &[(0.9, 0.25), (0.35, 0.6), (-0.7, 0.85)] {
                let a = trace_entry(cavity, phi, xi, &cfg);
                let b = trace_entry(cavity, -phi, 1.0 - xi, &cfg);
                let (pa, xa, na) = exit_of(a);
                let (pb, xb, nb) = exit_of(b);
                assert_abs_diff_eq!(pa, -pb, epsilon = 1e-11);
                assert_abs_diff_eq!(xa, 1.0 - xb, epsilon = 1e-11);
                assert_eq!(na, nb);
            }
        }
    }

    #[test]
    fn path_polyline_brackets_the_trace() {
        let cfg = TraceConfig::default();
        let (out, path) = trace_path(&triangle(), 0.3, 0.4, &cfg);
        let (_, xi_out, n) = exit_of(out);
        assert_eq!(path.len(), n + 2);
        assert_eq!(path[0], Point2::new(0.4, 0.0));
        assert_abs_diff_eq!(path.last().unwrap().x, xi_out, epsilon = 1e-15);
        assert_abs_diff_eq!(path.last().unwrap().y, 0.0, epsilon = 1e-15);
        // interior vertices lie on the flanks
        for p in &path[1..=n] {
            let on_left = (p.y - p.x).abs() < 1e-12;
            let on_right = (p.y - (1.0 - p.x)).abs() < 1e-12;
            assert!(on_left || on_right);
        }
    }
}
