//! Closed-form reference values for special cavities.
//!
//! These are the oracles the simulation is tested against: the right
//! isosceles triangle and its three-part decomposition, the limiting
//! resistance curve of arc-based zigzags with its four-part decomposition,
//! the mushroom lower bound, and the area element of the arc-coordinate
//! change of variables.

use crate::error::AnalyticError;
use crate::geometry::ArcFrame;

const SQRT_2: f64 = std::f64::consts::SQRT_2;
const FRAC_PI_2: f64 = std::f64::consts::FRAC_PI_2;

/// The three integrals behind the right isosceles triangle's resistance:
/// single reflections off the left flank, off the right flank, and double
/// reflections off both.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TriangleDecomposition {
    pub left_single: f64,
    pub right_single: f64,
    pub double_bounce: f64,
}

impl TriangleDecomposition {
    pub fn total(&self) -> f64 {
        self.left_single + self.right_single + self.double_bounce
    }
}

/// Exact decomposition of the triangle resistance; the parts sum to sqrt(2).
pub fn triangle_resistance() -> TriangleDecomposition {
    let single = 0.75 - 1.0 / (2.0 * SQRT_2);
    TriangleDecomposition {
        left_single: single,
        right_single: single,
        double_bounce: 1.5 * (SQRT_2 - 1.0),
    }
}

fn assert_psi_range(psi: f64) {
    assert!(
        psi > 0.0 && psi <= FRAC_PI_2 + 1e-15,
        "arc half-angle out of range: {psi}"
    );
}

/// Limiting resistance of canonical zigzags erected over an arc of
/// half-angle `psi`, as the tooth count grows.
///
/// `psi = 0` is accepted and returns the flat-arc limit sqrt(2).
pub fn arc_zigzag_resistance(psi: f64) -> f64 {
    if psi == 0.0 {
        return SQRT_2;
    }
    assert_psi_range(psi);
    let s = psi.sin();
    let h = (0.5 * psi).sin();
    1.0 + s * s / 6.0 + (2.0 * SQRT_2 * h - 2.0 * h.powi(4) - psi) / s
}

/// Maximizer of [`arc_zigzag_resistance`] on (0, pi/2], found by
/// golden-section search to an abscissa tolerance of 1e-8.
pub fn arc_zigzag_argmax() -> (f64, f64) {
    let inv_phi = (5.0_f64.sqrt() - 1.0) / 2.0;
    let (mut lo, mut hi) = (1e-6, FRAC_PI_2);
    let mut c = hi - inv_phi * (hi - lo);
    let mut d = lo + inv_phi * (hi - lo);
    let (mut fc, mut fd) = (arc_zigzag_resistance(c), arc_zigzag_resistance(d));
    while hi - lo > 1e-8 {
        if fc > fd {
            hi = d;
            d = c;
            fd = fc;
            c = hi - inv_phi * (hi - lo);
            fc = arc_zigzag_resistance(c);
        } else {
            lo = c;
            c = d;
            fc = fd;
            d = lo + inv_phi * (hi - lo);
            fd = arc_zigzag_resistance(d);
        }
    }
    let psi_star = 0.5 * (lo + hi);
    (psi_star, arc_zigzag_resistance(psi_star))
}

/// The four closed-form parts of [`arc_zigzag_resistance`], one per
/// reflection pattern of the limiting dynamics. The first and third are
/// equal by symmetry and their sum equals the full curve identically.
pub fn arc_zigzag_parts(psi: f64) -> (f64, f64, f64, f64) {
    assert_psi_range(psi);
    let s = psi.sin();
    let h = (0.5 * psi).sin();
    let pre = 3.0 / (16.0 * s);
    let part_i = pre * (4.0 * s - (8.0 * SQRT_2 / 3.0) * h - (16.0 / 3.0) * h.powi(4));
    let part_ii = pre * (16.0 * SQRT_2 * h - 8.0 * psi);
    let part_iv = pre * (-(8.0 / 3.0) * s + (8.0 / 9.0) * s.powi(3) + (8.0 / 3.0) * psi);
    (part_i, part_ii, part_i, part_iv)
}

/// Stem measure and resistance lower bound for the mushroom cavity.
///
/// The bound counts every particle that clears the stem as deflected by at
/// most the cap's focal defect angle `2 arctan(eps/2)`.
pub fn mushroom_bound(eps: f64) -> (f64, f64) {
    assert!(eps > 0.0 && eps < 1.0, "stem height out of range: {eps}");
    let stem = 2.0 * (1.0 + eps - (1.0 + eps * eps).sqrt());
    let deflect = 2.0 * (0.5 * eps).atan();
    let bound = 0.375 * (2.0 - 2.0 * stem) * (1.0 + deflect.cos());
    (stem, bound)
}

/// Area element of the substitution from arc coordinates `(alpha, beta)`
/// (forward and backward hit angles on the circle) to entry coordinates
/// `(phi, xi)`. Signed; callers integrating take the absolute value.
pub fn arc_area_element(alpha: f64, beta: f64, psi: f64) -> Result<f64, AnalyticError> {
    assert_psi_range(psi);
    let denom = (0.5 * (alpha + beta)).sin();
    if denom.abs() < 1e-14 {
        return Err(AnalyticError::SingularAreaElement { alpha, beta });
    }
    Ok((0.5 * (alpha - beta)).sin() / denom / (4.0 * psi.sin()))
}

/// Entry state `(phi, xi)` of the chord that meets the circle of half-angle
/// `psi` backward at angle `beta` and forward at angle `alpha`.
///
/// This is the inverse of the hit-angle computation: the chord through
/// `P(beta)` and `P(alpha)` crosses the opening at abscissa `xi`, traveling
/// in direction `(sin phi, cos phi)`.
pub fn entry_from_arc_angles(alpha: f64, beta: f64, psi: f64) -> (f64, f64) {
    assert_psi_range(psi);
    let frame = ArcFrame::new(psi).expect("psi checked above");
    let (pa, pb) = (frame.point(alpha), frame.point(beta));
    // crossing of the chord with the opening line
    let t = pb.y / (pb.y - pa.y);
    let xi = pb.x + t * (pa.x - pb.x);
    let phi = if beta > 0.0 {
        0.5 * (alpha + beta) - FRAC_PI_2
    } else {
        0.5 * (alpha + beta) + FRAC_PI_2
    };
    (phi, xi)
}

/// Whole-body mean resistance assembled from a hollow decomposition of the
/// boundary: `perimeter * (lambda0 + sum lambda_i f_i)`, where `lambda0` is
/// the convex (hollow-free) fraction scoring 1 and each hollow class `i`
/// covers fraction `lambda_i` with cavity resistance `f_i`.
pub fn assemble_body_resistance(
    perimeter: f64,
    lambda0: f64,
    parts: &[(f64, f64)],
) -> Result<f64, AnalyticError> {
    if !(perimeter > 0.0) || !perimeter.is_finite() {
        return Err(AnalyticError::BadDecomposition(format!(
            "perimeter must be positive, got {perimeter}"
        )));
    }
    if lambda0 < 0.0 || parts.iter().any(|&(l, _)| l < 0.0) {
        return Err(AnalyticError::BadDecomposition(
            "weights must be nonnegative".to_string(),
        ));
    }
    let total: f64 = lambda0 + parts.iter().map(|&(l, _)| l).sum::<f64>();
    if (total - 1.0).abs() > 1e-12 {
        return Err(AnalyticError::BadDecomposition(format!(
            "weights must sum to 1, got {total}"
        )));
    }
    if parts.iter().any(|&(_, f)| !(0.99..=1.51).contains(&f)) {
        return Err(AnalyticError::BadDecomposition(
            "part resistances must lie in the valid cavity range".to_string(),
        ));
    }
    Ok(perimeter * (lambda0 + parts.iter().map(|&(l, f)| l * f).sum::<f64>()))
}

/// Composite Simpson quadrature on `n` panels (`n` even), for smooth
/// integrands.
pub(crate) fn simpson<F: Fn(f64) -> f64>(f: F, a: f64, b: f64, n: usize) -> f64 {
    debug_assert!(n >= 2 && n % 2 == 0);
    let h = (b - a) / n as f64;
    let mut acc = f(a) + f(b);
    for k in 1..n {
        let w = if k % 2 == 1 { 4.0 } else { 2.0 };
        acc += w * f(a + k as f64 * h);
    }
    acc * h / 3.0
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    const PI: f64 = std::f64::consts::PI;

    #[test]
    fn triangle_parts_and_total() {
        let d = triangle_resistance();
        assert_abs_diff_eq!(d.left_single, 0.396447, epsilon = 5e-7);
        assert_abs_diff_eq!(d.double_bounce, 0.621320, epsilon = 5e-7);
        assert_eq!(d.left_single, d.right_single);
        assert_abs_diff_eq!(d.total(), SQRT_2, epsilon = 1e-12);
    }

    #[test]
    fn triangle_parts_match_direct_integration() {
        // single reflection off the left flank turns phi into -pi/2 - phi,
        // so the impact factor is 1 - sin(2 phi); the xi extent of the
        // region is min(1, -tan phi). Split at -pi/4 where the extent kinks.
        let left = |phi: f64| phi.cos() * (1.0 - (2.0 * phi).sin()) * (-phi.tan()).min(1.0);
        let i1 = 0.375 * (simpson(left, -FRAC_PI_2 + 1e-12, -FRAC_PI_2 / 2.0, 4000)
            + simpson(left, -FRAC_PI_2 / 2.0, 0.0, 4000));
        // double reflections return parallel: impact factor is exactly 2 on
        // the remaining xi extent
        let double = |phi: f64| phi.cos() * 2.0 * (1.0 - phi.tan().abs()).max(0.0);
        let i12 = 0.375 * (simpson(&double, -FRAC_PI_2 / 2.0, 0.0, 4000)
            + simpson(&double, 0.0, FRAC_PI_2 / 2.0, 4000));
        let d = triangle_resistance();
        assert_abs_diff_eq!(i1, d.left_single, epsilon = 1e-9);
        assert_abs_diff_eq!(i12, d.double_bounce, epsilon = 1e-9);
    }

    #[test]
    fn zigzag_curve_endpoints() {
        assert_eq!(arc_zigzag_resistance(0.0), SQRT_2);
        assert_abs_diff_eq!(arc_zigzag_resistance(1e-6), SQRT_2, epsilon = 1e-10);
        // direct evaluation at the upright end: 1 + 1/6 + (2 - 1/2 - pi/2)
        let quarter = arc_zigzag_resistance(FRAC_PI_2);
        assert_abs_diff_eq!(quarter, 8.0 / 3.0 - FRAC_PI_2, epsilon = 1e-14);
        assert_abs_diff_eq!(quarter, 1.095870, epsilon = 5e-7);
    }

    #[test]
    fn zigzag_curve_peak() {
        assert_abs_diff_eq!(arc_zigzag_resistance(0.6835), 1.445209, epsilon = 1e-6);
        let (psi_star, best) = arc_zigzag_argmax();
        assert_abs_diff_eq!(psi_star, 0.6835, epsilon = 5e-4);
        assert_abs_diff_eq!(best, 1.445209, epsilon = 1e-6);
        assert!(best > arc_zigzag_resistance(psi_star + 0.01));
        assert!(best > arc_zigzag_resistance(psi_star - 0.01));
    }

    #[test]
    fn zigzag_parts_sum_to_curve() {
        for k in 1..=1000 {
            let psi = FRAC_PI_2 * k as f64 / 1000.0;
            let (a, b, c, d) = arc_zigzag_parts(psi);
            assert_abs_diff_eq!(
                a + b + c + d,
                arc_zigzag_resistance(psi),
                epsilon = 1e-12
            );
            assert_eq!(a, c);
        }
    }

    #[test]
    fn zigzag_flank_parts_vanish_for_semicircle() {
        let (a, _, c, _) = arc_zigzag_parts(FRAC_PI_2);
        assert_abs_diff_eq!(a, 0.0, epsilon = 1e-15);
        assert_abs_diff_eq!(c, 0.0, epsilon = 1e-15);
    }

    #[test]
    fn mushroom_bound_values() {
        let (stem, bound) = mushroom_bound(0.01);
        assert_abs_diff_eq!(stem, 0.0199000025, epsilon = 1e-9);
        assert_abs_diff_eq!(bound, 1.4701, epsilon = 1e-4);
        let (_, b2) = mushroom_bound(0.1);
        assert_abs_diff_eq!(b2, 1.2119, epsilon = 1e-4);
    }

    #[test]
    fn mushroom_bound_approaches_supremum() {
        let (_, b) = mushroom_bound(1e-4);
        assert!((1.5 - b).abs() < 1e-3);
        // below 1.5 everywhere, decreasing in the stem height
        let mut prev = 1.5;
        for k in 1..=50 {
            let eps = 0.5 * k as f64 / 50.0;
            let (_, b) = mushroom_bound(eps);
            assert!(b < 1.5);
            assert!(b < prev, "bound must decrease, failed at eps={eps}");
            prev = b;
        }
    }

    #[test]
    fn area_element_matches_finite_differences() {
        // compare against the determinant of the (phi, xi) map by central
        // differences at scattered interior points
        let h = 1e-6;
        let mut checked = 0;
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
                    let elem = arc_area_element(alpha, beta, psi).unwrap();
                    assert!(
                        (det.abs() - elem.abs()).abs() <= 1e-6 * elem.abs().max(1e-3),
                        "psi={psi} alpha={alpha} beta={beta}: {det} vs {elem}"
                    );
                    checked += 1;
                }
            }
        }
        assert_eq!(checked, 100);
    }

    #[test]
    fn area_element_is_antisymmetric_and_singular_on_diagonal() {
        let v = arc_area_element(0.2, 0.9, 0.95).unwrap();
        let w = arc_area_element(0.9, 0.2, 0.95).unwrap();
        assert_abs_diff_eq!(v, -w, epsilon = 1e-15);
        assert!(arc_area_element(0.3, -0.3, 0.95).is_err());
        // worked value: psi = pi/2, alpha = 0, beta = pi/2
        let x = arc_area_element(0.0, FRAC_PI_2, FRAC_PI_2).unwrap();
        assert_abs_diff_eq!(x, -0.25, epsilon = 1e-15);
    }

    #[test]
    fn entry_map_recovers_plain_chords() {
        // beta = pi is the bottom of the circle; the chord through the
        // bottom and the top (alpha = 0) is vertical through x = 1/2
        let (phi, xi) = entry_from_arc_angles(0.0, PI, 1.0);
        assert_abs_diff_eq!(phi, 0.0, epsilon = 1e-15);
        assert_abs_diff_eq!(xi, 0.5, epsilon = 1e-12);
    }

    #[test]
    fn body_assembly_examples() {
        // smooth disk: no hollows
        let disk = assemble_body_resistance(2.0 * PI, 1.0, &[]).unwrap();
        assert_abs_diff_eq!(disk, 2.0 * PI, epsilon = 1e-15);
        // disk fully decorated with triangular hollows: perimeter shrinks to
        // the inscribed chord length, every part scores sqrt(2)
        let eps = PI / 180.0;
        let zig = assemble_body_resistance(2.0 * PI * eps.sin() / eps, 0.0, &[(1.0, SQRT_2)])
            .unwrap();
        assert_abs_diff_eq!(zig / disk, SQRT_2 * eps.sin() / eps, epsilon = 1e-15);
        // weight bookkeeping is enforced
        assert!(assemble_body_resistance(1.0, 0.5, &[(0.4, SQRT_2)]).is_err());
        assert!(assemble_body_resistance(1.0, 0.0, &[(1.0, 1.7)]).is_err());
    }
}
