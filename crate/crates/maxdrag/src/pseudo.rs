//! Limiting splinter dynamics over a circular arc.
//!
//! As the tooth count of an arc-based zigzag grows, individual trajectories
//! stop converging but the resistance does. The limit object replaces the
//! billiard by a transport process on the arc itself: an incoming ray hits
//! the arc once, splits into at most two mass-weighted splinters, and each
//! splinter leaves after at most one further arc reflection. This module
//! implements that process and the quadrature that turns it into a
//! resistance value.
//!
//! Directions follow the exit-angle convention used across the crate: a
//! splinter with direction `d` travels with velocity `-(sin d, cos d)`, so
//! a splinter that exits through the opening has exit angle `d`.

use crate::error::{EvalError, PseudoError};
use crate::functional::{grid_phi, grid_xi, EvalConfig, EvalResult};
use crate::geometry::{make_canonical_zigzag, ArcFrame, Point2};
use crate::sum::CompensatedSum;
use rayon::prelude::*;

use std::f64::consts::{FRAC_PI_2, PI};

/// Mass fragment produced by an arc reflection.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Splinter {
    pub mass: f64,
    /// Travel direction in the exit-angle convention: velocity
    /// `-(sin direction, cos direction)`.
    pub direction: f64,
}

/// How the reflected branch of a split continues, classified by the
/// backward hit angle of the incoming chord.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SecondReflection {
    /// No split at all: the whole ray reflects once and exits.
    NoSplitSingle,
    /// The ray splits and the reflected splinter exits directly.
    SplitFirstExits,
    /// The ray splits and the reflected splinter hits the arc once more.
    SplitFirstReflectsAgain,
}

/// Split an incoming ray at its arc hit.
///
/// `phi` is the incoming entry angle, `alpha` the angular position of the
/// hit on the arc. Requires `cos(phi - alpha) > 0` (the ray actually
/// reaches the arc from the opening side); a vanishing or negative cosine
/// is a degenerate hit.
///
/// Returns one or two splinters whose masses sum to 1. Zero-mass
/// fragments (below 1e-15) are dropped, so a head-on pass-through comes
/// back as a single splinter.
pub fn reflect_splinters(phi: f64, alpha: f64) -> Result<Vec<Splinter>, PseudoError> {
    let c = (phi - alpha).cos();
    if c <= 1e-14 {
        return Err(PseudoError::DegenerateHit { phi, alpha });
    }
    let s = phi.sin().abs();
    let turned = phi.sin().signum() * FRAC_PI_2 + alpha - phi;
    if s >= c {
        return Ok(vec![Splinter {
            mass: 1.0,
            direction: turned,
        }]);
    }
    let m1 = s / c;
    let mut out = Vec::with_capacity(2);
    if m1 > 1e-15 {
        out.push(Splinter {
            mass: m1,
            direction: turned,
        });
    }
    if 1.0 - m1 > 1e-15 {
        out.push(Splinter {
            mass: 1.0 - m1,
            direction: phi,
        });
    }
    Ok(out)
}

/// Classify the continuation of the reflected branch from the backward hit
/// angle `back_angle` of the entry chord on an arc of half-angle `psi`.
pub fn second_reflection_kind(
    back_angle: f64,
    psi: f64,
) -> Result<SecondReflection, PseudoError> {
    if !(psi > 0.0 && psi <= FRAC_PI_2) {
        return Err(PseudoError::BadHalfAngle(psi));
    }
    let b = back_angle.abs();
    if !(psi..=PI).contains(&b) {
        return Err(PseudoError::BadBackAngle {
            angle: back_angle,
            psi,
        });
    }
    Ok(if b <= FRAC_PI_2 {
        SecondReflection::NoSplitSingle
    } else if b < PI - psi {
        SecondReflection::SplitFirstExits
    } else {
        SecondReflection::SplitFirstReflectsAgain
    })
}

/// Signed distance proxy of the circle point at angle `a` from the entry
/// line: zero exactly at the two intersection angles. Reduces to
/// `r sin(a - phi) + k` for a constant `k` of the entry state.
#[inline]
fn line_offset(frame: &ArcFrame, k: f64, phi: f64, a: f64) -> f64 {
    frame.radius * (a - phi).sin() + k
}

fn bisect_root(frame: &ArcFrame, k: f64, phi: f64, mut lo: f64, mut hi: f64) -> f64 {
    let rising = line_offset(frame, k, phi, lo) < 0.0;
    while hi - lo > 1e-12 {
        let mid = 0.5 * (lo + hi);
        let v = line_offset(frame, k, phi, mid);
        if (v < 0.0) == rising {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    0.5 * (lo + hi)
}

/// Forward and backward arc angles of the entry chord: the entry
/// `(phi, xi)` travels along a chord of the frame circle, hitting the arc
/// forward at the first angle (inside `(-psi, psi)`) and extending
/// backward to the second (magnitude in `(psi, pi]`).
///
/// Roots are found by bisection on the circle parameterization to 1e-12.
pub fn entry_hit_angles(
    frame: &ArcFrame,
    phi: f64,
    xi: f64,
) -> Result<(f64, f64), PseudoError> {
    if !(xi > 0.0 && xi < 1.0) {
        return Err(PseudoError::BadAbscissa(xi));
    }
    if !(phi > -FRAC_PI_2 && phi < FRAC_PI_2) {
        return Err(PseudoError::BadAngle(phi));
    }
    let psi = frame.half_angle;
    // line_offset(a) = cross(P(a) - E, v) with E = (xi, 0), v = (sin phi, cos phi)
    let k = (frame.center.x - xi) * phi.cos() - frame.center.y * phi.sin();
    let alpha = bisect_root(frame, k, phi, -psi, psi);
    // the backward branch lives on the rest of the circle; running the
    // angle through pi keeps one bracket with a guaranteed sign change
    let wrapped = bisect_root(frame, k, phi, psi, 2.0 * PI - psi);
    let beta = if wrapped > PI {
        wrapped - 2.0 * PI
    } else {
        wrapped
    };
    Ok((alpha, beta))
}

/// Resistance of the limiting arc dynamics at half-angle `psi` on an
/// `n1 x n2` midpoint grid.
///
/// Every grid sample contributes a convex combination of closed impact
/// factors, weighted by the splinter masses:
/// `1 + |sin beta|` for single-reflection exits, `2` for the
/// stay-direction splinter (it returns antiparallel), and
/// `1 - cos(alpha + beta)` for the twice-reflected splinter.
pub fn evaluate_arc_limit(psi: f64, n1: usize, n2: usize) -> Result<EvalResult, PseudoError> {
    let frame = ArcFrame::new(psi).map_err(|_| PseudoError::BadHalfAngle(psi))?;
    if n1 == 0 || n2 == 0 {
        return Err(PseudoError::EmptyGrid { n1, n2 });
    }
    let rows: Vec<CompensatedSum> = (0..n1)
        .into_par_iter()
        .map(|i| {
            let xi = grid_xi(i, n1);
            let mut sum = CompensatedSum::new();
            for j in 0..n2 {
                let phi = grid_phi(j, n2);
                let (alpha, beta) =
                    entry_hit_angles(&frame, phi, xi).expect("grid samples are interior");
                sum.add(phi.cos() * sample_contribution(psi, phi, alpha, beta));
            }
            sum
        })
        .collect();
    let mut total = CompensatedSum::new();
    for row in rows {
        total.merge(row);
    }
    Ok(EvalResult {
        value: 0.375 * PI / (n1 as f64 * n2 as f64) * total.value(),
        samples: n1 * n2,
        discarded: 0,
    })
}

#[inline]
fn sample_contribution(psi: f64, phi: f64, alpha: f64, beta: f64) -> f64 {
    let b = beta.abs();
    if b <= FRAC_PI_2 {
        return 1.0 + b.sin();
    }
    let c = (phi - alpha).cos();
    debug_assert!(c > 0.0, "interior chords reach the arc from below");
    let m1 = (phi.sin().abs() / c).min(1.0);
    let first = if b < PI - psi {
        1.0 + b.sin()
    } else {
        1.0 - (alpha + beta).cos()
    };
    m1 * first + 2.0 * (1.0 - m1)
}

/// True-billiard resistance of canonical zigzags with `m` teeth for each
/// `m` in `ms`, at the given quadrature. As `m` grows these approach
/// [`crate::analytic::arc_zigzag_resistance`] at the same `psi`.
pub fn zigzag_convergence(
    psi: f64,
    ms: &[usize],
    cfg: &EvalConfig,
) -> Result<Vec<(usize, f64)>, EvalError> {
    let mut out = Vec::with_capacity(ms.len());
    for &m in ms {
        let cavity = make_canonical_zigzag(psi, m, None)?;
        let result = crate::functional::evaluate_resistance(&cavity, cfg)?;
        out.push((m, result.value));
    }
    Ok(out)
}

/// The other intersection of a splinter's travel line with the frame
/// circle, starting from angle `alpha` with direction `d` in the exit
/// convention. Used to validate the reflected-direction formula.
pub fn next_circle_angle(frame: &ArcFrame, alpha: f64, d: f64) -> f64 {
    let p0 = frame.point(alpha);
    let v = Point2::new(-d.sin(), -d.cos());
    let t = 2.0 * frame.radius * (alpha - d).cos();
    frame.angle_of(p0 + v * t)
}
