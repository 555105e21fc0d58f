//! Cavity boundary geometry: pieces, validated chains, and the parametric
//! shape families used by the evaluator and the optimizer.
//!
//! A cavity is a chain of boundary pieces running from the origin to (1, 0)
//! through the upper half-plane. Together with the opening segment
//! `[0,1] x {0}` it bounds the hollow that billiard particles explore.

use serde::{Deserialize, Serialize};

use crate::error::GeometryError;

/// Chain-closure tolerance: consecutive pieces must meet within this
/// distance and the chain ends must land on (0,0) and (1,0).
pub const CHAIN_TOL: f64 = 1e-12;

/// A point (or free vector) in the plane. Serialized as `[x, y]`.
#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
#[serde(from = "[f64; 2]", into = "[f64; 2]")]
pub struct Point2 {
    pub x: f64,
    pub y: f64,
}

impl Point2 {
    pub const fn new(x: f64, y: f64) -> Self {
        Point2 { x, y }
    }

    #[inline]
    pub fn dot(self, other: Point2) -> f64 {
        self.x * other.x + self.y * other.y
    }

    /// z-component of the cross product, `self.x * other.y - self.y * other.x`.
    #[inline]
    pub fn cross(self, other: Point2) -> f64 {
        self.x * other.y - self.y * other.x
    }

    #[inline]
    pub fn norm(self) -> f64 {
        self.x.hypot(self.y)
    }

    #[inline]
    pub fn distance(self, other: Point2) -> f64 {
        (self - other).norm()
    }

    #[inline]
    pub fn normalized(self) -> Point2 {
        let n = self.norm();
        Point2::new(self.x / n, self.y / n)
    }

    pub fn is_finite(self) -> bool {
        self.x.is_finite() && self.y.is_finite()
    }
}

impl From<[f64; 2]> for Point2 {
    fn from(a: [f64; 2]) -> Self {
        Point2::new(a[0], a[1])
    }
}

impl From<Point2> for [f64; 2] {
    fn from(p: Point2) -> Self {
        [p.x, p.y]
    }
}

impl std::ops::Add for Point2 {
    type Output = Point2;
    fn add(self, rhs: Point2) -> Point2 {
        Point2::new(self.x + rhs.x, self.y + rhs.y)
    }
}

impl std::ops::Sub for Point2 {
    type Output = Point2;
    fn sub(self, rhs: Point2) -> Point2 {
        Point2::new(self.x - rhs.x, self.y - rhs.y)
    }
}

impl std::ops::Mul<f64> for Point2 {
    type Output = Point2;
    fn mul(self, s: f64) -> Point2 {
        Point2::new(self.x * s, self.y * s)
    }
}

impl std::ops::Neg for Point2 {
    type Output = Point2;
    fn neg(self) -> Point2 {
        Point2::new(-self.x, -self.y)
    }
}

/// One piece of a cavity boundary.
///
/// Pieces carry their own parameterization direction (`start` to `end`); the
/// enclosing [`Cavity`] records whether the chain traverses a piece forward
/// or reversed, so a piece may be written down in whichever direction is
/// most natural.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "type")]
pub enum BoundaryPiece {
    /// Straight segment from `p0` to `p1`.
    #[serde(rename = "segment")]
    Segment { p0: Point2, p1: Point2 },
    /// Graph of `q(x) = c2 x^2 + c1 x + c0` over `x` in `[a, b]`.
    #[serde(rename = "parabola")]
    ParabolicArc {
        a: f64,
        b: f64,
        c0: f64,
        c1: f64,
        c2: f64,
    },
    /// Axis-aligned elliptic arc `center + (rx cos t, ry sin t)` for
    /// `t` in `[theta0, theta1]`, with `theta0 < theta1`.
    #[serde(rename = "ellipse")]
    EllipticArc {
        center: Point2,
        rx: f64,
        ry: f64,
        theta0: f64,
        theta1: f64,
    },
}

impl BoundaryPiece {
    /// Start point in the piece's own parameterization.
    pub fn start(&self) -> Point2 {
        self.point_at(0.0)
    }

    /// End point in the piece's own parameterization.
    pub fn end(&self) -> Point2 {
        self.point_at(1.0)
    }

    /// Point at normalized parameter `t` in `[0, 1]`.
    pub fn point_at(&self, t: f64) -> Point2 {
        match *self {
            BoundaryPiece::Segment { p0, p1 } => p0 + (p1 - p0) * t,
            BoundaryPiece::ParabolicArc { a, b, c0, c1, c2 } => {
                let x = a + (b - a) * t;
                Point2::new(x, (c2 * x + c1) * x + c0)
            }
            BoundaryPiece::EllipticArc {
                center,
                rx,
                ry,
                theta0,
                theta1,
            } => {
                let th = theta0 + (theta1 - theta0) * t;
                Point2::new(center.x + rx * th.cos(), center.y + ry * th.sin())
            }
        }
    }

    /// Lowest y coordinate attained anywhere on the piece.
    pub fn min_y(&self) -> f64 {
        match *self {
            BoundaryPiece::Segment { p0, p1 } => p0.y.min(p1.y),
            BoundaryPiece::ParabolicArc { a, b, c0, c1, c2 } => {
                let q = |x: f64| (c2 * x + c1) * x + c0;
                let mut m = q(a).min(q(b));
                if c2 != 0.0 {
                    let xv = -c1 / (2.0 * c2);
                    if xv > a && xv < b {
                        m = m.min(q(xv));
                    }
                }
                m
            }
            BoundaryPiece::EllipticArc {
                center,
                ry,
                theta0,
                theta1,
                ..
            } => {
                let mut m = (center.y + ry * theta0.sin()).min(center.y + ry * theta1.sin());
                // bottom of the ellipse at theta = -pi/2 + 2k pi
                let mut th = -std::f64::consts::FRAC_PI_2;
                while th > theta0 {
                    th -= 2.0 * std::f64::consts::PI;
                }
                while th < theta0 {
                    th += 2.0 * std::f64::consts::PI;
                }
                if th < theta1 {
                    m = m.min(center.y - ry);
                }
                m
            }
        }
    }

    /// Axis-aligned bounding box as `(lower_left, upper_right)`.
    pub fn bbox(&self) -> (Point2, Point2) {
        match *self {
            BoundaryPiece::Segment { p0, p1 } => (
                Point2::new(p0.x.min(p1.x), p0.y.min(p1.y)),
                Point2::new(p0.x.max(p1.x), p0.y.max(p1.y)),
            ),
            BoundaryPiece::ParabolicArc { a, b, c0, c1, c2 } => {
                let q = |x: f64| (c2 * x + c1) * x + c0;
                let mut lo = q(a).min(q(b));
                let mut hi = q(a).max(q(b));
                if c2 != 0.0 {
                    let xv = -c1 / (2.0 * c2);
                    if xv > a && xv < b {
                        lo = lo.min(q(xv));
                        hi = hi.max(q(xv));
                    }
                }
                (Point2::new(a, lo), Point2::new(b, hi))
            }
            BoundaryPiece::EllipticArc {
                center,
                rx,
                ry,
                theta0,
                theta1,
            } => {
                let p0 = self.point_at(0.0);
                let p1 = self.point_at(1.0);
                let mut lo = Point2::new(p0.x.min(p1.x), p0.y.min(p1.y));
                let mut hi = Point2::new(p0.x.max(p1.x), p0.y.max(p1.y));
                // axis extremes at multiples of pi/2 inside the angular range
                let step = std::f64::consts::FRAC_PI_2;
                let k0 = (theta0 / step).ceil() as i64;
                let k1 = (theta1 / step).floor() as i64;
                for k in k0..=k1 {
                    let th = k as f64 * step;
                    let p = Point2::new(center.x + rx * th.cos(), center.y + ry * th.sin());
                    lo = Point2::new(lo.x.min(p.x), lo.y.min(p.y));
                    hi = Point2::new(hi.x.max(p.x), hi.y.max(p.y));
                }
                (lo, hi)
            }
        }
    }

    /// Sample count used for polyline approximations (validation, plots).
    fn sample_count(&self) -> usize {
        match self {
            BoundaryPiece::Segment { .. } => 1,
            BoundaryPiece::ParabolicArc { .. } => 24,
            BoundaryPiece::EllipticArc { theta0, theta1, .. } => {
                let span = (theta1 - theta0).abs();
                ((span / 0.08).ceil() as usize).clamp(8, 96)
            }
        }
    }

    fn check_well_formed(&self, index: usize) -> Result<(), GeometryError> {
        let bad = |reason: &str| {
            Err(GeometryError::InvalidPiece {
                index,
                reason: reason.to_string(),
            })
        };
        match *self {
            BoundaryPiece::Segment { p0, p1 } => {
                if !p0.is_finite() || !p1.is_finite() {
                    return bad("non-finite endpoint");
                }
                if p0.distance(p1) <= CHAIN_TOL {
                    return bad("zero-length segment");
                }
            }
            BoundaryPiece::ParabolicArc { a, b, c0, c1, c2 } => {
                if ![a, b, c0, c1, c2].iter().all(|v| v.is_finite()) {
                    return bad("non-finite coefficient");
                }
                if !(a < b) {
                    return bad("interval must satisfy a < b");
                }
            }
            BoundaryPiece::EllipticArc {
                center,
                rx,
                ry,
                theta0,
                theta1,
            } => {
                if !center.is_finite() || !rx.is_finite() || !ry.is_finite() {
                    return bad("non-finite parameter");
                }
                if !(rx > 0.0 && ry > 0.0) {
                    return bad("radii must be positive");
                }
                if !(theta0 < theta1) {
                    return bad("angular range must satisfy theta0 < theta1");
                }
                if theta1 - theta0 > 2.0 * std::f64::consts::PI + 1e-9 {
                    return bad("angular range exceeds a full turn");
                }
            }
        }
        Ok(())
    }
}

#[derive(Serialize, Deserialize)]
struct CavityRepr {
    label: String,
    pieces: Vec<BoundaryPiece>,
}

/// A validated cavity boundary: a non-self-intersecting chain of pieces from
/// (0,0) to (1,0) that stays in the closed upper half-plane.
#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(into = "CavityRepr")]
pub struct Cavity {
    label: String,
    pieces: Vec<BoundaryPiece>,
    /// Whether the chain traverses piece k against its own parameterization.
    reversed: Vec<bool>,
}

impl<'de> Deserialize<'de> for Cavity {
    fn deserialize<D>(deserializer: D) -> Result<Self, D::Error>
    where
        D: serde::Deserializer<'de>,
    {
        let repr = CavityRepr::deserialize(deserializer)?;
        Cavity::from_pieces(repr.label, repr.pieces).map_err(serde::de::Error::custom)
    }
}

impl From<Cavity> for CavityRepr {
    fn from(c: Cavity) -> CavityRepr {
        CavityRepr {
            label: c.label,
            pieces: c.pieces,
        }
    }
}

impl Cavity {
    /// Validate a piece chain and build a cavity.
    ///
    /// Checks, in order: every piece is well formed, the chain connects
    /// (0,0) to (1,0) within [`CHAIN_TOL`] (pieces may be traversed in either
    /// direction), no point dips below the opening line, and the chain does
    /// not intersect itself.
    pub fn from_pieces(
        label: impl Into<String>,
        pieces: Vec<BoundaryPiece>,
    ) -> Result<Self, GeometryError> {
        if pieces.is_empty() {
            return Err(GeometryError::EmptyChain);
        }
        for (k, piece) in pieces.iter().enumerate() {
            piece.check_well_formed(k)?;
        }

        let mut reversed = Vec::with_capacity(pieces.len());
        let mut cursor = Point2::new(0.0, 0.0);
        for (k, piece) in pieces.iter().enumerate() {
            let (s, e) = (piece.start(), piece.end());
            let (fwd, rev) = (cursor.distance(s), cursor.distance(e));
            if fwd <= CHAIN_TOL {
                reversed.push(false);
                cursor = e;
            } else if rev <= CHAIN_TOL {
                reversed.push(true);
                cursor = s;
            } else {
                return Err(GeometryError::BrokenChain {
                    index: k,
                    gap: fwd.min(rev),
                });
            }
        }
        let terminus = Point2::new(1.0, 0.0);
        if cursor.distance(terminus) > CHAIN_TOL {
            return Err(GeometryError::OpenChain {
                end: (cursor.x, cursor.y),
            });
        }

        for (k, piece) in pieces.iter().enumerate() {
            let y = piece.min_y();
            if y < -CHAIN_TOL {
                return Err(GeometryError::BelowOpening { index: k, y });
            }
        }

        let cavity = Cavity {
            label: label.into(),
            pieces,
            reversed,
        };
        cavity.check_simple()?;
        Ok(cavity)
    }

    /// Chain self-intersection check on a polyline approximation.
    fn check_simple(&self) -> Result<(), GeometryError> {
        // (piece index, segment start, segment end)
        let mut segs: Vec<(usize, Point2, Point2)> = Vec::new();
        for (k, piece) in self.pieces.iter().enumerate() {
            let n = piece.sample_count();
            let mut prev = piece.point_at(0.0);
            for s in 1..=n {
                let next = piece.point_at(s as f64 / n as f64);
                segs.push((k, prev, next));
                prev = next;
            }
        }
        for i in 0..segs.len() {
            for j in (i + 1)..segs.len() {
                let (a0, a1) = (segs[i].1, segs[i].2);
                let (b0, b1) = (segs[j].1, segs[j].2);
                // segments that meet at a junction may sit a hair apart; the
                // proper-crossing test is unreliable there, so skip them
                let touches = a0.distance(b0) <= CHAIN_TOL
                    || a0.distance(b1) <= CHAIN_TOL
                    || a1.distance(b0) <= CHAIN_TOL
                    || a1.distance(b1) <= CHAIN_TOL;
                if touches {
                    continue;
                }
                if segments_cross(a0, a1, b0, b1) {
                    return Err(GeometryError::SelfIntersection {
                        first: segs[i].0,
                        second: segs[j].0,
                    });
                }
            }
        }
        Ok(())
    }

    pub fn label(&self) -> &str {
        &self.label
    }

    pub fn pieces(&self) -> &[BoundaryPiece] {
        &self.pieces
    }

    /// Whether the chain traverses piece `k` against its parameterization.
    pub fn is_reversed(&self, k: usize) -> bool {
        self.reversed[k]
    }

    pub fn set_label(&mut self, label: impl Into<String>) {
        self.label = label.into();
    }

    /// Polyline approximation of the whole chain in traversal order,
    /// starting at (0,0) and ending at (1,0).
    pub fn chain_polyline(&self) -> Vec<Point2> {
        let mut out = vec![Point2::new(0.0, 0.0)];
        for (k, piece) in self.pieces.iter().enumerate() {
            let n = piece.sample_count();
            for s in 1..=n {
                let t = s as f64 / n as f64;
                let t = if self.reversed[k] { 1.0 - t } else { t };
                out.push(piece.point_at(t));
            }
        }
        out
    }

    /// Bounding box of the chain together with the opening segment.
    pub fn bbox(&self) -> (Point2, Point2) {
        let mut lo = Point2::new(0.0, 0.0);
        let mut hi = Point2::new(1.0, 0.0);
        for piece in &self.pieces {
            let (plo, phi) = piece.bbox();
            lo = Point2::new(lo.x.min(plo.x), lo.y.min(plo.y));
            hi = Point2::new(hi.x.max(phi.x), hi.y.max(phi.y));
        }
        (lo, hi)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("cavity serialization cannot fail")
    }

    pub fn from_json(text: &str) -> Result<Self, GeometryError> {
        serde_json::from_str(text).map_err(|e| GeometryError::InvalidParameter(e.to_string()))
    }
}

/// Proper crossing test for closed segments, conservative about touching.
fn segments_cross(a0: Point2, a1: Point2, b0: Point2, b1: Point2) -> bool {
    let d1 = (a1 - a0).cross(b0 - a0);
    let d2 = (a1 - a0).cross(b1 - a0);
    let d3 = (b1 - b0).cross(a0 - b0);
    let d4 = (b1 - b0).cross(a1 - b0);
    (d1 * d2 < 0.0) && (d3 * d4 < 0.0)
}

/// Hollow bounded by two straight flanks meeting at an apex.
///
/// The flanks rise from (0,0) with slope `alpha` and descend to (1,0) with
/// slope `-beta`; the apex sits at `x = beta / (alpha + beta)`.
pub fn make_two_segment_line(alpha: f64, beta: f64) -> Result<Cavity, GeometryError> {
    if !(alpha > 0.0 && beta > 0.0) || !alpha.is_finite() || !beta.is_finite() {
        return Err(GeometryError::InvalidParameter(format!(
            "two-segment slopes must be positive, got alpha={alpha}, beta={beta}"
        )));
    }
    let xi0 = beta / (alpha + beta);
    let apex = Point2::new(xi0, alpha * xi0);
    let pieces = vec![
        BoundaryPiece::Segment {
            p0: Point2::new(0.0, 0.0),
            p1: apex,
        },
        BoundaryPiece::Segment {
            p0: apex,
            p1: Point2::new(1.0, 0.0),
        },
    ];
    Cavity::from_pieces(format!("two-segment-line(a={alpha},b={beta})"), pieces)
}

/// Hollow made of two parabolic flanks.
///
/// The left flank is `a1 x^2 + b1 x` on `[0, xi0]`; the right flank is
/// `a2 (1-x)^2 + b2 (1-x)` on `[xi0, 1]`. The two must agree at `xi0`
/// within 1e-9.
pub fn make_two_segment_quadratic(
    a1: f64,
    b1: f64,
    a2: f64,
    b2: f64,
    xi0: f64,
) -> Result<Cavity, GeometryError> {
    if ![a1, b1, a2, b2, xi0].iter().all(|v| v.is_finite()) {
        return Err(GeometryError::InvalidParameter(
            "quadratic flank parameters must be finite".to_string(),
        ));
    }
    if !(xi0 > 0.0 && xi0 < 1.0) {
        return Err(GeometryError::InvalidParameter(format!(
            "junction must lie strictly inside (0,1), got xi0={xi0}"
        )));
    }
    let left_at = a1 * xi0 * xi0 + b1 * xi0;
    let u = 1.0 - xi0;
    let right_at = a2 * u * u + b2 * u;
    if (left_at - right_at).abs() > 1e-9 {
        return Err(GeometryError::InvalidParameter(format!(
            "flanks disagree at xi0={xi0}: {left_at} vs {right_at}"
        )));
    }
    // right flank rewritten as a polynomial in x
    let pieces = vec![
        BoundaryPiece::ParabolicArc {
            a: 0.0,
            b: xi0,
            c0: 0.0,
            c1: b1,
            c2: a1,
        },
        BoundaryPiece::ParabolicArc {
            a: xi0,
            b: 1.0,
            c0: a2 + b2,
            c1: -2.0 * a2 - b2,
            c2: a2,
        },
    ];
    Cavity::from_pieces(
        format!("two-segment-quadratic(a1={a1},b1={b1},a2={a2},b2={b2},xi0={xi0})"),
        pieces,
    )
}

/// Symmetric broken line over the uniform grid `x = i/m`.
///
/// `heights` gives the profile values at `x = 1/m .. floor(m/2)/m`; the rest
/// of the profile is mirrored. `heights.len()` must equal `m / 2`.
pub fn make_symmetric_polyline(m: usize, heights: &[f64]) -> Result<Cavity, GeometryError> {
    if m == 0 {
        return Err(GeometryError::InvalidParameter(
            "polyline needs at least one segment".to_string(),
        ));
    }
    if heights.len() != m / 2 {
        return Err(GeometryError::InvalidParameter(format!(
            "m={m} needs {} heights, got {}",
            m / 2,
            heights.len()
        )));
    }
    if heights.iter().any(|h| !h.is_finite() || *h < 0.0) {
        return Err(GeometryError::InvalidParameter(
            "heights must be finite and nonnegative".to_string(),
        ));
    }
    let mut vertices = Vec::with_capacity(m + 1);
    vertices.push(Point2::new(0.0, 0.0));
    for i in 1..m {
        let h = heights[i.min(m - i) - 1];
        vertices.push(Point2::new(i as f64 / m as f64, h));
    }
    vertices.push(Point2::new(1.0, 0.0));
    polyline_cavity(format!("symmetric-polyline(m={m})"), &vertices)
}

fn polyline_cavity(label: String, vertices: &[Point2]) -> Result<Cavity, GeometryError> {
    let mut pieces = Vec::with_capacity(vertices.len() - 1);
    for w in vertices.windows(2) {
        // collapse zero-length edges produced by repeated vertices
        if w[0].distance(w[1]) <= CHAIN_TOL {
            continue;
        }
        pieces.push(BoundaryPiece::Segment { p0: w[0], p1: w[1] });
    }
    Cavity::from_pieces(label, pieces)
}

/// Circle through (0,0) and (1,0) on which a `half_angle` arc spans the
/// opening. Points are `center + radius (sin a, cos a)` for `|a| <= half_angle`.
#[derive(Debug, Clone, Copy)]
pub struct ArcFrame {
    pub center: Point2,
    pub radius: f64,
    pub half_angle: f64,
}

impl ArcFrame {
    pub fn new(half_angle: f64) -> Result<Self, GeometryError> {
        if !(half_angle > 0.0 && half_angle <= std::f64::consts::FRAC_PI_2) {
            return Err(GeometryError::InvalidParameter(format!(
                "arc half-angle must lie in (0, pi/2], got {half_angle}"
            )));
        }
        let s = half_angle.sin();
        Ok(ArcFrame {
            center: Point2::new(0.5, -half_angle.cos() / (2.0 * s)),
            radius: 1.0 / (2.0 * s),
            half_angle,
        })
    }

    /// Point on the circle at angular parameter `a`, measured from the
    /// topmost point, increasing toward positive x.
    pub fn point(&self, a: f64) -> Point2 {
        self.center + Point2::new(a.sin(), a.cos()) * self.radius
    }

    /// Angular parameter of a circle point.
    pub fn angle_of(&self, p: Point2) -> f64 {
        let d = p - self.center;
        d.x.atan2(d.y)
    }

    /// Angular parameter of the arc point with abscissa `x`.
    pub fn angle_at_abscissa(&self, x: f64) -> f64 {
        ((2.0 * x - 1.0) * self.half_angle.sin()).asin()
    }
}

/// Zigzag of right triangles erected over a circular arc.
///
/// The arc has angular size `2 psi` and spans the opening; `m` (even) is the
/// number of zigzag segments. Even vertices lie on the arc, odd vertices sit
/// above the midpoint of their neighbors so that each triangle has a right
/// angle at the top and a vertical median. `breakpoints`, if given, lists the
/// abscissas of the even vertices (`m/2 + 1` strictly increasing values from
/// 0 to 1); by default the even vertices are uniform in arc angle.
pub fn make_canonical_zigzag(
    psi: f64,
    m: usize,
    breakpoints: Option<&[f64]>,
) -> Result<Cavity, GeometryError> {
    if m < 2 || m % 2 != 0 {
        return Err(GeometryError::InvalidParameter(format!(
            "zigzag segment count must be even and at least 2, got {m}"
        )));
    }
    let frame = ArcFrame::new(psi)?;
    let half = m / 2;
    let mut arc_points = Vec::with_capacity(half + 1);
    match breakpoints {
        None => {
            for i in 0..=half {
                let a = -psi + 2.0 * psi * (i as f64) / (half as f64);
                arc_points.push(frame.point(a));
            }
        }
        Some(xs) => {
            if xs.len() != half + 1 {
                return Err(GeometryError::InvalidParameter(format!(
                    "need {} breakpoints for m={m}, got {}",
                    half + 1,
                    xs.len()
                )));
            }
            if xs.windows(2).any(|w| !(w[0] < w[1])) {
                return Err(GeometryError::InvalidParameter(
                    "breakpoints must be strictly increasing".to_string(),
                ));
            }
            if xs[0].abs() > CHAIN_TOL || (xs[half] - 1.0).abs() > CHAIN_TOL {
                return Err(GeometryError::InvalidParameter(
                    "breakpoints must start at 0 and end at 1".to_string(),
                ));
            }
            for &x in xs {
                arc_points.push(frame.point(frame.angle_at_abscissa(x)));
            }
        }
    }
    // pin the chain ends exactly
    arc_points[0] = Point2::new(0.0, 0.0);
    arc_points[half] = Point2::new(1.0, 0.0);

    let mut vertices = Vec::with_capacity(m + 1);
    for i in 0..half {
        let (lo, hi) = (arc_points[i], arc_points[i + 1]);
        vertices.push(lo);
        // apex of the right isosceles triangle over the chord
        vertices.push(Point2::new(
            0.5 * (lo.x + hi.x),
            0.5 * (lo.y + hi.y) + 0.5 * lo.distance(hi),
        ));
    }
    vertices.push(arc_points[half]);
    polyline_cavity(format!("canonical-zigzag(psi={psi},m={m})"), &vertices)
}

/// Mushroom hollow: a shallow stem of height `eps` under a semi-elliptic cap
/// whose foci are the stem's mouth corners.
pub fn make_mushroom(eps: f64) -> Result<Cavity, GeometryError> {
    if !(eps > 0.0 && eps < 1.0) {
        return Err(GeometryError::InvalidParameter(format!(
            "mushroom stem height must lie in (0, 1), got {eps}"
        )));
    }
    let rx = 1.0 / eps;
    let ry = (1.0 / (eps * eps) - 0.25).sqrt();
    let center = Point2::new(0.5, eps);
    let pieces = vec![
        BoundaryPiece::Segment {
            p0: Point2::new(0.0, 0.0),
            p1: Point2::new(0.0, eps),
        },
        BoundaryPiece::Segment {
            p0: Point2::new(0.0, eps),
            p1: Point2::new(0.5 - rx, eps),
        },
        BoundaryPiece::EllipticArc {
            center,
            rx,
            ry,
            theta0: 0.0,
            theta1: std::f64::consts::PI,
        },
        BoundaryPiece::Segment {
            p0: Point2::new(0.5 + rx, eps),
            p1: Point2::new(1.0, eps),
        },
        BoundaryPiece::Segment {
            p0: Point2::new(1.0, eps),
            p1: Point2::new(1.0, 0.0),
        },
    ];
    Cavity::from_pieces(format!("mushroom(eps={eps})"), pieces)
}

/// Rectangular hollow of height `h` over the full opening.
pub fn make_rectangle(h: f64) -> Result<Cavity, GeometryError> {
    if !(h > 0.0) || !h.is_finite() {
        return Err(GeometryError::InvalidParameter(format!(
            "rectangle height must be positive, got {h}"
        )));
    }
    let pieces = vec![
        BoundaryPiece::Segment {
            p0: Point2::new(0.0, 0.0),
            p1: Point2::new(0.0, h),
        },
        BoundaryPiece::Segment {
            p0: Point2::new(0.0, h),
            p1: Point2::new(1.0, h),
        },
        BoundaryPiece::Segment {
            p0: Point2::new(1.0, h),
            p1: Point2::new(1.0, 0.0),
        },
    ];
    Cavity::from_pieces(format!("rectangle(h={h})"), pieces)
}

/// Symmetric piecewise-quadratic profile over the uniform grid `x = i/m`.
///
/// `heights` fixes the knot values at `x = 1/m .. floor(m/2)/m` (mirrored to
/// the right half); `curvatures` gives each of the first `floor(m/2)` spans a
/// parabolic bulge `c (x - x_l)(x_r - x)` on top of the linear interpolant
/// (mirrored likewise; for odd `m` the middle span stays straight). With
/// `m = 1` the profile is identically zero.
pub fn make_symmetric_piecewise_quadratic(
    m: usize,
    heights: &[f64],
    curvatures: &[f64],
) -> Result<Cavity, GeometryError> {
    if m == 0 {
        return Err(GeometryError::InvalidParameter(
            "need at least one span".to_string(),
        ));
    }
    if heights.len() != m / 2 || curvatures.len() != m / 2 {
        return Err(GeometryError::InvalidParameter(format!(
            "m={m} needs {} heights and as many curvatures, got {} and {}",
            m / 2,
            heights.len(),
            curvatures.len()
        )));
    }
    if heights.iter().any(|h| !h.is_finite() || *h < 0.0) {
        return Err(GeometryError::InvalidParameter(
            "knot heights must be finite and nonnegative".to_string(),
        ));
    }
    if curvatures.iter().any(|c| !c.is_finite()) {
        return Err(GeometryError::InvalidParameter(
            "curvatures must be finite".to_string(),
        ));
    }
    let knot = |i: usize| -> f64 {
        if i == 0 || i == m {
            0.0
        } else {
            heights[i.min(m - i) - 1]
        }
    };
    let curv = |i: usize| -> f64 {
        // spans are 1-based; mirror partner of span i is m + 1 - i
        let k = i.min(m + 1 - i);
        if 2 * k > m {
            0.0 // middle span of an odd subdivision
        } else {
            curvatures[k - 1]
        }
    };
    let w = 1.0 / m as f64;
    let mut pieces = Vec::with_capacity(m);
    for i in 1..=m {
        let (xl, xr) = ((i - 1) as f64 * w, i as f64 * w);
        let (hl, hr) = (knot(i - 1), knot(i));
        let c = curv(i);
        let slope = (hr - hl) / w;
        // hl + slope (x - xl) + c (x - xl)(xr - x), expanded in x
        let c2 = -c;
        let c1 = slope + c * (xl + xr);
        let c0 = hl - slope * xl - c * xl * xr;
        if c == 0.0 {
            pieces.push(BoundaryPiece::Segment {
                p0: Point2::new(xl, hl),
                p1: Point2::new(xr, hr),
            });
        } else {
            pieces.push(BoundaryPiece::ParabolicArc {
                a: xl,
                b: xr,
                c0,
                c1,
                c2,
            });
        }
    }
    Cavity::from_pieces(format!("symmetric-piecewise-quadratic(m={m})"), pieces)
}

/// Shape family tags for parameterized cavity construction.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "family", rename_all = "kebab-case")]
pub enum ShapeFamily {
    /// Values `[alpha, beta]`.
    TwoSegmentLine,
    /// Values `[a1, b1, a2, b2, xi0]`.
    TwoSegmentQuadratic,
    /// Values: `floor(m/2)` knot heights.
    SymmetricPolyline { m: usize },
    /// Values: `floor(m/2)` knot heights then `floor(m/2)` span curvatures.
    SymmetricPiecewiseQuadratic { m: usize },
    /// Values `[psi]`.
    CanonicalZigzag { m: usize },
    /// Values `[eps]`.
    Mushroom,
    /// Values `[h]`.
    Rectangle,
}

impl ShapeFamily {
    pub fn arity(&self) -> usize {
        match *self {
            ShapeFamily::TwoSegmentLine => 2,
            ShapeFamily::TwoSegmentQuadratic => 5,
            ShapeFamily::SymmetricPolyline { m } => m / 2,
            ShapeFamily::SymmetricPiecewiseQuadratic { m } => 2 * (m / 2),
            ShapeFamily::CanonicalZigzag { .. } => 1,
            ShapeFamily::Mushroom | ShapeFamily::Rectangle => 1,
        }
    }
}

/// A cavity described by a family tag and a parameter vector.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ShapeParams {
    #[serde(flatten)]
    pub family: ShapeFamily,
    pub values: Vec<f64>,
}

impl ShapeParams {
    pub fn new(family: ShapeFamily, values: Vec<f64>) -> Self {
        ShapeParams { family, values }
    }

    pub fn to_cavity(&self) -> Result<Cavity, GeometryError> {
        let v = &self.values;
        if v.len() != self.family.arity() {
            return Err(GeometryError::InvalidParameter(format!(
                "{:?} takes {} values, got {}",
                self.family,
                self.family.arity(),
                v.len()
            )));
        }
        match self.family {
            ShapeFamily::TwoSegmentLine => make_two_segment_line(v[0], v[1]),
            ShapeFamily::TwoSegmentQuadratic => {
                make_two_segment_quadratic(v[0], v[1], v[2], v[3], v[4])
            }
            ShapeFamily::SymmetricPolyline { m } => make_symmetric_polyline(m, v),
            ShapeFamily::SymmetricPiecewiseQuadratic { m } => {
                let half = m / 2;
                make_symmetric_piecewise_quadratic(m, &v[..half], &v[half..])
            }
            ShapeFamily::CanonicalZigzag { m } => make_canonical_zigzag(v[0], m, None),
            ShapeFamily::Mushroom => make_mushroom(v[0]),
            ShapeFamily::Rectangle => make_rectangle(v[0]),
        }
    }
}
