//! Deterministic SVG rendering of cavity boundaries.
//!
//! Output is a pure function of the cavity and the requested width: fixed
//! six-decimal coordinates, no timestamps, no external references, so
//! repeated exports of the same shape are byte-identical. The opening is
//! drawn as a dashed baseline under the boundary chain.

use crate::geometry::{BoundaryPiece, Cavity, Point2};
use std::f64::consts::PI;
use std::fmt::Write;

/// Render the cavity to a standalone SVG document of the given pixel
/// width. Height follows from the shape's aspect ratio plus a 5% margin.
pub fn svg_document(cavity: &Cavity, width: f64) -> String {
    let (lo, hi) = cavity.bbox();
    let (bw, bh) = (hi.x - lo.x, hi.y - lo.y);
    let margin = 0.05 * bw.max(bh).max(1e-9);
    let scale = width / (bw + 2.0 * margin);
    let height = (bh + 2.0 * margin) * scale;
    let map = |p: Point2| -> (f64, f64) {
        (
            (p.x - lo.x + margin) * scale,
            (hi.y + margin - p.y) * scale,
        )
    };
    let stroke = 0.004 * width;

    let mut out = String::new();
    let _ = writeln!(
        out,
        "<svg xmlns=\"http://www.w3.org/2000/svg\" viewBox=\"0 0 {:.6} {:.6}\">",
        width, height
    );
    let _ = writeln!(
        out,
        "  <title>{}</title>",
        xml_escape(cavity.label())
    );

    let (b0, b1) = (map(Point2::new(0.0, 0.0)), map(Point2::new(1.0, 0.0)));
    let _ = writeln!(
        out,
        "  <line x1=\"{:.6}\" y1=\"{:.6}\" x2=\"{:.6}\" y2=\"{:.6}\" \
         stroke=\"#888888\" stroke-width=\"{:.6}\" stroke-dasharray=\"{:.6} {:.6}\"/>",
        b0.0,
        b0.1,
        b1.0,
        b1.1,
        stroke,
        2.0 * stroke,
        2.0 * stroke
    );

    for piece in cavity.pieces() {
        match *piece {
            BoundaryPiece::Segment { p0, p1 } => {
                let (a, b) = (map(p0), map(p1));
                let _ = writeln!(
                    out,
                    "  <line x1=\"{:.6}\" y1=\"{:.6}\" x2=\"{:.6}\" y2=\"{:.6}\" \
                     stroke=\"#222222\" stroke-width=\"{:.6}\" stroke-linecap=\"round\"/>",
                    a.0, a.1, b.0, b.1, stroke
                );
            }
            BoundaryPiece::ParabolicArc { a, b, c0, c1, c2 } => {
                // a quadratic Bezier reproduces the parabola exactly: the
                // control point sits at the crossing of the end tangents
                let q = |x: f64| (c2 * x + c1) * x + c0;
                let start = map(Point2::new(a, q(a)));
                let end = map(Point2::new(b, q(b)));
                let slope_a = 2.0 * c2 * a + c1;
                let ctrl = map(Point2::new(
                    0.5 * (a + b),
                    q(a) + 0.5 * slope_a * (b - a),
                ));
                let _ = writeln!(
                    out,
                    "  <path d=\"M {:.6} {:.6} Q {:.6} {:.6} {:.6} {:.6}\" \
                     stroke=\"#222222\" stroke-width=\"{:.6}\" fill=\"none\" \
                     stroke-linecap=\"round\"/>",
                    start.0, start.1, ctrl.0, ctrl.1, end.0, end.1, stroke
                );
            }
            BoundaryPiece::EllipticArc {
                rx, ry, ..
            } => {
                let start = map(piece.start());
                let end = map(piece.end());
                let (theta0, theta1) = match *piece {
                    BoundaryPiece::EllipticArc { theta0, theta1, .. } => (theta0, theta1),
                    _ => unreachable!(),
                };
                let large = if theta1 - theta0 > PI { 1 } else { 0 };
                // angles increase counterclockwise in cavity coordinates,
                // which the y-flip turns into the SVG positive sweep
                let _ = writeln!(
                    out,
                    "  <path d=\"M {:.6} {:.6} A {:.6} {:.6} 0 {} 1 {:.6} {:.6}\" \
                     stroke=\"#222222\" stroke-width=\"{:.6}\" fill=\"none\" \
                     stroke-linecap=\"round\"/>",
                    start.0,
                    start.1,
                    rx * scale,
                    ry * scale,
                    large,
                    end.0,
                    end.1,
                    stroke
                );
            }
        }
    }
    out.push_str("</svg>\n");
    out
}

fn xml_escape(s: &str) -> String {
    s.replace('&', "&amp;").replace('<', "&lt;").replace('>', "&gt;")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::{
        make_canonical_zigzag, make_mushroom, make_symmetric_piecewise_quadratic,
        make_two_segment_line,
    };

    #[test]
    fn triangle_document_is_stable() {
        let tri = make_two_segment_line(1.0, 1.0).unwrap();
        let a = svg_document(&tri, 640.0);
        let b = svg_document(&tri, 640.0);
        assert_eq!(a, b);
        assert_eq!(a.matches("<line").count(), 3); // baseline + two flanks
        assert!(a.contains("stroke-dasharray"));
        assert!(a.starts_with("<svg xmlns"));
        assert!(a.trim_end().ends_with("</svg>"));
    }

    #[test]
    fn triangle_apex_is_above_the_baseline_on_screen() {
        let tri = make_two_segment_line(1.0, 1.0).unwrap();
        let doc = svg_document(&tri, 640.0);
        // margin 0.05, scale 640/1.1: baseline y = (0.5+0.05)*scale,
        // apex y = 0.05*scale; smaller y renders higher
        let scale = 640.0 / 1.1;
        let baseline_y = format!("{:.6}", 0.55 * scale);
        let apex_y = format!("{:.6}", 0.05 * scale);
        assert!(doc.contains(&baseline_y));
        assert!(doc.contains(&apex_y));
    }

    #[test]
    fn mushroom_document_has_one_arc_and_four_walls() {
        let m = make_mushroom(0.2).unwrap();
        let doc = svg_document(&m, 640.0);
        assert_eq!(doc.matches("<path").count(), 1);
        assert_eq!(doc.matches(" A ").count(), 1);
        assert_eq!(doc.matches("<line").count(), 5); // 4 walls + baseline
        // wide cap radii come out in plain fixed-point form
        let scale = 640.0 / (10.0 * 1.1);
        assert!(doc.contains(&format!("A {:.6}", 5.0 * scale)));
    }

    #[test]
    fn curved_profiles_use_quadratic_beziers() {
        let c = make_symmetric_piecewise_quadratic(2, &[0.5], &[0.8]).unwrap();
        let doc = svg_document(&c, 640.0);
        assert_eq!(doc.matches(" Q ").count(), 2);
    }

    #[test]
    fn zigzag_renders_every_tooth() {
        let z = make_canonical_zigzag(0.6835, 6, None).unwrap();
        let doc = svg_document(&z, 640.0);
        assert_eq!(doc.matches("<line").count(), 7); // 6 flanks + baseline
    }
}
