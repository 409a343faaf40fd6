//! SVG rendering of a curve. Presentation only: coordinates are converted
//! to floating point here and nowhere else.

use std::fmt::Write;

use num_traits::ToPrimitive;

use super::{EdgeKind, TropCurve};
use crate::rat::Rat;

/// `(xmin, ymin, xmax, ymax)` in curve coordinates.
pub type BBox = (f64, f64, f64, f64);

fn f(r: &Rat) -> f64 {
    r.to_f64().unwrap_or(0.0)
}

/// The vertex hull padded by a quarter of its size (at least 1).
pub fn default_bbox(c: &TropCurve) -> BBox {
    let xs: Vec<f64> = c.vertices().iter().map(|p| f(&p.0)).collect();
    let ys: Vec<f64> = c.vertices().iter().map(|p| f(&p.1)).collect();
    let lo = |v: &[f64]| v.iter().cloned().fold(f64::INFINITY, f64::min);
    let hi = |v: &[f64]| v.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
    if xs.is_empty() {
        return (-5.0, -5.0, 5.0, 5.0);
    }
    let (x0, x1, y0, y1) = (lo(&xs), hi(&xs), lo(&ys), hi(&ys));
    let pad = ((x1 - x0).max(y1 - y0) / 4.0).max(1.0);
    (x0 - pad, y0 - pad, x1 + pad, y1 + pad)
}

/// Parameter at which `p + t d` leaves the box, for `t >= 0`.
fn exit_time(p: (f64, f64), d: (f64, f64), b: BBox) -> f64 {
    let mut t = f64::INFINITY;
    for (pc, dc, lo, hi) in [(p.0, d.0, b.0, b.2), (p.1, d.1, b.1, b.3)] {
        if dc > 0.0 {
            t = t.min((hi - pc) / dc);
        } else if dc < 0.0 {
            t = t.min((lo - pc) / dc);
        }
    }
    t.max(0.0)
}

pub fn render(c: &TropCurve, bbox: Option<BBox>) -> String {
    let b = bbox.unwrap_or_else(|| default_bbox(c));
    let scale = 480.0 / (b.2 - b.0).max(b.3 - b.1).max(1e-9);
    let (w, h) = ((b.2 - b.0) * scale, (b.3 - b.1) * scale);
    // Flip Y so that the picture matches the usual axes.
    let tx = |x: f64| (x - b.0) * scale;
    let ty = |y: f64| (b.3 - y) * scale;
    let mut out = String::new();
    let _ = writeln!(
        out,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{w:.1}" height="{h:.1}" viewBox="0 0 {w:.1} {h:.1}">"#
    );
    let _ = writeln!(out, r#"<rect width="100%" height="100%" fill="white"/>"#);
    let line = |out: &mut String, a: (f64, f64), z: (f64, f64), dashed: bool| {
        let style = if dashed {
            r#" stroke-dasharray="6 4""#
        } else {
            ""
        };
        let _ = writeln!(
            out,
            r#"<line x1="{:.2}" y1="{:.2}" x2="{:.2}" y2="{:.2}" stroke="black" stroke-width="2"{style}/>"#,
            tx(a.0),
            ty(a.1),
            tx(z.0),
            ty(z.1)
        );
    };
    for e in c.edges() {
        match &e.kind {
            EdgeKind::Segment { from, to } => {
                let (p, q) = (&c.vertices()[*from], &c.vertices()[*to]);
                line(&mut out, (f(&p.0), f(&p.1)), (f(&q.0), f(&q.1)), false);
            }
            EdgeKind::Ray { from, dir } => {
                let p = &c.vertices()[*from];
                let p = (f(&p.0), f(&p.1));
                let d = (dir.0 as f64, dir.1 as f64);
                let t = exit_time(p, d, b);
                line(&mut out, p, (p.0 + t * d.0, p.1 + t * d.1), true);
            }
            EdgeKind::Line { point, dir } => {
                let p = (f(&point.0), f(&point.1));
                let d = (dir.0 as f64, dir.1 as f64);
                let t1 = exit_time(p, d, b);
                let t0 = exit_time(p, (-d.0, -d.1), b);
                line(
                    &mut out,
                    (p.0 - t0 * d.0, p.1 - t0 * d.1),
                    (p.0 + t1 * d.0, p.1 + t1 * d.1),
                    true,
                );
            }
        }
    }
    for p in c.vertices() {
        let _ = writeln!(
            out,
            r#"<circle cx="{:.2}" cy="{:.2}" r="4" fill="black"/>"#,
            tx(f(&p.0)),
            ty(f(&p.1))
        );
    }
    out.push_str("</svg>\n");
    out
}
