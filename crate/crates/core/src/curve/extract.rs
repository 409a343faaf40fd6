use std::cmp::Ordering;
use std::collections::BTreeMap;

use num_integer::Integer;
use num_traits::{Signed, Zero};

use super::{Dir, Edge, EdgeKind, Face, Norm, Pt, TropCurve};
use crate::error::{Error, Result};
use crate::minplus::TropPoly2;
use crate::rat::{int, Rat};

/// A maximal interval of a bisector line on which one term pair is minimal.
struct Cell {
    base: Pt,
    dir: Dir,
    /// Parameter bounds along `base + s * dir`; `None` is unbounded.
    lo: Option<Rat>,
    hi: Option<Rat>,
}

impl Cell {
    fn at(&self, s: &Rat) -> Pt {
        (
            &self.base.0 + s * int(self.dir.0),
            &self.base.1 + s * int(self.dir.1),
        )
    }

    /// Parameter of `p` if it lies on the carrier line.
    fn param(&self, p: &Pt) -> Option<Rat> {
        let dx = &p.0 - &self.base.0;
        let dy = &p.1 - &self.base.1;
        // On the line iff (p - base) is parallel to dir.
        if &dx * int(self.dir.1) != &dy * int(self.dir.0) {
            return None;
        }
        Some(if self.dir.0 != 0 {
            dx / int(self.dir.0)
        } else {
            dy / int(self.dir.1)
        })
    }

    /// `n . base` for the primitive normal `n`; identifies the carrier line.
    fn offset(&self) -> Rat {
        &self.base.0 * int(-self.dir.1) + &self.base.1 * int(self.dir.0)
    }

    fn contains_open(&self, s: &Rat) -> bool {
        self.lo.as_ref().is_none_or(|lo| s > lo) && self.hi.as_ref().is_none_or(|hi| s < hi)
    }
}

fn canonical_primitive(x: i64, y: i64) -> Dir {
    let g = x.gcd(&y);
    let (x, y) = (x / g, y / g);
    if x < 0 || (x == 0 && y < 0) {
        (-x, -y)
    } else {
        (x, y)
    }
}

fn bisector_cell(f: &TropPoly2, i: usize, j: usize) -> Option<Cell> {
    let terms = f.terms();
    let (ti, tj) = (&terms[i], &terms[j]);
    let (ei, ej) = (ti.exponent(), tj.exponent());
    let a = (ei.0 - ej.0, ei.1 - ej.1);
    let dir = canonical_primitive(-a.1, a.0);
    // a . P = c_j - c_i
    let rhs = &tj.coeff - &ti.coeff;
    let base = if a.0 != 0 {
        (rhs / int(a.0), Rat::zero())
    } else {
        (Rat::zero(), rhs / int(a.1))
    };

    let slope_i = ei.0 * dir.0 + ei.1 * dir.1;
    let vi = ti.eval(&base.0, &base.1);
    let mut lo: Option<Rat> = None;
    let mut hi: Option<Rat> = None;
    for (k, tk) in terms.iter().enumerate() {
        if k == i || k == j {
            continue;
        }
        let ek = tk.exponent();
        let alpha = tk.eval(&base.0, &base.1) - &vi;
        let beta = ek.0 * dir.0 + ek.1 * dir.1 - slope_i;
        match beta.cmp(&0) {
            Ordering::Equal => {
                if alpha.is_negative() {
                    return None;
                }
            }
            Ordering::Greater => {
                let b = -alpha / int(beta);
                if lo.as_ref().is_none_or(|l| b > *l) {
                    lo = Some(b);
                }
            }
            Ordering::Less => {
                let b = -alpha / int(beta);
                if hi.as_ref().is_none_or(|h| b < *h) {
                    hi = Some(b);
                }
            }
        }
    }
    if let (Some(l), Some(h)) = (&lo, &hi) {
        if l >= h {
            return None;
        }
    }
    Some(Cell { base, dir, lo, hi })
}

#[derive(Clone, PartialEq, Eq, PartialOrd, Ord)]
enum Key {
    Segment(usize, usize),
    Ray(usize, Dir),
    /// Primitive direction and the constant `n . P` for the primitive normal.
    Line(Dir, Rat),
}

/// Corner locus of `f`, via the arrangement of pairwise bisectors.
pub fn extract_curve(f: &TropPoly2) -> Result<TropCurve> {
    if f.len() < 2 {
        return Err(Error::EmptyCurve);
    }
    let n = f.len();
    let mut cells = Vec::new();
    for i in 0..n {
        for j in i + 1..n {
            if let Some(c) = bisector_cell(f, i, j) {
                cells.push(c);
            }
        }
    }
    if cells.is_empty() {
        return Err(Error::EmptyCurve);
    }

    let mut vertices: Vec<Pt> = cells
        .iter()
        .flat_map(|c| {
            [c.lo.as_ref(), c.hi.as_ref()]
                .into_iter()
                .flatten()
                .map(|s| c.at(s))
                .collect::<Vec<_>>()
        })
        .collect();
    vertices.sort();
    vertices.dedup();

    let mut pieces: BTreeMap<Key, Dir> = BTreeMap::new();
    for c in &cells {
        // Cut points in increasing parameter order: cell ends and interior vertices.
        let mut cuts: Vec<(Rat, usize)> = vertices
            .iter()
            .enumerate()
            .filter_map(|(vi, p)| c.param(p).map(|s| (s, vi)))
            .filter(|(s, _)| {
                c.contains_open(s) || Some(s) == c.lo.as_ref() || Some(s) == c.hi.as_ref()
            })
            .collect();
        cuts.sort();
        let mut push = |key: Key| {
            pieces.insert(key, c.dir);
        };
        if cuts.is_empty() {
            push(Key::Line(c.dir, c.offset()));
            continue;
        }
        let d = c.dir;
        if c.lo.is_none() {
            push(Key::Ray(cuts[0].1, (-d.0, -d.1)));
        }
        for w in cuts.windows(2) {
            let (a, b) = (w[0].1, w[1].1);
            push(Key::Segment(a.min(b), a.max(b)));
        }
        if c.hi.is_none() {
            push(Key::Ray(cuts[cuts.len() - 1].1, d));
        }
    }

    let mut edges = Vec::with_capacity(pieces.len());
    for (key, dir) in pieces {
        let (kind, sample) = match key {
            Key::Segment(a, b) => {
                let mid = (
                    (&vertices[a].0 + &vertices[b].0) / int(2),
                    (&vertices[a].1 + &vertices[b].1) / int(2),
                );
                (EdgeKind::Segment { from: a, to: b }, mid)
            }
            Key::Ray(v, d) => {
                let p = (&vertices[v].0 + int(d.0), &vertices[v].1 + int(d.1));
                (EdgeKind::Ray { from: v, dir: d }, p)
            }
            Key::Line(d, ref off) => {
                let c = cells
                    .iter()
                    .find(|c| c.dir == d && c.lo.is_none() && c.hi.is_none() && c.offset() == *off)
                    .expect("line comes from a cell");
                (
                    EdgeKind::Line {
                        point: c.base.clone(),
                        dir: d,
                    },
                    c.base.clone(),
                )
            }
        };
        let terms = f.eval(&sample.0, &sample.1).achievers;
        if terms.len() < 2 {
            return Err(Error::Internal("edge sample is off the curve".into()));
        }
        // Achieving exponents are collinear; the dual edge spans the extremes.
        let exps: Vec<(i64, i64)> = terms.iter().map(|&t| f.terms()[t].exponent()).collect();
        let weight = exps
            .iter()
            .flat_map(|a| exps.iter().map(move |b| (a.0 - b.0).gcd(&(a.1 - b.1))))
            .max()
            .expect("two achievers");
        edges.push(Edge {
            kind,
            primitive: dir,
            length: None,
            terms,
            weight,
        });
    }

    let mut curve = TropCurve {
        poly: f.clone(),
        vertices,
        edges,
        faces: Vec::new(),
    };
    for i in 0..curve.edges.len() {
        curve.edges[i].length = curve.edge_length(i, Norm::Max);
    }
    curve.faces = find_faces(&curve)?;
    Ok(curve)
}

fn find_faces(c: &TropCurve) -> Result<Vec<Face>> {
    let mut faces = Vec::new();
    for term in 0..c.poly.len() {
        let boundary: Vec<usize> = (0..c.edges.len())
            .filter(|&e| c.edges[e].terms.contains(&term))
            .collect();
        if boundary.len() < 3 || boundary.iter().any(|&e| !c.edges[e].is_compact()) {
            continue;
        }
        let mut verts: Vec<usize> = boundary
            .iter()
            .flat_map(|&e| {
                let (a, b) = c.edges[e].endpoints().expect("compact");
                [a, b]
            })
            .collect();
        verts.sort();
        verts.dedup();
        let k = int(verts.len() as i64);
        let centre = (
            verts.iter().fold(Rat::zero(), |s, &v| s + &c.vertices[v].0) / &k,
            verts.iter().fold(Rat::zero(), |s, &v| s + &c.vertices[v].1) / &k,
        );
        if c.poly.eval(&centre.0, &centre.1).achievers != [term] {
            continue;
        }
        verts.sort_by(|&a, &b| ccw_cmp(&c.vertices[a], &c.vertices[b], &centre));

        let mut cycle = Vec::with_capacity(verts.len());
        for idx in 0..verts.len() {
            let (a, b) = (verts[idx], verts[(idx + 1) % verts.len()]);
            let e = boundary
                .iter()
                .copied()
                .find(|&e| {
                    let (x, y) = c.edges[e].endpoints().expect("compact");
                    (x, y) == (a, b) || (x, y) == (b, a)
                })
                .ok_or_else(|| Error::Internal(format!("face of term {term} is not a cycle")))?;
            let from = c.edges[e].endpoints().expect("compact").0;
            cycle.push((e, if from == a { 1 } else { -1 }));
        }
        if cycle.len() != boundary.len() {
            return Err(Error::Internal(format!(
                "face of term {term} has stray edges"
            )));
        }
        // Start the cycle at the smallest vertex for a stable presentation.
        let start = (0..verts.len())
            .min_by_key(|&i| verts[i])
            .expect("nonempty");
        verts.rotate_left(start);
        cycle.rotate_left(start);
        faces.push(Face {
            term,
            vertices: verts,
            cycle,
        });
    }
    faces.sort_by_key(|f| f.vertices[0]);
    Ok(faces)
}

/// Counterclockwise angular order around `centre`, starting from the
/// positive X direction.
fn ccw_cmp(a: &Pt, b: &Pt, centre: &Pt) -> Ordering {
    let va = (&a.0 - &centre.0, &a.1 - &centre.1);
    let vb = (&b.0 - &centre.0, &b.1 - &centre.1);
    let half = |v: &(Rat, Rat)| {
        if v.1.is_positive() || (v.1.is_zero() && v.0.is_positive()) {
            0
        } else {
            1
        }
    };
    half(&va).cmp(&half(&vb)).then_with(|| {
        let cross = &va.0 * &vb.1 - &va.1 * &vb.0;
        Rat::zero().cmp(&cross)
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rat::ints;

    fn curve(s: &str) -> TropCurve {
        extract_curve(&s.parse().unwrap()).unwrap()
    }

    #[test]
    fn tropical_line() {
        let c = curve("min(X, Y, 1)");
        assert_eq!(c.vertices(), &[(int(1), int(1))]);
        let mut dirs: Vec<Dir> = c
            .edges()
            .iter()
            .map(|e| match e.kind {
                EdgeKind::Ray { dir, .. } => dir,
                _ => panic!("expected only rays"),
            })
            .collect();
        dirs.sort();
        assert_eq!(dirs, vec![(-1, -1), (0, 1), (1, 0)]);
        let mut prims: Vec<Dir> = c.edges().iter().map(|e| e.primitive).collect();
        prims.sort();
        assert_eq!(prims, vec![(0, 1), (1, 0), (1, 1)]);
        assert_eq!(c.genus(), 0);
        assert!(c.is_smooth().smooth);
        assert!(c.faces().is_empty());
    }

    #[test]
    fn single_term_is_empty() {
        assert_eq!(
            extract_curve(&"min(X+1)".parse().unwrap()),
            Err(Error::EmptyCurve)
        );
    }

    #[test]
    fn parallel_lines() {
        let c = curve("min(0, X, 2X+3)");
        assert!(c.vertices().is_empty());
        assert_eq!(c.edges().len(), 2);
        assert!(c
            .edges()
            .iter()
            .all(|e| matches!(e.kind, EdgeKind::Line { dir: (0, 1), .. })));
        assert_eq!(c.genus(), 0);
    }

    #[test]
    fn elliptic_curve() {
        let c = curve("min(2Y, Y+2X, Y+X, Y+3, 10)");
        assert_eq!(c.genus(), 1);
        assert_eq!(c.faces().len(), 1);
        assert!(c.is_smooth().smooth);
        assert!(c.is_connected());
        let f = &c.faces()[0];
        let corners: Vec<Pt> = f
            .vertices
            .iter()
            .map(|&v| c.vertices()[v].clone())
            .collect();
        assert_eq!(
            corners,
            vec![
                (int(0), int(0)),
                (int(3), int(3)),
                (int(3), int(7)),
                (int(0), int(10)),
            ]
        );
    }

    #[test]
    fn edge_pq_has_length_seven() {
        let c = curve("min(2Y, Y+3X, Y+2X, Y+X+1, Y+4, 11)");
        let p = c.vertex_index(&(int(1), int(2))).unwrap();
        let q = c.vertex_index(&(int(1), int(9))).unwrap();
        let e = c
            .edges()
            .iter()
            .find(|e| e.endpoints() == Some((p, q)))
            .unwrap();
        assert_eq!(e.length, Some(int(7)));
        assert_eq!(e.primitive, (0, 1));
        assert_eq!(c.genus(), 2);
    }

    #[test]
    fn lengths_do_not_depend_on_the_norm() {
        let c = curve("min(2Y, Y+3X, Y+2X, Y+X+1, Y+4, 11)");
        for (i, _) in c.compact_edges() {
            assert_eq!(c.edge_length(i, Norm::Max), c.edge_length(i, Norm::L1));
        }
    }

    #[test]
    fn points_on_and_off_the_locus() {
        let c = curve("min(2Y, Y+2X, Y+X, Y+3, 10)");
        for v in c.vertices() {
            assert!(c.achievers(v).len() >= 3);
        }
        for (_, e) in c.compact_edges() {
            let (a, b) = e.endpoints().unwrap();
            let mid = (
                (&c.vertices()[a].0 + &c.vertices()[b].0) / int(2),
                (&c.vertices()[a].1 + &c.vertices()[b].1) / int(2),
            );
            assert_eq!(c.achievers(&mid).len(), 2);
        }
        let off = ints(&[1, 5]);
        assert_eq!(c.achievers(&(off[0].clone(), off[1].clone())).len(), 1);
    }
}
