//! Planar tropical curves: the corner locus of a [`TropPoly2`] as a metric
//! graph with rays, plus smoothness, genus, cycle pairings, period matrices
//! and the abelian integral.

mod cycles;
mod extract;
pub mod svg;

use std::collections::BTreeSet;

use serde_json::{json, Value};

use crate::minplus::TropPoly2;
use crate::rat::{fmt_rat, rat_json, Rat};

pub use cycles::{
    abel_map, face_basis, gram, path_pairing, walk_pairing, CycleBasis, Location, Path,
};
pub use extract::extract_curve;

pub type Pt = (Rat, Rat);
pub type Dir = (i64, i64);

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum EdgeKind {
    /// Bounded edge between two vertices, `from < to`.
    Segment { from: usize, to: usize },
    /// Unbounded edge leaving a vertex in direction `dir`.
    Ray { from: usize, dir: Dir },
    /// A full line with no vertex on it.
    Line { point: Pt, dir: Dir },
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Edge {
    pub kind: EdgeKind,
    /// Primitive tangent, first nonzero component positive.
    pub primitive: Dir,
    /// Lattice length; `None` for rays and lines.
    pub length: Option<Rat>,
    /// Terms attaining the minimum along the edge.
    pub terms: Vec<usize>,
    /// Multiplicity: lattice length of the dual edge of the Newton polygon.
    pub weight: i64,
}

impl Edge {
    pub fn is_compact(&self) -> bool {
        matches!(self.kind, EdgeKind::Segment { .. })
    }

    pub fn endpoints(&self) -> Option<(usize, usize)> {
        match self.kind {
            EdgeKind::Segment { from, to } => Some((from, to)),
            _ => None,
        }
    }
}

/// A bounded complementary region, i.e. the domain where one term is the
/// strict minimum.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Face {
    pub term: usize,
    /// Counterclockwise.
    pub vertices: Vec<usize>,
    /// Counterclockwise boundary as oriented edges.
    pub cycle: Path,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TropCurve {
    pub(crate) poly: TropPoly2,
    pub(crate) vertices: Vec<Pt>,
    pub(crate) edges: Vec<Edge>,
    pub(crate) faces: Vec<Face>,
}

/// Which norm measures lattice lengths. Any norm gives the same value on
/// rational edges; the choice only exists so that this can be checked.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Default)]
pub enum Norm {
    #[default]
    Max,
    L1,
}

impl Norm {
    pub fn of(&self, x: &Rat, y: &Rat) -> Rat {
        use num_traits::Signed;
        match self {
            Norm::Max => x.abs().max(y.abs()),
            Norm::L1 => x.abs() + y.abs(),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Smoothness {
    pub smooth: bool,
    /// Why the first failing vertex fails.
    pub certificate: Option<String>,
}

impl TropCurve {
    pub fn poly(&self) -> &TropPoly2 {
        &self.poly
    }

    /// Sorted lexicographically.
    pub fn vertices(&self) -> &[Pt] {
        &self.vertices
    }

    pub fn edges(&self) -> &[Edge] {
        &self.edges
    }

    /// Ordered by lexicographically smallest vertex.
    pub fn faces(&self) -> &[Face] {
        &self.faces
    }

    pub fn vertex_index(&self, p: &Pt) -> Option<usize> {
        self.vertices.binary_search(p).ok()
    }

    pub fn compact_edges(&self) -> impl Iterator<Item = (usize, &Edge)> {
        self.edges
            .iter()
            .enumerate()
            .filter(|(_, e)| e.is_compact())
    }

    /// Outgoing primitive directions and the edges they belong to.
    pub fn star(&self, v: usize) -> Vec<(usize, Dir)> {
        let mut out = Vec::new();
        for (i, e) in self.edges.iter().enumerate() {
            let (px, py) = e.primitive;
            match e.kind {
                EdgeKind::Segment { from, to } => {
                    // `from < to` lexicographically, so the segment points
                    // along the canonical primitive from `from`.
                    if from == v {
                        out.push((i, (px, py)));
                    }
                    if to == v {
                        out.push((i, (-px, -py)));
                    }
                }
                EdgeKind::Ray { from, dir } if from == v => out.push((i, dir)),
                _ => {}
            }
        }
        out
    }

    /// Rank of `H_1` of the compact part: `E - V + components`.
    pub fn genus(&self) -> usize {
        let n = self.vertices.len();
        let mut parent: Vec<usize> = (0..n).collect();
        fn find(p: &mut [usize], mut x: usize) -> usize {
            while p[x] != x {
                p[x] = p[p[x]];
                x = p[x];
            }
            x
        }
        let mut e = 0;
        let mut components = n;
        for (_, edge) in self.compact_edges() {
            let (a, b) = edge.endpoints().expect("compact");
            e += 1;
            let (ra, rb) = (find(&mut parent, a), find(&mut parent, b));
            if ra != rb {
                parent[ra] = rb;
                components -= 1;
            }
        }
        e + components - n
    }

    /// Whether the whole complex (rays included) is connected.
    pub fn is_connected(&self) -> bool {
        if self.vertices.is_empty() {
            return self.edges.len() <= 1;
        }
        let mut seen = vec![false; self.vertices.len()];
        let mut stack = vec![0];
        seen[0] = true;
        while let Some(v) = stack.pop() {
            for (ei, _) in self.star(v) {
                if let Some((a, b)) = self.edges[ei].endpoints() {
                    for w in [a, b] {
                        if !seen[w] {
                            seen[w] = true;
                            stack.push(w);
                        }
                    }
                }
            }
        }
        let lines = self
            .edges
            .iter()
            .any(|e| matches!(e.kind, EdgeKind::Line { .. }));
        !lines && seen.into_iter().all(|s| s)
    }

    pub fn is_smooth(&self) -> Smoothness {
        if let Some(e) = self.edges.iter().find(|e| e.weight != 1) {
            return Smoothness {
                smooth: false,
                certificate: Some(format!("edge with weight {}", e.weight)),
            };
        }
        for (v, p) in self.vertices.iter().enumerate() {
            if let Some(reason) = self.vertex_defect(v) {
                return Smoothness {
                    smooth: false,
                    certificate: Some(format!(
                        "vertex ({}, {}): {reason}",
                        fmt_rat(&p.0),
                        fmt_rat(&p.1)
                    )),
                };
            }
        }
        Smoothness {
            smooth: true,
            certificate: None,
        }
    }

    fn vertex_defect(&self, v: usize) -> Option<String> {
        let star = self.star(v);
        if star.len() != 3 {
            return Some(format!("valence {}", star.len()));
        }
        let sum = star
            .iter()
            .fold((0, 0), |acc, (_, d)| (acc.0 + d.0, acc.1 + d.1));
        if sum != (0, 0) {
            return Some(format!(
                "not balanced, primitives sum to ({}, {})",
                sum.0, sum.1
            ));
        }
        for i in 0..3 {
            for j in i + 1..3 {
                let (a, b) = (star[i].1, star[j].1);
                let w = a.0 * b.1 - a.1 * b.0;
                if w.abs() != 1 {
                    return Some(format!(
                        "|({}, {}) ∧ ({}, {})| = {}",
                        a.0,
                        a.1,
                        b.0,
                        b.1,
                        w.abs()
                    ));
                }
            }
        }
        None
    }

    /// Lattice length of a compact edge under `norm`.
    pub fn edge_length(&self, edge: usize, norm: Norm) -> Option<Rat> {
        let e = &self.edges[edge];
        let (a, b) = e.endpoints()?;
        let (pa, pb) = (&self.vertices[a], &self.vertices[b]);
        let dx = &pb.0 - &pa.0;
        let dy = &pb.1 - &pa.1;
        let (px, py) = e.primitive;
        Some(
            norm.of(&dx, &dy)
                / norm.of(&Rat::from_integer(px.into()), &Rat::from_integer(py.into())),
        )
    }

    /// Terms achieving the minimum at `p`.
    pub fn achievers(&self, p: &Pt) -> BTreeSet<usize> {
        self.poly.eval(&p.0, &p.1).achievers.into_iter().collect()
    }

    pub fn to_json(&self) -> Value {
        let pt = |p: &Pt| json!([rat_json(&p.0), rat_json(&p.1)]);
        let edges: Vec<Value> = self
            .edges
            .iter()
            .map(|e| {
                let mut o = match &e.kind {
                    EdgeKind::Segment { from, to } => json!({"from": from, "to": to}),
                    EdgeKind::Ray { from, dir } => json!({"from": from, "dir": [dir.0, dir.1]}),
                    EdgeKind::Line { point, dir } => {
                        json!({"point": pt(point), "dir": [dir.0, dir.1]})
                    }
                };
                let m = o.as_object_mut().expect("object");
                m.insert("primitive".into(), json!([e.primitive.0, e.primitive.1]));
                m.insert(
                    "length".into(),
                    e.length.as_ref().map_or(json!("inf"), rat_json),
                );
                m.insert("terms".into(), json!(e.terms));
                m.insert("weight".into(), json!(e.weight));
                o
            })
            .collect();
        let faces: Vec<Value> = self
            .faces
            .iter()
            .map(|f| {
                json!({
                    "term": f.term,
                    "vertices": f.vertices,
                    "cycle": f.cycle.iter().map(|(e, s)| json!([e, s])).collect::<Vec<_>>(),
                })
            })
            .collect();
        json!({
            "terms": serde_json::to_value(&self.poly).expect("serializable"),
            "vertices": self.vertices.iter().map(pt).collect::<Vec<_>>(),
            "edges": edges,
            "faces": faces,
            "genus": self.genus(),
        })
    }
}

pub fn genus(c: &TropCurve) -> usize {
    c.genus()
}

pub fn is_smooth(c: &TropCurve) -> Smoothness {
    c.is_smooth()
}
