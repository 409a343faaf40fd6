use std::collections::{BTreeMap, VecDeque};

use num_traits::Zero;

use super::{EdgeKind, Pt, TropCurve};
use crate::error::{Error, Result};
use crate::linalg::Matrix;
use crate::minplus::PeriodLattice;
use crate::rat::{fmt_rat, int, Rat};

/// An oriented edge chain: `(edge index, +1 | -1)`, where `+1` runs from the
/// edge's `from` vertex to its `to` vertex.
pub type Path = Vec<(usize, i8)>;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CycleBasis {
    pub cycles: Vec<Path>,
}

impl CycleBasis {
    pub fn genus(&self) -> usize {
        self.cycles.len()
    }

    /// New basis whose `i`th cycle is `Σ_j coeffs[i][j] B_j`.
    pub fn combine(&self, coeffs: &[Vec<i64>]) -> Result<CycleBasis> {
        let mut cycles = Vec::with_capacity(coeffs.len());
        for row in coeffs {
            crate::error::check_dim(self.genus(), row.len())?;
            let mut acc: BTreeMap<usize, i64> = BTreeMap::new();
            for (c, cycle) in row.iter().zip(&self.cycles) {
                for &(e, s) in cycle {
                    *acc.entry(e).or_default() += c * s as i64;
                }
            }
            let mut path = Path::new();
            for (e, k) in acc {
                let s = if k > 0 { 1 } else { -1 };
                for _ in 0..k.abs() {
                    path.push((e, s));
                }
            }
            cycles.push(path);
        }
        Ok(CycleBasis { cycles })
    }
}

fn coefficients(c: &TropCurve, p: &[(usize, i8)]) -> Result<BTreeMap<usize, i64>> {
    let mut m = BTreeMap::new();
    for &(e, s) in p {
        if !c.edges[e].is_compact() {
            return Err(Error::InfinitePairing);
        }
        *m.entry(e).or_insert(0i64) += s as i64;
    }
    Ok(m)
}

/// Oriented length of the common part of two paths on compact edges.
pub fn path_pairing(c: &TropCurve, p: &[(usize, i8)], q: &[(usize, i8)]) -> Result<Rat> {
    let (cp, cq) = (coefficients(c, p)?, coefficients(c, q)?);
    let mut total = Rat::zero();
    for (e, a) in &cp {
        if let Some(b) = cq.get(e) {
            let len = c.edges[*e]
                .length
                .as_ref()
                .expect("compact edge has a length");
            total += len * int(a * b);
        }
    }
    Ok(total)
}

/// Counterclockwise boundaries of the bounded faces, left to right.
pub fn face_basis(c: &TropCurve) -> Result<CycleBasis> {
    if c.genus() == 0 {
        return Err(Error::NoCycles);
    }
    if c.faces.len() != c.genus() {
        return Err(Error::Internal(format!(
            "found {} bounded faces for genus {}",
            c.faces.len(),
            c.genus()
        )));
    }
    Ok(CycleBasis {
        cycles: c.faces.iter().map(|f| f.cycle.clone()).collect(),
    })
}

/// Gram matrix of the pairing on `basis`, checked to be a period lattice.
pub fn gram(c: &TropCurve, basis: &CycleBasis) -> Result<PeriodLattice> {
    let g = basis.genus();
    if g == 0 {
        return Err(Error::NoCycles);
    }
    let mut m = Matrix::zeros(g, g);
    for i in 0..g {
        for j in 0..g {
            m[(i, j)] = path_pairing(c, &basis.cycles[i], &basis.cycles[j])?;
        }
    }
    PeriodLattice::new(m)
}

/// `(⟨B_i, walk⟩)_i` for a walk given as oriented edges.
pub fn walk_pairing(c: &TropCurve, basis: &CycleBasis, walk: &[(usize, i8)]) -> Result<Vec<Rat>> {
    basis
        .cycles
        .iter()
        .map(|b| path_pairing(c, b, walk))
        .collect()
}

/// Where a point sits on the compact part.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Location {
    Vertex(usize),
    /// On segment `edge` at fraction `t ∈ (0, 1)` from its `from` vertex.
    Edge {
        edge: usize,
        t: Rat,
    },
}

impl TropCurve {
    pub fn locate(&self, p: &Pt) -> Result<Location> {
        if let Some(v) = self.vertex_index(p) {
            return Ok(Location::Vertex(v));
        }
        for (i, e) in self.compact_edges() {
            let (a, b) = e.endpoints().expect("compact");
            let (pa, pb) = (&self.vertices[a], &self.vertices[b]);
            let d = (&pb.0 - &pa.0, &pb.1 - &pa.1);
            let r = (&p.0 - &pa.0, &p.1 - &pa.1);
            if &d.0 * &r.1 != &d.1 * &r.0 {
                continue;
            }
            let t = if !d.0.is_zero() {
                &r.0 / &d.0
            } else {
                &r.1 / &d.1
            };
            if t > Rat::zero() && t < int(1) {
                return Ok(Location::Edge { edge: i, t });
            }
        }
        Err(Error::NotOnCurve {
            x: fmt_rat(&p.0),
            y: fmt_rat(&p.1),
        })
    }

    /// Breadth-first tree path between two vertices over compact edges,
    /// visiting neighbours in vertex order.
    pub fn tree_path(&self, from: usize, to: usize) -> Result<Path> {
        let mut parent: Vec<Option<(usize, usize, i8)>> = vec![None; self.vertices.len()];
        let mut seen = vec![false; self.vertices.len()];
        let mut adj: Vec<Vec<(usize, usize, i8)>> = vec![Vec::new(); self.vertices.len()];
        for (i, e) in self.compact_edges() {
            let (a, b) = e.endpoints().expect("compact");
            adj[a].push((b, i, 1));
            adj[b].push((a, i, -1));
        }
        for list in adj.iter_mut() {
            list.sort();
        }
        let mut queue = VecDeque::from([from]);
        seen[from] = true;
        while let Some(v) = queue.pop_front() {
            if v == to {
                break;
            }
            for &(w, e, s) in &adj[v] {
                if !seen[w] {
                    seen[w] = true;
                    parent[w] = Some((v, e, s));
                    queue.push_back(w);
                }
            }
        }
        if !seen[to] {
            return Err(Error::Internal("points lie on different components".into()));
        }
        let mut path = Path::new();
        let mut cur = to;
        while let Some((prev, e, s)) = parent[cur] {
            path.push((e, s));
            cur = prev;
        }
        path.reverse();
        Ok(path)
    }
}

/// `ψ(P) = (⟨B_i, γ⟩)_i` for the tree path `γ` from `p0` to `p`.
pub fn abel_map(c: &TropCurve, basis: &CycleBasis, p0: &Pt, p: &Pt) -> Result<Vec<Rat>> {
    let start = c.locate(p0)?;
    let end = c.locate(p)?;
    let g = basis.genus();
    let mut total = vec![Rat::zero(); g];

    // Partial traversals are weighted by the fraction of the edge covered.
    let partial = |edge: usize, weight: Rat, total: &mut Vec<Rat>| -> Result<()> {
        let unit = walk_pairing(c, basis, &[(edge, 1)])?;
        for (acc, u) in total.iter_mut().zip(unit) {
            *acc += u * &weight;
        }
        Ok(())
    };

    let (u0, u1) = match (&start, &end) {
        (Location::Edge { edge: a, t: ta }, Location::Edge { edge: b, t: tb }) if a == b => {
            partial(*a, tb - ta, &mut total)?;
            return Ok(total);
        }
        _ => (anchor(c, &start), anchor(c, &end)),
    };
    if let Location::Edge { edge, t } = &start {
        partial(*edge, -t.clone(), &mut total)?;
    }
    let middle = walk_pairing(c, basis, &c.tree_path(u0, u1)?)?;
    for (acc, m) in total.iter_mut().zip(middle) {
        *acc += m;
    }
    if let Location::Edge { edge, t } = &end {
        partial(*edge, t.clone(), &mut total)?;
    }
    Ok(total)
}

fn anchor(c: &TropCurve, l: &Location) -> usize {
    match l {
        Location::Vertex(v) => *v,
        Location::Edge { edge, .. } => match c.edges[*edge].kind {
            EdgeKind::Segment { from, .. } => from,
            _ => unreachable!("locate only returns segments"),
        },
    }
}
