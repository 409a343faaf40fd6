use std::fmt;
use std::str::FromStr;

use num_traits::Zero;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::rat::{fmt_vec, int, Rat};

/// A 0/1 configuration on a cycle of `L` boxes with fewer than `L/2` balls.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct BbsState {
    u: Vec<u8>,
}

impl BbsState {
    pub fn new(u: Vec<u8>) -> Result<Self> {
        if u.is_empty() {
            return Err(Error::InvalidArgument(
                "a box-ball state needs L >= 1".into(),
            ));
        }
        if let Some(v) = u.iter().find(|&&v| v > 1) {
            return Err(Error::InvalidArgument(format!(
                "box occupancy {v} is not 0 or 1"
            )));
        }
        let balls: usize = u.iter().map(|&v| v as usize).sum();
        if 2 * balls >= u.len() {
            return Err(Error::PhaseSpace(format!(
                "{balls} balls in {} boxes; need fewer than L/2",
                u.len()
            )));
        }
        Ok(BbsState { u })
    }

    pub fn vacuum(l: usize) -> Self {
        BbsState { u: vec![0; l] }
    }

    pub fn len(&self) -> usize {
        self.u.len()
    }

    pub fn is_empty(&self) -> bool {
        self.u.is_empty()
    }

    pub fn balls(&self) -> usize {
        self.u.iter().map(|&v| v as usize).sum()
    }

    pub fn is_vacuum(&self) -> bool {
        self.balls() == 0
    }

    /// Occupancies; index `k - 1` holds box `k`.
    pub fn cells(&self) -> &[u8] {
        &self.u
    }

    pub fn to_kdv(&self) -> KdvState {
        KdvState {
            u: self.u.iter().map(|&v| int(v as i64)).collect(),
        }
    }

    /// Every state of `L` boxes in phase space, in lexicographic order.
    pub fn all(l: usize) -> impl Iterator<Item = BbsState> {
        assert!(l < 64, "L too large to enumerate");
        (0u64..1 << l).filter_map(move |bits| {
            let u: Vec<u8> = (0..l).map(|i| ((bits >> (l - 1 - i)) & 1) as u8).collect();
            BbsState::new(u).ok()
        })
    }
}

impl fmt::Display for BbsState {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for &v in &self.u {
            write!(f, "{v}")?;
        }
        Ok(())
    }
}

impl FromStr for BbsState {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        let u = s
            .trim()
            .chars()
            .map(|c| match c {
                '0' | '.' => Ok(0),
                '1' => Ok(1),
                c => Err(Error::Parse(format!("unexpected box symbol {c:?}"))),
            })
            .collect::<Result<Vec<u8>>>()?;
        BbsState::new(u)
    }
}

impl Serialize for BbsState {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}

impl<'de> Deserialize<'de> for BbsState {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        String::deserialize(d)?
            .parse()
            .map_err(serde::de::Error::custom)
    }
}

/// Rational-valued states of the tropical KdV equation.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "Vec<String>", into = "Vec<String>")]
pub struct KdvState {
    u: Vec<Rat>,
}

impl KdvState {
    pub fn new(u: Vec<Rat>) -> Result<Self> {
        if u.is_empty() {
            return Err(Error::InvalidArgument("a KdV state needs L >= 1".into()));
        }
        let sum: Rat = u.iter().sum();
        if sum * int(2) >= int(u.len() as i64) {
            return Err(Error::PhaseSpace(format!(
                "ΣU = {} is not below L/2",
                u.iter().sum::<Rat>()
            )));
        }
        Ok(KdvState { u })
    }

    pub fn len(&self) -> usize {
        self.u.len()
    }

    pub fn is_empty(&self) -> bool {
        self.u.is_empty()
    }

    pub fn values(&self) -> &[Rat] {
        &self.u
    }

    /// The 0/1 state, when every value is 0 or 1.
    pub fn to_bbs(&self) -> Option<BbsState> {
        let u = self
            .u
            .iter()
            .map(|v| {
                if v.is_zero() {
                    Some(0)
                } else if *v == int(1) {
                    Some(1)
                } else {
                    None
                }
            })
            .collect::<Option<Vec<u8>>>()?;
        BbsState::new(u).ok()
    }
}

impl TryFrom<Vec<String>> for KdvState {
    type Error = Error;
    fn try_from(v: Vec<String>) -> Result<Self> {
        KdvState::new(
            v.iter()
                .map(|s| crate::rat::parse_rat(s))
                .collect::<Result<_>>()?,
        )
    }
}

impl From<KdvState> for Vec<String> {
    fn from(s: KdvState) -> Self {
        s.u.iter().map(crate::rat::fmt_rat).collect()
    }
}

impl fmt::Display for KdvState {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", fmt_vec(&self.u))
    }
}

/// The arc construction: which empty box each ball is joined to, and how
/// many arcs each round draws.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Arcs {
    /// `(ball box, empty box)`, 0-based.
    pub pairs: Vec<(usize, usize)>,
    pub mu: Vec<usize>,
}

pub fn arcs(s: &BbsState) -> Arcs {
    let u = s.cells();
    let mut alive: Vec<usize> = (0..u.len()).collect();
    let mut pairs = Vec::new();
    let mut mu = Vec::new();
    loop {
        let n = alive.len();
        let mut joined = vec![false; n];
        let mut round = 0;
        for p in 0..n {
            let q = (p + 1) % n;
            if u[alive[p]] == 1 && u[alive[q]] == 0 {
                pairs.push((alive[p], alive[q]));
                joined[p] = true;
                joined[q] = true;
                round += 1;
            }
        }
        if round == 0 {
            break;
        }
        mu.push(round);
        alive = alive
            .into_iter()
            .zip(joined)
            .filter(|(_, j)| !j)
            .map(|(a, _)| a)
            .collect();
    }
    pairs.sort();
    Arcs { pairs, mu }
}

/// One step of the ball rule, together with `μ`.
pub fn bbs_step(s: &BbsState) -> (BbsState, Vec<usize>) {
    let a = arcs(s);
    let mut u = vec![0u8; s.len()];
    for &(_, to) in &a.pairs {
        u[to] = 1;
    }
    (BbsState { u }, a.mu)
}

/// Number of arcs crossing the boundary between box `k - 1` and box `k`,
/// for each `k` (0-based, cyclic).
pub fn arc_crossings(s: &BbsState) -> Vec<usize> {
    let l = s.len();
    let mut n = vec![0; l];
    for (from, to) in arcs(s).pairs {
        let mut k = (from + 1) % l;
        loop {
            n[k] += 1;
            if k == to {
                break;
            }
            k = (k + 1) % l;
        }
    }
    n
}

/// `N_k = max_{m=0..L-1} (Σ_{j=1}^{m+1} U_{k-j} - Σ_{j=1}^{m} (1 - U_{k-j}))`.
pub fn kdv_carry(s: &KdvState) -> Vec<Rat> {
    let l = s.len() as isize;
    let u = s.values();
    let at = |i: isize| &u[i.rem_euclid(l) as usize];
    (0..l)
        .map(|k| {
            let mut best: Option<Rat> = None;
            let mut gain = Rat::zero();
            let mut loss = Rat::zero();
            for m in 0..l {
                gain += at(k - m - 1);
                if m > 0 {
                    loss += int(1) - at(k - m);
                }
                let v = &gain - &loss;
                if best.as_ref().is_none_or(|b| v > *b) {
                    best = Some(v);
                }
            }
            best.expect("L >= 1")
        })
        .collect()
}

/// `U'_k = min(1 - U_k, N_k)`.
pub fn kdv_step(s: &KdvState) -> Result<KdvState> {
    let n = kdv_carry(s);
    let u = s
        .values()
        .iter()
        .zip(n)
        .map(|(u, n)| (int(1) - u).min(n))
        .collect();
    KdvState::new(u)
}

/// The capacity-`m` carrier pass.
///
/// The carrier's initial load is the least fixed point of the load map over
/// one full turn, reached by iterating from an empty carrier.
pub fn bbs_tm(s: &BbsState, m: usize) -> Result<BbsState> {
    if m == 0 {
        return Err(Error::InvalidArgument(
            "carrier capacity must be positive".into(),
        ));
    }
    let pass = |load: usize| -> (Vec<u8>, usize) {
        let mut load = load;
        let mut out = Vec::with_capacity(s.len());
        for &v in s.cells() {
            if v == 1 {
                if load < m {
                    load += 1;
                    out.push(0);
                } else {
                    out.push(1);
                }
            } else if load > 0 {
                load -= 1;
                out.push(1);
            } else {
                out.push(0);
            }
        }
        (out, load)
    };
    let mut seed = 0;
    for _ in 0..=s.len() + m {
        let (out, end) = pass(seed);
        if end == seed {
            return BbsState::new(out);
        }
        seed = end;
    }
    Err(Error::Internal("carrier load did not settle".into()))
}

/// `μ` and `λ` of a non-vacuum state.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SolitonContent {
    pub mu: Vec<usize>,
    pub lambda: Vec<usize>,
}

impl SolitonContent {
    pub fn genus(&self) -> usize {
        self.lambda.len()
    }

    pub fn is_strict(&self) -> bool {
        self.lambda.windows(2).all(|w| w[0] < w[1])
    }
}

/// `λ_j = #{k : μ_k >= μ_1 + 1 - j}`.
pub fn lambda_from_mu(mu: &[usize]) -> Vec<usize> {
    let Some(&m1) = mu.first() else {
        return Vec::new();
    };
    (1..=m1)
        .map(|j| mu.iter().filter(|&&m| m + j > m1).count())
        .collect()
}

pub fn soliton_content(s: &BbsState) -> Result<SolitonContent> {
    if s.is_vacuum() {
        return Err(Error::EmptyContent);
    }
    let mu = arcs(s).mu;
    let lambda = lambda_from_mu(&mu);
    Ok(SolitonContent { mu, lambda })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn s(x: &str) -> BbsState {
        x.parse().unwrap()
    }

    #[test]
    fn worked_example() {
        let (next, mu) = bbs_step(&s("11100100000"));
        assert_eq!(next, s("00011011000"));
        assert_eq!(mu, vec![2, 1, 1]);
        let c = soliton_content(&s("11100100000")).unwrap();
        assert_eq!(c.lambda, vec![1, 3]);
        assert_eq!(soliton_content(&next).unwrap(), c);
    }

    #[test]
    fn small_examples() {
        assert_eq!(bbs_step(&s("10000")).0, s("01000"));
        assert_eq!(
            soliton_content(&s("10000")).unwrap(),
            SolitonContent {
                mu: vec![1],
                lambda: vec![1]
            }
        );
        let c = soliton_content(&s("1101000000")).unwrap();
        assert_eq!((c.mu, c.lambda), (vec![2, 1], vec![1, 2]));
        assert_eq!(soliton_content(&s("00000")), Err(Error::EmptyContent));
        assert!(matches!(
            "11100".parse::<BbsState>(),
            Err(Error::PhaseSpace(_))
        ));
    }

    #[test]
    fn kdv_agrees_with_the_ball_rule() {
        for l in 1..=9 {
            for st in BbsState::all(l) {
                let k = kdv_step(&st.to_kdv()).unwrap();
                assert_eq!(k.to_bbs(), Some(bbs_step(&st).0), "{st}");
                let n = kdv_carry(&st.to_kdv());
                let arcs = arc_crossings(&st);
                for (a, b) in n.iter().zip(arcs) {
                    assert_eq!(*a, int(b as i64), "{st}");
                }
            }
        }
    }

    #[test]
    fn vacuum_is_fixed() {
        let v = BbsState::vacuum(6);
        assert_eq!(kdv_step(&v.to_kdv()).unwrap(), v.to_kdv());
        assert_eq!(bbs_tm(&v, 2).unwrap(), v);
    }

    #[test]
    fn carrier_family() {
        let st = s("11100100000");
        for m in 3..6 {
            assert_eq!(bbs_tm(&st, m).unwrap(), s("00011011000"));
        }
        for l in 3..=10 {
            for st in BbsState::all(l) {
                let a = bbs_tm(&bbs_tm(&st, 1).unwrap(), 2).unwrap();
                let b = bbs_tm(&bbs_tm(&st, 2).unwrap(), 1).unwrap();
                assert_eq!(a, b, "{st}");
                if !st.is_vacuum() {
                    let c = soliton_content(&st).unwrap();
                    for m in 1..=c.lambda[c.genus() - 1] + 2 {
                        let t = bbs_tm(&st, m).unwrap();
                        assert_eq!(soliton_content(&t).unwrap().lambda, c.lambda);
                    }
                }
            }
        }
    }
}
