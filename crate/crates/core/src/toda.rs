//! The tropical periodic Toda lattice.
//!
//! States are `(Q_j, W_j)` for `j ∈ Z_N`, stored 0-based. Levels are the
//! values `C_1..C_{N+1}` of the conserved quantities.
//!
//! Shifting every `Q_j` and `W_j` by `c` moves `C_k` to `C_k + kc` for
//! `k <= N` and `C_{N+1}` to `C_{N+1} + 2Nc`, and translates the spectral
//! curve. The derived data below are the shift-invariant combinations
//! `λ_k = C_{k+1} - C_k - C_1` and `L = C_{N+1} - 2N C_1`, which reduce to
//! the usual `C_{k+1} - C_k` and `C_{N+1}` when `C_1 = 0`.

use std::collections::HashMap;

use num_traits::{Signed, Zero};
use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::curve::{self, abel_map, extract_curve, face_basis, gram, Pt, TropCurve};
use crate::error::{Error, Result};
use crate::linalg::Matrix;
use crate::minplus::{theta, PeriodLattice, Term, TorusPoint, TropPoly2};
use crate::rat::{fmt_vec, int, rat, Rat};

#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "StateRepr", into = "StateRepr")]
pub struct TodaState {
    q: Vec<Rat>,
    w: Vec<Rat>,
}

#[derive(Serialize, Deserialize)]
struct StateRepr {
    #[serde(rename = "N")]
    n: usize,
    #[serde(rename = "Q", with = "crate::rat::serde_str::vec")]
    q: Vec<Rat>,
    #[serde(rename = "W", with = "crate::rat::serde_str::vec")]
    w: Vec<Rat>,
}

impl TryFrom<StateRepr> for TodaState {
    type Error = Error;
    fn try_from(r: StateRepr) -> Result<Self> {
        crate::error::check_dim(r.n, r.q.len())?;
        TodaState::new(r.q, r.w)
    }
}

impl From<TodaState> for StateRepr {
    fn from(s: TodaState) -> Self {
        StateRepr {
            n: s.q.len(),
            q: s.q,
            w: s.w,
        }
    }
}

impl TodaState {
    pub fn new(q: Vec<Rat>, w: Vec<Rat>) -> Result<Self> {
        crate::error::check_dim(q.len(), w.len())?;
        if q.len() < 2 {
            return Err(Error::InvalidArgument("Toda lattice needs N >= 2".into()));
        }
        let s = TodaState { q, w };
        let (sq, sw) = (s.q.iter().sum::<Rat>(), s.w.iter().sum::<Rat>());
        if sq >= sw {
            return Err(Error::PhaseSpace(format!(
                "ΣQ = {sq} is not below ΣW = {sw}"
            )));
        }
        Ok(s)
    }

    /// From the interleaved form `Q_1, W_1, Q_2, W_2, ...`.
    pub fn from_interleaved(v: &[Rat]) -> Result<Self> {
        if !v.len().is_multiple_of(2) {
            return Err(Error::InvalidArgument(
                "interleaved Toda state needs an even number of entries".into(),
            ));
        }
        let q = v.iter().step_by(2).cloned().collect();
        let w = v.iter().skip(1).step_by(2).cloned().collect();
        TodaState::new(q, w)
    }

    pub fn interleaved(&self) -> Vec<Rat> {
        self.q
            .iter()
            .zip(&self.w)
            .flat_map(|(a, b)| [a.clone(), b.clone()])
            .collect()
    }

    pub fn n(&self) -> usize {
        self.q.len()
    }

    pub fn q(&self) -> &[Rat] {
        &self.q
    }

    pub fn w(&self) -> &[Rat] {
        &self.w
    }
}

impl std::fmt::Display for TodaState {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{}", fmt_vec(&self.interleaved()))
    }
}

/// One step of the evolution.
pub fn toda_step(s: &TodaState) -> TodaState {
    let n = s.n();
    let at = |v: &[Rat], j: isize| v[j.rem_euclid(n as isize) as usize].clone();
    let mut q_next = Vec::with_capacity(n);
    for j in 0..n as isize {
        let mut partial = Rat::zero();
        let mut x = Rat::zero();
        for l in 1..n as isize {
            partial += at(&s.w, j - l) - at(&s.q, j - l);
            if partial < x {
                x = partial.clone();
            }
        }
        let candidate = at(&s.q, j) - x;
        q_next.push(at(&s.w, j).min(candidate));
    }
    let w_next = (0..n as isize)
        .map(|j| at(&s.q, j + 1) + at(&s.w, j) - &q_next[j as usize])
        .collect();
    // ΣQ and ΣW are both conserved, so the result stays in phase space.
    TodaState {
        q: q_next,
        w: w_next,
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Conserved {
    #[serde(with = "crate::rat::serde_str")]
    pub h1: Rat,
    #[serde(with = "crate::rat::serde_str")]
    pub h2: Rat,
    #[serde(with = "crate::rat::serde_str")]
    pub hn: Rat,
    #[serde(with = "crate::rat::serde_str")]
    pub hn1: Rat,
}

pub fn toda_conserved(s: &TodaState) -> Conserved {
    let n = s.n();
    let (q, w) = (&s.q, &s.w);
    let h1 = q.iter().chain(w).min().cloned().expect("N >= 2");
    let mut h2: Option<Rat> = None;
    let mut take = |v: Rat| {
        if h2.as_ref().is_none_or(|h| v < *h) {
            h2 = Some(v);
        }
    };
    for i in 0..n {
        for j in i + 1..n {
            take(&q[i] + &q[j]);
            take(&w[i] + &w[j]);
        }
        for j in 0..n {
            if j != i && j != (i + n - 1) % n {
                take(&q[i] + &w[j]);
            }
        }
    }
    let sq: Rat = q.iter().sum();
    let sw: Rat = w.iter().sum();
    Conserved {
        h1,
        h2: h2.expect("N >= 2"),
        hn: sq.clone().min(sw.clone()),
        hn1: sq + sw,
    }
}

/// A level set `C = (C_1, ..., C_{N+1})`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TodaLevel {
    #[serde(rename = "C", with = "crate::rat::serde_str::vec")]
    c: Vec<Rat>,
}

impl TodaLevel {
    pub fn new(c: Vec<Rat>) -> Result<Self> {
        if c.len() < 3 {
            return Err(Error::InvalidArgument(
                "a Toda level needs N + 1 >= 3 values".into(),
            ));
        }
        Ok(TodaLevel { c })
    }

    pub fn n(&self) -> usize {
        self.c.len() - 1
    }

    pub fn genus(&self) -> usize {
        self.n() - 1
    }

    /// `C_k`, 1-based.
    pub fn c(&self, k: usize) -> &Rat {
        &self.c[k - 1]
    }

    pub fn values(&self) -> &[Rat] {
        &self.c
    }

    pub fn l(&self) -> Rat {
        self.c(self.n() + 1) - int(2 * self.n() as i64) * self.c(1)
    }

    /// `λ_1..λ_{N-1}`.
    pub fn lambda(&self) -> Vec<Rat> {
        (1..self.n())
            .map(|k| self.c(k + 1) - self.c(k) - self.c(1))
            .collect()
    }

    /// `p_0..p_{N-1}`.
    pub fn p(&self) -> Vec<Rat> {
        let lambda = self.lambda();
        let l = self.l();
        let mut p = vec![l.clone()];
        for lk in &lambda {
            let s: Rat = lambda.iter().map(|lj| lk.clone().min(lj.clone())).sum();
            p.push(&l - int(2) * s);
        }
        p
    }

    /// `(λ_1, λ_2 - λ_1, ..., λ_g - λ_{g-1})`.
    pub fn velocity(&self) -> Vec<Rat> {
        let lambda = self.lambda();
        (0..lambda.len())
            .map(|i| {
                if i == 0 {
                    lambda[0].clone()
                } else {
                    &lambda[i] - &lambda[i - 1]
                }
            })
            .collect()
    }

    /// `Ok` when the spectral curve is smooth, else the violated condition.
    pub fn check_smooth(&self) -> Result<()> {
        let lambda = self.lambda();
        let mut prev = Rat::zero();
        for (k, lk) in lambda.iter().enumerate() {
            if *lk <= prev {
                return Err(Error::NotSmooth(format!(
                    "λ is not strictly increasing from 0 at k = {}: {}",
                    k + 1,
                    fmt_vec(&lambda)
                )));
            }
            prev = lk.clone();
        }
        for (k, pk) in self.p().iter().enumerate() {
            if !pk.is_positive() {
                return Err(Error::NotSmooth(format!("p_{k} = {pk} is not positive")));
            }
        }
        Ok(())
    }

    pub fn is_smooth(&self) -> bool {
        self.check_smooth().is_ok()
    }
}

/// `min(2Y, Y + min(NX, (N-1)X + C_1, ..., C_N), C_{N+1})`.
pub fn toda_spectral(level: &TodaLevel) -> TropPoly2 {
    let n = level.n() as u32;
    let mut terms = vec![
        Term::new(Rat::zero(), 0, 2),
        Term::new(Rat::zero(), n, 1),
        Term::new(level.c(level.n() + 1).clone(), 0, 0),
    ];
    for k in 1..=n {
        terms.push(Term::new(level.c(k as usize).clone(), n - k, 1));
    }
    TropPoly2::new(terms).expect("nonempty")
}

/// Closed-form tridiagonal period matrix.
pub fn toda_period_matrix(level: &TodaLevel) -> Result<PeriodLattice> {
    level.check_smooth()?;
    let g = level.genus();
    let p = level.p();
    let mut lambda = vec![Rat::zero()];
    lambda.extend(level.lambda());
    let mut m = Matrix::zeros(g, g);
    for i in 1..=g {
        m[(i - 1, i - 1)] = &p[i - 1] + &p[i] + int(2) * (&lambda[i] - &lambda[i - 1]);
        if i < g {
            m[(i - 1, i)] = -p[i].clone();
            m[(i, i - 1)] = -p[i].clone();
        }
    }
    PeriodLattice::new(m)
}

/// The spectral curve and its face-basis period matrix.
pub fn toda_curve(level: &TodaLevel) -> Result<(TropCurve, curve::CycleBasis, PeriodLattice)> {
    let c = extract_curve(&toda_spectral(level))?;
    let b = face_basis(&c)?;
    let l = gram(&c, &b)?;
    Ok((c, b, l))
}

/// The theta-function solution for a fixed `Z_0`, memoising `T_n^t`.
pub struct TodaSolution {
    level: TodaLevel,
    lattice: PeriodLattice,
    z0: Vec<Rat>,
    velocity: Vec<Rat>,
    l: Rat,
    cache: HashMap<(i64, i64), Rat>,
}

impl TodaSolution {
    pub fn new(level: &TodaLevel, z0: Vec<Rat>) -> Result<Self> {
        let lattice = toda_period_matrix(level)?;
        crate::error::check_dim(level.genus(), z0.len())?;
        Ok(TodaSolution {
            level: level.clone(),
            lattice,
            z0,
            velocity: level.velocity(),
            l: level.l(),
            cache: HashMap::new(),
        })
    }

    pub fn lattice(&self) -> &PeriodLattice {
        &self.lattice
    }

    /// `Z_0 + 𝛌 t - L e_1 n`.
    pub fn argument(&self, n: i64, t: i64) -> Vec<Rat> {
        let mut z: Vec<Rat> = self
            .z0
            .iter()
            .zip(&self.velocity)
            .map(|(z, v)| z + v * int(t))
            .collect();
        z[0] -= &self.l * int(n);
        z
    }

    pub fn tau(&mut self, n: i64, t: i64) -> Result<Rat> {
        if let Some(v) = self.cache.get(&(n, t)) {
            return Ok(v.clone());
        }
        let v = theta(&self.lattice, &self.argument(n, t))?;
        self.cache.insert((n, t), v.clone());
        Ok(v)
    }

    /// `(Q_n^t, W_n^t)` for 1-based `n`.
    pub fn qw(&mut self, n: i64, t: i64) -> Result<(Rat, Rat)> {
        let c1 = self.level.c(1).clone();
        let q =
            self.tau(n - 1, t)? + self.tau(n, t + 1)? - self.tau(n - 1, t + 1)? - self.tau(n, t)?
                + &c1;
        let w =
            self.tau(n - 1, t + 1)? + self.tau(n + 1, t)? - self.tau(n, t)? - self.tau(n, t + 1)?
                + &self.l
                + &c1;
        Ok((q, w))
    }

    pub fn state(&mut self, t: i64) -> Result<TodaState> {
        let n = self.level.n() as i64;
        let mut q = Vec::new();
        let mut w = Vec::new();
        for j in 1..=n {
            let (a, b) = self.qw(j, t)?;
            q.push(a);
            w.push(b);
        }
        TodaState::new(q, w)
    }

    /// `T^{t+1}_n + T^{t-1}_n = min(2T^t_n, T^{t+1}_{n-1} + T^{t-1}_{n+1} + L)`.
    pub fn bilinear_holds(&mut self, n: i64, t: i64) -> Result<bool> {
        let lhs = self.tau(n, t + 1)? + self.tau(n, t - 1)?;
        let a = int(2) * self.tau(n, t)?;
        let b = self.tau(n - 1, t + 1)? + self.tau(n + 1, t - 1)? + &self.l;
        Ok(lhs == a.min(b))
    }
}

pub fn toda_theta_solution(level: &TodaLevel, z0: &[Rat], n: i64, t: i64) -> Result<(Rat, Rat)> {
    TodaSolution::new(level, z0.to_vec())?.qw(n, t)
}

pub fn tau_identity_check(level: &TodaLevel, z0: &[Rat], n: i64, t: i64) -> Result<bool> {
    TodaSolution::new(level, z0.to_vec())?.bilinear_holds(n, t)
}

/// `(Q_1, W_1, Q_2, W_2) ↦ (min(Q_2, W_1), Q_1 + W_1)`.
pub fn alpha_n2(s: &TodaState) -> Result<Pt> {
    if s.n() != 2 {
        return Err(Error::InvalidArgument(
            "the explicit embedding needs N = 2".into(),
        ));
    }
    Ok((s.q[1].clone().min(s.w[0].clone()), &s.q[0] + &s.w[0]))
}

/// Image of an `N = 2` state in the Jacobian, through the spectral curve.
/// `p0` defaults to the lexicographically smallest vertex.
pub fn toda_embed_n2(s: &TodaState, level: &TodaLevel, p0: Option<&Pt>) -> Result<TorusPoint> {
    if level.n() != 2 {
        return Err(Error::InvalidArgument(
            "the explicit embedding needs N = 2".into(),
        ));
    }
    level.check_smooth()?;
    let (c, b, l) = toda_curve(level)?;
    let p = alpha_n2(s)?;
    let base = match p0 {
        Some(p) => p.clone(),
        None => c.vertices()[0].clone(),
    };
    l.reduce(&abel_map(&c, &b, &base, &p)?)
}

/// A random smooth level: strictly increasing positive integer `λ`,
/// `L > 2 Σλ`, and a small integer `C_1`.
pub fn random_smooth_level<R: Rng>(rng: &mut R, n: usize, max_step: i64, shift: bool) -> TodaLevel {
    let mut lambda = Vec::with_capacity(n - 1);
    let mut cur = 0;
    for _ in 1..n {
        cur += rng.gen_range(1..=max_step);
        lambda.push(cur);
    }
    let sum: i64 = lambda.iter().sum();
    let l = 2 * sum + rng.gen_range(1..=2 * max_step);
    let c1 = if shift { rng.gen_range(-3..=3) } else { 0 };
    let mut c = vec![int(c1)];
    for lk in &lambda {
        let next = c.last().expect("nonempty") + int(*lk) + int(c1);
        c.push(next);
    }
    c.push(int(l + 2 * n as i64 * c1));
    TodaLevel::new(c).expect("N >= 2")
}

/// A random rational vector with entries of size up to `max` and small
/// denominators.
pub fn random_rat_vec<R: Rng>(rng: &mut R, len: usize, max: i64) -> Vec<Rat> {
    (0..len)
        .map(|_| {
            let d = rng.gen_range(1..=6);
            rat(rng.gen_range(-max * d..=max * d), d)
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rat::ints;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn st(v: &[i64]) -> TodaState {
        TodaState::from_interleaved(&ints(v)).unwrap()
    }

    fn level(c: &[i64]) -> TodaLevel {
        TodaLevel::new(ints(c)).unwrap()
    }

    #[test]
    fn example_trajectory() {
        let rows = [
            [3, 4, 0, 1],
            [3, 1, 0, 4],
            [1, 0, 2, 5],
            [0, 2, 3, 3],
            [0, 5, 3, 0],
        ];
        for w in rows.windows(2) {
            assert_eq!(toda_step(&st(&w[0])), st(&w[1]));
        }
        let expected = Conserved {
            h1: int(0),
            h2: int(3),
            hn: int(3),
            hn1: int(8),
        };
        for r in rows {
            assert_eq!(toda_conserved(&st(&r)), expected);
        }
    }

    #[test]
    fn homogeneous_state_is_fixed() {
        let s = TodaState::new(ints(&[0, 0, 0]), ints(&[2, 2, 2])).unwrap();
        assert_eq!(toda_step(&s), s);
        let s = TodaState::new(ints(&[0, 0, 0]), ints(&[1, 1, 1])).unwrap();
        let h = toda_conserved(&s);
        assert_eq!((h.h1, h.hn, h.hn1), (int(0), int(0), int(3)));
    }

    #[test]
    fn phase_space_is_enforced() {
        assert!(matches!(
            TodaState::new(ints(&[2, 2]), ints(&[1, 3])),
            Err(Error::PhaseSpace(_))
        ));
    }

    #[test]
    fn level_data() {
        let l = level(&[0, 3, 8]);
        assert_eq!(l.l(), int(8));
        assert_eq!(l.lambda(), ints(&[3]));
        assert_eq!(l.p(), ints(&[8, 2]));
        assert!(l.is_smooth());
        assert_eq!(
            toda_period_matrix(&l).unwrap().omega(),
            &Matrix::from_ints(&[&[16]])
        );
        assert_eq!(
            toda_spectral(&l),
            "min(2Y, Y+2X, Y+X, Y+3, 8)".parse().unwrap()
        );

        let l = level(&[0, 1, 3, 12]);
        assert_eq!(l.lambda(), ints(&[1, 2]));
        assert_eq!(l.p(), ints(&[12, 8, 6]));
        assert_eq!(
            toda_period_matrix(&l).unwrap().omega(),
            &Matrix::from_ints(&[&[22, -8], &[-8, 16]])
        );

        assert!(matches!(
            level(&[0, 2, 4, 20]).check_smooth(),
            Err(Error::NotSmooth(_))
        ));
        assert!(matches!(
            level(&[0, 3, 6]).check_smooth(),
            Err(Error::NotSmooth(_))
        ));
    }

    #[test]
    fn closed_form_matches_geometry() {
        for c in [&[0, 3, 8][..], &[0, 1, 3, 12], &[1, 5, 12]] {
            let l = level(c);
            let (curve, _, g) = toda_curve(&l).unwrap();
            assert!(curve.is_smooth().smooth, "{c:?}");
            assert_eq!(curve.genus(), l.genus());
            assert_eq!(g, toda_period_matrix(&l).unwrap(), "{c:?}");
        }
    }

    #[test]
    fn embedding_table() {
        let l = level(&[0, 3, 8]);
        let rows = [
            [3, 4, 0, 1],
            [3, 1, 0, 4],
            [1, 0, 2, 5],
            [0, 2, 3, 3],
            [0, 5, 3, 0],
        ];
        let images: Vec<Rat> = rows
            .iter()
            .map(|r| toda_embed_n2(&st(r), &l, None).unwrap().rep()[0].clone())
            .collect();
        assert_eq!(images, ints(&[9, 12, 15, 2, 5]));
        assert_eq!(alpha_n2(&st(&rows[3])).unwrap(), (int(2), int(2)));
    }

    #[test]
    fn theta_solution_solves_the_lattice() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for (n, shift) in [(2, false), (2, true), (3, true)] {
            let l = random_smooth_level(&mut rng, n, 3, shift);
            let z0 = random_rat_vec(&mut rng, l.genus(), 10);
            let mut sol = TodaSolution::new(&l, z0).unwrap();
            let mut s = sol.state(0).unwrap();
            let h = toda_conserved(&s);
            assert_eq!(h.h1, *l.c(1));
            assert_eq!(h.h2, *l.c(2));
            assert_eq!(h.hn, *l.c(n));
            assert_eq!(h.hn1, *l.c(n + 1));
            for t in 1..12 {
                let next = sol.state(t).unwrap();
                assert_eq!(toda_step(&s), next, "level {:?} t {t}", l.values());
                s = next;
            }
        }
    }

    #[test]
    fn bilinear_identity() {
        let l = level(&[0, 3, 8]);
        let mut sol = TodaSolution::new(&l, ints(&[1])).unwrap();
        for n in -3..=3 {
            for t in -3..=3 {
                assert!(sol.bilinear_holds(n, t).unwrap());
            }
        }
    }
}
