//! The fourteen end-to-end checks, shared by `tropint verify` and the
//! acceptance test target.

use std::time::Instant;

use num_bigint::BigInt;
use num_traits::{Signed, ToPrimitive, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::bbs::{self, BbsLevel, BbsState};
use crate::curve::{extract_curve, face_basis, gram, path_pairing};
use crate::error::{Error, Result};
use crate::linalg::Matrix;
use crate::minplus::{
    lattice_order, residue_enumerate, theta_eval, theta_objective, theta_quasi_shift, Hnf,
    PeriodLattice,
};
use crate::rat::{fmt_vec, int, ints, rat, Rat};
use crate::toda::{
    self, random_rat_vec, random_smooth_level, toda_conserved, toda_period_matrix, toda_step,
    TodaLevel, TodaSolution, TodaState,
};

pub const CRITERIA: usize = 14;

#[derive(Clone, Debug)]
pub struct VerifyConfig {
    pub seed: u64,
    /// Randomized cases per property suite.
    pub cases: usize,
    /// Samples for the bilinear identity.
    pub bilinear_samples: usize,
}

impl Default for VerifyConfig {
    fn default() -> Self {
        VerifyConfig {
            seed: 2024,
            cases: 1000,
            bilinear_samples: 500,
        }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct Check {
    pub id: usize,
    pub name: &'static str,
    pub pass: bool,
    pub detail: String,
    /// Enough to reproduce a failure.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub witness: Option<String>,
    #[serde(skip)]
    pub millis: u128,
    /// Set when a budget stopped the check rather than a counterexample.
    #[serde(skip_serializing_if = "std::ops::Not::not")]
    pub budget: bool,
}

impl Check {
    pub fn line(&self) -> String {
        let status = if self.pass { "PASS" } else { "FAIL" };
        let mut s = format!(
            "{status} {:>2} {} ({}) [{} ms]",
            self.id, self.name, self.detail, self.millis
        );
        if let Some(w) = &self.witness {
            s.push_str(&format!(" witness: {w}"));
        }
        s
    }
}

/// A failing check either found a counterexample or hit an error.
enum Outcome {
    Pass(String),
    Fail(String, String),
}

fn pass(d: impl Into<String>) -> Result<Outcome> {
    Ok(Outcome::Pass(d.into()))
}

fn fail(d: impl Into<String>, w: impl Into<String>) -> Result<Outcome> {
    Ok(Outcome::Fail(d.into(), w.into()))
}

pub fn name(id: usize) -> &'static str {
    match id {
        1 => "cycle pairings of the genus-2 example curve",
        2 => "period matrices of the genus-1 and genus-2 examples",
        3 => "Toda N=2 example trajectory and Jacobian images",
        4 => "Toda theta solution and conserved quantities",
        5 => "Toda bilinear tau identity",
        6 => "Toda closed-form period matrix vs geometry",
        7 => "ball rule equals tropical KdV, L <= 12",
        8 => "box-ball worked example",
        9 => "C_j tiling DP vs determinant oracle, L <= 11",
        10 => "box-ball period matrix equals A",
        11 => "isolevel counts equal det A",
        12 => "Z0 fitting and linearization",
        13 => "Toda quotient covolume identity",
        14 => "randomized property suites",
        _ => "unknown",
    }
}

pub fn run(id: usize, cfg: &VerifyConfig) -> Check {
    let start = Instant::now();
    let mut rng =
        ChaCha8Rng::seed_from_u64(cfg.seed.wrapping_mul(1_000_003).wrapping_add(id as u64));
    let out = match id {
        1 => c1(),
        2 => c2(),
        3 => c3(),
        4 => c4(&mut rng),
        5 => c5(&mut rng, cfg.bilinear_samples),
        6 => c6(&mut rng),
        7 => c7(),
        8 => c8(),
        9 => c9(),
        10 => c10(),
        11 => c11(),
        12 => c12(),
        13 => c13(),
        14 => c14(&mut rng, cfg.cases),
        _ => Err(Error::InvalidArgument(format!("no criterion {id}"))),
    };
    let millis = start.elapsed().as_millis();
    let (pass, detail, witness, budget) = match out {
        Ok(Outcome::Pass(d)) => (true, d, None, false),
        Ok(Outcome::Fail(d, w)) => (false, d, Some(w), false),
        Err(e) => {
            let budget = matches!(e, Error::Budget { .. });
            (false, "error".to_string(), Some(e.to_string()), budget)
        }
    };
    Check {
        id,
        name: name(id),
        pass,
        detail,
        witness,
        millis,
        budget,
    }
}

pub fn run_all(cfg: &VerifyConfig) -> Vec<Check> {
    (1..=CRITERIA).map(|i| run(i, cfg)).collect()
}

const FIG2: &str = "min(2Y, Y+3X, Y+2X, Y+X+1, Y+4, 11)";
const FIG1: &str = "min(2Y, Y+2X, Y+X, Y+3, 10)";

fn c1() -> Result<Outcome> {
    let c = extract_curve(&FIG2.parse()?)?;
    let b = face_basis(&c)?;
    let got = [
        path_pairing(&c, &b.cycles[0], &b.cycles[0])?,
        path_pairing(&c, &b.cycles[0], &b.cycles[1])?,
        path_pairing(&c, &b.cycles[1], &b.cycles[1])?,
    ];
    if got.to_vec() == ints(&[20, -7, 14]) {
        pass("<B1,B1>=20 <B1,B2>=-7 <B2,B2>=14")
    } else {
        fail("pairings differ", format!("{FIG2}: {}", fmt_vec(&got)))
    }
}

fn c2() -> Result<Outcome> {
    let one = extract_curve(&FIG1.parse()?)?;
    let o1 = gram(&one, &face_basis(&one)?)?;
    let two = extract_curve(&FIG2.parse()?)?;
    let o2 = gram(&two, &face_basis(&two)?)?;
    if o1.omega() != &Matrix::from_ints(&[&[20]]) {
        return fail("genus-1 period", format!("{FIG1}: {:?}", o1.omega()));
    }
    if o2.omega() != &Matrix::from_ints(&[&[20, -7], &[-7, 14]]) {
        return fail("genus-2 period", format!("{FIG2}: {:?}", o2.omega()));
    }
    pass("(20) and [[20,-7],[-7,14]]")
}

fn c3() -> Result<Outcome> {
    let level = TodaLevel::new(ints(&[0, 3, 8]))?;
    level.check_smooth()?;
    let closed = toda_period_matrix(&level)?;
    let (_, _, geo) = toda::toda_curve(&level)?;
    if closed.omega() != &Matrix::from_ints(&[&[16]]) || geo != closed {
        return fail("period matrix", format!("C=(0,3,8): {:?}", geo.omega()));
    }
    let rows = [
        [3, 4, 0, 1],
        [3, 1, 0, 4],
        [1, 0, 2, 5],
        [0, 2, 3, 3],
        [0, 5, 3, 0],
    ];
    let mut s = TodaState::from_interleaved(&ints(&rows[0]))?;
    let mut images = Vec::new();
    for (t, r) in rows.iter().enumerate() {
        if s.interleaved() != ints(r) {
            return fail("trajectory", format!("t={t}: got {s}"));
        }
        images.push(toda::toda_embed_n2(&s, &level, None)?.rep()[0].clone());
        s = toda_step(&s);
    }
    if images != ints(&[9, 12, 15, 2, 5]) {
        return fail("Jacobian images", fmt_vec(&images));
    }
    pass("smooth, Omega=(16), 5 rows, images 9 12 15 2 5 (+3 mod 16)")
}

fn c4(rng: &mut ChaCha8Rng) -> Result<Outcome> {
    let mut states = 0usize;
    for n in 2..=4 {
        for _ in 0..5 {
            let level = random_smooth_level(rng, n, 2, true);
            let lattice = toda_period_matrix(&level)?;
            let order = lattice_order(&lattice, &level.velocity())?;
            let window = (order * BigInt::from(2))
                .to_i64()
                .ok_or_else(|| Error::InvalidArgument("orbit too long".into()))?;
            for _ in 0..5 {
                let z0 = random_rat_vec(rng, level.genus(), 10);
                let mut sol = TodaSolution::new(&level, z0.clone())?;
                let witness = || format!("C={} Z0={}", fmt_vec(level.values()), fmt_vec(&z0));
                let mut s = sol.state(0)?;
                for t in 0..=window {
                    let h = toda_conserved(&s);
                    if h.h1 != *level.c(1)
                        || h.h2 != *level.c(2)
                        || h.hn != *level.c(n)
                        || h.hn1 != *level.c(n + 1)
                    {
                        return fail("conserved quantities", format!("{} t={t}", witness()));
                    }
                    if t == window {
                        break;
                    }
                    let next = sol.state(t + 1)?;
                    if toda_step(&s) != next {
                        return fail("time step", format!("{} t={t}", witness()));
                    }
                    s = next;
                    states += 1;
                }
            }
        }
    }
    pass(format!("75 solutions, {states} steps checked"))
}

fn c5(rng: &mut ChaCha8Rng, samples: usize) -> Result<Outcome> {
    let mut done = 0;
    while done < samples {
        let n = rng.gen_range(2..=4);
        let level = random_smooth_level(rng, n, 3, true);
        let z0 = random_rat_vec(rng, level.genus(), 10);
        let mut sol = TodaSolution::new(&level, z0.clone())?;
        for _ in 0..10 {
            let (k, t) = (rng.gen_range(-6..=6), rng.gen_range(-6..=6));
            if !sol.bilinear_holds(k, t)? {
                return fail(
                    "identity violated",
                    format!(
                        "C={} Z0={} n={k} t={t}",
                        fmt_vec(level.values()),
                        fmt_vec(&z0)
                    ),
                );
            }
            done += 1;
        }
    }
    pass(format!("{done} samples"))
}

fn c6(rng: &mut ChaCha8Rng) -> Result<Outcome> {
    for n in 2..=4 {
        for _ in 0..10 {
            let level = random_smooth_level(rng, n, 3, true);
            let (curve, _, geo) = toda::toda_curve(&level)?;
            if !curve.is_smooth().smooth || geo != toda_period_matrix(&level)? {
                return fail(
                    "closed form differs",
                    format!("C={}", fmt_vec(level.values())),
                );
            }
        }
    }
    pass("30 levels, N=2,3,4")
}

fn c7() -> Result<Outcome> {
    let mut count = 0usize;
    for l in 1..=12 {
        for s in BbsState::all(l) {
            let k = s.to_kdv();
            let next = bbs::kdv_step(&k)?;
            if next.to_bbs() != Some(bbs::bbs_step(&s).0) {
                return fail("evolutions differ", s.to_string());
            }
            let carry = bbs::kdv_carry(&k);
            let arcs = bbs::arc_crossings(&s);
            if carry.iter().zip(&arcs).any(|(a, &b)| *a != int(b as i64)) {
                return fail("carry differs from arc count", s.to_string());
            }
            count += 1;
        }
    }
    pass(format!("{count} states, 0 discrepancies"))
}

fn c8() -> Result<Outcome> {
    let s: BbsState = "11100100000".parse()?;
    let (next, mu) = bbs::bbs_step(&s);
    let c = bbs::soliton_content(&s)?;
    if next.to_string() != "00011011000" || mu != [2, 1, 1] || c.lambda != [1, 3] {
        return fail(
            "mismatch",
            format!("next={next} mu={mu:?} lambda={:?}", c.lambda),
        );
    }
    pass("11100100000 -> 00011011000, mu=(2,1,1), lambda=(1,3)")
}

fn c9() -> Result<Outcome> {
    let mut count = 0usize;
    let mut isolevel = 0usize;
    for l in 1..=11 {
        for s in BbsState::all(l) {
            let k = s.to_kdv();
            let dp = bbs::bbs_cj(&k);
            let r = bbs::bbs_cj_oracle_with(&k, 11)?;
            if dp != r.c || !(r.y2_is_one && r.y0_is_binomial && r.sign_definite && r.beyond_m_ok) {
                return fail(
                    "DP and oracle disagree",
                    format!("{s}: dp={} oracle={}", fmt_vec(&dp), fmt_vec(&r.c)),
                );
            }
            let lambda = if s.is_vacuum() {
                Vec::new()
            } else {
                bbs::soliton_content(&s)?.lambda
            };
            if lambda.windows(2).all(|w| w[0] < w[1]) {
                if dp != bbs::closed_form_cj(l, &lambda) {
                    return fail("closed form", format!("{s}: {}", fmt_vec(&dp)));
                }
                isolevel += 1;
            }
            count += 1;
        }
    }
    pass(format!(
        "{count} states agree; closed form on {isolevel} strict-λ states"
    ))
}

/// Strictly increasing positive sequences with sum at most `max`.
fn strict_partitions(max: usize) -> Vec<Vec<usize>> {
    fn go(min: usize, left: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        for v in min..=left {
            cur.push(v);
            out.push(cur.clone());
            go(v + 1, left - v, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    go(1, max, &mut Vec::new(), &mut out);
    out
}

fn c10() -> Result<Outcome> {
    let mut count = 0;
    for lambda in strict_partitions(6) {
        let sum: usize = lambda.iter().sum();
        for l in 2 * sum + 1..=20 {
            let level = BbsLevel::new(l, lambda.clone())?;
            let geo = bbs::bbs_curve_period_matrix(&level)?;
            if geo != level.lattice() {
                return fail("period matrix differs", format!("L={l} lambda={lambda:?}"));
            }
            // The basis B_1 + ... + B_{g+1-k} yields A with reversed indices.
            let g = level.genus();
            let rev = bbs::bbs_curve_period_matrix_reversed(&level)?;
            let reversed = (0..g)
                .all(|i| (0..g).all(|j| rev.omega()[(i, j)] == int(level.a[g - 1 - i][g - 1 - j])));
            if !reversed {
                return fail("reversed basis", format!("L={l} lambda={lambda:?}"));
            }
            count += 1;
        }
    }
    pass(format!("{count} (L, lambda) pairs, basis B1+..+Bk"))
}

fn c11() -> Result<Outcome> {
    let mut cases: Vec<(usize, Vec<usize>)> = vec![(11, vec![1, 3]), (8, vec![1, 2])];
    cases.extend((3..=14).map(|l| (l, vec![1])));
    for (l, lambda) in &cases {
        let level = BbsLevel::new(*l, lambda.clone())?;
        let n = bbs::enumerate_isolevel(*l, lambda, bbs::DEFAULT_STATE_LIMIT)?.len();
        if BigInt::from(n) != level.det() {
            return fail(
                "count differs",
                format!("L={l} lambda={lambda:?}: {n} vs {}", level.det()),
            );
        }
    }
    pass("77, 32, and L for lambda=(1), L=3..14")
}

fn c12() -> Result<Outcome> {
    let level = BbsLevel::new(11, vec![1, 3])?;
    let states = bbs::enumerate_isolevel(11, &[1, 3], bbs::DEFAULT_STATE_LIMIT)?;
    let candidates = bbs::z0_candidates(&level)?;
    let mut fits = Vec::with_capacity(states.len());
    for s in &states {
        fits.push(bbs::fit_among(&level, &candidates, s)?);
    }
    for i in 0..fits.len() {
        for j in i + 1..fits.len() {
            if fits[i].difference(&fits[j])?.is_zero() {
                return fail("fit not injective", format!("{} {}", states[i], states[j]));
            }
        }
    }
    for (s, z) in states.iter().zip(&fits) {
        let next = bbs::fit_among(&level, &candidates, &bbs::bbs_step(s).0)?;
        if !next.difference(&z.translate(&level.velocity())?)?.is_zero() {
            return fail("step does not advance by lambda", s.to_string());
        }
        for m in 1..=3 {
            let t = bbs::fit_among(&level, &candidates, &bbs::bbs_tm(s, m)?)?;
            if !t
                .difference(&z.translate(&level.carrier_velocity(m))?)?
                .is_zero()
            {
                return fail("T_m does not advance by v_m", format!("{s} m={m}"));
            }
        }
    }
    let order = bbs::predicted_period(&level)?;
    let period = bbs::orbit_period(&states[0], 1 << 20)?;
    if order != BigInt::from(77) || BigInt::from(period) != order {
        return fail(
            "orbit period",
            format!("{}: {period} vs {order}", states[0]),
        );
    }
    pass("77 unique fits, +lambda per step, +v_m per T_m, period 77")
}

fn c13() -> Result<Outcome> {
    let cases: [(usize, &[usize]); 5] = [
        (11, &[1, 3]),
        (8, &[1, 2]),
        (5, &[1]),
        (13, &[1, 2, 3]),
        (20, &[2, 3, 4]),
    ];
    for (l, lambda) in cases {
        let level = BbsLevel::new(l, lambda.to_vec())?;
        let q = bbs::jacobian_quotient_check(&level)?;
        if !q.holds {
            return fail(
                "covolume differs",
                format!("L={l} lambda={lambda:?}: {} vs {}", q.covolume, q.det_a),
            );
        }
        if !bbs::carrier_velocities_span(&level)? {
            return fail(
                "carrier velocities do not span",
                format!("L={l} lambda={lambda:?}"),
            );
        }
    }
    pass("5 instances")
}

fn random_lattice(rng: &mut ChaCha8Rng) -> Result<PeriodLattice> {
    let g = rng.gen_range(1..=3);
    let b: Vec<Vec<i64>> = (0..g)
        .map(|_| (0..g).map(|_| rng.gen_range(-2..=2)).collect())
        .collect();
    let mut m = Matrix::zeros(g, g);
    for i in 0..g {
        for j in 0..g {
            let dot: i64 = (0..g).map(|k| b[k][i] * b[k][j]).sum();
            m[(i, j)] = int(dot + i64::from(i == j));
        }
    }
    PeriodLattice::new(m)
}

fn small_vec(rng: &mut ChaCha8Rng, g: usize, max: i64) -> Vec<Rat> {
    (0..g)
        .map(|_| {
            let d = rng.gen_range(1..=4);
            rat(rng.gen_range(-max * d..=max * d), d)
        })
        .collect()
}

fn brute_theta(l: &PeriodLattice, z: &[Rat]) -> Result<(Rat, Vec<Vec<i64>>)> {
    // Ω ⪰ I, so any minimizer has |n|_2 <= 2|z|_2 <= 2|z|_1.
    let r = (z.iter().map(|v| v.abs()).sum::<Rat>() * int(2))
        .ceil()
        .to_integer()
        .to_i64()
        .expect("small");
    let g = z.len();
    let mut n = vec![-r; g];
    let mut best: Option<(Rat, Vec<Vec<i64>>)> = None;
    loop {
        let v = theta_objective(l, z, &n)?;
        match &mut best {
            Some((b, set)) if v == *b => set.push(n.clone()),
            Some((b, _)) if v > *b => {}
            _ => best = Some((v, vec![n.clone()])),
        }
        let mut i = 0;
        loop {
            if i == g {
                return Ok(best.expect("nonempty box"));
            }
            n[i] += 1;
            if n[i] <= r {
                break;
            }
            n[i] = -r;
            i += 1;
        }
    }
}

fn c14(rng: &mut ChaCha8Rng, cases: usize) -> Result<Outcome> {
    for case in 0..cases {
        let l = random_lattice(rng)?;
        let g = l.genus();
        let z = small_vec(rng, g, 6);
        let m: Vec<i64> = (0..g).map(|_| rng.gen_range(-3..=3)).collect();
        let shifted: Vec<Rat> = z
            .iter()
            .zip(l.lattice_vector(&m)?)
            .map(|(a, b)| a + b)
            .collect();
        let lhs = theta_eval(&l, &shifted)?.value;
        let rhs = theta_eval(&l, &z)?.value + theta_quasi_shift(&l, &z, &m)?;
        if lhs != rhs {
            return fail(
                "quasi-periodicity",
                format!(
                    "case {case}: Omega={:?} Z={} m={m:?}",
                    l.omega(),
                    fmt_vec(&z)
                ),
            );
        }
    }
    for case in 0..cases {
        let l = random_lattice(rng)?;
        let z = small_vec(rng, l.genus(), 1);
        let t = theta_eval(&l, &z)?;
        let (v, mut set) = brute_theta(&l, &z)?;
        set.sort();
        let mut got = t.minimizers.clone();
        got.sort();
        if t.value != v || got != set {
            return fail(
                "theta vs brute force",
                format!("case {case}: Omega={:?} Z={}", l.omega(), fmt_vec(&z)),
            );
        }
    }
    for case in 0..cases {
        let l = random_lattice(rng)?;
        let g = l.genus();
        let (a, b, c) = (
            small_vec(rng, g, 40),
            small_vec(rng, g, 40),
            small_vec(rng, g, 40),
        );
        let m: Vec<i64> = (0..g).map(|_| rng.gen_range(-4..=4)).collect();
        let p = l.reduce(&a)?;
        let moved: Vec<Rat> = a
            .iter()
            .zip(l.lattice_vector(&m)?)
            .map(|(x, y)| x + y)
            .collect();
        let laws = [
            p.difference(&l.reduce(&moved)?)?.is_zero(),
            l.reduce(p.rep())?.rep() == p.rep(),
            p.translate(&b)?
                .translate(&c)?
                .difference(&p.translate(&c)?.translate(&b)?)?
                .is_zero(),
            p.translate(&b)?
                .difference(&p)?
                .difference(&l.reduce(&b)?)?
                .is_zero(),
            p.difference(&p)?.is_zero(),
        ];
        if let Some(i) = laws.iter().position(|ok| !ok) {
            return fail(
                "torus law",
                format!(
                    "case {case} law {i}: Omega={:?} a={}",
                    l.omega(),
                    fmt_vec(&a)
                ),
            );
        }
    }
    for case in 0..cases {
        let g = rng.gen_range(1..=3);
        let a: Vec<Vec<i64>> = (0..g)
            .map(|_| (0..g).map(|_| rng.gen_range(-5..=5)).collect())
            .collect();
        let rows: Vec<&[i64]> = a.iter().map(Vec::as_slice).collect();
        let det = Matrix::from_ints(&rows).determinant()?;
        if det.is_zero() {
            continue;
        }
        let res = residue_enumerate(&a)?;
        let hnf = Hnf::new(&a)?;
        let mut canon: Vec<Vec<i64>> = res
            .iter()
            .map(|r| hnf.canonical(r))
            .collect::<Result<_>>()?;
        canon.sort();
        canon.dedup();
        let col_shift = res.first().map(|r| {
            let mut v = r.clone();
            for (i, x) in v.iter_mut().enumerate() {
                *x += a[i][0];
            }
            v
        });
        let shift_ok = match col_shift {
            Some(v) => hnf.canonical(&v)? == hnf.canonical(&res[0])?,
            None => false,
        };
        if int(res.len() as i64) != det.abs() || canon.len() != res.len() || !shift_ok {
            return fail("residue count", format!("case {case}: A={a:?}"));
        }
    }
    pass(format!("4 suites x {cases} cases"))
}
