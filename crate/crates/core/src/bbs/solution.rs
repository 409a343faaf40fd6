use num_bigint::BigInt;
use rayon::prelude::*;

use super::level::BbsLevel;
use super::state::{bbs_step, soliton_content, BbsState};
use crate::error::{Error, Result};
use crate::minplus::{theta, PeriodLattice, TorusPoint};
use crate::rat::{int, Rat};

/// Default cap on the number of states an enumeration may visit.
pub const DEFAULT_STATE_LIMIT: u128 = 1 << 24;

fn argument(level: &BbsLevel, z0: &[Rat], k: i64, t: i64) -> Vec<Rat> {
    z0.iter()
        .zip(&level.lambda)
        .map(|(z, &l)| z - int(k) + int(t * l as i64))
        .collect()
}

/// `U_k^t` from the four-theta formula.
pub fn bbs_theta_solution(level: &BbsLevel, z0: &[Rat], k: i64, t: i64) -> Result<Rat> {
    crate::error::check_dim(level.genus(), z0.len())?;
    let lat = level.lattice();
    let th = |k: i64, t: i64| theta(&lat, &argument(level, z0, k, t));
    Ok(-th(k, t)? + th(k - 1, t)? + th(k, t + 1)? - th(k - 1, t + 1)?)
}

/// The configuration at time `t`, boxes `k = 1..L`.
pub fn theta_state(level: &BbsLevel, z0: &[Rat], t: i64) -> Result<Vec<Rat>> {
    let lat = level.lattice();
    theta_row(level, &lat, z0, t, None)
}

/// Rows stop at the first mismatch with `target` when one is given.
fn theta_row(
    level: &BbsLevel,
    lat: &PeriodLattice,
    z0: &[Rat],
    t: i64,
    target: Option<&[u8]>,
) -> Result<Vec<Rat>> {
    let th = |k: i64, t: i64| theta(lat, &argument(level, z0, k, t));
    let mut prev = (th(0, t)?, th(0, t + 1)?);
    let mut out = Vec::with_capacity(level.l);
    for k in 1..=level.l as i64 {
        let cur = (th(k, t)?, th(k, t + 1)?);
        let u = -&cur.0 + &prev.0 + &cur.1 - &prev.1;
        if let Some(want) = target {
            if u != int(want[k as usize - 1] as i64) {
                out.push(u);
                return Ok(out);
            }
        }
        out.push(u);
        prev = cur;
    }
    Ok(out)
}

/// All `Z_0 = r - p/2` over residues `r` of `Z^g / A Z^g`.
pub fn z0_candidates(level: &BbsLevel) -> Result<Vec<Vec<Rat>>> {
    let half = level.half_p();
    let residues = Hnf::new(&level.a)?.residues(crate::minplus::residue::DEFAULT_RESIDUE_LIMIT)?;
    Ok(residues
        .into_iter()
        .map(|r| r.iter().zip(&half).map(|(&v, h)| int(v) - h).collect())
        .collect())
}

use crate::minplus::Hnf;

/// The unique `Z_0` whose theta solution reproduces `s` at `t = 0`.
pub fn bbs_fit_z0(s: &BbsState) -> Result<TorusPoint> {
    let c = soliton_content(s)?;
    let level = BbsLevel::new(s.len(), c.lambda)?;
    let candidates = z0_candidates(&level)?;
    fit_among(&level, &candidates, s)
}

pub fn fit_among(level: &BbsLevel, candidates: &[Vec<Rat>], s: &BbsState) -> Result<TorusPoint> {
    if s.len() != level.l {
        return Err(Error::DimensionMismatch {
            expected: level.l,
            got: s.len(),
        });
    }
    let lat = level.lattice();
    let matches: Vec<&Vec<Rat>> = candidates
        .par_iter()
        .map(|z| {
            theta_row(level, &lat, z, 0, Some(s.cells()))
                .map(|row| {
                    row.len() == level.l && row.last() == Some(&int(s.cells()[level.l - 1] as i64))
                })
                .map(|ok| ok.then_some(z))
        })
        .collect::<Result<Vec<_>>>()?
        .into_iter()
        .flatten()
        .collect();
    match matches.as_slice() {
        [] => Err(Error::NoMatch(s.to_string())),
        [z] => lat.reduce(z),
        many => Err(Error::MultipleMatches {
            state: s.to_string(),
            count: many.len(),
        }),
    }
}

fn binomial(n: usize, k: usize) -> u128 {
    let mut r: u128 = 1;
    for i in 0..k.min(n - k) {
        r = r * (n - i) as u128 / (i + 1) as u128;
    }
    r
}

/// Every state of `L` boxes whose soliton content is `λ`.
pub fn enumerate_isolevel(l: usize, lambda: &[usize], limit: u128) -> Result<Vec<BbsState>> {
    let balls: usize = lambda.iter().sum();
    if 2 * balls >= l || l >= 64 {
        return Err(Error::PhaseSpace(format!(
            "Σλ = {balls} does not fit in L = {l}"
        )));
    }
    let needed = binomial(l, balls);
    if needed > limit {
        return Err(Error::Budget {
            what: "isolevel enumeration".into(),
            needed,
            limit,
        });
    }
    let mut masks = Vec::with_capacity(needed as usize);
    if balls == 0 {
        masks.push(0u64);
    } else {
        // Gosper's hack over masks with `balls` bits set.
        let mut x: u64 = (1 << balls) - 1;
        while x < 1 << l {
            masks.push(x);
            let c = x & x.wrapping_neg();
            let r = x + c;
            x = (((r ^ x) >> 2) / c) | r;
        }
    }
    let mut out: Vec<BbsState> = masks
        .par_iter()
        .filter_map(|&bits| {
            let u = (0..l).map(|i| ((bits >> (l - 1 - i)) & 1) as u8).collect();
            let s = BbsState::new(u).ok()?;
            if s.is_vacuum() {
                return lambda.is_empty().then_some(s);
            }
            (soliton_content(&s).ok()?.lambda == lambda).then_some(s)
        })
        .collect();
    out.sort();
    Ok(out)
}

/// Smallest `t > 0` with `step^t(s) = s`.
pub fn orbit_period(s: &BbsState, limit: u128) -> Result<u128> {
    let mut cur = bbs_step(s).0;
    let mut t: u128 = 1;
    while cur != *s {
        if t >= limit {
            return Err(Error::Budget {
                what: "orbit length".into(),
                needed: t + 1,
                limit,
            });
        }
        cur = bbs_step(&cur).0;
        t += 1;
    }
    Ok(t)
}

/// Order of `λ` on `R^g / A Z^g`.
pub fn predicted_period(level: &BbsLevel) -> Result<BigInt> {
    crate::minplus::lattice_order(&level.lattice(), &level.velocity())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::bbs::state::bbs_tm;

    #[test]
    fn worked_example_fits() {
        let s: BbsState = "11100100000".parse().unwrap();
        let level = BbsLevel::new(11, vec![1, 3]).unwrap();
        let z = bbs_fit_z0(&s).unwrap();
        let row0 = theta_state(&level, z.rep(), 0).unwrap();
        let row1 = theta_state(&level, z.rep(), 1).unwrap();
        let expect = |x: &str| -> Vec<Rat> { x.bytes().map(|b| int((b - b'0') as i64)).collect() };
        assert_eq!(row0, expect("11100100000"));
        assert_eq!(row1, expect("00011011000"));
        let next = bbs_fit_z0(&bbs_step(&s).0).unwrap();
        assert!(next
            .difference(&z.translate(&level.velocity()).unwrap())
            .unwrap()
            .is_zero());
        for m in 1..=3 {
            let t = bbs_fit_z0(&bbs_tm(&s, m).unwrap()).unwrap();
            let want = z.translate(&level.carrier_velocity(m)).unwrap();
            assert!(t.difference(&want).unwrap().is_zero(), "m = {m}");
        }
        assert_eq!(bbs_theta_solution(&level, z.rep(), 4, 1).unwrap(), int(1));
    }

    #[test]
    fn counting() {
        let all = enumerate_isolevel(11, &[1, 3], DEFAULT_STATE_LIMIT).unwrap();
        assert_eq!(all.len(), 77);
        assert_eq!(
            enumerate_isolevel(8, &[1, 2], DEFAULT_STATE_LIMIT)
                .unwrap()
                .len(),
            32
        );
        assert_eq!(
            enumerate_isolevel(7, &[1], DEFAULT_STATE_LIMIT)
                .unwrap()
                .len(),
            7
        );
        assert!(matches!(
            enumerate_isolevel(30, &[1, 2, 3], 10),
            Err(Error::Budget { .. })
        ));
    }

    #[test]
    fn orbits() {
        let s: BbsState = "11100100000".parse().unwrap();
        assert_eq!(orbit_period(&s, 1000).unwrap(), 77);
        let level = BbsLevel::new(11, vec![1, 3]).unwrap();
        assert_eq!(predicted_period(&level).unwrap(), BigInt::from(77));
        assert_eq!(orbit_period(&"10000".parse().unwrap(), 100).unwrap(), 5);
        let s = &enumerate_isolevel(8, &[1, 2], DEFAULT_STATE_LIMIT).unwrap()[0];
        let level = BbsLevel::new(8, vec![1, 2]).unwrap();
        assert_eq!(
            BigInt::from(orbit_period(s, 1000).unwrap()),
            predicted_period(&level).unwrap()
        );
    }
}
