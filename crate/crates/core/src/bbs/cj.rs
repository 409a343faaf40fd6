//! Conserved quantities `C_0..C_M` of the periodic tropical KdV.

use num_traits::{One, ToPrimitive, Zero};

use super::state::KdvState;
use crate::error::{Error, Result};
use crate::rat::{int, lcm_of_denominators, Rat};

/// Default cap on `L` for the determinant oracle.
pub const DEFAULT_ORACLE_MAX_L: usize = 14;

/// Largest integer strictly below `L/2`.
pub fn max_index(l: usize) -> usize {
    (l.max(1) - 1) / 2
}

#[derive(Clone, Copy, PartialEq, Eq)]
enum Port {
    Up,
    Down,
}

/// Minimum tiling weight for each number `j` of crossing tiles.
///
/// A column carries one of four tiles, described by the port its path
/// segment uses on the left and right boundary:
///
/// | tile | left | right | weight    |
/// |------|------|-------|-----------|
/// | a    | up   | up    | `U_k`     |
/// | b    | down | up    | 0         |
/// | c    | down | down  | `1 - U_k` |
/// | d    | up   | down  | 0         |
///
/// Tilings are cyclic, so the right port of column `L` must match the left
/// port of column 1. Columns carrying `d` form the set `I`; two `d`s can
/// never be adjacent because `d` needs an up port on its left.
pub fn bbs_cj(s: &KdvState) -> Vec<Rat> {
    let l = s.len();
    let m = max_index(l);
    let mut best: Vec<Option<Rat>> = vec![None; m + 1];
    for start in [Port::Up, Port::Down] {
        // dp[port][j]
        let mut dp: [Vec<Option<Rat>>; 2] = [vec![None; m + 1], vec![None; m + 1]];
        dp[start as usize][0] = Some(Rat::zero());
        for u in s.values() {
            let mut next: [Vec<Option<Rat>>; 2] = [vec![None; m + 1], vec![None; m + 1]];
            let mut relax = |port: Port, j: usize, v: Rat| {
                if j > m {
                    return;
                }
                let slot = &mut next[port as usize][j];
                if slot.as_ref().is_none_or(|old| v < *old) {
                    *slot = Some(v);
                }
            };
            for j in 0..=m {
                if let Some(v) = &dp[Port::Up as usize][j] {
                    relax(Port::Up, j, v + u);
                    relax(Port::Down, j + 1, v.clone());
                }
                if let Some(v) = &dp[Port::Down as usize][j] {
                    relax(Port::Up, j, v.clone());
                    relax(Port::Down, j, v + int(1) - u);
                }
            }
            dp = next;
        }
        for (j, v) in dp[start as usize].iter().enumerate() {
            if let Some(v) = v {
                if best[j].as_ref().is_none_or(|b| v < b) {
                    best[j] = Some(v.clone());
                }
            }
        }
    }
    best.into_iter()
        .map(|v| v.expect("every j < L/2 admits a tiling"))
        .collect()
}

/// Laurent polynomial in one variable with `i128` coefficients.
#[derive(Clone, Debug, PartialEq, Eq)]
struct Laurent {
    lo: i64,
    c: Vec<i128>,
}

fn overflow() -> Error {
    Error::Internal("coefficient overflow in the determinant oracle".into())
}

impl Laurent {
    fn zero() -> Self {
        Laurent {
            lo: 0,
            c: Vec::new(),
        }
    }

    fn monomial(coeff: i128, exp: i64) -> Self {
        Laurent {
            lo: exp,
            c: vec![coeff],
        }
        .trimmed()
    }

    fn is_zero(&self) -> bool {
        self.c.is_empty()
    }

    fn trimmed(mut self) -> Self {
        while self.c.last() == Some(&0) {
            self.c.pop();
        }
        let lead = self.c.iter().take_while(|&&v| v == 0).count();
        if lead > 0 {
            self.c.drain(..lead);
            self.lo += lead as i64;
        }
        if self.c.is_empty() {
            self.lo = 0;
        }
        self
    }

    fn hi(&self) -> i64 {
        self.lo + self.c.len() as i64
    }

    fn coeff(&self, e: i64) -> i128 {
        if e < self.lo || e >= self.hi() {
            0
        } else {
            self.c[(e - self.lo) as usize]
        }
    }

    fn combine(&self, other: &Laurent, sign: i128) -> Result<Laurent> {
        if self.is_zero() {
            return other.scale(sign);
        }
        if other.is_zero() {
            return Ok(self.clone());
        }
        let lo = self.lo.min(other.lo);
        let hi = self.hi().max(other.hi());
        let c = (lo..hi)
            .map(|e| {
                other
                    .coeff(e)
                    .checked_mul(sign)
                    .and_then(|v| v.checked_add(self.coeff(e)))
                    .ok_or_else(overflow)
            })
            .collect::<Result<_>>()?;
        Ok(Laurent { lo, c }.trimmed())
    }

    fn add(&self, other: &Laurent) -> Result<Laurent> {
        self.combine(other, 1)
    }

    fn sub(&self, other: &Laurent) -> Result<Laurent> {
        self.combine(other, -1)
    }

    fn scale(&self, k: i128) -> Result<Laurent> {
        let c = self
            .c
            .iter()
            .map(|v| v.checked_mul(k).ok_or_else(overflow))
            .collect::<Result<_>>()?;
        Ok(Laurent { lo: self.lo, c }.trimmed())
    }

    fn mul(&self, other: &Laurent) -> Result<Laurent> {
        if self.is_zero() || other.is_zero() {
            return Ok(Laurent::zero());
        }
        let mut c = vec![0i128; self.c.len() + other.c.len() - 1];
        for (i, a) in self.c.iter().enumerate() {
            if *a == 0 {
                continue;
            }
            for (j, b) in other.c.iter().enumerate() {
                let p = a.checked_mul(*b).ok_or_else(overflow)?;
                c[i + j] = c[i + j].checked_add(p).ok_or_else(overflow)?;
            }
        }
        Ok(Laurent {
            lo: self.lo + other.lo,
            c,
        }
        .trimmed())
    }

    fn halve(&self) -> Result<Laurent> {
        let c = self
            .c
            .iter()
            .map(|v| {
                if v % 2 == 0 {
                    Ok(v / 2)
                } else {
                    Err(Error::Internal("odd coefficient in a y-difference".into()))
                }
            })
            .collect::<Result<_>>()?;
        Ok(Laurent { lo: self.lo, c }.trimmed())
    }
}

/// Coefficients of `det(x·I - A)`, highest degree first, without division.
fn berkowitz(a: &[Vec<Laurent>]) -> Result<Vec<Laurent>> {
    let n = a.len();
    let one = Laurent::monomial(1, 0);
    let mut vect = vec![one.clone(), Laurent::zero().sub(&a[0][0])?];
    for r in 1..n {
        let mut t = vec![one.clone(), Laurent::zero().sub(&a[r][r])?];
        let mut v: Vec<Laurent> = (0..r).map(|i| a[i][r].clone()).collect();
        for step in 0..r {
            let mut dot = Laurent::zero();
            for (j, vj) in v.iter().enumerate() {
                if !a[r][j].is_zero() && !vj.is_zero() {
                    dot = dot.add(&a[r][j].mul(vj)?)?;
                }
            }
            t.push(Laurent::zero().sub(&dot)?);
            if step + 1 < r {
                let mut w = vec![Laurent::zero(); r];
                for (i, wi) in w.iter_mut().enumerate() {
                    for (j, vj) in v.iter().enumerate() {
                        if !a[i][j].is_zero() && !vj.is_zero() {
                            *wi = wi.add(&a[i][j].mul(vj)?)?;
                        }
                    }
                }
                v = w;
            }
        }
        let mut next = vec![Laurent::zero(); r + 2];
        for (i, slot) in next.iter_mut().enumerate() {
            for (j, vj) in vect.iter().enumerate().take(i + 1) {
                if !vj.is_zero() && !t[i - j].is_zero() {
                    *slot = slot.add(&t[i - j].mul(vj)?)?;
                }
            }
        }
        vect = next;
    }
    Ok(vect)
}

/// Full data read off `f(x, y) = det(X(y) + x·I)` after substituting
/// `u_k = s^{d·U_k}`, `δ = s^d`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct OracleReport {
    /// Valuations `C_0..C_M` of the `y·x^j` coefficients.
    pub c: Vec<Rat>,
    /// The `y^2` coefficient is the constant 1.
    pub y2_is_one: bool,
    /// The `y^0` coefficient is `(x + δ)^L`.
    pub y0_is_binomial: bool,
    /// Every `c_j` has coefficients of a single sign.
    pub sign_definite: bool,
    /// No `y·x^j` term with `j > M`, except that for even `L` the
    /// `y·x^{L/2}` coefficient is the constant `(-1)^{L/2}·2`.
    pub beyond_m_ok: bool,
}

pub fn bbs_cj_oracle(s: &KdvState) -> Result<Vec<Rat>> {
    bbs_cj_oracle_with(s, DEFAULT_ORACLE_MAX_L).map(|r| r.c)
}

pub fn bbs_cj_oracle_with(s: &KdvState, max_l: usize) -> Result<OracleReport> {
    let l = s.len();
    if l > max_l {
        return Err(Error::Budget {
            what: "determinant oracle size L".into(),
            needed: l as u128,
            limit: max_l as u128,
        });
    }
    let d = lcm_of_denominators(s.values());
    let exp = |r: &Rat| -> Result<i64> {
        let v = r * Rat::from_integer(d.clone());
        debug_assert!(v.is_integer());
        v.to_integer()
            .to_i64()
            .ok_or_else(|| Error::InvalidArgument("exponent out of range".into()))
    };
    let dd = d
        .to_i64()
        .ok_or_else(|| Error::InvalidArgument("denominator too large".into()))?;
    let u: Vec<i64> = s.values().iter().map(exp).collect::<Result<_>>()?;

    // f(x, y) at y = -1, 0, 1.
    let mut at = Vec::with_capacity(3);
    for y in [-1i128, 0, 1] {
        let corner = if (l - 1).is_multiple_of(2) { y } else { -y };
        let mut sm = vec![vec![Laurent::zero(); l]; l];
        let mut rm = vec![vec![Laurent::zero(); l]; l];
        for k in 0..l {
            sm[k][k] = Laurent::monomial(1, u[k]);
            rm[k][k] = Laurent::monomial(1, dd - u[k]);
            if k + 1 < l {
                sm[k][k + 1] = Laurent::monomial(1, 0);
                rm[k][k + 1] = Laurent::monomial(1, 0);
            }
        }
        let c = Laurent::monomial(corner, 0);
        sm[l - 1][0] = sm[l - 1][0].add(&c)?;
        rm[l - 1][0] = rm[l - 1][0].add(&c)?;
        // -X = -(R S)
        let mut neg = vec![vec![Laurent::zero(); l]; l];
        for i in 0..l {
            for k in 0..l {
                if rm[i][k].is_zero() {
                    continue;
                }
                for j in 0..l {
                    if !sm[k][j].is_zero() {
                        neg[i][j] = neg[i][j].sub(&rm[i][k].mul(&sm[k][j])?)?;
                    }
                }
            }
        }
        let mut coeffs = berkowitz(&neg)?;
        coeffs.reverse(); // index j is the x^j coefficient
        at.push(coeffs);
    }
    let (fm, f0, fp) = (&at[0], &at[1], &at[2]);

    let m = max_index(l);
    let mut c = Vec::with_capacity(m + 1);
    let mut y2_is_one = true;
    let mut y0_is_binomial = true;
    let mut sign_definite = true;
    let mut beyond_m_ok = true;
    let mut binom = num_bigint::BigInt::one();
    for j in 0..=l {
        let lin = fp[j].sub(&fm[j])?.halve()?;
        let quad = fp[j].add(&fm[j])?.halve()?.sub(&f0[j])?;
        let want_quad = if j == 0 {
            Laurent::monomial(1, 0)
        } else {
            Laurent::zero()
        };
        y2_is_one &= quad == want_quad;
        let b = binom.to_i128().ok_or_else(overflow)?;
        y0_is_binomial &= f0[j] == Laurent::monomial(b, dd * (l - j) as i64);
        binom = binom * num_bigint::BigInt::from(l - j) / num_bigint::BigInt::from(j + 1);
        if j > m {
            let expect = if 2 * j == l {
                Laurent::monomial(if j % 2 == 0 { 2 } else { -2 }, 0)
            } else {
                Laurent::zero()
            };
            beyond_m_ok &= lin == expect;
            continue;
        }
        if lin.is_zero() {
            return Err(Error::Internal(format!("coefficient c_{j} vanishes")));
        }
        let pos = lin.c.iter().all(|v| *v >= 0);
        let neg = lin.c.iter().all(|v| *v <= 0);
        sign_definite &= pos || neg;
        c.push(Rat::new(lin.lo.into(), d.clone()));
    }
    Ok(OracleReport {
        c,
        y2_is_one,
        y0_is_binomial,
        sign_definite,
        beyond_m_ok,
    })
}

/// `C_j = Σ_{i=1}^{g-j} λ_i` for `j <= g`, else 0.
pub fn closed_form_cj(l: usize, lambda: &[usize]) -> Vec<Rat> {
    let g = lambda.len();
    (0..=max_index(l))
        .map(|j| {
            let top = g.saturating_sub(j);
            int(lambda[..top].iter().sum::<usize>() as i64)
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::bbs::state::{kdv_step, BbsState};
    use crate::rat::{ints, rat};

    fn k(x: &str) -> KdvState {
        x.parse::<BbsState>().unwrap().to_kdv()
    }

    #[test]
    fn worked_example() {
        let s = k("11100100000");
        assert_eq!(bbs_cj(&s), ints(&[4, 1, 0, 0, 0, 0]));
        let r = bbs_cj_oracle_with(&s, 14).unwrap();
        assert_eq!(r.c, ints(&[4, 1, 0, 0, 0, 0]));
        assert!(r.y2_is_one && r.y0_is_binomial && r.sign_definite && r.beyond_m_ok);
        assert_eq!(closed_form_cj(11, &[1, 3]), ints(&[4, 1, 0, 0, 0, 0]));
    }

    #[test]
    fn small_states() {
        assert_eq!(bbs_cj(&k("00000")), ints(&[0, 0, 0]));
        assert_eq!(bbs_cj(&k("10000")), ints(&[1, 0, 0]));
        assert_eq!(bbs_cj_oracle(&k("10000")).unwrap(), ints(&[1, 0, 0]));
        assert_eq!(bbs_cj_oracle(&k("0")).unwrap(), ints(&[0]));
    }

    #[test]
    fn dp_matches_oracle_up_to_eight() {
        for l in 1..=8 {
            for s in BbsState::all(l) {
                let kv = s.to_kdv();
                let r = bbs_cj_oracle_with(&kv, 14).unwrap();
                assert_eq!(bbs_cj(&kv), r.c, "{s}");
                assert!(r.y2_is_one && r.y0_is_binomial, "{s}");
                assert!(r.sign_definite && r.beyond_m_ok, "{s}");
            }
        }
    }

    #[test]
    fn rational_state() {
        let s = KdvState::new(vec![rat(1, 2), int(0), int(0), rat(1, 2), int(0), int(0)]).unwrap();
        let c = bbs_cj(&s);
        assert_eq!(bbs_cj_oracle(&s).unwrap(), c);
        let mut cur = s;
        for _ in 0..12 {
            cur = kdv_step(&cur).unwrap();
            assert_eq!(bbs_cj(&cur), c);
            assert_eq!(bbs_cj_oracle(&cur).unwrap(), c);
        }
    }

    #[test]
    fn budget() {
        let s = KdvState::new(vec![int(0); 15]).unwrap();
        assert!(matches!(bbs_cj_oracle(&s), Err(Error::Budget { .. })));
    }
}
