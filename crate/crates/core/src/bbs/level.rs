use num_bigint::BigInt;
use num_traits::Zero;
use serde::Serialize;

use super::cj::max_index;
use crate::curve::{extract_curve, face_basis, gram, TropCurve};
use crate::error::{Error, Result};
use crate::minplus::{covolume, Hnf, PeriodLattice, Term, TropPoly2};
use crate::rat::{int, Rat};
use crate::toda::{toda_period_matrix, TodaLevel};

/// Isolevel data for strictly increasing soliton lengths `λ`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct BbsLevel {
    #[serde(rename = "L")]
    pub l: usize,
    pub lambda: Vec<usize>,
    pub p: Vec<i64>,
    #[serde(rename = "A")]
    pub a: Vec<Vec<i64>>,
    #[serde(rename = "M")]
    pub m: usize,
}

impl BbsLevel {
    pub fn new(l: usize, lambda: Vec<usize>) -> Result<Self> {
        if lambda.is_empty() || lambda[0] == 0 || lambda.windows(2).any(|w| w[0] >= w[1]) {
            return Err(Error::NonStrictLambda(
                lambda.iter().map(|&v| v as u64).collect(),
            ));
        }
        if 2 * lambda.iter().sum::<usize>() >= l {
            return Err(Error::PhaseSpace(format!(
                "Σλ = {} is not below L/2 = {l}/2",
                lambda.iter().sum::<usize>()
            )));
        }
        let g = lambda.len();
        let li = l as i64;
        let p: Vec<i64> = (0..g)
            .map(|k| li - 2 * lambda.iter().map(|&j| lambda[k].min(j) as i64).sum::<i64>())
            .collect();
        let a = (0..g)
            .map(|i| {
                (0..g)
                    .map(|j| {
                        let d = if i == j { p[i] } else { 0 };
                        d + 2 * lambda[i].min(lambda[j]) as i64
                    })
                    .collect()
            })
            .collect();
        Ok(BbsLevel {
            l,
            lambda,
            p,
            a,
            m: max_index(l),
        })
    }

    pub fn genus(&self) -> usize {
        self.lambda.len()
    }

    pub fn lattice(&self) -> PeriodLattice {
        let rows: Vec<&[i64]> = self.a.iter().map(Vec::as_slice).collect();
        PeriodLattice::from_ints(&rows).expect("A is positive definite")
    }

    /// `|det A|`, the number of integer points of the torus.
    pub fn det(&self) -> BigInt {
        Hnf::new(&self.a).expect("A is nonsingular").covolume()
    }

    /// `C_j = Σ_{i=1}^{g-j} λ_i`.
    pub fn c(&self, j: usize) -> i64 {
        let top = self.genus().saturating_sub(j);
        self.lambda[..top].iter().sum::<usize>() as i64
    }

    pub fn velocity(&self) -> Vec<Rat> {
        self.lambda.iter().map(|&v| int(v as i64)).collect()
    }

    /// `v_m = (min(m, λ_j))_j`.
    pub fn carrier_velocity(&self, m: usize) -> Vec<Rat> {
        self.lambda.iter().map(|&v| int(v.min(m) as i64)).collect()
    }

    pub fn half_p(&self) -> Vec<Rat> {
        self.p
            .iter()
            .map(|&v| Rat::new(v.into(), 2.into()))
            .collect()
    }
}

fn spectral_terms(level: &BbsLevel, top: usize) -> TropPoly2 {
    let l = level.l as i64;
    let mut terms = vec![
        Term::new(Rat::zero(), 0, 2),
        Term::new(Rat::zero(), level.l as u32, 0),
        Term::new(int(l), 0, 0),
    ];
    for j in 0..=top {
        terms.push(Term::new(int(level.c(j)), j as u32, 1));
    }
    TropPoly2::new(terms).expect("nonempty")
}

/// `min(2Y, Y + min(gX, (g-1)X + C_{g-1}, ..., C_0), LX, L)`.
pub fn bbs_spectral(level: &BbsLevel) -> TropPoly2 {
    spectral_terms(level, level.genus())
}

/// The same curve with every `Y + jX + C_j` for `j <= M`.
pub fn bbs_spectral_full(level: &BbsLevel) -> TropPoly2 {
    spectral_terms(level, level.m.max(level.genus()))
}

/// Geometric period matrix in the basis `B̃_k = B_1 + ... + B_k`, faces
/// numbered left to right.
pub fn bbs_curve_period_matrix(level: &BbsLevel) -> Result<PeriodLattice> {
    Ok(bbs_curve(level)?.1)
}

pub fn bbs_curve(level: &BbsLevel) -> Result<(TropCurve, PeriodLattice)> {
    curve_in_basis(level, |k, j| j <= k)
}

/// Same, in the basis `B̃_k = B_1 + ... + B_{g+1-k}`. This is the
/// index-reversed `A`, which only coincides with `A` when `g <= 2`.
pub fn bbs_curve_period_matrix_reversed(level: &BbsLevel) -> Result<PeriodLattice> {
    let g = level.genus();
    Ok(curve_in_basis(level, |k, j| j + k <= g + 1)?.1)
}

fn curve_in_basis(
    level: &BbsLevel,
    member: impl Fn(usize, usize) -> bool,
) -> Result<(TropCurve, PeriodLattice)> {
    let c = extract_curve(&bbs_spectral(level))?;
    let b = face_basis(&c)?;
    let g = level.genus();
    let coeffs: Vec<Vec<i64>> = (1..=g)
        .map(|k| (1..=g).map(|j| i64::from(member(k, j))).collect())
        .collect();
    let lattice = gram(&c, &b.combine(&coeffs)?)?;
    Ok((c, lattice))
}

/// Toda level with `N = g + 1`, `C_1 = 0`, the same `λ` and `C_{N+1} = L`.
pub fn matched_toda_level(level: &BbsLevel) -> Result<TodaLevel> {
    let mut c = vec![Rat::zero()];
    let mut acc = 0i64;
    for &v in &level.lambda {
        acc += v as i64;
        c.push(int(acc));
    }
    c.push(int(level.l as i64));
    TodaLevel::new(c)
}

/// Covolume of the columns of `Ω_Toda` together with `L e_1`, and `det A`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct QuotientCheck {
    pub covolume: String,
    pub det_a: String,
    pub holds: bool,
}

pub fn jacobian_quotient_check(level: &BbsLevel) -> Result<QuotientCheck> {
    let toda = matched_toda_level(level)?;
    let omega = toda_period_matrix(&toda)?;
    let g = level.genus();
    let mut rows = Vec::with_capacity(g);
    for i in 0..g {
        let mut row = Vec::with_capacity(g + 1);
        for j in 0..g {
            let v = &omega.omega()[(i, j)];
            row.push(
                crate::rat::to_i64(v)
                    .ok_or_else(|| Error::Internal("non-integral Toda period".into()))?,
            );
        }
        row.push(if i == 0 { level.l as i64 } else { 0 });
        rows.push(row);
    }
    let cov = covolume(&rows)?;
    let det = level.det();
    Ok(QuotientCheck {
        covolume: cov.to_string(),
        det_a: det.to_string(),
        holds: cov == det,
    })
}

/// Whether `v_1, ..., v_{λ_g}` span `Z^g`.
pub fn carrier_velocities_span(level: &BbsLevel) -> Result<bool> {
    let g = level.genus();
    let top = level.lambda[g - 1];
    let rows: Vec<Vec<i64>> = (0..g)
        .map(|j| (1..=top).map(|m| m.min(level.lambda[j]) as i64).collect())
        .collect();
    Ok(Hnf::new(&rows)?.is_identity())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::Matrix;

    #[test]
    fn level_data() {
        let l = BbsLevel::new(11, vec![1, 3]).unwrap();
        assert_eq!(l.p, vec![7, 3]);
        assert_eq!(l.a, vec![vec![9, 2], vec![2, 9]]);
        assert_eq!(l.m, 5);
        assert_eq!(l.det(), BigInt::from(77));
        let l = BbsLevel::new(8, vec![1, 2]).unwrap();
        assert_eq!(
            (l.p.clone(), l.a.clone()),
            (vec![4, 2], vec![vec![6, 2], vec![2, 6]])
        );
        assert_eq!(l.det(), BigInt::from(32));
        assert!(matches!(
            BbsLevel::new(11, vec![2, 2]),
            Err(Error::NonStrictLambda(_))
        ));
    }

    #[test]
    fn spectral_curve() {
        let l = BbsLevel::new(11, vec![1, 3]).unwrap();
        assert_eq!(
            bbs_spectral(&l),
            "min(2Y, Y+2X, Y+X+1, Y+4, 11X, 11)".parse().unwrap()
        );
        let (c, lattice) = bbs_curve(&l).unwrap();
        assert_eq!(c.genus(), 2);
        assert!(!c.is_smooth().smooth);
        assert_eq!(lattice.omega(), &Matrix::from_ints(&[&[9, 2], &[2, 9]]));
        let full = extract_curve(&bbs_spectral_full(&l)).unwrap();
        assert_eq!(full.vertices(), c.vertices());
    }

    #[test]
    fn genus_one() {
        for l in 3..10 {
            let lev = BbsLevel::new(l, vec![1]).unwrap();
            assert_eq!(lev.a, vec![vec![l as i64]]);
            let (_, lat) = bbs_curve(&lev).unwrap();
            assert_eq!(lat.omega(), &Matrix::from_ints(&[&[l as i64]]));
            assert!(jacobian_quotient_check(&lev).unwrap().holds);
        }
    }

    #[test]
    fn quotient_and_span() {
        let l = BbsLevel::new(11, vec![1, 3]).unwrap();
        let q = jacobian_quotient_check(&l).unwrap();
        assert_eq!((q.covolume.as_str(), q.holds), ("77", true));
        assert!(carrier_velocities_span(&l).unwrap());
        assert!(carrier_velocities_span(&BbsLevel::new(21, vec![2, 3, 5]).unwrap()).unwrap());
    }

    #[test]
    fn genus_three_basis() {
        let l = BbsLevel::new(13, vec![1, 2, 3]).unwrap();
        assert_eq!(l.a, vec![vec![9, 2, 2], vec![2, 7, 4], vec![2, 4, 7]]);
        assert_eq!(bbs_curve_period_matrix(&l).unwrap(), l.lattice());
        let rev = bbs_curve_period_matrix_reversed(&l).unwrap();
        assert_eq!(
            rev.omega(),
            &Matrix::from_ints(&[&[7, 4, 2], &[4, 7, 2], &[2, 2, 9]])
        );
    }
}
