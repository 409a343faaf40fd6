//! The tropical theta function `Θ(Z; Ω) = min_{n ∈ Z^g} n·(Ωn/2 + Z)`.
//!
//! Evaluation is exact and certified. `Z` is first reduced by the rounded
//! lattice coordinates (`Z' = Z − Ω·round(Ω⁻¹Z)`), with the offset from
//! quasi-periodicity carried along. For the reduced argument every minimizer
//! lies in the ellipsoid `(n − c)ᵀΩ(n − c) ≤ r`, where `c = −Ω⁻¹Z'` and `r`
//! is the value at the rounded centre. Projecting that ellipsoid onto each
//! axis gives `(n_i − c_i)² ≤ r·(Ω⁻¹)_ii`, and the resulting box is searched
//! exhaustively.

use num_bigint::BigInt;
use num_traits::{ToPrimitive, Zero};

use crate::error::{check_dim, Error, Result};
use crate::minplus::lattice::PeriodLattice;
use crate::rat::{abs_sum, dot, floor_int, int, round_half_up, Rat};

pub type IntVec = Vec<i64>;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ThetaValue {
    pub value: Rat,
    /// Every `n` attaining the minimum, sorted lexicographically.
    pub minimizers: Vec<IntVec>,
}

impl ThetaValue {
    /// A unique minimizer means `Θ` is differentiable at the argument.
    pub fn is_generic(&self) -> bool {
        self.minimizers.len() == 1
    }
}

/// `n·(Ωn/2 + Z)`.
pub fn theta_objective(lattice: &PeriodLattice, z: &[Rat], n: &[i64]) -> Result<Rat> {
    check_dim(lattice.genus(), z.len())?;
    check_dim(lattice.genus(), n.len())?;
    let nr: Vec<Rat> = n.iter().map(|&k| int(k)).collect();
    let omega_n = lattice.omega().mul_vec(&nr)?;
    let half = Rat::new(1.into(), 2.into());
    Ok(nr
        .iter()
        .zip(omega_n.iter().zip(z))
        .fold(Rat::zero(), |acc, (ni, (wn, zi))| {
            acc + ni * (wn * &half + zi)
        }))
}

/// Additive offset in `Θ(Z + Ωm) = offset + Θ(Z)`, namely `−m·(Ωm/2 + Z)`.
pub fn theta_quasi_shift(lattice: &PeriodLattice, z: &[Rat], m: &[i64]) -> Result<Rat> {
    Ok(-theta_objective(lattice, z, m)?)
}

pub fn theta(lattice: &PeriodLattice, z: &[Rat]) -> Result<Rat> {
    Ok(theta_eval(lattice, z)?.value)
}

pub fn theta_eval(lattice: &PeriodLattice, z: &[Rat]) -> Result<ThetaValue> {
    let g = lattice.genus();
    check_dim(g, z.len())?;

    // Z = Z' + Ωm with m = round(Ω⁻¹Z).
    let coords = lattice.coordinates(z)?;
    let m: IntVec = coords
        .iter()
        .map(|c| to_i64(round_half_up(c)))
        .collect::<Result<_>>()?;
    let lattice_part = lattice.lattice_vector(&m)?;
    let reduced: Vec<Rat> = z.iter().zip(&lattice_part).map(|(a, b)| a - b).collect();

    let inner = minimize_reduced(lattice, &reduced)?;
    // Θ(Z' + Ωm) = −m·(Ωm/2 + Z') + Θ(Z'), minimizers shift by −m.
    let value = theta_quasi_shift(lattice, &reduced, &m)? + inner.value;
    let mut minimizers: Vec<IntVec> = inner
        .minimizers
        .into_iter()
        .map(|n| n.iter().zip(&m).map(|(a, b)| a - b).collect())
        .collect();
    minimizers.sort();
    Ok(ThetaValue { value, minimizers })
}

/// Coarse certified radius for a reduced argument: every minimizer has
/// `‖n‖∞ ≤ 2·‖Z'‖₁·‖Ω⁻¹‖∞`.
///
/// Follows from `λ_min‖n‖²/2 ≤ −n·Z' ≤ ‖n‖·‖Z'‖` and `1/λ_min ≤ ‖Ω⁻¹‖∞`.
/// The search uses the tighter per-axis ellipsoid bound; this one is kept as
/// an independent sanity bound.
pub fn coarse_radius(lattice: &PeriodLattice, reduced: &[Rat]) -> Result<BigInt> {
    check_dim(lattice.genus(), reduced.len())?;
    let b = lattice.inverse().row_sum_norm();
    Ok(floor_int(&(int(2) * abs_sum(reduced) * b)))
}

fn minimize_reduced(lattice: &PeriodLattice, z: &[Rat]) -> Result<ThetaValue> {
    let g = lattice.genus();
    let centre: Vec<Rat> = lattice.coordinates(z)?.into_iter().map(|c| -c).collect();
    let rounded: Vec<Rat> = centre
        .iter()
        .map(|c| Rat::from_integer(round_half_up(c)))
        .collect();
    let diff: Vec<Rat> = rounded.iter().zip(&centre).map(|(a, b)| a - b).collect();
    let radius = dot(&diff, &lattice.omega().mul_vec(&diff)?);

    let mut ranges = Vec::with_capacity(g);
    for i in 0..g {
        let bound = &radius * &lattice.inverse()[(i, i)];
        ranges.push(axis_range(&centre[i], &bound)?);
    }

    let mut best: Option<Rat> = None;
    let mut minimizers = Vec::new();
    let mut n: IntVec = ranges.iter().map(|r| r.0).collect();
    loop {
        let v = theta_objective(lattice, z, &n)?;
        match &best {
            Some(b) if v > *b => {}
            Some(b) if v == *b => minimizers.push(n.clone()),
            _ => {
                best = Some(v);
                minimizers.clear();
                minimizers.push(n.clone());
            }
        }
        // Odometer over the box.
        let mut i = 0;
        loop {
            if i == g {
                let value = best.expect("box is nonempty");
                return Ok(ThetaValue { value, minimizers });
            }
            if n[i] < ranges[i].1 {
                n[i] += 1;
                break;
            }
            n[i] = ranges[i].0;
            i += 1;
        }
    }
}

/// All integers `k` with `(k − c)² ≤ bound`.
fn axis_range(c: &Rat, bound: &Rat) -> Result<(i64, i64)> {
    let start = to_i64(floor_int(c))?;
    let fits = |k: i64| {
        let d = int(k) - c;
        &d * &d <= *bound
    };
    let mut lo = start;
    while fits(lo - 1) {
        lo -= 1;
    }
    let mut hi = start + 1;
    while fits(hi) {
        hi += 1;
    }
    let hi = hi - 1;
    // The rounded centre always fits, so the range is nonempty; if floor(c)
    // itself is outside, shrink from the left.
    let lo = if fits(lo) { lo } else { lo + 1 };
    if lo > hi {
        return Err(Error::Internal("empty theta search range".into()));
    }
    Ok((lo, hi))
}

fn to_i64(v: BigInt) -> Result<i64> {
    v.to_i64()
        .ok_or_else(|| Error::InvalidArgument("theta argument too large".into()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rat::{ints, rat};

    /// Naive minimum over the box `‖n‖∞ ≤ r`.
    fn brute(lattice: &PeriodLattice, z: &[Rat], r: i64) -> ThetaValue {
        let g = lattice.genus();
        let mut best: Option<Rat> = None;
        let mut mins = Vec::new();
        let mut n = vec![-r; g];
        'outer: loop {
            let v = theta_objective(lattice, z, &n).unwrap();
            match &best {
                Some(b) if v > *b => {}
                Some(b) if v == *b => mins.push(n.clone()),
                _ => {
                    best = Some(v);
                    mins = vec![n.clone()];
                }
            }
            for i in 0..g {
                if n[i] < r {
                    n[i] += 1;
                    continue 'outer;
                }
                n[i] = -r;
            }
            break;
        }
        mins.sort();
        ThetaValue {
            value: best.unwrap(),
            minimizers: mins,
        }
    }

    #[test]
    fn theta_at_zero() {
        for l in [
            PeriodLattice::from_ints(&[&[16]]).unwrap(),
            PeriodLattice::from_ints(&[&[20, -7], &[-7, 14]]).unwrap(),
        ] {
            let z = vec![Rat::zero(); l.genus()];
            let t = theta_eval(&l, &z).unwrap();
            assert_eq!(t.value, Rat::zero());
            assert_eq!(t.minimizers, vec![vec![0; l.genus()]]);
        }
    }

    #[test]
    fn genus_one_examples() {
        let l = PeriodLattice::from_ints(&[&[20]]).unwrap();
        let t = theta_eval(&l, &ints(&[12])).unwrap();
        assert_eq!(t.value, int(-2));
        assert_eq!(t.minimizers, vec![vec![-1]]);
        assert_eq!(brute(&l, &ints(&[12]), 3), t);

        let l = PeriodLattice::from_ints(&[&[16]]).unwrap();
        let t = theta_eval(&l, &ints(&[9])).unwrap();
        assert_eq!(t.value, int(-1));
        assert_eq!(t.minimizers, vec![vec![-1]]);
        assert_eq!(brute(&l, &ints(&[9]), 3), t);
    }

    #[test]
    fn ties_are_reported() {
        // Θ(8; 16): n = 0 and n = -1 both give 0.
        let l = PeriodLattice::from_ints(&[&[16]]).unwrap();
        let t = theta_eval(&l, &ints(&[8])).unwrap();
        assert_eq!(t.value, int(0));
        assert_eq!(t.minimizers, vec![vec![-1], vec![0]]);
        assert!(!t.is_generic());
    }

    #[test]
    fn quasi_shift_examples() {
        let l = PeriodLattice::from_ints(&[&[16]]).unwrap();
        assert_eq!(theta_quasi_shift(&l, &ints(&[9]), &[0]).unwrap(), int(0));
        let off = theta_quasi_shift(&l, &ints(&[9]), &[1]).unwrap();
        assert_eq!(off, int(-17));
        assert_eq!(theta(&l, &ints(&[25])).unwrap(), int(-18));
        assert_eq!(brute(&l, &ints(&[25]), 3).value, int(-18));
        assert_eq!(off + theta(&l, &ints(&[9])).unwrap(), int(-18));

        let l = PeriodLattice::from_ints(&[&[20, -7], &[-7, 14]]).unwrap();
        assert_eq!(
            theta_quasi_shift(&l, &ints(&[0, 0]), &[1, 0]).unwrap(),
            int(-10)
        );
    }

    #[test]
    fn large_arguments_reduce_first() {
        let l = PeriodLattice::from_ints(&[&[9, 2], &[2, 9]]).unwrap();
        let z = vec![rat(10_001, 3), rat(-4_321, 7)];
        let t = theta_eval(&l, &z).unwrap();
        let n = &t.minimizers[0];
        assert_eq!(theta_objective(&l, &z, n).unwrap(), t.value);
        // Compare against brute force centred on the found minimizer.
        let shift: Vec<Rat> = l.lattice_vector(n).unwrap();
        let z2: Vec<Rat> = z.iter().zip(&shift).map(|(a, b)| a + b).collect();
        let local = brute(&l, &z2, 4);
        assert_eq!(local.minimizers, vec![vec![0, 0]]);
    }

    #[test]
    fn dimension_checks() {
        let l = PeriodLattice::from_ints(&[&[16]]).unwrap();
        assert!(theta_eval(&l, &ints(&[1, 2])).is_err());
        assert!(theta_quasi_shift(&l, &ints(&[1]), &[1, 2]).is_err());
    }
}
