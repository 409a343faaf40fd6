//! Integer lattices given by generator columns: Hermite normal form, the
//! quotient `Z^g / A Z^k`, and its covolume.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};

/// Lower-triangular column Hermite normal form `H = A U` of a full-rank
/// `g x k` integer matrix (`k >= g`), truncated to its first `g` columns.
///
/// The diagonal is positive and every entry left of the diagonal lies in
/// `[0, H_ii)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Hnf {
    h: Vec<Vec<BigInt>>,
}

impl Hnf {
    /// `rows` lists the rows of the generator matrix; its columns generate
    /// the lattice.
    pub fn new(rows: &[Vec<i64>]) -> Result<Self> {
        let g = rows.len();
        let k = rows.first().map_or(0, Vec::len);
        if g == 0 {
            return Err(Error::InvalidArgument("empty generator matrix".into()));
        }
        if rows.iter().any(|r| r.len() != k) {
            return Err(Error::InvalidArgument("ragged generator matrix".into()));
        }
        if k < g {
            return Err(Error::SingularMatrix);
        }
        // Stored column-major: cols[j][i].
        let mut cols: Vec<Vec<BigInt>> = (0..k)
            .map(|j| rows.iter().map(|r| BigInt::from(r[j])).collect())
            .collect();

        for i in 0..g {
            for j in i + 1..k {
                if cols[j][i].is_zero() {
                    continue;
                }
                // Replace (col_i, col_j) by a unimodular combination that
                // puts gcd(a, b) in row i of col_i and zero in col_j.
                let a = cols[i][i].clone();
                let b = cols[j][i].clone();
                let e = a.extended_gcd(&b);
                let (d, x, y) = (e.gcd, e.x, e.y);
                let (ad, bd) = (&a / &d, &b / &d);
                let ci = cols[i].clone();
                let cj = cols[j].clone();
                for r in 0..g {
                    cols[i][r] = &x * &ci[r] + &y * &cj[r];
                    cols[j][r] = &ad * &cj[r] - &bd * &ci[r];
                }
            }
            if cols[i][i].is_zero() {
                return Err(Error::SingularMatrix);
            }
            if cols[i][i].is_negative() {
                for v in cols[i].iter_mut() {
                    *v = -&*v;
                }
            }
            let pivot = cols[i][i].clone();
            for j in 0..i {
                let q = cols[j][i].div_floor(&pivot);
                if q.is_zero() {
                    continue;
                }
                for r in i..g {
                    let delta = &q * &cols[i][r];
                    cols[j][r] -= delta;
                }
            }
        }
        let h = (0..g)
            .map(|i| (0..g).map(|j| cols[j][i].clone()).collect())
            .collect();
        Ok(Hnf { h })
    }

    pub fn dim(&self) -> usize {
        self.h.len()
    }

    /// Row-major entries.
    pub fn rows(&self) -> &[Vec<BigInt>] {
        &self.h
    }

    pub fn diagonal(&self) -> Vec<BigInt> {
        (0..self.dim()).map(|i| self.h[i][i].clone()).collect()
    }

    /// Index of the lattice in `Z^g`.
    pub fn covolume(&self) -> BigInt {
        self.diagonal().iter().product()
    }

    pub fn is_identity(&self) -> bool {
        (0..self.dim()).all(|i| {
            (0..self.dim()).all(|j| {
                if i == j {
                    self.h[i][j].is_one()
                } else {
                    self.h[i][j].is_zero()
                }
            })
        })
    }

    /// The unique representative of `x + lattice` with `0 <= x_i < H_ii`.
    pub fn canonical(&self, x: &[i64]) -> Result<Vec<i64>> {
        crate::error::check_dim(self.dim(), x.len())?;
        let mut v: Vec<BigInt> = x.iter().map(|&a| BigInt::from(a)).collect();
        for i in 0..self.dim() {
            let q = v[i].div_floor(&self.h[i][i]);
            if q.is_zero() {
                continue;
            }
            for r in i..self.dim() {
                let delta = &q * &self.h[r][i];
                v[r] -= delta;
            }
        }
        Ok(v.iter()
            .map(|b| b.to_i64().expect("reduced entry fits"))
            .collect())
    }

    pub fn equivalent(&self, x: &[i64], y: &[i64]) -> Result<bool> {
        Ok(self.canonical(x)? == self.canonical(y)?)
    }

    /// Every canonical representative, in lexicographic order of the
    /// mixed-radix digits (last coordinate fastest).
    pub fn residues(&self, limit: u128) -> Result<Vec<Vec<i64>>> {
        let count = self.covolume();
        let needed = count.to_u128().unwrap_or(u128::MAX);
        if needed > limit {
            return Err(Error::Budget {
                what: "residue enumeration".into(),
                needed,
                limit,
            });
        }
        let radix: Vec<i64> = self
            .diagonal()
            .iter()
            .map(|d| d.to_i64().expect("diagonal fits"))
            .collect();
        let mut out = Vec::with_capacity(needed as usize);
        let mut cur = vec![0i64; radix.len()];
        loop {
            out.push(cur.clone());
            let mut i = radix.len();
            loop {
                if i == 0 {
                    return Ok(out);
                }
                i -= 1;
                cur[i] += 1;
                if cur[i] < radix[i] {
                    break;
                }
                cur[i] = 0;
            }
        }
    }
}

/// Default cap on the number of residues materialized at once.
pub const DEFAULT_RESIDUE_LIMIT: u128 = 1 << 22;

/// `|det A|` for a nonsingular square integer matrix.
pub fn residue_count(a: &[Vec<i64>]) -> Result<BigInt> {
    check_square(a)?;
    Ok(Hnf::new(a)?.covolume())
}

/// One representative per class of `Z^g / A Z^g`.
pub fn residue_enumerate(a: &[Vec<i64>]) -> Result<Vec<Vec<i64>>> {
    check_square(a)?;
    Hnf::new(a)?.residues(DEFAULT_RESIDUE_LIMIT)
}

/// Index in `Z^g` of the lattice spanned by the columns of a `g x k` matrix.
pub fn covolume(generators: &[Vec<i64>]) -> Result<BigInt> {
    Ok(Hnf::new(generators)?.covolume())
}

fn check_square(a: &[Vec<i64>]) -> Result<()> {
    match a.iter().find(|r| r.len() != a.len()) {
        Some(r) => Err(Error::DimensionMismatch {
            expected: a.len(),
            got: r.len(),
        }),
        None => Ok(()),
    }
}
