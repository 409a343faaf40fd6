//! Period lattices `Ω Z^g` and points of the torus `R^g / Ω Z^g`.

use std::fmt;
use std::sync::Arc;

use num_bigint::BigInt;
use num_traits::{Signed, Zero};
use serde::{Serialize, Serializer};

use crate::error::{check_dim, Error, Result};
use crate::linalg::Matrix;
use crate::rat::{floor_int, fmt_rat, fmt_vec, lcm_of_denominators, mat_json, Rat};

#[derive(Debug)]
struct Inner {
    omega: Matrix,
    inverse: Matrix,
}

/// A symmetric positive definite rational `g x g` matrix together with its
/// exact inverse. Cheap to clone.
#[derive(Clone)]
pub struct PeriodLattice(Arc<Inner>);

impl PeriodLattice {
    pub fn new(omega: Matrix) -> Result<Self> {
        if !omega.is_square() {
            return Err(Error::DimensionMismatch {
                expected: omega.rows(),
                got: omega.cols(),
            });
        }
        if omega.rows() == 0 {
            return Err(Error::InvalidArgument("period lattice needs g >= 1".into()));
        }
        if !omega.is_symmetric() {
            return Err(Error::NotSymmetric);
        }
        for (i, minor) in omega.leading_principal_minors()?.into_iter().enumerate() {
            if !minor.is_positive() {
                return Err(Error::NotPositiveDefinite {
                    index: i + 1,
                    minor: fmt_rat(&minor),
                });
            }
        }
        let inverse = omega.inverse()?;
        Ok(PeriodLattice(Arc::new(Inner { omega, inverse })))
    }

    pub fn from_ints(rows: &[&[i64]]) -> Result<Self> {
        Self::new(Matrix::from_ints(rows))
    }

    pub fn genus(&self) -> usize {
        self.0.omega.rows()
    }

    pub fn omega(&self) -> &Matrix {
        &self.0.omega
    }

    pub fn inverse(&self) -> &Matrix {
        &self.0.inverse
    }

    /// Coordinates of `z` in the basis given by the columns of `Ω`.
    pub fn coordinates(&self, z: &[Rat]) -> Result<Vec<Rat>> {
        check_dim(self.genus(), z.len())?;
        self.0.inverse.mul_vec(z)
    }

    pub fn lattice_vector(&self, m: &[i64]) -> Result<Vec<Rat>> {
        let m: Vec<Rat> = m.iter().map(|&k| Rat::from_integer(k.into())).collect();
        self.0.omega.mul_vec(&m)
    }

    /// Whether `v` lies in `Ω Z^g`.
    pub fn contains(&self, v: &[Rat]) -> Result<bool> {
        Ok(self.coordinates(v)?.iter().all(Rat::is_integer))
    }

    /// Canonical representative of `z` in the fundamental parallelepiped
    /// `Ω [0,1)^g`.
    pub fn reduce(&self, z: &[Rat]) -> Result<TorusPoint> {
        let coords = self.coordinates(z)?;
        let shift: Vec<Rat> = coords
            .iter()
            .map(|c| Rat::from_integer(floor_int(c)))
            .collect();
        let lattice_part = self.0.omega.mul_vec(&shift)?;
        let rep = z.iter().zip(&lattice_part).map(|(a, b)| a - b).collect();
        Ok(TorusPoint {
            lattice: self.clone(),
            rep,
        })
    }

    /// Smallest `t > 0` with `t v` in `Ω Z^g`.
    pub fn order_of(&self, v: &[Rat]) -> Result<BigInt> {
        Ok(lcm_of_denominators(&self.coordinates(v)?))
    }
}

impl PartialEq for PeriodLattice {
    fn eq(&self, other: &Self) -> bool {
        Arc::ptr_eq(&self.0, &other.0) || self.0.omega == other.0.omega
    }
}

impl Eq for PeriodLattice {}

impl fmt::Debug for PeriodLattice {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "PeriodLattice({:?})", self.0.omega)
    }
}

impl Serialize for PeriodLattice {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        mat_json(&self.0.omega.to_rows()).serialize(s)
    }
}

pub fn torus_reduce(lattice: &PeriodLattice, z: &[Rat]) -> Result<TorusPoint> {
    lattice.reduce(z)
}

/// Minimal `t > 0` with `t v ∈ Ω Z^g`: the lcm of the denominators of `Ω⁻¹ v`.
pub fn lattice_order(lattice: &PeriodLattice, v: &[Rat]) -> Result<BigInt> {
    lattice.order_of(v)
}

/// A point of `R^g / Ω Z^g`, stored by its canonical representative.
#[derive(Clone, PartialEq, Eq)]
pub struct TorusPoint {
    lattice: PeriodLattice,
    rep: Vec<Rat>,
}

impl TorusPoint {
    pub fn lattice(&self) -> &PeriodLattice {
        &self.lattice
    }

    pub fn rep(&self) -> &[Rat] {
        &self.rep
    }

    pub fn translate(&self, v: &[Rat]) -> Result<TorusPoint> {
        check_dim(self.rep.len(), v.len())?;
        let z: Vec<Rat> = self.rep.iter().zip(v).map(|(a, b)| a + b).collect();
        self.lattice.reduce(&z)
    }

    /// Representative of `self - other`; both must live on the same lattice.
    pub fn difference(&self, other: &TorusPoint) -> Result<TorusPoint> {
        if self.lattice != other.lattice {
            return Err(Error::InvalidArgument(
                "torus points on different lattices".into(),
            ));
        }
        let z: Vec<Rat> = self
            .rep
            .iter()
            .zip(&other.rep)
            .map(|(a, b)| a - b)
            .collect();
        self.lattice.reduce(&z)
    }

    pub fn is_zero(&self) -> bool {
        self.rep.iter().all(Zero::is_zero)
    }
}

impl fmt::Debug for TorusPoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} mod {:?}", fmt_vec(&self.rep), self.lattice.omega())
    }
}

impl Serialize for TorusPoint {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let v: Vec<String> = self.rep.iter().map(fmt_rat).collect();
        v.serialize(s)
    }
}
