//! Exact min-plus primitives: tropical polynomials, the tropical theta
//! function and lattice arithmetic on `R^g / Ω Z^g`.

pub mod lattice;
pub mod poly;
pub mod residue;
pub mod theta;

pub use lattice::{lattice_order, torus_reduce, PeriodLattice, TorusPoint};
pub use poly::{trop_eval, Evaluation, Term, TropPoly2};
pub use residue::{covolume, residue_count, residue_enumerate, Hnf};
pub use theta::{theta, theta_eval, theta_objective, theta_quasi_shift, ThetaValue};
