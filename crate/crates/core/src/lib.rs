//! Tropical curves, tropical theta functions and two integrable
//! piecewise-linear systems built on them: the tropical periodic Toda
//! lattice and the periodic box-ball system.

#![allow(clippy::needless_range_loop)]

pub mod bbs;
pub mod cli;
pub mod curve;
pub mod error;
pub mod linalg;
pub mod minplus;
pub mod rat;
pub mod toda;
pub mod verify;

pub use error::{Error, Result};
pub use rat::Rat;
