//! The periodic box-ball system and the tropical KdV equation it embeds in.

mod cj;
mod level;
mod solution;
mod state;

pub use cj::{
    bbs_cj, bbs_cj_oracle, bbs_cj_oracle_with, closed_form_cj, max_index, OracleReport,
    DEFAULT_ORACLE_MAX_L,
};
pub use level::{
    bbs_curve, bbs_curve_period_matrix, bbs_curve_period_matrix_reversed, bbs_spectral,
    bbs_spectral_full, carrier_velocities_span, jacobian_quotient_check, matched_toda_level,
    BbsLevel, QuotientCheck,
};
pub use solution::{
    bbs_fit_z0, bbs_theta_solution, enumerate_isolevel, fit_among, orbit_period, predicted_period,
    theta_state, z0_candidates, DEFAULT_STATE_LIMIT,
};
pub use state::{
    arc_crossings, arcs, bbs_step, bbs_tm, kdv_carry, kdv_step, lambda_from_mu, soliton_content,
    Arcs, BbsState, KdvState, SolitonContent,
};
