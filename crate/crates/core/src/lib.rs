//! q-gamma, q-digamma and q-polygamma functions for real `q > 0`, with
//! certified truncation bounds, root finding for the associated special
//! points, independent cross-check evaluators, and a grid harness for the
//! inequalities these functions satisfy.

pub mod classical;
pub mod error;
pub mod eval;
pub mod oracle;
pub mod point;
pub mod roots;
pub mod sum;
pub mod verify;

pub use classical::{classical_ln_gamma, classical_psi, EULER_GAMMA};
pub use error::{Error, Result};
pub use eval::{gamma_q, log_gamma_q, psi_all, psi_q, psi_q_deriv, psi_q_order, PsiSet};
pub use point::{Branch, DerivOrder, EvalConfig, Evaluation, QPoint};
pub use roots::{
    find_j_boundary, find_p0, find_x_q, find_y_q, find_z_q, q0_closed_form, solve_bracketed, Bracket, Constants,
    RootResult,
};
pub use oracle::{fd_derivative, product_gamma_oracle, series_tail_bound, OracleConfig, OracleValue};
pub use verify::{
    eval_statistic, membership_i, membership_j, verify_all, verify_property, GridSpec, PropertyId, PropertyReport, StatId,
    StatParam, Verdict, VerifyOutcome,
};
