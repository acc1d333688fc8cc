//! Exact rational scalars, symmetric matrices, PSD certification and LP solving.

pub mod matrix;
pub mod psd;
pub mod rational;
pub mod simplex;

pub use matrix::{schur_complement, SymMatrix};
pub use psd::{psd_check, PsdVerdict};
pub use rational::Rational;
pub use simplex::{
    check_result, lp_solve, CertificateError, Constraint, Direction, LinearProgram, LpResult,
    LpStatus, Sense,
};
