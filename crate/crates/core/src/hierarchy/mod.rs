//! Sherali-Adams style verifiers for the product moment vector and the
//! explicit level-1 lifted LP.

mod pairs;
mod sa_lp;
mod verify;

pub use pairs::{Pair, PairEnumerator};
pub use sa_lp::{generate_sa1_lp, generate_sa1_lp_with_cap, DEFAULT_SA1_VAR_CAP};
pub use verify::{
    canonical_p, evaluate_constraint, homogenized_rows, verify_sa, verify_sap, verify_xyn_family,
    HomogenizedRow, SaParams, SaVerdict, Sample, Violation,
};
