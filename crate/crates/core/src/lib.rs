//! Exact verification of integrality-gap claims for lift-and-project
//! tightenings of the partial vertex cover LP.

pub mod certificate;
pub mod error;
pub mod exact_linalg;
pub mod hierarchy;
pub mod instances;
pub mod lasserre;
pub mod moments;
pub mod sdp_hs;

pub use error::{Error, Result};
pub use exact_linalg::Rational;
