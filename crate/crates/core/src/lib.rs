//! Numerical radius, Davis-Wielandt radius and Davis-Wielandt index of
//! finite-dimensional polyhedral Banach spaces, plus shell sampling on
//! complex `ℓ_p^n`.

// Negated float comparisons are used on purpose so that NaN fails the check.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod certifier;
pub mod error;
pub mod gallery;
pub mod index;
mod linalg;
pub mod lp_shell;
pub mod metrics;
pub mod polytope;
pub mod simplex;

pub use error::{Error, Result};
pub use metrics::{Operator, RadiusKind, RadiusReport, Segment};
pub use polytope::{Functional, Point, PolyhedralSpace};
