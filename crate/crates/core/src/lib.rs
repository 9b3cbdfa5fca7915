//! Exact integrals of cohomological stable envelopes on the cotangent
//! bundle of a Grassmannian, computed by localization, by a closed formula
//! and by path sums, together with the combinatorics built on them.

pub mod closedform;
pub mod combinat;
pub mod error;
pub mod exactalg;
pub mod geometry;
pub mod localize;
pub mod paths;
pub mod report;
pub mod simplex;
pub mod weightfn;

pub use error::{AlgebraError, EnvelopeError, Result};
