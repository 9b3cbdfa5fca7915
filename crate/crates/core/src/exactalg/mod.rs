//! Exact arithmetic: rationals, sparse polynomials, canonical rational
//! functions and truncated power series.

pub mod gcd;
pub mod linsum;
pub mod monomial;
pub mod parse;
pub mod poly;
pub mod ratfunc;
pub mod series;
pub mod varset;

pub use gcd::poly_gcd;
pub use linsum::LinearFractionSum;
pub use monomial::Monomial;
pub use parse::{parse_poly, parse_rational};
pub use poly::{product, rat, ratio, Coeff, MultiPoly};
pub use ratfunc::{rational_limit_at_zero, RationalFunction, Substitution};
pub use series::TruncatedSeries;
pub use varset::VarSet;
