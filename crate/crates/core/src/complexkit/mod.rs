//! Polynomials, rational and rational-times-exponential expressions on the
//! extended plane: roots, divisors, derivatives and residues.

mod divisor;
mod expr;
mod ext;
mod poly;
mod residue;
mod roots;
mod series;

pub use divisor::{divisor_of, Divisor, DivisorEntry, DivisorKind};
pub use expr::{ExprError, MeroExpr, Rational};
pub use ext::ExtComplex;
pub use poly::CPoly;
pub use residue::{circle_integral, residue, validate_contour, CONTOUR_MAX_NODES};
pub use roots::{poly_roots, poly_roots_flat, Root, RootError, CLUSTER_TOL};
pub use series::{Laurent, SERIES_ZERO_TOL};
