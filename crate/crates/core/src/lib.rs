//! Stationary (zero mean curvature) spacelike surfaces in Lorentz 4-space from
//! Weierstrass data `(φ, ψ, dh)`.
//!
//! Everything numeric is generic over [`Real`]; the aliases below fix `f64`.

// Negated comparisons are used on purpose so that NaN fails validation.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod complexkit;
pub mod curvature;
pub mod gallery;
pub mod immersion;
pub mod locus;
pub mod quad;
pub mod scalar;
pub mod weierstrass;

pub use scalar::Real;

pub type Complex = num_complex::Complex<f64>;
pub type ExtComplex = complexkit::ExtComplex<f64>;
pub type CPoly = complexkit::CPoly<f64>;
pub type Rational = complexkit::Rational<f64>;
pub type MeroExpr = complexkit::MeroExpr<f64>;
pub type Divisor = complexkit::Divisor<f64>;
pub type WeierstrassData = weierstrass::WeierstrassData<f64>;
pub type EndReport = weierstrass::EndReport<f64>;
pub type PeriodReport = weierstrass::PeriodReport<f64>;
pub type Admissibility = weierstrass::Admissibility<f64>;
pub type CurvatureReport = curvature::CurvatureReport<f64>;
pub type AnnulusSpec = curvature::AnnulusSpec<f64>;
pub type SearchRegion = locus::SearchRegion<f64>;
pub type MixedSolution = locus::MixedSolution<f64>;
pub type LocusCurve = locus::LocusCurve<f64>;
pub type ImmersionSample = immersion::ImmersionSample<f64>;
pub type PolarGrid = immersion::PolarGrid<f64>;
pub type Example = gallery::Example<f64>;
