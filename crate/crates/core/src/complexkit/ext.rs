use std::fmt;

use num_complex::Complex;
use serde::ser::{Serialize, SerializeSeq, Serializer};

use crate::scalar::Real;

/// A point of the Riemann sphere: a finite complex number or the point at infinity.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum ExtComplex<T> {
    Finite(Complex<T>),
    Infinity,
}

impl<T: Real> ExtComplex<T> {
    pub fn finite(re: T, im: T) -> Self {
        ExtComplex::Finite(Complex::new(re, im))
    }

    pub fn zero() -> Self {
        ExtComplex::Finite(Complex::new(T::zero(), T::zero()))
    }

    pub fn is_infinite(&self) -> bool {
        matches!(self, ExtComplex::Infinity)
    }

    pub fn as_finite(&self) -> Option<Complex<T>> {
        match *self {
            ExtComplex::Finite(z) => Some(z),
            ExtComplex::Infinity => None,
        }
    }

    pub fn conj(&self) -> Self {
        match *self {
            ExtComplex::Finite(z) => ExtComplex::Finite(z.conj()),
            ExtComplex::Infinity => ExtComplex::Infinity,
        }
    }

    /// Chordal distance on the unit sphere, in `[0, 2]`.
    pub fn chordal_distance(&self, other: &Self) -> T {
        let two = T::lit(2.0);
        match (*self, *other) {
            (ExtComplex::Infinity, ExtComplex::Infinity) => T::zero(),
            (ExtComplex::Finite(z), ExtComplex::Infinity) | (ExtComplex::Infinity, ExtComplex::Finite(z)) => {
                two / (T::one() + z.norm_sqr()).sqrt()
            }
            (ExtComplex::Finite(a), ExtComplex::Finite(b)) => {
                two * (a - b).norm() / ((T::one() + a.norm_sqr()).sqrt() * (T::one() + b.norm_sqr()).sqrt())
            }
        }
    }

    /// Equality up to a chordal tolerance.
    pub fn approx_eq(&self, other: &Self, tol: T) -> bool {
        self.chordal_distance(other) <= tol
    }
}

impl<T: Real> From<Complex<T>> for ExtComplex<T> {
    fn from(z: Complex<T>) -> Self {
        ExtComplex::Finite(z)
    }
}

impl<T: Real> fmt::Display for ExtComplex<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ExtComplex::Finite(z) => write!(f, "{}", z),
            ExtComplex::Infinity => write!(f, "inf"),
        }
    }
}

/// Serialized as `[re, im]` or the string `"inf"`.
impl<T: Real + Serialize> Serialize for ExtComplex<T> {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        match self {
            ExtComplex::Finite(z) => {
                let mut seq = serializer.serialize_seq(Some(2))?;
                seq.serialize_element(&z.re)?;
                seq.serialize_element(&z.im)?;
                seq.end()
            }
            ExtComplex::Infinity => serializer.serialize_str("inf"),
        }
    }
}
