//! Truncated Laurent series in a local coordinate `u` around a point.

use num_complex::Complex;
use num_traits::Zero;

use crate::scalar::Real;

/// Relative size below which a leading coefficient is treated as an exact zero.
pub const SERIES_ZERO_TOL: f64 = 1e-9;

/// `sum_k coeffs[k] u^(valuation + k)`, known up to (excluding) order
/// `valuation + coeffs.len()`.
#[derive(Clone, Debug, PartialEq)]
pub struct Laurent<T> {
    pub valuation: i32,
    pub coeffs: Vec<Complex<T>>,
}

impl<T: Real> Laurent<T> {
    /// Builds a series from raw Taylor coefficients (starting at `u^start`),
    /// stripping leading coefficients that are zero relative to the largest one.
    /// Returns `None` when every coefficient vanishes.
    pub fn from_taylor(start: i32, raw: &[Complex<T>], terms: usize) -> Option<Self> {
        let scale = raw.iter().fold(T::zero(), |m, c| m.max(c.norm()));
        if scale.is_zero() {
            return None;
        }
        let limit = T::tol(SERIES_ZERO_TOL) * scale;
        let first = raw.iter().position(|c| c.norm() > limit)?;
        let mut coeffs: Vec<Complex<T>> = raw[first..].to_vec();
        coeffs.resize(terms, Complex::zero());
        Some(Laurent { valuation: start + first as i32, coeffs })
    }

    pub fn constant(c: Complex<T>, terms: usize) -> Self {
        let mut coeffs = vec![Complex::zero(); terms];
        coeffs[0] = c;
        Laurent { valuation: 0, coeffs }
    }

    pub fn terms(&self) -> usize {
        self.coeffs.len()
    }

    /// Coefficient of `u^k`, or `None` if `k` lies past the truncation order.
    pub fn coefficient(&self, k: i32) -> Option<Complex<T>> {
        if k < self.valuation {
            return Some(Complex::zero());
        }
        self.coeffs.get((k - self.valuation) as usize).copied()
    }

    pub fn leading(&self) -> Complex<T> {
        self.coeffs[0]
    }

    pub fn mul(&self, rhs: &Self) -> Self {
        let n = self.terms().min(rhs.terms());
        let mut coeffs = vec![Complex::zero(); n];
        for (i, &a) in self.coeffs.iter().enumerate().take(n) {
            for (j, &b) in rhs.coeffs.iter().enumerate().take(n - i) {
                coeffs[i + j] += a * b;
            }
        }
        Laurent { valuation: self.valuation + rhs.valuation, coeffs }
    }

    /// `self / rhs`; `rhs` must have a nonzero leading coefficient.
    pub fn div(&self, rhs: &Self) -> Self {
        let n = self.terms().min(rhs.terms());
        let b0 = rhs.coeffs[0];
        let mut q = vec![Complex::zero(); n];
        for k in 0..n {
            let mut acc = self.coeffs[k];
            for j in 1..=k {
                acc -= rhs.coeffs[j] * q[k - j];
            }
            q[k] = acc / b0;
        }
        Laurent { valuation: self.valuation - rhs.valuation, coeffs: q }
    }

    /// `exp(self)` for a series without a principal part.
    pub fn exp(&self, terms: usize) -> Self {
        assert!(self.valuation >= 0, "exp of a series with a pole");
        // Dense Taylor coefficients a_0..a_{terms-1}.
        let dense: Vec<Complex<T>> =
            (0..terms as i32).map(|k| self.coefficient(k).unwrap_or_else(Complex::zero)).collect();
        let mut e = vec![Complex::zero(); terms];
        e[0] = Complex::new(T::one(), T::zero());
        for n in 1..terms {
            let mut acc = Complex::zero();
            for k in 1..=n {
                acc += dense[k] * e[n - k] * T::from_usize_lossy(k);
            }
            e[n] = acc / T::from_usize_lossy(n);
        }
        let c0 = dense[0].exp();
        Laurent { valuation: 0, coeffs: e.into_iter().map(|x| x * c0).collect() }
    }

    pub fn scale(&self, s: Complex<T>) -> Self {
        Laurent { valuation: self.valuation, coeffs: self.coeffs.iter().map(|&c| c * s).collect() }
    }

    /// Re-strips leading coefficients that became negligible after arithmetic.
    pub fn renormalized(&self) -> Option<Self> {
        let n = self.terms();
        Self::from_taylor(self.valuation, &self.coeffs, n).map(|mut s| {
            s.coeffs.truncate(n - (s.valuation - self.valuation) as usize);
            s
        })
    }
}
