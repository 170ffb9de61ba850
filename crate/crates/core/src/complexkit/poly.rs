use std::ops::{Add, Mul, Neg, Sub};

use num_complex::Complex;
use num_traits::Zero;

use crate::scalar::Real;

/// Dense complex polynomial, coefficients in ascending degree.
///
/// The zero polynomial is the empty coefficient vector; otherwise the
/// leading coefficient is nonzero.
#[derive(Clone, Debug, PartialEq)]
pub struct CPoly<T> {
    coeffs: Vec<Complex<T>>,
}

impl<T: Real> CPoly<T> {
    pub fn new(mut coeffs: Vec<Complex<T>>) -> Self {
        while coeffs.last().is_some_and(|c| c.is_zero()) {
            coeffs.pop();
        }
        CPoly { coeffs }
    }

    pub fn from_real(coeffs: &[f64]) -> Self {
        Self::new(coeffs.iter().map(|&x| Complex::new(T::lit(x), T::zero())).collect())
    }

    pub fn zero() -> Self {
        CPoly { coeffs: Vec::new() }
    }

    pub fn one() -> Self {
        Self::constant(Complex::new(T::one(), T::zero()))
    }

    pub fn constant(c: Complex<T>) -> Self {
        Self::new(vec![c])
    }

    /// `c * z^k`
    pub fn monomial(c: Complex<T>, k: usize) -> Self {
        let mut coeffs = vec![Complex::zero(); k + 1];
        coeffs[k] = c;
        Self::new(coeffs)
    }

    /// The identity polynomial `z`.
    pub fn z() -> Self {
        Self::monomial(Complex::new(T::one(), T::zero()), 1)
    }

    /// `z - a`
    pub fn linear(a: Complex<T>) -> Self {
        Self::new(vec![-a, Complex::new(T::one(), T::zero())])
    }

    /// `lead * prod (z - r)`
    pub fn from_roots(lead: Complex<T>, roots: &[Complex<T>]) -> Self {
        roots.iter().fold(Self::constant(lead), |acc, &r| &acc * &Self::linear(r))
    }

    pub fn coeffs(&self) -> &[Complex<T>] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn leading(&self) -> Complex<T> {
        self.coeffs.last().copied().unwrap_or_else(Complex::zero)
    }

    /// Largest coefficient magnitude.
    pub fn norm(&self) -> T {
        self.coeffs.iter().fold(T::zero(), |m, c| m.max(c.norm()))
    }

    /// Index of the lowest nonzero coefficient (order of vanishing at 0).
    pub fn low_order(&self) -> Option<usize> {
        self.coeffs.iter().position(|c| !c.is_zero())
    }

    pub fn eval(&self, z: Complex<T>) -> Complex<T> {
        self.coeffs.iter().rev().fold(Complex::zero(), |acc, &c| acc * z + c)
    }

    /// `sum |c_k| |z|^k`, the natural magnitude against which `eval(z)` is compared.
    pub fn eval_scale(&self, z: Complex<T>) -> T {
        let r = z.norm();
        self.coeffs.iter().rev().fold(T::zero(), |acc, c| acc * r + c.norm())
    }

    pub fn derivative(&self) -> Self {
        Self::new(self.coeffs.iter().enumerate().skip(1).map(|(k, &c)| c * T::from_usize_lossy(k)).collect())
    }

    pub fn scale(&self, s: Complex<T>) -> Self {
        Self::new(self.coeffs.iter().map(|&c| c * s).collect())
    }

    pub fn conj_coeffs(&self) -> Self {
        Self::new(self.coeffs.iter().map(|c| c.conj()).collect())
    }

    /// Multiplies by `z^k`.
    pub fn shift_up(&self, k: usize) -> Self {
        if self.is_zero() {
            return Self::zero();
        }
        let mut coeffs = vec![Complex::zero(); k];
        coeffs.extend_from_slice(&self.coeffs);
        Self::new(coeffs)
    }

    /// Divides by `z^k`, assuming the low `k` coefficients vanish.
    pub fn shift_down(&self, k: usize) -> Self {
        Self::new(self.coeffs.iter().skip(k).copied().collect())
    }

    /// `z^n p(1/z)` for `n >= deg p`.
    pub fn reversed(&self, n: usize) -> Self {
        let mut coeffs = vec![Complex::zero(); n + 1];
        for (k, &c) in self.coeffs.iter().enumerate() {
            coeffs[n - k] = c;
        }
        Self::new(coeffs)
    }

    /// Coefficients of `u -> p(a + u)`.
    pub fn taylor_shift(&self, a: Complex<T>) -> Vec<Complex<T>> {
        let mut c = self.coeffs.clone();
        let n = c.len();
        for i in 0..n {
            for j in (i..n - 1).rev() {
                let t = c[j + 1] * a;
                c[j] += t;
            }
        }
        c
    }

    /// Quotient and remainder of division by `z - a`.
    pub fn deflate(&self, a: Complex<T>) -> (Self, Complex<T>) {
        let n = self.coeffs.len();
        if n == 0 {
            return (Self::zero(), Complex::zero());
        }
        let mut q = vec![Complex::zero(); n - 1];
        let mut acc = Complex::zero();
        for k in (0..n).rev() {
            acc = acc * a + self.coeffs[k];
            if k > 0 {
                q[k - 1] = acc;
            }
        }
        (Self::new(q), acc)
    }

    /// Drops leading coefficients below `tol * norm`.
    pub fn trimmed(&self, tol: T) -> Self {
        let limit = tol * self.norm();
        let mut coeffs = self.coeffs.clone();
        while coeffs.last().is_some_and(|c| c.norm() <= limit) {
            coeffs.pop();
        }
        Self::new(coeffs)
    }

    /// Same polynomial with coefficients below `tol * norm` set to zero.
    pub fn cleaned(&self, tol: T) -> Self {
        let limit = tol * self.norm();
        Self::new(self.coeffs.iter().map(|&c| if c.norm() <= limit { Complex::zero() } else { c }).collect())
    }

    pub fn pow(&self, k: u32) -> Self {
        (0..k).fold(Self::one(), |acc, _| &acc * self)
    }
}

impl<T: Real> Add for &CPoly<T> {
    type Output = CPoly<T>;
    fn add(self, rhs: &CPoly<T>) -> CPoly<T> {
        let n = self.coeffs.len().max(rhs.coeffs.len());
        CPoly::new(
            (0..n)
                .map(|k| {
                    self.coeffs.get(k).copied().unwrap_or_else(Complex::zero)
                        + rhs.coeffs.get(k).copied().unwrap_or_else(Complex::zero)
                })
                .collect(),
        )
    }
}

impl<T: Real> Sub for &CPoly<T> {
    type Output = CPoly<T>;
    fn sub(self, rhs: &CPoly<T>) -> CPoly<T> {
        self + &(-rhs)
    }
}

impl<T: Real> Neg for &CPoly<T> {
    type Output = CPoly<T>;
    fn neg(self) -> CPoly<T> {
        CPoly::new(self.coeffs.iter().map(|&c| -c).collect())
    }
}

impl<T: Real> Mul for &CPoly<T> {
    type Output = CPoly<T>;
    fn mul(self, rhs: &CPoly<T>) -> CPoly<T> {
        if self.is_zero() || rhs.is_zero() {
            return CPoly::zero();
        }
        let mut out = vec![Complex::zero(); self.coeffs.len() + rhs.coeffs.len() - 1];
        for (i, &a) in self.coeffs.iter().enumerate() {
            for (j, &b) in rhs.coeffs.iter().enumerate() {
                out[i + j] += a * b;
            }
        }
        CPoly::new(out)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn cz(re: f64, im: f64) -> Complex<f64> {
        Complex::new(re, im)
    }

    #[test]
    fn trailing_zeros_are_trimmed() {
        let p = CPoly::new(vec![cz(1.0, 0.0), cz(0.0, 0.0)]);
        assert_eq!(p.degree(), Some(0));
        assert!(CPoly::<f64>::new(vec![cz(0.0, 0.0)]).is_zero());
    }

    #[test]
    fn taylor_shift_matches_expansion() {
        // (z)^2 around a = 2: (2+u)^2 = 4 + 4u + u^2
        let p = CPoly::<f64>::from_real(&[0.0, 0.0, 1.0]);
        let s = p.taylor_shift(cz(2.0, 0.0));
        assert_eq!(s, vec![cz(4.0, 0.0), cz(4.0, 0.0), cz(1.0, 0.0)]);
    }

    #[test]
    fn deflation_by_root_leaves_no_remainder() {
        let p = CPoly::from_roots(cz(2.0, 0.0), &[cz(1.0, 1.0), cz(-0.5, 0.0)]);
        let (q, r) = p.deflate(cz(1.0, 1.0));
        assert!(r.norm() < 1e-14);
        assert_eq!(q.degree(), Some(1));
        assert!((q.eval(cz(-0.5, 0.0))).norm() < 1e-14);
    }

    #[test]
    fn reversal_pulls_back_through_inversion() {
        let p = CPoly::<f64>::from_real(&[1.0, 2.0, 3.0]);
        let r = p.reversed(2);
        let w = cz(0.3, -0.7);
        let expect = p.eval(w.inv()) * w * w;
        assert!((r.eval(w) - expect).norm() < 1e-12);
    }
}
