//! Quadrature primitives: periodic trapezoid with node doubling, and adaptive
//! Gauss–Kronrod on straight segments.

use std::ops::{Add, Mul, Sub};

use num_complex::Complex;
use num_traits::Zero;

use crate::scalar::Real;

/// Values that can be accumulated by a quadrature rule.
pub trait Accum<T: Real>: Copy + Add<Output = Self> + Sub<Output = Self> + Mul<T, Output = Self> {
    fn zero_value() -> Self;
    fn magnitude(&self) -> T;
    fn all_finite(&self) -> bool;
}

impl<T: Real> Accum<T> for Complex<T> {
    fn zero_value() -> Self {
        Complex::zero()
    }
    fn magnitude(&self) -> T {
        self.norm()
    }
    fn all_finite(&self) -> bool {
        crate::scalar::is_finite(*self)
    }
}

/// Fixed-size vector of complex numbers with componentwise arithmetic.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct CVec<T, const N: usize>(pub [Complex<T>; N]);

impl<T: Real, const N: usize> Add for CVec<T, N> {
    type Output = Self;
    fn add(mut self, rhs: Self) -> Self {
        for (a, b) in self.0.iter_mut().zip(rhs.0) {
            *a += b;
        }
        self
    }
}

impl<T: Real, const N: usize> Sub for CVec<T, N> {
    type Output = Self;
    fn sub(mut self, rhs: Self) -> Self {
        for (a, b) in self.0.iter_mut().zip(rhs.0) {
            *a -= b;
        }
        self
    }
}

impl<T: Real, const N: usize> Mul<T> for CVec<T, N> {
    type Output = Self;
    fn mul(mut self, s: T) -> Self {
        for a in self.0.iter_mut() {
            *a *= s;
        }
        self
    }
}

impl<T: Real, const N: usize> Mul<Complex<T>> for CVec<T, N> {
    type Output = Self;
    fn mul(mut self, s: Complex<T>) -> Self {
        for a in self.0.iter_mut() {
            *a *= s;
        }
        self
    }
}

impl<T: Real, const N: usize> Accum<T> for CVec<T, N> {
    fn zero_value() -> Self {
        CVec([Complex::zero(); N])
    }
    fn magnitude(&self) -> T {
        self.0.iter().fold(T::zero(), |m, c| m.max(c.norm()))
    }
    fn all_finite(&self) -> bool {
        self.0.iter().all(|c| crate::scalar::is_finite(*c))
    }
}

#[derive(Clone, Copy, Debug)]
pub struct TrapezoidResult<V> {
    pub value: V,
    pub nodes: usize,
}

#[derive(Clone, Copy, Debug, thiserror::Error)]
#[error("periodic trapezoid did not converge with {nodes} nodes")]
pub struct NonConvergence<V: std::fmt::Debug> {
    pub last: V,
    pub previous: V,
    pub nodes: usize,
}

/// Integrates a `2π`-periodic function over `[0, 2π)`, doubling the node count
/// until two successive estimates differ by at most `abs_tol + rel_tol * |I|`.
pub fn periodic_trapezoid<T, V, F>(
    f: F,
    abs_tol: T,
    rel_tol: T,
    min_nodes: usize,
    max_nodes: usize,
) -> Result<TrapezoidResult<V>, NonConvergence<V>>
where
    T: Real,
    V: Accum<T> + std::fmt::Debug,
    F: Fn(T) -> V,
{
    let mut n = min_nodes.max(4);
    let h = |n: usize| T::TAU() / T::from_usize_lossy(n);
    let mut sum = (0..n).fold(V::zero_value(), |acc, k| acc + f(h(n) * T::from_usize_lossy(k)));
    let mut estimate = sum * h(n);
    let mut previous = estimate;
    while n < max_nodes {
        let step = h(2 * n);
        let odd = (0..n).fold(V::zero_value(), |acc, k| acc + f(step * T::from_usize_lossy(2 * k + 1)));
        sum = sum + odd;
        n *= 2;
        previous = estimate;
        estimate = sum * h(n);
        let diff = (estimate - previous).magnitude();
        if !estimate.all_finite() {
            break;
        }
        if diff <= abs_tol + rel_tol * estimate.magnitude() {
            return Ok(TrapezoidResult { value: estimate, nodes: n });
        }
    }
    Err(NonConvergence { last: estimate, previous, nodes: n })
}

// Kronrod 15-point nodes/weights with embedded Gauss 7-point weights.
const XGK: [f64; 8] = [
    0.991_455_371_120_812_6,
    0.949_107_912_342_758_5,
    0.864_864_423_359_769_1,
    0.741_531_185_599_394_4,
    0.586_087_235_467_691_1,
    0.405_845_151_377_397_2,
    0.207_784_955_007_898_5,
    0.0,
];
const WGK: [f64; 8] = [
    0.022_935_322_010_529_22,
    0.063_092_092_629_978_55,
    0.104_790_010_322_250_2,
    0.140_653_259_715_525_9,
    0.169_004_726_639_267_9,
    0.190_350_578_064_785_4,
    0.204_432_940_075_298_9,
    0.209_482_141_084_727_8,
];
const WG: [f64; 4] =
    [0.129_484_966_168_869_7, 0.279_705_391_489_276_7, 0.381_830_050_505_118_9, 0.417_959_183_673_469_4];

fn gk15<T, V, F>(f: &F, a: T, b: T) -> (V, T)
where
    T: Real,
    V: Accum<T>,
    F: Fn(T) -> V,
{
    let half = (b - a) * T::lit(0.5);
    let mid = (a + b) * T::lit(0.5);
    let fc = f(mid);
    let mut kronrod = fc * T::lit(WGK[7]);
    let mut gauss = fc * T::lit(WG[3]);
    for j in 0..7 {
        let dx = half * T::lit(XGK[j]);
        let pair = f(mid - dx) + f(mid + dx);
        kronrod = kronrod + pair * T::lit(WGK[j]);
        if j % 2 == 1 {
            gauss = gauss + pair * T::lit(WG[j / 2]);
        }
    }
    let k = kronrod * half;
    let g = gauss * half;
    (k, (k - g).magnitude())
}

/// Adaptive Gauss–Kronrod (7/15) on `[a, b]` with absolute tolerance `tol`.
/// Refinement also stops once the error estimate reaches rounding level.
pub fn adaptive_gk<T, V, F>(f: F, a: T, b: T, tol: T, max_depth: u32) -> (V, T)
where
    T: Real,
    V: Accum<T>,
    F: Fn(T) -> V,
{
    fn rec<T: Real, V: Accum<T>, F: Fn(T) -> V>(f: &F, a: T, b: T, tol: T, depth: u32) -> (V, T) {
        let (v, err) = gk15(f, a, b);
        let floor = T::epsilon() * T::lit(64.0) * v.magnitude();
        if err <= tol || err <= floor || depth == 0 || !v.all_finite() {
            return (v, err);
        }
        let m = (a + b) * T::lit(0.5);
        let half_tol = tol * T::lit(0.5);
        let (l, el) = rec(f, a, m, half_tol, depth - 1);
        let (r, er) = rec(f, m, b, half_tol, depth - 1);
        (l + r, el + er)
    }
    rec(&f, a, b, tol, max_depth)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn trapezoid_is_spectral_for_periodic_analytic() {
        // integral of exp(cos t) over a period = 2π I0(1)
        let r = periodic_trapezoid(|t: f64| Complex::new(t.cos().exp(), 0.0), 1e-14, 0.0, 8, 1 << 12).unwrap();
        let i0 = 1.266_065_877_752_008_4;
        assert!((r.value.re - 2.0 * std::f64::consts::PI * i0).abs() < 1e-13);
    }

    #[test]
    fn kronrod_integrates_smooth_function() {
        let (v, _) = adaptive_gk(|x: f64| Complex::new(x.sin(), x * x), 0.0, 2.0, 1e-13, 30);
        assert!((v.re - (1.0 - 2f64.cos())).abs() < 1e-13);
        assert!((v.im - 8.0 / 3.0).abs() < 1e-13);
    }
}
