//! The mixed equation `φ(z) = conj ψ(z)`: damped Newton on `ℝ²`, tracing of the
//! equal-module locus `|L| = |R|` with the argument gap `δ = arg R − arg L`, and
//! the two lemmas on `(z̄ − ā)(z − b) = z^{m+1}/z̄^m`.

use std::fmt::Write as _;

use num_complex::Complex;
use num_traits::{One, Zero};
use rayon::prelude::*;
use serde::Serialize;

use crate::complexkit::{CPoly, ExprError, ExtComplex, MeroExpr, Rational};
use crate::scalar::{is_finite, Real};
use crate::weierstrass::WeierstrassData;

/// Residual accepted for a solution of the mixed equation (scaled down by
/// [`MixedEquation::residual_scale`] when that is below 1).
pub const SOLUTION_TOL: f64 = 1e-9;
/// Solutions closer than this are merged.
pub const DEDUP_RADIUS: f64 = 1e-6;
pub const NEWTON_MAX_ITER: usize = 50;
/// Newton stops once the step is below this (relative to `max(1, |z|)`).
pub const NEWTON_STEP_TOL: f64 = 1e-12;
/// Seeds per axis per decade of the default search annulus.
pub const SEEDS_PER_DECADE: usize = 64;
/// Relative module mismatch allowed on a locus vertex.
pub const LOCUS_MODULE_TOL: f64 = 1e-8;
/// Smallest continuation step.
pub const STEP_FLOOR: f64 = 1e-8;
const MAX_VERTICES: usize = 200_000;

#[derive(Clone, Debug, PartialEq, thiserror::Error)]
pub enum LocusError {
    #[error("invalid search region: {0}")]
    BadRegion(String),
    #[error("|L| = |R| identically: the locus is the whole region")]
    Degenerate,
    #[error("precondition violated: {0}")]
    Precondition(String),
    #[error("no zero of the argument gap found for m = {m}, a = {a}, b = {b}: counterexample candidate, check the implementation")]
    CounterexampleCandidate { m: u32, a: String, b: String },
    #[error(transparent)]
    Expr(#[from] ExprError),
}

/// `hol(z) · conj(anti(z))`.
#[derive(Clone, Debug, PartialEq)]
pub struct MixedTerm<T> {
    pub hol: MeroExpr<T>,
    pub anti: MeroExpr<T>,
}

impl<T: Real> MixedTerm<T> {
    pub fn new(hol: MeroExpr<T>, anti: MeroExpr<T>) -> Self {
        MixedTerm { hol, anti }
    }

    pub fn holomorphic(f: MeroExpr<T>) -> Self {
        MixedTerm { hol: f, anti: MeroExpr::one() }
    }

    pub fn antiholomorphic(f: MeroExpr<T>) -> Self {
        MixedTerm { hol: MeroExpr::one(), anti: f }
    }

    pub fn eval(&self, z: Complex<T>) -> Complex<T> {
        self.hol.eval_raw(z) * self.anti.eval_raw(z).conj()
    }
}

impl<T: Real> From<MeroExpr<T>> for MixedTerm<T> {
    fn from(f: MeroExpr<T>) -> Self {
        MixedTerm::holomorphic(f)
    }
}

fn log_value<T: Real>(f: &MeroExpr<T>, z: Complex<T>) -> Complex<T> {
    let r = f.rat().eval_raw(z).ln();
    if f.is_algebraic() {
        r
    } else {
        r + f.expo().eval_raw(z)
    }
}

fn wrap<T: Real>(x: T) -> T {
    let tau = T::TAU();
    let mut y = x - tau * (x / tau).round();
    if y > T::PI() {
        y -= tau;
    } else if y <= -T::PI() {
        y += tau;
    }
    y
}

/// `L(z) = R(z)` with `L, R` mixed terms, prepared for Newton and tracing.
#[derive(Clone, Debug)]
pub struct MixedEquation<T> {
    pub lhs: MixedTerm<T>,
    pub rhs: MixedTerm<T>,
    d: [MeroExpr<T>; 4],
    logd: [Rational<T>; 4],
}

impl<T: Real> MixedEquation<T> {
    pub fn new(lhs: MixedTerm<T>, rhs: MixedTerm<T>) -> Result<Self, ExprError> {
        let parts = [&lhs.hol, &lhs.anti, &rhs.hol, &rhs.anti];
        let d = parts.map(|f| f.derivative());
        let logd = [
            parts[0].log_derivative()?,
            parts[1].log_derivative()?,
            parts[2].log_derivative()?,
            parts[3].log_derivative()?,
        ];
        Ok(MixedEquation { lhs, rhs, d, logd })
    }

    /// `φ(z) = conj ψ(z)`.
    pub fn regularity(data: &WeierstrassData<T>) -> Result<Self, ExprError> {
        Self::new(MixedTerm::holomorphic(data.phi.clone()), MixedTerm::antiholomorphic(data.psi.clone()))
    }

    /// `F = L − R`.
    pub fn residual(&self, z: Complex<T>) -> Complex<T> {
        self.lhs.eval(z) - self.rhs.eval(z)
    }

    /// Real Jacobian of `(Re F, Im F)` with respect to `(u, v)`, `z = u + iv`.
    pub fn jacobian(&self, z: Complex<T>) -> [[T; 2]; 2] {
        let [f1, g1, f2, g2] = [&self.lhs.hol, &self.lhs.anti, &self.rhs.hol, &self.rhs.anti].map(|f| f.eval_raw(z));
        let [d1, e1, d2, e2] = [0, 1, 2, 3].map(|k| self.d[k].eval_raw(z));
        let fz = d1 * g1.conj() - d2 * g2.conj();
        let fzb = f1 * e1.conj() - f2 * e2.conj();
        let fu = fz + fzb;
        let fv = Complex::new(T::zero(), T::one()) * (fz - fzb);
        [[fu.re, fv.re], [fu.im, fv.im]]
    }

    /// `ln|L| − ln|R|`.
    pub fn module_gap(&self, z: Complex<T>) -> T {
        let l = log_value(&self.lhs.hol, z).re + log_value(&self.lhs.anti, z).re;
        let r = log_value(&self.rhs.hol, z).re + log_value(&self.rhs.anti, z).re;
        l - r
    }

    /// Gradient of [`Self::module_gap`] as `(∂u, ∂v)` packed in a complex number.
    pub fn module_gap_gradient(&self, z: Complex<T>) -> Complex<T> {
        let [a, b, c, d] = [0, 1, 2, 3].map(|k| self.logd[k].eval_raw(z));
        (a + b - c - d).conj()
    }

    /// Principal value of `arg R − arg L`.
    pub fn argument_gap(&self, z: Complex<T>) -> T {
        let l = log_value(&self.lhs.hol, z).im - log_value(&self.lhs.anti, z).im;
        let r = log_value(&self.rhs.hol, z).im - log_value(&self.rhs.anti, z).im;
        wrap(r - l)
    }

    fn singular_points(&self) -> Vec<ExtComplex<T>> {
        [&self.lhs.hol, &self.lhs.anti, &self.rhs.hol, &self.rhs.anti]
            .iter()
            .flat_map(|f| f.singular_points())
            .collect()
    }

    /// Levenberg–Marquardt-damped Newton from `seed`.
    pub fn newton(&self, seed: Complex<T>) -> Option<(Complex<T>, T)> {
        let mut z = seed;
        let mut f = self.residual(z);
        if !is_finite(f) {
            return None;
        }
        let mut mu = T::lit(1e-12);
        let step_tol = T::tol(NEWTON_STEP_TOL);
        for _ in 0..NEWTON_MAX_ITER {
            if f.norm() == T::zero() {
                break;
            }
            let j = self.jacobian(z);
            // JᵀJ and Jᵀ F
            let a11 = j[0][0] * j[0][0] + j[1][0] * j[1][0];
            let a12 = j[0][0] * j[0][1] + j[1][0] * j[1][1];
            let a22 = j[0][1] * j[0][1] + j[1][1] * j[1][1];
            let b1 = j[0][0] * f.re + j[1][0] * f.im;
            let b2 = j[0][1] * f.re + j[1][1] * f.im;
            let scale = (a11 + a22).max(T::min_positive_value());
            let mut accepted = false;
            let mut step = Complex::zero();
            for _ in 0..12 {
                let damp = mu * scale;
                let (m11, m22) = (a11 + damp, a22 + damp);
                let det = m11 * m22 - a12 * a12;
                if det == T::zero() || !det.is_finite() {
                    mu *= T::lit(10.0);
                    continue;
                }
                let du = -(m22 * b1 - a12 * b2) / det;
                let dv = -(m11 * b2 - a12 * b1) / det;
                step = Complex::new(du, dv);
                let fz = self.residual(z + step);
                if is_finite(fz) && fz.norm() < f.norm() {
                    z += step;
                    f = fz;
                    mu = (mu / T::lit(10.0)).max(T::lit(1e-15));
                    accepted = true;
                    break;
                }
                mu *= T::lit(10.0);
            }
            if !accepted || step.norm() <= step_tol * z.norm().max(T::one()) {
                break;
            }
        }
        let r = f.norm();
        (r <= T::tol(SOLUTION_TOL) * self.residual_scale(z).min(T::one())).then_some((z, r))
    }

    /// `|L| + |R| + ‖J‖ ℓ` with `ℓ = 1e−3 max(1, |z|)`: residuals are judged
    /// against this so that regions where both sides underflow yield no roots.
    pub fn residual_scale(&self, z: Complex<T>) -> T {
        let j = self.jacobian(z);
        let jn = (j[0][0] * j[0][0] + j[0][1] * j[0][1] + j[1][0] * j[1][0] + j[1][1] * j[1][1]).sqrt();
        self.lhs.eval(z).norm() + self.rhs.eval(z).norm() + jn * T::lit(1e-3) * z.norm().max(T::one())
    }

    /// Degree of `F` on the circle `|w − z| = ρ`.
    pub fn winding(&self, z: Complex<T>, rho: T) -> i32 {
        let n = 256;
        let pt = |k: usize| z + Complex::from_polar(rho, T::TAU() * T::from_usize_lossy(k) / T::from_usize_lossy(n));
        let mut total = T::zero();
        let mut prev = self.residual(pt(0)).arg();
        for k in 1..=n {
            let a = self.residual(pt(k % n)).arg();
            total += wrap(a - prev);
            prev = a;
        }
        (total / T::TAU()).round().to_i32().unwrap_or(0)
    }
}

/// Annulus `r_min ≤ |z| ≤ r_max`, `θ_min ≤ arg z ≤ θ_max`, sampled on a
/// log-polar grid of `radial × angular` points.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct SearchRegion<T: Real> {
    pub r_min: T,
    pub r_max: T,
    pub theta_min: T,
    pub theta_max: T,
    pub radial: usize,
    pub angular: usize,
}

impl<T: Real> SearchRegion<T> {
    /// Full annulus with the default density of 64 × 64 seeds per decade.
    pub fn annulus(r_min: T, r_max: T) -> Self {
        let decades = (r_max / r_min).log10().ceil().to_usize().unwrap_or(1).max(1);
        SearchRegion {
            r_min,
            r_max,
            theta_min: T::zero(),
            theta_max: T::TAU(),
            radial: SEEDS_PER_DECADE * decades,
            angular: SEEDS_PER_DECADE,
        }
    }

    pub fn with_resolution(mut self, radial: usize, angular: usize) -> Self {
        self.radial = radial;
        self.angular = angular;
        self
    }

    pub fn is_full_turn(&self) -> bool {
        self.theta_max - self.theta_min >= T::TAU() * (T::one() - T::epsilon())
    }

    pub fn validate(&self) -> Result<(), LocusError> {
        if !(self.r_min > T::zero() && self.r_max > self.r_min) {
            return Err(LocusError::BadRegion(format!(
                "need 0 < r_min < r_max, got {} and {}",
                self.r_min, self.r_max
            )));
        }
        if !(self.theta_max > self.theta_min) {
            return Err(LocusError::BadRegion("empty angular range".into()));
        }
        if self.radial < 16 || self.angular < 16 {
            return Err(LocusError::BadRegion("resolution must be at least 16 per axis".into()));
        }
        Ok(())
    }

    pub fn contains(&self, z: Complex<T>) -> bool {
        let r = z.norm();
        if r < self.r_min || r > self.r_max {
            return false;
        }
        if self.is_full_turn() {
            return true;
        }
        let mut t = z.arg();
        while t < self.theta_min {
            t += T::TAU();
        }
        t <= self.theta_max
    }

    fn grid(&self) -> Vec<Vec<Complex<T>>> {
        let ratio = (self.r_max / self.r_min).ln();
        let full = self.is_full_turn();
        let na = self.angular;
        let span = self.theta_max - self.theta_min;
        (0..self.radial)
            .map(|i| {
                let r = self.r_min * (ratio * T::from_usize_lossy(i) / T::from_usize_lossy(self.radial - 1)).exp();
                (0..na)
                    .map(|j| {
                        let frac = if full {
                            T::from_usize_lossy(j) / T::from_usize_lossy(na)
                        } else {
                            T::from_usize_lossy(j) / T::from_usize_lossy(na - 1)
                        };
                        Complex::from_polar(r, self.theta_min + span * frac)
                    })
                    .collect()
            })
            .collect()
    }
}

/// A solution of the mixed equation.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct MixedSolution<T: Real> {
    pub z: Complex<T>,
    pub residual: T,
    /// `|deg F|` on a small circle around `z`.
    pub multiplicity: u32,
    /// Signed degree; negative when `F` reverses orientation.
    pub winding: i32,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SingularSearch<T: Real> {
    pub solutions: Vec<MixedSolution<T>>,
    pub region: SearchRegion<T>,
    pub warnings: Vec<String>,
}

/// Moves region boundaries off poles and essential points of the equation.
fn shrink_region<T: Real>(eq: &MixedEquation<T>, region: &SearchRegion<T>) -> (SearchRegion<T>, Vec<String>) {
    let mut out = *region;
    let mut warnings = Vec::new();
    let tol = T::lit(1e-9);
    for p in eq.singular_points() {
        if let ExtComplex::Finite(q) = p {
            let r = q.norm();
            if (r - out.r_min).abs() <= tol * out.r_min.max(T::one()) {
                out.r_min *= T::lit(1.001);
                warnings.push(format!("inner radius moved off singular point {q}"));
            }
            if (r - out.r_max).abs() <= tol * out.r_max.max(T::one()) {
                out.r_max *= T::lit(0.999);
                warnings.push(format!("outer radius moved off singular point {q}"));
            }
        }
    }
    (out, warnings)
}

fn finish_solutions<T: Real>(eq: &MixedEquation<T>, mut found: Vec<(Complex<T>, T)>) -> Vec<MixedSolution<T>> {
    found.sort_by(|a, b| (a.0.re, a.0.im).partial_cmp(&(b.0.re, b.0.im)).unwrap_or(std::cmp::Ordering::Equal));
    let radius = T::lit(DEDUP_RADIUS);
    let mut merged: Vec<(Complex<T>, T)> = Vec::new();
    for (z, r) in found {
        match merged.iter_mut().find(|(w, _)| (*w - z).norm() <= radius) {
            Some(slot) => {
                if r < slot.1 {
                    *slot = (z, r);
                }
            }
            None => merged.push((z, r)),
        }
    }
    let zs: Vec<Complex<T>> = merged.iter().map(|m| m.0).collect();
    let poles: Vec<Complex<T>> = eq.singular_points().iter().filter_map(|p| p.as_finite()).collect();
    merged
        .iter()
        .map(|&(z, residual)| {
            let nearest =
                zs.iter().chain(poles.iter()).filter(|w| **w != z).map(|w| (*w - z).norm()).fold(T::infinity(), T::min);
            let rho = (T::lit(1e-3) * z.norm().max(T::one())).min(T::lit(0.3) * nearest);
            let winding = eq.winding(z, rho);
            MixedSolution { z, residual, multiplicity: winding.unsigned_abs(), winding }
        })
        .collect()
}

/// Solves `φ(z) = conj ψ(z)` from every grid seed of `region`.
///
/// Roots are only reported inside the region; roots between grid seeds can be missed.
pub fn find_singular_points<T: Real>(
    data: &WeierstrassData<T>,
    region: &SearchRegion<T>,
) -> Result<SingularSearch<T>, LocusError> {
    let eq = MixedEquation::regularity(data)?;
    solve_mixed(&eq, region)
}

/// Grid-seeded solve of an arbitrary mixed equation.
pub fn solve_mixed<T: Real>(eq: &MixedEquation<T>, region: &SearchRegion<T>) -> Result<SingularSearch<T>, LocusError> {
    region.validate()?;
    let (region, warnings) = shrink_region(eq, region);
    let seeds: Vec<Complex<T>> = region.grid().into_iter().flatten().collect();
    let found: Vec<(Complex<T>, T)> =
        seeds.par_iter().filter_map(|&s| eq.newton(s)).filter(|(z, _)| region.contains(*z)).collect();
    Ok(SingularSearch { solutions: finish_solutions(eq, found), region, warnings })
}

/// Newton from the given seeds only.
pub fn polish_seeds<T: Real>(eq: &MixedEquation<T>, seeds: &[Complex<T>]) -> Vec<MixedSolution<T>> {
    finish_solutions(eq, seeds.iter().filter_map(|&s| eq.newton(s)).collect())
}

// ---------------------------------------------------------------------------
// Equal-module locus

/// A traced component of `|L| = |R|`.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct LocusCurve<T: Real> {
    pub points: Vec<Complex<T>>,
    /// `arg R − arg L`, unwound along the polyline.
    pub delta: Vec<T>,
    pub closed: bool,
    /// The continuation step fell below the floor at one end.
    pub gap: bool,
}

impl<T: Real> LocusCurve<T> {
    /// Total change of `δ` once around a closed curve (a multiple of `2π`).
    pub fn delta_winding(&self, eq: &MixedEquation<T>) -> Option<T> {
        if !self.closed {
            return None;
        }
        let first = *self.points.first()?;
        let last = *self.delta.last()?;
        let close = wrap(eq.argument_gap(first) - eq.argument_gap(*self.points.last()?));
        Some(last + close - self.delta[0])
    }

    /// `δ` values and points around the curve, with the closing vertex repeated.
    fn samples(&self, eq: &MixedEquation<T>) -> Vec<(Complex<T>, T)> {
        let mut out: Vec<(Complex<T>, T)> = self.points.iter().copied().zip(self.delta.iter().copied()).collect();
        if let (true, Some(w)) = (self.closed, self.delta_winding(eq)) {
            out.push((self.points[0], self.delta[0] + w));
        }
        out
    }
}

fn corrector<T: Real>(eq: &MixedEquation<T>, mut z: Complex<T>) -> Option<Complex<T>> {
    for _ in 0..30 {
        let g = eq.module_gap(z);
        if !g.is_finite() {
            return None;
        }
        if g.abs() <= T::tol(1e-13) {
            return Some(z);
        }
        let grad = eq.module_gap_gradient(z);
        let n2 = grad.norm_sqr();
        if !(n2 > T::zero()) || !n2.is_finite() {
            return None;
        }
        z -= grad * (g / n2);
    }
    (eq.module_gap(z).abs() <= T::tol(1e-10)).then_some(z)
}

fn tangent<T: Real>(eq: &MixedEquation<T>, z: Complex<T>) -> Option<Complex<T>> {
    let g = eq.module_gap_gradient(z);
    let n = g.norm();
    (n > T::zero() && n.is_finite()).then(|| Complex::new(T::zero(), T::one()) * g / n)
}

enum Stop {
    Closed,
    Exit,
    Gap,
}

/// Follows the locus from `seed` in direction `sign`, returning the vertices after the seed.
fn follow<T: Real>(
    eq: &MixedEquation<T>,
    region: &SearchRegion<T>,
    seed: Complex<T>,
    h0: T,
    sign: T,
) -> (Vec<Complex<T>>, Stop) {
    let mut pts = Vec::new();
    let mut z = seed;
    let Some(mut dir) = tangent(eq, seed).map(|t| t * sign) else {
        return (pts, Stop::Gap);
    };
    let mut h = h0;
    let floor = T::lit(STEP_FLOOR).max(T::epsilon() * seed.norm() * T::lit(16.0));
    let mut left = false;
    let quarter = T::FRAC_PI_4();
    while pts.len() < MAX_VERTICES {
        let pred = z + dir * h;
        let next = corrector(eq, pred).filter(|w| {
            let d = (*w - z).norm();
            d <= h * T::lit(2.0)
                && d >= h * T::lit(0.25)
                && wrap(eq.argument_gap(*w) - eq.argument_gap(z)).abs() <= quarter
        });
        let Some(w) = next else {
            h *= T::lit(0.5);
            if h < floor {
                return (pts, Stop::Gap);
            }
            continue;
        };
        if !region.contains(w) {
            return (pts, Stop::Exit);
        }
        let Some(mut t) = tangent(eq, w) else {
            return (pts, Stop::Gap);
        };
        if (t * dir.conj()).re < T::zero() {
            t = -t;
        }
        dir = t;
        z = w;
        pts.push(w);
        let dist = (w - seed).norm();
        if dist > h * T::lit(2.0) {
            left = true;
        }
        if left && dist <= h * T::lit(0.5) {
            pts.pop();
            return (pts, Stop::Closed);
        }
        h = (h * T::lit(1.5)).min(h0);
    }
    (pts, Stop::Gap)
}

fn trace_from<T: Real>(eq: &MixedEquation<T>, region: &SearchRegion<T>, seed: Complex<T>) -> (LocusCurve<T>, T) {
    let grad = eq.module_gap_gradient(seed).norm();
    let local = seed.norm().min(if grad > T::zero() { T::one() / grad } else { T::infinity() });
    let h0 = (T::lit(1e-2) * local).max(T::lit(STEP_FLOOR));
    let (fwd, stop) = follow(eq, region, seed, h0, T::one());
    let (points, closed, gap) = match stop {
        Stop::Closed => {
            let mut p = vec![seed];
            p.extend(fwd);
            (p, true, false)
        }
        s => {
            let (bwd, s2) = follow(eq, region, seed, h0, -T::one());
            let mut p: Vec<_> = bwd.into_iter().rev().collect();
            p.push(seed);
            p.extend(fwd);
            (p, false, matches!(s, Stop::Gap) || matches!(s2, Stop::Gap))
        }
    };
    let mut delta = Vec::with_capacity(points.len());
    let mut prev = eq.argument_gap(points[0]);
    delta.push(prev);
    let mut acc = prev;
    for w in &points[1..] {
        let a = eq.argument_gap(*w);
        acc += wrap(a - prev);
        prev = a;
        delta.push(acc);
    }
    (LocusCurve { points, delta, closed, gap }, h0)
}

fn bisect<T: Real>(eq: &MixedEquation<T>, mut a: Complex<T>, mut b: Complex<T>, ga: T) -> Complex<T> {
    let sa = ga > T::zero();
    for _ in 0..80 {
        let m = (a + b) * T::lit(0.5);
        let gm = eq.module_gap(m);
        if gm.abs() <= T::tol(1e-14) {
            return m;
        }
        if (gm > T::zero()) == sa {
            a = m;
        } else {
            b = m;
        }
    }
    (a + b) * T::lit(0.5)
}

/// Traces every component of `|L| = |R|` met by the grid of `region`.
pub fn trace_equal_module_locus<T: Real>(
    lhs: impl Into<MixedTerm<T>>,
    rhs: impl Into<MixedTerm<T>>,
    region: &SearchRegion<T>,
) -> Result<Vec<LocusCurve<T>>, LocusError> {
    let eq = MixedEquation::new(lhs.into(), rhs.into())?;
    trace_equation(&eq, region)
}

pub fn trace_equation<T: Real>(
    eq: &MixedEquation<T>,
    region: &SearchRegion<T>,
) -> Result<Vec<LocusCurve<T>>, LocusError> {
    region.validate()?;
    let grid = region.grid();
    let gaps: Vec<Vec<T>> = grid.par_iter().map(|row| row.iter().map(|z| eq.module_gap(*z)).collect()).collect();
    if gaps.iter().flatten().all(|g| g.abs() <= T::lit(1e-12)) {
        return Err(LocusError::Degenerate);
    }
    let (nr, na) = (grid.len(), grid[0].len());
    let mut seeds = Vec::new();
    let mut edge = |i: usize, j: usize, k: usize, l: usize| {
        let (g1, g2) = (gaps[i][j], gaps[k][l]);
        if g1.is_nan() || g2.is_nan() || (g1 > T::zero()) == (g2 > T::zero()) {
            return;
        }
        if g1.is_finite() {
            seeds.push(bisect(eq, grid[i][j], grid[k][l], g1));
        } else if g2.is_finite() {
            seeds.push(bisect(eq, grid[k][l], grid[i][j], g2));
        }
    };
    for i in 0..nr {
        for j in 0..na {
            if i + 1 < nr {
                edge(i, j, i + 1, j);
            }
            if j + 1 < na {
                edge(i, j, i, j + 1);
            } else if region.is_full_turn() {
                edge(i, j, i, 0);
            }
        }
    }
    let mut curves: Vec<(LocusCurve<T>, T)> = Vec::new();
    for s in seeds {
        if eq.module_gap(s).abs() > T::tol(1e-10) || !region.contains(s) {
            continue;
        }
        let covered = curves.iter().any(|(c, h)| c.points.iter().any(|p| (*p - s).norm() <= *h * T::lit(2.0)));
        if !covered {
            curves.push(trace_from(eq, region, s));
        }
    }
    Ok(curves.into_iter().map(|c| c.0).filter(|c| c.points.len() > 1).collect())
}

/// CSV polyline export: `re,im,delta`, curves separated by a blank line.
pub fn locus_csv<T: Real>(curves: &[LocusCurve<T>]) -> String {
    let mut s = String::from("re,im,delta\n");
    for (k, c) in curves.iter().enumerate() {
        if k > 0 {
            s.push('\n');
        }
        for (p, d) in c.points.iter().zip(&c.delta) {
            let _ = writeln!(s, "{},{},{}", p.re, p.im, d);
        }
    }
    s
}

// ---------------------------------------------------------------------------
// The two lemmas

/// `(z̄ − ā)(z − b) = λ z^{m+1} / z̄^m` as a mixed equation.
pub fn lemma_a1_equation<T: Real>(
    m: u32,
    a: Complex<T>,
    b: Complex<T>,
    lambda: Complex<T>,
) -> Result<MixedEquation<T>, ExprError> {
    let one = Complex::one();
    let lin = |c: Complex<T>| MeroExpr::poly(CPoly::new(vec![-c, one]));
    let lhs = MixedTerm::new(lin(b), lin(a));
    let zpow = MeroExpr::poly(CPoly::monomial(one, m as usize + 1)).scale(lambda);
    let zinv = MeroExpr::from_polys(CPoly::new(vec![one]), CPoly::monomial(one, m as usize))?;
    MixedEquation::new(lhs, MixedTerm::new(zpow, zinv))
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct LemmaA1Witness<T: Real> {
    pub m: u32,
    pub a: Complex<T>,
    pub b: Complex<T>,
    /// `t` with `a + b = −e^{it}`.
    pub t: T,
    /// Solution of the original equation.
    pub solution: MixedSolution<T>,
    /// The same solution in the rotated coordinate `w = z e^{−it}`.
    pub reduced: Complex<T>,
    /// Residual of the rotated equation at `reduced`.
    pub reduced_residual: T,
    /// Locus components traced in the rotated coordinate.
    pub components: usize,
}

/// Finds `z ≠ 0` with `(z̄ − ā)(z − b) = z^{m+1}/z̄^m` for `|a + b| = 1`.
///
/// Rotates to `a + b = −1`, traces `|w − a'||w − b'| = |w|`, looks for a point
/// where `δ` crosses a multiple of `2π`, then polishes with Newton and maps back.
pub fn lemma_a1_witness<T: Real>(m: u32, a: Complex<T>, b: Complex<T>) -> Result<LemmaA1Witness<T>, LocusError> {
    if m == 0 {
        return Err(LocusError::Precondition("m must be a positive integer".into()));
    }
    if a.is_zero() || b.is_zero() {
        return Err(LocusError::Precondition("a and b must be nonzero".into()));
    }
    let s = a + b;
    if (s.norm() - T::one()).abs() > T::lit(1e-9) {
        return Err(LocusError::Precondition(format!("|a + b| = {} is not 1", s.norm())));
    }
    let t = (-s).arg();
    let rot = Complex::from_polar(T::one(), t);
    let (ar, br) = (a / rot, b / rot);
    let lambda = Complex::from_polar(T::one(), t * T::from_usize_lossy(2 * m as usize + 1));
    let reduced_eq = lemma_a1_equation(m, ar, br, lambda)?;
    let original = lemma_a1_equation(m, a, b, Complex::one())?;
    let scale = T::one() + ar.norm() + br.norm();
    let r_min = T::lit(1e-3) * (ar.norm() * br.norm()).min(T::one());
    let region = SearchRegion::annulus(r_min, scale + T::one()).with_resolution(160, 128);
    let curves = trace_equation(&reduced_eq, &region)?;
    let two_pi = T::TAU();
    let mut seeds = Vec::new();
    for c in &curves {
        let samples = c.samples(&reduced_eq);
        for w in samples.windows(2) {
            let (n0, n1) = ((w[0].1 / two_pi).floor(), (w[1].1 / two_pi).floor());
            if n0 != n1 {
                let target = two_pi * n0.max(n1);
                let span = w[1].1 - w[0].1;
                let f = if span == T::zero() { T::lit(0.5) } else { (target - w[0].1) / span };
                seeds.push(w[0].0 + (w[1].0 - w[0].0) * f);
            }
        }
    }
    for seed in seeds {
        let Some((w, rr)) = reduced_eq.newton(seed) else { continue };
        if w.norm() <= r_min {
            continue;
        }
        let z = w * rot;
        let Some((z, res)) = original.newton(z) else { continue };
        if z.norm() <= r_min {
            continue;
        }
        let sol = finish_solutions(&original, vec![(z, res)]).remove(0);
        return Ok(LemmaA1Witness {
            m,
            a,
            b,
            t,
            solution: sol,
            reduced: w,
            reduced_residual: rr,
            components: curves.len(),
        });
    }
    Err(LocusError::CounterexampleCandidate { m, a: a.to_string(), b: b.to_string() })
}

/// Margin on one ray `z = r ω^j`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct RayMargin<T: Real> {
    pub ray: u32,
    /// `inf_{r > 0} (|r ω^j − a|² − r)`.
    pub margin: T,
    /// Where the infimum is reached (`0` when approached as `r → 0`).
    pub argmin: T,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct LemmaA2Verdict<T: Real> {
    pub a: T,
    pub rays: [RayMargin<T>; 3],
    pub margin: T,
    pub no_solution: bool,
}

fn golden_min<T: Real>(f: impl Fn(T) -> T, mut lo: T, mut hi: T) -> (T, T) {
    let g = T::lit(0.5 * (5f64.sqrt() - 1.0));
    let mut x1 = hi - g * (hi - lo);
    let mut x2 = lo + g * (hi - lo);
    let (mut f1, mut f2) = (f(x1), f(x2));
    for _ in 0..200 {
        if (hi - lo).abs() <= T::epsilon() * (T::one() + lo.abs() + hi.abs()) {
            break;
        }
        if f1 < f2 {
            hi = x2;
            x2 = x1;
            f2 = f1;
            x1 = hi - g * (hi - lo);
            f1 = f(x1);
        } else {
            lo = x1;
            x1 = x2;
            f1 = f2;
            x2 = lo + g * (hi - lo);
            f2 = f(x2);
        }
    }
    if f1 < f2 {
        (x1, f1)
    } else {
        (x2, f2)
    }
}

/// Ray margins of `|z − a|² = z³/|z|²` without the sign precondition.
pub fn lemma_a2_margins<T: Real>(a: T) -> [RayMargin<T>; 3] {
    let r_max = T::lit(100.0) * (T::one() + a.abs());
    [0u32, 1, 2].map(|j| {
        let w = Complex::from_polar(T::one(), T::TAU() * T::from_u32(j).unwrap() / T::lit(3.0));
        let f = |r: T| (w * r - Complex::new(a, T::zero())).norm_sqr() - r;
        // Coarse log-spaced scan, then golden-section refinement.
        let n = 4000;
        let lo = T::lit(1e-12);
        let ratio = (r_max / lo).ln();
        let rs: Vec<T> =
            (0..=n).map(|k| lo * (ratio * T::from_usize_lossy(k) / T::from_usize_lossy(n)).exp()).collect();
        let (k, _) = rs.iter().enumerate().fold((0, T::infinity()), |best, (k, r)| {
            let v = f(*r);
            if v < best.1 {
                (k, v)
            } else {
                best
            }
        });
        let a0 = if k == 0 { T::zero() } else { rs[k - 1] };
        let b0 = rs[(k + 1).min(n)];
        let (x, v) = golden_min(f, a0, b0);
        let at_zero = f(T::zero());
        if at_zero <= v {
            RayMargin { ray: j, margin: at_zero, argmin: T::zero() }
        } else {
            RayMargin { ray: j, margin: v, argmin: x }
        }
    })
}

/// For real `a < −1` and `m = 1`: solutions of `|z − a|² = z³/|z|²` lie on the
/// rays `z = r ω^j`; the verdict is "no solution" when each ray margin is positive.
pub fn lemma_a2_check<T: Real>(a: T) -> Result<LemmaA2Verdict<T>, LocusError> {
    if !(-a > T::one()) {
        return Err(LocusError::Precondition(format!("need −a > 1, got a = {a}")));
    }
    let rays = lemma_a2_margins(a);
    let margin = rays.iter().map(|r| r.margin).fold(T::infinity(), T::min);
    Ok(LemmaA2Verdict { a, rays, margin, no_solution: margin > T::zero() })
}

/// Convenience for `f64` callers building Lemma A.1 parameters.
pub fn lemma_a1_params(t: f64, w: Complex<f64>) -> (Complex<f64>, Complex<f64>) {
    let rot = Complex::from_polar(1.0, t);
    (rot * (Complex::new(-0.5, 0.0) + w), rot * (Complex::new(-0.5, 0.0) - w))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gallery::{case5_unchecked, make_example, Family, Params};

    fn c(re: f64, im: f64) -> Complex<f64> {
        Complex::new(re, im)
    }

    fn example(f: Family, p: &[(&str, f64, f64)]) -> WeierstrassData<f64> {
        let mut params = Params::new();
        for (k, re, im) in p {
            params.set(k, *re, *im);
        }
        make_example(f, &params).unwrap().data
    }

    #[test]
    fn jacobian_matches_finite_differences() {
        let d = example(Family::Case5, &[]);
        let eq = MixedEquation::regularity(&d).unwrap();
        let z = c(0.4, -0.7);
        let j = eq.jacobian(z);
        let h = 1e-6;
        let du = (eq.residual(z + c(h, 0.0)) - eq.residual(z - c(h, 0.0))) / (2.0 * h);
        let dv = (eq.residual(z + c(0.0, h)) - eq.residual(z - c(0.0, h))) / (2.0 * h);
        assert!((j[0][0] - du.re).abs() < 1e-7 && (j[1][0] - du.im).abs() < 1e-7);
        assert!((j[0][1] - dv.re).abs() < 1e-7 && (j[1][1] - dv.im).abs() < 1e-7);
    }

    #[test]
    fn enneper_with_positive_c_has_roots_on_circle() {
        let phi = MeroExpr::poly(CPoly::<f64>::from_real(&[0.0, 1.0]));
        let psi = MeroExpr::from_polys(CPoly::from_real(&[4.0]), CPoly::from_real(&[0.0, 1.0])).unwrap();
        let eq = MixedEquation::new(MixedTerm::holomorphic(phi), MixedTerm::antiholomorphic(psi)).unwrap();
        let s = solve_mixed(&eq, &SearchRegion::annulus(0.5, 8.0)).unwrap();
        assert!(!s.solutions.is_empty());
        assert!(s.solutions.iter().all(|r| (r.z.norm() - 2.0).abs() < 1e-6));
    }

    #[test]
    fn catenoid_is_regular() {
        let d = example(Family::Catenoid, &[]);
        let s = find_singular_points(&d, &SearchRegion::annulus(0.01, 100.0)).unwrap();
        assert!(s.solutions.is_empty(), "{:?}", s.solutions);
    }

    #[test]
    fn case5_has_the_four_predicted_roots() {
        // z = r ω^{±1}, r² − 1.5 r + 0.25 = 0
        let d = example(Family::Case5, &[]);
        let s = find_singular_points(&d, &SearchRegion::annulus(1e-3, 1e3)).unwrap();
        assert_eq!(s.solutions.len(), 4, "{:?}", s.solutions);
        let disc = (1.25f64).sqrt();
        let radii = [(1.5 - disc) / 2.0, (1.5 + disc) / 2.0];
        for r in &s.solutions {
            assert!(r.residual <= 1e-9);
            assert!(radii.iter().any(|q| (r.z.norm() - q).abs() < 1e-9));
            assert!((r.z.arg().abs() - 2.0 * std::f64::consts::PI / 3.0).abs() < 1e-9);
            assert_eq!(r.multiplicity, 1);
        }
    }

    #[test]
    fn circle_locus() {
        let l = MeroExpr::poly(CPoly::<f64>::from_real(&[-4.0, 1.0]));
        let curves = trace_equal_module_locus(l, MeroExpr::one(), &SearchRegion::annulus(0.5, 10.0)).unwrap();
        assert_eq!(curves.len(), 1);
        let cv = &curves[0];
        assert!(cv.closed && !cv.gap);
        assert!(cv.points.iter().all(|p| ((p - c(4.0, 0.0)).norm() - 1.0).abs() < 1e-8));
    }

    #[test]
    fn identical_sides_are_degenerate() {
        let l = MeroExpr::poly(CPoly::<f64>::from_real(&[1.0, 1.0]));
        let r = trace_equal_module_locus(l.clone(), l, &SearchRegion::annulus(0.5, 2.0));
        assert_eq!(r, Err(LocusError::Degenerate));
    }

    #[test]
    fn lemma_a1_locus_is_nonempty_and_consistent() {
        let eq = lemma_a1_equation(1, c(-0.5, 0.0), c(-0.5, 0.0), c(1.0, 0.0)).unwrap();
        let curves = trace_equation(&eq, &SearchRegion::annulus(1e-3, 4.0)).unwrap();
        assert!(!curves.is_empty());
        for cv in &curves {
            for p in &cv.points {
                let (l, r): (f64, f64) = (eq.lhs.eval(*p).norm(), eq.rhs.eval(*p).norm());
                assert!((l - r).abs() <= LOCUS_MODULE_TOL * (l + r));
            }
            for w in cv.delta.windows(2) {
                assert!((w[1] - w[0]).abs() < std::f64::consts::PI);
            }
            if let Some(wind) = cv.delta_winding(&eq) {
                let k = wind / std::f64::consts::TAU;
                assert!((k - k.round()).abs() < 1e-3);
            }
        }
    }

    #[test]
    fn lemma_a1_witnesses() {
        for (m, a, b) in [(1, c(-0.5, 0.0), c(-0.5, 0.0)), (2, c(-0.25, 0.0), c(-0.75, 0.0))] {
            let w = lemma_a1_witness(m, a, b).unwrap();
            assert!(w.solution.residual <= 1e-9 && w.solution.z.norm() > 1e-6);
        }
        let e = Complex::from_polar(1.0, std::f64::consts::PI / 5.0);
        let a = -0.3 * e;
        let w = lemma_a1_witness(1, a, -e - a).unwrap();
        assert!(w.solution.residual <= 1e-9);
        assert!(w.reduced_residual <= 1e-9);
    }

    #[test]
    fn lemma_a1_gate() {
        assert!(matches!(lemma_a1_witness(1, c(-0.5, 0.0), c(-0.7, 0.0)), Err(LocusError::Precondition(_))));
    }

    #[test]
    fn lemma_a2_margins_match_closed_form() {
        for a in [-1.01f64, -2.0, -10.0] {
            let v = lemma_a2_check(a).unwrap();
            assert!(v.no_solution);
            assert!((v.rays[0].margin - a * a).abs() < 1e-9);
            let m = (a.abs() - 1.0) * (3.0 * a.abs() + 1.0) / 4.0;
            for j in [1, 2] {
                assert!((v.rays[j].margin - m).abs() < 1e-9 * (1.0 + m), "{a} {:?}", v.rays[j]);
            }
        }
        assert!(matches!(lemma_a2_check(-0.1), Err(LocusError::Precondition(_))));
        assert!(lemma_a2_margins(-0.5)[1].margin < 0.0);
    }

    #[test]
    fn broken_period_case5_still_has_roots() {
        let d = case5_unchecked::<f64>(1, Complex::new(-0.5, 0.0), Complex::new(-0.5, 0.0), Complex::new(0.0, 1.0))
            .unwrap();
        let s = find_singular_points(&d, &SearchRegion::annulus(1e-2, 1e2)).unwrap();
        assert!(!s.solutions.is_empty());
    }
}
