//! The immersion itself: `x_z`, path integration of the representation formula,
//! conformal factor, loop closure, involution and completeness checks, mesh export.

use std::fmt::Write as _;
use std::io;
use std::path::Path;

use num_complex::Complex;
use num_traits::Zero;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::complexkit::{ExprError, ExtComplex, MeroExpr, Rational};
use crate::quad::{adaptive_gk, periodic_trapezoid, Accum, CVec};
use crate::scalar::{is_finite, Real};
use crate::weierstrass::{pole_order_at, DataError, WeierstrassData};

/// Per-segment absolute tolerance for path integration.
pub const PATH_TOL: f64 = 1e-10;

#[derive(Clone, Debug, PartialEq, thiserror::Error)]
pub enum ImmersionError {
    #[error("x_z is not finite at {0}")]
    Singular(String),
    #[error("data has no involution")]
    NoInvolution,
    #[error("grid is inconsistent: {0}")]
    BadGrid(String),
    #[error("loop integral did not converge")]
    NonConvergence,
    #[error(transparent)]
    Data(#[from] DataError),
    #[error(transparent)]
    Expr(#[from] ExprError),
}

/// `⟨a, b⟩ = a₁b₁ + a₂b₂ + a₃b₃ − a₄b₄`, extended bilinearly to complex vectors.
pub fn lorentz<T: Real>(a: &[Complex<T>; 4], b: &[Complex<T>; 4]) -> Complex<T> {
    a[0] * b[0] + a[1] * b[1] + a[2] * b[2] - a[3] * b[3]
}

/// Real Lorentz product.
pub fn lorentz_real<T: Real>(a: &[T; 4], b: &[T; 4]) -> T {
    a[0] * b[0] + a[1] * b[1] + a[2] * b[2] - a[3] * b[3]
}

/// Precomputed pieces of the data used by every pointwise evaluation.
#[derive(Clone, Debug)]
pub struct Surface<T> {
    pub data: WeierstrassData<T>,
    /// `dh, φ dh, ψ dh, φψ dh`.
    pub forms: [MeroExpr<T>; 4],
    /// `φ'/φ` and `ψ'/ψ`.
    pub log_dphi: Rational<T>,
    pub log_dpsi: Rational<T>,
}

impl<T: Real> Surface<T> {
    pub fn new(data: &WeierstrassData<T>) -> Result<Self, ExprError> {
        Ok(Surface {
            forms: data.forms(),
            log_dphi: data.phi.log_derivative()?,
            log_dpsi: data.psi.log_derivative()?,
            data: data.clone(),
        })
    }

    /// `x_z = (φ+ψ, −i(φ−ψ), 1−φψ, 1+φψ) h'`, built from the four form coefficients
    /// so that pole/zero cancellations are exact.
    pub fn x_z(&self, z: Complex<T>) -> Result<[Complex<T>; 4], ImmersionError> {
        let [c, a, b, d] = [0, 1, 2, 3].map(|k| self.forms[k].eval_raw(z));
        if ![a, b, c, d].into_iter().all(is_finite) {
            return Err(ImmersionError::Singular(z.to_string()));
        }
        let i = Complex::new(T::zero(), T::one());
        Ok([a + b, -i * (a - b), c - d, c + d])
    }

    fn x_z_vec(&self, z: Complex<T>) -> CVec<T, 4> {
        match self.x_z(z) {
            Ok(v) => CVec(v),
            Err(_) => CVec([Complex::new(T::nan(), T::nan()); 4]),
        }
    }

    /// `ln f = ln r(z) + E(z)` for `f = r e^E`, up to a multiple of `2πi`.
    pub fn log_value(f: &MeroExpr<T>, z: Complex<T>) -> Complex<T> {
        let r = f.rat().eval_raw(z).ln();
        if f.is_algebraic() {
            r
        } else {
            r + f.expo().eval_raw(z)
        }
    }

    /// `ln(ψ̄/φ)`, evaluated without forming the exponentials.
    pub fn log_ratio(&self, z: Complex<T>) -> Complex<T> {
        Self::log_value(&self.data.psi, z).conj() - Self::log_value(&self.data.phi, z)
    }

    /// `ln e^{ω} = ln 2|h'(φ − ψ̄)| = ln 2 + ln|φ h'| + ln|1 − ψ̄/φ|`.
    pub fn log_metric_density(&self, z: Complex<T>) -> T {
        let a = self.forms[1].eval_raw(z);
        let lq = self.log_ratio(z);
        let ln2 = T::LN_2();

        if a.is_zero() || !is_finite(a) || !is_finite(lq) {
            // φ = 0 or φ = ∞ at z: use |h'ψ| or |φ h'| directly.
            let b = self.forms[2].eval_raw(z);
            let h = self.forms[0].eval_raw(z);
            let phi = self.data.phi.eval_raw(z);
            let psi = self.data.psi.eval_raw(z);
            if a.is_zero() {
                return ln2 + b.norm().ln();
            }
            ln2 + (h * (phi - psi.conj())).norm().ln()
        } else if lq.re > T::lit(30.0) {
            // |1 − Q| = |Q| |1 − 1/Q|
            let inv = (-lq).exp();
            ln2 + a.norm().ln() + lq.re + (Complex::new(T::one(), T::zero()) - inv).norm().ln()
        } else {
            ln2 + a.norm().ln() + (Complex::new(T::one(), T::zero()) - lq.exp()).norm().ln()
        }
    }

    /// `e^{2ω} = 4|h'|²|φ − ψ̄|²`.
    pub fn conformal_factor(&self, z: Complex<T>) -> T {
        (T::lit(2.0) * self.log_metric_density(z)).exp()
    }

    /// `e^{2ω} = 2⟨x_z, conj x_z⟩` computed from the vector itself.
    pub fn conformal_factor_direct(&self, z: Complex<T>) -> Result<T, ImmersionError> {
        let x = self.x_z(z)?;
        let xb = x.map(|c| c.conj());
        Ok(T::lit(2.0) * lorentz(&x, &xb).re)
    }

    /// `∫ x_z dz` along the segment `[z0, z1]`.
    pub fn segment_integral(&self, z0: Complex<T>, z1: Complex<T>) -> CVec<T, 4> {
        let dz = z1 - z0;
        let f = |s: T| self.x_z_vec(z0 + dz * s) * dz;
        let tol = path_tol(adaptive_gk(f, T::zero(), T::one(), T::zero(), 0).0);
        adaptive_gk(f, T::zero(), T::one(), tol, 40).0
    }

    /// `∫ x_z dz` along the arc `center + r e^{iθ}`, `θ ∈ [θ0, θ1]`.
    pub fn arc_integral(&self, center: Complex<T>, r: T, t0: T, t1: T) -> CVec<T, 4> {
        let i = Complex::new(T::zero(), T::one());
        let f = |t: T| {
            let e = Complex::from_polar(r, t);
            self.x_z_vec(center + e) * (i * e)
        };
        let tol = path_tol(adaptive_gk(f, t0, t1, T::zero(), 0).0);
        adaptive_gk(f, t0, t1, tol, 40).0
    }

    /// `x(z_n) − x(z_0) = 2 Re ∫ x_z dz` along the polyline through `points`.
    pub fn integrate_path(&self, points: &[Complex<T>]) -> Result<[T; 4], ImmersionError> {
        let mut acc = CVec([Complex::zero(); 4]);
        for w in points.windows(2) {
            acc = acc + self.segment_integral(w[0], w[1]);
        }
        finite_position(acc, points.last().copied().unwrap_or_else(Complex::zero))
    }
}

/// `PATH_TOL` scaled by a coarse estimate of the integral, at least `PATH_TOL`.
fn path_tol<T: Real>(coarse: CVec<T, 4>) -> T {
    let m = coarse.magnitude();
    T::tol(PATH_TOL) * if m.is_finite() && m > T::one() { m } else { T::one() }
}

fn finite_position<T: Real>(v: CVec<T, 4>, at: Complex<T>) -> Result<[T; 4], ImmersionError> {
    if !v.0.iter().all(|c| is_finite(*c)) {
        return Err(ImmersionError::Singular(at.to_string()));
    }
    Ok(v.0.map(|c| T::lit(2.0) * c.re))
}

/// `x_z` at `z`.
pub fn x_z<T: Real>(data: &WeierstrassData<T>, z: Complex<T>) -> Result<[Complex<T>; 4], ImmersionError> {
    Surface::new(data)?.x_z(z)
}

/// `|⟨x_z, x_z⟩| / Σ|x_z,k|²`.
pub fn isotropy_residual<T: Real>(x: &[Complex<T>; 4]) -> T {
    let scale = x.iter().fold(T::zero(), |s, c| s + c.norm_sqr());
    if scale.is_zero() {
        return T::zero();
    }
    lorentz(x, x).norm() / scale
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct ImmersionSample<T: Real> {
    pub z: Complex<T>,
    /// Radius of the grid vertex.
    pub u: T,
    /// Angle of the grid vertex.
    pub v: T,
    pub x: [T; 4],
    pub conformal_factor: T,
}

/// Polar grid `center + r e^{iθ}` with geometric radii in `[r_min, r_max]`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct PolarGrid<T: Real> {
    pub center: Complex<T>,
    pub r_min: T,
    pub r_max: T,
    pub radial: usize,
    pub angular: usize,
}

impl<T: Real> PolarGrid<T> {
    pub fn radii(&self) -> Vec<T> {
        let n = self.radial;
        if n == 1 {
            return vec![self.r_min];
        }
        let ratio = (self.r_max / self.r_min).ln();
        (0..n).map(|i| self.r_min * (ratio * T::from_usize_lossy(i) / T::from_usize_lossy(n - 1)).exp()).collect()
    }

    pub fn angles(&self) -> Vec<T> {
        (0..self.angular).map(|j| T::TAU() * T::from_usize_lossy(j) / T::from_usize_lossy(self.angular)).collect()
    }

    fn validate(&self) -> Result<(), ImmersionError> {
        if !(self.r_min > T::zero() && self.r_max >= self.r_min) || self.radial == 0 || self.angular < 3 {
            return Err(ImmersionError::BadGrid(format!(
                "need 0 < r_min <= r_max, radial >= 1, angular >= 3 (got {} {} {} {})",
                self.r_min, self.r_max, self.radial, self.angular
            )));
        }
        Ok(())
    }
}

/// Integrates the representation formula over a polar grid.
///
/// `x(basepoint) = 0`. The basepoint is joined to the vertex at `r_min`, angle 0
/// by a straight segment; a serial pass then integrates along the inner circle
/// and the radial spokes are integrated in parallel. Vertex order is
/// radial-major: index `i * angular + j`.
pub fn immerse_grid<T: Real>(
    data: &WeierstrassData<T>,
    basepoint: Complex<T>,
    grid: &PolarGrid<T>,
) -> Result<Vec<ImmersionSample<T>>, ImmersionError> {
    grid.validate()?;
    let surf = Surface::new(data)?;
    let radii = grid.radii();
    let angles = grid.angles();
    let mut base = Vec::with_capacity(angles.len());
    let first = grid.center + Complex::new(radii[0], T::zero());
    let mut acc = if first == basepoint { CVec([Complex::zero(); 4]) } else { surf.segment_integral(basepoint, first) };
    base.push(acc);
    for w in angles.windows(2) {
        acc = acc + surf.arc_integral(grid.center, radii[0], w[0], w[1]);
        base.push(acc);
    }
    let spokes: Vec<Vec<ImmersionSample<T>>> = angles
        .par_iter()
        .zip(base.par_iter())
        .map(|(&theta, &start)| {
            let dir = Complex::from_polar(T::one(), theta);
            let mut acc = start;
            let mut out = Vec::with_capacity(radii.len());
            for (i, &r) in radii.iter().enumerate() {
                let z = grid.center + dir * r;
                if i > 0 {
                    acc = acc + surf.segment_integral(grid.center + dir * radii[i - 1], z);
                }
                out.push(ImmersionSample {
                    z,
                    u: r,
                    v: theta,
                    x: finite_position(acc, z)?,
                    conformal_factor: surf.conformal_factor(z),
                });
            }
            Ok(out)
        })
        .collect::<Result<_, ImmersionError>>()?;
    let mut samples = Vec::with_capacity(radii.len() * angles.len());
    for i in 0..radii.len() {
        for spoke in &spokes {
            samples.push(spoke[i]);
        }
    }
    Ok(samples)
}

/// `‖2 Re ∮ x_z dz‖` around `|z − center| = radius`.
pub fn loop_closure_residual<T: Real>(
    data: &WeierstrassData<T>,
    center: Complex<T>,
    radius: T,
) -> Result<T, ImmersionError> {
    let surf = Surface::new(data)?;
    let i = Complex::new(T::zero(), T::one());
    let f = |t: T| {
        let e = Complex::from_polar(radius, t);
        surf.x_z_vec(center + e) * (i * e)
    };
    let tol = T::tol(1e-13);
    let r = periodic_trapezoid(f, tol, tol, 32, 1 << 18).map_err(|_| ImmersionError::NonConvergence)?;
    let x = finite_position(r.value, center)?;
    Ok(x.iter().map(|c| *c * *c).sum::<T>().sqrt())
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct InvolutionReport<T: Real> {
    /// `max |φ(I z) − conj ψ(z)|`
    pub phi: T,
    /// `max |ψ(I z) − conj φ(z)|`
    pub psi: T,
    /// `max |h'(I z)/z̄² − conj h'(z)|`
    pub dh: T,
    pub max_residual: T,
    pub samples: usize,
}

/// The involution `I(z) = −1/z̄`.
pub fn involution<T: Real>(z: Complex<T>) -> Complex<T> {
    -Complex::new(T::one(), T::zero()) / z.conj()
}

/// Checks `φ∘I = ψ̄`, `ψ∘I = φ̄` and `I*dh = conj dh` at random points with
/// `|z| ∈ [1/2, 2]`. Residuals are relative to `max(1, |rhs|)`.
pub fn involution_check<T: Real>(
    data: &WeierstrassData<T>,
    samples: usize,
    seed: u64,
) -> Result<InvolutionReport<T>, ImmersionError> {
    if !data.has_involution {
        return Err(ImmersionError::NoInvolution);
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let rel = |a: Complex<T>, b: Complex<T>| (a - b).norm() / b.norm().max(T::one());
    let (mut rp, mut rq, mut rh) = (T::zero(), T::zero(), T::zero());
    let mut taken = 0;
    while taken < samples {
        let r = T::lit(2f64.powf(rng.gen_range(-1.0..1.0)));
        let t = T::lit(rng.gen_range(0.0..std::f64::consts::TAU));
        let z = Complex::from_polar(r, t);
        let iz = involution(z);
        let vals = [
            data.phi.eval_raw(iz),
            data.psi.eval_raw(z),
            data.psi.eval_raw(iz),
            data.phi.eval_raw(z),
            data.dh.eval_raw(iz),
            data.dh.eval_raw(z),
        ];
        if !vals.iter().all(|v| is_finite(*v)) || vals.iter().any(|v| v.norm() > T::lit(1e8)) {
            continue;
        }
        rp = rp.max(rel(vals[0], vals[1].conj()));
        rq = rq.max(rel(vals[2], vals[3].conj()));
        let zb = z.conj();
        rh = rh.max(rel(vals[4] / (zb * zb), vals[5].conj()));
        taken += 1;
    }
    Ok(InvolutionReport { phi: rp, psi: rq, dh: rh, max_residual: rp.max(rq).max(rh), samples })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum CompletenessMethod {
    PoleOrder,
    RayIntegration,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct CompletenessVerdict<T: Real> {
    pub point: ExtComplex<T>,
    pub method: CompletenessMethod,
    pub complete: bool,
    /// Pole order of `x_z dz` (algebraic ends).
    pub pole_order: Option<i32>,
    /// Ratio of the final partial ray length to the first segment, per ray.
    pub ray_growth: Vec<T>,
}

/// Rays and divergence threshold used at essential ends.
pub const COMPLETENESS_RAYS: usize = 8;
pub const DIVERGENCE_RATIO: f64 = 1e6;
const RAY_SEGMENTS: usize = 80;

/// Completeness at an end: pole order `≥ 2` for algebraic ends, ray integration
/// of `e^ω |dz|` for essential ends.
pub fn completeness_check<T: Real>(
    data: &WeierstrassData<T>,
    p: &ExtComplex<T>,
) -> Result<CompletenessVerdict<T>, ImmersionError> {
    if !data.is_essential_at(p) {
        let order = pole_order_at(data, p)?;
        return Ok(CompletenessVerdict {
            point: *p,
            method: CompletenessMethod::PoleOrder,
            complete: order >= 2,
            pole_order: Some(order),
            ray_growth: Vec::new(),
        });
    }
    let surf = Surface::new(data)?;
    let r0 = crate::weierstrass::default_radius(data, p);
    let growth: Vec<T> = (0..COMPLETENESS_RAYS)
        .into_par_iter()
        .map(|k| {
            let theta = T::TAU() * (T::from_usize_lossy(k) + T::lit(0.5)) / T::from_usize_lossy(COMPLETENESS_RAYS);
            let dir = Complex::from_polar(T::one(), theta);
            let point = |t: T| match p {
                ExtComplex::Infinity => dir * t,
                ExtComplex::Finite(c) => *c + dir * t,
            };
            // Geometric segments toward the end: t_n = r0 · 2^{±n}.
            let factor = match p {
                ExtComplex::Infinity => T::lit(2.0),
                ExtComplex::Finite(_) => T::lit(0.5),
            };
            let density = |t: T| surf.log_metric_density(point(t)).exp();
            let mut total = T::zero();
            let mut first = T::zero();
            let mut t = r0;
            for n in 0..RAY_SEGMENTS {
                let t1 = t * factor;
                let (a, b) = if t < t1 { (t, t1) } else { (t1, t) };
                let f = |s: T| Complex::new(density(s), T::zero());
                // The density can change by many orders of magnitude on one
                // segment, so the tolerance is relative to a coarse estimate.
                let (coarse, _): (Complex<T>, T) = adaptive_gk(f, a, b, T::infinity(), 0);
                let tol = T::tol(1e-8) * coarse.re.abs().max(total).max(T::min_positive_value());
                let (seg, _): (Complex<T>, T) = adaptive_gk(f, a, b, tol, 20);
                total += seg.re;
                if n == 0 {
                    first = seg.re;
                }
                if !total.is_finite() || total > first * T::lit(DIVERGENCE_RATIO) {
                    return T::infinity().min(total / first);
                }
                t = t1;
            }
            total / first
        })
        .collect();
    let complete = growth.iter().all(|g| *g > T::lit(DIVERGENCE_RATIO));
    Ok(CompletenessVerdict {
        point: *p,
        method: CompletenessMethod::RayIntegration,
        complete,
        pole_order: None,
        ray_growth: growth,
    })
}

// ---------------------------------------------------------------------------
// Mesh export

pub const MESH_CSV_HEADER: &str = "u,v,x1,x2,x3,x4,conformal_factor";

/// CSV rows in the sample order; floats use shortest round-trip formatting.
pub fn mesh_csv<T: Real>(samples: &[ImmersionSample<T>]) -> String {
    let mut s = String::with_capacity(samples.len() * 96);
    s.push_str(MESH_CSV_HEADER);
    s.push('\n');
    for p in samples {
        let _ = writeln!(s, "{},{},{},{},{},{},{}", p.u, p.v, p.x[0], p.x[1], p.x[2], p.x[3], p.conformal_factor);
    }
    s
}

/// Quad mesh of the `(x₁, x₂, x₃)` projection in Wavefront OBJ format.
pub fn mesh_obj<T: Real>(
    samples: &[ImmersionSample<T>],
    radial: usize,
    angular: usize,
) -> Result<String, ImmersionError> {
    if samples.len() != radial * angular || angular < 3 {
        return Err(ImmersionError::BadGrid(format!(
            "{} samples do not form a {radial}x{angular} grid",
            samples.len()
        )));
    }
    let mut s = String::new();
    for p in samples {
        let _ = writeln!(s, "v {} {} {}", p.x[0], p.x[1], p.x[2]);
    }
    for i in 0..radial.saturating_sub(1) {
        for j in 0..angular {
            let jn = (j + 1) % angular;
            let idx = |i: usize, j: usize| i * angular + j + 1;
            let _ = writeln!(s, "f {} {} {} {}", idx(i, j), idx(i, jn), idx(i + 1, jn), idx(i + 1, j));
        }
    }
    Ok(s)
}

/// Writes `<prefix>.csv` and `<prefix>.obj`.
pub fn export_mesh<T: Real>(
    samples: &[ImmersionSample<T>],
    radial: usize,
    angular: usize,
    prefix: &Path,
) -> Result<(), MeshIoError> {
    let obj = mesh_obj(samples, radial, angular)?;
    std::fs::write(prefix.with_extension("csv"), mesh_csv(samples))?;
    std::fs::write(prefix.with_extension("obj"), obj)?;
    Ok(())
}

#[derive(Debug, thiserror::Error)]
pub enum MeshIoError {
    #[error(transparent)]
    Io(#[from] io::Error),
    #[error(transparent)]
    Grid(#[from] ImmersionError),
    #[error("line {line}: {msg}")]
    Parse { line: usize, msg: String },
}

/// One row of a mesh CSV.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct MeshRow {
    pub u: f64,
    pub v: f64,
    pub x: [f64; 4],
    pub conformal_factor: f64,
}

/// Parses a CSV written by [`mesh_csv`].
pub fn read_mesh_csv(text: &str) -> Result<Vec<MeshRow>, MeshIoError> {
    let mut lines = text.lines().enumerate();
    match lines.next() {
        Some((_, h)) if h == MESH_CSV_HEADER => {}
        _ => return Err(MeshIoError::Parse { line: 1, msg: "missing header".into() }),
    }
    lines
        .filter(|(_, l)| !l.is_empty())
        .map(|(n, l)| {
            let vals: Vec<f64> = l
                .split(',')
                .map(|f| f.parse::<f64>())
                .collect::<Result<_, _>>()
                .map_err(|e| MeshIoError::Parse { line: n + 1, msg: e.to_string() })?;
            if vals.len() != 7 {
                return Err(MeshIoError::Parse { line: n + 1, msg: format!("expected 7 fields, got {}", vals.len()) });
            }
            Ok(MeshRow { u: vals[0], v: vals[1], x: [vals[2], vals[3], vals[4], vals[5]], conformal_factor: vals[6] })
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gallery::{make_example, Family, Params};
    use crate::scalar::c;

    fn example(f: Family) -> WeierstrassData<f64> {
        make_example(f, &Params::new()).unwrap().data
    }

    fn classical_catenoid() -> WeierstrassData<f64> {
        let mut p = Params::new();
        p.set("t", 0.0, 0.0);
        make_example(Family::Catenoid, &p).unwrap().data
    }

    #[test]
    fn catenoid_tangent_at_one() {
        let x = x_z(&classical_catenoid(), c(1.0, 0.0)).unwrap();
        let expect = [c(0.0, 0.0), c(0.0, -2.0), c(2.0, 0.0), c(0.0, 0.0)];
        for k in 0..4 {
            assert!((x[k] - expect[k]).norm() < 1e-15);
        }
        assert!(isotropy_residual(&x) < 1e-15);
    }

    #[test]
    fn enneper_tangent_is_finite_at_origin() {
        let x = x_z(&example(Family::Enneper), c(0.0, 0.0)).unwrap();
        assert!(x.iter().all(|v| is_finite(*v)));
        assert!(x.iter().any(|v| v.norm() > 0.5));
    }

    #[test]
    fn conformal_factor_closed_form_matches_direct() {
        for f in [Family::Catenoid, Family::Meeks, Family::TwoSingularEnds, Family::Essential] {
            let s = Surface::new(&example(f)).unwrap();
            for z in [c(0.7, 0.2), c(-1.3, 0.9), c(2.1, -0.4)] {
                let a = s.conformal_factor(z);
                let b = s.conformal_factor_direct(z).unwrap();
                assert!((a - b).abs() <= 1e-10 * b, "{f} {z}: {a} {b}");
            }
        }
    }

    #[test]
    fn classical_catenoid_is_a_surface_of_revolution() {
        // x3 = 2 Re ∫ 2/z dz = 4 ln(r/r0), x4 = 0.
        let grid = PolarGrid { center: c(0.0, 0.0), r_min: 0.5, r_max: 3.0, radial: 5, angular: 10 };
        let s = immerse_grid(&classical_catenoid(), c(0.5, 0.0), &grid).unwrap();
        for p in &s {
            assert!((p.x[2] - 4.0 * (p.u / 0.5).ln()).abs() < 1e-8);
            assert!(p.x[3].abs() < 1e-8);
        }
    }

    #[test]
    fn loop_closure_on_catenoid() {
        let r = loop_closure_residual(&example(Family::Catenoid), c(0.0, 0.0), 1.0).unwrap();
        assert!(r < 1e-8, "{r}");
    }

    #[test]
    fn involution_gate_and_meeks_residual() {
        assert!(matches!(involution_check(&example(Family::Catenoid), 10, 1), Err(ImmersionError::NoInvolution)));
        let r = involution_check(&example(Family::Meeks), 100, 7).unwrap();
        assert!(r.max_residual <= 1e-12, "{r:?}");
    }

    #[test]
    fn csv_round_trip_is_exact() {
        let grid = PolarGrid { center: c(0.0, 0.0), r_min: 0.5, r_max: 2.0, radial: 3, angular: 8 };
        let s = immerse_grid(&example(Family::Catenoid), c(0.5, 0.0), &grid).unwrap();
        let rows = read_mesh_csv(&mesh_csv(&s)).unwrap();
        assert_eq!(rows.len(), 24);
        for (a, b) in s.iter().zip(&rows) {
            assert_eq!(a.x, b.x);
            assert_eq!(a.conformal_factor.to_bits(), b.conformal_factor.to_bits());
        }
    }

    #[test]
    fn completeness_at_algebraic_and_essential_ends() {
        let cat = example(Family::Catenoid);
        let v = completeness_check(&cat, &ExtComplex::zero()).unwrap();
        assert!(v.complete && v.method == CompletenessMethod::PoleOrder && v.pole_order == Some(2));

        // φ = z, ψ = −1/z, dh = dz, complete at ∞ like a plane.
        let z = MeroExpr::<f64>::z();
        let plane = WeierstrassData::new(
            z.clone(),
            z.inv().unwrap().neg(),
            MeroExpr::one(),
            vec![ExtComplex::zero(), ExtComplex::Infinity],
            false,
        )
        .unwrap();
        assert!(completeness_check(&plane, &ExtComplex::Infinity).unwrap().complete);

        let ess = example(Family::Essential);
        let v = completeness_check(&ess, &ExtComplex::Infinity).unwrap();
        assert_eq!(v.method, CompletenessMethod::RayIntegration);
        assert_eq!(v.ray_growth.len(), COMPLETENESS_RAYS);
        assert!(v.complete, "{v:?}");
    }

    #[test]
    fn puncture_at_a_regular_point_is_incomplete() {
        let mut d = example(Family::Enneper);
        d.punctures.push(ExtComplex::finite(1.0, 0.0));
        let v = completeness_check(&d, &ExtComplex::finite(1.0, 0.0)).unwrap();
        assert!(!v.complete && v.pole_order == Some(0), "{v:?}");
        let m = crate::weierstrass::end_multiplicity(&d, &ExtComplex::finite(1.0, 0.0)).unwrap();
        assert!(m.d_tilde < 1 && !m.complete, "{m:?}");
    }
}
