//! Total Gaussian and normal curvature: pointwise density, boundary-integral
//! totals over annuli, exact index formulas and the global identity checks.
//!
//! Sign convention: the complex 2-form is `(−K + iK⊥) dM`, so every value
//! returned as `total_k` is `∫K dM` (negative for complete examples).

use num_complex::Complex;
use num_traits::Zero;
use rayon::prelude::*;
use serde::Serialize;

use crate::complexkit::{divisor_of, ExprError, ExtComplex};
use crate::immersion::Surface;
use crate::quad::{periodic_trapezoid, CVec};
use crate::scalar::{is_finite, Real};
use crate::weierstrass::{
    classify_end, default_radius, index_sum, DataError, EndKind, EndReport, WeierstrassData, POINT_TOL,
};

/// Absolute tolerance between successive node doublings on one circle.
pub const CONTOUR_TOL: f64 = 1e-10;
/// Node cap per circle.
pub const CONTOUR_NODE_CAP: usize = 1 << 20;
/// Steps in the default radius schedule.
pub const SCHEDULE_STEPS: usize = 5;
/// Ratio between successive radii in the default schedule.
pub const SCHEDULE_FACTOR: f64 = 10.0;

#[derive(Clone, Debug, PartialEq, thiserror::Error)]
pub enum CurvatureError {
    #[error("{0} is a singular point of the curvature density")]
    SingularPoint(String),
    #[error("bad singular end at {0}: the curvature integral does not converge absolutely there")]
    BadSingularEnd(String),
    #[error("exact totals need algebraic data")]
    NotAlgebraic,
    #[error("contour schedule rejected: {0}")]
    BadSchedule(String),
    #[error("contour integral at radius {radius} did not converge (last {last}, previous {previous})")]
    NonConvergence { radius: String, last: String, previous: String },
    #[error(transparent)]
    Data(#[from] DataError),
    #[error(transparent)]
    Expr(#[from] ExprError),
}

/// `(1/(1 − Q), Q/(1 − Q))` for `Q = e^{lq}`, without overflow.
fn fractions<T: Real>(lq: Complex<T>) -> (Complex<T>, Complex<T>) {
    let one = Complex::new(T::one(), T::zero());
    if lq.re <= T::zero() {
        let q = lq.exp();
        let inv = one / (one - q);
        (inv, q * inv)
    } else {
        let q = (-lq).exp();
        let inv = one / (q - one);
        (q * inv, inv)
    }
}

/// `−K + iK⊥ = 4 φ' conj(ψ') / ((φ − ψ̄)² e^{2ω})` at `z`.
///
/// At zeros and poles of φ or ψ, where the factored form is `0/0`, the value is
/// the mean over four points at distance `1e−7 × scale`.
pub fn curvature_density<T: Real>(data: &WeierstrassData<T>, z: Complex<T>) -> Result<Complex<T>, CurvatureError> {
    let surf = Surface::new(data)?;
    density_at(&surf, z)
}

fn density_raw<T: Real>(surf: &Surface<T>, z: Complex<T>) -> Option<Complex<T>> {
    let lphi = surf.log_dphi.eval_raw(z);
    let lpsi = surf.log_dpsi.eval_raw(z);
    let lq = surf.log_ratio(z);
    if !is_finite(lphi) || !is_finite(lpsi) || !is_finite(lq) {
        return None;
    }
    let (inv, qinv) = fractions(lq);
    let metric = surf.conformal_factor(z);
    let v = lphi * lpsi.conj() * qinv * inv * T::lit(4.0) / metric;
    is_finite(v).then_some(v)
}

fn density_at<T: Real>(surf: &Surface<T>, z: Complex<T>) -> Result<Complex<T>, CurvatureError> {
    let p = ExtComplex::Finite(z);
    if surf.data.is_puncture(&p) || surf.data.is_essential_at(&p) {
        return Err(CurvatureError::SingularPoint(z.to_string()));
    }
    let metric = surf.conformal_factor(z);
    if !(metric > T::zero()) || !metric.is_finite() {
        return Err(CurvatureError::SingularPoint(z.to_string()));
    }
    if let Some(v) = density_raw(surf, z) {
        return Ok(v);
    }
    let eps = T::lit(1e-7) * surf.data.feature_scale();
    let mut acc = Complex::zero();
    for k in 0..4 {
        let dz = Complex::from_polar(eps, T::FRAC_PI_2() * T::from_usize_lossy(k) + T::lit(0.3));
        acc += density_raw(surf, z + dz).ok_or_else(|| CurvatureError::SingularPoint(z.to_string()))?;
    }
    Ok(acc / T::lit(4.0))
}

/// `−K = e^{−2ω} Δω` by a five-point Laplacian of `ω` with step `h`.
pub fn gauss_curvature_fd<T: Real>(data: &WeierstrassData<T>, z: Complex<T>, h: T) -> Result<T, CurvatureError> {
    let surf = Surface::new(data)?;
    let omega = |w: Complex<T>| surf.log_metric_density(w);
    let c = omega(z);
    let lap = (omega(z + Complex::new(h, T::zero()))
        + omega(z - Complex::new(h, T::zero()))
        + omega(z + Complex::new(T::zero(), h))
        + omega(z - Complex::new(T::zero(), h))
        - c * T::lit(4.0))
        / (h * h);
    Ok(lap * (-(c * T::lit(2.0))).exp())
}

/// Contour radii per end; entry `k` of every schedule bounds the `k`-th region.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct AnnulusSpec<T: Real> {
    pub ends: Vec<EndSchedule<T>>,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct EndSchedule<T: Real> {
    pub point: ExtComplex<T>,
    /// Increasing for `∞`, decreasing for finite ends.
    pub radii: Vec<T>,
}

impl<T: Real> AnnulusSpec<T> {
    /// Geometric schedule, factor 10, 5 steps, starting from the default contour radius.
    pub fn default_for(data: &WeierstrassData<T>) -> Self {
        Self::geometric(data, SCHEDULE_STEPS, T::lit(SCHEDULE_FACTOR))
    }

    pub fn geometric(data: &WeierstrassData<T>, steps: usize, factor: T) -> Self {
        let ends = data
            .punctures
            .iter()
            .map(|p| {
                let r0 = default_radius(data, p);
                let f = if p.is_infinite() { factor } else { T::one() / factor };
                let radii = (0..steps).scan(r0, |r, _| {
                    let out = *r;
                    *r *= f;
                    Some(out)
                });
                EndSchedule { point: *p, radii: radii.collect() }
            })
            .collect();
        AnnulusSpec { ends }
    }

    /// Every schedule scaled by `s` (finite ends) or `1/s` (infinity).
    pub fn scaled(&self, s: T) -> Self {
        AnnulusSpec {
            ends: self
                .ends
                .iter()
                .map(|e| EndSchedule {
                    point: e.point,
                    radii: e.radii.iter().map(|r| if e.point.is_infinite() { *r / s } else { *r * s }).collect(),
                })
                .collect(),
        }
    }

    pub fn steps(&self) -> usize {
        self.ends.iter().map(|e| e.radii.len()).min().unwrap_or(0)
    }

    fn validate(&self, data: &WeierstrassData<T>) -> Result<(), CurvatureError> {
        let bad = |m: String| Err(CurvatureError::BadSchedule(m));
        if self.ends.len() != data.punctures.len() || self.ends.iter().any(|e| !data.is_puncture(&e.point)) {
            return bad("one schedule per puncture is required".into());
        }
        if self.steps() == 0 {
            return bad("empty schedule".into());
        }
        let tol = T::tol(POINT_TOL);
        let obstacles: Vec<ExtComplex<T>> =
            data.singular_points().into_iter().chain(data.punctures.iter().copied()).collect();
        for e in &self.ends {
            for w in e.radii.windows(2) {
                let toward = if e.point.is_infinite() { w[1] > w[0] } else { w[1] < w[0] };
                if !toward {
                    return bad(format!("radii at {} are not monotone toward the end", e.point));
                }
            }
            for &r in &e.radii {
                if !(r > T::zero()) {
                    return bad(format!("non-positive radius at {}", e.point));
                }
                for q in &obstacles {
                    if q.approx_eq(&e.point, tol) {
                        continue;
                    }
                    let hit = match (e.point, q) {
                        (ExtComplex::Finite(c), ExtComplex::Finite(s)) => (s - c).norm() <= r * (T::one() + tol),
                        (ExtComplex::Infinity, ExtComplex::Finite(s)) => s.norm() >= r * (T::one() - tol),
                        _ => false,
                    };
                    if hit {
                        return bad(format!("circle of radius {r} around {} meets {q}", e.point));
                    }
                }
            }
        }
        Ok(())
    }
}

/// Totals over one region of the schedule.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct ContourTotals<T: Real> {
    pub step: usize,
    /// `∫K dM` from the φ boundary form.
    pub total_k: T,
    /// `∫K⊥ dM` from the φ boundary form.
    pub total_kperp: T,
    /// `∫K dM` from the ψ̄ boundary form.
    pub psi_total_k: T,
    pub psi_total_kperp: T,
    /// Largest node count used on a circle.
    pub nodes: usize,
}

/// Interior poles of `f` (outside the punctures), as (point, order).
fn interior_poles<T: Real>(data: &WeierstrassData<T>, psi: bool) -> Result<Vec<(ExtComplex<T>, u32)>, CurvatureError> {
    let f = if psi { &data.psi } else { &data.phi };
    Ok(divisor_of(f, true)?
        .poles()
        .filter(|e| !data.is_puncture(&e.point))
        .map(|e| (e.point, e.order.unsigned_abs()))
        .collect())
}

/// Boundary totals `−2i Σ ε_j ∮ φ'/(φ − ψ̄) dz` (and the ψ̄ form with `dz̄`) over
/// the sphere minus discs around the punctures, one value per schedule step.
///
/// Circles are counterclockwise; `ε = +1` around `∞` and `−1` around finite
/// ends. Each interior pole of φ of order `k` contributes `4πk` to `−∫K`
/// (likewise for ψ in the ψ̄ form).
pub fn total_curvature_contour<T: Real>(
    data: &WeierstrassData<T>,
    annuli: &AnnulusSpec<T>,
) -> Result<Vec<ContourTotals<T>>, CurvatureError> {
    annuli.validate(data)?;
    let surf = Surface::new(data)?;
    let four_pi = T::lit(4.0) * T::PI();
    let corr =
        |poles: Vec<(ExtComplex<T>, u32)>| four_pi * T::from_usize_lossy(poles.iter().map(|p| p.1 as usize).sum());
    let corr_phi = corr(interior_poles(data, false)?);
    let corr_psi = corr(interior_poles(data, true)?);
    let i = Complex::new(T::zero(), T::one());
    let steps = annuli.steps();
    let jobs: Vec<(usize, usize)> = (0..steps).flat_map(|k| (0..annuli.ends.len()).map(move |e| (k, e))).collect();
    let circles: Vec<(CVec<T, 2>, usize)> = jobs
        .par_iter()
        .map(|&(k, e)| {
            let end = &annuli.ends[e];
            let r = end.radii[k];
            let center = end.point.as_finite().unwrap_or_else(Complex::zero);
            let f = |t: T| {
                let w = Complex::from_polar(r, t);
                let z = center + w;
                let dz = i * w;
                let (inv, qinv) = fractions(surf.log_ratio(z));
                let a = surf.log_dphi.eval_raw(z) * inv * dz;
                let b = surf.log_dpsi.eval_raw(z).conj() * qinv * dz.conj();
                CVec([a, b])
            };
            let tol = T::tol(CONTOUR_TOL);
            periodic_trapezoid(f, tol, T::zero(), 16, CONTOUR_NODE_CAP)
                .map(|res| {
                    let sign = if end.point.is_infinite() { T::one() } else { -T::one() };
                    (res.value * sign, res.nodes)
                })
                .map_err(|e| CurvatureError::NonConvergence {
                    radius: r.to_string(),
                    last: format!("{:?}", e.last.0),
                    previous: format!("{:?}", e.previous.0),
                })
        })
        .collect::<Result<_, _>>()?;
    let m2i = Complex::new(T::zero(), -T::lit(2.0));
    let n = annuli.ends.len();
    Ok((0..steps)
        .map(|k| {
            let mut sum = CVec([Complex::zero(); 2]);
            let mut nodes = 0;
            for (v, nd) in &circles[k * n..(k + 1) * n] {
                sum = sum + *v;
                nodes = nodes.max(*nd);
            }
            // value = −∫K + i∫K⊥
            let vphi = m2i * sum.0[0] + corr_phi;
            let vpsi = m2i * sum.0[1] + corr_psi;
            ContourTotals {
                step: k,
                total_k: -vphi.re,
                total_kperp: vphi.im,
                psi_total_k: -vpsi.re,
                psi_total_kperp: vpsi.im,
                nodes,
            }
        })
        .collect())
}

/// Exact `∫K dM` from the index formulas, via φ and via ψ.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct ExactTotals<T: Real> {
    /// `−4π(deg φ − Σ ind^{1,0})`
    pub via_phi: T,
    /// `−4π(deg ψ − Σ ind^{0,1})`
    pub via_psi: T,
}

fn classify_all<T: Real>(data: &WeierstrassData<T>) -> Result<Vec<EndReport<T>>, CurvatureError> {
    Ok(data.punctures.iter().map(|p| classify_end(data, p)).collect::<Result<_, _>>()?)
}

fn exact_from_ends<T: Real>(
    data: &WeierstrassData<T>,
    ends: &[EndReport<T>],
) -> Result<ExactTotals<T>, CurvatureError> {
    if !data.is_algebraic() {
        return Err(CurvatureError::NotAlgebraic);
    }
    if let Some(bad) = ends.iter().find(|e| e.kind == EndKind::BadSingular) {
        return Err(CurvatureError::BadSingularEnd(bad.point.to_string()));
    }
    let s10: u32 = ends.iter().filter_map(|e| e.ind_10).sum();
    let s01: u32 = ends.iter().filter_map(|e| e.ind_01).sum();
    let dphi = data.phi.degree()? as i64;
    let dpsi = data.psi.degree()? as i64;
    let four_pi = T::lit(4.0) * T::PI();
    Ok(ExactTotals {
        via_phi: -four_pi * T::lit((dphi - s10 as i64) as f64),
        via_psi: -four_pi * T::lit((dpsi - s01 as i64) as f64),
    })
}

/// Exact `∫K dM` for algebraic data without bad singular ends.
pub fn total_curvature_exact<T: Real>(data: &WeierstrassData<T>) -> Result<ExactTotals<T>, CurvatureError> {
    if !data.is_algebraic() {
        return Err(CurvatureError::NotAlgebraic);
    }
    exact_from_ends(data, &classify_all(data)?)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Relation {
    Equal,
    AtMost,
    AtLeast,
    CongruentMod2,
}

/// One identity with both sides.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct IdentityCheck<T: Real> {
    pub name: &'static str,
    pub lhs: T,
    pub rhs: T,
    pub relation: Relation,
    pub passed: bool,
}

impl<T: Real> IdentityCheck<T> {
    fn new(name: &'static str, lhs: T, rhs: T, relation: Relation, tol: T) -> Self {
        let passed = match relation {
            Relation::Equal => (lhs - rhs).abs() <= tol,
            Relation::AtMost => lhs <= rhs + tol,
            Relation::AtLeast => lhs + tol >= rhs,
            Relation::CongruentMod2 => {
                let (a, b) = (lhs.round(), rhs.round());
                (lhs - a).abs() <= tol && (rhs - b).abs() <= tol && ((a - b) / T::lit(2.0)).fract().abs() <= tol
            }
        };
        IdentityCheck { name, lhs, rhs, relation, passed }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct CurvatureReport<T: Real> {
    /// `∫K dM` from the index formula (unset for essential data).
    pub exact_total_k: Option<T>,
    pub exact_total_k_psi: Option<T>,
    /// Final-step contour totals.
    pub numeric_total_k: T,
    pub numeric_total_kperp: T,
    pub numeric_psi_total_k: T,
    pub numeric_psi_total_kperp: T,
    /// Totals at every step of the radius schedule.
    pub schedule: Vec<ContourTotals<T>>,
    /// `−∫K dM` over the quotient surface, for involution data.
    pub quotient_total: Option<T>,
    pub ends: Vec<EndReport<T>>,
    pub checks: Vec<IdentityCheck<T>>,
    pub passed: bool,
}

/// Tolerances for the numeric checks.
pub const EXACT_NUMERIC_REL: f64 = 1e-5;
pub const KPERP_TOL: f64 = 1e-7;
pub const PHI_PSI_TOL: f64 = 1e-6;

/// Curvature totals and every applicable identity check, with the default schedule.
pub fn global_identity_report<T: Real>(data: &WeierstrassData<T>) -> Result<CurvatureReport<T>, CurvatureError> {
    global_identity_report_with(data, &AnnulusSpec::default_for(data))
}

pub fn global_identity_report_with<T: Real>(
    data: &WeierstrassData<T>,
    annuli: &AnnulusSpec<T>,
) -> Result<CurvatureReport<T>, CurvatureError> {
    let ends = classify_all(data)?;
    if let Some(bad) = ends.iter().find(|e| e.kind == EndKind::BadSingular) {
        return Err(CurvatureError::BadSingularEnd(bad.point.to_string()));
    }
    let schedule = total_curvature_contour(data, annuli)?;
    let last = *schedule.last().expect("validated schedule is non-empty");
    let exact = if data.is_algebraic() { Some(exact_from_ends(data, &ends)?) } else { None };
    let two_pi = T::TAU();
    let tight = T::tol(1e-9);
    let mut checks = Vec::new();
    checks.push(IdentityCheck::new(
        "normal_curvature_zero",
        last.total_kperp,
        T::zero(),
        Relation::Equal,
        T::tol(KPERP_TOL),
    ));
    checks.push(IdentityCheck::new(
        "phi_psi_contours_agree",
        last.total_k,
        last.psi_total_k,
        Relation::Equal,
        T::tol(PHI_PSI_TOL) * (T::one() + last.total_k.abs()),
    ));
    let mut quotient_total = data.has_involution.then(|| -last.total_k / T::lit(2.0));
    if let Some(ex) = exact {
        let total = ex.via_phi;
        let k_rel = T::tol(EXACT_NUMERIC_REL) * (T::one() + total.abs());
        checks.push(IdentityCheck::new("exact_phi_psi_agree", ex.via_phi, ex.via_psi, Relation::Equal, tight));
        checks.push(IdentityCheck::new("numeric_matches_exact", last.total_k, total, Relation::Equal, k_rel));
        if let Some((sum, deg)) = index_sum(data, &ends) {
            checks.push(IdentityCheck::new(
                "index_sum",
                T::lit(sum as f64),
                T::lit(deg as f64),
                Relation::Equal,
                tight,
            ));
        }
        let topo = data.topology();
        let g = T::lit(topo.genus as f64);
        let r = T::lit(topo.ends as f64);
        let dsum: i32 = ends.iter().filter_map(|e| e.d_tilde).sum();
        let chi = T::lit(2.0) - g * T::lit(2.0) - r;
        checks.push(IdentityCheck::new(
            "jorge_meeks",
            total,
            two_pi * (chi - T::lit(dsum as f64)),
            Relation::Equal,
            tight,
        ));
        checks.push(IdentityCheck::new("chern_osserman", total, two_pi * (chi - r), Relation::AtMost, tight));
        let k = -total / (T::lit(2.0) * two_pi);
        let quantized = (k - k.round()).abs() <= tight && k.round() >= T::one();
        checks.push(IdentityCheck {
            name: "quantization",
            lhs: k,
            rhs: k.round(),
            relation: Relation::Equal,
            passed: quantized,
        });
        if data.has_involution {
            // Quotient: half the ends, half the curvature, genus of the cover.
            let q = -total / T::lit(2.0);
            quotient_total = Some(q);
            let rq = r / T::lit(2.0);
            let dq = T::lit(dsum as f64) / T::lit(2.0);
            checks.push(IdentityCheck::new(
                "nonorientable_jorge_meeks",
                q,
                two_pi * (g + rq - T::one() + dq),
                Relation::Equal,
                tight,
            ));
            checks.push(IdentityCheck::new("lower_bound_g2", q, two_pi * (g + T::lit(2.0)), Relation::AtLeast, tight));
            checks.push(IdentityCheck::new("lower_bound_g3", q, two_pi * (g + T::lit(3.0)), Relation::AtLeast, tight));
            checks.push(IdentityCheck::new("parity", q / two_pi, g - T::one(), Relation::CongruentMod2, tight));
        }
    }
    let passed = checks.iter().all(|c| c.passed);
    Ok(CurvatureReport {
        exact_total_k: exact.map(|e| e.via_phi),
        exact_total_k_psi: exact.map(|e| e.via_psi),
        numeric_total_k: last.total_k,
        numeric_total_kperp: last.total_kperp,
        numeric_psi_total_k: last.psi_total_k,
        numeric_psi_total_kperp: last.psi_total_kperp,
        schedule,
        quotient_total,
        ends,
        checks,
        passed,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::complexkit::{CPoly, MeroExpr};
    use crate::gallery::{make_example, Family, Params};
    use crate::scalar::c;
    use std::f64::consts::PI;

    fn example(f: Family) -> WeierstrassData<f64> {
        make_example(f, &Params::new()).unwrap().data
    }

    fn last(data: &WeierstrassData<f64>) -> ContourTotals<f64> {
        *total_curvature_contour(data, &AnnulusSpec::default_for(data)).unwrap().last().unwrap()
    }

    #[test]
    fn catenoid_contour_total() {
        let t = last(&example(Family::Catenoid));
        assert!((t.total_k + 4.0 * PI).abs() < 1e-6 * 4.0 * PI, "{t:?}");
        assert!(t.total_kperp.abs() < 1e-8, "{t:?}");
        assert!((t.psi_total_k - t.total_k).abs() < 1e-6, "{t:?}");
    }

    #[test]
    fn example_with_singular_ends_contour_total() {
        let t = last(&example(Family::TwoSingularEnds));
        assert!((t.total_k + 8.0 * PI).abs() < 1e-6 * 8.0 * PI, "{t:?}");
        assert!((t.psi_total_k - t.total_k).abs() < 1e-6, "{t:?}");
    }

    #[test]
    fn meeks_cover_total_uses_interior_pole() {
        let t = last(&example(Family::Meeks));
        assert!((t.total_k + 12.0 * PI).abs() < 1e-5 * 12.0 * PI, "{t:?}");
        assert!((t.psi_total_k - t.total_k).abs() < 1e-6, "{t:?}");
        assert!(t.total_kperp.abs() < 1e-7, "{t:?}");
    }

    #[test]
    fn essential_family_converges_along_schedule() {
        let d = example(Family::Essential);
        let s = total_curvature_contour(&d, &AnnulusSpec::default_for(&d)).unwrap();
        let err: Vec<f64> = s.iter().map(|t| (t.total_k + 8.0 * PI).abs()).collect();
        assert!(*err.last().unwrap() < 1e-3, "{s:?}");
    }

    #[test]
    fn density_matches_metric_laplacian() {
        let d = example(Family::Catenoid);
        let z = c(1.0, 0.0);
        let k = curvature_density(&d, z).unwrap();
        let fd = gauss_curvature_fd(&d, z, 1e-3).unwrap();
        assert!((k.re - fd).abs() < 1e-5 * fd.abs(), "{k} {fd}");
        assert!(k.re > 0.0);
    }

    #[test]
    fn classical_catenoid_has_no_normal_curvature() {
        let mut p = Params::new();
        p.set("t", 0.0, 0.0);
        let d = make_example::<f64>(Family::Catenoid, &p).unwrap().data;
        for z in [c(0.5, 0.1), c(-2.0, 1.0), c(0.0, 3.0)] {
            assert!(curvature_density(&d, z).unwrap().im.abs() < 1e-14);
        }
    }

    #[test]
    fn enneper_density_at_origin() {
        let d = example(Family::Enneper);
        let k = curvature_density(&d, c(0.0, 0.0)).unwrap();
        assert!(k.re > 0.0 && (k.re - 1.0).abs() < 1e-6, "{k}");
    }

    #[test]
    fn exact_totals() {
        let e = total_curvature_exact(&example(Family::Catenoid)).unwrap();
        assert_eq!((e.via_phi, e.via_psi), (-4.0 * PI, -4.0 * PI));
        let e = total_curvature_exact(&example(Family::Case5)).unwrap();
        assert_eq!((e.via_phi, e.via_psi), (-4.0 * PI, -4.0 * PI));
        let e = total_curvature_exact(&example(Family::TwoSingularEnds)).unwrap();
        assert_eq!((e.via_phi, e.via_psi), (-8.0 * PI, -8.0 * PI));
        assert!(matches!(total_curvature_exact(&example(Family::Essential)), Err(CurvatureError::NotAlgebraic)));
    }

    #[test]
    fn bad_end_is_refused() {
        let z = MeroExpr::poly(CPoly::<f64>::from_real(&[0.0, 1.0]));
        let d = WeierstrassData::new(z.clone(), z, MeroExpr::one(), vec![ExtComplex::Infinity], false).unwrap();
        assert!(matches!(total_curvature_exact(&d), Err(CurvatureError::BadSingularEnd(_))));
    }

    #[test]
    fn reports_pass_on_algebraic_gallery() {
        for f in [Family::Catenoid, Family::Enneper, Family::TwoSingularEnds, Family::Meeks] {
            let r = global_identity_report(&example(f)).unwrap();
            let failed: Vec<_> = r.checks.iter().filter(|c| !c.passed).collect();
            assert!(r.passed, "{f}: {failed:?}");
        }
        let r = global_identity_report(&example(Family::Meeks)).unwrap();
        assert!((r.quotient_total.unwrap() - 6.0 * PI).abs() < 1e-12);
    }

    #[test]
    fn schedule_rejects_circle_through_singularity() {
        let d = example(Family::TwoSingularEnds);
        let spec = AnnulusSpec {
            ends: vec![
                EndSchedule { point: ExtComplex::zero(), radii: vec![2.0] },
                EndSchedule { point: ExtComplex::Infinity, radii: vec![10.0] },
            ],
        };
        assert!(matches!(total_curvature_contour(&d, &spec), Err(CurvatureError::BadSchedule(_))));
    }
}
