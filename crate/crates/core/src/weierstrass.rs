//! Surface data `(φ, ψ, dh)` on a punctured sphere, the admissibility and period
//! conditions, and end classification.

use num_complex::Complex;
use num_traits::Zero;
use serde::Serialize;

use crate::complexkit::{circle_integral, poly_roots, residue, ExprError, ExtComplex, MeroExpr};
use crate::scalar::{cr, Real};

/// Chordal tolerance for deciding that two points of the sphere coincide.
pub const POINT_TOL: f64 = 1e-8;
/// Residual bound for the period conditions.
pub const PERIOD_TOL: f64 = 1e-10;

#[derive(Clone, Debug, PartialEq, thiserror::Error)]
pub enum DataError {
    #[error("{0} is constant")]
    ConstantGaussMap(&'static str),
    #[error("height differential is identically zero")]
    ZeroHeightDifferential,
    #[error("puncture list is empty")]
    NoPunctures,
    #[error("{0} is not a puncture")]
    NotAPuncture(String),
    #[error("end {0} is an essential singularity")]
    EssentialEnd(String),
    #[error("Möbius move is not unimodular (ad - bc = {0})")]
    NotUnimodular(String),
    #[error("data cannot be normalized at {0}: {1}")]
    NotNormalizable(String, String),
    #[error(transparent)]
    Expr(#[from] ExprError),
}

/// Weierstrass data on the sphere minus `punctures`; `dh = dh · dz`.
#[derive(Clone, Debug, PartialEq)]
pub struct WeierstrassData<T> {
    pub phi: MeroExpr<T>,
    pub psi: MeroExpr<T>,
    pub dh: MeroExpr<T>,
    pub punctures: Vec<ExtComplex<T>>,
    /// Antiholomorphic involution `z -> -1/z̄` present.
    pub has_involution: bool,
}

impl<T: Real> WeierstrassData<T> {
    pub fn new(
        phi: MeroExpr<T>,
        psi: MeroExpr<T>,
        dh: MeroExpr<T>,
        punctures: Vec<ExtComplex<T>>,
        has_involution: bool,
    ) -> Result<Self, DataError> {
        if phi.is_constant() {
            return Err(DataError::ConstantGaussMap("phi"));
        }
        if psi.is_constant() {
            return Err(DataError::ConstantGaussMap("psi"));
        }
        if dh.is_zero() {
            return Err(DataError::ZeroHeightDifferential);
        }
        if punctures.is_empty() {
            return Err(DataError::NoPunctures);
        }
        Ok(WeierstrassData { phi, psi, dh, punctures, has_involution })
    }

    pub fn is_algebraic(&self) -> bool {
        self.phi.is_algebraic() && self.psi.is_algebraic() && self.dh.is_algebraic()
    }

    /// Coefficients of the four forms `dh, φ dh, ψ dh, φψ dh`.
    pub fn forms(&self) -> [MeroExpr<T>; 4] {
        let phi_dh = self.phi.mul(&self.dh);
        let psi_dh = self.psi.mul(&self.dh);
        let phipsi_dh = phi_dh.mul(&self.psi);
        [self.dh.clone(), phi_dh, psi_dh, phipsi_dh]
    }

    pub fn is_puncture(&self, p: &ExtComplex<T>) -> bool {
        self.punctures.iter().any(|q| q.approx_eq(p, T::tol(POINT_TOL)))
    }

    pub fn is_essential_at(&self, p: &ExtComplex<T>) -> bool {
        self.phi.is_essential_at(p) || self.psi.is_essential_at(p) || self.dh.is_essential_at(p)
    }

    pub fn topology(&self) -> SurfaceTopology {
        SurfaceTopology { genus: 0, ends: self.punctures.len(), orientable: !self.has_involution }
    }

    /// Finite poles of φ, ψ and dh together with their essential points.
    pub fn singular_points(&self) -> Vec<ExtComplex<T>> {
        let mut out: Vec<ExtComplex<T>> = Vec::new();
        for f in [&self.phi, &self.psi, &self.dh] {
            for p in f.singular_points() {
                if !out.iter().any(|q| q.approx_eq(&p, T::tol(POINT_TOL))) {
                    out.push(p);
                }
            }
        }
        out
    }

    /// Largest modulus among finite punctures and finite singular points, at least 1.
    pub fn feature_scale(&self) -> T {
        self.punctures
            .iter()
            .chain(self.singular_points().iter())
            .filter_map(|p| p.as_finite())
            .fold(T::one(), |m, z| m.max(z.norm()))
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct SurfaceTopology {
    pub genus: u32,
    pub ends: usize,
    pub orientable: bool,
}

// ---------------------------------------------------------------------------
// Admissibility

#[derive(Clone, Debug, PartialEq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Violation<T: Real> {
    /// φ and ψ both have a pole at a domain point.
    PolesCoincide { point: ExtComplex<T>, phi_pole: i32, psi_pole: i32 },
    /// The order of dh at a domain point differs from the pole order of φ or ψ.
    HeightOrderMismatch { point: ExtComplex<T>, expected_zero: i32, found: i32 },
    /// An essential singularity lies in the domain.
    EssentialInDomain { point: ExtComplex<T> },
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Admissibility<T: Real> {
    pub poles_disjoint: bool,
    pub height_matches_poles: bool,
    pub violations: Vec<Violation<T>>,
    pub passed: bool,
}

/// Pole disjointness of φ, ψ and the zero matching of dh on the domain.
///
/// Does not look for solutions of `φ = ψ̄`; see [`crate::locus`].
pub fn check_admissibility<T: Real>(data: &WeierstrassData<T>) -> Result<Admissibility<T>, ExprError> {
    let tol = T::tol(POINT_TOL);
    let mut candidates: Vec<ExtComplex<T>> = vec![ExtComplex::Infinity];
    for poly in [data.dh.rat().num(), data.dh.rat().den(), data.phi.rat().den(), data.psi.rat().den()] {
        if poly.degree().unwrap_or(0) > 0 {
            for r in poly_roots(poly).map_err(|_| ExprError::RootFailure)? {
                candidates.push(ExtComplex::Finite(r.value));
            }
        }
    }
    for f in [&data.phi, &data.psi, &data.dh] {
        candidates.extend(f.essential_points());
    }
    let mut points: Vec<ExtComplex<T>> = Vec::new();
    for p in candidates {
        if !data.is_puncture(&p) && !points.iter().any(|q| q.approx_eq(&p, tol)) {
            points.push(p);
        }
    }

    let mut violations = Vec::new();
    for p in points {
        if data.is_essential_at(&p) {
            violations.push(Violation::EssentialInDomain { point: p });
            continue;
        }
        let kp = (-data.phi.order_at(&p)?).max(0);
        let kq = (-data.psi.order_at(&p)?).max(0);
        if kp > 0 && kq > 0 {
            violations.push(Violation::PolesCoincide { point: p, phi_pole: kp, psi_pole: kq });
        }
        let found = data.dh.form_order_at(&p)?;
        let expected = kp.max(kq);
        if found != expected {
            violations.push(Violation::HeightOrderMismatch { point: p, expected_zero: expected, found });
        }
    }
    let poles_disjoint = !violations.iter().any(|v| matches!(v, Violation::PolesCoincide { .. }));
    let height_matches_poles = !violations.iter().any(|v| matches!(v, Violation::HeightOrderMismatch { .. }));
    let passed = violations.is_empty();
    Ok(Admissibility { poles_disjoint, height_matches_poles, violations, passed })
}

// ---------------------------------------------------------------------------
// Periods

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct PeriodEntry<T: Real> {
    pub point: ExtComplex<T>,
    pub res_dh: Complex<T>,
    pub res_phi_dh: Complex<T>,
    pub res_psi_dh: Complex<T>,
    pub res_phi_psi_dh: Complex<T>,
    /// `|Res(φ dh) − conj Res(ψ dh)|`
    pub horizontal: T,
    /// `|Im Res(dh)|`
    pub vertical_dh: T,
    /// `|Im Res(φψ dh)|`
    pub vertical_phi_psi: T,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct PeriodReport<T: Real> {
    pub entries: Vec<PeriodEntry<T>>,
    pub max_residual: T,
    pub passed: bool,
}

/// Contour radii used for residues at essential punctures, one per puncture.
///
/// For a finite puncture `p` the circle is `|z − p| = r`; for infinity `|z| = r`.
pub fn default_contour_radii<T: Real>(data: &WeierstrassData<T>) -> Vec<Option<T>> {
    data.punctures
        .iter()
        .map(|p| {
            if !data.is_essential_at(p) {
                return None;
            }
            Some(default_radius(data, p))
        })
        .collect()
}

/// A circle around `p` that separates it from every other puncture and singular point.
pub fn default_radius<T: Real>(data: &WeierstrassData<T>, p: &ExtComplex<T>) -> T {
    match p {
        ExtComplex::Infinity => data.feature_scale() * T::lit(10.0),
        ExtComplex::Finite(c) => {
            let nearest = data
                .punctures
                .iter()
                .chain(data.singular_points().iter())
                .filter(|q| !q.approx_eq(p, T::tol(POINT_TOL)))
                .filter_map(|q| q.as_finite())
                .map(|q| (q - c).norm())
                .fold(T::infinity(), T::min);
            let base = if nearest.is_finite() { nearest } else { T::one() };
            base * T::lit(0.1)
        }
    }
}

/// Period conditions reduced to residues at each puncture.
///
/// `radii` supplies contour radii for essential punctures (aligned with
/// `data.punctures`); see [`default_contour_radii`].
pub fn check_periods<T: Real>(data: &WeierstrassData<T>, radii: &[Option<T>]) -> Result<PeriodReport<T>, ExprError> {
    let forms = data.forms();
    let mut entries = Vec::with_capacity(data.punctures.len());
    for (j, p) in data.punctures.iter().enumerate() {
        let r = radii.get(j).copied().flatten();
        let res = |f: &MeroExpr<T>| residue(f, p, r);
        let (rd, rp, rq, rpq) = (res(&forms[0])?, res(&forms[1])?, res(&forms[2])?, res(&forms[3])?);
        entries.push(PeriodEntry {
            point: *p,
            res_dh: rd,
            res_phi_dh: rp,
            res_psi_dh: rq,
            res_phi_psi_dh: rpq,
            horizontal: (rp - rq.conj()).norm(),
            vertical_dh: rd.im.abs(),
            vertical_phi_psi: rpq.im.abs(),
        });
    }
    let max_residual =
        entries.iter().map(|e| e.horizontal.max(e.vertical_dh).max(e.vertical_phi_psi)).fold(T::zero(), T::max);
    let passed = max_residual <= T::tol(PERIOD_TOL);
    Ok(PeriodReport { entries, max_residual, passed })
}

/// Residues of the four forms from numeric loop integrals on a circle around `p`.
pub fn numeric_residues<T: Real>(
    data: &WeierstrassData<T>,
    p: &ExtComplex<T>,
    radius: T,
) -> Result<[Complex<T>; 4], ExprError> {
    let forms = data.forms();
    let two_pi_i = Complex::new(T::zero(), T::TAU());
    let mut out = [Complex::zero(); 4];
    for (k, f) in forms.iter().enumerate() {
        let (center, sign) = match p {
            ExtComplex::Finite(c) => (*c, T::one()),
            ExtComplex::Infinity => (Complex::zero(), -T::one()),
        };
        out[k] = circle_integral(|z| f.eval_raw(z), center, radius, T::tol(1e-13))? * sign / two_pi_i;
    }
    Ok(out)
}

// ---------------------------------------------------------------------------
// Ends

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum EndKind {
    Regular,
    GoodSingular,
    BadSingular,
    Essential,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct EndReport<T: Real> {
    pub point: ExtComplex<T>,
    pub kind: EndKind,
    /// Multiplicity with which φ takes the value `φ(p)`.
    pub mult_phi: Option<u32>,
    /// Multiplicity with which ψ takes the value `ψ(p)`.
    pub mult_psi: Option<u32>,
    pub ind: Option<i32>,
    pub ind_plus: Option<u32>,
    pub ind_10: Option<u32>,
    pub ind_01: Option<u32>,
    /// Pole order of `x_z dz` at the end (`d + 1`).
    pub pole_order: Option<i32>,
    pub d: Option<i32>,
    pub d_tilde: Option<i32>,
}

/// Multiplicity with which `f` takes its value at `p` (order of `f − f(p)`,
/// or the pole order when `f(p) = ∞`).
pub fn value_multiplicity<T: Real>(f: &MeroExpr<T>, p: &ExtComplex<T>) -> Result<u32, ExprError> {
    let terms = f.safe_terms() + 8;
    let s = f.series_at(p, terms)?.ok_or(ExprError::IdenticallyZero)?;
    if s.valuation != 0 {
        return Ok(s.valuation.unsigned_abs());
    }
    let scale = s.coeffs.iter().fold(T::zero(), |m, c| m.max(c.norm()));
    let limit = T::tol(crate::complexkit::SERIES_ZERO_TOL) * scale;
    s.coeffs
        .iter()
        .enumerate()
        .skip(1)
        .find(|(_, c)| c.norm() > limit)
        .map(|(k, _)| k as u32)
        .ok_or(ExprError::IdenticallyZero)
}

/// `(ind, ind⁺, ind^{1,0}, ind^{0,1})` from the multiplicities at a singular end;
/// `None` when they are equal (bad end).
pub fn index_from_multiplicities(m: u32, n: u32) -> Option<(i32, u32, u32, u32)> {
    use std::cmp::Ordering::*;
    let ind = match m.cmp(&n) {
        Less => m as i32,
        Greater => -(n as i32),
        Equal => return None,
    };
    let plus = ind.unsigned_abs();
    let i10 = ((plus as i32 + ind) / 2) as u32;
    let i01 = ((plus as i32 - ind) / 2) as u32;
    Some((ind, plus, i10, i01))
}

/// Pole order of `x_z dz` at `p`: the largest pole order of the four forms.
pub fn pole_order_at<T: Real>(data: &WeierstrassData<T>, p: &ExtComplex<T>) -> Result<i32, DataError> {
    if data.is_essential_at(p) {
        return Err(DataError::EssentialEnd(p.to_string()));
    }
    let mut best = i32::MIN;
    for f in data.forms() {
        if !f.is_zero() {
            best = best.max(-f.form_order_at(p)?);
        }
    }
    Ok(best)
}

/// End classification (kind, multiplicities, index values, `d`, `d̃`).
pub fn classify_end<T: Real>(data: &WeierstrassData<T>, p: &ExtComplex<T>) -> Result<EndReport<T>, DataError> {
    if !data.is_puncture(p) {
        return Err(DataError::NotAPuncture(p.to_string()));
    }
    let mut report = EndReport {
        point: *p,
        kind: EndKind::Essential,
        mult_phi: None,
        mult_psi: None,
        ind: None,
        ind_plus: None,
        ind_10: None,
        ind_01: None,
        pole_order: None,
        d: None,
        d_tilde: None,
    };
    if data.is_essential_at(p) {
        return Ok(report);
    }
    let vphi = data.phi.eval(p)?;
    let vpsi = data.psi.eval(p)?;
    let m = value_multiplicity(&data.phi, p)?;
    let n = value_multiplicity(&data.psi, p)?;
    report.mult_phi = Some(m);
    report.mult_psi = Some(n);
    let (ind, plus, i10, i01) = if !vphi.approx_eq(&vpsi.conj(), T::tol(POINT_TOL)) {
        report.kind = EndKind::Regular;
        (0, 0, 0, 0)
    } else {
        match index_from_multiplicities(m, n) {
            Some(v) => {
                report.kind = EndKind::GoodSingular;
                v
            }
            None => {
                report.kind = EndKind::BadSingular;
                let order = pole_order_at(data, p)?;
                report.pole_order = Some(order);
                report.d = Some(order - 1);
                return Ok(report);
            }
        }
    };
    report.ind = Some(ind);
    report.ind_plus = Some(plus);
    report.ind_10 = Some(i10);
    report.ind_01 = Some(i01);
    let order = pole_order_at(data, p)?;
    report.pole_order = Some(order);
    report.d = Some(order - 1);
    report.d_tilde = Some(order - 1 - plus as i32);
    Ok(report)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct EndMultiplicity {
    pub d: i32,
    pub ind_plus: u32,
    pub d_tilde: i32,
    /// `d̃ ≥ 1`, the necessary condition for completeness.
    pub complete: bool,
}

/// `(d, ind⁺, d̃)` at a non-essential end.
pub fn end_multiplicity<T: Real>(data: &WeierstrassData<T>, p: &ExtComplex<T>) -> Result<EndMultiplicity, DataError> {
    let r = classify_end(data, p)?;
    match (r.kind, r.d, r.ind_plus, r.d_tilde) {
        (EndKind::Essential, ..) => Err(DataError::EssentialEnd(p.to_string())),
        (_, Some(d), Some(plus), Some(dt)) => Ok(EndMultiplicity { d, ind_plus: plus, d_tilde: dt, complete: dt >= 1 }),
        // Bad end: ind is undefined; report d with ind⁺ = 0.
        (_, Some(d), _, _) => Ok(EndMultiplicity { d, ind_plus: 0, d_tilde: d, complete: d >= 1 }),
        _ => Err(DataError::EssentialEnd(p.to_string())),
    }
}

// ---------------------------------------------------------------------------
// Möbius moves

/// Unimodular matrix `[[a, b], [c, d]]` acting by fractional linear maps.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct Mobius<T: Real> {
    pub a: Complex<T>,
    pub b: Complex<T>,
    pub c: Complex<T>,
    pub d: Complex<T>,
}

impl<T: Real> Mobius<T> {
    pub fn identity() -> Self {
        let (o, z) = (cr(T::one()), Complex::zero());
        Mobius { a: o, b: z, c: z, d: o }
    }

    /// `φ -> −1/φ`
    pub fn inversion() -> Self {
        let (o, z) = (cr(T::one()), Complex::zero());
        Mobius { a: z, b: -o, c: o, d: z }
    }

    /// `φ -> φ/(cφ + 1)`
    pub fn shear(c: Complex<T>) -> Self {
        let (o, z) = (cr(T::one()), Complex::zero());
        Mobius { a: o, b: z, c, d: o }
    }

    pub fn det(&self) -> Complex<T> {
        self.a * self.d - self.b * self.c
    }

    pub fn conj(&self) -> Self {
        Mobius { a: self.a.conj(), b: self.b.conj(), c: self.c.conj(), d: self.d.conj() }
    }

    /// Action on a point of the sphere.
    pub fn apply(&self, w: &ExtComplex<T>) -> ExtComplex<T> {
        match w {
            ExtComplex::Infinity => {
                if self.c.is_zero() {
                    ExtComplex::Infinity
                } else {
                    ExtComplex::Finite(self.a / self.c)
                }
            }
            ExtComplex::Finite(w) => {
                let den = self.c * *w + self.d;
                if den.is_zero() {
                    ExtComplex::Infinity
                } else {
                    ExtComplex::Finite((self.a * *w + self.b) / den)
                }
            }
        }
    }
}

/// `α f + β`, when representable.
fn affine<T: Real>(f: &MeroExpr<T>, alpha: Complex<T>, beta: Complex<T>) -> Result<MeroExpr<T>, ExprError> {
    let scaled = if alpha.is_zero() { MeroExpr::constant(Complex::zero()) } else { f.scale(alpha) };
    if beta.is_zero() {
        return Ok(scaled);
    }
    scaled.try_add(&MeroExpr::constant(beta)).ok_or(ExprError::NotAlgebraic)
}

/// `(a f + b)/(c f + d)` and the factor `c f + d`.
fn fractional<T: Real>(f: &MeroExpr<T>, m: &Mobius<T>) -> Result<(MeroExpr<T>, MeroExpr<T>), ExprError> {
    let num = affine(f, m.a, m.b)?;
    let den = affine(f, m.c, m.d)?;
    Ok((num.div(&den)?, den))
}

/// Applies `φ -> (aφ+b)/(cφ+d)`, `ψ -> (āψ+b̄)/(c̄ψ+d̄)`, `dh -> (cφ+d)(c̄ψ+d̄) dh`.
pub fn mobius_transform<T: Real>(data: &WeierstrassData<T>, m: &Mobius<T>) -> Result<WeierstrassData<T>, DataError> {
    let det = m.det();
    if (det - cr(T::one())).norm() > T::tol(1e-12) {
        return Err(DataError::NotUnimodular(det.to_string()));
    }
    let (phi, fphi) = fractional(&data.phi, m)?;
    let (psi, fpsi) = fractional(&data.psi, &m.conj())?;
    let dh = data.dh.mul(&fphi).mul(&fpsi);
    WeierstrassData::new(phi, psi, dh, data.punctures.clone(), data.has_involution)
}

/// A Möbius move after which φ and ψ are both finite at `p`, and the moved data.
pub fn normalize_at_end<T: Real>(
    data: &WeierstrassData<T>,
    p: &ExtComplex<T>,
) -> Result<(Mobius<T>, WeierstrassData<T>), DataError> {
    let err = |e: ExprError| DataError::NotNormalizable(p.to_string(), e.to_string());
    let vphi = data.phi.eval(p).map_err(err)?;
    let vpsi = data.psi.eval(p).map_err(err)?;
    if !vphi.is_infinite() && !vpsi.is_infinite() {
        return Ok((Mobius::identity(), data.clone()));
    }
    let tol = T::tol(POINT_TOL);
    let is_zero = |v: &ExtComplex<T>| v.approx_eq(&ExtComplex::zero(), tol);
    let m = if !is_zero(&vphi) && !is_zero(&vpsi) { Mobius::inversion() } else { Mobius::shear(cr(T::one())) };
    let moved = mobius_transform(data, &m).map_err(|e| match e {
        DataError::Expr(x) => err(x),
        other => other,
    })?;
    Ok((m, moved))
}

/// Exact degree check `Σ ind = deg φ − deg ψ` for algebraic data.
pub fn index_sum<T: Real>(data: &WeierstrassData<T>, ends: &[EndReport<T>]) -> Option<(i32, i32)> {
    let dphi = data.phi.degree().ok()? as i32;
    let dpsi = data.psi.degree().ok()? as i32;
    let mut sum = 0;
    for e in ends {
        sum += e.ind?;
    }
    Some((sum, dphi - dpsi))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::complexkit::CPoly;
    use crate::gallery::{make_example, Family, Params};
    use crate::scalar::c;

    fn example(f: Family) -> WeierstrassData<f64> {
        make_example(f, &Params::new()).unwrap().data
    }

    fn poly(coeffs: &[f64]) -> MeroExpr<f64> {
        MeroExpr::poly(CPoly::from_real(coeffs))
    }

    fn zero() -> ExtComplex<f64> {
        ExtComplex::zero()
    }

    #[test]
    fn gallery_admissibility_matches_metadata() {
        for f in Family::ALL {
            let ex = make_example::<f64>(f, &Params::new()).unwrap();
            let a = check_admissibility(&ex.data).unwrap();
            assert_eq!(a.passed, ex.expected.admissible, "{f}: {:?}", a.violations);
        }
    }

    #[test]
    fn essential_mobius_height_zeros_at_plus_minus_i() {
        let a = check_admissibility(&example(Family::EssentialMobius)).unwrap();
        assert_eq!(a.violations.len(), 2);
        for v in &a.violations {
            let Violation::HeightOrderMismatch { point, expected_zero: 0, found: 1 } = v else { panic!("{v:?}") };
            let z = point.as_finite().unwrap();
            assert!(z.re.abs() < 1e-12 && (z.im.abs() - 1.0).abs() < 1e-12);
        }
    }

    #[test]
    fn interior_pole_without_height_zero_is_flagged() {
        let phi = MeroExpr::from_polys(CPoly::from_real(&[1.0]), CPoly::from_real(&[0.0, 1.0])).unwrap();
        let data =
            WeierstrassData::new(phi, poly(&[0.0, 1.0]), poly(&[1.0]), vec![ExtComplex::Infinity], false).unwrap();
        let a = check_admissibility(&data).unwrap();
        assert!(!a.passed);
        assert!(a.violations.iter().any(|v| matches!(
            v,
            Violation::HeightOrderMismatch { point, expected_zero: 1, found: 0 } if point.approx_eq(&zero(), 1e-12)
        )));
    }

    #[test]
    fn catenoid_residues_at_origin() {
        let data = example(Family::Catenoid);
        let rep = check_periods(&data, &default_contour_radii(&data)).unwrap();
        let e = &rep.entries[0];
        assert!(e.res_phi_dh.norm() < 1e-14);
        assert!(e.res_psi_dh.norm() < 1e-14);
        assert!((e.res_dh - c(1.0, 0.0)).norm() < 1e-14);
        assert!((e.res_phi_psi_dh - c(-1.0, 0.0)).norm() < 1e-14);
        assert!(rep.passed);
    }

    #[test]
    fn periods_pass_on_gallery_defaults() {
        for f in Family::ALL {
            let data = example(f);
            let rep = check_periods(&data, &default_contour_radii(&data)).unwrap();
            assert!(rep.passed, "{f}: {}", rep.max_residual);
        }
    }

    #[test]
    fn residue_reduction_matches_loop_integrals() {
        let data = example(Family::Meeks);
        let rep = check_periods(&data, &[None, None]).unwrap();
        for (e, r) in rep.entries.iter().zip([0.5, 3.0]) {
            let num = numeric_residues(&data, &e.point, r).unwrap();
            let exact = [e.res_dh, e.res_phi_dh, e.res_psi_dh, e.res_phi_psi_dh];
            for k in 0..4 {
                assert!((num[k] - exact[k]).norm() < 1e-8);
            }
        }
    }

    #[test]
    fn essential_puncture_requires_radius() {
        let data = example(Family::Essential);
        assert!(matches!(check_periods(&data, &[None, None]), Err(ExprError::MissingContourRadius(_))));
    }

    #[test]
    fn end_kinds() {
        let case5 = example(Family::Case5);
        let r = classify_end(&case5, &zero()).unwrap();
        assert_eq!(r.kind, EndKind::GoodSingular);
        assert_eq!((r.mult_phi, r.mult_psi, r.ind), (Some(1), Some(2), Some(1)));

        let cat = example(Family::Catenoid);
        let r = classify_end(&cat, &zero()).unwrap();
        assert_eq!(r.kind, EndKind::Regular);
        assert_eq!(r.ind, Some(0));

        let bad = WeierstrassData::new(
            poly(&[0.0, 1.0]),
            poly(&[0.0, 1.0]),
            poly(&[1.0]),
            vec![zero(), ExtComplex::Infinity],
            false,
        )
        .unwrap();
        assert_eq!(classify_end(&bad, &zero()).unwrap().kind, EndKind::BadSingular);

        let ess = example(Family::Essential);
        assert_eq!(classify_end(&ess, &ExtComplex::Infinity).unwrap().kind, EndKind::Essential);
    }

    #[test]
    fn end_multiplicities() {
        let cat = example(Family::Catenoid);
        let m = end_multiplicity(&cat, &zero()).unwrap();
        assert_eq!((m.d, m.ind_plus, m.d_tilde), (1, 0, 1));

        let two = example(Family::TwoSingularEnds);
        let m0 = end_multiplicity(&two, &zero()).unwrap();
        let mi = end_multiplicity(&two, &ExtComplex::Infinity).unwrap();
        assert_eq!((m0.d, m0.ind_plus, m0.d_tilde), (3, 2, 1));
        assert_eq!((mi.d, mi.ind_plus, mi.d_tilde), (5, 2, 3));

        let case5 = example(Family::Case5);
        let m = end_multiplicity(&case5, &zero()).unwrap();
        assert_eq!((m.d, m.ind_plus, m.d_tilde), (2, 1, 1));
    }

    #[test]
    fn inversion_at_infinity_preserves_index() {
        let two = example(Family::TwoSingularEnds);
        let (m, moved) = normalize_at_end(&two, &ExtComplex::Infinity).unwrap();
        assert_eq!(m, Mobius::inversion());
        assert!(!moved.phi.eval(&ExtComplex::Infinity).unwrap().is_infinite());
        assert!(!moved.psi.eval(&ExtComplex::Infinity).unwrap().is_infinite());
        let r = classify_end(&moved, &ExtComplex::Infinity).unwrap();
        assert_eq!((r.mult_phi, r.mult_psi, r.ind), (Some(4), Some(2), Some(-2)));
        assert_eq!(r.d_tilde, Some(3));
    }

    #[test]
    fn identity_move_is_exact() {
        let cat = example(Family::Catenoid);
        let (m, moved) = normalize_at_end(&cat, &zero()).unwrap();
        assert_eq!(m, Mobius::identity());
        assert_eq!(moved, cat);
    }

    #[test]
    fn index_sum_matches_degree_difference() {
        for f in [Family::Catenoid, Family::Case5, Family::TwoSingularEnds, Family::Enneper, Family::Meeks] {
            let data = example(f);
            let ends: Vec<_> = data.punctures.iter().map(|p| classify_end(&data, p).unwrap()).collect();
            let (sum, diff) = index_sum(&data, &ends).unwrap();
            assert_eq!(sum, diff, "{f}");
        }
    }
}
