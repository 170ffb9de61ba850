use num_complex::Complex;
use num_traits::Zero;

use super::expr::{ExprError, MeroExpr};
use super::ext::ExtComplex;
use crate::quad::periodic_trapezoid;
use crate::scalar::Real;

/// Node cap for numeric contour integrals.
pub const CONTOUR_MAX_NODES: usize = 1 << 20;

/// `∮ f dz` counterclockwise over `|z - center| = radius`.
pub fn circle_integral<T: Real>(
    f: impl Fn(Complex<T>) -> Complex<T>,
    center: Complex<T>,
    radius: T,
    tol: T,
) -> Result<Complex<T>, ExprError> {
    let g = |t: T| {
        let e = Complex::new(t.cos(), t.sin());
        f(center + e * radius) * e * Complex::new(T::zero(), radius)
    };
    periodic_trapezoid(g, tol, tol, 16, CONTOUR_MAX_NODES)
        .map(|r| r.value)
        .map_err(|_| ExprError::ContourNonConvergence)
}

/// Residue of the form `w dz` at `p`.
///
/// Exact Laurent extraction at poles and regular points; at essential points
/// a contour radius must be supplied and the residue is computed numerically
/// on that circle (`|z - p| = r`, or `|z| = r` around infinity).
pub fn residue<T: Real>(
    w: &MeroExpr<T>,
    p: &ExtComplex<T>,
    fallback_radius: Option<T>,
) -> Result<Complex<T>, ExprError> {
    if w.is_zero() {
        return Ok(Complex::zero());
    }
    if !w.is_essential_at(p) {
        let s = w.form_series_at(p, w.safe_terms())?;
        return Ok(s.and_then(|s| s.coefficient(-1)).unwrap_or_else(Complex::zero));
    }
    let r = fallback_radius.ok_or_else(|| ExprError::MissingContourRadius(p.to_string()))?;
    validate_contour(w, p, r)?;
    let tol = T::tol(1e-12);
    let two_pi_i = Complex::new(T::zero(), T::TAU());
    match p {
        ExtComplex::Finite(c) => Ok(circle_integral(|z| w.eval_raw(z), *c, r, tol)? / two_pi_i),
        ExtComplex::Infinity => Ok(-circle_integral(|z| w.eval_raw(z), Complex::zero(), r, tol)? / two_pi_i),
    }
}

/// Rejects a residue contour that passes through or encloses another singularity.
pub fn validate_contour<T: Real>(w: &MeroExpr<T>, p: &ExtComplex<T>, r: T) -> Result<(), ExprError> {
    let margin = T::tol(1e-9);
    for s in w.singular_points() {
        if s.approx_eq(p, margin) {
            continue;
        }
        let bad = match (p, &s) {
            (ExtComplex::Finite(c), ExtComplex::Finite(q)) => (q - c).norm() <= r * (T::one() + margin),
            (ExtComplex::Finite(_), ExtComplex::Infinity) => false,
            (ExtComplex::Infinity, ExtComplex::Finite(q)) => q.norm() >= r * (T::one() - margin),
            (ExtComplex::Infinity, ExtComplex::Infinity) => false,
        };
        if bad {
            return Err(ExprError::BadContour { radius: format!("{r}"), point: s.to_string() });
        }
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::complexkit::{CPoly, Rational};
    use crate::scalar::c;

    fn rat(num: &[f64], den: &[f64]) -> MeroExpr<f64> {
        MeroExpr::from_polys(CPoly::from_real(num), CPoly::from_real(den)).unwrap()
    }

    #[test]
    fn simple_pole_at_origin() {
        let r = residue(&rat(&[1.0], &[0.0, 1.0]), &ExtComplex::zero(), None).unwrap();
        assert!((r - c(1.0, 0.0)).norm() < 1e-15);
    }

    #[test]
    fn double_pole_with_simple_part() {
        // s(z - t)/z^2 = s/z - s t/z^2
        let w = rat(&[-0.3, 1.0], &[0.0, 0.0, 1.0]);
        let exact = residue(&w, &ExtComplex::zero(), None).unwrap();
        assert!((exact - c(1.0, 0.0)).norm() < 1e-14);
        let numeric =
            circle_integral(|z| w.eval_raw(z), c(0.0, 0.0), 0.5, 1e-13).unwrap() / c(0.0, std::f64::consts::TAU);
        assert!((exact - numeric).norm() < 1e-12);
    }

    #[test]
    fn no_residue_at_infinity() {
        let w = rat(&[-0.09, 0.0, 1.0], &[0.0, 0.0, 1.0]);
        let exact = residue(&w, &ExtComplex::Infinity, None).unwrap();
        assert!(exact.norm() < 1e-15);
        let numeric =
            -circle_integral(|z| w.eval_raw(z), c(0.0, 0.0), 10.0, 1e-13).unwrap() / c(0.0, std::f64::consts::TAU);
        assert!(numeric.norm() < 1e-12);
    }

    #[test]
    fn essential_point_needs_radius_and_clean_contour() {
        // e^{1/z}/(z - 1): residue at 0 computed on |z| = 0.5
        let w = MeroExpr::new(
            Rational::new(CPoly::<f64>::from_real(&[1.0]), CPoly::from_real(&[-1.0, 1.0])).unwrap(),
            Rational::new(CPoly::from_real(&[1.0]), CPoly::from_real(&[0.0, 1.0])).unwrap(),
        );
        let p = ExtComplex::zero();
        assert!(matches!(residue(&w, &p, None), Err(ExprError::MissingContourRadius(_))));
        assert!(matches!(residue(&w, &p, Some(1.5)), Err(ExprError::BadContour { .. })));
        // Res_0 = -sum_{n>=0} 1/n! ... Laurent: -(1 + z + ..)(1 + 1/z + 1/(2 z^2) + ..) -> -(e - 1)
        let r = residue(&w, &p, Some(0.5)).unwrap();
        assert!((r - c(1.0 - std::f64::consts::E, 0.0)).norm() < 1e-11, "{r}");
    }
}
