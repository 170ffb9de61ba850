use num_complex::Complex;
use num_traits::Zero;

use super::ext::ExtComplex;
use super::poly::CPoly;
use super::roots::poly_roots;
use super::series::Laurent;
use crate::scalar::{cr, Real};

/// Relative tolerance used when cancelling common roots of numerator and denominator.
const REDUCE_TOL: f64 = 1e-9;
/// Coefficients below this fraction of the polynomial norm are rounded to zero.
const COEFF_ZERO_TOL: f64 = 1e-12;

#[derive(Clone, Debug, PartialEq, thiserror::Error)]
pub enum ExprError {
    #[error("denominator is the zero polynomial")]
    ZeroDenominator,
    #[error("evaluation at an essential singularity ({0})")]
    EssentialSingularity(String),
    #[error("expression is identically zero")]
    IdenticallyZero,
    #[error("expression has an exponential factor; operation needs rational data")]
    NotAlgebraic,
    #[error("contour of radius {radius} passes through or encloses another singularity ({point})")]
    BadContour { radius: String, point: String },
    #[error("essential singularity at {0} needs a contour radius")]
    MissingContourRadius(String),
    #[error("numeric contour integral did not converge")]
    ContourNonConvergence,
    #[error("polynomial root finding did not converge")]
    RootFailure,
}

/// Reduced rational function `num / den`, with a monic denominator.
#[derive(Clone, Debug, PartialEq)]
pub struct Rational<T> {
    num: CPoly<T>,
    den: CPoly<T>,
}

impl<T: Real> Rational<T> {
    pub fn new(num: CPoly<T>, den: CPoly<T>) -> Result<Self, ExprError> {
        if den.is_zero() {
            return Err(ExprError::ZeroDenominator);
        }
        Ok(Self::reduce(num, den))
    }

    pub fn poly(p: CPoly<T>) -> Self {
        Self::reduce(p, CPoly::one())
    }

    pub fn constant(c: Complex<T>) -> Self {
        Self::poly(CPoly::constant(c))
    }

    pub fn zero() -> Self {
        Rational { num: CPoly::zero(), den: CPoly::one() }
    }

    pub fn num(&self) -> &CPoly<T> {
        &self.num
    }

    pub fn den(&self) -> &CPoly<T> {
        &self.den
    }

    pub fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    pub fn is_constant(&self) -> bool {
        self.num.degree().unwrap_or(0) == 0 && self.den.degree() == Some(0)
    }

    /// `max(deg num, deg den)`: the mapping degree on the sphere.
    pub fn degree(&self) -> usize {
        self.num.degree().unwrap_or(0).max(self.den.degree().unwrap_or(0))
    }

    fn reduce(num: CPoly<T>, den: CPoly<T>) -> Self {
        let mut num = num.cleaned(T::tol(COEFF_ZERO_TOL));
        let mut den = den.cleaned(T::tol(COEFF_ZERO_TOL));
        if num.is_zero() {
            return Self::zero();
        }
        // Exact powers of z first.
        let k = num.low_order().unwrap_or(0).min(den.low_order().unwrap_or(0));
        num = num.shift_down(k);
        den = den.shift_down(k);
        if den.degree().unwrap_or(0) > 0 && num.degree().unwrap_or(0) > 0 {
            if let Ok(roots) = poly_roots(&den) {
                let tol = T::tol(REDUCE_TOL);
                for r in roots {
                    for _ in 0..r.multiplicity {
                        if num.degree().unwrap_or(0) == 0 {
                            break;
                        }
                        let scale = num.eval_scale(r.value).max(T::min_positive_value());
                        if num.eval(r.value).norm() > tol * scale {
                            break;
                        }
                        num = num.deflate(r.value).0;
                        den = den.deflate(r.value).0;
                    }
                }
            }
        }
        let lead = den.leading();
        let inv = Complex::new(T::one(), T::zero()) / lead;
        Rational {
            num: num.scale(inv).cleaned(T::tol(COEFF_ZERO_TOL)),
            den: den.scale(inv).cleaned(T::tol(COEFF_ZERO_TOL)),
        }
    }

    /// `None` at a pole.
    pub fn eval(&self, z: Complex<T>) -> Option<Complex<T>> {
        let d = self.den.eval(z);
        if d.norm() <= T::epsilon() * self.den.eval_scale(z) * T::lit(0.5) {
            if self.num.eval(z).is_zero() && self.num.is_zero() {
                return Some(Complex::zero());
            }
            return None;
        }
        Some(self.num.eval(z) / d)
    }

    /// Plain floating evaluation without pole detection.
    pub fn eval_raw(&self, z: Complex<T>) -> Complex<T> {
        self.num.eval(z) / self.den.eval(z)
    }

    pub fn derivative(&self) -> Self {
        let n = &(&self.num.derivative() * &self.den) - &(&self.num * &self.den.derivative());
        Self::reduce(n, &self.den * &self.den)
    }

    pub fn mul(&self, rhs: &Self) -> Self {
        Self::reduce(&self.num * &rhs.num, &self.den * &rhs.den)
    }

    pub fn add(&self, rhs: &Self) -> Self {
        if self.den == rhs.den {
            return Self::reduce(&self.num + &rhs.num, self.den.clone());
        }
        Self::reduce(&(&self.num * &rhs.den) + &(&rhs.num * &self.den), &self.den * &rhs.den)
    }

    pub fn neg(&self) -> Self {
        Rational { num: -&self.num, den: self.den.clone() }
    }

    pub fn inv(&self) -> Result<Self, ExprError> {
        if self.is_zero() {
            return Err(ExprError::IdenticallyZero);
        }
        Ok(Self::reduce(self.den.clone(), self.num.clone()))
    }

    pub fn scale(&self, s: Complex<T>) -> Self {
        Self::reduce(self.num.scale(s), self.den.clone())
    }

    /// `w -> f(1/w)`.
    pub fn pullback_inf(&self) -> Self {
        let dn = self.num.degree().unwrap_or(0);
        let dd = self.den.degree().unwrap_or(0);
        let n = self.num.reversed(dn);
        let d = self.den.reversed(dd);
        if self.num.is_zero() {
            return Self::zero();
        }
        if dd >= dn {
            Self::reduce(n.shift_up(dd - dn), d)
        } else {
            Self::reduce(n, d.shift_up(dn - dd))
        }
    }

    /// Order of the pole at infinity (`deg num - deg den`, negative for a zero).
    pub fn order_at_infinity(&self) -> i32 {
        self.num.degree().unwrap_or(0) as i32 - self.den.degree().unwrap_or(0) as i32
    }

    pub fn has_pole_at(&self, z: Complex<T>) -> bool {
        let scale = self.den.eval_scale(z).max(T::min_positive_value());
        self.den.degree().unwrap_or(0) > 0 && self.den.eval(z).norm() <= T::tol(REDUCE_TOL) * scale
    }

    pub fn approx_eq(&self, rhs: &Self, tol: T) -> bool {
        let diff = self.add(&rhs.neg());
        let scale = self.num.norm().max(rhs.num.norm()).max(T::one());
        diff.num.norm() <= tol * scale
    }

    /// Laurent series around a finite point.
    pub fn series_at(&self, p: Complex<T>, terms: usize) -> Option<Laurent<T>> {
        let extra = self.den.degree().unwrap_or(0);
        let n = terms + extra + 1;
        let num = Laurent::from_taylor(0, &self.num.taylor_shift(p), n)?;
        let den = Laurent::from_taylor(0, &self.den.taylor_shift(p), n).expect("denominator is nonzero");
        let mut q = num.div(&den);
        q.coeffs.truncate(terms);
        Some(q)
    }
}

/// Meromorphic expression `rat(z) * exp(expo(z))` with rational `rat` and `expo`.
#[derive(Clone, Debug, PartialEq)]
pub struct MeroExpr<T> {
    rat: Rational<T>,
    expo: Rational<T>,
}

impl<T: Real> MeroExpr<T> {
    pub fn new(rat: Rational<T>, expo: Rational<T>) -> Self {
        if rat.is_zero() {
            return MeroExpr { rat, expo: Rational::zero() };
        }
        MeroExpr { rat, expo }
    }

    pub fn rational(rat: Rational<T>) -> Self {
        MeroExpr { rat, expo: Rational::zero() }
    }

    /// `num / den` with no exponential part.
    pub fn from_polys(num: CPoly<T>, den: CPoly<T>) -> Result<Self, ExprError> {
        Ok(Self::rational(Rational::new(num, den)?))
    }

    pub fn poly(p: CPoly<T>) -> Self {
        Self::rational(Rational::poly(p))
    }

    pub fn constant(c: Complex<T>) -> Self {
        Self::rational(Rational::constant(c))
    }

    pub fn one() -> Self {
        Self::constant(cr(T::one()))
    }

    /// The coordinate function `z`.
    pub fn z() -> Self {
        Self::poly(CPoly::z())
    }

    pub fn rat(&self) -> &Rational<T> {
        &self.rat
    }

    pub fn expo(&self) -> &Rational<T> {
        &self.expo
    }

    pub fn is_algebraic(&self) -> bool {
        self.expo.is_zero()
    }

    pub fn is_zero(&self) -> bool {
        self.rat.is_zero()
    }

    pub fn is_constant(&self) -> bool {
        self.rat.is_constant() && self.expo.is_constant()
    }

    /// Mapping degree of an algebraic expression.
    pub fn degree(&self) -> Result<usize, ExprError> {
        if !self.is_algebraic() {
            return Err(ExprError::NotAlgebraic);
        }
        Ok(self.rat.degree())
    }

    pub fn is_essential_at(&self, p: &ExtComplex<T>) -> bool {
        if self.expo.is_zero() {
            return false;
        }
        match p {
            ExtComplex::Finite(z) => self.expo.has_pole_at(*z),
            ExtComplex::Infinity => self.expo.order_at_infinity() > 0,
        }
    }

    /// Essential singularities (poles of the exponent) on the sphere.
    pub fn essential_points(&self) -> Vec<ExtComplex<T>> {
        if self.expo.is_zero() {
            return Vec::new();
        }
        let mut pts: Vec<ExtComplex<T>> = poly_roots(self.expo.den())
            .map(|r| r.into_iter().map(|r| ExtComplex::Finite(r.value)).collect())
            .unwrap_or_default();
        if self.expo.order_at_infinity() > 0 {
            pts.push(ExtComplex::Infinity);
        }
        pts
    }

    /// `(rat(z), expo(z))` at a finite point, `None` at a pole of either part.
    pub fn eval_parts(&self, z: Complex<T>) -> Option<(Complex<T>, Complex<T>)> {
        let e = if self.expo.is_zero() { Complex::zero() } else { self.expo.eval(z)? };
        Some((self.rat.eval(z)?, e))
    }

    /// Floating evaluation at a finite point (infinite or NaN at singularities).
    pub fn eval_raw(&self, z: Complex<T>) -> Complex<T> {
        let r = self.rat.eval_raw(z);
        if self.expo.is_zero() {
            r
        } else {
            r * self.expo.eval_raw(z).exp()
        }
    }

    pub fn eval(&self, z: &ExtComplex<T>) -> Result<ExtComplex<T>, ExprError> {
        if self.is_essential_at(z) {
            return Err(ExprError::EssentialSingularity(z.to_string()));
        }
        match z {
            ExtComplex::Finite(z) => Ok(match self.rat.eval(*z) {
                None => ExtComplex::Infinity,
                Some(r) => {
                    let e = if self.expo.is_zero() {
                        Complex::zero()
                    } else {
                        self.expo.eval(*z).unwrap_or_else(Complex::zero)
                    };
                    ExtComplex::Finite(r * e.exp())
                }
            }),
            ExtComplex::Infinity => self.pullback_inf().eval(&ExtComplex::zero()),
        }
    }

    pub fn eval_finite(&self, z: Complex<T>) -> Result<ExtComplex<T>, ExprError> {
        self.eval(&ExtComplex::Finite(z))
    }

    /// `f' = (rat' + rat * expo') exp(expo)`.
    pub fn derivative(&self) -> Self {
        let rat = if self.expo.is_zero() {
            self.rat.derivative()
        } else {
            self.rat.derivative().add(&self.rat.mul(&self.expo.derivative()))
        };
        Self::new(rat, self.expo.clone())
    }

    /// `f'/f = rat'/rat + expo'`, always rational.
    pub fn log_derivative(&self) -> Result<Rational<T>, ExprError> {
        let r = self.rat.derivative().mul(&self.rat.inv()?);
        Ok(if self.expo.is_zero() { r } else { r.add(&self.expo.derivative()) })
    }

    pub fn mul(&self, rhs: &Self) -> Self {
        Self::new(self.rat.mul(&rhs.rat), self.expo.add(&rhs.expo))
    }

    pub fn inv(&self) -> Result<Self, ExprError> {
        Ok(Self::new(self.rat.inv()?, self.expo.neg()))
    }

    pub fn div(&self, rhs: &Self) -> Result<Self, ExprError> {
        Ok(self.mul(&rhs.inv()?))
    }

    pub fn neg(&self) -> Self {
        Self::new(self.rat.neg(), self.expo.clone())
    }

    pub fn scale(&self, s: Complex<T>) -> Self {
        Self::new(self.rat.scale(s), self.expo.clone())
    }

    pub fn powi(&self, k: u32) -> Self {
        (0..k).fold(Self::one(), |acc, _| acc.mul(self))
    }

    /// Sum, available when both exponents agree.
    pub fn try_add(&self, rhs: &Self) -> Option<Self> {
        if self.is_zero() {
            return Some(rhs.clone());
        }
        if rhs.is_zero() {
            return Some(self.clone());
        }
        if !self.expo.approx_eq(&rhs.expo, T::tol(1e-12)) {
            return None;
        }
        Some(Self::new(self.rat.add(&rhs.rat), self.expo.clone()))
    }

    /// `w -> f(1/w)`.
    pub fn pullback_inf(&self) -> Self {
        Self::new(self.rat.pullback_inf(), self.expo.pullback_inf())
    }

    /// Coefficient of the pulled-back form: `f(z) dz = -f(1/w)/w^2 dw`.
    pub fn form_pullback_inf(&self) -> Self {
        let w2 = Rational::new(CPoly::constant(-cr(T::one())), CPoly::monomial(cr(T::one()), 2))
            .expect("nonzero denominator");
        Self::new(self.rat.pullback_inf().mul(&w2), self.expo.pullback_inf())
    }

    /// Laurent series of the function in the local coordinate at `p`
    /// (`u = z - p`, or `u = 1/z` at infinity). `None` for the zero function.
    pub fn series_at(&self, p: &ExtComplex<T>, terms: usize) -> Result<Option<Laurent<T>>, ExprError> {
        match p {
            ExtComplex::Infinity => self.pullback_inf().series_at(&ExtComplex::zero(), terms),
            ExtComplex::Finite(z) => {
                if self.is_essential_at(p) {
                    return Err(ExprError::EssentialSingularity(p.to_string()));
                }
                let Some(r) = self.rat.series_at(*z, terms) else { return Ok(None) };
                if self.expo.is_zero() {
                    return Ok(Some(r));
                }
                let e = self
                    .expo
                    .series_at(*z, terms)
                    .map(|s| s.exp(terms))
                    .unwrap_or_else(|| Laurent::constant(cr(T::one()), terms));
                Ok(r.mul(&e).renormalized())
            }
        }
    }

    /// Laurent series of the 1-form `f dz` in the local coordinate at `p`.
    pub fn form_series_at(&self, p: &ExtComplex<T>, terms: usize) -> Result<Option<Laurent<T>>, ExprError> {
        match p {
            ExtComplex::Infinity => self.form_pullback_inf().series_at(&ExtComplex::zero(), terms),
            ExtComplex::Finite(_) => self.series_at(p, terms),
        }
    }

    /// Order of the function at `p` (positive: zero, negative: pole).
    pub fn order_at(&self, p: &ExtComplex<T>) -> Result<i32, ExprError> {
        let terms = 4 + self.rat.degree();
        self.series_at(p, terms)?.map(|s| s.valuation).ok_or(ExprError::IdenticallyZero)
    }

    /// Order of the 1-form `f dz` at `p`.
    pub fn form_order_at(&self, p: &ExtComplex<T>) -> Result<i32, ExprError> {
        let terms = 4 + self.rat.degree();
        self.form_series_at(p, terms)?.map(|s| s.valuation).ok_or(ExprError::IdenticallyZero)
    }

    /// Number of series terms that safely covers the principal part anywhere.
    pub(crate) fn safe_terms(&self) -> usize {
        self.rat.num().degree().unwrap_or(0) + self.rat.den().degree().unwrap_or(0) + 8
    }

    /// Finite poles of the rational part and all essential points.
    pub fn singular_points(&self) -> Vec<ExtComplex<T>> {
        let mut pts: Vec<ExtComplex<T>> = poly_roots(self.rat.den())
            .map(|r| r.into_iter().map(|r| ExtComplex::Finite(r.value)).collect())
            .unwrap_or_default();
        for e in self.essential_points() {
            if !pts.iter().any(|q| q.approx_eq(&e, T::tol(1e-9))) {
                pts.push(e);
            }
        }
        pts
    }
}
