//! Named example families with their parameter predicates and known totals.

use std::collections::BTreeMap;
use std::f64::consts::PI;
use std::fmt;
use std::str::FromStr;

use num_complex::Complex;
use serde::Serialize;

use crate::complexkit::{CPoly, ExtComplex, MeroExpr, Rational};
use crate::scalar::Real;
use crate::weierstrass::{DataError, WeierstrassData};

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Family {
    /// `φ = z, ψ = c/z, dh = s z dz` on the plane.
    Enneper,
    /// `φ = z + 1, ψ = c/z, dh = s z dz` on the plane.
    EnneperShifted,
    /// `φ = z + t, ψ = −1/(z − t), dh = s (z − t)/z² dz` on the punctured plane.
    Catenoid,
    /// `φ = z^m (z − a), ψ = z^{m+1}/(z − b), dh = ρ (z − b)/z^{m+2} dz`.
    Case5,
    /// `φ = z²(z² − a), ψ = z⁴/(z² − a), dh = (z² − a)/z⁴ dz`.
    TwoSingularEnds,
    /// Möbius strip double cover with `φ = (z − λ)/(z − λ̄) z^{2m}`.
    Meeks,
    /// `φ = z^k e^{az}, ψ = −e^{az}/z^k, dh = e^{−az} dz`.
    Essential,
    /// Möbius strip double cover with `φ = z^{2p−1} e^{(z − 1/z)/2}`.
    EssentialMobius,
}

impl Family {
    pub const ALL: [Family; 8] = [
        Family::Enneper,
        Family::EnneperShifted,
        Family::Catenoid,
        Family::Case5,
        Family::TwoSingularEnds,
        Family::Meeks,
        Family::Essential,
        Family::EssentialMobius,
    ];

    pub fn name(&self) -> &'static str {
        match self {
            Family::Enneper => "enneper",
            Family::EnneperShifted => "enneper-shifted",
            Family::Catenoid => "catenoid",
            Family::Case5 => "case5",
            Family::TwoSingularEnds => "two-singular-ends",
            Family::Meeks => "meeks",
            Family::Essential => "essential",
            Family::EssentialMobius => "essential-mobius",
        }
    }

    /// Default parameters, all inside the family's admissible range.
    pub fn default_params(&self) -> Params {
        let mut p = Params::new();
        match self {
            Family::Enneper => p.set("c", -1.0, 0.0).set("s", 1.0, 0.0),
            Family::EnneperShifted => p.set("c", -1.0, 0.0).set("s", 1.0, 0.0),
            Family::Catenoid => p.set("t", 0.3, 0.0).set("s", 1.0, 0.0),
            Family::Case5 => p.set("m", 1.0, 0.0).set("a", -0.5, 0.0).set("b", -0.5, 0.0).set("rho", 1.0, 0.0),
            Family::TwoSingularEnds => p.set("a", -2.0, 0.0),
            Family::Meeks => {
                let l = Complex::from_polar(1.0, PI / 3.0);
                p.set("m", 1.0, 0.0).set("lambda", l.re, l.im)
            }
            Family::Essential => p.set("k", 2.0, 0.0).set("a", 0.5, 0.0),
            Family::EssentialMobius => p.set("p", 2.0, 0.0),
        };
        p
    }
}

impl fmt::Display for Family {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Family {
    type Err = GalleryError;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Family::ALL.into_iter().find(|f| f.name() == s).ok_or_else(|| GalleryError::UnknownFamily(s.to_string()))
    }
}

#[derive(Clone, Debug, PartialEq, thiserror::Error)]
pub enum GalleryError {
    #[error("unknown family `{0}`")]
    UnknownFamily(String),
    #[error("missing parameter `{0}`")]
    MissingParam(&'static str),
    #[error("unknown parameter `{0}` for this family")]
    UnknownParam(String),
    #[error("parameter `{name}` must be {expected}")]
    BadParam { name: &'static str, expected: &'static str },
    #[error("parameters violate the family condition: {0}")]
    Predicate(&'static str),
    #[error(transparent)]
    Data(#[from] DataError),
}

/// Named complex parameters; integer and real parameters use the real part.
#[derive(Clone, Debug, Default, PartialEq, Serialize)]
pub struct Params(BTreeMap<String, [f64; 2]>);

impl Params {
    pub fn new() -> Self {
        Params(BTreeMap::new())
    }

    pub fn set(&mut self, name: &str, re: f64, im: f64) -> &mut Self {
        self.0.insert(name.to_string(), [re, im]);
        self
    }

    pub fn get(&self, name: &str) -> Option<Complex<f64>> {
        self.0.get(name).map(|v| Complex::new(v[0], v[1]))
    }

    pub fn iter(&self) -> impl Iterator<Item = (&String, &[f64; 2])> {
        self.0.iter()
    }

    fn complex(&self, name: &'static str) -> Result<Complex<f64>, GalleryError> {
        self.get(name).ok_or(GalleryError::MissingParam(name))
    }

    fn real(&self, name: &'static str) -> Result<f64, GalleryError> {
        let v = self.complex(name)?;
        if v.im != 0.0 {
            return Err(GalleryError::BadParam { name, expected: "real" });
        }
        Ok(v.re)
    }

    fn integer(&self, name: &'static str, min: i64) -> Result<u32, GalleryError> {
        let v = self.real(name)?;
        if v.fract() != 0.0 || (v as i64) < min {
            return Err(GalleryError::BadParam { name, expected: "an integer in range" });
        }
        Ok(v as u32)
    }
}

/// Known values attached to an example.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Expected {
    /// `∫K dM` over the orientable surface (the double cover for strips).
    pub total_curvature: f64,
    /// `−∫K dM` over the non-orientable quotient, when there is one.
    pub quotient_total: Option<f64>,
    /// Whether the regularity search should come back empty.
    pub regular: bool,
    /// Whether the zeros of dh are exactly the poles of φ and ψ.
    pub admissible: bool,
}

#[derive(Clone, Debug)]
pub struct Example<T> {
    pub family: Family,
    pub params: Params,
    pub data: WeierstrassData<T>,
    pub expected: Expected,
}

fn cx<T: Real>(z: Complex<f64>) -> Complex<T> {
    Complex::new(T::lit(z.re), T::lit(z.im))
}

fn poly<T: Real>(coeffs: &[Complex<f64>]) -> CPoly<T> {
    CPoly::new(coeffs.iter().map(|&c| cx(c)).collect())
}

fn re(x: f64) -> Complex<f64> {
    Complex::new(x, 0.0)
}

fn monomial<T: Real>(k: u32) -> CPoly<T> {
    CPoly::monomial(cx(re(1.0)), k as usize)
}

fn rational<T: Real>(num: CPoly<T>, den: CPoly<T>) -> Rational<T> {
    Rational::new(num, den).expect("nonzero denominator")
}

fn punctured_plane<T: Real>() -> Vec<ExtComplex<T>> {
    vec![ExtComplex::zero(), ExtComplex::Infinity]
}

fn check_known(params: &Params, family: Family) -> Result<(), GalleryError> {
    let known = family.default_params();
    for (name, _) in params.iter() {
        if known.get(name).is_none() {
            return Err(GalleryError::UnknownParam(name.clone()));
        }
    }
    Ok(())
}

/// Builds an example, filling unspecified parameters from the defaults.
pub fn make_example<T: Real>(family: Family, overrides: &Params) -> Result<Example<T>, GalleryError> {
    check_known(overrides, family)?;
    let mut params = family.default_params();
    for (k, v) in overrides.iter() {
        params.set(k, v[0], v[1]);
    }
    let (data, expected) = build(family, &params, true)?;
    Ok(Example { family, params, data, expected })
}

/// Case-5 data without the period predicate `a + b = −ρ̄/ρ`, for broken-period fixtures.
pub fn case5_unchecked<T: Real>(
    m: u32,
    a: Complex<f64>,
    b: Complex<f64>,
    rho: Complex<f64>,
) -> Result<WeierstrassData<T>, GalleryError> {
    let mut p = Params::new();
    p.set("m", m as f64, 0.0).set("a", a.re, a.im).set("b", b.re, b.im).set("rho", rho.re, rho.im);
    Ok(build::<T>(Family::Case5, &p, false)?.0)
}

fn build<T: Real>(family: Family, p: &Params, enforce: bool) -> Result<(WeierstrassData<T>, Expected), GalleryError> {
    let one = re(1.0);
    let zero = re(0.0);
    let minus_4pi = -4.0 * PI;
    let orientable = |total: f64, regular: bool| Expected {
        total_curvature: total,
        quotient_total: None,
        regular,
        admissible: true,
    };
    match family {
        Family::Enneper | Family::EnneperShifted => {
            let c = p.complex("c")?;
            let s = p.complex("s")?;
            if s == zero {
                return Err(GalleryError::Predicate("s must be nonzero"));
            }
            if family == Family::Enneper {
                if c == zero || (c.im == 0.0 && c.re > 0.0) {
                    return Err(GalleryError::Predicate("c must not be zero or a positive real number"));
                }
            } else if c == zero || c.re - c.im * c.im + 0.25 >= 0.0 {
                return Err(GalleryError::Predicate("c1 - c2^2 + 1/4 < 0"));
            }
            let shift = if family == Family::Enneper { zero } else { one };
            let phi = MeroExpr::poly(poly(&[shift, one]));
            let psi = MeroExpr::from_polys(poly(&[c]), monomial(1)).map_err(DataError::from)?;
            let dh = MeroExpr::poly(poly(&[zero, s]));
            let data = WeierstrassData::new(phi, psi, dh, vec![ExtComplex::Infinity], false)?;
            Ok((data, orientable(minus_4pi, true)))
        }
        Family::Catenoid => {
            let t = p.real("t")?;
            let s = p.real("s")?;
            if !(-1.0 < t && t < 1.0) || s == 0.0 {
                return Err(GalleryError::Predicate("-1 < t < 1 and real s != 0"));
            }
            let phi = MeroExpr::poly(poly(&[re(t), one]));
            let psi = MeroExpr::from_polys(poly(&[re(-1.0)]), poly(&[re(-t), one])).map_err(DataError::from)?;
            let dh = MeroExpr::from_polys(poly(&[re(-s * t), re(s)]), monomial(2)).map_err(DataError::from)?;
            let data = WeierstrassData::new(phi, psi, dh, punctured_plane(), false)?;
            Ok((data, orientable(minus_4pi, true)))
        }
        Family::Case5 => {
            let m = p.integer("m", 1)?;
            let a = p.complex("a")?;
            let b = p.complex("b")?;
            let rho = p.complex("rho")?;
            if a == zero || b == zero || rho == zero {
                return Err(GalleryError::Predicate("a, b, rho must be nonzero"));
            }
            if enforce && (a + b + rho.conj() / rho).norm() > 1e-12 {
                return Err(GalleryError::Predicate("a + b = -conj(rho)/rho"));
            }
            let phi = MeroExpr::poly(&monomial::<T>(m) * &poly(&[-a, one]));
            let psi = MeroExpr::from_polys(monomial(m + 1), poly(&[-b, one])).map_err(DataError::from)?;
            let dh = MeroExpr::from_polys(poly(&[-rho * b, rho]), monomial(m + 2)).map_err(DataError::from)?;
            let data = WeierstrassData::new(phi, psi, dh, punctured_plane(), false)?;
            Ok((data, orientable(minus_4pi, false)))
        }
        Family::TwoSingularEnds => {
            let a = p.real("a")?;
            if -a <= 1.0 {
                return Err(GalleryError::Predicate("-a > 1"));
            }
            let q = poly::<T>(&[re(-a), zero, one]);
            let phi = MeroExpr::poly(&monomial::<T>(2) * &q);
            let psi = MeroExpr::from_polys(monomial(4), q.clone()).map_err(DataError::from)?;
            let dh = MeroExpr::from_polys(q, monomial(4)).map_err(DataError::from)?;
            let data = WeierstrassData::new(phi, psi, dh, punctured_plane(), false)?;
            Ok((data, orientable(-8.0 * PI, true)))
        }
        Family::Meeks => {
            let m = p.integer("m", 1)?;
            let l = p.complex("lambda")?;
            if (l.norm() - 1.0).abs() > 1e-12 || (l - one).norm() < 1e-12 || (l + one).norm() < 1e-12 {
                return Err(GalleryError::Predicate("|lambda| = 1 and lambda != +-1"));
            }
            let lb = l.conj();
            let phi = MeroExpr::from_polys(&poly::<T>(&[-l, one]) * &monomial(2 * m), poly(&[-lb, one]))
                .map_err(DataError::from)?;
            let psi = MeroExpr::from_polys(poly(&[one, lb]), &poly::<T>(&[one, l]) * &monomial(2 * m))
                .map_err(DataError::from)?;
            let i = Complex::new(0.0, 1.0);
            let dh = MeroExpr::from_polys((&poly::<T>(&[-lb, one]) * &poly(&[one, l])).scale(cx(i)), monomial(2))
                .map_err(DataError::from)?;
            let data = WeierstrassData::new(phi, psi, dh, punctured_plane(), true)?;
            let q = 2.0 * (2.0 * m as f64 + 1.0) * PI;
            Ok((data, Expected { total_curvature: -2.0 * q, quotient_total: Some(q), regular: true, admissible: true }))
        }
        Family::Essential => {
            let k = p.integer("k", 2)?;
            let a = p.real("a")?;
            if !(0.0 < a && a < PI / 2.0) {
                return Err(GalleryError::Predicate("0 < a < pi/2"));
            }
            let e = Rational::poly(poly::<T>(&[zero, re(a)]));
            let phi = MeroExpr::new(Rational::poly(monomial(k)), e.clone());
            let psi = MeroExpr::new(rational(poly(&[re(-1.0)]), monomial(k)), e.clone());
            let dh = MeroExpr::new(Rational::constant(cx(one)), e.neg());
            let data = WeierstrassData::new(phi, psi, dh, punctured_plane(), false)?;
            Ok((data, orientable(-4.0 * PI * k as f64, true)))
        }
        Family::EssentialMobius => {
            let pp = p.integer("p", 2)?;
            let n = 2 * pp - 1;
            // E = (z − 1/z)/2 = (z² − 1)/(2z)
            let e = rational(poly::<T>(&[re(-0.5), zero, re(0.5)]), monomial(1));
            let phi = MeroExpr::new(Rational::poly(monomial(n)), e.clone());
            let psi = MeroExpr::new(rational(poly(&[re(-1.0)]), monomial(n)), e.clone());
            // d e^{−E} = −(1 + 1/z²)/2 · e^{−E} dz
            let dh = MeroExpr::new(rational(poly(&[re(-0.5), zero, re(-0.5)]), monomial(2)), e.neg());
            let data = WeierstrassData::new(phi, psi, dh, punctured_plane(), true)?;
            let q = 2.0 * n as f64 * PI;
            // dh vanishes at ±i where φ and ψ are finite: two branch points.
            Ok((
                data,
                Expected { total_curvature: -2.0 * q, quotient_total: Some(q), regular: true, admissible: false },
            ))
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn defaults_build_for_every_family() {
        for f in Family::ALL {
            let ex = make_example::<f64>(f, &Params::new()).unwrap();
            assert_eq!(ex.family, f);
            assert_eq!(f.name().parse::<Family>().unwrap(), f);
        }
    }

    #[test]
    fn classical_catenoid_at_zero_shift() {
        let mut p = Params::new();
        p.set("t", 0.0, 0.0);
        let ex = make_example::<f64>(Family::Catenoid, &p).unwrap();
        assert!((ex.expected.total_curvature + 4.0 * PI).abs() < 1e-15);
        let v = ex.data.phi.eval_finite(Complex::new(2.0, 0.0)).unwrap();
        assert_eq!(v, ExtComplex::Finite(Complex::new(2.0, 0.0)));
    }

    #[test]
    fn enneper_rejects_positive_real_c() {
        let mut p = Params::new();
        p.set("c", 4.0, 0.0);
        assert!(matches!(make_example::<f64>(Family::Enneper, &p), Err(GalleryError::Predicate(_))));
    }

    #[test]
    fn shifted_enneper_condition() {
        let mut p = Params::new();
        p.set("c", -1.0, 0.5);
        assert!(make_example::<f64>(Family::EnneperShifted, &p).is_ok());
        p.set("c", 0.1, 0.0);
        assert!(make_example::<f64>(Family::EnneperShifted, &p).is_err());
    }

    #[test]
    fn essential_family_total() {
        let ex = make_example::<f64>(Family::Essential, &Params::new()).unwrap();
        assert!((ex.expected.total_curvature + 8.0 * PI).abs() < 1e-12);
        assert!(!ex.data.is_algebraic());
    }

    #[test]
    fn unknown_parameter_is_rejected() {
        let mut p = Params::new();
        p.set("q", 1.0, 0.0);
        assert!(matches!(make_example::<f64>(Family::Catenoid, &p), Err(GalleryError::UnknownParam(_))));
    }
}
