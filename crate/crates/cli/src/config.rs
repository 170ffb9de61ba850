//! TOML configuration: Weierstrass data, search region and contour schedule.

use std::f64::consts::TAU;

use num_complex::Complex;
use serde::{Deserialize, Serialize};
use stationary::complexkit::{CPoly, ExtComplex, MeroExpr, Rational};
use stationary::curvature::{AnnulusSpec, EndSchedule};
use stationary::immersion::PolarGrid;
use stationary::locus::SearchRegion;
use stationary::weierstrass::WeierstrassData;

/// Default regularity search annulus.
pub const DEFAULT_R_MIN: f64 = 1e-3;
pub const DEFAULT_R_MAX: f64 = 1e3;

#[derive(Debug, thiserror::Error)]
pub enum ConfigError {
    #[error("{0}")]
    Syntax(String),
    #[error("`{field}`: {msg}")]
    Field { field: String, msg: String },
}

fn field_err(field: impl Into<String>, msg: impl Into<String>) -> ConfigError {
    ConfigError::Field { field: field.into(), msg: msg.into() }
}

/// A complex coefficient: a bare real number or an `[re, im]` pair.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum Coeff {
    Real(f64),
    Pair([f64; 2]),
}

impl Coeff {
    pub fn value(&self) -> Complex<f64> {
        match *self {
            Coeff::Real(x) => Complex::new(x, 0.0),
            Coeff::Pair([re, im]) => Complex::new(re, im),
        }
    }

    fn from_complex(z: Complex<f64>) -> Self {
        Coeff::Pair([z.re, z.im])
    }
}

/// A point of the sphere: `[re, im]` or the string `"inf"`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum PointSpec {
    Pair([f64; 2]),
    Named(String),
}

impl PointSpec {
    fn resolve(&self, field: &str) -> Result<ExtComplex<f64>, ConfigError> {
        match self {
            PointSpec::Pair([re, im]) if re.is_finite() && im.is_finite() => Ok(ExtComplex::finite(*re, *im)),
            PointSpec::Pair(_) => Err(field_err(field, "coordinates must be finite")),
            PointSpec::Named(s) if s == "inf" => Ok(ExtComplex::Infinity),
            PointSpec::Named(s) => Err(field_err(field, format!("expected [re, im] or \"inf\", got \"{s}\""))),
        }
    }

    fn from_ext(p: &ExtComplex<f64>) -> Self {
        match p {
            ExtComplex::Infinity => PointSpec::Named("inf".into()),
            ExtComplex::Finite(z) => PointSpec::Pair([z.re, z.im]),
        }
    }
}

/// `num/den · exp(exp_num/exp_den)`, coefficients in ascending order.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExprSpec {
    pub num: Vec<Coeff>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub den: Option<Vec<Coeff>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub exp_num: Option<Vec<Coeff>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub exp_den: Option<Vec<Coeff>>,
}

fn poly(coeffs: &[Coeff], field: &str) -> Result<CPoly<f64>, ConfigError> {
    let v: Vec<Complex<f64>> = coeffs.iter().map(Coeff::value).collect();
    if let Some(k) = v.iter().position(|c| !c.re.is_finite() || !c.im.is_finite()) {
        return Err(field_err(format!("{field}[{k}]"), "coefficient must be finite"));
    }
    Ok(CPoly::new(v))
}

fn coeffs(p: &CPoly<f64>) -> Vec<Coeff> {
    if p.coeffs().is_empty() {
        return vec![Coeff::Real(0.0)];
    }
    p.coeffs().iter().map(|c| if c.im == 0.0 { Coeff::Real(c.re) } else { Coeff::from_complex(*c) }).collect()
}

impl ExprSpec {
    fn resolve(&self, field: &str) -> Result<MeroExpr<f64>, ConfigError> {
        let one = [Coeff::Real(1.0)];
        let rational = |num: &[Coeff], den: &[Coeff], n: &str, d: &str| -> Result<Rational<f64>, ConfigError> {
            let (p, q) = (poly(num, &format!("{field}.{n}"))?, poly(den, &format!("{field}.{d}"))?);
            Rational::new(p, q).map_err(|e| field_err(format!("{field}.{d}"), e.to_string()))
        };
        let rat = rational(&self.num, self.den.as_deref().unwrap_or(&one), "num", "den")?;
        let expo = match (&self.exp_num, &self.exp_den) {
            (None, None) => Rational::zero(),
            (Some(n), d) => rational(n, d.as_deref().unwrap_or(&one), "exp_num", "exp_den")?,
            (None, Some(_)) => return Err(field_err(format!("{field}.exp_den"), "exp_den given without exp_num")),
        };
        Ok(MeroExpr::new(rat, expo))
    }

    pub fn from_expr(f: &MeroExpr<f64>) -> Self {
        let den = f.rat().den();
        let unit_den = den.coeffs() == [Complex::new(1.0, 0.0)];
        let (exp_num, exp_den) = if f.is_algebraic() {
            (None, None)
        } else {
            let d = f.expo().den();
            let unit = d.coeffs() == [Complex::new(1.0, 0.0)];
            (Some(coeffs(f.expo().num())), if unit { None } else { Some(coeffs(d)) })
        };
        ExprSpec { num: coeffs(f.rat().num()), den: if unit_den { None } else { Some(coeffs(den)) }, exp_num, exp_den }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Domain {
    pub punctures: Vec<PointSpec>,
}

/// Annulus for the regularity search and locus tracing.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SearchSpec {
    pub r_min: f64,
    pub r_max: f64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub theta_min: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub theta_max: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub radial: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub angular: Option<usize>,
}

impl SearchSpec {
    pub fn region(&self) -> Result<SearchRegion<f64>, ConfigError> {
        if !(self.r_min > 0.0 && self.r_max > self.r_min && self.r_max.is_finite()) {
            return Err(field_err("search.r_min", "need 0 < r_min < r_max < inf"));
        }
        let mut region = SearchRegion::annulus(self.r_min, self.r_max);
        region.theta_min = self.theta_min.unwrap_or(0.0);
        region.theta_max = self.theta_max.unwrap_or(region.theta_min + TAU);
        if region.theta_max.partial_cmp(&region.theta_min) != Some(std::cmp::Ordering::Greater) {
            return Err(field_err("search.theta_max", "must exceed theta_min"));
        }
        region.radial = self.radial.unwrap_or(region.radial);
        region.angular = self.angular.unwrap_or(region.angular);
        if region.radial < 16 {
            return Err(field_err("search.radial", "must be at least 16"));
        }
        if region.angular < 16 {
            return Err(field_err("search.angular", "must be at least 16"));
        }
        Ok(region)
    }
}

impl Default for SearchSpec {
    fn default() -> Self {
        SearchSpec {
            r_min: DEFAULT_R_MIN,
            r_max: DEFAULT_R_MAX,
            theta_min: None,
            theta_max: None,
            radial: None,
            angular: None,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct EndRadii {
    pub point: PointSpec,
    pub radii: Vec<f64>,
}

/// Contour schedule: geometric from the default radii, or explicit per end.
#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ContourSpec {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub steps: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub factor: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub ends: Option<Vec<EndRadii>>,
}

/// Polar grid for `mesh`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MeshSpec {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub center: Option<[f64; 2]>,
    pub r_min: f64,
    pub r_max: f64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub basepoint: Option<[f64; 2]>,
}

impl Default for MeshSpec {
    fn default() -> Self {
        MeshSpec { center: None, r_min: 0.1, r_max: 10.0, basepoint: None }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ConfigDocument {
    #[serde(default)]
    pub involution: bool,
    pub domain: Domain,
    pub phi: ExprSpec,
    pub psi: ExprSpec,
    pub dh: ExprSpec,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub search: Option<SearchSpec>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub contours: Option<ContourSpec>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub mesh: Option<MeshSpec>,
}

/// A parsed and validated configuration.
#[derive(Clone, Debug)]
pub struct Config {
    pub doc: ConfigDocument,
    pub data: WeierstrassData<f64>,
    pub region: SearchRegion<f64>,
    pub annuli: AnnulusSpec<f64>,
}

impl ConfigDocument {
    pub fn parse(text: &str) -> Result<Self, ConfigError> {
        toml::from_str(text).map_err(|e| ConfigError::Syntax(e.to_string().trim_end().to_string()))
    }

    pub fn from_data(data: &WeierstrassData<f64>) -> Self {
        ConfigDocument {
            involution: data.has_involution,
            domain: Domain { punctures: data.punctures.iter().map(PointSpec::from_ext).collect() },
            phi: ExprSpec::from_expr(&data.phi),
            psi: ExprSpec::from_expr(&data.psi),
            dh: ExprSpec::from_expr(&data.dh),
            search: None,
            contours: None,
            mesh: None,
        }
    }

    pub fn to_toml(&self) -> String {
        toml::to_string(self).expect("config documents always serialize")
    }

    pub fn resolve(self) -> Result<Config, ConfigError> {
        if self.domain.punctures.is_empty() {
            return Err(field_err("domain.punctures", "at least one puncture is required"));
        }
        let punctures = self
            .domain
            .punctures
            .iter()
            .enumerate()
            .map(|(k, p)| p.resolve(&format!("domain.punctures[{k}]")))
            .collect::<Result<Vec<_>, _>>()?;
        let phi = self.phi.resolve("phi")?;
        let psi = self.psi.resolve("psi")?;
        let dh = self.dh.resolve("dh")?;
        let data = WeierstrassData::new(phi, psi, dh, punctures, self.involution).map_err(|e| {
            let field = match e {
                stationary::weierstrass::DataError::ConstantGaussMap(name) => name,
                stationary::weierstrass::DataError::ZeroHeightDifferential => "dh",
                _ => "domain.punctures",
            };
            field_err(field, e.to_string())
        })?;
        let region = self.search.clone().unwrap_or_default().region()?;
        let annuli = self.annuli(&data)?;
        Ok(Config { doc: self, data, region, annuli })
    }

    fn annuli(&self, data: &WeierstrassData<f64>) -> Result<AnnulusSpec<f64>, ConfigError> {
        let spec = self.contours.clone().unwrap_or_default();
        if let Some(ends) = &spec.ends {
            if spec.steps.is_some() || spec.factor.is_some() {
                return Err(field_err("contours", "give either ends or steps/factor, not both"));
            }
            let ends = ends
                .iter()
                .enumerate()
                .map(|(k, e)| {
                    Ok(EndSchedule {
                        point: e.point.resolve(&format!("contours.ends[{k}].point"))?,
                        radii: e.radii.clone(),
                    })
                })
                .collect::<Result<Vec<_>, ConfigError>>()?;
            return Ok(AnnulusSpec { ends });
        }
        let steps = spec.steps.unwrap_or(stationary::curvature::SCHEDULE_STEPS);
        let factor = spec.factor.unwrap_or(stationary::curvature::SCHEDULE_FACTOR);
        if steps == 0 {
            return Err(field_err("contours.steps", "must be positive"));
        }
        if !(factor > 1.0 && factor.is_finite()) {
            return Err(field_err("contours.factor", "must be a finite number above 1"));
        }
        Ok(AnnulusSpec::geometric(data, steps, factor))
    }
}

impl Config {
    pub fn parse(text: &str) -> Result<Self, ConfigError> {
        ConfigDocument::parse(text)?.resolve()
    }

    /// Mesh grid with `radial × angular` vertices and the integration basepoint.
    pub fn mesh_grid(&self, radial: usize, angular: usize) -> Result<(PolarGrid<f64>, Complex<f64>), ConfigError> {
        let spec = self.doc.mesh.clone().unwrap_or_default();
        if !(spec.r_min > 0.0 && spec.r_max >= spec.r_min && spec.r_max.is_finite()) {
            return Err(field_err("mesh.r_min", "need 0 < r_min <= r_max < inf"));
        }
        let center = spec.center.map(|[re, im]| Complex::new(re, im)).unwrap_or_default();
        let basepoint = spec.basepoint.map(|[re, im]| Complex::new(re, im)).unwrap_or(center + spec.r_min);
        Ok((PolarGrid { center, r_min: spec.r_min, r_max: spec.r_max, radial, angular }, basepoint))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use stationary::gallery::{make_example, Family, Params};

    const CATENOID: &str = r#"
involution = false

[domain]
punctures = [[0.0, 0.0], "inf"]

[phi]
num = [0.3, 1.0]

[psi]
num = [-1.0]
den = [-0.3, 1.0]

[dh]
num = [-0.3, 1.0]
den = [0.0, 0.0, 1.0]
"#;

    #[test]
    fn parses_catenoid() {
        let cfg = Config::parse(CATENOID).unwrap();
        assert_eq!(cfg.data.punctures.len(), 2);
        assert!(cfg.data.punctures[1].is_infinite());
        assert_eq!(cfg.region.r_min, DEFAULT_R_MIN);
        assert_eq!(cfg.annuli.steps(), stationary::curvature::SCHEDULE_STEPS);
        let z = Complex::new(0.7, 0.2);
        assert!((cfg.data.phi.eval_raw(z) - (z + 0.3)).norm() < 1e-15);
    }

    #[test]
    fn gallery_round_trip() {
        for family in Family::ALL {
            let ex = make_example::<f64>(family, &Params::new()).unwrap();
            let text = ConfigDocument::from_data(&ex.data).to_toml();
            let back = Config::parse(&text).unwrap();
            assert_eq!(back.data, ex.data, "{family}");
        }
    }

    #[test]
    fn errors_name_the_field() {
        let bad = CATENOID.replace("num = [-1.0]\nden = [-0.3, 1.0]", "num = [-1.0]\nden = [0.0]");
        let msg = Config::parse(&bad).unwrap_err().to_string();
        assert!(msg.contains("psi.den"), "{msg}");
        let bad = CATENOID.replace("\"inf\"", "\"infinity\"");
        let msg = Config::parse(&bad).unwrap_err().to_string();
        assert!(msg.contains("domain.punctures[1]"), "{msg}");
        let bad = CATENOID.replace("[phi]\nnum", "[phi]\nnumer");
        let msg = Config::parse(&bad).unwrap_err().to_string();
        assert!(msg.contains("line") && msg.contains("numer"), "{msg}");
        let bad = CATENOID.replace("num = [0.3, 1.0]", "num = [0.3, 0.0]");
        let msg = Config::parse(&bad).unwrap_err().to_string();
        assert!(msg.starts_with("`phi`"), "{msg}");
    }
}
