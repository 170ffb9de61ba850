//! Subcommand implementations. Each returns whether its checks passed.

use std::f64::consts::PI;
use std::fmt::Write as _;
use std::path::{Path, PathBuf};

use num_complex::Complex;
use stationary::gallery::{make_example, Family, Params};
use stationary::immersion::{export_mesh, immerse_grid};
use stationary::locus::{
    lemma_a1_params, lemma_a1_witness, lemma_a2_check, locus_csv, trace_equation, MixedEquation, SearchRegion,
};

use crate::config::{Config, ConfigDocument, ConfigError};
use crate::report::{analyze, Source};

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("{path}: {source}")]
    Config { path: String, source: ConfigError },
    #[error("{0}")]
    Usage(String),
    #[error("{0}")]
    Internal(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Config { .. } | CliError::Usage(_) => 2,
            CliError::Internal(_) => 3,
        }
    }
}

/// Verdict of a command that ran to completion.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Outcome {
    Pass,
    Fail,
}

impl Outcome {
    pub fn from_bool(ok: bool) -> Self {
        if ok {
            Outcome::Pass
        } else {
            Outcome::Fail
        }
    }

    pub fn exit_code(self) -> i32 {
        match self {
            Outcome::Pass => 0,
            Outcome::Fail => 1,
        }
    }
}

fn internal(e: impl std::fmt::Display) -> CliError {
    CliError::Internal(e.to_string())
}

pub fn load_config(path: &Path) -> Result<Config, CliError> {
    let text = std::fs::read_to_string(path).map_err(|e| CliError::Usage(format!("{}: {e}", path.display())))?;
    Config::parse(&text).map_err(|source| CliError::Config { path: path.display().to_string(), source })
}

/// Writes `text` to `out`, or to stdout when `out` is `None`.
fn emit(text: &str, out: Option<&Path>) -> Result<(), CliError> {
    match out {
        Some(p) => std::fs::write(p, text).map_err(|e| internal(format!("{}: {e}", p.display()))),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

pub fn run_analyze(config: &Path, out: Option<&Path>) -> Result<Outcome, CliError> {
    let cfg = load_config(config)?;
    let report = analyze(&cfg, None);
    emit(&report.to_json(), out)?;
    Ok(Outcome::from_bool(report.passed))
}

/// Parses `RxA`.
pub fn parse_grid(s: &str) -> Result<(usize, usize), CliError> {
    let bad = || CliError::Usage(format!("--grid expects RADIALxANGULAR, got `{s}`"));
    let (r, a) = s.split_once(['x', 'X']).ok_or_else(bad)?;
    Ok((r.trim().parse().map_err(|_| bad())?, a.trim().parse().map_err(|_| bad())?))
}

pub fn run_mesh(config: &Path, grid: (usize, usize), prefix: &Path) -> Result<Outcome, CliError> {
    let cfg = load_config(config)?;
    let (grid, basepoint) = cfg
        .mesh_grid(grid.0, grid.1)
        .map_err(|source| CliError::Config { path: config.display().to_string(), source })?;
    let samples = immerse_grid(&cfg.data, basepoint, &grid).map_err(|e| CliError::Usage(e.to_string()))?;
    export_mesh(&samples, grid.radial, grid.angular, prefix).map_err(internal)?;
    let positive = samples.iter().all(|s| s.conformal_factor > 0.0);
    eprintln!(
        "wrote {} and {} ({} vertices)",
        prefix.with_extension("csv").display(),
        prefix.with_extension("obj").display(),
        samples.len()
    );
    if !positive {
        eprintln!("warning: the conformal factor vanishes at some vertex");
    }
    Ok(Outcome::from_bool(positive))
}

/// Parses `r_min,r_max` or `r_min,r_max,theta_min,theta_max`.
pub fn parse_region(s: &str, base: &SearchRegion<f64>) -> Result<SearchRegion<f64>, CliError> {
    let bad = || CliError::Usage(format!("--region expects r_min,r_max[,theta_min,theta_max], got `{s}`"));
    let v: Vec<f64> = s.split(',').map(|t| parse_angle(t.trim()).ok_or_else(bad)).collect::<Result<_, _>>()?;
    let mut region = match v.len() {
        2 | 4 => SearchRegion::annulus(v[0], v[1]).with_resolution(base.radial, base.angular),
        _ => return Err(bad()),
    };
    if v.len() == 4 {
        region.theta_min = v[2];
        region.theta_max = v[3];
    }
    region.validate().map_err(|e| CliError::Usage(e.to_string()))?;
    Ok(region)
}

pub fn run_locus(config: &Path, region: Option<&str>, out: Option<&Path>) -> Result<Outcome, CliError> {
    let cfg = load_config(config)?;
    let region = match region {
        Some(s) => parse_region(s, &cfg.region)?,
        None => cfg.region,
    };
    let eq = MixedEquation::regularity(&cfg.data).map_err(internal)?;
    let curves = trace_equation(&eq, &region).map_err(|e| CliError::Usage(e.to_string()))?;
    emit(&locus_csv(&curves), out)?;
    let closed = curves.iter().filter(|c| c.closed).count();
    eprintln!("{} locus components ({closed} closed)", curves.len());
    Ok(Outcome::Pass)
}

/// Parses `name=value` with a real value, `re,im`, or a complex literal like `-1+0.5i`.
pub fn parse_param(s: &str) -> Result<(String, Complex<f64>), CliError> {
    let bad = || CliError::Usage(format!("--param expects name=value, got `{s}`"));
    let (name, value) = s.split_once('=').ok_or_else(bad)?;
    let value = value.trim();
    let z = if let Some((re, im)) = value.split_once(',') {
        Complex::new(re.trim().parse().map_err(|_| bad())?, im.trim().parse().map_err(|_| bad())?)
    } else if let Ok(x) = value.parse::<f64>() {
        Complex::new(x, 0.0)
    } else {
        value.parse::<Complex<f64>>().map_err(|_| bad())?
    };
    Ok((name.trim().to_string(), z))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, clap::ValueEnum)]
pub enum Emit {
    Config,
    Analyze,
}

pub fn run_gallery(family: &str, params: &[String], emit_kind: Emit, out: Option<&Path>) -> Result<Outcome, CliError> {
    let family: Family = family.parse().map_err(|e: stationary::gallery::GalleryError| {
        let names: Vec<&str> = Family::ALL.iter().map(|f| f.name()).collect();
        CliError::Usage(format!("{e}; known families: {}", names.join(", ")))
    })?;
    let mut overrides = Params::new();
    for p in params {
        let (name, z) = parse_param(p)?;
        overrides.set(&name, z.re, z.im);
    }
    let ex = make_example::<f64>(family, &overrides).map_err(|e| CliError::Usage(e.to_string()))?;
    let doc = ConfigDocument::from_data(&ex.data);
    match emit_kind {
        Emit::Config => {
            emit(&doc.to_toml(), out)?;
            Ok(Outcome::Pass)
        }
        Emit::Analyze => {
            let cfg = doc.resolve().map_err(internal)?;
            let report = analyze(&cfg, Some(Source { family, params: ex.params, expected: ex.expected }));
            emit(&report.to_json(), out)?;
            Ok(Outcome::from_bool(report.passed))
        }
    }
}

/// Parses a real number or a multiple of π: `0.5`, `pi`, `pi/5`, `2pi/3`, `2*pi/3`.
pub fn parse_angle(s: &str) -> Option<f64> {
    if let Ok(x) = s.parse::<f64>() {
        return Some(x);
    }
    let s = s.replace(' ', "");
    let (num, den) = match s.split_once('/') {
        Some((n, d)) => (n.to_string(), d.parse::<f64>().ok()?),
        None => (s.clone(), 1.0),
    };
    let coef = num.strip_suffix("pi")?;
    let coef = coef.strip_suffix('*').unwrap_or(coef);
    let k = match coef {
        "" => 1.0,
        "-" => -1.0,
        c => c.parse::<f64>().ok()?,
    };
    Some(k * PI / den)
}

fn parse_list<T>(s: &str, what: &str, f: impl Fn(&str) -> Option<T>) -> Result<Vec<T>, CliError> {
    s.split(',').map(|t| f(t.trim()).ok_or_else(|| CliError::Usage(format!("bad {what} list `{s}`")))).collect()
}

/// The `k`-th of `n` offsets `w` with `|w| < 1/2`, spread by the golden angle.
pub fn a_grid_offset(k: usize, n: usize) -> Complex<f64> {
    let golden = PI * (3.0 - 5f64.sqrt());
    Complex::from_polar(0.45 * k as f64 / n.max(1) as f64, golden * k as f64)
}

pub const LEMMA_A1_HEADER: &str = "m,t,a_re,a_im,b_re,b_im,z_re,z_im,residual,passed";

pub fn run_lemma_a1(m: &str, t: &str, a_grid: usize, out: Option<&Path>) -> Result<Outcome, CliError> {
    let ms = parse_list(m, "m", |s| s.parse::<u32>().ok().filter(|&m| m >= 1))?;
    let ts = parse_list(t, "t", parse_angle)?;
    if a_grid == 0 {
        return Err(CliError::Usage("--a-grid must be positive".into()));
    }
    let mut csv = String::from(LEMMA_A1_HEADER);
    csv.push('\n');
    let mut all = true;
    for &m in &ms {
        for &t in &ts {
            for k in 0..a_grid {
                let (a, b) = lemma_a1_params(t, a_grid_offset(k, a_grid));
                let row = match lemma_a1_witness(m, a, b) {
                    Ok(w) => {
                        let ok = w.solution.residual <= stationary::locus::SOLUTION_TOL;
                        all &= ok;
                        (w.solution.z, w.solution.residual, ok)
                    }
                    Err(e) => {
                        eprintln!("m = {m}, t = {t}, a = {a}: {e}");
                        all = false;
                        (Complex::new(f64::NAN, f64::NAN), f64::NAN, false)
                    }
                };
                let (z, res, ok) = row;
                let _ = writeln!(csv, "{m},{t},{},{},{},{},{},{},{res:e},{ok}", a.re, a.im, b.re, b.im, z.re, z.im);
            }
        }
    }
    emit(&csv, out)?;
    Ok(Outcome::from_bool(all))
}

pub fn run_lemma_a2(a: f64, out: Option<&Path>) -> Result<Outcome, CliError> {
    let verdict = lemma_a2_check(a).map_err(|e| CliError::Usage(e.to_string()))?;
    let mut json = serde_json::to_string_pretty(&verdict).map_err(internal)?;
    json.push('\n');
    emit(&json, out)?;
    Ok(Outcome::from_bool(verdict.no_solution))
}

pub fn default_mesh_prefix() -> PathBuf {
    PathBuf::from("mesh")
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn angles() {
        assert_eq!(parse_angle("0"), Some(0.0));
        assert_eq!(parse_angle("pi"), Some(PI));
        assert_eq!(parse_angle("pi/5"), Some(PI / 5.0));
        assert_eq!(parse_angle("2*pi/3"), Some(2.0 * PI / 3.0));
        assert_eq!(parse_angle("-pi/2"), Some(-PI / 2.0));
        assert_eq!(parse_angle("tau"), None);
    }

    #[test]
    fn params() {
        assert_eq!(parse_param("t=0.3").unwrap(), ("t".into(), Complex::new(0.3, 0.0)));
        assert_eq!(parse_param("c=-1+0.5i").unwrap().1, Complex::new(-1.0, 0.5));
        assert_eq!(parse_param("lambda=0.5,0.8").unwrap().1, Complex::new(0.5, 0.8));
        assert!(parse_param("t").is_err());
        assert!(parse_param("t=x").is_err());
    }

    #[test]
    fn grid_and_offsets() {
        assert_eq!(parse_grid("32x64").unwrap(), (32, 64));
        assert!(parse_grid("32,64").is_err());
        for k in 0..7 {
            let (a, b) = lemma_a1_params(0.4, a_grid_offset(k, 7));
            assert!(((a + b).norm() - 1.0).abs() < 1e-14);
            assert!(a.norm() > 0.0 && b.norm() > 0.0);
        }
    }
}
