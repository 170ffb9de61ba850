//! The `analyze` pipeline and its JSON report.

use serde::Serialize;
use sha2::{Digest, Sha256};
use stationary::curvature::{global_identity_report_with, CurvatureReport};
use stationary::gallery::{Expected, Family, Params};
use stationary::immersion::{completeness_check, involution_check, CompletenessVerdict, InvolutionReport};
use stationary::locus::{find_singular_points, SingularSearch};
use stationary::weierstrass::{
    check_admissibility, check_periods, classify_end, default_contour_radii, Admissibility, EndReport, PeriodReport,
    SurfaceTopology,
};

use crate::config::Config;

pub const TOOL_NAME: &str = "stationary";
pub const TOOL_VERSION: &str = env!("CARGO_PKG_VERSION");

/// Involution identities are checked at this many random points.
pub const INVOLUTION_SAMPLES: usize = 100;
pub const INVOLUTION_SEED: u64 = 7;
pub const INVOLUTION_TOL: f64 = 1e-12;

#[derive(Clone, Debug, Serialize)]
pub struct ToolInfo {
    pub name: &'static str,
    pub version: &'static str,
}

/// Gallery provenance of the analyzed data.
#[derive(Clone, Debug, Serialize)]
pub struct Source {
    pub family: Family,
    pub params: Params,
    pub expected: Expected,
}

/// Outcome of one pipeline stage.
#[derive(Clone, Debug, Serialize)]
#[serde(untagged)]
pub enum Stage<T> {
    Done(T),
    Failed { error: String },
}

impl<T> Stage<T> {
    fn from_result<E: std::fmt::Display>(r: Result<T, E>) -> Self {
        match r {
            Ok(v) => Stage::Done(v),
            Err(e) => Stage::Failed { error: e.to_string() },
        }
    }

    fn passed(&self, ok: impl Fn(&T) -> bool) -> bool {
        match self {
            Stage::Done(v) => ok(v),
            Stage::Failed { .. } => false,
        }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct Regularity {
    pub search: SingularSearch<f64>,
    pub passed: bool,
}

#[derive(Clone, Debug, Serialize)]
pub struct Involution {
    pub residuals: InvolutionReport<f64>,
    pub tolerance: f64,
    pub passed: bool,
}

#[derive(Clone, Debug, Serialize)]
pub struct CheckSummary {
    pub name: &'static str,
    pub passed: bool,
}

#[derive(Clone, Debug, Serialize)]
pub struct ReportDocument {
    pub tool: ToolInfo,
    /// `sha256:` of the canonical TOML form of the configuration.
    pub config_hash: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub source: Option<Source>,
    pub topology: SurfaceTopology,
    pub admissibility: Stage<Admissibility<f64>>,
    pub periods: Stage<PeriodReport<f64>>,
    pub ends: Stage<Vec<EndReport<f64>>>,
    pub regularity: Stage<Regularity>,
    pub curvature: Stage<CurvatureReport<f64>>,
    pub completeness: Stage<Vec<CompletenessVerdict<f64>>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub involution: Option<Stage<Involution>>,
    pub checks: Vec<CheckSummary>,
    pub passed: bool,
}

impl ReportDocument {
    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("reports always serialize");
        s.push('\n');
        s
    }
}

pub fn config_hash(cfg: &Config) -> String {
    let digest = Sha256::digest(cfg.doc.to_toml().as_bytes());
    let hex: String = digest.iter().map(|b| format!("{b:02x}")).collect();
    format!("sha256:{hex}")
}

/// Runs every applicable check on the configured data.
pub fn analyze(cfg: &Config, source: Option<Source>) -> ReportDocument {
    let data = &cfg.data;
    let admissibility = Stage::from_result(check_admissibility(data));
    let periods = Stage::from_result(check_periods(data, &default_contour_radii(data)));
    let ends = Stage::from_result(data.punctures.iter().map(|p| classify_end(data, p)).collect::<Result<Vec<_>, _>>());
    let regularity = Stage::from_result(find_singular_points(data, &cfg.region).map(|search| {
        let passed = search.solutions.is_empty();
        Regularity { search, passed }
    }));
    let curvature = Stage::from_result(global_identity_report_with(data, &cfg.annuli));
    let completeness =
        Stage::from_result(data.punctures.iter().map(|p| completeness_check(data, p)).collect::<Result<Vec<_>, _>>());
    let involution = data.has_involution.then(|| {
        Stage::from_result(involution_check(data, INVOLUTION_SAMPLES, INVOLUTION_SEED).map(|r| Involution {
            passed: r.max_residual <= INVOLUTION_TOL,
            residuals: r,
            tolerance: INVOLUTION_TOL,
        }))
    });

    let mut checks = vec![
        CheckSummary { name: "admissibility", passed: admissibility.passed(|a| a.passed) },
        CheckSummary { name: "periods", passed: periods.passed(|p| p.passed) },
        CheckSummary { name: "ends", passed: ends.passed(|_| true) },
        CheckSummary { name: "regularity", passed: regularity.passed(|r| r.passed) },
        CheckSummary { name: "curvature", passed: curvature.passed(|c| c.passed) },
        CheckSummary { name: "completeness", passed: completeness.passed(|v| v.iter().all(|c| c.complete)) },
    ];
    if let Some(inv) = &involution {
        checks.push(CheckSummary { name: "involution", passed: inv.passed(|i| i.passed) });
    }
    let passed = checks.iter().all(|c| c.passed);
    ReportDocument {
        tool: ToolInfo { name: TOOL_NAME, version: TOOL_VERSION },
        config_hash: config_hash(cfg),
        source,
        topology: data.topology(),
        admissibility,
        periods,
        ends,
        regularity,
        curvature,
        completeness,
        involution,
        checks,
        passed,
    }
}
