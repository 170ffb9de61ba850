//! Golden reports for every gallery family at its default parameters.
//!
//! Regenerate with `UPDATE_GOLDEN=1 cargo test -p stationary-cli --test golden`.

use std::path::PathBuf;
use std::process::Command;

use serde_json::Value;
use stationary::gallery::Family;

/// Relative tolerance for floats when diffing against the fixtures.
const FLOAT_TOL: f64 = 1e-9;

fn golden_dir() -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("tests").join("golden")
}

fn expected_exit(family: Family) -> i32 {
    match family {
        // Regularity fails by construction.
        Family::Case5 => 1,
        // dh vanishes at ±i where φ and ψ are finite.
        Family::EssentialMobius => 1,
        _ => 0,
    }
}

fn diff(path: &str, got: &Value, want: &Value, out: &mut Vec<String>) {
    match (got, want) {
        (Value::Number(a), Value::Number(b)) => {
            let (a, b) = (a.as_f64().unwrap(), b.as_f64().unwrap());
            if (a - b).abs() > FLOAT_TOL * a.abs().max(b.abs()).max(1.0) {
                out.push(format!("{path}: {a} != {b}"));
            }
        }
        (Value::Array(a), Value::Array(b)) => {
            if a.len() != b.len() {
                out.push(format!("{path}: length {} != {}", a.len(), b.len()));
                return;
            }
            for (k, (x, y)) in a.iter().zip(b).enumerate() {
                diff(&format!("{path}[{k}]"), x, y, out);
            }
        }
        (Value::Object(a), Value::Object(b)) => {
            let ka: Vec<&String> = a.keys().collect();
            let kb: Vec<&String> = b.keys().collect();
            if ka != kb {
                out.push(format!("{path}: keys {ka:?} != {kb:?}"));
                return;
            }
            for (k, x) in a {
                diff(&format!("{path}.{k}"), x, &b[k], out);
            }
        }
        _ if got != want => out.push(format!("{path}: {got} != {want}")),
        _ => {}
    }
}

#[test]
fn gallery_reports_match_fixtures() {
    let update = std::env::var_os("UPDATE_GOLDEN").is_some();
    let tmp = tempfile::tempdir().unwrap();
    let mut failures = Vec::new();
    for family in Family::ALL {
        let out = tmp.path().join(format!("{family}.json"));
        let status = Command::new(env!("CARGO_BIN_EXE_stationary"))
            .args(["gallery", family.name(), "--emit", "analyze", "--out"])
            .arg(&out)
            .status()
            .unwrap();
        assert_eq!(status.code(), Some(expected_exit(family)), "{family}");
        let text = std::fs::read_to_string(&out).unwrap();
        let fixture = golden_dir().join(format!("{family}.json"));
        if update {
            std::fs::write(&fixture, &text).unwrap();
            continue;
        }
        let want =
            std::fs::read_to_string(&fixture).unwrap_or_else(|_| panic!("missing fixture {}", fixture.display()));
        let mut diffs = Vec::new();
        diff("$", &serde_json::from_str(&text).unwrap(), &serde_json::from_str(&want).unwrap(), &mut diffs);
        if !diffs.is_empty() {
            failures.push(format!("{family}:\n  {}", diffs.join("\n  ")));
        }
    }
    assert!(failures.is_empty(), "reports differ from fixtures:\n{}", failures.join("\n"));
}
