use std::sync::OnceLock;

use erqes_core::report::emit::{from_json, to_csv, to_json, to_text, TABLE_HEADER};
use erqes_core::report::float::{format_hex, parse_hex};
use erqes_core::report::{emit_report, run_match, MatchReport, RunConfig, Verdict};
use erqes_core::{Error, HalfInt};

fn small_config() -> RunConfig {
    RunConfig::parse("j = 1/2, 1\njitter_samples = 4\n").unwrap()
}

fn report() -> &'static MatchReport {
    static REPORT: OnceLock<MatchReport> = OnceLock::new();
    REPORT.get_or_init(|| run_match(&small_config()).unwrap())
}

#[test]
fn json_roundtrip_is_lossless() {
    let r = report();
    let text = to_json(r).unwrap();
    assert_eq!(&from_json(&text).unwrap(), r);
    for x in [0.1, -1.0 / 3.0, 1e-300, f64::MAX, 0.0] {
        assert_eq!(parse_hex(&format_hex(x)).unwrap().to_bits(), x.to_bits());
    }
}

#[test]
fn runs_are_deterministic() {
    let again = run_match(&small_config()).unwrap();
    assert_eq!(to_json(report()).unwrap(), to_json(&again).unwrap());
}

#[test]
fn verdicts_and_counts() {
    let r = report();
    assert!(!r.has_internal_mismatch());
    assert!(r.coefficients.iter().all(|c| c.internal != Verdict::Mismatch));
    let delta = r
        .coefficients
        .iter()
        .find(|c| c.power == HalfInt::from_twice(-1))
        .unwrap();
    assert_eq!(delta.exact, "-1/512");
    assert_eq!(delta.published_e0.as_ref().unwrap().verdict, Verdict::Mismatch);
    assert_eq!(r.published_mismatches, 2);
    assert_eq!(r.sectors.len(), 2);
    assert!(r.sectors.iter().all(|s| s.pass));
}

#[test]
fn csv_and_text_layout() {
    let r = report();
    let csv = to_csv(r);
    let lines: Vec<&str> = csv.lines().collect();
    assert_eq!(lines[0], TABLE_HEADER);
    assert_eq!(lines.len(), 1 + 5);
    assert!(lines.iter().all(|l| l.split(',').count() == 6));
    let text = to_text(r);
    for needle in ["published", "31/32", "-41/384", "-1/512"] {
        assert!(text.contains(needle), "missing {needle}");
    }
}

#[test]
fn emit_writes_three_files_and_names_bad_paths() {
    let dir = tempfile::tempdir().unwrap();
    let files = emit_report(report(), dir.path()).unwrap();
    assert_eq!(files.len(), 3);
    assert!(files.iter().all(|f| f.exists()));

    let blocker = dir.path().join("plain-file");
    std::fs::write(&blocker, "x").unwrap();
    match emit_report(report(), &blocker.join("sub")) {
        Err(Error::Io { path, .. }) => assert!(path.starts_with(&blocker)),
        other => panic!("unexpected {other:?}"),
    }
}

#[test]
fn config_errors() {
    let err = RunConfig::parse("seed = 1\nbogus = 3\n").unwrap_err().to_string();
    assert!(err.contains("line 2"), "{err}");
    assert!(RunConfig::parse("j = 0.3").is_err());
    let err = RunConfig::parse("rspt_order = 4").unwrap_err().to_string();
    assert!(err.contains("rspt_order"), "{err}");
    assert!(RunConfig::load(std::path::Path::new("/nonexistent/run.conf")).is_err());
}
