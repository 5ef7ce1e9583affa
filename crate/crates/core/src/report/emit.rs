//! Writing a [`MatchReport`] as report.json, table.csv and report.txt.

use std::fmt::Write as _;
use std::path::{Path, PathBuf};

use crate::error::{Error, Result};
use crate::report::float::RFloat;
use crate::report::run::{CoefficientCheck, MatchReport};

pub fn to_json(report: &MatchReport) -> Result<String> {
    let mut s = serde_json::to_string_pretty(report).map_err(|e| Error::Parse(e.to_string()))?;
    s.push('\n');
    Ok(s)
}

pub fn from_json(text: &str) -> Result<MatchReport> {
    serde_json::from_str(text).map_err(|e| Error::Parse(e.to_string()))
}

fn g12(x: RFloat) -> String {
    crate::report::float::format_dec(x.get())
}

pub const TABLE_HEADER: &str = "kappa,e0_partial_sum,oracle_v1_edge,neg_oracle_v1_edge,wkb_e_star,oracle_v2_level";

pub fn to_csv(report: &MatchReport) -> String {
    let mut s = String::from(TABLE_HEADER);
    s.push('\n');
    for r in &report.numeric_table {
        let cols = [
            r.kappa,
            r.e0_partial_sum,
            r.oracle_v1_edge,
            r.neg_oracle_v1_edge,
            r.wkb_e_star,
            r.oracle_v2_level,
        ];
        let line: Vec<String> = cols.iter().map(|c| g12(*c)).collect();
        s.push_str(&line.join(","));
        s.push('\n');
    }
    s
}

fn pm(value: f64, unc: f64) -> String {
    format!("{value:+.9} ± {unc:.1e}")
}

fn coefficient_line(c: &CoefficientCheck) -> [String; 7] {
    let opt = |p: &Option<crate::report::run::Published>| match p {
        Some(p) => (p.value.clone(), p.verdict.label().to_string()),
        None => ("-".into(), "-".into()),
    };
    let (pub_v, pub_verdict) = opt(&c.published_e0);
    [
        format!("kappa^({})", c.power),
        c.exact.clone(),
        pm(c.wkb.value.get(), c.wkb.uncertainty.get()),
        c.oracle
            .as_ref()
            .map(|o| pm(o.value.get(), o.uncertainty.get()))
            .unwrap_or_else(|| "-".into()),
        c.internal.label().to_string(),
        pub_v,
        pub_verdict,
    ]
}

fn aligned(rows: &[Vec<String>]) -> String {
    let cols = rows.iter().map(Vec::len).max().unwrap_or(0);
    let widths: Vec<usize> = (0..cols)
        .map(|i| rows.iter().filter_map(|r| r.get(i)).map(|c| c.chars().count()).max().unwrap_or(0))
        .collect();
    let mut s = String::new();
    for r in rows {
        let cells: Vec<String> = r
            .iter()
            .zip(&widths)
            .map(|(c, w)| format!("{c:<w$}", w = *w))
            .collect();
        s.push_str(cells.join("  ").trim_end());
        s.push('\n');
    }
    s
}

pub fn to_text(report: &MatchReport) -> String {
    let mut s = String::new();
    let _ = writeln!(s, "E0 (exact) = {}", report.e0_series);
    let _ = writeln!(
        s,
        "E* fit: WKB order {}, {} terms over {} gamma values, condition {:.2e}\n",
        report.e_star_fit.order,
        report.e_star_fit.terms,
        report.e_star_fit.gammas.len(),
        report.e_star_fit.condition.get()
    );
    let mut rows = vec![["power", "exact", "-(WKB fit)", "oracle fit", "internal", "published", "verdict"]
        .iter()
        .map(|h| h.to_string())
        .collect::<Vec<_>>()];
    rows.extend(report.coefficients.iter().map(|c| coefficient_line(c).to_vec()));
    s.push_str(&aligned(&rows));

    s.push_str("\nE* published vs WKB fit\n");
    let mut rows = vec![vec!["power".to_string(), "WKB fit".into(), "published".into(), "verdict".into()]];
    for (p, e) in &report.e_star_fit.coefficients {
        let published = report.coefficients.iter().find(|c| c.power == *p).and_then(|c| c.published_e_star.clone());
        rows.push(vec![
            format!("kappa^({p})"),
            pm(e.value.get(), e.uncertainty.get()),
            published.as_ref().map(|x| x.value.clone()).unwrap_or_else(|| "-".into()),
            published.map(|x| x.verdict.label().to_string()).unwrap_or_else(|| "-".into()),
        ]);
    }
    s.push_str(&aligned(&rows));

    s.push_str("\nnumeric table\n");
    let mut rows = vec![TABLE_HEADER.split(',').map(String::from).collect::<Vec<_>>()];
    for r in &report.numeric_table {
        rows.push(
            [r.kappa, r.e0_partial_sum, r.oracle_v1_edge, r.neg_oracle_v1_edge, r.wkb_e_star, r.oracle_v2_level]
                .iter()
                .map(|c| g12(*c))
                .collect(),
        );
    }
    s.push_str(&aligned(&rows));

    s.push_str("\nsectors\n");
    let mut rows = vec![vec![
        "j".to_string(),
        "duality".into(),
        "max |E1 + E2|".into(),
        "top index".into(),
        "parity".into(),
        "result".into(),
    ]];
    for sc in &report.sectors {
        let worst = sc
            .levels
            .iter()
            .map(|l| l.reflection_deviation.get())
            .fold(0.0, f64::max);
        rows.push(vec![
            sc.j.to_string(),
            if sc.duality_pass { "pass" } else { "fail" }.into(),
            format!("{worst:.2e}"),
            format!("{}/{}", sc.level_number.actual_index, sc.level_number.expected_index),
            sc.level_number
                .parity
                .map(|p| format!("{p:?}").to_lowercase())
                .unwrap_or_else(|| "-".into()),
            if sc.pass { "pass" } else { "fail" }.into(),
        ]);
    }
    s.push_str(&aligned(&rows));

    let _ = writeln!(
        s,
        "\ninternal mismatches: {}\npublished mismatches: {}",
        report.internal_mismatches, report.published_mismatches
    );
    for n in &report.notes {
        let _ = writeln!(s, "note: {n}");
    }
    s
}

fn write(path: PathBuf, contents: &str) -> Result<PathBuf> {
    std::fs::write(&path, contents).map_err(|source| Error::Io {
        path: path.clone(),
        source,
    })?;
    Ok(path)
}

/// Writes the three report files into `dir`, creating it if needed.
pub fn emit_report(report: &MatchReport, dir: &Path) -> Result<Vec<PathBuf>> {
    std::fs::create_dir_all(dir).map_err(|source| Error::Io {
        path: dir.to_path_buf(),
        source,
    })?;
    Ok(vec![
        write(dir.join("report.json"), &to_json(report)?)?,
        write(dir.join("table.csv"), &to_csv(report))?,
        write(dir.join("report.txt"), &to_text(report))?,
    ])
}
