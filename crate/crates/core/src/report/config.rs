//! Run configuration: a line-based `key = value` file, overridable field by
//! field from the command line.

use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::half::HalfInt;
use crate::oracle::bound::Discretization;
use crate::wkb::series_fit::{default_fit_gammas, DEFAULT_FIT_TERMS};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunConfig {
    /// Cohomology parameters for the duality, oracle and numeric-table checks.
    pub j_list: Vec<HalfInt>,
    /// κ grid of the oracle error-scaling fit.
    pub kappa_list: Vec<f64>,
    /// Highest δ power of the perturbative series; every coefficient gets a
    /// verdict, so it may not exceed what the WKB fit can resolve.
    pub rspt_order: usize,
    /// Dunham correction order, 0, 2 or 4.
    pub wkb_order: u8,
    /// γ grid of the WKB series fit.
    pub wkb_gammas: Vec<f64>,
    pub wkb_terms: usize,
    /// Terms in the oracle error-scaling fit.
    pub oracle_fit_terms: usize,
    pub plane_wave_cutoff: usize,
    pub discretization: Discretization,
    /// Absolute tolerance of oracle-level matches.
    pub oracle_tolerance: f64,
    pub seed: u64,
    pub jitter_samples: usize,
    #[serde(skip)]
    pub out_dir: Option<PathBuf>,
}

impl Default for RunConfig {
    fn default() -> Self {
        RunConfig {
            j_list: [1, 2, 3, 4, 6, 8].iter().map(|&t| HalfInt::from_twice(t)).collect(),
            kappa_list: vec![2.5, 3.5, 5.5, 9.5, 24.5],
            rspt_order: 3,
            wkb_order: 4,
            wkb_gammas: default_fit_gammas(),
            wkb_terms: DEFAULT_FIT_TERMS,
            oracle_fit_terms: 4,
            plane_wave_cutoff: 64,
            discretization: Discretization::Sinc,
            oracle_tolerance: 1e-8,
            seed: 20_240_601,
            jitter_samples: 16,
            out_dir: None,
        }
    }
}

fn list<T>(v: &str, item: impl Fn(&str) -> Result<T>) -> Result<Vec<T>> {
    v.split(',')
        .map(str::trim)
        .filter(|s| !s.is_empty())
        .map(item)
        .collect()
}

fn float(s: &str) -> Result<f64> {
    s.parse::<f64>()
        .map_err(|_| Error::Config(format!("{s:?} is not a number")))
}

fn int<T: std::str::FromStr>(s: &str) -> Result<T> {
    s.parse::<T>()
        .map_err(|_| Error::Config(format!("{s:?} is not a nonnegative integer")))
}

impl RunConfig {
    /// Applies one `key = value` setting.
    pub fn set(&mut self, key: &str, value: &str) -> Result<()> {
        let v = value.trim();
        match key.trim() {
            "j" | "j_list" => {
                self.j_list = list(v, |s| s.parse::<HalfInt>().map_err(|e| Error::Config(e.to_string())))?
            }
            "kappas" | "kappa_list" => self.kappa_list = list(v, float)?,
            "rspt_order" => self.rspt_order = int(v)?,
            "wkb_order" => self.wkb_order = int(v)?,
            "wkb_gammas" => self.wkb_gammas = list(v, float)?,
            "wkb_terms" => self.wkb_terms = int(v)?,
            "oracle_fit_terms" => self.oracle_fit_terms = int(v)?,
            "plane_wave_cutoff" => self.plane_wave_cutoff = int(v)?,
            "discretization" => {
                self.discretization = v.parse().map_err(|e: Error| Error::Config(e.to_string()))?
            }
            "oracle_tolerance" => self.oracle_tolerance = float(v)?,
            "seed" => self.seed = int(v)?,
            "jitter_samples" => self.jitter_samples = int(v)?,
            "out" | "out_dir" => self.out_dir = Some(PathBuf::from(v)),
            other => return Err(Error::Config(format!("unknown key {other:?}"))),
        }
        Ok(())
    }

    /// Parses a configuration text on top of the defaults. Blank lines and
    /// lines starting with `#` are ignored.
    pub fn parse(text: &str) -> Result<Self> {
        let mut cfg = RunConfig::default();
        for (no, line) in text.lines().enumerate() {
            let line = line.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let (k, v) = line
                .split_once('=')
                .ok_or_else(|| Error::Config(format!("line {}: expected key = value", no + 1)))?;
            cfg.set(k, v)
                .map_err(|e| Error::Config(format!("line {}: {e}", no + 1)))?;
        }
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path).map_err(|source| Error::Io {
            path: path.to_path_buf(),
            source,
        })?;
        Self::parse(&text)
    }

    /// Highest δ order whose coefficient the WKB energies still determine:
    /// truncating the Dunham series at ε^k leaves an error of order κ^{−k/2}
    /// in E⋆.
    pub fn resolvable_rspt_order(&self) -> usize {
        (self.wkb_order as usize).saturating_sub(1)
    }

    pub fn validate(&self) -> Result<()> {
        if self.j_list.is_empty() {
            return Err(Error::Config("j list is empty".into()));
        }
        if let Some(j) = self.j_list.iter().find(|j| **j < HalfInt::ZERO) {
            return Err(Error::Config(format!("j = {j} is negative")));
        }
        if !matches!(self.wkb_order, 0 | 2 | 4) {
            return Err(Error::Config(format!("wkb_order {} must be 0, 2 or 4", self.wkb_order)));
        }
        let resolvable = self.resolvable_rspt_order();
        if self.rspt_order < 1 || self.rspt_order > resolvable {
            return Err(Error::Config(format!(
                "rspt_order {} outside 1..={resolvable}, the range a WKB fit at order {} can check",
                self.rspt_order, self.wkb_order
            )));
        }
        if self.wkb_gammas.len() < 4 {
            return Err(Error::Config("wkb_gammas needs at least 4 values".into()));
        }
        if self.wkb_terms < self.rspt_order + 3 || self.wkb_terms + 1 > self.wkb_gammas.len() {
            return Err(Error::Config(format!(
                "wkb_terms {} must be at least {} and below the number of gamma values ({})",
                self.wkb_terms,
                self.rspt_order + 3,
                self.wkb_gammas.len()
            )));
        }
        if self.oracle_fit_terms < 2 || self.oracle_fit_terms > self.kappa_list.len() {
            return Err(Error::Config(format!(
                "oracle_fit_terms {} must lie in 2..={}",
                self.oracle_fit_terms,
                self.kappa_list.len()
            )));
        }
        if self.kappa_list.iter().any(|k| !(*k > 1.0)) {
            return Err(Error::Config("every kappa must exceed 1".into()));
        }
        if self.plane_wave_cutoff < 8 {
            return Err(Error::Config("plane_wave_cutoff must be at least 8".into()));
        }
        if !(self.oracle_tolerance > 0.0) {
            return Err(Error::Config("oracle_tolerance must be positive".into()));
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parse_overrides_defaults() {
        let text = "# comment\nj = 1/2, 1\nwkb_order = 2\nrspt_order = 1\n\nseed=7\n";
        let c = RunConfig::parse(text).unwrap();
        assert_eq!(c.j_list, vec![HalfInt::HALF, HalfInt::ONE]);
        assert_eq!(c.wkb_order, 2);
        assert_eq!(c.seed, 7);
        assert_eq!(c.rspt_order, 1);
        assert_eq!(c.wkb_terms, RunConfig::default().wkb_terms);
    }

    #[test]
    fn errors_name_the_line() {
        let e = RunConfig::parse("j = 1\nbogus = 3\n").unwrap_err();
        assert!(e.to_string().contains("line 2"), "{e}");
        assert!(RunConfig::parse("wkb_order = 3").is_err());
        assert!(RunConfig::parse("j = 0.3").is_err());
        assert!(RunConfig::parse("no equals sign").is_err());
        assert!(RunConfig::parse("wkb_order = 2\nrspt_order = 3").is_err());
        assert!(RunConfig::parse("wkb_order = 0").is_err());
    }
}
