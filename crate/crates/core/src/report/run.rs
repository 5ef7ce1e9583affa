//! The end-to-end comparison: exact E₀ series of V₁, WKB fit of E⋆ for V₂,
//! oracle spectra of both, and the published coefficients.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Result, StageExt};
use crate::fit::nested_power_fit;
use crate::half::HalfInt;
use crate::model::ModelParams;
use crate::oracle::{bound_states, periodic_band_edges, BlochSector, BoundSolveConfig, PeriodicSolveConfig};
use crate::qes::{er_duality_check, sector_spectrum};
use crate::model::PotentialId;
use crate::report::float::RFloat;
use crate::rspt::rspt_ground_energy;
use crate::series::{rat, rational_to_f64, PuiseuxSeries, Rational};
use crate::spectrum::Parity;
use crate::wkb::quantize::{solve_quantization, QuantizationProblem};
use crate::wkb::series_fit::{fit_energy_series, top_level_energies};

use super::config::RunConfig;

/// E₀ coefficients of κ, √κ, κ⁰ and κ^{−1/2} as published.
pub fn published_e0() -> Vec<(HalfInt, Rational)> {
    vec![
        (HalfInt::ONE, rat(-1, 1)),
        (HalfInt::HALF, rat(1, 2)),
        (HalfInt::ZERO, rat(31, 32)),
        (-HalfInt::HALF, rat(-41, 384)),
    ]
}

/// E⋆ coefficients as published.
pub fn published_e_star() -> Vec<(HalfInt, Rational)> {
    vec![
        (HalfInt::ONE, rat(1, 1)),
        (HalfInt::HALF, rat(-1, 2)),
        (HalfInt::ZERO, rat(-31, 32)),
        (-HalfInt::HALF, rat(41, 384)),
    ]
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Verdict {
    MatchExact,
    MatchWithinFit,
    Mismatch,
}

impl Verdict {
    pub fn label(self) -> &'static str {
        match self {
            Verdict::MatchExact => "match-exact",
            Verdict::MatchWithinFit => "match-within-fit",
            Verdict::Mismatch => "mismatch",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Estimate {
    pub value: RFloat,
    pub uncertainty: RFloat,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Published {
    pub value: String,
    pub verdict: Verdict,
}

/// Everything known about one power of κ in E₀.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CoefficientCheck {
    pub power: HalfInt,
    pub exact: String,
    pub exact_value: RFloat,
    /// Negated coefficient of the WKB fit of E⋆.
    pub wkb: Estimate,
    /// Error-scaling fit of the oracle ground edge, when available.
    pub oracle: Option<Estimate>,
    /// Agreement of exact, WKB and oracle values among themselves.
    pub internal: Verdict,
    /// Published E₀ coefficient against the exact value.
    pub published_e0: Option<Published>,
    /// Published E⋆ coefficient against the WKB fit.
    pub published_e_star: Option<Published>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct WkbFitSummary {
    pub order: u8,
    pub terms: usize,
    pub gammas: Vec<RFloat>,
    pub energies: Vec<RFloat>,
    pub condition: RFloat,
    pub rms_residual: RFloat,
    /// Coefficients of E⋆ (not negated).
    pub coefficients: Vec<(HalfInt, Estimate)>,
}

/// (E − Σ_{q>p} c_q κ^q)·κ^{−p} fitted as a polynomial in κ^{−1/2}; its
/// constant term estimates c_p.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct OracleScalingFit {
    pub power: HalfInt,
    pub terms: usize,
    pub scaled_residuals: Vec<RFloat>,
    pub estimate: Estimate,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TableRow {
    pub kappa: RFloat,
    pub j: HalfInt,
    pub e0_partial_sum: RFloat,
    pub oracle_v1_edge: RFloat,
    pub neg_oracle_v1_edge: RFloat,
    pub wkb_e_star: RFloat,
    pub oracle_v2_level: RFloat,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LevelMatch {
    pub qes: RFloat,
    pub band_edge: RFloat,
    pub sector: BlochSector,
    pub edge_deviation: RFloat,
    pub v2_index: usize,
    pub v2_level: RFloat,
    pub v2_parity: Option<Parity>,
    /// |E(V₁) + E(V₂ partner)|.
    pub reflection_deviation: RFloat,
    pub pass: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LevelNumberCheck {
    pub expected_index: usize,
    pub actual_index: usize,
    pub parity: Option<Parity>,
    pub energy: RFloat,
    pub pass: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SectorCheck {
    pub j: HalfInt,
    pub duality_pass: bool,
    pub duality_deviation: RFloat,
    pub levels: Vec<LevelMatch>,
    pub level_number: LevelNumberCheck,
    pub pass: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct JitterDiagnostic {
    pub seed: u64,
    pub samples: usize,
    /// Half-width of the uniform noise added to every WKB energy.
    pub amplitude: RFloat,
    /// Largest change of each reported E⋆ coefficient over the samples.
    pub max_shift: Vec<(HalfInt, RFloat)>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MatchReport {
    pub config: RunConfig,
    pub e0_series: PuiseuxSeries,
    pub e_star_fit: WkbFitSummary,
    pub oracle_fits: Vec<OracleScalingFit>,
    pub published_e0: Vec<(HalfInt, String)>,
    pub published_e_star: Vec<(HalfInt, String)>,
    pub coefficients: Vec<CoefficientCheck>,
    pub numeric_table: Vec<TableRow>,
    pub sectors: Vec<SectorCheck>,
    pub jitter: JitterDiagnostic,
    pub internal_mismatches: usize,
    pub published_mismatches: usize,
    pub notes: Vec<String>,
}

impl MatchReport {
    /// True when the engines disagree among themselves; published mismatches
    /// do not count.
    pub fn has_internal_mismatch(&self) -> bool {
        self.internal_mismatches > 0
    }
}

fn estimate(value: f64, uncertainty: f64) -> Estimate {
    Estimate {
        value: RFloat(value),
        uncertainty: RFloat(uncertainty),
    }
}

/// Slack for comparisons against a fit, covering rounding in the fit itself.
const FIT_FLOOR: f64 = 1e-12;

fn lowest_periodic_edge(params: &ModelParams, cfg: &RunConfig) -> Result<f64> {
    let pc = PeriodicSolveConfig {
        plane_wave_cutoff: cfg.plane_wave_cutoff,
        ..PeriodicSolveConfig::default()
    };
    Ok(periodic_band_edges(params, &pc)?.levels[0].energy)
}

fn bound_config(cfg: &RunConfig, count: usize) -> BoundSolveConfig {
    BoundSolveConfig {
        discretization: cfg.discretization,
        count,
        ..BoundSolveConfig::default()
    }
}

fn table_row(kappa: f64, e0: &PuiseuxSeries, cfg: &RunConfig) -> Result<TableRow> {
    let params = ModelParams::from_gamma(kappa - 1.0).stage(|| format!("kappa = {kappa}"))?;
    let j = params.j();
    let partial = e0.evaluate(kappa)?.value;
    let edge = lowest_periodic_edge(&params, cfg).stage(|| format!("V1 periodic edge at j = {j}"))?;
    let n = params.top_level_index();
    let wkb = solve_quantization(&QuantizationProblem::top_level(&params), cfg.wkb_order)
        .stage(|| format!("WKB top level at j = {j}"))?;
    let bound = bound_states(&params, &bound_config(cfg, n + 1)).stage(|| format!("V2 bound states at j = {j}"))?;
    Ok(TableRow {
        kappa: RFloat(kappa),
        j,
        e0_partial_sum: RFloat(partial),
        oracle_v1_edge: RFloat(edge),
        neg_oracle_v1_edge: RFloat(-edge),
        wkb_e_star: RFloat(wkb.energy),
        oracle_v2_level: RFloat(bound.levels[n].energy),
    })
}

fn sector_check(j: HalfInt, cfg: &RunConfig) -> Result<SectorCheck> {
    let params = ModelParams::new(j)?;
    let duality = er_duality_check(j).stage(|| format!("duality at j = {j}"))?;
    let qes = sector_spectrum(j, PotentialId::V1).stage(|| format!("V1 sector at j = {j}"))?;
    let dim = params.sector_dim();
    let mut edges = Vec::new();
    for sector in [BlochSector::Periodic, BlochSector::Antiperiodic] {
        let pc = PeriodicSolveConfig {
            plane_wave_cutoff: cfg.plane_wave_cutoff,
            bloch_sector: sector,
            count: 2 * dim + 2,
            ..PeriodicSolveConfig::default()
        };
        let r = periodic_band_edges(&params, &pc).stage(|| format!("{sector} edges at j = {j}"))?;
        edges.extend(r.levels.iter().map(|l| (sector, l.energy)));
    }
    let n = params.top_level_index();
    let bound = bound_states(&params, &bound_config(cfg, n + 1)).stage(|| format!("V2 bound states at j = {j}"))?;

    let tol = cfg.oracle_tolerance;
    let levels: Vec<LevelMatch> = qes
        .levels
        .iter()
        .map(|l| {
            let e = l.energy;
            let &(sector, edge) = edges
                .iter()
                .min_by(|a, b| (a.1 - e).abs().total_cmp(&(b.1 - e).abs()))
                .expect("edges are never empty");
            let (idx, _) = bound.nearest(-e).expect("bound spectrum is never empty");
            let partner = bound.levels[idx];
            let edge_dev = (edge - e).abs();
            let refl = (partner.energy + e).abs();
            LevelMatch {
                qes: RFloat(e),
                band_edge: RFloat(edge),
                sector,
                edge_deviation: RFloat(edge_dev),
                v2_index: idx,
                v2_level: RFloat(partner.energy),
                v2_parity: partner.parity,
                reflection_deviation: RFloat(refl),
                pass: edge_dev <= tol && refl <= tol,
            }
        })
        .collect();

    let lowest = &levels[0];
    let level_number = LevelNumberCheck {
        expected_index: n,
        actual_index: lowest.v2_index,
        parity: lowest.v2_parity,
        energy: lowest.v2_level,
        pass: lowest.v2_index == n && lowest.v2_parity == Some(Parity::Even) && lowest.pass,
    };
    let pass = duality.pass && level_number.pass && levels.iter().all(|l| l.pass);
    Ok(SectorCheck {
        j,
        duality_pass: duality.pass,
        duality_deviation: RFloat(duality.max_relative_deviation),
        levels,
        level_number,
        pass,
    })
}

fn oracle_scaling_fit(
    power: HalfInt,
    e0: &PuiseuxSeries,
    kappas: &[f64],
    edges: &[f64],
    terms: usize,
) -> Result<OracleScalingFit> {
    let p = power.to_f64();
    let scaled: Vec<f64> = kappas
        .iter()
        .zip(edges)
        .map(|(&k, &e)| {
            let head: f64 = e0
                .terms()
                .filter(|(q, _)| *q > power)
                .map(|(q, c)| rational_to_f64(c) * k.powf(q.to_f64()))
                .sum();
            (e - head) * k.powf(-p)
        })
        .collect();
    let fit = nested_power_fit(kappas, &scaled, |m| -(m as f64) / 2.0, terms, 1)
        .stage(|| format!("oracle scaling fit for power {power}"))?;
    let c = &fit.coefficients[0];
    Ok(OracleScalingFit {
        power,
        terms,
        scaled_residuals: scaled.into_iter().map(RFloat).collect(),
        estimate: estimate(c.estimate, c.uncertainty),
    })
}

fn jitter(cfg: &RunConfig, gammas: &[f64], energies: &[f64], base: &[(HalfInt, Estimate)], amplitude: f64) -> Result<JitterDiagnostic> {
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    let mut max_shift = vec![0.0f64; base.len()];
    for _ in 0..cfg.jitter_samples {
        let noisy: Vec<f64> = energies
            .iter()
            .map(|e| e + amplitude * rng.gen_range(-1.0..=1.0))
            .collect();
        let f = fit_energy_series(gammas, &noisy, cfg.wkb_order, Some(cfg.wkb_terms))?;
        for (s, (c, (_, b))) in max_shift.iter_mut().zip(f.coefficients.iter().zip(base)) {
            *s = s.max((c.estimate - b.value.get()).abs());
        }
    }
    Ok(JitterDiagnostic {
        seed: cfg.seed,
        samples: cfg.jitter_samples,
        amplitude: RFloat(amplitude),
        max_shift: base.iter().map(|(p, _)| *p).zip(max_shift.into_iter().map(RFloat)).collect(),
    })
}

pub fn run_match(cfg: &RunConfig) -> Result<MatchReport> {
    cfg.validate()?;
    let e0 = rspt_ground_energy(cfg.rspt_order).stage(|| format!("perturbative series to order {}", cfg.rspt_order))?;

    // WKB energies of the top algebraic level of V₂ and their κ fit.
    let energies = top_level_energies(&cfg.wkb_gammas, cfg.wkb_order).stage(|| "WKB energies".to_string())?;
    let fit = fit_energy_series(&cfg.wkb_gammas, &energies, cfg.wkb_order, Some(cfg.wkb_terms))
        .stage(|| "WKB series fit".to_string())?;
    let fit_coeffs: Vec<(HalfInt, Estimate)> = fit
        .coefficients
        .iter()
        .enumerate()
        .map(|(m, c)| (HalfInt::from_twice(2 - m as i64), estimate(c.estimate, c.uncertainty)))
        .collect();

    let numeric_table = cfg
        .kappa_list
        .par_iter()
        .map(|&k| table_row(k, &e0, cfg))
        .collect::<Result<Vec<_>>>()?;
    let sectors = cfg
        .j_list
        .par_iter()
        .map(|&j| sector_check(j, cfg))
        .collect::<Result<Vec<_>>>()?;

    let kappas: Vec<f64> = numeric_table.iter().map(|r| r.kappa.get()).collect();
    let edges: Vec<f64> = numeric_table.iter().map(|r| r.oracle_v1_edge.get()).collect();
    let oracle_fits = e0
        .terms()
        .map(|(p, _)| p)
        .filter(|p| *p <= HalfInt::ZERO)
        .map(|p| oracle_scaling_fit(p, &e0, &kappas, &edges, cfg.oracle_fit_terms))
        .collect::<Result<Vec<_>>>()?;

    let pub_e0 = published_e0();
    let pub_star = published_e_star();
    let mut notes = Vec::new();
    let coefficients: Vec<CoefficientCheck> = e0
        .terms()
        .map(|(p, c)| {
            let exact = rational_to_f64(c);
            let star = fit_coeffs
                .iter()
                .find(|(q, _)| *q == p)
                .map(|(_, e)| e.clone())
                .expect("the configuration guarantees a fitted coefficient for every power");
            let wkb = estimate(-star.value.get(), star.uncertainty.get());
            let oracle = oracle_fits.iter().find(|f| f.power == p).map(|f| f.estimate.clone());
            let uw = wkb.uncertainty.get() + FIT_FLOOR;
            let mut agree = (exact - wkb.value.get()).abs() <= uw;
            if let Some(o) = &oracle {
                let uo = o.uncertainty.get() + FIT_FLOOR;
                agree &= (exact - o.value.get()).abs() <= uo;
                agree &= (o.value.get() - wkb.value.get()).abs() <= uo + uw;
            }
            let internal = if agree { Verdict::MatchWithinFit } else { Verdict::Mismatch };
            let published_e0 = pub_e0.iter().find(|(q, _)| *q == p).map(|(_, v)| Published {
                value: v.to_string(),
                verdict: if v == c { Verdict::MatchExact } else { Verdict::Mismatch },
            });
            let published_e_star = pub_star.iter().find(|(q, _)| *q == p).map(|(_, v)| {
                let within = (rational_to_f64(v) - star.value.get()).abs() <= uw;
                Published {
                    value: v.to_string(),
                    verdict: if within { Verdict::MatchWithinFit } else { Verdict::Mismatch },
                }
            });
            if let Some(pe) = &published_e0 {
                if pe.verdict == Verdict::Mismatch {
                    notes.push(format!(
                        "published E0 coefficient of kappa^({p}) is {}, the exact value is {c}",
                        pe.value
                    ));
                }
            }
            CoefficientCheck {
                power: p,
                exact: c.to_string(),
                exact_value: RFloat(exact),
                wkb,
                oracle,
                internal,
                published_e0,
                published_e_star,
            }
        })
        .collect();

    let jitter = jitter(cfg, &cfg.wkb_gammas, &energies, &fit_coeffs, fit.rms_residual.max(f64::EPSILON))?;

    let internal_mismatches = coefficients.iter().filter(|c| c.internal == Verdict::Mismatch).count()
        + sectors.iter().filter(|s| !s.pass).count();
    let published_mismatches = coefficients
        .iter()
        .flat_map(|c| [&c.published_e0, &c.published_e_star])
        .flatten()
        .filter(|p| p.verdict == Verdict::Mismatch)
        .count();
    for s in sectors.iter().filter(|s| !s.level_number.pass) {
        notes.push(format!(
            "j = {}: reflected lowest V1 level sits at index {} (expected {})",
            s.j, s.level_number.actual_index, s.level_number.expected_index
        ));
    }
    if internal_mismatches == 0 && published_mismatches > 0 {
        notes.push("exact, WKB and oracle values agree; the published series disagrees with all three".into());
    }

    Ok(MatchReport {
        config: cfg.clone(),
        e0_series: e0,
        e_star_fit: WkbFitSummary {
            order: fit.order,
            terms: fit.terms,
            gammas: fit.gammas.iter().copied().map(RFloat).collect(),
            energies: fit.energies.iter().copied().map(RFloat).collect(),
            condition: RFloat(fit.condition),
            rms_residual: RFloat(fit.rms_residual),
            coefficients: fit_coeffs,
        },
        oracle_fits,
        published_e0: pub_e0.iter().map(|(p, v)| (*p, v.to_string())).collect(),
        published_e_star: pub_star.iter().map(|(p, v)| (*p, v.to_string())).collect(),
        coefficients,
        numeric_table,
        sectors,
        jitter,
        internal_mismatches,
        published_mismatches,
        notes,
    })
}
