use std::f64::consts::PI;

use erqes_core::fit::MAX_CONDITION;
use erqes_core::oracle::{bound_states, periodic_band_edges, BoundSolveConfig, PeriodicSolveConfig};
use erqes_core::qes::sector_spectrum;
use erqes_core::wkb::series_fit::{fit_energy_series, top_level_energies};
use erqes_core::wkb::{
    contour_integral, dunham_integrals, extract_energy_series, solve_generic, solve_quantization, tunneling_action,
    ContourSpec, Harmonic, QuantizationProblem, V2Potential, WkbIntegrand, WkbPotential,
};
use erqes_core::{Error, HalfInt, ModelParams, PotentialId};

fn params(twice: i64) -> ModelParams {
    ModelParams::new(HalfInt::from_twice(twice)).unwrap()
}

fn top_oracle(twice: i64) -> f64 {
    let p = params(twice);
    let n = p.top_level_index();
    let cfg = BoundSolveConfig {
        count: n + 1,
        ..BoundSolveConfig::default()
    };
    bound_states(&p, &cfg).unwrap().levels[n].energy
}

fn top_wkb(twice: i64, order: u8) -> f64 {
    solve_quantization(&QuantizationProblem::top_level(&params(twice)), order)
        .unwrap()
        .energy
}

#[test]
fn harmonic_contour_values() {
    let h = Harmonic { omega: 1.0 };
    let spec = ContourSpec::default();
    let lead = contour_integral(WkbIntegrand::Leading, 2.5, &h, &spec).unwrap();
    assert!((lead.value - 5.0 * PI).abs() < 1e-12);
    assert!((lead.pi_multiple - 5.0).abs() < 1e-12);
    for which in [WkbIntegrand::Eps2, WkbIntegrand::Eps4] {
        let v = contour_integral(which, 2.5, &h, &spec).unwrap();
        assert!(v.value.abs() < 1e-10, "{which:?}: {}", v.value);
    }
    assert!(matches!(h.turning_points(-1.0), Err(Error::Domain(_))));
}

#[test]
fn harmonic_quantization_is_exact_at_every_order() {
    let spec = ContourSpec::default();
    for omega in [1.0, 2.5] {
        let h = Harmonic { omega };
        for n in 0..=10 {
            for order in [0, 2, 4] {
                let s = solve_generic(&h, n, order, &spec).unwrap();
                let exact = (n as f64 + 0.5) * omega;
                assert!((s.energy - exact).abs() < 1e-10, "ω {omega}, n {n}, order {order}: {}", s.energy);
                assert!((s.maslov_offset - 0.5).abs() < 1e-9);
            }
        }
    }
}

#[test]
fn spin_half_improves_through_second_order() {
    let exact = (17f64.sqrt() - 1.0) / 4.0;
    let err: Vec<f64> = [0, 2, 4].iter().map(|&o| (top_wkb(1, o) - exact).abs()).collect();
    assert!(err[1] < err[0] / 100.0, "{err:?}");
    // γ = 3/2 is too small for the ε⁴ term to help; it stays at the 1e-4 level.
    assert!(err[2] < 1e-3, "{err:?}");
}

#[test]
fn error_decreases_with_order_against_the_oracle() {
    for twice in [8, 12, 16] {
        let oracle = top_oracle(twice);
        let err: Vec<f64> = [0, 2, 4].iter().map(|&o| (top_wkb(twice, o) - oracle).abs()).collect();
        assert!(err[0] > err[1] && err[1] > err[2], "2j = {twice}: {err:?}");
    }
}

#[test]
fn contour_integrals_at_gamma_8_5() {
    // E = −(lowest V₁ band edge) at γ = 17/2.
    let p = params(8);
    let e = -periodic_band_edges(&p, &PeriodicSolveConfig::default()).unwrap().levels[0].energy;
    let v2 = V2Potential { gamma: 8.5 };
    let spec = ContourSpec::default();
    let base = dunham_integrals(&v2, e, &spec).unwrap();
    for c in [base.leading, base.eps2, base.eps4] {
        assert!(c.imag.abs() <= 1e-8 * c.value.abs(), "{c:?}");
        assert!((c.pi_multiple * PI - c.value).abs() <= 1e-12 * c.value.abs());
    }
    // Leading term against 2∫p dx along the real axis, x = x_t sin θ.
    let xt = (8.5 + (8.5f64 * 8.5 + 1.0 + 2.0 * e).sqrt()).acosh();
    let steps = 20_000;
    let h = PI / steps as f64;
    let direct: f64 = (0..steps)
        .map(|i| {
            let th = -PI / 2.0 + (i as f64 + 0.5) * h;
            let x = xt * th.sin();
            let v = 0.5 * x.sinh().powi(2) - 8.5 * x.cosh();
            (2.0 * (e - v)).max(0.0).sqrt() * xt * th.cos() * h
        })
        .sum::<f64>()
        * 2.0;
    assert!((base.leading.value - direct).abs() < 1e-8 * direct, "{} vs {direct}", base.leading.value);

    // Contour independence: a larger ellipse and more nodes change nothing.
    let wide = ContourSpec {
        a_factor: 0.4,
        b_factor: 0.4,
        nodes: 2048,
        ..spec
    };
    let other = dunham_integrals(&v2, e, &wide).unwrap();
    for (a, b) in [
        (base.leading, other.leading),
        (base.eps2, other.eps2),
        (base.eps4, other.eps4),
    ] {
        assert!((a.value - b.value).abs() <= 1e-9 * a.value.abs(), "{a:?} vs {b:?}");
    }
}

#[test]
fn solution_reports_corrections_and_checks() {
    let s = solve_quantization(&QuantizationProblem::top_level(&params(12)), 4).unwrap();
    assert_eq!(s.n, 24);
    assert!((s.corrections[0] - s.pi_multiple_checks[0] * PI).abs() < 1e-9 * s.corrections[0]);
    let total: f64 = s.corrections.iter().sum();
    assert!((total - 2.0 * PI * 24.5).abs() < 1e-8);
    assert!((s.maslov_offset - 0.5).abs() < 1e-9);
    assert!(s.max_imag_residue < 1e-8);
    assert!(s.warnings.is_empty());
    assert!(s.corrections[2].abs() < s.corrections[1].abs());
    let json = serde_json::to_value(&s).unwrap();
    assert!(json.get("E").is_some() && json.get("corrections").is_some());
    assert!(solve_quantization(&QuantizationProblem::top_level(&params(12)), 3).is_err());
}

#[test]
fn energies_below_the_well_are_rejected() {
    let v2 = V2Potential { gamma: 4.5 };
    assert!(dunham_integrals(&v2, -5.0, &ContourSpec::default()).is_err());
}

#[test]
fn series_fit_recovers_leading_coefficients() {
    let fit = extract_energy_series(&erqes_core::wkb::series_fit::default_fit_gammas(), 4, None).unwrap();
    let c = &fit.coefficients;
    let expect = [1.0, -0.5, -31.0 / 32.0];
    for (k, e) in expect.iter().enumerate() {
        assert!(c[k].uncertainty <= 1e-3, "{:?}", c[k]);
        assert!((c[k].estimate - e).abs() <= c[k].uncertainty.max(1e-9), "{:?}", c[k]);
    }
    assert!(fit.condition < MAX_CONDITION);
}

#[test]
fn series_fit_needs_enough_points() {
    let gammas = [8.5, 9.5, 10.5];
    let e = top_level_energies(&gammas, 2).unwrap();
    assert!(fit_energy_series(&gammas, &e, 2, None).is_err());
    assert!(top_level_energies(&[8.4], 2).is_err());
}

#[test]
fn tunneling_action_asymptotics() {
    let mut last_dev = f64::INFINITY;
    let mut last_log_ratio = 0.0;
    for twice in [12, 20, 28, 36] {
        let t = tunneling_action(&params(twice)).unwrap();
        let dev = (t.ratio - 1.0).abs();
        assert!(dev < last_dev, "2j = {twice}: {}", t.ratio);
        last_dev = dev;
        let log_ratio = t.band_width_log.unwrap() / -t.action;
        assert!(log_ratio > last_log_ratio && log_ratio < 1.0, "2j = {twice}: {log_ratio}");
        last_log_ratio = log_ratio;
    }
    assert!(last_dev < 0.1);
}

#[test]
fn top_level_agrees_with_exact_sector() {
    // The fitted quantity is the reflected lowest V₁ level.
    let exact = -sector_spectrum(HalfInt::from_int(4), PotentialId::V1).unwrap().levels[0].energy;
    let d = (top_wkb(8, 4) - exact).abs();
    assert!(d < 1e-6, "{d}");
}
