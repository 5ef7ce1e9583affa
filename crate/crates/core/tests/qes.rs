use erqes_core::qes::eigen::char_poly;
use erqes_core::qes::{build_qes_matrix, er_duality_check, qes_spectrum, sector_spectrum, sl2_generators, RatMatrix};
use erqes_core::series::rat;
use erqes_core::{HalfInt, ModelParams, PotentialId};

fn all_j() -> impl Iterator<Item = HalfInt> {
    (0..=25).map(HalfInt::from_twice)
}

fn dense(rows: &[&[i64]], den: i64) -> RatMatrix {
    let mut m = RatMatrix::zeros(rows.len());
    for (r, row) in rows.iter().enumerate() {
        for (c, v) in row.iter().enumerate() {
            m.set(r, c, rat(*v, den));
        }
    }
    m
}

#[test]
fn generators_small_cases() {
    let g = sl2_generators(HalfInt::HALF).unwrap();
    assert_eq!(g.t_zero, dense(&[&[-1, 0], &[0, 1]], 2));
    // T⁻ sends ξ to 1 and kills 1: columns are input monomials.
    assert_eq!(g.t_minus, dense(&[&[0, 1], &[0, 0]], 1));
    let g = sl2_generators(HalfInt::ONE).unwrap();
    assert_eq!(g.t_plus, dense(&[&[0, 0, 0], &[2, 0, 0], &[0, 1, 0]], 1));
}

#[test]
fn commutators_hold_exactly() {
    for j in all_j() {
        let g = sl2_generators(j).unwrap();
        assert_eq!(g.t_zero.commutator(&g.t_plus), g.t_plus, "j = {j}");
        assert_eq!(g.t_zero.commutator(&g.t_minus), g.t_minus.scale(&rat(-1, 1)), "j = {j}");
        assert_eq!(g.t_plus.commutator(&g.t_minus), g.t_zero.scale(&rat(2, 1)), "j = {j}");
    }
}

#[test]
fn sector_matrix_is_a_quadratic_sl2_element() {
    // M(V₁) = T⁺ + T⁻ + ½(T⁰ + j)² − ½(T⁻)²
    for j in all_j() {
        let g = sl2_generators(j).unwrap();
        let n = g.t_zero.dim();
        let shifted = g.t_zero.add(&RatMatrix::identity(n).scale(&j.to_rational()));
        let expect = g
            .t_plus
            .add(&g.t_minus)
            .add(&shifted.mul(&shifted).scale(&rat(1, 2)))
            .add(&g.t_minus.mul(&g.t_minus).scale(&rat(-1, 2)));
        let m = build_qes_matrix(&ModelParams::new(j).unwrap(), PotentialId::V1).unwrap();
        assert_eq!(m.to_dense(), expect, "j = {j}");
    }
}

#[test]
fn published_small_matrices() {
    let m = |twice| build_qes_matrix(&ModelParams::new(HalfInt::from_twice(twice)).unwrap(), PotentialId::V1).unwrap();
    assert_eq!(m(1).to_dense(), dense(&[&[0, 2], &[2, 1]], 2));
    assert_eq!(m(2).to_dense(), dense(&[&[0, 2, -2], &[4, 1, 4], &[0, 2, 4]], 2));
    assert_eq!(m(2).to_csv(), "0,1,-1\n2,1/2,2\n0,1,2\n");
}

#[test]
fn v2_is_negated_v1_for_every_j() {
    for j in all_j() {
        let p = ModelParams::new(j).unwrap();
        let m1 = build_qes_matrix(&p, PotentialId::V1).unwrap();
        let m2 = build_qes_matrix(&p, PotentialId::V2).unwrap();
        assert_eq!(m2.to_dense(), m1.negated().to_dense(), "j = {j}");
        let trace: i64 = (0..=j.twice()).map(|k| k * k).sum();
        assert_eq!(m1.to_dense().trace(), rat(trace, 2));
    }
}

#[test]
fn exact_small_spectra() {
    let s = sector_spectrum(HalfInt::HALF, PotentialId::V1).unwrap();
    let r17 = 17f64.sqrt();
    assert!((s.levels[0].energy - (1.0 - r17) / 4.0).abs() < 1e-12);
    assert!((s.levels[1].energy - (1.0 + r17) / 4.0).abs() < 1e-12);

    let s = sector_spectrum(HalfInt::ZERO, PotentialId::V1).unwrap();
    assert_eq!(s.len(), 1);
    assert!(s.levels[0].energy.abs() < 1e-12);

    let p = ModelParams::new(HalfInt::ONE).unwrap();
    let m = build_qes_matrix(&p, PotentialId::V1).unwrap();
    let poly = char_poly(&m.to_dense());
    assert_eq!(poly, vec![rat(6, 1), rat(-3, 1), rat(-5, 2), rat(1, 1)]);
    let s = qes_spectrum(&m, false).unwrap();
    for l in &s.levels {
        let e = l.energy;
        assert!((e.powi(3) - 2.5 * e * e - 3.0 * e + 6.0).abs() < 1e-12);
    }
    assert!((s.levels[0].energy + 1.6236).abs() < 1e-4);
}

#[test]
fn exact_route_agrees_with_eigensolver() {
    for twice in 1..=8 {
        let p = ModelParams::new(HalfInt::from_twice(twice)).unwrap();
        let m = build_qes_matrix(&p, PotentialId::V1).unwrap();
        let a = qes_spectrum(&m, true).unwrap();
        let b = qes_spectrum(&m, false).unwrap();
        assert!(a.char_poly.is_some());
        for (x, y) in a.levels.iter().zip(&b.levels) {
            assert!((x.energy - y.energy).abs() <= 1e-9 * (1.0 + x.energy.abs()), "2j = {twice}");
        }
    }
}

#[test]
fn duality_up_to_j_25_halves() {
    for j in all_j() {
        let r = er_duality_check(j).unwrap();
        assert!(r.pass && r.entries_negated);
        assert!(r.max_relative_deviation <= 1e-10, "j = {j}: {}", r.max_relative_deviation);
    }
}

#[test]
fn negative_j_is_rejected() {
    assert!(ModelParams::new(HalfInt::from_twice(-1)).is_err());
    assert!("0.3".parse::<HalfInt>().is_err());
}
