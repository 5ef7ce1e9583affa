use erqes_core::oracle::{periodic_band_edges, PeriodicSolveConfig};
use erqes_core::rspt::{rspt_from_expansion, rspt_generic, rspt_ground_energy, taylor_expand_v1};
use erqes_core::series::{rat, rational_to_f64};
use erqes_core::{Error, HalfInt, ModelParams};
use nalgebra::{DMatrix, SymmetricEigen};

/// Ground state of −½d² + ½ω²x² + λx^p in a truncated oscillator basis.
fn dense_ground(omega: f64, lambda: f64, p: u32, basis: usize) -> f64 {
    let big = basis + p as usize;
    let mut x = DMatrix::<f64>::zeros(big, big);
    for n in 0..big - 1 {
        let v = ((n + 1) as f64 / (2.0 * omega)).sqrt();
        x[(n, n + 1)] = v;
        x[(n + 1, n)] = v;
    }
    let mut xp = DMatrix::<f64>::identity(big, big);
    for _ in 0..p {
        xp = &xp * &x;
    }
    let mut h = xp.view((0, 0), (basis, basis)).into_owned() * lambda;
    for n in 0..basis {
        h[(n, n)] += omega * (n as f64 + 0.5);
    }
    SymmetricEigen::new(h).eigenvalues.min()
}

fn quartic() -> Vec<erqes_core::Rational> {
    vec![rat(0, 1), rat(0, 1), rat(0, 1), rat(0, 1), rat(1, 1)]
}

#[test]
fn generic_quartic_against_dense_oracle() {
    let w = rat(3, 2);
    let omega = 1.5f64;
    let c: Vec<f64> = (1..=3)
        .map(|k| rational_to_f64(&rspt_generic(&w, &quartic(), k).unwrap()))
        .collect();
    assert!((c[0] - 0.75 / omega.powi(2)).abs() < 1e-15);
    assert!((c[1] + 21.0 / 8.0 / omega.powi(5)).abs() < 1e-15);
    for r in [1e-3, 1e-2] {
        let lambda = r * omega.powi(3);
        let e = dense_ground(omega, lambda, 4, 60);
        let series = omega / 2.0 + c[0] * lambda + c[1] * lambda.powi(2) + c[2] * lambda.powi(3);
        // The next term is −30885/128 λ⁴/ω¹¹.
        let bound = 300.0 * lambda.powi(4) / omega.powi(11) + 1e-13;
        assert!((e - series).abs() < bound, "r = {r}: {e} vs {series}");
        let second = omega / 2.0 + c[0] * lambda + c[1] * lambda.powi(2);
        assert!((e - second).abs() > 0.5 * (c[2] * lambda.powi(3)).abs());
    }
}

#[test]
fn generic_sextic_first_order() {
    let w = rat(2, 1);
    let mut x6 = vec![rat(0, 1); 7];
    x6[6] = rat(1, 1);
    assert_eq!(rspt_generic(&w, &x6, 1).unwrap(), rat(15, 8) / rat(8, 1));
    // λ = κ/720 at ω = √κ gives 1/(384√κ).
    let c = rat(15, 8) * rat(1, 720);
    assert_eq!(c, rat(1, 384));
    assert!(rspt_generic(&w, &x6, 0).is_err());
}

#[test]
fn taylor_coefficients() {
    let t = taylor_expand_v1(8).unwrap();
    let k = |p: usize| (t.taylor_coeffs[&p].a.clone(), t.taylor_coeffs[&p].b.clone());
    assert_eq!(k(2), (rat(0, 1), rat(1, 2)));
    assert_eq!(k(4), (rat(-3, 24), rat(-1, 24)));
    assert_eq!(k(6), (rat(15, 720), rat(1, 720)));
    for p in [3, 5, 7] {
        assert_eq!(k(p), (rat(0, 1), rat(0, 1)));
    }
    assert_eq!((t.classical_term.a.clone(), t.classical_term.b.clone()), (rat(1, 1), rat(-1, 1)));
}

#[test]
fn ground_energy_coefficients() {
    let s = rspt_ground_energy(7).unwrap();
    let expect = [
        (2, rat(-1, 1)),
        (1, rat(1, 2)),
        (0, rat(31, 32)),
        (-1, rat(-1, 512)),
        (-2, rat(-771, 8192)),
        (-3, rat(6091, 524288)),
        (-4, rat(-3369, 8388608)),
        (-5, rat(-11044729, 268435456)),
        (-6, rat(76798821, 4294967296)),
    ];
    for (twice, c) in expect {
        assert_eq!(s.coeff(HalfInt::from_twice(twice)), Some(c), "power {twice}/2");
    }
    assert_eq!(s.trunc_order(), HalfInt::from_int(-4));
}

#[test]
fn insufficient_taylor_order_is_named() {
    let exp = taylor_expand_v1(6).unwrap();
    match rspt_from_expansion(&exp, 3) {
        Err(Error::InsufficientTaylorOrder { required, available }) => {
            assert_eq!((required, available), (10, 6));
        }
        other => panic!("unexpected {other:?}"),
    }
    assert!(rspt_from_expansion(&exp, 1).is_ok());
}

#[test]
fn partial_sums_approach_the_band_edge() {
    // κ = 24.5: every extra order brings the series closer to the oracle edge.
    let params = ModelParams::new(HalfInt::from_twice(23)).unwrap();
    let kappa = params.kappa_f64();
    let edge = periodic_band_edges(&params, &PeriodicSolveConfig::default()).unwrap().levels[0].energy;
    let s = rspt_ground_energy(4).unwrap();
    let mut last = f64::INFINITY;
    for m in 0..=4i64 {
        let partial = s.truncate(HalfInt::from_twice(-m - 1)).evaluate(kappa).unwrap().value;
        let err = (edge - partial).abs();
        assert!(err < last, "m = {m}: {err} vs {last}");
        last = err;
    }
    // What is left is about the first omitted term, c·κ^(−5/2).
    let next = rational_to_f64(&rat(-11044729, 268435456)) * kappa.powf(-2.5);
    assert!((last / next.abs() - 1.0).abs() < 0.25, "{last} vs {next}");
}
