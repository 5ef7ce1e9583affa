use erqes_core::series::{rat, rational_to_f64};
use erqes_core::{HalfInt, PuiseuxSeries};
use proptest::prelude::*;

fn series() -> impl Strategy<Value = PuiseuxSeries> {
    (-4i64..=4, 1usize..=8)
        .prop_flat_map(|(lead, len)| {
            (
                Just(lead),
                Just(len),
                prop::collection::vec((-20i64..=20, 1i64..=8), len),
            )
        })
        .prop_map(|(lead, len, cs)| {
            let coeffs = cs.into_iter().map(|(n, d)| rat(n, d)).collect();
            PuiseuxSeries::new(
                HalfInt::from_twice(lead),
                coeffs,
                HalfInt::from_twice(lead - len as i64),
            )
            .unwrap()
        })
}

/// Equality on the powers both sides determine.
fn same(a: &PuiseuxSeries, b: &PuiseuxSeries) -> bool {
    let t = a.trunc_order().max(b.trunc_order());
    a.truncate(t) == b.truncate(t)
}

proptest! {
    #[test]
    fn addition_commutes_and_associates(a in series(), b in series(), c in series()) {
        prop_assert!(same(&(&a + &b), &(&b + &a)));
        prop_assert!(same(&(&(&a + &b) + &c), &(&a + &(&b + &c))));
    }

    #[test]
    fn additive_inverse(a in series()) {
        prop_assert!((&a - &a).is_zero());
        prop_assert!((&a + &(-&a)).is_zero());
    }

    #[test]
    fn multiplication_commutes_and_associates(a in series(), b in series(), c in series()) {
        prop_assert!(same(&(&a * &b), &(&b * &a)));
        prop_assert!(same(&(&(&a * &b) * &c), &(&a * &(&b * &c))));
    }

    #[test]
    fn distributive(a in series(), b in series(), c in series()) {
        prop_assert!(same(&(&a * &(&b + &c)), &(&(&a * &b) + &(&a * &c))));
    }

    #[test]
    fn multiplicative_identity(a in series()) {
        let one = PuiseuxSeries::monomial(HalfInt::ZERO, rat(1, 1), HalfInt::from_int(-40));
        prop_assert!(same(&(&one * &a), &a));
    }

    #[test]
    fn evaluation_is_a_ring_homomorphism(a in series(), b in series()) {
        let k = 7.0;
        let ev = |s: &PuiseuxSeries| s.evaluate(k).unwrap().value;
        let sum = &a + &b;
        // Compare against the operands cut to the powers the sum keeps.
        let t = sum.trunc_order();
        let expect = ev(&a.truncate(t)) + ev(&b.truncate(t));
        prop_assert!((ev(&sum) - expect).abs() <= 1e-9 * (1.0 + expect.abs()));
    }
}

fn eval_in_gamma(s: &PuiseuxSeries, gamma: f64) -> f64 {
    s.terms().map(|(p, c)| rational_to_f64(c) * gamma.powf(p.to_f64())).sum()
}

#[test]
fn rebase_matches_numeric_substitution() {
    // A series in powers of γ; its κ form must agree at κ = γ + 1 up to the
    // first dropped power.
    let trunc = HalfInt::from_int(-3);
    let s = PuiseuxSeries::from_terms(
        &[
            (HalfInt::ONE, rat(-1, 1)),
            (HalfInt::HALF, rat(1, 2)),
            (HalfInt::ZERO, rat(3, 7)),
            (-HalfInt::HALF, rat(-5, 11)),
            (HalfInt::from_int(-2), rat(2, 3)),
        ],
        trunc,
    );
    let r = s.rebase_gamma_to_kappa();
    assert_eq!(r.trunc_order(), trunc);
    let scale: f64 = s.terms().map(|(_, c)| rational_to_f64(c).abs()).sum();
    for kappa in [10.0f64, 100.0, 1000.0] {
        let direct = eval_in_gamma(&s, kappa - 1.0);
        let rebased = r.evaluate(kappa).unwrap().value;
        let bound = 4.0 * scale * kappa.powf(trunc.to_f64());
        assert!(
            (direct - rebased).abs() <= bound,
            "kappa {kappa}: {direct} vs {rebased}, bound {bound}"
        );
    }
}

#[test]
fn rebase_error_shrinks_at_the_truncation_rate() {
    let trunc = HalfInt::from_twice(-5);
    let s = PuiseuxSeries::from_terms(&[(HalfInt::HALF, rat(1, 1))], trunc);
    let r = s.rebase_gamma_to_kappa();
    let err = |k: f64| (eval_in_gamma(&s, k - 1.0) - r.evaluate(k).unwrap().value).abs();
    // Dropped tail starts at κ^(−5/2): a factor 10 in κ gains ~10^2.5.
    let ratio = err(100.0) / err(1000.0);
    assert!(ratio > 200.0 && ratio < 500.0, "ratio {ratio}");
}

#[test]
fn json_roundtrip() {
    let s = PuiseuxSeries::from_terms(
        &[(HalfInt::ONE, rat(-1, 1)), (-HalfInt::HALF, rat(-1, 512))],
        HalfInt::from_int(-1),
    );
    let v = s.to_json_value();
    assert_eq!(PuiseuxSeries::from_json_value(&v).unwrap(), s);
    let text = serde_json::to_string(&s).unwrap();
    assert_eq!(serde_json::from_str::<PuiseuxSeries>(&text).unwrap(), s);
}
