use proptest::prelude::*;

use primebounds::agm::{omega, omega_exact_mean, refined_upper_bounds, rooin_chain};
use primebounds::{Error, PrimeTable, Verdict};

/// Direct evaluation of the refinement sum in f64.
fn refinement_sum_naive(xs: &[f64]) -> f64 {
    let n = xs.len();
    let a_prev = xs[..n - 1].iter().sum::<f64>() / (n - 1) as f64;
    let nf = n as f64;
    let d = xs[n - 1].powf(1.0 / nf) - a_prev.powf(1.0 / nf);
    (2..=n)
        .map(|k| a_prev.powf((n - k) as f64 / nf) * d.powi(k as i32))
        .sum::<f64>()
        / nf
}

#[test]
fn small_examples() {
    let c = rooin_chain(&[4.0, 9.0]).unwrap();
    assert!(c.arithmetic_mean.contains(6.5) && c.geometric_mean.contains(6.0));
    assert!(c.refinement_sum.contains(0.5) && c.gap().contains(0.5));

    let c = rooin_chain(&[1.0, 1.0, 1.0]).unwrap();
    assert!(c.gap().contains(0.0) && c.refinement_sum.contains(0.0));

    let c = rooin_chain(&[1.0, 2.0, 3.0]).unwrap();
    assert!(c.geometric_mean.contains(6f64.cbrt()));
    let s = refinement_sum_naive(&[1.0, 2.0, 3.0]);
    assert!((c.refinement_sum.mid() - s).abs() < 1e-14);
    assert!(c.refinement_sum.hi() <= 2.0 - 6f64.cbrt() + 1e-15);
}

#[test]
fn invalid_inputs_are_rejected() {
    assert!(matches!(rooin_chain(&[2.0, 1.0]), Err(Error::UnsortedInput { position: 1 })));
    assert!(matches!(rooin_chain(&[-1.0, 1.0]), Err(Error::NegativeInput { position: 0 })));
    assert!(rooin_chain(&[]).is_err());
    // all-zero prefix uses the 0^0 = 1 convention
    let c = rooin_chain(&[0.0, 0.0, 8.0]).unwrap();
    assert_ne!(c.gap_dominates_sum(), Verdict::Fails);
}

fn sorted_vec() -> impl Strategy<Value = Vec<f64>> {
    prop::collection::vec(0.0f64..100.0, 2..=64).prop_map(|mut v| {
        v.sort_by(f64::total_cmp);
        v
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(2000))]

    #[test]
    fn chain_is_never_refuted(xs in sorted_vec()) {
        let c = rooin_chain(&xs).unwrap();
        prop_assert_ne!(c.gap_dominates_sum(), Verdict::Fails);
        prop_assert_ne!(c.sum_nonnegative(), Verdict::Fails);
    }

    #[test]
    fn two_point_case_is_an_equality(a in 0.0f64..100.0, b in 0.0f64..100.0) {
        let xs = [a.min(b), a.max(b)];
        let c = rooin_chain(&xs).unwrap();
        prop_assert!(c.gap().overlaps(c.refinement_sum));
        prop_assert!(c.gap().width() + c.refinement_sum.width() < 1e-12);
    }

    #[test]
    fn scaling_the_inputs_scales_the_chain(xs in sorted_vec(), lambda in 0.01f64..100.0) {
        let c = rooin_chain(&xs).unwrap();
        let scaled: Vec<f64> = xs.iter().map(|x| x * lambda).collect();
        let s = rooin_chain(&scaled).unwrap();
        for (base, sc) in [
            (c.arithmetic_mean, s.arithmetic_mean),
            (c.geometric_mean, s.geometric_mean),
            (c.refinement_sum, s.refinement_sum),
        ] {
            let expect = base.mid() * lambda;
            let slack = 1e-9 * expect.abs().max(1e-9) + (base.width() * lambda + sc.width());
            prop_assert!((sc.mid() - expect).abs() <= slack, "{:?} vs {:?}", base, sc);
        }
    }
}

#[test]
fn omega_at_ten() {
    let table = PrimeTable::build(100).unwrap();
    let o = omega(10, &table).unwrap();
    assert!((o.omega.mid() - 5.21e-3).abs() < 1e-5);
    assert!((o.omega_floor.mid() - 5.2e-12).abs() < 1e-13);
    assert_eq!(o.floor_dominated(), Verdict::Holds);
    assert!(omega(9, &table).is_err());
    // every term grows with the weight, and the exact prefix mean exceeds its Robin floor
    assert!(omega_exact_mean(10, &table).unwrap().lo() > o.omega.hi());
    let b = refined_upper_bounds(10, &table).unwrap();
    assert!(b.agm_refined.contains(26.236_328_592_896_27));
    assert!((b.omega_refined.mid() - 26.232_550_134_448).abs() < 1e-9);
    assert!(table.theta_of(10).unwrap().hi() < b.omega_refined.lo());
}

#[test]
fn robin_floor_is_below_the_prefix_mean() {
    let table = PrimeTable::build(1_000_000).unwrap();
    for n in 2..=1_000_000u64 {
        let floor = table.prime((n - 1) / 2).unwrap_or(0) as u128;
        let sum = table.prefix_sum(n - 1).unwrap();
        assert!(floor * (n as u128 - 1) <= sum, "n = {n}");
    }
}

#[test]
fn omega_is_positive_and_dominates_its_floor() {
    let table = PrimeTable::build(10_000).unwrap();
    for n in 10..=10_000 {
        let o = omega(n, &table).unwrap();
        assert!(o.omega.lo() > 0.0, "n = {n}");
        assert_eq!(o.floor_dominated(), Verdict::Holds, "n = {n}");
        let b = refined_upper_bounds(n, &table).unwrap();
        assert!(b.ordered(), "n = {n}");
    }
}
