mod common;

use primebounds::analytic::{
    constant_c, dusart_pi_lower, dusart_pi_upper, li, minorant_exceeds_square, prlb_facts,
    refined_gap_minorant, refined_gap_minorant_with, gap_coefficient, gap_coefficient_prose,
    theta_band,
};
use primebounds::{Interval, PrimeTable, Verdict};

#[test]
fn li_series_matches_principal_value_quadrature() {
    for x in [1.5, 2.0, std::f64::consts::E, 10.0, 1000.0, 1e5, 358_801.0, 1e7] {
        let series = li(x).unwrap();
        let quad = common::li_quadrature(x);
        let tol = 1e-9 * quad.abs().max(1.0);
        assert!(
            (series.mid() - quad).abs() < tol + series.width(),
            "Li({x}): series {series:?}, quadrature {quad}"
        );
    }
}

#[test]
fn li_has_its_root_near_soldner() {
    // Li(mu) = 0 at mu = 1.4513692348833810...
    let below = li(1.451_369_234).unwrap();
    let above = li(1.451_369_235).unwrap();
    assert!(below.hi() < 0.0 && above.lo() > 0.0);
}

#[test]
fn constant_c_against_quadrature() {
    let c = constant_c();
    let sq = 599.0 * 599.0;
    let quad = 35995.0 - 3.0 * common::li_quadrature(sq) + sq / 599f64.ln();
    assert!((c.mid() - quad).abs() < 1e-6, "{c:?} vs {quad}");
    assert!(c.width() < 1e-2);
    assert!((c.mid() + 47.06746).abs() < 5e-3);
}

#[test]
fn dusart_bounds_bracket_pi_at_every_prime_below_ten_million() {
    let table = PrimeTable::build(664_579).unwrap();
    assert_eq!(table.largest(), 9_999_991);
    for (i, &p) in table.primes().iter().enumerate() {
        let pi = Interval::from_u64(i as u64 + 1);
        assert_ne!(primebounds::certify_less_eq(pi, dusart_pi_upper(p as f64).unwrap()), Verdict::Fails);
        if p >= 599 {
            assert_eq!(
                primebounds::certify_less_eq(dusart_pi_lower(p as f64).unwrap(), pi),
                Verdict::Holds,
                "at {p}"
            );
        }
    }
}

#[test]
fn log_ratio_facts_hold_from_599() {
    for x in [599.0, 600.0, 1e3, 1e6, 1e12] {
        let f = prlb_facts(Interval::point(x)).unwrap();
        assert_eq!(f.ratio_below_limit, Verdict::Holds);
        assert_eq!(f.log_above_185, Verdict::Holds);
        assert_eq!(f.ratio_below_log, Verdict::Holds);
    }
}

#[test]
fn minorant_crossover_is_at_21152() {
    let c = gap_coefficient();
    assert_eq!(minorant_exceeds_square(21151, c).unwrap(), Verdict::Fails);
    assert_eq!(minorant_exceeds_square(21152, c).unwrap(), Verdict::Holds);
    let m = refined_gap_minorant(21152).unwrap();
    assert!(m.lo() > 21152f64 * 21152.0 / 14.0);
}

#[test]
fn prose_coefficient_never_crosses() {
    // 0.0119 < 1/14 and ln(n(ln n + ln ln n)) > ln n, so the minorant stays
    // below n^2/14 for every n; spot-check a wide range
    let prose = gap_coefficient_prose();
    for n in [6u64, 100, 21152, 1_000_000, 1_000_000_000, 1_000_000_000_000] {
        let m = refined_gap_minorant_with(n, prose).unwrap();
        assert!(m.hi() < (n as f64).powi(2) / 14.0, "n = {n}");
    }
}

#[test]
fn theta_band_is_wide_at_desk_scale() {
    let (lo, hi) = theta_band(1e6).unwrap();
    assert!(lo.hi() < 0.0 && hi.lo() > 1e6);
}
