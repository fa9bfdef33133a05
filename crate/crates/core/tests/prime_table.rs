mod common;

use num_bigint::BigInt;
use num_traits::ToPrimitive;

use primebounds::fixed::scaled_f64;
use primebounds::prime_core::sieve::{first_primes, primes_in};
use primebounds::prime_core::{load_cache, save_cache, THETA_EPS_PER_TERM};
use primebounds::{Error, PrimeTable, TableConfig};

#[test]
fn table_matches_trial_division() {
    let oracle = common::trial_division_primes(110_000);
    let table = PrimeTable::build(10_000).unwrap();
    assert_eq!(table.primes(), &oracle[..10_000]);
    assert_eq!(table.prime(10_000).unwrap(), 104_729);
    assert_eq!(table.prefix_sum(10).unwrap(), 129);
    assert_eq!(table.primes()[..5], [2, 3, 5, 7, 11]);
}

#[test]
fn segment_size_does_not_change_the_table() {
    let reference = PrimeTable::build(30_000).unwrap();
    for segment in [64, 1000, 4096, 1 << 16] {
        let cfg = TableConfig {
            segment_size: segment,
            ..TableConfig::default()
        };
        assert_eq!(PrimeTable::build_with(30_000, &cfg).unwrap(), reference, "segment {segment}");
    }
    let oracle = common::trial_division_primes(50_000);
    let lo_hi: Vec<u64> = oracle.iter().copied().filter(|&p| p >= 30_011).collect();
    assert_eq!(primes_in(30_011, 50_000, 777), lo_hi);
    assert_eq!(first_primes(1, 1 << 10), vec![2]);
}

#[test]
fn pi_matches_brute_force_counts() {
    let table = PrimeTable::build(5000).unwrap();
    let oracle = common::trial_division_primes(table.largest());
    for x in (0..table.largest()).step_by(37).chain([1, 2, 101, 599]) {
        let expected = oracle.iter().filter(|&&p| p <= x).count() as u64;
        assert_eq!(table.pi_of(x).unwrap(), expected, "pi({x})");
    }
    assert_eq!(table.pi_of(101).unwrap(), 26);
    assert_eq!(table.pi_of(599).unwrap(), 109);
    assert!(matches!(
        table.pi_of(table.largest() + 1),
        Err(Error::ArgumentOutOfRange { .. })
    ));
}

#[test]
fn theta_prefixes_contain_high_precision_sums() {
    let table = PrimeTable::build(20_000).unwrap();
    let bits = 96;
    let mut acc = common::theta_fixed(&[], bits);
    for (i, &p) in table.primes().iter().enumerate() {
        acc = acc.add(&primebounds::fixed::ln_u64(p, bits));
        let n = i as u64 + 1;
        if n % 97 != 1 && n != 20_000 {
            continue;
        }
        let th = table.theta_of(n).unwrap();
        assert!(
            scaled_f64(th.lo(), bits).unwrap() <= acc.lo && acc.hi <= scaled_f64(th.hi(), bits).unwrap(),
            "theta at {n}: {th:?}"
        );
        assert!(th.width() <= n as f64 * THETA_EPS_PER_TERM, "width at {n}");
    }
}

#[test]
fn theta_agrees_with_exact_primorial_log() {
    let table = PrimeTable::build(3000).unwrap();
    for n in [1u64, 2, 10, 100, 1000, 3000] {
        let product = BigInt::from(table.primorial_exact(n).unwrap().clone());
        // ln P = bits * ln 2 + ln(P / 2^bits), with the top 60 bits exact enough
        let shift = product.bits().saturating_sub(60);
        let top = (&product >> shift).to_f64().unwrap();
        let ln_p = shift as f64 * std::f64::consts::LN_2 + top.ln();
        let th = table.theta_of(n).unwrap();
        assert!((th.mid() - ln_p).abs() <= 1e-12 * ln_p.max(1.0), "n = {n}");
    }
    assert_eq!(table.primorial_exact(10).unwrap().to_u64(), Some(6_469_693_230));
}

#[test]
fn euclid_numbers_are_one_below_multiples_of_each_prime() {
    let table = PrimeTable::build(200).unwrap();
    for n in 2..=200u64 {
        let e = table.euclid_number(n).unwrap();
        assert!(e.value >= 5u32.into());
        let next = &e.value + 1u32;
        for &p in &table.primes()[..n as usize] {
            assert_eq!(&next % p, 0u32.into());
        }
    }
}

#[test]
fn product_cap_is_enforced() {
    let table = PrimeTable::build(100).unwrap().with_product_cap(50);
    assert!(table.primorial_exact(50).is_ok());
    assert!(matches!(
        table.primorial_exact(51),
        Err(Error::ProductCapExceeded { index: 51, cap: 50 })
    ));
}

#[test]
fn telescoping_sum_equals_mandl_gap() {
    let table = PrimeTable::build(3000).unwrap();
    for n in 2..=3000 {
        assert_eq!(table.pi_step_integral(n).unwrap() as i128, table.mandl_gap(n).unwrap());
    }
}

#[test]
fn cache_round_trip_and_corruption() {
    let table = PrimeTable::build(100_000).unwrap();
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("t.bin");
    save_cache(&table, &path).unwrap();
    assert_eq!(load_cache(&path).unwrap(), table);
    let mut bytes = std::fs::read(&path).unwrap();
    let mid = bytes.len() / 2;
    bytes[mid] ^= 0x10;
    std::fs::write(&path, &bytes).unwrap();
    assert!(matches!(load_cache(&path), Err(Error::CorruptCache(_))));
}

#[test]
fn oversized_requests_are_refused() {
    let cfg = TableConfig {
        max_count: 1000,
        ..TableConfig::default()
    };
    assert!(matches!(
        PrimeTable::build_with(1001, &cfg),
        Err(Error::ResourceExhausted { requested: 1001, ceiling: 1000 })
    ));
}
