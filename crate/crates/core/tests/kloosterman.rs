use proptest::prelude::*;
use regpet::kloosterman::*;
use regpet::specfun::bessel_f;
use std::f64::consts::PI;

fn gcd(a: u64, b: u64) -> u64 {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}

/// Sum of e((m d + n d')/c) with d' found by search.
fn brute(m: i64, n: i64, c: u64) -> f64 {
    let mut s = 0.0;
    for d in 0..c {
        if gcd(d, c) != 1 {
            continue;
        }
        let dbar = (0..c).find(|x| (d * x) % c == 1 % c).unwrap();
        let r = (m * d as i64 + n * dbar as i64).rem_euclid(c as i64) as f64;
        s += (2.0 * PI * r / c as f64).cos();
    }
    s
}

fn moebius(mut n: u64) -> i64 {
    let mut mu = 1;
    let mut p = 2;
    while p * p <= n {
        if n % p == 0 {
            n /= p;
            if n % p == 0 {
                return 0;
            }
            mu = -mu;
        }
        p += 1;
    }
    if n > 1 {
        mu = -mu;
    }
    mu
}

#[test]
fn small_values() {
    assert_eq!(kloosterman_sum(1, 1, 1).unwrap(), 1.0);
    assert!((kloosterman_sum(1, 1, 2).unwrap() - 1.0).abs() < 1e-12);
    assert!((kloosterman_sum(1, 1, 3).unwrap() + 1.0).abs() < 1e-12);
    assert!((kloosterman_sum(1, 1, 5).unwrap() - brute(1, 1, 5)).abs() < 1e-12);
    assert!(kloosterman_sum(1, 1, 0).is_err());
}

#[test]
fn ramanujan_sums() {
    for c in 1..40u64 {
        for n in 1..12i64 {
            let want: i64 = (1..=c)
                .filter(|d| c % d == 0 && n as u64 % d == 0)
                .map(|d| moebius(c / d) * d as i64)
                .sum();
            let got = kloosterman_sum(0, n, c).unwrap();
            assert!((got - want as f64).abs() < 1e-9, "c={c} n={n}: {got} vs {want}");
        }
    }
}

#[test]
fn batched_sums_match_the_series_definition() {
    let pairs = [(1, 1), (1, 2), (2, 3)];
    let ps = partial_sums(&pairs, 60).unwrap();
    for (p, &(m, n)) in pairs.iter().enumerate() {
        let x0 = 4.0 * PI * ((m * n) as f64).sqrt();
        let mut s = 0.0;
        for c in 1..=60u64 {
            s += brute(m as i64, n as i64, c) / c as f64 * bessel_f(x0 / c as f64).unwrap().value.re;
            assert!((ps.sums[p][c as usize - 1] - s).abs() < 1e-10 * (1.0 + s.abs()), "({m},{n}) c={c}");
        }
    }
}

#[test]
fn smoothing_uses_the_last_ten_block_ends() {
    let ps = partial_sums(&[(1, 1)], 400).unwrap();
    let e = ps.smoothed(0, 400).unwrap();
    let ends: Vec<f64> = (1..=20).map(|j| ps.sums[0][j * 20 - 1]).collect();
    let mean = ends[10..].iter().sum::<f64>() / 10.0;
    assert!((e.value - mean).abs() < 1e-14 * mean.abs());
    assert_eq!(e.partial_sums.unwrap().len(), 20);
    assert!(ps.smoothed(0, 401).is_err());
}

#[test]
fn product_converges_toward_the_known_value() {
    // <f1, f1> from the truncated-domain integral
    let want = 205.499979035041;
    let e = product_route_a(1, 1, 3000).unwrap();
    assert!((e.value - want).abs() / want < 1e-2, "{}", e.value);
    let l = dit_coefficient(1, 1, 3000).unwrap();
    assert!((-4.0 * PI * l.value - e.value).abs() < 1e-9 * want);
}

#[test]
fn invalid_arguments() {
    assert!(partial_sums(&[(0, 1)], 10).is_err());
    assert!(partial_sums(&[(1, 1)], 0).is_err());
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn symmetric_and_bounded(m in -30i64..30, n in -30i64..30, c in 1u64..90) {
        let a = kloosterman_sum(m, n, c).unwrap();
        let b = kloosterman_sum(n, m, c).unwrap();
        prop_assert!((a - b).abs() < 1e-9);
        prop_assert!(a.abs() <= c as f64 + 1e-9);
        prop_assert!((a - brute(m, n, c)).abs() < 1e-9);
        // K(m, n; c) = K(1, mn; c) when gcd(m, c) = 1
        if gcd(m.rem_euclid(c as i64) as u64, c) == 1 {
            prop_assert!((a - kloosterman_sum(1, m * n, c).unwrap()).abs() < 1e-9);
        }
    }

    #[test]
    fn weil_bound_for_primes(m in 1i64..50, n in 1i64..50, i in 0usize..12) {
        let p = [5u64, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41, 43][i];
        if (m * n) % p as i64 != 0 {
            let k = kloosterman_sum(m, n, p).unwrap();
            prop_assert!(k.abs() <= 2.0 * (p as f64).sqrt() + 1e-9);
        }
    }
}
