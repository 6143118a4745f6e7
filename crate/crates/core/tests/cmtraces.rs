use num_bigint::BigInt;
use regpet::cmtraces::*;
use regpet::qseries::{faber_basis, QSeries};
use std::f64::consts::PI;

/// Reduced forms counted from the textbook definition.
fn class_count_oracle(d: i64) -> usize {
    let n = -d;
    let mut count = 0;
    let mut a = 1;
    while 3 * a * a <= n {
        for b in -a + 1..=a {
            if (b * b + n) % (4 * a) != 0 {
                continue;
            }
            let c = (b * b + n) / (4 * a);
            if a > c || (a == c && b < 0) {
                continue;
            }
            count += 1;
        }
        a += 1;
    }
    count
}

fn sigma1(n: i64) -> i64 {
    (1..=n).filter(|d| n % d == 0).sum()
}

/// Hurwitz class number H(N) as the trace of the constant 1.
fn hurwitz(n: i64) -> f64 {
    let one = QSeries::one(TRACE_ORDER);
    cm_trace(&one, -n).unwrap().value
}

#[test]
fn class_counts_match_the_oracle() {
    for n in 3..=200 {
        if !matches!(n % 4, 0 | 3) {
            assert!(reduced_forms(-n).is_err());
            continue;
        }
        let d = -n;
        let want = class_count_oracle(d);
        assert_eq!(reduced_forms(d).unwrap().len(), want, "D = {d}");
        assert_eq!(class_count_brute(d), want);
    }
    for (d, h) in [(-23, 3), (-47, 5), (-71, 7), (-163, 1), (-199, 9)] {
        assert_eq!(reduced_forms(d).unwrap().len(), h);
    }
}

#[test]
fn kronecker_hurwitz_relation() {
    // sum_t H(4n - t^2) = 2 sigma(n) - sum_{d | n} min(d, n/d), H(0) = -1/12
    for n in 1..=30i64 {
        let mut s = 0.0;
        let mut t = 0i64;
        while t * t <= 4 * n {
            let h = if t * t == 4 * n { -1.0 / 12.0 } else { hurwitz(4 * n - t * t) };
            s += if t == 0 { h } else { 2.0 * h };
            t += 1;
        }
        let m: i64 = (1..=n).filter(|d| n % d == 0).map(|d| d.min(n / d)).sum();
        let want = (2 * sigma1(n) - m) as f64;
        assert!((s - want).abs() < 1e-12, "n = {n}: {s} vs {want}");
    }
}

/// theta_1(tau) E4(4 tau) / eta(4 tau)^6 with theta_1 = sum (-1)^n q^{n^2}.
fn g1_oracle(n_max: usize) -> Vec<i128> {
    let len = n_max + 2;
    // index i is the exponent i - 1
    let mut theta = vec![0i128; len + 1];
    let mut k = 0i64;
    while (k * k) as usize <= len {
        let s = if k % 2 == 0 { 1 } else { -1 };
        theta[(k * k) as usize] += if k == 0 { 1 } else { 2 * s };
        k += 1;
    }
    let mut e4 = vec![0i128; len + 1];
    e4[0] = 1;
    for m in 1..=len / 4 {
        let s3: i128 = (1..=m as i128).filter(|d| m as i128 % d == 0).map(|d| d * d * d).sum();
        e4[4 * m] = 240 * s3;
    }
    // 1 / prod (1 - q^{4n})^6
    let mut inv = vec![0i128; len + 1];
    inv[0] = 1;
    for n in (4..=len).step_by(4) {
        for _ in 0..6 {
            for i in n..=len {
                inv[i] += inv[i - n];
            }
        }
    }
    let mul = |a: &[i128], b: &[i128]| {
        let mut c = vec![0i128; len + 1];
        for i in 0..=len {
            for j in 0..=len - i {
                c[i + j] += a[i] * b[j];
            }
        }
        c
    };
    mul(&mul(&theta, &e4), &inv)
}

#[test]
fn g1_matches_the_theta_quotient() {
    let n_max = 40;
    let want = g1_oracle(n_max as usize);
    let got = g1_coefficients(n_max).unwrap();
    for n in -1..=n_max {
        assert_eq!(got[&n], BigInt::from(want[(n + 1) as usize]), "B({n})");
    }
    assert_eq!(got[&3], BigInt::from(248));
    assert_eq!(got[&4], BigInt::from(-492));
}

#[test]
fn g1_stable_under_extra_precision() {
    assert_eq!(g1_coefficients(40).unwrap(), g1_coefficients_with(40, 96).unwrap());
}

#[test]
fn traces_are_integral() {
    let j = hauptmodul(TRACE_ORDER);
    for n in (3..=40).filter(|n| matches!(n % 4, 0 | 3)) {
        let (t, e) = cm_trace_mp(&j, -n, 256).unwrap();
        let x = t.to_f64();
        assert!(integrality_residual(x) < 1e-6 * x.abs().max(1.0), "D = -{n}: {x}");
        assert!(e < 1e-6);
    }
}

#[test]
fn precision_independence() {
    let f = faber_basis(2, TRACE_ORDER).unwrap();
    for d in [-7, -20, -23, -39] {
        let a = cm_trace_prec(&f, d, 128).unwrap().value;
        let b = cm_trace_prec(&f, d, 320).unwrap().value;
        assert!((a - b).abs() <= 1e-12 * a.abs().max(1.0), "D = {d}");
    }
}

fn pell_oracle(d: i64) -> f64 {
    let mut u = 1i64;
    loop {
        let t2 = d * u * u + 4;
        let t = (t2 as f64).sqrt().round() as i64;
        if t * t == t2 {
            return ((t as f64) + (u as f64) * (d as f64).sqrt()) / 2.0;
        }
        u += 1;
    }
}

#[test]
fn cycle_trace_of_one_is_the_geodesic_length() {
    let one = QSeries::one(TRACE_ORDER);
    for d in [5, 8, 12, 13, 17, 21, 24, 28] {
        let h = indefinite_classes(d).unwrap().len() as f64;
        let eps = pell_oracle(d);
        let want = h * eps.ln() / (PI * (d as f64).sqrt());
        let got = cycle_trace(&one, d).unwrap();
        assert!((got.value - want).abs() < 1e-11, "d = {d}: {} vs {want}", got.value);
    }
}

#[test]
fn cycle_integrals_do_not_depend_on_the_start() {
    let f1 = faber_basis(1, TRACE_ORDER).unwrap();
    let inv = Invariant::new(&f1).unwrap();
    for d in [5, 13, 21] {
        for q in indefinite_classes(d).unwrap() {
            let (a, _) = cycle_integral(&inv, &q, PI / 2.0, 1e-12).unwrap();
            let (b, _) = cycle_integral(&inv, &q, 1.1, 1e-12).unwrap();
            assert!((a - b).norm() < 1e-9, "{q:?}");
        }
    }
}

#[test]
fn cycle_traces_are_linear() {
    let f1 = faber_basis(1, TRACE_ORDER).unwrap();
    let j = hauptmodul(TRACE_ORDER);
    let one = QSeries::one(TRACE_ORDER);
    for d in [5, 8, 13] {
        let a = cycle_trace(&f1, d).unwrap().value;
        let b = cycle_trace(&j, d).unwrap().value + 24.0 * cycle_trace(&one, d).unwrap().value;
        assert!((a - b).abs() < 1e-9);
    }
}

#[test]
fn class_numbers_of_real_quadratic_discriminants() {
    // narrow class numbers
    for (d, h) in [(5, 1), (8, 1), (12, 2), (60, 4), (136, 4), (145, 4)] {
        assert_eq!(indefinite_classes(d).unwrap().len(), h, "d = {d}");
    }
}

#[test]
fn invalid_discriminants() {
    let f1 = faber_basis(1, TRACE_ORDER).unwrap();
    assert!(cycle_trace(&f1, 9).is_err());
    assert!(cycle_trace(&f1, 7).is_err());
    assert!(cm_trace(&f1, -5).is_err());
    assert!(cm_trace(&regpet::qseries::e4(10), -3).is_err());
}
