use num_complex::Complex64;
use proptest::prelude::*;
use regpet::cmtraces::hauptmodul;
use regpet::lseries::*;
use regpet::qseries::{delta, e4, faber_basis, wh_basis, QSeries};
use rug::ops::Pow;
use rug::Float;
use std::f64::consts::PI;

fn delta_at(t: f64) -> f64 {
    let q = (-2.0 * PI * t).exp();
    let mut p = q;
    let mut qn = q;
    while qn > 1e-300 {
        p *= (1.0 - qn).powi(24);
        qn *= q;
    }
    p
}

/// int_0^inf Delta(it) t^{s-1} dt folded onto [1, inf) by Simpson's rule.
fn delta_mellin(s: f64) -> f64 {
    let (a, b, n) = (1.0, 14.0, 20_000);
    let h = (b - a) / n as f64;
    let f = |t: f64| delta_at(t) * (t.powf(s - 1.0) + t.powf(11.0 - s));
    let mut acc = f(a) + f(b);
    for i in 1..n {
        acc += if i % 2 == 1 { 4.0 } else { 2.0 } * f(a + i as f64 * h);
    }
    acc * h / 3.0
}

fn ik(k: i64) -> Complex64 {
    Complex64::new(0.0, 1.0).powi(k as i32)
}

#[test]
fn cusp_form_l_value_is_the_mellin_transform() {
    let d = delta(40);
    for s in [3.0, 5.5, 6.0, 8.5] {
        let v = lstar(&d, s, 1.0, ConstantTerm::Full).unwrap();
        let want = delta_mellin(s);
        assert!((v.re - want).abs() < 1e-12 * want.abs(), "s = {s}: {} vs {want}", v.re);
        assert!(v.im.abs() < 1e-15 * want.abs());
    }
}

#[test]
fn eisenstein_l_value_is_a_zeta_product() {
    // L*_{E4}(s) = 240 (2 pi)^{-s} Gamma(s) zeta(s) zeta(s - 3)
    let g = e4(40);
    for s in [2.5, 5.0, 6.5] {
        let v = lstar(&g, s, 1.0, ConstantTerm::Full).unwrap();
        let p = 200;
        let sf = Float::with_val(p, s);
        let z = Float::with_val(p, sf.zeta_ref()) * Float::with_val(p, (sf.clone() - 3u32).zeta_ref());
        let want = (Float::with_val(p, sf.gamma_ref()) * z * 240u32 / Float::with_val(p, 2.0 * PI).pow(&sf)).to_f64();
        assert!((v.re - want).abs() < 1e-12 * want.abs(), "s = {s}: {} vs {want}", v.re);
    }
}

#[test]
fn functional_equation() {
    let forms: Vec<QSeries> = vec![delta(40), e4(40), faber_basis(1, 48).unwrap(), wh_basis(-2, 1, 48).unwrap(), wh_basis(-4, 1, 48).unwrap()];
    for g in &forms {
        let k = g.weight2() / 2;
        for s2 in [-3i64, -1, 1, 3, 5] {
            let s = s2 as f64 / 2.0;
            let a = lstar(g, k as f64 - s, 1.3, ConstantTerm::Full).unwrap().value();
            let b = lstar(g, s, 0.8, ConstantTerm::Full).unwrap().value() * ik(k);
            assert!((a - b).norm() < 1e-11 * b.norm().max(1.0), "k = {k}, s = {s}: {a} vs {b}");
        }
    }
}

#[test]
fn poles_and_bad_parameters() {
    let f1 = faber_basis(1, 48).unwrap();
    assert!(lstar(&f1, 0.0, 1.0, ConstantTerm::Full).is_err());
    assert!(lstar(&f1, 0.0, 1.0, ConstantTerm::Dropped).is_ok());
    assert!(lstar(&f1, 0.3, 1.0, ConstantTerm::Full).is_err());
    assert!(lstar(&f1, 1.0, -1.0, ConstantTerm::Full).is_err());
    let short = faber_basis(1, 4).unwrap();
    assert!(lstar(&short, 1.0, 1.0, ConstantTerm::Full).is_err());
}

#[test]
fn horocycle_is_stable_under_refinement() {
    let j = hauptmodul(60);
    let a = horocycle_with(&j, 16, 24).unwrap();
    let b = horocycle_with(&j, 24, 32).unwrap();
    assert!((a.scalar - b.scalar).abs() < 1e-12 * a.scalar.abs());
    assert!((a.vector - a.scalar * 2.0 / 3.0).abs() < 1e-14 * a.scalar.abs());
}

#[test]
fn taylor_identity_for_weights_minus_two_and_minus_four() {
    for (k, m) in [(-2, 1), (-4, 1), (-2, 2), (-4, 2)] {
        let f = wh_basis(k, m, 70).unwrap();
        for n in 0..=1 {
            let t = taylor_check(&f, n, 0.02, GkSettings::default()).unwrap();
            assert!(t.dev < 1e-6, "k = {k}, m = {m}, n = {n}: {}", t.dev);
        }
    }
}

#[test]
fn gk_needs_negative_weight() {
    assert!(GkEvaluator::new(&e4(20), GkSettings::default()).is_err());
    assert!(GkEvaluator::new(&wh_basis(-2, 1, 40).unwrap(), GkSettings::default()).is_ok());
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn independent_of_the_split_point(which in 0usize..3, s2 in -5i64..6, t0 in 0.6f64..1.7) {
        let g = match which {
            0 => faber_basis(1, 48).unwrap(),
            1 => wh_basis(-2, 1, 48).unwrap(),
            _ => faber_basis(2, 48).unwrap(),
        };
        let s = s2 as f64 / 2.0;
        prop_assume!(s2 != 0 && s2 != g.weight2());
        let a = lstar(&g, s, 1.0, ConstantTerm::Full).unwrap().value();
        let b = lstar(&g, s, t0, ConstantTerm::Full).unwrap().value();
        prop_assert!((a - b).norm() < 1e-11 * a.norm().max(1.0), "{} vs {}", a, b);
    }
}
