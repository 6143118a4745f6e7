use num_complex::Complex64;
use regpet::qseries::{delta, e4, faber_basis, q_int, wh_basis, QSeries};
use regpet::regprod::*;
use std::f64::consts::PI;

fn settings() -> RouteBSettings {
    RouteBSettings::default()
}

/// q prod (1 - q^n)^24 evaluated directly.
fn delta_product(tau: Complex64) -> Complex64 {
    let q = (Complex64::new(0.0, 2.0 * PI) * tau).exp();
    let mut p = q;
    let mut qn = q;
    for _ in 1..200 {
        p *= (Complex64::new(1.0, 0.0) - qn).powi(24);
        qn *= q;
        if qn.norm() < 1e-300 {
            break;
        }
    }
    p
}

/// int over the fundamental domain of |Delta|^2 v^10 du dv by tensor Gauss-Legendre.
fn petersson_delta_oracle() -> f64 {
    // 20-point rule from the Golub-Welsch recurrence, refined by Newton
    let n = 20;
    let mut x = vec![0.0; n];
    let mut w = vec![0.0; n];
    for i in 0..n {
        let mut z = (PI * (i as f64 + 0.75) / (n as f64 + 0.5)).cos();
        for _ in 0..100 {
            let (mut p0, mut p1) = (1.0, z);
            for k in 2..=n {
                let p2 = ((2 * k - 1) as f64 * z * p1 - (k - 1) as f64 * p0) / k as f64;
                p0 = p1;
                p1 = p2;
            }
            let dp = n as f64 * (z * p1 - p0) / (z * z - 1.0);
            let dz = p1 / dp;
            z -= dz;
            if dz.abs() < 1e-16 {
                let (mut p0, mut p1) = (1.0, z);
                for k in 2..=n {
                    let p2 = ((2 * k - 1) as f64 * z * p1 - (k - 1) as f64 * p0) / k as f64;
                    p0 = p1;
                    p1 = p2;
                }
                let dp = n as f64 * (z * p1 - p0) / (z * z - 1.0);
                w[i] = 2.0 / ((1.0 - z * z) * dp * dp);
                break;
            }
        }
        x[i] = z;
    }
    let rule = |a: f64, b: f64, f: &mut dyn FnMut(f64) -> f64| {
        let (h, m) = ((b - a) / 2.0, (a + b) / 2.0);
        (0..n).map(|i| w[i] * f(m + h * x[i])).sum::<f64>() * h
    };
    let top = 8.0;
    let mut total = 0.0;
    let u_panels = 16;
    for pu in 0..u_panels {
        let (ua, ub) = (-0.5 + pu as f64 / u_panels as f64, -0.5 + (pu + 1) as f64 / u_panels as f64);
        total += rule(ua, ub, &mut |u| {
            let lo = (1.0 - u * u).sqrt();
            let mut s = 0.0;
            let mut a = lo;
            while a < top {
                let b = (a + 0.25).min(top);
                s += rule(a, b, &mut |v| delta_product(Complex64::new(u, v)).norm_sqr() * v.powi(10));
                a = b;
            }
            s
        });
    }
    total
}

#[test]
fn delta_norm_against_direct_quadrature() {
    let d = delta(40);
    let r = product_route_b_scalar(&d, &d, &settings()).unwrap();
    let want = petersson_delta_oracle();
    assert!((r.value.re - want).abs() / want < 1e-9, "{} vs {want}", r.value.re);
    assert!((want - 1.035_362_056_804_32e-6).abs() / want < 1e-9);
    assert!(r.value.im.abs() < 1e-20);
}

#[test]
fn faber_products() {
    let f1 = faber_basis(1, 60).unwrap();
    let f2 = faber_basis(2, 60).unwrap();
    let a = product_route_b_scalar(&f1, &f1, &settings()).unwrap().value;
    let b = product_route_b_scalar(&f1, &f2, &settings()).unwrap().value;
    let c = product_route_b_scalar(&f2, &f1, &settings()).unwrap().value;
    assert!((a.re - 205.499979035041).abs() < 1e-8);
    assert!((b.re - 366.764637602028).abs() < 1e-8);
    // hermitian and real
    assert!((b - c.conj()).norm() < 1e-9);
    assert!(a.im.abs() < 1e-12 * a.norm() && b.im.abs() < 1e-12 * b.norm(), "{a} {b}");
}

#[test]
fn sesquilinear_in_rational_scalars() {
    let f1 = faber_basis(1, 60).unwrap();
    let f2 = faber_basis(2, 60).unwrap();
    let h = f1.add(&f2.scale(&q_int(3))).unwrap();
    let lhs = product_route_b_scalar(&h, &f1, &settings()).unwrap().value;
    let rhs = product_route_b_scalar(&f1, &f1, &settings()).unwrap().value
        + product_route_b_scalar(&f2, &f1, &settings()).unwrap().value * 3.0;
    assert!((lhs - rhs).norm() < 1e-8 * rhs.norm());
    let rl = product_route_b_scalar(&f1, &h, &settings()).unwrap().value;
    assert!((rl - lhs.conj()).norm() < 1e-8 * rhs.norm());
}

#[test]
fn constant_function() {
    // <1, 1> is the volume pi/3 of the fundamental domain
    let one = QSeries::one(10);
    let r = product_route_b_scalar(&one, &one, &settings()).unwrap();
    assert!((r.value.re - PI / 3.0).abs() < 1e-10, "{}", r.value.re);
}

#[test]
fn negative_weight_products_are_real() {
    let f = wh_basis(-2, 1, 60).unwrap();
    let g = wh_basis(-2, 2, 60).unwrap();
    let a = product_route_b_scalar(&f, &g, &settings()).unwrap().value;
    let b = product_route_b_scalar(&g, &f, &settings()).unwrap().value;
    assert!(a.im.abs() < 1e-9 * a.norm().max(1.0));
    assert!((a - b.conj()).norm() < 1e-8 * a.norm().max(1.0));
}

#[test]
fn branch_values_do_not_depend_on_the_ray() {
    let f1 = faber_basis(1, 60).unwrap();
    let base = product_route_b_scalar(&f1, &f1, &settings()).unwrap().value;
    for phi in [0.6 * PI, 0.9 * PI, 1.2 * PI, 1.45 * PI] {
        let v = branch_value(&f1, &f1, phi, &settings()).unwrap();
        assert!((v - base).norm() < 1e-8 * base.norm(), "phi = {phi}: {v}");
    }
    assert!(branch_value(&f1, &f1, PI, &settings()).is_err());
}

#[test]
fn pairing_route_picks_matching_coefficients() {
    // {f_1, G} = c_f(-1) c_G^+(1) for G^+ = -2 q
    let f1 = faber_basis(1, 60).unwrap();
    let mut gp = HarmonicPlus::new();
    gp.insert((0, q_int(1)), Complex64::new(-2.0, 0.0));
    let v = product_route_c(&as_vector(&f1), &gp).unwrap();
    assert!((v.re + 2.0).abs() < 1e-15);
    // a principal part that f does not cover is a coverage error
    let mut bad = HarmonicPlus::new();
    bad.insert((0, q_int(-70)), Complex64::new(1.0, 0.0));
    assert!(product_route_c(&as_vector(&f1), &bad).is_err());
}

#[test]
fn weight_mismatch_rejected() {
    let f1 = faber_basis(1, 30).unwrap();
    assert!(product_route_b_scalar(&f1, &e4(30), &settings()).is_err());
}

#[test]
fn report_pairwise_deviation() {
    let mut r = ProductReport::new(Complex64::new(1.0, 0.0));
    r.add_route("a", Complex64::new(1.0, 0.0), 0.0);
    r.add_route("b", Complex64::new(1.001, 0.0), 0.0);
    assert!((r.max_pairwise_dev() - 0.001 / 1.001).abs() < 1e-6);
}

#[test]
fn weight_one_constant_terms_drop_out() {
    // for k = 1 only the truncated-domain integral of v^{-1} survives
    let one = QSeries::one(10).with_weight2(2);
    let r = product_route_b_scalar(&one, &one, &settings()).unwrap();
    let want = 1.0 - 1.5 * 1.5f64.ln() - 0.5 * 2f64.ln();
    assert!((r.value.re - want).abs() < 1e-10, "{} vs {want}", r.value.re);
    assert_eq!(r.mode_terms, Complex64::new(0.0, 0.0));
}
