use num_bigint::BigInt;
use num_complex::Complex64;
use num_traits::Zero;
use proptest::prelude::*;
use regpet::qseries::*;

const N: i64 = 30;

/// Coefficients of q prod (1 - q^n)^24 below q^order, in plain integers.
fn tau_oracle(order: usize) -> Vec<i128> {
    let mut p = vec![0i128; order];
    p[0] = 1;
    for n in 1..order {
        for _ in 0..24 {
            for i in (n..order).rev() {
                p[i] -= p[i - n];
            }
        }
    }
    let mut t = vec![0i128; order];
    t[1..order].copy_from_slice(&p[..order - 1]);
    t
}

fn int(x: &Q) -> BigInt {
    assert!(x.is_integer(), "{x} not integral");
    x.to_integer()
}

#[test]
fn delta_is_the_eta_product() {
    let d = delta(N);
    let t = tau_oracle(N as usize);
    for n in 0..N {
        assert_eq!(int(&d.c(n)), BigInt::from(t[n as usize]), "tau({n})");
    }
    assert_eq!(d.c(11), q_int(534612));
}

#[test]
fn eisenstein_identity() {
    let lhs = e4(N).pow(3).unwrap().sub(&e6(N).pow(2).unwrap()).unwrap();
    let rhs = delta(N).scale(&q_int(1728));
    for n in 0..N {
        assert_eq!(lhs.c(n), rhs.c(n));
    }
}

#[test]
fn j_times_delta() {
    let j = j_invariant(N);
    let p = j.mul(&delta(N)).unwrap();
    let e = e4(N).pow(3).unwrap();
    assert!(p.order() >= N - 1);
    for n in 0..p.order() {
        assert_eq!(p.c(n), e.c(n), "q^{n}");
    }
    assert_eq!(j.c(-1), q_int(1));
    assert_eq!(j.c(0), q_int(744));
    assert_eq!(j.c(1), q_int(196884));
    assert_eq!(j.c(2), q_int(21493760));
    assert_eq!(j.c(3), q_int(864299970));
}

#[test]
fn faber_heads_and_duality() {
    let order = 8;
    let f: Vec<QSeries> = (1..=5).map(|m| faber_basis(m, order).unwrap()).collect();
    for (i, fm) in f.iter().enumerate() {
        let m = i as i64 + 1;
        assert_eq!(fm.c(-m), q_int(1));
        for r in 1..m {
            assert!(fm.c(-r).is_zero());
        }
        assert_eq!(fm.c(0), Q::from_integer(sigma(1, m as u64) * 24u32));
    }
    // n c_m(n) = m c_n(m)
    for m in 1..=5i64 {
        for n in 1..=5i64 {
            let a = f[m as usize - 1].c(n) * q_int(n);
            let b = f[n as usize - 1].c(m) * q_int(m);
            assert_eq!(a, b, "({m},{n})");
        }
    }
    assert_eq!(f[1].c(1), q_int(42987520));
}

#[test]
fn wh_basis_gap_and_duality() {
    for &k in &[-10i64, -4, -2, 0, 4, 12, 14] {
        let l = gap_index(k);
        for m in (-l).max(1)..=3 {
            let f = wh_basis(k, m, 12).unwrap();
            assert_eq!(f.c(-m), q_int(1));
            for n in -m + 1..=l {
                assert!(f.c(n).is_zero(), "k={k} m={m} n={n}");
            }
            assert_eq!(f.weight2(), 2 * k);
            // coefficient of q^n in f_{k,m} is minus that of q^m in f_{2-k,n}
            for n in (l + 1).max(1)..=4 {
                let Ok(g) = wh_basis(2 - k, n, 12) else { continue };
                assert_eq!(f.c(n), -g.c(m), "k={k} m={m} n={n}");
            }
        }
    }
    assert!(wh_basis(-10, 1, 10).is_err());
    assert!(wh_basis(3, 1, 10).is_err());
}

#[test]
fn modular_transformation_of_evaluations() {
    let tau = Complex64::new(0.12, 1.1);
    let s = -tau.inv();
    for (f, k) in [(e4(60), 4), (e6(60), 6), (delta(60), 12)] {
        let a = f.eval(s);
        let b = f.eval(tau) * tau.powi(k);
        assert!((a - b).norm() < 1e-11 * b.norm(), "weight {k}");
    }
    let j = j_invariant(60);
    assert!((j.eval(s) - j.eval(tau)).norm() < 1e-9 * j.eval(tau).norm());
    let i = Complex64::new(0.0, 1.0);
    assert!((j.eval(i).re - 1728.0).abs() < 1e-9);
}

#[test]
fn labels() {
    assert_eq!(FormLabel::parse("f3").unwrap(), FormLabel::Faber(3));
    assert_eq!(FormLabel::parse("wh:-2,1").unwrap(), FormLabel::WhBasis { k: -2, m: 1 });
    assert_eq!(FormLabel::parse("E4").unwrap(), FormLabel::E4);
    assert!(FormLabel::parse("nonsense").is_err());
    assert!(classical_form(&FormLabel::E4, 0).is_err());
    assert!(faber_basis(0, 5).is_err());
}

#[test]
fn json_roundtrip_preserves_everything() {
    let f = wh_basis(-2, 2, 10).unwrap();
    let g = QSeries::from_json(&f.to_json()).unwrap();
    assert_eq!(f, g);
}

fn small_series() -> impl Strategy<Value = QSeries> {
    (-3i64..2, prop::collection::vec(-50i64..50, 1..8)).prop_map(|(lead, cs)| {
        let terms: Vec<(i64, i64)> = cs.iter().enumerate().map(|(i, &c)| (lead + i as i64, c)).collect();
        QSeries::from_ints(1, &terms, 12, 0).unwrap()
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn product_is_bilinear(a in small_series(), b in small_series(), c in small_series(), x in -9i64..9) {
        let l = a.add(&b.scale(&q_int(x))).unwrap().mul(&c).unwrap();
        let r = a.mul(&c).unwrap().add(&b.mul(&c).unwrap().scale(&q_int(x))).unwrap();
        let top = l.order().min(r.order());
        for n in -6..top {
            prop_assert_eq!(l.c(n), r.c(n));
        }
    }

    #[test]
    fn product_commutes(a in small_series(), b in small_series()) {
        let l = a.mul(&b).unwrap();
        let r = b.mul(&a).unwrap();
        prop_assert_eq!(l.order(), r.order());
        for n in -6..l.order() {
            prop_assert_eq!(l.c(n), r.c(n));
        }
    }

    #[test]
    fn pairing_is_bilinear(a in small_series(), b in small_series(), c in small_series(), x in -9i64..9) {
        let l = pairing(&a.add(&b.scale(&q_int(x))).unwrap(), &c).unwrap();
        let r = pairing(&a, &c).unwrap() + pairing(&b, &c).unwrap() * q_int(x);
        prop_assert_eq!(l, r);
    }
}
