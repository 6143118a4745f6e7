use num_complex::Complex64;
use proptest::prelude::*;
use regpet::cmtraces::g1_vector;
use regpet::qseries::QSeries;
use regpet::weil::*;

fn modules() -> Vec<FiniteQuadraticModule> {
    let f = |v: &[(i64, i64, i64)]| {
        FiniteQuadraticModule::new(&v.iter().map(|&(n, p, q)| (n, R64::new(p, q))).collect::<Vec<_>>()).unwrap()
    };
    vec![
        FiniteQuadraticModule::z2_quarter(),
        f(&[(2, -1, 4)]),
        f(&[(3, 1, 3)]),
        f(&[(2, 1, 4), (5, 2, 5)]),
        f(&[(4, 1, 8)]),
        f(&[(2, 1, 4), (2, 1, 4)]),
        f(&[(2, 1, 4), (2, -1, 4)]),
        FiniteQuadraticModule::trivial(),
    ]
}

/// e_a -> e_{-a}.
fn negation(m: &FiniteQuadraticModule) -> Matrix {
    let n = m.size();
    let mut p = vec![vec![Complex64::new(0.0, 0.0); n]; n];
    for a in 0..n {
        p[m.neg(a)][a] = Complex64::new(1.0, 0.0);
    }
    p
}

fn check_relations(m: &FiniteQuadraticModule) {
    for dual in [false, true] {
        let (t, s) = rho_matrices(m, dual);
        let id = identity(m.size());
        assert!(max_dev(&mat_mul(&adjoint(&t), &t), &id) < 1e-13);
        assert!(max_dev(&mat_mul(&adjoint(&s), &s), &id) < 1e-13);
        let s2 = mat_mul(&s, &s);
        let st = mat_mul(&s, &t);
        assert!(max_dev(&mat_mul(&mat_mul(&st, &st), &st), &s2) < 1e-12, "(ST)^3 = S^2");
        // S^2 = e(-sig/4) times the negation, conjugated for the dual
        let sig = m.signature() as f64 * if dual { -1.0 } else { 1.0 };
        let s4: Matrix = id.iter().map(|r| r.iter().map(|v| v * e(-sig / 2.0)).collect()).collect();
        assert!(max_dev(&mat_pow(&s, 4), &s4) < 1e-12);
        let z = e(-sig / 4.0);
        let want: Matrix = negation(m).iter().map(|r| r.iter().map(|v| v * z).collect()).collect();
        assert!(max_dev(&s2, &want) < 1e-12);
        assert_eq!(t_order(m, dual), m.level());
    }
}

#[test]
fn weil_relations_on_sample_modules() {
    for m in modules() {
        check_relations(&m);
    }
}

#[test]
fn milgram() {
    for m in modules() {
        let g = m.gauss_sum();
        let want = e(m.signature() as f64 / 8.0);
        assert!((g - want).norm() < 1e-13);
    }
}

#[test]
fn level_is_the_denominator_of_q() {
    let m = FiniteQuadraticModule::new(&[(2, R64::new(1, 4)), (3, R64::new(1, 3))]).unwrap();
    assert_eq!(m.level(), 12);
    assert_eq!(m.size(), 6);
}

#[test]
fn from_factors_parses() {
    let m = FiniteQuadraticModule::from_factors(&[CyclicFactor { order: 2, q: "1/4".into() }]).unwrap();
    assert_eq!(m, FiniteQuadraticModule::z2_quarter());
    assert!(FiniteQuadraticModule::from_factors(&[CyclicFactor { order: 2, q: "x".into() }]).is_err());
}

#[test]
fn support_law_of_g1() {
    let g = g1_vector(40).unwrap();
    for (a, c) in g.components.iter().enumerate() {
        let q = g.module.q(a);
        for (n, _) in c.terms() {
            let x = R64::new(n, 4) + q;
            assert!(x.is_integer(), "component {a} exponent {n}/4");
        }
    }
}

#[test]
fn support_violation_rejected() {
    let m = FiniteQuadraticModule::z2_quarter();
    let bad = vec![QSeries::from_ints(4, &[(1, 1)], 8, 3).unwrap(), QSeries::zero(4, 8, 3)];
    assert!(VectorForm::new(m.clone(), bad, 3, false).is_err());
    let short = vec![QSeries::zero(4, 8, 3)];
    assert!(VectorForm::new(m, short, 3, false).is_err());
}

#[test]
fn vectorize_inverts_scalarize() {
    let g = QSeries::from_ints(1, &[(-1, 1), (0, -2), (3, 248), (4, -492), (7, 4119)], 8, 3).unwrap();
    let v = vectorize_plus(&g, true).unwrap();
    let back = scalarize(&v).unwrap();
    for n in -1..8 {
        assert_eq!(back.c(n), g.c(n));
    }
    assert!(vectorize_plus(&QSeries::from_ints(1, &[(2, 1)], 8, 3).unwrap(), true).is_err());
}

fn cyclic() -> impl Strategy<Value = FiniteQuadraticModule> {
    (1i64..10, -20i64..20, prop::sample::select(vec![1i64, 2, 4, 8, 16, 3, 6, 12, 5, 10, 7, 9])).prop_filter_map(
        "degenerate",
        |(n, p, q)| FiniteQuadraticModule::new(&[(n, R64::new(p, q))]).ok(),
    )
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(40))]

    #[test]
    fn random_cyclic_modules_satisfy_the_relations(a in cyclic(), b in cyclic()) {
        check_relations(&a);
        let mut fs = Vec::new();
        for m in [&a, &b] {
            for i in 0..m.size() {
                if m.elements()[i].iter().sum::<i64>() == 1 {
                    fs.push((m.size() as i64, m.q(i)));
                }
            }
        }
        if let Ok(sum) = FiniteQuadraticModule::new(&fs) {
            prop_assert_eq!(sum.signature(), (a.signature() + b.signature()) % 8);
            check_relations(&sum);
        }
    }
}
