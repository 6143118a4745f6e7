//! Binary quadratic forms, traces of singular moduli over CM points,
//! cycle integrals over closed geodesics, and the weight-3/2 form g_1.

use crate::error::{Error, Result};
use crate::mp::{MpC, STANDARD_PREC};
use crate::qseries::{faber_basis, j_invariant, q_int, q_to_f64, Evaluator, MpEvaluator, QSeries, Q};
use crate::quad;
use crate::sl2::{reduce, Sl2};
use crate::weil::{vectorize_plus, VectorForm};
use num_bigint::BigInt;
use num_complex::Complex64;
use num_integer::Roots;
use num_traits::{ToPrimitive, Zero};
use rug::Float;
use serde::{Deserialize, Serialize};
use std::collections::BTreeMap;
use std::f64::consts::PI;

/// Series order used for weight-0 functions evaluated at reduced points.
pub const TRACE_ORDER: i64 = 48;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct QuadForm {
    pub a: i64,
    pub b: i64,
    pub c: i64,
}

impl QuadForm {
    pub fn new(a: i64, b: i64, c: i64) -> Result<Self> {
        let q = QuadForm { a, b, c };
        if q.disc() == 0 {
            return Err(Error::Discriminant(0));
        }
        Ok(q)
    }

    pub fn disc(&self) -> i64 {
        self.b * self.b - 4 * self.a * self.c
    }

    pub fn content(&self) -> i64 {
        num_integer::gcd(num_integer::gcd(self.a, self.b), self.c)
    }

    /// |b| <= a <= c, with b >= 0 when |b| = a or a = c.
    pub fn is_reduced(&self) -> bool {
        let (a, b, c) = (self.a, self.b, self.c);
        self.disc() < 0 && a > 0 && b.abs() <= a && a <= c && !((b.abs() == a || a == c) && b < 0)
    }

    /// CM point (-b + i sqrt|D|)/(2a) for definite forms with a > 0.
    pub fn cm_point(&self) -> Complex64 {
        let d = (-self.disc()) as f64;
        Complex64::new(-self.b as f64, d.sqrt()) / (2.0 * self.a as f64)
    }

    pub fn cm_point_mp(&self, prec: u32) -> MpC {
        let d = Float::with_val(prec, -self.disc()).sqrt();
        MpC::new(Float::with_val(prec, -self.b), d).scale(&Float::with_val(prec, 2 * self.a).recip())
    }

    /// Order of the stabilizer of the CM point in PSL_2(Z).
    pub fn stabilizer_order(&self) -> i64 {
        if self.a == self.b && self.b == self.c {
            3
        } else if self.b == 0 && self.a == self.c {
            2
        } else {
            1
        }
    }

    /// Q o M, i.e. Q(a' x + b' y, c' x + d' y).
    pub fn transform(&self, m: &Sl2) -> QuadForm {
        let (a, b, c) = (self.a, self.b, self.c);
        QuadForm {
            a: a * m.a * m.a + b * m.a * m.c + c * m.c * m.c,
            b: 2 * a * m.a * m.b + b * (m.a * m.d + m.b * m.c) + 2 * c * m.c * m.d,
            c: a * m.b * m.b + b * m.b * m.d + c * m.d * m.d,
        }
    }

    pub fn eval(&self, tau: Complex64) -> Complex64 {
        tau * tau * self.a as f64 + tau * self.b as f64 + self.c as f64
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum TraceKind {
    Cm,
    Cycle,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct TraceValue {
    pub disc: i64,
    pub value: f64,
    pub kind: TraceKind,
    pub est_err: f64,
}

fn check_disc(d: i64) -> Result<()> {
    if d == 0 || !matches!(d.rem_euclid(4), 0 | 1) {
        return Err(Error::Discriminant(d));
    }
    Ok(())
}

/// One reduced form per class of discriminant D < 0 (imprimitive forms
/// included).
pub fn reduced_forms(d: i64) -> Result<Vec<QuadForm>> {
    check_disc(d)?;
    if d > 0 {
        return Err(Error::Discriminant(d));
    }
    let n = -d;
    let mut out = Vec::new();
    let mut a = 1;
    while 3 * a * a <= n {
        for b in -a + 1..=a {
            let num = b * b + n;
            if num % (4 * a) != 0 {
                continue;
            }
            let q = QuadForm { a, b, c: num / (4 * a) };
            if q.is_reduced() {
                out.push(q);
            }
        }
        a += 1;
    }
    Ok(out)
}

/// Number of classes by direct search over all forms with |b| <= a <= c.
pub fn class_count_brute(d: i64) -> usize {
    let n = -d;
    let mut count = 0;
    for a in 1..=n {
        for b in -a..=a {
            let num = b * b + n;
            if num % (4 * a) == 0 {
                let c = num / (4 * a);
                if (QuadForm { a, b, c }).is_reduced() {
                    count += 1;
                }
            }
        }
    }
    count
}

fn prec_for(d: i64) -> u32 {
    let v = ((-d) as f64).sqrt() / 2.0;
    STANDARD_PREC + (2.0 * PI * v * std::f64::consts::LOG2_E) as u32
}

/// sum_Q f(tau_Q)/w(Q) over reduced forms of discriminant D < 0, with f a
/// weight-0 series evaluated in MPFR at the reduced CM points.
pub fn cm_trace(f: &QSeries, d: i64) -> Result<TraceValue> {
    cm_trace_prec(f, d, prec_for(d))
}

pub fn cm_trace_prec(f: &QSeries, d: i64, prec: u32) -> Result<TraceValue> {
    let (v, err) = cm_trace_mp(f, d, prec)?;
    Ok(TraceValue { disc: d, value: v.to_f64(), kind: TraceKind::Cm, est_err: err })
}

/// The trace as an MPFR value with its error bound.
pub fn cm_trace_mp(f: &QSeries, d: i64, prec: u32) -> Result<(Float, f64)> {
    if f.weight2() != 0 || f.denom() != 1 {
        return Err(Error::Param("traces need a level-one weight-0 series".into()));
    }
    let forms = reduced_forms(d)?;
    let ev = MpEvaluator::new(f, prec);
    let qmax = (-PI * 3f64.sqrt()).exp();
    let last = f.terms().filter(|(n, _)| *n > 0).map(|(_, v)| q_to_f64(v).abs()).last().unwrap_or(0.0);
    let tail = 4.0 * last * qmax.powi(f.order() as i32);
    if tail > 1e-8 {
        return Err(Error::OrderTooSmall { have: f.order(), need: 2 * f.order() });
    }
    let mut total = Float::new(prec);
    let mut err = 0.0;
    for q in &forms {
        let v = ev.eval(&q.cm_point_mp(prec));
        let w = q.stabilizer_order() as u32;
        total += Float::with_val(prec, &v.re / w);
        err += tail + v.abs().to_f64() * 2f64.powi(-(prec as i32) + 16);
    }
    Ok((total, err))
}

/// J = j - 744.
pub fn hauptmodul(order: i64) -> QSeries {
    j_invariant(order).add_const(&q_int(-744)).expect("constant shift").with_label("J")
}

fn rounding(x: &Float, n: i64) -> Result<BigInt> {
    let r = Float::with_val(x.prec(), x.round_ref());
    let res = Float::with_val(x.prec(), x - &r).abs().to_f64();
    if res >= 1e-4 {
        return Err(Error::Rounding { n, residual: res });
    }
    let z = r.to_integer().ok_or_else(|| Error::Accuracy(format!("trace for n = {n} is not finite")))?;
    Ok(BigInt::parse_bytes(z.to_string().as_bytes(), 10).expect("decimal integer"))
}

/// Coefficients of g_1 = q^{-1} + sum B(n) q^n: B(n) = -tr_{-n}(J) on the
/// plus space, B(0) = -2, zero for n = 1, 2 mod 4.
pub fn g1_coefficients(n_max: i64) -> Result<BTreeMap<i64, BigInt>> {
    g1_coefficients_with(n_max, 0)
}

/// As `g1_coefficients`, with `extra_bits` added to the working precision.
pub fn g1_coefficients_with(n_max: i64, extra_bits: u32) -> Result<BTreeMap<i64, BigInt>> {
    if n_max < 0 {
        return Err(Error::Param("n_max must be nonnegative".into()));
    }
    let jser = hauptmodul(TRACE_ORDER);
    let mut out = BTreeMap::new();
    out.insert(-1, BigInt::from(1));
    out.insert(0, BigInt::from(-2));
    for n in 1..=n_max {
        let b = match n.rem_euclid(4) {
            0 | 3 => {
                let (t, _) = cm_trace_mp(&jser, -n, prec_for(-n) + extra_bits)?;
                -rounding(&t, n)?
            }
            _ => BigInt::zero(),
        };
        out.insert(n, b);
    }
    Ok(out)
}

/// g_1 as a scalar plus-space series with coefficients below `n_max + 1`.
pub fn g1_series(n_max: i64) -> Result<QSeries> {
    let c = g1_coefficients(n_max)?;
    let terms: Vec<(i64, Q)> = c.into_iter().filter(|(_, v)| !v.is_zero()).map(|(n, v)| (n, Q::from_integer(v))).collect();
    Ok(QSeries::from_terms(1, &terms, n_max + 1, 3)?.with_label("g1"))
}

/// The vector-valued form for the dual Weil representation of Z/2Z with
/// Q(x) = x^2/4 whose scalarization is g_1.
pub fn g1_vector(n_max: i64) -> Result<VectorForm> {
    vectorize_plus(&g1_series(n_max)?, true)
}

/// Fundamental solution (t, u) of t^2 - d u^2 = 4 with u > 0.
pub fn pell4(d: i64) -> Result<(i128, i128)> {
    let dd = d as i128;
    for u in 1..50_000_000i128 {
        let t2 = dd * u * u + 4;
        let t = t2.sqrt();
        if t * t == t2 {
            return Ok((t, u));
        }
    }
    Err(Error::Unsupported(format!("Pell solution for d = {d} beyond search range")))
}

fn is_square(d: i64) -> bool {
    d >= 0 && d.sqrt() * d.sqrt() == d
}

/// One representative per proper equivalence class of discriminant d > 0
/// (nonsquare), via the cycles of reduced indefinite forms.
pub fn indefinite_classes(d: i64) -> Result<Vec<QuadForm>> {
    check_disc(d)?;
    if d < 0 {
        return Err(Error::Discriminant(d));
    }
    if is_square(d) {
        return Err(Error::Unsupported(format!("square discriminant {d}")));
    }
    let s = d.sqrt();
    let reduced = |a: i64, b: i64| {
        let aa = 2 * a.abs();
        b > 0 && b <= s && d < (aa + b) * (aa + b) && (aa <= b || (aa - b) * (aa - b) < d)
    };
    let mut all = Vec::new();
    for b in 1..=s {
        if (b * b - d) % 4 != 0 {
            continue;
        }
        let ac = (b * b - d) / 4;
        for a in 1..=ac.abs() {
            if ac % a != 0 {
                continue;
            }
            for sa in [a, -a] {
                if reduced(sa, b) {
                    all.push(QuadForm { a: sa, b, c: ac / sa });
                }
            }
        }
    }
    let rho = |q: &QuadForm| {
        let m = 2 * q.c.abs();
        let bp = s - (s + q.b).rem_euclid(m);
        QuadForm { a: q.c, b: bp, c: (bp * bp - d) / (4 * q.c) }
    };
    let mut seen = std::collections::HashSet::new();
    let mut reps = Vec::new();
    for q in all {
        if seen.contains(&q) {
            continue;
        }
        reps.push(q);
        let mut p = q;
        loop {
            seen.insert(p);
            p = rho(&p);
            if p == q {
                break;
            }
        }
    }
    Ok(reps)
}

/// Generator of the automorph group of Q (up to sign).
pub fn automorph(q: &QuadForm) -> Result<Sl2> {
    let g = q.content();
    let (a, b, c) = (q.a / g, q.b / g, q.c / g);
    let (t, u) = pell4(q.disc() / (g * g))?;
    let conv = |x: i128| x.to_i64().ok_or_else(|| Error::Unsupported("automorph entries overflow".into()));
    Sl2::new(
        conv((t - b as i128 * u) / 2)?,
        conv(-(c as i128) * u)?,
        conv(a as i128 * u)?,
        conv((t + b as i128 * u) / 2)?,
    )
}

/// Evaluates a weight-0 level-one series anywhere in the half-plane by
/// reducing the point first.
pub struct Invariant {
    ev: Evaluator,
}

impl Invariant {
    pub fn new(f: &QSeries) -> Result<Self> {
        if f.weight2() != 0 || f.denom() != 1 {
            return Err(Error::Param("need a level-one weight-0 series".into()));
        }
        Ok(Invariant { ev: Evaluator::new(f) })
    }

    pub fn eval(&self, tau: Complex64) -> Result<Complex64> {
        let (z, _) = reduce(tau)?;
        Ok(self.ev.eval(z))
    }
}

/// (1/2 pi) int f(tau) d tau / Q(tau, 1) over one period of the geodesic
/// of Q, starting at the point with angle `theta0` on the semicircle.  The
/// orientation makes the integral of the constant 1 positive.
pub fn cycle_integral(f: &Invariant, q: &QuadForm, theta0: f64, tol: f64) -> Result<(Complex64, f64)> {
    let d = q.disc();
    if d <= 0 || is_square(d) {
        return Err(Error::Discriminant(d));
    }
    let sd = (d as f64).sqrt();
    let center = -(q.b as f64) / (2.0 * q.a as f64);
    let r = sd / (2.0 * q.a.abs() as f64);
    let m = automorph(q)?;
    let z0 = Complex64::new(center, 0.0) + Complex64::from_polar(r, theta0);
    let angle = |z: Complex64| (z - center).arg();
    let sgn = q.a.signum() as f64;
    let mut theta1 = angle(m.act(z0));
    if sgn * (theta1 - theta0) < 0.0 {
        theta1 = angle(m.inverse().act(z0));
    }
    let mut fail = None;
    let (v, err) = quad::adaptive(
        |th| {
            let tau = Complex64::new(center, 0.0) + Complex64::from_polar(r, th);
            match f.eval(tau) {
                Ok(x) => x / th.sin(),
                Err(e) => {
                    fail = Some(e);
                    Complex64::new(0.0, 0.0)
                }
            }
        },
        theta0,
        theta1,
        tol,
        20,
    )?;
    if let Some(e) = fail {
        return Err(e);
    }
    let s = sgn / (sd * 2.0 * PI);
    Ok((v * s, err * s.abs()))
}

/// Sum of cycle integrals over the classes of discriminant d > 0.
pub fn cycle_trace(f: &QSeries, d: i64) -> Result<TraceValue> {
    cycle_trace_tol(f, d, 1e-12)
}

pub fn cycle_trace_tol(f: &QSeries, d: i64, tol: f64) -> Result<TraceValue> {
    let inv = Invariant::new(f)?;
    let mut total = Complex64::new(0.0, 0.0);
    let mut err = 0.0;
    for q in indefinite_classes(d)? {
        let (v, e) = cycle_integral(&inv, &q, PI / 2.0, tol)?;
        total += v;
        err += e;
    }
    Ok(TraceValue { disc: d, value: total.re, kind: TraceKind::Cycle, est_err: err + total.im.abs() })
}

/// tr_d(f_1) for nonsquare d = 0, 1 mod 4 up to d_max.
pub fn g1_plus_coefficients(d_max: i64) -> Result<BTreeMap<i64, TraceValue>> {
    let f1 = faber_basis(1, TRACE_ORDER)?;
    let mut out = BTreeMap::new();
    for d in 2..=d_max {
        if matches!(d.rem_euclid(4), 0 | 1) && !is_square(d) {
            out.insert(d, cycle_trace(&f1, d)?);
        }
    }
    Ok(out)
}

/// disc,value,err rows.
pub fn to_csv(rows: &[TraceValue]) -> String {
    let mut s = String::from("disc,value,err\n");
    for r in rows {
        s.push_str(&format!("{},{:.17e},{:.3e}\n", r.disc, r.value, r.est_err));
    }
    s
}

/// Integer-valued check used by callers: distance of x to the nearest integer.
pub fn integrality_residual(x: f64) -> f64 {
    (x - x.round()).abs()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn small_class_sets() {
        assert_eq!(reduced_forms(-3).unwrap(), vec![QuadForm { a: 1, b: 1, c: 1 }]);
        assert_eq!(reduced_forms(-4).unwrap(), vec![QuadForm { a: 1, b: 0, c: 1 }]);
        assert_eq!(reduced_forms(-23).unwrap().len(), 3);
        assert!(reduced_forms(-5).is_err());
    }

    #[test]
    fn traces_of_j() {
        let j = hauptmodul(TRACE_ORDER);
        assert!((cm_trace(&j, -3).unwrap().value + 248.0).abs() < 1e-9);
        assert!((cm_trace(&j, -4).unwrap().value - 492.0).abs() < 1e-9);
        let one = QSeries::one(TRACE_ORDER);
        assert!((cm_trace(&one, -3).unwrap().value - 1.0 / 3.0).abs() < 1e-15);
    }

    #[test]
    fn automorph_fixes_form() {
        let q = QuadForm { a: 1, b: 1, c: -1 };
        let m = automorph(&q).unwrap();
        assert_eq!(q.transform(&m), q);
    }
}
