//! Exact Laurent q-expansions with rational coefficients.
//!
//! Exponents live on the grid (1/N)Z and are stored as integers n meaning
//! q^{n/N}.  A series knows its coefficients for all exponents below
//! `order`; arithmetic never claims more than its operands support.

use crate::error::{Error, Result};
use crate::mp::MpC;
use num_bigint::BigInt;
use num_complex::Complex64;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use rug::Float;
use serde::{Deserialize, Serialize};
use std::collections::BTreeMap;
use std::fmt;

pub type Q = BigRational;

/// Truncation order used when a caller has no reason to choose another.
pub const DEFAULT_ORDER: i64 = 64;

pub fn q_int(n: i64) -> Q {
    Q::from_integer(BigInt::from(n))
}

pub fn q_frac(a: i64, b: i64) -> Q {
    Q::new(BigInt::from(a), BigInt::from(b))
}

pub fn q_to_f64(x: &Q) -> f64 {
    x.to_f64().unwrap_or(f64::NAN)
}

/// Exact rational as an MPFR float.
pub fn q_to_float(x: &Q, prec: u32) -> Float {
    let num = Float::with_val(prec, Float::parse(x.numer().to_string()).expect("integer literal"));
    if x.denom().is_one() {
        return num;
    }
    let den = Float::with_val(prec, Float::parse(x.denom().to_string()).expect("integer literal"));
    num / den
}

/// Sum of r-th powers of the divisors of n.
pub fn sigma(r: u32, n: u64) -> BigInt {
    let mut s = BigInt::zero();
    let mut d = 1u64;
    while d * d <= n {
        if n % d == 0 {
            s += BigInt::from(d).pow(r);
            let e = n / d;
            if e != d {
                s += BigInt::from(e).pow(r);
            }
        }
        d += 1;
    }
    s
}

#[derive(Clone, Debug, PartialEq)]
pub struct QSeries {
    denom: u32,
    start: i64,
    c: Vec<Q>,
    order: i64,
    /// Twice the weight, so half-integral weights stay exact.
    weight2: i64,
    pub label: String,
}

impl QSeries {
    /// Series from explicit (exponent, coefficient) pairs known below `order`.
    pub fn from_terms(denom: u32, terms: &[(i64, Q)], order: i64, weight2: i64) -> Result<Self> {
        if denom == 0 {
            return Err(Error::Param("grid denominator must be positive".into()));
        }
        let start = terms.iter().map(|t| t.0).min().unwrap_or(order).min(order);
        let mut c = vec![Q::zero(); (order - start).max(0) as usize];
        for (n, v) in terms {
            if *n >= order {
                return Err(Error::OrderTooSmall { have: order, need: n + 1 });
            }
            c[(n - start) as usize] += v.clone();
        }
        let mut s = QSeries { denom, start, c, order, weight2, label: String::new() };
        s.normalize();
        Ok(s)
    }

    pub fn from_ints(denom: u32, terms: &[(i64, i64)], order: i64, weight2: i64) -> Result<Self> {
        let t: Vec<(i64, Q)> = terms.iter().map(|(n, v)| (*n, q_int(*v))).collect();
        QSeries::from_terms(denom, &t, order, weight2)
    }

    pub fn zero(denom: u32, order: i64, weight2: i64) -> Self {
        QSeries { denom, start: order, c: Vec::new(), order, weight2, label: String::new() }
    }

    pub fn one(order: i64) -> Self {
        QSeries::from_ints(1, &[(0, 1)], order, 0).expect("order must be positive")
    }

    /// q^{n/N} known below `order`.
    pub fn monomial(denom: u32, n: i64, order: i64, weight2: i64) -> Result<Self> {
        QSeries::from_ints(denom, &[(n, 1)], order, weight2)
    }

    fn normalize(&mut self) {
        let lead = self.c.iter().position(|x| !x.is_zero()).unwrap_or(self.c.len());
        if lead > 0 {
            self.c.drain(..lead);
            self.start += lead as i64;
        }
    }

    pub fn with_label(mut self, l: impl Into<String>) -> Self {
        self.label = l.into();
        self
    }

    pub fn with_weight2(mut self, w2: i64) -> Self {
        self.weight2 = w2;
        self
    }

    pub fn denom(&self) -> u32 {
        self.denom
    }

    pub fn order(&self) -> i64 {
        self.order
    }

    pub fn weight2(&self) -> i64 {
        self.weight2
    }

    pub fn weight(&self) -> f64 {
        self.weight2 as f64 / 2.0
    }

    pub fn is_zero(&self) -> bool {
        self.c.is_empty()
    }

    /// Smallest exponent with a nonzero coefficient, or `order` for zero.
    pub fn lead(&self) -> i64 {
        self.start
    }

    /// Coefficient at exponent n/N; None when n is beyond the known order.
    pub fn coeff(&self, n: i64) -> Option<Q> {
        if n >= self.order {
            return None;
        }
        if n < self.start {
            return Some(Q::zero());
        }
        Some(self.c[(n - self.start) as usize].clone())
    }

    /// Coefficient that must be known; panics past the order.
    pub fn c(&self, n: i64) -> Q {
        self.coeff(n).unwrap_or_else(|| panic!("coefficient {n} beyond order {}", self.order))
    }

    /// Nonzero coefficients in exponent order.
    pub fn terms(&self) -> impl Iterator<Item = (i64, &Q)> {
        let s = self.start;
        self.c.iter().enumerate().filter(|(_, v)| !v.is_zero()).map(move |(i, v)| (s + i as i64, v))
    }

    pub fn to_map(&self) -> BTreeMap<i64, Q> {
        self.terms().map(|(n, v)| (n, v.clone())).collect()
    }

    pub fn principal_part(&self) -> Vec<(i64, Q)> {
        self.terms().filter(|(n, _)| *n < 0).map(|(n, v)| (n, v.clone())).collect()
    }

    /// Highest pole order in grid units (0 if no principal part).
    pub fn pole_order(&self) -> i64 {
        (-self.start).max(0)
    }

    pub fn truncate(&self, order: i64) -> Self {
        let mut s = self.clone();
        if order < s.order {
            let keep = (order - s.start).max(0) as usize;
            s.c.truncate(keep);
            s.order = order;
            if s.start > order {
                s.start = order;
            }
            s.normalize();
        }
        s
    }

    fn check_grid(&self, o: &QSeries) -> Result<()> {
        if self.denom != o.denom {
            return Err(Error::GridMismatch(self.denom, o.denom));
        }
        Ok(())
    }

    fn add_impl(&self, o: &QSeries, sign: i64) -> Result<QSeries> {
        self.check_grid(o)?;
        let order = self.order.min(o.order);
        let start = self.start.min(o.start).min(order);
        let mut c = vec![Q::zero(); (order - start) as usize];
        for (n, v) in self.terms() {
            if n < order {
                c[(n - start) as usize] += v;
            }
        }
        for (n, v) in o.terms() {
            if n < order {
                if sign > 0 {
                    c[(n - start) as usize] += v;
                } else {
                    c[(n - start) as usize] -= v;
                }
            }
        }
        let mut s = QSeries { denom: self.denom, start, c, order, weight2: self.weight2, label: String::new() };
        s.normalize();
        Ok(s)
    }

    pub fn add(&self, o: &QSeries) -> Result<QSeries> {
        self.add_impl(o, 1)
    }

    pub fn sub(&self, o: &QSeries) -> Result<QSeries> {
        self.add_impl(o, -1)
    }

    pub fn scale(&self, x: &Q) -> QSeries {
        let mut s = self.clone();
        for v in s.c.iter_mut() {
            *v *= x;
        }
        s.normalize();
        s
    }

    /// Adds a constant (exponent 0) term.
    pub fn add_const(&self, x: &Q) -> Result<QSeries> {
        let k = QSeries::from_terms(self.denom, &[(0, x.clone())], self.order.max(1), self.weight2)?;
        let mut s = self.add(&k)?;
        s.order = self.order;
        Ok(s)
    }

    pub fn mul(&self, o: &QSeries) -> Result<QSeries> {
        self.check_grid(o)?;
        let order = (self.order + o.start).min(o.order + self.start);
        let w2 = self.weight2 + o.weight2;
        if self.is_zero() || o.is_zero() {
            return Ok(QSeries::zero(self.denom, order, w2));
        }
        let start = self.start + o.start;
        let len = (order - start).max(0) as usize;
        let mut c = vec![Q::zero(); len];
        for (i, a) in self.c.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in o.c.iter().enumerate() {
                let idx = i + j;
                if idx >= len {
                    break;
                }
                if !b.is_zero() {
                    c[idx] += a * b;
                }
            }
        }
        let mut s = QSeries { denom: self.denom, start: start.min(order), c, order, weight2: w2, label: String::new() };
        s.normalize();
        Ok(s)
    }

    /// Multiplicative inverse.
    pub fn inv(&self) -> Result<QSeries> {
        if self.is_zero() {
            return Err(Error::ZeroLeading);
        }
        let lb = self.start;
        let order = self.order - 2 * lb;
        let len = (self.order - lb) as usize;
        let b0 = self.c[0].clone();
        let mut d: Vec<Q> = Vec::with_capacity(len);
        d.push(Q::one() / &b0);
        for i in 1..len {
            let mut s = Q::zero();
            for j in 1..=i {
                if j < self.c.len() && !self.c[j].is_zero() {
                    s += &self.c[j] * &d[i - j];
                }
            }
            d.push(-s / &b0);
        }
        let mut r = QSeries { denom: self.denom, start: -lb, c: d, order, weight2: -self.weight2, label: String::new() };
        r.normalize();
        Ok(r)
    }

    pub fn div(&self, o: &QSeries) -> Result<QSeries> {
        self.check_grid(o)?;
        if o.is_zero() {
            return Err(Error::ZeroLeading);
        }
        self.mul(&o.inv()?)
    }

    pub fn pow(&self, e: i64) -> Result<QSeries> {
        let base = if e < 0 { self.inv()? } else { self.clone() };
        let mut acc = QSeries::monomial(self.denom, 0, base.order.max(1) + base.start.abs() * e.abs() + 1, 0)?;
        for _ in 0..e.unsigned_abs() {
            acc = acc.mul(&base)?;
        }
        Ok(acc)
    }

    /// Real coefficient vector in f64, dense from `lead()`.
    pub fn dense_f64(&self) -> (i64, Vec<f64>) {
        (self.start, self.c.iter().map(q_to_f64).collect())
    }

    /// Evaluation at tau in f64 through q^{1/N} = e(tau/N).
    pub fn eval(&self, tau: Complex64) -> Complex64 {
        Evaluator::new(self).eval(tau)
    }

    pub fn to_json(&self) -> SeriesJson {
        SeriesJson {
            denom: self.denom,
            weight: if self.weight2 % 2 == 0 { format!("{}", self.weight2 / 2) } else { format!("{}/2", self.weight2) },
            coeffs: self.terms().map(|(n, v)| (n, v.to_string())).collect(),
            order: self.order,
            label: self.label.clone(),
        }
    }

    pub fn from_json(j: &SeriesJson) -> Result<Self> {
        let w2 = if let Some(num) = j.weight.strip_suffix("/2") {
            num.trim().parse::<i64>().map_err(|e| Error::Param(e.to_string()))?
        } else {
            2 * j.weight.trim().parse::<i64>().map_err(|e| Error::Param(e.to_string()))?
        };
        let mut terms = Vec::new();
        for (n, s) in &j.coeffs {
            let v: Q = s.parse().map_err(|_| Error::Param(format!("bad rational {s}")))?;
            terms.push((*n, v));
        }
        Ok(QSeries::from_terms(j.denom, &terms, j.order, w2)?.with_label(j.label.clone()))
    }
}

impl fmt::Display for QSeries {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for (n, v) in self.terms() {
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            if self.denom == 1 {
                write!(f, "({v})q^{n}")?;
            } else {
                write!(f, "({v})q^({n}/{})", self.denom)?;
            }
        }
        if first {
            write!(f, "0")?;
        }
        write!(f, " + O(q^{})", self.order)
    }
}

/// JSON form of a series: {denom, weight, coeffs: [[n, "p/q"], ...], order, label}.
#[derive(Clone, Debug, Serialize, Deserialize, PartialEq)]
pub struct SeriesJson {
    pub denom: u32,
    pub weight: String,
    pub coeffs: Vec<(i64, String)>,
    pub order: i64,
    #[serde(default, skip_serializing_if = "String::is_empty")]
    pub label: String,
}

/// Dense floating evaluator for repeated evaluation of one series.
#[derive(Clone, Debug)]
pub struct Evaluator {
    denom: f64,
    start: i64,
    c: Vec<f64>,
}

impl Evaluator {
    pub fn new(s: &QSeries) -> Self {
        let (start, c) = s.dense_f64();
        Evaluator { denom: s.denom as f64, start, c }
    }

    /// Keep only exponents below `order`.
    pub fn truncated(mut self, order: i64) -> Self {
        let keep = (order - self.start).max(0) as usize;
        self.c.truncate(keep);
        self
    }

    /// Drops exponents below `from` (for example the principal part).
    pub fn from_exponent(mut self, from: i64) -> Self {
        if from > self.start {
            let cut = ((from - self.start) as usize).min(self.c.len());
            self.c.drain(..cut);
            self.start = from;
        }
        self
    }

    pub fn eval(&self, tau: Complex64) -> Complex64 {
        let arg = Complex64::new(0.0, 2.0 * std::f64::consts::PI / self.denom) * tau;
        let q = arg.exp();
        let mut acc = Complex64::new(0.0, 0.0);
        for v in self.c.iter().rev() {
            acc = acc * q + *v;
        }
        acc * (arg * self.start as f64).exp()
    }

    /// Conjugate-coefficient evaluation f^c(z) = conj(f(-conj z)).
    pub fn eval_c(&self, z: Complex64) -> Complex64 {
        self.eval(-z.conj()).conj()
    }
}

/// Dense MPFR evaluator.
#[derive(Clone, Debug)]
pub struct MpEvaluator {
    denom: u32,
    start: i64,
    c: Vec<Float>,
    prec: u32,
}

impl MpEvaluator {
    pub fn new(s: &QSeries, prec: u32) -> Self {
        MpEvaluator { denom: s.denom, start: s.start, c: s.c.iter().map(|v| q_to_float(v, prec)).collect(), prec }
    }

    pub fn from_exponent(mut self, from: i64) -> Self {
        if from > self.start {
            let cut = ((from - self.start) as usize).min(self.c.len());
            self.c.drain(..cut);
            self.start = from;
        }
        self
    }

    pub fn eval(&self, tau: &MpC) -> MpC {
        let p = self.prec;
        let two_pi = crate::mp::pi(p) * 2u32 / self.denom;
        let arg = tau.mul_i().scale(&two_pi);
        let q = arg.exp();
        let mut acc = MpC::zero(p);
        for v in self.c.iter().rev() {
            acc = (&acc * &q).add_real(v);
        }
        acc * arg.scale_f64(self.start as f64).exp()
    }

    pub fn eval_c(&self, z: &MpC) -> MpC {
        self.eval(&(-z.conj())).conj()
    }
}

/// Named members of the classical bases.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum FormLabel {
    E4,
    E6,
    Delta,
    J,
    Eta24,
    Faber(i64),
    WhBasis { k: i64, m: i64 },
    Weight2Basis(i64),
}

impl FormLabel {
    pub fn parse(s: &str) -> Result<Self> {
        let s = s.trim();
        let lower = s.to_ascii_lowercase();
        match lower.as_str() {
            "e4" => return Ok(FormLabel::E4),
            "e6" => return Ok(FormLabel::E6),
            "delta" => return Ok(FormLabel::Delta),
            "j" => return Ok(FormLabel::J),
            "eta24" => return Ok(FormLabel::Eta24),
            _ => {}
        }
        let num = |t: &str| t.trim().parse::<i64>().map_err(|_| Error::UnsupportedLabel(s.to_string()));
        if let Some(r) = lower.strip_prefix("faber:") {
            return Ok(FormLabel::Faber(num(r)?));
        }
        if let Some(r) = lower.strip_prefix('f') {
            if let Ok(m) = r.parse::<i64>() {
                return Ok(FormLabel::Faber(m));
            }
        }
        if let Some(r) = lower.strip_prefix("wh:") {
            let mut it = r.split(',');
            let k = num(it.next().unwrap_or(""))?;
            let m = num(it.next().unwrap_or(""))?;
            return Ok(FormLabel::WhBasis { k, m });
        }
        if let Some(r) = lower.strip_prefix("weight2:") {
            return Ok(FormLabel::Weight2Basis(num(r)?));
        }
        Err(Error::UnsupportedLabel(s.to_string()))
    }
}

fn eisenstein(r: u32, scale: i64, order: i64, weight2: i64) -> QSeries {
    let mut terms = vec![(0, q_int(1))];
    for n in 1..order {
        terms.push((n, Q::from_integer(sigma(r, n as u64) * scale)));
    }
    QSeries::from_terms(1, &terms, order, weight2).expect("positive order")
}

pub fn e4(order: i64) -> QSeries {
    eisenstein(3, 240, order, 8).with_label("E4")
}

pub fn e6(order: i64) -> QSeries {
    eisenstein(5, -504, order, 12).with_label("E6")
}

pub fn delta(order: i64) -> QSeries {
    let a = e4(order).pow(3).expect("E4 cube");
    let b = e6(order).pow(2).expect("E6 square");
    a.sub(&b).expect("same grid").scale(&q_frac(1, 1728)).truncate(order).with_label("Delta")
}

pub fn j_invariant(order: i64) -> QSeries {
    let n = order + 2;
    e4(n).pow(3).and_then(|a| a.div(&delta(n))).expect("j").truncate(order).with_label("j")
}

/// Builds the requested classical form with coefficients below `order`.
pub fn classical_form(label: &FormLabel, order: i64) -> Result<QSeries> {
    if order < 1 {
        return Err(Error::Param("order must be at least 1".into()));
    }
    match label {
        FormLabel::E4 => Ok(e4(order)),
        FormLabel::E6 => Ok(e6(order)),
        FormLabel::Delta | FormLabel::Eta24 => Ok(delta(order)),
        FormLabel::J => Ok(j_invariant(order)),
        FormLabel::Faber(m) => faber_basis(*m, order),
        FormLabel::WhBasis { k, m } => wh_basis(*k, *m, order),
        FormLabel::Weight2Basis(m) => wh_basis(2, *m, order),
    }
}

/// f_m = q^{-m} + 24 sigma_1(m) + O(q), the weight-0 basis.
pub fn faber_basis(m: i64, order: i64) -> Result<QSeries> {
    if m < 1 {
        return Err(Error::Param(format!("faber index must be positive, got {m}")));
    }
    if order < 1 {
        return Err(Error::OrderTooSmall { have: order, need: 1 });
    }
    let j = j_invariant(order + m + 1);
    // powers j^r for r = 0..m, each known below `order`
    let mut pows = vec![QSeries::one(order + m + 1)];
    for r in 1..=m as usize {
        let p = pows[r - 1].mul(&j)?;
        pows.push(p);
    }
    let mut f = pows[m as usize].clone();
    for r in (0..m).rev() {
        let c = f.c(-r);
        if !c.is_zero() {
            f = f.sub(&pows[r as usize].scale(&c))?;
        }
    }
    let c0 = Q::from_integer(sigma(1, m as u64) * 24u32);
    let f = f.add_const(&c0)?.truncate(order);
    Ok(f.with_weight2(0).with_label(format!("f{m}")))
}

/// Decomposes an even weight k as 12 l + k' with k' in {0,4,6,8,10,14}.
fn weight_split(k: i64) -> (i64, i64) {
    let r = k.rem_euclid(12);
    let kp = match r {
        0 | 4 | 6 | 8 | 10 => r,
        2 => 14,
        _ => unreachable!("odd weight"),
    };
    ((k - kp) / 12, kp)
}

fn e_kprime(kp: i64, order: i64) -> QSeries {
    let a = e4(order);
    let b = e6(order);
    let one = QSeries::one(order).with_weight2(0);
    match kp {
        0 => one,
        4 => a,
        6 => b,
        8 => a.mul(&a).unwrap(),
        10 => a.mul(&b).unwrap(),
        14 => a.mul(&a).unwrap().mul(&b).unwrap(),
        _ => unreachable!(),
    }
}

/// Largest l with l + 1 the first exponent after the gap of the weight-k basis.
pub fn gap_index(k: i64) -> i64 {
    weight_split(k).0
}

/// The weight-k element q^{-m} + O(q^{l+1}) with the maximal gap; k even.
pub fn wh_basis(k: i64, m: i64, order: i64) -> Result<QSeries> {
    if k % 2 != 0 {
        return Err(Error::Param(format!("weight {k} must be even")));
    }
    let (l, kp) = weight_split(k);
    if -m > l {
        return Err(Error::NoSuchForm { k, m });
    }
    let r_max = m + l;
    let pad = order + r_max + (-l).max(0) + 2;
    let base = e_kprime(kp, pad).mul(&delta(pad).pow(l)?)?;
    let j = j_invariant(pad);
    let mut rows = vec![base];
    for r in 1..=r_max as usize {
        let p = rows[r - 1].mul(&j)?;
        rows.push(p);
    }
    // row r has leading exponent l - r; eliminate all other leads from the top row
    let mut f = rows[r_max as usize].clone();
    for r in (0..r_max).rev() {
        let e = l - r;
        let c = f.c(e);
        if !c.is_zero() {
            f = f.sub(&rows[r as usize].scale(&c))?;
        }
    }
    if f.order() < order {
        return Err(Error::OrderTooSmall { have: f.order(), need: order });
    }
    Ok(f.truncate(order).with_weight2(2 * k).with_label(format!("wh({k},{m})")))
}

/// Sum over n of c_f(n) c_g(-n); requires both orders to cover the other's
/// principal part.
pub fn pairing(f: &QSeries, g: &QSeries) -> Result<Q> {
    f.check_grid(g)?;
    if f.order() <= g.pole_order() {
        return Err(Error::OrderTooSmall { have: f.order(), need: g.pole_order() + 1 });
    }
    if g.order() <= f.pole_order() {
        return Err(Error::OrderTooSmall { have: g.order(), need: f.pole_order() + 1 });
    }
    let mut s = Q::zero();
    for (n, v) in f.terms() {
        if -n < g.order() && n <= g.pole_order() {
            let w = g.c(-n);
            if !w.is_zero() {
                s += v * w;
            }
        }
    }
    Ok(s)
}

/// Sign helper for exact rationals in reports.
pub fn q_sign(x: &Q) -> i32 {
    if x.is_zero() {
        0
    } else if x.is_positive() {
        1
    } else {
        -1
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn monomial_product() {
        let a = QSeries::monomial(1, -1, 10, 0).unwrap();
        let b = QSeries::monomial(1, 1, 10, 0).unwrap();
        let p = a.mul(&b).unwrap();
        assert_eq!(p.c(0), q_int(1));
        assert_eq!(p.terms().count(), 1);
    }

    #[test]
    fn delta_over_delta() {
        let d = delta(12);
        let r = d.div(&d).unwrap();
        assert_eq!(r.c(0), q_int(1));
        for n in 1..r.order() {
            assert!(r.c(n).is_zero());
        }
    }

    #[test]
    fn e4_head() {
        let e = e4(3);
        assert_eq!(e.c(0), q_int(1));
        assert_eq!(e.c(1), q_int(240));
        assert_eq!(e.c(2), q_int(2160));
    }

    #[test]
    fn j_head() {
        let j = j_invariant(2);
        assert_eq!(j.c(-1), q_int(1));
        assert_eq!(j.c(0), q_int(744));
        assert_eq!(j.c(1), q_int(196884));
    }

    #[test]
    fn faber_heads() {
        let f1 = faber_basis(1, 2).unwrap();
        assert_eq!(f1.c(-1), q_int(1));
        assert_eq!(f1.c(0), q_int(24));
        assert_eq!(f1.c(1), q_int(196884));
        let f2 = faber_basis(2, 1).unwrap();
        assert_eq!(f2.c(-2), q_int(1));
        assert!(f2.c(-1).is_zero());
        assert_eq!(f2.c(0), q_int(72));
    }

    #[test]
    fn inverse_delta() {
        let f = wh_basis(-12, 1, 3).unwrap();
        assert_eq!(f.c(-1), q_int(1));
        assert_eq!(f.c(0), q_int(24));
        assert_eq!(f.c(1), q_int(324));
    }

    #[test]
    fn order_bookkeeping() {
        let a = QSeries::from_ints(1, &[(-2, 1), (0, 3)], 5, 0).unwrap();
        let b = QSeries::from_ints(1, &[(1, 1), (2, 1)], 7, 0).unwrap();
        let p = a.mul(&b).unwrap();
        // min(5 + lead(b), 7 + lead(a)) = min(6, 5)
        assert_eq!(p.order(), 5);
        let i = b.inv().unwrap();
        assert_eq!(i.order(), 7 - 2);
    }

    #[test]
    fn grid_mismatch() {
        let a = QSeries::from_ints(1, &[(0, 1)], 5, 0).unwrap();
        let b = QSeries::from_ints(4, &[(0, 1)], 5, 0).unwrap();
        assert!(matches!(a.add(&b), Err(Error::GridMismatch(1, 4))));
    }

    #[test]
    fn json_roundtrip() {
        let f = faber_basis(3, 6).unwrap();
        let j = f.to_json();
        let g = QSeries::from_json(&j).unwrap();
        assert_eq!(f.to_map(), g.to_map());
        assert_eq!(f.order(), g.order());
    }
}
