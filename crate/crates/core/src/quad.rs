//! Gauss-Legendre quadrature in f64 and in MPFR precision, with adaptive
//! panel splitting.

use crate::error::{Error, Result};
use crate::mp::MpC;
use num_complex::Complex64;
use rug::Float;
use std::collections::HashMap;
use std::sync::{Arc, Mutex, OnceLock};

/// Nodes and weights on [-1, 1].
#[derive(Debug)]
pub struct Rule {
    pub nodes: Vec<f64>,
    pub weights: Vec<f64>,
}

#[derive(Debug)]
pub struct MpRule {
    pub nodes: Vec<Float>,
    pub weights: Vec<Float>,
}

/// Legendre P_n and P_n' at x by the three-term recurrence.
fn legendre(n: usize, x: f64) -> (f64, f64) {
    let mut p0 = 1.0;
    let mut p1 = x;
    for k in 2..=n {
        let kf = k as f64;
        let p2 = ((2.0 * kf - 1.0) * x * p1 - (kf - 1.0) * p0) / kf;
        p0 = p1;
        p1 = p2;
    }
    if n == 0 {
        return (1.0, 0.0);
    }
    let d = n as f64 * (x * p1 - p0) / (x * x - 1.0);
    (p1, d)
}

fn build_rule(n: usize) -> Rule {
    let mut nodes = vec![0.0; n];
    let mut weights = vec![0.0; n];
    let nf = n as f64;
    for i in 0..n.div_ceil(2) {
        let mut x = (std::f64::consts::PI * (i as f64 + 0.75) / (nf + 0.5)).cos();
        for _ in 0..100 {
            let (p, d) = legendre(n, x);
            let dx = p / d;
            x -= dx;
            if dx.abs() < 1e-16 {
                break;
            }
        }
        let (_, d) = legendre(n, x);
        let w = 2.0 / ((1.0 - x * x) * d * d);
        nodes[i] = -x;
        nodes[n - 1 - i] = x;
        weights[i] = w;
        weights[n - 1 - i] = w;
    }
    Rule { nodes, weights }
}

/// Cached n-point rule.
pub fn rule(n: usize) -> Arc<Rule> {
    static CACHE: OnceLock<Mutex<HashMap<usize, Arc<Rule>>>> = OnceLock::new();
    let cache = CACHE.get_or_init(|| Mutex::new(HashMap::new()));
    let mut g = cache.lock().expect("rule cache poisoned");
    g.entry(n).or_insert_with(|| Arc::new(build_rule(n))).clone()
}

fn mp_legendre(n: usize, x: &Float) -> (Float, Float) {
    let p = x.prec();
    let mut p0 = Float::with_val(p, 1);
    let mut p1 = x.clone();
    for k in 2..=n {
        let a = Float::with_val(p, x * &p1) * (2 * k - 1) as u32;
        let b = Float::with_val(p, &p0 * (k - 1) as u32);
        let p2 = (a - b) / k as u32;
        p0 = p1;
        p1 = p2;
    }
    let x2 = Float::with_val(p, x * x) - 1u32;
    let d = (Float::with_val(p, x * &p1) - &p0) * n as u32 / x2;
    (p1, d)
}

fn build_mp_rule(n: usize, prec: u32) -> MpRule {
    let seed = rule(n);
    let wp = prec + 32;
    let tol = Float::with_val(wp, Float::i_exp(1, -(prec as i32) - 8));
    let mut nodes = vec![Float::new(prec); n];
    let mut weights = vec![Float::new(prec); n];
    for i in 0..n.div_ceil(2) {
        let mut x = Float::with_val(wp, seed.nodes[n - 1 - i]);
        for _ in 0..200 {
            let (pv, d) = mp_legendre(n, &x);
            let dx = Float::with_val(wp, &pv / &d);
            x -= &dx;
            if dx.abs() < tol {
                break;
            }
        }
        let (_, d) = mp_legendre(n, &x);
        let one_minus = Float::with_val(wp, 1) - Float::with_val(wp, &x * &x);
        let w = Float::with_val(wp, 2) / (one_minus * Float::with_val(wp, &d * &d));
        nodes[i] = Float::with_val(prec, -&x);
        nodes[n - 1 - i] = Float::with_val(prec, &x);
        weights[i] = Float::with_val(prec, &w);
        weights[n - 1 - i] = Float::with_val(prec, &w);
    }
    MpRule { nodes, weights }
}

/// Cached n-point rule at the given precision.
pub fn mp_rule(n: usize, prec: u32) -> Arc<MpRule> {
    static CACHE: OnceLock<Mutex<HashMap<(usize, u32), Arc<MpRule>>>> = OnceLock::new();
    let cache = CACHE.get_or_init(|| Mutex::new(HashMap::new()));
    let mut g = cache.lock().expect("rule cache poisoned");
    g.entry((n, prec)).or_insert_with(|| Arc::new(build_mp_rule(n, prec))).clone()
}

/// Single panel of an n-point rule on [a, b].
pub fn panel<F: FnMut(f64) -> Complex64>(mut f: F, a: f64, b: f64, n: usize) -> Complex64 {
    let r = rule(n);
    let h = 0.5 * (b - a);
    let m = 0.5 * (b + a);
    let mut s = Complex64::new(0.0, 0.0);
    for (x, w) in r.nodes.iter().zip(&r.weights) {
        s += f(m + h * x) * *w;
    }
    s * h
}

/// Sum of n-point panels over consecutive breakpoints.
pub fn panels<F: FnMut(f64) -> Complex64>(mut f: F, breaks: &[f64], n: usize) -> Complex64 {
    breaks.windows(2).map(|w| panel(&mut f, w[0], w[1], n)).sum()
}

/// Adaptive integration: each panel is accepted when the n- and 2n-point
/// rules agree to within its share of `tol`; otherwise it is bisected.
/// Returns the value and the summed panel discrepancies.
/// Panel budget for `adaptive`.
pub const MAX_PANELS: usize = 200_000;

pub fn adaptive<F: FnMut(f64) -> Complex64>(
    mut f: F,
    a: f64,
    b: f64,
    tol: f64,
    n: usize,
) -> Result<(Complex64, f64)> {
    let total = (b - a).abs();
    let mut stack = vec![(a, b, 0usize)];
    let mut acc = Complex64::new(0.0, 0.0);
    let mut err = 0.0;
    let mut count = 0usize;
    while let Some((lo, hi, depth)) = stack.pop() {
        count += 1;
        if count > MAX_PANELS {
            return Err(Error::Quadrature(format!("more than {MAX_PANELS} panels on [{a}, {b}]")));
        }
        let c = panel(&mut f, lo, hi, n);
        let mut mag = 0.0;
        let d = panel(
            |x| {
                let v = f(x);
                mag += v.norm();
                v
            },
            lo,
            hi,
            2 * n,
        );
        let e = (c - d).norm();
        let share = tol * (hi - lo).abs() / total;
        // rounding floor: a few ulps of the integral of |f| over the panel
        let floor = 64.0 * f64::EPSILON * mag * (hi - lo).abs() / (2 * n) as f64;
        // panels narrower than 1e-10 of the range are accepted with their
        // discrepancy booked, so isolated rounding jumps cannot stall
        if e <= share.max(floor) || (hi - lo).abs() <= 1e-10 * total {
            acc += d;
            err += e;
        } else {
            let mid = 0.5 * (lo + hi);
            if depth >= 60 {
                return Err(Error::Quadrature(format!("panel [{lo}, {hi}] stuck at {e:e}")));
            }
            stack.push((mid, hi, depth + 1));
            stack.push((lo, mid, depth + 1));
        }
    }
    Ok((acc, err))
}

/// Single MPFR panel on [a, b].
pub fn mp_panel<F: FnMut(&Float) -> MpC>(mut f: F, a: &Float, b: &Float, n: usize, prec: u32) -> MpC {
    let r = mp_rule(n, prec);
    let h = Float::with_val(prec, b - a) / 2u32;
    let m = Float::with_val(prec, b + a) / 2u32;
    let mut s = MpC::zero(prec);
    for (x, w) in r.nodes.iter().zip(&r.weights) {
        let t = Float::with_val(prec, &h * x) + &m;
        s = s + f(&t).scale(w);
    }
    s.scale(&h)
}

/// MPFR panels over breakpoints.
pub fn mp_panels<F: FnMut(&Float) -> MpC>(mut f: F, breaks: &[Float], n: usize, prec: u32) -> MpC {
    let mut s = MpC::zero(prec);
    for w in breaks.windows(2) {
        s = s + mp_panel(&mut f, &w[0], &w[1], n, prec);
    }
    s
}

/// Straight-line contour integral of a complex function from za to zb.
pub fn mp_line<F: FnMut(&MpC) -> MpC>(mut f: F, za: &MpC, zb: &MpC, pieces: usize, n: usize, prec: u32) -> MpC {
    let dz = zb - za;
    let mut s = MpC::zero(prec);
    for j in 0..pieces {
        let lo = Float::with_val(prec, j as u32) / pieces as u32;
        let hi = Float::with_val(prec, (j + 1) as u32) / pieces as u32;
        s = s + mp_panel(|t| f(&(za + &dz.scale(t))), &lo, &hi, n, prec);
    }
    s * dz
}

/// Straight-line contour integral in f64.
pub fn line<F: FnMut(Complex64) -> Complex64>(mut f: F, za: Complex64, zb: Complex64, pieces: usize, n: usize) -> Complex64 {
    let dz = zb - za;
    let breaks: Vec<f64> = (0..=pieces).map(|j| j as f64 / pieces as f64).collect();
    panels(|t| f(za + dz * t), &breaks, n) * dz
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn weights_sum_to_two() {
        for n in [1, 2, 5, 20, 64] {
            let s: f64 = rule(n).weights.iter().sum();
            assert!((s - 2.0).abs() < 1e-13, "n = {n}");
        }
    }

    #[test]
    fn exact_for_polynomials() {
        let v = panel(|x| Complex64::new(x.powi(9) + 3.0 * x.powi(4), 0.0), 0.0, 2.0, 5);
        assert!((v.re - (1024.0 / 10.0 + 3.0 * 32.0 / 5.0)).abs() < 1e-10);
    }

    #[test]
    fn adaptive_handles_peaked_integrand() {
        let (v, _) = adaptive(|x| Complex64::new(1.0 / (1e-3 + x * x), 0.0), -1.0, 1.0, 1e-10, 10).unwrap();
        let exact = 2.0 * (1.0f64 / 1e-3f64.sqrt()).atan() / 1e-3f64.sqrt();
        assert!((v.re - exact).abs() < 1e-8);
    }

    #[test]
    fn mp_rule_integrates_exp() {
        let prec = 192;
        let a = Float::new(prec);
        let b = Float::with_val(prec, 1);
        let v = mp_panel(|t| MpC::from_real(Float::with_val(prec, t.exp_ref())), &a, &b, 30, prec);
        let e = Float::with_val(prec, 1).exp() - 1u32;
        assert!((v.re - e).abs().to_f64() < 1e-50);
    }
}
