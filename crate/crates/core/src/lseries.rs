//! L-functions of weakly holomorphic forms, the horocycle integral for
//! <g_1, g_1>, the function G_k on negative weights, and both sides of the
//! Taylor-coefficient identity at tau = 0.

use crate::error::{Error, Result};
use crate::mp::{i_pow, pi, powi_real, MpC, EXTENDED_PREC, STANDARD_PREC};
use crate::qseries::{q_to_float, Evaluator, MpEvaluator, QSeries};
use crate::quad;
use crate::specfun::{digamma, half_order, mp_gamma_upper, mp_w_complex, BranchAngle};
use num_complex::Complex64;
use num_traits::Zero;
use rug::Float;
use serde::{Deserialize, Serialize};

/// How the constant coefficient enters L*.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum ConstantTerm {
    /// The full bracket -c(0)(i^k t0^{s-k}/(k-s) + t0^s/s).
    Full,
    /// Constant coefficient dropped: L* of g - c(0).
    Dropped,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct LValue {
    pub s: f64,
    pub t0: f64,
    pub re: f64,
    pub im: f64,
    pub err: f64,
}

impl LValue {
    pub fn value(&self) -> Complex64 {
        Complex64::new(self.re, self.im)
    }
}

/// (2 pi m)^e, with negative bases read on the upper side of the cut.
fn base_pow(x: &Float, e2: i64, prec: u32) -> MpC {
    let z = MpC::from_real(x.clone());
    if e2 % 2 == 0 {
        z.powi(e2 / 2)
    } else {
        z.pow_real_sheet(&(Float::with_val(prec, e2) / 2u32), 0)
    }
}

/// L*_g(s) for half-integral s in MPFR; returns (value, error bound).
pub fn mp_lstar(g: &QSeries, s2: i64, t0: &Float, conv: ConstantTerm, prec: u32) -> Result<(MpC, f64)> {
    if g.denom() != 1 {
        return Err(Error::Param("L* needs a level-one series".into()));
    }
    if !t0.is_finite() || *t0 <= 0 {
        return Err(Error::Param("t0 must be positive".into()));
    }
    let k2 = g.weight2();
    if k2 % 2 != 0 {
        return Err(Error::Unsupported("L* is implemented for integral weight".into()));
    }
    let k = k2 / 2;
    let ik = i_pow(prec, k);
    let two_pi = pi(prec) * 2u32;
    let mut total = MpC::zero(prec);
    let mut mag = 0.0f64;
    let mut last = f64::INFINITY;
    let mut done = false;
    for (m, c) in g.terms() {
        if m == 0 || c.is_zero() {
            continue;
        }
        let cm = q_to_float(c, prec);
        let x = Float::with_val(prec, &two_pi * m);
        let z1 = MpC::from_real(Float::with_val(prec, &x * t0));
        let z2 = MpC::from_real(Float::with_val(prec, &x / t0));
        let a = mp_gamma_upper(s2, &z1, BranchAngle::Principal, prec)? / base_pow(&x, s2, prec);
        let b = mp_gamma_upper(k2 - s2, &z2, BranchAngle::Principal, prec)? / base_pow(&x, k2 - s2, prec);
        let term = (a + &ik * &b).scale(&cm);
        let t = term.abs().to_f64();
        mag += t;
        total = total + term;
        if m > 0 {
            last = t;
            if t < 1e-18 * total.abs().to_f64().max(1e-300) {
                done = true;
                break;
            }
        }
    }
    if !done {
        // unknown coefficients start at the series order; bound them by the
        // growth envelope exp(4 pi sqrt(m0 n)) of a pole of order m0
        let n = g.order().max(1);
        let m0 = g.pole_order().max(1) as f64;
        let x = Float::with_val(prec, &two_pi * n);
        let z1 = MpC::from_real(Float::with_val(prec, &x * t0));
        let z2 = MpC::from_real(Float::with_val(prec, &x / t0));
        let a = mp_gamma_upper(s2, &z1, BranchAngle::Principal, prec)? / base_pow(&x, s2, prec);
        let b = mp_gamma_upper(k2 - s2, &z2, BranchAngle::Principal, prec)? / base_pow(&x, k2 - s2, prec);
        let env = (4.0 * std::f64::consts::PI * (m0 * n as f64).sqrt()).exp();
        last = (a.abs().to_f64() + b.abs().to_f64()) * env * 2.0;
        if !(last <= 1e-14 * total.abs().to_f64().max(mag * 1e-3)) {
            return Err(Error::OrderTooSmall { have: g.order(), need: 2 * g.order() });
        }
    }
    let c0 = g.coeff(0).unwrap_or_default();
    if conv == ConstantTerm::Full && !c0.is_zero() {
        if s2 == 0 || s2 == k2 {
            return Err(Error::Domain(format!("L* has a pole at s = {} when c(0) != 0", s2 as f64 / 2.0)));
        }
        let c0f = q_to_float(&c0, prec);
        let s = Float::with_val(prec, s2) / 2u32;
        let km_s = Float::with_val(prec, k2 - s2) / 2u32;
        let t_sk = MpC::from_real(t0.clone()).pow_real_sheet(&Float::with_val(prec, -&km_s), 0);
        let t_s = MpC::from_real(t0.clone()).pow_real_sheet(&s, 0);
        let br = (&ik * &t_sk).scale(&km_s.recip()) + t_s.scale(&s.recip());
        total = total - br.scale(&c0f);
    }
    let err = mag * 2f64.powi(-(prec as i32) + 12) + 4.0 * if done { last } else { last.min(1e300) };
    Ok((total, err))
}

/// L*_g(s) at a half-integer s.
pub fn lstar(g: &QSeries, s: f64, t0: f64, conv: ConstantTerm) -> Result<LValue> {
    let s2 = half_order(s)?;
    let (v, err) = mp_lstar(g, s2, &Float::with_val(STANDARD_PREC, t0), conv, STANDARD_PREC)?;
    let z = v.to_c64();
    Ok(LValue { s, t0, re: z.re, im: z.im, err: err + 4.0 * f64::EPSILON * z.norm() })
}

/// Horocycle integral -(3/2 pi) Re int_i^{i+1} J(tau) psi(tau) d tau for the
/// scalar plus-space normalization; the vector-valued value is 2/3 of it.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Horocycle {
    pub scalar: f64,
    pub vector: f64,
    pub err: f64,
}

pub fn horocycle_default() -> Result<Horocycle> {
    let j = crate::cmtraces::hauptmodul(60);
    horocycle_with(&j, 16, 24)
}

/// The same integral with `panels` Gauss-Legendre panels of `n` points.
pub fn horocycle_with(j: &QSeries, panels: usize, n: usize) -> Result<Horocycle> {
    let ev = Evaluator::new(j);
    let integral = |panels: usize| -> Result<f64> {
        let breaks: Vec<f64> = (0..=panels).map(|i| i as f64 / panels as f64).collect();
        let mut fail = None;
        let v = quad::panels(
            |u| {
                let tau = Complex64::new(u, 1.0);
                match digamma(tau) {
                    Ok(p) => ev.eval(tau) * p.value,
                    Err(e) => {
                        fail = Some(e);
                        Complex64::new(0.0, 0.0)
                    }
                }
            },
            &breaks,
            n,
        );
        match fail {
            Some(e) => Err(e),
            None => Ok(v.re),
        }
    };
    let a = integral(panels)?;
    let b = integral(2 * panels)?;
    let scale = -3.0 / (2.0 * std::f64::consts::PI);
    Ok(Horocycle { scalar: scale * b, vector: scale * b * 2.0 / 3.0, err: (scale * (a - b)).abs() + 1e-14 * (scale * b).abs() })
}

/// Settings for the G_k evaluator.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct GkSettings {
    /// The vertical integral runs over y in [1, 1 + T].
    pub height: f64,
    /// Gauss-Legendre points per panel.
    pub nodes: usize,
    pub prec: u32,
}

impl Default for GkSettings {
    fn default() -> Self {
        GkSettings { height: 19.0, nodes: 40, prec: EXTENDED_PREC }
    }
}

/// Evaluator for
///   G_k(tau) = -(2i)^{1-k} int_i^{i inf} f~(z)[(z+tau)^{k-2} - (z tau - 1)^{k-2}] dz
///            + e^{-pi i k}(4 pi)^{1-k} sum_j c(-j)/j^{k-1} e^{2 pi i j tau} W_{2-k}(-pi i j (tau + i)),
/// where f~ = f^c_o - c(0) and the coefficients are conjugated.
pub struct GkEvaluator {
    k: i64,
    tilde: MpEvaluator,
    principal: Vec<(i64, Float)>,
    s: GkSettings,
}

impl GkEvaluator {
    pub fn new(f: &QSeries, s: GkSettings) -> Result<Self> {
        let k2 = f.weight2();
        if k2 > 0 || k2 % 4 != 0 || f.denom() != 1 {
            return Err(Error::Param("G_k needs a level-one form of weight k in -2N".into()));
        }
        // rational coefficients: conjugation is trivial
        let tilde = MpEvaluator::new(f, s.prec).from_exponent(1);
        let principal = f.principal_part().into_iter().map(|(n, c)| (-n, q_to_float(&c, s.prec))).collect();
        Ok(GkEvaluator { k: k2 / 2, tilde, principal, s })
    }

    pub fn k(&self) -> i64 {
        self.k
    }

    pub fn eval(&self, tau: &MpC) -> Result<MpC> {
        let p = self.s.prec;
        let k = self.k;
        let i = MpC::i(p);
        let top = 1.0 + self.s.height;
        let mut breaks = vec![1.0, 2.0, 4.0, 8.0];
        breaks.retain(|b| *b < top);
        breaks.push(top);
        let breaks: Vec<Float> = breaks.iter().map(|b| Float::with_val(p, *b)).collect();
        let integral = quad::mp_panels(
            |y| {
                let z = MpC::new(Float::new(p), y.clone());
                let a = (&z + tau).powi(k - 2);
                let b = (&z * tau).add_real(&Float::with_val(p, -1)).powi(k - 2);
                (self.tilde.eval(&z) * (a - b)).mul_i()
            },
            &breaks,
            self.s.nodes,
            p,
        );
        let two_i = MpC::from_f64(p, 0.0, 2.0);
        let mut v = -(two_i.powi(1 - k) * integral);
        if !self.principal.is_empty() {
            let four_pi = pi(p) * 4u32;
            let pre = MpC::from_real(Float::with_val(p, -k) * pi(p)).mul_i().exp().scale(&Float::with_val(p, powi_real(&four_pi, 1 - k as i32)));
            let tau_i = tau + &i;
            for (j, c) in &self.principal {
                let w = tau_i.scale(&(pi(p) * *j as u32)).mul_i().scale_f64(-1.0);
                let wv = mp_w_complex(2 * (2 - k), &w, p)?;
                let e = tau.scale(&(pi(p) * 2u32 * *j as u32)).mul_i().exp();
                let jp = powi_real(&Float::with_val(p, *j), k as i32 - 1);
                v = v + (&pre * &(e * wv)).scale(&Float::with_val(p, c / &jp));
            }
        }
        Ok(v)
    }
}

/// G_k(tau) in f64, with the truncation height and quadrature refinement
/// folded into an error estimate.
pub fn gk_eval(f: &QSeries, tau: Complex64, s: GkSettings) -> Result<(Complex64, f64)> {
    let t = MpC::from_c64(s.prec, tau);
    let a = GkEvaluator::new(f, s.clone())?.eval(&t)?;
    let finer = GkSettings { height: s.height + 4.0, nodes: s.nodes + s.nodes / 2, prec: s.prec };
    let b = GkEvaluator::new(f, finer)?.eval(&t)?;
    let v = a.to_c64();
    Ok((v, (&a - &b).abs().to_f64() + 4.0 * f64::EPSILON * v.norm()))
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct TaylorCheck {
    pub n: u32,
    pub lhs: Complex64Pair,
    pub lhs_coarse: Complex64Pair,
    pub rhs: Complex64Pair,
    /// |lhs(h) - lhs(2h)| / |lhs(h)|.
    pub self_dev: f64,
    /// |lhs - rhs| / |rhs|.
    pub dev: f64,
    pub nodes: usize,
    pub h: f64,
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Complex64Pair {
    pub re: f64,
    pub im: f64,
}

impl From<&MpC> for Complex64Pair {
    fn from(z: &MpC) -> Self {
        let c = z.to_c64();
        Complex64Pair { re: c.re, im: c.im }
    }
}

/// Solves the Vandermonde system sum_c a_c y_r^c = v_r by Gaussian
/// elimination with partial pivoting.
fn vandermonde_solve(ys: &[Float], vals: &[MpC], prec: u32) -> Result<Vec<MpC>> {
    let m = ys.len();
    let mut a: Vec<Vec<MpC>> = ys
        .iter()
        .map(|y| (0..m).map(|c| MpC::from_real(Float::with_val(prec, powi_real(y, c as i32)))).collect())
        .collect();
    let mut b: Vec<MpC> = vals.to_vec();
    for col in 0..m {
        let piv = (col..m).max_by(|&x, &y| a[x][col].abs().partial_cmp(&a[y][col].abs()).expect("finite")).expect("rows");
        if a[piv][col].is_zero() {
            return Err(Error::IllConditioned(f64::INFINITY));
        }
        a.swap(col, piv);
        b.swap(col, piv);
        for r in col + 1..m {
            let f = &a[r][col] / &a[col][col];
            for c in col..m {
                let t = &f * &a[col][c];
                a[r][c] = &a[r][c] - &t;
            }
            let t = &f * &b[col];
            b[r] = &b[r] - &t;
        }
    }
    let mut x = vec![MpC::zero(prec); m];
    for r in (0..m).rev() {
        let mut s = b[r].clone();
        for c in r + 1..m {
            s = s - &a[r][c] * &x[c];
        }
        x[r] = s / &a[r][r];
    }
    Ok(x)
}

/// Taylor coefficient G_k^{(n)}(0)/n! from a polynomial fit through the
/// points tau_j = i j h, j = 1..nodes.
pub fn taylor_lhs(ev: &GkEvaluator, n: u32, h: f64, nodes: usize, prec: u32) -> Result<MpC> {
    if nodes <= n as usize {
        return Err(Error::Param("need more fit points than the derivative order".into()));
    }
    let hh = Float::with_val(prec, h);
    let ys: Vec<Float> = (1..=nodes).map(|j| Float::with_val(prec, &hh * j as u32)).collect();
    let vals = ys.iter().map(|y| ev.eval(&MpC::new(Float::new(prec), y.clone()))).collect::<Result<Vec<_>>>()?;
    let coef = vandermonde_solve(&ys, &vals, prec)?;
    // y = -i tau
    Ok(&coef[n as usize] * &i_pow(prec, -(n as i64)))
}

/// Rising factorial (a)_n.
fn pochhammer(a: i64, n: u32, prec: u32) -> Float {
    (0..n as i64).fold(Float::with_val(prec, 1), |acc, j| acc * (a + j))
}

fn factorial(n: u32, prec: u32) -> Float {
    (2..=n).fold(Float::with_val(prec, 1), |acc, j| acc * j)
}

/// Right-hand side of the Taylor identity at tau = 0:
///   -(k-n-1)_n / (2^{k-1} i^{n+k} n!) [ L*_{f^c}(n+1) + c(0)(i^k/(k-n-1) + 1/(n+1))
///       - sum_j c(-j) Gamma(n+1, -2 pi j)/(-2 pi j)^{n+1} ]
///   + 2^{2-2k+n} pi^{n-k+2} i^{n-1} / (Gamma(2-k) n!) sum_j c(-j)/j^{k-n-1}.
pub fn taylor_rhs(f: &QSeries, n: u32, prec: u32) -> Result<MpC> {
    let k2 = f.weight2();
    if k2 > 0 || k2 % 4 != 0 {
        return Err(Error::Param("the identity is stated for weights in -2N".into()));
    }
    let k = k2 / 2;
    let ni = n as i64;
    let (l, _) = mp_lstar(f, 2 * (ni + 1), &Float::with_val(prec, 1), ConstantTerm::Full, prec)?;
    let c0 = q_to_float(&f.coeff(0).unwrap_or_default(), prec);
    let b1 = i_pow(prec, k).scale(&Float::with_val(prec, k - ni - 1).recip());
    let b2 = Float::with_val(prec, ni + 1).recip();
    let mut br = l + b1.add_real(&b2).scale(&c0);
    let two_pi = pi(prec) * 2u32;
    let mut extra_sum = Float::new(prec);
    for (m, c) in f.principal_part() {
        let j = -m;
        let cj = q_to_float(&c, prec);
        let w = MpC::from_real(-Float::with_val(prec, &two_pi * j));
        let g = mp_gamma_upper(2 * (ni + 1), &w, BranchAngle::Principal, prec)?;
        br = br - (g / w.powi(ni + 1)).scale(&cj);
        extra_sum += cj / powi_real(&Float::with_val(prec, j), (k - ni - 1) as i32);
    }
    let denom = i_pow(prec, ni + k).scale(&(powi_real(&Float::with_val(prec, 2), (k - 1) as i32) * factorial(n, prec)));
    let a = MpC::from_real(-pochhammer(k - ni - 1, n, prec)) / denom;
    let g2k = Float::with_val(prec, 2 - k).gamma();
    let extra = i_pow(prec, ni - 1).scale(
        &(powi_real(&Float::with_val(prec, 2), (2 - 2 * k + ni) as i32) * powi_real(&pi(prec), (ni - k + 2) as i32) / g2k / factorial(n, prec) * extra_sum),
    );
    Ok(a * br + extra)
}

/// Both sides of the identity, with the fit repeated at h and h/2.
pub fn taylor_check(f: &QSeries, n: u32, h: f64, s: GkSettings) -> Result<TaylorCheck> {
    let prec = s.prec;
    let nodes = 2 * n as usize + 10;
    let ev = GkEvaluator::new(f, s)?;
    let coarse = taylor_lhs(&ev, n, h, nodes, prec)?;
    let fine = taylor_lhs(&ev, n, h / 2.0, nodes, prec)?;
    let rhs = taylor_rhs(f, n, prec)?;
    let self_dev = ((&fine - &coarse).abs() / fine.abs()).to_f64();
    let dev = ((&fine - &rhs).abs() / rhs.abs()).to_f64();
    Ok(TaylorCheck {
        n,
        lhs: (&fine).into(),
        lhs_coarse: (&coarse).into(),
        rhs: (&rhs).into(),
        self_dev,
        dev,
        nodes,
        h: h / 2.0,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::qseries::QSeries;

    #[test]
    fn single_term_reduces() {
        let g = QSeries::from_ints(1, &[(1, 1)], 40, 0).unwrap();
        let v = lstar(&g, 2.0, 1.0, ConstantTerm::Full).unwrap();
        // Gamma(2, 2 pi)/(2 pi)^2 + Gamma(-2, 2 pi)(2 pi)^2
        let x = 2.0 * std::f64::consts::PI;
        let g2 = (1.0 + x) * (-x).exp();
        let gm2 = crate::specfun::gamma_upper(-2.0, Complex64::new(x, 0.0), BranchAngle::Principal).unwrap().value.re;
        let want = g2 / (x * x) + gm2 * x * x;
        assert!((v.re - want).abs() < 1e-14 * want.abs());
    }

    #[test]
    fn pochhammer_edge() {
        assert_eq!(pochhammer(-3, 0, 64), 1);
        assert_eq!(pochhammer(-3, 2, 64), 6);
    }
}
