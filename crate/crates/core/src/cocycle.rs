//! The nonholomorphic Eichler integral G_f, the error of modularity F_S,
//! period relations, and the Eichler cocycle, as numeric evaluators.
//!
//! Conventions: f has even weight k <= 0 and level one, the multiplier is
//! trivial, and (h|_{2-k} M)(tau) = (c tau + d)^{k-2} h(M tau).  Because the
//! coefficients are rational, f^c(z) = conj(f(-conj z)) has the same
//! coefficients as f.

use crate::error::{Error, Result};
use crate::mp::{MpC, STANDARD_PREC};
use crate::qseries::{q_to_f64, Evaluator, QSeries};
use crate::quad;
use crate::sl2::{reduce, Sl2};
use crate::specfun::{mp_exp_integral, mp_w_complex, mp_w_real, BranchAngle};
use num_complex::Complex64;
use rug::Float;
use serde::{Deserialize, Serialize};
use std::f64::consts::PI;

pub use crate::sl2::{Gen, Sl2 as GroupElement};

type C = Complex64;

fn ci(re: f64, im: f64) -> C {
    C::new(re, im)
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CocycleSettings {
    /// Height where vertical integrals switch to the constant-term tail.
    pub height: f64,
    /// Absolute quadrature tolerance.
    pub tol: f64,
}

impl Default for CocycleSettings {
    fn default() -> Self {
        CocycleSettings { height: 10.0, tol: 1e-13 }
    }
}

pub struct CocycleEvaluator {
    k: i64,
    /// f_o^c: exponents >= 0, evaluated directly.
    holo: Evaluator,
    /// The full series, evaluated after reduction.
    full: Evaluator,
    c0: f64,
    /// (n, c(-n)) for n > 0.
    principal: Vec<(i64, f64)>,
    s: CocycleSettings,
}

impl CocycleEvaluator {
    pub fn new(f: &QSeries, s: CocycleSettings) -> Result<Self> {
        let k2 = f.weight2();
        if k2 > 0 || k2 % 4 != 0 || f.denom() != 1 {
            return Err(Error::Param("need a level-one form of even weight k <= 0".into()));
        }
        Ok(CocycleEvaluator {
            k: k2 / 2,
            holo: Evaluator::new(f).from_exponent(0),
            full: Evaluator::new(f),
            c0: f.coeff(0).map(|c| q_to_f64(&c)).unwrap_or(0.0),
            principal: f.principal_part().into_iter().map(|(n, c)| (-n, q_to_f64(&c))).collect(),
            s,
        })
    }

    pub fn k(&self) -> i64 {
        self.k
    }

    /// f(tau) anywhere in the half-plane via reduction.
    pub fn f(&self, tau: C) -> Result<C> {
        let (z, m) = reduce(tau)?;
        Ok(self.full.eval(z) * m.j(tau).powi(-self.k as i32))
    }

    pub fn f_c(&self, z: C) -> Result<C> {
        Ok(self.f(-z.conj())?.conj())
    }

    /// Low in the half-plane the direct series cancels badly, so f^c is
    /// taken through reduction and the principal part removed.
    fn f_o_c(&self, z: C) -> C {
        if z.im >= 1.0 {
            return self.holo.eval_c(z);
        }
        let mut v = self.f_c(z).unwrap_or(C::new(f64::NAN, f64::NAN));
        for &(n, c) in &self.principal {
            v -= c * (-C::i() * 2.0 * PI * n as f64 * z).exp();
        }
        v
    }

    /// int_{a + i y0}^{a + i inf} f_o^c(z) kernel(z) dz for a kernel that
    /// behaves like `tail(z)` = antiderivative of c(0) kernel at infinity.
    fn vertical<K: Fn(C) -> C, T: Fn(C) -> C>(&self, a: f64, y0: f64, kernel: K, tail_anti: T) -> Result<C> {
        let top = y0.max(1.0) + self.s.height;
        let mut breaks = vec![y0];
        let mut b = y0 + 0.5;
        while b < top {
            breaks.push(b);
            b = y0 + 2.0 * (b - y0);
        }
        breaks.push(top);
        let mut total = C::new(0.0, 0.0);
        for w in breaks.windows(2) {
            let (v, _) = quad::adaptive(|t| self.f_o_c(ci(a, t)) * kernel(ci(a, t)) * C::i(), w[0], w[1], self.s.tol, 16)?;
            total += v;
        }
        // c(0) part above the cut-off in closed form; the rest decays like e^{-2 pi top}
        Ok(total - tail_anti(ci(a, top)) * self.c0)
    }

    /// G_f(tau) = -(2i)^{1-k} int_{-conj tau}^{i inf} f_o^c(z)(z+tau)^{k-2} dz
    ///          - (-4 pi)^{1-k} sum_n c(-n)/n^{k-1} W_{2-k}(2 pi n v) q^n.
    pub fn g_f(&self, tau: C) -> Result<C> {
        let k = self.k as i32;
        let km1 = (k - 1) as f64;
        let integral = self.vertical(-tau.re, tau.im, |z| (z + tau).powi(k - 2), |z| (z + tau).powi(k - 1) / km1)?;
        let mut v = -ci(0.0, 2.0).powi(1 - k) * integral;
        for &(n, c) in &self.principal {
            let x = Float::with_val(STANDARD_PREC, 2.0 * PI * n as f64 * tau.im);
            let w = mp_w_real(2 * (2 - self.k), &x, STANDARD_PREC)?.to_c64();
            let q = (C::i() * 2.0 * PI * n as f64 * tau).exp();
            v -= (-4.0 * PI).powi(1 - k) * c / (n as f64).powi(k - 1) * w * q;
        }
        Ok(v)
    }

    fn w_c(&self, z: C) -> Result<C> {
        Ok(mp_w_complex(2 * (2 - self.k), &MpC::from_c64(STANDARD_PREC, z), STANDARD_PREC)?.to_c64())
    }

    /// Closed formula for the error of modularity F_S = F^+|(S - I).
    pub fn f_s(&self, tau: C) -> Result<C> {
        if tau.re == 0.0 {
            return Err(Error::CutCollision(format!("F_S on the imaginary axis at {tau}")));
        }
        let k = self.k as i32;
        let km1 = (k - 1) as f64;
        let tk = tau.powi(k - 2);
        let integral = self.vertical(
            0.0,
            1.0,
            |z| (z + tau).powi(k - 2) - (z - 1.0 / tau).powi(k - 2) * tk,
            |z| ((z + tau).powi(k - 1) - (z - 1.0 / tau).powi(k - 1) * tk) / km1,
        )?;
        let mut v = -ci(0.0, 2.0).powi(1 - k) * integral;
        for &(n, c) in &self.principal {
            let nf = n as f64;
            let a = (C::i() * 2.0 * PI * nf * tau).exp() * self.w_c(-C::i() * PI * nf * (tau + C::i()))?;
            let b = tk * (-C::i() * 2.0 * PI * nf / tau).exp() * self.w_c(-C::i() * PI * nf * (C::i() - 1.0 / tau))?;
            v -= (-4.0 * PI).powi(1 - k) * c / nf.powi(k - 1) * (a - b);
        }
        Ok(v)
    }

    /// (h|_{2-k} M)(tau).
    pub fn slash<H: Fn(C) -> Result<C>>(&self, h: H, m: &Sl2, tau: C) -> Result<C> {
        Ok(m.j(tau).powi(self.k as i32 - 2) * h(m.act(tau))?)
    }

    /// Straight-line integral of f^c(z)(z + tau)^{k-2} from za to zb.
    fn line(&self, za: C, zb: C, tau: C) -> Result<C> {
        let k = self.k as i32;
        let dz = zb - za;
        let mut fail = None;
        let (v, _) = quad::adaptive(
            |t| {
                let z = za + dz * t;
                match self.f_c(z) {
                    Ok(x) => x * (z + tau).powi(k - 2),
                    Err(e) => {
                        fail = Some(e);
                        C::new(0.0, 0.0)
                    }
                }
            },
            0.0,
            1.0,
            self.s.tol,
            16,
        )?;
        if let Some(e) = fail {
            return Err(e);
        }
        Ok(v * dz)
    }

    /// Both sides of the explicit relation between G_f, the integral from i
    /// to -conj(tau), and the E_{2-k} expansion (u > 0).
    pub fn eichler_relation(&self, tau: C) -> Result<(C, C)> {
        if tau.re <= 0.0 {
            return Err(Error::Domain("the relation needs Re tau > 0".into()));
        }
        let k = self.k as i32;
        let km1 = (k - 1) as f64;
        let g2k = (1..=1 - self.k).fold(1.0, |a, i| a * i as f64);
        let mut lhs = -ci(0.0, 2.0).powi(k - 1) * self.g_f(tau)? + self.line(C::i(), -tau.conj(), tau)?;
        let phase = (C::i() * 1.5 * PI * km1).exp();
        let mut rhs = self.vertical(0.0, 1.0, |z| (z + tau).powi(k - 2), |z| (z + tau).powi(k - 1) / km1)?;
        for &(n, c) in &self.principal {
            let nf = n as f64;
            let q = (C::i() * 2.0 * PI * nf * tau).exp();
            lhs -= phase * PI * C::i() / g2k * c / (-2.0 * PI * nf).powi(k - 1) * q;
            let e = self.e_expansion(2.0 * PI * nf * (C::i() * tau - 1.0))?;
            rhs += c * C::i().powi(k - 1) * q * (1.0 - C::i() * tau).powi(k - 1) * e;
        }
        Ok((lhs, rhs))
    }

    /// E_{2-k}(w) on the positive-axis branch, written through E_1:
    /// e^{-w}/Gamma(2-k) sum_{l=0}^{m-1} Gamma(1-k-l)(-w)^l + (-w)^m/Gamma(2-k) E_1(w), m = 1-k.
    pub fn e_expansion(&self, w: C) -> Result<C> {
        let m = 1 - self.k;
        let fact = |n: i64| (1..=n).fold(1.0, |a, i| a * i as f64);
        let g2k = fact(1 - self.k);
        let mut sum = C::new(0.0, 0.0);
        for l in 0..m {
            sum += (-w).powi(l as i32) * fact(-self.k - l);
        }
        let e1 = mp_exp_integral(2, &MpC::from_c64(STANDARD_PREC, w), BranchAngle::PositiveAxis, STANDARD_PREC)?.to_c64();
        Ok((-w).exp() * sum / g2k + (-w).powi(m as i32) / g2k * e1)
    }

    /// The same function from the direct E_{2-k} evaluation.
    pub fn e_direct(&self, w: C) -> Result<C> {
        Ok(mp_exp_integral(2 * (2 - self.k), &MpC::from_c64(STANDARD_PREC, w), BranchAngle::PositiveAxis, STANDARD_PREC)?
            .to_c64())
    }

    /// |2i v^{2-k} conj(d G_f / d conj tau) - f(tau)| by finite differences.
    pub fn xi_residual(&self, tau: C, h: f64) -> Result<f64> {
        let d = self.dbar(|z| self.g_f(z), tau, h)?;
        let xi = C::new(0.0, 2.0) * tau.im.powi(2 - self.k as i32) * d.conj();
        Ok((xi - self.f(tau)?).norm())
    }

    /// |d F_S / d conj tau| by finite differences.
    pub fn holomorphy_residual(&self, tau: C, h: f64) -> Result<f64> {
        Ok(self.dbar(|z| self.f_s(z), tau, h)?.norm())
    }

    fn dbar<H: Fn(C) -> Result<C>>(&self, g: H, tau: C, h: f64) -> Result<C> {
        // fourth-order central stencil
        let diff = |e: C| -> Result<C> {
            Ok((g(tau - e * 2.0)? - g(tau + e * 2.0)? + (g(tau + e)? - g(tau - e)?) * 8.0) / (12.0 * h))
        };
        let du = diff(C::new(h, 0.0))?;
        let dv = diff(C::new(0.0, h))?;
        Ok((du + C::i() * dv) * 0.5)
    }

    /// Formal sum sum_j a_j M_j acting by the slash.
    pub fn slash_sum<H: Fn(C) -> Result<C>>(&self, h: H, terms: &[(f64, Sl2)], tau: C) -> Result<C> {
        let mut v = C::new(0.0, 0.0);
        for (a, m) in terms {
            v += self.slash(&h, m, tau)? * *a;
        }
        Ok(v)
    }

    /// E(M)(tau) = (-1)^{1-k} int_{-conj(M^{-1} tau0)}^{-conj tau0} f^c(z)(z+tau)^{k-2} dz.
    pub fn eichler_cocycle(&self, m: &Sl2, tau: C, tau0: C) -> Result<C> {
        let za = -m.inverse().act(tau0).conj();
        let zb = -tau0.conj();
        if (za - zb).norm() == 0.0 {
            return Ok(C::new(0.0, 0.0));
        }
        Ok(self.line(za, zb, tau)? * (-1.0f64).powi(1 - self.k as i32))
    }

    /// a(tau) = (-1)^{1-k} int_{-conj tau0}^{-conj tau1} f^c(z)(z+tau)^{k-2} dz.
    pub fn connecting(&self, tau0: C, tau1: C, tau: C) -> Result<C> {
        Ok(self.line(-tau0.conj(), -tau1.conj(), tau)? * (-1.0f64).powi(1 - self.k as i32))
    }
}

/// Residuals of the period relations at a sample of points.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct PeriodResiduals {
    pub s_plus_i: f64,
    pub u2_u_i: f64,
}

pub fn period_residuals(ev: &CocycleEvaluator, points: &[C]) -> Result<PeriodResiduals> {
    let u2 = Sl2::U.mul(&Sl2::U);
    let mut r = PeriodResiduals { s_plus_i: 0.0, u2_u_i: 0.0 };
    let fs = |z| ev.f_s(z);
    for &tau in points {
        let a = ev.slash_sum(fs, &[(1.0, Sl2::S), (1.0, Sl2::I)], tau)?;
        let b = ev.slash_sum(fs, &[(1.0, u2), (1.0, Sl2::U), (1.0, Sl2::I)], tau)?;
        r.s_plus_i = r.s_plus_i.max(a.norm());
        r.u2_u_i = r.u2_u_i.max(b.norm());
    }
    Ok(r)
}

/// Residual table for one sample point.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct PointResiduals {
    pub re: f64,
    pub im: f64,
    /// |F_S - (-(G_f|(S - I)))|.
    pub fs_vs_slash: f64,
    pub period_s: f64,
    pub period_u: f64,
    /// phi(ST) - phi(S)|T - phi(T) with phi(M) = -G_f|(M - I).
    pub cocycle_st: f64,
    /// Explicit G_f relation; only for Re tau > 0.
    pub eichler_relation: Option<f64>,
    /// Eichler cocycle law for (S, T) with base point 2i.
    pub eichler_law: f64,
    /// Base point 2i -> 3i for E(S), against the connecting coboundary.
    pub coboundary: f64,
    pub xi: f64,
    pub holomorphy: f64,
}

/// Central-difference step for the xi and holomorphy probes.
pub const FD_STEP: f64 = 2.5e-4;

pub fn check_point(ev: &CocycleEvaluator, tau: C) -> Result<PointResiduals> {
    let fs = ev.f_s(tau)?;
    let g = |z| ev.g_f(z);
    let minus_slash = -(ev.slash(g, &Sl2::S, tau)? - ev.g_f(tau)?);
    let pr = period_residuals(ev, &[tau])?;
    let st = Sl2::S.mul(&Sl2::T);
    let phi_st = -(ev.slash(g, &st, tau)? - ev.g_f(tau)?);
    let cocycle_st = (phi_st - ev.f_s(tau + 1.0)?).norm();
    let eichler_relation = if tau.re > 0.0 {
        let (l, r) = ev.eichler_relation(tau)?;
        Some((l - r).norm())
    } else {
        None
    };
    let tau0 = C::new(0.0, 2.0);
    let lhs = ev.eichler_cocycle(&st, tau, tau0)?;
    let rhs = ev.slash(|z| ev.eichler_cocycle(&Sl2::S, z, tau0), &Sl2::T, tau)? + ev.eichler_cocycle(&Sl2::T, tau, tau0)?;
    let tau1 = C::new(0.0, 3.0);
    let shift = ev.eichler_cocycle(&Sl2::S, tau, tau1)? - ev.eichler_cocycle(&Sl2::S, tau, tau0)?;
    let cob = ev.slash_sum(|z| ev.connecting(tau0, tau1, z), &[(1.0, Sl2::S), (-1.0, Sl2::I)], tau)?;
    Ok(PointResiduals {
        re: tau.re,
        im: tau.im,
        fs_vs_slash: (fs - minus_slash).norm(),
        period_s: pr.s_plus_i,
        period_u: pr.u2_u_i,
        cocycle_st,
        eichler_relation,
        eichler_law: (lhs - rhs).norm(),
        coboundary: (shift + cob).norm(),
        xi: ev.xi_residual(tau, FD_STEP)?,
        holomorphy: ev.holomorphy_residual(tau, FD_STEP)?,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::qseries::faber_basis;

    #[test]
    fn identity_cocycle_vanishes() {
        let f = faber_basis(1, 40).unwrap();
        let ev = CocycleEvaluator::new(&f, CocycleSettings::default()).unwrap();
        let v = ev.eichler_cocycle(&Sl2::I, C::new(0.3, 1.4), C::new(0.0, 2.0)).unwrap();
        assert_eq!(v, C::new(0.0, 0.0));
    }

    #[test]
    fn imaginary_axis_rejected() {
        let f = faber_basis(1, 40).unwrap();
        let ev = CocycleEvaluator::new(&f, CocycleSettings::default()).unwrap();
        assert!(matches!(ev.f_s(C::new(0.0, 1.2)), Err(Error::CutCollision(_))));
    }
}
