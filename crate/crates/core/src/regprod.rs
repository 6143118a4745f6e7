//! The regularized inner product: the semi-analytic evaluator (route B)
//! for scalar and vector-valued forms, the coefficient pairing with a
//! harmonic preimage (route C), branch bookkeeping, and reports.
//!
//! Route B splits the standard fundamental domain at v = 1.  Below that
//! line the integrand is bounded and is integrated numerically; above it
//! every Fourier mode integrates in closed form:
//!   int_1^inf e^{-4 pi n v} v^{k-2} dv = E_{2-k}(4 pi n),
//! read as Re E_{2-k}(-4 pi n) for n < 0 and as 1/(1-k) for n = 0 (nothing
//! for k = 1).

use crate::error::{Error, Result};
use crate::mp::{MpC, STANDARD_PREC};
use crate::qseries::{q_to_f64, Evaluator, QSeries, Q};
use crate::quad;
use crate::specfun::{mp_exp_integral, BranchAngle};
use crate::weil::{FiniteQuadraticModule, VectorForm};
use num_complex::Complex64;
use num_traits::{Signed, Zero};
use serde::{Deserialize, Serialize};
use std::collections::BTreeMap;
use std::f64::consts::PI;

/// Factor between the scalar plus-space product and the vector-valued one.
pub const PLUS_SPACE_FACTOR: f64 = 1.5;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RouteValue {
    pub re: f64,
    pub im: f64,
    pub err: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ProductReport {
    pub value: Complex64Json,
    pub routes: BTreeMap<String, RouteValue>,
    pub parameters: BTreeMap<String, serde_json::Value>,
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Complex64Json {
    pub re: f64,
    pub im: f64,
}

impl From<Complex64> for Complex64Json {
    fn from(z: Complex64) -> Self {
        Complex64Json { re: z.re, im: z.im }
    }
}

impl ProductReport {
    pub fn new(value: Complex64) -> Self {
        ProductReport { value: value.into(), routes: BTreeMap::new(), parameters: BTreeMap::new() }
    }

    pub fn value(&self) -> Complex64 {
        Complex64::new(self.value.re, self.value.im)
    }

    pub fn add_route(&mut self, name: &str, v: Complex64, err: f64) {
        self.routes.insert(name.to_string(), RouteValue { re: v.re, im: v.im, err });
    }

    pub fn param(&mut self, key: &str, v: impl Serialize) {
        self.parameters.insert(key.to_string(), serde_json::to_value(v).expect("serializable"));
    }

    /// Largest pairwise relative deviation between the real parts of the routes.
    pub fn max_pairwise_dev(&self) -> f64 {
        let v: Vec<f64> = self.routes.values().map(|r| r.re).collect();
        let mut m = 0.0f64;
        for i in 0..v.len() {
            for j in i + 1..v.len() {
                m = m.max((v[i] - v[j]).abs() / v[j].abs().max(f64::MIN_POSITIVE));
            }
        }
        m
    }
}

/// Quadrature and truncation settings for route B.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RouteBSettings {
    /// Absolute tolerance of the truncated-domain integral.
    pub tol: f64,
    /// Gauss-Legendre points per panel.
    pub nodes: usize,
}

impl Default for RouteBSettings {
    fn default() -> Self {
        RouteBSettings { tol: 1e-10, nodes: 12 }
    }
}

/// Result of route B: value, error estimate, and the split into parts.
#[derive(Clone, Debug, PartialEq)]
pub struct RouteB {
    pub value: Complex64,
    pub err: f64,
    pub truncated_integral: Complex64,
    pub mode_terms: Complex64,
}

/// Coefficient-product data shared by the scalar and vector paths.
struct Pair<'a> {
    f: Vec<&'a QSeries>,
    g: Vec<&'a QSeries>,
    weight2: i64,
}

impl Pair<'_> {
    fn k(&self) -> f64 {
        self.weight2 as f64 / 2.0
    }

    /// int over {|u| <= 1/2, |tau| >= 1, v <= 1} of sum_a f_a conj(g_a) v^{k-2}.
    fn truncated_integral(&self, s: &RouteBSettings) -> Result<(Complex64, f64)> {
        let ef: Vec<Evaluator> = self.f.iter().map(|x| Evaluator::new(x)).collect();
        let eg: Vec<Evaluator> = self.g.iter().map(|x| Evaluator::new(x)).collect();
        let km2 = self.k() - 2.0;
        let same = std::ptr::eq(self.f[0], self.g[0]) && self.f.len() == self.g.len();
        let integrand = |u: f64, v: f64| {
            let tau = Complex64::new(u, v);
            let mut acc = Complex64::new(0.0, 0.0);
            for (a, b) in ef.iter().zip(&eg) {
                let x = a.eval(tau);
                if same {
                    acc += x.norm_sqr();
                } else {
                    acc += x * b.eval(tau).conj();
                }
            }
            acc * v.powf(km2)
        };
        let mut inner_err = 0.0;
        let mut fail = None;
        let (val, outer_err) = quad::adaptive(
            |u| {
                let lo = (1.0 - u * u).sqrt();
                match quad::adaptive(|v| integrand(u, v), lo, 1.0, s.tol, s.nodes) {
                    Ok((x, e)) => {
                        inner_err = f64::max(inner_err, e);
                        x
                    }
                    Err(e) => {
                        fail = Some(e);
                        Complex64::new(0.0, 0.0)
                    }
                }
            },
            -0.5,
            0.5,
            s.tol,
            s.nodes,
        )?;
        if let Some(e) = fail {
            return Err(e);
        }
        Ok((val, outer_err + inner_err))
    }

    /// Closed-form contributions of the region v >= 1, with the negative
    /// modes on `branch` (the principal choice yields the real part only).
    fn mode_terms(&self, branch: Option<BranchAngle>) -> Result<(Complex64, f64)> {
        let k2 = self.weight2;
        let r2 = 4 - k2;
        let mut total = Complex64::new(0.0, 0.0);
        let mut err = 0.0;
        for (fa, ga) in self.f.iter().zip(&self.g) {
            let n_den = fa.denom() as f64;
            let order = fa.order().min(ga.order());
            let mut last_pos = 0.0f64;
            let mut running = 0.0f64;
            for (n, c) in fa.terms() {
                if n >= order {
                    break;
                }
                let Some(d) = ga.coeff(n) else { continue };
                if d.is_zero() || c.is_zero() {
                    continue;
                }
                let prod = q_to_f64(&(c * &d));
                let x = 4.0 * PI * n as f64 / n_den;
                let term = if n == 0 {
                    if k2 == 2 {
                        Complex64::new(0.0, 0.0)
                    } else {
                        Complex64::new(prod / (1.0 - self.k()), 0.0)
                    }
                } else {
                    let z = MpC::from_f64(STANDARD_PREC, x, 0.0);
                    let e = match (n < 0, branch) {
                        (true, None) => {
                            let e = mp_exp_integral(r2, &z, BranchAngle::Principal, STANDARD_PREC)?.to_c64();
                            Complex64::new(e.re, 0.0)
                        }
                        (true, Some(b)) => mp_exp_integral(r2, &z, b, STANDARD_PREC)?.to_c64(),
                        (false, _) => mp_exp_integral(r2, &z, BranchAngle::Principal, STANDARD_PREC)?.to_c64(),
                    };
                    e * prod
                };
                if n > 0 {
                    last_pos = term.norm();
                }
                running += term.norm();
                total += term;
            }
            // the last retained positive mode bounds the neglected ones
            err += 4.0 * last_pos + 8.0 * f64::EPSILON * running;
            if last_pos > 1e-12 * running.max(1.0) {
                return Err(Error::OrderTooSmall { have: order, need: 2 * order });
            }
        }
        Ok((total, err))
    }
}

fn check_pair(f: &QSeries, g: &QSeries) -> Result<()> {
    if f.weight2() != g.weight2() {
        return Err(Error::Param(format!("weights {} and {} differ", f.weight(), g.weight())));
    }
    if f.denom() != g.denom() {
        return Err(Error::GridMismatch(f.denom(), g.denom()));
    }
    Ok(())
}

fn route_b(p: &Pair, s: &RouteBSettings) -> Result<RouteB> {
    let (ti, e1) = p.truncated_integral(s)?;
    let (mt, e2) = p.mode_terms(None)?;
    Ok(RouteB { value: ti + mt, err: e1 + e2, truncated_integral: ti, mode_terms: mt })
}

/// Route B for level-one scalar forms of equal weight.
pub fn product_route_b_scalar(f: &QSeries, g: &QSeries, s: &RouteBSettings) -> Result<RouteB> {
    check_pair(f, g)?;
    if f.denom() != 1 {
        return Err(Error::Param("scalar route needs level-one series; use the vector route".into()));
    }
    route_b(&Pair { f: vec![f], g: vec![g], weight2: f.weight2() }, s)
}

/// Route B for vector-valued forms: sum_a F_a conj(G_a).
pub fn product_route_b_vector(f: &VectorForm, g: &VectorForm, s: &RouteBSettings) -> Result<RouteB> {
    if f.module != g.module || f.dual != g.dual {
        return Err(Error::ModuleMismatch);
    }
    if f.weight2 != g.weight2 {
        return Err(Error::Param("weights differ".into()));
    }
    for (a, b) in f.components.iter().zip(&g.components) {
        check_pair(a, b)?;
    }
    let pair = Pair { f: f.components.iter().collect(), g: g.components.iter().collect(), weight2: f.weight2 };
    if f.components.iter().zip(&g.components).all(|(a, b)| a.is_zero() || b.is_zero()) {
        return Ok(RouteB { value: Complex64::new(0.0, 0.0), err: 0.0, truncated_integral: Complex64::new(0.0, 0.0), mode_terms: Complex64::new(0.0, 0.0) });
    }
    route_b(&pair, s)
}

/// <f, g>_phi: the constant term with the negative modes on the ray of
/// angle phi, minus i sum c_f(-n) conj(c_g(-n)) Im E_{2-k,phi}(-4 pi n).
pub fn branch_value(f: &QSeries, g: &QSeries, phi: f64, s: &RouteBSettings) -> Result<Complex64> {
    check_pair(f, g)?;
    let b = BranchAngle::ray(phi)?;
    let p = Pair { f: vec![f], g: vec![g], weight2: f.weight2() };
    let (ti, _) = p.truncated_integral(s)?;
    let (ct, _) = p.mode_terms(Some(b))?;
    let mut correction = 0.0;
    for (n, c) in f.principal_part() {
        let Some(d) = g.coeff(n) else { continue };
        let z = MpC::from_f64(STANDARD_PREC, 4.0 * PI * n as f64 / f.denom() as f64, 0.0);
        let e = mp_exp_integral(4 - f.weight2(), &z, b, STANDARD_PREC)?.to_c64();
        correction += q_to_f64(&(c * d)) * e.im;
    }
    Ok(ti + ct - Complex64::new(0.0, correction))
}

/// Coefficients of the holomorphic part of a harmonic preimage, keyed by
/// (component, exponent).
pub type HarmonicPlus = BTreeMap<(usize, Q), Complex64>;

/// Route C: {f, G} = sum_n c_f(n) c_G^+(-n), component by component.
pub fn product_route_c(f: &VectorForm, g_plus: &HarmonicPlus) -> Result<Complex64> {
    let mut total = Complex64::new(0.0, 0.0);
    for (a, comp) in f.components.iter().enumerate() {
        let den = comp.denom() as i64;
        for (n, c) in comp.terms() {
            if c.is_zero() {
                continue;
            }
            let e = Q::new(n.into(), den.into());
            match g_plus.get(&(a, -e.clone())) {
                Some(v) => total += *v * q_to_f64(c),
                None if n < 0 => return Err(Error::Coverage(n)),
                None => {}
            }
        }
    }
    for ((a, e), v) in g_plus {
        if e.is_negative() && !v.is_zero() {
            let comp = f.components.get(*a).ok_or(Error::ModuleMismatch)?;
            let den = Q::from_integer(comp.denom().into());
            let m = -(e * den);
            if !m.is_integer() || m.to_integer() >= comp.order().into() {
                return Err(Error::Coverage(m.to_integer().try_into().unwrap_or(i64::MAX)));
            }
        }
    }
    Ok(total)
}

/// A scalar level-one series as a form for the trivial module.
pub fn as_vector(f: &QSeries) -> VectorForm {
    VectorForm { module: FiniteQuadraticModule::trivial(), components: vec![f.clone()], weight2: f.weight2(), dual: false }
}
