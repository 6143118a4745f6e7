//! Finite quadratic modules, their Weil representation, and the passage
//! between vector-valued forms and plus-space scalar forms.

use crate::error::{Error, Result};
use crate::qseries::{QSeries, Q};
use num_complex::Complex64;
use num_integer::Integer;
use num_rational::Ratio;
use num_traits::Zero;
use serde::{Deserialize, Serialize};
use std::f64::consts::PI;

pub type R64 = Ratio<i64>;

/// e(x) = exp(2 pi i x).
pub fn e(x: f64) -> Complex64 {
    Complex64::from_polar(1.0, 2.0 * PI * x)
}

fn frac(x: R64) -> R64 {
    x - x.floor()
}

fn r_to_f64(x: R64) -> f64 {
    *x.numer() as f64 / *x.denom() as f64
}

/// A cyclic factor Z/n with Q(x g) = x^2 q mod 1.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CyclicFactor {
    pub order: i64,
    /// Q of the generator as "p/q".
    pub q: String,
}

#[derive(Clone, Debug, PartialEq)]
pub struct FiniteQuadraticModule {
    orders: Vec<i64>,
    gens: Vec<R64>,
    elements: Vec<Vec<i64>>,
    qvals: Vec<R64>,
    signature: i64,
    level: i64,
}

impl FiniteQuadraticModule {
    /// Orthogonal sum of cyclic factors.
    pub fn new(factors: &[(i64, R64)]) -> Result<Self> {
        for (n, q) in factors {
            if *n < 1 {
                return Err(Error::Degenerate(format!("cyclic order {n}")));
            }
            let nn = R64::from_integer(*n);
            if !(nn * nn * *q).is_integer() || !(nn * 2 * *q).is_integer() {
                return Err(Error::Degenerate(format!("Q = {q} is not well defined on Z/{n}")));
            }
        }
        let orders: Vec<i64> = factors.iter().map(|f| f.0).collect();
        let gens: Vec<R64> = factors.iter().map(|f| frac(f.1)).collect();
        let mut elements = vec![vec![]];
        for n in &orders {
            let mut next = Vec::new();
            for e in &elements {
                for x in 0..*n {
                    let mut v = e.clone();
                    v.push(x);
                    next.push(v);
                }
            }
            elements = next;
        }
        let qvals: Vec<R64> = elements.iter().map(|x| q_of(&gens, x)).collect();
        let mut m = FiniteQuadraticModule { orders, gens, elements, qvals, signature: 0, level: 1 };
        m.check_nondegenerate()?;
        m.level = m.compute_level();
        m.signature = m.compute_signature()?;
        Ok(m)
    }

    /// Parses factors given as (order, "p/q").
    pub fn from_factors(factors: &[CyclicFactor]) -> Result<Self> {
        let mut f = Vec::new();
        for c in factors {
            let q: R64 = c.q.trim().parse().map_err(|_| Error::Param(format!("bad rational {}", c.q)))?;
            f.push((c.order, q));
        }
        FiniteQuadraticModule::new(&f)
    }

    /// Z/2Z with Q(x) = x^2/4, the module of the weight-3/2 application.
    pub fn z2_quarter() -> Self {
        FiniteQuadraticModule::new(&[(2, R64::new(1, 4))]).expect("valid module")
    }

    pub fn trivial() -> Self {
        FiniteQuadraticModule::new(&[]).expect("valid module")
    }

    pub fn size(&self) -> usize {
        self.elements.len()
    }

    pub fn elements(&self) -> &[Vec<i64>] {
        &self.elements
    }

    pub fn q(&self, i: usize) -> R64 {
        self.qvals[i]
    }

    /// (x, y) = Q(x + y) - Q(x) - Q(y) mod 1.
    pub fn bilinear(&self, i: usize, j: usize) -> R64 {
        let s: Vec<i64> = self.elements[i]
            .iter()
            .zip(&self.elements[j])
            .zip(&self.orders)
            .map(|((a, b), n)| (a + b).rem_euclid(*n))
            .collect();
        frac(q_of(&self.gens, &s) - self.qvals[i] - self.qvals[j])
    }

    pub fn signature(&self) -> i64 {
        self.signature
    }

    pub fn level(&self) -> i64 {
        self.level
    }

    fn check_nondegenerate(&self) -> Result<()> {
        for i in 1..self.size() {
            if (0..self.size()).all(|j| self.bilinear(i, j).is_zero()) {
                return Err(Error::Degenerate(format!("element {:?} is in the radical", self.elements[i])));
            }
        }
        Ok(())
    }

    fn compute_level(&self) -> i64 {
        self.qvals.iter().fold(1i64, |acc, q| acc.lcm(q.denom()))
    }

    fn compute_signature(&self) -> Result<i64> {
        let g: Complex64 = self.qvals.iter().map(|q| e(r_to_f64(*q))).sum::<Complex64>() / (self.size() as f64).sqrt();
        let ang = g.arg() / (2.0 * PI) * 8.0;
        let s = ang.round();
        if (ang - s).abs() > 1e-9 || (g.norm() - 1.0).abs() > 1e-9 {
            return Err(Error::Degenerate(format!("Gauss sum {g} is not an eighth root of unity")));
        }
        Ok((s as i64).rem_euclid(8))
    }

    /// Normalized Gauss sum |A|^{-1/2} sum e(Q(a)).
    pub fn gauss_sum(&self) -> Complex64 {
        self.qvals.iter().map(|q| e(r_to_f64(*q))).sum::<Complex64>() / (self.size() as f64).sqrt()
    }

    /// Index of the element -x.
    pub fn neg(&self, i: usize) -> usize {
        let t: Vec<i64> = self.elements[i].iter().zip(&self.orders).map(|(a, n)| (-a).rem_euclid(*n)).collect();
        self.elements.iter().position(|x| *x == t).expect("closed under negation")
    }
}

fn q_of(gens: &[R64], x: &[i64]) -> R64 {
    let mut s = R64::zero();
    for (g, a) in gens.iter().zip(x) {
        s += *g * (a * a);
    }
    frac(s)
}

pub type Matrix = Vec<Vec<Complex64>>;

/// rho(T) and rho(S) on the standard basis (columns are images of e_a).
pub fn rho_matrices(m: &FiniteQuadraticModule, dual: bool) -> (Matrix, Matrix) {
    let n = m.size();
    let mut t = vec![vec![Complex64::new(0.0, 0.0); n]; n];
    let mut s = vec![vec![Complex64::new(0.0, 0.0); n]; n];
    let pre = e(-(m.signature() as f64) / 8.0) / (n as f64).sqrt();
    for a in 0..n {
        t[a][a] = e(r_to_f64(m.q(a)));
        for b in 0..n {
            s[b][a] = pre * e(-r_to_f64(m.bilinear(a, b)));
        }
    }
    if dual {
        for row in t.iter_mut().chain(s.iter_mut()) {
            for v in row.iter_mut() {
                *v = v.conj();
            }
        }
    }
    (t, s)
}

pub fn mat_mul(a: &Matrix, b: &Matrix) -> Matrix {
    let n = a.len();
    let mut c = vec![vec![Complex64::new(0.0, 0.0); n]; n];
    for i in 0..n {
        for k in 0..n {
            for j in 0..n {
                c[i][j] += a[i][k] * b[k][j];
            }
        }
    }
    c
}

pub fn identity(n: usize) -> Matrix {
    (0..n).map(|i| (0..n).map(|j| Complex64::new(if i == j { 1.0 } else { 0.0 }, 0.0)).collect()).collect()
}

pub fn adjoint(a: &Matrix) -> Matrix {
    let n = a.len();
    (0..n).map(|i| (0..n).map(|j| a[j][i].conj()).collect()).collect()
}

/// Largest entrywise deviation.
pub fn max_dev(a: &Matrix, b: &Matrix) -> f64 {
    a.iter().flatten().zip(b.iter().flatten()).map(|(x, y)| (x - y).norm()).fold(0.0, f64::max)
}

pub fn mat_pow(a: &Matrix, e: u32) -> Matrix {
    let mut r = identity(a.len());
    for _ in 0..e {
        r = mat_mul(&r, a);
    }
    r
}

/// Smallest N with rho(T)^N = I.
pub fn t_order(m: &FiniteQuadraticModule, dual: bool) -> i64 {
    let (t, _) = rho_matrices(m, dual);
    let id = identity(m.size());
    let mut p = t.clone();
    for n in 1..=10000i64 {
        if max_dev(&p, &id) < 1e-12 {
            return n;
        }
        p = mat_mul(&p, &t);
    }
    0
}

/// Vector-valued q-series on the grid 1/N with N the level.
#[derive(Clone, Debug, PartialEq)]
pub struct VectorForm {
    pub module: FiniteQuadraticModule,
    pub components: Vec<QSeries>,
    pub weight2: i64,
    pub dual: bool,
}

impl VectorForm {
    pub fn new(module: FiniteQuadraticModule, components: Vec<QSeries>, weight2: i64, dual: bool) -> Result<Self> {
        if components.len() != module.size() {
            return Err(Error::ModuleMismatch);
        }
        let n = module.level();
        for (i, c) in components.iter().enumerate() {
            if c.denom() as i64 != n {
                return Err(Error::GridMismatch(c.denom(), n as u32));
            }
            let q = module.q(i);
            let target = if dual { frac(-q) } else { q };
            for (e, _) in c.terms() {
                if !frac(R64::new(e, n) - target).is_zero() {
                    return Err(Error::Param(format!("exponent {e}/{n} violates the support of component {i}")));
                }
            }
        }
        Ok(VectorForm { module, components, weight2, dual })
    }

    pub fn zero(module: FiniteQuadraticModule, order: i64, weight2: i64, dual: bool) -> Self {
        let n = module.level() as u32;
        let components = (0..module.size()).map(|_| QSeries::zero(n, order, weight2)).collect();
        VectorForm { module, components, weight2, dual }
    }

    pub fn weight(&self) -> f64 {
        self.weight2 as f64 / 2.0
    }
}

/// F(tau) = sum_a F_a(N tau): component exponents n/N become integer exponents n.
pub fn scalarize(f: &VectorForm) -> Result<QSeries> {
    let n = f.module.level() as u32;
    let order = f.components.iter().map(|c| c.order()).min().unwrap_or(1);
    let mut terms: Vec<(i64, Q)> = Vec::new();
    for c in &f.components {
        if c.denom() != n {
            return Err(Error::GridMismatch(c.denom(), n));
        }
        for (e, v) in c.terms() {
            if e < order {
                terms.push((e, v.clone()));
            }
        }
    }
    Ok(QSeries::from_terms(1, &terms, order, f.weight2)?.with_label("scalarized"))
}

/// Inverse of `scalarize` for Z/2Z with Q = x^2/4: exponents n go to the
/// component whose class matches n/4 mod 1.
pub fn vectorize_plus(g: &QSeries, dual: bool) -> Result<VectorForm> {
    let m = FiniteQuadraticModule::z2_quarter();
    let mut parts: Vec<Vec<(i64, Q)>> = vec![Vec::new(), Vec::new()];
    for (e, v) in g.terms() {
        let r = e.rem_euclid(4);
        let idx = match (r, dual) {
            (0, _) => 0,
            (1, false) | (3, true) => 1,
            _ => return Err(Error::Param(format!("exponent {e} outside the plus space"))),
        };
        parts[idx].push((e, v.clone()));
    }
    let comps = parts
        .iter()
        .map(|p| QSeries::from_terms(4, p, g.order(), g.weight2()))
        .collect::<Result<Vec<_>>>()?;
    VectorForm::new(m, comps, g.weight2(), dual)
}

/// Hermitian form on the coefficient vectors sum_a v_a conj(w_a).
pub fn dot(v: &[Complex64], w: &[Complex64]) -> Complex64 {
    v.iter().zip(w).map(|(a, b)| a * b.conj()).sum()
}
