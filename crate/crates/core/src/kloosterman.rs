//! Kloosterman sums and the Kloosterman-Bessel series for the inner
//! products of the weight-zero basis (route A).
//!
//! The per-c terms are computed independently (in parallel when a pool is
//! available) and then summed in increasing c, so results do not depend on
//! the thread count.

use crate::error::{Error, Result};
use crate::specfun::bessel_f;
use num_integer::Integer;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use std::f64::consts::PI;
use strength_reduce::StrengthReducedU64;

/// Default truncation of the series.
pub const DEFAULT_CMAX: u32 = 100_000;

/// K(m, n; c) = sum over units d mod c of cos(2 pi (m d + n d') / c).
pub fn kloosterman_sum(m: i64, n: i64, c: u64) -> Result<f64> {
    if c == 0 {
        return Err(Error::Param("c must be positive".into()));
    }
    let ci = c as i64;
    let (mr, nr) = (m.rem_euclid(ci) as u64, n.rem_euclid(ci) as u64);
    let mut s = 0.0;
    for d in 0..c {
        let g = (d as i64).extended_gcd(&ci);
        if g.gcd != 1 {
            continue;
        }
        let dbar = g.x.rem_euclid(ci) as u64;
        let r = ((mr as u128 * d as u128 + nr as u128 * dbar as u128) % c as u128) as f64;
        s += (2.0 * PI * r / c as f64).cos();
    }
    Ok(s)
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SeriesEstimate {
    pub value: f64,
    pub c_max: u32,
    pub tail_estimate: f64,
    pub partial_sums: Option<Vec<f64>>,
}

/// Raw partial sums S(c) = sum_{c' <= c} K(m,n;c')/c' F(4 pi sqrt(mn)/c')
/// for several (m, n) at once; `sums[p][c-1]` belongs to `pairs[p]`.
#[derive(Clone, Debug)]
pub struct PartialSums {
    pub pairs: Vec<(u32, u32)>,
    pub sums: Vec<Vec<f64>>,
}

fn smallest_prime_factors(n: usize) -> Vec<u32> {
    let mut spf = vec![0u32; n + 1];
    for i in 2..=n {
        if spf[i] == 0 {
            let mut j = i;
            while j <= n {
                if spf[j] == 0 {
                    spf[j] = i as u32;
                }
                j += i;
            }
        }
    }
    spf
}

#[derive(Default)]
struct Scratch {
    unit: Vec<bool>,
    ds: Vec<u64>,
    prefix: Vec<u64>,
    inv: Vec<u64>,
    lo: Vec<(f64, f64)>,
    hi: Vec<(f64, f64)>,
}

/// K(m,n;c) for every requested pair at one modulus.
fn sums_at(c: u64, pairs: &[(u32, u32)], spf: &[u32], sc: &mut Scratch) -> Vec<f64> {
    if c <= 2 {
        return pairs.iter().map(|&(m, n)| kloosterman_sum(m as i64, n as i64, c).expect("c > 0")).collect();
    }
    // units d < c/2; d and c - d give equal terms
    let h = ((c - 1) / 2) as usize;
    sc.unit.clear();
    sc.unit.resize(h + 1, true);
    sc.unit[0] = false;
    let mut rest = c as usize;
    while rest > 1 {
        let p = spf[rest] as usize;
        while rest % p == 0 {
            rest /= p;
        }
        let mut j = p;
        while j <= h {
            sc.unit[j] = false;
            j += p;
        }
    }
    sc.ds.clear();
    sc.ds.extend((1..=h).filter(|&d| sc.unit[d]).map(|d| d as u64));
    let red = StrengthReducedU64::new(c);
    sc.prefix.clear();
    let mut acc = 1u64;
    for &d in &sc.ds {
        acc = (acc * d) % red;
        sc.prefix.push(acc);
    }
    let g = (acc as i64).extended_gcd(&(c as i64));
    let mut inv_acc = g.x.rem_euclid(c as i64) as u64;
    sc.inv.clear();
    sc.inv.resize(sc.ds.len(), 0);
    for i in (0..sc.ds.len()).rev() {
        let before = if i == 0 { 1 } else { sc.prefix[i - 1] };
        sc.inv[i] = (inv_acc * before) % red;
        inv_acc = (inv_acc * sc.ds[i]) % red;
    }
    // e(r/c) = e(jB/c) e(i/c) with r = jB + i
    let b = ((c as f64).sqrt().ceil() as u64).max(1);
    let w = 2.0 * PI / c as f64;
    sc.lo.clear();
    sc.lo.extend((0..b).map(|i| {
        let (s, co) = (w * i as f64).sin_cos();
        (co, s)
    }));
    sc.hi.clear();
    sc.hi.extend((0..=c / b).map(|j| {
        let (s, co) = (w * (j * b) as f64).sin_cos();
        (co, s)
    }));
    let bred = StrengthReducedU64::new(b);
    pairs
        .iter()
        .map(|&(m, n)| {
            let (m, n) = (m as u64 % c, n as u64 % c);
            let mut s = 0.0;
            for (d, dbar) in sc.ds.iter().zip(&sc.inv) {
                let r = (m * d + n * dbar) % red;
                let (j, i) = StrengthReducedU64::div_rem(r, bred);
                let (ch, sh) = sc.hi[j as usize];
                let (cl, sl) = sc.lo[i as usize];
                s += ch * cl - sh * sl;
            }
            2.0 * s
        })
        .collect()
}

/// Computes the partial sums up to `c_max` for all pairs in one pass.
pub fn partial_sums(pairs: &[(u32, u32)], c_max: u32) -> Result<PartialSums> {
    if c_max < 1 {
        return Err(Error::Param("c_max must be at least 1".into()));
    }
    if pairs.iter().any(|&(m, n)| m == 0 || n == 0) {
        return Err(Error::Param("m and n must be positive".into()));
    }
    let spf = smallest_prime_factors(c_max as usize);
    let ks: Vec<Vec<f64>> = (1..=c_max as u64)
        .into_par_iter()
        .map_init(Scratch::default, |sc, c| sums_at(c, pairs, &spf, sc))
        .collect();
    let mut sums = vec![Vec::with_capacity(c_max as usize); pairs.len()];
    for (p, &(m, n)) in pairs.iter().enumerate() {
        let x0 = 4.0 * PI * ((m as f64) * (n as f64)).sqrt();
        let mut s = 0.0;
        for (i, k) in ks.iter().enumerate() {
            let c = (i + 1) as f64;
            s += k[p] / c * bessel_f(x0 / c)?.value.re;
            sums[p].push(s);
        }
    }
    Ok(PartialSums { pairs: pairs.to_vec(), sums })
}

impl PartialSums {
    /// Block-smoothed estimate of the raw series truncated at `c_max`:
    /// blocks of floor(sqrt(c_max)) terms, mean and standard deviation of
    /// the last ten block-end partial sums.
    pub fn smoothed(&self, pair: usize, c_max: u32) -> Result<SeriesEstimate> {
        let s = &self.sums[pair];
        if c_max as usize > s.len() || c_max == 0 {
            return Err(Error::Param(format!("c_max {c_max} exceeds the computed range {}", s.len())));
        }
        let b = ((c_max as f64).sqrt().floor() as usize).max(1);
        let ends: Vec<f64> = (1..=c_max as usize / b).map(|j| s[j * b - 1]).collect();
        let last = &ends[ends.len().saturating_sub(10)..];
        let mean = last.iter().sum::<f64>() / last.len() as f64;
        let var = if last.len() > 1 {
            last.iter().map(|x| (x - mean).powi(2)).sum::<f64>() / (last.len() - 1) as f64
        } else {
            mean * mean
        };
        Ok(SeriesEstimate { value: mean, c_max, tail_estimate: var.sqrt(), partial_sums: Some(ends) })
    }

    fn scaled(&self, pair: usize, c_max: u32, factor: f64) -> Result<SeriesEstimate> {
        let mut e = self.smoothed(pair, c_max)?;
        e.value *= factor;
        e.tail_estimate *= factor.abs();
        if let Some(p) = e.partial_sums.as_mut() {
            p.iter_mut().for_each(|x| *x *= factor);
        }
        Ok(e)
    }

    /// L_{m,n} = 2 pi sqrt(mn) sum_c K(m,n;c)/c F(4 pi sqrt(mn)/c).
    pub fn dit_coefficient(&self, pair: usize, c_max: u32) -> Result<SeriesEstimate> {
        let (m, n) = self.pairs[pair];
        self.scaled(pair, c_max, 2.0 * PI * ((m as f64) * (n as f64)).sqrt())
    }

    /// The inner product <f_m, f_n> = -4 pi L_{m,n}.
    pub fn product(&self, pair: usize, c_max: u32) -> Result<SeriesEstimate> {
        let (m, n) = self.pairs[pair];
        self.scaled(pair, c_max, -8.0 * PI * PI * ((m as f64) * (n as f64)).sqrt())
    }
}

pub fn dit_coefficient(m: u32, n: u32, c_max: u32) -> Result<SeriesEstimate> {
    partial_sums(&[(m, n)], c_max)?.dit_coefficient(0, c_max)
}

pub fn product_route_a(m: u32, n: u32, c_max: u32) -> Result<SeriesEstimate> {
    partial_sums(&[(m, n)], c_max)?.product(0, c_max)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn small_sums() {
        assert_eq!(kloosterman_sum(1, 1, 1).unwrap(), 1.0);
        assert!((kloosterman_sum(1, 1, 2).unwrap() - 1.0).abs() < 1e-12);
        assert!((kloosterman_sum(1, 1, 3).unwrap() + 1.0).abs() < 1e-12);
    }

    #[test]
    fn batched_matches_direct() {
        let spf = smallest_prime_factors(400);
        let mut sc = Scratch::default();
        let pairs = [(1, 1), (1, 2), (2, 2), (3, 7)];
        for c in 1..400u64 {
            let b = sums_at(c, &pairs, &spf, &mut sc);
            for (k, &(m, n)) in b.iter().zip(&pairs) {
                let d = kloosterman_sum(m as i64, n as i64, c).unwrap();
                assert!((k - d).abs() < 1e-9, "c = {c}");
            }
        }
    }
}
