//! SL_2(Z): elements, their action on the upper half-plane, words in the
//! generators, and reduction into the standard fundamental domain.

use crate::error::{Error, Result};
use crate::mp::MpC;
use num_complex::Complex64;
use serde::{Deserialize, Serialize};
use std::fmt;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Sl2 {
    pub a: i64,
    pub b: i64,
    pub c: i64,
    pub d: i64,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Gen {
    S,
    T,
    TInv,
}

impl Sl2 {
    pub fn new(a: i64, b: i64, c: i64, d: i64) -> Result<Self> {
        if a * d - b * c != 1 {
            return Err(Error::Param(format!("[{a} {b}; {c} {d}] has determinant {}", a * d - b * c)));
        }
        Ok(Sl2 { a, b, c, d })
    }

    pub const I: Sl2 = Sl2 { a: 1, b: 0, c: 0, d: 1 };
    pub const S: Sl2 = Sl2 { a: 0, b: -1, c: 1, d: 0 };
    pub const T: Sl2 = Sl2 { a: 1, b: 1, c: 0, d: 1 };
    /// U = T S.
    pub const U: Sl2 = Sl2 { a: 1, b: -1, c: 1, d: 0 };

    pub fn t_pow(n: i64) -> Self {
        Sl2 { a: 1, b: n, c: 0, d: 1 }
    }

    pub fn mul(&self, o: &Sl2) -> Sl2 {
        Sl2 {
            a: self.a * o.a + self.b * o.c,
            b: self.a * o.b + self.b * o.d,
            c: self.c * o.a + self.d * o.c,
            d: self.c * o.b + self.d * o.d,
        }
    }

    pub fn inverse(&self) -> Sl2 {
        Sl2 { a: self.d, b: -self.b, c: -self.c, d: self.a }
    }

    pub fn neg(&self) -> Sl2 {
        Sl2 { a: -self.a, b: -self.b, c: -self.c, d: -self.d }
    }

    pub fn pow(&self, n: u32) -> Sl2 {
        (0..n).fold(Sl2::I, |acc, _| acc.mul(self))
    }

    pub fn act(&self, tau: Complex64) -> Complex64 {
        (tau * self.a as f64 + self.b as f64) / (tau * self.c as f64 + self.d as f64)
    }

    /// c tau + d.
    pub fn j(&self, tau: Complex64) -> Complex64 {
        tau * self.c as f64 + self.d as f64
    }

    pub fn act_mp(&self, tau: &MpC) -> MpC {
        let num = tau.mul_i32(self.a as i32).add_real(&rug::Float::with_val(tau.prec(), self.b));
        num / self.j_mp(tau)
    }

    pub fn j_mp(&self, tau: &MpC) -> MpC {
        tau.mul_i32(self.c as i32).add_real(&rug::Float::with_val(tau.prec(), self.d))
    }

    /// Word in S, T, T^{-1} whose product is +-self (the sign is dropped,
    /// since -I acts trivially on the half-plane).
    pub fn word(&self) -> Vec<Gen> {
        // Left-multiply by T^{-n} and S until c = 0; record the inverses.
        let mut m = *self;
        let mut w: Vec<Gen> = Vec::new();
        while m.c != 0 {
            let n = m.a.div_euclid(m.c);
            if n != 0 {
                m = Sl2::t_pow(-n).mul(&m);
                let g = if n > 0 { Gen::T } else { Gen::TInv };
                w.extend(std::iter::repeat(g).take(n.unsigned_abs() as usize));
            }
            if m.c != 0 {
                m = Sl2::S.inverse().mul(&m);
                w.push(Gen::S);
            }
        }
        let n = m.b * m.a; // m = +-T^{b/a}
        let g = if n > 0 { Gen::T } else { Gen::TInv };
        w.extend(std::iter::repeat(g).take(n.unsigned_abs() as usize));
        w
    }

    pub fn from_word(w: &[Gen]) -> Sl2 {
        w.iter().fold(Sl2::I, |acc, g| {
            acc.mul(match g {
                Gen::S => &Sl2::S,
                Gen::T => &Sl2::T,
                Gen::TInv => &Sl2 { a: 1, b: -1, c: 0, d: 1 },
            })
        })
    }

    pub fn equal_projectively(&self, o: &Sl2) -> bool {
        self == o || self.neg() == *o
    }
}

impl fmt::Display for Sl2 {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{} {}; {} {}]", self.a, self.b, self.c, self.d)
    }
}

/// Maps tau into {|u| <= 1/2, |tau| >= 1}; returns (M tau, M).
pub fn reduce(tau: Complex64) -> Result<(Complex64, Sl2)> {
    if tau.im <= 0.0 || !tau.is_finite() {
        return Err(Error::Domain(format!("{tau} is not in the upper half-plane")));
    }
    let mut z = tau;
    let mut m = Sl2::I;
    for _ in 0..10_000 {
        let n = z.re.round();
        if n != 0.0 {
            z -= n;
            m = Sl2::t_pow(-(n as i64)).mul(&m);
        }
        if z.norm_sqr() < 1.0 - 1e-15 {
            z = -1.0 / z;
            m = Sl2::S.mul(&m);
        } else {
            return Ok((z, m));
        }
    }
    Err(Error::Domain(format!("reduction of {tau} did not terminate")))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn relations() {
        let s2 = Sl2::S.mul(&Sl2::S);
        assert_eq!(s2, Sl2::I.neg());
        assert_eq!(Sl2::U.pow(3), Sl2::I.neg());
        assert_eq!(Sl2::T.mul(&Sl2::S), Sl2::U);
    }

    #[test]
    fn words_multiply_back() {
        for m in [Sl2::new(5, 2, 7, 3).unwrap(), Sl2::new(-3, 1, -7, 2).unwrap(), Sl2::S, Sl2::t_pow(-4)] {
            let w = m.word();
            assert!(Sl2::from_word(&w).equal_projectively(&m), "{m} -> {w:?}");
        }
    }

    #[test]
    fn reduction_lands_in_domain() {
        let tau = Complex64::new(0.31, 0.004);
        let (z, m) = reduce(tau).unwrap();
        assert!(z.re.abs() <= 0.5 + 1e-12 && z.norm() >= 1.0 - 1e-12);
        assert!((m.act(tau) - z).norm() < 1e-9);
    }
}
