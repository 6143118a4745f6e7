//! Complex arithmetic over MPFR floats.
//!
//! The system MPFR has no complex companion library available, so the few
//! operations the extended-precision paths need are written out here.

use num_complex::Complex64;
use rug::float::Constant;
use rug::ops::Pow;
use rug::Float;
use std::ops::{Add, Div, Mul, Neg, Sub};

/// Working precision (bits) of the extended mode.
pub const EXTENDED_PREC: u32 = 192;
/// Precision used internally by the standard (f64-facing) API.
pub const STANDARD_PREC: u32 = 128;

pub fn pi(prec: u32) -> Float {
    Float::with_val(prec, Constant::Pi)
}

pub fn euler(prec: u32) -> Float {
    Float::with_val(prec, Constant::Euler)
}

pub fn fl(prec: u32, x: f64) -> Float {
    Float::with_val(prec, x)
}

#[derive(Clone, Debug, PartialEq)]
pub struct MpC {
    pub re: Float,
    pub im: Float,
}

impl MpC {
    pub fn new(re: Float, im: Float) -> Self {
        MpC { re, im }
    }

    pub fn zero(prec: u32) -> Self {
        MpC::new(Float::new(prec), Float::new(prec))
    }

    pub fn one(prec: u32) -> Self {
        MpC::from_f64(prec, 1.0, 0.0)
    }

    pub fn i(prec: u32) -> Self {
        MpC::from_f64(prec, 0.0, 1.0)
    }

    pub fn from_f64(prec: u32, re: f64, im: f64) -> Self {
        MpC::new(Float::with_val(prec, re), Float::with_val(prec, im))
    }

    pub fn from_c64(prec: u32, z: Complex64) -> Self {
        MpC::from_f64(prec, z.re, z.im)
    }

    pub fn from_real(x: Float) -> Self {
        let p = x.prec();
        MpC::new(x, Float::new(p))
    }

    pub fn prec(&self) -> u32 {
        self.re.prec().max(self.im.prec())
    }

    pub fn with_prec(&self, prec: u32) -> Self {
        MpC::new(Float::with_val(prec, &self.re), Float::with_val(prec, &self.im))
    }

    pub fn to_c64(&self) -> Complex64 {
        Complex64::new(self.re.to_f64(), self.im.to_f64())
    }

    pub fn conj(&self) -> Self {
        MpC::new(self.re.clone(), Float::with_val(self.im.prec(), -&self.im))
    }

    pub fn is_zero(&self) -> bool {
        self.re.is_zero() && self.im.is_zero()
    }

    pub fn is_finite(&self) -> bool {
        self.re.is_finite() && self.im.is_finite()
    }

    pub fn abs(&self) -> Float {
        let p = self.prec();
        Float::with_val(p, self.re.hypot_ref(&self.im))
    }

    pub fn norm_sqr(&self) -> Float {
        let p = self.prec();
        Float::with_val(p, self.re.square_ref()) + Float::with_val(p, self.im.square_ref())
    }

    /// Argument in (-pi, pi]; a signed zero imaginary part on the negative
    /// axis is read as the upper side.
    pub fn arg(&self) -> Float {
        let p = self.prec();
        if self.im.is_zero() {
            if self.re.is_sign_negative() && !self.re.is_zero() {
                return pi(p);
            }
            return Float::new(p);
        }
        Float::with_val(p, self.im.atan2_ref(&self.re))
    }

    pub fn scale(&self, x: &Float) -> Self {
        let p = self.prec();
        MpC::new(Float::with_val(p, &self.re * x), Float::with_val(p, &self.im * x))
    }

    pub fn scale_f64(&self, x: f64) -> Self {
        MpC::new(self.re.clone() * x, self.im.clone() * x)
    }

    /// Division by an unsigned integer (exact before rounding).
    pub fn div_u(&self, n: u32) -> Self {
        MpC::new(self.re.clone() / n, self.im.clone() / n)
    }

    /// Multiplication by an integer.
    pub fn mul_i32(&self, n: i32) -> Self {
        MpC::new(self.re.clone() * n, self.im.clone() * n)
    }

    pub fn mul_i(&self) -> Self {
        MpC::new(Float::with_val(self.im.prec(), -&self.im), self.re.clone())
    }

    pub fn recip(&self) -> Self {
        let n = self.norm_sqr();
        let p = self.prec();
        MpC::new(
            Float::with_val(p, &self.re / &n),
            Float::with_val(p, -Float::with_val(p, &self.im / &n)),
        )
    }

    pub fn exp(&self) -> Self {
        let p = self.prec();
        let m = Float::with_val(p, self.re.exp_ref());
        let (s, c) = self.im.clone().sin_cos(Float::new(p));
        MpC::new(Float::with_val(p, &m * &c), m * s)
    }

    /// Principal logarithm, arg in (-pi, pi].
    pub fn ln(&self) -> Self {
        let p = self.prec();
        MpC::new(self.abs().ln(), self.arg()).with_prec(p)
    }

    /// Logarithm with a shifted argument: arg(z) + 2 pi j.
    pub fn ln_sheet(&self, j: i32) -> Self {
        let mut l = self.ln();
        if j != 0 {
            let p = self.prec();
            l.im += pi(p) * (2 * j);
        }
        l
    }

    pub fn sqrt(&self) -> Self {
        (self.ln().scale_f64(0.5)).exp()
    }

    pub fn powi(&self, n: i64) -> Self {
        if n == 0 {
            return MpC::one(self.prec());
        }
        let mut base = if n < 0 { self.recip() } else { self.clone() };
        let mut e = n.unsigned_abs();
        let mut acc = MpC::one(self.prec());
        while e > 0 {
            if e & 1 == 1 {
                acc = &acc * &base;
            }
            e >>= 1;
            if e > 0 {
                base = &base * &base;
            }
        }
        acc
    }

    /// z^w on the principal sheet.
    pub fn pow(&self, w: &MpC) -> Self {
        (w * &self.ln()).exp()
    }

    /// z^r for real r using arg(z) + 2 pi j.
    pub fn pow_real_sheet(&self, r: &Float, j: i32) -> Self {
        self.ln_sheet(j).scale(r).exp()
    }

    pub fn add_real(&self, x: &Float) -> Self {
        MpC::new(Float::with_val(self.prec(), &self.re + x), self.im.clone())
    }
}

fn add(a: &MpC, b: &MpC) -> MpC {
    let p = a.prec().max(b.prec());
    MpC::new(Float::with_val(p, &a.re + &b.re), Float::with_val(p, &a.im + &b.im))
}

fn sub(a: &MpC, b: &MpC) -> MpC {
    let p = a.prec().max(b.prec());
    MpC::new(Float::with_val(p, &a.re - &b.re), Float::with_val(p, &a.im - &b.im))
}

fn mul(a: &MpC, b: &MpC) -> MpC {
    let p = a.prec().max(b.prec());
    let rr = Float::with_val(p, &a.re * &b.re);
    let ii = Float::with_val(p, &a.im * &b.im);
    let ri = Float::with_val(p, &a.re * &b.im);
    let ir = Float::with_val(p, &a.im * &b.re);
    MpC::new(rr - ii, ri + ir)
}

fn div(a: &MpC, b: &MpC) -> MpC {
    mul(a, &b.recip())
}

macro_rules! binop {
    ($tr:ident, $m:ident, $f:ident) => {
        impl $tr<&MpC> for &MpC {
            type Output = MpC;
            fn $m(self, o: &MpC) -> MpC {
                $f(self, o)
            }
        }
        impl $tr<MpC> for MpC {
            type Output = MpC;
            fn $m(self, o: MpC) -> MpC {
                $f(&self, &o)
            }
        }
        impl $tr<&MpC> for MpC {
            type Output = MpC;
            fn $m(self, o: &MpC) -> MpC {
                $f(&self, o)
            }
        }
        impl $tr<MpC> for &MpC {
            type Output = MpC;
            fn $m(self, o: MpC) -> MpC {
                $f(self, &o)
            }
        }
    };
}

binop!(Add, add, add);
binop!(Sub, sub, sub);
binop!(Mul, mul, mul);
binop!(Div, div, div);

impl Neg for MpC {
    type Output = MpC;
    fn neg(self) -> MpC {
        MpC::new(-self.re, -self.im)
    }
}

impl Neg for &MpC {
    type Output = MpC;
    fn neg(self) -> MpC {
        MpC::new(Float::with_val(self.re.prec(), -&self.re), Float::with_val(self.im.prec(), -&self.im))
    }
}

/// Gamma function of a real argument.
pub fn gamma_real(x: &Float) -> Float {
    Float::with_val(x.prec(), x.gamma_ref())
}

/// Integer power of a real float.
pub fn powi_real(x: &Float, n: i32) -> Float {
    Float::with_val(x.prec(), x.pow(n))
}

/// i^n for integer n.
pub fn i_pow(prec: u32, n: i64) -> MpC {
    match n.rem_euclid(4) {
        0 => MpC::from_f64(prec, 1.0, 0.0),
        1 => MpC::from_f64(prec, 0.0, 1.0),
        2 => MpC::from_f64(prec, -1.0, 0.0),
        _ => MpC::from_f64(prec, 0.0, -1.0),
    }
}

/// Relative distance |a - b| / max(|b|, tiny) in f64.
pub fn rel_dist(a: &MpC, b: &MpC) -> f64 {
    let d = (a - b).abs().to_f64();
    let s = b.abs().to_f64();
    if s == 0.0 {
        d
    } else {
        d / s
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn negative_axis_is_upper_side() {
        let z = MpC::from_f64(128, -2.0, -0.0);
        let l = z.ln();
        assert!((l.im.to_f64() - std::f64::consts::PI).abs() < 1e-15);
        assert!((l.re.to_f64() - 2f64.ln()).abs() < 1e-15);
    }

    #[test]
    fn exp_ln_roundtrip() {
        let z = MpC::from_f64(160, 0.3, -1.7);
        let w = z.ln().exp();
        assert!((&w - &z).abs().to_f64() < 1e-40);
    }

    #[test]
    fn powi_matches_repeated_product() {
        let z = MpC::from_f64(128, 1.1, 0.4);
        let p = z.powi(5);
        let q = &(&(&(&z * &z) * &z) * &z) * &z;
        assert!((&p - &q).abs().to_f64() < 1e-30);
        let r = z.powi(-3) * z.powi(3);
        assert!((&r - &MpC::one(128)).abs().to_f64() < 1e-35);
    }

    #[test]
    fn sheet_shift_flips_sqrt() {
        let z = MpC::from_f64(128, -1.0, 0.5);
        let half = Float::with_val(128, 0.5);
        let a = z.pow_real_sheet(&half, 0);
        let b = z.pow_real_sheet(&half, 1);
        assert!((&a + &b).abs().to_f64() < 1e-35);
    }
}
