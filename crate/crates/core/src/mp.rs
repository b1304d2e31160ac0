//! Thin multiprecision layer over `astro-float`: a precision context plus a
//! complex pair. Every operation rounds at the context precision.

use crate::error::NumericError;
use astro_float::{BigFloat, Consts, Radix, RoundingMode};
use num::bigint::BigInt;
use num::BigRational;
use std::cell::RefCell;

pub struct MpCtx {
    prec: usize,
    rm: RoundingMode,
    cc: RefCell<Consts>,
}

#[derive(Clone, Debug)]
pub struct MpComplex {
    pub re: BigFloat,
    pub im: BigFloat,
}

impl MpCtx {
    pub fn new(prec_bits: usize) -> Result<Self, NumericError> {
        if !(64..=8192).contains(&prec_bits) {
            return Err(NumericError::UnsupportedPrecision(prec_bits));
        }
        Ok(MpCtx {
            prec: prec_bits,
            rm: RoundingMode::ToEven,
            cc: RefCell::new(Consts::new().expect("constants cache")),
        })
    }

    pub fn prec(&self) -> usize {
        self.prec
    }

    pub fn zero(&self) -> BigFloat {
        BigFloat::from_i8(0, self.prec)
    }

    pub fn one(&self) -> BigFloat {
        BigFloat::from_i8(1, self.prec)
    }

    pub fn from_f64(&self, v: f64) -> BigFloat {
        BigFloat::from_f64(v, self.prec)
    }

    pub fn from_i64(&self, v: i64) -> BigFloat {
        BigFloat::from_i64(v, self.prec)
    }

    pub fn from_bigint(&self, v: &BigInt) -> BigFloat {
        let bits = v.bits() as usize + 32;
        let p = self.prec.max(bits);
        BigFloat::parse(
            &v.to_string(),
            Radix::Dec,
            p,
            self.rm,
            &mut self.cc.borrow_mut(),
        )
    }

    pub fn from_rational(&self, q: &BigRational) -> BigFloat {
        let num = self.from_bigint(q.numer());
        let den = self.from_bigint(q.denom());
        num.div(&den, self.prec, self.rm)
    }

    pub fn add(&self, a: &BigFloat, b: &BigFloat) -> BigFloat {
        a.add(b, self.prec, self.rm)
    }

    pub fn sub(&self, a: &BigFloat, b: &BigFloat) -> BigFloat {
        a.sub(b, self.prec, self.rm)
    }

    pub fn mul(&self, a: &BigFloat, b: &BigFloat) -> BigFloat {
        a.mul(b, self.prec, self.rm)
    }

    pub fn div(&self, a: &BigFloat, b: &BigFloat) -> BigFloat {
        a.div(b, self.prec, self.rm)
    }

    pub fn neg(&self, a: &BigFloat) -> BigFloat {
        a.neg()
    }

    pub fn abs(&self, a: &BigFloat) -> BigFloat {
        a.abs()
    }

    pub fn sqrt(&self, a: &BigFloat) -> BigFloat {
        a.sqrt(self.prec, self.rm)
    }

    pub fn ln(&self, a: &BigFloat) -> BigFloat {
        a.ln(self.prec, self.rm, &mut self.cc.borrow_mut())
    }

    pub fn exp(&self, a: &BigFloat) -> BigFloat {
        a.exp(self.prec, self.rm, &mut self.cc.borrow_mut())
    }

    pub fn pow(&self, base: &BigFloat, e: &BigFloat) -> BigFloat {
        base.pow(e, self.prec, self.rm, &mut self.cc.borrow_mut())
    }

    pub fn pi(&self) -> BigFloat {
        self.cc.borrow_mut().pi(self.prec, self.rm)
    }

    /// Integer power by repeated squaring; exact exponent handling for the
    /// (n + delta)^k factors in symbolic evaluation.
    pub fn pow_u(&self, base: &BigFloat, mut e: u32) -> BigFloat {
        let mut acc = self.one();
        let mut b = base.clone();
        while e > 0 {
            if e & 1 == 1 {
                acc = self.mul(&acc, &b);
            }
            e >>= 1;
            if e > 0 {
                b = self.mul(&b, &b);
            }
        }
        acc
    }

    /// k^alpha for integer k >= 1 and f64 alpha (exact in binary).
    pub fn int_pow_alpha(&self, k: u32, alpha: f64) -> BigFloat {
        if alpha == 0.0 {
            return self.one();
        }
        let base = self.from_i64(k as i64);
        if k == 1 {
            return self.one();
        }
        self.pow(&base, &self.from_f64(alpha))
    }

    pub fn to_f64(&self, v: &BigFloat) -> f64 {
        if v.is_nan() {
            return f64::NAN;
        }
        if v.is_inf_pos() {
            return f64::INFINITY;
        }
        if v.is_inf_neg() {
            return f64::NEG_INFINITY;
        }
        format!("{v}").parse::<f64>().unwrap_or(f64::NAN)
    }

    pub fn is_zero(&self, v: &BigFloat) -> bool {
        v.is_zero()
    }

    /// -1, 0, 1 comparison; NaN compares as equal (never produced here).
    pub fn cmp(&self, a: &BigFloat, b: &BigFloat) -> std::cmp::Ordering {
        match a.cmp(b) {
            Some(s) if s < 0 => std::cmp::Ordering::Less,
            Some(s) if s > 0 => std::cmp::Ordering::Greater,
            _ => std::cmp::Ordering::Equal,
        }
    }

    pub fn lt(&self, a: &BigFloat, b: &BigFloat) -> bool {
        self.cmp(a, b) == std::cmp::Ordering::Less
    }

    // complex helpers

    pub fn c(&self, re: BigFloat, im: BigFloat) -> MpComplex {
        MpComplex { re, im }
    }

    pub fn c_zero(&self) -> MpComplex {
        self.c(self.zero(), self.zero())
    }

    pub fn c_real(&self, re: BigFloat) -> MpComplex {
        self.c(re, self.zero())
    }

    pub fn c_from_c64(&self, v: nalgebra::Complex<f64>) -> MpComplex {
        self.c(self.from_f64(v.re), self.from_f64(v.im))
    }

    pub fn c_to_c64(&self, v: &MpComplex) -> nalgebra::Complex<f64> {
        nalgebra::Complex::new(self.to_f64(&v.re), self.to_f64(&v.im))
    }

    pub fn c_add(&self, a: &MpComplex, b: &MpComplex) -> MpComplex {
        self.c(self.add(&a.re, &b.re), self.add(&a.im, &b.im))
    }

    pub fn c_sub(&self, a: &MpComplex, b: &MpComplex) -> MpComplex {
        self.c(self.sub(&a.re, &b.re), self.sub(&a.im, &b.im))
    }

    pub fn c_mul(&self, a: &MpComplex, b: &MpComplex) -> MpComplex {
        let re = self.sub(&self.mul(&a.re, &b.re), &self.mul(&a.im, &b.im));
        let im = self.add(&self.mul(&a.re, &b.im), &self.mul(&a.im, &b.re));
        self.c(re, im)
    }

    pub fn c_div(&self, a: &MpComplex, b: &MpComplex) -> MpComplex {
        let d = self.add(&self.mul(&b.re, &b.re), &self.mul(&b.im, &b.im));
        let re = self.add(&self.mul(&a.re, &b.re), &self.mul(&a.im, &b.im));
        let im = self.sub(&self.mul(&a.im, &b.re), &self.mul(&a.re, &b.im));
        self.c(self.div(&re, &d), self.div(&im, &d))
    }

    pub fn c_neg(&self, a: &MpComplex) -> MpComplex {
        self.c(a.re.neg(), a.im.neg())
    }

    pub fn c_scale(&self, a: &MpComplex, s: &BigFloat) -> MpComplex {
        self.c(self.mul(&a.re, s), self.mul(&a.im, s))
    }

    pub fn c_abs_sq(&self, a: &MpComplex) -> BigFloat {
        self.add(&self.mul(&a.re, &a.re), &self.mul(&a.im, &a.im))
    }

    pub fn c_abs(&self, a: &MpComplex) -> BigFloat {
        self.sqrt(&self.c_abs_sq(a))
    }

    pub fn c_is_zero(&self, a: &MpComplex) -> bool {
        a.re.is_zero() && a.im.is_zero()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::poly::rat;

    #[test]
    fn rational_conversion_exact() {
        let ctx = MpCtx::new(128).unwrap();
        let v = ctx.from_rational(&rat(1, 4));
        assert_eq!(ctx.to_f64(&v), 0.25);
    }

    #[test]
    fn big_integer_roundtrip() {
        let ctx = MpCtx::new(192).unwrap();
        let q = rat(121191, 262144);
        let v = ctx.from_rational(&q);
        assert!((ctx.to_f64(&v) - 121191.0 / 262144.0).abs() < 1e-16);
    }

    #[test]
    fn pow_matches_sqrt() {
        let ctx = MpCtx::new(256).unwrap();
        let five = ctx.from_i64(5);
        let a = ctx.pow(&five, &ctx.from_f64(0.5));
        let b = ctx.sqrt(&five);
        let d = ctx.to_f64(&ctx.abs(&ctx.sub(&a, &b)));
        assert!(d < 1e-70, "pow/sqrt disagree by {d}");
    }

    #[test]
    fn complex_division() {
        let ctx = MpCtx::new(128).unwrap();
        let a = ctx.c_from_c64(nalgebra::Complex::new(1.0, 2.0));
        let b = ctx.c_from_c64(nalgebra::Complex::new(3.0, -1.0));
        let q = ctx.c_div(&a, &b);
        let back = ctx.c_mul(&q, &b);
        let err = ctx.to_f64(&ctx.c_abs(&ctx.c_sub(&back, &a)));
        assert!(err < 1e-30);
    }

    #[test]
    fn precision_guard() {
        assert!(MpCtx::new(32).is_err());
    }
}
