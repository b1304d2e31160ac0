//! Rational functions in a single formal variable, kept fully reduced with a
//! monic denominator.

use super::poly::RatPoly;
use crate::error::AlgebraError;
use num::{BigRational, Zero};
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

#[derive(Clone, PartialEq, Eq)]
pub struct RationalFunction {
    num: RatPoly,
    den: RatPoly,
}

impl RationalFunction {
    /// Builds `num/den`, reducing by the gcd and scaling the denominator monic.
    pub fn new(num: RatPoly, den: RatPoly) -> Result<Self, AlgebraError> {
        if den.is_zero() {
            return Err(AlgebraError::DivisionByZeroPoly);
        }
        Ok(Self::reduced(num, den))
    }

    fn reduced(num: RatPoly, den: RatPoly) -> Self {
        if num.is_zero() {
            return RationalFunction {
                num: RatPoly::zero(),
                den: RatPoly::one(),
            };
        }
        let g = num.gcd(&den);
        let (mut num, mut den) = if g.is_one() {
            (num, den)
        } else {
            (
                num.div_exact(&g).expect("gcd divides numerator"),
                den.div_exact(&g).expect("gcd divides denominator"),
            )
        };
        let lead = den.leading().expect("nonzero denominator").clone();
        den = den.scale(&lead.recip());
        num = num.scale(&lead.recip());
        RationalFunction { num, den }
    }

    pub fn from_poly(p: RatPoly) -> Self {
        RationalFunction {
            num: p,
            den: RatPoly::one(),
        }
    }

    pub fn zero() -> Self {
        Self::from_poly(RatPoly::zero())
    }

    pub fn constant(c: BigRational) -> Self {
        Self::from_poly(RatPoly::constant(c))
    }

    pub fn num(&self) -> &RatPoly {
        &self.num
    }

    pub fn den(&self) -> &RatPoly {
        &self.den
    }

    pub fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    /// deg(num) - deg(den); the power of the variable at infinity.
    pub fn lead_power(&self) -> Option<i64> {
        self.num
            .degree()
            .map(|dn| dn as i64 - self.den.degree().unwrap_or(0) as i64)
    }

    pub fn div(&self, rhs: &RationalFunction) -> Result<RationalFunction, AlgebraError> {
        if rhs.is_zero() {
            return Err(AlgebraError::DivisionByZeroPoly);
        }
        Ok(Self::reduced(&self.num * &rhs.den, &self.den * &rhs.num))
    }

    /// Evaluates at a rational point; `None` on a pole.
    pub fn eval(&self, x: &BigRational) -> Option<BigRational> {
        let d = self.den.eval(x);
        if d.is_zero() {
            return None;
        }
        Some(self.num.eval(x) / d)
    }
}

impl fmt::Debug for RationalFunction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.den.is_one() {
            write!(f, "{:?}", self.num)
        } else {
            write!(f, "({:?}) / ({:?})", self.num, self.den)
        }
    }
}

impl Add for &RationalFunction {
    type Output = RationalFunction;
    fn add(self, rhs: &RationalFunction) -> RationalFunction {
        RationalFunction::reduced(
            &(&self.num * &rhs.den) + &(&rhs.num * &self.den),
            &self.den * &rhs.den,
        )
    }
}

impl Sub for &RationalFunction {
    type Output = RationalFunction;
    fn sub(self, rhs: &RationalFunction) -> RationalFunction {
        RationalFunction::reduced(
            &(&self.num * &rhs.den) - &(&rhs.num * &self.den),
            &self.den * &rhs.den,
        )
    }
}

impl Mul for &RationalFunction {
    type Output = RationalFunction;
    fn mul(self, rhs: &RationalFunction) -> RationalFunction {
        RationalFunction::reduced(&self.num * &rhs.num, &self.den * &rhs.den)
    }
}

impl Neg for &RationalFunction {
    type Output = RationalFunction;
    fn neg(self) -> RationalFunction {
        RationalFunction {
            num: -&self.num,
            den: self.den.clone(),
        }
    }
}
