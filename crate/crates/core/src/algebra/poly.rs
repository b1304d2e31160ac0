//! Dense univariate polynomials over arbitrary-precision rationals.
//!
//! One representation serves both formal variables used in this crate:
//! polynomials in the matrix index `n` (inside rational functions) and
//! polynomials in the growth exponent `alpha`.

use num::bigint::BigInt;
use num::{BigRational, One, Signed, ToPrimitive, Zero};
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::str::FromStr;

/// Shorthand for an exact rational from an integer pair.
pub fn rat(num: i64, den: i64) -> BigRational {
    BigRational::new(BigInt::from(num), BigInt::from(den))
}

/// Exact rational from an integer.
pub fn rat_int(v: i64) -> BigRational {
    BigRational::from_integer(BigInt::from(v))
}

/// Polynomial with `BigRational` coefficients, lowest degree first.
/// The trailing coefficient is nonzero unless the polynomial is zero
/// (empty coefficient vector).
#[derive(Clone, PartialEq, Eq, Hash, Default)]
pub struct RatPoly {
    coeffs: Vec<BigRational>,
}

/// Polynomials in the exponent `alpha` are plain `RatPoly` values; the alias
/// marks intent in signatures.
pub type AlphaPoly = RatPoly;

impl RatPoly {
    pub fn zero() -> Self {
        RatPoly { coeffs: Vec::new() }
    }

    pub fn one() -> Self {
        RatPoly::constant(BigRational::one())
    }

    pub fn constant(c: BigRational) -> Self {
        RatPoly::from_coeffs(vec![c])
    }

    /// Builds from ascending coefficients, trimming trailing zeros.
    pub fn from_coeffs(mut coeffs: Vec<BigRational>) -> Self {
        while coeffs.last().is_some_and(|c| c.is_zero()) {
            coeffs.pop();
        }
        RatPoly { coeffs }
    }

    pub fn from_integers(coeffs: &[i64]) -> Self {
        RatPoly::from_coeffs(coeffs.iter().map(|&c| rat_int(c)).collect())
    }

    pub fn monomial(degree: usize, c: BigRational) -> Self {
        if c.is_zero() {
            return RatPoly::zero();
        }
        let mut coeffs = vec![BigRational::zero(); degree + 1];
        coeffs[degree] = c;
        RatPoly { coeffs }
    }

    /// The polynomial `x` itself.
    pub fn var() -> Self {
        RatPoly::monomial(1, BigRational::one())
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn is_one(&self) -> bool {
        self.coeffs.len() == 1 && self.coeffs[0].is_one()
    }

    /// Degree, or `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn coeff(&self, i: usize) -> BigRational {
        self.coeffs.get(i).cloned().unwrap_or_else(BigRational::zero)
    }

    pub fn coeffs(&self) -> &[BigRational] {
        &self.coeffs
    }

    pub fn leading(&self) -> Option<&BigRational> {
        self.coeffs.last()
    }

    pub fn eval(&self, x: &BigRational) -> BigRational {
        let mut acc = BigRational::zero();
        for c in self.coeffs.iter().rev() {
            acc = acc * x + c;
        }
        acc
    }

    pub fn eval_f64(&self, x: f64) -> f64 {
        let mut acc = 0.0;
        for c in self.coeffs.iter().rev() {
            acc = acc * x + c.to_f64().unwrap_or(f64::NAN);
        }
        acc
    }

    pub fn derivative(&self) -> RatPoly {
        if self.coeffs.len() <= 1 {
            return RatPoly::zero();
        }
        let coeffs = self
            .coeffs
            .iter()
            .enumerate()
            .skip(1)
            .map(|(i, c)| c * BigRational::from_integer(BigInt::from(i)))
            .collect();
        RatPoly::from_coeffs(coeffs)
    }

    pub fn scale(&self, c: &BigRational) -> RatPoly {
        if c.is_zero() {
            return RatPoly::zero();
        }
        RatPoly {
            coeffs: self.coeffs.iter().map(|a| a * c).collect(),
        }
    }

    /// Multiplies by `x^k`.
    pub fn mul_var_pow(&self, k: usize) -> RatPoly {
        if self.is_zero() {
            return RatPoly::zero();
        }
        let mut coeffs = vec![BigRational::zero(); k];
        coeffs.extend(self.coeffs.iter().cloned());
        RatPoly { coeffs }
    }

    pub fn pow(&self, mut e: u32) -> RatPoly {
        let mut base = self.clone();
        let mut acc = RatPoly::one();
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

    /// Euclidean division; panics on zero divisor.
    pub fn divrem(&self, d: &RatPoly) -> (RatPoly, RatPoly) {
        let dd = d.degree().expect("division by zero polynomial");
        let lead = d.coeffs[dd].clone();
        let mut rem = self.coeffs.clone();
        let mut quo = vec![BigRational::zero(); self.coeffs.len().saturating_sub(dd)];
        while rem.len() > dd {
            let k = rem.len() - 1 - dd;
            let q = &rem[rem.len() - 1] / &lead;
            if !q.is_zero() {
                for i in 0..dd {
                    let t = &q * &d.coeffs[i];
                    rem[k + i] = &rem[k + i] - t;
                }
            }
            quo[k] = q;
            rem.pop();
            while rem.last().is_some_and(|c| c.is_zero()) {
                rem.pop();
            }
        }
        (RatPoly::from_coeffs(quo), RatPoly { coeffs: rem })
    }

    /// Exact division; `None` when the remainder is nonzero.
    pub fn div_exact(&self, d: &RatPoly) -> Option<RatPoly> {
        let (q, r) = self.divrem(d);
        r.is_zero().then_some(q)
    }

    /// Monic gcd via the Euclidean algorithm.
    pub fn gcd(&self, other: &RatPoly) -> RatPoly {
        let mut a = self.clone();
        let mut b = other.clone();
        while !b.is_zero() {
            let (_, r) = a.divrem(&b);
            a = b;
            b = r;
        }
        a.monic()
    }

    pub fn monic(&self) -> RatPoly {
        match self.leading() {
            None => RatPoly::zero(),
            Some(l) => self.scale(&l.recip()),
        }
    }

    /// Scales to integer coefficients with content 1, preserving sign.
    /// Keeps Sturm chain coefficients from blowing up.
    pub fn primitive_integer(&self) -> RatPoly {
        if self.is_zero() {
            return RatPoly::zero();
        }
        let mut den_lcm = BigInt::one();
        for c in &self.coeffs {
            den_lcm = num::integer::lcm(den_lcm, c.denom().clone());
        }
        let ints: Vec<BigInt> = self
            .coeffs
            .iter()
            .map(|c| c.numer() * (&den_lcm / c.denom()))
            .collect();
        let mut content = BigInt::zero();
        for v in &ints {
            content = num::integer::gcd(content, v.abs());
        }
        RatPoly {
            coeffs: ints
                .iter()
                .map(|v| BigRational::from_integer(v / &content))
                .collect(),
        }
    }

    /// Coefficients as `"num/den"` strings, lowest degree first.
    pub fn to_fraction_strings(&self) -> Vec<String> {
        self.coeffs.iter().map(|c| c.to_string()).collect()
    }

    pub fn from_fraction_strings(items: &[String]) -> Result<RatPoly, String> {
        let mut coeffs = Vec::with_capacity(items.len());
        for s in items {
            coeffs.push(
                BigRational::from_str(s.trim()).map_err(|e| format!("bad rational {s:?}: {e}"))?,
            );
        }
        Ok(RatPoly::from_coeffs(coeffs))
    }

    /// Human-readable form, highest degree first, e.g. `-a^3 + 9/4 a^2 - 11/8 a + 5/32`.
    pub fn format_with_var(&self, var: &str) -> String {
        if self.is_zero() {
            return "0".to_string();
        }
        let mut out = String::new();
        for (i, c) in self.coeffs.iter().enumerate().rev() {
            if c.is_zero() {
                continue;
            }
            let mag = c.abs();
            let sign = c.is_negative();
            if out.is_empty() {
                if sign {
                    out.push('-');
                }
            } else if sign {
                out.push_str(" - ");
            } else {
                out.push_str(" + ");
            }
            let show_coeff = !mag.is_one() || i == 0;
            if show_coeff {
                out.push_str(&mag.to_string());
            }
            if i > 0 {
                if show_coeff {
                    out.push(' ');
                }
                out.push_str(var);
                if i > 1 {
                    out.push_str(&format!("^{i}"));
                }
            }
        }
        out
    }
}

impl fmt::Debug for RatPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.format_with_var("x"))
    }
}

impl Neg for &RatPoly {
    type Output = RatPoly;
    fn neg(self) -> RatPoly {
        RatPoly {
            coeffs: self.coeffs.iter().map(|c| -c).collect(),
        }
    }
}

impl Add for &RatPoly {
    type Output = RatPoly;
    fn add(self, rhs: &RatPoly) -> RatPoly {
        let n = self.coeffs.len().max(rhs.coeffs.len());
        let mut coeffs = Vec::with_capacity(n);
        for i in 0..n {
            coeffs.push(self.coeff(i) + rhs.coeff(i));
        }
        RatPoly::from_coeffs(coeffs)
    }
}

impl Sub for &RatPoly {
    type Output = RatPoly;
    fn sub(self, rhs: &RatPoly) -> RatPoly {
        let n = self.coeffs.len().max(rhs.coeffs.len());
        let mut coeffs = Vec::with_capacity(n);
        for i in 0..n {
            coeffs.push(self.coeff(i) - rhs.coeff(i));
        }
        RatPoly::from_coeffs(coeffs)
    }
}

impl Mul for &RatPoly {
    type Output = RatPoly;
    fn mul(self, rhs: &RatPoly) -> RatPoly {
        if self.is_zero() || rhs.is_zero() {
            return RatPoly::zero();
        }
        let mut coeffs =
            vec![BigRational::zero(); self.coeffs.len() + rhs.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in rhs.coeffs.iter().enumerate() {
                if !b.is_zero() {
                    coeffs[i + j] = &coeffs[i + j] + a * b;
                }
            }
        }
        RatPoly::from_coeffs(coeffs)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn divrem_roundtrip() {
        // (n^2 - 1) / (n - 1) = n + 1
        let num = RatPoly::from_integers(&[-1, 0, 1]);
        let den = RatPoly::from_integers(&[-1, 1]);
        let (q, r) = num.divrem(&den);
        assert!(r.is_zero());
        assert_eq!(q, RatPoly::from_integers(&[1, 1]));
    }

    #[test]
    fn gcd_monic() {
        // gcd((x-1)(x-2), (x-1)(x-3)) = x - 1
        let a = &RatPoly::from_integers(&[-1, 1]) * &RatPoly::from_integers(&[-2, 1]);
        let b = &RatPoly::from_integers(&[-1, 1]) * &RatPoly::from_integers(&[-3, 1]);
        assert_eq!(a.gcd(&b), RatPoly::from_integers(&[-1, 1]));
    }

    #[test]
    fn eval_horner() {
        let p = RatPoly::from_coeffs(vec![rat(1, 2), rat(-1, 1)]); // 1/2 - x
        assert_eq!(p.eval(&rat(1, 2)), rat(0, 1));
        assert_eq!(p.eval(&rat(0, 1)), rat(1, 2));
    }

    #[test]
    fn primitive_integer_strips_content() {
        let p = RatPoly::from_coeffs(vec![rat(2, 3), rat(4, 3)]);
        let q = p.primitive_integer();
        assert_eq!(q, RatPoly::from_integers(&[1, 2]));
    }

    #[test]
    fn fraction_strings_roundtrip() {
        let p = RatPoly::from_coeffs(vec![rat(5, 32), rat(-11, 8), rat(9, 4), rat(-1, 1)]);
        let s = p.to_fraction_strings();
        assert_eq!(s, vec!["5/32", "-11/8", "9/4", "-1"]);
        assert_eq!(RatPoly::from_fraction_strings(&s).unwrap(), p);
    }

    #[test]
    fn format_matches_table_style() {
        let p = RatPoly::from_coeffs(vec![rat(1, 2), rat(-1, 1)]);
        assert_eq!(p.format_with_var("a"), "-a + 1/2");
    }
}
