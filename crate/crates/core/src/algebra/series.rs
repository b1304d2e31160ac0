//! Truncated power series in `w = 1/n` whose coefficients are polynomials in
//! `alpha`. Constant-in-alpha series use degree-0 coefficients so a single
//! type covers both the binomial expansions of `(1 + d*w)^alpha` and the
//! geometric expansions of rational functions of `n`.

use super::poly::{AlphaPoly, RatPoly};
use super::ratfn::RationalFunction;
use crate::error::AlgebraError;
use num::{BigRational, One, Zero};

#[derive(Clone, PartialEq, Debug)]
pub struct PowerSeries {
    coeffs: Vec<AlphaPoly>,
}

impl PowerSeries {
    /// Zero series truncated at `w^order`.
    pub fn zero(order: usize) -> Self {
        PowerSeries {
            coeffs: vec![RatPoly::zero(); order + 1],
        }
    }

    pub fn from_coeffs(coeffs: Vec<AlphaPoly>) -> Self {
        assert!(!coeffs.is_empty(), "series needs at least the w^0 coefficient");
        PowerSeries { coeffs }
    }

    pub fn constant(c: AlphaPoly, order: usize) -> Self {
        let mut s = PowerSeries::zero(order);
        s.coeffs[0] = c;
        s
    }

    pub fn order(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn coeff(&self, j: usize) -> &AlphaPoly {
        &self.coeffs[j]
    }

    pub fn coeffs(&self) -> &[AlphaPoly] {
        &self.coeffs
    }

    pub fn truncate(&self, order: usize) -> PowerSeries {
        let mut coeffs: Vec<AlphaPoly> =
            self.coeffs.iter().take(order + 1).cloned().collect();
        coeffs.resize(order + 1, RatPoly::zero());
        PowerSeries { coeffs }
    }

    pub fn add(&self, rhs: &PowerSeries) -> PowerSeries {
        let order = self.order().min(rhs.order());
        let coeffs = (0..=order)
            .map(|j| &self.coeffs[j] + &rhs.coeffs[j])
            .collect();
        PowerSeries { coeffs }
    }

    /// Adds `rhs * w^shift` into `self`, dropping anything beyond the order.
    pub fn add_shifted(&mut self, rhs: &PowerSeries, shift: usize) {
        let order = self.order();
        for (j, c) in rhs.coeffs.iter().enumerate() {
            if shift + j > order {
                break;
            }
            self.coeffs[shift + j] = &self.coeffs[shift + j] + c;
        }
    }

    /// Product truncated at the shorter order.
    pub fn mul(&self, rhs: &PowerSeries) -> PowerSeries {
        let order = self.order().min(rhs.order());
        let mut coeffs = vec![RatPoly::zero(); order + 1];
        for (i, a) in self.coeffs.iter().enumerate().take(order + 1) {
            if a.is_zero() {
                continue;
            }
            for (j, b) in rhs.coeffs.iter().enumerate().take(order + 1 - i) {
                if !b.is_zero() {
                    coeffs[i + j] = &coeffs[i + j] + &(a * b);
                }
            }
        }
        PowerSeries { coeffs }
    }

    pub fn scale(&self, c: &AlphaPoly) -> PowerSeries {
        PowerSeries {
            coeffs: self.coeffs.iter().map(|a| a * c).collect(),
        }
    }

    /// Evaluates the truncated series at rational `(alpha, w)`.
    pub fn eval(&self, alpha: &BigRational, w: &BigRational) -> BigRational {
        let mut acc = BigRational::zero();
        for c in self.coeffs.iter().rev() {
            acc = acc * w + c.eval(alpha);
        }
        acc
    }
}

/// Generalized binomial coefficient `C(alpha, m) = alpha (alpha-1) ... (alpha-m+1) / m!`
/// as an exact polynomial in alpha of degree `m`.
pub fn binom_alpha(m: usize) -> AlphaPoly {
    let mut acc = RatPoly::one();
    for i in 0..m {
        // multiply by (alpha - i) / (i + 1)
        let factor = RatPoly::from_coeffs(vec![
            BigRational::from_integer((-(i as i64)).into()),
            BigRational::one(),
        ]);
        acc = (&acc * &factor).scale(&BigRational::new(1.into(), ((i + 1) as i64).into()));
    }
    acc
}

/// Series of `(1 + delta*w)^alpha` truncated at `w^order`; the `w^m`
/// coefficient is `C(alpha, m) * delta^m`.
pub fn expand_shifted_power(delta: i64, order: usize) -> PowerSeries {
    let mut coeffs = Vec::with_capacity(order + 1);
    let mut dpow = BigRational::one();
    for m in 0..=order {
        coeffs.push(binom_alpha(m).scale(&dpow));
        dpow *= BigRational::from_integer(delta.into());
    }
    PowerSeries::from_coeffs(coeffs)
}

/// Writes `r(n) = n^lead * (s_0 + s_1 w + ... + s_order w^order + O(w^{order+1}))`
/// with exact rational `s_j`; `lead = deg(num) - deg(den)`.
pub fn expand_rational(
    r: &RationalFunction,
    order: usize,
) -> Result<(i64, PowerSeries), AlgebraError> {
    if r.is_zero() {
        return Err(AlgebraError::ZeroPolynomial);
    }
    let dn = r.num().degree().expect("nonzero numerator");
    let dd = r.den().degree().expect("nonzero denominator");
    // Reversed coefficients: num(n) = n^dn * sum_j num[dn-j] w^j.
    let rev = |p: &RatPoly, d: usize, m: usize| -> BigRational {
        if m > d {
            BigRational::zero()
        } else {
            p.coeff(d - m)
        }
    };
    let lead_num = r.num().coeff(dn);
    let lead_den = r.den().coeff(dd); // monic by normalization, kept general
    let mut s = Vec::with_capacity(order + 1);
    for m in 0..=order {
        let mut acc = rev(r.num(), dn, m);
        for i in 1..=m {
            let b = rev(r.den(), dd, i);
            if !b.is_zero() {
                acc -= b * &s[m - i];
            }
        }
        s.push(acc / &lead_den);
    }
    let _ = lead_num;
    let coeffs = s.into_iter().map(RatPoly::constant).collect();
    Ok((dn as i64 - dd as i64, PowerSeries::from_coeffs(coeffs)))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::poly::{rat, rat_int};

    #[test]
    fn binomials_match_hand_expansion() {
        assert_eq!(binom_alpha(0), RatPoly::one());
        assert_eq!(binom_alpha(1), RatPoly::var());
        // alpha(alpha-1)/2 = -1/2 a + 1/2 a^2
        assert_eq!(
            binom_alpha(2),
            RatPoly::from_coeffs(vec![rat(0, 1), rat(-1, 2), rat(1, 2)])
        );
        // alpha(alpha-1)(alpha-2)/6 = (a^3 - 3a^2 + 2a)/6
        assert_eq!(
            binom_alpha(3),
            RatPoly::from_coeffs(vec![rat(0, 1), rat(1, 3), rat(-1, 2), rat(1, 6)])
        );
    }

    #[test]
    fn shifted_power_cases() {
        let s = expand_shifted_power(0, 3);
        assert_eq!(s.coeff(0), &RatPoly::one());
        for j in 1..=3 {
            assert!(s.coeff(j).is_zero());
        }

        let s = expand_shifted_power(-1, 2);
        assert_eq!(s.coeff(0), &RatPoly::one());
        assert_eq!(s.coeff(1), &RatPoly::from_coeffs(vec![rat(0, 1), rat(-1, 1)]));
        assert_eq!(
            s.coeff(2),
            &RatPoly::from_coeffs(vec![rat(0, 1), rat(-1, 2), rat(1, 2)])
        );

        let s = expand_shifted_power(2, 1);
        assert_eq!(s.coeff(1), &RatPoly::from_coeffs(vec![rat(0, 1), rat(2, 1)]));
    }

    #[test]
    fn rational_expansion_resolvent_factor() {
        // 1/(2n+1) = n^-1 (1/2 - 1/4 w + 1/8 w^2 - ...)
        let r = RationalFunction::new(
            RatPoly::from_integers(&[1]),
            RatPoly::from_integers(&[1, 2]),
        )
        .unwrap();
        let (lead, s) = expand_rational(&r, 2).unwrap();
        assert_eq!(lead, -1);
        assert_eq!(s.coeff(0), &RatPoly::constant(rat(1, 2)));
        assert_eq!(s.coeff(1), &RatPoly::constant(rat(-1, 4)));
        assert_eq!(s.coeff(2), &RatPoly::constant(rat(1, 8)));
    }

    #[test]
    fn rational_expansion_polynomial_and_quadratic() {
        let r = RationalFunction::from_poly(RatPoly::from_integers(&[0, 0, 1]));
        let (lead, s) = expand_rational(&r, 2).unwrap();
        assert_eq!(lead, 2);
        assert_eq!(s.coeff(0), &RatPoly::one());
        assert!(s.coeff(1).is_zero() && s.coeff(2).is_zero());

        // 1/(4n^2-1): lead -2, series 1/4 + 0 w + 1/16 w^2
        let r = RationalFunction::new(
            RatPoly::from_integers(&[1]),
            RatPoly::from_integers(&[-1, 0, 4]),
        )
        .unwrap();
        let (lead, s) = expand_rational(&r, 2).unwrap();
        assert_eq!(lead, -2);
        assert_eq!(s.coeff(0), &RatPoly::constant(rat(1, 4)));
        assert!(s.coeff(1).is_zero());
        assert_eq!(s.coeff(2), &RatPoly::constant(rat(1, 16)));
    }

    #[test]
    fn expansion_times_denominator_recovers_numerator() {
        // multiply the series back by the reversed denominator; must match the
        // reversed numerator through the truncation order
        let num = RatPoly::from_integers(&[3, 0, 2]); // 2n^2 + 3
        let den = RatPoly::from_integers(&[-1, 2, 4]); // 4n^2 + 2n - 1
        let r = RationalFunction::new(num.clone(), den.clone()).unwrap();
        let order = 6;
        let (lead, s) = expand_rational(&r, order).unwrap();
        assert_eq!(lead, 0);
        let rev = |p: &RatPoly| {
            let d = p.degree().unwrap();
            PowerSeries::from_coeffs(
                (0..=order)
                    .map(|m| {
                        RatPoly::constant(if m > d {
                            num::BigRational::zero()
                        } else {
                            p.coeff(d - m)
                        })
                    })
                    .collect(),
            )
        };
        // reduced form scales both sides; compare against the *reduced* num/den
        let back = s.mul(&rev(r.den()));
        let expect = rev(r.num());
        assert_eq!(back, expect);
    }

    #[test]
    fn series_eval_consistency() {
        let s = expand_shifted_power(-1, 8);
        // (1 - w)^alpha at alpha = 2, w = 1/10 -> (9/10)^2
        let v = s.eval(&rat_int(2), &rat(1, 10));
        assert_eq!(v, rat(81, 100));
    }
}
