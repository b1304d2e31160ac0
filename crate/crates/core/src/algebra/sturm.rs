//! Sturm-sequence root counting and rigorous polynomial bound certification
//! over exact rationals.

use super::poly::{AlphaPoly, RatPoly};
use crate::error::AlgebraError;
use num::{BigRational, Signed, Zero};

/// Rational interval with independent endpoint-closure flags.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct RatInterval {
    pub lo: BigRational,
    pub hi: BigRational,
    pub lo_closed: bool,
    pub hi_closed: bool,
}

impl RatInterval {
    pub fn new(lo: BigRational, hi: BigRational, lo_closed: bool, hi_closed: bool) -> Self {
        assert!(lo <= hi, "interval endpoints out of order");
        RatInterval {
            lo,
            hi,
            lo_closed,
            hi_closed,
        }
    }

    /// `[lo, hi]`
    pub fn closed(lo: BigRational, hi: BigRational) -> Self {
        Self::new(lo, hi, true, true)
    }

    /// `[lo, hi)`
    pub fn closed_open(lo: BigRational, hi: BigRational) -> Self {
        Self::new(lo, hi, true, false)
    }

    pub fn midpoint(&self) -> BigRational {
        (&self.lo + &self.hi) / BigRational::from_integer(2.into())
    }

    pub fn format(&self) -> String {
        format!(
            "{}{}, {}{}",
            if self.lo_closed { '[' } else { '(' },
            self.lo,
            self.hi,
            if self.hi_closed { ']' } else { ')' },
        )
    }
}

/// Sturm chain with content-stripped integer entries (sign-preserving).
fn sturm_chain(p: &RatPoly) -> Vec<RatPoly> {
    let mut chain = vec![p.primitive_integer(), p.derivative().primitive_integer()];
    loop {
        let m = chain.len();
        if chain[m - 1].is_zero() {
            chain.pop();
            break;
        }
        let (_, r) = chain[m - 2].divrem(&chain[m - 1]);
        if r.is_zero() {
            break;
        }
        chain.push((-&r).primitive_integer());
    }
    chain
}

fn sign_variations(chain: &[RatPoly], x: &BigRational) -> usize {
    let mut count = 0;
    let mut prev = 0i8;
    for p in chain {
        let v = p.eval(x);
        let s = if v.is_zero() {
            0
        } else if v.is_positive() {
            1
        } else {
            -1
        };
        if s != 0 {
            if prev != 0 && s != prev {
                count += 1;
            }
            prev = s;
        }
    }
    count
}

/// Number of distinct real roots of `p` in the interval, honoring the
/// endpoint-closure flags exactly. Endpoint roots are divided out so the
/// Sturm count applies to a polynomial nonzero at both endpoints.
pub fn roots_in_interval(p: &AlphaPoly, interval: &RatInterval) -> Result<usize, AlgebraError> {
    if p.is_zero() {
        return Err(AlgebraError::ZeroPolynomial);
    }
    if interval.lo == interval.hi {
        let is_root = p.eval(&interval.lo).is_zero();
        return Ok(usize::from(
            interval.lo_closed && interval.hi_closed && is_root,
        ));
    }
    let mut q = p.clone();
    let mut root_at_lo = false;
    let mut root_at_hi = false;
    for (point, flag) in [(&interval.lo, &mut root_at_lo), (&interval.hi, &mut root_at_hi)] {
        let linear = RatPoly::from_coeffs(vec![-point.clone(), BigRational::from_integer(1.into())]);
        while !q.is_zero() && q.eval(point).is_zero() {
            *flag = true;
            q = q.div_exact(&linear).expect("root divides polynomial");
        }
    }
    let interior = if q.degree().unwrap_or(0) == 0 {
        0
    } else {
        let chain = sturm_chain(&q);
        sign_variations(&chain, &interval.lo) - sign_variations(&chain, &interval.hi)
    };
    Ok(interior
        + usize::from(root_at_lo && interval.lo_closed)
        + usize::from(root_at_hi && interval.hi_closed))
}

/// Exact count of distinct real roots in the half-open interval `(lo, hi]`.
pub fn sturm_roots(
    p: &AlphaPoly,
    lo: &BigRational,
    hi: &BigRational,
) -> Result<usize, AlgebraError> {
    if lo >= hi {
        return Err(AlgebraError::EmptyInterval);
    }
    roots_in_interval(p, &RatInterval::new(lo.clone(), hi.clone(), false, true))
}

/// Certifies `|p(alpha)| > bound` for every `alpha` in the interval.
///
/// `p - bound` and `p + bound` must have no roots in the open interior; with
/// both of constant sign there, an interior sample decides whether `|p|` sits
/// above or below the bound, and closed endpoints are checked by direct
/// evaluation.
pub fn certify_bound(
    p: &AlphaPoly,
    bound: &BigRational,
    interval: &RatInterval,
) -> Result<bool, AlgebraError> {
    if !bound.is_positive() {
        return Err(AlgebraError::NonPositiveBound);
    }
    if p.is_zero() {
        return Ok(false);
    }
    let open = RatInterval::new(interval.lo.clone(), interval.hi.clone(), false, false);
    let minus = p - &RatPoly::constant(bound.clone());
    let plus = p + &RatPoly::constant(bound.clone());
    if interval.lo < interval.hi {
        let above = if minus.is_zero() { 0 } else { roots_in_interval(&minus, &open)? };
        let below = if plus.is_zero() { 0 } else { roots_in_interval(&plus, &open)? };
        if minus.is_zero() || plus.is_zero() || above > 0 || below > 0 {
            return Ok(false);
        }
        if p.eval(&interval.midpoint()).abs() <= *bound {
            return Ok(false);
        }
    }
    for (point, closed) in [
        (&interval.lo, interval.lo_closed),
        (&interval.hi, interval.hi_closed),
    ] {
        if closed && p.eval(point).abs() <= *bound {
            return Ok(false);
        }
    }
    Ok(true)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::poly::{rat, rat_int};

    #[test]
    fn counts_root_of_alpha_sq_minus_two() {
        let p = RatPoly::from_integers(&[-2, 0, 1]);
        assert_eq!(sturm_roots(&p, &rat_int(0), &rat_int(2)).unwrap(), 1);
    }

    #[test]
    fn root_outside_half_open_interval() {
        // -a + 1/2 has its root at 1/2, outside (0, 1/4]
        let p = RatPoly::from_coeffs(vec![rat(1, 2), rat(-1, 1)]);
        assert_eq!(sturm_roots(&p, &rat_int(0), &rat(1, 4)).unwrap(), 0);
        assert_eq!(sturm_roots(&p, &rat(1, 4), &rat(1, 2)).unwrap(), 1);
    }

    #[test]
    fn counts_two_roots() {
        // (a - 1/4)(a - 3/4) on (0, 1]
        let p = &RatPoly::from_coeffs(vec![rat(-1, 4), rat(1, 1)])
            * &RatPoly::from_coeffs(vec![rat(-3, 4), rat(1, 1)]);
        assert_eq!(sturm_roots(&p, &rat_int(0), &rat_int(1)).unwrap(), 2);
    }

    #[test]
    fn endpoint_root_honors_closure() {
        let p = RatPoly::from_coeffs(vec![rat(-1, 2), rat(1, 1)]); // root at 1/2
        let closed = RatInterval::closed(rat(1, 2), rat_int(1));
        let open_left = RatInterval::new(rat(1, 2), rat_int(1), false, true);
        assert_eq!(roots_in_interval(&p, &closed).unwrap(), 1);
        assert_eq!(roots_in_interval(&p, &open_left).unwrap(), 0);
    }

    #[test]
    fn repeated_roots_counted_once() {
        // (a - 1/3)^2
        let lin = RatPoly::from_coeffs(vec![rat(-1, 3), rat(1, 1)]);
        let p = &lin * &lin;
        assert_eq!(sturm_roots(&p, &rat_int(0), &rat_int(1)).unwrap(), 1);
    }

    #[test]
    fn certify_table_row_two() {
        let p = RatPoly::from_coeffs(vec![rat(1, 2), rat(-1, 1)]);
        let iv = RatInterval::closed(rat_int(0), rat(1, 4));
        assert!(certify_bound(&p, &rat(1, 8), &iv).unwrap());
    }

    #[test]
    fn certify_negative_control() {
        // p vanishes at 1/2 inside [0.4, 0.6]
        let p = RatPoly::from_coeffs(vec![rat(1, 2), rat(-1, 1)]);
        let iv = RatInterval::closed(rat(2, 5), rat(3, 5));
        assert!(!certify_bound(&p, &rat(1, 8), &iv).unwrap());
    }

    #[test]
    fn certify_constant_polynomial() {
        let p = RatPoly::one();
        let iv = RatInterval::closed(rat_int(-5), rat_int(5));
        assert!(certify_bound(&p, &rat(1, 2), &iv).unwrap());
        assert!(!certify_bound(&p, &rat(3, 2), &iv).unwrap());
    }

    #[test]
    fn certify_equality_at_closed_endpoint_fails() {
        // p(1) = 1/4 equals the bound at a closed endpoint: not strictly above
        let p = RatPoly::from_coeffs(vec![rat(0, 1), rat(1, 4)]);
        let iv = RatInterval::closed(rat_int(1), rat_int(2));
        assert!(!certify_bound(&p, &rat(1, 4), &iv).unwrap());
        // but on the open-left interval (1, 2] ... the infimum is still 1/4,
        // approached but not attained; strict certification still fails via
        // the interior/root analysis only when a root of p -/+ bound exists.
        let iv_open = RatInterval::new(rat_int(1), rat_int(2), false, true);
        assert!(certify_bound(&p, &rat(1, 4), &iv_open).unwrap());
    }
}
