//! Floating-point (configurable precision) Taylor coefficients `a_k(n)` for
//! any family: the Rayleigh-Schrodinger recursion on boundary-correct
//! truncations, a closed form for `a_2`, and an independent contour-integral
//! oracle.

use crate::error::NumericError;
use crate::family::{FamilySpec, C64};
use crate::mp::{MpComplex, MpCtx};
use crate::SCHEMA_VERSION;
use astro_float::BigFloat;
use serde::Serialize;

#[derive(Clone, Copy, PartialEq, Eq, Debug, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum CoeffMethod {
    Rs,
    Contour,
}

/// `a_0 .. a_k_max` for one `(family, n)` at a fixed precision.
pub struct TaylorCoefficients {
    pub n: u32,
    pub family: FamilySpec,
    pub k_max: usize,
    pub values: Vec<MpComplex>,
    pub method: CoeffMethod,
    pub precision_bits: usize,
}

impl TaylorCoefficients {
    pub fn value_c64(&self, ctx: &MpCtx, k: usize) -> C64 {
        ctx.c_to_c64(&self.values[k])
    }

    pub fn to_json(&self, ctx: &MpCtx) -> serde_json::Value {
        let values: Vec<serde_json::Value> = self
            .values
            .iter()
            .enumerate()
            .map(|(k, v)| {
                let c = ctx.c_to_c64(v);
                serde_json::json!({"k": k, "re": c.re, "im": c.im})
            })
            .collect();
        serde_json::json!({
            "schema": SCHEMA_VERSION,
            "family": self.family.kind.name(),
            "alpha": self.family.alpha,
            "n": self.n,
            "k_max": self.k_max,
            "method": self.method,
            "precision_bits": self.precision_bits,
            "values": values,
        })
    }

    pub fn to_csv(&self, ctx: &MpCtx) -> String {
        let mut out = String::from("k,re,im,method,precision_bits\n");
        for (k, v) in self.values.iter().enumerate() {
            let c = ctx.c_to_c64(v);
            out.push_str(&format!(
                "{},{:e},{:e},{:?},{}\n",
                k, c.re, c.im, self.method, self.precision_bits
            ));
        }
        out
    }
}

/// RS recursion with the internal truncation `N = n + k_max + 2`.
pub fn rs_numeric(
    spec: &FamilySpec,
    n: u32,
    k_max: usize,
    precision_bits: usize,
) -> Result<TaylorCoefficients, NumericError> {
    rs_numeric_with_dim(spec, n, k_max, precision_bits, n as usize + k_max + 2)
}

/// Same recursion with an explicit truncation dimension; results are
/// identical for every `N >= n + k_max + 1` because order-k corrections only
/// reach offsets `|j| <= k`. Basis indices below 1 or above `N` are dropped,
/// which is what the finite matrix actually does.
pub fn rs_numeric_with_dim(
    spec: &FamilySpec,
    n: u32,
    k_max: usize,
    precision_bits: usize,
    n_dim: usize,
) -> Result<TaylorCoefficients, NumericError> {
    assert!(n >= 1);
    let ctx = MpCtx::new(precision_bits)?;
    let band = k_max as i32;
    let valid = |j: i32| -> bool {
        let idx = n as i64 + j as i64;
        idx >= 1 && idx <= n_dim as i64
    };
    // couplings b_m, c_m for m in [max(1, n-k-1), n+k]
    let lo = ((n as i64 - band as i64 - 1).max(1)) as u32;
    let hi = (n as i64 + band as i64).min(n_dim as i64) as u32;
    let mut b = vec![ctx.c_zero(); (hi - lo + 2) as usize];
    let mut c = vec![ctx.c_zero(); (hi - lo + 2) as usize];
    for m in lo..=hi {
        let (bm, cm) = spec.couplings_mp(m, &ctx)?;
        b[(m - lo) as usize] = bm;
        c[(m - lo) as usize] = cm;
    }
    let coupling = |which: &Vec<MpComplex>, m: i64| -> MpComplex {
        if m < lo as i64 || m > hi as i64 {
            ctx.c_zero()
        } else {
            which[(m - lo as i64) as usize].clone()
        }
    };

    let off = |j: i32| (j + band) as usize;
    let width = 2 * k_max + 1;
    // psi[k][off(j)] = correction of order k at offset j
    let mut psi: Vec<Vec<MpComplex>> = vec![vec![ctx.c_zero(); width]];
    psi[0][off(0)] = ctx.c_real(ctx.one());
    let mut a: Vec<MpComplex> = Vec::with_capacity(k_max + 1);
    a.push(ctx.c_real(ctx.from_i64((n as i64) * (n as i64))));

    for k in 1..=k_max {
        let prev = &psi[k - 1];
        // (B v)[j] = b_{n+j-1} v[j-1]? no: (Bv)_i = b_i v_{i+1} + c_{i-1} v_{i-1}
        // at i = n+j: b_{n+j} v[j+1] + c_{n+j-1} v[j-1]
        let mut bp = vec![ctx.c_zero(); width];
        for j in -band..=band {
            if !valid(j) {
                continue;
            }
            let i = n as i64 + j as i64;
            let mut acc = ctx.c_zero();
            if j + 1 <= band && valid(j + 1) {
                acc = ctx.c_add(&acc, &ctx.c_mul(&coupling(&b, i), &prev[off(j + 1)]));
            }
            if j - 1 >= -band && valid(j - 1) {
                acc = ctx.c_add(&acc, &ctx.c_mul(&coupling(&c, i - 1), &prev[off(j - 1)]));
            }
            bp[off(j)] = acc;
        }
        a.push(bp[off(0)].clone());
        let mut cur = vec![ctx.c_zero(); width];
        for j in -(k as i32)..=(k as i32) {
            if j == 0 || !valid(j) {
                continue;
            }
            let mut acc = ctx.c_neg(&bp[off(j)]);
            for l in 1..k {
                if ctx.c_is_zero(&a[l]) {
                    continue;
                }
                let p = &psi[k - l][off(j)];
                if !ctx.c_is_zero(p) {
                    acc = ctx.c_add(&acc, &ctx.c_mul(&a[l], p));
                }
            }
            // gap (n+j)^2 - n^2 is nonzero for distinct nonnegative indices
            let gap = (n as i64 + j as i64) * (n as i64 + j as i64) - (n as i64) * (n as i64);
            debug_assert!(gap != 0);
            cur[off(j)] = ctx.c_scale(&acc, &ctx.div(&ctx.one(), &ctx.from_i64(gap)));
        }
        psi.push(cur);
    }

    Ok(TaylorCoefficients {
        n,
        family: spec.clone(),
        k_max,
        values: a,
        method: CoeffMethod::Rs,
        precision_bits,
    })
}

/// `a_2(n) = b_{n-1} c_{n-1} / (2n-1) - b_n c_n / (2n+1)`; the first term is
/// absent at the boundary n = 1.
pub fn a2_closed_form(spec: &FamilySpec, n: u32) -> Result<C64, NumericError> {
    let (bn, cn) = spec.couplings(n)?;
    let mut acc = -bn * cn / (2.0 * n as f64 + 1.0);
    if n > 1 {
        let (bp, cp) = spec.couplings(n - 1)?;
        acc += bp * cp / (2.0 * n as f64 - 1.0);
    }
    Ok(acc)
}

/// Multiprecision twin of [`a2_closed_form`].
pub fn a2_closed_form_mp(
    spec: &FamilySpec,
    n: u32,
    ctx: &MpCtx,
) -> Result<MpComplex, NumericError> {
    let (bn, cn) = spec.couplings_mp(n, ctx)?;
    let t2 = ctx.c_scale(
        &ctx.c_mul(&bn, &cn),
        &ctx.div(&ctx.one(), &ctx.from_i64(2 * n as i64 + 1)),
    );
    let mut acc = ctx.c_neg(&t2);
    if n > 1 {
        let (bp, cp) = spec.couplings_mp(n - 1, ctx)?;
        let t1 = ctx.c_scale(
            &ctx.c_mul(&bp, &cp),
            &ctx.div(&ctx.one(), &ctx.from_i64(2 * n as i64 - 1)),
        );
        acc = ctx.c_add(&acc, &t1);
    }
    Ok(acc)
}

/// Contour-integral oracle for `a_k(n)`:
/// `(1/2 pi i) \oint_{dPi} sum_{|j-n|<=k} (lambda - n^2) <R0 (B R0)^k e_j, e_j> dlambda`
/// on the square of half-width `n` centered at `n^2`, by composite midpoint
/// quadrature per side with Romberg acceleration, refined until successive
/// estimates agree or the cap is reached.
pub fn contour_coefficient(
    spec: &FamilySpec,
    n: u32,
    k: usize,
    quad_points: usize,
    precision_bits: usize,
) -> Result<MpComplex, NumericError> {
    if n < 2 {
        return Err(NumericError::ContourSmallN(n));
    }
    let ctx = MpCtx::new(precision_bits)?;
    let n_dim = n as usize + 2 * k + 2;
    let mut b = vec![ctx.c_zero(); n_dim + 1];
    let mut c = vec![ctx.c_zero(); n_dim + 1];
    for m in 1..=n_dim as u32 {
        let (bm, cm) = spec.couplings_mp(m, &ctx)?;
        b[m as usize] = bm;
        c[m as usize] = cm;
    }

    let n2 = ctx.from_i64((n as i64) * (n as i64));
    let j_lo = (n as i64 - k as i64).max(1) as usize;
    let j_hi = n as usize + k;

    // integrand: sum_j (lambda - n^2) [R0 (B R0)^k e_j]_j
    let integrand = |lam: &MpComplex| -> MpComplex {
        let resolvent: Vec<MpComplex> = (0..=n_dim)
            .map(|m| {
                if m == 0 {
                    ctx.c_zero()
                } else {
                    let d = ctx.c_sub(lam, &ctx.c_real(ctx.from_i64((m as i64) * (m as i64))));
                    ctx.c_div(&ctx.c_real(ctx.one()), &d)
                }
            })
            .collect();
        let mut total = ctx.c_zero();
        for j in j_lo..=j_hi {
            let mut v = vec![ctx.c_zero(); n_dim + 2];
            v[j] = ctx.c_real(ctx.one());
            for _ in 0..k {
                // v <- B (R0 v)
                let u: Vec<MpComplex> = (0..=n_dim)
                    .map(|m| ctx.c_mul(&v[m], &resolvent[m]))
                    .collect();
                let mut w = vec![ctx.c_zero(); n_dim + 2];
                for (m, wm) in w.iter_mut().enumerate().take(n_dim + 1).skip(1) {
                    let mut acc = ctx.c_zero();
                    if m + 1 <= n_dim {
                        acc = ctx.c_add(&acc, &ctx.c_mul(&b[m], &u[m + 1]));
                    }
                    if m >= 2 {
                        acc = ctx.c_add(&acc, &ctx.c_mul(&c[m - 1], &u[m - 1]));
                    }
                    *wm = acc;
                }
                v = w;
            }
            let diag = ctx.c_mul(&v[j], &resolvent[j]);
            total = ctx.c_add(&total, &diag);
        }
        let shift = ctx.c_sub(lam, &ctx.c_real(n2.clone()));
        ctx.c_mul(&total, &shift)
    };

    // sides of the square, each parameterized over s in [-n, n]:
    //   bottom: n^2 + s - i n, dz = ds       right: n^2 + n + i s, dz = i ds
    //   top:    n^2 - s + i n, dz = -ds      left: n^2 - n - i s,  dz = -i ds
    let half = n as f64;
    let sides: [(C64, C64); 4] = [
        (C64::new(0.0, -half), C64::new(1.0, 0.0)),
        (C64::new(half, 0.0), C64::new(0.0, 1.0)),
        (C64::new(0.0, half), C64::new(-1.0, 0.0)),
        (C64::new(-half, 0.0), C64::new(0.0, -1.0)),
    ];

    let midpoint_sum = |m: usize| -> MpComplex {
        let h = ctx.div(&ctx.from_f64(2.0 * half), &ctx.from_i64(m as i64));
        let mut acc = ctx.c_zero();
        for (offset, dir) in &sides {
            let center = ctx.c(
                ctx.add(&n2, &ctx.from_f64(offset.re)),
                ctx.from_f64(offset.im),
            );
            let dirc = ctx.c_from_c64(*dir);
            let mut side_sum = ctx.c_zero();
            for i in 0..m {
                // s_i = -n + (i + 1/2) h
                let s = ctx.add(
                    &ctx.from_f64(-half),
                    &ctx.mul(&ctx.from_f64(i as f64 + 0.5), &h),
                );
                let lam = ctx.c_add(&center, &ctx.c_scale(&dirc, &s));
                side_sum = ctx.c_add(&side_sum, &integrand(&lam));
            }
            acc = ctx.c_add(&acc, &ctx.c_scale(&ctx.c_mul(&side_sum, &dirc), &h));
        }
        acc
    };

    // Romberg on the midpoint rule: error expansion in even powers of h
    let m0 = (quad_points / 4).max(8);
    let max_level = 9;
    let tol = 1e-11;
    let mut table: Vec<Vec<MpComplex>> = Vec::new();
    let mut prev_best: Option<MpComplex> = None;
    for level in 0..=max_level {
        let m = m0 << level;
        let mut row = vec![midpoint_sum(m)];
        for col in 1..=level {
            let factor = 4f64.powi(col as i32);
            let up = &table[level - 1][col - 1];
            let cur = &row[col - 1];
            // (factor * cur - up) / (factor - 1)
            let num = ctx.c_sub(&ctx.c_scale(cur, &ctx.from_f64(factor)), up);
            row.push(ctx.c_scale(&num, &ctx.from_f64(1.0 / (factor - 1.0))));
        }
        let best = row.last().unwrap().clone();
        if let Some(prev) = &prev_best {
            let diff = ctx.to_f64(&ctx.c_abs(&ctx.c_sub(&best, prev)));
            let scale = ctx.to_f64(&ctx.c_abs(&best)).max(1e-30);
            if diff < tol || diff / scale < tol {
                // divide by 2 pi i: multiply by -i / (2 pi)
                return Ok(divide_2pii(&ctx, &best));
            }
        }
        prev_best = Some(best);
        table.push(row);
    }
    let last = ctx.c_to_c64(&divide_2pii(&ctx, prev_best.as_ref().unwrap()));
    let prev = ctx.c_to_c64(&divide_2pii(&ctx, table[max_level - 1].last().unwrap()));
    Err(NumericError::QuadratureNonConvergence {
        last: (last.re, last.im),
        prev: (prev.re, prev.im),
    })
}

fn divide_2pii(ctx: &MpCtx, v: &MpComplex) -> MpComplex {
    let two_pi = ctx.mul(&ctx.from_f64(2.0), &ctx.pi());
    let scaled = ctx.c_scale(v, &ctx.div(&ctx.one(), &two_pi));
    // multiply by -i: (re, im) -> (im, -re)
    ctx.c(scaled.im.clone(), scaled.re.neg())
}

/// Residual table for the large-n asymptotic of `a_k`:
/// `residual(n) = |a_k(n) n^{2(k-1) - k alpha} - P_k(k-1, alpha)|`,
/// plus a least-squares decay exponent of `log residual` against `log n`.
pub struct AsymptoticCheck {
    pub k: usize,
    pub alpha: f64,
    pub limit: f64,
    pub rows: Vec<(u32, f64)>,
    pub fitted_exponent: f64,
}

pub fn asymptotic_check(
    spec: &FamilySpec,
    k: usize,
    leading: &crate::algebra::AlphaPoly,
    n_list: &[u32],
    precision_bits: usize,
) -> Result<AsymptoticCheck, NumericError> {
    let ctx = MpCtx::new(precision_bits)?;
    let alpha = spec.alpha;
    let limit_mp = eval_alpha_poly_mp(leading, alpha, &ctx);
    let mut rows = Vec::with_capacity(n_list.len());
    for &n in n_list {
        let coeffs = rs_numeric(spec, n, k, precision_bits)?;
        let ak = &coeffs.values[k];
        let scale_exp = 2.0 * (k as f64 - 1.0) - k as f64 * alpha;
        let scale = ctx.pow(&ctx.from_i64(n as i64), &ctx.from_f64(scale_exp));
        let scaled = ctx.c_scale(ak, &scale);
        let resid = ctx.c_sub(&scaled, &ctx.c_real(limit_mp.clone()));
        rows.push((n, ctx.to_f64(&ctx.c_abs(&resid))));
    }
    let pts: Vec<(f64, f64)> = rows
        .iter()
        .filter(|(_, r)| *r > 0.0)
        .map(|(n, r)| ((*n as f64).ln(), r.ln()))
        .collect();
    let fitted_exponent = least_squares_slope(&pts);
    Ok(AsymptoticCheck {
        k,
        alpha,
        limit: ctx.to_f64(&limit_mp),
        rows,
        fitted_exponent,
    })
}

pub(crate) fn eval_alpha_poly_mp(p: &crate::algebra::AlphaPoly, alpha: f64, ctx: &MpCtx) -> BigFloat {
    let a = ctx.from_f64(alpha);
    let mut acc = ctx.zero();
    for c in p.coeffs().iter().rev() {
        acc = ctx.add(&ctx.mul(&acc, &a), &ctx.from_rational(c));
    }
    acc
}

pub(crate) fn least_squares_slope(pts: &[(f64, f64)]) -> f64 {
    if pts.len() < 2 {
        return f64::NAN;
    }
    let n = pts.len() as f64;
    let sx: f64 = pts.iter().map(|p| p.0).sum();
    let sy: f64 = pts.iter().map(|p| p.1).sum();
    let sxx: f64 = pts.iter().map(|p| p.0 * p.0).sum();
    let sxy: f64 = pts.iter().map(|p| p.0 * p.1).sum();
    (n * sxy - sx * sy) / (n * sxx - sx * sx)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn rel_err(ctx: &MpCtx, got: &MpComplex, want: f64) -> f64 {
        let w = ctx.c_from_c64(C64::new(want, 0.0));
        let d = ctx.to_f64(&ctx.c_abs(&ctx.c_sub(got, &w)));
        d / want.abs().max(1e-300)
    }

    #[test]
    fn rs_matches_hand_computed_a2() {
        let spec = FamilySpec::power(0.0).unwrap();
        let ctx = MpCtx::new(128).unwrap();
        let t = rs_numeric(&spec, 2, 2, 128).unwrap();
        assert!(rel_err(&ctx, &t.values[2], 2.0 / 15.0) < 1e-30);
        assert_eq!(ctx.c_to_c64(&t.values[0]).re, 4.0);

        // boundary case: no (n-1) term at n = 1
        let t = rs_numeric(&spec, 1, 2, 128).unwrap();
        assert!(rel_err(&ctx, &t.values[2], -1.0 / 3.0) < 1e-30);
    }

    #[test]
    fn odd_coefficients_vanish_for_power_family() {
        let spec = FamilySpec::power(0.7).unwrap();
        let ctx = MpCtx::new(128).unwrap();
        let t = rs_numeric(&spec, 4, 7, 128).unwrap();
        for k in [1usize, 3, 5, 7] {
            assert!(ctx.to_f64(&ctx.c_abs(&t.values[k])) < 1e-35);
        }
    }

    #[test]
    fn truncation_dimension_is_inert() {
        let spec = FamilySpec::alternating(0.5).unwrap();
        let n = 6;
        let k = 5;
        let a = rs_numeric_with_dim(&spec, n, k, 192, n as usize + k + 2).unwrap();
        let b = rs_numeric_with_dim(&spec, n, k, 192, n as usize + k + 7).unwrap();
        let ctx = MpCtx::new(192).unwrap();
        for (x, y) in a.values.iter().zip(&b.values) {
            assert!(ctx.c_is_zero(&ctx.c_sub(x, y)));
        }
    }

    #[test]
    fn a2_closed_form_cases() {
        let alt = FamilySpec::alternating(0.0).unwrap();
        let v = a2_closed_form(&alt, 3).unwrap();
        assert!((v.re - 58.0 / 35.0).abs() < 1e-14);
        let v = a2_closed_form(&alt, 2).unwrap();
        assert!((v.re - (1.0 / 3.0 - 9.0 / 5.0)).abs() < 1e-14);
        let pow1 = FamilySpec::power(1.0).unwrap();
        let v = a2_closed_form(&pow1, 2).unwrap();
        assert!((v.re - (1.0 / 3.0 - 4.0 / 5.0)).abs() < 1e-14);
    }

    #[test]
    fn rs_matches_a2_closed_form_across_families() {
        let ctx = MpCtx::new(128).unwrap();
        for spec in [
            FamilySpec::power(0.0).unwrap(),
            FamilySpec::power(1.5).unwrap(),
            FamilySpec::alternating(0.25).unwrap(),
            FamilySpec::block2(1.0).unwrap(),
        ] {
            for n in [1u32, 2, 3, 7, 20] {
                let t = rs_numeric(&spec, n, 2, 128).unwrap();
                let want = a2_closed_form_mp(&spec, n, &ctx).unwrap();
                let d = ctx.to_f64(&ctx.c_abs(&ctx.c_sub(&t.values[2], &want)));
                let s = ctx.to_f64(&ctx.c_abs(&want)).max(1e-30);
                assert!(d / s < 1e-30, "{spec} n={n}: rel {e}", e = d / s);
            }
        }
    }

    #[test]
    fn contour_oracle_matches_rs_small_case() {
        let spec = FamilySpec::power(0.0).unwrap();
        let v = contour_coefficient(&spec, 3, 2, 256, 256).unwrap();
        let ctx = MpCtx::new(256).unwrap();
        let got = ctx.c_to_c64(&v);
        assert!(
            (got.re - 2.0 / 35.0).abs() < 1e-10,
            "contour a_2(3) = {got}"
        );
        assert!(got.im.abs() < 1e-12);
    }

    #[test]
    fn contour_odd_coefficient_vanishes() {
        let spec = FamilySpec::power(0.0).unwrap();
        let v = contour_coefficient(&spec, 3, 3, 256, 192).unwrap();
        let ctx = MpCtx::new(192).unwrap();
        assert!(ctx.to_f64(&ctx.c_abs(&v)) < 1e-10);
    }
}
