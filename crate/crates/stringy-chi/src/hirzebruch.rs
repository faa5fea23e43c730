//! The chi_y characteristic series and genus classes built from it.
//!
//! The normalized series is
//!
//! ```text
//! Q(z) = z(1+y) / (1 - exp(-z(1+y))) - y*z
//! ```
//!
//! whose coefficients are polynomials in `y`: `q_0 = 1`, `q_1 = (1-y)/2`,
//! and `q_k = b_k (1+y)^k` for `k >= 2`, where `b_k` are the Todd series
//! coefficients (`z/(1-exp(-z)) = sum b_k z^k`).  Specializing `y` to
//! `-1`, `0`, `1` recovers `1 + z`, the Todd series, and `z coth z`
//! respectively, which pins the genus to the Euler characteristic, the
//! arithmetic genus and the signature.

use std::sync::{Arc, Mutex, OnceLock};

use num_rational::BigRational;
use num_traits::One;

use crate::graded::{CharSeries, GradedPoly, RingCtx, Var};
use crate::rational::{YPolynomial, YRational};
use crate::Result;

/// Coefficients `b_k` of `z / (1 - exp(-z))` through the given order.
///
/// Computed by inverting `(1 - exp(-z))/z = sum_k (-1)^k z^k/(k+1)!`
/// exactly, so no Bernoulli-number table is baked in (the unit tests pin
/// the classical values independently).
pub fn todd_coeffs(order: usize) -> Vec<BigRational> {
    let mut t = Vec::with_capacity(order + 1);
    let mut factorial = BigRational::one(); // (k+1)! running value
    for k in 0..=order {
        factorial *= BigRational::from_integer(((k + 1) as i64).into());
        let sign = if k % 2 == 0 { 1 } else { -1 };
        t.push(BigRational::new(sign.into(), 1.into()) / &factorial);
    }
    // series inverse: b_0 = 1, b_d = -sum_{j=1..d} t_j b_{d-j}  (t_0 = 1)
    let mut b = vec![BigRational::one(); 1];
    for d in 1..=order {
        let mut acc = BigRational::new(0.into(), 1.into());
        for j in 1..=d {
            acc += &t[j] * &b[d - j];
        }
        b.push(-acc);
    }
    b
}

fn q_cache() -> &'static Mutex<Vec<YRational>> {
    static CACHE: OnceLock<Mutex<Vec<YRational>>> = OnceLock::new();
    CACHE.get_or_init(|| Mutex::new(Vec::new()))
}

/// The series `Q` through the given order; results are memoized (the
/// coefficients do not depend on the truncation order).
pub fn q_series(order: usize) -> CharSeries {
    let mut cache = q_cache().lock().expect("series cache poisoned");
    if cache.len() <= order {
        let b = todd_coeffs(order);
        let one_plus_y = YPolynomial::from_int_coeffs(&[1, 1]);
        let mut coeffs = Vec::with_capacity(order + 1);
        coeffs.push(YRational::one());
        if order >= 1 {
            // (1+y)/2 - y = (1-y)/2
            coeffs.push(YRational::from_polynomial(
                YPolynomial::from_int_coeffs(&[1, -1]).scale(&BigRational::new(1.into(), 2.into())),
            ));
        }
        for k in 2..=order {
            coeffs.push(YRational::from_polynomial(one_plus_y.pow(k as u32).scale(&b[k])));
        }
        *cache = coeffs;
    }
    CharSeries::new(cache[..=order].to_vec())
}

/// `log Q` through the given order.
pub fn r_series(order: usize) -> CharSeries {
    q_series(order).log().expect("Q has constant term 1")
}

/// `1/Q` through the given order.
pub fn q_inverse_series(order: usize) -> CharSeries {
    q_series(order).invert().expect("Q has constant term 1")
}

/// Total Chern class `1 + c_1 + ... + c_n` in a ring containing those
/// variables.
pub fn chern_total(ctx: &Arc<RingCtx>, n: usize) -> Result<GradedPoly> {
    let mut c = GradedPoly::one(ctx);
    for i in 1..=n {
        c = c.add(&GradedPoly::var(ctx, Var::C(i as u8))?);
    }
    Ok(c)
}

/// Sum of the power sums of the Chern roots, `sum_d p_d`, each `p_d`
/// the degree-`d` Newton polynomial in `c_1..c_n`.
///
/// Uses `log prod(1 + x_i) = sum_k (-1)^(k+1) p_k / k`, so
/// `p_k = (-1)^(k+1) k [log C]_k`.
pub fn power_sums(ctx: &Arc<RingCtx>, n: usize) -> Result<GradedPoly> {
    let log_c = chern_total(ctx, n)?.log_series()?;
    let cap = ctx.cap();
    let mut weights = Vec::with_capacity(cap + 1);
    for k in 0..=cap {
        let sign: i64 = if k % 2 == 1 { 1 } else { -1 };
        weights.push(YRational::from_int(sign * k as i64));
    }
    log_c.graded_scale(&CharSeries::new(weights))
}

/// The chi_y genus class of an `n`-dimensional variety with Chern classes
/// `c_1..c_n`: `prod_i Q(x_i) = exp(sum_d R_d p_d)` with `R = log Q`.
pub fn base_class(ctx: &Arc<RingCtx>, n: usize) -> Result<GradedPoly> {
    let p = power_sums(ctx, n)?;
    let r = r_series(ctx.cap());
    p.graded_scale(&r)?.exp_series()
}
