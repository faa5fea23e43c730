//! Pushforwards: blowing exceptional classes back down, and integrating
//! over the fibers of the ambient projective bundle.
//!
//! **Blowdown.**  For a blowup along a smooth center cut by divisor
//! classes `U_1..U_d` (codimension `d`), the pushforward of `E^k` is the
//! constant term of `x^k mod prod_j (x - U_j)`, a homogeneous degree-`k`
//! polynomial `P_k` in the `U_j`.  In particular `P_0 = 1` (classes free
//! of `E` are untouched), `P_k = 0` for `0 < k < d`, and
//! `P_d = (-1)^(d+1) U_1 ... U_d`.  A class `sum_k a_k E^k` with `a_k`
//! free of `E` pushes down to `sum_k a_k P_k`.
//!
//! **Bundle pushforward.**  The ambient variety is the projectivization
//! `P(O + O(2L) + O(3L))` over the base; fiber integration sends `H^k`
//! to the degree-`(k-2)` part of `1/((1+2L)(1+3L))`, and `H^0`, `H^1`
//! to zero.

use std::sync::Arc;

use crate::graded::{GradedPoly, RingCtx, Var};
use crate::{Error, Result};

/// Elementary symmetric polynomials `sigma_0..sigma_d` of the given
/// degree-1 classes.
pub fn elementary_symmetric(classes: &[GradedPoly]) -> Vec<GradedPoly> {
    assert!(!classes.is_empty(), "need at least one class");
    let ctx = classes[0].ctx();
    let mut sigma = vec![GradedPoly::one(ctx)];
    for u in classes {
        let mut next = Vec::with_capacity(sigma.len() + 1);
        next.push(sigma[0].clone());
        for i in 1..=sigma.len() {
            let mut v = if i < sigma.len() { sigma[i].clone() } else { GradedPoly::zero(ctx) };
            v = v.add(&sigma[i - 1].mul(u));
            next.push(v);
        }
        sigma = next;
    }
    sigma
}

/// The pushforward polynomials `P_0..P_max_k` for a center cut by the
/// given classes, via the remainder recurrence
/// `x^(k+1) mod m = x * (x^k mod m) mod m` with `m = prod (x - U_j)`.
pub fn blowdown_polynomials(center: &[GradedPoly], max_k: usize) -> Vec<GradedPoly> {
    let d = center.len();
    assert!(d >= 1, "a blowup center is cut by at least one class");
    let ctx = center[0].ctx();
    let sigma = elementary_symmetric(center);
    // rem[j] = coefficient of x^j in x^k mod m, starting from k = 0.
    let mut rem: Vec<GradedPoly> = vec![GradedPoly::zero(ctx); d];
    rem[0] = GradedPoly::one(ctx);
    let mut out = Vec::with_capacity(max_k + 1);
    out.push(rem[0].clone());
    for _ in 1..=max_k {
        // multiply by x: shift up; reduce x^d = x^d - m(x) (monic m).
        let top = rem[d - 1].clone();
        for j in (1..d).rev() {
            rem[j] = rem[j - 1].clone();
        }
        rem[0] = GradedPoly::zero(ctx);
        if !top.is_zero() {
            // x^d mod m = sum_j (-1)^(d-j+1) sigma_{d-j} x^j
            for (j, r) in rem.iter_mut().enumerate() {
                let s = &sigma[d - j];
                let signed = if (d - j + 1) % 2 == 0 { s.clone() } else { s.neg() };
                *r = r.add(&top.mul(&signed));
            }
        }
        out.push(rem[0].clone());
    }
    out
}

/// Push a class down one blowup: decompose by powers of the exceptional
/// variable and contract each power with the matching `P_k`.
pub fn blowdown(class: &GradedPoly, center: &[GradedPoly], e_var: Var) -> Result<GradedPoly> {
    let parts = class.coefficients_of_var(e_var)?;
    let p = blowdown_polynomials(center, parts.len() - 1);
    let ctx = class.ctx();
    let mut out = GradedPoly::zero(ctx);
    for (k, a) in parts.iter().enumerate() {
        if a.is_zero() || p[k].is_zero() {
            continue;
        }
        out = out.add(&a.mul(&p[k]));
    }
    Ok(out)
}

/// Fiber integration over `P(O + O(2L) + O(3L))`: sends `H^k` to the
/// degree-`(k-2)` part of the inverse of `(1+2L)(1+3L)` and re-expresses
/// the result in `ctx_out` (typically the base ring at a lower cap).
pub fn projective_pushforward(class: &GradedPoly, ctx_out: &Arc<RingCtx>) -> Result<GradedPoly> {
    let ctx = class.ctx();
    if ctx.index_of(Var::H).is_none() {
        return Err(Error::UnknownVariable(Var::H.name()));
    }
    let l = GradedPoly::var(ctx, Var::L)?;
    let two = GradedPoly::one(ctx).add(&l.scale(&crate::rational::YRational::from_int(2)));
    let three = GradedPoly::one(ctx).add(&l.scale(&crate::rational::YRational::from_int(3)));
    let segre = two.mul(&three).invert()?;
    let parts = class.coefficients_of_var(Var::H)?;
    let mut out = GradedPoly::zero(ctx);
    for (k, b) in parts.iter().enumerate() {
        if k < 2 || b.is_zero() {
            continue;
        }
        out = out.add(&b.mul(&segre.homogeneous_part(k - 2)));
    }
    out.into_context(ctx_out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::{bigint_rat, YRational};

    fn u_ring(d: usize, cap: usize) -> Arc<RingCtx> {
        RingCtx::new((1..=d).map(|i| Var::E(i as u8)).collect(), cap)
    }

    fn u_vars(ctx: &Arc<RingCtx>, d: usize) -> Vec<GradedPoly> {
        (1..=d).map(|i| GradedPoly::var(ctx, Var::E(i as u8)).unwrap()).collect()
    }

    #[test]
    fn low_pushforward_polynomials_are_forced() {
        for d in 1..=4 {
            let ctx = u_ring(d, d + 1);
            let u = u_vars(&ctx, d);
            let p = blowdown_polynomials(&u, d);
            assert_eq!(p[0], GradedPoly::one(&ctx), "P_0 = 1 at codim {d}");
            for k in 1..d {
                assert!(p[k].is_zero(), "P_{k} = 0 below codim {d}");
            }
            // P_d = (-1)^(d+1) U_1..U_d
            let mut prod = GradedPoly::one(&ctx);
            for ui in &u {
                prod = prod.mul(ui);
            }
            let expect = if d % 2 == 1 { prod } else { prod.neg() };
            assert_eq!(p[d], expect, "P_d at codim {d}");
        }
    }

    #[test]
    fn codim_two_remainders_match_hand_computation() {
        // x^3 mod (x - U1)(x - U2) has constant term -s1 s2,
        // x^4 has constant term -s2 (s1^2 - s2).
        let ctx = u_ring(2, 6);
        let u = u_vars(&ctx, 2);
        let p = blowdown_polynomials(&u, 4);
        let s = elementary_symmetric(&u);
        assert_eq!(p[2], s[2].neg());
        assert_eq!(p[3], s[1].mul(&s[2]).neg());
        let expect4 = s[2].mul(&s[1].mul(&s[1]).sub(&s[2])).neg();
        assert_eq!(p[4], expect4);
    }

    /// Complete homogeneous symmetric polynomials via the generating
    /// identity `sum_m h_m = 1 / prod_j (1 - U_j)`.
    fn complete_homogeneous(u: &[GradedPoly], m: usize) -> GradedPoly {
        let ctx = u[0].ctx();
        let mut prod = GradedPoly::one(ctx);
        for ui in u {
            prod = prod.mul(&GradedPoly::one(ctx).sub(ui));
        }
        prod.invert().unwrap().homogeneous_part(m)
    }

    #[test]
    fn high_powers_follow_the_complete_homogeneous_formula() {
        // P_k = (-1)^(d+1) sigma_d h_{k-d} for k >= d, checked as formal
        // polynomial identities.
        for d in 2..=3 {
            let ctx = u_ring(d, 8);
            let u = u_vars(&ctx, d);
            let p = blowdown_polynomials(&u, 7);
            let s = elementary_symmetric(&u);
            for k in d..=7 {
                let h = complete_homogeneous(&u, k - d);
                let expect = if d % 2 == 1 { s[d].mul(&h) } else { s[d].mul(&h).neg() };
                assert_eq!(p[k], expect, "P_{k} at codim {d}");
            }
        }
    }

    #[test]
    fn remainders_match_the_lagrange_interpolation_identity() {
        // P_k * prod_i V_i = sum_i U_i^k (prod_{j!=i} U_j)(prod_{m!=i} V_m)
        // with V_i = prod_{j!=i} (U_j - U_i), a formal identity in the U's.
        for d in 2..=3 {
            let max_k = 5usize;
            let cap = max_k + d * (d - 1);
            let ctx = u_ring(d, cap);
            let u = u_vars(&ctx, d);
            let p = blowdown_polynomials(&u, max_k);
            let v: Vec<GradedPoly> = (0..d)
                .map(|i| {
                    let mut prod = GradedPoly::one(&ctx);
                    for (j, uj) in u.iter().enumerate() {
                        if j != i {
                            prod = prod.mul(&uj.sub(&u[i]));
                        }
                    }
                    prod
                })
                .collect();
            let mut w = GradedPoly::one(&ctx);
            for vi in &v {
                w = w.mul(vi);
            }
            for (k, pk) in p.iter().enumerate() {
                let mut rhs = GradedPoly::zero(&ctx);
                for i in 0..d {
                    let mut term = u[i].pow(k as u32);
                    for (j, uj) in u.iter().enumerate() {
                        if j != i {
                            term = term.mul(uj);
                        }
                    }
                    for (m, vm) in v.iter().enumerate() {
                        if m != i {
                            term = term.mul(vm);
                        }
                    }
                    rhs = rhs.add(&term);
                }
                assert_eq!(pk.mul(&w), rhs, "Lagrange identity at d={d}, k={k}");
            }
        }
    }

    #[test]
    fn remainders_match_scalar_evaluation_at_distinct_nodes() {
        // With numeric distinct nodes the interpolation denominators are
        // invertible, so P_k can be checked with honest division.
        let nodes: [i64; 3] = [2, -3, 7];
        let d = nodes.len();
        let ctx = u_ring(d, 6);
        let u = u_vars(&ctx, d);
        let p = blowdown_polynomials(&u, 6);
        for (k, pk) in p.iter().enumerate() {
            // Evaluate the formal P_k at the numeric nodes.
            let mut value = bigint_rat(0);
            for (_, mono, coeff) in pk.iter_terms() {
                let mut term = coeff.eval_at_y(&bigint_rat(0)).unwrap();
                for (v, e) in mono {
                    let Var::E(i) = v else { panic!("unexpected variable") };
                    term *= bigint_rat(nodes[(i - 1) as usize].pow(e));
                }
                value += term;
            }
            // Lagrange with honest division over the rationals.
            let mut acc = YRational::zero();
            for i in 0..d {
                let mut num = YRational::from_int(nodes[i].pow(k as u32));
                let mut den = YRational::one();
                for j in 0..d {
                    if j != i {
                        num = num.mul(&YRational::from_int(nodes[j]));
                        den = den.mul(&YRational::from_int(nodes[j] - nodes[i]));
                    }
                }
                acc = acc.add(&num.div(&den).unwrap());
            }
            assert_eq!(acc.eval_at_y(&bigint_rat(0)).unwrap(), value, "node check at k={k}");
        }
    }

    #[test]
    fn blowdown_contracts_exceptional_powers() {
        // In ring [L, E1], center (L, L): blowdown of (a + b E + c E^2)
        // = a + c * (-L^2); the E^1 part drops.
        let ctx = RingCtx::new(vec![Var::L, Var::E(1)], 4);
        let l = GradedPoly::var(&ctx, Var::L).unwrap();
        let e = GradedPoly::var(&ctx, Var::E(1)).unwrap();
        let class = l
            .scale(&YRational::from_int(5))
            .add(&e.scale(&YRational::from_int(3)))
            .add(&e.pow(2).scale(&YRational::from_int(7)));
        let down = blowdown(&class, &[l.clone(), l.clone()], Var::E(1)).unwrap();
        let expect =
            l.scale(&YRational::from_int(5)).add(&l.pow(2).scale(&YRational::from_int(-7)));
        assert_eq!(down, expect);
    }

    #[test]
    fn blowdown_respects_the_projection_formula() {
        // blowdown(pullback(B) * A) = B * blowdown(A) with B free of E.
        let ctx = RingCtx::new(vec![Var::L, Var::S, Var::E(1)], 5);
        let l = GradedPoly::var(&ctx, Var::L).unwrap();
        let s = GradedPoly::var(&ctx, Var::S).unwrap();
        let e = GradedPoly::var(&ctx, Var::E(1)).unwrap();
        let center = [l.add(&s), s.clone()];
        let b = GradedPoly::one(&ctx).add(&l.scale(&YRational::from_int(2))).add(&s.pow(2));
        let a = GradedPoly::one(&ctx).add(&e.scale(&YRational::from_int(4))).add(&e.pow(2));
        let lhs = blowdown(&b.mul(&a), &center, Var::E(1)).unwrap();
        let rhs = b.mul(&blowdown(&a, &center, Var::E(1)).unwrap());
        assert_eq!(lhs, rhs);
    }

    #[test]
    fn bundle_pushforward_uses_the_segre_expansion() {
        let ambient = RingCtx::new(vec![Var::L, Var::S, Var::H], 5);
        let base = RingCtx::base(3);
        let h = GradedPoly::var(&ambient, Var::H).unwrap();
        let l_base = GradedPoly::var(&base, Var::L).unwrap();
        // H^2 -> 1, H^3 -> -5L, H^4 -> 19L^2, H^5 -> -65L^3
        assert_eq!(
            projective_pushforward(&h.pow(2), &base).unwrap(),
            GradedPoly::one(&base)
        );
        assert_eq!(
            projective_pushforward(&h.pow(3), &base).unwrap(),
            l_base.scale(&YRational::from_int(-5))
        );
        assert_eq!(
            projective_pushforward(&h.pow(4), &base).unwrap(),
            l_base.pow(2).scale(&YRational::from_int(19))
        );
        assert_eq!(
            projective_pushforward(&h.pow(5), &base).unwrap(),
            l_base.pow(3).scale(&YRational::from_int(-65))
        );
        // H^0 and H^1 integrate to zero.
        let ambient_one = GradedPoly::one(&ambient);
        assert!(projective_pushforward(&ambient_one, &base).unwrap().is_zero());
        assert!(projective_pushforward(&h, &base).unwrap().is_zero());
        // Linearity over base classes and re-truncation to the base cap.
        let l_amb = GradedPoly::var(&ambient, Var::L).unwrap();
        let mixed = l_amb.mul(&h.pow(3));
        assert_eq!(
            projective_pushforward(&mixed, &base).unwrap(),
            l_base.pow(2).scale(&YRational::from_int(-5))
        );
    }
}
