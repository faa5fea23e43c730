//! Graded polynomial ring and truncated characteristic series.
//!
//! [`GradedPoly`] is a multivariate polynomial over [`YRational`] in a fixed
//! set of graded variables, truncated at a total-degree cap.  The divisor
//! variables `L`, `S`, `H`, `E1..E8` have degree 1 and the Chern variables
//! `c1..c8` have degree `i`, so the total weighted degree of a monomial is
//! exactly the order it contributes to any generating-function expansion —
//! no bookkeeping variable is stored.
//!
//! [`CharSeries`] is a truncated univariate power series over [`YRational`],
//! used for characteristic series and their logarithms.

use std::collections::BTreeMap;
use std::fmt;
use std::sync::Arc;

use num_rational::BigRational;
use num_traits::One;

use crate::rational::YRational;
use crate::{Error, Result};

/// Maximum number of variables a ring context may carry (packed keys use
/// 6 bits per exponent in a 128-bit word).
const MAX_VARS: usize = 21;
/// Maximum truncation cap (exponents must fit in 6 bits).
const MAX_CAP: usize = 60;

/// A graded ring variable.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Var {
    /// Degree-1 divisor class of the defining line bundle on the base.
    L,
    /// Degree-1 divisor class of the singular locus on the base.
    S,
    /// Degree-1 hyperplane class of the ambient projective bundle.
    H,
    /// Degree-1 exceptional divisor classes, numbered from 1.
    E(u8),
    /// Chern class variables; `c_i` has degree `i`.
    C(u8),
}

impl Var {
    pub fn degree(self) -> usize {
        match self {
            Var::C(i) => i as usize,
            _ => 1,
        }
    }

    pub fn name(self) -> String {
        match self {
            Var::L => "L".to_string(),
            Var::S => "S".to_string(),
            Var::H => "H".to_string(),
            Var::E(i) => format!("E{i}"),
            Var::C(i) => format!("c{i}"),
        }
    }

    /// Inverse of [`Var::name`].
    pub fn parse(s: &str) -> Option<Var> {
        match s {
            "L" => Some(Var::L),
            "S" => Some(Var::S),
            "H" => Some(Var::H),
            _ => {
                let (head, tail) = s.split_at(1);
                let idx: u8 = tail.parse().ok()?;
                if idx == 0 {
                    return None;
                }
                match head {
                    "E" => Some(Var::E(idx)),
                    "c" => Some(Var::C(idx)),
                    _ => None,
                }
            }
        }
    }
}

/// An immutable ring context: the ordered variable list and the degree cap.
///
/// Contexts define packed-key layout, so all binary operations require both
/// operands to share an equal context (enforced by assertion: mixing
/// contexts is a programming error, not a runtime condition).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RingCtx {
    vars: Vec<Var>,
    cap: usize,
}

impl RingCtx {
    pub fn new(vars: Vec<Var>, cap: usize) -> Arc<RingCtx> {
        assert!(vars.len() <= MAX_VARS, "too many ring variables");
        assert!(cap <= MAX_CAP, "cap {cap} exceeds the packed-exponent limit");
        for (i, v) in vars.iter().enumerate() {
            assert!(!vars[..i].contains(v), "duplicate ring variable {}", v.name());
        }
        Arc::new(RingCtx { vars, cap })
    }

    /// Base ring `[L, S]`.
    pub fn base(cap: usize) -> Arc<RingCtx> {
        RingCtx::new(vec![Var::L, Var::S], cap)
    }

    /// Ambient ring `[L, S, H, E1..En]` for a resolution with `n` blowups.
    pub fn ambient(n_blowups: usize, cap: usize) -> Arc<RingCtx> {
        let mut vars = vec![Var::L, Var::S, Var::H];
        for i in 1..=n_blowups {
            vars.push(Var::E(i as u8));
        }
        RingCtx::new(vars, cap)
    }

    /// Chern ring `[c1..cn]` with the given cap.
    pub fn chern(n: usize, cap: usize) -> Arc<RingCtx> {
        RingCtx::new((1..=n).map(|i| Var::C(i as u8)).collect(), cap)
    }

    /// Genus ring `[L, S, c1..cn]` at cap `n`, used for chi_y coefficients
    /// over an `n`-dimensional base.
    pub fn genus(n: usize) -> Arc<RingCtx> {
        let mut vars = vec![Var::L, Var::S];
        vars.extend((1..=n).map(|i| Var::C(i as u8)));
        RingCtx::new(vars, n)
    }

    pub fn cap(&self) -> usize {
        self.cap
    }

    pub fn vars(&self) -> &[Var] {
        &self.vars
    }

    pub fn index_of(&self, v: Var) -> Option<usize> {
        self.vars.iter().position(|&w| w == v)
    }

    fn shift(&self, idx: usize) -> u32 {
        (6 * (self.vars.len() - 1 - idx)) as u32
    }

    fn pack(&self, exps: &[u32]) -> u128 {
        debug_assert_eq!(exps.len(), self.vars.len());
        let mut key = 0u128;
        for (i, &e) in exps.iter().enumerate() {
            debug_assert!(e <= 63);
            key |= (e as u128) << self.shift(i);
        }
        key
    }

    fn unpack(&self, key: u128) -> Vec<u32> {
        (0..self.vars.len()).map(|i| ((key >> self.shift(i)) & 63) as u32).collect()
    }

    fn weighted_degree(&self, exps: &[u32]) -> usize {
        exps.iter().zip(&self.vars).map(|(&e, v)| e as usize * v.degree()).sum()
    }

    fn monomial_string(&self, key: u128) -> String {
        let exps = self.unpack(key);
        let mut parts = Vec::new();
        for (i, &e) in exps.iter().enumerate() {
            if e == 0 {
                continue;
            }
            if e == 1 {
                parts.push(self.vars[i].name());
            } else {
                parts.push(format!("{}^{}", self.vars[i].name(), e));
            }
        }
        if parts.is_empty() {
            "1".to_string()
        } else {
            parts.join("*")
        }
    }
}

/// Truncated graded polynomial.
///
/// # Invariants
/// * Terms are bucketed by total weighted degree `0..=cap`; no stored
///   coefficient is zero.
/// * Packed keys order terms lexicographically by exponent vector, giving
///   deterministic iteration (degree first, then lex).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GradedPoly {
    ctx: Arc<RingCtx>,
    terms: Vec<BTreeMap<u128, YRational>>,
}

fn assert_same_ctx(a: &GradedPoly, b: &GradedPoly) {
    assert!(
        Arc::ptr_eq(&a.ctx, &b.ctx) || a.ctx == b.ctx,
        "graded-ring operation across different ring contexts"
    );
}

impl GradedPoly {
    pub fn zero(ctx: &Arc<RingCtx>) -> Self {
        let terms = vec![BTreeMap::new(); ctx.cap + 1];
        GradedPoly { ctx: Arc::clone(ctx), terms }
    }

    pub fn one(ctx: &Arc<RingCtx>) -> Self {
        GradedPoly::constant(ctx, YRational::one())
    }

    pub fn constant(ctx: &Arc<RingCtx>, c: YRational) -> Self {
        let mut p = GradedPoly::zero(ctx);
        if !c.is_zero() {
            p.terms[0].insert(0u128, c);
        }
        p
    }

    /// The variable `v` as a polynomial; errors if the ring lacks it or the
    /// cap cannot hold its degree.
    pub fn var(ctx: &Arc<RingCtx>, v: Var) -> Result<Self> {
        let idx = ctx.index_of(v).ok_or_else(|| Error::UnknownVariable(v.name()))?;
        let mut p = GradedPoly::zero(ctx);
        let d = v.degree();
        if d <= ctx.cap {
            let mut exps = vec![0u32; ctx.vars.len()];
            exps[idx] = 1;
            p.terms[d].insert(ctx.pack(&exps), YRational::one());
        }
        p.ensure_clean();
        Ok(p)
    }

    /// Integer linear combination of degree-1 variables plus a constant —
    /// the shape of every divisor class in the pipeline.
    pub fn linear(ctx: &Arc<RingCtx>, terms: &[(i64, Var)]) -> Result<Self> {
        let mut p = GradedPoly::zero(ctx);
        for &(c, v) in terms {
            if c == 0 {
                continue;
            }
            p = p.add(&GradedPoly::var(ctx, v)?.scale(&YRational::from_int(c)));
        }
        Ok(p)
    }

    /// Build from explicit monomials; exponents list `(var, exp)` pairs.
    pub fn from_monomials(
        ctx: &Arc<RingCtx>,
        monomials: &[(YRational, &[(Var, u32)])],
    ) -> Result<Self> {
        let mut p = GradedPoly::zero(ctx);
        for (c, mono) in monomials {
            if c.is_zero() {
                continue;
            }
            let mut exps = vec![0u32; ctx.vars.len()];
            for &(v, e) in mono.iter() {
                let idx = ctx.index_of(v).ok_or_else(|| Error::UnknownVariable(v.name()))?;
                exps[idx] += e;
            }
            let d = ctx.weighted_degree(&exps);
            if d <= ctx.cap {
                let entry = p.terms[d].entry(ctx.pack(&exps)).or_insert_with(YRational::zero);
                *entry = entry.add(c);
            }
        }
        p.ensure_clean();
        Ok(p)
    }

    pub fn ctx(&self) -> &Arc<RingCtx> {
        &self.ctx
    }

    pub fn cap(&self) -> usize {
        self.ctx.cap
    }

    pub fn is_zero(&self) -> bool {
        self.terms.iter().all(|m| m.is_empty())
    }

    fn ensure_clean(&mut self) {
        for m in &mut self.terms {
            m.retain(|_, c| !c.is_zero());
        }
    }

    /// Degree-0 part as a scalar.
    pub fn constant_term(&self) -> YRational {
        self.terms[0].get(&0u128).cloned().unwrap_or_else(YRational::zero)
    }

    /// Coefficient of the given monomial (missing variables mean exponent 0).
    pub fn coefficient(&self, mono: &[(Var, u32)]) -> YRational {
        let mut exps = vec![0u32; self.ctx.vars.len()];
        for &(v, e) in mono {
            match self.ctx.index_of(v) {
                Some(idx) => exps[idx] += e,
                None => return YRational::zero(),
            }
        }
        let d = self.ctx.weighted_degree(&exps);
        if d > self.ctx.cap {
            return YRational::zero();
        }
        self.terms[d].get(&self.ctx.pack(&exps)).cloned().unwrap_or_else(YRational::zero)
    }

    /// Iterate terms as `(degree, monomial exponents, coefficient)` in the
    /// canonical order.
    pub fn iter_terms(&self) -> impl Iterator<Item = (usize, Vec<(Var, u32)>, &YRational)> + '_ {
        self.terms.iter().enumerate().flat_map(move |(d, m)| {
            m.iter().map(move |(k, c)| {
                let exps = self.ctx.unpack(*k);
                let mono: Vec<(Var, u32)> = exps
                    .iter()
                    .enumerate()
                    .filter(|(_, e)| **e > 0)
                    .map(|(i, e)| (self.ctx.vars[i], *e))
                    .collect();
                (d, mono, c)
            })
        })
    }

    pub fn add(&self, other: &Self) -> Self {
        assert_same_ctx(self, other);
        let mut out = self.clone();
        for (d, m) in other.terms.iter().enumerate() {
            for (k, c) in m {
                let entry = out.terms[d].entry(*k).or_insert_with(YRational::zero);
                *entry = entry.add(c);
            }
        }
        out.ensure_clean();
        out
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.neg())
    }

    pub fn neg(&self) -> Self {
        let mut out = self.clone();
        for m in &mut out.terms {
            for c in m.values_mut() {
                *c = c.neg();
            }
        }
        out
    }

    pub fn scale(&self, c: &YRational) -> Self {
        if c.is_zero() {
            return GradedPoly::zero(&self.ctx);
        }
        let mut out = self.clone();
        for m in &mut out.terms {
            for v in m.values_mut() {
                *v = v.mul(c);
            }
        }
        out
    }

    /// Truncation-aware product: only degree pairs summing to at most the
    /// cap are formed, so truncation commutes with multiplication.
    pub fn mul(&self, other: &Self) -> Self {
        assert_same_ctx(self, other);
        let cap = self.ctx.cap;
        let mut out = GradedPoly::zero(&self.ctx);
        for (d1, m1) in self.terms.iter().enumerate() {
            if m1.is_empty() {
                continue;
            }
            for (d2, m2) in other.terms.iter().enumerate() {
                if d1 + d2 > cap {
                    break;
                }
                if m2.is_empty() {
                    continue;
                }
                let bucket = &mut out.terms[d1 + d2];
                for (k1, c1) in m1 {
                    for (k2, c2) in m2 {
                        let prod = c1.mul(c2);
                        let entry = bucket.entry(k1 + k2).or_insert_with(YRational::zero);
                        *entry = entry.add(&prod);
                    }
                }
            }
        }
        out.ensure_clean();
        out
    }

    pub fn pow(&self, mut e: u32) -> Self {
        let mut base = self.clone();
        let mut acc = GradedPoly::one(&self.ctx);
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul(&base);
            }
            e >>= 1;
            if e > 0 {
                base = base.mul(&base);
            }
        }
        acc
    }

    /// Only the degree-`d` homogeneous part.
    pub fn homogeneous_part(&self, d: usize) -> Self {
        let mut out = GradedPoly::zero(&self.ctx);
        if d <= self.ctx.cap {
            out.terms[d] = self.terms[d].clone();
        }
        out
    }

    /// Multiplicative inverse of a series with unit constant term, solved
    /// degree by degree.
    pub fn invert(&self) -> Result<Self> {
        let c0 = self.constant_term();
        if c0.is_zero() {
            return Err(Error::NonUnitConstantTerm);
        }
        let inv_c0 = c0.inverse()?;
        let cap = self.ctx.cap;
        let mut out = GradedPoly::zero(&self.ctx);
        out.terms[0].insert(0u128, inv_c0.clone());
        for d in 1..=cap {
            // out_d = -inv_c0 * sum_{j=1..d} self_j * out_{d-j}
            let mut bucket: BTreeMap<u128, YRational> = BTreeMap::new();
            for j in 1..=d {
                let mj = &self.terms[j];
                if mj.is_empty() {
                    continue;
                }
                let mo = out.terms[d - j].clone();
                for (k1, c1) in mj {
                    for (k2, c2) in &mo {
                        let prod = c1.mul(c2);
                        let entry = bucket.entry(k1 + k2).or_insert_with(YRational::zero);
                        *entry = entry.add(&prod);
                    }
                }
            }
            let neg_inv = inv_c0.neg();
            for (k, c) in bucket {
                let v = c.mul(&neg_inv);
                if !v.is_zero() {
                    out.terms[d].insert(k, v);
                }
            }
        }
        Ok(out)
    }

    /// `exp` of a polynomial with zero constant term, by truncated Taylor
    /// expansion.
    pub fn exp_series(&self) -> Result<Self> {
        if !self.constant_term().is_zero() {
            return Err(Error::BadConstantTerm {
                expected: "0",
                found: self.constant_term().to_string(),
            });
        }
        let cap = self.ctx.cap;
        let mut acc = GradedPoly::one(&self.ctx);
        let mut term = GradedPoly::one(&self.ctx);
        for k in 1..=cap {
            term = term.mul(self).scale(&YRational::from_bigrat(BigRational::new(
                1.into(),
                (k as i64).into(),
            )));
            if term.is_zero() {
                break;
            }
            acc = acc.add(&term);
        }
        Ok(acc)
    }

    /// `log` of a polynomial with constant term 1, by truncated Taylor
    /// expansion of `log(1 + N)`.
    pub fn log_series(&self) -> Result<Self> {
        if !self.constant_term().is_one() {
            return Err(Error::BadConstantTerm {
                expected: "1",
                found: self.constant_term().to_string(),
            });
        }
        let n = self.sub(&GradedPoly::one(&self.ctx));
        let cap = self.ctx.cap;
        let mut acc = GradedPoly::zero(&self.ctx);
        let mut power = GradedPoly::one(&self.ctx);
        for k in 1..=cap {
            power = power.mul(&n);
            if power.is_zero() {
                break;
            }
            let sign = if k % 2 == 1 { 1 } else { -1 };
            acc = acc.add(&power.scale(&YRational::from_bigrat(BigRational::new(
                sign.into(),
                (k as i64).into(),
            ))));
        }
        Ok(acc)
    }

    /// Hadamard-style degree scaling: the degree-`d` part is multiplied by
    /// the `d`-th coefficient of `r`.
    pub fn graded_scale(&self, r: &CharSeries) -> Result<Self> {
        if r.order() < self.ctx.cap {
            return Err(Error::SeriesOrderTooSmall { need: self.ctx.cap, have: r.order() });
        }
        let mut out = GradedPoly::zero(&self.ctx);
        for (d, m) in self.terms.iter().enumerate() {
            let s = r.coeff(d);
            if s.is_zero() {
                continue;
            }
            for (k, c) in m {
                let v = c.mul(s);
                if !v.is_zero() {
                    out.terms[d].insert(*k, v);
                }
            }
        }
        Ok(out)
    }

    /// Series composition `s(D)` for a divisor argument with zero constant
    /// term.
    pub fn apply_series(s: &CharSeries, d: &GradedPoly) -> Result<Self> {
        GradedPoly::one(&d.ctx).mul_series_app(s, d)
    }

    /// Fused product `self * s(D)`.
    ///
    /// `D` must have zero constant term and `s.order() >= cap`.  When `D`
    /// is homogeneous of degree 1 — every divisor class in the pipeline —
    /// the degreewise evaluation below touches each shrinking bucket once,
    /// which is what makes large ambient computations tractable.
    pub fn mul_series_app(&self, s: &CharSeries, d: &GradedPoly) -> Result<Self> {
        let cap = self.ctx.cap;
        assert_same_ctx(self, d);
        if !d.constant_term().is_zero() {
            return Err(Error::BadConstantTerm {
                expected: "0",
                found: d.constant_term().to_string(),
            });
        }
        if s.order() < cap {
            return Err(Error::SeriesOrderTooSmall { need: cap, have: s.order() });
        }
        // Powers of D, each computed once.
        let mut out = self.scale(s.coeff(0));
        let mut dpow = GradedPoly::one(&self.ctx);
        for j in 1..=cap {
            dpow = dpow.mul(d);
            if dpow.is_zero() {
                break;
            }
            let sj = s.coeff(j);
            if sj.is_zero() {
                continue;
            }
            // out += s_j * self * D^j, bucket by bucket.
            for (d1, m1) in self.terms.iter().enumerate() {
                if m1.is_empty() {
                    continue;
                }
                for (d2, m2) in dpow.terms.iter().enumerate() {
                    if d1 + d2 > cap {
                        break;
                    }
                    if m2.is_empty() {
                        continue;
                    }
                    let mut tmp: BTreeMap<u128, YRational> = BTreeMap::new();
                    for (k1, c1) in m1 {
                        for (k2, c2) in m2 {
                            let prod = c1.mul(c2);
                            let entry = tmp.entry(k1 + k2).or_insert_with(YRational::zero);
                            *entry = entry.add(&prod);
                        }
                    }
                    let bucket = &mut out.terms[d1 + d2];
                    for (k, c) in tmp {
                        let v = c.mul(sj);
                        if v.is_zero() {
                            continue;
                        }
                        let entry = bucket.entry(k).or_insert_with(YRational::zero);
                        *entry = entry.add(&v);
                    }
                }
            }
        }
        out.ensure_clean();
        Ok(out)
    }

    /// Fused quotient `self / s(D)` for homogeneous degree-1 `D`, solved
    /// degree by degree; requires a unit `s` constant term.
    pub fn div_series_app(&self, s: &CharSeries, d: &GradedPoly) -> Result<Self> {
        let cap = self.ctx.cap;
        assert_same_ctx(self, d);
        if s.order() < cap {
            return Err(Error::SeriesOrderTooSmall { need: cap, have: s.order() });
        }
        let s0 = s.coeff(0);
        if s0.is_zero() {
            return Err(Error::NonUnitConstantTerm);
        }
        for (deg, m) in d.terms.iter().enumerate() {
            if deg != 1 && !m.is_empty() {
                return Err(Error::BadConstantTerm {
                    expected: "0 (homogeneous degree-1 divisor)",
                    found: d.constant_term().to_string(),
                });
            }
        }
        let inv_s0 = s0.inverse()?;
        // Precompute homogeneous powers of D: deg(D^j) = j exactly.
        let mut dpows: Vec<GradedPoly> = vec![GradedPoly::one(&self.ctx)];
        for j in 1..=cap {
            let next = dpows[j - 1].mul(d);
            if next.is_zero() {
                break;
            }
            dpows.push(next);
        }
        let mut out = GradedPoly::zero(&self.ctx);
        for deg in 0..=cap {
            // bucket = self_deg - sum_{j>=1} s_j * (out_{deg-j} * D^j)
            let mut bucket: BTreeMap<u128, YRational> = self.terms[deg].clone();
            for j in 1..=deg.min(dpows.len() - 1) {
                let sj = s.coeff(j);
                if sj.is_zero() {
                    continue;
                }
                let neg_sj = sj.neg();
                let prev = &out.terms[deg - j];
                if prev.is_empty() {
                    continue;
                }
                let mut tmp: BTreeMap<u128, YRational> = BTreeMap::new();
                for (k1, c1) in prev {
                    for (k2, c2) in &dpows[j].terms[j] {
                        let prod = c1.mul(c2);
                        let entry = tmp.entry(k1 + k2).or_insert_with(YRational::zero);
                        *entry = entry.add(&prod);
                    }
                }
                for (k, c) in tmp {
                    let v = c.mul(&neg_sj);
                    if v.is_zero() {
                        continue;
                    }
                    let entry = bucket.entry(k).or_insert_with(YRational::zero);
                    *entry = entry.add(&v);
                }
            }
            for (k, c) in bucket {
                let v = c.mul(&inv_s0);
                if !v.is_zero() {
                    out.terms[deg].insert(k, v);
                }
            }
        }
        Ok(out)
    }

    /// Substitute variables by polynomials of the same ring; every
    /// replacement must be homogeneous of the variable's degree.
    pub fn substitute(&self, rules: &[(Var, GradedPoly)]) -> Result<Self> {
        for (v, rhs) in rules {
            assert_same_ctx(self, rhs);
            let vd = v.degree();
            if self.ctx.index_of(*v).is_none() {
                return Err(Error::UnknownVariable(v.name()));
            }
            for (d, m) in rhs.terms.iter().enumerate() {
                if d != vd && !m.is_empty() {
                    return Err(Error::DegreeIncompatibleSubstitution {
                        var: v.name(),
                        degree: vd,
                    });
                }
            }
        }
        let mut out = GradedPoly::zero(&self.ctx);
        let mut power_cache: Vec<Vec<GradedPoly>> =
            rules.iter().map(|(_, rhs)| vec![GradedPoly::one(&self.ctx), rhs.clone()]).collect();
        for (_, m) in self.terms.iter().enumerate() {
            for (k, c) in m {
                let mut exps = self.ctx.unpack(*k);
                let mut factor: Option<GradedPoly> = None;
                for (ri, (v, _)) in rules.iter().enumerate() {
                    let idx = self.ctx.index_of(*v).expect("checked above");
                    let e = exps[idx] as usize;
                    if e == 0 {
                        continue;
                    }
                    exps[idx] = 0;
                    while power_cache[ri].len() <= e {
                        let next = power_cache[ri].last().unwrap().mul(&power_cache[ri][1]);
                        power_cache[ri].push(next);
                    }
                    let p = &power_cache[ri][e];
                    factor = Some(match factor {
                        None => p.clone(),
                        Some(f) => f.mul(p),
                    });
                }
                let rest_deg = self.ctx.weighted_degree(&exps);
                let mut base = GradedPoly::zero(&self.ctx);
                if rest_deg <= self.ctx.cap {
                    base.terms[rest_deg].insert(self.ctx.pack(&exps), c.clone());
                }
                let contrib = match factor {
                    None => base,
                    Some(f) => base.mul(&f),
                };
                out = out.add(&contrib);
            }
        }
        Ok(out)
    }

    /// Rewrite every monomial divisible by `pattern` once: strip one copy of
    /// the pattern and scale by `value`.  Used for intersection-number
    /// substitutions such as `c1*c2 -> 24`.
    pub fn rewrite_monomial(&self, pattern: &[(Var, u32)], value: &YRational) -> Result<Self> {
        let mut pat = vec![0u32; self.ctx.vars.len()];
        for &(v, e) in pattern {
            let idx = self.ctx.index_of(v).ok_or_else(|| Error::UnknownVariable(v.name()))?;
            pat[idx] += e;
        }
        let mut out = GradedPoly::zero(&self.ctx);
        for m in self.terms.iter() {
            for (k, c) in m {
                let mut exps = self.ctx.unpack(*k);
                let divisible = exps.iter().zip(&pat).all(|(e, p)| e >= p);
                let coeff;
                if divisible {
                    for (e, p) in exps.iter_mut().zip(&pat) {
                        *e -= p;
                    }
                    coeff = c.mul(value);
                } else {
                    coeff = c.clone();
                }
                if coeff.is_zero() {
                    continue;
                }
                let d = self.ctx.weighted_degree(&exps);
                if d <= self.ctx.cap {
                    let entry =
                        out.terms[d].entry(self.ctx.pack(&exps)).or_insert_with(YRational::zero);
                    *entry = entry.add(&coeff);
                }
            }
        }
        out.ensure_clean();
        Ok(out)
    }

    /// Decompose as `sum_k a_k * v^k` with every `a_k` free of `v`;
    /// returns the `a_k` in ascending `k`.
    pub fn coefficients_of_var(&self, v: Var) -> Result<Vec<GradedPoly>> {
        let idx = self.ctx.index_of(v).ok_or_else(|| Error::UnknownVariable(v.name()))?;
        let mut out: Vec<GradedPoly> = Vec::new();
        for (_, m) in self.terms.iter().enumerate() {
            for (k, c) in m {
                let mut exps = self.ctx.unpack(*k);
                let e = exps[idx] as usize;
                exps[idx] = 0;
                while out.len() <= e {
                    out.push(GradedPoly::zero(&self.ctx));
                }
                let d = self.ctx.weighted_degree(&exps);
                out[e].terms[d].insert(self.ctx.pack(&exps), c.clone());
            }
        }
        if out.is_empty() {
            out.push(GradedPoly::zero(&self.ctx));
        }
        Ok(out)
    }

    /// Re-express in another context.  Terms whose degree exceeds the new
    /// cap are dropped (re-truncation); a nonzero exponent on a variable
    /// the new context lacks is an error.
    pub fn into_context(&self, new_ctx: &Arc<RingCtx>) -> Result<GradedPoly> {
        let mut out = GradedPoly::zero(new_ctx);
        let mapping: Vec<Option<usize>> =
            self.ctx.vars.iter().map(|v| new_ctx.index_of(*v)).collect();
        for (d, m) in self.terms.iter().enumerate() {
            for (k, c) in m {
                let exps = self.ctx.unpack(*k);
                let mut new_exps = vec![0u32; new_ctx.vars.len()];
                let mut ok = true;
                for (i, &e) in exps.iter().enumerate() {
                    if e == 0 {
                        continue;
                    }
                    match mapping[i] {
                        Some(j) => new_exps[j] = e,
                        None => {
                            return Err(Error::UnknownVariable(self.ctx.vars[i].name()));
                        }
                    }
                }
                if d > new_ctx.cap {
                    ok = false;
                }
                if ok {
                    out.terms[d].insert(new_ctx.pack(&new_exps), c.clone());
                }
            }
        }
        Ok(out)
    }

    /// First monomial (in canonical order) where two polynomials differ.
    pub fn first_difference(&self, other: &Self) -> Option<(String, YRational, YRational)> {
        assert_same_ctx(self, other);
        for d in 0..=self.ctx.cap {
            let mut keys: Vec<u128> =
                self.terms[d].keys().chain(other.terms[d].keys()).cloned().collect();
            keys.sort_unstable();
            keys.dedup();
            for k in keys {
                let a = self.terms[d].get(&k).cloned().unwrap_or_else(YRational::zero);
                let b = other.terms[d].get(&k).cloned().unwrap_or_else(YRational::zero);
                if a != b {
                    return Some((self.ctx.monomial_string(k), a, b));
                }
            }
        }
        None
    }
}

impl fmt::Display for GradedPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for (d, m) in self.terms.iter().enumerate() {
            let _ = d;
            for (k, c) in m {
                let t = term_string(c, &self.ctx.monomial_string(*k));
                if first {
                    write!(f, "{t}")?;
                } else if t.starts_with('-') {
                    write!(f, "{t}")?;
                } else {
                    write!(f, "+{t}")?;
                }
                first = false;
            }
        }
        if first {
            write!(f, "0")?;
        }
        Ok(())
    }
}

/// Render one term: coefficient times monomial, following the canonical
/// text convention.
fn term_string(coeff: &YRational, mono: &str) -> String {
    if mono == "1" {
        return coeff.to_string();
    }
    if coeff.is_one() {
        return mono.to_string();
    }
    if coeff == &YRational::from_int(-1) {
        return format!("-{mono}");
    }
    let c = coeff.to_string();
    let needs_parens = c.contains('/') || c[1..].contains('+') || c[1..].contains('-');
    if needs_parens {
        format!("({c})*{mono}")
    } else {
        format!("{c}*{mono}")
    }
}

/// Truncated univariate power series over the coefficient field.
///
/// # Invariants
/// * `coeffs.len() == order + 1`; the series is exact through its order.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CharSeries {
    coeffs: Vec<YRational>,
}

impl CharSeries {
    pub fn new(coeffs: Vec<YRational>) -> Self {
        assert!(!coeffs.is_empty(), "a series carries at least its constant term");
        CharSeries { coeffs }
    }

    pub fn order(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn coeff(&self, k: usize) -> &YRational {
        &self.coeffs[k]
    }

    pub fn coeffs(&self) -> &[YRational] {
        &self.coeffs
    }

    /// The exponential series `sum z^k / k!` to the given order.
    pub fn exponential(order: usize) -> Self {
        let mut coeffs = Vec::with_capacity(order + 1);
        let mut factorial = BigRational::one();
        for k in 0..=order {
            if k > 0 {
                factorial *= BigRational::from_integer((k as i64).into());
            }
            coeffs.push(YRational::from_bigrat(BigRational::one() / &factorial));
        }
        CharSeries::new(coeffs)
    }

    /// Multiplicative inverse; requires a unit constant term.
    pub fn invert(&self) -> Result<Self> {
        let c0 = &self.coeffs[0];
        if c0.is_zero() {
            return Err(Error::NonUnitConstantTerm);
        }
        let inv0 = c0.inverse()?;
        let mut out = vec![YRational::zero(); self.coeffs.len()];
        out[0] = inv0.clone();
        for d in 1..self.coeffs.len() {
            let mut acc = YRational::zero();
            for j in 1..=d {
                acc = acc.add(&self.coeffs[j].mul(&out[d - j]));
            }
            out[d] = acc.neg().mul(&inv0);
        }
        Ok(CharSeries::new(out))
    }

    /// Series logarithm; requires constant term 1.
    pub fn log(&self) -> Result<Self> {
        if !self.coeffs[0].is_one() {
            return Err(Error::BadConstantTerm {
                expected: "1",
                found: self.coeffs[0].to_string(),
            });
        }
        let n = self.coeffs.len();
        let mut r = vec![YRational::zero(); n];
        for k in 1..n {
            // k*q_k = sum_{j=1..k} j*r_j*q_{k-j}  =>  solve for r_k.
            let mut acc = self.coeffs[k].scale(&BigRational::from_integer((k as i64).into()));
            for j in 1..k {
                let t = r[j]
                    .mul(&self.coeffs[k - j])
                    .scale(&BigRational::from_integer((j as i64).into()));
                acc = acc.sub(&t);
            }
            r[k] = acc.scale(&BigRational::new(1.into(), (k as i64).into()));
        }
        Ok(CharSeries::new(r))
    }

    pub fn mul(&self, other: &Self) -> Self {
        let n = self.coeffs.len().min(other.coeffs.len());
        let mut out = vec![YRational::zero(); n];
        for d in 0..n {
            let mut acc = YRational::zero();
            for j in 0..=d {
                acc = acc.add(&self.coeffs[j].mul(&other.coeffs[d - j]));
            }
            out[d] = acc;
        }
        CharSeries::new(out)
    }

    /// Evaluate every coefficient at a rational `y`; errors at poles.
    pub fn eval_at_y(&self, y0: &BigRational) -> Result<Vec<BigRational>> {
        self.coeffs.iter().map(|c| c.eval_at_y(y0)).collect()
    }
}
