//! The resolution pipeline: blowup bookkeeping for each catalog model,
//! assembly of the stringy characteristic-class factor on the resolved
//! hypersurface, pushforward down the blowup chain and the projective
//! bundle, and the genus-level consumers (χ_y coefficients, stringy Euler
//! numbers, Hodge-number relations, catalog cross-checks).

use std::sync::Arc;

use num_rational::BigRational;
use num_traits::One;

use crate::catalog::{expand_closed_form, WeierstrassModel};
use crate::graded::{GradedPoly, RingCtx, Var};
use crate::hirzebruch::{base_class, q_series};
use crate::pushforward::{blowdown, projective_pushforward};
use crate::rational::{YPolynomial, YRational};
use crate::{Error, Result};

/// One blowup along a smooth complete-intersection center.
#[derive(Debug, Clone)]
pub struct ResolutionStep {
    /// Generator names defining the center.
    pub center: Vec<String>,
    /// Divisor classes of those generators at the time of this blowup.
    pub center_classes: Vec<GradedPoly>,
    /// The exceptional divisor variable introduced by this step.
    pub exceptional: Var,
    /// Multiplicity of the hypersurface proper transform along the center
    /// (`codim - 1`, the crepancy value).
    pub multiplicity: i64,
}

/// A model's full resolution data in the ambient ring `[L, S, H, E_i]`.
#[derive(Debug, Clone)]
pub struct ResolvedModel {
    pub gauge_label: String,
    pub ctx: Arc<RingCtx>,
    pub steps: Vec<ResolutionStep>,
    /// Class of the resolved hypersurface: `3H + 6L - sum m_i E_i`.
    pub y_class: GradedPoly,
    /// Final generator-class table after all steps.
    pub section_table: Vec<(String, GradedPoly)>,
}

impl ResolvedModel {
    /// Rebuild `y_class` from the recorded step multiplicities.  Used by
    /// negative controls that deliberately corrupt a step.
    pub fn recompute_y_class(&mut self) -> Result<()> {
        let mut y = GradedPoly::linear(&self.ctx, &[(3, Var::H), (6, Var::L)])?;
        for step in &self.steps {
            let e = GradedPoly::var(&self.ctx, step.exceptional)?;
            y = y.sub(&e.scale(&YRational::from_int(step.multiplicity)));
        }
        self.y_class = y;
        Ok(())
    }
}

/// Walk a model's center list, recording each blowup.
///
/// The generator-class table starts at `x -> H+2L`, `y -> H+3L`, `z -> H`,
/// `s -> S`.  Each step reads the *current* classes of the named
/// generators, then applies the proper-transform rule: every generator of
/// the center has the new exceptional class subtracted, and the new
/// generator `e_i -> E_i` is added.  The hypersurface class accumulates
/// `-m E_i` with `m = codim - 1`.
pub fn resolve(model: &WeierstrassModel, cap: usize) -> Result<ResolvedModel> {
    let n = model.n_blowups();
    let ctx = RingCtx::ambient(n, cap);
    let mut table: Vec<(String, GradedPoly)> = vec![
        ("x".to_string(), GradedPoly::linear(&ctx, &[(1, Var::H), (2, Var::L)])?),
        ("y".to_string(), GradedPoly::linear(&ctx, &[(1, Var::H), (3, Var::L)])?),
        ("z".to_string(), GradedPoly::var(&ctx, Var::H)?),
        ("s".to_string(), GradedPoly::var(&ctx, Var::S)?),
    ];
    let mut y_class = GradedPoly::linear(&ctx, &[(3, Var::H), (6, Var::L)])?;
    let mut steps = Vec::with_capacity(n);
    for (i, center) in model.centers.iter().enumerate() {
        let step_no = i + 1;
        let e_var = Var::E(step_no as u8);
        let e_poly = GradedPoly::var(&ctx, e_var)?;
        let mut center_classes = Vec::with_capacity(center.len());
        for g in center {
            let entry = table.iter().find(|(name, _)| name == g).ok_or_else(|| {
                Error::UnknownGenerator(format!("`{g}` is not defined at step {step_no}"))
            })?;
            center_classes.push(entry.1.clone());
        }
        let multiplicity = center.len() as i64 - 1;
        for g in center {
            let entry = table.iter_mut().find(|(name, _)| name == g).unwrap();
            entry.1 = entry.1.sub(&e_poly);
        }
        table.push((format!("e{step_no}"), e_poly.clone()));
        y_class = y_class.sub(&e_poly.scale(&YRational::from_int(multiplicity)));
        steps.push(ResolutionStep {
            center: center.clone(),
            center_classes,
            exceptional: e_var,
            multiplicity,
        });
    }
    Ok(ResolvedModel {
        gauge_label: model.gauge_label.clone(),
        ctx,
        steps,
        y_class,
        section_table: table,
    })
}

/// Assemble the generating function from resolution data.
///
/// Starting from the fundamental-class factor `[Y_n] / Q([Y_n])`, each
/// level contributes `Q(E_i) * prod_U Q(U - E_i) / prod_U Q(U)` over its
/// recorded center classes `U`, after which `E_i` is contracted; levels
/// are processed innermost-last (`E_n` first).  The ambient bundle
/// contributes `Q(H) Q(H+2L) Q(H+3L)`, the result is pushed down the
/// projective bundle, and an `S = kL` relation is applied last.  The base
/// Hirzebruch class is *not* included: the return value multiplies it at
/// genus time.
pub fn assemble_qy(
    resolved: &ResolvedModel,
    cap: usize,
    s_relation: Option<i64>,
) -> Result<GradedPoly> {
    let ambient_cap = resolved.ctx.cap();
    debug_assert!(ambient_cap >= cap + 2, "ambient ring too small for pushforward");
    let q = q_series(ambient_cap);
    let mut acc = resolved.y_class.clone();
    acc = acc.div_series_app(&q, &resolved.y_class)?;
    for step in resolved.steps.iter().rev() {
        let e_poly = GradedPoly::var(&resolved.ctx, step.exceptional)?;
        acc = acc.mul_series_app(&q, &e_poly)?;
        for u in &step.center_classes {
            acc = acc.mul_series_app(&q, &u.sub(&e_poly))?;
        }
        for u in &step.center_classes {
            acc = acc.div_series_app(&q, u)?;
        }
        acc = blowdown(&acc, &step.center_classes, step.exceptional)?;
    }
    let ambient_factors: [&[(i64, Var)]; 3] = [
        &[(1, Var::H)],
        &[(1, Var::H), (2, Var::L)],
        &[(1, Var::H), (3, Var::L)],
    ];
    for coeffs in ambient_factors {
        let a = GradedPoly::linear(&resolved.ctx, coeffs)?;
        acc = acc.mul_series_app(&q, &a)?;
    }
    let base_ctx = RingCtx::base(cap);
    let mut out = projective_pushforward(&acc, &base_ctx)?;
    if let Some(k) = s_relation {
        let kl = GradedPoly::linear(&base_ctx, &[(k, Var::L)])?;
        out = out.substitute(&[(Var::S, kl)])?;
    }
    Ok(out)
}

/// Run the full derivation for a model: resolve, assemble, push down.
pub fn derive_qy(model: &WeierstrassModel, cap: usize) -> Result<GradedPoly> {
    let resolved = resolve(model, cap + 2)?;
    assemble_qy(&resolved, cap, model.s_relation)
}

/// Where a generating function comes from.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum QySource {
    Pipeline,
    Catalog,
}

/// Generating function from the requested source.  A catalog entry with
/// no stored closed form (the smooth model) falls back to the pipeline,
/// which is where its expansion is defined.
pub fn qy(model: &WeierstrassModel, cap: usize, source: QySource) -> Result<GradedPoly> {
    match source {
        QySource::Pipeline => derive_qy(model, cap),
        QySource::Catalog => {
            if model.closed_form.is_some() {
                expand_closed_form(model, cap)
            } else {
                derive_qy(model, cap)
            }
        }
    }
}

/// χ_y-genus data for one model at one base dimension.
#[derive(Debug, Clone)]
pub struct ChiResult {
    pub model: String,
    pub base_dim: usize,
    pub calabi_yau: bool,
    /// Degree-`base_dim` part of `Q_Y * T_y(B)` in the genus ring (with
    /// `L -> c1` already substituted in Calabi-Yau mode).
    pub chi_poly: GradedPoly,
    /// Per-monomial coefficients, reduced to polynomials in `y`.
    pub coefficients: Vec<(String, YPolynomial)>,
}

fn monomial_name(mono: &[(Var, u32)]) -> String {
    if mono.is_empty() {
        return "1".to_string();
    }
    mono.iter()
        .map(|(v, e)| if *e == 1 { v.name() } else { format!("{}^{}", v.name(), e) })
        .collect::<Vec<_>>()
        .join("*")
}

fn reduced_coefficients(chi: &GradedPoly) -> Result<Vec<(String, YPolynomial)>> {
    let mut out = Vec::new();
    for (_, mono, c) in chi.iter_terms() {
        let p = c.as_polynomial().ok_or_else(|| Error::NonPolynomialCoefficient {
            monomial: monomial_name(&mono),
            value: c.to_string(),
        })?;
        out.push((monomial_name(&mono), p.clone()));
    }
    Ok(out)
}

/// The degree-`base_dim` coefficient of the χ_y generating function:
/// `Q_Y * T_y(B)` cut in degree `base_dim`, with `L -> c1` when the total
/// space is Calabi-Yau.  Every coefficient must reduce to a polynomial in
/// `y`; a surviving denominator is reported as an error.
pub fn chi_y(
    model: &WeierstrassModel,
    base_dim: usize,
    calabi_yau: bool,
    source: QySource,
) -> Result<ChiResult> {
    let ctx = RingCtx::genus(base_dim);
    let qy_base = qy(model, base_dim, source)?;
    let qy_genus = qy_base.into_context(&ctx)?;
    let t_base = base_class(&ctx, base_dim)?;
    let mut chi = qy_genus.mul(&t_base).homogeneous_part(base_dim);
    if calabi_yau {
        let c1 = GradedPoly::var(&ctx, Var::C(1))?;
        chi = chi.substitute(&[(Var::L, c1)])?;
    }
    let coefficients = reduced_coefficients(&chi)?;
    Ok(ChiResult {
        model: model.gauge_label.clone(),
        base_dim,
        calabi_yau,
        chi_poly: chi,
        coefficients,
    })
}

/// Evaluate every coefficient of a reduced class at a rational `y`
/// value.  Reduction to polynomial form precedes evaluation, so catalog
/// denominators that vanish at the requested point have already
/// cancelled.
pub fn specialize_at(chi: &GradedPoly, y0: &BigRational) -> Result<GradedPoly> {
    let mut items: Vec<(YRational, Vec<(Var, u32)>)> = Vec::new();
    for (_, mono, c) in chi.iter_terms() {
        let p = c.as_polynomial().ok_or_else(|| Error::NonPolynomialCoefficient {
            monomial: monomial_name(&mono),
            value: c.to_string(),
        })?;
        let v = p.eval(y0);
        items.push((YRational::from_bigrat(v), mono));
    }
    let refs: Vec<(YRational, &[(Var, u32)])> =
        items.iter().map(|(c, m)| (c.clone(), m.as_slice())).collect();
    GradedPoly::from_monomials(chi.ctx(), &refs)
}

/// Specialize every coefficient of a reduced class at `y = -1`.
pub fn euler_specialize(chi: &GradedPoly) -> Result<GradedPoly> {
    specialize_at(chi, &(-BigRational::one()))
}

/// Stringy Euler characteristic: the χ_y coefficient at `y = -1`.
pub fn chi_stringy_euler(
    model: &WeierstrassModel,
    base_dim: usize,
    calabi_yau: bool,
    source: QySource,
) -> Result<GradedPoly> {
    let chi = chi_y(model, base_dim, calabi_yau, source)?;
    euler_specialize(&chi.chi_poly)
}

/// Split a reduced class into the coefficients of powers of `y`.
pub fn y_coefficient_polys(chi: &GradedPoly) -> Result<Vec<GradedPoly>> {
    let mut max_deg = 0usize;
    let mut terms: Vec<(YPolynomial, Vec<(Var, u32)>)> = Vec::new();
    for (_, mono, c) in chi.iter_terms() {
        let p = c.as_polynomial().ok_or_else(|| Error::NonPolynomialCoefficient {
            monomial: monomial_name(&mono),
            value: c.to_string(),
        })?;
        max_deg = max_deg.max(p.degree());
        terms.push((p.clone(), mono));
    }
    let mut out = Vec::with_capacity(max_deg + 1);
    for k in 0..=max_deg {
        let items: Vec<(YRational, Vec<(Var, u32)>)> = terms
            .iter()
            .map(|(p, m)| (YRational::from_bigrat(p.coeff(k)), m.clone()))
            .collect();
        let refs: Vec<(YRational, &[(Var, u32)])> =
            items.iter().map(|(c, m)| (c.clone(), m.as_slice())).collect();
        out.push(GradedPoly::from_monomials(chi.ctx(), &refs)?);
    }
    Ok(out)
}

/// Check the functional equation `(-y)^{d+1} chi(1/y) = chi(y)`:
/// coefficient-wise, `c_k = (-1)^{d+1} c_{d+1-k}` for every monomial.
pub fn chi_is_palindromic(chi: &GradedPoly, base_dim: usize) -> Result<bool> {
    let n = base_dim + 1;
    for (_, mono, c) in chi.iter_terms() {
        let p = c.as_polynomial().ok_or_else(|| Error::NonPolynomialCoefficient {
            monomial: monomial_name(&mono),
            value: c.to_string(),
        })?;
        if p.degree() > n {
            return Ok(false);
        }
        for k in 0..=n {
            let mirrored = p.coeff(n - k);
            let expect = if n % 2 == 0 { mirrored } else { -mirrored };
            if p.coeff(k) != expect {
                return Ok(false);
            }
        }
    }
    Ok(true)
}

/// Hodge-number relations for the Calabi-Yau fourfold case (base
/// dimension 3).
#[derive(Debug, Clone)]
pub struct HodgeReport {
    pub model: String,
    pub n_blowups: usize,
    /// `chi_0 .. chi_4`: coefficients of `y^k` after the `c1*c2 -> 24`
    /// rewrite.
    pub chi: Vec<GradedPoly>,
    /// `chi(-1) = sum (-1)^k chi_k`.
    pub chi_str: GradedPoly,
    pub palindromic: bool,
    pub chi0_is_two: bool,
    pub chi4_is_two: bool,
    pub chi1_eq_chi3: bool,
    /// `(a, b)` with `chi_2 = a * chi_1 + b`, when such an affine relation
    /// holds.
    pub chi2_affine_in_chi1: Option<(BigRational, BigRational)>,
}

fn constant_value(p: &GradedPoly) -> Option<BigRational> {
    for (d, _, _) in p.iter_terms() {
        if d != 0 {
            return None;
        }
    }
    let c = p.constant_term();
    c.as_polynomial().and_then(|q| if q.degree() == 0 { Some(q.coeff(0)) } else { None })
}

fn affine_relation(chi1: &GradedPoly, chi2: &GradedPoly) -> Option<(BigRational, BigRational)> {
    // Fix `a` from any non-constant monomial of chi_1, then require
    // chi_2 - a chi_1 to be a constant.
    let mut a: Option<BigRational> = None;
    for (d, mono, c1) in chi1.iter_terms() {
        if d == 0 {
            continue;
        }
        let p1 = c1.as_polynomial()?;
        if p1.degree() != 0 {
            return None;
        }
        let c2 = chi2.coefficient(&mono);
        let p2 = c2.as_polynomial()?;
        if p2.degree() != 0 {
            return None;
        }
        let ratio = p2.coeff(0) / p1.coeff(0);
        match &a {
            None => a = Some(ratio),
            Some(prev) if *prev == ratio => {}
            Some(_) => return None,
        }
    }
    let a = a?;
    let diff = chi2.sub(&chi1.scale(&YRational::from_bigrat(a.clone())));
    let b = constant_value(&diff)?;
    Some((a, b))
}

/// Hodge-number relations on the Calabi-Yau fourfold: substitute
/// `c1*c2 -> 24` into the degree-3 χ_y coefficient, split into
/// `chi_0..chi_4`, and report the symmetry checks.  The `h^{1,3}` and
/// `h^{2,2}` relations read `h13 = h12 - h11 - chi_1` and
/// `h22 = 2 h12 + chi_2` with `h11 = h11(B) + 1 + n_blowups`.
pub fn hodge_relations(model: &WeierstrassModel, source: QySource) -> Result<HodgeReport> {
    let chi = chi_y(model, 3, true, source)?;
    let reduced = chi
        .chi_poly
        .rewrite_monomial(&[(Var::C(1), 1), (Var::C(2), 1)], &YRational::from_int(24))?;
    let palindromic = chi_is_palindromic(&reduced, 3)?;
    let mut chi_k = y_coefficient_polys(&reduced)?;
    while chi_k.len() < 5 {
        chi_k.push(GradedPoly::zero(reduced.ctx()));
    }
    if chi_k.len() > 5 {
        return Err(Error::NonPolynomialCoefficient {
            monomial: "chi(y)".to_string(),
            value: format!("y-degree {} exceeds 4", chi_k.len() - 1),
        });
    }
    let two = GradedPoly::constant(reduced.ctx(), YRational::from_int(2));
    let chi0_is_two = chi_k[0] == two;
    let chi4_is_two = chi_k[4] == two;
    let chi1_eq_chi3 = chi_k[1] == chi_k[3];
    let chi2_affine_in_chi1 = affine_relation(&chi_k[1], &chi_k[2]);
    let mut chi_str = GradedPoly::zero(reduced.ctx());
    for (k, part) in chi_k.iter().enumerate() {
        chi_str = if k % 2 == 0 { chi_str.add(part) } else { chi_str.sub(part) };
    }
    Ok(HodgeReport {
        model: model.gauge_label.clone(),
        n_blowups: model.n_blowups(),
        chi: chi_k,
        chi_str,
        palindromic,
        chi0_is_two,
        chi4_is_two,
        chi1_eq_chi3,
        chi2_affine_in_chi1,
    })
}

/// Outcome of comparing the pipeline derivation against the catalog
/// closed form.
#[derive(Debug, Clone)]
pub struct VerifyReport {
    pub model: String,
    pub cap: usize,
    pub equal: bool,
    /// `(monomial, pipeline value, catalog value)` for the first
    /// difference in canonical term order.
    pub first_mismatch: Option<(String, YRational, YRational)>,
}

/// Compare `derive_qy` against the expanded closed form through the cap.
pub fn verify_model(model: &WeierstrassModel, cap: usize) -> Result<VerifyReport> {
    let catalog_q = expand_closed_form(model, cap)?;
    let pipeline_q = derive_qy(model, cap)?;
    let first_mismatch = pipeline_q.first_difference(&catalog_q);
    Ok(VerifyReport {
        model: model.gauge_label.clone(),
        cap,
        equal: first_mismatch.is_none(),
        first_mismatch,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::catalog::{builtin_models, find_model};

    fn model(label: &str) -> WeierstrassModel {
        find_model(&builtin_models(), label).unwrap().clone()
    }

    #[test]
    fn resolve_records_the_worked_two_step_example() {
        let resolved = resolve(&model("SO5"), 4).unwrap();
        let ctx = &resolved.ctx;
        assert_eq!(resolved.steps.len(), 2);
        let lin = |t: &[(i64, Var)]| GradedPoly::linear(ctx, t).unwrap();
        assert_eq!(resolved.steps[0].multiplicity, 2);
        assert_eq!(
            resolved.steps[0].center_classes,
            vec![
                lin(&[(1, Var::H), (2, Var::L)]),
                lin(&[(1, Var::H), (3, Var::L)]),
                lin(&[(1, Var::S)]),
            ]
        );
        assert_eq!(resolved.steps[1].multiplicity, 2);
        assert_eq!(
            resolved.steps[1].center_classes,
            vec![
                lin(&[(1, Var::H), (2, Var::L), (-1, Var::E(1))]),
                lin(&[(1, Var::H), (3, Var::L), (-1, Var::E(1))]),
                lin(&[(1, Var::E(1))]),
            ]
        );
        assert_eq!(
            resolved.y_class,
            lin(&[(3, Var::H), (6, Var::L), (-2, Var::E(1)), (-2, Var::E(2))])
        );
    }

    #[test]
    fn resolve_handles_single_and_zero_step_models() {
        let so3 = resolve(&model("SO3"), 3).unwrap();
        let lin = |t: &[(i64, Var)]| GradedPoly::linear(&so3.ctx, t).unwrap();
        assert_eq!(so3.steps.len(), 1);
        assert_eq!(so3.steps[0].multiplicity, 1);
        assert_eq!(
            so3.steps[0].center_classes,
            vec![lin(&[(1, Var::H), (2, Var::L)]), lin(&[(1, Var::H), (3, Var::L)])]
        );
        assert_eq!(so3.y_class, lin(&[(3, Var::H), (6, Var::L), (-1, Var::E(1))]));

        let smooth = resolve(&model("SMOOTH"), 3).unwrap();
        assert!(smooth.steps.is_empty());
        assert_eq!(
            smooth.y_class,
            GradedPoly::linear(&smooth.ctx, &[(3, Var::H), (6, Var::L)]).unwrap()
        );
    }

    #[test]
    fn resolve_rejects_generators_defined_later() {
        let bad = WeierstrassModel {
            gauge_label: "BAD".to_string(),
            centers: vec![vec!["x".to_string(), "e1".to_string()]],
            s_relation: None,
            closed_form: None,
        };
        assert!(matches!(resolve(&bad, 3), Err(Error::UnknownGenerator(_))));
    }

    #[test]
    fn smooth_generating_function_specializes_to_the_euler_series() {
        // Degree-j part at y = -1 is 12L * (-6L)^{j-1}.
        let q = derive_qy(&model("SMOOTH"), 3).unwrap();
        assert!(q.constant_term().is_zero());
        let at = euler_specialize(&q).unwrap();
        let ctx = at.ctx();
        let mut expect = GradedPoly::zero(ctx);
        let l = GradedPoly::var(ctx, Var::L).unwrap();
        let mut pow = l.scale(&YRational::from_int(12));
        for _ in 1..=3 {
            expect = expect.add(&pow);
            pow = pow.mul(&l).scale(&YRational::from_int(-6));
        }
        assert_eq!(at, expect);
    }

    #[test]
    fn pipeline_matches_catalog_for_the_low_rank_orthogonal_models() {
        for label in ["SO3", "SO5"] {
            let report = verify_model(&model(label), 3).unwrap();
            assert!(
                report.equal,
                "{label}: first mismatch {:?}",
                report.first_mismatch
            );
        }
    }

    #[test]
    fn corrupted_multiplicity_is_detected() {
        let so6 = model("SO6");
        let mut resolved = resolve(&so6, 5).unwrap();
        resolved.steps[0].multiplicity = 1;
        resolved.recompute_y_class().unwrap();
        let tampered = assemble_qy(&resolved, 3, so6.s_relation).unwrap();
        let catalog_q = expand_closed_form(&so6, 3).unwrap();
        let diff = tampered.first_difference(&catalog_q);
        assert!(diff.is_some(), "tampered pipeline still matches catalog");
    }

    #[test]
    fn chi_y_reproduces_the_displayed_low_dimensions() {
        use crate::rational::YPolynomial;
        // d = 1: (y^2 - 10y + 1) c1
        let chi1 = chi_y(&model("SO6"), 1, true, QySource::Pipeline).unwrap();
        let expect1 = YRational::from_polynomial(YPolynomial::from_int_coeffs(&[1, -10, 1]));
        assert_eq!(chi1.chi_poly.coefficient(&[(Var::C(1), 1)]), expect1);
        assert_eq!(chi1.chi_poly.coefficient(&[(Var::L, 1)]), YRational::zero());
        // d = 2: -6(y-1) c1^2 y = (6y - 6y^2) c1^2
        let chi2 = chi_y(&model("SO6"), 2, true, QySource::Pipeline).unwrap();
        let expect2 = YRational::from_polynomial(YPolynomial::from_int_coeffs(&[0, 6, -6]));
        assert_eq!(chi2.chi_poly.coefficient(&[(Var::C(1), 2)]), expect2);
        assert_eq!(chi2.chi_poly.coefficient(&[(Var::C(2), 1)]), YRational::zero());
        // SU(2), d = 2: 3y(1-y)(S^2 - 5 S c1 + 10 c1^2)
        let su2 = chi_y(&model("SU2"), 2, true, QySource::Pipeline).unwrap();
        let base = YPolynomial::from_int_coeffs(&[0, 3, -3]);
        let coeff = |k: i64| {
            YRational::from_polynomial(base.scale(&BigRational::from_integer(k.into())))
        };
        assert_eq!(su2.chi_poly.coefficient(&[(Var::S, 2)]), coeff(1));
        assert_eq!(su2.chi_poly.coefficient(&[(Var::S, 1), (Var::C(1), 1)]), coeff(-5));
        assert_eq!(su2.chi_poly.coefficient(&[(Var::C(1), 2)]), coeff(10));
        assert_eq!(su2.chi_poly.coefficient(&[(Var::C(2), 1)]), YRational::zero());
    }

    #[test]
    fn stringy_euler_matches_the_displayed_table() {
        let expects: [&[(i64, &[(Var, u32)])]; 3] = [
            &[(12, &[(Var::C(1), 1)])],
            &[(-12, &[(Var::C(1), 2)])],
            &[(12, &[(Var::C(1), 1), (Var::C(2), 1)]), (24, &[(Var::C(1), 3)])],
        ];
        for (d, expect_terms) in expects.iter().enumerate() {
            let d = d + 1;
            let e = chi_stringy_euler(&model("SO6"), d, true, QySource::Pipeline).unwrap();
            let items: Vec<(YRational, &[(Var, u32)])> = expect_terms
                .iter()
                .map(|(c, m)| (YRational::from_int(*c), *m))
                .collect();
            let expect = GradedPoly::from_monomials(e.ctx(), &items).unwrap();
            assert_eq!(e, expect, "dimension {d}");
        }
    }

    #[test]
    fn smooth_euler_characteristic_follows_the_chern_expansion() {
        // 12 L sum_{i=0}^{d-1} c_i (-6L)^{d-1-i} for base dimension d <= 4.
        for d in 1..=4usize {
            let e = chi_stringy_euler(&model("SMOOTH"), d, false, QySource::Pipeline).unwrap();
            let ctx = e.ctx();
            let l = GradedPoly::var(ctx, Var::L).unwrap();
            let mut expect = GradedPoly::zero(ctx);
            for i in 0..=(d - 1) {
                let c_i = if i == 0 {
                    GradedPoly::one(ctx)
                } else {
                    GradedPoly::var(ctx, Var::C(i as u8)).unwrap()
                };
                let tail = l.scale(&YRational::from_int(-6)).pow((d - 1 - i) as u32);
                expect = expect.add(&c_i.mul(&tail));
            }
            expect = expect.mul(&l.scale(&YRational::from_int(12)));
            assert_eq!(e, expect, "dimension {d}");
        }
    }

    #[test]
    fn hodge_report_for_the_two_step_family() {
        let report = hodge_relations(&model("SU2"), QySource::Pipeline).unwrap();
        assert_eq!(report.n_blowups, 1);
        assert!(report.palindromic);
        assert!(report.chi0_is_two);
        assert!(report.chi4_is_two);
        assert!(report.chi1_eq_chi3);
        // chi_str = 4 - 2 chi_1 + chi_2 must equal the alternating sum.
        let four = GradedPoly::constant(report.chi[0].ctx(), YRational::from_int(4));
        let recombined = four
            .sub(&report.chi[1].scale(&YRational::from_int(2)))
            .add(&report.chi[2]);
        assert_eq!(report.chi_str, recombined);
    }

    #[test]
    fn every_generating_function_has_vanishing_degree_zero_part() {
        for m in builtin_models() {
            let q = derive_qy(&m, 1).unwrap();
            assert!(
                q.constant_term().is_zero(),
                "{}: degree-0 part {}",
                m.gauge_label,
                q.constant_term()
            );
        }
    }
}
