//! The transfer factor and its ingredients: characteristic polynomials, the
//! per-index constants C_i, the product formula, the swapped variant and the
//! quadratic-space indicator of the twisted even special case.

pub mod character;

use crate::arith::poly::{Poly, QPoly};
use crate::arith::{fmt_q, q, Q};
use crate::error::{Error, Result};
use crate::etale::{eval_e_poly, eval_q_poly, norm_test, EtaleElement, QuadraticEtale};
use crate::forms::{self, QuadraticSpace, TraceBlock};
use crate::localfield::{ExtensionTower, FieldElement};
use crate::params::{CocycleClass, FormulaCase, GroupCase, IndexParam, Instance, Scalar, Side};
use character::{eval_chi, LocalE, UnitCircleValue};
use serde::Serialize;
use std::sync::Arc;

/// A characteristic polynomial with coefficients in F, or in E for unitary cases.
#[derive(Clone, Debug, PartialEq)]
pub enum PackPoly {
    F(QPoly),
    E(Poly<EtaleElement>),
}

impl PackPoly {
    pub fn degree(&self) -> usize {
        match self {
            PackPoly::F(p) => p.degree().unwrap_or(0),
            PackPoly::E(p) => p.degree().unwrap_or(0),
        }
    }

    fn mul(&self, o: &Self) -> Self {
        match (self, o) {
            (PackPoly::F(a), PackPoly::F(b)) => PackPoly::F(a.mul(b)),
            (PackPoly::E(a), PackPoly::E(b)) => PackPoly::E(a.mul(b)),
            _ => unreachable!("mixed polynomial grounds"),
        }
    }

    pub fn derivative(&self) -> Self {
        match self {
            PackPoly::F(p) => PackPoly::F(p.derivative()),
            PackPoly::E(p) => PackPoly::E(p.derivative()),
        }
    }

    /// Value at y ∈ F_i.
    pub fn eval_at(&self, y: &EtaleElement) -> Result<EtaleElement> {
        match self {
            PackPoly::F(p) => Ok(eval_q_poly(p, y)),
            PackPoly::E(p) => eval_e_poly(p, y),
        }
    }

    /// Value at an integer, as an element of the ground field.
    pub fn value_at(&self, ground: &Arc<ExtensionTower>, k: i64) -> Scalar {
        match self {
            PackPoly::F(p) => Scalar::F(ground.from_q(&p.eval(&q(k)))),
            PackPoly::E(p) => {
                let e = p.template().alg().clone();
                Scalar::E(p.eval(&e.from_int(k)))
            }
        }
    }
}

impl std::fmt::Display for PackPoly {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let terms: Vec<String> = match self {
            PackPoly::F(p) => p.coeffs().iter().map(fmt_q).collect(),
            PackPoly::E(p) => p.coeffs().iter().map(|c| format!("({c})")).collect(),
        };
        let body = terms
            .iter()
            .enumerate()
            .rev()
            .map(|(k, c)| match k {
                0 => c.clone(),
                1 => format!("{c}*T"),
                _ => format!("{c}*T^{k}"),
            })
            .collect::<Vec<_>>()
            .join(" + ");
        write!(f, "{body}")
    }
}

/// P_I with its two halves and derivative.
#[derive(Clone, Debug, PartialEq)]
pub struct CharPolyPack {
    pub ground: Arc<ExtensionTower>,
    pub full: PackPoly,
    pub minus: PackPoly,
    pub plus: PackPoly,
    pub derivative: PackPoly,
}

fn index_poly(ip: &IndexParam, e: Option<&Arc<QuadraticEtale>>) -> Result<PackPoly> {
    Ok(match e {
        None => PackPoly::F(ip.y.charpoly_over_f()),
        Some(e) => PackPoly::E(ip.y.charpoly_over_e(e)?),
    })
}

pub fn build_charpoly_pack(inst: &Instance) -> Result<CharPolyPack> {
    let g = &inst.group;
    let e = if g.case.is_unitary_type() {
        Some(g.e.as_ref().ok_or_else(|| Error::Invalid("unitary case without E".into()))?)
    } else {
        None
    };
    let one = match e {
        None => PackPoly::F(QPoly::one(&q(0))),
        Some(e) => PackPoly::E(Poly::one(&e.zero())),
    };
    let (mut minus, mut plus) = (one.clone(), one);
    for ip in &inst.param.indices {
        let p = index_poly(ip, e)?;
        match ip.side {
            Side::Minus => minus = minus.mul(&p),
            Side::Plus => plus = plus.mul(&p),
        }
    }
    let full = minus.mul(&plus);
    let derivative = full.derivative();
    Ok(CharPolyPack {
        ground: g.ground.clone(),
        full,
        minus,
        plus,
        derivative,
    })
}

fn half(num: i64) -> Result<i64> {
    if num % 2 != 0 {
        return Err(Error::Invalid(format!("exponent {num}/2 is not an integer")));
    }
    Ok(num / 2)
}

fn embed_scalar(s: &Scalar, alg: &Arc<QuadraticEtale>) -> Result<EtaleElement> {
    s.embed(alg)
}

fn required<'a, T>(x: &'a Option<T>, what: &str, id: &str) -> Result<&'a T> {
    x.as_ref()
        .ok_or_else(|| Error::Invalid(format!("index {id} needs {what}")))
}

/// The formula label used in traces.
pub fn formula_text(fc: FormulaCase) -> &'static str {
    match fc {
        FormulaCase::Symplectic => "C = -eta c P'(y) P(-1) y^(1-d/2)",
        FormulaCase::SoOdd => "C = -2 eta c P'(y) P(-1) y^((3-d)/2) (1+y)(y-1)^-1",
        FormulaCase::SoEven => "C = 2 eta c P'(y) P(-1) y^(1-d/2) (1+y)(y-1)^-1",
        FormulaCase::TwistedGlEven => "C = eta x^-1 P'(y) P(-1) y^(1-d/2) (1+y)",
        FormulaCase::TwistedGlOdd => "C = x_D x^-1 P'(y) P(1) y^((3-d)/2) (y-1)",
        FormulaCase::UnitaryEven => "C = -eta c P_E'(y) P_E(-1)^-1 y^(1-d/2)",
        FormulaCase::UnitaryOdd => "C = -eta c P_E'(y) P_E(-1)^-1 y^((1-d)/2) (1+y)",
        FormulaCase::BcUnitaryEven => "C = -eta x^-1 P_E'(y) P_E(-1)^-1 y^(1-d/2) (1+y)",
        FormulaCase::BcUnitaryOdd => "C = -eta x^-1 P_E'(y) P_E(-1)^-1 y^((3-d)/2)",
    }
}

/// C_i computed in F_i, before the check that it lies in F_{±i}.
pub fn compute_c_raw(inst: &Instance, pack: &CharPolyPack, ip: &IndexParam) -> Result<EtaleElement> {
    let g = &inst.group;
    let fc = FormulaCase::of(g.case, g.d);
    let alg = &ip.alg;
    let y = &ip.y;
    let d = g.d as i64;
    let one = alg.one();
    let eta = embed_scalar(&g.eta, alg)?;
    let dp = pack.derivative.eval_at(y)?;
    let at = |k: i64| embed_scalar(&pack.full.value_at(&pack.ground, k), alg);
    let c = || required(&ip.c, "c_i", &ip.id);
    let x_inv = || required(&ip.x, "x_i", &ip.id)?.inv();
    let plus1 = one.add(y);
    let minus1 = y.sub(&one);
    let two = alg.from_int(2);
    let value = match fc {
        FormulaCase::Symplectic => eta
            .neg()
            .mul(c()?)
            .mul(&dp)
            .mul(&at(-1)?)
            .mul(&y.pow_i(half(2 - d)?)?),
        FormulaCase::SoOdd => two
            .neg()
            .mul(&eta)
            .mul(c()?)
            .mul(&dp)
            .mul(&at(-1)?)
            .mul(&y.pow_i(half(3 - d)?)?)
            .mul(&plus1)
            .mul(&minus1.inv()?),
        FormulaCase::SoEven => two
            .mul(&eta)
            .mul(c()?)
            .mul(&dp)
            .mul(&at(-1)?)
            .mul(&y.pow_i(half(2 - d)?)?)
            .mul(&plus1)
            .mul(&minus1.inv()?),
        FormulaCase::TwistedGlEven => eta
            .mul(&x_inv()?)
            .mul(&dp)
            .mul(&at(-1)?)
            .mul(&y.pow_i(half(2 - d)?)?)
            .mul(&plus1),
        FormulaCase::TwistedGlOdd => {
            let xd = inst
                .param
                .x_d
                .as_ref()
                .ok_or_else(|| Error::Invalid("twisted_gl_odd needs x_D".into()))?;
            embed_scalar(&Scalar::F(xd.clone()), alg)?
                .mul(&x_inv()?)
                .mul(&dp)
                .mul(&at(1)?)
                .mul(&y.pow_i(half(3 - d)?)?)
                .mul(&minus1)
        }
        FormulaCase::UnitaryEven => eta
            .neg()
            .mul(c()?)
            .mul(&dp)
            .mul(&at(-1)?.inv()?)
            .mul(&y.pow_i(half(2 - d)?)?),
        FormulaCase::UnitaryOdd => eta
            .neg()
            .mul(c()?)
            .mul(&dp)
            .mul(&at(-1)?.inv()?)
            .mul(&y.pow_i(half(1 - d)?)?)
            .mul(&plus1),
        FormulaCase::BcUnitaryEven => eta
            .neg()
            .mul(&x_inv()?)
            .mul(&dp)
            .mul(&at(-1)?.inv()?)
            .mul(&y.pow_i(half(2 - d)?)?)
            .mul(&plus1),
        FormulaCase::BcUnitaryOdd => eta
            .neg()
            .mul(&x_inv()?)
            .mul(&dp)
            .mul(&at(-1)?.inv()?)
            .mul(&y.pow_i(half(3 - d)?)?),
    };
    Ok(value)
}

/// C_i as an element of F_{±i}^×.
pub fn compute_c(inst: &Instance, pack: &CharPolyPack, ip: &IndexParam) -> Result<FieldElement> {
    let c = compute_c_raw(inst, pack, ip)?;
    if c.is_zero() {
        return Err(Error::DivisionByZero);
    }
    c.as_base()
        .ok_or_else(|| Error::NotInFixedField(format!("C_{} = {c}", ip.id)))
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct IndexTrace {
    pub id: String,
    pub side: &'static str,
    pub formula: &'static str,
    pub c_value: String,
    /// τ(C) = C was checked; C is recorded as its F_{±i}-coordinate.
    pub fixed_by_tau: bool,
    pub norm_test: i8,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct PrefactorTrace {
    pub label: String,
    pub argument: String,
    pub value: String,
    pub angle: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct FactorTrace {
    pub case: &'static str,
    pub index_set: &'static str,
    pub polynomial: String,
    pub indices: Vec<IndexTrace>,
    pub prefactors: Vec<PrefactorTrace>,
    pub delta: String,
    pub delta_angle: String,
}

impl FactorTrace {
    /// Product of the recorded verdicts and prefactor angles.
    pub fn product(&self) -> UnitCircleValue {
        let mut v = UnitCircleValue::one();
        for i in &self.indices {
            v = v.mul(&UnitCircleValue::from_sign(i.norm_test));
        }
        for p in &self.prefactors {
            let t: Q = p.angle.parse().expect("angles are printed as rationals");
            v = v.mul(&UnitCircleValue::new(t));
        }
        v
    }
}

fn prefactor(label: &str, argument: String, value: UnitCircleValue) -> PrefactorTrace {
    PrefactorTrace {
        label: label.to_string(),
        argument,
        value: value.to_string(),
        angle: fmt_q(value.angle()),
    }
}

fn e_ratio(pack_side: &PackPoly) -> Result<EtaleElement> {
    let PackPoly::E(p) = pack_side else {
        unreachable!("unitary packs are over E")
    };
    let e = p.template().alg().clone();
    p.eval(&e.zero()).div(&p.eval(&e.from_int(-1)))
}

fn delta_over(inst: &Instance, side: Side) -> Result<(UnitCircleValue, FactorTrace)> {
    let g = &inst.group;
    let fc = FormulaCase::of(g.case, g.d);
    let pack = build_charpoly_pack(inst)?;
    let mut value = UnitCircleValue::one();
    let mut indices = Vec::new();
    for ip in inst.param.side(side).filter(|ip| ip.alg.is_field()) {
        let c = compute_c(inst, &pack, ip)?;
        let s = norm_test(&c, &ip.alg)?;
        value = value.mul(&UnitCircleValue::from_sign(s));
        indices.push(IndexTrace {
            id: ip.id.clone(),
            side: ip.side.name(),
            formula: formula_text(fc),
            c_value: c.to_string(),
            fixed_by_tau: true,
            norm_test: s,
        });
    }
    let mut prefactors = Vec::new();
    match g.case {
        GroupCase::TwistedGlOdd => {
            let a = inst
                .endo
                .chi
                .as_ref()
                .ok_or_else(|| Error::Invalid("twisted_gl_odd needs χ".into()))?;
            let arg = chi_argument(inst, &pack)?;
            let v = eval_chi(a, &arg)?;
            value = value.mul(&v);
            prefactors.push(prefactor("chi(eta x_D P(1) P_minus(-1))", arg.to_string(), v));
        }
        GroupCase::Unitary | GroupCase::BcUnitary => {
            let e = g.e.as_ref().ok_or_else(|| Error::Invalid("unitary case without E".into()))?;
            let le = LocalE::new(e)?;
            let chars = [
                ("mu_minus(P_minus(0) P_minus(-1)^-1)", &inst.endo.mu_minus, &pack.minus),
                ("mu_plus(P_plus(0) P_plus(-1)^-1)", &inst.endo.mu_plus, &pack.plus),
            ];
            for (label, mu, poly) in chars {
                let mu = mu
                    .as_ref()
                    .ok_or_else(|| Error::Invalid("unitary cases need μ^- and μ^+".into()))?;
                let arg = e_ratio(poly)?;
                let v = mu.eval(&le, &arg)?;
                value = value.mul(&v);
                prefactors.push(prefactor(label, arg.to_string(), v));
            }
        }
        _ => {}
    }
    let trace = FactorTrace {
        case: fc.name(),
        index_set: if side == Side::Minus { "I-*" } else { "I+*" },
        polynomial: pack.full.to_string(),
        indices,
        prefactors,
        delta: value.to_string(),
        delta_angle: fmt_q(value.angle()),
    };
    Ok((value, trace))
}

/// η x_D P_I(1) P_{I^-}(−1) ∈ F^×.
pub fn chi_argument(inst: &Instance, pack: &CharPolyPack) -> Result<FieldElement> {
    let g = &inst.group;
    let eta = g
        .eta
        .as_f()
        .ok_or_else(|| Error::Invalid("η must lie in F".into()))?;
    let xd = inst
        .param
        .x_d
        .as_ref()
        .ok_or_else(|| Error::Invalid("twisted_gl_odd needs x_D".into()))?;
    let (PackPoly::F(full), PackPoly::F(minus)) = (&pack.full, &pack.minus) else {
        unreachable!("twisted packs are over F")
    };
    let r = full.eval(&q(1)) * minus.eval(&q(-1));
    Ok(eta.mul(xd).scale(&r))
}

/// The transfer factor with its trace; the instance is assumed validated.
pub fn compute_delta(inst: &Instance) -> Result<(UnitCircleValue, FactorTrace)> {
    delta_over(inst, Side::Minus)
}

/// The factor with I^{-*} replaced by I^{+*}, for orthogonal and unitary groups.
pub fn swapped_delta(inst: &Instance) -> Result<UnitCircleValue> {
    match inst.group.case {
        GroupCase::SoOdd | GroupCase::SoEven | GroupCase::Unitary => Ok(delta_over(inst, Side::Plus)?.0),
        c => Err(Error::UnsupportedCase(format!("no swapped factor for {c}"))),
    }
}

/// The quasi-split orthogonal space of dimension `dim` whose pinning has
/// invariant η: H^m ⊥ ⟨(−1)^m η⟩ in odd dimension 2m+1, and
/// H^{m−1} ⊥ ⟨α, −αδ⟩ with α = (−1)^{m−1} η in even dimension 2m.
pub fn quasi_split_orthogonal(
    ground: &Arc<ExtensionTower>,
    dim: usize,
    eta: &FieldElement,
    delta: Option<&FieldElement>,
) -> Result<QuadraticSpace> {
    let m = dim / 2;
    let sign = |k: usize| if k.is_multiple_of(2) { q(1) } else { q(-1) };
    if dim % 2 == 1 {
        let tail = QuadraticSpace::diagonal(ground, &[eta.scale(&sign(m))])?;
        return Ok(QuadraticSpace::hyperbolic(ground, m).orthogonal_sum(&tail));
    }
    if dim == 0 {
        return QuadraticSpace::new(ground, Vec::new());
    }
    let delta = delta.ok_or_else(|| Error::Invalid("even orthogonal space needs δ".into()))?;
    let alpha = eta.scale(&sign(m - 1));
    let tail = QuadraticSpace::diagonal(ground, &[alpha.clone(), alpha.mul(delta).neg()])?;
    Ok(QuadraticSpace::hyperbolic(ground, m - 1).orthogonal_sum(&tail))
}

/// (V, q) for an orthogonal instance: the trace form of the c_i, plus the
/// line D whose coefficient makes det q ≡ η in odd dimension.
pub fn orthogonal_space(inst: &Instance) -> Result<QuadraticSpace> {
    let g = &inst.group;
    let blocks = inst
        .param
        .indices
        .iter()
        .map(|ip| {
            Ok(TraceBlock {
                alg: ip.alg.clone(),
                coeff: required(&ip.c, "c_i", &ip.id)?.clone(),
            })
        })
        .collect::<Result<Vec<_>>>()?;
    let w = forms::trace_form_gram(&g.ground, &blocks, None)?;
    match g.case {
        GroupCase::SoEven => Ok(w),
        GroupCase::SoOdd => {
            let eta = g.eta.as_f().ok_or_else(|| Error::Invalid("η must lie in F".into()))?;
            let c_d = eta.div(&w.det())?;
            forms::trace_form_gram(&g.ground, &blocks, Some(&c_d))
        }
        c => Err(Error::UnsupportedCase(format!("{c} has no orthogonal space"))),
    }
}

/// Class of the inner twist: trivial iff (V, q) is the quasi-split space
/// pinned by η.
pub fn orthogonal_cocycle_class(inst: &Instance) -> Result<CocycleClass> {
    let g = &inst.group;
    let eta = g.eta.as_f().ok_or_else(|| Error::Invalid("η must lie in F".into()))?;
    let v = orthogonal_space(inst)?;
    let model = quasi_split_orthogonal(&g.ground, g.d, eta, g.delta.as_ref())?;
    Ok(if forms::isomorphic(&v, &model)? {
        CocycleClass::Trivial
    } else {
        CocycleClass::Nontrivial
    })
}

/// The twisted even special case d^- = d, d^+ = 1: +1 iff (V, q_x̃) is
/// isomorphic to (V^-, q^-), where q^- is the quasi-split space pinned by
/// 2η^- with η^- = −η.
pub fn special_case_indicator(inst: &Instance) -> Result<UnitCircleValue> {
    let g = &inst.group;
    let e = &inst.endo;
    if g.case != GroupCase::TwistedGlEven || e.d_minus != g.d || e.d_plus != 1 {
        return Err(Error::UnsupportedCase(
            "the indicator needs twisted_gl_even with d^- = d and d^+ = 1".into(),
        ));
    }
    if g.ground.base.is_real() {
        return Err(Error::UnsupportedCase("the indicator is stated over p-adic fields".into()));
    }
    let blocks = inst
        .param
        .indices
        .iter()
        .map(|ip| {
            Ok(TraceBlock {
                alg: ip.alg.clone(),
                coeff: required(&ip.x, "x_i", &ip.id)?.clone(),
            })
        })
        .collect::<Result<Vec<_>>>()?;
    let q_x = forms::symmetrize_twisted(&g.ground, &blocks, None)?;
    let eta = g.eta.as_f().ok_or_else(|| Error::Invalid("η must lie in F".into()))?;
    // q_x̃ is twice a trace form, so it is compared with the space pinned by 2η^-.
    let eta_minus = eta.neg();
    let q_minus = quasi_split_orthogonal(&g.ground, g.d, &eta_minus.scale(&q(2)), e.delta_minus.as_ref())?;
    Ok(UnitCircleValue::from_sign(if forms::isomorphic(&q_x, &q_minus)? { 1 } else { -1 }))
}

/// η for the twisted odd linear group with the form θ̃ of parameter ν.
pub fn eta_from_nu(nu: &FieldElement) -> FieldElement {
    nu.neg()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::localfield::BaseField;
    use crate::params::{EndoscopicDatum, GroupDescriptor, RegularParam};

    fn q5() -> Arc<ExtensionTower> {
        BaseField::padic(5).unwrap().trivial_tower()
    }

    #[test]
    fn symplectic_single_index_by_hand() {
        let t = q5();
        let f = QuadraticEtale::field(&t, t.from_int(5)).unwrap();
        let w = f.elem(t.from_int(2), t.from_int(1));
        let y = w.div(&w.tau()).unwrap();
        let c = f.s();
        let eta = t.from_int(3);
        let inst = Instance {
            group: GroupDescriptor {
                case: GroupCase::Symplectic,
                d: 2,
                ground: t.clone(),
                delta: None,
                e: None,
                nu: None,
                eta: Scalar::F(eta.clone()),
            },
            endo: EndoscopicDatum {
                d_minus: 2,
                d_plus: 0,
                delta_minus: Some(t.from_int(5)),
                delta_plus: None,
                chi: None,
                mu_minus: None,
                mu_plus: None,
                cocycle: CocycleClass::Trivial,
            },
            param: RegularParam {
                indices: vec![IndexParam {
                    id: "a".into(),
                    side: Side::Minus,
                    alg: f.clone(),
                    y: y.clone(),
                    x: None,
                    c: Some(c.clone()),
                    c_endo: None,
                }],
                x_d: None,
            },
        };
        // P = T² − tr(y)T + 1, so P'(y) = 2y − tr(y) = y − τ(y) and P(−1) = 2 + tr(y).
        let tr = y.add(&y.tau());
        let expected = f
            .from_base(&eta)
            .neg()
            .mul(&c)
            .mul(&y.sub(&y.tau()))
            .mul(&f.from_int(2).add(&tr));
        let pack = build_charpoly_pack(&inst).unwrap();
        let got = compute_c_raw(&inst, &pack, &inst.param.indices[0]).unwrap();
        assert_eq!(got, expected);
        assert!(got.is_fixed());
        let (delta, trace) = compute_delta(&inst).unwrap();
        assert_eq!(trace.product(), delta);
        assert_eq!(trace.indices.len(), 1);
    }

    #[test]
    fn quasi_split_models_have_expected_determinants() {
        let t = q5();
        let eta = t.from_int(2);
        let odd = quasi_split_orthogonal(&t, 5, &eta, None).unwrap();
        assert_eq!(odd.det(), t.from_int(2));
        let even = quasi_split_orthogonal(&t, 4, &eta, Some(&t.from_int(5))).unwrap();
        let inv = even.invariants().unwrap();
        assert!(crate::localfield::is_square(&inv.discriminant.unwrap().representative(&t).mul(&t.from_int(5))).unwrap());
    }
}
