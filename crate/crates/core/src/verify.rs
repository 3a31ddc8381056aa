//! Independent checks of the identities behind the twisted odd formula:
//! Cayley transforms, the Lie-algebra factor, polynomial identities linking
//! P and Q, and the norm-class bookkeeping of c_D and B_i.

use crate::arith::poly::QPoly;
use crate::arith::q;
use crate::error::{Error, Result};
use crate::etale::{eval_q_poly, norm_test, EtaleElement, QuadraticEtale};
use crate::factor::character::{eval_chi, UnitCircleValue};
use crate::factor::{build_charpoly_pack, chi_argument, compute_c, PackPoly};
use crate::forms::{self, QuadraticSpace, TraceBlock};
use crate::localfield::{self, ExtensionTower, FieldElement, SquareClass};
use crate::params::{GroupCase, Instance, Side};
use serde::Serialize;
use std::sync::Arc;

pub use crate::factor::eta_from_nu;

/// X = (y − 1)(1 + y)^{-1}.
pub fn cayley(y: &EtaleElement) -> Result<EtaleElement> {
    let one = y.alg().one();
    let den = one.add(y);
    if den.norm().is_zero() {
        return Err(Error::PoleAtMinusOne);
    }
    y.sub(&one).div(&den)
}

/// y = (1 + X)(1 − X)^{-1}.
pub fn cayley_inv(x: &EtaleElement) -> Result<EtaleElement> {
    let one = x.alg().one();
    let den = one.sub(x);
    if den.norm().is_zero() {
        return Err(Error::PoleAtOne);
    }
    one.add(x).div(&den)
}

/// The form θ̃(e_k, e_l) = ν(−1)^k δ_{k, d+1−l}.
pub fn theta_tilde(ground: &Arc<ExtensionTower>, d: usize, nu: &FieldElement) -> Result<QuadraticSpace> {
    let gram = (1..=d)
        .map(|k| {
            (1..=d)
                .map(|l| {
                    if k + l == d + 1 {
                        if k % 2 == 0 {
                            nu.clone()
                        } else {
                            nu.neg()
                        }
                    } else {
                        ground.zero()
                    }
                })
                .collect()
        })
        .collect();
    QuadraticSpace::new(ground, gram)
}

/// A twisted odd instance with the auxiliary presentation
/// θ̃ ≅ ⟨c_D⟩ ⊥ ⊕ trace(τ(v) v' c_i) and the Cayley partners X_i of the y_i.
#[derive(Clone, Debug)]
pub struct TwistedOddData {
    pub inst: Instance,
    pub c: Vec<EtaleElement>,
    pub c_d: FieldElement,
    pub lie: Vec<EtaleElement>,
}

fn non_norm(alg: &Arc<QuadraticEtale>) -> Result<Option<FieldElement>> {
    if !alg.is_field() {
        return Ok(None);
    }
    let base = alg.base();
    for class in SquareClass::all(base) {
        let r = class.representative(base);
        if localfield::hilbert_symbol(&r, alg.delta())? == -1 {
            return Ok(Some(r));
        }
    }
    Ok(None)
}

fn presentation(ground: &Arc<ExtensionTower>, algs: &[Arc<QuadraticEtale>], c: &[EtaleElement], c_d: &FieldElement) -> Result<QuadraticSpace> {
    let blocks: Vec<TraceBlock> = algs
        .iter()
        .zip(c)
        .map(|(alg, c)| TraceBlock {
            alg: alg.clone(),
            coeff: c.clone(),
        })
        .collect();
    forms::trace_form_gram(ground, &blocks, Some(c_d))
}

/// Build the auxiliary data deterministically: c_i = x_i + τ(x_i) (or 1 when
/// that vanishes), c_D from the determinant of θ̃, and one c_i rescaled by a
/// non-norm if the Hasse invariants disagree.
pub fn auxiliary_data(inst: &Instance) -> Result<TwistedOddData> {
    let g = &inst.group;
    if g.case != GroupCase::TwistedGlOdd {
        return Err(Error::UnsupportedCase("the identity checks concern twisted_gl_odd".into()));
    }
    let nu = g
        .nu
        .as_ref()
        .and_then(|n| n.as_f())
        .ok_or_else(|| Error::Invalid("twisted_gl_odd needs ν in F".into()))?;
    let theta = theta_tilde(&g.ground, g.d, nu)?;
    let algs: Vec<_> = inst.param.indices.iter().map(|ip| ip.alg.clone()).collect();
    let mut c = Vec::new();
    for ip in &inst.param.indices {
        let x = ip
            .x
            .as_ref()
            .ok_or_else(|| Error::Invalid(format!("index {} needs x_i", ip.id)))?;
        let t = x.add(&x.tau());
        c.push(if t.norm().is_zero() { ip.alg.one() } else { t });
    }
    let c_d_for = |c: &[EtaleElement]| -> Result<FieldElement> {
        let w = presentation(&g.ground, &algs, c, &g.ground.one())?;
        theta.det().div(&w.det())
    };
    let mut c_d = c_d_for(&c)?;
    if !forms::isomorphic(&presentation(&g.ground, &algs, &c, &c_d)?, &theta)? {
        let fix = algs.iter().enumerate().find_map(|(k, a)| non_norm(a).transpose().map(|r| (k, r)));
        let Some((k, r)) = fix else {
            return Err(Error::Invalid("no trace-form presentation of θ̃ found".into()));
        };
        c[k] = c[k].scale(&r?);
        c_d = c_d_for(&c)?;
        if !forms::isomorphic(&presentation(&g.ground, &algs, &c, &c_d)?, &theta)? {
            return Err(Error::Invalid("no trace-form presentation of θ̃ found".into()));
        }
    }
    let lie = inst
        .param
        .indices
        .iter()
        .map(|ip| cayley(&ip.y))
        .collect::<Result<Vec<_>>>()?;
    Ok(TwistedOddData {
        inst: inst.clone(),
        c,
        c_d,
        lie,
    })
}

impl TwistedOddData {
    fn eta(&self) -> Result<FieldElement> {
        self.inst
            .group
            .eta
            .as_f()
            .cloned()
            .ok_or_else(|| Error::Invalid("η must lie in F".into()))
    }

    /// Q_X = T · ∏ charpoly(X_i).
    pub fn q_x(&self) -> QPoly {
        self.lie
            .iter()
            .fold(QPoly::new(vec![q(0), q(1)], &q(0)), |acc, x| acc.mul(&x.charpoly_over_f()))
    }

    /// P_I, the characteristic polynomial of the y_i.
    pub fn p_i(&self) -> QPoly {
        crate::params::full_charpoly(&self.inst.param)
    }

    /// Indices i ∈ I^{-*}.
    pub fn minus_fields(&self) -> Vec<usize> {
        self.sided_fields(Side::Minus)
    }

    pub fn plus_fields(&self) -> Vec<usize> {
        self.sided_fields(Side::Plus)
    }

    fn sided_fields(&self, side: Side) -> Vec<usize> {
        self.inst
            .param
            .indices
            .iter()
            .enumerate()
            .filter(|(_, ip)| ip.side == side && ip.alg.is_field())
            .map(|(k, _)| k)
            .collect()
    }

    fn x(&self, i: usize) -> Result<&EtaleElement> {
        self.inst.param.indices[i]
            .x
            .as_ref()
            .ok_or_else(|| Error::Invalid("twisted index without x_i".into()))
    }
}

/// Ground elements are rational, so they embed into every F_i.
fn lift(alg: &Arc<QuadraticEtale>, z: &FieldElement) -> EtaleElement {
    alg.from_q(&z.as_rational().expect("ground elements are rational"))
}

fn fixed(z: &EtaleElement, what: &str) -> Result<FieldElement> {
    z.as_base()
        .ok_or_else(|| Error::NotInFixedField(format!("{what} = {z}")))
}

/// ∏_{i ∈ I^{-*}} sgn(η c_i Q'_X(X_i)).
pub fn delta_i_lie(data: &TwistedOddData) -> Result<UnitCircleValue> {
    let eta = data.eta()?;
    let dq = data.q_x().derivative();
    let mut v = UnitCircleValue::one();
    for i in data.minus_fields() {
        let alg = &data.inst.param.indices[i].alg;
        let z = lift(alg, &eta)
            .mul(&data.c[i])
            .mul(&eval_q_poly(&dq, &data.lie[i]));
        let s = norm_test(&fixed(&z, "η c Q'_X(X)")?, alg)?;
        v = v.mul(&UnitCircleValue::from_sign(s));
    }
    Ok(v)
}

/// P_j(y_i) = (1 − X_i)^{−[F_j:F]} P_j(−1) Q_j(X_i).
pub fn li_identity_1(data: &TwistedOddData, i: usize, j: usize) -> Result<bool> {
    let ip = &data.inst.param.indices[i];
    let jp = &data.inst.param.indices[j];
    let pj = jp.y.charpoly_over_f();
    let qj = data.lie[j].charpoly_over_f();
    let n = jp.alg.degree() as i64;
    let xi = &data.lie[i];
    let lhs = eval_q_poly(&pj, &ip.y);
    let rhs = ip
        .alg
        .one()
        .sub(xi)
        .pow_i(-n)?
        .mul(&ip.alg.from_q(&pj.eval(&q(-1))))
        .mul(&eval_q_poly(&qj, xi));
    Ok(lhs == rhs)
}

/// 2(1 − X_i)^{d−2} P'_y(y_i) = −P_y(−1) Q'_X(X_i) with P_y = (T − 1) P_I.
pub fn li_identity_2(data: &TwistedOddData, i: usize) -> Result<bool> {
    let ip = &data.inst.param.indices[i];
    let d = data.inst.group.d as i64;
    let py = QPoly::new(vec![q(-1), q(1)], &q(0)).mul(&data.p_i());
    let xi = &data.lie[i];
    let alg = &ip.alg;
    let lhs = alg
        .from_int(2)
        .mul(&alg.one().sub(xi).pow_i(d - 2)?)
        .mul(&eval_q_poly(&py.derivative(), &ip.y));
    let rhs = alg
        .from_q(&-py.eval(&q(-1)))
        .mul(&eval_q_poly(&data.q_x().derivative(), xi));
    Ok(lhs == rhs)
}

/// A_{i,j} is τ_i-fixed and a norm from F_i.
pub fn check_aij_is_norm(data: &TwistedOddData, i: usize, j: usize) -> Result<bool> {
    let ip = &data.inst.param.indices[i];
    let jp = &data.inst.param.indices[j];
    let alg = &ip.alg;
    let n = jp.alg.degree() as i64;
    let first = data.c[i].inv()?.mul(&data.x(i)?.tau()).pow_i(n)?;
    let nj = data.c[j].mul(&data.x(j)?.tau().inv()?).norm_to_base_field();
    let pj = jp.y.charpoly_over_f();
    let qj = data.lie[j].charpoly_over_f();
    let a = first
        .mul(&alg.from_q(&nj))
        .mul(&eval_q_poly(&pj, &ip.y))
        .mul(&eval_q_poly(&qj, &data.lie[i]).inv()?);
    let a = fixed(&a, "A_ij")?;
    Ok(norm_test(&a, alg)? == 1)
}

/// c_D ≡ η P_I(1) P_I(−1) modulo squares.
pub fn check_cd_square_class(data: &TwistedOddData) -> Result<bool> {
    let p = data.p_i();
    let r = p.eval(&q(1)) * p.eval(&q(-1));
    let z = data.c_d.mul(&data.eta()?).scale(&r);
    localfield::is_square(&z)
}

/// B_i = 2^{-1} η Q'_X(X_i)(y_i + 1) τ_i(x_i), as an element of F_{±i}.
pub fn b_value(data: &TwistedOddData, i: usize) -> Result<FieldElement> {
    let ip = &data.inst.param.indices[i];
    let alg = &ip.alg;
    let b = lift(alg, &data.eta()?.scale(&(q(1) / q(2))))
        .mul(&eval_q_poly(&data.q_x().derivative(), &data.lie[i]))
        .mul(&alg.one().add(&ip.y))
        .mul(&data.x(i)?.tau());
    fixed(&b, "B_i")
}

/// sgn(C_i) = sgn(B_i) · sgn(c_D x_D).
pub fn check_bi_ci_consistency(data: &TwistedOddData, i: usize) -> Result<bool> {
    let ip = &data.inst.param.indices[i];
    let pack = build_charpoly_pack(&data.inst)?;
    let c = compute_c(&data.inst, &pack, ip)?;
    let b = b_value(data, i)?;
    let xd = data
        .inst
        .param
        .x_d
        .as_ref()
        .ok_or_else(|| Error::Invalid("twisted_gl_odd needs x_D".into()))?;
    let corr = data.c_d.mul(xd);
    let lift = |z: &FieldElement| -> Result<FieldElement> {
        let r = z.as_rational().ok_or_else(|| Error::Invalid("value is not in F".into()))?;
        Ok(ip.base().from_q(&r))
    };
    Ok(norm_test(&c, &ip.alg)? == norm_test(&b, &ip.alg)? * norm_test(&lift(&corr)?, &ip.alg)?)
}

/// The factor assembled along the proof: ∏ sgn(B_i), the c_D term rewritten
/// through the square class of c_D, and the χ prefactor.
pub fn reconciled_delta(data: &TwistedOddData) -> Result<UnitCircleValue> {
    let inst = &data.inst;
    let pack = build_charpoly_pack(inst)?;
    let PackPoly::F(p) = &pack.full else {
        unreachable!("twisted packs are over F")
    };
    let xd = inst
        .param
        .x_d
        .as_ref()
        .ok_or_else(|| Error::Invalid("twisted_gl_odd needs x_D".into()))?;
    let link = data.eta()?.mul(xd).scale(&(p.eval(&q(1)) * p.eval(&q(-1))));
    let mut v = UnitCircleValue::one();
    for i in data.minus_fields() {
        let ip = &inst.param.indices[i];
        let l = ip.base().from_q(&link.as_rational().expect("rational"));
        let s = norm_test(&b_value(data, i)?, &ip.alg)? * norm_test(&l, &ip.alg)?;
        v = v.mul(&UnitCircleValue::from_sign(s));
    }
    let a = inst
        .endo
        .chi
        .as_ref()
        .ok_or_else(|| Error::Invalid("twisted_gl_odd needs χ".into()))?;
    Ok(v.mul(&eval_chi(a, &chi_argument(inst, &pack)?)?))
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CheckResult {
    pub name: String,
    pub passed: bool,
}

/// Every identity on every applicable index or pair.
pub fn run_all(data: &TwistedOddData) -> Result<Vec<CheckResult>> {
    let mut out = Vec::new();
    let mut push = |name: String, passed: bool| out.push(CheckResult { name, passed });
    let ids: Vec<&str> = data.inst.param.indices.iter().map(|ip| ip.id.as_str()).collect();
    for (k, ip) in data.inst.param.indices.iter().enumerate() {
        push(format!("cayley round trip [{}]", ids[k]), cayley_inv(&data.lie[k])? == ip.y);
    }
    for &i in &data.minus_fields() {
        for &j in &data.plus_fields() {
            push(format!("li identity 1 [{}, {}]", ids[i], ids[j]), li_identity_1(data, i, j)?);
            push(format!("A_ij is a norm [{}, {}]", ids[i], ids[j]), check_aij_is_norm(data, i, j)?);
        }
        push(format!("li identity 2 [{}]", ids[i]), li_identity_2(data, i)?);
        push(format!("B_i and C_i consistency [{}]", ids[i]), check_bi_ci_consistency(data, i)?);
    }
    push("c_D square class".into(), check_cd_square_class(data)?);
    let (delta, _) = crate::factor::compute_delta(&data.inst)?;
    push("reconciled factor".into(), reconciled_delta(data)? == delta);
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::localfield::BaseField;

    #[test]
    fn cayley_examples() {
        let t = BaseField::padic(5).unwrap().trivial_tower();
        let f = QuadraticEtale::field(&t, t.from_int(2)).unwrap();
        assert!(cayley(&f.one()).unwrap().is_zero());
        assert_eq!(cayley(&f.from_int(-1)).unwrap_err(), Error::PoleAtMinusOne);
        assert_eq!(cayley_inv(&f.zero()).unwrap(), f.one());
        assert_eq!(cayley_inv(&f.one()).unwrap_err(), Error::PoleAtOne);
        let x = f.elem(t.zero(), t.from_int(3));
        let y = cayley_inv(&x).unwrap();
        assert!(y.norm().is_one());
        assert_eq!(cayley(&y).unwrap(), x);
    }

    #[test]
    fn theta_determinant_is_minus_nu() {
        let t = BaseField::padic(5).unwrap().trivial_tower();
        for d in [1, 3, 5] {
            let th = theta_tilde(&t, d, &t.from_int(3)).unwrap();
            assert!(localfield::is_square(&th.det().mul(&t.from_int(-3))).unwrap());
        }
        assert_eq!(eta_from_nu(&t.one()), t.from_int(-1));
    }
}
