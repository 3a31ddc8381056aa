//! Quadratic étale algebras F_i = F_{±i}[s]/(s² − δ_i) with their involution.
//!
//! Elements are written a + b·s with a, b in F_{±i}. When δ_i is a square
//! the algebra is split; with δ_i = 1 the two coordinates of
//! F_{±i} ⊕ F_{±i} are a + b and a − b.

use crate::arith::linalg::{self, Matrix};
use crate::arith::poly::{Poly, QPoly};
use crate::arith::{self, q, Q};
use crate::error::{Error, Result};
use crate::localfield::{self, oracle, ExtensionTower, FieldElement};
use std::fmt;
use std::sync::Arc;

#[derive(Clone, Debug, PartialEq)]
pub struct QuadraticEtale {
    base: Arc<ExtensionTower>,
    delta: FieldElement,
    is_field: bool,
}

impl QuadraticEtale {
    /// F_{±i}[s]/(s² − δ); the shape follows from the square class of δ.
    pub fn new(base: &Arc<ExtensionTower>, delta: FieldElement) -> Result<Arc<Self>> {
        if !ExtensionTower::same(base, delta.tower()) {
            return Err(Error::Invalid("δ does not live in the base of the algebra".into()));
        }
        if delta.is_zero() {
            return Err(Error::Invalid("δ must be nonzero".into()));
        }
        let is_field = !localfield::is_square(&delta)?;
        Ok(Arc::new(QuadraticEtale {
            base: base.clone(),
            delta,
            is_field,
        }))
    }

    /// The quadratic field F_{±i}(√δ); δ must be a non-square.
    pub fn field(base: &Arc<ExtensionTower>, delta: FieldElement) -> Result<Arc<Self>> {
        let alg = Self::new(base, delta)?;
        if !alg.is_field {
            return Err(Error::NotANonSquare);
        }
        Ok(alg)
    }

    /// The split algebra F_{±i} ⊕ F_{±i}, presented with δ = 1.
    pub fn split(base: &Arc<ExtensionTower>) -> Arc<Self> {
        Arc::new(QuadraticEtale {
            base: base.clone(),
            delta: base.one(),
            is_field: false,
        })
    }

    /// F_{±i} ⊗_F E for a quadratic extension E of the base field.
    pub fn tensor_with(base: &Arc<ExtensionTower>, e: &QuadraticEtale) -> Result<Arc<Self>> {
        let de = e
            .delta
            .as_rational()
            .ok_or_else(|| Error::Invalid("E must be a quadratic extension of the base field".into()))?;
        Self::new(base, base.from_q(&de))
    }

    pub fn base(&self) -> &Arc<ExtensionTower> {
        &self.base
    }

    pub fn delta(&self) -> &FieldElement {
        &self.delta
    }

    pub fn is_field(&self) -> bool {
        self.is_field
    }

    /// [F_i : F] over the base field.
    pub fn degree(&self) -> usize {
        2 * self.base.n()
    }

    pub fn same(a: &Arc<Self>, b: &Arc<Self>) -> bool {
        Arc::ptr_eq(a, b) || **a == **b
    }

    pub fn elem(self: &Arc<Self>, a: FieldElement, b: FieldElement) -> EtaleElement {
        EtaleElement { alg: self.clone(), a, b }
    }

    pub fn from_base(self: &Arc<Self>, a: &FieldElement) -> EtaleElement {
        self.elem(a.clone(), self.base.zero())
    }

    pub fn from_q(self: &Arc<Self>, x: &Q) -> EtaleElement {
        self.from_base(&self.base.from_q(x))
    }

    pub fn from_int(self: &Arc<Self>, n: i64) -> EtaleElement {
        self.from_q(&q(n))
    }

    pub fn one(self: &Arc<Self>) -> EtaleElement {
        self.from_int(1)
    }

    pub fn zero(self: &Arc<Self>) -> EtaleElement {
        self.from_int(0)
    }

    /// The generator s with s² = δ.
    pub fn s(self: &Arc<Self>) -> EtaleElement {
        self.elem(self.base.zero(), self.base.one())
    }

    /// Element of the split algebra with coordinates (α, β); needs δ = 1.
    pub fn from_pair(self: &Arc<Self>, alpha: &FieldElement, beta: &FieldElement) -> Result<EtaleElement> {
        if !self.delta.is_one() {
            return Err(Error::Invalid("pair coordinates need the presentation δ = 1".into()));
        }
        let half = q(1) / q(2);
        Ok(self.elem(alpha.add(beta).scale(&half), alpha.sub(beta).scale(&half)))
    }

    /// Image of an element of E = F[s_E] under s_E ↦ s; δ must equal δ_E.
    pub fn embed_from(self: &Arc<Self>, z: &EtaleElement) -> Result<EtaleElement> {
        let e = z.alg();
        let (Some(de), Some(a), Some(b)) = (e.delta.as_rational(), z.a.as_rational(), z.b.as_rational())
        else {
            return Err(Error::Invalid("only elements of E over the base field embed".into()));
        };
        if self.delta.as_rational().as_ref() != Some(&de) {
            return Err(Error::Invalid("algebra is not presented as F_{±i} ⊗ E".into()));
        }
        Ok(self.elem(self.base.from_q(&a), self.base.from_q(&b)))
    }
}

impl fmt::Display for QuadraticEtale {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let shape = if self.is_field { "field" } else { "split" };
        write!(f, "{}[s]/(s^2 - ({})) [{shape}]", self.base.describe(), self.delta)
    }
}

#[derive(Clone)]
pub struct EtaleElement {
    alg: Arc<QuadraticEtale>,
    pub a: FieldElement,
    pub b: FieldElement,
}

impl PartialEq for EtaleElement {
    fn eq(&self, o: &Self) -> bool {
        QuadraticEtale::same(&self.alg, &o.alg) && self.a == o.a && self.b == o.b
    }
}

impl fmt::Debug for EtaleElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl fmt::Display for EtaleElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.b.is_zero() {
            write!(f, "{}", self.a)
        } else if self.a.is_zero() {
            write!(f, "({})*s", self.b)
        } else {
            write!(f, "{} + ({})*s", self.a, self.b)
        }
    }
}

impl EtaleElement {
    pub fn alg(&self) -> &Arc<QuadraticEtale> {
        &self.alg
    }

    fn check(&self, o: &Self) {
        assert!(QuadraticEtale::same(&self.alg, &o.alg), "elements of different algebras combined");
    }

    pub fn is_zero(&self) -> bool {
        self.a.is_zero() && self.b.is_zero()
    }

    pub fn add(&self, o: &Self) -> Self {
        self.check(o);
        self.alg.elem(self.a.add(&o.a), self.b.add(&o.b))
    }

    pub fn sub(&self, o: &Self) -> Self {
        self.check(o);
        self.alg.elem(self.a.sub(&o.a), self.b.sub(&o.b))
    }

    pub fn neg(&self) -> Self {
        self.alg.elem(self.a.neg(), self.b.neg())
    }

    pub fn mul(&self, o: &Self) -> Self {
        self.check(o);
        let d = &self.alg.delta;
        let a = self.a.mul(&o.a).add(&d.mul(&self.b.mul(&o.b)));
        let b = self.a.mul(&o.b).add(&self.b.mul(&o.a));
        self.alg.elem(a, b)
    }

    pub fn scale(&self, c: &FieldElement) -> Self {
        self.alg.elem(self.a.mul(c), self.b.mul(c))
    }

    pub fn tau(&self) -> Self {
        self.alg.elem(self.a.clone(), self.b.neg())
    }

    /// x·τ(x), an element of F_{±i}.
    pub fn norm(&self) -> FieldElement {
        let d = &self.alg.delta;
        self.a.mul(&self.a).sub(&d.mul(&self.b.mul(&self.b)))
    }

    /// x + τ(x), an element of F_{±i}.
    pub fn trace(&self) -> FieldElement {
        self.a.add(&self.a)
    }

    pub fn norm_trace(&self) -> (FieldElement, FieldElement) {
        (self.norm(), self.trace())
    }

    /// trace_{F_i/F} down to the base field.
    pub fn trace_to_base_field(&self) -> Q {
        self.a.trace_to_base() * q(2)
    }

    /// Norm_{F_i/F} down to the base field.
    pub fn norm_to_base_field(&self) -> Q {
        self.norm().norm_to_base()
    }

    /// The F_{±i}-value when τ fixes the element.
    pub fn as_base(&self) -> Option<FieldElement> {
        self.b.is_zero().then(|| self.a.clone())
    }

    pub fn is_fixed(&self) -> bool {
        self.b.is_zero()
    }

    pub fn is_anti_fixed(&self) -> bool {
        self.a.is_zero()
    }

    pub fn inv(&self) -> Result<Self> {
        let n = self.norm();
        if n.is_zero() {
            return Err(Error::DivisionByZero);
        }
        let ni = n.inv()?;
        Ok(self.tau().scale(&ni))
    }

    pub fn div(&self, o: &Self) -> Result<Self> {
        Ok(self.mul(&o.inv()?))
    }

    pub fn pow_i(&self, k: i64) -> Result<Self> {
        let base = if k < 0 { self.inv()? } else { self.clone() };
        Ok(arith::Ring::pow(&base, k.unsigned_abs()))
    }

    /// The two coordinates (a + b, a − b) of a split element presented with δ = 1.
    pub fn pair(&self) -> Option<(FieldElement, FieldElement)> {
        self.alg
            .delta
            .is_one()
            .then(|| (self.a.add(&self.b), self.a.sub(&self.b)))
    }

    /// Matrix of multiplication on F_i as a vector space over the base field,
    /// basis (e_k) then (e_k·s) for the power basis e_k of F_{±i}.
    pub fn mult_matrix(&self) -> Matrix<Q> {
        let n = self.alg.base.n();
        let ma = self.a.mult_matrix();
        let mb = self.b.mult_matrix();
        let mbd = self.b.mul(&self.alg.delta).mult_matrix();
        let mut m = vec![vec![q(0); 2 * n]; 2 * n];
        for i in 0..n {
            for j in 0..n {
                m[i][j] = ma[i][j].clone();
                m[i][j + n] = mbd[i][j].clone();
                m[i + n][j] = mb[i][j].clone();
                m[i + n][j + n] = ma[i][j].clone();
            }
        }
        m
    }

    /// Characteristic polynomial of multiplication by self over the base field F.
    pub fn charpoly_over_f(&self) -> QPoly {
        linalg::charpoly(&self.mult_matrix(), &q(0))
    }

    /// Characteristic polynomial over E, for F_i = F_{±i} ⊗ E.
    pub fn charpoly_over_e(&self, e: &Arc<QuadraticEtale>) -> Result<Poly<EtaleElement>> {
        let de = e.delta.as_rational();
        if de.is_none() || self.alg.delta.as_rational() != de {
            return Err(Error::Invalid("algebra is not presented as F_{±i} ⊗ E".into()));
        }
        let ma = self.a.mult_matrix();
        let mb = self.b.mult_matrix();
        let n = ma.len();
        let m: Matrix<EtaleElement> = (0..n)
            .map(|i| {
                (0..n)
                    .map(|j| {
                        let t = e.base().clone();
                        e.elem(t.from_q(&ma[i][j]), t.from_q(&mb[i][j]))
                    })
                    .collect()
            })
            .collect();
        Ok(linalg::charpoly(&m, &e.zero()))
    }
}

impl arith::Ring for EtaleElement {
    fn zero_like(&self) -> Self {
        self.alg.zero()
    }
    fn one_like(&self) -> Self {
        self.alg.one()
    }
    fn is_zero(&self) -> bool {
        EtaleElement::is_zero(self)
    }
    fn add(&self, o: &Self) -> Self {
        EtaleElement::add(self, o)
    }
    fn sub(&self, o: &Self) -> Self {
        EtaleElement::sub(self, o)
    }
    fn mul(&self, o: &Self) -> Self {
        EtaleElement::mul(self, o)
    }
    fn neg(&self) -> Self {
        EtaleElement::neg(self)
    }
    fn from_q_like(&self, x: &Q) -> Self {
        self.alg.from_q(x)
    }
}

impl arith::Field for EtaleElement {
    fn inv(&self) -> Option<Self> {
        EtaleElement::inv(self).ok()
    }
}

/// +1 iff c ∈ F_{±i}^× is a norm from F_i; always +1 for split algebras.
pub fn norm_test(c: &FieldElement, ext: &QuadraticEtale) -> Result<i8> {
    if !ExtensionTower::same(c.tower(), &ext.base) {
        return Err(Error::Invalid("norm test argument is not in the base of the algebra".into()));
    }
    if c.is_zero() {
        return Err(Error::ZeroValuation);
    }
    if !ext.is_field {
        return Ok(1);
    }
    localfield::hilbert_symbol(c, &ext.delta)
}

/// Exhaustive-search counterpart of [`norm_test`] for the field case.
pub fn brute_force_norm_oracle(c: &FieldElement, ext: &QuadraticEtale, depth: u32) -> Result<i8> {
    if !ext.is_field {
        return Err(Error::Invalid("the oracle is defined for quadratic fields".into()));
    }
    oracle::brute_force_norm_oracle(c, &ext.delta, depth)
}

/// sgn_{F_i/F_{±i}}(c), same as [`norm_test`].
pub fn sgn_value(c: &FieldElement, ext: &QuadraticEtale) -> Result<i8> {
    norm_test(c, ext)
}

/// Evaluate a polynomial over Q at an algebra element.
pub fn eval_q_poly(p: &QPoly, x: &EtaleElement) -> EtaleElement {
    p.eval_mapped(x, |c| x.alg.from_q(c))
}

/// Evaluate a polynomial over E at an element of F_i = F_{±i} ⊗ E.
pub fn eval_e_poly(p: &Poly<EtaleElement>, x: &EtaleElement) -> Result<EtaleElement> {
    let coeffs = p
        .coeffs()
        .iter()
        .map(|c| x.alg.embed_from(c))
        .collect::<Result<Vec<_>>>()?;
    Ok(Poly::new(coeffs, &x.alg.zero()).eval(x))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::poly::qpoly;
    use crate::localfield::{make_extension, BaseField};

    fn q5() -> Arc<ExtensionTower> {
        BaseField::padic(5).unwrap().trivial_tower()
    }

    #[test]
    fn tau_norm_trace_field() {
        let t = q5();
        let f = QuadraticEtale::field(&t, t.from_int(5)).unwrap();
        let x = f.elem(t.from_int(3), t.from_int(2));
        assert_eq!(x.tau(), f.elem(t.from_int(3), t.from_int(-2)));
        assert_eq!(x.tau().tau(), x);
        assert_eq!(x.norm_trace(), (t.from_int(9 - 20), t.from_int(6)));
        let y = x.div(&x.tau()).unwrap();
        assert!(y.norm().is_one());
        assert_eq!(
            QuadraticEtale::field(&t, t.from_int(4)).unwrap_err(),
            Error::NotANonSquare
        );
    }

    #[test]
    fn split_pairs() {
        let t = q5();
        let s = QuadraticEtale::split(&t);
        let x = s.from_pair(&t.from_int(3), &t.from_int(7)).unwrap();
        let (a, b) = x.tau().pair().unwrap();
        assert_eq!((a, b), (t.from_int(7), t.from_int(3)));
        assert_eq!(x.norm_trace(), (t.from_int(21), t.from_int(10)));
        assert_eq!(norm_test(&t.from_int(2), &s).unwrap(), 1);
        // (α, α^{-1}) has charpoly (T − α)(T − α^{-1})
        let al = t.from_int(3);
        let y = s.from_pair(&al, &al.inv().unwrap()).unwrap();
        let third = Q::new(1.into(), 3.into());
        let expected = qpoly(&[-3, 1]).mul(&Poly::new(vec![-third, q(1)], &q(0)));
        assert_eq!(y.charpoly_over_f(), expected);
    }

    #[test]
    fn charpoly_of_field_element() {
        let t = q5();
        let f = QuadraticEtale::field(&t, t.from_int(5)).unwrap();
        let x = f.elem(t.from_int(3), t.from_int(2));
        // T² − 2aT + (a² − δb²)
        assert_eq!(x.charpoly_over_f(), qpoly(&[-11, -6, 1]));
        assert!(eval_q_poly(&x.charpoly_over_f(), &x).is_zero());
    }

    #[test]
    fn charpoly_degree_over_ramified_tower() {
        let r = make_extension(BaseField::padic(5).unwrap(), 1, &[-5, 0, 1]).unwrap();
        let f = QuadraticEtale::field(&r, r.nonresidue_lift().unwrap()).unwrap();
        let x = f.elem(r.pi().unwrap().add(&r.one()), r.from_int(2));
        let p = x.charpoly_over_f();
        assert_eq!(p.degree(), Some(f.degree()));
        assert!(eval_q_poly(&p, &x).is_zero());
    }

    #[test]
    fn charpoly_over_e_divides_charpoly_over_f() {
        let t = q5();
        let e = QuadraticEtale::field(&t, t.from_int(2)).unwrap();
        let r = make_extension(BaseField::padic(5).unwrap(), 1, &[-5, 0, 1]).unwrap();
        let fi = QuadraticEtale::tensor_with(&r, &e).unwrap();
        assert!(fi.is_field());
        let x = fi.elem(r.pi().unwrap(), r.from_int(3));
        let pe = x.charpoly_over_e(&e).unwrap();
        assert_eq!(pe.degree(), Some(2));
        assert!(eval_e_poly(&pe, &x).unwrap().is_zero());
    }

    #[test]
    fn sign_over_reals() {
        let t = BaseField::real().trivial_tower();
        let c = QuadraticEtale::field(&t, t.from_int(-1)).unwrap();
        assert_eq!(sgn_value(&t.from_int(-2), &c).unwrap(), -1);
        assert_eq!(sgn_value(&t.from_int(3), &c).unwrap(), 1);
    }
}
