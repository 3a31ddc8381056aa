//! Local fields: Q_p, its finite extensions presented as an unramified step
//! followed by an Eisenstein step, and the real numbers.
//!
//! Elements are stored exactly, as rational coordinates in the power basis
//! u^a π^b of the number field cut out by the defining polynomials. That
//! number field is dense in the local field and carries the same valuation,
//! so every discrete decision (valuation, residue, square class) is made on
//! exact data. The precision of the base field bounds the valuations the
//! library is willing to reason about.

pub mod oracle;
pub mod square;

use crate::arith::finite::{first_irreducible, is_irreducible, FiniteField, Fq};
use crate::arith::linalg::{self, Matrix};
use crate::arith::{self, fmt_q, is_prime, q, reduce_mod, vp, Q};
use crate::error::{Error, Result};
use num_traits::{One, Signed, Zero};
use std::fmt;
use std::sync::Arc;

pub use square::{hilbert_symbol, is_square, norm_test_delta, square_class, SquareClass};

pub const DEFAULT_PRECISION: u32 = 64;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum FieldKind {
    Padic(u64),
    Real,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct BaseField {
    pub kind: FieldKind,
    pub precision: u32,
}

impl BaseField {
    pub fn padic(p: u64) -> Result<Self> {
        Self::padic_with_precision(p, DEFAULT_PRECISION)
    }

    pub fn padic_with_precision(p: u64, precision: u32) -> Result<Self> {
        if !is_prime(p) {
            return Err(Error::Invalid(format!("{p} is not prime")));
        }
        if precision < 8 {
            return Err(Error::Invalid(format!("precision {precision} is below 8")));
        }
        Ok(BaseField {
            kind: FieldKind::Padic(p),
            precision,
        })
    }

    pub fn real() -> Self {
        BaseField {
            kind: FieldKind::Real,
            precision: DEFAULT_PRECISION,
        }
    }

    pub fn p(&self) -> Option<u64> {
        match self.kind {
            FieldKind::Padic(p) => Some(p),
            FieldKind::Real => None,
        }
    }

    pub fn is_real(&self) -> bool {
        self.kind == FieldKind::Real
    }

    /// The base field itself as a degree-one tower.
    pub fn trivial_tower(&self) -> Arc<ExtensionTower> {
        match self.kind {
            FieldKind::Real => Arc::new(ExtensionTower {
                base: *self,
                f: 1,
                e: 1,
                g: vec![q(0), q(1)],
                eis: vec![vec![q(0)], vec![q(1)]],
                residue: None,
                w0: None,
                nonresidue: None,
            }),
            FieldKind::Padic(p) => ExtensionTower::new(*self, 1, &[vec![-q(p as i64)], vec![q(1)]])
                .expect("x - p is Eisenstein"),
        }
    }
}

impl fmt::Display for BaseField {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.kind {
            FieldKind::Padic(p) => write!(f, "Q_{p}"),
            FieldKind::Real => write!(f, "R"),
        }
    }
}

/// F_{±i}: an unramified extension of degree f generated by a lift u of a
/// residue generator, then an Eisenstein extension of degree e generated by π.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ExtensionTower {
    pub base: BaseField,
    pub f: usize,
    pub e: usize,
    /// Monic lift of the residue modulus, increasing degree.
    g: Vec<Q>,
    /// Eisenstein polynomial, coefficients are unramified elements (length f).
    eis: Vec<Vec<Q>>,
    residue: Option<FiniteField>,
    /// Residue of c_0 / p, where c_0 is the constant term of the Eisenstein polynomial.
    w0: Option<Fq>,
    nonresidue: Option<Fq>,
}

impl ExtensionTower {
    /// Tower with the canonical residue modulus of degree f.
    pub fn new(base: BaseField, f: usize, eis: &[Vec<Q>]) -> Result<Arc<Self>> {
        let p = match base.kind {
            FieldKind::Real => {
                if f == 1 && eis.len() == 2 {
                    return Ok(base.trivial_tower());
                }
                return Err(Error::UnsupportedCase(
                    "only the trivial tower exists over R".into(),
                ));
            }
            FieldKind::Padic(p) => p,
        };
        if f == 0 {
            return Err(Error::Invalid("unramified degree must be positive".into()));
        }
        let g: Vec<Q> = first_irreducible(p, f).into_iter().map(|c| q(c as i64)).collect();
        Self::with_modulus(base, g, eis)
    }

    /// Convenience for Eisenstein polynomials with rational coefficients.
    pub fn from_rational_eis(base: BaseField, f: usize, eis: &[Q]) -> Result<Arc<Self>> {
        let lifted: Vec<Vec<Q>> = eis
            .iter()
            .map(|c| {
                let mut v = vec![q(0); f];
                v[0] = c.clone();
                v
            })
            .collect();
        Self::new(base, f, &lifted)
    }

    pub fn with_modulus(base: BaseField, g: Vec<Q>, eis: &[Vec<Q>]) -> Result<Arc<Self>> {
        let p = base
            .p()
            .ok_or_else(|| Error::UnsupportedCase("explicit modulus over R".into()))?;
        let f = g.len().checked_sub(1).filter(|&f| f >= 1).ok_or_else(|| {
            Error::Invalid("residue modulus must have positive degree".into())
        })?;
        if !g[f].is_one() {
            return Err(Error::Invalid("residue modulus must be monic".into()));
        }
        let g_red: Vec<u64> = g
            .iter()
            .map(|c| reduce_mod(c, p).ok_or_else(|| Error::Invalid("modulus is not p-integral".into())))
            .collect::<Result<_>>()?;
        if !is_irreducible(&g_red, p) {
            return Err(Error::Invalid("residue modulus is reducible mod p".into()));
        }
        let e = eis.len().checked_sub(1).filter(|&e| e >= 1).ok_or_else(|| {
            Error::NotEisenstein("degree must be at least one".into())
        })?;
        if p == 2 && e * f > 1 {
            return Err(Error::DyadicRamifiedUnsupported);
        }
        let residue = FiniteField::new(p, g_red);
        let mut eis_n = Vec::with_capacity(e + 1);
        for c in eis {
            if c.len() > f {
                return Err(Error::NotEisenstein("coefficient has too many u-terms".into()));
            }
            let mut v = c.clone();
            v.resize(f, q(0));
            eis_n.push(v);
        }
        let lead = &eis_n[e];
        if !(lead[0].is_one() && lead[1..].iter().all(Zero::is_zero)) {
            return Err(Error::NotEisenstein("polynomial is not monic".into()));
        }
        let pq = q(p as i64);
        for (j, c) in eis_n[..e].iter().enumerate() {
            for x in c {
                if !x.is_zero() && vp(x, p) < 1 {
                    return Err(Error::NotEisenstein(format!(
                        "coefficient of degree {j} is not divisible by p"
                    )));
                }
            }
        }
        let w0_coeffs: Vec<u64> = eis_n[0]
            .iter()
            .map(|x| reduce_mod(&(x / &pq), p).expect("p-integral after the check above"))
            .collect();
        let w0 = residue.from_coeffs(&w0_coeffs);
        if residue.is_zero(&w0) {
            return Err(Error::NotEisenstein("constant term is not p times a unit".into()));
        }
        let nonresidue = (p != 2).then(|| residue.first_nonsquare());
        Ok(Arc::new(ExtensionTower {
            base,
            f,
            e,
            g,
            eis: eis_n,
            residue: Some(residue),
            w0: Some(w0),
            nonresidue,
        }))
    }

    pub fn n(&self) -> usize {
        self.e * self.f
    }

    pub fn p(&self) -> Option<u64> {
        self.base.p()
    }

    /// Residue cardinality q = p^f.
    pub fn q(&self) -> Option<u64> {
        self.residue.as_ref().map(|r| r.q())
    }

    pub fn residue_field(&self) -> Option<&FiniteField> {
        self.residue.as_ref()
    }

    pub fn modulus(&self) -> &[Q] {
        &self.g
    }

    pub fn eisenstein(&self) -> &[Vec<Q>] {
        &self.eis
    }

    pub fn is_trivial(&self) -> bool {
        self.n() == 1
    }

    pub fn same(a: &Arc<Self>, b: &Arc<Self>) -> bool {
        Arc::ptr_eq(a, b) || **a == **b
    }

    pub fn elem(self: &Arc<Self>, coords: Vec<Q>) -> FieldElement {
        assert_eq!(coords.len(), self.n(), "coordinate vector has wrong length");
        FieldElement {
            tower: self.clone(),
            coords,
        }
    }

    pub fn zero(self: &Arc<Self>) -> FieldElement {
        self.elem(vec![q(0); self.n()])
    }

    pub fn one(self: &Arc<Self>) -> FieldElement {
        self.from_q(&q(1))
    }

    pub fn from_q(self: &Arc<Self>, x: &Q) -> FieldElement {
        let mut c = vec![q(0); self.n()];
        c[0] = x.clone();
        self.elem(c)
    }

    pub fn from_int(self: &Arc<Self>, n: i64) -> FieldElement {
        self.from_q(&q(n))
    }

    /// The unramified generator u; only present when f > 1.
    pub fn gen_u(self: &Arc<Self>) -> Result<FieldElement> {
        if self.f < 2 {
            return Err(Error::Invalid("generator u needs f > 1".into()));
        }
        let mut c = vec![q(0); self.n()];
        c[1] = q(1);
        Ok(self.elem(c))
    }

    /// The uniformizer π, the class of the Eisenstein variable.
    pub fn pi(self: &Arc<Self>) -> Result<FieldElement> {
        if self.base.is_real() {
            return Err(Error::UnsupportedCase("R has no uniformizer".into()));
        }
        let mut c = vec![q(0); self.n()];
        if self.e == 1 {
            for (a, x) in self.eis[0].iter().enumerate() {
                c[a] = -x.clone();
            }
        } else {
            c[self.f] = q(1);
        }
        Ok(self.elem(c))
    }

    /// Lift of the fixed residue non-square, as an element with integer coordinates.
    pub fn nonresidue_lift(self: &Arc<Self>) -> Option<FieldElement> {
        let nr = self.nonresidue.as_ref()?;
        let mut c = vec![q(0); self.n()];
        for (a, x) in nr.iter().enumerate() {
            c[a] = q(*x as i64);
        }
        Some(self.elem(c))
    }

    /// Lift of a residue element using the digit coordinates.
    pub fn lift_residue(self: &Arc<Self>, r: &Fq) -> FieldElement {
        let mut c = vec![q(0); self.n()];
        for (a, x) in r.iter().enumerate() {
            c[a] = q(*x as i64);
        }
        self.elem(c)
    }

    fn mul_unram(&self, x: &[Q], y: &[Q]) -> Vec<Q> {
        let f = self.f;
        let mut prod = vec![q(0); 2 * f - 1];
        for (i, a) in x.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in y.iter().enumerate() {
                if !b.is_zero() {
                    prod[i + j] += a * b;
                }
            }
        }
        for k in (f..prod.len()).rev() {
            let c = std::mem::replace(&mut prod[k], q(0));
            if c.is_zero() {
                continue;
            }
            for j in 0..f {
                let t = &c * &self.g[j];
                prod[k - f + j] -= t;
            }
        }
        prod.truncate(f);
        prod
    }

    fn mul_coords(&self, x: &[Q], y: &[Q]) -> Vec<Q> {
        let (e, f) = (self.e, self.f);
        if e * f == 1 {
            return vec![&x[0] * &y[0]];
        }
        let mut buf = vec![vec![q(0); f]; 2 * e - 1];
        for b1 in 0..e {
            let xb = &x[b1 * f..(b1 + 1) * f];
            if xb.iter().all(Zero::is_zero) {
                continue;
            }
            for b2 in 0..e {
                let yb = &y[b2 * f..(b2 + 1) * f];
                if yb.iter().all(Zero::is_zero) {
                    continue;
                }
                let pr = self.mul_unram(xb, yb);
                for (t, v) in buf[b1 + b2].iter_mut().zip(pr) {
                    *t += v;
                }
            }
        }
        for k in (e..buf.len()).rev() {
            let c = std::mem::replace(&mut buf[k], vec![q(0); f]);
            if c.iter().all(Zero::is_zero) {
                continue;
            }
            for j in 0..e {
                let t = self.mul_unram(&c, &self.eis[j]);
                for (s, v) in buf[k - e + j].iter_mut().zip(t) {
                    *s -= v;
                }
            }
        }
        buf.truncate(e);
        buf.into_iter().flatten().collect()
    }

    fn basis(self: &Arc<Self>, k: usize) -> FieldElement {
        let mut c = vec![q(0); self.n()];
        c[k] = q(1);
        self.elem(c)
    }

    /// Valuation of a nonzero rational in the normalized valuation of the tower.
    pub fn valuation_q(&self, x: &Q) -> Result<i64> {
        let p = self.p().ok_or_else(|| Error::UnsupportedCase("valuation over R".into()))?;
        if x.is_zero() {
            return Err(Error::ZeroValuation);
        }
        self.check_precision(vp(x, p) * self.e as i64)
    }

    fn check_precision(&self, v: i64) -> Result<i64> {
        if v.unsigned_abs() > self.base.precision as u64 {
            Err(Error::PrecisionExhausted {
                valuation: v,
                precision: self.base.precision,
            })
        } else {
            Ok(v)
        }
    }

    pub fn describe(&self) -> String {
        match self.base.kind {
            FieldKind::Real => "R".into(),
            FieldKind::Padic(p) => {
                if self.is_trivial() {
                    format!("Q_{p}")
                } else {
                    format!("Q_{p}(f={}, e={})", self.f, self.e)
                }
            }
        }
    }
}

/// An exact element of a tower.
#[derive(Clone)]
pub struct FieldElement {
    tower: Arc<ExtensionTower>,
    coords: Vec<Q>,
}

impl PartialEq for FieldElement {
    fn eq(&self, o: &Self) -> bool {
        ExtensionTower::same(&self.tower, &o.tower) && self.coords == o.coords
    }
}

impl fmt::Debug for FieldElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self)
    }
}

impl fmt::Display for FieldElement {
    /// Renders as a polynomial in u and pi (e > 1) with rational coefficients.
    fn fmt(&self, fm: &mut fmt::Formatter<'_>) -> fmt::Result {
        let t = &self.tower;
        let mut terms = Vec::new();
        for b in 0..t.e {
            for a in 0..t.f {
                let c = &self.coords[b * t.f + a];
                if c.is_zero() {
                    continue;
                }
                let mut mon = Vec::new();
                if a == 1 {
                    mon.push("u".to_string());
                } else if a > 1 {
                    mon.push(format!("u^{a}"));
                }
                if b == 1 {
                    mon.push("pi".to_string());
                } else if b > 1 {
                    mon.push(format!("pi^{b}"));
                }
                let cs = fmt_q(c);
                terms.push(if mon.is_empty() {
                    cs
                } else if c.is_one() {
                    mon.join("*")
                } else if (-c).is_one() {
                    format!("-{}", mon.join("*"))
                } else {
                    format!("{}*{}", cs, mon.join("*"))
                });
            }
        }
        if terms.is_empty() {
            write!(fm, "0")
        } else {
            write!(fm, "{}", terms.join(" + ").replace("+ -", "- "))
        }
    }
}

impl FieldElement {
    pub fn tower(&self) -> &Arc<ExtensionTower> {
        &self.tower
    }

    pub fn coords(&self) -> &[Q] {
        &self.coords
    }

    /// Absolute precision tag: the base precision, since coordinates are exact.
    pub fn precision(&self) -> u32 {
        self.tower.base.precision
    }

    pub fn is_zero(&self) -> bool {
        self.coords.iter().all(Zero::is_zero)
    }

    pub fn is_one(&self) -> bool {
        self.coords[0].is_one() && self.coords[1..].iter().all(Zero::is_zero)
    }

    /// The rational value when the element lies in the base field.
    pub fn as_rational(&self) -> Option<Q> {
        self.coords[1..]
            .iter()
            .all(Zero::is_zero)
            .then(|| self.coords[0].clone())
    }

    fn same_tower(&self, o: &Self) {
        assert!(
            ExtensionTower::same(&self.tower, &o.tower),
            "elements of different towers combined"
        );
    }

    pub fn add(&self, o: &Self) -> Self {
        self.same_tower(o);
        let c = self.coords.iter().zip(&o.coords).map(|(a, b)| a + b).collect();
        self.tower.elem(c)
    }

    pub fn sub(&self, o: &Self) -> Self {
        self.same_tower(o);
        let c = self.coords.iter().zip(&o.coords).map(|(a, b)| a - b).collect();
        self.tower.elem(c)
    }

    pub fn neg(&self) -> Self {
        self.tower.elem(self.coords.iter().map(|a| -a).collect())
    }

    pub fn mul(&self, o: &Self) -> Self {
        self.same_tower(o);
        self.tower.elem(self.tower.mul_coords(&self.coords, &o.coords))
    }

    pub fn scale(&self, s: &Q) -> Self {
        self.tower.elem(self.coords.iter().map(|a| a * s).collect())
    }

    /// Matrix of multiplication by self on the rational power basis (columns are images).
    pub fn mult_matrix(&self) -> Matrix<Q> {
        let n = self.tower.n();
        let cols: Vec<Vec<Q>> = (0..n)
            .map(|k| self.mul(&self.tower.basis(k)).coords)
            .collect();
        (0..n).map(|i| (0..n).map(|j| cols[j][i].clone()).collect()).collect()
    }

    /// Norm to the base field.
    pub fn norm_to_base(&self) -> Q {
        if self.tower.n() == 1 {
            return self.coords[0].clone();
        }
        linalg::det(&self.mult_matrix(), &q(0))
    }

    /// Trace to the base field.
    pub fn trace_to_base(&self) -> Q {
        if self.tower.n() == 1 {
            return self.coords[0].clone();
        }
        linalg::trace(&self.mult_matrix(), &q(0))
    }

    pub fn inv(&self) -> Result<Self> {
        if self.is_zero() {
            return Err(Error::DivisionByZero);
        }
        if self.tower.n() == 1 {
            return Ok(self.tower.from_q(&self.coords[0].recip()));
        }
        let mut rhs = vec![q(0); self.tower.n()];
        rhs[0] = q(1);
        linalg::solve(&self.mult_matrix(), &rhs, &q(0))
            .map(|c| self.tower.elem(c))
            .ok_or(Error::DivisionByZero)
    }

    pub fn div(&self, o: &Self) -> Result<Self> {
        Ok(self.mul(&o.inv()?))
    }

    pub fn pow_i(&self, k: i64) -> Result<Self> {
        let base = if k < 0 { self.inv()? } else { self.clone() };
        Ok(arith::Ring::pow(&base, k.unsigned_abs()))
    }

    /// Normalized valuation, computed from the norm down to Q_p.
    pub fn valuation(&self) -> Result<i64> {
        let t = &self.tower;
        let p = t.p().ok_or_else(|| Error::UnsupportedCase("valuation over R".into()))?;
        if self.is_zero() {
            return Err(Error::ZeroValuation);
        }
        let vn = vp(&self.norm_to_base(), p);
        debug_assert_eq!(vn % t.f as i64, 0);
        t.check_precision(vn / t.f as i64)
    }

    /// Valuation together with the residue of the unit part a / π^v.
    ///
    /// In the integral basis u^a π^b the terms have pairwise distinct
    /// valuations e·v_p(a_b) + b, so the minimum is attained by one term.
    pub fn leading_residue(&self) -> Result<(i64, Fq)> {
        let t = &self.tower;
        let p = t.p().ok_or_else(|| Error::UnsupportedCase("residue over R".into()))?;
        let res = t.residue.as_ref().expect("p-adic towers carry a residue field");
        let mut best: Option<(i64, i64, usize)> = None;
        for b in 0..t.e {
            let block = &self.coords[b * t.f..(b + 1) * t.f];
            let k = block.iter().filter(|x| !x.is_zero()).map(|x| vp(x, p)).min();
            if let Some(k) = k {
                let v = t.e as i64 * k + b as i64;
                if best.is_none_or(|(bv, _, _)| v < bv) {
                    best = Some((v, k, b));
                }
            }
        }
        let (v, k, b) = best.ok_or(Error::ZeroValuation)?;
        t.check_precision(v)?;
        let pk = num_traits::pow::pow(q(p as i64), k.unsigned_abs() as usize);
        let scale = if k >= 0 { pk.recip() } else { pk };
        let digits: Vec<u64> = self.coords[b * t.f..(b + 1) * t.f]
            .iter()
            .map(|x| reduce_mod(&(x * &scale), p).expect("scaled coordinates are p-integral"))
            .collect();
        let w = res.from_coeffs(&digits);
        // p = π^e · U with U ≡ −1/w0 modulo π.
        let minus_w0_inv = res.inv(&res.neg(t.w0.as_ref().unwrap())).unwrap();
        let corr = if k >= 0 {
            res.pow(&minus_w0_inv, k as u64)
        } else {
            res.pow(&res.neg(t.w0.as_ref().unwrap()), k.unsigned_abs())
        };
        Ok((v, res.mul(&w, &corr)))
    }

    /// Sign of a real element.
    pub fn sign(&self) -> Result<i8> {
        if !self.tower.base.is_real() {
            return Err(Error::UnsupportedCase("sign of a p-adic element".into()));
        }
        if self.is_zero() {
            return Err(Error::DivisionByZero);
        }
        Ok(if self.coords[0].is_positive() { 1 } else { -1 })
    }
}

impl arith::Ring for FieldElement {
    fn zero_like(&self) -> Self {
        self.tower.zero()
    }
    fn one_like(&self) -> Self {
        self.tower.one()
    }
    fn is_zero(&self) -> bool {
        FieldElement::is_zero(self)
    }
    fn add(&self, o: &Self) -> Self {
        FieldElement::add(self, o)
    }
    fn sub(&self, o: &Self) -> Self {
        FieldElement::sub(self, o)
    }
    fn mul(&self, o: &Self) -> Self {
        FieldElement::mul(self, o)
    }
    fn neg(&self) -> Self {
        FieldElement::neg(self)
    }
    fn from_q_like(&self, x: &Q) -> Self {
        self.tower.from_q(x)
    }
}

impl arith::Field for FieldElement {
    fn inv(&self) -> Option<Self> {
        FieldElement::inv(self).ok()
    }
}

/// make_extension with rational Eisenstein coefficients, as in `x^2 - 5`.
pub fn make_extension(base: BaseField, f: usize, eis: &[i64]) -> Result<Arc<ExtensionTower>> {
    let c: Vec<Q> = eis.iter().map(|&x| q(x)).collect();
    ExtensionTower::from_rational_eis(base, f, &c)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q5() -> BaseField {
        BaseField::padic(5).unwrap()
    }

    #[test]
    fn towers_from_examples() {
        let t = make_extension(q5(), 1, &[-5, 1]).unwrap();
        assert_eq!((t.e, t.f, t.q()), (1, 1, Some(5)));
        assert_eq!(t.pi().unwrap(), t.from_int(5));
        let u = make_extension(q5(), 2, &[-5, 1]).unwrap();
        assert_eq!((u.e, u.f, u.q()), (1, 2, Some(25)));
        assert_eq!(u.from_int(5).valuation().unwrap(), 1);
        let r = make_extension(q5(), 1, &[-5, 0, 1]).unwrap();
        assert_eq!((r.e, r.f), (2, 1));
        assert_eq!(r.pi().unwrap().valuation().unwrap(), 1);
        assert_eq!(r.from_int(5).valuation().unwrap(), 2);
    }

    #[test]
    fn rejects_bad_polynomials() {
        assert!(matches!(
            make_extension(q5(), 1, &[-25, 0, 1]),
            Err(Error::NotEisenstein(_))
        ));
        assert!(matches!(
            make_extension(q5(), 1, &[-5, 1, 1]),
            Err(Error::NotEisenstein(_))
        ));
        let q2 = BaseField::padic(2).unwrap();
        assert_eq!(
            make_extension(q2, 1, &[-2, 0, 1]).unwrap_err(),
            Error::DyadicRamifiedUnsupported
        );
        assert_eq!(
            make_extension(q2, 2, &[-2, 1]).unwrap_err(),
            Error::DyadicRamifiedUnsupported
        );
        assert!(make_extension(q2, 1, &[-2, 1]).is_ok());
    }

    #[test]
    fn valuations_in_q5() {
        let t = q5().trivial_tower();
        assert_eq!(t.from_int(25).valuation().unwrap(), 2);
        assert_eq!(t.from_q(&crate::arith::qf(1, 5)).valuation().unwrap(), -1);
        assert_eq!(t.zero().valuation().unwrap_err(), Error::ZeroValuation);
    }

    #[test]
    fn precision_window() {
        let base = BaseField::padic_with_precision(3, 8).unwrap();
        let t = base.trivial_tower();
        assert!(t.from_int(3i64.pow(8)).valuation().is_ok());
        assert!(matches!(
            t.from_int(3i64.pow(9)).valuation(),
            Err(Error::PrecisionExhausted { .. })
        ));
        assert!(BaseField::padic_with_precision(3, 7).is_err());
    }

    #[test]
    fn inverse_and_norm_in_ramified_tower() {
        let r = make_extension(q5(), 2, &[-5, 0, 1]).unwrap();
        let u = r.gen_u().unwrap();
        let pi = r.pi().unwrap();
        let x = u.add(&pi.mul(&r.from_int(3))).add(&r.one());
        let y = x.inv().unwrap();
        assert!(x.mul(&y).is_one());
        assert_eq!(pi.mul(&pi), r.from_int(5));
        // the norm is multiplicative
        let z = u.mul(&u).sub(&pi);
        assert_eq!(x.mul(&z).norm_to_base(), x.norm_to_base() * z.norm_to_base());
    }

    #[test]
    fn leading_residue_agrees_with_norm_valuation() {
        let r = make_extension(q5(), 2, &[-10, 0, 1]).unwrap();
        let u = r.gen_u().unwrap();
        let pi = r.pi().unwrap();
        let samples = [
            r.from_int(5),
            pi.clone(),
            u.mul(&pi).add(&r.from_int(25)),
            r.from_q(&crate::arith::qf(3, 25)).add(&pi.pow_i(-3).unwrap()),
        ];
        for s in &samples {
            assert_eq!(s.leading_residue().unwrap().0, s.valuation().unwrap());
        }
    }
}
