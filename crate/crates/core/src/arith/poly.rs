//! Dense univariate polynomials over a [`Ring`].

use super::{Field, Ring, Q};

/// Coefficients in increasing degree; no trailing zeros. The template
/// element fixes the parent ring so that the zero polynomial still knows it.
#[derive(Clone, Debug, PartialEq)]
pub struct Poly<R: Ring> {
    coeffs: Vec<R>,
    template: R,
}

impl<R: Ring> Poly<R> {
    pub fn new(mut coeffs: Vec<R>, template: &R) -> Self {
        while coeffs.last().is_some_and(|c| c.is_zero()) {
            coeffs.pop();
        }
        Poly {
            coeffs,
            template: template.zero_like(),
        }
    }

    pub fn zero(template: &R) -> Self {
        Self::new(Vec::new(), template)
    }

    pub fn one(template: &R) -> Self {
        Self::new(vec![template.one_like()], template)
    }

    /// The monic linear polynomial T − r.
    pub fn linear_root(r: &R) -> Self {
        Self::new(vec![r.neg(), r.one_like()], r)
    }

    pub fn coeffs(&self) -> &[R] {
        &self.coeffs
    }

    pub fn template(&self) -> &R {
        &self.template
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Degree, with the zero polynomial reported as None.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn coeff(&self, i: usize) -> R {
        self.coeffs
            .get(i)
            .cloned()
            .unwrap_or_else(|| self.template.zero_like())
    }

    pub fn leading(&self) -> R {
        self.coeffs
            .last()
            .cloned()
            .unwrap_or_else(|| self.template.zero_like())
    }

    pub fn add(&self, o: &Self) -> Self {
        let n = self.coeffs.len().max(o.coeffs.len());
        let c = (0..n).map(|i| self.coeff(i).add(&o.coeff(i))).collect();
        Self::new(c, &self.template)
    }

    pub fn sub(&self, o: &Self) -> Self {
        let n = self.coeffs.len().max(o.coeffs.len());
        let c = (0..n).map(|i| self.coeff(i).sub(&o.coeff(i))).collect();
        Self::new(c, &self.template)
    }

    pub fn mul(&self, o: &Self) -> Self {
        if self.is_zero() || o.is_zero() {
            return Self::zero(&self.template);
        }
        let mut c = vec![self.template.zero_like(); self.coeffs.len() + o.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in o.coeffs.iter().enumerate() {
                c[i + j] = c[i + j].add(&a.mul(b));
            }
        }
        Self::new(c, &self.template)
    }

    pub fn scale(&self, s: &R) -> Self {
        Self::new(self.coeffs.iter().map(|c| c.mul(s)).collect(), &self.template)
    }

    pub fn derivative(&self) -> Self {
        let c = self
            .coeffs
            .iter()
            .enumerate()
            .skip(1)
            .map(|(i, a)| a.mul(&a.from_q_like(&super::q(i as i64))))
            .collect();
        Self::new(c, &self.template)
    }

    /// Horner evaluation inside the coefficient ring.
    pub fn eval(&self, x: &R) -> R {
        let mut acc = x.zero_like();
        for c in self.coeffs.iter().rev() {
            acc = acc.mul(x).add(c);
        }
        acc
    }

    /// Horner evaluation after mapping every coefficient into another ring.
    pub fn eval_mapped<S: Ring>(&self, x: &S, embed: impl Fn(&R) -> S) -> S {
        let mut acc = x.zero_like();
        for c in self.coeffs.iter().rev() {
            acc = acc.mul(x).add(&embed(c));
        }
        acc
    }

    pub fn map<S: Ring>(&self, template: &S, f: impl Fn(&R) -> S) -> Poly<S> {
        Poly::new(self.coeffs.iter().map(f).collect(), template)
    }
}

impl<R: Field> Poly<R> {
    /// Euclidean division; panics on a zero divisor.
    pub fn div_rem(&self, d: &Self) -> (Self, Self) {
        let dd = d.degree().expect("division by zero polynomial");
        let inv = d.leading().inv().expect("leading coefficient not invertible");
        let mut r = self.clone();
        let mut qc = vec![self.template.zero_like(); self.coeffs.len().saturating_sub(dd).max(1)];
        while let Some(rd) = r.degree() {
            if rd < dd {
                break;
            }
            let coef = r.leading().mul(&inv);
            qc[rd - dd] = coef.clone();
            let mut shifted = vec![self.template.zero_like(); rd - dd];
            shifted.extend(d.coeffs.iter().map(|c| c.mul(&coef)));
            r = r.sub(&Self::new(shifted, &self.template));
        }
        (Self::new(qc, &self.template), r)
    }

    pub fn monic(&self) -> Self {
        match self.leading().inv() {
            Some(inv) if !self.is_zero() => self.scale(&inv),
            _ => self.clone(),
        }
    }

    pub fn gcd(&self, o: &Self) -> Self {
        let mut a = self.clone();
        let mut b = o.clone();
        while !b.is_zero() {
            let (_, r) = a.div_rem(&b);
            a = b;
            b = r;
        }
        a.monic()
    }

    /// True when the polynomial has no repeated root over an algebraic closure.
    pub fn is_squarefree(&self) -> bool {
        if self.degree().unwrap_or(0) == 0 {
            return true;
        }
        self.gcd(&self.derivative()).degree() == Some(0)
    }
}

pub type QPoly = Poly<Q>;

pub fn qpoly(coeffs: &[i64]) -> QPoly {
    Poly::new(coeffs.iter().map(|&c| super::q(c)).collect(), &super::q(0))
}
