//! Exact unit-circle values and tame characters of E^×.

use crate::arith::{q, Q};
use crate::error::{Error, Result};
use crate::etale::{EtaleElement, QuadraticEtale};
use crate::localfield::{self, ExtensionTower, FieldElement};
use num_traits::Zero;
use std::fmt;
use std::sync::Arc;

/// e^{2πit} stored as t ∈ [0, 1).
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct UnitCircleValue(Q);

impl UnitCircleValue {
    pub fn new(t: Q) -> Self {
        let fl = t.floor();
        UnitCircleValue(t - fl)
    }

    pub fn one() -> Self {
        UnitCircleValue(q(0))
    }

    pub fn from_sign(s: i8) -> Self {
        if s == 1 {
            Self::one()
        } else {
            UnitCircleValue(Q::new(1.into(), 2.into()))
        }
    }

    pub fn angle(&self) -> &Q {
        &self.0
    }

    pub fn mul(&self, o: &Self) -> Self {
        Self::new(&self.0 + &o.0)
    }

    pub fn neg(&self) -> Self {
        self.mul(&Self::from_sign(-1))
    }

    /// +1 or −1 when the value is a sign.
    pub fn sign(&self) -> Option<i8> {
        if self.0.is_zero() {
            Some(1)
        } else if self.0 == Q::new(1.into(), 2.into()) {
            Some(-1)
        } else {
            None
        }
    }
}

impl fmt::Display for UnitCircleValue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.sign() {
            Some(1) => write!(f, "+1"),
            Some(_) => write!(f, "-1"),
            None => write!(f, "exp(2*pi*i*{})", crate::arith::fmt_q(&self.0)),
        }
    }
}

/// E = F(√δ_E) as a local field, with its elements identified with a + b·s_E.
#[derive(Clone, Debug)]
pub struct LocalE {
    pub alg: Arc<QuadraticEtale>,
    pub tower: Arc<ExtensionTower>,
    /// s_E = scale · γ, where γ² = δ' generates the tower.
    scale: Q,
    ramified: bool,
}

impl LocalE {
    pub fn new(e: &Arc<QuadraticEtale>) -> Result<Self> {
        if !e.is_field() {
            return Err(Error::Invalid("E must be a quadratic field".into()));
        }
        let base = e.base().base;
        let p = base
            .p()
            .ok_or_else(|| Error::UnsupportedCase("unitary groups over R".into()))?;
        if p == 2 {
            return Err(Error::DyadicRamifiedUnsupported);
        }
        let de = e
            .delta()
            .as_rational()
            .ok_or_else(|| Error::Invalid("E must be quadratic over the base field".into()))?;
        let v = crate::arith::vp(&de, p);
        let k = v.div_euclid(2);
        let pk = num_traits::pow::pow(q(p as i64), k.unsigned_abs() as usize);
        let scale = if k >= 0 { pk } else { pk.recip() };
        let dprime = &de / (&scale * &scale);
        let pq = q(p as i64);
        let (tower, ramified) = if v - 2 * k == 0 {
            let g = vec![-dprime, q(0), q(1)];
            let eis = vec![vec![-pq, q(0)], vec![q(1), q(0)]];
            (ExtensionTower::with_modulus(base, g, &eis)?, false)
        } else {
            (ExtensionTower::new(base, 1, &[vec![-dprime], vec![q(0)], vec![q(1)]])?, true)
        };
        Ok(LocalE {
            alg: e.clone(),
            tower,
            scale,
            ramified,
        })
    }

    /// Image of a + b·s_E in the tower.
    pub fn to_tower(&self, z: &EtaleElement) -> Result<FieldElement> {
        let (Some(a), Some(b)) = (z.a.as_rational(), z.b.as_rational()) else {
            return Err(Error::Invalid("element is not in E".into()));
        };
        let gamma = if self.ramified {
            self.tower.pi()?
        } else {
            self.tower.gen_u()?
        };
        Ok(self.tower.from_q(&a).add(&gamma.scale(&(b * &self.scale))))
    }

    pub fn from_f(&self, x: &FieldElement) -> Result<EtaleElement> {
        let r = x
            .as_rational()
            .ok_or_else(|| Error::Invalid("element is not in the base field".into()))?;
        Ok(self.alg.from_q(&r))
    }

    /// Cardinality of the residue field of E.
    pub fn residue_size(&self) -> u64 {
        self.tower.q().unwrap()
    }
}

/// A character of E^× trivial on 1-units: angle on the uniformizer of E plus
/// an exponent k on the first generator g of the residue group, so that
/// μ(π_E^v·w) = v·angle + k·log_g(w̄)/(q_E − 1).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TameCharacter {
    pub angle_pi: Q,
    pub k: i64,
}

impl TameCharacter {
    pub fn trivial() -> Self {
        TameCharacter {
            angle_pi: q(0),
            k: 0,
        }
    }

    pub fn eval(&self, le: &LocalE, z: &EtaleElement) -> Result<UnitCircleValue> {
        if !QuadraticEtale::same(z.alg(), &le.alg) {
            return Err(Error::Invalid("character argument is not in E".into()));
        }
        let w = le.to_tower(z)?;
        let (v, res) = w.leading_residue()?;
        let field = le.tower.residue_field().unwrap();
        let qe = le.residue_size();
        let log = field
            .dlog(&field.generator(), &res)
            .expect("residues of units are powers of the generator");
        let unit_angle = Q::new((self.k as i128 * log as i128).into(), ((qe - 1) as i128).into());
        Ok(UnitCircleValue::new(&self.angle_pi * q(v) + unit_angle))
    }

    /// True iff μ|_{F^×} = sgn_{E/F}^m, tested on p and on a residue generator of F.
    pub fn restricts_to_sign_power(&self, le: &LocalE, m: u32) -> Result<bool> {
        let f = le.alg.base();
        let p = f.p().unwrap();
        let r = crate::arith::finite::FiniteField::new(p, vec![0, 1]).generator()[0];
        for z in [q(p as i64), q(r as i64)] {
            let x = f.from_q(&z);
            let sgn = localfield::hilbert_symbol(&x, le.alg.delta())?;
            let want = if sgn == -1 && m % 2 == 1 {
                UnitCircleValue::from_sign(-1)
            } else {
                UnitCircleValue::one()
            };
            if self.eval(le, &le.from_f(&x)?)? != want {
                return Ok(false);
            }
        }
        Ok(true)
    }

    pub fn is_trivial(&self) -> bool {
        self.angle_pi.is_zero() && self.k == 0
    }
}

impl fmt::Display for TameCharacter {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "tame(pi -> {}, k = {})", crate::arith::fmt_q(&self.angle_pi), self.k)
    }
}

/// χ(x) = (x, a) for the quadratic character attached to the square class of a.
pub fn eval_chi(a: &FieldElement, x: &FieldElement) -> Result<UnitCircleValue> {
    Ok(UnitCircleValue::from_sign(localfield::hilbert_symbol(x, a)?))
}
