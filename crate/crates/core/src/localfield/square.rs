//! Square classes and quadratic Hilbert symbols.

use super::{ExtensionTower, FieldElement, FieldKind};
use crate::arith::{q, reduce_mod, vp};
use crate::error::{Error, Result};
use num_traits::Signed;
use std::fmt;
use std::sync::Arc;

/// A class in F^×/F^×2.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum SquareClass {
    /// Odd residue characteristic: u^unit · π^odd.
    Tame { nonsquare_unit: bool, odd_valuation: bool },
    /// Q_2: valuation parity and the unit part modulo 8 (one of 1, 3, 5, 7).
    Dyadic { odd_valuation: bool, unit_mod8: u8 },
    Real { negative: bool },
}

impl SquareClass {
    pub fn is_one(&self) -> bool {
        match *self {
            SquareClass::Tame { nonsquare_unit, odd_valuation } => !nonsquare_unit && !odd_valuation,
            SquareClass::Dyadic { odd_valuation, unit_mod8 } => !odd_valuation && unit_mod8 == 1,
            SquareClass::Real { negative } => !negative,
        }
    }

    /// The canonical representative: one of 1, u, π, uπ; 2^α·w with w ∈ {1,3,5,7}; ±1.
    pub fn representative(&self, tower: &Arc<ExtensionTower>) -> FieldElement {
        match *self {
            SquareClass::Tame { nonsquare_unit, odd_valuation } => {
                let mut r = tower.one();
                if nonsquare_unit {
                    r = tower.nonresidue_lift().expect("odd residue field");
                }
                if odd_valuation {
                    r = r.mul(&tower.pi().expect("p-adic tower"));
                }
                r
            }
            SquareClass::Dyadic { odd_valuation, unit_mod8 } => {
                let v = if odd_valuation { 2 } else { 1 };
                tower.from_int(v * unit_mod8 as i64)
            }
            SquareClass::Real { negative } => tower.from_int(if negative { -1 } else { 1 }),
        }
    }

    /// All classes of a tower in a fixed order, starting with the trivial one.
    pub fn all(tower: &ExtensionTower) -> Vec<SquareClass> {
        match tower.base.kind {
            FieldKind::Real => vec![
                SquareClass::Real { negative: false },
                SquareClass::Real { negative: true },
            ],
            FieldKind::Padic(2) => [false, true]
                .iter()
                .flat_map(|&odd_valuation| {
                    [1u8, 3, 5, 7].map(|unit_mod8| SquareClass::Dyadic { odd_valuation, unit_mod8 })
                })
                .collect(),
            FieldKind::Padic(_) => [(false, false), (true, false), (false, true), (true, true)]
                .iter()
                .map(|&(nonsquare_unit, odd_valuation)| SquareClass::Tame {
                    nonsquare_unit,
                    odd_valuation,
                })
                .collect(),
        }
    }
}

impl fmt::Display for SquareClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match *self {
            SquareClass::Tame { nonsquare_unit, odd_valuation } => {
                let s = match (nonsquare_unit, odd_valuation) {
                    (false, false) => "1",
                    (true, false) => "u",
                    (false, true) => "pi",
                    (true, true) => "u*pi",
                };
                write!(f, "{s}")
            }
            SquareClass::Dyadic { odd_valuation, unit_mod8 } => {
                if odd_valuation {
                    write!(f, "2*{unit_mod8}")
                } else {
                    write!(f, "{unit_mod8}")
                }
            }
            SquareClass::Real { negative } => write!(f, "{}", if negative { "-1" } else { "1" }),
        }
    }
}

fn dyadic_parts(a: &FieldElement) -> Result<(i64, u8)> {
    let x = a.as_rational().ok_or(Error::DyadicRamifiedUnsupported)?;
    if a.is_zero() {
        return Err(Error::ZeroValuation);
    }
    let v = vp(&x, 2);
    a.tower().check_precision(v)?;
    let pv = num_traits::pow::pow(q(2), v.unsigned_abs() as usize);
    let unit = if v >= 0 { x / pv } else { x * pv };
    let w = reduce_mod(&unit, 8).expect("odd unit is invertible mod 8");
    Ok((v, w as u8))
}

pub fn square_class(a: &FieldElement) -> Result<SquareClass> {
    if a.is_zero() {
        return Err(Error::ZeroValuation);
    }
    match a.tower().base.kind {
        FieldKind::Real => Ok(SquareClass::Real {
            negative: a.coords()[0].is_negative(),
        }),
        FieldKind::Padic(2) => {
            let (v, w) = dyadic_parts(a)?;
            Ok(SquareClass::Dyadic {
                odd_valuation: v.rem_euclid(2) == 1,
                unit_mod8: w,
            })
        }
        FieldKind::Padic(_) => {
            let (v, r) = a.leading_residue()?;
            let res = a.tower().residue_field().unwrap();
            Ok(SquareClass::Tame {
                nonsquare_unit: res.legendre(&r) == -1,
                odd_valuation: v.rem_euclid(2) == 1,
            })
        }
    }
}

pub fn is_square(a: &FieldElement) -> Result<bool> {
    Ok(square_class(a)?.is_one())
}

/// Quadratic Hilbert symbol (a, b) in {+1, −1}.
pub fn hilbert_symbol(a: &FieldElement, b: &FieldElement) -> Result<i8> {
    if !ExtensionTower::same(a.tower(), b.tower()) {
        return Err(Error::Invalid("Hilbert symbol of elements in different towers".into()));
    }
    if a.is_zero() || b.is_zero() {
        return Err(Error::ZeroValuation);
    }
    match a.tower().base.kind {
        FieldKind::Real => {
            let neg = |x: &FieldElement| x.coords()[0].is_negative();
            Ok(if neg(a) && neg(b) { -1 } else { 1 })
        }
        FieldKind::Padic(2) => {
            let (al, u) = dyadic_parts(a)?;
            let (be, w) = dyadic_parts(b)?;
            let eps = |x: u8| ((x as i64 - 1) / 2) & 1;
            let omega = |x: u8| ((x as i64 * x as i64 - 1) / 8) & 1;
            let e = eps(u) * eps(w) + al * omega(w) + be * omega(u);
            Ok(if e.rem_euclid(2) == 0 { 1 } else { -1 })
        }
        FieldKind::Padic(_) => {
            // Tame symbol: the residue of (−1)^{αβ} a^β / b^α, raised to (q−1)/2.
            let res = a.tower().residue_field().unwrap();
            let (al, ea) = a.leading_residue()?;
            let (be, eb) = b.leading_residue()?;
            let mut s = res.one();
            if (al * be).rem_euclid(2) == 1 {
                s = res.neg(&s);
            }
            if be.rem_euclid(2) == 1 {
                s = res.mul(&s, &ea);
            }
            if al.rem_euclid(2) == 1 {
                s = res.mul(&s, &res.inv(&eb).unwrap());
            }
            Ok(res.legendre(&s))
        }
    }
}

/// +1 iff c is a norm from F(√δ); a square δ gives the split algebra.
pub fn norm_test_delta(c: &FieldElement, delta: &FieldElement) -> Result<i8> {
    if c.is_zero() {
        return Err(Error::ZeroValuation);
    }
    if is_square(delta)? {
        return Ok(1);
    }
    hilbert_symbol(c, delta)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::localfield::{make_extension, BaseField};

    #[test]
    fn examples_over_q5() {
        let t = BaseField::padic(5).unwrap().trivial_tower();
        assert!(is_square(&t.from_int(9)).unwrap());
        assert_eq!(square_class(&t.from_int(5)).unwrap().to_string(), "pi");
        assert_eq!(square_class(&t.from_int(2)).unwrap().to_string(), "u");
        assert_eq!(hilbert_symbol(&t.from_int(2), &t.from_int(5)).unwrap(), -1);
        assert_eq!(hilbert_symbol(&t.from_int(5), &t.from_int(5)).unwrap(), 1);
        assert_eq!(norm_test_delta(&t.from_int(2), &t.from_int(5)).unwrap(), -1);
        assert_eq!(norm_test_delta(&t.from_int(2), &t.from_int(4)).unwrap(), 1);
    }

    #[test]
    fn representatives_land_in_their_class() {
        for (p, f, eis) in [(3u64, 1, vec![-3, 1]), (5, 2, vec![-5, 1]), (7, 1, vec![-7, 0, 1]), (2, 1, vec![-2, 1])] {
            let t = make_extension(BaseField::padic(p).unwrap(), f, &eis).unwrap();
            let classes = SquareClass::all(&t);
            for c in &classes {
                assert_eq!(square_class(&c.representative(&t)).unwrap(), *c);
            }
        }
    }

    #[test]
    fn q2_classical_values() {
        let t = BaseField::padic(2).unwrap().trivial_tower();
        let h = |a: i64, b: i64| hilbert_symbol(&t.from_int(a), &t.from_int(b)).unwrap();
        assert_eq!(h(-1, -1), -1);
        assert_eq!(h(2, 3), -1);
        assert_eq!(h(2, 5), -1);
        assert_eq!(h(2, 7), 1);
        assert_eq!(h(3, 3), -1);
        assert_eq!(h(5, 5), 1);
        assert_eq!(h(2, -2), 1);
    }

    #[test]
    fn real_sign_rule() {
        let t = BaseField::real().trivial_tower();
        assert_eq!(hilbert_symbol(&t.from_int(-2), &t.from_int(-3)).unwrap(), -1);
        assert_eq!(hilbert_symbol(&t.from_int(-2), &t.from_int(3)).unwrap(), 1);
    }
}
