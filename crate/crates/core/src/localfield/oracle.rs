//! Brute-force norm oracle: decides whether c is a norm from F(√δ) by
//! enumerating the finite ring O/π^M.
//!
//! After scaling c and δ by even powers of π both have valuation 0 or 1 and
//! c is a norm iff c' = x² − δy² is solvable with x, y integral, where c' = c
//! for odd p and c' = 4c over Q_2 (the ring of integers of F(√δ) can be
//! bigger than O[√δ] there). The equation is decided modulo π^M with
//! M = v(c') + depth; depth > v(4δ) is enough for Hensel lifting.

use super::{ExtensionTower, FieldElement, FieldKind};
use crate::arith::{q, reduce_mod};
use crate::error::{Error, Result};
use std::sync::Arc;

/// Arithmetic in O/π^M on integer coordinates of the basis u^a π^b.
struct Truncated {
    e: usize,
    f: usize,
    /// p^{k_b} for the coordinates of π^b.
    moduli: Vec<u64>,
    /// p^N with N = max k_b, the working modulus for products.
    big: u64,
    g: Vec<u64>,
    eis: Vec<Vec<u64>>,
    size: u64,
}

impl Truncated {
    fn new(t: &ExtensionTower, m: u32) -> Result<Self> {
        let p = t.p().expect("p-adic tower");
        let e = t.e;
        let ks: Vec<u32> = (0..e)
            .map(|b| (m as i64 - b as i64).max(0) as u32)
            .map(|r| r.div_ceil(e as u32))
            .collect();
        let moduli: Vec<u64> = ks.iter().map(|&k| p.pow(k)).collect();
        let big = p.pow(*ks.iter().max().unwrap()).max(1);
        let red = |x: &crate::arith::Q| {
            reduce_mod(x, big).ok_or_else(|| Error::Invalid("tower data is not p-integral".into()))
        };
        let g = t.modulus().iter().map(red).collect::<Result<_>>()?;
        let eis = t
            .eisenstein()
            .iter()
            .map(|c| c.iter().map(red).collect::<Result<Vec<_>>>())
            .collect::<Result<_>>()?;
        let size = moduli
            .iter()
            .try_fold(1u64, |acc, &md| acc.checked_mul(md.checked_pow(t.f as u32)?))
            .filter(|&s| s <= 1 << 28)
            .ok_or_else(|| Error::Invalid("residue ring too large to enumerate".into()))?;
        Ok(Truncated { e, f: t.f, moduli, big, g, eis, size })
    }

    fn canon(&self, x: &mut [u64]) {
        for b in 0..self.e {
            for a in 0..self.f {
                x[b * self.f + a] %= self.moduli[b];
            }
        }
    }

    fn from_elem(&self, x: &FieldElement) -> Result<Vec<u64>> {
        let mut v = x
            .coords()
            .iter()
            .map(|c| reduce_mod(c, self.big).ok_or_else(|| Error::Invalid("element is not integral".into())))
            .collect::<Result<Vec<_>>>()?;
        self.canon(&mut v);
        Ok(v)
    }

    fn element(&self, mut idx: u64) -> Vec<u64> {
        let mut v = vec![0; self.e * self.f];
        for b in 0..self.e {
            for a in 0..self.f {
                v[b * self.f + a] = idx % self.moduli[b];
                idx /= self.moduli[b];
            }
        }
        v
    }

    fn index(&self, x: &[u64]) -> u64 {
        let mut idx = 0;
        for b in (0..self.e).rev() {
            for a in (0..self.f).rev() {
                idx = idx * self.moduli[b] + x[b * self.f + a];
            }
        }
        idx
    }

    fn mulmod(&self, a: u64, b: u64) -> u64 {
        ((a as u128 * b as u128) % self.big as u128) as u64
    }

    fn mul_unram(&self, x: &[u64], y: &[u64]) -> Vec<u64> {
        let f = self.f;
        let big = self.big;
        let mut prod = vec![0u64; 2 * f - 1];
        for (i, &a) in x.iter().enumerate() {
            if a == 0 {
                continue;
            }
            for (j, &b) in y.iter().enumerate() {
                prod[i + j] = (prod[i + j] + self.mulmod(a, b)) % big;
            }
        }
        for k in (f..prod.len()).rev() {
            let c = std::mem::replace(&mut prod[k], 0);
            if c == 0 {
                continue;
            }
            for j in 0..f {
                let t = self.mulmod(c, self.g[j]);
                prod[k - f + j] = (prod[k - f + j] + big - t) % big;
            }
        }
        prod.truncate(f);
        prod
    }

    fn mul(&self, x: &[u64], y: &[u64]) -> Vec<u64> {
        let (e, f, big) = (self.e, self.f, self.big);
        let mut buf = vec![vec![0u64; f]; 2 * e - 1];
        for b1 in 0..e {
            for b2 in 0..e {
                let pr = self.mul_unram(&x[b1 * f..(b1 + 1) * f], &y[b2 * f..(b2 + 1) * f]);
                for (t, v) in buf[b1 + b2].iter_mut().zip(pr) {
                    *t = (*t + v) % big;
                }
            }
        }
        for k in (e..buf.len()).rev() {
            let c = std::mem::replace(&mut buf[k], vec![0; f]);
            if c.iter().all(|&x| x == 0) {
                continue;
            }
            for j in 0..e {
                let t = self.mul_unram(&c, &self.eis[j]);
                for (s, v) in buf[k - e + j].iter_mut().zip(t) {
                    *s = (*s + big - v) % big;
                }
            }
        }
        buf.truncate(e);
        let mut out: Vec<u64> = buf.into_iter().flatten().collect();
        self.canon(&mut out);
        out
    }

    fn add(&self, x: &[u64], y: &[u64]) -> Vec<u64> {
        let mut out: Vec<u64> = x.iter().zip(y).map(|(a, b)| (a + b) % self.big).collect();
        self.canon(&mut out);
        out
    }
}

/// Divide by an even power of π so that the valuation becomes 0 or 1.
fn normalize(x: &FieldElement) -> Result<(FieldElement, i64)> {
    let v = x.valuation()?;
    let k = v.div_euclid(2);
    let pi2 = x.tower().pi()?.pow_i(2)?;
    let n = x.mul(&pi2.pow_i(-k)?);
    Ok((n, v - 2 * k))
}

/// Smallest admissible depth for a given δ.
pub fn minimal_depth(delta: &FieldElement) -> Result<u32> {
    let (_, vd) = normalize(delta)?;
    let t = delta.tower();
    let v4 = t.valuation_q(&q(4))?;
    Ok((v4 + vd + 1) as u32)
}

/// +1 iff c is a norm from F(√δ), found by exhaustive search modulo π^M.
pub fn brute_force_norm_oracle(c: &FieldElement, delta: &FieldElement, depth: u32) -> Result<i8> {
    let t: &Arc<ExtensionTower> = c.tower();
    if !ExtensionTower::same(t, delta.tower()) {
        return Err(Error::Invalid("oracle inputs live in different towers".into()));
    }
    if let FieldKind::Real = t.base.kind {
        return Err(Error::UnsupportedCase("the oracle enumerates p-adic residue rings".into()));
    }
    let needed = minimal_depth(delta)?;
    if depth < needed {
        return Err(Error::DepthTooSmall { depth, needed });
    }
    let (cn, _) = normalize(c)?;
    let (dn, _) = normalize(delta)?;
    let cn = if t.p() == Some(2) { cn.scale(&q(4)) } else { cn };
    let m = cn.valuation()? as u32 + depth;
    let ring = Truncated::new(t, m)?;
    let mut squares = vec![false; ring.size as usize];
    for i in 0..ring.size {
        let x = ring.element(i);
        squares[ring.index(&ring.mul(&x, &x)) as usize] = true;
    }
    let cr = ring.from_elem(&cn)?;
    let dr = ring.from_elem(&dn)?;
    for i in 0..ring.size {
        let y = ring.element(i);
        let z = ring.add(&cr, &ring.mul(&dr, &ring.mul(&y, &y)));
        if squares[ring.index(&z) as usize] {
            return Ok(1);
        }
    }
    Ok(-1)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::localfield::{hilbert_symbol, make_extension, BaseField, SquareClass};

    #[test]
    fn q5_examples() {
        let t = BaseField::padic(5).unwrap().trivial_tower();
        let five = t.from_int(5);
        assert_eq!(brute_force_norm_oracle(&t.from_int(2), &five, 3).unwrap(), -1);
        assert_eq!(brute_force_norm_oracle(&t.one(), &five, 3).unwrap(), 1);
        assert_eq!(brute_force_norm_oracle(&five.neg(), &five, 3).unwrap(), 1);
        assert_eq!(
            brute_force_norm_oracle(&t.one(), &five, 1).unwrap_err(),
            Error::DepthTooSmall { depth: 1, needed: 2 }
        );
    }

    #[test]
    fn agrees_with_tame_formula_on_small_towers() {
        for (p, f, eis) in [(3u64, 1, vec![-3, 1]), (3, 2, vec![-3, 1]), (3, 1, vec![-3, 0, 1]), (2, 1, vec![-2, 1])] {
            let t = make_extension(BaseField::padic(p).unwrap(), f, &eis).unwrap();
            let classes = SquareClass::all(&t);
            for a in &classes {
                for b in &classes {
                    let (x, d) = (a.representative(&t), b.representative(&t));
                    if b.is_one() {
                        continue;
                    }
                    let depth = minimal_depth(&d).unwrap();
                    assert_eq!(
                        brute_force_norm_oracle(&x, &d, depth).unwrap(),
                        hilbert_symbol(&x, &d).unwrap(),
                        "p={p} f={f} e={} a={a} b={b}",
                        eis.len() - 1
                    );
                }
            }
        }
    }
}
