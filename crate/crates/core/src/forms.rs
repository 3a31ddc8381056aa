//! Quadratic spaces over local fields and their classifying invariants.

use crate::arith::linalg::{self, Matrix};
use crate::arith::q;
use crate::error::{Error, Result};
use crate::etale::{EtaleElement, QuadraticEtale};
use crate::localfield::{self, ExtensionTower, FieldElement, FieldKind, SquareClass};
use std::sync::Arc;

#[derive(Clone, Debug, PartialEq)]
pub struct QuadraticSpace {
    field: Arc<ExtensionTower>,
    gram: Matrix<FieldElement>,
}

#[derive(Clone, Debug, PartialEq)]
pub struct FormInvariants {
    pub dim: usize,
    /// Diagonal entries found by elimination.
    pub diagonal: Vec<FieldElement>,
    pub det_class: Option<SquareClass>,
    /// (−1)^{d/2}·det for even d, with value 1 when d = 0.
    pub discriminant: Option<SquareClass>,
    pub hasse: Option<i8>,
    /// (positive, negative) over the reals.
    pub signature: Option<(usize, usize)>,
}

impl QuadraticSpace {
    pub fn new(field: &Arc<ExtensionTower>, gram: Matrix<FieldElement>) -> Result<Self> {
        let n = gram.len();
        for (i, row) in gram.iter().enumerate() {
            if row.len() != n {
                return Err(Error::Invalid("Gram matrix is not square".into()));
            }
            for (j, x) in row.iter().enumerate() {
                if x != &gram[j][i] {
                    return Err(Error::NonSymmetric);
                }
            }
        }
        let space = QuadraticSpace {
            field: field.clone(),
            gram,
        };
        if n > 0 && linalg::det(&space.gram, &field.zero()).is_zero() {
            return Err(Error::Degenerate);
        }
        Ok(space)
    }

    pub fn diagonal(field: &Arc<ExtensionTower>, entries: &[FieldElement]) -> Result<Self> {
        let n = entries.len();
        let gram = (0..n)
            .map(|i| {
                (0..n)
                    .map(|j| if i == j { entries[i].clone() } else { field.zero() })
                    .collect()
            })
            .collect();
        Self::new(field, gram)
    }

    /// m copies of the hyperbolic plane diag(1, −1).
    pub fn hyperbolic(field: &Arc<ExtensionTower>, m: usize) -> Self {
        let mut e = Vec::new();
        for _ in 0..m {
            e.push(field.one());
            e.push(field.from_int(-1));
        }
        Self::diagonal(field, &e).expect("hyperbolic space is nondegenerate")
    }

    pub fn field(&self) -> &Arc<ExtensionTower> {
        &self.field
    }

    pub fn dim(&self) -> usize {
        self.gram.len()
    }

    pub fn gram(&self) -> &Matrix<FieldElement> {
        &self.gram
    }

    pub fn det(&self) -> FieldElement {
        if self.dim() == 0 {
            return self.field.one();
        }
        linalg::det(&self.gram, &self.field.zero())
    }

    pub fn orthogonal_sum(&self, o: &Self) -> Self {
        let (n, m) = (self.dim(), o.dim());
        let mut g = vec![vec![self.field.zero(); n + m]; n + m];
        for i in 0..n {
            for j in 0..n {
                g[i][j] = self.gram[i][j].clone();
            }
        }
        for i in 0..m {
            for j in 0..m {
                g[n + i][n + j] = o.gram[i][j].clone();
            }
        }
        QuadraticSpace {
            field: self.field.clone(),
            gram: g,
        }
    }

    /// Gram matrix of P^t G P.
    pub fn change_basis(&self, p: &Matrix<FieldElement>) -> Result<Self> {
        let n = self.dim();
        let z = self.field.zero();
        let gp: Matrix<FieldElement> = (0..n)
            .map(|i| {
                (0..n)
                    .map(|j| (0..n).fold(z.clone(), |acc, k| acc.add(&self.gram[i][k].mul(&p[k][j]))))
                    .collect()
            })
            .collect();
        let g = (0..n)
            .map(|i| {
                (0..n)
                    .map(|j| (0..n).fold(z.clone(), |acc, k| acc.add(&p[k][i].mul(&gp[k][j]))))
                    .collect()
            })
            .collect();
        Self::new(&self.field, g)
    }

    /// Diagonal entries of a congruent diagonal form.
    ///
    /// Pivots are diagonal entries of minimal valuation, ties broken by
    /// basis order. A zero diagonal with a nonzero entry (i, j) is repaired by
    /// replacing e_i with e_i + e_j.
    pub fn diagonalize(&self) -> Result<Vec<FieldElement>> {
        let mut g = self.gram.clone();
        let mut alive: Vec<usize> = (0..g.len()).collect();
        let mut out = Vec::with_capacity(g.len());
        let padic = !self.field.base.is_real();
        while !alive.is_empty() {
            let mut pivot: Option<(usize, i64)> = None;
            for &i in &alive {
                if g[i][i].is_zero() {
                    continue;
                }
                let v = if padic { g[i][i].valuation()? } else { 0 };
                if pivot.is_none_or(|(_, pv)| v < pv) {
                    pivot = Some((i, v));
                }
            }
            let p = match pivot {
                Some((p, _)) => p,
                None => {
                    let (i, j) = alive
                        .iter()
                        .flat_map(|&i| alive.iter().map(move |&j| (i, j)))
                        .find(|&(i, j)| i != j && !g[i][j].is_zero())
                        .ok_or(Error::Degenerate)?;
                    let dii = g[i][i].add(&g[i][j]).add(&g[i][j]).add(&g[j][j]);
                    for &k in &alive {
                        if k != i {
                            let t = g[i][k].add(&g[j][k]);
                            g[i][k] = t.clone();
                            g[k][i] = t;
                        }
                    }
                    g[i][i] = dii;
                    i
                }
            };
            let a = g[p][p].clone();
            let ainv = a.inv()?;
            alive.retain(|&k| k != p);
            for &k in &alive {
                let f = g[k][p].mul(&ainv);
                if f.is_zero() {
                    continue;
                }
                for &l in &alive {
                    let t = g[k][l].sub(&f.mul(&g[p][l]));
                    g[k][l] = t;
                }
            }
            for &k in &alive {
                g[k][p] = self.field.zero();
                g[p][k] = self.field.zero();
            }
            out.push(a);
        }
        Ok(out)
    }

    pub fn invariants(&self) -> Result<FormInvariants> {
        let diag = self.diagonalize()?;
        let d = diag.len();
        let det = diag.iter().fold(self.field.one(), |acc, x| acc.mul(x));
        if let FieldKind::Real = self.field.base.kind {
            let neg = diag.iter().filter(|x| localfield::square_class(x).is_ok_and(|c| !c.is_one())).count();
            return Ok(FormInvariants {
                dim: d,
                diagonal: diag,
                det_class: Some(localfield::square_class(&det)?),
                discriminant: None,
                hasse: None,
                signature: Some((d - neg, neg)),
            });
        }
        let mut hasse = 1i8;
        for i in 0..d {
            for j in i + 1..d {
                hasse *= localfield::hilbert_symbol(&diag[i], &diag[j])?;
            }
        }
        let discriminant = if d % 2 == 0 {
            let sign = if (d / 2) % 2 == 0 { 1 } else { -1 };
            Some(localfield::square_class(&det.scale(&q(sign)))?)
        } else {
            None
        };
        Ok(FormInvariants {
            dim: d,
            diagonal: diag,
            det_class: Some(localfield::square_class(&det)?),
            discriminant,
            hasse: Some(hasse),
            signature: None,
        })
    }
}

/// Isometry test: (dim, det class, Hasse) over p-adic fields, signature over R.
pub fn isomorphic(a: &QuadraticSpace, b: &QuadraticSpace) -> Result<bool> {
    if !ExtensionTower::same(&a.field, &b.field) {
        return Err(Error::Invalid("spaces over different fields".into()));
    }
    let (ia, ib) = (a.invariants()?, b.invariants()?);
    if ia.dim != ib.dim {
        return Ok(false);
    }
    Ok(match a.field.base.kind {
        FieldKind::Real => ia.signature == ib.signature,
        FieldKind::Padic(_) => ia.det_class == ib.det_class && ia.hasse == ib.hasse,
    })
}

/// An F-basis of F_i: e_k and e_k·s for the power basis e_k of F_{±i}.
pub fn etale_basis(alg: &Arc<QuadraticEtale>) -> Vec<EtaleElement> {
    let base = alg.base();
    let n = base.n();
    let unit = |k: usize| {
        let mut c = vec![q(0); n];
        c[k] = q(1);
        base.elem(c)
    };
    let mut out: Vec<EtaleElement> = (0..n).map(|k| alg.from_base(&unit(k))).collect();
    out.extend((0..n).map(|k| alg.elem(base.zero(), unit(k))));
    out
}

/// One summand F_i with its coefficient (c_i or x_i) for a trace form.
#[derive(Clone, Debug)]
pub struct TraceBlock {
    pub alg: Arc<QuadraticEtale>,
    pub coeff: EtaleElement,
}

/// Gram matrix of (w, w') ↦ Σ trace_{F_i/F}(τ_i(w_i) w'_i c_i), plus an optional
/// line D with form d·w_D·w'_D placed first. No symmetry is imposed.
pub fn bilinear_trace_gram(
    ground: &Arc<ExtensionTower>,
    blocks: &[TraceBlock],
    d_coeff: Option<&FieldElement>,
) -> Matrix<FieldElement> {
    let mut diag_blocks: Vec<Matrix<FieldElement>> = Vec::new();
    if let Some(c) = d_coeff {
        diag_blocks.push(vec![vec![c.clone()]]);
    }
    for b in blocks {
        let basis = etale_basis(&b.alg);
        let m = basis
            .iter()
            .map(|w| {
                basis
                    .iter()
                    .map(|w2| ground.from_q(&w.tau().mul(w2).mul(&b.coeff).trace_to_base_field()))
                    .collect()
            })
            .collect();
        diag_blocks.push(m);
    }
    let n: usize = diag_blocks.iter().map(|m| m.len()).sum();
    let mut g = vec![vec![ground.zero(); n]; n];
    let mut off = 0;
    for m in diag_blocks {
        for (i, row) in m.iter().enumerate() {
            for (j, x) in row.iter().enumerate() {
                g[off + i][off + j] = x.clone();
            }
        }
        off += m.len();
    }
    g
}

/// The quadratic trace form of coefficients c_i with τ_i(c_i) = c_i.
pub fn trace_form_gram(
    ground: &Arc<ExtensionTower>,
    blocks: &[TraceBlock],
    d_coeff: Option<&FieldElement>,
) -> Result<QuadraticSpace> {
    for b in blocks {
        if !b.coeff.is_fixed() {
            return Err(Error::NonSymmetric);
        }
    }
    QuadraticSpace::new(ground, bilinear_trace_gram(ground, blocks, d_coeff))
}

/// q(v, v') = x̃(v, v') + x̃(v', v) for the twisted form with coefficients x_i.
pub fn symmetrize_twisted(
    ground: &Arc<ExtensionTower>,
    blocks: &[TraceBlock],
    x_d: Option<&FieldElement>,
) -> Result<QuadraticSpace> {
    let g = bilinear_trace_gram(ground, blocks, x_d);
    let n = g.len();
    let s = (0..n)
        .map(|i| (0..n).map(|j| g[i][j].add(&g[j][i])).collect())
        .collect();
    QuadraticSpace::new(ground, s)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::localfield::BaseField;

    fn q5() -> Arc<ExtensionTower> {
        BaseField::padic(5).unwrap().trivial_tower()
    }

    #[test]
    fn basic_invariants() {
        let t = q5();
        let i11 = QuadraticSpace::diagonal(&t, &[t.one(), t.one()]).unwrap().invariants().unwrap();
        assert_eq!(i11.hasse, Some(1));
        assert!(i11.det_class.unwrap().is_one());
        let h = QuadraticSpace::hyperbolic(&t, 1).invariants().unwrap();
        assert!(h.discriminant.unwrap().is_one());
        let f55 = QuadraticSpace::diagonal(&t, &[t.from_int(5), t.from_int(5)]).unwrap();
        assert_eq!(f55.invariants().unwrap().hasse, Some(1));
    }

    #[test]
    fn trace_forms() {
        let t = q5();
        let d_only = trace_form_gram(&t, &[], Some(&t.one())).unwrap();
        assert_eq!(d_only.gram(), &vec![vec![t.one()]]);
        let split = QuadraticEtale::split(&t);
        let hyp = trace_form_gram(&t, &[TraceBlock { alg: split.clone(), coeff: split.one() }], None).unwrap();
        assert!(hyp.invariants().unwrap().discriminant.unwrap().is_one());
        let f = QuadraticEtale::field(&t, t.from_int(5)).unwrap();
        let sp = trace_form_gram(&t, &[TraceBlock { alg: f.clone(), coeff: f.one() }], None).unwrap();
        // det ≡ Norm(−δ) = −5 mod squares
        assert_eq!(
            localfield::square_class(&sp.det()).unwrap(),
            localfield::square_class(&t.from_int(-5)).unwrap()
        );
        let nonsym = trace_form_gram(&t, &[TraceBlock { alg: f.clone(), coeff: f.s() }], None);
        assert_eq!(nonsym.unwrap_err(), Error::NonSymmetric);
    }

    #[test]
    fn symmetrized_twisted_forms() {
        let t = q5();
        let split = QuadraticEtale::split(&t);
        let x = split.from_pair(&t.one(), &t.one()).unwrap();
        let blocks = [TraceBlock { alg: split.clone(), coeff: x }];
        let sym = symmetrize_twisted(&t, &blocks, None).unwrap();
        let tf = trace_form_gram(&t, &blocks, None).unwrap();
        let doubled: Matrix<FieldElement> = tf
            .gram()
            .iter()
            .map(|r| r.iter().map(|v| v.scale(&q(2))).collect())
            .collect();
        assert_eq!(sym.gram(), &doubled);
    }

    #[test]
    fn real_signatures() {
        let r = BaseField::real().trivial_tower();
        let a = QuadraticSpace::diagonal(&r, &[r.one(), r.one()]).unwrap();
        let b = QuadraticSpace::hyperbolic(&r, 1);
        assert!(!isomorphic(&a, &b).unwrap());
        assert!(isomorphic(&a, &a).unwrap());
    }

    #[test]
    fn zero_diagonal_is_repaired() {
        let t = q5();
        let g = vec![vec![t.zero(), t.one()], vec![t.one(), t.zero()]];
        let s = QuadraticSpace::new(&t, g).unwrap();
        assert!(isomorphic(&s, &QuadraticSpace::hyperbolic(&t, 1)).unwrap());
    }
}
