//! Characteristic polynomials (division free) and Gaussian elimination.

use super::poly::Poly;
use super::{Field, Ring};

pub type Matrix<R> = Vec<Vec<R>>;

/// det(T·I − M) by Berkowitz's algorithm; works over any commutative ring.
pub fn charpoly<R: Ring>(m: &Matrix<R>, template: &R) -> Poly<R> {
    let n = m.len();
    let zero = template.zero_like();
    let one = template.one_like();
    // v holds coefficients from the leading one downwards.
    let mut v = vec![one.clone()];
    for r in 0..n {
        // Leading (r+1)x(r+1) block split as [[M, C], [R, a]].
        let a = m[r][r].clone();
        let mut t = vec![one.clone(), a.neg()];
        let mut mc: Vec<R> = (0..r).map(|i| m[i][r].clone()).collect();
        for _ in 0..r {
            let rc = (0..r).fold(zero.clone(), |acc, j| acc.add(&m[r][j].mul(&mc[j])));
            t.push(rc.neg());
            mc = (0..r)
                .map(|i| (0..r).fold(zero.clone(), |acc, j| acc.add(&m[i][j].mul(&mc[j]))))
                .collect();
        }
        let mut nv = vec![zero.clone(); r + 2];
        for (i, slot) in nv.iter_mut().enumerate() {
            for (j, vj) in v.iter().enumerate() {
                if i >= j {
                    *slot = slot.add(&t[i - j].mul(vj));
                }
            }
        }
        v = nv;
    }
    v.reverse();
    Poly::new(v, template)
}

pub fn trace<R: Ring>(m: &Matrix<R>, template: &R) -> R {
    (0..m.len()).fold(template.zero_like(), |acc, i| acc.add(&m[i][i]))
}

/// Determinant over a field by elimination with the first usable pivot.
pub fn det<F: Field>(m: &Matrix<F>, template: &F) -> F {
    let n = m.len();
    let mut a = m.clone();
    let mut d = template.one_like();
    for col in 0..n {
        let Some(piv) = (col..n).find(|&r| !a[r][col].is_zero()) else {
            return template.zero_like();
        };
        if piv != col {
            a.swap(piv, col);
            d = d.neg();
        }
        let inv = a[col][col].inv().expect("nonzero pivot is invertible");
        d = d.mul(&a[col][col]);
        for r in col + 1..n {
            if a[r][col].is_zero() {
                continue;
            }
            let f = a[r][col].mul(&inv);
            for c in col..n {
                let sub = f.mul(&a[col][c]);
                a[r][c] = a[r][c].sub(&sub);
            }
        }
    }
    d
}

/// Solve M x = b; None if M is singular.
pub fn solve<F: Field>(m: &Matrix<F>, b: &[F], template: &F) -> Option<Vec<F>> {
    let n = m.len();
    let mut a: Matrix<F> = m
        .iter()
        .zip(b)
        .map(|(row, bi)| {
            let mut r = row.clone();
            r.push(bi.clone());
            r
        })
        .collect();
    for col in 0..n {
        let piv = (col..n).find(|&r| !a[r][col].is_zero())?;
        a.swap(piv, col);
        let inv = a[col][col].inv()?;
        for c in col..=n {
            a[col][c] = a[col][c].mul(&inv);
        }
        for r in 0..n {
            if r == col || a[r][col].is_zero() {
                continue;
            }
            let f = a[r][col].clone();
            for c in col..=n {
                let sub = f.mul(&a[col][c]);
                a[r][c] = a[r][c].sub(&sub);
            }
        }
    }
    let _ = template;
    Some(a.into_iter().map(|mut r| r.pop().unwrap()).collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::{q, Q};

    fn mat(rows: &[&[i64]]) -> Matrix<Q> {
        rows.iter().map(|r| r.iter().map(|&x| q(x)).collect()).collect()
    }

    #[test]
    fn charpoly_2x2() {
        // [[1,2],[3,4]]: T^2 - 5T - 2
        let p = charpoly(&mat(&[&[1, 2], &[3, 4]]), &q(0));
        assert_eq!(p.coeffs(), &[q(-2), q(-5), q(1)]);
    }

    #[test]
    fn charpoly_3x3_matches_det() {
        let m = mat(&[&[2, -1, 0], &[1, 3, 5], &[-2, 0, 1]]);
        let p = charpoly(&m, &q(0));
        // constant term is (-1)^n det
        assert_eq!(p.coeff(0), -det(&m, &q(0)));
        assert_eq!(p.coeff(2), -q(6));
        // Cayley-Hamilton at T = 7 against a direct determinant
        let t = q(7);
        let shifted: Matrix<Q> = (0..3)
            .map(|i| {
                (0..3)
                    .map(|j| if i == j { &t - &m[i][j] } else { -m[i][j].clone() })
                    .collect()
            })
            .collect();
        assert_eq!(p.eval(&t), det(&shifted, &q(0)));
    }

    #[test]
    fn solve_roundtrip() {
        let m = mat(&[&[2, 1], &[1, 3]]);
        let x = solve(&m, &[q(1), q(2)], &q(0)).unwrap();
        assert_eq!(x, vec![Q::new(1.into(), 5.into()), Q::new(3.into(), 5.into())]);
        assert!(solve(&mat(&[&[1, 2], &[2, 4]]), &[q(1), q(1)], &q(0)).is_none());
    }
}
