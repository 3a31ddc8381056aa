//! Finite fields F_q = F_p[x]/(g) for small q.

/// Element coordinates in the power basis 1, x, ..., x^{f-1}.
pub type Fq = Vec<u64>;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FiniteField {
    pub p: u64,
    pub f: usize,
    /// Monic modulus, increasing degree, length f+1.
    pub modulus: Vec<u64>,
}

fn trim(mut v: Vec<u64>) -> Vec<u64> {
    while v.last() == Some(&0) {
        v.pop();
    }
    v
}

/// Remainder of a by b over F_p (b nonzero).
fn poly_rem(a: &[u64], b: &[u64], p: u64) -> Vec<u64> {
    let b = trim(b.to_vec());
    let mut r = trim(a.to_vec());
    let lead_inv = pow_mod(*b.last().unwrap(), p - 2, p);
    while r.len() >= b.len() && !r.is_empty() {
        let shift = r.len() - b.len();
        let c = r.last().unwrap() * lead_inv % p;
        for (i, bi) in b.iter().enumerate() {
            r[shift + i] = (r[shift + i] + p * p - c * bi % p) % p;
        }
        r = trim(r);
    }
    r
}

fn pow_mod(mut b: u64, mut e: u64, m: u64) -> u64 {
    let mut acc = 1 % m;
    b %= m;
    while e > 0 {
        if e & 1 == 1 {
            acc = acc * b % m;
        }
        b = b * b % m;
        e >>= 1;
    }
    acc
}

/// Brute-force irreducibility: no monic factor of degree ≤ deg/2.
pub fn is_irreducible(g: &[u64], p: u64) -> bool {
    let g = trim(g.iter().map(|c| c % p).collect());
    let d = g.len().saturating_sub(1);
    if d == 0 {
        return false;
    }
    for k in 1..=d / 2 {
        let count = p.pow(k as u32);
        for idx in 0..count {
            let mut h = digits(idx, p, k);
            h.push(1);
            if poly_rem(&g, &h, p).is_empty() {
                return false;
            }
        }
    }
    true
}

fn digits(mut idx: u64, p: u64, len: usize) -> Vec<u64> {
    let mut out = Vec::with_capacity(len);
    for _ in 0..len {
        out.push(idx % p);
        idx /= p;
    }
    out
}

/// First monic irreducible of degree f in the order of its low coefficients
/// read as base-p digits.
pub fn first_irreducible(p: u64, f: usize) -> Vec<u64> {
    if f == 1 {
        return vec![0, 1];
    }
    let count = p.pow(f as u32);
    for idx in 0..count {
        let mut g = digits(idx, p, f);
        g.push(1);
        if is_irreducible(&g, p) {
            return g;
        }
    }
    unreachable!("irreducible polynomials exist in every degree")
}

impl FiniteField {
    pub fn new(p: u64, modulus: Vec<u64>) -> Self {
        let modulus: Vec<u64> = modulus.into_iter().map(|c| c % p).collect();
        let f = modulus.len() - 1;
        FiniteField { p, f, modulus }
    }

    pub fn q(&self) -> u64 {
        self.p.pow(self.f as u32)
    }

    pub fn zero(&self) -> Fq {
        vec![0; self.f]
    }

    pub fn one(&self) -> Fq {
        let mut v = self.zero();
        v[0] = 1;
        v
    }

    pub fn from_int(&self, n: u64) -> Fq {
        let mut v = self.zero();
        v[0] = n % self.p;
        v
    }

    pub fn from_coeffs(&self, c: &[u64]) -> Fq {
        let r = poly_rem(&c.iter().map(|x| x % self.p).collect::<Vec<_>>(), &self.modulus, self.p);
        let mut v = self.zero();
        for (i, x) in r.into_iter().enumerate() {
            v[i] = x;
        }
        v
    }

    pub fn is_zero(&self, a: &Fq) -> bool {
        a.iter().all(|&x| x == 0)
    }

    pub fn add(&self, a: &Fq, b: &Fq) -> Fq {
        a.iter().zip(b).map(|(x, y)| (x + y) % self.p).collect()
    }

    pub fn neg(&self, a: &Fq) -> Fq {
        a.iter().map(|x| (self.p - x) % self.p).collect()
    }

    pub fn mul(&self, a: &Fq, b: &Fq) -> Fq {
        let mut prod = vec![0u64; 2 * self.f];
        for (i, x) in a.iter().enumerate() {
            for (j, y) in b.iter().enumerate() {
                prod[i + j] = (prod[i + j] + x * y) % self.p;
            }
        }
        self.from_coeffs(&prod)
    }

    pub fn pow(&self, a: &Fq, mut e: u64) -> Fq {
        let mut acc = self.one();
        let mut b = a.clone();
        while e > 0 {
            if e & 1 == 1 {
                acc = self.mul(&acc, &b);
            }
            b = self.mul(&b, &b);
            e >>= 1;
        }
        acc
    }

    pub fn inv(&self, a: &Fq) -> Option<Fq> {
        if self.is_zero(a) {
            None
        } else {
            Some(self.pow(a, self.q() - 2))
        }
    }

    /// Quadratic residue symbol: +1 for nonzero squares, −1 otherwise.
    /// Characteristic 2 has every element a square.
    pub fn legendre(&self, a: &Fq) -> i8 {
        assert!(!self.is_zero(a), "legendre symbol of zero");
        if self.p == 2 {
            return 1;
        }
        if self.pow(a, (self.q() - 1) / 2) == self.one() {
            1
        } else {
            -1
        }
    }

    /// Elements in a fixed order: index written in base p gives coordinates.
    pub fn element(&self, idx: u64) -> Fq {
        digits(idx, self.p, self.f)
    }

    pub fn index(&self, a: &Fq) -> u64 {
        a.iter().rev().fold(0, |acc, &x| acc * self.p + x)
    }

    /// The first non-square in enumeration order (odd p only).
    pub fn first_nonsquare(&self) -> Fq {
        (1..self.q())
            .map(|i| self.element(i))
            .find(|a| self.legendre(a) == -1)
            .expect("odd finite fields have non-squares")
    }

    /// The first generator of the multiplicative group in enumeration order.
    pub fn generator(&self) -> Fq {
        let n = self.q() - 1;
        let primes: Vec<u64> = (2..=n).filter(|&d| n.is_multiple_of(d) && super::is_prime(d)).collect();
        (1..self.q())
            .map(|i| self.element(i))
            .find(|a| primes.iter().all(|&r| self.pow(a, n / r) != self.one()))
            .expect("multiplicative group is cyclic")
    }

    /// Discrete logarithm to the given base by exhaustive search.
    pub fn dlog(&self, base: &Fq, a: &Fq) -> Option<u64> {
        let mut cur = self.one();
        for k in 0..self.q() - 1 {
            if &cur == a {
                return Some(k);
            }
            cur = self.mul(&cur, base);
        }
        None
    }
}
