//! Table-backed finite fields `GF(q)`, `q = p^e ≤ 256`.
//!
//! Element `i` encodes the polynomial whose coefficient of `x^j` is the `j`-th
//! base-`p` digit of `i`; `0` and `1` are the additive and multiplicative
//! identities. Extensions use the lexicographically smallest monic irreducible
//! polynomial of degree `e` (coefficients compared from `x^{e-1}` down).

use serde::Serialize;

use crate::error::{Error, Result};
use crate::numbers::prime_power;

pub const MAX_FIELD_ORDER: usize = 256;

#[derive(Debug, Clone, Serialize)]
pub struct FieldTable {
    q: usize,
    p: usize,
    degree: u32,
    #[serde(skip)]
    add: Vec<u16>,
    #[serde(skip)]
    mul: Vec<u16>,
    /// Monic modulus, coefficients from `x^0` up to `x^e`; present iff `e > 1`.
    irreducible_poly: Option<Vec<usize>>,
}

fn digits(mut x: usize, p: usize, e: u32) -> Vec<usize> {
    (0..e)
        .map(|_| {
            let d = x % p;
            x /= p;
            d
        })
        .collect()
}

fn undigits(d: &[usize], p: usize) -> usize {
    d.iter().rev().fold(0, |acc, &c| acc * p + c)
}

/// Remainder of `f` modulo a monic `g` over `GF(p)`.
fn poly_rem(f: &[usize], g: &[usize], p: usize) -> Vec<usize> {
    let mut r = f.to_vec();
    let dg = g.len() - 1;
    while r.len() > dg {
        let lead = r[r.len() - 1];
        let shift = r.len() - 1 - dg;
        if lead != 0 {
            for (i, &c) in g.iter().enumerate() {
                r[shift + i] = (r[shift + i] + p - (lead * c) % p) % p;
            }
        }
        r.pop();
    }
    r
}

fn is_irreducible(f: &[usize], p: usize) -> bool {
    let e = f.len() - 1;
    for d in 1..=e / 2 {
        for low in 0..p.pow(d as u32) {
            let mut g = digits(low, p, d as u32);
            g.push(1);
            if poly_rem(f, &g, p).iter().all(|&c| c == 0) {
                return false;
            }
        }
    }
    true
}

fn smallest_irreducible(p: usize, e: u32) -> Vec<usize> {
    (0..p.pow(e))
        .map(|low| {
            let mut f = digits(low, p, e);
            f.push(1);
            f
        })
        .find(|f| is_irreducible(f, p))
        .expect("irreducible polynomials of every degree exist over a prime field")
}

impl FieldTable {
    pub fn new(q: usize) -> Result<Self> {
        if q > MAX_FIELD_ORDER {
            return Err(Error::InvalidParameter(format!(
                "field order {q} exceeds the cap of {MAX_FIELD_ORDER}"
            )));
        }
        let (p, e) = prime_power(q as u64).ok_or(Error::NotPrimePower(q as u64))?;
        let p = p as usize;
        let poly = (e > 1).then(|| smallest_irreducible(p, e));

        let mut add = vec![0u16; q * q];
        let mut mul = vec![0u16; q * q];
        for a in 0..q {
            let da = digits(a, p, e);
            for b in 0..q {
                let db = digits(b, p, e);
                let sum: Vec<usize> = da.iter().zip(&db).map(|(x, y)| (x + y) % p).collect();
                add[a * q + b] = undigits(&sum, p) as u16;
                let prod = match &poly {
                    None => (a * b) % p,
                    Some(f) => {
                        let mut c = vec![0usize; 2 * e as usize - 1];
                        for (i, x) in da.iter().enumerate() {
                            for (j, y) in db.iter().enumerate() {
                                c[i + j] = (c[i + j] + x * y) % p;
                            }
                        }
                        let mut r = poly_rem(&c, f, p);
                        r.resize(e as usize, 0);
                        undigits(&r, p)
                    }
                };
                mul[a * q + b] = prod as u16;
            }
        }
        let field = FieldTable { q, p, degree: e, add, mul, irreducible_poly: poly };
        field.validate()?;
        Ok(field)
    }

    fn validate(&self) -> Result<()> {
        let q = self.q;
        for a in 0..q {
            if self.add(a, 0) != a || self.mul(a, 1) != a {
                return Err(Error::NotAGroup(format!("GF({q}) identities fail at {a}")));
            }
            for b in 0..q {
                if self.add(a, b) != self.add(b, a) || self.mul(a, b) != self.mul(b, a) {
                    return Err(Error::NotAGroup(format!("GF({q}) is not commutative")));
                }
            }
        }
        if self.multiplicative_generator().is_none() {
            return Err(Error::NotAGroup(format!("GF({q})^* is not cyclic of order {}", q - 1)));
        }
        Ok(())
    }

    pub fn order(&self) -> usize {
        self.q
    }

    pub fn characteristic(&self) -> usize {
        self.p
    }

    pub fn degree(&self) -> u32 {
        self.degree
    }

    pub fn zero(&self) -> usize {
        0
    }

    pub fn one(&self) -> usize {
        1
    }

    pub fn irreducible_poly(&self) -> Option<&[usize]> {
        self.irreducible_poly.as_deref()
    }

    #[inline]
    pub fn add(&self, a: usize, b: usize) -> usize {
        self.add[a * self.q + b] as usize
    }

    #[inline]
    pub fn mul(&self, a: usize, b: usize) -> usize {
        self.mul[a * self.q + b] as usize
    }

    pub fn neg(&self, a: usize) -> usize {
        (0..self.q).find(|&b| self.add(a, b) == 0).expect("additive inverse exists")
    }

    pub fn inv(&self, a: usize) -> Option<usize> {
        (a != 0).then(|| (1..self.q).find(|&b| self.mul(a, b) == 1).expect("field inverse"))
    }

    pub fn pow(&self, a: usize, e: u64) -> usize {
        (0..e).fold(1, |acc, _| self.mul(acc, a))
    }

    pub fn multiplicative_order(&self, a: usize) -> usize {
        assert_ne!(a, 0, "zero has no multiplicative order");
        let mut x = a;
        let mut o = 1;
        while x != 1 {
            x = self.mul(x, a);
            o += 1;
        }
        o
    }

    /// Smallest-index element of multiplicative order `q − 1`.
    pub fn multiplicative_generator(&self) -> Option<usize> {
        (1..self.q).find(|&a| self.multiplicative_order(a) == self.q - 1)
    }

    /// The unique subgroup of `GF(q)^*` of order `d`, in increasing index order.
    pub fn multiplicative_subgroup(&self, d: usize) -> Result<Vec<usize>> {
        if d == 0 || (self.q - 1) % d != 0 {
            return Err(Error::InvalidParameter(format!("{d} does not divide {}", self.q - 1)));
        }
        Ok((1..self.q).filter(|&a| self.pow(a, d as u64) == 1).collect())
    }

    /// Nonzero squares.
    pub fn nonzero_squares(&self) -> Vec<usize> {
        let mut sq: Vec<usize> = (1..self.q).map(|a| self.mul(a, a)).collect();
        sq.sort_unstable();
        sq.dedup();
        sq
    }
}
