//! Small finite fields of odd characteristic. Elements are encoded as integers
//! in [0, q): residues for prime fields, base-p digit strings of polynomial
//! coefficients for extensions.

use crate::error::{Error, Result};

pub trait FiniteField: Send + Sync {
    fn order(&self) -> u32;
    fn characteristic(&self) -> u32;
    fn add(&self, a: u32, b: u32) -> u32;
    fn mul(&self, a: u32, b: u32) -> u32;
    fn neg(&self, a: u32) -> u32;

    fn zero(&self) -> u32 {
        0
    }

    fn one(&self) -> u32 {
        1
    }

    fn sub(&self, a: u32, b: u32) -> u32 {
        self.add(a, self.neg(b))
    }

    fn pow(&self, mut a: u32, mut e: u64) -> u32 {
        let mut acc = self.one();
        while e > 0 {
            if e & 1 == 1 {
                acc = self.mul(acc, a);
            }
            a = self.mul(a, a);
            e >>= 1;
        }
        acc
    }

    /// Multiplicative inverse by Fermat, `None` for zero.
    fn inv(&self, a: u32) -> Option<u32> {
        (a != 0).then(|| self.pow(a, u64::from(self.order()) - 2))
    }

    fn is_square(&self, a: u32) -> bool {
        a == 0 || self.pow(a, u64::from(self.order() - 1) / 2) == self.one()
    }

    /// Whether −1 has a square root, tested by Euler's criterion.
    fn has_sqrt_minus_one(&self) -> bool {
        self.is_square(self.neg(self.one()))
    }

    /// Σ a_i b_i.
    fn dot(&self, a: &[u32], b: &[u32]) -> u32 {
        a.iter()
            .zip(b)
            .fold(self.zero(), |acc, (&x, &y)| if x == 0 || y == 0 { acc } else { self.add(acc, self.mul(x, y)) })
    }

    /// Determinant by Gaussian elimination; the matrix is consumed as scratch.
    fn det(&self, m: &mut [u32], size: usize) -> u32 {
        let mut acc = self.one();
        for c in 0..size {
            let Some(p) = (c..size).find(|&r| m[r * size + c] != 0) else {
                return 0;
            };
            if p != c {
                for j in 0..size {
                    m.swap(p * size + j, c * size + j);
                }
                acc = self.neg(acc);
            }
            let pivot = m[c * size + c];
            acc = self.mul(acc, pivot);
            let inv = self.inv(pivot).expect("nonzero pivot");
            for r in c + 1..size {
                let f = self.mul(m[r * size + c], inv);
                if f == 0 {
                    continue;
                }
                for j in c..size {
                    let v = self.sub(m[r * size + j], self.mul(f, m[c * size + j]));
                    m[r * size + j] = v;
                }
            }
        }
        acc
    }
}

fn is_prime(p: u32) -> bool {
    p >= 2 && (2..).take_while(|d| d * d <= p).all(|d| p % d != 0)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct PrimeField {
    p: u32,
}

impl PrimeField {
    pub fn new(p: u32) -> Result<Self> {
        if !is_prime(p) || p == 2 {
            return Err(Error::Argument(format!("{p} is not an odd prime")));
        }
        Ok(Self { p })
    }
}

impl FiniteField for PrimeField {
    fn order(&self) -> u32 {
        self.p
    }

    fn characteristic(&self) -> u32 {
        self.p
    }

    fn add(&self, a: u32, b: u32) -> u32 {
        ((u64::from(a) + u64::from(b)) % u64::from(self.p)) as u32
    }

    fn mul(&self, a: u32, b: u32) -> u32 {
        ((u64::from(a) * u64::from(b)) % u64::from(self.p)) as u32
    }

    fn neg(&self, a: u32) -> u32 {
        if a == 0 {
            0
        } else {
            self.p - a
        }
    }

    fn dot(&self, a: &[u32], b: &[u32]) -> u32 {
        let p = u64::from(self.p);
        if p < 1 << 20 && a.len() < 1 << 20 {
            // products stay below 2^40, so the sum cannot overflow before one reduction
            let s: u64 = a.iter().zip(b).map(|(&x, &y)| u64::from(x) * u64::from(y)).sum();
            (s % p) as u32
        } else {
            a.iter()
                .zip(b)
                .fold(0, |acc, (&x, &y)| self.add(acc, self.mul(x, y)))
        }
    }
}

/// 𝔽_{p^e} = 𝔽_p[x]/(f) for the lexicographically first monic irreducible f
/// of degree e. Addition and multiplication are tabulated, so q ≤ 1024.
#[derive(Clone, Debug)]
pub struct ExtensionField {
    p: u32,
    q: u32,
    modulus: Vec<u32>,
    add_table: Vec<u32>,
    mul_table: Vec<u32>,
}

pub const MAX_EXTENSION_ORDER: u32 = 1024;

fn digits(mut a: u32, p: u32, len: usize) -> Vec<u32> {
    (0..len)
        .map(|_| {
            let d = a % p;
            a /= p;
            d
        })
        .collect()
}

fn undigits(d: &[u32], p: u32) -> u32 {
    d.iter().rev().fold(0, |acc, &x| acc * p + x)
}

/// Product of two polynomials over 𝔽_p reduced modulo a monic `modulus`.
fn mul_mod(a: &[u32], b: &[u32], modulus: &[u32], p: u32) -> Vec<u32> {
    let e = modulus.len() - 1;
    let mut prod = vec![0u64; a.len() + b.len()];
    for (i, &x) in a.iter().enumerate() {
        for (j, &y) in b.iter().enumerate() {
            prod[i + j] = (prod[i + j] + u64::from(x) * u64::from(y)) % u64::from(p);
        }
    }
    for top in (e..prod.len()).rev() {
        let c = prod[top];
        if c == 0 {
            continue;
        }
        for (i, &m) in modulus.iter().enumerate() {
            let idx = top - e + i;
            prod[idx] = (prod[idx] + u64::from(p) * u64::from(p) - c * u64::from(m)) % u64::from(p);
        }
    }
    prod.truncate(e);
    prod.resize(e, 0);
    prod.into_iter().map(|x| x as u32).collect()
}

fn is_irreducible(f: &[u32], p: u32) -> bool {
    // trial division by every monic polynomial of degree 1..=deg/2
    let deg = f.len() - 1;
    for d in 1..=deg / 2 {
        for code in 0..p.pow(d as u32) {
            let mut g = digits(code, p, d);
            g.push(1);
            if poly_rem(f, &g, p).iter().all(|&c| c == 0) {
                return false;
            }
        }
    }
    true
}

fn poly_rem(f: &[u32], g: &[u32], p: u32) -> Vec<u32> {
    let mut r: Vec<u64> = f.iter().map(|&x| u64::from(x)).collect();
    let dg = g.len() - 1;
    let p64 = u64::from(p);
    for top in (dg..r.len()).rev() {
        let c = r[top];
        if c == 0 {
            continue;
        }
        for (i, &m) in g.iter().enumerate() {
            let idx = top - dg + i;
            r[idx] = (r[idx] + p64 * p64 - c * u64::from(m)) % p64;
        }
    }
    r.truncate(dg);
    r.into_iter().map(|x| x as u32).collect()
}

impl ExtensionField {
    pub fn new(p: u32, degree: u32) -> Result<Self> {
        if !is_prime(p) || p == 2 || degree == 0 {
            return Err(Error::Argument(format!("bad extension data p={p}, degree={degree}")));
        }
        let q = p
            .checked_pow(degree)
            .filter(|&q| q <= MAX_EXTENSION_ORDER)
            .ok_or_else(|| Error::Resource(format!("{p}^{degree} exceeds {MAX_EXTENSION_ORDER}")))?;
        let e = degree as usize;
        let modulus = (0..p.pow(degree))
            .map(|code| {
                let mut f = digits(code, p, e);
                f.push(1);
                f
            })
            .find(|f| is_irreducible(f, p))
            .expect("irreducible polynomials exist in every degree");
        let qs = q as usize;
        let mut add_table = vec![0; qs * qs];
        let mut mul_table = vec![0; qs * qs];
        for a in 0..q {
            let da = digits(a, p, e);
            for b in 0..q {
                let db = digits(b, p, e);
                let s: Vec<u32> = da.iter().zip(&db).map(|(x, y)| (x + y) % p).collect();
                add_table[a as usize * qs + b as usize] = undigits(&s, p);
                mul_table[a as usize * qs + b as usize] = undigits(&mul_mod(&da, &db, &modulus, p), p);
            }
        }
        Ok(Self {
            p,
            q,
            modulus,
            add_table,
            mul_table,
        })
    }

    /// Coefficients of the defining polynomial, constant term first.
    pub fn modulus(&self) -> &[u32] {
        &self.modulus
    }
}

impl FiniteField for ExtensionField {
    fn order(&self) -> u32 {
        self.q
    }

    fn characteristic(&self) -> u32 {
        self.p
    }

    fn add(&self, a: u32, b: u32) -> u32 {
        self.add_table[(a * self.q + b) as usize]
    }

    fn mul(&self, a: u32, b: u32) -> u32 {
        self.mul_table[(a * self.q + b) as usize]
    }

    fn neg(&self, a: u32) -> u32 {
        let e = self.modulus.len() - 1;
        let d: Vec<u32> = digits(a, self.p, e)
            .into_iter()
            .map(|x| (self.p - x) % self.p)
            .collect();
        undigits(&d, self.p)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn field_axioms(f: &dyn FiniteField) {
        let q = f.order();
        for a in 0..q {
            assert_eq!(f.add(a, f.neg(a)), 0);
            assert_eq!(f.mul(a, 1), a);
            if a != 0 {
                assert_eq!(f.mul(a, f.inv(a).unwrap()), 1, "a={a}");
            }
            for b in 0..q {
                assert_eq!(f.add(a, b), f.add(b, a));
                assert_eq!(f.mul(a, b), f.mul(b, a));
                for c in [0, 1, q - 1, q / 2] {
                    assert_eq!(f.mul(a, f.add(b, c)), f.add(f.mul(a, b), f.mul(a, c)));
                }
            }
        }
        assert_eq!(f.inv(0), None);
    }

    #[test]
    fn prime_fields() {
        let f = PrimeField::new(5).unwrap();
        field_axioms(&f);
        assert!(f.has_sqrt_minus_one());
        assert!(!PrimeField::new(7).unwrap().has_sqrt_minus_one());
        assert!(PrimeField::new(13).unwrap().has_sqrt_minus_one());
        assert!(PrimeField::new(9).is_err());
        assert!(PrimeField::new(2).is_err());
    }

    #[test]
    fn f9_and_f27() {
        let f = ExtensionField::new(3, 2).unwrap();
        assert_eq!(f.order(), 9);
        assert_eq!(f.modulus(), &[1, 0, 1]);
        field_axioms(&f);
        assert!(f.has_sqrt_minus_one());
        let g = ExtensionField::new(3, 3).unwrap();
        field_axioms(&g);
        assert!(!g.has_sqrt_minus_one());
        // the multiplicative group of 𝔽₉ is cyclic of order 8
        let orders: Vec<u64> = (1..9)
            .map(|a| (1..=8u64).find(|&e| f.pow(a, e) == 1).unwrap())
            .collect();
        assert!(orders.contains(&8));
        assert!(ExtensionField::new(5, 5).is_err());
    }

    #[test]
    fn dots_agree() {
        let f = PrimeField::new(13).unwrap();
        let g = ExtensionField::new(13, 1).unwrap();
        let a = [12, 5, 0, 7, 11];
        let b = [3, 12, 9, 1, 12];
        assert_eq!(f.dot(&a, &b), g.dot(&a, &b));
        assert_eq!(f.dot(&a, &b), (12 * 3 + 5 * 12 + 7 + 11 * 12) % 13);
    }

    #[test]
    fn determinants() {
        let f = PrimeField::new(5).unwrap();
        let mut m = vec![1, 2, 3, 4];
        assert_eq!(f.det(&mut m, 2), f.sub(4, 6 % 5));
        let mut m = vec![2, 0, 0, 0, 3, 0, 0, 0, 4];
        assert_eq!(f.det(&mut m, 3), 4);
        let mut m = vec![1, 1, 1, 1];
        assert_eq!(f.det(&mut m, 2), 0);
        let mut m = vec![0, 1, 1, 0];
        assert_eq!(f.det(&mut m, 2), 4);
    }
}
