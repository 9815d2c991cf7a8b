//! Dense univariate polynomials over a ring, tagged with their variable name.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::str::FromStr;

use num_traits::{FromPrimitive, ToPrimitive};
use serde::de::Error as _;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};
use crate::scalar::Ring;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Var {
    Q,
    T,
}

impl fmt::Display for Var {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Var::Q => "q",
            Var::T => "t",
        })
    }
}

/// Σ c_i x^i with no trailing zero coefficient.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Poly<T> {
    var: Var,
    coeffs: Vec<T>,
}

impl<T: Ring> Poly<T> {
    pub fn new(var: Var, mut coeffs: Vec<T>) -> Self {
        while coeffs.last().is_some_and(|c| c.is_zero()) {
            coeffs.pop();
        }
        Self { var, coeffs }
    }

    pub fn zero(var: Var) -> Self {
        Self { var, coeffs: Vec::new() }
    }

    pub fn one(var: Var) -> Self {
        Self::constant(var, T::one())
    }

    pub fn constant(var: Var, c: T) -> Self {
        Self::new(var, vec![c])
    }

    /// c·x^e.
    pub fn monomial(var: Var, c: T, e: usize) -> Self {
        let mut coeffs = vec![T::zero(); e + 1];
        coeffs[e] = c;
        Self::new(var, coeffs)
    }

    /// x^e.
    pub fn power(var: Var, e: usize) -> Self {
        Self::monomial(var, T::one(), e)
    }

    pub fn from_ints(var: Var, coeffs: &[i64]) -> Self
    where
        T: FromPrimitive,
    {
        Self::new(var, coeffs.iter().map(|&c| T::from_i64(c).expect("coefficient fits")).collect())
    }

    pub fn var(&self) -> Var {
        self.var
    }

    pub fn coeffs(&self) -> &[T] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    /// Smallest exponent with a nonzero coefficient.
    pub fn low_degree(&self) -> Option<usize> {
        self.coeffs.iter().position(|c| !c.is_zero())
    }

    pub fn coeff(&self, e: usize) -> T {
        self.coeffs.get(e).cloned().unwrap_or_else(T::zero)
    }

    pub fn with_var(mut self, var: Var) -> Self {
        self.var = var;
        self
    }

    /// Multiply by x^e.
    pub fn shift(&self, e: usize) -> Self {
        if self.is_zero() {
            return self.clone();
        }
        let mut coeffs = vec![T::zero(); e];
        coeffs.extend(self.coeffs.iter().cloned());
        Self { var: self.var, coeffs }
    }

    /// Substitute x ↦ x^step.
    pub fn substitute_power(&self, step: usize) -> Self {
        assert!(step >= 1, "substitution step must be positive");
        if self.is_zero() {
            return self.clone();
        }
        let mut coeffs = vec![T::zero(); (self.coeffs.len() - 1) * step + 1];
        for (i, c) in self.coeffs.iter().enumerate() {
            coeffs[i * step] = c.clone();
        }
        Self { var: self.var, coeffs }
    }

    pub fn scale(&self, c: &T) -> Self {
        Self::new(self.var, self.coeffs.iter().map(|x| x.clone() * c.clone()).collect())
    }

    /// Horner evaluation.
    pub fn eval(&self, x: &T) -> T {
        self.coeffs
            .iter()
            .rev()
            .fold(T::zero(), |acc, c| acc * x.clone() + c.clone())
    }

    /// Quotient of an exact division. Fails if the remainder is nonzero or a
    /// leading coefficient does not divide.
    pub fn div_exact(&self, divisor: &Self) -> Result<Self> {
        let Some(dd) = divisor.degree() else {
            return Err(Error::Consistency("division by the zero polynomial".into()));
        };
        let lead = divisor.coeffs[dd].clone();
        let mut rem = self.coeffs.clone();
        let Some(nd) = self.degree() else {
            return Ok(Self::zero(self.var));
        };
        if nd < dd {
            return Err(Error::Consistency(format!("{self:?} is not divisible by {divisor:?}")));
        }
        let mut quot = vec![T::zero(); nd - dd + 1];
        for i in (0..=nd - dd).rev() {
            let top = rem[i + dd].clone();
            if top.is_zero() {
                continue;
            }
            let c = top.clone() / lead.clone();
            if c.clone() * lead.clone() != top {
                return Err(Error::Consistency("leading coefficient does not divide".into()));
            }
            for (j, d) in divisor.coeffs.iter().enumerate() {
                rem[i + j] = rem[i + j].clone() - c.clone() * d.clone();
            }
            quot[i] = c;
        }
        if rem.iter().any(|c| !c.is_zero()) {
            return Err(Error::Consistency("nonzero remainder in exact division".into()));
        }
        Ok(Self::new(self.var, quot))
    }

    fn check_var(&self, other: &Self) -> Var {
        match (self.degree(), other.degree()) {
            (Some(a), Some(b)) if a > 0 && b > 0 => {
                assert_eq!(self.var, other.var, "mixing polynomials in {} and {}", self.var, other.var);
                self.var
            }
            (Some(a), _) if a > 0 => self.var,
            (_, Some(b)) if b > 0 => other.var,
            _ => self.var,
        }
    }
}

impl<T: Ring> Add for &Poly<T> {
    type Output = Poly<T>;

    fn add(self, rhs: &Poly<T>) -> Poly<T> {
        let var = self.check_var(rhs);
        let len = self.coeffs.len().max(rhs.coeffs.len());
        Poly::new(var, (0..len).map(|i| self.coeff(i) + rhs.coeff(i)).collect())
    }
}

impl<T: Ring> Sub for &Poly<T> {
    type Output = Poly<T>;

    fn sub(self, rhs: &Poly<T>) -> Poly<T> {
        let var = self.check_var(rhs);
        let len = self.coeffs.len().max(rhs.coeffs.len());
        Poly::new(var, (0..len).map(|i| self.coeff(i) - rhs.coeff(i)).collect())
    }
}

impl<T: Ring> Mul for &Poly<T> {
    type Output = Poly<T>;

    fn mul(self, rhs: &Poly<T>) -> Poly<T> {
        let var = self.check_var(rhs);
        if self.is_zero() || rhs.is_zero() {
            return Poly::zero(var);
        }
        let mut out = vec![T::zero(); self.coeffs.len() + rhs.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in rhs.coeffs.iter().enumerate() {
                out[i + j] = out[i + j].clone() + a.clone() * b.clone();
            }
        }
        Poly::new(var, out)
    }
}

impl<T: Ring> Neg for &Poly<T> {
    type Output = Poly<T>;

    fn neg(self) -> Poly<T> {
        Poly::new(self.var, self.coeffs.iter().map(|c| -c.clone()).collect())
    }
}

macro_rules! by_value {
    ($tr:ident, $m:ident) => {
        impl<T: Ring> $tr for Poly<T> {
            type Output = Poly<T>;

            fn $m(self, rhs: Poly<T>) -> Poly<T> {
                (&self).$m(&rhs)
            }
        }
    };
}

by_value!(Add, add);
by_value!(Sub, sub);
by_value!(Mul, mul);

impl<T: Ring> Neg for Poly<T> {
    type Output = Poly<T>;

    fn neg(self) -> Poly<T> {
        -&self
    }
}

impl<T: Ring> std::iter::Sum for Poly<T> {
    /// Sum of an empty iterator is the zero polynomial in `q`.
    fn sum<I: Iterator<Item = Poly<T>>>(iter: I) -> Self {
        let mut iter = iter.peekable();
        let var = iter.peek().map_or(Var::Q, |p| p.var);
        iter.fold(Poly::zero(var), |a, b| &a + &b)
    }
}

/// Renders "1 + 2q^4 - q^6", ascending exponents, "0" for the zero polynomial.
impl<T: Ring + fmt::Display + PartialOrd> fmt::Display for Poly<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for (e, c) in self.coeffs.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            let negative = *c < T::zero();
            let mag = if negative { -c.clone() } else { c.clone() };
            match (first, negative) {
                (true, true) => f.write_str("-")?,
                (true, false) => {}
                (false, true) => f.write_str(" - ")?,
                (false, false) => f.write_str(" + ")?,
            }
            first = false;
            let unit = mag.is_one();
            match e {
                0 => write!(f, "{mag}")?,
                _ => {
                    if !unit {
                        write!(f, "{mag}")?;
                    }
                    write!(f, "{}", self.var)?;
                    if e > 1 {
                        write!(f, "^{e}")?;
                    }
                }
            }
        }
        if first {
            f.write_str("0")?;
        }
        Ok(())
    }
}

/// A coefficient on the wire: a JSON integer when it fits in i64, otherwise a
/// decimal string.
#[derive(Serialize, Deserialize)]
#[serde(untagged)]
enum WireCoeff {
    Int(i64),
    Big(String),
}

#[derive(Serialize, Deserialize)]
struct WirePoly {
    var: Var,
    coeffs: Vec<WireCoeff>,
}

impl<T: Ring + ToPrimitive + fmt::Display> Serialize for Poly<T> {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        WirePoly {
            var: self.var,
            coeffs: self
                .coeffs
                .iter()
                .map(|c| c.to_i64().map_or_else(|| WireCoeff::Big(c.to_string()), WireCoeff::Int))
                .collect(),
        }
        .serialize(s)
    }
}

impl<'de, T: Ring + FromPrimitive + FromStr> Deserialize<'de> for Poly<T> {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let w = WirePoly::deserialize(d)?;
        let coeffs = w
            .coeffs
            .into_iter()
            .map(|c| match c {
                WireCoeff::Int(v) => T::from_i64(v).ok_or_else(|| D::Error::custom("coefficient out of range")),
                WireCoeff::Big(s) => s.parse().map_err(|_| D::Error::custom(format!("bad coefficient {s:?}"))),
            })
            .collect::<std::result::Result<Vec<T>, D::Error>>()?;
        Ok(Poly::new(w.var, coeffs))
    }
}
