//! Gaussian binomials and the closed-form Poincaré and blow-up polynomials,
//! their Pascal-type recursions, and Euler characteristics.

use std::fmt;

use num_bigint::BigInt;
use num_traits::{One, ToPrimitive, Zero};
use serde::Serialize;

use crate::error::{Error, Result};
use crate::incidence::IncidenceGraph;
use crate::poly::Var;
use crate::schubert::Ambient;
use crate::IntPolynomial;

/// Parity pattern of (k,n). Three shapes behave like complex Grassmannians;
/// (2j+1, 2m) is the exceptional one.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
pub enum Shape {
    /// (2j, 2m)
    EvenEven { j: usize, m: usize },
    /// (2j, 2m+1)
    EvenOdd { j: usize, m: usize },
    /// (2j+1, 2m+1)
    OddOdd { j: usize, m: usize },
    /// (2j+1, 2m)
    OddEven { j: usize, m: usize },
}

impl Shape {
    pub fn of(k: usize, n: usize) -> Self {
        let (j, m) = (k / 2, n / 2);
        match (k % 2, n % 2) {
            (0, 0) => Shape::EvenEven { j, m },
            (0, _) => Shape::EvenOdd { j, m },
            (_, 1) => Shape::OddOdd { j, m },
            _ => Shape::OddEven { j, m },
        }
    }

    pub fn is_exceptional(self) -> bool {
        matches!(self, Shape::OddEven { .. })
    }

    pub fn jm(self) -> (usize, usize) {
        match self {
            Shape::EvenEven { j, m } | Shape::EvenOdd { j, m } | Shape::OddOdd { j, m } | Shape::OddEven { j, m } => {
                (j, m)
            }
        }
    }
}

fn one_minus_power(var: Var, e: usize) -> IntPolynomial {
    &IntPolynomial::one(var) - &IntPolynomial::power(var, e)
}

/// [m j]_x with x = var^step, computed as Π (1−x^{m−j+i}) / Π (1−x^i) by exact division.
pub fn qbinom_in(var: Var, m: usize, j: usize, step: usize) -> Result<IntPolynomial> {
    if j > m {
        return Err(Error::Argument(format!("q-binomial needs j <= m, got m={m}, j={j}")));
    }
    if step == 0 {
        return Err(Error::Argument("q-binomial step must be positive".into()));
    }
    let j = j.min(m - j);
    let mut num = IntPolynomial::one(var);
    let mut den = IntPolynomial::one(var);
    for i in 1..=j {
        num = &num * &one_minus_power(var, (m - j + i) * step);
        den = &den * &one_minus_power(var, i * step);
    }
    num.div_exact(&den)
}

/// [m j]_{q^step}.
pub fn qbinom(m: usize, j: usize, step: usize) -> Result<IntPolynomial> {
    qbinom_in(Var::Q, m, j, step)
}

/// Like [`qbinom_in`] but zero outside 0 ≤ j ≤ m, which keeps the recursions uniform.
fn qb(var: Var, m: i64, j: i64, step: usize) -> IntPolynomial {
    if j < 0 || m < 0 || j > m {
        IntPolynomial::zero(var)
    } else {
        qbinom_in(var, m as usize, j as usize, step).expect("q-binomial divides exactly")
    }
}

fn t_pow(e: usize) -> IntPolynomial {
    IntPolynomial::power(Var::T, e)
}

/// Ambient check allowing k = 0, so the recursions can refer to a point.
fn check_pair(k: usize, n: usize) -> Result<()> {
    if k == 0 {
        return if n <= crate::schubert::MAX_N {
            Ok(())
        } else {
            Err(Error::Argument(format!("n={n} exceeds cap")))
        };
    }
    Ambient::new(k, n).map(|_| ())
}

/// P_{(k,n)}(t), the rational Poincaré polynomial. Accepts k = 0.
pub fn poincare(k: usize, n: usize) -> Result<IntPolynomial> {
    check_pair(k, n)?;
    let (j, m) = Shape::of(k, n).jm();
    let (j, m) = (j as i64, m as i64);
    Ok(match Shape::of(k, n) {
        Shape::OddEven { .. } => {
            let factor = &IntPolynomial::one(Var::T) + &t_pow((2 * m - 1) as usize);
            &factor * &qb(Var::T, m - 1, j, 4)
        }
        _ => qb(Var::T, m, j, 4),
    })
}

/// P*_{(k,n)}(t), the Poincaré polynomial with orientation-twisted coefficients.
/// For (2j, 2m) this is t^{2j}[m−1 j]_{t⁴} + t^{2(m−j)}[m−1 j−1]_{t⁴}.
pub fn poincare_twisted(k: usize, n: usize) -> Result<IntPolynomial> {
    check_pair(k, n)?;
    let shape = Shape::of(k, n);
    let (ju, mu) = shape.jm();
    let (j, m) = (ju as i64, mu as i64);
    Ok(match shape {
        Shape::OddEven { .. } => IntPolynomial::zero(Var::T),
        Shape::EvenOdd { .. } => qb(Var::T, m, j, 4).shift(2 * ju),
        Shape::OddOdd { .. } => qb(Var::T, m, j, 4).shift(2 * (mu - ju)),
        Shape::EvenEven { .. } => {
            let a = qb(Var::T, m - 1, j, 4).shift(2 * ju);
            let b = qb(Var::T, m - 1, j - 1, 4).shift(2 * (mu - ju));
            &a + &b
        }
    })
}

/// p_{(k,n)}(q) = Σ_w (−1)^{ℓ(w)} q^{η(w)} in closed form.
pub fn p_poly(k: usize, n: usize) -> Result<IntPolynomial> {
    check_pair(k, n)?;
    let shape = Shape::of(k, n);
    let (j, m) = shape.jm();
    let (j, m) = (j as i64, m as i64);
    Ok(match shape {
        Shape::OddEven { .. } => &one_minus_power(Var::Q, m as usize) * &qb(Var::Q, m - 1, j, 2),
        _ => qb(Var::Q, m, j, 2),
    })
}

/// p*_{(k,n)}(q) for odd n. Even n has no closed form here; use
/// [`p_from_graph`] on the twisted graph instead.
pub fn p_star_poly(k: usize, n: usize) -> Result<IntPolynomial> {
    check_pair(k, n)?;
    let shape = Shape::of(k, n);
    let (ju, mu) = shape.jm();
    let (j, m) = (ju as i64, mu as i64);
    match shape {
        Shape::EvenOdd { .. } => Ok(qb(Var::Q, m, j, 2).shift(ju)),
        Shape::OddOdd { .. } => Ok(qb(Var::Q, m, j, 2).shift(mu - ju)),
        _ => Err(Error::Unsupported(format!(
            "no closed form for p* with even n (k={k}, n={n}); use the graph sum"
        ))),
    }
}

/// Σ_σ (−1)^{dim σ} q^{η(σ)} over the vertices of the graph.
pub fn p_from_graph(g: &IncidenceGraph) -> IntPolynomial {
    let top = g.eta().iter().copied().max().unwrap_or(0);
    let mut coeffs = vec![BigInt::zero(); top + 1];
    for (s, &h) in g.vertices().iter().zip(g.eta()) {
        if s.dimension() % 2 == 0 {
            coeffs[h] += 1;
        } else {
            coeffs[h] -= 1;
        }
    }
    IntPolynomial::new(Var::Q, coeffs)
}

fn binomial(m: usize, j: usize) -> BigInt {
    let mut acc = BigInt::one();
    for i in 0..j {
        acc = acc * BigInt::from(m - i) / BigInt::from(i + 1);
    }
    acc
}

/// χ(Gr(k,n)): C(m,j) for the regular shapes, 0 for (2j+1,2m). Cross-checked
/// against P_{(k,n)}(−1).
pub fn euler_char(k: usize, n: usize) -> Result<i64> {
    let shape = Shape::of(k, n);
    let (j, m) = shape.jm();
    let closed = if shape.is_exceptional() {
        BigInt::zero()
    } else {
        binomial(m, j)
    };
    let at_minus_one = poincare(k, n)?.eval(&BigInt::from(-1));
    if closed != at_minus_one {
        return Err(Error::Consistency(format!(
            "Euler characteristic of Gr({k},{n}): closed form {closed} != P(-1) = {at_minus_one}"
        )));
    }
    closed
        .to_i64()
        .ok_or_else(|| Error::Resource("Euler characteristic exceeds i64".into()))
}

/// Π_{j=1}^{⌊k/2⌋} 1/(1−t^{4j}) expanded up to t^degree.
pub fn bo_series_truncation(k: usize, degree: usize) -> Result<IntPolynomial> {
    if degree > 64 {
        return Err(Error::Argument(format!("truncation degree {degree} exceeds 64")));
    }
    let mut coeffs = vec![BigInt::zero(); degree + 1];
    coeffs[0] = BigInt::one();
    for j in 1..=k / 2 {
        let step = 4 * j;
        // multiply by 1/(1 − t^step): c_i += c_{i−step}, ascending
        for i in step..=degree {
            let prev = coeffs[i - step].clone();
            coeffs[i] += prev;
        }
    }
    Ok(IntPolynomial::new(Var::T, coeffs))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum Family {
    /// P
    Trivial,
    /// P*
    Twisted,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct RecursionCheck {
    pub identity: &'static str,
    pub j: usize,
    pub m: usize,
    pub passed: bool,
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
pub struct RecursionReport {
    pub checks: Vec<RecursionCheck>,
}

impl RecursionReport {
    pub fn failures(&self) -> Vec<&RecursionCheck> {
        self.checks.iter().filter(|c| !c.passed).collect()
    }

    pub fn all_passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }

    pub fn count(&self, identity: &str) -> usize {
        self.checks.iter().filter(|c| c.identity == identity).count()
    }
}

impl fmt::Display for RecursionReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for c in &self.checks {
            let verdict = if c.passed { "ok" } else { "FAIL" };
            writeln!(f, "({}) j={} m={}: {verdict}", c.identity, c.j, c.m)?;
        }
        Ok(())
    }
}

/// A term x^{exp} F_{(k,n)} with signed indices so that out-of-range
/// references can be detected and skipped.
struct Term {
    family: Family,
    k: i64,
    n: i64,
    exp: i64,
}

fn eval_term(t: &Term) -> Option<IntPolynomial> {
    if t.k < 0 || t.n < 0 || t.k > t.n || t.exp < 0 {
        return None;
    }
    let (k, n) = (t.k as usize, t.n as usize);
    let p = match t.family {
        Family::Trivial => poincare(k, n),
        Family::Twisted => poincare_twisted(k, n),
    }
    .ok()?;
    Some(p.shift(t.exp as usize))
}

fn identities(j: i64, m: i64) -> Vec<(&'static str, Term, Term, Term)> {
    use Family::{Trivial as P, Twisted as S};
    let t = |family, k, n, exp| Term { family, k, n, exp };
    vec![
        ("a", t(P, 2 * j, 2 * m + 1, 0), t(P, 2 * j, 2 * m, 0), t(S, 2 * j - 1, 2 * m, 2 * (m - j) + 1)),
        ("b", t(P, 2 * j + 1, 2 * m, 0), t(P, 2 * j + 1, 2 * m - 1, 0), t(S, 2 * j, 2 * m - 1, 2 * (m - j) - 1)),
        ("c", t(P, 2 * j, 2 * m, 0), t(P, 2 * j, 2 * m - 2, 0), t(P, 2 * j - 2, 2 * m - 2, 4 * (m - j))),
        ("d", t(P, 2 * j + 1, 2 * m + 1, 0), t(P, 2 * j + 1, 2 * m - 1, 0), t(P, 2 * j - 1, 2 * m - 1, 4 * (m - j))),
        ("a*", t(S, 2 * j, 2 * m + 1, 0), t(S, 2 * j, 2 * m - 1, 0), t(S, 2 * j - 2, 2 * m - 1, 4 * (m - j) + 2)),
        ("b*", t(S, 2 * j + 1, 2 * m, 0), t(S, 2 * j + 1, 2 * m - 2, 0), t(S, 2 * j - 1, 2 * m - 2, 4 * (m - j) - 2)),
        ("c*", t(S, 2 * j, 2 * m, 0), t(S, 2 * j, 2 * m - 1, 0), t(P, 2 * j - 1, 2 * m - 1, 2 * (m - j))),
        ("d*", t(S, 2 * j + 1, 2 * m + 1, 0), t(S, 2 * j + 1, 2 * m, 0), t(P, 2 * j, 2 * m, 2 * (m - j))),
    ]
}

/// Verify the eight Pascal-type identities F = F' + t^e F'' for every
/// 0 ≤ j ≤ m ≤ max_m at which all three terms are defined.
pub fn check_recursions(max_m: usize) -> Result<RecursionReport> {
    if max_m > 8 {
        return Err(Error::Argument(format!("max_m={max_m} exceeds 8")));
    }
    let mut report = RecursionReport::default();
    for m in 1..=max_m as i64 {
        for j in 0..=m {
            for (name, lhs, a, b) in identities(j, m) {
                let (Some(l), Some(x), Some(y)) = (eval_term(&lhs), eval_term(&a), eval_term(&b)) else {
                    continue;
                };
                report.checks.push(RecursionCheck {
                    identity: name,
                    j: j as usize,
                    m: m as usize,
                    passed: l == &x + &y,
                });
            }
        }
    }
    Ok(report)
}
