//! KP sign vectors ε, the cell signs they induce, Toda signs ε̃ = (ε_j ε_{j+1}),
//! and the Weyl-group propagation of Toda signs along the weak Bruhat graph.

use std::collections::HashMap;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::schubert::{bruhat_edges, enum_symbols_in, Ambient, BruhatEdge, SchubertSymbol};

/// Which diagonal action h(±) fixes the signs.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Parity {
    /// h(−) = diag(+,−,−,+,+,−,…), used for odd k.
    Odd,
    /// h(+) = diag(+,+,−,−,+,+,…), used for even k.
    Even,
}

impl Parity {
    pub fn of(k: usize) -> Self {
        if k % 2 == 1 {
            Parity::Odd
        } else {
            Parity::Even
        }
    }

    pub fn flip(self) -> Self {
        match self {
            Parity::Odd => Parity::Even,
            Parity::Even => Parity::Odd,
        }
    }

    /// ε_j for 1-based j.
    pub fn sign_at(self, j: usize) -> i8 {
        let e = match self {
            Parity::Odd => j / 2,
            Parity::Even => (j - 1) / 2,
        };
        if e % 2 == 0 {
            1
        } else {
            -1
        }
    }
}

/// Constant (trivial) or orientation-twisted coefficients.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Coefficients {
    Trivial,
    Twisted,
}

impl Coefficients {
    /// The h-parity whose eigenvalues tag the edges for Gr(k,n) with these coefficients.
    pub fn parity(self, k: usize) -> Parity {
        match self {
            Coefficients::Trivial => Parity::of(k),
            Coefficients::Twisted => Parity::of(k).flip(),
        }
    }
}

impl fmt::Display for Coefficients {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Coefficients::Trivial => "trivial",
            Coefficients::Twisted => "twisted",
        })
    }
}

fn fmt_signs(signs: &[i8], f: &mut fmt::Formatter<'_>) -> fmt::Result {
    write!(f, "(")?;
    for (i, s) in signs.iter().enumerate() {
        if i > 0 {
            write!(f, ",")?;
        }
        f.write_str(if *s > 0 { "+" } else { "-" })?;
    }
    write!(f, ")")
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct KpSignVector {
    signs: Vec<i8>,
    parity: Parity,
}

impl KpSignVector {
    pub fn with_parity(parity: Parity, n: usize) -> Self {
        Self {
            signs: (1..=n).map(|j| parity.sign_at(j)).collect(),
            parity,
        }
    }

    pub fn signs(&self) -> &[i8] {
        &self.signs
    }

    pub fn parity(&self) -> Parity {
        self.parity
    }

    pub fn len(&self) -> usize {
        self.signs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.signs.is_empty()
    }
}

impl fmt::Display for KpSignVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt_signs(&self.signs, f)
    }
}

/// The sign vector forced on Gr(k,n): ε₁ = + and ε_j ε_{j+1} = (−1)^{k+j+1}.
pub fn kp_sign_vector(k: usize, n: usize) -> Result<KpSignVector> {
    Ambient::new(k, n)?;
    Ok(KpSignVector::with_parity(Parity::of(k), n))
}

/// Π_j ε_{σ_j}, the h-eigenvalue on E_{σ₁}∧…∧E_{σ_k}.
pub fn cell_sign(sigma: &SchubertSymbol, eps: &KpSignVector) -> i8 {
    assert_eq!(sigma.n(), eps.len(), "symbol and sign vector live in different ambients");
    sigma
        .entries()
        .iter()
        .map(|&j| eps.signs[j as usize - 1])
        .product()
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct TodaSignVector {
    signs: Vec<i8>,
}

impl TodaSignVector {
    pub fn new(signs: Vec<i8>) -> Result<Self> {
        if signs.iter().any(|s| *s != 1 && *s != -1) {
            return Err(Error::Argument(format!("Toda signs must be +-1, got {signs:?}")));
        }
        Ok(Self { signs })
    }

    /// Sign vector attached to the top cell: all (−), or (−,…,+,…,−) with + at
    /// position k for twisted coefficients.
    pub fn initial(k: usize, n: usize, coefficients: Coefficients) -> Self {
        let mut signs = vec![-1i8; n.saturating_sub(1)];
        if coefficients == Coefficients::Twisted && k < n {
            signs[k - 1] = 1;
        }
        Self { signs }
    }

    pub fn signs(&self) -> &[i8] {
        &self.signs
    }

    /// ε̃_i, 1-based.
    pub fn at(&self, i: usize) -> i8 {
        self.signs[i - 1]
    }
}

impl fmt::Display for TodaSignVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt_signs(&self.signs, f)
    }
}

pub fn toda_from_kp(eps: &KpSignVector) -> TodaSignVector {
    TodaSignVector {
        signs: eps.signs.windows(2).map(|w| w[0] * w[1]).collect(),
    }
}

/// Action of s_i on Toda signs: ε̃'_j = ε̃_j ε̃_i^{C_ij} with the type-A Cartan
/// matrix, so only the two neighbours of i pick up a factor ε̃_i.
pub fn weyl_propagate(toda: &TodaSignVector, i: usize) -> Result<TodaSignVector> {
    let len = toda.signs.len();
    if i == 0 || i > len {
        return Err(Error::Argument(format!("reflection s_{i} outside [1,{len}]")));
    }
    let f = toda.signs[i - 1];
    let mut out = toda.clone();
    if i >= 2 {
        out.signs[i - 2] *= f;
    }
    if i < len {
        out.signs[i] *= f;
    }
    Ok(out)
}

/// Toda sign vector at every cell, propagated from the top cell along the weak
/// Bruhat graph. Different paths must agree.
pub fn toda_signs_by_cell(
    k: usize,
    n: usize,
    coefficients: Coefficients,
) -> Result<HashMap<SchubertSymbol, TodaSignVector>> {
    let amb = Ambient::new(k, n)?;
    let symbols = enum_symbols_in(amb);
    let mut at: HashMap<SchubertSymbol, TodaSignVector> = HashMap::with_capacity(symbols.len());
    at.insert(amb.base_symbol(), TodaSignVector::initial(k, n, coefficients));
    // symbols are sorted by dimension, so every source is settled before use
    for s in &symbols {
        let here = at
            .get(s)
            .cloned()
            .ok_or_else(|| Error::Consistency(format!("cell {s} unreachable from the top cell")))?;
        for (i, t) in s.successors() {
            let next = weyl_propagate(&here, i)?;
            match at.get(&t) {
                Some(prev) if *prev != next => {
                    return Err(Error::Consistency(format!(
                        "Toda signs at {t} depend on the path: {prev} vs {next}"
                    )))
                }
                Some(_) => {}
                None => {
                    at.insert(t, next);
                }
            }
        }
    }
    Ok(at)
}

/// Double edges of 𝒢(k,n) (or 𝒢(k,n)*) predicted by Toda signs: w → s_i w is
/// double iff ε̃_i(w) = +.
pub fn toda_edge_graph(k: usize, n: usize, coefficients: Coefficients) -> Result<Vec<BruhatEdge>> {
    let at = toda_signs_by_cell(k, n, coefficients)?;
    let symbols = enum_symbols_in(Ambient::new(k, n)?);
    Ok(bruhat_edges(&symbols)
        .into_iter()
        .filter(|e| at[&e.from].at(e.reflection) == 1)
        .collect())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn v(s: &[i8]) -> TodaSignVector {
        TodaSignVector::new(s.to_vec()).unwrap()
    }

    fn sym(e: &[usize], n: usize) -> SchubertSymbol {
        SchubertSymbol::new(e, n).unwrap()
    }

    #[test]
    fn kp_vectors() {
        assert_eq!(kp_sign_vector(1, 4).unwrap().signs(), &[1, -1, -1, 1]);
        assert_eq!(kp_sign_vector(2, 4).unwrap().signs(), &[1, 1, -1, -1]);
        assert_eq!(kp_sign_vector(3, 6).unwrap().signs(), &[1, -1, -1, 1, 1, -1]);
        assert_eq!(kp_sign_vector(3, 6).unwrap().to_string(), "(+,-,-,+,+,-)");
    }

    #[test]
    fn kp_vectors_satisfy_adjacent_rule() {
        for n in 1..=12 {
            for k in 1..=n {
                let e = kp_sign_vector(k, n).unwrap();
                assert_eq!(e.signs()[0], 1);
                for j in 1..n {
                    let want = if (k + j + 1) % 2 == 0 { 1 } else { -1 };
                    assert_eq!(e.signs()[j - 1] * e.signs()[j], want, "k={k} n={n} j={j}");
                }
            }
        }
    }

    #[test]
    fn cell_signs() {
        let e = kp_sign_vector(2, 4).unwrap();
        assert_eq!(cell_sign(&sym(&[1, 2], 4), &e), 1);
        assert_eq!(cell_sign(&sym(&[1, 3], 4), &e), -1);
        let e = kp_sign_vector(1, 4).unwrap();
        assert_eq!(cell_sign(&sym(&[1, 4], 4), &KpSignVector::with_parity(Parity::Odd, 4)), 1);
        assert_eq!(cell_sign(&sym(&[4], 4), &e), 1);
    }

    #[test]
    fn toda_from_kp_examples() {
        let t = toda_from_kp(&kp_sign_vector(1, 4).unwrap());
        assert_eq!(t.signs(), &[-1, 1, -1]);
        let t = toda_from_kp(&kp_sign_vector(2, 4).unwrap());
        assert_eq!(t.signs(), &[1, -1, 1]);
        let t = toda_from_kp(&kp_sign_vector(3, 4).unwrap());
        assert_eq!(t.signs(), &[-1, 1, -1]);
    }

    #[test]
    fn propagation_examples() {
        assert_eq!(weyl_propagate(&v(&[-1, -1, -1]), 2).unwrap(), v(&[1, -1, 1]));
        assert_eq!(weyl_propagate(&v(&[1, -1, 1]), 3).unwrap(), v(&[1, -1, 1]));
        for a in [1i8, -1] {
            for b in [1i8, -1] {
                assert_eq!(weyl_propagate(&v(&[a, b]), 1).unwrap(), v(&[a, a * b]));
            }
        }
        assert!(weyl_propagate(&v(&[1, 1]), 3).is_err());
        assert!(weyl_propagate(&v(&[1, 1]), 0).is_err());
    }

    #[test]
    fn propagation_is_an_involution() {
        // ε̃_i is itself unchanged by s_i, so applying s_i twice multiplies the
        // neighbours by ε̃_i² = 1.
        for bits in 0u32..(1 << 5) {
            let s: Vec<i8> = (0..5).map(|b| if bits >> b & 1 == 1 { 1 } else { -1 }).collect();
            let t = v(&s);
            for i in 1..=5 {
                let once = weyl_propagate(&t, i).unwrap();
                assert_eq!(once.at(i), t.at(i));
                assert_eq!(weyl_propagate(&once, i).unwrap(), t);
                assert_eq!(once == t, t.at(i) == 1);
            }
        }
    }

    #[test]
    fn toda_graph_gr24() {
        let d = toda_edge_graph(2, 4, Coefficients::Trivial).unwrap();
        let pairs: Vec<(String, String)> =
            d.iter().map(|e| (e.from.to_string(), e.to.to_string())).collect();
        let want = [("(1,3)", "(2,3)"), ("(1,3)", "(1,4)"), ("(1,4)", "(2,4)"), ("(2,3)", "(2,4)")];
        assert_eq!(pairs.len(), 4);
        for (a, b) in want {
            assert!(pairs.contains(&(a.to_string(), b.to_string())), "{a}=>{b}");
        }
    }

    #[test]
    fn toda_graph_rp3_and_twisted_gr25() {
        let d = toda_edge_graph(1, 4, Coefficients::Trivial).unwrap();
        assert_eq!(d.len(), 1);
        assert_eq!(d[0].reflection, 2);

        // 𝒢(2,5)*: double edges are those whose cells agree under h(−)
        let d = toda_edge_graph(2, 5, Coefficients::Twisted).unwrap();
        let e = KpSignVector::with_parity(Parity::Odd, 5);
        let all = crate::schubert::bruhat_graph(2, 5).unwrap();
        let want: Vec<_> = all
            .into_iter()
            .filter(|x| cell_sign(&x.from, &e) == cell_sign(&x.to, &e))
            .collect();
        assert_eq!(d, want);
    }
}
