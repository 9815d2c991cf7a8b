//! Schubert cells of Gr(k,n), their minimal coset representatives in
//! S_n^(k), the weak Bruhat graph, and the column decomposition by last entry.

use std::cmp::Ordering;
use std::fmt;

use arrayvec::ArrayVec;
use serde::{Serialize, Serializer};

use crate::error::{Error, Result};

/// Default cap on the ambient dimension. C(16,8) = 12870 cells.
pub const MAX_N: usize = 16;

/// Hard storage limit for symbol entries. Caps above [`MAX_N`] are accepted by
/// [`Ambient::with_cap`] but coboundary matrices grow like C(n, n/2).
pub const STORAGE_N: usize = 32;

/// A validated pair (k, n) with 1 ≤ k ≤ n ≤ cap.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct Ambient {
    k: usize,
    n: usize,
}

impl Ambient {
    pub fn new(k: usize, n: usize) -> Result<Self> {
        Self::with_cap(k, n, MAX_N)
    }

    pub fn with_cap(k: usize, n: usize, cap: usize) -> Result<Self> {
        if cap > STORAGE_N {
            return Err(Error::Argument(format!("cap {cap} exceeds storage limit {STORAGE_N}")));
        }
        if cap > MAX_N && n > MAX_N {
            log::warn!("Gr({k},{n}) exceeds the default cap {MAX_N}; memory grows like C(n, n/2)^2");
        }
        if k == 0 || k > n || n > cap {
            return Err(Error::Argument(format!("need 1 <= k <= n <= {cap}, got k={k}, n={n}")));
        }
        Ok(Self { k, n })
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn n(&self) -> usize {
        self.n
    }

    /// Dimension of Gr(k,n), k(n-k).
    pub fn top_dimension(&self) -> usize {
        self.k * (self.n - self.k)
    }

    /// The top cell (1,…,k).
    pub fn base_symbol(&self) -> SchubertSymbol {
        SchubertSymbol {
            n: self.n as u8,
            entries: (1..=self.k as u8).collect(),
        }
    }
}

/// A Schubert cell (σ₁ < … < σ_k) of Gr(k,n).
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct SchubertSymbol {
    n: u8,
    entries: ArrayVec<u8, STORAGE_N>,
}

impl SchubertSymbol {
    pub fn new(entries: &[usize], n: usize) -> Result<Self> {
        let k = entries.len();
        Ambient::with_cap(k, n, STORAGE_N)?;
        let increasing = entries.windows(2).all(|w| w[0] < w[1]);
        if !increasing || entries[0] < 1 || entries[k - 1] > n {
            return Err(Error::Argument(format!(
                "{entries:?} is not a strictly increasing {k}-tuple in [1,{n}]"
            )));
        }
        Ok(Self {
            n: n as u8,
            entries: entries.iter().map(|&e| e as u8).collect(),
        })
    }

    pub fn entries(&self) -> &[u8] {
        &self.entries
    }

    pub fn k(&self) -> usize {
        self.entries.len()
    }

    pub fn n(&self) -> usize {
        self.n as usize
    }

    pub fn ambient(&self) -> Ambient {
        Ambient {
            k: self.k(),
            n: self.n(),
        }
    }

    /// Σ_j (σ_j − j).
    pub fn dimension(&self) -> usize {
        self.entries
            .iter()
            .enumerate()
            .map(|(j, &s)| s as usize - (j + 1))
            .sum()
    }

    pub fn last(&self) -> usize {
        *self.entries.last().expect("k >= 1") as usize
    }

    pub fn contains(&self, i: usize) -> bool {
        self.entries.iter().any(|&e| e as usize == i)
    }

    /// Apply s_i in the length-increasing direction: replaces entry i by i+1.
    /// Returns `None` when s_i does not raise the length of this cell.
    pub fn raise(&self, i: usize) -> Option<SchubertSymbol> {
        if i == 0 || i >= self.n() || !self.contains(i) || self.contains(i + 1) {
            return None;
        }
        let mut out = self.clone();
        for e in out.entries.iter_mut() {
            if *e as usize == i {
                *e += 1;
            }
        }
        Some(out)
    }

    /// All cells reachable by one admissible increment, with the reflection index.
    pub fn successors(&self) -> impl Iterator<Item = (usize, SchubertSymbol)> + '_ {
        self.entries
            .iter()
            .filter_map(move |&e| self.raise(e as usize).map(|s| (e as usize, s)))
    }

    /// Dash-joined entries, used as a compact key in CSV output.
    pub fn dashed(&self) -> String {
        self.entries
            .iter()
            .map(|e| e.to_string())
            .collect::<Vec<_>>()
            .join("-")
    }

    /// Drop the last entry; the result lives in Gr(k-1, σ_k - 1).
    pub fn prefix(&self) -> Option<SchubertSymbol> {
        if self.k() < 2 {
            return None;
        }
        Some(SchubertSymbol {
            n: (self.last() - 1) as u8,
            entries: self.entries[..self.k() - 1].iter().copied().collect(),
        })
    }
}

impl Ord for SchubertSymbol {
    fn cmp(&self, other: &Self) -> Ordering {
        self.dimension()
            .cmp(&other.dimension())
            .then_with(|| self.entries.cmp(&other.entries))
            .then_with(|| self.n.cmp(&other.n))
    }
}

impl PartialOrd for SchubertSymbol {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for SchubertSymbol {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (i, e) in self.entries.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{e}")?;
        }
        write!(f, ")")
    }
}

/// Serialized as the plain entry list, e.g. `[1,3]`.
impl Serialize for SchubertSymbol {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.collect_seq(self.entries.iter())
    }
}

impl fmt::Debug for SchubertSymbol {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

/// A word s_{a₁} s_{a₂} ⋯ s_{a_m}, acting right-to-left.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct WeylWord {
    pub letters: Vec<u8>,
    pub reduced: bool,
}

impl WeylWord {
    pub fn identity() -> Self {
        Self {
            letters: Vec::new(),
            reduced: true,
        }
    }

    pub fn from_letters(letters: &[u8]) -> Self {
        Self {
            letters: letters.to_vec(),
            reduced: false,
        }
    }

    pub fn len(&self) -> usize {
        self.letters.len()
    }

    pub fn is_empty(&self) -> bool {
        self.letters.is_empty()
    }
}

impl fmt::Display for WeylWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.letters.is_empty() {
            return write!(f, "e");
        }
        for l in &self.letters {
            write!(f, "s{l}")?;
        }
        Ok(())
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct BruhatEdge {
    pub from: SchubertSymbol,
    pub to: SchubertSymbol,
    pub reflection: usize,
}

/// One column of the decomposition: all cells whose last entry is `last`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Piece {
    pub last: usize,
    /// s_{last-1} ⋯ s_k, empty when last = k.
    pub suffix: WeylWord,
    pub members: Vec<SchubertSymbol>,
}

fn combinations(k: usize, n: usize) -> Vec<Vec<usize>> {
    fn go(start: usize, n: usize, left: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if left == 0 {
            out.push(cur.clone());
            return;
        }
        for v in start..=(n + 1 - left) {
            cur.push(v);
            go(v + 1, n, left - 1, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    go(1, n, k, &mut Vec::with_capacity(k), &mut out);
    out
}

/// All C(n,k) cells of Gr(k,n), sorted by (dimension, lex).
pub fn enum_symbols(k: usize, n: usize) -> Result<Vec<SchubertSymbol>> {
    let amb = Ambient::new(k, n)?;
    Ok(enum_symbols_in(amb))
}

pub fn enum_symbols_in(amb: Ambient) -> Vec<SchubertSymbol> {
    let mut out: Vec<SchubertSymbol> = combinations(amb.k, amb.n)
        .into_iter()
        .map(|c| SchubertSymbol {
            n: amb.n as u8,
            entries: c.into_iter().map(|e| e as u8).collect(),
        })
        .collect();
    out.sort();
    out
}

/// Reduced word of the minimal coset representative, built column by column:
/// w(σ) = w(σ₁,…,σ_{k-1}) · s_{σ_k - 1} ⋯ s_k.
pub fn symbol_to_word(sigma: &SchubertSymbol) -> WeylWord {
    let k = sigma.k();
    let mut letters = Vec::with_capacity(sigma.dimension());
    let mut cur = Some(sigma.clone());
    let mut level = k;
    // collect suffixes from the last column inward, then reverse the blocks
    let mut blocks: Vec<Vec<u8>> = Vec::with_capacity(k);
    while let Some(s) = cur {
        let last = s.last();
        blocks.push((level..last).rev().map(|i| i as u8).collect());
        cur = s.prefix();
        level -= 1;
    }
    for b in blocks.into_iter().rev() {
        letters.extend(b);
    }
    WeylWord {
        letters,
        reduced: true,
    }
}

/// Apply the letters right-to-left to (1,…,k). Every letter must raise the length.
pub fn word_to_symbol(word: &WeylWord, k: usize, n: usize) -> Result<SchubertSymbol> {
    let amb = Ambient::with_cap(k, n, STORAGE_N)?;
    let mut cur = amb.base_symbol();
    for &l in word.letters.iter().rev() {
        cur = cur.raise(l as usize).ok_or_else(|| Error::InvalidWord {
            word: word.to_string(),
            k,
            n,
        })?;
    }
    Ok(cur)
}

/// Edges of the weak Bruhat graph 𝒢_n^(k), ordered by source cell then reflection.
pub fn bruhat_graph(k: usize, n: usize) -> Result<Vec<BruhatEdge>> {
    Ok(bruhat_edges(&enum_symbols(k, n)?))
}

pub(crate) fn bruhat_edges(symbols: &[SchubertSymbol]) -> Vec<BruhatEdge> {
    let mut edges = Vec::new();
    for s in symbols {
        for (i, t) in s.successors() {
            edges.push(BruhatEdge {
                from: s.clone(),
                to: t,
                reflection: i,
            });
        }
    }
    edges
}

/// ν_j = σ_{k−j+1} − (k−j+1), trailing zeros dropped.
pub fn young_diagram(sigma: &SchubertSymbol) -> Vec<usize> {
    let k = sigma.k();
    (1..=k)
        .map(|j| sigma.entries()[k - j] as usize - (k - j + 1))
        .filter(|&v| v > 0)
        .collect()
}

/// Partition of S_n^(k) by last entry j = k, …, n. Piece j is a copy of
/// S_{j-1}^(k-1) followed by s_{j-1} ⋯ s_k.
pub fn decompose(k: usize, n: usize) -> Result<Vec<Piece>> {
    let symbols = enum_symbols(k, n)?;
    Ok((k..=n)
        .map(|j| Piece {
            last: j,
            suffix: WeylWord {
                letters: (k..j).rev().map(|i| i as u8).collect(),
                reduced: true,
            },
            members: symbols.iter().filter(|s| s.last() == j).cloned().collect(),
        })
        .collect())
}
