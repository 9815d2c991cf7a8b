//! Incidence graphs 𝒢(k,n) and 𝒢(k,n)*, blow-up weights η, and the integer
//! cochain complex with solved coboundary signs.

use std::collections::HashMap;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::matrix::Matrix;
use crate::schubert::{bruhat_edges, enum_symbols_in, Ambient, BruhatEdge, SchubertSymbol};
use crate::signs::{cell_sign, KpSignVector, Parity};

pub use crate::signs::Coefficients;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum EdgeKind {
    /// Incidence 0; the KP flow blows up across it.
    Single,
    /// Incidence ±2.
    Double,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct IncidenceEdge {
    pub from: usize,
    pub to: usize,
    pub reflection: usize,
    pub kind: EdgeKind,
}

#[derive(Clone, Debug)]
pub struct IncidenceGraph {
    ambient: Ambient,
    coefficients: Coefficients,
    signs: KpSignVector,
    vertices: Vec<SchubertSymbol>,
    index: HashMap<SchubertSymbol, usize>,
    edges: Vec<IncidenceEdge>,
    eta: Vec<usize>,
}

impl IncidenceGraph {
    pub fn ambient(&self) -> Ambient {
        self.ambient
    }

    pub fn coefficients(&self) -> Coefficients {
        self.coefficients
    }

    /// The KP sign vector whose cell signs tag the edges.
    pub fn signs(&self) -> &KpSignVector {
        &self.signs
    }

    /// Vertices in (dimension, lex) order.
    pub fn vertices(&self) -> &[SchubertSymbol] {
        &self.vertices
    }

    pub fn edges(&self) -> &[IncidenceEdge] {
        &self.edges
    }

    pub fn index_of(&self, sigma: &SchubertSymbol) -> Option<usize> {
        self.index.get(sigma).copied()
    }

    pub fn eta(&self) -> &[usize] {
        &self.eta
    }

    pub fn bruhat_edge(&self, e: &IncidenceEdge) -> BruhatEdge {
        BruhatEdge {
            from: self.vertices[e.from].clone(),
            to: self.vertices[e.to].clone(),
            reflection: e.reflection,
        }
    }

    pub fn double_edges(&self) -> impl Iterator<Item = &IncidenceEdge> {
        self.edges.iter().filter(|e| e.kind == EdgeKind::Double)
    }
}

/// Tag every weak Bruhat edge by h-eigenvalue agreement and compute η by a
/// sweep from the top cell.
pub fn build_graph(k: usize, n: usize, coefficients: Coefficients) -> Result<IncidenceGraph> {
    let ambient = Ambient::new(k, n)?;
    let signs = KpSignVector::with_parity(coefficients.parity(k), n);
    let vertices = enum_symbols_in(ambient);
    let index: HashMap<SchubertSymbol, usize> =
        vertices.iter().cloned().enumerate().map(|(i, s)| (s, i)).collect();
    let cell: Vec<i8> = vertices.iter().map(|s| cell_sign(s, &signs)).collect();
    let edges: Vec<IncidenceEdge> = bruhat_edges(&vertices)
        .into_iter()
        .map(|e| {
            let (from, to) = (index[&e.from], index[&e.to]);
            let kind = if cell[from] == cell[to] {
                EdgeKind::Double
            } else {
                EdgeKind::Single
            };
            IncidenceEdge {
                from,
                to,
                reflection: e.reflection,
                kind,
            }
        })
        .collect();

    // vertices are sorted by dimension and the top cell comes first, so one
    // pass over the edges in source order settles every η
    let mut eta: Vec<Option<usize>> = vec![None; vertices.len()];
    eta[0] = Some(0);
    for e in &edges {
        let base = eta[e.from].ok_or_else(|| {
            Error::Consistency(format!("{} reached before its predecessors", vertices[e.from]))
        })?;
        let want = base + usize::from(e.kind == EdgeKind::Single);
        match eta[e.to] {
            None => eta[e.to] = Some(want),
            Some(h) if h != want => {
                return Err(Error::Consistency(format!(
                    "eta at {} is path dependent ({h} vs {want})",
                    vertices[e.to]
                )))
            }
            Some(_) => {}
        }
    }
    let eta = eta
        .into_iter()
        .enumerate()
        .map(|(i, h)| h.ok_or_else(|| Error::Consistency(format!("{} unreachable", vertices[i]))))
        .collect::<Result<Vec<_>>>()?;

    Ok(IncidenceGraph {
        ambient,
        coefficients,
        signs,
        vertices,
        index,
        edges,
        eta,
    })
}

pub fn eta_of(sigma: &SchubertSymbol, g: &IncidenceGraph) -> Result<usize> {
    g.index_of(sigma)
        .map(|i| g.eta[i])
        .ok_or_else(|| Error::Argument(format!("{sigma} is not a cell of Gr({},{})", g.ambient.k(), g.ambient.n())))
}

/// Closed form for η from the weighted basis vectors: weight ⌊j/2⌋ on E_j
/// for h(−), ⌊(j−1)/2⌋ for h(+), normalized to vanish on the top cell.
pub fn eta_closed_form(sigma: &SchubertSymbol, parity: Parity) -> usize {
    let w = |j: usize| match parity {
        Parity::Odd => j / 2,
        Parity::Even => (j - 1) / 2,
    };
    let total: usize = sigma.entries().iter().map(|&j| w(j as usize)).sum();
    let base: usize = (1..=sigma.k()).map(w).sum();
    total - base
}

/// Integer cochain complex C^0 → C^1 → … → C^{k(n−k)} of a graph.
#[derive(Clone, Debug)]
pub struct CochainComplex {
    pub ambient: Ambient,
    pub coefficients: Coefficients,
    /// Cells of each dimension, in vertex order.
    pub basis: Vec<Vec<SchubertSymbol>>,
    /// `coboundary[d]` maps C^d to C^{d+1}: rows index (d+1)-cells, columns d-cells.
    pub coboundary: Vec<Matrix<i64>>,
    /// ±1 on double edges, 0 on single edges, aligned with the graph's edge list.
    pub edge_signs: Vec<i8>,
}

impl CochainComplex {
    pub fn top_degree(&self) -> usize {
        self.ambient.top_dimension()
    }

    pub fn cells_in_degree(&self, d: usize) -> usize {
        self.basis.get(d).map_or(0, Vec::len)
    }

    /// Checks δ_{d+1} δ_d = 0 for every d by explicit multiplication.
    pub fn check_square_zero(&self) -> Result<()> {
        for d in 0..self.coboundary.len().saturating_sub(1) {
            let comp = self.coboundary[d + 1].mul(&self.coboundary[d]);
            if !comp.is_zero() {
                return Err(Error::Construction(format!(
                    "delta^2 != 0 from degree {d} in Gr({},{})",
                    self.ambient.k(),
                    self.ambient.n()
                )));
            }
        }
        Ok(())
    }
}

/// How the free variables of the sign system are set.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Default)]
pub enum FreeSigns {
    /// Free double edges get +2.
    #[default]
    Positive,
    /// Free double edges get −2; gives a second, generally different solution.
    Negative,
}

/// Dense GF(2) system with rows stored as bitsets plus a right-hand side bit.
struct Gf2System {
    vars: usize,
    words: usize,
    rows: Vec<(Vec<u64>, bool)>,
}

impl Gf2System {
    fn new(vars: usize) -> Self {
        Self {
            vars,
            words: vars.div_ceil(64).max(1),
            rows: Vec::new(),
        }
    }

    fn push(&mut self, vars: &[usize], rhs: bool) {
        let mut bits = vec![0u64; self.words];
        for &v in vars {
            bits[v / 64] ^= 1 << (v % 64);
        }
        self.rows.push((bits, rhs));
    }

    /// Reduced row echelon form, then back-substitution with free variables
    /// fixed to `free`. `None` if inconsistent.
    fn solve(mut self, free: bool) -> Option<Vec<bool>> {
        let bit = |r: &[u64], v: usize| r[v / 64] >> (v % 64) & 1 == 1;
        let mut pivots: Vec<(usize, usize)> = Vec::new();
        let mut next = 0;
        for v in 0..self.vars {
            let Some(p) = (next..self.rows.len()).find(|&r| bit(&self.rows[r].0, v)) else {
                continue;
            };
            self.rows.swap(next, p);
            let (prow, prhs) = self.rows[next].clone();
            for r in 0..self.rows.len() {
                if r != next && bit(&self.rows[r].0, v) {
                    let row = &mut self.rows[r];
                    for (a, b) in row.0.iter_mut().zip(&prow) {
                        *a ^= b;
                    }
                    row.1 ^= prhs;
                }
            }
            pivots.push((next, v));
            next += 1;
        }
        if self.rows[next..].iter().any(|(_, rhs)| *rhs) {
            return None;
        }
        let mut x = vec![free; self.vars];
        for &(r, v) in &pivots {
            x[v] = false;
            let (row, rhs) = &self.rows[r];
            let mut acc = *rhs;
            for u in 0..self.vars {
                if u != v && bit(row, u) && x[u] {
                    acc ^= true;
                }
            }
            x[v] = acc;
        }
        // pivot columns of a reduced system never appear in other pivot rows,
        // so the order of assignment above is irrelevant
        Some(x)
    }
}

/// Assign ±2 to the double edges so that δ∘δ = 0, with free variables positive.
pub fn solve_coboundary_signs(g: &IncidenceGraph) -> Result<CochainComplex> {
    solve_coboundary_signs_with(g, FreeSigns::Positive)
}

/// Every length-2 interval w < w'' with two double–double paths forces the two
/// path products to cancel: x_a + x_b + x_c + x_d = 1 over GF(2), where the sign
/// of an edge is (−1)^x.
pub fn solve_coboundary_signs_with(g: &IncidenceGraph, free: FreeSigns) -> Result<CochainComplex> {
    let var_of: HashMap<usize, usize> = g
        .edges
        .iter()
        .enumerate()
        .filter(|(_, e)| e.kind == EdgeKind::Double)
        .enumerate()
        .map(|(v, (ei, _))| (ei, v))
        .collect();
    let mut out_edges: Vec<Vec<usize>> = vec![Vec::new(); g.vertices.len()];
    for (ei, e) in g.edges.iter().enumerate() {
        out_edges[e.from].push(ei);
    }

    let mut system = Gf2System::new(var_of.len());
    for w in 0..g.vertices.len() {
        let mut paths: HashMap<usize, Vec<(usize, usize)>> = HashMap::new();
        for &e1 in &out_edges[w] {
            for &e2 in &out_edges[g.edges[e1].to] {
                paths.entry(g.edges[e2].to).or_default().push((e1, e2));
            }
        }
        let mut targets: Vec<_> = paths.into_iter().collect();
        targets.sort_by_key(|(u, _)| *u);
        for (u, ps) in targets {
            let doubled: Vec<(usize, usize)> = ps
                .into_iter()
                .filter(|(a, b)| var_of.contains_key(a) && var_of.contains_key(b))
                .collect();
            match doubled.len() {
                0 => {}
                2 => {
                    let vars: Vec<usize> = doubled.iter().flat_map(|(a, b)| [var_of[a], var_of[b]]).collect();
                    system.push(&vars, true);
                }
                c => {
                    return Err(Error::Construction(format!(
                        "interval {} < {} has {c} double-double paths",
                        g.vertices[w], g.vertices[u]
                    )))
                }
            }
        }
    }

    let x = system
        .solve(free == FreeSigns::Negative)
        .ok_or_else(|| Error::Construction("no sign assignment makes delta square to zero".into()))?;

    let edge_signs: Vec<i8> = (0..g.edges.len())
        .map(|ei| match var_of.get(&ei) {
            Some(&v) if x[v] => -1,
            Some(_) => 1,
            None => 0,
        })
        .collect();

    let top = g.ambient.top_dimension();
    let mut basis: Vec<Vec<SchubertSymbol>> = vec![Vec::new(); top + 1];
    let mut pos = vec![0usize; g.vertices.len()];
    for (i, s) in g.vertices.iter().enumerate() {
        let d = s.dimension();
        pos[i] = basis[d].len();
        basis[d].push(s.clone());
    }
    let mut coboundary: Vec<Matrix<i64>> =
        (0..top).map(|d| Matrix::zeros(basis[d + 1].len(), basis[d].len())).collect();
    for (ei, e) in g.edges.iter().enumerate() {
        if edge_signs[ei] != 0 {
            let d = g.vertices[e.from].dimension();
            coboundary[d][(pos[e.to], pos[e.from])] = 2 * i64::from(edge_signs[ei]);
        }
    }
    let complex = CochainComplex {
        ambient: g.ambient,
        coefficients: g.coefficients,
        basis,
        coboundary,
        edge_signs,
    };
    complex.check_square_zero()?;
    Ok(complex)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sym(e: &[usize], n: usize) -> SchubertSymbol {
        SchubertSymbol::new(e, n).unwrap()
    }

    #[test]
    fn gr24_graph() {
        let g = build_graph(2, 4, Coefficients::Trivial).unwrap();
        assert_eq!(g.edges().len(), 6);
        let doubles: Vec<String> = g
            .double_edges()
            .map(|e| format!("{}{}", g.vertices()[e.from], g.vertices()[e.to]))
            .collect();
        assert_eq!(doubles, vec!["(1,3)(2,3)", "(1,3)(1,4)", "(1,4)(2,4)", "(2,3)(2,4)"]);
        let eta: Vec<(String, usize)> =
            g.vertices().iter().map(|s| (s.to_string(), eta_of(s, &g).unwrap())).collect();
        let want = [("(1,2)", 0), ("(1,3)", 1), ("(1,4)", 1), ("(2,3)", 1), ("(2,4)", 1), ("(3,4)", 2)];
        for (s, h) in want {
            assert!(eta.contains(&(s.to_string(), h)), "{s}");
        }
    }

    #[test]
    fn rp3_eta() {
        let g = build_graph(1, 4, Coefficients::Trivial).unwrap();
        assert_eq!(g.eta(), &[0, 1, 1, 2]);
        assert_eq!(eta_of(&sym(&[4], 4), &g).unwrap(), 2);
        assert!(eta_of(&sym(&[4], 5), &g).is_err());
    }

    #[test]
    fn twisted_rp2_chain() {
        let g = build_graph(1, 3, Coefficients::Twisted).unwrap();
        let kinds: Vec<EdgeKind> = g.edges().iter().map(|e| e.kind).collect();
        assert_eq!(kinds, vec![EdgeKind::Double, EdgeKind::Single]);
        assert_eq!(g.eta(), &[0, 0, 1]);
    }

    #[test]
    fn eta_closed_form_matches_sweep() {
        for n in 2..=10 {
            for k in 1..n {
                for c in [Coefficients::Trivial, Coefficients::Twisted] {
                    let g = build_graph(k, n, c).unwrap();
                    let parity = c.parity(k);
                    for (s, h) in g.vertices().iter().zip(g.eta()) {
                        assert_eq!(eta_closed_form(s, parity), *h, "{s} in Gr({k},{n}) {c}");
                    }
                }
            }
        }
    }

    #[test]
    fn complexes_square_to_zero() {
        for n in 2..=7 {
            for k in 1..n {
                for c in [Coefficients::Trivial, Coefficients::Twisted] {
                    let g = build_graph(k, n, c).unwrap();
                    for free in [FreeSigns::Positive, FreeSigns::Negative] {
                        let cx = solve_coboundary_signs_with(&g, free).unwrap();
                        cx.check_square_zero().unwrap();
                        for (ei, e) in g.edges().iter().enumerate() {
                            assert_eq!(cx.edge_signs[ei] != 0, e.kind == EdgeKind::Double);
                        }
                    }
                }
            }
        }
    }

    #[test]
    fn gr24_square_forces_opposite_products() {
        let g = build_graph(2, 4, Coefficients::Trivial).unwrap();
        let cx = solve_coboundary_signs(&g).unwrap();
        let sign = |a: &str, b: &str| {
            let i = g
                .edges()
                .iter()
                .position(|e| g.vertices()[e.from].to_string() == a && g.vertices()[e.to].to_string() == b)
                .unwrap();
            cx.edge_signs[i]
        };
        let left = sign("(1,3)", "(2,3)") * sign("(2,3)", "(2,4)");
        let right = sign("(1,3)", "(1,4)") * sign("(1,4)", "(2,4)");
        assert_eq!(left, -right);
    }

    #[test]
    fn chains_have_no_constraints() {
        let g = build_graph(1, 6, Coefficients::Trivial).unwrap();
        let cx = solve_coboundary_signs(&g).unwrap();
        assert!(cx.edge_signs.iter().all(|&s| s >= 0));
        assert_eq!(cx.coboundary.len(), 5);
    }

    #[test]
    fn gf2_inconsistent_system() {
        let mut s = Gf2System::new(2);
        s.push(&[0, 1], true);
        s.push(&[0, 1], false);
        assert!(s.solve(false).is_none());
        let mut s = Gf2System::new(3);
        s.push(&[0, 1], true);
        assert_eq!(s.solve(true).unwrap(), vec![false, true, true]);
    }
}
