//! Integral cohomology of the cochain complexes via Smith normal form, and
//! homology through Poincaré–Lefschetz duality.

use std::fmt;

use num_bigint::BigInt;
use num_traits::ToPrimitive;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::incidence::{build_graph, solve_coboundary_signs, CochainComplex};
use crate::poly::Var;
use crate::schubert::Ambient;
use crate::signs::Coefficients;
use crate::snf::smith_normal_form;
use crate::IntPolynomial;

/// ℤ^rank ⊕ ℤ/t₁ ⊕ … with t₁ | t₂ | ….
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct AbelianGroup {
    pub rank: usize,
    pub torsion: Vec<u64>,
}

impl AbelianGroup {
    pub fn new(rank: usize, mut torsion: Vec<u64>) -> Self {
        torsion.sort_unstable();
        Self { rank, torsion }
    }

    pub fn trivial() -> Self {
        Self::new(0, Vec::new())
    }

    pub fn free(rank: usize) -> Self {
        Self::new(rank, Vec::new())
    }

    pub fn is_trivial(&self) -> bool {
        self.rank == 0 && self.torsion.is_empty()
    }

    /// Number of torsion summands of even order, i.e. the ℤ/2-rank of the torsion.
    pub fn even_torsion_count(&self) -> usize {
        self.torsion.iter().filter(|t| *t % 2 == 0).count()
    }
}

impl fmt::Display for AbelianGroup {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut parts = Vec::new();
        match self.rank {
            0 => {}
            1 => parts.push("Z".to_string()),
            r => parts.push(format!("Z^{r}")),
        }
        parts.extend(self.torsion.iter().map(|t| format!("Z_{t}")));
        if parts.is_empty() {
            f.write_str("0")
        } else {
            f.write_str(&parts.join(" + "))
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Grading {
    Cohomology,
    Homology,
}

/// One group per degree 0..=k(n−k).
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CohomologyTable {
    pub k: usize,
    pub n: usize,
    pub coefficients: Coefficients,
    pub grading: Grading,
    pub groups: Vec<AbelianGroup>,
}

impl CohomologyTable {
    pub fn top_degree(&self) -> usize {
        self.groups.len() - 1
    }

    pub fn ranks(&self) -> Vec<usize> {
        self.groups.iter().map(|g| g.rank).collect()
    }

    pub fn euler_characteristic(&self) -> i64 {
        self.groups
            .iter()
            .enumerate()
            .map(|(d, g)| if d % 2 == 0 { g.rank as i64 } else { -(g.rank as i64) })
            .sum()
    }
}

impl fmt::Display for CohomologyTable {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let sym = match self.grading {
            Grading::Cohomology => "H^",
            Grading::Homology => "H_",
        };
        for (d, g) in self.groups.iter().enumerate() {
            writeln!(f, "{sym}{d} = {g}")?;
        }
        Ok(())
    }
}

struct DegreeData {
    rank: usize,
    torsion: Vec<u64>,
}

fn analyse(m: &crate::matrix::Matrix<i64>) -> Result<DegreeData> {
    let snf = smith_normal_form(&m.map(|&v| BigInt::from(v)));
    let torsion = snf
        .torsion()
        .iter()
        .map(|t| {
            t.to_u64()
                .ok_or_else(|| Error::Resource(format!("torsion order {t} exceeds u64")))
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(DegreeData {
        rank: snf.rank,
        torsion,
    })
}

/// H^d = ker δ_d / im δ_{d−1}: free rank dim C^d − rank δ_d − rank δ_{d−1},
/// torsion the nontrivial invariant factors of δ_{d−1}. Degrees run in parallel.
pub fn cohomology(c: &CochainComplex) -> Result<CohomologyTable> {
    let per: Vec<DegreeData> = c
        .coboundary
        .par_iter()
        .map(analyse)
        .collect::<Result<Vec<_>>>()?;
    let top = c.top_degree();
    let groups = (0..=top)
        .map(|d| {
            let out_rank = if d < top { per[d].rank } else { 0 };
            let (in_rank, torsion) = if d > 0 {
                (per[d - 1].rank, per[d - 1].torsion.clone())
            } else {
                (0, Vec::new())
            };
            AbelianGroup::new(c.cells_in_degree(d) - out_rank - in_rank, torsion)
        })
        .collect();
    Ok(CohomologyTable {
        k: c.ambient.k(),
        n: c.ambient.n(),
        coefficients: c.coefficients,
        grading: Grading::Cohomology,
        groups,
    })
}

/// Build the graph, solve the signs, and compute H^*(Gr(k,n)) in one step.
pub fn cohomology_of(k: usize, n: usize, coefficients: Coefficients) -> Result<CohomologyTable> {
    let g = build_graph(k, n, coefficients)?;
    cohomology(&solve_coboundary_signs(&g)?)
}

/// H_j(Gr(k,n); ℤ) = H^{k(n−k)−j} with trivial coefficients for even n and
/// orientation-twisted coefficients for odd n.
pub fn homology(k: usize, n: usize) -> Result<CohomologyTable> {
    let amb = Ambient::new(k, n)?;
    let coefficients = if n % 2 == 0 {
        Coefficients::Trivial
    } else {
        Coefficients::Twisted
    };
    let co = cohomology_of(k, n, coefficients)?;
    let top = amb.top_dimension();
    Ok(CohomologyTable {
        k,
        n,
        coefficients: Coefficients::Trivial,
        grading: Grading::Homology,
        groups: (0..=top).map(|j| co.groups[top - j].clone()).collect(),
    })
}

/// Σ_d rank(H^d) t^d.
pub fn betti_polynomial(t: &CohomologyTable) -> IntPolynomial {
    IntPolynomial::new(Var::T, t.groups.iter().map(|g| BigInt::from(g.rank)).collect())
}

/// Universal coefficients with every incidence even: the number of d-cells must
/// equal rank H^d + #even torsion of H^d + #even torsion of H^{d+1}.
pub fn check_mod2_dimensions(t: &CohomologyTable, c: &CochainComplex) -> Result<()> {
    for d in 0..=t.top_degree() {
        let next = t.groups.get(d + 1).map_or(0, AbelianGroup::even_torsion_count);
        let got = t.groups[d].rank + t.groups[d].even_torsion_count() + next;
        if got != c.cells_in_degree(d) {
            return Err(Error::Consistency(format!(
                "mod-2 count in degree {d}: {got} != {} cells",
                c.cells_in_degree(d)
            )));
        }
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::incidence::{solve_coboundary_signs_with, FreeSigns};

    fn z() -> AbelianGroup {
        AbelianGroup::free(1)
    }

    fn z2(count: usize) -> AbelianGroup {
        AbelianGroup::new(0, vec![2; count])
    }

    fn zero() -> AbelianGroup {
        AbelianGroup::trivial()
    }

    #[test]
    fn gr24() {
        let t = cohomology_of(2, 4, Coefficients::Trivial).unwrap();
        assert_eq!(t.groups, vec![z(), zero(), z2(1), z2(1), z()]);
        assert_eq!(betti_polynomial(&t).to_string(), "1 + t^4");
    }

    #[test]
    fn gr36() {
        let t = cohomology_of(3, 6, Coefficients::Trivial).unwrap();
        let h4 = AbelianGroup::new(1, vec![2, 2]);
        let want = vec![z(), zero(), z2(1), z2(1), h4, z(), z2(2), z2(1), z2(1), z()];
        assert_eq!(t.groups, want);
        assert_eq!(betti_polynomial(&t).to_string(), "1 + t^4 + t^5 + t^9");
    }

    #[test]
    fn gr25_twisted() {
        let t = cohomology_of(2, 5, Coefficients::Twisted).unwrap();
        assert_eq!(t.groups, vec![zero(), z2(1), z(), z2(1), z2(1), z2(1), z()]);
    }

    #[test]
    fn homology_by_duality() {
        let h = homology(2, 4).unwrap();
        assert_eq!((h.groups[0].clone(), h.groups[1].clone(), h.groups[4].clone()), (z(), z2(1), z()));
        let h = homology(2, 5).unwrap();
        assert_eq!(h.groups[0], z());
        assert_eq!(h.groups[6], zero());
        let h = homology(1, 2).unwrap();
        assert_eq!(h.groups, vec![z(), z()]);
    }

    #[test]
    fn mod2_bookkeeping_and_second_solution() {
        for n in 2..=7 {
            for k in 1..n {
                for c in [Coefficients::Trivial, Coefficients::Twisted] {
                    let g = build_graph(k, n, c).unwrap();
                    let a = solve_coboundary_signs_with(&g, FreeSigns::Positive).unwrap();
                    let b = solve_coboundary_signs_with(&g, FreeSigns::Negative).unwrap();
                    let ta = cohomology(&a).unwrap();
                    check_mod2_dimensions(&ta, &a).unwrap();
                    assert_eq!(ta, cohomology(&b).unwrap(), "Gr({k},{n}) {c}");
                }
            }
        }
    }

    #[test]
    fn display() {
        assert_eq!(AbelianGroup::new(2, vec![2, 2]).to_string(), "Z^2 + Z_2 + Z_2");
        assert_eq!(zero().to_string(), "0");
    }
}
