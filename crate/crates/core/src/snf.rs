//! Smith normal form over a Euclidean integer type.
//!
//! Only the invariant factors are kept; no unimodular transforms are tracked.

use crate::matrix::Matrix;
use crate::scalar::IntegerScalar;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SmithForm<T> {
    /// Positive invariant factors d₁ | d₂ | … (nonzero ones only).
    pub factors: Vec<T>,
    pub rank: usize,
}

impl<T: IntegerScalar> SmithForm<T> {
    /// Factors strictly greater than one, i.e. the torsion of the cokernel.
    pub fn torsion(&self) -> Vec<T> {
        self.factors
            .iter()
            .filter(|d| !d.is_one())
            .cloned()
            .collect()
    }
}

fn min_abs_entry<T: IntegerScalar>(m: &Matrix<T>, from: usize) -> Option<(usize, usize)> {
    let mut best: Option<(usize, usize, T)> = None;
    for i in from..m.rows() {
        for j in from..m.cols() {
            let v = &m[(i, j)];
            if v.is_zero() {
                continue;
            }
            let a = v.abs();
            if best.as_ref().map_or(true, |(_, _, b)| a < *b) {
                let unit = a.is_one();
                best = Some((i, j, a));
                if unit {
                    return best.map(|(i, j, _)| (i, j));
                }
            }
        }
    }
    best.map(|(i, j, _)| (i, j))
}

/// Subtract `factor` times row `src` from row `dst`, columns `from..`.
fn row_axpy<T: IntegerScalar>(m: &mut Matrix<T>, dst: usize, src: usize, factor: &T, from: usize) {
    for j in from..m.cols() {
        let s = m[(src, j)].clone();
        if !s.is_zero() {
            let v = m[(dst, j)].clone() - factor.clone() * s;
            m[(dst, j)] = v;
        }
    }
}

fn col_axpy<T: IntegerScalar>(m: &mut Matrix<T>, dst: usize, src: usize, factor: &T, from: usize) {
    for i in from..m.rows() {
        let s = m[(i, src)].clone();
        if !s.is_zero() {
            let v = m[(i, dst)].clone() - factor.clone() * s;
            m[(i, dst)] = v;
        }
    }
}

/// Invariant factors of `m` with the smallest-absolute-value pivot strategy.
pub fn smith_normal_form<T: IntegerScalar>(m: &Matrix<T>) -> SmithForm<T> {
    let mut a = m.clone();
    let mut factors = Vec::new();
    let steps = a.rows().min(a.cols());
    let mut t = 0;
    while t < steps {
        let Some((pi, pj)) = min_abs_entry(&a, t) else {
            break;
        };
        a.swap_rows(t, pi);
        a.swap_cols(t, pj);
        loop {
            // clear column t and row t; any nonzero remainder becomes a smaller pivot
            let mut dirty = false;
            for i in t + 1..a.rows() {
                if a[(i, t)].is_zero() {
                    continue;
                }
                let q = a[(i, t)].div_floor(&a[(t, t)]);
                row_axpy(&mut a, i, t, &q, t);
                if !a[(i, t)].is_zero() {
                    dirty = true;
                }
            }
            for j in t + 1..a.cols() {
                if a[(t, j)].is_zero() {
                    continue;
                }
                let q = a[(t, j)].div_floor(&a[(t, t)]);
                col_axpy(&mut a, j, t, &q, t);
                if !a[(t, j)].is_zero() {
                    dirty = true;
                }
            }
            if dirty {
                let (pi, pj) = smallest_in_cross(&a, t);
                a.swap_rows(t, pi);
                a.swap_cols(t, pj);
                continue;
            }
            // divisibility: pivot must divide the remaining block
            let p = a[(t, t)].clone();
            let offender = (t + 1..a.rows()).find(|&i| {
                (t + 1..a.cols()).any(|j| !a[(i, j)].is_zero() && !a[(i, j)].is_multiple_of(&p))
            });
            match offender {
                Some(i) => {
                    let one = T::one();
                    // row t += row i, then re-clear
                    let neg = -one;
                    row_axpy(&mut a, t, i, &neg, t);
                }
                None => break,
            }
        }
        factors.push(a[(t, t)].abs());
        t += 1;
    }
    let rank = factors.len();
    SmithForm { factors, rank }
}

fn smallest_in_cross<T: IntegerScalar>(a: &Matrix<T>, t: usize) -> (usize, usize) {
    let mut best = (t, t, a[(t, t)].abs());
    for i in t + 1..a.rows() {
        let v = a[(i, t)].abs();
        if !v.is_zero() && v < best.2 {
            best = (i, t, v);
        }
    }
    for j in t + 1..a.cols() {
        let v = a[(t, j)].abs();
        if !v.is_zero() && v < best.2 {
            best = (t, j, v);
        }
    }
    (best.0, best.1)
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_bigint::BigInt;
    use num_integer::Integer;
    use num_traits::{One, Signed, Zero};
    use proptest::prelude::*;

    fn big(rows: Vec<Vec<i64>>) -> Matrix<BigInt> {
        Matrix::from_rows(rows).map(|&v| BigInt::from(v))
    }

    fn ints(f: &[BigInt]) -> Vec<i64> {
        f.iter().map(|v| i64::try_from(v).unwrap()).collect()
    }

    #[test]
    fn small_examples() {
        let s = smith_normal_form(&big(vec![vec![2]]));
        assert_eq!((ints(&s.factors), s.rank), (vec![2], 1));
        let s = smith_normal_form(&big(vec![vec![0, 0], vec![0, 0]]));
        assert_eq!((ints(&s.factors), s.rank), (vec![], 0));
        let s = smith_normal_form(&big(vec![vec![2, 2], vec![2, -2]]));
        assert_eq!((ints(&s.factors), s.rank), (vec![2, 4], 2));
        let s = smith_normal_form(&big(vec![vec![2, 4, 4], vec![-6, 6, 12], vec![10, -4, -16]]));
        assert_eq!(ints(&s.factors), vec![2, 6, 12]);
        let s = smith_normal_form(&Matrix::<i64>::zeros(0, 4));
        assert_eq!(s.rank, 0);
        // fixed-width integers work too
        let s = smith_normal_form(&Matrix::from_rows(vec![vec![4i64, 0], vec![0, 6]]));
        assert_eq!(s.factors, vec![2, 12]);
        assert_eq!(s.torsion(), vec![2, 12]);
    }

    /// Determinant by cofactor expansion; fine for the tiny sizes used here.
    fn det(m: &[Vec<BigInt>]) -> BigInt {
        let n = m.len();
        if n == 0 {
            return BigInt::one();
        }
        let mut acc = BigInt::zero();
        for j in 0..n {
            if m[0][j].is_zero() {
                continue;
            }
            let minor: Vec<Vec<BigInt>> = m[1..]
                .iter()
                .map(|r| r.iter().enumerate().filter(|(c, _)| *c != j).map(|(_, v)| v.clone()).collect())
                .collect();
            let term = &m[0][j] * det(&minor);
            if j % 2 == 0 {
                acc += term;
            } else {
                acc -= term;
            }
        }
        acc
    }

    fn subsets(n: usize, k: usize) -> Vec<Vec<usize>> {
        (0u32..(1 << n))
            .filter(|b| b.count_ones() as usize == k)
            .map(|b| (0..n).filter(|i| b >> i & 1 == 1).collect())
            .collect()
    }

    /// Determinantal divisors D_i = gcd of all i×i minors; d_i = D_i / D_{i-1}.
    fn invariant_factors_by_minors(m: &[Vec<BigInt>], rows: usize, cols: usize) -> Vec<BigInt> {
        let mut out = Vec::new();
        let mut prev = BigInt::one();
        for size in 1..=rows.min(cols) {
            let mut g = BigInt::zero();
            for rs in subsets(rows, size) {
                for cs in subsets(cols, size) {
                    let sub: Vec<Vec<BigInt>> =
                        rs.iter().map(|&r| cs.iter().map(|&c| m[r][c].clone()).collect()).collect();
                    g = g.gcd(&det(&sub));
                }
            }
            if g.is_zero() {
                break;
            }
            out.push((&g / &prev).abs());
            prev = g;
        }
        out
    }

    proptest! {
        #[test]
        fn agrees_with_determinantal_divisors(
            rows in 1usize..5,
            cols in 1usize..5,
            seed in proptest::collection::vec(-6i64..=6, 16),
        ) {
            let raw: Vec<Vec<BigInt>> = (0..rows)
                .map(|i| (0..cols).map(|j| BigInt::from(seed[i * 4 + j])).collect())
                .collect();
            let want = invariant_factors_by_minors(&raw, rows, cols);
            let got = smith_normal_form(&Matrix::from_rows(raw));
            prop_assert_eq!(&got.factors, &want);
            prop_assert_eq!(got.rank, want.len());
            for w in got.factors.windows(2) {
                prop_assert!(w[1].is_multiple_of(&w[0]));
            }
        }

        #[test]
        fn even_matrices_have_even_factors(
            seed in proptest::collection::vec(-2i64..=2, 9),
        ) {
            let raw: Vec<Vec<i64>> = (0..3).map(|i| (0..3).map(|j| 2 * seed[i * 3 + j]).collect()).collect();
            let got = smith_normal_form(&Matrix::from_rows(raw));
            prop_assert!(got.factors.iter().all(|d| d % 2 == 0));
        }
    }
}
