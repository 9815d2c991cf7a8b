//! Numerical τ-functions of the finite KP hierarchy on Gr(k,n),
//!
//!   τ(t) = Σ_σ ε(σ) Δ(σ) exp Σ_{i∈σ} θ(λ_i; t),   θ(λ; t) = Σ_r λ^r t_r,
//!
//! where Δ(σ) is the Vandermonde minor of the chosen λ. Everything is evaluated
//! through the exponents log Δ(σ) + Σ θ, so τ itself is never formed: sums are
//! signed log-sum-exps and dominance is an argmax.

use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::scalar::Real;
use crate::schubert::{enum_symbols, SchubertSymbol};
use crate::signs::kp_sign_vector;

pub const DEFAULT_SAMPLES: usize = 4096;
pub const MIN_SAMPLES: usize = 100;
pub const MAX_GRID_POINTS: usize = 4_000_000;
/// Dominance margin used for cell centers when the caller has no preference.
/// Large enough that on a segment between adjacent centers every third
/// exponential sits ~e^-15 below the two competing ones.
pub const DEFAULT_RADIUS: f64 = 40.0;

/// Distinct spectral parameters λ₁ < … < λ_n with Σλ = 0, and the KP signs.
#[derive(Clone, Debug, PartialEq)]
pub struct SpectralData<F> {
    lambdas: Vec<F>,
    epsilon: Vec<i8>,
}

impl<F: Real> SpectralData<F> {
    pub fn new(lambdas: Vec<F>, epsilon: Vec<i8>) -> Result<Self> {
        let n = lambdas.len();
        if n == 0 || epsilon.len() != n {
            return Err(Error::Argument(format!(
                "need matching nonempty λ and ε, got {} and {}",
                n,
                epsilon.len()
            )));
        }
        if lambdas.iter().any(|l| !l.is_finite()) {
            return Err(Error::Argument("λ must be finite".into()));
        }
        if !lambdas.windows(2).all(|w| w[0] < w[1]) {
            return Err(Error::Argument("λ must be strictly increasing".into()));
        }
        let scale = lambdas.iter().fold(F::one(), |m, l| m.max(l.abs()));
        let sum = lambdas.iter().fold(F::zero(), |s, &l| s + l);
        if sum.abs() > tolerance::<F>(n) * scale {
            return Err(Error::Argument(format!("λ must sum to zero, sum is {sum}")));
        }
        if epsilon.iter().any(|&e| e != 1 && e != -1) {
            return Err(Error::Argument("ε entries must be ±1".into()));
        }
        Ok(Self { lambdas, epsilon })
    }

    /// λ_j = j − (n+1)/2 + j²/(100n²), shifted to sum zero. The quadratic term
    /// breaks coincidences such as λ₁+λ₄ = λ₂+λ₃ of an arithmetic progression.
    pub fn default_lambdas(n: usize) -> Vec<F> {
        Self::perturbed(n, 0.0)
    }

    /// [`Self::default_lambdas`] plus 2^j/(400n²·2ⁿ). Subsets with equal Σj and
    /// Σj² (first for k = 3, n = 7) are then separated by their binary digit
    /// sums, and the extra term is too small to create new coincidences.
    pub fn tiebroken_lambdas(n: usize) -> Vec<F> {
        let nf = n as f64;
        Self::perturbed(n, 1.0 / (400.0 * nf * nf * 2f64.powi(n as i32)))
    }

    fn perturbed(n: usize, binary: f64) -> Vec<F> {
        let nf = n as f64;
        let raw: Vec<f64> = (1..=n)
            .map(|j| {
                let jf = j as f64;
                jf - (nf + 1.0) / 2.0 + jf * jf / (100.0 * nf * nf) + binary * 2f64.powi(j as i32)
            })
            .collect();
        let mean = raw.iter().sum::<f64>() / nf;
        raw.iter().map(|l| F::lit(l - mean)).collect()
    }

    /// Default λ with the sign vector forced on Gr(k,n), falling back to the
    /// tie-broken λ when the plain default has coinciding subset sums.
    pub fn default_for(k: usize, n: usize) -> Result<Self> {
        let eps = kp_sign_vector(k, n)?.signs().to_vec();
        let data = Self::new(Self::default_lambdas(n), eps.clone())?;
        if data.check_subset_sums(k).is_ok() {
            return Ok(data);
        }
        log::debug!("default λ resonates on Gr({k},{n}); using the tie-broken variant");
        let data = Self::new(Self::tiebroken_lambdas(n), eps)?;
        data.check_subset_sums(k)?;
        Ok(data)
    }

    pub fn with_signs(self, epsilon: &[i8]) -> Result<Self> {
        Self::new(self.lambdas, epsilon.to_vec())
    }

    pub fn n(&self) -> usize {
        self.lambdas.len()
    }

    pub fn lambdas(&self) -> &[F] {
        &self.lambdas
    }

    pub fn epsilon(&self) -> &[i8] {
        &self.epsilon
    }

    /// All C(n,k) sums Σ_{j∈σ} λ_j must be pairwise distinct, otherwise two
    /// exponentials grow at the same rate in x and dominance is not generic.
    pub fn check_subset_sums(&self, k: usize) -> Result<()> {
        let cells = enum_symbols(k, self.n())?;
        let mut sums: Vec<(F, &SchubertSymbol)> = cells
            .iter()
            .map(|s| {
                let v = s
                    .entries()
                    .iter()
                    .fold(F::zero(), |acc, &i| acc + self.lambdas[i as usize - 1]);
                (v, s)
            })
            .collect();
        sums.sort_by(|a, b| a.0.partial_cmp(&b.0).expect("finite sums"));
        let scale = self.lambdas.iter().fold(F::one(), |m, l| m.max(l.abs()));
        let tol = tolerance::<F>(self.n()) * scale;
        for w in sums.windows(2) {
            if w[1].0 - w[0].0 <= tol {
                return Err(Error::Precondition(format!(
                    "subset sums of {} and {} coincide",
                    w[0].1, w[1].1
                )));
            }
        }
        Ok(())
    }
}

fn tolerance<F: Real>(n: usize) -> F {
    F::epsilon() * F::lit(64.0 * n as f64)
}

/// Flow times (t₁, …, t_{n−1}) = (x, y, t, …).
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct TimeVector<F> {
    t: Vec<F>,
}

impl<F: Real> TimeVector<F> {
    pub fn new(t: Vec<F>) -> Result<Self> {
        if t.iter().any(|v| !v.is_finite()) {
            return Err(Error::Argument("flow times must be finite".into()));
        }
        Ok(Self { t })
    }

    /// The origin for an ambient of dimension n.
    pub fn zeros(n: usize) -> Self {
        Self {
            t: vec![F::zero(); n.saturating_sub(1)],
        }
    }

    /// (x, y, t₃, 0, …). Nonzero entries beyond the available n−1 are rejected.
    pub fn from_xyt(n: usize, x: F, y: F, t3: F) -> Result<Self> {
        let mut v = Self::zeros(n);
        for (r, val) in [x, y, t3].into_iter().enumerate() {
            if r < v.t.len() {
                v.t[r] = val;
            } else if val != F::zero() {
                return Err(Error::Argument(format!("Gr(·,{n}) has no flow time t{}", r + 1)));
            }
        }
        Self::new(v.t)
    }

    pub fn entries(&self) -> &[F] {
        &self.t
    }

    pub fn len(&self) -> usize {
        self.t.len()
    }

    pub fn is_empty(&self) -> bool {
        self.t.is_empty()
    }

    /// (1−s)·a + s·b.
    pub fn lerp(a: &Self, b: &Self, s: F) -> Self {
        Self {
            t: a.t
                .iter()
                .zip(&b.t)
                .map(|(&x, &y)| x + (y - x) * s)
                .collect(),
        }
    }
}

/// sign · e^log_magnitude; the magnitude is meaningless when the sign is 0.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct SignedLogValue<F> {
    pub sign: i8,
    pub log_magnitude: F,
}

/// Π_{i<j} (λ_{σ_j} − λ_{σ_i}).
pub fn vandermonde_minor<F: Real>(data: &SpectralData<F>, sigma: &SchubertSymbol) -> F {
    log_minor(data, sigma).exp()
}

fn log_minor<F: Real>(data: &SpectralData<F>, sigma: &SchubertSymbol) -> F {
    let e = sigma.entries();
    let mut acc = F::zero();
    for (a, &i) in e.iter().enumerate() {
        for &j in &e[a + 1..] {
            acc = acc + (data.lambdas[j as usize - 1] - data.lambdas[i as usize - 1]).ln();
        }
    }
    acc
}

/// The cells of Gr(k,n) with everything that does not depend on t.
struct Terms<'a, F> {
    data: &'a SpectralData<F>,
    cells: Vec<SchubertSymbol>,
    log_minors: Vec<F>,
    signs: Vec<i8>,
}

impl<'a, F: Real> Terms<'a, F> {
    fn new(k: usize, data: &'a SpectralData<F>) -> Result<Self> {
        data.check_subset_sums(k)?;
        let cells = enum_symbols(k, data.n())?;
        let log_minors = cells.iter().map(|s| log_minor(data, s)).collect();
        let signs = cells
            .iter()
            .map(|s| {
                s.entries()
                    .iter()
                    .map(|&i| data.epsilon[i as usize - 1])
                    .product()
            })
            .collect();
        Ok(Self {
            data,
            cells,
            log_minors,
            signs,
        })
    }

    fn check_times(&self, t: &TimeVector<F>) -> Result<()> {
        if t.len() + 1 != self.data.n() {
            return Err(Error::Argument(format!(
                "expected {} flow times, got {}",
                self.data.n() - 1,
                t.len()
            )));
        }
        Ok(())
    }

    fn thetas(&self, t: &TimeVector<F>) -> Vec<F> {
        self.data
            .lambdas
            .iter()
            .map(|&l| {
                // Horner in λ for Σ_{r≥1} λ^r t_r
                t.t.iter().rev().fold(F::zero(), |acc, &tr| (acc + tr) * l)
            })
            .collect()
    }

    fn exponents(&self, t: &TimeVector<F>) -> Vec<F> {
        let th = self.thetas(t);
        self.cells
            .iter()
            .zip(&self.log_minors)
            .map(|(s, &lm)| s.entries().iter().fold(lm, |acc, &i| acc + th[i as usize - 1]))
            .collect()
    }

    fn tau(&self, t: &TimeVector<F>) -> SignedLogValue<F> {
        signed_log_sum(&self.exponents(t), &self.signs)
    }

    fn dominance(&self, t: &TimeVector<F>) -> Dominance {
        dominance_of(&self.cells, &self.exponents(t))
    }
}

/// Σ s_i e^{x_i} as (sign, log|·|), scaled by the largest exponent first.
pub(crate) fn signed_log_sum<F: Real>(exps: &[F], signs: &[i8]) -> SignedLogValue<F> {
    let m = exps.iter().fold(F::neg_infinity(), |a, &b| a.max(b));
    if !m.is_finite() {
        return SignedLogValue {
            sign: 0,
            log_magnitude: F::neg_infinity(),
        };
    }
    let s = exps
        .iter()
        .zip(signs)
        .fold(F::zero(), |acc, (&e, &sg)| acc + F::lit(f64::from(sg)) * (e - m).exp());
    if s == F::zero() {
        SignedLogValue {
            sign: 0,
            log_magnitude: F::neg_infinity(),
        }
    } else {
        SignedLogValue {
            sign: if s > F::zero() { 1 } else { -1 },
            log_magnitude: m + s.abs().ln(),
        }
    }
}

pub fn tau_eval<F: Real>(k: usize, data: &SpectralData<F>, t: &TimeVector<F>) -> Result<SignedLogValue<F>> {
    let terms = Terms::new(k, data)?;
    terms.check_times(t)?;
    Ok(terms.tau(t))
}

/// The cell with the largest exponential; `tie` is set when a second cell
/// attains exactly the same exponent.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Dominance {
    pub cell: SchubertSymbol,
    pub tie: Option<SchubertSymbol>,
}

fn dominance_of<F: Real>(cells: &[SchubertSymbol], exps: &[F]) -> Dominance {
    let mut best = 0;
    let mut tie: Option<usize> = None;
    for i in 1..exps.len() {
        if exps[i] > exps[best] {
            best = i;
            tie = None;
        } else if exps[i] == exps[best] && tie.is_none() {
            tie = Some(i);
        }
    }
    Dominance {
        cell: cells[best].clone(),
        tie: tie.map(|i| cells[i].clone()),
    }
}

pub fn dominant_cell<F: Real>(k: usize, data: &SpectralData<F>, t: &TimeVector<F>) -> Result<Dominance> {
    let terms = Terms::new(k, data)?;
    terms.check_times(t)?;
    Ok(terms.dominance(t))
}

/// A sign change of τ between two consecutive samples of one path segment.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct CrossingEvent<F> {
    pub segment: usize,
    pub s_interval: [F; 2],
    pub from_cell: SchubertSymbol,
    pub to_cell: SchubertSymbol,
}

/// Sample τ along the polygon through `path`, `samples` steps per segment, and
/// report every sign change.
pub fn blowup_scan<F: Real>(
    k: usize,
    data: &SpectralData<F>,
    path: &[TimeVector<F>],
    samples: usize,
) -> Result<Vec<CrossingEvent<F>>> {
    if path.len() < 2 {
        return Err(Error::Argument("a path needs at least two waypoints".into()));
    }
    if samples < MIN_SAMPLES {
        return Err(Error::Argument(format!("need at least {MIN_SAMPLES} samples per segment")));
    }
    let terms = Terms::new(k, data)?;
    for t in path {
        terms.check_times(t)?;
    }
    let steps = F::lit(samples as f64);
    let point = |seg: usize, j: usize| TimeVector::lerp(&path[seg], &path[seg + 1], F::lit(j as f64) / steps);

    let mut events = Vec::new();
    // last nonzero sign seen, with where it was seen
    let mut last: Option<(i8, usize, usize)> = None;
    for seg in 0..path.len() - 1 {
        let signs: Vec<i8> = (0..=samples)
            .into_par_iter()
            .map(|j| terms.tau(&point(seg, j)).sign)
            .collect();
        for (j, &sg) in signs.iter().enumerate() {
            if sg == 0 {
                continue;
            }
            if let Some((prev, pseg, pj)) = last {
                if prev != sg {
                    let start = if pseg == seg { pj } else { 0 };
                    if start < 2 || j + 2 > samples {
                        log::warn!("τ changes sign within two samples of waypoint on segment {seg}");
                    }
                    events.push(CrossingEvent {
                        segment: seg,
                        s_interval: [F::lit(start as f64) / steps, F::lit(j as f64) / steps],
                        from_cell: terms.dominance(&point(seg, start)).cell,
                        to_cell: terms.dominance(&point(seg, j)).cell,
                    });
                }
            }
            last = Some((sg, seg, j));
        }
    }
    Ok(events)
}

/// Solve a small dense system by Gaussian elimination with partial pivoting.
fn solve_dense<F: Real>(mut a: Vec<Vec<F>>, mut b: Vec<F>) -> Option<Vec<F>> {
    let n = b.len();
    for c in 0..n {
        let p = (c..n).max_by(|&i, &j| a[i][c].abs().partial_cmp(&a[j][c].abs()).expect("finite"))?;
        if a[p][c] == F::zero() {
            return None;
        }
        a.swap(p, c);
        b.swap(p, c);
        for r in c + 1..n {
            let f = a[r][c] / a[c][c];
            for j in c..n {
                let v = a[c][j];
                a[r][j] = a[r][j] - f * v;
            }
            b[r] = b[r] - f * b[c];
        }
    }
    let mut x = vec![F::zero(); n];
    for r in (0..n).rev() {
        let s = (r + 1..n).fold(b[r], |acc, j| acc - a[r][j] * x[j]);
        x[r] = s / a[r][r];
    }
    x.iter().all(|v| v.is_finite()).then_some(x)
}

/// A point where σ beats every other cell by at least `radius` in exponent.
///
/// Pick values c_i = +M on σ and −M off σ and interpolate them by
/// θ(λ_i) + const, a polynomial of degree n−1 in λ; the constant shifts every
/// exponent equally and is dropped. Then exponent(σ) − exponent(σ') =
/// log Δ(σ) − log Δ(σ') + 2M·|σ∖σ'|, so M = (radius + spread of log Δ)/2 suffices.
pub fn cell_center<F: Real>(sigma: &SchubertSymbol, data: &SpectralData<F>, radius: F) -> Result<TimeVector<F>> {
    if !(radius > F::zero()) || !radius.is_finite() {
        return Err(Error::Argument(format!("radius must be positive, got {radius}")));
    }
    let n = data.n();
    if sigma.n() != n {
        return Err(Error::Argument(format!("{sigma} does not live in an ambient of dimension {n}")));
    }
    let terms = Terms::new(sigma.k(), data)?;
    let me = terms
        .cells
        .iter()
        .position(|c| c == sigma)
        .expect("σ enumerated");
    if terms.cells.len() == 1 {
        return Ok(TimeVector::zeros(n));
    }
    let (lo, hi) = terms
        .log_minors
        .iter()
        .fold((F::infinity(), F::neg_infinity()), |(lo, hi), &v| (lo.min(v), hi.max(v)));
    let vandermonde: Vec<Vec<F>> = data
        .lambdas
        .iter()
        .map(|&l| (0..n).map(|r| l.powi(r as i32)).collect())
        .collect();
    let mut m = (radius + hi - lo) / F::lit(2.0);
    for _ in 0..4 {
        let targets: Vec<F> = (1..=n).map(|i| if sigma.contains(i) { m } else { -m }).collect();
        let Some(coeffs) = solve_dense(vandermonde.clone(), targets) else {
            break;
        };
        let t = TimeVector {
            t: coeffs[1..].to_vec(),
        };
        let exps = terms.exponents(&t);
        let margin = exps
            .iter()
            .enumerate()
            .filter(|&(i, _)| i != me)
            .fold(F::infinity(), |acc, (_, &e)| acc.min(exps[me] - e));
        if margin >= radius {
            return Ok(t);
        }
        // interpolation error ate into the margin; push harder
        m = m + m;
    }
    Err(Error::NoCenter {
        cell: sigma.to_string(),
        reason: format!("interpolation could not reach margin {radius}"),
    })
}

/// Waypoints at the centers of the given cells, in order.
pub fn center_path<F: Real>(cells: &[SchubertSymbol], data: &SpectralData<F>, radius: F) -> Result<Vec<TimeVector<F>>> {
    cells.iter().map(|c| cell_center(c, data, radius)).collect()
}

/// Σ |Δ E|² · 1_σ / Σ |Δ E|² in the coordinates L₁, …, L_n; lies in the
/// hypersimplex {0 ≤ μ_i ≤ 1, Σ μ_i = k}.
pub fn moment_map<F: Real>(k: usize, data: &SpectralData<F>, t: &TimeVector<F>) -> Result<Vec<F>> {
    let terms = Terms::new(k, data)?;
    terms.check_times(t)?;
    let exps = terms.exponents(t);
    let m = exps.iter().fold(F::neg_infinity(), |a, &b| a.max(b));
    let weights: Vec<F> = exps.iter().map(|&e| (F::lit(2.0) * (e - m)).exp()).collect();
    let total = weights.iter().fold(F::zero(), |a, &w| a + w);
    let mut mu = vec![F::zero(); data.n()];
    for (cell, &w) in terms.cells.iter().zip(&weights) {
        for &i in cell.entries() {
            mu[i as usize - 1] = mu[i as usize - 1] + w / total;
        }
    }
    Ok(mu)
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct GridPoint<F> {
    pub x: F,
    pub y: F,
    pub cell: SchubertSymbol,
    pub tau_sign: i8,
}

/// Row-major samples: `points[row * columns + col]` sits at
/// (x_start + col·step, y_start + row·step).
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct DominanceGrid<F> {
    pub columns: usize,
    pub rows: usize,
    pub points: Vec<GridPoint<F>>,
}

fn axis<F: Real>(range: (F, F), step: F) -> Result<usize> {
    let (a, b) = range;
    if !a.is_finite() || !b.is_finite() || a > b {
        return Err(Error::Argument(format!("bad range {a}:{b}")));
    }
    let count = ((b - a) / step + F::lit(1e-9)).floor() + F::one();
    count
        .to_usize()
        .filter(|&c| c <= MAX_GRID_POINTS)
        .ok_or_else(|| Error::Resource(format!("range {a}:{b} at step {step} is too long")))
}

/// Dominant cell and τ sign over an (x, y) grid at fixed t₃, higher times 0.
pub fn dominance_grid<F: Real>(
    k: usize,
    data: &SpectralData<F>,
    t3: F,
    x_range: (F, F),
    y_range: (F, F),
    step: F,
) -> Result<DominanceGrid<F>> {
    if !(step > F::zero()) || !step.is_finite() {
        return Err(Error::Argument(format!("step must be positive, got {step}")));
    }
    let columns = axis(x_range, step)?;
    let rows = axis(y_range, step)?;
    if columns.saturating_mul(rows) > MAX_GRID_POINTS {
        return Err(Error::Resource(format!(
            "{columns}×{rows} grid exceeds {MAX_GRID_POINTS} points"
        )));
    }
    let terms = Terms::new(k, data)?;
    let n = data.n();
    // validate the shape once; rows reuse it
    TimeVector::from_xyt(n, x_range.0, y_range.0, t3)?;
    let points: Vec<GridPoint<F>> = (0..rows)
        .into_par_iter()
        .flat_map_iter(|r| {
            let y = y_range.0 + F::lit(r as f64) * step;
            let terms = &terms;
            (0..columns).map(move |c| {
                let x = x_range.0 + F::lit(c as f64) * step;
                let t = TimeVector::from_xyt(n, x, y, t3).expect("shape checked");
                let exps = terms.exponents(&t);
                GridPoint {
                    x,
                    y,
                    cell: dominance_of(&terms.cells, &exps).cell,
                    tau_sign: signed_log_sum(&exps, &terms.signs).sign,
                }
            })
        })
        .collect();
    Ok(DominanceGrid { columns, rows, points })
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn sym(e: &[usize], n: usize) -> SchubertSymbol {
        SchubertSymbol::new(e, n).unwrap()
    }

    fn arithmetic4() -> SpectralData<f64> {
        SpectralData::new(vec![-1.5, -0.5, 0.5, 1.5], vec![1, -1, -1, 1]).unwrap()
    }

    #[test]
    fn minors() {
        let d = arithmetic4();
        assert_eq!(vandermonde_minor(&d, &sym(&[2], 4)), 1.0);
        assert!((vandermonde_minor(&d, &sym(&[1, 2], 4)) - 1.0).abs() < 1e-12);
        assert!((vandermonde_minor(&d, &sym(&[1, 4], 4)) - 3.0).abs() < 1e-12);
        assert!((vandermonde_minor(&d, &sym(&[1, 2, 4], 4)) - 6.0).abs() < 1e-12);
    }

    #[test]
    fn default_lambdas_break_resonances() {
        assert!(arithmetic4().check_subset_sums(2).is_err());
        let plain = SpectralData::<f64>::new(SpectralData::default_lambdas(7), vec![1; 7]).unwrap();
        assert!(plain.check_subset_sums(3).is_err());
        assert!(plain.check_subset_sums(2).is_ok());
        for n in 1..=16 {
            let l = SpectralData::<f64>::tiebroken_lambdas(n);
            assert!(l.iter().sum::<f64>().abs() < 1e-12);
            for k in 1..=n {
                SpectralData::<f64>::default_for(k, n).unwrap();
            }
        }
        SpectralData::<f32>::default_for(2, 6).unwrap();
        assert_eq!(SpectralData::<f64>::default_for(2, 6).unwrap().lambdas(), &SpectralData::<f64>::default_lambdas(6)[..]);
    }

    #[test]
    fn construction_rejects_bad_data() {
        assert!(SpectralData::new(vec![1.0, -1.0], vec![1, 1]).is_err());
        assert!(SpectralData::new(vec![-1.0, 2.0], vec![1, 1]).is_err());
        assert!(SpectralData::new(vec![-1.0, 1.0], vec![1, 0]).is_err());
        assert!(SpectralData::new(vec![-1.0, 1.0], vec![1]).is_err());
        assert!(TimeVector::new(vec![f64::NAN]).is_err());
        assert!(TimeVector::<f64>::from_xyt(3, 0.0, 1.0, 1.0).is_err());
    }

    #[test]
    fn tau_signs() {
        let d = SpectralData::<f64>::default_for(1, 2).unwrap().with_signs(&[1, -1]).unwrap();
        let v = tau_eval(1, &d, &TimeVector::zeros(2)).unwrap();
        assert_eq!(v.sign, 0);
        let d = SpectralData::<f64>::default_for(1, 4).unwrap();
        assert_eq!(d.epsilon(), &[1, -1, -1, 1]);
        let far_left = TimeVector::from_xyt(4, -50.0, 0.0, 0.0).unwrap();
        assert_eq!(tau_eval(1, &d, &far_left).unwrap().sign, 1);
        assert_eq!(dominant_cell(1, &d, &far_left).unwrap().cell, sym(&[1], 4));
        let far_right = TimeVector::from_xyt(4, 50.0, 0.0, 0.0).unwrap();
        assert_eq!(dominant_cell(1, &d, &far_right).unwrap().cell, sym(&[4], 4));
        // overflow-safe: exponents in the thousands
        let huge = TimeVector::from_xyt(4, -2000.0, 0.0, 0.0).unwrap();
        let v = tau_eval(1, &d, &huge).unwrap();
        assert_eq!(v.sign, 1);
        assert!(v.log_magnitude.is_finite() && v.log_magnitude > 1000.0);
        let short = TimeVector::new(vec![0.0]).unwrap();
        assert!(tau_eval(1, &d, &short).is_err());
    }

    #[test]
    fn ties_are_flagged() {
        let d = SpectralData::<f64>::default_for(1, 2).unwrap();
        let dom = dominant_cell(1, &d, &TimeVector::zeros(2)).unwrap();
        assert_eq!(dom.cell, sym(&[1], 2));
        assert_eq!(dom.tie, Some(sym(&[2], 2)));
    }

    #[test]
    fn centers_dominate() {
        for (k, n) in [(1, 4), (2, 4), (2, 5), (3, 6), (4, 8)] {
            let d = SpectralData::<f64>::default_for(k, n).unwrap();
            for s in enum_symbols(k, n).unwrap() {
                let t = cell_center(&s, &d, 5.0).unwrap();
                let dom = dominant_cell(k, &d, &t).unwrap();
                assert_eq!(dom.cell, s);
                assert_eq!(dom.tie, None);
            }
        }
        let d = SpectralData::<f64>::default_for(1, 4).unwrap();
        for (x, cell) in [(-30.0, 1), (30.0, 4)] {
            let t = TimeVector::from_xyt(4, x, 0.0, 0.0).unwrap();
            assert_eq!(dominant_cell(1, &d, &t).unwrap().cell, sym(&[cell], 4));
        }
        assert!(cell_center(&sym(&[1], 4), &d, -1.0).is_err());
        assert!(cell_center(&sym(&[1], 5), &d, 1.0).is_err());
        let d = SpectralData::<f64>::default_for(3, 3).unwrap();
        assert_eq!(cell_center(&sym(&[1, 2, 3], 3), &d, 1.0).unwrap().entries(), &[0.0, 0.0]);
    }

    #[test]
    fn gr14_flow_blows_up_twice() {
        let d = SpectralData::<f64>::default_for(1, 4).unwrap();
        let cells: Vec<_> = (1..=4).map(|i| sym(&[i], 4)).collect();
        let path = center_path(&cells, &d, DEFAULT_RADIUS).unwrap();
        let ev = blowup_scan(1, &d, &path, DEFAULT_SAMPLES).unwrap();
        assert_eq!(ev.len(), 2);
        assert_eq!((ev[0].segment, ev[1].segment), (0, 2));
        assert_eq!((ev[0].from_cell.clone(), ev[0].to_cell.clone()), (cells[0].clone(), cells[1].clone()));
        assert!(ev[0].s_interval[0] < ev[0].s_interval[1]);

        let plus = d.clone().with_signs(&[1; 4]).unwrap();
        assert!(blowup_scan(1, &plus, &path, 200).unwrap().is_empty());
        assert!(blowup_scan(1, &d, &path[..1], 200).is_err());
        assert!(blowup_scan(1, &d, &path, 10).is_err());
    }

    #[test]
    fn gr24_flow_blows_up_on_single_edges() {
        let d = SpectralData::<f64>::default_for(2, 4).unwrap();
        assert_eq!(d.epsilon(), &[1, 1, -1, -1]);
        let cells: Vec<_> = [[1, 2], [1, 3], [2, 3], [2, 4], [3, 4]]
            .iter()
            .map(|e| sym(e, 4))
            .collect();
        let path = center_path(&cells, &d, DEFAULT_RADIUS).unwrap();
        let ev = blowup_scan(2, &d, &path, DEFAULT_SAMPLES).unwrap();
        let segs: Vec<usize> = ev.iter().map(|e| e.segment).collect();
        assert_eq!(segs, vec![0, 3]);
        let json = serde_json::to_string(&ev[0]).unwrap();
        assert!(json.contains("\"from_cell\":[1,2]"), "{json}");
        assert!(json.contains("\"s_interval\""));
    }

    #[test]
    fn moment_map_in_hypersimplex() {
        let d = SpectralData::<f64>::default_for(2, 4).unwrap();
        let s = sym(&[1, 2], 4);
        let t = cell_center(&s, &d, DEFAULT_RADIUS).unwrap();
        let mu = moment_map(2, &d, &t).unwrap();
        for (got, want) in mu.iter().zip([1.0, 1.0, 0.0, 0.0]) {
            assert!((got - want).abs() < 1e-9);
        }
        let d1 = SpectralData::<f64>::default_for(1, 2).unwrap();
        let mu = moment_map(1, &d1, &TimeVector::zeros(2)).unwrap();
        assert!((mu[0] - 0.5).abs() < 1e-12 && (mu[1] - 0.5).abs() < 1e-12);
    }

    #[test]
    fn grids() {
        let d = SpectralData::<f64>::default_for(2, 4).unwrap();
        let g = dominance_grid(2, &d, 0.0, (-1.0, 1.0), (0.0, 0.5), 0.5).unwrap();
        assert_eq!((g.columns, g.rows, g.points.len()), (5, 2, 10));
        assert_eq!((g.points[1].x, g.points[1].y), (-0.5, 0.0));
        assert_eq!((g.points[5].x, g.points[5].y), (-1.0, 0.5));
        assert!(matches!(
            dominance_grid(2, &d, 0.0, (-1e4, 1e4), (-1e4, 1e4), 1.0),
            Err(Error::Resource(_))
        ));
        assert!(dominance_grid(2, &d, 0.0, (1.0, -1.0), (0.0, 0.0), 1.0).is_err());
        let plus = d.with_signs(&[1; 4]).unwrap();
        let g = dominance_grid(2, &plus, -3.0, (-5.0, 5.0), (-5.0, 5.0), 0.5).unwrap();
        assert!(g.points.iter().all(|p| p.tau_sign == 1));
    }

    proptest! {
        #[test]
        fn tau_sign_is_projective(exps in proptest::collection::vec(-50.0f64..50.0, 1..8),
                                  signs in proptest::collection::vec(prop_oneof![Just(1i8), Just(-1i8)], 8),
                                  shift in -100.0f64..100.0) {
            let signs = &signs[..exps.len()];
            let a = signed_log_sum(&exps, signs);
            let shifted: Vec<f64> = exps.iter().map(|e| e + shift).collect();
            let b = signed_log_sum(&shifted, signs);
            // exact cancellation can depend on rounding; compare only clear-cut sums
            let direct: f64 = exps.iter().zip(signs).map(|(e, &s)| f64::from(s) * (e - 50.0).exp()).sum();
            if direct.abs() > 1e-9 * exps.iter().map(|e| (e - 50.0).exp()).sum::<f64>() {
                prop_assert_eq!(a.sign, b.sign);
                prop_assert_eq!(a.sign, if direct > 0.0 { 1 } else { -1 });
            }
        }

        #[test]
        fn moment_map_convex(k in 1usize..4, extra in 0usize..3, raw in proptest::collection::vec(-5.0f64..5.0, 6)) {
            let n = k + extra + 1;
            let d = SpectralData::<f64>::default_for(k, n).unwrap();
            let t = TimeVector::new(raw[..n - 1].to_vec()).unwrap();
            let mu = moment_map(k, &d, &t).unwrap();
            prop_assert!(mu.iter().all(|&m| (-1e-12..=1.0 + 1e-12).contains(&m)));
            prop_assert!((mu.iter().sum::<f64>() - k as f64).abs() < 1e-9);
        }
    }
}
