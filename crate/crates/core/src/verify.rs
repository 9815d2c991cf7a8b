//! The full invariant suite behind `realgrass verify`. Each check returns a
//! one-line summary on success and a description of the first mismatch on
//! failure; library errors count as failures.

use std::fmt;

use num_bigint::BigInt;
use num_traits::ToPrimitive;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::fqcount::{
    grass_points_closed, isotropic_zero_count, oracle_count, so_order, sphere_points, verify_p_relation, CountSource,
    PrimePower,
};
use crate::homology::{betti_polynomial, cohomology, AbelianGroup};
use crate::incidence::{
    build_graph, eta_closed_form, solve_coboundary_signs, solve_coboundary_signs_with, EdgeKind, FreeSigns,
};
use crate::kpflow::{blowup_scan, center_path, dominance_grid, SpectralData, DEFAULT_RADIUS, DEFAULT_SAMPLES};
use crate::qpoly::{check_recursions, euler_char, p_from_graph, p_poly, p_star_poly, poincare, poincare_twisted};
use crate::schubert::{SchubertSymbol, MAX_N};
use crate::signs::{toda_edge_graph, Coefficients};

pub const DEFAULT_MAX_N: usize = 8;

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CheckOutcome {
    pub name: &'static str,
    pub passed: bool,
    pub detail: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct VerifyReport {
    pub max_n: usize,
    pub checks: Vec<CheckOutcome>,
}

impl VerifyReport {
    pub fn all_passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }
}

impl fmt::Display for VerifyReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for c in &self.checks {
            let verdict = if c.passed { "PASS" } else { "FAIL" };
            writeln!(f, "{verdict} {}: {}", c.name, c.detail)?;
        }
        Ok(())
    }
}

type Check = fn(usize) -> std::result::Result<String, String>;

const CHECKS: &[(&str, Check)] = &[
    ("published-tables", published_tables),
    ("square-zero", square_zero),
    ("sign-solution-independence", sign_solution_independence),
    ("graph-equivalence", graph_equivalence),
    ("betti-vs-poincare", betti_vs_poincare),
    ("graph-sums", graph_sums),
    ("recursions", recursions),
    ("euler-characteristic", euler_characteristic),
    ("eta-closed-form", eta_agreement),
    ("orientability", orientability),
    ("fq-oracle", fq_oracle),
    ("fq-auxiliary", fq_auxiliary),
    ("p-relation", p_relation),
    ("kp-blowups", kp_blowups),
    ("kp-dominance-regions", kp_regions),
];

/// Run every check with ambient dimension bounded by `max_n`. Checks whose
/// cost grows quickly carry their own tighter caps.
pub fn run_suite(max_n: usize) -> Result<VerifyReport> {
    if !(2..=MAX_N).contains(&max_n) {
        return Err(Error::Argument(format!("max-n must lie in 2..={MAX_N}, got {max_n}")));
    }
    let checks = CHECKS
        .iter()
        .map(|&(name, check)| {
            log::info!("running {name}");
            let (passed, detail) = match check(max_n) {
                Ok(d) => (true, d),
                Err(d) => (false, d),
            };
            CheckOutcome { name, passed, detail }
        })
        .collect();
    Ok(VerifyReport { max_n, checks })
}

fn lib<T>(r: Result<T>) -> std::result::Result<T, String> {
    r.map_err(|e| e.to_string())
}

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> std::result::Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn pairs(max_n: usize) -> impl Iterator<Item = (usize, usize)> {
    (2..=max_n).flat_map(|n| (1..n).map(move |k| (k, n)))
}

const BOTH: [Coefficients; 2] = [Coefficients::Trivial, Coefficients::Twisted];

fn groups(k: usize, n: usize, c: Coefficients) -> std::result::Result<Vec<AbelianGroup>, String> {
    let g = lib(build_graph(k, n, c))?;
    Ok(lib(cohomology(&lib(solve_coboundary_signs(&g))?))?.groups)
}

/// H^*(RP^{n−1}; ℤ): ℤ, then ℤ₂ in even and 0 in odd degrees, with ℤ on top
/// when n − 1 is odd.
pub fn projective_space_pattern(n: usize) -> Vec<AbelianGroup> {
    let top = n - 1;
    (0..=top)
        .map(|d| {
            if d == 0 || (d == top && d % 2 == 1) {
                AbelianGroup::free(1)
            } else if d % 2 == 0 {
                AbelianGroup::new(0, vec![2])
            } else {
                AbelianGroup::trivial()
            }
        })
        .collect()
}

fn published_tables(max_n: usize) -> std::result::Result<String, String> {
    let z = AbelianGroup::free(1);
    let z2 = |c: usize| AbelianGroup::new(0, vec![2; c]);
    let o = AbelianGroup::trivial();
    let mut cases: Vec<(usize, usize, Coefficients, Vec<AbelianGroup>)> = vec![(
        2,
        4,
        Coefficients::Trivial,
        vec![z.clone(), o.clone(), z2(1), z2(1), z.clone()],
    )];
    if max_n >= 5 {
        cases.push((
            2,
            5,
            Coefficients::Twisted,
            vec![o.clone(), z2(1), z.clone(), z2(1), z2(1), z2(1), z.clone()],
        ));
    }
    if max_n >= 6 {
        let h4 = AbelianGroup::new(1, vec![2, 2]);
        cases.push((
            3,
            6,
            Coefficients::Trivial,
            vec![z.clone(), o.clone(), z2(1), z2(1), h4, z.clone(), z2(2), z2(1), z2(1), z],
        ));
    }
    for n in 2..=max_n.max(2).min(9) {
        cases.push((1, n, Coefficients::Trivial, projective_space_pattern(n)));
    }
    for (k, n, c, want) in &cases {
        let got = groups(*k, *n, *c)?;
        ensure(&got == want, || format!("Gr({k},{n}) {c}: got {got:?}, want {want:?}"))?;
    }
    Ok(format!("{} tables reproduced", cases.len()))
}

fn square_zero(max_n: usize) -> std::result::Result<String, String> {
    let mut count = 0;
    for (k, n) in pairs(max_n) {
        for c in BOTH {
            let g = lib(build_graph(k, n, c))?;
            for free in [FreeSigns::Positive, FreeSigns::Negative] {
                lib(lib(solve_coboundary_signs_with(&g, free))?.check_square_zero())?;
                count += 1;
            }
        }
    }
    Ok(format!("{count} complexes with δ∘δ = 0"))
}

fn sign_solution_independence(max_n: usize) -> std::result::Result<String, String> {
    let mut count = 0;
    for (k, n) in pairs(max_n.min(7)) {
        for c in BOTH {
            let g = lib(build_graph(k, n, c))?;
            let a = lib(cohomology(&lib(solve_coboundary_signs_with(&g, FreeSigns::Positive))?))?;
            let b = lib(cohomology(&lib(solve_coboundary_signs_with(&g, FreeSigns::Negative))?))?;
            ensure(a == b, || format!("Gr({k},{n}) {c}: tables differ between sign solutions"))?;
            count += 1;
        }
    }
    Ok(format!("{count} tables independent of free signs"))
}

fn graph_equivalence(max_n: usize) -> std::result::Result<String, String> {
    let mut count = 0;
    for (k, n) in pairs(max_n.min(7)) {
        for c in BOTH {
            let g = lib(build_graph(k, n, c))?;
            let mut incidence: Vec<_> = g.double_edges().map(|e| g.bruhat_edge(e)).collect();
            let mut toda = lib(toda_edge_graph(k, n, c))?;
            incidence.sort_by(|a, b| (&a.from, &a.to).cmp(&(&b.from, &b.to)));
            toda.sort_by(|a, b| (&a.from, &a.to).cmp(&(&b.from, &b.to)));
            ensure(incidence == toda, || format!("Gr({k},{n}) {c}: double edges differ"))?;
            count += 1;
        }
    }
    Ok(format!("{count} graph pairs equal"))
}

fn betti_vs_poincare(max_n: usize) -> std::result::Result<String, String> {
    let mut count = 0;
    for (k, n) in pairs(max_n) {
        for c in BOTH {
            let g = lib(build_graph(k, n, c))?;
            let t = lib(cohomology(&lib(solve_coboundary_signs(&g))?))?;
            let want = match c {
                Coefficients::Trivial => lib(poincare(k, n))?,
                Coefficients::Twisted => lib(poincare_twisted(k, n))?,
            };
            let got = betti_polynomial(&t);
            ensure(got == want, || format!("Gr({k},{n}) {c}: Betti {got} vs closed {want}"))?;
            count += 1;
        }
    }
    Ok(format!("{count} Betti polynomials match"))
}

fn graph_sums(max_n: usize) -> std::result::Result<String, String> {
    let mut count = 0;
    for (k, n) in pairs((max_n + 2).min(10)) {
        let got = p_from_graph(&lib(build_graph(k, n, Coefficients::Trivial))?);
        let want = lib(p_poly(k, n))?;
        ensure(got == want, || format!("p_({k},{n}): graph {got} vs closed {want}"))?;
        count += 1;
        if n % 2 == 1 {
            let got = p_from_graph(&lib(build_graph(k, n, Coefficients::Twisted))?);
            let want = lib(p_star_poly(k, n))?;
            ensure(got == want, || format!("p*_({k},{n}): graph {got} vs closed {want}"))?;
            count += 1;
        }
    }
    Ok(format!("{count} graph sums match"))
}

fn recursions(max_n: usize) -> std::result::Result<String, String> {
    let report = lib(check_recursions(max_n.min(8)))?;
    match report.failures().first() {
        Some(f) => Err(format!("identity ({}) fails at j={} m={}", f.identity, f.j, f.m)),
        None => Ok(format!("{} instances of 8 identities", report.checks.len())),
    }
}

fn euler_characteristic(max_n: usize) -> std::result::Result<String, String> {
    ensure(lib(euler_char(2, 4))? == 2, || "χ(Gr(2,4)) != 2".into())?;
    if max_n >= 6 {
        ensure(lib(euler_char(3, 6))? == 0, || "χ(Gr(3,6)) != 0".into())?;
    }
    let mut count = 0;
    for (k, n) in pairs(max_n) {
        let chi = lib(euler_char(k, n))?;
        let table = lib(cohomology(&lib(solve_coboundary_signs(&lib(build_graph(
            k,
            n,
            Coefficients::Trivial,
        ))?))?))?;
        let got = table.euler_characteristic();
        ensure(got == chi, || format!("Gr({k},{n}): table gives χ = {got}, closed {chi}"))?;
        count += 1;
    }
    Ok(format!("{count} Euler characteristics agree with P(−1)"))
}

fn eta_agreement(max_n: usize) -> std::result::Result<String, String> {
    let g = lib(build_graph(1, 4, Coefficients::Trivial))?;
    ensure(g.eta() == [0, 1, 1, 2], || format!("η on Gr(1,4) is {:?}", g.eta()))?;
    let mut count = 0;
    for (k, n) in pairs((max_n + 2).min(10)) {
        for c in BOTH {
            let g = lib(build_graph(k, n, c))?;
            let parity = g.signs().parity();
            for (s, &h) in g.vertices().iter().zip(g.eta()) {
                let closed = eta_closed_form(s, parity);
                ensure(closed == h, || format!("Gr({k},{n}) {c} {s}: sweep {h}, closed {closed}"))?;
                count += 1;
            }
        }
    }
    Ok(format!("{count} η values agree"))
}

fn orientability(max_n: usize) -> std::result::Result<String, String> {
    let mut count = 0;
    for (k, n) in pairs(max_n) {
        let g = groups(k, n, Coefficients::Trivial)?;
        let top = g.last().expect("nonempty table").rank;
        ensure((top == 1) == (n % 2 == 0), || format!("Gr({k},{n}): top rank {top}"))?;
        count += 1;
    }
    Ok(format!("{count} top-degree ranks follow the parity of n"))
}

fn closed_at(k: usize, n: usize, q: u32) -> std::result::Result<BigInt, String> {
    Ok(lib(grass_points_closed(k, n))?.eval(&BigInt::from(q)))
}

fn fq_oracle(max_n: usize) -> std::result::Result<String, String> {
    let mut count = 0;
    for q in [5, 13] {
        let pp = lib(PrimePower::new(q))?;
        for (k, n) in pairs(max_n.min(5)) {
            let o = lib(oracle_count(k, n, &pp))?;
            ensure(o.matches, || format!("Gr({k},{n}) over F_{q}: oracle {} vs closed {}", o.count, o.closed))?;
            count += 1;
        }
    }
    let pp = lib(PrimePower::new(5))?;
    for (k, n, want) in [(1, 2, 4), (1, 3, 25), (2, 4, 650)] {
        if n <= max_n {
            let o = lib(oracle_count(k, n, &pp))?;
            ensure(o.count == want, || format!("Gr({k},{n}) over F_5: {} != {want}", o.count))?;
        }
    }
    Ok(format!("{count} exhaustive counts match the closed form"))
}

fn fq_auxiliary(max_n: usize) -> std::result::Result<String, String> {
    let pp = lib(PrimePower::new(5))?;
    let q = 5u32;
    let value = |p: &crate::IntPolynomial| p.eval(&BigInt::from(q)).to_u64().unwrap_or(u64::MAX);
    let counts = |vars: usize| -> Vec<u64> {
        // histogram of Σ x_i² over 𝔽_q^vars
        let mut hist = vec![0u64; q as usize];
        hist[0] = 1;
        for _ in 0..vars {
            let mut next = vec![0u64; q as usize];
            for (s, &c) in hist.iter().enumerate() {
                for x in 0..q as usize {
                    next[(s + x * x) % q as usize] += c;
                }
            }
            hist = next;
        }
        hist
    };
    debug_assert_eq!(pp.exponent, 1);
    for n in 0..=4 {
        let got = counts(n + 1)[1];
        let want = value(&sphere_points(n));
        ensure(got == want, || format!("|S^{n}(F_5)|: counted {got}, closed {want}"))?;
    }
    for n in 1..=5 {
        let got = counts(n)[0];
        let want = value(&lib(isotropic_zero_count(n))?);
        ensure(got == want, || format!("isotropic count n={n}: counted {got}, closed {want}"))?;
    }
    for n in 2..=(max_n + 1).min(9) {
        lib(so_order(n))?;
    }
    Ok("sphere, isotropic and SO_n formulas confirmed".into())
}

fn p_relation(max_n: usize) -> std::result::Result<String, String> {
    let mut count = 0;
    let mut fallbacks = 0;
    for q in [5, 13] {
        let pp = lib(PrimePower::new(q))?;
        for (k, n) in pairs(max_n.min(6)) {
            let r = lib(verify_p_relation(k, n, &pp))?;
            ensure(r.holds, || format!("Gr({k},{n}) over F_{q}: {} vs {}", r.count, r.predicted))?;
            match r.source {
                CountSource::Oracle => {
                    let closed = closed_at(k, n, q)?;
                    ensure(BigInt::from(r.count) == closed, || {
                        format!("Gr({k},{n}) over F_{q}: oracle {} vs closed {closed}", r.count)
                    })?;
                }
                CountSource::ClosedForm => fallbacks += 1,
            }
            count += 1;
        }
    }
    Ok(format!("{count} cases hold, {fallbacks} over the oracle budget used the closed count"))
}

fn kp_blowups(max_n: usize) -> std::result::Result<String, String> {
    let mut count = 0;
    if max_n >= 4 {
        let data = lib(SpectralData::<f64>::default_for(1, 4))?;
        let cells: Vec<SchubertSymbol> = (1..=4).map(|i| SchubertSymbol::new(&[i], 4)).collect::<Result<_>>().map_err(|e| e.to_string())?;
        let path = lib(center_path(&cells, &data, DEFAULT_RADIUS))?;
        let ev = lib(blowup_scan(1, &data, &path, DEFAULT_SAMPLES))?;
        let segs: Vec<usize> = ev.iter().map(|e| e.segment).collect();
        ensure(segs == [0, 2], || format!("Gr(1,4) path crosses on segments {segs:?}"))?;
        let plus = lib(data.with_signs(&[1; 4]))?;
        ensure(lib(blowup_scan(1, &plus, &path, DEFAULT_SAMPLES))?.is_empty(), || {
            "all-plus signs blow up on Gr(1,4)".into()
        })?;
    }
    for (k, n) in [(1, 4), (2, 4), (1, 5), (2, 5)] {
        if n > max_n {
            continue;
        }
        let data = lib(SpectralData::<f64>::default_for(k, n))?;
        let plus = lib(data.clone().with_signs(&vec![1; n]))?;
        let g = lib(build_graph(k, n, Coefficients::Trivial))?;
        for e in g.edges() {
            let ends = [g.vertices()[e.from].clone(), g.vertices()[e.to].clone()];
            let path = lib(center_path(&ends, &data, DEFAULT_RADIUS))?;
            let crossings = lib(blowup_scan(k, &data, &path, DEFAULT_SAMPLES))?.len();
            ensure((crossings % 2 == 1) == (e.kind == EdgeKind::Single), || {
                format!("Gr({k},{n}) {} -> {}: {crossings} crossings on a {:?} edge", ends[0], ends[1], e.kind)
            })?;
            ensure(lib(blowup_scan(k, &plus, &path, MIN_PLUS_SAMPLES))?.is_empty(), || {
                format!("all-plus signs blow up on Gr({k},{n})")
            })?;
            count += 1;
        }
    }
    Ok(format!("{count} edges with crossing parity equal to the edge tag"))
}

const MIN_PLUS_SAMPLES: usize = 512;

fn kp_regions(max_n: usize) -> std::result::Result<String, String> {
    if max_n < 4 {
        return Ok("skipped below n = 4".into());
    }
    let data = lib(SpectralData::<f64>::default_for(2, 4))?;
    let r = 20.0;
    for (t3, cell) in [(-5.0, [1, 3]), (5.0, [2, 4])] {
        let want = lib(SchubertSymbol::new(&cell, 4))?;
        let grid = lib(dominance_grid(2, &data, t3, (-r, r), (-r, r), 0.5))?;
        let region: Vec<_> = grid.points.iter().filter(|p| p.cell == want).collect();
        ensure(!region.is_empty(), || format!("no {want} region at t3 = {t3}"))?;
        ensure(region.iter().all(|p| p.x.abs() < r && p.y.abs() < r), || {
            format!("{want} region at t3 = {t3} reaches the window edge")
        })?;
    }
    Ok("bounded (1,3) region at t3 = -5 and (2,4) region at t3 = 5".into())
}
