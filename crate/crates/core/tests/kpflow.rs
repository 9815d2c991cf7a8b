use realgrass::incidence::{build_graph, EdgeKind, IncidenceGraph};
use realgrass::kpflow::{
    blowup_scan, cell_center, center_path, dominance_grid, dominant_cell, SpectralData, TimeVector, DEFAULT_RADIUS,
    DEFAULT_SAMPLES,
};
use realgrass::schubert::SchubertSymbol;
use realgrass::signs::{cell_sign, Coefficients};

fn sym(e: &[usize], n: usize) -> SchubertSymbol {
    SchubertSymbol::new(e, n).unwrap()
}

#[test]
fn straight_segments_blow_up_exactly_on_single_edges() {
    for (k, n) in [(1, 4), (2, 4), (1, 5), (2, 5), (3, 6)] {
        let data = SpectralData::<f64>::default_for(k, n).unwrap();
        let g = build_graph(k, n, Coefficients::Trivial).unwrap();
        assert_eq!(g.signs().signs(), data.epsilon());
        for e in g.edges() {
            let (a, b) = (&g.vertices()[e.from], &g.vertices()[e.to]);
            let path = center_path(&[a.clone(), b.clone()], &data, DEFAULT_RADIUS).unwrap();
            let crossings = blowup_scan(k, &data, &path, DEFAULT_SAMPLES).unwrap().len();
            let flips = cell_sign(a, g.signs()) * cell_sign(b, g.signs()) == -1;
            assert_eq!(crossings % 2 == 1, flips, "Gr({k},{n}) {a} -> {b}");
            assert_eq!(crossings % 2 == 1, e.kind == EdgeKind::Single);
            assert!(crossings <= 1);
        }
    }
}

/// Walk down from σ to the base cell through incoming edges, choosing the
/// first or last predecessor at each step.
fn monotone_chain(g: &IncidenceGraph, target: usize, take_last: bool) -> Vec<SchubertSymbol> {
    let mut chain = vec![target];
    let mut cur = target;
    while cur != 0 {
        let preds: Vec<usize> = g.edges().iter().filter(|e| e.to == cur).map(|e| e.from).collect();
        cur = if take_last { *preds.last().unwrap() } else { preds[0] };
        chain.push(cur);
    }
    chain.reverse();
    chain.into_iter().map(|i| g.vertices()[i].clone()).collect()
}

#[test]
fn cumulative_blowups_count_eta() {
    for (k, n) in [(1, 4), (2, 4), (2, 5), (3, 6)] {
        let data = SpectralData::<f64>::default_for(k, n).unwrap();
        let g = build_graph(k, n, Coefficients::Trivial).unwrap();
        for target in 1..g.vertices().len() {
            for take_last in [false, true] {
                let chain = monotone_chain(&g, target, take_last);
                let path = center_path(&chain, &data, DEFAULT_RADIUS).unwrap();
                let count = blowup_scan(k, &data, &path, 1024).unwrap().len();
                assert_eq!(count, g.eta()[target], "Gr({k},{n}) {chain:?}");
            }
        }
    }
}

/// Cells of `want` in the grid, and whether any touches the grid boundary.
fn region(k: usize, t3: f64, want: &SchubertSymbol) -> (Vec<(f64, f64)>, bool) {
    let data = SpectralData::<f64>::default_for(k, 4).unwrap();
    let r = 20.0;
    let g = dominance_grid(k, &data, t3, (-r, r), (-r, r), 0.5).unwrap();
    let pts: Vec<(f64, f64)> = g.points.iter().filter(|p| &p.cell == want).map(|p| (p.x, p.y)).collect();
    let touches = pts.iter().any(|&(x, y)| x.abs() == r || y.abs() == r);
    (pts, touches)
}

#[test]
fn bounded_regions_for_gr24() {
    let data = SpectralData::<f64>::default_for(2, 4).unwrap();
    for (t3, cell) in [(-5.0, [1, 3]), (5.0, [2, 4])] {
        let want = sym(&cell, 4);
        let (pts, touches) = region(2, t3, &want);
        assert!(!pts.is_empty(), "no {want} region at t3={t3}");
        assert!(!touches, "{want} region at t3={t3} is not bounded in the window");
        let cx = pts.iter().map(|p| p.0).sum::<f64>() / pts.len() as f64;
        let cy = pts.iter().map(|p| p.1).sum::<f64>() / pts.len() as f64;
        let t = TimeVector::from_xyt(4, cx, cy, t3).unwrap();
        assert_eq!(dominant_cell(2, &data, &t).unwrap().cell, want);
    }
    // the unbounded cells reach the window edge at t3 ≪ 0
    let (pts, touches) = region(2, -5.0, &sym(&[1, 2], 4));
    assert!(!pts.is_empty() && touches);
    // at the origin itself (1,2) wins, the (1,3) region sits off to the side
    let origin = TimeVector::from_xyt(4, 0.0, 0.0, -5.0).unwrap();
    assert_eq!(dominant_cell(2, &data, &origin).unwrap().cell, sym(&[1, 2], 4));
}

#[test]
fn centers_have_requested_margin() {
    let data = SpectralData::<f64>::default_for(2, 5).unwrap();
    let s = sym(&[2, 4], 5);
    let t = cell_center(&s, &data, 3.0).unwrap();
    assert_eq!(dominant_cell(2, &data, &t).unwrap().cell, s);
}
