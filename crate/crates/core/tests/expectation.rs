use num_bigint::BigUint;
use num_traits::ToPrimitive;
use threshold_lab::expectation::*;
use threshold_lab::graph::{builtin_graph, canonical_form, pair_count, Graph};
use threshold_lab::oracles::Oracle;
use threshold_lab::random::estimate_pc;
use threshold_lab::Error;

fn b(name: &str) -> Graph {
    builtin_graph(name).unwrap()
}

fn binomial(n: u64, k: u64) -> f64 {
    (0..k).map(|i| (n - i) as f64 / (i + 1) as f64).product()
}

fn permutations(n: usize) -> Vec<Vec<usize>> {
    if n == 0 {
        return vec![vec![]];
    }
    let mut out = Vec::new();
    for p in permutations(n - 1) {
        for pos in 0..=p.len() {
            let mut q = p.clone();
            q.insert(pos, n - 1);
            out.push(q);
        }
    }
    out
}

fn isomorphic(a: &Graph, b: &Graph) -> bool {
    a.n() == b.n() && a.edge_count() == b.edge_count() && permutations(a.n()).iter().any(|p| a.relabel(p) == *b)
}

/// Subgraph of `f` on the edges in `mask`, isolated vertices dropped.
fn edge_subgraph(f: &Graph, mask: u32) -> Graph {
    let edges: Vec<_> = f.edges().iter().enumerate().filter(|(k, _)| mask >> k & 1 == 1).map(|(_, &e)| e).collect();
    let mut used: Vec<usize> = edges.iter().flat_map(|&(i, j)| [i, j]).collect();
    used.sort_unstable();
    used.dedup();
    let pos = |v: usize| used.iter().position(|&u| u == v).unwrap();
    Graph::from_edges(used.len(), edges.iter().map(|&(i, j)| (pos(i), pos(j)))).unwrap()
}

/// Labelled copies of `f` in `K_n`: injections divided by automorphisms,
/// both counted by brute force.
fn labelled_copies_brute(f: &Graph, n: usize) -> f64 {
    let aut = permutations(f.n()).iter().filter(|p| f.relabel(p) == *f).count();
    let injections: f64 = (0..f.n()).map(|i| (n - i) as f64).product();
    injections / aut as f64
}

#[test]
fn expected_copies_examples() {
    for n in [4usize, 10, 50] {
        for p in [0.01, 0.3, 0.9] {
            let got = expected_copies(&b("edge"), n, p).unwrap();
            assert!((got - binomial(n as u64, 2) * p).abs() < 1e-9 * got);
            let got = expected_copies(&b("triangle"), n, p).unwrap();
            assert!((got - binomial(n as u64, 3) * p.powi(3)).abs() < 1e-9 * got);
        }
    }
    let p: f64 = 0.4;
    let got = expected_copies(&b("matching_2"), 4, p).unwrap();
    assert!((got - 3.0 * p * p).abs() < 1e-12);
}

#[test]
fn triangle_pe_at_100() {
    let r = compute_pe(&b("triangle"), 100).unwrap();
    assert_eq!(r.inventory.len(), 3);
    assert_eq!(r.binding_entry().labelled_copies, BigUint::from(161_700u32));
    assert!((r.pe - 161_700f64.powf(-1.0 / 3.0)).abs() < 1e-12);
    assert!((r.pe - 0.01837).abs() < 5e-5);
    assert_eq!(canonical_form(r.binding_subgraph()).unwrap(), canonical_form(&b("triangle")).unwrap());
}

#[test]
fn h_tilde_binds_at_h() {
    // H binds from n = 7 on; below that a sparser 5-vertex subgraph does.
    for n in [7, 20, 100, 1000] {
        let r = compute_pe(&b("H_tilde"), n).unwrap();
        assert!(isomorphic(r.binding_subgraph(), &b("H")), "n = {n}");
        let h_copies = threshold_lab::graph::count_labelled_copies(&b("H"), n).unwrap();
        let expect = h_copies.to_f64().unwrap().powf(-0.2);
        assert!((r.pe - expect).abs() < 1e-12 * expect);
    }
}

#[test]
fn perfect_matching_pe_is_order_one_over_n() {
    for n in (10..=60).step_by(2) {
        let r = compute_pe(&b(&format!("matching_{}", n / 2)), n).unwrap();
        let scaled = n as f64 * r.pe;
        assert!((1.0..=4.0).contains(&scaled), "n = {n}: n pE = {scaled}");
    }
}

#[test]
fn edgeless_and_small_n_are_rejected() {
    assert!(matches!(compute_pe(&Graph::empty(3), 10), Err(Error::Degenerate(_))));
    assert!(compute_pe(&b("H"), 3).is_err());
}

#[test]
fn exponent_fit_examples() {
    let pts: Vec<(f64, f64)> = [50usize, 100, 200, 400, 800]
        .iter()
        .map(|&n| (n as f64, compute_pe(&b("H"), n).unwrap().pe))
        .collect();
    let fit = exponent_fit(&pts).unwrap();
    assert!((fit.slope + 0.8).abs() <= 0.01, "{fit:?}");

    let constant = [(10.0, 2.0), (20.0, 2.0), (40.0, 2.0)];
    assert!(exponent_fit(&constant).unwrap().slope.abs() < 1e-12);
    assert!(matches!(exponent_fit(&[(1.0, 1.0), (2.0, 0.0), (3.0, 1.0)]), Err(Error::Domain(_))));
    assert!(matches!(exponent_fit(&[(1.0, 1.0), (2.0, 1.0)]), Err(Error::Usage(_))));
}

#[test]
fn h_tilde_single_graph_exponent() {
    let e = single_graph_exponent(&b("H_tilde")).unwrap();
    assert_eq!((*e.numer(), *e.denom()), (-5, 6));
    let pts: Vec<(f64, f64)> = [1e3, 1e4, 1e5, 1e6]
        .iter()
        .map(|&n| (n, single_graph_threshold(&b("H_tilde"), n as usize).unwrap()))
        .collect();
    let fit = exponent_fit(&pts).unwrap();
    assert!((fit.slope + 5.0 / 6.0).abs() <= 0.01, "{fit:?}");
}

#[test]
fn definitional_minimum_agrees_with_closed_form() {
    let patterns = ["edge", "triangle", "path_3", "path_4", "path_5", "cycle_4", "cycle_5", "H", "matching_2"];
    for name in patterns {
        let f = b(name);
        assert!(f.edge_count() <= 5);
        for n in f.n()..=8 {
            let constraints: Vec<(f64, i32)> = (1u32..1 << f.edge_count())
                .map(|mask| {
                    let sub = edge_subgraph(&f, mask);
                    (labelled_copies_brute(&sub, n), sub.edge_count() as i32)
                })
                .collect();
            let feasible = |p: f64| constraints.iter().all(|&(c, e)| c * p.powi(e) >= 1.0);
            let (mut lo, mut hi) = (0.0f64, 1.0f64);
            for _ in 0..200 {
                let mid = 0.5 * (lo + hi);
                if feasible(mid) {
                    hi = mid;
                } else {
                    lo = mid;
                }
            }
            let pe = compute_pe(&f, n).unwrap().pe;
            assert!((hi - pe).abs() <= 1e-12, "{name}, n = {n}: search {hi} vs {pe}");
        }
    }
}

#[test]
fn binding_subgraph_has_unit_expectation() {
    for name in ["edge", "triangle", "path_4", "cycle_4", "H", "H_tilde", "complete_4", "matching_3"] {
        let f = b(name);
        for n in [f.n(), 10, 40, 300] {
            let r = compute_pe(&f, n).unwrap();
            let e = expected_copies(r.binding_subgraph(), n, r.pe).unwrap();
            assert!((e - 1.0).abs() <= 1e-9, "{name}, n = {n}: {e}");
            for entry in &r.inventory {
                let e = expected_copies(&entry.representative, n, r.pe).unwrap();
                assert!(e >= 1.0 - 1e-9, "{name}, n = {n}: constraint below 1");
                assert!(entry.binding_value <= r.pe);
            }
        }
    }
}

#[test]
fn h_inventory_matches_brute_force_classes() {
    let h = b("H");
    let mut classes: Vec<Graph> = Vec::new();
    for mask in 1u32..1 << h.edge_count() {
        let sub = edge_subgraph(&h, mask);
        if !classes.iter().any(|c| isomorphic(c, &sub)) {
            classes.push(sub);
        }
    }
    let r = compute_pe(&h, 10).unwrap();
    assert_eq!(r.inventory.len(), classes.len());
    for c in &classes {
        let matches = r.inventory.iter().filter(|e| isomorphic(&e.representative, c)).count();
        assert_eq!(matches, 1, "{c:?}");
    }
    for e in &r.inventory {
        let expect = labelled_copies_brute(&e.representative, 10);
        assert_eq!(e.labelled_copies.to_f64().unwrap(), expect);
    }
}

/// `P(contains f) <= E[#f']` for every `f' ⊆ f`, so at `p_c` the binding
/// subgraph has expectation at least 1/2 and `pE <= 2^(1/e) p_c`.
#[test]
fn expectation_threshold_lower_bound() {
    let builtins = [
        "edge", "triangle", "path_3", "path_4", "cycle_4", "cycle_5", "H", "H_tilde", "matching_2",
        "matching_3", "complete_4",
    ];
    for name in builtins {
        let f = b(name);
        let oracle = Oracle::contains(name, f.clone());
        for n in [20, 40] {
            let r = compute_pe(&f, n).unwrap();
            let pc = estimate_pc(&oracle, n, 1000, 5).unwrap();
            let factor = 2f64.powf(1.0 / r.binding_entry().edges as f64);
            assert!(r.pe <= factor * pc.ci_high, "{name}, n = {n}: pE {} vs p_c {pc:?}", r.pe);
        }
    }
}

/// Without the constant the inequality is false at finite n: for a single
/// edge `p_c = 1 - 2^(-1/C(n,2))`, which is about `ln 2 * pE`.
#[test]
fn lower_bound_needs_a_constant() {
    for n in [20usize, 40] {
        let m = pair_count(n) as f64;
        let pc = 1.0 - 0.5f64.powf(1.0 / m);
        let pe = compute_pe(&b("edge"), n).unwrap().pe;
        assert!((pe - 1.0 / m).abs() < 1e-15);
        assert!(pc < pe);
        assert!(pe <= 2.0 * pc);
    }
}
