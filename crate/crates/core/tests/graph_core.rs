use num_bigint::BigUint;
use proptest::prelude::*;
use threshold_lab::graph::{
    automorphism_count, builtin_graph, canonical_form, count_copies_in, count_labelled_copies,
    densest_subgraph, density, pair_count, Density, Graph,
};

fn b(name: &str) -> Graph {
    builtin_graph(name).unwrap()
}

fn graph_from_mask(n: usize, mask: u64) -> Graph {
    let pairs = (0..n).flat_map(|i| (i + 1..n).map(move |j| (i, j)));
    let edges: Vec<_> = pairs.enumerate().filter(|(k, _)| mask >> k & 1 == 1).map(|(_, e)| e).collect();
    Graph::from_edges(n, edges).unwrap()
}

fn arb_graph(max_n: usize) -> impl Strategy<Value = Graph> {
    (1..=max_n).prop_flat_map(|n| {
        let m = pair_count(n) as u32;
        (Just(n), 0u64..(1u64 << m)).prop_map(|(n, mask)| graph_from_mask(n, mask))
    })
}

fn arb_perm(n: usize) -> impl Strategy<Value = Vec<usize>> {
    Just((0..n).collect::<Vec<_>>()).prop_shuffle()
}

/// Every injection `V(f) -> [n]` that maps edges onto edges of `g`.
fn edge_preserving_injections(f: &Graph, g: &Graph) -> u64 {
    fn go(f: &Graph, g: &Graph, v: usize, image: &mut Vec<usize>) -> u64 {
        if v == f.n() {
            let ok = f.edges().iter().all(|&(a, b)| g.has_edge(image[a], image[b]));
            return ok as u64;
        }
        let mut total = 0;
        for w in 0..g.n() {
            if !image.contains(&w) {
                image.push(w);
                total += go(f, g, v + 1, image);
                image.pop();
            }
        }
        total
    }
    go(f, g, 0, &mut Vec::new())
}

#[test]
fn density_examples() {
    assert_eq!(density(&b("triangle")).unwrap(), Density::new(3, 3).unwrap());
    assert_eq!(density(&b("H")).unwrap(), Density::new(5, 4).unwrap());
    assert_eq!(density(&b("edge")).unwrap(), Density::new(1, 2).unwrap());
    assert!(density(&Graph::empty(0)).is_err());
}

#[test]
fn densest_subgraph_examples() {
    let (vs, d) = densest_subgraph(&b("H_tilde")).unwrap();
    assert_eq!(vs, vec![0, 1, 2, 3]);
    assert_eq!(d, Density::new(5, 4).unwrap());
    let (vs, d) = densest_subgraph(&b("triangle")).unwrap();
    assert_eq!((vs.len(), d), (3, Density::new(1, 1).unwrap()));
    let (vs, d) = densest_subgraph(&b("path_3")).unwrap();
    assert_eq!((vs.len(), d), (3, Density::new(2, 3).unwrap()));
}

#[test]
fn automorphism_examples() {
    assert_eq!(automorphism_count(&b("edge")).unwrap(), 2);
    assert_eq!(automorphism_count(&b("triangle")).unwrap(), 6);
    assert_eq!(automorphism_count(&b("H")).unwrap(), 4);
    assert_eq!(automorphism_count(&b("petersen")).unwrap(), 120);
}

#[test]
fn labelled_copy_examples() {
    for n in 3..30u64 {
        let c3 = BigUint::from(n * (n - 1) * (n - 2) / 6);
        assert_eq!(count_labelled_copies(&b("triangle"), n as usize).unwrap(), c3);
        let c2 = BigUint::from(n * (n - 1) / 2);
        assert_eq!(count_labelled_copies(&b("edge"), n as usize).unwrap(), c2);
    }
    assert_eq!(count_labelled_copies(&b("H"), 4).unwrap(), BigUint::from(6u32));
}

#[test]
fn copies_in_examples() {
    assert_eq!(count_copies_in(&b("triangle"), &Graph::empty(5)).unwrap(), 0);
    assert_eq!(count_copies_in(&b("triangle"), &Graph::complete(4)).unwrap(), 4);
    assert_eq!(count_copies_in(&b("H"), &b("H_tilde")).unwrap(), 1);
}

#[test]
fn builtin_examples() {
    let h = b("H");
    assert_eq!((h.n(), h.edge_count()), (4, 5));
    let ht = b("H_tilde");
    assert_eq!((ht.n(), ht.edge_count()), (5, 6));
    assert_eq!(b("complete_3"), b("triangle"));
}

#[test]
fn copy_count_paths_agree_in_complete_graphs() {
    for name in ["edge", "triangle", "H"] {
        let f = b(name);
        for n in f.n()..=7 {
            let labelled = count_labelled_copies(&f, n).unwrap();
            let in_kn = count_copies_in(&f, &Graph::complete(n)).unwrap();
            assert_eq!(labelled, BigUint::from(in_kn), "{name} in K_{n}");
        }
    }
}

#[test]
fn labelled_copies_times_aut_counts_injections() {
    let patterns = ["edge", "triangle", "path_3", "path_4", "cycle_4", "H", "matching_2"];
    for name in patterns {
        let f = b(name);
        let aut = automorphism_count(&f).unwrap();
        for n in f.n()..=7 {
            let inj = edge_preserving_injections(&f, &Graph::complete(n));
            let labelled = count_labelled_copies(&f, n).unwrap();
            assert_eq!(labelled * aut, BigUint::from(inj), "{name}, n = {n}");
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn densest_beats_every_vertex_subset(g in arb_graph(7)) {
        let (_, best) = densest_subgraph(&g).unwrap();
        for mask in 1u64..1 << g.n() {
            let sub = g.induced(mask);
            let d = Density::new(sub.edge_count() as u64, mask.count_ones() as u64).unwrap();
            prop_assert!(best >= d);
        }
    }

    #[test]
    fn density_and_canonical_form_are_label_invariant(
        (g, perm) in arb_graph(7).prop_flat_map(|g| { let n = g.n(); (Just(g), arb_perm(n)) })
    ) {
        let h = g.relabel(&perm);
        prop_assert_eq!(density(&g).unwrap(), density(&h).unwrap());
        prop_assert_eq!(canonical_form(&g).unwrap(), canonical_form(&h).unwrap());
        prop_assert_eq!(automorphism_count(&g).unwrap(), automorphism_count(&h).unwrap());
        prop_assert_eq!(densest_subgraph(&g).unwrap().1, densest_subgraph(&h).unwrap().1);
    }

    #[test]
    fn text_format_roundtrips(g in arb_graph(8)) {
        prop_assert_eq!(Graph::parse(&g.to_text()).unwrap(), g);
    }

    #[test]
    fn copies_in_matches_injection_count(g in arb_graph(6)) {
        for name in ["edge", "triangle", "path_3", "H"] {
            let f = b(name);
            if f.n() > g.n() {
                continue;
            }
            let aut = automorphism_count(&f).unwrap();
            let inj = edge_preserving_injections(&f, &g);
            prop_assert_eq!(count_copies_in(&f, &g).unwrap() * aut, inj);
        }
    }

    #[test]
    fn canonical_form_separates_non_isomorphic(a in arb_graph(5), b2 in arb_graph(5)) {
        // Brute-force isomorphism over all relabellings.
        let iso = a.n() == b2.n() && {
            let n = a.n();
            let mut perm: Vec<usize> = (0..n).collect();
            let mut found = false;
            loop {
                if a.relabel(&perm) == b2 {
                    found = true;
                    break;
                }
                let Some(i) = (1..n).rev().find(|&i| perm[i - 1] < perm[i]) else { break };
                let j = (i..n).rev().find(|&j| perm[j] > perm[i - 1]).unwrap();
                perm.swap(i - 1, j);
                perm[i..].reverse();
            }
            found
        };
        prop_assert_eq!(canonical_form(&a).unwrap() == canonical_form(&b2).unwrap(), iso);
    }
}
