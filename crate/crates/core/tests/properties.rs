use std::collections::BTreeMap;

use proptest::prelude::*;
use prym_locus::graph::*;
use prym_locus::homology::{anti_invariant_lattice, classify_edges, rank_formula, EdgeType};
use prym_locus::verify::{check_graph, CheckOptions};

#[derive(Clone, Copy, Debug)]
enum Slot {
    /// Invariant edge between two fixed vertices.
    Fixed(usize, usize),
    /// Exchanged pair `x -> y`, `i(x) -> i(y)`; vertices index the list
    /// of fixed vertices followed by `u_k`, `w_k` for each pair.
    Pair(usize, usize),
}

fn build(fixed: usize, pairs: usize, slots: &[Slot]) -> GraphDocument {
    let n = fixed + 2 * pairs;
    let name = |v: usize| {
        if v < fixed {
            format!("v{v}")
        } else {
            let k = (v - fixed) / 2;
            if (v - fixed).is_multiple_of(2) { format!("u{k}") } else { format!("w{k}") }
        }
    };
    let image = |v: usize| if v < fixed { v } else { fixed + ((v - fixed) ^ 1) };
    let mut vmap = BTreeMap::new();
    let vertices = (0..n)
        .map(|v| {
            vmap.insert(name(v), name(image(v)));
            VertexDoc { id: name(v), genus: Some((v % 2) as u32) }
        })
        .collect();
    let mut edges = Vec::new();
    let mut emap = BTreeMap::new();
    for (k, slot) in slots.iter().enumerate() {
        match *slot {
            Slot::Fixed(a, b) => {
                let id = format!("b{k}");
                edges.push(EdgeDoc { id: id.clone(), from: name(a % fixed), to: name(b % fixed) });
                emap.insert(id.clone(), id);
            }
            Slot::Pair(a, b) => {
                let (a, b) = (a % n, b % n);
                let (e, f) = (format!("e{k}"), format!("f{k}"));
                edges.push(EdgeDoc { id: e.clone(), from: name(a), to: name(b) });
                edges.push(EdgeDoc { id: f.clone(), from: name(image(a)), to: name(image(b)) });
                emap.insert(e.clone(), f.clone());
                emap.insert(f, e);
            }
        }
    }
    GraphDocument { vertices, edges, involution: InvolutionDoc { vertices: vmap, edges: emap } }
}

fn arb_graph() -> impl Strategy<Value = EquivariantGraph> {
    (0usize..=3, 0usize..=2)
        .prop_filter("non-empty", |&(f, p)| f + p > 0)
        .prop_flat_map(|(fixed, pairs)| {
            let slot = if fixed > 0 {
                prop_oneof![
                    (0usize..8, 0usize..8).prop_map(|(a, b)| Slot::Fixed(a, b)),
                    (0usize..8, 0usize..8).prop_map(|(a, b)| Slot::Pair(a, b)),
                ]
                .boxed()
            } else {
                (0usize..8, 0usize..8).prop_map(|(a, b)| Slot::Pair(a, b)).boxed()
            };
            (Just(fixed), Just(pairs), proptest::collection::vec(slot, 1..=5))
        })
        .prop_filter_map("invalid graph", |(fixed, pairs, slots)| {
            let g = EquivariantGraph::from_document(&build(fixed, pairs, &slots)).ok()?;
            validate(&g).ok.then_some(g)
        })
}

fn shuffled_names(prefix: &str, n: usize, seed: u64) -> Vec<String> {
    let mut order: Vec<usize> = (0..n).collect();
    let mut s = seed;
    for i in (1..n).rev() {
        s = s.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
        order.swap(i, (s >> 33) as usize % (i + 1));
    }
    order.into_iter().map(|k| format!("{prefix}{k}")).collect()
}

proptest! {
    #![proptest_config(ProptestConfig { cases: 128, ..ProptestConfig::default() })]

    #[test]
    fn auto_orient_is_idempotent_and_compatible(g in arb_graph()) {
        let once = auto_orient(&g);
        prop_assert!(once.is_compatibly_oriented());
        prop_assert_eq!(auto_orient(&once), once);
    }

    #[test]
    fn document_round_trip(g in arb_graph()) {
        prop_assert_eq!(parse_graph(&g.encode()).unwrap(), g.clone());
    }

    #[test]
    fn orbit_counts_are_half_the_two_cycles(g in arb_graph()) {
        let d = validate(&g).derived.unwrap();
        let moved_edges = (0..g.edge_count()).filter(|&e| !g.is_fixed_edge(e)).count();
        let moved_vertices = (0..g.vertex_count()).filter(|&v| !g.is_fixed_vertex(v)).count();
        prop_assert_eq!(2 * d.n_e, moved_edges);
        prop_assert_eq!(2 * d.c_e, moved_vertices);
    }

    #[test]
    fn lattice_rank_matches_formula(g in arb_graph()) {
        let lat = anti_invariant_lattice(&auto_orient(&g)).unwrap();
        prop_assert_eq!(lat.rank as i64, rank_formula(&g).unwrap());
    }

    #[test]
    fn fixed_edges_are_type_one(g in arb_graph()) {
        let o = auto_orient(&g);
        let lat = anti_invariant_lattice(&o).unwrap();
        for c in classify_edges(&lat, &o).unwrap() {
            if o.is_fixed_edge(c.orbit_rep) {
                prop_assert_eq!(c.edge_type, EdgeType::Vanishing);
            }
        }
    }

    #[test]
    fn every_consistency_check_passes(g in arb_graph()) {
        let r = check_graph(&g, &CheckOptions::default()).unwrap();
        prop_assert!(r.passed(), "failed {:?} on {}", r.failed_checks(), r.graph_encoding);
    }

    #[test]
    fn verdicts_survive_relabeling(g in arb_graph(), seed in any::<u64>()) {
        let vs = shuffled_names("x", g.vertex_count(), seed);
        let es = shuffled_names("y", g.edge_count(), seed ^ 0x9e37_79b9);
        let h = g.relabeled(&vs, &es).unwrap();
        let opts = CheckOptions::default();
        let (a, b) = (check_graph(&g, &opts).unwrap(), check_graph(&h, &opts).unwrap());
        prop_assert_eq!(
            (a.d, a.n_e, a.c_e, a.star, a.starstar, a.fs2, a.fs4, a.has_type2, a.has_loops),
            (b.d, b.n_e, b.c_e, b.star, b.starstar, b.fs2, b.fs4, b.has_type2, b.has_loops)
        );
    }
}
