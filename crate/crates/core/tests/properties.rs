use std::collections::BTreeSet;
use std::sync::OnceLock;

use parpart_core::bag::{family_bag_scan, forms_bag, window_bag_scan};
use parpart_core::decomp::{initial_decomposition, repair_decomposition};
use parpart_core::hampower::{power_defects, power_neighbors, repair_ham_power};
use parpart_core::rational::{frac, int};
use parpart_core::subsets::{are_close, build_triple_system, Reduction};
use parpart_core::synth::{gen_dense, gen_sparse_pair};
use parpart_core::verify::{check_conditions, verify_bag_free_family, verify_bag_free_windows, verify_decomposition, verify_ham_power};
use parpart_core::{CyclicOrder, Graph, KSubsetUniverse, Parpartition, Threshold};
use proptest::prelude::*;

fn graph_from_bits(m: usize, bits: &[bool]) -> Graph {
    let mut edges = Vec::new();
    let mut it = bits.iter();
    for u in 0..m {
        for v in u + 1..m {
            if *it.next().unwrap_or(&false) {
                edges.push((u, v));
            }
        }
    }
    Graph::from_edges(m, edges).unwrap()
}

fn arb_graph(max_m: usize, density: f64) -> impl Strategy<Value = Graph> {
    (2..=max_m).prop_flat_map(move |m| {
        proptest::collection::vec(proptest::bool::weighted(density), m * (m - 1) / 2)
            .prop_map(move |bits| graph_from_bits(m, &bits))
    })
}

fn brute_bag(a: &[usize], b: &[usize], g2: &Graph, g3: &Graph) -> bool {
    let crossing = |g: &Graph| -> Vec<(usize, usize)> {
        a.iter().flat_map(|&x| b.iter().map(move |&y| (x, y))).filter(|&(x, y)| g.has_edge(x, y)).collect()
    };
    let (c2, c3) = (crossing(g2), crossing(g3));
    c2.iter().any(|&(x, y)| c3.iter().any(|&(s, t)| s != x && t != y))
}

/// Two disjoint blocks of size `l` plus the three graphs on `m` vertices.
fn arb_bag_instance() -> impl Strategy<Value = (Vec<usize>, Vec<usize>, Graph, Graph)> {
    (4usize..=12, 1usize..=3).prop_flat_map(|(m, l)| {
        let l = l.min(m / 2);
        let pairs = m * (m - 1) / 2;
        (
            Just(l),
            Just((0..m).collect::<Vec<_>>()).prop_shuffle(),
            proptest::collection::vec(proptest::bool::weighted(0.3), pairs),
            proptest::collection::vec(proptest::bool::weighted(0.3), pairs),
        )
            .prop_map(move |(l, perm, b2, b3)| {
                let mut a = perm[..l].to_vec();
                let mut b = perm[l..2 * l].to_vec();
                a.sort_unstable();
                b.sort_unstable();
                (a, b, graph_from_bits(m, &b2), graph_from_bits(m, &b3))
            })
    })
}

fn half() -> Threshold {
    Threshold::from_parts(1, 2).unwrap()
}

fn nine_three() -> &'static Reduction {
    static R: OnceLock<Reduction> = OnceLock::new();
    R.get_or_init(|| build_triple_system(9, 3, half(), half()).unwrap())
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(128))]

    #[test]
    fn is_clique_matches_pairwise_check(g in arb_graph(12, 0.6), picks in proptest::collection::vec(0usize..12, 0..=8)) {
        let m = g.vertex_count();
        let set: Vec<usize> = picks.into_iter().map(|v| v % m).collect::<BTreeSet<_>>().into_iter().collect();
        let brute = set.iter().enumerate().all(|(i, &x)| set[i + 1..].iter().all(|&y| g.has_edge(x, y)));
        prop_assert_eq!(g.is_clique(&set).unwrap(), brute);
    }

    #[test]
    fn degree_sum_is_twice_edge_count(g in arb_graph(16, 0.4)) {
        let total: usize = (0..g.vertex_count()).map(|v| g.degree(v)).sum();
        prop_assert_eq!(total, 2 * g.edge_count());
        prop_assert_eq!(g.edges().len(), g.edge_count());
    }

    #[test]
    fn forms_bag_matches_brute_force((a, b, g2, g3) in arb_bag_instance()) {
        let fast = forms_bag(&a, &b, &g2, &g3).unwrap();
        prop_assert_eq!(fast.is_some(), brute_bag(&a, &b, &g2, &g3));
        if let Some(w) = fast {
            prop_assert!(g2.has_edge(w.e2.0, w.e2.1) && g3.has_edge(w.e3.0, w.e3.1));
            let ends = [w.e2.0, w.e2.1, w.e3.0, w.e3.1];
            prop_assert_eq!(ends.iter().collect::<BTreeSet<_>>().len(), 4);
        }
    }

    #[test]
    fn forms_bag_is_symmetric((a, b, g2, g3) in arb_bag_instance()) {
        prop_assert_eq!(
            forms_bag(&a, &b, &g2, &g3).unwrap().is_some(),
            forms_bag(&b, &a, &g2, &g3).unwrap().is_some()
        );
    }

    #[test]
    fn forms_bag_is_monotone((a, b, g2, g3) in arb_bag_instance(), extra in proptest::collection::vec((0usize..12, 0usize..12, any::<bool>()), 1..6)) {
        let before = forms_bag(&a, &b, &g2, &g3).unwrap().is_some();
        let (mut h2, mut h3) = (g2.clone(), g3.clone());
        let m = g2.vertex_count();
        for (u, v, which) in extra {
            let (u, v) = (u % m, v % m);
            if u != v {
                let target = if which { &mut h2 } else { &mut h3 };
                target.add_edge(u, v).unwrap();
            }
        }
        let after = forms_bag(&a, &b, &h2, &h3).unwrap().is_some();
        prop_assert!(!before || after);
    }

    #[test]
    fn rank_round_trips(n in 2usize..=14, k_seed in 1usize..14, id_seed in any::<u64>()) {
        let k = 1 + k_seed % (n - 1);
        let u = KSubsetUniverse::new(n, k).unwrap();
        let id = (id_seed % u.size() as u64) as usize;
        let s = u.unrank(id).unwrap();
        prop_assert_eq!(s.len(), k);
        prop_assert!(s.windows(2).all(|w| w[0] < w[1]) && s.iter().all(|&x| x < n));
        prop_assert_eq!(u.rank(&s).unwrap(), id);
    }

    #[test]
    fn closeness_matches_bag_on_disjoint_parpartitions(
        p in Just((0..9).collect::<Vec<usize>>()).prop_shuffle(),
        q in Just((0..9).collect::<Vec<usize>>()).prop_shuffle(),
    ) {
        let r = nine_three();
        let block = |v: &[usize]| { let mut b = v.to_vec(); b.sort_unstable(); b };
        let p1 = Parpartition::new(vec![block(&p[0..3]), block(&p[3..6])]).unwrap();
        let p2 = Parpartition::new(vec![block(&q[0..3]), block(&q[3..6])]).unwrap();
        prop_assume!(p1.blocks().iter().all(|b| !p2.blocks().contains(b)));
        let ids = |pp: &Parpartition| pp.blocks().iter().map(|b| r.universe.rank(b).unwrap()).collect::<Vec<_>>();
        let close = are_close(&p1, &p2, half(), half()).unwrap().is_some();
        let bag = forms_bag(&ids(&p1), &ids(&p2), r.system.g2(), r.system.g3()).unwrap().is_some();
        prop_assert_eq!(close, bag);
    }

    #[test]
    fn scans_agree_with_verifier(g1 in arb_graph(14, 0.9), seed in any::<u64>(), l in 2usize..=3) {
        let m = g1.vertex_count();
        prop_assume!(m >= 2 * l);
        let (g2, g3) = match gen_sparse_pair(2, 2, &g1, seed) {
            Ok(p) => p,
            Err(_) => return Ok(()),
        };
        let blocks = initial_decomposition(m, l).unwrap().blocks().to_vec();
        let fast: Vec<_> = family_bag_scan(&blocks, &g2, &g3).into_iter().map(|h| h.pair).collect();
        let slow: Vec<_> = verify_bag_free_family(&blocks, &g2, &g3)
            .into_iter()
            .map(|v| match v { parpart_core::verify::Violation::Bag { pair, .. } => pair, other => panic!("{other}") })
            .collect();
        prop_assert_eq!(fast, slow);

        let order = CyclicOrder::identity(m);
        let fast: Vec<_> = window_bag_scan(&order, l, &g2, &g3).into_iter().map(|h| h.pair).collect();
        let slow: Vec<_> = verify_bag_free_windows(order.as_slice(), l, &g2, &g3)
            .into_iter()
            .map(|v| match v { parpart_core::verify::Violation::Bag { pair, .. } => pair, other => panic!("{other}") })
            .collect();
        prop_assert_eq!(fast, slow);
    }

    #[test]
    fn repair_decomposition_is_sound(m in 6usize..=30, l in 2usize..=3, seed in any::<u64>()) {
        let delta = (m * (3 * l - 1)).div_ceil(3 * l);
        let g1 = gen_dense(m, delta.min(m - 1), seed).unwrap();
        let start = initial_decomposition(m, l).unwrap();
        let defects = start.blocks().iter().map(|b| {
            b.iter().enumerate().map(|(i, &x)| b[i + 1..].iter().filter(|&&y| !g1.has_edge(x, y)).count()).sum::<usize>()
        }).sum::<usize>();
        let (fam, stats) = repair_decomposition(&g1, &start).unwrap();
        prop_assert!(verify_decomposition(&g1, fam.blocks(), l).is_empty());
        // Every move removes at least one defect.
        prop_assert!(stats.repair_moves <= defects);
    }

    #[test]
    fn repair_ham_power_is_sound(m in 12usize..=40, l in 2usize..=3, seed in any::<u64>()) {
        let w = ((2 * l - 1) * (2 * l - 1)) as i128;
        let need = frac(m as i128 * (w - 1), w) + frac(4 * l as i128 - 3 + 1, w);
        let delta = (need.ceil().to_integer() as usize).min(m - 1);
        prop_assume!(m >= 4 * l);
        let g1 = gen_dense(m, delta, seed).unwrap();
        let start = CyclicOrder::identity(m);
        let before = power_defects(&start, &g1, l - 1).unwrap().len();
        let (order, stats) = repair_ham_power(&g1, &start, l).unwrap();
        prop_assert!(verify_ham_power(&g1, order.as_slice(), l).is_empty());
        prop_assert!(stats.repair_moves <= before);
    }

    #[test]
    fn power_neighbors_are_symmetric(m in 3usize..=30, p_seed in 1usize..15, seed in any::<u64>()) {
        let p = 1 + p_seed % ((m - 1) / 2).max(1);
        prop_assume!(2 * p < m);
        let mut seq: Vec<usize> = (0..m).collect();
        parpart_core::synth::SeededRng::new(seed).shuffle(&mut seq);
        let order = CyclicOrder::new(seq).unwrap();
        for v in 0..m {
            let nv = power_neighbors(&order, p, v).unwrap();
            prop_assert_eq!(nv.len(), 2 * p);
            for &u in &nv {
                prop_assert!(power_neighbors(&order, p, u).unwrap().contains(&v));
            }
        }
    }

    #[test]
    fn conditions_flip_at_threshold(m in 10u64..500, l in 2u64..5, q in 1u64..100) {
        let lhs21 = frac(m as i128 * (3 * l as i128 - 1), 3 * l as i128);
        let t = lhs21.ceil().to_integer() as u64;
        prop_assert!(check_conditions(m, l, q, t, 0, 0)[2].holds);
        prop_assert!(!check_conditions(m, l, q, t - 1, 0, 0)[2].holds);
        let sq = ((2 * l - 1) * (2 * l - 1)) as i128;
        let lhs11 = frac(m as i128 * (sq - 1), sq) + frac(4 * l as i128 - 3 + q as i128, sq);
        let t = lhs11.ceil().to_integer() as u64;
        prop_assert!(check_conditions(m, l, q, t, 0, 0)[0].holds);
        prop_assert!(!check_conditions(m, l, q, t - 1, 0, 0)[0].holds);
        prop_assert_eq!(check_conditions(m, l, q, t, 0, 0)[0].lhs, lhs11);
        prop_assert!(int(0) <= lhs21);
    }

    #[test]
    fn generators_are_deterministic_and_respect_bounds(m in 2usize..=40, frac_deg in 0usize..=100, seed in any::<u64>(), c2 in 0usize..3, c3 in 0usize..3) {
        let delta = frac_deg * (m - 1) / 100;
        let g1 = gen_dense(m, delta, seed).unwrap();
        prop_assert_eq!(&g1, &gen_dense(m, delta, seed).unwrap());
        prop_assert!(g1.min_degree().unwrap() >= delta);
        if let Ok((g2, g3)) = gen_sparse_pair(c2, c3, &g1, seed) {
            prop_assert!(g2.max_degree().unwrap() <= c2 && g3.max_degree().unwrap() <= c3);
            prop_assert!(g2.edges().iter().chain(g3.edges().iter()).all(|&(u, v)| !g1.has_edge(u, v)));
            prop_assert_eq!((g2, g3), gen_sparse_pair(c2, c3, &g1, seed).unwrap());
        }
    }
}
