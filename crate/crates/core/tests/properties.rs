use geocommittee::bpso::repair_to_k;
use geocommittee::local_search::{hill_climb, simulated_annealing};
use geocommittee::selector::compute_reward;
use geocommittee::{
    load_edge_list, sigmoid, AnnealConfig, BanditState, Committee, DistanceMatrix, Graph, HillClimbConfig, Instance,
};
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

/// Connected graph: a random tree over `0..n` plus chords.
fn connected_graph(max_n: u64) -> impl Strategy<Value = Graph> {
    (3..=max_n)
        .prop_flat_map(|n| {
            let parents: Vec<_> = (1..n).map(|v| 0..v).collect();
            (parents, prop::collection::vec((0..n, 0..n), 0..(2 * n as usize)))
        })
        .prop_map(|(parents, chords)| {
            let edges = parents
                .into_iter()
                .enumerate()
                .map(|(i, p)| (p, i as u64 + 1))
                .chain(chords);
            Graph::from_edges(edges).unwrap()
        })
}

fn instance_and_committee(max_n: u64) -> impl Strategy<Value = (Instance, Committee, u64)> {
    connected_graph(max_n).prop_flat_map(|g| {
        let n = g.node_count();
        (2..=(n - 1).min(5)).prop_flat_map(move |k| {
            let g = g.clone();
            (prop::sample::subsequence((0..n).collect::<Vec<_>>(), k), any::<u64>()).prop_map(move |(m, seed)| {
                (Instance::new(g.clone()).unwrap(), Committee::new(m, n).unwrap(), seed)
            })
        })
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn distances_symmetric_and_triangular(g in connected_graph(18)) {
        let m = DistanceMatrix::build(&g).unwrap();
        let n = g.node_count();
        for u in 0..n {
            prop_assert_eq!(m.distance(u, u), Some(0));
            for v in 0..n {
                let uv = m.distance(u, v).unwrap();
                prop_assert_eq!(Some(uv), m.distance(v, u));
                for w in 0..n {
                    prop_assert!(uv <= m.distance(u, w).unwrap() + m.distance(w, v).unwrap());
                }
            }
        }
    }

    #[test]
    fn matrix_agrees_with_bfs(g in connected_graph(25)) {
        let m = DistanceMatrix::build(&g).unwrap();
        let nodes: Vec<_> = (0..g.node_count()).collect();
        let pairs = g.pairwise_distances(&nodes).unwrap();
        for (u, row) in pairs.iter().enumerate() {
            for (v, &d) in row.iter().enumerate() {
                prop_assert_eq!(m.distance(u, v), Some(d));
            }
        }
    }

    #[test]
    fn edge_list_round_trip(g in connected_graph(30)) {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("g.txt");
        let mut bytes = Vec::new();
        g.write_edge_list(&mut bytes).unwrap();
        std::fs::write(&path, &bytes).unwrap();
        let back = load_edge_list(&path, false).unwrap();
        let mut again = Vec::new();
        back.write_edge_list(&mut again).unwrap();
        prop_assert_eq!(bytes, again);
        prop_assert_eq!(back.edge_count(), g.edge_count());
    }

    #[test]
    fn fitness_ignores_member_order((inst, c, seed) in instance_and_committee(20)) {
        use rand::seq::SliceRandom;
        let mut members = c.members().to_vec();
        members.shuffle(&mut ChaCha8Rng::seed_from_u64(seed));
        let shuffled = Committee::new(members, inst.node_count()).unwrap();
        prop_assert_eq!(inst.fitness(&c).unwrap(), inst.fitness(&shuffled).unwrap());
    }

    #[test]
    fn fitness_in_unit_interval((inst, c, _) in instance_and_committee(20)) {
        let f = inst.fitness(&c).unwrap();
        prop_assert!(f.value > 0.0 && f.value <= 1.0);
        prop_assert!(f.min_pair_distance as f64 <= f.mean_pair_distance);
    }

    #[test]
    fn local_search_never_worse((inst, c, seed) in instance_and_committee(24)) {
        let start = inst.score(c).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let hc = hill_climb(&start, &inst, &HillClimbConfig { max_iterations: 50 }, &mut rng).unwrap();
        prop_assert!(hc.best.value() >= start.value());
        let sa = simulated_annealing(&start, &inst, &AnnealConfig::default(), &mut rng).unwrap();
        prop_assert!(sa.best.value() >= start.value());
        prop_assert_eq!(sa.best.committee.k(), start.committee.k());
    }

    #[test]
    fn repair_hits_k(bits in prop::collection::vec(any::<bool>(), 2..60), seed: u64, frac in 0.0..1.0f64) {
        let mut bits = bits;
        let k = 1 + ((bits.len() - 1) as f64 * frac) as usize;
        repair_to_k(&mut bits, k, &mut ChaCha8Rng::seed_from_u64(seed)).unwrap();
        prop_assert_eq!(bits.iter().filter(|&&b| b).count(), k);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(512))]

    #[test]
    fn sigmoid_symmetric_and_bounded(v in -50.0..50.0f64) {
        let s = sigmoid(v);
        prop_assert!(s > 0.0 && s < 1.0 || v.abs() > 30.0);
        prop_assert!((s + sigmoid(-v) - 1.0).abs() < 1e-12);
        prop_assert!(sigmoid(v + 0.5) >= s);
    }

    #[test]
    fn quality_is_running_mean(rewards in prop::collection::vec((0..3usize, -2.0..2.0f64), 1..300)) {
        let mut state = BanditState::new(3, 0.01).unwrap();
        for &(arm, r) in &rewards {
            state.update(arm, r).unwrap();
        }
        for arm in 0..3 {
            let rs: Vec<f64> = rewards.iter().filter(|(a, _)| *a == arm).map(|&(_, r)| r).collect();
            let a = &state.arms()[arm];
            prop_assert_eq!(a.selections, rs.len() as u64);
            if !rs.is_empty() {
                let mean = rs.iter().sum::<f64>() / rs.len() as f64;
                prop_assert!((a.quality - mean).abs() <= 1e-12);
            }
        }
    }

    #[test]
    fn zero_scale_is_greedy(q in prop::collection::vec(-1.0..1.0f64, 2..6), n in 1..20u64) {
        let mut state = BanditState::new(q.len(), 0.0).unwrap();
        for (arm, &qa) in q.iter().enumerate() {
            for _ in 0..n {
                state.update(arm, qa).unwrap();
            }
        }
        let best = (0..q.len()).fold(0, |b, a| if q[a] > q[b] { a } else { b });
        prop_assert_eq!(state.select(), best);
    }

    #[test]
    fn reward_sign_follows_improvement(before in 0.01..1.0f64, after in 0.01..1.0f64) {
        let r = compute_reward(before, after).unwrap();
        prop_assert_eq!(r > 0.0, after > before);
        prop_assert!((r - (after - before) / before).abs() < 1e-12);
    }
}
