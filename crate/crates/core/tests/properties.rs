//! Property tests for the structural invariants: matroid axioms, greedy
//! optimality against brute force, bridge-count consistency, threshold
//! independence, the basis exchange structure behind thresholds, and the
//! profile fast path.

use proptest::prelude::*;
use vcg_lab::integrals::RankProfile;
use vcg_lab::matroid::{
    enumerate_bases, greedy_min_basis, greedy_min_basis_edited, GraphicMatroidSpec, Matroid,
    UniformMatroidSpec,
};
use vcg_lab::vcg::{run_auction, vcg_threshold, Instance, System};
use vcg_lab::ExtCost;

fn arb_graph() -> impl Strategy<Value = GraphicMatroidSpec> {
    (2usize..7, prop::collection::vec((0usize..7, 0usize..7), 1..11)).prop_map(|(n, raw)| {
        let edges = raw.into_iter().map(|(u, v)| (u % n, v % n)).collect();
        GraphicMatroidSpec {
            vertex_count: n,
            edges,
        }
    })
}

fn arb_matroid() -> impl Strategy<Value = Matroid> {
    prop_oneof![
        arb_graph().prop_map(|g| Matroid::graphic(g).unwrap()),
        (2usize..9).prop_flat_map(|n| (Just(n), 1usize..n)).prop_map(|(n, k)| {
            Matroid::uniform(UniformMatroidSpec { n, k }).unwrap()
        }),
    ]
}

fn arb_subset(ground: usize) -> impl Strategy<Value = Vec<usize>> {
    prop::collection::vec(prop::bool::ANY, ground).prop_map(|mask| {
        mask.iter()
            .enumerate()
            .filter(|(_, &b)| b)
            .map(|(i, _)| i)
            .collect()
    })
}

fn distinct_costs(n: usize) -> impl Strategy<Value = Vec<f64>> {
    prop::collection::vec(0.01f64..1.0, n).prop_map(|mut v| {
        // spread ties apart deterministically
        for (i, x) in v.iter_mut().enumerate() {
            *x += i as f64 * 1e-6;
        }
        v
    })
}

fn count_components(n: usize, edges: &[(usize, usize)], subset: &[usize]) -> usize {
    // independent traversal oracle
    let mut adj = vec![Vec::new(); n];
    for &e in subset {
        let (u, v) = edges[e];
        adj[u].push(v);
        adj[v].push(u);
    }
    let mut seen = vec![false; n];
    let mut comps = 0;
    for s in 0..n {
        if seen[s] {
            continue;
        }
        comps += 1;
        let mut stack = vec![s];
        seen[s] = true;
        while let Some(v) = stack.pop() {
            for &w in &adj[v] {
                if !seen[w] {
                    seen[w] = true;
                    stack.push(w);
                }
            }
        }
    }
    comps
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(256))]

    #[test]
    fn rank_axioms_hold(m in arb_matroid(), seed in any::<u64>()) {
        use rand::{Rng, SeedableRng};
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
        let n = m.ground_size();
        let sample = |rng: &mut rand_chacha::ChaCha8Rng| -> Vec<usize> {
            (0..n).filter(|_| rng.random::<bool>()).collect()
        };
        for _ in 0..8 {
            let s = sample(&mut rng);
            let t = sample(&mut rng);
            let mut union: Vec<usize> = s.iter().chain(t.iter()).copied().collect();
            union.sort_unstable();
            union.dedup();
            let inter: Vec<usize> = s.iter().copied().filter(|x| t.contains(x)).collect();
            let (rs, rt) = (m.rank(&s).unwrap(), m.rank(&t).unwrap());
            let (ru, ri) = (m.rank(&union).unwrap(), m.rank(&inter).unwrap());
            prop_assert!(rs <= s.len());
            prop_assert!(ru >= rs.max(rt), "monotonicity");
            prop_assert!(ru + ri <= rs + rt, "submodularity");
            for a in 0..n {
                if !s.contains(&a) {
                    let mut sa = s.clone();
                    sa.push(a);
                    let r = m.rank(&sa).unwrap();
                    prop_assert!(r == rs || r == rs + 1, "unit increase");
                }
            }
        }
    }

    #[test]
    fn graphic_rank_is_vertices_minus_components(g in arb_graph(), mask in arb_subset(10)) {
        let subset: Vec<usize> = mask.into_iter().filter(|&e| e < g.edges.len()).collect();
        let m = Matroid::graphic(g.clone()).unwrap();
        let rank = m.rank(&subset).unwrap();
        let comps = count_components(g.vertex_count, &g.edges, &subset);
        prop_assert_eq!(rank, g.vertex_count - comps);
    }

    #[test]
    fn bridge_count_matches_rank_drops(m in arb_matroid(), mask in arb_subset(10)) {
        let subset: Vec<usize> = mask.into_iter().filter(|&e| e < m.ground_size()).collect();
        let r = m.rank(&subset).unwrap();
        let bridges = m.bridges(&subset).unwrap();
        let direct: usize = subset
            .iter()
            .map(|&a| {
                let rest: Vec<usize> = subset.iter().copied().filter(|&b| b != a).collect();
                (r - m.rank(&rest).unwrap() == 1) as usize
            })
            .sum();
        prop_assert_eq!(bridges.len(), direct);
    }

    #[test]
    fn greedy_matches_brute_force_minimum(m in arb_matroid(), seed in any::<u64>()) {
        use rand::{Rng, SeedableRng};
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
        let costs: Vec<f64> = (0..m.ground_size())
            .map(|i| rng.random::<f64>() + i as f64 * 1e-9)
            .collect();
        let greedy = greedy_min_basis(&m, &costs).unwrap();
        let best = enumerate_bases(&m, 12)
            .unwrap()
            .into_iter()
            .map(|b| b.iter().map(|&a| costs[a]).sum::<f64>())
            .fold(f64::INFINITY, f64::min);
        prop_assert!((greedy.cost - best).abs() <= 1e-9 * best.max(1.0));
    }

    #[test]
    fn thresholds_ignore_own_cost_and_stay_below_one(
        g in arb_graph(),
        costs in distinct_costs(10),
        new_cost in 0.01f64..1.0,
        item in 0usize..10,
    ) {
        let m = Matroid::graphic(g).unwrap();
        let n = m.ground_size();
        let costs: Vec<f64> = costs[..n].to_vec();
        let a = item % n;
        let inst = Instance::new(System::Matroid(m.clone()), costs.clone()).unwrap();
        let before = vcg_threshold(&inst, a).unwrap();

        let mut perturbed = costs.clone();
        perturbed[a] = new_cost;
        let inst2 = Instance::new(System::Matroid(m.clone()), perturbed).unwrap();
        // exact equality: the threshold never reads c(a)
        prop_assert_eq!(before, vcg_threshold(&inst2, a).unwrap());

        // with costs in [0,1], non-bridge thresholds stay at most 1
        if let ExtCost::Finite(t) = before {
            prop_assert!(t <= 1.0 + 1e-12);
        }
    }

    #[test]
    fn selected_items_swap_against_one_replacement(
        g in arb_graph(),
        costs in distinct_costs(10),
    ) {
        let m = Matroid::graphic(g).unwrap();
        let n = m.ground_size();
        let costs: Vec<f64> = costs[..n].to_vec();
        let base = greedy_min_basis(&m, &costs).unwrap();
        for &a in &base.elements {
            match greedy_min_basis_edited(&m, &costs, &[a], &[]) {
                Ok(alt) => {
                    let removed: Vec<usize> = base
                        .elements
                        .iter()
                        .copied()
                        .filter(|x| alt.elements.binary_search(x).is_err())
                        .collect();
                    let added: Vec<usize> = alt
                        .elements
                        .iter()
                        .copied()
                        .filter(|x| base.elements.binary_search(x).is_err())
                        .collect();
                    prop_assert_eq!(removed, vec![a]);
                    prop_assert_eq!(added.len(), 1);
                }
                Err(_) => {} // a is a bridge of the ground set
            }
        }
    }

    #[test]
    fn payments_cover_costs_on_selected_items(
        g in arb_graph(),
        costs in distinct_costs(10),
    ) {
        let m = Matroid::graphic(g).unwrap();
        let n = m.ground_size();
        let costs: Vec<f64> = costs[..n].to_vec();
        let inst = Instance::new(System::Matroid(m), costs.clone()).unwrap();
        let out = run_auction(&inst).unwrap();
        for &a in &out.min_structure {
            match out.payment[a] {
                ExtCost::Finite(p) => prop_assert!(p >= costs[a] - 1e-12),
                ExtCost::Infinite => prop_assert!(out.bridges.contains(&a)),
            }
        }
        for a in 0..n {
            if !out.min_structure.contains(&a) {
                prop_assert_eq!(out.payment[a], ExtCost::Finite(0.0));
                prop_assert_eq!(out.incentive[a], ExtCost::Finite(0.0));
            }
        }
    }

    #[test]
    fn profile_fast_path_is_exact(m in arb_matroid(), seed in any::<u64>()) {
        use rand::{Rng, SeedableRng};
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
        let costs: Vec<f64> = (0..m.ground_size()).map(|_| rng.random::<f64>()).collect();
        let slow = RankProfile::build(&m, &costs).unwrap();
        let fast = RankProfile::build_fast(&m, &costs).unwrap();
        prop_assert_eq!(slow, fast);
    }
}
