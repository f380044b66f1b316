mod common;

use chrono::{Duration, TimeZone, Utc};
use common::{brute_force_best, random_small_graph, three_relay_scenario};
use sunhop::planner::{
    direct_distance, plan_placement, planning_context, shortest_backhaul_path, shortest_path, CostParams,
};
use sunhop::solar::SearchParams;
use sunhop::visibility::VisibilityGraph;
use sunhop::PlanError;

#[test]
fn dijkstra_matches_exhaustive_enumeration() {
    let params = CostParams::default();
    let mut reachable = 0;
    for seed in 0..300u64 {
        let (graph, sunny) = random_small_graph(seed);
        let target = graph.node_count() - 1;
        for solar in [false, true] {
            let expected = brute_force_best(&graph, 0, target, &sunny, solar, &params);
            match (shortest_path(&graph, 0, target, &sunny, solar, &params), expected) {
                (Ok(path), Some((cost, hops))) => {
                    assert!((path.cost - cost).abs() <= 1e-12, "seed {seed} solar {solar}: {} vs {cost}", path.cost);
                    assert_eq!(path.nodes.len() - 1, hops, "seed {seed} solar {solar}: tie not broken by hops");
                    reachable += 1;
                }
                (Err(PlanError::NoBackhaulPath { component, .. }), None) => {
                    assert!(component.contains(&0) && !component.contains(&target));
                }
                (got, want) => panic!("seed {seed} solar {solar}: {got:?} vs {want:?}"),
            }
        }
    }
    assert!(reachable > 300, "only {reachable} reachable instances");
}

#[test]
fn plans_are_chains_of_visibility_edges() {
    for seed in 0..100u64 {
        let (graph, sunny) = random_small_graph(seed);
        let target = graph.node_count() - 1;
        let Ok(plan) = shortest_backhaul_path(&graph, 0, target, &sunny, true, &CostParams::default()) else {
            continue;
        };
        assert_eq!(plan.waypoints.first(), Some(&graph.nodes[0]));
        assert_eq!(plan.waypoints.last(), Some(&graph.nodes[target]));
        assert_eq!(plan.relay_positions, plan.waypoints[1..plan.waypoints.len() - 1]);
        assert_eq!(plan.hop_count, plan.waypoints.len() - 1);
        let mut distance = 0.0;
        for w in plan.waypoints.windows(2) {
            let i = graph.nodes.iter().position(|&p| p == w[0]).unwrap();
            let j = graph.nodes.iter().position(|&p| p == w[1]).unwrap();
            assert!(graph.has_edge(i, j));
            distance += sunhop::geometry::euclidean_distance(w[0], w[1]);
        }
        assert!((distance - plan.total_distance).abs() < 1e-9);
    }
}

#[test]
fn modes_agree_on_reachability() {
    for seed in 0..200u64 {
        let (graph, sunny) = random_small_graph(seed);
        let target = graph.node_count() - 1;
        let c = CostParams::default();
        let a = shortest_path(&graph, 0, target, &sunny, false, &c).is_ok();
        let b = shortest_path(&graph, 0, target, &sunny, true, &c).is_ok();
        assert_eq!(a, b, "seed {seed}");
    }
}

#[test]
fn sunny_route_dominates_whenever_one_exists() {
    let c = CostParams::default();
    for seed in 0..300u64 {
        let (graph, sunny) = random_small_graph(seed);
        let target = graph.node_count() - 1;
        // Restrict the graph to sunny relays and see whether a path survives.
        let keep: Vec<(usize, usize)> = graph
            .edge_set()
            .into_iter()
            .filter(|&(i, j)| [i, j].iter().all(|&v| v == 0 || v == target || sunny[v]))
            .collect();
        let sunny_only = VisibilityGraph::from_edges(graph.nodes.clone(), &keep);
        if shortest_path(&sunny_only, 0, target, &sunny, false, &c).is_err() {
            continue;
        }
        let plan = shortest_backhaul_path(&graph, 0, target, &sunny, true, &c).unwrap();
        assert!(plan.relay_sunny.iter().all(|&s| s), "seed {seed}: {plan:?}");
    }
}

#[test]
fn night_flags_never_add_hops() {
    let c = CostParams::default();
    for seed in 0..200u64 {
        let (graph, _) = random_small_graph(seed);
        let target = graph.node_count() - 1;
        let dark = vec![false; graph.node_count()];
        let (Ok(solar), Ok(base)) = (
            shortest_path(&graph, 0, target, &dark, true, &c),
            shortest_path(&graph, 0, target, &dark, false, &c),
        ) else {
            continue;
        };
        assert!(solar.nodes.len() <= base.nodes.len(), "seed {seed}");
    }
}

#[test]
fn serpentine_corridor_needs_three_relays_all_day() {
    let s = three_relay_scenario();
    let day = Utc.with_ymd_and_hms(2021, 6, 20, 22, 0, 0).unwrap();
    for h in 0..24 {
        let t = day + Duration::hours(h);
        let plan = plan_placement(&s, t, false, SearchParams::default(), &CostParams::default()).unwrap();
        assert_eq!(plan.relay_count(), 3, "hour {h}: {:?}", plan.waypoints);
        assert!(plan.total_distance >= direct_distance(&s));
    }
}

#[test]
fn sunny_points_are_graph_nodes_flagged_sunny() {
    let s = three_relay_scenario();
    let t = Utc.with_ymd_and_hms(2021, 6, 21, 10, 0, 0).unwrap();
    let ctx = planning_context(&s, t, true, SearchParams::default()).unwrap();
    assert!(!ctx.sunny_points.is_empty());
    for sp in &ctx.sunny_points.points {
        let i = ctx.graph.nodes.iter().position(|&p| p == sp.point).unwrap();
        assert!(ctx.sunny_flags[i]);
        assert!(ctx.shadows.is_sunny(sp.point));
    }
    assert_eq!(ctx.graph.nodes[ctx.mbs_node], s.mbs);
    assert_eq!(ctx.graph.nodes[ctx.hotspot_node], s.hotspot);
}
