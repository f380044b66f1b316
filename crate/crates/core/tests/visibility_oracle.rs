mod common;

use common::random_scene;
use sunhop::geometry::{point_in_polygon, BuildingPolygon, Containment, Point2D};
use sunhop::visibility::{build_visibility_graph, visible_naive, SceneGraph};

#[test]
fn sweep_matches_brute_force_on_random_scenes() {
    for seed in 0..150u64 {
        let (scene, extras) = random_scene(seed);
        assert!(scene.vertices.len() <= 40);
        let graph = build_visibility_graph(&scene, &extras).unwrap();
        let n = graph.node_count();
        for i in 0..n {
            for j in (i + 1)..n {
                let expected = visible_naive(graph.nodes[i], graph.nodes[j], &scene);
                assert_eq!(
                    graph.has_edge(i, j),
                    expected,
                    "seed {seed}: nodes {i} {:?} and {j} {:?}",
                    graph.nodes[i],
                    graph.nodes[j]
                );
            }
        }
    }
}

#[test]
fn graph_invariants_hold() {
    for seed in 200..260u64 {
        let (scene, extras) = random_scene(seed);
        let graph = build_visibility_graph(&scene, &extras).unwrap();
        for (i, list) in graph.adjacency.iter().enumerate() {
            for &(j, d) in list {
                assert_ne!(i, j);
                assert!(graph.has_edge(j, i), "asymmetric {i}-{j}");
                assert_eq!(d, sunhop::geometry::euclidean_distance(graph.nodes[i], graph.nodes[j]));
                let mid = (graph.nodes[i] + graph.nodes[j]) * 0.5;
                for b in scene.buildings() {
                    assert_ne!(point_in_polygon(mid, b), Containment::Inside, "seed {seed}: link {i}-{j}");
                }
            }
        }
        for &(a, b) in &scene.edges {
            assert!(graph.has_edge(a, b), "seed {seed}: wall {a}-{b} missing");
        }
        let again = build_visibility_graph(&scene, &extras).unwrap();
        assert_eq!(graph, again);
    }
}

#[test]
fn non_convex_footprints_match_brute_force() {
    let p = Point2D::new;
    let buildings = vec![
        // U shape opening north.
        BuildingPolygon::new(
            vec![p(0., 0.), p(30., 0.), p(30., 30.), p(20., 30.), p(20., 10.), p(10., 10.), p(10., 30.), p(0., 30.)],
            50.0,
        )
        .unwrap(),
        // L shape.
        BuildingPolygon::new(vec![p(40., 0.), p(60., 0.), p(60., 10.), p(50., 10.), p(50., 25.), p(40., 25.)], 50.0)
            .unwrap(),
    ];
    let scene = SceneGraph::from_buildings(&buildings);
    let extras = vec![p(15., 25.), p(15., 50.), p(-10., -10.), p(70., 30.), p(35., 15.), p(55., 20.)];
    let graph = build_visibility_graph(&scene, &extras).unwrap();
    for i in 0..graph.node_count() {
        for j in (i + 1)..graph.node_count() {
            assert_eq!(
                graph.has_edge(i, j),
                visible_naive(graph.nodes[i], graph.nodes[j], &scene),
                "nodes {i} {:?} and {j} {:?}",
                graph.nodes[i],
                graph.nodes[j]
            );
        }
    }
    // Inside the U: sees straight up out of the notch, not through the walls.
    assert!(graph.has_edge(14, 15));
    assert!(!graph.has_edge(14, 16));
}
