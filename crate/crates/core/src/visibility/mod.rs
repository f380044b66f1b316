//! Visibility graph over building corners and auxiliary points.
//!
//! Node indices are shared by every structure here: the scene's building
//! corners come first (in building order, ring order within a building),
//! followed by the auxiliary points in the order they were supplied.

mod naive;
mod sweep;

use std::collections::BTreeSet;
use std::ops::Range;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::VisibilityError;
use crate::geometry::{euclidean_distance, point_in_polygon, BuildingPolygon, Containment, Point2D};

pub use naive::visible_naive;
pub use sweep::{start_sweep, visibility_tree, SweepState};

/// Corners and walls of all buildings.
#[derive(Debug, Clone)]
pub struct SceneGraph {
    pub vertices: Vec<Point2D>,
    /// Walls as vertex-index pairs, one closed cycle per building.
    pub edges: Vec<(usize, usize)>,
    /// Building index of every vertex.
    pub vertex_owner: Vec<usize>,
    rings: Vec<Range<usize>>,
    incident: Vec<[usize; 2]>,
    buildings: Vec<BuildingPolygon>,
}

impl SceneGraph {
    pub fn from_buildings(buildings: &[BuildingPolygon]) -> Self {
        let mut vertices = Vec::new();
        let mut edges = Vec::new();
        let mut vertex_owner = Vec::new();
        let mut rings = Vec::new();
        for (bi, b) in buildings.iter().enumerate() {
            let start = vertices.len();
            let n = b.vertices.len();
            vertices.extend_from_slice(&b.vertices);
            vertex_owner.extend(std::iter::repeat_n(bi, n));
            edges.extend((0..n).map(|k| (start + k, start + (k + 1) % n)));
            rings.push(start..start + n);
        }
        // Edge k of a ring starts at vertex k, so vertex k touches edges k-1 and k.
        let mut incident = vec![[0usize; 2]; vertices.len()];
        for ring in &rings {
            let n = ring.len();
            for k in 0..n {
                let v = ring.start + k;
                incident[v] = [ring.start + (k + n - 1) % n, ring.start + k];
            }
        }
        Self { vertices, edges, vertex_owner, rings, incident, buildings: buildings.to_vec() }
    }

    pub fn buildings(&self) -> &[BuildingPolygon] {
        &self.buildings
    }

    /// Ring neighbours `(prev, next)` of a scene vertex.
    pub fn ring_neighbours(&self, v: usize) -> (usize, usize) {
        let ring = &self.rings[self.vertex_owner[v]];
        let n = ring.len();
        let k = v - ring.start;
        (ring.start + (k + n - 1) % n, ring.start + (k + 1) % n)
    }

    pub(crate) fn incident_edges(&self, v: usize) -> &[usize; 2] {
        &self.incident[v]
    }
}

/// Uniform view over scene corners followed by auxiliary points.
#[derive(Clone, Copy)]
pub(crate) struct NodeSet<'a> {
    pub scene: &'a SceneGraph,
    pub extras: &'a [Point2D],
}

impl<'a> NodeSet<'a> {
    /// Rejects two node indices sharing one location.
    pub fn new(scene: &'a SceneGraph, extras: &'a [Point2D]) -> Result<Self, VisibilityError> {
        let set = Self { scene, extras };
        let mut idx: Vec<usize> = (0..set.len()).collect();
        idx.sort_by(|&a, &b| {
            let (pa, pb) = (set.point(a), set.point(b));
            pa.x.total_cmp(&pb.x).then(pa.y.total_cmp(&pb.y))
        });
        for w in idx.windows(2) {
            if set.point(w[0]) == set.point(w[1]) {
                let (first, second) = (w[0].min(w[1]), w[0].max(w[1]));
                return Err(VisibilityError::DuplicatePoint {
                    first,
                    second,
                    point: set.point(first),
                });
            }
        }
        Ok(set)
    }

    pub fn len(&self) -> usize {
        self.scene.vertices.len() + self.extras.len()
    }

    pub fn point(&self, i: usize) -> Point2D {
        let nv = self.scene.vertices.len();
        if i < nv {
            self.scene.vertices[i]
        } else {
            self.extras[i - nv]
        }
    }

    pub fn is_corner(&self, i: usize) -> bool {
        i < self.scene.vertices.len()
    }

    /// Neighbouring ring points `(prev, next)` when `i` is a building corner.
    pub fn corner(&self, i: usize) -> Option<(Point2D, Point2D)> {
        self.is_corner(i).then(|| {
            let (p, n) = self.scene.ring_neighbours(i);
            (self.scene.vertices[p], self.scene.vertices[n])
        })
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct VisibilityGraph {
    pub nodes: Vec<Point2D>,
    /// Per node: visible neighbours with their distance, sorted by index.
    pub adjacency: Vec<Vec<(usize, f64)>>,
}

impl VisibilityGraph {
    /// Graph with arbitrary undirected edges; distances are Euclidean.
    pub fn from_edges(nodes: Vec<Point2D>, edges: &[(usize, usize)]) -> Self {
        let mut adjacency = vec![Vec::new(); nodes.len()];
        let set: BTreeSet<(usize, usize)> = edges
            .iter()
            .filter(|(a, b)| a != b)
            .map(|&(a, b)| (a.min(b), a.max(b)))
            .collect();
        for (a, b) in set {
            let d = euclidean_distance(nodes[a], nodes[b]);
            adjacency[a].push((b, d));
            adjacency[b].push((a, d));
        }
        for list in &mut adjacency {
            list.sort_by_key(|&(j, _)| j);
        }
        Self { nodes, adjacency }
    }

    pub fn node_count(&self) -> usize {
        self.nodes.len()
    }

    pub fn neighbours(&self, i: usize) -> &[(usize, f64)] {
        &self.adjacency[i]
    }

    pub fn has_edge(&self, i: usize, j: usize) -> bool {
        self.adjacency[i].binary_search_by_key(&j, |&(k, _)| k).is_ok()
    }

    /// Undirected edges as `(low, high)` index pairs.
    pub fn edge_set(&self) -> BTreeSet<(usize, usize)> {
        self.adjacency
            .iter()
            .enumerate()
            .flat_map(|(i, list)| list.iter().filter(move |&&(j, _)| j > i).map(move |&(j, _)| (i, j)))
            .collect()
    }

    /// Drops links longer than `max_len`.
    pub fn without_links_longer_than(&self, max_len: f64) -> Self {
        let adjacency = self
            .adjacency
            .iter()
            .map(|list| list.iter().copied().filter(|&(_, d)| d <= max_len).collect())
            .collect();
        Self { nodes: self.nodes.clone(), adjacency }
    }
}

/// Runs the rotational sweep from every node of `scene` corners plus
/// `extras` and assembles the symmetric graph.
pub fn build_visibility_graph(
    scene: &SceneGraph,
    extras: &[Point2D],
) -> Result<VisibilityGraph, VisibilityError> {
    for &p in extras {
        for (building, b) in scene.buildings().iter().enumerate() {
            if point_in_polygon(p, b) != Containment::Outside {
                return Err(VisibilityError::PointInsideBuilding { point: p, building });
            }
        }
    }
    let nodes = NodeSet::new(scene, extras)?;
    let n = nodes.len();
    let trees: Vec<Vec<usize>> = (0..n)
        .into_par_iter()
        .map(|c| sweep::sweep_visible(nodes, c))
        .collect();

    let seen: Vec<BTreeSet<usize>> = trees.into_iter().map(|t| t.into_iter().collect()).collect();
    let mut edges = Vec::new();
    for (i, set) in seen.iter().enumerate() {
        for &j in set.range(i + 1..) {
            if seen[j].contains(&i) {
                edges.push((i, j));
            } else {
                log::debug!("asymmetric visibility between nodes {i} and {j}; dropping link");
            }
        }
    }
    let points = (0..n).map(|i| nodes.point(i)).collect();
    Ok(VisibilityGraph::from_edges(points, &edges))
}
