//! Relay-chain selection: hop-first edge costs with a shadow penalty and a
//! deterministic Dijkstra over the visibility graph.

use std::cmp::{Ordering, Reverse};
use std::collections::{BinaryHeap, VecDeque};

use chrono::{DateTime, Utc};
use serde::{Deserialize, Serialize};

use crate::error::PlanError;
use crate::geometry::{euclidean_distance, Point2D};
use crate::scenario::Scenario;
use crate::solar::{find_sunny_points_in, sun_position, SearchParams, ShadowMap, SunPosition, SunnyPointSet};
use crate::visibility::{build_visibility_graph, SceneGraph, VisibilityGraph};

/// Costs within this margin are treated as equal when breaking ties.
pub const COST_TIE_EPS: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct CostParams {
    /// Distance normaliser, meters.
    pub d_max: f64,
    pub sunny_hop_penalty: f64,
    pub shadow_hop_penalty: f64,
    /// Optional FSO range limit, meters; longer links are discarded.
    pub max_link_length: Option<f64>,
}

impl Default for CostParams {
    fn default() -> Self {
        Self { d_max: 700.0, sunny_hop_penalty: 1.0, shadow_hop_penalty: 100.0, max_link_length: None }
    }
}

impl CostParams {
    pub fn validate(&self) -> Result<(), String> {
        if !(self.d_max.is_finite() && self.d_max > 0.0) {
            return Err(format!("d_max must be positive, got {}", self.d_max));
        }
        if !(self.sunny_hop_penalty >= 1.0 && self.shadow_hop_penalty > self.sunny_hop_penalty) {
            return Err(format!(
                "penalties must satisfy shadow ({}) > sunny ({}) >= 1",
                self.shadow_hop_penalty, self.sunny_hop_penalty
            ));
        }
        if let Some(r) = self.max_link_length {
            if !(r.is_finite() && r > 0.0) {
                return Err(format!("max_link_length must be positive, got {r}"));
            }
        }
        Ok(())
    }
}

/// Cost of one link: normalised length plus a per-hop penalty. In solar mode
/// a link arriving at a shadowed hover spot pays the shadow penalty.
pub fn edge_cost(length: f64, head_is_sunny: bool, solar_mode: bool, params: &CostParams) -> f64 {
    let mut normalised = length / params.d_max;
    if normalised > 1.0 {
        log::warn!("link of {length} m exceeds d_max = {} m; clamping its distance cost", params.d_max);
        normalised = 1.0;
    }
    let penalty = if solar_mode && !head_is_sunny { params.shadow_hop_penalty } else { params.sunny_hop_penalty };
    normalised + penalty
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PlacementPlan {
    /// From the base station to the hotspot inclusive.
    pub waypoints: Vec<Point2D>,
    /// Hover spots of the relays (waypoints without the two terminals).
    pub relay_positions: Vec<Point2D>,
    pub relay_sunny: Vec<bool>,
    /// Meters.
    pub total_distance: f64,
    pub hop_count: usize,
    pub total_cost: f64,
}

impl PlacementPlan {
    pub fn relay_count(&self) -> usize {
        self.relay_positions.len()
    }

    pub fn sunny_relay_count(&self) -> usize {
        self.relay_sunny.iter().filter(|&&s| s).count()
    }
}

/// A shortest path as node indices, with its cost.
#[derive(Debug, Clone, PartialEq)]
pub struct GraphPath {
    pub nodes: Vec<usize>,
    pub cost: f64,
    pub distance: f64,
}

#[derive(Debug, Clone)]
struct Label {
    cost: f64,
    distance: f64,
    path: Vec<usize>,
}

impl Label {
    fn better_than(&self, other: &Label) -> bool {
        if self.cost < other.cost - COST_TIE_EPS {
            return true;
        }
        if self.cost > other.cost + COST_TIE_EPS {
            return false;
        }
        match self.path.len().cmp(&other.path.len()) {
            Ordering::Less => true,
            Ordering::Greater => false,
            Ordering::Equal => self.path < other.path,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
struct HeapKey(f64, usize, usize);

impl Eq for HeapKey {}

impl Ord for HeapKey {
    fn cmp(&self, other: &Self) -> Ordering {
        self.0.total_cmp(&other.0).then(self.1.cmp(&other.1)).then(self.2.cmp(&other.2))
    }
}

impl PartialOrd for HeapKey {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// Minimum-cost path from `source` to `target`.
///
/// A link's penalty depends on the sunny flag of the node it arrives at,
/// except links into `target`, which always take the sunny branch. Ties
/// within [`COST_TIE_EPS`] go to fewer hops, then to the lexicographically
/// smaller node sequence.
pub fn shortest_path(
    graph: &VisibilityGraph,
    source: usize,
    target: usize,
    sunny: &[bool],
    solar_mode: bool,
    params: &CostParams,
) -> Result<GraphPath, PlanError> {
    if source == target {
        return Err(PlanError::SameEndpoints);
    }
    let n = graph.node_count();
    for idx in [source, target] {
        if idx >= n {
            return Err(crate::error::VisibilityError::NodeOutOfRange(idx).into());
        }
    }
    let mut best: Vec<Option<Label>> = vec![None; n];
    let mut settled = vec![false; n];
    let mut heap = BinaryHeap::new();
    best[source] = Some(Label { cost: 0.0, distance: 0.0, path: vec![source] });
    heap.push(Reverse(HeapKey(0.0, 1, source)));

    while let Some(Reverse(HeapKey(_, _, u))) = heap.pop() {
        if settled[u] {
            continue;
        }
        settled[u] = true;
        if u == target {
            break;
        }
        let current = best[u].clone().expect("queued nodes carry a label");
        for &(v, len) in graph.neighbours(u) {
            if settled[v] {
                continue;
            }
            if params.max_link_length.is_some_and(|r| len > r) {
                continue;
            }
            let head_sunny = v == target || sunny.get(v).copied().unwrap_or(false);
            let mut path = current.path.clone();
            path.push(v);
            let candidate = Label {
                cost: current.cost + edge_cost(len, head_sunny, solar_mode, params),
                distance: current.distance + len,
                path,
            };
            if best[v].as_ref().is_none_or(|b| candidate.better_than(b)) {
                heap.push(Reverse(HeapKey(candidate.cost, candidate.path.len(), v)));
                best[v] = Some(candidate);
            }
        }
    }

    match best[target].take() {
        Some(l) => Ok(GraphPath { nodes: l.path, cost: l.cost, distance: l.distance }),
        None => Err(PlanError::NoBackhaulPath {
            source_node: source,
            target,
            component: component_of(graph, source, params),
        }),
    }
}

fn component_of(graph: &VisibilityGraph, source: usize, params: &CostParams) -> Vec<usize> {
    let mut seen = vec![false; graph.node_count()];
    let mut queue = VecDeque::from([source]);
    seen[source] = true;
    while let Some(u) = queue.pop_front() {
        for &(v, len) in graph.neighbours(u) {
            if !seen[v] && !params.max_link_length.is_some_and(|r| len > r) {
                seen[v] = true;
                queue.push_back(v);
            }
        }
    }
    (0..graph.node_count()).filter(|&i| seen[i]).collect()
}

/// [`shortest_path`] packaged as a relay plan. Relay sunniness is reported
/// from `sunny` regardless of mode.
pub fn shortest_backhaul_path(
    graph: &VisibilityGraph,
    source: usize,
    target: usize,
    sunny: &[bool],
    solar_mode: bool,
    params: &CostParams,
) -> Result<PlacementPlan, PlanError> {
    let path = shortest_path(graph, source, target, sunny, solar_mode, params)?;
    let interior = &path.nodes[1..path.nodes.len() - 1];
    Ok(PlacementPlan {
        waypoints: path.nodes.iter().map(|&i| graph.nodes[i]).collect(),
        relay_positions: interior.iter().map(|&i| graph.nodes[i]).collect(),
        relay_sunny: interior.iter().map(|&i| sunny.get(i).copied().unwrap_or(false)).collect(),
        total_distance: path.distance,
        hop_count: path.nodes.len() - 1,
        total_cost: path.cost,
    })
}

/// Everything computed while planning one instant; kept for rendering and
/// diagnostics.
#[derive(Debug, Clone)]
pub struct PlanningContext {
    pub timestamp: DateTime<Utc>,
    pub sun: SunPosition,
    pub shadows: ShadowMap,
    pub sunny_points: SunnyPointSet,
    pub graph: VisibilityGraph,
    pub sunny_flags: Vec<bool>,
    pub mbs_node: usize,
    pub hotspot_node: usize,
}

/// Builds the node set at `timestamp` (corners, terminals and, in solar
/// mode, the sunny hover spots) together with its visibility graph.
pub fn planning_context(
    scenario: &Scenario,
    timestamp: DateTime<Utc>,
    solar_mode: bool,
    search: SearchParams,
) -> Result<PlanningContext, PlanError> {
    let sun = sun_position(scenario.latitude, scenario.longitude, timestamp);
    let shadows = ShadowMap::new(scenario, sun);
    let sunny_points = if solar_mode { find_sunny_points_in(scenario, &shadows, search) } else { SunnyPointSet::default() };

    let scene = SceneGraph::from_buildings(&scenario.buildings);
    let mut extras = vec![scenario.mbs, scenario.hotspot];
    let mut kept = SunnyPointSet::default();
    for sp in &sunny_points.points {
        let duplicate = extras.contains(&sp.point) || scene.vertices.contains(&sp.point);
        if !duplicate {
            extras.push(sp.point);
            kept.points.push(*sp);
        }
    }
    let graph = build_visibility_graph(&scene, &extras)?;
    let corners = scene.vertices.len();
    let sunny_flags: Vec<bool> = (0..graph.node_count())
        .map(|i| {
            if i >= corners + 2 {
                true
            } else if i >= corners {
                false
            } else {
                shadows.is_sunny(graph.nodes[i])
            }
        })
        .collect();
    Ok(PlanningContext {
        timestamp,
        sun,
        shadows,
        sunny_points: kept,
        graph,
        sunny_flags,
        mbs_node: corners,
        hotspot_node: corners + 1,
    })
}

impl PlanningContext {
    pub fn plan(&self, solar_mode: bool, cost: &CostParams) -> Result<PlacementPlan, PlanError> {
        let mut plan =
            shortest_backhaul_path(&self.graph, self.mbs_node, self.hotspot_node, &self.sunny_flags, solar_mode, cost)?;
        // Report the real lighting of each hover spot, whatever the mode.
        plan.relay_sunny = plan.relay_positions.iter().map(|&p| self.shadows.is_sunny(p)).collect();
        Ok(plan)
    }
}

/// Relay placement for one instant.
pub fn plan_placement(
    scenario: &Scenario,
    timestamp: DateTime<Utc>,
    solar_mode: bool,
    search: SearchParams,
    cost: &CostParams,
) -> Result<PlacementPlan, PlanError> {
    planning_context(scenario, timestamp, solar_mode, search)?.plan(solar_mode, cost)
}

/// Straight-line lower bound on any plan's length.
pub fn direct_distance(scenario: &Scenario) -> f64 {
    euclidean_distance(scenario.mbs, scenario.hotspot)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::BuildingPolygon;
    use chrono::TimeZone;

    fn p(x: f64, y: f64) -> Point2D {
        Point2D::new(x, y)
    }

    #[test]
    fn edge_cost_examples() {
        let c = CostParams::default();
        assert_eq!(edge_cost(0.0, true, false, &c), 1.0);
        assert_eq!(edge_cost(0.0, true, true, &c), 1.0);
        assert_eq!(edge_cost(350.0, true, false, &c), 1.5);
        assert_eq!(edge_cost(350.0, false, true, &c), 100.5);
        assert_eq!(edge_cost(350.0, false, false, &c), 1.5);
        assert_eq!(edge_cost(1400.0, true, false, &c), 2.0);
    }

    #[test]
    fn direct_link_has_no_relays() {
        let g = VisibilityGraph::from_edges(vec![p(0., 0.), p(300., 400.)], &[(0, 1)]);
        let plan = shortest_backhaul_path(&g, 0, 1, &[false, false], true, &CostParams::default()).unwrap();
        assert_eq!(plan.relay_count(), 0);
        assert_eq!(plan.hop_count, 1);
        assert!((plan.total_cost - (500.0 / 700.0 + 1.0)).abs() < 1e-15);
    }

    #[test]
    fn sunny_relay_preferred() {
        // Two symmetric detours; node 2 shadowed, node 3 sunny.
        let g = VisibilityGraph::from_edges(
            vec![p(0., 0.), p(100., 0.), p(50., 30.), p(50., -30.)],
            &[(0, 2), (2, 1), (0, 3), (3, 1)],
        );
        let flags = [false, false, false, true];
        let solar = shortest_backhaul_path(&g, 0, 1, &flags, true, &CostParams::default()).unwrap();
        assert_eq!(solar.relay_positions, vec![p(50., -30.)]);
        // Without the penalty the tie goes to the smaller index sequence.
        let base = shortest_backhaul_path(&g, 0, 1, &flags, false, &CostParams::default()).unwrap();
        assert_eq!(base.relay_positions, vec![p(50., 30.)]);
    }

    #[test]
    fn unreachable_target_reports_component() {
        let g = VisibilityGraph::from_edges(vec![p(0., 0.), p(1., 0.), p(5., 5.)], &[(0, 1)]);
        let err = shortest_path(&g, 0, 2, &[true; 3], false, &CostParams::default()).unwrap_err();
        assert_eq!(err, PlanError::NoBackhaulPath { source_node: 0, target: 2, component: vec![0, 1] });
    }

    #[test]
    fn range_limit_forces_extra_hop() {
        let g = VisibilityGraph::from_edges(vec![p(0., 0.), p(200., 0.), p(100., 1.)], &[(0, 1), (0, 2), (2, 1)]);
        let mut c = CostParams::default();
        assert_eq!(shortest_path(&g, 0, 1, &[true; 3], false, &c).unwrap().nodes, vec![0, 1]);
        c.max_link_length = Some(150.0);
        assert_eq!(shortest_path(&g, 0, 1, &[true; 3], false, &c).unwrap().nodes, vec![0, 2, 1]);
    }

    #[test]
    fn empty_scene_plan_is_direct() {
        let s = Scenario::new(vec![], p(0., 0.), p(400., 0.), 40.4, -3.7, 20.0).unwrap();
        let t = Utc.with_ymd_and_hms(2021, 6, 21, 12, 0, 0).unwrap();
        for solar in [false, true] {
            let plan = plan_placement(&s, t, solar, SearchParams::default(), &CostParams::default()).unwrap();
            assert_eq!(plan.waypoints, vec![p(0., 0.), p(400., 0.)]);
            assert_eq!(plan.relay_count(), 0);
        }
    }

    #[test]
    fn blocked_terminals_route_around() {
        let b = BuildingPolygon::new(vec![p(-20., -20.), p(20., -20.), p(20., 20.), p(-20., 20.)], 60.0).unwrap();
        let s = Scenario::new(vec![b], p(-100., 0.), p(100., 0.), 40.4, -3.7, 20.0).unwrap();
        let t = Utc.with_ymd_and_hms(2021, 6, 21, 0, 0, 0).unwrap();
        let plan = plan_placement(&s, t, false, SearchParams::default(), &CostParams::default()).unwrap();
        assert_eq!(plan.relay_count(), 2);
        assert!(plan.total_distance >= direct_distance(&s));
    }
}
