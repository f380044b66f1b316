use std::f64::consts::TAU;

use super::{NodeSet, SceneGraph};
use crate::error::VisibilityError;
use crate::geometry::{
    enters_interior_at_corner, orientation, segments_cross_properly, Orientation,
    Point2D,
};

/// How a wall relates to the sweep around one center.
#[derive(Debug, Clone, Copy, PartialEq)]
enum EdgeSpan {
    /// Collinear with the center or touching it; never obstructs.
    Ignored,
    /// Entered when the ray reaches `start`, left when it reaches `end`.
    Swept { start: usize, end: usize },
}

/// Rotational sweep around one center node.
///
/// The scan ray starts pointing east and turns counter-clockwise through the
/// angularly sorted nodes. `active` holds the walls currently pierced by the
/// ray, nearest first.
pub struct SweepState<'a> {
    nodes: NodeSet<'a>,
    center: usize,
    origin: Point2D,
    order: Vec<usize>,
    /// Collinear run id per entry of `order`.
    group: Vec<usize>,
    spans: Vec<EdgeSpan>,
    active: Vec<usize>,
    visible: Vec<bool>,
    cursor: usize,
}

impl<'a> SweepState<'a> {
    fn new(nodes: NodeSet<'a>, center: usize) -> Self {
        let origin = nodes.point(center);
        let scene = nodes.scene;

        let mut order: Vec<(f64, f64, usize)> = (0..nodes.len())
            .filter(|&i| i != center)
            .map(|i| {
                let d = nodes.point(i) - origin;
                let mut a = d.y.atan2(d.x);
                if a < 0.0 {
                    a += TAU;
                }
                if a >= TAU {
                    a = 0.0;
                }
                (a, d.norm(), i)
            })
            .collect();
        order.sort_by(|x, y| x.0.total_cmp(&y.0).then(x.1.total_cmp(&y.1)).then(x.2.cmp(&y.2)));

        // Merge nodes that are collinear with the center into runs, nearest first.
        let mut sorted = Vec::with_capacity(order.len());
        let mut group = Vec::with_capacity(order.len());
        let mut k = 0;
        let mut gid = 0;
        while k < order.len() {
            let lead = nodes.point(order[k].2);
            let mut end = k + 1;
            while end < order.len() {
                let q = nodes.point(order[end].2);
                let same_ray = orientation(origin, lead, q) == Orientation::Collinear
                    && (q - origin).dot(lead - origin) > 0.0;
                if !same_ray {
                    break;
                }
                end += 1;
            }
            let mut run: Vec<(f64, usize)> = order[k..end].iter().map(|&(_, d, i)| (d, i)).collect();
            run.sort_by(|x, y| x.0.total_cmp(&y.0).then(x.1.cmp(&y.1)));
            for (_, i) in run {
                sorted.push(i);
                group.push(gid);
            }
            gid += 1;
            k = end;
        }

        let mut position = vec![usize::MAX; nodes.len()];
        for (pos, &i) in sorted.iter().enumerate() {
            position[i] = pos;
        }

        let spans: Vec<EdgeSpan> = scene
            .edges
            .iter()
            .map(|&(u, v)| {
                if u == center || v == center {
                    return EdgeSpan::Ignored;
                }
                match orientation(origin, nodes.point(u), nodes.point(v)) {
                    Orientation::Collinear => EdgeSpan::Ignored,
                    Orientation::CounterClockwise => EdgeSpan::Swept { start: u, end: v },
                    Orientation::Clockwise => EdgeSpan::Swept { start: v, end: u },
                }
            })
            .collect();

        // Walls whose angular span wraps past east are pierced just below the
        // initial ray (half-open convention).
        let east = Point2D::new(1.0, 0.0);
        let mut initial: Vec<(f64, usize)> = spans
            .iter()
            .enumerate()
            .filter_map(|(e, span)| match *span {
                EdgeSpan::Swept { start, end } if position[end] < position[start] => {
                    Some((ray_distance(origin, east, nodes.point(start), nodes.point(end)), e))
                }
                _ => None,
            })
            .collect();
        initial.sort_by(|a, b| a.0.total_cmp(&b.0).then(a.1.cmp(&b.1)));

        Self {
            nodes,
            center,
            origin,
            order: sorted,
            group,
            spans,
            active: initial.into_iter().map(|(_, e)| e).collect(),
            visible: vec![false; nodes.len()],
            cursor: 0,
        }
    }

    pub fn center(&self) -> usize {
        self.center
    }

    /// Nodes in sweep order (angle from east, nearer first on ties).
    pub fn angular_order(&self) -> &[usize] {
        &self.order
    }

    /// Indices into the scene's edge list, nearest to the center first.
    pub fn active_edges(&self) -> &[usize] {
        &self.active
    }

    /// Processes the next node event; returns the node and its visibility.
    pub fn advance(&mut self) -> Option<(usize, bool)> {
        let k = self.cursor;
        let w = *self.order.get(k)?;
        self.cursor += 1;

        let incident: &[usize] = if self.nodes.is_corner(w) {
            self.nodes.scene.incident_edges(w)
        } else {
            &[]
        };
        for &e in incident {
            if let EdgeSpan::Swept { end, .. } = self.spans[e] {
                if end == w {
                    if let Some(pos) = self.active.iter().position(|&a| a == e) {
                        self.active.remove(pos);
                    } else {
                        debug_assert!(false, "edge {e} left the sweep without entering it");
                    }
                }
            }
        }

        let seen = self.check(k, w);
        self.visible[w] = seen;

        for &e in incident {
            if let EdgeSpan::Swept { start, end } = self.spans[e] {
                if start == w {
                    let other = self.nodes.point(end);
                    let pos = self.active.partition_point(|&f| self.nearer_than_new(f, w, other));
                    self.active.insert(pos, e);
                }
            }
        }
        Some((w, seen))
    }

    fn check(&self, k: usize, w: usize) -> bool {
        let p = self.origin;
        let wp = self.nodes.point(w);
        if let Some((prev, next)) = self.nodes.corner(self.center) {
            if enters_interior_at_corner(prev, p, next, wp - p) {
                return false;
            }
        }
        if let Some((prev, next)) = self.nodes.corner(w) {
            if enters_interior_at_corner(prev, wp, next, p - wp) {
                return false;
            }
        }
        let scene = self.nodes.scene;
        let wall = |e: usize| {
            let (a, b) = scene.edges[e];
            (scene.vertices[a], scene.vertices[b])
        };
        let predecessor = (k > 0 && self.group[k - 1] == self.group[k]).then(|| self.order[k - 1]);
        match predecessor {
            None => match self.active.first() {
                Some(&e) => {
                    let (a, b) = wall(e);
                    !segments_cross_properly(p, wp, a, b)
                }
                None => true,
            },
            Some(q) => {
                if !self.visible[q] {
                    return false;
                }
                let qp = self.nodes.point(q);
                if let Some((prev, next)) = self.nodes.corner(q) {
                    if enters_interior_at_corner(prev, qp, next, wp - qp) {
                        return false;
                    }
                }
                !self.active.iter().any(|&e| {
                    let (a, b) = wall(e);
                    segments_cross_properly(qp, wp, a, b)
                })
            }
        }
    }

    /// Whether active wall `f` lies nearer to the center than a wall leaving
    /// `w` toward `other`, just counter-clockwise of the ray through `w`.
    fn nearer_than_new(&self, f: usize, w: usize, other: Point2D) -> bool {
        let scene = self.nodes.scene;
        let (fa, fb) = scene.edges[f];
        let wp = self.nodes.point(w);
        if fa == w || fb == w {
            let f_other = scene.vertices[if fa == w { fb } else { fa }];
            // The wall bending back toward the center is met first.
            return orientation(wp, other, f_other) == Orientation::CounterClockwise;
        }
        let dir = wp - self.origin;
        ray_distance(self.origin, dir, scene.vertices[fa], scene.vertices[fb]) < 1.0
    }
}

/// Distance from `origin` to segment `a`-`b` along `dir`, in units of `|dir|`.
fn ray_distance(origin: Point2D, dir: Point2D, a: Point2D, b: Point2D) -> f64 {
    let ab = b - a;
    let denom = dir.cross(ab);
    if denom == 0.0 {
        let n2 = dir.dot(dir);
        return ((a - origin).dot(dir) / n2).min((b - origin).dot(dir) / n2);
    }
    (a - origin).cross(ab) / denom
}

pub(crate) fn sweep_visible(nodes: NodeSet<'_>, center: usize) -> Vec<usize> {
    let mut state = SweepState::new(nodes, center);
    let mut out = Vec::new();
    while let Some((w, seen)) = state.advance() {
        if seen {
            out.push(w);
        }
    }
    out.sort_unstable();
    out
}

/// Nodes visible from `center`, in ascending index order.
///
/// Node indices cover the scene corners followed by `extras`.
pub fn visibility_tree(
    center: usize,
    scene: &SceneGraph,
    extras: &[Point2D],
) -> Result<Vec<usize>, VisibilityError> {
    let nodes = NodeSet::new(scene, extras)?;
    if center >= nodes.len() {
        return Err(VisibilityError::NodeOutOfRange(center));
    }
    Ok(sweep_visible(nodes, center))
}

/// Start a sweep for inspection; see [`SweepState::advance`].
pub fn start_sweep<'a>(
    center: usize,
    scene: &'a SceneGraph,
    extras: &'a [Point2D],
) -> Result<SweepState<'a>, VisibilityError> {
    let nodes = NodeSet::new(scene, extras)?;
    if center >= nodes.len() {
        return Err(VisibilityError::NodeOutOfRange(center));
    }
    Ok(SweepState::new(nodes, center))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::BuildingPolygon;

    fn p(x: f64, y: f64) -> Point2D {
        Point2D::new(x, y)
    }

    fn rect(x0: f64, y0: f64, x1: f64, y1: f64) -> BuildingPolygon {
        BuildingPolygon::new(vec![p(x0, y0), p(x1, y0), p(x1, y1), p(x0, y1)], 40.0).unwrap()
    }

    #[test]
    fn unobstructed_extras_are_visible() {
        let scene = SceneGraph::from_buildings(&[]);
        let seen = visibility_tree(0, &scene, &[p(0., 0.), p(5., 0.), p(0., 5.)]).unwrap();
        assert_eq!(seen, vec![1, 2]);
    }

    #[test]
    fn square_blocks_the_chord() {
        let scene = SceneGraph::from_buildings(&[rect(-0.5, -0.5, 0.5, 0.5)]);
        let extras = [p(-2., 0.), p(2., 0.)];
        let seen = visibility_tree(4, &scene, &extras).unwrap();
        assert!(!seen.contains(&5));
        assert_eq!(seen, vec![0, 3]);
    }

    #[test]
    fn wall_crossing_initial_ray_blocks() {
        // Wall straddles the east ray from the center.
        let scene = SceneGraph::from_buildings(&[rect(2., -1., 3., 1.)]);
        let extras = [p(0., 0.), p(5., 0.), p(5., 0.5)];
        let seen = visibility_tree(4, &scene, &extras).unwrap();
        assert!(!seen.contains(&5) && !seen.contains(&6));
        assert_eq!(seen, vec![0, 3]);
    }

    #[test]
    fn collinear_corners_do_not_block_but_interior_does() {
        // Two squares whose near corners lie on one line with the center.
        let scene = SceneGraph::from_buildings(&[rect(1., 1., 2., 2.), rect(3., 3., 4., 4.)]);
        let extras = [p(0., 0.), p(5., 5.)];
        let seen = visibility_tree(8, &scene, &extras).unwrap();
        // (1,1) visible; (2,2) behind the first square's interior.
        assert!(seen.contains(&0));
        assert!(!seen.contains(&2));
        assert!(!seen.contains(&4));
        assert!(!seen.contains(&9));
    }

    #[test]
    fn grazing_a_corner_is_unobstructed() {
        let scene = SceneGraph::from_buildings(&[rect(1., 1., 2., 2.)]);
        // The chord x + y = 2 touches the square only at (1,1).
        let extras = [p(0., 2.), p(2., 0.)];
        let seen = visibility_tree(4, &scene, &extras).unwrap();
        assert!(seen.contains(&5));
    }

    #[test]
    fn run_along_a_wall_is_visible() {
        let scene = SceneGraph::from_buildings(&[rect(1., 0., 2., 1.)]);
        let extras = [p(0., 0.), p(3., 0.)];
        let seen = visibility_tree(4, &scene, &extras).unwrap();
        assert!(seen.contains(&0) && seen.contains(&1) && seen.contains(&5));
    }

    #[test]
    fn active_set_matches_ray_crossings_between_events() {
        let scene = SceneGraph::from_buildings(&[
            rect(2., -1., 3., 1.),
            rect(-4., 2., -2., 3.),
            BuildingPolygon::new(vec![p(0., -5.), p(2., -3.), p(-1., -2.)], 10.0).unwrap(),
        ]);
        let extras = [p(0., 0.)];
        let center = scene.vertices.len();
        let mut sweep = start_sweep(center, &scene, &extras).unwrap();
        let origin = p(0., 0.);
        let order: Vec<Point2D> =
            sweep.angular_order().iter().map(|&i| scene.vertices[i]).collect();
        let angle = |q: Point2D| {
            let a = (q.y - origin.y).atan2(q.x - origin.x);
            if a < 0.0 { a + TAU } else { a }
        };
        let mut k = 0;
        while sweep.advance().is_some() {
            let lo = angle(order[k]);
            let hi = if k + 1 < order.len() { angle(order[k + 1]) } else { TAU };
            k += 1;
            if hi - lo < 1e-9 {
                continue;
            }
            let mid = 0.5 * (lo + hi);
            let far = origin + p(mid.cos(), mid.sin()) * 100.0;
            let mut expected: Vec<(f64, usize)> = scene
                .edges
                .iter()
                .enumerate()
                .filter(|(_, &(a, b))| segments_cross_properly(origin, far, scene.vertices[a], scene.vertices[b]))
                .map(|(e, &(a, b))| (ray_distance(origin, far - origin, scene.vertices[a], scene.vertices[b]), e))
                .collect();
            expected.sort_by(|a, b| a.0.total_cmp(&b.0));
            let expected: Vec<usize> = expected.into_iter().map(|(_, e)| e).collect();
            assert_eq!(sweep.active_edges(), expected.as_slice(), "after event {k}");
        }
    }
}
