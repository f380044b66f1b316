use super::SceneGraph;
use crate::geometry::{point_in_polygon, segments_cross_properly, strictly_inside_segment, Containment, Point2D};

/// Brute-force line-of-sight test between two points.
///
/// The segment is blocked by any wall it crosses properly. Otherwise it is
/// split at every corner it passes through, and each piece is blocked if its
/// midpoint lies strictly inside a footprint. Contact with walls and corners
/// alone never blocks.
pub fn visible_naive(a: Point2D, b: Point2D, scene: &SceneGraph) -> bool {
    for &(u, v) in &scene.edges {
        if segments_cross_properly(a, b, scene.vertices[u], scene.vertices[v]) {
            return false;
        }
    }
    let dir = b - a;
    let len2 = dir.dot(dir);
    let mut cuts = vec![0.0, 1.0];
    cuts.extend(
        scene
            .vertices
            .iter()
            .filter(|&&q| strictly_inside_segment(q, a, b))
            .map(|&q| (q - a).dot(dir) / len2),
    );
    cuts.sort_by(f64::total_cmp);
    cuts.windows(2).filter(|w| w[1] > w[0]).all(|w| {
        let mid = a + dir * (0.5 * (w[0] + w[1]));
        scene
            .buildings()
            .iter()
            .all(|poly| point_in_polygon(mid, poly) != Containment::Inside)
    })
}
