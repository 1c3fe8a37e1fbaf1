use super::point::Point2;
use super::polygon::Polygon;
use super::GeomError;

/// Minimal convex polygon containing `points`, CCW, without collinear
/// vertices (Andrew's monotone chain).
pub fn convex_hull(points: &[Point2]) -> Result<Polygon, GeomError> {
    let hull = hull_vertices(points);
    if hull.len() < 3 {
        return Err(GeomError::Degenerate(format!(
            "convex hull of {} point(s) is not a polygon",
            points.len()
        )));
    }
    Ok(Polygon::from_ccw_unchecked(hull))
}

pub(crate) fn hull_vertices(points: &[Point2]) -> Vec<Point2> {
    let mut pts: Vec<Point2> = points.iter().copied().filter(|p| p.is_finite()).collect();
    pts.sort_by(|a, b| a.x.total_cmp(&b.x).then(a.y.total_cmp(&b.y)));
    pts.dedup_by(|a, b| a.dist(*b) <= 1e-12);
    if pts.len() < 3 {
        return pts;
    }
    let turn = |o: Point2, a: Point2, b: Point2| (a - o).cross(b - o);
    let mut lower: Vec<Point2> = Vec::new();
    for &p in &pts {
        while lower.len() >= 2 && turn(lower[lower.len() - 2], lower[lower.len() - 1], p) <= 0.0 {
            lower.pop();
        }
        lower.push(p);
    }
    let mut upper: Vec<Point2> = Vec::new();
    for &p in pts.iter().rev() {
        while upper.len() >= 2 && turn(upper[upper.len() - 2], upper[upper.len() - 1], p) <= 0.0 {
            upper.pop();
        }
        upper.push(p);
    }
    lower.pop();
    upper.pop();
    lower.extend(upper);
    lower
}

/// Smallest distance between two parallel supporting lines of the convex
/// hull of `poly`. One of the supporting lines of the optimum always
/// contains a hull edge, so every edge is tried against its farthest vertex.
pub fn min_width(poly: &Polygon) -> f64 {
    let hull = hull_vertices(poly.vertices());
    let n = hull.len();
    if n < 3 {
        return 0.0;
    }
    let mut best = f64::INFINITY;
    for i in 0..n {
        let (a, b) = (hull[i], hull[(i + 1) % n]);
        let dir = (b - a).normalized();
        let far = hull
            .iter()
            .map(|&p| dir.cross(p - a).abs())
            .fold(0.0_f64, f64::max);
        best = best.min(far);
    }
    best
}
