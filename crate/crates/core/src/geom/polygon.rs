use serde::{Deserialize, Serialize};

use super::point::{point_segment_distance, Point2};
use super::predicates::segments_intersect;
use super::GeomError;

/// Vertices closer than this are merged when a polygon is ingested.
pub const DUPLICATE_VERTEX_TOL: f64 = 1e-6;

/// A simple polygon with counter-clockwise vertex order. The ring is
/// implicitly closed: the first vertex is not repeated at the end.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Polygon {
    vertices: Vec<Point2>,
}

impl Polygon {
    /// Normalizes a raw ring: drops a repeated closing vertex and duplicate
    /// consecutive vertices, enforces CCW order and rejects self-intersections.
    pub fn new(raw: Vec<Point2>) -> Result<Self, GeomError> {
        if let Some(bad) = raw.iter().find(|p| !p.is_finite()) {
            return Err(GeomError::NonFinite(*bad));
        }
        let mut vertices: Vec<Point2> = Vec::with_capacity(raw.len());
        for p in raw {
            if vertices
                .last()
                .is_none_or(|last| last.dist(p) >= DUPLICATE_VERTEX_TOL)
            {
                vertices.push(p);
            }
        }
        while vertices.len() > 1
            && vertices[0].dist(*vertices.last().unwrap()) < DUPLICATE_VERTEX_TOL
        {
            vertices.pop();
        }
        if vertices.len() < 3 {
            return Err(GeomError::TooFewVertices(vertices.len()));
        }
        if let Some(at) = first_self_intersection(&vertices) {
            return Err(GeomError::SelfIntersection { at });
        }
        let area = signed_area(&vertices);
        if area.abs() <= 1e-12 {
            return Err(GeomError::Degenerate("polygon has zero area".into()));
        }
        if area < 0.0 {
            vertices.reverse();
        }
        Ok(Self { vertices })
    }

    /// Wraps vertices that are already known to form a valid CCW polygon.
    pub(crate) fn from_ccw_unchecked(vertices: Vec<Point2>) -> Self {
        debug_assert!(vertices.len() >= 3);
        Self { vertices }
    }

    pub fn vertices(&self) -> &[Point2] {
        &self.vertices
    }

    pub fn len(&self) -> usize {
        self.vertices.len()
    }

    pub fn is_empty(&self) -> bool {
        self.vertices.is_empty()
    }

    /// Edges `(v[i], v[i+1])` including the closing edge.
    pub fn edges(&self) -> impl Iterator<Item = (Point2, Point2)> + '_ {
        let n = self.vertices.len();
        (0..n).map(move |i| (self.vertices[i], self.vertices[(i + 1) % n]))
    }

    pub fn area(&self) -> f64 {
        signed_area(&self.vertices)
    }

    pub fn perimeter(&self) -> f64 {
        self.edges().map(|(a, b)| a.dist(b)).sum()
    }

    pub fn bbox(&self) -> (Point2, Point2) {
        bbox(&self.vertices)
    }

    /// Area centroid.
    pub fn centroid(&self) -> Point2 {
        let a = self.area();
        let (mut cx, mut cy) = (0.0, 0.0);
        for (p, q) in self.edges() {
            let w = p.cross(q);
            cx += (p.x + q.x) * w;
            cy += (p.y + q.y) * w;
        }
        Point2::new(cx / (6.0 * a), cy / (6.0 * a))
    }

    pub fn boundary_distance(&self, p: Point2) -> f64 {
        self.edges()
            .map(|(a, b)| point_segment_distance(p, a, b))
            .fold(f64::INFINITY, f64::min)
    }

    /// Applies `f` to every vertex. `f` must be a rigid motion or another
    /// orientation-preserving map.
    pub fn map(&self, f: impl Fn(Point2) -> Point2) -> Polygon {
        Polygon {
            vertices: self.vertices.iter().map(|&p| f(p)).collect(),
        }
    }

    pub fn translated(&self, d: Point2) -> Polygon {
        self.map(|p| p + d)
    }

    pub fn rotated(&self, angle: f64, about: Point2) -> Polygon {
        self.map(|p| about + (p - about).rotated(angle))
    }

    /// Closed ring with the first vertex repeated at the end.
    pub fn closed_ring(&self) -> Vec<Point2> {
        let mut ring = self.vertices.clone();
        ring.push(self.vertices[0]);
        ring
    }
}

pub(crate) fn signed_area(v: &[Point2]) -> f64 {
    let n = v.len();
    let mut s = 0.0;
    for i in 0..n {
        s += v[i].cross(v[(i + 1) % n]);
    }
    0.5 * s
}

pub(crate) fn bbox(points: &[Point2]) -> (Point2, Point2) {
    let mut lo = Point2::new(f64::INFINITY, f64::INFINITY);
    let mut hi = Point2::new(f64::NEG_INFINITY, f64::NEG_INFINITY);
    for p in points {
        lo.x = lo.x.min(p.x);
        lo.y = lo.y.min(p.y);
        hi.x = hi.x.max(p.x);
        hi.y = hi.y.max(p.y);
    }
    (lo, hi)
}

fn first_self_intersection(v: &[Point2]) -> Option<Point2> {
    let n = v.len();
    for i in 0..n {
        let (a0, a1) = (v[i], v[(i + 1) % n]);
        // Adjacent edges only meet at their shared vertex unless they fold back.
        let (b0, b1) = (v[(i + 1) % n], v[(i + 2) % n]);
        let (d1, d2) = (a1 - a0, b1 - b0);
        if d1.cross(d2).abs() <= 1e-12 * d1.norm() * d2.norm() && d1.dot(d2) < 0.0 {
            return Some(a1);
        }
        for j in (i + 2)..n {
            if i == 0 && j == n - 1 {
                continue;
            }
            let (c0, c1) = (v[j], v[(j + 1) % n]);
            if segments_intersect(a0, a1, c0, c1) {
                return Some(c0);
            }
        }
    }
    None
}

/// An open polyline with at least two waypoints and no repeated
/// consecutive waypoints.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Polyline {
    waypoints: Vec<Point2>,
}

/// Consecutive waypoints closer than this are merged.
pub const WAYPOINT_MERGE_TOL: f64 = 1e-9;

impl Polyline {
    pub fn new(points: impl IntoIterator<Item = Point2>) -> Result<Self, GeomError> {
        let mut waypoints: Vec<Point2> = Vec::new();
        for p in points {
            if !p.is_finite() {
                return Err(GeomError::NonFinite(p));
            }
            if waypoints
                .last()
                .is_none_or(|last| last.dist(p) > WAYPOINT_MERGE_TOL)
            {
                waypoints.push(p);
            }
        }
        if waypoints.len() < 2 {
            return Err(GeomError::TooFewVertices(waypoints.len()));
        }
        Ok(Self { waypoints })
    }

    pub fn waypoints(&self) -> &[Point2] {
        &self.waypoints
    }

    pub fn into_waypoints(self) -> Vec<Point2> {
        self.waypoints
    }

    pub fn start(&self) -> Point2 {
        self.waypoints[0]
    }

    pub fn end(&self) -> Point2 {
        *self.waypoints.last().unwrap()
    }

    pub fn segments(&self) -> impl Iterator<Item = (Point2, Point2)> + '_ {
        self.waypoints.windows(2).map(|w| (w[0], w[1]))
    }

    pub fn length(&self) -> f64 {
        path_length(&self.waypoints)
    }
}

pub fn path_length(points: &[Point2]) -> f64 {
    points.windows(2).map(|w| w[0].dist(w[1])).sum()
}
