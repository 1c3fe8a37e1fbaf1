use super::point::{project_on_segment, Point2};
use super::polygon::Polygon;

/// Arc-length parameterization of a closed polygon boundary, walked in the
/// polygon's CCW vertex order. Positions `s` live in `[0, perimeter)`.
#[derive(Clone, Debug, PartialEq)]
pub struct Ring {
    vertices: Vec<Point2>,
    /// `cum[i]` is the arc length at vertex `i`; `cum[n]` is the perimeter.
    cum: Vec<f64>,
}

impl Ring {
    pub fn new(poly: &Polygon) -> Self {
        let vertices = poly.vertices().to_vec();
        let n = vertices.len();
        let mut cum = Vec::with_capacity(n + 1);
        cum.push(0.0);
        for i in 0..n {
            let d = vertices[i].dist(vertices[(i + 1) % n]);
            cum.push(cum[i] + d);
        }
        Self { vertices, cum }
    }

    pub fn vertices(&self) -> &[Point2] {
        &self.vertices
    }

    pub fn perimeter(&self) -> f64 {
        self.cum[self.vertices.len()]
    }

    fn wrap(&self, s: f64) -> f64 {
        let p = self.perimeter();
        let w = s.rem_euclid(p) + 0.0;
        if w >= p {
            0.0
        } else {
            w
        }
    }

    /// Index of the edge containing position `s`.
    fn edge_at(&self, s: f64) -> usize {
        let n = self.vertices.len();
        self.cum[..n].partition_point(|&c| c <= s).saturating_sub(1)
    }

    pub fn point_at(&self, s: f64) -> Point2 {
        let s = self.wrap(s);
        let n = self.vertices.len();
        let i = self.edge_at(s);
        let len = self.cum[i + 1] - self.cum[i];
        let t = if len > 0.0 { (s - self.cum[i]) / len } else { 0.0 };
        self.vertices[i].lerp(self.vertices[(i + 1) % n], t)
    }

    /// Arc position of the boundary point closest to `p` (lowest edge wins ties).
    pub fn project(&self, p: Point2) -> (f64, Point2, f64) {
        let n = self.vertices.len();
        let mut best = (0.0, self.vertices[0], f64::INFINITY);
        for i in 0..n {
            let (a, b) = (self.vertices[i], self.vertices[(i + 1) % n]);
            let (t, q) = project_on_segment(p, a, b);
            let d = p.dist(q);
            if d < best.2 - 1e-12 {
                best = (self.wrap(self.cum[i] + t * (self.cum[i + 1] - self.cum[i])), q, d);
            }
        }
        best
    }

    /// Arc length travelled from `from` to `to` in CCW (forward) direction.
    pub fn forward_distance(&self, from: f64, to: f64) -> f64 {
        (to - from).rem_euclid(self.perimeter())
    }

    /// Length and direction (`true` = forward) of the shorter arc.
    pub fn shorter_arc(&self, from: f64, to: f64) -> (f64, bool) {
        let fwd = self.forward_distance(from, to);
        let bwd = self.perimeter() - fwd;
        if fwd <= bwd {
            (fwd, true)
        } else {
            (bwd, false)
        }
    }

    /// Waypoints of the walk of arc length `len` starting at `from`, in the
    /// given direction. The start point is excluded, the end point included.
    pub fn walk(&self, from: f64, len: f64, forward: bool) -> Vec<Point2> {
        let n = self.vertices.len();
        let mut out = Vec::new();
        if len <= 0.0 {
            return out;
        }
        let p = self.perimeter();
        if forward {
            let mut i = self.edge_at(self.wrap(from));
            let mut base = from - self.wrap(from);
            let end = from + len;
            loop {
                let next_s = base + self.cum[i + 1];
                if next_s >= end - 1e-12 {
                    break;
                }
                out.push(self.vertices[(i + 1) % n]);
                i += 1;
                if i == n {
                    i = 0;
                    base += p;
                }
            }
            out.push(self.point_at(end));
        } else {
            let w = self.wrap(from);
            let mut base = from - w;
            let mut i = self.edge_at(w);
            if w - self.cum[i] <= 1e-12 {
                // Standing on vertex i: it is not part of the walk.
                if i == 0 {
                    i = n - 1;
                    base -= p;
                } else {
                    i -= 1;
                }
            }
            let end = from - len;
            loop {
                let vs = base + self.cum[i];
                if vs <= end + 1e-12 {
                    break;
                }
                out.push(self.vertices[i]);
                if i == 0 {
                    i = n - 1;
                    base -= p;
                } else {
                    i -= 1;
                }
            }
            out.push(self.point_at(end));
        }
        out
    }

    pub fn closed_polyline(&self) -> Vec<Point2> {
        let mut v = self.vertices.clone();
        v.push(self.vertices[0]);
        v
    }
}
