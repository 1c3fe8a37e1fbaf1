use super::point::{point_segment_distance, Point2};
use super::polygon::Polygon;

/// Distance under which a point counts as lying on a polygon boundary.
pub const BOUNDARY_TOL: f64 = 1e-9;

/// Relative tolerance of [`segments_parallel`].
pub const PARALLEL_TOL: f64 = 1e-9;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Containment {
    Inside,
    Boundary,
    Outside,
}

/// True iff the lines through `a1-a2` and `b1-b2` are parallel within
/// [`PARALLEL_TOL`]. Degenerate (zero-length) inputs are reported as not
/// parallel.
pub fn segments_parallel(a1: Point2, a2: Point2, b1: Point2, b2: Point2) -> bool {
    let (da, db) = (a2 - a1, b2 - b1);
    let scale = da.norm() * db.norm();
    if scale == 0.0 {
        return false;
    }
    da.cross(db).abs() <= PARALLEL_TOL * scale
}

fn orient(a: Point2, b: Point2, c: Point2) -> f64 {
    (b - a).cross(c - a)
}

fn on_segment(p: Point2, a: Point2, b: Point2) -> bool {
    point_segment_distance(p, a, b) <= 1e-12 * (1.0 + a.dist(b))
}

/// Closed-segment intersection test (touching counts).
pub fn segments_intersect(a0: Point2, a1: Point2, b0: Point2, b1: Point2) -> bool {
    let d1 = orient(b0, b1, a0);
    let d2 = orient(b0, b1, a1);
    let d3 = orient(a0, a1, b0);
    let d4 = orient(a0, a1, b1);
    if ((d1 > 0.0 && d2 < 0.0) || (d1 < 0.0 && d2 > 0.0))
        && ((d3 > 0.0 && d4 < 0.0) || (d3 < 0.0 && d4 > 0.0))
    {
        return true;
    }
    on_segment(a0, b0, b1) || on_segment(a1, b0, b1) || on_segment(b0, a0, a1) || on_segment(b1, a0, a1)
}

/// Classifies `p` against `poly` with boundary tolerance [`BOUNDARY_TOL`].
pub fn point_in_polygon(p: Point2, poly: &Polygon) -> Containment {
    if poly.boundary_distance(p) <= BOUNDARY_TOL {
        return Containment::Boundary;
    }
    let mut inside = false;
    for (a, b) in poly.edges() {
        if (a.y > p.y) != (b.y > p.y) {
            let x = a.x + (p.y - a.y) / (b.y - a.y) * (b.x - a.x);
            if p.x < x {
                inside = !inside;
            }
        }
    }
    if inside {
        Containment::Inside
    } else {
        Containment::Outside
    }
}

/// Sorted, de-duplicated parameters in `(0, 1)` at which segment `p-q`
/// touches the boundary of `poly`.
fn boundary_contact_params(p: Point2, q: Point2, poly: &Polygon) -> Vec<f64> {
    let r = q - p;
    let rlen = r.norm();
    let mut ts = Vec::new();
    for (c, d) in poly.edges() {
        let s = d - c;
        let denom = r.cross(s);
        let slen = s.norm();
        if denom.abs() > 1e-12 * rlen * slen {
            let t = (c - p).cross(s) / denom;
            let u = (c - p).cross(r) / denom;
            if (-1e-12..=1.0 + 1e-12).contains(&u) {
                ts.push(t);
            }
        } else if (c - p).cross(r).abs() <= 1e-12 * rlen * (1.0 + (c - p).norm()) {
            // Collinear: both edge endpoints are breakpoints.
            ts.push((c - p).dot(r) / (rlen * rlen));
            ts.push((d - p).dot(r) / (rlen * rlen));
        }
    }
    ts.retain(|t| *t > 1e-12 && *t < 1.0 - 1e-12);
    ts.sort_by(f64::total_cmp);
    ts.dedup_by(|a, b| (*a - *b).abs() <= 1e-12);
    ts
}

/// A maximal parameter interval of a segment with uniform containment.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SegmentPiece {
    pub t0: f64,
    pub t1: f64,
    pub class: Containment,
}

/// Splits segment `p-q` at its boundary contacts with `poly` and classifies
/// each piece by its midpoint. Adjacent pieces of equal class are merged.
pub fn segment_pieces(p: Point2, q: Point2, poly: &Polygon) -> Vec<SegmentPiece> {
    let mut breaks = vec![0.0];
    breaks.extend(boundary_contact_params(p, q, poly));
    breaks.push(1.0);
    let mut pieces: Vec<SegmentPiece> = Vec::new();
    for w in breaks.windows(2) {
        let mid = p.lerp(q, 0.5 * (w[0] + w[1]));
        let class = point_in_polygon(mid, poly);
        match pieces.last_mut() {
            Some(last) if last.class == class => last.t1 = w[1],
            _ => pieces.push(SegmentPiece {
                t0: w[0],
                t1: w[1],
                class,
            }),
        }
    }
    pieces
}

/// Parameters in `(0, 1)` where segment `p-q` enters or leaves the interior
/// of `poly`. Grazing contacts that do not enter the interior are omitted.
pub fn segment_clips_polygon(p: Point2, q: Point2, poly: &Polygon) -> Vec<f64> {
    let pieces = segment_pieces(p, q, poly);
    pieces
        .windows(2)
        .filter(|w| (w[0].class == Containment::Inside) != (w[1].class == Containment::Inside))
        .map(|w| w[0].t1)
        .collect()
}

/// True iff some open part of segment `p-q` lies strictly inside `poly`.
pub fn segment_enters_interior(p: Point2, q: Point2, poly: &Polygon) -> bool {
    segment_pieces(p, q, poly)
        .iter()
        .any(|piece| piece.class == Containment::Inside)
}
