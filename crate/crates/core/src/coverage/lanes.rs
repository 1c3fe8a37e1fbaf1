use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use crate::geom::{hull_vertices, Point2, Polygon};

/// Chords shorter than this are dropped.
const MIN_CHORD: f64 = 1e-6;

/// A straight pass between two points on a headland loop.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Lane {
    pub a: Point2,
    pub b: Point2,
    /// Signed offset of the lane line along the lane normal.
    pub offset: f64,
}

impl Lane {
    pub fn length(&self) -> f64 {
        self.a.dist(self.b)
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct LaneSet {
    pub orientation: f64,
    /// Sorted by offset, then by position along the lane direction.
    pub lanes: Vec<Lane>,
}

impl LaneSet {
    pub fn total_length(&self) -> f64 {
        self.lanes.iter().map(Lane::length).sum()
    }
}

pub(crate) fn direction(orientation: f64) -> (Point2, Point2) {
    let u = Point2::new(orientation.cos(), orientation.sin());
    (u, u.perp())
}

/// Chords of `poly` along the line `{p : v·p = offset}`, ordered along `u`.
/// Edges are treated as half-open so a line through a vertex is counted once.
pub(crate) fn chords(poly: &Polygon, u: Point2, v: Point2, offset: f64) -> Vec<(Point2, Point2)> {
    let mut hits: Vec<(f64, Point2)> = Vec::new();
    for (a, b) in poly.edges() {
        let (sa, sb) = (v.dot(a) - offset, v.dot(b) - offset);
        if (sa > 0.0) != (sb > 0.0) {
            let p = a.lerp(b, sa / (sa - sb));
            hits.push((u.dot(p), p));
        }
    }
    hits.sort_by(|x, y| x.0.total_cmp(&y.0));
    hits.chunks_exact(2)
        .filter(|c| c[1].0 - c[0].0 >= MIN_CHORD)
        .map(|c| (c[0].1, c[1].1))
        .collect()
}

fn extent(points: &[Point2], v: Point2) -> (f64, f64) {
    points.iter().fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), p| {
        let s = v.dot(*p);
        (lo.min(s), hi.max(s))
    })
}

/// Parallel lanes inside one headland loop. The headland pass already
/// sprays a strip of width `w/2` inside the loop, so lanes need to cover the
/// remaining extent of `ext - w` perpendicular to `orientation`. They are
/// spaced exactly `w` apart and centered on the extent.
pub fn generate_lanes(headland: &Polygon, w: f64, orientation: f64) -> LaneSet {
    let (u, v) = direction(orientation);
    let (lo, hi) = extent(headland.vertices(), v);
    let remaining = hi - lo - w;
    // Extents carry offsetting noise, so a strip within 1e-6 m of a whole
    // number of widths does not get an extra lane.
    let count = if remaining <= 1e-6 {
        0
    } else {
        ((remaining - 1e-6) / w).ceil().max(1.0) as usize
    };
    let center = 0.5 * (lo + hi);
    let mut lanes = Vec::new();
    for k in 0..count {
        let offset = center + (k as f64 - 0.5 * (count as f64 - 1.0)) * w;
        for (a, b) in chords(headland, u, v, offset) {
            lanes.push(Lane { a, b, offset });
        }
    }
    LaneSet { orientation, lanes }
}

/// Directions of the convex-hull edges of `patch`, folded into `[0, π)`,
/// sorted and de-duplicated.
pub fn candidate_orientations(patch: &Polygon) -> Vec<f64> {
    let hull = hull_vertices(patch.vertices());
    let n = hull.len();
    let mut angles: Vec<f64> = (0..n)
        .map(|i| {
            let d = hull[(i + 1) % n] - hull[i];
            let a = d.y.atan2(d.x).rem_euclid(PI);
            if a >= PI - 1e-12 {
                0.0
            } else {
                a
            }
        })
        .collect();
    angles.sort_by(f64::total_cmp);
    angles.dedup_by(|a, b| (*a - *b).abs() <= 1e-9);
    angles
}

/// Orientation minimizing the lane count over all headland components,
/// then the total lane length (within 1e-6 m), then the angle.
pub fn select_orientation_for(patch: &Polygon, headland: &[Polygon], w: f64) -> f64 {
    let mut best: Option<(usize, f64, f64)> = None;
    for theta in candidate_orientations(patch) {
        let sets: Vec<LaneSet> = headland.iter().map(|h| generate_lanes(h, w, theta)).collect();
        let count: usize = sets.iter().map(|s| s.lanes.len()).sum();
        let length: f64 = sets.iter().map(LaneSet::total_length).sum();
        let better = match best {
            None => true,
            Some((bc, bl, _)) => count < bc || (count == bc && length < bl - 1e-6),
        };
        if better {
            best = Some((count, length, theta));
        }
    }
    best.map_or(0.0, |b| b.2)
}
