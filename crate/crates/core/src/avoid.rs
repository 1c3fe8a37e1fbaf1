//! Obstacle avoidance and field containment for transit segments.

use std::f64::consts::TAU;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::geom::{
    convex_hull, hull_vertices, point_in_polygon, point_segment_distance, segment_enters_interior,
    segment_pieces, Containment, Point2, Polygon, Polyline, Ring,
};
use crate::model::Avoidance;

/// Points used to approximate the rounded corners of an inflated hull.
const INFLATION_SEGMENTS: usize = 32;

#[derive(Clone, Debug, Error, PartialEq)]
pub enum AvoidError {
    #[error("endpoint ({}, {}) lies inside obstacle hull {obstacle}", .point.x, .point.y)]
    InfeasibleEndpoint { obstacle: usize, point: Point2 },
    #[error("obstacle detour did not converge after {iterations} iterations")]
    NotConverged { iterations: usize, path: Polyline },
    #[error("path endpoint ({}, {}) lies outside the field", .point.x, .point.y)]
    EndpointOutside { point: Point2 },
}

/// Convex stand-in for one or more obstacles.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ObstacleHull {
    /// Obstacles covered by this hull; several when their hulls overlapped.
    pub originals: Vec<Polygon>,
    pub hull: Polygon,
    pub inflation: f64,
}

impl ObstacleHull {
    pub fn new(original: Polygon, inflation: f64) -> Self {
        let hull = inflated_hull(original.vertices(), inflation);
        Self {
            originals: vec![original],
            hull,
            inflation,
        }
    }
}

/// Convex hull of `points` grown by `inflation` (corners rounded by a
/// polygonal arc that stays outside the exact offset).
fn inflated_hull(points: &[Point2], inflation: f64) -> Polygon {
    if inflation <= 0.0 {
        return convex_hull(points).expect("obstacle polygons have positive area");
    }
    // Circumscribed polygon: vertices at r / cos(π/n) keep every edge
    // outside the true circle.
    let r = inflation / (std::f64::consts::PI / INFLATION_SEGMENTS as f64).cos();
    let mut pts = Vec::with_capacity(points.len() * INFLATION_SEGMENTS);
    for &p in points {
        for k in 0..INFLATION_SEGMENTS {
            let a = TAU * k as f64 / INFLATION_SEGMENTS as f64;
            pts.push(p + Point2::new(a.cos(), a.sin()) * r);
        }
    }
    convex_hull(&pts).expect("inflated hull has positive area")
}

fn hulls_touch(a: &Polygon, b: &Polygon) -> bool {
    crate::geom::closest_boundary_points(a, b).is_err()
}

/// Hulls of all obstacles, with overlapping or touching hulls merged into
/// the hull of their union until all hulls are pairwise disjoint.
pub fn build_hulls(obstacles: &[Polygon], inflation: f64) -> Vec<ObstacleHull> {
    let mut hulls: Vec<ObstacleHull> = obstacles
        .iter()
        .map(|o| ObstacleHull::new(o.clone(), inflation))
        .collect();
    'merge: loop {
        for i in 0..hulls.len() {
            for j in (i + 1)..hulls.len() {
                if hulls_touch(&hulls[i].hull, &hulls[j].hull) {
                    let b = hulls.remove(j);
                    let a = &mut hulls[i];
                    let pts: Vec<Point2> = a.hull.vertices().iter().chain(b.hull.vertices()).copied().collect();
                    a.hull = convex_hull(&pts).expect("union of hulls");
                    a.originals.extend(b.originals);
                    continue 'merge;
                }
            }
        }
        break;
    }
    hulls
}

/// Vertices of `conv(hull ∪ {a, b})` in CCW order, with `a` and `b`
/// present even when they sit on an edge.
fn wrap_with(hull: &Polygon, a: Point2, b: Point2) -> (Vec<Point2>, usize, usize) {
    let mut pts: Vec<Point2> = hull.vertices().to_vec();
    pts.extend([a, b]);
    let mut h = hull_vertices(&pts);
    for p in [a, b] {
        if h.iter().any(|v| v.dist(p) <= 1e-9) {
            continue;
        }
        let n = h.len();
        let (k, _) = (0..n)
            .map(|k| (k, point_segment_distance(p, h[k], h[(k + 1) % n])))
            .min_by(|x, y| x.1.total_cmp(&y.1))
            .expect("non-empty hull");
        h.insert(k + 1, p);
    }
    let find = |p: Point2| {
        (0..h.len())
            .min_by(|&x, &y| h[x].dist(p).total_cmp(&h[y].dist(p)))
            .expect("non-empty hull")
    };
    let (ia, ib) = (find(a), find(b));
    (h, ia, ib)
}

fn chain(h: &[Point2], from: usize, to: usize, forward: bool) -> Vec<Point2> {
    let n = h.len();
    let mut out = vec![h[from]];
    let mut k = from;
    while k != to {
        k = if forward { (k + 1) % n } else { (k + n - 1) % n };
        out.push(h[k]);
    }
    out
}

fn chain_length(c: &[Point2]) -> f64 {
    crate::geom::path_length(c)
}

/// Shortest path from `a` to `b` around one convex hull: the shorter of the
/// two boundary chains of `conv(hull ∪ {a, b})` between `a` and `b`.
fn tangent_detour(hull: &Polygon, a: Point2, b: Point2) -> Vec<Point2> {
    let (h, ia, ib) = wrap_with(hull, a, b);
    let fwd = chain(&h, ia, ib, true);
    let bwd = chain(&h, ia, ib, false);
    let mut best = if chain_length(&fwd) <= chain_length(&bwd) { fwd } else { bwd };
    best[0] = a;
    *best.last_mut().expect("chain has both ends") = b;
    best
}

/// Follow the hull contour from where `a-b` enters it until `b` is in line
/// of sight, in whichever direction gives the shorter path.
fn contour_detour(hull: &Polygon, a: Point2, b: Point2) -> Vec<Point2> {
    let pieces = segment_pieces(a, b, hull);
    let t_in = pieces
        .iter()
        .find(|p| p.class == Containment::Inside)
        .map_or(0.0, |p| p.t0);
    let x = a.lerp(b, t_in);
    let verts = hull.vertices();
    let n = verts.len();
    let ring = Ring::new(hull);
    let (sx, _, _) = ring.project(x);
    let mut best: Option<Vec<Point2>> = None;
    for forward in [true, false] {
        let mut path = vec![a, x];
        // Vertices in walking order starting after x.
        let walk = ring.walk(sx, ring.perimeter(), forward);
        for v in walk.into_iter().take(n) {
            let cur = *path.last().expect("non-empty");
            if !segment_enters_interior(cur, b, hull) {
                break;
            }
            path.push(v);
        }
        path.push(b);
        if best.as_ref().is_none_or(|bp| chain_length(&path) < chain_length(bp)) {
            best = Some(path);
        }
    }
    best.expect("two candidates")
}

fn first_crossing(path: &[Point2], hulls: &[ObstacleHull]) -> Option<(usize, usize)> {
    for (k, seg) in path.windows(2).enumerate() {
        let mut best: Option<(f64, usize)> = None;
        for (h, hull) in hulls.iter().enumerate() {
            let entry = segment_pieces(seg[0], seg[1], &hull.hull)
                .into_iter()
                .find(|p| p.class == Containment::Inside)
                .map(|p| p.t0);
            if let Some(t) = entry {
                if best.is_none_or(|(bt, _)| t < bt) {
                    best = Some((t, h));
                }
            }
        }
        if let Some((_, h)) = best {
            return Some((k, h));
        }
    }
    None
}

/// Reroutes segment `p-q` around every obstacle hull it crosses, handling
/// crossings in path order. Gives up after `4·|hulls|` reroutes.
/// `p` and `q` must be distinct.
pub fn detour_segment(
    p: Point2,
    q: Point2,
    hulls: &[ObstacleHull],
    method: Avoidance,
) -> Result<Polyline, AvoidError> {
    for (k, h) in hulls.iter().enumerate() {
        for point in [p, q] {
            if point_in_polygon(point, &h.hull) == Containment::Inside {
                return Err(AvoidError::InfeasibleEndpoint { obstacle: k, point });
            }
        }
    }
    let mut path = vec![p, q];
    let limit = 4 * hulls.len();
    let mut iterations = 0;
    while let Some((k, h)) = first_crossing(&path, hulls) {
        if iterations == limit {
            return Err(AvoidError::NotConverged {
                iterations,
                path: Polyline::new(path).expect("distinct endpoints"),
            });
        }
        iterations += 1;
        let (a, b) = (path[k], path[k + 1]);
        let detour = match method {
            Avoidance::Tangent => tangent_detour(&hulls[h].hull, a, b),
            Avoidance::ContourFollowing => contour_detour(&hulls[h].hull, a, b),
        };
        path.splice(k..=k + 1, detour);
    }
    Ok(Polyline::new(path).expect("p and q are distinct"))
}

/// Replaces every stretch of `path` outside `field` by the shorter walk
/// along the field boundary between the exit and re-entry points.
pub fn contain_in_field(path: &Polyline, field: &Polygon) -> Result<Polyline, AvoidError> {
    let pts = path.waypoints();
    for &point in [pts[0], pts[pts.len() - 1]].iter() {
        if point_in_polygon(point, field) == Containment::Outside {
            return Err(AvoidError::EndpointOutside { point });
        }
    }
    let ring = Ring::new(field);
    let mut out = vec![pts[0]];
    let mut exit: Option<Point2> = None;
    for seg in pts.windows(2) {
        let (a, b) = (seg[0], seg[1]);
        for piece in segment_pieces(a, b, field) {
            let start = a.lerp(b, piece.t0);
            match (piece.class, exit) {
                (Containment::Outside, None) => {
                    out.push(start);
                    exit = Some(start);
                }
                (Containment::Outside, Some(_)) => {}
                (_, Some(x)) => {
                    let (sx, _, _) = ring.project(x);
                    let (sy, _, _) = ring.project(start);
                    let (len, fwd) = ring.shorter_arc(sx, sy);
                    let walk = ring.walk(sx, len, fwd);
                    if !walk.is_empty() {
                        out.extend(&walk[..walk.len() - 1]);
                    }
                    out.push(start);
                    exit = None;
                }
                (_, None) => {}
            }
        }
        if exit.is_none() {
            out.push(b);
        }
    }
    Ok(Polyline::new(out).expect("endpoints preserved"))
}
