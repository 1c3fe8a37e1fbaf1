//! Independent reference implementations used by the integration tests.
#![allow(dead_code)]

use std::cmp::Ordering;
use std::collections::{BinaryHeap, HashMap};

use rand::Rng;
use spotspray::{Point2, Polygon};

pub fn pt(x: f64, y: f64) -> Point2 {
    Point2::new(x, y)
}

pub fn rect(w: f64, h: f64) -> Polygon {
    Polygon::new(vec![pt(0.0, 0.0), pt(w, 0.0), pt(w, h), pt(0.0, h)]).unwrap()
}

pub fn l_shape(w: f64, h: f64, arm_w: f64, arm_h: f64) -> Polygon {
    Polygon::new(vec![
        pt(0.0, 0.0),
        pt(w, 0.0),
        pt(w, arm_h),
        pt(arm_w, arm_h),
        pt(arm_w, h),
        pt(0.0, h),
    ])
    .unwrap()
}

/// Convex polygon from a jittered regular polygon.
pub fn random_convex(rng: &mut impl Rng, radius: f64, sides: usize) -> Polygon {
    let phase = rng.random_range(0.0..std::f64::consts::TAU);
    let pts: Vec<Point2> = (0..sides)
        .map(|k| {
            let a = phase + std::f64::consts::TAU * (k as f64 + rng.random_range(-0.25..0.25)) / sides as f64;
            let r = radius * rng.random_range(0.85..1.0);
            pt(r * a.cos(), r * a.sin())
        })
        .collect();
    spotspray::geom::convex_hull(&pts).unwrap()
}

// ---------------------------------------------------------------- geometry

/// Winding number of `ring` around `p` (crossing-direction count).
pub fn winding_number(p: Point2, ring: &[Point2]) -> i32 {
    let mut wn = 0;
    for k in 0..ring.len() {
        let a = ring[k];
        let b = ring[(k + 1) % ring.len()];
        let side = (b.x - a.x) * (p.y - a.y) - (p.x - a.x) * (b.y - a.y);
        if a.y <= p.y {
            if b.y > p.y && side > 0.0 {
                wn += 1;
            }
        } else if b.y <= p.y && side < 0.0 {
            wn -= 1;
        }
    }
    wn
}

pub fn seg_dist(p: Point2, a: Point2, b: Point2) -> f64 {
    let (dx, dy) = (b.x - a.x, b.y - a.y);
    let l2 = dx * dx + dy * dy;
    let t = if l2 == 0.0 {
        0.0
    } else {
        (((p.x - a.x) * dx + (p.y - a.y) * dy) / l2).clamp(0.0, 1.0)
    };
    let (cx, cy) = (a.x + t * dx, a.y + t * dy);
    ((p.x - cx).powi(2) + (p.y - cy).powi(2)).sqrt()
}

pub fn boundary_dist(p: Point2, ring: &[Point2]) -> f64 {
    (0..ring.len())
        .map(|k| seg_dist(p, ring[k], ring[(k + 1) % ring.len()]))
        .fold(f64::INFINITY, f64::min)
}

/// Strictly inside by more than `tol`.
pub fn deep_inside(p: Point2, ring: &[Point2], tol: f64) -> bool {
    winding_number(p, ring) != 0 && boundary_dist(p, ring) > tol
}

/// Strictly outside by more than `tol`.
pub fn far_outside(p: Point2, ring: &[Point2], tol: f64) -> bool {
    winding_number(p, ring) == 0 && boundary_dist(p, ring) > tol
}

/// Points along a polyline at most `step` apart, endpoints included.
pub fn sample_polyline(pts: &[Point2], step: f64) -> Vec<Point2> {
    let mut out = vec![pts[0]];
    for w in pts.windows(2) {
        let len = ((w[1].x - w[0].x).powi(2) + (w[1].y - w[0].y).powi(2)).sqrt();
        let k = (len / step).ceil().max(1.0) as usize;
        for i in 1..=k {
            let t = i as f64 / k as f64;
            out.push(pt(w[0].x + t * (w[1].x - w[0].x), w[0].y + t * (w[1].y - w[0].y)));
        }
    }
    out
}

pub fn polyline_len(pts: &[Point2]) -> f64 {
    pts.windows(2)
        .map(|w| ((w[1].x - w[0].x).powi(2) + (w[1].y - w[0].y).powi(2)).sqrt())
        .sum()
}

/// Gift-wrapping hull, counter-clockwise, collinear points dropped.
pub fn jarvis_hull(points: &[Point2]) -> Vec<Point2> {
    let start = *points
        .iter()
        .min_by(|a, b| a.x.total_cmp(&b.x).then(a.y.total_cmp(&b.y)))
        .unwrap();
    let mut hull = vec![start];
    let mut cur = start;
    loop {
        let mut cand = points[0];
        for &p in points {
            if p == cur {
                continue;
            }
            if cand == cur {
                cand = p;
                continue;
            }
            let cross = (cand.x - cur.x) * (p.y - cur.y) - (cand.y - cur.y) * (p.x - cur.x);
            let farther = (p.x - cur.x).powi(2) + (p.y - cur.y).powi(2)
                > (cand.x - cur.x).powi(2) + (cand.y - cur.y).powi(2);
            if cross < 0.0 || (cross == 0.0 && farther) {
                cand = p;
            }
        }
        if cand == start {
            break;
        }
        hull.push(cand);
        cur = cand;
    }
    hull
}

/// Width by brute force over every hull edge direction.
pub fn width_by_edges(points: &[Point2]) -> f64 {
    let hull = jarvis_hull(points);
    let n = hull.len();
    (0..n)
        .map(|k| {
            let (a, b) = (hull[k], hull[(k + 1) % n]);
            let len = ((b.x - a.x).powi(2) + (b.y - a.y).powi(2)).sqrt();
            hull.iter()
                .map(|p| ((b.x - a.x) * (p.y - a.y) - (b.y - a.y) * (p.x - a.x)).abs() / len)
                .fold(0.0, f64::max)
        })
        .fold(f64::INFINITY, f64::min)
}

/// Width by scanning projection extents over `steps` directions; an upper
/// bound that converges to the true width.
pub fn width_by_directions(points: &[Point2], steps: usize) -> f64 {
    (0..steps)
        .map(|k| {
            let a = std::f64::consts::PI * k as f64 / steps as f64;
            let (c, s) = (a.cos(), a.sin());
            let proj = points.iter().map(|p| p.x * c + p.y * s);
            let lo = proj.clone().fold(f64::INFINITY, f64::min);
            let hi = proj.fold(f64::NEG_INFINITY, f64::max);
            hi - lo
        })
        .fold(f64::INFINITY, f64::min)
}

/// Closest distance between two polygon boundaries by dense sampling of
/// both boundaries against the other's edges.
pub fn boundary_gap_sampled(a: &[Point2], b: &[Point2], step: f64) -> f64 {
    let close = |r: &[Point2]| {
        let mut c = r.to_vec();
        c.push(r[0]);
        c
    };
    let sa = sample_polyline(&close(a), step);
    let sb = sample_polyline(&close(b), step);
    let d1 = sa.iter().map(|&p| boundary_dist(p, b)).fold(f64::INFINITY, f64::min);
    let d2 = sb.iter().map(|&p| boundary_dist(p, a)).fold(f64::INFINITY, f64::min);
    d1.min(d2)
}

// -------------------------------------------------------------- distances

pub fn haversine_m(lon1: f64, lat1: f64, lon2: f64, lat2: f64) -> f64 {
    let r = 6_371_008.8;
    let (p1, p2) = (lat1.to_radians(), lat2.to_radians());
    let dp = p2 - p1;
    let dl = (lon2 - lon1).to_radians();
    let h = (dp / 2.0).sin().powi(2) + p1.cos() * p2.cos() * (dl / 2.0).sin().powi(2);
    2.0 * r * h.sqrt().asin()
}

// ------------------------------------------------------------------- TSP

/// Optimal closed tour cost from node 0 over all other nodes, by trying
/// every permutation.
pub fn brute_force_tour(cost: &[Vec<f64>]) -> (f64, Vec<usize>) {
    fn go(cost: &[Vec<f64>], cur: &mut Vec<usize>, left: &mut Vec<usize>, acc: f64, best: &mut (f64, Vec<usize>)) {
        let last = *cur.last().unwrap();
        if left.is_empty() {
            let total = acc + cost[last][0];
            if total < best.0 {
                *best = (total, cur.clone());
            }
            return;
        }
        for k in 0..left.len() {
            let v = left.remove(k);
            cur.push(v);
            go(cost, cur, left, acc + cost[last][v], best);
            cur.pop();
            left.insert(k, v);
        }
    }
    let n = cost.len();
    let mut best = (f64::INFINITY, Vec::new());
    go(cost, &mut vec![0], &mut (1..n).collect(), 0.0, &mut best);
    best.1.push(0);
    best
}

pub fn closed_tour_cost(cost: &[Vec<f64>], seq: &[usize]) -> f64 {
    seq.windows(2).map(|w| cost[w[0]][w[1]]).sum()
}

// --------------------------------------------------------- shortest paths

#[derive(PartialEq)]
struct Entry(f64, usize);

impl Eq for Entry {}

impl PartialOrd for Entry {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Entry {
    fn cmp(&self, other: &Self) -> Ordering {
        other.0.total_cmp(&self.0).then(other.1.cmp(&self.1))
    }
}

/// Dijkstra over an implicit graph given by `next(state) -> [(state, cost)]`.
pub fn dijkstra(start: usize, goal: impl Fn(usize) -> bool, next: impl Fn(usize) -> Vec<(usize, f64)>) -> Option<f64> {
    let mut dist: HashMap<usize, f64> = HashMap::new();
    let mut heap = BinaryHeap::new();
    dist.insert(start, 0.0);
    heap.push(Entry(0.0, start));
    while let Some(Entry(d, s)) = heap.pop() {
        if d > dist[&s] {
            continue;
        }
        if goal(s) {
            return Some(d);
        }
        for (t, c) in next(s) {
            let nd = d + c;
            if dist.get(&t).is_none_or(|&old| nd < old) {
                dist.insert(t, nd);
                heap.push(Entry(nd, t));
            }
        }
    }
    None
}

/// Segment `a-b` and convex polygon `hull` (CCW) have disjoint interiors,
/// by the separating axis test over the hull edge normals and the
/// segment normal.
pub fn segment_clear_of_convex(a: Point2, b: Point2, hull: &[Point2], tol: f64) -> bool {
    let n = hull.len();
    for k in 0..n {
        let (p, q) = (hull[k], hull[(k + 1) % n]);
        let len = ((q.x - p.x).powi(2) + (q.y - p.y).powi(2)).sqrt();
        let out = |x: Point2| ((q.x - p.x) * (x.y - p.y) - (q.y - p.y) * (x.x - p.x)) / -len;
        if out(a) >= -tol && out(b) >= -tol {
            return true;
        }
    }
    let len = ((b.x - a.x).powi(2) + (b.y - a.y).powi(2)).sqrt();
    if len == 0.0 {
        return winding_number(a, hull) == 0 || boundary_dist(a, hull) <= tol;
    }
    let side = |x: Point2| ((b.x - a.x) * (x.y - a.y) - (b.y - a.y) * (x.x - a.x)) / len;
    hull.iter().all(|&x| side(x) >= -tol) || hull.iter().all(|&x| side(x) <= tol)
}

/// Shortest obstacle-free path length from `p` to `q` around one convex
/// hull, over the visibility graph of `p`, `q` and the hull vertices.
pub fn visibility_shortest(p: Point2, q: Point2, hull: &[Point2]) -> f64 {
    let mut nodes = vec![p, q];
    nodes.extend_from_slice(hull);
    let d = |a: Point2, b: Point2| ((a.x - b.x).powi(2) + (a.y - b.y).powi(2)).sqrt();
    dijkstra(
        0,
        |s| s == 1,
        |s| {
            (0..nodes.len())
                .filter(|&t| t != s && segment_clear_of_convex(nodes[s], nodes[t], hull, 1e-9))
                .map(|t| (t, d(nodes[s], nodes[t])))
                .collect()
        },
    )
    .expect("hull vertices connect the endpoints")
}

// ------------------------------------------------------ coverage routing

/// Arc-length parameter of the point of `ring` closest to `p`, and the
/// ring perimeter.
pub fn ring_param(ring: &[Point2], p: Point2) -> (f64, f64) {
    let n = ring.len();
    let mut acc = 0.0;
    let mut best = (f64::INFINITY, 0.0);
    for k in 0..n {
        let (a, b) = (ring[k], ring[(k + 1) % n]);
        let len = ((b.x - a.x).powi(2) + (b.y - a.y).powi(2)).sqrt();
        let t = (((p.x - a.x) * (b.x - a.x) + (p.y - a.y) * (b.y - a.y)) / (len * len)).clamp(0.0, 1.0);
        let c = pt(a.x + t * (b.x - a.x), a.y + t * (b.y - a.y));
        let dist = ((p.x - c.x).powi(2) + (p.y - c.y).powi(2)).sqrt();
        if dist < best.0 {
            best = (dist, acc + t * len);
        }
        acc += len;
    }
    (best.1, acc)
}

/// Shortest closed walk from `attach` that uses every lane exactly once
/// and every headland arc at least once, found by Dijkstra over
/// `(node, lanes used, arcs covered)`. Lanes are `(a, b, length)` with
/// endpoints on `ring`.
pub fn route_oracle(ring: &[Point2], attach: Point2, lanes: &[(Point2, Point2, f64)]) -> f64 {
    let mut params: Vec<f64> = vec![ring_param(ring, attach).0];
    let perimeter = ring_param(ring, attach).1;
    for &(a, b, _) in lanes {
        params.push(ring_param(ring, a).0);
        params.push(ring_param(ring, b).0);
    }
    let mut sorted = params.clone();
    sorted.sort_by(f64::total_cmp);
    let mut nodes: Vec<f64> = Vec::new();
    for s in sorted {
        if nodes.last().is_none_or(|&l| s - l > 1e-9) {
            nodes.push(s);
        }
    }
    if nodes.len() > 1 && nodes[0] + perimeter - nodes[nodes.len() - 1] <= 1e-9 {
        nodes.pop();
    }
    let m = nodes.len();
    let node_of = |s: f64| {
        (0..m)
            .min_by(|&i, &j| {
                let d = |k: usize| {
                    let x = (s - nodes[k]).abs();
                    x.min(perimeter - x)
                };
                d(i).total_cmp(&d(j))
            })
            .unwrap()
    };
    let arc = |k: usize| {
        if m == 1 {
            perimeter
        } else {
            let d = nodes[(k + 1) % m] - nodes[k];
            if d > 0.0 {
                d
            } else {
                d + perimeter
            }
        }
    };
    let lane_nodes: Vec<(usize, usize, f64)> = lanes
        .iter()
        .enumerate()
        .map(|(k, &(_, _, len))| (node_of(params[1 + 2 * k]), node_of(params[2 + 2 * k]), len))
        .collect();
    let start = node_of(params[0]);
    let nl = lanes.len();
    let all_lanes = (1usize << nl) - 1;
    let all_arcs = (1usize << m) - 1;
    let encode = |v: usize, lm: usize, am: usize| (am << (nl + 8)) | (lm << 8) | v;
    dijkstra(
        encode(start, 0, 0),
        |s| s & 0xff == start && (s >> 8) & all_lanes == all_lanes && s >> (nl + 8) == all_arcs,
        |s| {
            let (v, lm, am) = (s & 0xff, (s >> 8) & all_lanes, s >> (nl + 8));
            let mut out = Vec::new();
            if m == 1 {
                out.push((encode(v, lm, am | 1), arc(0)));
            } else {
                out.push((encode((v + 1) % m, lm, am | (1 << v)), arc(v)));
                let prev = (v + m - 1) % m;
                out.push((encode(prev, lm, am | (1 << prev)), arc(prev)));
            }
            for (k, &(a, b, len)) in lane_nodes.iter().enumerate() {
                if lm & (1 << k) != 0 {
                    continue;
                }
                if a == v {
                    out.push((encode(b, lm | (1 << k), am), len));
                } else if b == v {
                    out.push((encode(a, lm | (1 << k), am), len));
                }
            }
            out
        },
    )
    .expect("every lane endpoint lies on the loop")
}

// --------------------------------------------------------------- raster

/// Fraction of sample points of `patch` farther than `w/2` from `path`.
/// Samples sit at the centers of a grid with spacing `h`, shifted by a
/// third of a cell so they differ from any cell-aligned raster.
pub fn gap_fraction_sampled(path: &[Point2], patch: &Polygon, w: f64, h: f64) -> f64 {
    let ring = patch.vertices();
    let (lo, hi) = patch.bbox();
    let r = 0.5 * w;
    let mut inside = 0usize;
    let mut missed = 0usize;
    let mut y = lo.y + h / 3.0;
    while y < hi.y {
        let mut x = lo.x + h / 3.0;
        while x < hi.x {
            let p = pt(x, y);
            if winding_number(p, ring) != 0 {
                inside += 1;
                let covered = path.windows(2).any(|s| {
                    (s[0].x.min(s[1].x) - r <= x && x <= s[0].x.max(s[1].x) + r)
                        && (s[0].y.min(s[1].y) - r <= y && y <= s[0].y.max(s[1].y) + r)
                        && seg_dist(p, s[0], s[1]) <= r
                });
                if !covered {
                    missed += 1;
                }
            }
            x += h;
        }
        y += h;
    }
    missed as f64 / inside as f64
}

// ---------------------------------------------------------- patch suites

/// Mixed test patches: rectangles, rotated rectangles, convex polygons and
/// L-shapes, each with an entry point on its boundary.
pub fn patch_suite(seed: u64, count: usize) -> Vec<(String, Polygon, Point2)> {
    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
    let mut out = Vec::new();
    for k in 0..count {
        let (kind, poly) = match k % 4 {
            0 => ("rect", rect(rng.random_range(6.0..30.0), rng.random_range(6.0..30.0))),
            1 => {
                let r = rect(rng.random_range(6.0..30.0), rng.random_range(6.0..30.0));
                ("rotated", r.rotated(rng.random_range(0.0..std::f64::consts::PI), pt(0.0, 0.0)))
            }
            2 => {
                let sides = rng.random_range(4..9);
                let radius = rng.random_range(6.0..16.0);
                ("convex", random_convex(&mut rng, radius, sides))
            }
            _ => {
                let (w, h) = (rng.random_range(12.0..30.0), rng.random_range(12.0..30.0));
                let l = l_shape(w, h, rng.random_range(5.0..w - 5.0), rng.random_range(5.0..h - 5.0));
                ("lshape", l.rotated(rng.random_range(0.0..std::f64::consts::PI), pt(0.0, 0.0)))
            }
        };
        let v = poly.vertices();
        let t = rng.random_range(0.2..0.8);
        let entry = v[0].lerp(v[1], t);
        out.push((format!("{kind}-{k}"), poly, entry));
    }
    out
}

use rand::SeedableRng;
