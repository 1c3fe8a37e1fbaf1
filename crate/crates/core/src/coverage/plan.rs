use super::{CoverageError, CoveragePlan, Lane, PatchLayout, PlanMethod};
use crate::geom::{Point2, Polygon, Polyline, Ring};

/// Arc positions closer than this are the same node.
const NODE_MERGE_TOL: f64 = 1e-9;

/// One headland loop seen as a cycle graph: nodes are the attach point and
/// the lane endpoints in arc order, consecutive nodes are joined by headland
/// arcs, and every lane is a chord between two nodes.
#[derive(Clone, Debug, PartialEq)]
pub struct CycleGraph {
    /// `(arc position, point)` per node, sorted by position.
    pub nodes: Vec<(f64, Point2)>,
    /// Arc `k` runs forward from node `k` to node `(k + 1) % m`.
    pub arc_lengths: Vec<f64>,
    /// `(node at a, node at b)` per lane.
    pub lane_nodes: Vec<(usize, usize)>,
    pub lanes: Vec<Lane>,
    pub attach: usize,
}

impl CycleGraph {
    pub fn build(ring: &Ring, attach: Point2, lanes: &[Lane]) -> Self {
        let p = ring.perimeter();
        let mut raw: Vec<(f64, Point2, usize)> = vec![(ring.project(attach).0, attach, 0)];
        for (k, lane) in lanes.iter().enumerate() {
            raw.push((ring.project(lane.a).0, lane.a, 1 + 2 * k));
            raw.push((ring.project(lane.b).0, lane.b, 2 + 2 * k));
        }
        raw.sort_by(|x, y| x.0.total_cmp(&y.0).then(x.2.cmp(&y.2)));
        let mut nodes: Vec<(f64, Point2)> = Vec::new();
        let mut node_of = vec![0; raw.len()];
        for &(s, pt, id) in &raw {
            match nodes.last() {
                Some(&(last, _)) if s - last <= NODE_MERGE_TOL => {}
                _ => nodes.push((s, pt)),
            }
            node_of[id] = nodes.len() - 1;
        }
        // Positions just below the perimeter coincide with node 0.
        let m0 = nodes.len();
        if m0 > 1 && nodes[0].0 + p - nodes[m0 - 1].0 <= NODE_MERGE_TOL {
            for n in node_of.iter_mut() {
                if *n == m0 - 1 {
                    *n = 0;
                }
            }
            nodes.pop();
        }
        let m = nodes.len();
        let arc_lengths = if m == 1 {
            vec![p]
        } else {
            (0..m)
                .map(|k| ring.forward_distance(nodes[k].0, nodes[(k + 1) % m].0))
                .collect()
        };
        let lane_nodes = (0..lanes.len())
            .map(|k| (node_of[1 + 2 * k], node_of[2 + 2 * k]))
            .collect();
        Self {
            nodes,
            arc_lengths,
            lane_nodes,
            lanes: lanes.to_vec(),
            attach: node_of[0],
        }
    }

    pub fn node_count(&self) -> usize {
        self.nodes.len()
    }

    /// Nodes with an odd number of lane endpoints, in arc order.
    pub fn odd_nodes(&self) -> Vec<usize> {
        let mut deg = vec![0usize; self.nodes.len()];
        for &(u, v) in &self.lane_nodes {
            deg[u] += 1;
            deg[v] += 1;
        }
        (0..self.nodes.len()).filter(|&k| deg[k] % 2 == 1).collect()
    }

    /// Arc multiplicities of the cheapest closed walk. Only arcs may be
    /// repeated; on a cycle the parity constraints leave exactly two
    /// candidate sets of repeated arcs, pairing odd nodes either
    /// `(o0,o1),(o2,o3),..` or `(o1,o2),..,(o_last,o0)` along the cycle.
    pub fn arc_multiplicities(&self) -> Vec<u8> {
        let m = self.nodes.len();
        let odd = self.odd_nodes();
        let mut mult = vec![1u8; m];
        if odd.is_empty() {
            return mult;
        }
        let span = |from: usize, to: usize| -> Vec<usize> {
            let mut out = Vec::new();
            let mut k = from;
            while k != to {
                out.push(k);
                k = (k + 1) % m;
            }
            out
        };
        let q = odd.len();
        let option = |shift: usize| -> Vec<usize> {
            (0..q / 2)
                .flat_map(|t| span(odd[(2 * t + shift) % q], odd[(2 * t + 1 + shift) % q]))
                .collect()
        };
        let (a, b) = (option(0), option(1));
        let cost = |arcs: &[usize]| arcs.iter().map(|&k| self.arc_lengths[k]).sum::<f64>();
        let chosen = if cost(&a) <= cost(&b) { a } else { b };
        for k in chosen {
            mult[k] += 1;
        }
        mult
    }

    /// Length of the required edges (each arc and lane once).
    pub fn required_length(&self) -> f64 {
        self.arc_lengths.iter().sum::<f64>() + self.lanes.iter().map(Lane::length).sum::<f64>()
    }
}

#[derive(Clone, Copy)]
enum Edge {
    Arc(usize),
    Lane(usize),
}

fn endpoints(g: &CycleGraph, e: Edge) -> (usize, usize) {
    match e {
        Edge::Arc(k) => (k, (k + 1) % g.nodes.len()),
        Edge::Lane(k) => g.lane_nodes[k],
    }
}

/// Eulerian circuit from the attach node as a list of `(edge, from-node)`.
fn euler_circuit(g: &CycleGraph, mult: &[u8]) -> Vec<(Edge, usize)> {
    let mut edges: Vec<Edge> = Vec::new();
    for (k, &c) in mult.iter().enumerate() {
        for _ in 0..c {
            edges.push(Edge::Arc(k));
        }
    }
    edges.extend((0..g.lanes.len()).map(Edge::Lane));
    let mut adj: Vec<Vec<usize>> = vec![Vec::new(); g.nodes.len()];
    for (id, &e) in edges.iter().enumerate() {
        let (u, v) = endpoints(g, e);
        adj[u].push(id);
        if v != u {
            adj[v].push(id);
        }
    }
    let mut used = vec![false; edges.len()];
    let mut next = vec![0usize; g.nodes.len()];
    let mut stack: Vec<(usize, Option<usize>)> = vec![(g.attach, None)];
    let mut circuit: Vec<(usize, Option<usize>)> = Vec::new();
    while let Some(&(v, _)) = stack.last() {
        while next[v] < adj[v].len() && used[adj[v][next[v]]] {
            next[v] += 1;
        }
        if let Some(&id) = adj[v].get(next[v]) {
            used[id] = true;
            let (a, b) = endpoints(g, edges[id]);
            let w = if a == v { b } else { a };
            stack.push((w, Some(id)));
        } else {
            circuit.push(stack.pop().expect("non-empty"));
        }
    }
    circuit.reverse();
    circuit
        .windows(2)
        .map(|w| (edges[w[1].1.expect("edge into every later node")], w[0].0))
        .collect()
}

/// Appends a headland walk to `pts`, ending exactly on `target`.
fn push_arc(pts: &mut Vec<Point2>, ring: &Ring, from: f64, len: f64, forward: bool, target: Point2) {
    let walk = ring.walk(from, len, forward);
    if walk.is_empty() {
        pts.push(target);
    } else {
        pts.extend(walk);
        *pts.last_mut().expect("non-empty walk") = target;
    }
}

fn optimised_component(ring: &Ring, attach: Point2, lanes: &[Lane]) -> Vec<Point2> {
    let g = CycleGraph::build(ring, attach, lanes);
    let mult = g.arc_multiplicities();
    let mut pts = vec![g.nodes[g.attach].1];
    for (edge, from) in euler_circuit(&g, &mult) {
        match edge {
            Edge::Arc(k) => {
                let m = g.nodes.len();
                let to = (k + 1) % m;
                if from == k {
                    push_arc(&mut pts, ring, g.nodes[k].0, g.arc_lengths[k], true, g.nodes[to].1);
                } else {
                    push_arc(&mut pts, ring, g.nodes[to].0, g.arc_lengths[k], false, g.nodes[k].1);
                }
            }
            Edge::Lane(k) => {
                let lane = &g.lanes[k];
                let (na, _) = g.lane_nodes[k];
                pts.push(if from == na { lane.b } else { lane.a });
            }
        }
    }
    pts
}

fn classic_component(ring: &Ring, attach: Point2, lanes: &[Lane]) -> Vec<Point2> {
    let p = ring.perimeter();
    let (s0, _, _) = ring.project(attach);
    let mut pts = vec![attach];
    push_arc(&mut pts, ring, s0, p, true, attach);
    if lanes.is_empty() {
        return pts;
    }
    let pos: Vec<(f64, f64)> = lanes
        .iter()
        .map(|l| (ring.project(l.a).0, ring.project(l.b).0))
        .collect();
    let last = lanes.len() - 1;
    // Start on whichever end lane endpoint is closest along the headland.
    let starts = [(0, true), (0, false), (last, true), (last, false)];
    let &(first, first_at_a) = starts
        .iter()
        .min_by(|x, y| {
            let d = |&(k, at_a): &(usize, bool)| {
                ring.shorter_arc(s0, if at_a { pos[k].0 } else { pos[k].1 }).0
            };
            d(x).total_cmp(&d(y))
        })
        .expect("four candidates");
    let order: Vec<usize> = if first == 0 {
        (0..lanes.len()).collect()
    } else {
        (0..lanes.len()).rev().collect()
    };
    let mut cur = s0;
    for (step, &k) in order.iter().enumerate() {
        let (sa, sb) = pos[k];
        let at_a = if step == 0 {
            first_at_a
        } else {
            ring.shorter_arc(cur, sa).0 <= ring.shorter_arc(cur, sb).0
        };
        let (s_in, p_in, s_out, p_out) = if at_a {
            (sa, lanes[k].a, sb, lanes[k].b)
        } else {
            (sb, lanes[k].b, sa, lanes[k].a)
        };
        let (len, fwd) = ring.shorter_arc(cur, s_in);
        push_arc(&mut pts, ring, cur, len, fwd, p_in);
        pts.push(p_out);
        cur = s_out;
    }
    let (len, fwd) = ring.shorter_arc(cur, s0);
    push_arc(&mut pts, ring, cur, len, fwd, attach);
    pts
}

/// Plan over a precomputed layout. Components are visited one after the
/// other from `entry` via straight stubs to their nearest headland points.
pub fn plan_with_layout(layout: &PatchLayout, entry: Point2, method: PlanMethod) -> CoveragePlan {
    assert!(method != PlanMethod::Boustrophedon, "use plan_boustrophedon_reference");
    let mut pts = vec![entry];
    for k in layout.component_order(entry) {
        let ring = &layout.rings[k];
        let (_, attach, _) = ring.project(entry);
        let lanes = &layout.lane_sets[k].lanes;
        let loop_pts = match method {
            PlanMethod::Classic => classic_component(ring, attach, lanes),
            _ => optimised_component(ring, attach, lanes),
        };
        pts.extend(loop_pts);
        pts.push(entry);
    }
    let path = Polyline::new(pts).expect("headland loop has positive length");
    CoveragePlan {
        patch_index: 0,
        method,
        entry,
        length: path.length(),
        path,
        lane_count: layout.lane_count(),
        headland: layout
            .rings
            .iter()
            .map(|r| Polyline::new(r.closed_polyline()).expect("valid ring"))
            .collect(),
        lanes: layout.lane_sets.clone(),
    }
}

/// Headland loop first, then the lanes in spatial order, connected along
/// the headland, then back to the entry point.
pub fn plan_classic(patch: &Polygon, entry: Point2, w: f64) -> Result<CoveragePlan, CoverageError> {
    Ok(plan_with_layout(&PatchLayout::new(patch, w)?, entry, PlanMethod::Classic))
}

/// Shortest closed walk from the entry point that traverses every lane
/// once and every headland arc at least once.
pub fn plan_optimised(patch: &Polygon, entry: Point2, w: f64) -> Result<CoveragePlan, CoverageError> {
    Ok(plan_with_layout(&PatchLayout::new(patch, w)?, entry, PlanMethod::Optimised))
}
