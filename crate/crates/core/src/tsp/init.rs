use super::TspTour;
use crate::model::TransitionGraph;

/// Cheapest unvisited node from `from`, lowest index on ties.
fn nearest(graph: &TransitionGraph, from: usize, visited: &[bool]) -> Option<(usize, f64)> {
    let mut best: Option<(usize, f64)> = None;
    for (k, _) in visited.iter().enumerate().filter(|(_, &v)| !v) {
        let c = graph.cost(from, k);
        if best.is_none_or(|(_, b)| c < b) {
            best = Some((k, c));
        }
    }
    best
}

/// Nearest-neighbour tour from the entrance.
pub fn init_nn(graph: &TransitionGraph) -> TspTour {
    let n = graph.n();
    let mut visited = vec![false; n];
    visited[0] = true;
    let mut seq = Vec::with_capacity(n + 1);
    seq.push(0);
    let mut cur = 0;
    while let Some((k, _)) = nearest(graph, cur, &visited) {
        visited[k] = true;
        seq.push(k);
        cur = k;
    }
    seq.push(0);
    TspTour::trusted(graph, seq)
}

/// Double-ended nearest neighbour: two branches grow from the entrance and
/// the one with the cheaper extension moves (branch A on ties). The tour
/// runs out along A and returns along B.
pub fn init_denn(graph: &TransitionGraph) -> TspTour {
    let n = graph.n();
    let mut visited = vec![false; n];
    visited[0] = true;
    let (mut a, mut b) = (vec![], vec![]);
    let (mut end_a, mut end_b) = (0, 0);
    loop {
        let ext_a = nearest(graph, end_a, &visited);
        let ext_b = nearest(graph, end_b, &visited);
        match (ext_a, ext_b) {
            (Some((ka, ca)), Some((kb, cb))) => {
                if ca <= cb {
                    visited[ka] = true;
                    a.push(ka);
                    end_a = ka;
                } else {
                    visited[kb] = true;
                    b.push(kb);
                    end_b = kb;
                }
            }
            _ => break,
        }
    }
    let mut seq = Vec::with_capacity(n + 1);
    seq.push(0);
    seq.extend(a);
    seq.extend(b.into_iter().rev());
    seq.push(0);
    TspTour::trusted(graph, seq)
}
