use std::time::{Duration, Instant};

use rand::Rng;
use serde::{Deserialize, Serialize};

use super::{sequence_cost, TspTour};
use crate::geom::segments_parallel;
use crate::model::{Heuristic, TransitionGraph};

/// Stopping rule for the sampling heuristics H1-H3.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Budget {
    WallClock(Duration),
    /// Number of drawn moves; makes runs reproducible for a given seed.
    Moves(u64),
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RefineOutcome {
    pub tour: TspTour,
    pub runtime: Duration,
    pub iterations: u64,
    /// `(elapsed seconds, cost)` at the start and after every accepted move.
    pub improvement_trace: Vec<(f64, f64)>,
}

struct Search<'g> {
    graph: &'g TransitionGraph,
    seq: Vec<usize>,
    cost: f64,
    start: Instant,
    iterations: u64,
    trace: Vec<(f64, f64)>,
}

impl<'g> Search<'g> {
    fn new(graph: &'g TransitionGraph, tour: &TspTour) -> Self {
        let start = Instant::now();
        Self {
            graph,
            seq: tour.sequence().to_vec(),
            cost: tour.cost(),
            start,
            iterations: 0,
            trace: vec![(0.0, tour.cost())],
        }
    }

    /// Number of patch nodes N.
    fn n(&self) -> usize {
        self.seq.len() - 2
    }

    fn exhausted(&self, budget: Budget) -> bool {
        match budget {
            Budget::WallClock(d) => self.start.elapsed() >= d,
            Budget::Moves(m) => self.iterations >= m,
        }
    }

    /// Keeps the current sequence iff it is strictly cheaper, returning
    /// whether it was kept.
    fn accept_if_better(&mut self) -> bool {
        let c = sequence_cost(self.graph, &self.seq);
        if c < self.cost {
            self.cost = c;
            self.trace.push((self.start.elapsed().as_secs_f64(), c));
            true
        } else {
            false
        }
    }

    fn finish(self) -> RefineOutcome {
        RefineOutcome {
            tour: TspTour {
                sequence: self.seq,
                cost: self.cost,
            },
            runtime: self.start.elapsed(),
            iterations: self.iterations,
            improvement_trace: self.trace,
        }
    }
}

/// H1: swap two uniformly drawn positions.
pub fn refine_h1(graph: &TransitionGraph, tour: &TspTour, rng: &mut impl Rng, budget: Budget) -> RefineOutcome {
    let mut s = Search::new(graph, tour);
    let n = s.n();
    if n < 2 {
        return s.finish();
    }
    while !s.exhausted(budget) {
        s.iterations += 1;
        let i = rng.random_range(1..=n);
        let j = rng.random_range(1..=n);
        if i == j {
            continue;
        }
        s.seq.swap(i, j);
        if !s.accept_if_better() {
            s.seq.swap(i, j);
        }
    }
    s.finish()
}

/// H2: remove the node at one drawn position and reinsert it at another.
pub fn refine_h2(graph: &TransitionGraph, tour: &TspTour, rng: &mut impl Rng, budget: Budget) -> RefineOutcome {
    let mut s = Search::new(graph, tour);
    let n = s.n();
    if n < 2 {
        return s.finish();
    }
    while !s.exhausted(budget) {
        s.iterations += 1;
        let i = rng.random_range(1..=n);
        let j = rng.random_range(1..=n);
        if i == j {
            continue;
        }
        let node = s.seq.remove(i);
        s.seq.insert(j, node);
        if !s.accept_if_better() {
            let node = s.seq.remove(j);
            s.seq.insert(i, node);
        }
    }
    s.finish()
}

/// H3: flip the pair at a drawn position `i` and its successor.
pub fn refine_h3(graph: &TransitionGraph, tour: &TspTour, rng: &mut impl Rng, budget: Budget) -> RefineOutcome {
    let mut s = Search::new(graph, tour);
    let n = s.n();
    if n < 2 {
        return s.finish();
    }
    while !s.exhausted(budget) {
        s.iterations += 1;
        let i = rng.random_range(1..n);
        s.seq.swap(i, i + 1);
        if !s.accept_if_better() {
            s.seq.swap(i, i + 1);
        }
    }
    s.finish()
}

/// H4: deterministic sweep of 2-opt reversals. For every pair of
/// non-adjacent tour edges `(s[i], s[i+1])`, `(s[j], s[j+1])` whose segments
/// are not parallel, reversing `s[i+1..=j]` is tried and kept iff strictly
/// cheaper; after an accepted move the scan continues with the next `i`.
/// Passes repeat until one makes no change.
///
/// Each tour edge is drawn between the contact points the graph recorded for
/// that node pair.
pub fn refine_h4(graph: &TransitionGraph, tour: &TspTour) -> RefineOutcome {
    let mut s = Search::new(graph, tour);
    let n = s.n();
    let edge = |seq: &[usize], k: usize| {
        let (a, b) = (seq[k], seq[k + 1]);
        (graph.contact(a, b), graph.contact(b, a))
    };
    loop {
        let mut improved = false;
        for i in 0..n {
            for j in (i + 2)..=n {
                let (a1, a2) = edge(&s.seq, i);
                let (b1, b2) = edge(&s.seq, j);
                if segments_parallel(a1, a2, b1, b2) {
                    continue;
                }
                s.iterations += 1;
                s.seq[i + 1..=j].reverse();
                if s.accept_if_better() {
                    improved = true;
                    break;
                }
                s.seq[i + 1..=j].reverse();
            }
        }
        if !improved {
            break;
        }
    }
    s.finish()
}

/// Applies the heuristics in order. H1-H3 each get `budget`; the reported
/// runtime and iteration count are sums over the stages.
pub fn refine_pipeline(
    graph: &TransitionGraph,
    tour: &TspTour,
    heuristics: &[Heuristic],
    rng: &mut impl Rng,
    budget: Budget,
) -> RefineOutcome {
    let mut current = tour.clone();
    let mut runtime = Duration::ZERO;
    let mut iterations = 0;
    let mut trace = vec![(0.0, tour.cost())];
    for h in heuristics {
        let out = match h {
            Heuristic::H1 => refine_h1(graph, &current, rng, budget),
            Heuristic::H2 => refine_h2(graph, &current, rng, budget),
            Heuristic::H3 => refine_h3(graph, &current, rng, budget),
            Heuristic::H4 => refine_h4(graph, &current),
        };
        let offset = runtime.as_secs_f64();
        trace.extend(out.improvement_trace.iter().skip(1).map(|&(t, c)| (offset + t, c)));
        runtime += out.runtime;
        iterations += out.iterations;
        current = out.tour;
    }
    RefineOutcome {
        tour: current,
        runtime,
        iterations,
        improvement_trace: trace,
    }
}
