//! Patch sequencing: tour construction and refinement over a
//! [`TransitionGraph`](crate::model::TransitionGraph).

mod init;
mod refine;

pub use init::{init_denn, init_nn};
pub use refine::{
    refine_h1, refine_h2, refine_h3, refine_h4, refine_pipeline, Budget, RefineOutcome,
};

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::model::TransitionGraph;

#[derive(Clone, Debug, Error, PartialEq)]
pub enum TspError {
    #[error("malformed tour: {0}")]
    Malformed(String),
}

/// Closed tour `(0, s1, ..., sN, 0)` over all nodes of a graph.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct TspTour {
    sequence: Vec<usize>,
    cost: f64,
}

impl TspTour {
    pub fn from_sequence(graph: &TransitionGraph, sequence: Vec<usize>) -> Result<Self, TspError> {
        let cost = tour_cost(graph, &sequence)?;
        Ok(Self { sequence, cost })
    }

    /// Caller guarantees `sequence` is a valid tour.
    pub(crate) fn trusted(graph: &TransitionGraph, sequence: Vec<usize>) -> Self {
        let cost = sequence_cost(graph, &sequence);
        Self { sequence, cost }
    }

    /// Full sequence including the entrance at both ends.
    pub fn sequence(&self) -> &[usize] {
        &self.sequence
    }

    /// Patch nodes in visiting order.
    pub fn interior(&self) -> &[usize] {
        &self.sequence[1..self.sequence.len() - 1]
    }

    pub fn cost(&self) -> f64 {
        self.cost
    }
}

pub(crate) fn sequence_cost(graph: &TransitionGraph, seq: &[usize]) -> f64 {
    seq.windows(2).map(|w| graph.cost(w[0], w[1])).sum()
}

/// Sum of edge costs along `sequence`, which must start and end at node 0
/// and visit every other node exactly once.
pub fn tour_cost(graph: &TransitionGraph, sequence: &[usize]) -> Result<f64, TspError> {
    let n = graph.n();
    if sequence.len() != n + 1 {
        return Err(TspError::Malformed(format!(
            "expected {} entries for {n} nodes, got {}",
            n + 1,
            sequence.len()
        )));
    }
    if sequence[0] != 0 || sequence[n] != 0 {
        return Err(TspError::Malformed("tour must start and end at node 0".into()));
    }
    let mut seen = vec![false; n];
    seen[0] = true;
    for &s in &sequence[1..n] {
        if s >= n || seen[s] {
            return Err(TspError::Malformed(format!("node {s} is out of range or repeated")));
        }
        seen[s] = true;
    }
    Ok(sequence_cost(graph, sequence))
}
