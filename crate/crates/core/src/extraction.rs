// SPDX-License-Identifier: Apache-2.0

//! Extraction of an induced subgraph whose vertices keep a constant
//! fraction of the minimum degree while having no much-larger degree in the
//! host graph.

use crate::fraction::{int, Fraction};
use crate::graph::Graph;
use serde::Serialize;
use std::collections::BTreeSet;
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ExtractionError {
    #[error("parameter out of range: {0}")]
    Parameter(String),
    #[error("graph has no vertices")]
    EmptyGraph,
    #[error("average degree {average} exceeds (1 + ε)·δ = {limit}")]
    Precondition { average: Fraction, limit: Fraction },
    /// Valid inputs always leave a vertex; reaching this is a bug.
    #[error("extraction removed every vertex although the preconditions held")]
    EmptyResult,
    #[error("kept vertex {vertex} violates a degree bound")]
    BoundViolated { vertex: usize },
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ExtractionResult {
    pub kept: Vec<usize>,
    /// Vertices whose degree is above the upper threshold.
    pub removed_high: Vec<usize>,
    /// Vertices peeled for low degree, in removal order.
    pub removed_peel: Vec<usize>,
}

/// The two degree thresholds relative to a reference minimum degree.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Thresholds {
    /// Kept vertices have degree at least this inside the kept set.
    pub low: Fraction,
    /// Kept vertices have degree at most this in the host graph.
    pub high: Fraction,
}

impl Thresholds {
    pub fn new(alpha: Fraction, eps: Fraction, min_degree: usize) -> Self {
        let one = Fraction::from_integer(1);
        let delta = int(min_degree);
        Thresholds {
            low: (one - alpha) / Fraction::from_integer(2) * delta,
            high: (one + (one + alpha) / (alpha - eps) * eps) * delta,
        }
    }
}

fn check_parameters(alpha: Fraction, eps: Fraction) -> Result<(), ExtractionError> {
    let (zero, one) = (Fraction::from_integer(0), Fraction::from_integer(1));
    if one >= alpha && alpha > eps && eps > zero {
        Ok(())
    } else {
        Err(ExtractionError::Parameter(format!("need 1 >= alpha > eps > 0, got alpha = {alpha}, eps = {eps}")))
    }
}

/// Runs the extraction with `δ(H)` taken from `h` after checking
/// `ad(H) ≤ (1 + ε)δ(H)`.
pub fn extract_dense_subgraph(h: &Graph, alpha: Fraction, eps: Fraction) -> Result<ExtractionResult, ExtractionError> {
    check_parameters(alpha, eps)?;
    if h.n() == 0 {
        return Err(ExtractionError::EmptyGraph);
    }
    let average = h.average_degree();
    let limit = (Fraction::from_integer(1) + eps) * int(h.min_degree());
    if average > limit {
        return Err(ExtractionError::Precondition { average, limit });
    }
    let result = peel_with_reference(h, alpha, eps, h.min_degree())?;
    if result.kept.is_empty() {
        return Err(ExtractionError::EmptyResult);
    }
    Ok(result)
}

/// Removes high-degree vertices, then peels low-degree ones (lowest id
/// first) against thresholds computed from `min_degree`. Checks both degree
/// bounds on the vertices that remain.
pub fn peel_with_reference(
    h: &Graph,
    alpha: Fraction,
    eps: Fraction,
    min_degree: usize,
) -> Result<ExtractionResult, ExtractionError> {
    check_parameters(alpha, eps)?;
    let th = Thresholds::new(alpha, eps, min_degree);
    let n = h.n();
    let removed_high: Vec<usize> = (0..n).filter(|&v| int(h.neighbors(v).len()) > th.high).collect();
    let mut alive = vec![true; n];
    for &v in &removed_high {
        alive[v] = false;
    }
    let mut degree: Vec<usize> = (0..n).map(|v| h.neighbors(v).iter().filter(|&&u| alive[u]).count()).collect();
    let low = |d: usize| int(d) < th.low;
    let mut queue: BTreeSet<usize> = (0..n).filter(|&v| alive[v] && low(degree[v])).collect();
    let mut removed_peel = Vec::new();
    while let Some(v) = queue.pop_first() {
        alive[v] = false;
        removed_peel.push(v);
        for &u in h.neighbors(v) {
            if alive[u] {
                degree[u] -= 1;
                if low(degree[u]) {
                    queue.insert(u);
                }
            }
        }
    }
    let kept: Vec<usize> = (0..n).filter(|&v| alive[v]).collect();
    for &v in &kept {
        if low(degree[v]) || int(h.neighbors(v).len()) > th.high {
            return Err(ExtractionError::BoundViolated { vertex: v });
        }
    }
    Ok(ExtractionResult { kept, removed_high, removed_peel })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::generators;

    fn f(n: i64, d: i64) -> Fraction {
        Fraction::new(n, d)
    }

    #[test]
    fn complete_graph_is_kept_whole() {
        let r = extract_dense_subgraph(&generators::complete(6), f(1, 2), f(1, 10)).unwrap();
        assert_eq!(r.kept, (0..6).collect::<Vec<_>>());
        assert!(r.removed_high.is_empty() && r.removed_peel.is_empty());
    }

    #[test]
    fn pendant_vertex_breaks_the_precondition() {
        let mut edges: Vec<(usize, usize)> = Vec::new();
        for base in [0, 5] {
            for i in 0..5 {
                for j in i + 1..5 {
                    edges.push((base + i, base + j));
                }
            }
        }
        edges.push((0, 10));
        let h = Graph::from_edges(11, edges).unwrap();
        match extract_dense_subgraph(&h, f(1, 2), f(1, 10)) {
            Err(ExtractionError::Precondition { average, limit }) => {
                assert_eq!(average, f(42, 11));
                assert_eq!(limit, f(11, 10));
            }
            other => panic!("expected a precondition error, got {other:?}"),
        }
    }

    #[test]
    fn regular_graphs_are_kept_whole() {
        for t in 1..4 {
            let h = generators::c5_blowup(t);
            let r = extract_dense_subgraph(&h, f(1, 3), f(1, 5)).unwrap();
            assert_eq!(r.kept.len(), h.n());
        }
        assert_eq!(extract_dense_subgraph(&generators::petersen(), f(1, 1), f(1, 2)).unwrap().kept.len(), 10);
    }

    #[test]
    fn parameters_are_checked() {
        let h = generators::complete(3);
        assert!(matches!(extract_dense_subgraph(&h, f(1, 5), f(1, 5)), Err(ExtractionError::Parameter(_))));
        assert!(matches!(extract_dense_subgraph(&h, f(3, 2), f(1, 5)), Err(ExtractionError::Parameter(_))));
        assert!(matches!(extract_dense_subgraph(&h, f(1, 2), f(0, 1)), Err(ExtractionError::Parameter(_))));
        assert_eq!(extract_dense_subgraph(&Graph::empty(0), f(1, 2), f(1, 5)), Err(ExtractionError::EmptyGraph));
    }

    #[test]
    fn high_and_low_vertices_are_separated() {
        // K5 on 0..5 with a pendant path 0 - 5 - 6.
        let mut edges: Vec<(usize, usize)> = (0..5).flat_map(|i| (i + 1..5).map(move |j| (i, j))).collect();
        edges.extend([(0, 5), (5, 6)]);
        let h = Graph::from_edges(7, edges).unwrap();
        // Reference 4: low = 8/5, high = 44/5.
        let r = peel_with_reference(&h, f(1, 5), f(1, 10), 4).unwrap();
        assert!(r.removed_high.is_empty());
        assert_eq!(r.removed_peel, vec![6, 5]);
        assert_eq!(r.kept, vec![0, 1, 2, 3, 4]);
        // Reference 2: high = 22/5 removes vertex 0; low = 4/5 keeps the path.
        let r = peel_with_reference(&h, f(1, 5), f(1, 10), 2).unwrap();
        assert_eq!(r.removed_high, vec![0]);
        assert!(r.removed_peel.is_empty());
        assert_eq!(r.kept, vec![1, 2, 3, 4, 5, 6]);
    }
}
