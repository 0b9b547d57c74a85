// SPDX-License-Identifier: Apache-2.0

//! Exhaustive enumeration of small graphs up to isomorphism and of small
//! list-critical instances.

use crate::graph::Graph;
use crate::lists::ListAssignment;
use crate::oracle::{is_l_critical, ConflictProblem, OracleError, DEFAULT_BUDGET};
use rayon::prelude::*;
use std::collections::BTreeSet;

/// Largest vertex count whose pair set fits a `u64` code.
pub const MAX_CODE_N: usize = 11;

fn pair_bit(i: usize, j: usize, n: usize) -> u32 {
    let (a, b) = (i.min(j), i.max(j));
    // Row-major index of (a, b) among pairs with a < b.
    (a * (2 * n - a - 1) / 2 + (b - a - 1)) as u32
}

fn code_under(g: &Graph, perm: &[usize]) -> u64 {
    let n = g.n();
    g.edges().fold(0u64, |acc, (u, v)| acc | 1 << pair_bit(perm[u], perm[v], n))
}

/// Canonical code: the smallest edge code over relabellings that list
/// vertices by decreasing degree. The candidate set depends only on the
/// isomorphism class, so isomorphic graphs get equal codes.
pub fn canonical_code(g: &Graph) -> u64 {
    let n = g.n();
    assert!(n <= MAX_CODE_N, "canonical codes support at most {MAX_CODE_N} vertices");
    let mut classes: Vec<Vec<usize>> = Vec::new();
    let mut by_degree: Vec<usize> = (0..n).collect();
    by_degree.sort_by_key(|&v| std::cmp::Reverse(g.neighbors(v).len()));
    for v in by_degree {
        match classes.last_mut() {
            Some(c) if g.neighbors(c[0]).len() == g.neighbors(v).len() => c.push(v),
            _ => classes.push(vec![v]),
        }
    }
    let mut perm = vec![0; n];
    let mut best = u64::MAX;
    assign(g, &classes, 0, 0, &mut perm, &mut vec![false; n], &mut best);
    best
}

fn assign(
    g: &Graph,
    classes: &[Vec<usize>],
    class: usize,
    next_pos: usize,
    perm: &mut Vec<usize>,
    used: &mut Vec<bool>,
    best: &mut u64,
) {
    if class == classes.len() {
        *best = (*best).min(code_under(g, perm));
        return;
    }
    let members = &classes[class];
    let placed = members.iter().filter(|&&v| used[v]).count();
    if placed == members.len() {
        assign(g, classes, class + 1, next_pos, perm, used, best);
        return;
    }
    for &v in members {
        if !used[v] {
            used[v] = true;
            perm[v] = next_pos;
            assign(g, classes, class, next_pos + 1, perm, used, best);
            used[v] = false;
        }
    }
}

fn decode(code: u64, n: usize) -> Graph {
    let edges =
        (0..n).flat_map(|i| (i + 1..n).map(move |j| (i, j))).filter(|&(i, j)| code >> pair_bit(i, j, n) & 1 == 1);
    Graph::from_edges(n, edges).expect("decoded edges are valid")
}

/// One representative per isomorphism class of graphs on `n` vertices.
///
/// Classes on `n` vertices are grown from classes on `n − 1` by adding a
/// vertex with every possible neighborhood.
pub fn graphs_up_to_isomorphism(n: usize) -> Vec<Graph> {
    if n == 0 {
        return vec![Graph::empty(0)];
    }
    let smaller = graphs_up_to_isomorphism(n - 1);
    let codes: BTreeSet<u64> = smaller
        .par_iter()
        .flat_map_iter(|h| {
            (0u32..1 << (n - 1)).map(move |mask| {
                let edges = h.edges().chain((0..n - 1).filter(|&i| mask >> i & 1 == 1).map(|i| (i, n - 1)));
                canonical_code(&Graph::from_edges(n, edges).expect("valid"))
            })
        })
        .collect();
    codes.into_iter().map(|c| decode(c, n)).collect()
}

pub fn is_connected(g: &Graph) -> bool {
    if g.n() == 0 {
        return true;
    }
    let mut seen = vec![false; g.n()];
    let mut stack = vec![0];
    seen[0] = true;
    while let Some(v) = stack.pop() {
        for &u in g.neighbors(v) {
            if !std::mem::replace(&mut seen[u], true) {
                stack.push(u);
            }
        }
    }
    seen.into_iter().all(|s| s)
}

/// All `k`-subsets of `0..universe` in lexicographic order.
pub fn k_subsets(universe: u32, k: usize) -> Vec<Vec<u32>> {
    let mut out = Vec::new();
    let mut cur: Vec<u32> = (0..k as u32).collect();
    if k as u32 > universe {
        return out;
    }
    loop {
        out.push(cur.clone());
        let mut i = k;
        loop {
            if i == 0 {
                return out;
            }
            i -= 1;
            if cur[i] < universe - (k - i) as u32 {
                cur[i] += 1;
                for j in i + 1..k {
                    cur[j] = cur[j - 1] + 1;
                }
                break;
            }
        }
    }
}

/// Every `(G, L)` with `G` connected on `n` vertices (up to isomorphism),
/// `|L(v)| = k` drawn from `0..universe`, vertex 0's list fixed to
/// `{0, …, k−1}`, such that `G` is L-critical.
///
/// Graphs with a vertex of degree below `k` are skipped: a critical graph
/// has `|L(v)| ≤ d(v)` everywhere.
pub fn critical_instances(n: usize, k: usize, universe: u32) -> Result<Vec<(Graph, ListAssignment)>, OracleError> {
    let subsets = k_subsets(universe, k);
    let graphs: Vec<Graph> =
        graphs_up_to_isomorphism(n).into_iter().filter(|g| is_connected(g) && g.min_degree() >= k).collect();
    let found: Result<Vec<Vec<(Graph, ListAssignment)>>, OracleError> = graphs
        .par_iter()
        .map(|g| {
            let mut out = Vec::new();
            let mut idx = vec![0usize; n];
            'outer: loop {
                let lists: Vec<Vec<u32>> =
                    (0..n).map(|v| if v == 0 { (0..k as u32).collect() } else { subsets[idx[v]].clone() }).collect();
                let lists = ListAssignment::new(lists)?;
                if ConflictProblem::for_lists(g, &lists).solve(DEFAULT_BUDGET)?.is_none() && is_l_critical(g, &lists)? {
                    out.push((g.clone(), lists));
                }
                for v in (1..n).rev() {
                    idx[v] += 1;
                    if idx[v] < subsets.len() {
                        continue 'outer;
                    }
                    idx[v] = 0;
                }
                break;
            }
            Ok(out)
        })
        .collect();
    Ok(found?.into_iter().flatten().collect())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn class_counts_match_known_sequence() {
        // Graphs on n unlabeled vertices: 1, 1, 2, 4, 11, 34, 156.
        let counts: Vec<usize> = (0..=6).map(|n| graphs_up_to_isomorphism(n).len()).collect();
        assert_eq!(counts, vec![1, 1, 2, 4, 11, 34, 156]);
        let connected = graphs_up_to_isomorphism(5).iter().filter(|g| is_connected(g)).count();
        assert_eq!(connected, 21);
    }

    #[test]
    fn canonical_code_is_relabelling_invariant() {
        let a = Graph::from_edges(4, [(0, 1), (1, 2), (2, 3)]).unwrap();
        let b = Graph::from_edges(4, [(2, 0), (0, 3), (3, 1)]).unwrap();
        let star = Graph::from_edges(4, [(0, 1), (0, 2), (0, 3)]).unwrap();
        assert_eq!(canonical_code(&a), canonical_code(&b));
        assert_ne!(canonical_code(&a), canonical_code(&star));
    }

    #[test]
    fn subsets() {
        assert_eq!(k_subsets(4, 2).len(), 6);
        assert_eq!(k_subsets(3, 0), vec![Vec::<u32>::new()]);
        assert!(k_subsets(2, 3).is_empty());
    }

    #[test]
    fn triangle_with_equal_pairs_is_found() {
        let found = critical_instances(3, 2, 4).unwrap();
        assert!(found.iter().any(|(_, l)| l.lists().iter().all(|x| x == &vec![0, 1])));
    }
}
