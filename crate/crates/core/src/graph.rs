// SPDX-License-Identifier: Apache-2.0

//! Simple undirected graphs and the exact primitives computed on them.

use crate::blossom;
use crate::flow::{FlowNetwork, INF};
use crate::fraction::Fraction;
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum GraphError {
    #[error("vertex {vertex} out of range for a graph on {n} vertices")]
    VertexOutOfRange { vertex: usize, n: usize },
    #[error("self-loop at vertex {0}")]
    SelfLoop(usize),
    #[error("adjacency is not symmetric: {0} lists {1} but not vice versa")]
    Asymmetric(usize, usize),
    #[error("pair ({0}, {1}) is not an edge of the host graph")]
    NotAnEdge(usize, usize),
    #[error("vertex {0} is covered twice by the matching")]
    NotDisjoint(usize),
}

/// Simple undirected graph on vertices `0..n` with sorted, deduplicated adjacency lists.
#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub struct Graph {
    adj: Vec<Vec<usize>>,
}

impl Graph {
    pub fn empty(n: usize) -> Self {
        Graph { adj: vec![Vec::new(); n] }
    }

    pub fn from_edges(n: usize, edges: impl IntoIterator<Item = (usize, usize)>) -> Result<Self, GraphError> {
        let mut adj = vec![Vec::new(); n];
        for (u, v) in edges {
            for x in [u, v] {
                if x >= n {
                    return Err(GraphError::VertexOutOfRange { vertex: x, n });
                }
            }
            if u == v {
                return Err(GraphError::SelfLoop(u));
            }
            adj[u].push(v);
            adj[v].push(u);
        }
        for list in &mut adj {
            list.sort_unstable();
            list.dedup();
        }
        Ok(Graph { adj })
    }

    /// Builds from neighbor arrays, rejecting loops, out-of-range ids and asymmetry.
    pub fn from_adjacency(mut adj: Vec<Vec<usize>>) -> Result<Self, GraphError> {
        let n = adj.len();
        for (v, list) in adj.iter_mut().enumerate() {
            list.sort_unstable();
            list.dedup();
            if let Some(&u) = list.iter().find(|&&u| u >= n) {
                return Err(GraphError::VertexOutOfRange { vertex: u, n });
            }
            if list.binary_search(&v).is_ok() {
                return Err(GraphError::SelfLoop(v));
            }
        }
        for v in 0..n {
            for &u in &adj[v] {
                if adj[u].binary_search(&v).is_err() {
                    return Err(GraphError::Asymmetric(v, u));
                }
            }
        }
        Ok(Graph { adj })
    }

    pub fn n(&self) -> usize {
        self.adj.len()
    }

    pub fn adjacency(&self) -> &[Vec<usize>] {
        &self.adj
    }

    pub fn check_vertex(&self, v: usize) -> Result<(), GraphError> {
        if v < self.n() {
            Ok(())
        } else {
            Err(GraphError::VertexOutOfRange { vertex: v, n: self.n() })
        }
    }

    /// Neighbors of `v` in increasing order. Panics if `v` is out of range.
    pub fn neighbors(&self, v: usize) -> &[usize] {
        &self.adj[v]
    }

    pub fn degree(&self, v: usize) -> Result<usize, GraphError> {
        self.check_vertex(v)?;
        Ok(self.adj[v].len())
    }

    pub fn has_edge(&self, u: usize, v: usize) -> bool {
        u < self.n() && self.adj[u].binary_search(&v).is_ok()
    }

    pub fn edge_count(&self) -> usize {
        self.adj.iter().map(Vec::len).sum::<usize>() / 2
    }

    /// Edges `(u, v)` with `u < v`, in lexicographic order.
    pub fn edges(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        self.adj.iter().enumerate().flat_map(|(u, list)| list.iter().filter(move |&&v| v > u).map(move |&v| (u, v)))
    }

    pub fn max_degree(&self) -> usize {
        self.adj.iter().map(Vec::len).max().unwrap_or(0)
    }

    pub fn min_degree(&self) -> usize {
        self.adj.iter().map(Vec::len).min().unwrap_or(0)
    }

    /// Average degree `2|E|/|V|` (zero for the null graph).
    pub fn average_degree(&self) -> Fraction {
        if self.n() == 0 {
            return Fraction::from_integer(0);
        }
        Fraction::new(2 * self.edge_count() as i64, self.n() as i64)
    }

    /// Induced subgraph on `vs`; vertex `i` of the result is `vs[i]`.
    pub fn induced(&self, vs: &[usize]) -> Graph {
        let mut index = vec![usize::MAX; self.n()];
        for (i, &v) in vs.iter().enumerate() {
            index[v] = i;
        }
        let adj = vs
            .iter()
            .map(|&v| {
                let mut list: Vec<usize> = self.adj[v].iter().map(|&u| index[u]).filter(|&i| i != usize::MAX).collect();
                list.sort_unstable();
                list
            })
            .collect();
        Graph { adj }
    }

    /// Graph with `v` deleted; vertices above `v` shift down by one.
    pub fn without_vertex(&self, v: usize) -> Graph {
        let keep: Vec<usize> = (0..self.n()).filter(|&u| u != v).collect();
        self.induced(&keep)
    }

    pub fn complement(&self) -> Graph {
        let n = self.n();
        let adj = (0..n).map(|v| (0..n).filter(|&u| u != v && !self.has_edge(u, v)).collect()).collect();
        Graph { adj }
    }

    /// Size of a largest clique containing `v`.
    pub fn local_clique_number(&self, v: usize) -> Result<usize, GraphError> {
        self.check_vertex(v)?;
        Ok(1 + max_clique_within(self, self.adj[v].clone()))
    }

    pub fn max_clique_size(&self) -> usize {
        max_clique_within(self, (0..self.n()).collect())
    }

    /// Number of non-adjacent pairs inside `s`.
    pub fn complement_edge_count(&self, s: &[usize]) -> usize {
        let k = s.len();
        let inside = s
            .iter()
            .enumerate()
            .flat_map(|(i, &u)| s[i + 1..].iter().map(move |&v| (u, v)))
            .filter(|&(u, v)| self.has_edge(u, v))
            .count();
        k * k.saturating_sub(1) / 2 - inside
    }

    pub fn triangle_count(&self) -> usize {
        // Count each triangle once at its smallest vertex via sorted-list intersection.
        let mut total = 0;
        for u in 0..self.n() {
            let higher: Vec<usize> = self.adj[u].iter().copied().filter(|&v| v > u).collect();
            for (i, &v) in higher.iter().enumerate() {
                total += higher[i + 1..].iter().filter(|&&w| self.has_edge(v, w)).count();
            }
        }
        total
    }

    /// A maximum matching in the complement of `self[s]`.
    pub fn max_antimatching(&self, s: &[usize]) -> Matching {
        let comp = self.induced(s).complement();
        let mate = blossom::maximum_matching(comp.adjacency());
        let pairs = mate.iter().enumerate().filter_map(|(i, m)| m.filter(|&j| i < j).map(|j| (s[i], s[j]))).collect();
        Matching::from_pairs_unchecked(pairs)
    }

    /// Exact maximum average degree over nonempty subgraphs.
    ///
    /// Dinkelbach iteration on the density `g = p/q`: a min cut in the
    /// edge/vertex closure network maximises `q·e(S) − p·|S|`; a positive
    /// optimum yields a strictly denser `S`, zero certifies optimality.
    pub fn mad_exact(&self) -> Fraction {
        let m = self.edge_count();
        if m == 0 {
            return Fraction::from_integer(0);
        }
        let n = self.n();
        let edges: Vec<(usize, usize)> = self.edges().collect();
        let (mut p, mut q) = (m as i64, n as i64);
        loop {
            let source = m + n;
            let sink = source + 1;
            let mut net = FlowNetwork::new(m + n + 2);
            for (i, &(u, v)) in edges.iter().enumerate() {
                net.add_arc(source, i, q);
                net.add_arc(i, m + u, INF);
                net.add_arc(i, m + v, INF);
            }
            for v in 0..n {
                net.add_arc(m + v, sink, p);
            }
            let cut = net.max_flow(source, sink);
            let best = q * m as i64 - cut;
            if best <= 0 {
                return Fraction::new(2 * p, q);
            }
            let side = net.source_side(source);
            let chosen: Vec<usize> = (0..n).filter(|&v| side[m + v]).collect();
            let inner = self.induced(&chosen).edge_count() as i64;
            let size = chosen.len() as i64;
            debug_assert!(inner * q > p * size, "closure did not improve density");
            let next = Fraction::new(inner, size);
            p = *next.numer();
            q = *next.denom();
        }
    }
}

/// Largest clique inside `candidates` (branch and bound with greedy-coloring bounds).
fn max_clique_within(g: &Graph, candidates: Vec<usize>) -> usize {
    let mut best = 0;
    expand(g, 0, candidates, &mut best);
    best
}

fn expand(g: &Graph, size: usize, candidates: Vec<usize>, best: &mut usize) {
    if candidates.is_empty() {
        *best = (*best).max(size);
        return;
    }
    let (order, colors) = color_sort(g, &candidates);
    for i in (0..order.len()).rev() {
        if size + colors[i] <= *best {
            return;
        }
        let v = order[i];
        let next: Vec<usize> = order[..i].iter().copied().filter(|&u| g.has_edge(u, v)).collect();
        expand(g, size + 1, next, best);
    }
}

/// Greedy coloring of `vs`, returned as vertices sorted by color with the color count so far.
fn color_sort(g: &Graph, vs: &[usize]) -> (Vec<usize>, Vec<usize>) {
    let mut classes: Vec<Vec<usize>> = Vec::new();
    for &v in vs {
        match classes.iter_mut().find(|c| c.iter().all(|&u| !g.has_edge(u, v))) {
            Some(class) => class.push(v),
            None => classes.push(vec![v]),
        }
    }
    let mut order = Vec::with_capacity(vs.len());
    let mut colors = Vec::with_capacity(vs.len());
    for (k, class) in classes.into_iter().enumerate() {
        for v in class {
            order.push(v);
            colors.push(k + 1);
        }
    }
    (order, colors)
}

/// A set of vertex-disjoint unordered pairs, stored as `(min, max)` in sorted order.
#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub struct Matching {
    pairs: Vec<(usize, usize)>,
}

impl Matching {
    /// Normalizes and checks disjointness. Host-graph membership is checked separately.
    pub fn new(pairs: impl IntoIterator<Item = (usize, usize)>) -> Result<Self, GraphError> {
        let m = Self::from_pairs_unchecked(pairs.into_iter().collect());
        let mut seen = std::collections::HashSet::new();
        for &(u, v) in &m.pairs {
            if u == v {
                return Err(GraphError::SelfLoop(u));
            }
            for x in [u, v] {
                if !seen.insert(x) {
                    return Err(GraphError::NotDisjoint(x));
                }
            }
        }
        Ok(m)
    }

    fn from_pairs_unchecked(pairs: Vec<(usize, usize)>) -> Self {
        let mut pairs: Vec<(usize, usize)> = pairs.into_iter().map(|(u, v)| (u.min(v), u.max(v))).collect();
        pairs.sort_unstable();
        Matching { pairs }
    }

    pub fn pairs(&self) -> &[(usize, usize)] {
        &self.pairs
    }

    pub fn len(&self) -> usize {
        self.pairs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.pairs.is_empty()
    }

    pub fn partner(&self, v: usize) -> Option<usize> {
        self.pairs.iter().find_map(|&(a, b)| {
            if a == v {
                Some(b)
            } else if b == v {
                Some(a)
            } else {
                None
            }
        })
    }

    /// Checks every pair is an edge of `host`.
    pub fn validate_in(&self, host: &Graph) -> Result<(), GraphError> {
        for &(u, v) in &self.pairs {
            host.check_vertex(u)?;
            host.check_vertex(v)?;
            if !host.has_edge(u, v) {
                return Err(GraphError::NotAnEdge(u, v));
            }
        }
        Ok(())
    }

    /// Checks every pair is a non-edge of `g` (an edge of its complement).
    pub fn validate_anti(&self, g: &Graph) -> Result<(), GraphError> {
        for &(u, v) in &self.pairs {
            g.check_vertex(u)?;
            g.check_vertex(v)?;
            if g.has_edge(u, v) {
                return Err(GraphError::NotAnEdge(u, v));
            }
        }
        Ok(())
    }
}
