// SPDX-License-Identifier: Apache-2.0

//! Correspondence assignments `(L, M)`: lists plus, for each edge, a matching
//! between the two endpoint lists naming the color pairs that conflict.

use crate::graph::Graph;
use crate::lists::{Coloring, ListAssignment, ListError};
use crate::oracle::{ConflictProblem, OracleError};
use std::collections::BTreeMap;
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum CorrespondenceError {
    #[error("edge ({0}, {1}) has no matching")]
    MissingEdge(usize, usize),
    #[error("({0}, {1}) is not an edge of the graph")]
    NotAnEdge(usize, usize),
    #[error("pair ({cu}, {cv}) on edge ({u}, {v}) uses a color outside the lists")]
    ColorOutsideList { u: usize, v: usize, cu: u32, cv: u32 },
    #[error("pairs on edge ({u}, {v}) are not a matching: color {color} of vertex {vertex} appears twice")]
    NotAMatching { u: usize, v: usize, vertex: usize, color: u32 },
    #[error("vertex {0} is outside U but has no color")]
    Uncolored(usize),
    #[error("colored vertices {0} and {1} use a matched pair")]
    Conflict(usize, usize),
    #[error("vertex {vertex} is colored {color}, which is not in its list")]
    ColorNotInList { vertex: usize, color: u32 },
    #[error("uncolored set mentions vertex {0}, outside the graph")]
    VertexOutOfRange(usize),
    #[error(transparent)]
    Lists(#[from] ListError),
}

/// Lists together with one color matching per edge. Pairs on edge `{u, v}`
/// are stored under the key `(min, max)` as `(color at min, color at max)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CorrespondenceAssignment {
    lists: ListAssignment,
    matchings: BTreeMap<(usize, usize), Vec<(u32, u32)>>,
}

impl CorrespondenceAssignment {
    /// Validates lists, edge keys and the matching property. `pairs` may name
    /// an edge as `(u, v)` in either order; pairs are oriented to match.
    pub fn new(
        g: &Graph,
        lists: ListAssignment,
        edges: impl IntoIterator<Item = ((usize, usize), Vec<(u32, u32)>)>,
    ) -> Result<Self, CorrespondenceError> {
        lists.check_for(g)?;
        Self::build(g, lists, edges)
    }

    fn build(
        g: &Graph,
        lists: ListAssignment,
        edges: impl IntoIterator<Item = ((usize, usize), Vec<(u32, u32)>)>,
    ) -> Result<Self, CorrespondenceError> {
        let mut matchings = BTreeMap::new();
        for ((u, v), pairs) in edges {
            if !g.has_edge(u, v) {
                return Err(CorrespondenceError::NotAnEdge(u, v));
            }
            let mut oriented: Vec<(u32, u32)> =
                if u < v { pairs } else { pairs.into_iter().map(|(a, b)| (b, a)).collect() };
            oriented.sort_unstable();
            oriented.dedup();
            matchings.insert((u.min(v), u.max(v)), oriented);
        }
        let ca = CorrespondenceAssignment { lists, matchings };
        ca.validate(g)?;
        Ok(ca)
    }

    fn validate(&self, g: &Graph) -> Result<(), CorrespondenceError> {
        for (u, v) in g.edges() {
            let pairs = self.matchings.get(&(u, v)).ok_or(CorrespondenceError::MissingEdge(u, v))?;
            let mut seen_u = Vec::new();
            let mut seen_v = Vec::new();
            for &(cu, cv) in pairs {
                if !self.lists.contains(u, cu) || !self.lists.contains(v, cv) {
                    return Err(CorrespondenceError::ColorOutsideList { u, v, cu, cv });
                }
                if seen_u.contains(&cu) {
                    return Err(CorrespondenceError::NotAMatching { u, v, vertex: u, color: cu });
                }
                if seen_v.contains(&cv) {
                    return Err(CorrespondenceError::NotAMatching { u, v, vertex: v, color: cv });
                }
                seen_u.push(cu);
                seen_v.push(cv);
            }
        }
        Ok(())
    }

    pub fn lists(&self) -> &ListAssignment {
        &self.lists
    }

    /// All edges with their pairs, keyed `(min, max)`.
    pub fn matchings(&self) -> &BTreeMap<(usize, usize), Vec<(u32, u32)>> {
        &self.matchings
    }

    /// Pairs on edge `uv`, oriented as `(color at u, color at v)`.
    pub fn pairs(&self, u: usize, v: usize) -> Vec<(u32, u32)> {
        let stored = self.matchings.get(&(u.min(v), u.max(v))).map(Vec::as_slice).unwrap_or(&[]);
        if u < v {
            stored.to_vec()
        } else {
            stored.iter().map(|&(a, b)| (b, a)).collect()
        }
    }

    /// The color of `v` matched to color `c` of `u`, if any.
    pub fn partner(&self, u: usize, c: u32, v: usize) -> Option<u32> {
        let stored = self.matchings.get(&(u.min(v), u.max(v)))?;
        if u < v {
            stored.iter().find(|p| p.0 == c).map(|p| p.1)
        } else {
            stored.iter().find(|p| p.1 == c).map(|p| p.0)
        }
    }

    /// Whether `(u, cu)(v, cv)` is a matched pair of edge `uv`.
    pub fn conflicts(&self, u: usize, cu: u32, v: usize, cv: u32) -> bool {
        self.partner(u, cu, v) == Some(cv)
    }

    /// Every edge matching saturates at least one endpoint's list.
    pub fn is_total(&self) -> bool {
        self.matchings
            .iter()
            .all(|(&(u, v), pairs)| pairs.len() == self.lists.size(u) || pairs.len() == self.lists.size(v))
    }

    /// Per-vertex lookup: `table[v][k][i]` is the index in `L(u)` matched to
    /// `L(v)[i]`, where `u` is the `k`-th neighbor of `v`.
    pub fn match_table(&self, g: &Graph) -> MatchTable {
        let table = (0..g.n())
            .map(|v| {
                g.neighbors(v)
                    .iter()
                    .map(|&u| {
                        let mut row = vec![NO_MATCH; self.lists.size(v)];
                        for (cv, cu) in self.pairs(v, u) {
                            let i = self.lists.index_of(v, cv).expect("validated");
                            row[i] = self.lists.index_of(u, cu).expect("validated") as u32;
                        }
                        row
                    })
                    .collect()
            })
            .collect();
        MatchTable { table }
    }
}

pub const NO_MATCH: u32 = u32::MAX;

#[derive(Clone, Debug)]
pub struct MatchTable {
    table: Vec<Vec<Vec<u32>>>,
}

impl MatchTable {
    /// Index in the `k`-th neighbor's list matched to color index `i` of `v`.
    #[inline]
    pub fn partner(&self, v: usize, k: usize, i: usize) -> Option<usize> {
        let j = self.table[v][k][i];
        (j != NO_MATCH).then_some(j as usize)
    }

    #[inline]
    pub fn row(&self, v: usize, k: usize) -> &[u32] {
        &self.table[v][k]
    }
}

/// `M_uv = {(c, c) : c ∈ L(u) ∩ L(v)}`; its colorings are exactly the proper L-colorings.
pub fn identity_correspondence(
    g: &Graph,
    lists: &ListAssignment,
) -> Result<CorrespondenceAssignment, CorrespondenceError> {
    lists.check_for(g)?;
    let edges: Vec<_> = g
        .edges()
        .map(|(u, v)| {
            let common = lists.list(u).iter().filter(|&&c| lists.contains(v, c)).map(|&c| (c, c)).collect();
            ((u, v), common)
        })
        .collect();
    CorrespondenceAssignment::build(g, lists.clone(), edges)
}

/// Extends each edge matching by pairing unmatched colors of both ends in
/// ascending order until one side is saturated. Existing pairs are kept.
pub fn make_total(g: &Graph, ca: &CorrespondenceAssignment) -> Result<CorrespondenceAssignment, CorrespondenceError> {
    ca.lists.check_for(g)?;
    ca.validate(g)?;
    let lists = &ca.lists;
    let edges: Vec<_> = ca
        .matchings
        .iter()
        .map(|(&(u, v), pairs)| {
            let free_u = lists.list(u).iter().filter(|&&c| !pairs.iter().any(|p| p.0 == c));
            let free_v = lists.list(v).iter().filter(|&&c| !pairs.iter().any(|p| p.1 == c));
            let mut extended = pairs.clone();
            extended.extend(free_u.zip(free_v).map(|(&a, &b)| (a, b)));
            ((u, v), extended)
        })
        .collect();
    CorrespondenceAssignment::build(g, lists.clone(), edges)
}

/// Total, list-respecting, and no edge uses a matched pair.
pub fn is_lm_coloring(g: &Graph, ca: &CorrespondenceAssignment, phi: &Coloring) -> bool {
    let Some(colors) = phi.to_total() else {
        return false;
    };
    colors.len() == g.n()
        && colors.iter().enumerate().all(|(v, &c)| ca.lists.contains(v, c))
        && g.edges().all(|(u, v)| !ca.conflicts(u, colors[u], v, colors[v]))
}

/// Correspondence assignment on `G[U]` left after coloring `V ∖ U` by `φ`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ResidualAssignment {
    pub graph: Graph,
    /// `vertices[i]` is the original id of residual vertex `i`.
    pub vertices: Vec<usize>,
    pub assignment: CorrespondenceAssignment,
}

impl ResidualAssignment {
    /// Combines a coloring of the residual graph with `φ` on the colored vertices.
    pub fn splice(&self, phi: &Coloring, uncolored: &[bool], residual_coloring: &Coloring) -> Coloring {
        let mut out =
            Coloring::from_options((0..phi.len()).map(|v| if uncolored[v] { None } else { phi.get(v) }).collect());
        for (i, &v) in self.vertices.iter().enumerate() {
            out.set(v, residual_coloring.get(i));
        }
        out
    }
}

/// Checks that `φ` colors every vertex outside `U` from its list with no matched pair used.
pub fn check_naive_partial(
    g: &Graph,
    ca: &CorrespondenceAssignment,
    phi: &Coloring,
    uncolored: &[bool],
) -> Result<(), CorrespondenceError> {
    for v in 0..g.n() {
        if uncolored[v] {
            continue;
        }
        let c = phi.get(v).ok_or(CorrespondenceError::Uncolored(v))?;
        if !ca.lists.contains(v, c) {
            return Err(CorrespondenceError::ColorNotInList { vertex: v, color: c });
        }
    }
    for (u, v) in g.edges() {
        if !uncolored[u] && !uncolored[v] && ca.conflicts(u, phi.get(u).unwrap(), v, phi.get(v).unwrap()) {
            return Err(CorrespondenceError::Conflict(u, v));
        }
    }
    Ok(())
}

/// `L′(v) = L(v)` minus colors matched to `φ(u)` for colored neighbors `u`,
/// restricted to `G[U]` with the induced matchings.
pub fn residual(
    g: &Graph,
    ca: &CorrespondenceAssignment,
    phi: &Coloring,
    u_set: &[usize],
) -> Result<ResidualAssignment, CorrespondenceError> {
    let mut uncolored = vec![false; g.n()];
    for &v in u_set {
        if v >= g.n() {
            return Err(CorrespondenceError::VertexOutOfRange(v));
        }
        uncolored[v] = true;
    }
    check_naive_partial(g, ca, phi, &uncolored)?;
    let vertices: Vec<usize> = (0..g.n()).filter(|&v| uncolored[v]).collect();
    let lists: Vec<Vec<u32>> = vertices.iter().map(|&v| surviving_colors(g, ca, phi, &uncolored, v)).collect();
    let graph = g.induced(&vertices);
    let residual_lists = ListAssignment::new_allow_empty(lists);
    let edges: Vec<_> = graph
        .edges()
        .map(|(i, j)| {
            let (u, v) = (vertices[i], vertices[j]);
            let pairs = ca
                .pairs(u, v)
                .into_iter()
                .filter(|&(cu, cv)| residual_lists.contains(i, cu) && residual_lists.contains(j, cv))
                .collect();
            ((i, j), pairs)
        })
        .collect();
    let assignment = CorrespondenceAssignment::build(&graph, residual_lists, edges)?;
    Ok(ResidualAssignment { graph, vertices, assignment })
}

/// Colors of `L(v)` not matched to the color of any colored neighbor.
pub fn surviving_colors(
    g: &Graph,
    ca: &CorrespondenceAssignment,
    phi: &Coloring,
    uncolored: &[bool],
    v: usize,
) -> Vec<u32> {
    ca.lists
        .list(v)
        .iter()
        .copied()
        .filter(|&c| {
            g.neighbors(v).iter().all(|&u| uncolored[u] || !ca.conflicts(v, c, u, phi.get(u).expect("colored")))
        })
        .collect()
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum GreedyLmOutcome {
    Colored(Coloring),
    Blocked { vertex: usize, partial: Coloring },
}

/// Colors in `order`, each vertex taking its smallest color not matched to a colored neighbor's color.
pub fn greedy_lm_color(g: &Graph, ca: &CorrespondenceAssignment, order: &[usize]) -> GreedyLmOutcome {
    let mut coloring = Coloring::uncolored(g.n());
    for &v in order {
        let pick =
            ca.lists.list(v).iter().copied().find(|&c| {
                g.neighbors(v).iter().all(|&u| coloring.get(u).map_or(true, |cu| !ca.conflicts(v, c, u, cu)))
            });
        match pick {
            Some(c) => coloring.set(v, Some(c)),
            None => return GreedyLmOutcome::Blocked { vertex: v, partial: coloring },
        }
    }
    GreedyLmOutcome::Colored(coloring)
}

/// Exact `(L, M)`-colorability by backtracking; lists may be empty.
pub fn brute_force_lm_colorable(
    g: &Graph,
    ca: &CorrespondenceAssignment,
    budget: u64,
) -> Result<Option<Coloring>, OracleError> {
    let lists = &ca.lists;
    let mut p = ConflictProblem::new((0..g.n()).map(|v| lists.size(v)).collect());
    for (&(u, v), pairs) in &ca.matchings {
        for &(cu, cv) in pairs {
            p.forbid(u, lists.index_of(u, cu).unwrap(), v, lists.index_of(v, cv).unwrap());
        }
    }
    Ok(p.solve(budget)?.map(|idx| Coloring::total(idx.iter().enumerate().map(|(v, &i)| lists.list(v)[i]).collect())))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::generators;
    use crate::oracle::{brute_force_l_colorable, DEFAULT_BUDGET};
    use proptest::prelude::*;
    use rand::{Rng, SeedableRng};

    fn l(lists: Vec<Vec<u32>>) -> ListAssignment {
        ListAssignment::new(lists).unwrap()
    }

    #[test]
    fn identity_examples() {
        let g = generators::path(2);
        let ca = identity_correspondence(&g, &l(vec![vec![1, 2], vec![2, 3]])).unwrap();
        assert_eq!(ca.pairs(0, 1), vec![(2, 2)]);
        let ca = identity_correspondence(&g, &l(vec![vec![1], vec![2]])).unwrap();
        assert!(ca.pairs(0, 1).is_empty());
        let ca = identity_correspondence(&g, &ListAssignment::uniform(2, 4)).unwrap();
        assert_eq!(ca.pairs(1, 0).len(), 4);
    }

    #[test]
    fn totalization_examples() {
        let g = generators::path(2);
        let ca = identity_correspondence(&g, &l(vec![vec![1, 2], vec![2, 3]])).unwrap();
        let total = make_total(&g, &ca).unwrap();
        assert_eq!(total.pairs(0, 1), vec![(1, 3), (2, 2)]);
        assert!(total.is_total());
        assert_eq!(make_total(&g, &total).unwrap(), total);

        let ca = CorrespondenceAssignment::new(&g, l(vec![vec![5], vec![1, 2, 3]]), [((0, 1), vec![])]).unwrap();
        assert!(!ca.is_total());
        let total = make_total(&g, &ca).unwrap();
        assert_eq!(total.pairs(0, 1), vec![(5, 1)]);
    }

    #[test]
    fn rejects_invalid_matchings() {
        let g = generators::path(2);
        let lists = ListAssignment::uniform(2, 2);
        let bad = CorrespondenceAssignment::new(&g, lists.clone(), [((0, 1), vec![(0, 0), (0, 1)])]);
        assert!(matches!(bad, Err(CorrespondenceError::NotAMatching { .. })));
        assert_eq!(CorrespondenceAssignment::new(&g, lists.clone(), []), Err(CorrespondenceError::MissingEdge(0, 1)));
        let outside = CorrespondenceAssignment::new(&g, lists, [((1, 0), vec![(7, 0)])]);
        assert!(matches!(outside, Err(CorrespondenceError::ColorOutsideList { .. })));
    }

    #[test]
    fn lm_coloring_checks() {
        let g = generators::path(2);
        let lists = ListAssignment::uniform(2, 3);
        let id = identity_correspondence(&g, &lists).unwrap();
        assert!(is_lm_coloring(&g, &id, &Coloring::total(vec![0, 1])));
        assert!(!is_lm_coloring(&g, &id, &Coloring::total(vec![2, 2])));
        let twisted = CorrespondenceAssignment::new(&g, lists, [((0, 1), vec![(1, 2)])]).unwrap();
        assert!(!is_lm_coloring(&g, &twisted, &Coloring::total(vec![1, 2])));
        assert!(is_lm_coloring(&g, &twisted, &Coloring::total(vec![1, 1])));
    }

    #[test]
    fn residual_examples() {
        let g = generators::star(3);
        let lists = l(vec![vec![0, 1], vec![0, 1], vec![1, 2], vec![0, 2]]);
        let ca = identity_correspondence(&g, &lists).unwrap();
        let phi = Coloring::total(vec![0, 1, 1, 2]);

        let full = residual(&g, &ca, &phi, &[0, 1, 2, 3]).unwrap();
        assert_eq!(full.graph, g);
        assert_eq!(full.assignment, ca);

        let none = residual(&g, &ca, &phi, &[]).unwrap();
        assert_eq!(none.graph.n(), 0);

        // Center colored 0: leaves with 0 in their list lose exactly 0.
        let leaves = residual(&g, &ca, &phi, &[1, 2, 3]).unwrap();
        assert_eq!(leaves.assignment.lists().list(0), &[1]);
        assert_eq!(leaves.assignment.lists().list(1), &[1, 2]);
        assert_eq!(leaves.assignment.lists().list(2), &[2]);

        // Colored edge using a matched pair is rejected.
        let clash = Coloring::total(vec![0, 0, 1, 2]);
        let bad = residual(&g, &ca, &clash, &[2, 3]);
        assert_eq!(bad, Err(CorrespondenceError::Conflict(0, 1)));
    }

    #[test]
    fn brute_force_lm_agrees_with_lists_on_identity() {
        let k3 = generators::complete(3);
        let lists = ListAssignment::uniform(3, 2);
        let id = identity_correspondence(&k3, &lists).unwrap();
        assert!(brute_force_lm_colorable(&k3, &id, DEFAULT_BUDGET).unwrap().is_none());
        // Twisting one edge makes the triangle colorable from 2-lists.
        let twisted = CorrespondenceAssignment::new(
            &k3,
            lists,
            [((0, 1), vec![(0, 0), (1, 1)]), ((1, 2), vec![(0, 0), (1, 1)]), ((0, 2), vec![(0, 1), (1, 0)])],
        )
        .unwrap();
        let w = brute_force_lm_colorable(&k3, &twisted, DEFAULT_BUDGET).unwrap().unwrap();
        assert!(is_lm_coloring(&k3, &twisted, &w));
    }

    fn random_instance(seed: u64) -> (Graph, CorrespondenceAssignment) {
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
        let n = rng.gen_range(2..=10);
        let g = generators::gnp_with(n, rng.gen_range(0.2..0.8), &mut rng);
        let lists = l((0..n)
            .map(|_| {
                let k = rng.gen_range(1..=4);
                let extra = rng.gen_range(0..6);
                (0..6u32).filter(|_| rng.gen_bool(0.5)).chain([extra]).take(k).collect()
            })
            .collect());
        let edges: Vec<_> = g
            .edges()
            .map(|(u, v)| {
                let mut cv: Vec<u32> = lists.list(v).to_vec();
                let mut pairs = Vec::new();
                for &cu in lists.list(u) {
                    if !cv.is_empty() && rng.gen_bool(0.6) {
                        let j = rng.gen_range(0..cv.len());
                        pairs.push((cu, cv.swap_remove(j)));
                    }
                }
                ((u, v), pairs)
            })
            .collect();
        let ca = CorrespondenceAssignment::new(&g, lists, edges).unwrap();
        (g, ca)
    }

    proptest! {
        #[test]
        fn totalization_is_total_and_keeps_pairs(seed in any::<u64>()) {
            let (g, ca) = random_instance(seed);
            let total = make_total(&g, &ca).unwrap();
            prop_assert!(total.is_total());
            for (key, pairs) in ca.matchings() {
                prop_assert!(pairs.iter().all(|p| total.matchings()[key].contains(p)));
            }
            let id = make_total(&g, &identity_correspondence(&g, ca.lists()).unwrap()).unwrap();
            if let Some(w) = brute_force_lm_colorable(&g, &id, DEFAULT_BUDGET).unwrap() {
                prop_assert!(w.is_proper_l_coloring(&g, ca.lists()));
            }
        }

        #[test]
        fn splice_of_residual_coloring_is_lm_coloring(seed in any::<u64>(), mask in any::<u16>()) {
            let (g, ca) = random_instance(seed);
            let Some(full) = brute_force_lm_colorable(&g, &ca, DEFAULT_BUDGET).unwrap() else { return Ok(()); };
            let u_set: Vec<usize> = (0..g.n()).filter(|&v| mask >> v & 1 == 1).collect();
            let res = residual(&g, &ca, &full, &u_set).unwrap();
            let mut uncolored = vec![false; g.n()];
            u_set.iter().for_each(|&v| uncolored[v] = true);
            // The restriction of `full` to U is a residual coloring, so the residual is colorable.
            let sub = brute_force_lm_colorable(&res.graph, &res.assignment, DEFAULT_BUDGET).unwrap();
            prop_assert!(sub.is_some());
            let spliced = res.splice(&full, &uncolored, &sub.unwrap());
            prop_assert!(is_lm_coloring(&g, &ca, &spliced));
        }

        #[test]
        fn identity_colorings_are_list_colorings(seed in any::<u64>()) {
            let (g, ca) = random_instance(seed);
            let id = identity_correspondence(&g, ca.lists()).unwrap();
            let a = brute_force_lm_colorable(&g, &id, DEFAULT_BUDGET).unwrap();
            let b = brute_force_l_colorable(&g, ca.lists()).unwrap();
            prop_assert_eq!(a.is_some(), b.is_some());
            if let Some(w) = a { prop_assert!(w.is_proper_l_coloring(&g, ca.lists())); }
        }
    }
}
