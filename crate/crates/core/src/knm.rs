// SPDX-License-Identifier: Apache-2.0

//! List coloring of complete graphs minus a matching, and the density audit
//! for list-critical graphs.

use crate::bipartite::hopcroft_karp;
use crate::graph::{Graph, GraphError, Matching};
use crate::lists::{Coloring, ListAssignment, ListError};
use crate::oracle::{is_l_critical, OracleError};
use std::collections::BTreeMap;
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum KnmError {
    #[error("matched vertex {vertex} has {size} colors, fewer than |M| = {matching}")]
    MatchedListTooSmall { vertex: usize, size: usize, matching: usize },
    #[error("matched pair ({a}, {b}) has {total} colors in total, fewer than n = {n}")]
    PairListsTooSmall { a: usize, b: usize, total: usize, n: usize },
    #[error("unmatched vertex {vertex} has {size} colors, fewer than n − |M| = {needed}")]
    UnmatchedListTooSmall { vertex: usize, size: usize, needed: usize },
    #[error("matching pair ({0}, {1}) lies outside the {2} vertices")]
    PairOutOfRange(usize, usize, usize),
    #[error(transparent)]
    Graph(#[from] GraphError),
    #[error(transparent)]
    Lists(#[from] ListError),
    /// Cannot happen when the hypotheses hold; reaching it means the
    /// implementation is wrong.
    #[error("internal failure: no system of distinct representatives; {dump}")]
    HallFailure { dump: String },
}

/// `K_n − M` with a list assignment.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct KnmInstance {
    pub n: usize,
    pub matching: Matching,
    pub lists: ListAssignment,
}

impl KnmInstance {
    pub fn new(n: usize, matching: Matching, lists: ListAssignment) -> Result<Self, KnmError> {
        if lists.len() != n {
            return Err(ListError::WrongLength { lists: lists.len(), n }.into());
        }
        if let Some(&(a, b)) = matching.pairs().iter().find(|&&(a, b)| a >= n || b >= n) {
            return Err(KnmError::PairOutOfRange(a, b, n));
        }
        Ok(KnmInstance { n, matching, lists })
    }

    /// The graph `K_n − M`.
    pub fn graph(&self) -> Graph {
        let edges = (0..self.n)
            .flat_map(|u| (u + 1..self.n).map(move |v| (u, v)))
            .filter(|&(u, v)| self.matching.partner(u) != Some(v));
        Graph::from_edges(self.n, edges).expect("valid by construction")
    }

    /// Checks the size conditions on matched pairs and unmatched vertices.
    pub fn check_hypotheses(&self) -> Result<(), KnmError> {
        let m = self.matching.len();
        for &(a, b) in self.matching.pairs() {
            for x in [a, b] {
                if self.lists.size(x) < m {
                    return Err(KnmError::MatchedListTooSmall { vertex: x, size: self.lists.size(x), matching: m });
                }
            }
            let total = self.lists.size(a) + self.lists.size(b);
            if total < self.n {
                return Err(KnmError::PairListsTooSmall { a, b, total, n: self.n });
            }
        }
        for v in (0..self.n).filter(|&v| self.matching.partner(v).is_none()) {
            if self.lists.size(v) < self.n - m {
                return Err(KnmError::UnmatchedListTooSmall {
                    vertex: v,
                    size: self.lists.size(v),
                    needed: self.n - m,
                });
            }
        }
        Ok(())
    }
}

/// Colors `K_n − M` from its lists.
///
/// While some matched pair shares a color, both ends take the least common
/// color of the lexicographically least such pair, leave the graph, and that
/// color is struck from every other list. Once no matched pair shares a
/// color, the remaining vertices get distinct colors from a bipartite
/// matching of vertices to colors.
pub fn color_knm(inst: &KnmInstance) -> Result<Coloring, KnmError> {
    inst.check_hypotheses()?;
    let mut lists: Vec<Vec<u32>> = inst.lists.lists().to_vec();
    let mut alive = vec![true; inst.n];
    let mut pairs: Vec<(usize, usize)> = inst.matching.pairs().to_vec();
    let mut coloring = Coloring::uncolored(inst.n);

    loop {
        let pick = pairs.iter().enumerate().find_map(|(i, &(a, b))| {
            lists[a].iter().find(|c| lists[b].binary_search(c).is_ok()).map(|&c| (i, a, b, c))
        });
        let Some((i, a, b, c)) = pick else { break };
        coloring.set(a, Some(c));
        coloring.set(b, Some(c));
        alive[a] = false;
        alive[b] = false;
        pairs.remove(i);
        for (v, list) in lists.iter_mut().enumerate() {
            if alive[v] {
                list.retain(|&x| x != c);
            }
        }
    }

    let rest: Vec<usize> = (0..inst.n).filter(|&v| alive[v]).collect();
    let mut color_ids: BTreeMap<u32, usize> = BTreeMap::new();
    for &v in &rest {
        for &c in &lists[v] {
            let next = color_ids.len();
            color_ids.entry(c).or_insert(next);
        }
    }
    let palette: Vec<u32> = {
        let mut p = vec![0; color_ids.len()];
        for (&c, &i) in &color_ids {
            p[i] = c;
        }
        p
    };
    let adj: Vec<Vec<usize>> = rest.iter().map(|&v| lists[v].iter().map(|c| color_ids[c]).collect()).collect();
    let sdr = hopcroft_karp(&adj, palette.len());
    for (k, &v) in rest.iter().enumerate() {
        match sdr[k] {
            Some(j) => coloring.set(v, Some(palette[j])),
            None => {
                let dump = format!(
                    "instance n={} M={:?} lists={:?}; after pair recursion: alive={:?} lists={:?}; vertex {} unmatched",
                    inst.n,
                    inst.matching.pairs(),
                    inst.lists.lists(),
                    rest,
                    rest.iter().map(|&v| &lists[v]).collect::<Vec<_>>(),
                    v
                );
                return Err(KnmError::HallFailure { dump });
            }
        }
    }
    Ok(coloring)
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum AuditError {
    #[error("pair ({0}, {1}) is not a non-adjacent pair inside H")]
    NotAntimatching(usize, usize),
    #[error("vertex {0} appears twice in H or in the matching")]
    Repeated(usize),
    #[error(transparent)]
    Graph(#[from] GraphError),
    #[error(transparent)]
    Lists(#[from] ListError),
    #[error(transparent)]
    Oracle(#[from] OracleError),
}

/// `|E(H̄)|` against `|M|(|V(H)| − |M|) − Σ_{u∈H} Save_L(u)`, with `Save`
/// measured in the whole graph.
#[derive(Clone, Debug, PartialEq, Eq, serde::Serialize)]
pub struct AuditRecord {
    pub lhs: i64,
    pub rhs: i64,
    pub holds: bool,
    /// Whether `g` is L-critical; the inequality is only guaranteed then.
    pub critical: bool,
}

/// Audits many `(H, M)` against one `(g, L)`, deciding criticality once.
pub struct Auditor<'a> {
    g: &'a Graph,
    lists: &'a ListAssignment,
    critical: Option<bool>,
}

impl<'a> Auditor<'a> {
    pub fn new(g: &'a Graph, lists: &'a ListAssignment) -> Result<Self, AuditError> {
        lists.check_for(g)?;
        Ok(Auditor { g, lists, critical: None })
    }

    pub fn is_critical(&mut self) -> Result<bool, AuditError> {
        if let Some(c) = self.critical {
            return Ok(c);
        }
        let c = is_l_critical(self.g, self.lists)?;
        self.critical = Some(c);
        Ok(c)
    }

    pub fn audit(&mut self, h: &[usize], m: &Matching) -> Result<AuditRecord, AuditError> {
        let g = self.g;
        let mut in_h = vec![false; g.n()];
        for &v in h {
            g.check_vertex(v)?;
            if std::mem::replace(&mut in_h[v], true) {
                return Err(AuditError::Repeated(v));
            }
        }
        let mut covered = vec![false; g.n()];
        for &(a, b) in m.pairs() {
            if a >= g.n() || b >= g.n() || !in_h[a] || !in_h[b] || a == b || g.has_edge(a, b) {
                return Err(AuditError::NotAntimatching(a, b));
            }
            for x in [a, b] {
                if std::mem::replace(&mut covered[x], true) {
                    return Err(AuditError::Repeated(x));
                }
            }
        }
        let lhs = g.complement_edge_count(h) as i64;
        let size = m.len() as i64;
        let save: i64 = h.iter().map(|&u| g.neighbors(u).len() as i64 + 1 - self.lists.size(u) as i64).sum();
        let rhs = size * (h.len() as i64 - size) - save;
        Ok(AuditRecord { lhs, rhs, holds: lhs >= rhs, critical: self.is_critical()? })
    }
}

/// One-shot form of [`Auditor::audit`].
pub fn density_audit(g: &Graph, lists: &ListAssignment, h: &[usize], m: &Matching) -> Result<AuditRecord, AuditError> {
    Auditor::new(g, lists)?.audit(h, m)
}

/// Every matching (including the empty one) of the complement of `g[h]`.
pub fn all_antimatchings(g: &Graph, h: &[usize]) -> Vec<Matching> {
    let non_edges: Vec<(usize, usize)> = h
        .iter()
        .enumerate()
        .flat_map(|(i, &a)| h[i + 1..].iter().map(move |&b| (a, b)))
        .filter(|&(a, b)| !g.has_edge(a, b))
        .collect();
    let mut out = Vec::new();
    let mut current = Vec::new();
    let mut used = vec![false; g.n()];
    fn go(
        i: usize,
        non_edges: &[(usize, usize)],
        used: &mut Vec<bool>,
        current: &mut Vec<(usize, usize)>,
        out: &mut Vec<Matching>,
    ) {
        if i == non_edges.len() {
            out.push(Matching::new(current.iter().copied()).expect("disjoint by construction"));
            return;
        }
        go(i + 1, non_edges, used, current, out);
        let (a, b) = non_edges[i];
        if !used[a] && !used[b] {
            used[a] = true;
            used[b] = true;
            current.push((a, b));
            go(i + 1, non_edges, used, current, out);
            current.pop();
            used[a] = false;
            used[b] = false;
        }
    }
    go(0, &non_edges, &mut used, &mut current, &mut out);
    out
}

/// Largest graph [`exhaustive_audit`] accepts; the work is exponential in `n`.
pub const EXHAUSTIVE_AUDIT_MAX_N: usize = 12;

#[derive(Clone, Debug, PartialEq, Eq, serde::Serialize)]
pub struct AuditViolation {
    pub h: Vec<usize>,
    pub matching: Vec<(usize, usize)>,
    pub lhs: i64,
    pub rhs: i64,
}

#[derive(Clone, Debug, PartialEq, Eq, serde::Serialize)]
pub struct AuditSummary {
    pub critical: bool,
    /// Number of `(H, M)` pairs evaluated.
    pub checked: u64,
    pub violations: Vec<AuditViolation>,
}

/// Audits every nonempty induced `H` against every maximal antimatching of
/// `H`.
pub fn exhaustive_audit(g: &Graph, lists: &ListAssignment) -> Result<AuditSummary, AuditError> {
    let n = g.n();
    if n > EXHAUSTIVE_AUDIT_MAX_N {
        return Err(OracleError::TooLarge { n, max: EXHAUSTIVE_AUDIT_MAX_N }.into());
    }
    let mut auditor = Auditor::new(g, lists)?;
    let critical = auditor.is_critical()?;
    let mut checked = 0u64;
    let mut violations = Vec::new();
    for mask in 1u32..(1 << n) {
        let h: Vec<usize> = (0..n).filter(|&v| mask >> v & 1 == 1).collect();
        for m in all_antimatchings(g, &h) {
            let mut covered = vec![false; n];
            for &(a, b) in m.pairs() {
                covered[a] = true;
                covered[b] = true;
            }
            let extendable = h
                .iter()
                .enumerate()
                .any(|(i, &a)| !covered[a] && h[i + 1..].iter().any(|&b| !covered[b] && !g.has_edge(a, b)));
            if extendable {
                continue;
            }
            checked += 1;
            let rec = auditor.audit(&h, &m)?;
            if !rec.holds {
                violations.push(AuditViolation {
                    h: h.clone(),
                    matching: m.pairs().to_vec(),
                    lhs: rec.lhs,
                    rhs: rec.rhs,
                });
            }
        }
    }
    Ok(AuditSummary { critical, checked, violations })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::generators;
    use crate::oracle::brute_force_l_colorable;
    use proptest::prelude::*;

    fn l(lists: Vec<Vec<u32>>) -> ListAssignment {
        ListAssignment::new(lists).unwrap()
    }

    #[test]
    fn single_nonadjacent_pair() {
        let inst = KnmInstance::new(2, Matching::new([(0, 1)]).unwrap(), l(vec![vec![1], vec![1]])).unwrap();
        assert_eq!(color_knm(&inst).unwrap(), Coloring::total(vec![1, 1]));
    }

    #[test]
    fn falls_through_to_distinct_representatives() {
        let lists = l(vec![vec![1, 2], vec![3], vec![1, 3]]);
        let inst = KnmInstance::new(3, Matching::new([(0, 1)]).unwrap(), lists.clone()).unwrap();
        let c = color_knm(&inst).unwrap();
        assert!(c.is_proper_l_coloring(&inst.graph(), &lists));
        assert_eq!(c, Coloring::total(vec![2, 3, 1]));
    }

    #[test]
    fn hypothesis_violation_is_named() {
        let inst = KnmInstance::new(
            4,
            Matching::new([(0, 1), (2, 3)]).unwrap(),
            l(vec![vec![1], vec![1], vec![1, 2], vec![1, 2]]),
        )
        .unwrap();
        assert_eq!(color_knm(&inst), Err(KnmError::MatchedListTooSmall { vertex: 0, size: 1, matching: 2 }));
        let inst = KnmInstance::new(
            4,
            Matching::new([(0, 1)]).unwrap(),
            l(vec![vec![1, 2], vec![1], vec![3, 4, 5], vec![3, 4, 5]]),
        )
        .unwrap();
        assert_eq!(color_knm(&inst), Err(KnmError::PairListsTooSmall { a: 0, b: 1, total: 3, n: 4 }));
        let inst =
            KnmInstance::new(3, Matching::new([(0, 1)]).unwrap(), l(vec![vec![1, 2], vec![3], vec![3]])).unwrap();
        assert!(matches!(color_knm(&inst), Err(KnmError::UnmatchedListTooSmall { vertex: 2, .. })));
    }

    #[test]
    fn audit_examples() {
        let k3 = generators::complete(3);
        let lists = ListAssignment::uniform(3, 2);
        let r = density_audit(&k3, &lists, &[0, 1, 2], &Matching::default()).unwrap();
        assert_eq!((r.lhs, r.rhs, r.holds, r.critical), (0, -3, true, true));
        let r = density_audit(&k3, &lists, &[], &Matching::default()).unwrap();
        assert_eq!((r.lhs, r.rhs), (0, 0));

        let c5 = generators::cycle(5);
        let lists = ListAssignment::uniform(5, 2);
        let h: Vec<usize> = (0..5).collect();
        let m = c5.max_antimatching(&h);
        let r = density_audit(&c5, &lists, &h, &m).unwrap();
        assert_eq!((r.lhs, r.rhs, r.holds, r.critical), (5, 1, true, true));

        let bad = density_audit(&c5, &lists, &h, &Matching::new([(0, 1)]).unwrap());
        assert_eq!(bad, Err(AuditError::NotAntimatching(0, 1)));
    }

    #[test]
    fn antimatching_enumeration_counts() {
        // Complement of the edgeless graph on 4 is K4: 1 + 6 + 3 matchings.
        assert_eq!(all_antimatchings(&Graph::empty(4), &[0, 1, 2, 3]).len(), 10);
        assert_eq!(all_antimatchings(&generators::complete(4), &[0, 1, 2, 3]).len(), 1);
    }

    #[test]
    fn exhaustive_audit_on_odd_cycle() {
        let s = exhaustive_audit(&generators::cycle(5), &ListAssignment::uniform(5, 2)).unwrap();
        assert!(s.critical);
        assert!(s.violations.is_empty());
        // Each nonempty H has at least one maximal antimatching.
        assert!(s.checked >= 31);
        assert!(exhaustive_audit(&Graph::empty(13), &ListAssignment::uniform(13, 1)).is_err());
    }

    fn arb_instance() -> impl Strategy<Value = KnmInstance> {
        (2usize..=12, any::<u64>()).prop_map(|(n, seed)| {
            use rand::{seq::SliceRandom, Rng, SeedableRng};
            let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
            let m = rng.gen_range(0..=n / 2);
            let mut perm: Vec<usize> = (0..n).collect();
            perm.shuffle(&mut rng);
            let pairs: Vec<(usize, usize)> = (0..m).map(|i| (perm[2 * i], perm[2 * i + 1])).collect();
            let universe: Vec<u32> = (0..(n as u32 + 2)).collect();
            let mut sizes = vec![n - m; n];
            for &(a, b) in &pairs {
                let sa = rng.gen_range(m.max(n - n.min(universe.len()))..=n.min(universe.len()));
                let sb = (n - sa).max(m);
                sizes[a] = sa;
                sizes[b] = sb;
            }
            let lists = sizes
                .iter()
                .map(|&k| {
                    let mut u = universe.clone();
                    u.shuffle(&mut rng);
                    u.truncate(k.max(1));
                    u
                })
                .collect();
            KnmInstance::new(n, Matching::new(pairs).unwrap(), ListAssignment::new(lists).unwrap()).unwrap()
        })
    }

    proptest! {
        #[test]
        fn knm_coloring_is_proper(inst in arb_instance()) {
            inst.check_hypotheses().unwrap();
            let c = color_knm(&inst).unwrap();
            let g = inst.graph();
            prop_assert!(c.is_total() && c.is_proper_l_coloring(&g, &inst.lists));
            prop_assert!(brute_force_l_colorable(&g, &inst.lists).unwrap().is_some());
        }
    }
}
