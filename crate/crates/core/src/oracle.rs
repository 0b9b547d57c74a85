// SPDX-License-Identifier: Apache-2.0

//! Exact colorability oracles: backtracking with forward checking over a
//! generic binary-conflict table, L-criticality, and f-choosability.

use crate::graph::Graph;
use crate::lists::{Coloring, ListAssignment, ListError};
use thiserror::Error;

pub const DEFAULT_BUDGET: u64 = 1_000_000_000;
pub const CHOOSABILITY_MAX_N: usize = 8;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum OracleError {
    #[error("search budget of {budget} nodes exceeded")]
    BudgetExceeded { budget: u64 },
    #[error("choosability search is capped at {max} vertices, got {n}")]
    TooLarge { n: usize, max: usize },
    #[error(transparent)]
    Lists(#[from] ListError),
}

/// Constraint problem: variable `v` takes a value in `0..domain[v]`, and
/// listed `(v, i) ~ (u, j)` pairs may not hold simultaneously.
#[derive(Clone, Debug)]
pub struct ConflictProblem {
    domain: Vec<usize>,
    conflicts: Vec<Vec<Vec<(usize, usize)>>>,
}

impl ConflictProblem {
    pub fn new(domain: Vec<usize>) -> Self {
        let conflicts = domain.iter().map(|&d| vec![Vec::new(); d]).collect();
        ConflictProblem { domain, conflicts }
    }

    pub fn forbid(&mut self, v: usize, i: usize, u: usize, j: usize) {
        self.conflicts[v][i].push((u, j));
        self.conflicts[u][j].push((v, i));
    }

    /// List coloring: neighbors may not share a color.
    pub fn for_lists(g: &Graph, lists: &ListAssignment) -> Self {
        let mut p = Self::new((0..g.n()).map(|v| lists.size(v)).collect());
        for (u, v) in g.edges() {
            for (i, &c) in lists.list(u).iter().enumerate() {
                if let Some(j) = lists.index_of(v, c) {
                    p.forbid(u, i, v, j);
                }
            }
        }
        p
    }

    /// Returns a satisfying value index per variable, `None` if unsatisfiable.
    pub fn solve(&self, budget: u64) -> Result<Option<Vec<usize>>, OracleError> {
        let n = self.domain.len();
        let mut s = Solver {
            p: self,
            assigned: vec![None; n],
            blocked: self.domain.iter().map(|&d| vec![0u32; d]).collect(),
            avail: self.domain.clone(),
            nodes: 0,
            budget,
        };
        if s.avail.iter().any(|&a| a == 0) {
            return Ok(None);
        }
        if s.search()? {
            Ok(Some(s.assigned.into_iter().map(|a| a.expect("complete")).collect()))
        } else {
            Ok(None)
        }
    }
}

struct Solver<'a> {
    p: &'a ConflictProblem,
    assigned: Vec<Option<usize>>,
    blocked: Vec<Vec<u32>>,
    avail: Vec<usize>,
    nodes: u64,
    budget: u64,
}

impl Solver<'_> {
    fn search(&mut self) -> Result<bool, OracleError> {
        let next = (0..self.assigned.len()).filter(|&v| self.assigned[v].is_none()).min_by_key(|&v| (self.avail[v], v));
        let Some(v) = next else { return Ok(true) };
        for i in 0..self.p.domain[v] {
            if self.blocked[v][i] > 0 {
                continue;
            }
            self.nodes += 1;
            if self.nodes > self.budget {
                return Err(OracleError::BudgetExceeded { budget: self.budget });
            }
            self.assigned[v] = Some(i);
            let mut wiped = false;
            for &(u, j) in &self.p.conflicts[v][i] {
                if self.assigned[u].is_none() {
                    self.blocked[u][j] += 1;
                    if self.blocked[u][j] == 1 {
                        self.avail[u] -= 1;
                        wiped |= self.avail[u] == 0;
                    }
                }
            }
            if !wiped && self.search()? {
                return Ok(true);
            }
            for &(u, j) in &self.p.conflicts[v][i] {
                if self.assigned[u].is_none() {
                    self.blocked[u][j] -= 1;
                    if self.blocked[u][j] == 0 {
                        self.avail[u] += 1;
                    }
                }
            }
            self.assigned[v] = None;
        }
        Ok(false)
    }
}

/// Decides L-colorability, returning a witness when one exists.
pub fn brute_force_l_colorable(g: &Graph, lists: &ListAssignment) -> Result<Option<Coloring>, OracleError> {
    brute_force_l_colorable_with_budget(g, lists, DEFAULT_BUDGET)
}

pub fn brute_force_l_colorable_with_budget(
    g: &Graph,
    lists: &ListAssignment,
    budget: u64,
) -> Result<Option<Coloring>, OracleError> {
    lists.check_for(g)?;
    let solution = ConflictProblem::for_lists(g, lists).solve(budget)?;
    Ok(solution.map(|idx| Coloring::total(idx.iter().enumerate().map(|(v, &i)| lists.list(v)[i]).collect())))
}

/// Not L-colorable, while every vertex-deleted subgraph is.
pub fn is_l_critical(g: &Graph, lists: &ListAssignment) -> Result<bool, OracleError> {
    if brute_force_l_colorable(g, lists)?.is_some() {
        return Ok(false);
    }
    for v in 0..g.n() {
        if brute_force_l_colorable(&g.without_vertex(v), &lists.without_vertex(v))?.is_none() {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Whether `g` is L-colorable for every `L` with `|L(v)| = f(v)`.
///
/// Works over induced subgraphs, smallest first. A vertex with `f(v)` above
/// its degree can always be colored last, so it is dropped. Otherwise the
/// subgraph is choosable iff every vertex-deleted subgraph is and no
/// assignment is bad. Once all vertex-deleted subgraphs are choosable, a bad
/// assignment must give each color of `L(x)` to some neighbor of `x` (else
/// `x` keeps that color free), which prunes the search. Assignments are
/// enumerated in canonical form: fresh colors are taken only in label order,
/// so each assignment is visited once up to renaming colors.
pub fn f_choosable(g: &Graph, f: &[usize]) -> Result<bool, OracleError> {
    f_choosable_with_budget(g, f, DEFAULT_BUDGET)
}

pub fn f_choosable_with_budget(g: &Graph, f: &[usize], budget: u64) -> Result<bool, OracleError> {
    if g.n() > CHOOSABILITY_MAX_N {
        return Err(OracleError::TooLarge { n: g.n(), max: CHOOSABILITY_MAX_N });
    }
    if f.len() != g.n() {
        return Err(ListError::WrongLength { lists: f.len(), n: g.n() }.into());
    }
    let mut memo = vec![None; 1 << g.n()];
    let mut nodes = 0;
    choosable_on(g, f, (1u32 << g.n()) - 1, &mut memo, &mut nodes, budget)
}

fn choosable_on(
    g: &Graph,
    f: &[usize],
    mask: u32,
    memo: &mut Vec<Option<bool>>,
    nodes: &mut u64,
    budget: u64,
) -> Result<bool, OracleError> {
    if let Some(known) = memo[mask as usize] {
        return Ok(known);
    }
    let vs: Vec<usize> = (0..g.n()).filter(|&v| mask >> v & 1 == 1).collect();
    let sub = g.induced(&vs);
    let answer = if vs.iter().any(|&v| f[v] == 0) {
        false
    } else if let Some(i) = (0..sub.n()).find(|&i| f[vs[i]] > sub.neighbors(i).len()) {
        choosable_on(g, f, mask & !(1 << vs[i]), memo, nodes, budget)?
    } else {
        let mut all_minors = true;
        for &v in &vs {
            if !choosable_on(g, f, mask & !(1 << v), memo, nodes, budget)? {
                all_minors = false;
                break;
            }
        }
        all_minors && {
            let fs: Vec<usize> = vs.iter().map(|&v| f[v]).collect();
            let mut search = ChoiceSearch::new(&sub, &fs, *nodes, budget);
            let bad = search.find_bad(0, 0)?;
            *nodes = search.nodes;
            !bad
        }
    };
    memo[mask as usize] = Some(answer);
    Ok(answer)
}

struct ChoiceSearch<'a> {
    g: &'a Graph,
    f: &'a [usize],
    order: Vec<usize>,
    /// Last position among each vertex's neighbors.
    last_neighbor: Vec<usize>,
    lists: Vec<Vec<u32>>,
    nodes: u64,
    budget: u64,
}

impl<'a> ChoiceSearch<'a> {
    fn new(g: &'a Graph, f: &'a [usize], nodes: u64, budget: u64) -> Self {
        // Maximum-cardinality order, so neighborhoods close early and the
        // neighbor-coverage check bites high in the tree.
        let n = g.n();
        let mut placed = vec![false; n];
        let mut weight = vec![0usize; n];
        let mut order = Vec::with_capacity(n);
        for _ in 0..n {
            let v = (0..n)
                .filter(|&v| !placed[v])
                .max_by_key(|&v| (weight[v], g.neighbors(v).len(), std::cmp::Reverse(v)))
                .expect("unplaced vertex");
            placed[v] = true;
            order.push(v);
            for &u in g.neighbors(v) {
                weight[u] += 1;
            }
        }
        let mut rank = vec![0; n];
        for (i, &v) in order.iter().enumerate() {
            rank[v] = i;
        }
        let last_neighbor =
            (0..n).map(|v| g.neighbors(v).iter().map(|&u| rank[u]).max().unwrap_or(0).max(rank[v])).collect();
        ChoiceSearch { g, f, order, last_neighbor, lists: vec![Vec::new(); n], nodes, budget }
    }

    /// Every vertex whose neighborhood is fully placed by `pos` has each of
    /// its colors in some neighbor's list.
    fn covered_through(&self, pos: usize) -> bool {
        self.order[..=pos].iter().all(|&x| {
            self.last_neighbor[x] > pos
                || self.lists[x]
                    .iter()
                    .all(|c| self.g.neighbors(x).iter().any(|&y| self.lists[y].binary_search(c).is_ok()))
        })
    }

    /// True once some completion of the current partial assignment is not colorable.
    fn find_bad(&mut self, pos: usize, used: u32) -> Result<bool, OracleError> {
        if pos == self.order.len() {
            let lists = ListAssignment::new(self.lists.clone())?;
            let remaining = self.budget.saturating_sub(self.nodes);
            let colorable = brute_force_l_colorable_with_budget(self.g, &lists, remaining)?;
            self.nodes += 1;
            return Ok(colorable.is_none());
        }
        let v = self.order[pos];
        let k = self.f[v];
        for fresh in 0..=k {
            let reused = k - fresh;
            if reused > used as usize {
                continue;
            }
            // A fresh color needs a later neighbor to hold it.
            if fresh > 0 && self.last_neighbor[v] == pos {
                continue;
            }
            let fresh_colors: Vec<u32> = (used..used + fresh as u32).collect();
            let mut subset: Vec<u32> = (0..reused as u32).collect();
            loop {
                self.nodes += 1;
                if self.nodes > self.budget {
                    return Err(OracleError::BudgetExceeded { budget: self.budget });
                }
                self.lists[v] = subset.iter().chain(&fresh_colors).copied().collect();
                if self.covered_through(pos) && self.find_bad(pos + 1, used + fresh as u32)? {
                    return Ok(true);
                }
                if !next_combination(&mut subset, used) {
                    break;
                }
            }
        }
        self.lists[v].clear();
        Ok(false)
    }
}

/// Advances a sorted k-subset of `0..n` to the next one in lexicographic order.
fn next_combination(subset: &mut [u32], n: u32) -> bool {
    let k = subset.len();
    for i in (0..k).rev() {
        if subset[i] < n - (k - i) as u32 {
            subset[i] += 1;
            for j in i + 1..k {
                subset[j] = subset[j - 1] + 1;
            }
            return true;
        }
    }
    false
}
