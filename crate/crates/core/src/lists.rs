// SPDX-License-Identifier: Apache-2.0

//! List assignments, colorings, per-vertex Gap/Save bookkeeping and the
//! neighbor classes built from list sizes.

use crate::fraction::{int, Fraction};
use crate::graph::{Graph, GraphError};
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ListError {
    #[error("list of vertex {0} is empty")]
    EmptyList(usize),
    #[error("list assignment covers {lists} vertices but the graph has {n}")]
    WrongLength { lists: usize, n: usize },
    #[error("order is not a permutation of the {n} vertices")]
    NotAPermutation { n: usize },
    #[error("color {color} is not in the list of vertex {vertex}")]
    ColorNotInList { vertex: usize, color: u32 },
    #[error("parameter out of range: {0}")]
    Parameter(String),
    #[error(transparent)]
    Graph(#[from] GraphError),
}

/// Per-vertex nonempty color lists, each sorted and duplicate-free.
#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub struct ListAssignment {
    lists: Vec<Vec<u32>>,
}

impl ListAssignment {
    pub fn new(lists: Vec<Vec<u32>>) -> Result<Self, ListError> {
        let mut lists = lists;
        for (v, list) in lists.iter_mut().enumerate() {
            list.sort_unstable();
            list.dedup();
            if list.is_empty() {
                return Err(ListError::EmptyList(v));
            }
        }
        Ok(ListAssignment { lists })
    }

    /// Lists that may be empty; used for residual assignments after partial coloring.
    pub(crate) fn new_allow_empty(mut lists: Vec<Vec<u32>>) -> Self {
        for list in &mut lists {
            list.sort_unstable();
            list.dedup();
        }
        ListAssignment { lists }
    }

    /// Every vertex gets `{0, …, k−1}`.
    pub fn uniform(n: usize, k: usize) -> Self {
        Self::from_sizes(&vec![k; n])
    }

    /// Vertex `v` gets `{0, …, sizes[v]−1}`.
    pub fn from_sizes(sizes: &[usize]) -> Self {
        ListAssignment { lists: sizes.iter().map(|&k| (0..k as u32).collect()).collect() }
    }

    pub fn check_for(&self, g: &Graph) -> Result<(), ListError> {
        if self.lists.len() != g.n() {
            return Err(ListError::WrongLength { lists: self.lists.len(), n: g.n() });
        }
        Ok(())
    }

    pub fn len(&self) -> usize {
        self.lists.len()
    }

    pub fn is_empty(&self) -> bool {
        self.lists.is_empty()
    }

    pub fn list(&self, v: usize) -> &[u32] {
        &self.lists[v]
    }

    pub fn lists(&self) -> &[Vec<u32>] {
        &self.lists
    }

    pub fn size(&self, v: usize) -> usize {
        self.lists[v].len()
    }

    pub fn contains(&self, v: usize, c: u32) -> bool {
        self.lists[v].binary_search(&c).is_ok()
    }

    pub fn index_of(&self, v: usize, c: u32) -> Option<usize> {
        self.lists[v].binary_search(&c).ok()
    }

    /// Lists of `vs` in that order, matching [`Graph::induced`].
    pub fn restrict(&self, vs: &[usize]) -> ListAssignment {
        ListAssignment { lists: vs.iter().map(|&v| self.lists[v].clone()).collect() }
    }

    pub fn without_vertex(&self, v: usize) -> ListAssignment {
        let mut lists = self.lists.clone();
        lists.remove(v);
        ListAssignment { lists }
    }
}

/// Possibly partial coloring; `None` marks an uncolored vertex.
#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub struct Coloring {
    colors: Vec<Option<u32>>,
}

impl Coloring {
    pub fn uncolored(n: usize) -> Self {
        Coloring { colors: vec![None; n] }
    }

    pub fn total(colors: Vec<u32>) -> Self {
        Coloring { colors: colors.into_iter().map(Some).collect() }
    }

    pub fn from_options(colors: Vec<Option<u32>>) -> Self {
        Coloring { colors }
    }

    pub fn get(&self, v: usize) -> Option<u32> {
        self.colors[v]
    }

    pub fn set(&mut self, v: usize, c: Option<u32>) {
        self.colors[v] = c;
    }

    pub fn as_slice(&self) -> &[Option<u32>] {
        &self.colors
    }

    pub fn len(&self) -> usize {
        self.colors.len()
    }

    pub fn is_empty(&self) -> bool {
        self.colors.is_empty()
    }

    pub fn is_total(&self) -> bool {
        self.colors.iter().all(Option::is_some)
    }

    /// Colors of a total coloring; `None` if any vertex is uncolored.
    pub fn to_total(&self) -> Option<Vec<u32>> {
        self.colors.iter().copied().collect()
    }

    /// Proper on its domain and list-respecting.
    pub fn is_proper_l_coloring(&self, g: &Graph, lists: &ListAssignment) -> bool {
        self.colors.len() == g.n()
            && self.colors.iter().enumerate().all(|(v, c)| c.map_or(true, |c| lists.contains(v, c)))
            && g.edges().all(|(u, v)| self.colors[u].is_none() || self.colors[u] != self.colors[v])
    }
}

/// Where a neighbor `u` of `v` falls, from `|L(u)|` against `|L(v)|`, `α` and `β·Gap(v)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum NeighborClass {
    Subserv,
    StrongEgal,
    WeakEgal,
    Lordlier,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct VertexProfile {
    pub degree: usize,
    pub clique: usize,
    /// `d(v) + 1 − ω(v)`.
    pub gap: i64,
    /// `d(v) + 1 − |L(v)|`.
    pub save: i64,
    pub subserv: Vec<usize>,
    pub strong_egal: Vec<usize>,
    pub weak_egal: Vec<usize>,
    pub lordlier: Vec<usize>,
    /// Neighbors with `|L(u)| ≥ (1 − σ)|L(v)|`.
    pub egal_sigma: Vec<usize>,
}

impl VertexProfile {
    pub fn egal(&self) -> Vec<usize> {
        let mut e: Vec<usize> = self.strong_egal.iter().chain(&self.weak_egal).copied().collect();
        e.sort_unstable();
        e
    }

    pub fn class_of(&self, u: usize) -> Option<NeighborClass> {
        [
            (&self.subserv, NeighborClass::Subserv),
            (&self.strong_egal, NeighborClass::StrongEgal),
            (&self.weak_egal, NeighborClass::WeakEgal),
            (&self.lordlier, NeighborClass::Lordlier),
        ]
        .into_iter()
        .find_map(|(set, class)| set.binary_search(&u).is_ok().then_some(class))
    }
}

/// Classifies a neighbor with list size `lu` relative to a vertex with list size `lv` and gap `gap`.
pub fn classify(lu: usize, lv: usize, gap: i64, alpha: Fraction, beta: Fraction) -> NeighborClass {
    let lu_f = int(lu);
    if lu < lv {
        NeighborClass::Subserv
    } else if lu_f >= (Fraction::from_integer(1) + alpha) * int(lv) {
        NeighborClass::Lordlier
    } else if lu_f < int(lv) + beta * Fraction::from_integer(gap) {
        NeighborClass::StrongEgal
    } else {
        NeighborClass::WeakEgal
    }
}

pub fn is_sigma_egal(lu: usize, lv: usize, sigma: Fraction) -> bool {
    int(lu) >= (Fraction::from_integer(1) - sigma) * int(lv)
}

pub fn profile(
    g: &Graph,
    lists: &ListAssignment,
    v: usize,
    alpha: Fraction,
    beta: Fraction,
    sigma: Fraction,
) -> Result<VertexProfile, ListError> {
    let zero = Fraction::from_integer(0);
    if !(zero <= sigma && sigma < Fraction::from_integer(1)) {
        return Err(ListError::Parameter(format!("sigma must lie in [0, 1), got {sigma}")));
    }
    if alpha <= zero || beta <= zero {
        return Err(ListError::Parameter("alpha and beta must be positive".into()));
    }
    lists.check_for(g)?;
    let degree = g.degree(v)?;
    let clique = g.local_clique_number(v)?;
    let lv = lists.size(v);
    let gap = degree as i64 + 1 - clique as i64;
    let save = degree as i64 + 1 - lv as i64;
    let mut p = VertexProfile {
        degree,
        clique,
        gap,
        save,
        subserv: Vec::new(),
        strong_egal: Vec::new(),
        weak_egal: Vec::new(),
        lordlier: Vec::new(),
        egal_sigma: Vec::new(),
    };
    for &u in g.neighbors(v) {
        let lu = lists.size(u);
        match classify(lu, lv, gap, alpha, beta) {
            NeighborClass::Subserv => p.subserv.push(u),
            NeighborClass::StrongEgal => p.strong_egal.push(u),
            NeighborClass::WeakEgal => p.weak_egal.push(u),
            NeighborClass::Lordlier => p.lordlier.push(u),
        }
        if is_sigma_egal(lu, lv, sigma) {
            p.egal_sigma.push(u);
        }
    }
    Ok(p)
}

fn ceil_half(x: usize) -> usize {
    x.div_ceil(2)
}

/// `⌈(d(v) + 1 + ω(v)) / 2⌉` for every vertex.
pub fn local_reed_list_sizes(g: &Graph) -> Vec<usize> {
    (0..g.n()).map(|v| ceil_half(g.neighbors(v).len() + 1 + g.local_clique_number(v).expect("in range"))).collect()
}

/// `⌈(1 − ε)(d(v) + 1) + ε·ω(v)⌉` for every vertex.
pub fn epsilon_list_sizes(g: &Graph, eps: Fraction) -> Vec<usize> {
    (0..g.n())
        .map(|v| {
            let d = int(g.neighbors(v).len());
            let w = int(g.local_clique_number(v).expect("in range"));
            let x = (Fraction::from_integer(1) - eps) * (d + 1) + eps * w;
            x.ceil().to_integer() as usize
        })
        .collect()
}

/// `⌈(Δ + 1 + ω) / 2⌉`.
pub fn reed_bound(max_degree: usize, clique: usize) -> usize {
    ceil_half(max_degree + 1 + clique)
}

/// `(1 − ε)(Δ + 1) + ε·ω`, exact.
pub fn epsilon_reed_bound(max_degree: usize, clique: usize, eps: Fraction) -> Fraction {
    (Fraction::from_integer(1) - eps) * int(max_degree + 1) + eps * int(clique)
}

/// `(ω, Δ + 1)`: the trivial lower and upper bounds on χ.
pub fn trivial_bounds(g: &Graph) -> (usize, usize) {
    (g.max_clique_size(), g.max_degree() + 1)
}

/// Vertices by list size, largest first, ties by id.
pub fn list_size_descending(lists: &ListAssignment) -> Vec<usize> {
    let mut order: Vec<usize> = (0..lists.len()).collect();
    order.sort_by_key(|&v| (std::cmp::Reverse(lists.size(v)), v));
    order
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum GreedyOutcome {
    Colored(Coloring),
    /// `vertex` had every list color used by an earlier neighbor.
    Blocked {
        vertex: usize,
        partial: Coloring,
    },
}

/// Colors vertices in `order`, each with its smallest list color not used by a colored neighbor.
pub fn greedy_color(g: &Graph, lists: &ListAssignment, order: &[usize]) -> Result<GreedyOutcome, ListError> {
    lists.check_for(g)?;
    let n = g.n();
    let mut seen = vec![false; n];
    if order.len() != n || !order.iter().all(|&v| v < n && !std::mem::replace(&mut seen[v], true)) {
        return Err(ListError::NotAPermutation { n });
    }
    let mut coloring = Coloring::uncolored(n);
    for &v in order {
        let used: Vec<u32> = g.neighbors(v).iter().filter_map(|&u| coloring.get(u)).collect();
        match lists.list(v).iter().find(|c| !used.contains(c)) {
            Some(&c) => coloring.set(v, Some(c)),
            None => return Ok(GreedyOutcome::Blocked { vertex: v, partial: coloring }),
        }
    }
    Ok(GreedyOutcome::Colored(coloring))
}
