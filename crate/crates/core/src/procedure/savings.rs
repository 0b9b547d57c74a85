// SPDX-License-Identifier: Apache-2.0

use super::sampler::{back_positions, PartialColoring};
use crate::correspondence::{CorrespondenceAssignment, MatchTable};
use crate::fraction::Fraction;
use crate::graph::Graph;
use crate::lists::is_sigma_egal;

/// A strict partial order on vertices: `u ≺ v` iff `key(u) < key(v)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Priority {
    /// `u ≺ v` iff `|L(u)| < |L(v)|`.
    ListSize,
    Keys(Vec<u64>),
}

impl Priority {
    fn keys(&self, ca: &CorrespondenceAssignment) -> Vec<u64> {
        match self {
            Priority::ListSize => (0..ca.lists().len()).map(|v| ca.lists().size(v) as u64).collect(),
            Priority::Keys(k) => k.clone(),
        }
    }

    /// Greedy order: `≺`-largest first, ties by id.
    pub fn descending(&self, ca: &CorrespondenceAssignment) -> Vec<usize> {
        let keys = self.keys(ca);
        let mut order: Vec<usize> = (0..keys.len()).collect();
        order.sort_by_key(|&v| (std::cmp::Reverse(keys[v]), v));
        order
    }
}

/// The four savings variables of one vertex in one trial.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct VertexSavings {
    pub aberrance: u64,
    pub pairs: u64,
    pub trips: u64,
    pub unact: u64,
}

impl VertexSavings {
    /// `Aberrance + Unact + Pairs − Trips`; may be negative when many
    /// neighbors share a matched color.
    pub fn savings(&self) -> i64 {
        self.aberrance as i64 + self.unact as i64 + self.pairs as i64 - self.trips as i64
    }
}

/// Per-vertex savings for one trial, plus the realized drop in `Save`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SavingsSample {
    pub vertices: Vec<VertexSavings>,
    /// `Save_L(v) − Save_{L′}(v)` with `L′` the residual lists.
    pub save_drop: Vec<i64>,
    /// `Save_{L′}(v)` on the residual graph; meaningful for `v ∈ U`.
    pub residual_save: Vec<i64>,
}

/// Everything about `(G, L, M, σ, ≺)` that does not change between trials.
pub struct SavingsContext<'a> {
    g: &'a Graph,
    sizes: Vec<usize>,
    table: MatchTable,
    back: Vec<Vec<usize>>,
    /// `egal[v][k]`: the `k`-th neighbor of `v` is σ-egalitarian.
    egal: Vec<Vec<bool>>,
    /// `prec[v][k]`: the `k`-th neighbor of `v` precedes it.
    prec: Vec<Vec<bool>>,
}

impl<'a> SavingsContext<'a> {
    pub fn new(g: &'a Graph, ca: &CorrespondenceAssignment, sigma: Fraction, priority: &Priority) -> Self {
        let sizes: Vec<usize> = (0..g.n()).map(|v| ca.lists().size(v)).collect();
        let keys = priority.keys(ca);
        assert_eq!(keys.len(), g.n(), "one priority key per vertex");
        let per_neighbor = |f: &dyn Fn(usize, usize) -> bool| -> Vec<Vec<bool>> {
            (0..g.n()).map(|v| g.neighbors(v).iter().map(|&u| f(u, v)).collect()).collect()
        };
        let egal = per_neighbor(&|u, v| is_sigma_egal(sizes[u], sizes[v], sigma));
        let prec = per_neighbor(&|u, v| keys[u] < keys[v]);
        SavingsContext { g, table: ca.match_table(g), back: back_positions(g), sizes, egal, prec }
    }

    /// Number of neighbors `u ≺ v`.
    pub fn preceding(&self, v: usize) -> usize {
        self.prec[v].iter().filter(|&&p| p).count()
    }

    pub fn is_egal(&self, v: usize, k: usize) -> bool {
        self.egal[v][k]
    }

    /// Index in `L(v)` matched to the color of the `k`-th neighbor.
    fn matched_into(&self, pc: &PartialColoring, v: usize, k: usize) -> Option<usize> {
        let u = self.g.neighbors(v)[k];
        self.table.partner(u, self.back[v][k], pc.color_index[u] as usize)
    }

    pub fn vertex(&self, pc: &PartialColoring, v: usize, scratch: &mut Vec<u32>) -> VertexSavings {
        scratch.clear();
        let mut s = VertexSavings::default();
        for (k, &u) in self.g.neighbors(v).iter().enumerate() {
            if !pc.activated[u] && self.prec[v][k] {
                s.unact += 1;
            }
            if pc.uncolored[u] || !self.egal[v][k] {
                continue;
            }
            match self.matched_into(pc, v, k) {
                None => s.aberrance += 1,
                Some(i) => scratch.push(i as u32),
            }
        }
        scratch.sort_unstable();
        for run in scratch.chunk_by(|a, b| a == b) {
            let m = run.len() as u64;
            s.pairs += m * (m - 1) / 2;
            s.trips += m * (m - 1) * (m.saturating_sub(2)) / 6;
        }
        s
    }

    /// `(colored neighbors, distinct colors of L(v) lost to them)`.
    pub fn residual_counts(&self, pc: &PartialColoring, v: usize, scratch: &mut Vec<u32>) -> (usize, usize) {
        scratch.clear();
        let mut colored = 0;
        for (k, &u) in self.g.neighbors(v).iter().enumerate() {
            if pc.uncolored[u] {
                continue;
            }
            colored += 1;
            if let Some(i) = self.matched_into(pc, v, k) {
                scratch.push(i as u32);
            }
        }
        scratch.sort_unstable();
        scratch.dedup();
        (colored, scratch.len())
    }

    /// `Save_{L′}(v) = d_{G[U]}(v) + 1 − |L′(v)|`.
    pub fn residual_save(&self, pc: &PartialColoring, v: usize, scratch: &mut Vec<u32>) -> i64 {
        let (colored, lost) = self.residual_counts(pc, v, scratch);
        let d = self.g.neighbors(v).len() as i64;
        (d - colored as i64) + 1 - (self.sizes[v] as i64 - lost as i64)
    }

    pub fn sample(&self, pc: &PartialColoring) -> SavingsSample {
        let n = self.g.n();
        let mut scratch = Vec::new();
        let mut out = SavingsSample {
            vertices: Vec::with_capacity(n),
            save_drop: Vec::with_capacity(n),
            residual_save: Vec::with_capacity(n),
        };
        for v in 0..n {
            out.vertices.push(self.vertex(pc, v, &mut scratch));
            let (colored, lost) = self.residual_counts(pc, v, &mut scratch);
            out.save_drop.push(colored as i64 - lost as i64);
            let d = self.g.neighbors(v).len() as i64;
            out.residual_save.push((d - colored as i64) + 1 - (self.sizes[v] as i64 - lost as i64));
        }
        out
    }
}
