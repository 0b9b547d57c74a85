// SPDX-License-Identifier: Apache-2.0

use super::{ProcedureError, ProcedureParams};
use crate::correspondence::{CorrespondenceAssignment, MatchTable};
use crate::graph::Graph;
use crate::lists::Coloring;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// The random stream of one trial: the master seed selects the key and the
/// trial index the stream, so trials can run in any order or in parallel.
pub fn trial_rng(seed: u64, trial: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(trial);
    rng
}

/// Exact `P[v ∉ U | φ(v) = c]` for the procedure without equalizing flips:
/// `ρ·∏ (1 − ρ/|L(u)|)` over neighbors `u` with `|L(u)| ≥ |L(v)|` whose
/// matching pairs `c` with some color of `u`.
pub fn keep_probability(
    g: &Graph,
    ca: &CorrespondenceAssignment,
    rho: f64,
    v: usize,
    c: u32,
) -> Result<f64, ProcedureError> {
    let lists = ca.lists();
    if !lists.contains(v, c) {
        return Err(ProcedureError::ColorNotInList { vertex: v, color: c });
    }
    let lv = lists.size(v);
    Ok(g.neighbors(v)
        .iter()
        .filter(|&&u| lists.size(u) >= lv && ca.partner(v, c, u).is_some())
        .fold(rho, |acc, &u| acc * (1.0 - rho / lists.size(u) as f64)))
}

/// One sample of the product space: activation and color per vertex, and
/// the equalizing flip for the chosen color.
///
/// Flips for colors other than `φ(v)` never influence the outcome, so only
/// the relevant one is drawn.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TrialOutcome {
    pub color_index: Vec<u32>,
    pub activated: Vec<bool>,
    pub heads: Vec<bool>,
}

/// `(φ, U, A)` from one trial. `φ` is total; colors on `U` are the
/// discarded guesses.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PartialColoring {
    pub color: Vec<u32>,
    pub color_index: Vec<u32>,
    pub uncolored: Vec<bool>,
    pub activated: Vec<bool>,
}

impl PartialColoring {
    pub fn uncolored_vertices(&self) -> Vec<usize> {
        (0..self.uncolored.len()).filter(|&v| self.uncolored[v]).collect()
    }

    /// `φ` on every vertex, including the uncolored ones.
    pub fn guesses(&self) -> Coloring {
        Coloring::total(self.color.clone())
    }

    /// `φ` restricted to `V ∖ U`.
    pub fn coloring(&self) -> Coloring {
        Coloring::from_options(self.color.iter().zip(&self.uncolored).map(|(&c, &u)| (!u).then_some(c)).collect())
    }
}

/// Precomputed sampler for one `(G, L, M)` and activation probability.
pub struct Sampler<'a> {
    g: &'a Graph,
    ca: &'a CorrespondenceAssignment,
    pub(crate) table: MatchTable,
    sizes: Vec<usize>,
    rho: f64,
    constant: f64,
    /// Heads probability per `(v, color index)`; absent for the naive procedure.
    heads: Option<Vec<Vec<f64>>>,
}

impl<'a> Sampler<'a> {
    /// The procedure without equalizing flips.
    pub fn naive(g: &'a Graph, ca: &'a CorrespondenceAssignment, rho: f64) -> Result<Self, ProcedureError> {
        if !(0.0..=1.0).contains(&rho) {
            return Err(ProcedureError::Parameter(format!("rho must lie in [0, 1], got {rho}")));
        }
        ca.lists().check_for(g)?;
        let table = ca.match_table(g);
        let sizes = (0..g.n()).map(|v| ca.lists().size(v)).collect();
        Ok(Sampler { g, ca, table, sizes, rho, constant: 0.0, heads: None })
    }

    /// The procedure with equalizing flips. Every `(v, c)` must have
    /// keep probability at least `K`; the first that does not is reported.
    pub fn equalized(
        g: &'a Graph,
        ca: &'a CorrespondenceAssignment,
        params: &ProcedureParams,
    ) -> Result<Self, ProcedureError> {
        params.validate()?;
        let mut s = Self::naive(g, ca, params.rho)?;
        let k = params.keep_constant();
        s.constant = k;
        let mut heads = Vec::with_capacity(g.n());
        for v in 0..g.n() {
            let mut row = Vec::with_capacity(s.sizes[v]);
            for i in 0..s.sizes[v] {
                let keep = s.keep_index(v, i);
                if keep < k {
                    let color = ca.lists().list(v)[i];
                    return Err(ProcedureError::KeepBelowConstant { vertex: v, color, keep, constant: k });
                }
                row.push(if keep > 0.0 { 1.0 - k / keep } else { 0.0 });
            }
            heads.push(row);
        }
        s.heads = Some(heads);
        Ok(s)
    }

    pub fn graph(&self) -> &Graph {
        self.g
    }

    pub fn assignment(&self) -> &CorrespondenceAssignment {
        self.ca
    }

    /// `K` for equalized samplers, 0 for naive ones.
    pub fn constant(&self) -> f64 {
        self.constant
    }

    pub fn is_equalized(&self) -> bool {
        self.heads.is_some()
    }

    /// Keep probability of color index `i` at `v`.
    pub fn keep_index(&self, v: usize, i: usize) -> f64 {
        let lv = self.sizes[v];
        self.g.neighbors(v).iter().enumerate().fold(self.rho, |acc, (k, &u)| {
            if self.sizes[u] >= lv && self.table.partner(v, k, i).is_some() {
                acc * (1.0 - self.rho / self.sizes[u] as f64)
            } else {
                acc
            }
        })
    }

    /// Draws activation, color and the flip for the chosen color, per vertex
    /// in id order. Naive samplers draw the flip too, so both kinds consume
    /// the stream identically and agree on `φ` and `A`.
    pub fn draw(&self, rng: &mut impl Rng) -> TrialOutcome {
        let n = self.g.n();
        let mut out = TrialOutcome {
            color_index: Vec::with_capacity(n),
            activated: Vec::with_capacity(n),
            heads: Vec::with_capacity(n),
        };
        for v in 0..n {
            let active = rng.gen_bool(self.rho);
            let i = rng.gen_range(0..self.sizes[v]);
            let x: f64 = rng.gen();
            let heads = self.heads.as_ref().is_some_and(|h| x < h[v][i]);
            out.activated.push(active);
            out.color_index.push(i as u32);
            out.heads.push(heads);
        }
        out
    }

    /// `U = (V ∖ A) ∪ U′ ∪ U″`; panics if the result is not proper off `U`.
    pub fn resolve(&self, t: &TrialOutcome) -> PartialColoring {
        let n = self.g.n();
        let uncolored: Vec<bool> = (0..n)
            .map(|v| {
                if !t.activated[v] || t.heads[v] {
                    return true;
                }
                let i = t.color_index[v] as usize;
                self.g.neighbors(v).iter().enumerate().any(|(k, &u)| {
                    t.activated[u]
                        && self.sizes[u] >= self.sizes[v]
                        && self.table.partner(v, k, i) == Some(t.color_index[u] as usize)
                })
            })
            .collect();
        let lists = self.ca.lists();
        let color = (0..n).map(|v| lists.list(v)[t.color_index[v] as usize]).collect();
        let pc =
            PartialColoring { color, color_index: t.color_index.clone(), uncolored, activated: t.activated.clone() };
        self.assert_proper(&pc);
        pc
    }

    fn assert_proper(&self, pc: &PartialColoring) {
        for v in 0..self.g.n() {
            if pc.uncolored[v] {
                continue;
            }
            for (k, &u) in self.g.neighbors(v).iter().enumerate() {
                if !pc.uncolored[u] {
                    let clash =
                        self.table.partner(v, k, pc.color_index[v] as usize) == Some(pc.color_index[u] as usize);
                    assert!(!clash, "procedure left adjacent colored vertices {v} and {u} in conflict");
                }
            }
        }
    }

    pub fn sample(&self, rng: &mut impl Rng) -> PartialColoring {
        self.resolve(&self.draw(rng))
    }
}

/// `back[v][k]` is the position of `v` in the neighbor list of its `k`-th neighbor.
pub(crate) fn back_positions(g: &Graph) -> Vec<Vec<usize>> {
    (0..g.n())
        .map(|v| {
            g.neighbors(v).iter().map(|&u| g.neighbors(u).binary_search(&v).expect("symmetric adjacency")).collect()
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::correspondence::identity_correspondence;
    use crate::fraction::Fraction;
    use crate::generators;
    use crate::lists::ListAssignment;

    #[test]
    fn keep_probability_examples() {
        let g = Graph::empty(1);
        let ca = identity_correspondence(&g, &ListAssignment::uniform(1, 3)).unwrap();
        assert_eq!(keep_probability(&g, &ca, 0.4, 0, 2).unwrap(), 0.4);
        assert!(keep_probability(&g, &ca, 0.4, 0, 7).is_err());

        let g = generators::path(2);
        let ca = identity_correspondence(&g, &ListAssignment::uniform(2, 2)).unwrap();
        assert_eq!(keep_probability(&g, &ca, 1.0, 0, 1).unwrap(), 0.5);

        let lists = ListAssignment::new(vec![vec![0, 1], vec![5, 6]]).unwrap();
        let ca = identity_correspondence(&g, &lists).unwrap();
        assert_eq!(keep_probability(&g, &ca, 0.7, 0, 0).unwrap(), 0.7);
    }

    #[test]
    fn extreme_activation() {
        let g = generators::petersen();
        let lists = ListAssignment::uniform(10, 3);
        let ca = identity_correspondence(&g, &lists).unwrap();
        let s = Sampler::naive(&g, &ca, 0.0).unwrap();
        let pc = s.sample(&mut trial_rng(1, 0));
        assert!(pc.uncolored.iter().all(|&u| u) && pc.activated.iter().all(|&a| !a));

        let empty =
            crate::correspondence::CorrespondenceAssignment::new(&g, lists.clone(), g.edges().map(|e| (e, vec![])))
                .unwrap();
        let s = Sampler::naive(&g, &empty, 1.0).unwrap();
        let pc = s.sample(&mut trial_rng(1, 0));
        assert!(pc.uncolored.iter().all(|&u| !u));
    }

    #[test]
    fn equalized_with_zero_activation_uncolors_everything() {
        let g = generators::cycle(5);
        let ca = identity_correspondence(&g, &ListAssignment::uniform(5, 3)).unwrap();
        let params = ProcedureParams { rho: 0.0, ..Default::default() };
        let s = Sampler::equalized(&g, &ca, &params).unwrap();
        for t in 0..20 {
            assert!(s.sample(&mut trial_rng(3, t)).uncolored.iter().all(|&u| u));
        }
    }

    #[test]
    fn precondition_names_offending_pair() {
        // Two-color lists on a triangle: keep = ρ(1 − ρ/2)² < K at ρ = 1.
        let g = generators::complete(3);
        let ca = identity_correspondence(&g, &ListAssignment::uniform(3, 2)).unwrap();
        let params = ProcedureParams { rho: 1.0, eps: Fraction::from_integer(0), ..Default::default() };
        match Sampler::equalized(&g, &ca, &params) {
            Err(ProcedureError::KeepBelowConstant { vertex: 0, color: 0, keep, .. }) => assert_eq!(keep, 0.25),
            Err(e) => panic!("unexpected error {e}"),
            Ok(_) => panic!("precondition should fail"),
        }
    }

    #[test]
    fn streams_are_reproducible_and_shared() {
        let g = generators::gnp(15, 0.3, 2);
        let ca = identity_correspondence(&g, &ListAssignment::uniform(15, 20)).unwrap();
        let params = ProcedureParams { rho: 0.5, ..Default::default() };
        let eq = Sampler::equalized(&g, &ca, &params).unwrap();
        let nv = Sampler::naive(&g, &ca, 0.5).unwrap();
        let a = eq.draw(&mut trial_rng(9, 4));
        assert_eq!(a, eq.draw(&mut trial_rng(9, 4)));
        assert_ne!(a, eq.draw(&mut trial_rng(9, 5)));
        let b = nv.draw(&mut trial_rng(9, 4));
        assert_eq!((a.color_index, a.activated), (b.color_index, b.activated));
    }

    #[test]
    fn naive_single_edge_uncolor_rate() {
        // ρ = 1, equal 4-lists: both ends uncolored iff they pick the same color.
        let g = generators::path(2);
        let ca = identity_correspondence(&g, &ListAssignment::uniform(2, 4)).unwrap();
        let s = Sampler::naive(&g, &ca, 1.0).unwrap();
        let trials = 100_000;
        let hits = (0..trials).filter(|&t| s.sample(&mut trial_rng(5, t)).uncolored[0]).count();
        let p = hits as f64 / trials as f64;
        let se = (0.25 * 0.75 / trials as f64).sqrt();
        assert!((p - 0.25).abs() < 3.0 * se, "p = {p}");
    }
}
