// SPDX-License-Identifier: Apache-2.0

use super::sampler::{trial_rng, Sampler};
use super::savings::SavingsContext;
use rayon::prelude::*;
use serde::Serialize;

/// Trials per parallel work unit. Sums are integers, so the result does
/// not depend on how chunks are scheduled.
const CHUNK: u64 = 512;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Variable {
    Aberrance,
    Pairs,
    Trips,
    Unact,
    Savings,
    PairsMinusTrips,
}

impl Variable {
    pub const ALL: [Variable; 6] = [
        Variable::Aberrance,
        Variable::Pairs,
        Variable::Trips,
        Variable::Unact,
        Variable::Savings,
        Variable::PairsMinusTrips,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Variable::Aberrance => "aberrance",
            Variable::Pairs => "pairs",
            Variable::Trips => "trips",
            Variable::Unact => "unact",
            Variable::Savings => "savings",
            Variable::PairsMinusTrips => "pairs_minus_trips",
        }
    }
}

/// Sample mean, unbiased sample variance and standard error of the mean.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct Statistic {
    pub mean: f64,
    pub variance: f64,
    pub se: f64,
}

impl Statistic {
    /// From exact integer sums over `n ≥ 1` observations.
    pub fn from_sums(sum: i128, sum_sq: i128, n: u64) -> Self {
        assert!(n >= 1, "at least one observation");
        let nf = n as f64;
        let mean = sum as f64 / nf;
        let variance = if n > 1 {
            // n·Σx² − (Σx)² is exact in i128 for the sizes used here.
            let centered = n as i128 * sum_sq - sum * sum;
            centered as f64 / (nf * (nf - 1.0))
        } else {
            0.0
        };
        Statistic { mean, variance, se: (variance / nf).sqrt() }
    }
}

/// Monte Carlo statistics per vertex and variable.
#[derive(Clone, Debug, PartialEq)]
pub struct SavingsEstimate {
    pub trials: u64,
    stats: Vec<[Statistic; 6]>,
}

impl SavingsEstimate {
    pub fn get(&self, v: usize, var: Variable) -> Statistic {
        self.stats[v][var as usize]
    }

    pub fn n(&self) -> usize {
        self.stats.len()
    }
}

fn values(s: &super::savings::VertexSavings) -> [i128; 6] {
    [
        s.aberrance as i128,
        s.pairs as i128,
        s.trips as i128,
        s.unact as i128,
        s.savings() as i128,
        s.pairs as i128 - s.trips as i128,
    ]
}

fn chunks(trials: u64) -> impl ParallelIterator<Item = std::ops::Range<u64>> {
    (0..trials.div_ceil(CHUNK)).into_par_iter().map(move |c| c * CHUNK..((c + 1) * CHUNK).min(trials))
}

fn add_into<T: Copy + std::ops::AddAssign>(mut a: Vec<T>, b: Vec<T>) -> Vec<T> {
    for (x, y) in a.iter_mut().zip(b) {
        *x += y;
    }
    a
}

/// Runs `trials` independent trials, trial `t` on stream `t` of `seed`.
pub fn mc_estimate(sampler: &Sampler, ctx: &SavingsContext, trials: u64, seed: u64) -> SavingsEstimate {
    assert!(trials >= 1, "at least one trial");
    let n = sampler.graph().n();
    // Per vertex: six sums followed by six sums of squares.
    let sums = chunks(trials)
        .map(|range| {
            let mut acc = vec![0i128; 12 * n];
            let mut scratch = Vec::new();
            for t in range {
                let pc = sampler.sample(&mut trial_rng(seed, t));
                for v in 0..n {
                    let x = values(&ctx.vertex(&pc, v, &mut scratch));
                    for (j, &xj) in x.iter().enumerate() {
                        acc[12 * v + j] += xj;
                        acc[12 * v + 6 + j] += xj * xj;
                    }
                }
            }
            acc
        })
        .reduce(|| vec![0i128; 12 * n], add_into);
    let stats = (0..n)
        .map(|v| std::array::from_fn(|j| Statistic::from_sums(sums[12 * v + j], sums[12 * v + 6 + j], trials)))
        .collect();
    SavingsEstimate { trials, stats }
}

/// Empirical keep frequencies per `(v, color index)` and the per-trial
/// number of kept vertices.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct KeepRates {
    pub trials: u64,
    /// `chosen[v][i]`: trials with `φ(v) = L(v)[i]`.
    pub chosen: Vec<Vec<u64>>,
    /// `kept[v][i]`: those trials in which `v ∉ U`.
    pub kept: Vec<Vec<u64>>,
    pub kept_total: u128,
    pub kept_total_sq: u128,
}

impl KeepRates {
    /// Mean and SE of the per-trial fraction of kept vertices.
    pub fn pooled(&self) -> Statistic {
        let n = self.kept.len().max(1) as f64;
        let s = Statistic::from_sums(self.kept_total as i128, self.kept_total_sq as i128, self.trials);
        Statistic { mean: s.mean / n, variance: s.variance / (n * n), se: s.se / n }
    }

    /// Empirical `P[v ∉ U | φ(v) = L(v)[i]]`, if that color was ever chosen.
    pub fn rate(&self, v: usize, i: usize) -> Option<f64> {
        (self.chosen[v][i] > 0).then(|| self.kept[v][i] as f64 / self.chosen[v][i] as f64)
    }
}

pub fn estimate_keep_rates(sampler: &Sampler, trials: u64, seed: u64) -> KeepRates {
    assert!(trials >= 1, "at least one trial");
    let n = sampler.graph().n();
    let lists = sampler.assignment().lists();
    let offsets: Vec<usize> = (0..=n)
        .scan(0, |acc, v| {
            let here = *acc;
            if v < n {
                *acc += lists.size(v);
            }
            Some(here)
        })
        .collect();
    let width = offsets[n];
    // Layout: chosen counts, kept counts, then Σ kept, Σ kept².
    let sums = chunks(trials)
        .map(|range| {
            let mut acc = vec![0u128; 2 * width + 2];
            for t in range {
                let pc = sampler.sample(&mut trial_rng(seed, t));
                let mut kept_now = 0u128;
                for v in 0..n {
                    let slot = offsets[v] + pc.color_index[v] as usize;
                    acc[slot] += 1;
                    if !pc.uncolored[v] {
                        acc[width + slot] += 1;
                        kept_now += 1;
                    }
                }
                acc[2 * width] += kept_now;
                acc[2 * width + 1] += kept_now * kept_now;
            }
            acc
        })
        .reduce(|| vec![0u128; 2 * width + 2], add_into);
    let split = |base: usize| -> Vec<Vec<u64>> {
        (0..n).map(|v| sums[base + offsets[v]..base + offsets[v + 1]].iter().map(|&x| x as u64).collect()).collect()
    };
    KeepRates {
        trials,
        chosen: split(0),
        kept: split(width),
        kept_total: sums[2 * width],
        kept_total_sq: sums[2 * width + 1],
    }
}

/// How often the count check for the greedy extension fails.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SaveInequalityReport {
    pub trials: u64,
    /// Per vertex: trials with `v ∈ U` and `Save_{L′}(v) > Unact(v)`.
    pub violations: Vec<u64>,
    /// Trials in which at least one vertex failed.
    pub failed_trials: u64,
}

pub fn save_inequality_check(sampler: &Sampler, ctx: &SavingsContext, trials: u64, seed: u64) -> SaveInequalityReport {
    let n = sampler.graph().n();
    let sums = chunks(trials)
        .map(|range| {
            let mut acc = vec![0u64; n + 1];
            let mut scratch = Vec::new();
            for t in range {
                let pc = sampler.sample(&mut trial_rng(seed, t));
                let mut failed = false;
                for v in pc.uncolored_vertices() {
                    let unact = ctx.vertex(&pc, v, &mut scratch).unact as i64;
                    if ctx.residual_save(&pc, v, &mut scratch) > unact {
                        acc[v] += 1;
                        failed = true;
                    }
                }
                acc[n] += failed as u64;
            }
            acc
        })
        .reduce(|| vec![0u64; n + 1], add_into);
    SaveInequalityReport { trials, violations: sums[..n].to_vec(), failed_trials: sums[n] }
}
