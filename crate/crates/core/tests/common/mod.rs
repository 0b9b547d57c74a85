// SPDX-License-Identifier: Apache-2.0

//! Seeded instance corpora shared by the integration tests.

#![allow(dead_code)]

use local_reed::generators;
use local_reed::graph::Matching;
use local_reed::knm::KnmInstance;
use local_reed::{Graph, ListAssignment};
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Lists of the given sizes drawn as random subsets of `0..universe`.
pub fn random_lists(sizes: &[usize], universe: u32, rng: &mut impl Rng) -> ListAssignment {
    let colors: Vec<u32> = (0..universe).collect();
    let lists = sizes.iter().map(|&k| colors.choose_multiple(rng, k).copied().collect()).collect();
    ListAssignment::new(lists).expect("sizes are positive and at most the universe")
}

/// Random lists with `|L(v)|` drawn uniformly from `lo(d(v))..=hi(d(v))`,
/// from a universe slightly wider than the largest list.
pub fn lists_by_degree(
    g: &Graph,
    rng: &mut impl Rng,
    lo: impl Fn(usize) -> usize,
    hi: impl Fn(usize) -> usize,
) -> ListAssignment {
    let sizes: Vec<usize> = (0..g.n())
        .map(|v| {
            let d = g.neighbors(v).len();
            let (a, b) = (lo(d).max(1), hi(d).max(1));
            rng.gen_range(a..=b.max(a))
        })
        .collect();
    let universe = sizes.iter().max().copied().unwrap_or(1) as u32 + 3;
    random_lists(&sizes, universe, rng)
}

/// `⌈num/den · d⌉`.
pub fn ceil_frac(d: usize, num: usize, den: usize) -> usize {
    (d * num).div_ceil(den)
}

pub fn random_gnp(rng: &mut impl Rng, n: std::ops::RangeInclusive<usize>, p: std::ops::Range<f64>) -> Graph {
    let n = rng.gen_range(n);
    let p = rng.gen_range(p);
    generators::gnp_with(n, p, rng)
}

/// A `K_n − M` instance meeting the size conditions, with `n ≤ max_n`.
pub fn random_knm(rng: &mut impl Rng, max_n: usize) -> KnmInstance {
    let n = rng.gen_range(2..=max_n);
    let m = rng.gen_range(0..=n / 2);
    let mut perm: Vec<usize> = (0..n).collect();
    perm.shuffle(rng);
    let pairs: Vec<(usize, usize)> = (0..m).map(|i| (perm[2 * i], perm[2 * i + 1])).collect();
    let universe = n as u32 + 2;
    let mut sizes = vec![n - m; n];
    for &(a, b) in &pairs {
        let sa = rng.gen_range(m..=n);
        sizes[a] = sa;
        sizes[b] = (n - sa).max(m);
    }
    let sizes: Vec<usize> = sizes.into_iter().map(|k| k.max(1)).collect();
    let lists = random_lists(&sizes, universe, rng);
    KnmInstance::new(n, Matching::new(pairs).expect("disjoint pairs"), lists).expect("valid instance")
}
