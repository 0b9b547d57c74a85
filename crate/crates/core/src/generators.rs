// SPDX-License-Identifier: Apache-2.0

//! Deterministic graph families and seeded random graphs.

use crate::graph::Graph;
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn build(n: usize, edges: impl IntoIterator<Item = (usize, usize)>) -> Graph {
    Graph::from_edges(n, edges).expect("generator produced an invalid edge")
}

pub fn complete(n: usize) -> Graph {
    build(n, (0..n).flat_map(|u| (u + 1..n).map(move |v| (u, v))))
}

pub fn cycle(n: usize) -> Graph {
    assert!(n >= 3, "a cycle needs at least 3 vertices");
    build(n, (0..n).map(|i| (i, (i + 1) % n)))
}

pub fn path(n: usize) -> Graph {
    build(n, (1..n).map(|i| (i - 1, i)))
}

/// Star with center 0 and leaves `1..=leaves`.
pub fn star(leaves: usize) -> Graph {
    build(leaves + 1, (1..=leaves).map(|i| (0, i)))
}

pub fn complete_bipartite(a: usize, b: usize) -> Graph {
    build(a + b, (0..a).flat_map(|u| (a..a + b).map(move |v| (u, v))))
}

pub fn petersen() -> Graph {
    let outer = (0..5).map(|i| (i, (i + 1) % 5));
    let spokes = (0..5).map(|i| (i, i + 5));
    let inner = (0..5).map(|i| (5 + i, 5 + (i + 2) % 5));
    build(10, outer.chain(spokes).chain(inner))
}

/// Lexicographic product `g[K_k]`: each vertex becomes a clique of size `k`,
/// and adjacent vertices become complete bipartite between their cliques.
/// Vertex `(v, i)` is numbered `v·k + i`.
pub fn blowup(g: &Graph, k: usize) -> Graph {
    let inside =
        (0..g.n()).flat_map(move |v| (0..k).flat_map(move |i| (i + 1..k).map(move |j| (v * k + i, v * k + j))));
    let across: Vec<(usize, usize)> =
        g.edges().flat_map(|(u, v)| (0..k).flat_map(move |i| (0..k).map(move |j| (u * k + i, v * k + j)))).collect();
    build(g.n() * k, inside.chain(across))
}

/// The blowup of the 5-cycle, `C5[K_k]`.
pub fn c5_blowup(k: usize) -> Graph {
    blowup(&cycle(5), k)
}

pub fn gnp(n: usize, p: f64, seed: u64) -> Graph {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    gnp_with(n, p, &mut rng)
}

pub fn gnp_with(n: usize, p: f64, rng: &mut impl Rng) -> Graph {
    let mut edges = Vec::new();
    for u in 0..n {
        for v in u + 1..n {
            if rng.gen_bool(p) {
                edges.push((u, v));
            }
        }
    }
    build(n, edges)
}

/// Uniform random recursive tree: vertex `i` attaches to a uniform earlier vertex.
pub fn random_tree(n: usize, seed: u64) -> Graph {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    build(n, (1..n).map(|i| (rng.gen_range(0..i), i)))
}

/// Near-regular graph from the configuration model with `d` stubs per vertex;
/// loops and repeated pairs are dropped, so degrees are at most `d`.
pub fn near_regular(n: usize, d: usize, seed: u64) -> Graph {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut stubs: Vec<usize> = (0..n).flat_map(|v| std::iter::repeat(v).take(d)).collect();
    stubs.shuffle(&mut rng);
    let edges = stubs.chunks_exact(2).filter(|p| p[0] != p[1]).map(|p| (p[0], p[1]));
    build(n, edges)
}
