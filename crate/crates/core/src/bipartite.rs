// SPDX-License-Identifier: Apache-2.0

//! Hopcroft–Karp maximum bipartite matching.

use std::collections::VecDeque;

const NONE: usize = usize::MAX;

/// Maximum matching between `0..adj.len()` on the left and `0..right` on the right.
/// Returns the right partner of each left vertex.
pub fn hopcroft_karp(adj: &[Vec<usize>], right: usize) -> Vec<Option<usize>> {
    let left = adj.len();
    let mut match_l = vec![NONE; left];
    let mut match_r = vec![NONE; right];
    let mut dist = vec![0u32; left];

    loop {
        // Layered BFS from free left vertices.
        let mut queue = VecDeque::new();
        let mut found = false;
        for u in 0..left {
            if match_l[u] == NONE {
                dist[u] = 0;
                queue.push_back(u);
            } else {
                dist[u] = u32::MAX;
            }
        }
        while let Some(u) = queue.pop_front() {
            for &r in &adj[u] {
                let w = match_r[r];
                if w == NONE {
                    found = true;
                } else if dist[w] == u32::MAX {
                    dist[w] = dist[u] + 1;
                    queue.push_back(w);
                }
            }
        }
        if !found {
            break;
        }
        for u in 0..left {
            if match_l[u] == NONE {
                augment(u, adj, &mut match_l, &mut match_r, &mut dist);
            }
        }
    }
    match_l.into_iter().map(|r| (r != NONE).then_some(r)).collect()
}

fn augment(u: usize, adj: &[Vec<usize>], match_l: &mut [usize], match_r: &mut [usize], dist: &mut [u32]) -> bool {
    for &r in &adj[u] {
        let w = match_r[r];
        if w == NONE || (dist[w] == dist[u] + 1 && augment(w, adj, match_l, match_r, dist)) {
            match_l[u] = r;
            match_r[r] = u;
            return true;
        }
    }
    dist[u] = u32::MAX;
    false
}
