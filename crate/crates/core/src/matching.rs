//! Hopcroft–Karp maximum matching on a bipartite graph given by adjacency
//! lists from the left side.

use std::collections::VecDeque;

const NIL: usize = usize::MAX;

/// Maximum matching between `left` vertices (indexed by `adj`) and `right`
/// vertices. Returns, for each left vertex, its matched right vertex.
pub fn hopcroft_karp(adj: &[Vec<usize>], right: usize) -> Vec<Option<usize>> {
    let left = adj.len();
    let mut match_l = vec![NIL; left];
    let mut match_r = vec![NIL; right];
    let mut dist = vec![0usize; left];

    while bfs(adj, &match_l, &match_r, &mut dist) {
        for u in 0..left {
            if match_l[u] == NIL {
                dfs(u, adj, &mut match_l, &mut match_r, &mut dist);
            }
        }
    }
    match_l.into_iter().map(|v| (v != NIL).then_some(v)).collect()
}

pub fn matching_size(adj: &[Vec<usize>], right: usize) -> usize {
    hopcroft_karp(adj, right).iter().flatten().count()
}

/// Layers the graph from free left vertices. Returns whether some free
/// right vertex is reachable.
fn bfs(adj: &[Vec<usize>], match_l: &[usize], match_r: &[usize], dist: &mut [usize]) -> bool {
    let mut queue = VecDeque::new();
    for (u, d) in dist.iter_mut().enumerate() {
        if match_l[u] == NIL {
            *d = 0;
            queue.push_back(u);
        } else {
            *d = NIL;
        }
    }
    let mut found = false;
    while let Some(u) = queue.pop_front() {
        for &v in &adj[u] {
            let w = match_r[v];
            if w == NIL {
                found = true;
            } else if dist[w] == NIL {
                dist[w] = dist[u] + 1;
                queue.push_back(w);
            }
        }
    }
    found
}

fn dfs(
    u: usize,
    adj: &[Vec<usize>],
    match_l: &mut [usize],
    match_r: &mut [usize],
    dist: &mut [usize],
) -> bool {
    for &v in &adj[u] {
        let w = match_r[v];
        if w == NIL || (dist[w] == dist[u] + 1 && dfs(w, adj, match_l, match_r, dist)) {
            match_l[u] = v;
            match_r[v] = u;
            return true;
        }
    }
    dist[u] = NIL;
    false
}
