//! Hopcroft–Karp maximum bipartite matching with alternating-path
//! reachability (the König construction). Deterministic for a fixed
//! adjacency order; both sides of the Dilworth duality are derived from
//! the same matching.

const INF: u32 = u32::MAX;

pub(crate) struct Matching {
    pub left_match: Vec<Option<usize>>,
    pub right_match: Vec<Option<usize>>,
    pub size: usize,
}

pub(crate) fn hopcroft_karp(n_left: usize, n_right: usize, adj: &[Vec<usize>]) -> Matching {
    assert_eq!(adj.len(), n_left);
    let mut left_match: Vec<Option<usize>> = vec![None; n_left];
    let mut right_match: Vec<Option<usize>> = vec![None; n_right];
    let mut dist = vec![INF; n_left];
    let mut queue = Vec::with_capacity(n_left);
    let mut size = 0;

    loop {
        // BFS: layer left vertices starting from the free ones.
        queue.clear();
        for u in 0..n_left {
            if left_match[u].is_none() {
                dist[u] = 0;
                queue.push(u);
            } else {
                dist[u] = INF;
            }
        }
        let mut layered = false;
        let mut head = 0;
        while head < queue.len() {
            let u = queue[head];
            head += 1;
            for &v in &adj[u] {
                match right_match[v] {
                    None => layered = true,
                    Some(w) => {
                        if dist[w] == INF {
                            dist[w] = dist[u] + 1;
                            queue.push(w);
                        }
                    }
                }
            }
        }
        if !layered {
            break;
        }
        // DFS along the layering, augmenting vertex-disjoint paths.
        fn augment(
            u: usize,
            adj: &[Vec<usize>],
            dist: &mut [u32],
            left_match: &mut [Option<usize>],
            right_match: &mut [Option<usize>],
        ) -> bool {
            for &v in &adj[u] {
                let ok = match right_match[v] {
                    None => true,
                    Some(w) => {
                        dist[w] == dist[u] + 1
                            && augment(w, adj, dist, left_match, right_match)
                    }
                };
                if ok {
                    left_match[u] = Some(v);
                    right_match[v] = Some(u);
                    return true;
                }
            }
            dist[u] = INF;
            false
        }
        for u in 0..n_left {
            if left_match[u].is_none()
                && augment(u, adj, &mut dist, &mut left_match, &mut right_match)
            {
                size += 1;
            }
        }
    }

    Matching {
        left_match,
        right_match,
        size,
    }
}

/// Vertices reachable from free left vertices along alternating paths
/// (non-matching edges left to right, matching edges right to left).
/// The complement construction turns this into a minimum vertex cover.
pub(crate) fn alternating_reachability(
    n_right: usize,
    adj: &[Vec<usize>],
    m: &Matching,
) -> (Vec<bool>, Vec<bool>) {
    let n_left = adj.len();
    let mut in_left = vec![false; n_left];
    let mut in_right = vec![false; n_right];
    let mut stack: Vec<usize> = (0..n_left).filter(|&u| m.left_match[u].is_none()).collect();
    for &u in &stack {
        in_left[u] = true;
    }
    while let Some(u) = stack.pop() {
        for &v in &adj[u] {
            if m.left_match[u] == Some(v) || in_right[v] {
                continue;
            }
            in_right[v] = true;
            if let Some(w) = m.right_match[v] {
                if !in_left[w] {
                    in_left[w] = true;
                    stack.push(w);
                }
            }
        }
    }
    (in_left, in_right)
}
