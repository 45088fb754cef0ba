//! Hopcroft-Karp maximum bipartite matching.

use std::collections::VecDeque;

const FREE: usize = usize::MAX;

/// Maximum matching between `left` vertices `0..adj.len()` and right vertices `0..right`.
/// Returns `pair_of_left`, with `usize::MAX` for unmatched vertices.
pub fn max_matching(adj: &[Vec<usize>], right: usize) -> Vec<usize> {
    let left = adj.len();
    let mut pl = vec![FREE; left];
    let mut pr = vec![FREE; right];
    let mut dist = vec![0usize; left];
    loop {
        let mut queue = VecDeque::new();
        for u in 0..left {
            if pl[u] == FREE {
                dist[u] = 0;
                queue.push_back(u);
            } else {
                dist[u] = usize::MAX;
            }
        }
        let mut reachable_free = false;
        while let Some(u) = queue.pop_front() {
            for &v in &adj[u] {
                match pr[v] {
                    FREE => reachable_free = true,
                    w if dist[w] == usize::MAX => {
                        dist[w] = dist[u] + 1;
                        queue.push_back(w);
                    }
                    _ => {}
                }
            }
        }
        if !reachable_free {
            break;
        }
        for u in 0..left {
            if pl[u] == FREE {
                augment(u, adj, &mut pl, &mut pr, &mut dist);
            }
        }
    }
    pl
}

fn augment(u: usize, adj: &[Vec<usize>], pl: &mut [usize], pr: &mut [usize], dist: &mut [usize]) -> bool {
    for &v in &adj[u] {
        let w = pr[v];
        if w == FREE || (dist[w] == dist[u] + 1 && augment(w, adj, pl, pr, dist)) {
            pl[u] = v;
            pr[v] = u;
            return true;
        }
    }
    dist[u] = usize::MAX;
    false
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn perfect_on_cycle() {
        let adj = vec![vec![0, 1], vec![1, 2], vec![2, 0]];
        let m = max_matching(&adj, 3);
        assert!(m.iter().all(|&v| v != FREE));
    }

    #[test]
    fn star_matches_once() {
        let adj = vec![vec![0], vec![0], vec![0]];
        assert_eq!(max_matching(&adj, 1).iter().filter(|&&v| v != FREE).count(), 1);
    }
}
