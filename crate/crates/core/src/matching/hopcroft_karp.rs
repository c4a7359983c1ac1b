//! Hopcroft–Karp maximum bipartite matching, `O(E √V)`.

use std::collections::VecDeque;

pub const FREE: usize = usize::MAX;

/// Maximum matching of a bipartite graph given as left-side adjacency
/// lists. Returns `(match_left, match_right)` with [`FREE`] for unmatched.
pub fn maximum_matching(adj: &[Vec<usize>], right_size: usize) -> (Vec<usize>, Vec<usize>) {
    let left_size = adj.len();
    let mut match_l = vec![FREE; left_size];
    let mut match_r = vec![FREE; right_size];
    let mut dist = vec![0u32; left_size];
    let mut it = vec![0usize; left_size];

    loop {
        // BFS layering from free left vertices.
        let mut queue = VecDeque::new();
        for l in 0..left_size {
            if match_l[l] == FREE {
                dist[l] = 0;
                queue.push_back(l);
            } else {
                dist[l] = u32::MAX;
            }
        }
        let mut found = false;
        while let Some(l) = queue.pop_front() {
            for &r in &adj[l] {
                let next = match_r[r];
                if next == FREE {
                    found = true;
                } else if dist[next] == u32::MAX {
                    dist[next] = dist[l] + 1;
                    queue.push_back(next);
                }
            }
        }
        if !found {
            break;
        }
        it.iter_mut().for_each(|x| *x = 0);
        for l in 0..left_size {
            if match_l[l] == FREE {
                augment(l, adj, &mut match_l, &mut match_r, &mut dist, &mut it);
            }
        }
    }
    (match_l, match_r)
}

/// Layered DFS, iterative.
fn augment(
    root: usize,
    adj: &[Vec<usize>],
    match_l: &mut [usize],
    match_r: &mut [usize],
    dist: &mut [u32],
    it: &mut [usize],
) -> bool {
    let mut path: Vec<usize> = vec![root];
    while let Some(&l) = path.last() {
        if it[l] == adj[l].len() {
            dist[l] = u32::MAX;
            path.pop();
            continue;
        }
        let r = adj[l][it[l]];
        let next = match_r[r];
        if next == FREE {
            // Flip the path root → … → l → r.
            let mut r_cur = r;
            while let Some(l_cur) = path.pop() {
                let prev = match_l[l_cur];
                match_l[l_cur] = r_cur;
                match_r[r_cur] = l_cur;
                r_cur = prev;
            }
            return true;
        }
        if dist[next] == dist[l] + 1 {
            path.push(next);
        } else {
            it[l] += 1;
        }
    }
    false
}
