//! Dense Hungarian algorithm (shortest augmenting paths with potentials),
//! `O(N³)` on an `N × N` cost matrix with forbidden entries.

/// Optimal assignment plus the dual potentials that certify it.
#[derive(Debug, Clone)]
pub struct Assignment {
    /// `row_to_col[i]` for every row.
    pub row_to_col: Vec<usize>,
    /// Row potentials `u` and column potentials `v` with
    /// `cost[i][j] - u[i] - v[j] >= 0` everywhere and `= 0` on the
    /// assignment.
    pub u: Vec<i128>,
    pub v: Vec<i128>,
    pub total: i128,
}

/// Solves the square assignment problem. `cost[i * n + j]` is `None` for a
/// forbidden pair; forbidden pairs are priced above any finite perfect
/// assignment, so the result uses one only if no finite perfect assignment
/// exists (callers check existence first).
pub fn solve(n: usize, cost: &[Option<i64>]) -> Assignment {
    assert_eq!(cost.len(), n * n);
    let max_finite = cost
        .iter()
        .flatten()
        .map(|&c| i128::from(c))
        .max()
        .unwrap_or(0)
        .max(0);
    let big = max_finite * (n as i128 + 1) + 1;
    let a = |i: usize, j: usize| -> i128 {
        match cost[(i - 1) * n + (j - 1)] {
            Some(c) => i128::from(c),
            None => big,
        }
    };
    const INF: i128 = i128::MAX / 4;
    // 1-based, index 0 is the virtual column.
    let mut u = vec![0i128; n + 1];
    let mut v = vec![0i128; n + 1];
    let mut p = vec![0usize; n + 1];
    let mut way = vec![0usize; n + 1];
    let mut minv = vec![INF; n + 1];
    let mut used = vec![false; n + 1];
    for i in 1..=n {
        p[0] = i;
        let mut j0 = 0usize;
        minv.iter_mut().for_each(|x| *x = INF);
        used.iter_mut().for_each(|x| *x = false);
        loop {
            used[j0] = true;
            let i0 = p[j0];
            let mut delta = INF;
            let mut j1 = 0usize;
            for j in 1..=n {
                if used[j] {
                    continue;
                }
                let cur = a(i0, j) - u[i0] - v[j];
                if cur < minv[j] {
                    minv[j] = cur;
                    way[j] = j0;
                }
                if minv[j] < delta {
                    delta = minv[j];
                    j1 = j;
                }
            }
            for j in 0..=n {
                if used[j] {
                    u[p[j]] += delta;
                    v[j] -= delta;
                } else {
                    minv[j] -= delta;
                }
            }
            j0 = j1;
            if p[j0] == 0 {
                break;
            }
        }
        loop {
            let j1 = way[j0];
            p[j0] = p[j1];
            j0 = j1;
            if j0 == 0 {
                break;
            }
        }
    }
    let mut row_to_col = vec![0usize; n];
    for j in 1..=n {
        if p[j] != 0 {
            row_to_col[p[j] - 1] = j - 1;
        }
    }
    let total = (0..n).map(|i| a(i + 1, row_to_col[i] + 1)).sum();
    Assignment {
        row_to_col,
        u: u[1..].to_vec(),
        v: v[1..].to_vec(),
        total,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn brute(n: usize, cost: &[Option<i64>]) -> Option<i64> {
        fn rec(i: usize, n: usize, cost: &[Option<i64>], used: &mut Vec<bool>) -> Option<i64> {
            if i == n {
                return Some(0);
            }
            let mut best: Option<i64> = None;
            for j in 0..n {
                if used[j] {
                    continue;
                }
                if let Some(c) = cost[i * n + j] {
                    used[j] = true;
                    if let Some(rest) = rec(i + 1, n, cost, used) {
                        best = Some(best.map_or(c + rest, |b| b.min(c + rest)));
                    }
                    used[j] = false;
                }
            }
            best
        }
        rec(0, n, cost, &mut vec![false; n])
    }

    #[test]
    fn classic_three_by_three() {
        let c: Vec<Option<i64>> = [4, 1, 3, 2, 0, 5, 3, 2, 2].iter().map(|&x| Some(x)).collect();
        let a = solve(3, &c);
        assert_eq!(a.total, 5);
        assert_eq!(a.row_to_col, vec![1, 0, 2]);
    }

    #[test]
    fn forbidden_entries_avoided() {
        let c = vec![None, Some(10), Some(1), None];
        let a = solve(2, &c);
        assert_eq!(a.row_to_col, vec![1, 0]);
        assert_eq!(a.total, 11);
    }

    #[test]
    fn duals_certify_optimum() {
        let mut seed = 7u64;
        for _ in 0..200 {
            let n = 1 + (seed % 5) as usize;
            let mut c = Vec::new();
            for _ in 0..n * n {
                seed = seed.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
                let r = (seed >> 33) % 7;
                c.push(if r == 0 { None } else { Some(r as i64 - 1) });
            }
            let Some(opt) = brute(n, &c) else { continue };
            let a = solve(n, &c);
            assert_eq!(a.total, i128::from(opt));
            for i in 0..n {
                for j in 0..n {
                    if let Some(x) = c[i * n + j] {
                        assert!(i128::from(x) - a.u[i] - a.v[j] >= 0);
                    }
                }
                let j = a.row_to_col[i];
                assert_eq!(i128::from(c[i * n + j].unwrap()) - a.u[i] - a.v[j], 0);
            }
        }
    }
}
