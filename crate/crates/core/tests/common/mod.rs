//! Independent brute-force oracles. None of these call the library's graph,
//! matching or set-cover code; they work on an explicit closed-loop digraph.
#![allow(dead_code, clippy::needless_range_loop)]

use ioselect::cost::{Cost, Precision};
use ioselect::pattern::SparsityPattern;
use ioselect::system::{Feedback, Mode, Selection, StructuredSystem};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// Closed-loop digraph of `(A, B_I, C_J, K)`: states `0..n`, then the
/// selected inputs, then the selected outputs.
pub struct ClosedLoop {
    pub n: usize,
    pub inputs: Vec<usize>,
    pub outputs: Vec<usize>,
    pub succ: Vec<Vec<usize>>,
}

impl ClosedLoop {
    pub fn new(s: &StructuredSystem, sel: &Selection) -> Self {
        let n = s.n();
        let inputs: Vec<usize> = sel.inputs.iter().copied().collect();
        let outputs: Vec<usize> = sel.outputs.iter().copied().collect();
        let size = n + inputs.len() + outputs.len();
        let mut succ = vec![Vec::new(); size];
        for i in 0..n {
            for j in 0..n {
                if s.a.contains(i, j) {
                    succ[j].push(i);
                }
            }
        }
        for (k, &u) in inputs.iter().enumerate() {
            for i in 0..n {
                if s.b.contains(i, u) {
                    succ[n + k].push(i);
                }
            }
        }
        for (k, &y) in outputs.iter().enumerate() {
            let v = n + inputs.len() + k;
            for i in 0..n {
                if s.c.contains(y, i) {
                    succ[i].push(v);
                }
            }
            for (l, &u) in inputs.iter().enumerate() {
                if s.k.contains(u, y) {
                    succ[v].push(n + l);
                }
            }
        }
        ClosedLoop { n, inputs, outputs, succ }
    }

    pub fn size(&self) -> usize {
        self.succ.len()
    }

    /// Reflexive-transitive closure by Floyd–Warshall.
    pub fn closure(&self) -> Vec<Vec<bool>> {
        let v = self.size();
        let mut r = vec![vec![false; v]; v];
        for a in 0..v {
            r[a][a] = true;
            for &b in &self.succ[a] {
                r[a][b] = true;
            }
        }
        for k in 0..v {
            for a in 0..v {
                if r[a][k] {
                    for b in 0..v {
                        if r[k][b] {
                            r[a][b] = true;
                        }
                    }
                }
            }
        }
        r
    }
}

/// Every state shares a strongly connected component with some feedback
/// edge `y → u`: it reaches `y` and is reached from `u`.
pub fn condition_a(s: &StructuredSystem, sel: &Selection) -> bool {
    let g = ClosedLoop::new(s, sel);
    let r = g.closure();
    let base_y = g.n + g.inputs.len();
    (0..g.n).all(|x| {
        (0..g.outputs.len()).any(|yk| {
            let y = base_y + yk;
            g.succ[y].iter().any(|&u| r[x][y] && r[u][x])
        })
    })
}

/// Explicit search for vertex-disjoint cycles covering every state.
pub fn cycle_family_exists(s: &StructuredSystem, sel: &Selection) -> bool {
    let g = ClosedLoop::new(s, sel);
    let mut used = vec![false; g.size()];
    cover_from(&g, &mut used)
}

fn cover_from(g: &ClosedLoop, used: &mut Vec<bool>) -> bool {
    let Some(start) = (0..g.n).find(|&x| !used[x]) else {
        return true;
    };
    let mut path = vec![start];
    used[start] = true;
    let found = extend(g, start, &mut path, used);
    used[start] = false;
    found
}

/// Extends a simple path from `start`; on closing a cycle, recurses on
/// the remaining states.
fn extend(g: &ClosedLoop, start: usize, path: &mut Vec<usize>, used: &mut Vec<bool>) -> bool {
    let last = *path.last().unwrap();
    for &w in &g.succ[last] {
        if w == start {
            if cover_from(g, used) {
                return true;
            }
        } else if !used[w] {
            used[w] = true;
            path.push(w);
            let ok = extend(g, start, path, used);
            path.pop();
            used[w] = false;
            if ok {
                return true;
            }
        }
    }
    false
}

pub fn feasible(s: &StructuredSystem, sel: &Selection) -> bool {
    condition_a(s, sel) && (s.mode == Mode::Discrete || cycle_family_exists(s, sel))
}

pub fn all_selections(m: usize, p: usize) -> impl Iterator<Item = Selection> {
    (0u32..1 << (m + p)).map(move |mask| {
        Selection::new(
            (0..m).filter(move |&i| mask >> i & 1 == 1),
            (0..p).filter(move |&j| mask >> (m + j) & 1 == 1),
        )
    })
}

/// Minimum cost over selections accepted by `ok`, lexicographic ties.
pub fn brute_min<F>(s: &StructuredSystem, ok: F) -> Option<(Selection, Cost)>
where
    F: Fn(&Selection) -> bool,
{
    let mut best: Option<(Selection, Cost)> = None;
    for sel in all_selections(s.m(), s.p()) {
        let c = s.selection_cost(&sel);
        let better = match &best {
            None => true,
            Some((b, bc)) => c < *bc || (c == *bc && sel.lex_key() < b.lex_key()),
        };
        if better && ok(&sel) {
            best = Some((sel, c));
        }
    }
    best
}

pub fn brute_select(s: &StructuredSystem) -> Option<(Selection, Cost)> {
    brute_min(s, |sel| feasible(s, sel))
}

pub fn brute_cycle_cost(s: &StructuredSystem) -> Option<Cost> {
    brute_min(s, |sel| cycle_family_exists(s, sel)).map(|(_, c)| c)
}

/// Every state is reached from some selected input.
pub fn reaches_all(s: &StructuredSystem, inputs: &[usize]) -> bool {
    let g = ClosedLoop::new(s, &Selection::new(inputs.iter().copied(), []));
    let r = g.closure();
    (0..g.n).all(|x| (0..g.inputs.len()).any(|k| r[g.n + k][x]))
}

/// Every state reaches some selected output.
pub fn sensed_by(s: &StructuredSystem, outputs: &[usize]) -> bool {
    let g = ClosedLoop::new(s, &Selection::new([], outputs.iter().copied()));
    let r = g.closure();
    (0..g.n).all(|x| (0..g.outputs.len()).any(|k| r[x][g.n + k]))
}

/// Cheapest input set reaching every state.
pub fn brute_accessibility(s: &StructuredSystem) -> Option<Cost> {
    let mut best: Option<Cost> = None;
    for mask in 0u32..1 << s.m() {
        let inputs: Vec<usize> = (0..s.m()).filter(|&i| mask >> i & 1 == 1).collect();
        if reaches_all(s, &inputs) {
            let sel = Selection::new(inputs, []);
            let c = s.selection_cost(&sel);
            best = Some(best.map_or(c, |b| b.min(c)));
        }
    }
    best
}

/// Cheapest output set reached from every state.
pub fn brute_sensability(s: &StructuredSystem) -> Option<Cost> {
    let mut best: Option<Cost> = None;
    for mask in 0u32..1 << s.p() {
        let outputs: Vec<usize> = (0..s.p()).filter(|&j| mask >> j & 1 == 1).collect();
        if sensed_by(s, &outputs) {
            let sel = Selection::new([], outputs);
            let c = s.selection_cost(&sel);
            best = Some(best.map_or(c, |b| b.min(c)));
        }
    }
    best
}

/// Minimum-weight cover by subset enumeration; lexicographic ties.
pub fn brute_set_cover(n: usize, sets: &[Vec<usize>], weights: &[Cost]) -> Option<(Vec<usize>, Cost)> {
    let mut best: Option<(Vec<usize>, Cost)> = None;
    for mask in 0u32..1 << sets.len() {
        let chosen: Vec<usize> = (0..sets.len()).filter(|&i| mask >> i & 1 == 1).collect();
        let mut hit = vec![false; n];
        for &i in &chosen {
            for &e in &sets[i] {
                hit[e] = true;
            }
        }
        if !hit.iter().all(|&h| h) {
            continue;
        }
        let w: Cost = chosen.iter().map(|&i| weights[i]).sum();
        let better = match &best {
            None => true,
            Some((b, bw)) => w < *bw || (w == *bw && chosen < *b),
        };
        if better {
            best = Some((chosen, w));
        }
    }
    best
}

pub fn units(x: i64) -> Cost {
    Cost::from_units(x, Precision::default())
}

/// Small random system with whole-unit costs in `1..=max_cost`.
pub fn random_system(rng: &mut ChaCha8Rng, n: usize, m: usize, p: usize, density: f64, max_cost: i64) -> StructuredSystem {
    let mut stars = |rows: usize, cols: usize| {
        let mut v = Vec::new();
        for r in 0..rows {
            for c in 0..cols {
                if rng.gen_bool(density) {
                    v.push((r, c));
                }
            }
        }
        SparsityPattern::from_stars(rows, cols, v)
    };
    let a = stars(n, n);
    let b = stars(n, m);
    let c = stars(p, n);
    let precision = Precision::default();
    StructuredSystem {
        a,
        b,
        c,
        k: Feedback::Complete,
        cost_u: (0..m).map(|_| Cost::from_units(rng.gen_range(1..=max_cost), precision)).collect(),
        cost_y: (0..p).map(|_| Cost::from_units(rng.gen_range(1..=max_cost), precision)).collect(),
        mode: Mode::Continuous,
        precision,
    }
}

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Random systems whose full selection passes the oracle, with sizes drawn
/// from the given ranges.
pub fn random_feasible(
    rng: &mut ChaCha8Rng,
    n_max: usize,
    m_max: usize,
    p_max: usize,
    mode: Mode,
) -> StructuredSystem {
    loop {
        let n = rng.gen_range(1..=n_max);
        let m = rng.gen_range(1..=m_max);
        let p = rng.gen_range(1..=p_max);
        let density = rng.gen_range(0.2..0.6);
        let s = random_system(rng, n, m, p, density, 9).with_mode(mode);
        if feasible(&s, &Selection::full(m, p)) {
            return s;
        }
    }
}
