//! The system bipartite graph, perfect-matching tests and the
//! minimum-cost perfect matching used for the disjoint-cycle condition.
//!
//! Both sides have `n + m + p` vertices laid out as states, then inputs,
//! then outputs. Left vertices are the primed copies `x'`, `u'`, `y'`.

pub mod hopcroft_karp;
pub mod hungarian;

use std::collections::{BTreeSet, HashMap, VecDeque};
use std::fmt::Write as _;

use thiserror::Error;

use crate::cost::{Cost, Precision};
use crate::system::{Restricted, Selection, StructuredSystem};
use hopcroft_karp::{maximum_matching, FREE};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum BipartiteClass {
    /// `(x'_i, x_j)` for `A(i, j) = *`.
    State,
    /// `(x'_i, u_j)` for `B(i, j) = *`.
    Input,
    /// `(y'_j, x_i)` for `C(j, i) = *`.
    Output,
    /// `(u'_i, y_j)` for `K(i, j) = *`, priced `p_u(i) + p_y(j)`.
    Feedback,
    /// `(u'_i, u_i)`: input `i` left unused.
    InputSelf,
    /// `(y'_j, y_j)`: output `j` left unused.
    OutputSelf,
}

impl BipartiteClass {
    pub fn tag(self) -> &'static str {
        match self {
            BipartiteClass::State => "EX",
            BipartiteClass::Input => "EU",
            BipartiteClass::Output => "EY",
            BipartiteClass::Feedback => "EK",
            BipartiteClass::InputSelf => "EUU",
            BipartiteClass::OutputSelf => "EYY",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct BipartiteEdge {
    pub left: usize,
    pub right: usize,
    pub class: BipartiteClass,
    pub cost: Cost,
}

#[derive(Debug, Clone)]
pub struct SystemBipartiteGraph {
    pub n: usize,
    pub m: usize,
    pub p: usize,
    pub edges: Vec<BipartiteEdge>,
    /// Edge ids leaving each left vertex, ascending by right endpoint.
    pub adj: Vec<Vec<usize>>,
    pub precision: Precision,
    /// Original index of each input and output, used only for labels.
    pub input_ids: Vec<usize>,
    pub output_ids: Vec<usize>,
    index: HashMap<(usize, usize), usize>,
}

impl SystemBipartiteGraph {
    /// Vertices per side.
    pub fn side(&self) -> usize {
        self.n + self.m + self.p
    }

    pub fn count(&self, class: BipartiteClass) -> usize {
        self.edges.iter().filter(|e| e.class == class).count()
    }

    pub fn edge(&self, left: usize, right: usize) -> Option<&BipartiteEdge> {
        self.index.get(&(left, right)).map(|&id| &self.edges[id])
    }

    pub fn left_label(&self, v: usize) -> String {
        format!("{}'", self.right_label(v))
    }

    pub fn right_label(&self, v: usize) -> String {
        if v < self.n {
            format!("x{}", v + 1)
        } else if v < self.n + self.m {
            format!("u{}", self.input_ids[v - self.n] + 1)
        } else {
            format!("y{}", self.output_ids[v - self.n - self.m] + 1)
        }
    }

    fn right_lists(&self) -> Vec<Vec<usize>> {
        self.adj
            .iter()
            .map(|ids| ids.iter().map(|&id| self.edges[id].right).collect())
            .collect()
    }

    /// One edge per line: `left right class cost`.
    pub fn to_edge_list(&self) -> String {
        let mut out = String::new();
        for e in &self.edges {
            let _ = writeln!(
                out,
                "{} {} {} {}",
                self.left_label(e.left),
                self.right_label(e.right),
                e.class.tag(),
                e.cost.to_decimal(self.precision)
            );
        }
        out
    }
}

/// Builds `B(A, B, C, K)` with edge costs. Works unchanged on restricted
/// systems, where the self edges exist only for retained inputs/outputs.
pub fn build_bipartite(system: &StructuredSystem) -> SystemBipartiteGraph {
    let (n, m, p) = (system.n(), system.m(), system.p());
    let side = n + m + p;
    let mut edges = Vec::new();
    let zero = Cost::ZERO;
    for (i, j) in system.a.stars() {
        edges.push(BipartiteEdge { left: i, right: j, class: BipartiteClass::State, cost: zero });
    }
    for (i, j) in system.b.stars() {
        edges.push(BipartiteEdge { left: i, right: n + j, class: BipartiteClass::Input, cost: zero });
    }
    for (j, i) in system.c.stars() {
        edges.push(BipartiteEdge { left: n + m + j, right: i, class: BipartiteClass::Output, cost: zero });
    }
    for i in 0..m {
        for j in 0..p {
            if system.k.contains(i, j) {
                edges.push(BipartiteEdge {
                    left: n + i,
                    right: n + m + j,
                    class: BipartiteClass::Feedback,
                    cost: system.cost_u[i] + system.cost_y[j],
                });
            }
        }
    }
    for i in 0..m {
        edges.push(BipartiteEdge { left: n + i, right: n + i, class: BipartiteClass::InputSelf, cost: zero });
    }
    for j in 0..p {
        let v = n + m + j;
        edges.push(BipartiteEdge { left: v, right: v, class: BipartiteClass::OutputSelf, cost: zero });
    }
    edges.sort_by_key(|e| (e.left, e.right));
    let mut adj = vec![Vec::new(); side];
    let mut index = HashMap::with_capacity(edges.len());
    for (id, e) in edges.iter().enumerate() {
        adj[e.left].push(id);
        index.insert((e.left, e.right), id);
    }
    SystemBipartiteGraph {
        n,
        m,
        p,
        edges,
        adj,
        precision: system.precision,
        input_ids: (0..m).collect(),
        output_ids: (0..p).collect(),
        index,
    }
}

/// [`build_bipartite`] on a restricted system, labelled with the original
/// input and output indices.
pub fn build_bipartite_restricted(restricted: &Restricted) -> SystemBipartiteGraph {
    let mut g = build_bipartite(&restricted.system);
    g.input_ids = restricted.input_map.clone();
    g.output_ids = restricted.output_map.clone();
    g
}

pub fn has_perfect_matching(g: &SystemBipartiteGraph) -> bool {
    let (ml, _) = maximum_matching(&g.right_lists(), g.side());
    ml.iter().all(|&r| r != FREE)
}

/// Whether the state-only graph `B(A)` (edges `E_X` alone) has a perfect
/// matching, i.e. the states are spanned by disjoint cycles of `D(A)`.
pub fn state_graph_has_perfect_matching(system: &StructuredSystem) -> bool {
    let adj = system.a.row_lists();
    let (ml, _) = maximum_matching(&adj, system.n());
    ml.iter().all(|&r| r != FREE)
}

/// A left vertex set `S` with `|N(S)| < |S|`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct HallWitness {
    pub left: Vec<String>,
    pub neighbors: Vec<String>,
}

impl std::fmt::Display for HallWitness {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(
            f,
            "S = {{{}}} has only {} neighbours {{{}}}",
            self.left.join(", "),
            self.neighbors.len(),
            self.neighbors.join(", ")
        )
    }
}

/// Alternating-reachable set from the free left vertices of a maximum
/// matching, or `None` when a perfect matching exists.
pub fn hall_witness(g: &SystemBipartiteGraph) -> Option<HallWitness> {
    let lists = g.right_lists();
    let (ml, mr) = maximum_matching(&lists, g.side());
    let mut seen_l = vec![false; g.side()];
    let mut seen_r = vec![false; g.side()];
    let mut queue: VecDeque<usize> = (0..g.side()).filter(|&l| ml[l] == FREE).collect();
    if queue.is_empty() {
        return None;
    }
    for &l in &queue {
        seen_l[l] = true;
    }
    while let Some(l) = queue.pop_front() {
        for &r in &lists[l] {
            if seen_r[r] {
                continue;
            }
            seen_r[r] = true;
            let next = mr[r];
            debug_assert!(next != FREE, "maximum matching left an augmenting path");
            if next != FREE && !seen_l[next] {
                seen_l[next] = true;
                queue.push_back(next);
            }
        }
    }
    Some(HallWitness {
        left: (0..g.side()).filter(|&v| seen_l[v]).map(|v| g.left_label(v)).collect(),
        neighbors: (0..g.side()).filter(|&v| seen_r[v]).map(|v| g.right_label(v)).collect(),
    })
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum MatchingError {
    #[error("no perfect matching (Type-2 structurally fixed mode): {0}")]
    NoPerfectMatching(HallWitness),
}

/// A perfect matching as edge ids, ascending by left vertex.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Matching {
    pub edges: Vec<usize>,
    pub total_cost: Cost,
}

impl Matching {
    pub fn feedback_edges<'a>(&'a self, g: &'a SystemBipartiteGraph) -> impl Iterator<Item = &'a BipartiteEdge> + 'a {
        self.edges
            .iter()
            .map(move |&id| &g.edges[id])
            .filter(|e| e.class == BipartiteClass::Feedback)
    }

    /// `left right class cost` per matched edge.
    pub fn to_edge_list(&self, g: &SystemBipartiteGraph) -> String {
        let mut out = String::new();
        for &id in &self.edges {
            let e = &g.edges[id];
            let _ = writeln!(
                out,
                "{} {} {} {}",
                g.left_label(e.left),
                g.right_label(e.right),
                e.class.tag(),
                e.cost.to_decimal(g.precision)
            );
        }
        out
    }
}

/// Exact minimum-cost perfect matching. Among optimal matchings the one
/// returned uses input 1 if any optimal matching does, then input 2 if
/// still possible, and so on through the inputs and then the outputs.
pub fn min_cost_perfect_matching(g: &SystemBipartiteGraph) -> Result<Matching, MatchingError> {
    if let Some(w) = hall_witness(g) {
        return Err(MatchingError::NoPerfectMatching(w));
    }
    let side = g.side();
    let mut dense: Vec<Option<i64>> = vec![None; side * side];
    for e in &g.edges {
        dense[e.left * side + e.right] = Some(e.cost.raw());
    }
    let sol = hungarian::solve(side, &dense);

    // Optimal matchings are exactly the perfect matchings of the tight
    // subgraph under optimal duals.
    let tight = |e: &BipartiteEdge| i128::from(e.cost.raw()) - sol.u[e.left] - sol.v[e.right] == 0;
    let tight_adj: Vec<Vec<usize>> = g
        .adj
        .iter()
        .map(|ids| ids.iter().filter(|&&id| tight(&g.edges[id])).map(|&id| g.edges[id].right).collect())
        .collect();
    let mut match_l = sol.row_to_col.clone();
    let mut match_r = vec![FREE; side];
    for (l, &r) in match_l.iter().enumerate() {
        match_r[r] = l;
    }

    let mut removed = vec![false; side];
    let mut locked = vec![false; side];
    for v in g.n..side {
        let Some(e) = g.edge(v, v) else { continue };
        if !tight(e) {
            continue;
        }
        if match_l[v] != v {
            removed[v] = true;
            continue;
        }
        match_l[v] = FREE;
        match_r[v] = FREE;
        removed[v] = true;
        if !reroute(v, &tight_adj, &mut match_l, &mut match_r, &removed, &locked) {
            removed[v] = false;
            match_l[v] = v;
            match_r[v] = v;
            locked[v] = true;
        }
    }

    let mut edges: Vec<usize> = match_l
        .iter()
        .enumerate()
        .map(|(l, &r)| g.index[&(l, r)])
        .collect();
    edges.sort_unstable();
    let total_cost = edges.iter().map(|&id| g.edges[id].cost).sum();
    debug_assert_eq!(i128::from(Cost::raw(total_cost)), sol.total);
    Ok(Matching { edges, total_cost })
}

/// Augmenting path from free left `v` to free right `v` in the tight graph,
/// avoiding removed self edges and locked vertices.
fn reroute(
    v: usize,
    adj: &[Vec<usize>],
    match_l: &mut [usize],
    match_r: &mut [usize],
    removed: &[bool],
    locked: &[bool],
) -> bool {
    let side = adj.len();
    let mut parent_r = vec![FREE; side];
    let mut queue = VecDeque::from([v]);
    let mut seen_l = vec![false; side];
    seen_l[v] = true;
    while let Some(l) = queue.pop_front() {
        for &r in &adj[l] {
            if locked[r] || parent_r[r] != FREE || (r == l && removed[l]) {
                continue;
            }
            parent_r[r] = l;
            if r == v {
                let mut r_cur = r;
                loop {
                    let l_cur = parent_r[r_cur];
                    let prev = match_l[l_cur];
                    match_l[l_cur] = r_cur;
                    match_r[r_cur] = l_cur;
                    if l_cur == v {
                        return true;
                    }
                    r_cur = prev;
                }
            }
            let next = match_r[r];
            if next != FREE && !seen_l[next] {
                seen_l[next] = true;
                queue.push_back(next);
            }
        }
    }
    false
}

/// `I(M)`, `J(M)` and `p(I(M)) + p(J(M))`, in the graph's own indices.
pub fn extract_io(g: &SystemBipartiteGraph, matching: &Matching, system: &StructuredSystem) -> (Selection, Cost) {
    let mut inputs = BTreeSet::new();
    let mut outputs = BTreeSet::new();
    for &id in &matching.edges {
        let e = &g.edges[id];
        match e.class {
            BipartiteClass::Input => {
                inputs.insert(e.right - g.n);
            }
            BipartiteClass::Output => {
                outputs.insert(e.left - g.n - g.m);
            }
            _ => {}
        }
    }
    let sel = Selection { inputs, outputs };
    let cost = system.selection_cost(&sel);
    (sel, cost)
}

/// Whether every state lies on one of a family of vertex-disjoint cycles of
/// the restricted system digraph. Out-of-range indices give `false`.
pub fn cycle_cover_check(system: &StructuredSystem, sel: &Selection) -> bool {
    match system.restrict(sel) {
        Ok(r) => has_perfect_matching(&build_bipartite(&r.system)),
        Err(_) => false,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures::{dedicated_diagonal, four_state_example, four_state_example_with_costs};

    #[test]
    fn example_edge_counts() {
        let g = build_bipartite(&four_state_example());
        let counts: Vec<usize> = [
            BipartiteClass::State,
            BipartiteClass::Input,
            BipartiteClass::Output,
            BipartiteClass::Feedback,
            BipartiteClass::InputSelf,
            BipartiteClass::OutputSelf,
        ]
        .iter()
        .map(|&c| g.count(c))
        .collect();
        assert_eq!(counts, vec![7, 7, 2, 6, 3, 2]);
        let two = Cost::from_units(2, g.precision);
        for e in &g.edges {
            let want = if e.class == BipartiteClass::Feedback { two } else { Cost::ZERO };
            assert_eq!(e.cost, want);
        }
    }

    #[test]
    fn example_min_cost() {
        let s = four_state_example();
        let g = build_bipartite(&s);
        let m = min_cost_perfect_matching(&g).unwrap();
        assert_eq!(m.total_cost, Cost::from_units(2, s.precision));
        let (sel, cost) = extract_io(&g, &m, &s);
        assert_eq!(sel, Selection::one_based([1], [1]));
        assert_eq!(cost, m.total_cost);
    }

    #[test]
    fn expensive_example_uses_one_feedback_edge() {
        let s = four_state_example_with_costs([10, 10, 10], [10, 10]);
        let m = min_cost_perfect_matching(&build_bipartite(&s)).unwrap();
        assert_eq!(m.total_cost, Cost::from_units(20, s.precision));
    }

    #[test]
    fn skewed_costs_pick_input_two() {
        let s = four_state_example_with_costs([5, 1, 1], [1, 5]);
        let g = build_bipartite(&s);
        let m = min_cost_perfect_matching(&g).unwrap();
        let (sel, cost) = extract_io(&g, &m, &s);
        assert_eq!(sel, Selection::one_based([2], [1]));
        assert_eq!(cost, Cost::from_units(2, s.precision));
    }

    #[test]
    fn diagonal_needs_nothing() {
        let s = dedicated_diagonal(4);
        let g = build_bipartite(&s);
        let m = min_cost_perfect_matching(&g).unwrap();
        assert_eq!(m.total_cost, Cost::ZERO);
        assert_eq!(extract_io(&g, &m, &s).0, Selection::default());
    }

    #[test]
    fn cycle_cover_examples() {
        let s = four_state_example();
        assert!(cycle_cover_check(&s, &Selection::one_based([3], [1])));
        assert!(!cycle_cover_check(&s, &Selection::one_based([3], [2])));
        assert!(!cycle_cover_check(&s, &Selection::default()));
    }

    #[test]
    fn hall_witness_on_empty_selection() {
        let s = four_state_example();
        let r = s.restrict(&Selection::default()).unwrap();
        let w = hall_witness(&build_bipartite(&r.system)).unwrap();
        assert!(w.neighbors.len() < w.left.len());
        assert!(matches!(
            min_cost_perfect_matching(&build_bipartite(&r.system)),
            Err(MatchingError::NoPerfectMatching(_))
        ));
    }

    #[test]
    fn state_graph_matching() {
        assert!(!state_graph_has_perfect_matching(&four_state_example()));
        assert!(state_graph_has_perfect_matching(&dedicated_diagonal(3)));
    }
}
