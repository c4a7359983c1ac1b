//! State and system digraphs, SCC condensation, coverage tables and the
//! accessibility / sensability / feedback-cycle conditions.

use std::collections::{BTreeSet, VecDeque};
use std::fmt::Write as _;

use crate::scc::tarjan;
use crate::system::{Selection, StructuredSystem};

/// `D(A)`: an edge `x_j → x_i` for every star `A_ij`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct StateDigraph {
    pub n: usize,
    pub succ: Vec<Vec<usize>>,
}

impl StateDigraph {
    pub fn from_system(system: &StructuredSystem) -> Self {
        let n = system.n();
        let mut succ = vec![Vec::new(); n];
        for (i, j) in system.a.stars() {
            succ[j].push(i);
        }
        for s in &mut succ {
            s.sort_unstable();
        }
        StateDigraph { n, succ }
    }

    /// Edges as 0-based `(from, to)` pairs.
    pub fn edges(&self) -> BTreeSet<(usize, usize)> {
        self.succ
            .iter()
            .enumerate()
            .flat_map(|(v, ws)| ws.iter().map(move |&w| (v, w)))
            .collect()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum EdgeClass {
    State,
    Input,
    Output,
    Feedback,
}

impl EdgeClass {
    pub fn tag(self) -> &'static str {
        match self {
            EdgeClass::State => "EX",
            EdgeClass::Input => "EU",
            EdgeClass::Output => "EY",
            EdgeClass::Feedback => "EK",
        }
    }
}

/// Vertex of the system digraph.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Vertex {
    State(usize),
    Input(usize),
    Output(usize),
}

impl Vertex {
    pub fn label(self) -> String {
        match self {
            Vertex::State(i) => format!("x{}", i + 1),
            Vertex::Input(i) => format!("u{}", i + 1),
            Vertex::Output(i) => format!("y{}", i + 1),
        }
    }
}

/// `D(A, B, C, K)`. Vertices are laid out as states `0..n`, inputs
/// `n..n+m`, outputs `n+m..n+m+p`.
#[derive(Debug, Clone)]
pub struct SystemDigraph {
    pub n: usize,
    pub m: usize,
    pub p: usize,
    pub edges: Vec<(usize, usize, EdgeClass)>,
    pub succ: Vec<Vec<usize>>,
}

impl SystemDigraph {
    pub fn from_system(system: &StructuredSystem) -> Self {
        let (n, m, p) = (system.n(), system.m(), system.p());
        let mut edges = Vec::new();
        for (i, j) in system.a.stars() {
            edges.push((j, i, EdgeClass::State));
        }
        for (i, j) in system.b.stars() {
            edges.push((n + j, i, EdgeClass::Input));
        }
        for (i, j) in system.c.stars() {
            edges.push((j, n + m + i, EdgeClass::Output));
        }
        for i in 0..m {
            for j in 0..p {
                if system.k.contains(i, j) {
                    edges.push((n + m + j, n + i, EdgeClass::Feedback));
                }
            }
        }
        let mut succ = vec![Vec::new(); n + m + p];
        for &(s, t, _) in &edges {
            succ[s].push(t);
        }
        SystemDigraph {
            n,
            m,
            p,
            edges,
            succ,
        }
    }

    pub fn vertex(&self, v: usize) -> Vertex {
        if v < self.n {
            Vertex::State(v)
        } else if v < self.n + self.m {
            Vertex::Input(v - self.n)
        } else {
            Vertex::Output(v - self.n - self.m)
        }
    }

    pub fn edges_of(&self, class: EdgeClass) -> impl Iterator<Item = (Vertex, Vertex)> + '_ {
        self.edges
            .iter()
            .filter(move |e| e.2 == class)
            .map(|&(s, t, _)| (self.vertex(s), self.vertex(t)))
    }

    /// One edge per line: `src dst class`.
    pub fn to_edge_list(&self) -> String {
        let mut out = String::new();
        for &(s, t, class) in &self.edges {
            let _ = writeln!(
                out,
                "{} {} {}",
                self.vertex(s).label(),
                self.vertex(t).label(),
                class.tag()
            );
        }
        out
    }
}

/// Builds both digraphs for a system.
pub fn build_graphs(system: &StructuredSystem) -> (StateDigraph, SystemDigraph) {
    (
        StateDigraph::from_system(system),
        SystemDigraph::from_system(system),
    )
}

/// SCCs of `D(A)` with the condensation DAG and linked-ness flags.
#[derive(Debug, Clone)]
pub struct SccDecomposition {
    pub component_of: Vec<usize>,
    pub components: Vec<Vec<usize>>,
    /// Condensation successors, deduplicated and sorted.
    pub dag: Vec<Vec<usize>>,
    pub non_top: Vec<bool>,
    pub non_bottom: Vec<bool>,
    pub isolated: Vec<bool>,
    /// Component ids of the non-top linked SCCs, ascending; the `j`-th entry
    /// is the `j`-th element of the accessibility universe.
    pub non_top_ids: Vec<usize>,
    pub non_bottom_ids: Vec<usize>,
}

impl SccDecomposition {
    pub fn len(&self) -> usize {
        self.components.len()
    }

    pub fn is_empty(&self) -> bool {
        self.components.is_empty()
    }

    /// Number of non-top linked SCCs.
    pub fn q(&self) -> usize {
        self.non_top_ids.len()
    }

    /// Number of non-bottom linked SCCs.
    pub fn k(&self) -> usize {
        self.non_bottom_ids.len()
    }

    pub fn is_irreducible(&self) -> bool {
        self.components.len() == 1
    }

    /// Component ids reachable from `c` in the condensation (including `c`).
    pub fn reachable_from(&self, c: usize) -> Vec<bool> {
        let mut seen = vec![false; self.len()];
        let mut queue = VecDeque::from([c]);
        seen[c] = true;
        while let Some(v) = queue.pop_front() {
            for &w in &self.dag[v] {
                if !seen[w] {
                    seen[w] = true;
                    queue.push_back(w);
                }
            }
        }
        seen
    }

    /// For a non-isolated SCC, some `(non_top, non_bottom)` pair of
    /// components such that `c` lies on a condensation path between them.
    pub fn top_bottom_witness(&self, c: usize) -> Option<(usize, usize)> {
        let top = self
            .non_top_ids
            .iter()
            .copied()
            .find(|&t| self.reachable_from(t)[c])?;
        let below = self.reachable_from(c);
        let bottom = self.non_bottom_ids.iter().copied().find(|&b| below[b])?;
        Some((top, bottom))
    }

    /// Condensation edges as `N{a} N{b} dag` lines (1-based component ids).
    pub fn to_edge_list(&self) -> String {
        let mut out = String::new();
        for (a, succ) in self.dag.iter().enumerate() {
            for &b in succ {
                let _ = writeln!(out, "N{} N{} dag", a + 1, b + 1);
            }
        }
        out
    }
}

pub fn decompose_sccs(g: &StateDigraph) -> SccDecomposition {
    let (component_of, count) = tarjan(&g.succ);
    let mut components = vec![Vec::new(); count];
    for (v, &c) in component_of.iter().enumerate() {
        components[c].push(v);
    }
    let mut dag: Vec<BTreeSet<usize>> = vec![BTreeSet::new(); count];
    let mut has_in = vec![false; count];
    for (v, ws) in g.succ.iter().enumerate() {
        for &w in ws {
            let (cv, cw) = (component_of[v], component_of[w]);
            if cv != cw {
                dag[cv].insert(cw);
                has_in[cw] = true;
            }
        }
    }
    let non_top: Vec<bool> = has_in.iter().map(|&h| !h).collect();
    let non_bottom: Vec<bool> = dag.iter().map(BTreeSet::is_empty).collect();
    let isolated = non_top
        .iter()
        .zip(&non_bottom)
        .map(|(&t, &b)| t && b)
        .collect();
    let non_top_ids = (0..count).filter(|&c| non_top[c]).collect();
    let non_bottom_ids = (0..count).filter(|&c| non_bottom[c]).collect();
    SccDecomposition {
        component_of,
        components,
        dag: dag.into_iter().map(|s| s.into_iter().collect()).collect(),
        non_top,
        non_bottom,
        isolated,
        non_top_ids,
        non_bottom_ids,
    }
}

/// Which non-top (non-bottom) linked SCCs each input (output) covers.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CoverageTables {
    /// `input_covers[i]`: positions in `non_top_ids` covered by input `i`.
    pub input_covers: Vec<Vec<usize>>,
    /// `output_covers[j]`: positions in `non_bottom_ids` covered by output `j`.
    pub output_covers: Vec<Vec<usize>>,
    pub mu_max: usize,
    pub eta_max: usize,
}

impl CoverageTables {
    pub fn mu(&self) -> Vec<usize> {
        self.input_covers.iter().map(Vec::len).collect()
    }

    pub fn eta(&self) -> Vec<usize> {
        self.output_covers.iter().map(Vec::len).collect()
    }
}

pub fn coverage(system: &StructuredSystem, scc: &SccDecomposition) -> CoverageTables {
    let mut top_pos = vec![None; scc.len()];
    for (pos, &c) in scc.non_top_ids.iter().enumerate() {
        top_pos[c] = Some(pos);
    }
    let mut bottom_pos = vec![None; scc.len()];
    for (pos, &c) in scc.non_bottom_ids.iter().enumerate() {
        bottom_pos[c] = Some(pos);
    }
    let mut input_covers = vec![BTreeSet::new(); system.m()];
    for (r, i) in system.b.stars() {
        if let Some(pos) = top_pos[scc.component_of[r]] {
            input_covers[i].insert(pos);
        }
    }
    let mut output_covers = vec![BTreeSet::new(); system.p()];
    for (j, r) in system.c.stars() {
        if let Some(pos) = bottom_pos[scc.component_of[r]] {
            output_covers[j].insert(pos);
        }
    }
    let input_covers: Vec<Vec<usize>> = input_covers
        .into_iter()
        .map(|s| s.into_iter().collect())
        .collect();
    let output_covers: Vec<Vec<usize>> = output_covers
        .into_iter()
        .map(|s| s.into_iter().collect())
        .collect();
    CoverageTables {
        mu_max: input_covers.iter().map(Vec::len).max().unwrap_or(0),
        eta_max: output_covers.iter().map(Vec::len).max().unwrap_or(0),
        input_covers,
        output_covers,
    }
}

/// SCC structure of a system computed once and shared by the checks below.
#[derive(Debug, Clone)]
pub struct Analysis {
    pub state: StateDigraph,
    pub scc: SccDecomposition,
    pub coverage: CoverageTables,
}

impl Analysis {
    pub fn new(system: &StructuredSystem) -> Self {
        let state = StateDigraph::from_system(system);
        let scc = decompose_sccs(&state);
        let coverage = coverage(system, &scc);
        Analysis {
            state,
            scc,
            coverage,
        }
    }
}

/// States reachable from the selected inputs (breadth-first over `B` then
/// `A` edges).
pub fn accessible_states(system: &StructuredSystem, inputs: &BTreeSet<usize>) -> Vec<bool> {
    let g = StateDigraph::from_system(system);
    let mut seen = vec![false; system.n()];
    let mut queue = VecDeque::new();
    for (r, i) in system.b.stars() {
        if inputs.contains(&i) && !seen[r] {
            seen[r] = true;
            queue.push_back(r);
        }
    }
    while let Some(v) = queue.pop_front() {
        for &w in &g.succ[v] {
            if !seen[w] {
                seen[w] = true;
                queue.push_back(w);
            }
        }
    }
    seen
}

/// States from which some selected output is reachable.
pub fn sensable_states(system: &StructuredSystem, outputs: &BTreeSet<usize>) -> Vec<bool> {
    accessible_states(&system.transpose_dual(), outputs)
}

fn covers_all(covers: &[Vec<usize>], chosen: &BTreeSet<usize>, universe: usize) -> bool {
    let mut hit = vec![false; universe];
    for &i in chosen {
        for &e in &covers[i] {
            hit[e] = true;
        }
    }
    hit.into_iter().all(|h| h)
}

/// Every state reachable from some selected input. Computed by search and by
/// the non-top-SCC coverage criterion; the two must agree.
pub fn all_accessible(system: &StructuredSystem, sel: &Selection) -> bool {
    let by_search = accessible_states(system, &sel.inputs).into_iter().all(|s| s);
    let an = Analysis::new(system);
    let by_cover = covers_all(&an.coverage.input_covers, &sel.inputs, an.scc.q());
    assert_eq!(by_search, by_cover, "accessibility criteria disagree");
    by_search
}

/// Every state reaches some selected output. Mirror of [`all_accessible`].
pub fn all_sensable(system: &StructuredSystem, sel: &Selection) -> bool {
    let by_search = sensable_states(system, &sel.outputs).into_iter().all(|s| s);
    let an = Analysis::new(system);
    let by_cover = covers_all(&an.coverage.output_covers, &sel.outputs, an.scc.k());
    assert_eq!(by_search, by_cover, "sensability criteria disagree");
    by_search
}

/// For each state, a feedback edge `(output, input)` (original indices)
/// lying in the same SCC of the restricted system digraph, or `None` when
/// there is none. Empty-`None` entries are the Type-1 violations.
pub fn feedback_witnesses(
    system: &StructuredSystem,
    sel: &Selection,
) -> Vec<Option<(usize, usize)>> {
    let restricted = system
        .restrict(sel)
        .expect("selection checked by caller");
    let g = SystemDigraph::from_system(&restricted.system);
    let (comp, count) = tarjan(&g.succ);
    let mut witness: Vec<Option<(usize, usize)>> = vec![None; count];
    for &(s, t, class) in &g.edges {
        if class == EdgeClass::Feedback && comp[s] == comp[t] && witness[comp[s]].is_none() {
            let out = restricted.output_map[s - g.n - g.m];
            let inp = restricted.input_map[t - g.n];
            witness[comp[s]] = Some((out, inp));
        }
    }
    (0..g.n).map(|x| witness[comp[x]]).collect()
}

/// 0-based states not contained in an SCC with a feedback edge.
pub fn type1_violations(system: &StructuredSystem, sel: &Selection) -> Vec<usize> {
    feedback_witnesses(system, sel)
        .iter()
        .enumerate()
        .filter(|(_, w)| w.is_none())
        .map(|(x, _)| x)
        .collect()
}

/// Every state lies in an SCC of `D(A, B_I, C_J, K_{I×J})` that contains a
/// feedback edge.
pub fn condition_a_holds(system: &StructuredSystem, sel: &Selection) -> bool {
    type1_violations(system, sel).is_empty()
}
