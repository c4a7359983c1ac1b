//! Weighted set cover: greedy and exact solvers, and the two reductions
//! between set cover and minimum-cost accessibility.

use std::cmp::Ordering;

use thiserror::Error;

use crate::cost::{Cost, Precision};
use crate::graph::{all_accessible, Analysis};
use crate::pattern::SparsityPattern;
use crate::system::{Feedback, Mode, Selection, StructuredSystem};

/// Largest number of sets the exact solver accepts.
pub const EXACT_SET_LIMIT: usize = 25;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SetCoverError {
    #[error("element {} of the universe is in no set", .0 + 1)]
    Infeasible(usize),
    #[error("exact solver limited to {EXACT_SET_LIMIT} sets, instance has {0}")]
    TooLarge(usize),
    #[error("set {set} contains element {element} outside the universe 1..={universe}")]
    ElementOutOfRange {
        set: usize,
        element: usize,
        universe: usize,
    },
    #[error("instance has {sets} sets but {weights} weights")]
    WeightCount { sets: usize, weights: usize },
    #[error("set {0} has a negative weight")]
    NegativeWeight(usize),
    #[error("universe must be nonempty to build an accessibility instance")]
    EmptyUniverse,
    #[error("selection leaves state {} inaccessible", .0 + 1)]
    InfeasibleSelection(usize),
}

/// Universe `{0..N}`, sets `S_0..S_{r-1}` and nonnegative weights.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct WeightedSetCoverInstance {
    pub universe_size: usize,
    /// Sorted, deduplicated, 0-based.
    pub sets: Vec<Vec<usize>>,
    pub weights: Vec<Cost>,
    pub precision: Precision,
}

/// One greedy pick: the set, the elements it newly covered and its weight.
/// The ratio is `weight / newly_covered.len()`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GreedyStep {
    pub set: usize,
    pub newly_covered: Vec<usize>,
    pub weight: Cost,
}

impl GreedyStep {
    pub fn ratio(&self, precision: Precision) -> f64 {
        self.weight.to_f64(precision) / self.newly_covered.len() as f64
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Cover {
    /// Chosen set indices, ascending.
    pub chosen: Vec<usize>,
    pub weight: Cost,
    /// Greedy picks in order; empty for exact solutions.
    pub trace: Vec<GreedyStep>,
}

impl Cover {
    /// `I(S)`: chosen sets read as input indices.
    pub fn to_input_selection(&self) -> Selection {
        Selection::new(self.chosen.iter().copied(), [])
    }

    /// Chosen sets read as output indices (for covers of a dual system).
    pub fn to_output_selection(&self) -> Selection {
        Selection::new([], self.chosen.iter().copied())
    }
}

impl WeightedSetCoverInstance {
    pub fn new(
        universe_size: usize,
        sets: Vec<Vec<usize>>,
        weights: Vec<Cost>,
        precision: Precision,
    ) -> Result<Self, SetCoverError> {
        if sets.len() != weights.len() {
            return Err(SetCoverError::WeightCount {
                sets: sets.len(),
                weights: weights.len(),
            });
        }
        if let Some(i) = weights.iter().position(|w| w.is_negative()) {
            return Err(SetCoverError::NegativeWeight(i));
        }
        let mut normalized = Vec::with_capacity(sets.len());
        for (set, mut s) in sets.into_iter().enumerate() {
            if let Some(&element) = s.iter().find(|&&e| e >= universe_size) {
                return Err(SetCoverError::ElementOutOfRange {
                    set,
                    element,
                    universe: universe_size,
                });
            }
            s.sort_unstable();
            s.dedup();
            normalized.push(s);
        }
        Ok(WeightedSetCoverInstance {
            universe_size,
            sets: normalized,
            weights,
            precision,
        })
    }

    pub fn r(&self) -> usize {
        self.sets.len()
    }

    /// Largest set size `d`.
    pub fn max_set_size(&self) -> usize {
        self.sets.iter().map(Vec::len).max().unwrap_or(0)
    }

    /// First element covered by no set, if any.
    pub fn uncoverable(&self) -> Option<usize> {
        let mut hit = vec![false; self.universe_size];
        for s in &self.sets {
            for &e in s {
                hit[e] = true;
            }
        }
        hit.iter().position(|h| !h)
    }

    pub fn is_cover(&self, chosen: &[usize]) -> bool {
        let mut hit = vec![false; self.universe_size];
        for &i in chosen {
            for &e in &self.sets[i] {
                hit[e] = true;
            }
        }
        hit.into_iter().all(|h| h)
    }

    pub fn weight_of(&self, chosen: &[usize]) -> Cost {
        chosen.iter().map(|&i| self.weights[i]).sum()
    }

    fn cover_from(&self, mut chosen: Vec<usize>, trace: Vec<GreedyStep>) -> Cover {
        chosen.sort_unstable();
        Cover {
            weight: self.weight_of(&chosen),
            chosen,
            trace,
        }
    }
}

/// Greedy weighted set cover. Each round takes the set minimizing
/// `weight / newly covered`; ties go to the larger new coverage, then the
/// lower index. Sets adding nothing are never taken.
pub fn greedy_solve(inst: &WeightedSetCoverInstance) -> Result<Cover, SetCoverError> {
    if let Some(e) = inst.uncoverable() {
        return Err(SetCoverError::Infeasible(e));
    }
    let mut covered = vec![false; inst.universe_size];
    let mut remaining = inst.universe_size;
    let mut taken = vec![false; inst.r()];
    let mut chosen = Vec::new();
    let mut trace = Vec::new();
    while remaining > 0 {
        // (set, new count, weight)
        let mut best: Option<(usize, usize, Cost)> = None;
        for (i, s) in inst.sets.iter().enumerate() {
            if taken[i] {
                continue;
            }
            let fresh = s.iter().filter(|&&e| !covered[e]).count();
            if fresh == 0 {
                continue;
            }
            let w = inst.weights[i];
            let better = match best {
                None => true,
                Some((_, bf, bw)) => {
                    // w / fresh < bw / bf  ⇔  w·bf < bw·fresh
                    let lhs = i128::from(w.raw()) * bf as i128;
                    let rhs = i128::from(bw.raw()) * fresh as i128;
                    match lhs.cmp(&rhs) {
                        Ordering::Less => true,
                        Ordering::Equal => fresh > bf,
                        Ordering::Greater => false,
                    }
                }
            };
            if better {
                best = Some((i, fresh, w));
            }
        }
        let (i, _, w) = best.expect("feasible instance always has a useful set");
        let newly: Vec<usize> = inst.sets[i].iter().copied().filter(|&e| !covered[e]).collect();
        for &e in &newly {
            covered[e] = true;
        }
        remaining -= newly.len();
        taken[i] = true;
        chosen.push(i);
        trace.push(GreedyStep {
            set: i,
            newly_covered: newly,
            weight: w,
        });
    }
    Ok(inst.cover_from(chosen, trace))
}

/// Minimum-weight cover by include/exclude branch and bound over all
/// subsets. Among optimal covers the lexicographically smallest sorted index
/// list wins.
pub fn exact_solve(inst: &WeightedSetCoverInstance) -> Result<Cover, SetCoverError> {
    if inst.r() > EXACT_SET_LIMIT {
        return Err(SetCoverError::TooLarge(inst.r()));
    }
    if let Some(e) = inst.uncoverable() {
        return Err(SetCoverError::Infeasible(e));
    }
    // last set index able to cover each element
    let mut last = vec![0usize; inst.universe_size];
    for (i, s) in inst.sets.iter().enumerate() {
        for &e in s {
            last[e] = i;
        }
    }
    let mut search = ExactSearch {
        inst,
        last,
        count: vec![0; inst.universe_size],
        uncovered: inst.universe_size,
        current: Vec::new(),
        best: None,
    };
    search.branch(0, Cost::ZERO);
    let (_, chosen) = search.best.expect("feasible instance has a cover");
    Ok(inst.cover_from(chosen, Vec::new()))
}

struct ExactSearch<'a> {
    inst: &'a WeightedSetCoverInstance,
    last: Vec<usize>,
    count: Vec<u32>,
    uncovered: usize,
    current: Vec<usize>,
    best: Option<(Cost, Vec<usize>)>,
}

impl ExactSearch<'_> {
    fn offer(&mut self, weight: Cost) {
        let better = match &self.best {
            None => true,
            Some((bw, bc)) => weight < *bw || (weight == *bw && self.current < *bc),
        };
        if better {
            self.best = Some((weight, self.current.clone()));
        }
    }

    fn branch(&mut self, i: usize, weight: Cost) {
        if let Some((bw, _)) = &self.best {
            if weight > *bw {
                return;
            }
        }
        // Appending a later index never makes the sorted list smaller, so a
        // complete cover is a leaf.
        if self.uncovered == 0 {
            self.offer(weight);
            return;
        }
        if i == self.inst.r() {
            return;
        }
        // An element whose last covering set is behind us is lost for good.
        if (0..self.inst.universe_size).any(|e| self.count[e] == 0 && self.last[e] < i) {
            return;
        }
        // include
        for &e in &self.inst.sets[i] {
            if self.count[e] == 0 {
                self.uncovered -= 1;
            }
            self.count[e] += 1;
        }
        self.current.push(i);
        self.branch(i + 1, weight + self.inst.weights[i]);
        self.current.pop();
        for &e in &self.inst.sets[i] {
            self.count[e] -= 1;
            if self.count[e] == 0 {
                self.uncovered += 1;
            }
        }
        // exclude
        self.branch(i + 1, weight);
    }
}

/// Accessibility → set cover: universe = non-top linked SCCs, `S_i` = those
/// covered by input `i`, `w(i) = p_u(i)`. Also returns the member states of
/// each universe element.
pub fn reduce_accessibility_to_wsc(
    system: &StructuredSystem,
) -> (WeightedSetCoverInstance, Vec<Vec<usize>>) {
    let an = Analysis::new(system);
    let labels = an
        .scc
        .non_top_ids
        .iter()
        .map(|&c| an.scc.components[c].clone())
        .collect();
    let inst = WeightedSetCoverInstance {
        universe_size: an.scc.q(),
        sets: an.coverage.input_covers,
        weights: system.cost_u.clone(),
        precision: system.precision,
    };
    (inst, labels)
}

/// Sensability → set cover, via the dual system. Set `j` is output `j`.
pub fn reduce_sensability_to_wsc(
    system: &StructuredSystem,
) -> (WeightedSetCoverInstance, Vec<Vec<usize>>) {
    reduce_accessibility_to_wsc(&system.transpose_dual())
}

/// Set cover → accessibility: `A` = `N×N` diagonal, `B_ij = *` iff element
/// `i ∈ S_j`, `p_u(j) = w(j)`; no outputs.
pub fn reduce_wsc_to_accessibility(
    inst: &WeightedSetCoverInstance,
) -> Result<StructuredSystem, SetCoverError> {
    let n = inst.universe_size;
    if n == 0 {
        return Err(SetCoverError::EmptyUniverse);
    }
    let b = SparsityPattern::from_stars(
        n,
        inst.r(),
        inst.sets
            .iter()
            .enumerate()
            .flat_map(|(j, s)| s.iter().map(move |&i| (i, j))),
    );
    Ok(StructuredSystem {
        a: SparsityPattern::diagonal(n),
        b,
        c: SparsityPattern::empty(0, n),
        k: Feedback::Complete,
        cost_u: inst.weights.clone(),
        cost_y: Vec::new(),
        mode: Mode::Continuous,
        precision: inst.precision,
    })
}

/// `S(I)`: the sets named by a feasible input selection on a system produced
/// by [`reduce_wsc_to_accessibility`].
pub fn selection_to_cover(
    inst: &WeightedSetCoverInstance,
    sel: &Selection,
) -> Result<Cover, SetCoverError> {
    let system = reduce_wsc_to_accessibility(inst)?;
    if !all_accessible(&system, sel) {
        let reach = crate::graph::accessible_states(&system, &sel.inputs);
        let lost = reach.iter().position(|r| !r).unwrap_or(0);
        return Err(SetCoverError::InfeasibleSelection(lost));
    }
    Ok(inst.cover_from(sel.inputs.iter().copied().collect(), Vec::new()))
}

/// `H(d) = 1 + 1/2 + … + 1/d`; `H(0) = 0`.
pub fn harmonic(d: usize) -> f64 {
    (1..=d).map(|k| 1.0 / k as f64).sum()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures::four_state_example;
    use crate::graph::all_sensable;

    fn p() -> Precision {
        Precision::default()
    }

    fn inst(n: usize, sets: &[&[usize]], w: &[i64]) -> WeightedSetCoverInstance {
        WeightedSetCoverInstance::new(
            n,
            sets.iter().map(|s| s.iter().map(|e| e - 1).collect()).collect(),
            w.iter().map(|&x| Cost::from_units(x, p())).collect(),
            p(),
        )
        .unwrap()
    }

    #[test]
    fn example_reduction() {
        let (wsc, labels) = reduce_accessibility_to_wsc(&four_state_example());
        assert_eq!(wsc.universe_size, 2);
        assert_eq!(labels, vec![vec![1], vec![3]]);
        assert_eq!(wsc.sets, vec![vec![], vec![0], vec![0, 1]]);
        assert!(wsc.weights.iter().all(|&w| w == Cost::from_units(1, p())));
    }

    #[test]
    fn single_scc_gives_one_element_universe() {
        let s = crate::fixtures::cycle_system(5);
        let (wsc, _) = reduce_accessibility_to_wsc(&s);
        assert_eq!(wsc.universe_size, 1);
        assert_eq!(wsc.sets, vec![vec![0]]);
    }

    #[test]
    fn diagonal_reduction_mirrors_b() {
        let mut s = four_state_example();
        s.a = SparsityPattern::diagonal(4);
        let (wsc, _) = reduce_accessibility_to_wsc(&s);
        assert_eq!(wsc.universe_size, 4);
        assert_eq!(wsc.sets, s.b.columns());
    }

    #[test]
    fn greedy_on_example_takes_third_set() {
        let (wsc, _) = reduce_accessibility_to_wsc(&four_state_example());
        let c = greedy_solve(&wsc).unwrap();
        assert_eq!(c.chosen, vec![2]);
        assert_eq!(c.weight, Cost::from_units(1, p()));
        assert_eq!(c.to_input_selection(), Selection::one_based([3], []));
    }

    #[test]
    fn greedy_prefers_cheaper_ratio() {
        let c = greedy_solve(&inst(2, &[&[1], &[2], &[1, 2]], &[1, 1, 3])).unwrap();
        assert_eq!(c.chosen, vec![0, 1]);
        assert_eq!(c.weight, Cost::from_units(2, p()));
        assert_eq!(c.trace.iter().map(|s| s.set).collect::<Vec<_>>(), vec![0, 1]);
        assert_eq!(c.trace[0].ratio(p()), 1.0);
    }

    #[test]
    fn greedy_tie_breaks_on_coverage_then_index() {
        // ratios all 1: set 2 covers two new elements, wins.
        let c = greedy_solve(&inst(2, &[&[1], &[2], &[1, 2]], &[1, 1, 2])).unwrap();
        assert_eq!(c.trace[0].set, 2);
        let c = greedy_solve(&inst(1, &[&[1], &[1]], &[1, 1])).unwrap();
        assert_eq!(c.chosen, vec![0]);
    }

    #[test]
    fn zero_weight_cover() {
        let c = greedy_solve(&inst(1, &[&[1]], &[0])).unwrap();
        assert_eq!(c.weight, Cost::ZERO);
        assert_eq!(c.chosen, vec![0]);
    }

    #[test]
    fn zero_weight_useless_sets_skipped() {
        let c = greedy_solve(&inst(1, &[&[], &[1]], &[0, 4])).unwrap();
        assert_eq!(c.chosen, vec![1]);
    }

    #[test]
    fn infeasible_reported() {
        assert_eq!(
            greedy_solve(&inst(2, &[&[1]], &[1])).unwrap_err(),
            SetCoverError::Infeasible(1)
        );
        assert_eq!(
            exact_solve(&inst(2, &[&[1]], &[1])).unwrap_err(),
            SetCoverError::Infeasible(1)
        );
    }

    #[test]
    fn exact_examples() {
        let (wsc, _) = reduce_accessibility_to_wsc(&four_state_example());
        let c = exact_solve(&wsc).unwrap();
        assert_eq!((c.chosen.clone(), c.weight), (vec![2], Cost::from_units(1, p())));
        let c = exact_solve(&inst(3, &[&[1, 2], &[2, 3], &[1, 2, 3]], &[2, 2, 5])).unwrap();
        assert_eq!((c.chosen.clone(), c.weight), (vec![0, 1], Cost::from_units(4, p())));
        let c = exact_solve(&inst(0, &[], &[])).unwrap();
        assert!(c.chosen.is_empty() && c.weight == Cost::ZERO);
    }

    #[test]
    fn exact_tie_break_is_lexicographic() {
        // {1,2} and {3} both weigh 2; [0, 1] < [2].
        let c = exact_solve(&inst(2, &[&[1], &[2], &[1, 2]], &[1, 1, 2])).unwrap();
        assert_eq!(c.chosen, vec![0, 1]);
        // A redundant zero-weight set 1 makes [0, 1] beat [1].
        let c = exact_solve(&inst(1, &[&[], &[1]], &[0, 3])).unwrap();
        assert_eq!(c.chosen, vec![0, 1]);
    }

    #[test]
    fn exact_guard() {
        let sets: Vec<&[usize]> = vec![&[1]; 26];
        let w = vec![1; 26];
        assert_eq!(
            exact_solve(&inst(1, &sets, &w)).unwrap_err(),
            SetCoverError::TooLarge(26)
        );
    }

    #[test]
    fn cover_maps_to_accessible_selection() {
        let s = four_state_example();
        for chosen in [vec![2], vec![1, 2]] {
            let cover = Cover {
                weight: Cost::from_units(chosen.len() as i64, p()),
                chosen,
                trace: vec![],
            };
            let sel = cover.to_input_selection();
            assert!(all_accessible(&s, &sel));
            assert_eq!(s.selection_cost(&sel), cover.weight);
        }
    }

    #[test]
    fn dual_cover_maps_to_sensable_outputs() {
        let s = four_state_example();
        let (wsc, _) = reduce_sensability_to_wsc(&s);
        let c = greedy_solve(&wsc).unwrap();
        assert_eq!(c.chosen, vec![0]);
        let sel = c.to_output_selection();
        assert!(all_sensable(&s, &sel));
        assert_eq!(s.selection_cost(&sel), Cost::from_units(1, p()));
    }

    #[test]
    fn reverse_reduction_transcribes_sets() {
        let sys = reduce_wsc_to_accessibility(&inst(2, &[&[1, 2]], &[7])).unwrap();
        assert_eq!(sys.a, SparsityPattern::diagonal(2));
        assert_eq!(sys.b.column(0).collect::<Vec<_>>(), vec![0, 1]);
        assert_eq!(sys.cost_u, vec![Cost::from_units(7, p())]);
        assert!(sys.validate().is_ok());
    }

    #[test]
    fn forward_then_reverse_on_example() {
        let (wsc, _) = reduce_accessibility_to_wsc(&four_state_example());
        let sys = reduce_wsc_to_accessibility(&wsc).unwrap();
        assert_eq!(sys.n(), 2);
        assert_eq!(sys.b.one_based_stars(), vec![[1, 2], [1, 3], [2, 3]]);
        let cover = selection_to_cover(&wsc, &Selection::one_based([3], [])).unwrap();
        assert_eq!((cover.chosen, cover.weight), (vec![2], Cost::from_units(1, p())));
    }

    #[test]
    fn reverse_reduction_guards() {
        assert_eq!(
            reduce_wsc_to_accessibility(&inst(0, &[], &[])).unwrap_err(),
            SetCoverError::EmptyUniverse
        );
        let wsc = inst(2, &[&[1], &[2]], &[1, 1]);
        let all = selection_to_cover(&wsc, &Selection::new([0, 1], [])).unwrap();
        assert_eq!(all.chosen, vec![0, 1]);
        assert!(matches!(
            selection_to_cover(&wsc, &Selection::default()),
            Err(SetCoverError::InfeasibleSelection(_))
        ));
    }

    #[test]
    fn harmonic_numbers() {
        assert_eq!(harmonic(0), 0.0);
        assert_eq!(harmonic(1), 1.0);
        assert!((harmonic(3) - 11.0 / 6.0).abs() < 1e-12);
    }
}
