//! SFM decision, the three-stage selection pipeline and its report.

use std::fmt;
use std::time::{Duration, Instant};

use thiserror::Error;

use crate::cost::Cost;
use crate::graph::{feedback_witnesses, Analysis};
use crate::matching::{
    build_bipartite, build_bipartite_restricted, extract_io, has_perfect_matching, hall_witness, min_cost_perfect_matching,
    state_graph_has_perfect_matching, HallWitness, MatchingError,
};
use crate::oracle::{exact_select, OracleError, EXACT_SELECT_LIMIT};
use crate::set_cover::{
    exact_solve, greedy_solve, reduce_accessibility_to_wsc, reduce_sensability_to_wsc, Cover,
    GreedyStep, SetCoverError,
};
use crate::system::{Mode, Selection, StructuredSystem, SystemError};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum SfmStatus {
    NoSfm,
    HasType1Sfm,
    HasType2Sfm,
    Both,
}

impl SfmStatus {
    fn from_flags(type1: bool, type2: bool) -> Self {
        match (type1, type2) {
            (false, false) => SfmStatus::NoSfm,
            (true, false) => SfmStatus::HasType1Sfm,
            (false, true) => SfmStatus::HasType2Sfm,
            (true, true) => SfmStatus::Both,
        }
    }

    pub fn is_free(self) -> bool {
        self == SfmStatus::NoSfm
    }

    pub fn reason(self) -> &'static str {
        match self {
            SfmStatus::NoSfm => "none",
            SfmStatus::HasType1Sfm => "Type-1",
            SfmStatus::HasType2Sfm => "Type-2",
            SfmStatus::Both => "Type-1 and Type-2",
        }
    }
}

/// The status plus witnesses for each failed condition.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SfmDiagnosis {
    pub status: SfmStatus,
    /// 0-based states lying in no SCC that contains a feedback edge.
    pub type1_states: Vec<usize>,
    /// Hall-violating set of the restricted bipartite graph.
    pub type2_witness: Option<HallWitness>,
}

impl fmt::Display for SfmDiagnosis {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.status.reason())?;
        if !self.type1_states.is_empty() {
            let xs: Vec<String> = self.type1_states.iter().map(|x| format!("x{}", x + 1)).collect();
            write!(f, "; no feedback cycle through {}", xs.join(", "))?;
        }
        if let Some(w) = &self.type2_witness {
            write!(f, "; states not spanned by disjoint cycles: {w}")?;
        }
        Ok(())
    }
}

/// Evaluates both conditions on `(A, B_I, C_J, K_{I×J})`. Discrete mode
/// evaluates only the SCC condition.
pub fn diagnose_sfm(system: &StructuredSystem, sel: &Selection) -> Result<SfmDiagnosis, SystemError> {
    let restricted = system.restrict(sel)?;
    let type1_states: Vec<usize> = feedback_witnesses(system, sel)
        .iter()
        .enumerate()
        .filter(|(_, w)| w.is_none())
        .map(|(x, _)| x)
        .collect();
    let type2_witness = match system.mode {
        Mode::Continuous => hall_witness(&build_bipartite_restricted(&restricted)),
        Mode::Discrete => None,
    };
    Ok(SfmDiagnosis {
        status: SfmStatus::from_flags(!type1_states.is_empty(), type2_witness.is_some()),
        type1_states,
        type2_witness,
    })
}

/// Out-of-range indices panic; use [`diagnose_sfm`] for untrusted input.
pub fn check_no_sfm(system: &StructuredSystem, sel: &Selection) -> SfmStatus {
    let restricted = system.restrict(sel).expect("selection indices in range");
    let type1 = feedback_witnesses(system, sel).iter().any(Option::is_none);
    let type2 = system.mode == Mode::Continuous && !has_perfect_matching(&build_bipartite(&restricted.system));
    SfmStatus::from_flags(type1, type2)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum SpecialCase {
    Irreducible,
    Discrete,
    StatePm,
    SingleNonTop,
    SingleNonBottom,
    General,
}

impl SpecialCase {
    pub fn tag(self) -> &'static str {
        match self {
            SpecialCase::Irreducible => "irreducible",
            SpecialCase::Discrete => "discrete",
            SpecialCase::StatePm => "state_pm",
            SpecialCase::SingleNonTop => "single_nontop",
            SpecialCase::SingleNonBottom => "single_nonbottom",
            SpecialCase::General => "general",
        }
    }

    /// Approximation guarantee quoted for the case. Logarithms are natural.
    pub fn guarantee(self) -> &'static str {
        match self {
            SpecialCase::Irreducible => "optimal",
            SpecialCase::Discrete | SpecialCase::StatePm => "2(log mu_max + log eta_max)",
            SpecialCase::SingleNonTop => "3 log eta_max",
            SpecialCase::SingleNonBottom => "3 log mu_max",
            SpecialCase::General => "2 log n",
        }
    }
}

/// Every applicable tag, strongest guarantee first; `[General]` when none
/// applies.
pub fn detect_special_cases(system: &StructuredSystem) -> Vec<SpecialCase> {
    detect_with(system, &Analysis::new(system))
}

fn detect_with(system: &StructuredSystem, an: &Analysis) -> Vec<SpecialCase> {
    let mut tags = Vec::new();
    if an.scc.is_irreducible() {
        tags.push(SpecialCase::Irreducible);
    }
    if system.mode == Mode::Discrete {
        tags.push(SpecialCase::Discrete);
    }
    if state_graph_has_perfect_matching(system) {
        tags.push(SpecialCase::StatePm);
    }
    if an.scc.q() == 1 {
        tags.push(SpecialCase::SingleNonTop);
    }
    if an.scc.k() == 1 {
        tags.push(SpecialCase::SingleNonBottom);
    }
    if tags.is_empty() {
        tags.push(SpecialCase::General);
    }
    tags
}

pub fn detect_special_case(system: &StructuredSystem) -> SpecialCase {
    detect_special_cases(system)[0]
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SelectorOptions {
    /// Run the exact set-cover and brute-force oracles when within their
    /// size guards, and tighten the lower bound with them.
    pub exact: bool,
    /// Run the three stages on the rayon pool.
    pub parallel: bool,
}

impl Default for SelectorOptions {
    fn default() -> Self {
        SelectorOptions { exact: false, parallel: true }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SelectorError {
    #[error(transparent)]
    System(#[from] SystemError),
    #[error("selection requires complete feedback pattern K")]
    NonCompleteFeedback,
    #[error("system has structurally fixed modes even with every input and output: {0}")]
    SystemHasSfms(SfmDiagnosis),
    #[error(transparent)]
    SetCover(#[from] SetCoverError),
    #[error(transparent)]
    Matching(#[from] MatchingError),
}

/// Stage costs; `None` for a stage that did not run.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct StageCosts {
    pub accessibility: Option<Cost>,
    pub sensability: Option<Cost>,
    pub cycle: Option<Cost>,
}

/// Result of the minimum-cost matching stage.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CycleStage {
    pub selection: Selection,
    pub cost: Cost,
    /// `left right class cost` lines.
    pub edges: Vec<String>,
}

/// Oracle results, present when [`SelectorOptions::exact`] is set. Each is
/// `None` when its size guard was exceeded.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ExactSummary {
    pub accessibility: Option<Cost>,
    pub sensability: Option<Cost>,
    pub optimum: Option<(Selection, Cost)>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SelectionReport {
    pub selection: Selection,
    pub total_cost: Cost,
    pub stage_costs: StageCosts,
    pub lower_bound: Cost,
    pub special_case: SpecialCase,
    pub special_cases: Vec<SpecialCase>,
    pub no_sfm: bool,
    pub accessibility: Option<Cover>,
    pub sensability: Option<Cover>,
    pub cycle: Option<CycleStage>,
    /// Per state, a feedback edge `(output, input)` inside its SCC in the
    /// selected closed loop.
    pub state_witnesses: Vec<Option<(usize, usize)>>,
    /// Member states of each non-top / non-bottom linked SCC, in universe order.
    pub non_top_sccs: Vec<Vec<usize>>,
    pub non_bottom_sccs: Vec<Vec<usize>>,
    pub q: usize,
    pub k: usize,
    pub mu_max: usize,
    pub eta_max: usize,
    pub exact: Option<ExactSummary>,
}

impl SelectionReport {
    pub fn guarantee(&self) -> &'static str {
        self.special_case.guarantee()
    }

    pub fn matching_invoked(&self) -> bool {
        self.cycle.is_some()
    }

    pub fn accessibility_trace(&self) -> &[GreedyStep] {
        self.accessibility.as_ref().map_or(&[], |c| &c.trace)
    }

    pub fn sensability_trace(&self) -> &[GreedyStep] {
        self.sensability.as_ref().map_or(&[], |c| &c.trace)
    }
}

/// Wall-clock time per stage.
#[derive(Debug, Clone, Copy, Default, PartialEq)]
pub struct StageTimings {
    pub analysis: Duration,
    pub accessibility: Duration,
    pub sensability: Duration,
    pub cycle: Duration,
    pub total: Duration,
}

pub fn select_min_cost_io(system: &StructuredSystem, opts: SelectorOptions) -> Result<SelectionReport, SelectorError> {
    select_min_cost_io_timed(system, opts).map(|(r, _)| r)
}

type Timed<T> = (T, Duration);

fn timed<T>(f: impl FnOnce() -> T) -> Timed<T> {
    let t = Instant::now();
    let v = f();
    (v, t.elapsed())
}

fn join3<A, B, C>(
    parallel: bool,
    a: impl FnOnce() -> A + Send,
    b: impl FnOnce() -> B + Send,
    c: impl FnOnce() -> C + Send,
) -> (A, B, C)
where
    A: Send,
    B: Send,
    C: Send,
{
    if parallel {
        let (a, (b, c)) = rayon::join(a, || rayon::join(b, c));
        (a, b, c)
    } else {
        (a(), b(), c())
    }
}

fn cycle_stage(system: &StructuredSystem) -> Result<CycleStage, MatchingError> {
    let g = build_bipartite(system);
    let m = min_cost_perfect_matching(&g)?;
    let (selection, cost) = extract_io(&g, &m, system);
    debug_assert_eq!(cost, m.total_cost);
    Ok(CycleStage {
        selection,
        cost,
        edges: m.to_edge_list(&g).lines().map(str::to_owned).collect(),
    })
}

pub fn select_min_cost_io_timed(
    system: &StructuredSystem,
    opts: SelectorOptions,
) -> Result<(SelectionReport, StageTimings), SelectorError> {
    let start = Instant::now();
    let report = system.validate();
    if !report.is_ok() {
        return Err(SystemError::Invalid(report).into());
    }
    if !system.k.is_complete() {
        return Err(SelectorError::NonCompleteFeedback);
    }
    let (an, analysis_time) = timed(|| Analysis::new(system));
    let full = Selection::full(system.m(), system.p());
    let diagnosis = diagnose_sfm(system, &full)?;
    if !diagnosis.status.is_free() {
        return Err(SelectorError::SystemHasSfms(diagnosis));
    }
    let special_cases = detect_with(system, &an);
    let special_case = special_cases[0];
    let continuous = system.mode == Mode::Continuous;
    let irreducible = special_case == SpecialCase::Irreducible && continuous;

    let run_covers = !irreducible;
    let ((acc, acc_t), (sens, sens_t), (cyc, cyc_t)) = join3(
        opts.parallel,
        || timed(|| run_covers.then(|| greedy_solve(&reduce_accessibility_to_wsc(system).0)).transpose()),
        || timed(|| run_covers.then(|| greedy_solve(&reduce_sensability_to_wsc(system).0)).transpose()),
        || timed(|| continuous.then(|| cycle_stage(system)).transpose()),
    );
    let (acc, sens, cycle) = (acc?, sens?, cyc?);

    let selection = if irreducible {
        let stage = cycle.as_ref().expect("continuous mode runs the matching stage");
        if stage.selection.inputs.is_empty() {
            cheapest_pair(system)
        } else {
            stage.selection.clone()
        }
    } else {
        let mut sel = Selection::default();
        if let Some(c) = &acc {
            sel.inputs.extend(c.chosen.iter().copied());
        }
        if let Some(c) = &sens {
            sel.outputs.extend(c.chosen.iter().copied());
        }
        if let Some(c) = &cycle {
            sel = sel.union(&c.selection);
        }
        sel
    };
    let total_cost = system.selection_cost(&selection);
    let stage_costs = StageCosts {
        accessibility: acc.as_ref().map(|c| c.weight),
        sensability: sens.as_ref().map(|c| c.weight),
        cycle: cycle.as_ref().map(|c| c.cost),
    };

    let exact = opts.exact.then(|| exact_summary(system));

    // Stage optima are exact when their universe has one element (greedy
    // then takes the cheapest covering set) or when the oracle ran.
    let acc_exact = exact
        .as_ref()
        .and_then(|e| e.accessibility)
        .or_else(|| (an.scc.q() <= 1).then_some(stage_costs.accessibility).flatten());
    let sens_exact = exact
        .as_ref()
        .and_then(|e| e.sensability)
        .or_else(|| (an.scc.k() <= 1).then_some(stage_costs.sensability).flatten());
    // Costs are nonnegative, so a stage without an exact optimum adds 0.
    let exact_stages = acc_exact.unwrap_or(Cost::ZERO) + sens_exact.unwrap_or(Cost::ZERO);
    let mut lower_bound = stage_costs.cycle.unwrap_or(Cost::ZERO).max(exact_stages);
    if irreducible {
        lower_bound = total_cost;
    }
    if let Some((_, p)) = exact.as_ref().and_then(|e| e.optimum.as_ref()) {
        lower_bound = lower_bound.max(*p);
    }

    let state_witnesses = feedback_witnesses(system, &selection);
    let no_sfm = check_no_sfm(system, &selection).is_free();
    let labels = |ids: &[usize]| ids.iter().map(|&c| an.scc.components[c].clone()).collect();
    let report = SelectionReport {
        selection,
        total_cost,
        stage_costs,
        lower_bound,
        special_case,
        special_cases,
        no_sfm,
        accessibility: acc,
        sensability: sens,
        cycle,
        state_witnesses,
        non_top_sccs: labels(&an.scc.non_top_ids),
        non_bottom_sccs: labels(&an.scc.non_bottom_ids),
        q: an.scc.q(),
        k: an.scc.k(),
        mu_max: an.coverage.mu_max,
        eta_max: an.coverage.eta_max,
        exact,
    };
    let timings = StageTimings {
        analysis: analysis_time,
        accessibility: acc_t,
        sensability: sens_t,
        cycle: cyc_t,
        total: start.elapsed(),
    };
    Ok((report, timings))
}

/// Cheapest input with a `B` star plus cheapest output with a `C` star,
/// lowest index on ties.
fn cheapest_pair(system: &StructuredSystem) -> Selection {
    let mut has_b = vec![false; system.m()];
    for (_, i) in system.b.stars() {
        has_b[i] = true;
    }
    let mut has_c = vec![false; system.p()];
    for (j, _) in system.c.stars() {
        has_c[j] = true;
    }
    let pick = |flags: &[bool], costs: &[Cost]| {
        (0..flags.len())
            .filter(|&i| flags[i])
            .min_by_key(|&i| (costs[i], i))
            .expect("system without SFMs has an actuated state and a sensed state")
    };
    Selection::new([pick(&has_b, &system.cost_u)], [pick(&has_c, &system.cost_y)])
}

fn exact_summary(system: &StructuredSystem) -> ExactSummary {
    let stage = |inst| match exact_solve(&inst) {
        Ok(c) => Some(c.weight),
        Err(_) => None,
    };
    let optimum = if system.m() + system.p() <= EXACT_SELECT_LIMIT {
        match exact_select(system) {
            Ok(v) => Some(v),
            Err(OracleError::TooLarge { .. }) | Err(_) => None,
        }
    } else {
        None
    };
    ExactSummary {
        accessibility: stage(reduce_accessibility_to_wsc(system).0),
        sensability: stage(reduce_sensability_to_wsc(system).0),
        optimum,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures::{cycle_system, dedicated_diagonal, four_state_example, four_state_example_with_costs};

    fn units(x: i64) -> Cost {
        Cost::from_units(x, Default::default())
    }

    #[test]
    fn example_statuses() {
        let s = four_state_example();
        assert_eq!(check_no_sfm(&s, &Selection::full(3, 2)), SfmStatus::NoSfm);
        assert_eq!(check_no_sfm(&s, &Selection::one_based([3], [2])), SfmStatus::Both);
        assert_eq!(check_no_sfm(&s, &Selection::one_based([3], [1])), SfmStatus::NoSfm);
        let d = s.with_mode(Mode::Discrete);
        assert_eq!(check_no_sfm(&d, &Selection::one_based([3], [1])), SfmStatus::NoSfm);
    }

    #[test]
    fn example_report() {
        let r = select_min_cost_io(&four_state_example(), SelectorOptions::default()).unwrap();
        assert_eq!(r.selection, Selection::one_based([1, 3], [1]));
        assert_eq!(r.total_cost, units(3));
        assert_eq!(r.stage_costs.accessibility, Some(units(1)));
        assert_eq!(r.stage_costs.sensability, Some(units(1)));
        assert_eq!(r.stage_costs.cycle, Some(units(2)));
        assert_eq!(r.lower_bound, units(2));
        assert!(r.no_sfm);
        assert_eq!(r.special_case, SpecialCase::SingleNonBottom);
    }

    #[test]
    fn example_report_exact() {
        let opts = SelectorOptions { exact: true, parallel: false };
        let r = select_min_cost_io(&four_state_example(), opts).unwrap();
        let e = r.exact.unwrap();
        assert_eq!(e.optimum, Some((Selection::one_based([3], [1]), units(2))));
        assert_eq!(r.lower_bound, units(2));
    }

    #[test]
    fn skewed_costs_stage_one() {
        let s = four_state_example_with_costs([1, 1, 100], [1, 1]);
        let r = select_min_cost_io(&s, SelectorOptions::default()).unwrap();
        assert_eq!(r.accessibility.unwrap().chosen, vec![1, 2]);
        assert!(r.no_sfm);
    }

    #[test]
    fn diagonal_uses_every_input() {
        let r = select_min_cost_io(&dedicated_diagonal(4), SelectorOptions::default()).unwrap();
        assert_eq!(r.stage_costs.cycle, Some(Cost::ZERO));
        assert_eq!(r.selection.inputs.len(), 4);
        assert_eq!(r.special_case, SpecialCase::StatePm);
    }

    #[test]
    fn irreducible_cycle() {
        let s = cycle_system(3);
        let r = select_min_cost_io(&s, SelectorOptions::default()).unwrap();
        assert_eq!(r.special_case, SpecialCase::Irreducible);
        assert_eq!(r.selection, Selection::one_based([1], [1]));
        assert_eq!(r.total_cost, units(2));
        assert_eq!(r.lower_bound, units(2));
    }

    #[test]
    fn discrete_skips_matching() {
        let s = four_state_example().with_mode(Mode::Discrete);
        let r = select_min_cost_io(&s, SelectorOptions::default()).unwrap();
        assert!(!r.matching_invoked());
        assert!(r.no_sfm);
        assert_eq!(r.special_case, SpecialCase::Discrete);
    }

    #[test]
    fn infeasible_system_rejected() {
        let mut s = four_state_example();
        s.c = crate::pattern::SparsityPattern::empty(2, 4);
        match select_min_cost_io(&s, SelectorOptions::default()) {
            Err(SelectorError::SystemHasSfms(d)) => assert_eq!(d.status, SfmStatus::Both),
            other => panic!("unexpected {other:?}"),
        }
    }
}
