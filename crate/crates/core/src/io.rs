//! JSON file formats: instances, set-cover instances and selection reports.
//! Indices are 1-based and costs are decimal strings in every format.

use std::fmt::Write as _;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::cost::{Cost, CostError, Precision};
use crate::pattern::SparsityPattern;
use crate::selector::{SelectionReport, SfmDiagnosis};
use crate::set_cover::{Cover, GreedyStep, SetCoverError, WeightedSetCoverInstance};
use crate::system::{Feedback, Mode, Selection, StructuredSystem, ValidationReport};

#[derive(Debug, Error)]
pub enum IoError {
    #[error("parse error: {0}")]
    Json(#[from] serde_json::Error),
    #[error("field {field}: {message}")]
    Field { field: String, message: String },
    #[error("invalid system: {0}")]
    Invalid(ValidationReport),
    #[error("invalid set-cover instance: {0}")]
    SetCover(#[from] SetCoverError),
}

fn field_err(field: impl Into<String>, message: impl ToString) -> IoError {
    IoError::Field {
        field: field.into(),
        message: message.to_string(),
    }
}

/// A cost literal; JSON numbers are accepted and read through their
/// decimal text.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(untagged)]
enum Literal {
    Text(String),
    Number(serde_json::Number),
}

impl Literal {
    fn parse(&self, field: &str, index: usize, precision: Precision) -> Result<Cost, IoError> {
        let text = match self {
            Literal::Text(s) => s.clone(),
            Literal::Number(n) => n.to_string(),
        };
        Cost::parse(&text, precision).map_err(|e: CostError| field_err(format!("{field}[{}]", index + 1), e))
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(untagged)]
enum KField {
    Token(String),
    Pairs(Vec<[usize; 2]>),
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct InstanceFile {
    n: usize,
    m: usize,
    p: usize,
    #[serde(rename = "A")]
    a: Vec<[usize; 2]>,
    #[serde(rename = "B")]
    b: Vec<[usize; 2]>,
    #[serde(rename = "C")]
    c: Vec<[usize; 2]>,
    #[serde(rename = "K", default = "complete_token")]
    k: KField,
    cost_u: Vec<Literal>,
    cost_y: Vec<Literal>,
    #[serde(default = "continuous_token")]
    mode: String,
}

fn complete_token() -> KField {
    KField::Token("complete".into())
}

fn continuous_token() -> String {
    "continuous".into()
}

fn pairs(stars: &[[usize; 2]]) -> impl Iterator<Item = (usize, usize)> + '_ {
    stars.iter().map(|&[r, c]| (r, c))
}

/// Parses and validates an instance file.
pub fn parse_instance(text: &str, precision: Precision) -> Result<StructuredSystem, IoError> {
    let f: InstanceFile = serde_json::from_str(text)?;
    let k = match &f.k {
        KField::Token(t) if t == "complete" => Feedback::Complete,
        KField::Token(t) => return Err(field_err("K", format!("expected \"complete\" or a pair list, got \"{t}\""))),
        KField::Pairs(ps) => Feedback::Pattern(SparsityPattern::from_one_based(f.m, f.p, pairs(ps))),
    };
    let mode = match f.mode.as_str() {
        "continuous" => Mode::Continuous,
        "discrete" => Mode::Discrete,
        other => return Err(field_err("mode", format!("expected \"continuous\" or \"discrete\", got \"{other}\""))),
    };
    let cost_u = f
        .cost_u
        .iter()
        .enumerate()
        .map(|(i, l)| l.parse("cost_u", i, precision))
        .collect::<Result<Vec<_>, _>>()?;
    let cost_y = f
        .cost_y
        .iter()
        .enumerate()
        .map(|(i, l)| l.parse("cost_y", i, precision))
        .collect::<Result<Vec<_>, _>>()?;
    let system = StructuredSystem {
        a: SparsityPattern::from_one_based(f.n, f.n, pairs(&f.a)),
        b: SparsityPattern::from_one_based(f.n, f.m, pairs(&f.b)),
        c: SparsityPattern::from_one_based(f.p, f.n, pairs(&f.c)),
        k,
        cost_u,
        cost_y,
        mode,
        precision,
    };
    let report = system.validate();
    if report.is_ok() {
        Ok(system)
    } else {
        Err(IoError::Invalid(report))
    }
}

/// Single-line instance JSON followed by a newline.
pub fn write_instance(system: &StructuredSystem) -> String {
    let costs = |cs: &[Cost]| cs.iter().map(|c| Literal::Text(system.cost_str(*c))).collect();
    let f = InstanceFile {
        n: system.n(),
        m: system.m(),
        p: system.p(),
        a: system.a.one_based_stars(),
        b: system.b.one_based_stars(),
        c: system.c.one_based_stars(),
        k: match &system.k {
            Feedback::Complete => complete_token(),
            Feedback::Pattern(k) => KField::Pairs(k.one_based_stars()),
        },
        cost_u: costs(&system.cost_u),
        cost_y: costs(&system.cost_y),
        mode: system.mode.as_str().into(),
    };
    let mut s = serde_json::to_string(&f).expect("instance serializes");
    s.push('\n');
    s
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct WscFile {
    #[serde(rename = "N")]
    universe: usize,
    sets: Vec<Vec<usize>>,
    weights: Vec<Literal>,
}

pub fn parse_wsc(text: &str, precision: Precision) -> Result<WeightedSetCoverInstance, IoError> {
    let f: WscFile = serde_json::from_str(text)?;
    let mut sets = Vec::with_capacity(f.sets.len());
    for (i, s) in f.sets.iter().enumerate() {
        if s.contains(&0) {
            return Err(field_err(format!("sets[{}]", i + 1), "elements are 1-based"));
        }
        sets.push(s.iter().map(|&e| e - 1).collect());
    }
    let weights = f
        .weights
        .iter()
        .enumerate()
        .map(|(i, l)| l.parse("weights", i, precision))
        .collect::<Result<Vec<_>, _>>()?;
    Ok(WeightedSetCoverInstance::new(f.universe, sets, weights, precision)?)
}

pub fn write_wsc(inst: &WeightedSetCoverInstance) -> String {
    let f = WscFile {
        universe: inst.universe_size,
        sets: inst.sets.iter().map(|s| s.iter().map(|e| e + 1).collect()).collect(),
        weights: inst
            .weights
            .iter()
            .map(|w| Literal::Text(w.to_decimal(inst.precision)))
            .collect(),
    };
    let mut s = serde_json::to_string(&f).expect("set cover serializes");
    s.push('\n');
    s
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SelectionJson {
    pub inputs: Vec<usize>,
    pub outputs: Vec<usize>,
}

impl From<&Selection> for SelectionJson {
    fn from(s: &Selection) -> Self {
        SelectionJson {
            inputs: s.inputs_one_based(),
            outputs: s.outputs_one_based(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct StageCostsJson {
    pub accessibility: Option<String>,
    pub sensability: Option<String>,
    pub cycle: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct OptimumJson {
    pub selection: SelectionJson,
    pub cost: String,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ExactJson {
    pub accessibility: Option<String>,
    pub sensability: Option<String>,
    pub optimum: Option<OptimumJson>,
    /// `total_cost / optimum`, 1 when the optimum is 0.
    pub ratio: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GreedyStepJson {
    /// 1-based set index (input or output).
    pub set: usize,
    /// Newly covered SCCs, each as its 1-based member states.
    pub covers: Vec<Vec<usize>>,
    pub weight: String,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct WitnessJson {
    pub state: usize,
    /// `[output, input]` of a feedback edge in the state's SCC.
    pub feedback: Option<[usize; 2]>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TracesJson {
    pub accessibility: Vec<GreedyStepJson>,
    pub sensability: Vec<GreedyStepJson>,
    pub matching: Vec<String>,
    pub state_witnesses: Vec<WitnessJson>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ReportJson {
    pub selection: SelectionJson,
    pub total_cost: String,
    pub stage_costs: StageCostsJson,
    pub lower_bound: String,
    pub special_case: String,
    pub special_cases: Vec<String>,
    pub guarantee: String,
    pub no_sfm: bool,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub exact: Option<ExactJson>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub traces: Option<TracesJson>,
}

fn steps(trace: &[GreedyStep], sccs: &[Vec<usize>], precision: Precision) -> Vec<GreedyStepJson> {
    trace
        .iter()
        .map(|s| GreedyStepJson {
            set: s.set + 1,
            covers: s
                .newly_covered
                .iter()
                .map(|&e| sccs[e].iter().map(|x| x + 1).collect())
                .collect(),
            weight: s.weight.to_decimal(precision),
        })
        .collect()
}

pub fn report_json(report: &SelectionReport, precision: Precision, traces: bool) -> ReportJson {
    let dec = |c: Cost| c.to_decimal(precision);
    let exact = report.exact.as_ref().map(|e| ExactJson {
        accessibility: e.accessibility.map(dec),
        sensability: e.sensability.map(dec),
        optimum: e.optimum.as_ref().map(|(sel, c)| OptimumJson {
            selection: sel.into(),
            cost: dec(*c),
        }),
        ratio: e.optimum.as_ref().map(|(_, c)| ratio(report.total_cost, *c)),
    });
    let traces = traces.then(|| TracesJson {
        accessibility: steps(report.accessibility_trace(), &report.non_top_sccs, precision),
        sensability: steps(report.sensability_trace(), &report.non_bottom_sccs, precision),
        matching: report.cycle.as_ref().map(|c| c.edges.clone()).unwrap_or_default(),
        state_witnesses: report
            .state_witnesses
            .iter()
            .enumerate()
            .map(|(x, w)| WitnessJson {
                state: x + 1,
                feedback: w.map(|(o, i)| [o + 1, i + 1]),
            })
            .collect(),
    });
    ReportJson {
        selection: (&report.selection).into(),
        total_cost: dec(report.total_cost),
        stage_costs: StageCostsJson {
            accessibility: report.stage_costs.accessibility.map(dec),
            sensability: report.stage_costs.sensability.map(dec),
            cycle: report.stage_costs.cycle.map(dec),
        },
        lower_bound: dec(report.lower_bound),
        special_case: report.special_case.tag().into(),
        special_cases: report.special_cases.iter().map(|t| t.tag().to_string()).collect(),
        guarantee: report.guarantee().into(),
        no_sfm: report.no_sfm,
        exact,
        traces,
    }
}

/// `algo / optimum`, with 0/0 read as 1.
pub fn ratio(algo: Cost, optimum: Cost) -> f64 {
    if optimum.raw() == 0 {
        1.0
    } else {
        algo.raw() as f64 / optimum.raw() as f64
    }
}

fn list(xs: &[usize]) -> String {
    if xs.is_empty() {
        return "-".into();
    }
    xs.iter().map(ToString::to_string).collect::<Vec<_>>().join(",")
}

pub fn report_table(r: &ReportJson) -> String {
    let mut out = String::new();
    let opt = |c: &Option<String>| c.clone().unwrap_or_else(|| "skipped".into());
    let _ = writeln!(out, "inputs        {}", list(&r.selection.inputs));
    let _ = writeln!(out, "outputs       {}", list(&r.selection.outputs));
    let _ = writeln!(out, "total cost    {}", r.total_cost);
    let _ = writeln!(out, "  access.     {}", opt(&r.stage_costs.accessibility));
    let _ = writeln!(out, "  sens.       {}", opt(&r.stage_costs.sensability));
    let _ = writeln!(out, "  cycles      {}", opt(&r.stage_costs.cycle));
    let _ = writeln!(out, "lower bound   {}", r.lower_bound);
    let _ = writeln!(out, "case          {} ({})", r.special_case, r.special_cases.join(", "));
    let _ = writeln!(out, "guarantee     {}", r.guarantee);
    let _ = writeln!(out, "no SFM        {}", r.no_sfm);
    if let Some(e) = &r.exact {
        if let Some(o) = &e.optimum {
            let _ = writeln!(
                out,
                "optimum       {} (inputs {}, outputs {})",
                o.cost,
                list(&o.selection.inputs),
                list(&o.selection.outputs)
            );
        }
        if let Some(q) = e.ratio {
            let _ = writeln!(out, "ratio         {q:.4}");
        }
    }
    if let Some(t) = &r.traces {
        for (name, st) in [("access.", &t.accessibility), ("sens.", &t.sensability)] {
            for s in st {
                let covers: Vec<String> = s.covers.iter().map(|c| format!("{{{}}}", list(c))).collect();
                let _ = writeln!(out, "{name:<9} pick {} weight {} covers {}", s.set, s.weight, covers.join(" "));
            }
        }
        for e in &t.matching {
            let _ = writeln!(out, "matching  {e}");
        }
    }
    out
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CheckJson {
    pub no_sfm: bool,
    pub status: String,
    pub reason: String,
    pub mode: String,
    pub selection: SelectionJson,
    pub type1_states: Vec<usize>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub type2_witness: Option<HallJson>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct HallJson {
    pub left: Vec<String>,
    pub neighbors: Vec<String>,
}

pub fn check_json(d: &SfmDiagnosis, sel: &Selection, mode: Mode) -> CheckJson {
    CheckJson {
        no_sfm: d.status.is_free(),
        status: match d.status {
            crate::selector::SfmStatus::NoSfm => "no_sfm",
            crate::selector::SfmStatus::HasType1Sfm => "type1",
            crate::selector::SfmStatus::HasType2Sfm => "type2",
            crate::selector::SfmStatus::Both => "both",
        }
        .into(),
        reason: d.status.reason().into(),
        mode: mode.as_str().into(),
        selection: sel.into(),
        type1_states: d.type1_states.iter().map(|x| x + 1).collect(),
        type2_witness: d.type2_witness.as_ref().map(|w| HallJson {
            left: w.left.clone(),
            neighbors: w.neighbors.clone(),
        }),
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CoverJson {
    pub cover: Vec<usize>,
    pub weight: String,
}

impl CoverJson {
    pub fn new(c: &Cover, precision: Precision) -> Self {
        CoverJson {
            cover: c.chosen.iter().map(|i| i + 1).collect(),
            weight: c.weight.to_decimal(precision),
        }
    }
}
