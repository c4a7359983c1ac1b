//! Structured-system data model.

use std::collections::BTreeSet;
use std::fmt;

use thiserror::Error;

use crate::cost::{Cost, Precision};
use crate::pattern::SparsityPattern;

/// Feedback information pattern `K` (inputs × outputs).
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum Feedback {
    /// Every output may be fed back to every input.
    Complete,
    Pattern(SparsityPattern),
}

impl Feedback {
    pub fn is_complete(&self) -> bool {
        match self {
            Feedback::Complete => true,
            Feedback::Pattern(p) => p.len() == p.rows() * p.cols(),
        }
    }

    pub fn contains(&self, input: usize, output: usize) -> bool {
        match self {
            Feedback::Complete => true,
            Feedback::Pattern(p) => p.contains(input, output),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default)]
pub enum Mode {
    #[default]
    Continuous,
    Discrete,
}

impl Mode {
    pub fn as_str(self) -> &'static str {
        match self {
            Mode::Continuous => "continuous",
            Mode::Discrete => "discrete",
        }
    }
}

/// The bundle `(A, B, C, K, p_u, p_y, mode)`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct StructuredSystem {
    pub a: SparsityPattern,
    pub b: SparsityPattern,
    pub c: SparsityPattern,
    pub k: Feedback,
    pub cost_u: Vec<Cost>,
    pub cost_y: Vec<Cost>,
    pub mode: Mode,
    pub precision: Precision,
}

/// A choice of inputs `I` and outputs `J`, 0-based.
#[derive(Debug, Clone, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Selection {
    pub inputs: BTreeSet<usize>,
    pub outputs: BTreeSet<usize>,
}

impl Selection {
    pub fn new<I, J>(inputs: I, outputs: J) -> Self
    where
        I: IntoIterator<Item = usize>,
        J: IntoIterator<Item = usize>,
    {
        Selection {
            inputs: inputs.into_iter().collect(),
            outputs: outputs.into_iter().collect(),
        }
    }

    /// Builds a selection from 1-based indices.
    pub fn one_based<I, J>(inputs: I, outputs: J) -> Self
    where
        I: IntoIterator<Item = usize>,
        J: IntoIterator<Item = usize>,
    {
        Self::new(
            inputs.into_iter().map(|i| i.wrapping_sub(1)),
            outputs.into_iter().map(|j| j.wrapping_sub(1)),
        )
    }

    pub fn full(m: usize, p: usize) -> Self {
        Self::new(0..m, 0..p)
    }

    pub fn union(&self, other: &Selection) -> Selection {
        Selection {
            inputs: self.inputs.union(&other.inputs).copied().collect(),
            outputs: self.outputs.union(&other.outputs).copied().collect(),
        }
    }

    pub fn is_subset(&self, other: &Selection) -> bool {
        self.inputs.is_subset(&other.inputs) && self.outputs.is_subset(&other.outputs)
    }

    pub fn inputs_one_based(&self) -> Vec<usize> {
        self.inputs.iter().map(|i| i + 1).collect()
    }

    pub fn outputs_one_based(&self) -> Vec<usize> {
        self.outputs.iter().map(|j| j + 1).collect()
    }

    /// Ordering used for deterministic tie-breaks: sorted input indices
    /// first, then sorted output indices.
    pub fn lex_key(&self) -> (Vec<usize>, Vec<usize>) {
        (
            self.inputs.iter().copied().collect(),
            self.outputs.iter().copied().collect(),
        )
    }
}

impl fmt::Display for Selection {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "I={:?} J={:?}",
            self.inputs_one_based(),
            self.outputs_one_based()
        )
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Violation {
    EmptyState,
    Dimension {
        matrix: &'static str,
        expected: (usize, usize),
        found: (usize, usize),
    },
    CostLength {
        side: &'static str,
        expected: usize,
        found: usize,
    },
    NegativeCost {
        side: &'static str,
        index: usize,
    },
    StarOutOfRange {
        matrix: &'static str,
        row: usize,
        col: usize,
        bad_row: bool,
    },
    CostTotalOverflow,
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let one = |k: usize| k.wrapping_add(1);
        match self {
            Violation::EmptyState => write!(f, "state dimension n must be positive"),
            Violation::Dimension {
                matrix,
                expected,
                found,
            } => write!(
                f,
                "dimension mismatch in {matrix}: expected {}x{}, found {}x{}",
                expected.0, expected.1, found.0, found.1
            ),
            Violation::CostLength {
                side,
                expected,
                found,
            } => write!(f, "cost vector for {side}s has length {found}, expected {expected}"),
            Violation::NegativeCost { side, index } => {
                write!(f, "negative cost at {side} {}", index + 1)
            }
            Violation::StarOutOfRange {
                matrix,
                row,
                col,
                bad_row,
            } => {
                let which = if *bad_row { "row" } else { "column" };
                write!(
                    f,
                    "{which} out of range: star ({}, {}) in {matrix}",
                    one(*row),
                    one(*col)
                )
            }
            Violation::CostTotalOverflow => write!(f, "sum of all costs overflows the cost range"),
        }
    }
}

/// Result of [`StructuredSystem::validate`]; empty means ok.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct ValidationReport {
    pub violations: Vec<Violation>,
}

impl ValidationReport {
    pub fn is_ok(&self) -> bool {
        self.violations.is_empty()
    }

    pub fn messages(&self) -> Vec<String> {
        self.violations.iter().map(ToString::to_string).collect()
    }
}

impl fmt::Display for ValidationReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_ok() {
            return f.write_str("ok");
        }
        f.write_str(&self.messages().join("; "))
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SystemError {
    #[error("invalid system: {0}")]
    Invalid(ValidationReport),
    #[error("input index {0} out of range")]
    InputOutOfRange(usize),
    #[error("output index {0} out of range")]
    OutputOutOfRange(usize),
}

/// A restricted system together with the original indices of the retained
/// inputs and outputs.
#[derive(Debug, Clone)]
pub struct Restricted {
    pub system: StructuredSystem,
    pub input_map: Vec<usize>,
    pub output_map: Vec<usize>,
}

impl StructuredSystem {
    /// Builds a system with complete feedback in continuous mode, then
    /// validates it.
    pub fn new(
        a: SparsityPattern,
        b: SparsityPattern,
        c: SparsityPattern,
        cost_u: Vec<Cost>,
        cost_y: Vec<Cost>,
        precision: Precision,
    ) -> Result<Self, SystemError> {
        let sys = StructuredSystem {
            a,
            b,
            c,
            k: Feedback::Complete,
            cost_u,
            cost_y,
            mode: Mode::Continuous,
            precision,
        };
        sys.into_validated()
    }

    pub fn into_validated(self) -> Result<Self, SystemError> {
        let report = self.validate();
        if report.is_ok() {
            Ok(self)
        } else {
            Err(SystemError::Invalid(report))
        }
    }

    pub fn with_mode(mut self, mode: Mode) -> Self {
        self.mode = mode;
        self
    }

    pub fn n(&self) -> usize {
        self.a.rows()
    }

    pub fn m(&self) -> usize {
        self.b.cols()
    }

    pub fn p(&self) -> usize {
        self.c.rows()
    }

    pub fn validate(&self) -> ValidationReport {
        let mut v = Vec::new();
        let (n, m, p) = (self.n(), self.m(), self.p());
        if n == 0 {
            v.push(Violation::EmptyState);
        }
        let mut dim = |matrix, expected: (usize, usize), pat: &SparsityPattern| {
            let found = (pat.rows(), pat.cols());
            if found != expected {
                v.push(Violation::Dimension {
                    matrix,
                    expected,
                    found,
                });
            }
        };
        dim("A", (n, n), &self.a);
        dim("B", (n, m), &self.b);
        dim("C", (p, n), &self.c);
        if let Feedback::Pattern(k) = &self.k {
            dim("K", (m, p), k);
        }
        if self.cost_u.len() != m {
            v.push(Violation::CostLength {
                side: "input",
                expected: m,
                found: self.cost_u.len(),
            });
        }
        if self.cost_y.len() != p {
            v.push(Violation::CostLength {
                side: "output",
                expected: p,
                found: self.cost_y.len(),
            });
        }
        for (index, c) in self.cost_u.iter().enumerate() {
            if c.is_negative() {
                v.push(Violation::NegativeCost {
                    side: "input",
                    index,
                });
            }
        }
        for (index, c) in self.cost_y.iter().enumerate() {
            if c.is_negative() {
                v.push(Violation::NegativeCost {
                    side: "output",
                    index,
                });
            }
        }
        let mut patterns: Vec<(&'static str, &SparsityPattern)> =
            vec![("A", &self.a), ("B", &self.b), ("C", &self.c)];
        if let Feedback::Pattern(k) = &self.k {
            patterns.push(("K", k));
        }
        for (matrix, pat) in patterns {
            for (row, col) in pat.out_of_range() {
                v.push(Violation::StarOutOfRange {
                    matrix,
                    row,
                    col,
                    bad_row: row >= pat.rows(),
                });
            }
        }
        let total = self
            .cost_u
            .iter()
            .chain(&self.cost_y)
            .try_fold(Cost::ZERO, |acc, &c| acc.checked_add(c));
        // Matching costs pair an input with an output, so twice the total
        // must also fit.
        if total.and_then(|t| t.checked_add(t)).is_none() {
            v.push(Violation::CostTotalOverflow);
        }
        ValidationReport { violations: v }
    }

    pub fn check_selection(&self, sel: &Selection) -> Result<(), SystemError> {
        if let Some(&i) = sel.inputs.iter().find(|&&i| i >= self.m()) {
            return Err(SystemError::InputOutOfRange(i.wrapping_add(1)));
        }
        if let Some(&j) = sel.outputs.iter().find(|&&j| j >= self.p()) {
            return Err(SystemError::OutputOutOfRange(j.wrapping_add(1)));
        }
        Ok(())
    }

    /// `(A, B_I, C_J, K_{I×J})` with costs restricted. Retained indices keep
    /// their relative order.
    pub fn restrict(&self, sel: &Selection) -> Result<Restricted, SystemError> {
        self.check_selection(sel)?;
        let input_map: Vec<usize> = sel.inputs.iter().copied().collect();
        let output_map: Vec<usize> = sel.outputs.iter().copied().collect();
        let states: Vec<usize> = (0..self.n()).collect();
        let k = match &self.k {
            Feedback::Complete => Feedback::Complete,
            Feedback::Pattern(k) => Feedback::Pattern(k.restrict(&input_map, &output_map)),
        };
        let system = StructuredSystem {
            a: self.a.clone(),
            b: self.b.restrict(&states, &input_map),
            c: self.c.restrict(&output_map, &states),
            k,
            cost_u: input_map.iter().map(|&i| self.cost_u[i]).collect(),
            cost_y: output_map.iter().map(|&j| self.cost_y[j]).collect(),
            mode: self.mode,
            precision: self.precision,
        };
        Ok(Restricted {
            system,
            input_map,
            output_map,
        })
    }

    /// `p(I, J) = Σ_{i∈I} p_u(i) + Σ_{j∈J} p_y(j)`, exact.
    pub fn selection_cost(&self, sel: &Selection) -> Cost {
        let inputs: Cost = sel.inputs.iter().map(|&i| self.cost_u[i]).sum();
        let outputs: Cost = sel.outputs.iter().map(|&j| self.cost_y[j]).sum();
        inputs + outputs
    }

    pub fn input_cost(&self, inputs: &BTreeSet<usize>) -> Cost {
        inputs.iter().map(|&i| self.cost_u[i]).sum()
    }

    pub fn output_cost(&self, outputs: &BTreeSet<usize>) -> Cost {
        outputs.iter().map(|&j| self.cost_y[j]).sum()
    }

    /// The dual system `(Aᵀ, Cᵀ, p_y)`: outputs become inputs with the same
    /// indices and costs, the output side is empty. Accessibility of the
    /// dual is sensability of `self`.
    pub fn transpose_dual(&self) -> StructuredSystem {
        let n = self.n();
        StructuredSystem {
            a: self.a.transpose(),
            b: self.c.transpose(),
            c: SparsityPattern::empty(0, n),
            k: Feedback::Complete,
            cost_u: self.cost_y.clone(),
            cost_y: Vec::new(),
            mode: self.mode,
            precision: self.precision,
        }
    }

    pub fn cost_str(&self, c: Cost) -> String {
        c.to_decimal(self.precision)
    }
}
