//! Small hand-written systems used by the examples, tests and docs.

use crate::cost::{Cost, Precision};
use crate::pattern::SparsityPattern;
use crate::system::{Feedback, Mode, StructuredSystem};

/// Four states, three inputs, two outputs, complete feedback, unit costs.
///
/// ```text
///     A = * * 0 0     B = * 0 *     C = 0 0 * 0
///         0 * 0 0         0 * *         * 0 0 0
///         * * 0 *         * * 0
///         0 0 0 *         0 0 *
/// ```
///
/// Every state is its own SCC; `{x2}` and `{x4}` are the non-top linked
/// SCCs and `{x3}` is the only non-bottom linked SCC.
pub fn four_state_example() -> StructuredSystem {
    let precision = Precision::default();
    let a = SparsityPattern::from_one_based(
        4,
        4,
        [(1, 1), (1, 2), (2, 2), (3, 1), (3, 2), (3, 4), (4, 4)],
    );
    let b = SparsityPattern::from_one_based(
        4,
        3,
        [(1, 1), (1, 3), (2, 2), (2, 3), (3, 1), (3, 2), (4, 3)],
    );
    let c = SparsityPattern::from_one_based(2, 4, [(1, 3), (2, 1)]);
    StructuredSystem {
        a,
        b,
        c,
        k: Feedback::Complete,
        cost_u: vec![Cost::from_units(1, precision); 3],
        cost_y: vec![Cost::from_units(1, precision); 2],
        mode: Mode::Continuous,
        precision,
    }
}

/// [`four_state_example`] with the given whole-unit costs.
pub fn four_state_example_with_costs(cost_u: [i64; 3], cost_y: [i64; 2]) -> StructuredSystem {
    let mut s = four_state_example();
    s.cost_u = cost_u.iter().map(|&c| Cost::from_units(c, s.precision)).collect();
    s.cost_y = cost_y.iter().map(|&c| Cost::from_units(c, s.precision)).collect();
    s
}

/// `n` states on the directed cycle `x1 → x2 → … → xn → x1`, one input on
/// `x1`, one output on `xn`, unit costs.
pub fn cycle_system(n: usize) -> StructuredSystem {
    let precision = Precision::default();
    let a = SparsityPattern::from_stars(n, n, (0..n).map(|j| ((j + 1) % n, j)));
    StructuredSystem {
        a,
        b: SparsityPattern::from_stars(n, 1, [(0, 0)]),
        c: SparsityPattern::from_stars(1, n, [(0, n - 1)]),
        k: Feedback::Complete,
        cost_u: vec![Cost::from_units(1, precision)],
        cost_y: vec![Cost::from_units(1, precision)],
        mode: Mode::Continuous,
        precision,
    }
}

/// Diagonal `A`, dedicated inputs and outputs (`B = C = I`), unit costs.
pub fn dedicated_diagonal(n: usize) -> StructuredSystem {
    let precision = Precision::default();
    StructuredSystem {
        a: SparsityPattern::diagonal(n),
        b: SparsityPattern::diagonal(n),
        c: SparsityPattern::diagonal(n),
        k: Feedback::Complete,
        cost_u: vec![Cost::from_units(1, precision); n],
        cost_y: vec![Cost::from_units(1, precision); n],
        mode: Mode::Continuous,
        precision,
    }
}
