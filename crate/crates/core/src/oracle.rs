//! Brute-force optimum over all input/output selections, for desk-scale
//! verification.

use thiserror::Error;

use crate::cost::Cost;
use crate::selector::{check_no_sfm, diagnose_sfm, SfmDiagnosis};
use crate::system::{Selection, StructuredSystem};

/// Largest `m + p` accepted by [`exact_select`].
pub const EXACT_SELECT_LIMIT: usize = 16;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum OracleError {
    #[error("exhaustive search limited to m + p <= {EXACT_SELECT_LIMIT}, got {got}")]
    TooLarge { got: usize },
    #[error("no selection avoids structurally fixed modes: {0}")]
    Infeasible(SfmDiagnosis),
}

/// Minimum-cost selection with no SFMs. Ties go to the lexicographically
/// smallest `(I, J)` as sorted index lists.
pub fn exact_select(system: &StructuredSystem) -> Result<(Selection, Cost), OracleError> {
    exact_select_where(system, |s, sel| check_no_sfm(s, sel).is_free())
}

/// [`exact_select`] under an arbitrary feasibility predicate.
pub fn exact_select_where<F>(system: &StructuredSystem, feasible: F) -> Result<(Selection, Cost), OracleError>
where
    F: Fn(&StructuredSystem, &Selection) -> bool,
{
    let (m, p) = (system.m(), system.p());
    if m + p > EXACT_SELECT_LIMIT {
        return Err(OracleError::TooLarge { got: m + p });
    }
    let full = Selection::full(m, p);
    if !feasible(system, &full) {
        let d = diagnose_sfm(system, &full).expect("full selection is in range");
        return Err(OracleError::Infeasible(d));
    }
    let mut best: Option<(Selection, Cost)> = None;
    for mask in 0u32..(1 << (m + p)) {
        let sel = Selection::new(
            (0..m).filter(|&i| mask >> i & 1 == 1),
            (0..p).filter(|&j| mask >> (m + j) & 1 == 1),
        );
        let cost = system.selection_cost(&sel);
        if let Some((bs, bc)) = &best {
            if cost > *bc || (cost == *bc && sel.lex_key() >= bs.lex_key()) {
                continue;
            }
        }
        if feasible(system, &sel) {
            best = Some((sel, cost));
        }
    }
    Ok(best.expect("full selection is feasible"))
}
