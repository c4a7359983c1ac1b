//! Minimum-cost input/output selection for structured linear systems with
//! complete feedback, so that the closed loop has no structurally fixed
//! modes.
//!
//! The pipeline in [`selector::select_min_cost_io`] covers the non-top and
//! non-bottom linked SCCs greedily, then adds the inputs and outputs of a
//! minimum-cost perfect matching of the system bipartite graph.

pub mod bench;
pub mod cli;
pub mod cost;
pub mod fixtures;
pub mod generator;
pub mod graph;
pub mod io;
pub mod matching;
pub mod oracle;
pub mod pattern;
pub mod scc;
pub mod selector;
pub mod set_cover;
pub mod system;

pub use cost::{Cost, Precision};
pub use pattern::SparsityPattern;
pub use selector::{check_no_sfm, select_min_cost_io, SelectionReport, SelectorOptions, SfmStatus};
pub use system::{Feedback, Mode, Selection, StructuredSystem};
