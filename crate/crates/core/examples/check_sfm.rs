//! Diagnose structurally fixed modes for a few candidate selections.

use ioselect::fixtures::four_state_example;
use ioselect::selector::diagnose_sfm;
use ioselect::system::Selection;

fn main() {
    let system = four_state_example();
    let candidates = [
        Selection::one_based([3], [2]),
        Selection::one_based([3], [1]),
        Selection::one_based([1, 3], [1]),
        Selection::one_based([1, 2, 3], []),
    ];
    for sel in candidates {
        let d = diagnose_sfm(&system, &sel).expect("indices in range");
        println!("{sel}: {d}");
    }
}
