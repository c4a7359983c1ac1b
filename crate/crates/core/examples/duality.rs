//! Sensability of a system is accessibility of its transpose.

use ioselect::fixtures::four_state_example;
use ioselect::graph::{accessible_states, sensable_states};
use std::collections::BTreeSet;

fn main() {
    let system = four_state_example();
    let dual = system.transpose_dual();
    for outputs in [vec![0], vec![1], vec![0, 1]] {
        let set: BTreeSet<usize> = outputs.iter().copied().collect();
        let sensed = sensable_states(&system, &set);
        let reached = accessible_states(&dual, &set);
        let one: Vec<usize> = outputs.iter().map(|j| j + 1).collect();
        println!("outputs {one:?}: sensed {sensed:?}, reached in dual {reached:?}, equal {}", sensed == reached);
    }
}
