//! Structures the selector recognizes and what each guarantees.

use ioselect::fixtures::{cycle_system, dedicated_diagonal, four_state_example};
use ioselect::system::Mode;
use ioselect::{select_min_cost_io, SelectorOptions, StructuredSystem};

fn show(name: &str, system: &StructuredSystem) {
    let r = select_min_cost_io(system, SelectorOptions::default()).unwrap();
    let tags: Vec<&str> = r.special_cases.iter().map(|c| c.tag()).collect();
    println!(
        "{name:<16} {:<32} cost {:<4} lower bound {:<4} matching {:<5} [{}] {}",
        r.selection.to_string(),
        system.cost_str(r.total_cost),
        system.cost_str(r.lower_bound),
        r.matching_invoked(),
        tags.join(","),
        r.guarantee()
    );
}

fn main() {
    show("irreducible", &cycle_system(5));
    show("diagonal", &dedicated_diagonal(4));
    show("example", &four_state_example());
    show("example discrete", &four_state_example().with_mode(Mode::Discrete));
}
