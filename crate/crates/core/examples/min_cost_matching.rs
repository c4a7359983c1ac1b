//! The bipartite graph of a system and its minimum-cost perfect matching.

use ioselect::fixtures::four_state_example;
use ioselect::matching::{build_bipartite, extract_io, min_cost_perfect_matching, BipartiteClass};

fn main() {
    let system = four_state_example();
    let g = build_bipartite(&system);
    println!("{} vertices per side", g.side());
    for class in [
        BipartiteClass::State,
        BipartiteClass::Input,
        BipartiteClass::Output,
        BipartiteClass::Feedback,
        BipartiteClass::InputSelf,
        BipartiteClass::OutputSelf,
    ] {
        println!("  {:<4} {} edges", class.tag(), g.count(class));
    }

    let m = min_cost_perfect_matching(&g).expect("perfect matching");
    print!("{}", m.to_edge_list(&g));
    let (sel, cost) = extract_io(&g, &m, &system);
    println!("used by the matching: {sel}, cost {}", system.cost_str(cost));
}
