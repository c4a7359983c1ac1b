//! SCC structure and coverage counts of the four-state example.

use ioselect::fixtures::four_state_example;
use ioselect::graph::Analysis;

fn main() {
    let system = four_state_example();
    let an = Analysis::new(&system);
    let label = |xs: &[usize]| xs.iter().map(|x| format!("x{}", x + 1)).collect::<Vec<_>>().join(",");

    for (c, members) in an.scc.components.iter().enumerate() {
        let mut tags = Vec::new();
        if an.scc.non_top[c] {
            tags.push("non-top");
        }
        if an.scc.non_bottom[c] {
            tags.push("non-bottom");
        }
        println!("scc {c}: {{{}}}{}", label(members), tags.iter().map(|t| format!(" {t}")).collect::<String>());
    }
    println!("mu  (per input)  = {:?}, max {}", an.coverage.mu(), an.coverage.mu_max);
    println!("eta (per output) = {:?}, max {}", an.coverage.eta(), an.coverage.eta_max);
}
