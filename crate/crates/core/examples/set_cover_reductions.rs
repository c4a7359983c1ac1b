//! Accessibility as weighted set cover and back.

use ioselect::fixtures::four_state_example;
use ioselect::io::write_wsc;
use ioselect::set_cover::{
    exact_solve, greedy_solve, reduce_accessibility_to_wsc, reduce_sensability_to_wsc, reduce_wsc_to_accessibility,
};

fn main() {
    let system = four_state_example();

    let (acc, _) = reduce_accessibility_to_wsc(&system);
    let (sen, _) = reduce_sensability_to_wsc(&system);
    println!("accessibility instance {}", write_wsc(&acc).trim_end());
    println!("sensability instance   {}", write_wsc(&sen).trim_end());

    for (name, inst) in [("accessibility", &acc), ("sensability", &sen)] {
        let g = greedy_solve(inst).unwrap();
        let e = exact_solve(inst).unwrap();
        let one = |v: &[usize]| v.iter().map(|i| i + 1).collect::<Vec<_>>();
        println!("{name}: greedy {:?} weight {}, exact {:?} weight {}", one(&g.chosen), system.cost_str(g.weight), one(&e.chosen), system.cost_str(e.weight));
    }

    // Any set-cover instance is an accessibility problem in disguise.
    let back = reduce_wsc_to_accessibility(&acc).unwrap();
    println!("set cover -> system: n={} m={} p={}", back.n(), back.m(), back.p());
    let again = reduce_accessibility_to_wsc(&back).0;
    println!("round trip preserves the instance: {}", again.sets == acc.sets && again.weights == acc.weights);
}
