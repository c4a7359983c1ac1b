//! Select inputs and outputs for an instance file, or the four-state example.
//!
//! cargo run --example select_io -- [instance.json]

use ioselect::fixtures::four_state_example;
use ioselect::io::parse_instance;
use ioselect::{select_min_cost_io, Precision, SelectorOptions};

fn main() {
    let system = match std::env::args().nth(1) {
        Some(path) => {
            let text = std::fs::read_to_string(&path).expect("readable file");
            parse_instance(&text, Precision::default()).expect("valid instance")
        }
        None => four_state_example(),
    };
    let report = select_min_cost_io(&system, SelectorOptions { exact: system.m() + system.p() <= 16, parallel: true })
        .expect("system has no SFMs with every input and output");

    let cost = |c| system.cost_str(c);
    println!("selection    {}", report.selection);
    println!("total cost   {}", cost(report.total_cost));
    if let Some(c) = report.stage_costs.accessibility {
        println!("accessibility stage {}", cost(c));
    }
    if let Some(c) = report.stage_costs.sensability {
        println!("sensability stage   {}", cost(c));
    }
    if let Some(c) = report.stage_costs.cycle {
        println!("cycle stage         {}", cost(c));
    }
    println!("lower bound  {}", cost(report.lower_bound));
    println!("case         {} ({})", report.special_case.tag(), report.guarantee());
    if let Some((sel, c)) = report.exact.as_ref().and_then(|e| e.optimum.clone()) {
        println!("optimum      {sel} at {}", cost(c));
    }
}
