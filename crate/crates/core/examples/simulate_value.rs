// Recover v(S) using nothing but demand queries, and count them.
//
// cargo run --example simulate_value

use std::error::Error;

use valuekit::fixtures::{add3, xos3};
use valuekit::gen::{generate, GenParams};
use valuekit::instance::Kind;
use valuekit::oracles::{metered, simulate_value_via_demand, simulation_query_bound};
use valuekit::{ItemSet, SetFunction};

pub fn run_example() -> Result<(), Box<dyn Error>> {
    let runs = [
        ("ADD3", add3(), vec![1, 3], 3),
        ("XOS3", xos3(), vec![1, 2], 2),
        ("XOS3", xos3(), vec![], 2),
    ];
    for (name, v, items, vmax) in runs {
        let s = ItemSet::from_items(3, &items)?;
        let sim = simulate_value_via_demand(&v, &s, vmax)?;
        println!(
            "{name} {s}: value {} from {} demand queries (bound {}), true value {}",
            sim.value,
            sim.ledger.demand_queries,
            simulation_query_bound(s.len(), vmax),
            v.value(&s)
        );
    }

    // A generated XOS instance; the oracle is wrapped in a ledger so the
    // caller can audit the queries too.
    let mut params = GenParams::new(Kind::Xos, 8, 5);
    params.vmax = 20;
    let v = generate(&params)?.valuation;
    let oracle = metered(&v);
    let full = ItemSet::full(8)?;
    let sim = simulate_value_via_demand(&oracle, &full, 20)?;
    println!(
        "generated xos, m = 8: value {} (true {}), ledger {:?}, bound {}",
        sim.value,
        v.value(&full),
        oracle.ledger(),
        simulation_query_bound(8, 20)
    );

    // Marginals above vmax are detected rather than silently misreported.
    let err = simulate_value_via_demand(&add3(), &ItemSet::from_items(3, &[1])?, 2).unwrap_err();
    println!("ADD3 {{1}} with vmax 2: {err}");
    Ok(())
}

#[allow(dead_code)]
fn main() -> Result<(), Box<dyn Error>> {
    run_example()
}
