// Maximize under a cardinality or a budget constraint, exactly and greedily,
// and compare the query ledgers.
//
// cargo run --example solve_constrained

use std::error::Error;

use valuekit::fixtures::{add3, xos3};
use valuekit::gen::{generate, GenParams};
use valuekit::instance::Kind;
use valuekit::optimize::{
    greedy_cardinality, greedy_knapsack, solve_cardinality_exact, solve_knapsack_exact,
    CardinalityMode, SolveResult,
};
use valuekit::rational::int;
use valuekit::CostVector;

fn show(label: &str, r: &SolveResult) {
    println!(
        "  {label:<22} {:<12} objective {:<4} ({} value queries)",
        r.chosen.to_string(),
        r.objective.to_string(),
        r.ledger.value_queries
    );
}

pub fn run_example() -> Result<(), Box<dyn Error>> {
    println!("XOS3, k = 2:");
    show(
        "exact",
        &solve_cardinality_exact(&xos3(), 2, CardinalityMode::Exactly)?,
    );
    show("greedy", &greedy_cardinality(&xos3(), 2)?);

    println!("ADD3, costs (2,1,3), budget 3:");
    let costs = CostVector::new(vec![int(2), int(1), int(3)], int(3))?;
    show("exact", &solve_knapsack_exact(&add3(), &costs)?);
    show("greedy", &greedy_knapsack(&add3(), &costs)?);

    let mut params = GenParams::new(Kind::Coverage, 12, 3);
    params.with_costs = true;
    let inst = generate(&params)?;
    let v = &inst.valuation;
    let costs = inst.costs.as_ref().expect("generated with costs");
    println!("coverage, m = 12, budget {}:", costs.budget());
    for k in [2, 4, 6] {
        let exact = solve_cardinality_exact(v, k, CardinalityMode::Exactly)?;
        let greedy = greedy_cardinality(v, k)?;
        show(&format!("exact k = {k}"), &exact);
        show(&format!("greedy k = {k}"), &greedy);
    }
    let exact = solve_knapsack_exact(v, costs)?;
    let greedy = greedy_knapsack(v, costs)?;
    show("exact knapsack", &exact);
    show("greedy knapsack", &greedy);
    println!("  greedy/exact = {}", &greedy.objective / &exact.objective);
    Ok(())
}

#[allow(dead_code)]
fn main() -> Result<(), Box<dyn Error>> {
    run_example()
}
