// Demand queries: closed forms for additive and XOS valuations, brute force
// for everything else, and pluggable tie rules.
//
// cargo run --example demand_queries

use std::error::Error;

use valuekit::fixtures::{add3, sub3, xos3};
use valuekit::oracles::{demand, BruteDemand, DemandEngine, DemandOracle, PriceVector, TieRule};
use valuekit::rational::parse_rational_list;

pub fn run_example() -> Result<(), Box<dyn Error>> {
    let cases = [
        ("ADD3", add3(), "2,1,1"),
        ("XOS3", xos3(), "1,1/2,1/2"),
        ("XOS3", xos3(), "-1,2,0"),
        ("SUB3", sub3(), "1/2,1/2,1/2"),
    ];
    for (name, v, prices) in &cases {
        let p = PriceVector::new(parse_rational_list(prices)?)?;
        let (answer, engine) = demand(v, &p, DemandEngine::Auto, true)?;
        let (brute, _) = demand(v, &p, DemandEngine::Brute, true)?;
        assert_eq!(answer, brute);
        let set: Vec<String> = answer
            .demand_set
            .unwrap_or_default()
            .iter()
            .map(|s| s.to_string())
            .collect();
        println!(
            "{name} at ({prices}): {} utility {} via {}; all maximizers {}",
            answer.bundle,
            answer.utility,
            engine.name(),
            set.join(" ")
        );
    }

    // The XOS3 demand set above has three bundles; other tie rules pick
    // different ones.
    let v = xos3();
    let p = PriceVector::new(parse_rational_list("1,1/2,1/2")?)?;
    for rule in TieRule::ALL {
        let oracle = BruteDemand {
            valuation: &v,
            rule,
        };
        println!("{rule:?}: {}", oracle.demand_query(&p)?.bundle);
    }
    Ok(())
}

#[allow(dead_code)]
fn main() -> Result<(), Box<dyn Error>> {
    run_example()
}
