// Run every class check on small valuations and print the evidence:
// witnesses for failures, a supporting clause per set for XOS.
//
// cargo run --example classify_valuations

use std::error::Error;

use valuekit::classify::{certify_xos, classify_all};
use valuekit::fixtures::{add3, sub3, xos3};
use valuekit::rational::int;
use valuekit::{SetFunction, XosValuation};

pub fn run_example() -> Result<(), Box<dyn Error>> {
    for (name, v) in [("ADD3", add3()), ("XOS3", xos3()), ("SUB3", sub3())] {
        println!("{name}:");
        for report in classify_all(&v)? {
            let verdict = if report.holds { "yes" } else { "no" };
            match &report.witness {
                Some(w) => println!("  {:<12} {verdict:<3}  witness {w}", report.property.name()),
                None => println!("  {:<12} {verdict}", report.property.name()),
            }
        }
    }

    // Needs the LP: no single clause is tight on {1,2,3}, yet a
    // fractional combination is.
    let v = XosValuation::new(vec![
        vec![int(2), int(0), int(0)],
        vec![int(0), int(2), int(0)],
        vec![int(1), int(1), int(1)],
    ])?;
    let report = certify_xos(&v)?;
    println!(
        "max of (2,0,0), (0,2,0), (1,1,1) certified xos: {}",
        report.holds
    );
    for clause in &report.certificate {
        let weights: Vec<String> = clause.weights.iter().map(|w| w.to_string()).collect();
        println!(
            "  {:<8} v = {:<2} clause ({})",
            clause.set.to_string(),
            v.value(&clause.set).to_string(),
            weights.join(", ")
        );
    }
    Ok(())
}

#[allow(dead_code)]
fn main() -> Result<(), Box<dyn Error>> {
    run_example()
}
