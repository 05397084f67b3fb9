// Build each valuation representation and ask it value queries.
//
// cargo run --example value_queries

use std::error::Error;

use valuekit::rational::{int, ratio};
use valuekit::setcore::subsets;
use valuekit::valuations::{expand_to_table, marginal};
use valuekit::{
    AdditiveValuation, CoverageValuation, ExplicitTable, ItemSet, SetFunction, Valuation,
    XosValuation,
};

pub fn run_example() -> Result<(), Box<dyn Error>> {
    let additive = AdditiveValuation::new(vec![int(3), int(1), int(2)])?;
    let xos = XosValuation::new(vec![
        vec![int(1), int(1), int(0)],
        vec![int(0), int(0), int(1)],
    ])?;
    // elements are 0-based; items are 1-based
    let coverage = CoverageValuation::new(
        vec![int(2), ratio(1, 2), int(1)],
        vec![vec![0], vec![0, 1], vec![1, 2]],
    )?;
    let table = ExplicitTable::new(3, [0, 1, 1, 1, 1, 1, 1, 2].map(int).to_vec())?;

    let valuations: Vec<(&str, Valuation)> = vec![
        ("additive", additive.into()),
        ("xos", xos.clone().into()),
        ("coverage", coverage.into()),
        ("table", table.into()),
    ];

    print!("{:<5} {:<8}", "bits", "set");
    for (name, _) in &valuations {
        print!(" {name:>9}");
    }
    println!();
    for s in subsets(3)? {
        print!("{:<5} {:<8}", s.bitstring(), s.to_string());
        for (_, v) in &valuations {
            print!(" {:>9}", v.value(&s).to_string());
        }
        println!();
    }

    let s = ItemSet::from_items(3, &[3])?;
    let t = ItemSet::from_items(3, &[1, 2])?;
    println!(
        "xos: v({s} | {t}) = {}, maximizing clause at {t} is #{}",
        marginal(&xos, &s, &t),
        xos.maximizing_clause(&t)
    );

    // any representation can be tabulated over the lex subset order
    let tabulated = expand_to_table(&valuations[2].1)?;
    println!(
        "coverage as a table: {:?}",
        tabulated
            .entries()
            .iter()
            .map(|x| x.to_string())
            .collect::<Vec<_>>()
    );
    Ok(())
}

#[allow(dead_code)]
fn main() -> Result<(), Box<dyn Error>> {
    run_example()
}
