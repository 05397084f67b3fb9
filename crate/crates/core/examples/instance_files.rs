// Generate seeded instances, write them as JSON, read them back, and drive
// the command-line front end in-process.
//
// cargo run --example instance_files

use std::error::Error;

use valuekit::cli;
use valuekit::gen::{generate, GenParams};
use valuekit::instance::{Instance, Kind};
use valuekit::rational::ratio;
use valuekit::{AdditiveValuation, CostVector};

pub fn run_example() -> Result<(), Box<dyn Error>> {
    let mut params = GenParams::new(Kind::Xos, 4, 1);
    params.clauses = 3;
    params.with_costs = true;
    let inst = generate(&params)?;
    let text = inst.to_json();
    print!("gen xos 4 --seed 1 --clauses 3 --with-costs:\n{text}");
    assert_eq!(generate(&params)?.to_json(), text, "same seed, same bytes");
    assert_eq!(Instance::from_json(&text)?, inst);

    // Non-integers are written as "p/q" strings.
    let exact = Instance {
        valuation: AdditiveValuation::new(vec![ratio(5, 2), ratio(1, 3)])?.into(),
        costs: Some(CostVector::new(
            vec![ratio(1, 1), ratio(3, 2)],
            ratio(2, 1),
        )?),
    };
    print!("{}", exact.to_json());

    let dir = std::env::temp_dir().join(format!("valuekit-example-{}", std::process::id()));
    std::fs::create_dir_all(&dir)?;
    let path = dir.join("xos4.json");
    std::fs::write(&path, &text)?;
    let file = path.to_string_lossy().into_owned();
    for args in [
        vec!["certify", &file],
        vec!["demand", &file, "--prices", "1,1,1,1", "--demand-set"],
        vec!["solve", &file, "--budget", "--solver", "greedy"],
        vec!["--json", "eval", &file, "--set", "1,2"],
    ] {
        println!("$ valuekit {}", args.join(" ").replace(&file, "xos4.json"));
        let argv = std::iter::once("valuekit").chain(args.iter().copied());
        let code = cli::run(argv, &mut std::io::stdout(), &mut std::io::stderr());
        assert_eq!(code, 0);
    }
    std::fs::remove_dir_all(&dir)?;
    Ok(())
}

#[allow(dead_code)]
fn main() -> Result<(), Box<dyn Error>> {
    run_example()
}
