//! Acceptance suite. Runs without the libtest harness so every criterion
//! prints exactly one PASS/FAIL line; exits non-zero if any fails.

mod common;

use std::process::{Command, ExitCode};
use std::sync::atomic::{AtomicU64, Ordering};
use std::time::Instant;

use num_traits::Zero;
use valuekit::classify::{
    certify_xos, check_additive, check_monotone, check_subadditive, check_submodular, Witness,
};
use valuekit::fixtures::{sub3, xos3};
use valuekit::gen::Draws;
use valuekit::optimize::{
    greedy_cardinality, greedy_knapsack, solve_cardinality_exact, solve_knapsack_exact,
    CardinalityMode,
};
use valuekit::oracles::{
    demand_additive, demand_bruteforce, demand_xos, metered, simulate_value_via_demand,
    simulation_query_bound, BruteDemand, DemandOracle, PriceVector, TieRule, ValueOracle,
};
use valuekit::rational::{int, ratio};
use valuekit::{CostVector, GroundSet, ItemSet, Rational, SetFunction, Valuation};

type Check = Result<String, String>;
type Criterion = (&'static str, fn() -> Check);

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

/// Price vectors for a demand test: random integers and halves, plus
/// vectors crafted to put several bundles on the same utility.
fn price_vectors(
    reference: &[Vec<Rational>],
    m: usize,
    count: usize,
    d: &mut Draws,
) -> Vec<PriceVector> {
    let mut out = Vec::with_capacity(count);
    while out.len() < count {
        let style = out.len() % 6;
        let prices: Vec<Rational> = match style {
            // exact tie: price equal to a clause entry
            0 => {
                let row = &reference[d.below(reference.len() as u64) as usize];
                row.clone()
            }
            // tie on some items, zero on others
            1 => {
                let row = &reference[d.below(reference.len() as u64) as usize];
                row.iter()
                    .map(|w| if d.below(2) == 0 { w.clone() } else { int(0) })
                    .collect()
            }
            2 => (0..m).map(|_| int(d.between(0, 12) as i64)).collect(),
            3 => (0..m).map(|_| ratio(d.between(0, 24) as i64, 2)).collect(),
            // all prices equal
            4 => {
                let p = int(d.between(0, 10) as i64);
                vec![p; m]
            }
            _ => (0..m)
                .map(|_| ratio(d.between(0, 60) as i64, d.between(1, 6) as i64))
                .collect(),
        };
        out.push(PriceVector::new(prices).unwrap());
    }
    out
}

fn demand_equivalence() -> Check {
    let instances = 50;
    let prices_per_instance = 1000;
    let mut d = Draws::new(2024);
    let mut compared = 0u64;
    let mut ties = 0u64;
    for i in 0..instances {
        let m = 3 + (i % 8) as usize;
        let add = common::additive(m, 100 + i, 10);
        let add = common::as_additive(&add);
        let rows = vec![add.weights().to_vec()];
        for p in price_vectors(&rows, m, prices_per_instance, &mut d) {
            let fast = demand_additive(add, &p).unwrap();
            let brute = demand_bruteforce(add, &p, false).unwrap();
            ensure(fast == brute, || {
                format!(
                    "additive m={m} prices {:?}: {} vs brute {}",
                    p.prices(),
                    fast.bundle,
                    brute.bundle
                )
            })?;
            compared += 1;
            if p.prices().iter().zip(add.weights()).any(|(a, b)| a == b) {
                ties += 1;
            }
        }

        let x = common::xos(m, 1 + (i % 4) as usize, 200 + i, 10);
        let x = common::as_xos(&x);
        for p in price_vectors(x.clauses(), m, prices_per_instance, &mut d) {
            let fast = demand_xos(x, &p).unwrap();
            let brute = demand_bruteforce(x, &p, false).unwrap();
            ensure(fast == brute, || {
                format!(
                    "xos m={m} prices {:?}: {} vs brute {}",
                    p.prices(),
                    fast.bundle,
                    brute.bundle
                )
            })?;
            compared += 1;
            let maximizers = demand_bruteforce(x, &p, true)
                .unwrap()
                .demand_set
                .unwrap()
                .len();
            if maximizers > 1 {
                ties += 1;
            }
        }
    }
    Ok(format!(
        "{instances} additive + {instances} xos instances, {compared} price vectors, {ties} with exact ties"
    ))
}

fn class_inclusion() -> Check {
    let instances = 120u64;
    let mut counts = [0u32; 3];
    for i in 0..instances {
        let m = 2 + (i % 7) as usize;
        let v = common::mixed(m, i);
        let additive = check_additive(&v).unwrap().holds;
        let submodular = check_submodular(&v).unwrap().holds;
        let monotone = check_monotone(&v).unwrap().holds;
        let xos = certify_xos(&v).unwrap();
        let subadditive = check_subadditive(&v).unwrap().holds;
        ensure(!additive || submodular, || {
            format!("instance {i}: additive but not submodular")
        })?;
        ensure(!(monotone && submodular) || xos.holds, || {
            format!("instance {i}: monotone submodular but xos certification failed")
        })?;
        ensure(!xos.holds || subadditive, || {
            format!("instance {i}: xos but not subadditive")
        })?;
        if xos.holds {
            for clause in &xos.certificate {
                let set = clause.set;
                ensure(clause.value(&set) == v.value(&set), || {
                    format!("instance {i}: loose clause at {set}")
                })?;
                for t in valuekit::setcore::subsets(m).unwrap() {
                    ensure(clause.value(&t) <= v.value(&t), || {
                        format!("instance {i}: clause for {set} exceeds v at {t}")
                    })?;
                }
            }
        }
        counts[0] += additive as u32;
        counts[1] += submodular as u32;
        counts[2] += xos.holds as u32;
    }

    let set = |m, items: &[usize]| ItemSet::from_items(m, items).unwrap();
    let x = xos3();
    ensure(certify_xos(&x).unwrap().holds, || {
        "XOS3 not certified".into()
    })?;
    let w = check_submodular(&x).unwrap().witness;
    ensure(
        w == Some(Witness::Pair(set(3, &[1, 3]), set(3, &[2, 3]))),
        || format!("XOS3 witness {w:?}"),
    )?;
    let s = sub3();
    ensure(check_subadditive(&s).unwrap().holds, || {
        "SUB3 not subadditive".into()
    })?;
    let r = certify_xos(&s).unwrap();
    ensure(
        !r.holds && r.witness == Some(Witness::Set(set(3, &[1, 2, 3]))),
        || format!("SUB3 xos refutation {:?}", r.witness),
    )?;
    Ok(format!(
        "{instances} instances (m <= 8; {} additive, {} submodular, {} xos), 0 violations; XOS3 and SUB3 witnesses exact",
        counts[0], counts[1], counts[2]
    ))
}

fn value_simulation() -> Check {
    let instances = 110u64;
    let mut d = Draws::new(77);
    let mut queries_run = 0u64;
    for i in 0..instances {
        let m = 2 + (i % 9) as usize;
        let v: Valuation = match i % 4 {
            0 => common::additive(m, 300 + i, 64),
            1 => common::xos(m, 3, 300 + i, 64),
            2 => common::coverage(m, 300 + i, 3),
            _ => common::monotone_table(m, 300 + i, 40),
        };
        let vmax = common::to_u64(&common::max_marginal(&v)).max(1);
        ensure(vmax <= 64, || {
            format!("instance {i}: marginal {vmax} above 64")
        })?;

        let full = ItemSet::full(m).unwrap();
        let mut sets: Vec<ItemSet> = (1..=m)
            .map(|j| ItemSet::from_items(m, &[j]).unwrap())
            .collect();
        sets.push(full);
        while sets.len() < 20 {
            let idx = d.between(1, (1u64 << m) - 1);
            sets.push(ItemSet::from_lex_index(m, idx).unwrap());
        }

        for rule in TieRule::ALL {
            let oracle = BruteDemand {
                valuation: &v,
                rule,
            };
            for s in &sets {
                let sim = simulate_value_via_demand(&oracle, s, vmax)
                    .map_err(|e| format!("instance {i} set {s}: {e}"))?;
                let truth = v.value(s);
                let bound = simulation_query_bound(s.len(), vmax);
                ensure(Rational::from_integer(sim.value.clone()) == truth, || {
                    format!(
                        "instance {i} set {s} {rule:?}: got {} want {truth}",
                        sim.value
                    )
                })?;
                ensure(sim.ledger.demand_queries <= bound, || {
                    format!(
                        "instance {i} set {s}: {} demand queries > bound {bound}",
                        sim.ledger.demand_queries
                    )
                })?;
                ensure(sim.ledger.value_queries == 0, || {
                    format!("instance {i}: value queries used")
                })?;
                queries_run += 1;
            }
        }
    }
    Ok(format!(
        "{instances} instances (m <= 10, vmax <= 64), {queries_run} reconstructions under 3 tie rules, all exact and within bound"
    ))
}

fn bitstring_less(a: u64, b: u64, m: usize) -> bool {
    // item j <-> character j of the bitstring; compare as strings
    let render = |mask: u64| -> String {
        (0..m)
            .map(|j| if mask >> j & 1 == 1 { '1' } else { '0' })
            .collect()
    };
    render(a) < render(b)
}

/// Optimum by direct enumeration over bitmasks (bit j-1 = item j), lex-first
/// by bitstring among ties.
fn reference_optimum(v: &Valuation, feasible: impl Fn(&[usize]) -> bool) -> (Vec<usize>, Rational) {
    let m = v.ground_size();
    let mut best: Option<(u64, Rational)> = None;
    for mask in 0..1u64 << m {
        let items: Vec<usize> = (1..=m).filter(|j| mask >> (j - 1) & 1 == 1).collect();
        if !feasible(&items) {
            continue;
        }
        let value = v.value(&ItemSet::from_items(m, &items).unwrap());
        let better = match &best {
            None => true,
            Some((bm, bv)) => value > *bv || (value == *bv && bitstring_less(mask, *bm, m)),
        };
        if better {
            best = Some((mask, value));
        }
    }
    let (mask, value) = best.expect("the empty set is always feasible");
    (
        (1..=m).filter(|j| mask >> (j - 1) & 1 == 1).collect(),
        value,
    )
}

fn solvers() -> Check {
    let mut exact_checked = 0;
    for i in 0..36u64 {
        let m = 1 + (i % 12) as usize;
        let v = match i % 3 {
            0 => common::additive(m, 500 + i, 10),
            1 => common::xos(m, 3, 500 + i, 10),
            _ => common::coverage(m, 500 + i, 10),
        };
        let k = (i as usize * 7) % (m + 1);
        for mode in [CardinalityMode::Exactly, CardinalityMode::AtMost] {
            let got = solve_cardinality_exact(&v, k, mode).unwrap();
            let (items, value) = reference_optimum(&v, |s| match mode {
                CardinalityMode::Exactly => s.len() == k,
                CardinalityMode::AtMost => s.len() <= k,
            });
            ensure(
                got.chosen.items().collect::<Vec<_>>() == items && got.objective == value,
                || {
                    format!(
                        "cardinality m={m} k={k} {mode:?}: {} {} vs {items:?} {value}",
                        got.chosen, got.objective
                    )
                },
            )?;
        }
        let costs: CostVector = common::costs(m, 600 + i);
        let got = solve_knapsack_exact(&v, &costs).unwrap();
        let (items, value) = reference_optimum(&v, |s| {
            let total: Rational = s.iter().map(|&j| costs.cost(j).clone()).sum();
            total <= *costs.budget()
        });
        ensure(
            got.chosen.items().collect::<Vec<_>>() == items && got.objective == value,
            || {
                format!(
                    "knapsack m={m}: {} {} vs {items:?} {value}",
                    got.chosen, got.objective
                )
            },
        )?;
        exact_checked += 3;
    }

    let mut worst_card = int(1);
    let mut worst_knap = int(1);
    let mut greedy_checked = 0;
    for i in 0..60u64 {
        let m = 3 + (i % 8) as usize;
        let v = common::monotone_submodular(m, 700 + i);
        ensure(
            check_submodular(&v).unwrap().holds && check_monotone(&v).unwrap().holds,
            || format!("instance {i} is not monotone submodular"),
        )?;
        for k in 1..=m {
            let g = greedy_cardinality(&v, k).unwrap();
            let opt = solve_cardinality_exact(&v, k, CardinalityMode::Exactly).unwrap();
            if !opt.objective.is_zero() {
                let r = &g.objective / &opt.objective;
                ensure(r >= ratio(632, 1000), || {
                    format!("instance {i} k={k}: greedy ratio {r}")
                })?;
                worst_card = worst_card.min(r);
            }
            greedy_checked += 1;
        }
        let costs = common::costs(m, 800 + i);
        let g = greedy_knapsack(&v, &costs).unwrap();
        ensure(costs.is_affordable(&g.chosen), || {
            format!("instance {i}: greedy knapsack over budget")
        })?;
        let opt = solve_knapsack_exact(&v, &costs).unwrap();
        if !opt.objective.is_zero() {
            let r = &g.objective / &opt.objective;
            ensure(r >= ratio(316, 1000), || {
                format!("instance {i}: knapsack greedy ratio {r}")
            })?;
            worst_knap = worst_knap.min(r);
        }
        greedy_checked += 1;
    }
    Ok(format!(
        "{exact_checked} exact solves match re-enumeration (m <= 12); {greedy_checked} greedy runs, worst ratios {worst_card} (cardinality) and {worst_knap} (knapsack)"
    ))
}

fn determinism() -> Check {
    let bin = env!("CARGO_BIN_EXE_valuekit");
    let dir = tempfile::tempdir().map_err(|e| e.to_string())?;
    let fixtures = concat!(env!("CARGO_MANIFEST_DIR"), "/tests/fixtures");
    let run = |args: &[&str]| -> Result<Vec<u8>, String> {
        let out = Command::new(bin)
            .args(args)
            .output()
            .map_err(|e| e.to_string())?;
        let mut bytes = out.stdout;
        bytes.extend(out.stderr);
        bytes.extend(out.status.code().unwrap_or(-1).to_string().into_bytes());
        Ok(bytes)
    };

    let mut generated = Vec::new();
    for (kind, m) in [
        ("additive", "6"),
        ("xos", "7"),
        ("coverage", "8"),
        ("table", "6"),
    ] {
        let args = ["gen", kind, m, "--seed", "11", "--with-costs"];
        let first = run(&args)?;
        ensure(first == run(&args)?, || {
            format!("gen {kind} differs between runs")
        })?;
        let path = dir.path().join(format!("{kind}.json"));
        std::fs::write(&path, &first[..first.len() - 1]).map_err(|e| e.to_string())?;
        generated.push(path.to_string_lossy().into_owned());
    }
    let mut commands: Vec<Vec<String>> = Vec::new();
    for file in generated.iter().cloned().chain(
        ["ADD3.json", "XOS3.json", "SUB3.json"]
            .iter()
            .map(|f| format!("{fixtures}/{f}")),
    ) {
        let owned = |xs: &[&str]| -> Vec<String> { xs.iter().map(|s| s.to_string()).collect() };
        commands.push(owned(&["certify", &file]));
        commands.push(owned(&["--json", "certify", &file]));
        commands.push(owned(&["solve", &file, "--k", "2", "--solver", "greedy"]));
        commands.push(owned(&["solve", &file, "--k", "2"]));
        commands.push(owned(&["eval", &file, "--set", "1,2", "--given", "3"]));
    }
    for f in ["ADD3.json", "XOS3.json"] {
        let file = format!("{fixtures}/{f}");
        for engine in ["auto", "brute"] {
            commands.push(
                [
                    "demand",
                    &file,
                    "--prices",
                    "1,1/2,1/2",
                    "--demand-set",
                    "--engine",
                    engine,
                ]
                .iter()
                .map(|s| s.to_string())
                .collect(),
            );
        }
        commands.push(
            ["simulate-value", &file, "--set", "1,2", "--vmax", "3"]
                .iter()
                .map(|s| s.to_string())
                .collect(),
        );
    }
    for args in &commands {
        let args: Vec<&str> = args.iter().map(String::as_str).collect();
        let first = run(&args)?;
        ensure(first == run(&args)?, || {
            format!("`valuekit {}` differs between runs", args.join(" "))
        })?;
    }
    Ok(format!(
        "{} gen files and {} commands byte-identical across two runs",
        generated.len(),
        commands.len()
    ))
}

/// Counts every call that reaches the wrapped valuation.
struct Counting<'a> {
    inner: &'a Valuation,
    value_calls: AtomicU64,
    demand_calls: AtomicU64,
}

impl GroundSet for Counting<'_> {
    fn ground_size(&self) -> usize {
        self.inner.ground_size()
    }
}

impl ValueOracle for Counting<'_> {
    fn value_query(&self, set: &ItemSet) -> Rational {
        self.value_calls.fetch_add(1, Ordering::Relaxed);
        self.inner.value(set)
    }
}

impl DemandOracle for Counting<'_> {
    fn demand_query(
        &self,
        prices: &PriceVector,
    ) -> valuekit::Result<valuekit::oracles::DemandAnswer> {
        self.demand_calls.fetch_add(1, Ordering::Relaxed);
        self.inner.demand_query(prices)
    }
}

fn ledger_honesty() -> Check {
    let v = common::xos(6, 3, 900, 10);
    let counting = Counting {
        inner: &v,
        value_calls: AtomicU64::new(0),
        demand_calls: AtomicU64::new(0),
    };
    let oracle = metered(&counting);
    let workers = 8u64;
    let per_worker = 20_000u64;
    std::thread::scope(|scope| {
        for w in 0..workers {
            let oracle = &oracle;
            scope.spawn(move || {
                let mut d = Draws::new(w);
                for call in 0..per_worker {
                    if call % 10 == 0 {
                        let prices: Vec<Rational> =
                            (0..6).map(|_| int(d.between(0, 10) as i64)).collect();
                        oracle
                            .demand_query(&PriceVector::new(prices).unwrap())
                            .unwrap();
                    } else {
                        let s = ItemSet::from_lex_index(6, d.below(64)).unwrap();
                        oracle.value_query(&s);
                    }
                }
            });
        }
    });
    let ledger = oracle.ledger();
    let value_calls = counting.value_calls.load(Ordering::SeqCst);
    let demand_calls = counting.demand_calls.load(Ordering::SeqCst);
    ensure(
        ledger.value_queries == value_calls && ledger.demand_queries == demand_calls,
        || format!("ledger {ledger:?} vs actual {value_calls} value / {demand_calls} demand"),
    )?;
    ensure(value_calls + demand_calls == workers * per_worker, || {
        "lost calls".into()
    })?;

    let mut greedy_runs = 0;
    for i in 0..40u64 {
        let m = 1 + (i % 12) as usize;
        let v = common::mixed(m, 950 + i);
        for k in 0..=m {
            let counting = Counting {
                inner: &v,
                value_calls: AtomicU64::new(0),
                demand_calls: AtomicU64::new(0),
            };
            let g = greedy_cardinality(&counting, k).unwrap();
            let actual = counting.value_calls.load(Ordering::SeqCst);
            ensure(g.ledger.value_queries == actual, || {
                format!("greedy ledger {} vs {actual} calls", g.ledger.value_queries)
            })?;
            ensure(actual <= (k * m) as u64, || {
                format!("greedy m={m} k={k} used {actual} > k*m")
            })?;
            greedy_runs += 1;
        }
    }
    Ok(format!(
        "{workers} workers, {} calls counted exactly; {greedy_runs} greedy runs within k*m value queries",
        workers * per_worker
    ))
}

fn main() -> ExitCode {
    let criteria: [Criterion; 6] = [
        ("demand-oracle equivalence", demand_equivalence),
        ("class inclusion", class_inclusion),
        ("value-query simulation", value_simulation),
        ("problem solvers", solvers),
        ("determinism", determinism),
        ("ledger honesty", ledger_honesty),
    ];
    let mut failed = 0;
    for (n, (name, check)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let outcome = check();
        let secs = start.elapsed().as_secs_f64();
        match outcome {
            Ok(detail) => println!("PASS {}. {name}: {detail} [{secs:.1}s]", n + 1),
            Err(detail) => {
                failed += 1;
                println!("FAIL {}. {name}: {detail} [{secs:.1}s]", n + 1);
            }
        }
    }
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
