//! Command-line front end.
//!
//! Exit codes: 0 success, 2 usage or parse error, 3 size cap exceeded,
//! 4 self-check failure.

use std::ffi::OsString;
use std::fs;
use std::io::Write;
use std::path::PathBuf;

use clap::{Parser, Subcommand, ValueEnum};
use num_bigint::BigInt;
use serde_json::{json, Value};

use crate::classify::{classify_all, ClassReport, Property, Witness};
use crate::error::Error;
use crate::gen::{generate, GenParams};
use crate::instance::{Instance, Kind};
use crate::optimize::{
    greedy_cardinality, greedy_knapsack, solve_cardinality_exact, solve_knapsack_exact,
    CardinalityMode, SolveResult,
};
use crate::oracles::{
    demand, simulate_value_via_demand, simulation_query_bound, DemandEngine, PriceVector,
};
use crate::rational::{parse_rational_list, Rational};
use crate::setcore::ItemSet;
use crate::valuations::{marginal, GroundSet, SetFunction};

pub const EXIT_OK: i32 = 0;
pub const EXIT_USAGE: i32 = 2;
pub const EXIT_CAP: i32 = 3;
pub const EXIT_SELF_CHECK: i32 = 4;

#[derive(Debug, Parser)]
#[command(
    name = "valuekit",
    version,
    about = "Exact valuations, demand oracles and constrained maximization"
)]
struct Cli {
    /// Emit machine-readable JSON reports.
    #[arg(long, global = true)]
    json: bool,

    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum EngineArg {
    Auto,
    Brute,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum SolverArg {
    Exact,
    Greedy,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum KindArg {
    Additive,
    Xos,
    Coverage,
    Table,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Value query: print v(S), and v(S | T) when --given is set.
    Eval {
        instance: PathBuf,
        #[arg(long, num_args = 0..=1, default_missing_value = "", allow_hyphen_values = true)]
        set: String,
        #[arg(long)]
        given: Option<String>,
    },
    /// Demand query at the given prices.
    Demand {
        instance: PathBuf,
        #[arg(long, allow_hyphen_values = true)]
        prices: String,
        /// Also list every utility maximizer in lex order.
        #[arg(long)]
        demand_set: bool,
        #[arg(long, value_enum, default_value = "auto")]
        engine: EngineArg,
    },
    /// Run every class check and the XOS certifier.
    Certify { instance: PathBuf },
    /// Maximize under a cardinality (--k) or budget (--budget) constraint.
    Solve {
        instance: PathBuf,
        #[arg(long)]
        k: Option<usize>,
        /// Use the costs and budget stored in the instance file.
        #[arg(long)]
        budget: bool,
        /// Feasible sets have at most k items instead of exactly k.
        #[arg(long)]
        at_most: bool,
        #[arg(long, value_enum, default_value = "exact")]
        solver: SolverArg,
    },
    /// Recover v(S) from demand queries alone.
    SimulateValue {
        instance: PathBuf,
        #[arg(long, num_args = 0..=1, default_missing_value = "")]
        set: String,
        #[arg(long)]
        vmax: u64,
    },
    /// Write a seeded random instance to stdout.
    Gen {
        #[arg(value_enum)]
        kind: KindArg,
        m: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = 3)]
        clauses: usize,
        #[arg(long, default_value_t = 10)]
        vmax: u64,
        #[arg(long)]
        with_costs: bool,
    },
}

struct Failure {
    code: i32,
    message: String,
}

impl Failure {
    fn usage(message: impl Into<String>) -> Self {
        Failure {
            code: EXIT_USAGE,
            message: message.into(),
        }
    }

    fn self_check(message: impl Into<String>) -> Self {
        Failure {
            code: EXIT_SELF_CHECK,
            message: message.into(),
        }
    }
}

impl From<Error> for Failure {
    fn from(err: Error) -> Self {
        let code = match err {
            Error::UnsupportedSize { .. } => EXIT_CAP,
            _ => EXIT_USAGE,
        };
        Failure {
            code,
            message: err.to_string(),
        }
    }
}

type Outcome = std::result::Result<String, Failure>;

/// Parses `args` (including the program name), runs the command and
/// returns the process exit code.
pub fn run<I, T>(args: I, stdout: &mut dyn Write, stderr: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(err) => {
            let code = if err.use_stderr() {
                EXIT_USAGE
            } else {
                EXIT_OK
            };
            let text = err.render().to_string();
            let sink: &mut dyn Write = if err.use_stderr() { stderr } else { stdout };
            let _ = sink.write_all(text.as_bytes());
            return code;
        }
    };
    let json = cli.json;
    let outcome = match cli.command {
        Command::Eval {
            instance,
            set,
            given,
        } => cmd_eval(&instance, &set, given.as_deref(), json),
        Command::Demand {
            instance,
            prices,
            demand_set,
            engine,
        } => cmd_demand(&instance, &prices, demand_set, engine, json),
        Command::Certify { instance } => cmd_certify(&instance, json),
        Command::Solve {
            instance,
            k,
            budget,
            at_most,
            solver,
        } => cmd_solve(&instance, k, budget, at_most, solver, json),
        Command::SimulateValue {
            instance,
            set,
            vmax,
        } => cmd_simulate_value(&instance, &set, vmax, json),
        Command::Gen {
            kind,
            m,
            seed,
            clauses,
            vmax,
            with_costs,
        } => cmd_gen(kind, m, seed, clauses, vmax, with_costs),
    };
    match outcome {
        Ok(text) => {
            let _ = stdout.write_all(text.as_bytes());
            EXIT_OK
        }
        Err(failure) => {
            let _ = writeln!(stderr, "error: {}", failure.message);
            failure.code
        }
    }
}

fn load(path: &PathBuf) -> std::result::Result<Instance, Failure> {
    let text = fs::read_to_string(path)
        .map_err(|e| Failure::usage(format!("cannot read {}: {e}", path.display())))?;
    Instance::from_json(&text).map_err(|e| {
        let mut failure = Failure::from(e);
        failure.message = format!("{}: {}", path.display(), failure.message);
        failure
    })
}

fn render_json(value: Value) -> String {
    let mut text = serde_json::to_string_pretty(&value).expect("JSON report");
    text.push('\n');
    text
}

fn render_set_list(sets: &[ItemSet]) -> String {
    sets.iter()
        .map(ItemSet::to_string)
        .collect::<Vec<_>>()
        .join(",")
}

fn cmd_eval(path: &PathBuf, set: &str, given: Option<&str>, json: bool) -> Outcome {
    let inst = load(path)?;
    let v = &inst.valuation;
    let m = v.ground_size();
    let s = ItemSet::parse_list(m, set)?;
    let value = v.value(&s);
    let conditional = match given {
        Some(t) => {
            let t = ItemSet::parse_list(m, t)?;
            Some((t, marginal(v, &s, &t)))
        }
        None => None,
    };
    if json {
        let mut report = json!({ "set": s.to_string(), "value": value.to_string() });
        if let Some((t, mv)) = &conditional {
            report["given"] = json!(t.to_string());
            report["marginal"] = json!(mv.to_string());
        }
        return Ok(render_json(report));
    }
    let mut out = format!("{value}\n");
    if let Some((t, mv)) = conditional {
        out.push_str(&format!("marginal {mv} given {t}\n"));
    }
    Ok(out)
}

fn cmd_demand(
    path: &PathBuf,
    prices: &str,
    want_set: bool,
    engine: EngineArg,
    json: bool,
) -> Outcome {
    let inst = load(path)?;
    let v = &inst.valuation;
    let prices = PriceVector::new(parse_rational_list(prices)?)
        .map_err(|_| Failure::usage("--prices needs at least one price"))?;
    let engine = match engine {
        EngineArg::Auto => DemandEngine::Auto,
        EngineArg::Brute => DemandEngine::Brute,
    };
    let (answer, used) = demand(v, &prices, engine, want_set)?;
    if json {
        let mut report = json!({
            "bundle": answer.bundle.to_string(),
            "bitstring": answer.bundle.bitstring(),
            "utility": answer.utility.to_string(),
            "engine": used.name(),
        });
        if let Some(ds) = &answer.demand_set {
            report["demand_set"] = json!(ds.iter().map(ItemSet::to_string).collect::<Vec<_>>());
        }
        return Ok(render_json(report));
    }
    let mut line = format!(
        "{} utility {} engine {}",
        answer.bundle,
        answer.utility,
        used.name()
    );
    if let Some(ds) = &answer.demand_set {
        line.push_str(&format!("; demand set {}", render_set_list(ds)));
    }
    line.push('\n');
    Ok(line)
}

fn verdict_detail(report: &ClassReport) -> Option<String> {
    if report.holds {
        return (report.property == Property::Xos).then(|| {
            format!(
                "certificate: {} supporting clauses",
                report.certificate.len()
            )
        });
    }
    let witness = report.witness.as_ref()?;
    Some(match (report.refuted_by, witness) {
        (Some(p), w) => format!("not {p}: witness {w}"),
        (None, Witness::Set(s)) if report.property == Property::Xos => format!("refuted at {s}"),
        (None, w) => format!("witness {w}"),
    })
}

fn cmd_certify(path: &PathBuf, json: bool) -> Outcome {
    let inst = load(path)?;
    let reports = classify_all(&inst.valuation)?;
    if json {
        let entries: Vec<Value> = reports
            .iter()
            .map(|r| {
                let mut e = json!({ "property": r.property.name(), "holds": r.holds });
                match &r.witness {
                    Some(Witness::Set(s)) => e["witness"] = json!([s.to_string()]),
                    Some(Witness::Pair(s, t)) => {
                        e["witness"] = json!([s.to_string(), t.to_string()])
                    }
                    None => {}
                }
                if let Some(p) = r.refuted_by {
                    e["refuted_by"] = json!(p.name());
                }
                if !r.certificate.is_empty() {
                    e["certificate"] = json!(r
                        .certificate
                        .iter()
                        .map(|c| json!({
                            "set": c.set.to_string(),
                            "clause": c.weights.iter().map(Rational::to_string).collect::<Vec<_>>(),
                        }))
                        .collect::<Vec<_>>());
                }
                e
            })
            .collect();
        return Ok(render_json(json!({ "reports": entries })));
    }
    let mut out = String::new();
    for r in &reports {
        let mark = if r.holds { "✓" } else { "✗" };
        match verdict_detail(r) {
            Some(detail) => out.push_str(&format!("{} {mark} ({detail})\n", r.property)),
            None => out.push_str(&format!("{} {mark}\n", r.property)),
        }
    }
    Ok(out)
}

fn cmd_solve(
    path: &PathBuf,
    k: Option<usize>,
    budget: bool,
    at_most: bool,
    solver: SolverArg,
    json: bool,
) -> Outcome {
    let inst = load(path)?;
    let v = &inst.valuation;
    let result: SolveResult = match (k, budget) {
        (Some(_), true) => return Err(Failure::usage("give either --k or --budget, not both")),
        (None, false) => return Err(Failure::usage("missing constraint: give --k N or --budget")),
        (Some(k), false) => {
            let mode = if at_most {
                CardinalityMode::AtMost
            } else {
                CardinalityMode::Exactly
            };
            match (solver, mode) {
                (SolverArg::Exact, mode) => solve_cardinality_exact(v, k, mode)?,
                (SolverArg::Greedy, CardinalityMode::Exactly) => greedy_cardinality(v, k)?,
                (SolverArg::Greedy, CardinalityMode::AtMost) => {
                    return Err(Failure::usage(
                        "--at-most is only supported by the exact solver",
                    ))
                }
            }
        }
        (None, true) => {
            let costs = inst.costs.as_ref().ok_or_else(|| {
                Failure::usage("--budget needs `costs` and `budget` in the instance file")
            })?;
            match solver {
                SolverArg::Exact => solve_knapsack_exact(v, costs)?,
                SolverArg::Greedy => greedy_knapsack(v, costs)?,
            }
        }
    };
    if json {
        return Ok(render_json(json!({
            "chosen": result.chosen.to_string(),
            "objective": result.objective.to_string(),
            "solver": result.solver.to_string(),
            "value_queries": result.ledger.value_queries,
            "demand_queries": result.ledger.demand_queries,
        })));
    }
    Ok(format!(
        "{} objective {} solver {} value_queries {} demand_queries {}\n",
        result.chosen,
        result.objective,
        result.solver,
        result.ledger.value_queries,
        result.ledger.demand_queries
    ))
}

fn cmd_simulate_value(path: &PathBuf, set: &str, vmax: u64, json: bool) -> Outcome {
    let inst = load(path)?;
    let v = &inst.valuation;
    let s = ItemSet::parse_list(v.ground_size(), set)?;
    let simulated = simulate_value_via_demand(v, &s, vmax).map_err(|e| match e {
        Error::Precondition(msg) => Failure::self_check(msg),
        other => Failure::from(other),
    })?;
    let truth = v.value(&s);
    let bound = simulation_query_bound(s.len(), vmax);
    let reconstructed = Rational::from_integer(simulated.value.clone());
    if reconstructed != truth || simulated.ledger.demand_queries > bound {
        return Err(Failure::self_check(format!(
            "reconstruction {} with {} demand queries (bound {bound}) disagrees with true value {truth}",
            simulated.value, simulated.ledger.demand_queries
        )));
    }
    let value: &BigInt = &simulated.value;
    if json {
        return Ok(render_json(json!({
            "set": s.to_string(),
            "value": value.to_string(),
            "true_value": truth.to_string(),
            "demand_queries": simulated.ledger.demand_queries,
            "value_queries": simulated.ledger.value_queries,
            "bound": bound,
        })));
    }
    Ok(format!(
        "value {value}, queries {} (bound {bound}), true value {truth}\n",
        simulated.ledger.demand_queries
    ))
}

fn cmd_gen(
    kind: KindArg,
    m: usize,
    seed: u64,
    clauses: usize,
    vmax: u64,
    with_costs: bool,
) -> Outcome {
    let kind = match kind {
        KindArg::Additive => Kind::Additive,
        KindArg::Xos => Kind::Xos,
        KindArg::Coverage => Kind::Coverage,
        KindArg::Table => Kind::Table,
    };
    let params = GenParams {
        kind,
        m,
        seed,
        clauses,
        vmax,
        with_costs,
    };
    let inst = generate(&params).map_err(|e| Failure::usage(e.to_string()))?;
    Ok(inst.to_json())
}
