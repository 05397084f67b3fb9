//! Maximization under a cardinality or a budget (knapsack) constraint.
//!
//! Exact solvers enumerate feasible sets in lex order and keep the first
//! maximizer. Greedy baselines only use value queries; every solver reports
//! the queries it spent.

use std::fmt;

use num_traits::Zero;

use crate::error::{Error, Result};
use crate::oracles::{metered, LedgerCounts, ValueOracle};
use crate::rational::Rational;
use crate::setcore::{enumerate_subsets, ItemSet};
use crate::valuations::{CostVector, TABLE_CAP};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SolverKind {
    Exact,
    Greedy,
}

impl fmt::Display for SolverKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            SolverKind::Exact => "exact",
            SolverKind::Greedy => "greedy",
        })
    }
}

/// Feasible sets for the cardinality problem.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum CardinalityMode {
    /// `|S| = k`.
    #[default]
    Exactly,
    /// `|S| <= k`.
    AtMost,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SolveResult {
    pub chosen: ItemSet,
    pub objective: Rational,
    pub solver: SolverKind,
    pub ledger: LedgerCounts,
}

fn check_exact_cap(m: usize) -> Result<()> {
    if m > TABLE_CAP {
        return Err(Error::UnsupportedSize {
            what: "exact solver",
            m,
            cap: TABLE_CAP,
        });
    }
    Ok(())
}

fn check_k(k: usize, m: usize) -> Result<()> {
    if k > m {
        return Err(Error::CardinalityOutOfRange { k, m });
    }
    Ok(())
}

fn check_costs(costs: &CostVector, m: usize) -> Result<()> {
    if costs.ground_size() != m {
        return Err(Error::GroundSetMismatch {
            expected: m,
            found: costs.ground_size(),
        });
    }
    Ok(())
}

/// Lex-first maximizer of `v` over the sets accepted by `feasible`.
fn best_feasible<O, F>(v: &O, feasible: F) -> Result<SolveResult>
where
    O: ValueOracle + ?Sized,
    F: FnMut(&ItemSet) -> bool,
{
    let oracle = metered(v);
    let mut best: Option<(ItemSet, Rational)> = None;
    for s in enumerate_subsets(v.ground_size(), feasible)? {
        let value = oracle.value_query(&s);
        if best.as_ref().is_none_or(|(_, b)| value > *b) {
            best = Some((s, value));
        }
    }
    let (chosen, objective) = best.ok_or_else(|| Error::Precondition("no feasible set".into()))?;
    Ok(SolveResult {
        chosen,
        objective,
        solver: SolverKind::Exact,
        ledger: oracle.ledger(),
    })
}

/// Largest-value set of size `k` (or at most `k`), lex-first among ties.
pub fn solve_cardinality_exact<O: ValueOracle + ?Sized>(
    v: &O,
    k: usize,
    mode: CardinalityMode,
) -> Result<SolveResult> {
    let m = v.ground_size();
    check_k(k, m)?;
    check_exact_cap(m)?;
    match mode {
        CardinalityMode::Exactly => best_feasible(v, |s| s.len() == k),
        CardinalityMode::AtMost => best_feasible(v, |s| s.len() <= k),
    }
}

/// Largest-value set with `C(S) <= B`, lex-first among ties.
pub fn solve_knapsack_exact<O: ValueOracle + ?Sized>(
    v: &O,
    costs: &CostVector,
) -> Result<SolveResult> {
    let m = v.ground_size();
    check_costs(costs, m)?;
    check_exact_cap(m)?;
    best_feasible(v, |s| costs.is_affordable(s))
}

/// `k` rounds of adding the item with the largest marginal value, ties to
/// the smallest index. Always returns exactly `k` items and spends at most
/// `k · m` value queries; `v(∅) = 0` is assumed rather than queried.
///
/// The `1 - 1/e` guarantee needs `v` monotone submodular.
pub fn greedy_cardinality<O: ValueOracle + ?Sized>(v: &O, k: usize) -> Result<SolveResult> {
    let m = v.ground_size();
    check_k(k, m)?;
    let oracle = metered(v);
    let mut current = ItemSet::empty(m)?;
    let mut current_value = Rational::zero();
    for _ in 0..k {
        // Marginals share the base v(current), so compare v(current + j).
        let mut best: Option<(usize, Rational)> = None;
        for j in (1..=m).filter(|&j| !current.contains(j)) {
            let value = oracle.value_query(&current.with(j));
            if best.as_ref().is_none_or(|(_, b)| value > *b) {
                best = Some((j, value));
            }
        }
        let (j, value) = best.expect("k <= m leaves a candidate");
        current = current.with(j);
        current_value = value;
    }
    Ok(SolveResult {
        chosen: current,
        objective: current_value,
        solver: SolverKind::Greedy,
        ledger: oracle.ledger(),
    })
}

/// Cost-benefit greedy plus best affordable singleton.
///
/// Zero-cost items are added up front. The greedy pass then repeatedly adds
/// the affordable item with the largest `marginal / cost`, ties to the
/// smallest index, until nothing fits. The singleton pass takes the single
/// affordable item of largest value. The better of the two sets is returned,
/// lex-first on a value tie.
pub fn greedy_knapsack<O: ValueOracle + ?Sized>(v: &O, costs: &CostVector) -> Result<SolveResult> {
    let m = v.ground_size();
    check_costs(costs, m)?;
    let oracle = metered(v);

    let mut free = ItemSet::empty(m)?;
    for j in (1..=m).filter(|&j| costs.cost(j).is_zero()) {
        free = free.with(j);
    }
    let free_value = if free.is_empty() {
        Rational::zero()
    } else {
        oracle.value_query(&free)
    };

    let mut current = free;
    let mut current_value = free_value.clone();
    let mut spent = costs.total_cost(&current);
    loop {
        let mut best: Option<(usize, Rational, Rational)> = None;
        for j in (1..=m).filter(|&j| !current.contains(j)) {
            if &spent + costs.cost(j) > *costs.budget() {
                continue;
            }
            let value = oracle.value_query(&current.with(j));
            let ratio = (&value - &current_value) / costs.cost(j);
            if best.as_ref().is_none_or(|(_, r, _)| ratio > *r) {
                best = Some((j, ratio, value));
            }
        }
        let Some((j, _, value)) = best else { break };
        spent += costs.cost(j);
        current = current.with(j);
        current_value = value;
    }

    let mut single: Option<(ItemSet, Rational)> = None;
    for j in (1..=m).filter(|&j| !free.contains(j)) {
        if costs.cost(j) > costs.budget() {
            continue;
        }
        let candidate = free.with(j);
        let value = oracle.value_query(&candidate);
        if single.as_ref().is_none_or(|(_, b)| value > *b) {
            single = Some((candidate, value));
        }
    }
    let single = single.unwrap_or((free, free_value));

    let greedy = (current, current_value);
    let (chosen, objective) =
        if single.1 > greedy.1 || (single.1 == greedy.1 && single.0 < greedy.0) {
            single
        } else {
            greedy
        };
    Ok(SolveResult {
        chosen,
        objective,
        solver: SolverKind::Greedy,
        ledger: oracle.ledger(),
    })
}
