//! Value and demand query oracles.
//!
//! A demand query at prices `p` returns a bundle in
//! `argmax_T v(T) - Σ_{j∈T} p_j`. Whenever several bundles tie, every
//! demand solver here returns the lexicographically-first one (minimum
//! characteristic bitstring), a rule that looks at set membership only and
//! never at the valuation. Closed forms exist for additive and XOS
//! valuations; anything else is solved by enumeration.

use std::sync::atomic::{AtomicU64, Ordering};

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::rational::{int, positive_part, ratio, Rational};
use crate::setcore::{lex_compare, ItemSet};
use crate::valuations::{
    additive_table, additive_table_i128, AdditiveValuation, CoverageValuation, ExplicitTable,
    GroundSet, SetFunction, Valuation, XosValuation,
};

/// Largest ground set for brute-force demand that materializes the demand set.
pub const DEMAND_SET_CAP: usize = 16;
/// Largest ground set for brute-force demand in general.
pub const BRUTE_DEMAND_CAP: usize = 20;

/// Per-item prices; negative prices are allowed.
#[derive(Debug, Clone, PartialEq)]
pub struct PriceVector(Vec<Rational>);

impl PriceVector {
    pub fn new(prices: Vec<Rational>) -> Result<Self> {
        if prices.is_empty() {
            return Err(Error::EmptyGroundSet);
        }
        Ok(PriceVector(prices))
    }

    pub fn from_integers(prices: &[i64]) -> Result<Self> {
        PriceVector::new(prices.iter().map(|&p| int(p)).collect())
    }

    pub fn prices(&self) -> &[Rational] {
        &self.0
    }

    pub fn price(&self, item: usize) -> &Rational {
        &self.0[item - 1]
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn total(&self, set: &ItemSet) -> Rational {
        set.items()
            .fold(Rational::zero(), |acc, j| acc + &self.0[j - 1])
    }

    /// Every price multiplied by `factor`.
    pub fn scaled(&self, factor: &Rational) -> PriceVector {
        PriceVector(self.0.iter().map(|p| p * factor).collect())
    }

    fn check_arity(&self, m: usize) -> Result<()> {
        if self.len() != m {
            return Err(Error::Arity {
                what: "price vector",
                expected: m,
                found: self.len(),
            });
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct DemandAnswer {
    pub bundle: ItemSet,
    /// `v(bundle) - p(bundle)`.
    pub utility: Rational,
    /// Every utility maximizer in lex order, when requested.
    pub demand_set: Option<Vec<ItemSet>>,
}

/// Demand by enumerating all `2^m` bundles in lex order. The first maximizer
/// seen is returned, so ties go to the lex-first bundle.
///
/// `m <= 16` when the demand set is requested, `m <= 20` otherwise.
pub fn demand_bruteforce<V: SetFunction + ?Sized>(
    v: &V,
    prices: &PriceVector,
    want_demand_set: bool,
) -> Result<DemandAnswer> {
    let m = v.ground_size();
    let cap = if want_demand_set {
        DEMAND_SET_CAP
    } else {
        BRUTE_DEMAND_CAP
    };
    if m > cap {
        return Err(Error::UnsupportedSize {
            what: "brute-force demand",
            m,
            cap,
        });
    }
    prices.check_arity(m)?;

    let values = v.values_in_lex_order()?;
    let (best, maximizers) = match scale_to_i128(&values, prices.prices()) {
        Some((scaled_values, scaled_prices, denom)) => {
            let (mask, utility, maximizers) = argmax_utility(
                &scaled_values,
                &additive_table_i128(&scaled_prices),
                want_demand_set,
            );
            (
                (
                    mask,
                    Rational::new(BigInt::from(utility), BigInt::from(denom)),
                ),
                maximizers,
            )
        }
        None => {
            let costs = additive_table(prices.prices())?;
            let (mask, utility, maximizers) = argmax_utility(&values, &costs, want_demand_set);
            ((mask, utility), maximizers)
        }
    };
    let (mask, utility) = best;
    let to_set = |mask: usize| ItemSet::from_lex_index(m, mask as u64).expect("mask in range");
    Ok(DemandAnswer {
        bundle: to_set(mask),
        utility,
        demand_set: want_demand_set.then(|| maximizers.into_iter().map(to_set).collect()),
    })
}

/// First index maximizing `values[i] - costs[i]`, its utility, and (when
/// asked) every maximizing index in order.
fn argmax_utility<T>(values: &[T], costs: &[T], want_all: bool) -> (usize, T, Vec<usize>)
where
    T: Clone + PartialOrd,
    for<'a> &'a T: std::ops::Sub<&'a T, Output = T>,
{
    let mut best: Option<(usize, T)> = None;
    let mut maximizers = Vec::new();
    for (mask, (value, cost)) in values.iter().zip(costs).enumerate() {
        let utility = value - cost;
        match &best {
            Some((_, u)) if utility < *u => {}
            Some((_, u)) if utility == *u => {
                if want_all {
                    maximizers.push(mask);
                }
            }
            _ => {
                maximizers.clear();
                maximizers.push(mask);
                best = Some((mask, utility));
            }
        }
    }
    let (mask, utility) = best.expect("at least the empty bundle");
    (mask, utility, maximizers)
}

/// Rewrites values and prices over a common denominator `d` as `i128`
/// numerators, or `None` if they do not fit with room for subset sums.
fn scale_to_i128(values: &[Rational], prices: &[Rational]) -> Option<(Vec<i128>, Vec<i128>, i128)> {
    const LIMIT: i128 = 1 << 100;
    let mut denom = BigInt::one();
    for x in values.iter().chain(prices).filter(|x| !x.denom().is_one()) {
        denom = denom.lcm(x.denom());
    }
    let denom = i128::try_from(&denom).ok().filter(|d| *d < LIMIT)?;
    let fits = |n: i128| (n.abs() < LIMIT).then_some(n);
    let scale = |xs: &[Rational]| -> Option<Vec<i128>> {
        xs.iter()
            .map(|x| {
                let n = i128::try_from(x.numer()).ok().and_then(fits)?;
                if x.denom().is_one() {
                    n.checked_mul(denom).and_then(fits)
                } else {
                    let factor = i128::try_from(x.denom()).ok().map(|q| denom / q)?;
                    n.checked_mul(factor).and_then(fits)
                }
            })
            .collect()
    };
    Some((scale(values)?, scale(prices)?, denom))
}

/// Closed-form demand for additive valuations: take exactly the items whose
/// weight strictly exceeds their price. Zero-margin items are left out,
/// which is what the lex-first rule picks among the tied bundles.
pub fn demand_additive(v: &AdditiveValuation, prices: &PriceVector) -> Result<DemandAnswer> {
    let m = v.ground_size();
    prices.check_arity(m)?;
    let mut bundle = ItemSet::empty(m)?;
    let mut utility = Rational::zero();
    for j in 1..=m {
        let margin = v.weight(j) - prices.price(j);
        if margin.is_positive() {
            bundle = bundle.with(j);
            utility += margin;
        }
    }
    Ok(DemandAnswer {
        bundle,
        utility,
        demand_set: None,
    })
}

/// Closed-form demand for XOS valuations.
///
/// The optimal utility is `max_i Σ_j (a_ij - p_j)^+`, since a bundle's
/// utility is realized through its best clause. The lex-first maximizer is
/// then fixed one item at a time: item `j` is left out whenever some
/// completion of the choices so far still reaches the optimum. Each probe
/// is a clause sweep, so the whole query costs `O(m · l)` arithmetic and
/// never enumerates bundles.
pub fn demand_xos(v: &XosValuation, prices: &PriceVector) -> Result<DemandAnswer> {
    let m = v.ground_size();
    prices.check_arity(m)?;

    let margins: Vec<Vec<Rational>> = v
        .clauses()
        .iter()
        .map(|clause| {
            clause
                .iter()
                .zip(prices.prices())
                .map(|(a, p)| a - p)
                .collect()
        })
        .collect();

    // Per clause: margins of items fixed in, and positive margins of free items.
    let mut forced: Vec<Rational> = vec![Rational::zero(); margins.len()];
    let mut free_gain: Vec<Rational> = margins
        .iter()
        .map(|row| row.iter().map(positive_part).sum())
        .collect();
    let optimum = free_gain.iter().max().expect("at least one clause").clone();

    let mut bundle = ItemSet::empty(m)?;
    for j in 1..=m {
        let reachable_without_j = margins
            .iter()
            .enumerate()
            .any(|(i, row)| &forced[i] + &free_gain[i] - positive_part(&row[j - 1]) == optimum);
        for (i, row) in margins.iter().enumerate() {
            let margin = &row[j - 1];
            free_gain[i] -= positive_part(margin);
            if !reachable_without_j {
                forced[i] += margin;
            }
        }
        if !reachable_without_j {
            bundle = bundle.with(j);
        }
    }

    let utility = v.value(&bundle) - prices.total(&bundle);
    assert_eq!(
        utility, optimum,
        "bit-fixing must land on an optimal bundle"
    );
    Ok(DemandAnswer {
        bundle,
        utility,
        demand_set: None,
    })
}

/// Valuation-independent rules for choosing from a demand set.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TieRule {
    LexFirst,
    LexLast,
    LargestThenLexFirst,
}

impl TieRule {
    pub const ALL: [TieRule; 3] = [
        TieRule::LexFirst,
        TieRule::LexLast,
        TieRule::LargestThenLexFirst,
    ];

    /// Picks from a nonempty demand set.
    pub fn pick(self, demand_set: &[ItemSet]) -> ItemSet {
        let pick = match self {
            TieRule::LexFirst => demand_set.iter().min_by(|a, b| lex_compare(a, b)),
            TieRule::LexLast => demand_set.iter().max_by(|a, b| lex_compare(a, b)),
            TieRule::LargestThenLexFirst => demand_set
                .iter()
                .min_by(|a, b| b.len().cmp(&a.len()).then(lex_compare(a, b))),
        };
        *pick.expect("demand set is never empty")
    }
}

/// Answers a demand query. Implementations may use any valuation-independent
/// tie rule.
pub trait DemandOracle: GroundSet {
    fn demand_query(&self, prices: &PriceVector) -> Result<DemandAnswer>;
}

/// Answers a value query.
pub trait ValueOracle: GroundSet {
    fn value_query(&self, set: &ItemSet) -> Rational;
}

impl<V: SetFunction> ValueOracle for V {
    fn value_query(&self, set: &ItemSet) -> Rational {
        self.value(set)
    }
}

/// Which demand solver to run.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum DemandEngine {
    /// Closed form when the representation has one, enumeration otherwise.
    #[default]
    Auto,
    Brute,
}

/// The solver that actually produced an answer.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum EngineUsed {
    Additive,
    Xos,
    Brute,
}

impl EngineUsed {
    pub fn name(self) -> &'static str {
        match self {
            EngineUsed::Additive => "additive-closed-form",
            EngineUsed::Xos => "xos-closed-form",
            EngineUsed::Brute => "brute-force",
        }
    }
}

/// Demand query on any valuation. With `want_demand_set`, the demand set is
/// enumerated even when a closed form picks the bundle.
pub fn demand(
    v: &Valuation,
    prices: &PriceVector,
    engine: DemandEngine,
    want_demand_set: bool,
) -> Result<(DemandAnswer, EngineUsed)> {
    let (mut answer, used) = match (engine, v) {
        (DemandEngine::Auto, Valuation::Additive(a)) => {
            (demand_additive(a, prices)?, EngineUsed::Additive)
        }
        (DemandEngine::Auto, Valuation::Xos(x)) => (demand_xos(x, prices)?, EngineUsed::Xos),
        _ => {
            return Ok((
                demand_bruteforce(v, prices, want_demand_set)?,
                EngineUsed::Brute,
            ))
        }
    };
    if want_demand_set {
        answer.demand_set = demand_bruteforce(v, prices, true)?.demand_set;
    }
    Ok((answer, used))
}

impl DemandOracle for Valuation {
    fn demand_query(&self, prices: &PriceVector) -> Result<DemandAnswer> {
        demand(self, prices, DemandEngine::Auto, false).map(|(a, _)| a)
    }
}

impl DemandOracle for AdditiveValuation {
    fn demand_query(&self, prices: &PriceVector) -> Result<DemandAnswer> {
        demand_additive(self, prices)
    }
}

impl DemandOracle for XosValuation {
    fn demand_query(&self, prices: &PriceVector) -> Result<DemandAnswer> {
        demand_xos(self, prices)
    }
}

impl DemandOracle for ExplicitTable {
    fn demand_query(&self, prices: &PriceVector) -> Result<DemandAnswer> {
        demand_bruteforce(self, prices, false)
    }
}

impl DemandOracle for CoverageValuation {
    fn demand_query(&self, prices: &PriceVector) -> Result<DemandAnswer> {
        demand_bruteforce(self, prices, false)
    }
}

/// Enumerating demand oracle with a configurable tie rule.
#[derive(Debug, Clone, Copy)]
pub struct BruteDemand<'a, V: ?Sized> {
    pub valuation: &'a V,
    pub rule: TieRule,
}

impl<V: GroundSet + ?Sized> GroundSet for BruteDemand<'_, V> {
    fn ground_size(&self) -> usize {
        self.valuation.ground_size()
    }
}

impl<V: SetFunction + ?Sized> DemandOracle for BruteDemand<'_, V> {
    fn demand_query(&self, prices: &PriceVector) -> Result<DemandAnswer> {
        let mut answer = demand_bruteforce(self.valuation, prices, true)?;
        let set = answer.demand_set.take().expect("requested");
        answer.bundle = self.rule.pick(&set);
        Ok(answer)
    }
}

/// Value and demand query counts.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct LedgerCounts {
    pub value_queries: u64,
    pub demand_queries: u64,
}

/// Thread-safe query counters. Counts only ever increase.
#[derive(Debug, Default)]
pub struct QueryLedger {
    value_queries: AtomicU64,
    demand_queries: AtomicU64,
}

impl QueryLedger {
    pub fn new() -> Self {
        QueryLedger::default()
    }

    pub fn record_value(&self) {
        self.value_queries.fetch_add(1, Ordering::Relaxed);
    }

    pub fn record_demand(&self) {
        self.demand_queries.fetch_add(1, Ordering::Relaxed);
    }

    pub fn counts(&self) -> LedgerCounts {
        LedgerCounts {
            value_queries: self.value_queries.load(Ordering::Relaxed),
            demand_queries: self.demand_queries.load(Ordering::Relaxed),
        }
    }
}

/// Oracle wrapper that counts every query it forwards.
#[derive(Debug)]
pub struct Metered<'a, O: ?Sized> {
    inner: &'a O,
    ledger: QueryLedger,
}

/// Wraps `oracle` with a fresh ledger.
pub fn metered<O: ?Sized>(oracle: &O) -> Metered<'_, O> {
    Metered {
        inner: oracle,
        ledger: QueryLedger::new(),
    }
}

impl<O: ?Sized> Metered<'_, O> {
    pub fn ledger(&self) -> LedgerCounts {
        self.ledger.counts()
    }
}

impl<O: GroundSet + ?Sized> GroundSet for Metered<'_, O> {
    fn ground_size(&self) -> usize {
        self.inner.ground_size()
    }
}

impl<O: ValueOracle + ?Sized> ValueOracle for Metered<'_, O> {
    fn value_query(&self, set: &ItemSet) -> Rational {
        self.ledger.record_value();
        self.inner.value_query(set)
    }
}

impl<O: DemandOracle + ?Sized> DemandOracle for Metered<'_, O> {
    fn demand_query(&self, prices: &PriceVector) -> Result<DemandAnswer> {
        self.ledger.record_demand();
        self.inner.demand_query(prices)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SimulatedValue {
    pub value: BigInt,
    pub ledger: LedgerCounts,
}

/// Upper bound on the demand queries spent by [`simulate_value_via_demand`]:
/// `|S| · (⌈log2(vmax + 1)⌉ + 1)`.
pub fn simulation_query_bound(set_size: usize, vmax: u64) -> u64 {
    let ceil_log = 64 - u64::from(vmax.leading_zeros());
    set_size as u64 * (ceil_log + 1)
}

/// Recovers `v(S)` from demand queries alone.
///
/// Requires `v` monotone, normalized and integer-valued with every marginal
/// in `[0, vmax]`. Items of `S` are taken in ascending order and each
/// marginal `w_t = v(j_t | j_1..j_{t-1})` is found by binary search: earlier
/// items cost 0, every other item costs `m · vmax + 1` (never worth buying),
/// and `j_t` costs `q + 1/2`, so `j_t` is demanded iff `w_t >= q + 1`. The
/// half-integer price keeps the two candidate optima apart, so the answer
/// does not depend on the oracle's tie rule. When the search ends at `0` or
/// `vmax`, one extra probe checks the marginal is not negative or above
/// `vmax`; non-integer values are not detected here.
pub fn simulate_value_via_demand<O: DemandOracle + ?Sized>(
    oracle: &O,
    set: &ItemSet,
    vmax: u64,
) -> Result<SimulatedValue> {
    let m = oracle.ground_size();
    if set.ground_size() != m {
        return Err(Error::GroundSetMismatch {
            expected: m,
            found: set.ground_size(),
        });
    }
    let oracle = metered(oracle);
    let prohibitive = Rational::from_integer(BigInt::from(m) * BigInt::from(vmax) + 1);
    let half = ratio(1, 2);

    let mut prefix = ItemSet::empty(m)?;
    let mut total = BigInt::zero();
    for item in set.items() {
        let allowed = prefix.with(item);
        // Is `item` demanded when it costs q + 1/2?
        let probe = |q: &BigInt| -> Result<bool> {
            let prices: Vec<Rational> = (1..=m)
                .map(|j| {
                    if j == item {
                        Rational::from_integer(q.clone()) + &half
                    } else if prefix.contains(j) {
                        Rational::zero()
                    } else {
                        prohibitive.clone()
                    }
                })
                .collect();
            let answer = oracle.demand_query(&PriceVector::new(prices)?)?;
            if !answer.bundle.is_subset_of(&allowed) {
                return Err(Error::Precondition(format!(
                    "demand bundle {} contains a prohibitively priced item; marginals exceed vmax = {vmax}",
                    answer.bundle
                )));
            }
            Ok(answer.bundle.contains(item))
        };

        let (mut lo, mut hi) = (BigInt::zero(), BigInt::from(vmax));
        while lo < hi {
            let mid: BigInt = (&lo + &hi + 1u32).div_floor(&BigInt::from(2));
            if probe(&(&mid - 1u32))? {
                lo = mid;
            } else {
                hi = mid - 1u32;
            }
        }
        // The search is blind outside [0, vmax]; one probe at the end it
        // landed on checks the marginal really lies inside.
        if lo.is_zero() {
            if !probe(&BigInt::from(-1))? {
                return Err(Error::Precondition(format!(
                    "marginal of item {item} given {prefix} is negative; valuation is not monotone"
                )));
            }
        } else if lo == BigInt::from(vmax) && probe(&lo)? {
            return Err(Error::Precondition(format!(
                "marginal of item {item} given {prefix} exceeds vmax = {vmax}"
            )));
        }
        total += lo;
        prefix = allowed;
    }
    Ok(SimulatedValue {
        value: total,
        ledger: oracle.ledger(),
    })
}
