//! Valuation representations and direct evaluation.
//!
//! Every valuation is a normalized set function over items `1..=m`. Values
//! are exact rationals; nothing here rounds.

use num_bigint::BigInt;
use num_traits::Zero;

use crate::error::{Error, Result};
use crate::rational::{ensure_nonnegative, Rational};
use crate::setcore::{subsets, ItemSet, MAX_ITEMS};

/// Largest ground set an [`ExplicitTable`] may hold.
pub const TABLE_CAP: usize = 16;

/// Anything defined over the ground set `{1, …, m}`.
pub trait GroundSet {
    fn ground_size(&self) -> usize;
}

/// A set function `v : 2^M -> Q` with `v(∅) = 0`.
pub trait SetFunction: GroundSet {
    /// `v(set)`. Panics if `set` lives on a different ground set.
    fn value(&self, set: &ItemSet) -> Rational;

    /// All `2^m` values in lexicographic subset order.
    fn values_in_lex_order(&self) -> Result<Vec<Rational>> {
        Ok(subsets(self.ground_size())?
            .map(|s| self.value(&s))
            .collect())
    }
}

fn check_ground(m: usize) -> Result<()> {
    if m == 0 {
        Err(Error::EmptyGroundSet)
    } else if m > MAX_ITEMS {
        Err(Error::UnsupportedSize {
            what: "valuation",
            m,
            cap: MAX_ITEMS,
        })
    } else {
        Ok(())
    }
}

fn assert_ground(expected: usize, set: &ItemSet) {
    assert_eq!(
        set.ground_size(),
        expected,
        "set {set} is not over the valuation's ground set of {expected} items"
    );
}

/// Sum of `row[j-1]` over the members `j` of `set`.
fn row_sum(row: &[Rational], set: &ItemSet) -> Rational {
    set.items()
        .fold(Rational::zero(), |acc, j| acc + &row[j - 1])
}

/// Lex-ordered subset sums of a per-item row: each mask extends the mask
/// without its lowest bit by one item.
pub(crate) fn additive_table(row: &[Rational]) -> Result<Vec<Rational>> {
    let count = subsets(row.len())?.len();
    if let Some(ints) = small_integers(row) {
        return Ok(additive_table_i128(&ints)
            .into_iter()
            .map(from_i128)
            .collect());
    }
    let m = row.len();
    let mut out: Vec<Rational> = Vec::with_capacity(count);
    out.push(Rational::zero());
    for mask in 1..count {
        let low = mask & mask.wrapping_neg();
        let item = m - low.trailing_zeros() as usize;
        let sum = &out[mask ^ low] + &row[item - 1];
        out.push(sum);
    }
    Ok(out)
}

/// Subset sums of `row` in lex order.
pub(crate) fn additive_table_i128(row: &[i128]) -> Vec<i128> {
    let m = row.len();
    let count = 1usize << m;
    let mut out = Vec::with_capacity(count);
    out.push(0);
    for mask in 1..count {
        let low = mask & mask.wrapping_neg();
        let item = m - low.trailing_zeros() as usize;
        out.push(out[mask ^ low] + row[item - 1]);
    }
    out
}

/// `row` as integers when every entry is an integer below `2^100` in
/// magnitude, so sums over up to 64 items cannot overflow.
pub(crate) fn small_integers(row: &[Rational]) -> Option<Vec<i128>> {
    const LIMIT: i128 = 1 << 100;
    row.iter()
        .map(|x| {
            if !x.is_integer() {
                return None;
            }
            i128::try_from(x.numer()).ok().filter(|n| n.abs() < LIMIT)
        })
        .collect()
}

pub(crate) fn from_i128(n: i128) -> Rational {
    Rational::from_integer(BigInt::from(n))
}

#[derive(Debug, Clone, PartialEq)]
pub struct AdditiveValuation {
    weights: Vec<Rational>,
}

impl AdditiveValuation {
    pub fn new(weights: Vec<Rational>) -> Result<Self> {
        check_ground(weights.len())?;
        ensure_nonnegative("weights", &weights)?;
        Ok(AdditiveValuation { weights })
    }

    pub fn weights(&self) -> &[Rational] {
        &self.weights
    }

    pub fn weight(&self, item: usize) -> &Rational {
        &self.weights[item - 1]
    }
}

impl GroundSet for AdditiveValuation {
    fn ground_size(&self) -> usize {
        self.weights.len()
    }
}

impl SetFunction for AdditiveValuation {
    fn value(&self, set: &ItemSet) -> Rational {
        assert_ground(self.ground_size(), set);
        row_sum(&self.weights, set)
    }

    fn values_in_lex_order(&self) -> Result<Vec<Rational>> {
        additive_table(&self.weights)
    }
}

/// Pointwise maximum of nonnegative additive clauses.
#[derive(Debug, Clone, PartialEq)]
pub struct XosValuation {
    m: usize,
    clauses: Vec<Vec<Rational>>,
}

impl XosValuation {
    pub fn new(clauses: Vec<Vec<Rational>>) -> Result<Self> {
        let first = clauses.first().ok_or_else(|| {
            Error::InvalidValuation("an XOS valuation needs at least one clause".into())
        })?;
        let m = first.len();
        check_ground(m)?;
        for (i, clause) in clauses.iter().enumerate() {
            if clause.len() != m {
                return Err(Error::Arity {
                    what: "XOS clause",
                    expected: m,
                    found: clause.len(),
                });
            }
            ensure_nonnegative(&format!("clause {}", i + 1), clause)?;
        }
        Ok(XosValuation { m, clauses })
    }

    pub fn clauses(&self) -> &[Vec<Rational>] {
        &self.clauses
    }

    /// Value of clause `index` (1-based) at `set`.
    pub fn clause_value(&self, index: usize, set: &ItemSet) -> Rational {
        row_sum(&self.clauses[index - 1], set)
    }

    /// Smallest 1-based clause index attaining `max_i a_i(set)`.
    pub fn maximizing_clause(&self, set: &ItemSet) -> usize {
        assert_ground(self.m, set);
        let mut best = 1;
        let mut best_value = row_sum(&self.clauses[0], set);
        for (i, clause) in self.clauses.iter().enumerate().skip(1) {
            let v = row_sum(clause, set);
            if v > best_value {
                best = i + 1;
                best_value = v;
            }
        }
        best
    }
}

impl GroundSet for XosValuation {
    fn ground_size(&self) -> usize {
        self.m
    }
}

impl SetFunction for XosValuation {
    fn value(&self, set: &ItemSet) -> Rational {
        assert_ground(self.m, set);
        self.clauses
            .iter()
            .map(|c| row_sum(c, set))
            .max()
            .expect("at least one clause")
    }

    fn values_in_lex_order(&self) -> Result<Vec<Rational>> {
        let ints: Option<Vec<Vec<i128>>> = self.clauses.iter().map(|c| small_integers(c)).collect();
        if let Some(ints) = ints {
            subsets(self.m)?;
            let mut out = additive_table_i128(&ints[0]);
            for clause in &ints[1..] {
                for (best, v) in out.iter_mut().zip(additive_table_i128(clause)) {
                    *best = (*best).max(v);
                }
            }
            return Ok(out.into_iter().map(from_i128).collect());
        }
        let mut out = additive_table(&self.clauses[0])?;
        for clause in &self.clauses[1..] {
            for (best, v) in out.iter_mut().zip(additive_table(clause)?) {
                if v > *best {
                    *best = v;
                }
            }
        }
        Ok(out)
    }
}

/// A set function given by its value on every subset, in lex order.
#[derive(Debug, Clone, PartialEq)]
pub struct ExplicitTable {
    m: usize,
    table: Vec<Rational>,
}

impl ExplicitTable {
    pub fn new(m: usize, table: Vec<Rational>) -> Result<Self> {
        check_ground(m)?;
        if m > TABLE_CAP {
            return Err(Error::UnsupportedSize {
                what: "explicit table",
                m,
                cap: TABLE_CAP,
            });
        }
        if table.len() != 1 << m {
            return Err(Error::Arity {
                what: "table",
                expected: 1 << m,
                found: table.len(),
            });
        }
        if !table[0].is_zero() {
            return Err(Error::NotNormalized(table[0].to_string()));
        }
        Ok(ExplicitTable { m, table })
    }

    /// Values in lex subset order (`∅, {m}, {m-1}, …`).
    pub fn entries(&self) -> &[Rational] {
        &self.table
    }
}

impl GroundSet for ExplicitTable {
    fn ground_size(&self) -> usize {
        self.m
    }
}

impl SetFunction for ExplicitTable {
    fn value(&self, set: &ItemSet) -> Rational {
        assert_ground(self.m, set);
        self.table[set.lex_index() as usize].clone()
    }

    fn values_in_lex_order(&self) -> Result<Vec<Rational>> {
        Ok(self.table.clone())
    }
}

/// Weighted coverage: each item covers a set of ground elements and a
/// bundle is worth the total weight of the elements it covers.
#[derive(Debug, Clone, PartialEq)]
pub struct CoverageValuation {
    element_weights: Vec<Rational>,
    covers: Vec<Vec<usize>>,
}

impl CoverageValuation {
    /// `covers[j-1]` lists the 0-based element indices covered by item `j`.
    pub fn new(element_weights: Vec<Rational>, covers: Vec<Vec<usize>>) -> Result<Self> {
        check_ground(covers.len())?;
        ensure_nonnegative("universe", &element_weights)?;
        let mut covers = covers;
        for (j, cover) in covers.iter_mut().enumerate() {
            if let Some(&bad) = cover.iter().find(|&&e| e >= element_weights.len()) {
                return Err(Error::InvalidValuation(format!(
                    "item {} covers element {bad}, but the universe has {} elements",
                    j + 1,
                    element_weights.len()
                )));
            }
            cover.sort_unstable();
            cover.dedup();
        }
        Ok(CoverageValuation {
            element_weights,
            covers,
        })
    }

    pub fn element_weights(&self) -> &[Rational] {
        &self.element_weights
    }

    pub fn covers(&self) -> &[Vec<usize>] {
        &self.covers
    }
}

impl GroundSet for CoverageValuation {
    fn ground_size(&self) -> usize {
        self.covers.len()
    }
}

impl SetFunction for CoverageValuation {
    fn value(&self, set: &ItemSet) -> Rational {
        assert_ground(self.ground_size(), set);
        let mut covered = vec![false; self.element_weights.len()];
        for j in set.items() {
            for &e in &self.covers[j - 1] {
                covered[e] = true;
            }
        }
        covered
            .iter()
            .zip(&self.element_weights)
            .filter(|(c, _)| **c)
            .fold(Rational::zero(), |acc, (_, w)| acc + w)
    }

    fn values_in_lex_order(&self) -> Result<Vec<Rational>> {
        let count = subsets(self.ground_size())?.len();
        let universe = self.element_weights.len();
        if universe > 128 {
            return Ok(subsets(self.ground_size())?
                .map(|s| self.value(&s))
                .collect());
        }
        let m = self.ground_size();
        let item_masks: Vec<u128> = self
            .covers
            .iter()
            .map(|c| c.iter().fold(0u128, |acc, &e| acc | 1 << e))
            .collect();
        // v(S) = v(S - j) + weight of the elements j adds.
        let mut covered = vec![0u128; count];
        let mut gains: Vec<u128> = vec![0; count];
        for mask in 1..count {
            let low = mask & mask.wrapping_neg();
            let item = m - low.trailing_zeros() as usize;
            let before = covered[mask ^ low];
            covered[mask] = before | item_masks[item - 1];
            gains[mask] = covered[mask] & !before;
        }
        let weight_of =
            |bits: u128| -> Vec<usize> { (0..universe).filter(|e| bits >> e & 1 == 1).collect() };
        if let Some(w) = small_integers(&self.element_weights) {
            let mut out = vec![0i128; count];
            for mask in 1..count {
                let low = mask & mask.wrapping_neg();
                let added: i128 = weight_of(gains[mask]).into_iter().map(|e| w[e]).sum();
                out[mask] = out[mask ^ low] + added;
            }
            return Ok(out.into_iter().map(from_i128).collect());
        }
        let mut out = vec![Rational::zero(); count];
        for mask in 1..count {
            let low = mask & mask.wrapping_neg();
            let mut value = out[mask ^ low].clone();
            for e in weight_of(gains[mask]) {
                value += &self.element_weights[e];
            }
            out[mask] = value;
        }
        Ok(out)
    }
}

/// Any of the supported valuation representations.
#[derive(Debug, Clone, PartialEq)]
pub enum Valuation {
    Additive(AdditiveValuation),
    Xos(XosValuation),
    Table(ExplicitTable),
    Coverage(CoverageValuation),
}

impl Valuation {
    pub fn kind(&self) -> &'static str {
        match self {
            Valuation::Additive(_) => "additive",
            Valuation::Xos(_) => "xos",
            Valuation::Table(_) => "table",
            Valuation::Coverage(_) => "coverage",
        }
    }

    fn inner(&self) -> &dyn SetFunction {
        match self {
            Valuation::Additive(v) => v,
            Valuation::Xos(v) => v,
            Valuation::Table(v) => v,
            Valuation::Coverage(v) => v,
        }
    }
}

impl GroundSet for Valuation {
    fn ground_size(&self) -> usize {
        self.inner().ground_size()
    }
}

impl SetFunction for Valuation {
    fn value(&self, set: &ItemSet) -> Rational {
        self.inner().value(set)
    }

    fn values_in_lex_order(&self) -> Result<Vec<Rational>> {
        self.inner().values_in_lex_order()
    }
}

impl From<AdditiveValuation> for Valuation {
    fn from(v: AdditiveValuation) -> Self {
        Valuation::Additive(v)
    }
}

impl From<XosValuation> for Valuation {
    fn from(v: XosValuation) -> Self {
        Valuation::Xos(v)
    }
}

impl From<ExplicitTable> for Valuation {
    fn from(v: ExplicitTable) -> Self {
        Valuation::Table(v)
    }
}

impl From<CoverageValuation> for Valuation {
    fn from(v: CoverageValuation) -> Self {
        Valuation::Coverage(v)
    }
}

/// `v(S | T) = v(S ∪ T) - v(T)`.
pub fn marginal<V: SetFunction + ?Sized>(v: &V, set: &ItemSet, given: &ItemSet) -> Rational {
    v.value(&set.union(given)) - v.value(given)
}

/// Tabulates any valuation (`m <= 16`).
pub fn expand_to_table<V: SetFunction + ?Sized>(v: &V) -> Result<ExplicitTable> {
    let m = v.ground_size();
    if m > TABLE_CAP {
        return Err(Error::UnsupportedSize {
            what: "table expansion",
            m,
            cap: TABLE_CAP,
        });
    }
    ExplicitTable::new(m, v.values_in_lex_order()?)
}

/// Per-item costs and a budget for the knapsack problem.
#[derive(Debug, Clone, PartialEq)]
pub struct CostVector {
    costs: Vec<Rational>,
    budget: Rational,
}

impl CostVector {
    pub fn new(costs: Vec<Rational>, budget: Rational) -> Result<Self> {
        check_ground(costs.len())?;
        ensure_nonnegative("costs", &costs)?;
        ensure_nonnegative("budget", std::slice::from_ref(&budget))?;
        Ok(CostVector { costs, budget })
    }

    pub fn costs(&self) -> &[Rational] {
        &self.costs
    }

    pub fn cost(&self, item: usize) -> &Rational {
        &self.costs[item - 1]
    }

    pub fn budget(&self) -> &Rational {
        &self.budget
    }

    pub fn ground_size(&self) -> usize {
        self.costs.len()
    }

    /// `C(S) = Σ_{j∈S} c_j`.
    pub fn total_cost(&self, set: &ItemSet) -> Rational {
        assert_ground(self.ground_size(), set);
        row_sum(&self.costs, set)
    }

    pub fn is_affordable(&self, set: &ItemSet) -> bool {
        self.total_cost(set) <= self.budget
    }
}
