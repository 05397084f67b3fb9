//! Exhaustive decision procedures for the valuation classes.
//!
//! Each check tabulates the valuation (`m <= 16`) and tests the defining
//! inequality over every set or pair of sets. A failing check reports the
//! first counterexample found, scanning `S` by cardinality then ascending
//! item list and the partner set `T` (or added item `j`) in lexicographic
//! order, so witnesses are small and reproducible.
//!
//! XOS membership is decided through supporting clauses: `v` is XOS iff for
//! every `S` there is a nonnegative additive `a` with `a(T) <= v(T)` for all
//! `T` and `a(S) = v(S)`. Those clauses, one per set, are returned as the
//! certificate and realize `v` as their pointwise maximum.

use std::fmt;

use num_traits::{Signed, Zero};

use crate::error::{Error, Result};
use crate::lp::{maximize, LpOutcome};
use crate::rational::Rational;
use crate::setcore::{by_size_then_items, ItemSet};
use crate::valuations::{SetFunction, TABLE_CAP};

/// Largest ground set accepted by [`certify_xos`].
pub const XOS_CAP: usize = 10;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Property {
    Normalized,
    Monotone,
    Additive,
    Submodular,
    Subadditive,
    Xos,
}

impl Property {
    pub fn name(self) -> &'static str {
        match self {
            Property::Normalized => "normalized",
            Property::Monotone => "monotone",
            Property::Additive => "additive",
            Property::Submodular => "submodular",
            Property::Subadditive => "subadditive",
            Property::Xos => "xos",
        }
    }

    pub const ALL: [Property; 6] = [
        Property::Normalized,
        Property::Monotone,
        Property::Additive,
        Property::Submodular,
        Property::Subadditive,
        Property::Xos,
    ];
}

impl fmt::Display for Property {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Witness {
    Set(ItemSet),
    Pair(ItemSet, ItemSet),
}

impl fmt::Display for Witness {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Witness::Set(s) => write!(f, "{s}"),
            Witness::Pair(s, t) => write!(f, "{s},{t}"),
        }
    }
}

/// A nonnegative additive clause that is tight at `set` and dominated by
/// the valuation everywhere.
#[derive(Debug, Clone, PartialEq)]
pub struct SupportingClause {
    pub set: ItemSet,
    pub weights: Vec<Rational>,
}

impl SupportingClause {
    pub fn value(&self, set: &ItemSet) -> Rational {
        set.items()
            .fold(Rational::zero(), |acc, j| acc + &self.weights[j - 1])
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ClassReport {
    pub property: Property,
    pub holds: bool,
    /// Counterexample when the property fails.
    pub witness: Option<Witness>,
    /// For a successful XOS certification: one clause per subset, in lex order.
    pub certificate: Vec<SupportingClause>,
    /// Set when the verdict comes from a different property's failure, e.g.
    /// a non-monotone input to [`certify_xos`].
    pub refuted_by: Option<Property>,
}

impl ClassReport {
    fn holds(property: Property) -> Self {
        ClassReport {
            property,
            holds: true,
            witness: None,
            certificate: Vec::new(),
            refuted_by: None,
        }
    }

    fn fails(property: Property, witness: Witness) -> Self {
        ClassReport {
            property,
            holds: false,
            witness: Some(witness),
            certificate: Vec::new(),
            refuted_by: None,
        }
    }
}

/// Tabulated valuation with the scan order shared by all checks.
struct Tabulated {
    m: usize,
    values: Vec<Rational>,
    scan: Vec<ItemSet>,
}

impl Tabulated {
    fn new<V: SetFunction + ?Sized>(v: &V, cap: usize, what: &'static str) -> Result<Self> {
        let m = v.ground_size();
        if m > cap {
            return Err(Error::UnsupportedSize { what, m, cap });
        }
        Ok(Tabulated {
            m,
            values: v.values_in_lex_order()?,
            scan: by_size_then_items(m)?,
        })
    }

    #[inline]
    fn at(&self, s: &ItemSet) -> &Rational {
        &self.values[s.lex_index() as usize]
    }

    fn set(&self, mask: u64) -> ItemSet {
        ItemSet::from_lex_index(self.m, mask).expect("mask within ground set")
    }

    fn count(&self) -> u64 {
        self.values.len() as u64
    }

    fn normalized(&self) -> ClassReport {
        if self.values[0].is_zero() {
            ClassReport::holds(Property::Normalized)
        } else {
            ClassReport::fails(Property::Normalized, Witness::Set(self.set(0)))
        }
    }

    fn monotone(&self) -> ClassReport {
        for s in &self.scan {
            for j in (1..=self.m).filter(|&j| !s.contains(j)) {
                let bigger = s.with(j);
                if self.at(s) > self.at(&bigger) {
                    return ClassReport::fails(Property::Monotone, Witness::Pair(*s, bigger));
                }
            }
        }
        ClassReport::holds(Property::Monotone)
    }

    fn additive(&self) -> ClassReport {
        let singles: Vec<&Rational> = (1..=self.m)
            .map(|j| &self.values[1usize << (self.m - j)])
            .collect();
        for s in &self.scan {
            let sum = s
                .items()
                .fold(Rational::zero(), |acc, j| acc + singles[j - 1]);
            if *self.at(s) != sum {
                return ClassReport::fails(Property::Additive, Witness::Set(*s));
            }
        }
        ClassReport::holds(Property::Additive)
    }

    /// `v(S+i) + v(S+j) >= v(S+i+j) + v(S)` for all `S` and `i, j ∉ S`;
    /// equivalent to the pairwise definition, at `O(2^m m^2)` cost.
    fn locally_submodular(&self) -> bool {
        for mask in 0..self.count() {
            let s = self.set(mask);
            let outside: Vec<usize> = (1..=self.m).filter(|&j| !s.contains(j)).collect();
            for (a, &i) in outside.iter().enumerate() {
                for &j in &outside[a + 1..] {
                    let lhs = self.at(&s.with(i)) + self.at(&s.with(j));
                    let rhs = self.at(&s.with(i).with(j)) + self.at(&s);
                    if lhs < rhs {
                        return false;
                    }
                }
            }
        }
        true
    }

    fn submodular(&self) -> ClassReport {
        if self.locally_submodular() {
            return ClassReport::holds(Property::Submodular);
        }
        for s in &self.scan {
            for t in (0..self.count()).map(|mask| self.set(mask)) {
                let lhs = self.at(s) + self.at(&t);
                let rhs = self.at(&s.union(&t)) + self.at(&s.intersection(&t));
                if lhs < rhs {
                    return ClassReport::fails(Property::Submodular, Witness::Pair(*s, t));
                }
            }
        }
        unreachable!("local and pairwise submodularity are equivalent")
    }

    fn subadditive(&self, monotone: bool) -> ClassReport {
        for s in &self.scan {
            // For monotone v a violating T can be shrunk to T \ S, which comes
            // earlier in lex order, so the first witness is always disjoint.
            let candidates: Box<dyn Iterator<Item = u64>> = if monotone {
                Box::new(submasks_ascending(s.complement().lex_index()))
            } else {
                Box::new(0..self.count())
            };
            for t in candidates.map(|mask| self.set(mask)) {
                if self.at(s) + self.at(&t) < *self.at(&s.union(&t)) {
                    return ClassReport::fails(Property::Subadditive, Witness::Pair(*s, t));
                }
            }
        }
        ClassReport::holds(Property::Subadditive)
    }

    /// Supporting clause tight at `s`, or `None` if none exists.
    ///
    /// Assumes `v` is monotone and normalized. Then a clause may be taken
    /// to vanish outside `s` and only constraints `T ⊆ s` matter, since
    /// `a(T) = a(T ∩ s) <= v(T ∩ s) <= v(T)`.
    fn supporting_clause(&self, s: &ItemSet) -> Option<Vec<Rational>> {
        let members: Vec<usize> = s.items().collect();
        let mut weights = vec![Rational::zero(); self.m];
        if members.is_empty() {
            return Some(weights);
        }

        // Marginals along ascending item order telescope to v(s); they are
        // dominated whenever v is submodular on s.
        let mut prefix = self.set(0);
        for &j in &members {
            let next = prefix.with(j);
            weights[j - 1] = self.at(&next) - self.at(&prefix);
            prefix = next;
        }
        if self.dominated_on_subsets(s, &weights) {
            return Some(weights);
        }

        // max a(s) subject to a(T) <= v(T) for nonempty T ⊆ s, a >= 0
        let width = members.len();
        let mut rows = Vec::new();
        let mut bounds = Vec::new();
        for sub in submasks_ascending(s.lex_index()).skip(1) {
            let t = self.set(sub);
            rows.push(
                members
                    .iter()
                    .map(|&j| {
                        if t.contains(j) {
                            Rational::from_integer(1.into())
                        } else {
                            Rational::zero()
                        }
                    })
                    .collect(),
            );
            bounds.push(self.at(&t).clone());
        }
        let objective = vec![Rational::from_integer(1.into()); width];
        match maximize(&objective, &rows, &bounds).expect("well-formed packing LP") {
            LpOutcome::Optimal { x, value } if value == *self.at(s) => {
                let mut weights = vec![Rational::zero(); self.m];
                for (&j, a) in members.iter().zip(x) {
                    weights[j - 1] = a;
                }
                Some(weights)
            }
            _ => None,
        }
    }

    fn dominated_on_subsets(&self, s: &ItemSet, weights: &[Rational]) -> bool {
        if weights.iter().any(|w| w.is_negative()) {
            return false;
        }
        let clause_row: Vec<Rational> = weights.to_vec();
        submasks_ascending(s.lex_index()).all(|sub| {
            let t = self.set(sub);
            let a = t
                .items()
                .fold(Rational::zero(), |acc, j| acc + &clause_row[j - 1]);
            a <= *self.at(&t)
        })
    }
}

/// Submasks of `mask` in increasing numeric order, starting at 0.
fn submasks_ascending(mask: u64) -> impl Iterator<Item = u64> {
    let mut next = Some(0u64);
    std::iter::from_fn(move || {
        let cur = next?;
        next = if cur == mask {
            None
        } else {
            Some(((cur | !mask).wrapping_add(1)) & mask)
        };
        Some(cur)
    })
}

pub fn check_normalized<V: SetFunction + ?Sized>(v: &V) -> Result<ClassReport> {
    Ok(Tabulated::new(v, TABLE_CAP, "check_normalized")?.normalized())
}

/// Holds iff `v(S) <= v(S ∪ {j})` for every `S` and `j ∉ S`; the witness is
/// the pair `(S, S ∪ {j})`.
pub fn check_monotone<V: SetFunction + ?Sized>(v: &V) -> Result<ClassReport> {
    Ok(Tabulated::new(v, TABLE_CAP, "check_monotone")?.monotone())
}

pub fn check_additive<V: SetFunction + ?Sized>(v: &V) -> Result<ClassReport> {
    Ok(Tabulated::new(v, TABLE_CAP, "check_additive")?.additive())
}

/// Pairwise test `v(S) + v(T) >= v(S ∪ T) + v(S ∩ T)`.
///
/// A local pre-pass settles the positive case in `O(2^m m^2)`; when it
/// fails, the `4^m` pair scan locates the `(S, T)` witness.
pub fn check_submodular<V: SetFunction + ?Sized>(v: &V) -> Result<ClassReport> {
    Ok(Tabulated::new(v, TABLE_CAP, "check_submodular")?.submodular())
}

/// Pairwise test `v(S) + v(T) >= v(S ∪ T)`. Costs `4^m` in general and
/// `3^m` for monotone valuations.
pub fn check_subadditive<V: SetFunction + ?Sized>(v: &V) -> Result<ClassReport> {
    let tab = Tabulated::new(v, TABLE_CAP, "check_subadditive")?;
    let monotone = tab.monotone().holds;
    Ok(tab.subadditive(monotone))
}

/// Decides XOS membership for `m <= 10`.
///
/// Non-normalized or non-monotone inputs are reported as not XOS, carrying
/// that property's witness and `refuted_by`. Otherwise each set gets a
/// supporting clause, found either as its ascending marginal vector or by
/// an exact LP; the first set without one is the witness.
pub fn certify_xos<V: SetFunction + ?Sized>(v: &V) -> Result<ClassReport> {
    let tab = Tabulated::new(v, XOS_CAP, "certify_xos")?;
    for prerequisite in [tab.normalized(), tab.monotone()] {
        if !prerequisite.holds {
            return Ok(ClassReport {
                property: Property::Xos,
                holds: false,
                witness: prerequisite.witness,
                certificate: Vec::new(),
                refuted_by: Some(prerequisite.property),
            });
        }
    }
    let mut certificate = Vec::with_capacity(tab.values.len());
    for s in &tab.scan {
        match tab.supporting_clause(s) {
            Some(weights) => certificate.push(SupportingClause { set: *s, weights }),
            None => return Ok(ClassReport::fails(Property::Xos, Witness::Set(*s))),
        }
    }
    certificate.sort_by_key(|c| c.set);
    Ok(ClassReport {
        certificate,
        ..ClassReport::holds(Property::Xos)
    })
}

/// Runs every check, in [`Property::ALL`] order.
pub fn classify_all<V: SetFunction + ?Sized>(v: &V) -> Result<Vec<ClassReport>> {
    Ok(vec![
        check_normalized(v)?,
        check_monotone(v)?,
        check_additive(v)?,
        check_submodular(v)?,
        check_subadditive(v)?,
        certify_xos(v)?,
    ])
}
