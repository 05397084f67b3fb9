//! Seeded instance generators.
//!
//! Randomness comes only from an explicit 64-bit seed fed to SplitMix64
//! (Steele, Lea and Flood, 2014; state initialized to the seed). Bounded
//! draws use rejection: for a range of size `n`, outputs below
//! `2^64 mod n` are discarded and the rest reduced modulo `n`. Every
//! generator consumes draws in the order documented on it, so output is
//! reproducible across platforms and implementations.

use num_bigint::BigInt;
use rand_core::{RngCore, SeedableRng};
use rand_xoshiro::SplitMix64;

use crate::error::{Error, Result};
use crate::instance::{Instance, Kind};
use crate::rational::Rational;
use crate::setcore::MAX_ITEMS;
use crate::valuations::{
    AdditiveValuation, CostVector, CoverageValuation, ExplicitTable, Valuation, XosValuation,
    TABLE_CAP,
};

/// Largest cost drawn for generated knapsack instances.
pub const MAX_COST: u64 = 10;

pub struct Draws(SplitMix64);

impl Draws {
    pub fn new(seed: u64) -> Self {
        Draws(SplitMix64::seed_from_u64(seed))
    }

    pub fn next_u64(&mut self) -> u64 {
        self.0.next_u64()
    }

    /// Uniform in `0..n`; `n` must be positive.
    pub fn below(&mut self, n: u64) -> u64 {
        assert!(n > 0, "empty range");
        let threshold = n.wrapping_neg() % n;
        loop {
            let x = self.next_u64();
            if x >= threshold {
                return x % n;
            }
        }
    }

    /// Uniform in `lo..=hi`.
    pub fn between(&mut self, lo: u64, hi: u64) -> u64 {
        assert!(lo <= hi, "empty range");
        if hi - lo == u64::MAX {
            return self.next_u64();
        }
        lo + self.below(hi - lo + 1)
    }

    fn rational_between(&mut self, lo: u64, hi: u64) -> Rational {
        Rational::from_integer(BigInt::from(self.between(lo, hi)))
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GenParams {
    pub kind: Kind,
    pub m: usize,
    pub seed: u64,
    /// Clause count for XOS instances.
    pub clauses: usize,
    /// Upper bound on generated integer values.
    pub vmax: u64,
    pub with_costs: bool,
}

impl GenParams {
    pub fn new(kind: Kind, m: usize, seed: u64) -> Self {
        GenParams {
            kind,
            m,
            seed,
            clauses: 3,
            vmax: 10,
            with_costs: false,
        }
    }

    fn validate(&self) -> Result<()> {
        if self.m == 0 {
            return Err(Error::EmptyGroundSet);
        }
        let cap = if self.kind == Kind::Table {
            TABLE_CAP
        } else {
            MAX_ITEMS
        };
        if self.m > cap {
            return Err(Error::UnsupportedSize {
                what: "generator",
                m: self.m,
                cap,
            });
        }
        if self.kind == Kind::Xos && self.clauses == 0 {
            return Err(Error::InvalidValuation(
                "XOS generator needs at least one clause".into(),
            ));
        }
        if self.kind == Kind::Coverage && self.vmax == 0 {
            return Err(Error::InvalidValuation(
                "coverage weights need vmax >= 1".into(),
            ));
        }
        Ok(())
    }
}

/// Generates an instance.
///
/// * additive: weights uniform in `0..=vmax`, item 1 first.
/// * xos: `clauses` rows, row by row, entries uniform in `0..=vmax`.
/// * coverage: a universe of `2m` elements with weights in `1..=vmax`, then
///   for each item and each element in turn, coverage with probability 1/3
///   (a draw below 3 equal to 0).
/// * table: raw values in `0..=vmax` for every nonempty set in lex order,
///   then the monotone closure `v(S) = max(raw(S), max_j v(S - j))`.
///
/// With costs, `m` costs in `1..=10` follow, then a budget uniform in
/// `1..=Σ c_j`.
pub fn generate(params: &GenParams) -> Result<Instance> {
    params.validate()?;
    let m = params.m;
    let vmax = params.vmax;
    let mut draws = Draws::new(params.seed);
    let valuation: Valuation = match params.kind {
        Kind::Additive => {
            let weights = (0..m).map(|_| draws.rational_between(0, vmax)).collect();
            AdditiveValuation::new(weights)?.into()
        }
        Kind::Xos => {
            let clauses = (0..params.clauses)
                .map(|_| (0..m).map(|_| draws.rational_between(0, vmax)).collect())
                .collect();
            XosValuation::new(clauses)?.into()
        }
        Kind::Coverage => {
            let universe = 2 * m;
            let weights = (0..universe)
                .map(|_| draws.rational_between(1, vmax))
                .collect();
            let covers = (0..m)
                .map(|_| (0..universe).filter(|_| draws.below(3) == 0).collect())
                .collect();
            CoverageValuation::new(weights, covers)?.into()
        }
        Kind::Table => {
            let count = 1usize << m;
            let mut table: Vec<u64> = vec![0; count];
            for entry in table.iter_mut().skip(1) {
                *entry = draws.between(0, vmax);
            }
            // Removing an item lowers the mask, so subsets are final already.
            for mask in 1..count {
                let mut best = table[mask];
                let mut rest = mask;
                while rest != 0 {
                    let low = rest & rest.wrapping_neg();
                    best = best.max(table[mask ^ low]);
                    rest ^= low;
                }
                table[mask] = best;
            }
            let entries = table
                .into_iter()
                .map(|x| Rational::from_integer(BigInt::from(x)))
                .collect();
            ExplicitTable::new(m, entries)?.into()
        }
    };
    let costs = if params.with_costs {
        let costs: Vec<u64> = (0..m).map(|_| draws.between(1, MAX_COST)).collect();
        let budget = draws.between(1, costs.iter().sum());
        Some(CostVector::new(
            costs
                .into_iter()
                .map(|c| Rational::from_integer(BigInt::from(c)))
                .collect(),
            Rational::from_integer(BigInt::from(budget)),
        )?)
    } else {
        None
    };
    Ok(Instance { valuation, costs })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::classify::{check_additive, check_monotone, check_normalized};

    #[test]
    fn splitmix_reference_stream() {
        // first outputs of splitmix64.c seeded with 0
        let mut d = Draws::new(0);
        assert_eq!(d.next_u64(), 0xe220a8397b1dcdaf);
        assert_eq!(d.next_u64(), 0x6e789e6aa1b965f4);
    }

    #[test]
    fn bounded_draws_stay_in_range() {
        let mut d = Draws::new(42);
        for n in 1..50 {
            assert!(d.below(n) < n);
        }
        for _ in 0..100 {
            let x = d.between(3, 5);
            assert!((3..=5).contains(&x));
        }
    }

    #[test]
    fn same_seed_same_instance() {
        for kind in [Kind::Additive, Kind::Xos, Kind::Coverage, Kind::Table] {
            let mut p = GenParams::new(kind, 5, 7);
            p.with_costs = true;
            assert_eq!(
                generate(&p).unwrap().to_json(),
                generate(&p).unwrap().to_json()
            );
            let mut q = p.clone();
            q.seed = 8;
            assert_ne!(
                generate(&p).unwrap().to_json(),
                generate(&q).unwrap().to_json()
            );
        }
    }

    #[test]
    fn generated_tables_are_monotone_and_normalized() {
        for seed in 0..10 {
            let inst = generate(&GenParams::new(Kind::Table, 5, seed)).unwrap();
            assert!(check_normalized(&inst.valuation).unwrap().holds);
            assert!(check_monotone(&inst.valuation).unwrap().holds);
        }
    }

    #[test]
    fn generated_additive_is_additive() {
        let inst = generate(&GenParams::new(Kind::Additive, 3, 0)).unwrap();
        assert!(check_additive(&inst.valuation).unwrap().holds);
    }

    #[test]
    fn parameter_errors() {
        assert!(generate(&GenParams::new(Kind::Table, 17, 0)).is_err());
        assert!(generate(&GenParams::new(Kind::Additive, 0, 0)).is_err());
        let mut p = GenParams::new(Kind::Xos, 3, 0);
        p.clauses = 0;
        assert!(generate(&p).is_err());
    }
}
