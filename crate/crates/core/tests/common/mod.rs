//! Seeded instance families shared by the integration tests.
#![allow(dead_code)]

use num_bigint::BigInt;
use valuekit::gen::{generate, Draws, GenParams};
use valuekit::instance::Kind;
use valuekit::rational::int;
use valuekit::{
    AdditiveValuation, CostVector, CoverageValuation, ExplicitTable, ItemSet, Rational,
    SetFunction, Valuation, XosValuation,
};

pub fn additive(m: usize, seed: u64, vmax: u64) -> Valuation {
    let mut p = GenParams::new(Kind::Additive, m, seed);
    p.vmax = vmax;
    generate(&p).unwrap().valuation
}

pub fn xos(m: usize, clauses: usize, seed: u64, vmax: u64) -> Valuation {
    let mut p = GenParams::new(Kind::Xos, m, seed);
    p.clauses = clauses;
    p.vmax = vmax;
    generate(&p).unwrap().valuation
}

pub fn coverage(m: usize, seed: u64, vmax: u64) -> Valuation {
    let mut p = GenParams::new(Kind::Coverage, m, seed);
    p.vmax = vmax;
    generate(&p).unwrap().valuation
}

/// Monotone closure of random values: monotone, usually neither submodular
/// nor XOS.
pub fn monotone_table(m: usize, seed: u64, vmax: u64) -> Valuation {
    let mut p = GenParams::new(Kind::Table, m, seed);
    p.vmax = vmax;
    generate(&p).unwrap().valuation
}

/// `min(cap, w(S)) + coverage(S)` tabulated: monotone submodular, and
/// not coverage in general.
pub fn budget_additive_plus_coverage(m: usize, seed: u64) -> Valuation {
    let mut d = Draws::new(seed ^ 0x5eed);
    let weights: Vec<u64> = (0..m).map(|_| d.between(0, 9)).collect();
    let cap = d.between(1, weights.iter().sum::<u64>().max(1));
    let cov = coverage(m, seed, 5);
    let table = (0..1u64 << m)
        .map(|i| {
            let s = ItemSet::from_lex_index(m, i).unwrap();
            let w: u64 = s.items().map(|j| weights[j - 1]).sum();
            int(w.min(cap) as i64) + cov.value(&s)
        })
        .collect();
    ExplicitTable::new(m, table).unwrap().into()
}

/// Monotone submodular instances of every representation.
pub fn monotone_submodular(m: usize, seed: u64) -> Valuation {
    match seed % 3 {
        0 => coverage(m, seed, 10),
        1 => budget_additive_plus_coverage(m, seed),
        _ => additive(m, seed, 10),
    }
}

/// A mix of all four representations, cycling on `index`.
pub fn mixed(m: usize, index: u64) -> Valuation {
    match index % 5 {
        0 => additive(m, index, 10),
        1 => xos(m, 1 + (index as usize / 5) % 4, index, 10),
        2 => coverage(m, index, 6),
        3 => monotone_table(m, index, 12),
        _ => budget_additive_plus_coverage(m, index),
    }
}

pub fn costs(m: usize, seed: u64) -> CostVector {
    let mut d = Draws::new(seed ^ 0xc057);
    let c: Vec<u64> = (0..m).map(|_| d.between(1, 10)).collect();
    let budget = d.between(1, c.iter().sum());
    CostVector::new(
        c.into_iter().map(|x| int(x as i64)).collect(),
        int(budget as i64),
    )
    .unwrap()
}

/// Largest `v(T + j) - v(T)` over all `T` and `j` outside `T`.
pub fn max_marginal<V: SetFunction + ?Sized>(v: &V) -> Rational {
    let m = v.ground_size();
    let values = v.values_in_lex_order().unwrap();
    let mut best = int(0);
    for (i, vt) in values.iter().enumerate() {
        let t = ItemSet::from_lex_index(m, i as u64).unwrap();
        for j in (1..=m).filter(|&j| !t.contains(j)) {
            let d = &values[t.with(j).lex_index() as usize] - vt;
            if d > best {
                best = d;
            }
        }
    }
    best
}

pub fn to_u64(x: &Rational) -> u64 {
    assert!(x.is_integer());
    u64::try_from(x.to_integer()).unwrap()
}

pub fn rational(numer: i64, denom: i64) -> Rational {
    Rational::new(BigInt::from(numer), BigInt::from(denom))
}

pub fn as_xos(v: &Valuation) -> &XosValuation {
    match v {
        Valuation::Xos(x) => x,
        _ => panic!("not an XOS valuation"),
    }
}

pub fn as_additive(v: &Valuation) -> &AdditiveValuation {
    match v {
        Valuation::Additive(a) => a,
        _ => panic!("not an additive valuation"),
    }
}

pub fn as_coverage(v: &Valuation) -> &CoverageValuation {
    match v {
        Valuation::Coverage(c) => c,
        _ => panic!("not a coverage valuation"),
    }
}
