//! Small reference instances used throughout the docs, examples and tests.
//!
//! * `ADD3`: additive with weights `(3, 1, 2)`.
//! * `XOS3`: clauses `(1, 1, 0)` and `(0, 0, 1)`; XOS but not submodular.
//! * `SUB3`: `v(S) = 1` for `1 <= |S| <= 2` and `v(M) = 2`; subadditive but
//!   not XOS.

use crate::rational::int;
use crate::valuations::{AdditiveValuation, ExplicitTable, Valuation, XosValuation};

fn ints(xs: &[i64]) -> Vec<crate::Rational> {
    xs.iter().map(|&x| int(x)).collect()
}

pub fn add3() -> Valuation {
    AdditiveValuation::new(ints(&[3, 1, 2])).unwrap().into()
}

pub fn xos3() -> Valuation {
    XosValuation::new(vec![ints(&[1, 1, 0]), ints(&[0, 0, 1])])
        .unwrap()
        .into()
}

pub fn sub3() -> Valuation {
    ExplicitTable::new(3, ints(&[0, 1, 1, 1, 1, 1, 1, 2]))
        .unwrap()
        .into()
}
