//! Exact set-function toolkit: valuations over a finite ground set of items,
//! class certifiers, value and demand query oracles, and solvers for
//! cardinality- and budget-constrained maximization.
//!
//! All arithmetic is over arbitrary-precision rationals, so ties are
//! detected exactly and broken by a fixed lexicographic rule.

pub mod classify;
pub mod cli;
pub mod error;
pub mod fixtures;
pub mod gen;
pub mod instance;
pub mod lp;
pub mod optimize;
pub mod oracles;
pub mod rational;
pub mod setcore;
pub mod valuations;

pub use error::{Error, Result};
pub use rational::Rational;
pub use setcore::{lex_compare, ItemSet};
pub use valuations::{
    AdditiveValuation, CostVector, CoverageValuation, ExplicitTable, GroundSet, SetFunction,
    Valuation, XosValuation,
};
