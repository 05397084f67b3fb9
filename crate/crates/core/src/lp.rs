//! Exact rational simplex for small packing LPs.
//!
//! Solves `max c·x  s.t.  A x <= b, x >= 0` with `b >= 0`, so the origin is
//! a feasible starting vertex and no phase one is needed. Pivoting uses
//! Bland's rule, which rules out cycling; all arithmetic is exact.

use num_traits::{Signed, Zero};

use crate::error::{Error, Result};
use crate::rational::Rational;

#[derive(Debug, Clone, PartialEq)]
pub enum LpOutcome {
    Optimal { x: Vec<Rational>, value: Rational },
    Unbounded,
}

/// Dictionary form: row `r` reads `x_basis[r] = rhs[r] - Σ_k coef[r][k] · x_nonbasic[k]`.
struct Dictionary {
    coef: Vec<Vec<Rational>>,
    rhs: Vec<Rational>,
    obj: Vec<Rational>,
    obj_value: Rational,
    basis: Vec<usize>,
    nonbasic: Vec<usize>,
}

impl Dictionary {
    fn entering(&self) -> Option<usize> {
        self.obj
            .iter()
            .enumerate()
            .filter(|(_, c)| c.is_positive())
            .min_by_key(|(k, _)| self.nonbasic[*k])
            .map(|(k, _)| k)
    }

    fn leaving(&self, k: usize) -> Option<usize> {
        let mut best: Option<(usize, Rational)> = None;
        for (r, row) in self.coef.iter().enumerate() {
            if !row[k].is_positive() {
                continue;
            }
            let ratio = &self.rhs[r] / &row[k];
            let better = match &best {
                None => true,
                Some((br, bratio)) => {
                    ratio < *bratio || (ratio == *bratio && self.basis[r] < self.basis[*br])
                }
            };
            if better {
                best = Some((r, ratio));
            }
        }
        best.map(|(r, _)| r)
    }

    fn pivot(&mut self, r: usize, k: usize) {
        let a = self.coef[r][k].clone();
        let width = self.nonbasic.len();
        {
            let row = &mut self.coef[r];
            for (kk, entry) in row.iter_mut().enumerate() {
                if kk == k {
                    *entry = a.recip();
                } else if !entry.is_zero() {
                    *entry = &*entry / &a;
                }
            }
            self.rhs[r] = &self.rhs[r] / &a;
        }
        let pivot_row = self.coef[r].clone();
        let pivot_rhs = self.rhs[r].clone();
        for i in 0..self.coef.len() {
            if i == r || self.coef[i][k].is_zero() {
                continue;
            }
            let factor = self.coef[i][k].clone();
            let row = &mut self.coef[i];
            for kk in 0..width {
                if kk == k {
                    row[kk] = -(&factor * &pivot_row[k]);
                } else if !pivot_row[kk].is_zero() {
                    row[kk] = &row[kk] - &factor * &pivot_row[kk];
                }
            }
            self.rhs[i] = &self.rhs[i] - &factor * &pivot_rhs;
        }
        let c = self.obj[k].clone();
        if !c.is_zero() {
            for kk in 0..width {
                if kk == k {
                    self.obj[kk] = -(&c * &pivot_row[k]);
                } else if !pivot_row[kk].is_zero() {
                    self.obj[kk] = &self.obj[kk] - &c * &pivot_row[kk];
                }
            }
            self.obj_value = &self.obj_value + &c * &pivot_rhs;
        }
        std::mem::swap(&mut self.basis[r], &mut self.nonbasic[k]);
    }
}

/// Maximizes `objective · x` subject to `rows[i] · x <= bounds[i]`, `x >= 0`.
///
/// Every bound must be nonnegative.
pub fn maximize(
    objective: &[Rational],
    rows: &[Vec<Rational>],
    bounds: &[Rational],
) -> Result<LpOutcome> {
    let n = objective.len();
    if rows.len() != bounds.len() {
        return Err(Error::Arity {
            what: "LP bounds",
            expected: rows.len(),
            found: bounds.len(),
        });
    }
    if let Some(row) = rows.iter().find(|r| r.len() != n) {
        return Err(Error::Arity {
            what: "LP row",
            expected: n,
            found: row.len(),
        });
    }
    if bounds.iter().any(|b| b.is_negative()) {
        return Err(Error::Precondition(
            "LP bounds must be nonnegative so the origin is feasible".into(),
        ));
    }

    let mut dict = Dictionary {
        coef: rows.to_vec(),
        rhs: bounds.to_vec(),
        obj: objective.to_vec(),
        obj_value: Rational::zero(),
        basis: (n..n + rows.len()).collect(),
        nonbasic: (0..n).collect(),
    };

    while let Some(k) = dict.entering() {
        match dict.leaving(k) {
            Some(r) => dict.pivot(r, k),
            None => return Ok(LpOutcome::Unbounded),
        }
    }

    let mut x = vec![Rational::zero(); n];
    for (r, &var) in dict.basis.iter().enumerate() {
        if var < n {
            x[var] = dict.rhs[r].clone();
        }
    }
    Ok(LpOutcome::Optimal {
        x,
        value: dict.obj_value,
    })
}
