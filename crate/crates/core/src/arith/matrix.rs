// SPDX-License-Identifier: Apache-2.0

//! Exact Gauss-Jordan elimination over the rationals.
//!
//! Pivoting is fully deterministic: columns are scanned left to right and
//! the pivot row is the remaining row with the smallest original index.
//! The ordered pivot list is kept as a trace so a kernel can be re-derived
//! and checked independently.

use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use super::{ArithError, Rational};

/// Dense rational matrix with labelled columns.
#[derive(Debug, Clone, PartialEq)]
pub struct RationalMatrix {
    labels: Vec<String>,
    rows: Vec<Vec<Rational>>,
}

/// One elimination step: original row index and column.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct Pivot {
    pub row: usize,
    pub col: usize,
}

/// Result of eliminating a matrix: pivots in order, the kernel basis, and
/// the rank.
#[derive(Debug, Clone, PartialEq)]
pub struct Elimination {
    pub pivots: Vec<Pivot>,
    pub basis: Vec<Vec<Rational>>,
}

impl Elimination {
    pub fn rank(&self) -> usize {
        self.pivots.len()
    }
}

impl RationalMatrix {
    pub fn new(labels: Vec<String>) -> Self {
        RationalMatrix { labels, rows: Vec::new() }
    }

    pub fn from_rows(labels: Vec<String>, rows: Vec<Vec<Rational>>) -> Result<Self, ArithError> {
        let mut m = RationalMatrix::new(labels);
        for r in rows {
            m.push_row(r)?;
        }
        Ok(m)
    }

    pub fn push_row(&mut self, row: Vec<Rational>) -> Result<(), ArithError> {
        if row.len() != self.labels.len() {
            return Err(ArithError::Arity { expected: self.labels.len(), found: row.len() });
        }
        self.rows.push(row);
        Ok(())
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn rows(&self) -> &[Vec<Rational>] {
        &self.rows
    }

    pub fn ncols(&self) -> usize {
        self.labels.len()
    }

    pub fn nrows(&self) -> usize {
        self.rows.len()
    }

    /// `M v`, exactly.
    pub fn apply(&self, v: &[Rational]) -> Vec<Rational> {
        self.rows
            .iter()
            .map(|r| r.iter().zip(v).fold(Rational::zero(), |acc, (a, b)| acc + a * b))
            .collect()
    }

    /// Rows except those whose index is in `drop`.
    pub fn without_rows(&self, drop: &[usize]) -> RationalMatrix {
        RationalMatrix {
            labels: self.labels.clone(),
            rows: self
                .rows
                .iter()
                .enumerate()
                .filter(|(i, _)| !drop.contains(i))
                .map(|(_, r)| r.clone())
                .collect(),
        }
    }

    /// Gauss-Jordan elimination with the deterministic pivot rule.
    pub fn eliminate(&self) -> Elimination {
        let mut work = Reducer::new(self);
        for col in 0..self.ncols() {
            let candidate = (work.done..work.rows.len())
                .filter(|&i| !work.rows[i][col].is_zero())
                .min_by_key(|&i| work.origin[i]);
            if let Some(i) = candidate {
                work.pivot_at(i, col);
            }
        }
        work.finish()
    }

    /// Re-runs elimination using exactly the recorded pivots and returns the
    /// kernel basis they determine. Fails if a recorded pivot is zero when
    /// reached, or if rows remain nonzero after the last pivot.
    pub fn replay(&self, pivots: &[Pivot]) -> Result<Vec<Vec<Rational>>, ArithError> {
        let mut work = Reducer::new(self);
        let mut last_col = None;
        for pv in pivots {
            if pv.col >= self.ncols() || pv.row >= self.nrows() {
                return Err(ArithError::BadTrace(format!("pivot {pv:?} out of range")));
            }
            if last_col.is_some_and(|c| c >= pv.col) {
                return Err(ArithError::BadTrace("pivot columns not increasing".into()));
            }
            last_col = Some(pv.col);
            let i = (work.done..work.rows.len())
                .find(|&i| work.origin[i] == pv.row)
                .ok_or_else(|| ArithError::BadTrace(format!("row {} reused", pv.row)))?;
            if work.rows[i][pv.col].is_zero() {
                return Err(ArithError::BadTrace(format!("zero pivot at {pv:?}")));
            }
            work.pivot_at(i, pv.col);
        }
        if work.rows[work.done..].iter().any(|r| r.iter().any(|x| !x.is_zero())) {
            return Err(ArithError::BadTrace("rows left unreduced after last pivot".into()));
        }
        Ok(work.finish().basis)
    }
}

struct Reducer {
    rows: Vec<Vec<Rational>>,
    origin: Vec<usize>,
    pivots: Vec<Pivot>,
    done: usize,
    ncols: usize,
}

impl Reducer {
    fn new(m: &RationalMatrix) -> Self {
        Reducer {
            rows: m.rows.clone(),
            origin: (0..m.nrows()).collect(),
            pivots: Vec::new(),
            done: 0,
            ncols: m.ncols(),
        }
    }

    fn pivot_at(&mut self, i: usize, col: usize) {
        let r = self.done;
        self.rows.swap(r, i);
        self.origin.swap(r, i);
        let inv = Rational::one() / &self.rows[r][col];
        for x in self.rows[r].iter_mut() {
            *x *= &inv;
        }
        let pivot_row = self.rows[r].clone();
        for (t, row) in self.rows.iter_mut().enumerate() {
            if t == r || row[col].is_zero() {
                continue;
            }
            let factor = row[col].clone();
            for (x, p) in row.iter_mut().zip(&pivot_row) {
                if !p.is_zero() {
                    *x -= &factor * p;
                }
            }
        }
        self.pivots.push(Pivot { row: self.origin[r], col });
        self.done += 1;
    }

    fn finish(self) -> Elimination {
        let pivot_cols: Vec<usize> = self.pivots.iter().map(|p| p.col).collect();
        let basis = (0..self.ncols)
            .filter(|c| !pivot_cols.contains(c))
            .map(|free| {
                let mut v = vec![Rational::zero(); self.ncols];
                v[free] = Rational::one();
                for (t, &pc) in pivot_cols.iter().enumerate() {
                    v[pc] = -self.rows[t][free].clone();
                }
                v
            })
            .collect();
        Elimination { pivots: self.pivots, basis }
    }
}

/// Exact basis of the right kernel; empty means the kernel is trivial.
pub fn kernel(m: &RationalMatrix) -> Vec<Vec<Rational>> {
    m.eliminate().basis
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::rat;
    use proptest::prelude::*;

    fn matrix(rows: &[&[i64]]) -> RationalMatrix {
        let n = rows.first().map_or(0, |r| r.len());
        let labels = (0..n).map(|i| format!("x{i}")).collect();
        RationalMatrix::from_rows(labels, rows.iter().map(|r| r.iter().map(|&x| rat(x)).collect()).collect())
            .unwrap()
    }

    #[test]
    fn identity_has_trivial_kernel() {
        assert!(kernel(&matrix(&[&[1, 0], &[0, 1]])).is_empty());
    }

    #[test]
    fn zero_matrix_kernel_is_everything() {
        let k = kernel(&matrix(&[&[0, 0], &[0, 0]]));
        assert_eq!(k, vec![vec![rat(1), rat(0)], vec![rat(0), rat(1)]]);
    }

    #[test]
    fn rank_one() {
        let k = kernel(&matrix(&[&[1, 1], &[2, 2]]));
        assert_eq!(k, vec![vec![rat(-1), rat(1)]]);
    }

    #[test]
    fn pivot_rule_is_leftmost_then_lowest_row() {
        let m = matrix(&[&[0, 2, 1], &[0, 1, 0], &[3, 0, 0]]);
        let e = m.eliminate();
        assert_eq!(e.pivots, vec![Pivot { row: 2, col: 0 }, Pivot { row: 0, col: 1 }, Pivot { row: 1, col: 2 }]);
    }

    #[test]
    fn arity_checked() {
        let mut m = RationalMatrix::new(vec!["a".into(), "b".into()]);
        assert_eq!(m.push_row(vec![rat(1)]), Err(ArithError::Arity { expected: 2, found: 1 }));
    }

    #[test]
    fn bad_traces_rejected() {
        let m = matrix(&[&[1, 1], &[2, 2]]);
        assert!(m.replay(&[Pivot { row: 0, col: 1 }, Pivot { row: 1, col: 0 }]).is_err());
        assert!(m.replay(&[]).is_err());
        assert!(m.replay(&[Pivot { row: 0, col: 0 }, Pivot { row: 1, col: 1 }]).is_err());
        // a different but valid pivot sequence yields a kernel of the same span
        let alt = m.replay(&[Pivot { row: 1, col: 0 }]).unwrap();
        assert_eq!(alt, vec![vec![rat(-1), rat(1)]]);
    }

    proptest! {
        #[test]
        fn kernel_vectors_annihilate(rows in prop::collection::vec(prop::collection::vec(-3i64..=3, 5), 0..6)) {
            let labels = (0..5).map(|i| format!("x{i}")).collect();
            let m = RationalMatrix::from_rows(
                labels,
                rows.iter().map(|r| r.iter().map(|&x| rat(x)).collect()).collect(),
            ).unwrap();
            let e = m.eliminate();
            prop_assert_eq!(e.rank() + e.basis.len(), 5);
            for v in &e.basis {
                prop_assert!(m.apply(v).iter().all(|x| x.is_zero()));
            }
            prop_assert_eq!(m.replay(&e.pivots).unwrap(), e.basis);
        }
    }
}
