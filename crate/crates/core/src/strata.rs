// SPDX-License-Identifier: Apache-2.0

//! Genus-one strata over finite fields.
//!
//! On an elliptic curve `E` with origin `O`, a tuple lies in `P(k_1..k_r)`
//! iff `Σ k_i p_i = O`. The locus `X(d^1..d^m)` in `M_{1,n}` asks, for each
//! `j`, that `p_1..p_{n-m}` together with `p_{n-m+j}` lie in `P(d^j)`.
//! Counting enumerates the free points and solves the rest through
//! multiplication-by-`d` preimage tables.

use std::collections::{BTreeMap, HashMap};

use num_integer::Integer;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::arith::make_ext_field;
use crate::curves::{CurveError, EllipticCurve, Point};

/// Largest `#E^(n-m+1)` enumerated by default.
pub const DEFAULT_STRATA_BOUND: u64 = 1 << 26;

#[derive(Debug, Error)]
pub enum StrataError {
    #[error("invalid signature {0:?}: {1}")]
    Signature(Vec<i64>, &'static str),
    #[error("expected {expected} points, got {found}")]
    Arity { expected: usize, found: usize },
    #[error("point {0} is not on the curve")]
    NotOnCurve(usize),
    #[error("marked points {0} and {1} coincide")]
    NotDistinct(usize, usize),
    #[error("invalid query: {0}")]
    Query(String),
    #[error("enumeration of {size} tuples exceeds the bound {bound}")]
    TooLarge { size: u128, bound: u64 },
    #[error("condition index {j} outside 1..={m}")]
    Index { j: usize, m: usize },
    #[error(
        "only {found} of the {expected} points of E[{d}] are rational; base-change to an extension \
         containing the full {d}-torsion and retry"
    )]
    TorsionNotRational { d: i64, found: usize, expected: usize },
    #[error("multiplier {d} is divisible by the characteristic {p}")]
    Characteristic { d: i64, p: u32 },
    #[error(transparent)]
    Curve(#[from] CurveError),
}

/// Nonzero integers summing to zero.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize)]
#[serde(transparent)]
pub struct Signature(Vec<i64>);

impl Signature {
    pub fn new(ks: Vec<i64>) -> Result<Self, StrataError> {
        if ks.len() < 2 {
            return Err(StrataError::Signature(ks, "needs at least two entries"));
        }
        if ks.contains(&0) {
            return Err(StrataError::Signature(ks, "entries must be nonzero"));
        }
        if ks.iter().sum::<i64>() != 0 {
            return Err(StrataError::Signature(ks, "entries must sum to zero"));
        }
        Ok(Signature(ks))
    }

    pub fn entries(&self) -> &[i64] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn gcd(&self) -> i64 {
        self.0.iter().fold(0, |g, &k| g.gcd(&k))
    }
}

impl<'de> Deserialize<'de> for Signature {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        Signature::new(Vec::deserialize(d)?).map_err(serde::de::Error::custom)
    }
}

/// The data of `X(d^1..d^m)`: `m` distinct signatures of common length
/// `n - m + 1`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct StrataQuery {
    pub m: usize,
    pub n: usize,
    pub signatures: Vec<Signature>,
    /// `gcd(d^j) = 1` for every `j`.
    pub coprime: bool,
    /// `d^j_{n-m+1} = 1` for `j >= 2`.
    pub unit_last: bool,
}

impl StrataQuery {
    pub fn new(signatures: Vec<Signature>) -> Result<Self, StrataError> {
        let m = signatures.len();
        let Some(len) = signatures.first().map(Signature::len) else {
            return Err(StrataError::Query("at least one signature is required".into()));
        };
        if let Some(s) = signatures.iter().find(|s| s.len() != len) {
            return Err(StrataError::Query(format!(
                "signature {:?} has length {}, expected {len}",
                s.entries(),
                s.len()
            )));
        }
        for (i, s) in signatures.iter().enumerate() {
            if signatures[..i].contains(s) {
                return Err(StrataError::Query(format!("signature {:?} is repeated", s.entries())));
            }
        }
        let coprime = signatures.iter().all(|s| s.gcd() == 1);
        let unit_last = signatures.iter().skip(1).all(|s| s.entries()[len - 1] == 1);
        Ok(StrataQuery { m, n: len + m - 1, signatures, coprime, unit_last })
    }

    /// Parses `[[2,-1,-1], ...]`.
    pub fn from_json(s: &str) -> Result<Self, StrataError> {
        let sigs: Vec<Signature> =
            serde_json::from_str(s).map_err(|e| StrataError::Query(format!("bad signature list: {e}")))?;
        Self::new(sigs)
    }

    /// Number of free points `n - m`.
    pub fn free(&self) -> usize {
        self.n - self.m
    }

    /// Coefficient of the solved point in condition `j` (0-based).
    fn last(&self, j: usize) -> i64 {
        self.signatures[j].entries()[self.free()]
    }
}

/// An elliptic curve with distinct marked points on it.
#[derive(Debug, Clone)]
pub struct MarkedTuple {
    pub curve: EllipticCurve,
    pub points: Vec<Point>,
}

impl MarkedTuple {
    pub fn new(curve: EllipticCurve, points: Vec<Point>) -> Result<Self, StrataError> {
        validate(&curve, &points)?;
        Ok(MarkedTuple { curve, points })
    }

    pub fn in_stratum(&self, kappa: &Signature) -> Result<bool, StrataError> {
        in_stratum(&self.curve, &self.points, kappa)
    }
}

fn validate(curve: &EllipticCurve, points: &[Point]) -> Result<(), StrataError> {
    for (i, p) in points.iter().enumerate() {
        if !curve.contains(p) {
            return Err(StrataError::NotOnCurve(i + 1));
        }
        if let Some(j) = points[..i].iter().position(|q| q == p) {
            return Err(StrataError::NotDistinct(j + 1, i + 1));
        }
    }
    Ok(())
}

fn weighted_sum(curve: &EllipticCurve, ks: &[i64], points: &[Point]) -> Point {
    ks.iter()
        .zip(points)
        .fold(Point::Infinity, |acc, (&k, p)| curve.add_unchecked(&acc, &curve.mul_unchecked(k, p)))
}

/// Whether `Σ k_i p_i = O`.
pub fn in_stratum(curve: &EllipticCurve, points: &[Point], kappa: &Signature) -> Result<bool, StrataError> {
    if points.len() != kappa.len() {
        return Err(StrataError::Arity { expected: kappa.len(), found: points.len() });
    }
    validate(curve, points)?;
    Ok(weighted_sum(curve, kappa.entries(), points) == Point::Infinity)
}

fn check_bound(points: usize, arity: usize, bound: u64) -> Result<(), StrataError> {
    let size = (points as u128).saturating_pow(arity as u32);
    if size > u128::from(bound) {
        return Err(StrataError::TooLarge { size, bound });
    }
    Ok(())
}

/// Solves the non-free points of a query from preimage tables.
struct Solver<'a> {
    curve: &'a EllipticCurve,
    query: &'a StrataQuery,
    tables: HashMap<i64, HashMap<Point, Vec<Point>>>,
}

impl<'a> Solver<'a> {
    fn new(curve: &'a EllipticCurve, query: &'a StrataQuery) -> Result<Self, StrataError> {
        let mut tables = HashMap::new();
        for j in 0..query.m {
            let d = query.last(j);
            if let std::collections::hash_map::Entry::Vacant(e) = tables.entry(d) {
                e.insert(curve.division_table(d)?);
            }
        }
        Ok(Solver { curve, query, tables })
    }

    /// Points `x` with `d^j_last x = -Σ_{i <= n-m} d^j_i p_i`.
    fn solutions(&self, j: usize, free: &[Point]) -> &[Point] {
        let ks = &self.query.signatures[j].entries()[..free.len()];
        let target = self.curve.neg(&weighted_sum(self.curve, ks, free));
        self.tables[&self.query.last(j)].get(&target).map_or(&[], Vec::as_slice)
    }

    /// Distinct completions of `points` (the free points, plus any solved
    /// ones) by the points of conditions `j..m`; condition `fixed.0` uses the
    /// given point instead of solving.
    fn complete(&self, points: &mut Vec<Point>, j: usize, fixed: Option<(usize, Point)>) -> u64 {
        if j == self.query.m {
            return 1;
        }
        let free = self.query.free();
        let mut total = 0;
        let mut visit = |x: Point, points: &mut Vec<Point>| {
            if !points.contains(&x) {
                points.push(x);
                total += self.complete(points, j + 1, fixed);
                points.pop();
            }
        };
        match fixed {
            Some((i, x)) if i == j => visit(x, points),
            _ => {
                for &x in self.solutions(j, &points[..free]) {
                    visit(x, points);
                }
            }
        }
        total
    }
}

/// Calls `f` on every tuple of `len` distinct points whose first entry is
/// `first`.
fn for_each_tuple(pts: &[Point], first: Point, len: usize, f: &mut impl FnMut(&mut Vec<Point>)) {
    fn go(pts: &[Point], len: usize, cur: &mut Vec<Point>, f: &mut impl FnMut(&mut Vec<Point>)) {
        if cur.len() == len {
            f(cur);
            return;
        }
        for &p in pts {
            if !cur.contains(&p) {
                cur.push(p);
                go(pts, len, cur, f);
                cur.pop();
            }
        }
    }
    let mut cur = vec![first];
    go(pts, len, &mut cur, f);
}

/// Number of tuples of distinct rational points in `X(d^1..d^m)`.
pub fn count_x(query: &StrataQuery, curve: &EllipticCurve, bound: u64) -> Result<u64, StrataError> {
    let pts = curve.enumerate()?;
    check_bound(pts.len(), query.free() + 1, bound)?;
    let solver = Solver::new(curve, query)?;
    Ok(pts
        .par_iter()
        .map(|&p| {
            let mut total = 0;
            for_each_tuple(&pts, p, query.free(), &mut |t| total += solver.complete(t, 0, None));
            total
        })
        .sum())
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct MultiplicityReport {
    pub j: usize,
    /// Points of `P(d^j)` examined.
    pub sampled: u64,
    /// Fiber size of the forgetful map to number of points with that size.
    pub histogram: BTreeMap<u64, u64>,
    /// Largest fiber seen; collisions only remove tuples.
    pub generic: u64,
    /// `∏_{i != j} (d^i_{n-m+1})^2`.
    pub expected: u64,
}

/// Fiber sizes of the map `X -> P(d^j)` keeping `p_1..p_{n-m}, p_{n-m+j}`,
/// over every rational point of `P(d^j)`.
pub fn fiber_multiplicity(
    curve: &EllipticCurve,
    query: &StrataQuery,
    j: usize,
    bound: u64,
) -> Result<MultiplicityReport, StrataError> {
    if j == 0 || j > query.m {
        return Err(StrataError::Index { j, m: query.m });
    }
    let p = curve.field().characteristic();
    let mut expected = 1u64;
    for i in (0..query.m).filter(|&i| i != j - 1) {
        let d = query.last(i);
        if d % i64::from(p) == 0 {
            return Err(StrataError::Characteristic { d, p });
        }
        let want = (d * d) as usize;
        let found = curve.division_count(d, &Point::Infinity)?;
        if found != want {
            return Err(StrataError::TorsionNotRational { d, found, expected: want });
        }
        expected *= want as u64;
    }
    let pts = curve.enumerate()?;
    check_bound(pts.len(), query.free() + 1, bound)?;
    let solver = Solver::new(curve, query)?;
    let kappa = query.signatures[j - 1].entries();
    let free = query.free();
    let sizes: Vec<Vec<u64>> = pts
        .par_iter()
        .map(|&p| {
            let mut sizes = Vec::new();
            for_each_tuple(&pts, p, free + 1, &mut |t| {
                if weighted_sum(curve, kappa, t) == Point::Infinity {
                    let x = t.pop().expect("nonempty tuple");
                    sizes.push(solver.complete(t, 0, Some((j - 1, x))));
                    t.push(x);
                }
            });
            sizes
        })
        .collect();
    let mut histogram = BTreeMap::new();
    for s in sizes.into_iter().flatten() {
        *histogram.entry(s).or_insert(0) += 1;
    }
    Ok(MultiplicityReport {
        j,
        sampled: histogram.values().sum(),
        generic: histogram.keys().next_back().copied().unwrap_or(0),
        histogram,
        expected,
    })
}

/// `#E(F_{q^k})[d]` for each extension degree `k` in `degrees`.
pub fn torsion_tower(curve: &EllipticCurve, d: i64, degrees: &[u32]) -> Result<Vec<usize>, StrataError> {
    let base = curve.field();
    degrees
        .iter()
        .map(|&k| {
            let ext = make_ext_field(base.characteristic(), base.degree() * k).map_err(CurveError::from)?;
            let (e, _) = curve.base_change(&ext)?;
            Ok(e.division_count(d, &Point::Infinity)?)
        })
        .collect()
}
