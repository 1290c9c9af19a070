// SPDX-License-Identifier: Apache-2.0

//! Divisor classes on the glued boundary stratum
//! `M_{g-1,n+1} x M_{1,1}` and their reduction under the symmetric group
//! permuting the first `n` markings.
//!
//! Boundary divisors `delta_{h:S}` of the genus-`(g-1)` factor are
//! identified with their complements `delta_{g-1-h:S^c}`, so every class has
//! a unique representative whose marking set avoids `n+1`. After symmetry
//! such a class depends only on `(h, |S|)`.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::str::FromStr;

use num_traits::Zero;
use serde::{Deserialize, Deserializer, Serialize, Serializer};
use thiserror::Error;

use crate::arith::Rational;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ClassError {
    #[error("the glued stratum needs g >= 3 and n >= 1, got g={g}, n={n}")]
    Range { g: u32, n: u32 },
    #[error("genus index {h} outside 0..={max}")]
    Genus { h: u32, max: u32 },
    #[error("marking {m} outside 1..={max}")]
    Marking { m: u32, max: u32 },
    #[error("unstable boundary label delta_{{{h}:{set:?}}}: {reason}")]
    Unstable { h: u32, set: Vec<u32>, reason: &'static str },
    #[error("gamma_0 is not a generator when g = 3")]
    NoGammaZero,
    #[error("gamma_K index {0} outside 1..=n+1")]
    KIndex(u32),
    #[error("unknown class symbol {0:?}")]
    Symbol(String),
}

/// A generator of `N^1` before symmetry reduction.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum GeneratorLabel {
    /// `M_{g-1,n+1} x Delta_0`.
    Gamma,
    GammaLambda,
    GammaZero,
    /// Pullback of `K_j`, `1 <= j <= n+1`; treated as an opaque generator.
    GammaK(u32),
    /// Pullback of `delta_{h:S}` with `S` a subset of `{1, ..., n+1}`.
    GammaBoundary { h: u32, set: BTreeSet<u32> },
}

impl GeneratorLabel {
    pub fn boundary<I: IntoIterator<Item = u32>>(h: u32, set: I) -> Self {
        GeneratorLabel::GammaBoundary { h, set: set.into_iter().collect() }
    }
}

/// A coordinate after symmetry reduction.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum SymClass {
    C,
    CLambda,
    CZero,
    /// Common coefficient of `gamma_{K_j}`, `j <= n`.
    CK,
    /// Coefficient of `gamma_{K_{n+1}}`.
    CKLast,
    /// Coefficient of `gamma_{h:S}` with `n+1` not in `S`, `|S| = s`.
    CB { h: u32, s: u32 },
}

impl fmt::Display for SymClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            SymClass::C => write!(f, "c"),
            SymClass::CLambda => write!(f, "c_lambda"),
            SymClass::CZero => write!(f, "c_0"),
            SymClass::CK => write!(f, "c_K"),
            SymClass::CKLast => write!(f, "c_K_last"),
            SymClass::CB { h, s } => write!(f, "c_{{{h}:{s}}}"),
        }
    }
}

impl FromStr for SymClass {
    type Err = ClassError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let bad = || ClassError::Symbol(s.to_string());
        Ok(match s {
            "c" => SymClass::C,
            "c_lambda" => SymClass::CLambda,
            "c_0" => SymClass::CZero,
            "c_K" => SymClass::CK,
            "c_K_last" => SymClass::CKLast,
            _ => {
                let inner = s.strip_prefix("c_{").and_then(|r| r.strip_suffix('}')).ok_or_else(bad)?;
                let (h, sz) = inner.split_once(':').ok_or_else(bad)?;
                SymClass::CB {
                    h: h.parse().map_err(|_| bad())?,
                    s: sz.parse().map_err(|_| bad())?,
                }
            }
        })
    }
}

impl Serialize for SymClass {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        serializer.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for SymClass {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        let s = String::deserialize(deserializer)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

/// The pair `(g, n)` of the target moduli space `M_{g,n}`; the glued
/// stratum has factors `M_{g-1,n+1}` and `M_{1,1}`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Ambient {
    g: u32,
    n: u32,
}

impl Ambient {
    pub fn new(g: u32, n: u32) -> Result<Self, ClassError> {
        if g < 3 || n < 1 {
            return Err(ClassError::Range { g, n });
        }
        Ok(Ambient { g, n })
    }

    pub fn g(&self) -> u32 {
        self.g
    }

    pub fn n(&self) -> u32 {
        self.n
    }

    pub fn has_gamma_zero(&self) -> bool {
        self.g >= 4
    }

    fn check_boundary(&self, h: u32, set: &BTreeSet<u32>) -> Result<(), ClassError> {
        let top = self.g - 1;
        if h > top {
            return Err(ClassError::Genus { h, max: top });
        }
        if let Some(&m) = set.iter().find(|&&m| m == 0 || m > self.n + 1) {
            return Err(ClassError::Marking { m, max: self.n + 1 });
        }
        let size = set.len() as u32;
        let unstable = |reason| ClassError::Unstable { h, set: set.iter().copied().collect(), reason };
        if h == 0 && size < 2 {
            return Err(unstable("a genus-0 side needs at least two markings"));
        }
        if h == top && size + 1 > self.n {
            return Err(unstable("the complementary genus-0 side needs at least two markings"));
        }
        Ok(())
    }

    /// Symmetric representative of `delta_{h:S}`.
    pub fn canonicalize(&self, h: u32, set: &BTreeSet<u32>) -> Result<SymClass, ClassError> {
        self.check_boundary(h, set)?;
        let last = self.n + 1;
        let size = set.len() as u32;
        Ok(if set.contains(&last) {
            SymClass::CB { h: self.g - 1 - h, s: last - size }
        } else {
            SymClass::CB { h, s: size }
        })
    }

    /// Symmetric coordinate of an unreduced generator.
    pub fn classify(&self, label: &GeneratorLabel) -> Result<SymClass, ClassError> {
        match label {
            GeneratorLabel::Gamma => Ok(SymClass::C),
            GeneratorLabel::GammaLambda => Ok(SymClass::CLambda),
            GeneratorLabel::GammaZero if self.has_gamma_zero() => Ok(SymClass::CZero),
            GeneratorLabel::GammaZero => Err(ClassError::NoGammaZero),
            GeneratorLabel::GammaK(j) if *j >= 1 && *j <= self.n => Ok(SymClass::CK),
            GeneratorLabel::GammaK(j) if *j == self.n + 1 => Ok(SymClass::CKLast),
            GeneratorLabel::GammaK(j) => Err(ClassError::KIndex(*j)),
            GeneratorLabel::GammaBoundary { h, set } => self.canonicalize(*h, set),
        }
    }

    /// Whether `c` is a coordinate of the reduced space for this `(g, n)`.
    pub fn contains(&self, c: SymClass) -> bool {
        match c {
            SymClass::CZero => self.has_gamma_zero(),
            SymClass::CB { h, s } => {
                h < self.g
                    && s <= self.n
                    && !(h == 0 && s < 2)
                    && !(h == self.g - 1 && s + 1 > self.n)
            }
            _ => true,
        }
    }

    /// Ordered, duplicate-free coordinate list.
    pub fn generator_set(&self) -> Vec<SymClass> {
        let mut out = vec![SymClass::C, SymClass::CLambda];
        if self.has_gamma_zero() {
            out.push(SymClass::CZero);
        }
        out.push(SymClass::CK);
        out.push(SymClass::CKLast);
        for h in 0..self.g {
            for s in 0..=self.n {
                let c = SymClass::CB { h, s };
                if self.contains(c) {
                    out.push(c);
                }
            }
        }
        out
    }

    /// Closed-form size of [`Ambient::generator_set`].
    pub fn generator_count(&self) -> usize {
        let (g, n) = (self.g as usize, self.n as usize);
        let boundary = (n - 1) + (g - 2) * (n + 1) + n;
        4 + usize::from(self.has_gamma_zero()) + boundary
    }
}

/// Free-function form of [`Ambient::canonicalize`].
pub fn canonicalize(h: u32, set: &BTreeSet<u32>, g: u32, n: u32) -> Result<SymClass, ClassError> {
    Ambient::new(g, n)?.canonicalize(h, set)
}

/// Free-function form of [`Ambient::generator_set`].
pub fn generator_set(g: u32, n: u32) -> Result<Vec<SymClass>, ClassError> {
    Ok(Ambient::new(g, n)?.generator_set())
}

/// Sparse rational combination of reduced coordinates.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct ClassVector(BTreeMap<SymClass, Rational>);

impl ClassVector {
    pub fn new() -> Self {
        ClassVector(BTreeMap::new())
    }

    pub fn add_term(&mut self, c: SymClass, coeff: Rational) {
        let entry = self.0.entry(c).or_insert_with(Rational::zero);
        *entry += coeff;
        if entry.is_zero() {
            self.0.remove(&c);
        }
    }

    pub fn with(mut self, c: SymClass, coeff: Rational) -> Self {
        self.add_term(c, coeff);
        self
    }

    pub fn get(&self, c: SymClass) -> Rational {
        self.0.get(&c).cloned().unwrap_or_else(Rational::zero)
    }

    pub fn iter(&self) -> impl Iterator<Item = (&SymClass, &Rational)> {
        self.0.iter()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    /// Dense coordinates in the order of `columns`.
    pub fn to_dense(&self, columns: &[SymClass]) -> Vec<Rational> {
        columns.iter().map(|c| self.get(*c)).collect()
    }

    pub fn support(&self) -> impl Iterator<Item = SymClass> + '_ {
        self.0.keys().copied()
    }
}

impl fmt::Display for ClassVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_empty() {
            return write!(f, "0");
        }
        let terms: Vec<String> = self.0.iter().map(|(c, v)| format!("{v}*{c}")).collect();
        write!(f, "{}", terms.join(" + "))
    }
}
