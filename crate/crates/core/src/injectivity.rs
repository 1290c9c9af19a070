// SPDX-License-Identifier: Apache-2.0

//! The linear system that certifies injectivity of the pushforward from the
//! glued boundary stratum.
//!
//! Two independent builders produce it. [`build_rows_table`] transcribes the
//! intersection numbers of the test surfaces cell by cell and reduces them
//! through [`Ambient::classify`]. [`build_rows_displayed`] writes down the
//! already-reduced relations directly. [`diff_systems`] lines the two up.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::io::Write;

use num_traits::Zero;
use rayon::prelude::*;
use serde::{Deserialize, Serialize, Serializer};
use thiserror::Error;

use crate::arith::{parse_rational, rat, ArithError, Pivot, Rational, RationalMatrix};
use crate::classes::{Ambient, ClassError, ClassVector, GeneratorLabel, SymClass};

/// Values substituted for the one table cell that carries no number.
pub const SWEEP_VALUES: [i64; 5] = [-2, -1, 0, 1, 2];

#[derive(Debug, Error)]
pub enum InjectivityError {
    #[error("outside the proven range g≥3 and n≥g−1 (got g={g}, n={n})")]
    Range { g: u32, n: u32 },
    #[error(transparent)]
    Class(#[from] ClassError),
    #[error(transparent)]
    Arith(#[from] ArithError),
    #[error("certificate rejected: {0}")]
    Certificate(String),
}

/// One test-surface instance, or one of the two auxiliary relations.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum TestSurfaceId {
    A,
    B0P { p: BTreeSet<u32>, i: u32 },
    Cij { i: u32, j: u32 },
    D0P { p: BTreeSet<u32>, i: u32 },
    EhP { h: u32, p: BTreeSet<u32>, i: u32 },
    Fh { h: u32, i: u32, j: u32 },
    Gq { i: u32 },
    Hq { i: u32, j: u32 },
    /// Pushforward along the map forgetting `p_i`.
    PushRow { i: u32 },
    /// Contraction of unmarked elliptic tails.
    PsRow,
    /// Nonvanishing of the single class left once everything else is zero.
    LoneClass,
}

fn fmt_set(s: &BTreeSet<u32>) -> String {
    let items: Vec<String> = s.iter().map(u32::to_string).collect();
    format!("{{{}}}", items.join(","))
}

impl fmt::Display for TestSurfaceId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        use TestSurfaceId::*;
        match self {
            A => write!(f, "S^a"),
            B0P { p, i } => write!(f, "S^b_{{0:{}}}[i={i}]", fmt_set(p)),
            Cij { i, j } => write!(f, "S^c[i={i},j={j}]"),
            D0P { p, i } => write!(f, "S^d_{{0:{}}}[i={i}]", fmt_set(p)),
            EhP { h, p, i } => write!(f, "S^e_{{{h}:{}}}[i={i}]", fmt_set(p)),
            Fh { h, i, j } => write!(f, "S^f_{h}[i={i},j={j}]"),
            Gq { i } => write!(f, "S^g[i={i}]"),
            Hq { i, j } => write!(f, "S^h[i={i},j={j}]"),
            PushRow { i } => write!(f, "push[i={i}]"),
            PsRow => write!(f, "ps"),
            LoneClass => write!(f, "lone"),
        }
    }
}

impl Serialize for TestSurfaceId {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        serializer.collect_str(self)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Source {
    /// Rows transcribed from the intersection table.
    Table,
    /// The hand-reduced relations.
    Displayed,
}

impl fmt::Display for Source {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Source::Table => "table",
            Source::Displayed => "displayed",
        })
    }
}

/// Bounds on the surface families enumerated by [`build_rows_table`].
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct SweepLimits {
    /// Largest `|P|` used for the families indexed by a marking set.
    pub max_subset_size: Option<u32>,
}

#[derive(Debug, Clone)]
pub struct LinearSystem {
    ambient: Ambient,
    source: Source,
    columns: Vec<SymClass>,
    matrix: RationalMatrix,
    provenance: Vec<TestSurfaceId>,
    names: Vec<String>,
    notes: Vec<String>,
}

impl LinearSystem {
    fn assemble(
        ambient: Ambient,
        source: Source,
        rows: Vec<(String, TestSurfaceId, ClassVector)>,
        notes: Vec<String>,
    ) -> Result<Self, InjectivityError> {
        let columns = ambient.generator_set();
        let mut matrix = RationalMatrix::new(columns.iter().map(ToString::to_string).collect());
        let mut provenance = Vec::with_capacity(rows.len());
        let mut names = Vec::with_capacity(rows.len());
        for (name, id, v) in rows {
            if let Some(bad) = v.support().find(|c| !ambient.contains(*c)) {
                return Err(ArithError::Internal(format!("row {name} uses {bad}, not a coordinate")).into());
            }
            matrix.push_row(v.to_dense(&columns))?;
            provenance.push(id);
            names.push(name);
        }
        Ok(LinearSystem { ambient, source, columns, matrix, provenance, names, notes })
    }

    pub fn ambient(&self) -> Ambient {
        self.ambient
    }

    pub fn source(&self) -> Source {
        self.source
    }

    pub fn columns(&self) -> &[SymClass] {
        &self.columns
    }

    pub fn matrix(&self) -> &RationalMatrix {
        &self.matrix
    }

    pub fn provenance(&self) -> &[TestSurfaceId] {
        &self.provenance
    }

    /// Row names: equation names for the displayed source, surface
    /// instances for the table.
    pub fn names(&self) -> &[String] {
        &self.names
    }

    /// Skipped instances and dropped terms, in generation order.
    pub fn notes(&self) -> &[String] {
        &self.notes
    }

    pub fn len(&self) -> usize {
        self.matrix.nrows()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn row(&self, idx: usize) -> ClassVector {
        let mut v = ClassVector::new();
        for (c, x) in self.columns.iter().zip(&self.matrix.rows()[idx]) {
            v.add_term(*c, x.clone());
        }
        v
    }

    /// Copy keeping only rows whose name satisfies `keep`.
    pub fn retain_named(&self, keep: impl Fn(&str) -> bool) -> LinearSystem {
        let drop: Vec<usize> = (0..self.len()).filter(|&i| !keep(&self.names[i])).collect();
        LinearSystem {
            ambient: self.ambient,
            source: self.source,
            columns: self.columns.clone(),
            matrix: self.matrix.without_rows(&drop),
            provenance: keep_indices(&self.provenance, &drop),
            names: keep_indices(&self.names, &drop),
            notes: self.notes.clone(),
        }
    }

    pub fn kernel_dim(&self) -> usize {
        self.matrix.eliminate().basis.len()
    }

    /// Raw matrix as CSV, one header column per coordinate.
    pub fn write_csv<W: Write>(&self, out: W) -> csv::Result<()> {
        let mut w = csv::Writer::from_writer(out);
        let mut header = vec!["row".to_string(), "surface".to_string()];
        header.extend(self.columns.iter().map(ToString::to_string));
        w.write_record(&header)?;
        for (i, r) in self.matrix.rows().iter().enumerate() {
            let mut rec = vec![self.names[i].clone(), self.provenance[i].to_string()];
            rec.extend(r.iter().map(ToString::to_string));
            w.write_record(&rec)?;
        }
        w.flush()?;
        Ok(())
    }
}

fn keep_indices<T: Clone>(v: &[T], drop: &[usize]) -> Vec<T> {
    v.iter().enumerate().filter(|(i, _)| !drop.contains(i)).map(|(_, x)| x.clone()).collect()
}

fn ambient_for(g: u32, n: u32) -> Result<Ambient, InjectivityError> {
    if g < 3 || n + 1 < g {
        return Err(InjectivityError::Range { g, n });
    }
    Ok(Ambient::new(g, n)?)
}

fn set<I: IntoIterator<Item = u32>>(xs: I) -> BTreeSet<u32> {
    xs.into_iter().collect()
}

fn cb(h: u32, s: u32) -> SymClass {
    SymClass::CB { h, s }
}

// ---------------------------------------------------------------------------
// table source

/// The `P` used for the families `S^b` and `S^d` with `|P| = t`.
fn sb_set(n: u32, t: u32) -> BTreeSet<u32> {
    let mut p = set(1..t);
    p.insert(n + 1);
    p
}

fn candidate_instances(amb: &Ambient) -> Vec<TestSurfaceId> {
    use TestSurfaceId::*;
    let (g, n) = (amb.g(), amb.n());
    let mut out = vec![PsRow, A];
    out.extend((2..=n + 1).rev().map(|t| B0P { p: sb_set(n, t), i: 1 }));
    out.push(Cij { i: 1, j: 2 });
    out.push(PushRow { i: 1 });
    out.extend((2..=n + 1).rev().map(|t| D0P { p: sb_set(n, t), i: 1 }));
    for h in 0..g {
        out.extend((1..=n).map(|s| EhP { h, p: set(1..=s), i: 1 }));
    }
    out.extend((0..=g - 2).map(|h| Fh { h, i: 1, j: 2 }));
    out.push(Gq { i: 1 });
    out.push(Hq { i: 1, j: 2 });
    out.push(LoneClass);
    out
}

/// Why an instance does not exist for this `(g, n)`, if it does not.
fn inadmissible(amb: &Ambient, id: &TestSurfaceId, limits: &SweepLimits) -> Option<String> {
    use TestSurfaceId::*;
    let (g, n) = (amb.g(), amb.n());
    let size = match id {
        B0P { p, .. } | D0P { p, .. } | EhP { p, .. } => Some(p.len() as u32),
        _ => None,
    };
    if let (Some(s), Some(max)) = (size, limits.max_subset_size) {
        if s > max {
            return Some(format!("|P|={s} exceeds sweep limit {max}"));
        }
    }
    match id {
        D0P { p, .. } if n < 3 => Some(format!("needs n≥3 (|P|={})", p.len())),
        D0P { p, .. } if p.len() < 4 => Some(format!("needs |P|≥4, got {}", p.len())),
        EhP { h: 0, p, .. } if p.len() < 3 => Some(format!("h=0 needs |P|≥3, got {}", p.len())),
        EhP { h: 1, p, .. } if p.len() < 2 => Some(format!("h=1 needs |P|≥2, got {}", p.len())),
        EhP { h, p, .. } if *h == g - 1 && p.len() as u32 > n - 1 => {
            Some(format!("h=g−1 needs |P|≤n−1, got {}", p.len()))
        }
        Hq { .. } if g < 5 => Some("needs g≥5".into()),
        _ => None,
    }
}

/// Unreduced intersection numbers of one instance; `unknown` fills the
/// empty cell `S^g . gamma_{2:{}}`.
fn table_terms(amb: &Ambient, id: &TestSurfaceId, unknown: &Rational) -> Vec<(GeneratorLabel, Rational)> {
    use GeneratorLabel::*;
    use TestSurfaceId::*;
    let (g, n) = (i64::from(amb.g()), i64::from(amb.n()));
    let last = amb.n() + 1;
    let kk = rat(2 * (g - 1) - 2);
    let b = |h: u32, s: BTreeSet<u32>| GeneratorLabel::GammaBoundary { h, set: s };
    let with = |p: &BTreeSet<u32>, x: u32| {
        let mut q = p.clone();
        q.insert(x);
        q
    };
    let without = |p: &BTreeSet<u32>, xs: &[u32]| -> BTreeSet<u32> {
        p.iter().copied().filter(|m| !xs.contains(m)).collect()
    };
    let mut t: Vec<(GeneratorLabel, Rational)> = Vec::new();
    match id {
        PsRow => t.push((Gamma, rat(1))),
        A => {
            t.push((Gamma, rat(12)));
            t.push((GammaK(last), rat(1)));
        }
        B0P { p, .. } => {
            let size = p.len() as i64;
            for j in (1..=last).filter(|j| !p.contains(j)) {
                t.push((b(0, with(p, j)), rat(1)));
            }
            t.push((b(0, p.clone()), rat(2 - 2 * (g - 1) - (n + 1 - size))));
            t.extend(p.iter().map(|&j| (GammaK(j), kk.clone())));
        }
        Cij { i, j } => {
            for m in (1..=amb.n()).filter(|m| m != i && m != j) {
                t.push((b(0, set([*j, m])), rat(1)));
            }
            t.push((b(0, set([*i, last])), rat(-1)));
            t.push((b(0, set([*i, *j, last])), rat(1)));
            t.push((GammaK(*j), kk));
        }
        D0P { p, i } => {
            let size = p.len() as i64;
            for &j in p {
                t.push((b(0, without(p, &[j])), rat(1)));
            }
            t.push((b(0, p.clone()), rat(3 - size)));
            t.push((b(0, set([*i, last])), rat(-1)));
            t.push((b(0, without(p, &[*i, last])), rat(1)));
            for &j in p.iter().filter(|&&j| j != *i && j != last) {
                t.push((GammaK(j), rat(-1)));
            }
            t.push((GammaK(*i), rat(2 - size)));
            t.push((GammaK(last), rat(2 - size)));
        }
        EhP { h, p, i } => {
            t.push((b(*h, p.clone()), rat(-1)));
            t.push((b(*h, without(p, &[*i])), rat(1)));
            for &m in p.iter().filter(|&&m| m != *i) {
                t.push((b(0, set([*i, m])), rat(1)));
            }
            let hk = i64::from(*h);
            let k = if hk == g - 1 {
                2 * (g - 1) - 2
            } else if hk >= 1 {
                2 * hk - 1
            } else {
                0
            };
            t.push((GammaK(*i), rat(k)));
        }
        Fh { h, j, .. } => {
            t.push((b(*h, set([*j])), rat(-1)));
            t.push((b(h + 1, set([*j])), rat(-1)));
            t.push((GammaLambda, rat(1)));
            t.push((GammaZero, rat(12)));
            if *h == 0 {
                t.push((GammaK(*j), rat(1)));
            }
            if i64::from(*h) == g - 2 {
                t.extend((1..=last).map(|m| (GammaK(m), rat(1))));
            }
        }
        Gq { .. } => {
            t.push((GammaLambda, rat(3)));
            t.push((GammaZero, rat(27)));
            t.push((b(2, BTreeSet::new()), unknown.clone()));
            if g == 3 {
                t.extend((1..=last).map(|m| (GammaK(m), rat(1))));
            }
        }
        Hq { i, j } => {
            t.push((b(1, set([*j])), rat(-1)));
            t.push((b(amb.g() - 4, without(&set(1..=amb.n()), &[*i, *j])), rat(-1)));
            t.push((b(0, set([*i, last])), rat(-1)));
            t.push((GammaK(*i), rat(1)));
            t.push((GammaK(last), rat(1)));
            t.push((GammaLambda, rat(3)));
            t.push((GammaZero, rat(27)));
        }
        PushRow { i } => {
            for j in (1..=last).filter(|j| j != i) {
                t.push((b(0, set([*i, j])), rat(1)));
            }
            t.push((GammaK(*i), kk));
        }
        LoneClass => t.push((b(1, BTreeSet::new()), rat(1))),
    }
    t
}

fn reduce_terms(
    amb: &Ambient,
    id: &TestSurfaceId,
    terms: Vec<(GeneratorLabel, Rational)>,
) -> Result<(ClassVector, Vec<String>), InjectivityError> {
    let mut v = ClassVector::new();
    let mut notes = Vec::new();
    for (label, x) in terms {
        if x.is_zero() {
            continue;
        }
        match amb.classify(&label) {
            Ok(c) => v.add_term(c, x),
            Err(e @ (ClassError::Unstable { .. } | ClassError::NoGammaZero)) => {
                notes.push(format!("{id}: dropped term {x}·{label:?} ({e})"));
            }
            Err(e) => return Err(e.into()),
        }
    }
    Ok((v, notes))
}

/// Rows from every admissible surface instance within `limits`, reduced to
/// symmetric coordinates. Inadmissible candidates and dropped terms are
/// recorded in [`LinearSystem::notes`].
pub fn build_rows_table(
    g: u32,
    n: u32,
    limits: &SweepLimits,
    unknown: &Rational,
) -> Result<LinearSystem, InjectivityError> {
    let amb = ambient_for(g, n)?;
    let mut notes = Vec::new();
    let mut instances = Vec::new();
    for id in candidate_instances(&amb) {
        match inadmissible(&amb, &id, limits) {
            Some(reason) => notes.push(format!("{id}: skipped, {reason}")),
            None => instances.push(id),
        }
    }
    let reduced: Vec<(ClassVector, Vec<String>)> = instances
        .par_iter()
        .map(|id| reduce_terms(&amb, id, table_terms(&amb, id, unknown)))
        .collect::<Result<_, _>>()?;
    let mut rows = Vec::with_capacity(instances.len());
    for (id, (v, mut dropped)) in instances.into_iter().zip(reduced) {
        notes.append(&mut dropped);
        rows.push((id.to_string(), id, v));
    }
    LinearSystem::assemble(amb, Source::Table, rows, notes)
}

// ---------------------------------------------------------------------------
// displayed source

/// The reduced relations, in the order they are used.
pub fn build_rows_displayed(g: u32, n: u32) -> Result<LinearSystem, InjectivityError> {
    use SymClass::*;
    use TestSurfaceId::*;
    let amb = ambient_for(g, n)?;
    let top = g - 1;
    let kk = rat(2 * i64::from(g) - 4);
    let ni = i64::from(n);
    let mut rows: Vec<(String, TestSurfaceId, ClassVector)> = Vec::new();
    let mut push = |name: String, id, v| rows.push((name, id, v));

    push("ps".into(), PsRow, ClassVector::new().with(C, rat(1)));
    push("a".into(), A, ClassVector::new().with(CKLast, rat(1)));
    push(
        "Sb0".into(),
        B0P { p: sb_set(n, n + 1), i: 1 },
        ClassVector::new().with(CK, &kk * rat(ni)).with(cb(top, 0), -kk.clone()),
    );
    for k in 1..n {
        let kr = rat(i64::from(k));
        push(
            format!("Sbk[k={k}]"),
            B0P { p: sb_set(n, n + 1 - k), i: 1 },
            ClassVector::new()
                .with(CK, &kk * rat(ni - i64::from(k)))
                .with(cb(top, k), -(&kk + &kr))
                .with(cb(top, k - 1), kr),
        );
    }
    push(
        "Sc".into(),
        Cij { i: 1, j: 2 },
        ClassVector::new()
            .with(CK, kk.clone())
            .with(cb(0, 2), rat(ni - 2))
            .with(cb(top, n - 1), rat(-1))
            .with(cb(top, n - 2), rat(1)),
    );
    push(
        "push".into(),
        PushRow { i: 1 },
        ClassVector::new().with(CK, kk.clone()).with(cb(0, 2), rat(ni - 1)).with(cb(top, n - 1), rat(1)),
    );
    if n >= 3 {
        push(
            "Sc0".into(),
            D0P { p: sb_set(n, 4), i: 1 },
            ClassVector::new()
                .with(CK, rat(-4))
                .with(cb(0, 2), rat(1))
                .with(cb(top, n - 3), rat(-1))
                .with(cb(top, n - 2), rat(2))
                .with(cb(top, n - 1), rat(-1)),
        );
    }
    for h in 0..g {
        let range = match h {
            0 => 3..=n,
            1 => 2..=n,
            _ if h == top => 1..=n - 1,
            _ => 1..=n,
        };
        for s in range {
            push(
                format!("Seh[h={h},s={s}]"),
                EhP { h, p: set(1..=s), i: 1 },
                ClassVector::new().with(cb(h, s), rat(-1)).with(cb(h, s - 1), rat(1)),
            );
        }
    }
    for h in 0..=g - 2 {
        let mut v = ClassVector::new().with(cb(h + 1, 1), rat(-1)).with(CLambda, rat(1));
        if h > 0 {
            v.add_term(cb(h, 1), rat(-1));
        }
        if amb.has_gamma_zero() {
            v.add_term(CZero, rat(12));
        }
        push(format!("Sfh[h={h}]"), Fh { h, i: 1, j: 2 }, v);
    }
    let mut quartic = ClassVector::new().with(CLambda, rat(3));
    if amb.has_gamma_zero() {
        quartic.add_term(CZero, rat(27));
    }
    push("quartic".into(), Gq { i: 1 }, quartic);
    if g >= 5 && g % 2 == 1 {
        push(
            "Sh".into(),
            Hq { i: 1, j: 2 },
            ClassVector::new()
                .with(cb(1, 1), rat(-1))
                .with(cb(g - 4, n - 2), rat(-1))
                .with(CLambda, rat(3))
                .with(CZero, rat(27)),
        );
    }
    push("lone".into(), LoneClass, ClassVector::new().with(cb(1, 0), rat(1)));
    LinearSystem::assemble(amb, Source::Displayed, rows, Vec::new())
}

// ---------------------------------------------------------------------------
// cross-check

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum MismatchKind {
    /// A genuine disagreement.
    Coefficient,
    /// The displayed row omits a coordinate that earlier displayed rows
    /// already force to zero.
    PreviouslyEliminated,
    /// The table cell has no printed value.
    UnknownEntry,
    /// No table row exists for the displayed row's surface instance.
    MissingRow,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Mismatch {
    pub equation: String,
    pub surface: String,
    pub column: Option<SymClass>,
    pub displayed: String,
    pub table: String,
    pub kind: MismatchKind,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct DiffReport {
    pub g: u32,
    pub n: u32,
    pub mismatches: Vec<Mismatch>,
}

impl DiffReport {
    /// True when every difference is explained by earlier eliminations or
    /// by the unprinted cell.
    pub fn agrees(&self) -> bool {
        self.mismatches
            .iter()
            .all(|m| matches!(m.kind, MismatchKind::PreviouslyEliminated | MismatchKind::UnknownEntry))
    }

    pub fn genuine(&self) -> impl Iterator<Item = &Mismatch> {
        self.mismatches
            .iter()
            .filter(|m| matches!(m.kind, MismatchKind::Coefficient | MismatchKind::MissingRow))
    }
}

/// Coordinates forced to zero by the first `upto` rows.
fn forced_zero(m: &RationalMatrix, upto: usize) -> Vec<bool> {
    let drop: Vec<usize> = (upto..m.nrows()).collect();
    let basis = m.without_rows(&drop).eliminate().basis;
    (0..m.ncols()).map(|c| basis.iter().all(|v| v[c].is_zero())).collect()
}

/// Compares each displayed row with the table row of the same surface
/// instance, coefficient by coefficient.
pub fn diff_systems(g: u32, n: u32) -> Result<DiffReport, InjectivityError> {
    let shown = build_rows_displayed(g, n)?;
    let t0 = build_rows_table(g, n, &SweepLimits::default(), &rat(0))?;
    let t1 = build_rows_table(g, n, &SweepLimits::default(), &rat(1))?;
    let cols = shown.columns();
    let mut mismatches = Vec::new();
    for (r, id) in shown.provenance().iter().enumerate() {
        let equation = shown.names()[r].clone();
        let surface = id.to_string();
        let Some(tr) = t0.provenance().iter().position(|x| x == id) else {
            mismatches.push(Mismatch {
                equation,
                surface,
                column: None,
                displayed: shown.row(r).to_string(),
                table: "absent".into(),
                kind: MismatchKind::MissingRow,
            });
            continue;
        };
        let zeroed = forced_zero(shown.matrix(), r);
        let (d, a, b) = (&shown.matrix().rows()[r], &t0.matrix().rows()[tr], &t1.matrix().rows()[tr]);
        for c in 0..cols.len() {
            let kind = if a[c] != b[c] {
                MismatchKind::UnknownEntry
            } else if d[c] == a[c] {
                continue;
            } else if zeroed[c] {
                MismatchKind::PreviouslyEliminated
            } else {
                MismatchKind::Coefficient
            };
            let table =
                if kind == MismatchKind::UnknownEntry { "unknown".to_string() } else { a[c].to_string() };
            mismatches.push(Mismatch {
                equation: equation.clone(),
                surface: surface.clone(),
                column: Some(cols[c]),
                displayed: d[c].to_string(),
                table,
                kind,
            });
        }
    }
    Ok(DiffReport { g, n, mismatches })
}

// ---------------------------------------------------------------------------
// certificates

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SweptValue {
    pub value: i64,
    pub kernel_dim: usize,
}

/// Self-checking record of a kernel computation. Rationals are written as
/// `"a/b"` strings; basis vectors are sparse maps over `columns`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct KernelCertificate {
    pub g: u32,
    pub n: u32,
    pub source: Source,
    pub columns: Vec<SymClass>,
    pub rows: usize,
    pub kernel_dim: usize,
    pub basis: Vec<BTreeMap<SymClass, String>>,
    pub trace: Vec<Pivot>,
    /// Table source only: kernel dimension for each substituted value.
    pub swept_values: Vec<SweptValue>,
    pub mismatches: Vec<Mismatch>,
}

impl KernelCertificate {
    /// Trivial kernel, and for the table source trivial at every swept value.
    pub fn is_injective(&self) -> bool {
        self.kernel_dim == 0 && self.swept_values.iter().all(|s| s.kernel_dim == 0)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("certificate serializes")
    }

    pub fn from_json(s: &str) -> Result<Self, InjectivityError> {
        serde_json::from_str(s).map_err(|e| InjectivityError::Certificate(e.to_string()))
    }
}

fn system_for(g: u32, n: u32, source: Source) -> Result<LinearSystem, InjectivityError> {
    match source {
        Source::Displayed => build_rows_displayed(g, n),
        Source::Table => build_rows_table(g, n, &SweepLimits::default(), &rat(0)),
    }
}

/// Certificate for an arbitrary system; the table sweep is not performed.
pub fn certify(system: &LinearSystem) -> KernelCertificate {
    let e = system.matrix().eliminate();
    let cols = system.columns();
    let basis = e
        .basis
        .iter()
        .map(|v| {
            cols.iter()
                .zip(v)
                .filter(|(_, x)| !x.is_zero())
                .map(|(c, x)| (*c, x.to_string()))
                .collect()
        })
        .collect();
    let amb = system.ambient();
    KernelCertificate {
        g: amb.g(),
        n: amb.n(),
        source: system.source(),
        columns: cols.to_vec(),
        rows: system.len(),
        kernel_dim: e.basis.len(),
        basis,
        trace: e.pivots,
        swept_values: Vec::new(),
        mismatches: Vec::new(),
    }
}

/// Kernel of the chosen system. A nontrivial kernel is reported in the
/// certificate, not as an error.
pub fn verify_injectivity(g: u32, n: u32, source: Source) -> Result<KernelCertificate, InjectivityError> {
    let system = system_for(g, n, source)?;
    let mut cert = certify(&system);
    if source == Source::Table {
        cert.swept_values = SWEEP_VALUES
            .par_iter()
            .map(|&value| {
                build_rows_table(g, n, &SweepLimits::default(), &rat(value))
                    .map(|s| SweptValue { value, kernel_dim: s.kernel_dim() })
            })
            .collect::<Result<_, _>>()?;
    }
    cert.mismatches = diff_systems(g, n)?.mismatches;
    Ok(cert)
}

/// Rebuilds the system, replays the recorded pivots and checks that they
/// reproduce the recorded basis, which must annihilate every row.
pub fn check_certificate(cert: &KernelCertificate) -> Result<(), InjectivityError> {
    let bad = |m: String| Err(InjectivityError::Certificate(m));
    let system = system_for(cert.g, cert.n, cert.source)?;
    if system.columns() != cert.columns.as_slice() {
        return bad("column list differs from the rebuilt system".into());
    }
    if system.len() != cert.rows {
        return bad(format!("row count {} differs from rebuilt {}", cert.rows, system.len()));
    }
    if cert.basis.len() != cert.kernel_dim {
        return bad("kernel_dim does not match basis length".into());
    }
    let mut recorded = Vec::with_capacity(cert.basis.len());
    for v in &cert.basis {
        let mut dense = vec![Rational::zero(); cert.columns.len()];
        for (c, x) in v {
            let Some(pos) = cert.columns.iter().position(|k| k == c) else {
                return bad(format!("basis uses unknown column {c}"));
            };
            dense[pos] = parse_rational(x)?;
        }
        recorded.push(dense);
    }
    let replayed = system.matrix().replay(&cert.trace)?;
    if replayed != recorded {
        return bad("replayed kernel differs from the recorded basis".into());
    }
    for v in &recorded {
        if system.matrix().apply(v).iter().any(|x| !x.is_zero()) {
            return bad("a basis vector does not annihilate the system".into());
        }
    }
    Ok(())
}
