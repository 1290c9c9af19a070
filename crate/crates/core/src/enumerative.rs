// SPDX-License-Identifier: Apache-2.0

//! Degrees of maps to Jacobians.
//!
//! [`theta_degree`] is the symbolic rule `deg (m_1 Θ ... m_g Θ) = g! ∏ m_i^2`.
//! The rest of the module checks it numerically for the map
//! `f(q1, q2) = d1 [q1 - ∞] + d2 [q2 - ∞]` from `C x C` to the Jacobian of a
//! genus-2 curve, by counting rational fibers over a tower of finite
//! fields.
//!
//! Counting uses Frobenius orbits: for a target defined over the base field
//! the fiber is Frobenius-stable, so only one `x` per orbit is scanned and
//! weighted by the orbit length.

use std::collections::{HashMap, HashSet};

use num_bigint::BigInt;
use num_traits::ToPrimitive;
use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::arith::{make_ext_field, ArithError, Embedding, ExtField, FieldElem};
use crate::curves::{CurveError, HyperellipticCurve, JacobianElement, Point};

/// Fields up to this size also keep every point, so targets that are not
/// defined over the base field can be counted.
pub const FULL_SCAN_LIMIT: u32 = 1 << 14;

/// Base points whose diagonal and involution images are reported.
pub const SPECIAL_TARGETS: usize = 4;

/// General targets tried per requested sample before giving up.
pub const ATTEMPTS_PER_SAMPLE: usize = 8;

pub const SAMPLING_CAVEAT: &str = "general position is sampled, not proven: a target counts as general \
     only if no scanned field shows a fiber point on the diagonal or on the involution locus";

#[derive(Debug, Error)]
pub enum EnumError {
    #[error("expected {expected} multipliers, got {found}")]
    Arity { expected: usize, found: usize },
    #[error("the fiber oracle needs |d2| = 1, got d2 = {0}")]
    InnerDegree(i64),
    #[error("d1 must be nonzero")]
    ZeroDegree,
    #[error("target is not defined over the base field and the field is too large for a full scan")]
    NeedsFullScan,
    #[error(transparent)]
    Curve(#[from] CurveError),
    #[error(transparent)]
    Arith(#[from] ArithError),
}

/// `g! · ∏ m_i²`.
pub fn theta_degree(g: u32, mults: &[i64]) -> Result<BigInt, EnumError> {
    if mults.len() != g as usize {
        return Err(EnumError::Arity { expected: g as usize, found: mults.len() });
    }
    let fact: BigInt = (1..=g).map(BigInt::from).product();
    Ok(mults.iter().fold(fact, |acc, &m| acc * BigInt::from(m) * BigInt::from(m)))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum RamificationLocusTag {
    Diagonal,
    Involution,
    General,
}

struct Entry {
    point: Point,
    /// `d1 [point - ∞]`.
    image: JacobianElement,
    weight: u32,
}

/// Outcome of scanning one target.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct Scan {
    pub count: u64,
    pub meets_diagonal: bool,
    pub meets_involution: bool,
}

/// Exact packing of a reduced Mumford pair; fields stay below `2^26`.
fn key(d: &JacobianElement) -> u128 {
    let i = |x: FieldElem| u128::from(x.index());
    (d.weight() as u128) << 104
        | i(d.u.coeff(0)) << 78
        | i(d.u.coeff(1)) << 52
        | i(d.v.coeff(0)) << 26
        | i(d.v.coeff(1))
}

/// Applies `c -> c^e` to every coefficient.
fn frobenius(k: &ExtField, d: &JacobianElement, e: u64) -> JacobianElement {
    let map = |p: &crate::curves::Poly| {
        let cs: Vec<FieldElem> = p.coeffs().iter().map(|&c| k.pow(c, e)).collect();
        crate::curves::Poly::from_coeffs(&cs)
    };
    JacobianElement { u: map(&d.u), v: map(&d.v) }
}

/// Degree over the prime field of the smallest field containing the
/// Mumford coefficients of `d`.
pub fn field_of_definition(k: &ExtField, d: &JacobianElement) -> u32 {
    let p = u64::from(k.characteristic());
    (1..=k.degree())
        .filter(|e| k.degree().is_multiple_of(*e))
        .find(|&e| frobenius(k, d, p.pow(e)) == *d)
        .expect("the full field is a field of definition")
}

/// Precomputed images `d1 [q - ∞]` over `C(F_{q^k})`.
///
/// A pair `(q1, q2)` lies over `T` iff `d1 [q1 - ∞] = T - d2 [q2 - ∞]`, so a
/// target is counted by walking `q2` and looking the right side up in the
/// multiset of all images.
pub struct FiberOracle {
    curve: HyperellipticCurve,
    embedding: Embedding,
    base_order: u64,
    d1: i64,
    d2: i64,
    reps: Vec<Entry>,
    images: HashMap<u128, u32>,
    all: Option<Vec<Entry>>,
    point_count: u64,
}

fn check_degrees(d1: i64, d2: i64) -> Result<(), EnumError> {
    if d1 == 0 {
        return Err(EnumError::ZeroDegree);
    }
    if d2.abs() != 1 {
        return Err(EnumError::InnerDegree(d2));
    }
    Ok(())
}

impl FiberOracle {
    pub fn new(base: &HyperellipticCurve, d1: i64, d2: i64, k: u32) -> Result<Self, EnumError> {
        check_degrees(d1, d2)?;
        let bf = base.field();
        let ext = make_ext_field(bf.characteristic(), bf.degree() * k)?;
        let (curve, embedding) = base.base_change(&ext)?;
        let q = u64::from(bf.order());
        let entry = |p: Point, weight: u32| {
            let image = curve.mul_unchecked(d1, &curve.class_of_point_unchecked(&p));
            Entry { point: p, image, weight }
        };
        let mut reps = vec![entry(Point::Infinity, 1)];
        for x in ext.elements() {
            let Some(orbit) = orbit_if_rep(&ext, x, q) else { continue };
            let rhs = curve.f().eval(&ext, x);
            let Some(y) = ext.sqrt(rhs) else { continue };
            let ys = if y.is_zero() { vec![y] } else { vec![y, ext.neg(y)] };
            reps.extend(ys.into_iter().map(|y| entry(Point::Affine { x, y }, orbit)));
        }
        let point_count: u64 = reps.iter().map(|e| u64::from(e.weight)).sum();
        let mut images = HashMap::with_capacity(point_count as usize);
        for e in &reps {
            let mut power = 1u64;
            for _ in 0..e.weight {
                *images.entry(key(&frobenius(&ext, &e.image, power))).or_insert(0) += 1;
                power *= q;
            }
        }
        let all = (ext.order() <= FULL_SCAN_LIMIT)
            .then(|| curve.points().map(|ps| ps.into_iter().map(|p| entry(p, 1)).collect::<Vec<_>>()))
            .transpose()?;
        Ok(FiberOracle { curve, embedding, base_order: q, d1, d2, reps, images, all, point_count })
    }

    pub fn curve(&self) -> &HyperellipticCurve {
        &self.curve
    }

    pub fn embedding(&self) -> &Embedding {
        &self.embedding
    }

    pub fn degrees(&self) -> (i64, i64) {
        (self.d1, self.d2)
    }

    /// `#C(F_{q^k})`, infinity included.
    pub fn point_count(&self) -> u64 {
        self.point_count
    }

    fn is_base_rational(&self, t: &JacobianElement) -> bool {
        let k = self.curve.field();
        t.u.coeffs().iter().chain(t.v.coeffs()).all(|&c| k.pow(c, self.base_order) == c)
    }

    fn multiplicity(&self, d: &JacobianElement) -> u64 {
        self.images.get(&key(d)).map_or(0, |&n| u64::from(n))
    }

    fn scan_entries(&self, entries: &[Entry], t: &JacobianElement) -> Scan {
        let c = &self.curve;
        let mut s = Scan::default();
        for e in entries {
            let shift = if self.d2 == 1 { c.involution(&e.point) } else { e.point };
            let d = c.add_point_unchecked(t, &shift);
            let n1 = self.multiplicity(&d);
            if n1 == 0 {
                continue;
            }
            s.count += u64::from(e.weight) * n1;
            s.meets_diagonal |= d == e.image;
            s.meets_involution |= d == c.jac_neg(&e.image);
        }
        s
    }

    /// Scans a target given over the base field.
    pub fn scan(&self, target: &JacobianElement) -> Scan {
        self.scan_entries(&self.reps, &target.map(&self.embedding))
    }

    /// Scans a target given over the extension itself.
    pub fn scan_ext(&self, target: &JacobianElement) -> Result<Scan, EnumError> {
        if self.is_base_rational(target) {
            return Ok(self.scan_entries(&self.reps, target));
        }
        let all = self.all.as_ref().ok_or(EnumError::NeedsFullScan)?;
        Ok(self.scan_entries(all, target))
    }

    /// Pairs `(q1, q2)` in the fiber by testing every pair; small fields only.
    pub fn fiber_points(&self, target: &JacobianElement) -> Result<Vec<(Point, Point)>, EnumError> {
        let all = self.all.as_ref().ok_or(EnumError::NeedsFullScan)?;
        let mut out = Vec::new();
        for q1 in all.iter().map(|e| e.point) {
            for q2 in all.iter().map(|e| e.point) {
                if self.image(&q1, &q2) == *target {
                    out.push((q1, q2));
                }
            }
        }
        Ok(out)
    }

    /// `d1 [q1 - ∞] + d2 [q2 - ∞]` over the extension.
    pub fn image(&self, q1: &Point, q2: &Point) -> JacobianElement {
        let c = &self.curve;
        let a = c.mul_unchecked(self.d1, &c.class_of_point_unchecked(q1));
        let b = c.mul_unchecked(self.d2, &c.class_of_point_unchecked(q2));
        c.add_unchecked(&a, &b)
    }
}

/// Orbit length of `x` under `x -> x^q` if `x` is the smallest element of
/// its orbit, else `None`.
fn orbit_if_rep(k: &ExtField, x: FieldElem, q: u64) -> Option<u32> {
    let mut y = k.pow(x, q);
    let mut len = 1;
    while y != x {
        if y < x {
            return None;
        }
        y = k.pow(y, q);
        len += 1;
    }
    Some(len)
}

/// Number of pairs `(q1, q2)` over `F_{q^k}` with
/// `d1 [q1 - ∞] + d2 [q2 - ∞] = target`, for `target` over the base field.
pub fn fiber_count(
    curve: &HyperellipticCurve,
    d1: i64,
    d2: i64,
    target: &JacobianElement,
    k: u32,
) -> Result<u64, EnumError> {
    if !curve.is_element(target) {
        return Err(CurveError::NotOnCurve.into());
    }
    Ok(FiberOracle::new(curve, d1, d2, k)?.scan(target).count)
}

/// `d1 [a - ∞] + d2 [b - ∞]` on the base curve.
pub fn image_of(curve: &HyperellipticCurve, d1: i64, d2: i64, a: &Point, b: &Point) -> JacobianElement {
    let x = curve.mul_unchecked(d1, &curve.class_of_point_unchecked(a));
    let y = curve.mul_unchecked(d2, &curve.class_of_point_unchecked(b));
    curve.add_unchecked(&x, &y)
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TargetReport {
    pub id: usize,
    pub label: String,
    pub tag: RamificationLocusTag,
    /// Degree over `F_p` of the target's field of definition.
    pub field_degree: u32,
    /// Fiber counts for `k = 1..=kmax`.
    pub counts: Vec<u64>,
    pub max: u64,
    pub meets_diagonal: bool,
    pub meets_involution: bool,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ContractionReport {
    pub locus: RamificationLocusTag,
    /// Fiber counts over the identity class.
    pub identity_counts: Vec<u64>,
    /// Number of rational pairs on the contracted locus.
    pub locus_sizes: Vec<u64>,
    pub contains_locus: bool,
    pub grows: bool,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct FiniteDegreeReport {
    pub curve: String,
    pub d1: i64,
    pub d2: i64,
    pub kmax: u32,
    pub seed: u64,
    pub bound: u64,
    pub point_counts: Vec<u64>,
    pub general: Vec<TargetReport>,
    pub excluded: Vec<TargetReport>,
    pub diagonal: Vec<TargetReport>,
    pub involution: Vec<TargetReport>,
    pub observed_max: u64,
    pub requested_samples: usize,
    /// General targets whose count reaches the bound at some `k`.
    pub attained: usize,
    pub violations: Vec<String>,
    pub diagonal_deficient: bool,
    pub contraction: Option<ContractionReport>,
    pub caveat: String,
}

impl FiniteDegreeReport {
    pub fn is_general_case(&self) -> bool {
        self.d1 != self.d2 && self.d1 != -self.d2
    }

    /// Verdict: no fiber above the bound, the bound attained, enough general
    /// samples, deficient diagonal fibers; or, in the contracted cases, an
    /// identity fiber that contains the locus and grows.
    pub fn passes(&self) -> bool {
        if !self.violations.is_empty() {
            return false;
        }
        match &self.contraction {
            Some(c) => c.contains_locus && c.grows,
            None => {
                self.observed_max == self.bound
                    && self.attained >= self.requested_samples
                    && self.diagonal_deficient
            }
        }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }

    /// Aligned text table of the per-target counts.
    pub fn table(&self) -> String {
        let mut out = format!(
            "{}  d1={} d2={}  bound={}  observed max={}\n",
            self.curve, self.d1, self.d2, self.bound, self.observed_max
        );
        out.push_str(&format!("{:<5} {:<10} {:<28} counts k=1..{}\n", "id", "locus", "target", self.kmax));
        for t in self.general.iter().chain(&self.diagonal).chain(&self.involution) {
            let tag = format!("{:?}", t.tag).to_lowercase();
            let counts: Vec<String> = t.counts.iter().map(u64::to_string).collect();
            out.push_str(&format!("{:<5} {:<10} {:<28} {}\n", t.id, tag, t.label, counts.join(" ")));
        }
        out
    }
}

/// Samples general targets (until `samples` of them reach the bound, or the
/// attempt cap) and targets on the images of the diagonal and
/// the involution locus, and counts their rational fibers for
/// `k = 1..=kmax`.
pub fn verify_finite_degree(
    curve: &HyperellipticCurve,
    d1: i64,
    d2: i64,
    samples: usize,
    kmax: u32,
    seed: u64,
) -> Result<FiniteDegreeReport, EnumError> {
    check_degrees(d1, d2)?;
    let bound = theta_degree(2, &[d1, d2])?.to_u64().expect("small degrees");
    let oracles: Vec<FiberOracle> =
        (1..=kmax).map(|k| FiberOracle::new(curve, d1, d2, k)).collect::<Result<_, _>>()?;
    let point_counts: Vec<u64> = oracles.iter().map(FiberOracle::point_count).collect();
    let base_pts = curve.points()?;
    let k = curve.field();
    let name = |p: &Point| p.format(k);

    let run = |id: usize, label: String, tag, t: JacobianElement| -> TargetReport {
        let scans: Vec<Scan> = oracles.iter().map(|o| o.scan(&t)).collect();
        let counts: Vec<u64> = scans.iter().map(|s| s.count).collect();
        TargetReport {
            id,
            label,
            tag,
            field_degree: field_of_definition(k, &t),
            max: counts.iter().copied().max().unwrap_or(0),
            counts,
            meets_diagonal: scans.iter().any(|s| s.meets_diagonal),
            meets_involution: scans.iter().any(|s| s.meets_involution),
        }
    };

    // images of rational pairs first, then the rest of J(F_q)
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut pairs: Vec<(Point, Point)> = Vec::new();
    for a in &base_pts {
        for b in &base_pts {
            if a != b && *b != curve.involution(a) {
                pairs.push((*a, *b));
            }
        }
    }
    pairs.shuffle(&mut rng);
    let mut seen: HashSet<JacobianElement> = HashSet::new();
    let mut candidates: Vec<(String, JacobianElement)> = Vec::new();
    for (a, b) in pairs {
        let t = image_of(curve, d1, d2, &a, &b);
        if seen.insert(t) {
            candidates.push((format!("{d1}{} {:+}{}", name(&a), d2, name(&b)), t));
        }
    }
    // large Jacobians have enough pair images; skip the full enumeration
    let all = curve.jac_enumerate(FULL_SCAN_LIMIT.into()).unwrap_or_default();
    let mut rest: Vec<JacobianElement> = all.into_iter().filter(|t| !seen.contains(t)).collect();
    rest.sort();
    rest.shuffle(&mut rng);
    candidates.extend(rest.into_iter().map(|t| (format!("({}, {})", t.u.format(k), t.v.format(k)), t)));

    let max_attempts = samples.saturating_mul(ATTEMPTS_PER_SAMPLE);
    let mut general = Vec::new();
    let mut excluded = Vec::new();
    let mut attained = 0;
    let mut next_id = 0;
    let mut iter = candidates.into_iter().take(max_attempts);
    while attained < samples {
        let batch: Vec<(String, JacobianElement)> = iter.by_ref().take(samples - attained).collect();
        if batch.is_empty() {
            break;
        }
        let base_id = next_id;
        next_id += batch.len();
        let reports: Vec<TargetReport> = batch
            .into_par_iter()
            .enumerate()
            .map(|(i, (label, t))| run(base_id + i, label, RamificationLocusTag::General, t))
            .collect();
        for r in reports {
            if r.meets_diagonal || r.meets_involution {
                excluded.push(r);
            } else {
                attained += usize::from(r.max == bound);
                general.push(r);
            }
        }
    }

    let special: Vec<Point> = base_pts.iter().copied().take(SPECIAL_TARGETS).collect();
    let mut diagonal = Vec::new();
    let mut involution = Vec::new();
    for (i, a) in special.iter().enumerate() {
        let id = next_id + 2 * i;
        let t = image_of(curve, d1, d2, a, a);
        diagonal.push(run(id, format!("Δ({})", name(a)), RamificationLocusTag::Diagonal, t));
        let t = image_of(curve, d1, d2, a, &curve.involution(a));
        involution.push(run(id + 1, format!("I({})", name(a)), RamificationLocusTag::Involution, t));
    }

    let mut violations = Vec::new();
    let general_case = d1 != d2 && d1 != -d2;
    if general_case {
        for t in &general {
            for (k, &c) in t.counts.iter().enumerate() {
                if c > bound {
                    violations.push(format!("target {} ({}) has {} > {bound} points at k={}", t.id, t.label, c, k + 1));
                }
            }
        }
    }
    let observed_max = general.iter().map(|t| t.max).max().unwrap_or(0);
    let diagonal_deficient = diagonal.iter().all(|t| t.max < bound);

    let contraction = (!general_case).then(|| {
        let locus = if d1 == -d2 { RamificationLocusTag::Diagonal } else { RamificationLocusTag::Involution };
        let identity_counts: Vec<u64> =
            oracles.iter().map(|o| o.scan(&JacobianElement::IDENTITY).count).collect();
        let locus_sizes = point_counts.clone();
        ContractionReport {
            locus,
            contains_locus: identity_counts.iter().zip(&locus_sizes).all(|(c, l)| c >= l),
            grows: identity_counts.windows(2).any(|w| w[1] > w[0]),
            identity_counts,
            locus_sizes,
        }
    });

    Ok(FiniteDegreeReport {
        curve: curve.describe(),
        d1,
        d2,
        kmax,
        seed,
        bound,
        point_counts,
        general,
        excluded,
        diagonal,
        involution,
        observed_max,
        requested_samples: samples,
        attained,
        violations,
        diagonal_deficient,
        contraction,
        caveat: SAMPLING_CAVEAT.into(),
    })
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PartitionReport {
    pub k: u32,
    pub points: u64,
    pub targets: usize,
    pub sum_of_counts: u64,
    pub expected: u64,
    /// Targets where the scan disagrees with the forward image count.
    pub disagreements: usize,
}

impl PartitionReport {
    pub fn holds(&self) -> bool {
        self.sum_of_counts == self.expected && self.disagreements == 0
    }
}

/// Pushes every pair forward to get a histogram, then recounts every target
/// with the scanning oracle. With `exhaustive`, the targets are all of
/// `J(F_{q^k})` rather than the histogram support.
pub fn partition_check(
    curve: &HyperellipticCurve,
    d1: i64,
    d2: i64,
    k: u32,
    exhaustive: bool,
) -> Result<PartitionReport, EnumError> {
    let o = FiberOracle::new(curve, d1, d2, k)?;
    let pts = o.curve().points()?;
    let mut hist: HashMap<JacobianElement, u64> = HashMap::new();
    for q1 in &pts {
        for q2 in &pts {
            *hist.entry(o.image(q1, q2)).or_default() += 1;
        }
    }
    let targets: Vec<JacobianElement> = if exhaustive {
        let mut all = o.curve().jac_enumerate(u64::MAX)?;
        all.sort();
        all
    } else {
        let mut keys: Vec<_> = hist.keys().copied().collect();
        keys.sort();
        keys
    };
    let counts: Vec<u64> =
        targets.par_iter().map(|t| o.scan_ext(t).map(|s| s.count)).collect::<Result<_, _>>()?;
    let disagreements =
        targets.iter().zip(&counts).filter(|(t, c)| hist.get(t).copied().unwrap_or(0) != **c).count();
    let n = pts.len() as u64;
    Ok(PartitionReport {
        k,
        points: n,
        targets: targets.len(),
        sum_of_counts: counts.iter().sum(),
        expected: n * n,
        disagreements,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn curve(p: u32, f: &str) -> HyperellipticCurve {
        HyperellipticCurve::parse(&make_ext_field(p, 1).unwrap(), f).unwrap()
    }

    #[test]
    fn theta_examples() {
        assert_eq!(theta_degree(2, &[1, 1]).unwrap(), BigInt::from(2));
        assert_eq!(theta_degree(2, &[2, 2]).unwrap(), BigInt::from(32));
        assert_eq!(theta_degree(3, &[-1, -2, 2]).unwrap(), BigInt::from(96));
        assert!(matches!(theta_degree(3, &[1, 1]), Err(EnumError::Arity { expected: 3, found: 2 })));
    }

    #[test]
    fn rejects_non_unit_inner_degree() {
        let c = curve(7, "x^5+1");
        assert!(matches!(FiberOracle::new(&c, 2, 2, 1), Err(EnumError::InnerDegree(2))));
    }

    #[test]
    fn orbit_reps_count_points() {
        let c = curve(7, "x^5+1");
        for k in 1..=3 {
            let o = FiberOracle::new(&c, 2, -1, k).unwrap();
            assert_eq!(o.point_count(), o.curve().points().unwrap().len() as u64);
        }
    }

    #[test]
    fn own_pair_lies_in_fiber() {
        let c = curve(7, "x^5+1");
        let pts = c.points().unwrap();
        let (a, b) = (pts[1], pts[3]);
        let t = image_of(&c, 2, -1, &a, &b);
        assert!(fiber_count(&c, 2, -1, &t, 1).unwrap() >= 1);
    }

    #[test]
    fn scan_matches_explicit_fiber() {
        let c = curve(7, "x^5+1");
        let o = FiberOracle::new(&c, 2, -1, 2).unwrap();
        let pts = c.points().unwrap();
        for a in pts.iter().take(4) {
            for b in pts.iter().take(4) {
                let t = image_of(&c, 2, -1, a, b);
                let listed = o.fiber_points(&t.map(o.embedding())).unwrap();
                let s = o.scan(&t);
                assert_eq!(s.count, listed.len() as u64);
                assert_eq!(s.meets_diagonal, listed.iter().any(|(x, y)| x == y));
            }
        }
    }

    #[test]
    fn partition_small() {
        let c = curve(3, "x^5+2x+1");
        for k in 1..=2 {
            let r = partition_check(&c, 2, -1, k, true).unwrap();
            assert!(r.holds(), "{r:?}");
        }
    }

    #[test]
    fn contraction_of_diagonal() {
        let c = curve(7, "x^5+1");
        let r = verify_finite_degree(&c, 1, -1, 3, 3, 1).unwrap();
        let con = r.contraction.clone().unwrap();
        assert_eq!(con.locus, RamificationLocusTag::Diagonal);
        assert_eq!(con.identity_counts, con.locus_sizes);
        assert!(r.passes());
    }
}
