// SPDX-License-Identifier: Apache-2.0

//! Group laws over finite fields: elliptic curves in short Weierstrass form
//! and Jacobians of genus-2 curves `y^2 = f(x)` with `f` monic of degree 5,
//! in Mumford representation with Cantor's algorithm.

use std::collections::HashMap;
use std::fmt;

use thiserror::Error;

use crate::arith::{ArithError, Embedding, ExtField, FieldElem, DEFAULT_ENUMERATION_BOUND};

/// Fixed capacity of [`Poly`]; Cantor composition of two reduced genus-2
/// divisors never exceeds degree 8.
pub const POLY_CAP: usize = 12;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CurveError {
    #[error("characteristic {0} is not supported for this curve model")]
    Characteristic(u32),
    #[error("curve is singular: {0}")]
    Singular(&'static str),
    #[error("expected a monic polynomial of degree {expected}, got {got}")]
    Shape { expected: usize, got: String },
    #[error("point or divisor is not on the curve")]
    NotOnCurve,
    #[error("enumeration of {size} candidates exceeds bound {bound}")]
    TooLarge { size: u128, bound: u64 },
    #[error("cannot parse polynomial {0:?}")]
    Parse(String),
    #[error(transparent)]
    Arith(#[from] ArithError),
}

// ---------------------------------------------------------------------------
// polynomials

/// Polynomial over an [`ExtField`], coefficients from degree 0 upward.
/// Unused slots are always zero, so derived equality and hashing are exact.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Poly {
    c: [FieldElem; POLY_CAP],
    len: u8,
}

impl fmt::Debug for Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_list().entries(self.coeffs()).finish()
    }
}

impl Poly {
    pub const ZERO: Poly = Poly { c: [FieldElem::ZERO; POLY_CAP], len: 0 };
    pub const ONE: Poly = {
        let mut c = [FieldElem::ZERO; POLY_CAP];
        c[0] = FieldElem::ONE;
        Poly { c, len: 1 }
    };

    pub fn constant(a: FieldElem) -> Poly {
        Poly::from_coeffs(&[a])
    }

    /// `x - a`.
    pub fn linear_root(k: &ExtField, a: FieldElem) -> Poly {
        Poly::from_coeffs(&[k.neg(a), FieldElem::ONE])
    }

    pub fn from_coeffs(cs: &[FieldElem]) -> Poly {
        let mut p = Poly::ZERO;
        let mut len = cs.len();
        while len > 0 && cs[len - 1].is_zero() {
            len -= 1;
        }
        assert!(len <= POLY_CAP, "polynomial exceeds fixed capacity");
        p.c[..len].copy_from_slice(&cs[..len]);
        p.len = len as u8;
        p
    }

    pub fn coeffs(&self) -> &[FieldElem] {
        &self.c[..self.len as usize]
    }

    pub fn coeff(&self, i: usize) -> FieldElem {
        if i < POLY_CAP {
            self.c[i]
        } else {
            FieldElem::ZERO
        }
    }

    pub fn degree(&self) -> Option<usize> {
        (self.len as usize).checked_sub(1)
    }

    /// Degree, with the zero polynomial counted as degree 0.
    fn deg0(&self) -> usize {
        self.degree().unwrap_or(0)
    }

    pub fn is_zero(&self) -> bool {
        self.len == 0
    }

    pub fn is_one(&self) -> bool {
        *self == Poly::ONE
    }

    pub fn lead(&self) -> FieldElem {
        self.degree().map_or(FieldElem::ZERO, |d| self.c[d])
    }

    fn trimmed(mut self) -> Poly {
        while self.len > 0 && self.c[self.len as usize - 1].is_zero() {
            self.len -= 1;
        }
        self
    }

    pub fn add(&self, k: &ExtField, o: &Poly) -> Poly {
        let mut r = Poly::ZERO;
        let n = self.len.max(o.len) as usize;
        for i in 0..n {
            r.c[i] = k.add(self.c[i], o.c[i]);
        }
        r.len = n as u8;
        r.trimmed()
    }

    pub fn neg(&self, k: &ExtField) -> Poly {
        let mut r = *self;
        for x in r.c[..self.len as usize].iter_mut() {
            *x = k.neg(*x);
        }
        r
    }

    pub fn sub(&self, k: &ExtField, o: &Poly) -> Poly {
        self.add(k, &o.neg(k))
    }

    pub fn scale(&self, k: &ExtField, a: FieldElem) -> Poly {
        if a.is_zero() {
            return Poly::ZERO;
        }
        let mut r = *self;
        for x in r.c[..self.len as usize].iter_mut() {
            *x = k.mul(*x, a);
        }
        r
    }

    pub fn mul(&self, k: &ExtField, o: &Poly) -> Poly {
        if self.is_zero() || o.is_zero() {
            return Poly::ZERO;
        }
        let n = self.len as usize + o.len as usize - 1;
        assert!(n <= POLY_CAP, "product exceeds fixed capacity");
        let mut r = Poly::ZERO;
        for i in 0..self.len as usize {
            if self.c[i].is_zero() {
                continue;
            }
            for j in 0..o.len as usize {
                r.c[i + j] = k.add(r.c[i + j], k.mul(self.c[i], o.c[j]));
            }
        }
        r.len = n as u8;
        r.trimmed()
    }

    /// Quotient and remainder; panics when dividing by zero.
    pub fn divrem(&self, k: &ExtField, d: &Poly) -> (Poly, Poly) {
        let dd = d.degree().expect("polynomial division by zero");
        let inv = k.inv(d.lead()).expect("nonzero leading coefficient");
        let mut rem = *self;
        let mut q = Poly::ZERO;
        while let Some(rd) = rem.degree() {
            if rd < dd {
                break;
            }
            let coef = k.mul(rem.c[rd], inv);
            let shift = rd - dd;
            q.c[shift] = coef;
            q.len = q.len.max(shift as u8 + 1);
            for j in 0..=dd {
                rem.c[shift + j] = k.sub(rem.c[shift + j], k.mul(coef, d.c[j]));
            }
            rem = rem.trimmed();
        }
        (q.trimmed(), rem)
    }

    pub fn rem(&self, k: &ExtField, d: &Poly) -> Poly {
        if self.len < d.len {
            return *self;
        }
        self.divrem(k, d).1
    }

    fn div_exact(&self, k: &ExtField, d: &Poly) -> Poly {
        if d.is_one() {
            return *self;
        }
        let (q, r) = self.divrem(k, d);
        debug_assert!(r.is_zero(), "inexact polynomial division");
        q
    }

    pub fn monic(&self, k: &ExtField) -> Poly {
        match k.inv(self.lead()) {
            Some(inv) if inv != FieldElem::ONE => self.scale(k, inv),
            _ => *self,
        }
    }

    pub fn eval(&self, k: &ExtField, x: FieldElem) -> FieldElem {
        self.coeffs().iter().rev().fold(FieldElem::ZERO, |acc, &c| k.add(k.mul(acc, x), c))
    }

    pub fn derivative(&self, k: &ExtField) -> Poly {
        if self.len <= 1 {
            return Poly::ZERO;
        }
        let cs: Vec<FieldElem> =
            (1..self.len as usize).map(|i| k.mul(k.from_int(i as i64), self.c[i])).collect();
        Poly::from_coeffs(&cs)
    }

    /// `(d, s, t)` with `d = gcd(a, b)` monic (or zero) and `s a + t b = d`.
    pub fn xgcd(k: &ExtField, a: &Poly, b: &Poly) -> (Poly, Poly, Poly) {
        let (mut r0, mut r1) = (*a, *b);
        let (mut s0, mut s1) = (Poly::ONE, Poly::ZERO);
        let (mut t0, mut t1) = (Poly::ZERO, Poly::ONE);
        while !r1.is_zero() {
            let (q, r) = r0.divrem(k, &r1);
            let s2 = s0.sub(k, &q.mul(k, &s1));
            let t2 = t0.sub(k, &q.mul(k, &t1));
            (r0, r1) = (r1, r);
            (s0, s1) = (s1, s2);
            (t0, t1) = (t1, t2);
        }
        match k.inv(r0.lead()) {
            Some(inv) => (r0.scale(k, inv), s0.scale(k, inv), t0.scale(k, inv)),
            None => (r0, s0, t0),
        }
    }

    pub fn gcd(k: &ExtField, a: &Poly, b: &Poly) -> Poly {
        Poly::xgcd(k, a, b).0
    }

    pub fn map(&self, e: &Embedding) -> Poly {
        let cs: Vec<FieldElem> = self.coeffs().iter().map(|&c| e.map(c)).collect();
        Poly::from_coeffs(&cs)
    }

    pub fn format(&self, k: &ExtField) -> String {
        if self.is_zero() {
            return "0".into();
        }
        let mut terms = Vec::new();
        for (i, &c) in self.coeffs().iter().enumerate().rev() {
            if c.is_zero() {
                continue;
            }
            let cs = k.format(c);
            let cs = if cs.contains('+') { format!("({cs})") } else { cs };
            terms.push(match (i, cs.as_str()) {
                (0, _) => cs.clone(),
                (1, "1") => "x".into(),
                (1, _) => format!("{cs}*x"),
                (_, "1") => format!("x^{i}"),
                _ => format!("{cs}*x^{i}"),
            });
        }
        terms.join(" + ")
    }
}

/// Parses an integer polynomial such as `"x^5 + 3*x - 2"` or `"x^5+x+3"` into
/// coefficients from degree 0 upward.
pub fn parse_int_poly(s: &str) -> Result<Vec<i64>, CurveError> {
    let bad = || CurveError::Parse(s.to_string());
    let compact: String = s.chars().filter(|c| !c.is_whitespace()).collect();
    if compact.is_empty() {
        return Err(bad());
    }
    let mut coeffs: Vec<i64> = Vec::new();
    let mut terms = Vec::new();
    let mut start = 0;
    for (i, ch) in compact.char_indices() {
        if (ch == '+' || ch == '-') && i > 0 && !compact[..i].ends_with('^') {
            terms.push(&compact[start..i]);
            start = i;
        }
    }
    terms.push(&compact[start..]);
    for term in terms {
        let (sign, body) = match term.strip_prefix('-') {
            Some(rest) => (-1, rest),
            None => (1, term.strip_prefix('+').unwrap_or(term)),
        };
        if body.is_empty() {
            return Err(bad());
        }
        let (coef, exp) = match body.find('x') {
            None => (body.parse::<i64>().map_err(|_| bad())?, 0usize),
            Some(pos) => {
                let head = body[..pos].trim_end_matches('*');
                let coef = if head.is_empty() { 1 } else { head.parse::<i64>().map_err(|_| bad())? };
                let tail = &body[pos + 1..];
                let exp = if tail.is_empty() {
                    1
                } else {
                    tail.strip_prefix('^').ok_or_else(bad)?.parse::<usize>().map_err(|_| bad())?
                };
                (coef, exp)
            }
        };
        if exp >= POLY_CAP {
            return Err(bad());
        }
        if coeffs.len() <= exp {
            coeffs.resize(exp + 1, 0);
        }
        coeffs[exp] += sign * coef;
    }
    Ok(coeffs)
}

// ---------------------------------------------------------------------------
// points

/// A point of a curve with a single point at infinity.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Point {
    Infinity,
    Affine { x: FieldElem, y: FieldElem },
}

pub type EllipticPoint = Point;

impl Point {
    pub fn map(&self, e: &Embedding) -> Point {
        match *self {
            Point::Infinity => Point::Infinity,
            Point::Affine { x, y } => Point::Affine { x: e.map(x), y: e.map(y) },
        }
    }

    pub fn format(&self, k: &ExtField) -> String {
        match *self {
            Point::Infinity => "O".into(),
            Point::Affine { x, y } => format!("({}, {})", k.format(x), k.format(y)),
        }
    }
}

fn check_size(size: u128, bound: u64) -> Result<(), CurveError> {
    if size > bound as u128 {
        return Err(CurveError::TooLarge { size, bound });
    }
    Ok(())
}

/// All `(x, y)` with `y^2 = rhs(x)`, plus infinity first.
fn affine_points(k: &ExtField, rhs: impl Fn(FieldElem) -> FieldElem) -> Vec<Point> {
    let mut out = vec![Point::Infinity];
    for x in k.elements() {
        let r = rhs(x);
        if let Some(y) = k.sqrt(r) {
            if y.is_zero() {
                out.push(Point::Affine { x, y });
            } else {
                let (a, b) = (y, k.neg(y));
                let (a, b) = if k.encode(a) <= k.encode(b) { (a, b) } else { (b, a) };
                out.push(Point::Affine { x, y: a });
                out.push(Point::Affine { x, y: b });
            }
        }
    }
    out
}

// ---------------------------------------------------------------------------
// elliptic curves

/// `y^2 = x^3 + a x + b` over a field of characteristic other than 2, 3.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EllipticCurve {
    field: ExtField,
    a: FieldElem,
    b: FieldElem,
}

impl EllipticCurve {
    pub fn new(field: &ExtField, a: FieldElem, b: FieldElem) -> Result<Self, CurveError> {
        let p = field.characteristic();
        if p == 2 || p == 3 {
            return Err(CurveError::Characteristic(p));
        }
        let k = field;
        let disc = k.add(
            k.mul(k.from_int(4), k.pow(a, 3)),
            k.mul(k.from_int(27), k.mul(b, b)),
        );
        if disc.is_zero() {
            return Err(CurveError::Singular("4a^3 + 27b^2 = 0"));
        }
        Ok(EllipticCurve { field: field.clone(), a, b })
    }

    pub fn from_ints(field: &ExtField, a: i64, b: i64) -> Result<Self, CurveError> {
        EllipticCurve::new(field, field.from_int(a), field.from_int(b))
    }

    pub fn field(&self) -> &ExtField {
        &self.field
    }

    pub fn coefficients(&self) -> (FieldElem, FieldElem) {
        (self.a, self.b)
    }

    fn rhs(&self, x: FieldElem) -> FieldElem {
        let k = &self.field;
        k.add(k.mul(k.add(k.mul(x, x), self.a), x), self.b)
    }

    pub fn contains(&self, p: &Point) -> bool {
        match *p {
            Point::Infinity => true,
            Point::Affine { x, y } => self.field.mul(y, y) == self.rhs(x),
        }
    }

    fn check(&self, p: &Point) -> Result<(), CurveError> {
        if self.contains(p) {
            Ok(())
        } else {
            Err(CurveError::NotOnCurve)
        }
    }

    pub fn neg(&self, p: &Point) -> Point {
        match *p {
            Point::Infinity => Point::Infinity,
            Point::Affine { x, y } => Point::Affine { x, y: self.field.neg(y) },
        }
    }

    pub(crate) fn add_unchecked(&self, p: &Point, q: &Point) -> Point {
        let k = &self.field;
        let (x1, y1, x2, y2) = match (*p, *q) {
            (Point::Infinity, _) => return *q,
            (_, Point::Infinity) => return *p,
            (Point::Affine { x: x1, y: y1 }, Point::Affine { x: x2, y: y2 }) => (x1, y1, x2, y2),
        };
        let slope = if x1 == x2 {
            if k.add(y1, y2).is_zero() {
                return Point::Infinity;
            }
            let num = k.add(k.mul(k.from_int(3), k.mul(x1, x1)), self.a);
            k.div(num, k.add(y1, y1))
        } else {
            k.div(k.sub(y2, y1), k.sub(x2, x1))
        };
        let x3 = k.sub(k.sub(k.mul(slope, slope), x1), x2);
        let y3 = k.sub(k.mul(slope, k.sub(x1, x3)), y1);
        Point::Affine { x: x3, y: y3 }
    }

    /// Chord-tangent addition; both points must lie on the curve.
    pub fn add(&self, p: &Point, q: &Point) -> Result<Point, CurveError> {
        self.check(p)?;
        self.check(q)?;
        Ok(self.add_unchecked(p, q))
    }

    pub(crate) fn mul_unchecked(&self, d: i64, p: &Point) -> Point {
        let base = if d < 0 { self.neg(p) } else { *p };
        let mut e = d.unsigned_abs();
        let mut acc = Point::Infinity;
        let mut run = base;
        while e > 0 {
            if e & 1 == 1 {
                acc = self.add_unchecked(&acc, &run);
            }
            run = self.add_unchecked(&run, &run);
            e >>= 1;
        }
        acc
    }

    /// `d P` by double-and-add; negative `d` multiplies `-P`.
    pub fn mul(&self, d: i64, p: &Point) -> Result<Point, CurveError> {
        self.check(p)?;
        Ok(self.mul_unchecked(d, p))
    }

    /// All rational points, infinity first, then by `x` code.
    pub fn enumerate(&self) -> Result<Vec<Point>, CurveError> {
        self.enumerate_bounded(DEFAULT_ENUMERATION_BOUND)
    }

    pub fn enumerate_bounded(&self, bound: u64) -> Result<Vec<Point>, CurveError> {
        check_size(self.field.order() as u128, bound)?;
        Ok(affine_points(&self.field, |x| self.rhs(x)))
    }

    /// Number of rational `P` with `d P = Q`.
    pub fn division_count(&self, d: i64, q: &Point) -> Result<usize, CurveError> {
        self.check(q)?;
        Ok(self.enumerate()?.iter().filter(|p| self.mul_unchecked(d, p) == *q).count())
    }

    /// Preimages of every point under multiplication by `d`.
    pub fn division_table(&self, d: i64) -> Result<HashMap<Point, Vec<Point>>, CurveError> {
        let mut table: HashMap<Point, Vec<Point>> = HashMap::new();
        for p in self.enumerate()? {
            table.entry(self.mul_unchecked(d, &p)).or_default().push(p);
        }
        Ok(table)
    }

    /// The same curve over an extension, with the embedding used.
    pub fn base_change(&self, target: &ExtField) -> Result<(EllipticCurve, Embedding), CurveError> {
        let e = self.field.embedding_into(target)?;
        let curve = EllipticCurve::new(target, e.map(self.a), e.map(self.b))?;
        Ok((curve, e))
    }
}

// ---------------------------------------------------------------------------
// genus 2

/// `y^2 = f(x)` with `f` monic of degree 5 and squarefree.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct HyperellipticCurve {
    field: ExtField,
    f: Poly,
}

/// Reduced Mumford pair `(u, v)`: `u` monic, `deg v < deg u <= 2`,
/// `u | v^2 - f`. The identity is `(1, 0)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct JacobianElement {
    pub u: Poly,
    pub v: Poly,
}

impl JacobianElement {
    pub const IDENTITY: JacobianElement = JacobianElement { u: Poly::ONE, v: Poly::ZERO };

    pub fn is_identity(&self) -> bool {
        *self == JacobianElement::IDENTITY
    }

    /// Number of points in the support, counted with multiplicity.
    pub fn weight(&self) -> usize {
        self.u.deg0()
    }

    pub fn map(&self, e: &Embedding) -> JacobianElement {
        JacobianElement { u: self.u.map(e), v: self.v.map(e) }
    }
}

impl HyperellipticCurve {
    pub fn new(field: &ExtField, f_coeffs: &[FieldElem]) -> Result<Self, CurveError> {
        let p = field.characteristic();
        if p == 2 || p == 5 {
            return Err(CurveError::Characteristic(p));
        }
        let f = Poly::from_coeffs(f_coeffs);
        if f.degree() != Some(5) || f.lead() != FieldElem::ONE {
            return Err(CurveError::Shape { expected: 5, got: f.format(field) });
        }
        if !Poly::gcd(field, &f, &f.derivative(field)).is_one() {
            return Err(CurveError::Singular("f has a repeated root"));
        }
        Ok(HyperellipticCurve { field: field.clone(), f })
    }

    pub fn from_ints(field: &ExtField, f: &[i64]) -> Result<Self, CurveError> {
        let cs: Vec<FieldElem> = f.iter().map(|&c| field.from_int(c)).collect();
        HyperellipticCurve::new(field, &cs)
    }

    pub fn parse(field: &ExtField, f: &str) -> Result<Self, CurveError> {
        HyperellipticCurve::from_ints(field, &parse_int_poly(f)?)
    }

    pub fn field(&self) -> &ExtField {
        &self.field
    }

    pub fn f(&self) -> &Poly {
        &self.f
    }

    pub fn describe(&self) -> String {
        format!("y^2 = {} over F_{}^{}", self.f.format(&self.field), self.field.characteristic(), self.field.degree())
    }

    pub fn contains(&self, p: &Point) -> bool {
        match *p {
            Point::Infinity => true,
            Point::Affine { x, y } => self.field.mul(y, y) == self.f.eval(&self.field, x),
        }
    }

    /// Rational points, infinity first.
    pub fn points(&self) -> Result<Vec<Point>, CurveError> {
        self.points_bounded(DEFAULT_ENUMERATION_BOUND)
    }

    pub fn points_bounded(&self, bound: u64) -> Result<Vec<Point>, CurveError> {
        check_size(self.field.order() as u128, bound)?;
        Ok(affine_points(&self.field, |x| self.f.eval(&self.field, x)))
    }

    /// The hyperelliptic involution `(x, y) -> (x, -y)`.
    pub fn involution(&self, p: &Point) -> Point {
        match *p {
            Point::Infinity => Point::Infinity,
            Point::Affine { x, y } => Point::Affine { x, y: self.field.neg(y) },
        }
    }

    pub(crate) fn class_of_point_unchecked(&self, q: &Point) -> JacobianElement {
        match *q {
            Point::Infinity => JacobianElement::IDENTITY,
            Point::Affine { x, y } => {
                JacobianElement { u: Poly::linear_root(&self.field, x), v: Poly::constant(y) }
            }
        }
    }

    /// Mumford form of `[q - infinity]`.
    pub fn class_of_point(&self, q: &Point) -> Result<JacobianElement, CurveError> {
        if !self.contains(q) {
            return Err(CurveError::NotOnCurve);
        }
        Ok(self.class_of_point_unchecked(q))
    }

    /// Whether `d` is a reduced Mumford pair for this curve.
    pub fn is_element(&self, d: &JacobianElement) -> bool {
        let k = &self.field;
        let Some(du) = d.u.degree() else { return false };
        if du > 2 || d.u.lead() != FieldElem::ONE {
            return false;
        }
        if d.v.degree().is_some_and(|dv| dv >= du) {
            return false;
        }
        d.v.mul(k, &d.v).sub(k, &self.f).rem(k, &d.u).is_zero()
    }

    fn check(&self, d: &JacobianElement) -> Result<(), CurveError> {
        if self.is_element(d) {
            Ok(())
        } else {
            Err(CurveError::NotOnCurve)
        }
    }

    pub fn jac_neg(&self, d: &JacobianElement) -> JacobianElement {
        JacobianElement { u: d.u, v: d.v.neg(&self.field) }
    }

    pub(crate) fn add_unchecked(&self, a: &JacobianElement, b: &JacobianElement) -> JacobianElement {
        if a.is_identity() {
            return *b;
        }
        if b.is_identity() {
            return *a;
        }
        let k = &self.field;
        let (d1, e1, e2) = Poly::xgcd(k, &a.u, &b.u);
        let (u, v) = if d1.is_one() {
            let u = a.u.mul(k, &b.u);
            let v = e1.mul(k, &a.u).mul(k, &b.v).add(k, &e2.mul(k, &b.u).mul(k, &a.v));
            (u, v.rem(k, &u))
        } else {
            let (d, c1, c2) = Poly::xgcd(k, &d1, &a.v.add(k, &b.v));
            let (s1, s2, s3) = (c1.mul(k, &e1), c1.mul(k, &e2), c2);
            let u = a.u.mul(k, &b.u).div_exact(k, &d.mul(k, &d));
            let num = s1
                .mul(k, &a.u)
                .mul(k, &b.v)
                .add(k, &s2.mul(k, &b.u).mul(k, &a.v))
                .add(k, &s3.mul(k, &a.v.mul(k, &b.v).add(k, &self.f)));
            let v = num.div_exact(k, &d);
            (u, if u.is_one() { Poly::ZERO } else { v.rem(k, &u) })
        };
        
        self.reduce(u, v)
    }

    /// `a + [p - ∞]` without the gcd: interpolate `v` through `p`, then
    /// reduce once. Falls back to Cantor when `p` meets the support of `a`.
    pub(crate) fn add_point_unchecked(&self, a: &JacobianElement, p: &Point) -> JacobianElement {
        let k = &self.field;
        let Point::Affine { x, y } = *p else { return *a };
        let ux = a.u.eval(k, x);
        if ux.is_zero() {
            return self.add_unchecked(a, &self.class_of_point_unchecked(p));
        }
        let c = k.div(k.sub(y, a.v.eval(k, x)), ux);
        let u = a.u.mul(k, &Poly::linear_root(k, x));
        let v = a.v.add(k, &a.u.scale(k, c));
        self.reduce(u, v)
    }

    fn reduce(&self, mut u: Poly, mut v: Poly) -> JacobianElement {
        let k = &self.field;
        while u.deg0() > 2 {
            let u2 = self.f.sub(k, &v.mul(k, &v)).div_exact(k, &u);
            v = v.neg(k).rem(k, &u2);
            u = u2;
        }
        let u = u.monic(k);
        let v = if u.is_one() { Poly::ZERO } else { v.rem(k, &u) };
        JacobianElement { u, v }
    }

    /// Sum of two classes by Cantor composition and reduction.
    pub fn jac_add(&self, a: &JacobianElement, b: &JacobianElement) -> Result<JacobianElement, CurveError> {
        self.check(a)?;
        self.check(b)?;
        Ok(self.add_unchecked(a, b))
    }

    pub(crate) fn mul_unchecked(&self, d: i64, a: &JacobianElement) -> JacobianElement {
        let base = if d < 0 { self.jac_neg(a) } else { *a };
        let mut e = d.unsigned_abs();
        let mut acc = JacobianElement::IDENTITY;
        let mut run = base;
        while e > 0 {
            if e & 1 == 1 {
                acc = self.add_unchecked(&acc, &run);
            }
            e >>= 1;
            if e > 0 {
                run = self.add_unchecked(&run, &run);
            }
        }
        acc
    }

    pub fn jac_mul(&self, d: i64, a: &JacobianElement) -> Result<JacobianElement, CurveError> {
        self.check(a)?;
        Ok(self.mul_unchecked(d, a))
    }

    /// Every reduced Mumford pair, by exhaustive search; `q^4` candidates.
    pub fn jac_enumerate(&self, bound: u64) -> Result<Vec<JacobianElement>, CurveError> {
        let k = &self.field;
        let q = k.order() as u128;
        check_size(q.pow(4), bound)?;
        let elems: Vec<FieldElem> = k.elements().collect();
        let mut out = vec![JacobianElement::IDENTITY];
        for &a in &elems {
            let u = Poly::linear_root(k, a);
            for &b in &elems {
                let d = JacobianElement { u, v: Poly::constant(b) };
                if self.is_element(&d) {
                    out.push(d);
                }
            }
        }
        for &c1 in &elems {
            for &c0 in &elems {
                let u = Poly::from_coeffs(&[c0, c1, FieldElem::ONE]);
                for &v1 in &elems {
                    for &v0 in &elems {
                        let d = JacobianElement { u, v: Poly::from_coeffs(&[v0, v1]) };
                        if self.is_element(&d) {
                            out.push(d);
                        }
                    }
                }
            }
        }
        Ok(out)
    }

    /// The same curve over an extension, with the embedding used.
    pub fn base_change(&self, target: &ExtField) -> Result<(HyperellipticCurve, Embedding), CurveError> {
        let e = self.field.embedding_into(target)?;
        let curve = HyperellipticCurve::new(target, self.f.map(&e).coeffs())?;
        Ok((curve, e))
    }
}
