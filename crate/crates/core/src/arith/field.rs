// SPDX-License-Identifier: Apache-2.0

//! Finite fields `F_{p^k}` with Zech-logarithm tables.
//!
//! Every nonzero element is stored as its discrete logarithm with respect to
//! a fixed primitive element, so multiplication is an index addition and
//! addition goes through the Zech table `Z(n) = log(1 + g^n)`. Fields are
//! interned per `(p, k)`: asking twice for the same field returns the same
//! tables.

use std::collections::HashMap;
use std::fmt;
use std::sync::{Arc, Mutex, OnceLock};

use super::prime::{prime_divisors, PrimeField};
use super::ArithError;

/// Largest field order accepted by default (`2^26`).
pub const DEFAULT_ENUMERATION_BOUND: u64 = 1 << 26;

const ZERO_LOG: u32 = u32::MAX;

/// An element of some [`ExtField`]. The value is only meaningful together
/// with the field that produced it.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct FieldElem(u32);

/// `x mod n` for `x < 2n`; logs stay below `2^26`, so sums never overflow.
#[inline]
fn wrap(x: u32, n: u32) -> u32 {
    if x >= n {
        x - n
    } else {
        x
    }
}

impl FieldElem {
    pub const ZERO: FieldElem = FieldElem(ZERO_LOG);
    pub const ONE: FieldElem = FieldElem(0);

    pub fn is_zero(self) -> bool {
        self.0 == ZERO_LOG
    }

    /// Dense index in `0..order`: 0 for zero, one plus the discrete log
    /// otherwise. Field-independent, so only comparable within one field.
    pub fn index(self) -> u32 {
        self.0.wrapping_add(1)
    }
}

impl fmt::Debug for FieldElem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            write!(f, "0")
        } else {
            write!(f, "g^{}", self.0)
        }
    }
}

struct FieldData {
    prime: PrimeField,
    degree: u32,
    order: u32,
    /// Monic modulus, coefficients from `x^0` up to `x^k`.
    modulus: Vec<u32>,
    /// Encoded generator (base-`p` digits are polynomial coefficients).
    generator: u32,
    exp: Vec<u32>,
    log: Vec<u32>,
    zech: Vec<u32>,
}

/// The finite field `F_{p^k}`, cheap to clone.
#[derive(Clone)]
pub struct ExtField(Arc<FieldData>);

impl PartialEq for ExtField {
    fn eq(&self, other: &Self) -> bool {
        Arc::ptr_eq(&self.0, &other.0)
            || (self.characteristic() == other.characteristic() && self.degree() == other.degree())
    }
}

impl Eq for ExtField {}

impl fmt::Debug for ExtField {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "F_{}^{} mod {}", self.characteristic(), self.degree(), self.modulus_string())
    }
}

fn cache() -> &'static Mutex<HashMap<(u32, u32), ExtField>> {
    static CACHE: OnceLock<Mutex<HashMap<(u32, u32), ExtField>>> = OnceLock::new();
    CACHE.get_or_init(|| Mutex::new(HashMap::new()))
}

/// Builds (or fetches) `F_{p^k}` with the default size bound.
pub fn make_ext_field(p: u32, k: u32) -> Result<ExtField, ArithError> {
    make_ext_field_bounded(p, k, DEFAULT_ENUMERATION_BOUND)
}

/// Builds (or fetches) `F_{p^k}`, rejecting fields with more than `bound`
/// elements.
///
/// The modulus is the smallest monic irreducible polynomial of degree `k`
/// when coefficient vectors `(a_{k-1}, ..., a_0)` are compared
/// lexicographically.
pub fn make_ext_field_bounded(p: u32, k: u32, bound: u64) -> Result<ExtField, ArithError> {
    let prime = PrimeField::new(p)?;
    if k == 0 {
        return Err(ArithError::ZeroDegree);
    }
    let order = (p as u128).pow(k);
    if order > bound as u128 || order >= u32::MAX as u128 {
        return Err(ArithError::TooLarge { order, bound });
    }
    if let Some(f) = cache().lock().expect("field cache poisoned").get(&(p, k)) {
        return Ok(f.clone());
    }
    let field = ExtField(Arc::new(build_tables(prime, k, order as u32)?));
    let mut guard = cache().lock().expect("field cache poisoned");
    Ok(guard.entry((p, k)).or_insert(field).clone())
}

fn build_tables(prime: PrimeField, k: u32, order: u32) -> Result<FieldData, ArithError> {
    let p = prime.characteristic();
    let modulus = smallest_irreducible(prime, k as usize)
        .ok_or_else(|| ArithError::Internal(format!("no irreducible of degree {k} over F_{p}")))?;
    let ring = PolyRing { prime, modulus: &modulus };
    let group = (order - 1) as u64;
    let factors = prime_divisors(group);
    let one = ring.encode(&ring.one());
    let generator = (1..order)
        .find(|&e| {
            let a = ring.decode(e);
            factors.iter().all(|r| ring.encode(&ring.pow(&a, group / r)) != one)
        })
        .ok_or_else(|| ArithError::Internal("no primitive element".into()))?;

    let gen = ring.decode(generator);
    let mut exp = Vec::with_capacity(group as usize);
    let mut log = vec![ZERO_LOG; order as usize];
    let mut cur = ring.one();
    for i in 0..group as u32 {
        let e = ring.encode(&cur);
        exp.push(e);
        log[e as usize] = i;
        cur = ring.mul(&cur, &gen);
    }
    if ring.encode(&cur) != one {
        return Err(ArithError::Internal("generator order mismatch".into()));
    }
    let zech = exp
        .iter()
        .map(|&e| {
            let d0 = e % p;
            let shifted = e - d0 + (d0 + 1) % p;
            if shifted == 0 {
                ZERO_LOG
            } else {
                log[shifted as usize]
            }
        })
        .collect();
    Ok(FieldData { prime, degree: k, order, modulus, generator, exp, log, zech })
}

/// Dense polynomial arithmetic modulo a fixed monic polynomial over `F_p`,
/// used only while building tables.
struct PolyRing<'a> {
    prime: PrimeField,
    modulus: &'a [u32],
}

impl PolyRing<'_> {
    fn k(&self) -> usize {
        self.modulus.len() - 1
    }

    fn one(&self) -> Vec<u32> {
        let mut v = vec![0; self.k()];
        v[0] = 1 % self.prime.characteristic();
        v
    }

    fn decode(&self, mut e: u32) -> Vec<u32> {
        let p = self.prime.characteristic();
        (0..self.k())
            .map(|_| {
                let d = e % p;
                e /= p;
                d
            })
            .collect()
    }

    fn encode(&self, v: &[u32]) -> u32 {
        let p = self.prime.characteristic();
        v.iter().rev().fold(0u32, |acc, &d| acc * p + d)
    }

    fn mul(&self, a: &[u32], b: &[u32]) -> Vec<u32> {
        let f = &self.prime;
        let k = self.k();
        let mut prod = vec![0u32; 2 * k];
        for (i, &x) in a.iter().enumerate() {
            if x == 0 {
                continue;
            }
            for (j, &y) in b.iter().enumerate() {
                prod[i + j] = f.add(prod[i + j], f.mul(x, y));
            }
        }
        for deg in (k..2 * k).rev() {
            let c = prod[deg];
            if c == 0 {
                continue;
            }
            prod[deg] = 0;
            for (i, &m) in self.modulus[..k].iter().enumerate() {
                let t = deg - k + i;
                prod[t] = f.sub(prod[t], f.mul(c, m));
            }
        }
        prod.truncate(k);
        prod
    }

    fn pow(&self, a: &[u32], mut e: u64) -> Vec<u32> {
        let mut base = a.to_vec();
        let mut acc = self.one();
        while e > 0 {
            if e & 1 == 1 {
                acc = self.mul(&acc, &base);
            }
            base = self.mul(&base, &base);
            e >>= 1;
        }
        acc
    }
}

fn trim(v: &mut Vec<u32>) {
    while v.last() == Some(&0) {
        v.pop();
    }
}

fn poly_rem(f: &PrimeField, a: &[u32], m: &[u32]) -> Vec<u32> {
    let mut r = a.to_vec();
    trim(&mut r);
    let dm = m.len() - 1;
    let lead_inv = f.inv(m[dm]).expect("nonzero leading coefficient");
    while r.len() > dm {
        let dr = r.len() - 1;
        let c = f.mul(r[dr], lead_inv);
        for (i, &mi) in m.iter().enumerate() {
            let t = dr - dm + i;
            r[t] = f.sub(r[t], f.mul(c, mi));
        }
        trim(&mut r);
    }
    r
}

fn poly_gcd(f: &PrimeField, a: &[u32], b: &[u32]) -> Vec<u32> {
    let mut a = a.to_vec();
    let mut b = b.to_vec();
    trim(&mut a);
    trim(&mut b);
    while !b.is_empty() {
        let r = poly_rem(f, &a, &b);
        a = b;
        b = r;
    }
    a
}

/// `x^(p^e) mod m`, as a trimmed coefficient vector.
fn frobenius_power_of_x(f: &PrimeField, m: &[u32], e: u32) -> Vec<u32> {
    let k = m.len() - 1;
    let ring = PolyRing { prime: *f, modulus: m };
    let mut x = vec![0u32; k.max(1)];
    if k == 1 {
        x[0] = poly_rem(f, &[0, 1], m).first().copied().unwrap_or(0);
    } else {
        x[1] = 1;
    }
    for _ in 0..e {
        x = ring.pow(&x, f.characteristic() as u64);
    }
    trim(&mut x);
    x
}

/// Rabin's irreducibility test.
fn is_irreducible(f: &PrimeField, m: &[u32]) -> bool {
    let k = (m.len() - 1) as u32;
    if k == 1 {
        return true;
    }
    let x_minus = |mut v: Vec<u32>| {
        v.resize(v.len().max(2), 0);
        v[1] = f.sub(v[1], 1);
        trim(&mut v);
        v
    };
    if !x_minus(frobenius_power_of_x(f, m, k)).is_empty() {
        return false;
    }
    prime_divisors(k as u64).into_iter().all(|r| {
        let h = x_minus(frobenius_power_of_x(f, m, k / r as u32));
        poly_gcd(f, m, &h).len() == 1
    })
}

fn smallest_irreducible(f: PrimeField, k: usize) -> Option<Vec<u32>> {
    let p = f.characteristic() as u64;
    let count = p.checked_pow(k as u32)?;
    (0..count).find_map(|c| {
        let mut m = Vec::with_capacity(k + 1);
        let mut c = c;
        for _ in 0..k {
            m.push((c % p) as u32);
            c /= p;
        }
        m.push(1);
        is_irreducible(&f, &m).then_some(m)
    })
}

impl ExtField {
    pub fn characteristic(&self) -> u32 {
        self.0.prime.characteristic()
    }

    pub fn prime_field(&self) -> PrimeField {
        self.0.prime
    }

    pub fn degree(&self) -> u32 {
        self.0.degree
    }

    /// Number of elements `p^k`.
    pub fn order(&self) -> u32 {
        self.0.order
    }

    /// Monic modulus coefficients, constant term first.
    pub fn modulus(&self) -> &[u32] {
        &self.0.modulus
    }

    pub fn modulus_string(&self) -> String {
        poly_to_string(&self.0.modulus, "x")
    }

    /// The primitive element used for logarithms.
    pub fn generator(&self) -> FieldElem {
        self.from_encoded(self.0.generator)
    }

    pub fn zero(&self) -> FieldElem {
        FieldElem::ZERO
    }

    pub fn one(&self) -> FieldElem {
        FieldElem::ONE
    }

    /// Image of an integer in the prime subfield.
    pub fn from_int(&self, n: i64) -> FieldElem {
        self.from_encoded(self.0.prime.reduce(n))
    }

    /// Element with the given polynomial coefficients (constant term first)
    /// with respect to the field's modulus.
    pub fn from_coeffs(&self, coeffs: &[i64]) -> FieldElem {
        let x = self.x();
        coeffs
            .iter()
            .rev()
            .fold(self.zero(), |acc, &c| self.add(self.mul(acc, x), self.from_int(c)))
    }

    /// The class of `x` modulo the field's modulus.
    pub fn x(&self) -> FieldElem {
        if self.degree() == 1 {
            self.neg(self.from_int(self.0.modulus[0] as i64))
        } else {
            self.from_encoded(self.characteristic())
        }
    }

    /// Coefficient vector of length `k`, constant term first.
    pub fn coeffs(&self, a: FieldElem) -> Vec<u32> {
        let p = self.characteristic();
        let mut e = self.encode(a);
        (0..self.degree())
            .map(|_| {
                let d = e % p;
                e /= p;
                d
            })
            .collect()
    }

    /// Integer code `sum c_i p^i` of the coefficient vector.
    pub fn encode(&self, a: FieldElem) -> u32 {
        if a.is_zero() {
            0
        } else {
            self.0.exp[a.0 as usize]
        }
    }

    /// Inverse of [`ExtField::encode`]. Codes are reduced modulo the order.
    pub fn from_encoded(&self, e: u32) -> FieldElem {
        FieldElem(self.0.log[(e % self.0.order) as usize])
    }

    /// All elements in increasing code order.
    pub fn elements(&self) -> impl Iterator<Item = FieldElem> + '_ {
        (0..self.order()).map(move |e| self.from_encoded(e))
    }

    pub fn is_in_prime_subfield(&self, a: FieldElem) -> bool {
        self.encode(a) < self.characteristic()
    }

    /// The integer in `[0, p)` representing a prime-subfield element.
    pub fn prime_value(&self, a: FieldElem) -> Option<u32> {
        let e = self.encode(a);
        (e < self.characteristic()).then_some(e)
    }

    fn group(&self) -> u32 {
        self.0.order - 1
    }

    #[inline]
    pub fn mul(&self, a: FieldElem, b: FieldElem) -> FieldElem {
        if a.is_zero() || b.is_zero() {
            return FieldElem::ZERO;
        }
        FieldElem(wrap(a.0 + b.0, self.group()))
    }

    #[inline]
    pub fn add(&self, a: FieldElem, b: FieldElem) -> FieldElem {
        if a.is_zero() {
            return b;
        }
        if b.is_zero() {
            return a;
        }
        let n = self.group();
        let diff = if b.0 >= a.0 { b.0 - a.0 } else { b.0 + n - a.0 };
        let z = self.0.zech[diff as usize];
        if z == ZERO_LOG {
            return FieldElem::ZERO;
        }
        FieldElem(wrap(a.0 + z, n))
    }

    #[inline]
    pub fn neg(&self, a: FieldElem) -> FieldElem {
        if a.is_zero() || self.characteristic() == 2 {
            return a;
        }
        let n = self.group();
        FieldElem(wrap(a.0 + n / 2, n))
    }

    #[inline]
    pub fn sub(&self, a: FieldElem, b: FieldElem) -> FieldElem {
        self.add(a, self.neg(b))
    }

    /// Multiplicative inverse; `None` for zero.
    #[inline]
    pub fn inv(&self, a: FieldElem) -> Option<FieldElem> {
        if a.is_zero() {
            return None;
        }
        let n = self.group();
        Some(FieldElem(if a.0 == 0 { 0 } else { n - a.0 }))
    }

    /// `a / b`; panics on division by zero.
    #[inline]
    pub fn div(&self, a: FieldElem, b: FieldElem) -> FieldElem {
        self.mul(a, self.inv(b).expect("division by zero in finite field"))
    }

    pub fn pow(&self, a: FieldElem, e: u64) -> FieldElem {
        if e == 0 {
            return FieldElem::ONE;
        }
        if a.is_zero() {
            return FieldElem::ZERO;
        }
        let n = self.group() as u128;
        FieldElem(((a.0 as u128 * e as u128) % n) as u32)
    }

    pub fn is_square(&self, a: FieldElem) -> bool {
        a.is_zero() || self.characteristic() == 2 || a.0.is_multiple_of(2)
    }

    /// A square root of `a` if one exists; the other root is its negative.
    pub fn sqrt(&self, a: FieldElem) -> Option<FieldElem> {
        if a.is_zero() {
            return Some(a);
        }
        if self.characteristic() == 2 {
            // squaring is a bijection; invert it on the exponent
            let n = self.group() as u64;
            let half = n.div_ceil(2);
            return Some(FieldElem(((a.0 as u64 * half) % n) as u32));
        }
        a.0.is_multiple_of(2).then_some(FieldElem(a.0 / 2))
    }

    /// Human-readable element, as an integer in the prime field or as a
    /// polynomial in the generator `x` of the modulus otherwise.
    pub fn format(&self, a: FieldElem) -> String {
        if self.degree() == 1 {
            return self.encode(a).to_string();
        }
        let c = self.coeffs(a);
        if c.iter().all(|&d| d == 0) {
            "0".into()
        } else {
            poly_to_string(&c, "x")
        }
    }

    /// The embedding of `self` into `target`, which must be an extension of
    /// the same prime field with degree divisible by `self.degree()`.
    ///
    /// The image of `x` is the root of `self.modulus()` in `target` with the
    /// smallest code.
    pub fn embedding_into(&self, target: &ExtField) -> Result<Embedding, ArithError> {
        if self.characteristic() != target.characteristic() {
            return Err(ArithError::CharacteristicMismatch(
                self.characteristic(),
                target.characteristic(),
            ));
        }
        if !target.degree().is_multiple_of(self.degree()) {
            return Err(ArithError::NoEmbedding { from: self.degree(), into: target.degree() });
        }
        let image_of_x = if self.degree() == 1 {
            target.zero()
        } else {
            let m: Vec<FieldElem> =
                self.modulus().iter().map(|&c| target.from_int(c as i64)).collect();
            target
                .elements()
                .find(|&r| {
                    m.iter().rev().fold(target.zero(), |acc, &c| target.add(target.mul(acc, r), c))
                        .is_zero()
                })
                .ok_or_else(|| ArithError::Internal("modulus has no root in extension".into()))?
        };
        Ok(Embedding { source: self.clone(), target: target.clone(), image_of_x })
    }
}

/// A field homomorphism `F_{p^a} -> F_{p^b}`.
#[derive(Clone, Debug)]
pub struct Embedding {
    source: ExtField,
    target: ExtField,
    image_of_x: FieldElem,
}

impl Embedding {
    pub fn source(&self) -> &ExtField {
        &self.source
    }

    pub fn target(&self) -> &ExtField {
        &self.target
    }

    pub fn map(&self, a: FieldElem) -> FieldElem {
        let t = &self.target;
        if self.source.degree() == 1 {
            return t.from_int(self.source.encode(a) as i64);
        }
        self.source
            .coeffs(a)
            .iter()
            .rev()
            .fold(t.zero(), |acc, &c| t.add(t.mul(acc, self.image_of_x), t.from_int(c as i64)))
    }
}

fn poly_to_string(coeffs: &[u32], var: &str) -> String {
    let mut terms = Vec::new();
    for (i, &c) in coeffs.iter().enumerate().rev() {
        if c == 0 {
            continue;
        }
        let mono = match i {
            0 => String::new(),
            1 => var.to_string(),
            _ => format!("{var}^{i}"),
        };
        terms.push(match (c, i) {
            (_, 0) => c.to_string(),
            (1, _) => mono,
            _ => format!("{c}*{mono}"),
        });
    }
    if terms.is_empty() {
        "0".into()
    } else {
        terms.join("+")
    }
}
