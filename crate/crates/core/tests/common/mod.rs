// SPDX-License-Identifier: Apache-2.0

//! Test-side oracles. Nothing here calls into the library's arithmetic:
//! fields use a polynomial basis, curves use affine formulas, ranks are
//! taken modulo a large prime, and cycle detection is a transitive closure.

#![allow(dead_code, clippy::needless_range_loop)]

use std::collections::HashMap;

use num_bigint::BigInt;
use num_traits::{ToPrimitive, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use effcone::arith::Rational;
use effcone::twisted::{Edge, TwistedDualGraph, Vertex};

// ---------------------------------------------------------------------------
// F_{p^k} in a polynomial basis

/// Elements are base-`p` digit codes of their coefficient vectors.
#[derive(Debug, Clone)]
pub struct PolyField {
    pub p: u64,
    pub k: usize,
    /// Monic irreducible modulus, low degree first, without the leading 1.
    modulus: Vec<u64>,
    squares: HashMap<u64, u64>,
}

fn is_irreducible(p: u64, m: &[u64]) -> bool {
    // trial division by every monic polynomial of degree 1..=deg/2
    let deg = m.len() - 1;
    for d in 1..=deg / 2 {
        for code in 0..p.pow(d as u32) {
            let mut div: Vec<u64> = (0..d).map(|i| code / p.pow(i as u32) % p).collect();
            div.push(1);
            let mut r = m.to_vec();
            while r.len() > d {
                let lead = *r.last().unwrap();
                let shift = r.len() - 1 - d;
                for (i, c) in div.iter().enumerate() {
                    r[shift + i] = (r[shift + i] + p * p - lead * c % p) % p;
                }
                r.pop();
            }
            if r.iter().all(|&c| c == 0) {
                return false;
            }
        }
    }
    true
}

impl PolyField {
    pub fn new(p: u64, k: usize) -> Self {
        let modulus = (0..p.pow(k as u32))
            .map(|code| (0..k).map(|i| code / p.pow(i as u32) % p).collect::<Vec<u64>>())
            .find(|low| {
                let mut m = low.clone();
                m.push(1);
                is_irreducible(p, &m)
            })
            .expect("an irreducible polynomial exists");
        Self::with_modulus(p, modulus)
    }

    /// Field with a given monic modulus, low degree first, leading 1 omitted.
    pub fn with_modulus(p: u64, modulus: Vec<u64>) -> Self {
        let k = modulus.len();
        let mut full = modulus.clone();
        full.push(1);
        assert!(is_irreducible(p, &full), "reducible modulus");
        let mut f = PolyField { p, k, modulus, squares: HashMap::new() };
        for a in f.elements() {
            f.squares.entry(f.mul(a, a)).or_insert(a);
        }
        f
    }

    pub fn order(&self) -> u64 {
        self.p.pow(self.k as u32)
    }

    pub fn elements(&self) -> impl Iterator<Item = u64> {
        0..self.order()
    }

    fn digits(&self, a: u64) -> Vec<u64> {
        (0..self.k).map(|i| a / self.p.pow(i as u32) % self.p).collect()
    }

    fn code(&self, d: &[u64]) -> u64 {
        d.iter().rev().fold(0, |acc, &c| acc * self.p + c)
    }

    pub fn elem(&self, n: i64) -> u64 {
        n.rem_euclid(self.p as i64) as u64
    }

    pub fn add(&self, a: u64, b: u64) -> u64 {
        let (x, y) = (self.digits(a), self.digits(b));
        self.code(&x.iter().zip(&y).map(|(u, v)| (u + v) % self.p).collect::<Vec<_>>())
    }

    pub fn neg(&self, a: u64) -> u64 {
        self.code(&self.digits(a).iter().map(|&u| (self.p - u) % self.p).collect::<Vec<_>>())
    }

    pub fn sub(&self, a: u64, b: u64) -> u64 {
        self.add(a, self.neg(b))
    }

    pub fn mul(&self, a: u64, b: u64) -> u64 {
        let (x, y) = (self.digits(a), self.digits(b));
        let p = self.p;
        let mut prod = vec![0u64; 2 * self.k];
        for (i, u) in x.iter().enumerate() {
            for (j, v) in y.iter().enumerate() {
                prod[i + j] = (prod[i + j] + u * v) % p;
            }
        }
        for top in (self.k..2 * self.k).rev() {
            let c = prod[top];
            if c != 0 {
                // x^k = -(low part of the modulus)
                for (i, m) in self.modulus.iter().enumerate() {
                    let t = top - self.k + i;
                    prod[t] = (prod[t] + p * p - c * m % p) % p;
                }
            }
        }
        self.code(&prod[..self.k])
    }

    pub fn pow(&self, mut a: u64, mut e: u64) -> u64 {
        let mut r = 1;
        while e > 0 {
            if e & 1 == 1 {
                r = self.mul(r, a);
            }
            a = self.mul(a, a);
            e >>= 1;
        }
        r
    }

    pub fn inv(&self, a: u64) -> u64 {
        assert_ne!(a, 0, "inverse of zero");
        self.pow(a, self.order() - 2)
    }

    pub fn sqrt(&self, a: u64) -> Option<u64> {
        self.squares.get(&a).copied()
    }

    /// Horner evaluation of integer coefficients, low degree first.
    pub fn eval(&self, coeffs: &[i64], x: u64) -> u64 {
        coeffs.iter().rev().fold(0, |acc, &c| self.add(self.mul(acc, x), self.elem(c)))
    }
}

// ---------------------------------------------------------------------------
// curves

/// `#{y^2 = f(x)}` over the field, plus the single point at infinity of an
/// odd-degree model.
pub fn odd_hyperelliptic_count(k: &PolyField, f: &[i64]) -> u64 {
    1 + k
        .elements()
        .map(|x| match k.eval(f, x) {
            0 => 1,
            v if k.sqrt(v).is_some() => 2,
            _ => 0,
        })
        .sum::<u64>()
}

/// Genus-2 counts for `k = 1..=kmax` from the counts over `F_q` and
/// `F_{q^2}` via the zeta function.
pub fn genus2_counts_from_zeta(q: i64, n1: i64, n2: i64, kmax: usize) -> Vec<i64> {
    let s1 = q + 1 - n1;
    let s2 = q * q + 1 - n2;
    let e = [1, s1, (s1 * s1 - s2) / 2, q * s1, q * q];
    let mut s = vec![4i64, s1, s2];
    for k in 3..=kmax {
        // Newton: s_k = Σ_{i=1}^{min(k,4)} (-1)^{i-1} e_i s_{k-i}, plus k e_k when k <= 4
        let mut v = 0;
        for i in 1..=k.min(4) {
            let term = if i == k { k as i64 * e[i] } else { e[i] * s[k - i] };
            v += if i % 2 == 1 { term } else { -term };
        }
        s.push(v);
    }
    (1..=kmax).map(|k| q.pow(k as u32) + 1 - s[k]).collect()
}

/// `y^2 = x^3 + a x + b` with affine formulas.
#[derive(Debug, Clone)]
pub struct OracleCurve {
    pub k: PolyField,
    pub a: u64,
    pub b: u64,
}

pub type Pt = Option<(u64, u64)>;

impl OracleCurve {
    pub fn new(k: PolyField, a: i64, b: i64) -> Self {
        let (a, b) = (k.elem(a), k.elem(b));
        OracleCurve { k, a, b }
    }

    pub fn points(&self) -> Vec<Pt> {
        let k = &self.k;
        let mut out = vec![None];
        for x in k.elements() {
            let r = k.add(k.add(k.mul(k.mul(x, x), x), k.mul(self.a, x)), self.b);
            if let Some(y) = k.sqrt(r) {
                out.push(Some((x, y)));
                if y != 0 {
                    out.push(Some((x, k.neg(y))));
                }
            }
        }
        out
    }

    pub fn neg(&self, p: Pt) -> Pt {
        p.map(|(x, y)| (x, self.k.neg(y)))
    }

    pub fn add(&self, p: Pt, q: Pt) -> Pt {
        let k = &self.k;
        let ((x1, y1), (x2, y2)) = match (p, q) {
            (None, _) => return q,
            (_, None) => return p,
            (Some(a), Some(b)) => (a, b),
        };
        let lambda = if x1 == x2 {
            if k.add(y1, y2) == 0 {
                return None;
            }
            let num = k.add(k.mul(k.elem(3), k.mul(x1, x1)), self.a);
            k.mul(num, k.inv(k.mul(k.elem(2), y1)))
        } else {
            k.mul(k.sub(y2, y1), k.inv(k.sub(x2, x1)))
        };
        let x3 = k.sub(k.sub(k.mul(lambda, lambda), x1), x2);
        let y3 = k.sub(k.mul(lambda, k.sub(x1, x3)), y1);
        Some((x3, y3))
    }

    pub fn mul(&self, d: i64, p: Pt) -> Pt {
        let mut acc = None;
        for _ in 0..d.unsigned_abs() {
            acc = self.add(acc, p);
        }
        if d < 0 {
            self.neg(acc)
        } else {
            acc
        }
    }

    pub fn weighted_sum(&self, ks: &[i64], pts: &[Pt]) -> Pt {
        ks.iter().zip(pts).fold(None, |acc, (&k, &p)| self.add(acc, self.mul(k, p)))
    }

    pub fn torsion(&self, d: i64) -> usize {
        self.points().into_iter().filter(|&p| self.mul(d, p).is_none()).count()
    }
}

/// Tuples of pairwise distinct points satisfying every condition of
/// `X(d^1..d^m)`, by scanning all `n`-tuples. The group law is tabulated
/// once from the affine formulas.
pub fn brute_force_count_x(e: &OracleCurve, sigs: &[Vec<i64>]) -> u64 {
    let pts = e.points();
    let np = pts.len();
    let index: HashMap<Pt, usize> = pts.iter().enumerate().map(|(i, &p)| (p, i)).collect();
    let add: Vec<Vec<usize>> =
        pts.iter().map(|&p| pts.iter().map(|&q| index[&e.add(p, q)]).collect()).collect();
    let zero = index[&None];
    let times = |k: i64, i: usize| {
        let mut acc = zero;
        for _ in 0..k.unsigned_abs() {
            acc = add[acc][i];
        }
        if k < 0 {
            index[&e.neg(pts[acc])]
        } else {
            acc
        }
    };
    let m = sigs.len();
    let free = sigs[0].len() - 1;
    let n = free + m;
    let mut count = 0;
    let mut idx = vec![0usize; n];
    'outer: loop {
        let distinct = (0..n).all(|i| (0..i).all(|j| idx[i] != idx[j]));
        if distinct
            && sigs.iter().enumerate().all(|(j, s)| {
                let mut slots: Vec<usize> = idx[..free].to_vec();
                slots.push(idx[free + j]);
                s.iter().zip(&slots).fold(zero, |acc, (&k, &i)| add[acc][times(k, i)]) == zero
            })
        {
            count += 1;
        }
        for slot in (0..n).rev() {
            idx[slot] += 1;
            if idx[slot] < np {
                continue 'outer;
            }
            idx[slot] = 0;
        }
        break;
    }
    count
}

// ---------------------------------------------------------------------------
// linear algebra

pub const RANK_PRIME: u64 = (1 << 61) - 1;

fn mod_p(x: &BigInt, p: u64) -> u64 {
    let r = x % BigInt::from(p);
    let r = if r < BigInt::zero() { r + BigInt::from(p) } else { r };
    r.to_u64().unwrap()
}

fn mulmod(a: u64, b: u64, p: u64) -> u64 {
    (a as u128 * b as u128 % p as u128) as u64
}

fn powmod(mut a: u64, mut e: u64, p: u64) -> u64 {
    let mut r = 1;
    while e > 0 {
        if e & 1 == 1 {
            r = mulmod(r, a, p);
        }
        a = mulmod(a, a, p);
        e >>= 1;
    }
    r
}

/// Rank over `F_p`, a lower bound for the rank over `Q`.
pub fn rank_mod_p(rows: &[Vec<Rational>], p: u64) -> usize {
    let mut m: Vec<Vec<u64>> = rows
        .iter()
        .map(|r| {
            r.iter()
                .map(|x| {
                    let d = mod_p(x.denom(), p);
                    assert_ne!(d, 0, "denominator divisible by the rank prime");
                    mulmod(mod_p(x.numer(), p), powmod(d, p - 2, p), p)
                })
                .collect()
        })
        .collect();
    let ncols = m.first().map_or(0, Vec::len);
    let mut rank = 0;
    for c in 0..ncols {
        let Some(piv) = (rank..m.len()).find(|&r| m[r][c] != 0) else { continue };
        m.swap(rank, piv);
        let inv = powmod(m[rank][c], p - 2, p);
        for r in 0..m.len() {
            if r != rank && m[r][c] != 0 {
                let f = mulmod(m[r][c], inv, p);
                for j in c..ncols {
                    let sub = mulmod(f, m[rank][j], p);
                    m[r][j] = (m[r][j] + p - sub) % p;
                }
            }
        }
        rank += 1;
    }
    rank
}

pub fn annihilates(rows: &[Vec<Rational>], v: &[Rational]) -> bool {
    rows.iter().all(|r| r.iter().zip(v).map(|(a, b)| a * b).sum::<Rational>().is_zero())
}

// ---------------------------------------------------------------------------
// graphs

/// `reach[a][b]`: a chain `a ⪰ ... ⪰ b` of length at least one.
pub fn reachability(g: &TwistedDualGraph) -> Vec<Vec<bool>> {
    let n = g.vertices.len();
    let mut reach = vec![vec![false; n]; n];
    for e in &g.edges {
        if e.ord_u >= e.ord_v {
            reach[e.u][e.v] = true;
        }
        if e.ord_v >= e.ord_u {
            reach[e.v][e.u] = true;
        }
    }
    for k in 0..n {
        for i in 0..n {
            if reach[i][k] {
                for j in 0..n {
                    if reach[k][j] {
                        reach[i][j] = true;
                    }
                }
            }
        }
    }
    reach
}

pub fn oracle_has_strict_cycle(g: &TwistedDualGraph) -> bool {
    let reach = reachability(g);
    g.edges.iter().any(|e| match e.ord_u.cmp(&e.ord_v) {
        std::cmp::Ordering::Greater => e.u == e.v || reach[e.v][e.u],
        std::cmp::Ordering::Less => e.u == e.v || reach[e.u][e.v],
        std::cmp::Ordering::Equal => false,
    })
}

/// Whether consecutive witness vertices (cyclically) are joined by `⪰`
/// edges with at least one strict step.
pub fn is_strict_cycle(g: &TwistedDualGraph, cycle: &[usize]) -> bool {
    if cycle.is_empty() {
        return false;
    }
    let mut strict = false;
    for i in 0..cycle.len() {
        let (a, b) = (cycle[i], cycle[(i + 1) % cycle.len()]);
        let mut step = None;
        for e in &g.edges {
            let (oa, ob) = if (e.u, e.v) == (a, b) {
                (e.ord_u, e.ord_v)
            } else if (e.v, e.u) == (a, b) {
                (e.ord_v, e.ord_u)
            } else {
                continue;
            };
            if oa > ob {
                step = Some(true);
                break;
            }
            if oa == ob {
                step = step.or(Some(false));
            }
        }
        match step {
            Some(s) => strict |= s,
            None => return false,
        }
    }
    strict
}

pub fn levels_respect(g: &TwistedDualGraph, levels: &[i64]) -> bool {
    levels.iter().copied().max() == Some(0)
        && g.edges.iter().all(|e| match e.ord_u.cmp(&e.ord_v) {
            std::cmp::Ordering::Greater => levels[e.u] > levels[e.v],
            std::cmp::Ordering::Less => levels[e.v] > levels[e.u],
            std::cmp::Ordering::Equal => levels[e.u] == levels[e.v],
        })
}

/// Connected graphs, mostly layered consistently (so the axioms often hold),
/// with occasional reversed edges, loops and unbalanced degrees.
pub fn random_graph(rng: &mut ChaCha8Rng) -> TwistedDualGraph {
    let n = rng.gen_range(1..=6);
    let layer: Vec<i64> = (0..n).map(|_| rng.gen_range(0..3)).collect();
    let mut edges = Vec::new();
    let edge = |rng: &mut ChaCha8Rng, u: usize, v: usize| {
        let (ord_u, ord_v) = if layer[u] == layer[v] && rng.gen_bool(0.7) {
            (-1, -1)
        } else {
            let a = rng.gen_range(0..4);
            let upper_is_u = layer[u] > layer[v] || (layer[u] == layer[v] && rng.gen_bool(0.5));
            let flip = rng.gen_bool(0.1);
            if upper_is_u != flip {
                (a, -2 - a)
            } else {
                (-2 - a, a)
            }
        };
        let (ord_u, ord_v) = if rng.gen_bool(0.03) { (ord_u + 1, ord_v) } else { (ord_u, ord_v) };
        Edge { u, v, ord_u, ord_v }
    };
    for v in 1..n {
        let u = rng.gen_range(0..v);
        edges.push(edge(rng, u, v));
    }
    for _ in 0..rng.gen_range(0..=n) {
        let (u, v) = (rng.gen_range(0..n), rng.gen_range(0..n));
        if u == v {
            let e = if rng.gen_bool(0.8) { Edge { u, v, ord_u: -1, ord_v: -1 } } else { Edge { u, v, ord_u: 0, ord_v: -2 } };
            edges.push(e);
        } else {
            edges.push(edge(rng, u, v));
        }
    }
    let mut vertices: Vec<Vertex> = (0..n).map(|_| Vertex { genus: rng.gen_range(0..3), markings: vec![] }).collect();
    let mut deg = vec![0i64; n];
    for e in &edges {
        deg[e.u] += e.ord_u;
        deg[e.v] += e.ord_v;
    }
    for (v, vx) in vertices.iter_mut().enumerate() {
        let need = 2 * i64::from(vx.genus) - 2 - deg[v];
        if need != 0 && rng.gen_bool(0.95) {
            vx.markings.push(need);
        }
    }
    TwistedDualGraph { vertices, edges }
}

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}
