// SPDX-License-Identifier: Apache-2.0

//! Twisted canonical divisors on dual graphs.
//!
//! A graph carries a genus and marking orders per vertex and a pair of
//! orders per edge, one for each side. The checks here are combinatorial:
//! degree and edge-sum identities, the comparison relations `∼`/`≻` between
//! components, absence of strict directed cycles, a level order realizing the
//! comparisons, and the global residue condition for given residues.
//!
//! Residue conventions: a residue is keyed by half-edge (`"3:u"` is the `u`
//! side of edge 3). Half-edges of order `-1` must carry one; poles of higher
//! order may, and default to zero; holomorphic half-edges must not carry a
//! nonzero one.

use std::collections::{BTreeMap, BTreeSet, VecDeque};
use std::fmt;
use std::str::FromStr;

use num_traits::Zero;
use petgraph::algo::tarjan_scc;
use petgraph::graph::{DiGraph, NodeIndex};
use petgraph::unionfind::UnionFind;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::arith::{parse_rational, Rational};

#[derive(Debug, Error)]
pub enum TwistError {
    #[error("invalid graph input: {0}")]
    Input(String),
    #[error("malformed graph: {0}")]
    Structure(String),
    #[error("bad residue key {0:?}; expected \"<edge>:u\" or \"<edge>:v\"")]
    ResidueKey(String),
    #[error("bad residue value for {key}: {value}")]
    ResidueValue { key: String, value: String },
    #[error("residue missing on half-edge {0} of order -1")]
    MissingResidue(HalfEdge),
    #[error("invalid levels: {0}")]
    Levels(String),
    #[error("invalid prescribed pole: {0}")]
    Pole(String),
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Vertex {
    pub genus: u32,
    #[serde(default)]
    pub markings: Vec<i64>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct Edge {
    pub u: usize,
    pub v: usize,
    pub ord_u: i64,
    pub ord_v: i64,
}

/// How the two sides of a node compare.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Comparison {
    /// Both orders are `-1`: `u ∼ v`.
    Equal,
    /// `ord_u > ord_v`: `u ≻ v`.
    UAbove,
    /// `ord_v > ord_u`: `v ≻ u`.
    VAbove,
}

impl Edge {
    pub fn comparison(&self) -> Comparison {
        match self.ord_u.cmp(&self.ord_v) {
            std::cmp::Ordering::Greater => Comparison::UAbove,
            std::cmp::Ordering::Less => Comparison::VAbove,
            std::cmp::Ordering::Equal => Comparison::Equal,
        }
    }

    pub fn is_loop(&self) -> bool {
        self.u == self.v
    }

    /// `(upper, lower)` endpoints of a strict edge.
    fn strict(&self) -> Option<(usize, usize)> {
        match self.comparison() {
            Comparison::UAbove => Some((self.u, self.v)),
            Comparison::VAbove => Some((self.v, self.u)),
            Comparison::Equal => None,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TwistedDualGraph {
    pub vertices: Vec<Vertex>,
    #[serde(default)]
    pub edges: Vec<Edge>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Side {
    U,
    V,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct HalfEdge {
    pub edge: usize,
    pub side: Side,
}

impl fmt::Display for HalfEdge {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = if self.side == Side::U { "u" } else { "v" };
        write!(f, "{}:{s}", self.edge)
    }
}

impl FromStr for HalfEdge {
    type Err = TwistError;

    fn from_str(s: &str) -> Result<Self, TwistError> {
        let bad = || TwistError::ResidueKey(s.to_string());
        let (e, side) = s.trim().split_once(':').ok_or_else(bad)?;
        let side = match side {
            "u" => Side::U,
            "v" => Side::V,
            _ => return Err(bad()),
        };
        Ok(HalfEdge { edge: e.parse().map_err(|_| bad())?, side })
    }
}

impl TwistedDualGraph {
    pub fn from_json(s: &str) -> Result<Self, TwistError> {
        serde_json::from_str(s).map_err(|e| TwistError::Input(e.to_string()))
    }

    /// Vertex and order on the given side.
    pub fn half_edge(&self, h: HalfEdge) -> (usize, i64) {
        let e = &self.edges[h.edge];
        match h.side {
            Side::U => (e.u, e.ord_u),
            Side::V => (e.v, e.ord_v),
        }
    }

    fn check_structure(&self) -> Result<(), TwistError> {
        if self.vertices.is_empty() {
            return Err(TwistError::Structure("no vertices".into()));
        }
        let n = self.vertices.len();
        for (i, e) in self.edges.iter().enumerate() {
            if e.u >= n || e.v >= n {
                return Err(TwistError::Structure(format!("edge {i} joins {} and {} but there are {n} vertices", e.u, e.v)));
            }
        }
        Ok(())
    }

    fn components(&self, keep: impl Fn(usize) -> bool) -> Vec<Vec<usize>> {
        let n = self.vertices.len();
        let mut uf = UnionFind::<usize>::new(n);
        for e in &self.edges {
            if keep(e.u) && keep(e.v) {
                uf.union(e.u, e.v);
            }
        }
        let mut groups: BTreeMap<usize, Vec<usize>> = BTreeMap::new();
        for v in (0..n).filter(|&v| keep(v)) {
            groups.entry(uf.find(v)).or_default().push(v);
        }
        let mut out: Vec<Vec<usize>> = groups.into_values().collect();
        out.sort();
        out
    }

    /// A directed cycle `C_1 ⪰ ... ⪰ C_k ⪰ C_1` using at least one strict
    /// step, as its vertex sequence starting at a strict edge.
    pub fn strict_cycle(&self) -> Option<Vec<usize>> {
        let n = self.vertices.len();
        let mut dg = DiGraph::<(), ()>::with_capacity(n, 2 * self.edges.len());
        let nodes: Vec<NodeIndex> = (0..n).map(|_| dg.add_node(())).collect();
        let mut adj = vec![Vec::new(); n];
        for e in &self.edges {
            match e.strict() {
                Some((a, b)) => {
                    if a == b {
                        return Some(vec![a]);
                    }
                    adj[a].push(b);
                }
                None => {
                    adj[e.u].push(e.v);
                    adj[e.v].push(e.u);
                }
            }
        }
        for (a, bs) in adj.iter().enumerate() {
            for &b in bs {
                dg.add_edge(nodes[a], nodes[b], ());
            }
        }
        let mut comp = vec![0; n];
        for (c, scc) in tarjan_scc(&dg).iter().enumerate() {
            for v in scc {
                comp[v.index()] = c;
            }
        }
        let (a, b) = self.edges.iter().filter_map(Edge::strict).find(|&(a, b)| comp[a] == comp[b])?;
        // shortest path b -> a closes the cycle
        let mut prev = vec![usize::MAX; n];
        prev[b] = b;
        let mut queue = VecDeque::from([b]);
        while let Some(x) = queue.pop_front() {
            if x == a {
                break;
            }
            for &y in &adj[x] {
                if prev[y] == usize::MAX {
                    prev[y] = x;
                    queue.push_back(y);
                }
            }
        }
        let mut path = vec![a];
        let mut x = a;
        while x != b {
            x = prev[x];
            path.push(x);
        }
        path.reverse(); // b .. a
        path.rotate_right(1); // a, b, ..
        Some(path)
    }
}

/// One failed condition.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "condition", rename_all = "snake_case")]
pub enum AxiomFailure {
    Structure { message: String },
    Disconnected { components: Vec<Vec<usize>> },
    /// Markings plus incident edge orders must equal `2g - 2`.
    Degree { vertex: usize, expected: i64, found: i64 },
    EdgeSum { edge: usize, sum: i64 },
    /// A self-node can only have orders `(-1, -1)`.
    LoopOrders { edge: usize, ord_u: i64, ord_v: i64 },
    /// Edges between one pair of components disagree on `∼` / `≻`.
    MixedComparison { u: usize, v: usize, edges: Vec<usize> },
    StrictCycle { cycle: Vec<usize> },
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct AxiomReport {
    pub passed: bool,
    pub failures: Vec<AxiomFailure>,
}

pub fn check_twist_axioms(g: &TwistedDualGraph) -> AxiomReport {
    if let Err(e) = g.check_structure() {
        return AxiomReport { passed: false, failures: vec![AxiomFailure::Structure { message: e.to_string() }] };
    }
    let mut failures = Vec::new();
    let comps = g.components(|_| true);
    if comps.len() > 1 {
        failures.push(AxiomFailure::Disconnected { components: comps });
    }
    let mut degree: Vec<i64> = g.vertices.iter().map(|v| v.markings.iter().sum()).collect();
    for e in &g.edges {
        degree[e.u] += e.ord_u;
        degree[e.v] += e.ord_v;
    }
    for (i, (v, &found)) in g.vertices.iter().zip(&degree).enumerate() {
        let expected = 2 * i64::from(v.genus) - 2;
        if found != expected {
            failures.push(AxiomFailure::Degree { vertex: i, expected, found });
        }
    }
    let mut pairs: BTreeMap<(usize, usize), Vec<usize>> = BTreeMap::new();
    for (i, e) in g.edges.iter().enumerate() {
        if e.ord_u + e.ord_v != -2 {
            failures.push(AxiomFailure::EdgeSum { edge: i, sum: e.ord_u + e.ord_v });
        }
        if e.is_loop() {
            if e.comparison() != Comparison::Equal {
                failures.push(AxiomFailure::LoopOrders { edge: i, ord_u: e.ord_u, ord_v: e.ord_v });
            }
        } else {
            pairs.entry((e.u.min(e.v), e.u.max(e.v))).or_default().push(i);
        }
    }
    for ((u, v), edges) in pairs {
        // orient every comparison from the smaller endpoint
        let kinds: BTreeSet<Option<bool>> = edges
            .iter()
            .map(|&i| g.edges[i].strict().map(|(a, _)| a == u))
            .collect();
        if kinds.len() > 1 {
            failures.push(AxiomFailure::MixedComparison { u, v, edges });
        }
    }
    if let Some(cycle) = g.strict_cycle() {
        failures.push(AxiomFailure::StrictCycle { cycle });
    }
    AxiomReport { passed: failures.is_empty(), failures }
}

/// A level per vertex, or a strict cycle showing none exists.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "outcome", rename_all = "snake_case")]
pub enum LevelOutcome {
    Levels { levels: Vec<i64> },
    Cycle { cycle: Vec<usize> },
}

/// Longest-path layering of the `∼`-classes; the top level is 0.
pub fn find_level_order(g: &TwistedDualGraph) -> Result<LevelOutcome, TwistError> {
    g.check_structure()?;
    if let Some(cycle) = g.strict_cycle() {
        return Ok(LevelOutcome::Cycle { cycle });
    }
    let n = g.vertices.len();
    let mut uf = UnionFind::<usize>::new(n);
    for e in g.edges.iter().filter(|e| e.comparison() == Comparison::Equal) {
        uf.union(e.u, e.v);
    }
    let class: Vec<usize> = (0..n).map(|v| uf.find(v)).collect();
    let mut succ = vec![Vec::new(); n];
    let mut indeg = vec![0usize; n];
    for (a, b) in g.edges.iter().filter_map(Edge::strict) {
        succ[class[a]].push(class[b]);
        indeg[class[b]] += 1;
    }
    let roots: BTreeSet<usize> = class.iter().copied().collect();
    let mut depth = vec![0i64; n];
    let mut queue: VecDeque<usize> = roots.iter().copied().filter(|&c| indeg[c] == 0).collect();
    let mut seen = 0;
    while let Some(c) = queue.pop_front() {
        seen += 1;
        for &d in &succ[c] {
            depth[d] = depth[d].max(depth[c] + 1);
            indeg[d] -= 1;
            if indeg[d] == 0 {
                queue.push_back(d);
            }
        }
    }
    assert_eq!(seen, roots.len(), "class graph is acyclic once no strict cycle exists");
    Ok(LevelOutcome::Levels { levels: class.iter().map(|&c| -depth[c]).collect() })
}

/// Checks that `levels` realizes every `∼` and `≻`.
pub fn validate_levels(g: &TwistedDualGraph, levels: &[i64]) -> Result<(), TwistError> {
    if levels.len() != g.vertices.len() {
        return Err(TwistError::Levels(format!("{} levels for {} vertices", levels.len(), g.vertices.len())));
    }
    for (i, e) in g.edges.iter().enumerate() {
        let ok = match e.strict() {
            Some((a, b)) => levels[a] > levels[b],
            None => levels[e.u] == levels[e.v],
        };
        if !ok {
            return Err(TwistError::Levels(format!(
                "edge {i} with orders ({}, {}) is not respected by levels {} and {}",
                e.ord_u, e.ord_v, levels[e.u], levels[e.v]
            )));
        }
    }
    Ok(())
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "condition", rename_all = "snake_case")]
pub enum GrcFailure {
    /// Residues on the two sides of a `(-1, -1)` node must cancel.
    Opposite { edge: usize, sum: String },
    /// A holomorphic half-edge was given a nonzero residue.
    Holomorphic { half_edge: String, value: String },
    /// The residues below a pole-free upper component do not sum to zero.
    Global { level: i64, component: Vec<usize>, sum: String },
}

/// One upper component `Y` and the nodes joining it to level `L`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ComponentCheck {
    pub level: i64,
    pub component: Vec<usize>,
    /// `Y` carries a prescribed pole and is not constrained.
    pub exempt: bool,
    pub half_edges: Vec<String>,
    pub sum: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct GrcReport {
    pub passed: bool,
    pub levels: Vec<i64>,
    pub checks: Vec<ComponentCheck>,
    pub failures: Vec<GrcFailure>,
}

/// Markings of negative order, as `(vertex, marking index)`.
pub fn negative_markings(g: &TwistedDualGraph) -> BTreeSet<(usize, usize)> {
    g.vertices
        .iter()
        .enumerate()
        .flat_map(|(v, vx)| vx.markings.iter().enumerate().filter(|(_, &k)| k < 0).map(move |(i, _)| (v, i)))
        .collect()
}

/// Residue conditions for a level graph. `poles` defaults to every marking
/// of negative order.
pub fn check_grc(
    g: &TwistedDualGraph,
    levels: &[i64],
    residues: &BTreeMap<HalfEdge, Rational>,
    poles: Option<&BTreeSet<(usize, usize)>>,
) -> Result<GrcReport, TwistError> {
    g.check_structure()?;
    validate_levels(g, levels)?;
    let default_poles;
    let poles = match poles {
        Some(p) => p,
        None => {
            default_poles = negative_markings(g);
            &default_poles
        }
    };
    for &(v, i) in poles {
        match g.vertices.get(v).and_then(|x| x.markings.get(i)) {
            Some(&k) if k < 0 => {}
            Some(&k) => return Err(TwistError::Pole(format!("marking {i} at vertex {v} has order {k} >= 0"))),
            None => return Err(TwistError::Pole(format!("no marking {i} at vertex {v}"))),
        }
    }
    for h in residues.keys() {
        if h.edge >= g.edges.len() {
            return Err(TwistError::ResidueKey(h.to_string()));
        }
    }
    let zero = Rational::zero();
    let res = |h: HalfEdge| residues.get(&h).unwrap_or(&zero);

    let mut failures = Vec::new();
    for (i, e) in g.edges.iter().enumerate() {
        let hu = HalfEdge { edge: i, side: Side::U };
        let hv = HalfEdge { edge: i, side: Side::V };
        for (h, ord) in [(hu, e.ord_u), (hv, e.ord_v)] {
            if ord == -1 && !residues.contains_key(&h) {
                return Err(TwistError::MissingResidue(h));
            }
            if ord >= 0 && !res(h).is_zero() {
                failures.push(GrcFailure::Holomorphic { half_edge: h.to_string(), value: res(h).to_string() });
            }
        }
        if e.comparison() == Comparison::Equal {
            let sum = res(hu) + res(hv);
            if !sum.is_zero() {
                failures.push(GrcFailure::Opposite { edge: i, sum: sum.to_string() });
            }
        }
    }

    let distinct: BTreeSet<i64> = levels.iter().copied().collect();
    let mut checks = Vec::new();
    for &level in distinct.iter().rev() {
        for comp in g.components(|v| levels[v] > level) {
            let inside: BTreeSet<usize> = comp.iter().copied().collect();
            let mut half_edges = Vec::new();
            for (i, e) in g.edges.iter().enumerate() {
                for (side, here, there) in [(Side::U, e.u, e.v), (Side::V, e.v, e.u)] {
                    if levels[here] == level && inside.contains(&there) {
                        half_edges.push(HalfEdge { edge: i, side });
                    }
                }
            }
            if half_edges.is_empty() {
                continue;
            }
            let exempt = poles.iter().any(|(v, _)| inside.contains(v));
            let sum: Rational = half_edges.iter().map(|&h| res(h)).sum();
            if !exempt && !sum.is_zero() {
                failures.push(GrcFailure::Global { level, component: comp.clone(), sum: sum.to_string() });
            }
            checks.push(ComponentCheck {
                level,
                component: comp,
                exempt,
                half_edges: half_edges.iter().map(HalfEdge::to_string).collect(),
                sum: sum.to_string(),
            });
        }
    }
    Ok(GrcReport { passed: failures.is_empty(), levels: levels.to_vec(), checks, failures })
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(untagged)]
enum ResidueValue {
    Int(i64),
    Text(String),
}

/// Graph file: the graph plus optional levels, residues and poles.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct TwistInput {
    #[serde(flatten)]
    pub graph: TwistedDualGraph,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub levels: Option<Vec<i64>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    residues: Option<BTreeMap<String, ResidueValue>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub poles: Option<Vec<(usize, usize)>>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct TwistReport {
    pub passed: bool,
    pub axioms: AxiomReport,
    pub levels: Option<LevelOutcome>,
    pub grc: Option<GrcReport>,
    pub notes: Vec<String>,
}

impl TwistInput {
    pub fn from_json(s: &str) -> Result<Self, TwistError> {
        serde_json::from_str(s).map_err(|e| TwistError::Input(e.to_string()))
    }

    pub fn residues(&self) -> Result<Option<BTreeMap<HalfEdge, Rational>>, TwistError> {
        let Some(raw) = &self.residues else { return Ok(None) };
        let mut out = BTreeMap::new();
        for (k, v) in raw {
            let h: HalfEdge = k.parse()?;
            let r = match v {
                ResidueValue::Int(i) => crate::arith::rat(*i),
                ResidueValue::Text(t) => parse_rational(t)
                    .map_err(|_| TwistError::ResidueValue { key: k.clone(), value: t.clone() })?,
            };
            out.insert(h, r);
        }
        Ok(Some(out))
    }

    /// Axioms, then a level order (given or computed), then residues when
    /// the input supplies them or none are required.
    pub fn run(&self) -> Result<TwistReport, TwistError> {
        let g = &self.graph;
        let axioms = check_twist_axioms(g);
        let mut notes = Vec::new();
        if !axioms.passed {
            return Ok(TwistReport { passed: false, axioms, levels: None, grc: None, notes });
        }
        let levels = match &self.levels {
            Some(l) => {
                validate_levels(g, l)?;
                LevelOutcome::Levels { levels: l.clone() }
            }
            None => find_level_order(g)?,
        };
        let LevelOutcome::Levels { levels: lv } = &levels else {
            unreachable!("axioms exclude strict cycles")
        };
        let residues = self.residues()?;
        let needs_input = g.edges.iter().any(|e| e.ord_u == -1 || e.ord_v == -1);
        let grc = match (&residues, needs_input) {
            (Some(r), _) => Some(check_grc(g, lv, r, self.poles_set().as_ref())?),
            (None, false) => Some(check_grc(g, lv, &BTreeMap::new(), self.poles_set().as_ref())?),
            (None, true) => {
                notes.push("global residue condition not checked: no residues given".into());
                None
            }
        };
        let passed = grc.as_ref().is_none_or(|r| r.passed);
        Ok(TwistReport { passed, axioms, levels: Some(levels), grc, notes })
    }

    fn poles_set(&self) -> Option<BTreeSet<(usize, usize)>> {
        self.poles.as_ref().map(|p| p.iter().copied().collect())
    }
}

/// Multiplies every residue by `c`.
pub fn scale_residues(r: &BTreeMap<HalfEdge, Rational>, c: &Rational) -> BTreeMap<HalfEdge, Rational> {
    r.iter().map(|(h, x)| (*h, x * c)).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::rat;

    fn graph(vs: &[(u32, &[i64])], es: &[(usize, usize, i64, i64)]) -> TwistedDualGraph {
        TwistedDualGraph {
            vertices: vs.iter().map(|&(genus, m)| Vertex { genus, markings: m.to_vec() }).collect(),
            edges: es.iter().map(|&(u, v, ord_u, ord_v)| Edge { u, v, ord_u, ord_v }).collect(),
        }
    }

    fn h(s: &str) -> HalfEdge {
        s.parse().unwrap()
    }

    #[test]
    fn single_vertex_passes() {
        let g = graph(&[(2, &[2])], &[]);
        assert!(check_twist_axioms(&g).passed);
        assert_eq!(find_level_order(&g).unwrap(), LevelOutcome::Levels { levels: vec![0] });
    }

    #[test]
    fn strict_pair_levels() {
        let g = graph(&[(1, &[]), (1, &[2])], &[(0, 1, 0, -2)]);
        assert!(check_twist_axioms(&g).passed);
        assert_eq!(find_level_order(&g).unwrap(), LevelOutcome::Levels { levels: vec![0, -1] });
    }

    #[test]
    fn opposite_double_edge_fails() {
        let g = graph(&[(1, &[2]), (1, &[2])], &[(0, 1, 0, -2), (0, 1, -2, 0)]);
        let r = check_twist_axioms(&g);
        assert!(!r.passed);
        assert!(r.failures.iter().any(|f| matches!(f, AxiomFailure::MixedComparison { u: 0, v: 1, .. })));
        assert!(r.failures.iter().any(|f| matches!(f, AxiomFailure::StrictCycle { .. })));
        assert!(matches!(find_level_order(&g).unwrap(), LevelOutcome::Cycle { cycle } if cycle.len() == 2));
    }

    #[test]
    fn equal_edges_share_a_level() {
        let g = graph(&[(0, &[1, -1]), (0, &[0]), (1, &[2])], &[(0, 1, -1, -1), (1, 2, -1, -1), (2, 0, -1, -1)]);
        assert!(check_twist_axioms(&g).passed, "{:?}", check_twist_axioms(&g));
        assert_eq!(find_level_order(&g).unwrap(), LevelOutcome::Levels { levels: vec![0, 0, 0] });
    }

    #[test]
    fn degree_edge_sum_loops_and_connectivity() {
        let g = graph(&[(1, &[1]), (0, &[-2])], &[(0, 0, 0, -2)]);
        let r = check_twist_axioms(&g);
        let kinds: Vec<&str> = r
            .failures
            .iter()
            .map(|f| match f {
                AxiomFailure::Disconnected { .. } => "disconnected",
                AxiomFailure::Degree { .. } => "degree",
                AxiomFailure::LoopOrders { .. } => "loop",
                AxiomFailure::StrictCycle { .. } => "cycle",
                _ => "other",
            })
            .collect();
        assert_eq!(kinds, ["disconnected", "degree", "loop", "cycle"]);
        let bad = graph(&[(0, &[])], &[(0, 3, -1, -1)]);
        assert!(matches!(check_twist_axioms(&bad).failures[0], AxiomFailure::Structure { .. }));
    }

    /// Top genus-1 vertex above a genus-2 vertex through two nodes.
    fn two_level() -> TwistedDualGraph {
        graph(&[(1, &[]), (2, &[6])], &[(0, 1, 0, -2), (0, 1, 0, -2)])
    }

    #[test]
    fn grc_pair() {
        let g = two_level();
        let levels = [0, -1];
        let good = BTreeMap::from([(h("0:v"), rat(3)), (h("1:v"), rat(-3))]);
        let bad = BTreeMap::from([(h("0:v"), rat(3)), (h("1:v"), rat(3))]);
        let r = check_grc(&g, &levels, &good, None).unwrap();
        assert!(r.passed);
        assert_eq!(r.checks.len(), 1);
        let r = check_grc(&g, &levels, &bad, None).unwrap();
        assert!(!r.passed);
        assert!(matches!(&r.failures[0], GrcFailure::Global { level: -1, sum, .. } if sum == "6"));
        // any nonzero rescaling keeps both verdicts
        let c = rat(-2) / rat(7);
        assert!(check_grc(&g, &levels, &scale_residues(&good, &c), None).unwrap().passed);
        assert!(!check_grc(&g, &levels, &scale_residues(&bad, &c), None).unwrap().passed);
    }

    #[test]
    fn grc_pole_exempts_component() {
        // the upper vertex carries a prescribed pole
        let g = graph(&[(1, &[1, -1]), (2, &[6])], &[(0, 1, 0, -2), (0, 1, 0, -2)]);
        let bad = BTreeMap::from([(h("0:v"), rat(3)), (h("1:v"), rat(3))]);
        let r = check_grc(&g, &[0, -1], &bad, None).unwrap();
        assert!(r.passed && r.checks[0].exempt);
    }

    #[test]
    fn grc_vacuous_and_errors() {
        let g = graph(&[(2, &[2])], &[]);
        assert!(check_grc(&g, &[0], &BTreeMap::new(), None).unwrap().passed);
        let eq = graph(&[(1, &[1]), (1, &[-1])], &[(0, 1, -1, -1)]);
        assert!(matches!(check_grc(&eq, &[0, 0], &BTreeMap::new(), None), Err(TwistError::MissingResidue(_))));
        let r = BTreeMap::from([(h("0:u"), rat(1)), (h("0:v"), rat(1))]);
        assert!(matches!(&check_grc(&eq, &[0, 0], &r, None).unwrap().failures[0], GrcFailure::Opposite { .. }));
        assert!(matches!(check_grc(&two_level(), &[0, 0], &BTreeMap::new(), None), Err(TwistError::Levels(_))));
        let holo = BTreeMap::from([(h("0:u"), rat(1))]);
        assert!(!check_grc(&two_level(), &[0, -1], &holo, None).unwrap().passed);
        assert!("0:w".parse::<HalfEdge>().is_err());
    }

    #[test]
    fn json_round_trip_and_run() {
        let text = r#"{"vertices":[{"genus":1},{"genus":2,"markings":[6]}],
            "edges":[{"u":0,"v":1,"ord_u":0,"ord_v":-2},{"u":0,"v":1,"ord_u":0,"ord_v":-2}],
            "residues":{"0:v":"1/2","1:v":"-1/2"}}"#;
        let input = TwistInput::from_json(text).unwrap();
        let report = input.run().unwrap();
        assert!(report.passed);
        assert_eq!(report.levels, Some(LevelOutcome::Levels { levels: vec![0, -1] }));
        let again = TwistInput::from_json(&serde_json::to_string(&input).unwrap()).unwrap();
        assert_eq!(again.graph, input.graph);
    }
}
