//! Toric diagrams: trivalent vertices carrying three integer weight vectors,
//! univalent leg ends, and slot-indexed edges.
//!
//! Construction checks referential integrity only. The balancing conditions
//! are reported by [`validate`] so that broken inputs can be diagnosed
//! instead of rejected.

use alloc::collections::{BTreeMap, BTreeSet};
use alloc::format;
use alloc::string::{String, ToString};
use alloc::vec::Vec;
use core::fmt;
use core::ops::{Add, Neg};

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
pub struct WeightVector {
    pub a: i32,
    pub b: i32,
}

impl WeightVector {
    pub const fn new(a: i32, b: i32) -> Self {
        Self { a, b }
    }

    pub fn is_zero(&self) -> bool {
        self.a == 0 && self.b == 0
    }
}

impl Add for WeightVector {
    type Output = WeightVector;
    fn add(self, o: WeightVector) -> WeightVector {
        WeightVector::new(self.a + o.a, self.b + o.b)
    }
}

impl Neg for WeightVector {
    type Output = WeightVector;
    fn neg(self) -> WeightVector {
        WeightVector::new(-self.a, -self.b)
    }
}

impl fmt::Display for WeightVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({},{})", self.a, self.b)
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TrivalentVertex {
    pub id: String,
    pub weights: [WeightVector; 3],
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct UnivalentVertex {
    pub id: String,
}

/// One end of an edge. `slot` is 1..=3 on a trivalent vertex and 0 on a
/// univalent one.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EdgeEnd {
    pub vertex: String,
    pub slot: u8,
}

impl EdgeEnd {
    pub fn new(vertex: impl Into<String>, slot: u8) -> Self {
        Self {
            vertex: vertex.into(),
            slot,
        }
    }
}

impl fmt::Display for EdgeEnd {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}:{}", self.vertex, self.slot)
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Edge {
    pub a: EdgeEnd,
    pub b: EdgeEnd,
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum ModelError {
    #[error("duplicate vertex id `{0}`")]
    DuplicateId(String),
    #[error("edge endpoint references unknown vertex `{0}`")]
    DanglingEdgeRef(String),
    #[error("slot {0} is used by more than one edge")]
    SlotReused(String),
    #[error("slot {0} does not exist on that vertex (trivalent: 1..3, univalent: 0)")]
    InvalidSlot(String),
    #[error("unknown builtin diagram `{0}`")]
    UnknownBuiltin(String),
    #[error("diagram `{name}` violates {count} balancing condition(s)")]
    InvalidDiagram { name: String, count: usize },
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ToricDiagram {
    name: String,
    trivalent: Vec<TrivalentVertex>,
    univalent: Vec<UnivalentVertex>,
    edges: Vec<Edge>,
}

impl ToricDiagram {
    pub fn new(
        name: impl Into<String>,
        trivalent: Vec<TrivalentVertex>,
        univalent: Vec<UnivalentVertex>,
        edges: Vec<Edge>,
    ) -> Result<Self, ModelError> {
        let mut kinds: BTreeMap<&str, bool> = BTreeMap::new();
        for id in trivalent.iter().map(|v| (v.id.as_str(), true)).chain(univalent.iter().map(|v| (v.id.as_str(), false))) {
            if kinds.insert(id.0, id.1).is_some() {
                return Err(ModelError::DuplicateId(id.0.to_string()));
            }
        }
        let mut used: BTreeSet<(&str, u8)> = BTreeSet::new();
        for end in edges.iter().flat_map(|e| [&e.a, &e.b]) {
            let trivalent = *kinds
                .get(end.vertex.as_str())
                .ok_or_else(|| ModelError::DanglingEdgeRef(end.vertex.clone()))?;
            let slot_ok = if trivalent { (1..=3).contains(&end.slot) } else { end.slot == 0 };
            if !slot_ok {
                return Err(ModelError::InvalidSlot(end.to_string()));
            }
            if !used.insert((end.vertex.as_str(), end.slot)) {
                return Err(ModelError::SlotReused(end.to_string()));
            }
        }
        Ok(Self {
            name: name.into(),
            trivalent,
            univalent,
            edges,
        })
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn trivalent(&self) -> &[TrivalentVertex] {
        &self.trivalent
    }

    pub fn univalent(&self) -> &[UnivalentVertex] {
        &self.univalent
    }

    pub fn edges(&self) -> &[Edge] {
        &self.edges
    }

    pub fn vertex(&self, id: &str) -> Option<&TrivalentVertex> {
        self.trivalent.iter().find(|v| v.id == id)
    }

    /// Sorted multiset of sorted weight triples: equal for diagrams that agree
    /// up to relabeling vertices and permuting slots.
    pub fn weight_signature(&self) -> Vec<[WeightVector; 3]> {
        let mut sig: Vec<[WeightVector; 3]> = self
            .trivalent
            .iter()
            .map(|v| {
                let mut w = v.weights;
                w.sort();
                w
            })
            .collect();
        sig.sort();
        sig
    }

    /// Renames every vertex through `f`, which must be injective.
    pub fn relabeled<F: Fn(&str) -> String>(&self, f: F) -> Result<Self, ModelError> {
        Self::new(
            self.name.clone(),
            self.trivalent
                .iter()
                .map(|v| TrivalentVertex { id: f(&v.id), weights: v.weights })
                .collect(),
            self.univalent.iter().map(|v| UnivalentVertex { id: f(&v.id) }).collect(),
            self.edges
                .iter()
                .map(|e| Edge {
                    a: EdgeEnd::new(f(&e.a.vertex), e.a.slot),
                    b: EdgeEnd::new(f(&e.b.vertex), e.b.slot),
                })
                .collect(),
        )
    }

    /// Reorders the slots of trivalent vertex `index` so that new slot `k`
    /// holds old slot `perm[k]`; edge references follow.
    pub fn with_permuted_slots(&self, index: usize, perm: [usize; 3]) -> Self {
        let mut out = self.clone();
        let Some(v) = out.trivalent.get_mut(index) else {
            return out;
        };
        let old = v.weights;
        v.weights = [old[perm[0]], old[perm[1]], old[perm[2]]];
        let id = v.id.clone();
        for end in out.edges.iter_mut().flat_map(|e| [&mut e.a, &mut e.b]) {
            if end.vertex == id {
                let old_slot = usize::from(end.slot) - 1;
                let new_slot = perm.iter().position(|&p| p == old_slot).expect("perm is a permutation");
                end.slot = new_slot as u8 + 1;
            }
        }
        out
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Violation {
    ZeroWeight { vertex: String, slot: u8 },
    VertexImbalance { vertex: String, sum: WeightVector },
    EdgeImbalance { edge: usize, a: EdgeEnd, b: EdgeEnd, sum: WeightVector },
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Violation::ZeroWeight { vertex, slot } => {
                write!(f, "ZeroWeight vertex={vertex} slot={slot}")
            }
            Violation::VertexImbalance { vertex, sum } => {
                write!(f, "VertexImbalance vertex={vertex} sum={sum}")
            }
            Violation::EdgeImbalance { edge, a, b, sum } => {
                write!(f, "EdgeImbalance edge={edge} ends={a},{b} sum={sum}")
            }
        }
    }
}

/// Balancing at trivalent vertices, balancing along internal edges, and no
/// zero weights. Empty iff the diagram is valid.
pub fn validate(d: &ToricDiagram) -> Vec<Violation> {
    let mut out = Vec::new();
    for v in &d.trivalent {
        for (k, w) in v.weights.iter().enumerate() {
            if w.is_zero() {
                out.push(Violation::ZeroWeight {
                    vertex: v.id.clone(),
                    slot: k as u8 + 1,
                });
            }
        }
        let sum = v.weights[0] + v.weights[1] + v.weights[2];
        if !sum.is_zero() {
            out.push(Violation::VertexImbalance {
                vertex: v.id.clone(),
                sum,
            });
        }
    }
    let weight_at = |end: &EdgeEnd| -> Option<WeightVector> {
        let v = d.vertex(&end.vertex)?;
        v.weights.get(usize::from(end.slot).checked_sub(1)?).copied()
    };
    for (i, e) in d.edges.iter().enumerate() {
        if let (Some(wa), Some(wb)) = (weight_at(&e.a), weight_at(&e.b)) {
            let sum = wa + wb;
            if !sum.is_zero() {
                out.push(Violation::EdgeImbalance {
                    edge: i,
                    a: e.a.clone(),
                    b: e.b.clone(),
                    sum,
                });
            }
        }
    }
    out
}

pub(crate) fn require_valid(d: &ToricDiagram) -> Result<(), ModelError> {
    let v = validate(d);
    if v.is_empty() {
        Ok(())
    } else {
        Err(ModelError::InvalidDiagram {
            name: d.name.clone(),
            count: v.len(),
        })
    }
}

/// Replaces every weight by its negative.
pub fn negate_weights(d: &ToricDiagram) -> ToricDiagram {
    let mut out = d.clone();
    for v in &mut out.trivalent {
        for w in &mut v.weights {
            *w = -*w;
        }
    }
    out
}

/// Number of torus fixed points, i.e. of trivalent vertices.
pub fn euler_characteristic(d: &ToricDiagram) -> Result<i64, ModelError> {
    require_valid(d)?;
    Ok(d.trivalent.len() as i64)
}

/// Perfect matching of trivalent vertices into pairs with mutually negated
/// weight multisets, as vertex-id pairs.
pub type PairingMap = Vec<(String, String)>;

/// Finds a balancing pairing if one exists.
///
/// Vertices are bucketed by their sorted weight triple. A vertex can only be
/// paired with a member of the bucket of the negated triple, and a valid
/// triple is never its own negation, so a matching exists iff every bucket
/// has the same size as its negated bucket.
pub fn balanced_pairing(d: &ToricDiagram) -> Result<Option<PairingMap>, ModelError> {
    require_valid(d)?;
    let key = |w: [WeightVector; 3]| {
        let mut w = w;
        w.sort();
        w
    };
    let mut buckets: BTreeMap<[WeightVector; 3], Vec<&str>> = BTreeMap::new();
    for v in &d.trivalent {
        buckets.entry(key(v.weights)).or_default().push(&v.id);
    }
    let mut pairs = Vec::new();
    for (k, members) in &buckets {
        let neg = key([-k[0], -k[1], -k[2]]);
        if neg == *k {
            return Ok(None);
        }
        let Some(partners) = buckets.get(&neg) else {
            return Ok(None);
        };
        if partners.len() != members.len() {
            return Ok(None);
        }
        if *k < neg {
            for (a, b) in members.iter().zip(partners) {
                pairs.push((a.to_string(), b.to_string()));
            }
        }
    }
    Ok(Some(pairs))
}

pub const BUILTIN_NAMES: [&str; 3] = ["resolved_conifold", "local_p2", "local_p1xp1"];

fn tri(id: &str, w: [(i32, i32); 3]) -> TrivalentVertex {
    TrivalentVertex {
        id: id.to_string(),
        weights: w.map(|(a, b)| WeightVector::new(a, b)),
    }
}

fn edge(a: &str, sa: u8, b: &str, sb: u8) -> Edge {
    Edge {
        a: EdgeEnd::new(a, sa),
        b: EdgeEnd::new(b, sb),
    }
}

/// Diagram with legs: every trivalent slot not listed in `internal` gets a
/// univalent end named `<vertex>_leg<slot>`.
fn assemble(name: &str, trivalent: Vec<TrivalentVertex>, internal: Vec<Edge>) -> ToricDiagram {
    let mut univalent = Vec::new();
    let mut edges = internal;
    for v in &trivalent {
        for slot in 1..=3u8 {
            let used = edges
                .iter()
                .any(|e| (e.a.vertex == v.id && e.a.slot == slot) || (e.b.vertex == v.id && e.b.slot == slot));
            if !used {
                let leg = format!("{}_leg{}", v.id, slot);
                univalent.push(UnivalentVertex { id: leg.clone() });
                edges.push(edge(&v.id, slot, &leg, 0));
            }
        }
    }
    ToricDiagram::new(name, trivalent, univalent, edges).expect("builtin diagrams are well formed")
}

pub fn builtin(name: &str) -> Result<ToricDiagram, ModelError> {
    let d = match name {
        // O(-1) + O(-1) -> P^1
        "resolved_conifold" => assemble(
            name,
            alloc::vec![
                tri("v1", [(0, 1), (-1, -1), (1, 0)]),
                tri("v2", [(-1, 0), (0, -1), (1, 1)]),
            ],
            alloc::vec![edge("v1", 3, "v2", 1)],
        ),
        // O(-3) -> P^2
        "local_p2" => assemble(
            name,
            alloc::vec![
                tri("v1", [(1, 0), (0, 1), (-1, -1)]),
                tri("v2", [(-1, 0), (-1, 1), (2, -1)]),
                tri("v3", [(0, -1), (1, -1), (-1, 2)]),
            ],
            alloc::vec![edge("v1", 1, "v2", 1), edge("v1", 2, "v3", 1), edge("v2", 2, "v3", 2)],
        ),
        // K of P^1 x P^1: the square, corners counter-clockwise from the origin.
        "local_p1xp1" => assemble(
            name,
            alloc::vec![
                tri("v1", [(1, 0), (0, 1), (-1, -1)]),
                tri("v2", [(-1, 0), (0, 1), (1, -1)]),
                tri("v3", [(-1, 0), (0, -1), (1, 1)]),
                tri("v4", [(1, 0), (0, -1), (-1, 1)]),
            ],
            alloc::vec![
                edge("v1", 1, "v2", 1),
                edge("v2", 2, "v3", 2),
                edge("v4", 1, "v3", 1),
                edge("v1", 2, "v4", 2),
            ],
        ),
        _ => return Err(ModelError::UnknownBuiltin(name.to_string())),
    };
    Ok(d)
}
