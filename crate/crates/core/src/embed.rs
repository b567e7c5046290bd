//! Embeddings of weighted graphs and backtracking search for them.
//!
//! An embedding is an injective vertex map that preserves `(genus, weight)`
//! exactly and sends edges to edges. Non-edges are unconstrained unless the
//! search asks for an isomorphism.

use std::collections::{BTreeMap, BTreeSet};

use thiserror::Error;

use crate::graph::{VertexId, WeightedGraph};

#[derive(Clone, Debug, PartialEq, Eq, Error)]
pub enum EmbeddingError {
    #[error("vertex {0} of the source has no image")]
    Unmapped(VertexId),
    #[error("map mentions {0}, which is not a source vertex")]
    ExtraSource(VertexId),
    #[error("image {1} of {0} is not a target vertex")]
    MissingTarget(VertexId, VertexId),
    #[error("vertices {0} and {1} share the image {2}")]
    NotInjective(VertexId, VertexId, VertexId),
    #[error("vertex {source_vertex} maps to {target_vertex}: label {found} differs from {expected}")]
    LabelMismatch {
        source_vertex: VertexId,
        target_vertex: VertexId,
        expected: crate::graph::Label,
        found: crate::graph::Label,
    },
    #[error("edge {0}-{1} is not sent to an edge")]
    EdgeNotPreserved(VertexId, VertexId),
}

/// Checks the embedding conditions for `map` from `source` into `target`.
pub fn check_embedding(
    source: &WeightedGraph,
    target: &WeightedGraph,
    map: &BTreeMap<VertexId, VertexId>,
) -> Result<(), EmbeddingError> {
    for &k in map.keys() {
        if !source.contains(k) {
            return Err(EmbeddingError::ExtraSource(k));
        }
    }
    let mut seen: BTreeMap<VertexId, VertexId> = BTreeMap::new();
    for (v, l) in source.vertices() {
        let &t = map.get(&v).ok_or(EmbeddingError::Unmapped(v))?;
        let found = target.label(t).ok_or(EmbeddingError::MissingTarget(v, t))?;
        if let Some(&other) = seen.get(&t) {
            return Err(EmbeddingError::NotInjective(other, v, t));
        }
        seen.insert(t, v);
        if found != l {
            return Err(EmbeddingError::LabelMismatch {
                source_vertex: v,
                target_vertex: t,
                expected: l,
                found,
            });
        }
    }
    for (a, b) in source.edges() {
        if !target.has_edge(map[&a], map[&b]) {
            return Err(EmbeddingError::EdgeNotPreserved(a, b));
        }
    }
    Ok(())
}

/// A checked embedding `source ↪ target`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Embedding {
    source: WeightedGraph,
    target: WeightedGraph,
    map: BTreeMap<VertexId, VertexId>,
}

impl Embedding {
    pub fn new(
        source: WeightedGraph,
        target: WeightedGraph,
        map: BTreeMap<VertexId, VertexId>,
    ) -> Result<Self, EmbeddingError> {
        check_embedding(&source, &target, &map)?;
        Ok(Embedding { source, target, map })
    }

    pub fn identity(g: &WeightedGraph) -> Self {
        let map = g.vertex_ids().map(|v| (v, v)).collect();
        Embedding { source: g.clone(), target: g.clone(), map }
    }

    /// Inclusion of a subgraph sharing ids with `target`.
    pub fn inclusion(source: &WeightedGraph, target: &WeightedGraph) -> Result<Self, EmbeddingError> {
        let map = source.vertex_ids().map(|v| (v, v)).collect();
        Embedding::new(source.clone(), target.clone(), map)
    }

    pub fn source(&self) -> &WeightedGraph {
        &self.source
    }

    pub fn target(&self) -> &WeightedGraph {
        &self.target
    }

    pub fn map(&self) -> &BTreeMap<VertexId, VertexId> {
        &self.map
    }

    pub fn apply(&self, v: VertexId) -> Option<VertexId> {
        self.map.get(&v).copied()
    }

    /// `(source id, target id)` pairs by ascending source id.
    pub fn pairs(&self) -> Vec<(VertexId, VertexId)> {
        self.map.iter().map(|(&a, &b)| (a, b)).collect()
    }

    pub fn image(&self) -> BTreeSet<VertexId> {
        self.map.values().copied().collect()
    }

    /// Re-checks the invariants from scratch.
    pub fn check(&self) -> Result<(), EmbeddingError> {
        check_embedding(&self.source, &self.target, &self.map)
    }

    /// True when the vertex and edge maps are both bijective.
    pub fn is_isomorphism(&self) -> bool {
        self.source.vertex_count() == self.target.vertex_count()
            && self.source.edge_count() == self.target.edge_count()
    }

    /// `outer ∘ self`.
    pub fn then(&self, outer: &Embedding) -> Result<Embedding, EmbeddingError> {
        let map = self
            .map
            .iter()
            .map(|(&a, &b)| {
                outer.apply(b).map(|c| (a, c)).ok_or(EmbeddingError::MissingTarget(a, b))
            })
            .collect::<Result<_, _>>()?;
        Embedding::new(self.source.clone(), outer.target.clone(), map)
    }

    /// Inverse of an isomorphism; `None` otherwise.
    pub fn inverse(&self) -> Option<Embedding> {
        if !self.is_isomorphism() {
            return None;
        }
        let map = self.map.iter().map(|(&a, &b)| (b, a)).collect();
        Embedding::new(self.target.clone(), self.source.clone(), map).ok()
    }
}

#[derive(Clone, Copy, PartialEq, Eq)]
enum Mode {
    Embedding,
    Isomorphism,
}

struct Search<'a> {
    small: &'a WeightedGraph,
    big: &'a WeightedGraph,
    mode: Mode,
    order: Vec<VertexId>,
    targets: Vec<VertexId>,
    assigned: Vec<VertexId>,
    used: BTreeSet<VertexId>,
    limit: usize,
    found: Vec<BTreeMap<VertexId, VertexId>>,
}

impl Search<'_> {
    fn compatible(&self, s: VertexId, t: VertexId) -> bool {
        if self.used.contains(&t) || self.small.label(s) != self.big.label(t) {
            return false;
        }
        let sv = self.small.neighbors(s).len();
        let tv = self.big.neighbors(t).len();
        match self.mode {
            Mode::Embedding if tv < sv => return false,
            Mode::Isomorphism if tv != sv => return false,
            _ => {}
        }
        for (i, &prev) in self.order[..self.assigned.len()].iter().enumerate() {
            let small_edge = self.small.has_edge(s, prev);
            let big_edge = self.big.has_edge(t, self.assigned[i]);
            if small_edge && !big_edge {
                return false;
            }
            if self.mode == Mode::Isomorphism && big_edge && !small_edge {
                return false;
            }
        }
        true
    }

    fn run(&mut self) {
        if self.found.len() >= self.limit {
            return;
        }
        let depth = self.assigned.len();
        if depth == self.order.len() {
            self.found.push(self.order.iter().copied().zip(self.assigned.iter().copied()).collect());
            return;
        }
        let s = self.order[depth];
        for i in 0..self.targets.len() {
            let t = self.targets[i];
            if !self.compatible(s, t) {
                continue;
            }
            self.assigned.push(t);
            self.used.insert(t);
            self.run();
            self.used.remove(&t);
            self.assigned.pop();
            if self.found.len() >= self.limit {
                return;
            }
        }
    }
}

fn search(
    small: &WeightedGraph,
    big: &WeightedGraph,
    mode: Mode,
    limit: usize,
) -> Vec<BTreeMap<VertexId, VertexId>> {
    if small.vertex_count() > big.vertex_count() || limit == 0 {
        return Vec::new();
    }
    // Sources and targets both run in ascending id order, so solutions come
    // out in lexicographic order of their (source, target) pair lists.
    let mut s = Search {
        small,
        big,
        mode,
        order: small.vertex_ids().collect(),
        targets: big.vertex_ids().collect(),
        assigned: Vec::new(),
        used: BTreeSet::new(),
        limit,
        found: Vec::new(),
    };
    s.run();
    s.found
}

/// Up to `limit` embeddings of `small` into `big`, in lexicographic order.
pub fn find_embeddings(small: &WeightedGraph, big: &WeightedGraph, limit: usize) -> Vec<Embedding> {
    search(small, big, Mode::Embedding, limit)
        .into_iter()
        .map(|map| Embedding { source: small.clone(), target: big.clone(), map })
        .collect()
}

/// The lexicographically least isomorphism `a → b`, if any.
pub fn find_isomorphism(a: &WeightedGraph, b: &WeightedGraph) -> Option<Embedding> {
    if a.vertex_count() != b.vertex_count() || a.edge_count() != b.edge_count() {
        return None;
    }
    search(a, b, Mode::Isomorphism, 1)
        .pop()
        .map(|map| Embedding { source: a.clone(), target: b.clone(), map })
}

pub fn are_isomorphic(a: &WeightedGraph, b: &WeightedGraph) -> bool {
    find_isomorphism(a, b).is_some()
}
