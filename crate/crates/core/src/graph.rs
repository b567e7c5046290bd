//! Weighted graphs: a finite simple graph whose vertices carry a
//! `(genus, weight)` pair, the weight being the opposite of the
//! self-intersection of the corresponding exceptional curve.

use std::collections::{BTreeMap, BTreeSet, VecDeque};
use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::matrix::IntersectionMatrix;

pub type VertexId = u32;

/// Per-vertex label `(g(v), e(v))`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Label {
    pub genus: u32,
    pub weight: u32,
}

impl Label {
    pub const EXCEPTIONAL: Label = Label { genus: 0, weight: 1 };

    pub fn new(genus: u32, weight: u32) -> Self {
        Label { genus, weight }
    }
}

impl fmt::Display for Label {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({},{})", self.genus, self.weight)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Error)]
pub enum GraphError {
    #[error("duplicate vertex id {0}")]
    DuplicateVertex(VertexId),
    #[error("weight < 1 at vertex {0}")]
    ZeroWeight(VertexId),
    #[error("loop at {0}")]
    Loop(VertexId),
    #[error("multi-edge {0}-{1}")]
    MultiEdge(VertexId, VertexId),
    #[error("edge endpoint {0} is not a vertex")]
    DanglingEndpoint(VertexId),
    #[error("unknown vertex {0}")]
    UnknownVertex(VertexId),
    #[error("{0}-{1} is not an edge")]
    NotAnEdge(VertexId, VertexId),
}

/// Unvalidated vertex record, as found in documents.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct VertexRecord {
    pub id: VertexId,
    pub genus: u32,
    pub weight: u32,
}

/// Raw vertex and edge lists that may violate the graph invariants.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct GraphData {
    pub vertices: Vec<VertexRecord>,
    pub edges: Vec<[VertexId; 2]>,
}

/// Checks every invariant of a weighted graph and reports the first
/// violation found, in the order: vertices (duplicates, weights), then edges
/// (loops, dangling endpoints, repeats).
pub fn validate(data: &GraphData) -> Result<(), GraphError> {
    let mut ids = BTreeSet::new();
    for v in &data.vertices {
        if !ids.insert(v.id) {
            return Err(GraphError::DuplicateVertex(v.id));
        }
        if v.weight < 1 {
            return Err(GraphError::ZeroWeight(v.id));
        }
    }
    let mut seen = BTreeSet::new();
    for &[a, b] in &data.edges {
        if a == b {
            return Err(GraphError::Loop(a));
        }
        for x in [a, b] {
            if !ids.contains(&x) {
                return Err(GraphError::DanglingEndpoint(x));
            }
        }
        if !seen.insert(ordered(a, b)) {
            let (a, b) = ordered(a, b);
            return Err(GraphError::MultiEdge(a, b));
        }
    }
    Ok(())
}

pub(crate) fn ordered(a: VertexId, b: VertexId) -> (VertexId, VertexId) {
    if a <= b {
        (a, b)
    } else {
        (b, a)
    }
}

/// A finite simple graph with `(genus, weight)` labels.
///
/// Vertex ids are stable: equality compares ids, labels and edges exactly,
/// so two isomorphic graphs with different ids are not equal.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash)]
pub struct WeightedGraph {
    labels: BTreeMap<VertexId, Label>,
    adj: BTreeMap<VertexId, BTreeSet<VertexId>>,
}

impl WeightedGraph {
    pub fn new() -> Self {
        Self::default()
    }

    /// The graph with one vertex `0` of weight `(0,1)`.
    pub fn point() -> Self {
        let mut g = Self::new();
        g.add_vertex(0, Label::EXCEPTIONAL).unwrap();
        g
    }

    pub fn from_data(data: &GraphData) -> Result<Self, GraphError> {
        validate(data)?;
        let mut g = Self::new();
        for v in &data.vertices {
            g.add_vertex(v.id, Label::new(v.genus, v.weight))?;
        }
        for &[a, b] in &data.edges {
            g.add_edge(a, b)?;
        }
        Ok(g)
    }

    /// Canonical raw form: vertices by ascending id, edges `(min, max)` in
    /// lexicographic order.
    pub fn to_data(&self) -> GraphData {
        GraphData {
            vertices: self
                .labels
                .iter()
                .map(|(&id, l)| VertexRecord { id, genus: l.genus, weight: l.weight })
                .collect(),
            edges: self.edges().map(|(a, b)| [a, b]).collect(),
        }
    }

    /// Builds a graph from `(id, genus, weight)` triples and edge pairs.
    pub fn from_parts(
        vertices: &[(VertexId, u32, u32)],
        edges: &[(VertexId, VertexId)],
    ) -> Result<Self, GraphError> {
        let data = GraphData {
            vertices: vertices
                .iter()
                .map(|&(id, genus, weight)| VertexRecord { id, genus, weight })
                .collect(),
            edges: edges.iter().map(|&(a, b)| [a, b]).collect(),
        };
        Self::from_data(&data)
    }

    pub fn add_vertex(&mut self, id: VertexId, label: Label) -> Result<(), GraphError> {
        if label.weight < 1 {
            return Err(GraphError::ZeroWeight(id));
        }
        if self.labels.contains_key(&id) {
            return Err(GraphError::DuplicateVertex(id));
        }
        self.labels.insert(id, label);
        self.adj.insert(id, BTreeSet::new());
        Ok(())
    }

    pub fn add_edge(&mut self, a: VertexId, b: VertexId) -> Result<(), GraphError> {
        if a == b {
            return Err(GraphError::Loop(a));
        }
        for x in [a, b] {
            if !self.labels.contains_key(&x) {
                return Err(GraphError::DanglingEndpoint(x));
            }
        }
        if !self.adj.get_mut(&a).unwrap().insert(b) {
            let (a, b) = ordered(a, b);
            return Err(GraphError::MultiEdge(a, b));
        }
        self.adj.get_mut(&b).unwrap().insert(a);
        Ok(())
    }

    pub fn remove_edge(&mut self, a: VertexId, b: VertexId) -> Result<(), GraphError> {
        if !self.has_edge(a, b) {
            return Err(GraphError::NotAnEdge(a, b));
        }
        self.adj.get_mut(&a).unwrap().remove(&b);
        self.adj.get_mut(&b).unwrap().remove(&a);
        Ok(())
    }

    /// Removes `v` together with its incident edges.
    pub fn remove_vertex(&mut self, v: VertexId) -> Result<Label, GraphError> {
        let label = self.labels.remove(&v).ok_or(GraphError::UnknownVertex(v))?;
        for w in self.adj.remove(&v).unwrap() {
            self.adj.get_mut(&w).unwrap().remove(&v);
        }
        Ok(label)
    }

    pub fn set_label(&mut self, v: VertexId, label: Label) -> Result<(), GraphError> {
        if label.weight < 1 {
            return Err(GraphError::ZeroWeight(v));
        }
        let slot = self.labels.get_mut(&v).ok_or(GraphError::UnknownVertex(v))?;
        *slot = label;
        Ok(())
    }

    pub fn vertex_count(&self) -> usize {
        self.labels.len()
    }

    pub fn edge_count(&self) -> usize {
        self.adj.values().map(BTreeSet::len).sum::<usize>() / 2
    }

    pub fn is_empty(&self) -> bool {
        self.labels.is_empty()
    }

    pub fn contains(&self, v: VertexId) -> bool {
        self.labels.contains_key(&v)
    }

    pub fn label(&self, v: VertexId) -> Option<Label> {
        self.labels.get(&v).copied()
    }

    /// Vertex ids in ascending order.
    pub fn vertex_ids(&self) -> impl Iterator<Item = VertexId> + '_ {
        self.labels.keys().copied()
    }

    pub fn vertices(&self) -> impl Iterator<Item = (VertexId, Label)> + '_ {
        self.labels.iter().map(|(&id, &l)| (id, l))
    }

    /// Edges as `(min, max)` pairs in lexicographic order.
    pub fn edges(&self) -> impl Iterator<Item = (VertexId, VertexId)> + '_ {
        self.adj
            .iter()
            .flat_map(|(&a, ns)| ns.range(a + 1..).map(move |&b| (a, b)))
    }

    pub fn has_edge(&self, a: VertexId, b: VertexId) -> bool {
        self.adj.get(&a).is_some_and(|ns| ns.contains(&b))
    }

    /// The link `L(v)`: the set of neighbours of `v`.
    pub fn link(&self, v: VertexId) -> Result<&BTreeSet<VertexId>, GraphError> {
        self.adj.get(&v).ok_or(GraphError::UnknownVertex(v))
    }

    pub fn valency(&self, v: VertexId) -> Result<usize, GraphError> {
        self.link(v).map(BTreeSet::len)
    }

    pub(crate) fn neighbors(&self, v: VertexId) -> &BTreeSet<VertexId> {
        &self.adj[&v]
    }

    pub fn max_id(&self) -> Option<VertexId> {
        self.labels.keys().next_back().copied()
    }

    /// Smallest id strictly above every vertex id.
    pub fn next_id(&self) -> VertexId {
        self.max_id().map_or(0, |m| m + 1)
    }

    pub fn weight_sum(&self) -> u64 {
        self.labels.values().map(|l| u64::from(l.weight)).sum()
    }

    /// Empty graphs count as connected.
    pub fn is_connected(&self) -> bool {
        match self.labels.keys().next() {
            None => true,
            Some(&start) => self.reachable_from(start).len() == self.vertex_count(),
        }
    }

    fn reachable_from(&self, start: VertexId) -> BTreeSet<VertexId> {
        let mut seen = BTreeSet::from([start]);
        let mut queue = VecDeque::from([start]);
        while let Some(v) = queue.pop_front() {
            for &w in &self.adj[&v] {
                if seen.insert(w) {
                    queue.push_back(w);
                }
            }
        }
        seen
    }

    /// Least number of edges on a path from `x` to `y`, or `None` when `y`
    /// is unreachable.
    pub fn edge_distance(&self, x: VertexId, y: VertexId) -> Result<Option<usize>, GraphError> {
        for v in [x, y] {
            if !self.contains(v) {
                return Err(GraphError::UnknownVertex(v));
            }
        }
        let mut dist = BTreeMap::from([(x, 0usize)]);
        let mut queue = VecDeque::from([x]);
        while let Some(v) = queue.pop_front() {
            let d = dist[&v];
            if v == y {
                return Ok(Some(d));
            }
            for &w in &self.adj[&v] {
                if let std::collections::btree_map::Entry::Vacant(e) = dist.entry(w) {
                    e.insert(d + 1);
                    queue.push_back(w);
                }
            }
        }
        Ok(None)
    }

    /// Vertex sets of the connected components, ordered by smallest id.
    pub fn components(&self) -> Vec<BTreeSet<VertexId>> {
        let mut out = Vec::new();
        let mut done = BTreeSet::new();
        for &v in self.labels.keys() {
            if done.contains(&v) {
                continue;
            }
            let comp = self.reachable_from(v);
            done.extend(comp.iter().copied());
            out.push(comp);
        }
        out
    }

    pub fn is_forest(&self) -> bool {
        self.edge_count() + self.components().len() == self.vertex_count()
    }

    /// The subgraph spanned by `keep`, with every edge between kept vertices.
    pub fn induced(&self, keep: &BTreeSet<VertexId>) -> Result<WeightedGraph, GraphError> {
        let mut g = WeightedGraph::new();
        for &v in keep {
            let l = self.label(v).ok_or(GraphError::UnknownVertex(v))?;
            g.add_vertex(v, l)?;
        }
        for (a, b) in self.edges() {
            if keep.contains(&a) && keep.contains(&b) {
                g.add_edge(a, b)?;
            }
        }
        Ok(g)
    }

    pub fn intersection_matrix(&self) -> IntersectionMatrix {
        IntersectionMatrix::of(self)
    }

    /// Returns a copy whose ids are replaced through `relabel`, which must be
    /// injective on the vertex set.
    pub fn relabeled(
        &self,
        relabel: impl Fn(VertexId) -> VertexId,
    ) -> Result<WeightedGraph, GraphError> {
        let mut g = WeightedGraph::new();
        for (v, l) in self.vertices() {
            g.add_vertex(relabel(v), l)?;
        }
        for (a, b) in self.edges() {
            g.add_edge(relabel(a), relabel(b))?;
        }
        Ok(g)
    }
}

impl fmt::Display for WeightedGraph {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let vs: Vec<String> = self.vertices().map(|(v, l)| format!("{v}:{l}")).collect();
        let es: Vec<String> = self.edges().map(|(a, b)| format!("{a}-{b}")).collect();
        write!(f, "{{{}}} [{}]", vs.join(" "), es.join(" "))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn chain3() -> WeightedGraph {
        WeightedGraph::from_parts(&[(0, 0, 2), (1, 0, 2), (2, 0, 2)], &[(0, 1), (1, 2)]).unwrap()
    }

    #[test]
    fn validate_examples() {
        let ok = GraphData {
            vertices: vec![VertexRecord { id: 0, genus: 0, weight: 1 }],
            edges: vec![],
        };
        assert_eq!(validate(&ok), Ok(()));

        let looped = GraphData { edges: vec![[0, 0]], ..ok.clone() };
        let err = validate(&looped).unwrap_err();
        assert_eq!(err, GraphError::Loop(0));
        assert_eq!(err.to_string(), "loop at 0");

        let weightless = GraphData {
            vertices: vec![VertexRecord { id: 0, genus: 0, weight: 0 }],
            edges: vec![],
        };
        assert!(validate(&weightless).unwrap_err().to_string().contains("weight < 1"));
    }

    #[test]
    fn validate_reports_structure_errors() {
        let v = |id| VertexRecord { id, genus: 0, weight: 2 };
        let dup = GraphData { vertices: vec![v(0), v(0)], edges: vec![] };
        assert_eq!(validate(&dup), Err(GraphError::DuplicateVertex(0)));
        let multi = GraphData { vertices: vec![v(0), v(1)], edges: vec![[0, 1], [1, 0]] };
        assert_eq!(validate(&multi), Err(GraphError::MultiEdge(0, 1)));
        let dangling = GraphData { vertices: vec![v(0)], edges: vec![[0, 4]] };
        assert_eq!(validate(&dangling), Err(GraphError::DanglingEndpoint(4)));
    }

    #[test]
    fn link_and_valency() {
        let p = WeightedGraph::point();
        assert!(p.link(0).unwrap().is_empty());
        assert_eq!(p.valency(0).unwrap(), 0);
        let c = chain3();
        assert_eq!(c.link(1).unwrap(), &BTreeSet::from([0, 2]));
        assert_eq!(c.valency(1).unwrap(), 2);
        assert_eq!(c.link(0).unwrap(), &BTreeSet::from([1]));
        assert_eq!(c.valency(0).unwrap(), 1);
        assert_eq!(c.valency(9), Err(GraphError::UnknownVertex(9)));
    }

    #[test]
    fn distances() {
        let c = chain3();
        assert_eq!(c.edge_distance(0, 2).unwrap(), Some(2));
        assert_eq!(c.edge_distance(1, 1).unwrap(), Some(0));
        assert!(c.is_connected());

        let two = WeightedGraph::from_parts(&[(0, 0, 1), (1, 0, 1)], &[]).unwrap();
        assert_eq!(two.edge_distance(0, 1).unwrap(), None);
        assert!(!two.is_connected());
        assert_eq!(two.components().len(), 2);
        assert!(c.edge_distance(0, 7).is_err());
    }

    #[test]
    fn canonical_data_is_sorted() {
        let g = WeightedGraph::from_parts(&[(5, 0, 1), (2, 1, 3)], &[(5, 2)]).unwrap();
        let d = g.to_data();
        assert_eq!(d.vertices[0].id, 2);
        assert_eq!(d.edges, vec![[2, 5]]);
        assert_eq!(WeightedGraph::from_data(&d).unwrap(), g);
    }

    #[test]
    fn constructors_enforce_invariants() {
        let mut g = WeightedGraph::point();
        assert_eq!(g.add_edge(0, 0), Err(GraphError::Loop(0)));
        assert_eq!(g.add_vertex(0, Label::new(0, 3)), Err(GraphError::DuplicateVertex(0)));
        assert_eq!(g.add_vertex(1, Label::new(0, 0)), Err(GraphError::ZeroWeight(1)));
        g.add_vertex(1, Label::new(0, 2)).unwrap();
        g.add_edge(0, 1).unwrap();
        assert_eq!(g.add_edge(1, 0), Err(GraphError::MultiEdge(0, 1)));
        assert!(g.is_forest());
    }
}
