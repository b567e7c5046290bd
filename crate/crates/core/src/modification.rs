//! Simple modifications (blowups) and their inverses, sequences of them,
//! strict and total transforms, and induced modifications along embeddings.
//!
//! Vertex ids persist through every step, so the strict transform of a
//! vertex is the vertex with the same id. It is still recorded explicitly in
//! [`TransformMaps`].

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use thiserror::Error;

use crate::embed::{check_embedding, Embedding, EmbeddingError};
use crate::graph::{ordered, GraphError, Label, VertexId, WeightedGraph};

#[derive(Clone, Debug, PartialEq, Eq, Error)]
pub enum ModError {
    #[error(transparent)]
    Graph(#[from] GraphError),
    #[error(transparent)]
    Embedding(#[from] EmbeddingError),
    #[error("id {0} is already a vertex")]
    IdCollision(VertexId),
    #[error("step {index} cannot be applied: {source}")]
    Step { index: usize, source: Box<ModError> },
    #[error("vertex {vertex} has label {label}, blowdown needs (0,1)")]
    WrongLabel { vertex: VertexId, label: Label },
    #[error("vertex {vertex} has valency {valency}, blowdown needs 1 or 2")]
    BadValency { vertex: VertexId, valency: usize },
    #[error("neighbor {neighbor} of {vertex} has weight 1")]
    NeighborWeightOne { vertex: VertexId, neighbor: VertexId },
    #[error("neighbors {0} and {1} are already adjacent")]
    NeighborsAdjacent(VertexId, VertexId),
    #[error("subgraph is not connected")]
    NotConnected,
    #[error("not a subgraph: {0}")]
    NotASubgraph(String),
    #[error("embedding source differs from the base of the sequence")]
    BaseMismatch,
}

/// Center of a simple modification.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Center {
    Vertex(VertexId),
    /// Stored with the smaller id first.
    Edge(VertexId, VertexId),
}

impl Center {
    pub fn edge(a: VertexId, b: VertexId) -> Self {
        let (a, b) = ordered(a, b);
        Center::Edge(a, b)
    }

    pub fn map(self, f: impl Fn(VertexId) -> VertexId) -> Center {
        match self {
            Center::Vertex(v) => Center::Vertex(f(v)),
            Center::Edge(a, b) => Center::edge(f(a), f(b)),
        }
    }
}

impl fmt::Display for Center {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Center::Vertex(v) => write!(f, "vertex@{v}"),
            Center::Edge(a, b) => write!(f, "edge@<{a},{b}>"),
        }
    }
}

/// One simple modification; `new_id` names the created `(0,1)` vertex.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct ModStep {
    pub center: Center,
    pub new_id: VertexId,
}

impl ModStep {
    pub fn vertex(v: VertexId, new_id: VertexId) -> Self {
        ModStep { center: Center::Vertex(v), new_id }
    }

    pub fn edge(a: VertexId, b: VertexId, new_id: VertexId) -> Self {
        ModStep { center: Center::edge(a, b), new_id }
    }

    pub fn apply(&self, g: &WeightedGraph) -> Result<WeightedGraph, ModError> {
        match self.center {
            Center::Vertex(v) => blowup_vertex(g, v, self.new_id),
            Center::Edge(a, b) => blowup_edge(g, (a, b), self.new_id),
        }
    }
}

impl fmt::Display for ModStep {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}->{}", self.center, self.new_id)
    }
}

fn bump(g: &mut WeightedGraph, v: VertexId) -> Result<(), GraphError> {
    let l = g.label(v).ok_or(GraphError::UnknownVertex(v))?;
    g.set_label(v, Label::new(l.genus, l.weight + 1))
}

/// Simple modification centered at the vertex `v`.
pub fn blowup_vertex(g: &WeightedGraph, v: VertexId, new_id: VertexId) -> Result<WeightedGraph, ModError> {
    if !g.contains(v) {
        return Err(GraphError::UnknownVertex(v).into());
    }
    if g.contains(new_id) {
        return Err(ModError::IdCollision(new_id));
    }
    let mut out = g.clone();
    bump(&mut out, v)?;
    out.add_vertex(new_id, Label::EXCEPTIONAL)?;
    out.add_edge(v, new_id)?;
    Ok(out)
}

/// Simple modification centered at the edge `⟨a, b⟩`.
pub fn blowup_edge(
    g: &WeightedGraph,
    (a, b): (VertexId, VertexId),
    new_id: VertexId,
) -> Result<WeightedGraph, ModError> {
    if !g.has_edge(a, b) {
        return Err(GraphError::NotAnEdge(a, b).into());
    }
    if g.contains(new_id) {
        return Err(ModError::IdCollision(new_id));
    }
    let mut out = g.clone();
    out.remove_edge(a, b)?;
    bump(&mut out, a)?;
    bump(&mut out, b)?;
    out.add_vertex(new_id, Label::EXCEPTIONAL)?;
    out.add_edge(a, new_id)?;
    out.add_edge(b, new_id)?;
    Ok(out)
}

/// A finite sequence of simple modifications `Γ' ⇝ Γ` with `Γ = base`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ModSequence {
    pub base: WeightedGraph,
    pub steps: Vec<ModStep>,
}

/// Result graph of a sequence together with the strict transform map.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TransformMaps {
    pub result: WeightedGraph,
    pub strict: BTreeMap<VertexId, VertexId>,
}

impl ModSequence {
    pub fn new(base: WeightedGraph, steps: Vec<ModStep>) -> Self {
        ModSequence { base, steps }
    }

    pub fn trivial(base: WeightedGraph) -> Self {
        ModSequence { base, steps: Vec::new() }
    }

    pub fn is_nontrivial(&self) -> bool {
        !self.steps.is_empty()
    }

    pub fn len(&self) -> usize {
        self.steps.len()
    }

    pub fn is_empty(&self) -> bool {
        self.steps.is_empty()
    }

    /// Folds the steps over the base graph.
    pub fn apply(&self) -> Result<TransformMaps, ModError> {
        let mut g = self.base.clone();
        for (index, step) in self.steps.iter().enumerate() {
            g = step
                .apply(&g)
                .map_err(|e| ModError::Step { index, source: Box::new(e) })?;
        }
        let strict = self.base.vertex_ids().map(|v| (v, v)).collect();
        Ok(TransformMaps { result: g, strict })
    }

    /// The graphs `Γ_0 = base, Γ_1, ..., Γ_l` produced along the way.
    pub fn stages(&self) -> Result<Vec<WeightedGraph>, ModError> {
        let mut out = vec![self.base.clone()];
        for (index, step) in self.steps.iter().enumerate() {
            let next = step
                .apply(out.last().unwrap())
                .map_err(|e| ModError::Step { index, source: Box::new(e) })?;
            out.push(next);
        }
        Ok(out)
    }
}

pub fn apply_sequence(seq: &ModSequence) -> Result<TransformMaps, ModError> {
    seq.apply()
}

/// Builds a sequence step by step, allocating each new id as one more than
/// the largest id seen so far.
#[derive(Clone, Debug)]
pub struct SequenceBuilder {
    base: WeightedGraph,
    current: WeightedGraph,
    steps: Vec<ModStep>,
}

impl SequenceBuilder {
    pub fn new(base: WeightedGraph) -> Self {
        SequenceBuilder { current: base.clone(), base, steps: Vec::new() }
    }

    pub fn current(&self) -> &WeightedGraph {
        &self.current
    }

    pub fn push(&mut self, center: Center) -> Result<VertexId, ModError> {
        let step = ModStep { center, new_id: self.current.next_id() };
        self.current = step.apply(&self.current)?;
        self.steps.push(step);
        Ok(step.new_id)
    }

    pub fn vertex(&mut self, v: VertexId) -> Result<VertexId, ModError> {
        self.push(Center::Vertex(v))
    }

    pub fn edge(&mut self, a: VertexId, b: VertexId) -> Result<VertexId, ModError> {
        self.push(Center::edge(a, b))
    }

    pub fn finish(self) -> (ModSequence, WeightedGraph) {
        (ModSequence { base: self.base, steps: self.steps }, self.current)
    }
}

/// A vertex subset plus a subset of the edges between them.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash)]
pub struct Subgraph {
    pub vertices: BTreeSet<VertexId>,
    pub edges: BTreeSet<(VertexId, VertexId)>,
}

impl Subgraph {
    pub fn whole(g: &WeightedGraph) -> Self {
        Subgraph { vertices: g.vertex_ids().collect(), edges: g.edges().collect() }
    }

    /// Induced subgraph on `vertices`; unknown ids are ignored.
    pub fn induced(g: &WeightedGraph, vertices: impl IntoIterator<Item = VertexId>) -> Self {
        let vertices: BTreeSet<_> = vertices.into_iter().filter(|&v| g.contains(v)).collect();
        let edges = g
            .edges()
            .filter(|(a, b)| vertices.contains(a) && vertices.contains(b))
            .collect();
        Subgraph { vertices, edges }
    }

    pub fn from_parts(
        vertices: impl IntoIterator<Item = VertexId>,
        edges: impl IntoIterator<Item = (VertexId, VertexId)>,
    ) -> Self {
        Subgraph {
            vertices: vertices.into_iter().collect(),
            edges: edges.into_iter().map(|(a, b)| ordered(a, b)).collect(),
        }
    }

    pub fn check_in(&self, g: &WeightedGraph) -> Result<(), ModError> {
        for &v in &self.vertices {
            if !g.contains(v) {
                return Err(ModError::NotASubgraph(format!("{v} is not a vertex")));
            }
        }
        for &(a, b) in &self.edges {
            if !self.vertices.contains(&a) || !self.vertices.contains(&b) {
                return Err(ModError::NotASubgraph(format!("edge {a}-{b} leaves the vertex set")));
            }
            if !g.has_edge(a, b) {
                return Err(ModError::NotASubgraph(format!("{a}-{b} is not an edge")));
            }
        }
        Ok(())
    }

    /// Connected through its own edges. The empty subgraph is not.
    pub fn is_connected(&self) -> bool {
        let Some(&start) = self.vertices.iter().next() else {
            return false;
        };
        let mut seen = BTreeSet::from([start]);
        let mut stack = vec![start];
        while let Some(v) = stack.pop() {
            for &(a, b) in &self.edges {
                let w = if a == v {
                    b
                } else if b == v {
                    a
                } else {
                    continue;
                };
                if seen.insert(w) {
                    stack.push(w);
                }
            }
        }
        seen.len() == self.vertices.len()
    }

    /// Image under an embedding whose source contains this subgraph.
    pub fn image(&self, emb: &Embedding) -> Subgraph {
        Subgraph::from_parts(
            self.vertices.iter().map(|&v| emb.apply(v).expect("vertex outside embedding source")),
            self.edges.iter().map(|&(a, b)| (emb.apply(a).unwrap(), emb.apply(b).unwrap())),
        )
    }

    /// Total transform through a single simple modification.
    fn transform_step(&mut self, step: &ModStep) {
        let n = step.new_id;
        match step.center {
            Center::Vertex(v) => {
                if self.vertices.contains(&v) {
                    self.vertices.insert(n);
                    self.edges.insert(ordered(v, n));
                }
            }
            Center::Edge(a, b) => {
                let ina = self.vertices.contains(&a);
                let inb = self.vertices.contains(&b);
                if ina || inb {
                    self.vertices.insert(n);
                }
                if ina && inb {
                    // Both endpoints inside: the edge (if taken) is replaced
                    // by the two new ones.
                    self.edges.remove(&(a, b));
                    self.edges.insert(ordered(a, n));
                    self.edges.insert(ordered(b, n));
                } else if ina {
                    self.edges.insert(ordered(a, n));
                } else if inb {
                    self.edges.insert(ordered(b, n));
                }
            }
        }
    }
}

/// Total transform of a connected subgraph of `seq.base` in the result.
pub fn total_transform(seq: &ModSequence, sub: &Subgraph) -> Result<Subgraph, ModError> {
    sub.check_in(&seq.base)?;
    if !sub.is_connected() {
        return Err(ModError::NotConnected);
    }
    let mut cur = sub.clone();
    for step in &seq.steps {
        cur.transform_step(step);
    }
    Ok(cur)
}

/// Vertices that admit a blowdown, ascending.
pub fn blowdown_candidates(g: &WeightedGraph) -> Vec<VertexId> {
    g.vertex_ids().filter(|&v| check_blowdown(g, v).is_ok()).collect()
}

fn check_blowdown(g: &WeightedGraph, v: VertexId) -> Result<(), ModError> {
    let label = g.label(v).ok_or(GraphError::UnknownVertex(v))?;
    if label != Label::EXCEPTIONAL {
        return Err(ModError::WrongLabel { vertex: v, label });
    }
    let link = g.neighbors(v);
    if !(1..=2).contains(&link.len()) {
        return Err(ModError::BadValency { vertex: v, valency: link.len() });
    }
    for &u in link {
        if g.label(u).unwrap().weight < 2 {
            return Err(ModError::NeighborWeightOne { vertex: v, neighbor: u });
        }
    }
    if let [u, w] = link.iter().copied().collect::<Vec<_>>()[..] {
        if g.has_edge(u, w) {
            return Err(ModError::NeighborsAdjacent(u, w));
        }
    }
    Ok(())
}

/// Contracts the `(0,1)` vertex `v`, returning the smaller graph and the
/// step that re-creates `v` from it.
pub fn blowdown(g: &WeightedGraph, v: VertexId) -> Result<(WeightedGraph, ModStep), ModError> {
    check_blowdown(g, v)?;
    let link: Vec<VertexId> = g.neighbors(v).iter().copied().collect();
    let mut out = g.clone();
    out.remove_vertex(v)?;
    for &u in &link {
        let l = out.label(u).unwrap();
        out.set_label(u, Label::new(l.genus, l.weight - 1))?;
    }
    let undone = match link[..] {
        [u] => ModStep::vertex(u, v),
        [u, w] => {
            out.add_edge(u, w)?;
            ModStep::edge(u, w, v)
        }
        _ => unreachable!(),
    };
    Ok((out, undone))
}

/// Induced modification of `Γ = emb.target` by `delta_seq` along `emb`.
///
/// Each step of `delta_seq` centered at `v` (resp. `⟨v,w⟩`) lifts to the step
/// centered at `φ(v)` (resp. `⟨φ(v),φ(w)⟩`), and the created vertices
/// correspond. Returns the lifted sequence and `φ' : Δ' ↪ Γ'`.
pub fn induced_modification(
    delta_seq: &ModSequence,
    emb: &Embedding,
) -> Result<(ModSequence, Embedding), ModError> {
    if emb.source() != &delta_seq.base {
        return Err(ModError::BaseMismatch);
    }
    emb.check()?;
    let mut delta = delta_seq.base.clone();
    let mut gamma = SequenceBuilder::new(emb.target().clone());
    let mut map = emb.map().clone();
    for (index, step) in delta_seq.steps.iter().enumerate() {
        let wrap = |e: ModError| ModError::Step { index, source: Box::new(e) };
        delta = step.apply(&delta).map_err(wrap)?;
        let lifted = step.center.map(|v| map[&v]);
        let new = gamma.push(lifted).map_err(wrap)?;
        map.insert(step.new_id, new);
    }
    let (seq, result) = gamma.finish();
    let lifted_emb = Embedding::new(delta, result, map)?;
    Ok((seq, lifted_emb))
}

#[derive(Clone, Debug, PartialEq, Eq, Error)]
#[error("pair is not compatible at Γ-step {step}: {reason}")]
pub struct Incompatible {
    pub step: usize,
    pub reason: String,
}

/// Checks that `(gamma_seq, delta_seq)` is `(phi_after, phi)`-compatible:
/// walking the Γ-steps, each one determines the next Δ-step (or none) by the
/// five compatibility rules, and the running embedding ends at `phi_after`.
pub fn check_compatible(
    gamma_seq: &ModSequence,
    delta_seq: &ModSequence,
    phi: &Embedding,
    phi_after: &Embedding,
) -> Result<(), Incompatible> {
    let fail = |step: usize, reason: String| Incompatible { step, reason };
    if phi.source() != &delta_seq.base || phi.target() != &gamma_seq.base {
        return Err(fail(0, "initial embedding does not match the bases".into()));
    }
    let mut map = phi.map().clone();
    let mut delta = delta_seq.base.clone();
    let mut gamma = gamma_seq.base.clone();
    let mut next_delta = delta_seq.steps.iter().peekable();
    for (i, gstep) in gamma_seq.steps.iter().enumerate() {
        let pre: BTreeMap<VertexId, VertexId> = map.iter().map(|(&d, &g)| (g, d)).collect();
        // The Δ-step this Γ-step forces, if any.
        let expected = match gstep.center {
            Center::Vertex(x) => pre.get(&x).map(|&v| Center::Vertex(v)),
            Center::Edge(x, y) => match (pre.get(&x), pre.get(&y)) {
                (Some(&v), Some(&w)) => {
                    if !delta.has_edge(v, w) {
                        return Err(fail(i, format!("edge {x}-{y} is not the image of a Δ-edge")));
                    }
                    Some(Center::edge(v, w))
                }
                (Some(&v), None) | (None, Some(&v)) => Some(Center::Vertex(v)),
                (None, None) => None,
            },
        };
        gamma = gstep.apply(&gamma).map_err(|e| fail(i, e.to_string()))?;
        if let Some(center) = expected {
            let dstep = next_delta
                .next()
                .ok_or_else(|| fail(i, format!("Δ-sequence ended, expected {center}")))?;
            if dstep.center != center {
                return Err(fail(i, format!("Δ-step {} does not match {}", dstep.center, center)));
            }
            delta = dstep.apply(&delta).map_err(|e| fail(i, e.to_string()))?;
            map.insert(dstep.new_id, gstep.new_id);
        }
        check_embedding(&delta, &gamma, &map).map_err(|e| fail(i, e.to_string()))?;
    }
    if next_delta.peek().is_some() {
        return Err(fail(gamma_seq.steps.len(), "unused Δ-steps remain".into()));
    }
    if &map != phi_after.map() || &delta != phi_after.source() || &gamma != phi_after.target() {
        return Err(fail(gamma_seq.steps.len(), "final embedding differs".into()));
    }
    Ok(())
}
