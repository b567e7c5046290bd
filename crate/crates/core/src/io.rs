//! JSON documents for graphs and witnesses.
//!
//! Graph documents are canonical: vertices sorted by id, edges as
//! `[min, max]` pairs in lexicographic order, pretty-printed with a trailing
//! newline. Serializing a parsed canonical document reproduces it byte for
//! byte.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::classify::{RegularityWitness, SandwichWitness};
use crate::embed::{Embedding, EmbeddingError};
use crate::graph::{GraphData, GraphError, VertexId, VertexRecord, WeightedGraph};
use crate::modification::{Center, ModSequence, ModStep};
use crate::selfsim::{Extraction, SelfSimWitness};

pub const FORMAT_VERSION: &str = "1";

#[derive(Debug, Error)]
pub enum FormatError {
    #[error("syntax error at line {line}, column {column}: {message}")]
    Syntax { line: usize, column: usize, message: String },
    #[error("unsupported format_version {0:?}")]
    Version(String),
    #[error("{0}")]
    Invalid(#[from] GraphError),
    #[error("bad step {index}: {message}")]
    Step { index: usize, message: String },
    #[error("bad embedding: {0}")]
    Embedding(#[from] EmbeddingError),
    #[error("{0}")]
    Witness(String),
}

impl From<serde_json::Error> for FormatError {
    fn from(e: serde_json::Error) -> Self {
        FormatError::Syntax { line: e.line(), column: e.column(), message: e.to_string() }
    }
}

fn check_version(v: &str) -> Result<(), FormatError> {
    if v == FORMAT_VERSION {
        Ok(())
    } else {
        Err(FormatError::Version(v.to_string()))
    }
}

/// Graph payload shared by every document kind.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GraphBody {
    pub vertices: Vec<VertexRecord>,
    pub edges: Vec<[VertexId; 2]>,
}

impl GraphBody {
    pub fn of(g: &WeightedGraph) -> Self {
        let d = g.to_data();
        GraphBody { vertices: d.vertices, edges: d.edges }
    }

    pub fn data(&self) -> GraphData {
        GraphData { vertices: self.vertices.clone(), edges: self.edges.clone() }
    }

    pub fn graph(&self) -> Result<WeightedGraph, GraphError> {
        WeightedGraph::from_data(&self.data())
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GraphDocument {
    pub format_version: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub name: Option<String>,
    pub vertices: Vec<VertexRecord>,
    pub edges: Vec<[VertexId; 2]>,
}

impl GraphDocument {
    pub fn new(g: &WeightedGraph, name: Option<String>) -> Self {
        let body = GraphBody::of(g);
        GraphDocument {
            format_version: FORMAT_VERSION.into(),
            name,
            vertices: body.vertices,
            edges: body.edges,
        }
    }

    /// Parses without checking graph invariants.
    pub fn parse_raw(text: &str) -> Result<Self, FormatError> {
        let doc: GraphDocument = serde_json::from_str(text)?;
        check_version(&doc.format_version)?;
        Ok(doc)
    }

    pub fn data(&self) -> GraphData {
        GraphData { vertices: self.vertices.clone(), edges: self.edges.clone() }
    }

    pub fn graph(&self) -> Result<WeightedGraph, GraphError> {
        WeightedGraph::from_data(&self.data())
    }

    /// Canonical text of the graph this document describes.
    pub fn to_text(&self) -> Result<String, FormatError> {
        let canonical = GraphDocument::new(&self.graph()?, self.name.clone());
        Ok(to_pretty(&canonical))
    }
}

fn to_pretty<T: Serialize>(v: &T) -> String {
    let mut s = serde_json::to_string_pretty(v).expect("documents always serialize");
    s.push('\n');
    s
}

/// Parses a graph document, rejecting any invariant violation.
pub fn parse(text: &str) -> Result<WeightedGraph, FormatError> {
    Ok(GraphDocument::parse_raw(text)?.graph()?)
}

pub fn serialize(g: &WeightedGraph) -> String {
    to_pretty(&GraphDocument::new(g, None))
}

pub fn serialize_named(g: &WeightedGraph, name: &str) -> String {
    to_pretty(&GraphDocument::new(g, Some(name.to_string())))
}

/// `{kind, center, new_id}`; `center` holds one id for a vertex step and two
/// for an edge step.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct StepRecord {
    pub kind: StepKind,
    pub center: Vec<VertexId>,
    pub new_id: VertexId,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum StepKind {
    Vertex,
    Edge,
}

impl StepRecord {
    pub fn of(step: &ModStep) -> Self {
        match step.center {
            Center::Vertex(v) => StepRecord { kind: StepKind::Vertex, center: vec![v], new_id: step.new_id },
            Center::Edge(a, b) => StepRecord { kind: StepKind::Edge, center: vec![a, b], new_id: step.new_id },
        }
    }

    pub fn step(&self, index: usize) -> Result<ModStep, FormatError> {
        let bad = |message: &str| FormatError::Step { index, message: message.to_string() };
        match (self.kind, &self.center[..]) {
            (StepKind::Vertex, &[v]) => Ok(ModStep::vertex(v, self.new_id)),
            (StepKind::Edge, &[a, b]) => Ok(ModStep::edge(a, b, self.new_id)),
            (StepKind::Vertex, _) => Err(bad("vertex step needs exactly one center id")),
            (StepKind::Edge, _) => Err(bad("edge step needs exactly two center ids")),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SequenceRecord {
    pub base: GraphBody,
    pub steps: Vec<StepRecord>,
}

impl SequenceRecord {
    pub fn of(seq: &ModSequence) -> Self {
        SequenceRecord { base: GraphBody::of(&seq.base), steps: seq.steps.iter().map(StepRecord::of).collect() }
    }

    pub fn sequence(&self) -> Result<ModSequence, FormatError> {
        let steps = self.steps.iter().enumerate().map(|(i, s)| s.step(i)).collect::<Result<_, _>>()?;
        Ok(ModSequence::new(self.base.graph()?, steps))
    }
}

fn pairs(map: &BTreeMap<VertexId, VertexId>) -> Vec<[VertexId; 2]> {
    map.iter().map(|(&a, &b)| [a, b]).collect()
}

fn unpairs(pairs: &[[VertexId; 2]]) -> Result<BTreeMap<VertexId, VertexId>, FormatError> {
    let mut map = BTreeMap::new();
    for &[a, b] in pairs {
        if map.insert(a, b).is_some() {
            return Err(FormatError::Witness(format!("vertex {a} is mapped twice")));
        }
    }
    Ok(map)
}

/// Witness and result documents, tagged by `kind`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case", deny_unknown_fields)]
pub enum WitnessDocument {
    SelfSimilar {
        format_version: String,
        base: GraphBody,
        steps: Vec<StepRecord>,
        embedding: Vec<[VertexId; 2]>,
    },
    Sandwich {
        format_version: String,
        input: GraphBody,
        leaves: Vec<[u64; 2]>,
        augmented: GraphBody,
        blowdown_order: Vec<VertexId>,
        construction: SequenceRecord,
        iso: Vec<[VertexId; 2]>,
        embedding: Vec<[VertexId; 2]>,
    },
    Extraction {
        format_version: String,
        base: GraphBody,
        k: usize,
        regular: GraphBody,
        embedding: Vec<[VertexId; 2]>,
        blowdown_order: Vec<VertexId>,
    },
}

impl WitnessDocument {
    pub fn self_similar(w: &SelfSimWitness) -> Self {
        WitnessDocument::SelfSimilar {
            format_version: FORMAT_VERSION.into(),
            base: GraphBody::of(w.base()),
            steps: w.seq.steps.iter().map(StepRecord::of).collect(),
            embedding: pairs(&w.map),
        }
    }

    pub fn sandwich(input: &WeightedGraph, w: &SandwichWitness) -> Self {
        WitnessDocument::Sandwich {
            format_version: FORMAT_VERSION.into(),
            input: GraphBody::of(input),
            leaves: w.leaves.iter().map(|(&v, &n)| [u64::from(v), n as u64]).collect(),
            augmented: GraphBody::of(&w.augmented),
            blowdown_order: w.regularity.blowdown_order.clone(),
            construction: SequenceRecord::of(&w.regularity.construction),
            iso: pairs(w.regularity.iso.map()),
            embedding: pairs(w.embedding.map()),
        }
    }

    pub fn extraction(base: &WeightedGraph, ex: &Extraction) -> Self {
        WitnessDocument::Extraction {
            format_version: FORMAT_VERSION.into(),
            base: GraphBody::of(base),
            k: ex.k,
            regular: GraphBody::of(&ex.regular),
            embedding: pairs(ex.embedding.map()),
            blowdown_order: ex.regularity.blowdown_order.clone(),
        }
    }

    pub fn parse(text: &str) -> Result<Self, FormatError> {
        let doc: WitnessDocument = serde_json::from_str(text)?;
        let version = match &doc {
            WitnessDocument::SelfSimilar { format_version, .. }
            | WitnessDocument::Sandwich { format_version, .. }
            | WitnessDocument::Extraction { format_version, .. } => format_version,
        };
        check_version(version)?;
        Ok(doc)
    }

    pub fn to_text(&self) -> String {
        to_pretty(self)
    }

    pub fn kind(&self) -> &'static str {
        match self {
            WitnessDocument::SelfSimilar { .. } => "self-similar",
            WitnessDocument::Sandwich { .. } => "sandwich",
            WitnessDocument::Extraction { .. } => "extraction",
        }
    }

    /// The self-similarity witness, unverified.
    pub fn to_self_similar(&self) -> Result<SelfSimWitness, FormatError> {
        let WitnessDocument::SelfSimilar { base, steps, embedding, .. } = self else {
            return Err(FormatError::Witness(format!("expected a self-similar witness, found {}", self.kind())));
        };
        let seq = SequenceRecord { base: base.clone(), steps: steps.clone() }.sequence()?;
        Ok(SelfSimWitness { seq, map: unpairs(embedding)? })
    }

    /// The sandwich witness with its input graph. Embeddings are checked on
    /// the way in; the rest is left to [`SandwichWitness::verify`].
    pub fn to_sandwich(&self) -> Result<(WeightedGraph, SandwichWitness), FormatError> {
        let WitnessDocument::Sandwich { input, leaves, augmented, blowdown_order, construction, iso, embedding, .. } =
            self
        else {
            return Err(FormatError::Witness(format!("expected a sandwich witness, found {}", self.kind())));
        };
        let input = input.graph()?;
        let augmented = augmented.graph()?;
        let construction = construction.sequence()?;
        let built = construction
            .apply()
            .map_err(|e| FormatError::Witness(format!("construction: {e}")))?
            .result;
        let iso = Embedding::new(built, augmented.clone(), unpairs(iso)?)?;
        let embedding = Embedding::new(input.clone(), augmented.clone(), unpairs(embedding)?)?;
        let leaves = leaves.iter().map(|&[v, n]| (v as VertexId, n as usize)).collect();
        let regularity = RegularityWitness { blowdown_order: blowdown_order.clone(), construction, iso };
        Ok((input, SandwichWitness { leaves, augmented, regularity, embedding }))
    }
}
