//! Weighted dual graphs, their modifications, and decision procedures for
//! regular, sandwiched and self-similar graphs.

pub mod classify;
pub mod corpus;
pub mod embed;
pub mod graph;
pub mod io;
pub mod matrix;
pub mod modification;
pub mod named;
pub mod selfsim;

pub use classify::{
    attach_leaves, default_budget, is_regular, is_sandwiched, regularity_obstruction, sandwich_obstruction,
    ClassifyError, NotRegular, Obstruction, RegularityWitness, SandwichVerdict, SandwichWitness,
};
pub use embed::{are_isomorphic, find_embeddings, find_isomorphism, Embedding, EmbeddingError};
pub use graph::{GraphData, GraphError, Label, VertexId, VertexRecord, WeightedGraph};
pub use io::{FormatError, GraphDocument, WitnessDocument};
pub use matrix::{IntMatrix, IntersectionMatrix};
pub use modification::{
    blowdown, blowdown_candidates, blowup_edge, blowup_vertex, induced_modification, total_transform, Center,
    ModError, ModSequence, ModStep, SequenceBuilder, Subgraph, TransformMaps,
};
pub use selfsim::{
    build_tower, extract_sandwich, is_self_similar, plant_witness, verify_witness, Extraction, SelfSimError,
    SelfSimVerdict, SelfSimWitness, Tower, WitnessViolation, DEFAULT_K_MAX,
};
pub use corpus::{roundtrip_case, RoundTrip};
