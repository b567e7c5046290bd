//! Seeded random graphs for tests and benchmarks.

use std::collections::BTreeSet;

use rand::seq::IteratorRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::classify::{is_regular, is_sandwiched, SandwichVerdict};
use crate::graph::{Label, VertexId, WeightedGraph};
use crate::modification::{Center, ModSequence, SequenceBuilder};
use crate::selfsim::{extract_sandwich, plant_witness, verify_witness, Extraction, SelfSimWitness};

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// A uniformly chosen vertex or edge of `g`.
pub fn random_center<R: Rng>(g: &WeightedGraph, rng: &mut R) -> Center {
    let nv = g.vertex_count();
    let pick = rng.random_range(0..nv + g.edge_count());
    if pick < nv {
        Center::Vertex(g.vertex_ids().nth(pick).expect("in range"))
    } else {
        let (a, b) = g.edges().nth(pick - nv).expect("in range");
        Center::Edge(a, b)
    }
}

/// Extends `base` by `depth` simple modifications at random centers.
pub fn random_sequence<R: Rng>(base: &WeightedGraph, depth: usize, rng: &mut R) -> ModSequence {
    let mut b = SequenceBuilder::new(base.clone());
    for _ in 0..depth {
        let c = random_center(b.current(), rng);
        b.push(c).expect("centers are drawn from the current graph");
    }
    b.finish().0
}

/// A modification of the point graph with 1 to 8 steps, and its construction.
pub fn random_regular<R: Rng>(rng: &mut R) -> (WeightedGraph, ModSequence) {
    let depth = rng.random_range(1..=8);
    let seq = random_sequence(&WeightedGraph::point(), depth, rng);
    let g = seq.apply().expect("valid sequence").result;
    (g, seq)
}

/// A connected induced subgraph of `g` with at most `max` vertices, grown
/// from a random vertex.
pub fn random_connected_subgraph<R: Rng>(g: &WeightedGraph, max: usize, rng: &mut R) -> WeightedGraph {
    let target = rng.random_range(1..=max.min(g.vertex_count()).max(1));
    let start = g.vertex_ids().choose(rng).expect("nonempty graph");
    let mut keep = BTreeSet::from([start]);
    while keep.len() < target {
        let frontier: BTreeSet<VertexId> = keep
            .iter()
            .flat_map(|&v| g.link(v).expect("known vertex").iter().copied())
            .filter(|v| !keep.contains(v))
            .collect();
        match frontier.into_iter().choose(rng) {
            Some(v) => {
                keep.insert(v);
            }
            None => break,
        }
    }
    g.induced(&keep).expect("ids from g")
}

/// A connected subgraph of a random regular graph.
pub fn random_sandwiched<R: Rng>(rng: &mut R) -> WeightedGraph {
    let (g, _) = random_regular(rng);
    random_connected_subgraph(&g, 10, rng)
}

/// A random connected simple graph on 1 to `max_vertices` vertices, with ids
/// `0..n`, weights in `1..=4`, genus mostly 0.
pub fn random_base<R: Rng>(max_vertices: usize, rng: &mut R) -> WeightedGraph {
    let n = rng.random_range(1..=max_vertices.max(1)) as VertexId;
    let mut g = WeightedGraph::new();
    for v in 0..n {
        let genus = if rng.random_bool(0.1) { 1 } else { 0 };
        g.add_vertex(v, Label::new(genus, rng.random_range(1..=4))).expect("fresh id");
        if v > 0 {
            g.add_edge(rng.random_range(0..v), v).expect("fresh edge");
        }
    }
    for a in 0..n {
        for b in a + 1..n {
            if !g.has_edge(a, b) && rng.random_bool(0.15) {
                g.add_edge(a, b).expect("fresh edge");
            }
        }
    }
    g
}

/// A random connected graph whose intersection matrix is negative definite:
/// every weight exceeds the valency, so the matrix is strictly diagonally
/// dominant.
pub fn random_negative_definite<R: Rng>(max_vertices: usize, rng: &mut R) -> WeightedGraph {
    let shape = random_base(max_vertices, rng);
    let mut g = shape.clone();
    for (v, label) in shape.vertices() {
        let val = shape.valency(v).expect("known vertex") as u32;
        g.set_label(v, Label::new(label.genus, val + rng.random_range(1..=2))).expect("known vertex");
    }
    g
}

/// Outcome of one sandwiched-to-self-similar-and-back run.
#[derive(Clone, Debug)]
pub struct RoundTrip {
    pub leaves: usize,
    pub witness: SelfSimWitness,
    pub extraction: Extraction,
}

/// Runs `g` through the sandwich test, plants a self-similarity witness,
/// extracts a regular supergraph from it and re-checks every result from
/// scratch.
pub fn roundtrip_case(g: &WeightedGraph, budget: usize, k_max: usize) -> Result<RoundTrip, String> {
    let sand = match is_sandwiched(g, budget).map_err(|e| e.to_string())? {
        SandwichVerdict::Sandwiched(w) => w,
        other => return Err(format!("not sandwiched: {other:?}")),
    };
    sand.verify(g).map_err(|e| format!("sandwich witness: {e}"))?;
    let witness = plant_witness(g, &sand, None).map_err(|e| e.to_string())?;
    verify_witness(&witness).map_err(|e| format!("planted witness: {e}"))?;
    let extraction = extract_sandwich(&witness, k_max).map_err(|e| e.to_string())?;
    is_regular(&extraction.regular).map_err(|e| format!("extracted graph: {e}"))?;
    extraction.embedding.check().map_err(|e| format!("extracted embedding: {e}"))?;
    if extraction.embedding.source() != g || extraction.embedding.target() != &extraction.regular {
        return Err("extracted embedding has the wrong endpoints".into());
    }
    Ok(RoundTrip { leaves: sand.leaf_count(), witness, extraction })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn deterministic_per_seed() {
        let a: Vec<_> = (0..5).map(|_| random_sandwiched(&mut rng(7))).collect();
        let b: Vec<_> = (0..5).map(|_| random_sandwiched(&mut rng(7))).collect();
        assert_eq!(a, b);
        let mut r = rng(11);
        for _ in 0..50 {
            let (g, seq) = random_regular(&mut r);
            assert!((1..=8).contains(&seq.len()));
            assert_eq!(g.vertex_count(), seq.len() + 1);
            let s = random_connected_subgraph(&g, 10, &mut r);
            assert!(s.is_connected() && s.vertex_count() <= 10);
        }
    }

    #[test]
    fn roundtrip_small_corpus() {
        let mut r = rng(5);
        for _ in 0..20 {
            let g = random_sandwiched(&mut r);
            let rt = roundtrip_case(&g, 16, crate::selfsim::DEFAULT_K_MAX).unwrap();
            assert!(rt.extraction.k >= 1);
        }
    }

    #[test]
    fn negative_definite_bases() {
        let mut r = rng(3);
        for _ in 0..50 {
            let g = random_negative_definite(8, &mut r);
            assert!(g.is_connected());
            assert!(g.intersection_matrix().is_negative_definite());
        }
    }
}
