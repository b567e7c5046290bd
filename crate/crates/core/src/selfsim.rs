//! Self-similar graphs.
//!
//! A connected graph `Γ` is self-similar when some nontrivial modification
//! `Γ' ⇝ Γ` contains a weighted copy of `Γ`. This module builds such
//! witnesses from sandwich witnesses ([`plant_witness`]), checks them
//! ([`verify_witness`]), and runs the converse extraction: iterate the
//! modification along the embedding until every strict transform has left
//! the copy, then cut the strict transforms away to expose a regular graph
//! containing `Γ` ([`extract_sandwich`]).

use std::collections::{BTreeMap, BTreeSet};

use thiserror::Error;

use crate::classify::{is_regular, is_sandwiched, ClassifyError, Obstruction, RegularityWitness, SandwichVerdict, SandwichWitness};
use crate::embed::{check_embedding, Embedding, EmbeddingError};
use crate::graph::{VertexId, WeightedGraph};
use crate::modification::{induced_modification, ModError, ModSequence, SequenceBuilder};

pub const DEFAULT_K_MAX: usize = 64;

#[derive(Clone, Debug, PartialEq, Eq, Error)]
pub enum SelfSimError {
    #[error("invalid witness: {0}")]
    InvalidWitness(#[from] WitnessViolation),
    #[error("invalid sandwich witness: {0}")]
    InvalidSandwich(String),
    #[error("unknown vertex {0}")]
    UnknownVertex(VertexId),
    #[error("no stage k <= {k_max} has every strict transform outside the copy")]
    BudgetExceeded { k_max: usize },
    #[error("internal inconsistency: {0}")]
    InternalInconsistency(String),
    #[error(transparent)]
    Modification(#[from] ModError),
}

#[derive(Clone, Debug, PartialEq, Eq, Error)]
pub enum WitnessViolation {
    #[error("modification is trivial (no steps)")]
    Trivial,
    #[error("sequence does not replay: {0}")]
    Replay(ModError),
    #[error("base graph is not connected")]
    Disconnected,
    #[error("embedding into the modification fails: {0}")]
    Embedding(EmbeddingError),
}

/// `Γ' ⇝ Γ` together with the vertex map of `φ : Γ ↪ Γ'`.
///
/// The map is kept unchecked so that witnesses read from documents can be
/// represented; [`verify_witness`] and [`SelfSimWitness::embedding`] check it
/// against the replayed modification.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SelfSimWitness {
    pub seq: ModSequence,
    pub map: BTreeMap<VertexId, VertexId>,
}

impl SelfSimWitness {
    pub fn base(&self) -> &WeightedGraph {
        &self.seq.base
    }

    /// The checked embedding into the replayed `Γ'`.
    pub fn embedding(&self) -> Result<Embedding, WitnessViolation> {
        let replayed = self.seq.apply().map_err(WitnessViolation::Replay)?.result;
        Embedding::new(self.base().clone(), replayed, self.map.clone()).map_err(WitnessViolation::Embedding)
    }
}

/// Re-derives `Γ'` from the steps and checks the embedding against it.
pub fn verify_witness(w: &SelfSimWitness) -> Result<(), WitnessViolation> {
    if !w.base().is_connected() || w.base().is_empty() {
        return Err(WitnessViolation::Disconnected);
    }
    if !w.seq.is_nontrivial() {
        return Err(WitnessViolation::Trivial);
    }
    let replayed = w.seq.apply().map_err(WitnessViolation::Replay)?.result;
    check_embedding(w.base(), &replayed, &w.map).map_err(WitnessViolation::Embedding)
}

/// Builds a self-similarity witness for `g` from a sandwich witness.
///
/// `Γ'` is obtained by blowing up `at` (default: smallest id), which creates
/// a `(0,1)` root, and then replaying the regular construction of the
/// augmented graph starting from that root. The replayed vertices never
/// touch `at` again, so they form a copy of the augmented graph, into which
/// `g` maps through the sandwich inclusion.
pub fn plant_witness(
    g: &WeightedGraph,
    sand: &SandwichWitness,
    at: Option<VertexId>,
) -> Result<SelfSimWitness, SelfSimError> {
    sand.verify(g).map_err(SelfSimError::InvalidSandwich)?;
    let at = match at {
        Some(v) if g.contains(v) => v,
        Some(v) => return Err(SelfSimError::UnknownVertex(v)),
        None => g.vertex_ids().next().ok_or(SelfSimError::UnknownVertex(0))?,
    };
    let construction = &sand.regularity.construction;
    let mut builder = SequenceBuilder::new(g.clone());
    let root = builder.vertex(at)?;
    // construction id -> id in Γ'
    let mut corr: BTreeMap<VertexId, VertexId> = BTreeMap::new();
    corr.insert(construction.base.vertex_ids().next().unwrap(), root);
    for step in &construction.steps {
        let created = builder.push(step.center.map(|v| corr[&v]))?;
        corr.insert(step.new_id, created);
    }
    let (seq, result) = builder.finish();
    let to_construction = sand
        .regularity
        .iso
        .inverse()
        .ok_or_else(|| SelfSimError::InvalidSandwich("regularity map is not an isomorphism".into()))?;
    let map = g
        .vertex_ids()
        .map(|v| {
            let in_aug = sand.embedding.apply(v).unwrap();
            (v, corr[&to_construction.apply(in_aug).unwrap()])
        })
        .collect();
    check_embedding(g, &result, &map)
        .map_err(|e| SelfSimError::InternalInconsistency(format!("planted copy: {e}")))?;
    let w = SelfSimWitness { seq, map };
    verify_witness(&w).map_err(|e| SelfSimError::InternalInconsistency(e.to_string()))?;
    Ok(w)
}

/// One stage `Γ_k` of the tower built from a witness.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TowerStage {
    pub graph: WeightedGraph,
    /// `Γ_k ⇝ Γ_{k-1}`; absent at stage 0.
    pub seq: Option<ModSequence>,
    /// `φ_{k-1} : Γ_{k-1} ↪ Γ_k`; absent at stage 0.
    pub phi: Option<Embedding>,
    /// `Φ_k = φ_{k-1} ∘ … ∘ φ_0` on the base vertices.
    pub composite: BTreeMap<VertexId, VertexId>,
    /// `I_k`: strict transform of each base vertex in `Γ_k`.
    pub strict: BTreeMap<VertexId, VertexId>,
}

impl TowerStage {
    /// Base vertices whose strict transform lies outside `Φ_k(Γ)`.
    pub fn exited(&self) -> BTreeSet<VertexId> {
        let image: BTreeSet<_> = self.composite.values().copied().collect();
        self.strict
            .iter()
            .filter(|(_, s)| !image.contains(s))
            .map(|(&v, _)| v)
            .collect()
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Tower {
    pub stages: Vec<TowerStage>,
}

impl Tower {
    /// Stages 0 and 1 of a verified witness.
    pub fn start(w: &SelfSimWitness) -> Result<Tower, SelfSimError> {
        verify_witness(w)?;
        let base = w.base().clone();
        let ident: BTreeMap<_, _> = base.vertex_ids().map(|v| (v, v)).collect();
        let t = w.seq.apply()?;
        let stage0 = TowerStage {
            graph: base,
            seq: None,
            phi: None,
            composite: ident.clone(),
            strict: ident,
        };
        let emb = w.embedding()?;
        let stage1 = TowerStage {
            graph: t.result,
            seq: Some(w.seq.clone()),
            composite: emb.map().clone(),
            phi: Some(emb),
            strict: t.strict,
        };
        Ok(Tower { stages: vec![stage0, stage1] })
    }

    /// Appends `Γ_{k+1}`, the modification of `Γ_k` induced by `Γ_k ⇝ Γ_{k-1}`
    /// along `φ_{k-1}`. Its steps are those of the original sequence lifted
    /// along `Φ_k`, and the lifted embedding is `φ_k : Γ_k ↪ Γ_{k+1}`.
    pub fn extend(&mut self) -> Result<(), SelfSimError> {
        let last = self.stages.last().unwrap();
        let (Some(seq), Some(phi)) = (&last.seq, &last.phi) else {
            return Err(SelfSimError::InternalInconsistency("tower has no first stage".into()));
        };
        let (next_seq, next_phi) = induced_modification(seq, phi)?;
        let t = next_seq.apply()?;
        let composite = last.composite.iter().map(|(&v, c)| (v, next_phi.map()[c])).collect();
        let strict = last.strict.iter().map(|(&v, s)| (v, t.strict[s])).collect();
        self.stages.push(TowerStage {
            graph: t.result,
            seq: Some(next_seq),
            phi: Some(next_phi),
            composite,
            strict,
        });
        Ok(())
    }

    pub fn depth(&self) -> usize {
        self.stages.len() - 1
    }
}

/// Stages `0..=k_max` of the tower.
pub fn build_tower(w: &SelfSimWitness, k_max: usize) -> Result<Tower, SelfSimError> {
    let mut tower = Tower::start(w)?;
    while tower.depth() < k_max.max(1) {
        tower.extend()?;
    }
    if k_max == 0 {
        tower.stages.truncate(1);
    }
    Ok(tower)
}

/// Removes the strict transforms of the base vertices (and their edges) from
/// the result of `seq`, returning the remaining graph.
pub fn strict_complement(seq: &ModSequence) -> Result<WeightedGraph, ModError> {
    let t = seq.apply()?;
    let mut out = t.result;
    for s in t.strict.values() {
        out.remove_vertex(*s)?;
    }
    Ok(out)
}

/// Connected components of [`strict_complement`], each as its own graph.
pub fn strict_complement_components(seq: &ModSequence) -> Result<Vec<WeightedGraph>, ModError> {
    let rest = strict_complement(seq)?;
    rest.components()
        .iter()
        .map(|c| rest.induced(c).map_err(ModError::from))
        .collect()
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Extraction {
    /// Least stage at which every strict transform is outside the copy.
    pub k: usize,
    pub regular: WeightedGraph,
    /// `Φ_k` viewed as a map into `regular`.
    pub embedding: Embedding,
    pub regularity: RegularityWitness,
}

/// Finds a regular graph containing the base of a self-similarity witness.
pub fn extract_sandwich(w: &SelfSimWitness, k_max: usize) -> Result<Extraction, SelfSimError> {
    let mut tower = Tower::start(w)?;
    loop {
        let k = tower.depth();
        let stage = tower.stages.last().unwrap();
        if stage.exited().len() == stage.strict.len() {
            return finish_extraction(w.base(), stage, k);
        }
        if k >= k_max {
            return Err(SelfSimError::BudgetExceeded { k_max });
        }
        tower.extend()?;
        let (prev, cur) = (&tower.stages[k], &tower.stages[k + 1]);
        if !prev.exited().is_subset(&cur.exited()) {
            return Err(SelfSimError::InternalInconsistency(format!(
                "a strict transform re-entered the copy at stage {}",
                k + 1
            )));
        }
    }
}

fn finish_extraction(base: &WeightedGraph, stage: &TowerStage, k: usize) -> Result<Extraction, SelfSimError> {
    let mut pruned = stage.graph.clone();
    for s in stage.strict.values() {
        pruned.remove_vertex(*s).map_err(ModError::from)?;
    }
    let root = stage.composite[&base.vertex_ids().next().unwrap()];
    let component = pruned
        .components()
        .into_iter()
        .find(|c| c.contains(&root))
        .ok_or_else(|| SelfSimError::InternalInconsistency("copy vanished".into()))?;
    let regular = pruned.induced(&component).map_err(ModError::from)?;
    let embedding = Embedding::new(base.clone(), regular.clone(), stage.composite.clone())
        .map_err(|e| SelfSimError::InternalInconsistency(format!("copy does not embed: {e}")))?;
    let regularity = is_regular(&regular)
        .map_err(|e| SelfSimError::InternalInconsistency(format!("pruned component: {e}")))?;
    Ok(Extraction { k, regular, embedding, regularity })
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum SelfSimVerdict {
    SelfSimilar { witness: SelfSimWitness, sandwich: SandwichWitness },
    NoWithinBudget { budget: usize },
    DefinitelyNot(Obstruction),
}

/// Decides self-similarity by way of the sandwich test.
pub fn is_self_similar(
    g: &WeightedGraph,
    budget: usize,
    at: Option<VertexId>,
) -> Result<SelfSimVerdict, SelfSimError> {
    let verdict = is_sandwiched(g, budget).map_err(|e| match e {
        ClassifyError::Disconnected => SelfSimError::InvalidWitness(WitnessViolation::Disconnected),
        ClassifyError::Graph(e) => SelfSimError::Modification(e.into()),
    })?;
    Ok(match verdict {
        SandwichVerdict::Sandwiched(sandwich) => {
            let witness = plant_witness(g, &sandwich, at)?;
            SelfSimVerdict::SelfSimilar { witness, sandwich }
        }
        SandwichVerdict::NoWithinBudget { budget } => SelfSimVerdict::NoWithinBudget { budget },
        SandwichVerdict::DefinitelyNot(o) => SelfSimVerdict::DefinitelyNot(o),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::modification::ModStep;

    fn g(vs: &[(VertexId, u32, u32)], es: &[(VertexId, VertexId)]) -> WeightedGraph {
        WeightedGraph::from_parts(vs, es).unwrap()
    }

    fn point_witness() -> SelfSimWitness {
        let seq = ModSequence::new(WeightedGraph::point(), vec![ModStep::vertex(0, 1)]);
        SelfSimWitness { seq, map: BTreeMap::from([(0, 1)]) }
    }

    fn sandwich_of(x: &WeightedGraph) -> SandwichWitness {
        match is_sandwiched(x, 20).unwrap() {
            SandwichVerdict::Sandwiched(w) => w,
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn verify_examples() {
        let w = point_witness();
        verify_witness(&w).unwrap();

        let onto_center = SelfSimWitness { map: BTreeMap::from([(0, 0)]), ..w.clone() };
        assert!(matches!(
            verify_witness(&onto_center),
            Err(WitnessViolation::Embedding(EmbeddingError::LabelMismatch { .. }))
        ));

        let p = WeightedGraph::point();
        let trivial = SelfSimWitness { seq: ModSequence::trivial(p), map: BTreeMap::from([(0, 0)]) };
        assert_eq!(verify_witness(&trivial), Err(WitnessViolation::Trivial));

        let broken = SelfSimWitness {
            seq: ModSequence::new(WeightedGraph::point(), vec![ModStep::vertex(3, 1)]),
            map: BTreeMap::from([(0, 1)]),
        };
        assert!(matches!(verify_witness(&broken), Err(WitnessViolation::Replay(_))));
    }

    #[test]
    fn plant_single_vertex() {
        let v = g(&[(0, 0, 2)], &[]);
        let sand = sandwich_of(&v);
        let w = plant_witness(&v, &sand, None).unwrap();
        let result = w.seq.apply().unwrap().result;
        assert_eq!(result, g(&[(0, 0, 3), (1, 0, 2), (2, 0, 1)], &[(0, 1), (1, 2)]));
        assert_eq!(w.map, BTreeMap::from([(0, 1)]));
        verify_witness(&w).unwrap();
    }

    #[test]
    fn plant_point_graph() {
        let p = WeightedGraph::point();
        let sand = sandwich_of(&p);
        let w = plant_witness(&p, &sand, None).unwrap();
        assert_eq!(w.seq.steps, vec![ModStep::vertex(0, 1)]);
        assert_eq!(w.map, BTreeMap::from([(0, 1)]));
        assert_eq!(plant_witness(&p, &sand, Some(4)), Err(SelfSimError::UnknownVertex(4)));
    }

    #[test]
    fn plant_everywhere() {
        let tripod = g(&[(0, 0, 4), (1, 0, 2), (2, 0, 2), (3, 0, 2)], &[(0, 1), (0, 2), (0, 3)]);
        let sand = sandwich_of(&tripod);
        for v in tripod.vertex_ids() {
            let w = plant_witness(&tripod, &sand, Some(v)).unwrap();
            verify_witness(&w).unwrap();
            let ex = extract_sandwich(&w, DEFAULT_K_MAX).unwrap();
            assert_eq!(ex.embedding.source(), &tripod);
        }
        let d4 = g(&[(0, 0, 2), (1, 0, 2), (2, 0, 2), (3, 0, 2)], &[(0, 1), (1, 2), (1, 3)]);
        assert!(matches!(is_self_similar(&d4, 20, None).unwrap(), SelfSimVerdict::NoWithinBudget { .. }));
    }

    #[test]
    fn tower_of_point_witness() {
        let w = point_witness();
        let t = build_tower(&w, 2).unwrap();
        assert_eq!(t.stages.len(), 3);
        assert_eq!(t.stages[2].graph, g(&[(0, 0, 2), (1, 0, 2), (2, 0, 1)], &[(0, 1), (1, 2)]));
        assert_eq!(t.stages[1].composite, w.map);
        assert_eq!(t.stages[1].strict, BTreeMap::from([(0, 0)]));
        assert_eq!(t.stages[2].composite, BTreeMap::from([(0, 2)]));
    }

    #[test]
    fn extract_examples() {
        let v = g(&[(0, 0, 2)], &[]);
        let w = plant_witness(&v, &sandwich_of(&v), None).unwrap();
        let ex = extract_sandwich(&w, DEFAULT_K_MAX).unwrap();
        assert_eq!(ex.k, 1);
        assert_eq!(ex.regular, g(&[(1, 0, 2), (2, 0, 1)], &[(1, 2)]));
        assert_eq!(ex.embedding.pairs(), vec![(0, 1)]);

        let ex = extract_sandwich(&point_witness(), DEFAULT_K_MAX).unwrap();
        assert_eq!(ex.k, 1);
        assert_eq!(ex.regular, g(&[(1, 0, 1)], &[]));
    }

    #[test]
    fn extraction_needs_later_stages() {
        // Γ = 0:(0,2) - 1:(0,3). Two vertex blowups give
        // 3:(0,1) - 2:(0,2) - 0:(0,3) - 1:(0,3), and Γ maps onto 2 - 0, so the
        // strict transform of 0 is still inside the copy at stage 1.
        let base = g(&[(0, 0, 2), (1, 0, 3)], &[(0, 1)]);
        let seq = ModSequence::new(base, vec![ModStep::vertex(0, 2), ModStep::vertex(2, 3)]);
        let w = SelfSimWitness { seq, map: BTreeMap::from([(0, 2), (1, 0)]) };
        verify_witness(&w).unwrap();
        assert_eq!(build_tower(&w, 1).unwrap().stages[1].exited(), BTreeSet::from([1]));

        let ex = extract_sandwich(&w, DEFAULT_K_MAX).unwrap();
        assert_eq!(ex.k, 2);
        assert_eq!(
            ex.regular,
            g(&[(2, 0, 3), (3, 0, 1), (4, 0, 2), (5, 0, 1)], &[(2, 3), (2, 4), (4, 5)])
        );
        assert_eq!(ex.embedding.pairs(), vec![(0, 4), (1, 2)]);
        assert_eq!(extract_sandwich(&w, 1), Err(SelfSimError::BudgetExceeded { k_max: 1 }));
    }

    #[test]
    fn self_similar_verdicts() {
        let p = WeightedGraph::point();
        let SelfSimVerdict::SelfSimilar { witness, .. } = is_self_similar(&p, 4, None).unwrap() else {
            panic!()
        };
        verify_witness(&witness).unwrap();
        let genus = g(&[(0, 1, 1)], &[]);
        assert!(matches!(
            is_self_similar(&genus, 4, None).unwrap(),
            SelfSimVerdict::DefinitelyNot(Obstruction::PositiveGenus { .. })
        ));
        let v = g(&[(0, 0, 2)], &[]);
        assert!(matches!(is_self_similar(&v, 4, None).unwrap(), SelfSimVerdict::SelfSimilar { .. }));
    }

    #[test]
    fn lemma_on_a_fixed_sequence() {
        let base = g(&[(0, 0, 2), (1, 0, 5)], &[(0, 1)]);
        let mut b = SequenceBuilder::new(base);
        let x = b.edge(0, 1).unwrap();
        let y = b.vertex(x).unwrap();
        b.edge(x, y).unwrap();
        b.vertex(1).unwrap();
        let (seq, _) = b.finish();
        let comps = strict_complement_components(&seq).unwrap();
        assert_eq!(comps.len(), 2);
        for c in comps {
            is_regular(&c).unwrap();
        }
    }
}
