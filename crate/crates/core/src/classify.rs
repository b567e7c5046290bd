//! Decision procedures for regular and sandwiched graphs.
//!
//! A connected graph is regular when it is a modification of the point graph
//! `{0:(0,1)}`; it is sandwiched when it embeds into a regular graph. The
//! regularity test searches blowdown sequences with full backtracking; the
//! sandwich test searches leaf augmentations by iterative deepening on the
//! number of `(0,1)` leaves.

use std::collections::{BTreeMap, HashSet};
use std::fmt;

use num_bigint::BigInt;
use num_traits::{One, Signed};
use thiserror::Error;

use crate::embed::Embedding;
use crate::graph::{GraphError, Label, VertexId, WeightedGraph};
use crate::matrix::IntMatrix;
use crate::modification::{blowdown, blowdown_candidates, ModSequence, ModStep};

#[derive(Clone, Debug, PartialEq, Eq, Error)]
pub enum ClassifyError {
    #[error("graph is not connected")]
    Disconnected,
    #[error(transparent)]
    Graph(#[from] GraphError),
}

/// Why a graph is not regular.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum NotRegular {
    Disconnected,
    PositiveGenus { vertex: VertexId, genus: u32 },
    NotNegativeDefinite,
    DeterminantNotUnit(BigInt),
    NoBlowdownSequence,
}

impl fmt::Display for NotRegular {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            NotRegular::Disconnected => write!(f, "graph is not connected"),
            NotRegular::PositiveGenus { vertex, genus } => {
                write!(f, "vertex {vertex} has genus {genus}")
            }
            NotRegular::NotNegativeDefinite => write!(f, "intersection matrix is not negative definite"),
            NotRegular::DeterminantNotUnit(d) => write!(f, "intersection matrix has determinant {d}"),
            NotRegular::NoBlowdownSequence => write!(f, "no blowdown sequence reaches the point graph"),
        }
    }
}

/// Certificate that a graph is a modification of the point graph.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RegularityWitness {
    /// Vertices contracted, in order, ending at a single `(0,1)` vertex.
    pub blowdown_order: Vec<VertexId>,
    /// Sequence on `{0:(0,1)}` whose result is isomorphic to the input.
    pub construction: ModSequence,
    /// Isomorphism from the construction result onto the input.
    pub iso: Embedding,
}

impl RegularityWitness {
    /// Replays both halves of the witness against `g`.
    pub fn verify(&self, g: &WeightedGraph) -> Result<(), String> {
        let mut cur = g.clone();
        for &v in &self.blowdown_order {
            cur = blowdown(&cur, v).map_err(|e| format!("blowdown of {v}: {e}"))?.0;
        }
        if cur.vertex_count() != 1 || cur.vertices().next().unwrap().1 != Label::EXCEPTIONAL {
            return Err(format!("blowdowns end at {cur}, not a (0,1) point"));
        }
        if self.construction.base != WeightedGraph::point() {
            return Err("construction does not start at the point graph".into());
        }
        let built = self.construction.apply().map_err(|e| e.to_string())?.result;
        if self.iso.source() != &built || self.iso.target() != g {
            return Err("isomorphism does not connect the construction to the graph".into());
        }
        self.iso.check().map_err(|e| e.to_string())?;
        if !self.iso.is_isomorphism() {
            return Err("map is not bijective".into());
        }
        Ok(())
    }
}

/// Checks that rule out regularity without searching.
pub fn regularity_obstruction(g: &WeightedGraph) -> Option<NotRegular> {
    if g.is_empty() || !g.is_connected() {
        return Some(NotRegular::Disconnected);
    }
    if let Some((vertex, l)) = g.vertices().find(|(_, l)| l.genus > 0) {
        return Some(NotRegular::PositiveGenus { vertex, genus: l.genus });
    }
    let m = g.intersection_matrix();
    if !m.is_negative_definite() {
        return Some(NotRegular::NotNegativeDefinite);
    }
    let det = m.determinant();
    if !det.abs().is_one() {
        return Some(NotRegular::DeterminantNotUnit(det));
    }
    None
}

/// Decides regularity and returns a replayable witness.
pub fn is_regular(g: &WeightedGraph) -> Result<RegularityWitness, NotRegular> {
    if let Some(reason) = regularity_obstruction(g) {
        return Err(reason);
    }
    let mut failed = HashSet::new();
    let mut order = Vec::new();
    if !search_blowdowns(g.clone(), &mut order, &mut failed) {
        return Err(NotRegular::NoBlowdownSequence);
    }
    Ok(witness_from_order(g, order))
}

fn search_blowdowns(
    g: WeightedGraph,
    order: &mut Vec<VertexId>,
    failed: &mut HashSet<WeightedGraph>,
) -> bool {
    if g.vertex_count() == 1 {
        return g.vertices().next().unwrap().1 == Label::EXCEPTIONAL;
    }
    if failed.contains(&g) {
        return false;
    }
    for v in blowdown_candidates(&g) {
        let (next, _) = blowdown(&g, v).expect("candidate admits blowdown");
        order.push(v);
        if search_blowdowns(next, order, failed) {
            return true;
        }
        order.pop();
    }
    failed.insert(g);
    false
}

/// Always contracts the smallest candidate; used to compare against the
/// backtracking search.
pub fn greedy_blowdown_order(g: &WeightedGraph) -> Option<Vec<VertexId>> {
    let mut cur = g.clone();
    let mut order = Vec::new();
    while cur.vertex_count() > 1 {
        let v = *blowdown_candidates(&cur).first()?;
        cur = blowdown(&cur, v).ok()?.0;
        order.push(v);
    }
    let last = cur.vertices().next()?.1;
    (last == Label::EXCEPTIONAL).then_some(order)
}

/// Turns a successful blowdown order into a construction from the canonical
/// point graph: the surviving vertex becomes `0` and the i-th re-created
/// vertex becomes `i + 1`.
fn witness_from_order(g: &WeightedGraph, order: Vec<VertexId>) -> RegularityWitness {
    let mut cur = g.clone();
    let mut undone = Vec::with_capacity(order.len());
    for &v in &order {
        let (next, step) = blowdown(&cur, v).expect("order replays");
        undone.push(step);
        cur = next;
    }
    undone.reverse();
    let root = cur.vertex_ids().next().unwrap();
    let mut rename: BTreeMap<VertexId, VertexId> = BTreeMap::from([(root, 0)]);
    let steps: Vec<ModStep> = undone
        .iter()
        .enumerate()
        .map(|(i, s)| {
            let center = s.center.map(|v| rename[&v]);
            rename.insert(s.new_id, i as VertexId + 1);
            ModStep { center, new_id: i as VertexId + 1 }
        })
        .collect();
    let construction = ModSequence::new(WeightedGraph::point(), steps);
    let built = construction.apply().expect("construction replays").result;
    let iso_map = rename.iter().map(|(&orig, &canon)| (canon, orig)).collect();
    let iso = Embedding::new(built, g.clone(), iso_map).expect("renaming is an isomorphism");
    RegularityWitness { blowdown_order: order, construction, iso }
}

/// Adds, for each `(v, n)`, `n` fresh `(0,1)` vertices joined to `v`. Fresh
/// ids count up from the next free id, in ascending order of `v`.
pub fn attach_leaves(
    g: &WeightedGraph,
    leaves: &BTreeMap<VertexId, usize>,
) -> Result<WeightedGraph, GraphError> {
    let mut out = g.clone();
    let mut next = g.next_id();
    for (&v, &n) in leaves {
        if !g.contains(v) {
            return Err(GraphError::UnknownVertex(v));
        }
        for _ in 0..n {
            out.add_vertex(next, Label::EXCEPTIONAL)?;
            out.add_edge(v, next)?;
            next += 1;
        }
    }
    Ok(out)
}

/// Proven reasons a graph cannot be sandwiched.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Obstruction {
    PositiveGenus { vertex: VertexId, genus: u32 },
    NotNegativeDefinite,
}

impl fmt::Display for Obstruction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Obstruction::PositiveGenus { vertex, genus } => {
                write!(f, "vertex {vertex} has genus {genus}; regular graphs have genus 0 only")
            }
            Obstruction::NotNegativeDefinite => {
                write!(f, "intersection matrix is not negative definite")
            }
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SandwichWitness {
    /// Number of leaves attached at each vertex; zero counts are omitted.
    pub leaves: BTreeMap<VertexId, usize>,
    pub augmented: WeightedGraph,
    pub regularity: RegularityWitness,
    /// Inclusion of the input into `augmented`.
    pub embedding: Embedding,
}

impl SandwichWitness {
    pub fn leaf_count(&self) -> usize {
        self.leaves.values().sum()
    }

    /// Rebuilds the augmentation from `g` and re-checks every part.
    pub fn verify(&self, g: &WeightedGraph) -> Result<(), String> {
        let rebuilt = attach_leaves(g, &self.leaves).map_err(|e| e.to_string())?;
        if rebuilt != self.augmented {
            return Err("augmented graph is not the input plus the declared leaves".into());
        }
        self.regularity.verify(&self.augmented).map_err(|e| format!("regularity: {e}"))?;
        if self.embedding.source() != g || self.embedding.target() != &self.augmented {
            return Err("embedding does not go from the input to the augmented graph".into());
        }
        self.embedding.check().map_err(|e| e.to_string())
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum SandwichVerdict {
    Sandwiched(SandwichWitness),
    /// Every leaf count up to `budget` was tried. Not a proof.
    NoWithinBudget { budget: usize },
    DefinitelyNot(Obstruction),
}

/// `2 · Σ e(v)`.
pub fn default_budget(g: &WeightedGraph) -> usize {
    2 * g.weight_sum() as usize
}

pub fn sandwich_obstruction(g: &WeightedGraph) -> Option<Obstruction> {
    if let Some((vertex, l)) = g.vertices().find(|(_, l)| l.genus > 0) {
        return Some(Obstruction::PositiveGenus { vertex, genus: l.genus });
    }
    if !g.intersection_matrix().is_negative_definite() {
        return Some(Obstruction::NotNegativeDefinite);
    }
    None
}

/// Searches leaf augmentations of `g` with `0..=max_budget` leaves.
///
/// For a fixed total, assignments are the count vectors over the vertices in
/// ascending id order, tried in lexicographic order. The first augmentation
/// that passes [`is_regular`] is returned, so a success at budget `B` is the
/// same witness at every larger budget.
pub fn is_sandwiched(g: &WeightedGraph, max_budget: usize) -> Result<SandwichVerdict, ClassifyError> {
    if g.is_empty() || !g.is_connected() {
        return Err(ClassifyError::Disconnected);
    }
    if let Some(o) = sandwich_obstruction(g) {
        return Ok(SandwichVerdict::DefinitelyNot(o));
    }
    let mut search = LeafSearch::new(g);
    for budget in 0..=max_budget {
        if let Some(w) = search.with_total(budget) {
            return Ok(SandwichVerdict::Sandwiched(w));
        }
        // No vertex can take e(v) leaves or more, so larger totals are empty.
        if budget >= search.capacity() {
            break;
        }
    }
    Ok(SandwichVerdict::NoWithinBudget { budget: max_budget })
}

/// Attaching `n` leaves of weight `(0,1)` at `v` and eliminating them
/// (Schur complement of the `-I` block) leaves the intersection matrix of
/// `g` with `e(v)` lowered by `n`. So the augmented matrix is negative
/// definite iff that reduced matrix is, and their determinants agree up to
/// sign. Lowering weights only makes definiteness harder, which lets partial
/// assignments prune their completions.
struct LeafSearch<'a> {
    g: &'a WeightedGraph,
    ids: Vec<VertexId>,
    base: IntMatrix,
    counts: Vec<usize>,
}

impl<'a> LeafSearch<'a> {
    fn new(g: &'a WeightedGraph) -> Self {
        let m = g.intersection_matrix();
        LeafSearch {
            g,
            ids: m.ordering().to_vec(),
            base: m.matrix().clone(),
            counts: vec![0; m.order()],
        }
    }

    fn capacity(&self) -> usize {
        self.ids.iter().map(|&v| self.g.label(v).unwrap().weight as usize - 1).sum()
    }

    fn reduced(&self) -> IntMatrix {
        let mut m = self.base.clone();
        for (i, &c) in self.counts.iter().enumerate() {
            m.set(i, i, m.get(i, i) + c as i64);
        }
        m
    }

    fn with_total(&mut self, total: usize) -> Option<SandwichWitness> {
        self.counts.iter_mut().for_each(|c| *c = 0);
        self.assign(0, total)
    }

    fn assign(&mut self, pos: usize, remaining: usize) -> Option<SandwichWitness> {
        if pos == self.ids.len() {
            return if remaining == 0 { self.accept() } else { None };
        }
        let weight = self.g.label(self.ids[pos]).unwrap().weight as usize;
        let first = if pos + 1 == self.ids.len() { remaining } else { 0 };
        let mut found = None;
        for c in first..=remaining.min(weight - 1) {
            self.counts[pos] = c;
            if !self.reduced().is_negative_definite() {
                break;
            }
            found = self.assign(pos + 1, remaining - c);
            if found.is_some() {
                break;
            }
        }
        self.counts[pos] = 0;
        found
    }

    fn accept(&self) -> Option<SandwichWitness> {
        let det = self.reduced().determinant();
        if det.abs() != BigInt::one() {
            return None;
        }
        let leaves: BTreeMap<VertexId, usize> = self
            .ids
            .iter()
            .zip(&self.counts)
            .filter(|&(_, &c)| c > 0)
            .map(|(&v, &c)| (v, c))
            .collect();
        let augmented = attach_leaves(self.g, &leaves).ok()?;
        let regularity = is_regular(&augmented).ok()?;
        let embedding = Embedding::inclusion(self.g, &augmented).ok()?;
        Some(SandwichWitness { leaves, augmented, regularity, embedding })
    }
}
