use crate::graph::{Edge, Multigraph, VertexId};

use super::part::{merge_all, EdgePart};
use super::{Probability, ReliabilityError};

fn sorted_set(mut vs: Vec<VertexId>) -> Vec<VertexId> {
    vs.sort_unstable();
    vs.dedup();
    vs
}

/// A graph whose edges fail independently.
#[derive(Clone, Debug, PartialEq)]
pub struct PlainInstance {
    graph: Multigraph,
    probs: Vec<Probability>,
    source: VertexId,
    targets: Vec<VertexId>,
}

impl PlainInstance {
    pub fn new(
        graph: Multigraph,
        probs: Vec<Probability>,
        source: VertexId,
        targets: Vec<VertexId>,
    ) -> Result<Self, ReliabilityError> {
        if probs.len() != graph.edge_count() {
            return Err(ReliabilityError::ProbabilityCount {
                expected: graph.edge_count(),
                found: probs.len(),
            });
        }
        let targets = sorted_set(targets);
        if targets.is_empty() {
            return Err(ReliabilityError::NoTargets);
        }
        for &v in targets.iter().chain([&source]) {
            if !graph.contains_vertex(v) {
                return Err(ReliabilityError::UnknownVertex(v));
            }
        }
        Ok(PlainInstance {
            graph,
            probs,
            source,
            targets,
        })
    }

    pub fn graph(&self) -> &Multigraph {
        &self.graph
    }

    pub fn probs(&self) -> &[Probability] {
        &self.probs
    }

    pub fn source(&self) -> VertexId {
        self.source
    }

    /// Sorted and duplicate-free.
    pub fn targets(&self) -> &[VertexId] {
        &self.targets
    }

    pub fn source_is_target(&self) -> bool {
        self.targets.binary_search(&self.source).is_ok()
    }

    /// The same instance with every edge probability replaced by `p`.
    pub fn with_uniform(&self, p: Probability) -> Self {
        PlainInstance {
            probs: vec![p; self.probs.len()],
            ..self.clone()
        }
    }
}

/// A graph whose edges come in independent, internally correlated parts.
/// The parts own their edges, so they are disjoint and cover the edge
/// multiset by construction.
#[derive(Clone, Debug, PartialEq)]
pub struct ExtendedInstance {
    vertex_space: usize,
    vertices: Vec<VertexId>,
    parts: Vec<EdgePart>,
    source: VertexId,
    targets: Vec<VertexId>,
}

impl ExtendedInstance {
    /// `vertex_space` bounds the vertex ids; `vertices` is the live vertex set.
    pub fn new(
        vertex_space: usize,
        vertices: Vec<VertexId>,
        parts: Vec<EdgePart>,
        source: VertexId,
        targets: Vec<VertexId>,
    ) -> Result<Self, ReliabilityError> {
        let vertices = sorted_set(vertices);
        let targets = sorted_set(targets);
        if let Some(&v) = vertices.iter().find(|v| v.index() >= vertex_space) {
            return Err(ReliabilityError::UnknownVertex(v));
        }
        if targets.is_empty() {
            return Err(ReliabilityError::NoTargets);
        }
        let known = |v: &VertexId| vertices.binary_search(v).is_ok();
        for &v in targets.iter().chain([&source]) {
            if !known(&v) {
                return Err(ReliabilityError::UnknownVertex(v));
            }
        }
        for part in &parts {
            if let Some(&v) = part.vertices().iter().find(|v| !known(v)) {
                return Err(ReliabilityError::UnknownVertex(v));
            }
        }
        Ok(ExtendedInstance {
            vertex_space,
            vertices,
            parts,
            source,
            targets,
        })
    }

    pub fn vertex_space(&self) -> usize {
        self.vertex_space
    }

    pub fn vertices(&self) -> &[VertexId] {
        &self.vertices
    }

    pub fn parts(&self) -> &[EdgePart] {
        &self.parts
    }

    pub fn source(&self) -> VertexId {
        self.source
    }

    pub fn targets(&self) -> &[VertexId] {
        &self.targets
    }

    pub fn edge_count(&self) -> usize {
        self.parts.iter().map(EdgePart::edge_count).sum()
    }

    /// All edges, part by part, in part-local order.
    pub fn edges(&self) -> impl Iterator<Item = Edge> + '_ {
        self.parts.iter().flat_map(|p| p.edges().iter().copied())
    }

    /// Replaces parts `i` and `j` by their merge, appended as the last part.
    pub fn merge_parts(&self, i: usize, j: usize, cap: usize) -> Result<Self, ReliabilityError> {
        let count = self.parts.len();
        for index in [i, j] {
            if index >= count {
                return Err(ReliabilityError::NoSuchPart { index, count });
            }
        }
        if i == j {
            return Err(ReliabilityError::SamePart);
        }
        let merged = merge_all(&[&self.parts[i], &self.parts[j]], cap)?;
        let mut parts: Vec<EdgePart> = self
            .parts
            .iter()
            .enumerate()
            .filter(|&(k, _)| k != i && k != j)
            .map(|(_, p)| p.clone())
            .collect();
        parts.push(merged);
        Ok(ExtendedInstance {
            parts,
            ..self.clone()
        })
    }

    pub(crate) fn from_raw(
        vertex_space: usize,
        vertices: Vec<VertexId>,
        parts: Vec<EdgePart>,
        source: VertexId,
        targets: Vec<VertexId>,
    ) -> Self {
        ExtendedInstance {
            vertex_space,
            vertices,
            parts,
            source,
            targets,
        }
    }
}

/// One Bernoulli part per edge, in edge-id order.
pub fn lift(p: &PlainInstance) -> ExtendedInstance {
    let parts = p
        .graph
        .edges()
        .iter()
        .zip(&p.probs)
        .map(|(&e, &prob)| EdgePart::bernoulli(e, prob))
        .collect();
    ExtendedInstance {
        vertex_space: p.graph.vertex_count(),
        vertices: p.graph.vertices().collect(),
        parts,
        source: p.source,
        targets: p.targets.clone(),
    }
}
