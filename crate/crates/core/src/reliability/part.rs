use std::collections::BTreeMap;

use crate::graph::{Edge, VertexId};

use super::{Probability, ReliabilityError, EPSILON};

/// Outcomes are bit masks over a part's local edge order, so a part holds at
/// most this many edges.
pub const MAX_PART_EDGES: usize = 64;

/// Number of unordered pairs over `w` vertices.
pub fn pair_count(w: usize) -> usize {
    w * w.saturating_sub(1) / 2
}

/// Position of the pair `(i, j)`, `i < j < w`, in lexicographic order.
#[inline]
pub(crate) fn pair_index(w: usize, i: usize, j: usize) -> usize {
    debug_assert!(i < j && j < w);
    i * (2 * w - i - 1) / 2 + (j - i - 1)
}

/// All pairs of `vertices` (sorted) in the canonical (min, max) order.
pub(crate) fn complete_edges(vertices: &[VertexId]) -> Vec<Edge> {
    let mut out = Vec::with_capacity(pair_count(vertices.len()));
    for (i, &a) in vertices.iter().enumerate() {
        for &b in &vertices[i + 1..] {
            out.push(Edge::new(a, b));
        }
    }
    out
}

/// An independent group of edges and the joint law of which of them appear.
///
/// The distribution is kept as its support: `(outcome mask, probability)`
/// pairs sorted by mask, with zero-probability outcomes left out. Bit `i` of a
/// mask stands for `edges[i]`.
#[derive(Clone, Debug, PartialEq)]
pub struct EdgePart {
    vertices: Vec<VertexId>,
    edges: Vec<Edge>,
    support: Vec<(u64, f64)>,
}

impl EdgePart {
    /// A single edge present with probability `p`.
    pub fn bernoulli(edge: Edge, p: Probability) -> Self {
        let mut support = Vec::with_capacity(2);
        if p.value() < 1.0 {
            support.push((0, 1.0 - p.value()));
        }
        if p.value() > 0.0 {
            support.push((1, p.value()));
        }
        EdgePart {
            vertices: endpoints(&[edge]),
            edges: vec![edge],
            support,
        }
    }

    /// A part from a dense table indexed by outcome mask.
    pub fn from_table(edges: Vec<Edge>, table: &[f64]) -> Result<Self, ReliabilityError> {
        if edges.len() > 30 {
            return Err(ReliabilityError::PartTooLarge {
                edges: edges.len(),
                max: 30,
            });
        }
        let expected = 1usize << edges.len();
        if table.len() != expected {
            return Err(ReliabilityError::TableSize {
                edges: edges.len(),
                expected,
                found: table.len(),
            });
        }
        let mut support = Vec::new();
        let mut total = 0.0;
        for (mask, &x) in table.iter().enumerate() {
            let p = Probability::new(x)?.value();
            total += p;
            if p > 0.0 {
                support.push((mask as u64, p));
            }
        }
        if (total - 1.0).abs() > EPSILON {
            return Err(ReliabilityError::DistributionNotNormalized(total));
        }
        let edges: Vec<Edge> = edges.into_iter().map(|e| Edge::new(e.u, e.v)).collect();
        Ok(EdgePart {
            vertices: endpoints(&edges),
            edges,
            support,
        })
    }

    /// A part over every pair of `vertices` (sorted) with the given law.
    pub(crate) fn complete(vertices: Vec<VertexId>, law: BTreeMap<u64, f64>) -> Self {
        debug_assert!(vertices.windows(2).all(|w| w[0] < w[1]));
        EdgePart {
            edges: complete_edges(&vertices),
            vertices,
            support: law.into_iter().filter(|&(_, p)| p > 0.0).collect(),
        }
    }

    /// The vertex set the part lives on, sorted.
    pub fn vertices(&self) -> &[VertexId] {
        &self.vertices
    }

    pub fn edges(&self) -> &[Edge] {
        &self.edges
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    /// Nonzero outcomes, sorted by mask.
    pub fn support(&self) -> &[(u64, f64)] {
        &self.support
    }

    pub fn prob(&self, outcome: u64) -> f64 {
        self.support
            .binary_search_by_key(&outcome, |&(m, _)| m)
            .map(|i| self.support[i].1)
            .unwrap_or(0.0)
    }

    /// Dense table of all `2^edges` outcomes. Only sensible for small parts.
    pub fn table(&self) -> Vec<f64> {
        assert!(self.edges.len() <= 30, "table too large to materialise");
        let mut out = vec![0.0; 1 << self.edges.len()];
        for &(m, p) in &self.support {
            out[m as usize] = p;
        }
        out
    }

    pub fn total(&self) -> f64 {
        self.support.iter().map(|&(_, p)| p).sum()
    }

    pub(crate) fn lies_within(&self, set: &[VertexId]) -> bool {
        self.vertices.iter().all(|v| set.binary_search(v).is_ok())
    }
}

fn endpoints(edges: &[Edge]) -> Vec<VertexId> {
    let mut vs: Vec<VertexId> = edges.iter().flat_map(|e| [e.u, e.v]).collect();
    vs.sort_unstable();
    vs.dedup();
    vs
}

/// Joint law of the *simple* edge set produced by independent parts, as a
/// mask over the pairs of `universe` (sorted). Parallel edges and repeated
/// endpoints collapse to one pair; self-loops vanish. Every part must lie
/// within `universe`.
pub(crate) fn fold_into_pairs(parts: &[&EdgePart], universe: &[VertexId]) -> BTreeMap<u64, f64> {
    let w = universe.len();
    debug_assert!(pair_count(w) <= MAX_PART_EDGES);
    let local = |v: VertexId| universe.binary_search(&v).expect("part outside universe");
    let mut state = BTreeMap::from([(0u64, 1.0f64)]);
    for part in parts {
        let bits: Vec<u64> = part
            .edges
            .iter()
            .map(|e| {
                let (i, j) = (local(e.u), local(e.v));
                if i == j {
                    0
                } else {
                    1u64 << pair_index(w, i, j)
                }
            })
            .collect();
        let mut projected: BTreeMap<u64, f64> = BTreeMap::new();
        for &(outcome, p) in &part.support {
            let mut mask = 0;
            let mut rest = outcome;
            while rest != 0 {
                mask |= bits[rest.trailing_zeros() as usize];
                rest &= rest - 1;
            }
            *projected.entry(mask).or_default() += p;
        }
        let mut next: BTreeMap<u64, f64> = BTreeMap::new();
        for (&s, &p) in &state {
            for (&o, &q) in &projected {
                let pq = p * q;
                if pq != 0.0 {
                    *next.entry(s | o).or_default() += pq;
                }
            }
        }
        state = next;
    }
    state
}

/// Merges independent parts into one correlated part over every pair of
/// their combined vertex set, taking the union of outcomes and ignoring
/// edge multiplicity.
pub(crate) fn merge_all(parts: &[&EdgePart], cap: usize) -> Result<EdgePart, ReliabilityError> {
    let mut w: Vec<VertexId> = parts
        .iter()
        .flat_map(|p| p.vertices.iter().copied())
        .collect();
    w.sort_unstable();
    w.dedup();
    let edges = pair_count(w.len());
    if edges > cap.min(MAX_PART_EDGES) {
        return Err(ReliabilityError::MergedPartTooLarge {
            edges,
            cap: cap.min(MAX_PART_EDGES),
        });
    }
    let law = fold_into_pairs(parts, &w);
    Ok(EdgePart::complete(w, law))
}
