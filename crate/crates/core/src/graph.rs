//! Undirected multigraphs with stable vertex and edge ids.
//!
//! Parallel edges are kept distinct (each carries its own probability), and
//! self-loops are accepted but never stored in the adjacency lists since they
//! cannot change which vertices are connected.

use std::fmt;

use thiserror::Error;

/// Dense vertex index in `[0, n)`. The derived order is the total order used
/// whenever an algorithm needs "the smallest vertex" of a set.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct VertexId(pub u32);

impl VertexId {
    #[inline]
    pub fn index(self) -> usize {
        self.0 as usize
    }
}

impl From<usize> for VertexId {
    fn from(v: usize) -> Self {
        VertexId(v as u32)
    }
}

impl fmt::Display for VertexId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

/// Dense edge index in `[0, m)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct EdgeId(pub u32);

impl EdgeId {
    #[inline]
    pub fn index(self) -> usize {
        self.0 as usize
    }
}

impl fmt::Display for EdgeId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

/// Endpoints of an edge, stored with `u <= v`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Edge {
    pub u: VertexId,
    pub v: VertexId,
}

impl Edge {
    pub fn new(a: VertexId, b: VertexId) -> Self {
        if a <= b {
            Edge { u: a, v: b }
        } else {
            Edge { u: b, v: a }
        }
    }

    pub fn is_loop(&self) -> bool {
        self.u == self.v
    }
}

#[derive(Debug, Error, PartialEq, Eq)]
pub enum GraphError {
    #[error("vertex {vertex} out of range for a graph with {n} vertices")]
    VertexOutOfRange { vertex: usize, n: usize },
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Multigraph {
    n: usize,
    edges: Vec<Edge>,
    adjacency: Vec<Vec<(VertexId, EdgeId)>>,
}

impl Multigraph {
    pub fn from_edges<I>(n: usize, edges: I) -> Result<Self, GraphError>
    where
        I: IntoIterator<Item = (usize, usize)>,
    {
        let mut adjacency = vec![Vec::new(); n];
        let mut stored = Vec::new();
        for (a, b) in edges {
            for x in [a, b] {
                if x >= n {
                    return Err(GraphError::VertexOutOfRange { vertex: x, n });
                }
            }
            let id = EdgeId(stored.len() as u32);
            let edge = Edge::new(VertexId::from(a), VertexId::from(b));
            if !edge.is_loop() {
                adjacency[a].push((VertexId::from(b), id));
                adjacency[b].push((VertexId::from(a), id));
            }
            stored.push(edge);
        }
        Ok(Multigraph {
            n,
            edges: stored,
            adjacency,
        })
    }

    pub fn vertex_count(&self) -> usize {
        self.n
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    pub fn vertices(&self) -> impl Iterator<Item = VertexId> {
        (0..self.n as u32).map(VertexId)
    }

    pub fn edge(&self, e: EdgeId) -> Edge {
        self.edges[e.index()]
    }

    pub fn edges(&self) -> &[Edge] {
        &self.edges
    }

    pub fn neighbors(&self, v: VertexId) -> &[(VertexId, EdgeId)] {
        &self.adjacency[v.index()]
    }

    pub fn contains_vertex(&self, v: VertexId) -> bool {
        v.index() < self.n
    }

    /// Component labels under `active`: every vertex is labelled with the
    /// smallest vertex id of its component.
    pub fn connected_components(&self, active: &EdgeSet) -> Vec<VertexId> {
        let mut dsu = DisjointSets::new(self.n);
        for (i, e) in self.edges.iter().enumerate() {
            if !e.is_loop() && active.contains(EdgeId(i as u32)) {
                dsu.union(e.u.index(), e.v.index());
            }
        }
        // union by min keeps the smallest index as representative
        (0..self.n).map(|v| VertexId::from(dsu.find(v))).collect()
    }

    /// Whether `source` is joined to some vertex of `targets` using only
    /// `active` edges. A source that is itself a target always reaches.
    pub fn reaches(&self, active: &EdgeSet, source: VertexId, targets: &[VertexId]) -> bool {
        if targets.contains(&source) {
            return true;
        }
        let mut is_target = vec![false; self.n];
        for t in targets {
            is_target[t.index()] = true;
        }
        let mut seen = vec![false; self.n];
        let mut stack = vec![source];
        seen[source.index()] = true;
        while let Some(x) = stack.pop() {
            for &(y, e) in &self.adjacency[x.index()] {
                if !seen[y.index()] && active.contains(e) {
                    if is_target[y.index()] {
                        return true;
                    }
                    seen[y.index()] = true;
                    stack.push(y);
                }
            }
        }
        false
    }

    pub fn is_connected(&self) -> bool {
        if self.n == 0 {
            return true;
        }
        let labels = self.connected_components(&EdgeSet::full(self.edge_count()));
        labels.iter().all(|&l| l == VertexId(0))
    }

    /// Checks both separation conditions: the sides cover every vertex and no
    /// edge runs between `A \ B` and `B \ A`.
    pub fn verify_separation(&self, sep: &Separation) -> bool {
        let mut in_a = vec![false; self.n];
        let mut in_b = vec![false; self.n];
        for (side, mask) in [(&sep.a_side, &mut in_a), (&sep.b_side, &mut in_b)] {
            for v in side {
                if v.index() >= self.n {
                    return false;
                }
                mask[v.index()] = true;
            }
        }
        separation_holds(
            (0..self.n).map(|v| (in_a[v], in_b[v])),
            self.edges.iter().map(|e| {
                (
                    in_a[e.u.index()],
                    in_b[e.u.index()],
                    in_a[e.v.index()],
                    in_b[e.v.index()],
                )
            }),
        )
    }
}

/// Shared core of the separation test. `vertices` yields `(in_a, in_b)` per
/// vertex, `edges` yields the same flags for both endpoints of each edge.
pub(crate) fn separation_holds(
    mut vertices: impl Iterator<Item = (bool, bool)>,
    mut edges: impl Iterator<Item = (bool, bool, bool, bool)>,
) -> bool {
    if !vertices.all(|(a, b)| a || b) {
        return false;
    }
    edges.all(|(ua, ub, va, vb)| {
        let u_only_a = ua && !ub;
        let u_only_b = ub && !ua;
        let v_only_a = va && !vb;
        let v_only_b = vb && !va;
        !((u_only_a && v_only_b) || (u_only_b && v_only_a))
    })
}

/// A subset of the edge ids of one graph.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct EdgeSet {
    bits: Vec<bool>,
}

impl EdgeSet {
    pub fn empty(m: usize) -> Self {
        EdgeSet {
            bits: vec![false; m],
        }
    }

    pub fn full(m: usize) -> Self {
        EdgeSet {
            bits: vec![true; m],
        }
    }

    pub fn from_ids(m: usize, ids: impl IntoIterator<Item = EdgeId>) -> Self {
        let mut set = Self::empty(m);
        for e in ids {
            set.insert(e);
        }
        set
    }

    /// Builds the set from the low `m` bits of `mask`.
    pub fn from_mask(m: usize, mask: u64) -> Self {
        EdgeSet {
            bits: (0..m).map(|i| mask >> i & 1 == 1).collect(),
        }
    }

    pub fn insert(&mut self, e: EdgeId) {
        self.bits[e.index()] = true;
    }

    pub fn remove(&mut self, e: EdgeId) {
        self.bits[e.index()] = false;
    }

    pub fn contains(&self, e: EdgeId) -> bool {
        self.bits.get(e.index()).copied().unwrap_or(false)
    }

    pub fn len(&self) -> usize {
        self.bits.iter().filter(|&&b| b).count()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn iter(&self) -> impl Iterator<Item = EdgeId> + '_ {
        self.bits
            .iter()
            .enumerate()
            .filter(|(_, &b)| b)
            .map(|(i, _)| EdgeId(i as u32))
    }
}

/// A pair of vertex sets `(A, B)`; see [`Multigraph::verify_separation`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Separation {
    pub a_side: Vec<VertexId>,
    pub b_side: Vec<VertexId>,
}

impl Separation {
    pub fn new(a_side: Vec<VertexId>, b_side: Vec<VertexId>) -> Self {
        Separation { a_side, b_side }
    }

    pub fn separator(&self) -> Vec<VertexId> {
        let mut out: Vec<VertexId> = self
            .a_side
            .iter()
            .copied()
            .filter(|v| self.b_side.contains(v))
            .collect();
        out.sort_unstable();
        out.dedup();
        out
    }
}

/// Union-find whose representative is always the smallest member.
#[derive(Clone, Debug)]
pub(crate) struct DisjointSets {
    parent: Vec<usize>,
}

impl DisjointSets {
    pub(crate) fn new(n: usize) -> Self {
        DisjointSets {
            parent: (0..n).collect(),
        }
    }

    pub(crate) fn find(&mut self, mut x: usize) -> usize {
        while self.parent[x] != x {
            self.parent[x] = self.parent[self.parent[x]];
            x = self.parent[x];
        }
        x
    }

    pub(crate) fn union(&mut self, a: usize, b: usize) {
        let ra = self.find(a);
        let rb = self.find(b);
        if ra < rb {
            self.parent[rb] = ra;
        } else if rb < ra {
            self.parent[ra] = rb;
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn v(x: u32) -> VertexId {
        VertexId(x)
    }

    /// The 7-vertex example graph shifted to 0-based ids (vertex k becomes k-1).
    fn sample_graph() -> Multigraph {
        let edges = [
            (1, 2),
            (1, 3),
            (2, 3),
            (3, 4),
            (3, 5),
            (2, 5),
            (4, 5),
            (2, 6),
            (2, 7),
            (6, 7),
        ];
        Multigraph::from_edges(7, edges.iter().map(|&(a, b)| (a - 1, b - 1))).unwrap()
    }

    fn edge_id(g: &Multigraph, a: u32, b: u32) -> EdgeId {
        let want = Edge::new(v(a - 1), v(b - 1));
        EdgeId(g.edges().iter().position(|&e| e == want).unwrap() as u32)
    }

    #[test]
    fn path_components() {
        let g = Multigraph::from_edges(3, [(0, 1), (1, 2)]).unwrap();
        assert_eq!(g.connected_components(&EdgeSet::full(2)), vec![v(0); 3]);
        assert_eq!(
            g.connected_components(&EdgeSet::empty(2)),
            vec![v(0), v(1), v(2)]
        );
    }

    #[test]
    fn sample_graph_partial_components() {
        let g = sample_graph();
        let active = EdgeSet::from_ids(10, [edge_id(&g, 1, 3), edge_id(&g, 6, 7)]);
        let labels = g.connected_components(&active);
        // {1,3},{2},{4},{5},{6,7} in 1-based ids
        assert_eq!(labels, vec![v(0), v(1), v(0), v(3), v(4), v(5), v(5)]);
    }

    #[test]
    fn reaches_cases() {
        let single = Multigraph::from_edges(2, [(0, 1)]).unwrap();
        assert!(single.reaches(&EdgeSet::empty(1), v(0), &[v(0)]));
        assert!(!single.reaches(&EdgeSet::empty(1), v(0), &[v(1)]));
        assert!(single.reaches(&EdgeSet::full(1), v(0), &[v(1)]));

        let g = sample_graph();
        let active = EdgeSet::from_ids(10, [edge_id(&g, 1, 2), edge_id(&g, 2, 7)]);
        assert!(g.reaches(&active, v(0), &[v(6)]));
    }

    #[test]
    fn self_loops_are_inert() {
        let g = Multigraph::from_edges(2, [(0, 0), (1, 1)]).unwrap();
        assert!(g.neighbors(v(0)).is_empty());
        assert!(!g.reaches(&EdgeSet::full(2), v(0), &[v(1)]));
        assert_eq!(g.connected_components(&EdgeSet::full(2)), vec![v(0), v(1)]);
    }

    #[test]
    fn out_of_range_edge_rejected() {
        assert_eq!(
            Multigraph::from_edges(2, [(0, 2)]),
            Err(GraphError::VertexOutOfRange { vertex: 2, n: 2 })
        );
    }

    #[test]
    fn separations() {
        let g = sample_graph();
        let all: Vec<_> = g.vertices().collect();
        assert!(g.verify_separation(&Separation::new(all.clone(), all)));

        let a = [2, 6, 7].iter().map(|&x| v(x - 1)).collect();
        let b: Vec<_> = [1, 2, 3, 4, 5].iter().map(|&x| v(x - 1)).collect();
        let sep = Separation::new(a, b);
        assert!(g.verify_separation(&sep));
        assert_eq!(sep.separator(), vec![v(1)]);

        // vertex 2 (1-based) missing from both sides
        let a = vec![v(0)];
        let b = [3, 4, 5, 6, 7].iter().map(|&x| v(x - 1)).collect();
        assert!(!g.verify_separation(&Separation::new(a, b)));

        // {1,3} crosses from A \ B to B \ A
        let a = vec![v(0), v(1)];
        let b = (1..7).map(v).collect();
        assert!(!g.verify_separation(&Separation::new(a, b)));
    }
}
