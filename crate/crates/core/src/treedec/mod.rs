//! Tree decompositions: data model, axiom checks, rooting, PACE `.td`
//! interchange and elimination-order heuristics.

mod heuristic;
mod pace;

use std::collections::VecDeque;
use std::fmt;

use thiserror::Error;

use crate::graph::{EdgeId, Multigraph, VertexId};

pub use heuristic::{elimination_order, heuristic_decompose, EliminationOrder, Strategy};
pub use pace::{emit_td, parse_td, TdParseError};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Bag {
    pub id: usize,
    /// Sorted, duplicate-free.
    pub vertices: Vec<VertexId>,
}

impl Bag {
    pub fn new(id: usize, mut vertices: Vec<VertexId>) -> Self {
        vertices.sort_unstable();
        vertices.dedup();
        Bag { id, vertices }
    }

    pub fn contains(&self, v: VertexId) -> bool {
        self.vertices.binary_search(&v).is_ok()
    }

    pub fn len(&self) -> usize {
        self.vertices.len()
    }

    pub fn is_empty(&self) -> bool {
        self.vertices.is_empty()
    }
}

/// An unrooted tree decomposition. Bag ids are their positions in `bags`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TreeDecomposition {
    /// Number of vertices of the decomposed graph.
    pub vertex_count: usize,
    pub bags: Vec<Bag>,
    pub tree_edges: Vec<(usize, usize)>,
}

#[derive(Clone, Debug, Error, PartialEq, Eq)]
pub enum TreeDecompositionError {
    #[error("no bag contains source vertex {0}")]
    NoBagContainsSource(VertexId),
    #[error("bag {0} does not exist")]
    NoSuchBag(usize),
    #[error("decomposition is not a tree: {0}")]
    NotATree(String),
    #[error("graph is not connected")]
    GraphNotConnected,
}

/// A broken decomposition axiom together with a witness.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Violation {
    VertexCountMismatch {
        decomposition: usize,
        graph: usize,
    },
    BagVertexOutOfRange {
        bag: usize,
        vertex: VertexId,
    },
    TreeEdgeOutOfRange {
        a: usize,
        b: usize,
    },
    NotATree {
        witness: String,
    },
    VertexNotCovered {
        vertex: VertexId,
    },
    EdgeNotCovered {
        edge: EdgeId,
        u: VertexId,
        v: VertexId,
    },
    SubtreeDisconnected {
        vertex: VertexId,
    },
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Violation::VertexCountMismatch {
                decomposition,
                graph,
            } => write!(
                f,
                "vertex-count: decomposition declares {decomposition} vertices, graph has {graph}"
            ),
            Violation::BagVertexOutOfRange { bag, vertex } => {
                write!(f, "vertex-range: bag {bag} holds unknown vertex {vertex}")
            }
            Violation::TreeEdgeOutOfRange { a, b } => {
                write!(f, "tree: edge ({a}, {b}) names a missing bag")
            }
            Violation::NotATree { witness } => write!(f, "tree: {witness}"),
            Violation::VertexNotCovered { vertex } => {
                write!(f, "vertex-coverage: vertex {vertex} is in no bag")
            }
            Violation::EdgeNotCovered { edge, u, v } => {
                write!(f, "edge-coverage: edge {edge} = {{{u}, {v}}} is in no bag")
            }
            Violation::SubtreeDisconnected { vertex } => write!(
                f,
                "connectivity: bags containing vertex {vertex} do not form a subtree"
            ),
        }
    }
}

impl TreeDecomposition {
    /// Builds a decomposition, normalising each bag to a sorted set.
    pub fn new(
        vertex_count: usize,
        bags: Vec<Vec<VertexId>>,
        tree_edges: Vec<(usize, usize)>,
    ) -> Self {
        TreeDecomposition {
            vertex_count,
            bags: bags
                .into_iter()
                .enumerate()
                .map(|(id, vs)| Bag::new(id, vs))
                .collect(),
            tree_edges,
        }
    }

    /// Largest bag size minus one (0 for an empty decomposition).
    pub fn width(&self) -> usize {
        self.max_bag_size().saturating_sub(1)
    }

    pub fn max_bag_size(&self) -> usize {
        self.bags.iter().map(Bag::len).max().unwrap_or(0)
    }

    pub fn bag_count(&self) -> usize {
        self.bags.len()
    }

    fn adjacency(&self) -> Vec<Vec<usize>> {
        let mut adj = vec![Vec::new(); self.bags.len()];
        for &(a, b) in &self.tree_edges {
            if a < self.bags.len() && b < self.bags.len() {
                adj[a].push(b);
                adj[b].push(a);
            }
        }
        for list in &mut adj {
            list.sort_unstable();
        }
        adj
    }

    /// First reason the bag graph fails to be a tree, if any.
    fn tree_defect(&self) -> Option<String> {
        let n = self.bags.len();
        if n == 0 {
            return None;
        }
        if self.tree_edges.len() != n - 1 {
            return Some(format!(
                "{} bags need {} tree edges, found {}",
                n,
                n - 1,
                self.tree_edges.len()
            ));
        }
        let adj = self.adjacency();
        let mut seen = vec![false; n];
        let mut queue = VecDeque::from([0]);
        seen[0] = true;
        while let Some(x) = queue.pop_front() {
            for &y in &adj[x] {
                if !seen[y] {
                    seen[y] = true;
                    queue.push_back(y);
                }
            }
        }
        seen.iter()
            .position(|&s| !s)
            .map(|b| format!("bag {b} is not connected to bag 0"))
    }

    /// Checks the decomposition axioms against `g`; an empty list means valid.
    pub fn validate(&self, g: &Multigraph) -> Vec<Violation> {
        let mut out = Vec::new();
        let n = g.vertex_count();
        if self.vertex_count != n {
            out.push(Violation::VertexCountMismatch {
                decomposition: self.vertex_count,
                graph: n,
            });
        }
        for &(a, b) in &self.tree_edges {
            if a >= self.bags.len() || b >= self.bags.len() {
                out.push(Violation::TreeEdgeOutOfRange { a, b });
            }
        }
        let mut bags_of = vec![Vec::new(); n];
        for bag in &self.bags {
            for &v in &bag.vertices {
                if v.index() >= n {
                    out.push(Violation::BagVertexOutOfRange {
                        bag: bag.id,
                        vertex: v,
                    });
                } else {
                    bags_of[v.index()].push(bag.id);
                }
            }
        }
        let is_tree = out
            .iter()
            .all(|v| !matches!(v, Violation::TreeEdgeOutOfRange { .. }))
            && match self.tree_defect() {
                Some(witness) => {
                    out.push(Violation::NotATree { witness });
                    false
                }
                None => true,
            };

        for (v, bags) in bags_of.iter().enumerate() {
            if bags.is_empty() {
                out.push(Violation::VertexNotCovered {
                    vertex: VertexId::from(v),
                });
            }
        }

        for (i, e) in g.edges().iter().enumerate() {
            let (probe, other) = {
                let (bu, bv) = (&bags_of[e.u.index()], &bags_of[e.v.index()]);
                if bu.len() <= bv.len() {
                    (bu, e.v)
                } else {
                    (bv, e.u)
                }
            };
            if !probe.iter().any(|&b| self.bags[b].contains(other)) {
                out.push(Violation::EdgeNotCovered {
                    edge: EdgeId(i as u32),
                    u: e.u,
                    v: e.v,
                });
            }
        }

        if is_tree {
            // In a tree, k bags span a connected subtree iff k - 1 tree edges
            // join two of them.
            let mut joined = vec![0usize; n];
            for &(a, b) in &self.tree_edges {
                let (small, large) = if self.bags[a].len() <= self.bags[b].len() {
                    (a, b)
                } else {
                    (b, a)
                };
                for &v in &self.bags[small].vertices {
                    if v.index() < n && self.bags[large].contains(v) {
                        joined[v.index()] += 1;
                    }
                }
            }
            for v in 0..n {
                let k = bags_of[v].len();
                if k > 0 && joined[v] != k - 1 {
                    out.push(Violation::SubtreeDisconnected {
                        vertex: VertexId::from(v),
                    });
                }
            }
        }
        out
    }

    pub fn is_valid_for(&self, g: &Multigraph) -> bool {
        self.validate(g).is_empty()
    }

    /// Roots the tree at the lowest-id bag containing `source`.
    pub fn root_at_source(
        self,
        source: VertexId,
    ) -> Result<RootedDecomposition, TreeDecompositionError> {
        let root = self
            .bags
            .iter()
            .position(|b| b.contains(source))
            .ok_or(TreeDecompositionError::NoBagContainsSource(source))?;
        self.root_at(root)
    }

    pub fn root_at(self, root: usize) -> Result<RootedDecomposition, TreeDecompositionError> {
        if root >= self.bags.len() {
            return Err(TreeDecompositionError::NoSuchBag(root));
        }
        if let Some(w) = self.tree_defect() {
            return Err(TreeDecompositionError::NotATree(w));
        }
        let n = self.bags.len();
        let adj = self.adjacency();
        let mut parent = vec![None; n];
        let mut children = vec![Vec::new(); n];
        let mut depth = vec![0; n];
        let mut seen = vec![false; n];
        let mut queue = VecDeque::from([root]);
        seen[root] = true;
        while let Some(x) = queue.pop_front() {
            for &y in &adj[x] {
                if !seen[y] {
                    seen[y] = true;
                    parent[y] = Some(x);
                    depth[y] = depth[x] + 1;
                    children[x].push(y);
                    queue.push_back(y);
                }
            }
        }
        Ok(RootedDecomposition {
            td: self,
            root,
            parent,
            children,
            depth,
        })
    }
}

/// A tree decomposition with a distinguished root bag. Every bag counts as
/// both an ancestor and a descendant of itself.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RootedDecomposition {
    td: TreeDecomposition,
    root: usize,
    parent: Vec<Option<usize>>,
    children: Vec<Vec<usize>>,
    depth: Vec<usize>,
}

impl RootedDecomposition {
    pub fn decomposition(&self) -> &TreeDecomposition {
        &self.td
    }

    pub fn into_decomposition(self) -> TreeDecomposition {
        self.td
    }

    pub fn root(&self) -> usize {
        self.root
    }

    pub fn parent(&self, bag: usize) -> Option<usize> {
        self.parent[bag]
    }

    pub fn children(&self, bag: usize) -> &[usize] {
        &self.children[bag]
    }

    pub fn depth(&self, bag: usize) -> usize {
        self.depth[bag]
    }

    pub fn is_leaf(&self, bag: usize) -> bool {
        self.children[bag].is_empty()
    }

    pub fn is_ancestor(&self, ancestor: usize, mut bag: usize) -> bool {
        loop {
            if bag == ancestor {
                return true;
            }
            match self.parent[bag] {
                Some(p) => bag = p,
                None => return false,
            }
        }
    }

    pub fn bag(&self, id: usize) -> &Bag {
        &self.td.bags[id]
    }

    pub fn bag_count(&self) -> usize {
        self.td.bags.len()
    }

    pub fn width(&self) -> usize {
        self.td.width()
    }
}

#[cfg(test)]
pub(crate) mod tests {
    use super::*;

    pub(crate) fn vs(xs: &[u32]) -> Vec<VertexId> {
        xs.iter().map(|&x| VertexId(x)).collect()
    }

    /// The 7-vertex example graph with ids shifted down by one.
    pub(crate) fn example_graph() -> Multigraph {
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

    /// Bags {1,2,3},{2,3,5},{3,4,5},{2,6,7} (1-based) with {2,3,5} central.
    pub(crate) fn example_decomposition() -> TreeDecomposition {
        TreeDecomposition::new(
            7,
            vec![
                vs(&[0, 1, 2]),
                vs(&[1, 2, 4]),
                vs(&[2, 3, 4]),
                vs(&[1, 5, 6]),
            ],
            vec![(0, 1), (1, 2), (1, 3)],
        )
    }

    #[test]
    fn example_is_valid_width_two() {
        let td = example_decomposition();
        assert!(td.validate(&example_graph()).is_empty());
        assert_eq!(td.width(), 2);
    }

    #[test]
    fn dropping_a_bag_uncovers_an_edge() {
        let td = TreeDecomposition::new(
            7,
            vec![vs(&[0, 1, 2]), vs(&[1, 2, 4]), vs(&[1, 5, 6])],
            vec![(0, 1), (1, 2)],
        );
        let violations = td.validate(&example_graph());
        // edge {4,5} (1-based) is index 6
        assert!(violations.contains(&Violation::EdgeNotCovered {
            edge: EdgeId(6),
            u: VertexId(3),
            v: VertexId(4)
        }));
        assert!(violations.contains(&Violation::VertexNotCovered {
            vertex: VertexId(3)
        }));
    }

    #[test]
    fn broken_subtree_detected() {
        let g = Multigraph::from_edges(3, [(0, 1), (1, 2), (0, 2)]).unwrap();
        let td = TreeDecomposition::new(
            3,
            vec![vs(&[0, 1]), vs(&[1, 2]), vs(&[0, 2])],
            vec![(0, 1), (1, 2)],
        );
        assert_eq!(
            td.validate(&g),
            vec![Violation::SubtreeDisconnected {
                vertex: VertexId(0)
            }]
        );
    }

    #[test]
    fn cycle_in_bag_graph_is_not_a_tree() {
        let g = Multigraph::from_edges(2, [(0, 1)]).unwrap();
        let td = TreeDecomposition::new(
            2,
            vec![vs(&[0, 1]), vs(&[0, 1]), vs(&[0, 1])],
            vec![(0, 1), (1, 2), (2, 0)],
        );
        assert!(matches!(td.validate(&g)[..], [Violation::NotATree { .. }]));
    }

    #[test]
    fn vertex_count_mismatch_reported() {
        let g = Multigraph::from_edges(2, [(0, 1)]).unwrap();
        let td = TreeDecomposition::new(3, vec![vs(&[0, 1])], vec![]);
        assert_eq!(
            td.validate(&g),
            vec![Violation::VertexCountMismatch {
                decomposition: 3,
                graph: 2
            }]
        );
    }

    #[test]
    fn rooting() {
        let rooted = example_decomposition().root_at_source(VertexId(0)).unwrap();
        assert_eq!(rooted.root(), 0);
        assert_eq!(rooted.parent(1), Some(0));
        assert_eq!(rooted.children(1), &[2, 3]);
        assert!(rooted.is_leaf(2) && rooted.is_leaf(3));
        assert!(rooted.is_ancestor(0, 3));
        assert!(rooted.is_ancestor(3, 3));
        assert!(!rooted.is_ancestor(2, 3));
        assert_eq!(rooted.decomposition(), &example_decomposition());

        let rooted = example_decomposition().root_at_source(VertexId(3)).unwrap();
        assert_eq!(rooted.bag(rooted.root()).vertices, vs(&[2, 3, 4]));

        let single = TreeDecomposition::new(2, vec![vs(&[0, 1])], vec![]);
        assert_eq!(single.root_at_source(VertexId(1)).unwrap().root(), 0);
    }

    #[test]
    fn rooting_without_source_bag_fails() {
        let td = TreeDecomposition::new(3, vec![vs(&[0, 1])], vec![]);
        assert_eq!(
            td.root_at_source(VertexId(2)),
            Err(TreeDecompositionError::NoBagContainsSource(VertexId(2)))
        );
    }
}
