use std::collections::BTreeSet;
use std::fmt;
use std::str::FromStr;

use crate::graph::{Multigraph, VertexId};

use super::{TreeDecomposition, TreeDecompositionError};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Default)]
pub enum Strategy {
    #[default]
    MinDegree,
    MinFill,
}

impl FromStr for Strategy {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "min-degree" => Ok(Strategy::MinDegree),
            "min-fill" => Ok(Strategy::MinFill),
            other => Err(format!("unknown strategy `{other}`")),
        }
    }
}

impl fmt::Display for Strategy {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Strategy::MinDegree => "min-degree",
            Strategy::MinFill => "min-fill",
        })
    }
}

/// A permutation of the vertices; position 0 is eliminated first.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct EliminationOrder {
    order: Vec<VertexId>,
}

impl EliminationOrder {
    /// Returns `None` unless `order` is a permutation of `0..n`.
    pub fn new(n: usize, order: Vec<VertexId>) -> Option<Self> {
        if order.len() != n {
            return None;
        }
        let mut seen = vec![false; n];
        for v in &order {
            if v.index() >= n || std::mem::replace(&mut seen[v.index()], true) {
                return None;
            }
        }
        Some(EliminationOrder { order })
    }

    pub fn as_slice(&self) -> &[VertexId] {
        &self.order
    }

    /// Standard elimination-game construction: one bag per vertex holding the
    /// vertex and its later neighbours in the fill graph, hung below the bag of
    /// the earliest-eliminated such neighbour.
    pub fn to_decomposition(
        &self,
        g: &Multigraph,
    ) -> Result<TreeDecomposition, TreeDecompositionError> {
        let n = g.vertex_count();
        let mut pos = vec![0; n];
        for (i, v) in self.order.iter().enumerate() {
            pos[v.index()] = i;
        }
        let mut fill = simple_adjacency(g);
        let mut bags = Vec::with_capacity(n);
        let mut tree_edges = Vec::with_capacity(n.saturating_sub(1));
        for (i, &v) in self.order.iter().enumerate() {
            let later = eliminate(&mut fill, v.index());
            if let Some(&first) = later.iter().min_by_key(|&&u| pos[u]) {
                tree_edges.push((i, pos[first]));
            } else if i + 1 != n {
                return Err(TreeDecompositionError::GraphNotConnected);
            }
            let mut bag: Vec<VertexId> = later.into_iter().map(VertexId::from).collect();
            bag.push(v);
            bags.push(bag);
        }
        Ok(TreeDecomposition::new(n, bags, tree_edges))
    }
}

fn simple_adjacency(g: &Multigraph) -> Vec<BTreeSet<usize>> {
    let mut adj = vec![BTreeSet::new(); g.vertex_count()];
    for e in g.edges() {
        if !e.is_loop() {
            adj[e.u.index()].insert(e.v.index());
            adj[e.v.index()].insert(e.u.index());
        }
    }
    adj
}

/// Removes `v`, turning its neighbourhood into a clique. Returns the
/// neighbourhood.
fn eliminate(adj: &mut [BTreeSet<usize>], v: usize) -> Vec<usize> {
    let nbrs: Vec<usize> = std::mem::take(&mut adj[v]).into_iter().collect();
    for &a in &nbrs {
        adj[a].remove(&v);
        for &b in &nbrs {
            if a != b {
                adj[a].insert(b);
            }
        }
    }
    nbrs
}

fn fill_in(adj: &[BTreeSet<usize>], v: usize) -> usize {
    let nbrs: Vec<usize> = adj[v].iter().copied().collect();
    let mut missing = 0;
    for (i, &a) in nbrs.iter().enumerate() {
        for &b in &nbrs[i + 1..] {
            if !adj[a].contains(&b) {
                missing += 1;
            }
        }
    }
    missing
}

/// Greedy elimination order. Ties go to the lowest vertex id.
pub fn elimination_order(g: &Multigraph, strategy: Strategy) -> EliminationOrder {
    let n = g.vertex_count();
    let mut adj = simple_adjacency(g);
    let score = |adj: &[BTreeSet<usize>], v: usize| match strategy {
        Strategy::MinDegree => adj[v].len(),
        Strategy::MinFill => fill_in(adj, v),
    };
    let mut key: Vec<usize> = (0..n).map(|v| score(&adj, v)).collect();
    let mut queue: BTreeSet<(usize, usize)> = (0..n).map(|v| (key[v], v)).collect();
    let mut alive = vec![true; n];
    let mut order = Vec::with_capacity(n);

    while let Some((_, v)) = queue.pop_first() {
        alive[v] = false;
        order.push(VertexId::from(v));
        let nbrs = eliminate(&mut adj, v);
        let mut touched: BTreeSet<usize> = nbrs.iter().copied().collect();
        if strategy == Strategy::MinFill {
            for &a in &nbrs {
                touched.extend(adj[a].iter().copied());
            }
        }
        for u in touched {
            if !alive[u] {
                continue;
            }
            let fresh = score(&adj, u);
            if fresh != key[u] {
                queue.remove(&(key[u], u));
                key[u] = fresh;
                queue.insert((fresh, u));
            }
        }
    }
    EliminationOrder { order }
}

/// Decomposes a connected graph with a greedy elimination heuristic.
pub fn heuristic_decompose(
    g: &Multigraph,
    strategy: Strategy,
) -> Result<TreeDecomposition, TreeDecompositionError> {
    if !g.is_connected() {
        return Err(TreeDecompositionError::GraphNotConnected);
    }
    elimination_order(g, strategy).to_decomposition(g)
}
