//! Compressing a subgraph on a bag down to an edge set on a subset `B*` of
//! the bag while keeping what matters for reachability: which `B*` vertices
//! reach a target, and how the others are grouped into components.

use crate::graph::{Edge, EdgeSet, Multigraph, VertexId};

use super::part::{pair_count, pair_index};
use super::ReliabilityError;

/// Digest of the active edges of `g` onto `b_star`.
///
/// Every vertex of `b_star` that reaches a target is joined to `t_star`;
/// every component without a target is replaced by a star centred on its
/// smallest `b_star` vertex. The vertex set of `g` plays the role of `B`.
pub fn digest(
    g: &Multigraph,
    active: &EdgeSet,
    b_star: &[VertexId],
    t_star: VertexId,
    targets: &[VertexId],
) -> Result<Vec<Edge>, ReliabilityError> {
    if !b_star.contains(&t_star) {
        return Err(ReliabilityError::TStarNotInBStar);
    }
    if !targets.contains(&t_star) {
        return Err(ReliabilityError::TStarNotTarget);
    }
    if let Some(&v) = b_star.iter().find(|v| !g.contains_vertex(**v)) {
        return Err(ReliabilityError::UnknownVertex(v));
    }
    let labels = g.connected_components(active);
    let mut has_target = vec![false; g.vertex_count()];
    for &t in targets {
        if g.contains_vertex(t) {
            has_target[labels[t.index()].index()] = true;
        }
    }
    let mut b_star: Vec<VertexId> = b_star.to_vec();
    b_star.sort_unstable();
    b_star.dedup();

    let mut out = Vec::new();
    let mut centre: Vec<Option<VertexId>> = vec![None; g.vertex_count()];
    for &a in &b_star {
        let label = labels[a.index()].index();
        if has_target[label] {
            if a != t_star {
                out.push(Edge::new(a, t_star));
            }
        } else {
            // b_star is sorted, so the first member seen is the smallest
            match centre[label] {
                None => centre[label] = Some(a),
                Some(c) => out.push(Edge::new(c, a)),
            }
        }
    }
    out.sort_unstable();
    Ok(out)
}

/// Bit-parallel digest over a bag of at most 32 vertices, mapping an
/// outcome mask over the pairs of the bag to a mask over the pairs of `B*`.
pub(crate) struct LocalDigest {
    w: usize,
    /// Endpoints (local indices) of each pair bit of the bag.
    pairs: Vec<(usize, usize)>,
    b_star_mask: u32,
    target_mask: u32,
    t_star: usize,
    /// Position of each bag vertex inside `B*`, if present.
    star_pos: Vec<usize>,
    star_len: usize,
}

impl LocalDigest {
    /// `bag` and `b_star` sorted; `b_star ⊆ bag`; `t_star ∈ b_star`.
    pub(crate) fn new(
        bag: &[VertexId],
        b_star: &[VertexId],
        t_star: VertexId,
        is_target: impl Fn(VertexId) -> bool,
    ) -> Self {
        let w = bag.len();
        debug_assert!(w <= 32 && pair_count(w) <= 64);
        let mut pairs = Vec::with_capacity(pair_count(w));
        for i in 0..w {
            for j in i + 1..w {
                pairs.push((i, j));
            }
        }
        let mut b_star_mask = 0u32;
        let mut target_mask = 0u32;
        let mut star_pos = vec![usize::MAX; w];
        for (i, &v) in bag.iter().enumerate() {
            if let Ok(pos) = b_star.binary_search(&v) {
                b_star_mask |= 1 << i;
                star_pos[i] = pos;
            }
            if is_target(v) {
                target_mask |= 1 << i;
            }
        }
        let t_star = bag.binary_search(&t_star).expect("t* outside the bag");
        LocalDigest {
            w,
            pairs,
            b_star_mask,
            target_mask,
            t_star,
            star_pos,
            star_len: b_star.len(),
        }
    }

    fn star_bit(&self, a: usize, b: usize) -> u64 {
        let (x, y) = (self.star_pos[a], self.star_pos[b]);
        let (x, y) = if x < y { (x, y) } else { (y, x) };
        1u64 << pair_index(self.star_len, x, y)
    }

    pub(crate) fn apply(&self, outcome: u64) -> u64 {
        let mut adj = [0u32; 32];
        let mut rest = outcome;
        while rest != 0 {
            let (i, j) = self.pairs[rest.trailing_zeros() as usize];
            adj[i] |= 1 << j;
            adj[j] |= 1 << i;
            rest &= rest - 1;
        }
        let mut unvisited: u32 = if self.w == 32 {
            u32::MAX
        } else {
            (1u32 << self.w) - 1
        };
        let mut out = 0u64;
        while unvisited != 0 {
            let start = unvisited.trailing_zeros() as usize;
            let mut comp = 1u32 << start;
            let mut frontier = comp;
            while frontier != 0 {
                let x = frontier.trailing_zeros() as usize;
                frontier &= frontier - 1;
                let fresh = adj[x] & !comp;
                comp |= fresh;
                frontier |= fresh;
            }
            unvisited &= !comp;
            let mut members = comp & self.b_star_mask;
            if members == 0 {
                continue;
            }
            if comp & self.target_mask != 0 {
                members &= !(1 << self.t_star);
                while members != 0 {
                    let a = members.trailing_zeros() as usize;
                    members &= members - 1;
                    out |= self.star_bit(a, self.t_star);
                }
            } else {
                let c = members.trailing_zeros() as usize;
                members &= members - 1;
                while members != 0 {
                    let a = members.trailing_zeros() as usize;
                    members &= members - 1;
                    out |= self.star_bit(c, a);
                }
            }
        }
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::reliability::part::complete_edges;

    fn vs(xs: &[u32]) -> Vec<VertexId> {
        xs.iter().map(|&x| VertexId(x)).collect()
    }

    fn e(a: u32, b: u32) -> Edge {
        Edge::new(VertexId(a), VertexId(b))
    }

    #[test]
    fn empty_subgraph_digests_to_nothing() {
        let g = Multigraph::from_edges(2, [(0, 1)]).unwrap();
        let f = digest(&g, &EdgeSet::empty(1), &vs(&[0, 1]), VertexId(1), &vs(&[1])).unwrap();
        assert!(f.is_empty());
    }

    #[test]
    fn non_target_component_becomes_star_at_min() {
        // B = {1,2,3,4} -> ids 0..4, B* = {1,2,4}, t* = 4, E' = {{1,2}}
        let g = Multigraph::from_edges(4, [(0, 1), (1, 2), (2, 3)]).unwrap();
        let active = EdgeSet::from_ids(3, [crate::graph::EdgeId(0)]);
        let f = digest(&g, &active, &vs(&[0, 1, 3]), VertexId(3), &vs(&[3])).unwrap();
        assert_eq!(f, vec![e(0, 1)]);
    }

    #[test]
    fn target_reaching_vertices_join_t_star() {
        // components: {0,1,5} with target 5, {2,3}, {4}; other target 6 = t*
        let g = Multigraph::from_edges(7, [(0, 1), (1, 5), (2, 3)]).unwrap();
        let f = digest(
            &g,
            &EdgeSet::full(3),
            &vs(&[0, 1, 2, 3, 4, 6]),
            VertexId(6),
            &vs(&[5, 6]),
        )
        .unwrap();
        assert_eq!(f, vec![e(0, 6), e(1, 6), e(2, 3)]);
    }

    #[test]
    fn isolated_target_in_b_star_links_to_t_star() {
        let g = Multigraph::from_edges(3, [(0, 1)]).unwrap();
        let f = digest(
            &g,
            &EdgeSet::empty(1),
            &vs(&[0, 2]),
            VertexId(2),
            &vs(&[0, 2]),
        )
        .unwrap();
        assert_eq!(f, vec![e(0, 2)]);
    }

    #[test]
    fn t_star_checks() {
        let g = Multigraph::from_edges(2, [(0, 1)]).unwrap();
        let none = EdgeSet::empty(1);
        assert_eq!(
            digest(&g, &none, &vs(&[0]), VertexId(1), &vs(&[1])),
            Err(ReliabilityError::TStarNotInBStar)
        );
        assert_eq!(
            digest(&g, &none, &vs(&[0, 1]), VertexId(1), &vs(&[0])),
            Err(ReliabilityError::TStarNotTarget)
        );
    }

    #[test]
    fn local_matches_public_exhaustively() {
        // every simple subgraph of K5 with B* = {0,2,3,4}, targets {3,1}, t* = 3
        let bag = vs(&[0, 1, 2, 3, 4]);
        let b_star = vs(&[0, 2, 3, 4]);
        let targets = vs(&[1, 3]);
        let pairs = complete_edges(&bag);
        let g =
            Multigraph::from_edges(5, pairs.iter().map(|e| (e.u.index(), e.v.index()))).unwrap();
        let star_pairs = complete_edges(&b_star);
        let local = LocalDigest::new(&bag, &b_star, VertexId(3), |v| targets.contains(&v));
        for outcome in 0..1u64 << pairs.len() {
            let active = EdgeSet::from_mask(pairs.len(), outcome);
            let expect = digest(&g, &active, &b_star, VertexId(3), &targets).unwrap();
            let got = local.apply(outcome);
            let got: Vec<Edge> = (0..star_pairs.len())
                .filter(|&k| got >> k & 1 == 1)
                .map(|k| star_pairs[k])
                .collect();
            assert_eq!(got, expect, "outcome {outcome:#b}");
        }
    }
}
