//! Synthetic instance families: fixed-width families for scaling runs and
//! small random connected multigraphs for oracle comparisons.

use rand::Rng;

use crate::graph::{Multigraph, VertexId};
use crate::reliability::{ExtendedInstance, PlainInstance, Probability};

fn uniform(g: Multigraph, p: f64, source: u32, target: u32) -> PlainInstance {
    let probs = vec![Probability::new(p).expect("probability in [0, 1]"); g.edge_count()];
    PlainInstance::new(g, probs, VertexId(source), vec![VertexId(target)])
        .expect("generated instance is valid")
}

/// Path `0 - 1 - ... - (n-1)` from vertex 0 to vertex `n-1`.
pub fn path(n: usize, p: f64) -> PlainInstance {
    assert!(n >= 2);
    let g = Multigraph::from_edges(n, (1..n).map(|v| (v - 1, v))).unwrap();
    uniform(g, p, 0, n as u32 - 1)
}

/// Cycle on `n` vertices, source 0, target roughly opposite.
pub fn cycle(n: usize, p: f64) -> PlainInstance {
    assert!(n >= 3);
    let g = Multigraph::from_edges(n, (0..n).map(|v| (v, (v + 1) % n))).unwrap();
    uniform(g, p, 0, (n / 2) as u32)
}

/// Ladder with `rungs` rungs: rails `2i - 2(i+1)` and `2i+1 - 2(i+1)+1`,
/// rungs `2i - 2i+1`. Source at one end, target at the far corner.
pub fn ladder(rungs: usize, p: f64) -> PlainInstance {
    assert!(rungs >= 2);
    let n = 2 * rungs;
    let mut edges = Vec::with_capacity(3 * rungs);
    for i in 0..rungs {
        edges.push((2 * i, 2 * i + 1));
        if i + 1 < rungs {
            edges.push((2 * i, 2 * i + 2));
            edges.push((2 * i + 1, 2 * i + 3));
        }
    }
    uniform(
        Multigraph::from_edges(n, edges).unwrap(),
        p,
        0,
        n as u32 - 1,
    )
}

/// Chain of `blocks` series-parallel gadgets. Each gadget joins consecutive
/// hubs `h` and `h'` through two internal vertices `x, y` with edges
/// `h-x, h-y, x-y, x-h', y-h'` (a diamond with a chord, width 2).
pub fn series_parallel_chain(blocks: usize, p: f64) -> PlainInstance {
    assert!(blocks >= 1);
    let n = 3 * blocks + 1;
    let mut edges = Vec::with_capacity(5 * blocks);
    for b in 0..blocks {
        let (h, x, y, next) = (3 * b, 3 * b + 1, 3 * b + 2, 3 * b + 3);
        edges.extend([(h, x), (h, y), (x, y), (x, next), (y, next)]);
    }
    uniform(
        Multigraph::from_edges(n, edges).unwrap(),
        p,
        0,
        n as u32 - 1,
    )
}

/// Random connected multigraph on `n` vertices with `m >= n - 1` edges: a
/// random spanning tree plus `m - n + 1` extra edges (parallel edges
/// allowed, no loops). Probabilities uniform in `[0, 1]`; source and a
/// non-empty target set drawn at random.
pub fn random_connected<R: Rng + ?Sized>(rng: &mut R, n: usize, m: usize) -> PlainInstance {
    assert!(n >= 2 && m + 1 >= n);
    let mut edges = Vec::with_capacity(m);
    for v in 1..n {
        edges.push((rng.gen_range(0..v), v));
    }
    while edges.len() < m {
        let u = rng.gen_range(0..n);
        let v = rng.gen_range(0..n);
        if u != v {
            edges.push((u, v));
        }
    }
    // relabel so the tree shape does not always hang off vertex 0
    let mut perm: Vec<usize> = (0..n).collect();
    for i in (1..n).rev() {
        perm.swap(i, rng.gen_range(0..=i));
    }
    let g = Multigraph::from_edges(n, edges.into_iter().map(|(u, v)| (perm[u], perm[v]))).unwrap();
    let probs = (0..m)
        .map(|_| Probability::new(rng.gen::<f64>()).unwrap())
        .collect();
    let source = VertexId(rng.gen_range(0..n) as u32);
    let count = rng.gen_range(1..=2.min(n - 1));
    let mut targets = Vec::with_capacity(count);
    while targets.len() < count {
        let t = VertexId(rng.gen_range(0..n) as u32);
        if t != source && !targets.contains(&t) {
            targets.push(t);
        }
    }
    PlainInstance::new(g, probs, source, targets).unwrap()
}

/// A random separation `(A, B)` of `inst` on which `shrink` is applicable:
/// the source lies in `A`, some target lies in `A ∩ B`, every part lies
/// inside `A` or inside `B`, and `A ∩ B` has at most `max_separator`
/// vertices. Returns `None` when a draw fails those conditions.
pub fn random_separation<R: Rng + ?Sized>(
    rng: &mut R,
    inst: &ExtendedInstance,
    max_separator: usize,
) -> Option<(Vec<VertexId>, Vec<VertexId>)> {
    // side[v]: 0 = A only, 1 = B only, 2 = both
    let space = inst.vertex_space();
    let mut side = vec![0u8; space];
    for &v in inst.vertices() {
        side[v.index()] = rng.gen_range(0..3);
    }
    if side[inst.source().index()] == 1 {
        side[inst.source().index()] = 2;
    }
    let t = inst.targets()[rng.gen_range(0..inst.targets().len())];
    side[t.index()] = 2;
    // a part touching both A \ B and B \ A is pulled entirely into one side
    for part in inst.parts() {
        let has = |s: u8| part.vertices().iter().any(|v| side[v.index()] == s);
        if has(0) && has(1) {
            let pull = if rng.gen_bool(0.5) { 0 } else { 1 };
            for v in part.vertices() {
                if side[v.index()] != 2 && side[v.index()] != pull {
                    side[v.index()] = 2;
                }
            }
        }
    }
    let a: Vec<VertexId> = inst
        .vertices()
        .iter()
        .copied()
        .filter(|v| side[v.index()] != 1)
        .collect();
    let b: Vec<VertexId> = inst
        .vertices()
        .iter()
        .copied()
        .filter(|v| side[v.index()] != 0)
        .collect();
    let separator = b.iter().filter(|v| side[v.index()] == 2).count();
    let split = inst.parts().iter().all(|part| {
        let within = |keep: u8| part.vertices().iter().all(|v| side[v.index()] != keep);
        within(1) || within(0)
    });
    (split && separator <= max_separator).then_some((a, b))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::treedec::{heuristic_decompose, Strategy};
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn family_widths() {
        let w = |p: &PlainInstance| {
            heuristic_decompose(p.graph(), Strategy::MinDegree)
                .unwrap()
                .width()
        };
        assert_eq!(w(&path(50, 0.5)), 1);
        assert_eq!(w(&cycle(50, 0.5)), 2);
        assert_eq!(w(&ladder(50, 0.5)), 2);
        assert_eq!(w(&series_parallel_chain(50, 0.5)), 2);
    }

    #[test]
    fn random_graphs_are_connected() {
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        for _ in 0..200 {
            let n = rng.gen_range(3..=8);
            let m = rng.gen_range(n - 1..=12);
            let p = random_connected(&mut rng, n, m);
            assert!(p.graph().is_connected());
            assert_eq!(p.graph().edge_count(), m);
            assert!(!p.targets().contains(&p.source()));
        }
    }
}
