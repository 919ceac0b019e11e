use super::instance::ExtendedInstance;
use super::ReliabilityError;

pub const DEFAULT_BRUTE_FORCE_LIMIT: usize = 30;

/// Sums, over every edge subset `E'` that joins the source to a target, the
/// product of each part's probability for its share of `E'`.
pub fn brute_force_extended(
    inst: &ExtendedInstance,
    limit: usize,
) -> Result<f64, ReliabilityError> {
    let m = inst.edge_count();
    if m > limit.min(63) {
        return Err(ReliabilityError::TooManyEdgesForBruteForce { edges: m, limit });
    }
    let local = |v| {
        inst.vertices()
            .binary_search(&v)
            .expect("edge endpoint outside instance")
    };
    let n = inst.vertices().len();
    let mut adjacency: Vec<Vec<(usize, usize)>> = vec![Vec::new(); n];
    for (k, e) in inst.edges().enumerate() {
        let (a, b) = (local(e.u), local(e.v));
        if a != b {
            adjacency[a].push((b, k));
            adjacency[b].push((a, k));
        }
    }
    let source = local(inst.source());
    let mut is_target = vec![false; n];
    for &t in inst.targets() {
        is_target[local(t)] = true;
    }
    let mut offsets = Vec::with_capacity(inst.parts().len());
    let mut offset = 0;
    for part in inst.parts() {
        offsets.push(offset);
        offset += part.edge_count();
    }

    let mut seen = vec![false; n];
    let mut stack = Vec::new();
    let mut reaches = |mask: u64| -> bool {
        if is_target[source] {
            return true;
        }
        seen.iter_mut().for_each(|s| *s = false);
        stack.clear();
        stack.push(source);
        seen[source] = true;
        while let Some(x) = stack.pop() {
            for &(y, k) in &adjacency[x] {
                if !seen[y] && mask >> k & 1 == 1 {
                    if is_target[y] {
                        return true;
                    }
                    seen[y] = true;
                    stack.push(y);
                }
            }
        }
        false
    };

    let mut ans = 0.0;
    for mask in 0..1u64 << m {
        if reaches(mask) {
            let mut p = 1.0;
            for (part, &off) in inst.parts().iter().zip(&offsets) {
                let width = part.edge_count();
                let share = if width == 0 {
                    0
                } else {
                    mask >> off & (u64::MAX >> (64 - width))
                };
                p *= part.prob(share);
            }
            ans += p;
        }
    }
    Ok(ans)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::{Multigraph, VertexId};
    use crate::reliability::{lift, PlainInstance, Probability};

    fn plain(
        n: usize,
        edges: &[(usize, usize)],
        probs: &[f64],
        s: u32,
        t: &[u32],
    ) -> PlainInstance {
        let g = Multigraph::from_edges(n, edges.iter().copied()).unwrap();
        PlainInstance::new(
            g,
            probs
                .iter()
                .map(|&p| Probability::new(p).unwrap())
                .collect(),
            VertexId(s),
            t.iter().map(|&x| VertexId(x)).collect(),
        )
        .unwrap()
    }

    fn bf(p: &PlainInstance) -> f64 {
        brute_force_extended(&lift(p), DEFAULT_BRUTE_FORCE_LIMIT).unwrap()
    }

    #[test]
    fn single_edge() {
        assert_eq!(bf(&plain(2, &[(0, 1)], &[0.4], 0, &[1])), 0.4);
    }

    #[test]
    fn series_and_parallel() {
        assert_eq!(bf(&plain(3, &[(0, 1), (1, 2)], &[0.5, 0.5], 0, &[2])), 0.25);
        assert_eq!(bf(&plain(2, &[(0, 1), (0, 1)], &[0.5, 0.5], 0, &[1])), 0.75);
    }

    #[test]
    fn source_in_targets() {
        assert_eq!(bf(&plain(2, &[(0, 1)], &[0.3], 0, &[0, 1])), 1.0);
    }

    #[test]
    fn limit_enforced() {
        let edges: Vec<_> = (0..5).map(|_| (0, 1)).collect();
        let p = plain(2, &edges, &[0.5; 5], 0, &[1]);
        assert_eq!(
            brute_force_extended(&lift(&p), 4),
            Err(ReliabilityError::TooManyEdgesForBruteForce { edges: 5, limit: 4 })
        );
    }
}
