use std::collections::BTreeMap;

use crate::graph::{separation_holds, VertexId};

use super::digest::LocalDigest;
use super::instance::ExtendedInstance;
use super::part::{fold_into_pairs, pair_count, EdgePart, MAX_PART_EDGES};
use super::ReliabilityError;

/// Largest `B` side the bit-parallel digest handles (its pairs must fit in
/// a 64-bit outcome mask).
pub(crate) const MAX_SIDE: usize = 11;

fn sorted_set(vs: &[VertexId]) -> Vec<VertexId> {
    let mut out = vs.to_vec();
    out.sort_unstable();
    out.dedup();
    out
}

fn intersect(a: &[VertexId], b: &[VertexId]) -> Vec<VertexId> {
    a.iter()
        .copied()
        .filter(|v| b.binary_search(v).is_ok())
        .collect()
}

/// Replaces every part on the `B` side of the separation `(A, B)` by one
/// correlated part over the pairs of `A ∩ B` and drops the vertices of
/// `B \ A`. The reliability of the result equals that of `inst`.
///
/// Parts inside `A ∩ B` count as `B`-side. The distinguished target is the
/// smallest target in `A ∩ B`.
pub fn shrink(
    inst: &ExtendedInstance,
    a_side: &[VertexId],
    b_side: &[VertexId],
    part_cap: usize,
) -> Result<ExtendedInstance, ReliabilityError> {
    let a = sorted_set(a_side);
    let b = sorted_set(b_side);
    let in_a = |v: &VertexId| a.binary_search(v).is_ok();
    let in_b = |v: &VertexId| b.binary_search(v).is_ok();

    let known = |v: &VertexId| inst.vertices().binary_search(v).is_ok();
    let covers = a.iter().chain(&b).all(known)
        && separation_holds(
            inst.vertices().iter().map(|v| (in_a(v), in_b(v))),
            inst.edges()
                .map(|e| (in_a(&e.u), in_b(&e.u), in_a(&e.v), in_b(&e.v))),
        );
    if !covers {
        return Err(ReliabilityError::SeparationInvalid);
    }
    if !in_a(&inst.source()) {
        return Err(ReliabilityError::SourceNotInA);
    }
    let separator = intersect(&a, &b);
    let t_star = *separator
        .iter()
        .find(|v| inst.targets().binary_search(v).is_ok())
        .ok_or(ReliabilityError::NoTargetInSeparator)?;

    let mut a_parts = Vec::new();
    let mut b_parts = Vec::new();
    for (k, part) in inst.parts().iter().enumerate() {
        if part.lies_within(&b) {
            b_parts.push(part);
        } else if part.lies_within(&a) {
            a_parts.push(part.clone());
        } else {
            return Err(ReliabilityError::PartStraddlesSeparation(k));
        }
    }

    let edges = pair_count(separator.len());
    if edges > part_cap.min(MAX_PART_EDGES) {
        return Err(ReliabilityError::SeparatorTooLarge {
            size: separator.len(),
            edges,
            cap: part_cap,
        });
    }
    if b.len() > MAX_SIDE {
        return Err(ReliabilityError::SideTooLarge {
            size: b.len(),
            max: MAX_SIDE,
        });
    }

    let replacement = shrink_side(&b_parts, &b, &separator, t_star, |v| {
        inst.targets().binary_search(&v).is_ok()
    });
    a_parts.push(replacement);
    let targets = intersect(inst.targets(), &a);
    Ok(ExtendedInstance::from_raw(
        inst.vertex_space(),
        a,
        a_parts,
        inst.source(),
        targets,
    ))
}

/// The replacement part: fold the `B`-side parts into a law over the simple
/// subgraphs of `B`, push every outcome through the digest and collect the
/// mass per digest.
pub(crate) fn shrink_side(
    b_parts: &[&EdgePart],
    b: &[VertexId],
    separator: &[VertexId],
    t_star: VertexId,
    is_target: impl Fn(VertexId) -> bool,
) -> EdgePart {
    let law = fold_into_pairs(b_parts, b);
    let digest = LocalDigest::new(b, separator, t_star, is_target);
    let mut out: BTreeMap<u64, f64> = BTreeMap::new();
    for (outcome, p) in law {
        *out.entry(digest.apply(outcome)).or_default() += p;
    }
    EdgePart::complete(separator.to_vec(), out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::Edge;
    use crate::graph::Multigraph;
    use crate::reliability::{brute_force_extended, lift, PlainInstance, Probability};

    fn vs(xs: &[u32]) -> Vec<VertexId> {
        xs.iter().map(|&x| VertexId(x)).collect()
    }

    fn half() -> Probability {
        Probability::new(0.5).unwrap()
    }

    /// s=0, x=1, v=2, t*=3: edges {s,x}, {x,v}, {v,t*}.
    fn path_instance() -> ExtendedInstance {
        let g = Multigraph::from_edges(4, [(0, 1), (1, 2), (2, 3)]).unwrap();
        lift(&PlainInstance::new(g, vec![half(); 3], VertexId(0), vs(&[3])).unwrap())
    }

    #[test]
    fn path_shrinks_to_quarter_edge() {
        let inst = path_instance();
        let out = shrink(&inst, &vs(&[0, 1, 3]), &vs(&[1, 2, 3]), 10).unwrap();
        assert_eq!(out.vertices(), &vs(&[0, 1, 3])[..]);
        let new = out.parts().last().unwrap();
        assert_eq!(new.edges(), &[Edge::new(VertexId(1), VertexId(3))]);
        assert_eq!(new.table(), vec![0.75, 0.25]);
        let before = brute_force_extended(&inst, 30).unwrap();
        let after = brute_force_extended(&out, 30).unwrap();
        assert!((before - after).abs() < 1e-12);
        assert!((after - 0.125).abs() < 1e-12);
    }

    #[test]
    fn degenerate_shrink_keeps_reliability() {
        // B = B* = {1, 3}: a single B-side edge, nothing removed
        let g = Multigraph::from_edges(4, [(0, 1), (1, 3), (0, 2), (2, 3)]).unwrap();
        let inst = lift(&PlainInstance::new(g, vec![half(); 4], VertexId(0), vs(&[3])).unwrap());
        let out = shrink(&inst, &vs(&[0, 1, 2, 3]), &vs(&[1, 3]), 10).unwrap();
        assert_eq!(out.vertices(), inst.vertices());
        assert_eq!(out.parts().len(), 4);
        let before = brute_force_extended(&inst, 30).unwrap();
        let after = brute_force_extended(&out, 30).unwrap();
        assert!((before - after).abs() < 1e-12);
    }

    #[test]
    fn precondition_errors() {
        let inst = path_instance();
        assert_eq!(
            shrink(&inst, &vs(&[0, 3]), &vs(&[1, 2, 3]), 10),
            Err(ReliabilityError::SeparationInvalid)
        );
        assert_eq!(
            shrink(&inst, &vs(&[1, 2, 3]), &vs(&[0, 1, 3]), 10),
            Err(ReliabilityError::SourceNotInA)
        );
        assert_eq!(
            shrink(&inst, &vs(&[0, 1]), &vs(&[1, 2, 3]), 10),
            Err(ReliabilityError::NoTargetInSeparator)
        );
        assert!(matches!(
            shrink(&inst, &vs(&[0, 1, 2, 3]), &vs(&[1, 2, 3]), 2),
            Err(ReliabilityError::SeparatorTooLarge { size: 3, .. })
        ));
        // one correlated part over {s,x} and {v,t*} straddles (A, B)
        let e = |a, b| Edge::new(VertexId(a), VertexId(b));
        let joint = EdgePart::from_table(vec![e(0, 1), e(2, 3)], &[0.5, 0.0, 0.0, 0.5]).unwrap();
        let middle = EdgePart::bernoulli(e(1, 2), half());
        let straddling = ExtendedInstance::new(
            4,
            vs(&[0, 1, 2, 3]),
            vec![middle, joint],
            VertexId(0),
            vs(&[3]),
        )
        .unwrap();
        assert_eq!(
            shrink(&straddling, &vs(&[0, 1, 3]), &vs(&[1, 2, 3]), 10),
            Err(ReliabilityError::PartStraddlesSeparation(1))
        );
    }
}
