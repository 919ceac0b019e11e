//! The replacement part built by `shrink` against a literal enumeration of
//! raw `B`-side edge subsets, each weighted by the product of its part
//! probabilities and grouped by digest.

use std::collections::BTreeMap;

use netrel::generate::{random_connected, random_separation};
use netrel::graph::{Edge, EdgeSet, Multigraph, VertexId};
use netrel::reliability::{digest, lift, shrink, ExtendedInstance, MAX_PART_EDGES};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn reference(inst: &ExtendedInstance, a: &[VertexId], b: &[VertexId]) -> BTreeMap<Vec<Edge>, f64> {
    let separator: Vec<VertexId> = a.iter().copied().filter(|v| b.contains(v)).collect();
    let t_star = *separator
        .iter()
        .find(|v| inst.targets().contains(v))
        .unwrap();
    let b_parts: Vec<_> = inst
        .parts()
        .iter()
        .filter(|p| p.vertices().iter().all(|v| b.contains(v)))
        .collect();
    let raw: Vec<Edge> = b_parts
        .iter()
        .flat_map(|p| p.edges().iter().copied())
        .collect();
    let g = Multigraph::from_edges(
        inst.vertex_space(),
        raw.iter().map(|e| (e.u.index(), e.v.index())),
    )
    .unwrap();
    let mut out = BTreeMap::new();
    for subset in 0u64..1 << raw.len() {
        let mut weight = 1.0;
        let mut offset = 0;
        for part in &b_parts {
            let k = part.edge_count();
            weight *= part.prob(subset >> offset & ((1u64 << k) - 1));
            offset += k;
        }
        if weight == 0.0 {
            continue;
        }
        let active = EdgeSet::from_mask(raw.len(), subset);
        let f = digest(&g, &active, &separator, t_star, inst.targets()).unwrap();
        *out.entry(f).or_insert(0.0) += weight;
    }
    out
}

fn as_edge_sets(part: &netrel::reliability::EdgePart) -> BTreeMap<Vec<Edge>, f64> {
    part.support()
        .iter()
        .map(|&(mask, p)| {
            let edges = (0..part.edge_count())
                .filter(|&k| mask >> k & 1 == 1)
                .map(|k| part.edges()[k])
                .collect();
            (edges, p)
        })
        .collect()
}

#[test]
fn shrink_matches_literal_enumeration() {
    let mut rng = ChaCha8Rng::seed_from_u64(0x5eed);
    let mut checked = 0;
    while checked < 150 {
        let n = rng.gen_range(3..=8);
        let m = rng.gen_range(n - 1..=12);
        let mut inst = lift(&random_connected(&mut rng, n, m));
        // a first shrink makes the B side of the second one correlated
        if rng.gen_bool(0.5) {
            if let Some((a, b)) = random_separation(&mut rng, &inst, 3) {
                inst = shrink(&inst, &a, &b, MAX_PART_EDGES).unwrap();
            }
        }
        let Some((a, b)) = random_separation(&mut rng, &inst, 4) else {
            continue;
        };
        let out = shrink(&inst, &a, &b, MAX_PART_EDGES).unwrap();
        let got = as_edge_sets(out.parts().last().unwrap());
        let expect = reference(&inst, &a, &b);
        for (f, p) in &expect {
            let q = got.get(f).copied().unwrap_or(0.0);
            assert!((p - q).abs() <= 1e-12, "digest {f:?}: {p} vs {q}");
        }
        for f in got.keys() {
            assert!(expect.contains_key(f), "unexpected digest {f:?}");
        }
        checked += 1;
    }
}
