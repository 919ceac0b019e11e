//! Reference answers computed without any of the part machinery: exhaustive
//! enumeration of edge subsets and seeded Monte Carlo sampling.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use thiserror::Error;

use crate::graph::EdgeSet;
use crate::reliability::PlainInstance;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum OracleError {
    #[error("exhaustive enumeration over {edges} edges exceeds the limit of {limit}")]
    TooManyEdges { edges: usize, limit: usize },
}

pub const EXHAUSTIVE_LIMIT: usize = 30;

/// Direct `2^m` loop over raw edge subsets with a plain DFS per subset.
pub fn exhaustive(p: &PlainInstance) -> Result<f64, OracleError> {
    let g = p.graph();
    let m = g.edge_count();
    if m > EXHAUSTIVE_LIMIT {
        return Err(OracleError::TooManyEdges {
            edges: m,
            limit: EXHAUSTIVE_LIMIT,
        });
    }
    let n = g.vertex_count();
    let ends: Vec<(usize, usize)> = g
        .edges()
        .iter()
        .map(|e| (e.u.index(), e.v.index()))
        .collect();
    let probs: Vec<f64> = p.probs().iter().map(|x| x.value()).collect();
    let mut is_target = vec![false; n];
    for t in p.targets() {
        is_target[t.index()] = true;
    }
    let s = p.source().index();

    let mut total = 0.0;
    let mut seen = vec![false; n];
    for subset in 0u64..1 << m {
        seen.iter_mut().for_each(|x| *x = false);
        seen[s] = true;
        // relax edges until nothing changes; m is tiny
        let mut changed = true;
        while changed {
            changed = false;
            for (k, &(a, b)) in ends.iter().enumerate() {
                if subset >> k & 1 == 1 && seen[a] != seen[b] {
                    seen[a] = true;
                    seen[b] = true;
                    changed = true;
                }
            }
        }
        if (0..n).any(|v| seen[v] && is_target[v]) {
            let mut weight = 1.0;
            for (k, &q) in probs.iter().enumerate() {
                weight *= if subset >> k & 1 == 1 { q } else { 1.0 - q };
            }
            total += weight;
        }
    }
    Ok(total)
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct McEstimate {
    pub estimate: f64,
    pub samples: u64,
    /// Normal-approximation 95% half-width, `1.96 * sqrt(e (1 - e) / samples)`.
    pub half_width_95: f64,
    pub seed: u64,
}

/// Fraction of sampled subgraphs in which the source reaches a target.
///
/// Samples come from ChaCha8 seeded with `seed_from_u64(seed)`; each sample
/// draws one `f64` per edge in edge-id order and keeps the edge when the
/// draw is below its probability.
pub fn monte_carlo(p: &PlainInstance, samples: u64, seed: u64) -> McEstimate {
    let samples = samples.max(1);
    let g = p.graph();
    let m = g.edge_count();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut active = EdgeSet::empty(m);
    let mut hits = 0u64;
    for _ in 0..samples {
        for (k, q) in p.probs().iter().enumerate() {
            let e = crate::graph::EdgeId(k as u32);
            if rng.gen::<f64>() < q.value() {
                active.insert(e);
            } else {
                active.remove(e);
            }
        }
        if g.reaches(&active, p.source(), p.targets()) {
            hits += 1;
        }
    }
    let estimate = hits as f64 / samples as f64;
    McEstimate {
        estimate,
        samples,
        half_width_95: 1.96 * (estimate * (1.0 - estimate) / samples as f64).sqrt(),
        seed,
    }
}
