use std::collections::{BTreeMap, HashMap};

use crate::graph::{separation_holds, VertexId};
use crate::treedec::{RootedDecomposition, TreeDecomposition};

use super::instance::{lift, PlainInstance};
use super::part::{fold_into_pairs, merge_all, pair_count, EdgePart};
use super::shrink::{shrink_side, MAX_SIDE};
use super::ReliabilityError;

/// Widest decomposition the solver accepts: bags grow by one when the
/// distinguished target is added, and their pairs must fit a 64-bit mask.
pub const MAX_WIDTH: usize = MAX_SIDE - 2;

/// Edges of the largest part a width-`k` run may create.
pub fn part_cap_for_width(k: usize) -> usize {
    pair_count(k + 2)
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct SolveOptions {
    /// Re-check separation and part housing before every shrink step.
    pub debug_invariants: bool,
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct SolveStats {
    pub width: usize,
    pub bag_count: usize,
    pub shrink_steps: usize,
    pub merge_steps: usize,
    /// Most outcome entries stored by any single part.
    pub max_part_table: usize,
    /// Most edges spanned by any single part.
    pub max_part_edges: usize,
    pub source_in_targets: bool,
}

impl SolveStats {
    fn record(&mut self, part: &EdgePart) {
        self.max_part_table = self.max_part_table.max(part.support().len());
        self.max_part_edges = self.max_part_edges.max(part.edge_count());
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct Solution {
    pub reliability: f64,
    pub stats: SolveStats,
}

/// Non-root bags in removal order, each with its parent: deepest first,
/// lower bag id first within a depth.
pub fn leaf_schedule(td: &RootedDecomposition) -> Vec<(usize, usize)> {
    let mut bags: Vec<usize> = (0..td.bag_count()).filter(|&b| b != td.root()).collect();
    bags.sort_by_key(|&b| (std::cmp::Reverse(td.depth(b)), b));
    bags.into_iter()
        .map(|b| (b, td.parent(b).expect("non-root bag has a parent")))
        .collect()
}

/// Validates `td` against the instance graph, roots it at the source and
/// solves.
pub fn solve(
    p: &PlainInstance,
    td: TreeDecomposition,
    opts: SolveOptions,
) -> Result<Solution, ReliabilityError> {
    let violations = td.validate(p.graph());
    if !violations.is_empty() {
        return Err(ReliabilityError::DecompositionInvalid(violations));
    }
    let rooted = td.root_at_source(p.source())?;
    solve_treewidth(p, &rooted, opts)
}

/// Live parts, indexed by their vertex sets so that "all parts inside this
/// bag" costs one lookup per subset of the bag.
struct PartStore {
    slots: Vec<Option<EdgePart>>,
    by_vertices: HashMap<VertexKey, Vec<usize>>,
}

/// A sorted vertex set of at most `MAX_SIDE` members, stored inline.
#[derive(Clone, Copy, PartialEq, Eq, Hash)]
struct VertexKey {
    len: u8,
    ids: [u32; MAX_SIDE],
}

impl VertexKey {
    fn new(vs: impl IntoIterator<Item = VertexId>) -> Self {
        let mut key = VertexKey {
            len: 0,
            ids: [0; MAX_SIDE],
        };
        for v in vs {
            key.ids[key.len as usize] = v.0;
            key.len += 1;
        }
        key
    }
}

impl PartStore {
    fn new() -> Self {
        PartStore {
            slots: Vec::new(),
            by_vertices: HashMap::new(),
        }
    }

    fn insert(&mut self, part: EdgePart) {
        let id = self.slots.len();
        self.by_vertices
            .entry(VertexKey::new(part.vertices().iter().copied()))
            .or_default()
            .push(id);
        self.slots.push(Some(part));
    }

    /// Removes and returns every live part whose vertices lie in `set`, in
    /// insertion order.
    fn take_within(&mut self, set: &[VertexId]) -> Vec<EdgePart> {
        let w = set.len();
        let mut ids = Vec::new();
        for subset in 1u32..1 << w {
            let key = VertexKey::new((0..w).filter(|i| subset >> i & 1 == 1).map(|i| set[i]));
            if let Some(list) = self.by_vertices.remove(&key) {
                ids.extend(list);
            }
        }
        ids.sort_unstable();
        ids.into_iter()
            .map(|id| self.slots[id].take().expect("indexed part is live"))
            .collect()
    }

    fn live(&self) -> impl Iterator<Item = &EdgePart> {
        self.slots.iter().flatten()
    }
}

fn intersect(a: &[VertexId], b: &[VertexId]) -> Vec<VertexId> {
    a.iter()
        .copied()
        .filter(|v| b.binary_search(v).is_ok())
        .collect()
}

/// Exact reliability by repeated shrinking along `td`.
///
/// The smallest target is added to every bag. Bags are then removed in
/// [`leaf_schedule`] order: the parts inside the leaf are replaced by one
/// part over its separator with the parent, after which all parts inside
/// the parent are merged. The root bag's remaining parts are enumerated.
pub fn solve_treewidth(
    p: &PlainInstance,
    td: &RootedDecomposition,
    opts: SolveOptions,
) -> Result<Solution, ReliabilityError> {
    let violations = td.decomposition().validate(p.graph());
    if !violations.is_empty() {
        return Err(ReliabilityError::DecompositionInvalid(violations));
    }
    if !td.bag(td.root()).contains(p.source()) {
        return Err(ReliabilityError::SourceNotInRoot);
    }
    let width = td.width();
    let mut stats = SolveStats {
        width,
        bag_count: td.bag_count(),
        source_in_targets: p.source_is_target(),
        ..SolveStats::default()
    };
    if stats.source_in_targets {
        return Ok(Solution {
            reliability: 1.0,
            stats,
        });
    }
    if width > MAX_WIDTH {
        return Err(ReliabilityError::WidthTooLarge {
            width,
            max: MAX_WIDTH,
        });
    }
    let cap = part_cap_for_width(width);

    let n = p.graph().vertex_count();
    let mut is_target = vec![false; n];
    for t in p.targets() {
        is_target[t.index()] = true;
    }
    let t_star = p.targets()[0];

    let mut bags: Vec<Vec<VertexId>> = (0..td.bag_count())
        .map(|b| {
            let mut vs = td.bag(b).vertices.clone();
            if let Err(pos) = vs.binary_search(&t_star) {
                vs.insert(pos, t_star);
            }
            vs
        })
        .collect();
    let mut alive = vec![true; bags.len()];

    let mut store = PartStore::new();
    for part in lift(p).parts() {
        stats.record(part);
        store.insert(part.clone());
    }

    for (leaf, parent) in leaf_schedule(td) {
        let separator = intersect(&bags[leaf], &bags[parent]);
        if opts.debug_invariants {
            check_invariants(&bags, &alive, leaf, &separator, &store, p.source())?;
        }
        let inside = store.take_within(&bags[leaf]);
        let refs: Vec<&EdgePart> = inside.iter().collect();
        let replacement = shrink_side(&refs, &bags[leaf], &separator, t_star, |v| {
            is_target[v.index()]
        });
        stats.shrink_steps += 1;
        stats.record(&replacement);
        store.insert(replacement);
        alive[leaf] = false;
        bags[leaf].clear();

        let group = store.take_within(&bags[parent]);
        if group.len() > 1 {
            let refs: Vec<&EdgePart> = group.iter().collect();
            let merged = merge_all(&refs, cap)?;
            stats.merge_steps += 1;
            stats.record(&merged);
            store.insert(merged);
        } else {
            group.into_iter().for_each(|part| store.insert(part));
        }
    }

    let root = &bags[td.root()];
    let parts: Vec<&EdgePart> = store.live().collect();
    if parts.iter().any(|part| !part.lies_within(root)) {
        return Err(ReliabilityError::InvariantViolated(
            "a part survived outside the root bag".into(),
        ));
    }
    let law = fold_into_pairs(&parts, root);
    let reliability = enumerate_root(&law, root, p.source(), |v| is_target[v.index()]);
    Ok(Solution { reliability, stats })
}

/// Sum of the probability of every simple subgraph of the root bag in which
/// the source reaches a target.
fn enumerate_root(
    law: &BTreeMap<u64, f64>,
    root: &[VertexId],
    source: VertexId,
    is_target: impl Fn(VertexId) -> bool,
) -> f64 {
    let w = root.len();
    let mut pairs = Vec::with_capacity(pair_count(w));
    for i in 0..w {
        for j in i + 1..w {
            pairs.push((i, j));
        }
    }
    let s = root.binary_search(&source).expect("source in root");
    let targets: u32 = (0..w)
        .filter(|&i| is_target(root[i]))
        .fold(0, |m, i| m | 1 << i);
    let mut total = 0.0;
    for (&outcome, &p) in law {
        let mut adj = [0u32; 32];
        let mut rest = outcome;
        while rest != 0 {
            let (i, j) = pairs[rest.trailing_zeros() as usize];
            adj[i] |= 1 << j;
            adj[j] |= 1 << i;
            rest &= rest - 1;
        }
        let mut comp = 1u32 << s;
        let mut frontier = comp;
        while frontier != 0 {
            let x = frontier.trailing_zeros() as usize;
            frontier &= frontier - 1;
            let fresh = adj[x] & !comp;
            comp |= fresh;
            frontier |= fresh;
        }
        if comp & targets != 0 {
            total += p;
        }
    }
    total
}

/// Part housing and the cut property at the current step. Quadratic; only
/// run on request.
fn check_invariants(
    bags: &[Vec<VertexId>],
    alive: &[bool],
    leaf: usize,
    separator: &[VertexId],
    store: &PartStore,
    source: VertexId,
) -> Result<(), ReliabilityError> {
    let fail = |msg: String| Err(ReliabilityError::InvariantViolated(msg));
    let live_bags: Vec<usize> = (0..bags.len()).filter(|&b| alive[b]).collect();
    for part in store.live() {
        if !live_bags.iter().any(|&b| part.lies_within(&bags[b])) {
            return fail(format!(
                "part over {:?} lies in no live bag",
                part.vertices()
            ));
        }
    }
    let mut a: Vec<VertexId> = live_bags
        .iter()
        .filter(|&&b| b != leaf)
        .flat_map(|&b| bags[b].iter().copied())
        .collect();
    a.sort_unstable();
    a.dedup();
    let b = &bags[leaf];
    if intersect(&a, b) != separator {
        return fail(format!("A ∩ B differs from the separator at bag {leaf}"));
    }
    if a.binary_search(&source).is_err() {
        return fail("source left side A".into());
    }
    let in_a = |v: &VertexId| a.binary_search(v).is_ok();
    let in_b = |v: &VertexId| b.binary_search(v).is_ok();
    let mut vertices: Vec<VertexId> = a.iter().chain(b).copied().collect();
    vertices.sort_unstable();
    vertices.dedup();
    let ok = separation_holds(
        vertices.iter().map(|v| (in_a(v), in_b(v))),
        store
            .live()
            .flat_map(|p| p.edges().iter())
            .map(|e| (in_a(&e.u), in_b(&e.u), in_a(&e.v), in_b(&e.v))),
    );
    if !ok {
        return fail(format!("(A, V(b)) is not a separation at bag {leaf}"));
    }
    Ok(())
}
