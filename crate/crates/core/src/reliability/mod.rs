//! Exact reliability computation.
//!
//! Edges are grouped into independent *parts*, each carrying a joint
//! distribution over its subsets. A plain instance (every edge independent)
//! is the special case of one part per edge. The solver walks a rooted tree
//! decomposition leaf by leaf, replacing everything hanging below a bag by a
//! single correlated part over the separator, until only the root bag is
//! left to enumerate.

mod brute;
mod digest;
mod instance;
mod part;
mod shrink;
mod solver;

use std::fmt;

use thiserror::Error;

use crate::graph::VertexId;
use crate::treedec::{TreeDecompositionError, Violation};

pub use brute::{brute_force_extended, DEFAULT_BRUTE_FORCE_LIMIT};
pub use digest::digest;
pub use instance::{lift, ExtendedInstance, PlainInstance};
pub use part::{pair_count, EdgePart, MAX_PART_EDGES};
pub use shrink::shrink;
pub use solver::{
    leaf_schedule, part_cap_for_width, solve, solve_treewidth, Solution, SolveOptions, SolveStats,
    MAX_WIDTH,
};

/// Tolerance for probabilities and for distributions summing to one.
pub const EPSILON: f64 = 1e-9;

/// A value in `[0, 1]`.
#[derive(Clone, Copy, Debug, PartialEq, PartialOrd, Default)]
pub struct Probability(f64);

impl Probability {
    pub const ZERO: Probability = Probability(0.0);
    pub const ONE: Probability = Probability(1.0);

    /// Accepts values within [`EPSILON`] of `[0, 1]`, clamping them in.
    pub fn new(value: f64) -> Result<Self, ReliabilityError> {
        if !(-EPSILON..=1.0 + EPSILON).contains(&value) {
            return Err(ReliabilityError::ProbabilityOutOfRange(value));
        }
        Ok(Probability(value.clamp(0.0, 1.0)))
    }

    pub fn value(self) -> f64 {
        self.0
    }

    pub fn complement(self) -> Probability {
        Probability(1.0 - self.0)
    }
}

impl fmt::Display for Probability {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(&self.0, f)
    }
}

#[derive(Debug, Error, Clone, PartialEq)]
pub enum ReliabilityError {
    #[error("probability {0} outside [0, 1]")]
    ProbabilityOutOfRange(f64),
    #[error("distribution over {edges} edges needs {expected} entries, got {found}")]
    TableSize {
        edges: usize,
        expected: usize,
        found: usize,
    },
    #[error("distribution sums to {0}, not 1")]
    DistributionNotNormalized(f64),
    #[error("a part may hold at most {max} edges, got {edges}")]
    PartTooLarge { edges: usize, max: usize },
    #[error("expected {expected} edge probabilities, got {found}")]
    ProbabilityCount { expected: usize, found: usize },
    #[error("vertex {0} is not in the instance")]
    UnknownVertex(VertexId),
    #[error("target set is empty")]
    NoTargets,
    #[error("brute force over {edges} edges exceeds the limit of {limit}")]
    TooManyEdgesForBruteForce { edges: usize, limit: usize },
    #[error("(A, B) is not a separation of the instance graph")]
    SeparationInvalid,
    #[error("source vertex is not in A")]
    SourceNotInA,
    #[error("the separator A ∩ B contains no target vertex")]
    NoTargetInSeparator,
    #[error("part {0} has vertices on both sides of the separation")]
    PartStraddlesSeparation(usize),
    #[error("separator of {size} vertices gives a part over {edges} edges, cap is {cap}")]
    SeparatorTooLarge {
        size: usize,
        edges: usize,
        cap: usize,
    },
    #[error("side B has {size} vertices, at most {max} are supported")]
    SideTooLarge { size: usize, max: usize },
    #[error("merged part would span {edges} edges, cap is {cap}")]
    MergedPartTooLarge { edges: usize, cap: usize },
    #[error("part index {index} out of range ({count} parts)")]
    NoSuchPart { index: usize, count: usize },
    #[error("cannot merge a part with itself")]
    SamePart,
    #[error("t* is not in B*")]
    TStarNotInBStar,
    #[error("t* is not a target")]
    TStarNotTarget,
    #[error("invalid tree decomposition: {}", summarize(.0))]
    DecompositionInvalid(Vec<Violation>),
    #[error(transparent)]
    Decomposition(#[from] TreeDecompositionError),
    #[error("root bag does not contain the source")]
    SourceNotInRoot,
    #[error("decomposition width {width} exceeds the supported maximum {max}")]
    WidthTooLarge { width: usize, max: usize },
    #[error("invariant violated: {0}")]
    InvariantViolated(String),
}

impl ReliabilityError {
    /// Errors caused by a size cap rather than by malformed input.
    pub fn is_capacity(&self) -> bool {
        matches!(
            self,
            ReliabilityError::TooManyEdgesForBruteForce { .. }
                | ReliabilityError::SeparatorTooLarge { .. }
                | ReliabilityError::SideTooLarge { .. }
                | ReliabilityError::MergedPartTooLarge { .. }
                | ReliabilityError::PartTooLarge { .. }
                | ReliabilityError::WidthTooLarge { .. }
        )
    }
}

fn summarize(violations: &[Violation]) -> String {
    match violations {
        [] => "no violations".into(),
        [one] => one.to_string(),
        [first, rest @ ..] => format!("{first} (and {} more)", rest.len()),
    }
}
