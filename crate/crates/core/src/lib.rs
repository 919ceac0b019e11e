//! Exact source-to-target network reliability on graphs of bounded treewidth.
//!
//! The solver walks a rooted tree decomposition from the leaves up, replacing
//! each removed subtree by one correlated edge distribution on the separator
//! it hangs from, and finishes by enumerating the root bag.

pub mod format;
pub mod generate;
pub mod graph;
pub mod oracle;
pub mod reliability;
pub mod treedec;
