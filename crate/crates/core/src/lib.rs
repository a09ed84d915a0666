//! Gradient-boosted regression trees over labelled graphs.
//!
//! Every internal tree node tests whether the input graph contains a
//! connected subgraph pattern. The best pattern for a node is found exactly
//! by a branch-and-bound search over the gSpan enumeration tree of the
//! training graphs, pruned with a tight lower bound on the split objective
//! of all extensions of a pattern.

pub mod boost;
pub mod cache;
pub mod dataset;
pub mod dfs_code;
pub mod enumerate;
pub mod error;
pub mod eval;
pub mod graph;
pub mod graphxor;
pub mod io;
pub mod matcher;
pub mod split;
pub mod tree;
pub mod tss;

pub use boost::{fit, BoostedModel, FitParams, Loss};
pub use cache::PatternCache;
pub use dataset::Dataset;
pub use dfs_code::{canonical_code, is_minimal, DfsCode, DfsEdge, Pattern};
pub use enumerate::{enumerate, EnumBudget, OccurrenceSet, VisitDecision};
pub use graph::{LabelDict, LabeledGraph};
pub use matcher::contains;
pub use split::{find_best_split, SearchConfig, SplitCandidate};
pub use tss::{lower_bound, TssStats};
