//! Best subgraph split of a regression-tree node by branch and bound.
//!
//! Minimizes `tss(D1(g)) + tss(D0(g))` over every pattern `g` of the
//! enumeration tree. Because `D1` can only shrink along a branch, the
//! objective of any descendant is at least the best way of moving part of
//! the current `D1` over to `D0`, which [`lower_bound`] computes exactly;
//! a subtree is skipped once that bound cannot beat the incumbent.

use fixedbitset::FixedBitSet;

use crate::cache::{PatternCache, PatternNode};
use crate::dfs_code::DfsCode;
use crate::enumerate::EnumBudget;
use crate::tss::{lower_bound, TssStats};

/// Relative slack on the prune test so rounding in the bound never
/// discards an optimum.
pub const PRUNE_TOLERANCE: f64 = 1e-12;

/// Objective a split must beat: the unsplit node's TSS less a margin for
/// the cancellation error of the sum-of-squares form, so constant residuals
/// never yield a spurious split.
pub fn improvement_threshold(node: &TssStats) -> f64 {
    node.tss() - 1e-12 * node.sumsq.max(1.0)
}

#[derive(Debug, Clone, PartialEq)]
pub struct SplitCandidate {
    pub pattern: DfsCode,
    pub objective: f64,
    /// node graphs containing the pattern
    pub left_ids: Vec<usize>,
    /// node graphs not containing it
    pub right_ids: Vec<usize>,
}

impl SplitCandidate {
    pub fn is_valid(&self) -> bool {
        !self.left_ids.is_empty() && !self.right_ids.is_empty()
    }
}

/// Residual statistics of the containing / non-containing sides, summed in
/// `node_ids` order. Every search path evaluates objectives through this.
#[inline]
pub fn partition_stats(node_ids: &[usize], residuals: &[f64], members: &FixedBitSet) -> (TssStats, TssStats) {
    let mut inside = TssStats::default();
    let mut outside = TssStats::default();
    for &i in node_ids {
        if members.contains(i) {
            inside.push(residuals[i]);
        } else {
            outside.push(residuals[i]);
        }
    }
    (inside, outside)
}

pub fn split_objective(
    node_ids: &[usize],
    residuals: &[f64],
    pattern_graph_ids: &FixedBitSet,
    pattern: DfsCode,
) -> SplitCandidate {
    let (inside, outside) = partition_stats(node_ids, residuals, pattern_graph_ids);
    let (left_ids, right_ids) = node_ids.iter().partition(|&&i| pattern_graph_ids.contains(i));
    SplitCandidate { pattern, objective: inside.tss() + outside.tss(), left_ids, right_ids }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SearchConfig {
    pub budget: EnumBudget,
    /// Both sides of a returned split hold at least this many graphs.
    pub min_leaf: usize,
    pub prune: bool,
}

impl Default for SearchConfig {
    fn default() -> Self {
        Self { budget: EnumBudget::default(), min_leaf: 1, prune: true }
    }
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, serde::Serialize, serde::Deserialize)]
pub struct SearchStats {
    pub visited: usize,
    pub pruned_subtrees: usize,
}

impl std::ops::AddAssign for SearchStats {
    fn add_assign(&mut self, o: Self) {
        self.visited += o.visited;
        self.pruned_subtrees += o.pruned_subtrees;
    }
}

struct Search<'a, 'g> {
    cache: &'a PatternCache<'g>,
    config: &'a SearchConfig,
    node_ids: &'a [usize],
    residuals: &'a [f64],
    /// node ids by descending residual
    by_residual: Vec<usize>,
    scratch: Vec<f64>,
    best_objective: f64,
    best: Option<&'a PatternNode>,
    stats: SearchStats,
    visited_ids: Vec<usize>,
}

impl<'a> Search<'a, '_> {
    fn visit(&mut self, node: &'a PatternNode) {
        self.stats.visited += 1;
        self.visited_ids.push(node.id());
        let (inside, outside) = partition_stats(self.node_ids, self.residuals, node.graph_ids());
        let objective = inside.tss() + outside.tss();
        let min_leaf = self.config.min_leaf;
        if inside.n >= min_leaf && outside.n >= min_leaf && objective < self.best_objective {
            self.best_objective = objective;
            self.best = Some(node);
        }

        if !self.config.budget.allows_children(node.edge_count()) {
            return;
        }
        if self.config.prune {
            // descendants keep at most `inside.n` graphs on the containing side
            if inside.n < min_leaf.max(1) {
                self.stats.pruned_subtrees += 1;
                return;
            }
            self.scratch.clear();
            let members = node.graph_ids();
            self.scratch.extend(self.by_residual.iter().filter(|&&i| members.contains(i)).map(|&i| self.residuals[i]));
            let bound = lower_bound(&self.scratch, outside);
            if bound >= self.best_objective + PRUNE_TOLERANCE * self.best_objective.abs().max(1.0) {
                self.stats.pruned_subtrees += 1;
                return;
            }
        }
        for child in self.cache.children(node) {
            self.visit(child);
        }
    }
}

/// Exact minimizer of the split objective over the patterns within
/// `config.budget`, or `None` when no valid split strictly improves on the
/// unsplit node. Ties go to the pattern visited first.
///
/// `residuals` is indexed by graph id of the cache's graph set; `node_ids`
/// lists the node's graphs.
pub fn find_best_split(
    node_ids: &[usize],
    residuals: &[f64],
    config: &SearchConfig,
    cache: &PatternCache<'_>,
) -> (Option<SplitCandidate>, SearchStats) {
    let mut seen = FixedBitSet::new();
    find_best_split_recording(node_ids, residuals, config, cache, &mut seen)
}

/// [`find_best_split`] that also marks every visited pattern's cache id in `seen`.
pub fn find_best_split_recording(
    node_ids: &[usize],
    residuals: &[f64],
    config: &SearchConfig,
    cache: &PatternCache<'_>,
    seen: &mut FixedBitSet,
) -> (Option<SplitCandidate>, SearchStats) {
    let threshold = improvement_threshold(&TssStats::from_values(node_ids.iter().map(|&i| residuals[i])));
    let mut by_residual = node_ids.to_vec();
    by_residual.sort_by(|&a, &b| residuals[b].total_cmp(&residuals[a]).then(a.cmp(&b)));
    let mut search = Search {
        cache,
        config,
        node_ids,
        residuals,
        by_residual,
        scratch: Vec::with_capacity(node_ids.len()),
        best_objective: threshold,
        best: None,
        stats: SearchStats::default(),
        visited_ids: Vec::new(),
    };
    for root in cache.roots() {
        search.visit(root);
    }
    seen.grow(cache.len());
    for &id in &search.visited_ids {
        seen.insert(id);
    }
    let stats = search.stats;
    let best = search.best.map(|node| split_objective(node_ids, residuals, node.graph_ids(), node.code().clone()));
    (best, stats)
}
