//! Regression trees whose internal nodes test subgraph containment.

use std::cell::RefCell;

use fixedbitset::FixedBitSet;

use crate::cache::PatternCache;
use crate::dfs_code::Pattern;
use crate::graph::LabeledGraph;
use crate::matcher::contains;
use crate::split::{find_best_split_recording, SearchConfig, SearchStats, SplitCandidate};
use crate::tss::TssStats;

#[derive(Debug, Clone, PartialEq)]
pub enum TreeNode {
    Leaf {
        value: f64,
    },
    /// `present` is taken when the graph contains `pattern`.
    Split {
        pattern: Pattern,
        present: usize,
        absent: usize,
    },
}

/// Nodes in preorder; the root is node 0.
#[derive(Debug, Clone, PartialEq)]
pub struct RegressionTree {
    nodes: Vec<TreeNode>,
}

impl RegressionTree {
    pub fn from_nodes(nodes: Vec<TreeNode>) -> Result<Self, String> {
        if nodes.is_empty() {
            return Err("tree has no nodes".into());
        }
        for (i, node) in nodes.iter().enumerate() {
            if let TreeNode::Split { present, absent, .. } = *node {
                if present <= i || absent <= i || present >= nodes.len() || absent >= nodes.len() || present == absent {
                    return Err(format!("node {i} has invalid children ({present}, {absent})"));
                }
            }
        }
        let tree = Self { nodes };
        // every node reachable exactly once
        let mut seen = vec![0usize; tree.nodes.len()];
        let mut stack = vec![0];
        while let Some(i) = stack.pop() {
            seen[i] += 1;
            if let TreeNode::Split { present, absent, .. } = tree.nodes[i] {
                stack.push(present);
                stack.push(absent);
            }
        }
        if seen.iter().any(|&c| c != 1) {
            return Err("tree nodes do not form a tree".into());
        }
        Ok(tree)
    }

    pub fn nodes(&self) -> &[TreeNode] {
        &self.nodes
    }

    pub fn leaf(value: f64) -> Self {
        Self { nodes: vec![TreeNode::Leaf { value }] }
    }

    /// Routes a graph using `test(pattern)` as the containment indicator and
    /// returns the index of the leaf reached.
    pub fn route(&self, mut test: impl FnMut(&Pattern) -> bool) -> usize {
        let mut i = 0;
        loop {
            match &self.nodes[i] {
                TreeNode::Leaf { .. } => return i,
                TreeNode::Split { pattern, present, absent } => {
                    i = if test(pattern) { *present } else { *absent };
                }
            }
        }
    }

    pub fn evaluate(&self, test: impl FnMut(&Pattern) -> bool) -> f64 {
        match self.nodes[self.route(test)] {
            TreeNode::Leaf { value } => value,
            TreeNode::Split { .. } => unreachable!("route ends at a leaf"),
        }
    }

    pub fn predict(&self, g: &LabeledGraph) -> f64 {
        self.evaluate(|p| contains(g, p))
    }

    /// Maximum number of internal nodes on a root-to-leaf path.
    pub fn depth(&self) -> usize {
        fn go(nodes: &[TreeNode], i: usize) -> usize {
            match nodes[i] {
                TreeNode::Leaf { .. } => 0,
                TreeNode::Split { present, absent, .. } => 1 + go(nodes, present).max(go(nodes, absent)),
            }
        }
        go(&self.nodes, 0)
    }

    pub fn patterns(&self) -> impl Iterator<Item = &Pattern> {
        self.nodes.iter().filter_map(|n| match n {
            TreeNode::Split { pattern, .. } => Some(pattern),
            TreeNode::Leaf { .. } => None,
        })
    }
}

/// Source of node splits; the branch-and-bound search and the
/// materialized-matrix baseline both implement it.
pub trait SplitFinder {
    fn find_split(&self, node_ids: &[usize], residuals: &[f64]) -> (Option<SplitCandidate>, SearchStats);

    /// Distinct candidate patterns evaluated so far.
    fn distinct_searched(&self) -> usize;
}

/// Branch-and-bound search over a shared [`PatternCache`]; remembers which
/// patterns its searches have visited.
pub struct BranchAndBound<'a, 'g> {
    cache: &'a PatternCache<'g>,
    config: SearchConfig,
    seen: RefCell<FixedBitSet>,
}

impl<'a, 'g> BranchAndBound<'a, 'g> {
    pub fn new(cache: &'a PatternCache<'g>, config: SearchConfig) -> Self {
        Self { cache, config, seen: RefCell::new(FixedBitSet::new()) }
    }

    /// Distinct patterns visited by all searches so far.
    pub fn distinct_visited(&self) -> usize {
        self.seen.borrow().count_ones(..)
    }
}

impl SplitFinder for BranchAndBound<'_, '_> {
    fn find_split(&self, node_ids: &[usize], residuals: &[f64]) -> (Option<SplitCandidate>, SearchStats) {
        find_best_split_recording(node_ids, residuals, &self.config, self.cache, &mut self.seen.borrow_mut())
    }

    fn distinct_searched(&self) -> usize {
        self.distinct_visited()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct TreeParams {
    pub max_depth: usize,
    pub min_leaf: usize,
}

/// Tree fitted to `(node_ids, residuals)` plus the leaf value assigned to
/// each fitted graph (`fitted[i]` for `i` in `node_ids`).
pub struct TreeFit {
    pub tree: RegressionTree,
    pub fitted: Vec<f64>,
    pub stats: SearchStats,
}

pub fn build_tree(node_ids: &[usize], residuals: &[f64], params: &TreeParams, finder: &impl SplitFinder) -> TreeFit {
    assert!(!node_ids.is_empty(), "cannot fit a tree to no data");
    let mut builder = Builder {
        params,
        finder,
        residuals,
        nodes: Vec::new(),
        fitted: vec![0.0; residuals.len()],
        stats: SearchStats::default(),
    };
    builder.grow(node_ids, 0);
    TreeFit { tree: RegressionTree { nodes: builder.nodes }, fitted: builder.fitted, stats: builder.stats }
}

struct Builder<'a, F> {
    params: &'a TreeParams,
    finder: &'a F,
    residuals: &'a [f64],
    nodes: Vec<TreeNode>,
    fitted: Vec<f64>,
    stats: SearchStats,
}

impl<F: SplitFinder> Builder<'_, F> {
    fn leaf(&mut self, ids: &[usize]) -> usize {
        let value = TssStats::from_values(ids.iter().map(|&i| self.residuals[i])).mean();
        for &i in ids {
            self.fitted[i] = value;
        }
        self.nodes.push(TreeNode::Leaf { value });
        self.nodes.len() - 1
    }

    fn terminal(&self, ids: &[usize], depth: usize) -> bool {
        if depth >= self.params.max_depth || ids.len() < 2 * self.params.min_leaf.max(1) {
            return true;
        }
        let first = self.residuals[ids[0]];
        ids.iter().all(|&i| self.residuals[i] == first)
    }

    fn grow(&mut self, ids: &[usize], depth: usize) -> usize {
        if self.terminal(ids, depth) {
            return self.leaf(ids);
        }
        let (split, stats) = self.finder.find_split(ids, self.residuals);
        self.stats += stats;
        let Some(split) = split else {
            return self.leaf(ids);
        };
        let pattern = Pattern::from_code(split.pattern).expect("search yields well-formed codes");
        let at = self.nodes.len();
        self.nodes.push(TreeNode::Split { pattern, present: 0, absent: 0 });
        let present = self.grow(&split.left_ids, depth + 1);
        let absent = self.grow(&split.right_ids, depth + 1);
        if let TreeNode::Split { present: p, absent: a, .. } = &mut self.nodes[at] {
            *p = present;
            *a = absent;
        }
        at
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::enumerate::EnumBudget;

    fn edge(a: u32, b: u32) -> LabeledGraph {
        LabeledGraph::new(vec![a, b], vec![(0, 1, 0)]).unwrap()
    }

    fn fit(graphs: &[LabeledGraph], res: &[f64], depth: usize) -> TreeFit {
        let cache = PatternCache::new(graphs, 1);
        let finder =
            BranchAndBound::new(&cache, SearchConfig { budget: EnumBudget::default(), min_leaf: 1, prune: true });
        let ids: Vec<_> = (0..graphs.len()).collect();
        build_tree(&ids, res, &TreeParams { max_depth: depth, min_leaf: 1 }, &finder)
    }

    #[test]
    fn constant_residuals_make_a_leaf() {
        let graphs = vec![edge(0, 0), edge(0, 1)];
        let f = fit(&graphs, &[0.5, 0.5], 3);
        assert_eq!(f.tree.nodes(), &[TreeNode::Leaf { value: 0.5 }]);
    }

    #[test]
    fn separable_stump() {
        let graphs = vec![edge(0, 0), edge(0, 1), edge(0, 0), edge(0, 1)];
        let f = fit(&graphs, &[-1.0, 1.0, -1.0, 1.0], 3);
        assert_eq!(f.tree.depth(), 1);
        assert_eq!(f.tree.predict(&graphs[1]), 1.0);
        assert_eq!(f.tree.predict(&graphs[0]), -1.0);
        assert_eq!(f.fitted, vec![-1.0, 1.0, -1.0, 1.0]);
    }

    #[test]
    fn depth_cap() {
        let graphs = vec![edge(0, 0), edge(0, 1), edge(1, 1), edge(1, 2)];
        let f = fit(&graphs, &[0.0, 1.0, 2.0, 3.0], 1);
        assert_eq!(f.tree.depth(), 1);
        let f = fit(&graphs, &[0.0, 1.0, 2.0, 3.0], 5);
        assert!(f.tree.depth() >= 2);
    }

    #[test]
    fn rejects_bad_node_arrays() {
        let p = Pattern::from_code(crate::dfs_code::canonical_code(&edge(0, 1)).unwrap()).unwrap();
        let bad = vec![TreeNode::Split { pattern: p, present: 1, absent: 1 }, TreeNode::Leaf { value: 0.0 }];
        assert!(RegressionTree::from_nodes(bad).is_err());
    }
}
