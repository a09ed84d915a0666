//! The two-step baseline: enumerate every pattern up to a size, store the
//! explicit indicator matrix, then boost with an exhaustive column scan.

use std::collections::HashMap;

use fixedbitset::FixedBitSet;

use crate::dfs_code::{DfsCode, Pattern};
use crate::enumerate::{try_enumerate, EnumBudget, VisitDecision};
use crate::error::EvalError;
use crate::graph::LabeledGraph;
use crate::matcher::contains;
use crate::split::{improvement_threshold, partition_stats, split_objective, SearchStats, SplitCandidate};
use crate::tree::SplitFinder;
use crate::tss::TssStats;

/// Bytes one column takes: a bitset over the training graphs plus one over
/// the test graphs.
pub fn column_bytes(n_train: usize, n_test: usize) -> usize {
    (n_train.div_ceil(64) + n_test.div_ceil(64)) * 8
}

/// Columns in enumeration preorder.
pub struct IndicatorMatrix {
    codes: Vec<DfsCode>,
    train: Vec<FixedBitSet>,
    test: Vec<FixedBitSet>,
    index: HashMap<DfsCode, usize>,
}

impl IndicatorMatrix {
    /// Enumerates all patterns of `train` within `budget` (which must bound
    /// the size) and tests each against `test`. Fails as soon as the next
    /// column would exceed `memory_budget` bytes.
    pub fn build(
        train: &[LabeledGraph],
        test: &[LabeledGraph],
        budget: EnumBudget,
        memory_budget: usize,
    ) -> Result<Self, EvalError> {
        if budget.max_edges.is_none() {
            return Err(EvalError::UnboundedBaseline);
        }
        let per_column = column_bytes(train.len(), test.len());
        let mut m = IndicatorMatrix { codes: Vec::new(), train: Vec::new(), test: Vec::new(), index: HashMap::new() };
        // test columns of the current DFS path; a child only occurs where its parent does
        let mut path: Vec<FixedBitSet> = Vec::new();
        try_enumerate(train, budget, |occ, depth| {
            let needed = (m.width() + 1) * per_column;
            if needed > memory_budget {
                return Err(EvalError::BudgetExceeded { needed, budget: memory_budget, width: m.width() });
            }
            path.truncate(depth - 1);
            let pattern = Pattern::from_code(occ.code.clone()).expect("enumerated codes are well formed");
            let mut col = FixedBitSet::with_capacity(test.len());
            let candidates: Box<dyn Iterator<Item = usize>> = match path.last() {
                Some(parent) => Box::new(parent.ones()),
                None => Box::new(0..test.len()),
            };
            for i in candidates {
                if contains(&test[i], &pattern) {
                    col.insert(i);
                }
            }
            path.push(col.clone());
            m.index.insert(occ.code.clone(), m.codes.len());
            m.codes.push(occ.code.clone());
            m.train.push(occ.graph_ids.clone());
            m.test.push(col);
            Ok(VisitDecision::Continue)
        })?;
        Ok(m)
    }

    /// Number of patterns (columns).
    pub fn width(&self) -> usize {
        self.codes.len()
    }

    pub fn bytes(&self, n_train: usize, n_test: usize) -> usize {
        self.width() * column_bytes(n_train, n_test)
    }

    pub fn codes(&self) -> &[DfsCode] {
        &self.codes
    }

    pub fn train_column(&self, j: usize) -> &FixedBitSet {
        &self.train[j]
    }

    pub fn test_column(&self, j: usize) -> &FixedBitSet {
        &self.test[j]
    }

    pub fn column_of(&self, code: &DfsCode) -> Option<usize> {
        self.index.get(code).copied()
    }
}

/// Exhaustive split search over materialized columns, scanning in column
/// order and keeping the first strict minimum.
pub struct MatrixSplitter<'m> {
    pub matrix: &'m IndicatorMatrix,
    pub min_leaf: usize,
}

impl SplitFinder for MatrixSplitter<'_> {
    fn find_split(&self, node_ids: &[usize], residuals: &[f64]) -> (Option<SplitCandidate>, SearchStats) {
        let mut best_objective = improvement_threshold(&TssStats::from_values(node_ids.iter().map(|&i| residuals[i])));
        let mut best = None;
        for (j, col) in self.matrix.train.iter().enumerate() {
            let (inside, outside) = partition_stats(node_ids, residuals, col);
            let objective = inside.tss() + outside.tss();
            if inside.n >= self.min_leaf && outside.n >= self.min_leaf && objective < best_objective {
                best_objective = objective;
                best = Some(j);
            }
        }
        let stats = SearchStats { visited: self.matrix.width(), pruned_subtrees: 0 };
        let split =
            best.map(|j| split_objective(node_ids, residuals, &self.matrix.train[j], self.matrix.codes[j].clone()));
        (split, stats)
    }

    fn distinct_searched(&self) -> usize {
        self.matrix.width()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn path(labels: &[u32]) -> LabeledGraph {
        let edges = (1..labels.len()).map(|i| (i - 1, i, 0)).collect();
        LabeledGraph::new(labels.to_vec(), edges).unwrap()
    }

    #[test]
    fn widths_nest() {
        let graphs = vec![path(&[0, 1, 0, 1]), path(&[1, 1, 0])];
        let test = vec![path(&[0, 1])];
        let mut last = 0;
        for x in 1..=3 {
            let m = IndicatorMatrix::build(&graphs, &test, EnumBudget::new(Some(x), 1), usize::MAX).unwrap();
            assert!(m.width() >= last);
            last = m.width();
            for j in 0..m.width() {
                let p = Pattern::from_code(m.codes()[j].clone()).unwrap();
                assert_eq!(m.test_column(j).contains(0), contains(&test[0], &p));
            }
        }
    }

    #[test]
    fn budget_and_bound_checks() {
        let graphs = vec![path(&[0, 1, 0, 1])];
        let err = IndicatorMatrix::build(&graphs, &[], EnumBudget::new(Some(3), 1), 8).err().unwrap();
        assert!(matches!(err, EvalError::BudgetExceeded { width: 1, .. }));
        assert!(matches!(
            IndicatorMatrix::build(&graphs, &[], EnumBudget::default(), usize::MAX),
            Err(EvalError::UnboundedBaseline)
        ));
    }
}
