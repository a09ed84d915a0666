//! Gradient tree boosting over graphs.
//!
//! `f_k(G) = t0 + η Σ_{i≤k} T_i(G)` where `t0` is the mean response and
//! each `T_i` is a regression tree fitted to the negative gradient of the
//! loss at `f_{i-1}`, with splits chosen by branch-and-bound subgraph search.

use std::collections::HashSet;

use serde::{Deserialize, Serialize};

use crate::cache::PatternCache;
use crate::dataset::Dataset;
use crate::dfs_code::{DfsCode, Pattern};
use crate::enumerate::EnumBudget;
use crate::error::FitError;
use crate::graph::{LabelDict, LabeledGraph};
use crate::matcher::contains;
use crate::split::{SearchConfig, SearchStats};
use crate::tree::{build_tree, BranchAndBound, RegressionTree, SplitFinder, TreeParams};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, Default)]
#[serde(rename_all = "lowercase")]
pub enum Loss {
    /// `log(1 + exp(-2yf))` for `y ∈ {-1, +1}`.
    #[default]
    Logistic,
    /// `½ (y − f)²`.
    Squared,
}

impl Loss {
    pub fn value(self, y: f64, f: f64) -> f64 {
        match self {
            Loss::Logistic => logistic_loss(y, f),
            Loss::Squared => 0.5 * (y - f) * (y - f),
        }
    }

    pub fn negative_gradient(self, y: f64, f: f64) -> f64 {
        match self {
            Loss::Logistic => negative_gradient(y, f),
            Loss::Squared => y - f,
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            Loss::Logistic => "logistic",
            Loss::Squared => "squared",
        }
    }
}

pub fn logistic_loss(y: f64, f: f64) -> f64 {
    let z = -2.0 * y * f;
    if z > 0.0 {
        z + (-z).exp().ln_1p()
    } else {
        z.exp().ln_1p()
    }
}

/// `2y / (1 + exp(2yf))`, the negative derivative of the logistic loss in `f`.
pub fn negative_gradient(y: f64, f: f64) -> f64 {
    let z = 2.0 * y * f;
    if z > 0.0 {
        let e = (-z).exp();
        2.0 * y * e / (1.0 + e)
    } else {
        2.0 * y / (1.0 + z.exp())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct FitParams {
    pub max_depth: usize,
    pub eta: f64,
    pub num_trees: usize,
    pub budget: EnumBudget,
    pub min_leaf: usize,
    pub seed: u64,
    pub loss: Loss,
    /// Disable to run the exhaustive search (same models, slower).
    pub prune: bool,
}

impl Default for FitParams {
    fn default() -> Self {
        Self {
            max_depth: 3,
            eta: 0.4,
            num_trees: 500,
            budget: EnumBudget::new(Some(6), 1),
            min_leaf: 1,
            seed: 0,
            loss: Loss::Logistic,
            prune: true,
        }
    }
}

impl FitParams {
    pub fn validate(&self) -> Result<(), FitError> {
        let bad = |m: &str| Err(FitError::InvalidParams(m.to_owned()));
        if self.max_depth < 1 {
            return bad("max_depth must be at least 1");
        }
        if !(self.eta > 0.0 && self.eta <= 1.0) {
            return bad("eta must lie in (0, 1]");
        }
        if self.num_trees < 1 {
            return bad("num_trees must be at least 1");
        }
        if self.min_leaf < 1 {
            return bad("min_leaf must be at least 1");
        }
        self.budget.validate().map_err(FitError::InvalidParams)
    }

    pub fn search_config(&self) -> SearchConfig {
        SearchConfig { budget: self.budget, min_leaf: self.min_leaf, prune: self.prune }
    }

    fn tree_params(&self) -> TreeParams {
        TreeParams { max_depth: self.max_depth, min_leaf: self.min_leaf }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct BoostedModel {
    pub t0: f64,
    pub eta: f64,
    pub trees: Vec<RegressionTree>,
    pub params: FitParams,
    pub node_labels: LabelDict,
    pub edge_labels: LabelDict,
}

impl BoostedModel {
    /// Score under an arbitrary containment oracle, e.g. a memoized one.
    pub fn score_with(&self, mut test: impl FnMut(&Pattern) -> bool) -> f64 {
        let sum: f64 = self.trees.iter().map(|t| t.evaluate(&mut test)).sum();
        self.t0 + self.eta * sum
    }

    pub fn predict_score(&self, g: &LabeledGraph) -> f64 {
        self.score_with(|p| contains(g, p))
    }

    pub fn predict_label(&self, g: &LabeledGraph) -> f64 {
        label_of(self.predict_score(g))
    }

    /// Scores after each of the first `1..=trees.len()` trees.
    pub fn staged_scores(&self, mut test: impl FnMut(&Pattern) -> bool) -> Vec<f64> {
        let mut acc = 0.0;
        self.trees
            .iter()
            .map(|t| {
                acc += t.evaluate(&mut test);
                self.t0 + self.eta * acc
            })
            .collect()
    }

    /// Distinct patterns used by internal nodes.
    pub fn selected_patterns(&self) -> Vec<&DfsCode> {
        let mut seen = HashSet::new();
        let mut out = Vec::new();
        for p in self.trees.iter().flat_map(|t| t.patterns()) {
            if seen.insert(p.code()) {
                out.push(p.code());
            }
        }
        out
    }
}

/// `+1` for non-negative scores, `-1` otherwise.
pub fn label_of(score: f64) -> f64 {
    if score >= 0.0 {
        1.0
    } else {
        -1.0
    }
}

/// Cumulative counters after a boosting round.
#[derive(Debug, Clone, Copy, Default, PartialEq, Serialize, Deserialize)]
pub struct RoundStats {
    /// Empirical risk of `f_k` on the training set.
    pub train_loss: f64,
    /// Training accuracy of `f_k`; `None` outside classification.
    pub train_accuracy: Option<f64>,
    pub patterns_visited: usize,
    pub subtrees_pruned: usize,
    /// Distinct patterns evaluated by any search so far.
    pub patterns_searched: usize,
    /// Distinct patterns used by the first `k` trees.
    pub patterns_selected: usize,
}

#[derive(Debug, Clone, Default, PartialEq)]
pub struct FitStats {
    pub rounds: Vec<RoundStats>,
    pub seconds: f64,
}

impl FitStats {
    pub fn last(&self) -> RoundStats {
        self.rounds.last().copied().unwrap_or_default()
    }
}

pub struct FitOutcome {
    pub model: BoostedModel,
    pub stats: FitStats,
}

pub(crate) fn check_inputs(n_graphs: usize, responses: &[f64], params: &FitParams) -> Result<(), FitError> {
    params.validate()?;
    if n_graphs < 2 {
        return Err(FitError::TooFewGraphs(n_graphs));
    }
    if n_graphs != responses.len() {
        return Err(FitError::InvalidParams(format!("{n_graphs} graphs but {} responses", responses.len())));
    }
    if params.loss == Loss::Logistic {
        if let Some((index, &value)) = responses.iter().enumerate().find(|(_, &y)| y != 1.0 && y != -1.0) {
            return Err(FitError::InvalidLabel { index, value });
        }
    }
    Ok(())
}

/// Boosting loop against any split finder. Responses are indexed like the
/// finder's graph set. Returns `t0`, the trees and per-round counters.
pub fn fit_with_finder(
    responses: &[f64],
    params: &FitParams,
    finder: &impl SplitFinder,
) -> (f64, Vec<RegressionTree>, Vec<RoundStats>) {
    let n = responses.len();
    let t0 = responses.iter().sum::<f64>() / n as f64;
    let ids: Vec<usize> = (0..n).collect();
    let mut scores = vec![t0; n];
    let mut trees = Vec::with_capacity(params.num_trees);
    let mut rounds = Vec::with_capacity(params.num_trees);
    let mut search = SearchStats::default();
    let mut selected: HashSet<DfsCode> = HashSet::new();
    let tree_params = params.tree_params();
    for _ in 0..params.num_trees {
        let residuals: Vec<f64> =
            responses.iter().zip(&scores).map(|(&y, &f)| params.loss.negative_gradient(y, f)).collect();
        let fit = build_tree(&ids, &residuals, &tree_params, finder);
        for (s, v) in scores.iter_mut().zip(&fit.fitted) {
            *s += params.eta * v;
        }
        search += fit.stats;
        selected.extend(fit.tree.patterns().map(|p| p.code().clone()));
        let train_loss = responses.iter().zip(&scores).map(|(&y, &f)| params.loss.value(y, f)).sum::<f64>() / n as f64;
        let train_accuracy = (params.loss == Loss::Logistic)
            .then(|| responses.iter().zip(&scores).filter(|(&y, &f)| label_of(f) == y).count() as f64 / n as f64);
        rounds.push(RoundStats {
            train_loss,
            train_accuracy,
            patterns_visited: search.visited,
            subtrees_pruned: search.pruned_subtrees,
            patterns_searched: finder.distinct_searched(),
            patterns_selected: selected.len(),
        });
        trees.push(fit.tree);
    }
    (t0, trees, rounds)
}

/// Fits on `graphs` using (and filling) `cache`, which must be built over
/// the same graph slice.
pub fn fit_graphs(
    graphs: &[LabeledGraph],
    responses: &[f64],
    params: &FitParams,
    cache: &PatternCache<'_>,
) -> Result<FitOutcome, FitError> {
    check_inputs(graphs.len(), responses, params)?;
    assert!(std::ptr::eq(cache.graphs(), graphs), "cache built over a different graph set");
    if cache.min_support() != params.budget.min_support.max(1) {
        return Err(FitError::InvalidParams("cache min_support differs from the fit budget".into()));
    }
    let started = std::time::Instant::now();
    let finder = BranchAndBound::new(cache, params.search_config());
    let (t0, trees, rounds) = fit_with_finder(responses, params, &finder);
    let model = BoostedModel {
        t0,
        eta: params.eta,
        trees,
        params: *params,
        node_labels: LabelDict::new(),
        edge_labels: LabelDict::new(),
    };
    Ok(FitOutcome { model, stats: FitStats { rounds, seconds: started.elapsed().as_secs_f64() } })
}

pub fn fit(data: &Dataset, params: &FitParams) -> Result<FitOutcome, FitError> {
    let cache = PatternCache::new(&data.graphs, params.budget.min_support);
    let mut out = fit_graphs(&data.graphs, &data.responses, params, &cache)?;
    out.model.node_labels = data.node_labels.clone();
    out.model.edge_labels = data.edge_labels.clone();
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn gradient_closed_form() {
        assert_eq!(negative_gradient(1.0, 0.0), 1.0);
        assert_eq!(negative_gradient(-1.0, 0.0), -1.0);
        assert!(negative_gradient(1.0, 30.0) < 1e-12);
        assert!(negative_gradient(1.0, 30.0) > 0.0);
        assert!((negative_gradient(-1.0, -800.0)).abs() < 1e-300);
        assert!((negative_gradient(1.0, -800.0) - 2.0).abs() < 1e-15);
    }

    #[test]
    fn loss_is_stable() {
        assert!((logistic_loss(1.0, 0.0) - 2f64.ln()).abs() < 1e-15);
        assert!((logistic_loss(1.0, -500.0) - 1000.0).abs() < 1e-9);
        assert!(logistic_loss(1.0, 500.0) >= 0.0);
    }

    #[test]
    fn params_validation() {
        assert!(FitParams::default().validate().is_ok());
        for p in [
            FitParams { max_depth: 0, ..Default::default() },
            FitParams { eta: 0.0, ..Default::default() },
            FitParams { eta: 1.5, ..Default::default() },
            FitParams { num_trees: 0, ..Default::default() },
            FitParams { min_leaf: 0, ..Default::default() },
        ] {
            assert!(p.validate().is_err());
        }
    }

    #[test]
    fn rejects_non_binary_labels() {
        let g = LabeledGraph::new(vec![0, 1], vec![(0, 1, 0)]).unwrap();
        let graphs = vec![g.clone(), g];
        let cache = PatternCache::new(&graphs, 1);
        let err = fit_graphs(&graphs, &[1.0, 0.5], &FitParams::default(), &cache).err();
        assert_eq!(err, Some(FitError::InvalidLabel { index: 1, value: 0.5 }));
        let err = fit_graphs(&graphs[..1], &[1.0], &FitParams::default(), &PatternCache::new(&graphs[..1], 1)).err();
        assert_eq!(err, Some(FitError::TooFewGraphs(1)));
    }

    #[test]
    fn labels_threshold_at_zero() {
        assert_eq!(label_of(0.0), 1.0);
        assert_eq!(label_of(-1e-300), -1.0);
    }
}
