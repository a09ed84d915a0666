//! Cross-validation over a hyperparameter grid.
//!
//! Each (fold, configuration) pair is one fit of `k_max` trees; the model
//! after every `k ≤ k_max` is scored from the same fit, since the first `k`
//! trees of a fixed-stepsize ensemble are exactly the `k`-tree model.

use std::collections::HashMap;
use std::fmt::Write as _;
use std::sync::{Arc, Mutex};
use std::time::Instant;

use fixedbitset::FixedBitSet;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::folds::{split_indices, stratified_kfold};
use super::metrics::{accuracy, auc, mean_sd};
use super::naive::{IndicatorMatrix, MatrixSplitter};
use crate::boost::{check_inputs, fit_with_finder, label_of, FitParams, Loss, RoundStats};
use crate::cache::PatternCache;
use crate::dataset::Dataset;
use crate::dfs_code::{DfsCode, Pattern};
use crate::enumerate::EnumBudget;
use crate::error::EvalError;
use crate::graph::LabeledGraph;
use crate::matcher::contains;
use crate::tree::{BranchAndBound, RegressionTree, TreeNode};

pub const REPORT_SCHEMA: &str = "graphboost-cv-report/1";

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Mode {
    /// Branch-and-bound search over the lazily expanded pattern tree.
    Proposed,
    /// Explicit indicator matrix, then exhaustive column scan.
    Naive,
}

impl Mode {
    pub fn name(self) -> &'static str {
        match self {
            Mode::Proposed => "proposed",
            Mode::Naive => "naive",
        }
    }
}

/// Configurations to evaluate; each config's `num_trees` is its `k_max`.
#[derive(Debug, Clone, PartialEq)]
pub struct Grid {
    pub configs: Vec<FitParams>,
}

impl Grid {
    pub fn single(params: FitParams) -> Self {
        Self { configs: vec![params] }
    }

    /// All combinations, ordered by x, then d, then η.
    pub fn cartesian(base: FitParams, sizes: &[Option<usize>], depths: &[usize], etas: &[f64]) -> Self {
        let mut configs = Vec::new();
        for &x in sizes {
            for &d in depths {
                for &eta in etas {
                    let budget = EnumBudget { max_edges: x, ..base.budget };
                    configs.push(FitParams { max_depth: d, eta, budget, ..base });
                }
            }
        }
        Self { configs }
    }

    /// x ∈ {2,3,4,5,∞}, d ∈ {1..5}, η ∈ {1, 0.7, 0.4, 0.1, 0.01}, k up to 500.
    pub fn table1(base: FitParams) -> Self {
        let base = FitParams { num_trees: 500, ..base };
        Self::cartesian(
            base,
            &[Some(2), Some(3), Some(4), Some(5), None],
            &[1, 2, 3, 4, 5],
            &[1.0, 0.7, 0.4, 0.1, 0.01],
        )
    }

    /// x ∈ {4,6,8}, d ∈ {1,3,5}, η ∈ {1, 0.7, 0.4, 0.1}, k up to 500.
    pub fn table3(base: FitParams) -> Self {
        let base = FitParams { num_trees: 500, ..base };
        Self::cartesian(base, &[Some(4), Some(6), Some(8)], &[1, 3, 5], &[1.0, 0.7, 0.4, 0.1])
    }

    pub fn filter(mut self, keep: impl Fn(&FitParams) -> bool) -> Self {
        self.configs.retain(|p| keep(p));
        self
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CvOptions {
    pub folds: usize,
    pub seed: u64,
    pub mode: Mode,
    /// Score every `snapshot_every`-th round (and always the last).
    pub snapshot_every: usize,
    /// Byte limit on the baseline's indicator matrix.
    pub memory_budget: usize,
}

impl Default for CvOptions {
    fn default() -> Self {
        Self { folds: 10, seed: 0, mode: Mode::Proposed, snapshot_every: 1, memory_budget: 1 << 30 }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DatasetInfo {
    pub name: String,
    pub graphs: usize,
    pub positives: usize,
    pub negatives: usize,
    pub classification: bool,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Summary {
    pub mean: f64,
    pub sd: f64,
}

impl Summary {
    fn of(values: &[f64]) -> Self {
        let (mean, sd) = mean_sd(values);
        Self { mean, sd }
    }

    fn of_options(values: &[Option<f64>]) -> Option<Self> {
        let v: Option<Vec<f64>> = values.iter().copied().collect();
        v.map(|v| Self::of(&v))
    }
}

/// Metrics of one fold's model after `k` trees.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FoldMetrics {
    pub fold: usize,
    pub k: usize,
    pub train_size: usize,
    pub test_size: usize,
    /// `None` for real-valued responses.
    pub accuracy: Option<f64>,
    /// `None` unless the test fold holds both classes.
    pub auc: Option<f64>,
    pub loss: f64,
    pub train_loss: f64,
    pub train_accuracy: Option<f64>,
    /// Wall time of the whole `k_max`-tree fit.
    pub train_seconds: f64,
    pub patterns_visited: usize,
    pub subtrees_pruned: usize,
    pub patterns_searched: usize,
    pub patterns_selected: usize,
    pub matrix_width: Option<usize>,
    pub enumerate_seconds: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Aggregate {
    pub accuracy: Option<Summary>,
    pub auc: Option<Summary>,
    pub loss: Summary,
    pub train_seconds: Summary,
    pub patterns_visited: Summary,
    pub patterns_selected: Summary,
}

impl Aggregate {
    fn of(per_fold: &[FoldMetrics]) -> Self {
        let col = |f: fn(&FoldMetrics) -> f64| Summary::of(&per_fold.iter().map(f).collect::<Vec<_>>());
        Self {
            accuracy: Summary::of_options(&per_fold.iter().map(|m| m.accuracy).collect::<Vec<_>>()),
            auc: Summary::of_options(&per_fold.iter().map(|m| m.auc).collect::<Vec<_>>()),
            loss: col(|m| m.loss),
            train_seconds: col(|m| m.train_seconds),
            patterns_visited: col(|m| m.patterns_visited as f64),
            patterns_selected: col(|m| m.patterns_selected as f64),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ConfigResult {
    pub index: usize,
    /// As fitted; `num_trees` is `k_max`.
    pub params: FitParams,
    /// Round with the best mean score for this configuration.
    pub best_k: usize,
    pub at_best_k: Aggregate,
    pub at_k_max: Aggregate,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BestResult {
    pub config: usize,
    /// The selected configuration with `num_trees` set to the selected `k`.
    pub params: FitParams,
    pub aggregate: Aggregate,
    pub per_fold: Vec<FoldMetrics>,
}

/// Fold-averaged test metrics of one configuration after `k` trees.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CurvePoint {
    pub config: usize,
    pub k: usize,
    pub accuracy: Option<f64>,
    pub auc: Option<f64>,
    pub loss: f64,
    pub train_loss: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CvReport {
    pub schema: String,
    pub dataset: DatasetInfo,
    pub mode: Mode,
    pub folds: usize,
    pub seed: u64,
    pub fold_sizes: Vec<usize>,
    pub configs: Vec<ConfigResult>,
    pub best: BestResult,
    #[serde(skip)]
    pub curves: Vec<CurvePoint>,
}

struct FoldData {
    train: Vec<LabeledGraph>,
    train_y: Vec<f64>,
    test: Vec<LabeledGraph>,
    test_y: Vec<f64>,
}

/// Test-set containment per pattern, filled on demand and shared by every
/// configuration of a fold.
struct TestMemo<'a> {
    graphs: &'a [LabeledGraph],
    map: Mutex<HashMap<DfsCode, Arc<FixedBitSet>>>,
}

impl TestMemo<'_> {
    fn get(&self, p: &Pattern) -> Arc<FixedBitSet> {
        if let Some(hit) = self.map.lock().expect("memo lock").get(p.code()) {
            return hit.clone();
        }
        let mut bits = FixedBitSet::with_capacity(self.graphs.len());
        for (i, g) in self.graphs.iter().enumerate() {
            bits.set(i, contains(g, p));
        }
        let bits = Arc::new(bits);
        self.map.lock().expect("memo lock").entry(p.code().clone()).or_insert(bits).clone()
    }
}

struct Matrix {
    matrix: IndicatorMatrix,
    seconds: f64,
}

/// Raw result of one fit: test metrics at each snapshot round.
struct JobResult {
    points: Vec<FoldMetrics>,
}

fn snapshot_rounds(k_max: usize, every: usize) -> Vec<usize> {
    let mut ks: Vec<usize> = (every..=k_max).step_by(every).collect();
    if ks.last() != Some(&k_max) {
        ks.push(k_max);
    }
    ks
}

/// Adds each tree's leaf value for every test graph, given per-node test
/// membership bitsets.
fn tree_outputs(tree: &RegressionTree, n: usize, member: impl Fn(&Pattern) -> Arc<FixedBitSet>) -> Vec<f64> {
    let nodes = tree.nodes();
    let bits: Vec<Option<Arc<FixedBitSet>>> = nodes
        .iter()
        .map(|node| match node {
            TreeNode::Split { pattern, .. } => Some(member(pattern)),
            TreeNode::Leaf { .. } => None,
        })
        .collect();
    (0..n)
        .map(|i| {
            let mut at = 0;
            loop {
                match &nodes[at] {
                    TreeNode::Leaf { value } => return *value,
                    TreeNode::Split { present, absent, .. } => {
                        let inside = bits[at].as_ref().expect("split nodes have bitsets").contains(i);
                        at = if inside { *present } else { *absent };
                    }
                }
            }
        })
        .collect()
}

#[allow(clippy::too_many_arguments)]
fn score_job(
    fold: usize,
    data: &FoldData,
    params: &FitParams,
    t0: f64,
    trees: &[RegressionTree],
    rounds: &[RoundStats],
    seconds: f64,
    matrix: Option<&Matrix>,
    snapshot_every: usize,
    member: impl Fn(&Pattern) -> Arc<FixedBitSet>,
) -> JobResult {
    let n = data.test.len();
    let classification = params.loss == Loss::Logistic;
    let mut scores = vec![t0; n];
    let ks = snapshot_rounds(trees.len(), snapshot_every);
    let mut points = Vec::with_capacity(ks.len());
    let mut next = 0;
    for (k, tree) in (1..).zip(trees) {
        for (s, v) in scores.iter_mut().zip(tree_outputs(tree, n, &member)) {
            *s += params.eta * v;
        }
        if ks.get(next) != Some(&k) {
            continue;
        }
        next += 1;
        let r = rounds[k - 1];
        let predicted: Vec<f64> = scores.iter().map(|&s| label_of(s)).collect();
        let loss =
            data.test_y.iter().zip(&scores).map(|(&y, &f)| params.loss.value(y, f)).sum::<f64>() / n.max(1) as f64;
        points.push(FoldMetrics {
            fold,
            k,
            train_size: data.train.len(),
            test_size: n,
            accuracy: classification.then(|| accuracy(&data.test_y, &predicted)),
            auc: if classification { auc(&data.test_y, &scores) } else { None },
            loss,
            train_loss: r.train_loss,
            train_accuracy: r.train_accuracy,
            train_seconds: seconds,
            patterns_visited: r.patterns_visited,
            subtrees_pruned: r.subtrees_pruned,
            patterns_searched: r.patterns_searched,
            patterns_selected: r.patterns_selected,
            matrix_width: matrix.map(|m| m.matrix.width()),
            enumerate_seconds: matrix.map(|m| m.seconds),
        });
    }
    JobResult { points }
}

/// Higher is better: accuracy for classification, negated loss otherwise.
fn merit(a: &Aggregate) -> f64 {
    a.accuracy.map_or(-a.loss.mean, |s| s.mean)
}

/// Cross-validates every configuration of `grid`. Folds are stratified and
/// seeded; results do not depend on the thread count.
pub fn run_cv(data: &Dataset, grid: &Grid, opts: &CvOptions) -> Result<CvReport, EvalError> {
    if grid.configs.is_empty() {
        return Err(EvalError::Fit(crate::error::FitError::InvalidParams("empty grid".into())));
    }
    if opts.snapshot_every == 0 {
        return Err(EvalError::Fit(crate::error::FitError::InvalidParams("snapshot_every must be at least 1".into())));
    }
    for p in &grid.configs {
        check_inputs(data.len(), &data.responses, p)?;
        if opts.mode == Mode::Naive && p.budget.max_edges.is_none() {
            return Err(EvalError::UnboundedBaseline);
        }
    }
    let assign = stratified_kfold(data, opts.folds, opts.seed)?;
    let folds: Vec<FoldData> = (0..opts.folds)
        .map(|f| {
            let (tr, te) = split_indices(&assign, f);
            FoldData {
                train: tr.iter().map(|&i| data.graphs[i].clone()).collect(),
                train_y: tr.iter().map(|&i| data.responses[i]).collect(),
                test: te.iter().map(|&i| data.graphs[i].clone()).collect(),
                test_y: te.iter().map(|&i| data.responses[i]).collect(),
            }
        })
        .collect();

    let jobs: Vec<(usize, usize)> =
        (0..folds.len()).flat_map(|f| (0..grid.configs.len()).map(move |c| (f, c))).collect();

    let results: Vec<JobResult> = match opts.mode {
        Mode::Proposed => {
            let mut supports: Vec<usize> = grid.configs.iter().map(|p| p.budget.min_support.max(1)).collect();
            supports.sort_unstable();
            supports.dedup();
            let caches: Vec<HashMap<usize, PatternCache<'_>>> = folds
                .iter()
                .map(|fd| supports.iter().map(|&s| (s, PatternCache::new(&fd.train, s))).collect())
                .collect();
            let memos: Vec<TestMemo<'_>> =
                folds.iter().map(|fd| TestMemo { graphs: &fd.test, map: Mutex::new(HashMap::new()) }).collect();
            jobs.par_iter()
                .map(|&(f, c)| {
                    let params = &grid.configs[c];
                    let cache = &caches[f][&params.budget.min_support.max(1)];
                    let started = Instant::now();
                    let finder = BranchAndBound::new(cache, params.search_config());
                    let (t0, trees, rounds) = fit_with_finder(&folds[f].train_y, params, &finder);
                    let seconds = started.elapsed().as_secs_f64();
                    let memo = &memos[f];
                    score_job(f, &folds[f], params, t0, &trees, &rounds, seconds, None, opts.snapshot_every, |p| {
                        memo.get(p)
                    })
                })
                .collect()
        }
        Mode::Naive => {
            let mut budgets: Vec<EnumBudget> = grid.configs.iter().map(|p| p.budget).collect();
            budgets.sort_by_key(|b| (b.max_edges, b.min_support));
            budgets.dedup();
            let keys: Vec<(usize, EnumBudget)> =
                (0..folds.len()).flat_map(|f| budgets.iter().map(move |&b| (f, b))).collect();
            let built: Vec<Matrix> = keys
                .par_iter()
                .map(|&(f, b)| {
                    let started = Instant::now();
                    let matrix = IndicatorMatrix::build(&folds[f].train, &folds[f].test, b, opts.memory_budget)?;
                    Ok(Matrix { matrix, seconds: started.elapsed().as_secs_f64() })
                })
                .collect::<Result<_, EvalError>>()?;
            let matrices: HashMap<(usize, EnumBudget), Matrix> = keys.into_iter().zip(built).collect();
            jobs.par_iter()
                .map(|&(f, c)| {
                    let params = &grid.configs[c];
                    let m = &matrices[&(f, params.budget)];
                    let started = Instant::now();
                    let finder = MatrixSplitter { matrix: &m.matrix, min_leaf: params.min_leaf };
                    let (t0, trees, rounds) = fit_with_finder(&folds[f].train_y, params, &finder);
                    let seconds = started.elapsed().as_secs_f64();
                    score_job(f, &folds[f], params, t0, &trees, &rounds, seconds, Some(m), opts.snapshot_every, |p| {
                        let j = m.matrix.column_of(p.code()).expect("selected patterns are matrix columns");
                        Arc::new(m.matrix.test_column(j).clone())
                    })
                })
                .collect()
        }
    };

    // results are in job order: fold-major, config-minor
    let n_configs = grid.configs.len();
    let mut curves = Vec::new();
    let mut configs = Vec::with_capacity(n_configs);
    let mut best: Option<(f64, usize, usize)> = None;
    for (c, params) in grid.configs.iter().enumerate() {
        let per_fold: Vec<&JobResult> = (0..folds.len()).map(|f| &results[f * n_configs + c]).collect();
        let n_points = per_fold[0].points.len();
        let at = |i: usize| -> Vec<FoldMetrics> { per_fold.iter().map(|r| r.points[i].clone()).collect() };
        let mut config_best: Option<(f64, usize)> = None;
        for i in 0..n_points {
            let metrics = at(i);
            let agg = Aggregate::of(&metrics);
            let k = metrics[0].k;
            curves.push(CurvePoint {
                config: c,
                k,
                accuracy: agg.accuracy.map(|s| s.mean),
                auc: agg.auc.map(|s| s.mean),
                loss: agg.loss.mean,
                train_loss: Summary::of(&metrics.iter().map(|m| m.train_loss).collect::<Vec<_>>()).mean,
            });
            let score = merit(&agg);
            if config_best.is_none_or(|(s, _)| score > s) {
                config_best = Some((score, i));
            }
        }
        let (score, i_best) = config_best.expect("every fit has at least one round");
        if best.is_none_or(|(s, _, _)| score > s) {
            best = Some((score, c, i_best));
        }
        configs.push(ConfigResult {
            index: c,
            params: *params,
            best_k: per_fold[0].points[i_best].k,
            at_best_k: Aggregate::of(&at(i_best)),
            at_k_max: Aggregate::of(&at(n_points - 1)),
        });
    }
    let (_, c, i) = best.expect("grid is not empty");
    let per_fold: Vec<FoldMetrics> = (0..folds.len()).map(|f| results[f * n_configs + c].points[i].clone()).collect();
    let k = per_fold[0].k;
    let best = BestResult {
        config: c,
        params: FitParams { num_trees: k, ..grid.configs[c] },
        aggregate: Aggregate::of(&per_fold),
        per_fold,
    };

    Ok(CvReport {
        schema: REPORT_SCHEMA.into(),
        dataset: DatasetInfo {
            name: data.name.clone(),
            graphs: data.len(),
            positives: data.positives(),
            negatives: data.negatives(),
            classification: data.is_binary(),
        },
        mode: opts.mode,
        folds: opts.folds,
        seed: opts.seed,
        fold_sizes: folds.iter().map(|f| f.test.len()).collect(),
        configs,
        best,
        curves,
    })
}

fn fmt_x(p: &FitParams) -> String {
    p.budget.max_edges.map_or_else(|| "inf".to_string(), |x| x.to_string())
}

fn fmt_opt(v: Option<f64>) -> String {
    v.map_or_else(|| "NA".to_string(), |v| format!("{v}"))
}

const CURVE_HEADER: &str = "x\td\teta\tk\ttest_accuracy\ttest_auc\ttest_loss\ttrain_loss";

fn curve_line(out: &mut String, report: &CvReport, p: &CurvePoint, lead: &str) {
    let params = &report.configs[p.config].params;
    let _ = writeln!(
        out,
        "{lead}{}\t{}\t{}\t{}\t{}\t{}\t{}\t{}",
        fmt_x(params),
        params.max_depth,
        params.eta,
        p.k,
        fmt_opt(p.accuracy),
        fmt_opt(p.auc),
        p.loss,
        p.train_loss
    );
}

impl CvReport {
    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }

    /// Fold-averaged curves of every configuration, one row per (config, k).
    pub fn curves_tsv(&self) -> String {
        let mut out = format!("config\t{CURVE_HEADER}\n");
        for p in &self.curves {
            curve_line(&mut out, self, p, &format!("{}\t", p.config));
        }
        out
    }

    /// For each value of `key`, the curve of the configuration with the best
    /// mean score among those sharing it.
    fn best_curves_by<K: PartialEq + Copy>(&self, key: impl Fn(&FitParams) -> K) -> Vec<(K, usize)> {
        let mut best: Vec<(K, usize)> = Vec::new();
        for c in &self.configs {
            let k = key(&c.params);
            match best.iter_mut().find(|(bk, _)| *bk == k) {
                Some(slot) => {
                    if merit(&c.at_best_k) > merit(&self.configs[slot.1].at_best_k) {
                        slot.1 = c.index;
                    }
                }
                None => best.push((k, c.index)),
            }
        }
        best
    }

    fn grouped_tsv<K: PartialEq + Copy>(
        &self,
        name: &str,
        key: impl Fn(&FitParams) -> K,
        show: impl Fn(K) -> String,
    ) -> String {
        let mut out = format!("{name}\t{CURVE_HEADER}\n");
        for (k, c) in self.best_curves_by(key) {
            for p in self.curves.iter().filter(|p| p.config == c) {
                curve_line(&mut out, self, p, &format!("{}\t", show(k)));
            }
        }
        out
    }

    /// Test metrics against k for the best configuration at each depth.
    pub fn by_depth_tsv(&self) -> String {
        self.grouped_tsv("group_d", |p| p.max_depth, |d| d.to_string())
    }

    /// Test metrics against k for the best configuration at each max size.
    pub fn by_size_tsv(&self) -> String {
        self.grouped_tsv("group_x", |p| p.budget.max_edges, |x| x.map_or_else(|| "inf".into(), |x| x.to_string()))
    }

    /// Curve of one configuration, as (k, point) pairs.
    pub fn curve(&self, config: usize) -> impl Iterator<Item = &CurvePoint> {
        self.curves.iter().filter(move |p| p.config == config)
    }

    /// Index of the best configuration among those matching `keep`.
    pub fn best_config_where(&self, keep: impl Fn(&FitParams) -> bool) -> Option<&ConfigResult> {
        let mut best: Option<&ConfigResult> = None;
        for c in self.configs.iter().filter(|c| keep(&c.params)) {
            if best.is_none_or(|b| merit(&c.at_best_k) > merit(&b.at_best_k)) {
                best = Some(c);
            }
        }
        best
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum BenchStatus {
    Ok,
    BudgetExceeded,
}

/// One row of the scalability table, averaged over folds.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BenchRow {
    pub max_edges: usize,
    pub mode: Mode,
    pub status: BenchStatus,
    /// Matrix width for the baseline; distinct patterns searched otherwise.
    pub patterns: Option<f64>,
    pub enumerate_seconds: Option<f64>,
    pub learn_seconds: Option<f64>,
    pub accuracy: Option<f64>,
}

/// Runs CV once per `max_edges` value with fixed `params`, recording
/// pattern counts and per-phase time. A baseline run that exceeds the
/// memory budget becomes a `BudgetExceeded` row.
pub fn bench(
    data: &Dataset,
    sizes: &[usize],
    params: &FitParams,
    opts: &CvOptions,
) -> Result<Vec<BenchRow>, EvalError> {
    let mut rows = Vec::new();
    for &x in sizes {
        let p = FitParams { budget: EnumBudget { max_edges: Some(x), ..params.budget }, ..*params };
        let snap = CvOptions { snapshot_every: p.num_trees, ..*opts };
        match run_cv(data, &Grid::single(p), &snap) {
            Ok(report) => {
                let folds = &report.best.per_fold;
                let mean = |f: &dyn Fn(&FoldMetrics) -> f64| folds.iter().map(f).sum::<f64>() / folds.len() as f64;
                let patterns = match opts.mode {
                    Mode::Naive => mean(&|m| m.matrix_width.unwrap_or(0) as f64),
                    Mode::Proposed => mean(&|m| m.patterns_searched as f64),
                };
                rows.push(BenchRow {
                    max_edges: x,
                    mode: opts.mode,
                    status: BenchStatus::Ok,
                    patterns: Some(patterns),
                    enumerate_seconds: (opts.mode == Mode::Naive)
                        .then(|| mean(&|m| m.enumerate_seconds.unwrap_or(0.0))),
                    learn_seconds: Some(mean(&|m| m.train_seconds)),
                    accuracy: report.best.aggregate.accuracy.map(|s| s.mean),
                });
            }
            Err(EvalError::BudgetExceeded { .. }) => rows.push(BenchRow {
                max_edges: x,
                mode: opts.mode,
                status: BenchStatus::BudgetExceeded,
                patterns: None,
                enumerate_seconds: None,
                learn_seconds: None,
                accuracy: None,
            }),
            Err(e) => return Err(e),
        }
    }
    Ok(rows)
}

pub fn bench_tsv(rows: &[BenchRow]) -> String {
    let mut out = String::from("mode\tmax_edges\tstatus\tpatterns\tenumerate_seconds\tlearn_seconds\taccuracy\n");
    for r in rows {
        let status = match r.status {
            BenchStatus::Ok => "ok",
            BenchStatus::BudgetExceeded => "budget_exceeded",
        };
        let _ = writeln!(
            out,
            "{}\t{}\t{}\t{}\t{}\t{}\t{}",
            r.mode.name(),
            r.max_edges,
            status,
            fmt_opt(r.patterns),
            fmt_opt(r.enumerate_seconds),
            fmt_opt(r.learn_seconds),
            fmt_opt(r.accuracy)
        );
    }
    out
}
