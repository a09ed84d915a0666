//! Pattern importance from a fitted model.

use std::collections::HashMap;

use crate::boost::BoostedModel;
use crate::dataset::Dataset;
use crate::dfs_code::{DfsCode, Pattern};
use crate::matcher::contains;
use crate::tree::TreeNode;
use crate::tss::TssStats;

#[derive(Debug, Clone, PartialEq)]
pub struct Importance {
    pub pattern: DfsCode,
    /// Total TSS reduction, scaled so the largest is 1.
    pub score: f64,
    /// Internal nodes testing this pattern.
    pub uses: usize,
}

/// Replays boosting on the training data and credits each split with
/// `tss(node) - (tss(present) + tss(absent))` under that round's residuals.
/// Sorted by decreasing score, then by code.
pub fn feature_importance(model: &BoostedModel, train: &Dataset) -> Vec<Importance> {
    let graphs = train.graphs_in(&model.node_labels, &model.edge_labels);
    let n = graphs.len();
    let loss = model.params.loss;
    let mut memo: HashMap<DfsCode, Vec<bool>> = HashMap::new();
    let mut member = |p: &Pattern, i: usize| -> bool {
        if !memo.contains_key(p.code()) {
            memo.insert(p.code().clone(), graphs.iter().map(|g| contains(g, p)).collect());
        }
        memo[p.code()][i]
    };

    let mut scores = vec![model.t0; n];
    let mut gains: HashMap<DfsCode, (f64, usize)> = HashMap::new();
    for tree in &model.trees {
        let residuals: Vec<f64> =
            train.responses.iter().zip(&scores).map(|(&y, &f)| loss.negative_gradient(y, f)).collect();
        let nodes = tree.nodes();
        let mut reach: Vec<Vec<usize>> = vec![Vec::new(); nodes.len()];
        reach[0] = (0..n).collect();
        // preorder: parents precede children
        for at in 0..nodes.len() {
            let ids = std::mem::take(&mut reach[at]);
            match &nodes[at] {
                TreeNode::Leaf { value } => {
                    for &i in &ids {
                        scores[i] += model.eta * value;
                    }
                }
                TreeNode::Split { pattern, present, absent } => {
                    let (inside, outside): (Vec<usize>, Vec<usize>) = ids.iter().partition(|&&i| member(pattern, i));
                    let stats = |s: &[usize]| TssStats::from_values(s.iter().map(|&i| residuals[i]));
                    let gain = stats(&ids).tss() - stats(&inside).tss() - stats(&outside).tss();
                    let entry = gains.entry(pattern.code().clone()).or_insert((0.0, 0));
                    entry.0 += gain.max(0.0);
                    entry.1 += 1;
                    reach[*present] = inside;
                    reach[*absent] = outside;
                }
            }
        }
    }

    let top = gains.values().map(|g| g.0).fold(0.0, f64::max);
    let mut out: Vec<Importance> = gains
        .into_iter()
        .map(|(pattern, (gain, uses))| Importance { pattern, score: if top > 0.0 { gain / top } else { 0.0 }, uses })
        .collect();
    out.sort_by(|a, b| b.score.total_cmp(&a.score).then_with(|| a.pattern.dfs_cmp(&b.pattern)));
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::boost::{fit, FitParams};
    use crate::graph::{LabelDict, LabeledGraph};

    #[test]
    fn single_stump() {
        let a = LabeledGraph::new(vec![0, 0], vec![(0, 1, 0)]).unwrap();
        let b = LabeledGraph::new(vec![0, 1], vec![(0, 1, 0)]).unwrap();
        let data = Dataset {
            name: "toy".into(),
            ids: (0..4).map(|i| i.to_string()).collect(),
            graphs: vec![a.clone(), b.clone(), a, b],
            responses: vec![-1.0, 1.0, -1.0, 1.0],
            node_labels: LabelDict::from_names(["A", "B"]),
            edge_labels: LabelDict::from_names(["0"]),
        };
        let params = FitParams { max_depth: 1, num_trees: 1, ..FitParams::default() };
        let model = fit(&data, &params).unwrap().model;
        let imp = feature_importance(&model, &data);
        assert_eq!(imp.len(), 1);
        assert_eq!(imp[0].score, 1.0);
        assert_eq!(imp[0].uses, 1);
    }
}
