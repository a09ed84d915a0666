use crate::graph::{LabelDict, LabeledGraph};

/// Indexed graphs with one response each and the label dictionaries their
/// ids refer to.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct Dataset {
    pub name: String,
    pub ids: Vec<String>,
    pub graphs: Vec<LabeledGraph>,
    pub responses: Vec<f64>,
    pub node_labels: LabelDict,
    pub edge_labels: LabelDict,
}

impl Dataset {
    pub fn len(&self) -> usize {
        self.graphs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.graphs.is_empty()
    }

    /// True when every response is a class label in {-1, +1}.
    pub fn is_binary(&self) -> bool {
        self.responses.iter().all(|&y| y == 1.0 || y == -1.0)
    }

    pub fn positives(&self) -> usize {
        self.responses.iter().filter(|&&y| y == 1.0).count()
    }

    pub fn negatives(&self) -> usize {
        self.responses.iter().filter(|&&y| y == -1.0).count()
    }

    /// The graphs at `indices`, in that order, sharing this dataset's dictionaries.
    pub fn subset(&self, indices: &[usize]) -> Dataset {
        Dataset {
            name: self.name.clone(),
            ids: indices.iter().map(|&i| self.ids[i].clone()).collect(),
            graphs: indices.iter().map(|&i| self.graphs[i].clone()).collect(),
            responses: indices.iter().map(|&i| self.responses[i]).collect(),
            node_labels: self.node_labels.clone(),
            edge_labels: self.edge_labels.clone(),
        }
    }

    /// Re-expresses this dataset's graphs in the label ids of `node_labels`
    /// and `edge_labels`. Labels unknown to those dictionaries get fresh ids
    /// past their end, which no pattern over the target dictionaries uses.
    pub fn graphs_in(&self, node_labels: &LabelDict, edge_labels: &LabelDict) -> Vec<LabeledGraph> {
        let map = |from: &LabelDict, to: &LabelDict| -> Vec<u32> {
            let mut next = to.len() as u32;
            from.names()
                .iter()
                .map(|name| {
                    to.get(name).unwrap_or_else(|| {
                        next += 1;
                        next - 1
                    })
                })
                .collect()
        };
        let nodes = map(&self.node_labels, node_labels);
        let edges = map(&self.edge_labels, edge_labels);
        self.graphs.iter().map(|g| g.relabel(|l| nodes[l as usize], |l| edges[l as usize])).collect()
    }
}
