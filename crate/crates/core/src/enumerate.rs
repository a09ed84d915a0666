//! gSpan enumeration tree over the connected subgraphs of a graph set.
//!
//! Each tree node is a pattern in minimum-code form together with every
//! embedding of it into the graph set. Children are the rightmost-path
//! one-edge extensions whose codes are still minimal, so every connected
//! pattern occurring in the data is reached exactly once. A child's
//! occurrence set is always a subset of its parent's.

use std::collections::HashMap;
use std::ops::ControlFlow;

use fixedbitset::FixedBitSet;

use crate::dfs_code::{dfs_edge_cmp, is_minimal, DfsCode, DfsEdge};
use crate::graph::LabeledGraph;

/// One mapping of a pattern into a graph: `vertices[i]` is the host vertex
/// matched to discovery index `i`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Embedding {
    pub graph: u32,
    pub vertices: Vec<u32>,
}

#[derive(Debug, Clone)]
pub struct OccurrenceSet {
    pub code: DfsCode,
    /// `{ i : G_i ⊒ code }`, one bit per graph of the enumerated set.
    pub graph_ids: FixedBitSet,
    pub embeddings: Vec<Embedding>,
}

impl OccurrenceSet {
    pub fn support(&self) -> usize {
        self.graph_ids.count_ones(..)
    }

    pub fn graph_id_list(&self) -> Vec<usize> {
        self.graph_ids.ones().collect()
    }
}

/// Limits on the enumeration: pattern size in edges and minimum support.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, serde::Serialize, serde::Deserialize)]
pub struct EnumBudget {
    /// `None` means unbounded.
    pub max_edges: Option<usize>,
    pub min_support: usize,
}

impl Default for EnumBudget {
    fn default() -> Self {
        Self { max_edges: None, min_support: 1 }
    }
}

impl EnumBudget {
    pub fn new(max_edges: Option<usize>, min_support: usize) -> Self {
        Self { max_edges, min_support }
    }

    pub fn validate(&self) -> Result<(), String> {
        if self.max_edges == Some(0) {
            return Err("max_edges must be at least 1".into());
        }
        if self.min_support == 0 {
            return Err("min_support must be at least 1".into());
        }
        Ok(())
    }

    pub fn allows_children(&self, edges: usize) -> bool {
        self.max_edges.is_none_or(|m| edges < m)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum VisitDecision {
    Continue,
    PruneChildren,
    Stop,
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct EnumStats {
    pub visited: usize,
    pub pruned_subtrees: usize,
    pub max_depth: usize,
}

/// One root per distinct single-edge code occurring in `graphs`.
pub fn roots(graphs: &[LabeledGraph], min_support: usize) -> Vec<OccurrenceSet> {
    let mut groups: HashMap<DfsEdge, Vec<Embedding>> = HashMap::new();
    for (gid, g) in graphs.iter().enumerate() {
        for e in g.edges() {
            let (lu, lv) = (g.node_label(e.u), g.node_label(e.v));
            let mut orient = |a: usize, b: usize| {
                let key = DfsEdge::new(0, 1, g.node_label(a), e.label, g.node_label(b));
                groups
                    .entry(key)
                    .or_default()
                    .push(Embedding { graph: gid as u32, vertices: vec![a as u32, b as u32] });
            };
            if lu <= lv {
                orient(e.u, e.v);
            }
            if lv <= lu {
                orient(e.v, e.u);
            }
        }
    }
    collect_children(groups, DfsCode::default(), graphs.len(), min_support)
}

fn collect_children(
    groups: HashMap<DfsEdge, Vec<Embedding>>,
    parent: DfsCode,
    num_graphs: usize,
    min_support: usize,
) -> Vec<OccurrenceSet> {
    let mut children: Vec<(DfsEdge, OccurrenceSet)> = groups
        .into_iter()
        .filter_map(|(edge, embeddings)| {
            let mut graph_ids = FixedBitSet::with_capacity(num_graphs);
            for emb in &embeddings {
                graph_ids.insert(emb.graph as usize);
            }
            if graph_ids.count_ones(..) < min_support {
                return None;
            }
            let mut code = parent.clone();
            code.push(edge);
            if code.len() > 1 && !is_minimal(&code) {
                return None;
            }
            Some((edge, OccurrenceSet { code, graph_ids, embeddings }))
        })
        .collect();
    children.sort_by(|a, b| dfs_edge_cmp(&a.0, &b.0));
    children.into_iter().map(|(_, occ)| occ).collect()
}

/// Minimal rightmost-path extensions of `parent` with support ≥ `min_support`,
/// in DFS edge order.
pub fn extend(parent: &OccurrenceSet, graphs: &[LabeledGraph], min_support: usize) -> Vec<OccurrenceSet> {
    extend_embeddings(&parent.code, &parent.embeddings, graphs, min_support)
}

pub(crate) fn extend_embeddings(
    code: &DfsCode,
    embeddings: &[Embedding],
    graphs: &[LabeledGraph],
    min_support: usize,
) -> Vec<OccurrenceSet> {
    let path = code.rightmost_path();
    let Some(&rightmost) = path.last() else {
        return Vec::new();
    };
    let next_index = code.vertex_count() as u32;
    let n = next_index as usize;

    // existing pattern edges, to skip backward extensions already present
    let mut pattern_adj = vec![false; n * n];
    for e in code.edges() {
        pattern_adj[e.from as usize * n + e.to as usize] = true;
        pattern_adj[e.to as usize * n + e.from as usize] = true;
    }

    let mut groups: HashMap<DfsEdge, Vec<Embedding>> = HashMap::new();
    let mut in_image = Vec::new();
    for emb in embeddings {
        let g = &graphs[emb.graph as usize];
        in_image.clear();
        in_image.resize(g.node_count(), false);
        for &v in &emb.vertices {
            in_image[v as usize] = true;
        }

        let gr = emb.vertices[rightmost as usize] as usize;
        for &pv in &path[..path.len() - 1] {
            if pattern_adj[rightmost as usize * n + pv as usize] {
                continue;
            }
            let gv = emb.vertices[pv as usize] as usize;
            if let Some(label) = g.edge_label(gr, gv) {
                let key = DfsEdge::new(rightmost, pv, g.node_label(gr), label, g.node_label(gv));
                groups.entry(key).or_default().push(emb.clone());
            }
        }

        for &pv in &path {
            let gv = emb.vertices[pv as usize] as usize;
            for inc in g.neighbors(gv) {
                if in_image[inc.neighbor] {
                    continue;
                }
                let key = DfsEdge::new(pv, next_index, g.node_label(gv), inc.label, g.node_label(inc.neighbor));
                let mut vertices = emb.vertices.clone();
                vertices.push(inc.neighbor as u32);
                groups.entry(key).or_default().push(Embedding { graph: emb.graph, vertices });
            }
        }
    }
    collect_children(groups, code.clone(), graphs.len(), min_support)
}

/// Depth-first traversal of the enumeration tree. The visitor sees each
/// pattern once with its depth (edge count) and may prune its subtree or
/// stop the whole traversal; an `Err` aborts and is returned as is.
pub fn try_enumerate<E>(
    graphs: &[LabeledGraph],
    budget: EnumBudget,
    mut visitor: impl FnMut(&OccurrenceSet, usize) -> Result<VisitDecision, E>,
) -> Result<EnumStats, E> {
    let mut stats = EnumStats::default();
    if graphs.is_empty() {
        return Ok(stats);
    }
    let min_support = budget.min_support.max(1);
    for root in roots(graphs, min_support) {
        if walk(&root, graphs, budget, min_support, &mut visitor, &mut stats)?.is_break() {
            break;
        }
    }
    Ok(stats)
}

fn walk<E>(
    node: &OccurrenceSet,
    graphs: &[LabeledGraph],
    budget: EnumBudget,
    min_support: usize,
    visitor: &mut impl FnMut(&OccurrenceSet, usize) -> Result<VisitDecision, E>,
    stats: &mut EnumStats,
) -> Result<ControlFlow<()>, E> {
    let depth = node.code.len();
    stats.visited += 1;
    stats.max_depth = stats.max_depth.max(depth);
    match visitor(node, depth)? {
        VisitDecision::Stop => return Ok(ControlFlow::Break(())),
        VisitDecision::PruneChildren => {
            stats.pruned_subtrees += 1;
            return Ok(ControlFlow::Continue(()));
        }
        VisitDecision::Continue => {}
    }
    if !budget.allows_children(depth) {
        return Ok(ControlFlow::Continue(()));
    }
    for child in extend(node, graphs, min_support) {
        if walk(&child, graphs, budget, min_support, visitor, stats)?.is_break() {
            return Ok(ControlFlow::Break(()));
        }
    }
    Ok(ControlFlow::Continue(()))
}

/// Infallible form of [`try_enumerate`].
pub fn enumerate(
    graphs: &[LabeledGraph],
    budget: EnumBudget,
    mut visitor: impl FnMut(&OccurrenceSet, usize) -> VisitDecision,
) -> EnumStats {
    match try_enumerate::<std::convert::Infallible>(graphs, budget, |occ, depth| Ok(visitor(occ, depth))) {
        Ok(stats) => stats,
        Err(never) => match never {},
    }
}
