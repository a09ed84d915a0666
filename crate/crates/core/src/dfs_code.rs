//! gSpan DFS codes: the canonical identity of a connected pattern.
//!
//! A code is a sequence of edge quintuples `(from, to, from_label,
//! edge_label, to_label)` where `from`/`to` are discovery indices of a depth
//! first traversal. Forward edges (`from < to`) discover a new vertex,
//! backward edges close a cycle from the rightmost vertex. The minimum code
//! under the DFS lexicographic order is canonical: two connected graphs are
//! isomorphic iff their minimum codes are equal.

use std::cmp::Ordering;
use std::fmt;

use crate::error::GraphError;
use crate::graph::{LabelId, LabeledGraph};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct DfsEdge {
    pub from: u32,
    pub to: u32,
    pub from_label: LabelId,
    pub edge_label: LabelId,
    pub to_label: LabelId,
}

impl DfsEdge {
    pub fn new(from: u32, to: u32, from_label: LabelId, edge_label: LabelId, to_label: LabelId) -> Self {
        Self { from, to, from_label, edge_label, to_label }
    }

    pub fn is_forward(&self) -> bool {
        self.from < self.to
    }

    fn labels(&self) -> (LabelId, LabelId, LabelId) {
        (self.from_label, self.edge_label, self.to_label)
    }
}

impl fmt::Display for DfsEdge {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({},{},{},{},{})", self.from, self.to, self.from_label, self.edge_label, self.to_label)
    }
}

/// gSpan order of two edges occupying the same position of codes that share
/// the preceding prefix.
pub fn dfs_edge_cmp(a: &DfsEdge, b: &DfsEdge) -> Ordering {
    let ord = match (a.is_forward(), b.is_forward()) {
        (true, true) => a.to.cmp(&b.to).then(b.from.cmp(&a.from)),
        (false, false) => a.from.cmp(&b.from).then(a.to.cmp(&b.to)),
        (false, true) => {
            if a.from < b.to {
                Ordering::Less
            } else {
                Ordering::Greater
            }
        }
        (true, false) => {
            if a.to <= b.from {
                Ordering::Less
            } else {
                Ordering::Greater
            }
        }
    };
    ord.then_with(|| a.labels().cmp(&b.labels()))
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, Default)]
pub struct DfsCode(Vec<DfsEdge>);

impl DfsCode {
    /// Wraps an edge sequence after checking that it describes a simple
    /// connected graph with consistent vertex labels.
    pub fn new(edges: Vec<DfsEdge>) -> Result<Self, GraphError> {
        let code = Self(edges);
        code.to_graph()?;
        Ok(code)
    }

    pub fn edges(&self) -> &[DfsEdge] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn vertex_count(&self) -> usize {
        self.0.iter().map(|e| e.from.max(e.to) as usize + 1).max().unwrap_or(0)
    }

    pub(crate) fn push(&mut self, e: DfsEdge) {
        self.0.push(e);
    }

    /// Discovery indices on the rightmost path, root first, rightmost vertex last.
    pub fn rightmost_path(&self) -> Vec<u32> {
        let mut path = Vec::new();
        let mut expect: Option<u32> = None;
        for e in self.0.iter().rev() {
            if e.is_forward() && expect.is_none_or(|x| x == e.to) {
                if path.is_empty() {
                    path.push(e.to);
                }
                path.push(e.from);
                expect = Some(e.from);
            }
        }
        path.reverse();
        path
    }

    /// Lexicographic comparison under the DFS edge order.
    pub fn dfs_cmp(&self, other: &Self) -> Ordering {
        for (a, b) in self.0.iter().zip(&other.0) {
            match dfs_edge_cmp(a, b) {
                Ordering::Equal => continue,
                ord => return ord,
            }
        }
        self.0.len().cmp(&other.0.len())
    }

    /// The graph this code encodes; vertex `i` is the `i`-th discovered vertex.
    pub fn to_graph(&self) -> Result<LabeledGraph, GraphError> {
        let first = self.0.first().ok_or(GraphError::Edgeless)?;
        if (first.from, first.to) != (0, 1) {
            return Err(GraphError::MalformedCode("first edge must be (0,1)".into()));
        }
        let mut labels: Vec<LabelId> = Vec::new();
        let mut edges = Vec::with_capacity(self.0.len());
        for (pos, e) in self.0.iter().enumerate() {
            for (v, l) in [(e.from, e.from_label), (e.to, e.to_label)] {
                let v = v as usize;
                match v.cmp(&labels.len()) {
                    Ordering::Less => {
                        if labels[v] != l {
                            return Err(GraphError::MalformedCode(format!("edge {pos} relabels vertex {v}")));
                        }
                    }
                    Ordering::Equal => labels.push(l),
                    Ordering::Greater => {
                        return Err(GraphError::MalformedCode(format!(
                            "edge {pos} skips discovery index {}",
                            labels.len()
                        )))
                    }
                }
            }
            edges.push((e.from as usize, e.to as usize, e.edge_label));
        }
        LabeledGraph::new(labels, edges).map_err(|err| GraphError::MalformedCode(err.to_string()))
    }
}

impl fmt::Display for DfsCode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[")?;
        for (i, e) in self.0.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{e}")?;
        }
        write!(f, "]")
    }
}

/// Partial DFS traversal of a graph realizing the current code prefix.
#[derive(Clone)]
struct Traversal {
    /// discovery index -> graph vertex
    map: Vec<usize>,
    /// graph vertex -> discovery index
    inverse: Vec<Option<u32>>,
    used: Vec<bool>,
}

/// Builds the minimum code of `g` greedily. With a `reference`, stops and
/// returns `None` as soon as the minimum diverges below the reference.
fn build_minimum(g: &LabeledGraph, reference: Option<&[DfsEdge]>) -> Option<DfsCode> {
    let n = g.node_count();
    let m = g.edge_count();

    let mut best: Option<DfsEdge> = None;
    let mut starts: Vec<(usize, usize, usize)> = Vec::new();
    for (idx, e) in g.edges().iter().enumerate() {
        for (a, b) in [(e.u, e.v), (e.v, e.u)] {
            let cand = DfsEdge::new(0, 1, g.node_label(a), e.label, g.node_label(b));
            match best.map(|x| cand.labels().cmp(&x.labels())) {
                None | Some(Ordering::Less) => {
                    best = Some(cand);
                    starts.clear();
                    starts.push((a, b, idx));
                }
                Some(Ordering::Equal) => starts.push((a, b, idx)),
                Some(Ordering::Greater) => {}
            }
        }
    }
    let first = best?;
    if let Some(r) = reference {
        if r.first().map(|x| dfs_edge_cmp(&first, x)) != Some(Ordering::Equal) {
            return None;
        }
    }

    let mut traversals: Vec<Traversal> = starts
        .into_iter()
        .map(|(a, b, idx)| {
            let mut inverse = vec![None; n];
            inverse[a] = Some(0);
            inverse[b] = Some(1);
            let mut used = vec![false; m];
            used[idx] = true;
            Traversal { map: vec![a, b], inverse, used }
        })
        .collect();
    let mut code = DfsCode(vec![first]);

    while code.len() < m {
        let path = code.rightmost_path();
        let rightmost = *path.last().expect("non-empty code");
        let next_index = code.vertex_count() as u32;

        let mut best: Option<DfsEdge> = None;
        // (traversal, graph vertex reached, graph edge index)
        let mut hits: Vec<(usize, usize, usize)> = Vec::new();
        let mut offer = |cand: DfsEdge, hit: (usize, usize, usize)| match best.map(|b| dfs_edge_cmp(&cand, &b)) {
            None | Some(Ordering::Less) => {
                best = Some(cand);
                hits.clear();
                hits.push(hit);
            }
            Some(Ordering::Equal) => hits.push(hit),
            Some(Ordering::Greater) => {}
        };

        for (t_idx, t) in traversals.iter().enumerate() {
            let gr = t.map[rightmost as usize];
            for &pv in &path[..path.len() - 1] {
                let gv = t.map[pv as usize];
                if let Some(inc) = g.neighbors(gr).iter().find(|inc| inc.neighbor == gv) {
                    if !t.used[inc.edge] {
                        let cand = DfsEdge::new(rightmost, pv, g.node_label(gr), inc.label, g.node_label(gv));
                        offer(cand, (t_idx, gv, inc.edge));
                    }
                }
            }
            for &pv in path.iter().rev() {
                let gv = t.map[pv as usize];
                for inc in g.neighbors(gv) {
                    if t.inverse[inc.neighbor].is_none() {
                        let cand =
                            DfsEdge::new(pv, next_index, g.node_label(gv), inc.label, g.node_label(inc.neighbor));
                        offer(cand, (t_idx, inc.neighbor, inc.edge));
                    }
                }
            }
        }

        // Disconnected graphs run out of extensions before covering every edge.
        let step = best?;
        if let Some(r) = reference {
            if r.get(code.len()).map(|x| dfs_edge_cmp(&step, x)) != Some(Ordering::Equal) {
                return None;
            }
        }
        traversals = hits
            .into_iter()
            .map(|(t_idx, target, edge)| {
                let mut t = traversals[t_idx].clone();
                t.used[edge] = true;
                if step.is_forward() {
                    t.inverse[target] = Some(next_index);
                    t.map.push(target);
                }
                t
            })
            .collect();
        code.push(step);
    }
    Some(code)
}

/// Minimum DFS code of a connected graph with at least one edge.
pub fn canonical_code(g: &LabeledGraph) -> Result<DfsCode, GraphError> {
    if g.edge_count() == 0 {
        return Err(GraphError::Edgeless);
    }
    if !g.is_connected() {
        return Err(GraphError::Disconnected);
    }
    Ok(build_minimum(g, None).expect("connected graph always yields a code"))
}

/// True iff `code` is the minimum code of the graph it encodes.
pub fn is_minimal(code: &DfsCode) -> bool {
    match code.to_graph() {
        Ok(g) => build_minimum(&g, Some(code.edges())).is_some(),
        Err(_) => false,
    }
}

/// A connected subgraph feature: its canonical code plus the graph it encodes.
#[derive(Debug, Clone)]
pub struct Pattern {
    code: DfsCode,
    graph: LabeledGraph,
}

impl Pattern {
    pub fn from_code(code: DfsCode) -> Result<Self, GraphError> {
        let graph = code.to_graph()?;
        Ok(Self { code, graph })
    }

    pub fn code(&self) -> &DfsCode {
        &self.code
    }

    pub fn graph(&self) -> &LabeledGraph {
        &self.graph
    }

    pub fn edge_count(&self) -> usize {
        self.code.len()
    }
}

impl PartialEq for Pattern {
    fn eq(&self, other: &Self) -> bool {
        self.code == other.code
    }
}

impl Eq for Pattern {}

#[cfg(test)]
mod tests {
    use super::*;

    const A: u32 = 0;
    const B: u32 = 1;

    fn e(from: u32, to: u32, a: u32, l: u32, b: u32) -> DfsEdge {
        DfsEdge::new(from, to, a, l, b)
    }

    #[test]
    fn single_edge_starts_from_smaller_label() {
        let g = LabeledGraph::new(vec![B, A], vec![(0, 1, 0)]).unwrap();
        assert_eq!(canonical_code(&g).unwrap().edges(), &[e(0, 1, A, 0, B)]);
    }

    #[test]
    fn triangle_code() {
        let g = LabeledGraph::new(vec![A, A, A], vec![(0, 1, 0), (1, 2, 0), (2, 0, 0)]).unwrap();
        let code = canonical_code(&g).unwrap();
        assert_eq!(code.edges(), &[e(0, 1, A, 0, A), e(1, 2, A, 0, A), e(2, 0, A, 0, A)]);
        assert!(is_minimal(&code));
    }

    #[test]
    fn rejects_edgeless_and_disconnected() {
        let g = LabeledGraph::new(vec![A], vec![]).unwrap();
        assert_eq!(canonical_code(&g), Err(GraphError::Edgeless));
        let g = LabeledGraph::new(vec![A, A, A, A], vec![(0, 1, 0), (2, 3, 0)]).unwrap();
        assert_eq!(canonical_code(&g), Err(GraphError::Disconnected));
    }

    #[test]
    fn non_minimal_start() {
        // Triangle A, B, B entered through the B-B edge first.
        let code = DfsCode::new(vec![e(0, 1, B, 0, B), e(1, 2, B, 0, A), e(2, 0, A, 0, B)]).unwrap();
        assert!(!is_minimal(&code));
        let canon = canonical_code(&code.to_graph().unwrap()).unwrap();
        assert!(is_minimal(&canon));
        assert_eq!(canon.edges()[0], e(0, 1, A, 0, B));
    }

    #[test]
    fn backward_before_forward() {
        let back = e(2, 0, A, 0, A);
        let fwd = e(2, 3, A, 0, A);
        assert_eq!(dfs_edge_cmp(&back, &fwd), Ordering::Less);
        // deeper forward extension first
        assert_eq!(dfs_edge_cmp(&e(2, 3, A, 0, A), &e(0, 3, A, 0, A)), Ordering::Less);
    }

    #[test]
    fn rightmost_path_skips_finished_branches() {
        // 0-1, 1-2, 0-3 : rightmost path is 0 -> 3
        let code = DfsCode::new(vec![e(0, 1, A, 0, A), e(1, 2, A, 0, A), e(0, 3, A, 0, A)]).unwrap();
        assert_eq!(code.rightmost_path(), vec![0, 3]);
        let code = DfsCode::new(vec![e(0, 1, A, 0, A), e(1, 2, A, 0, A), e(2, 0, A, 0, A)]).unwrap();
        assert_eq!(code.rightmost_path(), vec![0, 1, 2]);
    }

    #[test]
    fn malformed_codes() {
        assert!(DfsCode::new(vec![e(1, 2, A, 0, A)]).is_err());
        assert!(DfsCode::new(vec![e(0, 1, A, 0, A), e(1, 3, A, 0, A)]).is_err());
        assert!(DfsCode::new(vec![e(0, 1, A, 0, A), e(1, 2, B, 0, A)]).is_err());
        assert!(DfsCode::new(vec![e(0, 1, A, 0, A), e(1, 0, A, 0, A)]).is_err());
    }
}
