//! Undirected graphs with discrete node and edge labels.

use std::collections::HashMap;

use crate::error::GraphError;

/// Interned label id. Ids are ordered by integer value, and a dataset
/// assigns them in order of first appearance.
pub type LabelId = u32;

/// Bidirectional string <-> id map for one label namespace.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct LabelDict {
    names: Vec<String>,
    index: HashMap<String, LabelId>,
}

impl LabelDict {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn from_names<I, S>(names: I) -> Self
    where
        I: IntoIterator<Item = S>,
        S: Into<String>,
    {
        let mut dict = Self::new();
        for name in names {
            dict.intern(&name.into());
        }
        dict
    }

    /// Returns the id for `name`, assigning the next free id on first use.
    pub fn intern(&mut self, name: &str) -> LabelId {
        if let Some(&id) = self.index.get(name) {
            return id;
        }
        let id = self.names.len() as LabelId;
        self.names.push(name.to_owned());
        self.index.insert(name.to_owned(), id);
        id
    }

    pub fn get(&self, name: &str) -> Option<LabelId> {
        self.index.get(name).copied()
    }

    pub fn name(&self, id: LabelId) -> Option<&str> {
        self.names.get(id as usize).map(String::as_str)
    }

    pub fn len(&self) -> usize {
        self.names.len()
    }

    pub fn is_empty(&self) -> bool {
        self.names.is_empty()
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }
}

/// One undirected edge as stored in a [`LabeledGraph`].
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Edge {
    pub u: usize,
    pub v: usize,
    pub label: LabelId,
}

/// Incidence entry: the neighbour reached and the label of the connecting edge.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Incidence {
    pub neighbor: usize,
    pub label: LabelId,
    pub edge: usize,
}

/// A finite simple undirected graph with labelled nodes and edges.
///
/// Immutable after construction. Input graphs may be disconnected;
/// patterns built from DFS codes are always connected.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LabeledGraph {
    nodes: Vec<LabelId>,
    edges: Vec<Edge>,
    adjacency: Vec<Vec<Incidence>>,
}

impl LabeledGraph {
    /// Builds a graph, rejecting self-loops, parallel edges and dangling endpoints.
    pub fn new(nodes: Vec<LabelId>, edges: Vec<(usize, usize, LabelId)>) -> Result<Self, GraphError> {
        let n = nodes.len();
        let mut adjacency: Vec<Vec<Incidence>> = vec![Vec::new(); n];
        let mut stored = Vec::with_capacity(edges.len());
        for (idx, &(u, v, label)) in edges.iter().enumerate() {
            if u >= n || v >= n {
                return Err(GraphError::DanglingEndpoint { u, v, nodes: n });
            }
            if u == v {
                return Err(GraphError::SelfLoop { node: u });
            }
            if adjacency[u].iter().any(|inc| inc.neighbor == v) {
                return Err(GraphError::ParallelEdge { u, v });
            }
            adjacency[u].push(Incidence { neighbor: v, label, edge: idx });
            adjacency[v].push(Incidence { neighbor: u, label, edge: idx });
            stored.push(Edge { u, v, label });
        }
        Ok(Self { nodes, edges: stored, adjacency })
    }

    pub fn node_count(&self) -> usize {
        self.nodes.len()
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    pub fn node_label(&self, v: usize) -> LabelId {
        self.nodes[v]
    }

    pub fn node_labels(&self) -> &[LabelId] {
        &self.nodes
    }

    pub fn edges(&self) -> &[Edge] {
        &self.edges
    }

    pub fn neighbors(&self, v: usize) -> &[Incidence] {
        &self.adjacency[v]
    }

    pub fn degree(&self, v: usize) -> usize {
        self.adjacency[v].len()
    }

    /// Label of the edge between `u` and `v`, if one exists.
    pub fn edge_label(&self, u: usize, v: usize) -> Option<LabelId> {
        self.adjacency[u].iter().find(|inc| inc.neighbor == v).map(|inc| inc.label)
    }

    pub fn is_connected(&self) -> bool {
        if self.nodes.is_empty() {
            return true;
        }
        let mut seen = vec![false; self.nodes.len()];
        let mut stack = vec![0];
        seen[0] = true;
        let mut count = 1;
        while let Some(v) = stack.pop() {
            for inc in &self.adjacency[v] {
                if !seen[inc.neighbor] {
                    seen[inc.neighbor] = true;
                    count += 1;
                    stack.push(inc.neighbor);
                }
            }
        }
        count == self.nodes.len()
    }

    /// Rewrites node and edge labels through the given maps.
    pub fn relabel(&self, node_map: impl Fn(LabelId) -> LabelId, edge_map: impl Fn(LabelId) -> LabelId) -> Self {
        let nodes = self.nodes.iter().map(|&l| node_map(l)).collect();
        let edges = self.edges.iter().map(|e| (e.u, e.v, edge_map(e.label))).collect();
        Self::new(nodes, edges).expect("relabelling preserves simplicity")
    }
}
