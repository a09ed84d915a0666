//! Lazily materialized enumeration tree over a fixed training set.
//!
//! Split searches at every tree node and every boosting round walk the same
//! enumeration tree over the training graphs; only the residuals and the
//! node's subset change. The cache expands each pattern at most once and
//! keeps its global occurrence set, so later searches reduce to bitset
//! intersections. Safe to share between threads.

use std::sync::atomic::{AtomicUsize, Ordering};
use std::sync::{Mutex, OnceLock};

use fixedbitset::FixedBitSet;

use crate::dfs_code::DfsCode;
use crate::enumerate::{extend_embeddings, roots, Embedding, OccurrenceSet};
use crate::graph::LabeledGraph;

pub struct PatternNode {
    id: usize,
    code: DfsCode,
    graph_ids: FixedBitSet,
    embeddings: Mutex<Vec<Embedding>>,
    children: OnceLock<Vec<PatternNode>>,
}

impl PatternNode {
    fn new(id: usize, occ: OccurrenceSet) -> Self {
        Self {
            id,
            code: occ.code,
            graph_ids: occ.graph_ids,
            embeddings: Mutex::new(occ.embeddings),
            children: OnceLock::new(),
        }
    }

    /// Creation index within the owning cache.
    pub fn id(&self) -> usize {
        self.id
    }

    pub fn code(&self) -> &DfsCode {
        &self.code
    }

    /// Global occurrence set over the cache's graph set.
    pub fn graph_ids(&self) -> &FixedBitSet {
        &self.graph_ids
    }

    pub fn edge_count(&self) -> usize {
        self.code.len()
    }
}

pub struct PatternCache<'g> {
    graphs: &'g [LabeledGraph],
    min_support: usize,
    roots: OnceLock<Vec<PatternNode>>,
    materialized: AtomicUsize,
}

impl<'g> PatternCache<'g> {
    pub fn new(graphs: &'g [LabeledGraph], min_support: usize) -> Self {
        Self { graphs, min_support: min_support.max(1), roots: OnceLock::new(), materialized: AtomicUsize::new(0) }
    }

    pub fn graphs(&self) -> &'g [LabeledGraph] {
        self.graphs
    }

    pub fn min_support(&self) -> usize {
        self.min_support
    }

    pub fn roots(&self) -> &[PatternNode] {
        self.roots.get_or_init(|| {
            let occs = roots(self.graphs, self.min_support);
            self.adopt(occs)
        })
    }

    pub fn children<'a>(&self, node: &'a PatternNode) -> &'a [PatternNode] {
        node.children.get_or_init(|| {
            let embeddings = std::mem::take(&mut *node.embeddings.lock().expect("embedding lock poisoned"));
            self.adopt(extend_embeddings(&node.code, &embeddings, self.graphs, self.min_support))
        })
    }

    fn adopt(&self, occs: Vec<OccurrenceSet>) -> Vec<PatternNode> {
        let first = self.materialized.fetch_add(occs.len(), Ordering::Relaxed);
        occs.into_iter().enumerate().map(|(i, occ)| PatternNode::new(first + i, occ)).collect()
    }

    /// Number of distinct patterns materialized so far.
    pub fn len(&self) -> usize {
        self.materialized.load(Ordering::Relaxed)
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    /// Occurrence set of a minimal code, following its prefixes down the
    /// tree. `None` if the pattern does not reach the minimum support.
    pub fn graph_ids(&self, code: &DfsCode) -> Option<&FixedBitSet> {
        let edges = code.edges();
        let mut level = self.roots();
        let mut found: Option<&PatternNode> = None;
        for len in 1..=edges.len() {
            let node = level.iter().find(|n| n.code.edges() == &edges[..len])?;
            found = Some(node);
            if len < edges.len() {
                level = self.children(node);
            }
        }
        found.map(|n| &n.graph_ids)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dfs_code::canonical_code;

    #[test]
    fn lookup_matches_enumeration() {
        let g = LabeledGraph::new(vec![0, 1, 2, 1], vec![(0, 1, 0), (1, 2, 0), (2, 3, 0)]).unwrap();
        let h = LabeledGraph::new(vec![0, 1], vec![(0, 1, 0)]).unwrap();
        let graphs = vec![g.clone(), h.clone()];
        let cache = PatternCache::new(&graphs, 1);
        let code = canonical_code(&h).unwrap();
        let ids = cache.graph_ids(&code).unwrap();
        assert_eq!(ids.ones().collect::<Vec<_>>(), vec![0, 1]);
        let full = canonical_code(&g).unwrap();
        assert_eq!(cache.graph_ids(&full).unwrap().ones().collect::<Vec<_>>(), vec![0]);
        assert!(cache.len() >= 4);
    }
}
