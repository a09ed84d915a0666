//! Non-induced subgraph isomorphism by backtracking.

use crate::dfs_code::Pattern;
use crate::graph::{LabelId, LabeledGraph};

fn signature(g: &LabeledGraph, v: usize) -> Vec<(LabelId, LabelId)> {
    let mut sig: Vec<_> = g.neighbors(v).iter().map(|inc| (inc.label, g.node_label(inc.neighbor))).collect();
    sig.sort_unstable();
    sig
}

/// Sorted-multiset inclusion.
fn includes(big: &[(LabelId, LabelId)], small: &[(LabelId, LabelId)]) -> bool {
    let mut it = big.iter();
    'outer: for s in small {
        for b in it.by_ref() {
            if b == s {
                continue 'outer;
            }
            if b > s {
                return false;
            }
        }
        return false;
    }
    true
}

struct Search<'a> {
    host: &'a LabeledGraph,
    pattern: &'a LabeledGraph,
    order: Vec<usize>,
    /// earlier-ordered neighbour used to generate candidates
    anchor: Vec<Option<usize>>,
    candidates: Vec<Vec<bool>>,
    map: Vec<usize>,
    used: Vec<bool>,
}

impl Search<'_> {
    fn feasible(&self, u: usize, v: usize) -> bool {
        if self.used[v] || !self.candidates[u][v] {
            return false;
        }
        self.pattern.neighbors(u).iter().all(|inc| {
            let w = self.map[inc.neighbor];
            w == usize::MAX || self.host.edge_label(v, w) == Some(inc.label)
        })
    }

    fn assign(&mut self, u: usize, v: usize, depth: usize) -> bool {
        self.map[u] = v;
        self.used[v] = true;
        if self.extend(depth + 1) {
            return true;
        }
        self.map[u] = usize::MAX;
        self.used[v] = false;
        false
    }

    fn extend(&mut self, depth: usize) -> bool {
        if depth == self.order.len() {
            return true;
        }
        let u = self.order[depth];
        match self.anchor[u] {
            Some(p) => {
                let hp = self.map[p];
                let host = self.host;
                for inc in host.neighbors(hp) {
                    if self.feasible(u, inc.neighbor) && self.assign(u, inc.neighbor, depth) {
                        return true;
                    }
                }
            }
            None => {
                for v in 0..self.host.node_count() {
                    if self.feasible(u, v) && self.assign(u, v, depth) {
                        return true;
                    }
                }
            }
        }
        false
    }
}

/// True iff `host` has a (not necessarily induced) subgraph isomorphic to `pattern`.
pub fn contains_graph(host: &LabeledGraph, pattern: &LabeledGraph) -> bool {
    let (n, m) = (pattern.node_count(), pattern.edge_count());
    if n > host.node_count() || m > host.edge_count() {
        return false;
    }
    if n == 0 {
        return true;
    }

    let host_sigs: Vec<_> = (0..host.node_count()).map(|v| signature(host, v)).collect();
    let candidates: Vec<Vec<bool>> = (0..n)
        .map(|u| {
            let sig = signature(pattern, u);
            (0..host.node_count())
                .map(|v| {
                    host.node_label(v) == pattern.node_label(u)
                        && host.degree(v) >= pattern.degree(u)
                        && includes(&host_sigs[v], &sig)
                })
                .collect()
        })
        .collect();
    if candidates.iter().any(|c| !c.contains(&true)) {
        return false;
    }

    // BFS order so every vertex after a component root has a mapped anchor.
    let mut order = Vec::with_capacity(n);
    let mut anchor = vec![None; n];
    let mut seen = vec![false; n];
    for root in 0..n {
        if seen[root] {
            continue;
        }
        seen[root] = true;
        let start = order.len();
        order.push(root);
        let mut head = start;
        while head < order.len() {
            let u = order[head];
            head += 1;
            for inc in pattern.neighbors(u) {
                if !seen[inc.neighbor] {
                    seen[inc.neighbor] = true;
                    anchor[inc.neighbor] = Some(u);
                    order.push(inc.neighbor);
                }
            }
        }
    }

    let mut search = Search {
        host,
        pattern,
        order,
        anchor,
        candidates,
        map: vec![usize::MAX; n],
        used: vec![false; host.node_count()],
    };
    search.extend(0)
}

/// The subgraph indicator `I(G ⊒ g)`.
pub fn contains(host: &LabeledGraph, pattern: &Pattern) -> bool {
    contains_graph(host, pattern.graph())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn path(labels: &[u32]) -> LabeledGraph {
        let edges = (1..labels.len()).map(|i| (i - 1, i, 0)).collect();
        LabeledGraph::new(labels.to_vec(), edges).unwrap()
    }

    #[test]
    fn edge_in_path() {
        assert!(contains_graph(&path(&[0, 1, 2]), &path(&[0, 1])));
        assert!(contains_graph(&path(&[0, 1, 2]), &path(&[2, 1])));
        assert!(!contains_graph(&path(&[0, 1]), &path(&[0, 0])));
    }

    #[test]
    fn not_induced() {
        // A path of three A's is a subgraph of the triangle, though not induced.
        let tri = LabeledGraph::new(vec![0, 0, 0], vec![(0, 1, 0), (1, 2, 0), (2, 0, 0)]).unwrap();
        assert!(contains_graph(&tri, &path(&[0, 0, 0])));
        assert!(!contains_graph(&path(&[0, 0, 0]), &tri));
    }

    #[test]
    fn edge_labels_matter() {
        let host = LabeledGraph::new(vec![0, 0], vec![(0, 1, 3)]).unwrap();
        let pat = LabeledGraph::new(vec![0, 0], vec![(0, 1, 4)]).unwrap();
        assert!(!contains_graph(&host, &pat));
    }

    #[test]
    fn injective_mapping() {
        // star with centre 0 and two leaves cannot host a path of 4 nodes
        let star = LabeledGraph::new(vec![0, 0, 0], vec![(0, 1, 0), (0, 2, 0)]).unwrap();
        assert!(!contains_graph(&star, &path(&[0, 0, 0, 0])));
    }
}
