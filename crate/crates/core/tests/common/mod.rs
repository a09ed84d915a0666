//! Brute-force reference implementations and random instance generators.
#![allow(dead_code)]

use std::collections::HashSet;

use graphboost::graph::LabeledGraph;
use rand::seq::SliceRandom;
use rand::Rng;

/// Random connected simple graph: a random spanning tree plus extra edges.
pub fn random_connected(
    rng: &mut impl Rng,
    nodes: usize,
    extra: usize,
    node_labels: u32,
    edge_labels: u32,
) -> LabeledGraph {
    let labels: Vec<u32> = (0..nodes).map(|_| rng.gen_range(0..node_labels)).collect();
    let mut present = HashSet::new();
    let mut edges = Vec::new();
    for v in 1..nodes {
        let u = rng.gen_range(0..v);
        present.insert((u, v));
        edges.push((u, v, rng.gen_range(0..edge_labels)));
    }
    for _ in 0..extra {
        let u = rng.gen_range(0..nodes);
        let v = rng.gen_range(0..nodes);
        let key = (u.min(v), u.max(v));
        if u != v && present.insert(key) {
            edges.push((key.0, key.1, rng.gen_range(0..edge_labels)));
        }
    }
    LabeledGraph::new(labels, edges).unwrap()
}

/// The same graph under a random vertex permutation and edge order.
pub fn shuffled(rng: &mut impl Rng, g: &LabeledGraph) -> LabeledGraph {
    let n = g.node_count();
    let mut perm: Vec<usize> = (0..n).collect();
    perm.shuffle(rng);
    let mut labels = vec![0; n];
    for v in 0..n {
        labels[perm[v]] = g.node_label(v);
    }
    let mut edges: Vec<(usize, usize, u32)> = g
        .edges()
        .iter()
        .map(|e| if rng.gen() { (perm[e.u], perm[e.v], e.label) } else { (perm[e.v], perm[e.u], e.label) })
        .collect();
    edges.shuffle(rng);
    LabeledGraph::new(labels, edges).unwrap()
}

fn permutations(n: usize) -> Vec<Vec<usize>> {
    if n == 0 {
        return vec![vec![]];
    }
    let mut out = Vec::new();
    for p in permutations(n - 1) {
        for i in 0..=p.len() {
            let mut q = p.clone();
            q.insert(i, n - 1);
            out.push(q);
        }
    }
    out
}

fn edge_set(g: &LabeledGraph) -> HashSet<(usize, usize, u32)> {
    g.edges().iter().map(|e| (e.u.min(e.v), e.u.max(e.v), e.label)).collect()
}

/// Isomorphism by trying every vertex bijection.
pub fn brute_isomorphic(a: &LabeledGraph, b: &LabeledGraph) -> bool {
    if a.node_count() != b.node_count() || a.edge_count() != b.edge_count() {
        return false;
    }
    let target = edge_set(b);
    permutations(a.node_count()).into_iter().any(|p| {
        (0..a.node_count()).all(|v| a.node_label(v) == b.node_label(p[v]))
            && a.edges().iter().all(|e| target.contains(&(p[e.u].min(p[e.v]), p[e.u].max(p[e.v]), e.label)))
    })
}

/// Subgraph containment (not necessarily induced) by trying every
/// injective vertex map.
pub fn brute_contains(host: &LabeledGraph, pattern: &LabeledGraph) -> bool {
    let target = edge_set(host);
    let k = pattern.node_count();
    let mut map = vec![usize::MAX; k];
    let mut used = vec![false; host.node_count()];
    fn go(
        i: usize,
        host: &LabeledGraph,
        pattern: &LabeledGraph,
        target: &HashSet<(usize, usize, u32)>,
        map: &mut [usize],
        used: &mut [bool],
    ) -> bool {
        if i == map.len() {
            return pattern
                .edges()
                .iter()
                .all(|e| target.contains(&(map[e.u].min(map[e.v]), map[e.u].max(map[e.v]), e.label)));
        }
        for v in 0..host.node_count() {
            if !used[v] && host.node_label(v) == pattern.node_label(i) {
                used[v] = true;
                map[i] = v;
                if go(i + 1, host, pattern, target, map, used) {
                    return true;
                }
                used[v] = false;
            }
        }
        false
    }
    go(0, host, pattern, &target, &mut map, &mut used)
}

/// Every connected edge subset of `g` as a standalone graph.
pub fn connected_edge_subgraphs(g: &LabeledGraph) -> Vec<LabeledGraph> {
    let m = g.edge_count();
    assert!(m <= 16, "brute force is exponential in edges");
    let mut out = Vec::new();
    for mask in 1u32..(1 << m) {
        let chosen: Vec<_> = (0..m).filter(|&i| mask >> i & 1 == 1).map(|i| g.edges()[i]).collect();
        let mut index = vec![usize::MAX; g.node_count()];
        let mut labels = Vec::new();
        for e in &chosen {
            for v in [e.u, e.v] {
                if index[v] == usize::MAX {
                    index[v] = labels.len();
                    labels.push(g.node_label(v));
                }
            }
        }
        let edges = chosen.iter().map(|e| (index[e.u], index[e.v], e.label)).collect();
        let sub = LabeledGraph::new(labels, edges).unwrap();
        if sub.is_connected() {
            out.push(sub);
        }
    }
    out
}

/// Isomorphism classes of connected patterns with at most `max_edges`
/// edges occurring in at least `min_support` graphs, with their supports.
/// Deduplication uses [`brute_isomorphic`] only.
pub fn brute_patterns(graphs: &[LabeledGraph], max_edges: usize, min_support: usize) -> Vec<(LabeledGraph, usize)> {
    let mut classes: Vec<LabeledGraph> = Vec::new();
    for g in graphs {
        for sub in connected_edge_subgraphs(g) {
            if sub.edge_count() <= max_edges && !classes.iter().any(|c| brute_isomorphic(c, &sub)) {
                classes.push(sub);
            }
        }
    }
    classes
        .into_iter()
        .map(|c| {
            let support = graphs.iter().filter(|g| brute_contains(g, &c)).count();
            (c, support)
        })
        .filter(|&(_, s)| s >= min_support)
        .collect()
}

pub fn tss(values: &[f64]) -> f64 {
    if values.is_empty() {
        return 0.0;
    }
    let mean = values.iter().sum::<f64>() / values.len() as f64;
    0.5 * values.iter().map(|v| (v - mean) * (v - mean)).sum::<f64>()
}
