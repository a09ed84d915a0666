//! The Graph-XOR benchmark.
//!
//! Each graph joins two rooted three-node paths over {A, B, C} through a
//! fresh hub node D. The 18 label triples (up to reversal) are split into
//! two fixed groups; a graph is negative iff both parts come from the same
//! group. Every unordered pair of rooted parts (with repetition) is used
//! once, giving 1035 graphs with 506 positives.

use std::collections::HashSet;

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::dataset::Dataset;
use crate::dfs_code::canonical_code;
use crate::graph::{LabelDict, LabeledGraph};

pub const GROUP_1: [&str; 9] = ["AAA", "CCC", "ABB", "BAB", "BCC", "CBC", "ACC", "CAC", "ACB"];
pub const GROUP_2: [&str; 9] = ["BBB", "AAB", "ABA", "BBC", "BCB", "AAC", "ACA", "ABC", "BAC"];

pub const EXPECTED_GRAPHS: usize = 1035;
pub const EXPECTED_POSITIVES: usize = 506;
pub const EXPECTED_NEGATIVES: usize = 529;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum AttachPoint {
    End1,
    Middle,
    End2,
}

impl AttachPoint {
    fn position(self) -> usize {
        match self {
            AttachPoint::End1 => 0,
            AttachPoint::Middle => 1,
            AttachPoint::End2 => 2,
        }
    }
}

/// A rooted part: a labelled three-node path and the node the hub attaches to.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct PartSpec {
    pub labels: [char; 3],
    pub group: u8,
    pub attach: AttachPoint,
}

impl PartSpec {
    pub fn is_palindrome(&self) -> bool {
        self.labels[0] == self.labels[2]
    }

    pub fn triple(&self) -> String {
        self.labels.iter().collect()
    }
}

fn triple_chars(s: &str) -> [char; 3] {
    let c: Vec<char> = s.chars().collect();
    [c[0], c[1], c[2]]
}

fn parts_from_groups(groups: [Vec<&str>; 2]) -> Vec<PartSpec> {
    let mut parts = Vec::new();
    for (gi, triples) in groups.iter().enumerate() {
        for t in triples {
            let labels = triple_chars(t);
            let points: &[AttachPoint] = if labels[0] == labels[2] {
                &[AttachPoint::End1, AttachPoint::Middle]
            } else {
                &[AttachPoint::End1, AttachPoint::Middle, AttachPoint::End2]
            };
            for &attach in points {
                parts.push(PartSpec { labels, group: gi as u8 + 1, attach });
            }
        }
    }
    parts
}

/// The 45 rooted parts of the fixed grouping, group 1 first.
pub fn part_table() -> Vec<PartSpec> {
    parts_from_groups([GROUP_1.to_vec(), GROUP_2.to_vec()])
}

/// Rooted parts for a random 9/9 regrouping of the same 18 triples.
pub fn reshuffled_part_table(seed: u64) -> Vec<PartSpec> {
    let mut all: Vec<&str> = GROUP_1.iter().chain(GROUP_2.iter()).copied().collect();
    all.shuffle(&mut ChaCha8Rng::seed_from_u64(seed));
    let (a, b) = all.split_at(9);
    parts_from_groups([a.to_vec(), b.to_vec()])
}

pub fn generate() -> Dataset {
    generate_from_parts(&part_table())
}

pub fn generate_from_parts(parts: &[PartSpec]) -> Dataset {
    let node_labels = LabelDict::from_names(["A", "B", "C", "D"]);
    let edge_labels = LabelDict::from_names(["0"]);
    let id_of = |c: char| node_labels.get(&c.to_string()).expect("label in dictionary");
    let hub = node_labels.get("D").expect("hub label");

    let mut data = Dataset { name: "graph-xor".into(), ..Dataset::default() };
    let mut seen = HashSet::new();
    for i in 0..parts.len() {
        for j in i..parts.len() {
            let (p, q) = (&parts[i], &parts[j]);
            let mut nodes: Vec<u32> = p.labels.iter().chain(q.labels.iter()).map(|&c| id_of(c)).collect();
            nodes.push(hub);
            let edges = vec![
                (0, 1, 0),
                (1, 2, 0),
                (3, 4, 0),
                (4, 5, 0),
                (6, p.attach.position(), 0),
                (6, 3 + q.attach.position(), 0),
            ];
            let g = LabeledGraph::new(nodes, edges).expect("generator builds simple graphs");
            let code = canonical_code(&g).expect("generated graphs are connected");
            if !seen.insert(code) {
                continue;
            }
            let y = if p.group == q.group { -1.0 } else { 1.0 };
            data.ids.push(data.graphs.len().to_string());
            data.graphs.push(g);
            data.responses.push(y);
        }
    }
    data.node_labels = node_labels;
    data.edge_labels = edge_labels;
    data
}
