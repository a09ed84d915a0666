//! Line-based text formats for graph datasets and fitted models.
//!
//! Graph files follow the gSpan convention:
//!
//! ```text
//! % comment
//! t # <id> <response>
//! v <vertex> <label>
//! e <vertex> <vertex> <label>
//! ```
//!
//! Vertices of a graph are numbered `0, 1, 2, ...` in declaration order.
//! Labels are whitespace-free tokens interned in first-appearance order.

use std::fmt::Write as _;

use crate::boost::{BoostedModel, FitParams, Loss};
use crate::dataset::Dataset;
use crate::dfs_code::{DfsCode, DfsEdge, Pattern};
use crate::enumerate::EnumBudget;
use crate::error::{ModelError, ParseError};
use crate::graph::{LabelDict, LabelId, LabeledGraph};
use crate::tree::{RegressionTree, TreeNode};

pub const MODEL_HEADER: &str = "graphboost-model v1";

struct PendingGraph {
    id: String,
    response: f64,
    nodes: Vec<LabelId>,
    edges: Vec<(usize, usize, LabelId)>,
}

fn parse_num<T: std::str::FromStr>(tok: &str, line: usize, what: &str) -> Result<T, ParseError> {
    tok.parse().map_err(|_| ParseError::new(line, format!("invalid {what} {tok:?}")))
}

pub fn parse_graphs(text: &str) -> Result<Dataset, ParseError> {
    let mut data = Dataset::default();
    let mut current: Option<PendingGraph> = None;

    fn finish(data: &mut Dataset, g: PendingGraph) {
        let graph = LabeledGraph::new(g.nodes, g.edges).expect("edges validated while parsing");
        data.ids.push(g.id);
        data.graphs.push(graph);
        data.responses.push(g.response);
    }

    for (idx, raw) in text.lines().enumerate() {
        let line = idx + 1;
        let content = raw.trim();
        if content.is_empty() || content.starts_with('%') {
            continue;
        }
        let toks: Vec<&str> = content.split_whitespace().collect();
        match toks[0] {
            "t" => {
                if toks.len() != 4 || toks[1] != "#" {
                    return Err(ParseError::new(line, "expected `t # <id> <response>`"));
                }
                let response: f64 = parse_num(toks[3], line, "response")?;
                if !response.is_finite() {
                    return Err(ParseError::new(line, "response must be finite"));
                }
                if let Some(g) = current.take() {
                    finish(&mut data, g);
                }
                current = Some(PendingGraph { id: toks[2].to_owned(), response, nodes: Vec::new(), edges: Vec::new() });
            }
            "v" => {
                let g = current.as_mut().ok_or_else(|| ParseError::new(line, "vertex before any `t` record"))?;
                if toks.len() != 3 {
                    return Err(ParseError::new(line, "expected `v <vertex> <label>`"));
                }
                let vid: usize = parse_num(toks[1], line, "vertex id")?;
                if vid != g.nodes.len() {
                    return Err(ParseError::new(line, format!("expected vertex {} but got {vid}", g.nodes.len())));
                }
                g.nodes.push(data.node_labels.intern(toks[2]));
            }
            "e" => {
                let g = current.as_mut().ok_or_else(|| ParseError::new(line, "edge before any `t` record"))?;
                if toks.len() != 4 {
                    return Err(ParseError::new(line, "expected `e <vertex> <vertex> <label>`"));
                }
                let u: usize = parse_num(toks[1], line, "vertex id")?;
                let v: usize = parse_num(toks[2], line, "vertex id")?;
                let n = g.nodes.len();
                if u >= n || v >= n {
                    return Err(ParseError::new(
                        line,
                        format!("edge ({u}, {v}) refers to an undeclared vertex ({n} declared)"),
                    ));
                }
                if u == v {
                    return Err(ParseError::new(line, format!("self-loop on vertex {u}")));
                }
                if g.edges.iter().any(|&(a, b, _)| (a, b) == (u, v) || (a, b) == (v, u)) {
                    return Err(ParseError::new(line, format!("parallel edge ({u}, {v})")));
                }
                let label = data.edge_labels.intern(toks[3]);
                g.edges.push((u, v, label));
            }
            other => return Err(ParseError::new(line, format!("unknown record type {other:?}"))),
        }
    }
    if let Some(g) = current.take() {
        finish(&mut data, g);
    }
    Ok(data)
}

fn label_name(dict: &LabelDict, id: LabelId) -> String {
    match dict.name(id) {
        Some(name) => name.to_owned(),
        None => format!("#{id}"),
    }
}

pub fn write_graphs(data: &Dataset) -> String {
    let mut out = String::new();
    for (i, g) in data.graphs.iter().enumerate() {
        let id = data.ids.get(i).cloned().unwrap_or_else(|| i.to_string());
        let _ = writeln!(out, "t # {id} {}", data.responses[i]);
        for (v, &l) in g.node_labels().iter().enumerate() {
            let _ = writeln!(out, "v {v} {}", label_name(&data.node_labels, l));
        }
        for e in g.edges() {
            let _ = writeln!(out, "e {} {} {}", e.u, e.v, label_name(&data.edge_labels, e.label));
        }
    }
    out
}

/// 17 significant digits: enough for an exact `f64` round trip.
fn real(x: f64) -> String {
    format!("{x:.16e}")
}

pub fn write_model(model: &BoostedModel) -> String {
    let p = &model.params;
    let mut out = String::new();
    let _ = writeln!(out, "{MODEL_HEADER}");
    let max_edges = p.budget.max_edges.map_or_else(|| "inf".to_owned(), |m| m.to_string());
    let _ = writeln!(
        out,
        "params loss {} t0 {} eta {} max_edges {max_edges} max_depth {} num_trees {} min_support {} min_leaf {} seed {} prune {}",
        p.loss.name(),
        real(model.t0),
        real(model.eta),
        p.max_depth,
        p.num_trees,
        p.budget.min_support,
        p.min_leaf,
        p.seed,
        p.prune
    );
    for (key, dict) in [("node_labels", &model.node_labels), ("edge_labels", &model.edge_labels)] {
        let _ = write!(out, "{key} {}", dict.len());
        for name in dict.names() {
            let _ = write!(out, " {name}");
        }
        out.push('\n');
    }
    let _ = writeln!(out, "trees {}", model.trees.len());
    for tree in &model.trees {
        let _ = writeln!(out, "tree {}", tree.nodes().len());
        for node in tree.nodes() {
            match node {
                TreeNode::Leaf { value } => {
                    let _ = writeln!(out, "leaf {}", real(*value));
                }
                TreeNode::Split { pattern, present, absent } => {
                    let code = pattern.code();
                    let _ = write!(out, "split {present} {absent} {}", code.len());
                    for e in code.edges() {
                        let _ = write!(
                            out,
                            "  {} {} {} {} {}",
                            e.from,
                            e.to,
                            label_name(&model.node_labels, e.from_label),
                            label_name(&model.edge_labels, e.edge_label),
                            label_name(&model.node_labels, e.to_label)
                        );
                    }
                    out.push('\n');
                }
            }
        }
    }
    let _ = writeln!(out, "end");
    out
}

struct Lines<'a> {
    inner: std::iter::Enumerate<std::str::Lines<'a>>,
}

impl<'a> Lines<'a> {
    fn next(&mut self, what: &str) -> Result<(usize, Vec<&'a str>), ModelError> {
        for (idx, raw) in self.inner.by_ref() {
            let toks: Vec<&str> = raw.split_whitespace().collect();
            if !toks.is_empty() {
                return Ok((idx + 1, toks));
            }
        }
        Err(ModelError::Truncated(format!("expected {what}")))
    }

    fn keyed(&mut self, key: &str) -> Result<(usize, Vec<&'a str>), ModelError> {
        let (line, toks) = self.next(key)?;
        if toks[0] != key {
            return Err(ParseError::new(line, format!("expected `{key}`, found {:?}", toks[0])).into());
        }
        Ok((line, toks))
    }
}

fn resolve(dict: &LabelDict, tok: &str, line: usize) -> Result<LabelId, ParseError> {
    if let Some(id) = dict.get(tok) {
        return Ok(id);
    }
    match tok.strip_prefix('#').and_then(|s| s.parse::<LabelId>().ok()) {
        Some(id) if id as usize >= dict.len() => Ok(id),
        _ => Err(ParseError::new(line, format!("unknown label {tok:?}"))),
    }
}

fn one<T: std::str::FromStr>(toks: &[&str], line: usize, what: &str) -> Result<T, ParseError> {
    if toks.len() != 2 {
        return Err(ParseError::new(line, format!("expected `{what} <value>`")));
    }
    parse_num(toks[1], line, what)
}

pub fn read_model(text: &str) -> Result<BoostedModel, ModelError> {
    let mut lines = Lines { inner: text.lines().enumerate() };
    let (_, header) = lines.next("header").map_err(|_| ModelError::Version { found: String::new() })?;
    let found = header.join(" ");
    if found != MODEL_HEADER {
        return Err(ModelError::Version { found });
    }

    let (line, toks) = lines.keyed("params")?;
    if toks.len() % 2 != 1 {
        return Err(ParseError::new(line, "params must be key/value pairs").into());
    }
    let mut params = FitParams::default();
    let mut budget = EnumBudget::default();
    let (mut t0, mut eta, mut loss) = (None, None, None);
    for kv in toks[1..].chunks(2) {
        let (key, val) = (kv[0], kv[1]);
        match key {
            "loss" => {
                loss = Some(match val {
                    "logistic" => Loss::Logistic,
                    "squared" => Loss::Squared,
                    _ => return Err(ParseError::new(line, format!("unknown loss {val:?}")).into()),
                })
            }
            "t0" => t0 = Some(parse_num::<f64>(val, line, key)?),
            "eta" => eta = Some(parse_num::<f64>(val, line, key)?),
            "max_edges" => {
                budget.max_edges = if val == "inf" { None } else { Some(parse_num(val, line, key)?) };
            }
            "max_depth" => params.max_depth = parse_num(val, line, key)?,
            "num_trees" => params.num_trees = parse_num(val, line, key)?,
            "min_support" => budget.min_support = parse_num(val, line, key)?,
            "min_leaf" => params.min_leaf = parse_num(val, line, key)?,
            "seed" => params.seed = parse_num(val, line, key)?,
            "prune" => params.prune = parse_num(val, line, key)?,
            _ => return Err(ParseError::new(line, format!("unknown parameter {key:?}")).into()),
        }
    }
    params.budget = budget;
    let missing = |k: &str| ParseError::new(line, format!("params lacks {k}"));
    let t0 = t0.ok_or_else(|| missing("t0"))?;
    let eta = eta.ok_or_else(|| missing("eta"))?;
    params.eta = eta;
    params.loss = loss.ok_or_else(|| missing("loss"))?;

    let mut dicts = Vec::new();
    for key in ["node_labels", "edge_labels"] {
        let (line, toks) = lines.keyed(key)?;
        let count: usize = toks
            .get(1)
            .ok_or_else(|| ParseError::new(line, "missing label count"))?
            .parse()
            .map_err(|_| ParseError::new(line, "invalid label count"))?;
        if toks.len() != count + 2 {
            return Err(ParseError::new(line, format!("expected {count} labels")).into());
        }
        let dict = LabelDict::from_names(toks[2..].iter().copied());
        if dict.len() != count {
            return Err(ParseError::new(line, "duplicate label").into());
        }
        dicts.push(dict);
    }
    let edge_labels = dicts.pop().expect("two dictionaries");
    let node_labels = dicts.pop().expect("two dictionaries");

    let (line, toks) = lines.keyed("trees")?;
    let num_trees: usize = one(&toks, line, "trees")?;
    let mut trees = Vec::new();
    for _ in 0..num_trees {
        let (line, toks) = lines.keyed("tree")?;
        let size: usize = one(&toks, line, "tree")?;
        let mut nodes = Vec::new();
        for _ in 0..size {
            let (line, toks) = lines.next("tree node")?;
            match toks[0] {
                "leaf" => nodes.push(TreeNode::Leaf { value: one(&toks, line, "leaf")? }),
                "split" => {
                    if toks.len() < 4 {
                        return Err(ParseError::new(line, "expected `split <present> <absent> <edges> ...`").into());
                    }
                    let present: usize = parse_num(toks[1], line, "child index")?;
                    let absent: usize = parse_num(toks[2], line, "child index")?;
                    let n_edges: usize = parse_num(toks[3], line, "edge count")?;
                    if toks.len() != 4 + 5 * n_edges {
                        return Err(ParseError::new(line, format!("expected {n_edges} edge tuples")).into());
                    }
                    let mut edges = Vec::with_capacity(n_edges);
                    for t in toks[4..].chunks(5) {
                        edges.push(DfsEdge::new(
                            parse_num(t[0], line, "discovery index")?,
                            parse_num(t[1], line, "discovery index")?,
                            resolve(&node_labels, t[2], line)?,
                            resolve(&edge_labels, t[3], line)?,
                            resolve(&node_labels, t[4], line)?,
                        ));
                    }
                    let code = DfsCode::new(edges).map_err(|e| ParseError::new(line, e.to_string()))?;
                    let pattern = Pattern::from_code(code).map_err(|e| ParseError::new(line, e.to_string()))?;
                    nodes.push(TreeNode::Split { pattern, present, absent });
                }
                other => return Err(ParseError::new(line, format!("unknown tree node {other:?}")).into()),
            }
        }
        trees.push(RegressionTree::from_nodes(nodes).map_err(|m| ParseError::new(line, m))?);
    }
    lines.keyed("end")?;
    Ok(BoostedModel { t0, eta, trees, params, node_labels, edge_labels })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn minimal_document() {
        let d = parse_graphs("t # 0 1\nv 0 A\nv 1 B\ne 0 1 0\n").unwrap();
        assert_eq!(d.len(), 1);
        assert_eq!(d.graphs[0].node_count(), 2);
        assert_eq!(d.responses, vec![1.0]);
        assert_eq!(d.node_labels.names(), &["A".to_owned(), "B".to_owned()]);
    }

    #[test]
    fn line_numbered_errors() {
        let err = parse_graphs("t # 0 1\nv 0 A\nv 1 B\ne 0 5 0\n").unwrap_err();
        assert_eq!(err.line, 4);
        let err = parse_graphs("% header\nt # 0 1\nv 0 A\nx 1\n").unwrap_err();
        assert_eq!(err.line, 4);
        assert!(err.message.contains("unknown record"));
        assert_eq!(parse_graphs("t # 0 1\nv 0 A\ne 0 0 0\n").unwrap_err().line, 3);
        assert_eq!(parse_graphs("t # 0 1\nv 0 A\nv 1 A\ne 0 1 0\ne 1 0 0\n").unwrap_err().line, 5);
        assert_eq!(parse_graphs("v 0 A\n").unwrap_err().line, 1);
        assert_eq!(parse_graphs("t # 0\n").unwrap_err().line, 1);
        assert_eq!(parse_graphs("t # 0 1\nv 1 A\n").unwrap_err().line, 2);
    }

    #[test]
    fn comments_and_blank_lines() {
        let d = parse_graphs("% c\n\nt # a -1\n  v 0 X\n\nt # b 0.25\nv 0 X\nv 1 Y\ne 1 0 q\n").unwrap();
        assert_eq!(d.ids, vec!["a", "b"]);
        assert_eq!(d.responses, vec![-1.0, 0.25]);
        assert_eq!(d.graphs[0].edge_count(), 0);
        let text = write_graphs(&d);
        assert_eq!(text, "t # a -1\nv 0 X\nt # b 0.25\nv 0 X\nv 1 Y\ne 1 0 q\n");
        assert_eq!(parse_graphs(&text).unwrap(), d);
    }

    #[test]
    fn model_header_checked() {
        assert!(matches!(read_model("graphboost-model v2\n"), Err(ModelError::Version { .. })));
        assert!(matches!(read_model(""), Err(ModelError::Version { .. })));
        assert!(matches!(read_model("graphboost-model v1\n"), Err(ModelError::Truncated(_))));
    }
}
