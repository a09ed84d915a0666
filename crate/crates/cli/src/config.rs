//! Flag / config-file / default merging.

use std::path::Path;

use graphboost::{EnumBudget, FitParams, Loss};
use serde::Deserialize;

use crate::args::{FitArgs, LossArg};
use crate::CliError;

/// Keys accepted in the `--config` file.
#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FileConfig {
    pub max_edges: Option<toml::Value>,
    pub depth: Option<usize>,
    pub eta: Option<f64>,
    pub num_trees: Option<usize>,
    pub min_support: Option<usize>,
    pub min_leaf: Option<usize>,
    pub seed: Option<u64>,
    pub loss: Option<String>,
    pub folds: Option<usize>,
    pub snapshot_every: Option<usize>,
    pub memory_budget: Option<String>,
    pub jobs: Option<usize>,
}

impl FileConfig {
    pub fn load(path: Option<&Path>) -> Result<Self, CliError> {
        let Some(path) = path else {
            return Ok(Self::default());
        };
        let text = std::fs::read_to_string(path)
            .map_err(|e| CliError::Usage(format!("cannot read config {}: {e}", path.display())))?;
        toml::from_str(&text).map_err(|e| CliError::Usage(format!("bad config {}: {e}", path.display())))
    }

    fn max_edges(&self) -> Result<Option<Option<usize>>, CliError> {
        match &self.max_edges {
            None => Ok(None),
            Some(toml::Value::Integer(x)) if *x >= 1 => Ok(Some(Some(*x as usize))),
            Some(toml::Value::String(s)) => parse_max_edges(s).map(Some),
            Some(v) => Err(CliError::Usage(format!("config max_edges must be a positive integer or \"inf\", got {v}"))),
        }
    }
}

pub fn parse_max_edges(s: &str) -> Result<Option<usize>, CliError> {
    if s.eq_ignore_ascii_case("inf") {
        return Ok(None);
    }
    match s.parse::<usize>() {
        Ok(x) if x >= 1 => Ok(Some(x)),
        _ => Err(CliError::Usage(format!("invalid --max-edges value {s:?}: expected a positive integer or inf"))),
    }
}

/// Byte counts with an optional K/M/G suffix (powers of 1024).
pub fn parse_bytes(s: &str) -> Result<usize, CliError> {
    let s = s.trim();
    let (digits, scale) = match s.chars().last().map(|c| c.to_ascii_uppercase()) {
        Some('K') => (&s[..s.len() - 1], 1usize << 10),
        Some('M') => (&s[..s.len() - 1], 1 << 20),
        Some('G') => (&s[..s.len() - 1], 1 << 30),
        _ => (s, 1),
    };
    digits
        .parse::<usize>()
        .ok()
        .and_then(|n| n.checked_mul(scale))
        .ok_or_else(|| CliError::Usage(format!("invalid byte count {s:?}")))
}

/// Hyperparameter lists after merging flags over the config file over defaults.
pub struct Resolved {
    pub base: FitParams,
    pub sizes: Option<Vec<Option<usize>>>,
    pub depths: Option<Vec<usize>>,
    pub etas: Option<Vec<f64>>,
}

impl Resolved {
    pub fn new(args: &FitArgs, file: &FileConfig) -> Result<Self, CliError> {
        let defaults = FitParams::default();
        let sizes = if args.max_edges.is_empty() {
            file.max_edges()?.map(|x| vec![x])
        } else {
            Some(args.max_edges.iter().map(|s| parse_max_edges(s)).collect::<Result<_, _>>()?)
        };
        let depths = if args.depth.is_empty() { file.depth.map(|d| vec![d]) } else { Some(args.depth.clone()) };
        let etas = if args.eta.is_empty() { file.eta.map(|e| vec![e]) } else { Some(args.eta.clone()) };
        let loss = match (args.loss, file.loss.as_deref()) {
            (Some(LossArg::Logistic), _) | (None, Some("logistic")) => Loss::Logistic,
            (Some(LossArg::Squared), _) | (None, Some("squared")) => Loss::Squared,
            (None, None) => defaults.loss,
            (None, Some(other)) => {
                return Err(CliError::Usage(format!("config loss {other:?} is not logistic or squared")))
            }
        };
        let min_support = args.min_support.or(file.min_support).unwrap_or(defaults.budget.min_support);
        let base = FitParams {
            max_depth: depths.as_ref().map_or(defaults.max_depth, |d| d[0]),
            eta: etas.as_ref().map_or(defaults.eta, |e| e[0]),
            num_trees: args.num_trees.or(file.num_trees).unwrap_or(defaults.num_trees),
            budget: EnumBudget::new(sizes.as_ref().map_or(defaults.budget.max_edges, |s| s[0]), min_support),
            min_leaf: args.min_leaf.or(file.min_leaf).unwrap_or(defaults.min_leaf),
            seed: args.seed.or(file.seed).unwrap_or(defaults.seed),
            loss,
            prune: !args.no_prune,
        };
        Ok(Self { base, sizes, depths, etas })
    }

    /// The single configuration for commands that fit one model.
    pub fn single(&self) -> Result<FitParams, CliError> {
        let many = |n: Option<usize>, flag: &str| match n {
            Some(n) if n > 1 => Err(CliError::Usage(format!("{flag} takes a single value here"))),
            _ => Ok(()),
        };
        many(self.sizes.as_ref().map(Vec::len), "--max-edges")?;
        many(self.depths.as_ref().map(Vec::len), "--depth")?;
        many(self.etas.as_ref().map(Vec::len), "--eta")?;
        self.base.validate().map_err(|e| CliError::Usage(e.to_string()))?;
        Ok(self.base)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn byte_suffixes() {
        assert_eq!(parse_bytes("512").unwrap(), 512);
        assert_eq!(parse_bytes("2K").unwrap(), 2048);
        assert_eq!(parse_bytes("1g").unwrap(), 1 << 30);
        assert!(parse_bytes("lots").is_err());
    }

    #[test]
    fn flags_beat_file() {
        let file: FileConfig = toml::from_str("depth = 4\neta = 0.1\nmax_edges = \"inf\"\n").unwrap();
        let args = FitArgs { depth: vec![2], ..FitArgs::default() };
        let r = Resolved::new(&args, &file).unwrap();
        let p = r.single().unwrap();
        assert_eq!(p.max_depth, 2);
        assert_eq!(p.eta, 0.1);
        assert_eq!(p.budget.max_edges, None);
        assert_eq!(p.num_trees, 500);
    }
}
