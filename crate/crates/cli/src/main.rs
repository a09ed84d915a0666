mod args;
mod config;

use std::fmt::Write as _;
use std::io::Write as _;
use std::path::Path;
use std::process::ExitCode;

use clap::Parser;
use graphboost::dataset::Dataset;
use graphboost::dfs_code::DfsCode;
use graphboost::enumerate::{enumerate, EnumBudget, VisitDecision};
use graphboost::error::{EvalError, FitError};
use graphboost::eval::{bench, cv::bench_tsv, feature_importance, run_cv, CvOptions, Grid, Mode};
use graphboost::graph::LabelDict;
use graphboost::{fit, graphxor, io, FitParams};

use args::{BenchArgs, Cli, Command, CvArgs, GridArg, ModeArg};
use config::{parse_bytes, FileConfig, Resolved};

#[derive(Debug)]
pub enum CliError {
    Usage(String),
    Data(String),
    Budget(String),
}

impl CliError {
    fn code(&self) -> u8 {
        match self {
            CliError::Usage(_) => 1,
            CliError::Data(_) => 2,
            CliError::Budget(_) => 3,
        }
    }
}

impl From<FitError> for CliError {
    fn from(e: FitError) -> Self {
        match e {
            FitError::InvalidParams(_) => CliError::Usage(e.to_string()),
            _ => CliError::Data(e.to_string()),
        }
    }
}

impl From<EvalError> for CliError {
    fn from(e: EvalError) -> Self {
        match e {
            EvalError::BudgetExceeded { .. } => CliError::Budget(e.to_string()),
            EvalError::TooFewFolds(_) | EvalError::UnboundedBaseline => CliError::Usage(e.to_string()),
            EvalError::Fit(f) => f.into(),
            EvalError::ClassTooSmall { .. } => CliError::Data(e.to_string()),
        }
    }
}

fn read_text(path: &Path) -> Result<String, CliError> {
    std::fs::read_to_string(path).map_err(|e| CliError::Data(format!("cannot read {}: {e}", path.display())))
}

fn write_text(path: &Path, text: &str) -> Result<(), CliError> {
    std::fs::write(path, text).map_err(|e| CliError::Data(format!("cannot write {}: {e}", path.display())))
}

fn load_data(path: &Path) -> Result<Dataset, CliError> {
    let mut data =
        io::parse_graphs(&read_text(path)?).map_err(|e| CliError::Data(format!("{}: {e}", path.display())))?;
    if data.name.is_empty() {
        data.name = path.file_stem().map(|s| s.to_string_lossy().into_owned()).unwrap_or_default();
    }
    Ok(data)
}

fn load_model(path: &Path) -> Result<graphboost::BoostedModel, CliError> {
    io::read_model(&read_text(path)?).map_err(|e| CliError::Data(format!("{}: {e}", path.display())))
}

fn named_code(code: &DfsCode, nodes: &LabelDict, edges: &LabelDict) -> String {
    let name = |d: &LabelDict, l: u32| d.name(l).map_or_else(|| format!("#{l}"), str::to_owned);
    code.edges()
        .iter()
        .map(|e| {
            format!(
                "({},{},{},{},{})",
                e.from,
                e.to,
                name(nodes, e.from_label),
                name(edges, e.edge_label),
                name(nodes, e.to_label)
            )
        })
        .collect::<Vec<_>>()
        .join(" ")
}

fn pct(x: Option<f64>) -> String {
    x.map_or_else(|| "n/a".into(), |v| format!("{:.1}%", 100.0 * v))
}

fn run(cli: Cli) -> Result<(), CliError> {
    let file = FileConfig::load(cli.config.as_deref())?;
    if let Some(jobs) = cli.jobs.or(file.jobs) {
        if jobs == 0 {
            return Err(CliError::Usage("--jobs must be at least 1".into()));
        }
        rayon::ThreadPoolBuilder::new()
            .num_threads(jobs)
            .build_global()
            .map_err(|e| CliError::Usage(format!("cannot start {jobs} workers: {e}")))?;
    }
    match cli.command {
        Command::GenXor { out, reshuffle } => {
            let data = match reshuffle {
                Some(seed) => graphxor::generate_from_parts(&graphxor::reshuffled_part_table(seed)),
                None => graphxor::generate(),
            };
            write_text(&out, &io::write_graphs(&data))?;
            println!(
                "wrote {} graphs ({} positive, {} negative) to {}",
                data.len(),
                data.positives(),
                data.negatives(),
                out.display()
            );
        }
        Command::Train { data, out_model, fit: fit_args } => {
            let params = Resolved::new(&fit_args, &file)?.single()?;
            let data = load_data(&data)?;
            let outcome = fit(&data, &params)?;
            write_text(&out_model, &io::write_model(&outcome.model))?;
            let last = outcome.stats.last();
            println!(
                "fitted {} trees in {:.2}s: train loss {:.6}, train accuracy {}, {} patterns visited, {} distinct searched, {} selected",
                outcome.model.trees.len(),
                outcome.stats.seconds,
                last.train_loss,
                pct(last.train_accuracy),
                last.patterns_visited,
                last.patterns_searched,
                last.patterns_selected
            );
        }
        Command::Predict { model, data, out } => {
            let model = load_model(&model)?;
            let data = load_data(&data)?;
            let graphs = data.graphs_in(&model.node_labels, &model.edge_labels);
            let mut text = String::from("id\tscore\tlabel\n");
            let mut hits = 0;
            for (i, g) in graphs.iter().enumerate() {
                let score = model.predict_score(g);
                let label = graphboost::boost::label_of(score);
                hits += usize::from(label == data.responses[i]);
                let _ = writeln!(text, "{}\t{score:.17e}\t{label}", data.ids[i]);
            }
            match out {
                Some(path) => {
                    write_text(&path, &text)?;
                    if data.is_binary() && !data.is_empty() {
                        println!(
                            "scored {} graphs; accuracy against file labels {}",
                            data.len(),
                            pct(Some(hits as f64 / data.len() as f64))
                        );
                    }
                }
                None => emit(&text),
            }
        }
        Command::Cv(args) => cv(args, &file)?,
        Command::Mine { data, max_edges, min_support, top } => {
            let data = load_data(&data)?;
            let budget = EnumBudget::new(Some(max_edges), min_support);
            budget.validate().map_err(CliError::Usage)?;
            let mut found: Vec<(usize, DfsCode)> = Vec::new();
            let stats = enumerate(&data.graphs, budget, |occ, _| {
                found.push((occ.support(), occ.code.clone()));
                VisitDecision::Continue
            });
            if top.is_some() {
                found.sort_by(|a, b| b.0.cmp(&a.0).then_with(|| a.1.dfs_cmp(&b.1)));
            }
            let mut text = String::from("support\tedges\tcode\n");
            for (support, code) in found.iter().take(top.unwrap_or(usize::MAX)) {
                let _ = writeln!(
                    text,
                    "{support}\t{}\t{}",
                    code.len(),
                    named_code(code, &data.node_labels, &data.edge_labels)
                );
            }
            emit(&text);
            eprintln!("{} patterns up to {max_edges} edges (min support {min_support})", stats.visited);
        }
        Command::Importance { model, data, top } => {
            let model = load_model(&model)?;
            let data = load_data(&data)?;
            let mut text = String::from("importance\tuses\tcode\n");
            for imp in feature_importance(&model, &data).iter().take(top.unwrap_or(usize::MAX)) {
                let _ = writeln!(
                    text,
                    "{:.6}\t{}\t{}",
                    imp.score,
                    imp.uses,
                    named_code(&imp.pattern, &model.node_labels, &model.edge_labels)
                );
            }
            emit(&text);
        }
        Command::Bench(args) => bench_cmd(args, &file)?,
    }
    Ok(())
}

fn mode_of(m: Option<ModeArg>) -> Mode {
    match m {
        Some(ModeArg::Naive) => Mode::Naive,
        _ => Mode::Proposed,
    }
}

fn options(
    folds: Option<usize>,
    mode: Mode,
    snapshot_every: Option<usize>,
    memory_budget: Option<&str>,
    base: &FitParams,
    file: &FileConfig,
) -> Result<CvOptions, CliError> {
    let defaults = CvOptions::default();
    let memory_budget = match memory_budget.or(file.memory_budget.as_deref()) {
        Some(s) => parse_bytes(s)?,
        None => defaults.memory_budget,
    };
    Ok(CvOptions {
        folds: folds.or(file.folds).unwrap_or(defaults.folds),
        seed: base.seed,
        mode,
        snapshot_every: snapshot_every.or(file.snapshot_every).unwrap_or(defaults.snapshot_every),
        memory_budget,
    })
}

fn cv(args: CvArgs, file: &FileConfig) -> Result<(), CliError> {
    let resolved = Resolved::new(&args.fit, file)?;
    let base = resolved.base;
    let grid = match args.grid {
        Some(preset) => {
            let g = match preset {
                GridArg::Table1 => Grid::table1(base),
                GridArg::Table3 => Grid::table3(base),
            };
            let g = if args.fit.num_trees.is_some() || file.num_trees.is_some() {
                Grid { configs: g.configs.into_iter().map(|p| FitParams { num_trees: base.num_trees, ..p }).collect() }
            } else {
                g
            };
            g.filter(|p| {
                resolved.sizes.as_ref().is_none_or(|s| s.contains(&p.budget.max_edges))
                    && resolved.depths.as_ref().is_none_or(|d| d.contains(&p.max_depth))
                    && resolved.etas.as_ref().is_none_or(|e| e.contains(&p.eta))
            })
        }
        None => Grid::cartesian(
            base,
            resolved.sizes.as_deref().unwrap_or(&[base.budget.max_edges]),
            resolved.depths.as_deref().unwrap_or(&[base.max_depth]),
            resolved.etas.as_deref().unwrap_or(&[base.eta]),
        ),
    };
    if grid.configs.is_empty() {
        return Err(CliError::Usage("no grid configuration matches the given filters".into()));
    }
    for p in &grid.configs {
        p.validate().map_err(|e| CliError::Usage(e.to_string()))?;
    }
    let opts =
        options(args.folds, mode_of(args.mode), args.snapshot_every, args.memory_budget.as_deref(), &base, file)?;
    let data = load_data(&args.data)?;
    let report = run_cv(&data, &grid, &opts)?;

    if let Some(path) = &args.report {
        write_text(path, &report.to_json())?;
    }
    if let Some(dir) = &args.plot_dir {
        std::fs::create_dir_all(dir).map_err(|e| CliError::Data(format!("cannot create {}: {e}", dir.display())))?;
        write_text(&dir.join("curves.tsv"), &report.curves_tsv())?;
        write_text(&dir.join("by_depth.tsv"), &report.by_depth_tsv())?;
        write_text(&dir.join("by_size.tsv"), &report.by_size_tsv())?;
    }
    let best = &report.best;
    let p = &best.params;
    let x = p.budget.max_edges.map_or_else(|| "inf".into(), |x| x.to_string());
    println!(
        "{} graphs, {} folds, {} configurations ({})",
        report.dataset.graphs,
        report.folds,
        report.configs.len(),
        report.mode.name()
    );
    let acc = best
        .aggregate
        .accuracy
        .map_or_else(|| "n/a".into(), |s| format!("{:.1} ± {:.1}", 100.0 * s.mean, 100.0 * s.sd));
    let auc =
        best.aggregate.auc.map_or_else(|| "n/a".into(), |s| format!("{:.1} ± {:.1}", 100.0 * s.mean, 100.0 * s.sd));
    println!("best: x{x} d{} eta{} k{}  accuracy {acc}  auc {auc}", p.max_depth, p.eta, p.num_trees);
    for m in &best.per_fold {
        println!(
            "  fold {}: accuracy {}  auc {}  visited {}  pruned {}  searched {}  selected {}  {:.2}s",
            m.fold,
            pct(m.accuracy),
            pct(m.auc),
            m.patterns_visited,
            m.subtrees_pruned,
            m.patterns_searched,
            m.patterns_selected,
            m.train_seconds
        );
    }
    Ok(())
}

fn bench_cmd(args: BenchArgs, file: &FileConfig) -> Result<(), CliError> {
    let resolved = Resolved::new(&args.fit, file)?;
    let params = resolved.single()?;
    let mode = mode_of(Some(args.mode));
    let opts = options(args.folds, mode, None, args.memory_budget.as_deref(), &params, file)?;
    let data = load_data(&args.data)?;
    let rows = bench(&data, &args.max_edges_list, &params, &opts)?;
    let tsv = bench_tsv(&rows);
    match &args.out {
        Some(path) => {
            write_text(path, &tsv)?;
            emit(&tsv);
        }
        None => emit(&tsv),
    }
    Ok(())
}

/// Writes to stdout; a reader that went away (`| head`) is not an error.
fn emit(text: &str) {
    let mut out = std::io::stdout().lock();
    if let Err(e) = out.write_all(text.as_bytes()).and_then(|()| out.flush()) {
        if e.kind() != std::io::ErrorKind::BrokenPipe {
            eprintln!("error: cannot write to stdout: {e}");
        }
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            let code = e.code();
            match e {
                CliError::Usage(m) => eprintln!("error: {m}"),
                CliError::Data(m) => eprintln!("error: {m}"),
                CliError::Budget(m) => eprintln!("resource budget exceeded: {m}"),
            }
            ExitCode::from(code)
        }
    }
}
