//! `codemix` command line: `stats`, `train`, `predict`, `evaluate`,
//! `segment` and `grid`.
//!
//! Exit codes: 0 success, 1 model or evaluation error, 2 usage or I/O error.
//!
//! Training options resolve as command-line flag, then `--config` file, then
//! built-in default. The config file holds `key = value` lines whose keys are
//! the long flag names without dashes (`lambda = 1e-5`, `no-preprocess =
//! true`); `#` starts a comment.

use std::collections::HashMap;
use std::ffi::OsString;
use std::fs::{self, File};
use std::io::{BufRead, BufReader, Write};
use std::path::{Path, PathBuf};
use std::str::FromStr;
use std::time::Instant;

use clap::{Args, Parser, Subcommand};
use serde::Serialize;
use serde_json::json;

use crate::corpus::{corpus_stats, parse_corpus, CorpusStats, Sentiment, Tweet};
use crate::error::Error;
use crate::eval::{evaluate, render_report};
use crate::features::NgramRange;
use crate::grid::{run_grid, GridSpec};
use crate::model::{labels_of, load_model, save_model, train, Loss, ModelKind, TrainConfig};
use crate::preprocess::{segment_hashtag_with_penalty, PreprocessConfig, SegmentDictionary, DEFAULT_OOV_PENALTY};

#[derive(Debug, Parser)]
#[command(name = "codemix", version, about = "NBSVM sentiment classifier for code-mixed tweets")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Label, language and vocabulary-overlap statistics of a corpus file.
    Stats(StatsArgs),
    /// Train a model and write it to a file.
    Train(TrainArgs),
    /// Predict labels for a corpus file or raw lines.
    Predict(PredictArgs),
    /// Score a model against a labeled corpus.
    Evaluate(EvaluateArgs),
    /// Segment hashtags read one per line from standard input.
    Segment(SegmentArgs),
    /// Grid search on a seeded stratified train/dev split.
    Grid(GridArgs),
}

#[derive(Debug, Args)]
struct StatsArgs {
    corpus: PathBuf,
    #[arg(long)]
    json: bool,
}

#[derive(Debug, Args, Default)]
struct TrainOpts {
    /// Key-value config file with defaults for the options below.
    #[arg(long)]
    config: Option<PathBuf>,
    #[arg(long)]
    ngram_min: Option<usize>,
    #[arg(long)]
    ngram_max: Option<usize>,
    #[arg(long)]
    min_df: Option<usize>,
    /// nbsvm or svm.
    #[arg(long)]
    model: Option<String>,
    /// logistic or hinge; defaults to logistic for nbsvm and hinge for svm.
    #[arg(long)]
    loss: Option<String>,
    #[arg(long)]
    lambda: Option<f64>,
    #[arg(long)]
    alpha: Option<f64>,
    #[arg(long)]
    beta: Option<f64>,
    #[arg(long)]
    epochs: Option<usize>,
    #[arg(long)]
    tol: Option<f64>,
    #[arg(long)]
    seed: Option<u64>,
    /// Compute NB ratios from 0/1 indicators instead of TF-IDF values.
    #[arg(long)]
    nb_binarize: bool,
    /// Disable hashtag segmentation, URL removal and lowercasing.
    #[arg(long)]
    no_preprocess: bool,
    #[arg(long)]
    no_segment: bool,
    #[arg(long)]
    no_url_removal: bool,
    #[arg(long)]
    no_lowercase: bool,
    /// Word-frequency list (`word count` per line) for hashtag segmentation.
    #[arg(long)]
    dict: Option<PathBuf>,
    /// Per-character cost of out-of-dictionary hashtag spans.
    #[arg(long)]
    penalty: Option<f64>,
}

#[derive(Debug, Args)]
struct TrainArgs {
    corpus: PathBuf,
    #[arg(short, long)]
    output: PathBuf,
    #[command(flatten)]
    opts: TrainOpts,
    #[arg(long)]
    json: bool,
    /// Threads for training the per-class problems.
    #[arg(long)]
    jobs: Option<usize>,
}

#[derive(Debug, Args)]
struct PredictArgs {
    model: PathBuf,
    /// Corpus file, or one raw text per line with --raw; `-` reads stdin.
    input: PathBuf,
    #[arg(long)]
    raw: bool,
    /// Append the three per-class scores (negative, neutral, positive).
    #[arg(long)]
    scores: bool,
    #[arg(long)]
    json: bool,
    #[arg(long)]
    jobs: Option<usize>,
}

#[derive(Debug, Args)]
struct EvaluateArgs {
    model: PathBuf,
    corpus: PathBuf,
    #[arg(long)]
    json: bool,
    #[arg(long)]
    jobs: Option<usize>,
}

#[derive(Debug, Args)]
struct SegmentArgs {
    #[arg(long)]
    dict: Option<PathBuf>,
    #[arg(long)]
    penalty: Option<f64>,
}

#[derive(Debug, Args)]
struct GridArgs {
    corpus: PathBuf,
    /// Where to write the best model.
    #[arg(short, long)]
    output: PathBuf,
    #[arg(long, default_value_t = 0.2)]
    dev_fraction: f64,
    /// Comma-separated values to try, e.g. `1e-4,1e-5`.
    #[arg(long, value_delimiter = ',')]
    grid_lambda: Vec<f64>,
    #[arg(long, value_delimiter = ',')]
    grid_alpha: Vec<f64>,
    #[arg(long, value_delimiter = ',')]
    grid_beta: Vec<f64>,
    #[arg(long, value_delimiter = ',')]
    grid_loss: Vec<String>,
    #[arg(long, value_delimiter = ',')]
    grid_model: Vec<String>,
    /// N-gram ranges as `min-max`, e.g. `2-6,1-3`.
    #[arg(long, value_delimiter = ',')]
    grid_ngram: Vec<String>,
    #[command(flatten)]
    opts: TrainOpts,
    #[arg(long)]
    json: bool,
    #[arg(long, default_value_t = 1)]
    jobs: usize,
}

enum Failure {
    Usage(String),
    Model(String),
}

impl Failure {
    fn code(&self) -> u8 {
        match self {
            Failure::Model(_) => 1,
            Failure::Usage(_) => 2,
        }
    }

    fn message(&self) -> &str {
        match self {
            Failure::Usage(m) | Failure::Model(m) => m,
        }
    }
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        match e {
            Error::Io(_) | Error::Parse(_) | Error::Config(_) | Error::Dictionary { .. } => {
                Failure::Usage(e.to_string())
            }
            _ => Failure::Model(e.to_string()),
        }
    }
}

impl From<std::io::Error> for Failure {
    fn from(e: std::io::Error) -> Self {
        Failure::Usage(format!("I/O error: {e}"))
    }
}

type CmdResult = std::result::Result<(), Failure>;

/// Runs the command line and returns the process exit code.
pub fn run<I, T>(args: I, stdin: &mut dyn BufRead, out: &mut dyn Write, err: &mut dyn Write) -> u8
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            use clap::error::ErrorKind;
            let text = e.render().to_string();
            return match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => {
                    let _ = write!(out, "{text}");
                    0
                }
                _ => {
                    let _ = write!(err, "{text}");
                    2
                }
            };
        }
    };
    let result = match cli.command {
        Command::Stats(a) => cmd_stats(a, out),
        Command::Train(a) => cmd_train(a, out),
        Command::Predict(a) => cmd_predict(a, stdin, out),
        Command::Evaluate(a) => cmd_evaluate(a, out),
        Command::Segment(a) => cmd_segment(a, stdin, out),
        Command::Grid(a) => cmd_grid(a, out),
    };
    match result {
        Ok(()) => 0,
        Err(f) => {
            let _ = writeln!(err, "error: {}", f.message());
            f.code()
        }
    }
}

/// Fails early when the model cannot be written, before any training.
fn check_output(path: &Path) -> CmdResult {
    let parent = path.parent().filter(|p| !p.as_os_str().is_empty()).unwrap_or(Path::new("."));
    if !parent.is_dir() {
        return Err(Failure::Usage(format!("output directory {} does not exist", parent.display())));
    }
    if path.is_dir() {
        return Err(Failure::Usage(format!("output path {} is a directory", path.display())));
    }
    Ok(())
}

fn open_corpus(path: &Path) -> std::result::Result<Vec<Tweet>, Failure> {
    let file = File::open(path).map_err(|e| Failure::Usage(format!("cannot open {}: {e}", path.display())))?;
    parse_corpus(BufReader::new(file)).map_err(|e| Failure::Usage(format!("{}: {e}", path.display())))
}

fn with_jobs<T: Send>(jobs: Option<usize>, f: impl FnOnce() -> T + Send) -> std::result::Result<T, Failure> {
    match jobs {
        None => Ok(f()),
        Some(n) => {
            let pool = rayon::ThreadPoolBuilder::new()
                .num_threads(n.max(1))
                .build()
                .map_err(|e| Failure::Usage(e.to_string()))?;
            Ok(pool.install(f))
        }
    }
}

fn write_json<T: Serialize>(out: &mut dyn Write, value: &T) -> CmdResult {
    let text = serde_json::to_string_pretty(value).map_err(|e| Failure::Model(e.to_string()))?;
    writeln!(out, "{text}")?;
    Ok(())
}

pub fn render_stats(s: &CorpusStats) -> String {
    let mut t = String::new();
    t.push_str(&format!("{:<28}{}\n", "tweets", s.n_tweets));
    for (label, count) in &s.label_counts {
        let share = if s.n_tweets == 0 { 0.0 } else { 100.0 * *count as f64 / s.n_tweets as f64 };
        t.push_str(&format!("{:<28}{} ({share:.2}%)\n", format!("  {label}"), count));
    }
    t.push_str(&format!("{:<28}{}\n", "  unlabeled", s.n_unlabeled));
    t.push_str(&format!("{:<28}{}\n", "tokens", s.n_tokens));
    t.push_str(&format!("{:<28}{}\n", "  lang1 (English)", s.n_lang1_tokens));
    t.push_str(&format!("{:<28}{}\n", "  lang2 (Hindi/Spanish)", s.n_lang2_tokens));
    t.push_str(&format!("{:<28}{}\n", "  other", s.n_other_tokens));
    t.push_str(&format!("{:<28}{:.2}\n", "lang1 share of tagged (%)", s.lang1_pct));
    t.push_str(&format!("{:<28}{:.2}\n", "lang2 share of tagged (%)", s.lang2_pct));
    t.push_str(&format!("{:<28}{}\n", "lang1 vocabulary", s.vocab1_size));
    t.push_str(&format!("{:<28}{}\n", "lang2 vocabulary", s.vocab2_size));
    t.push_str(&format!("{:<28}{}\n", "overlap (types)", s.overlap_size));
    t.push_str(&format!("{:<28}{:.2}\n", "overlap % of union", s.overlap_pct));
    t.push_str(&format!("{:<28}{:.2}\n", "overlap % of lang1 vocab", s.overlap_pct_of_vocab1));
    t.push_str(&format!("{:<28}{:.2}\n", "overlap % of lang2 vocab", s.overlap_pct_of_vocab2));
    t
}

fn cmd_stats(a: StatsArgs, out: &mut dyn Write) -> CmdResult {
    let tweets = open_corpus(&a.corpus)?;
    let stats = corpus_stats(&tweets)?;
    if a.json {
        write_json(out, &stats)
    } else {
        write!(out, "{}", render_stats(&stats))?;
        Ok(())
    }
}

fn read_config_file(path: &Path) -> std::result::Result<HashMap<String, String>, Failure> {
    let text = fs::read_to_string(path).map_err(|e| Failure::Usage(format!("cannot read {}: {e}", path.display())))?;
    let mut map = HashMap::new();
    for (i, line) in text.lines().enumerate() {
        let line = line.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let Some((k, v)) = line.split_once('=') else {
            return Err(Failure::Usage(format!("{}:{}: expected `key = value`", path.display(), i + 1)));
        };
        map.insert(k.trim().to_string(), v.trim().to_string());
    }
    Ok(map)
}

const CONFIG_KEYS: &[&str] = &[
    "ngram-min",
    "ngram-max",
    "min-df",
    "model",
    "loss",
    "lambda",
    "alpha",
    "beta",
    "epochs",
    "tol",
    "seed",
    "nb-binarize",
    "no-preprocess",
    "no-segment",
    "no-url-removal",
    "no-lowercase",
    "dict",
    "penalty",
];

struct Layered {
    file: HashMap<String, String>,
}

impl Layered {
    fn get<T: FromStr>(&self, flag: Option<T>, key: &str, default: T) -> std::result::Result<T, Failure> {
        if let Some(v) = flag {
            return Ok(v);
        }
        match self.file.get(key) {
            Some(raw) => raw.parse().map_err(|_| Failure::Usage(format!("config key {key}: cannot parse {raw:?}"))),
            None => Ok(default),
        }
    }

    fn flag(&self, set: bool, key: &str) -> std::result::Result<bool, Failure> {
        if set {
            return Ok(true);
        }
        self.get(None, key, false)
    }
}

/// Everything needed to train, after layering flags over the config file.
struct Resolved {
    kind: ModelKind,
    loss_explicit: Option<Loss>,
    train: TrainConfig,
    pp: PreprocessConfig,
    dict: SegmentDictionary,
}

fn resolve(opts: &TrainOpts) -> std::result::Result<Resolved, Failure> {
    let file = match &opts.config {
        Some(p) => read_config_file(p)?,
        None => HashMap::new(),
    };
    if let Some(k) = file.keys().find(|k| !CONFIG_KEYS.contains(&k.as_str())) {
        return Err(Failure::Usage(format!("unknown config key {k:?}")));
    }
    let l = Layered { file };
    let defaults = TrainConfig::default();

    let kind: ModelKind = l.get(opts.model.clone(), "model", "nbsvm".to_string())?.parse().map_err(Failure::Usage)?;
    let loss_raw: Option<String> = match &opts.loss {
        Some(s) => Some(s.clone()),
        None => l.file.get("loss").cloned(),
    };
    let loss_explicit = loss_raw.map(|s| s.parse::<Loss>()).transpose().map_err(Failure::Usage)?;
    let loss = loss_explicit.unwrap_or(match kind {
        ModelKind::Nbsvm => Loss::Logistic,
        ModelKind::Svm => Loss::Hinge,
    });
    let range = NgramRange::new(l.get(opts.ngram_min, "ngram-min", 2)?, l.get(opts.ngram_max, "ngram-max", 6)?)?;
    let train = TrainConfig {
        loss,
        lambda: l.get(opts.lambda, "lambda", defaults.lambda)?,
        alpha: l.get(opts.alpha, "alpha", defaults.alpha)?,
        beta: l.get(opts.beta, "beta", defaults.beta)?,
        epochs: l.get(opts.epochs, "epochs", defaults.epochs)?,
        seed: l.get(opts.seed, "seed", defaults.seed)?,
        tol: l.get(opts.tol, "tol", defaults.tol)?,
        nb_binarize: l.flag(opts.nb_binarize, "nb-binarize")?,
        ngram_range: range,
        min_df: l.get(opts.min_df, "min-df", defaults.min_df)?,
    };
    train.validate()?;

    let all_off = l.flag(opts.no_preprocess, "no-preprocess")?;
    let dict_path: Option<PathBuf> = match &opts.dict {
        Some(p) => Some(p.clone()),
        None => l.file.get("dict").map(PathBuf::from),
    };
    let penalty = l.get(opts.penalty, "penalty", DEFAULT_OOV_PENALTY)?;
    if !(penalty >= 0.0 && penalty.is_finite()) {
        return Err(Failure::Usage(format!("penalty must be a non-negative number, got {penalty}")));
    }
    let pp = PreprocessConfig {
        segment_hashtags: !all_off && !l.flag(opts.no_segment, "no-segment")?,
        remove_urls: !all_off && !l.flag(opts.no_url_removal, "no-url-removal")?,
        lowercase: !all_off && !l.flag(opts.no_lowercase, "no-lowercase")?,
        oov_penalty: penalty,
        dictionary_path: dict_path.as_ref().map(|p| p.display().to_string()),
    };
    let dict = load_dict(dict_path.as_deref())?;
    Ok(Resolved { kind, loss_explicit, train, pp, dict })
}

fn load_dict(path: Option<&Path>) -> std::result::Result<SegmentDictionary, Failure> {
    match path {
        Some(p) => SegmentDictionary::from_path(p).map_err(|e| Failure::Usage(format!("{}: {e}", p.display()))),
        None => Ok(SegmentDictionary::builtin()),
    }
}

fn cmd_train(a: TrainArgs, out: &mut dyn Write) -> CmdResult {
    check_output(&a.output)?;
    let r = resolve(&a.opts)?;
    let corpus = open_corpus(&a.corpus)?;
    let start = Instant::now();
    let (model, summary) = with_jobs(a.jobs, || train(&corpus, r.kind, &r.train, &r.pp, &r.dict))??;
    save_model(&model, &a.output)?;
    let secs = start.elapsed().as_secs_f64();

    if a.json {
        let classes: Vec<_> = summary
            .fits
            .iter()
            .map(|f| {
                json!({
                    "label": f.label,
                    "iterations": f.iterations,
                    "converged": f.converged,
                    "grad_norm": f.grad_norm,
                    "objective": f.objective,
                })
            })
            .collect();
        write_json(
            out,
            &json!({
                "model": r.kind,
                "n_docs": summary.n_docs,
                "vocab_size": summary.vocab_size,
                "train_accuracy": summary.train_accuracy,
                "wall_time_secs": secs,
                "classes": classes,
            }),
        )
    } else {
        writeln!(out, "{:<20}{}", "model", serde_json::to_value(r.kind).unwrap().as_str().unwrap_or(""))?;
        writeln!(out, "{:<20}{:?}", "loss", r.train.loss)?;
        writeln!(out, "{:<20}{}", "tweets", summary.n_docs)?;
        writeln!(out, "{:<20}{}", "vocabulary", summary.vocab_size)?;
        writeln!(out, "{:<20}{:.4}", "training accuracy", summary.train_accuracy)?;
        for f in &summary.fits {
            writeln!(
                out,
                "  {:<18}iterations {:>5}  converged {:<5}  grad norm {:.3e}",
                f.label.as_str(),
                f.iterations,
                f.converged,
                f.grad_norm
            )?;
        }
        writeln!(out, "{:<20}{:.3}s", "wall time", secs)?;
        writeln!(out, "{:<20}{}", "written", a.output.display())?;
        Ok(())
    }
}

fn read_input(path: &Path, stdin: &mut dyn BufRead) -> std::result::Result<String, Failure> {
    if path.as_os_str() == "-" {
        let mut s = String::new();
        stdin.read_to_string(&mut s)?;
        Ok(s)
    } else {
        fs::read_to_string(path).map_err(|e| Failure::Usage(format!("cannot read {}: {e}", path.display())))
    }
}

fn cmd_predict(a: PredictArgs, stdin: &mut dyn BufRead, out: &mut dyn Write) -> CmdResult {
    let model = load_model(&a.model).map_err(|e| Failure::from(e).with_context(&a.model))?;
    let text = read_input(&a.input, stdin)?;
    let (uids, texts): (Vec<String>, Vec<String>) = if a.raw {
        text.lines().enumerate().map(|(i, l)| ((i + 1).to_string(), l.to_string())).unzip()
    } else {
        let tweets =
            parse_corpus(text.as_bytes()).map_err(|e| Failure::Usage(format!("{}: {e}", a.input.display())))?;
        tweets.into_iter().map(|t| (t.uid.clone(), t.text())).unzip()
    };
    let preds = with_jobs(a.jobs, || model.predict_batch(&texts))?;

    if a.json {
        let rows: Vec<_> = uids
            .iter()
            .zip(&preds)
            .map(|(uid, p)| {
                json!({
                    "uid": uid,
                    "label": p.label,
                    "scores": { "negative": p.scores[0], "neutral": p.scores[1], "positive": p.scores[2] },
                })
            })
            .collect();
        return write_json(out, &rows);
    }
    for (uid, p) in uids.iter().zip(&preds) {
        if a.scores {
            writeln!(out, "{uid}\t{}\t{}\t{}\t{}", p.label, p.scores[0], p.scores[1], p.scores[2])?;
        } else {
            writeln!(out, "{uid}\t{}", p.label)?;
        }
    }
    Ok(())
}

impl Failure {
    fn with_context(self, path: &Path) -> Failure {
        match self {
            Failure::Usage(m) => Failure::Usage(format!("{}: {m}", path.display())),
            Failure::Model(m) => Failure::Model(format!("{}: {m}", path.display())),
        }
    }
}

fn cmd_evaluate(a: EvaluateArgs, out: &mut dyn Write) -> CmdResult {
    let model = load_model(&a.model).map_err(|e| Failure::from(e).with_context(&a.model))?;
    let corpus = open_corpus(&a.corpus)?;
    let gold = labels_of(&corpus).map_err(|e| Failure::Model(format!("{}: {e}", a.corpus.display())))?;
    let texts: Vec<String> = corpus.iter().map(Tweet::text).collect();
    let preds = with_jobs(a.jobs, || model.predict_batch(&texts))?;
    let pred: Vec<Sentiment> = preds.iter().map(|p| p.label).collect();
    let report = evaluate(&gold, &pred)?;
    if a.json {
        write_json(out, &report)
    } else {
        write!(out, "{}", render_report(&report))?;
        Ok(())
    }
}

fn cmd_segment(a: SegmentArgs, stdin: &mut dyn BufRead, out: &mut dyn Write) -> CmdResult {
    let dict = load_dict(a.dict.as_deref())?;
    let penalty = a.penalty.unwrap_or(DEFAULT_OOV_PENALTY);
    if !(penalty >= 0.0 && penalty.is_finite()) {
        return Err(Failure::Usage(format!("penalty must be a non-negative number, got {penalty}")));
    }
    for line in stdin.lines() {
        let line = line?;
        let tag = line.trim();
        let words = if tag.is_empty() { Vec::new() } else { segment_hashtag_with_penalty(tag, &dict, penalty) };
        writeln!(out, "{}", words.join(" "))?;
    }
    Ok(())
}

fn parse_list<T: FromStr<Err = String>>(raw: &[String]) -> std::result::Result<Vec<T>, Failure> {
    raw.iter().map(|s| s.trim().parse::<T>().map_err(Failure::Usage)).collect()
}

fn parse_range(s: &str) -> std::result::Result<NgramRange, Failure> {
    let bad = || Failure::Usage(format!("n-gram range {s:?} must look like `2-6`"));
    let (lo, hi) = s.trim().split_once('-').ok_or_else(bad)?;
    let lo = lo.parse().map_err(|_| bad())?;
    let hi = hi.parse().map_err(|_| bad())?;
    Ok(NgramRange::new(lo, hi)?)
}

fn cmd_grid(a: GridArgs, out: &mut dyn Write) -> CmdResult {
    check_output(&a.output)?;
    let r = resolve(&a.opts)?;
    let corpus = open_corpus(&a.corpus)?;
    let or_base = |v: Vec<f64>, base: f64| if v.is_empty() { vec![base] } else { v };
    let kinds: Vec<ModelKind> = if a.grid_model.is_empty() { vec![r.kind] } else { parse_list(&a.grid_model)? };
    let losses: Vec<Loss> = if !a.grid_loss.is_empty() {
        parse_list(&a.grid_loss)?
    } else {
        r.loss_explicit.map(|l| vec![l]).unwrap_or_default()
    };
    let ngram_ranges = if a.grid_ngram.is_empty() {
        vec![r.train.ngram_range]
    } else {
        a.grid_ngram.iter().map(|s| parse_range(s)).collect::<std::result::Result<_, _>>()?
    };
    let spec = GridSpec {
        kinds,
        losses,
        lambdas: or_base(a.grid_lambda, r.train.lambda),
        alphas: or_base(a.grid_alpha, r.train.alpha),
        betas: or_base(a.grid_beta, r.train.beta),
        ngram_ranges,
    };
    for p in spec.points() {
        p.apply(&r.train).validate()?;
    }
    let outcome = run_grid(&corpus, &spec, &r.train, &r.pp, &r.dict, a.dev_fraction, a.jobs)?;
    save_model(&outcome.best_model, &a.output)?;

    if a.json {
        return write_json(out, &json!({ "rows": outcome.rows, "best": outcome.rows[0], "output": a.output }));
    }
    writeln!(
        out,
        "{:<4}{:<7}{:<10}{:>10}{:>8}{:>8}{:>8}{:>10}{:>12}{:>10}",
        "#", "model", "loss", "lambda", "alpha", "beta", "ngram", "macro_f1", "weighted_f1", "accuracy"
    )?;
    for (i, row) in outcome.rows.iter().enumerate() {
        let p = &row.point;
        writeln!(
            out,
            "{:<4}{:<7}{:<10}{:>10.1e}{:>8}{:>8}{:>8}{:>10.4}{:>12.4}{:>10.4}",
            i + 1,
            serde_json::to_value(p.kind).unwrap().as_str().unwrap_or(""),
            serde_json::to_value(p.loss).unwrap().as_str().unwrap_or(""),
            p.lambda,
            p.alpha,
            p.beta,
            format!("{}-{}", p.ngram_range.min_n(), p.ngram_range.max_n()),
            row.macro_f1,
            row.weighted_f1,
            row.accuracy
        )?;
    }
    writeln!(out, "best model written to {}", a.output.display())?;
    Ok(())
}
