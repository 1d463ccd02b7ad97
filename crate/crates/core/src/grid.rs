//! Seeded stratified train/dev split and a small parameter grid search.

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::corpus::{Sentiment, Tweet};
use crate::error::{Error, Result};
use crate::eval::{evaluate, EvalReport};
use crate::features::NgramRange;
use crate::model::{labels_of, train, Loss, ModelKind, NbsvmModel, TrainConfig};
use crate::preprocess::{PreprocessConfig, SegmentDictionary};

/// Indices of the train and dev sides. Each label is shuffled separately and
/// `round(dev_fraction * count)` of its tweets go to dev; both sides keep
/// corpus order.
pub fn stratified_split(labels: &[Sentiment], dev_fraction: f64, seed: u64) -> Result<(Vec<usize>, Vec<usize>)> {
    if !(dev_fraction > 0.0 && dev_fraction < 1.0) {
        return Err(Error::Config(format!("dev fraction must lie in (0, 1), got {dev_fraction}")));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut train_idx = Vec::new();
    let mut dev_idx = Vec::new();
    for class in Sentiment::ALL {
        let mut members: Vec<usize> = labels.iter().enumerate().filter(|(_, &l)| l == class).map(|(i, _)| i).collect();
        members.shuffle(&mut rng);
        let n_dev = (dev_fraction * members.len() as f64).round() as usize;
        if n_dev == 0 {
            return Err(Error::DegenerateSplit(class, "dev"));
        }
        if n_dev == members.len() {
            return Err(Error::DegenerateSplit(class, "train"));
        }
        dev_idx.extend_from_slice(&members[..n_dev]);
        train_idx.extend_from_slice(&members[n_dev..]);
    }
    train_idx.sort_unstable();
    dev_idx.sort_unstable();
    Ok((train_idx, dev_idx))
}

pub fn select<T: Clone>(items: &[T], idx: &[usize]) -> Vec<T> {
    idx.iter().map(|&i| items[i].clone()).collect()
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GridPoint {
    pub kind: ModelKind,
    pub loss: Loss,
    pub lambda: f64,
    pub alpha: f64,
    pub beta: f64,
    pub ngram_range: NgramRange,
}

impl GridPoint {
    pub fn apply(&self, base: &TrainConfig) -> TrainConfig {
        TrainConfig {
            loss: self.loss,
            lambda: self.lambda,
            alpha: self.alpha,
            beta: self.beta,
            ngram_range: self.ngram_range,
            ..base.clone()
        }
    }
}

/// Lists of values to try; the grid is their cartesian product.
#[derive(Debug, Clone)]
pub struct GridSpec {
    pub kinds: Vec<ModelKind>,
    /// Empty means logistic for NBSVM and hinge for SVM.
    pub losses: Vec<Loss>,
    pub lambdas: Vec<f64>,
    pub alphas: Vec<f64>,
    pub betas: Vec<f64>,
    pub ngram_ranges: Vec<NgramRange>,
}

impl GridSpec {
    pub fn points(&self) -> Vec<GridPoint> {
        let mut out = Vec::new();
        for &kind in &self.kinds {
            let default_loss = match kind {
                ModelKind::Nbsvm => Loss::Logistic,
                ModelKind::Svm => Loss::Hinge,
            };
            let losses = if self.losses.is_empty() { vec![default_loss] } else { self.losses.clone() };
            for &ngram_range in &self.ngram_ranges {
                for &loss in &losses {
                    for &lambda in &self.lambdas {
                        for &alpha in &self.alphas {
                            for &beta in &self.betas {
                                out.push(GridPoint { kind, loss, lambda, alpha, beta, ngram_range });
                            }
                        }
                    }
                }
            }
        }
        out
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct GridRow {
    pub point: GridPoint,
    pub macro_f1: f64,
    pub weighted_f1: f64,
    pub accuracy: f64,
}

pub struct GridOutcome {
    /// Sorted by macro-F1, descending; ties keep grid order.
    pub rows: Vec<GridRow>,
    pub best_model: NbsvmModel,
    pub best_report: EvalReport,
}

/// Splits `corpus`, trains every grid point on the train side and scores it
/// on the dev side. Up to `jobs` points train at once; results do not depend
/// on `jobs`.
pub fn run_grid(
    corpus: &[Tweet],
    spec: &GridSpec,
    base: &TrainConfig,
    pp: &PreprocessConfig,
    dict: &SegmentDictionary,
    dev_fraction: f64,
    jobs: usize,
) -> Result<GridOutcome> {
    let points = spec.points();
    if points.is_empty() {
        return Err(Error::Config("parameter grid is empty".into()));
    }
    let labels = labels_of(corpus)?;
    let (train_idx, dev_idx) = stratified_split(&labels, dev_fraction, base.seed)?;
    let train_set = select(corpus, &train_idx);
    let dev_set = select(corpus, &dev_idx);
    let dev_gold = select(&labels, &dev_idx);

    let pool =
        rayon::ThreadPoolBuilder::new().num_threads(jobs.max(1)).build().map_err(|e| Error::Config(e.to_string()))?;
    let results: Vec<(NbsvmModel, EvalReport)> = pool.install(|| {
        points
            .par_iter()
            .map(|p| -> Result<(NbsvmModel, EvalReport)> {
                let (model, _) = train(&train_set, p.kind, &p.apply(base), pp, dict)?;
                let pred: Vec<Sentiment> = dev_set.iter().map(|t| model.predict(&t.text()).label).collect();
                let report = evaluate(&dev_gold, &pred)?;
                Ok((model, report))
            })
            .collect::<Result<Vec<_>>>()
    })?;

    let mut order: Vec<usize> = (0..points.len()).collect();
    order.sort_by(|&a, &b| results[b].1.macro_f1.total_cmp(&results[a].1.macro_f1));
    let rows = order
        .iter()
        .map(|&i| GridRow {
            point: points[i].clone(),
            macro_f1: results[i].1.macro_f1,
            weighted_f1: results[i].1.weighted_f1,
            accuracy: results[i].1.accuracy,
        })
        .collect();
    let best = order[0];
    let (best_model, best_report) = results.into_iter().nth(best).unwrap();
    Ok(GridOutcome { rows, best_model, best_report })
}
