//! NBSVM and plain linear SVM over character n-gram TF-IDF rows, trained
//! one-vs-rest over the three sentiment labels.

mod file;
mod linear;
mod nb;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

pub use file::{load_model, model_from_json, model_to_json, save_model, FORMAT_VERSION};
pub use linear::{
    hinge_objective, hinge_subgradient, logistic_objective, logistic_value_grad, train_linear, LinearFit, LinearParams,
    Loss,
};
pub use nb::{binarize, interpolate, nb_log_ratio, scale_features};

use crate::corpus::{Sentiment, Tweet};
use crate::error::{Error, Result};
use crate::features::{fit_vocabulary, tfidf_transform, NgramRange, SparseVector, Vocabulary};
use crate::preprocess::{preprocess, PreprocessConfig, SegmentDictionary};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ModelKind {
    /// Features scaled by per-class NB log-count ratios.
    Nbsvm,
    /// Unscaled features (ratio fixed to 1).
    Svm,
}

impl std::str::FromStr for ModelKind {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, Self::Err> {
        match s {
            "nbsvm" => Ok(ModelKind::Nbsvm),
            "svm" => Ok(ModelKind::Svm),
            other => Err(format!("unknown model {other:?} (expected nbsvm or svm)")),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TrainConfig {
    pub loss: Loss,
    /// L2 strength in `(1/N) sum loss + lambda |w|^2`.
    pub lambda: f64,
    /// NB smoothing.
    pub alpha: f64,
    /// Interpolation towards the mean weight magnitude; 1 disables it.
    pub beta: f64,
    pub epochs: usize,
    pub seed: u64,
    pub tol: f64,
    /// Use 0/1 indicators instead of TF-IDF values for the NB ratios.
    pub nb_binarize: bool,
    pub ngram_range: NgramRange,
    pub min_df: usize,
}

impl Default for TrainConfig {
    fn default() -> Self {
        TrainConfig {
            loss: Loss::Logistic,
            lambda: 1e-4,
            alpha: 1.0,
            beta: 1.0,
            epochs: 300,
            seed: 42,
            tol: 1e-6,
            nb_binarize: false,
            ngram_range: NgramRange::default(),
            min_df: 1,
        }
    }
}

impl TrainConfig {
    /// Defaults for the plain SVM baseline: same as NBSVM but hinge loss.
    pub fn svm_default() -> Self {
        TrainConfig { loss: Loss::Hinge, ..Default::default() }
    }

    pub fn validate(&self) -> Result<()> {
        let bad = |m: String| Err(Error::Config(m));
        if !(self.lambda > 0.0 && self.lambda.is_finite()) {
            return bad(format!("lambda must be positive, got {}", self.lambda));
        }
        if !(self.alpha > 0.0 && self.alpha.is_finite()) {
            return bad(format!("alpha must be positive, got {}", self.alpha));
        }
        if !(0.0..=1.0).contains(&self.beta) {
            return bad(format!("beta must lie in [0, 1], got {}", self.beta));
        }
        if self.epochs == 0 {
            return bad("epochs must be at least 1".into());
        }
        if self.tol.is_nan() || self.tol < 0.0 {
            return bad(format!("tol must be non-negative, got {}", self.tol));
        }
        NgramRange::new(self.ngram_range.min_n(), self.ngram_range.max_n())?;
        Ok(())
    }

    fn linear_params(&self, class: Sentiment) -> LinearParams {
        LinearParams {
            loss: self.loss,
            lambda: self.lambda,
            epochs: self.epochs,
            tol: self.tol,
            // distinct but fixed shuffling stream per one-vs-rest problem
            seed: self.seed.wrapping_add(class.index() as u64),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ClassWeights {
    pub label: Sentiment,
    pub r: Vec<f64>,
    pub w: Vec<f64>,
    pub b: f64,
}

impl ClassWeights {
    pub fn score(&self, x: &SparseVector) -> f64 {
        x.iter().map(|(j, v)| v * self.r[j] * self.w[j]).sum::<f64>() + self.b
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct NbsvmModel {
    pub kind: ModelKind,
    pub vocabulary: Vocabulary,
    /// One entry per label, in `Sentiment::ALL` order.
    pub classes: Vec<ClassWeights>,
    pub train_config: TrainConfig,
    pub preprocess_config: PreprocessConfig,
    pub dictionary: SegmentDictionary,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Prediction {
    pub label: Sentiment,
    /// Indexed by `Sentiment::index`.
    pub scores: [f64; 3],
}

/// Argmax over scores; the first label in `Sentiment::ALL` wins ties.
pub fn argmax_label(scores: &[f64; 3]) -> Sentiment {
    let mut best = 0;
    for k in 1..3 {
        if scores[k] > scores[best] {
            best = k;
        }
    }
    Sentiment::ALL[best]
}

impl NbsvmModel {
    pub fn featurize(&self, raw_text: &str) -> SparseVector {
        let text = preprocess(raw_text, &self.preprocess_config, &self.dictionary);
        tfidf_transform(&text, &self.vocabulary)
    }

    pub fn predict_features(&self, x: &SparseVector) -> Prediction {
        let mut scores = [0.0; 3];
        for cw in &self.classes {
            scores[cw.label.index()] = cw.score(x);
        }
        Prediction { label: argmax_label(&scores), scores }
    }

    pub fn predict(&self, raw_text: &str) -> Prediction {
        self.predict_features(&self.featurize(raw_text))
    }

    pub fn predict_batch<S: AsRef<str> + Sync>(&self, texts: &[S]) -> Vec<Prediction> {
        texts.par_iter().map(|t| self.predict(t.as_ref())).collect()
    }

    pub(crate) fn validate(&self) -> Result<()> {
        let dim = self.vocabulary.len();
        if self.classes.len() != 3 {
            return Err(Error::ModelFormat(format!("expected 3 classes, found {}", self.classes.len())));
        }
        for (cw, &expected) in self.classes.iter().zip(Sentiment::ALL.iter()) {
            if cw.label != expected {
                return Err(Error::ModelFormat(format!("class {} out of order", cw.label)));
            }
            if cw.r.len() != dim {
                return Err(Error::Dimension { expected: dim, found: cw.r.len() });
            }
            if cw.w.len() != dim {
                return Err(Error::Dimension { expected: dim, found: cw.w.len() });
            }
            if !cw.b.is_finite() || cw.r.iter().chain(&cw.w).any(|x| !x.is_finite()) {
                return Err(Error::NonFinite);
            }
        }
        Ok(())
    }
}

/// Per-class optimizer outcome.
#[derive(Debug, Clone, PartialEq)]
pub struct ClassFitInfo {
    pub label: Sentiment,
    pub iterations: usize,
    pub converged: bool,
    pub grad_norm: f64,
    pub objective: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct TrainSummary {
    pub n_docs: usize,
    pub vocab_size: usize,
    pub train_accuracy: f64,
    pub fits: Vec<ClassFitInfo>,
}

pub fn train_nbsvm(
    corpus: &[Tweet],
    cfg: &TrainConfig,
    pp: &PreprocessConfig,
    dict: &SegmentDictionary,
) -> Result<NbsvmModel> {
    train(corpus, ModelKind::Nbsvm, cfg, pp, dict).map(|(m, _)| m)
}

pub fn train_svm(
    corpus: &[Tweet],
    cfg: &TrainConfig,
    pp: &PreprocessConfig,
    dict: &SegmentDictionary,
) -> Result<NbsvmModel> {
    train(corpus, ModelKind::Svm, cfg, pp, dict).map(|(m, _)| m)
}

/// Labels of a corpus, failing on the first unlabeled tweet.
pub fn labels_of(corpus: &[Tweet]) -> Result<Vec<Sentiment>> {
    corpus.iter().map(|t| t.sentiment.ok_or_else(|| Error::Unlabeled(t.uid.clone()))).collect()
}

/// Preprocess, fit the vocabulary, then fit one binary classifier per label.
pub fn train(
    corpus: &[Tweet],
    kind: ModelKind,
    cfg: &TrainConfig,
    pp: &PreprocessConfig,
    dict: &SegmentDictionary,
) -> Result<(NbsvmModel, TrainSummary)> {
    cfg.validate()?;
    if corpus.is_empty() {
        return Err(Error::EmptyCorpus);
    }
    let labels = labels_of(corpus)?;
    for s in Sentiment::ALL {
        if !labels.contains(&s) {
            return Err(Error::MissingClass(s));
        }
    }

    let texts: Vec<String> = corpus.par_iter().map(|t| preprocess(&t.text(), pp, dict)).collect();
    let vocabulary = fit_vocabulary(&texts, cfg.ngram_range, cfg.min_df)?;
    let rows: Vec<SparseVector> = texts.par_iter().map(|t| tfidf_transform(t, &vocabulary)).collect();
    let dim = vocabulary.len();
    let nb_rows = if cfg.nb_binarize { Some(binarize(&rows)) } else { None };

    let fitted: Vec<(ClassWeights, ClassFitInfo)> = Sentiment::ALL
        .par_iter()
        .map(|&class| -> Result<(ClassWeights, ClassFitInfo)> {
            let in_class: Vec<bool> = labels.iter().map(|&l| l == class).collect();
            let r = match kind {
                ModelKind::Nbsvm => nb_log_ratio(nb_rows.as_deref().unwrap_or(&rows), &in_class, dim, cfg.alpha)?,
                ModelKind::Svm => vec![1.0; dim],
            };
            let scaled = rows.iter().map(|x| scale_features(x, &r)).collect::<Result<Vec<_>>>()?;
            let fit = train_linear(&scaled, &in_class, dim, &cfg.linear_params(class))?;
            let w = if cfg.beta == 1.0 { fit.w } else { interpolate(&fit.w, cfg.beta) };
            let info = ClassFitInfo {
                label: class,
                iterations: fit.iterations,
                converged: fit.converged,
                grad_norm: fit.grad_norm,
                objective: fit.objective,
            };
            Ok((ClassWeights { label: class, r, w, b: fit.b }, info))
        })
        .collect::<Result<Vec<_>>>()?;
    let (classes, fits): (Vec<_>, Vec<_>) = fitted.into_iter().unzip();

    let model = NbsvmModel {
        kind,
        vocabulary,
        classes,
        train_config: cfg.clone(),
        preprocess_config: pp.clone(),
        dictionary: dict.clone(),
    };
    let correct = rows.iter().zip(&labels).filter(|(x, &l)| model.predict_features(x).label == l).count();
    let summary = TrainSummary {
        n_docs: corpus.len(),
        vocab_size: dim,
        train_accuracy: correct as f64 / corpus.len() as f64,
        fits,
    };
    Ok((model, summary))
}
