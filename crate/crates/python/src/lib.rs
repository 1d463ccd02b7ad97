//! Python bindings: preprocessing helpers, corpus statistics, evaluation and
//! a `Model` class wrapping training, prediction and model files.

use std::collections::HashMap;
use std::fs::File;
use std::io::BufReader;

use codemix::corpus::{self, Sentiment, Token, Tweet};
use codemix::features::{self, NgramRange};
use codemix::model::{self, Loss, ModelKind, NbsvmModel, TrainConfig};
use codemix::preprocess::{self, PreprocessConfig, SegmentDictionary, DEFAULT_OOV_PENALTY};
use codemix::{eval, Error};
use pyo3::create_exception;
use pyo3::exceptions::{PyException, PyIOError, PyValueError};
use pyo3::prelude::*;
use pyo3::types::PyDict;

create_exception!(codemix_py, CodemixError, PyException);

fn to_py(e: Error) -> PyErr {
    match e {
        Error::Io(io) => PyIOError::new_err(io.to_string()),
        Error::Config(_) | Error::Parse(_) | Error::Dictionary { .. } => PyValueError::new_err(e.to_string()),
        other => CodemixError::new_err(other.to_string()),
    }
}

fn parse_label(s: &str) -> PyResult<Sentiment> {
    s.parse().map_err(|s| PyValueError::new_err(format!("unknown sentiment {s:?}")))
}

fn dictionary(words: Option<HashMap<String, u64>>) -> SegmentDictionary {
    match words {
        Some(w) => SegmentDictionary::from_pairs(w),
        None => SegmentDictionary::builtin(),
    }
}

#[pyfunction]
fn tokenize(text: &str) -> Vec<String> {
    preprocess::tokenize(text)
}

#[pyfunction]
#[pyo3(signature = (tag, dictionary=None, penalty=DEFAULT_OOV_PENALTY))]
fn segment_hashtag(tag: &str, dictionary: Option<HashMap<String, u64>>, penalty: f64) -> Vec<String> {
    preprocess::segment_hashtag_with_penalty(tag, &self::dictionary(dictionary), penalty)
}

#[pyfunction]
#[pyo3(signature = (text, segment_hashtags=true, remove_urls=true, lowercase=true, penalty=DEFAULT_OOV_PENALTY, dictionary=None))]
fn preprocess_text(
    text: &str,
    segment_hashtags: bool,
    remove_urls: bool,
    lowercase: bool,
    penalty: f64,
    dictionary: Option<HashMap<String, u64>>,
) -> String {
    let cfg =
        PreprocessConfig { segment_hashtags, remove_urls, lowercase, oov_penalty: penalty, dictionary_path: None };
    preprocess::preprocess(text, &cfg, &self::dictionary(dictionary))
}

#[pyfunction]
#[pyo3(signature = (text, min_n=2, max_n=6))]
fn char_ngrams(text: &str, min_n: usize, max_n: usize) -> PyResult<Vec<String>> {
    let range = NgramRange::new(min_n, max_n).map_err(to_py)?;
    Ok(features::extract_char_ngrams(text, range))
}

/// One tweet from a corpus file.
#[pyclass(name = "Tweet", frozen, skip_from_py_object)]
#[derive(Clone)]
struct PyTweet {
    inner: Tweet,
}

#[pymethods]
impl PyTweet {
    #[getter]
    fn uid(&self) -> &str {
        &self.inner.uid
    }

    #[getter]
    fn sentiment(&self) -> Option<&'static str> {
        self.inner.sentiment.map(Sentiment::as_str)
    }

    /// `(text, raw_tag)` pairs in file order.
    #[getter]
    fn tokens(&self) -> Vec<(String, String)> {
        self.inner.tokens.iter().map(|t| (t.text.clone(), t.raw_tag.clone())).collect()
    }

    fn text(&self) -> String {
        self.inner.text()
    }

    fn __repr__(&self) -> String {
        format!("Tweet(uid={:?}, sentiment={:?}, tokens={})", self.inner.uid, self.sentiment(), self.inner.tokens.len())
    }
}

fn read_corpus(path: &str) -> PyResult<Vec<Tweet>> {
    let file = File::open(path).map_err(|e| PyIOError::new_err(format!("{path}: {e}")))?;
    corpus::parse_corpus(BufReader::new(file)).map_err(|e| PyValueError::new_err(format!("{path}: {e}")))
}

#[pyfunction]
fn parse_corpus(path: &str) -> PyResult<Vec<PyTweet>> {
    Ok(read_corpus(path)?.into_iter().map(|inner| PyTweet { inner }).collect())
}

#[pyfunction]
fn corpus_stats<'py>(py: Python<'py>, path: &str) -> PyResult<Bound<'py, PyDict>> {
    let s = corpus::corpus_stats(&read_corpus(path)?).map_err(to_py)?;
    let d = PyDict::new(py);
    d.set_item("n_tweets", s.n_tweets)?;
    let labels = PyDict::new(py);
    for (k, v) in &s.label_counts {
        labels.set_item(k.as_str(), v)?;
    }
    d.set_item("label_counts", labels)?;
    d.set_item("n_unlabeled", s.n_unlabeled)?;
    d.set_item("n_tokens", s.n_tokens)?;
    d.set_item("n_lang1_tokens", s.n_lang1_tokens)?;
    d.set_item("n_lang2_tokens", s.n_lang2_tokens)?;
    d.set_item("n_other_tokens", s.n_other_tokens)?;
    d.set_item("lang1_pct", s.lang1_pct)?;
    d.set_item("lang2_pct", s.lang2_pct)?;
    d.set_item("vocab1_size", s.vocab1_size)?;
    d.set_item("vocab2_size", s.vocab2_size)?;
    d.set_item("overlap_size", s.overlap_size)?;
    d.set_item("overlap_pct", s.overlap_pct)?;
    d.set_item("overlap_pct_of_vocab1", s.overlap_pct_of_vocab1)?;
    d.set_item("overlap_pct_of_vocab2", s.overlap_pct_of_vocab2)?;
    Ok(d)
}

/// Per-class precision/recall/F1, macro and weighted F1, accuracy and the
/// confusion matrix for two equal-length label lists.
#[pyfunction]
fn evaluate<'py>(py: Python<'py>, gold: Vec<String>, pred: Vec<String>) -> PyResult<Bound<'py, PyDict>> {
    let gold = gold.iter().map(|s| parse_label(s)).collect::<PyResult<Vec<_>>>()?;
    let pred = pred.iter().map(|s| parse_label(s)).collect::<PyResult<Vec<_>>>()?;
    let r = eval::evaluate(&gold, &pred).map_err(to_py)?;
    let d = PyDict::new(py);
    d.set_item("macro_f1", r.macro_f1)?;
    d.set_item("weighted_f1", r.weighted_f1)?;
    d.set_item("accuracy", r.accuracy)?;
    d.set_item("n", r.n)?;
    let per_class = PyDict::new(py);
    for c in &r.per_class {
        let m = PyDict::new(py);
        m.set_item("precision", c.precision)?;
        m.set_item("recall", c.recall)?;
        m.set_item("f1", c.f1)?;
        m.set_item("support", c.support)?;
        per_class.set_item(c.label.as_str(), m)?;
    }
    d.set_item("per_class", per_class)?;
    d.set_item("confusion", r.confusion.0.iter().map(|row| row.to_vec()).collect::<Vec<_>>())?;
    Ok(d)
}

/// Trained NBSVM or SVM classifier.
#[pyclass(name = "Model", frozen)]
struct PyModel {
    inner: NbsvmModel,
}

#[allow(clippy::too_many_arguments)]
fn train_config(
    kind: ModelKind,
    loss: Option<&str>,
    lambda_: f64,
    alpha: f64,
    beta: f64,
    epochs: usize,
    seed: u64,
    tol: f64,
    ngram_min: usize,
    ngram_max: usize,
    min_df: usize,
    nb_binarize: bool,
) -> PyResult<TrainConfig> {
    let loss = match loss {
        Some(l) => l.parse::<Loss>().map_err(PyValueError::new_err)?,
        None if kind == ModelKind::Svm => Loss::Hinge,
        None => Loss::Logistic,
    };
    let cfg = TrainConfig {
        loss,
        lambda: lambda_,
        alpha,
        beta,
        epochs,
        seed,
        tol,
        nb_binarize,
        ngram_range: NgramRange::new(ngram_min, ngram_max).map_err(to_py)?,
        min_df,
    };
    cfg.validate().map_err(to_py)?;
    Ok(cfg)
}

#[allow(clippy::too_many_arguments)]
fn fit(
    py: Python<'_>,
    tweets: Vec<Tweet>,
    model: &str,
    loss: Option<&str>,
    lambda_: f64,
    alpha: f64,
    beta: f64,
    epochs: usize,
    seed: u64,
    tol: f64,
    ngram_min: usize,
    ngram_max: usize,
    min_df: usize,
    nb_binarize: bool,
    preprocess: bool,
) -> PyResult<PyModel> {
    let kind: ModelKind = model.parse().map_err(PyValueError::new_err)?;
    let cfg =
        train_config(kind, loss, lambda_, alpha, beta, epochs, seed, tol, ngram_min, ngram_max, min_df, nb_binarize)?;
    let pp = if preprocess { PreprocessConfig::default() } else { PreprocessConfig::disabled() };
    let dict = SegmentDictionary::builtin();
    let (inner, _) = py.detach(|| model::train(&tweets, kind, &cfg, &pp, &dict)).map_err(to_py)?;
    Ok(PyModel { inner })
}

#[pymethods]
impl PyModel {
    /// Train from parallel lists of texts and labels
    /// (`"negative"`, `"neutral"`, `"positive"`).
    #[staticmethod]
    #[pyo3(signature = (texts, labels, model="nbsvm", loss=None, lambda_=1e-4, alpha=1.0, beta=1.0, epochs=300, seed=42, tol=1e-6, ngram_min=2, ngram_max=6, min_df=1, nb_binarize=false, preprocess=true))]
    #[allow(clippy::too_many_arguments)]
    fn train(
        py: Python<'_>,
        texts: Vec<String>,
        labels: Vec<String>,
        model: &str,
        loss: Option<&str>,
        lambda_: f64,
        alpha: f64,
        beta: f64,
        epochs: usize,
        seed: u64,
        tol: f64,
        ngram_min: usize,
        ngram_max: usize,
        min_df: usize,
        nb_binarize: bool,
        preprocess: bool,
    ) -> PyResult<PyModel> {
        if texts.len() != labels.len() {
            return Err(PyValueError::new_err(format!("{} texts but {} labels", texts.len(), labels.len())));
        }
        let tweets = texts
            .iter()
            .zip(&labels)
            .enumerate()
            .map(|(i, (text, label))| {
                Ok(Tweet {
                    uid: i.to_string(),
                    sentiment: Some(parse_label(label)?),
                    tokens: text.split_whitespace().map(|w| Token::new(w, "O")).collect(),
                })
            })
            .collect::<PyResult<Vec<_>>>()?;
        fit(
            py,
            tweets,
            model,
            loss,
            lambda_,
            alpha,
            beta,
            epochs,
            seed,
            tol,
            ngram_min,
            ngram_max,
            min_df,
            nb_binarize,
            preprocess,
        )
    }

    /// Train on a labeled corpus file.
    #[staticmethod]
    #[pyo3(signature = (path, model="nbsvm", loss=None, lambda_=1e-4, alpha=1.0, beta=1.0, epochs=300, seed=42, tol=1e-6, ngram_min=2, ngram_max=6, min_df=1, nb_binarize=false, preprocess=true))]
    #[allow(clippy::too_many_arguments)]
    fn train_corpus(
        py: Python<'_>,
        path: &str,
        model: &str,
        loss: Option<&str>,
        lambda_: f64,
        alpha: f64,
        beta: f64,
        epochs: usize,
        seed: u64,
        tol: f64,
        ngram_min: usize,
        ngram_max: usize,
        min_df: usize,
        nb_binarize: bool,
        preprocess: bool,
    ) -> PyResult<PyModel> {
        let tweets = read_corpus(path)?;
        fit(
            py,
            tweets,
            model,
            loss,
            lambda_,
            alpha,
            beta,
            epochs,
            seed,
            tol,
            ngram_min,
            ngram_max,
            min_df,
            nb_binarize,
            preprocess,
        )
    }

    #[staticmethod]
    fn load(path: &str) -> PyResult<PyModel> {
        Ok(PyModel { inner: model::load_model(path).map_err(to_py)? })
    }

    #[staticmethod]
    fn from_json(text: &str) -> PyResult<PyModel> {
        Ok(PyModel { inner: model::model_from_json(text).map_err(to_py)? })
    }

    fn save(&self, path: &str) -> PyResult<()> {
        model::save_model(&self.inner, path).map_err(to_py)
    }

    fn to_json(&self) -> PyResult<String> {
        model::model_to_json(&self.inner).map_err(to_py)
    }

    fn predict(&self, text: &str) -> &'static str {
        self.inner.predict(text).label.as_str()
    }

    /// Per-class decision scores keyed by label.
    fn predict_scores(&self, text: &str) -> HashMap<&'static str, f64> {
        let p = self.inner.predict(text);
        Sentiment::ALL.iter().map(|s| (s.as_str(), p.scores[s.index()])).collect()
    }

    fn predict_batch(&self, py: Python<'_>, texts: Vec<String>) -> Vec<&'static str> {
        let preds = py.detach(|| self.inner.predict_batch(&texts));
        preds.iter().map(|p| p.label.as_str()).collect()
    }

    #[getter]
    fn kind(&self) -> &'static str {
        match self.inner.kind {
            ModelKind::Nbsvm => "nbsvm",
            ModelKind::Svm => "svm",
        }
    }

    #[getter]
    fn vocab_size(&self) -> usize {
        self.inner.vocabulary.len()
    }

    fn __repr__(&self) -> String {
        format!("Model(kind={:?}, vocab_size={})", self.kind(), self.vocab_size())
    }
}

#[pymodule]
fn codemix_py(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add("CodemixError", m.py().get_type::<CodemixError>())?;
    m.add_function(wrap_pyfunction!(tokenize, m)?)?;
    m.add_function(wrap_pyfunction!(segment_hashtag, m)?)?;
    m.add_function(wrap_pyfunction!(preprocess_text, m)?)?;
    m.add_function(wrap_pyfunction!(char_ngrams, m)?)?;
    m.add_function(wrap_pyfunction!(parse_corpus, m)?)?;
    m.add_function(wrap_pyfunction!(corpus_stats, m)?)?;
    m.add_function(wrap_pyfunction!(evaluate, m)?)?;
    m.add_class::<PyTweet>()?;
    m.add_class::<PyModel>()?;
    Ok(())
}
