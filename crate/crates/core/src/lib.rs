//! Sentiment classification for code-mixed (Hindi-English, Spanish-English)
//! tweets with NBSVM over character n-gram TF-IDF features.
//!
//! The pipeline is: [`corpus`] parsing, [`preprocess`]ing, [`features`]
//! (character n-grams and TF-IDF), one-vs-rest [`model`] training, and
//! [`eval`]uation with per-class and macro-averaged F1.

pub mod cli;
pub mod corpus;
pub mod error;
pub mod eval;
pub mod features;
pub mod grid;
pub mod model;
pub mod preprocess;

pub use corpus::{corpus_stats, parse_corpus, CorpusStats, LangTag, Sentiment, Token, Tweet};
pub use error::{Error, Result};
pub use eval::{confusion, evaluate, report, ConfusionMatrix, EvalReport};
pub use features::{extract_char_ngrams, fit_vocabulary, tfidf_transform, NgramRange, SparseVector, Vocabulary};
pub use model::{load_model, save_model, train_nbsvm, train_svm, Loss, ModelKind, NbsvmModel, Prediction, TrainConfig};
pub use preprocess::{preprocess, segment_hashtag, tokenize, PreprocessConfig, SegmentDictionary};
