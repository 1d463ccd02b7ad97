//! Character n-gram extraction and TF-IDF vectorization.
//!
//! N-grams run over the whole preprocessed string, spaces included, and are
//! counted in Unicode scalar values. Weights are
//! `tf * (ln((1 + n_docs) / (1 + df)) + 1)` with raw counts for `tf`, and
//! every row is L2-normalized.

use std::collections::HashMap;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub const MAX_NGRAM: usize = 10;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct NgramRange {
    min_n: usize,
    max_n: usize,
}

impl NgramRange {
    pub fn new(min_n: usize, max_n: usize) -> Result<NgramRange> {
        if min_n < 1 || min_n > max_n || max_n > MAX_NGRAM {
            return Err(Error::Config(format!(
                "n-gram range {min_n}..{max_n} must satisfy 1 <= min <= max <= {MAX_NGRAM}"
            )));
        }
        Ok(NgramRange { min_n, max_n })
    }

    pub fn min_n(&self) -> usize {
        self.min_n
    }

    pub fn max_n(&self) -> usize {
        self.max_n
    }
}

impl Default for NgramRange {
    fn default() -> Self {
        NgramRange { min_n: 2, max_n: 6 }
    }
}

/// Calls `f` with every character n-gram of `text` in range, ordered by
/// length and then by start position.
pub fn for_each_ngram<'a>(text: &'a str, range: NgramRange, mut f: impl FnMut(&'a str)) {
    let bounds: Vec<usize> = text.char_indices().map(|(b, _)| b).chain(std::iter::once(text.len())).collect();
    let m = bounds.len() - 1;
    for n in range.min_n..=range.max_n {
        if n > m {
            break;
        }
        for start in 0..=m - n {
            f(&text[bounds[start]..bounds[start + n]]);
        }
    }
}

/// All n-grams with multiplicity.
pub fn extract_char_ngrams(text: &str, range: NgramRange) -> Vec<String> {
    let mut out = Vec::new();
    for_each_ngram(text, range, |g| out.push(g.to_string()));
    out
}

/// Sparse row with strictly increasing indices and no explicit zeros.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct SparseVector {
    indices: Vec<u32>,
    values: Vec<f64>,
}

impl SparseVector {
    pub fn new() -> SparseVector {
        SparseVector::default()
    }

    /// Builds a vector from arbitrary `(index, value)` pairs; duplicates are
    /// summed and zeros dropped.
    pub fn from_pairs(mut pairs: Vec<(u32, f64)>) -> SparseVector {
        pairs.sort_by_key(|&(i, _)| i);
        let mut v = SparseVector::new();
        for (i, x) in pairs {
            if v.indices.last() == Some(&i) {
                *v.values.last_mut().unwrap() += x;
            } else {
                v.indices.push(i);
                v.values.push(x);
            }
        }
        v.retain_nonzero();
        v
    }

    fn retain_nonzero(&mut self) {
        let mut k = 0;
        for j in 0..self.indices.len() {
            if self.values[j] != 0.0 {
                self.indices[k] = self.indices[j];
                self.values[k] = self.values[j];
                k += 1;
            }
        }
        self.indices.truncate(k);
        self.values.truncate(k);
    }

    pub fn indices(&self) -> &[u32] {
        &self.indices
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn iter(&self) -> impl Iterator<Item = (usize, f64)> + '_ {
        self.indices.iter().zip(&self.values).map(|(&i, &v)| (i as usize, v))
    }

    pub fn nnz(&self) -> usize {
        self.indices.len()
    }

    pub fn is_empty(&self) -> bool {
        self.indices.is_empty()
    }

    pub fn norm(&self) -> f64 {
        self.values.iter().map(|v| v * v).sum::<f64>().sqrt()
    }

    pub fn dot(&self, dense: &[f64]) -> f64 {
        self.iter().map(|(i, v)| v * dense[i]).sum()
    }

    /// Largest index plus one, or 0 when empty.
    pub fn min_dim(&self) -> usize {
        self.indices.last().map_or(0, |&i| i as usize + 1)
    }

    pub fn map_values(&self, mut f: impl FnMut(usize, f64) -> f64) -> SparseVector {
        let mut out =
            SparseVector { indices: self.indices.clone(), values: self.iter().map(|(i, v)| f(i, v)).collect() };
        out.retain_nonzero();
        out
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Vocabulary {
    terms: Vec<String>,
    index: HashMap<String, u32>,
    df: Vec<u32>,
    idf: Vec<f64>,
    n_docs: usize,
    range: NgramRange,
    min_df: usize,
}

/// Smooth inverse document frequency.
pub fn idf(n_docs: usize, df: usize) -> f64 {
    ((1.0 + n_docs as f64) / (1.0 + df as f64)).ln() + 1.0
}

impl Vocabulary {
    /// Rebuilds a vocabulary from its serialized parts, checking invariants.
    pub fn from_parts(
        terms: Vec<String>,
        df: Vec<u32>,
        n_docs: usize,
        range: NgramRange,
        min_df: usize,
    ) -> Result<Vocabulary> {
        if terms.len() != df.len() {
            return Err(Error::Dimension { expected: terms.len(), found: df.len() });
        }
        if let Some(&bad) = df.iter().find(|&&d| d == 0 || d as usize > n_docs) {
            return Err(Error::Config(format!("document frequency {bad} outside 1..={n_docs}")));
        }
        let mut index = HashMap::with_capacity(terms.len());
        for (i, t) in terms.iter().enumerate() {
            if index.insert(t.clone(), i as u32).is_some() {
                return Err(Error::Config(format!("duplicate vocabulary entry {t:?}")));
            }
        }
        let idf = df.iter().map(|&d| idf(n_docs, d as usize)).collect();
        Ok(Vocabulary { terms, index, df, idf, n_docs, range, min_df })
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> &[String] {
        &self.terms
    }

    pub fn df(&self) -> &[u32] {
        &self.df
    }

    pub fn n_docs(&self) -> usize {
        self.n_docs
    }

    pub fn range(&self) -> NgramRange {
        self.range
    }

    pub fn min_df(&self) -> usize {
        self.min_df
    }

    pub fn get(&self, ngram: &str) -> Option<usize> {
        self.index.get(ngram).map(|&i| i as usize)
    }

    pub fn idf_of(&self, i: usize) -> f64 {
        self.idf[i]
    }
}

/// Collects every n-gram with document frequency at least `min_df`, indexed
/// in order of first occurrence across the corpus.
pub fn fit_vocabulary<S: AsRef<str>>(docs: &[S], range: NgramRange, min_df: usize) -> Result<Vocabulary> {
    if docs.is_empty() {
        return Err(Error::EmptyCorpus);
    }
    let mut order: Vec<String> = Vec::new();
    let mut rank_of: HashMap<String, usize> = HashMap::new();
    // per rank: (document frequency, last document that contained it)
    let mut seen: Vec<(u32, usize)> = Vec::new();
    for (d, doc) in docs.iter().enumerate() {
        for_each_ngram(doc.as_ref(), range, |g| {
            let rank = match rank_of.get(g) {
                Some(&rank) => rank,
                None => {
                    let rank = order.len();
                    order.push(g.to_string());
                    rank_of.insert(g.to_string(), rank);
                    seen.push((0, usize::MAX));
                    rank
                }
            };
            let entry = &mut seen[rank];
            if entry.1 != d {
                entry.1 = d;
                entry.0 += 1;
            }
        });
    }
    let min_df = min_df.max(1);
    let mut terms = Vec::new();
    let mut dfs = Vec::new();
    for (g, (count, _)) in order.into_iter().zip(seen) {
        if count as usize >= min_df {
            terms.push(g);
            dfs.push(count);
        }
    }
    Vocabulary::from_parts(terms, dfs, docs.len(), range, min_df)
}

/// TF-IDF row for one document; unknown n-grams are ignored.
pub fn tfidf_transform(doc: &str, vocab: &Vocabulary) -> SparseVector {
    let mut counts: HashMap<u32, f64> = HashMap::new();
    for_each_ngram(doc, vocab.range, |g| {
        if let Some(&i) = vocab.index.get(g) {
            *counts.entry(i).or_default() += 1.0;
        }
    });
    let pairs: Vec<(u32, f64)> = counts.into_iter().map(|(i, tf)| (i, tf * vocab.idf[i as usize])).collect();
    let v = SparseVector::from_pairs(pairs);
    let norm = v.norm();
    if norm == 0.0 {
        return v;
    }
    v.map_values(|_, x| x / norm)
}
