//! Naive-Bayes log-count ratios and the feature scaling / weight
//! interpolation that go with them.

use crate::error::{Error, Result};
use crate::features::SparseVector;

/// Per-feature log-count ratio between the in-class and out-of-class rows:
///
/// `p = alpha + sum of in-class rows`, `q = alpha + sum of out-of-class rows`,
/// `r = ln((p / |p|_1) / (q / |q|_1))`.
///
/// Rows are used as given, so TF-IDF weighted rows give TF-IDF weighted
/// ratios. Pass them through [`binarize`] first for the indicator variant.
pub fn nb_log_ratio(rows: &[SparseVector], in_class: &[bool], dim: usize, alpha: f64) -> Result<Vec<f64>> {
    if rows.len() != in_class.len() {
        return Err(Error::Dimension { expected: rows.len(), found: in_class.len() });
    }
    if !(alpha > 0.0 && alpha.is_finite()) {
        return Err(Error::Config(format!("NB smoothing alpha must be positive, got {alpha}")));
    }
    if !in_class.iter().any(|&c| c) {
        return Err(Error::SingleClass("out-of-class"));
    }
    if in_class.iter().all(|&c| c) {
        return Err(Error::SingleClass("in-class"));
    }
    let mut p = vec![alpha; dim];
    let mut q = vec![alpha; dim];
    for (row, &pos) in rows.iter().zip(in_class) {
        if row.min_dim() > dim {
            return Err(Error::Dimension { expected: dim, found: row.min_dim() });
        }
        let target = if pos { &mut p } else { &mut q };
        for (j, v) in row.iter() {
            target[j] += v;
        }
    }
    let p_norm: f64 = p.iter().map(|x| x.abs()).sum();
    let q_norm: f64 = q.iter().map(|x| x.abs()).sum();
    // Difference of logs keeps r exactly antisymmetric under a label flip.
    Ok(p.iter().zip(&q).map(|(pj, qj)| (pj / p_norm).ln() - (qj / q_norm).ln()).collect())
}

/// Replaces every stored value with 1.
pub fn binarize(rows: &[SparseVector]) -> Vec<SparseVector> {
    rows.iter().map(|r| r.map_values(|_, _| 1.0)).collect()
}

/// Elementwise `x ∘ r` over the support of `x`.
pub fn scale_features(x: &SparseVector, r: &[f64]) -> Result<SparseVector> {
    if x.min_dim() > r.len() {
        return Err(Error::Dimension { expected: r.len(), found: x.min_dim() });
    }
    Ok(x.map_values(|j, v| v * r[j]))
}

/// `w' = (1 - beta) * mean(|w|) + beta * w`.
pub fn interpolate(w: &[f64], beta: f64) -> Vec<f64> {
    if w.is_empty() {
        return Vec::new();
    }
    let mean_abs = w.iter().map(|x| x.abs()).sum::<f64>() / w.len() as f64;
    w.iter().map(|&x| (1.0 - beta) * mean_abs + beta * x).collect()
}
