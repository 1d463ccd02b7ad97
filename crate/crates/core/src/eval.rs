//! Confusion matrix and per-class / macro-averaged F1.
//!
//! Precision, recall and F1 are 0 whenever their denominator is 0.

use serde::{Deserialize, Serialize};

use crate::corpus::Sentiment;
use crate::error::{Error, Result};

/// Rows are gold labels, columns are predictions, both in `Sentiment::ALL`
/// order.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct ConfusionMatrix(pub [[u64; 3]; 3]);

impl ConfusionMatrix {
    pub fn get(&self, gold: Sentiment, pred: Sentiment) -> u64 {
        self.0[gold.index()][pred.index()]
    }

    pub fn total(&self) -> u64 {
        self.0.iter().flatten().sum()
    }

    pub fn trace(&self) -> u64 {
        (0..3).map(|k| self.0[k][k]).sum()
    }
}

pub fn confusion(gold: &[Sentiment], pred: &[Sentiment]) -> Result<ConfusionMatrix> {
    if gold.len() != pred.len() {
        return Err(Error::Dimension { expected: gold.len(), found: pred.len() });
    }
    if gold.is_empty() {
        return Err(Error::EmptyCorpus);
    }
    let mut cm = ConfusionMatrix::default();
    for (g, p) in gold.iter().zip(pred) {
        cm.0[g.index()][p.index()] += 1;
    }
    Ok(cm)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ClassMetrics {
    pub label: Sentiment,
    pub precision: f64,
    pub recall: f64,
    pub f1: f64,
    /// Number of gold instances of this class.
    pub support: u64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EvalReport {
    pub per_class: Vec<ClassMetrics>,
    /// Unweighted mean of the per-class F1.
    pub macro_f1: f64,
    /// Support-weighted mean of the per-class F1.
    pub weighted_f1: f64,
    pub accuracy: f64,
    pub confusion: ConfusionMatrix,
    pub n: u64,
}

fn ratio(num: u64, den: u64) -> f64 {
    if den == 0 {
        0.0
    } else {
        num as f64 / den as f64
    }
}

pub fn report(cm: &ConfusionMatrix) -> Result<EvalReport> {
    let n = cm.total();
    if n == 0 {
        return Err(Error::EmptyCorpus);
    }
    let per_class: Vec<ClassMetrics> = Sentiment::ALL
        .iter()
        .map(|&label| {
            let k = label.index();
            let tp = cm.0[k][k];
            let predicted: u64 = (0..3).map(|g| cm.0[g][k]).sum();
            let support: u64 = cm.0[k].iter().sum();
            let precision = ratio(tp, predicted);
            let recall = ratio(tp, support);
            let f1 = if precision + recall == 0.0 { 0.0 } else { 2.0 * precision * recall / (precision + recall) };
            ClassMetrics { label, precision, recall, f1, support }
        })
        .collect();
    let macro_f1 = per_class.iter().map(|c| c.f1).sum::<f64>() / 3.0;
    let weighted_f1 = per_class.iter().map(|c| c.f1 * c.support as f64).sum::<f64>() / n as f64;
    Ok(EvalReport { macro_f1, weighted_f1, accuracy: ratio(cm.trace(), n), confusion: *cm, n, per_class })
}

/// `report(confusion(gold, pred))`.
pub fn evaluate(gold: &[Sentiment], pred: &[Sentiment]) -> Result<EvalReport> {
    report(&confusion(gold, pred)?)
}

/// Plain-text table: per-class P/R/F1, macro and weighted F1, accuracy and
/// the confusion matrix.
pub fn render_report(r: &EvalReport) -> String {
    let mut out = String::new();
    out.push_str(&format!("{:<16}{:>10}{:>10}{:>10}{:>10}\n", "class", "precision", "recall", "f1", "support"));
    for c in &r.per_class {
        out.push_str(&format!(
            "{:<16}{:>10.4}{:>10.4}{:>10.4}{:>10}\n",
            c.label.as_str(),
            c.precision,
            c.recall,
            c.f1,
            c.support
        ));
    }
    out.push_str(&format!("{:<16}{:>30.4}{:>10}\n", "macro avg f1", r.macro_f1, r.n));
    out.push_str(&format!("{:<16}{:>30.4}{:>10}\n", "weighted f1", r.weighted_f1, r.n));
    out.push_str(&format!("{:<16}{:>30.4}{:>10}\n", "accuracy", r.accuracy, r.n));
    out.push_str("\nconfusion (rows = gold, columns = predicted)\n");
    out.push_str(&format!("{:<16}", ""));
    for s in Sentiment::ALL {
        out.push_str(&format!("{:>10}", s.as_str()));
    }
    out.push('\n');
    for g in Sentiment::ALL {
        out.push_str(&format!("{:<16}", g.as_str()));
        for p in Sentiment::ALL {
            out.push_str(&format!("{:>10}", r.confusion.get(g, p)));
        }
        out.push('\n');
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use Sentiment::*;

    #[test]
    fn confusion_cells() {
        let cm = confusion(&[Positive], &[Positive]).unwrap();
        assert_eq!(cm.get(Positive, Positive), 1);
        assert_eq!(cm.total(), 1);

        let cm = confusion(&[Positive, Negative], &[Negative, Positive]).unwrap();
        assert_eq!(cm.get(Positive, Negative), 1);
        assert_eq!(cm.get(Negative, Positive), 1);
        assert_eq!(cm.trace(), 0);

        assert!(confusion(&[], &[]).is_err());
        assert!(confusion(&[Positive], &[]).is_err());
    }

    #[test]
    fn perfect_predictions() {
        let g = [Negative, Neutral, Positive, Positive];
        let r = evaluate(&g, &g).unwrap();
        assert_eq!(r.macro_f1, 1.0);
        assert_eq!(r.accuracy, 1.0);
        assert!(r.per_class.iter().all(|c| c.precision == 1.0 && c.recall == 1.0 && c.f1 == 1.0));
    }

    #[test]
    fn tp2_fp1_fn1() {
        // Positive: TP=2, FP=1 (gold neutral), FN=1 (predicted negative)
        let gold = [Positive, Positive, Positive, Neutral];
        let pred = [Positive, Positive, Negative, Positive];
        let r = evaluate(&gold, &pred).unwrap();
        let pos = r.per_class[Positive.index()];
        assert!((pos.precision - 2.0 / 3.0).abs() < 1e-12);
        assert!((pos.recall - 2.0 / 3.0).abs() < 1e-12);
        assert!((pos.f1 - 2.0 / 3.0).abs() < 1e-12);
    }

    #[test]
    fn macro_is_plain_mean() {
        // F1 = (1.0, 0.5, 0.0)
        let mut cm = ConfusionMatrix::default();
        cm.0[0][0] = 2;
        cm.0[1][1] = 1;
        cm.0[1][2] = 2;
        let r = report(&cm).unwrap();
        let f1: Vec<f64> = r.per_class.iter().map(|c| c.f1).collect();
        assert_eq!(f1, [1.0, 0.5, 0.0]);
        assert_eq!(r.macro_f1, 0.5);
    }

    #[test]
    fn all_one_class_predictions() {
        let gold = [Negative, Neutral, Positive, Positive];
        let r = evaluate(&gold, &[Positive; 4]).unwrap();
        assert!(r.per_class[2].f1 > 0.0);
        assert_eq!(r.per_class[0].f1, 0.0);
        assert_eq!(r.per_class[1].f1, 0.0);
        assert!((r.per_class[2].f1 - 2.0 * 0.5 / 1.5).abs() < 1e-12);
    }

    #[test]
    fn empty_matrix_rejected() {
        assert!(report(&ConfusionMatrix::default()).is_err());
    }

    #[test]
    fn rendered_table_has_every_class() {
        let r = evaluate(&[Negative, Positive], &[Negative, Neutral]).unwrap();
        let text = render_report(&r);
        for s in Sentiment::ALL {
            assert!(text.contains(s.as_str()));
        }
        assert!(text.contains("macro avg f1"));
    }
}
