//! Accuracy, per-class F1, macro F1 and the three-class RMSE.
//!
//! Macro F1 averages the per-class F1 over the classes present in the gold
//! labels; a gold class the predictor never emits contributes 0. RMSE (three
//! class regime only) measures confidence against a reference that is 1 for
//! a correctly labeled fake/real item and 0 otherwise, unverified gold
//! included.

use serde::{Deserialize, Serialize};
use std::collections::BTreeMap;
use thiserror::Error;

use crate::dataset::Label;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Regime {
    TwoClass,
    ThreeClass,
}

impl Regime {
    fn allows(&self, label: Label) -> bool {
        match self {
            Regime::TwoClass => matches!(label, Label::Fake | Label::Real),
            Regime::ThreeClass => true,
        }
    }
}

#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
pub struct Metrics {
    pub accuracy: f64,
    pub macro_f1: f64,
    pub per_class_f1: BTreeMap<String, f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub rmse: Option<f64>,
}

#[derive(Debug, Error, PartialEq)]
pub enum MetricsError {
    #[error("{predictions} predictions for {gold} gold labels")]
    LengthMismatch { predictions: usize, gold: usize },
    #[error("label '{0}' is not valid in this regime")]
    UnknownLabel(Label),
    #[error("confidence {0} outside [0,1]")]
    BadConfidence(f64),
    #[error("no items to evaluate")]
    Empty,
}

/// Per-class F1 for integer class ids `0..n_classes`.
pub(crate) fn f1_by_class(pred: &[usize], gold: &[usize], n_classes: usize) -> Vec<f64> {
    let mut tp = vec![0usize; n_classes];
    let mut fp = vec![0usize; n_classes];
    let mut fneg = vec![0usize; n_classes];
    for (&p, &g) in pred.iter().zip(gold) {
        if p == g {
            tp[p] += 1;
        } else {
            fp[p] += 1;
            fneg[g] += 1;
        }
    }
    (0..n_classes)
        .map(|c| {
            let denom = 2 * tp[c] + fp[c] + fneg[c];
            if denom == 0 {
                0.0
            } else {
                2.0 * tp[c] as f64 / denom as f64
            }
        })
        .collect()
}

/// Macro F1 over the classes present in `gold`.
pub fn macro_f1_indices(pred: &[usize], gold: &[usize], n_classes: usize) -> f64 {
    let f1 = f1_by_class(pred, gold, n_classes);
    let present: Vec<usize> = (0..n_classes).filter(|c| gold.contains(c)).collect();
    if present.is_empty() {
        return 0.0;
    }
    present.iter().map(|&c| f1[c]).sum::<f64>() / present.len() as f64
}

/// Evaluate labeled predictions `(label, confidence)` against gold labels.
pub fn metrics(
    predictions: &[(Label, f64)],
    gold: &[Label],
    regime: Regime,
) -> Result<Metrics, MetricsError> {
    if predictions.len() != gold.len() {
        return Err(MetricsError::LengthMismatch {
            predictions: predictions.len(),
            gold: gold.len(),
        });
    }
    if gold.is_empty() {
        return Err(MetricsError::Empty);
    }
    for (label, confidence) in predictions {
        if !regime.allows(*label) {
            return Err(MetricsError::UnknownLabel(*label));
        }
        if !(0.0..=1.0).contains(confidence) {
            return Err(MetricsError::BadConfidence(*confidence));
        }
    }
    for label in gold {
        if !regime.allows(*label) {
            return Err(MetricsError::UnknownLabel(*label));
        }
    }

    let class_ids = |l: Label| match l {
        Label::Fake => 0usize,
        Label::Real => 1,
        Label::Unverified => 2,
    };
    let n_classes = match regime {
        Regime::TwoClass => 2,
        Regime::ThreeClass => 3,
    };
    let pred_ids: Vec<usize> = predictions.iter().map(|(l, _)| class_ids(*l)).collect();
    let gold_ids: Vec<usize> = gold.iter().map(|l| class_ids(*l)).collect();

    let correct = pred_ids.iter().zip(&gold_ids).filter(|(p, g)| p == g).count();
    let accuracy = correct as f64 / gold.len() as f64;

    let f1 = f1_by_class(&pred_ids, &gold_ids, n_classes);
    let names = [Label::Fake, Label::Real, Label::Unverified];
    let mut per_class_f1 = BTreeMap::new();
    for c in 0..n_classes {
        if gold_ids.contains(&c) || pred_ids.contains(&c) {
            per_class_f1.insert(names[c].as_str().to_string(), f1[c]);
        }
    }
    let macro_f1 = macro_f1_indices(&pred_ids, &gold_ids, n_classes);

    let rmse = match regime {
        Regime::TwoClass => None,
        Regime::ThreeClass => {
            let sq_sum: f64 = predictions
                .iter()
                .zip(gold)
                .map(|(&(pred, confidence), &g)| {
                    let reference = if matches!(g, Label::Fake | Label::Real) && pred == g {
                        1.0
                    } else {
                        0.0
                    };
                    let err = confidence - reference;
                    err * err
                })
                .sum();
            Some((sq_sum / gold.len() as f64).sqrt())
        }
    };

    Ok(Metrics {
        accuracy,
        macro_f1,
        per_class_f1,
        rmse,
    })
}
