//! Multinomial naive Bayes over a selected n-gram vocabulary.

use std::collections::{BTreeMap, HashMap};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::features::FeatureVector;

/// Fitted multinomial NB. Likelihoods cover the selected vocabulary only;
/// out-of-vocabulary n-grams are ignored both at fit and predict time.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct NbModel {
    pub label_set: Vec<String>,
    /// Selected n-grams, sorted; columns of `log_likelihoods`.
    pub vocab: Vec<String>,
    /// ln P(label), aligned with `label_set`.
    pub log_priors: Vec<f64>,
    /// `log_likelihoods[label][vocab]` = ln P(ngram | label).
    pub log_likelihoods: Vec<Vec<f64>>,
    pub smoothing: f64,
}

/// Selects the union of the top `k` n-grams per label, ranked by total
/// count within that label's examples. Count ties break lexicographically;
/// the union is returned sorted, so the result is at most k * |labels|
/// long and fully deterministic.
pub fn select_top_k(vectors: &[FeatureVector], labels: &[String], k: usize) -> Result<Vec<String>> {
    if vectors.is_empty() {
        return Err(Error::InvalidInput("cannot select vocabulary from an empty dataset".into()));
    }
    if vectors.len() != labels.len() {
        return Err(Error::InvalidInput(format!(
            "{} vectors for {} labels",
            vectors.len(),
            labels.len()
        )));
    }
    if k == 0 {
        return Err(Error::InvalidInput("top-k selection needs k >= 1".into()));
    }
    let mut per_label: BTreeMap<&str, BTreeMap<&str, u64>> = BTreeMap::new();
    for (vector, label) in vectors.iter().zip(labels) {
        let counts = per_label.entry(label.as_str()).or_default();
        for (gram, count) in &vector.ngram_counts {
            *counts.entry(gram.as_str()).or_insert(0) += count;
        }
    }
    let mut union: BTreeMap<&str, ()> = BTreeMap::new();
    for counts in per_label.values() {
        let mut ranked: Vec<(&str, u64)> = counts.iter().map(|(g, c)| (*g, *c)).collect();
        ranked.sort_by(|(ga, ca), (gb, cb)| cb.cmp(ca).then(ga.cmp(gb)));
        for (gram, _) in ranked.into_iter().take(k) {
            union.insert(gram, ());
        }
    }
    Ok(union.into_keys().map(str::to_string).collect())
}

/// Fits a multinomial NB with Laplace-style smoothing:
/// P(label) = count(label) / N and
/// P(w | label) = (count(w, label) + s) / (tokens(label) + s |vocab|).
pub fn fit_nb(
    vectors: &[FeatureVector],
    labels: &[String],
    label_set: &[String],
    vocab: &[String],
    smoothing: f64,
) -> Result<NbModel> {
    if vectors.is_empty() || vectors.len() != labels.len() {
        return Err(Error::InvalidInput(format!(
            "{} vectors for {} labels",
            vectors.len(),
            labels.len()
        )));
    }
    if vocab.is_empty() {
        return Err(Error::InvalidInput("NB vocabulary must be non-empty".into()));
    }
    if smoothing <= 0.0 {
        return Err(Error::InvalidInput(format!(
            "smoothing must be positive, got {smoothing}"
        )));
    }
    let label_index: HashMap<&str, usize> = label_set
        .iter()
        .enumerate()
        .map(|(i, l)| (l.as_str(), i))
        .collect();
    let vocab_index: HashMap<&str, usize> = vocab
        .iter()
        .enumerate()
        .map(|(i, w)| (w.as_str(), i))
        .collect();
    let mut class_examples = vec![0u64; label_set.len()];
    let mut word_counts = vec![vec![0u64; vocab.len()]; label_set.len()];
    for (vector, label) in vectors.iter().zip(labels) {
        let &ci = label_index
            .get(label.as_str())
            .ok_or_else(|| Error::InvalidInput(format!("label '{label}' not in label set")))?;
        class_examples[ci] += 1;
        for (gram, count) in &vector.ngram_counts {
            if let Some(&wi) = vocab_index.get(gram.as_str()) {
                word_counts[ci][wi] += count;
            }
        }
    }
    if let Some(empty) = label_set
        .iter()
        .zip(&class_examples)
        .find(|(_, &c)| c == 0)
    {
        return Err(Error::InvalidInput(format!(
            "label '{}' has no training examples",
            empty.0
        )));
    }
    let n = vectors.len() as f64;
    let log_priors = class_examples
        .iter()
        .map(|&c| (c as f64 / n).ln())
        .collect();
    let log_likelihoods = word_counts
        .iter()
        .map(|counts| {
            let total: u64 = counts.iter().sum();
            let denom = total as f64 + smoothing * vocab.len() as f64;
            counts
                .iter()
                .map(|&c| ((c as f64 + smoothing) / denom).ln())
                .collect()
        })
        .collect();
    Ok(NbModel {
        label_set: label_set.to_vec(),
        vocab: vocab.to_vec(),
        log_priors,
        log_likelihoods,
        smoothing,
    })
}

impl NbModel {
    /// Per-label log posterior (unnormalized) for a feature vector.
    fn log_scores(&self, vector: &FeatureVector) -> Vec<f64> {
        let mut scores = self.log_priors.clone();
        for (wi, gram) in self.vocab.iter().enumerate() {
            if let Some(&count) = vector.ngram_counts.get(gram) {
                for (ci, score) in scores.iter_mut().enumerate() {
                    *score += count as f64 * self.log_likelihoods[ci][wi];
                }
            }
        }
        scores
    }

    /// Predicted label and normalized per-label posteriors. A vector with
    /// no in-vocabulary n-grams falls back to the prior argmax. Ties break
    /// in label-set order.
    pub fn predict(&self, vector: &FeatureVector) -> (String, Vec<f64>) {
        let scores = self.log_scores(vector);
        let max = scores.iter().copied().fold(f64::NEG_INFINITY, f64::max);
        let mut posteriors: Vec<f64> = scores.iter().map(|s| (s - max).exp()).collect();
        let total: f64 = posteriors.iter().sum();
        for p in &mut posteriors {
            *p /= total;
        }
        let mut best = 0;
        for (i, &s) in scores.iter().enumerate() {
            if s > scores[best] {
                best = i;
            }
        }
        (self.label_set[best].clone(), posteriors)
    }
}

/// Free-function form of [`NbModel::predict`].
pub fn predict_nb(model: &NbModel, vector: &FeatureVector) -> (String, Vec<f64>) {
    model.predict(vector)
}
