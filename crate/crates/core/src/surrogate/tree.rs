//! Depth-bounded CART-style decision tree over named numeric features.
//!
//! Greedy binary growth minimizing weighted Gini impurity. Candidate
//! thresholds are midpoints between sorted distinct feature values; a
//! node splits only when the best candidate strictly lowers impurity and
//! leaves at least `min_leaf` rows on each side. All tie-breaks are total
//! orders (feature name, then smaller threshold; leaf argmax by label-set
//! order), so fitting is bit-reproducible and invariant to row order.

use std::collections::{BTreeMap, HashMap};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "node", rename_all = "snake_case")]
pub enum Node {
    Split {
        feature: String,
        threshold: f64,
        /// Index of the subtree for rows with value <= threshold.
        left: usize,
        right: usize,
    },
    Leaf {
        /// Training-row class counts aligned with the label set.
        counts: Vec<u64>,
        /// Argmax of `counts`, ties broken by label-set order.
        label: String,
    },
}

/// Fitted decision tree. Node 0 is the root; children follow their parent
/// in pre-order.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TreeModel {
    pub label_set: Vec<String>,
    /// Feature universe the tree was fit on (sorted).
    pub feature_names: Vec<String>,
    pub nodes: Vec<Node>,
    pub max_depth: usize,
}

/// Gini impurity of an integer class histogram.
fn gini(counts: &[u64], total: u64) -> f64 {
    let mut sum_sq = 0.0;
    for &c in counts {
        let p = c as f64 / total as f64;
        sum_sq += p * p;
    }
    1.0 - sum_sq
}

fn weighted_gini(left: &[u64], n_left: u64, right: &[u64], n_right: u64) -> f64 {
    let n = (n_left + n_right) as f64;
    (n_left as f64 * gini(left, n_left) + n_right as f64 * gini(right, n_right)) / n
}

struct Builder<'a> {
    matrix: &'a [Vec<f64>],
    label_idx: &'a [usize],
    n_labels: usize,
    max_depth: usize,
    min_leaf: usize,
    nodes: Vec<Node>,
    label_set: &'a [String],
    feature_names: &'a [String],
}

struct BestSplit {
    feature: usize,
    threshold: f64,
    weighted: f64,
}

impl Builder<'_> {
    fn class_counts(&self, rows: &[usize]) -> Vec<u64> {
        let mut counts = vec![0u64; self.n_labels];
        for &r in rows {
            counts[self.label_idx[r]] += 1;
        }
        counts
    }

    fn leaf(&mut self, counts: Vec<u64>) -> usize {
        let mut best = 0;
        for (i, &c) in counts.iter().enumerate() {
            if c > counts[best] {
                best = i;
            }
        }
        let label = self.label_set[best].clone();
        self.nodes.push(Node::Leaf { counts, label });
        self.nodes.len() - 1
    }

    /// Scans features in name order and thresholds ascending, keeping the
    /// first strict minimum of the weighted impurity.
    fn best_split(&self, rows: &[usize], parent_counts: &[u64]) -> Option<BestSplit> {
        let n = rows.len() as u64;
        let mut best: Option<BestSplit> = None;
        for f in 0..self.feature_names.len() {
            let mut values: Vec<(f64, usize)> = rows
                .iter()
                .map(|&r| (self.matrix[r][f], self.label_idx[r]))
                .collect();
            values.sort_by(|a, b| a.0.total_cmp(&b.0));
            let mut left = vec![0u64; self.n_labels];
            let mut n_left = 0u64;
            let mut i = 0;
            while i < values.len() {
                // Consume the whole group of equal values.
                let v = values[i].0;
                while i < values.len() && values[i].0 == v {
                    left[values[i].1] += 1;
                    n_left += 1;
                    i += 1;
                }
                if i == values.len() {
                    break;
                }
                let n_right = n - n_left;
                if (n_left as usize) < self.min_leaf || (n_right as usize) < self.min_leaf {
                    continue;
                }
                let right: Vec<u64> = parent_counts
                    .iter()
                    .zip(&left)
                    .map(|(p, l)| p - l)
                    .collect();
                let weighted = weighted_gini(&left, n_left, &right, n_right);
                if best.as_ref().is_none_or(|b| weighted < b.weighted) {
                    best = Some(BestSplit {
                        feature: f,
                        threshold: (v + values[i].0) / 2.0,
                        weighted,
                    });
                }
            }
        }
        best
    }

    fn build(&mut self, rows: &[usize], depth: usize) -> usize {
        let counts = self.class_counts(rows);
        let parent_gini = gini(&counts, rows.len() as u64);
        if depth == self.max_depth || parent_gini == 0.0 {
            return self.leaf(counts);
        }
        let Some(split) = self.best_split(rows, &counts) else {
            return self.leaf(counts);
        };
        if split.weighted >= parent_gini {
            return self.leaf(counts);
        }
        let (left_rows, right_rows): (Vec<usize>, Vec<usize>) = rows
            .iter()
            .partition(|&&r| self.matrix[r][split.feature] <= split.threshold);
        let id = self.nodes.len();
        self.nodes.push(Node::Leaf {
            counts: Vec::new(),
            label: String::new(),
        });
        let left = self.build(&left_rows, depth + 1);
        let right = self.build(&right_rows, depth + 1);
        self.nodes[id] = Node::Split {
            feature: self.feature_names[split.feature].clone(),
            threshold: split.threshold,
            left,
            right,
        };
        id
    }
}

/// Fits a tree on named-feature rows. All rows must carry the same key
/// set; labels must come from `label_set`.
pub fn fit_tree(
    rows: &[BTreeMap<String, f64>],
    labels: &[String],
    label_set: &[String],
    max_depth: usize,
    min_leaf: usize,
) -> Result<TreeModel> {
    if rows.is_empty() || rows.len() != labels.len() {
        return Err(Error::InvalidInput(format!(
            "{} rows for {} labels",
            rows.len(),
            labels.len()
        )));
    }
    if max_depth == 0 || min_leaf == 0 {
        return Err(Error::InvalidInput(
            "tree fitting needs max_depth >= 1 and min_leaf >= 1".into(),
        ));
    }
    let feature_names: Vec<String> = rows[0].keys().cloned().collect();
    let matrix: Vec<Vec<f64>> = rows
        .iter()
        .map(|row| {
            if row.len() != feature_names.len()
                || !row.keys().zip(&feature_names).all(|(a, b)| a == b)
            {
                return Err(Error::InvalidInput(
                    "all rows must share an identical feature set".into(),
                ));
            }
            Ok(row.values().copied().collect())
        })
        .collect::<Result<_>>()?;
    let label_index: HashMap<&str, usize> = label_set
        .iter()
        .enumerate()
        .map(|(i, l)| (l.as_str(), i))
        .collect();
    let label_idx: Vec<usize> = labels
        .iter()
        .map(|l| {
            label_index
                .get(l.as_str())
                .copied()
                .ok_or_else(|| Error::InvalidInput(format!("label '{l}' not in label set")))
        })
        .collect::<Result<_>>()?;
    let mut builder = Builder {
        matrix: &matrix,
        label_idx: &label_idx,
        n_labels: label_set.len(),
        max_depth,
        min_leaf,
        nodes: Vec::new(),
        label_set,
        feature_names: &feature_names,
    };
    let rows_idx: Vec<usize> = (0..rows.len()).collect();
    builder.build(&rows_idx, 0);
    Ok(TreeModel {
        label_set: label_set.to_vec(),
        feature_names,
        nodes: builder.nodes,
        max_depth,
    })
}

impl TreeModel {
    /// Routes a named-feature row to its leaf label. Errors when the row
    /// lacks a feature some split tests.
    pub fn predict_row(&self, row: &BTreeMap<String, f64>) -> Result<&str> {
        let mut node = 0;
        loop {
            match &self.nodes[node] {
                Node::Leaf { label, .. } => return Ok(label),
                Node::Split {
                    feature,
                    threshold,
                    left,
                    right,
                } => {
                    let value = row
                        .get(feature)
                        .ok_or_else(|| Error::MissingFeature(feature.clone()))?;
                    node = if *value <= *threshold { *left } else { *right };
                }
            }
        }
    }

    /// Longest root-to-leaf path, counted in splits.
    pub fn depth(&self) -> usize {
        fn walk(nodes: &[Node], id: usize) -> usize {
            match &nodes[id] {
                Node::Leaf { .. } => 0,
                Node::Split { left, right, .. } => 1 + walk(nodes, *left).max(walk(nodes, *right)),
            }
        }
        walk(&self.nodes, 0)
    }

    /// Training accuracy recorded in the leaves: correct-by-majority over
    /// total rows.
    pub fn training_accuracy(&self) -> f64 {
        let mut correct = 0u64;
        let mut total = 0u64;
        for node in &self.nodes {
            if let Node::Leaf { counts, .. } = node {
                correct += counts.iter().max().copied().unwrap_or(0);
                total += counts.iter().sum::<u64>();
            }
        }
        correct as f64 / total as f64
    }

    /// Graphviz DOT rendering. Node ids follow the pre-order layout of
    /// `nodes`; split nodes read "feature <= threshold", leaves carry the
    /// predicted label and per-class counts.
    pub fn to_dot(&self) -> String {
        fn escape(s: &str) -> String {
            s.replace('\\', "\\\\").replace('"', "\\\"")
        }
        let mut out = String::from("digraph surrogate_tree {\n    node [shape=box];\n");
        for (id, node) in self.nodes.iter().enumerate() {
            match node {
                Node::Split {
                    feature, threshold, ..
                } => {
                    out.push_str(&format!(
                        "    n{id} [label=\"{} <= {}\"];\n",
                        escape(feature),
                        threshold
                    ));
                }
                Node::Leaf { counts, label } => {
                    let breakdown: Vec<String> = self
                        .label_set
                        .iter()
                        .zip(counts)
                        .map(|(l, c)| format!("{}={}", escape(l), c))
                        .collect();
                    out.push_str(&format!(
                        "    n{id} [label=\"{}\\n[{}]\"];\n",
                        escape(label),
                        breakdown.join(", ")
                    ));
                }
            }
        }
        for (id, node) in self.nodes.iter().enumerate() {
            if let Node::Split { left, right, .. } = node {
                out.push_str(&format!("    n{id} -> n{left} [label=\"yes\"];\n"));
                out.push_str(&format!("    n{id} -> n{right} [label=\"no\"];\n"));
            }
        }
        out.push_str("}\n");
        out
    }
}
