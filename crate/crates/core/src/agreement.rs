//! Cohen's kappa agreement between two label sequences, significance,
//! interpretation bands, and multi-run aggregation.

use std::collections::HashMap;
use std::f64::consts::SQRT_2;

use serde::{Deserialize, Serialize};
use statrs::function::erf::erfc;

use crate::error::{Error, Result};

/// Qualitative interpretation bands for kappa, after McHugh. Values are
/// rounded half-up to two decimals before banding; each band's upper
/// boundary is closed.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum Band {
    /// kappa <= 0.20
    None,
    /// 0.21 ..= 0.39
    Minimal,
    /// 0.40 ..= 0.59
    Weak,
    /// 0.60 ..= 0.79
    Moderate,
    /// 0.80 ..= 0.90
    Strong,
    /// > 0.90
    AlmostPerfect,
}

impl std::fmt::Display for Band {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let name = match self {
            Band::None => "NONE",
            Band::Minimal => "MINIMAL",
            Band::Weak => "WEAK",
            Band::Moderate => "MODERATE",
            Band::Strong => "STRONG",
            Band::AlmostPerfect => "ALMOST_PERFECT",
        };
        write!(f, "{name}")
    }
}

/// Maps a kappa value to its interpretation band.
pub fn interpret(kappa: f64) -> Result<Band> {
    if !kappa.is_finite() || kappa.abs() > 1.0 + 1e-9 {
        return Err(Error::InvalidInput(format!(
            "kappa {kappa} outside [-1, 1]"
        )));
    }
    let hundredths = (kappa.clamp(-1.0, 1.0) * 100.0).round() as i64;
    Ok(match hundredths {
        i64::MIN..=20 => Band::None,
        21..=39 => Band::Minimal,
        40..=59 => Band::Weak,
        60..=79 => Band::Moderate,
        80..=90 => Band::Strong,
        _ => Band::AlmostPerfect,
    })
}

/// How the kappa p-value is computed.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum PValueMethod {
    /// Two-sided asymptotic z-test of H0: kappa = 0 with
    /// SE0 = sqrt(p_o (1 - p_o)) / ((1 - p_e) sqrt(n)).
    #[default]
    AsymptoticZ,
    /// Exact two-sided permutation test: the fraction of all n!
    /// reorderings of `b` whose |kappa| reaches the observed |kappa|.
    /// Only practical for tiny sequences; capped at n <= 10.
    ExactPermutation,
}

/// Agreement report for one pair of label sequences.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct KappaReport {
    pub kappa: f64,
    /// Observed agreement fraction.
    pub p_observed: f64,
    /// Chance agreement from the marginals.
    pub p_expected: f64,
    pub p_value: f64,
    pub n: usize,
    /// Label order for the confusion matrix axes.
    pub labels: Vec<String>,
    /// `confusion[i][j]` counts positions with a = labels[i], b = labels[j].
    pub confusion: Vec<Vec<u64>>,
    pub band: Band,
}

impl KappaReport {
    /// Plain-text rendering: headline numbers plus the confusion matrix.
    pub fn to_text_table(&self) -> String {
        let mut out = String::new();
        out.push_str(&format!(
            "kappa = {:.4}  band = {}  p_o = {:.4}  p_e = {:.4}  p = {:.4}  n = {}\n",
            self.kappa, self.band, self.p_observed, self.p_expected, self.p_value, self.n
        ));
        let width = self
            .labels
            .iter()
            .map(|l| l.len())
            .max()
            .unwrap_or(1)
            .max(6);
        out.push_str(&format!("{:>width$} |", "a \\ b"));
        for label in &self.labels {
            out.push_str(&format!(" {label:>width$}"));
        }
        out.push('\n');
        for (i, label) in self.labels.iter().enumerate() {
            out.push_str(&format!("{label:>width$} |"));
            for j in 0..self.labels.len() {
                out.push_str(&format!(" {:>width$}", self.confusion[i][j]));
            }
            out.push('\n');
        }
        out
    }
}

fn label_indices<'a>(
    seq: &'a [String],
    index: &HashMap<&str, usize>,
    side: &str,
) -> Result<Vec<usize>> {
    seq.iter()
        .map(|label| {
            index.get(label.as_str()).copied().ok_or_else(|| {
                Error::InvalidInput(format!("{side} label '{label}' not in label set"))
            })
        })
        .collect()
}

fn kappa_from_confusion(confusion: &[Vec<u64>], n: usize) -> Result<(f64, f64, f64)> {
    let k = confusion.len();
    let diag: u64 = (0..k).map(|i| confusion[i][i]).sum();
    let p_observed = diag as f64 / n as f64;
    let mut p_expected = 0.0;
    for c in 0..k {
        let row: u64 = confusion[c].iter().sum();
        let col: u64 = (0..k).map(|i| confusion[i][c]).sum();
        p_expected += (row as f64 / n as f64) * (col as f64 / n as f64);
    }
    if p_expected >= 1.0 {
        return Err(Error::KappaUndefined);
    }
    let kappa = (p_observed - p_expected) / (1.0 - p_expected);
    Ok((kappa, p_observed, p_expected))
}

fn asymptotic_p_value(kappa: f64, p_observed: f64, p_expected: f64, n: usize) -> f64 {
    let se0 = (p_observed * (1.0 - p_observed)).sqrt() / ((1.0 - p_expected) * (n as f64).sqrt());
    if se0 == 0.0 {
        // Degenerate observed agreement (all equal or all different).
        return if kappa == 0.0 { 1.0 } else { 0.0 };
    }
    let z = (kappa / se0).abs();
    (erfc(z / SQRT_2)).clamp(0.0, 1.0)
}

fn permutation_p_value(a_idx: &[usize], b_idx: &[usize], k: usize, observed: f64) -> Result<f64> {
    let n = a_idx.len();
    if n > 10 {
        return Err(Error::InvalidInput(format!(
            "exact permutation p-value is limited to n <= 10, got {n}"
        )));
    }
    let mut perm: Vec<usize> = b_idx.to_vec();
    let mut hits = 0u64;
    let mut total = 0u64;
    // Heap's algorithm, iterative.
    let mut counters = vec![0usize; n];
    let mut eval = |perm: &[usize]| -> Result<()> {
        let mut confusion = vec![vec![0u64; k]; k];
        for (&ai, &bi) in a_idx.iter().zip(perm) {
            confusion[ai][bi] += 1;
        }
        let (kappa, _, _) = kappa_from_confusion(&confusion, n)?;
        total += 1;
        if kappa.abs() >= observed.abs() - 1e-12 {
            hits += 1;
        }
        Ok(())
    };
    eval(&perm)?;
    let mut i = 0;
    while i < n {
        if counters[i] < i {
            if i % 2 == 0 {
                perm.swap(0, i);
            } else {
                perm.swap(counters[i], i);
            }
            eval(&perm)?;
            counters[i] += 1;
            i = 0;
        } else {
            counters[i] = 0;
            i += 1;
        }
    }
    Ok(hits as f64 / total as f64)
}

/// Cohen's kappa with the default asymptotic p-value.
pub fn cohen_kappa(a: &[String], b: &[String], label_set: &[String]) -> Result<KappaReport> {
    cohen_kappa_with(a, b, label_set, PValueMethod::AsymptoticZ)
}

/// Cohen's kappa with an explicit p-value method.
pub fn cohen_kappa_with(
    a: &[String],
    b: &[String],
    label_set: &[String],
    method: PValueMethod,
) -> Result<KappaReport> {
    if a.len() != b.len() {
        return Err(Error::InvalidInput(format!(
            "sequence lengths differ: {} vs {}",
            a.len(),
            b.len()
        )));
    }
    if a.len() < 2 {
        return Err(Error::InvalidInput(format!(
            "kappa needs at least 2 rated items, got {}",
            a.len()
        )));
    }
    let index: HashMap<&str, usize> = label_set
        .iter()
        .enumerate()
        .map(|(i, l)| (l.as_str(), i))
        .collect();
    let a_idx = label_indices(a, &index, "first")?;
    let b_idx = label_indices(b, &index, "second")?;
    let k = label_set.len();
    let n = a.len();
    let mut confusion = vec![vec![0u64; k]; k];
    for (&ai, &bi) in a_idx.iter().zip(&b_idx) {
        confusion[ai][bi] += 1;
    }
    let (kappa, p_observed, p_expected) = kappa_from_confusion(&confusion, n)?;
    let p_value = match method {
        PValueMethod::AsymptoticZ => asymptotic_p_value(kappa, p_observed, p_expected, n),
        PValueMethod::ExactPermutation => permutation_p_value(&a_idx, &b_idx, k, kappa)?,
    };
    Ok(KappaReport {
        kappa,
        p_observed,
        p_expected,
        p_value,
        n,
        labels: label_set.to_vec(),
        confusion,
        band: interpret(kappa)?,
    })
}

/// Mean and standard error over repeated-run kappas.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MultiRunSummary {
    pub per_run_kappa: Vec<f64>,
    pub mean: f64,
    /// Sample standard deviation over sqrt(run count).
    pub standard_error: f64,
}

/// Aggregates per-run kappas; needs at least two runs.
pub fn summarize_runs(kappas: &[f64]) -> Result<MultiRunSummary> {
    if kappas.len() < 2 {
        return Err(Error::InvalidInput(format!(
            "run summary needs at least 2 runs, got {}",
            kappas.len()
        )));
    }
    let n = kappas.len() as f64;
    let mean = kappas.iter().sum::<f64>() / n;
    let variance = kappas.iter().map(|k| (k - mean).powi(2)).sum::<f64>() / (n - 1.0);
    Ok(MultiRunSummary {
        per_run_kappa: kappas.to_vec(),
        mean,
        standard_error: variance.sqrt() / n.sqrt(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    fn labels(names: &[&str]) -> Vec<String> {
        names.iter().map(|s| s.to_string()).collect()
    }

    fn seq(pattern: &str) -> Vec<String> {
        pattern.chars().map(|c| c.to_string()).collect()
    }

    #[test]
    fn perfect_agreement_is_one() {
        let a = seq("ABABAB");
        let report = cohen_kappa(&a, &a, &labels(&["A", "B"])).unwrap();
        assert_eq!(report.kappa, 1.0);
        assert_eq!(report.band, Band::AlmostPerfect);
        assert_eq!(report.p_value, 0.0);
    }

    #[test]
    fn chance_level_agreement_is_zero() {
        // 50/50 marginals on both sides with p_o = 0.5.
        let a = seq("AABB");
        let b = seq("ABAB");
        let report = cohen_kappa(&a, &b, &labels(&["A", "B"])).unwrap();
        assert_eq!(report.kappa, 0.0);
        assert_eq!(report.p_expected, 0.5);
    }

    #[test]
    fn hand_evaluated_confusion_matrix() {
        // Confusion {AA:20, AB:5, BA:10, BB:15}: p_o = 35/50,
        // p_e = (25*30 + 25*20)/2500 = 0.5, kappa = 0.2/0.5 = 0.4.
        let mut a = Vec::new();
        let mut b = Vec::new();
        for (ai, bi, count) in [("A", "A", 20), ("A", "B", 5), ("B", "A", 10), ("B", "B", 15)] {
            for _ in 0..count {
                a.push(ai.to_string());
                b.push(bi.to_string());
            }
        }
        let report = cohen_kappa(&a, &b, &labels(&["A", "B"])).unwrap();
        let expected = (0.7 - 0.5) / (1.0 - 0.5);
        assert_abs_diff_eq!(report.kappa, expected, epsilon = 1e-12);
        assert_eq!(report.confusion, vec![vec![20, 5], vec![10, 15]]);
        assert!(report.p_value < 0.05, "p = {}", report.p_value);
    }

    #[test]
    fn degenerate_and_malformed_inputs_error() {
        let a = seq("AAAA");
        assert!(matches!(
            cohen_kappa(&a, &a, &labels(&["A", "B"])),
            Err(Error::KappaUndefined)
        ));
        assert!(cohen_kappa(&seq("AB"), &seq("ABA"), &labels(&["A", "B"])).is_err());
        assert!(cohen_kappa(&seq("A"), &seq("A"), &labels(&["A", "B"])).is_err());
        assert!(cohen_kappa(&seq("AX"), &seq("AB"), &labels(&["A", "B"])).is_err());
    }

    #[test]
    fn paper_band_assignments() {
        assert_eq!(interpret(0.73).unwrap(), Band::Moderate);
        assert_eq!(interpret(0.85).unwrap(), Band::Strong);
        assert_eq!(interpret(0.55).unwrap(), Band::Weak);
        assert_eq!(interpret(0.30).unwrap(), Band::Minimal);
        assert_eq!(interpret(0.20).unwrap(), Band::None);
        assert_eq!(interpret(0.205).unwrap(), Band::Minimal);
        assert_eq!(interpret(-0.4).unwrap(), Band::None);
        assert_eq!(interpret(0.95).unwrap(), Band::AlmostPerfect);
        assert!(interpret(1.2).is_err());
        assert!(interpret(f64::NAN).is_err());
    }

    #[test]
    fn run_summaries() {
        let s = summarize_runs(&[0.8, 0.8, 0.8]).unwrap();
        assert_eq!((s.mean, s.standard_error), (0.8, 0.0));
        let s = summarize_runs(&[0.7, 0.9]).unwrap();
        assert_abs_diff_eq!(s.mean, 0.8, epsilon = 1e-12);
        assert_abs_diff_eq!(s.standard_error, 0.1, epsilon = 1e-12);
        assert!(summarize_runs(&[0.5]).is_err());
    }

    #[test]
    fn symmetry_and_renaming_are_exact() {
        let a = seq("AABCBCAB");
        let b = seq("ABCCBABA");
        let set = labels(&["A", "B", "C"]);
        let ab = cohen_kappa(&a, &b, &set).unwrap();
        let ba = cohen_kappa(&b, &a, &set).unwrap();
        assert_eq!(ab.kappa, ba.kappa);
        // Bijective renaming A->X, B->Y, C->Z with the label set renamed
        // in place keeps every statistic identical.
        let rename = |s: &[String]| -> Vec<String> {
            s.iter()
                .map(|l| match l.as_str() {
                    "A" => "X".to_string(),
                    "B" => "Y".to_string(),
                    _ => "Z".to_string(),
                })
                .collect()
        };
        let renamed =
            cohen_kappa(&rename(&a), &rename(&b), &labels(&["X", "Y", "Z"])).unwrap();
        assert_eq!(ab.kappa, renamed.kappa);
        assert_eq!(ab.p_value, renamed.p_value);
    }

    #[test]
    fn exact_permutation_p_value_on_tiny_input() {
        let a = seq("AABB");
        let report =
            cohen_kappa_with(&a, &a, &labels(&["A", "B"]), PValueMethod::ExactPermutation)
                .unwrap();
        // Two-sided: 4 of 24 index permutations reproduce AABB (kappa 1)
        // and 4 produce BBAA (kappa -1), so p = 8/24.
        assert_abs_diff_eq!(report.p_value, 8.0 / 24.0, epsilon = 1e-12);
        let long = seq("AABBABABABAB");
        assert!(cohen_kappa_with(
            &long,
            &long,
            &labels(&["A", "B"]),
            PValueMethod::ExactPermutation
        )
        .is_err());
    }

    #[test]
    fn report_roundtrips_through_json() {
        let a = seq("AABB");
        let b = seq("ABAB");
        let report = cohen_kappa(&a, &b, &labels(&["A", "B"])).unwrap();
        let json = serde_json::to_string(&report).unwrap();
        let back: KappaReport = serde_json::from_str(&json).unwrap();
        assert_eq!(report, back);
        assert!(json.contains("\"band\":\"NONE\""));
    }

    #[test]
    fn text_table_mentions_kappa_and_labels() {
        let a = seq("AABB");
        let b = seq("ABAB");
        let table = cohen_kappa(&a, &b, &labels(&["A", "B"]))
            .unwrap()
            .to_text_table();
        assert!(table.contains("kappa = 0.0000"));
        assert!(table.contains("band = NONE"));
    }
}
