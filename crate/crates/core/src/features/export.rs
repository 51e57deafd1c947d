//! CSV export of extracted features.

use std::collections::BTreeSet;

use super::FeatureVector;
use crate::error::{Error, Result};

fn finish(writer: csv::Writer<Vec<u8>>) -> Result<String> {
    let bytes = writer
        .into_inner()
        .map_err(|e| Error::InvalidInput(format!("csv flush failed: {e}")))?;
    String::from_utf8(bytes).map_err(|e| Error::InvalidInput(format!("csv not utf-8: {e}")))
}

/// Renders the named features as CSV: an `id` column followed by one
/// column per feature name (sorted), rows in input order.
pub fn named_features_csv(ids: &[String], vectors: &[FeatureVector]) -> Result<String> {
    if ids.len() != vectors.len() {
        return Err(Error::InvalidInput(format!(
            "{} ids for {} feature vectors",
            ids.len(),
            vectors.len()
        )));
    }
    let columns: BTreeSet<&str> = vectors
        .iter()
        .flat_map(|v| v.named.keys().map(String::as_str))
        .collect();
    let mut writer = csv::Writer::from_writer(Vec::new());
    let mut header = vec!["id"];
    header.extend(columns.iter().copied());
    writer
        .write_record(&header)
        .map_err(|e| Error::InvalidInput(e.to_string()))?;
    for (id, vector) in ids.iter().zip(vectors) {
        let mut row = vec![id.clone()];
        for column in &columns {
            row.push(match vector.named.get(*column) {
                Some(value) => value.to_string(),
                None => String::new(),
            });
        }
        writer
            .write_record(&row)
            .map_err(|e| Error::InvalidInput(e.to_string()))?;
    }
    finish(writer)
}

/// Renders the sparse n-gram counts as `id,token,count` CSV.
pub fn ngram_counts_csv(ids: &[String], vectors: &[FeatureVector]) -> Result<String> {
    if ids.len() != vectors.len() {
        return Err(Error::InvalidInput(format!(
            "{} ids for {} feature vectors",
            ids.len(),
            vectors.len()
        )));
    }
    let mut writer = csv::Writer::from_writer(Vec::new());
    writer
        .write_record(["id", "token", "count"])
        .map_err(|e| Error::InvalidInput(e.to_string()))?;
    for (id, vector) in ids.iter().zip(vectors) {
        for (token, count) in &vector.ngram_counts {
            writer
                .write_record([id.as_str(), token.as_str(), &count.to_string()])
                .map_err(|e| Error::InvalidInput(e.to_string()))?;
        }
    }
    finish(writer)
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::collections::BTreeMap;

    fn vector(named: &[(&str, f64)], ngrams: &[(&str, u64)]) -> FeatureVector {
        FeatureVector {
            named: named.iter().map(|(k, v)| (k.to_string(), *v)).collect(),
            ngram_counts: ngrams.iter().map(|(k, v)| (k.to_string(), *v)).collect(),
        }
    }

    #[test]
    fn named_csv_has_id_and_sorted_columns() {
        let ids = vec!["a".to_string(), "b".to_string()];
        let vectors = vec![
            vector(&[("E1C", 20.0), ("SPC", 1.0)], &[]),
            vector(&[("E1C", 10.0), ("SPC", 0.5)], &[]),
        ];
        let csv = named_features_csv(&ids, &vectors).unwrap();
        let mut lines = csv.lines();
        assert_eq!(lines.next(), Some("id,E1C,SPC"));
        assert_eq!(lines.next(), Some("a,20,1"));
        assert_eq!(lines.next(), Some("b,10,0.5"));
    }

    #[test]
    fn ngram_csv_is_sparse_and_sorted() {
        let ids = vec!["a".to_string()];
        let vectors = vec![vector(&[], &[("interacts", 1), ("GENE_A", 2)])];
        let csv = ngram_counts_csv(&ids, &vectors).unwrap();
        assert_eq!(csv, "id,token,count\na,GENE_A,2\na,interacts,1\n");
    }

    #[test]
    fn length_mismatch_rejected() {
        let _ = BTreeMap::<String, f64>::new();
        assert!(named_features_csv(&["a".to_string()], &[]).is_err());
    }
}
