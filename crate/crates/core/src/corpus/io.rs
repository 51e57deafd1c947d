//! JSONL dataset ingestion and export.
//!
//! One UTF-8 JSON record per line. REL records carry
//! `{"id", "text", "entity1", "entity2", "gold", "pred"?, "confidence"?}`,
//! NLI records `{"id", "premise", "hypothesis", "gold", "pred"?, "confidence"?}`.
//! An optional first-line header `{"labels": [...], "task": "REL"|"NLI"}`
//! declares the label set; otherwise it is inferred from the data.

use std::fs;
use std::io::{BufRead, BufReader};
use std::path::Path;

use serde::{Deserialize, Serialize};

use super::{Dataset, Example, ExampleBody, Task};
use crate::error::{Error, Result};

#[derive(Debug, Deserialize)]
struct HeaderRecord {
    labels: Option<Vec<String>>,
    task: Option<Task>,
}

#[derive(Debug, Serialize, Deserialize)]
struct RawRecord {
    id: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    text: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    entity1: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    entity2: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    premise: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    hypothesis: Option<String>,
    gold: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pred: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    confidence: Option<f64>,
}

fn required(field: Option<String>, name: &str, task: Task, line: usize) -> Result<String> {
    field.ok_or_else(|| Error::Parse {
        line,
        msg: format!("{task} record missing field '{name}'"),
    })
}

impl RawRecord {
    fn into_example(self, task: Task, line: usize) -> Result<Example> {
        let body = match task {
            Task::Rel => ExampleBody::Rel {
                text: required(self.text, "text", task, line)?,
                entity1: required(self.entity1, "entity1", task, line)?,
                entity2: required(self.entity2, "entity2", task, line)?,
            },
            Task::Nli => ExampleBody::Nli {
                premise: required(self.premise, "premise", task, line)?,
                hypothesis: required(self.hypothesis, "hypothesis", task, line)?,
            },
        };
        Ok(Example {
            id: self.id,
            body,
            gold: self.gold,
            pred: self.pred,
            confidence: self.confidence,
        })
    }

    fn from_example(ex: &Example) -> Self {
        let (text, entity1, entity2, premise, hypothesis) = match &ex.body {
            ExampleBody::Rel {
                text,
                entity1,
                entity2,
            } => (
                Some(text.clone()),
                Some(entity1.clone()),
                Some(entity2.clone()),
                None,
                None,
            ),
            ExampleBody::Nli {
                premise,
                hypothesis,
            } => (None, None, None, Some(premise.clone()), Some(hypothesis.clone())),
        };
        RawRecord {
            id: ex.id.clone(),
            text,
            entity1,
            entity2,
            premise,
            hypothesis,
            gold: ex.gold.clone(),
            pred: ex.pred.clone(),
            confidence: ex.confidence,
        }
    }
}

#[derive(Serialize)]
struct HeaderOut<'a> {
    labels: &'a [String],
    task: Task,
}

/// Reads a dataset from any buffered reader. `name` becomes the dataset
/// name. Errors name the offending line or example id.
pub fn read_dataset<R: BufRead>(reader: R, task: Task, name: &str) -> Result<Dataset> {
    let mut examples = Vec::new();
    let mut declared_labels: Option<Vec<String>> = None;
    for (idx, line) in reader.lines().enumerate() {
        let lineno = idx + 1;
        let line = line.map_err(|e| Error::io(name, e))?;
        let value: serde_json::Value = serde_json::from_str(&line).map_err(|e| Error::Parse {
            line: lineno,
            msg: e.to_string(),
        })?;
        let is_header = lineno == 1 && value.get("id").is_none();
        if is_header {
            let header: HeaderRecord =
                serde_json::from_value(value).map_err(|e| Error::Parse {
                    line: lineno,
                    msg: format!("invalid header record: {e}"),
                })?;
            if let Some(declared) = header.task {
                if declared != task {
                    return Err(Error::Parse {
                        line: lineno,
                        msg: format!("header declares task {declared}, expected {task}"),
                    });
                }
            }
            declared_labels = header.labels;
            continue;
        }
        let raw: RawRecord = serde_json::from_value(value).map_err(|e| Error::Parse {
            line: lineno,
            msg: e.to_string(),
        })?;
        examples.push(raw.into_example(task, lineno)?);
    }
    Dataset::new(name, task, declared_labels, examples)
}

/// Loads and validates a JSONL dataset. The dataset name is the file stem.
pub fn load_dataset(path: impl AsRef<Path>, task: Task) -> Result<Dataset> {
    let path = path.as_ref();
    let file = fs::File::open(path).map_err(|e| Error::io(path.display().to_string(), e))?;
    let name = path
        .file_stem()
        .map(|s| s.to_string_lossy().into_owned())
        .unwrap_or_else(|| "dataset".to_string());
    read_dataset(BufReader::new(file), task, &name)
}

/// Serializes a dataset to JSONL, header line first. Deterministic: equal
/// datasets produce byte-identical output.
pub fn write_dataset(ds: &Dataset) -> String {
    let mut out = String::new();
    let header = HeaderOut {
        labels: &ds.label_set,
        task: ds.task,
    };
    out.push_str(&serde_json::to_string(&header).expect("header serializes"));
    out.push('\n');
    for ex in &ds.examples {
        let raw = RawRecord::from_example(ex);
        out.push_str(&serde_json::to_string(&raw).expect("record serializes"));
        out.push('\n');
    }
    out
}

/// Writes [`write_dataset`] output to a file.
pub fn save_dataset(ds: &Dataset, path: impl AsRef<Path>) -> Result<()> {
    let path = path.as_ref();
    fs::write(path, write_dataset(ds)).map_err(|e| Error::io(path.display().to_string(), e))
}
