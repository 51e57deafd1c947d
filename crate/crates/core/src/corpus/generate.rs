//! Synthetic REL datasets with a planted surface-pattern shortcut.
//!
//! Each generated example is a small template sentence over two masked
//! entities and one relation trigger. The gold label encodes a semantic
//! property of the template — whether entity 1 is the agent of the
//! relation, i.e. appears before the trigger — which is invisible to
//! unigram counts and to all the distance-based surface features (they
//! are symmetric in the entity positions). The synthesized model
//! predictions instead follow a configurable surface shortcut, flipped
//! with a noise probability, so audits against the predictions can reach
//! high fidelity while audits against gold stay near chance.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use super::{Dataset, Example, ExampleBody, Task, TokenizedExample};
use crate::error::{Error, Result};
use crate::features::{default_relation_triggers, lss_any};

/// The surface rule the synthesized predictions follow.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum Shortcut {
    /// Predict positive iff the shortest entity/trigger span is shorter
    /// than `threshold` tokens.
    LssThreshold,
    /// Predict positive iff the entities are mentioned at least
    /// `threshold` times in total.
    EntityCount,
    /// No shortcut: predictions are uniform coin flips.
    None,
}

impl Shortcut {
    pub fn slug(&self) -> &'static str {
        match self {
            Shortcut::LssThreshold => "lss",
            Shortcut::EntityCount => "entity-count",
            Shortcut::None => "none",
        }
    }
}

/// Parameters of the planted shortcut.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PlantSpec {
    pub shortcut: Shortcut,
    /// Token threshold for [`Shortcut::LssThreshold`], mention cutoff for
    /// [`Shortcut::EntityCount`].
    pub threshold: usize,
    /// Probability that a prediction is flipped away from the shortcut rule.
    pub noise: f64,
    /// Probability that an example's gold label is positive.
    pub positive_rate: f64,
}

impl Default for PlantSpec {
    fn default() -> Self {
        PlantSpec {
            shortcut: Shortcut::LssThreshold,
            threshold: 10,
            noise: 0.1,
            positive_rate: 0.5,
        }
    }
}

impl PlantSpec {
    pub fn validate(&self) -> Result<()> {
        if !(0.0..=1.0).contains(&self.noise) {
            return Err(Error::InvalidInput(format!(
                "noise must be in [0,1], got {}",
                self.noise
            )));
        }
        if !(self.positive_rate > 0.0 && self.positive_rate < 1.0) {
            return Err(Error::InvalidInput(format!(
                "positive_rate must be in (0,1), got {}",
                self.positive_rate
            )));
        }
        match self.shortcut {
            Shortcut::LssThreshold if self.threshold < 4 => Err(Error::InvalidInput(
                "LSS_THRESHOLD shortcut needs threshold >= 4 tokens".into(),
            )),
            Shortcut::EntityCount if self.threshold < 3 => Err(Error::InvalidInput(
                "ENTITY_COUNT shortcut needs threshold >= 3 mentions".into(),
            )),
            _ => Ok(()),
        }
    }
}

pub const PLANTED_ENTITY1: &str = "GENE_A";
pub const PLANTED_ENTITY2: &str = "CHEMICAL_B";
pub const POSITIVE_LABEL: &str = "positive";
pub const NEGATIVE_LABEL: &str = "negative";

const FILLERS: [&str; 8] = [
    "the", "complex", "pathway", "protein", "signal", "response", "assay", "cells",
];
const SECOND_SENTENCE: [&str; 3] = ["sample", "tissue", "culture"];

/// Evaluates the planted rule on already-generated text. Exposed so tests
/// can re-derive predictions independently of the generator's bookkeeping.
pub fn shortcut_rule(te: &TokenizedExample, plant: &PlantSpec, triggers: &[String]) -> Option<bool> {
    match plant.shortcut {
        Shortcut::LssThreshold => Some(matches!(lss_any(te, triggers), Some(l) if l < plant.threshold)),
        Shortcut::EntityCount => {
            Some(te.e1_positions.len() + te.e2_positions.len() >= plant.threshold)
        }
        Shortcut::None => None,
    }
}

/// Generates a deterministic planted-pattern REL dataset.
///
/// Gold labels are direction coin flips realized in word order; predictions
/// follow [`shortcut_rule`] with probability `1 - noise` and are flipped
/// otherwise. Shortcut-consistent predictions draw confidences from
/// `[0.7, 1.0)`, flipped ones from `[0.3, 0.7)`.
pub fn generate_planted_dataset(n: usize, seed: u64, plant: &PlantSpec) -> Result<Dataset> {
    plant.validate()?;
    if n < 100 {
        return Err(Error::InvalidInput(format!(
            "planted dataset needs n >= 100, got {n}"
        )));
    }
    let triggers = default_relation_triggers();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut examples = Vec::with_capacity(n);
    for i in 0..n {
        let gold_positive = rng.random_bool(plant.positive_rate);
        let trigger = triggers[rng.random_range(0..triggers.len())].clone();
        let (first, second) = if gold_positive {
            (PLANTED_ENTITY1, PLANTED_ENTITY2)
        } else {
            (PLANTED_ENTITY2, PLANTED_ENTITY1)
        };

        // Span layout: first entity, trigger, filler x f, second entity,
        // so the shortest entity/trigger span has length f + 3.
        let rule_coin = rng.random_bool(0.5);
        let filler_len = match plant.shortcut {
            Shortcut::LssThreshold => {
                if rule_coin {
                    rng.random_range(0..=plant.threshold - 4)
                } else {
                    rng.random_range(plant.threshold - 3..=plant.threshold + 5)
                }
            }
            _ => rng.random_range(0..=6),
        };

        let mut tokens: Vec<String> = vec![first.to_string(), trigger.clone()];
        for _ in 0..filler_len {
            tokens.push(FILLERS[rng.random_range(0..FILLERS.len())].to_string());
        }
        tokens.push(second.to_string());

        // Entity repeats only drive the ENTITY_COUNT shortcut; they sit
        // after the second entity so the shortest span is untouched.
        if plant.shortcut == Shortcut::EntityCount {
            let repeats = if rule_coin {
                plant.threshold - 2 + rng.random_range(0..=1)
            } else {
                rng.random_range(0..=plant.threshold - 3)
            };
            for _ in 0..repeats {
                tokens.push("and".to_string());
                let entity = if rng.random_bool(0.5) { first } else { second };
                tokens.push(entity.to_string());
            }
        }
        tokens.push(".".to_string());
        if rng.random_bool(0.3) {
            let noun = SECOND_SENTENCE[rng.random_range(0..SECOND_SENTENCE.len())];
            tokens.extend(["the", noun, "was", "measured", "."].map(str::to_string));
        }
        let text = tokens.join(" ");

        let te = TokenizedExample::from_rel(&text, PLANTED_ENTITY1, PLANTED_ENTITY2);
        let rule_positive = shortcut_rule(&te, plant, &triggers)
            .unwrap_or_else(|| rng.random_bool(0.5));
        let flipped = plant.noise > 0.0 && rng.random_bool(plant.noise);
        let pred_positive = rule_positive != flipped;

        let u: f64 = rng.random();
        let confidence = if flipped { 0.3 + 0.4 * u } else { 0.7 + 0.3 * u };

        let label = |positive: bool| {
            if positive {
                POSITIVE_LABEL.to_string()
            } else {
                NEGATIVE_LABEL.to_string()
            }
        };
        examples.push(Example {
            id: format!("p{i:05}"),
            body: ExampleBody::Rel {
                text,
                entity1: PLANTED_ENTITY1.to_string(),
                entity2: PLANTED_ENTITY2.to_string(),
            },
            gold: label(gold_positive),
            pred: Some(label(pred_positive)),
            confidence: Some(confidence),
        });
    }
    Dataset::new(
        format!("planted-{}-n{}-seed{}", plant.shortcut.slug(), n, seed),
        Task::Rel,
        Some(vec![NEGATIVE_LABEL.to_string(), POSITIVE_LABEL.to_string()]),
        examples,
    )
}
