//! Held-out evaluation and seeded train/test splitting.

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::engine::NBModel;
use crate::error::{Error, Result};
use crate::ingest::RecordDataset;

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ConfusionMatrix {
    pub classes: Vec<String>,
    /// `counts[true][predicted]`, defined predictions only.
    pub counts: Vec<Vec<u64>>,
    pub undefined_count: u64,
}

impl ConfusionMatrix {
    pub fn total(&self) -> u64 {
        self.counts.iter().flatten().sum()
    }

    pub fn trace(&self) -> u64 {
        (0..self.counts.len()).map(|i| self.counts[i][i]).sum()
    }
}

/// `None` marks a 0/0 ratio.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ClassMetrics {
    pub class: String,
    pub precision: Option<f64>,
    pub recall: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct EvalReport {
    pub records: usize,
    pub accuracy: Option<f64>,
    pub confusion: ConfusionMatrix,
    pub per_class: Vec<ClassMetrics>,
}

impl EvalReport {
    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("report serializes");
        s.push('\n');
        s
    }
}

fn ratio(num: u64, den: u64) -> Option<f64> {
    (den > 0).then(|| num as f64 / den as f64)
}

pub fn evaluate(model: &NBModel, dataset: &RecordDataset) -> Result<EvalReport> {
    let mut model_attrs: Vec<&str> = model.schema().names().collect();
    let mut data_attrs: Vec<&str> = dataset.schema().names().collect();
    model_attrs.sort_unstable();
    data_attrs.sort_unstable();
    if model_attrs != data_attrs {
        return Err(Error::input(format!(
            "dataset attributes [{}] do not match model attributes [{}]",
            data_attrs.join(","),
            model_attrs.join(",")
        )));
    }

    let k = model.classes().len();
    let mut counts = vec![vec![0u64; k]; k];
    let mut undefined_count = 0;
    for (i, record) in dataset.records().iter().enumerate() {
        let label = dataset.label(record);
        let truth = model
            .classes()
            .index_of(label)
            .ok_or_else(|| Error::input(format!("record {i}: class '{label}' unknown to the model")))?;
        let post = model
            .posterior(&dataset.profile(record))
            .map_err(|e| Error::input(format!("record {i}: {e}")))?;
        if post.scores_defined {
            counts[truth][post.predicted_index] += 1;
        } else {
            undefined_count += 1;
        }
    }

    let confusion = ConfusionMatrix {
        classes: model.classes().labels.clone(),
        counts,
        undefined_count,
    };
    let per_class = (0..k)
        .map(|c| {
            let tp = confusion.counts[c][c];
            let predicted: u64 = confusion.counts.iter().map(|row| row[c]).sum();
            let actual: u64 = confusion.counts[c].iter().sum();
            ClassMetrics {
                class: confusion.classes[c].clone(),
                precision: ratio(tp, predicted),
                recall: ratio(tp, actual),
            }
        })
        .collect();
    Ok(EvalReport {
        records: dataset.len(),
        accuracy: ratio(confusion.trace(), confusion.total()),
        confusion,
        per_class,
    })
}

/// Shuffles with ChaCha8 seeded by `seed`; the first `ceil(n * fraction)`
/// records form the training part.
pub fn split(dataset: &RecordDataset, fraction: f64, seed: u64) -> Result<(RecordDataset, RecordDataset)> {
    if !(fraction > 0.0 && fraction < 1.0) {
        return Err(Error::config(format!("split fraction {fraction} must lie strictly between 0 and 1")));
    }
    let mut records = dataset.records().to_vec();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    records.shuffle(&mut rng);
    let n = records.len();
    // guard against products like 0.7 * 10 = 7.000000000000001
    let train_len = ((n as f64 * fraction) - 1e-9).ceil().clamp(0.0, n as f64) as usize;
    let test = records.split_off(train_len);
    Ok((dataset.with_records(records), dataset.with_records(test)))
}
