//! Random small datasets and models shared by the property and acceptance suites.
#![allow(dead_code)]

use divpredict_core::{
    aggregate, Attribute, AttributeSchema, ClassLabelSet, ClassTotalsPolicy, MarginalTable, MarginalTableSet,
    NBModel, Record, RecordDataset, SmoothingConfig,
};
use rand::Rng;

pub const MAX_ATTRIBUTES: usize = 4;
pub const MAX_VALUES: usize = 5;
pub const MAX_CLASSES: usize = 5;
pub const MAX_COUNT: u64 = 50;

pub fn random_schema<R: Rng>(rng: &mut R) -> (AttributeSchema, ClassLabelSet) {
    let n_attrs = rng.gen_range(1..=MAX_ATTRIBUTES);
    let attrs = (0..n_attrs)
        .map(|a| {
            let n_values = rng.gen_range(1..=MAX_VALUES);
            Attribute::new(format!("a{a}"), (0..n_values).map(|v| format!("v{a}_{v}")))
        })
        .collect();
    let n_classes = rng.gen_range(1..=MAX_CLASSES);
    (
        AttributeSchema::new(attrs),
        ClassLabelSet::new((0..n_classes).map(|c| format!("c{c}"))),
    )
}

pub fn random_dataset<R: Rng>(rng: &mut R, max_records: usize) -> RecordDataset {
    let (schema, classes) = random_schema(rng);
    let n = rng.gen_range(0..=max_records);
    let records = (0..n)
        .map(|_| Record {
            values: schema.attributes.iter().map(|a| rng.gen_range(0..a.values.len())).collect(),
            class: rng.gen_range(0..classes.len()),
        })
        .collect();
    RecordDataset::new(schema, classes, records).unwrap()
}

/// Independent tables with every column sum positive.
pub fn random_tables<R: Rng>(rng: &mut R) -> MarginalTableSet {
    let (schema, classes) = random_schema(rng);
    let k = classes.len();
    let tables = schema
        .attributes
        .iter()
        .map(|a| {
            let mut counts: Vec<Vec<u64>> = (0..a.values.len())
                .map(|_| (0..k).map(|_| if rng.gen_bool(0.2) { 0 } else { rng.gen_range(0..=MAX_COUNT) }).collect())
                .collect();
            for c in 0..k {
                if counts.iter().all(|row| row[c] == 0) {
                    let v = rng.gen_range(0..a.values.len());
                    counts[v][c] = rng.gen_range(1..=MAX_COUNT);
                }
            }
            MarginalTable {
                attribute: a.name.clone(),
                counts,
            }
        })
        .collect();
    MarginalTableSet::new(schema, classes, tables).unwrap()
}

fn random_smoothing<R: Rng>(rng: &mut R) -> SmoothingConfig {
    match rng.gen_range(0..4) {
        0 => SmoothingConfig::integer(1),
        1 => SmoothingConfig::new(1, 2).unwrap(),
        _ => SmoothingConfig::none(),
    }
}

/// A fitted model from either independent tables (per-attribute policy) or
/// aggregated records (any policy).
pub fn random_model<R: Rng>(rng: &mut R) -> NBModel {
    loop {
        let smoothing = random_smoothing(rng);
        let (tables, policy) = if rng.gen_bool(0.5) {
            let t = random_tables(rng);
            let src = t.schema().attributes[rng.gen_range(0..t.schema().len())].name.clone();
            (t, ClassTotalsPolicy::per_attribute(src))
        } else {
            let d = random_dataset(rng, 200);
            let t = aggregate(&d);
            let name = t.schema().attributes[rng.gen_range(0..t.schema().len())].name.clone();
            let policy = match rng.gen_range(0..3) {
                0 => ClassTotalsPolicy::per_attribute(name),
                1 => ClassTotalsPolicy::reference(name),
                _ => ClassTotalsPolicy::explicit(t.tables()[0].column_sums(t.classes().len())),
            };
            (t, policy)
        };
        if let Ok(m) = NBModel::fit(&tables, &policy, smoothing) {
            return m;
        }
    }
}

/// `counts[attribute][value][class]` by scanning name-keyed profiles, without
/// touching record indices.
pub fn naive_counts(dataset: &RecordDataset) -> Vec<Vec<Vec<u64>>> {
    let schema = dataset.schema();
    let mut out = Vec::new();
    for attr in &schema.attributes {
        let mut block = Vec::new();
        for value in &attr.values {
            let mut row = Vec::new();
            for label in &dataset.classes().labels {
                let mut n = 0;
                for r in dataset.records() {
                    if dataset.profile(r).get(&attr.name) == Some(value.as_str()) && dataset.label(r) == label {
                        n += 1;
                    }
                }
                row.push(n);
            }
            block.push(row);
        }
        out.push(block);
    }
    out
}

/// Counts predictions equal to the true label, skipping undefined ones.
pub fn naive_accuracy(model: &NBModel, dataset: &RecordDataset) -> Option<f64> {
    let mut right = 0usize;
    let mut defined = 0usize;
    for r in dataset.records() {
        if let Some((label, _)) = model.predict(&dataset.profile(r)).unwrap() {
            defined += 1;
            if label == dataset.label(r) {
                right += 1;
            }
        }
    }
    (defined > 0).then(|| right as f64 / defined as f64)
}
