//! Full prediction grid over the attribute cross-product, outcome flags,
//! rendering, and comparison against a reference grid.

use std::fmt;
use std::io::Read;
use std::str::FromStr;

use crate::engine::NBModel;
use crate::error::{Error, Result};
use crate::schema::{AttributeSchema, ClassLabelSet, Profile};

/// Maps divisions onto performer / at-risk flags.
#[derive(Debug, Clone, PartialEq)]
pub struct OutcomePolicy {
    pub performer_classes: Vec<String>,
    pub risk_threshold: f64,
    pub risk_class: String,
}

impl Default for OutcomePolicy {
    fn default() -> Self {
        OutcomePolicy {
            performer_classes: vec!["I".into(), "II".into()],
            risk_threshold: 0.25,
            risk_class: "FAIL".into(),
        }
    }
}

impl OutcomePolicy {
    pub fn validate(&self, classes: &ClassLabelSet) -> Result<()> {
        if self.performer_classes.is_empty() || self.performer_classes.len() >= classes.len() {
            return Err(Error::config("performer classes must be a non-empty proper subset of the classes"));
        }
        for c in &self.performer_classes {
            if classes.index_of(c).is_none() {
                return Err(Error::config(format!("unknown performer class '{c}'")));
            }
        }
        let mut sorted = self.performer_classes.clone();
        sorted.sort();
        sorted.dedup();
        if sorted.len() != self.performer_classes.len() {
            return Err(Error::config("duplicate performer class"));
        }
        if classes.index_of(&self.risk_class).is_none() {
            return Err(Error::config(format!("unknown risk class '{}'", self.risk_class)));
        }
        if !(0.0..=1.0).contains(&self.risk_threshold) {
            return Err(Error::config("risk threshold must lie in [0, 1]"));
        }
        Ok(())
    }

    /// `(performer, at_risk)` for one posterior.
    pub fn flags(&self, classes: &ClassLabelSet, predicted: &str, posterior: &[f64], defined: bool) -> (bool, bool) {
        if !defined {
            return (false, false);
        }
        let performer = self.performer_classes.iter().any(|c| c == predicted);
        let at_risk = classes
            .index_of(&self.risk_class)
            .is_some_and(|i| posterior[i] >= self.risk_threshold);
        (performer, at_risk)
    }
}

/// Cartesian product of all attribute values; the last attribute varies fastest.
pub fn enumerate_profiles(schema: &AttributeSchema) -> Vec<Profile> {
    let mut out = Vec::with_capacity(schema.cardinality());
    if schema.is_empty() || schema.attributes.iter().any(|a| a.values.is_empty()) {
        return out;
    }
    let mut odometer = vec![0usize; schema.len()];
    loop {
        out.push(
            schema
                .attributes
                .iter()
                .zip(&odometer)
                .map(|(a, &i)| (a.name.clone(), a.values[i].clone()))
                .collect(),
        );
        let mut pos = schema.len();
        loop {
            if pos == 0 {
                return out;
            }
            pos -= 1;
            odometer[pos] += 1;
            if odometer[pos] < schema.attributes[pos].values.len() {
                break;
            }
            odometer[pos] = 0;
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct GridRow {
    /// Attribute values in schema order.
    pub values: Vec<String>,
    pub predicted: String,
    pub probability: f64,
    pub full_posterior: Vec<f64>,
    pub tie: bool,
    pub performer: bool,
    pub at_risk: bool,
    pub defined: bool,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Grid {
    pub attributes: Vec<String>,
    pub classes: Vec<String>,
    pub rows: Vec<GridRow>,
}

impl Grid {
    pub fn profile(&self, row: &GridRow) -> Profile {
        self.attributes.iter().cloned().zip(row.values.iter().cloned()).collect()
    }

    pub fn find(&self, values: &[&str]) -> Option<&GridRow> {
        self.rows.iter().find(|r| r.values.iter().map(String::as_str).eq(values.iter().copied()))
    }
}

pub fn prediction_grid(model: &NBModel, outcome: &OutcomePolicy) -> Result<Grid> {
    outcome.validate(model.classes())?;
    let schema = model.schema();
    let rows = enumerate_profiles(schema)
        .iter()
        .map(|profile| {
            let post = model.posterior(profile).expect("enumerated profiles are valid");
            let (performer, at_risk) = outcome.flags(model.classes(), &post.predicted, &post.per_class, post.scores_defined);
            GridRow {
                values: profile.values_in(schema).map(str::to_string).collect(),
                predicted: post.predicted.clone(),
                probability: post.probability(),
                full_posterior: post.per_class,
                tie: post.tie,
                performer,
                at_risk,
                defined: post.scores_defined,
            }
        })
        .collect();
    Ok(Grid {
        attributes: schema.names().map(str::to_string).collect(),
        classes: model.classes().labels.clone(),
        rows,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum GridFormat {
    Text,
    Csv,
    Json,
}

impl FromStr for GridFormat {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "text" => Ok(GridFormat::Text),
            "csv" => Ok(GridFormat::Csv),
            "json" | "json-like" => Ok(GridFormat::Json),
            other => Err(Error::config(format!("unknown grid format '{other}'"))),
        }
    }
}

/// Six fractional digits; exact binary ties round to even.
pub fn format_probability(p: f64) -> String {
    format!("{p:.6}")
}

const UNDEFINED_LABEL: &str = "-";
const UNDEFINED_PROBABILITY: &str = "nan";

fn row_cells(row: &GridRow) -> (String, String) {
    if row.defined {
        (row.predicted.clone(), format_probability(row.probability))
    } else {
        (UNDEFINED_LABEL.into(), UNDEFINED_PROBABILITY.into())
    }
}

pub fn render_grid(grid: &Grid, format: GridFormat) -> String {
    match format {
        GridFormat::Csv => render_csv(grid),
        GridFormat::Text => render_text(grid),
        GridFormat::Json => render_json(grid),
    }
}

fn header(grid: &Grid) -> Vec<String> {
    let mut h = grid.attributes.clone();
    h.extend(["predicted", "probability", "performer", "at_risk"].map(String::from));
    h
}

fn table_cells(grid: &Grid) -> Vec<Vec<String>> {
    grid.rows
        .iter()
        .map(|r| {
            let (label, prob) = row_cells(r);
            let mut cells = r.values.clone();
            cells.extend([label, prob, r.performer.to_string(), r.at_risk.to_string()]);
            cells
        })
        .collect()
}

fn render_csv(grid: &Grid) -> String {
    let mut out = header(grid).join(",");
    out.push('\n');
    for cells in table_cells(grid) {
        out.push_str(&cells.join(","));
        out.push('\n');
    }
    out
}

fn render_text(grid: &Grid) -> String {
    let head = header(grid);
    let body = table_cells(grid);
    let widths: Vec<usize> = (0..head.len())
        .map(|i| body.iter().map(|r| r[i].len()).chain([head[i].len()]).max().unwrap_or(0))
        .collect();
    let line = |cells: &[String]| {
        let padded: Vec<String> = cells.iter().zip(&widths).map(|(c, w)| format!("{c:<w$}")).collect();
        let mut s = padded.join("  ").trim_end().to_string();
        s.push('\n');
        s
    };
    let mut out = line(&head);
    for cells in &body {
        out.push_str(&line(cells));
    }
    out
}

fn json_str(s: &str) -> String {
    serde_json::to_string(s).expect("strings serialize")
}

fn json_list(items: &[String]) -> String {
    let parts: Vec<String> = items.iter().map(|s| json_str(s)).collect();
    format!("[{}]", parts.join(", "))
}

// Hand-assembled so probabilities keep their fixed six-digit rendering.
fn render_json(grid: &Grid) -> String {
    let mut out = String::from("{\n");
    out.push_str(&format!("  \"attributes\": {},\n", json_list(&grid.attributes)));
    out.push_str(&format!("  \"classes\": {},\n", json_list(&grid.classes)));
    out.push_str("  \"rows\": [");
    for (i, r) in grid.rows.iter().enumerate() {
        out.push_str(if i == 0 { "\n" } else { ",\n" });
        let profile: Vec<String> = grid
            .attributes
            .iter()
            .zip(&r.values)
            .map(|(a, v)| format!("{}: {}", json_str(a), json_str(v)))
            .collect();
        let posterior: Vec<String> = grid
            .classes
            .iter()
            .zip(&r.full_posterior)
            .map(|(c, p)| format!("{}: {}", json_str(c), format_probability(*p)))
            .collect();
        let (predicted, probability) = if r.defined {
            (json_str(&r.predicted), format_probability(r.probability))
        } else {
            ("null".to_string(), "null".to_string())
        };
        out.push_str(&format!(
            "    {{\"profile\": {{{}}}, \"predicted\": {predicted}, \"probability\": {probability}, \
             \"posterior\": {{{}}}, \"tie\": {}, \"performer\": {}, \"at_risk\": {}, \"defined\": {}}}",
            profile.join(", "),
            posterior.join(", "),
            r.tie,
            r.performer,
            r.at_risk,
            r.defined
        ));
    }
    if !grid.rows.is_empty() {
        out.push_str("\n  ");
    }
    out.push_str("]\n}\n");
    out
}

#[derive(Debug, Clone, PartialEq)]
pub struct ReferenceRow {
    pub values: Vec<String>,
    pub predicted: String,
    pub probability: f64,
}

/// A grid read back from its comma-delimited rendering. Columns after
/// `probability` are ignored.
#[derive(Debug, Clone, PartialEq)]
pub struct ReferenceGrid {
    pub attributes: Vec<String>,
    pub rows: Vec<ReferenceRow>,
}

pub fn parse_reference_grid<R: Read>(mut input: R) -> Result<ReferenceGrid> {
    let mut text = String::new();
    input
        .read_to_string(&mut text)
        .map_err(|e| Error::parse(0, e.to_string()))?;
    let mut lines = text.lines().enumerate().map(|(i, l)| (i + 1, l.trim())).filter(|(_, l)| !l.is_empty());
    let (header_line, header) = lines.next().ok_or_else(|| Error::parse(1, "no header"))?;
    let header: Vec<&str> = header.split(',').map(str::trim).collect();
    let predicted_col = header
        .iter()
        .position(|h| *h == "predicted")
        .ok_or_else(|| Error::parse(header_line, "missing 'predicted' column"))?;
    if header.get(predicted_col + 1) != Some(&"probability") {
        return Err(Error::parse(header_line, "'probability' must follow 'predicted'"));
    }
    if predicted_col == 0 {
        return Err(Error::parse(header_line, "no attribute columns"));
    }
    let attributes: Vec<String> = header[..predicted_col].iter().map(|s| s.to_string()).collect();

    let mut rows = Vec::new();
    for (line, text) in lines {
        let fields: Vec<&str> = text.split(',').map(str::trim).collect();
        if fields.len() != header.len() {
            return Err(Error::parse(
                line,
                format!("row has {} fields, header has {}", fields.len(), header.len()),
            ));
        }
        let probability: f64 = fields[predicted_col + 1]
            .parse()
            .map_err(|_| Error::parse(line, format!("invalid probability '{}'", fields[predicted_col + 1])))?;
        rows.push(ReferenceRow {
            values: fields[..predicted_col].iter().map(|s| s.to_string()).collect(),
            predicted: fields[predicted_col].to_string(),
            probability,
        });
    }
    Ok(ReferenceGrid { attributes, rows })
}

#[derive(Debug, Clone, PartialEq)]
pub struct Discrepancy {
    /// Attribute values in the computed grid's attribute order.
    pub values: Vec<String>,
    pub expected_label: String,
    pub expected_probability: f64,
    pub actual_label: String,
    pub actual_probability: f64,
}

impl Discrepancy {
    pub fn label_mismatch(&self) -> bool {
        self.expected_label != self.actual_label
    }

    pub fn delta(&self) -> f64 {
        (self.actual_probability - self.expected_probability).abs()
    }
}

impl fmt::Display for Discrepancy {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "({}): expected {} {}, got {} {} (delta {:.6})",
            self.values.join(", "),
            self.expected_label,
            format_probability(self.expected_probability),
            self.actual_label,
            format_probability(self.actual_probability),
            self.delta()
        )
    }
}

pub const DEFAULT_TOLERANCE: f64 = 1e-5;

/// Slack for the representation error of a parsed six-digit decimal; without
/// it an exact binary tie such as 0.3359375 rendered as 0.335938 reads as a
/// gap just over 5e-7.
const REPRESENTATION_SLACK: f64 = 4.0 * f64::EPSILON;

/// Compares each reference row with the computed row for the same profile.
/// A row is discrepant on a label mismatch or a probability gap above `tolerance`.
pub fn diff_grid(grid: &Grid, reference: &ReferenceGrid, tolerance: f64) -> Result<Vec<Discrepancy>> {
    let mut column_of = Vec::with_capacity(grid.attributes.len());
    for a in &grid.attributes {
        let col = reference
            .attributes
            .iter()
            .position(|r| r == a)
            .ok_or_else(|| Error::input(format!("reference grid lacks attribute '{a}'")))?;
        column_of.push(col);
    }
    if reference.attributes.len() != grid.attributes.len() {
        return Err(Error::input("reference grid has attributes the model does not"));
    }

    let mut out = Vec::new();
    for r in &reference.rows {
        let values: Vec<&str> = column_of.iter().map(|&c| r.values[c].as_str()).collect();
        let row = grid
            .find(&values)
            .ok_or_else(|| Error::input(format!("reference profile ({}) is not in the grid", values.join(", "))))?;
        let (actual_label, actual_probability) = if row.defined {
            (row.predicted.clone(), row.probability)
        } else {
            (UNDEFINED_LABEL.to_string(), f64::NAN)
        };
        let d = Discrepancy {
            values: values.iter().map(|s| s.to_string()).collect(),
            expected_label: r.predicted.clone(),
            expected_probability: r.probability,
            actual_label,
            actual_probability,
        };
        // NaN deltas count as discrepant
        if d.label_mismatch() || !(d.delta() <= tolerance + REPRESENTATION_SLACK) {
            out.push(d);
        }
    }
    Ok(out)
}
