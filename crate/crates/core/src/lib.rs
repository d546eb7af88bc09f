//! Categorical naive Bayes for predicting student divisions from marginal
//! contingency tables.
//!
//! The pipeline is: load counts ([`ingest`]), resolve class totals and fit
//! ([`schema`], [`engine`]), then enumerate and render the full prediction
//! grid ([`grid`]) or score held-out records ([`eval`]).

pub mod engine;
pub mod error;
pub mod eval;
pub mod fixtures;
pub mod grid;
pub mod ingest;
pub mod schema;

pub use engine::{fit, ModelDocument, NBModel, PosteriorResult};
pub use error::{Error, Result};
pub use eval::{evaluate, split, ClassMetrics, ConfusionMatrix, EvalReport};
pub use grid::{
    diff_grid, enumerate_profiles, parse_reference_grid, prediction_grid, render_grid, Discrepancy, Grid,
    GridFormat, GridRow, OutcomePolicy, ReferenceGrid,
};
pub use ingest::{
    aggregate, audit_consistency, parse_class_totals, parse_records, parse_tables, write_tables, ConsistencyReport,
    Record, RecordDataset,
};
pub use schema::{
    resolve_class_totals, validate_schema, Attribute, AttributeSchema, ClassLabelSet, ClassTotals, ClassTotalsPolicy,
    MarginalTable, MarginalTableSet, Profile, SmoothingConfig, Violation,
};
