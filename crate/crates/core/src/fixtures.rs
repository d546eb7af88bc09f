//! Bundled reference data: the 600-student training counts and the published
//! prediction grid they are expected to produce.

use crate::engine::NBModel;
use crate::grid::{parse_reference_grid, ReferenceGrid};
use crate::ingest::parse_tables;
use crate::schema::{ClassTotalsPolicy, MarginalTableSet, SmoothingConfig};

/// Training counts: medium, caste and stream blocks over divisions I, II, III, FAIL.
pub const TABLE1_CSV: &str = include_str!("../data/table1.csv");

/// Published grid: predicted division and its probability for all 30 profiles.
pub const TABLE2_CSV: &str = include_str!("../data/table2.csv");

/// Attribute whose column sums normalize everything in the replication setting.
pub const REPLICATION_REFERENCE: &str = "stream";

pub fn table1() -> MarginalTableSet {
    parse_tables(TABLE1_CSV.as_bytes()).expect("bundled table fixture parses")
}

pub fn table2() -> ReferenceGrid {
    parse_reference_grid(TABLE2_CSV.as_bytes()).expect("bundled grid fixture parses")
}

pub fn replication_policy() -> ClassTotalsPolicy {
    ClassTotalsPolicy::reference(REPLICATION_REFERENCE)
}

/// Reference(stream), no smoothing, fitted on [`table1`].
pub fn replication_model() -> NBModel {
    NBModel::fit(&table1(), &replication_policy(), SmoothingConfig::none()).expect("replication fit succeeds")
}
