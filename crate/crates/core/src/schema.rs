//! Categorical data model: attributes, class labels, profiles, marginal count
//! tables and the policies that turn them into probabilities.

use std::collections::{BTreeMap, HashSet};
use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_rational::{BigRational, Ratio};
use num_traits::Zero;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Attribute {
    pub name: String,
    pub values: Vec<String>,
}

impl Attribute {
    pub fn new<S: Into<String>>(name: impl Into<String>, values: impl IntoIterator<Item = S>) -> Self {
        Attribute {
            name: name.into(),
            values: values.into_iter().map(Into::into).collect(),
        }
    }

    pub fn value_index(&self, value: &str) -> Option<usize> {
        self.values.iter().position(|v| v == value)
    }
}

/// Ordered categorical feature space.
#[derive(Debug, Clone, PartialEq, Eq, Default, Serialize, Deserialize)]
pub struct AttributeSchema {
    pub attributes: Vec<Attribute>,
}

impl AttributeSchema {
    pub fn new(attributes: Vec<Attribute>) -> Self {
        AttributeSchema { attributes }
    }

    pub fn len(&self) -> usize {
        self.attributes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.attributes.is_empty()
    }

    pub fn attribute_index(&self, name: &str) -> Option<usize> {
        self.attributes.iter().position(|a| a.name == name)
    }

    pub fn attribute(&self, name: &str) -> Option<&Attribute> {
        self.attributes.iter().find(|a| a.name == name)
    }

    pub fn names(&self) -> impl Iterator<Item = &str> {
        self.attributes.iter().map(|a| a.name.as_str())
    }

    /// Number of full profiles, i.e. the product of value-list lengths.
    pub fn cardinality(&self) -> usize {
        self.attributes.iter().map(|a| a.values.len()).product()
    }
}

/// Ordered outcome classes. Declaration order is the tie-break order.
#[derive(Debug, Clone, PartialEq, Eq, Default, Serialize, Deserialize)]
pub struct ClassLabelSet {
    pub labels: Vec<String>,
}

impl ClassLabelSet {
    pub fn new<S: Into<String>>(labels: impl IntoIterator<Item = S>) -> Self {
        ClassLabelSet {
            labels: labels.into_iter().map(Into::into).collect(),
        }
    }

    pub fn len(&self) -> usize {
        self.labels.len()
    }

    pub fn is_empty(&self) -> bool {
        self.labels.is_empty()
    }

    pub fn index_of(&self, label: &str) -> Option<usize> {
        self.labels.iter().position(|l| l == label)
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Violation {
    NoAttributes,
    DuplicateAttribute(String),
    NoValues(String),
    DuplicateValue { attribute: String, value: String },
    NoClasses,
    DuplicateClass(String),
    BadIdentifier(String),
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Violation::NoAttributes => write!(f, "no attributes"),
            Violation::DuplicateAttribute(a) => write!(f, "duplicate attribute '{a}'"),
            Violation::NoValues(a) => write!(f, "attribute '{a}' has no values"),
            Violation::DuplicateValue { attribute, value } => {
                write!(f, "duplicate value '{value}' in attribute '{attribute}'")
            }
            Violation::NoClasses => write!(f, "no class labels"),
            Violation::DuplicateClass(c) => write!(f, "duplicate class label '{c}'"),
            Violation::BadIdentifier(s) => write!(f, "invalid identifier {s:?}"),
        }
    }
}

/// Identifiers must be non-empty, already trimmed, and free of the field
/// delimiter and line breaks.
pub fn is_valid_identifier(s: &str) -> bool {
    !s.is_empty() && s.trim() == s && !s.contains([',', '\n', '\r'])
}

/// Collects every violation instead of stopping at the first.
pub fn validate_schema(schema: &AttributeSchema, classes: &ClassLabelSet) -> Vec<Violation> {
    let mut out = Vec::new();
    if schema.attributes.is_empty() {
        out.push(Violation::NoAttributes);
    }
    let mut seen_attrs = HashSet::new();
    for attr in &schema.attributes {
        if !is_valid_identifier(&attr.name) {
            out.push(Violation::BadIdentifier(attr.name.clone()));
        }
        if !seen_attrs.insert(attr.name.as_str()) {
            out.push(Violation::DuplicateAttribute(attr.name.clone()));
        }
        if attr.values.is_empty() {
            out.push(Violation::NoValues(attr.name.clone()));
        }
        let mut seen_values = HashSet::new();
        for v in &attr.values {
            if !is_valid_identifier(v) {
                out.push(Violation::BadIdentifier(v.clone()));
            }
            if !seen_values.insert(v.as_str()) {
                out.push(Violation::DuplicateValue {
                    attribute: attr.name.clone(),
                    value: v.clone(),
                });
            }
        }
    }
    if classes.labels.is_empty() {
        out.push(Violation::NoClasses);
    }
    let mut seen_classes = HashSet::new();
    for c in &classes.labels {
        if !is_valid_identifier(c) {
            out.push(Violation::BadIdentifier(c.clone()));
        }
        if !seen_classes.insert(c.as_str()) {
            out.push(Violation::DuplicateClass(c.clone()));
        }
    }
    out
}

pub(crate) fn ensure_valid(schema: &AttributeSchema, classes: &ClassLabelSet) -> Result<()> {
    let violations = validate_schema(schema, classes);
    if violations.is_empty() {
        Ok(())
    } else {
        let msg: Vec<String> = violations.iter().map(ToString::to_string).collect();
        Err(Error::config(msg.join("; ")))
    }
}

/// A possibly partial assignment of attribute values, keyed by name.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Default, Serialize, Deserialize)]
pub struct Profile {
    assignments: BTreeMap<String, String>,
}

impl Profile {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn with(mut self, attribute: impl Into<String>, value: impl Into<String>) -> Self {
        self.set(attribute, value);
        self
    }

    pub fn set(&mut self, attribute: impl Into<String>, value: impl Into<String>) {
        self.assignments.insert(attribute.into(), value.into());
    }

    pub fn get(&self, attribute: &str) -> Option<&str> {
        self.assignments.get(attribute).map(String::as_str)
    }

    pub fn len(&self) -> usize {
        self.assignments.len()
    }

    pub fn is_empty(&self) -> bool {
        self.assignments.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = (&str, &str)> {
        self.assignments.iter().map(|(a, v)| (a.as_str(), v.as_str()))
    }

    /// Value index per schema attribute, `None` where the profile is silent.
    pub fn resolve(&self, schema: &AttributeSchema) -> Result<Vec<Option<usize>>> {
        let mut out = vec![None; schema.len()];
        for (name, value) in &self.assignments {
            let idx = schema
                .attribute_index(name)
                .ok_or_else(|| Error::input(format!("unknown attribute '{name}'")))?;
            let v = schema.attributes[idx]
                .value_index(value)
                .ok_or_else(|| Error::input(format!("unknown value '{value}' for attribute '{name}'")))?;
            out[idx] = Some(v);
        }
        Ok(out)
    }

    /// Values in schema order, skipping absent attributes.
    pub fn values_in<'a>(&'a self, schema: &'a AttributeSchema) -> impl Iterator<Item = &'a str> + 'a {
        schema.names().filter_map(move |n| self.get(n))
    }
}

impl fmt::Display for Profile {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (i, (a, v)) in self.iter().enumerate() {
            if i > 0 {
                write!(f, ", ")?;
            }
            write!(f, "{a}={v}")?;
        }
        write!(f, ")")
    }
}

impl<A: Into<String>, V: Into<String>> FromIterator<(A, V)> for Profile {
    fn from_iter<I: IntoIterator<Item = (A, V)>>(iter: I) -> Self {
        Profile {
            assignments: iter.into_iter().map(|(a, v)| (a.into(), v.into())).collect(),
        }
    }
}

/// Value × class counts for one attribute.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct MarginalTable {
    pub attribute: String,
    /// `counts[value][class]`
    pub counts: Vec<Vec<u64>>,
}

impl MarginalTable {
    pub fn zeros(attribute: impl Into<String>, values: usize, classes: usize) -> Self {
        MarginalTable {
            attribute: attribute.into(),
            counts: vec![vec![0; classes]; values],
        }
    }

    pub fn column_sums(&self, classes: usize) -> Vec<u64> {
        let mut sums = vec![0u64; classes];
        for row in &self.counts {
            for (s, c) in sums.iter_mut().zip(row) {
                *s += c;
            }
        }
        sums
    }

    pub fn grand_total(&self) -> u64 {
        self.counts.iter().flatten().sum()
    }
}

/// One marginal table per schema attribute, in schema order.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct MarginalTableSet {
    schema: AttributeSchema,
    classes: ClassLabelSet,
    tables: Vec<MarginalTable>,
}

impl MarginalTableSet {
    pub fn new(schema: AttributeSchema, classes: ClassLabelSet, tables: Vec<MarginalTable>) -> Result<Self> {
        ensure_valid(&schema, &classes)?;
        if tables.len() != schema.len() {
            return Err(Error::config(format!(
                "expected {} tables, got {}",
                schema.len(),
                tables.len()
            )));
        }
        for (attr, table) in schema.attributes.iter().zip(&tables) {
            if attr.name != table.attribute {
                return Err(Error::config(format!(
                    "table for '{}' found where '{}' was expected",
                    table.attribute, attr.name
                )));
            }
            if table.counts.len() != attr.values.len()
                || table.counts.iter().any(|row| row.len() != classes.len())
            {
                return Err(Error::config(format!(
                    "table '{}' must be {}x{}",
                    attr.name,
                    attr.values.len(),
                    classes.len()
                )));
            }
        }
        Ok(MarginalTableSet { schema, classes, tables })
    }

    pub fn zeros(schema: AttributeSchema, classes: ClassLabelSet) -> Result<Self> {
        let tables = schema
            .attributes
            .iter()
            .map(|a| MarginalTable::zeros(a.name.clone(), a.values.len(), classes.len()))
            .collect();
        Self::new(schema, classes, tables)
    }

    pub fn schema(&self) -> &AttributeSchema {
        &self.schema
    }

    pub fn classes(&self) -> &ClassLabelSet {
        &self.classes
    }

    pub fn tables(&self) -> &[MarginalTable] {
        &self.tables
    }

    pub fn table(&self, attribute: &str) -> Option<&MarginalTable> {
        self.schema.attribute_index(attribute).map(|i| &self.tables[i])
    }

    pub fn count(&self, attribute: usize, value: usize, class: usize) -> u64 {
        self.tables[attribute].counts[value][class]
    }

    pub(crate) fn counts_mut(&mut self, attribute: usize) -> &mut Vec<Vec<u64>> {
        &mut self.tables[attribute].counts
    }

    /// Every count multiplied by `factor`.
    pub fn scaled(&self, factor: u64) -> Self {
        let mut out = self.clone();
        for t in &mut out.tables {
            for c in t.counts.iter_mut().flatten() {
                *c *= factor;
            }
        }
        out
    }

    /// The same tables with attributes listed in `order`, which must be a
    /// permutation of the schema's attribute names.
    pub fn reordered(&self, order: &[&str]) -> Result<Self> {
        let mut attrs = Vec::with_capacity(order.len());
        let mut tables = Vec::with_capacity(order.len());
        for name in order {
            let idx = self
                .schema
                .attribute_index(name)
                .ok_or_else(|| Error::input(format!("unknown attribute '{name}'")))?;
            attrs.push(self.schema.attributes[idx].clone());
            tables.push(self.tables[idx].clone());
        }
        Self::new(AttributeSchema::new(attrs), self.classes.clone(), tables)
    }
}

/// Which totals normalize priors and conditionals when the attribute tables
/// disagree on per-class totals.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum ClassTotalsPolicy {
    /// Each attribute normalized by its own column sums; priors from `prior_source`.
    PerAttribute { prior_source: String },
    /// Every attribute normalized by the column sums of one reference attribute.
    Reference { attribute: String },
    Explicit { totals: Vec<u64>, grand_total: u64 },
}

impl ClassTotalsPolicy {
    pub fn per_attribute(prior_source: impl Into<String>) -> Self {
        ClassTotalsPolicy::PerAttribute {
            prior_source: prior_source.into(),
        }
    }

    pub fn reference(attribute: impl Into<String>) -> Self {
        ClassTotalsPolicy::Reference {
            attribute: attribute.into(),
        }
    }

    pub fn explicit(totals: Vec<u64>) -> Self {
        let grand_total = totals.iter().sum();
        ClassTotalsPolicy::Explicit { totals, grand_total }
    }

    pub fn validate(&self, schema: &AttributeSchema, classes: &ClassLabelSet) -> Result<()> {
        match self {
            ClassTotalsPolicy::PerAttribute { prior_source: a } | ClassTotalsPolicy::Reference { attribute: a } => {
                if schema.attribute_index(a).is_none() {
                    return Err(Error::config(format!("policy names unknown attribute '{a}'")));
                }
            }
            ClassTotalsPolicy::Explicit { totals, grand_total } => {
                if totals.len() != classes.len() {
                    return Err(Error::config(format!(
                        "explicit totals list {} classes, expected {}",
                        totals.len(),
                        classes.len()
                    )));
                }
                if let Some(i) = totals.iter().position(|&t| t == 0) {
                    return Err(Error::config(format!(
                        "explicit total for class '{}' must be positive",
                        classes.labels[i]
                    )));
                }
                let sum: u64 = totals.iter().sum();
                if sum != *grand_total {
                    return Err(Error::config(format!(
                        "explicit totals sum to {sum}, not grand total {grand_total}"
                    )));
                }
            }
        }
        Ok(())
    }
}

impl fmt::Display for ClassTotalsPolicy {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ClassTotalsPolicy::PerAttribute { prior_source } => write!(f, "per-attribute:{prior_source}"),
            ClassTotalsPolicy::Reference { attribute } => write!(f, "reference:{attribute}"),
            ClassTotalsPolicy::Explicit { totals, .. } => {
                let parts: Vec<String> = totals.iter().map(u64::to_string).collect();
                write!(f, "explicit:{}", parts.join("/"))
            }
        }
    }
}

/// Additive smoothing pseudo-count, held as an exact non-negative rational.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SmoothingConfig {
    alpha: Ratio<u64>,
}

impl SmoothingConfig {
    pub fn none() -> Self {
        SmoothingConfig { alpha: Ratio::from_integer(0) }
    }

    pub fn new(numer: u64, denom: u64) -> Result<Self> {
        if denom == 0 {
            return Err(Error::config("alpha denominator must be positive"));
        }
        Ok(SmoothingConfig {
            alpha: Ratio::new(numer, denom),
        })
    }

    pub fn integer(alpha: u64) -> Self {
        SmoothingConfig {
            alpha: Ratio::from_integer(alpha),
        }
    }

    pub fn alpha(&self) -> Ratio<u64> {
        self.alpha
    }

    pub fn alpha_f64(&self) -> f64 {
        *self.alpha.numer() as f64 / *self.alpha.denom() as f64
    }

    pub fn alpha_exact(&self) -> BigRational {
        BigRational::new(BigInt::from(*self.alpha.numer()), BigInt::from(*self.alpha.denom()))
    }

    pub fn is_zero(&self) -> bool {
        self.alpha.is_zero()
    }
}

impl Default for SmoothingConfig {
    fn default() -> Self {
        Self::none()
    }
}

impl fmt::Display for SmoothingConfig {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if *self.alpha.denom() == 1 {
            write!(f, "{}", self.alpha.numer())
        } else {
            write!(f, "{}/{}", self.alpha.numer(), self.alpha.denom())
        }
    }
}

/// Accepts `3`, `1/2`, or a plain decimal such as `0.25`.
impl FromStr for SmoothingConfig {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        let bad = || Error::config(format!("invalid alpha '{s}': expected a non-negative rational"));
        if let Some((n, d)) = s.split_once('/') {
            let n: u64 = n.trim().parse().map_err(|_| bad())?;
            let d: u64 = d.trim().parse().map_err(|_| bad())?;
            return Self::new(n, d).map_err(|_| bad());
        }
        if let Some((int, frac)) = s.split_once('.') {
            if frac.is_empty() || !frac.bytes().all(|b| b.is_ascii_digit()) || frac.len() > 18 {
                return Err(bad());
            }
            let int: u64 = if int.is_empty() { 0 } else { int.parse().map_err(|_| bad())? };
            let denom = 10u64.pow(frac.len() as u32);
            let frac: u64 = frac.parse().map_err(|_| bad())?;
            let numer = int
                .checked_mul(denom)
                .and_then(|v| v.checked_add(frac))
                .ok_or_else(bad)?;
            return Self::new(numer, denom);
        }
        s.parse::<u64>().map(Self::integer).map_err(|_| bad())
    }
}

impl Serialize for SmoothingConfig {
    fn serialize<S: serde::Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        serializer.serialize_str(&self.to_string())
    }
}

impl<'de> Deserialize<'de> for SmoothingConfig {
    fn deserialize<D: serde::Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        let s = String::deserialize(deserializer)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

/// Totals chosen by a [`ClassTotalsPolicy`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ClassTotals {
    /// Per-class totals used for priors.
    pub class_totals: Vec<u64>,
    pub grand_total: u64,
    /// `denominators[attribute][class]` normalizes that attribute's conditionals.
    pub denominators: Vec<Vec<u64>>,
}

pub fn resolve_class_totals(tables: &MarginalTableSet, policy: &ClassTotalsPolicy) -> Result<ClassTotals> {
    let schema = tables.schema();
    let k = tables.classes().len();
    policy.validate(schema, tables.classes())?;
    let own_sums: Vec<Vec<u64>> = tables.tables().iter().map(|t| t.column_sums(k)).collect();
    let index = |name: &str| schema.attribute_index(name).expect("validated above");

    Ok(match policy {
        ClassTotalsPolicy::PerAttribute { prior_source } => {
            let src = index(prior_source);
            ClassTotals {
                class_totals: own_sums[src].clone(),
                grand_total: tables.tables()[src].grand_total(),
                denominators: own_sums,
            }
        }
        ClassTotalsPolicy::Reference { attribute } => {
            let src = index(attribute);
            let totals = own_sums[src].clone();
            ClassTotals {
                denominators: vec![totals.clone(); schema.len()],
                grand_total: tables.tables()[src].grand_total(),
                class_totals: totals,
            }
        }
        ClassTotalsPolicy::Explicit { totals, grand_total } => ClassTotals {
            class_totals: totals.clone(),
            grand_total: *grand_total,
            denominators: vec![totals.clone(); schema.len()],
        },
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    pub(crate) fn student_schema() -> (AttributeSchema, ClassLabelSet) {
        (
            AttributeSchema::new(vec![
                Attribute::new("medium", ["ENGLISH", "HINDI"]),
                Attribute::new("caste", ["GEN", "OBC", "SC/ST"]),
                Attribute::new("stream", ["BA(NC)", "BA(CA)", "BSc(Bio)", "BSc(Math)", "BCom"]),
            ]),
            ClassLabelSet::new(["I", "II", "III", "FAIL"]),
        )
    }

    #[test]
    fn student_schema_is_valid() {
        let (s, c) = student_schema();
        assert!(validate_schema(&s, &c).is_empty());
    }

    #[test]
    fn zero_attributes_is_a_violation() {
        let v = validate_schema(&AttributeSchema::default(), &ClassLabelSet::new(["a"]));
        assert_eq!(v, vec![Violation::NoAttributes]);
        assert_eq!(v[0].to_string(), "no attributes");
    }

    #[test]
    fn duplicate_attribute_is_named() {
        let s = AttributeSchema::new(vec![Attribute::new("medium", ["A"]), Attribute::new("medium", ["B"])]);
        let v = validate_schema(&s, &ClassLabelSet::new(["x"]));
        assert_eq!(v, vec![Violation::DuplicateAttribute("medium".into())]);
        assert!(v[0].to_string().contains("medium"));
    }

    #[test]
    fn all_violations_are_reported() {
        let s = AttributeSchema::new(vec![
            Attribute::new("a", Vec::<String>::new()),
            Attribute::new("b", ["x", "x", ""]),
        ]);
        let v = validate_schema(&s, &ClassLabelSet::new(["c", "c"]));
        assert!(v.contains(&Violation::NoValues("a".into())));
        assert!(v.contains(&Violation::DuplicateValue {
            attribute: "b".into(),
            value: "x".into()
        }));
        assert!(v.contains(&Violation::BadIdentifier("".into())));
        assert!(v.contains(&Violation::DuplicateClass("c".into())));
        assert_eq!(v.len(), 4);
    }

    #[test]
    fn profile_resolution() {
        let (s, _) = student_schema();
        let p = Profile::new().with("stream", "BCom").with("medium", "HINDI");
        assert_eq!(p.resolve(&s).unwrap(), vec![Some(1), None, Some(4)]);
        assert!(Profile::new().with("sex", "F").resolve(&s).is_err());
        let err = Profile::new().with("caste", "XYZ").resolve(&s).unwrap_err();
        assert!(err.to_string().contains("XYZ"));
    }

    #[test]
    fn explicit_toy_totals() {
        let s = AttributeSchema::new(vec![Attribute::new("a", ["x", "y"])]);
        let c = ClassLabelSet::new(["p", "q"]);
        let t = MarginalTableSet::new(
            s,
            c,
            vec![MarginalTable {
                attribute: "a".into(),
                counts: vec![vec![1, 0], vec![0, 1]],
            }],
        )
        .unwrap();
        let r = resolve_class_totals(&t, &ClassTotalsPolicy::explicit(vec![1, 1])).unwrap();
        assert_eq!(r.class_totals, vec![1, 1]);
        assert_eq!(r.grand_total, 2);
        assert_eq!(r.denominators, vec![vec![1, 1]]);
    }

    #[test]
    fn explicit_policy_rejects_bad_totals() {
        let (s, c) = student_schema();
        assert!(ClassTotalsPolicy::explicit(vec![1, 2, 3]).validate(&s, &c).is_err());
        assert!(ClassTotalsPolicy::explicit(vec![1, 2, 0, 4]).validate(&s, &c).is_err());
        let bad_sum = ClassTotalsPolicy::Explicit {
            totals: vec![1, 1, 1, 1],
            grand_total: 5,
        };
        assert!(bad_sum.validate(&s, &c).is_err());
        assert!(ClassTotalsPolicy::reference("sex").validate(&s, &c).is_err());
    }

    #[test]
    fn alpha_parsing() {
        assert_eq!("0".parse::<SmoothingConfig>().unwrap(), SmoothingConfig::none());
        assert_eq!("1/2".parse::<SmoothingConfig>().unwrap(), SmoothingConfig::new(1, 2).unwrap());
        assert_eq!("0.25".parse::<SmoothingConfig>().unwrap(), SmoothingConfig::new(1, 4).unwrap());
        assert_eq!("2".parse::<SmoothingConfig>().unwrap().to_string(), "2");
        assert_eq!("0.5".parse::<SmoothingConfig>().unwrap().to_string(), "1/2");
        assert!("-1".parse::<SmoothingConfig>().is_err());
        assert!("1/0".parse::<SmoothingConfig>().is_err());
        assert!("abc".parse::<SmoothingConfig>().is_err());
        assert!("1.".parse::<SmoothingConfig>().is_err());
    }

    #[test]
    fn reordered_rejects_unknown() {
        let (s, c) = student_schema();
        let t = MarginalTableSet::zeros(s, c).unwrap();
        assert!(t.reordered(&["stream", "caste", "medium"]).is_ok());
        assert!(t.reordered(&["stream", "caste", "sex"]).is_err());
    }
}
