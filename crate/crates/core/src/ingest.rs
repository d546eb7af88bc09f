//! Record files, table files, aggregation, and marginal-consistency audit.
//!
//! Both formats are comma-delimited with a header row. Fields are trimmed;
//! quoting is not part of the format. Category orders not given explicitly
//! are inferred from first occurrence.

use std::collections::{HashMap, HashSet};
use std::fmt;
use std::io::Read;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::schema::{
    ensure_valid, is_valid_identifier, Attribute, AttributeSchema, ClassLabelSet, ClassTotalsPolicy, MarginalTable,
    MarginalTableSet, Profile,
};

pub const CLASS_COLUMN: &str = "class";
pub const TABLE_HEADER: [&str; 4] = ["attribute", "value", "class", "count"];

/// A single labeled record, stored as value indices into its dataset's schema.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Record {
    pub values: Vec<usize>,
    pub class: usize,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RecordDataset {
    schema: AttributeSchema,
    classes: ClassLabelSet,
    records: Vec<Record>,
}

impl RecordDataset {
    pub fn new(schema: AttributeSchema, classes: ClassLabelSet, records: Vec<Record>) -> Result<Self> {
        ensure_valid(&schema, &classes)?;
        for (i, r) in records.iter().enumerate() {
            let in_range = r.values.len() == schema.len()
                && r.values.iter().zip(&schema.attributes).all(|(&v, a)| v < a.values.len())
                && r.class < classes.len();
            if !in_range {
                return Err(Error::input(format!("record {i} does not fit the schema")));
            }
        }
        Ok(RecordDataset { schema, classes, records })
    }

    /// Builds a dataset from name-keyed profiles; every profile must be full.
    pub fn from_labeled<'a>(
        schema: AttributeSchema,
        classes: ClassLabelSet,
        rows: impl IntoIterator<Item = (&'a Profile, &'a str)>,
    ) -> Result<Self> {
        let mut records = Vec::new();
        for (i, (profile, label)) in rows.into_iter().enumerate() {
            let values = profile
                .resolve(&schema)?
                .into_iter()
                .enumerate()
                .map(|(a, v)| {
                    v.ok_or_else(|| {
                        Error::input(format!("record {i} is missing attribute '{}'", schema.attributes[a].name))
                    })
                })
                .collect::<Result<Vec<_>>>()?;
            let class = classes
                .index_of(label)
                .ok_or_else(|| Error::input(format!("record {i} has unknown class '{label}'")))?;
            records.push(Record { values, class });
        }
        Self::new(schema, classes, records)
    }

    pub fn schema(&self) -> &AttributeSchema {
        &self.schema
    }

    pub fn classes(&self) -> &ClassLabelSet {
        &self.classes
    }

    pub fn records(&self) -> &[Record] {
        &self.records
    }

    pub fn len(&self) -> usize {
        self.records.len()
    }

    pub fn is_empty(&self) -> bool {
        self.records.is_empty()
    }

    pub fn profile(&self, record: &Record) -> Profile {
        self.schema
            .attributes
            .iter()
            .zip(&record.values)
            .map(|(a, &v)| (a.name.clone(), a.values[v].clone()))
            .collect()
    }

    pub fn label(&self, record: &Record) -> &str {
        &self.classes.labels[record.class]
    }

    pub(crate) fn with_records(&self, records: Vec<Record>) -> Self {
        RecordDataset {
            schema: self.schema.clone(),
            classes: self.classes.clone(),
            records,
        }
    }
}

fn reader<R: Read>(input: R) -> csv::Reader<R> {
    csv::ReaderBuilder::new()
        .has_headers(false)
        .flexible(true)
        .trim(csv::Trim::All)
        .quoting(false)
        .from_reader(input)
}

fn rows<R: Read>(input: R) -> impl Iterator<Item = Result<(usize, csv::StringRecord)>> {
    reader(input).into_records().map(|r| {
        r.map(|rec| {
            let line = rec.position().map_or(0, |p| p.line() as usize);
            (line, rec)
        })
        .map_err(|e| {
            let line = e.position().map_or(0, |p| p.line() as usize);
            Error::parse(line, e.to_string())
        })
    })
}

/// Interns category names in first-occurrence order.
#[derive(Default)]
struct OrderedSet {
    items: Vec<String>,
    index: HashMap<String, usize>,
}

impl OrderedSet {
    fn intern(&mut self, s: &str) -> usize {
        if let Some(&i) = self.index.get(s) {
            return i;
        }
        self.items.push(s.to_string());
        self.index.insert(s.to_string(), self.items.len() - 1);
        self.items.len() - 1
    }
}

/// Parses a record file: a header of attribute names ending in a `class`
/// column, then one record per row. With `explicit` the header must name the
/// same attributes (any column order) and all values must be declared.
pub fn parse_records<R: Read>(input: R, explicit: Option<(&AttributeSchema, &ClassLabelSet)>) -> Result<RecordDataset> {
    let mut rows = rows(input);
    let (header_line, header) = rows.next().ok_or_else(|| Error::parse(1, "no header"))??;
    let header: Vec<&str> = header.iter().collect();
    if header.last() != Some(&CLASS_COLUMN) {
        return Err(Error::parse(header_line, format!("last header column must be '{CLASS_COLUMN}'")));
    }
    let attr_names = &header[..header.len() - 1];
    if attr_names.is_empty() {
        return Err(Error::parse(header_line, "header names no attributes"));
    }
    let mut seen = HashSet::new();
    for name in attr_names {
        if !is_valid_identifier(name) {
            return Err(Error::parse(header_line, format!("invalid attribute name {name:?}")));
        }
        if !seen.insert(*name) {
            return Err(Error::parse(header_line, format!("duplicate attribute '{name}'")));
        }
    }

    // column -> schema attribute index
    let column_map: Vec<usize> = match explicit {
        Some((schema, _)) => {
            if attr_names.len() != schema.len() {
                return Err(Error::parse(header_line, "header does not match the supplied schema"));
            }
            attr_names
                .iter()
                .map(|n| {
                    schema
                        .attribute_index(n)
                        .ok_or_else(|| Error::parse(header_line, format!("attribute '{n}' is not in the schema")))
                })
                .collect::<Result<_>>()?
        }
        None => (0..attr_names.len()).collect(),
    };

    let mut inferred_values: Vec<OrderedSet> = attr_names.iter().map(|_| OrderedSet::default()).collect();
    let mut inferred_classes = OrderedSet::default();
    let mut records = Vec::new();

    for row in rows {
        let (line, rec) = row?;
        if rec.len() != header.len() {
            return Err(Error::parse(
                line,
                format!("row has {} fields, header has {}", rec.len(), header.len()),
            ));
        }
        let fields: Vec<&str> = rec.iter().collect();
        let (label, values) = fields.split_last().expect("non-empty row");
        for f in &fields {
            if f.is_empty() {
                return Err(Error::parse(line, "empty field"));
            }
        }
        let mut idx = vec![0usize; attr_names.len()];
        match explicit {
            Some((schema, classes)) => {
                for (col, value) in values.iter().enumerate() {
                    let a = column_map[col];
                    idx[a] = schema.attributes[a].value_index(value).ok_or_else(|| {
                        Error::parse(
                            line,
                            format!("value '{value}' not declared for attribute '{}'", attr_names[col]),
                        )
                    })?;
                }
                let class = classes
                    .index_of(label)
                    .ok_or_else(|| Error::parse(line, format!("class '{label}' not declared")))?;
                records.push(Record { values: idx, class });
            }
            None => {
                for (col, value) in values.iter().enumerate() {
                    idx[col] = inferred_values[col].intern(value);
                }
                let class = inferred_classes.intern(label);
                records.push(Record { values: idx, class });
            }
        }
    }

    let (schema, classes) = match explicit {
        Some((s, c)) => (s.clone(), c.clone()),
        None => {
            if records.is_empty() {
                return Err(Error::parse(header_line, "no records to infer categories from"));
            }
            let attrs = attr_names
                .iter()
                .zip(inferred_values)
                .map(|(n, vals)| Attribute::new(*n, vals.items))
                .collect();
            (AttributeSchema::new(attrs), ClassLabelSet::new(inferred_classes.items))
        }
    };
    RecordDataset::new(schema, classes, records).map_err(|e| Error::parse(header_line, e.to_string()))
}

/// Counts records into one value × class table per attribute.
pub fn aggregate(dataset: &RecordDataset) -> MarginalTableSet {
    let mut tables = MarginalTableSet::zeros(dataset.schema().clone(), dataset.classes().clone())
        .expect("dataset schema is validated on construction");
    for r in dataset.records() {
        for (a, &v) in r.values.iter().enumerate() {
            tables.counts_mut(a)[v][r.class] += 1;
        }
    }
    tables
}

/// Parses a table file with header `attribute,value,class,count`. Rows may
/// come in any order; absent cells are zero.
pub fn parse_tables<R: Read>(input: R) -> Result<MarginalTableSet> {
    let mut rows = rows(input);
    let (header_line, header) = rows.next().ok_or_else(|| Error::parse(1, "no header"))??;
    if header.iter().ne(TABLE_HEADER) {
        return Err(Error::parse(
            header_line,
            format!("expected header '{}'", TABLE_HEADER.join(",")),
        ));
    }

    let mut attrs = OrderedSet::default();
    let mut values: Vec<OrderedSet> = Vec::new();
    let mut classes = OrderedSet::default();
    let mut cells: HashMap<(usize, usize, usize), u64> = HashMap::new();

    for row in rows {
        let (line, rec) = row?;
        if rec.len() != 4 {
            return Err(Error::parse(line, format!("row has {} fields, expected 4", rec.len())));
        }
        for f in rec.iter().take(3) {
            if !is_valid_identifier(f) {
                return Err(Error::parse(line, format!("invalid identifier {f:?}")));
            }
        }
        let count: i64 = rec[3]
            .parse()
            .map_err(|_| Error::parse(line, format!("non-integer count '{}'", &rec[3])))?;
        if count < 0 {
            return Err(Error::parse(line, format!("negative count {count}")));
        }
        let a = attrs.intern(&rec[0]);
        if a == values.len() {
            values.push(OrderedSet::default());
        }
        let v = values[a].intern(&rec[1]);
        let c = classes.intern(&rec[2]);
        if cells.insert((a, v, c), count as u64).is_some() {
            return Err(Error::parse(
                line,
                format!("duplicate key ({},{},{})", &rec[0], &rec[1], &rec[2]),
            ));
        }
    }

    if attrs.items.is_empty() {
        return Err(Error::parse(header_line, "no count rows"));
    }
    let k = classes.items.len();
    let tables = attrs
        .items
        .iter()
        .enumerate()
        .map(|(a, name)| {
            let mut t = MarginalTable::zeros(name.clone(), values[a].items.len(), k);
            for (v, row) in t.counts.iter_mut().enumerate() {
                for (c, cell) in row.iter_mut().enumerate() {
                    *cell = cells.get(&(a, v, c)).copied().unwrap_or(0);
                }
            }
            t
        })
        .collect();
    let schema = AttributeSchema::new(
        attrs
            .items
            .iter()
            .zip(values)
            .map(|(n, vals)| Attribute::new(n.clone(), vals.items))
            .collect(),
    );
    MarginalTableSet::new(schema, ClassLabelSet::new(classes.items), tables)
        .map_err(|e| Error::parse(header_line, e.to_string()))
}

/// Emits every cell, sorted by declaration order of (attribute, value, class).
pub fn write_tables(tables: &MarginalTableSet) -> String {
    let mut out = TABLE_HEADER.join(",");
    out.push('\n');
    for (attr, table) in tables.schema().attributes.iter().zip(tables.tables()) {
        for (value, row) in attr.values.iter().zip(&table.counts) {
            for (class, count) in tables.classes().labels.iter().zip(row) {
                out.push_str(&format!("{},{},{},{}\n", attr.name, value, class, count));
            }
        }
    }
    out
}

/// Parses explicit per-class totals from a `class,total` file, returned in
/// the order of `classes`. Every class must appear exactly once.
pub fn parse_class_totals<R: Read>(input: R, classes: &ClassLabelSet) -> Result<ClassTotalsPolicy> {
    let mut rows = rows(input);
    let (header_line, header) = rows.next().ok_or_else(|| Error::parse(1, "no header"))??;
    if header.iter().ne(["class", "total"]) {
        return Err(Error::parse(header_line, "expected header 'class,total'"));
    }
    let mut totals: Vec<Option<u64>> = vec![None; classes.len()];
    for row in rows {
        let (line, rec) = row?;
        if rec.len() != 2 {
            return Err(Error::parse(line, format!("row has {} fields, expected 2", rec.len())));
        }
        let c = classes
            .index_of(&rec[0])
            .ok_or_else(|| Error::parse(line, format!("unknown class '{}'", &rec[0])))?;
        let total: u64 = rec[1]
            .parse()
            .map_err(|_| Error::parse(line, format!("invalid total '{}'", &rec[1])))?;
        if totals[c].replace(total).is_some() {
            return Err(Error::parse(line, format!("duplicate class '{}'", &rec[0])));
        }
    }
    let totals = totals
        .into_iter()
        .zip(&classes.labels)
        .map(|(t, label)| t.ok_or_else(|| Error::parse(0, format!("no total for class '{label}'"))))
        .collect::<Result<Vec<_>>>()?;
    let policy = ClassTotalsPolicy::explicit(totals);
    policy.validate(&AttributeSchema::default(), classes)?;
    Ok(policy)
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ConsistencyReport {
    pub attributes: Vec<String>,
    pub classes: Vec<String>,
    /// `per_class_totals[attribute][class]`
    pub per_class_totals: Vec<Vec<u64>>,
    pub grand_totals: Vec<u64>,
    /// Most frequent grand total; ties go to the earliest attribute.
    pub modal_grand_total: u64,
    pub inconsistent_classes: Vec<String>,
    pub inconsistent_grand: Vec<String>,
    pub is_consistent: bool,
}

pub fn audit_consistency(tables: &MarginalTableSet) -> ConsistencyReport {
    let k = tables.classes().len();
    let per_class_totals: Vec<Vec<u64>> = tables.tables().iter().map(|t| t.column_sums(k)).collect();
    let grand_totals: Vec<u64> = tables.tables().iter().map(MarginalTable::grand_total).collect();

    let inconsistent_classes: Vec<String> = (0..k)
        .filter(|&c| per_class_totals.iter().any(|row| row[c] != per_class_totals[0][c]))
        .map(|c| tables.classes().labels[c].clone())
        .collect();

    let mut modal_grand_total = 0;
    let mut best = 0;
    for &g in &grand_totals {
        let freq = grand_totals.iter().filter(|&&x| x == g).count();
        if freq > best {
            best = freq;
            modal_grand_total = g;
        }
    }
    let inconsistent_grand: Vec<String> = tables
        .schema()
        .attributes
        .iter()
        .zip(&grand_totals)
        .filter(|(_, &g)| g != modal_grand_total)
        .map(|(a, _)| a.name.clone())
        .collect();

    ConsistencyReport {
        attributes: tables.schema().names().map(str::to_string).collect(),
        classes: tables.classes().labels.clone(),
        is_consistent: inconsistent_classes.is_empty() && inconsistent_grand.is_empty(),
        per_class_totals,
        grand_totals,
        modal_grand_total,
        inconsistent_classes,
        inconsistent_grand,
    }
}

impl fmt::Display for ConsistencyReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:<12}", "attribute")?;
        for c in &self.classes {
            write!(f, " {c:>8}")?;
        }
        writeln!(f, " {:>8}", "total")?;
        for ((a, row), g) in self.attributes.iter().zip(&self.per_class_totals).zip(&self.grand_totals) {
            write!(f, "{a:<12}")?;
            for n in row {
                write!(f, " {n:>8}")?;
            }
            writeln!(f, " {g:>8}")?;
        }
        writeln!(f, "modal grand total: {}", self.modal_grand_total)?;
        for c in &self.inconsistent_classes {
            let i = self.classes.iter().position(|x| x == c).unwrap_or(0);
            let totals: Vec<String> = self
                .attributes
                .iter()
                .zip(&self.per_class_totals)
                .map(|(a, row)| format!("{a}={}", row[i]))
                .collect();
            writeln!(f, "inconsistent class {c}: {}", totals.join(" "))?;
        }
        for a in &self.inconsistent_grand {
            let i = self.attributes.iter().position(|x| x == a).unwrap_or(0);
            writeln!(
                f,
                "inconsistent grand total {a}: {} (modal {})",
                self.grand_totals[i], self.modal_grand_total
            )?;
        }
        writeln!(f, "consistent: {}", self.is_consistent)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    const TWO_ROWS: &str = "medium,caste,stream,class\nENGLISH,GEN,BA(NC),I\nHINDI,OBC,BCom,FAIL\n";

    #[test]
    fn parse_two_records() {
        let d = parse_records(TWO_ROWS.as_bytes(), None).unwrap();
        assert_eq!(d.len(), 2);
        assert!(d.schema().attributes.iter().all(|a| a.values.len() == 2));
        assert_eq!(d.schema().attributes[2].values, vec!["BA(NC)", "BCom"]);
        assert_eq!(d.classes().labels, vec!["I", "FAIL"]);
        assert_eq!(d.label(&d.records()[1]), "FAIL");
        assert_eq!(d.profile(&d.records()[0]).get("stream"), Some("BA(NC)"));
    }

    #[test]
    fn empty_input_has_no_header() {
        let err = parse_records("".as_bytes(), None).unwrap_err();
        assert!(err.to_string().contains("no header"));
        let err = parse_tables("".as_bytes()).unwrap_err();
        assert!(err.to_string().contains("no header"));
    }

    #[test]
    fn short_row_names_its_line() {
        let text = "medium,caste,stream,class\nENGLISH,GEN,I\n";
        match parse_records(text.as_bytes(), None).unwrap_err() {
            Error::Parse { line, message } => {
                assert_eq!(line, 2);
                assert!(message.contains("3 fields"));
            }
            e => panic!("unexpected {e:?}"),
        }
    }

    #[test]
    fn explicit_schema_rejects_undeclared_value() {
        let d = parse_records(TWO_ROWS.as_bytes(), None).unwrap();
        let text = "stream,medium,caste,class\nBCom,ENGLISH,SC/ST,I\n";
        let err = parse_records(text.as_bytes(), Some((d.schema(), d.classes()))).unwrap_err();
        assert_eq!(err, Error::parse(2, "value 'SC/ST' not declared for attribute 'caste'"));

        // column order may differ from schema order
        let text = "stream,medium,caste,class\nBCom,ENGLISH,OBC,I\n";
        let e = parse_records(text.as_bytes(), Some((d.schema(), d.classes()))).unwrap();
        assert_eq!(e.records()[0].values, vec![0, 1, 1]);
    }

    #[test]
    fn header_must_end_in_class() {
        assert!(parse_records("a,b\nx,y\n".as_bytes(), None).is_err());
        assert!(parse_records("class\nx\n".as_bytes(), None).is_err());
    }

    #[test]
    fn aggregate_two_records() {
        let d = parse_records(TWO_ROWS.as_bytes(), None).unwrap();
        let t = aggregate(&d);
        for table in t.tables() {
            assert_eq!(table.counts, vec![vec![1, 0], vec![0, 1]]);
            assert_eq!(table.grand_total(), 2);
        }
    }

    #[test]
    fn aggregate_empty_with_explicit_schema() {
        let d = parse_records(TWO_ROWS.as_bytes(), None).unwrap();
        let empty = parse_records("medium,caste,stream,class\n".as_bytes(), Some((d.schema(), d.classes()))).unwrap();
        let t = aggregate(&empty);
        assert!(t.tables().iter().all(|t| t.grand_total() == 0));
        let report = audit_consistency(&t);
        assert!(report.is_consistent);
        assert!(report.grand_totals.iter().all(|&g| g == 0));
    }

    #[test]
    fn table_errors() {
        let err = parse_tables("attribute,value,class,count\ncaste,GEN,I,-5\n".as_bytes()).unwrap_err();
        assert_eq!(err, Error::parse(2, "negative count -5"));
        let err = parse_tables("attribute,value,class,count\ncaste,GEN,I,2.5\n".as_bytes()).unwrap_err();
        assert!(err.to_string().contains("non-integer"));
        let err = parse_tables("attribute,value,class,count\ncaste,GEN,I,1\ncaste,GEN,I,2\n".as_bytes()).unwrap_err();
        assert!(matches!(err, Error::Parse { line: 3, .. }));
        assert!(err.to_string().contains("duplicate"));
        assert!(parse_tables("attr,value,class,count\n".as_bytes()).is_err());
    }

    #[test]
    fn explicit_totals_file() {
        let classes = ClassLabelSet::new(["I", "II"]);
        let p = parse_class_totals("class,total\nII,5\nI,3\n".as_bytes(), &classes).unwrap();
        assert_eq!(p, ClassTotalsPolicy::explicit(vec![3, 5]));
        assert!(parse_class_totals("class,total\nI,3\n".as_bytes(), &classes).is_err());
        assert!(parse_class_totals("class,total\nI,3\nII,0\n".as_bytes(), &classes).is_err());
        assert!(parse_class_totals("class,total\nI,3\nI,4\n".as_bytes(), &classes).is_err());
        assert!(parse_class_totals("class,total\nIII,3\n".as_bytes(), &classes).is_err());
    }

    #[test]
    fn sparse_tables_zero_fill() {
        let t = parse_tables("attribute,value,class,count\na,x,p,3\na,y,q,4\nb,z,q,7\n".as_bytes()).unwrap();
        assert_eq!(t.tables()[0].counts, vec![vec![3, 0], vec![0, 4]]);
        assert_eq!(t.tables()[1].counts, vec![vec![0, 7]]);
        let report = audit_consistency(&t);
        assert_eq!(report.inconsistent_classes, vec!["p", "q"]);
        assert!(report.inconsistent_grand.is_empty());
    }
}
