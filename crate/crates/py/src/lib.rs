//! Python bindings: `divpredict.Tables`, `divpredict.Model` and a few helpers.

use pyo3::exceptions::PyValueError;
use pyo3::prelude::*;
use pyo3::types::PyDict;

use divpredict_core as core;
use divpredict_core::{ClassTotalsPolicy, GridFormat, OutcomePolicy, Profile, SmoothingConfig};

fn err(e: core::Error) -> PyErr {
    PyValueError::new_err(format!("{}: {e}", e.category()))
}

fn profile(values: Option<&Bound<'_, PyDict>>) -> PyResult<Profile> {
    let mut p = Profile::new();
    if let Some(values) = values {
        for (k, v) in values.iter() {
            p.set(k.extract::<String>()?, v.extract::<String>()?);
        }
    }
    Ok(p)
}

/// Marginal count tables, one per attribute.
#[pyclass(frozen)]
struct Tables {
    inner: core::MarginalTableSet,
}

#[pymethods]
impl Tables {
    /// Parses `attribute,value,class,count` text.
    #[staticmethod]
    fn from_csv(text: &str) -> PyResult<Self> {
        Ok(Tables { inner: core::parse_tables(text.as_bytes()).map_err(err)? })
    }

    /// Aggregates a labeled record file whose last column is `class`.
    #[staticmethod]
    fn from_records(text: &str) -> PyResult<Self> {
        let d = core::parse_records(text.as_bytes(), None).map_err(err)?;
        Ok(Tables { inner: core::aggregate(&d) })
    }

    fn to_csv(&self) -> String {
        core::write_tables(&self.inner)
    }

    #[getter]
    fn attributes(&self) -> Vec<(String, Vec<String>)> {
        self.inner.schema().attributes.iter().map(|a| (a.name.clone(), a.values.clone())).collect()
    }

    #[getter]
    fn classes(&self) -> Vec<String> {
        self.inner.classes().labels.clone()
    }

    fn count(&self, attribute: &str, value: &str, class: &str) -> PyResult<u64> {
        let s = self.inner.schema();
        let a = s.attribute_index(attribute).ok_or_else(|| PyValueError::new_err(format!("unknown attribute '{attribute}'")))?;
        let v = s.attributes[a]
            .value_index(value)
            .ok_or_else(|| PyValueError::new_err(format!("unknown value '{value}'")))?;
        let c = self.inner.classes().index_of(class).ok_or_else(|| PyValueError::new_err(format!("unknown class '{class}'")))?;
        Ok(self.inner.count(a, v, c))
    }

    /// Consistency report as a dict.
    fn audit<'py>(&self, py: Python<'py>) -> PyResult<Bound<'py, PyDict>> {
        let r = core::audit_consistency(&self.inner);
        let d = PyDict::new(py);
        d.set_item("attributes", r.attributes)?;
        d.set_item("classes", r.classes)?;
        d.set_item("per_class_totals", r.per_class_totals)?;
        d.set_item("grand_totals", r.grand_totals)?;
        d.set_item("modal_grand_total", r.modal_grand_total)?;
        d.set_item("inconsistent_classes", r.inconsistent_classes)?;
        d.set_item("inconsistent_grand", r.inconsistent_grand)?;
        d.set_item("is_consistent", r.is_consistent)?;
        Ok(d)
    }

    fn __repr__(&self) -> String {
        format!("Tables(attributes={}, classes={})", self.inner.schema().len(), self.inner.classes().len())
    }
}

fn parse_policy(spec: &str, tables: &core::MarginalTableSet, totals: Option<Vec<u64>>) -> PyResult<ClassTotalsPolicy> {
    let policy = match (spec.split_once(':'), totals) {
        (None, Some(t)) if spec == "explicit" => ClassTotalsPolicy::explicit(t),
        (None, None) if spec == "per-attribute" => {
            ClassTotalsPolicy::per_attribute(tables.schema().attributes[0].name.clone())
        }
        (Some(("per-attribute", a)), None) => ClassTotalsPolicy::per_attribute(a),
        (Some(("reference", a)), None) => ClassTotalsPolicy::reference(a),
        _ => return Err(PyValueError::new_err(format!("invalid policy '{spec}'"))),
    };
    policy.validate(tables.schema(), tables.classes()).map_err(err)?;
    Ok(policy)
}

/// A fitted naive Bayes model.
#[pyclass(frozen)]
struct Model {
    inner: core::NBModel,
}

#[pymethods]
impl Model {
    /// `policy` is `per-attribute[:ATTR]`, `reference:ATTR`, or `explicit`
    /// together with `totals`. `alpha` accepts `"1"`, `"1/2"` or `"0.25"`.
    #[staticmethod]
    #[pyo3(signature = (tables, policy = "per-attribute", alpha = "0", totals = None))]
    fn fit(tables: &Tables, policy: &str, alpha: &str, totals: Option<Vec<u64>>) -> PyResult<Self> {
        let policy = parse_policy(policy, &tables.inner, totals)?;
        let smoothing: SmoothingConfig = alpha.parse().map_err(err)?;
        Ok(Model { inner: core::NBModel::fit(&tables.inner, &policy, smoothing).map_err(err)? })
    }

    #[staticmethod]
    fn from_json(text: &str) -> PyResult<Self> {
        Ok(Model { inner: core::NBModel::from_json(text).map_err(err)? })
    }

    fn to_json(&self) -> String {
        self.inner.to_json()
    }

    #[getter]
    fn classes(&self) -> Vec<String> {
        self.inner.classes().labels.clone()
    }

    #[getter]
    fn priors(&self) -> Vec<f64> {
        self.inner.priors().to_vec()
    }

    #[getter]
    fn policy(&self) -> String {
        self.inner.policy().to_string()
    }

    /// Full posterior for a (possibly partial) profile given as `{attr: value}`.
    #[pyo3(signature = (values = None))]
    fn posterior<'py>(&self, py: Python<'py>, values: Option<&Bound<'py, PyDict>>) -> PyResult<Bound<'py, PyDict>> {
        let post = self.inner.posterior(&profile(values)?).map_err(err)?;
        let d = PyDict::new(py);
        let per_class = PyDict::new(py);
        for (c, p) in self.inner.classes().labels.iter().zip(&post.per_class) {
            per_class.set_item(c, *p)?;
        }
        d.set_item("per_class", per_class)?;
        d.set_item("defined", post.scores_defined)?;
        if post.scores_defined {
            d.set_item("predicted", &post.predicted)?;
            d.set_item("probability", post.probability())?;
        } else {
            d.set_item("predicted", py.None())?;
            d.set_item("probability", py.None())?;
        }
        d.set_item("tie", post.tie)?;
        Ok(d)
    }

    /// `(label, probability)`, or `None` when every class scores zero.
    #[pyo3(signature = (values = None))]
    fn predict(&self, values: Option<&Bound<'_, PyDict>>) -> PyResult<Option<(String, f64)>> {
        self.inner.predict(&profile(values)?).map_err(err)
    }

    /// Exact posterior as `"p/q"` strings.
    #[pyo3(signature = (values = None))]
    fn posterior_exact(&self, values: Option<&Bound<'_, PyDict>>) -> PyResult<Option<Vec<String>>> {
        let exact = self.inner.posterior_exact(&profile(values)?).map_err(err)?;
        Ok(exact.map(|v| v.iter().map(|r| r.to_string()).collect()))
    }

    /// Renders the full prediction grid as `text`, `csv` or `json-like`.
    #[pyo3(signature = (format = "text", performer = None, risk_class = "FAIL", risk_threshold = 0.25))]
    fn grid(&self, format: &str, performer: Option<Vec<String>>, risk_class: &str, risk_threshold: f64) -> PyResult<String> {
        let outcome = outcome(performer, risk_class, risk_threshold);
        let format: GridFormat = format.parse().map_err(err)?;
        let g = core::prediction_grid(&self.inner, &outcome).map_err(err)?;
        Ok(core::render_grid(&g, format))
    }

    /// Rows of the reference grid (CSV text) that disagree with this model.
    #[pyo3(signature = (reference, tolerance = 1e-5))]
    fn diff<'py>(&self, py: Python<'py>, reference: &str, tolerance: f64) -> PyResult<Vec<Bound<'py, PyDict>>> {
        let reference = core::parse_reference_grid(reference.as_bytes()).map_err(err)?;
        let g = core::prediction_grid(&self.inner, &OutcomePolicy::default()).map_err(err)?;
        let found = core::diff_grid(&g, &reference, tolerance).map_err(err)?;
        found
            .into_iter()
            .map(|d| {
                let row = PyDict::new(py);
                row.set_item("values", &d.values)?;
                row.set_item("expected_label", &d.expected_label)?;
                row.set_item("expected_probability", d.expected_probability)?;
                row.set_item("actual_label", &d.actual_label)?;
                row.set_item("actual_probability", d.actual_probability)?;
                Ok(row)
            })
            .collect()
    }

    /// Metrics on a labeled record file, as JSON text.
    fn evaluate(&self, records: &str) -> PyResult<String> {
        let d = core::parse_records(records.as_bytes(), None).map_err(err)?;
        Ok(core::evaluate(&self.inner, &d).map_err(err)?.to_json())
    }

    fn __repr__(&self) -> String {
        format!("Model(policy={}, alpha={})", self.inner.policy(), self.inner.smoothing())
    }
}

fn outcome(performer: Option<Vec<String>>, risk_class: &str, risk_threshold: f64) -> OutcomePolicy {
    let mut o = OutcomePolicy::default();
    if let Some(p) = performer {
        o.performer_classes = p;
    }
    o.risk_class = risk_class.to_string();
    o.risk_threshold = risk_threshold;
    o
}

/// The bundled training tables.
#[pyfunction]
fn bundled_tables() -> Tables {
    Tables { inner: core::fixtures::table1() }
}

/// The bundled published grid as CSV text.
#[pyfunction]
fn bundled_grid() -> &'static str {
    core::fixtures::TABLE2_CSV
}

/// Model fitted on the bundled tables with reference:stream, alpha 0.
#[pyfunction]
fn replication_model() -> Model {
    Model { inner: core::fixtures::replication_model() }
}

#[pymodule]
fn divpredict(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<Tables>()?;
    m.add_class::<Model>()?;
    m.add_function(wrap_pyfunction!(bundled_tables, m)?)?;
    m.add_function(wrap_pyfunction!(bundled_grid, m)?)?;
    m.add_function(wrap_pyfunction!(replication_model, m)?)?;
    Ok(())
}
