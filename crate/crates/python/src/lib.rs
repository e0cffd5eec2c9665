//! Python bindings: `import pydsalign`.

use std::path::{Path, PathBuf};

use pyo3::create_exception;
use pyo3::exceptions::{PyKeyError, PyValueError};
use pyo3::prelude::*;

use dsalign::derive::{attach, derive_all, EvaluationItem, EvaluationItemSet};
use dsalign::diagnostic::{has_errors, Diagnostic};
use dsalign::dsl::{self, ParseResult};
use dsalign::export::{export, ExportFormat, ExportOptions};
use dsalign::model::{AlignmentModel, Direction, Element, ElementKind, Relation, RelationKind};
use dsalign::report::{self, ReportFormat};

create_exception!(
    pydsalign,
    DsalignError,
    PyValueError,
    "Raised with `(message, diagnostics)` when an operation is rejected."
);

fn rejected(message: &str, diagnostics: Vec<Diagnostic>) -> PyErr {
    let list: Vec<PyDiagnostic> = diagnostics.into_iter().map(PyDiagnostic::from).collect();
    DsalignError::new_err((message.to_string(), list))
}

fn bad_value(message: impl Into<String>) -> PyErr {
    PyValueError::new_err(message.into())
}

#[pyclass(name = "Diagnostic", module = "pydsalign", frozen, get_all, skip_from_py_object)]
#[derive(Clone)]
struct PyDiagnostic {
    code: String,
    severity: String,
    message: String,
    file: Option<String>,
    line: Option<usize>,
    column: Option<usize>,
    subject: Option<String>,
    rendered: String,
}

impl From<Diagnostic> for PyDiagnostic {
    fn from(d: Diagnostic) -> Self {
        PyDiagnostic {
            rendered: d.render(false),
            code: d.code,
            severity: d.severity.to_string(),
            message: d.message,
            file: d.location.as_ref().map(|l| l.file.display().to_string()),
            line: d.location.as_ref().map(|l| l.line),
            column: d.location.as_ref().map(|l| l.column),
            subject: d.subject,
        }
    }
}

#[pymethods]
impl PyDiagnostic {
    fn is_error(&self) -> bool {
        self.severity == "error"
    }

    fn __str__(&self) -> String {
        self.rendered.clone()
    }

    fn __repr__(&self) -> String {
        format!("<Diagnostic {} {:?}>", self.code, self.message)
    }
}

#[pyclass(name = "Element", module = "pydsalign", frozen, get_all, skip_from_py_object)]
#[derive(Clone)]
struct PyElement {
    id: String,
    kind: String,
    name: String,
    description: Option<String>,
    /// `(key, value)` pairs in canonical order.
    attrs: Vec<(String, String)>,
}

impl From<&Element> for PyElement {
    fn from(e: &Element) -> Self {
        PyElement {
            id: e.id.clone(),
            kind: e.kind.to_string(),
            name: e.name.clone(),
            description: e.description.clone(),
            attrs: e
                .attrs
                .iter()
                .map(|a| (a.key().to_string(), a.value_text()))
                .collect(),
        }
    }
}

#[pymethods]
impl PyElement {
    fn __repr__(&self) -> String {
        format!("<Element {} {} {:?}>", self.kind, self.id, self.name)
    }
}

#[pyclass(name = "Relation", module = "pydsalign", frozen, get_all, skip_from_py_object)]
#[derive(Clone)]
struct PyRelation {
    id: String,
    kind: String,
    source: String,
    target: String,
}

impl From<&Relation> for PyRelation {
    fn from(r: &Relation) -> Self {
        PyRelation {
            id: r.id.clone(),
            kind: r.kind.to_string(),
            source: r.source.clone(),
            target: r.target.clone(),
        }
    }
}

#[pymethods]
impl PyRelation {
    fn __repr__(&self) -> String {
        format!("<Relation {} {} -> {}>", self.kind, self.source, self.target)
    }
}

#[pyclass(name = "Item", module = "pydsalign", frozen, get_all, skip_from_py_object)]
#[derive(Clone)]
struct PyItem {
    id: String,
    category: String,
    path: String,
    description: String,
    sources: Vec<String>,
    severity: Option<String>,
    rule: String,
}

impl From<&EvaluationItem> for PyItem {
    fn from(i: &EvaluationItem) -> Self {
        PyItem {
            id: i.id.clone(),
            category: i.category.name().to_string(),
            path: i.category.path(),
            description: i.description.clone(),
            sources: i.sources.clone(),
            severity: i.severity.map(|s| s.to_string()),
            rule: i.rule.to_string(),
        }
    }
}

#[pymethods]
impl PyItem {
    fn __repr__(&self) -> String {
        format!("<Item {} {} {:?}>", self.id, self.path, self.description)
    }
}

#[pyclass(name = "ItemSet", module = "pydsalign", frozen)]
struct PyItemSet {
    inner: EvaluationItemSet,
}

#[pymethods]
impl PyItemSet {
    #[getter]
    fn system_name(&self) -> String {
        self.inner.system_name.clone()
    }

    #[getter]
    fn items(&self) -> Vec<PyItem> {
        self.inner.items.iter().map(PyItem::from).collect()
    }

    #[getter]
    fn warnings(&self) -> Vec<PyDiagnostic> {
        self.inner.warnings.iter().cloned().map(PyDiagnostic::from).collect()
    }

    fn summary(&self) -> String {
        self.inner.summary()
    }

    fn to_json(&self) -> String {
        self.inner.to_json()
    }

    #[staticmethod]
    fn from_json(text: &str) -> PyResult<Self> {
        EvaluationItemSet::from_json(text)
            .map(|inner| PyItemSet { inner })
            .map_err(|e| bad_value(format!("invalid itemset: {e}")))
    }

    /// Markdown or CSV table with one row per item.
    #[pyo3(signature = (format = "markdown"))]
    fn table(&self, format: &str) -> PyResult<String> {
        Ok(report::item_table(&self.inner, report_format(format)?))
    }

    fn __len__(&self) -> usize {
        self.inner.items.len()
    }

    fn __repr__(&self) -> String {
        format!("<ItemSet {:?}: {}>", self.inner.system_name, self.inner.summary())
    }
}

#[pyclass(name = "Model", module = "pydsalign")]
struct PyModel {
    inner: AlignmentModel,
}

fn element_kind(kind: &str) -> PyResult<ElementKind> {
    kind.parse().map_err(bad_value)
}

fn relation_kind(kind: &str) -> PyResult<RelationKind> {
    kind.parse().map_err(bad_value)
}

fn report_format(format: &str) -> PyResult<ReportFormat> {
    format.parse().map_err(bad_value)
}

#[pymethods]
impl PyModel {
    #[new]
    fn new(system_name: &str) -> PyResult<Self> {
        AlignmentModel::new(system_name)
            .map(|inner| PyModel { inner })
            .map_err(|d| rejected("invalid system name", vec![d]))
    }

    #[getter]
    fn system_name(&self) -> String {
        self.inner.system_name().to_string()
    }

    #[getter]
    fn slug(&self) -> String {
        self.inner.system_slug()
    }

    #[pyo3(signature = (kind, id, name, description = None))]
    fn add_element(&mut self, kind: &str, id: &str, name: &str, description: Option<&str>) -> PyResult<String> {
        let mut element = Element::new(element_kind(kind)?, id, name);
        if let Some(d) = description {
            element = element.with_description(d);
        }
        self.inner
            .add(element)
            .map_err(|d| rejected("element rejected", vec![d]))
    }

    /// Returns the new relation id.
    fn add_relation(&mut self, kind: &str, source: &str, target: &str) -> PyResult<String> {
        self.inner
            .add_relation(relation_kind(kind)?, source, target)
            .map_err(|d| rejected("relation rejected", vec![d]))
    }

    fn element(&self, id: &str) -> PyResult<PyElement> {
        self.inner
            .element(id)
            .map(PyElement::from)
            .ok_or_else(|| PyKeyError::new_err(id.to_string()))
    }

    #[pyo3(signature = (kind = None))]
    fn elements(&self, kind: Option<&str>) -> PyResult<Vec<PyElement>> {
        let kind = kind.map(element_kind).transpose()?;
        Ok(self
            .inner
            .elements()
            .filter(|e| kind.is_none_or(|k| e.kind == k))
            .map(PyElement::from)
            .collect())
    }

    fn relations(&self) -> Vec<PyRelation> {
        self.inner.relations().iter().map(PyRelation::from).collect()
    }

    /// `direction` is one of `in`, `out`, `any`.
    #[pyo3(signature = (id, kind = None, direction = "any"))]
    fn neighbors(&self, id: &str, kind: Option<&str>, direction: &str) -> PyResult<Vec<PyElement>> {
        let kind = kind.map(relation_kind).transpose()?;
        let direction = match direction {
            "in" => Direction::In,
            "out" => Direction::Out,
            "any" => Direction::Any,
            other => return Err(bad_value(format!("unknown direction `{other}`"))),
        };
        self.inner
            .neighbors(id, kind, direction)
            .map(|found| found.into_iter().map(PyElement::from).collect())
            .map_err(|d| rejected("unknown element", vec![d]))
    }

    fn validate(&self) -> Vec<PyDiagnostic> {
        dsalign::validate(&self.inner)
            .into_iter()
            .map(PyDiagnostic::from)
            .collect()
    }

    fn derive(&self) -> PyResult<PyItemSet> {
        derive_all(&self.inner)
            .map(|inner| PyItemSet { inner })
            .map_err(|d| rejected("derivation refused", vec![d]))
    }

    /// A new model with the items materialized.
    fn attach(&self, itemset: PyRef<'_, PyItemSet>) -> PyResult<PyModel> {
        attach(&self.inner, &itemset.inner)
            .map(|frozen| PyModel {
                inner: frozen.thaw(),
            })
            .map_err(|d| rejected("attach refused", vec![d]))
    }

    #[pyo3(signature = (include_derived = true, deterministic_ids = true))]
    fn to_open_exchange(&self, include_derived: bool, deterministic_ids: bool) -> PyResult<String> {
        self.export(ExportFormat::OpenExchange, include_derived, deterministic_ids)
    }

    #[pyo3(signature = (include_derived = true))]
    fn to_dot(&self, include_derived: bool) -> PyResult<String> {
        self.export(ExportFormat::Dot, include_derived, true)
    }

    /// Canonical `.dsa` text.
    fn format(&self) -> PyResult<String> {
        dsl::format(&self.inner).map_err(|diags| rejected("model cannot be formatted", diags))
    }

    fn __len__(&self) -> usize {
        self.inner.elements().len()
    }

    fn __contains__(&self, id: &str) -> bool {
        self.inner.contains(id)
    }

    fn __eq__(&self, other: PyRef<'_, PyModel>) -> bool {
        self.inner == other.inner
    }

    fn __repr__(&self) -> String {
        format!(
            "<Model {:?}: {} elements, {} relations>",
            self.inner.system_name(),
            self.inner.elements().len(),
            self.inner.relations().len()
        )
    }
}

impl PyModel {
    fn export(&self, format: ExportFormat, include_derived: bool, deterministic_ids: bool) -> PyResult<String> {
        let options = ExportOptions {
            format,
            include_derived,
            deterministic_ids,
        };
        export(&self.inner, &options).map_err(|d| rejected("export refused", vec![d]))
    }
}

fn into_model(result: ParseResult) -> PyResult<PyModel> {
    match result.model {
        Some(inner) if !has_errors(&result.diagnostics) => Ok(PyModel { inner }),
        _ => Err(rejected("model has errors", result.diagnostics)),
    }
}

/// Parses `.dsa` text. Raises `DsalignError` with the diagnostics on failure.
#[pyfunction]
#[pyo3(signature = (text, path = "<string>"))]
fn parse(text: &str, path: &str) -> PyResult<PyModel> {
    into_model(dsl::parse(text, Path::new(path)))
}

/// Reads and parses a `.dsa` file.
#[pyfunction]
fn load(path: PathBuf) -> PyResult<PyModel> {
    into_model(dsl::load_file(&path))
}

/// Parse and validation findings for `.dsa` text; never raises.
#[pyfunction]
#[pyo3(signature = (text, path = "<string>"))]
fn check(text: &str, path: &str) -> Vec<PyDiagnostic> {
    let result = dsl::parse(text, Path::new(path));
    let mut findings = result.diagnostics.clone();
    if let Some(model) = &result.model {
        let mut more = dsalign::validate(model);
        result.locate(&mut more);
        findings.extend(more);
    }
    findings.into_iter().map(PyDiagnostic::from).collect()
}

/// Leaves × systems comparison of several itemsets.
#[pyfunction]
#[pyo3(signature = (itemsets, format = "markdown"))]
fn matrix(itemsets: Vec<PyRef<'_, PyItemSet>>, format: &str) -> PyResult<String> {
    let sets: Vec<EvaluationItemSet> = itemsets.iter().map(|s| s.inner.clone()).collect();
    report::matrix(&sets, report_format(format)?).map_err(|d| rejected("matrix refused", vec![d]))
}

/// Names of the 19 taxonomy leaves in report order.
#[pyfunction]
fn leaves() -> Vec<&'static str> {
    dsalign::Leaf::ALL.iter().map(|l| l.name()).collect()
}

#[pymodule]
fn pydsalign(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add("DsalignError", m.py().get_type::<DsalignError>())?;
    m.add_class::<PyDiagnostic>()?;
    m.add_class::<PyElement>()?;
    m.add_class::<PyRelation>()?;
    m.add_class::<PyItem>()?;
    m.add_class::<PyItemSet>()?;
    m.add_class::<PyModel>()?;
    m.add_function(wrap_pyfunction!(parse, m)?)?;
    m.add_function(wrap_pyfunction!(load, m)?)?;
    m.add_function(wrap_pyfunction!(check, m)?)?;
    m.add_function(wrap_pyfunction!(matrix, m)?)?;
    m.add_function(wrap_pyfunction!(leaves, m)?)?;
    Ok(())
}
