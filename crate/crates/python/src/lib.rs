//! Python bindings: systems, facts, elimination, pruning, the shipped
//! channel derivation and the random channel oracle.
//!
//! Rationals cross the boundary as `fractions.Fraction`; inputs may be
//! `int`, `Fraction` or a string such as `"3/4"`.

use std::collections::BTreeMap;

use pyo3::exceptions::PyValueError;
use pyo3::prelude::*;
use pyo3::types::{PyDict, PyList};

use ::fmelim as core;
use core::implication::FactSet as CoreFacts;
use core::lincore::{parse_document, serialize_document, serialize_system};
use core::oracle::{rank_exact as core_rank, run_trials, QMatrix};
use core::{FarkasCertificate, InequalitySystem, LinearExpression, PrunePolicy, Rational};

fn err(e: impl std::fmt::Display) -> PyErr {
    PyValueError::new_err(e.to_string())
}

fn to_fraction<'py>(py: Python<'py>, q: &Rational) -> PyResult<Bound<'py, PyAny>> {
    py.import("fractions")?.getattr("Fraction")?.call1((q.to_string(),))
}

fn from_python(obj: &Bound<'_, PyAny>) -> PyResult<Rational> {
    let text = obj.str()?.to_string();
    text.trim().parse::<Rational>().map_err(|_| err(format!("not a rational: {text}")))
}

fn assignment(values: &Bound<'_, PyDict>) -> PyResult<BTreeMap<String, Rational>> {
    let mut out = BTreeMap::new();
    for (k, v) in values.iter() {
        out.insert(k.extract::<String>()?, from_python(&v)?);
    }
    Ok(out)
}

fn certificates<'py>(py: Python<'py>, certs: &[FarkasCertificate]) -> PyResult<Bound<'py, PyList>> {
    let list = PyList::empty(py);
    for c in certs {
        let multipliers = PyDict::new(py);
        for (label, q) in &c.multipliers {
            multipliers.set_item(label, to_fraction(py, q)?)?;
        }
        let d = PyDict::new(py);
        d.set_item("target", &c.target)?;
        d.set_item("multipliers", multipliers)?;
        list.append(d)?;
    }
    Ok(list)
}

/// A set of facts: inequalities over symbolic constants only.
#[pyclass(name = "FactSet", module = "fmelim", skip_from_py_object)]
#[derive(Clone, Default)]
pub struct FactSet {
    inner: CoreFacts,
}

#[pymethods]
impl FactSet {
    #[new]
    fn new() -> Self {
        Self::default()
    }

    fn labels(&self) -> Vec<String> {
        self.inner.iter().map(|f| f.label().to_string()).collect()
    }

    fn merged(&self, other: &FactSet) -> FactSet {
        FactSet {
            inner: self.inner.merged(&other.inner),
        }
    }

    fn __len__(&self) -> usize {
        self.inner.len()
    }

    fn __repr__(&self) -> String {
        format!("FactSet({} facts)", self.inner.len())
    }
}

/// A labelled system of canonical inequalities `expr <= 0`.
#[pyclass(name = "System", module = "fmelim", skip_from_py_object)]
#[derive(Clone)]
pub struct System {
    inner: InequalitySystem,
}

fn facts_or_empty(facts: Option<PyRef<'_, FactSet>>) -> CoreFacts {
    facts.map(|f| f.inner.clone()).unwrap_or_default()
}

#[pymethods]
impl System {
    /// Parse DSL text; facts in the text are ignored here, see `parse`.
    #[staticmethod]
    fn from_dsl(text: &str) -> PyResult<System> {
        Ok(System {
            inner: parse_document(text).map_err(err)?.system,
        })
    }

    fn to_dsl(&self) -> String {
        serialize_system(&self.inner)
    }

    fn pretty(&self) -> String {
        self.inner.pretty()
    }

    fn labels(&self) -> Vec<String> {
        self.inner.labels().into_iter().map(String::from).collect()
    }

    fn without(&self, labels: Vec<String>) -> System {
        let refs: Vec<&str> = labels.iter().map(String::as_str).collect();
        System {
            inner: self.inner.without_labels(&refs),
        }
    }

    /// Replace variable `var` by `sum(coeff * name)`; the names must already
    /// be declared in the system, e.g. `{"R1": 1, "R1c": -1}`.
    fn substitute(&self, var: &str, terms: &Bound<'_, PyDict>) -> PyResult<System> {
        let table = self.inner.table();
        let mut e = LinearExpression::zero();
        for (name, q) in assignment(terms)? {
            if table.is_variable(&name) {
                e.add_variable_term(&name, &q);
            } else if table.is_constant(&name) {
                e.add_constant_term(&name, &q);
            } else {
                return Err(err(format!("undeclared symbol {name}")));
            }
        }
        Ok(System {
            inner: self.inner.substitute_variable(var, &e).map_err(err)?,
        })
    }

    fn instantiate(&self, values: &Bound<'_, PyDict>) -> PyResult<System> {
        Ok(System {
            inner: self.inner.instantiate(&assignment(values)?).map_err(err)?,
        })
    }

    fn satisfied_by(&self, point: &Bound<'_, PyDict>) -> PyResult<bool> {
        self.inner.satisfied_by(&assignment(point)?).map_err(err)
    }

    /// Same constraints as `other`, ignoring labels and order.
    fn same_constraints(&self, other: &System) -> bool {
        self.inner.same_constraints(&other.inner)
    }

    /// Eliminate one variable; returns `(system, (upper, lower, free))`.
    fn eliminate(&self, var: &str) -> PyResult<(System, (usize, usize, usize))> {
        let (sys, log) = core::eliminate(&self.inner, var).map_err(err)?;
        let counts = (log.upper_bounds.len(), log.lower_bounds.len(), log.free.len());
        Ok((System { inner: sys }, counts))
    }

    #[pyo3(signature = (variables, facts=None, prune=false))]
    fn project(&self, variables: Vec<String>, facts: Option<PyRef<'_, FactSet>>, prune: bool) -> PyResult<System> {
        let vars: Vec<&str> = variables.iter().map(String::as_str).collect();
        let policy = if prune { PrunePolicy::AfterEach } else { PrunePolicy::Never };
        let p = core::project(&self.inner, &vars, &facts_or_empty(facts), policy).map_err(err)?;
        Ok(System { inner: p.system })
    }

    /// Remove implied inequalities; returns `(kept, certificates)`.
    #[pyo3(signature = (facts=None))]
    fn prune<'py>(
        &self,
        py: Python<'py>,
        facts: Option<PyRef<'_, FactSet>>,
    ) -> PyResult<(System, Bound<'py, PyList>)> {
        let (kept, certs) = core::prune(&self.inner, &facts_or_empty(facts)).map_err(err)?;
        Ok((System { inner: kept }, certificates(py, &certs)?))
    }

    #[pyo3(signature = (other, facts=None))]
    fn equivalent(&self, other: &System, facts: Option<PyRef<'_, FactSet>>) -> PyResult<bool> {
        core::systems_equivalent(&self.inner, &other.inner, &facts_or_empty(facts)).map_err(err)
    }

    fn __len__(&self) -> usize {
        self.inner.len()
    }

    fn __repr__(&self) -> String {
        format!("System({} inequalities)", self.inner.len())
    }
}

/// Parse DSL text into `(System, FactSet)`.
#[pyfunction]
fn parse(text: &str) -> PyResult<(System, FactSet)> {
    let doc = parse_document(text).map_err(err)?;
    Ok((System { inner: doc.system }, FactSet { inner: doc.facts }))
}

#[pyfunction]
#[pyo3(signature = (system, facts=None))]
fn serialize(system: &System, facts: Option<PyRef<'_, FactSet>>) -> String {
    serialize_document(&system.inner, &facts_or_empty(facts))
}

/// The shipped derivation as a dict of systems plus `"facts"`.
#[pyfunction]
fn load_paper_fixture(py: Python<'_>) -> PyResult<Bound<'_, PyDict>> {
    let f = core::rankfacts::load_paper_fixture().map_err(err)?;
    let d = PyDict::new(py);
    for (name, sys) in [
        ("start_full", &f.start_full),
        ("start_reduced", &f.start_reduced),
        ("stage1", &f.stage1),
        ("stage2", &f.stage2),
        ("final", &f.final_bounds),
    ] {
        d.set_item(name, System { inner: sys.clone() })?;
    }
    d.set_item("facts", FactSet { inner: f.facts })?;
    Ok(d)
}

/// Replay the shipped derivation; returns `(passed, report_text)`.
#[pyfunction]
fn replay() -> PyResult<(bool, String)> {
    let f = core::rankfacts::load_paper_fixture().map_err(err)?;
    let report = core::rankfacts::replay(&f).map_err(err)?;
    Ok((report.passed(), report.render()))
}

/// Exact rank of an integer matrix given as a list of rows.
#[pyfunction]
fn rank_exact(rows: Vec<Vec<i64>>) -> PyResult<usize> {
    let cols = rows.first().map_or(0, Vec::len);
    if rows.iter().any(|r| r.len() != cols) {
        return Err(err("ragged matrix"));
    }
    let flat: Vec<i64> = rows.concat();
    Ok(core_rank(&QMatrix::from_ints(rows.len(), cols, &flat)))
}

/// Antenna counts and link ranks drawn for `seed`.
#[pyfunction]
fn sample_dims(py: Python<'_>, seed: u64, max_dim: usize) -> PyResult<Bound<'_, PyDict>> {
    let d = core::oracle::sample_dims(seed, max_dim).map_err(err)?;
    let out = PyDict::new(py);
    for (k, v) in [
        ("n1", d.n1),
        ("n2", d.n2),
        ("m1", d.m1),
        ("m2", d.m2),
        ("r11", d.r11),
        ("r12", d.r12),
        ("r21", d.r21),
        ("r22", d.r22),
    ] {
        out.set_item(k, v)?;
    }
    Ok(out)
}

/// Run random channel trials; returns one summary line per trial.
#[pyfunction]
#[pyo3(signature = (trials=50, max_dim=5, seed=0, nonneg=false))]
fn oracle(py: Python<'_>, trials: usize, max_dim: usize, seed: u64, nonneg: bool) -> PyResult<(bool, Vec<String>)> {
    let f = core::rankfacts::load_paper_fixture().map_err(err)?;
    let reports = py
        .detach(|| run_trials(seed, trials, max_dim, &f, nonneg))
        .map_err(err)?;
    let passed = reports.iter().all(|r| r.passed());
    Ok((passed, reports.iter().map(|r| r.line()).collect()))
}

#[pymodule]
fn fmelim(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<System>()?;
    m.add_class::<FactSet>()?;
    m.add_function(wrap_pyfunction!(parse, m)?)?;
    m.add_function(wrap_pyfunction!(serialize, m)?)?;
    m.add_function(wrap_pyfunction!(load_paper_fixture, m)?)?;
    m.add_function(wrap_pyfunction!(replay, m)?)?;
    m.add_function(wrap_pyfunction!(rank_exact, m)?)?;
    m.add_function(wrap_pyfunction!(sample_dims, m)?)?;
    m.add_function(wrap_pyfunction!(oracle, m)?)?;
    Ok(())
}
