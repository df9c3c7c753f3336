//! Python bindings for finshape.

use std::sync::Arc;

use core::covers::{count_covers, enumerate_covers, leq_c};
use core::homology::{homology, weak_invariants};
use core::homotopy::{beat_points, homotopy_equivalent, is_contractible, BeatDirection};
use core::prosystem::{build_m, sw_compare as compare, verify_coherence, verify_rudimentary, SwOptions, SystemKind};
use core::simplicial::{finite_subdivision, order_complex};
use core::{Collapsibility, CoverFilter, Error, Guards};
use finshape as core;
use pyo3::create_exception;
use pyo3::exceptions::{PyException, PyValueError};
use pyo3::prelude::*;

create_exception!(finshape, GuardExceeded, PyException, "A size guard stopped an exponential search.");

fn err(e: Error) -> PyErr {
    match e {
        Error::SizeGuardExceeded { .. } => GuardExceeded::new_err(e.to_string()),
        _ => PyValueError::new_err(e.to_string()),
    }
}

fn json_to_py(py: Python<'_>, value: &serde_json::Value) -> PyResult<Py<PyAny>> {
    let text = value.to_string();
    Ok(py.import("json")?.call_method1("loads", (text,))?.unbind())
}

/// A finite T0-space, stored as its specialization order.
#[pyclass(name = "FiniteSpace", module = "finshape", frozen)]
struct PySpace {
    inner: Arc<core::FiniteSpace>,
}

impl PySpace {
    fn wrap(space: core::FiniteSpace) -> Self {
        PySpace { inner: Arc::new(space) }
    }
}

#[pymethods]
impl PySpace {
    /// Builds the order generated by `relation`, a list of `(lower, upper)` label pairs.
    #[new]
    #[pyo3(signature = (elements, relation = Vec::new()))]
    fn new(elements: Vec<String>, relation: Vec<(String, String)>) -> PyResult<Self> {
        core::FiniteSpace::from_hasse(elements, &relation).map(PySpace::wrap).map_err(err)
    }

    /// Builds the space from its full list of open sets.
    #[staticmethod]
    fn from_topology(elements: Vec<String>, opens: Vec<Vec<String>>) -> PyResult<Self> {
        core::FiniteSpace::from_topology(elements, &opens).map(PySpace::wrap).map_err(err)
    }

    #[staticmethod]
    fn from_json(text: &str) -> PyResult<Self> {
        core::io::parse_space(text).map(PySpace::wrap).map_err(err)
    }

    #[staticmethod]
    fn chain(n: usize) -> Self {
        PySpace::wrap(core::FiniteSpace::chain(n))
    }

    #[staticmethod]
    fn antichain(n: usize) -> Self {
        PySpace::wrap(core::FiniteSpace::antichain(n))
    }

    fn to_json(&self) -> String {
        core::io::space_to_json(&self.inner).to_string()
    }

    #[getter]
    fn labels(&self) -> Vec<String> {
        self.inner.labels().to_vec()
    }

    fn __len__(&self) -> usize {
        self.inner.len()
    }

    fn __eq__(&self, other: PyRef<'_, PySpace>) -> bool {
        *self.inner == *other.inner
    }

    fn __repr__(&self) -> String {
        let pairs: Vec<String> = self
            .inner
            .covering_pairs()
            .into_iter()
            .map(|(a, b)| format!("{}<{}", self.inner.label(a), self.inner.label(b)))
            .collect();
        format!("FiniteSpace([{}], [{}])", self.inner.labels().join(", "), pairs.join(", "))
    }

    fn leq(&self, lower: &str, upper: &str) -> PyResult<bool> {
        let a = self.inner.index_of(lower).map_err(err)?;
        let b = self.inner.index_of(upper).map_err(err)?;
        Ok(self.inner.leq(a, b))
    }

    /// Covering pairs of the Hasse diagram.
    fn covering_pairs(&self) -> Vec<(String, String)> {
        let x = &self.inner;
        x.covering_pairs().into_iter().map(|(a, b)| (x.label(a).to_string(), x.label(b).to_string())).collect()
    }

    /// The smallest open set containing `label` (its down-set).
    fn minimal_open(&self, label: &str) -> PyResult<Vec<String>> {
        let u = self.inner.minimal_open(label).map_err(err)?;
        Ok(u.members().iter().map(|i| self.inner.label(i).to_string()).collect())
    }

    #[pyo3(signature = (guard = 16))]
    fn opens(&self, guard: usize) -> PyResult<Vec<Vec<String>>> {
        let x = &self.inner;
        let opens = x.all_opens(guard).map_err(err)?;
        Ok(opens.iter().map(|o| o.members().iter().map(|i| x.label(i).to_string()).collect()).collect())
    }

    fn connected_components(&self) -> Vec<Vec<String>> {
        let x = &self.inner;
        x.connected_components().into_iter().map(|c| c.into_iter().map(|i| x.label(i).to_string()).collect()).collect()
    }

    /// Beat points as `(label, "down" | "up")`.
    fn beat_points(&self) -> Vec<(String, &'static str)> {
        beat_points(&self.inner)
            .into_iter()
            .map(|(p, d)| {
                let dir = match d {
                    BeatDirection::Down => "down",
                    BeatDirection::Up => "up",
                };
                (self.inner.label(p).to_string(), dir)
            })
            .collect()
    }

    fn core(&self) -> PySpace {
        PySpace::wrap(core::homotopy::core(&self.inner).space().clone())
    }

    fn is_contractible(&self) -> bool {
        is_contractible(&self.inner)
    }

    fn homotopy_equivalent(&self, other: PyRef<'_, PySpace>) -> PyResult<bool> {
        homotopy_equivalent(&self.inner, &other.inner, &Guards::default()).map_err(err)
    }

    fn is_homeomorphic(&self, other: PyRef<'_, PySpace>) -> PyResult<bool> {
        let g = Guards::default();
        Ok(self.inner.is_homeomorphic(&other.inner, g.elements).map_err(err)?.is_some())
    }

    /// Homology of the order complex.
    fn homology(&self) -> PyResult<PyHomology> {
        let g = Guards::default();
        weak_invariants(&self.inner, g.faces).map(|h| PyHomology { inner: h }).map_err(err)
    }

    fn order_complex(&self) -> PyResult<PyComplex> {
        order_complex(&self.inner, Guards::default().faces).map(|k| PyComplex { inner: k }).map_err(err)
    }

    /// The face poset of the order complex.
    fn subdivision(&self) -> PyResult<PySpace> {
        finite_subdivision(&self.inner, Guards::default().faces).map(PySpace::wrap).map_err(err)
    }

    fn hasse_dot(&self) -> String {
        self.inner.hasse_dot()
    }
}

/// Integer homology groups, one entry per dimension.
#[pyclass(name = "Homology", module = "finshape", frozen)]
struct PyHomology {
    inner: core::HomologyGroups,
}

#[pymethods]
impl PyHomology {
    fn betti(&self, d: usize) -> usize {
        self.inner.betti(d)
    }

    fn torsion(&self, d: usize) -> Vec<u64> {
        self.inner.torsion(d).to_vec()
    }

    fn euler_characteristic(&self) -> i64 {
        self.inner.euler_characteristic()
    }

    fn is_point(&self) -> bool {
        self.inner.is_point()
    }

    fn to_json(&self) -> String {
        self.inner.to_json().to_string()
    }

    fn __eq__(&self, other: PyRef<'_, PyHomology>) -> bool {
        self.inner.trimmed() == other.inner.trimmed()
    }

    fn __str__(&self) -> String {
        self.inner.to_string()
    }

    fn __repr__(&self) -> String {
        format!("Homology{}", self.inner)
    }
}

/// A finite abstract simplicial complex.
#[pyclass(name = "SimplicialComplex", module = "finshape", frozen)]
struct PyComplex {
    inner: core::SimplicialComplex,
}

#[pymethods]
impl PyComplex {
    /// Closes the facets under taking faces.
    #[new]
    fn new(vertices: Vec<String>, facets: Vec<Vec<String>>) -> PyResult<Self> {
        core::SimplicialComplex::from_facet_labels(vertices, &facets, Guards::default().faces)
            .map(|k| PyComplex { inner: k })
            .map_err(err)
    }

    #[staticmethod]
    fn simplex_boundary(vertices: usize) -> Self {
        PyComplex { inner: core::SimplicialComplex::simplex_boundary(vertices) }
    }

    #[getter]
    fn vertices(&self) -> Vec<String> {
        self.inner.vertices().to_vec()
    }

    fn facets(&self) -> Vec<Vec<String>> {
        let v = self.inner.vertices();
        self.inner.facets().iter().map(|f| f.iter().map(|&i| v[i].clone()).collect()).collect()
    }

    fn f_vector(&self) -> Vec<usize> {
        self.inner.f_vector()
    }

    fn euler_characteristic(&self) -> i64 {
        self.inner.euler_characteristic()
    }

    fn homology(&self) -> PyResult<PyHomology> {
        homology(&self.inner).map(|h| PyHomology { inner: h }).map_err(err)
    }

    /// The apex vertex if the complex is a cone.
    fn cone_apex(&self) -> Option<String> {
        self.inner.is_cone().map(|v| self.inner.vertices()[v].clone())
    }

    /// `True`, `False`, or `None` when the step budget ran out.
    #[pyo3(signature = (step_bound = 100_000))]
    fn collapsible(&self, step_bound: usize) -> Option<bool> {
        match self.inner.collapsible(step_bound) {
            Collapsibility::Collapsible => Some(true),
            Collapsibility::NotCollapsible => Some(false),
            Collapsibility::Unknown => None,
        }
    }

    fn face_poset(&self) -> PySpace {
        PySpace::wrap(core::simplicial::face_poset(&self.inner))
    }

    fn __len__(&self) -> usize {
        self.inner.face_count()
    }
}

/// An open cover of a finite space.
#[pyclass(name = "Cover", module = "finshape", frozen)]
struct PyCover {
    inner: core::Cover,
}

#[pymethods]
impl PyCover {
    #[new]
    fn new(space: PyRef<'_, PySpace>, members: Vec<Vec<String>>) -> PyResult<Self> {
        core::Cover::from_labels(space.inner.clone(), &members).map(|c| PyCover { inner: c }).map_err(err)
    }

    /// The cover by minimal open sets.
    #[staticmethod]
    fn minimal_basis(space: PyRef<'_, PySpace>) -> Self {
        PyCover { inner: core::Cover::minimal_basis(space.inner.clone()) }
    }

    #[getter]
    fn space(&self) -> PySpace {
        PySpace { inner: self.inner.space().clone() }
    }

    #[getter]
    fn members(&self) -> Vec<Vec<String>> {
        let x = self.inner.space();
        self.inner.members().iter().map(|m| m.iter().map(|i| x.label(i).to_string()).collect()).collect()
    }

    fn __len__(&self) -> usize {
        self.inner.len()
    }

    fn __eq__(&self, other: PyRef<'_, PyCover>) -> bool {
        self.inner == other.inner
    }

    fn __repr__(&self) -> String {
        format!("Cover({})", self.inner.member_labels().join(" "))
    }

    fn is_basis_like(&self) -> bool {
        self.inner.is_basis_like()
    }

    fn is_intersection_closed(&self) -> bool {
        self.inner.is_intersection_closed()
    }

    fn refines(&self, coarse: PyRef<'_, PyCover>) -> PyResult<bool> {
        self.inner.refines(&coarse.inner).map_err(err)
    }

    fn intersection_closure(&self) -> PyCover {
        PyCover { inner: self.inner.intersection_closure() }
    }

    /// The cover's members ordered by inclusion.
    fn to_poset(&self) -> PySpace {
        PySpace::wrap(self.inner.to_poset())
    }

    fn nerve(&self) -> PyResult<PyComplex> {
        self.inner.nerve(Guards::default().faces).map(|k| PyComplex { inner: k }).map_err(err)
    }

    /// A projection onto `coarse` as a list of indices into its members, or
    /// `None` when there is none.
    fn projection_to(&self, coarse: PyRef<'_, PyCover>) -> PyResult<Option<Vec<usize>>> {
        Ok(leq_c(&self.inner, &coarse.inner).map_err(err)?.map(|p| p.assignment().to_vec()))
    }

    fn to_json(&self) -> String {
        core::io::cover_to_json(&self.inner).to_string()
    }
}

fn filter(name: &str) -> PyResult<CoverFilter> {
    match name {
        "all" => Ok(CoverFilter::All),
        "basis_like" => Ok(CoverFilter::BasisLike),
        "intersection_closed" => Ok(CoverFilter::IntersectionClosed),
        _ => Err(PyValueError::new_err(format!("unknown cover filter `{name}`"))),
    }
}

/// Covers of `space`: `"all"`, `"basis_like"` or `"intersection_closed"`.
#[pyfunction]
#[pyo3(signature = (space, kind = "basis_like"))]
fn covers(space: PyRef<'_, PySpace>, kind: &str) -> PyResult<Vec<PyCover>> {
    let stream = enumerate_covers(&space.inner, filter(kind)?, &Guards::default()).map_err(err)?;
    Ok(stream.map(|c| PyCover { inner: c }).collect())
}

#[pyfunction]
#[pyo3(signature = (space, kind = "basis_like"))]
fn cover_count(space: PyRef<'_, PySpace>, kind: &str) -> PyResult<u128> {
    count_covers(&space.inner, filter(kind)?, &Guards::default()).map_err(err)
}

/// Posets with exactly `n` elements (or at most `n` when `cumulative`),
/// one per isomorphism class.
#[pyfunction]
#[pyo3(signature = (n, cumulative = false))]
fn census(n: usize, cumulative: bool) -> PyResult<Vec<PySpace>> {
    let spaces = if cumulative { core::census::census(n) } else { core::census::posets_up_to_iso(n) };
    Ok(spaces.map_err(err)?.into_iter().map(PySpace::wrap).collect())
}

/// Compares weak homotopy types; returns the verdict with its evidence.
#[pyfunction]
#[pyo3(signature = (left, right, subdivisions = 1))]
fn sw_compare(
    py: Python<'_>,
    left: PyRef<'_, PySpace>,
    right: PyRef<'_, PySpace>,
    subdivisions: usize,
) -> PyResult<Py<PyAny>> {
    let options = SwOptions { subdivisions, guards: Guards::default() };
    let (x, y) = (left.inner.clone(), right.inner.clone());
    let verdict = py.detach(move || compare(&x, &y, &options));
    json_to_py(py, &verdict.to_json())
}

/// Checks every composite of bonds in the full system against the direct bond.
#[pyfunction]
#[pyo3(signature = (space, parallel = false))]
fn coherence(py: Python<'_>, space: PyRef<'_, PySpace>, parallel: bool) -> PyResult<Py<PyAny>> {
    let g = Guards::default();
    let system = build_m(&space.inner, SystemKind::Full, &g).map_err(err)?;
    let r = py.detach(|| verify_coherence(&system, &g, parallel));
    let failures: Vec<String> =
        r.failures.iter().map(|f| format!("{} <= {} <= {}: {}", f.fine, f.middle, f.coarse, f.reason)).collect();
    let value = serde_json::json!({
        "index_size": r.index_size,
        "relation_edges": r.relation_edges,
        "triples_checked": r.triples_checked,
        "failures": failures,
        "passed": r.passed(),
    });
    json_to_py(py, &value)
}

/// Checks that the minimal basis sits above every basis-like cover it should.
#[pyfunction]
fn rudimentary(py: Python<'_>, space: PyRef<'_, PySpace>) -> PyResult<Py<PyAny>> {
    let r = verify_rudimentary(&space.inner, &Guards::default()).map_err(err)?;
    let value = serde_json::json!({
        "covers_checked": r.covers_checked,
        "above_basis": r.above_basis,
        "failures": r.failures,
        "passed": r.passed(),
    });
    json_to_py(py, &value)
}

#[pymodule(name = "finshape")]
fn finshape_module(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<PySpace>()?;
    m.add_class::<PyHomology>()?;
    m.add_class::<PyComplex>()?;
    m.add_class::<PyCover>()?;
    m.add_function(wrap_pyfunction!(covers, m)?)?;
    m.add_function(wrap_pyfunction!(cover_count, m)?)?;
    m.add_function(wrap_pyfunction!(census, m)?)?;
    m.add_function(wrap_pyfunction!(sw_compare, m)?)?;
    m.add_function(wrap_pyfunction!(coherence, m)?)?;
    m.add_function(wrap_pyfunction!(rudimentary, m)?)?;
    m.add("GuardExceeded", m.py().get_type::<GuardExceeded>())?;
    Ok(())
}
