//! Python bindings for the fgroup crate: exact elements of Thompson's
//! group F, the slope homomorphism, rectangular-subgroup generators with
//! their certificate, and the finite-index subgroup classification.

use std::collections::HashMap;

use pyo3::exceptions::PyValueError;
use pyo3::prelude::*;
use pyo3::types::PyDict;

use fgroup::dyadic::{display_rational, parse_rational};
use fgroup::lattice::LatticeSubgroup;
use fgroup::thompson;
use fgroup::{FIFSubgroup, PLMap};

fn value_err(e: impl std::fmt::Display) -> PyErr {
    PyValueError::new_err(e.to_string())
}

/// An element of Thompson's group F, stored as its exact breakpoint list.
#[pyclass(frozen, eq)]
#[derive(Clone, PartialEq)]
struct Element {
    inner: PLMap,
}

#[pymethods]
impl Element {
    /// Parse from breakpoint text such as "(1/4,1/2);(1/2,3/4)".
    /// The empty string and "identity" give the identity map.
    #[new]
    fn new(breaks: &str) -> PyResult<Self> {
        let trimmed = breaks.trim();
        if trimmed.is_empty() || trimmed == "identity" {
            return Ok(Element { inner: PLMap::identity() });
        }
        let inner = PLMap::parse_breaks_text(trimmed).map_err(value_err)?;
        Ok(Element { inner })
    }

    #[staticmethod]
    fn identity() -> Self {
        Element { inner: PLMap::identity() }
    }

    fn breaks(&self) -> Vec<(String, String)> {
        self.inner
            .breaks()
            .iter()
            .map(|(x, y)| (x.to_string(), y.to_string()))
            .collect()
    }

    fn is_identity(&self) -> bool {
        self.inner.is_identity()
    }

    /// Image of a rational point, both sides written as strings like "5/8".
    fn evaluate(&self, t: &str) -> PyResult<String> {
        let t = parse_rational(t).map_err(value_err)?;
        let image = self.inner.evaluate(&t).map_err(value_err)?;
        Ok(display_rational(&image))
    }

    /// Composition in word order: self first, then other.
    fn compose(&self, other: &Element) -> Element {
        Element { inner: self.inner.compose(&other.inner) }
    }

    fn __mul__(&self, other: &Element) -> Element {
        self.compose(other)
    }

    fn inverse(&self) -> Element {
        Element { inner: self.inner.inverse() }
    }

    fn conjugate(&self, by: &Element) -> Element {
        Element { inner: self.inner.conjugate(&by.inner) }
    }

    fn commutator(&self, other: &Element) -> Element {
        Element { inner: self.inner.commutator(&other.inner) }
    }

    fn power(&self, n: i64) -> Element {
        Element { inner: self.inner.power(n) }
    }

    /// Conjugate by t -> 1-t: the same element read from the right end.
    fn rev(&self) -> Element {
        Element { inner: self.inner.rev() }
    }

    /// Pair of log2 slopes at the endpoints 0 and 1.
    fn phi(&self) -> (i64, i64) {
        let p = thompson::phi(&self.inner);
        (p.e0, p.e1)
    }

    /// Maximal open intervals of moved points, as pairs of rational strings.
    fn orbitals(&self) -> Vec<(String, String)> {
        self.inner
            .orbitals()
            .iter()
            .map(|o| (display_rational(&o.lo), display_rational(&o.hi)))
            .collect()
    }

    fn __str__(&self) -> String {
        if self.inner.is_identity() {
            "identity".to_owned()
        } else {
            self.inner.to_breaks_text()
        }
    }

    fn __repr__(&self) -> String {
        format!("Element(\"{}\")", self.__str__())
    }
}

/// A finite-index subgroup of F, named by its slope-pair lattice.
#[pyclass(frozen, eq)]
#[derive(Clone, PartialEq)]
struct Subgroup {
    inner: FIFSubgroup,
}

#[pymethods]
impl Subgroup {
    /// Build from the subgroup generators' slope pairs, e.g. [(3,7),(5,11)].
    #[new]
    fn new(pairs: Vec<(i64, i64)>) -> PyResult<Self> {
        let inner = FIFSubgroup::from_phi_pairs(&pairs).map_err(value_err)?;
        Ok(Subgroup { inner })
    }

    /// Build from group elements generating the subgroup together with the
    /// commutator subgroup.
    #[staticmethod]
    fn from_elements(elements: Vec<Element>) -> PyResult<Self> {
        let maps: Vec<PLMap> = elements.into_iter().map(|e| e.inner).collect();
        let inner = FIFSubgroup::from_f_generators(&maps).map_err(value_err)?;
        Ok(Subgroup { inner })
    }

    /// Build directly from a canonical lattice triple (g, h, m).
    #[staticmethod]
    fn from_triple(g: i64, h: i64, m: i64) -> PyResult<Self> {
        let lattice = LatticeSubgroup::from_triple(g, h, m).map_err(value_err)?;
        Ok(Subgroup { inner: FIFSubgroup::from_lattice(lattice) })
    }

    /// Canonical lattice basis triple (g, h, m) for {(g,h), (0,m)}.
    #[getter]
    fn triple(&self) -> (i64, i64, i64) {
        let l = self.inner.lattice();
        (l.g(), l.h(), l.m())
    }

    #[getter]
    fn index(&self) -> i128 {
        self.inner.index()
    }

    #[getter]
    fn inner_rectangle(&self) -> (i128, i128) {
        let r = self.inner.lattice().inner();
        (r.a, r.b)
    }

    #[getter]
    fn outer_rectangle(&self) -> (i128, i128) {
        let r = self.inner.lattice().outer();
        (r.a, r.b)
    }

    #[getter]
    fn residue(&self) -> i64 {
        self.inner.lattice().residue()
    }

    /// Generator of the cyclic quotient by the inner rectangular subgroup,
    /// returned as ((x, y), order).
    #[getter]
    fn quotient_generator(&self) -> ((i128, i128), i64) {
        self.inner.quotient_by_rectangular()
    }

    #[getter]
    fn isomorphic_to_f(&self) -> bool {
        self.inner.isomorphic_to_f()
    }

    /// Triple after dividing out the outer rectangle scales.
    #[getter]
    fn scaled_triple(&self) -> (i64, i64, i64) {
        let t = self.inner.lattice().tau_rescale();
        (t.g(), t.h(), t.m())
    }

    fn is_isomorphic(&self, other: &Subgroup) -> bool {
        self.inner.are_isomorphic(&other.inner).isomorphic
    }

    /// "equal-after-tau", "equal-after-tau-and-rev", or None.
    fn isomorphism_witness(&self, other: &Subgroup) -> Option<String> {
        let verdict = self.inner.are_isomorphic(&other.inner);
        verdict.witness.map(|w| w.to_string())
    }

    /// All subgroups of the given index, in canonical triple order.
    #[staticmethod]
    fn enumerate_index(n: i64) -> PyResult<Vec<Subgroup>> {
        let subs = LatticeSubgroup::enumerate_index(n).map_err(value_err)?;
        Ok(subs
            .into_iter()
            .map(|l| Subgroup { inner: FIFSubgroup::from_lattice(l) })
            .collect())
    }

    /// Subgroups of the given index grouped into isomorphism classes.
    #[staticmethod]
    fn classify_index(n: i64) -> PyResult<Vec<Vec<Subgroup>>> {
        let classes = fgroup::classify::classify_index(n).map_err(value_err)?;
        Ok(classes
            .into_iter()
            .map(|class| {
                class
                    .into_iter()
                    .map(|l| Subgroup { inner: FIFSubgroup::from_lattice(l) })
                    .collect()
            })
            .collect())
    }

    fn __str__(&self) -> String {
        self.inner.lattice().to_string()
    }

    fn __repr__(&self) -> String {
        let (g, h, m) = self.triple();
        format!("Subgroup.from_triple({g}, {h}, {m})")
    }
}

/// The standard generator pair (x0, x1) of F.
#[pyfunction]
fn generators() -> (Element, Element) {
    let (x0, x1) = thompson::standard_generators();
    (Element { inner: x0 }, Element { inner: x1 })
}

/// The n-th generator x_n of the infinite presentation.
#[pyfunction]
fn generator_x(n: u32) -> Element {
    Element { inner: thompson::x_n(n) }
}

/// The pair (g0, g1) generating the copy of F supported on [3/8, 7/8].
#[pyfunction]
fn g0_g1() -> (Element, Element) {
    let (g0, g1) = thompson::g0_g1();
    (Element { inner: g0 }, Element { inner: g1 })
}

/// Rescale an element supported in [3/8, 7/8] by t -> 2(t - 3/8).
#[pyfunction]
fn omega_rescale(elem: &Element) -> PyResult<Element> {
    let inner = thompson::omega_rescale(&elem.inner).map_err(value_err)?;
    Ok(Element { inner })
}

/// Evaluate a word such as "[x0 x1^-1, x1^x0]" over the named generators
/// x0, x1, f0, f1, g0, g1, extended by the optional environment dict.
#[pyfunction]
#[pyo3(signature = (text, env=None))]
fn word(text: &str, env: Option<HashMap<String, Element>>) -> PyResult<Element> {
    let expr = thompson::parse_word(text).map_err(value_err)?;
    let mut bindings = thompson::word::default_env();
    if let Some(extra) = env {
        for (name, elem) in extra {
            bindings.insert(name, elem.inner);
        }
    }
    let inner = thompson::eval_word(&expr, &bindings).map_err(value_err)?;
    Ok(Element { inner })
}

/// Two-element generating set (y0, y1) of the rectangular subgroup K_{a,b}.
/// The seed only varies the interpolation; the derived elements are fixed.
#[pyfunction]
#[pyo3(signature = (a, b, seed=None))]
fn kab_generators(a: u32, b: u32, seed: Option<u64>) -> PyResult<(Element, Element)> {
    if a < 1 || b < 1 {
        return Err(value_err("rectangular parameters must be positive"));
    }
    let (y0, y1) = thompson::kab_generators(a, b, seed);
    Ok((Element { inner: y0 }, Element { inner: y1 }))
}

/// Run every generating-pair check for K_{a,b} and report the outcomes.
#[pyfunction]
fn kab_certificate<'py>(
    py: Python<'py>,
    a: u32,
    b: u32,
    y0: &Element,
    y1: &Element,
) -> PyResult<Bound<'py, PyDict>> {
    let report = thompson::verify_kab_certificate(a, b, &y0.inner, &y1.inner);
    let dict = PyDict::new(py);
    dict.set_item("a", report.a)?;
    dict.set_item("b", report.b)?;
    dict.set_item("all_passed", report.all_passed())?;
    let checks: Vec<Bound<'py, PyDict>> = report
        .checks
        .iter()
        .map(|c| {
            let check = PyDict::new(py);
            check.set_item("name", c.name)?;
            check.set_item("passed", c.passed)?;
            check.set_item("detail", &c.detail)?;
            Ok(check)
        })
        .collect::<PyResult<_>>()?;
    dict.set_item("checks", checks)?;
    Ok(dict)
}

#[pymodule]
fn fgroup_py(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<Element>()?;
    m.add_class::<Subgroup>()?;
    m.add_function(wrap_pyfunction!(generators, m)?)?;
    m.add_function(wrap_pyfunction!(generator_x, m)?)?;
    m.add_function(wrap_pyfunction!(g0_g1, m)?)?;
    m.add_function(wrap_pyfunction!(omega_rescale, m)?)?;
    m.add_function(wrap_pyfunction!(word, m)?)?;
    m.add_function(wrap_pyfunction!(kab_generators, m)?)?;
    m.add_function(wrap_pyfunction!(kab_certificate, m)?)?;
    Ok(())
}
