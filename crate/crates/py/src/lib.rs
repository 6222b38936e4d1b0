//! Python bindings: finite frames, desk algebras and their duality, the
//! compactification count, the refinement lemma and the command line.

use pyo3::exceptions::PyValueError;
use pyo3::prelude::*;

use pointfree::compactification::compactify;
use pointfree::cstar::{DeskAlgebra, StarAlgebra, Unitization};
use pointfree::exact_reals::{lemma1_refine as refine, UpperReal};
use pointfree::finite_frames::{parse_lattices, FiniteFrame, Property};
use pointfree::locale::{Discrete, Grid, Locale};
use pointfree::rational::{parse_q, pow2_neg, Q};
use pointfree::spectrum::{ideal_to_open, norm_from_positivity, open_to_ideal, spec, ClosedIdealDesc};

fn value_error(e: impl std::fmt::Display) -> PyErr {
    PyValueError::new_err(e.to_string())
}

fn rational(text: &str) -> PyResult<Q> {
    parse_q(text).map_err(value_error)
}

/// A finite distributive lattice read as a frame of opens. Elements are
/// addressed by name.
#[pyclass(name = "FiniteFrame", module = "pointfree_py", frozen)]
struct PyFrame {
    inner: FiniteFrame,
}

impl PyFrame {
    fn id(&self, name: &str) -> PyResult<usize> {
        self.inner
            .id_of(name)
            .ok_or_else(|| value_error(format!("no element {name:?} in {}", self.inner.name())))
    }

    fn label(&self, id: usize) -> String {
        self.inner.element_name(id).to_string()
    }
}

#[pymethods]
impl PyFrame {
    /// All lattices in a `.lattice` text.
    #[staticmethod]
    fn parse(text: &str) -> PyResult<Vec<PyFrame>> {
        let frames = parse_lattices(text).map_err(value_error)?;
        Ok(frames.into_iter().map(|inner| PyFrame { inner }).collect())
    }

    #[staticmethod]
    fn sierpinski() -> Self {
        PyFrame {
            inner: FiniteFrame::sierpinski(),
        }
    }

    #[staticmethod]
    fn boolean(n: usize) -> PyResult<Self> {
        if n > 6 {
            return Err(value_error("at most 6 atoms"));
        }
        Ok(PyFrame {
            inner: FiniteFrame::boolean(n),
        })
    }

    #[staticmethod]
    fn chain(n: usize) -> PyResult<Self> {
        if n == 0 {
            return Err(value_error("a chain needs at least one element"));
        }
        Ok(PyFrame {
            inner: FiniteFrame::chain(n),
        })
    }

    #[getter]
    fn name(&self) -> String {
        self.inner.name().to_string()
    }

    fn __len__(&self) -> usize {
        self.inner.len()
    }

    fn __repr__(&self) -> String {
        format!("FiniteFrame({:?}, {} elements)", self.inner.name(), self.inner.len())
    }

    fn elements(&self) -> Vec<String> {
        self.inner.element_names().to_vec()
    }

    fn bottom(&self) -> String {
        self.label(self.inner.bottom())
    }

    fn top(&self) -> String {
        self.label(self.inner.top())
    }

    fn leq(&self, a: &str, b: &str) -> PyResult<bool> {
        Ok(self.inner.leq(self.id(a)?, self.id(b)?))
    }

    fn join(&self, a: &str, b: &str) -> PyResult<String> {
        Ok(self.label(self.inner.join(self.id(a)?, self.id(b)?)))
    }

    fn meet(&self, a: &str, b: &str) -> PyResult<String> {
        Ok(self.label(self.inner.meet(self.id(a)?, self.id(b)?)))
    }

    fn implies(&self, a: &str, b: &str) -> PyResult<String> {
        Ok(self.label(self.inner.implies(self.id(a)?, self.id(b)?)))
    }

    fn negation(&self, a: &str) -> PyResult<String> {
        Ok(self.label(self.inner.negation(self.id(a)?)))
    }

    fn way_below(&self, a: &str, b: &str) -> PyResult<bool> {
        Ok(self.inner.way_below(self.id(a)?, self.id(b)?))
    }

    /// The witness `W` with `b ∨ W = 1` and `a ∧ W = 0`, if any.
    fn rather_below(&self, a: &str, b: &str) -> PyResult<Option<String>> {
        Ok(self.inner.rather_below(self.id(a)?, self.id(b)?).map(|w| self.label(w)))
    }

    fn completely_below(&self, a: &str, b: &str) -> PyResult<bool> {
        Ok(self.inner.completely_below(self.id(a)?, self.id(b)?))
    }

    /// The members `U_{k/2^depth}` of a scale from `a` to `b`.
    fn build_scale(&self, a: &str, b: &str, depth: u32) -> PyResult<Vec<String>> {
        if depth > 10 {
            return Err(value_error("depth at most 10"));
        }
        let s = self
            .inner
            .build_scale(self.id(a)?, self.id(b)?, depth)
            .map_err(value_error)?;
        Ok(s.members.iter().map(|&m| self.label(m)).collect())
    }

    /// `(holds, counterexample open)` for compact, regular,
    /// completely_regular or locally_compact.
    fn check(&self, property: &str) -> PyResult<(bool, Option<String>)> {
        let p: Property = property
            .parse()
            .map_err(|_| value_error(format!("unknown property {property:?}")))?;
        let v = self.inner.check_property(p);
        Ok((v.holds, v.counterexample.map(|c| self.label(c.open))))
    }

    fn to_dot(&self) -> String {
        self.inner.to_dot()
    }
}

/// `ℂⁿ` or the finitely supported sequences on ℕ. Elements are written
/// `i:v,j:w` with rational or Gaussian-rational values.
#[pyclass(name = "Algebra", module = "pointfree_py", frozen)]
struct PyAlgebra {
    inner: DeskAlgebra,
}

#[pymethods]
impl PyAlgebra {
    #[staticmethod]
    fn findim(n: u64) -> PyResult<Self> {
        if n == 0 {
            return Err(value_error("dimension must be positive"));
        }
        Ok(PyAlgebra {
            inner: DeskAlgebra::findim(n),
        })
    }

    #[staticmethod]
    fn finsupp() -> Self {
        PyAlgebra {
            inner: DeskAlgebra::finsupp(),
        }
    }

    #[getter]
    fn name(&self) -> String {
        self.inner.name().to_string()
    }

    fn __repr__(&self) -> String {
        format!("Algebra({:?})", self.inner.name())
    }

    /// `(lo, hi, witness)` with `lo <= ‖h‖ < hi`, found from positivity of
    /// the spectrum. Bounds are exact rationals as strings.
    #[pyo3(signature = (element, eps = "1/1048576"))]
    fn norm(&self, element: &str, eps: &str) -> PyResult<(String, String, Option<u64>)> {
        let h = self.inner.parse_element(element).map_err(value_error)?;
        let b = norm_from_positivity(&self.inner, &h, &rational(eps)?).map_err(value_error)?;
        Ok((b.lo.to_string(), b.hi.to_string(), b.witness))
    }

    /// Bracket of `‖(c, z)‖` in the unitization at precision `2^-bits`.
    #[pyo3(signature = (element, scalar, bits = 16, naive = false))]
    fn unit_norm(&self, element: &str, scalar: &str, bits: u32, naive: bool) -> PyResult<(String, String)> {
        if bits > 64 {
            return Err(value_error("at most 64 bits"));
        }
        let plus = Unitization::unchecked(self.inner.clone());
        let x = plus.parse_element(element, scalar).map_err(value_error)?;
        let n = if naive { plus.naive_norm(&x) } else { plus.plus_norm(&x) };
        let (lo, hi) = n.bracket(&pow2_neg(bits));
        Ok((lo.to_string(), hi.to_string()))
    }

    /// The open of the spectrum matching `ideal supp={..}`.
    fn ideal_to_open(&self, ideal: &str) -> PyResult<String> {
        let i = ClosedIdealDesc::parse_for(&self.inner, ideal).map_err(value_error)?;
        Ok(ideal_to_open(&self.inner, &i).to_string())
    }

    fn open_to_ideal(&self, open: &str) -> PyResult<String> {
        let u = spec(&self.inner).parse_open(open).map_err(value_error)?;
        Ok(open_to_ideal(&self.inner, &u).to_string())
    }

    /// Every open of the spectrum, when there are finitely many.
    fn spectrum_opens(&self) -> Option<Vec<String>> {
        let x = spec(&self.inner);
        x.all_opens().map(|opens| opens.iter().map(|u| x.show(u)).collect())
    }
}

/// Number of opens of the one-point compactification of `n` discrete points.
#[pyfunction]
fn compactified_open_count(n: u64) -> PyResult<usize> {
    if n > 10 {
        return Err(value_error("at most 10 points"));
    }
    let xi = compactify(Discrete::finite(n), &Grid::small()).map_err(value_error)?;
    Ok(xi.all_opens().map_or(0, |o| o.len()))
}

/// The bound chain `q + e, q + e/2, ..., q + e/2^k` for a rational `x`.
#[pyfunction]
fn lemma1_refine(x: &str, q: &str, e: &str, k: u32) -> PyResult<Vec<String>> {
    if k > 256 {
        return Err(value_error("at most 256 steps"));
    }
    let x = UpperReal::rational(rational(x)?);
    let cert = refine(&x, &rational(q)?, &rational(e)?, k).map_err(value_error)?;
    Ok(cert.chain().iter().map(|b| b.to_string()).collect())
}

/// Runs the command line with `args` (without the program name); returns
/// `(stdout, stderr, exit code)`.
#[pyfunction]
fn run(args: Vec<String>) -> (String, String, i32) {
    let out = pointfree::cli::run(std::iter::once("pointfree".to_string()).chain(args));
    (out.stdout, out.stderr, out.code)
}

#[pymodule]
pub fn pointfree_py(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<PyFrame>()?;
    m.add_class::<PyAlgebra>()?;
    m.add_function(wrap_pyfunction!(compactified_open_count, m)?)?;
    m.add_function(wrap_pyfunction!(lemma1_refine, m)?)?;
    m.add_function(wrap_pyfunction!(run, m)?)?;
    Ok(())
}
