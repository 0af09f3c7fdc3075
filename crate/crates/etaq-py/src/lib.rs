//! Python bindings. Rationals cross the boundary as `fractions.Fraction`,
//! structured results as plain dicts and lists.

use etaq::charclass::classify as classify_level;
use etaq::dims::{dimension as dimension_of, DimQuery};
use etaq::eisenstein::{verify_identity, EisParams};
use etaq::etaquot::{parse_rational, EtaQuotient as Core};
use etaq::gamma0::invariants as curve_invariants;
use etaq::hecke::{eigen_report, HeckeContext};
use etaq::qseries::expand as expand_series;
use etaq::search::{search_admissible, TypeFilter};
use etaq::Error;
use num_rational::{BigRational, Ratio};
use pyo3::exceptions::{PyRuntimeError, PyValueError};
use pyo3::prelude::*;
use serde::Serialize;

fn to_py(e: Error) -> PyErr {
    match e {
        Error::Internal(_) => PyRuntimeError::new_err(e.to_string()),
        _ => PyValueError::new_err(e.to_string()),
    }
}

fn fraction<'py>(py: Python<'py>, q: &BigRational) -> PyResult<Bound<'py, PyAny>> {
    py.import("fractions")?.getattr("Fraction")?.call1((q.to_string(),))
}

/// Round-trips a serializable value through json.loads.
fn from_json<'py, T: Serialize>(py: Python<'py>, v: &T) -> PyResult<Bound<'py, PyAny>> {
    let text = serde_json::to_string(v).map_err(|e| PyRuntimeError::new_err(e.to_string()))?;
    py.import("json")?.getattr("loads")?.call1((text,))
}

fn small_ratio(s: &str) -> PyResult<Ratio<i64>> {
    let q = parse_rational(s).ok_or_else(|| PyValueError::new_err(format!("not a rational: {s:?}")))?;
    let n = i64::try_from(q.numer()).map_err(|_| PyValueError::new_err("numerator too large"))?;
    let d = i64::try_from(q.denom()).map_err(|_| PyValueError::new_err("denominator too large"))?;
    Ok(Ratio::new(n, d))
}

/// An eta-quotient prod eta(n tau)^r_n, parsed from "1^-4 2^10 4^-4".
#[pyclass(name = "EtaQuotient", frozen)]
struct PyEtaQuotient {
    inner: Core,
}

#[pymethods]
impl PyEtaQuotient {
    #[new]
    #[pyo3(signature = (text, level=None))]
    fn new(text: &str, level: Option<u64>) -> PyResult<Self> {
        let f = Core::parse(text).map_err(to_py)?;
        let inner = match level {
            Some(n) => f.with_level(n).map_err(to_py)?,
            None => f,
        };
        Ok(PyEtaQuotient { inner })
    }

    #[getter]
    fn level(&self) -> u64 {
        self.inner.level()
    }

    #[getter]
    fn weight<'py>(&self, py: Python<'py>) -> PyResult<Bound<'py, PyAny>> {
        fraction(py, &self.inner.weight())
    }

    #[getter]
    fn cover_index(&self) -> u64 {
        self.inner.cover_index()
    }

    /// {n: r_n} over the nonzero exponents.
    fn exponents<'py>(&self, py: Python<'py>) -> PyResult<Vec<(u64, Bound<'py, PyAny>)>> {
        self.inner.exponents().iter().map(|(&n, r)| Ok((n, fraction(py, r)?))).collect()
    }

    /// 24 times the order at the cusps 1/c, keyed by c.
    fn cusp_orders<'py>(&self, py: Python<'py>) -> PyResult<Vec<(u64, Bound<'py, PyAny>)>> {
        let x = self.inner.cusp_orders();
        etaq::ntheory::divisors(self.inner.level())
            .into_iter()
            .zip(&x.x)
            .map(|(c, v)| Ok((c, fraction(py, v)?)))
            .collect()
    }

    fn is_holomorphic(&self) -> bool {
        self.inner.is_holomorphic()
    }

    fn is_cuspform_side(&self) -> bool {
        self.inner.is_cuspform_side()
    }

    /// (exponent, coefficient) pairs of the q-expansion up to offset + terms.
    fn expand<'py>(&self, py: Python<'py>, terms: usize) -> PyResult<Vec<(Bound<'py, PyAny>, Bound<'py, PyAny>)>> {
        let s = expand_series(&self.inner, terms);
        s.coeffs()
            .iter()
            .enumerate()
            .map(|(j, c)| {
                let e = s.offset() + BigRational::from_integer(j.into());
                Ok((fraction(py, &e)?, fraction(py, c)?))
            })
            .collect()
    }

    fn __str__(&self) -> String {
        self.inner.to_string()
    }

    fn __repr__(&self) -> String {
        format!("EtaQuotient({:?}, level={})", self.inner.to_string(), self.inner.level())
    }

    fn __eq__(&self, other: &Self) -> bool {
        self.inner == other.inner
    }
}

#[pyfunction]
fn invariants(py: Python<'_>, n: u64) -> PyResult<Bound<'_, PyAny>> {
    from_json(py, &curve_invariants(n))
}

#[pyfunction]
#[pyo3(signature = (n, ordering=None))]
fn classify(py: Python<'_>, n: u64, ordering: Option<Vec<u64>>) -> PyResult<Bound<'_, PyAny>> {
    from_json(py, &classify_level(n, ordering.as_deref()).map_err(to_py)?)
}

/// Dimension of M_k(N, chi_f) with k = weight(f) + 2t.
#[pyfunction]
#[pyo3(signature = (f, t=0))]
fn dimension<'py>(py: Python<'py>, f: &PyEtaQuotient, t: u64) -> PyResult<Bound<'py, PyAny>> {
    from_json(py, &dimension_of(&DimQuery::new(f.inner.clone(), t)))
}

/// Rows {l, n, lhs, rhs, equal} comparing T_l f with c_l f.
#[pyfunction]
#[pyo3(signature = (f, lmax=25, nmax=10))]
fn hecke_check<'py>(py: Python<'py>, f: &PyEtaQuotient, lmax: u64, nmax: u64) -> PyResult<Bound<'py, PyAny>> {
    let ctx = HeckeContext::new(&f.inner).map_err(to_py)?;
    let series = expand_series(&f.inner, ctx.terms_needed(lmax, nmax));
    from_json(py, &eigen_report(&ctx, &series, lmax, nmax).map_err(to_py)?)
}

/// Admissible eta-quotients at the given levels; `types` is "I", "II" or "both".
#[pyfunction]
#[pyo3(signature = (levels, types="I"))]
fn search<'py>(py: Python<'py>, levels: Vec<u64>, types: &str) -> PyResult<Bound<'py, PyAny>> {
    let filter = match types.to_ascii_lowercase().as_str() {
        "i" => TypeFilter::I,
        "ii" => TypeFilter::II,
        "both" => TypeFilter::BOTH,
        _ => return Err(PyValueError::new_err(format!("unknown type filter {types:?}"))),
    };
    let recs: Vec<_> = search_admissible(&levels, filter).iter().map(|r| r.to_json()).collect();
    from_json(py, &recs)
}

/// Level-4 Eisenstein identity for eta(t)^r1 eta(2t)^r2 eta(4t)^r4.
#[pyfunction]
#[pyo3(signature = (r2, r4, nmax=8, cmax=2000, tol=1e-3))]
fn eis_verify<'py>(py: Python<'py>, r2: &str, r4: &str, nmax: usize, cmax: u64, tol: f64) -> PyResult<Bound<'py, PyAny>> {
    let p = EisParams::new(small_ratio(r2)?, small_ratio(r4)?).map_err(to_py)?;
    let report = py.detach(|| verify_identity(&p, nmax, cmax, tol)).map_err(to_py)?;
    from_json(py, &report)
}

#[pymodule]
fn etaq_py(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<PyEtaQuotient>()?;
    m.add_function(wrap_pyfunction!(invariants, m)?)?;
    m.add_function(wrap_pyfunction!(classify, m)?)?;
    m.add_function(wrap_pyfunction!(dimension, m)?)?;
    m.add_function(wrap_pyfunction!(hecke_check, m)?)?;
    m.add_function(wrap_pyfunction!(search, m)?)?;
    m.add_function(wrap_pyfunction!(eis_verify, m)?)?;
    Ok(())
}
