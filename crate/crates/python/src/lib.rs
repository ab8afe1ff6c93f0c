//! Python bindings for `genosc`.

use genosc::interbasis::{self, Route};
use genosc::model::{self, Basis, BasisState};
use genosc::verify::{self, Suite, SuiteConfig};
use genosc::{Branch, CartesianState, CylindricalState, PolarState, SphericalState};
use pyo3::exceptions::PyValueError;
use pyo3::prelude::*;

fn py_err(e: genosc::Error) -> PyErr {
    PyValueError::new_err(e.to_string())
}

fn parse<T: std::str::FromStr<Err = genosc::Error>>(s: &str) -> PyResult<T> {
    s.parse().map_err(py_err)
}

/// Frequency, barrier strengths and branch signs of an oscillator.
#[pyclass(name = "SystemParams", frozen, from_py_object)]
#[derive(Clone)]
struct PySystemParams {
    inner: genosc::SystemParams,
}

#[pymethods]
impl PySystemParams {
    #[new]
    #[pyo3(signature = (omega, k, signs = None))]
    fn new(omega: f64, k: Vec<f64>, signs: Option<Vec<String>>) -> PyResult<Self> {
        let signs: Vec<Branch> = match signs {
            Some(s) => s.iter().map(|t| parse(t)).collect::<PyResult<_>>()?,
            None => vec![Branch::Plus; k.len()],
        };
        let inner = genosc::SystemParams::new(omega, &k, &signs).map_err(py_err)?;
        Ok(Self { inner })
    }

    #[getter]
    fn omega(&self) -> f64 {
        self.inner.omega()
    }

    #[getter]
    fn k(&self) -> Vec<f64> {
        self.inner.k().to_vec()
    }

    #[getter]
    fn signs(&self) -> Vec<&'static str> {
        self.inner.signs().iter().map(|s| s.symbol()).collect()
    }

    #[getter]
    fn dim(&self) -> usize {
        self.inner.dim()
    }

    /// Effective exponent of one axis, `σ k`.
    fn nu(&self, axis: usize) -> PyResult<f64> {
        if axis >= self.inner.dim() {
            return Err(PyValueError::new_err(format!("axis {axis} out of range")));
        }
        Ok(self.inner.nu(axis))
    }

    fn energy(&self, n: usize) -> f64 {
        model::energy(&self.inner, n)
    }

    /// Number of states of level `n`.
    fn degeneracy(&self, n: usize) -> usize {
        model::cartesian_states(self.inner.dim(), n).len()
    }

    fn __repr__(&self) -> String {
        format!("SystemParams(omega={}, k={:?}, signs={:?})", self.inner.omega(), self.inner.k(), self.signs())
    }
}

fn state(basis: &str, q: &[usize]) -> PyResult<BasisState> {
    let basis: Basis = parse(basis)?;
    let want = match basis {
        Basis::Cartesian => q.len().clamp(1, 3),
        Basis::Polar => 2,
        Basis::Cylindrical | Basis::Spherical => 3,
    };
    if q.len() != want {
        return Err(PyValueError::new_err(format!("{basis:?} state needs {want} quantum numbers, got {}", q.len())));
    }
    Ok(match basis {
        Basis::Cartesian => BasisState::Cartesian(CartesianState::new(q)),
        Basis::Polar => BasisState::Polar(PolarState { n_rho: q[0], m: q[1] }),
        Basis::Cylindrical => BasisState::Cylindrical(CylindricalState { n_rho: q[0], m: q[1], n3: q[2] }),
        Basis::Spherical => BasisState::Spherical(SphericalState { n_r: q[0], q: q[1], m: q[2] }),
    })
}

/// Wavefunction of a basis state at Cartesian points.
#[pyfunction]
fn psi(params: &PySystemParams, basis: &str, quanta: Vec<usize>, points: Vec<Vec<f64>>) -> PyResult<Vec<f64>> {
    let s = state(basis, &quanta)?;
    points.iter().map(|p| model::psi_at(&params.inner, &s, p).map_err(py_err)).collect()
}

/// A basis state summed over its expansion in another basis, at Cartesian points.
#[pyfunction]
#[pyo3(signature = (params, basis, quanta, target, points, route = "cgc"))]
fn expand(
    params: &PySystemParams,
    basis: &str,
    quanta: Vec<usize>,
    target: &str,
    points: Vec<Vec<f64>>,
    route: &str,
) -> PyResult<Vec<f64>> {
    let s = state(basis, &quanta)?;
    let target: Basis = parse(target)?;
    let route: Route = parse(route)?;
    points
        .iter()
        .map(|p| interbasis::expand(&params.inner, &s, target, p, route).map_err(py_err))
        .collect()
}

fn rows(m: &nalgebra::DMatrix<f64>) -> Vec<Vec<f64>> {
    m.row_iter().map(|r| r.iter().copied().collect()).collect()
}

/// Cartesian to polar matrix, rows `n1`, columns `m`.
#[pyfunction]
#[pyo3(signature = (params, n, route = "cgc"))]
fn w_matrix(params: &PySystemParams, n: usize, route: &str) -> PyResult<Vec<Vec<f64>>> {
    let m = interbasis::w_matrix(&params.inner, n, parse(route)?).map_err(py_err)?;
    Ok(rows(&m.entries))
}

/// Cylindrical to spherical matrix at fixed `m`, rows `n3`, columns `q`.
#[pyfunction]
#[pyo3(signature = (params, n, m, route = "cgc"))]
fn v_matrix(params: &PySystemParams, n: usize, m: usize, route: &str) -> PyResult<Vec<Vec<f64>>> {
    let v = interbasis::v_matrix(&params.inner, n, m, parse(route)?).map_err(py_err)?;
    Ok(rows(&v.entries))
}

/// Cartesian to spherical coefficients as `(n1, n2, n3, m, q, value)`.
#[pyfunction]
#[pyo3(signature = (params, n, route = "cgc"))]
fn c_table(params: &PySystemParams, n: usize, route: &str) -> PyResult<Vec<(usize, usize, usize, usize, usize, f64)>> {
    let t = interbasis::c_table(&params.inner, n, parse(route)?).map_err(py_err)?;
    Ok(t.into_iter().map(|e| (e.n1, e.n2, e.n3, e.m, e.q, e.value)).collect())
}

/// Residuals of the quadratic closure relations on level `n`.
#[pyfunction]
fn quadratic_algebra(params: &PySystemParams, n: usize) -> PyResult<Vec<(String, f64)>> {
    let r = genosc::algebra::check_quadratic_algebra(&params.inner, n).map_err(py_err)?;
    Ok(r.into_iter().map(|x| (x.identity, x.residual)).collect())
}

/// Runs a verification suite and returns its JSON report.
#[pyfunction]
#[pyo3(signature = (suite, seed = 42, draws = None))]
fn run_suite(py: Python<'_>, suite: &str, seed: u64, draws: Option<usize>) -> PyResult<String> {
    let suite: Suite = parse(suite)?;
    let cfg = SuiteConfig { draws, ..SuiteConfig::seeded(seed) };
    let report = py.detach(|| verify::run_suite(suite, &cfg)).map_err(py_err)?;
    Ok(report.to_json())
}

#[pymodule]
fn pygenosc(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<PySystemParams>()?;
    m.add_function(wrap_pyfunction!(psi, m)?)?;
    m.add_function(wrap_pyfunction!(expand, m)?)?;
    m.add_function(wrap_pyfunction!(w_matrix, m)?)?;
    m.add_function(wrap_pyfunction!(v_matrix, m)?)?;
    m.add_function(wrap_pyfunction!(c_table, m)?)?;
    m.add_function(wrap_pyfunction!(quadratic_algebra, m)?)?;
    m.add_function(wrap_pyfunction!(run_suite, m)?)?;
    Ok(())
}
