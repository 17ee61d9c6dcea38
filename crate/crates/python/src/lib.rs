//! Python bindings. Quantities that overflow at high degree are returned as
//! natural logarithms of their magnitude (`log_*` names).

use hyperpoly::limits::{
    degeneration_certificate, limit_residual_gegenbauer_to_hermite, limit_residual_jacobi_to_laguerre,
    rescaled_lower_bound,
};
use hyperpoly::norm_bounds::{fourier_coefficient, growth_rate, hermite_sandwich, laguerre_sandwich};
use hyperpoly::obstruction::{
    bilinear_report, bilinear_value, classify_laguerre, classify_ou, eigen_lower_bound, f_t,
    multiplier_necessary_condition, NormClass,
};
use hyperpoly::poincare::{jacobi_super_rate, transform_super, transform_weak, RateFunction, RateKind};
use hyperpoly::quadrature::eigen_lp_norm;
use hyperpoly::subordination::{
    heat_kernel_mass, jacobi_heat_kernel, poisson_kernel_identity, subordinated_multiplier, ultra_norm_estimate,
};
use hyperpoly::{BernsteinFn, Error, LevySpec, PolyFamily};
use pyo3::exceptions::{PyRuntimeError, PyValueError};
use pyo3::prelude::*;
use pyo3::types::PyDict;

fn to_py(e: Error) -> PyErr {
    match e {
        Error::InvalidParameter(_) | Error::OutOfDomain { .. } | Error::Hypothesis(_) | Error::Inconsistent(_) => {
            PyValueError::new_err(e.to_string())
        }
        _ => PyRuntimeError::new_err(e.to_string()),
    }
}

trait OrPy<T> {
    fn py_err(self) -> PyResult<T>;
}

impl<T> OrPy<T> for hyperpoly::Result<T> {
    fn py_err(self) -> PyResult<T> {
        self.map_err(to_py)
    }
}

/// Classical orthogonal polynomial family with its invariant measure.
#[pyclass(name = "PolyFamily", frozen, eq, skip_from_py_object)]
#[derive(Clone, PartialEq)]
pub struct PyPolyFamily {
    pub inner: PolyFamily,
}

#[pymethods]
impl PyPolyFamily {
    #[staticmethod]
    fn hermite() -> Self {
        PyPolyFamily {
            inner: PolyFamily::Hermite,
        }
    }

    #[staticmethod]
    fn laguerre(alpha: f64) -> PyResult<Self> {
        Ok(PyPolyFamily {
            inner: PolyFamily::laguerre(alpha).py_err()?,
        })
    }

    #[staticmethod]
    fn jacobi(alpha: f64, beta: f64) -> PyResult<Self> {
        Ok(PyPolyFamily {
            inner: PolyFamily::jacobi(alpha, beta).py_err()?,
        })
    }

    #[staticmethod]
    fn gegenbauer(lam: f64) -> PyResult<Self> {
        Ok(PyPolyFamily {
            inner: PolyFamily::gegenbauer(lam).py_err()?,
        })
    }

    fn eigenvalue(&self, n: usize) -> PyResult<f64> {
        self.inner.eigenvalue(n).py_err()
    }

    fn eval_classical(&self, n: usize, x: f64) -> PyResult<f64> {
        Ok(self.inner.eval_classical(n, x).py_err()?.to_f64())
    }

    fn eval_normalized(&self, n: usize, x: f64) -> PyResult<f64> {
        Ok(self.inner.eval_normalized(n, x).py_err()?.to_f64())
    }

    /// `ln ‖φ_n‖_p` of the normalized eigenfunction.
    #[pyo3(signature = (n, p, tol = 1e-10))]
    fn log_lp_norm(&self, n: usize, p: f64, tol: f64) -> PyResult<f64> {
        Ok(eigen_lp_norm(&self.inner, n, p, tol).py_err()?.logmag())
    }

    fn __repr__(&self) -> String {
        format!("{:?}", self.inner)
    }
}

/// Bernstein function given by its triplet `(a, b, ν)`.
#[pyclass(name = "BernsteinFn", frozen, eq, skip_from_py_object)]
#[derive(Clone, PartialEq)]
pub struct PyBernsteinFn {
    pub inner: BernsteinFn,
}

#[pymethods]
impl PyBernsteinFn {
    /// `a + bλ + θ-stable part` when `theta` is given, else `a + bλ`.
    #[new]
    #[pyo3(signature = (a = 0.0, b = 0.0, theta = None))]
    fn new(a: f64, b: f64, theta: Option<f64>) -> PyResult<Self> {
        let levy = theta.map_or(LevySpec::Empty, |theta| LevySpec::Stable { theta });
        Ok(PyBernsteinFn {
            inner: BernsteinFn::new(a, b, levy).py_err()?,
        })
    }

    #[staticmethod]
    fn sqrt() -> Self {
        PyBernsteinFn {
            inner: BernsteinFn::sqrt(),
        }
    }

    #[staticmethod]
    fn from_json(s: &str) -> PyResult<Self> {
        Ok(PyBernsteinFn {
            inner: BernsteinFn::json_parse(s).py_err()?,
        })
    }

    fn to_json(&self) -> String {
        self.inner.to_json()
    }

    #[getter]
    fn a(&self) -> f64 {
        self.inner.a
    }

    #[getter]
    fn b(&self) -> f64 {
        self.inner.b
    }

    fn __call__(&self, lam: f64) -> PyResult<f64> {
        if !(lam >= 0.0) {
            return Err(PyValueError::new_err("lambda must be >= 0"));
        }
        Ok(self.inner.eval(lam))
    }

    fn __repr__(&self) -> String {
        format!("BernsteinFn({})", self.inner.to_json())
    }
}

/// `(log_measured, log_lower, log_upper, passed)` for `‖h_n‖_q`.
#[pyfunction]
#[pyo3(signature = (n, q, tol = 1e-11))]
fn hermite_norm_sandwich(n: usize, q: f64, tol: f64) -> PyResult<(f64, f64, f64, bool)> {
    let r = hermite_sandwich(n, q, tol).py_err()?;
    Ok((r.measured.logmag(), r.lower.logmag(), r.upper.logmag(), r.passed))
}

/// Same as [`hermite_norm_sandwich`] for `ℓ_n^α`.
#[pyfunction]
#[pyo3(signature = (n, alpha, q, rho, tol = 1e-11))]
fn laguerre_norm_sandwich(n: usize, alpha: f64, q: f64, rho: f64, tol: f64) -> PyResult<(f64, f64, f64, bool)> {
    let r = laguerre_sandwich(n, alpha, q, rho, tol).py_err()?;
    Ok((r.measured.logmag(), r.lower.logmag(), r.upper.logmag(), r.passed))
}

#[pyfunction]
#[pyo3(signature = (family, p, q, window, tol = 1e-11))]
fn growth_slope(family: &PyPolyFamily, p: f64, q: f64, window: Vec<usize>, tol: f64) -> PyResult<f64> {
    Ok(growth_rate(&family.inner, p, q, &window, tol).py_err()?.slope)
}

/// `⟨φ_n, e^{b·}⟩` as a float.
#[pyfunction(name = "fourier_coefficient")]
fn py_fourier_coefficient(family: &PyPolyFamily, n: usize, b: f64) -> PyResult<f64> {
    Ok(fourier_coefficient(&family.inner, n, b).py_err()?.to_f64())
}

/// `ln(e^{-t f(λ_n)} ‖φ_n‖_q / ‖φ_n‖_p)`.
#[pyfunction]
#[pyo3(signature = (family, f, t, p, q, n, tol = 1e-11))]
fn log_eigen_lower_bound(
    family: &PyPolyFamily,
    f: &PyBernsteinFn,
    t: f64,
    p: f64,
    q: f64,
    n: usize,
    tol: f64,
) -> PyResult<f64> {
    Ok(eigen_lower_bound(&family.inner, &f.inner, t, p, q, n, tol).py_err()?.logmag())
}

/// `ln F_t(z)`, `F_t(z) = Σ e^{-t f(n)} zⁿ/n!`.
#[pyfunction]
#[pyo3(signature = (f, t, z, tol = 1e-14))]
fn log_f_t(f: &PyBernsteinFn, t: f64, z: f64, tol: f64) -> PyResult<f64> {
    Ok(f_t(&f.inner, t, z, tol).py_err()?.logmag())
}

fn class_dict<'py>(py: Python<'py>, c: NormClass) -> PyResult<Bound<'py, PyDict>> {
    let d = PyDict::new(py);
    match c {
        NormClass::Bounded { norm, threshold } => {
            d.set_item("verdict", "bounded")?;
            d.set_item("threshold", threshold)?;
            d.set_item("norm", norm)?;
        }
        NormClass::BlowUp {
            threshold,
            discriminant,
        } => {
            d.set_item("verdict", "blow-up")?;
            d.set_item("threshold", threshold)?;
            d.set_item("norm", f64::INFINITY)?;
            d.set_item("discriminant", discriminant)?;
        }
    }
    Ok(d)
}

#[pyfunction(name = "classify_ou")]
fn py_classify_ou<'py>(py: Python<'py>, f: &PyBernsteinFn, t: f64, p: f64, q: f64) -> PyResult<Bound<'py, PyDict>> {
    class_dict(py, classify_ou(&f.inner, t, p, q).py_err()?)
}

#[pyfunction(name = "classify_laguerre")]
#[pyo3(signature = (f, t, p, q, alpha = 0.0))]
fn py_classify_laguerre<'py>(
    py: Python<'py>,
    f: &PyBernsteinFn,
    t: f64,
    p: f64,
    q: f64,
    alpha: f64,
) -> PyResult<Bound<'py, PyDict>> {
    class_dict(py, classify_laguerre(&f.inner, t, p, q, alpha).py_err()?)
}

/// Log of the bilinear test ratio at `(τ₁, τ₂)`.
#[pyfunction]
fn log_bilinear_value(f: &PyBernsteinFn, t: f64, p: f64, q: f64, tau1: f64, tau2: f64) -> PyResult<f64> {
    Ok(bilinear_value(&f.inner, t, p, q, tau1, tau2).py_err()?.logmag())
}

/// Verdict and ray of the vertex-ray bilinear test.
#[pyfunction]
#[pyo3(signature = (f, t, p, q, threshold = 1e6, tau2_max = 1e3))]
fn bilinear_test<'py>(
    py: Python<'py>,
    f: &PyBernsteinFn,
    t: f64,
    p: f64,
    q: f64,
    threshold: f64,
    tau2_max: f64,
) -> PyResult<Bound<'py, PyDict>> {
    let r = bilinear_report(&f.inner, t, p, q, threshold, tau2_max).py_err()?;
    let d = PyDict::new(py);
    d.set_item("verdict", format!("{:?}", r.verdict))?;
    d.set_item("k_star", r.k_star)?;
    d.set_item("quad_form_min", r.quad_form_min)?;
    d.set_item("ray", r.ray)?;
    d.set_item("slope_measured", r.slope_measured)?;
    Ok(d)
}

/// First `n` with `a_n^{1/n} > (p-1)/(q-1) + margin` for `a_n = e^{-t f(n)}`.
#[pyfunction]
#[pyo3(signature = (f, t, alpha, p, q, n_max = 2000, margin = 0.0))]
fn necessary_condition_violation(
    f: &PyBernsteinFn,
    t: f64,
    alpha: f64,
    p: f64,
    q: f64,
    n_max: usize,
    margin: f64,
) -> PyResult<Option<usize>> {
    let fam = PolyFamily::laguerre(alpha).py_err()?;
    let a = subordinated_multiplier(&f.inner, t, &fam).py_err()?;
    Ok(multiplier_necessary_condition(&a, alpha, p, q, n_max, margin).py_err()?.first_violation)
}

#[pyfunction(name = "poisson_kernel_identity")]
#[pyo3(signature = (t, lam, tol = 1e-12))]
fn py_poisson_kernel_identity(t: f64, lam: f64, tol: f64) -> PyResult<f64> {
    poisson_kernel_identity(t, lam, tol).py_err()
}

#[pyfunction]
#[pyo3(signature = (alpha, beta, s, x, y, tol = 1e-12))]
fn heat_kernel(alpha: f64, beta: f64, s: f64, x: f64, y: f64, tol: f64) -> PyResult<f64> {
    Ok(jacobi_heat_kernel(alpha, beta, s, x, y, tol).py_err()?.value)
}

#[pyfunction(name = "heat_kernel_mass")]
#[pyo3(signature = (alpha, beta, s, x, tol = 1e-12))]
fn py_heat_kernel_mass(alpha: f64, beta: f64, s: f64, x: f64, tol: f64) -> PyResult<f64> {
    heat_kernel_mass(alpha, beta, s, x, tol).py_err()
}

/// Grid estimate of `‖e^{sL}‖_{1→∞}` for the Jacobi operator.
#[pyfunction]
fn ultra_norm(alpha: f64, beta: f64, s: f64) -> PyResult<f64> {
    Ok(ultra_norm_estimate(alpha, beta, s).py_err()?.value)
}

fn rate_kind(kind: &str) -> PyResult<RateKind> {
    match kind {
        "super" => Ok(RateKind::Super),
        "weak" => Ok(RateKind::Weak),
        _ => Err(PyValueError::new_err(format!("kind must be 'super' or 'weak', got {kind:?}"))),
    }
}

/// The transformed rate of `c r^{-m}` under `f`, evaluated at `rs`.
#[pyfunction]
fn transformed_power_rate(f: &PyBernsteinFn, kind: &str, c: f64, m: f64, rs: Vec<f64>) -> PyResult<Vec<f64>> {
    let kind = rate_kind(kind)?;
    let base = RateFunction::power(kind, c, m).py_err()?;
    let g = match kind {
        RateKind::Super => transform_super(&base, &f.inner),
        RateKind::Weak => transform_weak(&base, &f.inner),
    }
    .py_err()?;
    Ok(rs.into_iter().map(|r| g.eval(r)).collect())
}

/// `1 + r^{-(max{α,β}+1)}` transformed under `f`, evaluated at `rs`.
#[pyfunction]
fn transformed_jacobi_rate(f: &PyBernsteinFn, alpha: f64, beta: f64, rs: Vec<f64>) -> PyResult<Vec<f64>> {
    let g = transform_super(&jacobi_super_rate(alpha, beta).py_err()?, &f.inner).py_err()?;
    Ok(rs.into_iter().map(|r| g.eval(r)).collect())
}

#[pyfunction]
fn jacobi_laguerre_residual(n: usize, alpha: f64, beta_scale: f64, x: f64) -> PyResult<f64> {
    limit_residual_jacobi_to_laguerre(n, alpha, beta_scale, x).py_err()
}

#[pyfunction]
fn gegenbauer_hermite_residual(n: usize, lambda_scale: f64, x: f64) -> PyResult<f64> {
    limit_residual_gegenbauer_to_hermite(n, lambda_scale, x).py_err()
}

/// `(n, β₀, log_bound_at_β₀)` such that the rescaled Jacobi lower bound
/// exceeds `2M` for every ladder scale from `β₀` on.
#[pyfunction]
#[pyo3(signature = (alpha, t, p, q, m, tol = 1e-10))]
fn degeneration(alpha: f64, t: f64, p: f64, q: f64, m: f64, tol: f64) -> PyResult<(usize, f64, f64)> {
    let cert = degeneration_certificate(alpha, t, p, q, m).py_err()?;
    let bound = rescaled_lower_bound(alpha, cert.beta0, t, p, q, cert.n, tol).py_err()?;
    Ok((cert.n, cert.beta0, bound.logmag()))
}

#[pymodule]
pub fn pyhyperpoly(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<PyPolyFamily>()?;
    m.add_class::<PyBernsteinFn>()?;
    m.add_function(wrap_pyfunction!(hermite_norm_sandwich, m)?)?;
    m.add_function(wrap_pyfunction!(laguerre_norm_sandwich, m)?)?;
    m.add_function(wrap_pyfunction!(growth_slope, m)?)?;
    m.add_function(wrap_pyfunction!(py_fourier_coefficient, m)?)?;
    m.add_function(wrap_pyfunction!(log_eigen_lower_bound, m)?)?;
    m.add_function(wrap_pyfunction!(log_f_t, m)?)?;
    m.add_function(wrap_pyfunction!(py_classify_ou, m)?)?;
    m.add_function(wrap_pyfunction!(py_classify_laguerre, m)?)?;
    m.add_function(wrap_pyfunction!(log_bilinear_value, m)?)?;
    m.add_function(wrap_pyfunction!(bilinear_test, m)?)?;
    m.add_function(wrap_pyfunction!(necessary_condition_violation, m)?)?;
    m.add_function(wrap_pyfunction!(py_poisson_kernel_identity, m)?)?;
    m.add_function(wrap_pyfunction!(heat_kernel, m)?)?;
    m.add_function(wrap_pyfunction!(py_heat_kernel_mass, m)?)?;
    m.add_function(wrap_pyfunction!(ultra_norm, m)?)?;
    m.add_function(wrap_pyfunction!(transformed_power_rate, m)?)?;
    m.add_function(wrap_pyfunction!(transformed_jacobi_rate, m)?)?;
    m.add_function(wrap_pyfunction!(jacobi_laguerre_residual, m)?)?;
    m.add_function(wrap_pyfunction!(gegenbauer_hermite_residual, m)?)?;
    m.add_function(wrap_pyfunction!(degeneration, m)?)?;
    Ok(())
}
