//! Python bindings: `import gl3sub`.

use gl3_subconvex::arith::{self, CharSumParams};
use gl3_subconvex::cli::{self, Param, RunConfig};
use gl3_subconvex::deltasym::{self, DeltaSpec};
use gl3_subconvex::gl3form::{self, LanglandsParams};
use gl3_subconvex::oscillatory::Window;
use gl3_subconvex::pipeline;
use gl3_subconvex::voronoi::{self, CapRule, ContourSpec, Sign, VoronoiEngine};
use gl3_subconvex::Error;
use num_complex::Complex64;
use pyo3::exceptions::{PyRuntimeError, PyValueError};
use pyo3::prelude::*;
use pyo3::types::PyDict;

fn py_err(e: Error) -> PyErr {
    match cli::error_code(&e) {
        2 => PyValueError::new_err(e.to_string()),
        _ => PyRuntimeError::new_err(e.to_string()),
    }
}

/// A GL(3) form given by its Langlands parameters α (summing to zero).
#[pyclass(name = "GL3Form")]
struct PyGL3Form {
    inner: gl3form::GL3Form,
}

#[pymethods]
impl PyGL3Form {
    #[new]
    #[pyo3(signature = (alpha=None))]
    fn new(alpha: Option<[Complex64; 3]>) -> PyResult<Self> {
        let params = match alpha {
            None => LanglandsParams::trivial(),
            Some(a) => LanglandsParams::from_alpha(a).map_err(py_err)?,
        };
        Ok(PyGL3Form {
            inner: gl3form::GL3Form::new(params),
        })
    }

    #[getter]
    fn alpha(&self) -> [Complex64; 3] {
        self.inner.params.alpha
    }

    /// λ(n₁, n₂).
    fn coeff(&self, n1: u64, n2: u64) -> PyResult<Complex64> {
        if n1 == 0 || n2 == 0 {
            return Err(PyValueError::new_err("indices must be positive"));
        }
        Ok(self.inner.coeff(n1, n2))
    }

    fn dual(&self) -> Self {
        PyGL3Form {
            inner: self.inner.dual(),
        }
    }

    fn __repr__(&self) -> String {
        let a = self.inner.params.alpha;
        format!("GL3Form(alpha=({}, {}, {}))", a[0], a[1], a[2])
    }
}

#[pyfunction]
#[pyo3(name = "delta_eval")]
fn py_delta_eval(n: i64, big_q: f64) -> PyResult<f64> {
    Ok(deltasym::delta_eval(&DeltaSpec::new(n, big_q).map_err(py_err)?))
}

#[pyfunction]
fn kloosterman(a: i64, b: i64, c: u64) -> PyResult<f64> {
    if c == 0 || c > arith::KLOOSTERMAN_MAX_MODULUS {
        return Err(PyValueError::new_err("modulus outside [1, 10^6]"));
    }
    Ok(arith::kloosterman(a, b, c))
}

#[pyfunction]
fn weil_bound(a: i64, b: i64, c: u64) -> f64 {
    arith::weil_bound(a, b, c)
}

#[pyfunction]
fn divisor_d3(n: u64) -> u64 {
    arith::divisor_d3(n)
}

#[pyfunction]
fn char_sum(m: i64, m_prime: i64, q_hat: u64, q_hat_prime: u64, n2: i64) -> PyResult<(Complex64, f64)> {
    let p = CharSumParams {
        m,
        m_prime,
        q_hat,
        q_hat_prime,
        n2,
    };
    Ok((arith::char_sum(&p).map_err(py_err)?, p.bound()))
}

/// (lhs, rhs) of the Voronoi formula for the normalized bump on `support`.
#[pyfunction]
#[pyo3(signature = (q, a, support=(20.0, 60.0), tol=5e-6, form=None))]
fn voronoi_check(
    q: u64,
    a: i64,
    support: (f64, f64),
    tol: f64,
    form: Option<PyRef<'_, PyGL3Form>>,
) -> PyResult<(Complex64, Complex64)> {
    let f = form.map_or_else(gl3form::GL3Form::trivial, |f| f.inner.clone());
    let g = voronoi::test_window(support.0, support.1);
    let lhs = voronoi::voronoi_lhs(&f, a, q, &g).map_err(py_err)?;
    let engine = VoronoiEngine::new(&f, &g, &ContourSpec::default(), tol).map_err(py_err)?;
    let rhs = engine.rhs(a, q, CapRule::Auto).map_err(py_err)?;
    Ok((lhs, rhs.total))
}

/// (S(N), S⁺(N), S⁻(N)) for the trivial form with the default windows.
#[pyfunction]
#[pyo3(signature = (n, t, k, big_q=None, tol=1e-9))]
fn decomposition(n: f64, t: f64, k: f64, big_q: Option<f64>, tol: f64) -> PyResult<(Complex64, Complex64, Complex64)> {
    let spec = pipeline::SumSpec::new(gl3form::GL3Form::trivial(), n, t, k).map_err(py_err)?;
    let q = big_q.unwrap_or_else(|| spec.q_natural());
    let s = pipeline::s_of_n(&spec).map_err(py_err)?;
    let plus = pipeline::s_plus_minus(&spec, q, Sign::Plus, tol).map_err(py_err)?;
    let minus = pipeline::s_plus_minus(&spec, q, Sign::Minus, tol).map_err(py_err)?;
    Ok((s, plus, minus))
}

#[pyfunction]
#[pyo3(signature = (q, a, x, t, v, n, m_cap=None))]
fn poisson_m_check(
    q: u64,
    a: i64,
    x: f64,
    t: f64,
    v: f64,
    n: f64,
    m_cap: Option<u64>,
) -> PyResult<(Complex64, Complex64)> {
    let cap = m_cap.unwrap_or_else(|| pipeline::poisson_m_cap(q, n));
    pipeline::poisson_m_check(q, a, x, t, v, n, &Window::v_star(), cap).map_err(py_err)
}

#[pyfunction]
#[pyo3(signature = (n, m, k))]
fn conductor_lowering_kernel(n: u64, m: u64, k: f64) -> PyResult<Complex64> {
    pipeline::conductor_lowering_kernel(n, m, k, &Window::v_default()).map_err(py_err)
}

/// {"K_opt": "3/8", "bound": "11/32", "theorem": "23/32"} as exact t-exponents.
#[pyfunction]
fn exponent_summary(py: Python<'_>) -> PyResult<Bound<'_, PyDict>> {
    let opt = pipeline::proposition_bound().map_err(py_err)?;
    let d = PyDict::new_bound(py);
    d.set_item("K_opt", opt.k_opt.t.to_string())?;
    d.set_item("bound", opt.value.t.to_string())?;
    d.set_item("bound_monomial", opt.value.to_string())?;
    d.set_item(
        "theorem",
        pipeline::theorem_exponent(&opt.value, pipeline::R::new(3, 2)).to_string(),
    )?;
    Ok(d)
}

#[pyfunction]
fn zeta_cubed(t: f64) -> PyResult<Complex64> {
    pipeline::zeta_cubed_reference(t).map_err(py_err)
}

/// Runs a CLI command in-process: returns (exit status, csv text, summary line).
#[pyfunction]
#[pyo3(signature = (command, params=None, tol=None, digits=cli::DEFAULT_DIGITS))]
fn run(
    command: &str,
    params: Option<&Bound<'_, PyDict>>,
    tol: Option<f64>,
    digits: u32,
) -> PyResult<(i32, String, String)> {
    let mut cfg = RunConfig::new(command);
    cfg.tol = tol;
    cfg.digits = digits;
    if let Some(p) = params {
        for (k, v) in p.iter() {
            cfg.params.insert(k.extract()?, Param::parse(&v.str()?.to_string()));
        }
    }
    let rep = cli::run(&cfg).map_err(py_err)?;
    Ok((rep.exit_code(), rep.to_csv(), rep.summary_line(command)))
}

#[pymodule]
fn gl3sub(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<PyGL3Form>()?;
    m.add_function(wrap_pyfunction!(py_delta_eval, m)?)?;
    m.add_function(wrap_pyfunction!(kloosterman, m)?)?;
    m.add_function(wrap_pyfunction!(weil_bound, m)?)?;
    m.add_function(wrap_pyfunction!(divisor_d3, m)?)?;
    m.add_function(wrap_pyfunction!(char_sum, m)?)?;
    m.add_function(wrap_pyfunction!(voronoi_check, m)?)?;
    m.add_function(wrap_pyfunction!(decomposition, m)?)?;
    m.add_function(wrap_pyfunction!(poisson_m_check, m)?)?;
    m.add_function(wrap_pyfunction!(conductor_lowering_kernel, m)?)?;
    m.add_function(wrap_pyfunction!(exponent_summary, m)?)?;
    m.add_function(wrap_pyfunction!(zeta_cubed, m)?)?;
    m.add_function(wrap_pyfunction!(run, m)?)?;
    Ok(())
}
