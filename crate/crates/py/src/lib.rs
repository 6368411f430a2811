//! Python module `smu`: scalar activations and derivatives, gradient checks, datasets and training.

use pyo3::exceptions::{PyFloatingPointError, PyOSError, PyValueError};
use pyo3::prelude::*;
use pyo3::types::PyDict;
use smu_core::activation::{self as act, ActivationKind, Preset};
use smu_core::datasets::{make_spirals, make_two_moons, DatasetSpec, DEFAULT_TEST_FRACTION};
use smu_core::gradcheck::{check_activation, standard_grid, DEFAULT_TOLERANCE};
use smu_core::micronet::{parse_model_spec, train as fit, Network, OptimizerKind, TrainConfig};
use smu_core::SmuError;

fn to_py(e: SmuError) -> PyErr {
    match e {
        SmuError::Divergence { .. } => PyFloatingPointError::new_err(e.to_string()),
        SmuError::Io(_) => PyOSError::new_err(e.to_string()),
        other => PyValueError::new_err(other.to_string()),
    }
}

fn preset(name: &str) -> PyResult<Preset> {
    name.parse().map_err(to_py)
}

/// Shape parameters of SMU and SMU-1.
#[pyclass(name = "SmuParams", module = "smu", skip_from_py_object)]
#[derive(Clone, Copy)]
struct PySmuParams {
    inner: act::SmuParams,
}

#[pymethods]
impl PySmuParams {
    #[new]
    #[pyo3(signature = (alpha=0.25, mu=1.0, alpha_trainable=false, mu_trainable=true))]
    fn new(alpha: f64, mu: f64, alpha_trainable: bool, mu_trainable: bool) -> PyResult<Self> {
        let inner = act::SmuParams::new(alpha, mu).with_trainable(alpha_trainable, mu_trainable);
        inner.validate().map_err(to_py)?;
        Ok(Self { inner })
    }

    /// Preset values: `variant` is "smu" or "smu1".
    #[staticmethod]
    #[pyo3(signature = (name="classification", variant="smu"))]
    fn from_preset(name: &str, variant: &str) -> PyResult<Self> {
        let p = preset(name)?;
        let inner = match variant {
            "smu" => p.smu_params(),
            "smu1" | "smu-1" => p.smu1_params(),
            other => return Err(PyValueError::new_err(format!("unknown variant '{other}'"))),
        };
        Ok(Self { inner })
    }

    #[getter]
    fn alpha(&self) -> f64 {
        self.inner.alpha
    }

    #[getter]
    fn mu(&self) -> f64 {
        self.inner.mu
    }

    #[getter]
    fn alpha_trainable(&self) -> bool {
        self.inner.alpha_trainable
    }

    #[getter]
    fn mu_trainable(&self) -> bool {
        self.inner.mu_trainable
    }

    fn __repr__(&self) -> String {
        let p = &self.inner;
        format!(
            "SmuParams(alpha={}, mu={}, alpha_trainable={}, mu_trainable={})",
            p.alpha,
            p.mu,
            if p.alpha_trainable { "True" } else { "False" },
            if p.mu_trainable { "True" } else { "False" }
        )
    }
}

/// An activation chosen by name, e.g. `Activation("smu", mu=2.0)` or `Activation("gelu")`.
#[pyclass(name = "Activation", module = "smu")]
struct PyActivation {
    kind: ActivationKind,
}

#[pymethods]
impl PyActivation {
    #[new]
    #[pyo3(signature = (name, alpha=None, mu=None, preset="classification"))]
    fn new(name: &str, alpha: Option<f64>, mu: Option<f64>, preset: &str) -> PyResult<Self> {
        let kind = ActivationKind::from_name(name, alpha, mu, self::preset(preset)?).map_err(to_py)?;
        Ok(Self { kind })
    }

    #[getter]
    fn name(&self) -> &'static str {
        self.kind.name()
    }

    #[getter]
    fn alpha(&self) -> Option<f64> {
        self.kind.param(act::Param::Alpha).or(match self.kind {
            ActivationKind::LeakyRelu { alpha } | ActivationKind::Elu { alpha } => Some(alpha),
            _ => None,
        })
    }

    #[getter]
    fn mu(&self) -> Option<f64> {
        self.kind.param(act::Param::Mu)
    }

    fn __call__(&self, x: f64) -> f64 {
        self.kind.eval(x)
    }

    fn dx(&self, x: f64) -> f64 {
        self.kind.dx(x)
    }

    /// Partial derivative in "alpha" or "mu"; 0 for parameters the activation lacks.
    fn dparam(&self, which: &str, x: f64) -> PyResult<f64> {
        let p = match which {
            "alpha" => act::Param::Alpha,
            "mu" => act::Param::Mu,
            other => return Err(PyValueError::new_err(format!("unknown parameter '{other}'"))),
        };
        Ok(self.kind.dparam(p, x))
    }

    fn __repr__(&self) -> String {
        format!("Activation({})", self.kind)
    }
}

#[pyfunction]
fn erf(x: f64) -> f64 {
    act::erf(x)
}

#[pyfunction]
fn smooth_max_erf(x1: f64, x2: f64, mu: f64) -> f64 {
    act::smooth_max_erf(x1, x2, mu)
}

#[pyfunction]
fn smooth_max_sqrt(x1: f64, x2: f64, mu: f64) -> f64 {
    act::smooth_max_sqrt(x1, x2, mu)
}

macro_rules! scalar_fns {
    ($($name:ident),*) => {$(
        #[pyfunction]
        fn $name(x: f64, params: PyRef<'_, PySmuParams>) -> f64 {
            act::$name(x, &params.inner)
        }
    )*};
}

scalar_fns!(smu, smu_dx, smu_dalpha, smu_dmu, smu1, smu1_dx, smu1_dalpha, smu1_dmu);

/// Finite-difference check of an activation on its standard grid; one dict per check.
#[pyfunction]
#[pyo3(signature = (name, alpha=None, mu=None, preset="classification", tolerance=DEFAULT_TOLERANCE))]
fn gradcheck<'py>(
    py: Python<'py>,
    name: &str,
    alpha: Option<f64>,
    mu: Option<f64>,
    preset: &str,
    tolerance: f64,
) -> PyResult<Vec<Bound<'py, PyDict>>> {
    let kind = ActivationKind::from_name(name, alpha, mu, self::preset(preset)?).map_err(to_py)?;
    let reports = check_activation(&kind, &standard_grid(&kind), tolerance).map_err(to_py)?;
    reports
        .iter()
        .map(|r| {
            let d = PyDict::new(py);
            d.set_item("point", r.point)?;
            d.set_item("parameter", r.parameter.to_string())?;
            d.set_item("analytic", r.analytic)?;
            d.set_item("numeric", r.numeric)?;
            d.set_item("rel_error", r.relative_error)?;
            d.set_item("passed", r.passed)?;
            Ok(d)
        })
        .collect()
}

type Samples = (Vec<Vec<f64>>, Vec<usize>);

fn samples_of(ds: &smu_core::datasets::Dataset) -> Samples {
    let rows = (0..ds.len()).map(|i| ds.features.row(i).to_vec()).collect();
    (rows, ds.labels.clone())
}

/// `(features, labels)` of the two-moons set.
#[pyfunction]
#[pyo3(signature = (n=2000, noise=0.1, seed=0))]
fn two_moons(n: usize, noise: f64, seed: u64) -> PyResult<Samples> {
    Ok(samples_of(&make_two_moons(n, noise, seed).map_err(to_py)?))
}

/// `(features, labels)` of the two-arm spiral set.
#[pyfunction]
#[pyo3(signature = (n=600, turns=2.0, noise=0.02, seed=0))]
fn spirals(n: usize, turns: f64, noise: f64, seed: u64) -> PyResult<Samples> {
    Ok(samples_of(&make_spirals(n, turns, noise, seed).map_err(to_py)?))
}

/// Trains an MLP on two-moons and returns final metrics, the mu endpoints and the log CSV.
#[pyfunction]
#[pyo3(signature = (
    activation="smu", alpha=None, mu=None, preset="classification", samples=2000, noise=0.1,
    model="2x32x32x2", epochs=200, seed=0, lr=0.05, optimizer="sgd-momentum", batch_size=64
))]
#[allow(clippy::too_many_arguments)]
fn train<'py>(
    py: Python<'py>,
    activation: &str,
    alpha: Option<f64>,
    mu: Option<f64>,
    preset: &str,
    samples: usize,
    noise: f64,
    model: &str,
    epochs: usize,
    seed: u64,
    lr: f64,
    optimizer: &str,
    batch_size: usize,
) -> PyResult<Bound<'py, PyDict>> {
    let preset = self::preset(preset)?;
    let kind = ActivationKind::from_name(activation, alpha, mu, preset).map_err(to_py)?;
    let optimizer: OptimizerKind = optimizer.parse().map_err(to_py)?;
    let sizes = parse_model_spec(model).map_err(to_py)?;
    let cfg = TrainConfig { epochs, batch_size, learning_rate: lr, optimizer, seed, preset };
    let spec = DatasetSpec::TwoMoons { samples, noise };
    let log = py
        .detach(|| {
            let ds = spec.build(seed, DEFAULT_TEST_FRACTION)?;
            let mut net = Network::mlp(&sizes, kind, seed)?;
            fit(&mut net, &ds, &cfg)
        })
        .map_err(to_py)?;
    let d = PyDict::new(py);
    let (tr, te) = (log.final_train().expect("records"), log.final_test().expect("records"));
    d.set_item("train_accuracy", tr.accuracy)?;
    d.set_item("train_loss", tr.loss)?;
    d.set_item("test_accuracy", te.accuracy)?;
    d.set_item("test_loss", te.loss)?;
    d.set_item("mu_initial", log.initial_mus().to_vec())?;
    d.set_item("mu_final", log.final_mus().to_vec())?;
    d.set_item("log_csv", log.to_csv())?;
    Ok(d)
}

#[pymodule]
#[pyo3(name = "smu")]
fn smu_module(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<PySmuParams>()?;
    m.add_class::<PyActivation>()?;
    m.add_function(wrap_pyfunction!(erf, m)?)?;
    m.add_function(wrap_pyfunction!(smooth_max_erf, m)?)?;
    m.add_function(wrap_pyfunction!(smooth_max_sqrt, m)?)?;
    m.add_function(wrap_pyfunction!(smu, m)?)?;
    m.add_function(wrap_pyfunction!(smu_dx, m)?)?;
    m.add_function(wrap_pyfunction!(smu_dalpha, m)?)?;
    m.add_function(wrap_pyfunction!(smu_dmu, m)?)?;
    m.add_function(wrap_pyfunction!(smu1, m)?)?;
    m.add_function(wrap_pyfunction!(smu1_dx, m)?)?;
    m.add_function(wrap_pyfunction!(smu1_dalpha, m)?)?;
    m.add_function(wrap_pyfunction!(smu1_dmu, m)?)?;
    m.add_function(wrap_pyfunction!(gradcheck, m)?)?;
    m.add_function(wrap_pyfunction!(two_moons, m)?)?;
    m.add_function(wrap_pyfunction!(spirals, m)?)?;
    m.add_function(wrap_pyfunction!(train, m)?)?;
    Ok(())
}
