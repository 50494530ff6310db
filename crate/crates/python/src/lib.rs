//! Python module `pyzerolab`.

use num_bigint::BigInt;
use pyo3::create_exception;
use pyo3::exceptions::{PyException, PyValueError};
use pyo3::prelude::*;
use pyo3::types::PyDict;
use zerolab::{Budget, Error, RunOptions};

create_exception!(pyzerolab, BudgetExceededError, PyException, "Work would exceed the evaluation budget.");

fn to_py(e: Error) -> PyErr {
    match e {
        Error::BudgetExceeded { .. } => BudgetExceededError::new_err(e.to_string()),
        _ => PyValueError::new_err(e.to_string()),
    }
}

fn options(budget: Option<u64>, workers: Option<usize>) -> RunOptions {
    let mut opts = RunOptions::default();
    if let Some(b) = budget {
        opts = opts.with_budget(Budget(b));
    }
    if let Some(w) = workers {
        opts = opts.with_workers(w);
    }
    opts
}

fn budget_of(budget: Option<u64>) -> Budget {
    budget.map_or_else(Budget::default, Budget)
}

fn fraction<'py>(py: Python<'py>, num: &BigInt, den: &BigInt) -> PyResult<Bound<'py, PyAny>> {
    py.import("fractions")?.getattr("Fraction")?.call1((num.clone(), den.clone()))
}

fn json_value<'py>(py: Python<'py>, v: &impl std::fmt::Display) -> PyResult<Bound<'py, PyAny>> {
    py.import("json")?.call_method1("loads", (v.to_string(),))
}

#[pymodule]
mod pyzerolab {
    use super::*;
    use zerolab::poly::all_points;
    use zerolab::{
        Degree, DensityConfig, Filtration, Mean, Point, PolySystem, Polynomial, RingSpec, SampleSpace,
        VanishingQuery, ZeroCountDistribution,
    };

    #[pymodule_export]
    use super::BudgetExceededError;

    /// A finite commutative ring: `Z4`, `GF(9)`, `GF(8;mod=x^3+x+1)`, `Z2xZ3`.
    #[pyclass(name = "Ring", frozen, eq, hash, skip_from_py_object)]
    #[derive(Clone, PartialEq, Eq, Hash)]
    pub struct PyRing(pub RingSpec);

    #[pymethods]
    impl PyRing {
        #[new]
        fn new(spec: &str) -> PyResult<Self> {
            spec.parse().map(PyRing).map_err(to_py)
        }

        #[getter]
        fn order(&self) -> u64 {
            self.0.order()
        }

        fn is_field(&self) -> bool {
            self.0.is_field()
        }

        /// Elements in index order, formatted as in polynomial text.
        fn elements(&self) -> Vec<String> {
            self.0.enumerate_elements().iter().map(|e| e.to_string()).collect()
        }

        fn __str__(&self) -> String {
            self.0.to_string()
        }

        fn __repr__(&self) -> String {
            format!("Ring('{}')", self.0)
        }
    }

    #[pyclass(name = "Polynomial", frozen, eq, hash, skip_from_py_object)]
    #[derive(Clone, PartialEq, Eq, Hash)]
    pub struct PyPolynomial(pub Polynomial);

    #[pymethods]
    impl PyPolynomial {
        #[new]
        fn new(text: &str, ring: PyRef<'_, PyRing>, nvars: usize) -> PyResult<Self> {
            zerolab::parse_polynomial(text, &ring.0, nvars).map(PyPolynomial).map_err(to_py)
        }

        #[getter]
        fn nvars(&self) -> usize {
            self.0.nvars()
        }

        #[getter]
        fn ring(&self) -> PyRing {
            PyRing(self.0.ring().clone())
        }

        /// Value at a point given by element indices.
        fn evaluate(&self, point: Vec<u64>) -> PyResult<u64> {
            let p = Point::from_indices(self.0.ring(), point).map_err(to_py)?;
            self.0.evaluate(&p).map(|e| e.index()).map_err(to_py)
        }

        /// `None` for the zero polynomial.
        fn total_degree(&self) -> Option<u64> {
            match self.0.total_degree() {
                Degree::MinusInfinity => None,
                Degree::Finite(d) => Some(d),
            }
        }

        fn reduce(&self) -> PyResult<Self> {
            self.0.reduce_per_variable().map(PyPolynomial).map_err(to_py)
        }

        fn is_zero(&self) -> bool {
            self.0.is_zero()
        }

        fn __add__(&self, other: PyRef<'_, PyPolynomial>) -> PyResult<Self> {
            self.0.add(&other.0).map(PyPolynomial).map_err(to_py)
        }

        fn __sub__(&self, other: PyRef<'_, PyPolynomial>) -> PyResult<Self> {
            self.0.sub(&other.0).map(PyPolynomial).map_err(to_py)
        }

        fn __mul__(&self, other: PyRef<'_, PyPolynomial>) -> PyResult<Self> {
            self.0.mul(&other.0).map(PyPolynomial).map_err(to_py)
        }

        fn __neg__(&self) -> Self {
            PyPolynomial(self.0.neg())
        }

        fn __str__(&self) -> String {
            self.0.to_string()
        }

        fn __repr__(&self) -> String {
            format!("Polynomial('{}', Ring('{}'), {})", self.0, self.0.ring(), self.0.nvars())
        }
    }

    /// A free module of polynomials; `spec` is `total:d=D`, `pervar:d=D`,
    /// `custom:basis=1,x,...` or `custom:file=PATH`.
    #[pyclass(name = "SampleSpace", frozen, skip_from_py_object)]
    #[derive(Clone)]
    pub struct PySampleSpace(pub SampleSpace);

    #[pymethods]
    impl PySampleSpace {
        #[new]
        fn new(ring: PyRef<'_, PyRing>, spec: &str, nvars: usize) -> PyResult<Self> {
            let spec = zerolab::parse_space_spec(spec).map_err(to_py)?;
            SampleSpace::from_spec(&ring.0, nvars, &spec).map(PySampleSpace).map_err(to_py)
        }

        #[getter]
        fn rank(&self) -> usize {
            self.0.rank()
        }

        #[getter]
        fn nvars(&self) -> usize {
            self.0.nvars()
        }

        #[getter]
        fn label(&self) -> String {
            self.0.label().to_string()
        }

        #[getter]
        fn ring(&self) -> PyRing {
            PyRing(self.0.ring().clone())
        }

        fn basis(&self) -> Vec<PyPolynomial> {
            self.0.basis().iter().cloned().map(PyPolynomial).collect()
        }

        /// The polynomial with the given coefficient indices on the basis.
        fn combine(&self, coeffs: Vec<u64>) -> PyResult<PyPolynomial> {
            self.0.combine(&coeffs).map(PyPolynomial).map_err(to_py)
        }

        #[pyo3(signature = (budget=None))]
        fn extends_ring(&self, budget: Option<u64>) -> PyResult<bool> {
            self.0.extends_ring(budget_of(budget)).map_err(to_py)
        }

        #[pyo3(signature = (budget=None))]
        fn contains_functions(&self, budget: Option<u64>) -> PyResult<bool> {
            self.0.contains_functions(budget_of(budget)).map_err(to_py)
        }

        #[pyo3(signature = (budget=None))]
        fn function_coverage_count(&self, budget: Option<u64>) -> PyResult<u64> {
            self.0.function_coverage_count(budget_of(budget)).map_err(to_py)
        }

        fn __repr__(&self) -> String {
            format!("SampleSpace(Ring('{}'), '{}', {})", self.0.ring(), self.0.label(), self.0.nvars())
        }
    }

    /// Distribution of the number of common zeros.
    #[pyclass(name = "Distribution", frozen)]
    pub struct PyDistribution(pub ZeroCountDistribution);

    #[pymethods]
    impl PyDistribution {
        #[getter]
        fn provenance(&self) -> String {
            self.0.provenance.to_string()
        }

        /// Probabilities as floats for counts `0..=|R|^n`.
        fn probabilities(&self) -> Vec<f64> {
            self.0.probs_f64()
        }

        /// Exact probabilities as `Fraction`s, or `None` for sampled distributions.
        fn exact<'py>(&self, py: Python<'py>) -> PyResult<Option<Vec<Bound<'py, PyAny>>>> {
            self.0
                .exact_probs()
                .map(|ps| ps.iter().map(|p| fraction(py, p.numer(), p.denom())).collect())
                .transpose()
        }

        /// A `Fraction` for exact distributions, a float otherwise.
        fn mean<'py>(&self, py: Python<'py>) -> PyResult<Bound<'py, PyAny>> {
            match self.0.expectation() {
                Mean::Exact(r) => fraction(py, r.numer(), r.denom()),
                Mean::Float(x) => Ok(x.into_pyobject(py)?.into_any()),
            }
        }

        fn total_variation(&self, other: PyRef<'_, PyDistribution>) -> f64 {
            self.0.total_variation(&other.0)
        }

        fn to_json(&self) -> String {
            serde_json_pretty(&self.0)
        }

        fn to_csv(&self) -> String {
            self.0.to_csv()
        }

        fn __len__(&self) -> usize {
            self.0.max_count() + 1
        }

        fn __str__(&self) -> String {
            self.0.to_table()
        }

        fn __repr__(&self) -> String {
            format!("Distribution({})", self.0.provenance)
        }
    }

    fn serde_json_pretty(d: &ZeroCountDistribution) -> String {
        format!("{:#}", d.to_json())
    }

    #[pyfunction]
    #[pyo3(signature = (space, m, *, budget=None, workers=None))]
    fn exact_distribution(
        py: Python<'_>,
        space: PyRef<'_, PySampleSpace>,
        m: usize,
        budget: Option<u64>,
        workers: Option<usize>,
    ) -> PyResult<PyDistribution> {
        let opts = options(budget, workers);
        let space = &space.0;
        py.detach(|| zerolab::exact_distribution(space, m, &opts))
            .map(PyDistribution)
            .map_err(to_py)
    }

    #[pyfunction]
    #[pyo3(signature = (space, m, samples, seed=0, *, budget=None, workers=None))]
    fn monte_carlo_distribution(
        py: Python<'_>,
        space: PyRef<'_, PySampleSpace>,
        m: usize,
        samples: u64,
        seed: u64,
        budget: Option<u64>,
        workers: Option<usize>,
    ) -> PyResult<PyDistribution> {
        let opts = options(budget, workers);
        let space = &space.0;
        py.detach(|| zerolab::monte_carlo_distribution(space, m, samples, seed, &opts))
            .map(PyDistribution)
            .map_err(to_py)
    }

    #[pyfunction]
    fn theoretical_distribution(q: u64, n: usize, m: usize) -> PyResult<PyDistribution> {
        zerolab::theoretical_distribution(q, n, m).map(PyDistribution).map_err(to_py)
    }

    /// Chi-square report as a dict with `statistic`, `dof`, `p_value` and `bins`.
    #[pyfunction]
    fn gof_test<'py>(
        py: Python<'py>,
        empirical: PyRef<'_, PyDistribution>,
        model: PyRef<'_, PyDistribution>,
    ) -> PyResult<Bound<'py, PyDict>> {
        let report = zerolab::gof_test(&empirical.0, &model.0).map_err(to_py)?;
        let bins = report
            .bins
            .iter()
            .map(|b| {
                let d = PyDict::new(py);
                d.set_item("lo", b.lo)?;
                d.set_item("hi", b.hi)?;
                d.set_item("observed", b.observed)?;
                d.set_item("expected", b.expected)?;
                Ok(d)
            })
            .collect::<PyResult<Vec<_>>>()?;
        let out = PyDict::new(py);
        out.set_item("statistic", report.statistic)?;
        out.set_item("dof", report.dof)?;
        out.set_item("p_value", report.p_value)?;
        out.set_item("bins", bins)?;
        Ok(out)
    }

    #[pyfunction]
    #[pyo3(signature = (polys, *, budget=None))]
    fn count_common_zeros(polys: Vec<PyRef<'_, PyPolynomial>>, budget: Option<u64>) -> PyResult<u64> {
        let system = PolySystem::new(polys.iter().map(|p| p.0.clone()).collect()).map_err(to_py)?;
        zerolab::count_common_zeros(&system, budget_of(budget)).map_err(to_py)
    }

    /// Number of polynomials in `space` vanishing at every point of `points`.
    #[pyfunction]
    #[pyo3(signature = (space, points, *, budget=None))]
    fn vanishing_count(space: PyRef<'_, PySampleSpace>, points: Vec<Vec<u64>>, budget: Option<u64>) -> PyResult<u64> {
        let ring = space.0.ring();
        let pts = points
            .into_iter()
            .map(|p| Point::from_indices(ring, p))
            .collect::<zerolab::Result<Vec<_>>>()
            .map_err(to_py)?;
        let query = VanishingQuery::new(space.0.clone(), pts).map_err(to_py)?;
        zerolab::vanishing_count(&query, budget_of(budget)).map_err(to_py)
    }

    /// Every point of `R^n` as a list of element indices, first coordinate fastest.
    #[pyfunction]
    fn points(ring: PyRef<'_, PyRing>, nvars: usize) -> Vec<Vec<u64>> {
        all_points(&ring.0, nvars).map(|p| p.indices().to_vec()).collect()
    }

    /// Rows `(q, trials, tv, p0)` comparing `Bin(q^n, q^-n)` with Poisson(1).
    #[pyfunction]
    #[pyo3(signature = (n, qs))]
    fn poisson_limit_report(n: usize, qs: Vec<u64>) -> PyResult<Vec<(u64, u64, f64, f64)>> {
        let rows = zerolab::poisson_limit_report(n, &qs).map_err(to_py)?;
        Ok(rows.into_iter().map(|r| (r.q, r.trials, r.tv, r.p0)).collect())
    }

    /// Exhaustive distributions along the total-degree filtration, as a dict.
    #[pyfunction]
    #[pyo3(signature = (ring, nvars, m, t_max, tol, *, stop_early=true, point=None, budget=None, workers=None))]
    #[allow(clippy::too_many_arguments)]
    fn density_estimate<'py>(
        py: Python<'py>,
        ring: PyRef<'_, PyRing>,
        nvars: usize,
        m: usize,
        t_max: u32,
        tol: f64,
        stop_early: bool,
        point: Option<Vec<u64>>,
        budget: Option<u64>,
        workers: Option<usize>,
    ) -> PyResult<Bound<'py, PyAny>> {
        let filtration = Filtration::full(&ring.0, nvars, t_max).map_err(to_py)?;
        let config = DensityConfig {
            m,
            tol,
            stop_early,
            point,
        };
        let opts = options(budget, workers);
        let est = py
            .detach(|| zerolab::density_estimate(&filtration, &config, &opts))
            .map_err(to_py)?;
        json_value(py, &est.to_json())
    }

    #[pymodule_init]
    fn init(m: &Bound<'_, PyModule>) -> PyResult<()> {
        m.add("DEFAULT_BUDGET", zerolab::DEFAULT_BUDGET)
    }
}
