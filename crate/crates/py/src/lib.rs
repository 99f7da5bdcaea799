//! Python bindings. Matrices travel as row-major nested lists of `complex`,
//! the statistics flag as `"sym"`, `"anti"` or `None`.

use exgamble::{
    AssessmentSet as CoreAssessment, ComplexMatrix, ComplexVector, Complex64, DecompositionOutcome,
    DensityMatrix as CoreDensity, Gamble as CoreGamble, Measurement as CoreMeasurement, Permutation, ProductState,
    SolverOptions, StarFlag, SystemShape, WitnessConfig, WitnessOutcome,
};
use pyo3::exceptions::{PyRuntimeError, PyValueError};
use pyo3::prelude::*;
use pyo3::types::PyDict;

type Rows = Vec<Vec<Complex64>>;

fn err(e: exgamble::Error) -> PyErr {
    match e {
        exgamble::Error::IncompatibleOutcome { .. } => PyRuntimeError::new_err(e.to_string()),
        _ => PyValueError::new_err(e.to_string()),
    }
}

fn shape(n: usize, m: usize) -> PyResult<SystemShape> {
    SystemShape::new(n, m).map_err(err)
}

fn star(flag: Option<&str>) -> PyResult<Option<StarFlag>> {
    match flag {
        None | Some("none") => Ok(None),
        Some("sym") => Ok(Some(StarFlag::Sym)),
        Some("anti") => Ok(Some(StarFlag::Anti)),
        Some(other) => Err(PyValueError::new_err(format!("star must be 'sym', 'anti' or None, got {other:?}"))),
    }
}

fn required_star(flag: &str) -> PyResult<StarFlag> {
    star(Some(flag))?.ok_or_else(|| PyValueError::new_err("this operation needs star 'sym' or 'anti'"))
}

fn to_matrix(rows: &Rows) -> PyResult<ComplexMatrix> {
    let r = rows.len();
    let c = rows.first().map_or(0, Vec::len);
    if rows.iter().any(|row| row.len() != c) {
        return Err(PyValueError::new_err("matrix rows have different lengths"));
    }
    Ok(ComplexMatrix::from_fn(r, c, |i, j| rows[i][j]))
}

fn to_rows(a: &ComplexMatrix) -> Rows {
    (0..a.nrows()).map(|i| (0..a.ncols()).map(|j| a[(i, j)]).collect()).collect()
}

fn product_state(factors: &Rows) -> PyResult<ProductState> {
    ProductState::new(factors.iter().map(|f| ComplexVector::from_column_slice(f)).collect()).map_err(err)
}

fn options(tol: f64, iter_cap: usize) -> SolverOptions {
    SolverOptions { tol, iter_cap }
}

#[pyclass(module = "exgamble", frozen, from_py_object)]
#[derive(Clone)]
struct Gamble(CoreGamble);

#[pymethods]
impl Gamble {
    #[new]
    fn new(n: usize, m: usize, matrix: Rows) -> PyResult<Self> {
        Ok(Self(CoreGamble::new(shape(n, m)?, to_matrix(&matrix)?).map_err(err)?))
    }

    #[getter]
    fn matrix(&self) -> Rows {
        to_rows(self.0.matrix())
    }

    #[getter]
    fn shape(&self) -> (usize, usize) {
        (self.0.shape().n(), self.0.shape().m())
    }

    /// Value on the product state with the given unit factors.
    fn evaluate(&self, factors: Rows) -> PyResult<f64> {
        self.0.evaluate(&product_state(&factors)?).map_err(err)
    }

    fn exchange_projection(&self, star: &str) -> PyResult<Self> {
        Ok(Self(self.0.exchange_projection(required_star(star)?).map_err(err)?))
    }

    /// Permutations are 0-based image lists.
    #[pyo3(signature = (left, right, star=None))]
    fn permuted(&self, left: Vec<usize>, right: Vec<usize>, star: Option<&str>) -> PyResult<Self> {
        let pl = Permutation::new(left).map_err(err)?;
        let pr = Permutation::new(right).map_err(err)?;
        Ok(Self(self.0.permuted(&pl, &pr, self::star(star)?).map_err(err)?))
    }

    fn is_physical_observable(&self, star: &str, tol: f64) -> PyResult<bool> {
        exgamble::is_physical_observable(&self.0, required_star(star)?, tol).map_err(err)
    }

    fn __repr__(&self) -> String {
        format!("Gamble(n={}, m={})", self.0.shape().n(), self.0.shape().m())
    }
}

#[pyclass(module = "exgamble", frozen)]
struct DensityMatrix(CoreDensity);

#[pymethods]
impl DensityMatrix {
    #[new]
    fn new(n: usize, m: usize, matrix: Rows) -> PyResult<Self> {
        Ok(Self(CoreDensity::new(shape(n, m)?, to_matrix(&matrix)?).map_err(err)?))
    }

    #[staticmethod]
    fn maximally_mixed(n: usize, m: usize) -> PyResult<Self> {
        Ok(Self(CoreDensity::maximally_mixed(shape(n, m)?)))
    }

    #[getter]
    fn matrix(&self) -> Rows {
        to_rows(self.0.matrix())
    }

    #[getter]
    fn shape(&self) -> (usize, usize) {
        (self.0.shape().n(), self.0.shape().m())
    }

    fn expectation(&self, g: &Gamble) -> PyResult<f64> {
        self.0.expectation(&g.0).map_err(err)
    }

    fn __repr__(&self) -> String {
        format!("DensityMatrix(n={}, m={})", self.0.shape().n(), self.0.shape().m())
    }
}

#[pyclass(module = "exgamble", frozen)]
struct AssessmentSet(CoreAssessment);

#[pymethods]
impl AssessmentSet {
    #[new]
    #[pyo3(signature = (n, m, gambles, star=None))]
    fn new(n: usize, m: usize, gambles: Vec<Gamble>, star: Option<&str>) -> PyResult<Self> {
        let gambles = gambles.into_iter().map(|g| g.0).collect();
        Ok(Self(CoreAssessment::new(shape(n, m)?, gambles, self::star(star)?).map_err(err)?))
    }

    fn __len__(&self) -> usize {
        self.0.gambles().len()
    }
}

#[pyclass(module = "exgamble", frozen)]
struct Measurement(CoreMeasurement);

#[pymethods]
impl Measurement {
    /// Projective measurement of the first `measured` particles.
    #[new]
    fn new(n: usize, m: usize, measured: usize, projectors: Vec<Rows>) -> PyResult<Self> {
        let projectors = projectors.iter().map(to_matrix).collect::<PyResult<Vec<_>>>()?;
        Ok(Self(CoreMeasurement::new(shape(n, m)?, measured, projectors).map_err(err)?))
    }

    /// `{P, I − P}`.
    #[staticmethod]
    fn binary(n: usize, m: usize, measured: usize, projector: Rows) -> PyResult<Self> {
        Ok(Self(CoreMeasurement::binary(shape(n, m)?, measured, to_matrix(&projector)?).map_err(err)?))
    }

    #[getter]
    fn outcomes(&self) -> usize {
        self.0.outcomes()
    }
}

#[pyfunction]
fn symmetrizer(n: usize, m: usize, star: &str) -> PyResult<Rows> {
    Ok(to_rows(&exgamble::symmetrizer(shape(n, m)?, required_star(star)?).map_err(err)?))
}

#[pyfunction]
fn permutation_operator(perm: Vec<usize>, n: usize) -> PyResult<Rows> {
    let s = shape(n, perm.len())?;
    let p = Permutation::new(perm).map_err(err)?;
    Ok(to_rows(&exgamble::permutation_operator(&p, s).map_err(err)?))
}

#[pyfunction]
fn is_exchangeable_density(rho: &DensityMatrix, star: &str, tol: f64) -> PyResult<bool> {
    exgamble::is_exchangeable_density(&rho.0, required_star(star)?, tol).map_err(err)
}

/// Returns a dict with `status`, `residual`, `iterations`, `witness` and
/// `multipliers`.
#[pyfunction]
#[pyo3(signature = (assessment, tol=1e-8, iter_cap=10_000))]
fn credal_feasible<'py>(
    py: Python<'py>,
    assessment: &AssessmentSet,
    tol: f64,
    iter_cap: usize,
) -> PyResult<Bound<'py, PyDict>> {
    let res = exgamble::credal_feasible(&assessment.0, options(tol, iter_cap)).map_err(err)?;
    let out = PyDict::new(py);
    out.set_item("status", res.status.to_string())?;
    out.set_item("residual", res.residual)?;
    out.set_item("iterations", res.iterations)?;
    out.set_item("witness", res.witness.map(DensityMatrix))?;
    out.set_item("multipliers", res.sure_loss.map(|s| s.multipliers))?;
    Ok(out)
}

/// `"yes"`, `"no"` or `"undecided"`.
#[pyfunction]
#[pyo3(signature = (gamble, assessment, tol=1e-8, iter_cap=10_000))]
fn in_natural_extension(gamble: &Gamble, assessment: &AssessmentSet, tol: f64, iter_cap: usize) -> PyResult<String> {
    let v = exgamble::in_natural_extension(&gamble.0, &assessment.0, options(tol, iter_cap)).map_err(err)?;
    Ok(v.to_string())
}

#[pyfunction]
fn outcome_probability(rho: &DensityMatrix, measurement: &Measurement, outcome: usize) -> PyResult<f64> {
    exgamble::outcome_probability(&rho.0, &measurement.0, outcome).map_err(err)
}

/// Raises `RuntimeError` when the outcome has probability zero.
#[pyfunction]
fn condition_density(rho: &DensityMatrix, measurement: &Measurement, outcome: usize) -> PyResult<DensityMatrix> {
    Ok(DensityMatrix(exgamble::condition_density(&rho.0, &measurement.0, outcome).map_err(err)?))
}

#[pyfunction]
fn partial_transpose(matrix: Rows, n: usize, m: usize, subsystem: usize) -> PyResult<Rows> {
    Ok(to_rows(&exgamble::partial_transpose(&to_matrix(&matrix)?, shape(n, m)?, subsystem).map_err(err)?))
}

#[pyfunction]
fn ppt_min_eigenvalue(rho: &DensityMatrix) -> PyResult<f64> {
    exgamble::ppt_min_eigenvalue(&rho.0).map_err(err)
}

/// `"separable"` or `"entangled"` by the partial-transpose test.
#[pyfunction]
fn separability_ppt(rho: &DensityMatrix) -> PyResult<String> {
    Ok(exgamble::separability_ppt(&rho.0).map_err(err)?.to_string())
}

/// A dict with `residual` and `atoms` (list of `(weight, factors)`) when a
/// decomposition is found, otherwise `None`.
#[pyfunction]
#[pyo3(signature = (rho, star=None, samples=200, seed=0))]
fn projected_mixture_decomposition<'py>(
    py: Python<'py>,
    rho: &DensityMatrix,
    star: Option<&str>,
    samples: usize,
    seed: u64,
) -> PyResult<Option<Bound<'py, PyDict>>> {
    let out = exgamble::projected_mixture_decomposition(&rho.0, self::star(star)?, samples, seed).map_err(err)?;
    let DecompositionOutcome::Found(d) = out else { return Ok(None) };
    let dict = PyDict::new(py);
    dict.set_item("residual", d.residual())?;
    let atoms: Vec<(f64, Rows)> = d
        .atoms()
        .iter()
        .map(|a| (a.weight, a.state.factors().iter().map(|f| f.iter().copied().collect()).collect()))
        .collect();
    dict.set_item("atoms", atoms)?;
    Ok(Some(dict))
}

/// A dict with the witness `gamble`, `estimated_max` and `trace_value`, or
/// `None` when no witness clears the margin.
#[pyfunction]
#[pyo3(signature = (rho, star=None, samples=20_000, seed=0))]
fn dutch_book_witness_search<'py>(
    py: Python<'py>,
    rho: &DensityMatrix,
    star: Option<&str>,
    samples: usize,
    seed: u64,
) -> PyResult<Option<Bound<'py, PyDict>>> {
    let cfg = WitnessConfig { samples, seed, ..WitnessConfig::default() };
    let out = exgamble::dutch_book_witness_search(&rho.0, self::star(star)?, &cfg).map_err(err)?;
    let WitnessOutcome::Found(w) = out else { return Ok(None) };
    let dict = PyDict::new(py);
    dict.set_item("gamble", Gamble(w.gamble))?;
    dict.set_item("estimated_max", w.estimated_max)?;
    dict.set_item("trace_value", w.trace_value)?;
    Ok(Some(dict))
}

#[pymodule(name = "exgamble")]
fn init(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<Gamble>()?;
    m.add_class::<DensityMatrix>()?;
    m.add_class::<AssessmentSet>()?;
    m.add_class::<Measurement>()?;
    m.add_function(wrap_pyfunction!(symmetrizer, m)?)?;
    m.add_function(wrap_pyfunction!(permutation_operator, m)?)?;
    m.add_function(wrap_pyfunction!(is_exchangeable_density, m)?)?;
    m.add_function(wrap_pyfunction!(credal_feasible, m)?)?;
    m.add_function(wrap_pyfunction!(in_natural_extension, m)?)?;
    m.add_function(wrap_pyfunction!(outcome_probability, m)?)?;
    m.add_function(wrap_pyfunction!(condition_density, m)?)?;
    m.add_function(wrap_pyfunction!(partial_transpose, m)?)?;
    m.add_function(wrap_pyfunction!(ppt_min_eigenvalue, m)?)?;
    m.add_function(wrap_pyfunction!(separability_ppt, m)?)?;
    m.add_function(wrap_pyfunction!(projected_mixture_decomposition, m)?)?;
    m.add_function(wrap_pyfunction!(dutch_book_witness_search, m)?)?;
    Ok(())
}
