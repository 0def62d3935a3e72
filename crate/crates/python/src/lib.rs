//! Python bindings. Exact values cross the boundary as `fractions.Fraction`;
//! unbounded ratios come back as `None`.

use pyo3::exceptions::{PyOverflowError, PyValueError};
use pyo3::prelude::*;
use pyo3::types::{PyDict, PyList};

use costshare::analysis::{self, Mechanism};
use costshare::costs::alpha;
use costshare::format;
use costshare::generators::{self, GenKind};
use costshare::{CostFn, CostModel, Error, Factor, Rat, Subset, ValuationFn};

fn err(e: Error) -> PyErr {
    match e {
        Error::TooLarge { .. } => PyOverflowError::new_err(e.to_string()),
        _ => PyValueError::new_err(e.to_string()),
    }
}

fn fraction<'py>(py: Python<'py>, r: Rat) -> PyResult<Bound<'py, PyAny>> {
    py.import("fractions")?.getattr("Fraction")?.call1((r.numer(), r.denom()))
}

fn factor<'py>(py: Python<'py>, f: Factor) -> PyResult<Option<Bound<'py, PyAny>>> {
    f.finite().map(|r| fraction(py, r)).transpose()
}

/// Accepts int, Fraction or a `p/q` string.
fn to_rat(x: &Bound<'_, PyAny>) -> PyResult<Rat> {
    x.str()?.to_str()?.parse().map_err(err)
}

fn items(s: Subset) -> Vec<usize> {
    s.iter().collect()
}

fn mechanism(name: &str, order: Option<Vec<usize>>) -> PyResult<Mechanism> {
    match name.parse().map_err(err)? {
        Mechanism::Sequential(_) => Ok(Mechanism::Sequential(order)),
        m if order.is_none() => Ok(m),
        _ => Err(PyValueError::new_err("order applies only to the sequential mechanism")),
    }
}

/// A cost-sharing instance: players, items, valuations and costs.
#[pyclass(frozen, module = "pycostshare")]
struct Instance(costshare::Instance);

#[pymethods]
impl Instance {
    /// Parse the line-based instance format.
    #[staticmethod]
    fn parse(text: &str) -> PyResult<Self> {
        format::parse_instance(text).map(Instance).map_err(err)
    }

    #[staticmethod]
    fn read(path: &str) -> PyResult<Self> {
        format::read_instance(path).map(Instance).map_err(err)
    }

    /// Deterministic generator, e.g. `generate("set-cover:n=6,d=3", 7)`.
    #[staticmethod]
    #[pyo3(signature = (kind, seed=0))]
    fn generate(kind: &str, seed: u64) -> PyResult<Self> {
        let kind: GenKind = kind.parse().map_err(err)?;
        generators::generate(&kind, seed).map(Instance).map_err(err)
    }

    /// Symmetric submodular valuations (marginal lists) and one cost table
    /// per item (`2^n` values indexed by player bitmask).
    #[staticmethod]
    fn symmetric(marginals: Vec<Vec<Bound<'_, PyAny>>>, cost_tables: Vec<Vec<Bound<'_, PyAny>>>) -> PyResult<Self> {
        let n = marginals.len();
        let vals = marginals
            .iter()
            .map(|ms| {
                let ms = ms.iter().map(to_rat).collect::<PyResult<Vec<_>>>()?;
                ValuationFn::symmetric(ms).map_err(err)
            })
            .collect::<PyResult<Vec<_>>>()?;
        let costs = cost_tables
            .iter()
            .map(|t| {
                let t = t.iter().map(to_rat).collect::<PyResult<Vec<_>>>()?;
                CostFn::table(n, t).map_err(err)
            })
            .collect::<PyResult<Vec<_>>>()?;
        costshare::Instance::separable(vals, costs).map(Instance).map_err(err)
    }

    fn to_text(&self) -> PyResult<String> {
        format::write_instance(&self.0).map_err(err)
    }

    #[getter]
    fn n(&self) -> usize {
        self.0.n()
    }

    #[getter]
    fn m(&self) -> usize {
        self.0.m()
    }

    /// Total cost of an allocation given as one item list per player.
    fn allocation_cost<'py>(&self, py: Python<'py>, bundles: Vec<Vec<usize>>) -> PyResult<Bound<'py, PyAny>> {
        let a = allocation(&self.0, bundles)?;
        fraction(py, self.0.allocation_cost(&a).map_err(err)?)
    }

    fn __repr__(&self) -> String {
        format!("Instance(n={}, m={})", self.0.n(), self.0.m())
    }
}

fn allocation(inst: &costshare::Instance, bundles: Vec<Vec<usize>>) -> PyResult<costshare::Allocation> {
    let bundles = bundles.into_iter().map(Subset::from_elems).collect();
    let a = costshare::Allocation::from_bundles(inst.m(), bundles).map_err(err)?;
    inst.check_allocation(&a).map_err(err)?;
    Ok(a)
}

fn bundles(a: &costshare::Allocation) -> Vec<Vec<usize>> {
    a.bundles().iter().map(|&b| items(b)).collect()
}

/// Run a mechanism ("iacsm" or "sm") truthfully. Returns a dict with
/// `bundles`, `payments` and, for iacsm, `trace`.
#[pyfunction]
#[pyo3(signature = (instance, mechanism_name, order=None))]
fn run<'py>(
    py: Python<'py>,
    instance: &Instance,
    mechanism_name: &str,
    order: Option<Vec<usize>>,
) -> PyResult<Bound<'py, PyDict>> {
    let mech = mechanism(mechanism_name, order)?;
    let (outcome, trace) = py
        .detach(|| analysis::run_mechanism(&instance.0, &mech))
        .map_err(err)?;
    let d = PyDict::new(py);
    d.set_item("bundles", bundles(&outcome.allocation))?;
    let pays = outcome.payments.iter().map(|&p| fraction(py, p)).collect::<PyResult<Vec<_>>>()?;
    d.set_item("payments", PyList::new(py, pays)?)?;
    if let Some(t) = trace {
        let td = PyDict::new(py);
        td.set_item("order", &t.order)?;
        td.set_item("withdrawals", &t.withdrawals)?;
        let hist = t
            .share_history
            .iter()
            .map(|h| h.iter().map(|&r| fraction(py, r)).collect::<PyResult<Vec<_>>>())
            .collect::<PyResult<Vec<_>>>()?;
        td.set_item("shares", hist)?;
        td.set_item("bundles", t.bundle_history.iter().map(|&b| items(b)).collect::<Vec<_>>())?;
        d.set_item("trace", td)?;
    }
    Ok(d)
}

/// Run and compare against the exact optimum.
#[pyfunction]
#[pyo3(signature = (instance, mechanism_name, order=None))]
fn evaluate<'py>(
    py: Python<'py>,
    instance: &Instance,
    mechanism_name: &str,
    order: Option<Vec<usize>>,
) -> PyResult<Bound<'py, PyDict>> {
    let mech = mechanism(mechanism_name, order)?;
    let r = py.detach(|| analysis::evaluate_run(&instance.0, &mech)).map_err(err)?;
    let d = PyDict::new(py);
    d.set_item("bundles", bundles(&r.outcome.allocation))?;
    d.set_item("allocation_cost", fraction(py, r.allocation_cost)?)?;
    d.set_item("total_payment", fraction(py, r.total_payment)?)?;
    d.set_item("budget_ratio", factor(py, r.budget_ratio)?)?;
    d.set_item("social_cost", fraction(py, r.social_cost)?)?;
    d.set_item("optimal_social_cost", fraction(py, r.optimal_social_cost)?)?;
    d.set_item("optimum", bundles(&r.optimum))?;
    d.set_item("approx_ratio", factor(py, r.approx_ratio)?)?;
    let f = r.flags;
    d.set_item("p1", f.p1)?;
    d.set_item("p2", f.p2)?;
    d.set_item("final_set", f.final_set)?;
    d.set_item("ir", f.ir)?;
    d.set_item("npt", f.npt)?;
    Ok(d)
}

/// Minimum social cost and a lexicographically smallest optimal allocation.
#[pyfunction]
fn optimal_social_cost<'py>(py: Python<'py>, instance: &Instance) -> PyResult<(Bound<'py, PyAny>, Vec<Vec<usize>>)> {
    let (c, a) = py.detach(|| analysis::optimal_social_cost(&instance.0)).map_err(err)?;
    Ok((fraction(py, c)?, bundles(&a)))
}

/// Per item, the average-decreasing, min-bounded and max-bounded alphas
/// (`None` when unbounded). Non-separable instances report the two bounded
/// variants under item `None`.
#[pyfunction]
fn alphas<'py>(py: Python<'py>, instance: &Instance) -> PyResult<Vec<Bound<'py, PyDict>>> {
    let out = |item: Option<usize>, reports: Vec<(&str, alpha::AlphaReport)>| -> PyResult<Bound<'py, PyDict>> {
        let d = PyDict::new(py);
        d.set_item("item", item)?;
        for (k, r) in reports {
            d.set_item(k, factor(py, r.alpha)?)?;
        }
        Ok(d)
    };
    match instance.0.cost_model() {
        CostModel::Separable(costs) => costs
            .iter()
            .enumerate()
            .map(|(j, c)| {
                let reports = vec![
                    ("average_decreasing", alpha::alpha_average_decreasing(c).map_err(err)?),
                    ("min_bounded", alpha::alpha_min_bounded(c).map_err(err)?),
                    ("max_bounded", alpha::alpha_max_bounded(c).map_err(err)?),
                ];
                out(Some(j), reports)
            })
            .collect(),
        CostModel::NonSeparable(c) => {
            let reports = vec![
                ("min_bounded", alpha::alpha_min_bounded_ns(c, None).map_err(err)?),
                ("max_bounded", alpha::alpha_max_bounded_ns(c, None).map_err(err)?),
            ];
            Ok(vec![out(None, reports)?])
        }
    }
}

/// Search for a coalition of at most `coalition_max` players that gains by a
/// joint misreport. Returns `None` or a dict with `coalition`, `gains`.
#[pyfunction]
#[pyo3(signature = (instance, mechanism_name, coalition_max=2))]
fn wgsp_search<'py>(
    py: Python<'py>,
    instance: &Instance,
    mechanism_name: &str,
    coalition_max: usize,
) -> PyResult<Option<Bound<'py, PyDict>>> {
    let mech = mechanism(mechanism_name, None)?;
    let grid = generators::default_grid();
    let inst = &instance.0;
    let found = py
        .detach(|| {
            let space = match mech {
                Mechanism::Iacsm(_) => analysis::symmetric_space(inst.m(), &grid),
                Mechanism::Sequential(_) => {
                    let table_grid = [0, 1, 2, 4].map(Rat::int);
                    analysis::sequential_space(inst, &grid, &table_grid)?
                }
            };
            analysis::wgsp_search(inst, &mech, coalition_max, &space)
        })
        .map_err(err)?;
    found
        .map(|w| {
            let d = PyDict::new(py);
            d.set_item("coalition", items(w.coalition))?;
            let gains = w.gains.iter().map(|&g| fraction(py, g)).collect::<PyResult<Vec<_>>>()?;
            d.set_item("gains", gains)?;
            Ok(d)
        })
        .transpose()
}

/// `H_n = 1 + 1/2 + ... + 1/n`.
#[pyfunction]
fn harmonic(py: Python<'_>, n: usize) -> PyResult<Bound<'_, PyAny>> {
    fraction(py, costshare::harmonic(n))
}

#[pymodule]
fn pycostshare(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<Instance>()?;
    m.add_function(wrap_pyfunction!(run, m)?)?;
    m.add_function(wrap_pyfunction!(evaluate, m)?)?;
    m.add_function(wrap_pyfunction!(optimal_social_cost, m)?)?;
    m.add_function(wrap_pyfunction!(alphas, m)?)?;
    m.add_function(wrap_pyfunction!(wgsp_search, m)?)?;
    m.add_function(wrap_pyfunction!(harmonic, m)?)?;
    Ok(())
}
