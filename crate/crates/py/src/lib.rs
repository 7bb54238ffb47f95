use num_bigint::BigUint;
use pyo3::exceptions::PyValueError;
use pyo3::prelude::*;
use pyo3::types::PyDict;

use rns3::cost::{self, ConverterDesign, GateCosts, TableFormat};
use rns3::{Op, RnsError};

fn value_error(e: RnsError) -> PyErr {
    PyValueError::new_err(e.to_string())
}

/// The moduli set {2^n, 2^2n - 1, 2^2n + 1}.
#[pyclass(frozen, name = "ModuliSet")]
struct PyModuliSet {
    inner: rns3::ModuliSet,
}

#[pymethods]
impl PyModuliSet {
    #[new]
    fn new(n: u32) -> PyResult<Self> {
        rns3::ModuliSet::new(n)
            .map(|inner| PyModuliSet { inner })
            .map_err(value_error)
    }

    #[getter]
    fn n(&self) -> u32 {
        self.inner.n()
    }

    #[getter]
    fn moduli(&self) -> (BigUint, BigUint, BigUint) {
        let [a, b, c] = self.inner.moduli().clone();
        (a, b, c)
    }

    #[getter]
    fn range(&self) -> BigUint {
        self.inner.range().clone()
    }

    #[getter]
    fn inverses(&self) -> (BigUint, BigUint, BigUint) {
        rns3::inverse_constants(&self.inner)
    }

    fn encode(&self, x: BigUint) -> PyResult<PyResidueVector> {
        rns3::forward_convert(&self.inner, &x)
            .map(PyResidueVector::from)
            .map_err(value_error)
    }

    /// Decode through the operand-preparation / CSA / modular-adder datapath.
    fn decode(&self, rv: &PyResidueVector) -> PyResult<BigUint> {
        rns3::reverse_convert(&self.inner, &rv.inner).map_err(value_error)
    }

    /// Decode with the big-integer CRT reference.
    fn crt(&self, rv: &PyResidueVector) -> PyResult<BigUint> {
        rns3::crt_reconstruct(&self.inner, &rv.inner).map_err(value_error)
    }

    /// Intermediate words of one decode, as a dict of ints and MSB-first bit strings.
    fn trace<'py>(&self, py: Python<'py>, rv: &PyResidueVector) -> PyResult<Bound<'py, PyDict>> {
        let t = rns3::reverse_convert_traced(&self.inner, &rv.inner).map_err(value_error)?;
        let d = PyDict::new(py);
        for (name, w) in [
            ("s1_prime", &t.operands.s1_prime),
            ("s2", &t.operands.s2),
            ("s31", &t.operands.s31),
            ("sum", &t.sum),
            ("carry", &t.carry),
        ] {
            d.set_item(name, w.value().clone())?;
            d.set_item(format!("{name}_bits"), w.to_binary())?;
        }
        d.set_item("y", t.y)?;
        d.set_item("x", t.x)?;
        Ok(d)
    }

    /// Channel-wise "add", "sub" or "mul".
    fn op(&self, op: &str, a: &PyResidueVector, b: &PyResidueVector) -> PyResult<PyResidueVector> {
        let op: Op = op.parse().map_err(value_error)?;
        rns3::rns_op(&self.inner, op, &a.inner, &b.inner)
            .map(PyResidueVector::from)
            .map_err(value_error)
    }

    fn __repr__(&self) -> String {
        let [a, b, c] = self.inner.moduli();
        format!("ModuliSet(n={}, moduli=({a}, {b}, {c}))", self.inner.n())
    }
}

#[pyclass(frozen, eq, name = "ResidueVector")]
#[derive(PartialEq)]
struct PyResidueVector {
    inner: rns3::ResidueVector,
}

impl From<rns3::ResidueVector> for PyResidueVector {
    fn from(inner: rns3::ResidueVector) -> Self {
        PyResidueVector { inner }
    }
}

#[pymethods]
impl PyResidueVector {
    #[new]
    fn new(r1: BigUint, r2: BigUint, r3: BigUint) -> Self {
        rns3::ResidueVector::new(r1, r2, r3).into()
    }

    #[getter]
    fn r1(&self) -> BigUint {
        self.inner.r1.clone()
    }

    #[getter]
    fn r2(&self) -> BigUint {
        self.inner.r2.clone()
    }

    #[getter]
    fn r3(&self) -> BigUint {
        self.inner.r3.clone()
    }

    /// Bit `j` (LSB = 0) of residue `i` (1-based).
    fn bit(&self, i: usize, j: u64) -> PyResult<bool> {
        if !(1..=3).contains(&i) {
            return Err(PyValueError::new_err("channel index must be 1, 2 or 3"));
        }
        Ok(self.inner.bit(i, j))
    }

    fn __repr__(&self) -> String {
        format!(
            "ResidueVector({}, {}, {})",
            self.inner.r1, self.inner.r2, self.inner.r3
        )
    }
}

#[pyfunction]
fn pairwise_coprime(values: Vec<BigUint>) -> PyResult<bool> {
    rns3::pairwise_coprime(&values).map_err(value_error)
}

fn design(name: &str, size: u32) -> PyResult<ConverterDesign> {
    match name {
        "ours" => Ok(ConverterDesign::Ours(size)),
        "ref1" => Ok(ConverterDesign::Ref1(size)),
        "ref9" => Ok(ConverterDesign::Ref9(size)),
        "ref11" => Ok(ConverterDesign::Ref11(size)),
        other => Err(PyValueError::new_err(format!("unknown design '{other}'"))),
    }
}

/// Unit-gate (area, delay) of a converter design.
#[pyfunction]
fn converter_cost(name: &str, size: u32) -> PyResult<(u64, u32)> {
    let r = cost::cost_report(design(name, size)?, &GateCosts::UNIT).map_err(value_error)?;
    Ok((r.area, r.delay))
}

/// Rows of the 8/16/32/64-bit comparison as dicts.
#[pyfunction]
fn table4<'py>(py: Python<'py>) -> PyResult<Vec<Bound<'py, PyDict>>> {
    cost::table4()
        .iter()
        .map(|r| {
            let d = PyDict::new(py);
            d.set_item("dr_bits", r.dr_bits)?;
            d.set_item("n", r.n())?;
            d.set_item("m", r.m())?;
            d.set_item("a_ours", r.ours.area)?;
            d.set_item("a_ref11", r.reference.area)?;
            d.set_item("extra_area_pct", r.extra_area.as_f64())?;
            d.set_item("t_ours", r.ours.delay)?;
            d.set_item("t_ref11", r.reference.delay)?;
            d.set_item("speedup_pct", r.speedup.as_f64())?;
            Ok(d)
        })
        .collect()
}

#[pyfunction]
fn table4_csv() -> PyResult<String> {
    cost::emit_table(&cost::table4(), TableFormat::Csv).map_err(value_error)
}

#[pymodule]
fn pyrns3(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<PyModuliSet>()?;
    m.add_class::<PyResidueVector>()?;
    m.add_function(wrap_pyfunction!(pairwise_coprime, m)?)?;
    m.add_function(wrap_pyfunction!(converter_cost, m)?)?;
    m.add_function(wrap_pyfunction!(table4, m)?)?;
    m.add_function(wrap_pyfunction!(table4_csv, m)?)?;
    Ok(())
}
