//! Python bindings for cmlocus.

use pyo3::prelude::*;

#[pymodule]
mod cmlocus_py {
    use cmlocus::arith::{self, FieldSymbol, OrderDisc};
    use cmlocus::cli::fiber_json;
    use cmlocus::locus;
    use cmlocus::Error;
    use num_bigint::BigInt;
    use pyo3::exceptions::{PyRuntimeError, PyValueError};
    use pyo3::prelude::*;

    fn py_err(e: Error) -> PyErr {
        if e.is_consistency() {
            PyRuntimeError::new_err(e.to_string())
        } else {
            PyValueError::new_err(e.to_string())
        }
    }

    fn order(dk: i64, f: u64) -> PyResult<OrderDisc> {
        OrderDisc::cm(dk, f).map_err(py_err)
    }

    fn symbol(f: &FieldSymbol) -> (String, u64) {
        (format!("{:?}", f.base), f.m)
    }

    fn small(x: num_bigint::BigUint) -> PyResult<u64> {
        use num_traits::ToPrimitive;
        x.to_u64().ok_or_else(|| PyValueError::new_err(format!("{x} exceeds 64 bits")))
    }

    /// Class number of a negative discriminant.
    #[pyfunction]
    fn class_number(disc: i64) -> PyResult<u64> {
        arith::class_number(&BigInt::from(disc)).map_err(py_err)
    }

    /// [K(f) : K(1)].
    #[pyfunction]
    fn rcf_rel_degree(dk: i64, f: u64) -> PyResult<u64> {
        small(arith::rcf_rel_degree(dk, f).map_err(py_err)?)
    }

    /// Closure and index of the compositum K(m_1) ... K(m_r).
    #[pyfunction]
    fn compose(dk: i64, conductors: Vec<u64>) -> PyResult<((String, u64), u64)> {
        let fields: Vec<FieldSymbol> = conductors.into_iter().map(|m| FieldSymbol::k(m, dk)).collect();
        let r = arith::compose_rcf(&fields).map_err(py_err)?;
        Ok((symbol(&r.closure), r.index))
    }

    /// Closed points of X0(M, N) over J_delta as (base, m, d, e, count).
    #[pyfunction]
    #[pyo3(signature = (dk, f, m, n))]
    fn fiber(dk: i64, f: u64, m: u64, n: u64) -> PyResult<Vec<(String, u64, u64, u32, u64)>> {
        let r = locus::fiber_x0mn(&order(dk, f)?, m, n).map_err(py_err)?;
        Ok(r.merged().into_iter().map(|(g, d, e, c)| (format!("{:?}", g.base), g.m, d, e, c)).collect())
    }

    /// The fiber as the JSON document printed by `cmlocus fiber --format json`.
    #[pyfunction]
    fn fiber_to_json(dk: i64, f: u64, m: u64, n: u64) -> PyResult<String> {
        let r = locus::fiber_x0mn(&order(dk, f)?, m, n).map_err(py_err)?;
        Ok(fiber_json(&r).map_err(py_err)?.to_string())
    }

    /// Primitive residue fields and primitive degrees on X0(M, N).
    #[pyfunction]
    fn primitive(dk: i64, f: u64, m: u64, n: u64) -> PyResult<(Vec<(String, u64)>, Vec<u64>)> {
        let p = locus::primitive_x0mn(&order(dk, f)?, m, n).map_err(py_err)?;
        let degrees = p.degrees.into_iter().map(small).collect::<PyResult<_>>()?;
        Ok((p.fields.iter().map(symbol).collect(), degrees))
    }

    /// (e, f, points) of X1(M, N) -> X0(M, N) above a CM point.
    #[pyfunction]
    #[pyo3(signature = (dk, f, m, n, elliptic=false))]
    fn x1(dk: i64, f: u64, m: u64, n: u64, elliptic: bool) -> PyResult<(u32, u64, u32)> {
        let t = locus::x1_fiber(&order(dk, f)?, m, n, elliptic).map_err(py_err)?;
        Ok((t.e, t.f, t.points))
    }
}
