//! Python bindings for the `qmckay` core crate.

use std::collections::BTreeMap;

use pyo3::exceptions::PyValueError;
use pyo3::prelude::*;

use qmckay::fusion::FusionRing;
use qmckay::oq;
use qmckay::quiverrep::{rho_class, RepCatalog};
use qmckay::sheafcat::SheafCategory;
use qmckay::subgroup;
use qmckay::{DynkinGraph, QuantumSubgroup};

type Table = Vec<Vec<usize>>;

fn py_err(e: qmckay::Error) -> PyErr {
    PyValueError::new_err(e.to_string())
}

fn graph(label: &str) -> PyResult<DynkinGraph> {
    DynkinGraph::from_label(label).map_err(py_err)
}

fn sheaf(label: &str) -> PyResult<SheafCategory> {
    let q = QuantumSubgroup::build(&graph(label)?).map_err(py_err)?;
    Ok(SheafCategory::new(&q))
}

/// Coxeter number of an ADE label such as "E6".
#[pyfunction]
fn coxeter_number(label: &str) -> PyResult<usize> {
    Ok(graph(label)?.h())
}

/// `V_n (x) V_m` at level `h` as `{label: multiplicity}`.
#[pyfunction]
fn tensor(h: usize, n: usize, m: usize) -> PyResult<BTreeMap<usize, u64>> {
    let ring = FusionRing::new(h).map_err(py_err)?;
    Ok(ring.tensor(n, m).map_err(py_err)?.support().collect())
}

#[pyfunction]
fn admissible_graphs(h: usize) -> PyResult<Vec<String>> {
    Ok(subgroup::admissible_graphs(h)
        .map_err(py_err)?
        .iter()
        .map(DynkinGraph::name)
        .collect())
}

/// `None` for a quantum subgroup graph, otherwise the violation found.
#[pyfunction]
fn subgroup_violation(label: &str) -> PyResult<Option<String>> {
    match QuantumSubgroup::build(&graph(label)?) {
        Ok(_) => Ok(None),
        Err(qmckay::Error::NotAdmissible { violation, .. }) => Ok(Some(violation.to_string())),
        Err(e) => Err(py_err(e)),
    }
}

#[pyfunction]
fn triangle_exact(h: usize, n: usize) -> PyResult<bool> {
    Ok(oq::verify_triangle(h, n).map_err(py_err)?.passed())
}

/// `(labels, hom, ext)` over all indecomposables.
#[pyfunction]
fn hom_table(label: &str) -> PyResult<(Vec<String>, Table, Table)> {
    let t = sheaf(label)?.hom_table();
    Ok((t.labels, t.hom, t.ext))
}

/// `(rank, snf_diagonal, root_bijection, twist_order)`
#[pyfunction]
fn k_group(label: &str) -> PyResult<(usize, Vec<i128>, bool, Option<usize>)> {
    let s = sheaf(label)?;
    let k = s.k_group().map_err(py_err)?;
    let c = s.coxeter_action().map_err(py_err)?;
    Ok((k.rank, k.snf_diagonal, k.root_bijection, c.order))
}

/// Violations of `Hom(X, Y) = Ext^1(Y, X(twist))` and the number of pairs.
#[pyfunction]
#[pyo3(signature = (label, twist = 2))]
fn serre_violations(label: &str, twist: i64) -> PyResult<(usize, usize)> {
    let r = sheaf(label)?.serre_check_with_twist(twist);
    Ok((r.violations, r.pairs))
}

/// `(object, shift, dimension vector)` for every indecomposable; the
/// bipartite height when `height` is omitted.
#[pyfunction]
#[pyo3(signature = (label, height = None))]
fn restrict(label: &str, height: Option<Vec<i64>>) -> PyResult<Vec<(String, u8, Vec<i64>)>> {
    let s = sheaf(label)?;
    let g = s.graph();
    let ht = match height {
        Some(v) => g.height(&v).map_err(py_err)?,
        None => g.bipartite_height(),
    };
    let catalog = RepCatalog::for_height(g, &ht).map_err(py_err)?;
    (0..s.len())
        .map(|v| {
            let c = rho_class(&s, &catalog, &ht, s.vertex(v)).map_err(py_err)?;
            Ok((s.label(v), c.shift, c.rep.dim_vector()))
        })
        .collect()
}

#[pymodule]
fn qmckay_py(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_function(wrap_pyfunction!(coxeter_number, m)?)?;
    m.add_function(wrap_pyfunction!(tensor, m)?)?;
    m.add_function(wrap_pyfunction!(admissible_graphs, m)?)?;
    m.add_function(wrap_pyfunction!(subgroup_violation, m)?)?;
    m.add_function(wrap_pyfunction!(triangle_exact, m)?)?;
    m.add_function(wrap_pyfunction!(hom_table, m)?)?;
    m.add_function(wrap_pyfunction!(k_group, m)?)?;
    m.add_function(wrap_pyfunction!(serre_violations, m)?)?;
    m.add_function(wrap_pyfunction!(restrict, m)?)?;
    Ok(())
}
