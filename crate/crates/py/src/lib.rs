//! Python bindings: `import ffres`.

use pyo3::exceptions::PyValueError;
use pyo3::prelude::*;

use ffres_core::field_core::{gauss_sum, CycNum, Field, Space};
use ffres_core::harness::{csv_bytes, run_probe, run_verify, Envelope, ExperimentConfig};
use ffres_core::resultant::{nu_brute, nu_fourier, PointSet};
use ffres_core::sphere::SphereTable;
use ffres_core::transform::Mode;

fn err(e: ffres_core::Error) -> PyErr {
    PyValueError::new_err(e.to_string())
}

fn field(q: u64) -> PyResult<Field> {
    Field::from_order(q).map_err(err)
}

fn sets(space: &Space, raw: Vec<Vec<Vec<u64>>>) -> PyResult<Vec<PointSet>> {
    let f = space.field();
    raw.into_iter()
        .map(|rows| {
            let vecs = rows
                .into_iter()
                .map(|r| r.into_iter().map(|c| f.check(c)).collect::<Result<Vec<u32>, _>>())
                .collect::<Result<Vec<_>, _>>()
                .map_err(err)?;
            PointSet::from_vectors(space, &vecs).map_err(err)
        })
        .collect()
}

#[pyfunction]
fn version() -> &'static str {
    ffres_core::harness::VERSION
}

/// `(p, n)` for a prime power `q`.
#[pyfunction]
fn field_params(q: u64) -> PyResult<(u32, u32)> {
    let f = field(q)?;
    Ok((f.p(), f.n()))
}

/// Whether `G conj(G) = q` holds exactly.
#[pyfunction]
fn gauss_check(q: u64) -> PyResult<bool> {
    let f = field(q)?;
    let g = gauss_sum(&f);
    Ok(&g * &g.conj() == CycNum::from_int(f.p(), f.q() as i64))
}

/// `|S_t|` for `t = 0..q`.
#[pyfunction]
fn sphere_sizes(q: u64, d: usize) -> PyResult<Vec<usize>> {
    let space = Space::new(&field(q)?, d).map_err(err)?;
    Ok(SphereTable::new(&space).map_err(err)?.sizes())
}

/// `nu_k(t)` for `t = 0..q`; each set is a list of coordinate vectors.
#[pyfunction]
#[pyo3(signature = (q, d, point_sets, method = "fourier"))]
fn nu(q: u64, d: usize, point_sets: Vec<Vec<Vec<u64>>>, method: &str) -> PyResult<Vec<u128>> {
    let space = Space::new(&field(q)?, d).map_err(err)?;
    let s = sets(&space, point_sets)?;
    let profile = match method {
        "fourier" => nu_fourier(&s, Mode::Exact),
        "brute" => nu_brute(&s),
        other => return Err(PyValueError::new_err(format!("unknown method {other:?}"))),
    }
    .map_err(err)?;
    Ok(profile.counts)
}

/// Runs the verify suites for a JSON config; returns the JSON report.
#[pyfunction]
fn verify(config_json: &str) -> PyResult<String> {
    let c = ExperimentConfig::from_json(config_json).map_err(err)?;
    let report = run_verify(&c).map_err(err)?;
    serde_json::to_string(&Envelope::new(&c, &report)).map_err(|e| PyValueError::new_err(e.to_string()))
}

/// Runs a probe sweep for a JSON config; returns the instance CSV.
#[pyfunction]
fn probe_csv(config_json: &str) -> PyResult<String> {
    let c = ExperimentConfig::from_json(config_json).map_err(err)?;
    let report = run_probe(&c).map_err(err)?;
    let bytes = csv_bytes(&report.rows).map_err(err)?;
    Ok(String::from_utf8(bytes).expect("csv is utf-8"))
}

#[pymodule]
fn ffres(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_function(wrap_pyfunction!(version, m)?)?;
    m.add_function(wrap_pyfunction!(field_params, m)?)?;
    m.add_function(wrap_pyfunction!(gauss_check, m)?)?;
    m.add_function(wrap_pyfunction!(sphere_sizes, m)?)?;
    m.add_function(wrap_pyfunction!(nu, m)?)?;
    m.add_function(wrap_pyfunction!(verify, m)?)?;
    m.add_function(wrap_pyfunction!(probe_csv, m)?)?;
    Ok(())
}
