//! Python bindings: the criterion battery, the Alexander pipeline and its
//! cover-homology oracle, Whitehead one-endedness, small-cancellation piece
//! data, Baumslag-Solitar subgroup verification, and Heegaard diagrams.

use pyo3::exceptions::PyValueError;
use pyo3::prelude::*;

use surfdouble::covers::{self, CoverGraph};
use surfdouble::words::{self, Word};
use surfdouble::{alexander, bsgroups, census, heegaard, report, smallcanc, whitehead};

fn value_err<E: std::fmt::Display>(e: E) -> PyErr {
    PyValueError::new_err(e.to_string())
}

fn parse(word: &str, rank: usize) -> PyResult<Word> {
    words::parse_word(word, rank).map_err(value_err)
}

/// A freely reduced word in a free group of the given rank.
#[pyclass(name = "Word", frozen)]
struct PyWord {
    inner: Word,
}

#[pymethods]
impl PyWord {
    #[new]
    #[pyo3(signature = (text, rank = 2))]
    fn new(text: &str, rank: usize) -> PyResult<Self> {
        Ok(PyWord {
            inner: parse(text, rank)?,
        })
    }

    #[getter]
    fn rank(&self) -> usize {
        self.inner.rank()
    }

    fn __len__(&self) -> usize {
        self.inner.len()
    }

    fn __str__(&self) -> String {
        self.inner.to_string()
    }

    fn __repr__(&self) -> String {
        format!("Word({:?}, rank={})", self.inner.to_string(), self.inner.rank())
    }

    fn inverse(&self) -> PyWord {
        PyWord {
            inner: self.inner.inverse(),
        }
    }

    fn is_cyclically_reduced(&self) -> bool {
        self.inner.is_cyclically_reduced()
    }

    fn exponent_vector(&self) -> Vec<i64> {
        words::exponent_vector(&self.inner)
    }

    fn is_proper_power(&self) -> Option<(String, u32)> {
        words::is_proper_power(&self.inner).map(|(root, r)| (root.to_string(), r))
    }

    fn in_commutator_subgroup(&self) -> bool {
        words::is_in_commutator_subgroup(&self.inner)
    }
}

/// Full criterion battery; returns the report as a JSON string.
#[pyfunction]
#[pyo3(signature = (word, rank = 2))]
fn analyze_json(word: &str, rank: usize) -> PyResult<String> {
    let report = report::analyze(word, rank).map_err(value_err)?;
    serde_json::to_string_pretty(&report).map_err(value_err)
}

/// Whether any criterion certifies a surface subgroup in the double.
#[pyfunction]
#[pyo3(signature = (word, rank = 2))]
fn is_certified(word: &str, rank: usize) -> PyResult<bool> {
    Ok(report::analyze(word, rank).map_err(value_err)?.certified)
}

/// Normalized Alexander polynomial of a rank-2 word, as report text.
#[pyfunction]
fn alexander_polynomial(word: &str) -> PyResult<String> {
    let w = parse(word, 2)?;
    let data = alexander::delta_for_rank2(&w).map_err(value_err)?;
    Ok(data.delta.to_string())
}

/// First Betti number of the index-k cyclic cover, by the root-of-unity
/// census formula.
#[pyfunction]
fn betti_cyclic_cover(word: &str, k: u64) -> PyResult<i64> {
    let w = parse(word, 2)?;
    let data = alexander::delta_for_rank2(&w).map_err(value_err)?;
    alexander::betti_cyclic_cover(&data, k).map_err(value_err)
}

fn cyclic_cover_of(w: &Word, k: u64) -> PyResult<CoverGraph> {
    let phi = report::orthogonal_primitive(&words::exponent_vector(w))
        .ok_or_else(|| value_err("no admissible epimorphism"))?;
    CoverGraph::cyclic(w.rank(), &phi, k).map_err(value_err)
}

/// Homology of the index-k cyclic cover computed on the explicit complex:
/// (beta_1, torsion, beta_2 of the double).
#[pyfunction]
#[pyo3(signature = (word, k, rank = 2))]
fn cover_homology(word: &str, k: u64, rank: usize) -> PyResult<(usize, Vec<String>, usize)> {
    let w = parse(word, rank)?;
    let cover = cyclic_cover_of(&w, k)?;
    let (beta1, torsion) = covers::homology_one_relator_cover(&cover, &w).map_err(value_err)?;
    let beta2 = covers::betti2_double(&cover, &w).map_err(value_err)?;
    Ok((
        beta1,
        torsion.iter().map(|t| t.to_string()).collect(),
        beta2,
    ))
}

/// Whether the double along the word is one-ended.
#[pyfunction]
#[pyo3(signature = (word, rank = 2))]
fn is_one_ended(word: &str, rank: usize) -> PyResult<bool> {
    whitehead::is_one_ended_double(&parse(word, rank)?).map_err(value_err)
}

/// Whether the word lies in a proper free factor.
#[pyfunction]
#[pyo3(signature = (word, rank = 2))]
fn in_proper_free_factor(word: &str, rank: usize) -> PyResult<bool> {
    whitehead::in_proper_free_factor(&parse(word, rank)?)
        .map(|(verdict, _)| verdict)
        .map_err(value_err)
}

/// Maximum piece length of the symmetrized set.
#[pyfunction]
#[pyo3(signature = (word, rank = 2))]
fn max_piece_length(word: &str, rank: usize) -> PyResult<usize> {
    let w = parse(word, rank)?;
    let (core, _) = words::cyclic_reduce(&w);
    smallcanc::max_piece_length(&core)
        .map(|d| d.max_piece_length)
        .map_err(value_err)
}

/// Whether the positive C'(1/6) criterion fires.
#[pyfunction]
#[pyo3(signature = (word, rank = 2))]
fn is_positive_c16(word: &str, rank: usize) -> PyResult<bool> {
    smallcanc::is_positive_c16(&parse(word, rank)?).map_err(value_err)
}

/// The gcd-subgroup presentation of BS(p, q) and its free-quotient rank;
/// requires gcd(p, q) > 1.
#[pyfunction]
fn bs_gcd_presentation(p: u64, q: u64) -> PyResult<(String, usize, bool)> {
    let (pres, witness) = bsgroups::bs_gcd_subgroup(p, q).map_err(value_err)?;
    let ok = witness.verify(&pres);
    Ok((pres.display(), witness.free_rank, ok))
}

/// Rows (l, beta_1, torsion_order) for the circle subgroups of coprime
/// BS(p, q).
#[pyfunction]
fn edjvet_pride(p: u64, q: u64, l_max: u64) -> PyResult<Vec<(u64, usize, String)>> {
    let report = bsgroups::verify_edjvet_pride(p, q, l_max).map_err(value_err)?;
    if !(report.all_beta1_one && report.all_orders_match) {
        return Err(value_err("verification failed"));
    }
    Ok(report
        .rows
        .into_iter()
        .map(|r| (r.l, r.beta1, r.torsion_order))
        .collect())
}

/// Builds and verifies the Heegaard diagram: (discs, arcs, genus).
#[pyfunction]
fn heegaard_verify(p: u64, q: u64) -> PyResult<(usize, usize, i64)> {
    let outcome = heegaard::build_and_verify(p, q).map_err(value_err)?;
    Ok((outcome.discs, outcome.arcs, outcome.genus))
}

/// The Baumslag-Solitar word's pq-power rewritten in the kernel basis.
#[pyfunction]
fn lift_bs_word(p: u64, q: u64) -> PyResult<String> {
    heegaard::lift_bs_word(p, q)
        .map(|w| w.to_string())
        .map_err(value_err)
}

/// Census CSV over symmetry classes of words up to the length bound.
#[pyfunction]
#[pyo3(signature = (max_len, rank = 2))]
fn census_csv(max_len: usize, rank: usize) -> PyResult<String> {
    let rows = census::census(rank, max_len).map_err(value_err)?;
    Ok(census::rows_to_csv(&rows))
}

#[pymodule]
fn surfdouble_py(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<PyWord>()?;
    m.add_function(wrap_pyfunction!(analyze_json, m)?)?;
    m.add_function(wrap_pyfunction!(is_certified, m)?)?;
    m.add_function(wrap_pyfunction!(alexander_polynomial, m)?)?;
    m.add_function(wrap_pyfunction!(betti_cyclic_cover, m)?)?;
    m.add_function(wrap_pyfunction!(cover_homology, m)?)?;
    m.add_function(wrap_pyfunction!(is_one_ended, m)?)?;
    m.add_function(wrap_pyfunction!(in_proper_free_factor, m)?)?;
    m.add_function(wrap_pyfunction!(max_piece_length, m)?)?;
    m.add_function(wrap_pyfunction!(is_positive_c16, m)?)?;
    m.add_function(wrap_pyfunction!(bs_gcd_presentation, m)?)?;
    m.add_function(wrap_pyfunction!(edjvet_pride, m)?)?;
    m.add_function(wrap_pyfunction!(heegaard_verify, m)?)?;
    m.add_function(wrap_pyfunction!(lift_bs_word, m)?)?;
    m.add_function(wrap_pyfunction!(census_csv, m)?)?;
    Ok(())
}
