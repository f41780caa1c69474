//! Python bindings: profiles, feature tables and explanation sets.
//!
//! Exact rationals cross the boundary as `fractions.Fraction`.

use pyo3::exceptions::PyValueError;
use pyo3::prelude::*;
use pyo3::types::PyDict;

use voteexplain_core::engine::{self, ExplainOptions};
use voteexplain_core::features::{self, FeatureKind};
use voteexplain_core::fixtures;
use voteexplain_core::profile::{self, BallotGroup, CandidateSet, PreferenceOrder, VoteProfile};
use voteexplain_core::report::ExplanationReport;
use voteexplain_core::Rational;

fn value_error(e: impl ToString) -> PyErr {
    PyValueError::new_err(e.to_string())
}

fn fraction<'py>(py: Python<'py>, r: &Rational) -> PyResult<Bound<'py, PyAny>> {
    PyModule::import(py, "fractions")?
        .getattr("Fraction")?
        .call1((*r.numer(), *r.denom()))
}

fn feature_kind(code: &str) -> PyResult<FeatureKind> {
    FeatureKind::from_code(code)
        .ok_or_else(|| value_error(format!("unknown feature code {code:?}")))
}

/// A validated preference profile.
#[pyclass(name = "Profile", module = "voteexplain", frozen, skip_from_py_object)]
#[derive(Clone)]
pub struct PyProfile {
    inner: VoteProfile,
}

impl PyProfile {
    fn winner_index(&self, name: &str) -> PyResult<usize> {
        self.inner
            .candidates()
            .index_of(name)
            .ok_or_else(|| value_error(format!("unknown candidate {name:?}")))
    }
}

#[pymethods]
impl PyProfile {
    /// `Profile(["A", "B"], [(["A", "B"], 3), (["B", "A"], 2)])`
    #[new]
    fn new(candidates: Vec<String>, ballots: Vec<(Vec<String>, u64)>) -> PyResult<Self> {
        let cands = CandidateSet::new(candidates).map_err(value_error)?;
        let mut groups = Vec::with_capacity(ballots.len());
        for (order, count) in ballots {
            let ranking = order
                .iter()
                .map(|n| {
                    cands
                        .index_of(n)
                        .ok_or_else(|| value_error(format!("unknown candidate {n:?}")))
                })
                .collect::<PyResult<Vec<_>>>()?;
            groups.push(BallotGroup::new(
                PreferenceOrder::new_unchecked(ranking),
                count,
            ));
        }
        let inner = VoteProfile::new(cands, groups).map_err(value_error)?;
        Ok(Self { inner })
    }

    #[staticmethod]
    fn from_json(text: &str) -> PyResult<Self> {
        let inner = profile::parse_profile(text).map_err(value_error)?;
        Ok(Self { inner })
    }

    fn to_json(&self) -> String {
        profile::serialize_profile(&self.inner)
    }

    #[getter]
    fn candidates(&self) -> Vec<String> {
        self.inner.candidates().names().to_vec()
    }

    #[getter]
    fn n_voters(&self) -> u64 {
        self.inner.n_voters()
    }

    #[getter]
    fn ballots(&self) -> Vec<(Vec<String>, u64)> {
        self.inner
            .groups()
            .iter()
            .map(|g| {
                let names = g
                    .order
                    .ranking()
                    .iter()
                    .map(|&c| self.inner.candidate_name(c).to_string())
                    .collect();
                (names, g.count)
            })
            .collect()
    }

    fn __repr__(&self) -> String {
        format!(
            "Profile(candidates={:?}, n_voters={}, groups={})",
            self.inner.candidates().names(),
            self.inner.n_voters(),
            self.inner.groups().len()
        )
    }
}

/// One ranked explanation.
#[pyclass(name = "Explanation", module = "voteexplain", frozen, get_all)]
pub struct PyExplanation {
    feature: String,
    raw_score: Py<PyAny>,
    normalized_score: Py<PyAny>,
    rank: usize,
    tied_with: Vec<String>,
    text: String,
}

#[pymethods]
impl PyExplanation {
    fn __repr__(&self) -> String {
        format!(
            "Explanation({} rank={}: {})",
            self.feature, self.rank, self.text
        )
    }
}

#[pyclass(name = "ExplanationSet", module = "voteexplain", frozen)]
pub struct PyExplanationSet {
    report: ExplanationReport,
    #[pyo3(get)]
    items: Vec<Py<PyExplanation>>,
    #[pyo3(get)]
    surviving_features: Vec<(String, Py<PyAny>)>,
}

#[pymethods]
impl PyExplanationSet {
    #[getter]
    fn winner(&self) -> &str {
        &self.report.winner
    }

    #[getter]
    fn seed(&self) -> u64 {
        self.report.seed
    }

    /// True when the winner is strictly beaten on every feature.
    #[getter]
    fn dominated(&self) -> bool {
        self.report.dominated
    }

    fn codes(&self) -> Vec<String> {
        self.report
            .items
            .iter()
            .map(|i| i.feature_code.clone())
            .collect()
    }

    fn to_json(&self) -> String {
        self.report.to_json()
    }

    fn __len__(&self) -> usize {
        self.report.items.len()
    }

    fn __str__(&self) -> String {
        self.report.to_text()
    }
}

#[pyfunction]
fn parse_profile(text: &str) -> PyResult<PyProfile> {
    PyProfile::from_json(text)
}

#[pyfunction]
fn pairwise_matrix(p: &PyProfile) -> Vec<Vec<u64>> {
    features::pairwise_matrix(&p.inner).rows().to_vec()
}

/// `{code: {"polarity": "max"|"min", "values": {name: Fraction}, "norm": Fraction}}`
#[pyfunction]
fn feature_table<'py>(py: Python<'py>, p: &PyProfile) -> PyResult<Bound<'py, PyDict>> {
    let out = PyDict::new(py);
    for v in features::all_features(&p.inner) {
        let row = PyDict::new(py);
        row.set_item("polarity", v.polarity().as_str())?;
        let values = PyDict::new(py);
        for (i, x) in v.values.iter().enumerate() {
            values.set_item(p.inner.candidate_name(i), fraction(py, x)?)?;
        }
        row.set_item("values", values)?;
        row.set_item("norm", fraction(py, &v.norm_constant)?)?;
        out.set_item(v.feature.short_code(), row)?;
    }
    Ok(out)
}

#[pyfunction]
fn winner_by_feature(p: &PyProfile, feature: &str) -> PyResult<Vec<String>> {
    let set = features::winner_by_feature(&p.inner, feature_kind(feature)?).map_err(value_error)?;
    Ok(set
        .into_iter()
        .map(|i| p.inner.candidate_name(i).to_string())
        .collect())
}

#[pyfunction]
#[pyo3(signature = (p, winner, features=None))]
fn filter_features(
    p: &PyProfile,
    winner: &str,
    features: Option<Vec<String>>,
) -> PyResult<Vec<String>> {
    let kinds = match features {
        Some(codes) => codes
            .iter()
            .map(|c| feature_kind(c))
            .collect::<PyResult<Vec<_>>>()?,
        None => FeatureKind::ALL.to_vec(),
    };
    let w = p.winner_index(winner)?;
    let kept = engine::filter_features(&p.inner, w, &kinds).map_err(value_error)?;
    Ok(kept
        .into_iter()
        .map(|k| k.short_code().to_string())
        .collect())
}

/// `(raw_score, normalized_score)` for a surviving feature.
#[pyfunction]
fn score_feature<'py>(
    py: Python<'py>,
    p: &PyProfile,
    winner: &str,
    feature: &str,
) -> PyResult<(Bound<'py, PyAny>, Bound<'py, PyAny>)> {
    let w = p.winner_index(winner)?;
    let s = engine::score_feature(&p.inner, w, feature_kind(feature)?).map_err(value_error)?;
    Ok((
        fraction(py, &s.raw_score)?,
        fraction(py, &s.normalized_score)?,
    ))
}

#[pyfunction]
#[pyo3(signature = (p, winner, n=engine::DEFAULT_N, seed=0, audit=false))]
fn explain(
    py: Python<'_>,
    p: &PyProfile,
    winner: &str,
    n: usize,
    seed: u64,
    audit: bool,
) -> PyResult<PyExplanationSet> {
    let opts = ExplainOptions { n, seed, audit };
    let set = engine::explain_named(&p.inner, winner, &opts).map_err(value_error)?;
    let items = set
        .items
        .iter()
        .zip(ExplanationReport::new(&set, &p.inner).items)
        .map(|(e, it)| {
            Py::new(
                py,
                PyExplanation {
                    feature: it.feature_code,
                    raw_score: fraction(py, &e.scored.raw_score)?.unbind(),
                    normalized_score: fraction(py, &e.scored.normalized_score)?.unbind(),
                    rank: it.rank,
                    tied_with: it.tied_with,
                    text: it.text,
                },
            )
        })
        .collect::<PyResult<Vec<_>>>()?;
    let surviving_features = set
        .surviving_features
        .iter()
        .map(|s| {
            Ok((
                s.feature.short_code().to_string(),
                fraction(py, &s.normalized_score)?.unbind(),
            ))
        })
        .collect::<PyResult<Vec<_>>>()?;
    Ok(PyExplanationSet {
        report: ExplanationReport::new(&set, &p.inner),
        items,
        surviving_features,
    })
}

/// Published instances as `(id, profile, winner, winner_features, explanations)`.
#[pyfunction]
fn published_fixtures() -> Vec<(String, PyProfile, String, Vec<String>, Vec<String>)> {
    let codes = |v: &[FeatureKind]| v.iter().map(|k| k.short_code().to_string()).collect();
    fixtures::committed_fixtures()
        .into_iter()
        .map(|r| {
            let inner = r.vote_profile();
            (
                r.id.clone(),
                PyProfile { inner },
                r.winner.clone(),
                codes(&r.winner_features),
                codes(&r.expected_explanations),
            )
        })
        .collect()
}

/// Raw JSON report for an explanation, as produced by the CLI.
#[pyfunction]
#[pyo3(signature = (p, winner, n=engine::DEFAULT_N, seed=0, audit=false))]
fn explain_json(p: &PyProfile, winner: &str, n: usize, seed: u64, audit: bool) -> PyResult<String> {
    let opts = ExplainOptions { n, seed, audit };
    let set = engine::explain_named(&p.inner, winner, &opts).map_err(value_error)?;
    Ok(ExplanationReport::new(&set, &p.inner).to_json())
}

#[pymodule]
fn voteexplain(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<PyProfile>()?;
    m.add_class::<PyExplanation>()?;
    m.add_class::<PyExplanationSet>()?;
    m.add_function(wrap_pyfunction!(parse_profile, m)?)?;
    m.add_function(wrap_pyfunction!(pairwise_matrix, m)?)?;
    m.add_function(wrap_pyfunction!(feature_table, m)?)?;
    m.add_function(wrap_pyfunction!(winner_by_feature, m)?)?;
    m.add_function(wrap_pyfunction!(filter_features, m)?)?;
    m.add_function(wrap_pyfunction!(score_feature, m)?)?;
    m.add_function(wrap_pyfunction!(explain, m)?)?;
    m.add_function(wrap_pyfunction!(explain_json, m)?)?;
    m.add_function(wrap_pyfunction!(published_fixtures, m)?)?;
    m.add("DEFAULT_N", engine::DEFAULT_N)?;
    Ok(())
}
