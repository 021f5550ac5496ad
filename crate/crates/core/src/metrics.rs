//! Quality measures of intelligence tests.
//!
//! * efficiency `η = |OIMC|·|OMC| / (|IMC|·|MC|)`, zero when IMC or MC is empty;
//! * error sum `s_e = Σ |f'(x) − f(x)|` over the test's OMC, where `f'` is the oracle;
//! * accuracy `C_a = 1 − s_e / max(s_e)` for a finite OMC, or
//!   `1 − (2/π)·atan(s_e)` when errors are accumulated over an unbounded stream;
//! * quality `Q = √(C_a² + η²)`;
//! * error count `N_e`, the number of elements with a nonzero difference.
//!
//! `max(s_e)` is the largest error sum the label space admits over the
//! domain, `|OMC|·(max encoding − min encoding)`. When it is zero no error is
//! possible and `C_a = 1`.

use std::cmp::Ordering;
use std::f64::consts::{FRAC_2_PI, SQRT_2};

use rayon::prelude::*;
use serde::Serialize;
use thiserror::Error;

use crate::epistemic::{observe, EpistemicError, ObservedView, Universe};
use crate::numfmt::serialize_report;
use crate::test_model::{
    classify_all, label_distance, oracle_for, IntelligenceTest, LabelAssignment, LabelSpace,
    TestModelError,
};

#[derive(Debug, Clone, PartialEq, Error)]
pub enum MetricsError {
    #[error("inconsistent cardinalities: {0}")]
    InconsistentCardinalities(&'static str),
    #[error("test and oracle assignments cover different characteristics")]
    DomainMismatch,
    #[error("{name} = {value} is outside [0, 1]")]
    OutOfRange { name: &'static str, value: f64 },
    #[error("a tournament needs at least one test")]
    EmptyField,
    #[error(transparent)]
    Epistemic(#[from] EpistemicError),
    #[error(transparent)]
    TestModel(#[from] TestModelError),
}

/// Cardinalities of OIMC, OMC, IMC and MC.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct EfficiencyInputs {
    pub oimc: usize,
    pub omc: usize,
    pub imc: usize,
    pub mc: usize,
}

impl EfficiencyInputs {
    pub fn new(oimc: usize, omc: usize, imc: usize, mc: usize) -> Self {
        Self { oimc, omc, imc, mc }
    }

    pub fn of(universe: &Universe, view: &ObservedView) -> Self {
        Self::new(
            view.oimc().len(),
            view.omc().len(),
            universe.imc().len(),
            universe.mc().len(),
        )
    }
}

pub fn efficiency(inputs: EfficiencyInputs) -> Result<f64, MetricsError> {
    let EfficiencyInputs { oimc, omc, imc, mc } = inputs;
    if oimc > imc {
        return Err(MetricsError::InconsistentCardinalities("|OIMC| > |IMC|"));
    }
    if oimc > omc {
        return Err(MetricsError::InconsistentCardinalities("|OIMC| > |OMC|"));
    }
    if omc > mc {
        return Err(MetricsError::InconsistentCardinalities("|OMC| > |MC|"));
    }
    if imc == 0 || mc == 0 {
        return Ok(0.0);
    }
    Ok((oimc as f64 * omc as f64) / (imc as f64 * mc as f64))
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum ErrorDomain {
    /// Errors summed over a finite OMC of `size` elements.
    Finite { size: usize, max_possible: f64 },
    /// Errors accumulated over an unbounded observation stream.
    Streaming,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ErrorSum {
    pub value: f64,
    pub domain: ErrorDomain,
}

impl ErrorSum {
    pub fn streaming(value: f64) -> Self {
        Self {
            value,
            domain: ErrorDomain::Streaming,
        }
    }

    pub fn max_possible(&self) -> Option<f64> {
        match self.domain {
            ErrorDomain::Finite { max_possible, .. } => Some(max_possible),
            ErrorDomain::Streaming => None,
        }
    }
}

/// Sums label distances between `test` and `oracle` over their shared domain.
pub fn error_sum(
    test: &LabelAssignment,
    oracle: &LabelAssignment,
    space: &LabelSpace,
) -> Result<ErrorSum, MetricsError> {
    if !test.same_domain(oracle) {
        return Err(MetricsError::DomainMismatch);
    }
    let md = space.max_distance();
    let mut value = 0.0;
    // Accumulating the bound with the same additions keeps value ≤ max_possible
    // in floating point, not just in exact arithmetic.
    let mut max_possible = 0.0;
    for ((_, t), (_, o)) in test.pairs().iter().zip(oracle.pairs()) {
        value += label_distance(space, o, t)?;
        max_possible += md;
    }
    Ok(ErrorSum {
        value,
        domain: ErrorDomain::Finite {
            size: test.len(),
            max_possible,
        },
    })
}

pub fn accuracy(s: &ErrorSum) -> f64 {
    match s.domain {
        ErrorDomain::Finite { size, max_possible } => {
            if size == 0 || max_possible == 0.0 {
                1.0
            } else {
                1.0 - s.value / max_possible
            }
        }
        ErrorDomain::Streaming => 1.0 - FRAC_2_PI * s.value.atan(),
    }
}

/// Accumulates classification errors from a stream of (oracle, test) label
/// pairs whose length is not known in advance.
#[derive(Debug, Clone)]
pub struct StreamingErrorSum<'a> {
    space: &'a LabelSpace,
    value: f64,
    errors: u64,
    seen: u64,
}

impl<'a> StreamingErrorSum<'a> {
    pub fn new(space: &'a LabelSpace) -> Self {
        Self {
            space,
            value: 0.0,
            errors: 0,
            seen: 0,
        }
    }

    pub fn push(&mut self, oracle: &str, test: &str) -> Result<(), MetricsError> {
        let d = label_distance(self.space, oracle, test)?;
        self.value += d;
        self.seen += 1;
        if d != 0.0 {
            self.errors += 1;
        }
        Ok(())
    }

    pub fn error_sum(&self) -> ErrorSum {
        ErrorSum::streaming(self.value)
    }

    pub fn accuracy(&self) -> f64 {
        accuracy(&self.error_sum())
    }

    pub fn error_count(&self) -> u64 {
        self.errors
    }

    pub fn seen(&self) -> u64 {
        self.seen
    }
}

/// `√(C_a² + η²)`, in `[0, √2]`.
pub fn quality(c_a: f64, eta: f64) -> Result<f64, MetricsError> {
    for (name, value) in [("c_a", c_a), ("eta", eta)] {
        if !(0.0..=1.0).contains(&value) {
            return Err(MetricsError::OutOfRange { name, value });
        }
    }
    Ok(c_a.hypot(eta))
}

pub fn error_count(
    test: &LabelAssignment,
    oracle: &LabelAssignment,
    space: &LabelSpace,
) -> Result<usize, MetricsError> {
    if !test.same_domain(oracle) {
        return Err(MetricsError::DomainMismatch);
    }
    let mut n = 0;
    for ((_, t), (_, o)) in test.pairs().iter().zip(oracle.pairs()) {
        if label_distance(space, o, t)? != 0.0 {
            n += 1;
        }
    }
    Ok(n)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct QualityReport {
    #[serde(serialize_with = "serialize_report")]
    pub eta: f64,
    #[serde(serialize_with = "serialize_report")]
    pub c_a: f64,
    #[serde(serialize_with = "serialize_report")]
    pub q: f64,
    /// `q / √2`, in `[0, 1]`.
    #[serde(serialize_with = "serialize_report")]
    pub q_normalized: f64,
    pub n_e: usize,
    #[serde(serialize_with = "serialize_report")]
    pub s_e: f64,
}

/// Observes `universe` through the test's observer, classifies, and scores
/// the result against the oracle over the same observation.
pub fn evaluate_test(
    test: &IntelligenceTest,
    universe: &Universe,
    space: &LabelSpace,
) -> Result<QualityReport, MetricsError> {
    let view = observe(universe, &test.observer)?;
    let assigned = classify_all(test, &view, space)?;
    let oracle = oracle_for(universe, &view, space)?;
    let expected = classify_all(&oracle, &view, space)?;

    let s_e = error_sum(&assigned, &expected, space)?;
    let n_e = error_count(&assigned, &expected, space)?;
    let eta = efficiency(EfficiencyInputs::of(universe, &view))?;
    let c_a = accuracy(&s_e);
    let q = quality(c_a, eta)?;
    Ok(QualityReport {
        eta,
        c_a,
        q,
        q_normalized: q / SQRT_2,
        n_e,
        s_e: s_e.value,
    })
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RankedTest {
    pub name: String,
    pub report: QualityReport,
}

/// Descending `q`, then `c_a`, then `eta`; remaining ties by ascending name.
pub fn rank_order(a: &RankedTest, b: &RankedTest) -> Ordering {
    b.report
        .q
        .total_cmp(&a.report.q)
        .then_with(|| b.report.c_a.total_cmp(&a.report.c_a))
        .then_with(|| b.report.eta.total_cmp(&a.report.eta))
        .then_with(|| a.name.cmp(&b.name))
}

/// Evaluates every test (in parallel) and ranks them, best first.
pub fn tournament(
    tests: &[IntelligenceTest],
    universe: &Universe,
    space: &LabelSpace,
) -> Result<Vec<RankedTest>, MetricsError> {
    if tests.is_empty() {
        return Err(MetricsError::EmptyField);
    }
    let mut ranked = tests
        .par_iter()
        .map(|t| {
            evaluate_test(t, universe, space).map(|report| RankedTest {
                name: t.name.clone(),
                report,
            })
        })
        .collect::<Result<Vec<_>, _>>()?;
    ranked.sort_by(rank_order);
    Ok(ranked)
}
