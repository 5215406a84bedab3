use rayon::prelude::*;
use serde::Serialize;

use super::Dataset;
use crate::distribution::ZERO_TOL;
use crate::divergence::{evaluate, ComplexitySpec};
use crate::error::{Error, Result};

/// Knobs of the greedy forward search.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SelectOptions {
    /// Upper bound on the number of accepted columns.
    pub max_features: Option<usize>,
    /// Smallest decrease of the divergence that justifies adding a column.
    pub min_improvement: f64,
    /// Score with `NIB` instead of `IB`.
    pub normalized: bool,
}

impl Default for SelectOptions {
    fn default() -> Self {
        Self {
            max_features: None,
            min_improvement: 0.0,
            normalized: false,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum StoppingReason {
    MaxFeatures,
    NoCandidateImproves,
    ZeroDivergence,
    Exhausted,
}

/// Best candidate of one round, kept or not.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SelectionStep {
    pub column: String,
    /// Divergence of the target to the selected set joined with `column`.
    pub divergence: f64,
    pub accepted: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SelectionTrace {
    pub target: String,
    pub normalized: bool,
    /// Divergence to the empty selection; `None` when it is undefined or the
    /// complexity vanishes there while the target is not constant.
    pub baseline: Option<f64>,
    pub selected: Vec<String>,
    pub steps: Vec<SelectionStep>,
    pub stopping_reason: StoppingReason,
}

impl SelectionTrace {
    /// Divergence after the last accepted step, or the baseline.
    pub fn final_divergence(&self) -> Option<f64> {
        self.steps
            .iter()
            .rev()
            .find(|s| s.accepted)
            .map(|s| s.divergence)
            .or(self.baseline)
    }
}

fn score(spec: &ComplexitySpec, dataset: &Dataset, y: usize, x: &[usize], normalized: bool) -> Option<f64> {
    let s = dataset.summary(&[y], x).ok()?;
    let r = evaluate(spec, &s).ok()?;
    if x.is_empty() && r.complexity <= ZERO_TOL && s.h_x > ZERO_TOL {
        return None;
    }
    Some(if normalized { r.nib } else { r.ib })
}

/// Greedy forward selection of covariates for `target`.
///
/// Each round scores every remaining column joined with the current selection
/// (in parallel) and keeps the best one, lowest column index first on ties
/// within 1e-12. The column is accepted when the divergence drops by more than
/// 1e-12 and by at least `min_improvement`. Columns whose divergence cannot be
/// evaluated are skipped.
pub fn forward_select(
    spec: &ComplexitySpec,
    dataset: &Dataset,
    target: &str,
    options: &SelectOptions,
) -> Result<SelectionTrace> {
    let y = dataset.column_index(target)?;
    if !(options.min_improvement >= 0.0 && options.min_improvement.is_finite()) {
        return Err(Error::InvalidParameter(format!(
            "min_improvement must be finite and nonnegative, got {}",
            options.min_improvement
        )));
    }
    let baseline = score(spec, dataset, y, &[], options.normalized);
    let mut current = baseline.unwrap_or(f64::INFINITY);
    let mut selected: Vec<usize> = Vec::new();
    let mut remaining: Vec<usize> = (0..dataset.n_columns()).filter(|&c| c != y).collect();
    let mut steps = Vec::new();

    let stopping_reason = loop {
        if current <= ZERO_TOL {
            break StoppingReason::ZeroDivergence;
        }
        if options.max_features.is_some_and(|m| selected.len() >= m) {
            break StoppingReason::MaxFeatures;
        }
        if remaining.is_empty() {
            break StoppingReason::Exhausted;
        }
        let scored: Vec<(usize, Option<f64>)> = remaining
            .par_iter()
            .map(|&c| {
                let mut cols = selected.clone();
                cols.push(c);
                (c, score(spec, dataset, y, &cols, options.normalized))
            })
            .collect();
        let valid = scored.iter().filter_map(|&(c, d)| Some((c, d?)));
        let Some(min) = valid.clone().map(|(_, d)| d).reduce(f64::min) else {
            break StoppingReason::NoCandidateImproves;
        };
        let (best, divergence) = valid
            .filter(|&(_, d)| d <= min + 1e-12)
            .min_by_key(|&(c, _)| c)
            .expect("minimum exists");
        let gain = current - divergence;
        let accepted = gain > 1e-12 && gain >= options.min_improvement;
        steps.push(SelectionStep {
            column: dataset.names()[best].clone(),
            divergence,
            accepted,
        });
        if !accepted {
            break StoppingReason::NoCandidateImproves;
        }
        current = divergence;
        selected.push(best);
        remaining.retain(|&c| c != best);
    };

    Ok(SelectionTrace {
        target: target.to_string(),
        normalized: options.normalized,
        baseline,
        selected: selected.iter().map(|&c| dataset.names()[c].clone()).collect(),
        steps,
        stopping_reason,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::LN_2;

    fn xor() -> Dataset {
        let mut rows = Vec::new();
        for a in 0..2 {
            for b in 0..2 {
                rows.push(vec![a.to_string(), b.to_string(), (a ^ b).to_string()]);
            }
        }
        Dataset::new(vec!["x1".into(), "x2".into(), "y".into()], rows).unwrap()
    }

    #[test]
    fn xor_greedy_stops_before_the_informative_pair() {
        let d = xor();
        let opts = SelectOptions {
            min_improvement: 1e-6,
            ..SelectOptions::default()
        };
        let t = forward_select(&ComplexitySpec::MaxEntropy, &d, "y", &opts).unwrap();
        assert_eq!(t.stopping_reason, StoppingReason::NoCandidateImproves);
        assert!(t.selected.is_empty());
        assert_eq!(t.steps.len(), 1);
        assert_eq!(t.steps[0].column, "x1");
        assert!(!t.steps[0].accepted);
        assert!((t.baseline.unwrap() - LN_2).abs() < 1e-12);
    }

    #[test]
    fn xor_pair_determines_the_target_but_is_not_equivalent_to_it() {
        let d = xor();
        let s = d.summary(&[2], &[0, 1]).unwrap();
        assert!(s.h_x_given_y.abs() < 1e-15);
        assert!((s.mi - LN_2).abs() < 1e-15);
        let r = evaluate(&ComplexitySpec::MaxEntropy, &s).unwrap();
        assert!((r.ib - LN_2).abs() < 1e-15);
        assert!((r.nib - 0.5).abs() < 1e-15);
    }

    /// `y = 2a + b`, plus a column independent of everything.
    fn two_bits() -> Dataset {
        let mut rows = Vec::new();
        for a in 0..2 {
            for b in 0..2 {
                for n in 0..2 {
                    rows.push(vec![n.to_string(), a.to_string(), b.to_string(), (2 * a + b).to_string()]);
                }
            }
        }
        Dataset::new(vec!["noise".into(), "a".into(), "b".into(), "y".into()], rows).unwrap()
    }

    #[test]
    fn recovers_both_bits() {
        let t = forward_select(&ComplexitySpec::MaxEntropy, &two_bits(), "y", &SelectOptions::default()).unwrap();
        assert_eq!(t.selected, ["a", "b"]);
        assert_eq!(t.stopping_reason, StoppingReason::ZeroDivergence);
        assert!((t.baseline.unwrap() - 2.0 * LN_2).abs() < 1e-12);
        assert!((t.steps[0].divergence - LN_2).abs() < 1e-12);
        assert!(t.final_divergence().unwrap().abs() < 1e-12);
    }

    #[test]
    fn max_features_caps_the_trace() {
        let opts = SelectOptions {
            max_features: Some(1),
            ..SelectOptions::default()
        };
        let t = forward_select(&ComplexitySpec::MaxEntropy, &two_bits(), "y", &opts).unwrap();
        assert_eq!(t.selected, ["a"]);
        assert_eq!(t.stopping_reason, StoppingReason::MaxFeatures);
        let t = forward_select(&ComplexitySpec::MaxEntropy, &xor(), "y", &SelectOptions::default()).unwrap();
        assert!(t.selected.is_empty());
    }

    #[test]
    fn vanishing_baseline_is_not_a_reference() {
        let d = xor();
        let spec: ComplexitySpec = "P".parse().unwrap();
        let t = forward_select(&spec, &d, "y", &SelectOptions::default()).unwrap();
        assert_eq!(t.baseline, None);
        assert!(!t.steps.is_empty() && t.steps[0].accepted);
    }

    #[test]
    fn rejects_bad_options() {
        let d = xor();
        let opts = SelectOptions {
            min_improvement: -1.0,
            ..SelectOptions::default()
        };
        assert!(forward_select(&ComplexitySpec::MaxEntropy, &d, "y", &opts).is_err());
        assert!(matches!(
            forward_select(&ComplexitySpec::MaxEntropy, &d, "nope", &SelectOptions::default()),
            Err(Error::UnknownColumn(_))
        ));
    }
}
