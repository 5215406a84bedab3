use serde::Serialize;

use super::Dataset;
use crate::distribution::{InfoSummary, ZERO_TOL};
use crate::divergence::{evaluate, ComplexitySpec, DivergenceResult};
use crate::error::{Error, Result};

/// Tolerance for ties in the divergence and for zero deltas.
pub const COMPARISON_TOL: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Choice {
    X1,
    X2,
    Tie,
}

/// Marks a comparison where `fine` refines `coarse`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Refinement {
    pub coarse: String,
    pub fine: String,
}

/// Outcome of weighing a current predictor `X1` against a candidate `X2`.
///
/// Case 1 means `X2` is strictly better; case 2 (including ties) keeps `X1`.
/// Subcases of case 1:
/// 1. simpler and at least as informative;
/// 2. equally complex and more informative;
/// 3. simpler and less informative, the complexity drop outweighing the loss;
/// 4. more complex and more informative, the gain outweighing the extra cost.
///
/// Subcases of case 2:
/// 1. at least as complex and at most as informative;
/// 2. simpler and less informative, the loss outweighing the complexity drop;
/// 3. more complex and more informative, the extra cost outweighing the gain.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ComparisonVerdict {
    pub chosen: Choice,
    pub case: u8,
    pub subcase: u8,
    pub normalized: bool,
    pub x1: DivergenceResult,
    pub x2: DivergenceResult,
    /// `C(Y, X2) - C(Y, X1)`.
    pub complexity_delta: f64,
    /// `I(Y; X2) - I(Y; X1)`.
    pub information_delta: f64,
    /// `complexity_delta / C(Y, X1)`, absent when `C(Y, X1)` is zero.
    pub relative_complexity_delta: Option<f64>,
    /// `information_delta / I(Y; X1)`, absent when `I(Y; X1)` is zero.
    pub relative_information_delta: Option<f64>,
    pub refinement: Option<Refinement>,
}

fn sign(x: f64) -> i8 {
    if x > COMPARISON_TOL {
        1
    } else if x < -COMPARISON_TOL {
        -1
    } else {
        0
    }
}

/// Compares two already summarized pairs `(Y, X1)` and `(Y, X2)`.
pub fn compare_summaries(
    spec: &ComplexitySpec,
    s1: &InfoSummary,
    s2: &InfoSummary,
    normalized: bool,
) -> Result<ComparisonVerdict> {
    let x1 = evaluate(spec, s1)?;
    let x2 = evaluate(spec, s2)?;
    let score = |r: &DivergenceResult| if normalized { r.nib } else { r.ib };
    let diff = score(&x2) - score(&x1);
    let chosen = match sign(diff) {
        -1 => Choice::X2,
        1 => Choice::X1,
        _ => Choice::Tie,
    };
    let dc = x2.complexity - x1.complexity;
    let di = x2.information - x1.information;
    let (sc, si) = (sign(dc), sign(di));
    let (case, subcase) = if chosen == Choice::X2 {
        let sub = match (sc, si) {
            (-1, s) if s >= 0 => 1,
            (0, _) => 2,
            (-1, _) => 3,
            _ => 4,
        };
        (1, sub)
    } else {
        let sub = match (sc, si) {
            (c, s) if c >= 0 && s <= 0 => 1,
            (-1, _) => 2,
            _ => 3,
        };
        (2, sub)
    };
    Ok(ComparisonVerdict {
        chosen,
        case,
        subcase,
        normalized,
        x1,
        x2,
        complexity_delta: dc,
        information_delta: di,
        relative_complexity_delta: (x1.complexity > ZERO_TOL).then(|| dc / x1.complexity),
        relative_information_delta: (x1.information > ZERO_TOL).then(|| di / x1.information),
        refinement: None,
    })
}

/// Compares covariates `x1` and `x2` as predictors of `target` using plug-in estimates.
pub fn compare_candidates(
    spec: &ComplexitySpec,
    dataset: &Dataset,
    target: &str,
    x1: &str,
    x2: &str,
    normalized: bool,
) -> Result<ComparisonVerdict> {
    let y = dataset.column_index(target)?;
    let a = dataset.column_index(x1)?;
    let b = dataset.column_index(x2)?;
    compare_summaries(
        spec,
        &dataset.summary(&[y], &[a])?,
        &dataset.summary(&[y], &[b])?,
        normalized,
    )
}

/// Compares a coarse quantization with a finer one; `coarse` must be a
/// function of `fine` on the observed rows.
pub fn compare_quantizations(
    spec: &ComplexitySpec,
    dataset: &Dataset,
    target: &str,
    coarse: &str,
    fine: &str,
    normalized: bool,
) -> Result<ComparisonVerdict> {
    let c = dataset.column_index(coarse)?;
    let f = dataset.column_index(fine)?;
    dataset.column_index(target)?;
    if !dataset.is_function_of(c, f) {
        return Err(Error::NotARefinement {
            coarse: coarse.to_string(),
            fine: fine.to_string(),
        });
    }
    let mut verdict = compare_candidates(spec, dataset, target, coarse, fine, normalized)?;
    verdict.refinement = Some(Refinement {
        coarse: coarse.to_string(),
        fine: fine.to_string(),
    });
    Ok(verdict)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn summary(h_x: f64, h_y: f64, h_joint: f64) -> InfoSummary {
        InfoSummary::from_entropies(h_x, h_y, h_joint).unwrap()
    }

    #[test]
    fn identical_pairs_tie() {
        let s = summary(0.6, 0.5, 0.9);
        let v = compare_summaries(&ComplexitySpec::MaxEntropy, &s, &s, false).unwrap();
        assert_eq!((v.chosen, v.case, v.subcase), (Choice::Tie, 2, 1));
        assert_eq!(v.complexity_delta, 0.0);
        assert_eq!(v.information_delta, 0.0);
    }

    #[test]
    fn subcases_follow_delta_signs() {
        let spec = ComplexitySpec::MaxEntropy;
        // Y has entropy 1; C = max(1, H(X)), I = 1 + H(X) - H(Y, X).
        let base = summary(1.0, 1.5, 2.0);
        let cases = [
            (summary(1.0, 1.2, 1.6), Choice::X2, 1, 1),
            (summary(1.0, 1.5, 1.8), Choice::X2, 1, 2),
            (summary(1.0, 1.0, 1.55), Choice::X2, 1, 3),
            (summary(1.0, 1.6, 1.9), Choice::X2, 1, 4),
            (summary(1.0, 1.6, 2.2), Choice::X1, 2, 1),
            (summary(1.0, 1.2, 2.1), Choice::X1, 2, 2),
            (summary(1.0, 2.0, 2.4), Choice::X1, 2, 3),
        ];
        for (s2, chosen, case, sub) in cases {
            let v = compare_summaries(&spec, &base, &s2, false).unwrap();
            assert_eq!((v.chosen, v.case, v.subcase), (chosen, case, sub), "{s2:?}");
        }
    }

    #[test]
    fn normalized_uses_relative_deltas() {
        let spec = ComplexitySpec::MaxEntropy;
        let s1 = summary(1.0, 1.0, 1.5);
        let s2 = summary(1.0, 2.0, 2.3);
        let raw = compare_summaries(&spec, &s1, &s2, false).unwrap();
        let norm = compare_summaries(&spec, &s1, &s2, true).unwrap();
        // Absolute: dC = 1 >= dI = 0.2; relative: dC/C1 = 1 >= dI/I1 = 0.4.
        assert_eq!(raw.chosen, Choice::X1);
        assert_eq!(norm.chosen, Choice::X1);
        assert!((norm.relative_information_delta.unwrap() - 0.4).abs() < 1e-12);
        assert!((norm.relative_complexity_delta.unwrap() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn missing_relative_deltas() {
        let s1 = summary(1.0, 1.0, 2.0);
        let v = compare_summaries(&ComplexitySpec::MaxEntropy, &s1, &s1, true).unwrap();
        assert_eq!(v.relative_information_delta, None);
        assert!(v.relative_complexity_delta.is_some());
    }
}
