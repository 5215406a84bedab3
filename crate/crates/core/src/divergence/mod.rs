//! Complexity terms and the information-based divergences built from them.
//!
//! A divergence is `IB = C - I(X;Y)` for a complexity `C` that dominates the
//! mutual information; its normalized form is `NIB = 1 - I(X;Y) / C`.

mod spec;

pub use spec::{Alpha, ComplexitySpec, ConvexSpec, CustomMean, GMeanKind, Mixing, PROBE_POINTS, WEIGHT_TOL};

use serde::Serialize;

use crate::distribution::{InfoSummary, ZERO_TOL};
use crate::error::{Error, Result};

/// Outcome of evaluating one divergence on one pair.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct DivergenceResult {
    pub complexity: f64,
    pub information: f64,
    pub ib: f64,
    pub nib: f64,
    pub is_equivalent_pair: bool,
    /// Set when `complexity <= 1e-12` and `nib` was defined as 0.
    pub degenerate_convention_applied: bool,
    /// False for complexities that do not define a divergence (`Min`, `α = 1`).
    pub valid_divergence: bool,
}

/// Weighted g-mean of `m <= M` for a named generator.
fn named_mean(kind: GMeanKind, alpha: f64, m: f64, big_m: f64) -> Result<f64> {
    let beta = 1.0 - alpha;
    Ok(match kind {
        GMeanKind::Arithmetic => alpha * m + beta * big_m,
        GMeanKind::Root => {
            let r = alpha * m.sqrt() + beta * big_m.sqrt();
            r * r
        }
        // 0^α = 0 for α > 0 and 0^0 = 1, which gives the continuous extension.
        GMeanKind::Geometric => m.powf(alpha) * big_m.powf(beta),
        GMeanKind::Harmonic => {
            if m <= ZERO_TOL {
                return Err(Error::DegenerateEntropy(format!(
                    "harmonic complexity needs both entropies positive, got min entropy {m}"
                )));
            }
            m * big_m / (alpha * big_m + beta * m)
        }
    })
}

/// The complexity term `C(X, Y)` in nats.
pub fn complexity(spec: &ComplexitySpec, s: &InfoSummary) -> Result<f64> {
    let (m, big_m) = (s.min_entropy(), s.max_entropy());
    match spec {
        ComplexitySpec::Joint => Ok(s.h_joint),
        ComplexitySpec::MaxEntropy => Ok(big_m),
        ComplexitySpec::MinEntropy => Ok(m),
        // Any weighted mean lies in [m, M]; clamping removes roundoff such as
        // (√h/2 + √h/2)² != h.
        ComplexitySpec::Mean(kind, alpha) => named_mean(*kind, alpha.get(), m, big_m).map(|v| v.clamp(m, big_m)),
        ComplexitySpec::Custom(c) => {
            c.validate_on(m, big_m)?;
            let a = c.alpha();
            let value = c.g_inv(a * c.g(m) + (1.0 - a) * c.g(big_m));
            if value.is_finite() {
                Ok(value.clamp(m, big_m))
            } else {
                Err(Error::DegenerateEntropy(format!(
                    "custom mean {} is not finite at ({m}, {big_m})",
                    c.name()
                )))
            }
        }
        ComplexitySpec::Convex(c) => {
            let mut values = Vec::with_capacity(c.children().len());
            for child in c.children() {
                values.push(complexity(child, s)?);
            }
            let pairs = c.weights().iter().zip(&values).filter(|(w, _)| **w > 0.0);
            match c.mixing() {
                Mixing::Raw => Ok(pairs.map(|(w, v)| w * v).sum()),
                Mixing::Normalized => {
                    let mut inv = 0.0;
                    for (w, v) in pairs {
                        if *v <= ZERO_TOL {
                            return Ok(0.0);
                        }
                        inv += w / v;
                    }
                    Ok(1.0 / inv)
                }
            }
        }
    }
}

/// `IB` through the conditional-entropy closed forms, where one is known.
pub fn closed_form_ib(spec: &ComplexitySpec, s: &InfoSummary) -> Option<f64> {
    match spec {
        ComplexitySpec::Joint => Some(entropy_distance(s)),
        ComplexitySpec::MaxEntropy => Some(information_distance(s)),
        ComplexitySpec::MinEntropy => Some(s.min_conditional()),
        ComplexitySpec::Mean(GMeanKind::Arithmetic, a) => {
            Some(a.get() * s.min_conditional() + (1.0 - a.get()) * s.max_conditional())
        }
        ComplexitySpec::Convex(c) if c.mixing() == Mixing::Raw => c
            .weights()
            .iter()
            .zip(c.children())
            .map(|(w, child)| closed_form_ib(child, s).map(|v| w * v))
            .sum(),
        _ => None,
    }
}

fn ratio(num: f64, den: f64) -> f64 {
    if den <= ZERO_TOL {
        0.0
    } else {
        num / den
    }
}

/// `NIB` through the conditional-entropy ratio forms, where one is known.
pub fn closed_form_nib(spec: &ComplexitySpec, s: &InfoSummary) -> Option<f64> {
    let rx = ratio(s.h_x_given_y, s.h_x);
    let ry = ratio(s.h_y_given_x, s.h_y);
    match spec {
        ComplexitySpec::Joint => Some(ratio(entropy_distance(s), s.h_joint)),
        ComplexitySpec::MaxEntropy => Some(rx.max(ry)),
        ComplexitySpec::Mean(GMeanKind::Harmonic, a) => {
            if s.min_entropy() <= ZERO_TOL {
                return None;
            }
            Some(a.get() * rx.min(ry) + (1.0 - a.get()) * rx.max(ry))
        }
        ComplexitySpec::Convex(c) if c.mixing() == Mixing::Normalized => c
            .weights()
            .iter()
            .zip(c.children())
            .map(|(w, child)| closed_form_nib(child, s).map(|v| w * v))
            .sum(),
        _ => None,
    }
}

/// Evaluates `IB` and `NIB` for `spec` on the pair summarized by `s`.
pub fn evaluate(spec: &ComplexitySpec, s: &InfoSummary) -> Result<DivergenceResult> {
    let c = complexity(spec, s)?;
    let information = s.mi;
    let ib = c - information;
    let degenerate = c <= ZERO_TOL;
    let nib = if degenerate { 0.0 } else { 1.0 - information / c };

    #[cfg(debug_assertions)]
    {
        if let Some(closed) = closed_form_ib(spec, s) {
            debug_assert!(
                (closed - ib).abs() <= 1e-9 * (1.0 + ib.abs()),
                "{spec}: IB routes disagree ({ib} vs {closed})"
            );
        }
        if !degenerate {
            if let Some(closed) = closed_form_nib(spec, s) {
                debug_assert!(
                    (closed - nib).abs() <= 1e-9,
                    "{spec}: NIB routes disagree ({nib} vs {closed})"
                );
            }
        }
    }

    Ok(DivergenceResult {
        complexity: c,
        information,
        ib,
        nib,
        is_equivalent_pair: s.is_equivalent(),
        degenerate_convention_applied: degenerate,
        valid_divergence: spec.is_divergence(),
    })
}

/// `D_E = H(X|Y) + H(Y|X)`.
pub fn entropy_distance(s: &InfoSummary) -> f64 {
    s.h_x_given_y + s.h_y_given_x
}

/// `D_I = max(H(X|Y), H(Y|X))`.
pub fn information_distance(s: &InfoSummary) -> f64 {
    s.max_conditional()
}

/// `d_E = 1 - I / H(X,Y)`, zero when the joint entropy vanishes.
pub fn normalized_entropy_distance(s: &InfoSummary) -> f64 {
    if s.h_joint <= ZERO_TOL {
        0.0
    } else {
        1.0 - s.mi / s.h_joint
    }
}

/// `d_I = 1 - I / max(H(X), H(Y))`, zero when both entropies vanish.
pub fn normalized_information_distance(s: &InfoSummary) -> f64 {
    let big_m = s.max_entropy();
    if big_m <= ZERO_TOL {
        0.0
    } else {
        1.0 - s.mi / big_m
    }
}

/// `d_I` as `max(H(X|Y)/H(X), H(Y|X)/H(Y))`, with `0/0 = 0`.
pub fn normalized_information_distance_ratio(s: &InfoSummary) -> f64 {
    ratio(s.h_x_given_y, s.h_x).max(ratio(s.h_y_given_x, s.h_y))
}

/// The two mean-ratio criteria `(h_E, h_S)`.
///
/// `h_E` averages the two conditional ratios; `h_S` divides the summed
/// conditionals by the summed entropies.
pub fn h_mean_divergences(s: &InfoSummary) -> Result<(f64, f64)> {
    if s.min_entropy() <= ZERO_TOL {
        return Err(Error::DegenerateEntropy(format!(
            "mean-ratio criteria need positive entropies, got {} and {}",
            s.h_x, s.h_y
        )));
    }
    let h_e = 0.5 * (s.h_x_given_y / s.h_x + s.h_y_given_x / s.h_y);
    let h_s = (s.h_x_given_y + s.h_y_given_x) / (s.h_x + s.h_y);
    Ok((h_e, h_s))
}

/// Evaluates the convex combination of `specs` with the given weights.
pub fn convex_combination(
    weights: &[f64],
    specs: &[ComplexitySpec],
    mixing: Mixing,
    s: &InfoSummary,
) -> Result<DivergenceResult> {
    let spec = ComplexitySpec::convex(weights.to_vec(), specs.to_vec(), mixing)?;
    evaluate(&spec, s)
}
