use rayon::prelude::*;

use crate::distribution::{InfoSummary, JointDistribution, TripleDistribution, TripleSummary};
use crate::divergence::{complexity, evaluate, information_distance, normalized_information_distance, ComplexitySpec, GMeanKind};
use crate::error::{Error, Result};

use super::constants::{p3bis_constants, RedundancyConstants, Theta, ThetaInterval};
use super::report::{CheckReport, CheckStatus, WitnessData};
use super::sampling::independent_binary_triple;

/// Set of pairs on which a bound is claimed.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Domain {
    All,
    /// Both entropies in `Θ`.
    Gamma2(ThetaInterval),
    /// Both entropies and the mutual information in `Θ`.
    Upsilon(ThetaInterval),
}

impl Domain {
    pub fn contains(&self, s: &InfoSummary) -> bool {
        match self {
            Domain::All => true,
            Domain::Gamma2(t) => t.contains(s.h_x) && t.contains(s.h_y),
            Domain::Upsilon(t) => t.contains(s.h_x) && t.contains(s.h_y) && t.contains(s.mi),
        }
    }
}

/// `IB` or `NIB` of `spec` on one pair.
pub fn divergence_value(spec: &ComplexitySpec, s: &InfoSummary, normalized: bool) -> Result<f64> {
    let r = evaluate(spec, s)?;
    Ok(if normalized { r.nib } else { r.ib })
}

/// Smallest slack of `d(A,B) <= c (d(A,C) + d(B,C))` over the three choices of
/// the middle variable `C`.
pub fn triangle_slack(spec: &ComplexitySpec, t: &TripleSummary, c: f64, normalized: bool) -> Result<f64> {
    let xy = divergence_value(spec, &t.xy, normalized)?;
    let xz = divergence_value(spec, &t.xz, normalized)?;
    let yz = divergence_value(spec, &t.yz, normalized)?;
    Ok((c * (xz + yz) - xy)
        .min(c * (xy + yz) - xz)
        .min(c * (xy + xz) - yz))
}

/// Slack of the (relaxed) triangle inequality on one triple; it holds when the
/// slack is at least `-1e-9`.
pub fn check_triangle(spec: &ComplexitySpec, triple: &TripleDistribution, c: f64, normalized: bool) -> Result<f64> {
    triangle_slack(spec, &triple.summary()?, c, normalized)
}

/// `C(X,Z) + C(Y,Z) - H(Z) - C(X,Y)`, the margin of the sufficient condition
/// for the triangle inequality with `Z` in the middle.
pub fn complexity_triangle_margin(spec: &ComplexitySpec, t: &TripleSummary) -> Result<f64> {
    generalized_condition_margin(spec, t, 1.0)
}

/// Whether the complexity-side triangle condition holds on `triple` (with `Z`
/// in the middle), within `1e-9`.
pub fn check_complexity_triangle_condition(spec: &ComplexitySpec, triple: &TripleDistribution) -> Result<bool> {
    Ok(complexity_triangle_margin(spec, &triple.summary()?)? >= -super::VIOLATION_TOL)
}

/// `c C(X,Z) + c C(Y,Z) - H(Z) - (c-1)(I(X;Z) + I(Y;Z))`.
pub fn generalized_condition_value(spec: &ComplexitySpec, t: &TripleSummary, c: f64) -> Result<f64> {
    let cxz = complexity(spec, &t.xz)?;
    let cyz = complexity(spec, &t.yz)?;
    Ok(c * (cxz + cyz) - t.h_z() - (c - 1.0) * (t.xz.mi + t.yz.mi))
}

/// [`generalized_condition_value`] minus `C(X,Y)`; negative when the condition fails.
pub fn generalized_condition_margin(spec: &ComplexitySpec, t: &TripleSummary, c: f64) -> Result<f64> {
    Ok(generalized_condition_value(spec, t, c)? - complexity(spec, &t.xy)?)
}

/// Slack of `k1 D_I <= IB <= k2 D_I` on one pair.
pub fn sandwich_slack(spec: &ComplexitySpec, s: &InfoSummary, k1: f64, k2: f64) -> Result<f64> {
    let ib = evaluate(spec, s)?.ib;
    let di = information_distance(s);
    Ok((ib - k1 * di).min(k2 * di - ib))
}

pub(crate) fn sandwich_report(
    name: &str,
    status: CheckStatus,
    spec: &ComplexitySpec,
    pool: &[(JointDistribution, InfoSummary)],
    k1: f64,
    k2: f64,
    domain: Domain,
) -> CheckReport {
    let blank = CheckReport::new(name, status);
    pool.par_iter()
        .enumerate()
        .fold(
            || blank.blank(),
            |mut r, (i, (joint, s))| {
                if !domain.contains(s) {
                    r.reject();
                    return r;
                }
                let slack = sandwich_slack(spec, s, k1, k2).unwrap_or(f64::NAN);
                r.record(i as u64, slack, || WitnessData::Joint(joint.clone()));
                r
            },
        )
        .reduce(|| blank.blank(), CheckReport::merge)
}

/// Checks `k1 D_I <= IB <= k2 D_I` on every sample inside `domain`; samples
/// outside are counted as rejected.
pub fn check_p3bis(
    name: &str,
    spec: &ComplexitySpec,
    samples: &[JointDistribution],
    k1: f64,
    k2: f64,
    domain: Domain,
) -> Result<CheckReport> {
    let pool = samples
        .iter()
        .map(|j| Ok((j.clone(), j.summary()?)))
        .collect::<Result<Vec<_>>>()?;
    Ok(sandwich_report(name, CheckStatus::Proved, spec, &pool, k1, k2, domain))
}

/// Runs [`check_p3bis`] for every constant of [`p3bis_constants`] on its own domain.
pub fn check_p3bis_constants(
    kind: GMeanKind,
    alpha: f64,
    theta: ThetaInterval,
    samples: &[JointDistribution],
) -> Result<Vec<CheckReport>> {
    let k = p3bis_constants(kind, alpha, Theta::Bounded(theta))?;
    let spec = ComplexitySpec::mean(kind, alpha)?;
    let label = spec.to_string();
    let mut out = Vec::new();
    for (suffix, k1, domain) in [
        ("k1_a", k.k1_a, Domain::Upsilon(theta)),
        ("k1_b", k.k1_b, Domain::Gamma2(theta)),
        ("k1_c", k.k1_c, Domain::Gamma2(theta)),
    ] {
        if let Some(k1) = k1 {
            out.push(check_p3bis(&format!("p3bis.{label}.{suffix}"), &spec, samples, k1, k.k2, domain)?);
        }
    }
    Ok(out)
}

/// Whether `H(X1)` and `H(X2)` lie in `[γ1 H(Y), γ2 H(Y)]` for a triple `(Y, X1, X2)`.
pub fn redundancy_domain_contains(t: &TripleSummary, gamma1: f64, gamma2: f64) -> bool {
    let h_y = t.h_x();
    [t.h_y(), t.h_z()]
        .iter()
        .all(|&h| gamma1 * h_y <= h && h <= gamma2 * h_y)
}

/// Slacks of the raw and normalized redundancy bounds.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RedundancySlack {
    pub raw: f64,
    pub normalized: f64,
}

/// Evaluates `|IB(Y,X1) - IB(Y,X2)| <= (1+κ1) D_I(X1,X2)` and its normalized
/// analogue on a triple `(Y, X1, X2)`.
pub fn check_redundancy_bound(
    spec: &ComplexitySpec,
    t: &TripleSummary,
    constants: &RedundancyConstants,
) -> Result<RedundancySlack> {
    if !redundancy_domain_contains(t, constants.gamma1, constants.gamma2) {
        return Err(Error::DomainViolation(format!(
            "covariate entropies {} and {} not within [{}, {}] x target entropy {}",
            t.h_y(),
            t.h_z(),
            constants.gamma1,
            constants.gamma2,
            t.h_x()
        )));
    }
    let r1 = evaluate(spec, &t.xy)?;
    let r2 = evaluate(spec, &t.xz)?;
    Ok(RedundancySlack {
        raw: constants.raw_factor() * information_distance(&t.yz) - (r1.ib - r2.ib).abs(),
        normalized: constants.normalized_factor() * normalized_information_distance(&t.yz)
            - (r1.nib - r2.nib).abs(),
    })
}

/// `|I(Y;X1) - I(Y;X2)| <= D_I(X1,X2)` slack on a triple `(Y, X1, X2)`.
pub fn mutual_information_redundancy_slack(t: &TripleSummary) -> f64 {
    information_distance(&t.yz) - (t.xy.mi - t.xz.mi).abs()
}

/// An explicit triple built to break a complexity-side triangle condition.
#[derive(Debug, Clone)]
pub struct ConditionWitness {
    pub label: String,
    pub spec: ComplexitySpec,
    /// Relaxation constant of the condition (1 for the plain condition).
    pub c: f64,
    /// Intended `(H(X), H(Y), H(Z))`.
    pub targets: [f64; 3],
    pub triple: TripleDistribution,
}

impl ConditionWitness {
    fn build(label: String, spec: ComplexitySpec, c: f64, targets: [f64; 3]) -> Result<Self> {
        let triple = independent_binary_triple(targets[0], targets[1], targets[2])?;
        Ok(Self {
            label,
            spec,
            c,
            targets,
            triple,
        })
    }

    /// Largest deviation of the realized entropies from the targets.
    pub fn constraint_error(&self) -> Result<f64> {
        let s = self.triple.summary()?;
        Ok([s.h_x(), s.h_y(), s.h_z()]
            .iter()
            .zip(self.targets)
            .map(|(a, b)| (a - b).abs())
            .fold(0.0, f64::max))
    }

    /// Margin of the condition; negative when the witness breaks it.
    pub fn margin(&self) -> Result<f64> {
        generalized_condition_margin(&self.spec, &self.triple.summary()?, self.c)
    }

    /// Left-hand side of the relaxed condition.
    pub fn condition_value(&self) -> Result<f64> {
        generalized_condition_value(&self.spec, &self.triple.summary()?, self.c)
    }
}

const WITNESS_H_Z: f64 = 0.6;

/// `X`, `Y` with equal entropy above an independent `Z`; breaks the plain
/// condition for the arithmetic complexity whenever `α > 1/2`.
pub fn arithmetic_condition_witness(alpha: f64) -> Result<ConditionWitness> {
    let spec = ComplexitySpec::mean(GMeanKind::Arithmetic, alpha)?;
    let (h, h_z) = (WITNESS_H_Z, WITNESS_H_Z / 2.0);
    ConditionWitness::build(format!("{spec}"), spec, 1.0, [h, h, h_z])
}

/// Independent `Z` with `H(Z) = (1+α)/α · H(X) = (1+α)/α · H(Y)`, where the
/// harmonic condition sum is exactly zero.
pub fn harmonic_condition_witness(alpha: f64) -> Result<ConditionWitness> {
    let spec = ComplexitySpec::mean(GMeanKind::Harmonic, alpha)?;
    if alpha <= 0.0 {
        return Err(Error::InvalidAlpha { alpha, range: "(0, 1]" });
    }
    let h = WITNESS_H_Z * alpha / (1.0 + alpha);
    ConditionWitness::build(format!("{spec}"), spec, 1.0, [h, h, WITNESS_H_Z])
}

/// Independent `Z` with `α H(Z) + (1-α) H(X) = 3c H(X)` (same for `Y`); the
/// relaxed condition value is `-H(Z)/3`.
pub fn harmonic_generalized_witness(alpha: f64, c: f64) -> Result<ConditionWitness> {
    let spec = ComplexitySpec::mean(GMeanKind::Harmonic, alpha)?;
    if alpha <= 0.0 || c < 1.0 {
        return Err(Error::InvalidParameter(format!("need α > 0 and c >= 1, got {alpha}, {c}")));
    }
    let h = WITNESS_H_Z * alpha / (3.0 * c - 1.0 + alpha);
    ConditionWitness::build(format!("{spec}@c={c}"), spec, c, [h, h, WITNESS_H_Z])
}

/// Independent `Z` with `H(X) = H(Y) = (1/(3c))^{1/α} H(Z)`; the relaxed
/// condition value for the geometric complexity is `-H(Z)/3`.
pub fn geometric_condition_witness(alpha: f64, c: f64) -> Result<ConditionWitness> {
    let spec = ComplexitySpec::mean(GMeanKind::Geometric, alpha)?;
    if alpha <= 0.0 || c < 1.0 {
        return Err(Error::InvalidParameter(format!("need α > 0 and c >= 1, got {alpha}, {c}")));
    }
    let h = (1.0 / (3.0 * c)).powf(1.0 / alpha) * WITNESS_H_Z;
    ConditionWitness::build(format!("{spec}@c={c}"), spec, c, [h, h, WITNESS_H_Z])
}
