//! Exact categorical laws and their entropic primitives.
//!
//! Every quantity is in nats. The tolerances below separate user data error
//! (normalization) from internal roundoff (zero tests).

mod joint;
mod triple;

pub use joint::{JointDistribution, SamplePairs};
pub use triple::{TripleDistribution, TripleSummary};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Maximum allowed deviation of the total mass from one.
pub const NORMALIZATION_TOL: f64 = 1e-9;

/// Threshold below which an entropy-like quantity is treated as zero.
pub const ZERO_TOL: f64 = 1e-12;

/// Slack accepted between the identities relating the six entropic quantities.
pub const IDENTITY_TOL: f64 = 1e-9;

/// Neumaier-compensated sum.
pub fn compensated_sum<I: IntoIterator<Item = f64>>(values: I) -> f64 {
    let mut sum = 0.0_f64;
    let mut comp = 0.0_f64;
    for v in values {
        let t = sum + v;
        if sum.abs() >= v.abs() {
            comp += (sum - t) + v;
        } else {
            comp += (v - t) + sum;
        }
        sum = t;
    }
    sum + comp
}

/// Checks that `probs` is a probability vector, returning a copy with
/// roundoff-level negatives set to zero.
pub(crate) fn validate_probs(probs: &[f64]) -> Result<Vec<f64>> {
    let mut out = Vec::with_capacity(probs.len());
    for (index, &p) in probs.iter().enumerate() {
        if !p.is_finite() {
            return Err(Error::NonFinite { index });
        }
        if p < -ZERO_TOL {
            return Err(Error::NegativeMass { index, value: p });
        }
        out.push(p.max(0.0));
    }
    let sum = compensated_sum(out.iter().copied());
    if (sum - 1.0).abs() > NORMALIZATION_TOL {
        return Err(Error::NotNormalized { sum });
    }
    Ok(out)
}

/// `-Σ p ln p` over entries already known to be nonnegative; results at or
/// below [`ZERO_TOL`] (a point mass whose total is off by roundoff) are 0.
pub(crate) fn entropy_unchecked(probs: &[f64]) -> f64 {
    let h = compensated_sum(
        probs
            .iter()
            .map(|&p| if p > 0.0 { -p * p.ln() } else { 0.0 }),
    );
    if h <= ZERO_TOL {
        0.0
    } else {
        h
    }
}

/// Shannon entropy in nats, with `0 ln 0 = 0`.
pub fn entropy(probs: &[f64]) -> Result<f64> {
    let probs = validate_probs(probs)?;
    Ok(entropy_unchecked(&probs))
}

/// The six entropic quantities of a pair `(X, Y)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct InfoSummary {
    pub h_x: f64,
    pub h_y: f64,
    pub h_joint: f64,
    pub h_x_given_y: f64,
    pub h_y_given_x: f64,
    pub mi: f64,
}

impl InfoSummary {
    /// Builds a summary from the marginal and joint entropies.
    ///
    /// Mutual information is `h_x + h_y - h_joint` clamped to
    /// `[0, min(h_x, h_y)]`; the conditionals are `h_joint - h_y` and
    /// `h_joint - h_x` clamped at zero. Inputs that violate
    /// `max(h_x, h_y) <= h_joint <= h_x + h_y` beyond roundoff are rejected.
    pub fn from_entropies(h_x: f64, h_y: f64, h_joint: f64) -> Result<Self> {
        for (name, h) in [("h_x", h_x), ("h_y", h_y), ("h_joint", h_joint)] {
            if !h.is_finite() || h < -ZERO_TOL {
                return Err(Error::InvalidParameter(format!(
                    "{name} = {h} is not a finite nonnegative entropy"
                )));
            }
        }
        let (h_x, h_y, h_joint) = (h_x.max(0.0), h_y.max(0.0), h_joint.max(0.0));
        if h_joint + IDENTITY_TOL < h_x.max(h_y) || h_joint > h_x + h_y + IDENTITY_TOL {
            return Err(Error::InvalidParameter(format!(
                "joint entropy {h_joint} inconsistent with marginals {h_x}, {h_y}"
            )));
        }
        let mi = (h_x + h_y - h_joint).clamp(0.0, h_x.min(h_y));
        Ok(Self {
            h_x,
            h_y,
            h_joint,
            h_x_given_y: (h_joint - h_y).max(0.0),
            h_y_given_x: (h_joint - h_x).max(0.0),
            mi,
        })
    }

    /// Summary with the roles of `X` and `Y` exchanged.
    pub fn swapped(&self) -> Self {
        Self {
            h_x: self.h_y,
            h_y: self.h_x,
            h_joint: self.h_joint,
            h_x_given_y: self.h_y_given_x,
            h_y_given_x: self.h_x_given_y,
            mi: self.mi,
        }
    }

    /// `min(H(X), H(Y))`.
    pub fn min_entropy(&self) -> f64 {
        self.h_x.min(self.h_y)
    }

    /// `max(H(X), H(Y))`.
    pub fn max_entropy(&self) -> f64 {
        self.h_x.max(self.h_y)
    }

    pub fn min_conditional(&self) -> f64 {
        self.h_x_given_y.min(self.h_y_given_x)
    }

    pub fn max_conditional(&self) -> f64 {
        self.h_x_given_y.max(self.h_y_given_x)
    }

    /// Whether each variable determines the other almost surely.
    pub fn is_equivalent(&self) -> bool {
        is_equivalent(self)
    }
}

/// Computes the [`InfoSummary`] of a joint law.
pub fn summarize(joint: &JointDistribution) -> Result<InfoSummary> {
    let h_x = entropy_unchecked(&joint.marginal_x());
    let h_y = entropy_unchecked(&joint.marginal_y());
    let h_joint = entropy_unchecked(joint.probs());
    InfoSummary::from_entropies(h_x, h_y, h_joint)
}

/// True iff both conditional entropies vanish (within [`ZERO_TOL`]).
pub fn is_equivalent(summary: &InfoSummary) -> bool {
    summary.h_x_given_y <= ZERO_TOL && summary.h_y_given_x <= ZERO_TOL
}

/// `H(X, Y, Z)` of a triple law.
pub fn entropy_of_triple(triple: &TripleDistribution) -> f64 {
    entropy_unchecked(triple.probs())
}

/// `(XY, XZ, YZ)` pairwise marginals of a triple law.
pub fn pairwise_marginals(
    triple: &TripleDistribution,
) -> (JointDistribution, JointDistribution, JointDistribution) {
    triple.pairwise_marginals()
}

/// Plug-in estimate of a joint law from observed pairs.
pub fn from_samples(data: &SamplePairs) -> JointDistribution {
    JointDistribution::from_samples(data)
}
