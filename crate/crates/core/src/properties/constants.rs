use serde::Serialize;

use crate::divergence::{Alpha, GMeanKind};
use crate::error::{Error, Result};

/// Entropy interval `Θ = [c1, c2]` with `0 < c1 <= c2 < ∞`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ThetaInterval {
    c1: f64,
    c2: f64,
}

impl ThetaInterval {
    pub fn new(c1: f64, c2: f64) -> Result<Self> {
        if c1 > 0.0 && c1 <= c2 && c2.is_finite() {
            Ok(Self { c1, c2 })
        } else {
            Err(Error::InvalidTheta { c1, c2 })
        }
    }

    pub fn c1(&self) -> f64 {
        self.c1
    }

    pub fn c2(&self) -> f64 {
        self.c2
    }

    /// `ρ = c2 / c1`.
    pub fn rho(&self) -> f64 {
        self.c2 / self.c1
    }

    pub fn contains(&self, h: f64) -> bool {
        self.c1 <= h && h <= self.c2
    }
}

/// Either a bounded entropy interval or all of `[0, ∞)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub enum Theta {
    Bounded(ThetaInterval),
    Unbounded,
}

/// Constants of the sandwich `k1 · D_I <= IB <= k2 · D_I`.
///
/// `k1_a` holds on pairs whose two entropies and mutual information lie in
/// `Θ`; `k1_b` and `k1_c` only need the two entropies in `Θ`. A constant is
/// `None` when it is not defined or not positive for the given `α` and `Θ`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct BoundConstants {
    pub k1_a: Option<f64>,
    pub k1_b: Option<f64>,
    pub k1_c: Option<f64>,
    pub k2: f64,
}

fn positive(x: f64) -> Option<f64> {
    (x > 0.0 && x.is_finite()).then_some(x)
}

/// `(t^e - 1) / (t - 1)`, continuous at `t = 1`.
fn chord_slope(t: f64, e: f64) -> f64 {
    if (t - 1.0).abs() < 1e-12 {
        e
    } else {
        (e * t.ln()).exp_m1() / (t - 1.0)
    }
}

fn check_alpha_open(alpha: f64) -> Result<Alpha> {
    if !(0.0..1.0).contains(&alpha) {
        return Err(Error::InvalidAlpha {
            alpha,
            range: "[0, 1)",
        });
    }
    Alpha::new(alpha)
}

/// Lower and upper constants comparing `IB^{kind,α}` with `D_I`.
pub fn p3bis_constants(kind: GMeanKind, alpha: f64, theta: Theta) -> Result<BoundConstants> {
    let a = check_alpha_open(alpha)?;
    let wedge = a.wedge();
    let mut out = BoundConstants {
        k1_a: None,
        k1_b: None,
        k1_c: None,
        k2: 1.0,
    };
    match (kind, theta) {
        (GMeanKind::Arithmetic, _) => {
            out.k1_a = positive(wedge);
            out.k1_b = positive(1.0 - alpha);
        }
        (GMeanKind::Root, Theta::Bounded(t)) => {
            let sr = t.rho().sqrt();
            out.k1_a = positive(wedge / sr);
            out.k1_b = positive(1.0 - alpha * sr);
            out.k1_c = positive((1.0 - alpha) * (1.0 - alpha / (1.0 + 1.0 / sr).powi(2)));
        }
        (GMeanKind::Root, Theta::Unbounded) => {
            out.k1_c = positive((1.0 - alpha).powi(2));
        }
        (GMeanKind::Geometric, Theta::Bounded(t)) => {
            let rho = t.rho();
            out.k1_a = positive(wedge / rho);
            out.k1_b = positive(1.0 - alpha * rho);
            // Worst case is I = m with M/m = ρ: (ρ^{1-α} - 1)/(ρ - 1).
            out.k1_c = positive(chord_slope(rho, 1.0 - alpha));
        }
        (GMeanKind::Harmonic, Theta::Bounded(t)) => {
            let rho = t.rho();
            out.k1_a = positive(wedge / (rho * rho));
            out.k1_b = positive(1.0 - alpha * rho * rho);
            out.k1_c = positive(1.0 / (1.0 + rho * alpha / (1.0 - alpha)));
        }
        (GMeanKind::Geometric | GMeanKind::Harmonic, Theta::Unbounded) => {
            // Every ratio-dependent constant degenerates as ρ grows, except at α = 0
            // where the complexity is the maximum entropy.
            if alpha == 0.0 {
                out.k1_c = Some(1.0);
            }
        }
    }
    Ok(out)
}

/// `(ρ^α - 1)/(ρ - 1)`: the geometric-mean constant with the roles of `α` and
/// `1 - α` exchanged.
///
/// It is a valid lower constant only for `α <= 1/2`; the harness keeps it as an
/// exploratory check that exhibits the failure for larger `α`.
pub fn geometric_k1_c_exchanged(alpha: f64, theta: ThetaInterval) -> f64 {
    chord_slope(theta.rho(), alpha)
}

/// Relaxation constant `c` of the triangle inequality `d(X,Y) <= c (d(X,Z) + d(Y,Z))`
/// holding for all pairs.
///
/// Raw `S`: 1 up to `α = 1/2`, then `α/(1-α)`. Raw `R`: `1/(α² + (1-α)²)` up to
/// `α = 1/2`, then `(1-α)^-2`. Normalized `S` and `R`: `1/(1-α)` and `(1-α)^-2`.
/// Normalized `D`: `1/min(α, 1-α)`. No constant is known for `P` or raw `D`.
pub fn p6bis_constant(kind: GMeanKind, alpha: f64, normalized: bool) -> Result<f64> {
    let a = check_alpha_open(alpha)?;
    let beta = 1.0 - alpha;
    match (kind, normalized) {
        (GMeanKind::Arithmetic, false) => Ok(if alpha <= 0.5 { 1.0 } else { alpha / beta }),
        (GMeanKind::Arithmetic, true) => Ok(1.0 / beta),
        (GMeanKind::Root, false) => Ok(if alpha <= 0.5 {
            1.0 / (alpha * alpha + beta * beta)
        } else {
            1.0 / (beta * beta)
        }),
        (GMeanKind::Root, true) => Ok(1.0 / (beta * beta)),
        (GMeanKind::Harmonic, true) => {
            if a.wedge() == 0.0 {
                Err(Error::InvalidAlpha {
                    alpha,
                    range: "(0, 1)",
                })
            } else {
                Ok(1.0 / a.wedge())
            }
        }
        (GMeanKind::Harmonic, false) => Err(Error::UnsupportedKind(
            "no global triangle constant is known for the raw harmonic divergence".into(),
        )),
        (GMeanKind::Geometric, _) => Err(Error::UnsupportedKind(
            "no global triangle constant is known for the geometric divergence".into(),
        )),
    }
}

/// Constants of the redundancy bounds for a target `Y` and covariates whose
/// entropies lie in `[γ1 H(Y), γ2 H(Y)]`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct RedundancyConstants {
    pub kappa1: f64,
    pub kappa2: f64,
    pub gamma1: f64,
    pub gamma2: f64,
    pub gamma12: f64,
}

impl RedundancyConstants {
    /// Multiplier of `D_I(X1, X2)` in the raw bound.
    pub fn raw_factor(&self) -> f64 {
        1.0 + self.kappa1
    }

    /// Multiplier of `d_I(X1, X2)` in the normalized bound.
    pub fn normalized_factor(&self) -> f64 {
        (1.0 + self.kappa1) / self.kappa2
    }
}

pub fn redundancy_constants(kind: GMeanKind, alpha: f64, gamma1: f64, gamma2: f64) -> Result<RedundancyConstants> {
    let a = Alpha::new(alpha)?;
    if !(gamma1 > 0.0 && gamma1 <= gamma2 && gamma2.is_finite()) {
        return Err(Error::InvalidGamma { gamma1, gamma2 });
    }
    let gamma12 = gamma1.min(1.0 / gamma2);
    let beta = 1.0 - alpha;
    let (vee, wedge) = (a.vee(), a.wedge());
    let (kappa1, kappa2) = match kind {
        GMeanKind::Arithmetic => (vee, beta + alpha * gamma12),
        GMeanKind::Root => (
            vee * vee + alpha * beta / gamma1.sqrt(),
            (beta + alpha * gamma12.sqrt()).powi(2),
        ),
        GMeanKind::Geometric => {
            let indicator = if gamma1 <= 1.0 { 1.0 } else { 0.0 };
            (
                (beta / gamma1.powf(alpha))
                    .max(alpha / gamma1.powf(beta))
                    .max(indicator),
                gamma12.powf(alpha),
            )
        }
        GMeanKind::Harmonic => {
            if wedge == 0.0 {
                return Err(Error::InvalidAlpha {
                    alpha,
                    range: "(0, 1)",
                });
            }
            (
                vee / (wedge * wedge) / (1.0 + gamma12).powi(2),
                1.0 / (alpha / gamma12 + beta),
            )
        }
    };
    Ok(RedundancyConstants {
        kappa1,
        kappa2,
        gamma1,
        gamma2,
        gamma12,
    })
}
