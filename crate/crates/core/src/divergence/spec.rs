use std::fmt;
use std::str::FromStr;
use std::sync::Arc;

use crate::error::{Error, Result};

/// Tolerance on the sum of convex weights.
pub const WEIGHT_TOL: f64 = 1e-12;

/// Minimum number of points used to probe a user-supplied `g` for monotonicity.
pub const PROBE_POINTS: usize = 17;

/// Mixing weight in `[0, 1]`.
#[derive(Debug, Clone, Copy, PartialEq, PartialOrd)]
pub struct Alpha(f64);

impl Alpha {
    pub const HALF: Alpha = Alpha(0.5);

    pub fn new(alpha: f64) -> Result<Self> {
        if (0.0..=1.0).contains(&alpha) {
            Ok(Self(alpha))
        } else {
            Err(Error::InvalidAlpha {
                alpha,
                range: "[0, 1]",
            })
        }
    }

    pub fn get(self) -> f64 {
        self.0
    }

    /// `min(α, 1 - α)`.
    pub fn wedge(self) -> f64 {
        self.0.min(1.0 - self.0)
    }

    /// `max(α, 1 - α)`.
    pub fn vee(self) -> f64 {
        self.0.max(1.0 - self.0)
    }
}

/// The four named generator functions of the g-mean family.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum GMeanKind {
    /// `g(x) = x`: weighted arithmetic mean (letter `S`).
    Arithmetic,
    /// `g(x) = sqrt(x)` (letter `R`).
    Root,
    /// `g(x) = ln x`: weighted geometric mean (letter `P`).
    Geometric,
    /// `g(x) = 1/x`: weighted harmonic mean (letter `D`).
    Harmonic,
}

impl GMeanKind {
    pub const ALL: [GMeanKind; 4] = [
        GMeanKind::Harmonic,
        GMeanKind::Geometric,
        GMeanKind::Root,
        GMeanKind::Arithmetic,
    ];

    pub fn letter(self) -> char {
        match self {
            GMeanKind::Arithmetic => 'S',
            GMeanKind::Root => 'R',
            GMeanKind::Geometric => 'P',
            GMeanKind::Harmonic => 'D',
        }
    }

    pub fn from_letter(c: char) -> Option<Self> {
        match c {
            'S' => Some(GMeanKind::Arithmetic),
            'R' => Some(GMeanKind::Root),
            'P' => Some(GMeanKind::Geometric),
            'D' => Some(GMeanKind::Harmonic),
            _ => None,
        }
    }

    /// Generator function `g`.
    pub fn g(self, x: f64) -> f64 {
        match self {
            GMeanKind::Arithmetic => x,
            GMeanKind::Root => x.sqrt(),
            GMeanKind::Geometric => x.ln(),
            GMeanKind::Harmonic => 1.0 / x,
        }
    }

    /// Inverse of [`GMeanKind::g`].
    pub fn g_inv(self, y: f64) -> f64 {
        match self {
            GMeanKind::Arithmetic => y,
            GMeanKind::Root => y * y,
            GMeanKind::Geometric => y.exp(),
            GMeanKind::Harmonic => 1.0 / y,
        }
    }
}

type RealFn = Arc<dyn Fn(f64) -> f64 + Send + Sync>;

/// A g-mean complexity with a user-supplied generator `g` and its inverse.
#[derive(Clone)]
pub struct CustomMean {
    name: String,
    g: RealFn,
    g_inv: RealFn,
    alpha: f64,
}

impl fmt::Debug for CustomMean {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("CustomMean")
            .field("name", &self.name)
            .field("alpha", &self.alpha)
            .finish_non_exhaustive()
    }
}

impl CustomMean {
    /// `alpha` must lie in `[0, 1)`.
    pub fn new<G, H>(name: impl Into<String>, g: G, g_inv: H, alpha: f64) -> Result<Self>
    where
        G: Fn(f64) -> f64 + Send + Sync + 'static,
        H: Fn(f64) -> f64 + Send + Sync + 'static,
    {
        if !(0.0..1.0).contains(&alpha) {
            return Err(Error::InvalidAlpha {
                alpha,
                range: "[0, 1)",
            });
        }
        Ok(Self {
            name: name.into(),
            g: Arc::new(g),
            g_inv: Arc::new(g_inv),
            alpha,
        })
    }

    /// The custom form of one of the named generators.
    pub fn from_kind(kind: GMeanKind, alpha: f64) -> Result<Self> {
        Self::new(
            format!("g{}", kind.letter()),
            move |x| kind.g(x),
            move |y| kind.g_inv(y),
            alpha,
        )
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn alpha(&self) -> f64 {
        self.alpha
    }

    pub fn g(&self, x: f64) -> f64 {
        (self.g)(x)
    }

    pub fn g_inv(&self, y: f64) -> f64 {
        (self.g_inv)(y)
    }

    /// Spot-checks that `g` is strictly monotone on `[lo, hi]` and that
    /// `g_inv` inverts it there.
    pub fn validate_on(&self, lo: f64, hi: f64) -> Result<()> {
        if !(lo <= hi) {
            return Err(Error::InvalidParameter(format!("empty probe range [{lo}, {hi}]")));
        }
        if hi - lo <= f64::EPSILON * hi.abs().max(1.0) {
            return Ok(());
        }
        let n = PROBE_POINTS;
        let xs: Vec<f64> = (0..n)
            .map(|i| lo + (hi - lo) * i as f64 / (n - 1) as f64)
            .collect();
        let ys: Vec<f64> = xs.iter().map(|&x| self.g(x)).collect();
        let increasing = ys.windows(2).all(|w| w[0] < w[1]);
        let decreasing = ys.windows(2).all(|w| w[0] > w[1]);
        if !(increasing || decreasing) {
            return Err(Error::NotMonotone(format!(
                "{} on [{lo}, {hi}]",
                self.name
            )));
        }
        for (&x, &y) in xs.iter().zip(&ys) {
            let back = self.g_inv(y);
            if !((back - x).abs() <= 1e-9 * x.abs().max(1.0)) {
                return Err(Error::InvalidParameter(format!(
                    "inverse of {} maps g({x}) to {back}",
                    self.name
                )));
            }
        }
        Ok(())
    }
}

/// How the children of a convex complexity are combined.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Mixing {
    /// `C = Σ w_j C_j`; the raw divergence is `Σ w_j IB_j`.
    Raw,
    /// `C = (Σ w_j / C_j)^-1`; the normalized divergence is `Σ w_j NIB_j`.
    Normalized,
}

/// Weighted combination of child complexities.
#[derive(Debug, Clone)]
pub struct ConvexSpec {
    weights: Vec<f64>,
    children: Vec<ComplexitySpec>,
    mixing: Mixing,
}

impl ConvexSpec {
    pub fn new(weights: Vec<f64>, children: Vec<ComplexitySpec>, mixing: Mixing) -> Result<Self> {
        if weights.len() != children.len() {
            return Err(Error::WeightMismatch {
                weights: weights.len(),
                specs: children.len(),
            });
        }
        if weights.is_empty() {
            return Err(Error::InvalidWeights("no children".into()));
        }
        if let Some(w) = weights.iter().find(|w| !(**w >= 0.0) || !w.is_finite()) {
            return Err(Error::InvalidWeights(format!("weight {w} is not a finite nonnegative number")));
        }
        let total: f64 = weights.iter().sum();
        if (total - 1.0).abs() > WEIGHT_TOL {
            return Err(Error::InvalidWeights(format!("weights sum to {total}")));
        }
        Ok(Self {
            weights,
            children,
            mixing,
        })
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    pub fn children(&self) -> &[ComplexitySpec] {
        &self.children
    }

    pub fn mixing(&self) -> Mixing {
        self.mixing
    }
}

/// Which complexity term a divergence uses.
#[derive(Debug, Clone)]
pub enum ComplexitySpec {
    /// `H(X, Y)`: entropy distance (`E`).
    Joint,
    /// `max(H(X), H(Y))`: information distance (`I`).
    MaxEntropy,
    /// `min(H(X), H(Y))`; bounds the mutual information but is not tight only
    /// on equivalent pairs, so it does not define a divergence.
    MinEntropy,
    /// One of the four named g-means `S`, `R`, `P`, `D` with weight α.
    Mean(GMeanKind, Alpha),
    Custom(CustomMean),
    Convex(ConvexSpec),
}

impl ComplexitySpec {
    pub fn mean(kind: GMeanKind, alpha: f64) -> Result<Self> {
        Ok(ComplexitySpec::Mean(kind, Alpha::new(alpha)?))
    }

    pub fn convex(weights: Vec<f64>, children: Vec<ComplexitySpec>, mixing: Mixing) -> Result<Self> {
        Ok(ComplexitySpec::Convex(ConvexSpec::new(weights, children, mixing)?))
    }

    /// Whether `I <= C` with equality exactly on equivalent pairs.
    ///
    /// False for the minimum entropy and for named means with `α = 1`.
    pub fn is_divergence(&self) -> bool {
        match self {
            ComplexitySpec::Joint | ComplexitySpec::MaxEntropy | ComplexitySpec::Custom(_) => true,
            ComplexitySpec::MinEntropy => false,
            ComplexitySpec::Mean(_, alpha) => alpha.get() < 1.0,
            ComplexitySpec::Convex(c) => c
                .weights
                .iter()
                .zip(&c.children)
                .any(|(&w, child)| w > 0.0 && child.is_divergence()),
        }
    }

    /// Parses the compact grammar, substituting `default_alpha` for bare
    /// mean letters (`"S"`, `"R"`, `"P"`, `"D"`). Without a default, a bare
    /// letter means `α = 1/2`.
    pub fn parse_with_alpha(input: &str, default_alpha: Option<f64>) -> Result<Self> {
        let err = |reason: &str| Error::SpecParse {
            input: input.to_string(),
            reason: reason.to_string(),
        };
        let s = input.trim();
        if s.is_empty() {
            return Err(err("empty"));
        }
        if let Some((head, body)) = s.split_once(':') {
            let mixing = match head.trim() {
                "convex" => Some(Mixing::Raw),
                "nconvex" => Some(Mixing::Normalized),
                _ => None,
            };
            if let Some(mixing) = mixing {
                let mut weights = Vec::new();
                let mut children = Vec::new();
                for term in body.split('+') {
                    let (w, child) = term
                        .split_once('*')
                        .ok_or_else(|| err("convex terms must look like <weight>*<spec>"))?;
                    let w: f64 = w.trim().parse().map_err(|_| err("bad convex weight"))?;
                    let child = child.trim();
                    if child.starts_with("convex") || child.starts_with("nconvex") {
                        return Err(err("nested convex specs are not supported"));
                    }
                    weights.push(w);
                    children.push(Self::parse_with_alpha(child, default_alpha)?);
                }
                return Self::convex(weights, children, mixing);
            }
        }
        match s {
            "E" => return Ok(ComplexitySpec::Joint),
            "I" => return Ok(ComplexitySpec::MaxEntropy),
            "Min" | "min" | "MIN" => return Ok(ComplexitySpec::MinEntropy),
            _ => {}
        }
        let mut chars = s.chars();
        let letter = chars.next().ok_or_else(|| err("empty"))?;
        let kind = GMeanKind::from_letter(letter).ok_or_else(|| err("unknown complexity kind"))?;
        let rest = chars.as_str().trim();
        let alpha = if rest.is_empty() {
            default_alpha.unwrap_or(0.5)
        } else {
            let a = rest
                .strip_prefix(':')
                .ok_or_else(|| err("expected ':' after the kind letter"))?;
            a.trim().parse().map_err(|_| err("bad alpha"))?
        };
        Self::mean(kind, alpha)
    }
}

impl FromStr for ComplexitySpec {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Self::parse_with_alpha(s, None)
    }
}

impl fmt::Display for ComplexitySpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ComplexitySpec::Joint => write!(f, "E"),
            ComplexitySpec::MaxEntropy => write!(f, "I"),
            ComplexitySpec::MinEntropy => write!(f, "Min"),
            ComplexitySpec::Mean(kind, alpha) => write!(f, "{}:{}", kind.letter(), alpha.get()),
            ComplexitySpec::Custom(c) => write!(f, "custom({}):{}", c.name, c.alpha),
            ComplexitySpec::Convex(c) => {
                let head = match c.mixing {
                    Mixing::Raw => "convex",
                    Mixing::Normalized => "nconvex",
                };
                write!(f, "{head}:")?;
                for (i, (w, child)) in c.weights.iter().zip(&c.children).enumerate() {
                    if i > 0 {
                        write!(f, "+")?;
                    }
                    write!(f, "{w}*{child}")?;
                }
                Ok(())
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_grammar() {
        for text in ["E", "I", "Min", "S:0.5", "R:0.3", "P:0.5", "D:0.5", "convex:0.3*E+0.7*I", "nconvex:0.5*D:0.2+0.5*I"] {
            let spec: ComplexitySpec = text.parse().unwrap();
            assert_eq!(spec.to_string(), text);
        }
    }

    #[test]
    fn bare_letter_defaults() {
        assert_eq!("S".parse::<ComplexitySpec>().unwrap().to_string(), "S:0.5");
        assert_eq!(
            ComplexitySpec::parse_with_alpha("R", Some(0.3)).unwrap().to_string(),
            "R:0.3"
        );
        // explicit alpha wins over the default
        assert_eq!(
            ComplexitySpec::parse_with_alpha("R:0.1", Some(0.3)).unwrap().to_string(),
            "R:0.1"
        );
    }

    #[test]
    fn rejects_bad_specs() {
        for text in ["", "Q", "S:", "S:1.5", "S0.5", "convex:0.3*E", "convex:0.5*E+0.5", "convex:0.5*convex:1*E+0.5*I", "convex:1.5*E+-0.5*I"] {
            assert!(text.parse::<ComplexitySpec>().is_err(), "{text:?} should fail");
        }
    }

    #[test]
    fn convex_weight_validation() {
        assert!(matches!(
            ConvexSpec::new(vec![1.0], vec![], Mixing::Raw),
            Err(Error::WeightMismatch { weights: 1, specs: 0 })
        ));
        assert!(ConvexSpec::new(vec![0.5, 0.4], vec![ComplexitySpec::Joint, ComplexitySpec::MaxEntropy], Mixing::Raw).is_err());
    }

    #[test]
    fn divergence_flags() {
        assert!(!ComplexitySpec::MinEntropy.is_divergence());
        assert!(!ComplexitySpec::mean(GMeanKind::Arithmetic, 1.0).unwrap().is_divergence());
        assert!(ComplexitySpec::mean(GMeanKind::Arithmetic, 0.9).unwrap().is_divergence());
        let mix: ComplexitySpec = "convex:0.5*Min+0.5*I".parse().unwrap();
        assert!(mix.is_divergence());
    }

    #[test]
    fn custom_mean_validation() {
        assert!(CustomMean::new("id", |x| x, |y| y, 1.0).is_err());
        let sq = CustomMean::new("sq", |x| x * x, |y: f64| y.sqrt(), 0.5).unwrap();
        assert!(sq.validate_on(0.0, 2.0).is_ok());
        let bump = CustomMean::new("bump", |x: f64| (x - 1.0).powi(2), |y: f64| y.sqrt() + 1.0, 0.5).unwrap();
        assert!(matches!(bump.validate_on(0.0, 2.0), Err(Error::NotMonotone(_))));
        let wrong_inverse = CustomMean::new("bad", |x| 2.0 * x, |y| y, 0.5).unwrap();
        assert!(wrong_inverse.validate_on(0.5, 2.0).is_err());
        // decreasing generators are allowed
        let recip = CustomMean::from_kind(GMeanKind::Harmonic, 0.5).unwrap();
        assert!(recip.validate_on(0.1, 3.0).is_ok());
    }
}
