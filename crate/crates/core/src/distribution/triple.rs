use serde::{Deserialize, Serialize};

use super::joint::default_labels;
use super::{compensated_sum, entropy_unchecked, summarize, validate_probs, InfoSummary, JointDistribution};
use crate::error::{Error, Result};

/// Exact finite joint law of `(X, Y, Z)`.
///
/// Serialized like [`JointDistribution`] with an extra `labels_z` and a
/// three-level nested `probs` array indexed `[x][y][z]`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "RawTriple", into = "RawTriple")]
pub struct TripleDistribution {
    labels_x: Vec<String>,
    labels_y: Vec<String>,
    labels_z: Vec<String>,
    probs: Vec<f64>,
}

#[derive(Serialize, Deserialize)]
struct RawTriple {
    labels_x: Vec<String>,
    labels_y: Vec<String>,
    labels_z: Vec<String>,
    probs: Vec<Vec<Vec<f64>>>,
}

impl TryFrom<RawTriple> for TripleDistribution {
    type Error = Error;

    fn try_from(raw: RawTriple) -> Result<Self> {
        let (nx, ny, nz) = (raw.labels_x.len(), raw.labels_y.len(), raw.labels_z.len());
        if raw.probs.len() != nx {
            return Err(Error::Shape(format!("{} x-slices for {nx} x-labels", raw.probs.len())));
        }
        let mut flat = Vec::with_capacity(nx * ny * nz);
        for (i, plane) in raw.probs.iter().enumerate() {
            if plane.len() != ny {
                return Err(Error::Shape(format!("x-slice {i} has {} rows for {ny} y-labels", plane.len())));
            }
            for (j, row) in plane.iter().enumerate() {
                if row.len() != nz {
                    return Err(Error::Shape(format!(
                        "cell ({i},{j}) has {} entries for {nz} z-labels",
                        row.len()
                    )));
                }
                flat.extend_from_slice(row);
            }
        }
        Self::new(raw.labels_x, raw.labels_y, raw.labels_z, flat)
    }
}

impl From<TripleDistribution> for RawTriple {
    fn from(t: TripleDistribution) -> Self {
        let (ny, nz) = (t.labels_y.len(), t.labels_z.len());
        let probs = t
            .probs
            .chunks(ny * nz)
            .map(|plane| plane.chunks(nz).map(<[f64]>::to_vec).collect())
            .collect();
        RawTriple {
            labels_x: t.labels_x,
            labels_y: t.labels_y,
            labels_z: t.labels_z,
            probs,
        }
    }
}

/// Entropic quantities of a triple: the three pairwise summaries and `H(X,Y,Z)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct TripleSummary {
    pub xy: InfoSummary,
    pub xz: InfoSummary,
    pub yz: InfoSummary,
    pub h_xyz: f64,
}

impl TripleSummary {
    pub fn h_x(&self) -> f64 {
        self.xy.h_x
    }

    pub fn h_y(&self) -> f64 {
        self.xy.h_y
    }

    pub fn h_z(&self) -> f64 {
        self.xz.h_y
    }

    /// The same triple seen as `(Y, Z, X)`.
    pub fn rotated(&self) -> Self {
        Self {
            xy: self.yz,
            xz: self.xy.swapped(),
            yz: self.xz.swapped(),
            h_xyz: self.h_xyz,
        }
    }
}

impl TripleDistribution {
    /// Builds a triple law from a flat buffer indexed `(i * ny + j) * nz + k`.
    pub fn new(
        labels_x: Vec<String>,
        labels_y: Vec<String>,
        labels_z: Vec<String>,
        probs: Vec<f64>,
    ) -> Result<Self> {
        for (name, labels) in [("labels_x", &labels_x), ("labels_y", &labels_y), ("labels_z", &labels_z)] {
            if labels.is_empty() {
                return Err(Error::EmptyLabels(name));
            }
        }
        let n = labels_x.len() * labels_y.len() * labels_z.len();
        if probs.len() != n {
            return Err(Error::Shape(format!("{} entries for {n} cells", probs.len())));
        }
        let probs = validate_probs(&probs)?;
        Ok(Self {
            labels_x,
            labels_y,
            labels_z,
            probs,
        })
    }

    /// Triple with generated labels.
    pub fn from_flat(shape: (usize, usize, usize), probs: Vec<f64>) -> Result<Self> {
        Self::new(
            default_labels("x", shape.0),
            default_labels("y", shape.1),
            default_labels("z", shape.2),
            probs,
        )
    }

    /// Law of `(X, Y, Z)` with `Z` independent of `(X, Y)`.
    pub fn with_independent_z(xy: &JointDistribution, pz: &[f64]) -> Result<Self> {
        let pz = validate_probs(pz)?;
        let probs = xy
            .probs()
            .iter()
            .flat_map(|&p| pz.iter().map(move |&q| p * q))
            .collect();
        Self::new(
            xy.labels_x().to_vec(),
            xy.labels_y().to_vec(),
            default_labels("z", pz.len()),
            probs,
        )
    }

    pub fn shape(&self) -> (usize, usize, usize) {
        (self.labels_x.len(), self.labels_y.len(), self.labels_z.len())
    }

    pub fn labels_x(&self) -> &[String] {
        &self.labels_x
    }

    pub fn labels_y(&self) -> &[String] {
        &self.labels_y
    }

    pub fn labels_z(&self) -> &[String] {
        &self.labels_z
    }

    pub fn probs(&self) -> &[f64] {
        &self.probs
    }

    pub fn prob(&self, i: usize, j: usize, k: usize) -> f64 {
        let (_, ny, nz) = self.shape();
        self.probs[(i * ny + j) * nz + k]
    }

    /// Sums out one axis (0 = X, 1 = Y, 2 = Z) and returns the remaining pair.
    fn sum_out(&self, axis: usize) -> Vec<f64> {
        let (nx, ny, nz) = self.shape();
        let (na, nb, nc) = match axis {
            0 => (ny, nz, nx),
            1 => (nx, nz, ny),
            _ => (nx, ny, nz),
        };
        let mut out = Vec::with_capacity(na * nb);
        for a in 0..na {
            for b in 0..nb {
                let cell = (0..nc).map(|c| match axis {
                    0 => self.prob(c, a, b),
                    1 => self.prob(a, c, b),
                    _ => self.prob(a, b, c),
                });
                out.push(compensated_sum(cell));
            }
        }
        out
    }

    /// The `XY`, `XZ` and `YZ` marginals.
    pub fn pairwise_marginals(&self) -> (JointDistribution, JointDistribution, JointDistribution) {
        let build = |lx: &[String], ly: &[String], probs: Vec<f64>| {
            let rows = probs.chunks(ly.len()).map(<[f64]>::to_vec).collect();
            JointDistribution::new(lx.to_vec(), ly.to_vec(), rows)
                .expect("marginal of a valid triple is a valid joint law")
        };
        (
            build(&self.labels_x, &self.labels_y, self.sum_out(2)),
            build(&self.labels_x, &self.labels_z, self.sum_out(1)),
            build(&self.labels_y, &self.labels_z, self.sum_out(0)),
        )
    }

    pub fn entropy(&self) -> f64 {
        entropy_unchecked(&self.probs)
    }

    pub fn summary(&self) -> Result<TripleSummary> {
        let (xy, xz, yz) = self.pairwise_marginals();
        Ok(TripleSummary {
            xy: summarize(&xy)?,
            xz: summarize(&xz)?,
            yz: summarize(&yz)?,
            h_xyz: self.entropy(),
        })
    }
}
