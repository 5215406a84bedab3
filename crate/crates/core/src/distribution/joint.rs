use std::collections::HashMap;

use serde::{Deserialize, Serialize};

use super::{compensated_sum, summarize, validate_probs, InfoSummary};
use crate::error::{Error, Result};

/// Exact finite joint law of a pair `(X, Y)` of categorical variables.
///
/// Rows index the categories of `X`, columns those of `Y`. Serialized as
/// `{"labels_x": [...], "labels_y": [...], "probs": [[...], ...]}`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "RawJoint", into = "RawJoint")]
pub struct JointDistribution {
    labels_x: Vec<String>,
    labels_y: Vec<String>,
    probs: Vec<f64>,
}

#[derive(Serialize, Deserialize)]
struct RawJoint {
    labels_x: Vec<String>,
    labels_y: Vec<String>,
    probs: Vec<Vec<f64>>,
}

impl TryFrom<RawJoint> for JointDistribution {
    type Error = Error;

    fn try_from(raw: RawJoint) -> Result<Self> {
        Self::new(raw.labels_x, raw.labels_y, raw.probs)
    }
}

impl From<JointDistribution> for RawJoint {
    fn from(joint: JointDistribution) -> Self {
        let probs = joint.rows_iter().map(|r| r.to_vec()).collect();
        RawJoint {
            labels_x: joint.labels_x,
            labels_y: joint.labels_y,
            probs,
        }
    }
}

pub(crate) fn default_labels(prefix: &str, n: usize) -> Vec<String> {
    (0..n).map(|i| format!("{prefix}{i}")).collect()
}

impl JointDistribution {
    pub fn new(labels_x: Vec<String>, labels_y: Vec<String>, probs: Vec<Vec<f64>>) -> Result<Self> {
        if labels_x.is_empty() {
            return Err(Error::EmptyLabels("labels_x"));
        }
        if labels_y.is_empty() {
            return Err(Error::EmptyLabels("labels_y"));
        }
        if probs.len() != labels_x.len() {
            return Err(Error::Shape(format!(
                "{} rows for {} x-labels",
                probs.len(),
                labels_x.len()
            )));
        }
        let mut flat = Vec::with_capacity(labels_x.len() * labels_y.len());
        for (i, row) in probs.iter().enumerate() {
            if row.len() != labels_y.len() {
                return Err(Error::Shape(format!(
                    "row {i} has {} entries for {} y-labels",
                    row.len(),
                    labels_y.len()
                )));
            }
            flat.extend_from_slice(row);
        }
        let probs = validate_probs(&flat)?;
        Ok(Self {
            labels_x,
            labels_y,
            probs,
        })
    }

    /// Joint law with generated labels `x0, x1, ...` and `y0, y1, ...`.
    pub fn from_probs(probs: Vec<Vec<f64>>) -> Result<Self> {
        let nx = probs.len();
        let ny = probs.first().map_or(0, Vec::len);
        Self::new(default_labels("x", nx), default_labels("y", ny), probs)
    }

    /// Joint law from a flat row-major buffer.
    pub fn from_flat(rows: usize, cols: usize, probs: Vec<f64>) -> Result<Self> {
        if rows == 0 || cols == 0 || probs.len() != rows * cols {
            return Err(Error::Shape(format!(
                "{} entries for a {rows}x{cols} table",
                probs.len()
            )));
        }
        let probs = validate_probs(&probs)?;
        Ok(Self {
            labels_x: default_labels("x", rows),
            labels_y: default_labels("y", cols),
            probs,
        })
    }

    /// Product law of two marginals.
    pub fn independent(px: &[f64], py: &[f64]) -> Result<Self> {
        let px = validate_probs(px)?;
        let py = validate_probs(py)?;
        let flat = px
            .iter()
            .flat_map(|&a| py.iter().map(move |&b| a * b))
            .collect();
        Self::from_flat(px.len(), py.len(), flat)
    }

    /// Plug-in (maximum-likelihood) estimate; categories are ordered by first appearance.
    pub fn from_samples(data: &SamplePairs) -> Self {
        let mut xs: HashMap<&str, usize> = HashMap::new();
        let mut ys: HashMap<&str, usize> = HashMap::new();
        let mut labels_x = Vec::new();
        let mut labels_y = Vec::new();
        let mut coded = Vec::with_capacity(data.len());
        for (x, y) in data.rows() {
            let i = *xs.entry(x.as_str()).or_insert_with(|| {
                labels_x.push(x.clone());
                labels_x.len() - 1
            });
            let j = *ys.entry(y.as_str()).or_insert_with(|| {
                labels_y.push(y.clone());
                labels_y.len() - 1
            });
            coded.push((i, j));
        }
        let ny = labels_y.len();
        let mut counts = vec![0u64; labels_x.len() * ny];
        for (i, j) in coded {
            counts[i * ny + j] += 1;
        }
        let n = data.len() as f64;
        let probs = counts.into_iter().map(|c| c as f64 / n).collect();
        Self {
            labels_x,
            labels_y,
            probs,
        }
    }

    pub fn rows(&self) -> usize {
        self.labels_x.len()
    }

    pub fn cols(&self) -> usize {
        self.labels_y.len()
    }

    pub fn labels_x(&self) -> &[String] {
        &self.labels_x
    }

    pub fn labels_y(&self) -> &[String] {
        &self.labels_y
    }

    /// Flat row-major probability buffer.
    pub fn probs(&self) -> &[f64] {
        &self.probs
    }

    pub fn prob(&self, i: usize, j: usize) -> f64 {
        self.probs[i * self.cols() + j]
    }

    pub fn rows_iter(&self) -> impl Iterator<Item = &[f64]> {
        self.probs.chunks(self.cols())
    }

    /// Row sums: the law of `X`.
    pub fn marginal_x(&self) -> Vec<f64> {
        self.rows_iter()
            .map(|row| compensated_sum(row.iter().copied()))
            .collect()
    }

    /// Column sums: the law of `Y`.
    pub fn marginal_y(&self) -> Vec<f64> {
        (0..self.cols())
            .map(|j| compensated_sum((0..self.rows()).map(|i| self.prob(i, j))))
            .collect()
    }

    /// The law of `(Y, X)`.
    pub fn transposed(&self) -> Self {
        let mut probs = Vec::with_capacity(self.probs.len());
        for j in 0..self.cols() {
            for i in 0..self.rows() {
                probs.push(self.prob(i, j));
            }
        }
        Self {
            labels_x: self.labels_y.clone(),
            labels_y: self.labels_x.clone(),
            probs,
        }
    }

    pub fn summary(&self) -> Result<InfoSummary> {
        summarize(self)
    }
}

/// Observed `(x, y)` category pairs, the input of the plug-in estimator.
#[derive(Debug, Clone, PartialEq)]
pub struct SamplePairs {
    rows: Vec<(String, String)>,
}

impl SamplePairs {
    pub fn new(rows: Vec<(String, String)>) -> Result<Self> {
        if rows.is_empty() {
            return Err(Error::EmptySample);
        }
        if let Some(row) = rows.iter().position(|(x, y)| x.is_empty() || y.is_empty()) {
            return Err(Error::EmptyCategory { row });
        }
        Ok(Self { rows })
    }

    pub fn rows(&self) -> &[(String, String)] {
        &self.rows
    }

    pub fn len(&self) -> usize {
        self.rows.len()
    }

    pub fn is_empty(&self) -> bool {
        self.rows.is_empty()
    }
}

impl<A: Into<String>, B: Into<String>> FromIterator<(A, B)> for SamplePairs {
    /// Collects pairs without validation; prefer [`SamplePairs::new`] for untrusted input.
    fn from_iter<T: IntoIterator<Item = (A, B)>>(iter: T) -> Self {
        Self {
            rows: iter.into_iter().map(|(a, b)| (a.into(), b.into())).collect(),
        }
    }
}
