use serde::Serialize;

use super::Dataset;
use crate::distribution::ZERO_TOL;
use crate::divergence::{evaluate, normalized_information_distance, ComplexitySpec};
use crate::error::{Error, Result};
use crate::properties::redundancy_constants;

/// A covariate pair whose normalized divergence is under the threshold.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RedundantPair {
    pub col_a: String,
    pub col_b: String,
    pub divergence: f64,
    /// Bound on `|NIB(Y, a) - NIB(Y, b)|` implied by the pair's `d_I`, when
    /// a target is given and the constants exist for the observed entropy ratios.
    pub bound: Option<f64>,
}

fn impact_bound(spec: &ComplexitySpec, dataset: &Dataset, y: usize, a: usize, b: usize, d_i: f64) -> Option<f64> {
    let ComplexitySpec::Mean(kind, alpha) = spec else {
        return None;
    };
    let h_y = dataset.entropy(&[y]);
    let (h_a, h_b) = (dataset.entropy(&[a]), dataset.entropy(&[b]));
    if h_y <= ZERO_TOL || h_a.min(h_b) <= ZERO_TOL {
        return None;
    }
    let k = redundancy_constants(*kind, alpha.get(), h_a.min(h_b) / h_y, h_a.max(h_b) / h_y).ok()?;
    let bound = k.normalized_factor() * d_i;
    bound.is_finite().then_some(bound)
}

/// Scores every unordered pair of covariates (all columns but `target`) by the
/// normalized divergence of `spec` and returns those at or below `threshold`,
/// ordered by column index. Pairs whose divergence is undefined are skipped.
pub fn detect_redundant(
    spec: &ComplexitySpec,
    dataset: &Dataset,
    threshold: f64,
    target: Option<&str>,
) -> Result<Vec<RedundantPair>> {
    if !(threshold >= 0.0) {
        return Err(Error::InvalidParameter(format!("threshold must be nonnegative, got {threshold}")));
    }
    let y = target.map(|t| dataset.column_index(t)).transpose()?;
    let cols: Vec<usize> = (0..dataset.n_columns()).filter(|&c| Some(c) != y).collect();
    let mut out = Vec::new();
    for (i, &a) in cols.iter().enumerate() {
        for &b in &cols[i + 1..] {
            let s = dataset.summary(&[a], &[b])?;
            let Ok(r) = evaluate(spec, &s) else { continue };
            if r.nib <= threshold {
                out.push(RedundantPair {
                    col_a: dataset.names()[a].clone(),
                    col_b: dataset.names()[b].clone(),
                    divergence: r.nib,
                    bound: y.and_then(|y| impact_bound(spec, dataset, y, a, b, normalized_information_distance(&s))),
                });
            }
        }
    }
    Ok(out)
}

/// Pairwise divergences between all columns; `None` where the divergence is undefined.
pub fn divergence_matrix(spec: &ComplexitySpec, dataset: &Dataset, normalized: bool) -> Result<Vec<Vec<Option<f64>>>> {
    let n = dataset.n_columns();
    let mut m = vec![vec![None; n]; n];
    for a in 0..n {
        for b in a..n {
            let s = dataset.summary(&[a], &[b])?;
            let v = evaluate(spec, &s).ok().map(|r| if normalized { r.nib } else { r.ib });
            m[a][b] = v;
            m[b][a] = v;
        }
    }
    Ok(m)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn data() -> Dataset {
        let col = |v: &[&str]| v.iter().map(|s| s.to_string()).collect::<Vec<_>>();
        Dataset::from_columns(
            vec!["y".into(), "a".into(), "a_copy".into(), "a_recoded".into(), "noise".into()],
            vec![
                col(&["0", "0", "1", "1", "0", "1", "1", "0"]),
                col(&["p", "q", "r", "p", "q", "r", "p", "p"]),
                col(&["p", "q", "r", "p", "q", "r", "p", "p"]),
                col(&["3", "1", "2", "3", "1", "2", "3", "3"]),
                col(&["u", "u", "v", "v", "u", "v", "u", "v"]),
            ],
        )
        .unwrap()
    }

    #[test]
    fn duplicates_and_recodes_are_reported() {
        let d = data();
        let spec: ComplexitySpec = "S:0.5".parse().unwrap();
        let pairs = detect_redundant(&spec, &d, 1e-9, Some("y")).unwrap();
        let names: Vec<_> = pairs.iter().map(|p| (p.col_a.as_str(), p.col_b.as_str())).collect();
        assert_eq!(names, [("a", "a_copy"), ("a", "a_recoded"), ("a_copy", "a_recoded")]);
        for p in &pairs {
            assert!(p.divergence.abs() < 1e-12);
            assert!(p.bound.unwrap().abs() < 1e-12);
        }
    }

    #[test]
    fn no_target_means_no_bound() {
        let d = data();
        let pairs = detect_redundant(&ComplexitySpec::MaxEntropy, &d, 0.0, None).unwrap();
        assert_eq!(pairs.len(), 3);
        assert!(pairs.iter().all(|p| p.bound.is_none()));
        assert!(detect_redundant(&ComplexitySpec::MaxEntropy, &d, -1.0, None).is_err());
    }

    #[test]
    fn matrix_is_symmetric_with_zero_diagonal() {
        let d = data();
        let m = divergence_matrix(&"R:0.3".parse().unwrap(), &d, false).unwrap();
        for a in 0..m.len() {
            assert!(m[a][a].unwrap().abs() < 1e-12);
            for b in 0..m.len() {
                assert_eq!(m[a][b], m[b][a]);
            }
        }
    }
}
