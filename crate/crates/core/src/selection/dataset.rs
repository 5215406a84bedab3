use std::collections::{HashMap, HashSet};
use std::io::Read;

use crate::distribution::{entropy_unchecked, InfoSummary, JointDistribution};
use crate::error::{Error, Result};

/// Rectangular table of categorical observations.
///
/// Each column is dictionary-encoded; codes follow first appearance, so every
/// derived quantity is independent of hash ordering.
#[derive(Debug, Clone, PartialEq)]
pub struct Dataset {
    names: Vec<String>,
    dictionaries: Vec<Vec<String>>,
    codes: Vec<Vec<u32>>,
    rows: usize,
}

/// Codes of a (possibly joined) column, numbered by first appearance.
struct Coded {
    codes: Vec<u32>,
    counts: Vec<u64>,
}

fn encode<K: std::hash::Hash + Eq>(keys: impl Iterator<Item = K>) -> Coded {
    let mut index: HashMap<K, u32> = HashMap::new();
    let mut codes = Vec::new();
    let mut counts: Vec<u64> = Vec::new();
    for key in keys {
        let next = counts.len() as u32;
        let c = *index.entry(key).or_insert(next);
        if c == next {
            counts.push(0);
        }
        counts[c as usize] += 1;
        codes.push(c);
    }
    Coded { codes, counts }
}

/// Plug-in entropy of a list of counts summing to `n`.
fn count_entropy(counts: &[u64], n: usize) -> f64 {
    let n = n as f64;
    let probs: Vec<f64> = counts.iter().map(|&c| c as f64 / n).collect();
    entropy_unchecked(&probs)
}

impl Dataset {
    /// Builds a dataset from a header and row-major values.
    pub fn new(names: Vec<String>, rows: Vec<Vec<String>>) -> Result<Self> {
        Self::check_names(&names)?;
        if rows.is_empty() {
            return Err(Error::InvalidDataset("no data rows".into()));
        }
        let mut columns = vec![Vec::with_capacity(rows.len()); names.len()];
        for (r, row) in rows.into_iter().enumerate() {
            if row.len() != names.len() {
                return Err(Error::InvalidDataset(format!(
                    "row {r} has {} values for {} columns",
                    row.len(),
                    names.len()
                )));
            }
            for (col, v) in columns.iter_mut().zip(row) {
                col.push(v);
            }
        }
        Self::from_columns(names, columns)
    }

    /// Builds a dataset from column-major values.
    pub fn from_columns(names: Vec<String>, columns: Vec<Vec<String>>) -> Result<Self> {
        Self::check_names(&names)?;
        if columns.len() != names.len() {
            return Err(Error::InvalidDataset(format!(
                "{} columns for {} names",
                columns.len(),
                names.len()
            )));
        }
        let rows = columns[0].len();
        if rows == 0 {
            return Err(Error::InvalidDataset("no data rows".into()));
        }
        let mut dictionaries = Vec::with_capacity(names.len());
        let mut codes = Vec::with_capacity(names.len());
        for (name, col) in names.iter().zip(&columns) {
            if col.len() != rows {
                return Err(Error::InvalidDataset(format!(
                    "column {name:?} has {} values, expected {rows}",
                    col.len()
                )));
            }
            let coded = encode(col.iter().map(String::as_str));
            let mut dict = vec![String::new(); coded.counts.len()];
            for (v, &c) in col.iter().zip(&coded.codes) {
                if dict[c as usize].is_empty() {
                    dict[c as usize] = v.clone();
                }
            }
            dictionaries.push(dict);
            codes.push(coded.codes);
        }
        Ok(Self {
            names,
            dictionaries,
            codes,
            rows,
        })
    }

    /// Reads CSV with a header row. Values are trimmed; ragged rows and empty
    /// values are rejected with their line number.
    pub fn from_csv<R: Read>(reader: R) -> Result<Self> {
        let mut rdr = csv::ReaderBuilder::new()
            .has_headers(true)
            .flexible(true)
            .trim(csv::Trim::All)
            .from_reader(reader);
        let names: Vec<String> = rdr
            .headers()
            .map_err(|e| Error::Csv(e.to_string()))?
            .iter()
            .map(str::to_string)
            .collect();
        if names.iter().all(String::is_empty) {
            return Err(Error::Csv("line 1: missing header row".into()));
        }
        Self::check_names(&names).map_err(|e| Error::Csv(format!("line 1: {e}")))?;
        let mut columns = vec![Vec::new(); names.len()];
        for record in rdr.records() {
            let record = record.map_err(|e| Error::Csv(e.to_string()))?;
            let line = record.position().map_or(0, |p| p.line());
            if record.len() != names.len() {
                return Err(Error::Csv(format!(
                    "line {line}: expected {} fields, found {}",
                    names.len(),
                    record.len()
                )));
            }
            for ((col, v), name) in columns.iter_mut().zip(record.iter()).zip(&names) {
                if v.is_empty() {
                    return Err(Error::Csv(format!("line {line}: empty value in column {name:?}")));
                }
                col.push(v.to_string());
            }
        }
        if columns[0].is_empty() {
            return Err(Error::Csv("no data rows after the header".into()));
        }
        Self::from_columns(names, columns)
    }

    fn check_names(names: &[String]) -> Result<()> {
        if names.is_empty() {
            return Err(Error::InvalidDataset("no columns".into()));
        }
        let mut seen = HashSet::new();
        for name in names {
            if name.is_empty() {
                return Err(Error::InvalidDataset("empty column name".into()));
            }
            if !seen.insert(name.as_str()) {
                return Err(Error::InvalidDataset(format!("duplicate column name {name:?}")));
            }
        }
        Ok(())
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    pub fn n_rows(&self) -> usize {
        self.rows
    }

    pub fn n_columns(&self) -> usize {
        self.names.len()
    }

    pub fn column_index(&self, name: &str) -> Result<usize> {
        self.names
            .iter()
            .position(|n| n == name)
            .ok_or_else(|| Error::UnknownColumn(name.to_string()))
    }

    /// Distinct values of a column in order of first appearance.
    pub fn categories(&self, column: usize) -> &[String] {
        &self.dictionaries[column]
    }

    /// The value in `row` of `column`.
    pub fn value(&self, row: usize, column: usize) -> &str {
        &self.dictionaries[column][self.codes[column][row] as usize]
    }

    fn product(&self, columns: &[usize]) -> Coded {
        match columns {
            [] => Coded {
                codes: vec![0; self.rows],
                counts: vec![self.rows as u64],
            },
            [c] => {
                let mut counts = vec![0u64; self.dictionaries[*c].len()];
                for &v in &self.codes[*c] {
                    counts[v as usize] += 1;
                }
                Coded {
                    codes: self.codes[*c].clone(),
                    counts,
                }
            }
            _ => encode((0..self.rows).map(|r| columns.iter().map(|&c| self.codes[c][r]).collect::<Vec<_>>())),
        }
    }

    /// Plug-in entropy of the joined columns (0 for the empty set).
    pub fn entropy(&self, columns: &[usize]) -> f64 {
        count_entropy(&self.product(columns).counts, self.rows)
    }

    /// Plug-in summary of the pair (joined `a`, joined `b`).
    pub fn summary(&self, a: &[usize], b: &[usize]) -> Result<InfoSummary> {
        let pa = self.product(a);
        let pb = self.product(b);
        let pair = encode(pa.codes.iter().zip(&pb.codes));
        InfoSummary::from_entropies(
            count_entropy(&pa.counts, self.rows),
            count_entropy(&pb.counts, self.rows),
            count_entropy(&pair.counts, self.rows),
        )
    }

    /// Plug-in joint table of (joined `a`, joined `b`); joined labels are `|`-separated.
    pub fn joint(&self, a: &[usize], b: &[usize]) -> Result<JointDistribution> {
        let pa = self.product(a);
        let pb = self.product(b);
        let labels = |cols: &[usize], p: &Coded| {
            let mut out = vec![String::new(); p.counts.len()];
            let mut done = vec![false; p.counts.len()];
            for (r, &c) in p.codes.iter().enumerate() {
                if !done[c as usize] {
                    done[c as usize] = true;
                    out[c as usize] = if cols.is_empty() {
                        "()".to_string()
                    } else {
                        cols.iter().map(|&k| self.value(r, k)).collect::<Vec<_>>().join("|")
                    };
                }
            }
            out
        };
        let (na, nb) = (pa.counts.len(), pb.counts.len());
        let mut counts = vec![0u64; na * nb];
        for (&i, &j) in pa.codes.iter().zip(&pb.codes) {
            counts[i as usize * nb + j as usize] += 1;
        }
        let n = self.rows as f64;
        let probs = counts
            .chunks(nb)
            .map(|row| row.iter().map(|&c| c as f64 / n).collect())
            .collect();
        JointDistribution::new(labels(a, &pa), labels(b, &pb), probs)
    }

    /// Whether the value of `coarse` is determined by the value of `fine` on every row.
    pub fn is_function_of(&self, coarse: usize, fine: usize) -> bool {
        let mut image: Vec<Option<u32>> = vec![None; self.dictionaries[fine].len()];
        for (&f, &c) in self.codes[fine].iter().zip(&self.codes[coarse]) {
            match image[f as usize] {
                None => image[f as usize] = Some(c),
                Some(prev) if prev != c => return false,
                Some(_) => {}
            }
        }
        true
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::LN_2;

    fn csv(text: &str) -> Result<Dataset> {
        Dataset::from_csv(text.as_bytes())
    }

    #[test]
    fn reads_csv() {
        let d = csv("a,b\nx, 1\ny,2\nx,1\n").unwrap();
        assert_eq!(d.names(), ["a", "b"]);
        assert_eq!(d.n_rows(), 3);
        assert_eq!(d.categories(1), ["1", "2"]);
        assert_eq!(d.value(1, 0), "y");
    }

    #[test]
    fn ragged_row_reports_line() {
        let err = csv("a,b\nx,1\ny\n").unwrap_err();
        assert!(matches!(&err, Error::Csv(m) if m.starts_with("line 3:")), "{err}");
        let err = csv("a,b\nx,1\ny,\n").unwrap_err();
        assert!(matches!(&err, Error::Csv(m) if m.starts_with("line 3:")), "{err}");
    }

    #[test]
    fn rejects_bad_shapes() {
        assert!(csv("a,b\n").is_err());
        assert!(csv("").is_err());
        assert!(csv("a,a\n1,2\n").is_err());
        assert!(Dataset::new(vec!["a".into()], vec![vec!["1".into(), "2".into()]]).is_err());
        assert!(Dataset::new(vec!["a".into()], vec![]).is_err());
    }

    #[test]
    fn entropies_of_joined_columns() {
        let d = csv("a,b,y\n0,0,0\n0,1,1\n1,0,1\n1,1,0\n").unwrap();
        assert_eq!(d.entropy(&[]), 0.0);
        assert!((d.entropy(&[0]) - LN_2).abs() < 1e-15);
        assert!((d.entropy(&[0, 1]) - 2.0 * LN_2).abs() < 1e-15);
        let s = d.summary(&[2], &[0, 1]).unwrap();
        assert!((s.mi - LN_2).abs() < 1e-15);
        assert!(d.summary(&[2], &[0]).unwrap().mi < 1e-15);
    }

    #[test]
    fn joint_matches_summary() {
        let d = csv("a,b\nx,1\ny,2\nx,1\nz,2\n").unwrap();
        let j = d.joint(&[0], &[1]).unwrap();
        assert_eq!(j.labels_x(), ["x", "y", "z"]);
        let s = d.summary(&[0], &[1]).unwrap();
        let t = j.summary().unwrap();
        assert!((s.h_joint - t.h_joint).abs() < 1e-15 && (s.mi - t.mi).abs() < 1e-15);
    }

    #[test]
    fn functional_dependency() {
        let d = csv("fine,coarse\n1,a\n2,a\n3,b\n1,a\n").unwrap();
        assert!(d.is_function_of(1, 0));
        assert!(!d.is_function_of(0, 1));
    }
}
