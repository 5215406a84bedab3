use std::fs::File;
use std::io::{self, Read};
use std::path::Path;

use anyhow::{bail, Context, Result};
use infodiv::{Dataset, InfoSummary, JointDistribution, TripleDistribution};

use crate::Format;

/// Named variables with the plug-in or exact summary of every pair.
pub enum Source {
    Table(Dataset),
    Pair(JointDistribution),
    Triple(TripleDistribution),
}

fn read_all(path: &Path) -> Result<Box<dyn Read>> {
    if path == Path::new("-") {
        return Ok(Box::new(io::stdin()));
    }
    let f = File::open(path).with_context(|| format!("cannot open {}", path.display()))?;
    Ok(Box::new(f))
}

pub fn load(path: &Path, format: Format) -> Result<Source> {
    let reader = read_all(path)?;
    let ctx = || format!("cannot read {}", path.display());
    Ok(match format {
        Format::Csv => Source::Table(Dataset::from_csv(reader).with_context(ctx)?),
        Format::JointJson => Source::Pair(serde_json::from_reader(reader).with_context(ctx)?),
        Format::TripleJson => Source::Triple(serde_json::from_reader(reader).with_context(ctx)?),
    })
}

impl Source {
    pub fn names(&self) -> Vec<String> {
        match self {
            Source::Table(d) => d.names().to_vec(),
            Source::Pair(_) => vec!["X".into(), "Y".into()],
            Source::Triple(_) => vec!["X".into(), "Y".into(), "Z".into()],
        }
    }

    /// Summary of every ordered pair, diagonal included.
    pub fn summaries(&self) -> Result<Vec<Vec<InfoSummary>>> {
        let n = self.names().len();
        let mut out = Vec::with_capacity(n);
        match self {
            Source::Table(d) => {
                for a in 0..n {
                    out.push((0..n).map(|b| d.summary(&[a], &[b])).collect::<infodiv::Result<Vec<_>>>()?);
                }
            }
            Source::Pair(j) => {
                let s = j.summary()?;
                let t = s.swapped();
                out = vec![vec![itself(s.h_x)?, s], vec![t, itself(s.h_y)?]];
            }
            Source::Triple(t) => {
                let s = t.summary()?;
                let (xy, xz, yz) = (s.xy, s.xz, s.yz);
                out = vec![
                    vec![itself(xy.h_x)?, xy, xz],
                    vec![xy.swapped(), itself(xy.h_y)?, yz],
                    vec![xz.swapped(), yz.swapped(), itself(xz.h_y)?],
                ];
            }
        }
        Ok(out)
    }

    pub fn dataset(&self, command: &str) -> Result<&Dataset> {
        match self {
            Source::Table(d) => Ok(d),
            _ => bail!("{command} needs row data (--format csv)"),
        }
    }
}

/// Summary of a variable paired with itself.
fn itself(h: f64) -> Result<InfoSummary> {
    Ok(InfoSummary::from_entropies(h, h, h)?)
}
