use std::fmt::Write as _;

use anyhow::Result;
use infodiv::properties::harness::VerifyReport;
use infodiv::selection::{RedundantPair, SelectionTrace};
use infodiv::{ComplexitySpec, InfoSummary};
use serde::Serialize;
use serde_json::json;

use crate::{Base, OutputFormat};

pub struct Render {
    base: Base,
    format: OutputFormat,
}

const SUMMARY_FIELDS: [&str; 6] = ["h_x", "h_y", "h_joint", "h_x_given_y", "h_y_given_x", "mi"];

fn fields(s: &InfoSummary) -> [f64; 6] {
    [s.h_x, s.h_y, s.h_joint, s.h_x_given_y, s.h_y_given_x, s.mi]
}

fn to_json<T: Serialize>(value: &T) -> Result<String> {
    let mut text = serde_json::to_string_pretty(value)?;
    text.push('\n');
    Ok(text)
}

fn to_csv<I, R>(header: &[&str], rows: I) -> Result<String>
where
    I: IntoIterator<Item = R>,
    R: IntoIterator,
    R::Item: AsRef<[u8]>,
{
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record(header)?;
    for row in rows {
        w.write_record(row)?;
    }
    Ok(String::from_utf8(w.into_inner()?)?)
}

fn opt(v: Option<f64>) -> String {
    v.map_or_else(String::new, |v| v.to_string())
}

fn fixed(v: Option<f64>) -> String {
    v.map_or_else(|| "NA".to_string(), |v| format!("{v:.6}"))
}

impl Render {
    pub fn new(base: Base, format: OutputFormat) -> Self {
        Self { base, format }
    }

    fn base_name(&self) -> &'static str {
        match self.base {
            Base::E => "e",
            Base::Two => "2",
            Base::Ten => "10",
        }
    }

    /// Divergence in display units: raw values are converted, normalized ones are not.
    fn divergence(&self, v: f64, normalized: bool) -> f64 {
        if normalized {
            v
        } else {
            self.base.convert(v)
        }
    }

    pub fn entropy(&self, names: &[String], summaries: &[Vec<InfoSummary>]) -> String {
        let n = names.len();
        let conv = |s: &InfoSummary| fields(s).map(|v| self.base.convert(v));
        let pairs = || (0..n).flat_map(|a| (a + 1..n).map(move |b| (a, b)));
        match self.format {
            OutputFormat::Json => {
                let columns: Vec<_> = (0..n)
                    .map(|a| json!({"name": names[a], "entropy": self.base.convert(summaries[a][a].h_x)}))
                    .collect();
                let pairs: Vec<_> = pairs()
                    .map(|(a, b)| {
                        let mut obj = serde_json::Map::new();
                        obj.insert("x".into(), json!(names[a]));
                        obj.insert("y".into(), json!(names[b]));
                        for (k, v) in SUMMARY_FIELDS.iter().zip(conv(&summaries[a][b])) {
                            obj.insert((*k).into(), json!(v));
                        }
                        serde_json::Value::Object(obj)
                    })
                    .collect();
                to_json(&json!({
                    "base": self.base_name(),
                    "unit": self.base.unit(),
                    "columns": columns,
                    "pairs": pairs,
                }))
                .expect("plain values serialize")
            }
            OutputFormat::Csv => {
                let mut header = vec!["x", "y"];
                header.extend(SUMMARY_FIELDS);
                let rows = (0..n).flat_map(|a| (a..n).map(move |b| (a, b))).map(|(a, b)| {
                    let mut row = vec![names[a].clone(), names[b].clone()];
                    row.extend(conv(&summaries[a][b]).map(|v| v.to_string()));
                    row
                });
                to_csv(&header, rows).expect("in-memory csv")
            }
            OutputFormat::Text => {
                let mut out = String::new();
                let _ = writeln!(out, "entropies in {}", self.base.unit());
                let width = names.iter().map(String::len).max().unwrap_or(0).max(6);
                for a in 0..n {
                    let _ = writeln!(out, "{:<width$}  {:.6}", names[a], self.base.convert(summaries[a][a].h_x));
                }
                if n > 1 {
                    let _ = writeln!(out);
                    let _ = writeln!(out, "{:<width$}  {:<width$}  {}", "x", "y", SUMMARY_FIELDS.map(|f| format!("{f:>13}")).join(""));
                    for (a, b) in pairs() {
                        let vals = conv(&summaries[a][b]).map(|v| format!("{v:>13.6}")).join("");
                        let _ = writeln!(out, "{:<width$}  {:<width$}  {vals}", names[a], names[b]);
                    }
                }
                out
            }
        }
    }

    pub fn matrix(&self, names: &[String], m: &[Vec<Option<f64>>], spec: &ComplexitySpec, normalized: bool) -> String {
        match self.format {
            OutputFormat::Json => to_json(&json!({
                "spec": spec.to_string(),
                "normalized": normalized,
                "base": self.base_name(),
                "columns": names,
                "matrix": m,
            }))
            .expect("plain values serialize"),
            OutputFormat::Csv => {
                let mut header = vec![""];
                header.extend(names.iter().map(String::as_str));
                let rows = names.iter().zip(m).map(|(name, row)| {
                    let mut r = vec![name.clone()];
                    r.extend(row.iter().map(|&v| opt(v)));
                    r
                });
                to_csv(&header, rows).expect("in-memory csv")
            }
            OutputFormat::Text => {
                let width = names.iter().map(String::len).max().unwrap_or(0).max(9);
                let mut out = String::new();
                let kind = if normalized { "normalized divergence" } else { self.base.unit() };
                let _ = writeln!(out, "{spec} ({kind})");
                let _ = write!(out, "{:<width$}", "");
                for name in names {
                    let _ = write!(out, "  {name:>width$}");
                }
                let _ = writeln!(out);
                for (name, row) in names.iter().zip(m) {
                    let _ = write!(out, "{name:<width$}");
                    for &v in row {
                        let _ = write!(out, "  {:>width$}", fixed(v));
                    }
                    let _ = writeln!(out);
                }
                out
            }
        }
    }

    pub fn selection(&self, spec: &ComplexitySpec, trace: &SelectionTrace) -> Result<String> {
        let conv = |v: f64| self.divergence(v, trace.normalized);
        let reason = serde_json::to_value(trace.stopping_reason)?;
        let reason = reason.as_str().unwrap_or_default().to_string();
        Ok(match self.format {
            OutputFormat::Json => {
                let steps: Vec<_> = trace
                    .steps
                    .iter()
                    .map(|s| json!({"column": s.column, "divergence": conv(s.divergence), "accepted": s.accepted}))
                    .collect();
                to_json(&json!({
                    "spec": spec.to_string(),
                    "target": trace.target,
                    "normalized": trace.normalized,
                    "base": self.base_name(),
                    "baseline": trace.baseline.map(conv),
                    "selected": trace.selected,
                    "steps": steps,
                    "stopping_reason": reason,
                    "final_divergence": trace.final_divergence().map(conv),
                }))?
            }
            OutputFormat::Csv => to_csv(
                &["step", "column", "divergence", "accepted"],
                trace.steps.iter().enumerate().map(|(i, s)| {
                    [(i + 1).to_string(), s.column.clone(), conv(s.divergence).to_string(), s.accepted.to_string()]
                }),
            )?,
            OutputFormat::Text => {
                let mut out = String::new();
                let _ = writeln!(out, "target {} with {spec}", trace.target);
                let _ = writeln!(out, "baseline {}", fixed(trace.baseline.map(conv)));
                for (i, s) in trace.steps.iter().enumerate() {
                    let mark = if s.accepted { "+" } else { "x" };
                    let _ = writeln!(out, "{:>3} {mark} {:<20} {:.6}", i + 1, s.column, conv(s.divergence));
                }
                let _ = writeln!(out, "selected [{}]", trace.selected.join(", "));
                let _ = writeln!(out, "stopped: {reason}");
                out
            }
        })
    }

    /// Redundancy divergences are normalized, hence never converted.
    pub fn redundancy(&self, spec: &ComplexitySpec, pairs: &[RedundantPair]) -> Result<String> {
        Ok(match self.format {
            OutputFormat::Json => to_json(&json!({"spec": spec.to_string(), "pairs": pairs}))?,
            OutputFormat::Csv => to_csv(
                &["col_a", "col_b", "divergence", "bound"],
                pairs
                    .iter()
                    .map(|p| [p.col_a.clone(), p.col_b.clone(), p.divergence.to_string(), opt(p.bound)]),
            )?,
            OutputFormat::Text => {
                let mut out = String::new();
                for p in pairs {
                    let _ = writeln!(out, "{} ~ {}  {:.6}  bound {}", p.col_a, p.col_b, p.divergence, fixed(p.bound));
                }
                let _ = writeln!(out, "{} redundant pair(s) under {spec}", pairs.len());
                out
            }
        })
    }

    pub fn verify(&self, report: &VerifyReport) -> Result<String> {
        Ok(match self.format {
            OutputFormat::Json => to_json(report)?,
            OutputFormat::Csv => to_csv(
                &["name", "status", "trials", "violations", "rejected", "min_slack", "max_slack"],
                report.checks.iter().map(|c| {
                    let status = serde_json::to_value(c.status).ok();
                    [
                        c.name.clone(),
                        status.as_ref().and_then(|s| s.as_str()).unwrap_or_default().to_string(),
                        c.trials.to_string(),
                        c.violations.to_string(),
                        c.rejected.to_string(),
                        opt(c.min_slack),
                        opt(c.max_slack),
                    ]
                }),
            )?,
            OutputFormat::Text => {
                let mut out = String::new();
                for c in &report.checks {
                    let _ = writeln!(out, "{}", c.line());
                }
                let _ = writeln!(
                    out,
                    "seed={} trials={} checks={} proved_failures={} findings={}",
                    report.seed,
                    report.trials,
                    report.checks.len(),
                    report.proved_failures,
                    report.findings
                );
                out
            }
        })
    }
}
