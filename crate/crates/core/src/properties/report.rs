use std::ops::Range;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::distribution::{InfoSummary, JointDistribution, TripleDistribution};

use super::VIOLATION_TOL;

/// Number of violating inputs kept per check (lowest trial indices first).
pub const MAX_WITNESSES: usize = 5;

/// Whether a check encodes a proved statement or an exploratory question.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum CheckStatus {
    /// Violations indicate a bug (or an error in the statement).
    Proved,
    /// Violations are reported as findings and do not fail a run.
    Finding,
}

/// Input that produced a violation.
#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum WitnessData {
    Joint(JointDistribution),
    Triple(TripleDistribution),
    Summary(InfoSummary),
    Note(String),
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Witness {
    pub trial: u64,
    pub slack: Option<f64>,
    pub data: WitnessData,
}

/// Accumulated outcome of one named check.
///
/// Each recorded trial carries a slack `rhs - lhs`; the trial violates the
/// check when the slack is below `-tolerance` (or is NaN). Reports merge
/// associatively, so trials may be processed in any grouping.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CheckReport {
    pub name: String,
    pub status: CheckStatus,
    pub tolerance: f64,
    pub trials: u64,
    pub violations: u64,
    /// Inputs drawn but discarded because they fell outside the check's domain.
    pub rejected: u64,
    pub min_slack: Option<f64>,
    pub max_slack: Option<f64>,
    pub witnesses: Vec<Witness>,
}

fn fold_opt(a: Option<f64>, b: Option<f64>, f: fn(f64, f64) -> f64) -> Option<f64> {
    match (a, b) {
        (Some(x), Some(y)) => Some(f(x, y)),
        (x, None) => x,
        (None, y) => y,
    }
}

impl CheckReport {
    pub fn new(name: impl Into<String>, status: CheckStatus) -> Self {
        Self {
            name: name.into(),
            status,
            tolerance: VIOLATION_TOL,
            trials: 0,
            violations: 0,
            rejected: 0,
            min_slack: None,
            max_slack: None,
            witnesses: Vec::new(),
        }
    }

    pub fn with_tolerance(mut self, tolerance: f64) -> Self {
        self.tolerance = tolerance;
        self
    }

    /// An empty report with the same identity.
    pub fn blank(&self) -> Self {
        Self::new(self.name.clone(), self.status).with_tolerance(self.tolerance)
    }

    fn add_witness(&mut self, witness: Witness) {
        if self.witnesses.len() < MAX_WITNESSES
            || self.witnesses.last().is_some_and(|w| w.trial > witness.trial)
        {
            let at = self.witnesses.partition_point(|w| w.trial < witness.trial);
            self.witnesses.insert(at, witness);
            self.witnesses.truncate(MAX_WITNESSES);
        }
    }

    /// Records one trial with slack `rhs - lhs`.
    pub fn record(&mut self, trial: u64, slack: f64, witness: impl FnOnce() -> WitnessData) {
        self.trials += 1;
        if !slack.is_nan() {
            self.min_slack = fold_opt(self.min_slack, Some(slack), f64::min);
            self.max_slack = fold_opt(self.max_slack, Some(slack), f64::max);
        }
        if !(slack >= -self.tolerance) {
            self.violations += 1;
            self.add_witness(Witness {
                trial,
                slack: Some(slack),
                data: witness(),
            });
        }
    }

    /// Records one pass/fail trial without a numeric slack.
    pub fn record_outcome(&mut self, trial: u64, ok: bool, witness: impl FnOnce() -> WitnessData) {
        self.trials += 1;
        if !ok {
            self.violations += 1;
            self.add_witness(Witness {
                trial,
                slack: None,
                data: witness(),
            });
        }
    }

    pub fn reject(&mut self) {
        self.rejected += 1;
    }

    pub fn merge(mut self, other: Self) -> Self {
        self.trials += other.trials;
        self.violations += other.violations;
        self.rejected += other.rejected;
        self.min_slack = fold_opt(self.min_slack, other.min_slack, f64::min);
        self.max_slack = fold_opt(self.max_slack, other.max_slack, f64::max);
        for w in other.witnesses {
            self.add_witness(w);
        }
        self
    }

    pub fn passed(&self) -> bool {
        self.violations == 0
    }

    /// Fraction of drawn inputs that were discarded.
    pub fn rejection_rate(&self) -> f64 {
        let drawn = self.trials + self.rejected;
        if drawn == 0 {
            0.0
        } else {
            self.rejected as f64 / drawn as f64
        }
    }

    /// One human-readable line.
    pub fn line(&self) -> String {
        let verdict = match (self.passed(), self.status) {
            (true, _) => "PASS",
            (false, CheckStatus::Proved) => "FAIL",
            (false, CheckStatus::Finding) => "FINDING",
        };
        let slack = self
            .min_slack
            .map_or_else(|| "-".to_string(), |s| format!("{s:.3e}"));
        format!(
            "{verdict} {} trials={} violations={} rejected={} min_slack={slack}",
            self.name, self.trials, self.violations, self.rejected
        )
    }
}

/// Per-trial generator: the same `(seed, trial)` always yields the same stream.
pub fn trial_rng(seed: u64, trial: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(trial);
    rng
}

/// Derives an independent seed for a named suite.
pub fn derive_seed(seed: u64, label: &str) -> u64 {
    // FNV-1a over the label, mixed with the run seed.
    let mut h: u64 = 0xcbf2_9ce4_8422_2325;
    for b in label.bytes() {
        h ^= u64::from(b);
        h = h.wrapping_mul(0x0000_0100_0000_01b3);
    }
    h ^ seed.wrapping_mul(0x9e37_79b9_7f4a_7c15)
}

/// Runs `f` for every trial index in parallel, feeding several reports at once.
pub(crate) fn run_many<F>(templates: &[CheckReport], trials: Range<u64>, f: F) -> Vec<CheckReport>
where
    F: Fn(u64, &mut [CheckReport]) + Sync,
{
    let blank = || templates.iter().map(CheckReport::blank).collect::<Vec<_>>();
    trials
        .into_par_iter()
        .fold(blank, |mut reports, t| {
            f(t, &mut reports);
            reports
        })
        .reduce(blank, |a, b| a.into_iter().zip(b).map(|(x, y)| x.merge(y)).collect())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn note() -> WitnessData {
        WitnessData::Note(String::new())
    }

    #[test]
    fn merge_is_associative_and_keeps_lowest_witnesses() {
        let mut parts = Vec::new();
        for chunk in 0..4u64 {
            let mut r = CheckReport::new("c", CheckStatus::Proved);
            for t in chunk * 10..chunk * 10 + 10 {
                r.record(t, if t % 3 == 0 { -1.0 } else { t as f64 }, note);
            }
            parts.push(r);
        }
        let left = parts[0].clone().merge(parts[1].clone()).merge(parts[2].clone().merge(parts[3].clone()));
        let right = parts[3].clone().merge(parts[2].clone()).merge(parts[1].clone()).merge(parts[0].clone());
        assert_eq!(left, right);
        assert_eq!(left.trials, 40);
        assert_eq!(left.violations, 14);
        assert_eq!(left.min_slack, Some(-1.0));
        assert_eq!(left.max_slack, Some(38.0));
        let kept: Vec<u64> = left.witnesses.iter().map(|w| w.trial).collect();
        assert_eq!(kept, [0, 3, 6, 9, 12]);
    }

    #[test]
    fn nan_slack_is_a_violation() {
        let mut r = CheckReport::new("c", CheckStatus::Proved);
        r.record(0, f64::NAN, note);
        r.record(1, -1e-10, note);
        assert_eq!(r.violations, 1);
        assert_eq!(r.min_slack, Some(-1e-10));
    }

    #[test]
    fn parallel_run_is_deterministic() {
        let templates = [CheckReport::new("a", CheckStatus::Proved), CheckReport::new("b", CheckStatus::Finding)];
        let go = || {
            run_many(&templates, 0..1000, |t, reports| {
                use rand::Rng;
                let x: f64 = trial_rng(7, t).random();
                reports[0].record(t, x - 0.1, note);
                reports[1].record(t, 0.5 - x, note);
            })
        };
        assert_eq!(go(), go());
    }

    #[test]
    fn trial_streams_differ() {
        use rand::Rng;
        let a: u64 = trial_rng(1, 0).random();
        let b: u64 = trial_rng(1, 1).random();
        let c: u64 = trial_rng(2, 0).random();
        assert_ne!(a, b);
        assert_ne!(a, c);
        assert_eq!(a, trial_rng(1, 0).random::<u64>());
    }
}
