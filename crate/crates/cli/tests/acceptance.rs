//! Acceptance suite: one PASS/FAIL line per criterion, nonzero exit if any fails.

use std::path::Path;
use std::process::Command;
use std::time::Instant;

use infodiv::divergence::complexity;
use infodiv::properties::harness::{divergence_suite, identity_suite, p3bis_suite, redundancy_suite, triangle_suite, witness_suite};
use infodiv::properties::{
    arithmetic_condition_witness, check_complexity_triangle_condition, divergence_value, geometric_condition_witness,
    harmonic_condition_witness, sample_joint, sample_triple, trial_rng, CheckReport, CheckStatus,
};
use infodiv::selection::{detect_redundant, forward_select, SelectOptions, StoppingReason};
use infodiv::{ComplexitySpec, Dataset, GMeanKind, InfoSummary, JointDistribution, SamplePairs, TripleDistribution};
use rand::Rng;

const SEED: u64 = 20_240_601;

struct Outcome {
    pass: bool,
    detail: String,
}

fn outcome(pass: bool, detail: impl Into<String>) -> Outcome {
    Outcome {
        pass,
        detail: detail.into(),
    }
}

/// Every proved report passed; returns the failing names otherwise.
fn proved_failures<'a>(reports: impl IntoIterator<Item = &'a CheckReport>) -> Vec<String> {
    reports
        .into_iter()
        .filter(|r| r.status == CheckStatus::Proved && !r.passed())
        .map(CheckReport::line)
        .collect()
}

fn naive_entropy(p: impl IntoIterator<Item = f64>) -> f64 {
    p.into_iter().filter(|&v| v > 0.0).map(|v| -v * v.ln()).sum()
}

/// Entropies of (X, Y, Z, XY, XZ, YZ) summed straight from the cells.
fn triple_entropies(t: &TripleDistribution) -> [f64; 6] {
    let (nx, ny, nz) = t.shape();
    let mut m = [vec![0.0; nx], vec![0.0; ny], vec![0.0; nz], vec![0.0; nx * ny], vec![0.0; nx * nz], vec![0.0; ny * nz]];
    for i in 0..nx {
        for j in 0..ny {
            for k in 0..nz {
                let p = t.prob(i, j, k);
                m[0][i] += p;
                m[1][j] += p;
                m[2][k] += p;
                m[3][i * ny + j] += p;
                m[4][i * nz + k] += p;
                m[5][j * nz + k] += p;
            }
        }
    }
    m.map(naive_entropy)
}

/// `(D_E, D_I, d_E, d_I)` of a pair from its two entropies and joint entropy.
fn distance_oracle(ha: f64, hb: f64, hab: f64) -> [f64; 4] {
    let de = 2.0 * hab - ha - hb;
    let di = hab - ha.min(hb);
    let ratio = |n: f64, d: f64| if d > 1e-12 { n / d } else { 0.0 };
    [de, di, ratio(de, hab), ratio(di, ha.max(hb))]
}

fn identities() -> Outcome {
    let start = Instant::now();
    let reports = identity_suite(SEED, 10_000);
    let elapsed = start.elapsed().as_secs_f64();
    let fails = proved_failures(&reports);
    let trials = reports.iter().map(|r| r.trials).min().unwrap_or(0);
    outcome(
        fails.is_empty() && trials >= 10_000 && elapsed < 10.0,
        format!("{trials} tables per identity, {elapsed:.2}s, failures {fails:?}"),
    )
}

fn metrics() -> Outcome {
    let specs = [ComplexitySpec::Joint, ComplexitySpec::MaxEntropy];
    let mut violations = 0u64;
    let mut checked = 0u64;
    for (shape, count) in [((2, 2, 2), 10_000u64), ((3, 3, 3), 1_000)] {
        for i in 0..count {
            let t = sample_triple(SEED, i, shape).unwrap();
            let [hx, hy, hz, hxy, hxz, hyz] = triple_entropies(&t);
            let xy = distance_oracle(hx, hy, hxy);
            let xz = distance_oracle(hx, hz, hxz);
            let zy = distance_oracle(hz, hy, hyz);
            for k in 0..4 {
                if xy[k] > xz[k] + zy[k] + 1e-9 {
                    violations += 1;
                }
            }
            let s = t.summary().unwrap();
            for (spec, k_raw) in specs.iter().zip([0, 1]) {
                for (normalized, k) in [(false, k_raw), (true, k_raw + 2)] {
                    let a = divergence_value(spec, &s.xy, normalized).unwrap();
                    let b = divergence_value(spec, &s.xy.swapped(), normalized).unwrap();
                    if (a - b).abs() > 1e-9 || (a - xy[k]).abs() > 1e-9 {
                        violations += 1;
                    }
                }
            }
            // A relabeled copy of X is equivalent to X; X and Y are not.
            let copy = InfoSummary::from_entropies(hx, hx, hx).unwrap();
            for spec in &specs {
                for normalized in [false, true] {
                    if divergence_value(spec, &copy, normalized).unwrap().abs() > 1e-9 {
                        violations += 1;
                    }
                    let d = divergence_value(spec, &s.xy, normalized).unwrap();
                    if (d <= 1e-9) != s.xy.is_equivalent() {
                        violations += 1;
                    }
                }
            }
            checked += 1;
        }
    }
    let mut reports = triangle_suite(SEED, (2, 2, 2), 10_000);
    reports.extend(triangle_suite(SEED, (3, 3, 3), 1_000));
    reports.extend(divergence_suite(SEED, 10_000));
    let wanted: Vec<&CheckReport> = reports
        .iter()
        .filter(|r| {
            r.name.starts_with("metric.E.")
                || r.name.starts_with("metric.I.")
                || r.name.starts_with("metric.symmetry")
                || r.name == "divergence.symmetry"
                || r.name == "divergence.zero_iff_equivalent"
        })
        .collect();
    let fails = proved_failures(wanted.iter().copied());
    outcome(
        violations == 0 && fails.is_empty() && wanted.len() == 12,
        format!("{checked} triples, oracle violations {violations}, suite checks {} failures {fails:?}", wanted.len()),
    )
}

fn ordering() -> Outcome {
    let shapes = [(2, 2), (2, 3), (3, 3), (3, 4), (4, 4), (5, 5)];
    let mut violations = 0u64;
    for i in 0..10_000u64 {
        let s = sample_joint(SEED, i, shapes[(i % 6) as usize]).unwrap().summary().unwrap();
        for a in 1..=9 {
            let a = f64::from(a) / 10.0;
            let c = |kind| complexity(&ComplexitySpec::mean(kind, a).unwrap(), &s).unwrap();
            let chain = [
                c(GMeanKind::Harmonic),
                c(GMeanKind::Geometric),
                c(GMeanKind::Root),
                c(GMeanKind::Arithmetic),
                s.max_entropy(),
                s.h_joint,
            ];
            violations += chain.windows(2).filter(|w| w[0] > w[1] + 1e-12).count() as u64;
        }
    }
    let suite = divergence_suite(SEED, 10_000);
    let chain = suite.iter().find(|r| r.name == "ordering.chain").unwrap();
    outcome(
        violations == 0 && chain.passed(),
        format!("90000 summary-weight pairs, violations {violations}; {}", chain.line()),
    )
}

fn sandwich() -> Outcome {
    let (reports, stats) = p3bis_suite(SEED, 1_000);
    let mut missing = Vec::new();
    for letter in ["S", "R", "P", "D"] {
        for a in ["0.1", "0.5", "0.9"] {
            let prefix = format!("p3bis.{letter}:{a}.k1_");
            if !reports.iter().any(|r| r.name.starts_with(&prefix) && r.status == CheckStatus::Proved) {
                missing.push(prefix);
            }
        }
    }
    let table: Vec<&CheckReport> = reports
        .iter()
        .filter(|r| r.status == CheckStatus::Proved && !r.name.contains("unrestricted"))
        .collect();
    let fails = proved_failures(table.iter().copied());
    let max_slack = table.iter().filter_map(|r| r.max_slack).fold(f64::NEG_INFINITY, f64::max);
    let min_slack = table.iter().filter_map(|r| r.min_slack).fold(f64::INFINITY, f64::min);
    let fewest = table.iter().map(|r| r.trials).min().unwrap_or(0);
    outcome(
        fewest >= 1_000 && fails.is_empty() && missing.is_empty(),
        format!(
            "{} pairs in the strict domain ({} in the wider one) of {} draws, {} table checks with at least {fewest} pairs each, slack in [{min_slack:.3e}, {max_slack:.3e}], failures {fails:?}, missing {missing:?}",
            stats.strict,
            stats.accepted,
            stats.draws,
            table.len()
        ),
    )
}

fn relaxed() -> Outcome {
    let mut reports = triangle_suite(SEED, (2, 2, 2), 10_000);
    reports.extend(triangle_suite(SEED, (3, 3, 3), 10_000));
    let wanted: Vec<&CheckReport> = reports
        .iter()
        .filter(|r| r.name.starts_with("relaxed.") || (r.name.starts_with("metric.S:") && r.name.contains(".raw")))
        .collect();
    let has = |p: &str| wanted.iter().any(|r| r.name.starts_with(p));
    let complete = ["metric.S:", "relaxed.S:0.6.raw", "relaxed.S:0.9.raw", "relaxed.R:0.1.raw", "relaxed.R:0.9.raw", "relaxed.D:0.5.normalized"]
        .iter()
        .all(|p| has(p));
    let short = wanted.iter().filter(|r| r.trials < 10_000).count();
    let fails = proved_failures(wanted.iter().copied());
    outcome(
        complete && short == 0 && fails.is_empty(),
        format!("{} relaxed checks x 10000 triples per shape, failures {fails:?}", wanted.len()),
    )
}

fn witnesses() -> Outcome {
    let mut built = vec![arithmetic_condition_witness(0.75).unwrap()];
    for a in [0.25, 0.5, 0.75] {
        built.push(harmonic_condition_witness(a).unwrap());
        built.push(geometric_condition_witness(a, 1.0).unwrap());
    }
    let mut bad = Vec::new();
    for w in &built {
        let holds = check_complexity_triangle_condition(&w.spec, &w.triple).unwrap();
        let [hx, hy, hz, ..] = triple_entropies(&w.triple);
        let err = [hx, hy, hz].iter().zip(w.targets).map(|(a, b)| (a - b).abs()).fold(0.0, f64::max);
        if holds || err > 1e-6 {
            bad.push(w.label.clone());
        }
    }
    let fails = proved_failures(&witness_suite());
    outcome(
        bad.is_empty() && fails.is_empty(),
        format!("{} witnesses break the condition, failures {bad:?} {fails:?}", built.len() - bad.len()),
    )
}

fn redundancy_bounds() -> Outcome {
    let (reports, stats) = redundancy_suite(SEED, 1_000);
    let mut missing = Vec::new();
    for letter in ["S", "R", "P", "D"] {
        for a in ["0.1", "0.5", "0.9"] {
            for form in ["raw", "normalized"] {
                let name = format!("redundancy.{letter}:{a}.{form}");
                if !reports.iter().any(|r| r.name == name && r.trials >= 1_000) {
                    missing.push(name);
                }
            }
        }
    }
    let fails = proved_failures(&reports);
    outcome(
        stats.accepted >= 1_000 && fails.is_empty() && missing.is_empty(),
        format!("{} ratio-filtered triples of {} draws, failures {fails:?}, missing {missing:?}", stats.accepted, stats.draws),
    )
}

fn estimation() -> Outcome {
    let truth = JointDistribution::new(
        vec!["a".into(), "b".into(), "c".into()],
        vec!["u".into(), "v".into(), "w".into()],
        vec![vec![0.20, 0.05, 0.05], vec![0.05, 0.25, 0.05], vec![0.10, 0.05, 0.20]],
    )
    .unwrap();
    let cdf: Vec<f64> = truth
        .probs()
        .iter()
        .scan(0.0, |acc, p| {
            *acc += p;
            Some(*acc)
        })
        .collect();
    let mut rng = trial_rng(SEED, 0);
    let rows = (0..10_000)
        .map(|_| {
            let u: f64 = rng.random();
            let cell = cdf.iter().position(|&c| u < c).unwrap_or(cdf.len() - 1);
            (truth.labels_x()[cell / 3].clone(), truth.labels_y()[cell % 3].clone())
        })
        .collect();
    let estimate = JointDistribution::from_samples(&SamplePairs::new(rows).unwrap());
    let (t, e) = (truth.summary().unwrap(), estimate.summary().unwrap());
    let errors = [
        (t.h_x - e.h_x).abs(),
        (t.h_y - e.h_y).abs(),
        (t.h_joint - e.h_joint).abs(),
        (t.h_x_given_y - e.h_x_given_y).abs(),
        (t.h_y_given_x - e.h_y_given_x).abs(),
        (t.mi - e.mi).abs(),
    ];
    let worst = errors.iter().copied().fold(0.0, f64::max);
    outcome(worst <= 0.02, format!("largest field error {worst:.4} nats over 10000 samples"))
}

fn dataset(header: &str, rows: &[&str]) -> Dataset {
    let text = format!("{header}\n{}\n", rows.join("\n"));
    Dataset::from_csv(text.as_bytes()).unwrap()
}

fn selection() -> Outcome {
    let mut notes = Vec::new();
    let dup = dataset("y,noise,dup", &["0,u,0", "1,u,1", "0,v,0", "1,v,1", "1,u,1", "0,v,0", "2,u,2", "2,v,2"]);
    let mut ok = true;
    for text in ["I", "E", "S:0.5", "R:0.3", "D:0.5"] {
        let spec: ComplexitySpec = text.parse().unwrap();
        let trace = forward_select(&spec, &dup, "y", &SelectOptions::default()).unwrap();
        let first = &trace.steps[0];
        let good = first.column == "dup" && first.accepted && first.divergence.abs() <= 1e-12;
        ok &= good && trace.stopping_reason == StoppingReason::ZeroDivergence;
    }
    notes.push(format!("duplicate first: {ok}"));

    let xor = dataset("y,x1,x2", &["0,0,0", "1,0,1", "1,1,0", "0,1,1"]);
    let spec = ComplexitySpec::MaxEntropy;
    let trace = forward_select(&spec, &xor, "y", &SelectOptions::default()).unwrap();
    let (x1, x2) = (xor.column_index("x1").unwrap(), xor.column_index("x2").unwrap());
    let y = xor.column_index("y").unwrap();
    let pair = xor.summary(&[y], &[x1, x2]).unwrap();
    let xor_ok = trace.selected.is_empty()
        && trace.stopping_reason == StoppingReason::NoCandidateImproves
        && pair.h_x_given_y.abs() <= 1e-12
        && xor.summary(&[y], &[x1]).unwrap().mi.abs() <= 1e-12;
    notes.push(format!("xor stops with {:?} before the determining pair: {xor_ok}", trace.stopping_reason));

    let recode = dataset("y,a,a_perm,noise", &["0,p,3,u", "1,q,1,u", "1,r,2,v", "0,p,3,v", "1,q,1,u", "0,r,2,v"]);
    let pairs = detect_redundant(&"S:0.5".parse().unwrap(), &recode, 1e-9, Some("y")).unwrap();
    let recode_ok = pairs.len() == 1 && pairs[0].col_a == "a" && pairs[0].col_b == "a_perm" && pairs[0].divergence.abs() <= 1e-12;
    notes.push(format!("recode pair at 0: {recode_ok}"));
    outcome(ok && xor_ok && recode_ok, notes.join("; "))
}

fn determinism() -> Outcome {
    let run = || {
        Command::new(env!("CARGO_BIN_EXE_infodiv"))
            .args(["verify", "--seed", "1", "--trials", "1000"])
            .current_dir(Path::new(env!("CARGO_MANIFEST_DIR")))
            .output()
            .unwrap()
    };
    let (a, b) = (run(), run());
    let same = a.stdout == b.stdout && !a.stdout.is_empty();
    outcome(
        same && a.status.code() == Some(0) && b.status.code() == Some(0),
        format!("{} bytes, identical: {same}, exit {:?}", a.stdout.len(), a.status.code()),
    )
}

fn main() {
    let criteria: [(&str, fn() -> Outcome); 10] = [
        ("identity suite", identities),
        ("metric suite", metrics),
        ("ordering chain", ordering),
        ("sandwich constants", sandwich),
        ("relaxed triangles", relaxed),
        ("counterexample witnesses", witnesses),
        ("redundancy bounds", redundancy_bounds),
        ("estimation sanity", estimation),
        ("selection behavior", selection),
        ("end-to-end determinism", determinism),
    ];
    let mut failed = 0;
    for (i, (name, check)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let o = check();
        let verdict = if o.pass { "PASS" } else { "FAIL" };
        failed += usize::from(!o.pass);
        println!("{verdict} {:>2} {name} ({:.2}s): {}", i + 1, start.elapsed().as_secs_f64(), o.detail);
    }
    if failed > 0 {
        println!("{failed} criterion(s) failed");
        std::process::exit(1);
    }
}
