use rand::seq::SliceRandom;
use rand::Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::distribution::{InfoSummary, JointDistribution, TripleSummary};
use crate::divergence::{
    closed_form_ib, closed_form_nib, complexity, entropy_distance, evaluate, h_mean_divergences,
    information_distance, normalized_entropy_distance, normalized_information_distance,
    normalized_information_distance_ratio, ComplexitySpec, CustomMean, GMeanKind,
};
use crate::error::Result;

use super::checks::{
    arithmetic_condition_witness, check_redundancy_bound, generalized_condition_margin,
    geometric_condition_witness, harmonic_condition_witness, harmonic_generalized_witness,
    mutual_information_redundancy_slack, redundancy_domain_contains, sandwich_report, triangle_slack,
    ConditionWitness, Domain,
};
use super::constants::{
    geometric_k1_c_exchanged, p3bis_constants, p6bis_constant, redundancy_constants, Theta, ThetaInterval,
};
use super::report::{derive_seed, run_many, trial_rng, CheckReport, CheckStatus, WitnessData};
use super::sampling::{random_joint, sample_joint, sample_triple};

/// Tolerance of exact algebraic identities and orderings.
pub const EXACT_TOL: f64 = 1e-12;

/// Weights used by the ordering checks.
pub const ALPHA_GRID: [f64; 10] = [0.0, 0.1, 0.2, 0.3, 0.4, 0.5, 0.6, 0.7, 0.8, 0.9];

/// Weights used by the constant-table checks.
pub const TABLE_ALPHAS: [f64; 3] = [0.1, 0.5, 0.9];

/// Entropy interval of the domain-restricted comparison checks.
pub const THETA: (f64, f64) = (0.3, 1.0);

/// Covariate-to-target entropy ratio bounds of the redundancy checks.
pub const REDUNDANCY_GAMMA: (f64, f64) = (0.5, 2.0);

/// Cap on draws per qualifying sample when filtering by domain.
const DRAW_CAP_FACTOR: u64 = 500;

fn mean(kind: GMeanKind, alpha: f64) -> ComplexitySpec {
    ComplexitySpec::mean(kind, alpha).expect("grid weights are valid")
}

fn proved(name: impl Into<String>) -> CheckReport {
    CheckReport::new(name, CheckStatus::Proved)
}

fn exact(name: impl Into<String>) -> CheckReport {
    proved(name).with_tolerance(EXACT_TOL)
}

fn finding(name: impl Into<String>) -> CheckReport {
    CheckReport::new(name, CheckStatus::Finding)
}

/// Specs exercised by the pairwise checks.
pub fn pairwise_specs() -> Vec<ComplexitySpec> {
    let mut specs = vec![ComplexitySpec::Joint, ComplexitySpec::MaxEntropy, ComplexitySpec::MinEntropy];
    for kind in GMeanKind::ALL {
        for a in [0.0, 0.3, 0.5, 0.9, 1.0] {
            specs.push(mean(kind, a));
        }
    }
    for text in ["convex:0.3*E+0.7*I", "nconvex:0.3*E+0.7*I", "convex:0.5*S:0.2+0.5*D:0.7", "nconvex:0.25*R:0.4+0.75*P:0.6"] {
        specs.push(text.parse().expect("literal spec"));
    }
    let cube = CustomMean::new("cube", |x: f64| x.powi(3), f64::cbrt, 0.4).expect("valid alpha");
    specs.push(ComplexitySpec::Custom(cube));
    specs
}

/// `(H(Y|X), H(X|Y))` summed cell by cell from the conditional laws.
fn direct_conditionals(j: &JointDistribution) -> (f64, f64) {
    let px = j.marginal_x();
    let py = j.marginal_y();
    let mut h_y_given_x = 0.0;
    let mut h_x_given_y = 0.0;
    for i in 0..j.rows() {
        for k in 0..j.cols() {
            let p = j.prob(i, k);
            if p > 0.0 {
                h_y_given_x -= p * (p / px[i]).ln();
                h_x_given_y -= p * (p / py[k]).ln();
            }
        }
    }
    (h_y_given_x, h_x_given_y)
}

/// `Σ p ln(p / (p_x p_y))`.
fn kl_mutual_information(j: &JointDistribution) -> f64 {
    let px = j.marginal_x();
    let py = j.marginal_y();
    let mut mi = 0.0;
    for i in 0..j.rows() {
        for k in 0..j.cols() {
            let p = j.prob(i, k);
            if p > 0.0 {
                mi += p * (p / (px[i] * py[k])).ln();
            }
        }
    }
    mi
}

/// Entropy identities on tables with 2 to 5 categories per axis.
pub fn identity_suite(seed: u64, trials: u64) -> Vec<CheckReport> {
    let seed = derive_seed(seed, "identities");
    let templates = [
        proved("identities.chain_rule"),
        proved("identities.conditionals"),
        proved("identities.mutual_information"),
    ];
    run_many(&templates, 0..trials, |t, reports| {
        let mut rng = trial_rng(seed, t);
        let (rows, cols) = (rng.random_range(2..=5), rng.random_range(2..=5));
        let j = random_joint(&mut rng, rows, cols).expect("positive shape");
        let s = match j.summary() {
            Ok(s) => s,
            Err(e) => {
                for r in reports.iter_mut() {
                    r.record_outcome(t, false, || WitnessData::Note(e.to_string()));
                }
                return;
            }
        };
        let witness = || WitnessData::Joint(j.clone());
        let (hyx, hxy) = direct_conditionals(&j);
        let chain = (s.h_joint - (s.h_x + hyx)).abs().max((s.h_joint - (s.h_y + hxy)).abs());
        reports[0].record(t, -chain, witness);
        let cond = (s.h_y_given_x - hyx).abs().max((s.h_x_given_y - hxy).abs());
        reports[1].record(t, -cond, witness);
        let kl = kl_mutual_information(&j);
        let mi = (s.mi - kl)
            .abs()
            .max((s.mi - (s.h_x - hxy)).abs())
            .max((s.mi - (s.h_y - hyx)).abs());
        reports[2].record(t, -mi, witness);
    })
}

fn permuted(j: &JointDistribution, rng: &mut impl Rng) -> JointDistribution {
    let mut rows: Vec<usize> = (0..j.rows()).collect();
    let mut cols: Vec<usize> = (0..j.cols()).collect();
    rows.shuffle(rng);
    cols.shuffle(rng);
    let probs = rows
        .iter()
        .flat_map(|&i| cols.iter().map(move |&k| j.prob(i, k)))
        .collect();
    JointDistribution::from_flat(j.rows(), j.cols(), probs).expect("permutation keeps mass")
}

/// A pair `(X, f(X))` with `f` a random bijection.
fn equivalent_pair(px: &[f64], rng: &mut impl Rng) -> JointDistribution {
    let n = px.len();
    let mut image: Vec<usize> = (0..n).collect();
    image.shuffle(rng);
    let mut probs = vec![0.0; n * n];
    for (i, &p) in px.iter().enumerate() {
        probs[i * n + image[i]] = p;
    }
    JointDistribution::from_flat(n, n, probs).expect("diagonal law")
}

fn named_chain(s: &InfoSummary, alpha: f64) -> Result<f64> {
    let c = |k| complexity(&mean(k, alpha), s);
    let chain = [
        c(GMeanKind::Harmonic)?,
        c(GMeanKind::Geometric)?,
        c(GMeanKind::Root)?,
        c(GMeanKind::Arithmetic)?,
        s.max_entropy(),
        s.h_joint,
    ];
    Ok(chain.windows(2).map(|w| w[1] - w[0]).fold(f64::INFINITY, f64::min))
}

/// Pairwise properties of every divergence on tables with 2 to 4 categories per axis.
pub fn divergence_suite(seed: u64, trials: u64) -> Vec<CheckReport> {
    let seed = derive_seed(seed, "divergence");
    let specs = pairwise_specs();
    let templates = [
        exact("divergence.symmetry"),
        exact("divergence.nonnegativity"),
        exact("divergence.normalized_range"),
        proved("divergence.zero_iff_equivalent"),
        exact("divergence.bijection_invariance"),
        exact("divergence.upper_bounds"),
        exact("divergence.independence_equality"),
        exact("divergence.closed_forms"),
        exact("divergence.convex_identities"),
        exact("ordering.chain"),
        finding("ordering.alpha_monotone_as_stated").with_tolerance(EXACT_TOL),
        exact("ordering.alpha_nonincreasing"),
        proved("p3bis.E.unrestricted"),
        proved("p3bis.upper_unrestricted"),
    ];
    let mix_min_max: ComplexitySpec = "convex:0.5*I+0.5*Min".parse().expect("literal spec");
    let mix_norm: ComplexitySpec = "nconvex:0.3*E+0.7*I".parse().expect("literal spec");
    let s_half = mean(GMeanKind::Arithmetic, 0.5);
    let d_half = mean(GMeanKind::Harmonic, 0.5);

    run_many(&templates, 0..trials, |t, reports| {
        let mut rng = trial_rng(seed, t);
        let (rows, cols) = (rng.random_range(2..=4), rng.random_range(2..=4));
        let j = random_joint(&mut rng, rows, cols).expect("positive shape");
        let witness = || WitnessData::Joint(j.clone());
        let outcome = (|| -> Result<Vec<f64>> {
            let s = j.summary()?;
            let st = j.transposed().summary()?;
            let sp = permuted(&j, &mut rng).summary()?;
            let mut slack = vec![f64::INFINITY; 14];
            for spec in &specs {
                let r = evaluate(spec, &s)?;
                let rt = evaluate(spec, &st)?;
                let rp = evaluate(spec, &sp)?;
                slack[0] = slack[0].min(-(r.ib - rt.ib).abs().max((r.nib - rt.nib).abs()));
                slack[4] = slack[4].min(-(r.ib - rp.ib).abs().max((r.nib - rp.nib).abs()));
                if r.valid_divergence {
                    slack[1] = slack[1].min(r.ib);
                    slack[2] = slack[2].min(r.nib).min(1.0 - r.nib);
                    if r.is_equivalent_pair || r.ib <= 1e-9 {
                        slack[3] = -1.0;
                    }
                }
                if let Some(ib) = closed_form_ib(spec, &s) {
                    slack[7] = slack[7].min(-(ib - r.ib).abs());
                }
                if let Some(nib) = closed_form_nib(spec, &s) {
                    slack[7] = slack[7].min(-(nib - r.nib).abs());
                }
            }
            // an equivalent recoding must give zero for every valid divergence
            let eq = equivalent_pair(&j.marginal_x(), &mut rng).summary()?;
            for spec in specs.iter().filter(|s| s.is_divergence()) {
                let r = evaluate(spec, &eq)?;
                if !(r.is_equivalent_pair && r.ib <= 1e-9 && r.nib <= 1e-9) {
                    slack[3] = -1.0;
                }
            }
            slack[5] = (s.h_joint - entropy_distance(&s)).min(s.max_entropy() - information_distance(&s));
            let ind = JointDistribution::independent(&j.marginal_x(), &j.marginal_y())?.summary()?;
            slack[6] = -(entropy_distance(&ind) - (ind.h_x + ind.h_y))
                .abs()
                .max((information_distance(&ind) - ind.max_entropy()).abs())
                .max((normalized_entropy_distance(&ind) - 1.0).abs())
                .max((normalized_information_distance(&ind) - 1.0).abs());
            let (h_e, h_s) = h_mean_divergences(&s)?;
            slack[7] = slack[7]
                .min(-(normalized_information_distance(&s) - normalized_information_distance_ratio(&s)).abs())
                .min(-(h_e - evaluate(&d_half, &s)?.nib).abs())
                .min(-(h_s - evaluate(&s_half, &s)?.nib).abs());
            slack[8] = -(evaluate(&mix_min_max, &s)?.ib - evaluate(&s_half, &s)?.ib)
                .abs()
                .max(
                    (evaluate(&mix_norm, &s)?.nib
                        - (0.3 * normalized_entropy_distance(&s) + 0.7 * normalized_information_distance(&s)))
                    .abs(),
                );
            let mut stated = f64::INFINITY;
            let mut reverse = f64::INFINITY;
            for &a in &ALPHA_GRID {
                slack[9] = slack[9].min(named_chain(&s, a)?);
            }
            for kind in GMeanKind::ALL {
                for w in ALPHA_GRID.windows(2) {
                    let lo = complexity(&mean(kind, w[0]), &s)?;
                    let hi = complexity(&mean(kind, w[1]), &s)?;
                    stated = stated.min(hi - lo);
                    reverse = reverse.min(lo - hi);
                }
            }
            slack[10] = stated;
            slack[11] = reverse;
            let (de, di) = (entropy_distance(&s), information_distance(&s));
            slack[12] = (de - di).min(2.0 * di - de);
            for kind in GMeanKind::ALL {
                for &a in &ALPHA_GRID {
                    slack[13] = slack[13].min(di - evaluate(&mean(kind, a), &s)?.ib);
                }
            }
            Ok(slack)
        })();
        match outcome {
            Ok(slack) => {
                for (r, v) in reports.iter_mut().zip(slack) {
                    if r.name == "divergence.zero_iff_equivalent" {
                        r.record_outcome(t, v >= 0.0, witness);
                    } else {
                        r.record(t, v, witness);
                    }
                }
            }
            Err(e) => {
                for r in reports.iter_mut() {
                    r.record_outcome(t, false, || WitnessData::Note(format!("{e}")));
                }
            }
        }
    })
}

struct TriangleCheck {
    spec: ComplexitySpec,
    c: f64,
    normalized: bool,
}

fn triangle_checks() -> Vec<(CheckReport, TriangleCheck)> {
    let mut out = Vec::new();
    let mut push = |status: CheckStatus, prefix: &str, spec: ComplexitySpec, c: f64, normalized: bool| {
        let mode = if normalized { "normalized" } else { "raw" };
        let name = format!("{prefix}.{spec}.{mode}");
        out.push((CheckReport::new(name, status), TriangleCheck { spec, c, normalized }));
    };
    for spec in [ComplexitySpec::Joint, ComplexitySpec::MaxEntropy] {
        push(CheckStatus::Proved, "metric", spec.clone(), 1.0, false);
        push(CheckStatus::Proved, "metric", spec, 1.0, true);
    }
    for a in [0.1, 0.3, 0.5] {
        push(CheckStatus::Proved, "metric", mean(GMeanKind::Arithmetic, a), 1.0, false);
    }
    let relaxed = |kind, a, normalized| p6bis_constant(kind, a, normalized).expect("supported kind");
    for a in [0.6, 0.75, 0.9] {
        push(CheckStatus::Proved, "relaxed", mean(GMeanKind::Arithmetic, a), relaxed(GMeanKind::Arithmetic, a, false), false);
    }
    for a in TABLE_ALPHAS {
        push(CheckStatus::Proved, "relaxed", mean(GMeanKind::Arithmetic, a), relaxed(GMeanKind::Arithmetic, a, true), true);
    }
    for a in [0.1, 0.3, 0.5, 0.7, 0.9] {
        push(CheckStatus::Proved, "relaxed", mean(GMeanKind::Root, a), relaxed(GMeanKind::Root, a, false), false);
        push(CheckStatus::Proved, "relaxed", mean(GMeanKind::Root, a), relaxed(GMeanKind::Root, a, true), true);
    }
    for a in [0.1, 0.25, 0.5, 0.75, 0.9] {
        push(CheckStatus::Proved, "relaxed", mean(GMeanKind::Harmonic, a), relaxed(GMeanKind::Harmonic, a, true), true);
    }
    // exploratory searches for strict-triangle failures
    for a in [0.6, 0.75, 0.9] {
        push(CheckStatus::Finding, "search", mean(GMeanKind::Arithmetic, a), 1.0, false);
    }
    for a in TABLE_ALPHAS {
        push(CheckStatus::Finding, "search", mean(GMeanKind::Arithmetic, a), 1.0, true);
        for kind in [GMeanKind::Geometric, GMeanKind::Root, GMeanKind::Harmonic] {
            push(CheckStatus::Finding, "search", mean(kind, a), 1.0, false);
            push(CheckStatus::Finding, "search", mean(kind, a), 1.0, true);
        }
    }
    out
}

fn condition_specs() -> Vec<ComplexitySpec> {
    vec![
        ComplexitySpec::Joint,
        ComplexitySpec::MaxEntropy,
        mean(GMeanKind::Arithmetic, 0.1),
        mean(GMeanKind::Arithmetic, 0.3),
        mean(GMeanKind::Arithmetic, 0.5),
    ]
}

fn rotations(t: &TripleSummary) -> [TripleSummary; 3] {
    let r1 = t.rotated();
    let r2 = r1.rotated();
    [*t, r1, r2]
}

/// Triangle-type inequalities on sampled triples of the given shape.
pub fn triangle_suite(seed: u64, shape: (usize, usize, usize), trials: u64) -> Vec<CheckReport> {
    let seed = derive_seed(seed, &format!("triangle/{shape:?}"));
    let tag = format!("[{}x{}x{}]", shape.0, shape.1, shape.2);
    let checks = triangle_checks();
    let cond_specs = condition_specs();
    let mut templates: Vec<CheckReport> = vec![
        proved("lemma.joint_entropy"),
        proved("lemma.mutual_information"),
        proved("metric.symmetry"),
    ];
    for spec in &cond_specs {
        templates.push(proved(format!("condition.{spec}")));
    }
    let offset = templates.len();
    templates.extend(checks.iter().map(|(r, _)| r.clone()));
    for r in &mut templates {
        r.name = format!("{}{tag}", r.name);
    }
    run_many(&templates, 0..trials, |t, reports| {
        let triple = sample_triple(seed, t, shape).expect("positive shape");
        let witness = || WitnessData::Triple(triple.clone());
        let s = match triple.summary() {
            Ok(s) => s,
            Err(e) => {
                for r in reports.iter_mut() {
                    r.record_outcome(t, false, || WitnessData::Note(e.to_string()));
                }
                return;
            }
        };
        let rots = rotations(&s);
        let joint = rots
            .iter()
            .map(|r| r.xz.h_joint + r.yz.h_joint - r.h_z() - r.xy.h_joint)
            .fold(f64::INFINITY, f64::min);
        reports[0].record(t, joint, witness);
        let mi = rots
            .iter()
            .map(|r| r.xy.mi - (r.xz.mi + r.yz.mi - r.h_z()))
            .fold(f64::INFINITY, f64::min);
        reports[1].record(t, mi, witness);
        let distances: [fn(&InfoSummary) -> f64; 4] = [
            entropy_distance,
            information_distance,
            normalized_entropy_distance,
            normalized_information_distance,
        ];
        let (xy, xz, yz) = triple.pairwise_marginals();
        let transposed: Vec<InfoSummary> = [xy, xz, yz]
            .iter()
            .filter_map(|j| j.transposed().summary().ok())
            .collect();
        let sym = distances
            .iter()
            .flat_map(|f| {
                [s.xy, s.xz, s.yz]
                    .iter()
                    .zip(&transposed)
                    .map(|(p, q)| (f(p) - f(q)).abs())
                    .collect::<Vec<_>>()
            })
        .fold(0.0, f64::max);
        reports[2].record(t, -sym, witness);
        for (k, spec) in cond_specs.iter().enumerate() {
            let margin = rots
                .iter()
                .map(|r| generalized_condition_margin(spec, r, 1.0).unwrap_or(f64::NAN))
                .fold(f64::INFINITY, f64::min);
            reports[3 + k].record(t, margin, witness);
        }
        for (k, (_, c)) in checks.iter().enumerate() {
            let slack = triangle_slack(&c.spec, &s, c.c, c.normalized).unwrap_or(f64::NAN);
            reports[offset + k].record(t, slack, witness);
        }
    })
}

/// Explicit witnesses for the failures of the complexity-side triangle conditions.
pub fn witness_suite() -> Vec<CheckReport> {
    type Build = fn(f64, f64) -> Result<ConditionWitness>;
    let families: [(&str, Build, &[f64], &[f64], bool); 5] = [
        ("witness.arithmetic_condition", |a, _| arithmetic_condition_witness(a), &[0.6, 0.75, 0.9], &[1.0], false),
        ("witness.harmonic_condition", |a, _| harmonic_condition_witness(a), &[0.25, 0.5, 0.75], &[1.0], false),
        ("witness.geometric_condition", geometric_condition_witness, &[0.25, 0.5, 0.75], &[1.0], true),
        ("witness.harmonic_generalized", harmonic_generalized_witness, &[0.25, 0.5, 0.75], &[1.0, 2.0, 5.0], true),
        ("witness.geometric_generalized", geometric_condition_witness, &[0.25, 0.5, 0.75], &[1.0, 2.0, 5.0], true),
    ];
    let mut out = Vec::new();
    for (name, build, alphas, cs, third) in families {
        let mut report = proved(name);
        let mut trial = 0;
        for &a in alphas {
            for &c in cs {
                match build(a, c) {
                    Ok(w) => {
                        let ok = (|| -> Result<bool> {
                            let mut ok = w.constraint_error()? <= 1e-6 && w.margin()? < -super::VIOLATION_TOL;
                            if third {
                                ok &= (w.condition_value()? + w.targets[2] / 3.0).abs() <= 1e-6;
                            }
                            if name == "witness.harmonic_condition" {
                                ok &= w.condition_value()?.abs() <= 1e-6;
                            }
                            Ok(ok)
                        })()
                        .unwrap_or(false);
                        report.record_outcome(trial, ok, || WitnessData::Triple(w.triple.clone()));
                    }
                    Err(e) => report.record_outcome(trial, false, || WitnessData::Note(e.to_string())),
                }
                trial += 1;
            }
        }
        out.push(report);
    }
    out
}

/// Draw counts of a domain-filtered sample.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct PoolStats {
    pub draws: u64,
    pub accepted: u64,
    /// Subset of the accepted draws meeting the stricter domain (if any).
    pub strict: u64,
}

/// Draws indices `0, 1, ...` until `target` of them satisfy `strict`, keeping
/// every draw that satisfies `keep`. Chunks run in parallel; the outcome only
/// depends on the generator.
fn draw_until<T, G, K, S>(target: u64, gen: G, keep: K, strict: S) -> (Vec<(u64, T)>, PoolStats)
where
    T: Send,
    G: Fn(u64) -> Option<T> + Sync,
    K: Fn(&T) -> bool + Sync,
    S: Fn(&T) -> bool + Sync,
{
    const CHUNK: u64 = 4096;
    let cap = target.max(1) * DRAW_CAP_FACTOR;
    let mut kept = Vec::new();
    let mut n_strict = 0;
    let mut draws = 0;
    let mut start = 0;
    while n_strict < target && start < cap {
        let end = (start + CHUNK).min(cap);
        let chunk: Vec<(u64, Option<T>)> = (start..end)
            .into_par_iter()
            .map(|i| (i, gen(i).filter(|x| keep(x))))
            .collect();
        for (i, item) in chunk {
            draws = i + 1;
            if let Some(x) = item {
                if strict(&x) {
                    n_strict += 1;
                }
                kept.push((i, x));
            }
            if n_strict >= target {
                break;
            }
        }
        start = end;
    }
    let stats = PoolStats {
        draws,
        accepted: kept.len() as u64,
        strict: n_strict,
    };
    (kept, stats)
}

const P3BIS_SHAPES: [(usize, usize); 3] = [(2, 2), (2, 3), (3, 3)];

/// Sandwich checks with the constant table on `Θ`-filtered tables, drawing
/// until `target` pairs have both entropies and the mutual information in `Θ`.
pub fn p3bis_suite(seed: u64, target: u64) -> (Vec<CheckReport>, PoolStats) {
    let seed = derive_seed(seed, "p3bis");
    let theta = ThetaInterval::new(THETA.0, THETA.1).expect("valid interval");
    let (pool, stats) = draw_until(
        target,
        |i| {
            let j = sample_joint(seed, i, P3BIS_SHAPES[(i % 3) as usize]).ok()?;
            let s = j.summary().ok()?;
            Some((j, s))
        },
        |(_, s)| Domain::Gamma2(theta).contains(s),
        |(_, s)| Domain::Upsilon(theta).contains(s),
    );
    let pool: Vec<(JointDistribution, InfoSummary)> = pool.into_iter().map(|(_, x)| x).collect();
    let outside = stats.draws - stats.accepted;
    let mut out = Vec::new();
    for kind in [GMeanKind::Arithmetic, GMeanKind::Root, GMeanKind::Geometric, GMeanKind::Harmonic] {
        for a in TABLE_ALPHAS {
            let spec = mean(kind, a);
            let k = p3bis_constants(kind, a, Theta::Bounded(theta)).expect("valid alpha");
            for (suffix, k1, domain) in [
                ("k1_a", k.k1_a, Domain::Upsilon(theta)),
                ("k1_b", k.k1_b, Domain::Gamma2(theta)),
                ("k1_c", k.k1_c, Domain::Gamma2(theta)),
            ] {
                if let Some(k1) = k1 {
                    let mut r = sandwich_report(&format!("p3bis.{spec}.{suffix}"), CheckStatus::Proved, &spec, &pool, k1, k.k2, domain);
                    r.rejected += outside;
                    out.push(r);
                }
            }
            if kind == GMeanKind::Geometric {
                let k1 = geometric_k1_c_exchanged(a, theta);
                let mut r = sandwich_report(
                    &format!("p3bis.{spec}.k1_c_exchanged"),
                    CheckStatus::Finding,
                    &spec,
                    &pool,
                    k1,
                    1.0,
                    Domain::Gamma2(theta),
                );
                r.rejected += outside;
                out.push(r);
            }
        }
    }
    (out, stats)
}

/// Redundancy bounds on `(Y, X1, X2)` triples whose covariate entropies lie
/// within the ratio window, drawing until `target` triples qualify.
pub fn redundancy_suite(seed: u64, target: u64) -> (Vec<CheckReport>, PoolStats) {
    let seed = derive_seed(seed, "redundancy");
    let (g1, g2) = REDUNDANCY_GAMMA;
    let (pool, stats) = draw_until(
        target,
        |i| {
            let t = sample_triple(seed, i, (2, 2, 2)).ok()?;
            let s = t.summary().ok()?;
            Some((t, s))
        },
        |(_, s)| redundancy_domain_contains(s, g1, g2),
        |_| true,
    );
    let mut plan = Vec::new();
    let mut templates = vec![proved("redundancy.mutual_information")];
    for kind in [GMeanKind::Arithmetic, GMeanKind::Root, GMeanKind::Geometric, GMeanKind::Harmonic] {
        for a in TABLE_ALPHAS {
            let spec = mean(kind, a);
            let k = redundancy_constants(kind, a, g1, g2).expect("valid constants");
            templates.push(proved(format!("redundancy.{spec}.raw")));
            templates.push(proved(format!("redundancy.{spec}.normalized")));
            plan.push((spec, k));
        }
    }
    let mut reports = run_many(&templates, 0..pool.len() as u64, |idx, reports| {
        let (trial, (triple, s)) = &pool[idx as usize];
        let witness = || WitnessData::Triple(triple.clone());
        reports[0].record(*trial, mutual_information_redundancy_slack(s), witness);
        for (k, (spec, constants)) in plan.iter().enumerate() {
            match check_redundancy_bound(spec, s, constants) {
                Ok(slack) => {
                    reports[1 + 2 * k].record(*trial, slack.raw, witness);
                    reports[2 + 2 * k].record(*trial, slack.normalized, witness);
                }
                Err(e) => {
                    reports[1 + 2 * k].record_outcome(*trial, false, || WitnessData::Note(e.to_string()));
                    reports[2 + 2 * k].record_outcome(*trial, false, || WitnessData::Note(e.to_string()));
                }
            }
        }
    });
    for r in &mut reports {
        r.rejected += stats.draws - stats.accepted;
    }
    (reports, stats)
}

/// Full property run.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct VerifyReport {
    pub seed: u64,
    pub trials: u64,
    pub p3bis_pool: PoolStats,
    pub redundancy_pool: PoolStats,
    /// Number of proved checks with at least one violation.
    pub proved_failures: u64,
    /// Number of exploratory checks with at least one violation.
    pub findings: u64,
    pub checks: Vec<CheckReport>,
}

impl VerifyReport {
    pub fn has_proved_violations(&self) -> bool {
        self.proved_failures > 0
    }
}

/// Runs every check with `trials` samples each (a tenth of that for the
/// 3x3x3 triangle checks). Deterministic in `seed`.
pub fn verify(seed: u64, trials: u64) -> VerifyReport {
    let mut checks = identity_suite(seed, trials);
    checks.extend(divergence_suite(seed, trials));
    checks.extend(triangle_suite(seed, (2, 2, 2), trials));
    checks.extend(triangle_suite(seed, (3, 3, 3), (trials / 10).max(1)));
    checks.extend(witness_suite());
    let (p3, p3_stats) = p3bis_suite(seed, trials);
    checks.extend(p3);
    let (red, red_stats) = redundancy_suite(seed, trials);
    checks.extend(red);
    let proved_failures = checks
        .iter()
        .filter(|c| c.status == CheckStatus::Proved && !c.passed())
        .count() as u64;
    let findings = checks
        .iter()
        .filter(|c| c.status == CheckStatus::Finding && !c.passed())
        .count() as u64;
    VerifyReport {
        seed,
        trials,
        p3bis_pool: p3_stats,
        redundancy_pool: red_stats,
        proved_failures,
        findings,
        checks,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn small_run_is_deterministic() {
        let a = verify(5, 40);
        let b = verify(5, 40);
        assert_eq!(a, b);
        assert!(a.checks.iter().all(|c| c.trials > 0), "every check ran");
    }

    #[test]
    fn witnesses_pass() {
        for r in witness_suite() {
            assert!(r.passed(), "{}", r.line());
            assert!(r.trials >= 3);
        }
    }

    #[test]
    fn direct_oracles_match_summary() {
        let j = JointDistribution::from_probs(vec![vec![0.4, 0.1], vec![0.1, 0.4]]).unwrap();
        let s = j.summary().unwrap();
        let (hyx, hxy) = direct_conditionals(&j);
        assert!((hyx - s.h_y_given_x).abs() < 1e-15 && (hxy - s.h_x_given_y).abs() < 1e-15);
        assert!((kl_mutual_information(&j) - s.mi).abs() < 1e-15);
    }
}
