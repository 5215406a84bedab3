use infodiv::properties::harness::{p3bis_suite, witness_suite, THETA};
use infodiv::properties::{
    arithmetic_condition_witness, geometric_condition_witness, geometric_k1_c_exchanged, harmonic_condition_witness,
    p3bis_constants, p6bis_constant, redundancy_constants, sandwich_slack, verify, CheckStatus, Theta, ThetaInterval,
};
use infodiv::{ComplexitySpec, Error, GMeanKind, InfoSummary};

fn naive_entropy(p: &[f64]) -> f64 {
    p.iter().filter(|&&v| v > 0.0).map(|&v| -v * v.ln()).sum()
}

#[test]
fn small_run_has_no_proved_violations() {
    let report = verify(7, 200);
    for c in &report.checks {
        if c.status == CheckStatus::Proved {
            assert!(c.passed(), "{}", c.line());
        }
    }
    assert!(!report.has_proved_violations());
    let stated = report.checks.iter().find(|c| c.name == "ordering.alpha_monotone_as_stated").unwrap();
    assert_eq!(stated.status, CheckStatus::Finding);
    assert!(stated.violations > 0);
}

#[test]
fn runs_are_reproducible() {
    let a = serde_json::to_string(&verify(3, 100)).unwrap();
    let b = serde_json::to_string(&verify(3, 100)).unwrap();
    assert_eq!(a, b);
    let c = serde_json::to_string(&verify(4, 100)).unwrap();
    assert_ne!(a, c);
}

#[test]
fn witness_marginals_match_their_targets() {
    let witnesses = [
        arithmetic_condition_witness(0.75).unwrap(),
        harmonic_condition_witness(0.5).unwrap(),
        geometric_condition_witness(0.5, 2.0).unwrap(),
    ];
    for w in witnesses {
        let (nx, ny, nz) = w.triple.shape();
        let mut px = vec![0.0; nx];
        let mut py = vec![0.0; ny];
        let mut pz = vec![0.0; nz];
        for i in 0..nx {
            for j in 0..ny {
                for k in 0..nz {
                    let p = w.triple.prob(i, j, k);
                    px[i] += p;
                    py[j] += p;
                    pz[k] += p;
                }
            }
        }
        for (p, target) in [px, py, pz].iter().zip(w.targets) {
            assert!((naive_entropy(p) - target).abs() < 1e-6, "{}", w.label);
        }
        assert!(w.margin().unwrap() < 0.0, "{}", w.label);
    }
    assert!(witness_suite().iter().all(|r| r.passed()));
}

/// Summary with `I = min(H(X), H(Y))` and `max/min = rho`: the extremal case
/// of the geometric lower constant.
fn nested_pair(m: f64, rho: f64) -> InfoSummary {
    InfoSummary::from_entropies(m, rho * m, rho * m).unwrap()
}

#[test]
fn geometric_lower_constant_is_tight_at_nested_pairs() {
    let theta = ThetaInterval::new(THETA.0, THETA.1).unwrap();
    let rho = theta.rho();
    let s = nested_pair(THETA.0, rho);
    for a in [0.1, 0.5, 0.9] {
        let spec = ComplexitySpec::mean(GMeanKind::Geometric, a).unwrap();
        let k1 = p3bis_constants(GMeanKind::Geometric, a, Theta::Bounded(theta)).unwrap().k1_c.unwrap();
        let oracle = (rho.powf(1.0 - a) - 1.0) / (rho - 1.0);
        assert!((k1 - oracle).abs() < 1e-12);
        let slack = sandwich_slack(&spec, &s, k1, 1.0).unwrap();
        assert!(slack.abs() < 1e-9, "alpha {a}: slack {slack}");
        let exchanged = sandwich_slack(&spec, &s, geometric_k1_c_exchanged(a, theta), 1.0).unwrap();
        if a > 0.5 {
            assert!(exchanged < -1e-3, "alpha {a}: exchanged slack {exchanged}");
        } else {
            assert!(exchanged >= -1e-9);
        }
    }
}

#[test]
fn sampled_sandwich_separates_the_two_geometric_constants() {
    let (reports, stats) = p3bis_suite(11, 300);
    assert_eq!(stats.strict, 300);
    let get = |name: &str| reports.iter().find(|r| r.name == name).unwrap();
    assert!(get("p3bis.P:0.9.k1_c").passed());
    assert!(!get("p3bis.P:0.9.k1_c_exchanged").passed());
    assert!(get("p3bis.P:0.1.k1_c_exchanged").passed());
    assert!(reports.iter().filter(|r| r.status == CheckStatus::Proved).all(|r| r.passed()));
}

#[test]
fn constant_tables_reject_bad_inputs() {
    let theta = Theta::Bounded(ThetaInterval::new(0.3, 1.0).unwrap());
    assert!(matches!(p3bis_constants(GMeanKind::Arithmetic, 1.0, theta), Err(Error::InvalidAlpha { .. })));
    assert!(matches!(ThetaInterval::new(0.0, 1.0), Err(Error::InvalidTheta { .. })));
    assert!(matches!(redundancy_constants(GMeanKind::Root, 0.5, 2.0, 1.0), Err(Error::InvalidGamma { .. })));
    assert!(matches!(p6bis_constant(GMeanKind::Geometric, 0.5, false), Err(Error::UnsupportedKind(_))));
    assert_eq!(p6bis_constant(GMeanKind::Arithmetic, 0.75, false).unwrap(), 3.0);
    assert_eq!(p6bis_constant(GMeanKind::Harmonic, 0.25, true).unwrap(), 4.0);
}
