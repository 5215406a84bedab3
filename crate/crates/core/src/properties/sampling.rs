use rand::Rng;
use rand_distr::Exp1;

use crate::distribution::{JointDistribution, TripleDistribution};
use crate::error::{Error, Result};

use super::report::trial_rng;

/// A point drawn uniformly from the probability simplex with `n` vertices.
pub fn dirichlet_flat<R: Rng + ?Sized>(rng: &mut R, n: usize) -> Vec<f64> {
    let mut g: Vec<f64> = (0..n).map(|_| rng.sample::<f64, _>(Exp1)).collect();
    let total: f64 = g.iter().sum();
    for v in &mut g {
        *v /= total;
    }
    g
}

fn check_sizes(sizes: &[usize]) -> Result<()> {
    if sizes.iter().any(|&n| n == 0) {
        return Err(Error::InvalidParameter(format!("sample shape {sizes:?} has an empty axis")));
    }
    Ok(())
}

/// Random joint table drawn with the generator `rng`.
pub fn random_joint<R: Rng + ?Sized>(rng: &mut R, rows: usize, cols: usize) -> Result<JointDistribution> {
    check_sizes(&[rows, cols])?;
    JointDistribution::from_flat(rows, cols, dirichlet_flat(rng, rows * cols))
}

/// Random triple law drawn with the generator `rng`.
pub fn random_triple<R: Rng + ?Sized>(rng: &mut R, shape: (usize, usize, usize)) -> Result<TripleDistribution> {
    check_sizes(&[shape.0, shape.1, shape.2])?;
    TripleDistribution::from_flat(shape, dirichlet_flat(rng, shape.0 * shape.1 * shape.2))
}

/// The `index`-th joint table of the stream identified by `seed`.
pub fn sample_joint(seed: u64, index: u64, shape: (usize, usize)) -> Result<JointDistribution> {
    random_joint(&mut trial_rng(seed, index), shape.0, shape.1)
}

/// The `index`-th triple of the stream identified by `seed`.
pub fn sample_triple(seed: u64, index: u64, shape: (usize, usize, usize)) -> Result<TripleDistribution> {
    random_triple(&mut trial_rng(seed, index), shape)
}

/// `count` flat-Dirichlet joint tables, deterministic per `(seed, shape)`.
pub fn sample_joints(
    seed: u64,
    shape: (usize, usize),
    count: usize,
) -> Result<impl Iterator<Item = JointDistribution>> {
    check_sizes(&[shape.0, shape.1])?;
    Ok((0..count as u64).map(move |i| sample_joint(seed, i, shape).expect("shape checked")))
}

/// `count` flat-Dirichlet triple laws, deterministic per `(seed, shape)`.
pub fn sample_triples(
    seed: u64,
    shape: (usize, usize, usize),
    count: usize,
) -> Result<impl Iterator<Item = TripleDistribution>> {
    check_sizes(&[shape.0, shape.1, shape.2])?;
    Ok((0..count as u64).map(move |i| sample_triple(seed, i, shape).expect("shape checked")))
}

/// Entropy in nats of a Bernoulli(`p`) variable.
pub fn binary_entropy(p: f64) -> f64 {
    let term = |q: f64| if q > 0.0 { -q * q.ln() } else { 0.0 };
    term(p) + term(1.0 - p)
}

/// The law `[p, 1 - p]` with `p <= 1/2` whose entropy is `h`, found by bisection.
pub fn binary_with_entropy(h: f64) -> Result<[f64; 2]> {
    let max = std::f64::consts::LN_2;
    if !(0.0..=max).contains(&h) {
        return Err(Error::InvalidParameter(format!(
            "binary entropy {h} outside [0, ln 2]"
        )));
    }
    let (mut lo, mut hi) = (0.0_f64, 0.5_f64);
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if binary_entropy(mid) < h {
            lo = mid;
        } else {
            hi = mid;
        }
        if hi - lo < 1e-15 {
            break;
        }
    }
    let p = 0.5 * (lo + hi);
    Ok([p, 1.0 - p])
}

/// Three independent binary variables with the given entropies.
pub fn independent_binary_triple(h_x: f64, h_y: f64, h_z: f64) -> Result<TripleDistribution> {
    let (px, py, pz) = (
        binary_with_entropy(h_x)?,
        binary_with_entropy(h_y)?,
        binary_with_entropy(h_z)?,
    );
    let mut probs = Vec::with_capacity(8);
    for a in px {
        for b in py {
            for c in pz {
                probs.push(a * b * c);
            }
        }
    }
    TripleDistribution::from_flat((2, 2, 2), probs)
}
