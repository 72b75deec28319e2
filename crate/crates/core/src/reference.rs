//! Slow brute-force evaluations used to cross-check the fast paths.
//!
//! Every function here enumerates the underlying probability space directly
//! and costs `4^n` or more, so keep `n` small.

use crate::cube::{BooleanFunction, CubeFunction};
use crate::error::{invalid, Result};
use crate::noise::xlog2x;

/// Largest dimension accepted by the `4^n` enumerations.
pub const MAX_REFERENCE_DIM: usize = 10;

fn check(n: usize) -> Result<()> {
    if n > MAX_REFERENCE_DIM {
        return Err(invalid(format!("reference evaluation limited to n <= {}", MAX_REFERENCE_DIM)));
    }
    Ok(())
}

/// `ℙ(Z = z)` for a Bernoulli(ε)^n vector with `d` ones.
fn flip_weight(eps: f64, n: usize, d: u32) -> f64 {
    eps.powi(d as i32) * (1.0 - eps).powi(n as i32 - d as i32)
}

/// `T_ε f(x) = Σ_z ℙ(Z = z) f(x ⊕ z)`.
pub fn noise_by_summation(f: &CubeFunction, eps: f64) -> Result<CubeFunction> {
    let n = f.n();
    check(n)?;
    let size = 1usize << n;
    let weights: Vec<f64> = (0..size).map(|z| flip_weight(eps, n, z.count_ones())).collect();
    let values = (0..size)
        .map(|x| (0..size).map(|z| weights[z] * f.values()[x ^ z]).sum())
        .collect();
    CubeFunction::new(n, values)
}

/// `ℙ(f(Y¹) = f(Y²))` by summing over output pairs. Given a common uniform
/// source, `Y¹` is uniform and `Y¹ ⊕ Y²` is Bernoulli(2ε(1-ε))^n.
pub fn agreement_by_pairs(f: &BooleanFunction, eps: f64) -> Result<f64> {
    let n = f.n();
    check(n)?;
    let size = 1usize << n;
    let delta = 2.0 * eps * (1.0 - eps);
    let mut total = 0.0;
    for a in 0..size {
        for b in 0..size {
            if f.get(a) == f.get(b) {
                total += flip_weight(delta, n, (a ^ b).count_ones());
            }
        }
    }
    Ok(total / size as f64)
}

/// `ℙ(f(Y¹) = f(Y²) = 1)` by summing over output pairs.
pub fn joint_ones_by_pairs(f: &BooleanFunction, eps: f64) -> Result<f64> {
    let n = f.n();
    check(n)?;
    let size = 1usize << n;
    let delta = 2.0 * eps * (1.0 - eps);
    let support = f.support();
    let total: f64 = support
        .iter()
        .flat_map(|&a| support.iter().map(move |&b| (a ^ b).count_ones()))
        .map(|d| flip_weight(delta, n, d))
        .sum();
    Ok(total / size as f64)
}

/// `I(X; f(Y))` in bits from the joint law of `(X, f(Y))`, obtained by
/// summing the channel `ℙ(y | x)` over all `4^n` pairs.
pub fn mutual_information_joint(f: &BooleanFunction, eps: f64) -> Result<f64> {
    let n = f.n();
    check(n)?;
    let size = 1usize << n;
    let px = 1.0 / size as f64;
    // joint[x] = ℙ(X = x, f(Y) = 1).
    let joint: Vec<f64> = (0..size)
        .map(|x| {
            px * (0..size)
                .filter(|&y| f.get(y))
                .map(|y| flip_weight(eps, n, (x ^ y).count_ones()))
                .sum::<f64>()
        })
        .collect();
    let p1: f64 = joint.iter().sum();
    let mut info = 0.0;
    for &j1 in &joint {
        let j0 = px - j1;
        for (j, pb) in [(j1, p1), (j0, 1.0 - p1)] {
            if j > 0.0 && pb > 0.0 {
                info += j * (j / (px * pb)).log2();
            }
        }
    }
    Ok(info.max(0.0))
}

/// `H(f(Y) | X)` in bits from the same joint law.
pub fn conditional_entropy_joint(f: &BooleanFunction, eps: f64) -> Result<f64> {
    let n = f.n();
    check(n)?;
    let size = 1usize << n;
    let mut sum = 0.0;
    for x in 0..size {
        let t: f64 = (0..size)
            .filter(|&y| f.get(y))
            .map(|y| flip_weight(eps, n, (x ^ y).count_ones()))
            .sum();
        sum -= xlog2x(t) + xlog2x(1.0 - t);
    }
    Ok(sum / size as f64)
}
