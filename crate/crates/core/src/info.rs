//! Mutual information `I(X; f(Y))` for a uniform `X` sent through a cube
//! BSC(ε). With `f` Boolean, `I(X; f(Y)) = H(𝔼f) - H(f(Y) | X)`, and the
//! conditional term is a mean over `T_ε f`. All entropies are in bits.

use crate::cube::BooleanFunction;
use crate::error::{invalid, Result};
use crate::noise::{check_channel_eps, noisy_values, xlog2x};

/// `h(p) = -p log₂ p - (1-p) log₂(1-p)`.
pub fn binary_entropy(p: f64) -> Result<f64> {
    if !(0.0..=1.0).contains(&p) {
        return Err(invalid(format!("probability {} outside [0, 1]", p)));
    }
    Ok(-(xlog2x(p) + xlog2x(1.0 - p)))
}

/// `-H(f(Y) | X) = 𝔼[t log₂ t + (1-t) log₂(1-t)]` with `t = T_ε f`.
pub fn neg_cond_entropy(f: &BooleanFunction, eps: f64) -> Result<f64> {
    check_channel_eps(eps)?;
    let values = noisy_values(f, eps);
    let sum: f64 = values.iter().map(|&t| xlog2x(t) + xlog2x(1.0 - t)).sum();
    Ok((sum / values.len() as f64).min(0.0))
}

pub fn mutual_information(f: &BooleanFunction, eps: f64) -> Result<f64> {
    let h = binary_entropy(f.mean())?;
    Ok((h + neg_cond_entropy(f, eps)?).max(0.0))
}
