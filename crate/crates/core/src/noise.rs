//! The noise operator `T_ε` on the cube and the stability functionals built on it.
//!
//! `T_ε f(x) = 𝔼 f(x + Z)` with `Z` having i.i.d. Bernoulli(ε) coordinates.
//! Two independent implementations are provided: [`apply_noise`] scales the
//! Walsh spectrum by `(1-2ε)^{|A|}`, and [`apply_noise_direct`] convolves with
//! the product kernel one coordinate at a time. Both are linear in `f` and
//! polynomial in `ε`, so both extend to any real `ε`; only `[0, 1/2]` is a
//! channel.

use std::fmt;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::cube::{wht, wht_inverse, BooleanFunction, CubeFunction};
use crate::error::{invalid, Error, Result};
use crate::influence::total_influence;

/// Crossover probability of a cube channel together with the induced
/// pairwise correlation `ρ = (1-2ε)²` between two noisy copies.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct NoiseParam {
    epsilon: f64,
    rho: f64,
}

impl NoiseParam {
    pub fn new(epsilon: f64) -> Result<Self> {
        check_channel_eps(epsilon)?;
        let c = 1.0 - 2.0 * epsilon;
        Ok(Self { epsilon, rho: c * c })
    }

    /// The channel whose two outputs are `ρ`-correlated, `ε = (1 - √ρ)/2`.
    pub fn from_rho(rho: f64) -> Result<Self> {
        if !(0.0..=1.0).contains(&rho) {
            return Err(invalid(format!("rho = {} outside [0, 1]", rho)));
        }
        Self::new((1.0 - rho.sqrt()) / 2.0)
    }

    pub fn epsilon(&self) -> f64 {
        self.epsilon
    }

    pub fn rho(&self) -> f64 {
        self.rho
    }

    /// `1 - 2ε`, the per-coordinate spectral multiplier.
    pub fn correlation(&self) -> f64 {
        1.0 - 2.0 * self.epsilon
    }

    /// The channel equivalent to applying `self` then `other`:
    /// `1 - 2(ε₁∗ε₂) = (1-2ε₁)(1-2ε₂)`.
    pub fn compose(&self, other: &NoiseParam) -> NoiseParam {
        let c = self.correlation() * other.correlation();
        NoiseParam { epsilon: (1.0 - c) / 2.0, rho: c * c }
    }
}

pub(crate) fn check_channel_eps(eps: f64) -> Result<()> {
    if (0.0..=0.5).contains(&eps) {
        Ok(())
    } else {
        Err(invalid(format!("epsilon = {} outside [0, 1/2]", eps)))
    }
}

pub(crate) fn check_alpha(alpha: f64) -> Result<()> {
    if alpha >= 1.0 && alpha.is_finite() {
        Ok(())
    } else {
        Err(invalid(format!("alpha = {} must be a finite value >= 1", alpha)))
    }
}

/// `t^α` with `0^α := 0`. Integral exponents use repeated multiplication and
/// accept negative `t`; non-integral exponents map `t ≤ 0` to 0.
#[inline]
pub(crate) fn moment(t: f64, alpha: f64) -> f64 {
    if alpha.fract() == 0.0 && alpha <= i32::MAX as f64 {
        t.powi(alpha as i32)
    } else if t <= 0.0 {
        0.0
    } else {
        t.powf(alpha)
    }
}

/// Spectral noise operator: multiply `f̂(A)` by `(1-2ε)^{|A|}`.
pub fn apply_noise(f: &CubeFunction, eps: f64) -> CubeFunction {
    let c = 1.0 - 2.0 * eps;
    let scaled = wht(f).scale_by_degree(|d| c.powi(d as i32));
    wht_inverse(&scaled)
}

/// Direct convolution with the product Bernoulli(ε) kernel. Each coordinate
/// pass maps a pair `(a, b) ↦ ((1-ε)a + εb, εa + (1-ε)b)`.
pub fn apply_noise_direct(f: &CubeFunction, eps: f64) -> CubeFunction {
    let mut values = f.values().to_vec();
    convolve_in_place(&mut values, eps);
    CubeFunction::from_values_unchecked(f.n(), values)
}

pub(crate) fn convolve_in_place(values: &mut [f64], eps: f64) {
    let keep = 1.0 - eps;
    let len = values.len();
    let mut half = 1;
    while half < len {
        for block in values.chunks_exact_mut(2 * half) {
            let (lo, hi) = block.split_at_mut(half);
            for (a, b) in lo.iter_mut().zip(hi.iter_mut()) {
                let (u, v) = (*a, *b);
                *a = keep * u + eps * v;
                *b = eps * u + keep * v;
            }
        }
        half *= 2;
    }
}

/// `T_ε f` for Boolean `f` on a channel `ε ∈ [0, 1]`, clamped to `[0, 1]`
/// to absorb rounding from the spectral path.
pub(crate) fn noisy_values(f: &BooleanFunction, eps: f64) -> Vec<f64> {
    let mut values = apply_noise(&f.to_cube_function(), eps).into_values();
    for v in &mut values {
        *v = v.clamp(0.0, 1.0);
    }
    values
}

fn mean_of(values: &[f64], g: impl Fn(f64) -> f64) -> f64 {
    values.iter().map(|&t| g(t)).sum::<f64>() / values.len() as f64
}

/// α-stability `𝔼(T_ε f)^α` for `α ≥ 1`, `ε ∈ [0, 1/2]`.
pub fn alpha_stability(f: &BooleanFunction, alpha: f64, eps: f64) -> Result<f64> {
    check_alpha(alpha)?;
    check_channel_eps(eps)?;
    let values = noisy_values(f, eps);
    Ok(mean_of(&values, |t| moment(t, alpha)))
}

/// `𝔼(T_ε f)^α` through the spectral path at any real `ε`, without clamping.
///
/// For integer `α` this is a polynomial in `ε`, which makes central finite
/// differences at `ε = 0` meaningful.
pub fn alpha_stability_extended(f: &BooleanFunction, alpha: f64, eps: f64) -> Result<f64> {
    check_alpha(alpha)?;
    let values = apply_noise(&f.to_cube_function(), eps).into_values();
    Ok(mean_of(&values, |t| moment(t, alpha)))
}

/// `𝔼 ∏_i f_i(Y^i) = 2^{-n} Σ_x ∏_i T_ε f_i(x)` for independent noisy copies
/// `Y^i` of one uniform string.
pub fn correlation_star(fs: &[BooleanFunction], eps: f64) -> Result<f64> {
    let first = fs.first().ok_or_else(|| invalid("correlation of an empty list"))?;
    for f in fs {
        if f.n() != first.n() {
            return Err(Error::DimensionMismatch { expected: first.n(), got: f.n() });
        }
    }
    check_channel_eps(eps)?;
    let mut product = vec![1.0; first.domain_size()];
    for f in fs {
        for (p, t) in product.iter_mut().zip(noisy_values(f, eps)) {
            *p *= t;
        }
    }
    Ok(mean_of(&product, |t| t))
}

/// `ℙ(f(Y¹) = ⋯ = f(Y^k))`. Conditioned on the source string the outputs
/// are independent, so this is `𝔼[(T_ε f)^k] + 𝔼[(1 - T_ε f)^k]`.
pub fn agreement_probability(f: &BooleanFunction, k: u32, eps: f64) -> Result<f64> {
    if k < 2 {
        return Err(invalid(format!("agreement needs k >= 2 players, got {}", k)));
    }
    check_channel_eps(eps)?;
    let values = noisy_values(f, eps);
    let k = k as i32;
    Ok(mean_of(&values, |t| t.powi(k) + (1.0 - t).powi(k)))
}

/// `Lf = -Σ_A |A| f̂(A) W_A`.
pub fn laplacian(f: &CubeFunction) -> CubeFunction {
    wht_inverse(&wht(f).scale_by_degree(|d| -(d as f64)))
}

/// `d/dε 𝔼(T_ε f)^α` at `ε = 0`, which equals `-α I(f) / 2`.
pub fn stability_slope_zero(f: &BooleanFunction, alpha: f64) -> Result<f64> {
    check_alpha(alpha)?;
    Ok(-alpha * total_influence(f) / 2.0)
}

/// `𝔼 Φ(T_ε f)` for a convex `Φ` on `[0, 1]`.
pub fn phi_stability(f: &BooleanFunction, phi: &PhiSpec, eps: f64) -> Result<f64> {
    check_channel_eps(eps)?;
    mean_phi(&noisy_values(f, eps), phi)
}

pub(crate) fn mean_phi(values: &[f64], phi: &PhiSpec) -> Result<f64> {
    let mut sum = 0.0;
    for &t in values {
        sum += phi.eval(t)?;
    }
    Ok(sum / values.len() as f64)
}

/// Slack allowed outside `[0, 1]` before a domain-restricted `Φ` reports an error.
const DOMAIN_SLACK: f64 = 1e-9;

/// `x log₂ x` with `0 log 0 := 0`.
#[inline]
pub(crate) fn xlog2x(x: f64) -> f64 {
    if x <= 0.0 {
        0.0
    } else {
        x * x.log2()
    }
}

/// A convex function `Φ` on `[0, 1]`.
#[derive(Clone)]
pub enum PhiSpec {
    /// `x^α`, `α ≥ 1`.
    Power(f64),
    /// `1 + x log₂ x + (1-x) log₂(1-x)`.
    EntropyPair,
    /// `1 - 2√(x(1-x))`.
    Hellinger,
    /// Caller-supplied; convexity is the caller's responsibility.
    Custom(CustomPhi),
}

#[derive(Clone)]
pub struct CustomPhi {
    name: String,
    func: Arc<dyn Fn(f64) -> f64 + Send + Sync>,
}

impl PhiSpec {
    pub fn power(alpha: f64) -> Result<Self> {
        check_alpha(alpha)?;
        Ok(PhiSpec::Power(alpha))
    }

    pub fn custom(name: impl Into<String>, func: impl Fn(f64) -> f64 + Send + Sync + 'static) -> Self {
        PhiSpec::Custom(CustomPhi { name: name.into(), func: Arc::new(func) })
    }

    pub fn eval(&self, x: f64) -> Result<f64> {
        match self {
            PhiSpec::Power(alpha) => Ok(moment(x, *alpha)),
            PhiSpec::EntropyPair => {
                let x = clamp_unit(x)?;
                Ok(1.0 + xlog2x(x) + xlog2x(1.0 - x))
            }
            PhiSpec::Hellinger => {
                let x = clamp_unit(x)?;
                Ok(1.0 - 2.0 * (x * (1.0 - x)).sqrt())
            }
            PhiSpec::Custom(c) => Ok((c.func)(x)),
        }
    }

    pub fn name(&self) -> String {
        match self {
            PhiSpec::Power(a) => format!("power({})", a),
            PhiSpec::EntropyPair => "entropy-pair".into(),
            PhiSpec::Hellinger => "hellinger".into(),
            PhiSpec::Custom(c) => format!("custom({})", c.name),
        }
    }
}

fn clamp_unit(x: f64) -> Result<f64> {
    if (-DOMAIN_SLACK..=1.0 + DOMAIN_SLACK).contains(&x) {
        Ok(x.clamp(0.0, 1.0))
    } else {
        Err(Error::PhiDomain { value: x })
    }
}

impl fmt::Debug for PhiSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.name())
    }
}

#[derive(Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
enum PhiRepr {
    Power { alpha: f64 },
    EntropyPair,
    Hellinger,
    Custom { name: String },
}

impl Serialize for PhiSpec {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let repr = match self {
            PhiSpec::Power(alpha) => PhiRepr::Power { alpha: *alpha },
            PhiSpec::EntropyPair => PhiRepr::EntropyPair,
            PhiSpec::Hellinger => PhiRepr::Hellinger,
            PhiSpec::Custom(c) => PhiRepr::Custom { name: c.name.clone() },
        };
        repr.serialize(s)
    }
}

impl<'de> Deserialize<'de> for PhiSpec {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        match PhiRepr::deserialize(d)? {
            PhiRepr::Power { alpha } => PhiSpec::power(alpha).map_err(serde::de::Error::custom),
            PhiRepr::EntropyPair => Ok(PhiSpec::EntropyPair),
            PhiRepr::Hellinger => Ok(PhiSpec::Hellinger),
            PhiRepr::Custom { name } => Err(serde::de::Error::custom(format!(
                "custom function {:?} cannot be deserialized",
                name
            ))),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cube::BooleanFunction;

    fn dict1() -> BooleanFunction {
        BooleanFunction::from_support(1, [1]).unwrap()
    }

    fn parity2() -> BooleanFunction {
        BooleanFunction::from_fn(2, |x| x.count_ones() % 2 == 1).unwrap()
    }

    fn maj3() -> BooleanFunction {
        BooleanFunction::from_fn(3, |x| x.count_ones() >= 2).unwrap()
    }

    fn close(a: f64, b: f64) -> bool {
        (a - b).abs() < 1e-12
    }

    #[test]
    fn noise_param() {
        let p = NoiseParam::new(0.25).unwrap();
        assert_eq!(p.rho(), 0.25);
        assert!(NoiseParam::new(0.6).is_err());
        assert!(NoiseParam::new(-0.1).is_err());
        let q = NoiseParam::from_rho(0.25).unwrap();
        assert!(close(q.epsilon(), 0.25));
        let c = p.compose(&NoiseParam::new(0.1).unwrap());
        assert!(close(c.correlation(), 0.5 * 0.8));
    }

    #[test]
    fn apply_noise_examples() {
        let f = maj3().to_cube_function();
        assert!(apply_noise(&f, 0.0).max_abs_diff(&f) < 1e-15);
        let flat = apply_noise(&f, 0.5);
        assert!(flat.values().iter().all(|&v| close(v, 0.5)));
        let d = apply_noise(&dict1().to_cube_function(), 0.25);
        assert!(close(d.values()[0], 0.25) && close(d.values()[1], 0.75));
    }

    #[test]
    fn apply_noise_direct_examples() {
        let d = apply_noise_direct(&dict1().to_cube_function(), 0.25);
        assert_eq!(d.values(), &[0.25, 0.75]);
        let c = CubeFunction::constant(4, 0.3).unwrap();
        let t = apply_noise_direct(&c, 0.37);
        assert!(t.values().iter().all(|&v| close(v, 0.3)));

        // Four-term sums for the 2-bit parity indicator at ε = 1/4:
        // value at an even point = ℙ(odd number of flips) = 2·(1/4)(3/4).
        let p = apply_noise_direct(&parity2().to_cube_function(), 0.25);
        let expected = [0.375, 0.625, 0.625, 0.375];
        for (v, e) in p.values().iter().zip(expected) {
            assert!(close(*v, e));
        }
        let spectral = apply_noise(&parity2().to_cube_function(), 0.25);
        assert!(spectral.max_abs_diff(&p) < 1e-12);
    }

    #[test]
    fn alpha_stability_examples() {
        assert!(close(alpha_stability(&dict1(), 2.0, 0.25).unwrap(), 0.3125));
        assert!(close(alpha_stability(&maj3(), 1.0, 0.3).unwrap(), 0.5));
        assert!(close(alpha_stability(&parity2(), 2.0, 0.25).unwrap(), 0.265625));
        // ε = 0 gives 𝔼f since f^α = f.
        assert!(close(alpha_stability(&maj3(), 2.7, 0.0).unwrap(), 0.5));
        assert!(alpha_stability(&maj3(), 0.9, 0.1).is_err());
        assert!(alpha_stability(&maj3(), 2.0, 0.7).is_err());
    }

    #[test]
    fn correlation_star_examples() {
        let d = dict1();
        assert!(close(correlation_star(&[maj3()], 0.2).unwrap(), 0.5));
        assert!(close(correlation_star(&[d.clone(), d.clone()], 0.25).unwrap(), 0.3125));
        assert!(close(correlation_star(&[d.clone(), d.complement()], 0.25).unwrap(), 0.1875));
        assert!(correlation_star(&[], 0.1).is_err());
        assert!(matches!(
            correlation_star(&[d, maj3()], 0.1),
            Err(Error::DimensionMismatch { .. })
        ));
    }

    #[test]
    fn agreement_examples() {
        assert!(close(agreement_probability(&dict1(), 2, 0.25).unwrap(), 0.625));
        for k in 2..6 {
            let expected = 2.0 * 0.5f64.powi(k as i32);
            assert!(close(agreement_probability(&maj3(), k, 0.5).unwrap(), expected));
            let one = BooleanFunction::one(3).unwrap();
            assert!(close(agreement_probability(&one, k, 0.17).unwrap(), 1.0));
        }
        assert!(agreement_probability(&dict1(), 1, 0.1).is_err());
    }

    #[test]
    fn laplacian_examples() {
        let c = CubeFunction::constant(3, 2.5).unwrap();
        assert!(laplacian(&c).values().iter().all(|&v| v.abs() < 1e-15));
        let l = laplacian(&dict1().to_cube_function());
        assert_eq!(l.values(), &[0.5, -0.5]);
        let f = maj3().to_cube_function();
        let lf = laplacian(&f);
        let e: f64 = f.values().iter().zip(lf.values()).map(|(a, b)| a * b).sum::<f64>() / 8.0;
        assert!(close(e, -3.0 / 8.0));
        assert!(lf.mean().abs() < 1e-15);
    }

    #[test]
    fn slope_examples() {
        let dict3 = BooleanFunction::from_fn(3, |x| x & 1 == 1).unwrap();
        assert_eq!(stability_slope_zero(&dict3, 2.0).unwrap(), -1.0);
        assert_eq!(stability_slope_zero(&BooleanFunction::one(3).unwrap(), 4.0).unwrap(), 0.0);
        assert_eq!(stability_slope_zero(&maj3(), 2.0).unwrap(), -1.5);
    }

    #[test]
    fn phi_examples() {
        let f = maj3();
        for alpha in [1.0, 1.5, 2.0, 3.0] {
            let a = phi_stability(&f, &PhiSpec::power(alpha).unwrap(), 0.2).unwrap();
            let b = alpha_stability(&f, alpha, 0.2).unwrap();
            assert_eq!(a, b);
        }
        assert!(phi_stability(&f, &PhiSpec::Hellinger, 0.5).unwrap().abs() < 1e-12);
        let h = -(0.25f64 * 0.25f64.log2() + 0.75 * 0.75f64.log2());
        let e = phi_stability(&dict1(), &PhiSpec::EntropyPair, 0.25).unwrap();
        assert!(close(e, 1.0 - h));
        assert!((e - 0.188722).abs() < 1e-6);
    }

    #[test]
    fn phi_domain_errors() {
        assert!(matches!(PhiSpec::EntropyPair.eval(1.5), Err(Error::PhiDomain { .. })));
        assert!(matches!(PhiSpec::Hellinger.eval(-0.1), Err(Error::PhiDomain { .. })));
        assert_eq!(PhiSpec::EntropyPair.eval(0.0).unwrap(), 1.0);
        assert!(PhiSpec::power(0.5).is_err());
        let sq = PhiSpec::custom("square", |x| x * x);
        assert_eq!(sq.eval(3.0).unwrap(), 9.0);
    }

    #[test]
    fn phi_serde() {
        let json = serde_json::to_string(&PhiSpec::Power(2.5)).unwrap();
        let back: PhiSpec = serde_json::from_str(&json).unwrap();
        assert!(matches!(back, PhiSpec::Power(a) if a == 2.5));
        let h: PhiSpec = serde_json::from_str("\"hellinger\"").unwrap();
        assert!(matches!(h, PhiSpec::Hellinger));
        let custom = serde_json::to_string(&PhiSpec::custom("c", |x| x)).unwrap();
        assert!(serde_json::from_str::<PhiSpec>(&custom).is_err());
    }
}
