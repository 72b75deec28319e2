//! Functions on the discrete torus `(ℤ/pℤ)^n`.
//!
//! Points are indexed by `idx(x) = Σ x_i p^(i-1)`, so coordinate 1 varies
//! fastest. Fourier coefficients are `f̂(ξ) = 𝔼 f(x) e_p(-ξ·x)` with
//! `e_p(θ) = exp(2πiθ/p)`, which makes `f = Σ_ξ f̂(ξ) e_p(ξ·x)`.
//!
//! Two noise models are supported. `Uniform` keeps each coordinate with
//! probability `1-ε` and otherwise moves it to one of the other `p-1` values;
//! `Nearest` moves it by `±1`, each with probability `ε/2`.

use std::f64::consts::PI;
use std::fmt;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{invalid, Error, Result};
use crate::noise::{check_alpha, mean_phi, moment, PhiSpec};

/// Largest `p^n` accepted.
pub const MAX_TORUS_SIZE: usize = 1 << 22;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum NoiseModel {
    Uniform,
    Nearest,
}

impl NoiseModel {
    /// Largest admissible ε for modulus `p`.
    pub fn max_eps(self, p: usize) -> f64 {
        match self {
            NoiseModel::Uniform => 1.0 - 1.0 / p as f64,
            NoiseModel::Nearest => 1.0,
        }
    }

    fn check(self, p: usize, eps: f64) -> Result<()> {
        let max = self.max_eps(p);
        if (0.0..=max).contains(&eps) {
            Ok(())
        } else {
            Err(invalid(format!("epsilon = {} outside [0, {}] for the {:?} model", eps, max, self)))
        }
    }

    /// Per-coordinate spectral multiplier at frequency `xi`.
    fn multiplier(self, p: usize, eps: f64, xi: usize) -> f64 {
        if xi == 0 {
            return 1.0;
        }
        match self {
            NoiseModel::Uniform => 1.0 - p as f64 * eps / (p as f64 - 1.0),
            NoiseModel::Nearest => 1.0 - eps * (1.0 - (2.0 * PI * xi as f64 / p as f64).cos()),
        }
    }

    /// Distribution of a single noise coordinate `Z_j` on `ℤ/pℤ`.
    pub fn kernel(self, p: usize, eps: f64) -> Vec<f64> {
        let mut k = vec![0.0; p];
        k[0] = 1.0 - eps;
        match self {
            NoiseModel::Uniform => {
                for w in &mut k[1..] {
                    *w = eps / (p as f64 - 1.0);
                }
            }
            NoiseModel::Nearest => {
                k[1] += eps / 2.0;
                k[p - 1] += eps / 2.0;
            }
        }
        k
    }
}

/// Real-valued function on `(ℤ/pℤ)^n`.
#[derive(Clone, Debug, PartialEq)]
pub struct TorusFunction {
    p: usize,
    n: usize,
    values: Vec<f64>,
}

fn torus_size(p: usize, n: usize) -> Result<usize> {
    if p < 2 {
        return Err(invalid(format!("modulus p = {} must be at least 2", p)));
    }
    let size = u32::try_from(n)
        .ok()
        .and_then(|n| p.checked_pow(n))
        .filter(|&s| s <= MAX_TORUS_SIZE)
        .ok_or_else(|| invalid(format!("torus {}^{} exceeds {} points", p, n, MAX_TORUS_SIZE)))?;
    Ok(size)
}

impl TorusFunction {
    pub fn new(p: usize, n: usize, values: Vec<f64>) -> Result<Self> {
        let size = torus_size(p, n)?;
        if values.len() != size {
            return Err(Error::LengthMismatch { expected: size, got: values.len() });
        }
        Ok(Self { p, n, values })
    }

    pub fn from_fn(p: usize, n: usize, mut g: impl FnMut(&[usize]) -> f64) -> Result<Self> {
        let size = torus_size(p, n)?;
        let mut x = vec![0usize; n];
        let values = (0..size)
            .map(|idx| {
                decode_into(p, idx, &mut x);
                g(&x)
            })
            .collect();
        Ok(Self { p, n, values })
    }

    /// Indicator of a set of point indices.
    pub fn from_support<I: IntoIterator<Item = usize>>(p: usize, n: usize, support: I) -> Result<Self> {
        let size = torus_size(p, n)?;
        let mut values = vec![0.0; size];
        for idx in support {
            if idx >= size {
                return Err(Error::IndexOutOfRange { index: idx, size });
            }
            values[idx] = 1.0;
        }
        Ok(Self { p, n, values })
    }

    /// Parses a table of `p^n` characters `0`/`1` in index order.
    pub fn from_table(p: usize, n: usize, table: &str) -> Result<Self> {
        let size = torus_size(p, n)?;
        let table = table.trim();
        if table.chars().count() != size {
            return Err(Error::LengthMismatch { expected: size, got: table.chars().count() });
        }
        let values = table
            .chars()
            .map(|c| match c {
                '0' => Ok(0.0),
                '1' => Ok(1.0),
                _ => Err(Error::MalformedTable(format!("unexpected character {:?} in torus table", c))),
            })
            .collect::<Result<_>>()?;
        Ok(Self { p, n, values })
    }

    /// Indicator of points given as base-`p` digit strings, coordinate 1 first.
    pub fn from_points<S: AsRef<str>>(p: usize, n: usize, points: &[S]) -> Result<Self> {
        let support = points
            .iter()
            .map(|s| parse_point(p, n, s.as_ref()))
            .collect::<Result<Vec<_>>>()?;
        Self::from_support(p, n, support)
    }

    pub fn p(&self) -> usize {
        self.p
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn size(&self) -> usize {
        self.values.len()
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn mean(&self) -> f64 {
        self.values.iter().sum::<f64>() / self.size() as f64
    }

    pub fn is_boolean(&self) -> bool {
        self.values.iter().all(|&v| v == 0.0 || v == 1.0)
    }

    fn require_boolean(&self) -> Result<()> {
        if self.is_boolean() {
            Ok(())
        } else {
            Err(Error::MalformedTable("torus function is not 0/1-valued".into()))
        }
    }

    pub fn get_bool(&self, idx: usize) -> bool {
        self.values[idx] != 0.0
    }

    pub fn support(&self) -> Vec<usize> {
        (0..self.size()).filter(|&i| self.get_bool(i)).collect()
    }

    pub fn support_size(&self) -> usize {
        self.values.iter().filter(|&&v| v != 0.0).count()
    }

    /// `0`/`1` table in index order; real values are rounded away from zero.
    pub fn to_table(&self) -> String {
        self.values.iter().map(|&v| if v != 0.0 { '1' } else { '0' }).collect()
    }

    pub fn max_abs_diff(&self, other: &TorusFunction) -> f64 {
        self.values
            .iter()
            .zip(&other.values)
            .map(|(a, b)| (a - b).abs())
            .fold(0.0, f64::max)
    }

    /// Index stride of coordinate `j` (0-based).
    fn stride(&self, j: usize) -> usize {
        self.p.pow(j as u32)
    }

    /// Index of `x + delta·e_j` where `x` has index `idx`.
    fn step(&self, idx: usize, j: usize, delta: usize) -> usize {
        let stride = self.stride(j);
        let digit = idx / stride % self.p;
        let moved = (digit + delta) % self.p;
        idx - digit * stride + moved * stride
    }
}

impl fmt::Display for TorusFunction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_table())
    }
}

fn decode_into(p: usize, mut idx: usize, x: &mut [usize]) {
    for d in x.iter_mut() {
        *d = idx % p;
        idx /= p;
    }
}

/// Coordinates of the point with index `idx`.
pub fn decode_point(p: usize, n: usize, idx: usize) -> Vec<usize> {
    let mut x = vec![0; n];
    decode_into(p, idx, &mut x);
    x
}

fn parse_point(p: usize, n: usize, s: &str) -> Result<usize> {
    let digits: Vec<u32> = s
        .trim()
        .chars()
        .map(|c| c.to_digit(36).filter(|&d| (d as usize) < p))
        .collect::<Option<_>>()
        .ok_or_else(|| Error::MalformedTable(format!("{:?} is not a base-{} point", s, p)))?;
    if digits.len() != n {
        return Err(Error::LengthMismatch { expected: n, got: digits.len() });
    }
    Ok(digits.iter().rev().fold(0usize, |acc, &d| acc * p + d as usize))
}

/// Serialized as `{p, n, table}` with a `0`/`1` table.
impl Serialize for TorusFunction {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        use serde::ser::SerializeStruct;
        let mut st = s.serialize_struct("TorusFunction", 3)?;
        st.serialize_field("p", &self.p)?;
        st.serialize_field("n", &self.n)?;
        st.serialize_field("table", &self.to_table())?;
        st.end()
    }
}

impl<'de> Deserialize<'de> for TorusFunction {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        #[derive(Deserialize)]
        struct Repr {
            p: usize,
            n: usize,
            table: String,
        }
        let r = Repr::deserialize(d)?;
        TorusFunction::from_table(r.p, r.n, &r.table).map_err(serde::de::Error::custom)
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct TorusSpectrum {
    p: usize,
    n: usize,
    coeffs: Vec<Complex64>,
}

impl TorusSpectrum {
    pub fn p(&self) -> usize {
        self.p
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn coeffs(&self) -> &[Complex64] {
        &self.coeffs
    }

    pub fn coeff(&self, xi: &[usize]) -> Complex64 {
        let idx = xi.iter().rev().fold(0, |acc, &d| acc * self.p + d % self.p);
        self.coeffs[idx]
    }

    pub fn energy(&self) -> f64 {
        self.coeffs.iter().map(|c| c.norm_sqr()).sum()
    }

    /// `Σ_{|supp ξ| = 1} |f̂(ξ)|²`.
    pub fn degree1_weight(&self) -> f64 {
        let mut xi = vec![0; self.n];
        (0..self.coeffs.len())
            .filter(|&idx| {
                decode_into(self.p, idx, &mut xi);
                xi.iter().filter(|&&d| d != 0).count() == 1
            })
            .map(|idx| self.coeffs[idx].norm_sqr())
            .sum()
    }
}

/// Length-`p` DFT along every axis. `sign = -1` gives the forward kernel.
fn dft_axes(p: usize, n: usize, data: &mut [Complex64], sign: f64) {
    let roots: Vec<Complex64> = (0..p)
        .map(|k| Complex64::from_polar(1.0, sign * 2.0 * PI * k as f64 / p as f64))
        .collect();
    let mut line = vec![Complex64::new(0.0, 0.0); p];
    for axis in 0..n {
        let stride = p.pow(axis as u32);
        for base in (0..data.len()).filter(|i| i / stride % p == 0) {
            for (t, slot) in line.iter_mut().enumerate() {
                *slot = data[base + t * stride];
            }
            for xi in 0..p {
                data[base + xi * stride] = (0..p).map(|t| line[t] * roots[xi * t % p]).sum();
            }
        }
    }
}

pub fn torus_dft(f: &TorusFunction) -> TorusSpectrum {
    let mut data: Vec<Complex64> = f.values.iter().map(|&v| Complex64::new(v, 0.0)).collect();
    dft_axes(f.p, f.n, &mut data, -1.0);
    let scale = 1.0 / f.size() as f64;
    for c in &mut data {
        *c *= scale;
    }
    TorusSpectrum { p: f.p, n: f.n, coeffs: data }
}

/// Real part of the inverse transform.
pub fn torus_dft_inverse(s: &TorusSpectrum) -> TorusFunction {
    let mut data = s.coeffs.clone();
    dft_axes(s.p, s.n, &mut data, 1.0);
    TorusFunction { p: s.p, n: s.n, values: data.into_iter().map(|c| c.re).collect() }
}

/// Spectral noise operator.
pub fn torus_apply_noise(f: &TorusFunction, eps: f64, model: NoiseModel) -> Result<TorusFunction> {
    model.check(f.p, eps)?;
    let mut s = torus_dft(f);
    let per: Vec<f64> = (0..f.p).map(|xi| model.multiplier(f.p, eps, xi)).collect();
    let mut xi = vec![0; f.n];
    for (idx, c) in s.coeffs.iter_mut().enumerate() {
        decode_into(f.p, idx, &mut xi);
        *c *= xi.iter().map(|&d| per[d]).product::<f64>();
    }
    Ok(torus_dft_inverse(&s))
}

/// `T_ε f(x) = 𝔼 f(x + Z)` by coordinatewise convolution with the kernel.
pub fn torus_apply_noise_direct(f: &TorusFunction, eps: f64, model: NoiseModel) -> Result<TorusFunction> {
    model.check(f.p, eps)?;
    let p = f.p;
    let kernel = model.kernel(p, eps);
    let mut values = f.values.clone();
    let mut line = vec![0.0; p];
    for axis in 0..f.n {
        let stride = f.stride(axis);
        for base in (0..values.len()).filter(|i| i / stride % p == 0) {
            for (t, slot) in line.iter_mut().enumerate() {
                *slot = values[base + t * stride];
            }
            for x in 0..p {
                values[base + x * stride] = (0..p).map(|z| kernel[z] * line[(x + z) % p]).sum();
            }
        }
    }
    Ok(TorusFunction { p, n: f.n, values })
}

/// `p^{-n} Σ_x (T_ε f(x))^α`.
pub fn torus_alpha_stability(f: &TorusFunction, alpha: f64, eps: f64, model: NoiseModel) -> Result<f64> {
    check_alpha(alpha)?;
    f.require_boolean()?;
    let t = torus_apply_noise(f, eps, model)?;
    Ok(t.values.iter().map(|&v| moment(v.clamp(0.0, 1.0), alpha)).sum::<f64>() / f.size() as f64)
}

/// `𝔼 Φ(T_ε f)`.
pub fn torus_phi_stability(f: &TorusFunction, phi: &PhiSpec, eps: f64, model: NoiseModel) -> Result<f64> {
    f.require_boolean()?;
    let t = torus_apply_noise(f, eps, model)?;
    let clamped: Vec<f64> = t.values.iter().map(|v| v.clamp(0.0, 1.0)).collect();
    mean_phi(&clamped, phi)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum InfluenceFlavor {
    /// Resample the coordinate uniformly among the other `p-1` values.
    RandomFlip,
    /// Move the coordinate by `±1` with equal probability.
    Nearest,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum TorusInfluenceMethod {
    Direct,
    Fourier,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct TorusInfluenceReport {
    pub per_coordinate: Vec<f64>,
    pub total: f64,
    pub flavor: InfluenceFlavor,
    pub method: TorusInfluenceMethod,
}

pub fn torus_influence(
    f: &TorusFunction,
    flavor: InfluenceFlavor,
    method: TorusInfluenceMethod,
) -> Result<TorusInfluenceReport> {
    f.require_boolean()?;
    let p = f.p;
    let size = f.size() as f64;
    let per: Vec<f64> = match method {
        TorusInfluenceMethod::Direct => (0..f.n)
            .map(|j| {
                let deltas: Vec<usize> = match flavor {
                    InfluenceFlavor::RandomFlip => (1..p).collect(),
                    InfluenceFlavor::Nearest => vec![1, p - 1],
                };
                let changes: usize = (0..f.size())
                    .map(|x| {
                        deltas
                            .iter()
                            .filter(|&&d| f.get_bool(x) != f.get_bool(f.step(x, j, d)))
                            .count()
                    })
                    .sum();
                changes as f64 / (deltas.len() as f64 * size)
            })
            .collect(),
        TorusInfluenceMethod::Fourier => {
            let s = torus_dft(f);
            let weight = |xi: usize| -> f64 {
                match flavor {
                    InfluenceFlavor::RandomFlip if xi != 0 => 2.0 * p as f64 / (p as f64 - 1.0),
                    InfluenceFlavor::RandomFlip => 0.0,
                    InfluenceFlavor::Nearest => 2.0 * (1.0 - (2.0 * PI * xi as f64 / p as f64).cos()),
                }
            };
            let mut per = vec![0.0; f.n];
            let mut xi = vec![0; f.n];
            for (idx, c) in s.coeffs.iter().enumerate() {
                decode_into(p, idx, &mut xi);
                let w = c.norm_sqr();
                for (slot, &d) in per.iter_mut().zip(&xi) {
                    *slot += weight(d) * w;
                }
            }
            per
        }
    };
    let total = per.iter().sum();
    Ok(TorusInfluenceReport { per_coordinate: per, total, flavor, method })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct TorusBoundary {
    pub per_direction: Vec<u64>,
    pub total: u64,
}

/// Unordered `±1` edges with exactly one endpoint in the support. At `p = 2`
/// the two directions coincide and each edge is counted once.
pub fn torus_edge_boundary(f: &TorusFunction) -> Result<TorusBoundary> {
    f.require_boolean()?;
    let per_direction: Vec<u64> = (0..f.n)
        .map(|j| {
            let cut = (0..f.size())
                .filter(|&x| f.get_bool(x) != f.get_bool(f.step(x, j, 1)))
                .count() as u64;
            if f.p == 2 {
                cut / 2
            } else {
                cut
            }
        })
        .collect();
    let total = per_direction.iter().sum();
    Ok(TorusBoundary { per_direction, total })
}

/// `f(x) ≤ f(x + e_j)` whenever `x_j < p - 1`, i.e. monotone for the
/// componentwise order induced by `0 < 1 < ⋯ < p-1`.
pub fn torus_is_monotone(f: &TorusFunction) -> bool {
    (0..f.n).all(|j| {
        let stride = f.stride(j);
        (0..f.size())
            .filter(|x| x / stride % f.p != f.p - 1)
            .all(|x| f.values[x] <= f.values[x + stride])
    })
}

/// `Σ_{x∈S} Σ_i x_i`.
pub fn torus_potential(f: &TorusFunction) -> u64 {
    let mut x = vec![0; f.n];
    f.support()
        .into_iter()
        .map(|idx| {
            decode_into(f.p, idx, &mut x);
            x.iter().sum::<usize>() as u64
        })
        .sum()
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct PairShiftStep {
    /// 1-based coordinate.
    pub coordinate: usize,
    pub low: usize,
    pub high: usize,
    pub moved: usize,
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
pub struct PairShiftTrace {
    pub steps: Vec<PairShiftStep>,
    pub passes: usize,
    pub final_potential: u64,
}

/// Along 1-based coordinate `i`, every line with exactly one of the values
/// `low < high` in the support has that point moved to `high`.
pub fn torus_pair_shift(f: &TorusFunction, i: usize, low: usize, high: usize) -> Result<(TorusFunction, usize)> {
    f.require_boolean()?;
    if i == 0 || i > f.n {
        return Err(invalid(format!("coordinate {} outside 1..={}", i, f.n)));
    }
    if low >= high || high >= f.p {
        return Err(invalid(format!("pair ({}, {}) needs low < high < p", low, high)));
    }
    let stride = f.stride(i - 1);
    let mut values = f.values.clone();
    let mut moved = 0;
    for base in (0..f.size()).filter(|x| x / stride % f.p == 0) {
        let (a, b) = (base + low * stride, base + high * stride);
        if values[a] == 1.0 && values[b] == 0.0 {
            values[a] = 0.0;
            values[b] = 1.0;
            moved += 1;
        }
    }
    Ok((TorusFunction { p: f.p, n: f.n, values }, moved))
}

/// Sweeps pair shifts (coordinates outer, pairs `(low, high)` in
/// lexicographic order inner) until a sweep moves nothing. `visit` sees
/// every moving step with the function before and after it.
pub fn torus_monotonize_with(
    f: &TorusFunction,
    mut visit: impl FnMut(&PairShiftStep, &TorusFunction, &TorusFunction),
) -> Result<(TorusFunction, PairShiftTrace)> {
    f.require_boolean()?;
    let mut current = f.clone();
    let mut trace = PairShiftTrace::default();
    loop {
        let mut any = false;
        for i in 1..=f.n {
            for low in 0..f.p {
                for high in low + 1..f.p {
                    let (next, moved) = torus_pair_shift(&current, i, low, high)?;
                    if moved > 0 {
                        let step = PairShiftStep { coordinate: i, low, high, moved };
                        visit(&step, &current, &next);
                        trace.steps.push(step);
                        current = next;
                        any = true;
                    }
                }
            }
        }
        if !any {
            break;
        }
        trace.passes += 1;
    }
    trace.final_potential = torus_potential(&current);
    Ok((current, trace))
}

pub fn torus_monotonize(f: &TorusFunction) -> Result<(TorusFunction, PairShiftTrace)> {
    torus_monotonize_with(f, |_, _, _| {})
}

#[cfg(test)]
mod tests {
    use super::*;

    fn delta0(p: usize, n: usize) -> TorusFunction {
        TorusFunction::from_support(p, n, [0]).unwrap()
    }

    #[test]
    fn dft_examples() {
        let one = TorusFunction::new(3, 2, vec![1.0; 9]).unwrap();
        let s = torus_dft(&one);
        assert!((s.coeffs()[0] - Complex64::new(1.0, 0.0)).norm() < 1e-15);
        assert!(s.coeffs()[1..].iter().all(|c| c.norm() < 1e-15));

        let s = torus_dft(&delta0(3, 1));
        assert!(s.coeffs().iter().all(|c| (c - Complex64::new(1.0 / 3.0, 0.0)).norm() < 1e-15));
    }

    #[test]
    fn dft_round_trip_parseval_symmetry() {
        let f = TorusFunction::from_fn(5, 2, |x| ((x[0] * 7 + x[1] * 3) % 4) as f64 * 0.3 - 0.2).unwrap();
        let s = torus_dft(&f);
        assert!(torus_dft_inverse(&s).max_abs_diff(&f) < 1e-12);
        let lhs = s.energy();
        let rhs = f.values().iter().map(|v| v * v).sum::<f64>() / 25.0;
        assert!((lhs - rhs).abs() < 1e-12);
        for a in 0..5 {
            for b in 0..5 {
                let c = s.coeff(&[a, b]);
                let m = s.coeff(&[(5 - a) % 5, (5 - b) % 5]);
                assert!((c - m.conj()).norm() < 1e-12);
            }
        }
    }

    #[test]
    fn dft_sign_convention() {
        let f = TorusFunction::from_fn(5, 1, |x| (2.0 * PI * x[0] as f64 / 5.0).sin()).unwrap();
        let s = torus_dft(&f);
        // sin = (e(x) - e(-x)) / 2i, so f̂(1) = -i/2.
        assert!((s.coeff(&[1]) - Complex64::new(0.0, -0.5)).norm() < 1e-12);
    }

    #[test]
    fn noise_examples() {
        let t = torus_apply_noise(&delta0(3, 1), 0.3, NoiseModel::Uniform).unwrap();
        for (v, e) in t.values().iter().zip([0.7, 0.15, 0.15]) {
            assert!((v - e).abs() < 1e-12);
        }
        let f = TorusFunction::from_support(4, 2, [1, 5, 6, 14]).unwrap();
        let t = torus_apply_noise(&f, 0.75, NoiseModel::Uniform).unwrap();
        assert!(t.values().iter().all(|v| (v - f.mean()).abs() < 1e-12));
        for eps in [0.0, 0.2, 0.5, 0.66] {
            let f = TorusFunction::from_support(3, 2, [0, 4, 5]).unwrap();
            let u = torus_apply_noise(&f, eps, NoiseModel::Uniform).unwrap();
            let v = torus_apply_noise(&f, eps, NoiseModel::Nearest).unwrap();
            assert!(u.max_abs_diff(&v) < 1e-12);
        }
        assert!(torus_apply_noise(&f, 0.8, NoiseModel::Uniform).is_err());
        assert!(torus_apply_noise(&f, 1.0, NoiseModel::Nearest).is_ok());
        assert!(torus_apply_noise(&f, -0.1, NoiseModel::Nearest).is_err());
    }

    #[test]
    fn spectral_matches_direct() {
        for (p, n) in [(3, 2), (5, 2), (4, 3), (2, 3)] {
            let f = TorusFunction::from_fn(p, n, |x| ((x.iter().sum::<usize>() * 5 + x[0]) % 3 == 0) as u8 as f64)
                .unwrap();
            for model in [NoiseModel::Uniform, NoiseModel::Nearest] {
                for eps in [0.0, 0.1, 0.3, 0.5] {
                    let a = torus_apply_noise(&f, eps, model).unwrap();
                    let b = torus_apply_noise_direct(&f, eps, model).unwrap();
                    assert!(a.max_abs_diff(&b) < 1e-12, "p={} n={} {:?} eps={}", p, n, model, eps);
                }
            }
        }
    }

    #[test]
    fn stability_examples() {
        let d = delta0(3, 1);
        let v = torus_alpha_stability(&d, 2.0, 0.3, NoiseModel::Uniform).unwrap();
        assert!((v - (0.49 + 2.0 * 0.0225) / 3.0).abs() < 1e-12);
        let f = TorusFunction::from_support(5, 2, [0, 3, 7, 19]).unwrap();
        let m = torus_alpha_stability(&f, 1.0, 0.4, NoiseModel::Nearest).unwrap();
        assert!((m - f.mean()).abs() < 1e-12);
        let c = torus_alpha_stability(&f, 3.0, 0.8, NoiseModel::Uniform).unwrap();
        assert!((c - f.mean().powi(3)).abs() < 1e-12);
        assert!(torus_alpha_stability(&f, 0.5, 0.1, NoiseModel::Uniform).is_err());
        let real = TorusFunction::new(2, 1, vec![0.5, 1.0]).unwrap();
        assert!(torus_alpha_stability(&real, 2.0, 0.1, NoiseModel::Uniform).is_err());
    }

    #[test]
    fn influence_examples() {
        let r = torus_influence(&delta0(3, 1), InfluenceFlavor::RandomFlip, TorusInfluenceMethod::Direct).unwrap();
        assert!((r.total - 2.0 / 3.0).abs() < 1e-15);
        for m in [TorusInfluenceMethod::Direct, TorusInfluenceMethod::Fourier] {
            let r = torus_influence(&delta0(5, 1), InfluenceFlavor::Nearest, m).unwrap();
            assert!((r.total - 0.4).abs() < 1e-12);
            let c = TorusFunction::new(3, 2, vec![1.0; 9]).unwrap();
            for flavor in [InfluenceFlavor::RandomFlip, InfluenceFlavor::Nearest] {
                assert!(torus_influence(&c, flavor, m).unwrap().total.abs() < 1e-12);
            }
        }
        assert_eq!(torus_edge_boundary(&delta0(5, 1)).unwrap().total, 2);
        assert_eq!(torus_edge_boundary(&delta0(3, 2)).unwrap().total, 4);
        assert_eq!(torus_edge_boundary(&TorusFunction::new(4, 1, vec![1.0; 4]).unwrap()).unwrap().total, 0);
    }

    #[test]
    fn influence_identities_exhaustive_p3_n2() {
        for mask in 0u32..1 << 9 {
            let f = TorusFunction::from_support(3, 2, (0..9).filter(|i| mask >> i & 1 == 1)).unwrap();
            let b = torus_edge_boundary(&f).unwrap();
            for flavor in [InfluenceFlavor::RandomFlip, InfluenceFlavor::Nearest] {
                let d = torus_influence(&f, flavor, TorusInfluenceMethod::Direct).unwrap();
                let s = torus_influence(&f, flavor, TorusInfluenceMethod::Fourier).unwrap();
                for j in 0..2 {
                    assert!((d.per_coordinate[j] - s.per_coordinate[j]).abs() < 1e-12);
                    if flavor == InfluenceFlavor::Nearest {
                        assert!((d.per_coordinate[j] - b.per_direction[j] as f64 / 9.0).abs() < 1e-12);
                    }
                }
            }
        }
    }

    #[test]
    fn table_formats() {
        let f = TorusFunction::from_table(3, 2, "100010001").unwrap();
        assert_eq!(f.support(), vec![0, 4, 8]);
        assert_eq!(f.to_table(), "100010001");
        let g = TorusFunction::from_points(3, 2, &["00", "11", "22"]).unwrap();
        assert_eq!(f, g);
        // Coordinate 1 first: "10" is x = (1, 0), index 1.
        assert_eq!(TorusFunction::from_points(3, 2, &["10"]).unwrap().support(), vec![1]);
        assert_eq!(decode_point(3, 2, 5), vec![2, 1]);
        assert!(TorusFunction::from_table(3, 2, "10001000").is_err());
        assert!(TorusFunction::from_table(3, 2, "10001000x").is_err());
        assert!(TorusFunction::from_points(3, 2, &["30"]).is_err());
        assert!(TorusFunction::from_points(3, 2, &["0"]).is_err());
        assert!(TorusFunction::new(1, 2, vec![0.0]).is_err());
        let json = serde_json::to_string(&f).unwrap();
        assert_eq!(json, r#"{"p":3,"n":2,"table":"100010001"}"#);
        assert_eq!(serde_json::from_str::<TorusFunction>(&json).unwrap(), f);
    }

    #[test]
    fn monotonize_examples() {
        let (g, trace) = torus_monotonize(&delta0(3, 1)).unwrap();
        assert_eq!(g.support(), vec![2]);
        assert_eq!(
            trace.steps,
            vec![
                PairShiftStep { coordinate: 1, low: 0, high: 1, moved: 1 },
                PairShiftStep { coordinate: 1, low: 1, high: 2, moved: 1 },
            ]
        );
        assert_eq!(trace.final_potential, 2);

        let up = TorusFunction::from_fn(4, 2, |x| (x[0] + x[1] >= 4) as u8 as f64).unwrap();
        assert!(torus_is_monotone(&up));
        let (g, trace) = torus_monotonize(&up).unwrap();
        assert_eq!(g, up);
        assert!(trace.steps.is_empty());
    }

    #[test]
    fn monotonize_exhaustive_p3_n2() {
        for mask in 0u32..1 << 9 {
            let f = TorusFunction::from_support(3, 2, (0..9).filter(|i| mask >> i & 1 == 1)).unwrap();
            let (g, trace) = torus_monotonize_with(&f, |step, before, after| {
                let gain = (step.moved * (step.high - step.low)) as u64;
                assert_eq!(torus_potential(after), torus_potential(before) + gain);
            })
            .unwrap();
            assert!(torus_is_monotone(&g));
            assert_eq!(g.support_size(), f.support_size());
            assert_eq!(trace.final_potential, torus_potential(&g));
        }
    }
}
