//! Functions on the discrete cube `{0,1}^n` and the Walsh–Fourier transform.
//!
//! Points are addressed by `idx(x) = Σ x_i 2^(i-1)`: coordinate 1 is the
//! least-significant bit of the index. Every module in the crate uses this
//! convention, and subsets `A ⊆ [n]` of characters are addressed the same way
//! (`mask(A)` has bit `i-1` set iff `i ∈ A`).

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Largest supported dimension.
pub const MAX_DIM: usize = 24;

pub(crate) fn check_dim(n: usize) -> Result<()> {
    if (1..=MAX_DIM).contains(&n) {
        Ok(())
    } else {
        Err(Error::DimensionOutOfRange { n, max: MAX_DIM })
    }
}

// Bits at positions with x_i = 0 inside one 64-bit word, for i < 6.
pub(crate) const LOW_HALF: [u64; 6] = [
    0x5555_5555_5555_5555,
    0x3333_3333_3333_3333,
    0x0f0f_0f0f_0f0f_0f0f,
    0x00ff_00ff_00ff_00ff,
    0x0000_ffff_0000_ffff,
    0x0000_0000_ffff_ffff,
];

/// A Boolean function `f: {0,1}^n → {0,1}` stored as a packed truth table.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct BooleanFunction {
    n: usize,
    words: Vec<u64>,
}

impl BooleanFunction {
    /// The constant-zero function.
    pub fn zero(n: usize) -> Result<Self> {
        check_dim(n)?;
        let words = vec![0u64; (1usize << n).div_ceil(64)];
        Ok(Self { n, words })
    }

    /// The constant-one function.
    pub fn one(n: usize) -> Result<Self> {
        Ok(Self::zero(n)?.complement())
    }

    /// The indicator of `support`: `f(x) = 1` iff `idx(x) ∈ support`.
    pub fn from_support<I: IntoIterator<Item = usize>>(n: usize, support: I) -> Result<Self> {
        let mut f = Self::zero(n)?;
        let size = f.domain_size();
        for index in support {
            if index >= size {
                return Err(Error::IndexOutOfRange { index, size });
            }
            f.set(index, true);
        }
        Ok(f)
    }

    /// Builds the table by evaluating `pred` at every point index.
    pub fn from_fn(n: usize, mut pred: impl FnMut(usize) -> bool) -> Result<Self> {
        let mut f = Self::zero(n)?;
        for x in 0..f.domain_size() {
            if pred(x) {
                f.set(x, true);
            }
        }
        Ok(f)
    }

    /// Wraps raw table words. Bits at positions `≥ 2^n` must be clear.
    pub fn from_words(n: usize, words: Vec<u64>) -> Result<Self> {
        check_dim(n)?;
        let expected = (1usize << n).div_ceil(64);
        if words.len() != expected {
            return Err(Error::LengthMismatch { expected, got: words.len() });
        }
        let f = Self { n, words };
        if f.words[expected - 1] & !f.last_word_mask() != 0 {
            return Err(Error::MalformedTable(format!(
                "bits set beyond the 2^{} table",
                n
            )));
        }
        Ok(f)
    }

    /// Parses the hex truth-table format: `⌈2^n/4⌉` hex digits, most
    /// significant nibble first, bit `idx(x)` counted from the least
    /// significant end.
    pub fn from_hex(n: usize, hex: &str) -> Result<Self> {
        let mut f = Self::zero(n)?;
        let size = f.domain_size();
        let digits = size.div_ceil(4);
        let hex = hex.trim();
        if hex.len() != digits {
            return Err(Error::MalformedTable(format!(
                "expected {} hex digits for n = {}, got {}",
                digits,
                n,
                hex.len()
            )));
        }
        for (pos, ch) in hex.chars().rev().enumerate() {
            let nibble = ch
                .to_digit(16)
                .ok_or_else(|| Error::MalformedTable(format!("invalid hex digit {:?}", ch)))?
                as usize;
            for b in 0..4 {
                if nibble >> b & 1 == 1 {
                    let index = 4 * pos + b;
                    if index >= size {
                        return Err(Error::MalformedTable(format!(
                            "bit {} set beyond the 2^{} table",
                            index, n
                        )));
                    }
                    f.set(index, true);
                }
            }
        }
        Ok(f)
    }

    /// Lowercase hex encoding, inverse of [`BooleanFunction::from_hex`].
    pub fn to_hex(&self) -> String {
        let size = self.domain_size();
        let digits = size.div_ceil(4);
        (0..digits)
            .rev()
            .map(|pos| {
                let mut nibble = 0u32;
                for b in 0..4 {
                    let index = 4 * pos + b;
                    if index < size && self.get(index) {
                        nibble |= 1 << b;
                    }
                }
                std::char::from_digit(nibble, 16).unwrap()
            })
            .collect()
    }

    pub fn n(&self) -> usize {
        self.n
    }

    /// `2^n`.
    pub fn domain_size(&self) -> usize {
        1usize << self.n
    }

    pub fn words(&self) -> &[u64] {
        &self.words
    }

    #[inline]
    pub fn get(&self, x: usize) -> bool {
        self.words[x >> 6] >> (x & 63) & 1 == 1
    }

    #[inline]
    pub(crate) fn set(&mut self, x: usize, value: bool) {
        if value {
            self.words[x >> 6] |= 1 << (x & 63);
        } else {
            self.words[x >> 6] &= !(1 << (x & 63));
        }
    }

    /// `|S|`, the number of points where `f = 1`.
    pub fn support_size(&self) -> usize {
        self.words.iter().map(|w| w.count_ones() as usize).sum()
    }

    /// Point indices of the support, ascending.
    pub fn support(&self) -> Vec<usize> {
        (0..self.domain_size()).filter(|&x| self.get(x)).collect()
    }

    /// `𝔼f = |S| / 2^n`.
    pub fn mean(&self) -> f64 {
        self.support_size() as f64 / self.domain_size() as f64
    }

    /// `ℙ(f = 0) = ℙ(f = 1)`.
    pub fn is_balanced(&self) -> bool {
        2 * self.support_size() == self.domain_size()
    }

    /// `1 − f`.
    pub fn complement(&self) -> Self {
        let mut words: Vec<u64> = self.words.iter().map(|w| !w).collect();
        let last = words.len() - 1;
        words[last] &= self.last_word_mask();
        Self { n: self.n, words }
    }

    /// `x ↦ f(x ⊕ 1⃗)`, the reflection through the cube's centre.
    pub fn reflect(&self) -> Self {
        let top = self.domain_size() - 1;
        let mut g = Self { n: self.n, words: vec![0; self.words.len()] };
        for x in 0..self.domain_size() {
            if self.get(x) {
                g.set(x ^ top, true);
            }
        }
        g
    }

    /// Real-valued copy with values in `{0.0, 1.0}`.
    pub fn to_cube_function(&self) -> CubeFunction {
        CubeFunction {
            n: self.n,
            values: (0..self.domain_size())
                .map(|x| if self.get(x) { 1.0 } else { 0.0 })
                .collect(),
        }
    }

    fn last_word_mask(&self) -> u64 {
        let size = self.domain_size();
        if size >= 64 {
            u64::MAX
        } else {
            (1u64 << size) - 1
        }
    }
}

impl fmt::Debug for BooleanFunction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "BooleanFunction(n={}, 0x{})", self.n, self.to_hex())
    }
}

impl fmt::Display for BooleanFunction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_hex())
    }
}

/// Serialized as `{"n": .., "table": "<hex>"}`.
impl Serialize for BooleanFunction {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        TableRepr { n: self.n, table: self.to_hex() }.serialize(s)
    }
}

impl<'de> Deserialize<'de> for BooleanFunction {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let repr = TableRepr::deserialize(d)?;
        Self::from_hex(repr.n, &repr.table).map_err(serde::de::Error::custom)
    }
}

#[derive(Serialize, Deserialize)]
struct TableRepr {
    n: usize,
    table: String,
}

/// A real-valued function on `{0,1}^n`.
#[derive(Clone, Debug, PartialEq)]
pub struct CubeFunction {
    n: usize,
    values: Vec<f64>,
}

impl CubeFunction {
    pub fn new(n: usize, values: Vec<f64>) -> Result<Self> {
        check_dim(n)?;
        if values.len() != 1 << n {
            return Err(Error::LengthMismatch { expected: 1 << n, got: values.len() });
        }
        Ok(Self { n, values })
    }

    pub fn constant(n: usize, c: f64) -> Result<Self> {
        check_dim(n)?;
        Ok(Self { n, values: vec![c; 1 << n] })
    }

    pub(crate) fn from_values_unchecked(n: usize, values: Vec<f64>) -> Self {
        debug_assert_eq!(values.len(), 1 << n);
        Self { n, values }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn into_values(self) -> Vec<f64> {
        self.values
    }

    pub fn mean(&self) -> f64 {
        self.values.iter().sum::<f64>() / self.values.len() as f64
    }

    /// Largest componentwise difference to `other`.
    pub fn max_abs_diff(&self, other: &CubeFunction) -> f64 {
        self.values
            .iter()
            .zip(&other.values)
            .map(|(a, b)| (a - b).abs())
            .fold(0.0, f64::max)
    }
}

impl From<&BooleanFunction> for CubeFunction {
    fn from(f: &BooleanFunction) -> Self {
        f.to_cube_function()
    }
}

/// Walsh–Fourier coefficients `f̂(A) = 𝔼[f W_A]`, indexed by `mask(A)`.
#[derive(Clone, Debug, PartialEq)]
pub struct Spectrum {
    n: usize,
    coeffs: Vec<f64>,
}

impl Spectrum {
    pub fn new(n: usize, coeffs: Vec<f64>) -> Result<Self> {
        check_dim(n)?;
        if coeffs.len() != 1 << n {
            return Err(Error::LengthMismatch { expected: 1 << n, got: coeffs.len() });
        }
        Ok(Self { n, coeffs })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn coeffs(&self) -> &[f64] {
        &self.coeffs
    }

    /// `f̂(A)` for `A` given as a mask.
    pub fn coeff(&self, mask: usize) -> f64 {
        self.coeffs[mask]
    }

    /// Multiplies each `f̂(A)` by `weight(|A|)`.
    pub fn scale_by_degree(&self, weight: impl Fn(u32) -> f64) -> Spectrum {
        let table: Vec<f64> = (0..=self.n as u32).map(&weight).collect();
        let coeffs = self
            .coeffs
            .iter()
            .enumerate()
            .map(|(mask, c)| c * table[mask.count_ones() as usize])
            .collect();
        Spectrum { n: self.n, coeffs }
    }

    /// `Σ_A f̂(A)²`.
    pub fn energy(&self) -> f64 {
        self.coeffs.iter().map(|c| c * c).sum()
    }
}

/// In-place unnormalized Walsh–Hadamard butterfly.
pub(crate) fn butterfly(data: &mut [f64]) {
    let len = data.len();
    debug_assert!(len.is_power_of_two());
    let mut half = 1;
    while half < len {
        for block in data.chunks_exact_mut(2 * half) {
            let (lo, hi) = block.split_at_mut(half);
            for (a, b) in lo.iter_mut().zip(hi.iter_mut()) {
                let (u, v) = (*a, *b);
                *a = u + v;
                *b = u - v;
            }
        }
        half *= 2;
    }
}

/// Forward transform: `f̂(A) = 2^(-n) Σ_x f(x) (-1)^{Σ_{i∈A} x_i}`.
pub fn wht(f: &CubeFunction) -> Spectrum {
    let mut coeffs = f.values.clone();
    butterfly(&mut coeffs);
    let scale = 1.0 / coeffs.len() as f64;
    coeffs.iter_mut().for_each(|c| *c *= scale);
    Spectrum { n: f.n, coeffs }
}

/// Inverse transform: `f(x) = Σ_A f̂(A) W_A(x)`.
pub fn wht_inverse(s: &Spectrum) -> CubeFunction {
    let mut values = s.coeffs.clone();
    butterfly(&mut values);
    CubeFunction { n: s.n, values }
}

/// Spectrum of a Boolean function.
pub fn boolean_spectrum(f: &BooleanFunction) -> Spectrum {
    wht(&f.to_cube_function())
}

/// `Σ_{|A| = d} f̂(A)²`.
pub fn degree_weight(s: &Spectrum, d: usize) -> f64 {
    s.coeffs
        .iter()
        .enumerate()
        .filter(|(mask, _)| mask.count_ones() as usize == d)
        .map(|(_, c)| c * c)
        .sum()
}
