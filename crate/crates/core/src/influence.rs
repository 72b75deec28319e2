//! Influence of coordinates, three ways: probabilistic flips, the Fourier
//! identity `I_i(f) = 4 Σ_{A∋i} f̂(A)²`, and the edge boundary of the support.
//!
//! The flip and boundary routes count exactly in integers; the Fourier route
//! goes through the floating-point Walsh transform.

use serde::{Deserialize, Serialize};

use crate::cube::{boolean_spectrum, BooleanFunction, LOW_HALF};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum InfluenceMethod {
    Flip,
    Fourier,
    Boundary,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct InfluenceReport {
    pub per_coordinate: Vec<f64>,
    pub total: f64,
    pub method: InfluenceMethod,
}

impl InfluenceReport {
    fn from_per_coordinate(per_coordinate: Vec<f64>, method: InfluenceMethod) -> Self {
        let total = per_coordinate.iter().sum();
        Self { per_coordinate, total, method }
    }
}

/// Edge boundary of the support `S`: for each direction `i`, the number of
/// cube edges `{x, σ_i(x)}` with exactly one endpoint in `S`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct EdgeBoundary {
    pub per_direction: Vec<u64>,
    pub total: u64,
}

/// Number of points `x` with `f(x) ≠ f(σ_i(x))`, for each coordinate.
pub fn flip_counts(f: &BooleanFunction) -> Vec<u64> {
    (0..f.n())
        .map(|i| {
            let bit = 1usize << i;
            (0..f.domain_size()).filter(|&x| f.get(x) != f.get(x ^ bit)).count() as u64
        })
        .collect()
}

/// Cut edges in direction `i` (0-based), counted once per unordered pair.
fn cut_edges(f: &BooleanFunction, i: usize) -> u64 {
    let words = f.words();
    if i < 6 {
        let shift = 1u32 << i;
        words
            .iter()
            .map(|&w| ((w ^ (w >> shift)) & LOW_HALF[i]).count_ones() as u64)
            .sum()
    } else {
        let stride = 1usize << (i - 6);
        (0..words.len())
            .filter(|j| j & stride == 0)
            .map(|j| (words[j] ^ words[j | stride]).count_ones() as u64)
            .sum()
    }
}

pub fn edge_boundary(f: &BooleanFunction) -> EdgeBoundary {
    let per_direction: Vec<u64> = (0..f.n()).map(|i| cut_edges(f, i)).collect();
    let total = per_direction.iter().sum();
    EdgeBoundary { per_direction, total }
}

/// Total influence from exact flip counts.
pub fn total_influence(f: &BooleanFunction) -> f64 {
    flip_counts(f).iter().sum::<u64>() as f64 / f.domain_size() as f64
}

pub fn influence(f: &BooleanFunction, method: InfluenceMethod) -> InfluenceReport {
    let size = f.domain_size() as f64;
    let per = match method {
        InfluenceMethod::Flip => flip_counts(f).into_iter().map(|c| c as f64 / size).collect(),
        InfluenceMethod::Boundary => {
            let half = size / 2.0;
            edge_boundary(f).per_direction.into_iter().map(|c| c as f64 / half).collect()
        }
        InfluenceMethod::Fourier => {
            let s = boolean_spectrum(f);
            let mut per = vec![0.0; f.n()];
            for (mask, c) in s.coeffs().iter().enumerate() {
                let w = c * c;
                for (i, slot) in per.iter_mut().enumerate() {
                    if mask >> i & 1 == 1 {
                        *slot += w;
                    }
                }
            }
            per.into_iter().map(|w| 4.0 * w).collect()
        }
    };
    InfluenceReport::from_per_coordinate(per, method)
}
