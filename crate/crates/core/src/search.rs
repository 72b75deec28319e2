//! Exhaustive argmax search over Boolean functions with a fixed support size.
//!
//! The search space is enumerated in colex order over support index sets,
//! cut into contiguous rank ranges, and evaluated on the rayon pool. A first
//! pass finds the optimum; a second pass collects every function within
//! `tie_tolerance` of it, in enumeration order. Both passes merge chunk
//! results in chunk order, so the output does not depend on the worker count.

use std::time::Instant;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::canonical::is_monotone;
use crate::cube::{boolean_spectrum, check_dim, degree_weight, BooleanFunction};
use crate::error::{invalid, Error, Result};
use crate::influence::total_influence;
use crate::info::mutual_information;
use crate::noise::{agreement_probability, alpha_stability, phi_stability, PhiSpec};

pub const DEFAULT_BUDGET: u128 = 100_000_000;
pub const DEFAULT_TIE_TOLERANCE: f64 = 1e-12;
pub const DEFAULT_ARGMAX_CAP: usize = 64;
/// Monotone enumeration materializes every monotone function of dimension `n`.
pub const MAX_MONOTONE_DIM: usize = 6;

/// Number of monotone Boolean functions of `n` variables (Dedekind numbers).
const DEDEKIND: [u128; 7] = [2, 3, 6, 20, 168, 7581, 7_828_354];

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Constraint {
    SupportSize(usize),
    Balanced,
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Restrict {
    #[default]
    All,
    MonotoneOnly,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case", tag = "kind")]
pub enum Objective {
    AlphaStability { alpha: f64, eps: f64 },
    Agreement { k: u32, eps: f64 },
    MutualInfo { eps: f64 },
    PhiStability { phi: PhiSpec, eps: f64 },
    Degree1Weight,
    /// Minimized rather than maximized.
    TotalInfluenceMin,
}

impl Objective {
    pub fn evaluate(&self, f: &BooleanFunction) -> Result<f64> {
        match self {
            Objective::AlphaStability { alpha, eps } => alpha_stability(f, *alpha, *eps),
            Objective::Agreement { k, eps } => agreement_probability(f, *k, *eps),
            Objective::MutualInfo { eps } => mutual_information(f, *eps),
            Objective::PhiStability { phi, eps } => phi_stability(f, phi, *eps),
            Objective::Degree1Weight => Ok(degree_weight(&boolean_spectrum(f), 1)),
            Objective::TotalInfluenceMin => Ok(total_influence(f)),
        }
    }

    pub fn minimizes(&self) -> bool {
        matches!(self, Objective::TotalInfluenceMin)
    }

    /// Value oriented so that larger is better.
    fn score(&self, f: &BooleanFunction) -> Result<f64> {
        let v = self.evaluate(f)?;
        Ok(if self.minimizes() { -v } else { v })
    }

    pub fn name(&self) -> String {
        match self {
            Objective::AlphaStability { alpha, eps } => format!("alpha-stability(alpha={}, eps={})", alpha, eps),
            Objective::Agreement { k, eps } => format!("agreement(k={}, eps={})", k, eps),
            Objective::MutualInfo { eps } => format!("mutual-info(eps={})", eps),
            Objective::PhiStability { phi, eps } => format!("phi-stability({}, eps={})", phi.name(), eps),
            Objective::Degree1Weight => "degree1-weight".into(),
            Objective::TotalInfluenceMin => "total-influence-min".into(),
        }
    }
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct SearchSpec {
    pub n: usize,
    pub constraint: Constraint,
    #[serde(default)]
    pub restrict: Restrict,
    pub objective: Objective,
    pub tie_tolerance: f64,
    /// Largest search space accepted.
    pub budget: u128,
    /// Maximum number of argmax tables kept; `None` keeps all of them.
    pub argmax_cap: Option<usize>,
}

impl SearchSpec {
    pub fn new(n: usize, constraint: Constraint, objective: Objective) -> Self {
        Self {
            n,
            constraint,
            restrict: Restrict::All,
            objective,
            tie_tolerance: DEFAULT_TIE_TOLERANCE,
            budget: DEFAULT_BUDGET,
            argmax_cap: Some(DEFAULT_ARGMAX_CAP),
        }
    }

    pub fn monotone_only(mut self) -> Self {
        self.restrict = Restrict::MonotoneOnly;
        self
    }

    pub fn with_budget(mut self, budget: u128) -> Self {
        self.budget = budget;
        self
    }

    pub fn with_tie_tolerance(mut self, tol: f64) -> Self {
        self.tie_tolerance = tol;
        self
    }

    /// Keep every argmax table.
    pub fn stream_all(mut self) -> Self {
        self.argmax_cap = None;
        self
    }

    pub fn support_size(&self) -> usize {
        match self.constraint {
            Constraint::SupportSize(s) => s,
            Constraint::Balanced => 1 << (self.n - 1),
        }
    }

    fn validate(&self) -> Result<()> {
        check_dim(self.n)?;
        if self.support_size() > 1 << self.n {
            return Err(invalid(format!(
                "support size {} exceeds 2^{}",
                self.support_size(),
                self.n
            )));
        }
        if !(self.tie_tolerance >= 0.0) {
            return Err(invalid("tie tolerance must be non-negative"));
        }
        if self.restrict == Restrict::MonotoneOnly && self.n > MAX_MONOTONE_DIM {
            return Err(invalid(format!(
                "monotone enumeration supports n <= {}",
                MAX_MONOTONE_DIM
            )));
        }
        // Surfaces parameter errors before any enumeration.
        let probe = BooleanFunction::zero(self.n)?;
        self.objective.evaluate(&probe)?;
        Ok(())
    }

    /// Size of the unrestricted space `C(2^n, s)`, saturating at `u128::MAX`.
    pub fn space_size(&self) -> u128 {
        binomial(1u128 << self.n, self.support_size() as u128)
    }
}

/// `C(n, k)`, saturating at `u128::MAX`.
pub fn binomial(n: u128, k: u128) -> u128 {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    let mut acc: u128 = 1;
    for j in 1..=k {
        match acc.checked_mul(n - k + j) {
            Some(v) => acc = v / j,
            None => return u128::MAX,
        }
    }
    acc
}

/// `k`-subsets of `0..universe` in colex order, as sorted index vectors.
#[derive(Clone, Debug)]
pub struct ColexSubsets {
    current: Vec<usize>,
    universe: usize,
    remaining: u128,
}

impl ColexSubsets {
    pub fn new(universe: usize, k: usize) -> Self {
        Self::from_rank(universe, k, 0, binomial(universe as u128, k as u128))
    }

    /// Starts at colex rank `rank` and yields at most `count` subsets.
    pub fn from_rank(universe: usize, k: usize, rank: u128, count: u128) -> Self {
        let total = binomial(universe as u128, k as u128);
        let remaining = count.min(total.saturating_sub(rank));
        let current = if remaining > 0 { colex_unrank(universe, k, rank) } else { Vec::new() };
        Self { current, universe, remaining }
    }
}

/// Combinatorial number system: `rank = Σ_i C(c_i, i + 1)`.
fn colex_unrank(universe: usize, k: usize, mut rank: u128) -> Vec<usize> {
    let mut out = vec![0usize; k];
    let mut hi = universe;
    for i in (1..=k).rev() {
        // Largest c in [i-1, hi) with C(c, i) <= rank.
        let (mut lo, mut top) = (i - 1, hi - 1);
        while lo < top {
            let mid = lo + (top - lo).div_ceil(2);
            if binomial(mid as u128, i as u128) <= rank {
                lo = mid;
            } else {
                top = mid - 1;
            }
        }
        out[i - 1] = lo;
        rank -= binomial(lo as u128, i as u128);
        hi = lo;
    }
    out
}

impl Iterator for ColexSubsets {
    type Item = Vec<usize>;

    fn next(&mut self) -> Option<Vec<usize>> {
        if self.remaining == 0 {
            return None;
        }
        self.remaining -= 1;
        let out = self.current.clone();
        if self.remaining > 0 {
            let k = self.current.len();
            let mut j = 0;
            while j < k {
                let limit = if j + 1 < k { self.current[j + 1] } else { self.universe };
                if self.current[j] + 1 < limit {
                    break;
                }
                j += 1;
            }
            if j == k {
                self.remaining = 0;
            } else {
                self.current[j] += 1;
                for (i, c) in self.current[..j].iter_mut().enumerate() {
                    *c = i;
                }
            }
        }
        Some(out)
    }
}

/// All monotone functions of dimension `n ≤ 6` as single-word tables,
/// ascending (which is colex order of their supports).
pub fn monotone_tables(n: usize) -> Vec<u64> {
    assert!(n <= MAX_MONOTONE_DIM);
    let mut tables: Vec<u64> = vec![0, 1];
    for k in 1..=n {
        let half = 1u32 << (k - 1);
        let mut next = Vec::with_capacity(DEDEKIND[k] as usize);
        for &hi in &tables {
            for &lo in &tables {
                if lo & !hi == 0 {
                    next.push(lo | (hi << half));
                }
            }
        }
        tables = next;
    }
    tables.sort_unstable();
    tables
}

/// The functions a [`SearchSpec`] ranges over.
pub enum FunctionStream {
    Subsets { n: usize, inner: ColexSubsets },
    Monotone { n: usize, tables: std::vec::IntoIter<u64> },
}

impl Iterator for FunctionStream {
    type Item = BooleanFunction;

    fn next(&mut self) -> Option<BooleanFunction> {
        match self {
            FunctionStream::Subsets { n, inner } => inner
                .next()
                .map(|s| BooleanFunction::from_support(*n, s).expect("indices in range")),
            FunctionStream::Monotone { n, tables } => tables
                .next()
                .map(|t| BooleanFunction::from_words(*n, vec![t]).expect("valid table")),
        }
    }
}

/// Work units of the search: contiguous, in enumeration order.
enum Space {
    Subsets { n: usize, universe: usize, k: usize, total: u128 },
    Monotone { n: usize, tables: Vec<u64> },
}

impl Space {
    fn build(spec: &SearchSpec) -> Result<Space> {
        spec.validate()?;
        let k = spec.support_size();
        match spec.restrict {
            Restrict::All => {
                let total = spec.space_size();
                if total > spec.budget {
                    return Err(Error::BudgetExceeded { count: total, budget: spec.budget });
                }
                Ok(Space::Subsets { n: spec.n, universe: 1 << spec.n, k, total })
            }
            Restrict::MonotoneOnly => {
                let count = DEDEKIND[spec.n];
                if count > spec.budget {
                    return Err(Error::BudgetExceeded { count, budget: spec.budget });
                }
                let tables = monotone_tables(spec.n)
                    .into_iter()
                    .filter(|t| t.count_ones() as usize == k)
                    .collect();
                Ok(Space::Monotone { n: spec.n, tables })
            }
        }
    }

    fn len(&self) -> u128 {
        match self {
            Space::Subsets { total, .. } => *total,
            Space::Monotone { tables, .. } => tables.len() as u128,
        }
    }

    fn stream(&self, start: u128, count: u128) -> FunctionStream {
        match self {
            Space::Subsets { n, universe, k, .. } => FunctionStream::Subsets {
                n: *n,
                inner: ColexSubsets::from_rank(*universe, *k, start, count),
            },
            Space::Monotone { n, tables } => {
                let end = (start + count).min(tables.len() as u128) as usize;
                FunctionStream::Monotone {
                    n: *n,
                    tables: tables[start as usize..end].to_vec().into_iter(),
                }
            }
        }
    }

    fn chunks(&self) -> Vec<(u128, u128)> {
        let total = self.len();
        let pieces = (rayon::current_num_threads() as u128 * 8).max(1);
        let size = total.div_ceil(pieces).max(1);
        let mut out = Vec::new();
        let mut start = 0;
        while start < total {
            out.push((start, size.min(total - start)));
            start += size;
        }
        out
    }
}

/// Every function in the search space, in deterministic colex order.
pub fn enumerate_functions(spec: &SearchSpec) -> Result<FunctionStream> {
    let space = Space::build(spec)?;
    Ok(space.stream(0, space.len()))
}

#[derive(Clone, Debug, Serialize)]
pub struct SearchResult {
    pub spec: SearchSpec,
    /// Objective value at the optimum (a minimum for minimizing objectives).
    pub best_value: f64,
    #[serde(rename = "argmax_hex", serialize_with = "serialize_hex_list")]
    pub argmax: Vec<BooleanFunction>,
    /// Size of the full optimal set, which may exceed `argmax.len()`.
    pub argmax_count: u64,
    pub truncated: bool,
    pub evaluated_count: u64,
    pub runtime_secs: f64,
}

fn serialize_hex_list<S: serde::Serializer>(
    fs: &[BooleanFunction],
    s: S,
) -> std::result::Result<S::Ok, S::Error> {
    s.collect_seq(fs.iter().map(|f| f.to_hex()))
}

impl SearchResult {
    pub fn contains(&self, f: &BooleanFunction) -> bool {
        self.argmax.contains(f)
    }
}

/// Exact optimum and optimal set of `spec.objective` over the search space.
pub fn maximize(spec: &SearchSpec) -> Result<SearchResult> {
    let started = Instant::now();
    let space = Space::build(spec)?;
    let chunks = space.chunks();
    let objective = &spec.objective;

    // Pass 1: best score per chunk.
    let bests: Vec<(f64, u64)> = chunks
        .par_iter()
        .map(|&(start, count)| -> Result<(f64, u64)> {
            let mut best = f64::NEG_INFINITY;
            let mut seen = 0u64;
            for f in space.stream(start, count) {
                best = best.max(objective.score(&f)?);
                seen += 1;
            }
            Ok((best, seen))
        })
        .collect::<Result<_>>()?;
    let best = bests.iter().map(|b| b.0).fold(f64::NEG_INFINITY, f64::max);
    let evaluated_count: u64 = bests.iter().map(|b| b.1).sum();
    let threshold = best - spec.tie_tolerance;
    let cap = spec.argmax_cap.unwrap_or(usize::MAX);

    // Pass 2: ties, skipping chunks that cannot hold any.
    let ties: Vec<(u64, Vec<BooleanFunction>)> = chunks
        .par_iter()
        .zip(&bests)
        .map(|(&(start, count), &(chunk_best, _))| -> Result<(u64, Vec<BooleanFunction>)> {
            let mut n_ties = 0u64;
            let mut kept = Vec::new();
            if chunk_best >= threshold {
                for f in space.stream(start, count) {
                    if objective.score(&f)? >= threshold {
                        n_ties += 1;
                        if kept.len() < cap {
                            kept.push(f);
                        }
                    }
                }
            }
            Ok((n_ties, kept))
        })
        .collect::<Result<_>>()?;

    let argmax_count = ties.iter().map(|t| t.0).sum();
    let argmax: Vec<BooleanFunction> = ties.into_iter().flat_map(|t| t.1).take(cap).collect();
    let best_value = if objective.minimizes() { -best } else { best };
    Ok(SearchResult {
        spec: spec.clone(),
        best_value,
        truncated: (argmax.len() as u64) < argmax_count,
        argmax,
        argmax_count,
        evaluated_count,
        runtime_secs: started.elapsed().as_secs_f64(),
    })
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct NamedValue {
    pub label: String,
    pub table_hex: String,
    pub value: f64,
}

/// Objective value for each candidate, best first.
pub fn compare_named(
    n: usize,
    candidates: &[(String, BooleanFunction)],
    objective: &Objective,
) -> Result<Vec<NamedValue>> {
    let mut out = Vec::with_capacity(candidates.len());
    for (label, f) in candidates {
        if f.n() != n {
            return Err(Error::DimensionMismatch { expected: n, got: f.n() });
        }
        out.push(NamedValue {
            label: label.clone(),
            table_hex: f.to_hex(),
            value: objective.evaluate(f)?,
        });
    }
    if objective.minimizes() {
        out.sort_by(|a, b| a.value.total_cmp(&b.value));
    } else {
        out.sort_by(|a, b| b.value.total_cmp(&a.value));
    }
    Ok(out)
}

/// Smallest table (by hex) over coordinate permutations and translations
/// `x ↦ x ⊕ v`. Every objective here is invariant under both, so this is a
/// reporting aid for grouping argmax sets into classes. Supports `n ≤ 6`.
pub fn canonical_form(f: &BooleanFunction) -> Result<BooleanFunction> {
    let n = f.n();
    if n > 6 {
        return Err(invalid("canonical form supports n <= 6"));
    }
    let mut perm: Vec<usize> = (0..n).collect();
    let mut best: Option<(String, BooleanFunction)> = None;
    let mut consider = |g: BooleanFunction| {
        let key = g.to_hex();
        if best.as_ref().is_none_or(|(k, _)| key < *k) {
            best = Some((key, g));
        }
    };
    loop {
        let permuted = BooleanFunction::from_fn(n, |x| {
            let y = perm.iter().enumerate().fold(0, |acc, (i, &p)| acc | ((x >> i & 1) << p));
            f.get(y)
        })?;
        for v in 0..f.domain_size() {
            consider(BooleanFunction::from_fn(n, |x| permuted.get(x ^ v)).expect("same dimension"));
        }
        if !next_permutation(&mut perm) {
            break;
        }
    }
    Ok(best.expect("at least one permutation").1)
}

fn next_permutation(p: &mut [usize]) -> bool {
    let Some(i) = (1..p.len()).rev().find(|&i| p[i - 1] < p[i]) else {
        return false;
    };
    let j = (i..p.len()).rev().find(|&j| p[j] > p[i - 1]).unwrap();
    p.swap(i - 1, j);
    p[i..].reverse();
    true
}

/// Whether the search space under `spec` contains only monotone functions;
/// used by tests to cross-check the monotone enumeration.
pub fn all_monotone(spec: &SearchSpec) -> Result<bool> {
    Ok(enumerate_functions(spec)?.all(|f| is_monotone(&f)))
}
