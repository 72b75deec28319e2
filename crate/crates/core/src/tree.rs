//! Players on a tree of binary symmetric channels.
//!
//! A uniform string in `{0,1}^n` is broadcast from one vertex and every edge
//! flips each bit independently with that edge's crossover probability.
//! Players at some vertices apply Boolean functions to what they receive.
//! The joint law does not depend on the broadcasting vertex.

use std::collections::{BTreeMap, VecDeque};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::cube::BooleanFunction;
use crate::error::{invalid, Error, Result};
use crate::noise::{check_channel_eps, convolve_in_place};

#[derive(Clone, Debug, PartialEq)]
pub struct BroadcastTree {
    vertex_count: usize,
    edges: Vec<(usize, usize, f64)>,
    adjacency: Vec<Vec<(usize, f64)>>,
}

impl BroadcastTree {
    /// Validates that `edges` form a spanning tree on `0..vertex_count` with
    /// every crossover probability in `[0, 1/2]`.
    pub fn new(vertex_count: usize, edges: Vec<(usize, usize, f64)>) -> Result<Self> {
        if vertex_count == 0 {
            return Err(Error::NotATree("no vertices".into()));
        }
        if edges.len() != vertex_count - 1 {
            return Err(Error::NotATree(format!(
                "{} edges on {} vertices; a tree has {}",
                edges.len(),
                vertex_count,
                vertex_count - 1
            )));
        }
        let mut parent: Vec<usize> = (0..vertex_count).collect();
        fn find(parent: &mut [usize], mut v: usize) -> usize {
            while parent[v] != v {
                parent[v] = parent[parent[v]];
                v = parent[v];
            }
            v
        }
        let mut adjacency = vec![Vec::new(); vertex_count];
        for &(u, v, eps) in &edges {
            if u >= vertex_count || v >= vertex_count {
                return Err(Error::NotATree(format!("edge ({}, {}) leaves 0..{}", u, v, vertex_count)));
            }
            check_channel_eps(eps)?;
            let (ru, rv) = (find(&mut parent, u), find(&mut parent, v));
            if ru == rv {
                return Err(Error::NotATree(format!("edge ({}, {}) closes a cycle", u, v)));
            }
            parent[ru] = rv;
            adjacency[u].push((v, eps));
            adjacency[v].push((u, eps));
        }
        Ok(Self { vertex_count, edges, adjacency })
    }

    pub fn with_uniform_eps(vertex_count: usize, edges: &[(usize, usize)], eps: f64) -> Result<Self> {
        Self::new(vertex_count, edges.iter().map(|&(u, v)| (u, v, eps)).collect())
    }

    /// Path `0 – 1 – ⋯ – length`.
    pub fn path(length: usize, eps: f64) -> Result<Self> {
        let edges: Vec<_> = (0..length).map(|i| (i, i + 1)).collect();
        Self::with_uniform_eps(length + 1, &edges, eps)
    }

    /// Centre 0 with leaves `1..=leaves`.
    pub fn star(leaves: usize, eps: f64) -> Result<Self> {
        let edges: Vec<_> = (1..=leaves).map(|i| (0, i)).collect();
        Self::with_uniform_eps(leaves + 1, &edges, eps)
    }

    pub fn vertex_count(&self) -> usize {
        self.vertex_count
    }

    pub fn edges(&self) -> &[(usize, usize, f64)] {
        &self.edges
    }

    /// Vertices in breadth-first order from `root`, each with its parent
    /// and the crossover probability of the connecting edge.
    fn bfs(&self, root: usize) -> Vec<(usize, Option<(usize, f64)>)> {
        let mut seen = vec![false; self.vertex_count];
        let mut order = Vec::with_capacity(self.vertex_count);
        let mut queue = VecDeque::from([(root, None)]);
        seen[root] = true;
        while let Some((v, up)) = queue.pop_front() {
            order.push((v, up));
            for &(w, eps) in &self.adjacency[v] {
                if !seen[w] {
                    seen[w] = true;
                    queue.push_back((w, Some((v, eps))));
                }
            }
        }
        order
    }
}

/// Boolean functions held by the players, keyed by vertex.
#[derive(Clone, Debug, PartialEq)]
pub struct PlayerAssignment {
    n: usize,
    players: BTreeMap<usize, BooleanFunction>,
}

impl PlayerAssignment {
    pub fn new(players: BTreeMap<usize, BooleanFunction>) -> Result<Self> {
        let n = players.values().next().ok_or_else(|| invalid("no players"))?.n();
        if let Some(f) = players.values().find(|f| f.n() != n) {
            return Err(Error::DimensionMismatch { expected: n, got: f.n() });
        }
        Ok(Self { n, players })
    }

    /// The same function at every listed vertex.
    pub fn uniform(vertices: impl IntoIterator<Item = usize>, f: &BooleanFunction) -> Result<Self> {
        Self::new(vertices.into_iter().map(|v| (v, f.clone())).collect())
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn players(&self) -> &BTreeMap<usize, BooleanFunction> {
        &self.players
    }

    fn complemented(&self) -> Self {
        Self { n: self.n, players: self.players.iter().map(|(&v, f)| (v, f.complement())).collect() }
    }

    fn check_fits(&self, tree: &BroadcastTree) -> Result<()> {
        match self.players.keys().find(|&&v| v >= tree.vertex_count) {
            Some(&v) => Err(Error::IndexOutOfRange { index: v, size: tree.vertex_count }),
            None => Ok(()),
        }
    }
}

/// `𝔼 ∏_{v∈S} f_v(Y^v)` by message passing from the smallest player vertex.
pub fn tree_correlation(tree: &BroadcastTree, assignment: &PlayerAssignment) -> Result<f64> {
    let root = *assignment.players.keys().next().expect("assignment is non-empty");
    tree_correlation_rooted(tree, assignment, root)
}

/// As [`tree_correlation`], rooted at `root`. Each vertex's message is its
/// own function (or 1) times the noised messages of its children.
pub fn tree_correlation_rooted(tree: &BroadcastTree, assignment: &PlayerAssignment, root: usize) -> Result<f64> {
    assignment.check_fits(tree)?;
    if root >= tree.vertex_count {
        return Err(Error::IndexOutOfRange { index: root, size: tree.vertex_count });
    }
    let size = 1usize << assignment.n;
    let order = tree.bfs(root);
    let mut messages: Vec<Option<Vec<f64>>> = vec![None; tree.vertex_count];
    for &(v, up) in order.iter().rev() {
        let mut m = messages[v].take().unwrap_or_else(|| vec![1.0; size]);
        if let Some(f) = assignment.players.get(&v) {
            for (x, slot) in m.iter_mut().enumerate() {
                if !f.get(x) {
                    *slot = 0.0;
                }
            }
        }
        match up {
            Some((parent, eps)) => {
                convolve_in_place(&mut m, eps);
                match &mut messages[parent] {
                    Some(acc) => acc.iter_mut().zip(&m).for_each(|(a, b)| *a *= b),
                    slot => *slot = Some(m),
                }
            }
            None => return Ok(m.iter().sum::<f64>() / size as f64),
        }
    }
    unreachable!("breadth-first order ends at the root")
}

/// `ℙ(all players output 1) + ℙ(all players output 0)`.
pub fn tree_agreement(tree: &BroadcastTree, assignment: &PlayerAssignment) -> Result<f64> {
    Ok(tree_correlation(tree, assignment)? + tree_correlation(tree, &assignment.complemented())?)
}

/// `2^{-(l+1)} ∏_j (1 + (1-2ε)^{g_j})` for `l+1` players on a path whose
/// consecutive positions differ by the gaps `g_j`.
pub fn path_dictator_bound(gaps: &[u32], eps: f64) -> Result<f64> {
    if gaps.is_empty() {
        return Err(invalid("path bound needs at least one gap"));
    }
    if gaps.contains(&0) {
        return Err(invalid("gaps must be positive"));
    }
    check_channel_eps(eps)?;
    let rho = 1.0 - 2.0 * eps;
    let product: f64 = gaps.iter().map(|&g| 1.0 + rho.powi(g as i32)).product();
    Ok(product / 2f64.powi(gaps.len() as i32 + 1))
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct McEstimate {
    pub estimate: f64,
    pub standard_error: f64,
    pub samples: u64,
}

const MC_CHUNK: u64 = 1 << 14;

/// Monte Carlo estimate of [`tree_correlation`] by simulating the broadcast.
///
/// Samples are split into fixed-size chunks; chunk `c` draws from a ChaCha8
/// stream seeded with `seed` on stream `c`, so the result depends only on
/// `seed` and `samples`.
pub fn tree_mc_estimate(
    tree: &BroadcastTree,
    assignment: &PlayerAssignment,
    samples: u64,
    seed: u64,
) -> Result<McEstimate> {
    if samples == 0 {
        return Err(invalid("samples must be at least 1"));
    }
    assignment.check_fits(tree)?;
    let n = assignment.n;
    let order = tree.bfs(0);
    let chunks = samples.div_ceil(MC_CHUNK);
    let hits: u64 = (0..chunks)
        .into_par_iter()
        .map(|c| {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            rng.set_stream(c);
            let count = MC_CHUNK.min(samples - c * MC_CHUNK);
            let mut strings = vec![0usize; tree.vertex_count];
            let mut hits = 0u64;
            for _ in 0..count {
                for &(v, up) in &order {
                    strings[v] = match up {
                        None => rng.random_range(0..1usize << n),
                        Some((parent, eps)) => {
                            let mut s = strings[parent];
                            for bit in 0..n {
                                if rng.random_bool(eps) {
                                    s ^= 1 << bit;
                                }
                            }
                            s
                        }
                    };
                }
                if assignment.players.iter().all(|(&v, f)| f.get(strings[v])) {
                    hits += 1;
                }
            }
            hits
        })
        .sum();
    let mean = hits as f64 / samples as f64;
    let standard_error = if samples > 1 {
        let var = mean * (1.0 - mean) * samples as f64 / (samples as f64 - 1.0);
        (var / samples as f64).sqrt()
    } else {
        0.0
    };
    Ok(McEstimate { estimate: mean, standard_error, samples })
}

/// File format: `{ "n": 2, "edges": [[0, 1, 0.1], …], "players": [{ "v": 0, "table_hex": "a" }, …] }`.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct TreeInput {
    pub n: usize,
    pub edges: Vec<(usize, usize, f64)>,
    pub players: Vec<PlayerEntry>,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct PlayerEntry {
    pub v: usize,
    pub table_hex: String,
}

impl TreeInput {
    pub fn from_json(text: &str) -> Result<Self> {
        Ok(serde_json::from_str(text)?)
    }

    /// Vertices are `0..=max index` over edges and players.
    pub fn build(&self) -> Result<(BroadcastTree, PlayerAssignment)> {
        let top = self
            .edges
            .iter()
            .flat_map(|&(u, v, _)| [u, v])
            .chain(self.players.iter().map(|p| p.v))
            .max()
            .ok_or_else(|| invalid("tree input has no vertices"))?;
        let tree = BroadcastTree::new(top + 1, self.edges.clone())?;
        let mut players = BTreeMap::new();
        for p in &self.players {
            let f = BooleanFunction::from_hex(self.n, &p.table_hex)?;
            if players.insert(p.v, f).is_some() {
                return Err(invalid(format!("vertex {} listed twice", p.v)));
            }
        }
        Ok((tree, PlayerAssignment::new(players)?))
    }
}
