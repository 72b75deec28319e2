//! Named Boolean functions (lexicographic, majority, Hamming-ball-like) and
//! the monotonicity predicate.

use crate::cube::{check_dim, BooleanFunction, LOW_HALF};
use crate::error::{invalid, Result};

/// Position of the point `idx` in dictionary order on `(x_1, …, x_n)` with
/// `x_1` most significant: the bit reversal of `idx` over `n` bits.
pub fn lex_rank(n: usize, idx: usize) -> usize {
    idx.reverse_bits() >> (usize::BITS as usize - n)
}

/// Indicator of the first `s` strings in dictionary order, `x_1` most
/// significant. For `s = 2^(n-m)` this is the subcube `x_1 = ⋯ = x_m = 0`.
pub fn lexicographic(n: usize, s: usize) -> Result<BooleanFunction> {
    lexicographic_oriented(n, s, false)
}

/// [`lexicographic`] composed with the global complement `x ↦ x ⊕ 1⃗` when
/// `complemented` is set; the complemented family is supported on leading
/// ones (e.g. the subcube `∏_{i≤m} x_i`) and is monotone.
pub fn lexicographic_oriented(n: usize, s: usize, complemented: bool) -> Result<BooleanFunction> {
    check_dim(n)?;
    if s > 1 << n {
        return Err(invalid(format!("support size {} exceeds 2^{}", s, n)));
    }
    let flip = if complemented { (1 << n) - 1 } else { 0 };
    BooleanFunction::from_fn(n, |x| lex_rank(n, x ^ flip) < s)
}

/// `Maj_r` on the first `r` coordinates: one iff `Σ_{i≤r} x_i > r/2`.
pub fn majority(n: usize, r: usize) -> Result<BooleanFunction> {
    check_dim(n)?;
    if r % 2 == 0 || r > n {
        return Err(invalid(format!("majority needs odd r <= n, got r = {}, n = {}", r, n)));
    }
    let mask = (1usize << r) - 1;
    BooleanFunction::from_fn(n, |x| 2 * (x & mask).count_ones() as usize > r)
}

/// `f(x) = x_1`.
pub fn dictator(n: usize) -> Result<BooleanFunction> {
    majority(n, 1)
}

/// `f(x) = x_i` for a 1-based coordinate `i`.
pub fn dictator_on(n: usize, i: usize) -> Result<BooleanFunction> {
    check_dim(n)?;
    if i == 0 || i > n {
        return Err(invalid(format!("coordinate {} outside 1..={}", i, n)));
    }
    BooleanFunction::from_fn(n, |x| x >> (i - 1) & 1 == 1)
}

/// Indicator of odd-weight strings, `(1 - W_[n]) / 2`.
pub fn parity(n: usize) -> Result<BooleanFunction> {
    BooleanFunction::from_fn(n, |x| x.count_ones() % 2 == 1)
}

/// `1⃗` together with its first `s - 1` neighbours, obtained by zeroing
/// coordinates 1, 2, … in turn.
pub fn hamming_ball_like(n: usize, s: usize) -> Result<BooleanFunction> {
    check_dim(n)?;
    if s == 0 || s > n + 1 {
        return Err(invalid(format!("ball-like support needs 1 <= s <= n+1, got {}", s)));
    }
    let top = (1usize << n) - 1;
    BooleanFunction::from_support(n, std::iter::once(top).chain((0..s - 1).map(|i| top ^ (1 << i))))
}

/// `f(x) ≤ f(y)` whenever `x ⪯ y`; checked on every cube edge.
pub fn is_monotone(f: &BooleanFunction) -> bool {
    let words = f.words();
    (0..f.n()).all(|i| {
        if i < 6 {
            let shift = 1u32 << i;
            words.iter().all(|&w| w & LOW_HALF[i] & !(w >> shift) == 0)
        } else {
            let stride = 1usize << (i - 6);
            (0..words.len())
                .filter(|j| j & stride == 0)
                .all(|j| words[j] & !words[j | stride] == 0)
        }
    })
}

/// `T_ε f(1⃗) = Σ_{x∈S} ε^{d(x,1⃗)} (1-ε)^{n-d(x,1⃗)}`, evaluated term by term.
pub fn noise_at_all_ones(f: &BooleanFunction, eps: f64) -> f64 {
    let n = f.n() as i32;
    f.support()
        .into_iter()
        .map(|x| {
            let d = n - x.count_ones() as i32;
            eps.powi(d) * (1.0 - eps).powi(n - d)
        })
        .sum()
}

/// Parses a named candidate: `maj:r`, `dict`, `dict:i`, `lex:s`, `lexc:s`
/// (complemented lexicographic), `ball:s`, `parity`, `const:0`, `const:1`,
/// or `hex:<table>`.
pub fn named(n: usize, label: &str) -> Result<BooleanFunction> {
    let (kind, arg) = match label.split_once(':') {
        Some((k, a)) => (k, Some(a)),
        None => (label, None),
    };
    let number = |what: &str| -> Result<usize> {
        arg.ok_or_else(|| invalid(format!("{} needs an argument, e.g. {}:1", label, what)))?
            .parse::<usize>()
            .map_err(|_| invalid(format!("bad argument in candidate {:?}", label)))
    };
    match kind {
        "maj" => majority(n, number("maj")?),
        "dict" if arg.is_none() => dictator(n),
        "dict" => dictator_on(n, number("dict")?),
        "lex" => lexicographic(n, number("lex")?),
        "lexc" => lexicographic_oriented(n, number("lexc")?, true),
        "ball" => hamming_ball_like(n, number("ball")?),
        "parity" => parity(n),
        "const" => match number("const")? {
            0 => BooleanFunction::zero(n),
            1 => BooleanFunction::one(n),
            _ => Err(invalid("const takes 0 or 1")),
        },
        "hex" => BooleanFunction::from_hex(n, arg.unwrap_or_default()),
        _ => Err(invalid(format!("unknown candidate {:?}", label))),
    }
}
