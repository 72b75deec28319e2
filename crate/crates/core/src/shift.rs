//! Up-compression of a support along one coordinate, and iteration of the
//! compressions to a monotone fixpoint.
//!
//! For coordinate `i`, the cube splits into lines `{x, σ_i(x)}`. A line with
//! both points in `S` or neither is left alone; a line with exactly one point
//! in `S` has that point moved to `x_i = 1`. The mean is unchanged and, for
//! every convex `Φ`, `𝔼Φ(T_ε f)` does not decrease.

use serde::Serialize;

use crate::cube::{BooleanFunction, LOW_HALF};
use crate::error::{invalid, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct ShiftStep {
    /// 1-based coordinate.
    pub coordinate: usize,
    pub moved: usize,
}

/// Record of a [`monotonize`] run. Only steps that moved at least one point
/// are listed, and `passes` counts sweeps in which something moved.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
pub struct ShiftTrace {
    pub steps: Vec<ShiftStep>,
    pub passes: usize,
    pub final_potential: u64,
}

/// `Σ_{x∈S} |x|`, the total number of ones over the support.
pub fn potential(f: &BooleanFunction) -> u64 {
    (0..f.domain_size())
        .filter(|&x| f.get(x))
        .map(|x| x.count_ones() as u64)
        .sum()
}

/// Compresses `f` upward along 1-based coordinate `i`. Returns the shifted
/// function and the number of points moved.
pub fn shift_up_counted(f: &BooleanFunction, i: usize) -> Result<(BooleanFunction, usize)> {
    if i == 0 || i > f.n() {
        return Err(invalid(format!("coordinate {} outside 1..={}", i, f.n())));
    }
    let i = i - 1;
    let mut words = f.words().to_vec();
    let mut moved = 0usize;
    if i < 6 {
        let shift = 1u32 << i;
        let mask = LOW_HALF[i];
        for w in &mut words {
            let lo = *w & mask;
            let hi = (*w >> shift) & mask;
            moved += (lo & !hi).count_ones() as usize;
            *w = (lo & hi) | ((lo | hi) << shift);
        }
    } else {
        let stride = 1usize << (i - 6);
        for j in (0..words.len()).filter(|j| j & stride == 0) {
            let (lo, hi) = (words[j], words[j | stride]);
            moved += (lo & !hi).count_ones() as usize;
            words[j] = lo & hi;
            words[j | stride] = lo | hi;
        }
    }
    Ok((BooleanFunction::from_words(f.n(), words)?, moved))
}

pub fn shift_up(f: &BooleanFunction, i: usize) -> Result<BooleanFunction> {
    shift_up_counted(f, i).map(|(g, _)| g)
}

/// Sweeps `shift_up` over coordinates `1..=n` until a full sweep moves
/// nothing. `visit(coordinate, before, after)` sees every moving step.
///
/// Each moving step raises [`potential`] by the number of points moved, and
/// the potential is at most `n |S|`, so the loop terminates.
pub fn monotonize_with(
    f: &BooleanFunction,
    mut visit: impl FnMut(usize, &BooleanFunction, &BooleanFunction),
) -> (BooleanFunction, ShiftTrace) {
    let mut current = f.clone();
    let mut trace = ShiftTrace::default();
    loop {
        let mut moved_this_pass = false;
        for i in 1..=f.n() {
            let (next, moved) = shift_up_counted(&current, i).expect("coordinate in range");
            if moved > 0 {
                visit(i, &current, &next);
                trace.steps.push(ShiftStep { coordinate: i, moved });
                moved_this_pass = true;
                current = next;
            }
        }
        if !moved_this_pass {
            break;
        }
        trace.passes += 1;
    }
    trace.final_potential = potential(&current);
    (current, trace)
}

pub fn monotonize(f: &BooleanFunction) -> (BooleanFunction, ShiftTrace) {
    monotonize_with(f, |_, _, _| {})
}
