use super::{check_len, IntVector, MConvexSet};
use crate::error::{Error, Result};

/// Default step budget of [`decmin_basic`].
pub const DEFAULT_BUDGET: u64 = 10_000_000;

/// One 1-tightening step `m + χ_s − χ_t` with `m(t) ≥ m(s) + 2`, if any.
///
/// `t` is scanned by decreasing value, `s` by increasing value, ties by index.
pub fn tighten_once(h: &dyn MConvexSet, m: &[i64]) -> Result<Option<(IntVector, usize, usize)>> {
    check_len(h, m)?;
    let n = m.len();
    let mut by_val: Vec<usize> = (0..n).collect();
    by_val.sort_by_key(|&i| (m[i], i));
    let mut ts = by_val.clone();
    ts.sort_by_key(|&i| (std::cmp::Reverse(m[i]), i));
    for &t in &ts {
        for &s in &by_val {
            if m[t] < m[s].saturating_add(2) {
                break;
            }
            if h.exchange_feasible(m, s, t)? {
                return Ok(Some((IntVector(m.to_vec()).shifted(s, t), s, t)));
            }
        }
    }
    Ok(None)
}

/// Applies 1-tightening steps until none exists. Pseudo-polynomial; bounded by `budget`.
pub fn decmin_basic(h: &dyn MConvexSet, budget: Option<u64>) -> Result<IntVector> {
    let budget = budget.unwrap_or(DEFAULT_BUDGET);
    let mut m = h.member()?;
    let mut steps = 0u64;
    while let Some((next, _, _)) = tighten_once(h, &m)? {
        if steps == budget {
            return Err(Error::Budget(budget));
        }
        steps += 1;
        m = next;
    }
    Ok(m)
}
