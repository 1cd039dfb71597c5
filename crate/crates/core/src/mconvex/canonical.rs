use super::{check_len, decmin_basic, decmin_strong, CanonicalDecomposition, IntVector, MConvexSet};
use crate::error::{Error, Result};
use crate::ext::Finite;
use crate::setfn::Class;
use crate::subset::Subset;

/// `T_m(u)`, the smallest `m`-tight set containing `u`.
pub fn smallest_tight_set(h: &dyn MConvexSet, m: &[i64], u: usize) -> Result<Subset> {
    check_len(h, m)?;
    if u >= m.len() {
        return Err(Error::Invalid(format!("element {u} out of range")));
    }
    h.smallest_tight_set(m, u)
}

/// Chain construction from a `T_m` oracle: `C_i` is the union of `T_m(u)` over all `u`
/// with `m(u) ≥ β_i`, where `β_i` is the largest value outside `C_{i−1}`.
pub fn canonical_from_tight_sets(
    m: &[i64],
    mut tight: impl FnMut(usize) -> Result<Subset>,
) -> Result<CanonicalDecomposition> {
    let n = m.len();
    let full = Subset::full(n);
    let mut c = Subset::EMPTY;
    let mut chain = Vec::new();
    let mut values = Vec::new();
    while c != full {
        let beta = full.minus(c).iter().map(|v| m[v]).max().expect("nonempty remainder");
        let mut next = c;
        for u in full.minus(c).iter().filter(|&u| m[u] >= beta) {
            next = next.union(tight(u)?);
        }
        for v in next.minus(c).iter() {
            if m[v] > beta || m[v] < beta - 1 {
                return Err(Error::NotDecMin(format!(
                    "element {v} has value {} outside [{}, {beta}]",
                    m[v],
                    beta - 1
                )));
            }
        }
        if values.last().is_some_and(|&b| b <= beta) {
            return Err(Error::NotDecMin("values not strictly decreasing".into()));
        }
        chain.push(next);
        values.push(beta);
        c = next;
    }
    CanonicalDecomposition::from_chain(n, chain, values)
}

/// Canonical chain, partition and essential values from a dec-min member.
pub fn canonical_chain(h: &dyn MConvexSet, m: &[i64]) -> Result<CanonicalDecomposition> {
    check_len(h, m)?;
    canonical_from_tight_sets(m, |u| h.smallest_tight_set(m, u))
}

fn is_tight(h: &dyn MConvexSet, m: &[i64], x: Subset) -> Result<bool> {
    let n = m.len();
    if x.is_empty() || x == Subset::full(n) {
        return Ok(true);
    }
    if let Some(p) = h.oracle() {
        if p.class() == Class::Fully {
            return Ok(p.eval(x)? == Finite(x.sum(m)?));
        }
    }
    // tight iff no unit can leave x
    for t in x.iter() {
        for s in Subset::full(n).minus(x).iter() {
            if h.exchange_feasible(m, s, t)? {
                return Ok(false);
            }
        }
    }
    Ok(true)
}

/// Whether `m` is dec-min: every chain member is tight and `m` lies in the small box.
pub fn verify_decmin(h: &dyn MConvexSet, m: &[i64], decomp: &CanonicalDecomposition) -> Result<bool> {
    check_len(h, m)?;
    decomp.validate()?;
    if decomp.n() != m.len() {
        return Err(Error::Invalid("decomposition is for another ground set".into()));
    }
    if (0..m.len()).any(|v| m[v] < decomp.f_star[v] || m[v] > decomp.g_star[v]) {
        return Ok(false);
    }
    if let Some(r) = h.contains(m) {
        if !r? {
            return Ok(false);
        }
    } else if crate::ext::checked_sum(m)? != h.total() {
        return Ok(false);
    }
    for &c in &decomp.chain {
        if !is_tight(h, m, c)? {
            return Ok(false);
        }
    }
    Ok(true)
}

/// A dec-min member minimizing `Σ cost(v) m(v)`.
///
/// Starts from any dec-min member and applies elementary exchanges `m + χ_s − χ_t` with
/// `m(t) = m(s) + 1`, `cost(s) < cost(t)`, staying in the small box; the dec-min set is
/// M-convex, so the local optimum is global.
pub fn min_cost_decmin(h: &dyn MConvexSet, decomp: &CanonicalDecomposition, cost: &[i64]) -> Result<IntVector> {
    let n = h.n();
    if cost.len() != n {
        return Err(Error::Invalid("cost vector does not match ground set".into()));
    }
    let mut m = if h.oracle().is_some() {
        decmin_strong(h)?.0
    } else {
        decmin_basic(h, None)?
    };
    if !verify_decmin(h, &m, decomp)? {
        return Err(Error::Invalid("decomposition is inconsistent with the handle".into()));
    }
    loop {
        let mut best: Option<(i64, usize, usize)> = None;
        for t in 0..n {
            for s in 0..n {
                if s == t
                    || m[t] != m[s] + 1
                    || cost[s] >= cost[t]
                    || m[t] - 1 < decomp.f_star[t]
                    || m[s] + 1 > decomp.g_star[s]
                {
                    continue;
                }
                let gain = cost[t] - cost[s];
                if best.is_some_and(|(g, _, _)| g >= gain) {
                    continue;
                }
                if h.exchange_feasible(&m, s, t)? {
                    best = Some((gain, s, t));
                }
            }
        }
        match best {
            Some((_, s, t)) => m = m.shifted(s, t),
            None => return Ok(m),
        }
    }
}

#[cfg(test)]
mod tests {
    use std::sync::Arc;

    use super::*;
    use crate::mconvex::handle_from_supermodular;
    use crate::setfn::{FnSetFunction, Kind, SharedFn};

    fn induced(edges: Vec<(usize, usize)>, n: usize) -> SharedFn {
        Arc::new(FnSetFunction::new(n, Kind::Supermodular, Class::Fully, move |x| {
            Finite(edges.iter().filter(|&&(a, b)| x.contains(a) && x.contains(b)).count() as i64)
        }))
    }

    fn k4() -> SharedFn {
        induced(vec![(0, 1), (0, 2), (0, 3), (1, 2), (1, 3), (2, 3)], 4)
    }

    #[test]
    fn chain_of_k4_pendant() {
        let h = handle_from_supermodular(induced(
            vec![(0, 1), (0, 2), (0, 3), (1, 2), (1, 3), (2, 3), (3, 4)],
            5,
        ))
        .unwrap();
        let d = canonical_chain(&h, &[2, 2, 1, 1, 1]).unwrap();
        assert_eq!(d.chain, vec![Subset::full(4), Subset::full(5)]);
        assert_eq!(d.values, vec![2, 1]);
        assert!(verify_decmin(&h, &[2, 2, 1, 1, 1], &d).unwrap());
        assert!(!verify_decmin(&h, &[2, 2, 2, 0, 1], &d).unwrap());
    }

    #[test]
    fn k4_single_block() {
        let h = handle_from_supermodular(k4()).unwrap();
        let d = canonical_chain(&h, &[1, 1, 2, 2]).unwrap();
        assert_eq!(d.chain, vec![Subset::full(4)]);
        assert_eq!(d.values, vec![2]);
    }

    #[test]
    fn non_decmin_detected() {
        let h = handle_from_supermodular(k4()).unwrap();
        assert!(matches!(canonical_chain(&h, &[0, 1, 2, 3]), Err(Error::NotDecMin(_))));
    }

    #[test]
    fn cheapest_k4() {
        let h = handle_from_supermodular(k4()).unwrap();
        let d = canonical_chain(&h, &[1, 1, 2, 2]).unwrap();
        let m = min_cost_decmin(&h, &d, &[0, 0, 10, 10]).unwrap();
        assert_eq!(m.0, vec![2, 2, 1, 1]);
        let u = min_cost_decmin(&h, &d, &[3, 3, 3, 3]).unwrap();
        assert_eq!(u.iter().map(|v| v * 3).sum::<i64>(), 18);
    }
}
