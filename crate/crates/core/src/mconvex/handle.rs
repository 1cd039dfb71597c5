use super::{check_len, IntVector, MConvexSet};
use crate::error::{Error, Result};
use crate::ext::{ExtInt, Finite, NegInf, PosInf};
use crate::setfn::{check_cap, Class, Kind, SetFunction, SharedFn};
use crate::subset::{Subset, MAX_GROUND};

/// Largest ground set the partition-closure member routine accepts.
const SANDWICH_MAX_N: usize = 17;

/// Handle for the base polyhedron `B'(p)` of a supermodular function.
#[derive(Clone)]
pub struct SupermodularHandle {
    p: SharedFn,
    total: i64,
}

pub fn handle_from_supermodular(p: SharedFn) -> Result<SupermodularHandle> {
    if p.kind() != Kind::Supermodular {
        return Err(Error::Precondition("handle needs a supermodular function".into()));
    }
    let n = p.n();
    if n == 0 || n > MAX_GROUND {
        return Err(Error::Invalid(format!("ground set size {n} unsupported")));
    }
    let total = p.eval(Subset::full(n))?.expect_finite("value on the full set")?;
    Ok(SupermodularHandle { p, total })
}

impl SupermodularHandle {
    pub fn function(&self) -> &SharedFn {
        &self.p
    }

    /// Edmonds' greedy along the chain `{0}, {0,1}, ...`; `None` if a prefix value is infinite.
    fn greedy(&self) -> Result<Option<IntVector>> {
        let n = self.p.n();
        let mut x = Vec::with_capacity(n);
        let mut prev = 0i64;
        for i in 0..n {
            match self.p.eval(Subset::full(i + 1))? {
                Finite(v) => {
                    x.push(v.checked_sub(prev).ok_or(Error::Overflow)?);
                    prev = v;
                }
                _ => return Ok(None),
            }
        }
        Ok(Some(IntVector(x)))
    }
}

impl MConvexSet for SupermodularHandle {
    fn n(&self) -> usize {
        self.p.n()
    }

    fn total(&self) -> i64 {
        self.total
    }

    fn member(&self) -> Result<IntVector> {
        if self.p.class() == Class::Fully {
            if let Some(x) = self.greedy()? {
                return Ok(x);
            }
        }
        let n = self.n();
        sandwich_member(self.p.as_ref(), &vec![NegInf; n], &vec![PosInf; n])
    }

    fn exchange_feasible(&self, m: &[i64], s: usize, t: usize) -> Result<bool> {
        check_len(self, m)?;
        if s == t {
            return Ok(true);
        }
        let full = Subset::full(self.n());
        let (_, v) = self.p.maximize_minus_modular(m, Subset::singleton(t), full.without(s))?;
        Ok(v < Finite(0))
    }

    fn contains(&self, x: &[i64]) -> Option<Result<bool>> {
        Some((|| {
            check_len(self, x)?;
            if crate::ext::checked_sum(x)? != self.total {
                return Ok(false);
            }
            let (_, v) = self.p.maximize_minus_modular(x, Subset::EMPTY, Subset::full(self.n()))?;
            Ok(v <= Finite(0))
        })())
    }

    fn oracle(&self) -> Option<SharedFn> {
        Some(self.p.clone())
    }
}

/// Partition closure of a set function on `0..k`: best sum over partitions into
/// nonempty blocks (`maximize` picks max, else min).
fn partition_closure(f: &[ExtInt], maximize: bool) -> Result<Vec<ExtInt>> {
    let size = f.len();
    let mut c = vec![Finite(0); size];
    for z in 1..size {
        let low = z & z.wrapping_neg();
        let rest = z ^ low;
        let mut best: Option<ExtInt> = None;
        // iterate subsets of `rest`, each joined with the lowest element
        let mut sub = rest;
        loop {
            let w = sub | low;
            let r = c[z ^ w];
            let fw = f[w];
            // infinities on the losing side never win; skip the indeterminate case
            let cand = match (fw, r) {
                (NegInf, PosInf) | (PosInf, NegInf) => None,
                _ => Some(fw.checked_add(r)?),
            };
            if let Some(v) = cand {
                best = Some(match best {
                    None => v,
                    Some(b) if maximize => b.max(v),
                    Some(b) => b.min(v),
                });
            }
            if sub == 0 {
                break;
            }
            sub = (sub - 1) & rest;
        }
        c[z] = best.unwrap_or(if maximize { NegInf } else { PosInf });
    }
    Ok(c)
}

/// First `Z` with `lower↑(Z) > upper↓(Z)`, if any.
fn sandwich_violation(lo: &[ExtInt], up: &[ExtInt]) -> Result<Option<Subset>> {
    let lc = partition_closure(lo, true)?;
    let uc = partition_closure(up, false)?;
    Ok((0..lo.len()).find(|&z| lc[z] > uc[z]).map(|z| Subset(z as u64)))
}

/// An integral member of `B'(p) ∩ T(lower, upper)` for intersecting or crossing `p`.
///
/// The last element `r` is projected away: on the rest, members correspond to vectors
/// `y` with `p(Z) ≤ ỹ(Z) ≤ p(S) − p(S−Z)`, an intersecting sandwich whose feasibility is
/// decided by comparing partition closures. Coordinates are then fixed one at a time.
pub fn sandwich_member(p: &dyn SetFunction, lower: &[ExtInt], upper: &[ExtInt]) -> Result<IntVector> {
    let n = p.n();
    if lower.len() != n || upper.len() != n {
        return Err(Error::Invalid("bounds do not match ground set".into()));
    }
    if n > SANDWICH_MAX_N {
        return Err(Error::Capacity { needed: n, cap: SANDWICH_MAX_N });
    }
    check_cap(n)?;
    let full = Subset::full(n);
    let ps = p.eval(full)?.expect_finite("value on the full set")?;
    if n == 1 {
        if lower[0] <= Finite(ps) && Finite(ps) <= upper[0] {
            return Ok(IntVector(vec![ps]));
        }
        return Err(Error::infeasible_set("box excludes the only member", full));
    }
    let k = n - 1;
    let r = k;
    let size = 1usize << k;
    let top = size - 1;
    let mut lo = vec![Finite(0); size];
    let mut up = vec![Finite(0); size];
    for z in 1..size {
        let zs = Subset(z as u64);
        lo[z] = p.eval(zs)?;
        up[z] = Finite(ps).checked_sub(p.eval(full.minus(zs))?)?;
    }
    for s in 0..k {
        let b = 1usize << s;
        lo[b] = lo[b].max(lower[s]);
        up[b] = up[b].min(upper[s]);
    }
    lo[top] = lo[top].max(Finite(ps).checked_sub(upper[r])?);
    up[top] = up[top].min(Finite(ps).checked_sub(lower[r])?);

    if let Some(z) = sandwich_violation(&lo, &up)? {
        return Err(Error::infeasible_set("no member within bounds", z));
    }

    // feasibility with extra bounds on coordinate s
    let test = |lo: &mut Vec<ExtInt>, up: &mut Vec<ExtInt>, s: usize, a: Option<i64>, b: Option<i64>| -> Result<bool> {
        let bit = 1usize << s;
        let (ol, ou) = (lo[bit], up[bit]);
        if let Some(a) = a {
            lo[bit] = lo[bit].max(Finite(a));
        }
        if let Some(b) = b {
            up[bit] = up[bit].min(Finite(b));
        }
        let ok = sandwich_violation(lo, up)?.is_none();
        lo[bit] = ol;
        up[bit] = ou;
        Ok(ok)
    };

    const LIMIT: i64 = 1 << 61;
    let mut y = vec![0i64; k];
    for s in 0..k {
        let target = 0i64;
        let c = if test(&mut lo, &mut up, s, Some(target), Some(target))? {
            target
        } else if !test(&mut lo, &mut up, s, None, Some(target))? {
            // all feasible values exceed the target: smallest c with y(s) ≤ c feasible
            let (mut bad, mut step) = (target, 1i64);
            let mut good = loop {
                let c = target.checked_add(step).filter(|c| c.abs() < LIMIT).ok_or(Error::Overflow)?;
                if test(&mut lo, &mut up, s, None, Some(c))? {
                    break c;
                }
                bad = c;
                step *= 2;
            };
            while good - bad > 1 {
                let mid = bad + (good - bad) / 2;
                if test(&mut lo, &mut up, s, None, Some(mid))? {
                    good = mid;
                } else {
                    bad = mid;
                }
            }
            good
        } else {
            // all feasible values lie below the target
            let (mut bad, mut step) = (target, 1i64);
            let mut good = loop {
                let c = target.checked_sub(step).filter(|c| c.abs() < LIMIT).ok_or(Error::Overflow)?;
                if test(&mut lo, &mut up, s, Some(c), None)? {
                    break c;
                }
                bad = c;
                step *= 2;
            };
            while bad - good > 1 {
                let mid = good + (bad - good) / 2;
                if test(&mut lo, &mut up, s, Some(mid), None)? {
                    good = mid;
                } else {
                    bad = mid;
                }
            }
            good
        };
        let bit = 1usize << s;
        lo[bit] = lo[bit].max(Finite(c));
        up[bit] = up[bit].min(Finite(c));
        y[s] = c;
    }
    let sum = crate::ext::checked_sum(&y)?;
    y.push(ps.checked_sub(sum).ok_or(Error::Overflow)?);
    Ok(IntVector(y))
}
