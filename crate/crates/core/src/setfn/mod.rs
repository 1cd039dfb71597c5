//! Ground sets, set-function oracles and the exhaustive optimization backend.

mod explicit;

use std::sync::{Arc, OnceLock};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::ext::{ExtInt, Finite, NegInf, PosInf};
use crate::subset::Subset;

pub use explicit::{ExplicitSetFunction, FnSetFunction, SetFunctionFile};

/// Default cap on free elements scanned by the enumeration backend.
pub const DEFAULT_ENUM_CAP: usize = 24;

/// Environment variable overriding [`DEFAULT_ENUM_CAP`].
pub const ENUM_CAP_VAR: &str = "DECMIN_ENUM_CAP";

/// Value of [`ENUM_CAP_VAR`], if set and numeric (read once).
pub fn enum_cap_override() -> Option<usize> {
    static CAP: OnceLock<Option<usize>> = OnceLock::new();
    *CAP.get_or_init(|| std::env::var(ENUM_CAP_VAR).ok().and_then(|v| v.trim().parse().ok()))
}

/// Current enumeration cap.
pub fn enum_cap() -> usize {
    enum_cap_override().unwrap_or(DEFAULT_ENUM_CAP)
}

pub(crate) fn check_cap(free: usize) -> Result<()> {
    let cap = enum_cap().min(63);
    if free > cap {
        Err(Error::Capacity { needed: free, cap })
    } else {
        Ok(())
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Kind {
    Supermodular,
    Submodular,
}

impl Kind {
    pub fn flip(self) -> Kind {
        match self {
            Kind::Supermodular => Kind::Submodular,
            Kind::Submodular => Kind::Supermodular,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Class {
    Fully,
    Intersecting,
    Crossing,
}

/// Evaluation oracle for an integer set function on `0..n`.
///
/// Implementations must return 0 on the empty set and a finite value on the full set.
pub trait SetFunction: Send + Sync {
    fn n(&self) -> usize;
    fn kind(&self) -> Kind;
    fn class(&self) -> Class;
    fn eval(&self, x: Subset) -> Result<ExtInt>;

    /// Maximizes `eval(X) - w(X)` over `must ⊆ X ⊆ allowed`.
    ///
    /// Returns the numerically smallest maximizer. The default scans all candidates.
    fn maximize_minus_modular(
        &self,
        w: &[i64],
        must: Subset,
        allowed: Subset,
    ) -> Result<(Subset, ExtInt)> {
        enumerate_max_minus_modular(self, w, must, allowed)
    }
}

pub type SharedFn = Arc<dyn SetFunction>;

/// Exhaustive version of [`SetFunction::maximize_minus_modular`].
pub fn enumerate_max_minus_modular<F: SetFunction + ?Sized>(
    f: &F,
    w: &[i64],
    must: Subset,
    allowed: Subset,
) -> Result<(Subset, ExtInt)> {
    if !must.is_subset_of(allowed) {
        return Err(Error::Precondition("required set not inside allowed set".into()));
    }
    let free = allowed.minus(must);
    check_cap(free.len())?;
    let mut best: Option<(Subset, ExtInt)> = None;
    for k in free.subsets() {
        let x = must.union(k);
        let v = f.eval(x)?.add_i64(-x.sum(w)?)?;
        if best.map_or(true, |(_, b)| v > b) {
            best = Some((x, v));
        }
    }
    Ok(best.expect("at least one candidate"))
}

/// The complementary function `X ↦ b(S) - b(S - X)`.
pub struct Complement {
    inner: SharedFn,
    full: i64,
}

impl SetFunction for Complement {
    fn n(&self) -> usize {
        self.inner.n()
    }
    fn kind(&self) -> Kind {
        self.inner.kind().flip()
    }
    fn class(&self) -> Class {
        self.inner.class()
    }
    fn eval(&self, x: Subset) -> Result<ExtInt> {
        let rest = Subset::full(self.n()).minus(x);
        Finite(self.full).checked_sub(self.inner.eval(rest)?)
    }
}

/// Builds the complementary function. Intersecting classes are rejected since
/// their complements are only crossing.
pub fn complement_function(b: SharedFn) -> Result<Complement> {
    if b.class() == Class::Intersecting {
        return Err(Error::ClassDowngrade);
    }
    let full = b.eval(Subset::full(b.n()))?.expect_finite("value on the full set")?;
    Ok(Complement { inner: b, full })
}

/// Candidate family for [`minimize_submodular`].
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Family {
    All,
    /// Sets containing `t` but not `s`.
    TsBar { t: usize, s: usize },
    NonemptyProper,
}

/// Minimizes `b` over a family by enumeration, returning the smallest-mask minimizer.
pub fn minimize_submodular(b: &dyn SetFunction, family: Family) -> Result<(Subset, ExtInt)> {
    let n = b.n();
    let full = Subset::full(n);
    let (must, allowed) = match family {
        Family::All | Family::NonemptyProper => (Subset::EMPTY, full),
        Family::TsBar { t, s } => {
            if t == s || t >= n || s >= n {
                return Err(Error::Precondition("t and s must be distinct elements".into()));
            }
            (Subset::singleton(t), full.without(s))
        }
    };
    let free = allowed.minus(must);
    check_cap(free.len())?;
    let mut best: Option<(Subset, ExtInt)> = None;
    for k in free.subsets() {
        let x = must.union(k);
        if family == Family::NonemptyProper && (x.is_empty() || x == full) {
            continue;
        }
        let v = b.eval(x)?;
        if best.map_or(true, |(_, bv)| v < bv) {
            best = Some((x, v));
        }
    }
    best.ok_or_else(|| Error::Precondition("family is empty".into()))
}

/// Maximizes `p(X) - mu|X|` over all `X` (empty set allowed, value 0).
///
/// For crossing functions the search is split into `n(n-1)` restricted problems over
/// the `s t̄`-sets plus the full set, on each of which the function is fully supermodular.
pub fn maximize_shifted_supermodular(p: &dyn SetFunction, mu: i64) -> Result<(Subset, ExtInt)> {
    let n = p.n();
    let full = Subset::full(n);
    let w = vec![mu; n];
    if p.class() != Class::Crossing {
        return p.maximize_minus_modular(&w, Subset::EMPTY, full);
    }
    let mut best = (Subset::EMPTY, Finite(0));
    let mut consider = |x: Subset, v: ExtInt| {
        if v > best.1 || (v == best.1 && x < best.0) {
            best = (x, v);
        }
    };
    let fv = p.eval(full)?.add_i64(-(mu.checked_mul(n as i64).ok_or(Error::Overflow)?))?;
    consider(full, fv);
    for s in 0..n {
        for t in 0..n {
            if s != t {
                let (x, v) =
                    p.maximize_minus_modular(&w, Subset::singleton(s), full.without(t))?;
                consider(x, v);
            }
        }
    }
    Ok(best)
}

/// Checks the (super/sub)modular inequality of the declared class on all relevant pairs.
pub fn verify_class(f: &dyn SetFunction) -> Result<bool> {
    let n = f.n();
    check_cap(n)?;
    let full = Subset::full(n);
    let vals: Vec<ExtInt> = full.subsets().map(|x| f.eval(x)).collect::<Result<_>>()?;
    if vals[0] != Finite(0) || !vals[full.0 as usize].is_finite() {
        return Ok(false);
    }
    let bad_inf = match f.kind() {
        Kind::Supermodular => PosInf,
        Kind::Submodular => NegInf,
    };
    if vals.contains(&bad_inf) {
        return Ok(false);
    }
    for a in 0..=full.0 {
        for b in a + 1..=full.0 {
            let (x, y) = (Subset(a), Subset(b));
            let i = x.inter(y);
            let u = x.union(y);
            let relevant = match f.class() {
                Class::Fully => true,
                Class::Intersecting => !i.is_empty(),
                Class::Crossing => !i.is_empty() && u != full,
            };
            if !relevant {
                continue;
            }
            let (va, vb, vi, vu) = (vals[a as usize], vals[b as usize], vals[i.0 as usize], vals[u.0 as usize]);
            if [va, vb, vi, vu].iter().any(|v| !v.is_finite()) {
                continue;
            }
            let lhs = va.checked_add(vb)?;
            let rhs = vi.checked_add(vu)?;
            let ok = match f.kind() {
                Kind::Supermodular => lhs <= rhs,
                Kind::Submodular => lhs >= rhs,
            };
            if !ok {
                return Ok(false);
            }
        }
    }
    Ok(true)
}
