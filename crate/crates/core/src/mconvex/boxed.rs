use std::sync::Arc;

use super::{check_len, BoxBounds, IntVector, MConvexSet, SharedHandle};
use crate::error::{Error, Result};
use crate::ext::{ExtInt, Finite, NegInf};
use crate::setfn::{Class, Kind, SetFunction, SharedFn};
use crate::subset::Subset;

/// `B ∩ T(f, g)` for an inner handle `B`.
#[derive(Clone)]
pub struct BoxHandle {
    inner: SharedHandle,
    bounds: BoxBounds,
}

pub fn box_intersect(h: SharedHandle, bounds: BoxBounds) -> Result<BoxHandle> {
    if bounds.len() != h.n() {
        return Err(Error::Invalid("box does not match ground set".into()));
    }
    BoxBounds::new(bounds.lower.clone(), bounds.upper.clone())?;
    Ok(BoxHandle { inner: h, bounds })
}

impl BoxHandle {
    pub fn bounds(&self) -> &BoxBounds {
        &self.bounds
    }

    pub fn inner(&self) -> &SharedHandle {
        &self.inner
    }
}

impl MConvexSet for BoxHandle {
    fn n(&self) -> usize {
        self.inner.n()
    }

    fn total(&self) -> i64 {
        self.inner.total()
    }

    /// Repairs an unrestricted member: excess above `g` first, then deficits below `f`.
    fn member(&self) -> Result<IntVector> {
        let n = self.n();
        let (f, g) = (&self.bounds.lower, &self.bounds.upper);
        let mut m = self.inner.member()?;
        while let Some(t) = (0..n).find(|&t| Finite(m[t]) > g[t]) {
            let mut moved = false;
            for s in 0..n {
                if s != t && Finite(m[s]) < g[s] && self.inner.exchange_feasible(&m, s, t)? {
                    m = m.shifted(s, t);
                    moved = true;
                    break;
                }
            }
            if !moved {
                let x = self.inner.smallest_tight_set(&m, t)?;
                return Err(Error::infeasible_set("tight set exceeds the upper bounds", x));
            }
        }
        while let Some(t) = (0..n).find(|&t| Finite(m[t]) < f[t]) {
            let mut moved = false;
            let mut reach = Subset::singleton(t);
            for s in 0..n {
                if s == t || !self.inner.exchange_feasible(&m, t, s)? {
                    continue;
                }
                reach = reach.with(s);
                if Finite(m[s]) > f[s] {
                    m = m.shifted(t, s);
                    moved = true;
                    break;
                }
            }
            if !moved {
                return Err(Error::infeasible_set(
                    "set whose complement is tight falls short of the lower bounds",
                    reach,
                ));
            }
        }
        Ok(m)
    }

    fn exchange_feasible(&self, m: &[i64], s: usize, t: usize) -> Result<bool> {
        check_len(self, m)?;
        if s == t {
            return Ok(true);
        }
        Ok(Finite(m[s]) < self.bounds.upper[s]
            && Finite(m[t]) > self.bounds.lower[t]
            && self.inner.exchange_feasible(m, s, t)?)
    }

    fn contains(&self, x: &[i64]) -> Option<Result<bool>> {
        if !self.bounds.contains(x) {
            return Some(Ok(false));
        }
        self.inner.contains(x)
    }

    fn oracle(&self) -> Option<SharedFn> {
        let p = self.inner.oracle()?;
        if p.class() != Class::Fully {
            return None;
        }
        Some(Arc::new(BoxedFunction { p, bounds: self.bounds.clone() }))
    }

    /// `{u}` when `m(u) = f(u)`, else the inner `T_m(u)` minus the elements at their upper bound.
    fn smallest_tight_set(&self, m: &[i64], u: usize) -> Result<Subset> {
        if self.bounds.at_lower(u, m[u]) {
            return Ok(Subset::singleton(u));
        }
        let t = self.inner.smallest_tight_set(m, u)?;
        Ok(t.iter()
            .filter(|&v| v == u || !self.bounds.at_upper(v, m[v]))
            .fold(Subset::EMPTY, Subset::with))
    }
}

/// `p□(Y) = max_X p(X) + f̃(Y − X) − g̃(X − Y)` for a fully supermodular `p`.
pub struct BoxedFunction {
    p: SharedFn,
    bounds: BoxBounds,
}

impl BoxedFunction {
    pub fn new(p: SharedFn, bounds: BoxBounds) -> Result<Self> {
        if bounds.len() != p.n() {
            return Err(Error::Invalid("box does not match ground set".into()));
        }
        Ok(BoxedFunction { p, bounds })
    }
}

impl SetFunction for BoxedFunction {
    fn n(&self) -> usize {
        self.p.n()
    }
    fn kind(&self) -> Kind {
        Kind::Supermodular
    }
    fn class(&self) -> Class {
        Class::Fully
    }

    fn eval(&self, y: Subset) -> Result<ExtInt> {
        let w = vec![0; self.n()];
        let (_, v) = self.maximize_minus_modular(&w, y, y)?;
        Ok(v)
    }

    /// Given `X`, each element independently picks its best membership in `Y`, which
    /// reduces the joint problem to one maximization of `p` minus a modular function.
    fn maximize_minus_modular(&self, w: &[i64], must: Subset, allowed: Subset) -> Result<(Subset, ExtInt)> {
        let n = self.n();
        let (f, g) = (&self.bounds.lower, &self.bounds.upper);
        // gain of element v when in X (`a`) and when outside X (`b`), maximized over Y-membership
        let mut a = vec![NegInf; n];
        let mut b = vec![NegInf; n];
        for v in 0..n {
            let in_y_ok = allowed.contains(v);
            let out_y_ok = !must.contains(v);
            if in_y_ok {
                a[v] = a[v].max(Finite(-w[v]));
                b[v] = b[v].max(f[v].add_i64(-w[v])?);
            }
            if out_y_ok {
                a[v] = a[v].max(-g[v]);
                b[v] = b[v].max(Finite(0));
            }
        }
        let mut must_x = Subset::EMPTY;
        let mut allowed_x = Subset::full(n);
        let mut constant = 0i64;
        let mut weight = vec![0i64; n];
        for v in 0..n {
            match (a[v], b[v]) {
                (NegInf, NegInf) => return Ok((must, NegInf)),
                (NegInf, Finite(bv)) => {
                    allowed_x = allowed_x.without(v);
                    constant = constant.checked_add(bv).ok_or(Error::Overflow)?;
                }
                (Finite(av), NegInf) => {
                    must_x = must_x.with(v);
                    weight[v] = av.checked_neg().ok_or(Error::Overflow)?;
                }
                (Finite(av), Finite(bv)) => {
                    constant = constant.checked_add(bv).ok_or(Error::Overflow)?;
                    weight[v] = bv.checked_sub(av).ok_or(Error::Overflow)?;
                }
                _ => unreachable!("gains are never +inf"),
            }
        }
        let (x, v) = self.p.maximize_minus_modular(&weight, must_x, allowed_x)?;
        if v == NegInf {
            return Ok((must, NegInf));
        }
        // recover Y: prefer leaving v out on ties
        let mut y = Subset::EMPTY;
        for v in 0..n {
            let (gain_in, gain_out) = if x.contains(v) {
                (Finite(-w[v]), -g[v])
            } else {
                (f[v].add_i64(-w[v])?, Finite(0))
            };
            let in_y = must.contains(v) || (allowed.contains(v) && gain_in > gain_out);
            if in_y {
                y = y.with(v);
            }
        }
        Ok((y, v.add_i64(constant)?))
    }
}
