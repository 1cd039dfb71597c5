use std::sync::Arc;

use super::{handle_from_supermodular, sandwich_member, CanonicalDecomposition, IntVector, MConvexSet};
use crate::error::{Error, Result};
use crate::ext::{ExtInt, Finite, NegInf};
use crate::mconvex::newton_dinkelbach_beta1;
use crate::setfn::{maximize_shifted_supermodular, Class, Kind, SetFunction, SharedFn};
use crate::subset::Subset;

/// The contraction of `B'(p)` by a tight set `S₁` on which the member is fixed to `m₁`.
///
/// On `Y ⊆ S − S₁` it evaluates `max_{W ⊆ S₁} p(W ∪ Y) − m̃₁(W)`; for fully supermodular
/// `p` the maximum is attained at `W = S₁`, giving `p(Y ∪ S₁) − m̃(S₁)`.
pub struct Contraction {
    inner: SharedFn,
    keep: Subset,
    peeled: Subset,
    weights: Vec<i64>,
    offset: i64,
}

impl Contraction {
    /// `m` is indexed by the inner ground set; only its entries on `peeled` are used.
    pub fn new(inner: SharedFn, peeled: Subset, m: &[i64]) -> Result<Self> {
        let full = Subset::full(inner.n());
        if peeled.is_empty() || peeled == full || !peeled.is_subset_of(full) {
            return Err(Error::Precondition("contraction set must be a nonempty proper subset".into()));
        }
        let mut weights = vec![0; inner.n()];
        for v in peeled.iter() {
            weights[v] = m[v];
        }
        let offset = peeled.sum(m)?;
        Ok(Contraction { keep: full.minus(peeled), inner, peeled, weights, offset })
    }

    fn lift(&self, y: Subset) -> Subset {
        self.keep.deposit(y.0)
    }

    /// Inner indices of the local elements.
    pub fn kept(&self) -> Vec<usize> {
        self.keep.to_vec()
    }
}

impl SetFunction for Contraction {
    fn n(&self) -> usize {
        self.keep.len()
    }
    fn kind(&self) -> Kind {
        Kind::Supermodular
    }
    fn class(&self) -> Class {
        self.inner.class()
    }

    fn eval(&self, y: Subset) -> Result<ExtInt> {
        let ly = self.lift(y);
        if y.is_empty() {
            return Ok(Finite(0));
        }
        if self.inner.class() == Class::Fully || ly == self.keep {
            return self.inner.eval(ly.union(self.peeled))?.add_i64(-self.offset);
        }
        let (_, v) = self.inner.maximize_minus_modular(&self.weights, ly, ly.union(self.peeled))?;
        Ok(v)
    }

    fn maximize_minus_modular(&self, w: &[i64], must: Subset, allowed: Subset) -> Result<(Subset, ExtInt)> {
        let mut big = self.weights.clone();
        for (i, v) in self.keep.iter().enumerate() {
            big[v] = w[i];
        }
        let must_l = self.lift(must);
        let allowed_l = self.lift(allowed).union(self.peeled);
        let (x, v) = self.inner.maximize_minus_modular(&big, must_l, allowed_l)?;
        // with Y empty the joint value is max_W p(W) − m̃(W) = 0, matching p'(∅)
        Ok((self.keep.extract(x.inter(self.keep)), v))
    }
}

fn oracle_of(h: &dyn MConvexSet) -> Result<SharedFn> {
    h.oracle()
        .ok_or_else(|| Error::Unsupported("handle has no supermodular oracle".into()))
}

/// Smallest `β ≥ start` admitting a member with all components at most `β`.
fn smallest_covering_beta(p: &dyn SetFunction, start: i64) -> Result<(i64, IntVector)> {
    let n = p.n();
    let lower = vec![NegInf; n];
    let attempt = |b: i64| -> Result<Option<IntVector>> {
        match sandwich_member(p, &lower, &vec![Finite(b); n]) {
            Ok(m) => Ok(Some(m)),
            Err(Error::Infeasible { .. }) => Ok(None),
            Err(e) => Err(e),
        }
    };
    if let Some(m) = attempt(start)? {
        return Ok((start, m));
    }
    let (mut bad, mut step) = (start, 1i64);
    let mut good = loop {
        let b = start.checked_add(step).ok_or(Error::Overflow)?;
        if let Some(m) = attempt(b)? {
            break (b, m);
        }
        bad = b;
        step = step.checked_mul(2).ok_or(Error::Overflow)?;
    };
    while good.0 - bad > 1 {
        let mid = bad + (good.0 - bad) / 2;
        match attempt(mid)? {
            Some(m) => good = (mid, m),
            None => bad = mid,
        }
    }
    Ok(good)
}

/// A member with every component at most `beta`.
///
/// For fully supermodular oracles each coordinate in turn is lowered to the least value
/// keeping `(.., z, β, .., β)` in the supermodular polyhedron; other classes use the
/// bounded member routine.
pub fn beta1_covered_member(h: &dyn MConvexSet, beta: i64) -> Result<IntVector> {
    let p = oracle_of(h)?;
    let n = p.n();
    if p.class() != Class::Fully {
        return sandwich_member(p.as_ref(), &vec![NegInf; n], &vec![Finite(beta); n]);
    }
    let (x, v) = maximize_shifted_supermodular(p.as_ref(), beta)?;
    if v > Finite(0) {
        return Err(Error::infeasible_set("bound is not good: p(X) > β|X|", x));
    }
    let full = Subset::full(n);
    let mut m = vec![beta; n];
    for i in 0..n {
        let mut w = m.clone();
        w[i] = 0;
        let (_, z) = p.maximize_minus_modular(&w, Subset::singleton(i), full)?;
        m[i] = z.expect_finite("coordinate minimum")?;
    }
    Ok(IntVector(m))
}

/// Tightens at elements of value `beta` until none can shed a unit; returns the
/// resulting member and `S₁ = ∪ {T_m(t) : m(t) = β}`.
pub fn pre_decmin(h: &dyn MConvexSet, m: &[i64], beta: i64) -> Result<(IntVector, Subset)> {
    super::check_len(h, m)?;
    if m.iter().any(|&v| v > beta) {
        return Err(Error::Precondition("member is not β-covered".into()));
    }
    let n = m.len();
    let mut m = IntVector(m.to_vec());
    loop {
        let mut changed = false;
        for t in 0..n {
            if m[t] != beta {
                continue;
            }
            let mut cand: Vec<usize> = (0..n).filter(|&s| m[s] <= beta - 2).collect();
            cand.sort_by_key(|&s| (m[s], s));
            for s in cand {
                if h.exchange_feasible(&m, s, t)? {
                    m = m.shifted(s, t);
                    changed = true;
                    break;
                }
            }
        }
        if !changed {
            break;
        }
    }
    let mut s1 = Subset::EMPTY;
    for t in 0..n {
        if m[t] == beta {
            s1 = s1.union(h.smallest_tight_set(&m, t)?);
        }
    }
    Ok((m, s1))
}

/// Strongly polynomial dec-min (given a polynomial oracle): repeatedly compute `β₁`,
/// a pre-dec-min member and its first canonical block, then contract that block.
pub fn decmin_strong(h: &dyn MConvexSet) -> Result<(IntVector, CanonicalDecomposition)> {
    let n = h.n();
    let mut q = oracle_of(h)?;
    let mut global: Vec<usize> = (0..n).collect();
    let mut m = vec![0i64; n];
    let mut covered = Subset::EMPTY;
    let mut chain = Vec::new();
    let mut values = Vec::new();
    loop {
        let hq = handle_from_supermodular(q.clone())?;
        let nd = newton_dinkelbach_beta1(q.as_ref())?;
        let (beta, start) = if q.class() == Class::Fully {
            (nd.beta1, beta1_covered_member(&hq, nd.beta1)?)
        } else {
            smallest_covering_beta(q.as_ref(), nd.beta1)?
        };
        let (ml, s1) = pre_decmin(&hq, &start, beta)?;
        for v in s1.iter() {
            m[global[v]] = ml[v];
            covered = covered.with(global[v]);
        }
        chain.push(covered);
        values.push(beta);
        if s1 == Subset::full(q.n()) {
            break;
        }
        let c = Contraction::new(q.clone(), s1, &ml)?;
        global = c.kept().into_iter().map(|v| global[v]).collect();
        q = Arc::new(c);
    }
    let decomp = CanonicalDecomposition::from_chain(n, chain, values)?;
    Ok((IntVector(m), decomp))
}
