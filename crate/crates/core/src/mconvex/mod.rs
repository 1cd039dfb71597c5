//! Generic decreasing minimization over M-convex sets.

mod basic;
mod boxed;
mod canonical;
mod handle;
mod newton;
mod strong;

use std::cmp::Ordering;
use std::ops::{Deref, DerefMut};
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::ext::{ExtInt, Finite, NegInf, PosInf};
use crate::setfn::SharedFn;
use crate::subset::Subset;

pub use basic::{decmin_basic, tighten_once, DEFAULT_BUDGET};
pub use boxed::{box_intersect, BoxHandle, BoxedFunction};
pub use canonical::{canonical_chain, canonical_from_tight_sets, min_cost_decmin, smallest_tight_set, verify_decmin};
pub use handle::{handle_from_supermodular, sandwich_member, SupermodularHandle};
pub use newton::{newton_dinkelbach_beta1, NdResult, NdStep};
pub use strong::{beta1_covered_member, decmin_strong, pre_decmin, Contraction};

/// An integer vector over the ground set.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(transparent)]
pub struct IntVector(pub Vec<i64>);

impl IntVector {
    pub fn new(v: Vec<i64>) -> Self {
        IntVector(v)
    }

    pub fn zeros(n: usize) -> Self {
        IntVector(vec![0; n])
    }

    /// Components sorted non-increasingly.
    pub fn sorted_desc(&self) -> Vec<i64> {
        let mut v = self.0.clone();
        v.sort_unstable_by(|a, b| b.cmp(a));
        v
    }

    pub fn total(&self) -> Result<i64> {
        crate::ext::checked_sum(&self.0)
    }

    /// `self + χ_s − χ_t`.
    pub fn shifted(&self, s: usize, t: usize) -> Self {
        let mut v = self.clone();
        v.0[s] += 1;
        v.0[t] -= 1;
        v
    }
}

impl Deref for IntVector {
    type Target = Vec<i64>;
    fn deref(&self) -> &Vec<i64> {
        &self.0
    }
}

impl DerefMut for IntVector {
    fn deref_mut(&mut self) -> &mut Vec<i64> {
        &mut self.0
    }
}

impl From<Vec<i64>> for IntVector {
    fn from(v: Vec<i64>) -> Self {
        IntVector(v)
    }
}

/// Compares two vectors in the decreasing order: `Less` means `x` is dec-smaller.
pub fn dec_compare(x: &[i64], y: &[i64]) -> Result<Ordering> {
    if x.len() != y.len() {
        return Err(Error::Invalid("vectors live on different ground sets".into()));
    }
    let mut a = x.to_vec();
    let mut b = y.to_vec();
    a.sort_unstable_by(|p, q| q.cmp(p));
    b.sort_unstable_by(|p, q| q.cmp(p));
    Ok(a.cmp(&b))
}

/// Compares in the increasing order: `Greater` means `x` is inc-larger.
pub fn inc_compare(x: &[i64], y: &[i64]) -> Result<Ordering> {
    if x.len() != y.len() {
        return Err(Error::Invalid("vectors live on different ground sets".into()));
    }
    let mut a = x.to_vec();
    let mut b = y.to_vec();
    a.sort_unstable();
    b.sort_unstable();
    Ok(a.cmp(&b))
}

pub fn square_sum(m: &[i64]) -> Result<i64> {
    m.iter().try_fold(0i64, |acc, &v| {
        v.checked_mul(v).and_then(|q| acc.checked_add(q)).ok_or(Error::Overflow)
    })
}

/// Componentwise bounds `f ≤ x ≤ g`; `f` may be `-inf`, `g` may be `+inf`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct BoxBounds {
    pub lower: Vec<ExtInt>,
    pub upper: Vec<ExtInt>,
}

impl BoxBounds {
    pub fn new(lower: Vec<ExtInt>, upper: Vec<ExtInt>) -> Result<Self> {
        if lower.len() != upper.len() {
            return Err(Error::Invalid("bound vectors differ in length".into()));
        }
        for (i, (&f, &g)) in lower.iter().zip(&upper).enumerate() {
            if f == PosInf || g == NegInf || f > g {
                return Err(Error::Invalid(format!("bad bounds at {i}: [{f}, {g}]")));
            }
        }
        Ok(BoxBounds { lower, upper })
    }

    pub fn unbounded(n: usize) -> Self {
        BoxBounds { lower: vec![NegInf; n], upper: vec![PosInf; n] }
    }

    pub fn finite(lower: &[i64], upper: &[i64]) -> Result<Self> {
        Self::new(
            lower.iter().map(|&v| Finite(v)).collect(),
            upper.iter().map(|&v| Finite(v)).collect(),
        )
    }

    pub fn len(&self) -> usize {
        self.lower.len()
    }

    pub fn is_empty(&self) -> bool {
        self.lower.is_empty()
    }

    pub fn contains(&self, x: &[i64]) -> bool {
        x.len() == self.len()
            && x.iter().enumerate().all(|(i, &v)| self.lower[i] <= Finite(v) && Finite(v) <= self.upper[i])
    }

    pub fn at_lower(&self, i: usize, v: i64) -> bool {
        self.lower[i] == Finite(v)
    }

    pub fn at_upper(&self, i: usize, v: i64) -> bool {
        self.upper[i] == Finite(v)
    }
}

/// Canonical chain, partition, essential values and the small box.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(into = "CanonicalJson", try_from = "CanonicalJson")]
pub struct CanonicalDecomposition {
    pub chain: Vec<Subset>,
    pub partition: Vec<Subset>,
    pub values: Vec<i64>,
    pub f_star: Vec<i64>,
    pub g_star: Vec<i64>,
}

#[derive(Serialize, Deserialize)]
struct CanonicalJson {
    chain: Vec<Vec<usize>>,
    partition: Vec<Vec<usize>>,
    values: Vec<i64>,
    f_star: Vec<i64>,
    g_star: Vec<i64>,
}

impl From<CanonicalDecomposition> for CanonicalJson {
    fn from(c: CanonicalDecomposition) -> Self {
        CanonicalJson {
            chain: c.chain.iter().map(|s| s.to_vec()).collect(),
            partition: c.partition.iter().map(|s| s.to_vec()).collect(),
            values: c.values,
            f_star: c.f_star,
            g_star: c.g_star,
        }
    }
}

impl TryFrom<CanonicalJson> for CanonicalDecomposition {
    type Error = Error;
    fn try_from(j: CanonicalJson) -> Result<Self> {
        let to_set = |v: &Vec<usize>| -> Result<Subset> {
            if v.iter().any(|&i| i >= 64) {
                return Err(Error::Invalid("element index out of range".into()));
            }
            Ok(Subset::from_elems(v.iter().copied()))
        };
        let chain = j.chain.iter().map(to_set).collect::<Result<Vec<_>>>()?;
        let partition = j.partition.iter().map(to_set).collect::<Result<Vec<_>>>()?;
        let d = CanonicalDecomposition {
            chain,
            partition,
            values: j.values,
            f_star: j.f_star,
            g_star: j.g_star,
        };
        d.validate()?;
        Ok(d)
    }
}

impl CanonicalDecomposition {
    /// Builds the decomposition from a chain and its values.
    pub fn from_chain(n: usize, chain: Vec<Subset>, values: Vec<i64>) -> Result<Self> {
        let mut partition = Vec::with_capacity(chain.len());
        let mut f_star = vec![0; n];
        let mut g_star = vec![0; n];
        let mut prev = Subset::EMPTY;
        for (c, &b) in chain.iter().zip(&values) {
            let block = c.minus(prev);
            for v in block.iter() {
                f_star[v] = b - 1;
                g_star[v] = b;
            }
            partition.push(block);
            prev = *c;
        }
        let d = CanonicalDecomposition { chain, partition, values, f_star, g_star };
        d.validate()?;
        Ok(d)
    }

    pub fn n(&self) -> usize {
        self.f_star.len()
    }

    pub fn validate(&self) -> Result<()> {
        let n = self.f_star.len();
        let bad = |m: &str| Err(Error::Invalid(format!("malformed decomposition: {m}")));
        if self.chain.is_empty()
            || self.chain.len() != self.partition.len()
            || self.chain.len() != self.values.len()
            || self.g_star.len() != n
        {
            return bad("length mismatch");
        }
        if *self.chain.last().unwrap() != Subset::full(n) {
            return bad("chain does not end at the ground set");
        }
        let mut prev = Subset::EMPTY;
        for (i, (&c, &blk)) in self.chain.iter().zip(&self.partition).enumerate() {
            if !prev.is_subset_of(c) || c == prev || c.minus(prev) != blk {
                return bad("chain not strictly increasing or partition inconsistent");
            }
            if i > 0 && self.values[i] >= self.values[i - 1] {
                return bad("values not strictly decreasing");
            }
            for v in blk.iter() {
                if self.g_star[v] != self.values[i] || self.f_star[v] != self.values[i] - 1 {
                    return bad("small box inconsistent");
                }
            }
            prev = c;
        }
        Ok(())
    }

    /// Block index of every element.
    pub fn block_of(&self) -> Vec<usize> {
        let mut b = vec![0; self.n()];
        for (i, blk) in self.partition.iter().enumerate() {
            for v in blk.iter() {
                b[v] = i;
            }
        }
        b
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("decomposition serializes")
    }
}

/// An M-convex set accessed through membership and exchange subroutines.
pub trait MConvexSet: Send + Sync {
    fn n(&self) -> usize;

    /// Common component sum of all members.
    fn total(&self) -> i64;

    /// Some integral member.
    fn member(&self) -> Result<IntVector>;

    /// Whether `m + χ_s − χ_t` is a member, for a member `m`.
    fn exchange_feasible(&self, m: &[i64], s: usize, t: usize) -> Result<bool>;

    /// Membership test, when available.
    fn contains(&self, _x: &[i64]) -> Option<Result<bool>> {
        None
    }

    /// Lower-bounding supermodular function, when the handle has one.
    fn oracle(&self) -> Option<SharedFn> {
        None
    }

    /// `T_m(u)`: the smallest `m`-tight set containing `u`.
    fn smallest_tight_set(&self, m: &[i64], u: usize) -> Result<Subset> {
        let mut t = Subset::singleton(u);
        for s in 0..self.n() {
            if s != u && self.exchange_feasible(m, s, u)? {
                t = t.with(s);
            }
        }
        Ok(t)
    }
}

pub type SharedHandle = Arc<dyn MConvexSet>;

impl<T: MConvexSet + ?Sized> MConvexSet for Arc<T> {
    fn n(&self) -> usize {
        (**self).n()
    }
    fn total(&self) -> i64 {
        (**self).total()
    }
    fn member(&self) -> Result<IntVector> {
        (**self).member()
    }
    fn exchange_feasible(&self, m: &[i64], s: usize, t: usize) -> Result<bool> {
        (**self).exchange_feasible(m, s, t)
    }
    fn contains(&self, x: &[i64]) -> Option<Result<bool>> {
        (**self).contains(x)
    }
    fn oracle(&self) -> Option<SharedFn> {
        (**self).oracle()
    }
    fn smallest_tight_set(&self, m: &[i64], u: usize) -> Result<Subset> {
        (**self).smallest_tight_set(m, u)
    }
}

pub(crate) fn check_len(h: &dyn MConvexSet, m: &[i64]) -> Result<()> {
    if m.len() != h.n() {
        return Err(Error::Invalid(format!("vector has {} entries, ground set {}", m.len(), h.n())));
    }
    Ok(())
}
