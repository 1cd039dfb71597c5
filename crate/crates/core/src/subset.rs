use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Largest ground set a bitmask can address.
pub const MAX_GROUND: usize = 64;

/// A subset of `0..n` stored as a little-endian bitmask (bit `i` = element `i`).
///
/// Ordering is numeric on the mask, which is the tie-break used throughout.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Subset(pub u64);

impl Subset {
    pub const EMPTY: Subset = Subset(0);

    pub fn full(n: usize) -> Subset {
        if n >= 64 {
            Subset(u64::MAX)
        } else {
            Subset((1u64 << n) - 1)
        }
    }

    pub fn singleton(i: usize) -> Subset {
        Subset(1u64 << i)
    }

    pub fn from_elems(it: impl IntoIterator<Item = usize>) -> Subset {
        Subset(it.into_iter().fold(0, |m, i| m | (1u64 << i)))
    }

    pub fn contains(self, i: usize) -> bool {
        i < 64 && self.0 >> i & 1 == 1
    }

    pub fn with(self, i: usize) -> Subset {
        Subset(self.0 | 1u64 << i)
    }

    pub fn without(self, i: usize) -> Subset {
        Subset(self.0 & !(1u64 << i))
    }

    pub fn len(self) -> usize {
        self.0.count_ones() as usize
    }

    pub fn is_empty(self) -> bool {
        self.0 == 0
    }

    pub fn union(self, o: Subset) -> Subset {
        Subset(self.0 | o.0)
    }

    pub fn inter(self, o: Subset) -> Subset {
        Subset(self.0 & o.0)
    }

    pub fn minus(self, o: Subset) -> Subset {
        Subset(self.0 & !o.0)
    }

    pub fn is_subset_of(self, o: Subset) -> bool {
        self.0 & !o.0 == 0
    }

    /// Elements in increasing order.
    pub fn iter(self) -> impl Iterator<Item = usize> {
        let mut m = self.0;
        std::iter::from_fn(move || {
            if m == 0 {
                None
            } else {
                let i = m.trailing_zeros() as usize;
                m &= m - 1;
                Some(i)
            }
        })
    }

    pub fn to_vec(self) -> Vec<usize> {
        self.iter().collect()
    }

    /// Sum of `x` over the subset.
    pub fn sum(self, x: &[i64]) -> Result<i64> {
        self.iter()
            .try_fold(0i64, |a, i| a.checked_add(x[i]))
            .ok_or(Error::Overflow)
    }

    /// Spreads the low bits of `k` onto the set bits of `self` (pdep). Monotone in `k`.
    pub fn deposit(self, mut k: u64) -> Subset {
        let mut out = 0u64;
        let mut m = self.0;
        while m != 0 && k != 0 {
            let low = m & m.wrapping_neg();
            if k & 1 == 1 {
                out |= low;
            }
            k >>= 1;
            m &= m - 1;
        }
        Subset(out)
    }

    /// Inverse of `deposit`: packs the bits of `x` at the positions of `self`.
    pub fn extract(self, x: Subset) -> Subset {
        let mut out = 0u64;
        let mut bit = 0;
        for i in self.iter() {
            if x.contains(i) {
                out |= 1 << bit;
            }
            bit += 1;
        }
        Subset(out)
    }

    /// All subsets of `self` in increasing mask order.
    pub fn subsets(self) -> impl Iterator<Item = Subset> {
        let k = self.len();
        let count: u64 = if k >= 64 { u64::MAX } else { 1u64 << k };
        (0..count).map(move |i| self.deposit(i))
    }
}

impl fmt::Display for Subset {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("{")?;
        for (k, i) in self.iter().enumerate() {
            if k > 0 {
                f.write_str(",")?;
            }
            write!(f, "{i}")?;
        }
        f.write_str("}")
    }
}

/// The finite ground set `0..n` with optional display labels.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct GroundSet {
    pub n: usize,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub labels: Option<Vec<String>>,
}

impl GroundSet {
    pub fn new(n: usize) -> Result<Self> {
        if n == 0 || n > MAX_GROUND {
            return Err(Error::Invalid(format!(
                "ground set size must be in 1..={MAX_GROUND}, got {n}"
            )));
        }
        Ok(GroundSet { n, labels: None })
    }

    pub fn with_labels(labels: Vec<String>) -> Result<Self> {
        let mut g = GroundSet::new(labels.len())?;
        g.labels = Some(labels);
        Ok(g)
    }

    pub fn full(&self) -> Subset {
        Subset::full(self.n)
    }

    pub fn label(&self, i: usize) -> String {
        match &self.labels {
            Some(l) => l[i].clone(),
            None => i.to_string(),
        }
    }
}
