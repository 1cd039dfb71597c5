use serde::Serialize;

use crate::error::{Error, Result};
use crate::ext::{div_ceil, ExtInt, Finite};
use crate::setfn::{maximize_shifted_supermodular, Kind, SetFunction};
use crate::subset::Subset;

/// One iteration: the tried `mu`, the maximizer of `p(X) − mu|X|` and the maximum.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct NdStep {
    pub mu: i64,
    pub set: Subset,
    pub value: ExtInt,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct NdResult {
    /// Smallest good value, `max ⌈p(X)/|X|⌉` over nonempty `X`.
    pub beta1: i64,
    /// The last bad maximizer, attaining `beta1`.
    pub certificate: Subset,
    /// All steps; every step but the last is bad.
    pub trace: Vec<NdStep>,
}

impl NdResult {
    /// Number of improving iterations `h`.
    pub fn iterations(&self) -> usize {
        self.trace.len() - 1
    }
}

/// Newton–Dinkelbach search for the smallest `mu` with `mu|X| ≥ p(X)` for all `X`.
pub fn newton_dinkelbach_beta1(p: &dyn SetFunction) -> Result<NdResult> {
    if p.kind() != Kind::Supermodular {
        return Err(Error::Precondition("needs a supermodular function".into()));
    }
    let n = p.n();
    let ps = p.eval(Subset::full(n))?.expect_finite("value on the full set")?;
    let mut mu = div_ceil(ps, n as i64) - 1;
    let mut trace = Vec::new();
    loop {
        let (x, v) = maximize_shifted_supermodular(p, mu)?;
        trace.push(NdStep { mu, set: x, value: v });
        if v <= Finite(0) {
            let certificate = trace[trace.len() - 2].set;
            return Ok(NdResult { beta1: mu, certificate, trace });
        }
        if trace.len() > n + 1 {
            return Err(Error::Precondition("iteration bound exceeded; oracle inconsistent".into()));
        }
        let px = p.eval(x)?.expect_finite("value on a bad maximizer")?;
        mu = div_ceil(px, x.len() as i64);
    }
}
