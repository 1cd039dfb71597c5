//! Flow primitives and flow-backed M-convex sets.

mod circulation;
mod face;
pub(crate) mod maxflow;
mod mincost;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::ext::{ExtInt, Finite, NegInf, PosInf};

pub use circulation::{feasible_m_flow, BoundedArc, FlowOutcome};
pub use face::{megiddo_discrete, netinflow_handle, netinflow_handle_translated, FaceFunction, FlowFace, MegiddoResult};
pub use maxflow::{max_flow_min_cut, MaxFlow};
pub use mincost::min_cost_circulation;
pub(crate) use mincost::min_cost_flow;

/// A directed multigraph without loops.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Digraph {
    pub n: usize,
    pub arcs: Vec<(usize, usize)>,
}

impl Digraph {
    pub fn new(n: usize, arcs: Vec<(usize, usize)>) -> Result<Self> {
        for &(u, v) in &arcs {
            if u >= n || v >= n {
                return Err(Error::Invalid(format!("arc ({u},{v}) out of range")));
            }
            if u == v {
                return Err(Error::Invalid(format!("loop at node {u}")));
            }
        }
        Ok(Digraph { n, arcs })
    }

    /// In-degree minus out-degree of `z` at every node.
    pub fn net_inflow(&self, z: &[i64]) -> Vec<i64> {
        let mut psi = vec![0; self.n];
        for (&(u, v), &f) in self.arcs.iter().zip(z) {
            psi[v] += f;
            psi[u] -= f;
        }
        psi
    }
}

/// Lower and upper arc bounds.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ArcBounds {
    pub lower: Vec<ExtInt>,
    pub upper: Vec<ExtInt>,
}

impl ArcBounds {
    pub fn new(lower: Vec<ExtInt>, upper: Vec<ExtInt>) -> Result<Self> {
        if lower.len() != upper.len() {
            return Err(Error::Invalid("bound vectors differ in length".into()));
        }
        for (i, (&f, &g)) in lower.iter().zip(&upper).enumerate() {
            if f == PosInf || g == NegInf || f > g {
                return Err(Error::Invalid(format!("bad bounds on arc {i}: [{f}, {g}]")));
            }
        }
        Ok(ArcBounds { lower, upper })
    }

    pub fn finite(lower: &[i64], upper: &[i64]) -> Result<Self> {
        Self::new(lower.iter().map(|&v| Finite(v)).collect(), upper.iter().map(|&v| Finite(v)).collect())
    }

    /// Whether `z` respects the bounds.
    pub fn admits(&self, z: &[i64]) -> bool {
        z.len() == self.lower.len()
            && z.iter().enumerate().all(|(i, &v)| self.lower[i] <= Finite(v) && Finite(v) <= self.upper[i])
    }
}

/// An integer value per arc.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(transparent)]
pub struct FlowVector(pub Vec<i64>);

/// Parsed digraph file: `n m`, then `tail head [lower upper [cost]]` per arc.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DigraphFile {
    pub digraph: Digraph,
    pub bounds: ArcBounds,
    pub cost: Vec<i64>,
}

fn content_lines(text: &str) -> impl Iterator<Item = (usize, Vec<&str>)> {
    text.lines().enumerate().filter_map(|(i, l)| {
        let l = l.split('#').next().unwrap_or("").trim();
        (!l.is_empty()).then(|| (i + 1, l.split_whitespace().collect()))
    })
}

pub(crate) fn parse_err(line: usize, msg: impl Into<String>) -> Error {
    Error::Parse { line, msg: msg.into() }
}

pub(crate) fn parse_header(lines: &mut dyn Iterator<Item = (usize, Vec<&str>)>) -> Result<(usize, usize)> {
    let (ln, h) = lines.next().ok_or_else(|| parse_err(1, "missing header"))?;
    if h.len() != 2 {
        return Err(parse_err(ln, "header must be `n m`"));
    }
    let n = h[0].parse().map_err(|_| parse_err(ln, "bad node count"))?;
    let m = h[1].parse().map_err(|_| parse_err(ln, "bad edge count"))?;
    Ok((n, m))
}

pub(crate) fn parse_field<T: std::str::FromStr>(ln: usize, s: &str, what: &str) -> Result<T> {
    s.parse().map_err(|_| parse_err(ln, format!("bad {what} '{s}'")))
}

pub(crate) fn lines_of(text: &str) -> Box<dyn Iterator<Item = (usize, Vec<&str>)> + '_> {
    Box::new(content_lines(text))
}

impl DigraphFile {
    pub fn parse(text: &str) -> Result<Self> {
        let mut lines = lines_of(text);
        let (n, m) = parse_header(&mut lines)?;
        let (mut arcs, mut lo, mut hi, mut cost) = (Vec::new(), Vec::new(), Vec::new(), Vec::new());
        for (ln, f) in lines.by_ref().take(m) {
            if !matches!(f.len(), 2 | 4 | 5) {
                return Err(parse_err(ln, "expected `tail head [lower upper [cost]]`"));
            }
            let (u, v): (usize, usize) = (parse_field(ln, f[0], "tail")?, parse_field(ln, f[1], "head")?);
            if u >= n || v >= n || u == v {
                return Err(parse_err(ln, "arc endpoints out of range or equal"));
            }
            arcs.push((u, v));
            lo.push(if f.len() > 2 { parse_field(ln, f[2], "lower bound")? } else { Finite(0) });
            hi.push(if f.len() > 2 { parse_field(ln, f[3], "upper bound")? } else { PosInf });
            cost.push(if f.len() > 4 { parse_field(ln, f[4], "cost")? } else { 0 });
        }
        if arcs.len() != m {
            return Err(parse_err(text.lines().count(), format!("expected {m} arcs, found {}", arcs.len())));
        }
        if let Some((ln, _)) = lines.next() {
            return Err(parse_err(ln, "trailing content after the arc list"));
        }
        let bounds = ArcBounds::new(lo, hi).map_err(|e| parse_err(0, e.to_string()))?;
        Ok(DigraphFile { digraph: Digraph::new(n, arcs)?, bounds, cost })
    }
}
