//! Brute-force ground truth for small instances.

use std::cmp::Ordering;
use std::collections::BTreeSet;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::ext::{div_ceil, ExtInt, Finite};
use crate::mconvex::{dec_compare, inc_compare, square_sum, BoxBounds, CanonicalDecomposition, IntVector};
use crate::netflow::{ArcBounds, Digraph, FlowVector};
use crate::orient::{is_kl_connected, MixedGraph, NodeBounds, Orientation, UndirGraph};
use crate::setfn::{Kind, SetFunction};
use crate::subset::Subset;

/// Most free edges an orientation scan accepts, unless `DECMIN_ENUM_CAP` says otherwise.
pub const MAX_SCAN_EDGES: usize = 22;
/// Largest ground set for base-element scans.
pub const MAX_SCAN_N: usize = 8;
/// Widest box coordinate for base-element scans.
pub const MAX_SCAN_WIDTH: i64 = 6;
/// Most flow vectors a flow scan may visit.
pub const MAX_SCAN_FLOWS: u64 = 1 << 22;

/// Which orientations count as feasible.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Predicate {
    None,
    Strong,
    Kec { k: i64, l: i64, root: usize },
}

/// Which in-degree vector an orientation contributes.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum VectorKind {
    /// In-degrees from fixed arcs and oriented edges.
    Total,
    /// In-degrees from the oriented edges only.
    FreePart,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct EnumerationReport {
    /// Feasible objects scanned (orientations or base elements).
    pub feasible_count: u64,
    /// Distinct feasible vectors in increasing lexicographic order.
    pub vectors: Vec<IntVector>,
    pub decmin_set: Vec<IntVector>,
    pub incmax_set: Vec<IntVector>,
    pub squaresum_min_set: Vec<IntVector>,
    /// `None` when the vectors admit no consistent chain, e.g. for non-M-convex families.
    pub canonical_from_enumeration: Option<CanonicalDecomposition>,
}

impl EnumerationReport {
    pub fn from_vectors(feasible_count: u64, vectors: BTreeSet<IntVector>) -> Result<Self> {
        let vectors: Vec<IntVector> = vectors.into_iter().collect();
        let decmin_set = best_by(&vectors, |a, b| dec_compare(a, b))?;
        let incmax_set = best_by(&vectors, |a, b| inc_compare(b, a))?;
        let squaresum_min_set = best_by(&vectors, |a, b| Ok(square_sum(a)?.cmp(&square_sum(b)?)))?;
        let canonical_from_enumeration = if vectors.is_empty() { None } else { canonical_from_vectors(&vectors).ok() };
        Ok(EnumerationReport { feasible_count, vectors, decmin_set, incmax_set, squaresum_min_set, canonical_from_enumeration })
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }
}

/// All minimal elements under `cmp`, in input order.
fn best_by(v: &[IntVector], cmp: impl Fn(&[i64], &[i64]) -> Result<Ordering>) -> Result<Vec<IntVector>> {
    let mut best: Vec<IntVector> = Vec::new();
    for x in v {
        match best.first().map(|b| cmp(x, b)).transpose()? {
            None | Some(Ordering::Less) => best = vec![x.clone()],
            Some(Ordering::Equal) => best.push(x.clone()),
            Some(Ordering::Greater) => {}
        }
    }
    Ok(best)
}

/// True iff the dec-min, inc-max and square-sum-minimal vector sets coincide.
pub fn check_equivalences(report: &EnumerationReport) -> bool {
    report.decmin_set == report.incmax_set && report.decmin_set == report.squaresum_min_set
}

/// Canonical data straight from the definition: with `p̂(X) = min x̃(X)` over the family,
/// `β_i` is the largest `⌈p̂_i(Y)/|Y|⌉` over the contraction by `C_{i−1}`, and the next
/// block is the smallest maximizer of `p̂_i(Y) − (β_i − 1)|Y|`.
pub fn canonical_from_vectors(vectors: &[IntVector]) -> Result<CanonicalDecomposition> {
    let n = vectors.first().ok_or_else(|| Error::Invalid("no vectors".into()))?.len();
    crate::setfn::check_cap(n)?;
    let full = Subset::full(n);
    let mut lower = vec![i64::MAX; 1usize << n];
    for x in vectors {
        for (mask, slot) in lower.iter_mut().enumerate() {
            *slot = (*slot).min(Subset(mask as u64).sum(x)?);
        }
    }
    let p = |x: Subset| lower[x.0 as usize];
    let mut c = Subset::EMPTY;
    let (mut chain, mut values) = (Vec::new(), Vec::new());
    while c != full {
        let rest = full.minus(c);
        let contracted = |y: Subset| p(y.union(c)) - p(c);
        let beta = rest
            .subsets()
            .filter(|y| !y.is_empty())
            .map(|y| div_ceil(contracted(y), y.len() as i64))
            .max()
            .expect("nonempty remainder");
        let mut best: Option<(i64, Subset)> = None;
        for y in rest.subsets().filter(|y| !y.is_empty()) {
            let val = contracted(y) - (beta - 1) * y.len() as i64;
            let better = match best {
                None => true,
                Some((v, b)) => val > v || (val == v && y.len() < b.len()),
            };
            if better {
                best = Some((val, y));
            }
        }
        let (_, block) = best.expect("nonempty remainder");
        c = c.union(block);
        chain.push(c);
        values.push(beta);
    }
    CanonicalDecomposition::from_chain(n, chain, values)
}

/// Strong connectivity by forward and backward search from node 0.
fn strongly_connected(n: usize, arcs: &[(usize, usize)]) -> bool {
    if n <= 1 {
        return true;
    }
    let mut out = vec![Vec::new(); n];
    let mut inn = vec![Vec::new(); n];
    for &(a, b) in arcs {
        out[a].push(b);
        inn[b].push(a);
    }
    [out, inn].iter().all(|adj| {
        let mut seen = vec![false; n];
        let mut stack = vec![0];
        seen[0] = true;
        while let Some(v) = stack.pop() {
            for &w in &adj[v] {
                if !seen[w] {
                    seen[w] = true;
                    stack.push(w);
                }
            }
        }
        seen.iter().all(|&s| s)
    })
}

/// Calls `visit` on every orientation of the free edges of `g` that satisfies `bounds`
/// (on total in-degrees) and `pred`.
pub fn for_each_orientation(
    g: &MixedGraph,
    bounds: Option<&NodeBounds>,
    pred: Predicate,
    mut visit: impl FnMut(&Orientation),
) -> Result<()> {
    let m = g.edges.len();
    let cap = crate::setfn::enum_cap_override().unwrap_or(MAX_SCAN_EDGES).min(40);
    if m > cap {
        return Err(Error::Capacity { needed: m, cap });
    }
    if let Some(b) = bounds {
        if b.len() != g.n {
            return Err(Error::Invalid("bounds do not match node count".into()));
        }
    }
    let combined = UndirGraph { n: g.n, edges: g.edges.iter().chain(&g.arcs).copied().collect(), mult: None };
    let mut fixed_in = vec![0i64; g.n];
    for &(_, h) in &g.arcs {
        fixed_in[h] += 1;
    }
    let mut arcs: Vec<(usize, usize)> = g.edges.iter().chain(&g.arcs).copied().collect();
    for mask in 0u64..(1u64 << m) {
        let o = Orientation { forward: (0..m).map(|e| mask >> e & 1 == 0).collect() };
        let mut deg = fixed_in.clone();
        for e in 0..m {
            let (u, v) = g.edges[e];
            arcs[e] = if o.forward[e] { (u, v) } else { (v, u) };
            deg[arcs[e].1] += 1;
        }
        if let Some(b) = bounds {
            if !b.contains(&deg) {
                continue;
            }
        }
        let ok = match pred {
            Predicate::None => true,
            Predicate::Strong => strongly_connected(g.n, &arcs),
            Predicate::Kec { k, l, root } => {
                let mut full = o.forward.clone();
                full.extend(std::iter::repeat_n(true, g.arcs.len()));
                root < g.n && is_kl_connected(&combined, &Orientation { forward: full }, k, l, root)
            }
        };
        if ok {
            visit(&o);
        }
    }
    Ok(())
}

/// Scans all orientations of the free edges and reports the optimal in-degree vectors.
pub fn enumerate_orientations(
    g: &MixedGraph,
    bounds: Option<&NodeBounds>,
    pred: Predicate,
    kind: VectorKind,
) -> Result<EnumerationReport> {
    let free = UndirGraph { n: g.n, edges: g.edges.clone(), mult: None };
    let mut fixed_in = vec![0i64; g.n];
    if kind == VectorKind::Total {
        for &(_, h) in &g.arcs {
            fixed_in[h] += 1;
        }
    }
    let mut count = 0u64;
    let mut seen = BTreeSet::new();
    for_each_orientation(g, bounds, pred, |o| {
        count += 1;
        let mut d = o.indegree(&free);
        for (x, f) in d.iter_mut().zip(&fixed_in) {
            *x += f;
        }
        seen.insert(d);
    })?;
    EnumerationReport::from_vectors(count, seen)
}

/// All feasible orientations, in scan order.
pub fn feasible_orientations(g: &MixedGraph, bounds: Option<&NodeBounds>, pred: Predicate) -> Result<Vec<Orientation>> {
    let mut out = Vec::new();
    for_each_orientation(g, bounds, pred, |o| out.push(o.clone()))?;
    Ok(out)
}

/// Integral members of the base-polyhedron of `p` inside a finite box.
pub fn enumerate_base_elements(p: &dyn SetFunction, bounds: &BoxBounds) -> Result<EnumerationReport> {
    let n = p.n();
    if n > MAX_SCAN_N {
        return Err(Error::Capacity { needed: n, cap: MAX_SCAN_N });
    }
    if bounds.len() != n {
        return Err(Error::Invalid("box does not match ground set".into()));
    }
    let mut lo = Vec::with_capacity(n);
    let mut hi = Vec::with_capacity(n);
    for i in 0..n {
        let (l, u) = (bounds.lower[i].expect_finite("box bound")?, bounds.upper[i].expect_finite("box bound")?);
        if u - l > MAX_SCAN_WIDTH {
            return Err(Error::Capacity { needed: (u - l) as usize, cap: MAX_SCAN_WIDTH as usize });
        }
        lo.push(l);
        hi.push(u);
    }
    let table: Vec<ExtInt> = Subset::full(n).subsets().map(|x| p.eval(x)).collect::<Result<_>>()?;
    let total = table[(1usize << n) - 1].expect_finite("p(S)")?;
    let supermodular = p.kind() == Kind::Supermodular;
    let mut seen = BTreeSet::new();
    let mut x = lo.clone();
    if lo.iter().zip(&hi).all(|(l, u)| l <= u) {
        loop {
            if x.iter().sum::<i64>() == total && admissible(&x, &table, supermodular)? {
                seen.insert(IntVector(x.clone()));
            }
            let Some(i) = (0..n).find(|&i| x[i] < hi[i]) else { break };
            x[i] += 1;
            x[..i].copy_from_slice(&lo[..i]);
        }
    }
    EnumerationReport::from_vectors(seen.len() as u64, seen)
}

fn admissible(x: &[i64], table: &[ExtInt], supermodular: bool) -> Result<bool> {
    for (mask, &v) in table.iter().enumerate() {
        let s = Finite(Subset(mask as u64).sum(x)?);
        if (supermodular && s < v) || (!supermodular && s > v) {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Every integral `z` within finite arc bounds, in lexicographic order of the arc values.
pub fn enumerate_flows(d: &Digraph, bounds: &ArcBounds) -> Result<Vec<FlowVector>> {
    let m = d.arcs.len();
    let mut lo = Vec::with_capacity(m);
    let mut hi = Vec::with_capacity(m);
    let mut count: u64 = 1;
    for a in 0..m {
        let (l, u) = (bounds.lower[a].expect_finite("arc bound")?, bounds.upper[a].expect_finite("arc bound")?);
        if l > u {
            return Ok(Vec::new());
        }
        count = count.saturating_mul((u - l + 1) as u64);
        lo.push(l);
        hi.push(u);
    }
    if count > MAX_SCAN_FLOWS {
        return Err(Error::Capacity { needed: count.min(usize::MAX as u64) as usize, cap: MAX_SCAN_FLOWS as usize });
    }
    let mut out = Vec::with_capacity(count as usize);
    let mut z = lo.clone();
    loop {
        out.push(FlowVector(z.clone()));
        let Some(i) = (0..m).rev().find(|&i| z[i] < hi[i]) else { break };
        z[i] += 1;
        z[i + 1..].copy_from_slice(&lo[i + 1..]);
    }
    Ok(out)
}
