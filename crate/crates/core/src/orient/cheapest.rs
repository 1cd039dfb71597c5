use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::ext::Finite;
use crate::mconvex::CanonicalDecomposition;
use crate::netflow::{min_cost_flow, BoundedArc};
use crate::subset::Subset;

use super::{orientation_canonical, DiView, NodeBounds, Orientation, UndirGraph};

/// Output of [`cheapest_decmin_orientation`].
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CheapestResult {
    pub orientation: Orientation,
    pub cost: i64,
    pub decomposition: CanonicalDecomposition,
    /// `Z_1 ⊇ Z_2 ⊇ …`, one per canonical block.
    pub z_chain: Vec<Subset>,
    /// Edges crossing some `Z_i`, each forced to point into it: `(edge, head)`.
    pub forced: Vec<(usize, usize)>,
}

/// `Z_i`: nodes reachable in `o` from some `s ∉ C_i` with `ϱ(s) < g(s)`.
pub fn z_chain(g: &UndirGraph, o: &Orientation, b: &NodeBounds, decomp: &CanonicalDecomposition) -> Vec<Subset> {
    let deg = o.indegree(g);
    let view = DiView::of(g, o);
    decomp
        .chain
        .iter()
        .map(|c| {
            let roots: Vec<usize> = (0..g.n).filter(|&s| !c.contains(s) && Finite(deg[s]) < b.upper[s]).collect();
            let via = view.bfs(&roots, true);
            Subset::from_elems((0..g.n).filter(|&v| via[v].is_some()))
        })
        .collect()
}

/// Edges leaving or entering some `Z_i`, oriented into it.
pub(crate) fn forced_arcs(g: &UndirGraph, zs: &[Subset]) -> Result<Vec<(usize, usize)>> {
    let mut forced = Vec::new();
    for (e, &(u, v)) in g.edges.iter().enumerate() {
        let mut head = None;
        for z in zs {
            let h = match (z.contains(u), z.contains(v)) {
                (true, false) => u,
                (false, true) => v,
                _ => continue,
            };
            if head.is_some_and(|x| x != h) {
                return Err(Error::Invalid("chain forces an edge both ways".into()));
            }
            head = Some(h);
        }
        if let Some(h) = head {
            forced.push((e, h));
        }
    }
    Ok(forced)
}

/// A minimum-cost dec-min `(f,g)`-bounded orientation. `cost[e] = (c(u→v), c(v→u))` for `e = (u,v)`.
pub fn cheapest_decmin_orientation(g: &UndirGraph, b: &NodeBounds, cost: &[(i64, i64)]) -> Result<CheapestResult> {
    if cost.len() != g.m() {
        return Err(Error::Invalid("one cost pair per edge expected".into()));
    }
    let (o, decomp) = orientation_canonical(g, Some(b))?;
    let zs = z_chain(g, &o, b, &decomp);
    let forced = forced_arcs(g, &zs)?;
    let mut fixed = vec![None; g.m()];
    let mut fixed_in = vec![0i64; g.n];
    for &(e, h) in &forced {
        fixed[e] = Some(h);
        fixed_in[h] += 1;
    }
    // hub → edge node → chosen head → block hub → hub
    let hub = g.n;
    let free: Vec<usize> = (0..g.m()).filter(|&e| fixed[e].is_none()).collect();
    let blocks = g.n + 1 + free.len();
    let nodes = blocks + decomp.partition.len();
    let mut arcs = Vec::new();
    let mut costs = Vec::new();
    let mut into_v = Vec::with_capacity(free.len());
    for (i, &e) in free.iter().enumerate() {
        let x = g.n + 1 + i;
        let (u, v) = g.edges[e];
        arcs.push(BoundedArc { tail: hub, head: x, lower: Finite(1), upper: Finite(1) });
        costs.push(0);
        arcs.push(BoundedArc { tail: x, head: u, lower: Finite(0), upper: Finite(1) });
        costs.push(cost[e].1);
        into_v.push(arcs.len());
        arcs.push(BoundedArc { tail: x, head: v, lower: Finite(0), upper: Finite(1) });
        costs.push(cost[e].0);
    }
    let deg = o.indegree(g);
    for (i, part) in decomp.partition.iter().enumerate() {
        let sum = Finite(part.sum(&deg)? - part.sum(&fixed_in)?);
        arcs.push(BoundedArc { tail: blocks + i, head: hub, lower: sum, upper: sum });
        costs.push(0);
    }
    for v in 0..g.n {
        let block = decomp.partition.iter().position(|p| p.contains(v)).ok_or_else(|| Error::Invalid("partition misses a node".into()))?;
        let lo = Finite(decomp.f_star[v]).max(b.lower[v]).expect_finite("lower bound")?;
        let hi = Finite(decomp.g_star[v]).min(b.upper[v]).expect_finite("upper bound")?;
        arcs.push(BoundedArc { tail: v, head: blocks + block, lower: Finite(lo - fixed_in[v]), upper: Finite(hi - fixed_in[v]) });
        costs.push(0);
    }
    let z = min_cost_flow(nodes, &arcs, &vec![0; nodes], &costs)?;
    let mut forward = vec![false; g.m()];
    for (e, f) in forward.iter_mut().enumerate() {
        if let Some(h) = fixed[e] {
            *f = h == g.edges[e].1;
        }
    }
    for (i, &e) in free.iter().enumerate() {
        forward[e] = z.0[into_v[i]] == 1;
    }
    let orientation = Orientation { forward };
    let total = orientation.cost(cost);
    Ok(CheapestResult { orientation, cost: total, decomposition: decomp, z_chain: zs, forced })
}
