use std::sync::{Arc, Mutex};

use crate::error::{Error, Result};
use crate::ext::Finite;
use crate::mconvex::{canonical_from_tight_sets, CanonicalDecomposition, IntVector, MConvexSet};
use crate::netflow::maxflow::FlowNet;
use crate::setfn::{SetFunction, SharedFn};
use crate::subset::Subset;

use super::{
    check_bounds, node_set, reverse_path_back, reverse_path_fwd, DiView, InducedEdges, NodeBounds,
    Orientation, UndirGraph,
};

/// An orientation with in-degree vector `m`, via unit flow on the edge-node incidence network.
pub fn orient_with_indegree(g: &UndirGraph, m: &[i64]) -> Result<Orientation> {
    if m.len() != g.n {
        return Err(Error::Invalid("in-degree vector does not match node count".into()));
    }
    if let Some(v) = (0..g.n).find(|&v| m[v] < 0) {
        return Err(Error::infeasible_nodes("negative in-degree", vec![v]));
    }
    let total = crate::ext::checked_sum(m)?;
    if total != g.m() as i64 {
        return Err(Error::Precondition(format!("in-degrees sum to {total}, graph has {} edges", g.m())));
    }
    let (n, em) = (g.n, g.m());
    let (src, snk) = (n + em, n + em + 1);
    let mut net = FlowNet::new(n + em + 2);
    let mut toward = Vec::with_capacity(em);
    for (e, &(_, v)) in g.edges.iter().enumerate() {
        net.add_edge(src, n + e, 1);
        net.add_edge(n + e, g.edges[e].0, 1);
        toward.push(net.add_edge(n + e, v, 1));
    }
    for (v, &d) in m.iter().enumerate() {
        net.add_edge(v, snk, d);
    }
    if net.max_flow(src, snk) < em as i64 {
        let f = InducedEdges::new(g.clone());
        let (x, _) = f.maximize_minus_modular(m, Subset::EMPTY, Subset::full(n))?;
        return Err(Error::infeasible_nodes("a node set has fewer in-degrees than induced edges", x.to_vec()));
    }
    Ok(Orientation { forward: toward.iter().map(|&id| net.flow(id) == 1).collect() })
}

fn below_upper(b: &NodeBounds, v: usize, d: i64) -> bool {
    Finite(d) < b.upper[v]
}

fn above_lower(b: &NodeBounds, v: usize, d: i64) -> bool {
    Finite(d) > b.lower[v]
}

/// Some `(f,g)`-bounded orientation, or a violated inequality `i_G(X) ≤ g̃(X)` / `f̃(X) ≤ e_G(X)`.
pub fn bounded_orientation(g: &UndirGraph, b: &NodeBounds) -> Result<Orientation> {
    check_bounds(g, b)?;
    let mut o = Orientation::low_to_high(g);
    let mut deg = o.indegree(g).0;
    // too many in-degrees: push one back along a dipath from a node with room
    while let Some(v) = (0..g.n).find(|&v| Finite(deg[v]) > b.upper[v]) {
        let via = DiView::of(g, &o).bfs(&[v], false);
        match (0..g.n).find(|&s| via[s].is_some() && below_upper(b, s, deg[s])) {
            Some(s) => {
                reverse_path_back(g, &mut o, &via, s);
                deg[s] += 1;
                deg[v] -= 1;
            }
            None => {
                let x: Vec<usize> = (0..g.n).filter(|&s| via[s].is_some()).collect();
                return Err(Error::infeasible_nodes("induced edges exceed the upper bounds", x));
            }
        }
    }
    while let Some(v) = (0..g.n).find(|&v| Finite(deg[v]) < b.lower[v]) {
        let via = DiView::of(g, &o).bfs(&[v], true);
        match (0..g.n).find(|&t| via[t].is_some() && above_lower(b, t, deg[t])) {
            Some(t) => {
                reverse_path_fwd(g, &mut o, &via, t);
                deg[v] += 1;
                deg[t] -= 1;
            }
            None => {
                let x: Vec<usize> = (0..g.n).filter(|&t| via[t].is_some()).collect();
                return Err(Error::infeasible_nodes("lower bounds exceed the touching edges", x));
            }
        }
    }
    Ok(o)
}

/// Reverses one improving dipath if any; `t` is tried in decreasing in-degree order.
fn improve_once(g: &UndirGraph, o: &mut Orientation, deg: &mut [i64], b: Option<&NodeBounds>) -> bool {
    let mut order: Vec<usize> = (0..g.n).collect();
    order.sort_by_key(|&v| (-deg[v], v));
    let view = DiView::of(g, o);
    for &t in &order {
        if b.is_some_and(|b| !above_lower(b, t, deg[t])) {
            continue;
        }
        let via = view.bfs(&[t], false);
        // first hit in BFS order gives a shortest dipath
        let mut best: Option<(usize, usize)> = None;
        for s in 0..g.n {
            if via[s].is_none() || deg[s] > deg[t] - 2 || b.is_some_and(|b| !below_upper(b, s, deg[s])) {
                continue;
            }
            let len = path_len(g, o, &via, s);
            if best.is_none_or(|(l, _)| len < l) {
                best = Some((len, s));
            }
        }
        if let Some((_, s)) = best {
            reverse_path_back(g, o, &via, s);
            deg[s] += 1;
            deg[t] -= 1;
            return true;
        }
    }
    false
}

fn path_len(g: &UndirGraph, o: &Orientation, via: &[Option<usize>], s: usize) -> usize {
    let mut v = s;
    let mut len = 0;
    while let Some(e) = via[v] {
        if e == usize::MAX {
            break;
        }
        v = o.arc(g, e).1;
        len += 1;
    }
    len
}

/// Dec-min orientation by repeated reversal of dipaths `s → t` with `ϱ(t) ≥ ϱ(s) + 2`.
pub fn decmin_orientation(g: &UndirGraph) -> Result<Orientation> {
    let mut o = Orientation::low_to_high(g);
    let mut deg = o.indegree(g).0;
    while improve_once(g, &mut o, &mut deg, None) {}
    Ok(o)
}

/// Dec-min among `(f,g)`-bounded orientations.
pub fn decmin_orientation_bounded(g: &UndirGraph, b: &NodeBounds) -> Result<Orientation> {
    let mut o = bounded_orientation(g, b)?;
    let mut deg = o.indegree(g).0;
    while improve_once(g, &mut o, &mut deg, Some(b)) {}
    Ok(o)
}

/// `T□_D(u)`: `u` with every node that can pass it one unit of in-degree.
pub(crate) fn tight_set_of(g: &UndirGraph, o: &Orientation, deg: &[i64], b: Option<&NodeBounds>, u: usize) -> Vec<bool> {
    let mut t = vec![false; g.n];
    t[u] = true;
    if b.is_some_and(|b| !above_lower(b, u, deg[u])) {
        return t;
    }
    let reach = super::reaching(g, o, u);
    for s in 0..g.n {
        if reach[s] && b.is_none_or(|b| below_upper(b, s, deg[s])) {
            t[s] = true;
        }
    }
    t
}

/// Canonical chain of the (bounded) orientation polytope, from reachability in a dec-min orientation.
pub fn orientation_canonical(g: &UndirGraph, b: Option<&NodeBounds>) -> Result<(Orientation, CanonicalDecomposition)> {
    let o = match b {
        Some(b) => decmin_orientation_bounded(g, b)?,
        None => decmin_orientation(g)?,
    };
    let deg = o.indegree(g).0;
    let decomp = canonical_from_tight_sets(&deg, |u| node_set(g.n, &tight_set_of(g, &o, &deg, b, u)))?;
    Ok((o, decomp))
}

/// Output of [`min_indegree_t_orientation`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MinIndegreeResult {
    pub orientation: Orientation,
    /// Nodes from which some `t ∈ T` with `ϱ(t) > f(t)` is reachable.
    pub x_t: Vec<bool>,
    pub derived: NodeBounds,
}

/// An `(f,g)`-bounded orientation minimizing `ϱ(T)`, with the witness `X_T` and the box `(f', g')`.
pub fn min_indegree_t_orientation(g: &UndirGraph, b: &NodeBounds, t_set: &[bool]) -> Result<MinIndegreeResult> {
    if t_set.len() != g.n {
        return Err(Error::Invalid("T does not match node count".into()));
    }
    let mut o = bounded_orientation(g, b)?;
    let mut deg = o.indegree(g).0;
    loop {
        let roots: Vec<usize> = (0..g.n).filter(|&s| !t_set[s] && below_upper(b, s, deg[s])).collect();
        let via = DiView::of(g, &o).bfs(&roots, true);
        let Some(t) = (0..g.n).find(|&t| t_set[t] && via[t].is_some() && above_lower(b, t, deg[t])) else {
            break;
        };
        let mut s = t;
        while let Some(e) = via[s].filter(|&e| e != usize::MAX) {
            s = o.arc(g, e).0;
        }
        reverse_path_fwd(g, &mut o, &via, t);
        deg[s] += 1;
        deg[t] -= 1;
    }
    let sinks: Vec<usize> = (0..g.n).filter(|&t| t_set[t] && above_lower(b, t, deg[t])).collect();
    let via = DiView::of(g, &o).bfs(&sinks, false);
    let x_t: Vec<bool> = via.iter().map(|v| v.is_some()).collect();
    let mut derived = b.clone();
    for v in 0..g.n {
        if x_t[v] && !t_set[v] {
            derived.lower[v] = b.upper[v];
        }
        if t_set[v] && !x_t[v] {
            derived.upper[v] = b.lower[v];
        }
    }
    Ok(MinIndegreeResult { orientation: o, x_t, derived })
}

/// The M-convex set of in-degree vectors of orientations of `G`.
///
/// Exchange tests realize the member as an orientation (cached) and look for a dipath.
pub struct OrientationHandle {
    g: UndirGraph,
    cache: Mutex<Option<(Vec<i64>, Orientation)>>,
}

impl OrientationHandle {
    pub fn new(g: UndirGraph) -> Result<Self> {
        if g.n == 0 {
            return Err(Error::Invalid("empty graph".into()));
        }
        Ok(OrientationHandle { g, cache: Mutex::new(None) })
    }

    pub fn graph(&self) -> &UndirGraph {
        &self.g
    }

    fn realized(&self, m: &[i64]) -> Result<Orientation> {
        let mut c = self.cache.lock().expect("orientation cache poisoned");
        if let Some((k, o)) = c.as_ref() {
            if k == m {
                return Ok(o.clone());
            }
        }
        let o = orient_with_indegree(&self.g, m)?;
        *c = Some((m.to_vec(), o.clone()));
        Ok(o)
    }
}

impl MConvexSet for OrientationHandle {
    fn n(&self) -> usize {
        self.g.n
    }
    fn total(&self) -> i64 {
        self.g.m() as i64
    }
    fn member(&self) -> Result<IntVector> {
        Ok(Orientation::low_to_high(&self.g).indegree(&self.g))
    }
    fn exchange_feasible(&self, m: &[i64], s: usize, t: usize) -> Result<bool> {
        if s == t {
            return Ok(true);
        }
        let o = self.realized(m)?;
        Ok(super::reaching(&self.g, &o, t)[s])
    }
    fn contains(&self, x: &[i64]) -> Option<Result<bool>> {
        Some(match orient_with_indegree(&self.g, x) {
            Ok(_) => Ok(true),
            Err(Error::Infeasible { .. }) | Err(Error::Precondition(_)) => Ok(false),
            Err(e) => Err(e),
        })
    }
    fn oracle(&self) -> Option<SharedFn> {
        if self.g.n > crate::subset::MAX_GROUND {
            return None;
        }
        Some(Arc::new(InducedEdges::new(self.g.clone())))
    }
    fn smallest_tight_set(&self, m: &[i64], u: usize) -> Result<Subset> {
        let o = self.realized(m)?;
        node_set(self.g.n, &super::reaching(&self.g, &o, u))
    }
}
