//! Graph orientations with dec-min in-degree vectors.

mod basic;
mod capacitated;
mod cheapest;
mod connectivity;
mod graphfn;
mod io;
mod semimatch;

use std::collections::VecDeque;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::mconvex::{BoxBounds, IntVector};
use crate::subset::Subset;

pub use basic::{
    bounded_orientation, decmin_orientation, decmin_orientation_bounded, min_indegree_t_orientation,
    orient_with_indegree, orientation_canonical, MinIndegreeResult, OrientationHandle,
};
pub use capacitated::{capacitated_decmin_orientation, CapacitatedOrientation};
pub use cheapest::{cheapest_decmin_orientation, z_chain, CheapestResult};
pub use connectivity::{
    bridges, decmin_kec_orientation, decmin_strong_orientation, is_kl_connected,
    local_arc_connectivity, KecFunction, StrongFunction,
};
pub use graphfn::{ExcessEdges, InducedEdges};
pub use io::{parse_bounds, parse_graph, parse_mixed, GraphFile};
pub use semimatch::{semimatching_decmin, Bipartite, SemiMatching, SemiVariant};

/// Node bounds `f ≤ ϱ ≤ g`.
pub type NodeBounds = BoxBounds;

/// An undirected multigraph without loops. `mult` is read only by the capacitated solver.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct UndirGraph {
    pub n: usize,
    pub edges: Vec<(usize, usize)>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub mult: Option<Vec<i64>>,
}

impl UndirGraph {
    pub fn new(n: usize, edges: Vec<(usize, usize)>) -> Result<Self> {
        for &(u, v) in &edges {
            if u >= n || v >= n {
                return Err(Error::Invalid(format!("edge ({u},{v}) out of range")));
            }
            if u == v {
                return Err(Error::Invalid(format!("loop at node {u}")));
            }
        }
        Ok(UndirGraph { n, edges, mult: None })
    }

    pub fn with_mult(mut self, mult: Vec<i64>) -> Result<Self> {
        if mult.len() != self.edges.len() || mult.iter().any(|&l| l < 1) {
            return Err(Error::Invalid("multiplicities must be positive, one per edge".into()));
        }
        self.mult = Some(mult);
        Ok(self)
    }

    pub fn m(&self) -> usize {
        self.edges.len()
    }

    pub fn multiplicity(&self, e: usize) -> i64 {
        self.mult.as_ref().map_or(1, |l| l[e])
    }

    /// Each edge repeated according to its multiplicity.
    pub fn expanded(&self) -> UndirGraph {
        let mut edges = Vec::new();
        for (e, &uv) in self.edges.iter().enumerate() {
            for _ in 0..self.multiplicity(e) {
                edges.push(uv);
            }
        }
        UndirGraph { n: self.n, edges, mult: None }
    }

    pub fn degree(&self) -> Vec<i64> {
        let mut d = vec![0; self.n];
        for &(u, v) in &self.edges {
            d[u] += 1;
            d[v] += 1;
        }
        d
    }

    /// Number of edges with both ends in `x`.
    pub fn induced(&self, x: Subset) -> i64 {
        self.edges.iter().filter(|&&(u, v)| x.contains(u) && x.contains(v)).count() as i64
    }

    /// Number of edges with at least one end in `x`.
    pub fn touching(&self, x: Subset) -> i64 {
        self.edges.iter().filter(|&&(u, v)| x.contains(u) || x.contains(v)).count() as i64
    }

    pub fn complete(n: usize) -> UndirGraph {
        let mut edges = Vec::new();
        for u in 0..n {
            for v in u + 1..n {
                edges.push((u, v));
            }
        }
        UndirGraph { n, edges, mult: None }
    }
}

/// A graph with undirected edges and fixed arcs.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct MixedGraph {
    pub n: usize,
    pub edges: Vec<(usize, usize)>,
    pub arcs: Vec<(usize, usize)>,
}

impl MixedGraph {
    pub fn new(n: usize, edges: Vec<(usize, usize)>, arcs: Vec<(usize, usize)>) -> Result<Self> {
        UndirGraph::new(n, edges.clone())?;
        UndirGraph::new(n, arcs.clone())?;
        Ok(MixedGraph { n, edges, arcs })
    }
}

impl From<&UndirGraph> for MixedGraph {
    fn from(g: &UndirGraph) -> Self {
        MixedGraph { n: g.n, edges: g.edges.clone(), arcs: Vec::new() }
    }
}

/// Direction of every edge: `true` means the stored pair `(u, v)` is oriented `u → v`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Orientation {
    pub forward: Vec<bool>,
}

impl Orientation {
    /// Every edge from its lower-index end to its higher one.
    pub fn low_to_high(g: &UndirGraph) -> Self {
        Orientation { forward: g.edges.iter().map(|&(u, v)| u < v).collect() }
    }

    /// `(tail, head)` of edge `e`.
    pub fn arc(&self, g: &UndirGraph, e: usize) -> (usize, usize) {
        let (u, v) = g.edges[e];
        if self.forward[e] { (u, v) } else { (v, u) }
    }

    pub fn arcs(&self, g: &UndirGraph) -> Vec<(usize, usize)> {
        (0..g.m()).map(|e| self.arc(g, e)).collect()
    }

    pub fn indegree(&self, g: &UndirGraph) -> IntVector {
        let mut d = vec![0; g.n];
        for e in 0..g.m() {
            d[self.arc(g, e).1] += 1;
        }
        IntVector(d)
    }

    pub fn reverse(&mut self, e: usize) {
        self.forward[e] = !self.forward[e];
    }

    /// Total cost under per-edge costs `(cost of u→v, cost of v→u)`.
    pub fn cost(&self, cost: &[(i64, i64)]) -> i64 {
        self.forward.iter().zip(cost).map(|(&f, &(a, b))| if f { a } else { b }).sum()
    }
}

/// Directed adjacency of an orientation, rebuilt on demand.
pub(crate) struct DiView {
    pub out: Vec<Vec<(usize, usize)>>,
    pub inn: Vec<Vec<(usize, usize)>>,
}

impl DiView {
    pub fn new(n: usize, arcs: impl IntoIterator<Item = (usize, (usize, usize))>) -> Self {
        let mut out = vec![Vec::new(); n];
        let mut inn = vec![Vec::new(); n];
        for (e, (a, b)) in arcs {
            out[a].push((b, e));
            inn[b].push((a, e));
        }
        DiView { out, inn }
    }

    pub fn of(g: &UndirGraph, o: &Orientation) -> Self {
        Self::new(g.n, (0..g.m()).map(|e| (e, o.arc(g, e))))
    }

    /// BFS from `roots` along (`forward`) or against arcs; returns the arc used to reach
    /// each node (`usize::MAX` for roots) and `None` where unreached.
    pub fn bfs(&self, roots: &[usize], forward: bool) -> Vec<Option<usize>> {
        let n = self.out.len();
        let mut via = vec![None; n];
        let mut q = VecDeque::new();
        for &r in roots {
            if via[r].is_none() {
                via[r] = Some(usize::MAX);
                q.push_back(r);
            }
        }
        while let Some(u) = q.pop_front() {
            let adj = if forward { &self.out[u] } else { &self.inn[u] };
            for &(w, e) in adj {
                if via[w].is_none() {
                    via[w] = Some(e);
                    q.push_back(w);
                }
            }
        }
        via
    }
}

/// Nodes from which `t` is reachable.
pub(crate) fn reaching(g: &UndirGraph, o: &Orientation, t: usize) -> Vec<bool> {
    DiView::of(g, o).bfs(&[t], false).into_iter().map(|v| v.is_some()).collect()
}

/// Reverses the path found by a backward BFS from `t`, ending at `s`.
pub(crate) fn reverse_path_back(g: &UndirGraph, o: &mut Orientation, via: &[Option<usize>], s: usize) {
    let mut v = s;
    while let Some(e) = via[v] {
        if e == usize::MAX {
            break;
        }
        let (_, head) = o.arc(g, e);
        o.reverse(e);
        v = head;
    }
}

/// Reverses the path found by a forward BFS from some root, ending at `t`.
pub(crate) fn reverse_path_fwd(g: &UndirGraph, o: &mut Orientation, via: &[Option<usize>], t: usize) {
    let mut v = t;
    while let Some(e) = via[v] {
        if e == usize::MAX {
            break;
        }
        let (tail, _) = o.arc(g, e);
        o.reverse(e);
        v = tail;
    }
}

pub(crate) fn check_bounds(g: &UndirGraph, b: &NodeBounds) -> Result<()> {
    if b.len() != g.n {
        return Err(Error::Invalid("bounds do not match node count".into()));
    }
    BoxBounds::new(b.lower.clone(), b.upper.clone()).map(|_| ())
}

pub(crate) fn node_set(g_n: usize, mask: &[bool]) -> Result<Subset> {
    if g_n > crate::subset::MAX_GROUND {
        return Err(Error::Capacity { needed: g_n, cap: crate::subset::MAX_GROUND });
    }
    Ok(Subset::from_elems((0..g_n).filter(|&v| mask[v])))
}
