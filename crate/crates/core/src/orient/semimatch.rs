use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::ext::{ExtInt, Finite, NegInf, PosInf};
use crate::mconvex::{decmin_strong, square_sum, CanonicalDecomposition, IntVector};
use crate::netflow::{min_cost_flow, BoundedArc, FlowFace};

use super::{NodeBounds, UndirGraph};

/// A bipartite graph; `s_side[v]` marks the side whose degrees are balanced.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Bipartite {
    pub graph: UndirGraph,
    pub s_side: Vec<bool>,
}

impl Bipartite {
    pub fn new(graph: UndirGraph, s_side: Vec<bool>) -> Result<Self> {
        if s_side.len() != graph.n {
            return Err(Error::Invalid("side marks do not match node count".into()));
        }
        if let Some(e) = graph.edges.iter().position(|&(u, v)| s_side[u] == s_side[v]) {
            return Err(Error::Invalid(format!("edge {e} does not join S and T")));
        }
        if !s_side.iter().any(|&s| s) {
            return Err(Error::Invalid("S is empty".into()));
        }
        Ok(Bipartite { graph, s_side })
    }

    pub fn s_nodes(&self) -> Vec<usize> {
        (0..self.graph.n).filter(|&v| self.s_side[v]).collect()
    }

    pub fn t_nodes(&self) -> Vec<usize> {
        (0..self.graph.n).filter(|&v| !self.s_side[v]).collect()
    }

    /// `(s, t)` ends of edge `e`.
    pub fn ends(&self, e: usize) -> (usize, usize) {
        let (u, v) = self.graph.edges[e];
        if self.s_side[u] { (u, v) } else { (v, u) }
    }
}

/// Which edge sets are feasible. Node bounds are indexed over all nodes of the graph.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case", tag = "variant")]
pub enum SemiVariant {
    /// Every `t ∈ T` covered exactly once.
    Unit,
    /// `d_F(t) = m_T(t)`; entries on `S` are ignored.
    Spec { m_t: Vec<i64> },
    /// Maximum `|F|` subject to `f ≤ d_F ≤ g`.
    Bounded { bounds: NodeBounds },
    /// `|F| = γ` subject to `f ≤ d_F ≤ g`.
    FixedSize { gamma: i64, bounds: NodeBounds },
    /// Edge multiplicities `0 ≤ z ≤ cap`, `z̃(E) = γ`, `f ≤ d_z ≤ g`.
    Capacitated { gamma: i64, cap: Vec<i64>, bounds: NodeBounds },
    /// Cheapest among the dec-min solutions of `base`.
    MinCost { cost: Vec<i64>, base: Box<SemiVariant> },
}

/// Output of [`semimatching_decmin`].
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SemiMatching {
    /// Multiplicity of every edge in `F`.
    pub z: Vec<i64>,
    /// `S` in increasing node order.
    pub s_nodes: Vec<usize>,
    /// `d_F(s)` for `s` in `s_nodes` order.
    pub degrees: IntVector,
    pub square_sum: i64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub cost: Option<i64>,
    /// Over positions in `s_nodes`.
    pub decomposition: CanonicalDecomposition,
}

impl SemiMatching {
    /// Edge indices in `F`, repeated by multiplicity.
    pub fn edges(&self) -> Vec<usize> {
        let mut out = Vec::new();
        for (e, &k) in self.z.iter().enumerate() {
            out.extend(std::iter::repeat_n(e, k.max(0) as usize));
        }
        out
    }
}

/// `src → t → s → hub → src`, with the `S`-degrees on the arcs into the hub.
struct Network {
    nodes: usize,
    arcs: Vec<BoundedArc>,
    ground: Vec<usize>,
    edge_arc: Vec<usize>,
    hub: usize,
    gamma_arc: usize,
}

fn network(b: &Bipartite, cap: &[i64], lo: &[ExtInt], hi: &[ExtInt], gamma: (ExtInt, ExtInt)) -> Network {
    let g = &b.graph;
    let (src, hub) = (g.n, g.n + 1);
    let mut arcs = Vec::new();
    for t in b.t_nodes() {
        arcs.push(BoundedArc { tail: src, head: t, lower: lo[t], upper: hi[t] });
    }
    let mut edge_arc = Vec::with_capacity(g.m());
    for e in 0..g.m() {
        let (s, t) = b.ends(e);
        edge_arc.push(arcs.len());
        arcs.push(BoundedArc { tail: t, head: s, lower: Finite(0), upper: Finite(cap[e]) });
    }
    let mut ground = Vec::new();
    for s in b.s_nodes() {
        ground.push(arcs.len());
        arcs.push(BoundedArc { tail: s, head: hub, lower: lo[s], upper: hi[s] });
    }
    let gamma_arc = arcs.len();
    arcs.push(BoundedArc { tail: hub, head: src, lower: gamma.0, upper: gamma.1 });
    Network { nodes: g.n + 2, arcs, ground, edge_arc, hub, gamma_arc }
}

/// Bounds clipped to `[0, Σ cap]`, where every flow value lives anyway.
fn clipped(arcs: &mut [BoundedArc], big: i64) -> Result<()> {
    for a in arcs {
        a.lower = a.lower.max(Finite(0));
        a.upper = a.upper.min(Finite(big));
        if a.lower > a.upper {
            return Err(Error::infeasible_nodes("degree bounds out of reach", vec![a.tail, a.head]));
        }
    }
    Ok(())
}

struct Instance {
    cap: Vec<i64>,
    lower: Vec<ExtInt>,
    upper: Vec<ExtInt>,
    gamma: Option<i64>,
}

fn instance(b: &Bipartite, v: &SemiVariant) -> Result<Instance> {
    let g = &b.graph;
    let node_bounds = |nb: &NodeBounds| -> Result<(Vec<ExtInt>, Vec<ExtInt>)> {
        super::check_bounds(g, nb)?;
        Ok((nb.lower.clone(), nb.upper.clone()))
    };
    let ones = vec![1; g.m()];
    Ok(match v {
        SemiVariant::Unit => {
            let m_t = vec![1; g.n];
            return instance(b, &SemiVariant::Spec { m_t });
        }
        SemiVariant::Spec { m_t } => {
            if m_t.len() != g.n || m_t.iter().any(|&x| x < 0) {
                return Err(Error::Invalid("m_T must be nonnegative, one entry per node".into()));
            }
            let mut lower = vec![NegInf; g.n];
            let mut upper = vec![PosInf; g.n];
            let mut gamma = 0i64;
            for t in b.t_nodes() {
                lower[t] = Finite(m_t[t]);
                upper[t] = Finite(m_t[t]);
                gamma = gamma.checked_add(m_t[t]).ok_or(Error::Overflow)?;
            }
            Instance { cap: ones, lower, upper, gamma: Some(gamma) }
        }
        SemiVariant::Bounded { bounds } => {
            let (lower, upper) = node_bounds(bounds)?;
            Instance { cap: ones, lower, upper, gamma: None }
        }
        SemiVariant::FixedSize { gamma, bounds } => {
            let (lower, upper) = node_bounds(bounds)?;
            Instance { cap: ones, lower, upper, gamma: Some(*gamma) }
        }
        SemiVariant::Capacitated { gamma, cap, bounds } => {
            if cap.len() != g.m() || cap.iter().any(|&c| c < 0) {
                return Err(Error::Invalid("edge capacities must be nonnegative, one per edge".into()));
            }
            let (lower, upper) = node_bounds(bounds)?;
            Instance { cap: cap.clone(), lower, upper, gamma: Some(*gamma) }
        }
        SemiVariant::MinCost { base, .. } => instance(b, base)?,
    })
}

/// Largest `|F|` meeting the degree bounds.
fn max_size(b: &Bipartite, inst: &Instance, big: i64) -> Result<i64> {
    let mut net = network(b, &inst.cap, &inst.lower, &inst.upper, (Finite(0), Finite(big)));
    clipped(&mut net.arcs, big)?;
    let mut cost = vec![0; net.arcs.len()];
    cost[net.gamma_arc] = -1;
    let z = min_cost_flow(net.nodes, &net.arcs, &vec![0; net.nodes], &cost)?;
    Ok(z.0[net.gamma_arc])
}

/// An edge multiset whose `S`-degree vector is dec-min among the feasible ones.
pub fn semimatching_decmin(b: &Bipartite, variant: &SemiVariant) -> Result<SemiMatching> {
    let inst = instance(b, variant)?;
    let big = inst.cap.iter().try_fold(0i64, |a, &c| a.checked_add(c)).ok_or(Error::Overflow)?;
    let gamma = match inst.gamma {
        Some(k) => k,
        None => max_size(b, &inst, big)?,
    };
    let net = network(b, &inst.cap, &inst.lower, &inst.upper, (Finite(gamma), Finite(gamma)));
    let face = FlowFace::new(net.nodes, net.arcs.clone(), net.ground.clone(), net.hub, 1, vec![0; net.ground.len()])?;
    let (x, decomposition) = decmin_strong(&face)?;
    let s_nodes = b.s_nodes();
    let (z, cost) = match variant {
        SemiVariant::MinCost { cost, .. } => {
            if cost.len() != b.graph.m() {
                return Err(Error::Invalid("one cost per edge expected".into()));
            }
            let z = cheapest_on_face(&net, &decomposition, &x, cost, big)?;
            let c = z.iter().zip(cost).map(|(&k, &c)| k * c).sum();
            (z, Some(c))
        }
        _ => {
            let flow = face
                .realize(&x)?
                .ok_or_else(|| Error::infeasible_note("dec-min degree vector could not be realized"))?;
            (net.edge_arc.iter().map(|&a| flow[a]).collect(), None)
        }
    };
    let mut deg = vec![0i64; b.graph.n];
    for (e, &k) in z.iter().enumerate() {
        deg[b.ends(e).0] += k;
    }
    let degrees = IntVector(s_nodes.iter().map(|&s| deg[s]).collect());
    let square_sum = square_sum(&degrees)?;
    Ok(SemiMatching { z, s_nodes, degrees, square_sum, cost, decomposition })
}

/// Min-cost flow over the dec-min face: block sums pinned through one hub per block,
/// `S`-degrees confined to the small box.
fn cheapest_on_face(
    net: &Network,
    d: &CanonicalDecomposition,
    x: &[i64],
    cost: &[i64],
    big: i64,
) -> Result<Vec<i64>> {
    let q = d.partition.len();
    let first_block = net.nodes;
    let nodes = net.nodes + q;
    let mut arcs = net.arcs.clone();
    let block = d.block_of();
    let mut sums = vec![0i64; q];
    for (i, &a) in net.ground.iter().enumerate() {
        arcs[a].head = first_block + block[i];
        arcs[a].lower = arcs[a].lower.max(Finite(d.f_star[i]));
        arcs[a].upper = arcs[a].upper.min(Finite(d.g_star[i]));
        sums[block[i]] += x[i];
    }
    for (i, &s) in sums.iter().enumerate() {
        arcs.push(BoundedArc { tail: first_block + i, head: net.hub, lower: Finite(s), upper: Finite(s) });
    }
    clipped(&mut arcs, big)?;
    let mut c = vec![0; arcs.len()];
    for (e, &a) in net.edge_arc.iter().enumerate() {
        c[a] = cost[e];
    }
    let z = min_cost_flow(nodes, &arcs, &vec![0; nodes], &c)?;
    Ok(net.edge_arc.iter().map(|&a| z.0[a]).collect())
}

#[cfg(test)]
mod tests {
    use super::*;

    /// S = {0,1}, T = {2,3,4}; edges s₁t₁, s₁t₂, s₁t₃, s₂t₃.
    fn two_by_three() -> Bipartite {
        let g = UndirGraph::new(5, vec![(0, 2), (0, 3), (0, 4), (1, 4)]).unwrap();
        Bipartite::new(g, vec![true, true, false, false, false]).unwrap()
    }

    #[test]
    fn unit_example() {
        let r = semimatching_decmin(&two_by_three(), &SemiVariant::Unit).unwrap();
        assert_eq!(r.degrees.0, vec![2, 1]);
        assert_eq!(r.edges(), vec![0, 1, 3]);
        assert_eq!(r.square_sum, 5);
    }

    #[test]
    fn perfect_matching() {
        let g = UndirGraph::new(6, vec![(0, 3), (1, 4), (2, 5)]).unwrap();
        let b = Bipartite::new(g, vec![true, true, true, false, false, false]).unwrap();
        assert_eq!(semimatching_decmin(&b, &SemiVariant::Unit).unwrap().degrees.0, vec![1, 1, 1]);
    }

    #[test]
    fn empty_fixed_size() {
        let b = two_by_three();
        let v = SemiVariant::FixedSize { gamma: 0, bounds: NodeBounds::finite(&[0; 5], &[9; 5]).unwrap() };
        let r = semimatching_decmin(&b, &v).unwrap();
        assert_eq!(r.degrees.0, vec![0, 0]);
        assert!(r.edges().is_empty());
    }

    #[test]
    fn bounded_takes_maximum() {
        let b = two_by_three();
        // each t at most once, s₁ at most once: best is s₁ plus s₂t₃
        let v = SemiVariant::Bounded { bounds: NodeBounds::finite(&[0; 5], &[1, 5, 1, 1, 1]).unwrap() };
        let r = semimatching_decmin(&b, &v).unwrap();
        assert_eq!(r.edges().len(), 2);
        assert_eq!(r.degrees.0, vec![1, 1]);
    }

    #[test]
    fn min_cost_picks_cheaper_t3() {
        let g = UndirGraph::new(4, vec![(0, 2), (0, 3), (1, 2), (1, 3)]).unwrap();
        let b = Bipartite::new(g, vec![true, true, false, false]).unwrap();
        let v = SemiVariant::MinCost { cost: vec![5, 0, 0, 5], base: Box::new(SemiVariant::Unit) };
        let r = semimatching_decmin(&b, &v).unwrap();
        assert_eq!(r.degrees.0, vec![1, 1]);
        assert_eq!(r.cost, Some(0));
        assert_eq!(r.edges(), vec![1, 2]);
    }

    #[test]
    fn hall_violation() {
        let g = UndirGraph::new(3, vec![(0, 1), (0, 2)]).unwrap();
        let b = Bipartite::new(g, vec![true, false, false]).unwrap();
        let v = SemiVariant::FixedSize { gamma: 2, bounds: NodeBounds::finite(&[0, 0, 0], &[1, 1, 1]).unwrap() };
        assert!(matches!(semimatching_decmin(&b, &v), Err(Error::Infeasible { .. })));
    }
}
