use crate::error::Result;
use crate::ext::{ExtInt, Finite, NegInf};
use crate::netflow::maxflow::{FlowNet, INF};
use crate::setfn::{Class, Kind, SetFunction};
use crate::subset::Subset;

use super::UndirGraph;

/// `i_G`: edges induced by a node set. Fully supermodular.
pub struct InducedEdges {
    g: UndirGraph,
}

impl InducedEdges {
    pub fn new(g: UndirGraph) -> Self {
        InducedEdges { g }
    }
}

impl SetFunction for InducedEdges {
    fn n(&self) -> usize {
        self.g.n
    }
    fn kind(&self) -> Kind {
        Kind::Supermodular
    }
    fn class(&self) -> Class {
        Class::Fully
    }
    fn eval(&self, x: Subset) -> Result<ExtInt> {
        Ok(Finite(self.g.induced(x)))
    }

    /// Project selection: an edge pays 1 only if both ends are taken.
    fn maximize_minus_modular(&self, w: &[i64], must: Subset, allowed: Subset) -> Result<(Subset, ExtInt)> {
        let (n, m) = (self.g.n, self.g.m());
        let (src, snk) = (n + m, n + m + 1);
        let mut net = FlowNet::new(n + m + 2);
        let mut gain = m as i64;
        for (e, &(u, v)) in self.g.edges.iter().enumerate() {
            net.add_edge(src, n + e, 1);
            net.add_edge(n + e, u, INF);
            net.add_edge(n + e, v, INF);
        }
        for v in 0..n {
            if w[v] > 0 {
                net.add_edge(v, snk, w[v]);
            } else if w[v] < 0 {
                net.add_edge(src, v, -w[v]);
                gain += -w[v];
            }
            if must.contains(v) {
                net.add_edge(src, v, INF);
            }
            if !allowed.contains(v) {
                net.add_edge(v, snk, INF);
            }
        }
        let cut = net.max_flow(src, snk);
        if cut >= INF {
            return Ok((must, NegInf));
        }
        let side = net.reachable(src);
        Ok((Subset::from_elems((0..n).filter(|&v| side[v])), Finite(gain - cut)))
    }
}

/// `e_G`: edges touching a node set. Fully submodular.
pub struct ExcessEdges {
    g: UndirGraph,
}

impl ExcessEdges {
    pub fn new(g: UndirGraph) -> Self {
        ExcessEdges { g }
    }
}

impl SetFunction for ExcessEdges {
    fn n(&self) -> usize {
        self.g.n
    }
    fn kind(&self) -> Kind {
        Kind::Submodular
    }
    fn class(&self) -> Class {
        Class::Fully
    }
    fn eval(&self, x: Subset) -> Result<ExtInt> {
        Ok(Finite(self.g.touching(x)))
    }
}
