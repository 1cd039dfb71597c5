use crate::error::{Error, Result};

use super::{Digraph, FlowVector};

/// Capacity standing in for `+inf` inside flow networks.
pub(crate) const INF: i64 = i64::MAX / 4;

/// Residual network for Dinic's algorithm. Edge `2k` is forward, `2k+1` its reverse.
#[derive(Clone, Debug, Default)]
pub(crate) struct FlowNet {
    adj: Vec<Vec<usize>>,
    to: Vec<usize>,
    cap: Vec<i64>,
}

impl FlowNet {
    pub fn new(n: usize) -> Self {
        FlowNet { adj: vec![Vec::new(); n], to: Vec::new(), cap: Vec::new() }
    }

    pub fn add_edge(&mut self, u: usize, v: usize, cap: i64) -> usize {
        let id = self.to.len();
        self.to.push(v);
        self.cap.push(cap.clamp(0, INF));
        self.adj[u].push(id);
        self.to.push(u);
        self.cap.push(0);
        self.adj[v].push(id + 1);
        id
    }

    /// Flow pushed through forward edge `id`.
    pub fn flow(&self, id: usize) -> i64 {
        self.cap[id ^ 1]
    }

    fn levels(&self, s: usize) -> Vec<i64> {
        let mut level = vec![-1; self.adj.len()];
        let mut queue = std::collections::VecDeque::new();
        level[s] = 0;
        queue.push_back(s);
        while let Some(u) = queue.pop_front() {
            for &e in &self.adj[u] {
                let v = self.to[e];
                if self.cap[e] > 0 && level[v] < 0 {
                    level[v] = level[u] + 1;
                    queue.push_back(v);
                }
            }
        }
        level
    }

    fn augment(&mut self, u: usize, t: usize, pushed: i64, level: &[i64], it: &mut [usize]) -> i64 {
        if u == t {
            return pushed;
        }
        while it[u] < self.adj[u].len() {
            let e = self.adj[u][it[u]];
            let v = self.to[e];
            if self.cap[e] > 0 && level[v] == level[u] + 1 {
                let d = self.augment(v, t, pushed.min(self.cap[e]), level, it);
                if d > 0 {
                    self.cap[e] -= d;
                    self.cap[e ^ 1] = (self.cap[e ^ 1] + d).min(INF);
                    return d;
                }
            }
            it[u] += 1;
        }
        0
    }

    /// Maximum flow from `s` to `t`, saturating at `INF`.
    pub fn max_flow(&mut self, s: usize, t: usize) -> i64 {
        let mut total = 0i64;
        loop {
            let level = self.levels(s);
            if level[t] < 0 || total >= INF {
                return total.min(INF);
            }
            let mut it = vec![0usize; self.adj.len()];
            loop {
                let f = self.augment(s, t, INF, &level, &mut it);
                if f == 0 {
                    break;
                }
                total = total.saturating_add(f);
                if total >= INF {
                    return INF;
                }
            }
        }
    }

    /// Nodes reachable from `s` in the residual network.
    pub fn reachable(&self, s: usize) -> Vec<bool> {
        self.levels(s).into_iter().map(|l| l >= 0).collect()
    }
}

/// Result of [`max_flow_min_cut`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MaxFlow {
    pub value: i64,
    pub flow: FlowVector,
    /// Source side of a minimum cut (the inclusion-minimal one).
    pub cut: Vec<usize>,
}

/// Integral maximum flow and minimum cut with nonnegative capacities.
pub fn max_flow_min_cut(d: &Digraph, cap: &[i64], s: usize, t: usize) -> Result<MaxFlow> {
    if cap.len() != d.arcs.len() {
        return Err(Error::Invalid("capacity vector does not match arcs".into()));
    }
    if s == t || s >= d.n || t >= d.n {
        return Err(Error::Precondition("source and sink must be distinct nodes".into()));
    }
    if cap.iter().any(|&c| c < 0) {
        return Err(Error::Precondition("capacities must be nonnegative".into()));
    }
    let mut net = FlowNet::new(d.n);
    let ids: Vec<usize> = d.arcs.iter().zip(cap).map(|(&(u, v), &c)| net.add_edge(u, v, c)).collect();
    let value = net.max_flow(s, t);
    let side = net.reachable(s);
    Ok(MaxFlow {
        value,
        flow: FlowVector(ids.iter().map(|&e| net.flow(e)).collect()),
        cut: (0..d.n).filter(|&v| side[v]).collect(),
    })
}
