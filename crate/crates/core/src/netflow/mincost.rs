use std::cmp::Reverse;
use std::collections::BinaryHeap;

use crate::error::{Error, Result};

use super::circulation::{solve_circulation, to_bounded, BoundedArc, FlowOutcome};
use super::maxflow::INF;
use super::{ArcBounds, Digraph, FlowVector};

struct CostNet {
    adj: Vec<Vec<usize>>,
    to: Vec<usize>,
    cap: Vec<i64>,
    cost: Vec<i64>,
}

impl CostNet {
    fn new(n: usize) -> Self {
        CostNet { adj: vec![Vec::new(); n], to: Vec::new(), cap: Vec::new(), cost: Vec::new() }
    }

    fn add_edge(&mut self, u: usize, v: usize, cap: i64, cost: i64) -> usize {
        let id = self.to.len();
        for (a, b, c, k) in [(u, v, cap, cost), (v, u, 0, -cost)] {
            self.to.push(b);
            self.cap.push(c);
            self.cost.push(k);
            self.adj[a].push(self.to.len() - 1);
        }
        id
    }

    /// Successive shortest paths with Dijkstra on reduced costs; costs must be
    /// nonnegative on every residual edge at the start.
    fn ssp(&mut self, s: usize, t: usize) -> Result<i64> {
        let n = self.adj.len();
        let mut pot = vec![0i64; n];
        let mut sent = 0i64;
        loop {
            let mut dist = vec![i64::MAX; n];
            let mut prev = vec![usize::MAX; n];
            let mut heap = BinaryHeap::new();
            dist[s] = 0;
            heap.push(Reverse((0i64, s)));
            while let Some(Reverse((d, u))) = heap.pop() {
                if d > dist[u] {
                    continue;
                }
                for &e in &self.adj[u] {
                    if self.cap[e] <= 0 {
                        continue;
                    }
                    let v = self.to[e];
                    let rc = self.cost[e] + pot[u] - pot[v];
                    let nd = d.checked_add(rc).ok_or(Error::Overflow)?;
                    if nd < dist[v] {
                        dist[v] = nd;
                        prev[v] = e;
                        heap.push(Reverse((nd, v)));
                    }
                }
            }
            if dist[t] == i64::MAX {
                return Ok(sent);
            }
            let dt = dist[t];
            for v in 0..n {
                pot[v] += dist[v].min(dt);
            }
            let mut push = INF;
            let mut v = t;
            while v != s {
                let e = prev[v];
                push = push.min(self.cap[e]);
                v = self.to[e ^ 1];
            }
            let mut v = t;
            while v != s {
                let e = prev[v];
                self.cap[e] -= push;
                self.cap[e ^ 1] += push;
                v = self.to[e ^ 1];
            }
            sent += push;
        }
    }
}

/// Minimum-cost `z` within finite bounds with net in-flow `demand`.
pub(crate) fn min_cost_flow(n: usize, arcs: &[BoundedArc], demand: &[i64], cost: &[i64]) -> Result<FlowVector> {
    if cost.len() != arcs.len() {
        return Err(Error::Invalid("cost vector does not match arcs".into()));
    }
    let mut fb = Vec::with_capacity(arcs.len());
    for a in arcs {
        match (a.lower.finite(), a.upper.finite()) {
            (Some(l), Some(u)) if l <= u => fb.push((l, u)),
            _ => return Err(Error::Precondition("min-cost flow needs finite bounds".into())),
        }
    }
    if let FlowOutcome::Violated { set, .. } = solve_circulation(n, arcs, demand)? {
        return Err(Error::infeasible_nodes("bounds admit no flow", set));
    }
    let mut need = demand.to_vec();
    let mut base = vec![0i64; arcs.len()];
    for (i, (a, &(lo, hi))) in arcs.iter().zip(&fb).enumerate() {
        // start at the cheaper end so all residual costs are nonnegative
        base[i] = if cost[i] < 0 { hi } else { lo };
        need[a.head] -= base[i];
        need[a.tail] += base[i];
    }
    let mut net = CostNet::new(n + 2);
    let (src, snk) = (n, n + 1);
    let ids: Vec<usize> = arcs
        .iter()
        .zip(&fb)
        .enumerate()
        .map(|(i, (a, &(lo, hi)))| {
            if cost[i] < 0 {
                // residual toward the lower end runs against the arc
                net.add_edge(a.head, a.tail, hi - lo, -cost[i])
            } else {
                net.add_edge(a.tail, a.head, hi - lo, cost[i])
            }
        })
        .collect();
    let mut required = 0i64;
    for (v, &e) in need.iter().enumerate() {
        if e > 0 {
            net.add_edge(v, snk, e, 0);
            required += e;
        } else if e < 0 {
            net.add_edge(src, v, -e, 0);
        }
    }
    let sent = net.ssp(src, snk)?;
    if sent != required {
        return Err(Error::infeasible_note("min-cost routing failed to meet demands"));
    }
    let z = ids
        .iter()
        .enumerate()
        .map(|(i, &id)| {
            let f = net.cap[id ^ 1];
            if cost[i] < 0 { base[i] - f } else { base[i] + f }
        })
        .collect();
    Ok(FlowVector(z))
}

/// Minimum-cost feasible circulation.
pub fn min_cost_circulation(d: &Digraph, bounds: &ArcBounds, cost: &[i64]) -> Result<FlowVector> {
    min_cost_flow(d.n, &to_bounded(d, bounds)?, &vec![0; d.n], cost)
}
