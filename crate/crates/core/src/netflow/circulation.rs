use crate::error::{Error, Result};
use crate::ext::{ExtInt, Finite, NegInf, PosInf};

use super::maxflow::FlowNet;
use super::{ArcBounds, Digraph, FlowVector};

/// An arc of a bounded network.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct BoundedArc {
    pub tail: usize,
    pub head: usize,
    pub lower: ExtInt,
    pub upper: ExtInt,
}

/// Substitute for infinite bounds: larger than any flow a vertex solution needs.
pub(crate) fn big_m(arcs: &[BoundedArc], demand: &[i64]) -> Result<i64> {
    let mut big: i64 = 1;
    for a in arcs {
        for b in [a.lower, a.upper] {
            if let Finite(v) = b {
                big = big.checked_add(v.checked_abs().ok_or(Error::Overflow)?).ok_or(Error::Overflow)?;
            }
        }
    }
    for &d in demand {
        big = big.checked_add(d.checked_abs().ok_or(Error::Overflow)?).ok_or(Error::Overflow)?;
    }
    if big >= super::maxflow::INF / 4 {
        return Err(Error::Overflow);
    }
    Ok(big)
}

pub(crate) fn finite_bounds(arcs: &[BoundedArc], big: i64) -> Vec<(i64, i64)> {
    arcs.iter()
        .map(|a| {
            let lo = a.lower.finite().unwrap_or(-big);
            let hi = a.upper.finite().unwrap_or(big);
            (lo, hi)
        })
        .collect()
}

/// `ϱ_f(Z) − δ_g(Z) − demand(Z)` with exact infinities.
pub(crate) fn violation(n: usize, arcs: &[BoundedArc], demand: &[i64], z: &[bool]) -> Result<ExtInt> {
    let mut v = Finite(0);
    for a in arcs {
        if z[a.head] && !z[a.tail] {
            v = v.checked_add(a.lower)?;
        } else if z[a.tail] && !z[a.head] {
            v = v.checked_sub(a.upper)?;
        }
    }
    let dz: i64 = (0..n).filter(|&i| z[i]).map(|i| demand[i]).sum();
    v.add_i64(-dz)
}

/// Outcome of a feasibility query: a flow, or a set maximizing the violation.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum FlowOutcome {
    Feasible(FlowVector),
    Violated { set: Vec<usize>, excess: ExtInt },
}

/// Finds `z` within bounds with net in-flow `demand(v)` at every node.
pub(crate) fn solve_circulation(n: usize, arcs: &[BoundedArc], demand: &[i64]) -> Result<FlowOutcome> {
    if demand.len() != n {
        return Err(Error::Invalid("demand vector does not match nodes".into()));
    }
    for a in arcs {
        if a.lower == PosInf || a.upper == NegInf || a.lower > a.upper {
            return Err(Error::Invalid("arc with empty bound interval".into()));
        }
    }
    if crate::ext::checked_sum(demand)? != 0 {
        return Err(Error::Precondition("demands must sum to zero".into()));
    }
    let big = big_m(arcs, demand)?;
    let fb = finite_bounds(arcs, big);
    let mut need = demand.to_vec();
    for (a, &(lo, _)) in arcs.iter().zip(&fb) {
        need[a.head] -= lo;
        need[a.tail] += lo;
    }
    let mut net = FlowNet::new(n + 2);
    let (src, snk) = (n, n + 1);
    let ids: Vec<usize> = arcs.iter().zip(&fb).map(|(a, &(lo, hi))| net.add_edge(a.tail, a.head, hi - lo)).collect();
    let mut required = 0i64;
    for (v, &e) in need.iter().enumerate() {
        if e > 0 {
            net.add_edge(v, snk, e);
            required += e;
        } else if e < 0 {
            net.add_edge(src, v, -e);
        }
    }
    let f = net.max_flow(src, snk);
    if f == required {
        let z = ids.iter().zip(&fb).map(|(&id, &(lo, _))| lo + net.flow(id)).collect();
        return Ok(FlowOutcome::Feasible(FlowVector(z)));
    }
    let side = net.reachable(src);
    let zset: Vec<bool> = (0..n).map(|v| side[v]).collect();
    let excess = violation(n, arcs, demand, &zset)?;
    Ok(FlowOutcome::Violated { set: (0..n).filter(|&v| zset[v]).collect(), excess })
}

pub(crate) fn to_bounded(d: &Digraph, b: &ArcBounds) -> Result<Vec<BoundedArc>> {
    if b.lower.len() != d.arcs.len() || b.upper.len() != d.arcs.len() {
        return Err(Error::Invalid("bounds do not match arcs".into()));
    }
    Ok(d.arcs
        .iter()
        .enumerate()
        .map(|(i, &(t, h))| BoundedArc { tail: t, head: h, lower: b.lower[i], upper: b.upper[i] })
        .collect())
}

/// An integral `z` with `f ≤ z ≤ g` and net in-flow `m`, or a most violating set.
pub fn feasible_m_flow(d: &Digraph, bounds: &ArcBounds, m: &[i64]) -> Result<FlowOutcome> {
    if m.len() != d.n {
        return Err(Error::Invalid("vector does not match nodes".into()));
    }
    if crate::ext::checked_sum(m)? != 0 {
        return Err(Error::Precondition("m must sum to zero over V".into()));
    }
    solve_circulation(d.n, &to_bounded(d, bounds)?, m)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn arc(lo: i64, hi: i64) -> ArcBounds {
        ArcBounds::finite(&[lo], &[hi]).unwrap()
    }

    #[test]
    fn single_arc_cases() {
        let d = Digraph::new(2, vec![(0, 1)]).unwrap();
        assert_eq!(
            feasible_m_flow(&d, &arc(1, 2), &[-1, 1]).unwrap(),
            FlowOutcome::Feasible(FlowVector(vec![1]))
        );
        assert_eq!(
            feasible_m_flow(&d, &arc(1, 2), &[0, 0]).unwrap(),
            FlowOutcome::Violated { set: vec![1], excess: Finite(1) }
        );
        assert!(feasible_m_flow(&d, &arc(1, 2), &[0, 1]).is_err());
    }

    #[test]
    fn zero_circulation_on_cycle() {
        let d = Digraph::new(4, vec![(0, 1), (1, 2), (2, 3), (3, 0)]).unwrap();
        let b = ArcBounds::finite(&[0; 4], &[1; 4]).unwrap();
        assert_eq!(
            feasible_m_flow(&d, &b, &[0; 4]).unwrap(),
            FlowOutcome::Feasible(FlowVector(vec![0; 4]))
        );
    }

    #[test]
    fn infinite_bounds() {
        let d = Digraph::new(2, vec![(0, 1), (1, 0)]).unwrap();
        let b = ArcBounds::new(vec![NegInf, Finite(3)], vec![PosInf, PosInf]).unwrap();
        match feasible_m_flow(&d, &b, &[-10, 10]).unwrap() {
            FlowOutcome::Feasible(z) => assert_eq!(z.0[0] - z.0[1], 10),
            o => panic!("{o:?}"),
        }
    }
}
