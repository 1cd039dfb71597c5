use std::sync::Arc;

use crate::error::{Error, Result};
use crate::ext::{ExtInt, Finite, NegInf, PosInf};
use crate::mconvex::{decmin_strong, IntVector, MConvexSet};
use crate::setfn::{Class, Kind, SetFunction, SharedFn};
use crate::subset::{Subset, MAX_GROUND};

use super::circulation::{solve_circulation, to_bounded, BoundedArc, FlowOutcome};
use super::maxflow::{FlowNet, INF};
use super::{max_flow_min_cut, ArcBounds, Digraph, FlowVector};

struct FaceData {
    nodes: usize,
    arcs: Vec<BoundedArc>,
    ground: Vec<usize>,
    hub: usize,
    sign: i64,
    offset: Vec<i64>,
    base: Vec<i64>,
    total: i64,
    pure: Option<(Digraph, ArcBounds)>,
}

/// An M-convex set given as the projection of a bounded circulation.
///
/// Ground element `s` owns an arc `a_s` entering the hub node and takes the value
/// `sign·z(a_s) + offset(s)`. Other arcs at the hub must carry fixed flow, so the
/// total is invariant.
#[derive(Clone)]
pub struct FlowFace {
    d: Arc<FaceData>,
}

impl FlowFace {
    pub fn new(
        nodes: usize,
        arcs: Vec<BoundedArc>,
        ground: Vec<usize>,
        hub: usize,
        sign: i64,
        offset: Vec<i64>,
    ) -> Result<Self> {
        Self::build(nodes, arcs, ground, hub, sign, offset, None)
    }

    fn build(
        nodes: usize,
        arcs: Vec<BoundedArc>,
        ground: Vec<usize>,
        hub: usize,
        sign: i64,
        offset: Vec<i64>,
        pure: Option<(Digraph, ArcBounds)>,
    ) -> Result<Self> {
        let n = ground.len();
        if n == 0 || n > MAX_GROUND || offset.len() != n || !(sign == 1 || sign == -1) || hub >= nodes {
            return Err(Error::Invalid("malformed flow face".into()));
        }
        for (i, a) in arcs.iter().enumerate() {
            if a.tail >= nodes || a.head >= nodes {
                return Err(Error::Invalid("arc endpoint out of range".into()));
            }
            let is_ground = ground.contains(&i);
            if is_ground && a.head != hub {
                return Err(Error::Invalid("ground arcs must enter the hub".into()));
            }
            if !is_ground && (a.head == hub || a.tail == hub) && (a.lower != a.upper || !a.lower.is_finite()) {
                return Err(Error::Invalid("non-ground hub arcs need a fixed finite flow".into()));
            }
        }
        let base = match solve_circulation(nodes, &arcs, &vec![0; nodes])? {
            FlowOutcome::Feasible(z) => z.0,
            FlowOutcome::Violated { set, .. } => {
                return Err(Error::infeasible_nodes("network admits no circulation", set))
            }
        };
        let mut total = 0i64;
        for s in 0..n {
            total = total.checked_add(sign * base[ground[s]] + offset[s]).ok_or(Error::Overflow)?;
        }
        Ok(FlowFace {
            d: Arc::new(FaceData { nodes, arcs, ground, hub, sign, offset, base, total, pure }),
        })
    }

    fn value_of(&self, z: &[i64]) -> IntVector {
        let d = &self.d;
        IntVector((0..d.ground.len()).map(|s| d.sign * z[d.ground[s]] + d.offset[s]).collect())
    }

    /// A circulation realizing `x`, if `x` is a member.
    pub fn realize(&self, x: &[i64]) -> Result<Option<Vec<i64>>> {
        let d = &self.d;
        if x.len() != d.ground.len() {
            return Err(Error::Invalid("vector does not match ground set".into()));
        }
        let mut arcs = d.arcs.clone();
        for (s, &a) in d.ground.iter().enumerate() {
            let z = Finite(d.sign * (x[s] - d.offset[s]));
            if z < arcs[a].lower || z > arcs[a].upper {
                return Ok(None);
            }
            arcs[a].lower = z;
            arcs[a].upper = z;
        }
        match solve_circulation(d.nodes, &arcs, &vec![0; d.nodes])? {
            FlowOutcome::Feasible(z) => Ok(Some(z.0)),
            FlowOutcome::Violated { .. } => Ok(None),
        }
    }

    pub fn arcs(&self) -> &[BoundedArc] {
        &self.d.arcs
    }
}

impl MConvexSet for FlowFace {
    fn n(&self) -> usize {
        self.d.ground.len()
    }

    fn total(&self) -> i64 {
        self.d.total
    }

    fn member(&self) -> Result<IntVector> {
        Ok(self.value_of(&self.d.base))
    }

    fn exchange_feasible(&self, m: &[i64], s: usize, t: usize) -> Result<bool> {
        if s == t {
            return Ok(true);
        }
        let mut x = m.to_vec();
        x[s] += 1;
        x[t] -= 1;
        Ok(self.realize(&x)?.is_some())
    }

    fn contains(&self, x: &[i64]) -> Option<Result<bool>> {
        Some(self.realize(x).map(|r| r.is_some()))
    }

    fn oracle(&self) -> Option<SharedFn> {
        Some(Arc::new(FaceFunction { face: self.clone() }))
    }
}

/// `p(X) = min { x̃(X) : x in the face }`, fully supermodular.
pub struct FaceFunction {
    face: FlowFace,
}

impl FaceFunction {
    fn pure_value(&self, x: Subset) -> Result<ExtInt> {
        let d = &self.face.d;
        let (g, b) = d.pure.as_ref().expect("pure face");
        let mut v = Finite(x.sum(&d.offset)?);
        for (i, &(t, h)) in g.arcs.iter().enumerate() {
            if x.contains(h) && !x.contains(t) {
                v = v.checked_add(b.lower[i])?;
            } else if x.contains(t) && !x.contains(h) {
                v = v.checked_sub(b.upper[i])?;
            }
        }
        Ok(v)
    }

    /// Max of `ϱ_f(X) − δ_g(X) − c̃(X)` by one minimum cut.
    fn pure_maximize(&self, w: &[i64], must: Subset, allowed: Subset) -> Result<(Subset, ExtInt)> {
        let d = &self.face.d;
        let (g, b) = d.pure.as_ref().expect("pure face");
        let n = g.n;
        let mut unary: Vec<i64> = (0..n).map(|v| w[v] - d.offset[v]).collect();
        let mut net = FlowNet::new(n + 2);
        let (src, snk) = (n, n + 1);
        for (i, &(t, h)) in g.arcs.iter().enumerate() {
            let f = match b.lower[i] {
                Finite(f) => f,
                _ => {
                    net.add_edge(h, t, INF);
                    0
                }
            };
            let cap = match b.upper[i] {
                PosInf => INF,
                Finite(u) => u - f,
                NegInf => unreachable!(),
            };
            net.add_edge(t, h, cap);
            unary[h] -= f;
            unary[t] += f;
        }
        let mut constant = 0i64;
        for v in 0..n {
            if must.contains(v) {
                net.add_edge(src, v, INF);
            }
            if !allowed.contains(v) {
                net.add_edge(v, snk, INF);
            }
            if unary[v] > 0 {
                net.add_edge(v, snk, unary[v]);
            } else if unary[v] < 0 {
                net.add_edge(src, v, -unary[v]);
                constant += unary[v];
            }
        }
        let cut = net.max_flow(src, snk);
        if cut >= INF {
            return Ok((must, NegInf));
        }
        let side = net.reachable(src);
        let x = Subset::from_elems((0..n).filter(|&v| side[v]));
        Ok((x, Finite(-(cut + constant))))
    }
}

impl SetFunction for FaceFunction {
    fn n(&self) -> usize {
        self.face.n()
    }
    fn kind(&self) -> Kind {
        Kind::Supermodular
    }
    fn class(&self) -> Class {
        Class::Fully
    }

    fn eval(&self, x: Subset) -> Result<ExtInt> {
        let d = &self.face.d;
        let n = d.ground.len();
        if x.is_empty() {
            return Ok(Finite(0));
        }
        if x == Subset::full(n) {
            return Ok(Finite(d.total));
        }
        if d.pure.is_some() {
            return self.pure_value(x);
        }
        // split the hub: ground arcs of X enter a new node joined to the hub by a free arc,
        // then push as much as possible around that arc in the residual network
        let hx = d.nodes;
        let mut net = FlowNet::new(d.nodes + 1);
        let mut w0 = 0i64;
        for (i, a) in d.arcs.iter().enumerate() {
            let z = d.base[i];
            let head = match d.ground.iter().position(|&g| g == i) {
                Some(s) if x.contains(s) => {
                    w0 += z;
                    hx
                }
                _ => a.head,
            };
            let fwd = match a.upper {
                Finite(u) => u - z,
                _ => INF,
            };
            let bwd = match a.lower {
                Finite(l) => z - l,
                _ => INF,
            };
            net.add_edge(a.tail, head, fwd);
            net.add_edge(head, a.tail, bwd);
        }
        let (from, to) = if d.sign > 0 { (hx, d.hub) } else { (d.hub, hx) };
        let push = net.max_flow(from, to);
        if push >= INF {
            return Ok(NegInf);
        }
        let w = if d.sign > 0 { w0 - push } else { -(w0 + push) };
        Ok(Finite(w + x.sum(&d.offset)?))
    }

    fn maximize_minus_modular(&self, w: &[i64], must: Subset, allowed: Subset) -> Result<(Subset, ExtInt)> {
        if self.face.d.pure.is_some() {
            self.pure_maximize(w, must, allowed)
        } else {
            crate::setfn::enumerate_max_minus_modular(self, w, must, allowed)
        }
    }
}

/// Net in-flow vectors `Ψ_z` of feasible `z`, translated by `offset`.
pub fn netinflow_handle_translated(d: &Digraph, bounds: &ArcBounds, offset: Vec<i64>) -> Result<FlowFace> {
    let mut arcs = to_bounded(d, bounds)?;
    for a in &arcs {
        if a.lower > a.upper {
            return Err(Error::Invalid("arc with empty bound interval".into()));
        }
    }
    if offset.len() != d.n {
        return Err(Error::Invalid("offset does not match nodes".into()));
    }
    let hub = d.n;
    let mut ground = Vec::with_capacity(d.n);
    for v in 0..d.n {
        ground.push(arcs.len());
        arcs.push(BoundedArc { tail: v, head: hub, lower: NegInf, upper: PosInf });
    }
    FlowFace::build(d.n + 1, arcs, ground, hub, 1, offset, Some((d.clone(), bounds.clone())))
}

/// The M-convex set of net in-flow vectors of integral feasible flows.
pub fn netinflow_handle(d: &Digraph, bounds: &ArcBounds) -> Result<FlowFace> {
    netinflow_handle_translated(d, bounds, vec![0; d.n])
}

/// Output of [`megiddo_discrete`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MegiddoResult {
    /// Net in-flow on the sources, in increasing element order of `S`.
    pub restriction: IntVector,
    pub flow: FlowVector,
}

/// An integral flow of amount `M` from `S` to `T` whose net in-flow on `S` is inc-max.
pub fn megiddo_discrete(d: &Digraph, g: &[i64], s: Subset, t: Subset, amount: i64) -> Result<MegiddoResult> {
    if g.len() != d.arcs.len() || g.iter().any(|&c| c < 0) {
        return Err(Error::Invalid("capacities must be nonnegative, one per arc".into()));
    }
    if s.is_empty() || t.is_empty() || !s.inter(t).is_empty() || !s.union(t).is_subset_of(Subset::full(d.n)) {
        return Err(Error::Precondition("S and T must be disjoint nonempty node sets".into()));
    }
    if amount < 0 {
        return Err(Error::Precondition("flow amount must be nonnegative".into()));
    }
    // feasibility via max flow from S to T
    let mut aux = d.clone();
    let (src, snk) = (d.n, d.n + 1);
    aux.n += 2;
    let mut cap = g.to_vec();
    for v in s.iter() {
        aux.arcs.push((src, v));
        cap.push(INF);
    }
    for v in t.iter() {
        aux.arcs.push((v, snk));
        cap.push(INF);
    }
    let mf = max_flow_min_cut(&aux, &cap, src, snk)?;
    if mf.value < amount {
        let cut = mf.cut.into_iter().filter(|&v| v < d.n).collect();
        return Err(Error::infeasible_nodes(format!("maximum flow is {}", mf.value), cut));
    }

    let (hub, hub_t) = (d.n, d.n + 1);
    let mut arcs: Vec<BoundedArc> = d
        .arcs
        .iter()
        .zip(g)
        .map(|(&(a, b), &c)| BoundedArc { tail: a, head: b, lower: Finite(0), upper: Finite(c) })
        .collect();
    let mut ground = Vec::new();
    for v in s.iter() {
        ground.push(arcs.len());
        arcs.push(BoundedArc { tail: v, head: hub, lower: NegInf, upper: Finite(0) });
    }
    for v in t.iter() {
        arcs.push(BoundedArc { tail: v, head: hub_t, lower: Finite(0), upper: PosInf });
    }
    arcs.push(BoundedArc { tail: hub_t, head: hub, lower: Finite(amount), upper: Finite(amount) });
    let k = ground.len();
    let face = FlowFace::new(d.n + 2, arcs, ground, hub, -1, vec![0; k])?;
    let (x, _) = decmin_strong(&face)?;
    let z = face.realize(&x)?.ok_or_else(|| Error::infeasible_note("dec-min vector not realizable"))?;
    Ok(MegiddoResult {
        restriction: IntVector(x.iter().map(|v| -v).collect()),
        flow: FlowVector(z[..d.arcs.len()].to_vec()),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::mconvex::{decmin_basic, handle_from_supermodular};
    use crate::setfn::enumerate_max_minus_modular;

    #[test]
    fn single_arc_face() {
        let d = Digraph::new(2, vec![(0, 1)]).unwrap();
        let h = netinflow_handle(&d, &ArcBounds::finite(&[0], &[1]).unwrap()).unwrap();
        assert_eq!(h.total(), 0);
        assert_eq!(h.contains(&[0, 0]).unwrap(), Ok(true));
        assert_eq!(h.contains(&[-1, 1]).unwrap(), Ok(true));
        assert_eq!(h.contains(&[1, -1]).unwrap(), Ok(false));
    }

    #[test]
    fn antiparallel_decmin() {
        let d = Digraph::new(2, vec![(0, 1), (1, 0)]).unwrap();
        let h = netinflow_handle(&d, &ArcBounds::finite(&[0, 0], &[1, 1]).unwrap()).unwrap();
        assert_eq!(decmin_basic(&h, None).unwrap().0, vec![0, 0]);
        assert_eq!(decmin_strong(&h).unwrap().0 .0, vec![0, 0]);
    }

    #[test]
    fn pure_and_generic_oracles_agree() {
        let d = Digraph::new(4, vec![(0, 1), (1, 2), (2, 0), (2, 3), (3, 1), (0, 3)]).unwrap();
        let b = ArcBounds::new(
            vec![Finite(0), Finite(-1), NegInf, Finite(1), Finite(0), Finite(-2)],
            vec![Finite(2), Finite(1), Finite(1), PosInf, Finite(2), Finite(0)],
        )
        .unwrap();
        let pure = netinflow_handle_translated(&d, &b, vec![1, 0, -2, 3]).unwrap();
        // same network without the pure shortcut
        let generic = FlowFace::new(
            pure.d.nodes,
            pure.d.arcs.clone(),
            pure.d.ground.clone(),
            pure.d.hub,
            1,
            pure.d.offset.clone(),
        )
        .unwrap();
        let (pf, gf) = (pure.oracle().unwrap(), generic.oracle().unwrap());
        for x in Subset::full(4).subsets() {
            assert_eq!(pf.eval(x).unwrap(), gf.eval(x).unwrap(), "X = {x}");
        }
        for w in [[0, 0, 0, 0], [1, -3, 2, 0], [-5, 4, 4, -1]] {
            for (must, allowed) in [(Subset::EMPTY, Subset::full(4)), (Subset(0b10), Subset(0b1011))] {
                let fast = pf.maximize_minus_modular(&w, must, allowed).unwrap();
                let slow = enumerate_max_minus_modular(pf.as_ref(), &w, must, allowed).unwrap();
                assert_eq!(fast, slow);
            }
        }
        let via_fn = handle_from_supermodular(pf).unwrap();
        assert_eq!(decmin_strong(&via_fn).unwrap().0, decmin_strong(&pure).unwrap().0);
    }

    #[test]
    fn megiddo_two_sources() {
        let d = Digraph::new(3, vec![(0, 2), (1, 2)]).unwrap();
        let (s, t) = (Subset::from_elems([0, 1]), Subset::singleton(2));
        assert_eq!(megiddo_discrete(&d, &[1, 2], s, t, 2).unwrap().restriction.0, vec![-1, -1]);
        assert_eq!(megiddo_discrete(&d, &[1, 2], s, t, 3).unwrap().restriction.0, vec![-1, -2]);
        let r = megiddo_discrete(&d, &[1, 2], s, t, 0).unwrap();
        assert_eq!((r.restriction.0, r.flow.0), (vec![0, 0], vec![0, 0]));
        assert!(matches!(megiddo_discrete(&d, &[1, 2], s, t, 4), Err(Error::Infeasible { .. })));
    }
}
