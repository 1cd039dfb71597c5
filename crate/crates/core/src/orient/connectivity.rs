use crate::error::{Certificate, Error, Result};
use crate::ext::{ExtInt, Finite};
use crate::mconvex::sandwich_member;
use crate::netflow::maxflow::{FlowNet, INF};
use crate::setfn::{Class, Kind, SetFunction};
use crate::subset::Subset;

use super::{orient_with_indegree, reverse_path_back, DiView, NodeBounds, Orientation, UndirGraph};

/// Arc-disjoint dipaths from `sources` to `sinks`, stopping once `limit` is reached.
fn disjoint_paths(g: &UndirGraph, o: &Orientation, sources: &[usize], sinks: &[usize], limit: i64) -> i64 {
    let (src, snk) = (g.n, g.n + 1);
    let mut net = FlowNet::new(g.n + 2);
    for e in 0..g.m() {
        let (a, b) = o.arc(g, e);
        net.add_edge(a, b, 1);
    }
    for &s in sources {
        net.add_edge(src, s, INF);
    }
    for &t in sinks {
        net.add_edge(t, snk, INF);
    }
    net.max_flow(src, snk).min(limit)
}

/// `λ(s,t)`: maximum number of arc-disjoint `s → t` dipaths.
pub fn local_arc_connectivity(g: &UndirGraph, o: &Orientation, s: usize, t: usize) -> i64 {
    if s == t {
        return i64::MAX;
    }
    disjoint_paths(g, o, &[s], &[t], i64::MAX)
}

/// `ϱ(X) ≥ k` for nonempty `X ⊆ V − r` and `ϱ(X) ≥ ℓ` for proper `X ∋ r`.
pub fn is_kl_connected(g: &UndirGraph, o: &Orientation, k: i64, l: i64, root: usize) -> bool {
    (0..g.n).filter(|&v| v != root).all(|v| {
        disjoint_paths(g, o, &[root], &[v], k) >= k && disjoint_paths(g, o, &[v], &[root], l) >= l
    })
}

/// Indices of bridges; parallel edges are never bridges.
pub fn bridges(g: &UndirGraph) -> Vec<usize> {
    let mut adj = vec![Vec::new(); g.n];
    for (e, &(u, v)) in g.edges.iter().enumerate() {
        adj[u].push((v, e));
        adj[v].push((u, e));
    }
    let mut disc = vec![usize::MAX; g.n];
    let mut low = vec![0; g.n];
    let mut out = Vec::new();
    let mut clock = 0;
    for r in 0..g.n {
        if disc[r] != usize::MAX {
            continue;
        }
        // (node, parent edge, next adjacency index)
        let mut stack = vec![(r, usize::MAX, 0usize)];
        disc[r] = clock;
        low[r] = clock;
        clock += 1;
        while let Some(&mut (v, pe, ref mut i)) = stack.last_mut() {
            if *i < adj[v].len() {
                let (w, e) = adj[v][*i];
                *i += 1;
                if e == pe {
                    continue;
                }
                if disc[w] == usize::MAX {
                    disc[w] = clock;
                    low[w] = clock;
                    clock += 1;
                    stack.push((w, e, 0));
                } else {
                    low[v] = low[v].min(disc[w]);
                }
            } else {
                stack.pop();
                if let Some(&(p, _, _)) = stack.last() {
                    low[p] = low[p].min(low[v]);
                    if low[v] > disc[p] {
                        out.push(pe);
                    }
                }
            }
        }
    }
    out.sort_unstable();
    out
}

/// DFS orientation: tree edges downward, the rest upward. Strong iff `G` is 2-edge-connected.
fn dfs_orientation(g: &UndirGraph) -> Orientation {
    let mut adj = vec![Vec::new(); g.n];
    for (e, &(u, v)) in g.edges.iter().enumerate() {
        adj[u].push((v, e));
        adj[v].push((u, e));
    }
    let mut o = Orientation::low_to_high(g);
    let mut seen_edge = vec![false; g.m()];
    let mut disc = vec![usize::MAX; g.n];
    let mut clock = 0;
    for r in 0..g.n {
        if disc[r] != usize::MAX {
            continue;
        }
        disc[r] = clock;
        clock += 1;
        let mut stack = vec![(r, 0usize)];
        while let Some(&mut (v, ref mut i)) = stack.last_mut() {
            if *i == adj[v].len() {
                stack.pop();
                continue;
            }
            let (w, e) = adj[v][*i];
            *i += 1;
            if seen_edge[e] {
                continue;
            }
            seen_edge[e] = true;
            // tree edge v→w, or back edge from the later-discovered end v to w
            o.forward[e] = g.edges[e].0 == v;
            if disc[w] == usize::MAX {
                disc[w] = clock;
                clock += 1;
                stack.push((w, 0));
            }
        }
    }
    o
}

fn check_strongly_orientable(g: &UndirGraph) -> Result<()> {
    if let Some(&e) = bridges(g).first() {
        return Err(Error::Infeasible {
            reason: format!("edge {e} is a bridge"),
            certificate: Certificate::Bridge(e),
        });
    }
    let via = DiView::new(g.n, g.edges.iter().copied().enumerate().flat_map(|(e, (u, v))| [(e, (u, v)), (e, (v, u))]))
        .bfs(&[0], true);
    let unreached: Vec<usize> = (0..g.n).filter(|&w| via[w].is_none()).collect();
    if !unreached.is_empty() {
        return Err(Error::infeasible_nodes("graph is disconnected", unreached));
    }
    Ok(())
}

/// Shortest `s → t` dipath reversal; the caller guarantees one exists.
fn reverse_some_path(g: &UndirGraph, o: &mut Orientation, s: usize, t: usize) {
    let via = DiView::of(g, o).bfs(&[t], false);
    debug_assert!(via[s].is_some());
    reverse_path_back(g, o, &via, s);
}

/// Generic improvement loop: `admissible(o, deg, s, t)` decides whether reversing an
/// `s → t` dipath keeps the orientation feasible.
fn improve<F>(g: &UndirGraph, o: &mut Orientation, mut admissible: F)
where
    F: FnMut(&Orientation, &[i64], usize, usize) -> bool,
{
    let mut deg = o.indegree(g).0;
    'outer: loop {
        let mut ts: Vec<usize> = (0..g.n).collect();
        ts.sort_by_key(|&v| (-deg[v], v));
        for &t in &ts {
            let mut ss: Vec<usize> = (0..g.n).filter(|&s| deg[s] <= deg[t] - 2).collect();
            ss.sort_by_key(|&v| (deg[v], v));
            for &s in &ss {
                if admissible(o, &deg, s, t) {
                    reverse_some_path(g, o, s, t);
                    deg[s] += 1;
                    deg[t] -= 1;
                    continue 'outer;
                }
            }
        }
        return;
    }
}

/// Dec-min among strongly connected orientations.
pub fn decmin_strong_orientation(g: &UndirGraph) -> Result<Orientation> {
    if g.n <= 1 {
        return Ok(Orientation::low_to_high(g));
    }
    check_strongly_orientable(g)?;
    let mut o = dfs_orientation(g);
    improve(g, &mut o, |o, _, s, t| disjoint_paths(g, o, &[s], &[t], 2) >= 2);
    Ok(o)
}

/// Whether `s → t` reversal keeps `(k,ℓ)`-edge-connectivity with root `r`.
fn kl_reversible(g: &UndirGraph, o: &Orientation, k: i64, l: i64, r: usize, s: usize, t: usize) -> bool {
    let need = |sources: &[usize], sinks: &[usize], want: i64| disjoint_paths(g, o, sources, sinks, want) >= want;
    if s == r {
        need(&[s], &[t], k + 1)
    } else if t == r {
        need(&[s], &[t], l + 1)
    } else {
        need(&[s, r], &[t], k + 1) && need(&[s], &[t, r], l + 1)
    }
}

/// Dec-min among `(f,g)`-bounded `(k,ℓ)`-edge-connected orientations with root `root`.
pub fn decmin_kec_orientation(
    g: &UndirGraph,
    k: i64,
    l: i64,
    root: usize,
    b: Option<&NodeBounds>,
) -> Result<Orientation> {
    if root >= g.n || l < 0 || l > k {
        return Err(Error::Invalid("need 0 ≤ l ≤ k and a root inside the graph".into()));
    }
    let p = KecFunction::new(g.clone(), k, l, root)?;
    let unb = NodeBounds::unbounded(g.n);
    let bounds = b.unwrap_or(&unb);
    super::check_bounds(g, bounds)?;
    let m = sandwich_member(&p, &bounds.lower, &bounds.upper)?;
    let mut o = orient_with_indegree(g, &m)?;
    if !is_kl_connected(g, &o, k, l, root) {
        return Err(Error::infeasible_note("initial orientation is not (k,l)-edge-connected"));
    }
    improve(g, &mut o, |o, deg, s, t| {
        Finite(deg[s]) < bounds.upper[s] && Finite(deg[t]) > bounds.lower[t] && kl_reversible(g, o, k, l, root, s, t)
    });
    Ok(o)
}

/// `p₁(X) = i_G(X) + 1` on proper nonempty sets: in-degree vectors of strong orientations.
pub struct StrongFunction {
    inner: KecFunction,
}

impl StrongFunction {
    pub fn new(g: UndirGraph) -> Result<Self> {
        Ok(StrongFunction { inner: KecFunction::new(g, 1, 1, 0)? })
    }
}

impl SetFunction for StrongFunction {
    fn n(&self) -> usize {
        self.inner.n()
    }
    fn kind(&self) -> Kind {
        Kind::Supermodular
    }
    fn class(&self) -> Class {
        Class::Crossing
    }
    fn eval(&self, x: Subset) -> Result<ExtInt> {
        self.inner.eval(x)
    }
}

/// `p = h + i_G` with `h = k` on root-free and `ℓ` on root-containing proper nonempty sets.
pub struct KecFunction {
    g: UndirGraph,
    k: i64,
    l: i64,
    root: usize,
}

impl KecFunction {
    pub fn new(g: UndirGraph, k: i64, l: i64, root: usize) -> Result<Self> {
        if g.n == 0 || g.n > crate::subset::MAX_GROUND || root >= g.n {
            return Err(Error::Invalid("graph size or root out of range".into()));
        }
        Ok(KecFunction { g, k, l, root })
    }
}

impl SetFunction for KecFunction {
    fn n(&self) -> usize {
        self.g.n
    }
    fn kind(&self) -> Kind {
        Kind::Supermodular
    }
    fn class(&self) -> Class {
        Class::Crossing
    }
    fn eval(&self, x: Subset) -> Result<ExtInt> {
        let i = self.g.induced(x);
        if x.is_empty() || x == Subset::full(self.g.n) {
            return Ok(Finite(i));
        }
        Ok(Finite(i + if x.contains(self.root) { self.l } else { self.k }))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn is_strong(g: &UndirGraph, o: &Orientation) -> bool {
        is_kl_connected(g, o, 1, 1, 0)
    }

    #[test]
    fn cycle_and_k4() {
        let c4 = UndirGraph::new(4, vec![(0, 1), (1, 2), (2, 3), (3, 0)]).unwrap();
        let o = decmin_strong_orientation(&c4).unwrap();
        assert!(is_strong(&c4, &o));
        assert_eq!(o.indegree(&c4).0, vec![1; 4]);
        let k4 = UndirGraph::complete(4);
        let o = decmin_strong_orientation(&k4).unwrap();
        assert!(is_strong(&k4, &o));
        assert_eq!(o.indegree(&k4).sorted_desc(), vec![2, 2, 1, 1]);
    }

    #[test]
    fn bridge_certificate() {
        let g = UndirGraph::new(5, vec![(0, 1), (1, 2), (2, 0), (2, 3), (3, 4), (4, 2), (0, 4)]).unwrap();
        assert!(bridges(&g).is_empty());
        let g = UndirGraph::new(4, vec![(0, 1), (1, 2), (2, 0), (2, 3)]).unwrap();
        assert_eq!(bridges(&g), vec![3]);
        match decmin_strong_orientation(&g) {
            Err(Error::Infeasible { certificate: Certificate::Bridge(3), .. }) => {}
            other => panic!("{other:?}"),
        }
        let par = UndirGraph::new(2, vec![(0, 1), (0, 1)]).unwrap();
        assert!(bridges(&par).is_empty());
        assert!(is_strong(&par, &decmin_strong_orientation(&par).unwrap()));
    }

    #[test]
    fn kec_matches_strong() {
        let k4 = UndirGraph::complete(4);
        let o = decmin_kec_orientation(&k4, 1, 1, 0, None).unwrap();
        assert!(is_strong(&k4, &o));
        assert_eq!(o.indegree(&k4).sorted_desc(), vec![2, 2, 1, 1]);
    }

    #[test]
    fn octahedron_two_connected() {
        let mut edges = Vec::new();
        for u in 0..6 {
            for v in u + 1..6 {
                if v != u + 3 {
                    edges.push((u, v));
                }
            }
        }
        let g = UndirGraph::new(6, edges).unwrap();
        let o = decmin_kec_orientation(&g, 2, 2, 0, None).unwrap();
        assert!(is_kl_connected(&g, &o, 2, 2, 0));
        assert_eq!(o.indegree(&g).0, vec![2; 6]);
    }

    #[test]
    fn strong_function_values() {
        let f = StrongFunction::new(UndirGraph::complete(4)).unwrap();
        assert_eq!(f.eval(Subset(0b0011)).unwrap(), Finite(2));
        assert_eq!(f.eval(Subset(0b1111)).unwrap(), Finite(6));
    }
}
