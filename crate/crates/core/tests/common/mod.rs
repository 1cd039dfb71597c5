#![allow(dead_code)]

use decmin_core::ext::{ExtInt, Finite, NegInf, PosInf};
use decmin_core::netflow::{ArcBounds, Digraph};
use decmin_core::orient::{Bipartite, MixedGraph, NodeBounds, Orientation, UndirGraph};
use decmin_core::{BoxBounds, Class, ExplicitSetFunction, Kind, Subset};
use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};

pub fn rng(seed: u64) -> StdRng {
    StdRng::seed_from_u64(seed)
}

/// Multigraph on `n` nodes with `m` edges, no loops.
pub fn random_graph(r: &mut StdRng, n: usize, m: usize) -> UndirGraph {
    let edges = (0..m)
        .map(|_| {
            let u = r.gen_range(0..n);
            let mut v = r.gen_range(0..n - 1);
            if v >= u {
                v += 1;
            }
            (u, v)
        })
        .collect();
    UndirGraph::new(n, edges).unwrap()
}

pub fn small_graph(r: &mut StdRng, max_edges: usize) -> UndirGraph {
    let n = r.gen_range(2..=5);
    let m = r.gen_range(1..=max_edges);
    random_graph(r, n, m)
}

/// `p(X) = Σ w_k [A_k ⊆ X] + c̃(X)`: fully supermodular and finite.
pub fn random_supermodular(r: &mut StdRng, n: usize) -> ExplicitSetFunction {
    let terms: Vec<(u64, i64)> = (0..r.gen_range(1..=4))
        .map(|_| (r.gen_range(1..(1u64 << n)), r.gen_range(1..=3)))
        .collect();
    let c: Vec<i64> = (0..n).map(|_| r.gen_range(-2..=2)).collect();
    let table = Subset::full(n)
        .subsets()
        .map(|x| {
            let cover: i64 = terms.iter().filter(|&&(a, _)| Subset(a).is_subset_of(x)).map(|&(_, w)| w).sum();
            Finite(cover + x.sum(&c).unwrap())
        })
        .collect();
    ExplicitSetFunction::from_table(n, Kind::Supermodular, Class::Fully, table).unwrap()
}

/// Box of width `w` containing `m`.
pub fn box_around(r: &mut StdRng, m: &[i64], w: i64) -> BoxBounds {
    let lo: Vec<i64> = m.iter().map(|&x| x - r.gen_range(0..=w)).collect();
    let hi: Vec<i64> = lo.iter().map(|&l| l + w).collect();
    BoxBounds::finite(&lo, &hi).unwrap()
}

/// Bounds that some orientation of `g` satisfies, with an occasional infinite side.
pub fn feasible_bounds(r: &mut StdRng, g: &UndirGraph) -> NodeBounds {
    let forward = (0..g.m()).map(|_| r.gen_bool(0.5)).collect();
    let deg = Orientation { forward }.indegree(g);
    let mut lower: Vec<ExtInt> = Vec::new();
    let mut upper: Vec<ExtInt> = Vec::new();
    for &d in deg.iter() {
        lower.push(if r.gen_bool(0.2) { NegInf } else { Finite(d - r.gen_range(0..=1)) });
        upper.push(if r.gen_bool(0.2) { PosInf } else { Finite(d + r.gen_range(0..=1)) });
    }
    NodeBounds::new(lower, upper).unwrap()
}

pub fn random_digraph(r: &mut StdRng, n: usize, m: usize) -> Digraph {
    let g = random_graph(r, n, m);
    Digraph::new(n, g.edges).unwrap()
}

/// Finite arc bounds inside `[−2, 2]`.
pub fn random_arc_bounds(r: &mut StdRng, m: usize) -> ArcBounds {
    let mut lo = Vec::new();
    let mut hi = Vec::new();
    for _ in 0..m {
        let a = r.gen_range(-2..=2);
        let b = r.gen_range(-2..=2);
        lo.push(a.min(b));
        hi.push(a.max(b));
    }
    ArcBounds::finite(&lo, &hi).unwrap()
}

/// Bipartite graph with `S = {0..s}` and `T = {s..s+t}`; every `t` has an edge.
pub fn random_bipartite(r: &mut StdRng, s: usize, t: usize) -> Bipartite {
    let mut edges = Vec::new();
    for tv in s..s + t {
        for sv in 0..s {
            if r.gen_bool(0.5) {
                edges.push((sv, tv));
            }
        }
        if !edges.iter().any(|&(_, x)| x == tv) {
            edges.push((r.gen_range(0..s), tv));
        }
    }
    let side = (0..s + t).map(|v| v < s).collect();
    Bipartite::new(UndirGraph::new(s + t, edges).unwrap(), side).unwrap()
}

/// All simple graphs on `n` labeled nodes with at most `max_m` edges and no isolated node.
pub fn simple_graphs(n: usize, max_m: usize) -> Vec<UndirGraph> {
    let pairs: Vec<(usize, usize)> = (0..n).flat_map(|u| (u + 1..n).map(move |v| (u, v))).collect();
    let mut out = Vec::new();
    for mask in 1u64..(1u64 << pairs.len()) {
        if mask.count_ones() as usize > max_m {
            continue;
        }
        let edges: Vec<(usize, usize)> = (0..pairs.len()).filter(|&i| mask >> i & 1 == 1).map(|i| pairs[i]).collect();
        let mut touched = vec![false; n];
        for &(u, v) in &edges {
            touched[u] = true;
            touched[v] = true;
        }
        if touched.iter().all(|&t| t) {
            out.push(UndirGraph::new(n, edges).unwrap());
        }
    }
    out
}

pub fn connected(g: &UndirGraph) -> bool {
    let mut seen = vec![false; g.n];
    let mut stack = vec![0];
    seen[0] = true;
    while let Some(v) = stack.pop() {
        for &(a, b) in &g.edges {
            for (x, y) in [(a, b), (b, a)] {
                if x == v && !seen[y] {
                    seen[y] = true;
                    stack.push(y);
                }
            }
        }
    }
    seen.iter().all(|&s| s)
}

pub fn k4_pendant() -> UndirGraph {
    UndirGraph::new(5, vec![(0, 1), (0, 2), (0, 3), (1, 2), (1, 3), (2, 3), (3, 4)]).unwrap()
}

/// Two hubs joined by internally disjoint paths of lengths 2, 2 and 3.
pub fn theta() -> UndirGraph {
    UndirGraph::new(6, vec![(0, 2), (2, 1), (0, 3), (3, 1), (0, 4), (4, 5), (5, 1)]).unwrap()
}

/// In-degree from outside `x`.
pub fn in_from_outside(g: &UndirGraph, o: &Orientation, x: Subset) -> usize {
    o.arcs(g).iter().filter(|&&(a, b)| !x.contains(a) && x.contains(b)).count()
}

/// Whether an `s → t` dipath exists.
pub fn reaches(g: &UndirGraph, o: &Orientation, s: usize, t: usize) -> bool {
    let arcs = o.arcs(g);
    let mut seen = vec![false; g.n];
    let mut stack = vec![s];
    seen[s] = true;
    while let Some(v) = stack.pop() {
        for &(a, b) in &arcs {
            if a == v && !seen[b] {
                seen[b] = true;
                stack.push(b);
            }
        }
    }
    seen[t]
}

pub fn le(a: i64, b: ExtInt) -> bool {
    Finite(a) <= b
}

pub fn ge(a: i64, b: ExtInt) -> bool {
    Finite(a) >= b
}

/// Mixed graph on `a, b, c, d` with undirected `ab, dc` and two strong orientations.
pub fn mixed_total() -> MixedGraph {
    let arcs = vec![(0, 3), (0, 3), (0, 3), (1, 2), (1, 2), (2, 1), (3, 0), (3, 0)];
    MixedGraph::new(4, vec![(0, 1), (3, 2)], arcs).unwrap()
}

/// `mixed_total` plus pendant nodes `u, v, x, y` tied to `a, a, b, d` by parallel edge pairs.
pub fn mixed_free() -> MixedGraph {
    let base = mixed_total();
    let mut edges = base.edges.clone();
    for (p, q) in [(0, 4), (0, 5), (1, 6), (3, 7)] {
        edges.push((p, q));
        edges.push((p, q));
    }
    MixedGraph::new(8, edges, base.arcs).unwrap()
}
