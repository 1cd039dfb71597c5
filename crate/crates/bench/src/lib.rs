//! Seeded instance generators shared by the benchmarks.

use decmin_core::ext::Finite;
use decmin_core::netflow::{ArcBounds, Digraph};
use decmin_core::orient::{Bipartite, UndirGraph};
use decmin_core::{Class, ExplicitSetFunction, Kind, Subset};
use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};

pub fn rng(seed: u64) -> StdRng {
    StdRng::seed_from_u64(seed)
}

/// Connected multigraph: a random spanning tree plus `extra` random edges.
pub fn connected_graph(r: &mut StdRng, n: usize, extra: usize) -> UndirGraph {
    let mut edges: Vec<(usize, usize)> = (1..n).map(|v| (r.gen_range(0..v), v)).collect();
    for _ in 0..extra {
        let u = r.gen_range(0..n);
        let v = (u + r.gen_range(1..n)) % n;
        edges.push((u, v));
    }
    UndirGraph::new(n, edges).expect("valid graph")
}

/// Two-edge-connected graph: a Hamiltonian cycle plus `extra` chords.
pub fn cycle_with_chords(r: &mut StdRng, n: usize, extra: usize) -> UndirGraph {
    let mut edges: Vec<(usize, usize)> = (0..n).map(|v| (v, (v + 1) % n)).collect();
    for _ in 0..extra {
        let u = r.gen_range(0..n);
        edges.push((u, (u + r.gen_range(1..n)) % n));
    }
    UndirGraph::new(n, edges).expect("valid graph")
}

/// `p(X) = Σ w_k [A_k ⊆ X] + c(X)` on `n` elements.
pub fn supermodular(r: &mut StdRng, n: usize, terms: usize) -> ExplicitSetFunction {
    let terms: Vec<(u64, i64)> = (0..terms).map(|_| (r.gen_range(1..(1u64 << n)), r.gen_range(1..=5))).collect();
    let c: Vec<i64> = (0..n).map(|_| r.gen_range(-3..=3)).collect();
    let table = Subset::full(n)
        .subsets()
        .map(|x| {
            let cover: i64 = terms.iter().filter(|&&(a, _)| Subset(a).is_subset_of(x)).map(|&(_, w)| w).sum();
            Finite(cover + x.sum(&c).expect("small sums"))
        })
        .collect();
    ExplicitSetFunction::from_table(n, Kind::Supermodular, Class::Fully, table).expect("valid table")
}

/// Random digraph with bounds `[0, c]`.
pub fn capacitated_digraph(r: &mut StdRng, n: usize, m: usize, cmax: i64) -> (Digraph, ArcBounds) {
    let arcs: Vec<(usize, usize)> = (0..m)
        .map(|_| {
            let u = r.gen_range(0..n);
            (u, (u + r.gen_range(1..n)) % n)
        })
        .collect();
    let hi: Vec<i64> = (0..m).map(|_| r.gen_range(1..=cmax)).collect();
    let d = Digraph::new(n, arcs).expect("valid digraph");
    let b = ArcBounds::finite(&vec![0; m], &hi).expect("valid bounds");
    (d, b)
}

/// Bipartite graph with `s` nodes on S, `t` on T; every T node gets `deg` edges.
pub fn bipartite(r: &mut StdRng, s: usize, t: usize, deg: usize) -> Bipartite {
    let mut edges = Vec::new();
    for v in 0..t {
        for _ in 0..deg {
            edges.push((r.gen_range(0..s), s + v));
        }
    }
    let side = (0..s + t).map(|v| v < s).collect();
    Bipartite::new(UndirGraph::new(s + t, edges).expect("valid graph"), side).expect("bipartite")
}
