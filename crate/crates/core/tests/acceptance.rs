mod common;

use std::cmp::Ordering;
use std::collections::BTreeSet;
use std::process::ExitCode;
use std::sync::Arc;
use std::time::{Duration, Instant};

use common::*;
use decmin_core::ext::{div_ceil, Finite, NegInf, PosInf};
use decmin_core::mconvex::*;
use decmin_core::netflow::*;
use decmin_core::oracle::*;
use decmin_core::orient::*;
use decmin_core::{IntVector, MConvexSet, SetFunction, Subset};
use rand::rngs::StdRng;
use rand::Rng;

const SEED: u64 = 0x5EED_2024;
const EQUIV_INSTANCES: usize = 60;
const EQUIV_BUDGET: Duration = Duration::from_secs(60);
const MIXED_BUDGET: Duration = Duration::from_secs(1);
const CHEAPEST_INSTANCES: usize = 200;
const CAPACITY: i64 = 1_000_000;
const CAPACITY_BUDGET: Duration = Duration::from_millis(100);
const CAPACITY_GRAPHS: usize = 20;
const FEAS_INSTANCES: usize = 60;
const MEGIDDO_INSTANCES: usize = 30;
const SEMI_INSTANCES: usize = 30;

type Outcome = Result<String, String>;

macro_rules! ensure {
    ($cond:expr, $($fmt:tt)+) => {
        if !$cond {
            return Err(format!($($fmt)+));
        }
    };
}

fn ok<T, E: std::fmt::Debug>(r: Result<T, E>, what: &str) -> Result<T, String> {
    r.map_err(|e| format!("{what}: {e:?}"))
}

/// One instance of the equivalence suite.
enum Instance {
    Graph { g: UndirGraph, bounds: Option<NodeBounds> },
    Function { p: Arc<dyn SetFunction>, bounds: BoxBounds },
}

fn instances() -> Vec<Instance> {
    let mut r = rng(SEED);
    let mut out = Vec::new();
    for i in 0..EQUIV_INSTANCES {
        match i % 3 {
            0 => out.push(Instance::Graph { g: small_graph(&mut r, 7), bounds: None }),
            1 => {
                let g = small_graph(&mut r, 7);
                let b = feasible_bounds(&mut r, &g);
                out.push(Instance::Graph { g, bounds: Some(b) });
            }
            _ => {
                let n = r.gen_range(1..=5);
                let p: Arc<dyn SetFunction> = Arc::new(random_supermodular(&mut r, n));
                let m = handle_from_supermodular(p.clone()).unwrap().member().unwrap();
                let w = r.gen_range(0..=4);
                out.push(Instance::Function { p, bounds: box_around(&mut r, &m, w) });
            }
        }
    }
    out
}

/// Handle, oracle report, and the supermodular function whose base set is the handle.
fn prepare(inst: &Instance) -> Result<(Box<dyn MConvexSet>, EnumerationReport, Arc<dyn SetFunction>), String> {
    match inst {
        Instance::Graph { g, bounds } => {
            let rep = ok(enumerate_orientations(&MixedGraph::from(g), bounds.as_ref(), Predicate::None, VectorKind::Total), "enumerate")?;
            let h = Arc::new(ok(OrientationHandle::new(g.clone()), "handle")?);
            let p: Arc<dyn SetFunction> = Arc::new(InducedEdges::new(g.clone()));
            Ok(match bounds {
                None => (Box::new(h), rep, p),
                Some(b) => {
                    let boxed = Arc::new(ok(BoxedFunction::new(p, b.clone()), "boxed")?);
                    (Box::new(ok(box_intersect(h, b.clone()), "box")?), rep, boxed)
                }
            })
        }
        Instance::Function { p, bounds } => {
            let rep = ok(enumerate_base_elements(p.as_ref(), bounds), "enumerate")?;
            let h = Arc::new(ok(handle_from_supermodular(p.clone()), "handle")?);
            let boxed = Arc::new(ok(BoxedFunction::new(p.clone(), bounds.clone()), "boxed")?);
            Ok((Box::new(ok(box_intersect(h, bounds.clone()), "box")?), rep, boxed))
        }
    }
}

fn criterion_1() -> Outcome {
    let start = Instant::now();
    let mut outputs = 0;
    for (i, inst) in instances().iter().enumerate() {
        let (h, rep, _) = prepare(inst)?;
        ensure!(check_equivalences(&rep), "instance {i}: dec-min, inc-max and square-sum sets differ");
        let mut got = vec![ok(decmin_strong(h.as_ref()), "strong")?.0, ok(decmin_basic(h.as_ref(), None), "basic")?];
        if let Instance::Graph { g, bounds } = inst {
            got.push(ok(orientation_canonical(g, bounds.as_ref()), "canonical")?.0.indegree(g));
            if bounds.is_none() {
                got.push(ok(decmin_orientation(g), "path reversal")?.indegree(g));
                got.push(ok(capacitated_decmin_orientation(g, None), "capacitated")?.indegree);
            }
        }
        for m in &got {
            ensure!(rep.decmin_set.contains(m), "instance {i}: {m:?} not dec-min");
        }
        outputs += got.len();
    }
    let t = start.elapsed();
    ensure!(t < EQUIV_BUDGET, "took {t:?}");
    Ok(format!("{EQUIV_INSTANCES} instances, {outputs} solver outputs, {t:?}"))
}

fn criterion_2() -> Outcome {
    let mut steps = 0;
    for (i, inst) in instances().iter().enumerate() {
        let (_, _, p) = prepare(inst)?;
        let nd = ok(newton_dinkelbach_beta1(p.as_ref()), "newton-dinkelbach")?;
        let n = p.n();
        let bad = &nd.trace[..nd.trace.len() - 1];
        ensure!(nd.iterations() <= n, "instance {i}: h = {} > n = {n}", nd.iterations());
        for w in nd.trace.windows(2) {
            ensure!(w[0].mu < w[1].mu, "instance {i}: mu did not increase");
        }
        for w in bad.windows(2) {
            ensure!(w[1].set.len() < w[0].set.len(), "instance {i}: |X_j| did not decrease");
        }
        let exhaustive = Subset::full(n)
            .subsets()
            .filter(|x| !x.is_empty())
            .filter_map(|x| p.eval(x).ok()?.finite().map(|v| div_ceil(v, x.len() as i64)))
            .max();
        ensure!(Some(nd.beta1) == exhaustive, "instance {i}: beta1 {} vs {exhaustive:?}", nd.beta1);
        steps += nd.trace.len();
    }
    Ok(format!("{EQUIV_INSTANCES} traces, {steps} steps"))
}

fn criterion_3() -> Outcome {
    let mut multi = 0;
    for (i, inst) in instances().iter().enumerate() {
        let (h, rep, _) = prepare(inst)?;
        if rep.decmin_set.len() < 2 {
            continue;
        }
        multi += 1;
        let first = ok(canonical_chain(h.as_ref(), &rep.decmin_set[0]), "canonical")?;
        for m in &rep.decmin_set[1..] {
            ensure!(ok(canonical_chain(h.as_ref(), m), "canonical")? == first, "instance {i}: chain depends on {m:?}");
        }
    }
    ensure!(multi > 0, "no instance with two dec-min elements");
    Ok(format!("{multi} instances with several dec-min elements"))
}

fn criterion_4() -> Outcome {
    let start = Instant::now();
    let v = |x: &[i64]| IntVector(x.to_vec());
    let r = ok(enumerate_orientations(&mixed_total(), None, Predicate::Strong, VectorKind::Total), "enumerate")?;
    ensure!(r.vectors == vec![v(&[2, 2, 2, 4]), v(&[3, 1, 3, 3])], "total vectors {:?}", r.vectors);
    ensure!(r.decmin_set == vec![v(&[3, 1, 3, 3])], "total dec-min {:?}", r.decmin_set);
    ensure!(r.incmax_set == vec![v(&[2, 2, 2, 4])], "total inc-max {:?}", r.incmax_set);
    let r = ok(enumerate_orientations(&mixed_free(), None, Predicate::Strong, VectorKind::FreePart), "enumerate")?;
    let (a, b) = (v(&[2, 2, 0, 2, 1, 1, 1, 1]), v(&[3, 1, 1, 1, 1, 1, 1, 1]));
    ensure!(r.vectors == vec![a.clone(), b.clone()], "free-part vectors {:?}", r.vectors);
    ensure!(r.decmin_set == vec![a] && r.incmax_set == vec![b], "free-part split {:?} / {:?}", r.decmin_set, r.incmax_set);
    let t = start.elapsed();
    ensure!(t < MIXED_BUDGET, "took {t:?}");
    Ok(format!("both splits reproduced in {t:?}"))
}

fn out_of(g: &UndirGraph, o: &Orientation, x: Subset) -> usize {
    o.arcs(g).iter().filter(|&&(a, b)| x.contains(a) && !x.contains(b)).count()
}

fn criterion_5() -> Outcome {
    let mut r = rng(SEED ^ 5);
    let mut broken = Vec::new();
    for i in 0..CHEAPEST_INSTANCES {
        let g = small_graph(&mut r, 6);
        let b = feasible_bounds(&mut r, &g);
        let cost: Vec<(i64, i64)> = (0..g.m()).map(|_| (r.gen_range(0..=3), r.gen_range(0..=3))).collect();
        let (o, canon) = ok(orientation_canonical(&g, Some(&b)), "canonical")?;
        let zs = z_chain(&g, &o, &b, &canon);
        let all = ok(feasible_orientations(&MixedGraph::from(&g), Some(&b), Predicate::None), "enumerate")?;
        let rep = ok(enumerate_orientations(&MixedGraph::from(&g), Some(&b), Predicate::None, VectorKind::Total), "enumerate")?;
        let described: BTreeSet<Vec<bool>> = all
            .iter()
            .filter(|d| {
                let m = d.indegree(&g);
                (0..g.n).all(|v| canon.f_star[v] <= m[v] && m[v] <= canon.g_star[v]) && zs.iter().all(|&z| out_of(&g, d, z) == 0)
            })
            .map(|d| d.forward.clone())
            .collect();
        let decmin: BTreeSet<Vec<bool>> =
            all.iter().filter(|d| rep.decmin_set.contains(&d.indegree(&g))).map(|d| d.forward.clone()).collect();
        ensure!(decmin.is_subset(&described), "instance {i}: a dec-min orientation violates the box or the chain");
        if described != decmin {
            broken.push(i);
        }
        let res = ok(cheapest_decmin_orientation(&g, &b, &cost), "cheapest")?;
        ensure!(rep.decmin_set.contains(&res.orientation.indegree(&g)), "instance {i}: cheapest output not dec-min");
        let best = all.iter().filter(|d| decmin.contains(&d.forward)).map(|d| d.cost(&cost)).min();
        ensure!(Some(res.cost) == best, "instance {i}: cost {} vs {best:?}", res.cost);
    }
    ensure!(
        broken.is_empty(),
        "{} of {CHEAPEST_INSTANCES} instances admit a non-dec-min orientation in the box with every Z_i closed (first: {}); cheapest costs all optimal",
        broken.len(),
        broken[0]
    );
    Ok(format!("{CHEAPEST_INSTANCES} instances, both inclusions and optimal costs"))
}

fn criterion_6() -> Outcome {
    let mut graphs: Vec<UndirGraph> = (3..=6).flat_map(|n| simple_graphs(n, 6)).collect();
    graphs.retain(|g| connected(g) && bridges(g).is_empty());
    graphs.push(UndirGraph::complete(4));
    graphs.push(theta());
    for g in &graphs {
        let o = ok(decmin_strong_orientation(g), "strong")?;
        ensure!(is_kl_connected(g, &o, 1, 1, 0), "{g:?}: not strong");
        let rep = ok(enumerate_orientations(&MixedGraph::from(g), None, Predicate::Strong, VectorKind::Total), "enumerate")?;
        let m = o.indegree(g);
        ensure!(rep.decmin_set.contains(&m), "{g:?}: {m:?} not dec-min among strong orientations");
        for s in 0..g.n {
            for t in 0..g.n {
                ensure!(
                    m[t] < m[s] + 2 || local_arc_connectivity(g, &o, s, t) < 2,
                    "{g:?}: two arc-disjoint paths {s} -> {t}"
                );
            }
        }
    }
    Ok(format!("{} graphs", graphs.len()))
}

fn criterion_7() -> Outcome {
    let g = ok(UndirGraph::new(2, vec![(0, 1)]), "graph")?.with_mult(vec![CAPACITY]).map_err(|e| e.to_string())?;
    let start = Instant::now();
    let res = ok(capacitated_decmin_orientation(&g, None), "capacitated")?;
    let t = start.elapsed();
    ensure!(res.indegree.0 == vec![CAPACITY / 2, CAPACITY / 2], "got {:?}", res.indegree);
    ensure!(t < CAPACITY_BUDGET, "took {t:?}");
    let mut r = rng(SEED ^ 7);
    for _ in 0..CAPACITY_GRAPHS {
        let g = small_graph(&mut r, 7);
        let unit = g.clone().with_mult(vec![1; g.m()]).map_err(|e| e.to_string())?;
        let a = ok(capacitated_decmin_orientation(&unit, None), "capacitated")?.indegree;
        let b = ok(decmin_orientation(&g), "plain")?.indegree(&g);
        ensure!(a.sorted_desc() == b.sorted_desc(), "{g:?}: {a:?} vs {b:?}");
    }
    Ok(format!("l = {CAPACITY} in {t:?}; {CAPACITY_GRAPHS} unit graphs agree"))
}

fn deficit(d: &Digraph, b: &ArcBounds, m: &[i64], x: Subset) -> i64 {
    let mut v = -x.sum(m).unwrap();
    for (a, &(t, h)) in d.arcs.iter().enumerate() {
        match (x.contains(t), x.contains(h)) {
            (false, true) => v += b.lower[a].finite().unwrap(),
            (true, false) => v -= b.upper[a].finite().unwrap(),
            _ => {}
        }
    }
    v
}

fn criterion_8() -> Outcome {
    let mut r = rng(SEED ^ 8);
    let mut feasible = 0;
    for i in 0..FEAS_INSTANCES {
        let n = r.gen_range(2..=5);
        let arcs = r.gen_range(1..=7);
        let d = random_digraph(&mut r, n, arcs);
        let b = random_arc_bounds(&mut r, arcs);
        let mut m: Vec<i64> = (0..n).map(|_| r.gen_range(-2..=2)).collect();
        let s: i64 = m.iter().sum();
        m[0] -= s;
        let scan = Subset::full(n).subsets().all(|x| deficit(&d, &b, &m, x) <= 0);
        match ok(feasible_m_flow(&d, &b, &m), "feasible")? {
            FlowOutcome::Feasible(z) => {
                ensure!(scan, "instance {i}: flow found but the scan fails");
                ensure!(b.admits(&z.0) && d.net_inflow(&z.0) == m, "instance {i}: bad flow");
                feasible += 1;
            }
            FlowOutcome::Violated { .. } => ensure!(!scan, "instance {i}: scan passes but no flow"),
        }
    }
    for i in 0..MEGIDDO_INSTANCES {
        let n = r.gen_range(3..=5);
        let arcs = r.gen_range(2..=7);
        let d = random_digraph(&mut r, n, arcs);
        let cap: Vec<i64> = (0..arcs).map(|_| r.gen_range(0..=2)).collect();
        let k = r.gen_range(1..n);
        let s = Subset::from_elems(0..k);
        let t = Subset::from_elems((k..n).filter(|_| r.gen_bool(0.7)).chain([n - 1]));
        let bounds = ok(ArcBounds::finite(&vec![0; arcs], &cap), "bounds")?;
        let mut by_value: Vec<Vec<IntVector>> = Vec::new();
        for z in ok(enumerate_flows(&d, &bounds), "flows")? {
            let psi = d.net_inflow(&z.0);
            let fits = (0..n).all(|v| {
                if s.contains(v) {
                    psi[v] <= 0
                } else if t.contains(v) {
                    psi[v] >= 0
                } else {
                    psi[v] == 0
                }
            });
            if fits {
                let value = t.iter().map(|v| psi[v]).sum::<i64>() as usize;
                if by_value.len() <= value {
                    by_value.resize(value + 1, Vec::new());
                }
                by_value[value].push(IntVector(s.iter().map(|v| psi[v]).collect()));
            }
        }
        let amount = by_value.len() - 1 - r.gen_range(0..by_value.len().min(2));
        let res = ok(megiddo_discrete(&d, &cap, s, t, amount as i64), "megiddo")?;
        let all = &by_value[amount];
        ensure!(all.contains(&res.restriction), "instance {i}: {:?} not a value-{amount} restriction", res.restriction);
        for x in all {
            ensure!(
                inc_compare(x, &res.restriction).unwrap() != Ordering::Greater,
                "instance {i}: {x:?} beats {:?}",
                res.restriction
            );
        }
    }
    Ok(format!("{FEAS_INSTANCES} feasibility queries ({feasible} feasible), {MEGIDDO_INSTANCES} Megiddo instances"))
}

fn bip_degrees(b: &Bipartite, z: &[i64]) -> Vec<i64> {
    let mut d = vec![0; b.graph.n];
    for (e, &k) in z.iter().enumerate() {
        let (s, t) = b.ends(e);
        d[s] += k;
        d[t] += k;
    }
    d
}

fn s_part(b: &Bipartite, d: &[i64]) -> IntVector {
    IntVector(b.s_nodes().iter().map(|&s| d[s]).collect())
}

fn subsets_of_edges(m: usize) -> impl Iterator<Item = Vec<i64>> {
    (0u64..1 << m).map(move |mask| (0..m).map(|e| (mask >> e & 1) as i64).collect())
}

fn random_node_bounds(r: &mut StdRng, b: &Bipartite) -> NodeBounds {
    let z: Vec<i64> = (0..b.graph.m()).map(|_| r.gen_range(0..=1)).collect();
    let d = bip_degrees(b, &z);
    let lower = d.iter().map(|&x| if r.gen_bool(0.2) { NegInf } else { Finite(x - r.gen_range(0..=1)) }).collect();
    let upper = d.iter().map(|&x| if r.gen_bool(0.2) { PosInf } else { Finite(x + r.gen_range(0..=1)) }).collect();
    NodeBounds::new(lower, upper).unwrap()
}

/// Compares a semi-matching solver run against the enumerated feasible edge sets.
fn semi_check(b: &Bipartite, v: &SemiVariant, sols: &[Vec<i64>], what: &str) -> Result<(), String> {
    let vectors: BTreeSet<IntVector> = sols.iter().map(|z| s_part(b, &bip_degrees(b, z))).collect();
    match semimatching_decmin(b, v) {
        Ok(res) => {
            ensure!(sols.contains(&res.z), "{what}: output not feasible");
            let rep = ok(EnumerationReport::from_vectors(sols.len() as u64, vectors), "report")?;
            ensure!(rep.decmin_set.contains(&res.degrees), "{what}: {:?} not dec-min", res.degrees);
            if let SemiVariant::MinCost { cost, .. } = v {
                let dot = |z: &[i64]| z.iter().zip(cost).map(|(a, c)| a * c).sum::<i64>();
                let best = sols.iter().filter(|z| rep.decmin_set.contains(&s_part(b, &bip_degrees(b, z)))).map(|z| dot(z)).min();
                ensure!(res.cost == best, "{what}: cost {:?} vs {best:?}", res.cost);
            }
        }
        Err(e) => ensure!(sols.is_empty(), "{what}: solver failed ({e}) on a feasible instance"),
    }
    Ok(())
}

fn criterion_9() -> Outcome {
    let mut r = rng(SEED ^ 9);
    for i in 0..SEMI_INSTANCES {
        let (s, t) = (r.gen_range(1..=4), r.gen_range(1..=4));
        let b = random_bipartite(&mut r, s, t);
        let m = b.graph.m();
        let n = b.graph.n;
        let within = |z: &Vec<i64>, nb: &NodeBounds| {
            bip_degrees(&b, z).iter().enumerate().all(|(v, &x)| le(x, nb.upper[v]) && ge(x, nb.lower[v]))
        };
        let spec = |mt: &[i64]| subsets_of_edges(m).filter(|z| b.t_nodes().iter().all(|&t| bip_degrees(&b, z)[t] == mt[t])).collect::<Vec<_>>();

        let units = spec(&vec![1; n]);
        let res = ok(semimatching_decmin(&b, &SemiVariant::Unit), "unit")?;
        let load = |d: &IntVector| d.iter().map(|&x| x * (x + 1)).sum::<i64>();
        let best = units.iter().map(|z| load(&s_part(&b, &bip_degrees(&b, z)))).min().unwrap();
        ensure!(load(&res.degrees) == best, "instance {i}: unit load {} vs {best}", load(&res.degrees));
        semi_check(&b, &SemiVariant::Unit, &units, &format!("instance {i} unit"))?;

        let m_t: Vec<i64> = (0..n).map(|_| r.gen_range(0..=2)).collect();
        semi_check(&b, &SemiVariant::Spec { m_t: m_t.clone() }, &spec(&m_t), &format!("instance {i} spec"))?;

        let bounds = random_node_bounds(&mut r, &b);
        let ok_b: Vec<Vec<i64>> = subsets_of_edges(m).filter(|z| within(z, &bounds)).collect();
        let top = ok_b.iter().map(|z| z.iter().sum::<i64>()).max();
        let maxed: Vec<Vec<i64>> = ok_b.iter().filter(|z| Some(z.iter().sum::<i64>()) == top).cloned().collect();
        semi_check(&b, &SemiVariant::Bounded { bounds: bounds.clone() }, &maxed, &format!("instance {i} bounded"))?;

        let gamma = r.gen_range(0..=m as i64);
        let sized: Vec<Vec<i64>> = ok_b.iter().filter(|z| z.iter().sum::<i64>() == gamma).cloned().collect();
        let fixed = SemiVariant::FixedSize { gamma, bounds };
        semi_check(&b, &fixed, &sized, &format!("instance {i} fixed-size"))?;

        let cost: Vec<i64> = (0..m).map(|_| r.gen_range(-2..=4)).collect();
        let mc = SemiVariant::MinCost { cost, base: Box::new(fixed) };
        semi_check(&b, &mc, &sized, &format!("instance {i} min-cost"))?;
    }
    Ok(format!("{SEMI_INSTANCES} bipartite instances, five variants each"))
}

fn main() -> ExitCode {
    let criteria: [(&str, fn() -> Outcome); 9] = [
        ("equivalence suite", criterion_1),
        ("newton-dinkelbach contract", criterion_2),
        ("canonical invariance", criterion_3),
        ("mixed-graph reproduction", criterion_4),
        ("cheapest dec-min structure", criterion_5),
        ("strong-orientation suite", criterion_6),
        ("capacitated scalability", criterion_7),
        ("flow suite", criterion_8),
        ("semi-matching suite", criterion_9),
    ];
    let mut failed = 0;
    for (i, (name, run)) in criteria.iter().enumerate() {
        match run() {
            Ok(detail) => println!("criterion {} {name}: PASS ({detail})", i + 1),
            Err(why) => {
                failed += 1;
                println!("criterion {} {name}: FAIL ({why})", i + 1);
            }
        }
    }
    println!("{} passed, {failed} failed", criteria.len() - failed);
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
