use std::path::Path;
use std::sync::Arc;

use decmin_core::mconvex::{
    box_intersect, canonical_chain, decmin_strong, handle_from_supermodular, newton_dinkelbach_beta1, BoxedFunction,
};
use decmin_core::netflow::{feasible_m_flow, megiddo_discrete, DigraphFile, FlowOutcome};
use decmin_core::oracle::{check_equivalences, enumerate_base_elements, enumerate_orientations, EnumerationReport, Predicate, VectorKind};
use decmin_core::orient::*;
use decmin_core::setfn::complement_function;
use decmin_core::{
    BoxBounds, CanonicalDecomposition, Class, Error, ExplicitSetFunction, IntVector, Kind, MConvexSet, SetFunction, SharedFn,
    Subset,
};
use serde_json::{json, Value};

use crate::report::{decomposition_json, join, sets, CliError, Report};
use crate::{OrientArgs, SemiArgs, Variant, VerifyArgs};

fn read(path: &Path) -> Result<String, CliError> {
    std::fs::read_to_string(path).map_err(|source| CliError::Io { path: path.to_path_buf(), source })
}

fn load_bounds(path: Option<&Path>, n: usize) -> Result<Option<NodeBounds>, CliError> {
    path.map(|p| Ok(parse_bounds(&read(p)?, n)?)).transpose()
}

/// The graph with parallel copies spelled out, costs copied along.
fn expanded(file: &GraphFile) -> (UndirGraph, Vec<(i64, i64)>) {
    let g = &file.graph;
    let cost = (0..g.m()).flat_map(|e| std::iter::repeat_n(file.cost[e], g.multiplicity(e) as usize)).collect();
    (g.expanded(), cost)
}

fn subset_of(nodes: &[usize], n: usize) -> Result<Subset, CliError> {
    if let Some(&v) = nodes.iter().find(|&&v| v >= n || v >= 64) {
        return Err(CliError::Usage(format!("node {v} out of range")));
    }
    Ok(Subset::from_elems(nodes.iter().copied()))
}

/// Loads a set-function table, switching a submodular one to its supermodular complement.
fn load_function(path: &Path) -> Result<SharedFn, CliError> {
    let raw = ExplicitSetFunction::from_json(&read(path)?)?;
    Ok(match raw.kind() {
        Kind::Supermodular => Arc::new(raw),
        Kind::Submodular => Arc::new(complement_function(Arc::new(raw))?),
    })
}

/// Handle for `B'(p)`, optionally cut by a box, and the function describing it.
fn function_handle(p: &SharedFn, b: Option<&BoxBounds>) -> Result<(Box<dyn MConvexSet>, SharedFn), CliError> {
    let h = Arc::new(handle_from_supermodular(p.clone())?);
    Ok(match b {
        None => (Box::new(h), p.clone()),
        Some(b) => (Box::new(box_intersect(h, b.clone())?), Arc::new(BoxedFunction::new(p.clone(), b.clone())?)),
    })
}

pub fn decmin(pfile: &Path, boxfile: Option<&Path>) -> Result<Report, CliError> {
    let p = load_function(pfile)?;
    let b = load_bounds(boxfile, p.n())?;
    let (h, f) = function_handle(&p, b.as_ref())?;
    let (m, d) = decmin_strong(h.as_ref())?;
    let mut r = Report::new(Value::Null);
    r.line(format!("vector: {}", join(&m)));
    r.decomposition(&d);
    let mut out = json!({ "vector": m, "decomposition": decomposition_json(&d) });
    if f.class() == Class::Fully {
        let nd = newton_dinkelbach_beta1(f.as_ref())?;
        r.line(format!("beta1: {}", nd.beta1));
        for (j, s) in nd.trace.iter().enumerate() {
            r.line(format!("step {j}: mu = {}, |X| = {}, X = {}, value = {}", s.mu, s.set.len(), s.set, s.value));
        }
        let trace: Vec<Value> =
            nd.trace.iter().map(|s| json!({ "mu": s.mu, "size": s.set.len(), "set": s.set.to_vec(), "value": s.value })).collect();
        out["beta1"] = json!(nd.beta1);
        out["trace"] = Value::Array(trace);
    } else {
        r.line("trace: skipped (function is not fully supermodular)");
    }
    r.json = out;
    Ok(r)
}

fn arcs_out(r: &mut Report, g: &UndirGraph, o: &Orientation) -> Value {
    let arcs = o.arcs(g);
    r.line("arcs:");
    for &(u, v) in &arcs {
        r.line(format!("  {u} -> {v}"));
    }
    let deg = o.indegree(g);
    r.line(format!("indegree: {}", join(&deg)));
    json!({ "arcs": arcs, "indegree": deg })
}

fn kec_canonical(g: &UndirGraph, k: i64, l: i64, root: usize, b: Option<&NodeBounds>, m: &IntVector) -> Result<CanonicalDecomposition, CliError> {
    let p: SharedFn = Arc::new(KecFunction::new(g.clone(), k, l, root)?);
    let (h, _) = function_handle(&p, b)?;
    Ok(canonical_chain(h.as_ref(), m)?)
}

pub fn orient(a: &OrientArgs) -> Result<Report, CliError> {
    let file = parse_graph(&read(&a.graph)?)?;
    let n = file.graph.n;
    let bounds = load_bounds(a.bounds.as_deref(), n)?;
    let mut r = Report::new(Value::Null);

    if a.capacitated {
        let g = &file.graph;
        let res = capacitated_decmin_orientation(g, bounds.as_ref())?;
        r.line("edges (u v: toward v / toward u):");
        for (e, &(u, v)) in g.edges.iter().enumerate() {
            r.line(format!("  {u} {v}: {} / {}", res.z[e], g.multiplicity(e) - res.z[e]));
        }
        r.line(format!("indegree: {}", join(&res.indegree)));
        r.decomposition(&res.decomposition);
        r.json = serde_json::to_value(&res).expect("result serializes");
        return Ok(r);
    }

    let (g, cost) = expanded(&file);
    if a.cheapest {
        let b = bounds.unwrap_or_else(|| NodeBounds::unbounded(n));
        let res = cheapest_decmin_orientation(&g, &b, &cost)?;
        let mut out = arcs_out(&mut r, &g, &res.orientation);
        r.line(format!("cost: {}", res.cost));
        r.decomposition(&res.decomposition);
        r.line(format!("z chain: {}", sets(&res.z_chain)));
        let forced: Vec<(usize, usize)> = res.forced.iter().map(|&(e, _)| res.orientation.arc(&g, e)).collect();
        let listed: Vec<String> = forced.iter().map(|(u, v)| format!("{u}->{v}")).collect();
        r.line(format!("forced arcs: {}", if listed.is_empty() { "none".to_string() } else { listed.join(" ") }));
        out["cost"] = json!(res.cost);
        out["decomposition"] = decomposition_json(&res.decomposition);
        out["z_chain"] = json!(res.z_chain.iter().map(|z| z.to_vec()).collect::<Vec<_>>());
        out["forced"] = json!(forced);
        r.json = out;
        return Ok(r);
    }

    let (o, decomp) = match (a.strong, a.k, a.l) {
        (true, _, _) => {
            let o = match &bounds {
                None => decmin_strong_orientation(&g)?,
                Some(b) => decmin_kec_orientation(&g, 1, 1, 0, Some(b))?,
            };
            let d = if a.canonical { Some(kec_canonical(&g, 1, 1, 0, bounds.as_ref(), &o.indegree(&g))?) } else { None };
            (o, d)
        }
        (false, Some(k), Some(l)) => {
            if a.root >= n {
                return Err(CliError::Usage(format!("root {} out of range", a.root)));
            }
            let o = decmin_kec_orientation(&g, k, l, a.root, bounds.as_ref())?;
            let d = if a.canonical { Some(kec_canonical(&g, k, l, a.root, bounds.as_ref(), &o.indegree(&g))?) } else { None };
            (o, d)
        }
        _ => {
            let (o, d) = orientation_canonical(&g, bounds.as_ref())?;
            (o, a.canonical.then_some(d))
        }
    };
    let mut out = arcs_out(&mut r, &g, &o);
    if a.cost {
        let c = o.cost(&cost);
        r.line(format!("cost: {c}"));
        out["cost"] = json!(c);
    }
    if let Some(d) = decomp {
        r.decomposition(&d);
        out["decomposition"] = decomposition_json(&d);
    }
    r.json = out;
    Ok(r)
}

pub fn semimatch(a: &SemiArgs) -> Result<Report, CliError> {
    let file = parse_graph(&read(&a.graph)?)?;
    let n = file.graph.n;
    let capacitated = matches!(a.variant, Variant::Capacitated);
    let (g, cost) = if capacitated { (file.graph.clone(), file.cost.clone()) } else { expanded(&file) };
    let side = (0..n).map(|v| a.s_nodes.contains(&v)).collect();
    let b = Bipartite::new(g, side)?;
    let bounds = || -> Result<NodeBounds, CliError> { Ok(load_bounds(a.bounds.as_deref(), n)?.unwrap_or_else(|| NodeBounds::unbounded(n))) };
    let gamma = || a.gamma.ok_or_else(|| CliError::Usage("--gamma is required for this variant".into()));
    let mut variant = match a.variant {
        Variant::Unit => SemiVariant::Unit,
        Variant::Spec => {
            let m_t = a.mt.clone().ok_or_else(|| CliError::Usage("--mt is required for the spec variant".into()))?;
            SemiVariant::Spec { m_t }
        }
        Variant::Bounded => SemiVariant::Bounded { bounds: bounds()? },
        Variant::FixedSize => SemiVariant::FixedSize { gamma: gamma()?, bounds: bounds()? },
        Variant::Capacitated => {
            let cap = (0..b.graph.m()).map(|e| b.graph.multiplicity(e)).collect();
            SemiVariant::Capacitated { gamma: gamma()?, cap, bounds: bounds()? }
        }
    };
    if a.min_cost {
        variant = SemiVariant::MinCost { cost: cost.iter().map(|c| c.0).collect(), base: Box::new(variant) };
    }
    let res = semimatching_decmin(&b, &variant)?;
    let mut r = Report::new(serde_json::to_value(&res).expect("result serializes"));
    r.line("edges:");
    for (e, &k) in res.z.iter().enumerate() {
        if k > 0 {
            let (s, t) = b.ends(e);
            r.line(if k == 1 { format!("  {s} - {t}") } else { format!("  {s} - {t} x{k}") });
        }
    }
    let degs: Vec<String> = res.s_nodes.iter().zip(res.degrees.iter()).map(|(s, d)| format!("{s}:{d}")).collect();
    r.line(format!("degrees: {}", degs.join(" ")));
    r.line(format!("square sum: {}", res.square_sum));
    if let Some(c) = res.cost {
        r.line(format!("cost: {c}"));
    }
    let blocks: Vec<Subset> =
        res.decomposition.partition.iter().map(|p| Subset::from_elems(p.iter().map(|i| res.s_nodes[i]))).collect();
    r.line(format!("values: {}", join(&res.decomposition.values)));
    r.line(format!("blocks: {}", sets(&blocks)));
    Ok(r)
}

pub fn flow_feasible(path: &Path, m: &[i64]) -> Result<Report, CliError> {
    let f = DigraphFile::parse(&read(path)?)?;
    match feasible_m_flow(&f.digraph, &f.bounds, m)? {
        FlowOutcome::Feasible(z) => {
            let mut r = Report::new(json!({ "flow": z.0 }));
            r.line("flow:");
            for (&(t, h), x) in f.digraph.arcs.iter().zip(&z.0) {
                r.line(format!("  {t} -> {h}: {x}"));
            }
            Ok(r)
        }
        FlowOutcome::Violated { set, excess } => {
            Err(Error::infeasible_nodes(format!("no flow with this net in-flow; the set misses it by {excess}"), set).into())
        }
    }
}

pub fn megiddo(path: &Path, sources: &[usize], sinks: &[usize], amount: i64) -> Result<Report, CliError> {
    let f = DigraphFile::parse(&read(path)?)?;
    let n = f.digraph.n;
    let mut cap = Vec::with_capacity(f.digraph.arcs.len());
    for (i, (lo, hi)) in f.bounds.lower.iter().zip(&f.bounds.upper).enumerate() {
        match (lo.finite(), hi.finite()) {
            (Some(0), Some(c)) => cap.push(c),
            _ => return Err(CliError::Usage(format!("arc {i}: Megiddo flows need bounds [0, c] with finite c"))),
        }
    }
    let res = megiddo_discrete(&f.digraph, &cap, subset_of(sources, n)?, subset_of(sinks, n)?, amount)?;
    let mut r = Report::new(json!({ "restriction": res.restriction, "flow": res.flow.0 }));
    r.line(format!("net in-flow on sources: {}", join(&res.restriction)));
    r.line("flow:");
    for (&(t, h), x) in f.digraph.arcs.iter().zip(&res.flow.0) {
        r.line(format!("  {t} -> {h}: {x}"));
    }
    Ok(r)
}

fn vectors_line(r: &mut Report, label: &str, vs: &[IntVector]) {
    let parts: Vec<String> = vs.iter().map(|v| format!("({})", v.iter().map(|x| x.to_string()).collect::<Vec<_>>().join(","))).collect();
    r.line(format!("{label}: {}", parts.join(" ")));
}

fn report_sets(r: &mut Report, rep: &EnumerationReport) {
    r.line(format!("feasible: {}", rep.feasible_count));
    vectors_line(r, "vectors", &rep.vectors);
    vectors_line(r, "dec-min", &rep.decmin_set);
    vectors_line(r, "inc-max", &rep.incmax_set);
}

/// Checks a solver result against the enumeration; exit code 1 on any mismatch.
fn verdict(r: &mut Report, rep: &EnumerationReport, m: &IntVector, d: Option<&CanonicalDecomposition>) -> Value {
    let member = rep.decmin_set.contains(m);
    let equiv = check_equivalences(rep);
    let canon = d.map(|d| Some(d) == rep.canonical_from_enumeration.as_ref());
    vectors_line(r, "solver", std::slice::from_ref(m));
    r.line(format!("solver output is dec-min: {}", if member { "yes" } else { "NO" }));
    r.line(format!("dec-min = inc-max = square-sum-min: {}", if equiv { "yes" } else { "NO" }));
    if let Some(c) = canon {
        r.line(format!("canonical decomposition matches enumeration: {}", if c { "yes" } else { "NO" }));
    }
    let ok = member && equiv && canon.unwrap_or(true);
    if !ok {
        r.code = 1;
    }
    json!({ "solver": m, "member": member, "equivalent": equiv, "canonical_matches": canon, "ok": ok })
}

pub fn verify(a: &VerifyArgs) -> Result<Report, CliError> {
    let mut r = Report::new(Value::Null);
    if a.instance.extension().is_some_and(|e| e == "json") {
        let p = load_function(&a.instance)?;
        let given = load_bounds(a.boxfile.as_deref(), p.n())?;
        let (h, _) = function_handle(&p, given.as_ref())?;
        let (m, d) = decmin_strong(h.as_ref())?;
        // every dec-min element lies in the small box, so one unit around it loses none
        let b = match given {
            Some(b) => b,
            None => {
                let lo: Vec<i64> = d.f_star.iter().map(|x| x - 1).collect();
                let hi: Vec<i64> = d.g_star.iter().map(|x| x + 1).collect();
                BoxBounds::finite(&lo, &hi)?
            }
        };
        let rep = enumerate_base_elements(p.as_ref(), &b)?;
        report_sets(&mut r, &rep);
        let v = verdict(&mut r, &rep, &m, Some(&d));
        r.json = json!({ "report": serde_json::from_str::<Value>(&rep.to_json()).expect("report json"), "verdict": v });
        return Ok(r);
    }

    let pred = if a.strong { Predicate::Strong } else { Predicate::None };
    if a.mixed {
        let mg = parse_mixed(&read(&a.instance)?)?;
        let bounds = load_bounds(a.bounds.as_deref(), mg.n)?;
        let kind = if a.free_part { VectorKind::FreePart } else { VectorKind::Total };
        let rep = enumerate_orientations(&mg, bounds.as_ref(), pred, kind)?;
        report_sets(&mut r, &rep);
        let equiv = check_equivalences(&rep);
        r.line(if equiv { "dec-min = inc-max = square-sum-min" } else { "dec-min ≠ inc-max (expected for mixed)" });
        r.json = json!({ "report": serde_json::from_str::<Value>(&rep.to_json()).expect("report json"), "equivalent": equiv });
        return Ok(r);
    }

    let file = parse_graph(&read(&a.instance)?)?;
    let (g, _) = expanded(&file);
    let bounds = load_bounds(a.bounds.as_deref(), g.n)?;
    let rep = enumerate_orientations(&MixedGraph::from(&g), bounds.as_ref(), pred, VectorKind::Total)?;
    report_sets(&mut r, &rep);
    let (m, d) = if a.strong {
        let o = decmin_kec_orientation(&g, 1, 1, 0, bounds.as_ref())?;
        let m = o.indegree(&g);
        let d = kec_canonical(&g, 1, 1, 0, bounds.as_ref(), &m)?;
        (m, d)
    } else {
        let (o, d) = orientation_canonical(&g, bounds.as_ref())?;
        (o.indegree(&g), d)
    };
    let v = verdict(&mut r, &rep, &m, Some(&d));
    r.json = json!({ "report": serde_json::from_str::<Value>(&rep.to_json()).expect("report json"), "verdict": v });
    Ok(r)
}
