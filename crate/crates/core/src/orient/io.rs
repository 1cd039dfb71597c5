use crate::error::Result;
use crate::ext::{ExtInt, NegInf, PosInf};
use crate::netflow::{lines_of, parse_err, parse_field, parse_header};

use super::{MixedGraph, NodeBounds, UndirGraph};

/// Parsed undirected graph file: `n m`, then `u v [mult] [cost_uv cost_vu]` per edge.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GraphFile {
    pub graph: UndirGraph,
    /// `(c(u→v), c(v→u))` per edge; zero when absent.
    pub cost: Vec<(i64, i64)>,
}

fn endpoints(ln: usize, f: &[&str], n: usize) -> Result<(usize, usize)> {
    let (u, v): (usize, usize) = (parse_field(ln, f[0], "node")?, parse_field(ln, f[1], "node")?);
    if u >= n || v >= n || u == v {
        return Err(parse_err(ln, "endpoints out of range or equal"));
    }
    Ok((u, v))
}

pub fn parse_graph(text: &str) -> Result<GraphFile> {
    let mut lines = lines_of(text);
    let (n, m) = parse_header(&mut lines)?;
    let (mut edges, mut mult, mut cost) = (Vec::new(), Vec::new(), Vec::new());
    for (ln, f) in lines.by_ref().take(m) {
        if !(2..=5).contains(&f.len()) {
            return Err(parse_err(ln, "expected `u v [mult] [cost_uv cost_vu]`"));
        }
        edges.push(endpoints(ln, &f, n)?);
        let l: i64 = if f.len() % 2 == 1 { parse_field(ln, f[2], "multiplicity")? } else { 1 };
        if l < 1 {
            return Err(parse_err(ln, "multiplicity must be positive"));
        }
        mult.push(l);
        cost.push(if f.len() >= 4 {
            let k = f.len() - 2;
            (parse_field(ln, f[k], "cost")?, parse_field(ln, f[k + 1], "cost")?)
        } else {
            (0, 0)
        });
    }
    if edges.len() != m {
        return Err(parse_err(text.lines().count(), format!("expected {m} edges, found {}", edges.len())));
    }
    if let Some((ln, _)) = lines.next() {
        return Err(parse_err(ln, "trailing content after the edge list"));
    }
    let mut graph = UndirGraph::new(n, edges)?;
    if mult.iter().any(|&l| l != 1) {
        graph = graph.with_mult(mult)?;
    }
    Ok(GraphFile { graph, cost })
}

/// Mixed graph file: `n m`, then `u v U|D [mult]`; `D` is the arc `u → v`.
pub fn parse_mixed(text: &str) -> Result<MixedGraph> {
    let mut lines = lines_of(text);
    let (n, m) = parse_header(&mut lines)?;
    let (mut edges, mut arcs) = (Vec::new(), Vec::new());
    let mut seen = 0;
    for (ln, f) in lines.by_ref().take(m) {
        seen += 1;
        if !(3..=4).contains(&f.len()) {
            return Err(parse_err(ln, "expected `u v U|D [mult]`"));
        }
        let uv = endpoints(ln, &f, n)?;
        let l: usize = if f.len() == 4 { parse_field(ln, f[3], "multiplicity")? } else { 1 };
        let target = match f[2] {
            "U" | "u" => &mut edges,
            "D" | "d" => &mut arcs,
            other => return Err(parse_err(ln, format!("direction must be U or D, got '{other}'"))),
        };
        target.extend(std::iter::repeat_n(uv, l));
    }
    if seen != m {
        return Err(parse_err(text.lines().count(), format!("expected {m} lines, found {seen}")));
    }
    if let Some((ln, _)) = lines.next() {
        return Err(parse_err(ln, "trailing content after the edge list"));
    }
    MixedGraph::new(n, edges, arcs)
}

/// Bounds file: `v f g` per line; unlisted nodes are unbounded.
pub fn parse_bounds(text: &str, n: usize) -> Result<NodeBounds> {
    let mut lower: Vec<ExtInt> = vec![NegInf; n];
    let mut upper: Vec<ExtInt> = vec![PosInf; n];
    for (ln, f) in lines_of(text) {
        if f.len() != 3 {
            return Err(parse_err(ln, "expected `v f g`"));
        }
        let v: usize = parse_field(ln, f[0], "node")?;
        if v >= n {
            return Err(parse_err(ln, format!("node {v} out of range")));
        }
        lower[v] = parse_field(ln, f[1], "lower bound")?;
        upper[v] = parse_field(ln, f[2], "upper bound")?;
        if lower[v] > upper[v] || lower[v] == PosInf || upper[v] == NegInf {
            return Err(parse_err(ln, "empty bound interval"));
        }
    }
    NodeBounds::new(lower, upper)
}
