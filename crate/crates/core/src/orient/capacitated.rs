use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::mconvex::{box_intersect, decmin_strong, CanonicalDecomposition, IntVector, SharedHandle};
use crate::netflow::{netinflow_handle_translated, ArcBounds, Digraph};

use super::{check_bounds, NodeBounds, UndirGraph};

/// `z[e]` units of edge `e = (u,v)` point toward `v`, the other `ℓ(e) − z[e]` toward `u`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CapacitatedOrientation {
    pub z: Vec<i64>,
    pub indegree: IntVector,
    pub decomposition: CanonicalDecomposition,
}

/// Dec-min in-degree vector over all ways of splitting each edge's multiplicity.
pub fn capacitated_decmin_orientation(g: &UndirGraph, b: Option<&NodeBounds>) -> Result<CapacitatedOrientation> {
    if g.n == 0 {
        return Err(Error::Invalid("empty graph".into()));
    }
    let caps: Vec<i64> = (0..g.m()).map(|e| g.multiplicity(e)).collect();
    let d = Digraph::new(g.n, g.edges.clone())?;
    let bounds = ArcBounds::finite(&vec![0; g.m()], &caps)?;
    let mut offset = vec![0i64; g.n];
    for (e, &(u, _)) in g.edges.iter().enumerate() {
        offset[u] = offset[u].checked_add(caps[e]).ok_or(Error::Overflow)?;
    }
    let face = netinflow_handle_translated(&d, &bounds, offset)?;
    let (x, decomposition) = match b {
        Some(b) => {
            check_bounds(g, b)?;
            let inner: SharedHandle = Arc::new(face.clone());
            let h = box_intersect(inner, b.clone())?;
            decmin_strong(&h)?
        }
        None => decmin_strong(&face)?,
    };
    let flow = face
        .realize(&x)?
        .ok_or_else(|| Error::infeasible_note("dec-min vector could not be realized"))?;
    Ok(CapacitatedOrientation { z: flow[..g.m()].to_vec(), indegree: x, decomposition })
}
