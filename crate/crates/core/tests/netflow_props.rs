mod common;

use std::cmp::Ordering;
use std::collections::BTreeSet;

use common::*;
use decmin_core::ext::Finite;
use decmin_core::mconvex::{decmin_strong, inc_compare};
use decmin_core::netflow::*;
use decmin_core::oracle::{enumerate_flows, EnumerationReport};
use decmin_core::{IntVector, Subset};
use proptest::prelude::*;
use rand::rngs::StdRng;
use rand::Rng;

fn digraph(r: &mut StdRng) -> (Digraph, ArcBounds) {
    let n = r.gen_range(2..=5);
    let m = r.gen_range(1..=7);
    let d = random_digraph(r, n, m);
    let b = random_arc_bounds(r, m);
    (d, b)
}

/// `ϱ_f(X) − δ_g(X) − m(X)`; positive means `X` blocks every m-flow.
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

proptest! {
    #![proptest_config(ProptestConfig::with_cases(96))]

    #[test]
    fn feasible_m_flow_matches_scan(seed in any::<u64>()) {
        let mut r = rng(seed);
        let (d, b) = digraph(&mut r);
        let mut m: Vec<i64> = (0..d.n).map(|_| r.gen_range(-3..=3)).collect();
        let s: i64 = m.iter().sum();
        m[0] -= s;
        let worst = Subset::full(d.n).subsets().map(|x| deficit(&d, &b, &m, x)).max().unwrap();
        match feasible_m_flow(&d, &b, &m).unwrap() {
            FlowOutcome::Feasible(z) => {
                prop_assert!(worst <= 0);
                prop_assert!(b.admits(&z.0));
                prop_assert_eq!(d.net_inflow(&z.0), m);
            }
            FlowOutcome::Violated { set, excess } => {
                prop_assert!(worst > 0);
                let x = Subset::from_elems(set.iter().copied());
                prop_assert_eq!(excess, Finite(deficit(&d, &b, &m, x)));
                prop_assert_eq!(excess, Finite(worst));
            }
        }
    }

    #[test]
    fn netinflow_decmin_matches_enumeration(seed in any::<u64>()) {
        let mut r = rng(seed);
        let (d, b) = digraph(&mut r);
        let flows = enumerate_flows(&d, &b).unwrap();
        let vectors: BTreeSet<IntVector> = flows.iter().map(|z| IntVector(d.net_inflow(&z.0))).collect();
        match netinflow_handle(&d, &b) {
            Ok(h) => {
                prop_assert!(!vectors.is_empty());
                let rep = EnumerationReport::from_vectors(flows.len() as u64, vectors).unwrap();
                let (x, decomp) = decmin_strong(&h).unwrap();
                prop_assert!(rep.decmin_set.contains(&x));
                prop_assert_eq!(Some(decomp), rep.canonical_from_enumeration);
                let z = h.realize(&x).unwrap().unwrap();
                prop_assert_eq!(d.net_inflow(&z[..d.arcs.len()]), x.0);
            }
            Err(_) => prop_assert!(vectors.is_empty()),
        }
    }

    #[test]
    fn min_cost_circulation_is_cheapest(seed in any::<u64>()) {
        let mut r = rng(seed);
        let (d, b) = digraph(&mut r);
        let cost: Vec<i64> = (0..d.arcs.len()).map(|_| r.gen_range(-3..=3)).collect();
        let dot = |z: &[i64]| z.iter().zip(&cost).map(|(a, c)| a * c).sum::<i64>();
        let best = enumerate_flows(&d, &b)
            .unwrap()
            .iter()
            .filter(|z| d.net_inflow(&z.0).iter().all(|&v| v == 0))
            .map(|z| dot(&z.0))
            .min();
        match min_cost_circulation(&d, &b, &cost) {
            Ok(z) => {
                prop_assert!(b.admits(&z.0));
                prop_assert!(d.net_inflow(&z.0).iter().all(|&v| v == 0));
                prop_assert_eq!(Some(dot(&z.0)), best);
            }
            Err(_) => prop_assert_eq!(best, None),
        }
    }

    #[test]
    fn megiddo_is_incmax(seed in any::<u64>()) {
        let mut r = rng(seed);
        let n = r.gen_range(3..=5);
        let m = r.gen_range(2..=7);
        let d = random_digraph(&mut r, n, m);
        let cap: Vec<i64> = (0..d.arcs.len()).map(|_| r.gen_range(0..=2)).collect();
        let k = r.gen_range(1..n);
        let s = Subset::from_elems(0..k);
        let t = Subset::from_elems((k..n).filter(|_| r.gen_bool(0.7)).chain([n - 1]));
        let bounds = ArcBounds::finite(&vec![0; cap.len()], &cap).unwrap();
        // flows of value M: conservation off S ∪ T, S only sends, T only receives
        let mut by_value: Vec<Vec<IntVector>> = Vec::new();
        for z in enumerate_flows(&d, &bounds).unwrap() {
            let psi = d.net_inflow(&z.0);
            let ok = (0..n).all(|v| {
                if s.contains(v) { psi[v] <= 0 } else if t.contains(v) { psi[v] >= 0 } else { psi[v] == 0 }
            });
            if !ok {
                continue;
            }
            let value = t.iter().map(|v| psi[v]).sum::<i64>() as usize;
            if by_value.len() <= value {
                by_value.resize(value + 1, Vec::new());
            }
            by_value[value].push(IntVector(s.iter().map(|v| psi[v]).collect()));
        }
        let amount = r.gen_range(0..=by_value.len()) as i64;
        match megiddo_discrete(&d, &cap, s, t, amount) {
            Ok(res) => {
                let all = &by_value[amount as usize];
                prop_assert!(all.contains(&res.restriction));
                for x in all {
                    prop_assert_ne!(inc_compare(x, &res.restriction).unwrap(), Ordering::Greater);
                }
                let psi = d.net_inflow(&res.flow.0);
                prop_assert_eq!(t.iter().map(|v| psi[v]).sum::<i64>(), amount);
                prop_assert!(bounds.admits(&res.flow.0));
            }
            Err(_) => prop_assert_eq!(amount as usize, by_value.len()),
        }
    }
}

#[test]
fn max_flow_equals_min_cut() {
    let mut r = rng(3);
    for _ in 0..100 {
        let n = r.gen_range(2..=5);
        let m = r.gen_range(1..=8);
        let d = random_digraph(&mut r, n, m);
        let cap: Vec<i64> = (0..d.arcs.len()).map(|_| r.gen_range(0..=3)).collect();
        let mf = max_flow_min_cut(&d, &cap, 0, n - 1).unwrap();
        let best_cut = Subset::full(n)
            .subsets()
            .filter(|x| x.contains(0) && !x.contains(n - 1))
            .map(|x| d.arcs.iter().zip(&cap).filter(|(&(a, b), _)| x.contains(a) && !x.contains(b)).map(|(_, &c)| c).sum::<i64>())
            .min()
            .unwrap();
        assert_eq!(mf.value, best_cut);
    }
}
