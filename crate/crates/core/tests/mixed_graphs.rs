mod common;

use common::*;
use decmin_core::oracle::{check_equivalences, enumerate_orientations, Predicate, VectorKind};
use decmin_core::IntVector;

fn v(x: &[i64]) -> IntVector {
    IntVector(x.to_vec())
}

#[test]
fn total_vectors_split() {
    let r = enumerate_orientations(&mixed_total(), None, Predicate::Strong, VectorKind::Total).unwrap();
    assert_eq!(r.feasible_count, 2);
    assert_eq!(r.vectors, vec![v(&[2, 2, 2, 4]), v(&[3, 1, 3, 3])]);
    assert_eq!(r.decmin_set, vec![v(&[3, 1, 3, 3])]);
    assert_eq!(r.incmax_set, vec![v(&[2, 2, 2, 4])]);
    assert!(!check_equivalences(&r));
}

#[test]
fn free_part_vectors_split() {
    let r = enumerate_orientations(&mixed_free(), None, Predicate::Strong, VectorKind::FreePart).unwrap();
    // each parallel pair must be oriented both ways
    assert_eq!(r.feasible_count, 32);
    assert_eq!(r.vectors, vec![v(&[2, 2, 0, 2, 1, 1, 1, 1]), v(&[3, 1, 1, 1, 1, 1, 1, 1])]);
    assert_eq!(r.decmin_set, vec![v(&[2, 2, 0, 2, 1, 1, 1, 1])]);
    assert_eq!(r.incmax_set, vec![v(&[3, 1, 1, 1, 1, 1, 1, 1])]);
    assert!(!check_equivalences(&r));
}

#[test]
fn undirected_graphs_agree() {
    // without fixed arcs the three notions coincide
    let mut r = rng(5);
    for _ in 0..30 {
        let g = small_graph(&mut r, 6);
        let rep = enumerate_orientations(&(&g).into(), None, Predicate::None, VectorKind::Total).unwrap();
        assert!(check_equivalences(&rep));
    }
}
