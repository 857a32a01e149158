//! Quiver presentation checks: arrow multiplicities against irreducible
//! morphism counts, relation verification under the canonical morphisms,
//! and the path algebra dimension against End(T).

use chainmf_core::collection::{hom_tensor, ChainTower};
use chainmf_core::quiver::{
    build_quiver, export_dot, export_json, path_algebra_dim, verify_quiver, Relation,
};

fn verified_quiver(exps: &[u32]) -> (usize, usize) {
    let tower = ChainTower::new(exps).unwrap();
    let c = tower.build_collection();
    let tensor = hom_tensor(&c).unwrap();
    let (q, rels) = build_quiver(exps).unwrap();
    let rep = verify_quiver(&c, &tensor, &q, &rels).unwrap();
    assert!(
        rep.passed,
        "{exps:?}: {}\nviolations: {:?}\nnotes: {:?}",
        rep.summary(),
        rep.violations,
        rep.notes
    );
    (
        path_algebra_dim(&q, &rels).unwrap(),
        tensor.end_algebra_dim(),
    )
}

#[test]
fn quiver_3_verified() {
    let (dim, end) = verified_quiver(&[3]);
    assert_eq!(dim, 3);
    assert_eq!(end, 3);
}

#[test]
fn quiver_4_verified() {
    let (dim, end) = verified_quiver(&[4]);
    assert_eq!(dim, 5);
    assert_eq!(end, 5);
}

#[test]
fn quiver_2_2_verified() {
    let (dim, end) = verified_quiver(&[2, 2]);
    assert_eq!(dim, 5);
    assert_eq!(end, 5);
}

#[test]
fn dropping_a_relation_is_detected() {
    // Removing a null relation inflates dim kQ/I, and verify_quiver says so.
    let exps = [4u32];
    let tower = ChainTower::new(&exps).unwrap();
    let c = tower.build_collection();
    let tensor = hom_tensor(&c).unwrap();
    let (q, mut rels) = build_quiver(&exps).unwrap();
    rels.relations.clear();
    let rep = verify_quiver(&c, &tensor, &q, &rels).unwrap();
    assert!(!rep.passed);
    assert!(rep.notes.iter().any(|n| n.contains("dim kQ/I")));
}

#[test]
fn corrupted_collection_fails_semiorthogonality() {
    use chainmf_core::collection::verify_semiorthogonal;
    let tower = ChainTower::new(&[3]).unwrap();
    let mut c = tower.build_collection();
    // Swap the two objects: the forward morphism now points backwards.
    let top = c.levels_mut().last_mut().unwrap();
    top.swap(0, 1);
    let tensor = hom_tensor(&c).unwrap();
    let rep = verify_semiorthogonal(&c, &tensor);
    assert!(!rep.passed);
    assert!(!rep.violations.is_empty());
}

#[test]
fn exports_are_stable() {
    let (q, rels) = build_quiver(&[2, 2]).unwrap();
    let dot = export_dot(&q);
    assert_eq!(dot, export_dot(&q));
    let json = export_json(&q, &rels);
    assert_eq!(json, export_json(&q, &rels));
    assert!(json.contains("\"schema_version\": 1"));
}

#[test]
fn relation_families_for_2_3() {
    // a = (2,3): level-2 lambda arrows exist (a_2 = 3), sigma_0 and theta.
    let (q, rels) = build_quiver(&[2, 3]).unwrap();
    assert_eq!(q.vertices.len(), 4);
    // psi strata: psi_0, psi_1 each with one vertex; phi_0, phi_1.
    let nulls = rels
        .relations
        .iter()
        .filter(|r| matches!(r, Relation::Null(_)))
        .count();
    // J^sigma_null and J^theta_null with lambda_{a_2-3} = lambda_0.
    assert_eq!(nulls, 2);
}
