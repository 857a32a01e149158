//! Desk-scale verification of the collection machinery: exceptionality,
//! strongness, semi-orthogonality, Serre duality, the psi/phi dimension
//! identities, the cone triangle, and the canonical morphisms.

use chainmf_core::collection::{
    hom_tensor, lemma_last, lemma_psi_part, triangle_check, verify_exceptional,
    verify_hom_dims_binary, verify_semiorthogonal, verify_serre, verify_strong, ChainTower,
};
use chainmf_core::mf::{self, hom_dim};

fn full_verification(exps: &[u32]) {
    let tower = ChainTower::new(exps).unwrap();
    let c = tower.build_collection();
    let tensor = hom_tensor(&c).unwrap();
    let reports = [
        verify_exceptional(&c, &tensor),
        verify_strong(&c, &tensor),
        verify_semiorthogonal(&c, &tensor),
        verify_hom_dims_binary(&c, &tensor),
    ];
    for r in &reports {
        assert!(r.passed, "{exps:?}: {}\n{:?}", r.summary(), r.violations);
    }
}

#[test]
fn collection_2_2_fully_verified() {
    full_verification(&[2, 2]);
}

#[test]
fn collection_3_fully_verified() {
    full_verification(&[3]);
}

#[test]
fn collection_3_hom_matrix_is_single_superdiagonal() {
    // Two objects, one forward morphism, nothing else.
    let tower = ChainTower::new(&[3]).unwrap();
    let c = tower.build_collection();
    let tensor = hom_tensor(&c).unwrap();
    assert_eq!(tensor.dim(0, 0, 0), 1);
    assert_eq!(tensor.dim(1, 1, 0), 1);
    assert_eq!(tensor.dim(0, 1, 0), 1);
    assert_eq!(tensor.dim(1, 0, 0), 0);
    for l in tensor.shifts() {
        if l != 0 {
            for s in 0..2 {
                for t in 0..2 {
                    assert_eq!(tensor.dim(s, t, l), 0);
                }
            }
        }
    }
}

#[test]
fn serre_duality_2_2() {
    let tower = ChainTower::new(&[2, 2]).unwrap();
    let c = tower.build_collection();
    let tensor = hom_tensor(&c).unwrap();
    let rep = verify_serre(&c, &tensor).unwrap();
    assert!(rep.passed, "{}\n{:?}", rep.summary(), rep.violations);
}

#[test]
fn lemma_suites_2_2() {
    let tower = ChainTower::new(&[2, 2]).unwrap();
    let levels = tower.build_levels();
    for m in 1..=2 {
        let rep = lemma_psi_part(&tower, &levels, m).unwrap();
        assert!(rep.passed, "psi part at level {m}: {:?}", rep.violations);
    }
    let rep = lemma_last(&tower, &levels, 2).unwrap();
    assert!(rep.passed, "last lemma: {:?}", rep.violations);
}

#[test]
fn triangle_2_2_2() {
    let tower = ChainTower::new(&[2, 2, 2]).unwrap();
    let levels = tower.build_levels();
    for f in &levels[1] {
        let rep = triangle_check(&tower, 1, &f.mf).unwrap();
        assert!(rep.passed, "triangle at {}: {:?}", f.label, rep.notes);
    }
    for f in &levels[0] {
        let rep = triangle_check(&tower, 0, &f.mf).unwrap();
        assert!(rep.passed, "triangle at {}: {:?}", f.label, rep.notes);
    }
}

#[test]
fn canonical_lambda_generates_hom() {
    // Over a = (3): lambda_0 spans Hom(psi_0 E^0, psi_1 E^0).
    let tower = ChainTower::new(&[3]).unwrap();
    let e0 = tower.base_object();
    let lam = tower.canonical_lambda(0, &e0, 0).unwrap();
    assert!(lam.validate().is_empty());
    assert!(!mf::is_null_homotopic(&lam).unwrap());
    let src = tower.psi_i(0, &e0, 0).unwrap();
    let tgt = tower.psi_i(0, &e0, 1).unwrap();
    assert_eq!(lam.source(), &src);
    assert_eq!(lam.target(), &tgt);
    assert_eq!(hom_dim(&src, &tgt, 0).unwrap(), 1);
}

#[test]
fn canonical_sigma_theta_2_2() {
    let tower = ChainTower::new(&[2, 2]).unwrap();
    let e0 = tower.base_object();
    let sigma = tower.canonical_sigma(0, &e0, 0).unwrap();
    assert!(sigma.validate().is_empty(), "{:?}", sigma.validate());
    assert!(!mf::is_null_homotopic(&sigma).unwrap());
    let theta = tower.canonical_theta(0, &e0).unwrap();
    assert!(theta.validate().is_empty(), "{:?}", theta.validate());
    assert!(!mf::is_null_homotopic(&theta).unwrap());
    // Endpoints agree with the collection objects.
    let psi_psi = tower.psi_i(1, &tower.psi_i(0, &e0, 0).unwrap(), 0).unwrap();
    assert_eq!(sigma.source(), &psi_psi);
    assert_eq!(sigma.target(), &tower.phi_j(0, &e0, 0).unwrap());
    assert_eq!(theta.source(), &psi_psi);
    assert_eq!(theta.target(), &tower.phi_j(0, &e0, 1).unwrap());
}

#[test]
fn psi_functoriality() {
    let tower = ChainTower::new(&[3, 2]).unwrap();
    let e0 = tower.base_object();
    let id = mf::MfMorphism::identity(&e0);
    let psi_id = tower.psi_on_morphism(0, &id);
    assert_eq!(psi_id, mf::MfMorphism::identity(&tower.psi(0, &e0)));
    // psi(g . f) = psi(g) . psi(f) on the one-object endomorphism space.
    let maps = mf::chain_map_space(&e0, &e0).unwrap();
    for f in &maps {
        for g in &maps {
            let comp = g.compose_after(f).unwrap();
            let lhs = tower.psi_on_morphism(0, &comp);
            let rhs = tower
                .psi_on_morphism(0, g)
                .compose_after(&tower.psi_on_morphism(0, f))
                .unwrap();
            assert_eq!(lhs, rhs);
        }
    }
    let phi_zero = tower.phi_on_morphism(0, &mf::MfMorphism::zero(&e0, &e0));
    assert!(phi_zero.is_zero());
}

#[test]
fn lambda_naturality_square_exact() {
    // For alpha the generator of End(E^0) over (3,): both composites agree
    // exactly, not just up to homotopy.
    let tower = ChainTower::new(&[3]).unwrap();
    let e0 = tower.base_object();
    let alpha = mf::MfMorphism::identity(&e0);
    let lam = tower.canonical_lambda(0, &e0, 0).unwrap();
    let lhs = tower
        .psi_i_on_morphism(0, &alpha, 1)
        .compose_after(&lam)
        .unwrap();
    let rhs = lam
        .compose_after(&tower.psi_i_on_morphism(0, &alpha, 0))
        .unwrap();
    assert_eq!(lhs, rhs);
}
