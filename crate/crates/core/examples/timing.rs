use std::time::Instant;

use chainmf_core::collection::{
    hom_tensor, lemma_last, lemma_psi_part, triangle_check, verify_exceptional,
    verify_semiorthogonal, verify_serre, verify_strong, ChainTower,
};
use chainmf_core::quiver::{build_quiver, verify_quiver};

fn main() {
    for exps in [
        vec![2u32, 2],
        vec![3, 2],
        vec![2, 3],
        vec![3, 3],
        vec![2, 2, 2],
        vec![3, 2, 2],
    ] {
        let t0 = Instant::now();
        let tower = ChainTower::new(&exps).unwrap();
        let c = tower.build_collection();
        let t_build = t0.elapsed();
        let t1 = Instant::now();
        let tensor = hom_tensor(&c).unwrap();
        let t_tensor = t1.elapsed();
        let t2 = Instant::now();
        let r1 = verify_exceptional(&c, &tensor);
        let r2 = verify_strong(&c, &tensor);
        let r3 = verify_semiorthogonal(&c, &tensor);
        let t_verify = t2.elapsed();
        let t3 = Instant::now();
        let rs = verify_serre(&c, &tensor).unwrap();
        let t_serre = t3.elapsed();
        let t4 = Instant::now();
        let levels = tower.build_levels();
        let mut lem_ok = true;
        for m in 1..=exps.len() {
            lem_ok &= lemma_psi_part(&tower, &levels, m).unwrap().passed;
            lem_ok &= lemma_last(&tower, &levels, m).unwrap().passed;
        }
        let t_lemma = t4.elapsed();
        let t5 = Instant::now();
        let mut tri_ok = true;
        for m in 0..=exps.len().saturating_sub(2) {
            for f in &levels[m] {
                tri_ok &= triangle_check(&tower, m, &f.mf).unwrap().passed;
            }
        }
        let t_tri = t5.elapsed();
        let t6 = Instant::now();
        let (q, rels) = build_quiver(&exps).unwrap();
        let rq = verify_quiver(&c, &tensor, &q, &rels).unwrap();
        let t_quiver = t6.elapsed();
        println!(
            "{exps:?}: len={} window={:?} | build {t_build:?} tensor {t_tensor:?} verify {t_verify:?} serre {t_serre:?} lemmas {t_lemma:?} tri {t_tri:?} quiver {t_quiver:?} | exc={} strong={} so={} serre={} lemmas={lem_ok} tri={tri_ok} quiver={}",
            c.len(),
            tensor.window,
            r1.passed,
            r2.passed,
            r3.passed,
            rs.passed,
            rq.passed
        );
    }
}
