use chainmf_core::collection::{hom_tensor, verify_strong, ChainTower};
use chainmf_core::quiver::{build_quiver, verify_quiver};

fn main() {
    let exps = vec![3u32, 2, 2];
    let tower = ChainTower::new(&exps).unwrap();
    let c = tower.build_collection();
    let tensor = hom_tensor(&c).unwrap();
    let r = verify_strong(&c, &tensor);
    println!("strong: {}", r.passed);
    for v in r.violations.iter().take(10) {
        println!(
            "  {} -> {} at shift {}: dim {} ({})",
            c.objects()[v.source].label,
            c.objects()[v.target].label,
            v.shift,
            v.dimension,
            v.note
        );
    }
    for exps in [vec![3u32, 2], vec![2, 2, 2]] {
        let tower = ChainTower::new(&exps).unwrap();
        let c = tower.build_collection();
        let tensor = hom_tensor(&c).unwrap();
        let (q, rels) = build_quiver(&exps).unwrap();
        let rep = verify_quiver(&c, &tensor, &q, &rels).unwrap();
        println!("{exps:?} quiver: {}", rep.passed);
        for v in rep.violations.iter().take(10) {
            println!(
                "  arrows {} -> {}: count {} vs {}",
                c.objects()[v.source].label,
                c.objects()[v.target].label,
                v.dimension,
                v.note
            );
        }
        for n in rep.notes.iter().take(10) {
            println!("  note: {n}");
        }
    }
}
