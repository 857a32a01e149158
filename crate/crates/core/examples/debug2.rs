use chainmf_core::collection::{hom_tensor, ChainTower};

fn main() {
    for exps in [vec![3u32, 2], vec![2, 2, 2]] {
        let tower = ChainTower::new(&exps).unwrap();
        let c = tower.build_collection();
        let tensor = hom_tensor(&c).unwrap();
        println!("== {exps:?}  (hom dims at shift 0)");
        let labels: Vec<String> = c.objects().iter().map(|o| o.label.to_string()).collect();
        for (s, ls) in labels.iter().enumerate() {
            for (t, lt) in labels.iter().enumerate() {
                let d = tensor.dim(s, t, 0);
                if d > 0 && s != t {
                    println!("  {ls} -> {lt}: {d}");
                }
            }
        }
    }
}
