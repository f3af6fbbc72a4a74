//! Regenerates the bundled fixture distributions, overwriting
//! `crates/cli/fixtures/`. Hand-written fixtures are left alone.

use hugeobject::bits::BitVector;
use hugeobject::dist::ExplicitDistribution;
use hugeobject::instances::gen_far_codeword_set;
use hugeobject::metrics::hamming_norm;
use hugeobject::seeding::rng_from_seed;
use std::path::Path;

fn main() {
    let dir = Path::new(env!("CARGO_MANIFEST_DIR")).join("fixtures");
    std::fs::create_dir_all(&dir).unwrap();

    // three well-separated clusters (pairwise distance >= 0.4) over n = 512
    let mut rng = rng_from_seed(303);
    let n = 512;
    let three = loop {
        let c: Vec<BitVector> = (0..3).map(|_| BitVector::random(n, &mut rng)).collect();
        let separated =
            (0..3).all(|i| (i + 1..3).all(|j| hamming_norm(&c[i], &c[j]).unwrap() >= 0.4));
        if separated {
            break ExplicitDistribution::new(vec![
                (c[0].clone(), 0.5),
                (c[1].clone(), 0.3),
                (c[2].clone(), 0.2),
            ])
            .unwrap();
        }
    };
    three.save(&dir.join("three_cluster_512.dist")).unwrap();

    // 32 pairwise-far vectors over n = 64, uniform
    let far = gen_far_codeword_set(64, 32, 64.0 / 3.0, 77).unwrap();
    ExplicitDistribution::uniform(far).unwrap().save(&dir.join("scattered_64.dist")).unwrap();

    println!("fixtures written to {}", dir.display());
}
