//! Bracket inverses on a c-chain, and n-periodicity of a partial map after
//! spacing it out in ℤ.

use lpg::diagram::{check_n_periodic, iter_bracket, CChain, PartialFn, SpacingEmbedding};

fn main() {
    // 0 ⋖ 1   2 ⋖ 3   4   (covers at 0 and 2)
    let c = CChain::new(5, [0, 2]);
    let g: PartialFn = [(0, 1), (1, 2), (2, 3), (3, 4)].into();
    for m in -2..=2 {
        println!("g^[{m:>2}] = {:?}", iter_bracket(&g, m, &c));
    }
    // A shift by one on a fully covered chain is 1-periodic once embedded;
    // pulling the points apart breaks that.
    let full = CChain::new(5, [0, 1, 2, 3]);
    let e = SpacingEmbedding::identity(5);
    assert!(e.is_valid_for(&full));
    println!("embedding {:?}: 1-periodic {}", e.pos, check_n_periodic(&g, &e, 1));
    let e = SpacingEmbedding::new(vec![0, 1, 3, 4, 7], &c).unwrap();
    for n in 1..=3 {
        println!("embedding {:?}: {n}-periodic {}", e.pos, check_n_periodic(&g, &e, n));
    }
}
