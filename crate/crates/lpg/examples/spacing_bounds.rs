//! Short spacing embeddings and their height bounds.

use lpg::spacing::{find_short_1transfer, find_short_ntransfer, nu, rho, ZChain};

fn main() {
    for a in 1..=4 {
        println!("ρ({a}) = {}   ν({a}, 2) = {}", rho(a), nu(a, 2));
    }
    let c = ZChain::new(vec![0, 5, 6, 40, 41, 42, 300], [1, 3, 4]);
    println!("chain {:?}, gaps {:?}", c.pts, c.gaps());
    let e1 = find_short_1transfer(&c);
    println!("1-transfer embedding {:?} (height {}, bound {})", e1.pos, e1.height(), rho(c.pts.len() as u64));
    let e2 = find_short_ntransfer(&c, 2);
    println!("2-transfer embedding {:?} (height {})", e2.pos, e2.height());
}
