//! Enumerate compatible surjections for a clause and count the failing ones.

use lpg::search::{all_compatible_surjections, fails_in, Universe};
use lpg::term::{parse, to_intensional};

fn main() {
    let s = std::env::args().nth(1).unwrap_or_else(|| "1 <= x^(-1) x".into());
    for c in to_intensional(&parse(&s).expect("equation")) {
        let u = Universe::new(&c);
        let all = all_compatible_surjections(&u);
        let failing: Vec<_> = all.iter().filter(|cs| fails_in(cs, &u)).collect();
        println!("{c}: |Δ_ε| = {}, {} surjections, {} failing", u.len(), all.len(), failing.len());
        if let Some(cs) = failing.first() {
            println!("  e.g. φ = {:?} onto {} points", cs.phi, cs.q());
            println!("  diagram {}", cs.diagram(&u).to_json());
        }
    }
}
