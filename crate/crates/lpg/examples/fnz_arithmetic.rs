//! Arithmetic in F_n(ℤ): composition, residuals, iterated inverses, lattice
//! operations and the shift/star decomposition.

use lpg::fnz::{extend_partial, PeriodicFn};
use std::collections::BTreeMap;

fn show(name: &str, f: &PeriodicFn) {
    let xs: Vec<i64> = (-2..6).map(|x| f.eval(x)).collect();
    println!("{name:>8} = (n={}, vals {:?})   on -2..6: {xs:?}", f.n(), f.vals());
}

fn main() {
    let f = PeriodicFn::new(2, vec![4, 4]).unwrap();
    let g = PeriodicFn::new(2, vec![-1, 1]).unwrap();
    show("f", &f);
    show("g", &g);
    show("f∘g", &f.compose(&g).unwrap());
    show("f^ℓ", &f.linv());
    show("f^r", &f.rinv());
    show("f^(2)", &f.iter_inv(2));
    show("f∧g", &f.meet(&g).unwrap());
    show("f∨g", &f.join(&g).unwrap());
    let (shift, star) = f.decompose();
    println!("decompose(f): shift {shift}, star {:?}", star.vals());
    assert_eq!(PeriodicFn::recompose(shift, &star), f);
    assert_eq!(f.iter_inv(4), f, "f is 2-periodic");

    let h: BTreeMap<i64, i64> = [(0, 1), (3, 4)].into();
    show("ext(h)", &extend_partial(&h, 2, false).unwrap());
}
