//! Maps on ℚ ×→ ℤ: a PL bijection on ℚ plus periodic components.

use lpg::fnz::PeriodicFn;
use lpg::lexfn::{q, q_frac, LexFn, LexPoint, PLBijection};
use std::collections::BTreeMap;

fn main() {
    let tilde = PLBijection::from_points(vec![(q(0), q(0)), (q(1), q_frac(1, 2))]).unwrap();
    let comps: BTreeMap<_, _> = [(q(0), PeriodicFn::new(1, vec![2]).unwrap())].into();
    let f = LexFn::new(1, tilde, comps).unwrap();
    println!("f = {}", serde_json::to_string(&f).unwrap());
    for (j, z) in [(q(0), 0), (q_frac(1, 2), 3), (q(2), -1)] {
        let p = LexPoint::new(j, z);
        println!("f({p}) = {}", f.eval(&p));
    }
    let (l, r) = (f.linv(), f.rinv());
    let id = LexFn::identity(1);
    println!("f^ℓ f <= 1: {}", l.compose(&f).unwrap().exact_leq(&id));
    println!("1 <= f f^ℓ: {}", id.exact_leq(&f.compose(&l).unwrap()));
    println!("f^(2) = f: {}", f.iter_inv(2) == f);
    println!("f^ℓr = f: {}", l.rinv() == f && r.linv() == f);
}
