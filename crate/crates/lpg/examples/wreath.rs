//! ℤ ≀ F_n(ℤ) and its embedding into F_n(ℚ ×→ ℤ).

use lpg::fnz::PeriodicFn;
use lpg::wreath::{lr_roundtrip_index, WreathElement};

fn main() {
    let f = |v: &[i64]| PeriodicFn::new(2, v.to_vec()).unwrap();
    let a = WreathElement::new(2, 1, [(0, f(&[4, 4])), (3, f(&[-1, 1]))].into()).unwrap();
    let b = WreathElement::new(2, -2, [(1, f(&[0, 2]))].into()).unwrap();
    let ab = a.multiply(&b);
    println!("ab: h = {}", ab.h());
    for (j, c) in ab.comps() {
        println!("  component {j}: {c}");
    }
    println!("as LexFn: {}", serde_json::to_string(&ab.iso_to_lexfn()).unwrap());
    println!(
        "(ab)^ℓ agrees with LexFn: {}",
        ab.linv().iso_to_lexfn() == ab.iso_to_lexfn().linv()
    );
    println!("a^(4) = a: {}", a.iter_inv(4) == a);

    // Without an invertible acting map the ℓ-then-r roundtrip moves indices.
    let h = f(&[0, 0]);
    let moved: Vec<(i64, i64)> = (-3..3).map(|j| (j, lr_roundtrip_index(&h, j))).collect();
    println!("j ↦ h^ℓ(h(j)) for h = (2,[0,0]): {moved:?}");
}
