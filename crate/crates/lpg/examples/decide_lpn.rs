//! Decide an equation in LP_n via partition diagrams: `decide_lpn [n] [equation]`.
//! Commutativity holds in F_1(ℤ) but fails in LP_1.

use lpg::decide::{decide_fnz, decide_lpn, DecideConfig};
use lpg::term::{parse, to_intensional};

fn main() {
    let mut args = std::env::args().skip(1);
    let n: i64 = args.next().map_or(1, |s| s.parse().expect("n"));
    let eq = args.next().unwrap_or_else(|| "x y = y x".into());
    let cs = to_intensional(&parse(&eq).expect("equation"));
    let cfg = DecideConfig::default();
    let v = decide_lpn(&cs, n, &cfg).unwrap();
    println!("LP_{n} ⊨ {eq}?  {:?} ({:?}), {:?}", v.status, v.mode, v.stats);
    if let Some(w) = &v.witness {
        println!("{}", serde_json::to_string_pretty(w).unwrap());
    }
    if n == 1 && eq == "x y = y x" {
        let f = decide_fnz(&cs, 1, &cfg).unwrap();
        println!("F_1(ℤ) ⊨ {eq}?  {:?}", f.status);
    }
}
