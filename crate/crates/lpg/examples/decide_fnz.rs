//! Decide an equation over F_n(ℤ): `decide_fnz [n] [equation]`.

use lpg::decide::{decide_fnz, DecideConfig};
use lpg::term::{parse, to_intensional};

fn main() {
    let mut args = std::env::args().skip(1);
    let n: i64 = args.next().map_or(1, |s| s.parse().expect("n"));
    let eq = args.next().unwrap_or_else(|| "x y = y x".into());
    let cs = to_intensional(&parse(&eq).expect("equation"));
    let v = decide_fnz(&cs, n, &DecideConfig::default()).unwrap();
    println!("F_{n}(ℤ) ⊨ {eq}?  {:?} ({:?}), {:?}", v.status, v.mode, v.stats);
    if let Some(w) = v.witness {
        println!("{}", serde_json::to_string_pretty(&w).unwrap());
    }
}
