//! Seeded brute-force counterexample search (LPG_SEED overrides the seed).

use lpg::oracle::{search_counterexample_fnz, search_counterexample_lex, seed_from_env};
use lpg::term::{parse, to_intensional};

fn main() {
    let seed = seed_from_env();
    for (eq, n) in [("1 <= x", 1), ("x^l = x^r", 2), ("x y = y x", 1), ("x^(2) = x", 1)] {
        let cs = to_intensional(&parse(eq).unwrap());
        let fz = cs.iter().find_map(|c| search_counterexample_fnz(c, n, 20_000, seed));
        let lx = cs.iter().find_map(|c| search_counterexample_lex(c, n, 20_000, seed));
        println!("{eq} (n={n}): F_n(ℤ) witness {}, F_n(ℚ×ℤ) witness {}", fz.is_some(), lx.is_some());
        if let Some(w) = fz.or(lx) {
            println!("  {}", serde_json::to_string(&w).unwrap());
        }
    }
}
