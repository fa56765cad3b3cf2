//! Parse equations and print their intensional clauses and Δ_ε sizes.

use lpg::term::{delta_epsilon, parse, to_intensional};

fn main() {
    let inputs: Vec<String> = std::env::args().skip(1).collect();
    let inputs = if inputs.is_empty() {
        ["x <= 1", "x y = y x", "x^l = x^r", "x^(2) = x", "1 <= (x | y) z & x^r"].map(String::from).to_vec()
    } else {
        inputs
    };
    for s in inputs {
        match parse(&s) {
            Err(e) => println!("{s}: {e}"),
            Ok(eq) => {
                println!("{s}");
                for c in to_intensional(&eq) {
                    println!("  {c}    |ε| = {}, |Δ_ε| = {}", c.length, delta_epsilon(&c).len());
                }
            }
        }
    }
}
