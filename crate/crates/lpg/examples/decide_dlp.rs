//! The distributive case goes through F_n(ℤ) with n = 2^|ε|·|ε|⁴; that n is
//! reported, and an override lets small instances run.

use lpg::decide::{decide_dlp, dlp_n, DecideConfig};
use lpg::term::{parse, to_intensional};

fn main() {
    for len in [3, 5, 7, 11] {
        println!("|ε| = {len:>2}: n = {}", dlp_n(len));
    }
    let cfg = DecideConfig::default();
    for eq in ["1 <= x", "x y = y x"] {
        let cs = to_intensional(&parse(eq).unwrap());
        match decide_dlp(&cs, None, &cfg) {
            Ok((n, v)) => println!("{eq}: n = {n}, {:?}", v.status),
            Err(e) => println!("{eq}: {e}"),
        }
        let (n, v) = decide_dlp(&cs, Some(1), &cfg).unwrap();
        println!("{eq}: (formula n = {n}, run at n = 1) {:?}", v.status);
    }
}
