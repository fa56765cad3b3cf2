//! Brute-force counterexample search, independent of the diagram machinery:
//! random and small exhaustive assignments, evaluated directly.

use std::collections::BTreeMap;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::decide::{eval_fnz, eval_lex, verify_witness, Witness};
use crate::fnz::PeriodicFn;
use crate::lexfn::{q, q_frac, LexFn, LexPoint, PLBijection};
use crate::term::IntensionalEquation;

pub const DEFAULT_SEED: u64 = 0x5eed;

/// Seed from `LPG_SEED`, else the default.
pub fn seed_from_env() -> u64 {
    std::env::var("LPG_SEED").ok().and_then(|s| s.parse().ok()).unwrap_or(DEFAULT_SEED)
}

/// A random element of F_n(ℤ) with `|f(0)| <= value_bound`.
pub fn random_periodic_fn<R: Rng>(n: i64, value_bound: i64, rng: &mut R) -> PeriodicFn {
    let v0 = rng.gen_range(-value_bound..=value_bound);
    let mut rest: Vec<i64> = (1..n).map(|_| rng.gen_range(v0..=v0 + n)).collect();
    rest.sort();
    let mut vals = vec![v0];
    vals.extend(rest);
    PeriodicFn::new(n, vals).expect("sorted within one period")
}

/// All of F_n(ℤ) with `|f(0)| <= b`.
pub fn all_periodic_fns(n: i64, b: i64) -> Vec<PeriodicFn> {
    let mut out = Vec::new();
    fn rec(n: i64, vals: &mut Vec<i64>, out: &mut Vec<PeriodicFn>) {
        if vals.len() as i64 == n {
            out.push(PeriodicFn::new(n, vals.clone()).unwrap());
            return;
        }
        let lo = *vals.last().unwrap();
        for v in lo..=vals[0] + n {
            vals.push(v);
            rec(n, vals, out);
            vals.pop();
        }
    }
    for v0 in -b..=b {
        rec(n, &mut vec![v0], &mut out);
    }
    out
}

/// `|{f ∈ F_n(ℤ) : |f(0)| <= b}| = (2b+1)·C(2n-1, n-1)`, saturating.
pub fn count_periodic_fns(n: i64, b: i64) -> u64 {
    let (n, k) = (n as u64, (n - 1) as u64);
    let mut c: u64 = 1;
    for i in 0..k {
        // C(2n-1, i+1) = C(2n-1, i)·(2n-1-i)/(i+1), exact at every step
        c = match c.checked_mul(2 * n - 1 - i) {
            Some(v) => v / (i + 1),
            None => return u64::MAX,
        };
    }
    c.saturating_mul(2 * b as u64 + 1)
}

fn fnz_witness(eps: &IntensionalEquation, n: i64, fs: &[PeriodicFn]) -> Option<Witness> {
    // w(p + n) = w(p) + n, so one period of points suffices.
    (0..n).find_map(|p| {
        let values = eval_fnz(eps, fs, p);
        values.iter().all(|v| *v < p).then(|| Witness::FnZ {
            n,
            clause: eps.to_string(),
            assignment: eps.vars.iter().cloned().zip(fs.iter().cloned()).collect(),
            point: p,
            values,
        })
    })
}

/// Search F_n(ℤ) for a counterexample: first every assignment with small
/// values, then seeded random assignments with growing bounds, `budget`
/// assignments in total.
pub fn search_counterexample_fnz(eps: &IntensionalEquation, n: i64, budget: u64, seed: u64) -> Option<Witness> {
    let k = eps.vars.len();
    let mut spent = 0u64;
    for b in 1..=3 {
        let total = match count_periodic_fns(n, b).checked_pow(k as u32) {
            Some(t) if spent + t <= budget / 2 => t,
            _ => break,
        };
        let pool = all_periodic_fns(n, b);
        spent += total;
        let found = (0..total).into_par_iter().find_map_first(|mut idx| {
            let fs: Vec<PeriodicFn> = (0..k)
                .map(|_| {
                    let f = pool[(idx % pool.len() as u64) as usize].clone();
                    idx /= pool.len() as u64;
                    f
                })
                .collect();
            fnz_witness(eps, n, &fs)
        });
        if found.is_some() {
            return checked(eps, found);
        }
    }
    let rest = budget.saturating_sub(spent);
    let found = (0..rest).into_par_iter().find_map_first(|i| {
        let mut rng = ChaCha8Rng::seed_from_u64(seed ^ i.wrapping_mul(0x9e37_79b9_7f4a_7c15));
        let bound = n * (1 + (i * 4 / rest.max(1)) as i64);
        let fs: Vec<PeriodicFn> = (0..k).map(|_| random_periodic_fn(n, bound, &mut rng)).collect();
        fnz_witness(eps, n, &fs)
    });
    checked(eps, found)
}

fn checked(eps: &IntensionalEquation, w: Option<Witness>) -> Option<Witness> {
    w.inspect(|w| assert_eq!(verify_witness(eps, w), Ok(true), "oracle witness does not verify"))
}

/// A small random PL bijection: up to three breakpoints on a grid of
/// halves and quarters.
pub fn random_pl<R: Rng>(rng: &mut R) -> PLBijection {
    loop {
        let k = rng.gen_range(0..=3);
        if k == 0 {
            return PLBijection::translation(q(rng.gen_range(-2..=2)));
        }
        let mut xs: Vec<i64> = (0..k).map(|_| rng.gen_range(-8..=8)).collect();
        let mut ys: Vec<i64> = (0..k).map(|_| rng.gen_range(-8..=8)).collect();
        xs.sort();
        ys.sort();
        let pts = xs.iter().zip(&ys).map(|(x, y)| (q_frac(*x, 4), q_frac(*y, 4))).collect();
        if let Some(p) = PLBijection::from_points(pts) {
            return p;
        }
    }
}

/// A random element of F_n(ℚ ×→ ℤ) with at most three non-identity components.
pub fn random_lexfn<R: Rng>(n: i64, rng: &mut R) -> LexFn {
    let tilde = random_pl(rng);
    let mut comps = BTreeMap::new();
    for _ in 0..rng.gen_range(0..=3) {
        comps.insert(q_frac(rng.gen_range(-4..=4), 2), random_periodic_fn(n, n, rng));
    }
    LexFn::new(n, tilde, comps).expect("same n")
}

/// Search F_n(ℚ ×→ ℤ) with small random global parts and at most three
/// non-identity components.
pub fn search_counterexample_lex(eps: &IntensionalEquation, n: i64, budget: u64, seed: u64) -> Option<Witness> {
    let k = eps.vars.len();
    let found = (0..budget).into_par_iter().find_map_first(|i| {
        let mut rng = ChaCha8Rng::seed_from_u64(seed ^ i.wrapping_mul(0xd1b5_4a32_d192_ed03));
        let fs: Vec<LexFn> = (0..k).map(|_| random_lexfn(n, &mut rng)).collect();
        // probe the interesting indices: breakpoints, supports, and between
        let mut js: Vec<_> = fs
            .iter()
            .flat_map(|f| f.tilde().points().iter().map(|p| p.0.clone()).chain(f.components().keys().cloned()))
            .collect();
        js.extend((-4..=4).map(|t| q_frac(t, 2)));
        js.sort();
        js.dedup();
        for j in js {
            for z in 0..n {
                let p = LexPoint::new(j.clone(), z);
                let values = eval_lex(eps, &fs, &p);
                if values.iter().all(|v| *v < p) {
                    return Some(Witness::FnQxZ {
                        n,
                        clause: eps.to_string(),
                        assignment: eps.vars.iter().cloned().zip(fs.iter().cloned()).collect(),
                        point: p,
                        values,
                    });
                }
            }
        }
        None
    });
    checked(eps, found)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::term::{parse, to_intensional};

    fn clause(s: &str, i: usize) -> IntensionalEquation {
        to_intensional(&parse(s).unwrap())[i].clone()
    }

    #[test]
    fn random_fns_are_valid_and_seeded() {
        let mut r1 = ChaCha8Rng::seed_from_u64(7);
        let mut r2 = ChaCha8Rng::seed_from_u64(7);
        for n in 1..4 {
            for _ in 0..100 {
                let f = random_periodic_fn(n, 3 * n, &mut r1);
                assert!(f.vals()[0].abs() <= 3 * n);
                assert_eq!(f, random_periodic_fn(n, 3 * n, &mut r2));
            }
        }
        assert!(all_periodic_fns(1, 2).iter().all(|f| f.vals()[0].abs() <= 2));
        assert_eq!(all_periodic_fns(1, 2).len(), 5);
        for (n, b) in [(1, 0), (2, 1), (3, 2), (4, 1)] {
            assert_eq!(all_periodic_fns(n, b).len() as u64, count_periodic_fns(n, b));
        }
        assert_eq!(count_periodic_fns(648, 1), u64::MAX);
    }

    #[test]
    fn fnz_search() {
        assert!(search_counterexample_fnz(&clause("1 <= x", 0), 1, 100, 1).is_some());
        assert!(search_counterexample_fnz(&clause("1 <= x^(-1) x", 0), 2, 2000, 1).is_none());
        let comm = to_intensional(&parse("x y = y x").unwrap());
        assert!(comm.iter().any(|c| search_counterexample_fnz(c, 2, 5000, 1).is_some()));
    }

    #[test]
    fn lex_search() {
        let comm = to_intensional(&parse("x y = y x").unwrap());
        assert!(comm.iter().any(|c| search_counterexample_lex(c, 1, 5000, 1).is_some()));
        let per = to_intensional(&parse("x^(2) = x").unwrap());
        assert!(per.iter().all(|c| search_counterexample_lex(c, 1, 500, 1).is_none()));
    }
}
