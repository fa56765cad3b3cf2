//! Command-line front end: `decide`, `verify`, `normalize`, `oracle`.
//!
//! Exit codes: 0 valid (or verified), 1 fails (or a witness found),
//! 2 unknown, 3 input or configuration error.

use std::io::Write;

use clap::{Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use crate::decide::{
    decide_dlp, decide_fnz, decide_lpn, verify_against_clauses, DecideConfig, Status, Verdict, Witness,
};
use crate::oracle::{search_counterexample_fnz, search_counterexample_lex, seed_from_env};
use crate::term::{parse, to_intensional, IntensionalEquation};

#[derive(Parser, Debug)]
#[command(name = "lpg", version, about = "Decide equations in n-periodic lattice-ordered pregroups")]
struct Cli {
    /// Worker threads for parallel searches.
    #[arg(long, global = true)]
    jobs: Option<usize>,
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum Theory {
    Dlp,
    Lpn,
    Fnz,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum OracleSpace {
    Fnz,
    Lex,
}

#[derive(Subcommand, Debug)]
enum Cmd {
    /// Decide an equation; prints a verdict as JSON.
    Decide {
        #[arg(long, value_enum)]
        theory: Theory,
        #[arg(long, default_value_t = 1)]
        n: i64,
        /// Lift the default search cap.
        #[arg(long)]
        complete: bool,
        /// Search-node budget (overrides the default cap).
        #[arg(long)]
        budget: Option<u64>,
        /// For dlp: run at this n instead of 2^|ε|·|ε|⁴.
        #[arg(long)]
        n_override: Option<i64>,
        /// For dlp: run even when n is beyond the practical threshold.
        #[arg(long)]
        force: bool,
        /// Random assignments tried per clause before the diagram search (0: none).
        #[arg(long, default_value_t = 2_000)]
        probe: u64,
        /// Probe seed; defaults to LPG_SEED, then a fixed seed.
        #[arg(long)]
        seed: Option<u64>,
        /// Search the clauses as written, without reducing exponents mod 2n.
        #[arg(long)]
        no_reduce: bool,
        equation: String,
    },
    /// Re-check a witness (or a decide verdict) against an equation.
    Verify { witness: String, equation: String },
    /// Print the intensional form(s) of an equation.
    Normalize { equation: String },
    /// Randomized counterexample search.
    Oracle {
        #[arg(long, value_enum)]
        theory: OracleSpace,
        #[arg(long, default_value_t = 1)]
        n: i64,
        #[arg(long, default_value_t = 100_000)]
        budget: u64,
        /// Defaults to LPG_SEED, then a fixed seed.
        #[arg(long)]
        seed: Option<u64>,
        equation: String,
    },
}

/// Node cap used when neither `--complete` nor `--budget` is given.
pub const DEFAULT_CAP: u64 = 2_000_000;

struct Fail(String);

fn clauses(text: &str) -> Result<Vec<IntensionalEquation>, Fail> {
    let eq = parse(text).map_err(|e| Fail(format!("parse error: {e}")))?;
    Ok(to_intensional(&eq))
}

fn verdict_code(s: Status) -> i32 {
    match s {
        Status::Valid => 0,
        Status::Fails => 1,
        Status::Unknown => 2,
    }
}

fn verdict_json(theory: &str, n: Value, equation: &str, v: &Verdict) -> Value {
    json!({
        "theory": theory,
        "n": n,
        "equation": equation,
        "verdict": v.status,
        "mode": v.mode,
        "witness": v.witness,
        "stats": v.stats,
    })
}

fn run_cmd(cli: Cli, out: &mut dyn Write) -> Result<i32, Fail> {
    if let Some(j) = cli.jobs {
        // a second call in the same process is harmless
        let _ = rayon::ThreadPoolBuilder::new().num_threads(j).build_global();
    }
    let io = |e: std::io::Error| Fail(e.to_string());
    match cli.cmd {
        Cmd::Normalize { equation } => {
            for c in clauses(&equation)? {
                writeln!(out, "{c}").map_err(io)?;
            }
            Ok(0)
        }
        Cmd::Decide { theory, n, complete, budget, n_override, force, probe, seed, no_reduce, equation } => {
            let cs = clauses(&equation)?;
            let node_budget = match (budget, complete) {
                (Some(b), _) => Some(b),
                (None, true) => None,
                (None, false) => Some(DEFAULT_CAP),
            };
            let seed = seed.unwrap_or_else(seed_from_env);
            let cfg = DecideConfig { node_budget, force, probe, seed, reduce_exponents: !no_reduce, ..Default::default() };
            let err = |e: crate::decide::DecideError| Fail(e.to_string());
            let (name, nval, v) = match theory {
                Theory::Fnz => ("fnz", json!(n), decide_fnz(&cs, n, &cfg).map_err(err)?),
                Theory::Lpn => ("lpn", json!(n), decide_lpn(&cs, n, &cfg).map_err(err)?),
                Theory::Dlp => {
                    let (exact, v) = decide_dlp(&cs, n_override, &cfg).map_err(err)?;
                    let used = n_override.map_or(exact.to_string(), |o| o.to_string());
                    ("dlp", json!({"formula": exact.to_string(), "used": used}), v)
                }
            };
            writeln!(out, "{}", verdict_json(name, nval, &equation, &v)).map_err(io)?;
            Ok(verdict_code(v.status))
        }
        Cmd::Verify { witness, equation } => {
            let text = if witness == "-" {
                std::io::read_to_string(std::io::stdin()).map_err(io)?
            } else {
                std::fs::read_to_string(&witness).map_err(|e| Fail(format!("{witness}: {e}")))?
            };
            let mut v: Value = serde_json::from_str(&text).map_err(|e| Fail(format!("bad JSON: {e}")))?;
            if let Some(w) = v.get_mut("witness") {
                v = w.take();
            }
            let w: Witness = serde_json::from_value(v).map_err(|e| Fail(format!("bad witness: {e}")))?;
            let ok = verify_against_clauses(&clauses(&equation)?, &w).map_err(|e| Fail(e.to_string()))?;
            writeln!(out, "{}", json!({"verified": ok})).map_err(io)?;
            Ok(if ok { 0 } else { 1 })
        }
        Cmd::Oracle { theory, n, budget, seed, equation } => {
            if n < 1 {
                return Err(Fail("n must be at least 1".into()));
            }
            let seed = seed.unwrap_or_else(seed_from_env);
            let cs = clauses(&equation)?;
            let per = budget / cs.len().max(1) as u64;
            let w = cs.iter().find_map(|c| match theory {
                OracleSpace::Fnz => search_counterexample_fnz(c, n, per, seed),
                OracleSpace::Lex => search_counterexample_lex(c, n, per, seed),
            });
            let name = match theory {
                OracleSpace::Fnz => "fnz",
                OracleSpace::Lex => "lex",
            };
            writeln!(out, "{}", json!({"theory": name, "n": n, "equation": equation, "witness": w})).map_err(io)?;
            Ok(if w.is_some() { 1 } else { 2 })
        }
    }
}

/// Run with explicit streams; returns the exit code.
pub fn run_with<I, S>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = S>,
    S: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 3 } else { 0 };
            let _ = write!(err, "{e}");
            return code;
        }
    };
    match run_cmd(cli, out) {
        Ok(c) => c,
        Err(Fail(msg)) => {
            let _ = writeln!(err, "lpg: {msg}");
            3
        }
    }
}

pub fn run<I, S>(args: I) -> i32
where
    I: IntoIterator<Item = S>,
    S: Into<std::ffi::OsString> + Clone,
{
    run_with(args, &mut std::io::stdout(), &mut std::io::stderr())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn call(args: &[&str]) -> (i32, String, String) {
        let (mut o, mut e) = (Vec::new(), Vec::new());
        let code = run_with(std::iter::once("lpg").chain(args.iter().copied()), &mut o, &mut e);
        (code, String::from_utf8(o).unwrap(), String::from_utf8(e).unwrap())
    }

    #[test]
    fn normalize() {
        let (c, o, _) = call(&["normalize", "x <= 1"]);
        assert_eq!((c, o.trim()), (0, "1 <= x^(-1)"));
    }

    #[test]
    fn decide_examples() {
        let (c, o, _) = call(&["decide", "--theory", "fnz", "--n", "1", "x y = y x"]);
        let v: Value = serde_json::from_str(&o).unwrap();
        assert_eq!((c, v["verdict"].as_str()), (0, Some("valid")));
        let (c, o, _) = call(&["decide", "--theory", "lpn", "--n", "2", "x^l = x^r"]);
        let v: Value = serde_json::from_str(&o).unwrap();
        assert_eq!((c, v["verdict"].as_str()), (1, Some("fails")));
        assert!(v["witness"].is_object());
    }

    #[test]
    fn input_errors_exit_3() {
        assert_eq!(call(&["normalize", "x <= $"]).0, 3);
        assert_eq!(call(&["decide", "--theory", "nope", "x = x"]).0, 3);
        assert_eq!(call(&["decide", "--theory", "dlp", "x y = y x"]).0, 3);
        assert_eq!(call(&["verify", "/nonexistent.json", "1 <= x"]).0, 3);
    }

    #[test]
    fn verify_roundtrip() {
        let (_, o, _) = call(&["decide", "--theory", "lpn", "--n", "1", "x y = y x"]);
        let dir = std::env::temp_dir().join(format!("lpg-cli-{}", std::process::id()));
        std::fs::create_dir_all(&dir).unwrap();
        let path = dir.join("w.json");
        std::fs::write(&path, &o).unwrap();
        let p = path.to_str().unwrap();
        assert_eq!(call(&["verify", p, "x y = y x"]).0, 0);
        assert_eq!(call(&["verify", p, "x y <= x y"]).0, 1);
    }

    #[test]
    fn oracle_is_seed_deterministic() {
        let a = call(&["oracle", "--theory", "fnz", "--n", "2", "--budget", "2000", "--seed", "3", "x y = y x"]);
        let b = call(&["oracle", "--theory", "fnz", "--n", "2", "--budget", "2000", "--seed", "3", "x y = y x"]);
        assert_eq!(a, b);
        assert_eq!(a.0, 1);
    }
}
