//! Decision procedures for F_n(ℤ), LP_n and (by reduction) DLP, with
//! witness realization and independent verification.

use std::collections::{BTreeMap, HashMap};
use std::ops::ControlFlow;
use std::time::Instant;

use num_bigint::BigUint;
use num_traits::ToPrimitive;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::diagram::{counterpart, SpacingEmbedding};
use crate::fnz::{extend_partial, PeriodicFn};
use crate::lexfn::{q, LexFn, LexPoint, PLBijection};
use crate::search::{
    block_partitions, enumerate_compatible_surjections, CompatibleSurjection, EnumOptions, PartitionDiagram,
    Universe,
};
use crate::oracle::{search_counterexample_fnz, search_counterexample_lex};
use crate::spacing::{find_block_embedding, EmbedParams, EmbeddingSearch};
use crate::term::{IntensionalEquation, Word};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Status {
    Valid,
    Fails,
    Unknown,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Mode {
    /// The search space was exhausted (or a verified witness was found).
    Complete,
    /// Some part of the space was cut off by a budget.
    Capped,
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct Stats {
    pub nodes: u64,
    pub failing_surjections: u64,
    pub embedding_searches: u64,
    pub elapsed_ms: u64,
    /// The witness came from the random probe rather than a diagram.
    #[serde(default)]
    pub probed: bool,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Verdict {
    pub status: Status,
    pub mode: Mode,
    pub witness: Option<Witness>,
    pub stats: Stats,
}

/// A counterexample: an assignment and a point below which every joinand
/// of one clause lands.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "space")]
pub enum Witness {
    FnZ {
        n: i64,
        /// The clause this witness refutes, in normal form.
        clause: String,
        assignment: BTreeMap<String, PeriodicFn>,
        point: i64,
        values: Vec<i64>,
    },
    FnQxZ {
        n: i64,
        clause: String,
        assignment: BTreeMap<String, LexFn>,
        point: LexPoint,
        values: Vec<LexPoint>,
    },
}

impl Witness {
    pub fn n(&self) -> i64 {
        match self {
            Witness::FnZ { n, .. } | Witness::FnQxZ { n, .. } => *n,
        }
    }
}

#[derive(Debug, Clone, Error, PartialEq, Eq)]
pub enum DecideError {
    #[error("assignment is missing variable {0}")]
    MissingVariable(String),
    #[error("period mismatch in witness")]
    PeriodMismatch,
    #[error("n = {0} is beyond the practical threshold; pass an override or force")]
    Impractical(BigUint),
    #[error("n must be at least 1")]
    BadN,
}

/// Work limits. `None` budgets are unlimited.
#[derive(Debug, Clone)]
pub struct DecideConfig {
    pub node_budget: Option<u64>,
    /// Work units per embedding search.
    pub embed_budget: u64,
    /// Largest n `decide_dlp` runs without being forced.
    pub dlp_threshold: u64,
    pub force: bool,
    /// Random assignments tried per clause before the diagram search. A
    /// probe can only produce (verified) failures; 0 disables it.
    pub probe: u64,
    pub seed: u64,
    /// Rewrite `x^(m)` to `x^(m mod 2n)` (taken in `(-n, n]`) before the
    /// diagram search; sound because both theories satisfy `x^(2n) = x`.
    pub reduce_exponents: bool,
}

impl Default for DecideConfig {
    fn default() -> Self {
        DecideConfig {
            node_budget: None,
            embed_budget: 200_000,
            dlp_threshold: 10_000,
            force: false,
            probe: 2_000,
            seed: crate::oracle::DEFAULT_SEED,
            reduce_exponents: true,
        }
    }
}

impl DecideConfig {
    pub fn capped(nodes: u64) -> Self {
        DecideConfig { node_budget: Some(nodes), ..Default::default() }
    }
}

// ---------------------------------------------------------------------------
// Evaluation

fn eval_word<T: Clone>(w: &Word, p: T, apply: &mut impl FnMut(usize, i64, T) -> T) -> T {
    w.iter().rev().fold(p, |acc, f| apply(f.var, f.exp, acc))
}

/// Values of the joinands at `p` in F_n(ℤ).
pub fn eval_fnz(eps: &IntensionalEquation, fs: &[PeriodicFn], p: i64) -> Vec<i64> {
    let mut cache: HashMap<(usize, i64), PeriodicFn> = HashMap::new();
    let mut apply = |v: usize, m: i64, x: i64| cache.entry((v, m)).or_insert_with(|| fs[v].iter_inv(m)).eval(x);
    eps.joinands.iter().map(|w| eval_word(w, p, &mut apply)).collect()
}

/// Values of the joinands at `p` in F_n(ℚ ×→ ℤ).
pub fn eval_lex(eps: &IntensionalEquation, fs: &[LexFn], p: &LexPoint) -> Vec<LexPoint> {
    let mut cache: HashMap<(usize, i64), LexFn> = HashMap::new();
    let mut apply =
        |v: usize, m: i64, x: LexPoint| cache.entry((v, m)).or_insert_with(|| fs[v].iter_inv(m)).eval(&x);
    eps.joinands.iter().map(|w| eval_word(w, p.clone(), &mut apply)).collect()
}

fn lookup<T: Clone>(eps: &IntensionalEquation, a: &BTreeMap<String, T>) -> Result<Vec<T>, DecideError> {
    eps.vars.iter().map(|v| a.get(v).cloned().ok_or_else(|| DecideError::MissingVariable(v.clone()))).collect()
}

/// Re-evaluate every joinand of `eps` at the witness point using only
/// function arithmetic; true iff all land strictly below the point.
pub fn verify_witness(eps: &IntensionalEquation, w: &Witness) -> Result<bool, DecideError> {
    match w {
        Witness::FnZ { n, assignment, point, .. } => {
            let fs = lookup(eps, assignment)?;
            if fs.iter().any(|f| f.n() != *n) {
                return Err(DecideError::PeriodMismatch);
            }
            Ok(eval_fnz(eps, &fs, *point).iter().all(|v| v < point))
        }
        Witness::FnQxZ { n, assignment, point, .. } => {
            let fs = lookup(eps, assignment)?;
            if fs.iter().any(|f| f.n() != *n) {
                return Err(DecideError::PeriodMismatch);
            }
            Ok(eval_lex(eps, &fs, point).iter().all(|v| v < point))
        }
    }
}

/// Whether the witness refutes some clause of the equation.
pub fn verify_against_clauses(clauses: &[IntensionalEquation], w: &Witness) -> Result<bool, DecideError> {
    let mut last_err = None;
    for c in clauses {
        match verify_witness(c, w) {
            Ok(true) => return Ok(true),
            Ok(false) => {}
            Err(e) => last_err = Some(e),
        }
    }
    match last_err {
        Some(e) if clauses.len() == 1 => Err(e),
        _ => Ok(false),
    }
}

// ---------------------------------------------------------------------------
// Realization

/// Turn a failing surjection and an embedding under which its maps are
/// n-periodic into an F_n(ℤ) counterexample. Panics if the result does not
/// verify: that would be a bug, never a legitimate outcome.
pub fn realize_fnz_witness(u: &Universe, cs: &CompatibleSurjection, e: &SpacingEmbedding, n: i64) -> Witness {
    let eps = &u.eps;
    let fs: Vec<PeriodicFn> = cs
        .fns
        .iter()
        .map(|g| extend_partial(&counterpart(g, e), n, true).expect("counterpart is n-periodic"))
        .collect();
    let point = e.at(cs.phi[u.one] as i64);
    // Every final subword evaluates to the embedded image of its class.
    for (i, pt) in u.points.iter().enumerate() {
        if let Some(word) = as_word(pt) {
            let val = eval_word(&word, point, &mut |v, m, x| fs[v].iter_inv(m).eval(x));
            assert_eq!(val, e.at(cs.phi[i] as i64), "diagram and function evaluation disagree");
        }
    }
    let values = eval_fnz(eps, &fs, point);
    let w = Witness::FnZ {
        n,
        clause: eps.to_string(),
        assignment: eps.vars.iter().cloned().zip(fs).collect(),
        point,
        values,
    };
    assert_eq!(verify_witness(eps, &w), Ok(true), "realized witness does not verify");
    w
}

fn as_word(p: &crate::term::DeltaPoint) -> Option<Word> {
    p.0.iter()
        .map(|l| match l {
            crate::term::Letter::Var(v, m) => Some(crate::term::Factor { var: *v, exp: *m }),
            _ => None,
        })
        .collect()
}

/// Turn a failing partition diagram with block-wise positions (each block
/// starting at 0) into an F_n(ℚ ×→ ℤ) counterexample: block `j` sits at the
/// rational `j`, each `g̃` is interpolated linearly, and each local map is
/// the periodic extension of its counterpart.
pub fn realize_lex_witness(u: &Universe, pd: &PartitionDiagram, pos: &[i64], n: i64) -> Witness {
    let eps = &u.eps;
    let cs = &pd.surjection;
    let mut fs = Vec::new();
    for var in 0..u.nvars() {
        let tilde = pd.tilde(var);
        let pts = tilde.iter().map(|(a, b)| (q(*a as i64), q(*b as i64))).collect();
        let tl = PLBijection::from_points(pts).expect("block map is an order-preserving injection");
        let mut comps = BTreeMap::new();
        for (&j, &tj) in &tilde {
            let h = pd
                .bar(var, j)
                .iter()
                .map(|(s, t)| (pos[pd.join(j, *s as usize)], pos[pd.join(tj, *t as usize)]))
                .collect();
            comps.insert(q(j as i64), extend_partial(&h, n, true).expect("local counterpart is n-periodic"));
        }
        fs.push(LexFn::new(n, tl, comps).expect("components share n"));
    }
    let one = cs.phi[u.one];
    let point = LexPoint::new(q(pd.block[one] as i64), pos[one]);
    let values = eval_lex(eps, &fs, &point);
    let w = Witness::FnQxZ {
        n,
        clause: eps.to_string(),
        assignment: eps.vars.iter().cloned().zip(fs).collect(),
        point,
        values,
    };
    assert_eq!(verify_witness(eps, &w), Ok(true), "realized witness does not verify");
    w
}

// ---------------------------------------------------------------------------
// Procedures

/// Exponents reduced mod 2n into `(-n, n]`.
pub fn reduce_exponents(eps: &IntensionalEquation, n: i64) -> IntensionalEquation {
    let r = |m: i64| {
        let m = m.rem_euclid(2 * n);
        if m > n { m - 2 * n } else { m }
    };
    let joinands = eps
        .joinands
        .iter()
        .map(|w| w.iter().map(|f| crate::term::Factor { var: f.var, exp: r(f.exp) }).collect())
        .collect();
    IntensionalEquation::new(joinands, eps.vars.clone(), eps.length)
}

/// Re-attach a witness found for a rewritten clause to the original one.
fn relabel(w: Witness, orig: &IntensionalEquation) -> Witness {
    let w = match w {
        Witness::FnZ { n, assignment, point, values, .. } => {
            Witness::FnZ { n, clause: orig.to_string(), assignment, point, values }
        }
        Witness::FnQxZ { n, assignment, point, values, .. } => {
            Witness::FnQxZ { n, clause: orig.to_string(), assignment, point, values }
        }
    };
    assert_eq!(verify_witness(orig, &w), Ok(true), "witness does not carry over to the original clause");
    w
}

#[derive(Clone, Copy, PartialEq, Eq)]
enum Space {
    FnZ,
    Lex,
}

fn decide(clauses: &[IntensionalEquation], n: i64, cfg: &DecideConfig, space: Space) -> Result<Verdict, DecideError> {
    if n < 1 {
        return Err(DecideError::BadN);
    }
    let start = Instant::now();
    let mut stats = Stats::default();
    if cfg.probe > 0 {
        let hit = clauses.iter().find_map(|eps| {
            search_counterexample_fnz(eps, n, cfg.probe, cfg.seed).or_else(|| match space {
                Space::FnZ => None,
                Space::Lex => search_counterexample_lex(eps, n, cfg.probe, cfg.seed),
            })
        });
        if let Some(w) = hit {
            stats.probed = true;
            stats.elapsed_ms = start.elapsed().as_millis() as u64;
            return Ok(Verdict { status: Status::Fails, mode: Mode::Complete, witness: Some(w), stats });
        }
    }
    let mut complete = true;
    for orig in clauses {
        let reduced = cfg.reduce_exponents.then(|| reduce_exponents(orig, n));
        let eps = reduced.as_ref().unwrap_or(orig);
        let u = Universe::new(eps);
        let remaining = cfg.node_budget.map(|b| b.saturating_sub(stats.nodes));
        if remaining == Some(0) {
            complete = false;
            break;
        }
        let opts = EnumOptions { only_failing: true, node_budget: remaining };
        let mut found = None;
        let mut embed_cut = false;
        let es = enumerate_compatible_surjections(&u, &opts, |cs| {
            stats.failing_surjections += 1;
            let blocks = match space {
                Space::FnZ => vec![vec![0; cs.q()]],
                Space::Lex => block_partitions(&cs),
            };
            for block in blocks {
                stats.embedding_searches += 1;
                let params = EmbedParams { n, cap: None, budget: cfg.embed_budget };
                match find_block_embedding(&cs.fns, &cs.chain, &block, &params) {
                    EmbeddingSearch::Found(pos) => {
                        let w = match space {
                            Space::FnZ => realize_fnz_witness(&u, &cs, &SpacingEmbedding { pos }, n),
                            Space::Lex => {
                                let pd = PartitionDiagram::new(cs.clone(), block).expect("admissible partition");
                                realize_lex_witness(&u, &pd, &pos, n)
                            }
                        };
                        found = Some(w);
                        return ControlFlow::Break(());
                    }
                    EmbeddingSearch::NoneExists => {}
                    EmbeddingSearch::Budget => embed_cut = true,
                }
            }
            ControlFlow::Continue(())
        });
        stats.nodes += es.nodes;
        if let Some(w) = found {
            let w = relabel(w, orig);
            stats.elapsed_ms = start.elapsed().as_millis() as u64;
            return Ok(Verdict { status: Status::Fails, mode: Mode::Complete, witness: Some(w), stats });
        }
        if !es.exhausted || embed_cut {
            complete = false;
        }
    }
    stats.elapsed_ms = start.elapsed().as_millis() as u64;
    let (status, mode) = if complete { (Status::Valid, Mode::Complete) } else { (Status::Unknown, Mode::Capped) };
    Ok(Verdict { status, mode, witness: None, stats })
}

/// Decide the clauses in F_n(ℤ).
pub fn decide_fnz(clauses: &[IntensionalEquation], n: i64, cfg: &DecideConfig) -> Result<Verdict, DecideError> {
    decide(clauses, n, cfg, Space::FnZ)
}

/// Decide the clauses in LP_n (equivalently in F_n(ℚ ×→ ℤ)).
pub fn decide_lpn(clauses: &[IntensionalEquation], n: i64, cfg: &DecideConfig) -> Result<Verdict, DecideError> {
    decide(clauses, n, cfg, Space::Lex)
}

/// `2^|ε| · |ε|⁴`.
pub fn dlp_n(length: usize) -> BigUint {
    BigUint::from(2u8).pow(length as u32) * BigUint::from(length).pow(4)
}

/// Decide in DLP through F_n(ℤ) with `n = 2^|ε| |ε|⁴` (or the override).
/// Returns the n used alongside the verdict.
pub fn decide_dlp(
    clauses: &[IntensionalEquation],
    n_override: Option<i64>,
    cfg: &DecideConfig,
) -> Result<(BigUint, Verdict), DecideError> {
    let length = clauses.iter().map(|c| c.length).max().unwrap_or(0);
    let exact = dlp_n(length);
    let n = match n_override {
        Some(n) => n,
        None => {
            if exact > BigUint::from(cfg.dlp_threshold) && !cfg.force {
                return Err(DecideError::Impractical(exact));
            }
            exact.to_i64().ok_or(DecideError::Impractical(exact.clone()))?
        }
    };
    Ok((exact, decide_fnz(clauses, n, cfg)?))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::term::{parse, to_intensional};

    fn clauses(s: &str) -> Vec<IntensionalEquation> {
        to_intensional(&parse(s).unwrap())
    }

    #[test]
    fn one_le_x_fails_with_trace_witness() {
        let cfg = DecideConfig { probe: 0, ..Default::default() };
        let v = decide_fnz(&clauses("1 <= x"), 1, &cfg).unwrap();
        assert!(!v.stats.probed);
        assert_eq!(v.status, Status::Fails);
        match v.witness.unwrap() {
            Witness::FnZ { point, values, .. } => {
                assert_eq!(point, 1);
                assert_eq!(values, vec![0]);
            }
            w => panic!("{w:?}"),
        }
    }

    #[test]
    fn realization_trace() {
        let c = &clauses("1 <= x")[0];
        let u = Universe::new(c);
        let phi = if u.points[0].0.is_empty() { vec![1, 0] } else { vec![0, 1] };
        let cs = CompatibleSurjection::from_phi(&u, phi).unwrap();
        let w = realize_fnz_witness(&u, &cs, &SpacingEmbedding::identity(2), 2);
        let Witness::FnZ { assignment, point, .. } = &w else { panic!() };
        assert_eq!(*point, 1);
        assert_eq!(assignment["x"].eval(1), 0);
    }

    #[test]
    fn identity_and_shifted_witnesses_fail_verification() {
        let c = &clauses("1 <= x")[0];
        let mut w = Witness::FnZ {
            n: 1,
            clause: c.to_string(),
            assignment: BTreeMap::from([("x".to_string(), PeriodicFn::identity(1))]),
            point: 0,
            values: vec![0],
        };
        assert_eq!(verify_witness(c, &w), Ok(false));
        if let Witness::FnZ { assignment, .. } = &mut w {
            assignment.insert("x".into(), PeriodicFn::translation(1, -1));
        }
        assert_eq!(verify_witness(c, &w), Ok(true));
        let y = &clauses("1 <= y")[0];
        assert_eq!(verify_witness(y, &w), Err(DecideError::MissingVariable("y".into())));
    }

    #[test]
    fn small_valid_cases() {
        let cfg = DecideConfig::default();
        for (s, n) in [("1 <= x^(-1) x", 2), ("1 <= x x^l", 2), ("x^l^r = x", 2), ("x^l = x^r", 1)] {
            assert_eq!(decide_fnz(&clauses(s), n, &cfg).unwrap().status, Status::Valid, "fnz {s}");
            assert_eq!(decide_lpn(&clauses(s), n, &cfg).unwrap().status, Status::Valid, "lpn {s}");
        }
    }

    #[test]
    fn dlp_plumbing() {
        assert_eq!(dlp_n(3), BigUint::from(648u32));
        let cfg = DecideConfig::default();
        assert!(matches!(decide_dlp(&clauses("x y = y x"), None, &cfg), Err(DecideError::Impractical(_))));
        let (n, v) = decide_dlp(&clauses("1 <= x"), Some(1), &cfg).unwrap();
        assert_eq!((n, v.status), (BigUint::from(648u32), Status::Fails));
    }

    #[test]
    fn probe_and_diagram_paths_both_refute() {
        let cs = clauses("x y = y x");
        let probed = decide_lpn(&cs, 1, &DecideConfig::default()).unwrap();
        let diagram = decide_lpn(&cs, 1, &DecideConfig { probe: 0, ..Default::default() }).unwrap();
        for v in [&probed, &diagram] {
            assert_eq!(v.status, Status::Fails);
            assert_eq!(verify_against_clauses(&cs, v.witness.as_ref().unwrap()), Ok(true));
        }
        assert!(probed.stats.probed && !diagram.stats.probed);
    }

    #[test]
    fn exponent_reduction() {
        let c = &clauses("1 <= x^(-1) x^(4) y^(3)")[0];
        assert_eq!(reduce_exponents(c, 2).to_string(), "1 <= x^(-1) x y^(-1)");
        assert_eq!(reduce_exponents(c, 1).to_string(), "1 <= x^(1) x y^(1)");
        let cs = clauses("x^(4) = x");
        assert_eq!(decide_fnz(&cs, 2, &DecideConfig::default()).unwrap().status, Status::Valid);
        let raw = DecideConfig { reduce_exponents: false, ..DecideConfig::capped(2_000) };
        assert_eq!(decide_fnz(&cs, 2, &raw).unwrap().status, Status::Unknown);
        // failures found on the rewritten clause are reported against the original
        let v = decide_fnz(&clauses("x^(3) <= x"), 1, &DecideConfig { probe: 0, ..Default::default() }).unwrap();
        let w = v.witness.unwrap();
        assert_eq!(verify_against_clauses(&clauses("x^(3) <= x"), &w), Ok(true));
    }

    #[test]
    fn capped_runs_never_claim_valid() {
        let v = decide_fnz(&clauses("x y = y x"), 1, &DecideConfig::capped(10)).unwrap();
        assert_eq!((v.status, v.mode), (Status::Unknown, Mode::Capped));
    }
}
